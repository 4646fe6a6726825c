"""
Hua's formula engine
Double partitions, exact term values, HN / slope-tie buckets, Kac polynomials
and the degree / codimension and stabilisation verifiers
"""

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Dict, Iterator, List, Optional, Tuple

import exact_poly as ep
from errors import ConsistencyError, InputError
from exact_poly import LaurentPolynomial
from hn_strata import (
    HNType, check_theta, codim_moment, edge_threshold, epsilon, is_generic,
    slope, threshold_met,
)
from quiver_core import (
    DimVector, Quiver, RootClass, classify_root, dot, euler_form, is_indivisible,
    leq, multiply_edges, norm1, sub_vectors, tits_p, vsub,
)

logger = logging.getLogger(__name__)

OrderedPartition = Tuple[DimVector, ...]

Q_MINUS_ONE = LaurentPolynomial({1: 1, 0: -1})


@dataclass(frozen=True)
class DoublePartition:
    """Composition of alpha with an ordered partition refining each part"""

    composition: Tuple[DimVector, ...]
    refinements: Tuple[OrderedPartition, ...]

    def flattened(self):
        return [d for refinement in self.refinements for d in refinement]


@dataclass(frozen=True)
class BucketKey:
    kind: str  # "HN" or "U"
    parts: Tuple[DimVector, ...]

    def __str__(self):
        body = ", ".join("(" + ",".join(map(str, p)) + ")" for p in self.parts)
        return f"{self.kind}({body})"


# ordered partitions and compositions

def _componentwise_min(v, w):
    return tuple(min(a, b) for a, b in zip(v, w))


@lru_cache(maxsize=None)
def _ordered_partitions(beta, bound):
    if not any(beta):
        return ((),)
    result = []
    for u in reversed(sub_vectors(_componentwise_min(beta, bound))):
        if not any(u):
            continue
        result.extend((u,) + rest for rest in _ordered_partitions(vsub(beta, u), u))
    return tuple(result)


def enumerate_ordered_partitions(beta) -> List[OrderedPartition]:
    """
    Weakly decreasing chains of nonzero vectors summing to beta

    Equal consecutive parts are allowed. The trivial chain (beta,) comes first.
    """
    beta = tuple(beta)
    if any(x < 0 for x in beta) or not any(beta):
        raise InputError(f"Ordered partitions need a nonzero nonnegative vector, got {beta}")
    return list(_ordered_partitions(beta, beta))


@lru_cache(maxsize=None)
def _compositions(alpha):
    if not any(alpha):
        return ((),)
    result = []
    for u in reversed(sub_vectors(alpha)):
        if not any(u):
            continue
        result.extend((u,) + rest for rest in _compositions(vsub(alpha, u)))
    return tuple(result)


def enumerate_compositions(alpha) -> List[Tuple[DimVector, ...]]:
    """Ordered tuples of nonzero vectors summing to alpha"""
    alpha = tuple(alpha)
    if any(x < 0 for x in alpha) or not any(alpha):
        raise InputError(f"Compositions need a nonzero nonnegative vector, got {alpha}")
    return list(_compositions(alpha))


def iter_double_partitions(alpha) -> Iterator[DoublePartition]:
    """Every double partition of alpha in a fixed order"""
    for composition in enumerate_compositions(alpha):
        yield from _refine(composition, 0, ())


def _refine(composition, i, chosen):
    if i == len(composition):
        yield DoublePartition(composition, chosen)
        return
    for refinement in _ordered_partitions(composition[i], composition[i]):
        yield from _refine(composition, i + 1, chosen + (refinement,))


# term values

def _differences(refinement):
    """delta^k = d^k - d^(k+1), the last one being d^s itself"""
    return [vsub(d, nxt) for d, nxt in zip(refinement, refinement[1:])] + [refinement[-1]]


@lru_cache(maxsize=None)
def _cleared_ratio(alpha, deltas):
    denominator = ep.ONE
    for delta in deltas:
        denominator = ep.mul(denominator, ep.phi_vec(delta))
    return ep.exact_div(ep.phi_vec(alpha), denominator)


def _refinement_sign_and_exponent(Q, refinement):
    """Sign and q-exponent left after clearing 1/phi(q^-1) factors for one ordered partition"""
    sign, exponent = 1, 0
    for delta in _differences(refinement):
        for m in delta:
            s, e = ep.monomial_reciprocal_phi(m)
            sign *= s
            exponent += e
    exponent -= sum(euler_form(Q, d, d) for d in refinement)
    return sign, exponent


def term_value(Q: Quiver, pi: DoublePartition) -> LaurentPolynomial:
    """
    phi_alpha(q) times the summand of Hua's formula indexed by pi

    Raises:
        ConsistencyError (NonExactDivision) if the cleared denominator fails to divide phi_alpha
    """
    alpha = tuple(map(sum, zip(*pi.composition)))
    length = len(pi.composition)
    sign, exponent = 1, 0
    deltas = []
    for refinement in pi.refinements:
        s, e = _refinement_sign_and_exponent(Q, refinement)
        sign *= s
        exponent += e
        deltas.extend(d for d in _differences(refinement) if any(d))
    coeff = Fraction((-1) ** (length + 1), length) * sign
    ratio = _cleared_ratio(alpha, tuple(sorted(deltas)))
    return ep.scale(ep.shift(ratio, exponent), coeff)


def bucket_key(pi: DoublePartition, theta) -> BucketKey:
    """Order all refined parts by slope; distinct slopes give an HN key, ties a U key"""
    parts = pi.flattened()
    slopes = [slope(theta, d) for d in parts]
    ordered = tuple(d for _, d in sorted(zip(slopes, parts), key=lambda pair: (-pair[0], pair[1])))
    kind = "HN" if len(set(slopes)) == len(slopes) else "U"
    return BucketKey(kind, ordered)


# Kac polynomial

@lru_cache(maxsize=None)
def q_binomial_vec(v, u) -> LaurentPolynomial:
    """phi_v / (phi_u phi_(v-u)), a product of Gaussian binomials"""
    return ep.exact_div(ep.phi_vec(v), ep.mul(ep.phi_vec(u), ep.phi_vec(vsub(v, u))))


@lru_cache(maxsize=None)
def _cleared_part_sum(Q, beta):
    """phi_beta times the inner sum of Hua's formula for one part beta"""
    total = ep.ZERO
    for refinement in _ordered_partitions(beta, beta):
        sign, exponent = _refinement_sign_and_exponent(Q, refinement)
        deltas = tuple(sorted(d for d in _differences(refinement) if any(d)))
        total = ep.add(total, ep.scale(ep.shift(_cleared_ratio(beta, deltas), exponent), sign))
    return total


def hua_total(Q: Quiver, alpha) -> LaurentPolynomial:
    """
    Sum of all term values for alpha, by recursion over sub-vectors

    D_1(v) = C(v), D_l(v) = sum_u qbinom(v, u) C(u) D_(l-1)(v - u) and
    total = sum_l (-1)^(l+1)/l D_l(alpha); C is the cleared one-part sum.
    """
    alpha = tuple(alpha)
    subs = [v for v in sub_vectors(alpha) if any(v)]
    current = {v: _cleared_part_sum(Q, v) for v in subs}
    total = current[alpha]
    for length in range(2, norm1(alpha) + 1):
        nxt = {}
        for v in subs:
            acc = ep.ZERO
            for u in subs:
                if u == v or not leq(u, v):
                    continue
                rest = current.get(vsub(v, u))
                if rest is None or rest.is_zero():
                    continue
                acc = ep.add(acc, ep.mul(ep.mul(q_binomial_vec(v, u), _cleared_part_sum(Q, u)), rest))
            nxt[v] = acc
        current = nxt
        total = ep.add(total, ep.scale(current[alpha], Fraction((-1) ** (length + 1), length)))
    return total


def _require_indivisible(Q, alpha):
    alpha = Q.dim_vector(alpha, allow_zero=False)
    if not is_indivisible(alpha):
        raise InputError(f"{alpha} is divisible: plethystic corrections required, out of scope")
    return alpha


def _kac_from_total(alpha, total):
    kac = ep.exact_div(ep.mul(total, Q_MINUS_ONE), ep.phi_vec(alpha))
    if not ep.is_integral_polynomial(kac):
        raise ConsistencyError(f"Kac polynomial of {alpha} is not an integer polynomial: {kac}")
    return kac


@dataclass
class KacResult:
    alpha: DimVector
    polynomial: LaurentPolynomial
    root_class: RootClass
    expected_degree: int
    degree: Optional[int]
    leading_coefficient: Optional[int]
    nonnegative: bool
    kac_theorem_ok: bool

    def to_dict(self):
        return {
            "alpha": list(self.alpha),
            "polynomial": ep.to_json(self.polynomial),
            "root_class": self.root_class.value,
            "expected_degree": self.expected_degree,
            "degree": self.degree,
            "leading_coefficient": self.leading_coefficient,
            "nonnegative": self.nonnegative,
            "kac_theorem_ok": self.kac_theorem_ok,
        }


def kac_polynomial(Q: Quiver, alpha) -> KacResult:
    """
    A_alpha(q) for an indivisible alpha via Hua's formula

    Raises:
        InputError for divisible alpha
        ConsistencyError if the result is not an integer polynomial
    """
    alpha = _require_indivisible(Q, alpha)
    kac = _kac_from_total(alpha, hua_total(Q, alpha))
    root = classify_root(Q, alpha)
    expected = tits_p(Q, alpha)
    nonnegative = all(c >= 0 for _, c in kac.terms)
    if kac.is_zero():
        deg, lead = None, None
        ok = root is RootClass.NOT_ROOT
    else:
        deg, lead = ep.degree(kac), int(ep.leading_coefficient(kac))
        ok = root is not RootClass.NOT_ROOT and deg == expected and lead == 1 and nonnegative
    logger.debug("A_%s = %s (%s)", alpha, kac, root.value)
    return KacResult(alpha, kac, root, expected, deg, lead, nonnegative, ok)


# stratified decomposition

def degree_linear_form(Q: Quiver, alpha, d: HNType) -> Tuple[int, Tuple[int, ...]]:
    """
    Degree of a bucket as an affine function of the arrow multiplicities

    Returns:
        (constant, coefficient per arrow record) with
        l(d*) = constant + sum_a mult_a * coefficient_a
    """
    constant = ep.b_exponent(alpha) - sum(dot(p, p) for p in d.parts)
    coefficients = tuple(sum(p[s] * p[t] for p in d.parts) for s, t, _ in Q.arrow_indices)
    return constant, coefficients


@dataclass
class Bucket:
    key: BucketKey
    polynomial: LaurentPolynomial
    degree: Optional[int]
    # HN buckets only
    codim_moment: Optional[int] = None
    epsilon: Optional[int] = None
    threshold: Optional[int] = None
    threshold_met: Optional[bool] = None
    predicted_degree: Optional[int] = None
    degree_drop: Optional[int] = None
    predicted_drop: Optional[int] = None
    top_cancelled: Optional[bool] = None
    thm_6_7: Optional[str] = None

    def to_dict(self):
        return {
            "key": str(self.key),
            "kind": self.key.kind,
            "parts": [list(p) for p in self.key.parts],
            "polynomial": ep.to_json(self.polynomial),
            "degree": self.degree,
            "codim_moment": self.codim_moment,
            "epsilon": self.epsilon,
            "threshold": self.threshold,
            "threshold_met": self.threshold_met,
            "predicted_degree": self.predicted_degree,
            "degree_drop": self.degree_drop,
            "predicted_drop": self.predicted_drop,
            "top_cancelled": self.top_cancelled,
            "thm_6_7": self.thm_6_7,
        }


@dataclass
class DecompositionReport:
    alpha: DimVector
    theta: Tuple[int, ...]
    generic: bool
    buckets: List[Bucket]
    total: LaurentPolynomial
    kac: LaurentPolynomial
    l_alpha: int
    term_count: int

    def bucket(self, kind, parts) -> Optional[Bucket]:
        key = BucketKey(kind, tuple(tuple(p) for p in parts))
        return next((b for b in self.buckets if b.key == key), None)

    @property
    def hn_buckets(self):
        return [b for b in self.buckets if b.key.kind == "HN"]

    @property
    def u_buckets(self):
        return [b for b in self.buckets if b.key.kind == "U"]

    def to_dict(self):
        return {
            "alpha": list(self.alpha),
            "theta": list(self.theta),
            "generic": self.generic,
            "l_alpha": self.l_alpha,
            "term_count": self.term_count,
            "total": ep.to_json(self.total),
            "kac": ep.to_json(self.kac),
            "buckets": [b.to_dict() for b in self.buckets],
        }


def _bucket_order(key):
    return (0 if key.kind == "HN" else 1, len(key.parts), key.parts)


def stratified_decomposition(Q: Quiver, alpha, theta) -> DecompositionReport:
    """
    Group Hua's terms by HN type (distinct slopes) or slope-tie multiset

    Raises:
        InputError for divisible alpha or theta.alpha != 0
        ConsistencyError if the buckets do not add up to phi_alpha A_alpha / (q - 1)
    """
    alpha = _require_indivisible(Q, alpha)
    theta = check_theta(Q, theta)
    if dot(theta, alpha) != 0:
        raise InputError(f"theta.alpha must be 0, got {dot(theta, alpha)}")

    sums: Dict[BucketKey, LaurentPolynomial] = {}
    count = 0
    for pi in iter_double_partitions(alpha):
        key = bucket_key(pi, theta)
        sums[key] = ep.add(sums.get(key, ep.ZERO), term_value(Q, pi))
        count += 1
    logger.debug("stratified_decomposition %s: %d terms in %d buckets", alpha, count, len(sums))

    total = ep.ZERO
    for poly in sums.values():
        total = ep.add(total, poly)
    independent = hua_total(Q, alpha)
    if total != independent:
        raise ConsistencyError(f"Bucket sum {total} differs from the Hua total {independent}")
    kac = _kac_from_total(alpha, total)

    trivial = sums[BucketKey("HN", (alpha,))]
    l_alpha = ep.degree(trivial)
    buckets = []
    for key in sorted(sums, key=_bucket_order):
        poly = sums[key]
        bucket = Bucket(key, poly, None if poly.is_zero() else ep.degree(poly))
        if key.kind == "HN":
            d = HNType(key.parts)
            constant, coefficients = degree_linear_form(Q, alpha, d)
            bucket.codim_moment = codim_moment(Q, d)
            bucket.epsilon = epsilon(d)
            bucket.threshold = edge_threshold(d)
            bucket.threshold_met = threshold_met(Q, d)
            bucket.predicted_degree = constant + sum(m * c for (_, _, m), c in zip(Q.arrow_indices, coefficients))
            bucket.predicted_drop = l_alpha - bucket.predicted_degree
            if bucket.degree is None:
                bucket.thm_6_7 = "vanished"
            else:
                bucket.degree_drop = l_alpha - bucket.degree
                bucket.top_cancelled = bucket.degree < bucket.predicted_degree
                bucket.thm_6_7 = "pass" if bucket.degree_drop == bucket.codim_moment else "fail"
        buckets.append(bucket)
    return DecompositionReport(alpha, theta, is_generic(theta, alpha), buckets, total, kac, l_alpha, count)


# verifiers

@dataclass
class Thm67Row:
    hn_type: str
    l_alpha: int
    l_type: int
    degree_drop: int
    predicted_drop: int
    top_cancelled: bool
    codim_moment: int
    epsilon: int
    threshold: Optional[int]
    threshold_met: bool
    status: str


@dataclass
class Thm67Report:
    alpha: List[int]
    theta: List[int]
    rows: List[Thm67Row]

    @property
    def passed_at_threshold(self):
        """Every bucket meeting the edge threshold satisfies the equality"""
        return all(r.status == "pass" for r in self.rows if r.threshold_met)

    @property
    def all_passed(self):
        return all(r.status == "pass" for r in self.rows)

    def to_dict(self):
        return {
            "alpha": self.alpha,
            "theta": self.theta,
            "passed_at_threshold": self.passed_at_threshold,
            "all_passed": self.all_passed,
            "rows": [vars(r) for r in self.rows],
        }


def verify_thm_6_7(Q: Quiver, alpha, theta) -> Thm67Report:
    """Compare l(alpha) - l(d*) with the moment-map codimension for every nonzero HN bucket"""
    report = stratified_decomposition(Q, alpha, theta)
    rows = []
    for b in report.hn_buckets:
        if b.degree is None:
            continue
        rows.append(Thm67Row(
            hn_type=str(b.key), l_alpha=report.l_alpha, l_type=b.degree,
            degree_drop=b.degree_drop, predicted_drop=b.predicted_drop,
            top_cancelled=b.top_cancelled, codim_moment=b.codim_moment, epsilon=b.epsilon,
            threshold=b.threshold, threshold_met=b.threshold_met, status=b.thm_6_7,
        ))
    return Thm67Report(list(report.alpha), list(report.theta), rows)


@dataclass
class ShiftRow:
    key: str
    kind: str
    normalized_1: LaurentPolynomial
    normalized_2: LaurentPolynomial
    status: str

    def to_dict(self):
        return {
            "key": self.key, "kind": self.kind, "status": self.status,
            "normalized_1": ep.to_json(self.normalized_1),
            "normalized_2": ep.to_json(self.normalized_2),
        }


@dataclass
class ShiftReport:
    n1: int
    n2: int
    rows: List[ShiftRow] = field(default_factory=list)

    @property
    def passed(self):
        return all(r.status == "pass" for r in self.rows if r.kind == "HN")

    def to_dict(self):
        return {"n1": self.n1, "n2": self.n2, "passed": self.passed, "rows": [r.to_dict() for r in self.rows]}


def _normalize(bucket):
    if bucket is None or bucket.degree is None:
        return ep.ZERO
    return ep.shift(bucket.polynomial, -bucket.degree)


def verify_thm_6_8_shift(Q: Quiver, alpha, theta, n1: int, n2: int) -> ShiftReport:
    """
    Check that bucket polynomials divided by their leading monomial power do not depend on n

    HN buckets must match after the shift; U buckets are only classified.
    """
    first = stratified_decomposition(multiply_edges(Q, n1), alpha, theta)
    second = stratified_decomposition(multiply_edges(Q, n2), alpha, theta)
    by_key_1 = {b.key: b for b in first.buckets}
    by_key_2 = {b.key: b for b in second.buckets}
    report = ShiftReport(n1, n2)
    for key in sorted(set(by_key_1) | set(by_key_2), key=_bucket_order):
        b1, b2 = by_key_1.get(key), by_key_2.get(key)
        p1, p2 = _normalize(b1), _normalize(b2)
        if key.kind == "HN":
            status = "pass" if p1 == p2 else "fail"
        else:
            raw1 = b1.polynomial if b1 else ep.ZERO
            raw2 = b2.polynomial if b2 else ep.ZERO
            status = "unshifted-equal" if raw1 == raw2 else ("shift-equal" if p1 == p2 else "n-dependent")
        report.rows.append(ShiftRow(str(key), key.kind, p1, p2, status))
    return report


@dataclass
class StabilizationReport:
    alpha: List[int]
    k: int
    ns: List[int]
    low: List[List[int]]
    top: List[List[int]]
    low_stable_from: Optional[int]
    top_stable_from: Optional[int]

    def to_dict(self):
        return vars(self).copy()


def _stable_from(ns, rows):
    if not ns:
        return None
    start = ns[-1]
    for n, row in zip(reversed(ns), reversed(rows)):
        if row != rows[-1]:
            break
        start = n
    return start


def stabilization_study(Q: Quiver, alpha, n_from: int, n_to: int, k: int) -> StabilizationReport:
    """
    Low and top coefficients of A_{Q_n, alpha} for n in [n_from, n_to]

    low[n] holds the coefficients of 1, q, ..., q^k; top[n] those of the
    degree-reversed polynomial. stable_from is the least n from which every
    row equals the last one.
    """
    alpha = _require_indivisible(Q, alpha)
    if k < 0:
        raise InputError(f"k must be nonnegative, got {k}")
    if n_from < 1 or n_to < n_from:
        raise InputError(f"Need 1 <= n_from <= n_to, got {n_from}..{n_to}")
    ns, low, top = [], [], []
    for n in range(n_from, n_to + 1):
        kac = kac_polynomial(multiply_edges(Q, n), alpha).polynomial
        ns.append(n)
        low.append([int(c) for c in ep.coefficients(kac, 0, k + 1)])
        if kac.is_zero():
            top.append([0] * (k + 1))
        else:
            deg = ep.degree(kac)
            top.append([int(kac.coefficient(deg - j)) for j in range(k + 1)])
    return StabilizationReport(list(alpha), k, ns, low, top, _stable_from(ns, low), _stable_from(ns, top))
