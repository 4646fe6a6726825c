"""
Harder-Narasimhan strata of the moment-map zero fiber
Slopes, asymptotic HN types, flag dimension counts and strata (co)dimensions
"""

import logging
from dataclasses import dataclass, asdict
from fractions import Fraction
from functools import lru_cache
from math import ceil
from typing import List, Optional, Tuple

from sympy import QQ
from sympy.polys.matrices import DomainMatrix

import config
from errors import ConsistencyError, GuardExceeded, InputError
from quiver_core import (
    DimVector, Quiver, dim_mu_zero, dim_rep, dot, double_quiver, euler_form, thm_2_5_hypothesis,
    norm1, sub_vectors, sym_euler_form, vsub,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class HNType:
    """Ordered tuple of nonzero dimension vectors (the blocks of a flag)"""

    parts: Tuple[DimVector, ...]

    def __post_init__(self):
        parts = tuple(tuple(p) for p in self.parts)
        object.__setattr__(self, "parts", parts)
        if not parts:
            raise InputError("An HN type needs at least one part")
        width = len(parts[0])
        for p in parts:
            if len(p) != width:
                raise InputError(f"All parts must have {width} coordinates: {parts}")
            if any(x < 0 for x in p) or not any(p):
                raise InputError(f"Parts must be nonzero and nonnegative: {parts}")

    @property
    def weight(self) -> DimVector:
        return tuple(map(sum, zip(*self.parts)))

    @property
    def length(self):
        return len(self.parts)

    def __str__(self):
        return "(" + ", ".join("(" + ",".join(map(str, p)) + ")" for p in self.parts) + ")"


def check_theta(Q: Quiver, theta):
    theta = tuple(theta)
    if len(theta) != Q.size:
        raise InputError(f"Stability needs {Q.size} coordinates, got {len(theta)}")
    if any(isinstance(t, bool) or not isinstance(t, int) for t in theta):
        raise InputError(f"Stability coordinates must be integers: {theta}")
    return theta


def slope(theta, beta) -> Fraction:
    """mu(beta) = theta.beta / |beta|_1"""
    if not any(beta):
        raise InputError("Slope of the zero vector is undefined")
    return Fraction(dot(theta, beta), norm1(beta))


def is_generic(theta, alpha) -> bool:
    """theta.alpha = 0 and theta.beta != 0 for every 0 < beta < alpha"""
    if dot(theta, alpha) != 0:
        return False
    return all(dot(theta, b) != 0 for b in sub_vectors(tuple(alpha)) if any(b) and b != tuple(alpha))


def flag_type_from_blocks(blocks) -> HNType:
    """Build a flag type from user-supplied blocks, without any slope check"""
    return HNType(tuple(tuple(b) for b in blocks))


def make_hn_type(theta, parts) -> HNType:
    """Build an HN type and check that slopes strictly decrease"""
    d = HNType(parts)
    slopes = [slope(theta, p) for p in d.parts]
    if any(a <= b for a, b in zip(slopes, slopes[1:])):
        raise InputError(f"Slopes of {d} are not strictly decreasing under theta={tuple(theta)}")
    return d


def enumerate_hn_types(Q: Quiver, alpha, theta) -> List[HNType]:
    """
    All asymptotic HN types of weight alpha

    Every ordered decomposition of alpha into nonzero vectors with strictly
    decreasing slopes; sorted by number of parts, then lexicographically.
    """
    alpha = Q.dim_vector(alpha, allow_zero=False)
    theta = check_theta(Q, theta)
    if dot(theta, alpha) != 0:
        raise InputError(f"theta.alpha must be 0, got {dot(theta, alpha)}")
    found = _hn_chains(alpha, theta, None)
    types = sorted(found, key=lambda parts: (len(parts), parts))
    logger.debug("enumerate_hn_types %s theta=%s: %d types", alpha, theta, len(types))
    return [HNType(parts) for parts in types]


@lru_cache(maxsize=None)
def _hn_chains(remaining, theta, upper):
    chains = []
    for u in sub_vectors(remaining):
        if not any(u):
            continue
        s = slope(theta, u)
        if upper is not None and s >= upper:
            continue
        if u == remaining:
            chains.append((u,))
        else:
            chains.extend((u,) + rest for rest in _hn_chains(vsub(remaining, u), theta, s))
    return tuple(chains)


def epsilon(d: HNType) -> int:
    """min over vertices of min(first block, last block)"""
    first, last = d.parts[0], d.parts[-1]
    return min(min(a, b) for a, b in zip(first, last))


def end_flag_dim(d: HNType) -> int:
    """dim End(alpha)_{F*}: block upper triangular endomorphisms"""
    parts = d.parts
    return sum(dot(parts[k], parts[l]) for k in range(len(parts)) for l in range(k, len(parts)))


def rep_flag_dim(Q: Quiver, d: HNType) -> int:
    """sum over arrows a: i -> j (with multiplicity) of sum_{k <= l} d^k_i d^l_j"""
    parts = d.parts
    total = 0
    for s, t, m in Q.arrow_indices:
        total += m * sum(parts[k][s] * parts[l][t] for k in range(len(parts)) for l in range(k, len(parts)))
    return total


def constant_C(Q: Quiver, d: HNType) -> int:
    return rep_flag_dim(Q, d) - end_flag_dim(d)


def _pair_sum(form, Q, d):
    parts = d.parts
    return sum(form(Q, parts[k], parts[l]) for k in range(len(parts)) for l in range(k + 1, len(parts)))


def codim_rep(Q: Quiver, d: HNType) -> int:
    """Codimension of the HN stratum in Rep(Q, alpha)"""
    return -_pair_sum(euler_form, Q, d)


def codim_rep_double(Q: Quiver, d: HNType) -> int:
    """Codimension of the HN stratum in Rep(double Q, alpha)"""
    return -_pair_sum(euler_form, double_quiver(Q), d)


def codim_moment(Q: Quiver, d: HNType) -> int:
    """Codimension of the HN stratum in mu^-1(0): -sum_{k<l} (d^k, d^l)"""
    value = -_pair_sum(sym_euler_form, Q, d)
    alpha = d.weight
    other = codim_rep_double(Q, d) + end_flag_dim(d) - dot(alpha, alpha)
    if value != other:
        raise ConsistencyError(f"codim_moment routes disagree for {d}: {value} != {other}")
    return value


def codim_gap(Q: Quiver, d: HNType) -> int:
    """codim in Rep(double Q) minus codim in mu^-1(0); equals dim End(alpha) - dim End(alpha)_{F*}"""
    alpha = d.weight
    gap = codim_rep_double(Q, d) - codim_moment(Q, d)
    if gap != dot(alpha, alpha) - end_flag_dim(d):
        raise ConsistencyError(f"codimension gap mismatch for {d}")
    return gap


def dim_R_HN(Q: Quiver, d: HNType) -> int:
    return dim_rep(Q, d.weight) - codim_rep(Q, d)


def dim_T(Q: Quiver, d: HNType) -> int:
    """
    Dimension of the HN stratum of mu^-1(0), computed two ways

    Raises:
        ConsistencyError when 1 + dim R_HN + C differs from dim mu^-1(0) - codim
    """
    via_constant = 1 + dim_R_HN(Q, d) + constant_C(Q, d)
    via_codim = dim_mu_zero(Q, d.weight) - codim_moment(Q, d)
    if via_constant != via_codim:
        raise ConsistencyError(f"dim_T routes disagree for {d}: {via_constant} != {via_codim}")
    return via_constant


def edge_threshold(d: HNType) -> Optional[int]:
    """ceil(end_flag_dim / epsilon); None (undefined) when epsilon is 0"""
    eps = epsilon(d)
    if eps == 0:
        return None
    return ceil(Fraction(end_flag_dim(d), eps))


def threshold_met(Q: Quiver, d: HNType) -> bool:
    threshold = edge_threshold(d)
    least = Q.min_multiplicity
    return threshold is not None and least is not None and least >= threshold


def _block_of(sizes):
    """Row index -> block index for one vertex"""
    blocks = []
    for k, size in enumerate(sizes):
        blocks.extend([k] * size)
    return blocks


def s0_commutant_dim(Q: Quiver, d: HNType) -> int:
    """
    Dimension of the flag-compatible endomorphisms commuting with every flag-compatible representation

    Unknowns are the free entries of block upper triangular g_i; each arrow
    shape contributes g_t E - E g_s = 0 for every basis matrix E of its
    flag-compatible hom-space. Multiplicities add no constraints.
    """
    if len(d.weight) != Q.size:
        raise InputError(f"Flag type has {len(d.weight)} coordinates, quiver has {Q.size} vertices")
    unknowns = end_flag_dim(d)
    bound = config.scaled(config.S0_MAX_UNKNOWNS)
    if unknowns > bound:
        raise GuardExceeded("s0 unknowns", unknowns, bound)

    alpha = d.weight
    blocks = [_block_of([p[i] for p in d.parts]) for i in range(Q.size)]
    column = {}
    for i in range(Q.size):
        for r in range(alpha[i]):
            for c in range(alpha[i]):
                if blocks[i][r] <= blocks[i][c]:
                    column[(i, r, c)] = len(column)
    if len(column) != unknowns:
        raise ConsistencyError(f"s0 system for {d} has {len(column)} unknowns, expected {unknowns}")

    rows = []
    for s, t in sorted({(s, t) for s, t, _ in Q.arrow_indices}):
        for r0 in range(alpha[t]):
            for c0 in range(alpha[s]):
                if blocks[t][r0] > blocks[s][c0]:
                    continue
                # (g_t E - E g_s)[r, c] = g_t[r, r0] [c == c0] - [r == r0] g_s[c0, c]
                for r in range(alpha[t]):
                    for c in range(alpha[s]):
                        row = {}
                        if c == c0 and (t, r, r0) in column:
                            row[column[(t, r, r0)]] = 1
                        if r == r0 and (s, c0, c) in column:
                            key = column[(s, c0, c)]
                            row[key] = row.get(key, 0) - 1
                        row = {k: v for k, v in row.items() if v}
                        if row:
                            rows.append(row)
    if not rows:
        return unknowns
    dense = [[QQ(row.get(j, 0)) for j in range(unknowns)] for row in rows]
    rank = DomainMatrix(dense, (len(dense), unknowns), QQ).rank()
    logger.debug("s0 system for %s: %d unknowns, %d equations, rank %d", d, unknowns, len(rows), rank)
    return unknowns - rank


@dataclass
class StrataRow:
    hn_type: str
    parts: List[List[int]]
    epsilon: int
    end_flag_dim: int
    rep_flag_dim: int
    constant_C: int
    threshold: Optional[int]
    threshold_met: bool
    codim_rep: int
    codim_rep_double: int
    codim_moment: int
    codim_gap: int
    dim_T: int
    dim_R_HN: int


@dataclass
class StrataReport:
    alpha: List[int]
    theta: List[int]
    generic: bool
    dim_rep: int
    dim_mu_zero: int
    tits_hypothesis: str
    rows: List[StrataRow]

    def to_dict(self):
        return asdict(self)


def strata_row(Q: Quiver, d: HNType) -> StrataRow:
    return StrataRow(
        hn_type=str(d),
        parts=[list(p) for p in d.parts],
        epsilon=epsilon(d),
        end_flag_dim=end_flag_dim(d),
        rep_flag_dim=rep_flag_dim(Q, d),
        constant_C=constant_C(Q, d),
        threshold=edge_threshold(d),
        threshold_met=threshold_met(Q, d),
        codim_rep=codim_rep(Q, d),
        codim_rep_double=codim_rep_double(Q, d),
        codim_moment=codim_moment(Q, d),
        codim_gap=codim_gap(Q, d),
        dim_T=dim_T(Q, d),
        dim_R_HN=dim_R_HN(Q, d),
    )


def strata_report(Q: Quiver, alpha, theta) -> StrataReport:
    """One row of strata data per asymptotic HN type"""
    types = enumerate_hn_types(Q, alpha, theta)
    alpha = Q.dim_vector(alpha)
    return StrataReport(
        alpha=list(alpha),
        theta=list(theta),
        generic=is_generic(theta, alpha),
        dim_rep=dim_rep(Q, alpha),
        dim_mu_zero=dim_mu_zero(Q, alpha),
        tits_hypothesis=thm_2_5_hypothesis(Q, alpha),
        rows=[strata_row(Q, d) for d in types],
    )
