"""
Quivers and dimension vectors
Euler forms, derived quivers, Kac-Moody root classification and dimension counts
"""

import logging
from dataclasses import dataclass
from enum import Enum
from functools import cached_property, lru_cache
from math import gcd
from typing import Mapping, Sequence, Tuple, Union

import config
from errors import ConsistencyError, InputError

logger = logging.getLogger(__name__)

# A dimension vector is a tuple of ints in the quiver's declared vertex order
DimVector = Tuple[int, ...]


@dataclass(frozen=True)
class Arrow:
    source: str
    target: str
    mult: int = 1


@dataclass(frozen=True)
class Quiver:
    """
    Loop-free quiver with arrow multiplicities

    Parallel arrows are stored once with a multiplicity, so an arrow
    repeated n times costs a single record.
    """

    vertices: Tuple[str, ...]
    arrows: Tuple[Arrow, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "vertices", tuple(str(v) for v in self.vertices))
        object.__setattr__(self, "arrows", tuple(
            a if isinstance(a, Arrow) else Arrow(str(a[0]), str(a[1]), a[2] if len(a) > 2 else 1)
            for a in self.arrows
        ))
        if not self.vertices:
            raise InputError("A quiver needs at least one vertex")
        if len(set(self.vertices)) != len(self.vertices):
            raise InputError(f"Vertex names must be unique: {list(self.vertices)}")
        declared = set(self.vertices)
        for n, a in enumerate(self.arrows):
            if a.source not in declared or a.target not in declared:
                raise InputError(f"Arrow {n} ({a.source} -> {a.target}) references an undeclared vertex")
            if a.source == a.target:
                raise InputError(f"Arrow {n} is a loop at vertex {a.source}; loops are not supported")
            if isinstance(a.mult, bool) or not isinstance(a.mult, int) or a.mult < 1:
                raise InputError(f"Arrow {n} multiplicity must be a positive integer, got {a.mult!r}")

    @cached_property
    def index(self):
        """vertex name -> position"""
        return {v: i for i, v in enumerate(self.vertices)}

    @cached_property
    def arrow_indices(self):
        """(source position, target position, multiplicity) per arrow record"""
        return tuple((self.index[a.source], self.index[a.target], a.mult) for a in self.arrows)

    @property
    def size(self):
        return len(self.vertices)

    @property
    def min_multiplicity(self):
        """Smallest arrow multiplicity, None without arrows"""
        return min((a.mult for a in self.arrows), default=None)

    def dim_vector(self, values: Union[Sequence[int], Mapping[str, int]], allow_zero=True) -> DimVector:
        """
        Validate and normalise a dimension vector for this quiver

        Args:
            values: sequence in vertex order, or a mapping vertex -> int
            allow_zero: whether the zero vector is acceptable

        Returns:
            Tuple of nonnegative ints in vertex order
        """
        if isinstance(values, Mapping):
            if set(values) != set(self.vertices):
                raise InputError(f"Dimension vector must be defined on exactly {list(self.vertices)}")
            values = [values[v] for v in self.vertices]
        vec = tuple(values)
        if len(vec) != self.size:
            raise InputError(f"Expected {self.size} coordinates, got {len(vec)}")
        if any(isinstance(x, bool) or not isinstance(x, int) for x in vec):
            raise InputError(f"Coordinates must be integers: {vec}")
        if any(x < 0 for x in vec):
            raise InputError(f"Coordinates must be nonnegative: {vec}")
        if not allow_zero and not any(vec):
            raise InputError("The zero dimension vector is not allowed here")
        return vec

    def unit(self, i: int) -> DimVector:
        return tuple(1 if j == i else 0 for j in range(self.size))

    def to_dict(self):
        return {
            "vertices": list(self.vertices),
            "arrows": [{"from": a.source, "to": a.target, "mult": a.mult} for a in self.arrows],
        }

    @classmethod
    def kronecker(cls, m=1):
        """Two vertices with m parallel arrows 1 -> 2"""
        return cls(("1", "2"), (Arrow("1", "2", m),))

    @classmethod
    def a2(cls):
        return cls.kronecker(1)

    @classmethod
    def point(cls):
        return cls(("1",))

    @classmethod
    def triangle(cls):
        """Acyclic orientation of the triangle: 1 -> 2, 2 -> 3, 1 -> 3"""
        return cls(("1", "2", "3"), (Arrow("1", "2"), Arrow("2", "3"), Arrow("1", "3")))


class RootClass(Enum):
    NOT_ROOT = "NotRoot"
    REAL_ROOT = "RealRoot"
    IMAGINARY_ROOT = "ImaginaryRoot"


# vector helpers

def dot(v, w):
    return sum(a * b for a, b in zip(v, w))


def vadd(v, w):
    return tuple(a + b for a, b in zip(v, w))


def vsub(v, w):
    return tuple(a - b for a, b in zip(v, w))


def norm1(v):
    return sum(v)


def leq(v, w):
    """Componentwise v <= w"""
    return all(a <= b for a, b in zip(v, w))


def sub_vectors(alpha):
    """All u with 0 <= u <= alpha, in lexicographic order (zero first)"""
    if not alpha:
        return [()]
    rest = sub_vectors(alpha[1:])
    return [(x,) + r for x in range(alpha[0] + 1) for r in rest]


def _check_pair(Q, v, w):
    if len(v) != Q.size or len(w) != Q.size:
        raise InputError(f"Vectors must have {Q.size} coordinates (vertices {list(Q.vertices)})")


def euler_form(Q: Quiver, v, w) -> int:
    """<v, w> = sum v_i w_i - sum over arrows (with multiplicity) of v_s w_t"""
    _check_pair(Q, v, w)
    return dot(v, w) - sum(m * v[s] * w[t] for s, t, m in Q.arrow_indices)


def sym_euler_form(Q: Quiver, v, w) -> int:
    return euler_form(Q, v, w) + euler_form(Q, w, v)


def double_quiver(Q: Quiver) -> Quiver:
    reverse = tuple(Arrow(a.target, a.source, a.mult) for a in Q.arrows)
    return Quiver(Q.vertices, Q.arrows + reverse)


def opposite_quiver(Q: Quiver) -> Quiver:
    return Quiver(Q.vertices, tuple(Arrow(a.target, a.source, a.mult) for a in Q.arrows))


def multiply_edges(Q: Quiver, factor) -> Quiver:
    """
    Replace every arrow by factor identical arrows

    Args:
        Q: quiver
        factor: positive int applied to every arrow, or a mapping
            (source, target) -> positive int; arrows absent from the mapping keep their multiplicity

    Returns:
        New quiver on the same vertex set
    """
    if isinstance(factor, Mapping):
        factors = dict(factor)
        for key, f in factors.items():
            if isinstance(f, bool) or not isinstance(f, int) or f < 1:
                raise InputError(f"Edge factor for {key} must be a positive integer, got {f!r}")
        arrows = tuple(Arrow(a.source, a.target, a.mult * factors.get((a.source, a.target), 1)) for a in Q.arrows)
    else:
        if isinstance(factor, bool) or not isinstance(factor, int) or factor < 1:
            raise InputError(f"Edge factor must be a positive integer, got {factor!r}")
        arrows = tuple(Arrow(a.source, a.target, a.mult * factor) for a in Q.arrows)
    return Quiver(Q.vertices, arrows)


def tits_p(Q: Quiver, alpha) -> int:
    """p(alpha) = 1 - <alpha, alpha>"""
    return 1 - euler_form(Q, alpha, alpha)


def dim_rep(Q: Quiver, alpha) -> int:
    """Dimension of Rep(Q, alpha)"""
    return sum(m * alpha[s] * alpha[t] for s, t, m in Q.arrow_indices)


def dim_mu_zero(Q: Quiver, alpha) -> int:
    """alpha.alpha + 1 - 2<alpha, alpha>, i.e. alpha.alpha - 1 + 2p(alpha)"""
    return dot(alpha, alpha) + 1 - 2 * euler_form(Q, alpha, alpha)


def codim_mu_zero_in_double(Q: Quiver, alpha) -> int:
    """Codimension of mu^-1(0) inside Rep(double Q, alpha); always alpha.alpha - 1"""
    codim = 2 * dim_rep(Q, alpha) - dim_mu_zero(Q, alpha)
    if codim != dot(alpha, alpha) - 1:
        raise ConsistencyError(f"codim of mu^-1(0) for {alpha} is {codim}, expected alpha.alpha - 1")
    return codim


def is_indivisible(alpha) -> bool:
    if not any(alpha):
        raise InputError("Indivisibility is undefined for the zero vector")
    g = 0
    for x in alpha:
        g = gcd(g, x)
    return g == 1


def is_connected_support(Q: Quiver, alpha) -> bool:
    support = {i for i, x in enumerate(alpha) if x}
    if not support:
        return False
    neighbours = {i: set() for i in support}
    for s, t, _ in Q.arrow_indices:
        if s in support and t in support:
            neighbours[s].add(t)
            neighbours[t].add(s)
    start = min(support)
    seen = {start}
    stack = [start]
    while stack:
        for j in neighbours[stack.pop()]:
            if j not in seen:
                seen.add(j)
                stack.append(j)
    return seen == support


def simple_reflection(Q: Quiver, alpha, i: int):
    """s_i(alpha) = alpha - (alpha, e_i) e_i; coordinates may turn negative"""
    pairing = sym_euler_form(Q, alpha, Q.unit(i))
    return tuple(x - pairing if j == i else x for j, x in enumerate(alpha))


def classify_root(Q: Quiver, alpha) -> RootClass:
    """
    Decide whether alpha is a real root, an imaginary root, or not a root

    Reflects at the least vertex with positive pairing until alpha is a
    simple root, lies in the fundamental region, or leaves the positive cone.
    """
    alpha = Q.dim_vector(alpha, allow_zero=False)
    return _classify(Q, alpha)


@lru_cache(maxsize=None)
def _classify(Q, alpha):
    current = alpha
    steps = 0
    while True:
        if any(x < 0 for x in current):
            return RootClass.NOT_ROOT
        if not is_connected_support(Q, current):
            return RootClass.NOT_ROOT
        if sum(current) == 1:
            return RootClass.REAL_ROOT
        support = [i for i, x in enumerate(current) if x]
        positive = [i for i in support if sym_euler_form(Q, current, Q.unit(i)) > 0]
        if not positive:
            logger.debug("classify_root %s: fundamental region after %d reflections", alpha, steps)
            return RootClass.IMAGINARY_ROOT
        current = simple_reflection(Q, current, positive[0])
        steps += 1


def thm_2_5_hypothesis(Q: Quiver, alpha) -> str:
    """
    Check p(alpha) >= p(beta_1) + ... + p(beta_r) over decompositions into positive roots

    Returns:
        "holds", "fails", or "unchecked" when |alpha|_1 exceeds the guard
    """
    alpha = Q.dim_vector(alpha, allow_zero=False)
    bound = config.scaled(config.ROOT_CHECK_MAX_NORM)
    if norm1(alpha) > bound:
        logger.debug("Thm 2.5 hypothesis unchecked for %s (|alpha| > %d)", alpha, bound)
        return "unchecked"
    candidates = [u for u in sub_vectors(alpha) if any(u) and _classify(Q, u) is not RootClass.NOT_ROOT]
    best = {}
    for v in sub_vectors(alpha):
        if not any(v):
            best[v] = 0
            continue
        # simple roots always fit, so the maximum is over a nonempty set
        best[v] = max(tits_p(Q, u) + best[vsub(v, u)] for u in candidates if leq(u, v))
    return "holds" if tits_p(Q, alpha) >= best[alpha] else "fails"
