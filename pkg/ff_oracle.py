"""
Finite-field oracle
Brute-force enumeration of quiver representations over F_q, orbit partitioning
and absolutely indecomposable counts, used to check Kac polynomials pointwise
"""

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import List

import numpy as np
from sympy import Matrix
from sympy.polys.domains import GF
from sympy.polys.matrices import DomainMatrix

import config
from errors import ConsistencyError, GuardExceeded, InputError
from hua_kac import kac_polynomial
from quiver_core import DimVector, Quiver, dim_rep, dot

logger = logging.getLogger(__name__)


@dataclass
class OracleCount:
    q: int
    alpha: DimVector
    total_reps: int
    orbit_count: int
    abs_indec_count: int
    orbit_sizes: List[int] = field(default_factory=list)
    group_order: int = 0

    def to_dict(self):
        return {
            "q": self.q,
            "alpha": list(self.alpha),
            "total_reps": self.total_reps,
            "orbit_count": self.orbit_count,
            "abs_indec_count": self.abs_indec_count,
            "orbit_sizes": list(self.orbit_sizes),
            "group_order": self.group_order,
        }


@dataclass
class OracleCheck:
    count: OracleCount
    engine_eval: Fraction
    passed: bool

    def to_dict(self):
        doc = self.count.to_dict()
        doc["engine_eval"] = str(self.engine_eval)
        doc["pass"] = self.passed
        return doc


def gl_order(n, q):
    """|GL_n(F_q)| = prod_{k<n} (q^n - q^k)"""
    order = 1
    for k in range(n):
        order *= q ** n - q ** k
    return order


def _check_guards(Q, alpha, q):
    reps = q ** dim_rep(Q, alpha)
    bound = config.scaled(config.ORACLE_MAX_REPS)
    if reps > bound:
        raise GuardExceeded("representation count q^dim_rep", reps, bound)
    group = 1
    for n in alpha:
        group *= gl_order(n, q)
    bound = config.scaled(config.ORACLE_MAX_GROUP)
    if group > bound:
        raise GuardExceeded("group order |GL_alpha(F_q)|", group, bound)
    end = q ** dot(alpha, alpha)
    bound = config.scaled(config.ORACLE_MAX_END)
    if end > bound:
        raise GuardExceeded("endomorphism space q^(alpha.alpha)", end, bound)
    return reps, group


class _RepSpace:
    """Flat encoding of representations: one matrix per arrow copy, concatenated row-major"""

    def __init__(self, Q, alpha, q):
        self.q = q
        self.alpha = alpha
        self.shapes = []
        for s, t, m in Q.arrow_indices:
            self.shapes.extend([(s, t)] * m)
        self.offsets = []
        pos = 0
        for s, t in self.shapes:
            self.offsets.append(pos)
            pos += alpha[t] * alpha[s]
        self.length = pos
        self.weights = np.array([q ** (pos - 1 - k) for k in range(pos)], dtype=np.int64)

    def matrices(self, flat):
        flat = np.asarray(flat, dtype=np.int64)
        return [
            flat[o:o + self.alpha[t] * self.alpha[s]].reshape(self.alpha[t], self.alpha[s])
            for (s, t), o in zip(self.shapes, self.offsets)
        ]

    def encode(self, mats):
        if not self.length:
            return 0
        flat = np.concatenate([m.ravel() for m in mats])
        return int(flat @ self.weights)

    def act(self, g, g_inv, mats):
        """g.x_a = g_t x_a g_s^-1"""
        return [(g[t] @ x @ g_inv[s]) % self.q for (s, t), x in zip(self.shapes, mats)]


def _gl_elements(n, q):
    """Every (g, g^-1) in GL_n(F_q)"""
    if n == 0:
        empty = np.zeros((0, 0), dtype=np.int64)
        return [(empty, empty)]
    elements = []
    for entries in product(range(q), repeat=n * n):
        m = Matrix(n, n, entries)
        if m.det() % q == 0:
            continue
        inv = m.inv_mod(q)
        elements.append((
            np.array(entries, dtype=np.int64).reshape(n, n),
            np.array([int(x) % q for x in inv], dtype=np.int64).reshape(n, n),
        ))
    return elements


def _group(alpha, q):
    per_vertex = [_gl_elements(n, q) for n in alpha]
    for choice in product(*per_vertex):
        yield [c[0] for c in choice], [c[1] for c in choice]


def endomorphism_basis(space: _RepSpace, mats):
    """
    Basis of End(x) over F_q: tuples (g_i) with x_a g_s = g_t x_a

    Returns:
        list of per-vertex matrix lists
    """
    alpha, q = space.alpha, space.q
    column = {}
    for i, n in enumerate(alpha):
        for r in range(n):
            for c in range(n):
                column[(i, r, c)] = len(column)
    unknowns = len(column)

    rows = []
    for (s, t), x in zip(space.shapes, mats):
        # (x g_s - g_t x)[r, c] = sum_k x[r, k] g_s[k, c] - sum_k g_t[r, k] x[k, c]
        for r in range(alpha[t]):
            for c in range(alpha[s]):
                row = [0] * unknowns
                for k in range(alpha[s]):
                    row[column[(s, k, c)]] += int(x[r, k])
                for k in range(alpha[t]):
                    row[column[(t, r, k)]] -= int(x[k, c])
                row = [v % q for v in row]
                if any(row):
                    rows.append(row)

    if rows:
        domain = GF(q)
        system = DomainMatrix([[domain(v) for v in row] for row in rows], (len(rows), unknowns), domain)
        kernel = system.nullspace().to_Matrix()
        vectors = [[int(kernel[k, j]) % q for j in range(unknowns)] for k in range(kernel.rows)]
    else:
        vectors = [[1 if j == k else 0 for j in range(unknowns)] for k in range(unknowns)]

    basis = []
    for v in vectors:
        basis.append([
            np.array([v[column[(i, r, c)]] for r in range(n) for c in range(n)], dtype=np.int64).reshape(n, n)
            for i, n in enumerate(alpha)
        ])
    return basis


def _is_nilpotent(m, q):
    n = m.shape[0]
    power = np.eye(n, dtype=np.int64)
    for _ in range(n):
        power = (power @ m) % q
    return not power.any()


def _scalar_plus_nilpotent(g, alpha, q):
    for lam in range(q):
        if all(_is_nilpotent((g[i] - lam * np.eye(n, dtype=np.int64)) % q, q) for i, n in enumerate(alpha) if n):
            return True
    return False


def is_absolutely_indecomposable(space: _RepSpace, mats) -> bool:
    """Every endomorphism is lambda * id + nilpotent with the same lambda at every vertex"""
    q, alpha = space.q, space.alpha
    basis = endomorphism_basis(space, mats)
    for coeffs in product(range(q), repeat=len(basis)):
        g = [np.zeros((n, n), dtype=np.int64) for n in alpha]
        for c, element in zip(coeffs, basis):
            if c:
                g = [(gi + c * ei) % q for gi, ei in zip(g, element)]
        if not _scalar_plus_nilpotent(g, alpha, q):
            return False
    return True


def count_abs_indec(Q: Quiver, alpha, q: int, spot_check=True) -> OracleCount:
    """
    Count absolutely indecomposable representations of Q of dimension alpha over F_q

    Args:
        Q: quiver, multiplicities expanded into separate arrow matrices
        alpha: nonzero dimension vector
        q: prime from config.ORACLE_PRIMES
        spot_check: also classify the largest member of every orbit and require agreement

    Raises:
        InputError for an unsupported field size
        GuardExceeded when a size guard would be exceeded
        ConsistencyError when orbit sizes break orbit-stabilizer
    """
    alpha = Q.dim_vector(alpha, allow_zero=False)
    if q not in config.ORACLE_PRIMES:
        raise InputError(f"q must be one of {list(config.ORACLE_PRIMES)}, got {q}")
    total, group_order = _check_guards(Q, alpha, q)
    space = _RepSpace(Q, alpha, q)
    group = list(_group(alpha, q))

    visited = bytearray(total)
    orbit_sizes, abs_indec = [], 0
    # lexicographic order, so the first unvisited rep is the least member of its orbit
    for index, flat in enumerate(product(range(q), repeat=space.length)):
        if visited[index]:
            continue
        mats = space.matrices(flat)
        orbit = {}
        for g, g_inv in group:
            image = space.act(g, g_inv, mats)
            key = space.encode(image)
            if key not in orbit:
                orbit[key] = image
                visited[key] = 1
        orbit_sizes.append(len(orbit))
        flag = is_absolutely_indecomposable(space, mats)
        if spot_check and len(orbit) > 1:
            other = orbit[max(orbit)]
            if is_absolutely_indecomposable(space, other) != flag:
                raise ConsistencyError(f"Absolute indecomposability is not constant on the orbit of {tuple(flat)}")
        abs_indec += flag

    if sum(orbit_sizes) != total or any(group_order % s for s in orbit_sizes):
        raise ConsistencyError(f"Orbit sizes {orbit_sizes} violate orbit-stabilizer for |G| = {group_order}")
    logger.debug("oracle %s q=%d: %d reps, %d orbits, %d absolutely indecomposable",
                 alpha, q, total, len(orbit_sizes), abs_indec)
    return OracleCount(q, alpha, total, len(orbit_sizes), abs_indec, orbit_sizes, group_order)


def check_against_engine(Q: Quiver, alpha, q: int) -> OracleCheck:
    """Compare A_alpha(q) from Hua's formula with the brute-force count"""
    count = count_abs_indec(Q, alpha, q)
    value = kac_polynomial(Q, alpha).polynomial(q)
    return OracleCheck(count, value, value == count.abs_indec_count)
