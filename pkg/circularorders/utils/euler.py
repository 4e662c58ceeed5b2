"""Integer linear algebra and the Euler class of a circular order on a finite group."""

import logging
import math
from dataclasses import dataclass

import numpy as np

from .extensions import cocycle_from_order

logger = logging.getLogger(__name__)


class NoCoboundaryError(ValueError):
    """k·F is not a coboundary for the requested k."""


def smith_normal_form(A):
    """Diagonalize an integer matrix by unimodular row and column operations.

    Args:
      A: an integer matrix (anything np.array accepts).

    Returns:
      (U, D, V) with U @ A @ V == D, U and V unimodular, D diagonal with
      nonnegative entries d1 | d2 | ... . All arrays have dtype object so the
      arithmetic stays exact.
    """
    D = np.atleast_2d(np.array(A, dtype=object))
    m, n = D.shape
    U = np.eye(m, dtype=object)
    V = np.eye(n, dtype=object)

    def swap_rows(i, j):
        if i != j:
            D[[i, j]] = D[[j, i]]
            U[[i, j]] = U[[j, i]]

    def swap_cols(i, j):
        if i != j:
            D[:, [i, j]] = D[:, [j, i]]
            V[:, [i, j]] = V[:, [j, i]]

    def smallest(t):
        best = None
        for i in range(t, m):
            for j in range(t, n):
                if D[i, j] != 0 and (best is None or abs(D[i, j]) < best[0]):
                    best = (abs(D[i, j]), i, j)
        return best

    for t in range(min(m, n)):
        best = smallest(t)
        if best is None:
            break
        swap_rows(t, best[1])
        swap_cols(t, best[2])
        while True:
            pivot = D[t, t]
            for i in range(t + 1, m):
                q = D[i, t] // pivot
                if q:
                    D[i] -= q * D[t]
                    U[i] -= q * U[t]
            for j in range(t + 1, n):
                q = D[t, j] // pivot
                if q:
                    D[:, j] -= q * D[:, t]
                    V[:, j] -= q * V[:, t]
            # a nonzero remainder is smaller than the pivot: move it in
            leftover = [(abs(D[i, t]), i, t) for i in range(t + 1, m) if D[i, t]]
            leftover += [(abs(D[t, j]), t, j) for j in range(t + 1, n) if D[t, j]]
            if leftover:
                _, i, j = min(leftover)
                swap_rows(t, i)
                swap_cols(t, j)
                continue
            # divisibility chain
            bad = next(
                (
                    i
                    for i in range(t + 1, m)
                    for j in range(t + 1, n)
                    if D[i, j] % pivot
                ),
                None,
            )
            if bad is None:
                break
            D[t] += D[bad]
            U[t] += U[bad]
        if D[t, t] < 0:
            D[t] *= -1
            U[t] *= -1
    return U, D, V


def diagonal(D):
    return [D[i, i] for i in range(min(D.shape))]


def solve_integer(A, b):
    """One integer solution x of A @ x == b, or None when there is none."""
    A = np.array(A, dtype=object)
    b = np.array(b, dtype=object)
    U, D, V = smith_normal_form(A)
    c = U @ b
    d = diagonal(D)
    y = np.zeros(A.shape[1], dtype=object)
    for i, value in enumerate(c):
        if i < len(d) and d[i] != 0:
            if value % d[i]:
                return None
            y[i] = value // d[i]
        elif value != 0:
            return None
    return V @ y


@dataclass(frozen=True)
class AbelianInvariants:
    """ℤ^rank ⊕ ℤ/d1 ⊕ ... with d1 | d2 | ... and every di >= 2."""

    torsion: tuple
    rank: int

    @property
    def is_trivial(self):
        return not self.torsion and self.rank == 0

    @property
    def is_cyclic(self):
        return len(self.torsion) + self.rank <= 1

    @property
    def torsion_order(self):
        return math.prod(self.torsion)

    @property
    def order(self):
        """|H|, or None when H is infinite."""
        return None if self.rank else self.torsion_order

    def __str__(self):
        parts = [f"Z/{d}" for d in self.torsion] + ["Z"] * self.rank
        return " + ".join(parts) or "0"


def abelian_invariants(relations, generators):
    """Invariants of ℤ^generators modulo the row space of ``relations``."""
    return AbelianQuotient.from_relations(relations, generators).invariants


def matrix_rank(A):
    """Rank over ℚ of an integer matrix."""
    A = np.atleast_2d(np.array(A, dtype=object))
    if A.size == 0:
        return 0
    _, D, _ = smith_normal_form(A)
    return sum(1 for x in diagonal(D) if x != 0)


@dataclass
class AbelianQuotient:
    """ℤ^n modulo the row space of a relation matrix R.

    With U·R·V = D, a row vector v lies in the row space of R iff v·V lies in
    the row space of D, so v·V gives coordinates on the quotient: coordinate i
    is taken mod ``moduli[i]``, and a modulus of 0 marks a free coordinate.
    """

    moduli: list
    V: np.ndarray

    @classmethod
    def from_relations(cls, relations, generators):
        R = np.array(relations, dtype=object).reshape((-1, generators))
        if R.shape[0] == 0:
            return cls([0] * generators, np.eye(generators, dtype=object))
        _, D, V = smith_normal_form(R)
        d = diagonal(D)
        moduli = [int(d[i]) if i < len(d) else 0 for i in range(generators)]
        return cls(moduli, V)

    @property
    def invariants(self):
        return AbelianInvariants(
            tuple(d for d in self.moduli if d > 1), self.moduli.count(0)
        )

    def coordinates(self, vector):
        return [int(x) for x in np.array(vector, dtype=object) @ self.V]

    def free_part(self, vector):
        coords = self.coordinates(vector)
        return [c for c, d in zip(coords, self.moduli, strict=True) if d == 0]

    def order(self, vector):
        """Order of the class of ``vector``, or math.inf."""
        coords = self.coordinates(vector)
        k = 1
        for c, d in zip(coords, self.moduli, strict=True):
            if d == 0 and c:
                return math.inf
            if d > 1:
                k = math.lcm(k, d // math.gcd(d, c % d))
        return k


# Euler class of a circular order on a finite group


@dataclass
class CocycleTable:
    elements: list
    mul: np.ndarray
    F: np.ndarray

    @property
    def n(self):
        return len(self.elements)


@dataclass
class EtaFunction:
    values: dict
    k: int

    def __call__(self, g):
        return self.values[g]


def cocycle_table(c):
    elements = c.group.elements()
    index = {g: i for i, g in enumerate(elements)}
    n = len(elements)
    f = cocycle_from_order(c)
    mul = np.empty((n, n), dtype=np.int64)
    F = np.empty((n, n), dtype=np.int64)
    for i, g in enumerate(elements):
        for j, h in enumerate(elements):
            mul[i, j] = index[g * h]
            F[i, j] = f(g, h)
    return CocycleTable(elements, mul, F)


def check_cocycle(table):
    F, M = table.F, table.mul
    if not np.isin(F, (0, 1)).all():
        raise ValueError("cocycle entries must be 0 or 1")
    # f(g,h) + f(gh,k) = f(h,k) + f(g,hk)
    lhs = F[:, :, None] + F[M]
    rhs = F[None, :, :] + F[:, M]
    bad = np.argwhere(lhs != rhs)
    if len(bad):
        g, h, k = (int(v) for v in bad[0])
        raise ValueError(f"cocycle identity fails at ({g}, {h}, {k})")


def coboundary_matrix(table):
    """Rows (g, h) of η(g) − η(gh) + η(h) in the unknowns η(g), g ≠ id."""
    n = table.n
    B = np.zeros((n * n, n - 1), dtype=object)
    for g in range(n):
        for h in range(n):
            row = g * n + h
            for index, sign in ((g, 1), (int(table.mul[g, h]), -1), (h, 1)):
                if index:
                    B[row, index - 1] += sign
    return B


def euler_class_order(table):
    """Order of [f_c] in H²(G; ℤ): least k with k·F a coboundary, or math.inf."""
    check_cocycle(table)
    if table.n == 1:
        return 1
    B = coboundary_matrix(table)
    U, D, _ = smith_normal_form(B)
    c = U @ np.array(table.F.reshape(-1), dtype=object)
    d = diagonal(D)
    k = 1
    for i, value in enumerate(c):
        if i < len(d) and d[i] != 0:
            k = math.lcm(k, d[i] // math.gcd(d[i], value))
        elif value != 0:
            return math.inf
    return int(k)


def eta_solve(table, k):
    check_cocycle(table)
    if table.n == 1:
        return EtaFunction({table.elements[0]: 0}, k)
    B = coboundary_matrix(table)
    solution = solve_integer(B, k * np.array(table.F.reshape(-1), dtype=object))
    if solution is None:
        raise NoCoboundaryError(f"{k}·F is not a coboundary")
    values = {table.elements[0]: 0}
    values.update(
        {g: int(solution[i - 1]) for i, g in enumerate(table.elements) if i}
    )
    return EtaFunction(values, k)


@dataclass
class NormalSubgroup:
    kernel: list
    k: int
    eta: EtaFunction


def lo_normal_subgroup(c):
    """The left-orderable normal H with G/H ≅ ℤ/k, k the Euler class order."""
    table = cocycle_table(c)
    k = euler_class_order(table)
    if k == math.inf:
        raise RuntimeError("a finite group cannot have an Euler class of infinite order")
    eta = eta_solve(table, k)
    n = table.n
    phi = [eta(g) % k for g in table.elements]
    for i in range(n):
        for j in range(n):
            if phi[int(table.mul[i, j])] != (phi[i] + phi[j]) % k:
                raise RuntimeError(f"q_k∘η is not a homomorphism at ({i}, {j})")
    if set(phi) != set(range(k)):
        raise RuntimeError("q_k∘η is not surjective")
    kernel = [g for g, value in zip(table.elements, phi, strict=True) if value == 0]
    if len(kernel) != 1 or k != n:
        raise RuntimeError(
            f"kernel of order {len(kernel)} with k={k}; a finite left-orderable "
            "group must be trivial"
        )
    logger.info("%s: Euler class of order %d, kernel trivial", c, k)
    return NormalSubgroup(kernel, k, eta)
