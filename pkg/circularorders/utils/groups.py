"""Exact group families the order constructions work over.

Every element is an immutable value carrying a reference to the group instance
it was made in. Operations between elements of different instances are
rejected, even when the groups have the same shape.
"""

import itertools
import logging
from dataclasses import dataclass
from functools import cache
from math import gcd

import numpy as np

logger = logging.getLogger(__name__)


class GroupMismatchError(ValueError):
    """Operands come from different group instances."""


class GroupElement:
    group: "Group"

    def __mul__(self, other):
        return multiply(self, other)

    def __invert__(self):
        return self.group.inverse(self)

    def __pow__(self, k):
        return power(self, k)

    @property
    def is_identity(self):
        return self == self.group.identity()


class Group:
    name = "group"

    def identity(self):
        raise NotImplementedError

    def _multiply(self, g, h):
        raise NotImplementedError

    def inverse(self, g):
        raise NotImplementedError

    @property
    def is_finite(self):
        return False

    @property
    def order(self):
        return None

    def elements(self):
        """All elements with the identity first (finite groups only)."""
        raise ValueError(f"{self.name} is infinite; pass an explicit element set")

    def sort_key(self, g):
        raise NotImplementedError

    def __repr__(self):
        return f"<{type(self).__name__} {self.name}>"


def multiply(g, h):
    if g.group is not h.group:
        raise GroupMismatchError(
            f"cannot multiply {g!r} from {g.group.name} by {h!r} from {h.group.name}"
        )
    return g.group._multiply(g, h)


def power(g, k):
    """g**k by repeated squaring; negative k goes through the inverse."""
    group = g.group
    if k < 0:
        g, k = group.inverse(g), -k
    result = group.identity()
    base = g
    while k:
        if k & 1:
            result = group._multiply(result, base)
        base = group._multiply(base, base)
        k >>= 1
    return result


# Cyclic groups, ℤ when modulus is None


@dataclass(frozen=True)
class CyclicElement(GroupElement):
    group: "CyclicGroup"
    value: int

    def __repr__(self):
        return f"{self.value}"


class CyclicGroup(Group):
    def __init__(self, modulus=None):
        if modulus is not None and modulus < 1:
            raise ValueError(f"modulus must be positive, got {modulus}")
        self.modulus = modulus
        self.name = "Z" if modulus is None else f"Z/{modulus}"

    def __call__(self, value):
        return self.element(value)

    def element(self, value):
        if self.modulus is not None:
            value %= self.modulus
        return CyclicElement(self, int(value))

    def identity(self):
        return CyclicElement(self, 0)

    def _multiply(self, g, h):
        return self.element(g.value + h.value)

    def inverse(self, g):
        return self.element(-g.value)

    @property
    def is_finite(self):
        return self.modulus is not None

    @property
    def order(self):
        return self.modulus

    def elements(self):
        if self.modulus is None:
            return super().elements()
        return [CyclicElement(self, v) for v in range(self.modulus)]

    def between(self, lo, hi):
        """Integers lo..hi inclusive, identity first when it is in range."""
        values = sorted(range(lo, hi + 1), key=lambda v: (v != 0, v))
        return [self.element(v) for v in values]

    def sort_key(self, g):
        return (g.value,)


# Free abelian groups ℤ^rank


@dataclass(frozen=True)
class LatticeElement(GroupElement):
    group: "LatticeGroup"
    coords: tuple

    @property
    def x(self):
        return self.coords[0]

    @property
    def y(self):
        return self.coords[1]

    def __repr__(self):
        return f"({', '.join(str(c) for c in self.coords)})"


class LatticeGroup(Group):
    def __init__(self, rank=2):
        self.rank = rank
        self.name = f"Z^{rank}"

    def __call__(self, *coords):
        return self.element(coords)

    def element(self, coords):
        coords = tuple(int(c) for c in coords)
        if len(coords) != self.rank:
            raise ValueError(f"{self.name} element needs {self.rank} coordinates")
        return LatticeElement(self, coords)

    def identity(self):
        return LatticeElement(self, (0,) * self.rank)

    def _multiply(self, g, h):
        return LatticeElement(
            self, tuple(a + b for a, b in zip(g.coords, h.coords, strict=True))
        )

    def inverse(self, g):
        return LatticeElement(self, tuple(-a for a in g.coords))

    def box(self, radius):
        """All elements with every coordinate in [-radius, radius]."""
        values = range(-radius, radius + 1)
        points = sorted(
            itertools.product(values, repeat=self.rank), key=lambda p: (any(p), p)
        )
        return [LatticeElement(self, p) for p in points]

    def sort_key(self, g):
        return g.coords


# Finite groups given by a Cayley table


@dataclass(frozen=True)
class TableElement(GroupElement):
    group: "FiniteGroupTable"
    index: int

    def __repr__(self):
        return self.group.label(self.index)


class FiniteGroupTable(Group):
    """A finite group as an n×n multiplication table with identity at index 0."""

    def __init__(self, name, mul, labels=None):
        self.name = name
        self.mul = np.asarray(mul, dtype=np.int64)
        self.labels = labels

    def __call__(self, index):
        return self.element(index)

    @property
    def n(self):
        return int(self.mul.shape[0])

    def element(self, index):
        if not 0 <= index < self.n:
            raise ValueError(f"{self.name} has no element {index}")
        return TableElement(self, int(index))

    def label(self, index):
        if self.labels is not None:
            return str(self.labels[index])
        return f"{self.name}[{index}]"

    def identity(self):
        return TableElement(self, 0)

    def _multiply(self, g, h):
        return TableElement(self, int(self.mul[g.index, h.index]))

    def inverse(self, g):
        return TableElement(self, int(self.inverse_indices[g.index]))

    @property
    def inverse_indices(self):
        # column of the identity in each row
        return np.argmax(self.mul == 0, axis=1)

    @property
    def is_finite(self):
        return True

    @property
    def order(self):
        return self.n

    def elements(self):
        return [TableElement(self, i) for i in range(self.n)]

    def element_order(self, index):
        k, current = 1, index
        while current != 0:
            current = int(self.mul[current, index])
            k += 1
            if k > self.n:
                raise ValueError(f"{self.name} is not a group table")
        return k

    def sort_key(self, g):
        return (g.index,)


def validate_table(table):
    """List every group-axiom violation of a table; an empty list means a group."""
    mul = np.asarray(table.mul)
    diagnostics = []
    if mul.ndim != 2 or mul.shape[0] != mul.shape[1] or mul.shape[0] == 0:
        return [f"table must be a nonempty square matrix, got shape {mul.shape}"]
    n = mul.shape[0]
    if not np.issubdtype(mul.dtype, np.integer):
        return ["table entries must be integers"]
    if mul.min() < 0 or mul.max() >= n:
        return [f"closure: entries must lie in 0..{n - 1}"]

    arange = np.arange(n)
    if not np.array_equal(mul[0], arange):
        diagnostics.append("identity: row 0 is not the identity permutation")
    if not np.array_equal(mul[:, 0], arange):
        diagnostics.append("identity: column 0 is not the identity permutation")
    for i in range(n):
        if not np.any(mul[i] == 0):
            diagnostics.append(f"inverse: element {i} has no right inverse")
        elif not np.any(mul[:, i] == 0):
            diagnostics.append(f"inverse: element {i} has no left inverse")

    # (ab)c and a(bc) as n×n×n arrays
    left = mul[mul]
    right = mul[:, mul]
    bad = np.argwhere(left != right)
    if len(bad):
        a, b, c = (int(v) for v in bad[0])
        diagnostics.append(
            f"associativity: fails at ({a}, {b}, {c}) in {len(bad)} triples"
        )
    return diagnostics


def is_cyclic(table):
    return any(table.element_order(i) == table.n for i in range(table.n))


# Free products of cyclic groups


@dataclass(frozen=True)
class FreeProductWord(GroupElement):
    group: "FreeProduct"
    word: tuple

    def __len__(self):
        return len(self.word)

    def __repr__(self):
        if not self.word:
            return "id"
        return "".join(
            f"x{index + 1}" + (f"^{exp}" if exp != 1 else "")
            for index, exp in self.word
        )


def reduce_letters(raw, factors):
    """Normal form of a sequence of (factor index, exponent) letters."""
    out = []
    for index, exponent in raw:
        if not 0 <= index < len(factors):
            raise ValueError(f"letter references factor {index} of {len(factors)}")
        if out and out[-1][0] == index:
            exponent += out.pop()[1]
        order = factors[index]
        if order is not None:
            exponent %= order
        if exponent:
            out.append((index, exponent))
    return tuple(out)


def free_reduce(raw, group):
    return FreeProductWord(group, reduce_letters(raw, group.factors))


class FreeProduct(Group):
    """ℤ/α₁ ∗ ⋯ ∗ ℤ/α_n, with None standing for an infinite cyclic factor."""

    def __init__(self, factors):
        factors = tuple(factors)
        for order in factors:
            if order is not None and order < 2:
                raise ValueError(f"finite factors need order at least 2, got {order}")
        self.factors = factors
        self.name = " * ".join("Z" if a is None else f"Z/{a}" for a in factors)

    def __call__(self, *letters):
        return free_reduce(letters, self)

    def generator(self, index):
        return free_reduce([(index, 1)], self)

    def identity(self):
        return FreeProductWord(self, ())

    def _multiply(self, g, h):
        return free_reduce(g.word + h.word, self)

    def inverse(self, g):
        return free_reduce([(i, -e) for i, e in reversed(g.word)], self)

    def syllables(self, index, exponent_bound=2):
        order = self.factors[index]
        if order is None:
            return [e for k in range(1, exponent_bound + 1) for e in (k, -k)]
        return list(range(1, order))

    def words(self, max_syllables, exponent_bound=2):
        """Every reduced word with at most max_syllables letters, identity first."""
        result = [()]
        frontier = [()]
        for _ in range(max_syllables):
            grown = []
            for word in frontier:
                for index in range(len(self.factors)):
                    if word and word[-1][0] == index:
                        continue
                    for exp in self.syllables(index, exponent_bound):
                        grown.append((*word, (index, exp)))
            result.extend(grown)
            frontier = grown
        return [FreeProductWord(self, w) for w in result]

    def sort_key(self, g):
        return (len(g.word), g.word)


# Catalog of small finite groups


def _table_from_elements(name, elements, op, labels=None):
    index = {e: i for i, e in enumerate(elements)}
    n = len(elements)
    mul = np.empty((n, n), dtype=np.int64)
    for i, a in enumerate(elements):
        for j, b in enumerate(elements):
            mul[i, j] = index[op(a, b)]
    return FiniteGroupTable(name, mul, labels=labels or [str(e) for e in elements])


def _closure(identity, generators, op):
    elements = [identity]
    seen = {identity}
    queue = [identity]
    while queue:
        current = queue.pop(0)
        for gen in generators:
            product = op(current, gen)
            if product not in seen:
                seen.add(product)
                elements.append(product)
                queue.append(product)
    return elements


def cyclic_table(n):
    arange = np.arange(n)
    return FiniteGroupTable(
        f"Z/{n}", (arange[:, None] + arange[None, :]) % n, labels=list(range(n))
    )


def product_table(m, n):
    elements = list(itertools.product(range(m), range(n)))
    return _table_from_elements(
        f"Z/{m}xZ/{n}",
        elements,
        lambda a, b: ((a[0] + b[0]) % m, (a[1] + b[1]) % n),
    )


def _compose(p, q):
    return tuple(p[i] for i in q)


def symmetric_table(k):
    return _table_from_elements(
        f"S{k}", list(itertools.permutations(range(k))), _compose
    )


def dihedral_table(k):
    rotation = tuple((i + 1) % k for i in range(k))
    reflection = tuple((-i) % k for i in range(k))
    elements = _closure(tuple(range(k)), [rotation, reflection], _compose)
    return _table_from_elements(f"D{k}", elements, _compose)


def _matmul_mod(p):
    def op(a, b):
        return (
            (a[0] * b[0] + a[1] * b[2]) % p,
            (a[0] * b[1] + a[1] * b[3]) % p,
            (a[2] * b[0] + a[3] * b[2]) % p,
            (a[2] * b[1] + a[3] * b[3]) % p,
        )

    return op


def matrix_group_table(name, generators, p):
    """Closure of 2×2 matrices over F_p, each written as a flat 4-tuple."""
    op = _matmul_mod(p)
    elements = _closure((1, 0, 0, 1), [tuple(g) for g in generators], op)
    return _table_from_elements(name, elements, op)


def quaternion_table():
    # i and j inside SL(2, 3)
    return matrix_group_table("Q8", [(0, 2, 1, 0), (1, 1, 1, 2)], 3)


def special_linear_table(p):
    return matrix_group_table(f"SL(2,{p})", [(1, 1, 0, 1), (1, 0, 1, 1)], p)


CATALOG = {
    **{f"z{n}": (lambda n=n: cyclic_table(n)) for n in range(1, 13)},
    "z2xz2": lambda: product_table(2, 2),
    "z2xz4": lambda: product_table(2, 4),
    "s3": lambda: symmetric_table(3),
    "d4": lambda: dihedral_table(4),
    "q8": quaternion_table,
    "sl23": lambda: special_linear_table(3),
    "sl25": lambda: special_linear_table(5),
}

ALIASES = {
    "binary-tetrahedral": "sl23",
    "binary-icosahedral": "sl25",
    "klein-four": "z2xz2",
}


@cache
def catalog_group(name):
    key = name.strip().lower().replace("×", "x")
    key = "".join(ch for ch in key if ch.isalnum() or ch == "-")
    key = ALIASES.get(key, key)
    if key not in CATALOG:
        raise ValueError(
            f"Unknown group {name!r}; choose from {', '.join(sorted(CATALOG))}"
        )
    table = CATALOG[key]()
    logger.debug("built catalog group %s of order %d", table.name, table.n)
    return table


def coprime_residues(n):
    return [k for k in range(n) if gcd(k, n) == 1]
