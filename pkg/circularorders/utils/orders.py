"""Left-order and circular-order oracles and the constructions that build them.

Orientation convention: c(g1, g2, g3) = +1 means the three points run
counterclockwise, i.e. they increase in [0, 1) up to a cyclic permutation.
"""

import functools
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd

import numpy as np

from .groups import CyclicGroup, FreeProduct, GroupMismatchError, LatticeGroup

logger = logging.getLogger(__name__)


def _check(group, *elements):
    for g in elements:
        if g.group is not group:
            raise GroupMismatchError(f"{g!r} is not an element of {group.name}")


def _distinct(a, b, c):
    return a != b and b != c and a != c


def _cyclic_sign(lt_ab, lt_ac, lt_bc):
    # +1 iff the triple is an even permutation of its sorted order
    inversions = (not lt_ab) + (not lt_ac) + (not lt_bc)
    return 1 if inversions % 2 == 0 else -1


class LeftOrder:
    """A left-invariant order given by its positive cone."""

    def __init__(self, group, positive, tag=None):
        self.group = group
        self._positive = positive
        self.tag = tag

    def is_positive(self, g):
        _check(self.group, g)
        if g == self.group.identity():
            return False
        return bool(self._positive(g))

    def compare(self, g, h):
        """-1, 0 or 1 as g < h, g = h or g > h."""
        _check(self.group, g, h)
        if g == h:
            return 0
        return -1 if self.is_positive(~g * h) else 1

    def sorted(self, elements):
        return sorted(elements, key=functools.cmp_to_key(self.compare))

    def __repr__(self):
        return f"<LeftOrder {self.tag or ''} on {self.group.name}>"


class CircularOrder:
    """A circular-order oracle c: G³ → {-1, 0, 1}.

    ``rotation`` is an optional exact closure g ↦ rot_c(g) carried by
    constructions that know their rotation numbers.
    """

    def __init__(self, group, c, tag=None, rotation=None):
        self.group = group
        self._c = c
        self.tag = tag
        self.rotation = rotation

    def __call__(self, g1, g2, g3):
        _check(self.group, g1, g2, g3)
        return self._c(g1, g2, g3)

    def __repr__(self):
        return f"<CircularOrder {self.tag or ''} on {self.group.name}>"


@dataclass(frozen=True, order=True)
class CirclePoint:
    value: Fraction

    def __post_init__(self):
        object.__setattr__(self, "value", Fraction(self.value) % 1)

    def __repr__(self):
        return f"CirclePoint({self.value})"


def standard_circle_order(p1, p2, p3):
    a, b, c = (p if isinstance(p, CirclePoint) else CirclePoint(p) for p in (p1, p2, p3))
    if not _distinct(a, b, c):
        return 0
    return _cyclic_sign(a < b, a < c, b < c)


def secret_left_order(lo):
    def c(g1, g2, g3):
        if not _distinct(g1, g2, g3):
            return 0
        return _cyclic_sign(
            lo.compare(g1, g2) < 0, lo.compare(g1, g3) < 0, lo.compare(g2, g3) < 0
        )

    return CircularOrder(
        lo.group, c, tag=f"secret({lo.tag})", rotation=lambda g: Fraction(0)
    )


def standard_integer_order(group=None):
    group = group or CyclicGroup()
    return LeftOrder(group, lambda g: g.value > 0, tag="standard")


def lex_lattice_order(group=None):
    """Lexicographic order on ℤ^n: the first nonzero coordinate decides."""
    group = group or LatticeGroup(2)

    def positive(g):
        return next(c for c in g.coords if c) > 0

    return LeftOrder(group, positive, tag="lex")


def cyclic_rot_order(n, k, group=None):
    """The order on ℤ/n placing g at the circle point k·g/n."""
    if n < 1:
        raise ValueError(f"n must be positive, got {n}")
    if gcd(k, n) != 1:
        raise ValueError(f"k={k} is not coprime to n={n}; rot would not be injective")
    group = group or CyclicGroup(n)
    if group.modulus != n:
        raise ValueError(f"{group.name} is not Z/{n}")

    def rotation(g):
        return Fraction(k * g.value % n, n)

    def c(g1, g2, g3):
        return standard_circle_order(rotation(g1), rotation(g2), rotation(g3))

    return CircularOrder(group, c, tag=f"rot({n},{k % n})", rotation=rotation)


def arrangement_order(table, arrangement):
    """The circular order reading a cyclic arrangement of table indices."""
    position = {index: i for i, index in enumerate(arrangement)}

    def c(g1, g2, g3):
        if not _distinct(g1, g2, g3):
            return 0
        a, b, d = position[g1.index], position[g2.index], position[g3.index]
        return _cyclic_sign(a < b, a < d, b < d)

    return CircularOrder(table, c, tag=f"arrangement{tuple(arrangement)}")


@dataclass(frozen=True)
class ShortExactSequence:
    """1 → K → G → H → 1 given by computable maps.

    ``project`` sends G to H. ``to_kernel`` sends an element of G lying in the
    kernel to the group the kernel order lives on, and must raise ValueError
    for anything else. By default the kernel order lives on G itself.
    """

    group: object
    quotient: object
    project: object
    to_kernel: object = field(default=None)

    def kernel_element(self, g):
        if self.project(g) != self.quotient.identity():
            raise ValueError(f"{g!r} does not lie in the kernel")
        return g if self.to_kernel is None else self.to_kernel(g)


def lex_circular_order(ses, kernel_order, quotient_order):
    """Circular order on G from a left order on K and a circular order on H."""
    group = ses.group
    kernel_secret = secret_left_order(kernel_order)

    def c(g1, g2, g3):
        if not _distinct(g1, g2, g3):
            return 0
        images = [ses.project(g) for g in (g1, g2, g3)]
        if _distinct(*images):
            return quotient_order(*images)
        if images[0] == images[1] == images[2]:
            inv = ~g1
            return kernel_secret(
                kernel_order.group.identity(),
                ses.kernel_element(inv * g2),
                ses.kernel_element(inv * g3),
            )
        triple = (g1, g2, g3)
        for shift in range(3):
            a, b = triple[shift], triple[(shift + 1) % 3]
            if images[shift] == images[(shift + 1) % 3]:
                return 1 if kernel_order.is_positive(ses.kernel_element(~a * b)) else -1
        raise RuntimeError("unreachable: two equal images not found")

    def rotation(g):
        return quotient_order.rotation(ses.project(g))

    return CircularOrder(
        group,
        c,
        tag=f"lex({kernel_order.tag},{quotient_order.tag})",
        rotation=rotation if quotient_order.rotation is not None else None,
    )


def lex_left_order(ses, kernel_order, quotient_order):
    def positive(g):
        image = ses.project(g)
        if image != ses.quotient.identity():
            return quotient_order.is_positive(image)
        return kernel_order.is_positive(ses.kernel_element(g))

    return LeftOrder(
        ses.group, positive, tag=f"lex({kernel_order.tag},{quotient_order.tag})"
    )


# Planar order on free products of cyclic groups
#
# The Bass–Serre tree has a central vertex for each element and a vertex for
# each coset gG_j. Around a central vertex the edges are ordered by factor
# index, with the element itself sitting in the corner between edge n-1 and
# edge 0. Around gG_j the neighbours gs are ordered by the factor order on s.
# Both choices are invariant under left translation, so the contour order of
# central vertices is a circular order on the group.


def planar_free_product_order(group, factor_orders):
    if not isinstance(group, FreeProduct):
        raise ValueError(f"{group!r} is not a free product of cyclic groups")
    if len(factor_orders) != len(group.factors):
        raise ValueError("need exactly one circular order per factor")
    for order, modulus in zip(factor_orders, group.factors, strict=True):
        if not isinstance(order.group, CyclicGroup) or order.group.modulus != modulus:
            raise ValueError(f"{order!r} is not an order on the factor of order {modulus}")
    n = len(group.factors)

    def edge_key(entered, j):
        if entered is None:
            return 2 * j
        return 2 * ((j - entered - 1) % n)

    def corner_key(entered):
        if entered is None:
            return -1
        return 2 * (n - entered - 1) - 1

    def before(u, v):
        """True if u precedes v in the contour order read from the identity."""
        entered = None
        depth = 0
        while True:
            u_next = u[depth] if depth < len(u) else None
            v_next = v[depth] if depth < len(v) else None
            if u_next is None:
                return corner_key(entered) < edge_key(entered, v_next[0])
            if v_next is None:
                return edge_key(entered, u_next[0]) < corner_key(entered)
            if u_next != v_next:
                if u_next[0] != v_next[0]:
                    return edge_key(entered, u_next[0]) < edge_key(entered, v_next[0])
                order = factor_orders[u_next[0]]
                factor = order.group
                return (
                    order(
                        factor.identity(),
                        factor.element(u_next[1]),
                        factor.element(v_next[1]),
                    )
                    == 1
                )
            entered = u_next[0]
            depth += 1

    def c(g1, g2, g3):
        if not _distinct(g1, g2, g3):
            return 0
        inv = ~g1
        return 1 if before((inv * g2).word, (inv * g3).word) else -1

    return CircularOrder(
        group, c, tag=f"planar({','.join(o.tag or '?' for o in factor_orders)})"
    )


def rational_rotation_order(r, group=None, orientation=1):
    """A circular order on ℤ with rot(1) = r, lexicographic over ℤ/q.

    ``orientation`` orders the kernel qℤ upward (1) or downward (-1).
    """
    r = Fraction(r) % 1
    group = group or CyclicGroup()
    if r == 0:
        return secret_left_order(
            LeftOrder(group, lambda g: orientation * g.value > 0, tag="standard")
        )
    q = r.denominator
    quotient = CyclicGroup(q)
    ses = ShortExactSequence(group, quotient, lambda g: quotient.element(g.value))
    kernel_order = LeftOrder(group, lambda g: orientation * g.value > 0, tag="kernel")
    order = lex_circular_order(
        ses, kernel_order, cyclic_rot_order(q, r.numerator, group=quotient)
    )
    order.tag = f"rotation({r})"
    return order


def extend_cyclic_order(k, sub):
    """Extend a circular order on kℤ ⊂ ℤ to all of ℤ.

    Reads α = rot_sub(k), sends 1 to α/k on the circle and orders the
    kernel of the resulting finite image the way ``sub`` orders it.
    """
    from .extensions import rot

    if k < 1:
        raise ValueError(f"index must be positive, got {k}")
    if k == 1:
        return sub
    group = sub.group
    alpha = rot(group.element(k), sub).exact
    if alpha is None:
        raise ValueError("rot of the subgroup generator is not exactly known")
    beta = alpha / k
    m = beta.denominator
    quotient = CyclicGroup(m)
    quotient_order = cyclic_rot_order(m, beta.numerator, group=quotient)
    period = alpha.denominator * k
    sign = sub(group.identity(), group.element(period), group.element(2 * period))
    ses = ShortExactSequence(group, quotient, lambda g: quotient.element(g.value))
    kernel_order = LeftOrder(group, lambda g: sign * g.value > 0, tag="kernel")
    extended = lex_circular_order(ses, kernel_order, quotient_order)
    extended.tag = f"extend({k},{sub.tag})"
    logger.debug("extended %s to Z with rot(1)=%s", sub.tag, beta)
    return extended


# Axiom validation


@dataclass(frozen=True, order=True)
class AxiomViolation:
    axiom: int
    indices: tuple
    elements: tuple = field(compare=False)


@dataclass
class AxiomReport:
    violations: list
    checked: dict

    @property
    def ok(self):
        return not self.violations


def evaluation_tensor(c, elements):
    n = len(elements)
    tensor = np.zeros((n, n, n), dtype=np.int8)
    for i, a in enumerate(elements):
        for j, b in enumerate(elements):
            for k, d in enumerate(elements):
                tensor[i, j, k] = c(a, b, d)
    return tensor


def validate_axioms(c, elements=None):
    """Check the three circular-order axioms on a finite element set.

    With ``elements`` omitted the whole (finite) group is checked.
    """
    if elements is None:
        elements = c.group.elements()
    elements = list(elements)
    n = len(elements)
    index = {e: i for i, e in enumerate(elements)}
    violations = []

    def violation(axiom, idx):
        idx = tuple(int(i) for i in idx)
        return AxiomViolation(axiom, idx, tuple(elements[i] for i in idx))

    C = evaluation_tensor(c, elements)

    # nondegeneracy: zero exactly on non-distinct triples
    i, j, k = np.indices((n, n, n))
    distinct = (i != j) & (j != k) & (i != k)
    bad = (C == 0) == distinct
    bad |= (C != 0) & (np.abs(C) != 1)
    violations += [violation(1, idx) for idx in np.argwhere(bad)]

    # cocycle identity over all 4-tuples
    Ci = C.astype(np.int16)
    D = (
        Ci[:, :, :, None]
        - Ci[:, :, None, :]
        + Ci[:, None, :, :]
        - Ci[None, :, :, :]
    )
    violations += [violation(2, idx) for idx in np.argwhere(D != 0)]

    # left invariance
    for g_index, g in enumerate(elements):
        if g == c.group.identity():
            continue
        shifted = [g * e for e in elements]
        positions = [index.get(x, -1) for x in shifted]
        if min(positions, default=0) >= 0:
            P = np.array(positions)
            T = C[np.ix_(P, P, P)]
            for idx in np.argwhere(T != C):
                violations.append(violation(3, (g_index, *idx)))
            continue
        for a in range(n):
            for b in range(n):
                for d in range(n):
                    if c(shifted[a], shifted[b], shifted[d]) != C[a, b, d]:
                        violations.append(violation(3, (g_index, a, b, d)))

    violations.sort()
    checked = {"elements": n, "triples": n**3, "quadruples": n**4}
    if violations:
        logger.info(
            "%s fails %d axiom checks, first %s", c, len(violations), violations[0]
        )
    return AxiomReport(violations, checked)
