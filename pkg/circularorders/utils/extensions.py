"""Central extensions of circularly ordered groups and rotation numbers.

A circular order c on G gives a cocycle f_c and a left-ordered central
extension G̃_c with cofinal central element z = (1, id). Going back, a
left order with a central cofinal z gives a circular order on G/⟨z⟩ through
minimal coset representatives.
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from math import gcd

from django.conf import settings

from .groups import Group, GroupElement, GroupMismatchError, power
from .orders import CircularOrder, LeftOrder, ShortExactSequence, lex_circular_order

logger = logging.getLogger(__name__)


class StepBudgetExceeded(ValueError):
    """Raised when floor_by_z cannot bracket an element within its budget."""


def step_budget():
    return getattr(settings, "CORDA_STEP_BUDGET", 10**6)


def denominator_bound():
    return getattr(settings, "CORDA_ROT_DENOMINATOR_BOUND", 64)


def default_n_max():
    return getattr(settings, "CORDA_ROT_N_MAX", 1000)


@dataclass(frozen=True)
class InhomogeneousCocycle:
    order: CircularOrder

    @property
    def group(self):
        return self.order.group

    def __call__(self, g, h):
        identity = self.group.identity()
        if g == identity or h == identity:
            return 0
        gh = g * h
        if gh == identity:
            return 1
        return (1 - self.order(identity, g, gh)) // 2


def cocycle_from_order(c):
    return InhomogeneousCocycle(c)


@dataclass(frozen=True)
class ExtensionElement(GroupElement):
    group: "CentralExtension"
    level: int
    base: GroupElement

    def __repr__(self):
        return f"({self.level}, {self.base!r})"


class CentralExtension(Group):
    """G̃_c: pairs (a, g) with (a, g)(b, h) = (a + b + f_c(g, h), gh)."""

    # Plain attribute (the circular order c) shadowing the read-only Group.order
    order = None

    def __init__(self, order):
        self.order = order
        self.base = order.group
        self.cocycle = cocycle_from_order(order)
        self.name = f"~({self.base.name})"

    def __call__(self, level, base):
        if base.group is not self.base:
            raise GroupMismatchError(f"{base!r} is not an element of {self.base.name}")
        return ExtensionElement(self, int(level), base)

    def identity(self):
        return ExtensionElement(self, 0, self.base.identity())

    @property
    def z(self):
        return ExtensionElement(self, 1, self.base.identity())

    def _multiply(self, x, y):
        return ExtensionElement(
            self,
            x.level + y.level + self.cocycle(x.base, y.base),
            x.base * y.base,
        )

    def inverse(self, x):
        inv = ~x.base
        return ExtensionElement(self, -x.level - self.cocycle(inv, x.base), inv)

    def is_positive(self, x):
        return x.level > 0 or (x.level == 0 and x.base != self.base.identity())

    @property
    def left_order(self):
        return LeftOrder(self, self.is_positive, tag=f"lift({self.order.tag})")

    def window(self, levels, bases=None):
        """Elements (a, g) for a in ``levels`` and g in ``bases``."""
        bases = self.base.elements() if bases is None else bases
        return [ExtensionElement(self, a, g) for a in levels for g in bases]

    def sort_key(self, x):
        return (x.level, *self.base.sort_key(x.base))


def extension_compare(x, y):
    if x.group is not y.group or not isinstance(x.group, CentralExtension):
        raise GroupMismatchError("elements come from different extensions")
    return x.group.left_order.compare(x, y)


def floor_by_z(g, z, lo, budget=None):
    """The unique a with z^a <= g < z^(a+1) under the left order ``lo``.

    Counts comparisons and exponents against ``budget``; running out means
    z is not cofinal, or not enough so for this g.
    """
    budget = budget or step_budget()
    if not lo.is_positive(z):
        raise ValueError(f"{z!r} is not positive in {lo!r}")
    steps = 0

    def at_most(a):
        nonlocal steps
        steps += 1
        if steps > budget or abs(a) > budget:
            raise StepBudgetExceeded(
                f"cofinality not witnessed: {z!r} does not bracket {g!r} "
                f"within {budget} steps"
            )
        return lo.compare(power(z, a), g) <= 0

    if at_most(0):
        low, step = 0, 1
        while at_most(step):
            low, step = step, step * 2
        high = step
    else:
        high, step = 0, 1
        while not at_most(-step):
            high, step = -step, step * 2
        low = -step
    while high - low > 1:
        mid = (low + high) // 2
        if at_most(mid):
            low = mid
        else:
            high = mid
    logger.debug("floor of %r by %r is %d after %d steps", g, z, low, steps)
    return low


# Quotients by a central cofinal element


@dataclass(frozen=True)
class CosetElement(GroupElement):
    group: "QuotientGroup"
    representative: GroupElement

    def __repr__(self):
        return f"[{self.representative!r}]"


class QuotientGroup(Group):
    """G/⟨z^p⟩ with each coset stored as its minimal representative."""

    def __init__(self, lo, z, p=1, budget=None):
        if p < 1:
            raise ValueError(f"p must be positive, got {p}")
        self.lo = lo
        self.z = z
        self.p = p
        self.zp = power(z, p)
        self.ambient = lo.group
        self.budget = budget
        self.name = f"{self.ambient.name}/<{z!r}^{p}>"

    def coset(self, g):
        a = floor_by_z(g, self.zp, self.lo, self.budget)
        return CosetElement(self, power(self.zp, -a) * g)

    __call__ = coset

    def identity(self):
        return CosetElement(self, self.ambient.identity())

    def _multiply(self, x, y):
        return self.coset(x.representative * y.representative)

    def inverse(self, x):
        return self.coset(~x.representative)

    def sort_key(self, x):
        return self.ambient.sort_key(x.representative)


def quotient_circular_order(lo, z, p=1, budget=None, group=None):
    quotient = group or QuotientGroup(lo, z, p, budget)

    def c(x1, x2, x3):
        r1, r2, r3 = x1.representative, x2.representative, x3.representative
        if r1 == r2 or r2 == r3 or r1 == r3:
            return 0
        inversions = (
            (lo.compare(r1, r2) > 0) + (lo.compare(r1, r3) > 0) + (lo.compare(r2, r3) > 0)
        )
        return 1 if inversions % 2 == 0 else -1

    order = CircularOrder(quotient, c, tag=f"quotient({lo.tag},p={quotient.p})")

    def rotation(x):
        lifted = CentralExtension(order)(0, x)
        return _witnessed_rotation(lifted, denominator_bound(), default_n_max(), budget)

    order.rotation = rotation
    return order


# Rotation numbers


@dataclass(frozen=True)
class RotationValue:
    """A rotation number: an exact value, or an interval [low, low + width].

    ``low`` is reduced into [0, 1); the interval may wrap past 1.
    """

    low: Fraction
    width: Fraction
    exact: Fraction | None = None

    @classmethod
    def exact_value(cls, value, width=Fraction(0), low=None):
        value = Fraction(value) % 1
        low = value if low is None else Fraction(low) % 1
        return cls(low, Fraction(width), value)

    @property
    def is_exact(self):
        return self.exact is not None

    @property
    def high(self):
        return self.low + self.width

    def contains(self, value):
        return (Fraction(value) - self.low) % 1 <= self.width

    def __str__(self):
        if self.is_exact:
            return str(self.exact)
        return f"[{self.low}, {self.high}]"


def _torsion_rotation(lifted, bound):
    """rot from g^q = id: then lifted^q = z^L and rot = L/q exactly."""
    ext = lifted.group
    identity = ext.base.identity()
    current = lifted
    for q in range(1, bound + 1):
        if current.base == identity:
            return Fraction(current.level, q) % 1
        current = current * lifted
    return None


def _candidates(interval, bound):
    return {
        Fraction(p, q)
        for q in range(1, bound + 1)
        for p in range(q)
        if gcd(p, q) == 1 and interval.contains(Fraction(p, q))
    }


def _bounded_rotation(lifted, interval, bound, horizon, budget=None):
    """rot = p/q from lifted^q = z^p·w with w^k in [id, z) for every k <= horizon.

    Only tried when exactly one p/q with q <= bound lies in the interval.
    w >= id, so its powers increase and the floor of w^horizon bounds them all.
    """
    candidates = _candidates(interval, bound)
    if len(candidates) != 1:
        return None
    (value,) = candidates
    q = value.denominator
    ext = lifted.group
    lifted_q = power(lifted, q)
    level = floor_by_z(lifted_q, ext.z, ext.left_order, budget)
    if Fraction(level, q) % 1 != value:
        return None
    remainder = power(ext.z, -level) * lifted_q
    if floor_by_z(power(remainder, horizon), ext.z, ext.left_order, budget) != 0:
        return None
    logger.debug("rot of %r is %s, bounded through %d powers", lifted, value, horizon)
    return value


def _witnessed_rotation(lifted, bound, horizon, budget=None):
    exact = _torsion_rotation(lifted, bound)
    if exact is not None:
        return exact
    ext = lifted.group
    a = floor_by_z(power(lifted, horizon), ext.z, ext.left_order, budget)
    interval = RotationValue(Fraction(a, horizon) % 1, Fraction(1, horizon))
    return _bounded_rotation(lifted, interval, bound, horizon, budget)


def rot(g, c, n_max=None, *, lift_level=0, upgrade=True, bound=None, budget=None):
    """rot_c(g) from the levels a_n of the lift g̃ = (lift_level, g) in G̃_c.

    The interval comes from z^(a_n) <= g̃^n < z^(a_n+1). It is upgraded to an
    exact value from a torsion witness, from the construction's own rotation
    closure, or from a bounded remainder of g̃^q. The exact value must lie in
    the interval.
    """
    if g.group is not c.group:
        raise GroupMismatchError(f"{g!r} is not an element of {c.group.name}")
    if g == c.group.identity():
        return RotationValue.exact_value(0)
    n = n_max or default_n_max()
    ext = CentralExtension(c)
    lifted = ext(lift_level, g)
    a = floor_by_z(power(lifted, n), ext.z, ext.left_order, budget)
    interval = RotationValue(Fraction(a, n) % 1, Fraction(1, n))
    if not upgrade:
        return interval

    bound = bound or denominator_bound()
    exact = _torsion_rotation(lifted, bound)
    if exact is None and c.rotation is not None:
        exact = c.rotation(g)
    if exact is None:
        exact = _bounded_rotation(lifted, interval, bound, n, budget)
    if exact is None:
        return interval
    if not interval.contains(exact):
        raise RuntimeError(
            f"exact rotation {exact} of {g!r} lies outside the certified "
            f"interval {interval}"
        )
    return RotationValue.exact_value(exact, interval.width, interval.low)


def rot_one_over_p(lo, z, p, budget=None):
    """A circular order on G with rot(z) = 1/p, built lexicographically."""
    quotient_order = quotient_circular_order(lo, z, p, budget)
    quotient = quotient_order.group
    ses = ShortExactSequence(lo.group, quotient, quotient.coset)
    order = lex_circular_order(ses, lo, quotient_order)
    order.tag = f"one_over({p},{lo.tag})"
    return order
