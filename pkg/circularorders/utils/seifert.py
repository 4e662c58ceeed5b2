"""Seifert fibred spaces: homology, finiteness, longitudes and rot(h).

Conventions used throughout:

- The presentation has γᵢ^αᵢ = h^βᵢ and ∏[aⱼ,bⱼ]∏γᵢ∏xₖ = h^(−b), so the Euler
  number e = −(b + Σβᵢ/αᵢ) is unchanged by (βᵢ, b) ↦ (βᵢ + αᵢ, b − 1).
- A slope (a, b) on a boundary torus means a·s + b·h where s is the boundary
  generator xₖ of the section and h the regular fibre. So h is always (0, 1).
"""

import itertools
import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property

from .euler import AbelianInvariants, AbelianQuotient, matrix_rank
from .groups import CyclicGroup, FreeProduct, LatticeGroup
from .orders import (
    LeftOrder,
    ShortExactSequence,
    cyclic_rot_order,
    lex_circular_order,
    planar_free_product_order,
    rational_rotation_order,
    secret_left_order,
    standard_integer_order,
)

logger = logging.getLogger(__name__)


class UnsupportedSeifertData(ValueError):
    """Seifert data outside the presentations this module implements."""


class FinitePi1Error(ValueError):
    """π₁ is finite: circularly orderable only when it is cyclic."""


@dataclass(frozen=True)
class Slope:
    """A primitive pair (a, b), up to sign, normalised so a > 0 or a = 0 < b."""

    a: int
    b: int

    def __post_init__(self):
        a, b = int(self.a), int(self.b)
        if a == 0 and b == 0:
            raise ValueError("(0, 0) is not a slope")
        if math.gcd(a, b) != 1:
            raise ValueError(f"slope ({a}, {b}) is not primitive")
        if a < 0 or (a == 0 and b < 0):
            a, b = -a, -b
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)

    @classmethod
    def primitive(cls, a, b):
        g = math.gcd(int(a), int(b))
        if g == 0:
            raise ValueError("(0, 0) is not a slope")
        return cls(a // g, b // g)

    def __iter__(self):
        return iter((self.a, self.b))

    def transform(self, matrix):
        """The image under an integer matrix acting on column vectors."""
        (p, q), (r, s) = matrix
        return Slope.primitive(p * self.a + q * self.b, r * self.a + s * self.b)

    def __str__(self):
        return f"({self.a}, {self.b})"


FIBRE = Slope(0, 1)


@dataclass(frozen=True)
class SeifertData:
    total_orientable: bool = True
    base_orientable: bool = True
    genus: int = 0
    boundaries: int = 0
    pairs: tuple = ()
    b: int = 0

    def __post_init__(self):
        pairs = tuple((int(alpha), int(beta)) for alpha, beta in self.pairs)
        object.__setattr__(self, "pairs", pairs)
        if self.genus < 0 or self.boundaries < 0:
            raise ValueError("genus and boundary count must be nonnegative")
        if not self.base_orientable and self.genus < 1:
            raise ValueError("a nonorientable base needs at least one crosscap")
        for alpha, beta in pairs:
            if alpha < 1:
                raise ValueError(f"fibre order must be positive, got {alpha}")
            if math.gcd(alpha, beta) != 1:
                raise ValueError(f"pair ({alpha}, {beta}) is not coprime")

    @classmethod
    def from_dict(cls, data):
        known = {"total_orientable", "base_orientable", "genus", "boundaries", "pairs", "b"}
        unknown = set(data) - known
        if unknown:
            raise ValueError(f"unknown Seifert data fields: {sorted(unknown)}")
        return cls(**{**data, "pairs": tuple(tuple(p) for p in data.get("pairs", ()))})

    def to_dict(self):
        return {
            "total_orientable": self.total_orientable,
            "base_orientable": self.base_orientable,
            "genus": self.genus,
            "boundaries": self.boundaries,
            "pairs": [list(p) for p in self.pairs],
            "b": self.b,
        }

    @property
    def cone_orders(self):
        return tuple(sorted(alpha for alpha, _ in self.pairs if alpha > 1))

    @property
    def is_closed(self):
        return self.boundaries == 0

    @property
    def is_twisted_i_bundle(self):
        """The twisted I-bundle over the Klein bottle, in either fibration."""
        if not self.total_orientable or self.boundaries != 1:
            return False
        if not self.base_orientable:
            return self.genus == 1 and not self.cone_orders
        return self.genus == 0 and self.cone_orders == (2, 2)

    @property
    def base_name(self):
        if self.base_orientable:
            names = {(0, 0): "S2", (0, 1): "D2", (0, 2): "A2", (1, 0): "T2"}
        else:
            names = {(1, 0): "P2", (1, 1): "Mobius", (2, 0): "K2"}
        key = (self.genus, self.boundaries)
        if key in names:
            return names[key]
        kind = "orientable" if self.base_orientable else "nonorientable"
        return f"surface({kind},g={self.genus},m={self.boundaries})"

    @property
    def symbol(self):
        cones = self.cone_orders
        return self.base_name + (f"({','.join(map(str, cones))})" if cones else "")

    def __str__(self):
        return f"{self.symbol} pairs={list(self.pairs)} b={self.b}"


@dataclass
class HomologyPresentation:
    """The abelianised presentation: one row per relation."""

    labels: list
    relations: list
    boundary: list
    fibre: int

    @property
    def generators(self):
        return len(self.labels)

    @cached_property
    def quotient(self):
        return AbelianQuotient.from_relations(self.relations, self.generators)

    def slope_vector(self, index, slope):
        """The class a·x_index + b·h as a generator vector."""
        vector = [0] * self.generators
        vector[self.boundary[index]] += slope[0]
        vector[self.fibre] += slope[1]
        return vector


def presentation(sd):
    if not sd.total_orientable:
        raise UnsupportedSeifertData(
            "nonorientable total spaces are outside the implemented presentations"
        )
    labels = []
    crosscaps = []
    for j in range(sd.genus):
        if sd.base_orientable:
            labels += [f"a{j + 1}", f"b{j + 1}"]
        else:
            crosscaps.append(len(labels))
            labels.append(f"a{j + 1}")
    gammas = list(range(len(labels), len(labels) + len(sd.pairs)))
    labels += [f"g{i + 1}" for i in range(len(sd.pairs))]
    boundary = list(range(len(labels), len(labels) + sd.boundaries))
    labels += [f"x{k + 1}" for k in range(sd.boundaries)]
    fibre = len(labels)
    labels.append("h")

    relations = []
    for gamma, (alpha, beta) in zip(gammas, sd.pairs, strict=True):
        row = [0] * len(labels)
        row[gamma] = alpha
        row[fibre] = -beta
        relations.append(row)
    product = [0] * len(labels)
    for j in crosscaps:
        product[j] = 2
    for i in gammas + boundary:
        product[i] = 1
    product[fibre] = sd.b
    relations.append(product)
    if crosscaps:
        # a h a⁻¹ = h⁻¹ abelianises to 2h = 0
        row = [0] * len(labels)
        row[fibre] = 2
        relations.append(row)
    return HomologyPresentation(labels, relations, boundary, fibre)


def h1(sd):
    return presentation(sd).quotient.invariants


def orbifold_euler_char(sd):
    if sd.base_orientable:
        chi = 2 - 2 * sd.genus - sd.boundaries
    else:
        chi = 2 - sd.genus - sd.boundaries
    return Fraction(chi) - sum(1 - Fraction(1, alpha) for alpha in sd.cone_orders)


def euler_number(sd):
    return -(sd.b + sum(Fraction(beta, alpha) for alpha, beta in sd.pairs))


def is_finite_pi1(sd):
    if not sd.total_orientable:
        raise UnsupportedSeifertData(
            "finiteness of π₁ is only decided for orientable total spaces"
        )
    if sd.boundaries:
        return False
    return orbifold_euler_char(sd) > 0 and euler_number(sd) != 0


def pi1_order(sd):
    """|π₁| for finite π₁, else math.inf."""
    if not is_finite_pi1(sd):
        return math.inf
    e = abs(euler_number(sd))
    cones = sd.cone_orders
    if sd.base_orientable and len(cones) <= 2:
        order = e * math.prod(cones)
    else:
        order = e * (2 / orbifold_euler_char(sd)) ** 2
    if order.denominator != 1:
        raise RuntimeError(f"non-integral order {order} for {sd}")
    return int(order)


def is_cyclic_pi1(sd):
    order = pi1_order(sd)
    if order == math.inf:
        return False
    return h1(sd).order == order


# Boundary slopes


def longitude_in(quotient, s_vector, h_vector):
    """The primitive a·s + b·h with torsion image, and the order of that image."""
    fs = quotient.free_part(s_vector)
    fh = quotient.free_part(h_vector)
    rank = matrix_rank([fs, fh]) if fs else 0
    if rank != 1:
        raise ValueError(
            f"boundary image has rank {rank}, not 1: not a rational homology solid torus"
        )
    i = next(i for i, (p, q) in enumerate(zip(fs, fh, strict=True)) if p or q)
    slope = Slope.primitive(fh[i], -fs[i])
    image = [slope.a * p + slope.b * q for p, q in zip(s_vector, h_vector, strict=True)]
    return slope, quotient.order(image)


def rational_longitude(sd):
    if sd.boundaries != 1:
        raise ValueError(f"rational longitude needs one boundary torus, got {sd.boundaries}")
    pres = presentation(sd)
    return longitude_in(
        pres.quotient, pres.slope_vector(0, (1, 0)), pres.slope_vector(0, (0, 1))
    )


def boundary_image_rank(sd):
    """Rank over ℚ of the image of H₁(∂M) in H₁(M)."""
    if not sd.boundaries:
        return 0
    pres = presentation(sd)
    rows = [
        pres.quotient.free_part(pres.slope_vector(k, (1, 0)))
        for k in range(sd.boundaries)
    ]
    rows.append(pres.quotient.free_part(pres.slope_vector(0, (0, 1))))
    return matrix_rank(rows)


def bezout(a, b):
    """(g, u, v) with u·a + v·b = g = gcd(a, b)."""
    old_r, r = a, b
    old_u, u = 1, 0
    old_v, v = 0, 1
    while r:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_u, u = u, old_u - q * u
        old_v, v = v, old_v - q * v
    if old_r < 0:
        return -old_r, -old_u, -old_v
    return old_r, old_u, old_v


def meridian(sd):
    """A slope whose class generates H₁ = ℤ of a knot exterior in a homology sphere.

    Any two such slopes differ by a multiple of the longitude; this returns the
    Bézout solution, which is the true meridian for torus-knot exteriors.
    """
    pres = presentation(sd)
    if sd.boundaries != 1 or pres.quotient.invariants != AbelianInvariants((), 1):
        raise ValueError(f"{sd.symbol} is not a knot exterior in a homology sphere")
    (fs,) = pres.quotient.free_part(pres.slope_vector(0, (1, 0)))
    (fh,) = pres.quotient.free_part(pres.slope_vector(0, (0, 1)))
    g, u, v = bezout(fs, fh)
    if g != 1:
        raise ValueError(f"boundary of {sd.symbol} does not generate H₁")
    mu = Slope(u, v)
    longitude, _ = rational_longitude(sd)
    if abs(mu.a * longitude.b - mu.b * longitude.a) != 1:
        raise RuntimeError(f"meridian {mu} and longitude {longitude} are not dual")
    return mu


# Base orbifolds


@dataclass(frozen=True)
class OrbifoldClass:
    symbol: str
    cone_orders: tuple
    in_a: bool
    in_f: bool
    note: str = ""


_PLATONIC = ((2, 3, 3), (2, 3, 4), (2, 3, 5))
_SMALL = ((2, 2), (2, 3))


def base_orbifold_class(sd):
    """Membership of the base in 𝒜 (finite fillings possible) and ℱ ⊂ 𝒜."""
    if sd.is_twisted_i_bundle and not sd.base_orientable:
        return OrbifoldClass(
            "D2(2,2)",
            (2, 2),
            True,
            True,
            note="Mobius band base without exceptional fibres, refibred over D2(2,2)",
        )
    cones = sd.cone_orders
    if not (sd.base_orientable and sd.genus == 0 and sd.boundaries == 1):
        return OrbifoldClass(sd.symbol, cones, False, False, note="base is not a disk")
    if len(cones) < 2:
        return OrbifoldClass(sd.symbol, cones, False, False, note="solid torus")
    in_a = len(cones) == 2 or (
        len(cones) == 3 and (cones[:2] == (2, 2) or cones in _PLATONIC)
    )
    return OrbifoldClass(sd.symbol, cones, in_a, cones in _SMALL)


def admits_finite_filling(sd):
    """Some Dehn filling of this one-boundary piece has finite π₁."""
    if sd.boundaries != 1:
        raise ValueError("finite fillings are only tested on one-boundary pieces")
    # filling along a slope at distance 1 from h caps the base off with a disk
    return orbifold_euler_char(sd) + 1 > 0


@dataclass
class OrbifoldGroupReport:
    orderable: bool | None
    reason: str
    order: object = None


def orbifold_co(sd):
    """Circular orderability of π₁ of the base orbifold."""
    cones = sd.cone_orders
    chi = orbifold_euler_char(sd)
    if sd.boundaries:
        free_rank = (2 * sd.genus if sd.base_orientable else sd.genus) + sd.boundaries - 1
        factors = list(cones) + [None] * free_rank
        if not factors:
            return OrbifoldGroupReport(True, "trivial orbifold group")
        group = FreeProduct(factors)
        factor_orders = [
            cyclic_rot_order(a, 1)
            if a is not None
            else secret_left_order(standard_integer_order(CyclicGroup()))
            for a in factors
        ]
        return OrbifoldGroupReport(
            True,
            "free product of cyclic groups, ordered by the planar contour order",
            planar_free_product_order(group, factor_orders),
        )
    if sd.base_orientable and chi < 0:
        return OrbifoldGroupReport(
            True, "hyperbolic orbifold group embeds in PSL(2,R) ⊂ Homeo+(S¹)"
        )
    if sd.base_orientable and chi == 0:
        return OrbifoldGroupReport(
            True,
            "Euclidean orbifold group: lexicographic from its translation lattice "
            "and cyclic point group",
        )
    if not sd.base_orientable and sd.genus == 1 and len(cones) >= 2:
        return OrbifoldGroupReport(
            True,
            "amalgam of a free product of cyclic groups with ℤ over the cyclic "
            "subgroup generated by the product of the cyclic generators",
        )
    return OrbifoldGroupReport(None, f"no criterion applies to {sd.symbol}")


# rot(h) of a regular fibre


@dataclass(frozen=True)
class RotationClassification:
    """Which values of rot(h) circular orders of π₁ realise.

    ``kind`` is one of every-rational, reciprocals, zero-or-half or zero.
    ``achievable`` only answers True for values a construction certifies.
    """

    kind: str
    rules: tuple
    notes: tuple = field(default=())

    DISPLAY = {
        "every-rational": "Q/Z",
        "reciprocals": "{0} ∪ {±1/p : p ≥ 1}",
        "zero-or-half": "{0, 1/2}",
        "zero": "{0}",
    }

    @property
    def values(self):
        return self.DISPLAY[self.kind]

    @property
    def constrained(self):
        return self.kind == "zero-or-half"

    def achievable(self, r):
        r = Fraction(r) % 1
        if r == 0 or self.kind == "every-rational":
            return True
        if self.kind == "reciprocals":
            return r.numerator == 1 or r.numerator == r.denominator - 1
        return False

    def possible(self, r):
        """False only when r is ruled out for every circular order."""
        if self.constrained:
            return Fraction(r) % 1 in (0, Fraction(1, 2))
        return True

    def to_dict(self):
        return {
            "kind": self.kind,
            "values": self.values,
            "rules": list(self.rules),
            "notes": list(self.notes),
        }


ROT_ZERO = "an infinite Seifert fibred group has a circular order with rot(h) = 0"


def sfco_classification(sd, left_orderable=None):
    """Achievable rot(h) for an infinite π₁, with the facts used."""
    if sd.total_orientable and is_finite_pi1(sd):
        raise FinitePi1Error(
            f"π₁ of {sd.symbol} is finite: not circularly orderable unless cyclic "
            f"(cyclic: {is_cyclic_pi1(sd)})"
        )
    exceptional = bool(sd.cone_orders)
    if not sd.total_orientable or (not sd.base_orientable and exceptional):
        return RotationClassification(
            "zero-or-half",
            (ROT_ZERO, "a h a⁻¹ = h⁻¹ and rot is a conjugacy invariant, so rot(h) = -rot(h)"),
        )
    if not exceptional:
        return RotationClassification(
            "every-rational",
            (
                ROT_ZERO,
                "without exceptional fibres any circular order of ℤ on ⟨h⟩ "
                "extends to π₁",
            ),
            ("irrational values are realised as well; not materialised",),
        )
    if left_orderable is None:
        left_orderable = h1(sd).rank > 0
    if left_orderable:
        return RotationClassification(
            "reciprocals",
            (
                ROT_ZERO,
                "a left order with h cofinal and central gives rot(h) = 1/p for every p",
            ),
        )
    return RotationClassification(
        "zero", (ROT_ZERO,), ("left-orderability of π₁ is not decided",)
    )


def materialize_t3_order(r):
    """A circular order on ℤ³ with rot((0, 0, 1)) = r."""
    group = LatticeGroup(3)
    fibre = CyclicGroup()
    ses = ShortExactSequence(group, fibre, lambda g: fibre.element(g.coords[2]))

    def positive(g):
        return next((c for c in g.coords[:2] if c), 0) > 0

    kernel_order = LeftOrder(group, positive, tag="lex")
    order = lex_circular_order(ses, kernel_order, rational_rotation_order(r, fibre))
    order.tag = f"t3({Fraction(r) % 1})"
    return order


# Brieskorn manifolds


def brieskorn(p, q, n):
    """Seifert data of the link Σ(p, q, n) of z1^p + z2^q + z3^n = 0."""
    exponents = (p, q, n)
    if min(exponents) < 2:
        raise ValueError(f"Brieskorn exponents must be at least 2, got {exponents}")
    lcm = math.lcm(*exponents)
    product = math.prod(exponents)
    classes = []
    for i in range(3):
        others = [exponents[j] for j in range(3) if j != i]
        lcm_i = math.lcm(*others)
        classes.append((lcm // lcm_i, math.prod(others) // lcm_i))
    twice_genus = product // lcm - sum(count for _, count in classes) + 2
    if twice_genus < 0 or twice_genus % 2:
        raise RuntimeError(f"bad genus count {twice_genus}/2 for Σ{exponents}")
    target = Fraction(product, lcm**2)

    exceptional = [(alpha, count) for alpha, count in classes if alpha > 1]
    units = [
        [beta for beta in range(1, alpha) if math.gcd(beta, alpha) == 1]
        for alpha, _ in exceptional
    ]
    # fibres in one class are permuted by the ℤ/aᵢ action, so they share β
    for betas in itertools.product(*units):
        rest = target - sum(
            count * Fraction(beta, alpha)
            for (alpha, count), beta in zip(exceptional, betas, strict=True)
        )
        if rest.denominator == 1:
            pairs = tuple(
                (alpha, beta)
                for (alpha, count), beta in zip(exceptional, betas, strict=True)
                for _ in range(count)
            )
            sd = SeifertData(genus=twice_genus // 2, pairs=pairs, b=int(rest))
            logger.debug("Σ%s = %s, e = %s", exponents, sd, euler_number(sd))
            return sd
    raise RuntimeError(f"no Seifert invariants realise e = -{target} for Σ{exponents}")
