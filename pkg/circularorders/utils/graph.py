"""Graph manifolds as trees of Seifert pieces, and the circular-orderability verdicts.

An edge glues boundary ``a_boundary`` of node ``a`` to boundary ``b_boundary`` of
node ``b``. Its matrix sends (s, h) coordinates on the first torus to (s, h)
coordinates on the second, acting on column vectors, and has determinant -1.
"""

import enum
import logging
import math
from dataclasses import dataclass, field, replace
from fractions import Fraction
from functools import cached_property

from .euler import AbelianQuotient
from .seifert import (
    FIBRE,
    Slope,
    SeifertData,
    UnsupportedSeifertData,
    admits_finite_filling,
    bezout,
    base_orbifold_class,
    h1,
    is_cyclic_pi1,
    is_finite_pi1,
    longitude_in,
    meridian,
    orbifold_euler_char,
    pi1_order,
    presentation,
    rational_longitude,
    sfco_classification,
)

logger = logging.getLogger(__name__)


class MalformedTreeError(ValueError):
    """The input does not describe a tree of Seifert pieces."""


# Rules a certificate may cite. Each entry is the fact the rule rests on.
RULES = {
    "finite-cyclic": "a finite cyclic group is circularly orderable",
    "infinite-seifert": (
        "the fundamental group of a Seifert fibred space is circularly orderable "
        "whenever it is infinite"
    ),
    "positive-betti": (
        "a compact irreducible 3-manifold with positive first Betti number has "
        "left-orderable fundamental group"
    ),
    "klein-bottle-bundles": (
        "two twisted I-bundles over the Klein bottle glued along their boundary "
        "have circularly orderable fundamental group"
    ),
    "two-piece-no-finite-filling-piece": (
        "a two-piece rational homology sphere graph manifold none of whose pieces "
        "has a base orbifold admitting finite fillings is circularly orderable"
    ),
    "two-piece-one-finite-filling-piece": (
        "a two-piece rational homology sphere graph manifold with exactly one piece "
        "whose base orbifold admits finite fillings is circularly orderable"
    ),
    "two-piece-longitude-distance": (
        "a two-piece graph manifold is circularly orderable when filling one piece "
        "along the image of the other piece's rational longitude is provably infinite"
    ),
    "two-piece-longitude-distance-first": (
        "as two-piece-longitude-distance, with only the second piece's base among "
        "D2(2,2) and D2(2,3)"
    ),
    "two-piece-longitude-distance-second": (
        "as two-piece-longitude-distance, with only the first piece's base among "
        "D2(2,2) and D2(2,3)"
    ),
    "coprime-cone-orders": (
        "two knot exteriors in integer homology spheres with pairwise coprime cone "
        "orders glue to a manifold whose commutator subgroup is left-orderable and "
        "whose first homology is cyclic"
    ),
    "no-finite-fillings": (
        "a graph manifold whose one-boundary pieces admit no finite fillings is "
        "circularly orderable whenever its fundamental group is infinite"
    ),
    "longitude-filling-recursion": (
        "for every JSJ torus one side filled along the other side's rational "
        "longitude has infinite fundamental group, and the fillings of each side "
        "stay in the class built this way"
    ),
    "peripheral-killing-slope": (
        "a slope with infinite fillings on both sides whose normal closure contains "
        "one side's peripheral subgroup gives a circular order"
    ),
    "matching-rotation": (
        "fillings along a slope with infinite fundamental groups whose circular "
        "orders give the dual class matching rotation numbers glue to a circular order"
    ),
    "axioms-checked": (
        "an oracle satisfying the circular-order axioms on every triple and "
        "quadruple of a finite group is a circular order on it"
    ),
    "explicit-construction": (
        "orders pulled back from points on the circle, secret left orders, "
        "lexicographic orders of short exact sequences, quotients by a central "
        "cofinal element and planar orders on free products of cyclic groups "
        "are circular orders"
    ),
    "left-orderable": "a left-orderable group is circularly orderable",
    "infinite-quotient": (
        "a P2-irreducible 3-manifold whose fundamental group surjects onto an "
        "infinite circularly orderable group has circularly orderable fundamental group"
    ),
    "divisible-covers": (
        "if the n-fold cyclic branched cover of a prime knot has infinite circularly "
        "orderable fundamental group, so does the m-fold cover for every m divisible by n"
    ),
    "abelian-cover-left-orderable": (
        "a P2-irreducible 3-manifold with cyclic first homology has circularly "
        "orderable fundamental group when its universal abelian cover has "
        "left-orderable fundamental group"
    ),
}


class Status(enum.Enum):
    CO_CERTIFIED = "CO_CERTIFIED"
    NOT_CO = "NOT_CO"
    UNKNOWN = "UNKNOWN"


def _plain(value):
    if isinstance(value, Fraction):
        return str(value)
    if isinstance(value, Slope):
        return [value.a, value.b]
    if isinstance(value, tuple | list):
        return [_plain(v) for v in value]
    if isinstance(value, dict):
        return {k: _plain(v) for k, v in value.items()}
    return value


@dataclass
class Verdict:
    status: Status
    rule: str | None = None
    hypotheses: list = field(default_factory=list)
    notes: list = field(default_factory=list)
    data: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.status is Status.CO_CERTIFIED and self.rule not in RULES:
            raise ValueError(f"unknown rule {self.rule!r} for a certificate")

    @classmethod
    def certified(cls, rule, hypotheses, **data):
        logger.info("certified by %s", rule)
        return cls(Status.CO_CERTIFIED, rule, list(hypotheses), data=data)

    @classmethod
    def not_co(cls, reason, hypotheses=(), **data):
        return cls(Status.NOT_CO, None, list(hypotheses), [reason], data)

    @classmethod
    def unknown(cls, notes, hypotheses=(), **data):
        return cls(Status.UNKNOWN, None, list(hypotheses), list(notes), data)

    @property
    def citation(self):
        return RULES.get(self.rule, "")

    def to_dict(self):
        return {
            "status": self.status.value,
            "rule": self.rule,
            "citation": self.citation,
            "hypotheses": [[statement, _plain(value)] for statement, value in self.hypotheses],
            "notes": list(self.notes),
            "data": _plain(self.data),
        }


def delta(s1, s2):
    (a1, b1), (a2, b2) = s1, s2
    return abs(a1 * b2 - b1 * a2)


def invert(matrix):
    (p, q), (r, s) = matrix
    det = p * s - q * r
    if det not in (1, -1):
        raise MalformedTreeError(f"gluing matrix {matrix} is not invertible over ℤ")
    return ((s * det, -q * det), (-r * det, p * det))


# Dehn filling


@dataclass(frozen=True)
class FilledManifold:
    """A Dehn filling: Seifert data, or a connected sum after filling along h."""

    seifert: SeifertData | None = None
    summands: tuple = ()

    @property
    def is_connected_sum(self):
        return self.seifert is None

    @property
    def is_infinite(self):
        """True, False, or None when finiteness is not decided here."""
        if self.seifert is None:
            lens = [s for s in self.summands if s.startswith("L(")]
            return len(lens) >= 2 or len(lens) < len(self.summands)
        try:
            return not is_finite_pi1(self.seifert)
        except UnsupportedSeifertData:
            return None

    def to_dict(self):
        if self.seifert is None:
            return {"connected_sum": list(self.summands) or ["S3"]}
        return {"seifert": self.seifert.to_dict()}

    def __str__(self):
        if self.seifert is None:
            return " # ".join(self.summands) or "S3"
        return str(self.seifert)


def fill(sd, slope, boundary=0):
    """Fill boundary torus ``boundary`` of ``sd`` along a·s + b·h."""
    if not 0 <= boundary < sd.boundaries:
        raise ValueError(f"{sd.symbol} has no boundary {boundary}")
    if not sd.total_orientable:
        raise UnsupportedSeifertData("filling a nonorientable total space")
    a, b = slope
    if a == 0:
        summands = [f"L({alpha},{beta % alpha})" for alpha, beta in sd.pairs if alpha > 1]
        if sd.base_orientable:
            summands += ["S1xS2"] * (2 * sd.genus)
        elif sd.genus == 1:
            summands += ["L(2,1)", "L(2,1)"]
        else:
            raise UnsupportedSeifertData("fibre filling over a base with several crosscaps")
        summands += ["S1xD2"] * (sd.boundaries - 1)
        return FilledManifold(summands=tuple(summands))
    alpha, beta = abs(a), -b if a > 0 else b
    if alpha == 1:
        filled = replace(sd, boundaries=sd.boundaries - 1, b=sd.b + beta)
    else:
        filled = replace(sd, boundaries=sd.boundaries - 1, pairs=sd.pairs + ((alpha, beta),))
    return FilledManifold(filled)


# Trees of Seifert pieces


def gluing_matrix(matrix):
    """The matrix as nested int tuples, checked to be 2x2 with determinant -1."""
    try:
        matrix = tuple(tuple(int(v) for v in row) for row in matrix)
    except (TypeError, ValueError) as exc:
        raise MalformedTreeError(f"gluing matrix {matrix!r} is not an integer matrix") from exc
    if len(matrix) != 2 or any(len(row) != 2 for row in matrix):
        raise MalformedTreeError(f"gluing matrix {matrix} is not 2x2")
    (p, q), (r, s) = matrix
    if p * s - q * r != -1:
        raise MalformedTreeError(f"gluing matrix {matrix} does not have determinant -1")
    return matrix


@dataclass(frozen=True)
class Edge:
    a: int
    a_boundary: int
    b: int
    b_boundary: int
    matrix: tuple

    def __post_init__(self):
        object.__setattr__(self, "matrix", gluing_matrix(self.matrix))

    @property
    def inverse(self):
        return invert(self.matrix)

    def to_dict(self):
        return {
            "a": self.a,
            "a_boundary": self.a_boundary,
            "b": self.b,
            "b_boundary": self.b_boundary,
            "matrix": [list(row) for row in self.matrix],
        }


def _is_degenerate_piece(sd):
    # solid tori and T²×I never occur as JSJ pieces
    if not sd.base_orientable or sd.genus:
        return False
    cones = len(sd.cone_orders)
    return (sd.boundaries == 1 and cones < 2) or (sd.boundaries == 2 and cones == 0)


@dataclass(frozen=True)
class JsjTree:
    nodes: tuple
    edges: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "nodes", tuple(self.nodes))
        object.__setattr__(self, "edges", tuple(self.edges))
        n = len(self.nodes)
        if not n:
            raise MalformedTreeError("a tree needs at least one node")
        if len(self.edges) != n - 1:
            raise MalformedTreeError(f"{n} nodes need {n - 1} edges, got {len(self.edges)}")
        used = set()
        parent = list(range(n))

        def find(i):
            while parent[i] != i:
                parent[i] = parent[parent[i]]
                i = parent[i]
            return i

        for edge in self.edges:
            for node, index in ((edge.a, edge.a_boundary), (edge.b, edge.b_boundary)):
                if not 0 <= node < n:
                    raise MalformedTreeError(f"edge references node {node} of {n}")
                if not 0 <= index < self.nodes[node].boundaries:
                    raise MalformedTreeError(f"node {node} has no boundary {index}")
                if (node, index) in used:
                    raise MalformedTreeError(f"boundary {index} of node {node} is glued twice")
                used.add((node, index))
            ra, rb = find(edge.a), find(edge.b)
            if ra == rb:
                raise MalformedTreeError("the gluing graph has a cycle")
            parent[ra] = rb
        if n > 1:
            for i, sd in enumerate(self.nodes):
                if not sd.total_orientable:
                    raise MalformedTreeError(f"node {i} is not orientable")
                if _is_degenerate_piece(sd):
                    raise MalformedTreeError(f"node {i} ({sd.symbol}) is not a JSJ piece")

    @classmethod
    def from_dict(cls, data):
        try:
            nodes = [SeifertData.from_dict(node) for node in data["nodes"]]
            edges = [Edge(**edge) for edge in data.get("edges", [])]
        except (KeyError, TypeError) as exc:
            raise MalformedTreeError(f"malformed tree document: {exc}") from exc
        return cls(nodes, edges)

    def to_dict(self):
        return {
            "nodes": [sd.to_dict() for sd in self.nodes],
            "edges": [edge.to_dict() for edge in self.edges],
        }

    @property
    def free_boundaries(self):
        used = {(e.a, e.a_boundary) for e in self.edges}
        used |= {(e.b, e.b_boundary) for e in self.edges}
        return [
            (i, k)
            for i, sd in enumerate(self.nodes)
            for k in range(sd.boundaries)
            if (i, k) not in used
        ]

    def split(self, index):
        """Cut along edge ``index``: the sides holding its a and b ends."""
        cut = self.edges[index]
        rest = [e for i, e in enumerate(self.edges) if i != index]
        return self._component(cut.a, rest), self._component(cut.b, rest)

    def _component(self, start, edges):
        members = {start}
        grown = True
        while grown:
            grown = False
            for e in edges:
                if (e.a in members) != (e.b in members):
                    members |= {e.a, e.b}
                    grown = True
        order = sorted(members)
        renumber = {old: new for new, old in enumerate(order)}
        kept = [
            replace(e, a=renumber[e.a], b=renumber[e.b])
            for e in edges
            if e.a in members
        ]
        return JsjTree([self.nodes[i] for i in order], kept)

    @cached_property
    def presentation(self):
        return tree_presentation(self)


@dataclass
class TreePresentation:
    relations: list
    generators: int
    offsets: list
    pieces: list

    @cached_property
    def quotient(self):
        return AbelianQuotient.from_relations(self.relations, self.generators)

    def slope_vector(self, node, boundary, slope):
        vector = [0] * self.generators
        piece, offset = self.pieces[node], self.offsets[node]
        vector[offset + piece.boundary[boundary]] += slope[0]
        vector[offset + piece.fibre] += slope[1]
        return vector


def tree_presentation(tree):
    pieces = [presentation(sd) for sd in tree.nodes]
    offsets = [0]
    for piece in pieces:
        offsets.append(offsets[-1] + piece.generators)
    total = offsets.pop()
    relations = []
    for piece, offset in zip(pieces, offsets, strict=True):
        for row in piece.relations:
            relations.append([0] * offset + list(row) + [0] * (total - offset - len(row)))
    result = TreePresentation(relations, total, offsets, pieces)
    for edge in tree.edges:
        (p, q), (r, s) = edge.matrix
        # s_a = p·s_b + r·h_b and h_a = q·s_b + s·h_b
        for source, image in (((1, 0), (p, r)), ((0, 1), (q, s))):
            lhs = result.slope_vector(edge.a, edge.a_boundary, source)
            rhs = result.slope_vector(edge.b, edge.b_boundary, image)
            relations.append([x - y for x, y in zip(lhs, rhs, strict=True)])
    return result


def tree_h1(tree):
    return tree.presentation.quotient.invariants


def rational_longitude_graph(tree):
    """The rational longitude on the one free boundary of ``tree``."""
    free = tree.free_boundaries
    if len(free) != 1:
        raise MalformedTreeError(f"expected one free boundary, found {len(free)}")
    node, boundary = free[0]
    pres = tree.presentation
    slope, _ = longitude_in(
        pres.quotient,
        pres.slope_vector(node, boundary, (1, 0)),
        pres.slope_vector(node, boundary, (0, 1)),
    )
    return slope


# Verdicts


def seifert_verdict(sd):
    hypotheses = [("Seifert data", sd.symbol)]
    if sd.boundaries:
        return Verdict.certified("infinite-seifert", hypotheses + [("boundary tori", sd.boundaries)])
    try:
        finite = is_finite_pi1(sd)
    except UnsupportedSeifertData as exc:
        return Verdict.unknown([str(exc)], hypotheses)
    hypotheses.append(("orbifold Euler characteristic", orbifold_euler_char(sd)))
    if not finite:
        hypotheses.append(("π₁ infinite", True))
        return Verdict.certified(
            "infinite-seifert", hypotheses, rotations=sfco_classification(sd).to_dict()
        )
    order = pi1_order(sd)
    hypotheses += [("|π₁|", order), ("|H₁|", h1(sd).order)]
    if is_cyclic_pi1(sd):
        return Verdict.certified("finite-cyclic", hypotheses)
    return Verdict.not_co(f"π₁ is finite of order {order} and not cyclic", hypotheses)


def _provably_infinite_distance(orbifold, d):
    """Whether filling a piece at distance d from its fibre has infinite π₁."""
    if not orbifold.in_f:
        return d != 1
    if orbifold.cone_orders == (2, 2):
        return d == 0
    return d == 0 or d > 5


def _two_piece_parts(tree):
    if len(tree.nodes) != 2 or tree.free_boundaries:
        raise MalformedTreeError("a closed tree with two nodes is required")
    edge = tree.edges[0]
    m1, m2 = tree.nodes[edge.a], tree.nodes[edge.b]
    if m1.boundaries != 1 or m2.boundaries != 1:
        raise MalformedTreeError("both pieces must have exactly one boundary torus")
    return m1, m2, edge


def _coprime_splice(m1, m2, hypotheses):
    for sd in (m1, m2):
        if not (sd.base_orientable and sd.genus == 0):
            return False
        try:
            meridian(sd)
        except ValueError:
            return False
    cones = list(m1.cone_orders) + list(m2.cone_orders)
    coprime = all(math.gcd(x, y) == 1 for i, x in enumerate(cones) for y in cones[i + 1 :])
    hypotheses += [
        ("both pieces are knot exteriors in integer homology spheres", True),
        ("cone orders pairwise coprime", coprime),
    ]
    return coprime


def two_piece_verdict(tree):
    m1, m2, edge = _two_piece_parts(tree)
    b1 = tree_h1(tree).rank
    hypotheses = [("first Betti number", b1)]
    if b1 > 0:
        return Verdict.certified("positive-betti", hypotheses)
    if m1.is_twisted_i_bundle and m2.is_twisted_i_bundle:
        hypotheses.append(("both pieces are twisted I-bundles over the Klein bottle", True))
        return Verdict.certified("klein-bottle-bundles", hypotheses)

    lam1, _ = rational_longitude(m1)
    lam2, _ = rational_longitude(m2)
    d2 = delta(lam1.transform(edge.matrix), FIBRE)
    d1 = delta(lam2.transform(edge.inverse), FIBRE)
    class1, class2 = base_orbifold_class(m1), base_orbifold_class(m2)
    hypotheses += [
        ("rational longitudes", (lam1, lam2)),
        ("Δ(φ(λ1), h2)", d2),
        ("Δ(φ⁻¹(λ2), h1)", d1),
        ("bases", (class1.symbol, class2.symbol)),
        ("finite-filling bases", (class1.in_a, class2.in_a)),
        ("bases D2(2,2) or D2(2,3)", (class1.in_f, class2.in_f)),
    ]
    data = {"longitudes": [lam1, lam2], "distances": [d1, d2]}
    if not class1.in_a and not class2.in_a:
        return Verdict.certified("two-piece-no-finite-filling-piece", hypotheses, **data)
    if class1.in_a != class2.in_a:
        return Verdict.certified("two-piece-one-finite-filling-piece", hypotheses, **data)
    if _provably_infinite_distance(class1, d1) or _provably_infinite_distance(class2, d2):
        if class1.in_f == class2.in_f:
            rule = "two-piece-longitude-distance"
        elif class2.in_f:
            rule = "two-piece-longitude-distance-first"
        else:
            rule = "two-piece-longitude-distance-second"
        return Verdict.certified(rule, hypotheses, **data)
    if _coprime_splice(m1, m2, hypotheses):
        return Verdict.certified("coprime-cone-orders", hypotheses, **data)
    return Verdict.unknown(
        ["both pieces admit finite fillings and no distance condition holds"],
        hypotheses,
        **data,
    )


def _filling_infinite(side, slope):
    """Whether ``side`` filled along ``slope`` on its free boundary is infinite."""
    (node, boundary), = side.free_boundaries
    outer = side.nodes[node]
    filled = fill(outer, slope, boundary)
    if len(side.nodes) == 1:
        return filled.is_infinite is True
    if filled.is_connected_sum:
        return False
    # the outer piece keeps an incompressible torus, so π₁ contains ℤ²
    return orbifold_euler_char(filled.seifert) < 0


def _fillings_stay_in_class(side):
    if len(side.nodes) == 1:
        return True
    (outer, _), = side.free_boundaries
    for i, sd in enumerate(side.nodes):
        if i == outer:
            if sd.boundaries == 2 and orbifold_euler_char(sd) + 2 > 0:
                return False
        elif sd.boundaries == 1 and admits_finite_filling(sd):
            return False
    return True


def _longitude_recursion(tree, assume_infinite, hypotheses):
    for index, edge in enumerate(tree.edges):
        w1, w2 = tree.split(index)
        if index in assume_infinite:
            hypotheses.append((f"edge {index}: caller asserts an infinite longitude filling", True))
        else:
            try:
                lam1 = rational_longitude_graph(w1)
                lam2 = rational_longitude_graph(w2)
            except ValueError as exc:
                hypotheses.append((f"edge {index}: rational longitudes", str(exc)))
                return False
            infinite = _filling_infinite(w2, lam1.transform(edge.matrix)) or _filling_infinite(
                w1, lam2.transform(edge.inverse)
            )
            hypotheses.append((f"edge {index}: a longitude filling is infinite", infinite))
            if not infinite:
                return False
        stays = _fillings_stay_in_class(w1) and _fillings_stay_in_class(w2)
        hypotheses.append((f"edge {index}: side fillings stay in the class", stays))
        if not stays:
            return False
    return True


def class_c_verdict(tree, assume_infinite=()):
    if tree.free_boundaries:
        raise MalformedTreeError("class_c_verdict needs a closed tree")
    if len(tree.nodes) == 1:
        return seifert_verdict(tree.nodes[0])
    b1 = tree_h1(tree).rank
    hypotheses = [("first Betti number", b1)]
    if b1 > 0:
        return Verdict.certified("positive-betti", hypotheses)
    if len(tree.nodes) == 2:
        verdict = two_piece_verdict(tree)
        if verdict.status is Status.CO_CERTIFIED:
            return verdict
        hypotheses = verdict.hypotheses
    leaves = [sd for sd in tree.nodes if sd.boundaries == 1]
    finite_leaves = [sd.symbol for sd in leaves if admits_finite_filling(sd)]
    hypotheses.append(("one-boundary pieces with finite fillings", finite_leaves))
    if not finite_leaves:
        return Verdict.certified("no-finite-fillings", hypotheses)
    if _longitude_recursion(tree, set(assume_infinite), hypotheses):
        return Verdict.certified("longitude-filling-recursion", hypotheses)
    return Verdict.unknown(["class membership not established"], hypotheses)


def _achievable_rotation(filled, slope_on_side, dual):
    """The rotation classification of the dual class, when it is the fibre."""
    if filled.is_connected_sum or filled.seifert.boundaries:
        return None
    if delta(slope_on_side, FIBRE) == 1 and dual == FIBRE:
        return sfco_classification(filled.seifert)
    return None


def _dual(slope):
    """Some class β with Δ(slope, β) = 1, preferring the fibre."""
    if delta(slope, FIBRE) == 1:
        return FIBRE
    _, u, v = bezout(slope.a, slope.b)
    return Slope(-v, u)


def slope_detect_verdict(
    m1,
    m2,
    matrix,
    alpha,
    *,
    peripheral_witness=None,
    quotient_witness=False,
    rotations=None,
    target=None,
):
    """Certify M1 ∪ M2 from a slope α on ∂M1 whose fillings are both infinite.

    ``peripheral_witness`` names a side ("first" or "second") whose peripheral
    subgroup the caller asserts dies in the normal closure of the slope.
    ``quotient_witness`` asserts that the peripheral quotients are isomorphic
    nontrivial groups. ``rotations`` gives exact rot values of the dual class on
    each side; otherwise they are read from the Seifert classification of the
    fillings when the dual class is the fibre on both sides.
    """
    matrix = gluing_matrix(matrix)
    if peripheral_witness not in (None, "first", "second"):
        raise ValueError(f"peripheral witness must name a side, got {peripheral_witness!r}")
    alpha = Slope(*alpha)
    image = alpha.transform(matrix)
    filled1, filled2 = fill(m1, alpha), fill(m2, image)
    hypotheses = [
        ("slope", alpha),
        ("image slope", image),
        ("first filling", str(filled1)),
        ("second filling", str(filled2)),
        ("first filling infinite", filled1.is_infinite),
        ("second filling infinite", filled2.is_infinite),
    ]
    if not (filled1.is_infinite and filled2.is_infinite):
        return Verdict.unknown(["both fillings must have infinite π₁"], hypotheses)
    if peripheral_witness:
        hypotheses.append(
            (f"caller asserts the {peripheral_witness} peripheral subgroup dies", True)
        )
        return Verdict.certified("peripheral-killing-slope", hypotheses)
    if not quotient_witness:
        return Verdict.unknown(["no peripheral or quotient witness supplied"], hypotheses)
    hypotheses.append(("caller asserts the peripheral quotients are isomorphic", True))

    beta = _dual(alpha)
    beta_image = beta.transform(matrix)
    hypotheses += [("dual class", beta), ("image of the dual class", beta_image)]
    if rotations is not None:
        r1, r2 = (Fraction(r) % 1 for r in rotations)
        hypotheses.append(("rotation numbers of the dual class", (r1, r2)))
        if r1 == r2:
            return Verdict.certified("matching-rotation", hypotheses, rotation=r1)
        return Verdict.unknown(["the supplied rotation numbers differ"], hypotheses)
    first = _achievable_rotation(filled1, alpha, beta)
    second = _achievable_rotation(filled2, image, beta_image)
    if first is None or second is None:
        return Verdict.unknown(["rotation numbers of the dual class are not known"], hypotheses)
    candidates = [Fraction(0)] if target is None else [Fraction(target) % 1]
    hypotheses.append(("achievable rotations", (first.values, second.values)))
    for r in candidates:
        if first.achievable(r) and second.achievable(r):
            hypotheses.append(("matched rotation", r))
            return Verdict.certified("matching-rotation", hypotheses, rotation=r)
    return Verdict.unknown(["no common achievable rotation number"], hypotheses)


# Knot exteriors in homology spheres


def meridian_longitude_basis(sd):
    """Columns μ and λ in (s, h) coordinates."""
    mu = meridian(sd)
    lam, _ = rational_longitude(sd)
    return ((mu.a, lam.a), (mu.b, lam.b))


def _mat_mul(x, y):
    return tuple(
        tuple(sum(x[i][k] * y[k][j] for k in range(2)) for j in range(2)) for i in range(2)
    )


def knot_exterior_gluing(m1, m2, matrix):
    """H₁ of two knot exteriors glued by ``matrix`` and the gluing in (μ, λ) bases.

    Returns (H₁, c, converted matrix), with φ(λ1) = c·μ2 + d·λ2.
    """
    basis1 = meridian_longitude_basis(m1)
    basis2 = meridian_longitude_basis(m2)
    converted = _mat_mul(invert(basis2), _mat_mul(tuple(map(tuple, matrix)), basis1))
    tree = JsjTree([m1, m2], [Edge(0, 0, 1, 0, matrix)])
    return tree_h1(tree), converted[0][1], {"first": basis1, "second": basis2, "converted": converted}
