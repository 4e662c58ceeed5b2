"""The query registry shared by the ``corda`` command and the HTTP API.

A query document is ``{"schema": "corda/1", "query": {"subcommand": ..., "params": {...}}}``.
Every handler is a generator: it yields timestamped progress lines and returns a
Verdict, which ``run_query`` wraps into the result document.
"""

import json
import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

import numpy as np
from django.conf import settings
from rest_framework.exceptions import ValidationError

from ..serializers import (
    SCHEMA,
    BranchedCoverSerializer,
    ConstructionSerializer,
    EulerOrderSerializer,
    FibonacciSerializer,
    FiniteCoSerializer,
    GraphQuerySerializer,
    QueryDocumentSerializer,
    QuerySerializer,
    RotSerializer,
    SeifertQuerySerializer,
    SurgeryWindowSerializer,
    TakahashiSerializer,
    TwoPieceQuerySerializer,
)
from .bruteforce import bruteforce_bound, is_circularly_orderable_bruteforce, witness_order
from .covers import (
    Knot,
    branched_cover_table,
    branched_cover_verdict,
    divisible_propagation,
)
from .criteria import (
    fibonacci_verdict,
    surgery_table,
    surgery_window_verdict,
    takahashi_verdict,
)
from .euler import lo_normal_subgroup
from .extensions import CentralExtension, quotient_circular_order, rot, rot_one_over_p
from .graph import (
    Status,
    Verdict,
    class_c_verdict,
    seifert_verdict,
    slope_detect_verdict,
    tree_h1,
    two_piece_verdict,
)
from .groups import CyclicGroup, FreeProduct, catalog_group, is_cyclic
from .logging import log
from .orders import (
    ShortExactSequence,
    cyclic_rot_order,
    extend_cyclic_order,
    lex_circular_order,
    lex_lattice_order,
    planar_free_product_order,
    rational_rotation_order,
    secret_left_order,
    standard_integer_order,
    validate_axioms,
)
from .seifert import (
    UnsupportedSeifertData,
    base_orbifold_class,
    euler_number,
    h1,
    materialize_t3_order,
    orbifold_co,
    orbifold_euler_char,
    rational_longitude,
    sfco_classification,
)

logger = logging.getLogger(__name__)


def validate_bound():
    return getattr(settings, "CORDA_VALIDATE_BOUND", 3)


# Order constructions


@dataclass
class Construction:
    """An oracle, a finite element window to test it on, and an element parser."""

    order: object
    window: list
    element: Callable
    exhaustive: bool = False


def _require(params, *names):
    missing = [name for name in names if params.get(name) is None]
    if missing:
        raise ValueError(
            f"construction {params['construction']!r} needs {', '.join(missing)}"
        )
    return [params[name] for name in names]


def _integers(group, params, radius=12):
    radius = params.get("bound", radius)
    return group.between(-radius, radius), lambda values: group.element(values[0])


def _cyclic_rot(params):
    n, k = _require(params, "modulus", "k")
    order = cyclic_rot_order(n, k)
    group = order.group
    return Construction(order, group.elements(), lambda v: group.element(v[0]), True)


def _arrangement(params):
    (name,) = _require(params, "group")
    table = catalog_group(name)
    result = is_circularly_orderable_bruteforce(table)
    if not result.orderable:
        raise ValueError(f"{table.name} admits no circular order to build")
    order = witness_order(table, result.witness)
    return Construction(order, table.elements(), lambda v: table.element(v[0]), True)


def _secret_integer(params):
    lo = standard_integer_order()
    return Construction(secret_left_order(lo), *_integers(lo.group, params))


def _secret_lattice(params):
    lo = lex_lattice_order()
    group = lo.group
    return Construction(
        secret_left_order(lo), group.box(params.get("bound", 2)), group.element
    )


def _lex_integers(params):
    n, k = _require(params, "modulus", "k")
    group, quotient = CyclicGroup(), CyclicGroup(n)
    ses = ShortExactSequence(group, quotient, lambda g: quotient.element(g.value))
    order = lex_circular_order(
        ses, standard_integer_order(group), cyclic_rot_order(n, k, group=quotient)
    )
    return Construction(order, *_integers(group, params))


def _rational_rotation(params):
    (r,) = _require(params, "r")
    order = rational_rotation_order(r)
    return Construction(order, *_integers(order.group, params))


def _quotient_integers(params):
    (z,) = _require(params, "z")
    lo = standard_integer_order()
    group = lo.group
    order = quotient_circular_order(lo, group.element(z))
    quotient = order.group
    window = [quotient.coset(group.element(v)) for v in range(z)]
    return Construction(
        order, window, lambda v: quotient.coset(group.element(v[0])), True
    )


def _lift(params):
    n, k = _require(params, "modulus", "k")
    base = cyclic_rot_order(n, k)
    ext = CentralExtension(base)
    radius = params.get("bound", 1)
    window = ext.window(range(-radius, radius + 1))
    return Construction(
        secret_left_order(ext.left_order),
        window,
        lambda v: ext(v[0], base.group.element(v[1])),
    )


def _one_over_p(params):
    (p,) = _require(params, "p")
    lo = standard_integer_order()
    order = rot_one_over_p(lo, lo.group.element(1), p)
    return Construction(order, *_integers(lo.group, params))


def _planar(params):
    factors = [None if a == 0 else a for a in params.get("factors") or (2, 3)]
    group = FreeProduct(factors)
    factor_orders = [
        secret_left_order(standard_integer_order()) if a is None else cyclic_rot_order(a, 1)
        for a in factors
    ]
    order = planar_free_product_order(group, factor_orders)
    window = group.words(params.get("bound", validate_bound()))
    return Construction(order, window, lambda v: group(*zip(v[::2], v[1::2], strict=True)))


def _extend(params):
    k, r = _require(params, "k", "r")
    order = extend_cyclic_order(k, rational_rotation_order(r))
    return Construction(order, *_integers(order.group, params))


def _three_torus(params):
    (r,) = _require(params, "r")
    order = materialize_t3_order(r)
    group = order.group
    return Construction(order, group.box(params.get("bound", 1)), group.element)


CONSTRUCTIONS = {
    "cyclic-rot": _cyclic_rot,
    "arrangement": _arrangement,
    "secret-integer": _secret_integer,
    "secret-lattice": _secret_lattice,
    "lex-z": _lex_integers,
    "rational-rotation": _rational_rotation,
    "quotient-z": _quotient_integers,
    "lift": _lift,
    "one-over-p": _one_over_p,
    "planar": _planar,
    "extend": _extend,
    "t3": _three_torus,
}


def build_construction(params):
    name = params["construction"]
    if name not in CONSTRUCTIONS:
        raise ValueError(
            f"Unknown construction {name!r}; choose from {', '.join(sorted(CONSTRUCTIONS))}"
        )
    return CONSTRUCTIONS[name](params)


# Handlers


def validate_order(params, verbose):
    built = build_construction(params)
    yield from log(verbose, f"Checking {built.order.tag} on {len(built.window)} elements")
    report = validate_axioms(built.order, built.window)
    hypotheses = [
        ("construction", built.order.tag),
        ("elements checked", len(built.window)),
        ("axioms hold", report.ok),
    ]
    data = {
        "checked": report.checked,
        "violations": [[v.axiom, list(v.indices)] for v in report.violations[:20]],
        "violationCount": len(report.violations),
    }
    if not report.ok:
        first = report.violations[0]
        return Verdict.unknown(
            [f"axiom {first.axiom} fails at {first.elements!r}"], hypotheses, **data
        )
    rule = "axioms-checked" if built.exhaustive else "explicit-construction"
    return Verdict.certified(rule, hypotheses, **data)


def finite_co(params, verbose):
    table = catalog_group(params["group"])
    cyclic = is_cyclic(table)
    hypotheses = [("group", table.name), ("order", table.n), ("cyclic", cyclic)]
    if table.n > bruteforce_bound():
        yield from log(verbose, f"{table.name} is above the search bound; using cyclicity")
        if cyclic:
            return Verdict.certified("finite-cyclic", hypotheses)
        return Verdict.not_co("a finite non-cyclic group is not circularly orderable", hypotheses)

    yield from log(verbose, f"Searching cyclic arrangements of {table.name}")
    result = is_circularly_orderable_bruteforce(table)
    hypotheses.append(("arrangements examined", result.examined))
    if not result.orderable:
        return Verdict.not_co(
            f"no left-invariant cyclic arrangement of the {table.n} elements exists",
            hypotheses,
        )
    report = validate_axioms(witness_order(table, result.witness))
    hypotheses.append(("witness passes the axioms", report.ok))
    return Verdict.certified(
        "axioms-checked",
        hypotheses,
        witness=[table.label(i) for i in result.witness],
    )


def euler_order(params, verbose):
    if params.get("group"):
        table = catalog_group(params["group"])
        result = is_circularly_orderable_bruteforce(table)
        if not result.orderable:
            return Verdict.not_co(
                f"{table.name} has no circular order", [("group", table.name)]
            )
        order = witness_order(table, result.witness)
    else:
        order = cyclic_rot_order(params["modulus"], params.get("k", 1))
    yield from log(verbose, f"Computing the Euler class of {order.tag}")
    report = validate_axioms(order)
    normal = lo_normal_subgroup(order)
    hypotheses = [
        ("order", order.tag),
        ("axioms hold", report.ok),
        ("Euler class order", normal.k),
        ("kernel trivial", len(normal.kernel) == 1),
    ]
    return Verdict.certified(
        "axioms-checked",
        hypotheses,
        eulerClassOrder=normal.k,
        kernel=[repr(g) for g in normal.kernel],
        quotient=f"Z/{normal.k}",
        eta={repr(g): normal.eta(g) for g in order.group.elements()},
    )


def rotation_number(params, verbose):
    built = build_construction(params)
    g = built.element(params.get("g") or [1])
    yield from log(verbose, f"rot of {g!r} under {built.order.tag}")
    value = rot(g, built.order, n_max=params.get("n_max"))
    hypotheses = [("construction", built.order.tag), ("element", repr(g))]
    return Verdict.certified(
        "explicit-construction",
        hypotheses,
        rot=value.exact if value.is_exact else None,
        exact=value.is_exact,
        interval=[value.low, value.high],
    )


def seifert(params, verbose):
    sd = params["seifert"]
    yield from log(verbose, f"Seifert data {sd}")
    verdict = seifert_verdict(sd)
    data = verdict.data
    data["orbifoldEulerCharacteristic"] = orbifold_euler_char(sd)
    data["base"] = base_orbifold_class(sd).symbol
    report = orbifold_co(sd)
    data["orbifoldGroup"] = {"orderable": report.orderable, "reason": report.reason}
    try:
        data["h1"] = str(h1(sd))
        data["eulerNumber"] = euler_number(sd)
    except UnsupportedSeifertData as exc:
        yield from log(verbose, str(exc))
        return verdict
    if sd.boundaries == 1:
        try:
            data["rationalLongitude"] = rational_longitude(sd)[0]
        except ValueError as exc:
            yield from log(verbose, str(exc))
    elif "rotations" in data:
        # infinite and closed: redo with the caller's left-orderability flag
        data["rotations"] = sfco_classification(sd, params["left_orderable"]).to_dict()
    return verdict


def graph(params, verbose):
    tree = params["tree"]
    yield from log(verbose, f"Tree with {len(tree.nodes)} pieces")
    verdict = class_c_verdict(tree, params["assume_infinite"])
    verdict.data["h1"] = str(tree_h1(tree))
    return verdict


def two_piece(params, verbose):
    tree = params["tree"]
    verdict = two_piece_verdict(tree)
    slope = params["slope"]
    if verdict.status is Status.CO_CERTIFIED or not slope:
        return verdict
    yield from log(verbose, "Two-piece clauses inconclusive; trying the slope criteria")
    edge = tree.edges[0]
    return slope_detect_verdict(
        tree.nodes[edge.a],
        tree.nodes[edge.b],
        edge.matrix,
        slope["alpha"],
        peripheral_witness=slope["peripheral_witness"],
        quotient_witness=slope["quotient_witness"],
        rotations=slope["rotations"],
        target=slope["target"],
    )


def _knot(params):
    if "torus" in params:
        return Knot.torus(*params["torus"])
    if "two_bridge" in params:
        return Knot.two_bridge(*params["two_bridge"])
    return Knot.named(params["knot"])


def _summarise(table):
    statuses = set(table["verdict"])
    rules = set(table["rule"])
    degrees = {
        status: table.loc[table["verdict"] == status, "n"].tolist() for status in statuses
    }
    data = {"table": table.to_dict(orient="records"), "degrees": degrees}
    if len(statuses) == 1 and len(rules) == 1:
        status, rule = statuses.pop(), rules.pop()
        if status == Status.CO_CERTIFIED.value:
            return Verdict.certified(rule, [], **data)
        if status == Status.NOT_CO.value:
            return Verdict.not_co("every degree in the range is not circularly orderable", **data)
    notes = [f"{status} for n in {degrees[status]}" for status in sorted(degrees)]
    return Verdict.unknown(["verdicts vary with the degree", *notes], **data)


def branched_cover(params, verbose):
    knot = _knot(params)
    if "range" in params:
        start, stop = params["range"]
        yield from log(verbose, f"Tabulating Σn({knot.label}) for n = {start}..{stop}")
        verdict = _summarise(branched_cover_table(knot, start, stop))
    elif "known_infinite" in params:
        known = {d: True for d in params["known_infinite"]}
        verdict = divisible_propagation(known, params["n"], params["prime"])
    else:
        verdict = branched_cover_verdict(knot, params["n"])
    verdict.data["knot"] = knot.to_dict()
    return verdict


def surgery(params, verbose):
    c = params["c"]
    if "p" in params:
        yield from log(verbose, f"Window for {params['p']}/{params['q']} with c(h) = {c}")
        return surgery_window_verdict(params["p"], params["q"], c, params["asserted"])
    (p0, p1), (q0, q1) = params["p_range"], params["q_range"]
    table = surgery_table(range(p0, p1 + 1), range(q0, q1 + 1), c)
    return Verdict.unknown(
        ["window membership per slope; certify a single slope with p and q"],
        [("fractional Dehn twist coefficient", c)],
        table=table.to_dict(orient="records"),
    )


def fibonacci(params, verbose):
    yield from log(verbose, f"Checking ρ on F({params['k']}, {2 * params['m']})")
    return fibonacci_verdict(params["k"], params["m"])


def takahashi(params, verbose):
    yield from log(verbose, f"{len(params['pairs'])} tangle quadruples")
    return takahashi_verdict([tuple(p) for p in params["pairs"]], params["n"], params["prime"])


QUERY_HANDLERS = {
    "validate-order": (ConstructionSerializer, validate_order),
    "finite-co": (FiniteCoSerializer, finite_co),
    "euler-order": (EulerOrderSerializer, euler_order),
    "rot": (RotSerializer, rotation_number),
    "seifert": (SeifertQuerySerializer, seifert),
    "graph": (GraphQuerySerializer, graph),
    "two-piece": (TwoPieceQuerySerializer, two_piece),
    "branched-cover": (BranchedCoverSerializer, branched_cover),
    "surgery-window": (SurgeryWindowSerializer, surgery),
    "fibonacci": (FibonacciSerializer, fibonacci),
    "takahashi": (TakahashiSerializer, takahashi),
}


# Documents


def _jsonable(value):
    if isinstance(value, Fraction):
        return str(value)
    if isinstance(value, np.integer):
        return int(value)
    if isinstance(value, np.bool_):
        return bool(value)
    raise TypeError(f"{type(value).__name__} is not part of a result document")


def render(document):
    """The canonical text of a document: sorted keys, no floats, trailing newline."""
    text = json.dumps(
        document, sort_keys=True, ensure_ascii=False, indent=2, default=_jsonable
    )
    return text + "\n"


def query_document(subcommand, params):
    return {"schema": SCHEMA, "query": {"subcommand": subcommand, "params": params}}


def result_document(query, verdict):
    body = verdict.to_dict()
    return {
        "schema": SCHEMA,
        "query": query,
        "verdict": body["status"],
        "rule": body["rule"],
        "citations": [body["citation"]] if body["citation"] else [],
        "hypotheses": body["hypotheses"],
        "notes": body["notes"],
        "data": body["data"],
    }


def run_query(document, verbose=False):
    outer = QueryDocumentSerializer(data=document)
    outer.is_valid(raise_exception=True)
    query = QuerySerializer(data=outer.validated_data["query"])
    query.is_valid(raise_exception=True)
    name = query.validated_data["subcommand"]
    if name not in QUERY_HANDLERS:
        raise ValidationError(
            {"subcommand": [f"Unknown subcommand {name!r}; choose from {', '.join(QUERY_HANDLERS)}"]}
        )
    serializer_class, handler = QUERY_HANDLERS[name]
    params = serializer_class(data=query.validated_data["params"])
    params.is_valid(raise_exception=True)

    yield from log(verbose, f"Running {name}")
    verdict = yield from handler(params.validated_data, verbose)
    yield from log(verbose, f"{name}: {verdict.status.value}")
    echo = {"subcommand": name, "params": query.validated_data["params"]}
    return json.loads(render(result_document(echo, verdict)))


def replay(stored, verbose=False):
    """Re-run a stored result document; returns (matches, regenerated)."""
    if not isinstance(stored, dict) or "query" not in stored:
        raise ValueError("a stored result document needs a query")
    regenerated = yield from run_query(
        {"schema": stored.get("schema"), "query": stored["query"]}, verbose
    )
    return render(regenerated) == render(stored), regenerated


def drain(generator, sink=None):
    """Run a handler generator to completion, passing each line to ``sink``."""
    while True:
        try:
            line = next(generator)
        except StopIteration as stop:
            return stop.value
        if sink is not None:
            sink(line)
