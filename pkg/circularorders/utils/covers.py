"""Cyclic branched covers of knots and the curated facts about them."""

import logging
import math
import unicodedata
from dataclasses import dataclass

import pandas as pd

from ..models import KnownNegative
from .graph import Status, Verdict
from .seifert import (
    brieskorn,
    euler_number,
    h1,
    is_cyclic_pi1,
    is_finite_pi1,
    pi1_order,
)

logger = logging.getLogger(__name__)

# spherical groups recognised by cone orders and order
SPHERICAL_GROUPS = {
    ((2, 2, 2), 8): "quaternion group",
    ((2, 3, 3), 24): "binary tetrahedral group",
    ((2, 3, 4), 48): "binary octahedral group",
    ((2, 3, 5), 120): "binary icosahedral group",
}


def normalize_name(text):
    """Fold a manifold or knot name to a lookup key: 'Σ₃(5_2)' -> 'σ352'."""
    text = unicodedata.normalize("NFKC", str(text)).lower().replace("sigma", "σ")
    return "".join(ch for ch in text if ch.isalnum())


@dataclass(frozen=True)
class Knot:
    kind: str
    p: int | None = None
    q: int | None = None
    name: str | None = None

    def __post_init__(self):
        if self.kind == "torus":
            if min(self.p, self.q) < 2 or math.gcd(self.p, self.q) != 1:
                raise ValueError(
                    f"torus knot needs coprime p, q >= 2, got ({self.p}, {self.q})"
                )
        elif self.kind == "two-bridge":
            if self.p < 1 or math.gcd(self.p, self.q) != 1:
                raise ValueError(
                    f"two-bridge knot needs p >= 1 and gcd(p, q) = 1, got {self.p}/{self.q}"
                )
        elif self.kind != "named":
            raise ValueError(f"unknown knot kind {self.kind!r}")

    @classmethod
    def torus(cls, p, q, name=None):
        return cls("torus", int(p), int(q), name)

    @classmethod
    def two_bridge(cls, p, q, name=None):
        return cls("two-bridge", int(p), int(q), name)

    @classmethod
    def named(cls, name):
        key = normalize_name(name)
        if key not in NAMED_KNOTS:
            raise ValueError(
                f"Unknown knot {name!r}; choose from {', '.join(NAMED_KNOT_LABELS)}"
            )
        return NAMED_KNOTS[key]

    @property
    def label(self):
        if self.name:
            return self.name
        if self.kind == "torus":
            return f"T({self.p},{self.q})"
        return f"b({self.p},{self.q})"

    def to_dict(self):
        return {"kind": self.kind, "p": self.p, "q": self.q, "name": self.name}


NAMED_KNOT_LABELS = ("3_1", "4_1", "5_2", "9_49")
NAMED_KNOTS = {
    normalize_name("3_1"): Knot.torus(2, 3, name="3_1"),
    normalize_name("4_1"): Knot.two_bridge(5, 2, name="4_1"),
    normalize_name("5_2"): Knot.two_bridge(7, 4, name="5_2"),
    normalize_name("9_49"): Knot("named", name="9_49"),
}


@dataclass(frozen=True)
class CoverFact:
    manifold: str
    infinite: bool
    rule: str
    source: str


# (knot, degree) -> a circularly orderable cover
KNOWN_COVERS = {
    ("4_1", 3): CoverFact(
        "Hantzsche-Wendt manifold",
        infinite=True,
        rule="infinite-seifert",
        source="Σ₃(4₁) is the Hantzsche-Wendt flat manifold, Seifert fibred with infinite π₁",
    ),
}

# knot -> least degree from which every cover is left-orderable
LEFT_ORDERABLE_FROM = {
    "5_2": (9, "Σn(5₂) has left-orderable π₁ for every n >= 9 (Hu)"),
}


@dataclass(frozen=True)
class KnownNegativeEntry:
    name: str
    identification: str
    citation: str

    def __post_init__(self):
        if not self.citation.strip():
            raise ValueError(f"known negative {self.name!r} has no citation")

    @classmethod
    def from_model(cls, record):
        return cls(record.name, record.identification, record.citation)

    def to_dict(self):
        return {
            "name": self.name,
            "identification": self.identification,
            "citation": self.citation,
        }


def known_negative_lookup(text):
    """The curated NOT_CO entry whose name, identification or alias matches."""
    key = normalize_name(text)
    if not key:
        return None
    for record in KnownNegative.objects.all():
        names = [record.name, record.identification, *record.aliases]
        names += [part for part in record.identification.split("=")]
        if key in {normalize_name(n) for n in names}:
            logger.info("%r resolves to known negative %s", text, record.name)
            return KnownNegativeEntry.from_model(record)
    return None


def _cover_label(knot, n):
    return f"Σ{n}({knot.label})"


def torus_knot_cover_verdict(p, q, n):
    """Σn(T(p,q)) is the Brieskorn manifold Σ(p,q,n)."""
    knot = Knot.torus(p, q)
    if n < 2:
        raise ValueError(f"cover degree must be at least 2, got {n}")
    sd = brieskorn(p, q, n)
    hypotheses = [
        ("cover", _cover_label(knot, n)),
        ("Seifert data", sd.symbol),
        ("Euler number", euler_number(sd)),
    ]
    if not is_finite_pi1(sd):
        hypotheses.append(("π₁ infinite", True))
        return Verdict.certified("infinite-seifert", hypotheses, seifert=sd.to_dict())
    order = pi1_order(sd)
    hypotheses += [("|π₁|", order), ("|H₁|", h1(sd).order)]
    if is_cyclic_pi1(sd):
        data = {"seifert": sd.to_dict()}
        if n == 2 and 2 in (p, q):
            data["manifold"] = f"L({p * q // 2},1)"
        return Verdict.certified("finite-cyclic", hypotheses, **data)
    group = SPHERICAL_GROUPS.get((sd.cone_orders, order), f"group of order {order}")
    return Verdict.not_co(
        f"π₁ is the {group}, finite and not cyclic", hypotheses, seifert=sd.to_dict()
    )


def two_bridge_double_cover_verdict(p, q):
    """Σ₂ of the two-bridge knot p/q is the lens space L(p, q)."""
    Knot.two_bridge(p, q)
    manifold = "S3" if p == 1 else f"L({p},{q % p})"
    hypotheses = [("double branched cover", manifold), ("π₁", f"Z/{p}")]
    return Verdict.certified("finite-cyclic", hypotheses, manifold=manifold)


def divisible_propagation(known, m, prime=True):
    """Certify Σm from a known infinite circularly orderable Σn with n | m.

    ``known`` maps degrees with circularly orderable covers to whether their
    π₁ is infinite.
    """
    if not prime:
        return Verdict.unknown(["the knot is not asserted to be prime"])
    hypotheses = [("knot prime", True)]
    for n in sorted(known):
        if n >= 2 and known[n] and m % n == 0:
            hypotheses += [
                ("known circularly orderable cover", n),
                (f"π₁(Σ{n}) infinite", True),
                (f"{n} divides {m}", True),
            ]
            return Verdict.certified(
                "divisible-covers",
                hypotheses,
                surjection=f"q_{m},{n}: π₁(Σ{m}) → π₁(Σ{n})",
            )
    return Verdict.unknown(
        [f"no known infinite circularly orderable cover has degree dividing {m}"],
        hypotheses,
        known=sorted(known),
    )


def branched_cover_verdict(knot, n):
    if n < 2:
        raise ValueError(f"cover degree must be at least 2, got {n}")
    if knot.kind == "torus":
        return torus_knot_cover_verdict(knot.p, knot.q, n)
    label = _cover_label(knot, n)
    if knot.name:
        entry = known_negative_lookup(label)
        if entry is not None:
            return Verdict.not_co(
                f"{label} is the {entry.name}: {entry.citation}",
                [("identification", entry.identification)],
                known_negative=entry.to_dict(),
            )
    if knot.kind == "two-bridge" and n == 2:
        return two_bridge_double_cover_verdict(knot.p, knot.q)

    fact = KNOWN_COVERS.get((knot.name, n))
    if fact is not None:
        return Verdict.certified(
            fact.rule, [("cover", label), (fact.source, True)], manifold=fact.manifold
        )
    if knot.name in LEFT_ORDERABLE_FROM:
        start, source = LEFT_ORDERABLE_FROM[knot.name]
        if n >= start:
            return Verdict.certified("left-orderable", [("cover", label), (source, True)])

    known = {d: f.infinite for (name, d), f in KNOWN_COVERS.items() if name == knot.name}
    if known:
        verdict = divisible_propagation(known, n)
        if verdict.status is Status.CO_CERTIFIED:
            return verdict
    return Verdict.unknown([f"no criterion decides {label}"], [("cover", label)])


def branched_cover_table(knot, start, stop):
    """Verdicts for Σn(K), n = start..stop, one row per degree."""
    if start < 2 or stop < start:
        raise ValueError(f"bad degree range {start}..{stop}")
    rows = []
    for n in range(start, stop + 1):
        verdict = branched_cover_verdict(knot, n)
        rows.append(
            {
                "n": n,
                "verdict": verdict.status.value,
                "rule": verdict.rule or "",
                "reason": "; ".join(verdict.notes) or verdict.citation,
            }
        )
    table = pd.DataFrame(rows, columns=["n", "verdict", "rule", "reason"])
    logger.debug("%s: %d degrees tabulated", knot.label, len(table))
    return table
