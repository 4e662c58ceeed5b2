"""Criteria from surjections and Dehn surgery: Fibonacci, Takahashi, surgery windows."""

import logging
import math
from fractions import Fraction

import pandas as pd

from .graph import Verdict
from .groups import FreeProduct

logger = logging.getLogger(__name__)


def fibonacci_images(k, m):
    """ρ on F(k, 2m): x_i goes to x for even i and to y for odd i, in ℤ/k ∗ ℤ/k."""
    group = FreeProduct((k, k))
    x, y = group.generator(0), group.generator(1)
    return group, [x if i % 2 == 0 else y for i in range(2 * m)]


def fibonacci_relation_failures(k, m):
    """Indices i whose relation x_i x_(i+1)^k = x_(i+2) ρ does not respect."""
    _, images = fibonacci_images(k, m)
    size = len(images)
    return [
        i
        for i in range(size)
        if images[i] * images[(i + 1) % size] ** k != images[(i + 2) % size]
    ]


def fibonacci_verdict(k, m):
    """π₁ of the double branched cover of the closed braid (σ₁^k σ₂^-k)^m."""
    if k < 1 or m < 1:
        raise ValueError(f"k and m must be positive, got k={k}, m={m}")
    hypotheses = [("k >= 2", k >= 2)]
    if k < 2:
        return Verdict.unknown(["ρ needs k >= 2 for ℤ/k ∗ ℤ/k to be infinite"], hypotheses)
    failures = fibonacci_relation_failures(k, m)
    hypotheses.append((f"ρ respects all {2 * m} relations", not failures))
    if failures:
        raise RuntimeError(f"ρ breaks relations {failures} for k={k}, m={m}")
    hypotheses += [
        ("M(k, m) irreducible", True),
        (f"Z/{k} * Z/{k} infinite and circularly orderable", True),
    ]
    group, images = fibonacci_images(k, m)
    return Verdict.certified(
        "infinite-quotient",
        hypotheses,
        quotient=group.name,
        images={f"x{i}": repr(image) for i, image in enumerate(images)},
    )


def takahashi_verdict(pairs, n, prime):
    """Generalized periodic Takahashi manifold T_n,m(p_j/q_j; r_j/s_j).

    It surjects onto ℤ/p₁ ∗ ℤ/r₁ ∗ ⋯, infinite once two factors are
    nontrivial. A zero order stands for an infinite cyclic factor.
    """
    if n < 1 or not pairs:
        raise ValueError("need n >= 1 and at least one (p, q, r, s) quadruple")
    for p, q, r, s in pairs:
        if p < 0 or r < 0:
            raise ValueError(f"p and r must be nonnegative in {(p, q, r, s)}")
        if math.gcd(p, q) != 1 or math.gcd(r, s) != 1:
            raise ValueError(f"{(p, q, r, s)} needs gcd(p, q) = gcd(r, s) = 1")
    orders = [x for p, _, r, _ in pairs for x in (p, r)]
    nontrivial = [x for x in orders if x != 1]
    hypotheses = [
        ("branch link prime", bool(prime)),
        ("nontrivial free factors", len(nontrivial)),
    ]
    if not prime:
        return Verdict.unknown(
            ["primeness of the branch link is not asserted"], hypotheses
        )
    if len(nontrivial) < 2:
        return Verdict.unknown(
            ["the free product of the lens space groups has fewer than two nontrivial factors"],
            hypotheses,
        )
    group = FreeProduct([None if x == 0 else x for x in nontrivial])
    hypotheses.append((f"{group.name} infinite and circularly orderable", True))
    return Verdict.certified("infinite-quotient", hypotheses, quotient=group.name, n=n)


# Dehn surgery


def _check_slope(p, q):
    if p < 1:
        raise ValueError(f"p must be at least 1, got {p}")
    if q == 0 or math.gcd(p, q) != 1:
        raise ValueError(f"{p}/{q} is not a surgery slope with coprime nonzero q")


def surgery_window(p, q, c):
    """Whether p/q avoids the excluded window around p·c(h)."""
    _check_slope(p, q)
    pc = p * Fraction(c)
    if pc.denominator == 1:
        return q != pc
    floor = math.floor(pc)
    return q not in (floor, floor + 1)


def surgery_window_verdict(p, q, c, asserted=False):
    """M_p/q(K) for a fibred hyperbolic knot K with fractional Dehn twist c(h)."""
    c = Fraction(c)
    outside = surgery_window(p, q, c)
    hypotheses = [
        ("fibred hyperbolic knot in an irreducible integer homology sphere", bool(asserted)),
        ("p·c(h)", p * c),
        ("q outside the excluded window", outside),
    ]
    if not asserted:
        return Verdict.unknown(["the knot hypotheses are not asserted"], hypotheses)
    if not outside:
        return Verdict.unknown(
            [f"q = {q} lies in the excluded window for p·c(h) = {p * c}"], hypotheses
        )
    return Verdict.certified("abelian-cover-left-orderable", hypotheses, H1=f"Z/{p}")


def surgery_table(p_values, q_values, c):
    """Window membership for every coprime slope p/q in the given ranges."""
    c = Fraction(c)
    rows = [
        {"p": p, "q": q, "pc": str(p * c), "certified": surgery_window(p, q, c)}
        for p in p_values
        for q in q_values
        if p >= 1 and q != 0 and math.gcd(p, q) == 1
    ]
    table = pd.DataFrame(rows, columns=["p", "q", "pc", "certified"])
    logger.debug("surgery table for c(h) = %s: %d slopes", c, len(table))
    return table
