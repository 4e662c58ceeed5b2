import math
from fractions import Fraction

from django.test import SimpleTestCase
from hypothesis import given, settings
from hypothesis import strategies as st

from circularorders.utils import seifert as sf
from circularorders.utils.extensions import rot
from circularorders.utils.orders import validate_axioms

TREFOIL_EXTERIOR = sf.SeifertData(boundaries=1, pairs=((2, 1), (3, 1)))
COPRIME_PAIRS = [(a, b) for a in range(2, 8) for b in range(-a + 1, a) if math.gcd(a, b) == 1]


class SlopeTests(SimpleTestCase):
    def test_normalisation(self):
        self.assertEqual(tuple(sf.Slope(-1, 2)), (1, -2))
        self.assertEqual(tuple(sf.Slope(0, -1)), (0, 1))
        self.assertEqual(sf.Slope.primitive(4, -6), sf.Slope(2, -3))

    def test_rejects_non_primitive(self):
        with self.assertRaises(ValueError):
            sf.Slope(2, 4)
        with self.assertRaises(ValueError):
            sf.Slope.primitive(0, 0)

    def test_transform(self):
        self.assertEqual(sf.Slope(1, 0).transform([[0, 1], [1, 0]]), sf.Slope(0, 1))


class SeifertDataTests(SimpleTestCase):
    def test_validation(self):
        with self.assertRaises(ValueError):
            sf.SeifertData(pairs=((4, 2),))
        with self.assertRaises(ValueError):
            sf.SeifertData(base_orientable=False, genus=0)
        with self.assertRaises(ValueError):
            sf.SeifertData.from_dict({"pairs": [], "colour": "red"})

    def test_dict_round_trip(self):
        sd = sf.SeifertData(genus=1, boundaries=2, pairs=((3, 1),), b=-1)
        self.assertEqual(sf.SeifertData.from_dict(sd.to_dict()), sd)

    def test_symbols(self):
        self.assertEqual(TREFOIL_EXTERIOR.symbol, "D2(2,3)")
        self.assertEqual(sf.SeifertData(genus=1).base_name, "T2")
        mobius = sf.SeifertData(base_orientable=False, genus=1, boundaries=1)
        self.assertTrue(mobius.is_twisted_i_bundle)
        self.assertTrue(sf.SeifertData(boundaries=1, pairs=((2, 1), (2, -1))).is_twisted_i_bundle)


class HomologyTests(SimpleTestCase):
    def test_poincare_sphere(self):
        sd = sf.brieskorn(2, 3, 5)
        self.assertEqual(sd.pairs, ((2, 1), (3, 1), (5, 1)))
        self.assertEqual(sd.b, -1)
        self.assertTrue(sf.h1(sd).is_trivial)
        self.assertEqual(sf.euler_number(sd), Fraction(-1, 30))
        self.assertEqual(sf.orbifold_euler_char(sd), Fraction(1, 30))
        self.assertEqual(sf.pi1_order(sd), 120)
        self.assertFalse(sf.is_cyclic_pi1(sd))

    def test_other_brieskorn_spheres(self):
        sd = sf.brieskorn(2, 3, 7)
        self.assertEqual(sd.pairs, ((2, 1), (3, 2), (7, 6)))
        self.assertEqual(sd.b, -2)
        self.assertTrue(sf.h1(sd).is_trivial)
        self.assertEqual(sf.pi1_order(sd), math.inf)

        projective = sf.brieskorn(2, 2, 2)
        self.assertEqual(projective.pairs, ())
        self.assertEqual(sf.pi1_order(projective), 2)
        with self.assertRaises(ValueError):
            sf.brieskorn(1, 2, 3)

    def test_invariant_under_moves(self):
        base = sf.brieskorn(2, 3, 7)
        moved = sf.SeifertData(pairs=((2, 3), (3, 2), (7, 6)), b=-3)
        extra = sf.SeifertData(pairs=((2, 1), (3, 2), (7, 6), (1, 2)), b=-4)
        for sd in (moved, extra):
            self.assertEqual(str(sf.h1(sd)), str(sf.h1(base)))
            self.assertEqual(sf.euler_number(sd), sf.euler_number(base))

    def test_lens_space(self):
        sd = sf.SeifertData(pairs=((2, 1), (3, 1)))
        self.assertEqual(str(sf.h1(sd)), "Z/5")
        self.assertEqual(sf.pi1_order(sd), 5)
        self.assertTrue(sf.is_cyclic_pi1(sd))

    def test_three_torus(self):
        sd = sf.SeifertData(genus=1)
        self.assertEqual(sf.h1(sd).rank, 3)
        self.assertFalse(sf.is_finite_pi1(sd))

    def test_nonorientable_total_space_is_unsupported(self):
        with self.assertRaises(sf.UnsupportedSeifertData):
            sf.h1(sf.SeifertData(total_orientable=False, genus=1))


class BoundaryTests(SimpleTestCase):
    def test_trefoil_exterior(self):
        longitude, order = sf.rational_longitude(TREFOIL_EXTERIOR)
        self.assertEqual(longitude, sf.Slope(6, 5))
        self.assertEqual(order, 1)
        self.assertEqual(sf.meridian(TREFOIL_EXTERIOR), sf.Slope(1, 1))
        self.assertEqual(sf.boundary_image_rank(TREFOIL_EXTERIOR), 1)

    def test_longitude_needs_one_boundary(self):
        with self.assertRaises(ValueError):
            sf.rational_longitude(sf.SeifertData(boundaries=2))

    def test_meridian_needs_a_knot_exterior(self):
        with self.assertRaises(ValueError):
            sf.meridian(sf.SeifertData(boundaries=1, pairs=((2, 1), (2, 1))))

    def test_bezout(self):
        self.assertEqual(sf.bezout(12, 18), (6, -1, 1))
        g, u, v = sf.bezout(-5, 6)
        self.assertEqual((g, u * -5 + v * 6), (1, 1))

    @settings(max_examples=30, deadline=None)
    @given(
        st.integers(0, 2),
        st.integers(1, 3),
        st.lists(st.sampled_from(COPRIME_PAIRS), max_size=3),
        st.integers(-3, 3),
    )
    def test_half_of_the_boundary_survives(self, genus, boundaries, pairs, b):
        sd = sf.SeifertData(genus=genus, boundaries=boundaries, pairs=tuple(pairs), b=b)
        self.assertEqual(sf.boundary_image_rank(sd), boundaries)


class OrbifoldTests(SimpleTestCase):
    def test_membership(self):
        trefoil = sf.base_orbifold_class(TREFOIL_EXTERIOR)
        self.assertTrue(trefoil.in_a)
        self.assertTrue(trefoil.in_f)

        icosahedral = sf.base_orbifold_class(sf.SeifertData(boundaries=1, pairs=((2, 1), (3, 1), (5, 1))))
        self.assertTrue(icosahedral.in_a)
        self.assertFalse(icosahedral.in_f)

        hyperbolic = sf.base_orbifold_class(sf.SeifertData(boundaries=1, pairs=((2, 1), (3, 1), (7, 1))))
        self.assertFalse(hyperbolic.in_a)

        mobius = sf.base_orbifold_class(sf.SeifertData(base_orientable=False, genus=1, boundaries=1))
        self.assertEqual(mobius.symbol, "D2(2,2)")
        self.assertTrue(mobius.in_f)

    def test_finite_fillings(self):
        self.assertTrue(sf.admits_finite_filling(TREFOIL_EXTERIOR))
        self.assertFalse(
            sf.admits_finite_filling(sf.SeifertData(boundaries=1, pairs=((2, 1), (3, 1), (7, 1))))
        )

    def test_orbifold_group_orders(self):
        report = sf.orbifold_co(TREFOIL_EXTERIOR)
        self.assertTrue(report.orderable)
        group = report.order.group
        self.assertTrue(validate_axioms(report.order, group.words(2)).ok)

        self.assertTrue(sf.orbifold_co(sf.brieskorn(2, 3, 7)).orderable)
        self.assertIsNone(sf.orbifold_co(sf.brieskorn(2, 3, 5)).orderable)


class RotationClassificationTests(SimpleTestCase):
    def test_three_torus_orders(self):
        classification = sf.sfco_classification(sf.SeifertData(genus=1))
        self.assertEqual(classification.kind, "every-rational")
        for r in (Fraction(0), Fraction(1, 3), Fraction(2, 5)):
            self.assertTrue(classification.achievable(r))
            order = sf.materialize_t3_order(r)
            group = order.group
            self.assertTrue(validate_axioms(order, group.box(1)).ok, r)
            value = rot(group(0, 0, 1), order, n_max=30)
            self.assertTrue(value.is_exact)
            self.assertEqual(value.exact, r)

    def test_nonorientable_with_exceptional_fibre(self):
        sd = sf.SeifertData(base_orientable=False, genus=2, pairs=((2, 1),))
        classification = sf.sfco_classification(sd)
        self.assertEqual(classification.values, "{0, 1/2}")
        self.assertTrue(classification.possible(Fraction(1, 2)))
        self.assertFalse(classification.possible(Fraction(1, 3)))

        twisted = sf.SeifertData(total_orientable=False, genus=1, pairs=((3, 1),))
        self.assertEqual(sf.sfco_classification(twisted).kind, "zero-or-half")

    def test_nonorientable_base_without_exceptional_fibres(self):
        sd = sf.SeifertData(base_orientable=False, genus=2)
        classification = sf.sfco_classification(sd)
        self.assertEqual(classification.kind, "every-rational")
        self.assertEqual(classification.values, "Q/Z")
        self.assertTrue(classification.achievable(Fraction(1, 3)))
        self.assertTrue(classification.possible(Fraction(2, 5)))

    def test_finite_groups_are_refused(self):
        with self.assertRaises(sf.FinitePi1Error):
            sf.sfco_classification(sf.brieskorn(2, 3, 5))

    def test_left_orderable_pieces(self):
        sd = sf.SeifertData(genus=1, pairs=((2, 1),))
        classification = sf.sfco_classification(sd)
        self.assertEqual(classification.kind, "reciprocals")
        self.assertTrue(classification.achievable(Fraction(1, 4)))
        self.assertTrue(classification.achievable(Fraction(3, 4)))
        self.assertFalse(classification.achievable(Fraction(2, 5)))
        self.assertEqual(
            sf.sfco_classification(sf.brieskorn(2, 3, 7), left_orderable=False).kind, "zero"
        )
