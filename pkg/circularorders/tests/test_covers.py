from django.test import SimpleTestCase, TestCase

from circularorders.models import KnownNegative
from circularorders.utils import covers as cv
from circularorders.utils.graph import Status


class KnotTests(SimpleTestCase):
    def test_normalize_name(self):
        self.assertEqual(cv.normalize_name("Σ₃(5_2)"), "σ352")
        self.assertEqual(cv.normalize_name("sigma_3(5_2)"), "σ352")
        self.assertEqual(cv.normalize_name("  "), "")

    def test_named_knots(self):
        self.assertEqual(cv.Knot.named("3_1"), cv.Knot.torus(2, 3, name="3_1"))
        self.assertEqual(cv.Knot.named("5₂").kind, "two-bridge")
        with self.assertRaises(ValueError):
            cv.Knot.named("10_161")

    def test_validation(self):
        with self.assertRaises(ValueError):
            cv.Knot.torus(2, 4)
        with self.assertRaises(ValueError):
            cv.Knot.two_bridge(6, 3)
        with self.assertRaises(ValueError):
            cv.Knot("satellite")

    def test_labels(self):
        self.assertEqual(cv.Knot.torus(2, 5).label, "T(2,5)")
        self.assertEqual(cv.Knot.two_bridge(7, 4).label, "b(7,4)")
        self.assertEqual(cv.Knot.named("4_1").label, "4_1")


class TorusKnotCoverTests(SimpleTestCase):
    def test_trefoil_table(self):
        table = cv.branched_cover_table(cv.Knot.torus(2, 3), 2, 12)
        verdicts = dict(zip(table["n"], table["verdict"], strict=True))
        certified = {n for n, v in verdicts.items() if v == Status.CO_CERTIFIED.value}
        self.assertEqual(certified, {2, *range(6, 13)})
        self.assertEqual({n for n, v in verdicts.items() if v == Status.NOT_CO.value}, {3, 4, 5})

    def test_finite_groups_by_order(self):
        orders = {3: 8, 4: 24, 5: 120}
        names = {3: "quaternion", 4: "binary tetrahedral", 5: "binary icosahedral"}
        for n, order in orders.items():
            verdict = cv.torus_knot_cover_verdict(2, 3, n)
            self.assertEqual(verdict.status, Status.NOT_CO)
            self.assertIn(("|π₁|", order), verdict.hypotheses)
            self.assertIn(names[n], verdict.notes[0])

    def test_double_cover_is_a_lens_space(self):
        verdict = cv.torus_knot_cover_verdict(2, 3, 2)
        self.assertEqual(verdict.rule, "finite-cyclic")
        self.assertEqual(verdict.data["manifold"], "L(3,1)")
        self.assertEqual(cv.torus_knot_cover_verdict(2, 5, 2).data["manifold"], "L(5,1)")

    def test_infinite_covers(self):
        self.assertEqual(cv.torus_knot_cover_verdict(2, 3, 6).rule, "infinite-seifert")
        self.assertEqual(cv.torus_knot_cover_verdict(3, 4, 3).rule, "infinite-seifert")

    def test_degree_must_be_at_least_two(self):
        with self.assertRaises(ValueError):
            cv.torus_knot_cover_verdict(2, 3, 1)
        with self.assertRaises(ValueError):
            cv.branched_cover_table(cv.Knot.torus(2, 3), 5, 4)


class TwoBridgeTests(SimpleTestCase):
    def test_double_covers(self):
        verdict = cv.two_bridge_double_cover_verdict(7, 4)
        self.assertEqual(verdict.status, Status.CO_CERTIFIED)
        self.assertEqual(verdict.data["manifold"], "L(7,4)")
        self.assertEqual(cv.two_bridge_double_cover_verdict(1, 0).data["manifold"], "S3")

    def test_unnamed_knot_without_facts(self):
        verdict = cv.branched_cover_verdict(cv.Knot.two_bridge(7, 4), 3)
        self.assertEqual(verdict.status, Status.UNKNOWN)


class DivisiblePropagationTests(SimpleTestCase):
    def test_propagates_to_multiples(self):
        verdict = cv.divisible_propagation({3: True}, 6)
        self.assertEqual(verdict.rule, "divisible-covers")

    def test_needs_a_divisor(self):
        self.assertEqual(cv.divisible_propagation({3: True}, 4).status, Status.UNKNOWN)
        self.assertEqual(cv.divisible_propagation({3: False}, 6).status, Status.UNKNOWN)

    def test_needs_a_prime_knot(self):
        verdict = cv.divisible_propagation({3: True}, 6, prime=False)
        self.assertEqual(verdict.status, Status.UNKNOWN)


class KnownNegativeTests(TestCase):
    def test_seeded_weeks_manifold(self):
        self.assertTrue(KnownNegative.objects.filter(name="Weeks manifold").exists())

    def test_lookup_by_alias(self):
        for text in ("Σ₃(5₂)", "Σ3(5_2)", "weeks", "Σ₂(9₄₉)", "m003(-3,1)"):
            entry = cv.known_negative_lookup(text)
            self.assertIsNotNone(entry, text)
            self.assertEqual(entry.name, "Weeks manifold")
        self.assertIsNone(cv.known_negative_lookup("Σ₄(5₂)"))
        self.assertIsNone(cv.known_negative_lookup(""))

    def test_entries_need_a_citation(self):
        with self.assertRaises(ValueError):
            cv.KnownNegativeEntry("nameless", "Σ?", " ")

    def test_three_fold_cover_of_five_two(self):
        verdict = cv.branched_cover_verdict(cv.Knot.named("5_2"), 3)
        self.assertEqual(verdict.status, Status.NOT_CO)
        self.assertIn("Weeks", verdict.notes[0])
        self.assertIn("Calegari-Dunfield", verdict.data["known_negative"]["citation"])

    def test_double_cover_of_nine_forty_nine(self):
        verdict = cv.branched_cover_verdict(cv.Knot.named("9_49"), 2)
        self.assertEqual(verdict.status, Status.NOT_CO)

    def test_curated_covers(self):
        five_two = cv.Knot.named("5_2")
        self.assertEqual(cv.branched_cover_verdict(five_two, 2).rule, "finite-cyclic")
        self.assertEqual(cv.branched_cover_verdict(five_two, 9).rule, "left-orderable")
        self.assertEqual(cv.branched_cover_verdict(five_two, 4).status, Status.UNKNOWN)

        figure_eight = cv.Knot.named("4_1")
        self.assertEqual(cv.branched_cover_verdict(figure_eight, 3).rule, "infinite-seifert")
        self.assertEqual(cv.branched_cover_verdict(figure_eight, 6).rule, "divisible-covers")
        self.assertEqual(cv.branched_cover_verdict(figure_eight, 4).status, Status.UNKNOWN)
