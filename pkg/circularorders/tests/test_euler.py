import math

import numpy as np
import sympy
from django.test import SimpleTestCase
from hypothesis import given, settings
from hypothesis import strategies as st

from circularorders.utils import euler as eu
from circularorders.utils.extensions import CentralExtension, quotient_circular_order
from circularorders.utils.groups import CyclicGroup
from circularorders.utils.orders import (
    ShortExactSequence,
    cyclic_rot_order,
    lex_circular_order,
    standard_integer_order,
)

small_matrices = st.integers(1, 4).flatmap(
    lambda m: st.integers(1, 4).flatmap(
        lambda n: st.lists(
            st.lists(st.integers(-9, 9), min_size=n, max_size=n), min_size=m, max_size=m
        )
    )
)


class SmithNormalFormTests(SimpleTestCase):
    def assert_smith_form(self, A):
        U, D, V = eu.smith_normal_form(A)
        A = np.array(A, dtype=object)
        self.assertTrue((U.dot(A).dot(V) == D).all())
        self.assertIn(sympy.Matrix(U.tolist()).det(), (1, -1))
        self.assertIn(sympy.Matrix(V.tolist()).det(), (1, -1))
        off = [D[i, j] for i in range(D.shape[0]) for j in range(D.shape[1]) if i != j]
        self.assertTrue(all(x == 0 for x in off))
        d = eu.diagonal(D)
        self.assertTrue(all(x >= 0 for x in d))
        for a, b in zip(d, d[1:]):
            if a:
                self.assertEqual(b % a, 0)
            else:
                self.assertEqual(b, 0)
        return d

    def test_known_matrix(self):
        self.assertEqual(self.assert_smith_form([[2, 4, 4], [-6, 6, 12], [10, -4, -16]]), [2, 6, 12])

    def test_determinant_matches_sympy(self):
        A = [[3, 1, 4], [1, 5, 9], [2, 6, 5]]
        d = self.assert_smith_form(A)
        self.assertEqual(math.prod(d), abs(sympy.Matrix(A).det()))

    @settings(max_examples=60, deadline=None)
    @given(small_matrices)
    def test_random_matrices(self, A):
        d = self.assert_smith_form(A)
        rank = sympy.Matrix(A).rank()
        self.assertEqual(sum(1 for x in d if x), rank)


class LinearSolveTests(SimpleTestCase):
    def test_solvable(self):
        A = [[2, 0], [0, 3]]
        x = eu.solve_integer(A, [4, 9])
        self.assertEqual(list(x), [2, 3])

    def test_unsolvable(self):
        self.assertIsNone(eu.solve_integer([[2, 0], [0, 3]], [1, 0]))
        self.assertIsNone(eu.solve_integer([[1, 1], [1, 1]], [0, 1]))

    def test_matrix_rank(self):
        self.assertEqual(eu.matrix_rank([[1, 2], [2, 4]]), 1)
        self.assertEqual(eu.matrix_rank(np.zeros((0, 3))), 0)


class AbelianInvariantsTests(SimpleTestCase):
    def test_invariants(self):
        invariants = eu.abelian_invariants([[2, 0, 0], [0, 4, 0]], 3)
        self.assertEqual(invariants.torsion, (2, 4))
        self.assertEqual(invariants.rank, 1)
        self.assertEqual(str(invariants), "Z/2 + Z/4 + Z")
        self.assertIsNone(invariants.order)

    def test_trivial_and_cyclic(self):
        self.assertTrue(eu.abelian_invariants([[1]], 1).is_trivial)
        cyclic = eu.abelian_invariants([[2, 0], [0, 3]], 2)
        self.assertTrue(cyclic.is_cyclic)
        self.assertEqual(cyclic.torsion, (6,))
        self.assertEqual(str(eu.abelian_invariants([[1]], 1)), "0")

    def test_quotient_element_orders(self):
        quotient = eu.AbelianQuotient.from_relations([[6, 0], [0, 0]], 2)
        self.assertEqual(quotient.order([2, 0]), 3)
        self.assertEqual(quotient.order([0, 1]), math.inf)
        self.assertEqual(quotient.order([6, 0]), 1)


class EulerClassTests(SimpleTestCase):
    def test_cyclic_rot_orders(self):
        for n in range(1, 13):
            for k in range(n):
                if math.gcd(k, n) != 1:
                    continue
                order = cyclic_rot_order(n, k)
                table = eu.cocycle_table(order)
                self.assertEqual(eu.euler_class_order(table), n, (n, k))
                normal = eu.lo_normal_subgroup(order)
                self.assertEqual(normal.k, n)
                self.assertEqual(normal.kernel, [order.group.identity()])
                # k·f(g,h) = η(g) - η(gh) + η(h) on every pair
                for i, g in enumerate(table.elements):
                    for j, h in enumerate(table.elements):
                        gh = table.elements[int(table.mul[i, j])]
                        self.assertEqual(
                            n * int(table.F[i, j]),
                            normal.eta(g) - normal.eta(gh) + normal.eta(h),
                        )

    def test_rejects_non_cocycle(self):
        table = eu.cocycle_table(cyclic_rot_order(3, 1))
        table.F[1, 1] = 1
        with self.assertRaises(ValueError):
            eu.check_cocycle(table)

    def test_eta_requires_a_multiple_of_the_order(self):
        table = eu.cocycle_table(cyclic_rot_order(4, 1))
        with self.assertRaises(eu.NoCoboundaryError):
            eu.eta_solve(table, 2)


class RoundTripTests(SimpleTestCase):
    """Quotienting the lift by z gives back the order it came from."""

    def assert_round_trip(self, order, window):
        ext = CentralExtension(order)
        back = quotient_circular_order(ext.left_order, ext.z)
        cosets = {g: back.group.coset(ext(0, g)) for g in window}
        for g1 in window:
            for g2 in window:
                for g3 in window:
                    self.assertEqual(
                        back(cosets[g1], cosets[g2], cosets[g3]), order(g1, g2, g3)
                    )

    def test_cyclic_bases(self):
        for n in range(1, 13):
            order = cyclic_rot_order(n, 1)
            self.assert_round_trip(order, order.group.elements())

    def test_lexicographic_orders_on_integers(self):
        for m in (3, 4):
            group, quotient = CyclicGroup(), CyclicGroup(m)
            ses = ShortExactSequence(group, quotient, lambda g, q=quotient: q.element(g.value))
            order = lex_circular_order(
                ses, standard_integer_order(group), cyclic_rot_order(m, 1, group=quotient)
            )
            self.assert_round_trip(order, group.between(-20, 20))
