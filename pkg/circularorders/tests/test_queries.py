import json
import tempfile
from fractions import Fraction
from io import StringIO
from pathlib import Path

import numpy as np
from django.core.management import call_command
from django.core.management.base import CommandError
from django.test import SimpleTestCase, TestCase
from rest_framework.exceptions import ValidationError
from rest_framework.test import APIClient

from circularorders.models import VerdictRecord
from circularorders.utils import queries as qr
from circularorders.utils.logging import progress_line

TREFOIL_PAIR = {
    "nodes": [
        {"boundaries": 1, "pairs": [[2, 1], [3, 1]]},
        {"boundaries": 1, "pairs": [[2, 1], [3, 1]]},
    ],
    "edges": [{"a": 0, "aBdry": 0, "b": 1, "bBdry": 0, "matrix": [[-5, 6], [1, -1]]}],
}


def run(subcommand, **params):
    return qr.drain(qr.run_query(qr.query_document(subcommand, params)))


class DocumentTests(SimpleTestCase):
    def test_render_is_canonical(self):
        text = qr.render({"b": Fraction(1, 3), "a": np.int64(2), "c": "Σ"})
        self.assertEqual(text, '{\n  "a": 2,\n  "b": "1/3",\n  "c": "Σ"\n}\n')

    def test_result_document_shape(self):
        result = run("finite-co", group="z5")
        self.assertEqual(
            set(result),
            {"schema", "query", "verdict", "rule", "citations", "hypotheses", "notes", "data"},
        )
        self.assertEqual(result["schema"], "corda/1")
        self.assertEqual(result["query"], {"subcommand": "finite-co", "params": {"group": "z5"}})
        self.assertEqual(len(result["citations"]), 1)

    def test_schema_is_checked(self):
        with self.assertRaises(ValidationError):
            qr.drain(qr.run_query({"schema": "corda/0", "query": {"subcommand": "finite-co"}}))

    def test_unknown_subcommand(self):
        with self.assertRaises(ValidationError):
            run("orderable")

    def test_unknown_parameters_are_rejected(self):
        with self.assertRaises(ValidationError):
            run("finite-co", group="z5", colour="red")

    def test_floats_are_rejected(self):
        with self.assertRaises(ValidationError):
            run("surgery-window", p=4, q=3, c=0.5)

    def test_progress_lines(self):
        lines = []
        qr.drain(qr.run_query(qr.query_document("finite-co", {"group": "z3"}), True), lines.append)
        self.assertTrue(any("Running finite-co" in line for line in lines))
        quiet = []
        qr.drain(qr.run_query(qr.query_document("finite-co", {"group": "z3"})), quiet.append)
        self.assertEqual(quiet, [])

    def test_progress_line_format(self):
        self.assertIsNone(progress_line("Running rot", False))
        line = progress_line("Running rot", True)
        self.assertRegex(line, r"^\[\d{4}-\d{2}-\d{2} \d{2}:\d{2}:\d{2}\] Running rot$")

    def test_replay(self):
        stored = run("euler-order", modulus=5, k=2)
        matches, regenerated = qr.drain(qr.replay(stored))
        self.assertTrue(matches)
        self.assertEqual(regenerated, stored)
        tampered = {**stored, "verdict": "NOT_CO"}
        matches, _ = qr.drain(qr.replay(tampered))
        self.assertFalse(matches)
        with self.assertRaises(ValueError):
            qr.drain(qr.replay({"verdict": "NOT_CO"}))


class ConstructionTests(SimpleTestCase):
    """Every construction path passes the axiom check on a small window."""

    PARAMS = {
        "cyclic-rot": {"modulus": 5, "k": 2},
        "arrangement": {"group": "z6"},
        "secret-integer": {"bound": 4},
        "secret-lattice": {"bound": 1},
        "lex-z": {"modulus": 3, "k": 1, "bound": 6},
        "rational-rotation": {"r": "2/5", "bound": 6},
        "quotient-z": {"z": 4},
        "lift": {"modulus": 3, "k": 1},
        "one-over-p": {"p": 3, "bound": 6},
        "planar": {"factors": [2, 3], "bound": 2},
        "extend": {"k": 2, "r": "1/3", "bound": 6},
        "t3": {"r": "1/3", "bound": 1},
    }
    EXHAUSTIVE = {"cyclic-rot", "arrangement", "quotient-z"}

    def test_registry_is_covered(self):
        self.assertEqual(set(self.PARAMS), set(qr.CONSTRUCTIONS))

    def test_every_construction_validates(self):
        for name, params in self.PARAMS.items():
            result = run("validate-order", construction=name, **params)
            self.assertEqual(result["verdict"], "CO_CERTIFIED", name)
            self.assertEqual(result["data"]["violationCount"], 0, name)
            expected = "axioms-checked" if name in self.EXHAUSTIVE else "explicit-construction"
            self.assertEqual(result["rule"], expected, name)

    def test_missing_parameters(self):
        with self.assertRaises(ValueError):
            run("validate-order", construction="cyclic-rot", modulus=5)
        with self.assertRaises(ValueError):
            run("validate-order", construction="mobius")

    def test_non_orderable_arrangement(self):
        with self.assertRaises(ValueError):
            run("validate-order", construction="arrangement", group="q8")


class HandlerTests(SimpleTestCase):
    def test_finite_co(self):
        self.assertEqual(run("finite-co", group="q8")["verdict"], "NOT_CO")
        cyclic = run("finite-co", group="z5")
        self.assertEqual(cyclic["rule"], "axioms-checked")
        self.assertEqual(len(cyclic["data"]["witness"]), 5)
        # above the search bound the cyclicity criterion decides
        self.assertEqual(run("finite-co", group="sl25")["verdict"], "NOT_CO")
        self.assertEqual(run("finite-co", group="z12")["rule"], "finite-cyclic")

    def test_euler_order(self):
        result = run("euler-order", modulus=5, k=2)
        self.assertEqual(result["data"]["eulerClassOrder"], 5)
        self.assertEqual(result["data"]["quotient"], "Z/5")
        self.assertEqual(run("euler-order", group="z2xz2")["verdict"], "NOT_CO")
        with self.assertRaises(ValidationError):
            run("euler-order", group="z4", modulus=4)

    def test_rot(self):
        result = run("rot", construction="quotient-z", z=3, g=[1], nMax=1000)
        self.assertEqual(result["data"]["rot"], "1/3")
        self.assertTrue(result["data"]["exact"])
        low, high = (Fraction(x) for x in result["data"]["interval"])
        self.assertEqual(high - low, Fraction(1, 1000))

    def test_seifert(self):
        poincare = run("seifert", pairs=[[2, 1], [3, 1], [5, 1]], b=-1)
        self.assertEqual(poincare["verdict"], "NOT_CO")
        self.assertEqual(poincare["data"]["eulerNumber"], "-1/30")
        self.assertEqual(poincare["data"]["h1"], "0")

        torus = run("seifert", genus=1)
        self.assertEqual(torus["rule"], "infinite-seifert")
        self.assertEqual(torus["data"]["rotations"]["kind"], "every-rational")

        exterior = run("seifert", boundaries=1, pairs=[[2, 1], [3, 1]])
        self.assertEqual(exterior["data"]["rationalLongitude"], [6, 5])
        self.assertEqual(exterior["data"]["base"], "D2(2,3)")

        lo = run("seifert", genus=0, pairs=[[2, 1], [3, 2], [7, 6]], b=-2, leftOrderable=True)
        self.assertEqual(lo["data"]["rotations"]["kind"], "reciprocals")

    def test_seifert_validation(self):
        with self.assertRaises(ValidationError):
            run("seifert", pairs=[[4, 2]])

    def test_graph(self):
        result = run("graph", **TREFOIL_PAIR)
        self.assertEqual(result["rule"], "two-piece-longitude-distance")
        self.assertEqual(result["data"]["h1"], "Z/6")
        self.assertEqual(run("two-piece", **TREFOIL_PAIR)["rule"], "two-piece-longitude-distance")

    def test_malformed_tree(self):
        with self.assertRaises(ValidationError):
            run("graph", nodes=TREFOIL_PAIR["nodes"], edges=[])

    def test_branched_cover(self):
        self.assertEqual(run("branched-cover", torus=[2, 3], n=3)["verdict"], "NOT_CO")
        table = run("branched-cover", torus=[2, 3], range=[2, 12])
        self.assertEqual(table["verdict"], "UNKNOWN")
        self.assertEqual(table["data"]["degrees"]["NOT_CO"], [3, 4, 5])
        self.assertEqual(len(table["data"]["table"]), 11)
        uniform = run("branched-cover", torus=[2, 3], range=[6, 9])
        self.assertEqual(uniform["rule"], "infinite-seifert")

    def test_branched_cover_validation(self):
        with self.assertRaises(ValidationError):
            run("branched-cover", torus=[2, 3], twoBridge=[7, 4], n=2)
        with self.assertRaises(ValidationError):
            run("branched-cover", torus=[2, 3])

    def test_surgery(self):
        result = run("surgery-window", p=4, q=3, c="1/2", asserted=True)
        self.assertEqual(result["rule"], "abelian-cover-left-orderable")
        table = run("surgery-window", c="1/2", pRange=[1, 3], qRange=[1, 3])
        self.assertEqual(table["verdict"], "UNKNOWN")
        self.assertTrue(all(row["q"] != 0 for row in table["data"]["table"]))

    def test_fibonacci_and_takahashi(self):
        self.assertEqual(run("fibonacci", k=3, m=2)["rule"], "infinite-quotient")
        result = run("takahashi", pairs=[[3, 1, 2, 1]], n=2, prime=True)
        self.assertEqual(result["data"]["quotient"], "Z/3 * Z/2")


class DatabaseQueryTests(TestCase):
    def test_known_negative_cover(self):
        result = run("branched-cover", knot="5_2", n=3)
        self.assertEqual(result["verdict"], "NOT_CO")
        self.assertEqual(result["data"]["known_negative"]["name"], "Weeks manifold")

    def test_divisible_covers(self):
        result = run("branched-cover", knot="4_1", n=6, knownInfinite=[3])
        self.assertEqual(result["rule"], "divisible-covers")


class CommandTests(TestCase):
    def call(self, *args):
        out, err = StringIO(), StringIO()
        call_command("corda", *args, stdout=out, stderr=err)
        return json.loads(out.getvalue()), err.getvalue()

    def test_finite_co(self):
        result, err = self.call("finite-co", "--group", "q8")
        self.assertEqual(result["verdict"], "NOT_CO")
        self.assertEqual(err, "")

    def test_verbose_progress_goes_to_stderr(self):
        result, err = self.call("--verbose", "finite-co", "--group", "z3")
        self.assertEqual(result["verdict"], "CO_CERTIFIED")
        self.assertIn("Running finite-co", err)

    def test_rot(self):
        result, _ = self.call(
            "rot", "--construction", "quotient-z", "--z", "3", "--g", "1", "--n", "1000"
        )
        self.assertEqual(result["data"]["rot"], "1/3")

    def test_seifert(self):
        result, _ = self.call("seifert", "--pairs", "2,1", "3,1", "5,1", "--b", "-1")
        self.assertEqual(result["verdict"], "NOT_CO")

    def test_branched_cover(self):
        result, _ = self.call("branched-cover", "--two-bridge", "7", "4", "--n", "2")
        self.assertEqual(result["rule"], "finite-cyclic")
        result, _ = self.call("branched-cover", "--knot", "5_2", "--n", "3")
        self.assertEqual(result["verdict"], "NOT_CO")

    def test_tree_from_file(self):
        with tempfile.TemporaryDirectory() as tmp:
            path = Path(tmp) / "tree.json"
            path.write_text(json.dumps(TREFOIL_PAIR), encoding="utf-8")
            result, _ = self.call("graph", "--tree", str(path))
        self.assertEqual(result["rule"], "two-piece-longitude-distance")

    def test_input_and_replay(self):
        with tempfile.TemporaryDirectory() as tmp:
            query = Path(tmp) / "query.json"
            query.write_text(
                json.dumps(qr.query_document("fibonacci", {"k": 2, "m": 3})), encoding="utf-8"
            )
            result, _ = self.call("--input", str(query))
            self.assertEqual(result["rule"], "infinite-quotient")

            stored = Path(tmp) / "result.json"
            stored.write_text(qr.render(result), encoding="utf-8")
            replayed, _ = self.call("--replay", str(stored))
            self.assertEqual(replayed, result)

            stored.write_text(qr.render({**result, "rule": "left-orderable"}), encoding="utf-8")
            with self.assertRaises(CommandError):
                self.call("--replay", str(stored))

    def test_save(self):
        self.call("--save", "fibonacci", "--k", "3", "--m", "1")
        record = VerdictRecord.objects.get()
        self.assertEqual(record.subcommand, "fibonacci")
        self.assertEqual(record.verdict, "CO_CERTIFIED")

    def test_errors(self):
        with self.assertRaises(CommandError):
            self.call("finite-co", "--group", "monster")
        with self.assertRaises(CommandError):
            self.call("surgery-window", "--p", "4", "--q", "2", "--c", "1/2")
        with self.assertRaises(CommandError):
            self.call()


class QueryApiTests(TestCase):
    def setUp(self):
        self.client = APIClient()

    def test_query(self):
        response = self.client.post(
            "/api/query/", qr.query_document("finite-co", {"group": "q8"}), format="json"
        )
        self.assertEqual(response.status_code, 200)
        self.assertEqual(response.data["verdict"], "NOT_CO")
        self.assertFalse(VerdictRecord.objects.exists())

    def test_save(self):
        response = self.client.post(
            "/api/query/?save=true",
            qr.query_document("takahashi", {"pairs": [[3, 1, 2, 1]], "n": 2, "prime": True}),
            format="json",
        )
        self.assertEqual(response.status_code, 200)
        self.assertEqual(VerdictRecord.objects.get().verdict, "CO_CERTIFIED")
        listing = self.client.get("/api/verdicts/")
        self.assertEqual(len(listing.data), 1)

    def test_bad_queries(self):
        response = self.client.post("/api/query/", {"schema": "corda/1"}, format="json")
        self.assertEqual(response.status_code, 400)
        response = self.client.post(
            "/api/query/", qr.query_document("finite-co", {"group": "monster"}), format="json"
        )
        self.assertEqual(response.status_code, 400)

    def test_known_negatives(self):
        response = self.client.get("/api/known-negatives/", {"search": "Weeks"})
        self.assertEqual(response.status_code, 200)
        self.assertEqual(response.data[0]["name"], "Weeks manifold")
