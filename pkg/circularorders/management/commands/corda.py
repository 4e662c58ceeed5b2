"""``python manage.py corda <subcommand> ...``: one query in, one result document out.

The result document goes to stdout. Progress lines go to stderr with
``--verbose``. Any verdict, UNKNOWN included, exits 0; malformed input exits
nonzero through CommandError.
"""

import json
from pathlib import Path

from django.core.management.base import BaseCommand, CommandError
from rest_framework.exceptions import ValidationError

from circularorders.models import VerdictRecord
from circularorders.utils.queries import (
    CONSTRUCTIONS,
    drain,
    query_document,
    render,
    replay,
    run_query,
)


def _pair(text):
    try:
        alpha, beta = (int(part) for part in text.split(","))
    except ValueError as exc:
        raise CommandError(f"expected a pair 'alpha,beta', got {text!r}") from exc
    return [alpha, beta]


def _read_json(path):
    try:
        text = Path(path).read_text(encoding="utf-8")
        return json.loads(text)
    except (OSError, json.JSONDecodeError) as exc:
        raise CommandError(f"cannot read a JSON document from {path}: {exc}") from exc


def _given(**params):
    return {key: value for key, value in params.items() if value is not None}


def _construction_arguments(parser):
    parser.add_argument("--construction", required=True, choices=sorted(CONSTRUCTIONS))
    parser.add_argument("--modulus", type=int)
    parser.add_argument("--k", type=int)
    parser.add_argument("--p", type=int)
    parser.add_argument("--z", type=int)
    parser.add_argument("--r", help="a rational written a/b")
    parser.add_argument("--group")
    parser.add_argument("--factors", type=int, nargs="+", help="0 stands for Z")
    parser.add_argument("--bound", type=int)


def _construction_params(options):
    return _given(
        construction=options["construction"],
        modulus=options["modulus"],
        k=options["k"],
        p=options["p"],
        z=options["z"],
        r=options["r"],
        group=options["group"],
        factors=options["factors"],
        bound=options["bound"],
    )


def _tree_arguments(parser):
    parser.add_argument("--tree", required=True, help="JSON file with nodes and edges")


def _seifert_arguments(parser):
    parser.add_argument("--pairs", nargs="*", type=_pair, default=[], metavar="A,B")
    parser.add_argument("--b", type=int, default=0)
    parser.add_argument("--genus", type=int, default=0)
    parser.add_argument("--boundaries", type=int, default=0)
    parser.add_argument("--base-nonorientable", action="store_true")
    parser.add_argument("--nonorientable", action="store_true")
    parser.add_argument("--left-orderable", choices=["yes", "no"])


def _seifert_params(options):
    params = {
        "orientable": not options["nonorientable"],
        "baseOrientable": not options["base_nonorientable"],
        "genus": options["genus"],
        "boundaries": options["boundaries"],
        "pairs": options["pairs"],
        "b": options["b"],
    }
    if options["left_orderable"]:
        params["leftOrderable"] = options["left_orderable"] == "yes"
    return params


def _two_piece_params(options):
    params = _read_json(options["tree"])
    if options["alpha"]:
        params["slope"] = _given(
            alpha=options["alpha"],
            peripheralWitness=options["peripheral_witness"],
            quotientWitness=options["quotient_witness"] or None,
            rotations=options["rotations"],
            target=options["target"],
        )
    return params


def _branched_cover_params(options):
    params = _given(
        torus=options["torus"],
        twoBridge=options["two_bridge"],
        knot=options["knot"],
        n=options["n"],
        range=options["range"],
        knownInfinite=options["known_infinite"],
    )
    if options["not_prime"]:
        params["prime"] = False
    return params


SUBCOMMANDS = {
    "validate-order": _construction_params,
    "finite-co": lambda o: {"group": o["group"]},
    "euler-order": lambda o: _given(group=o["group"], modulus=o["modulus"], k=o["k"]),
    "rot": lambda o: {**_construction_params(o), **_given(g=o["g"], nMax=o["n"])},
    "seifert": _seifert_params,
    "graph": lambda o: {
        **_read_json(o["tree"]),
        **_given(assumeInfinite=o["assume_infinite"]),
    },
    "two-piece": _two_piece_params,
    "branched-cover": _branched_cover_params,
    "surgery-window": lambda o: _given(
        p=o["p"], q=o["q"], c=o["c"], pRange=o["p_range"], qRange=o["q_range"],
        asserted=o["asserted"] or None,
    ),
    "fibonacci": lambda o: {"k": o["k"], "m": o["m"]},
    "takahashi": lambda o: {"pairs": o["pair"], "n": o["n"], "prime": o["prime"]},
}


class Command(BaseCommand):
    help = "Decide circular orderability questions and print a result document"

    def add_arguments(self, parser):
        parser.add_argument("--verbose", action="store_true", help="progress on stderr")
        parser.add_argument("--save", action="store_true", help="store a VerdictRecord")
        parser.add_argument("--input", help="run a query document from a JSON file")
        parser.add_argument("--replay", help="re-run a stored result document")
        sub = parser.add_subparsers(dest="subcommand")

        _construction_arguments(sub.add_parser("validate-order"))

        finite = sub.add_parser("finite-co")
        finite.add_argument("--group", required=True)

        euler = sub.add_parser("euler-order")
        euler.add_argument("--group")
        euler.add_argument("--modulus", type=int)
        euler.add_argument("--k", type=int)

        rot = sub.add_parser("rot")
        _construction_arguments(rot)
        rot.add_argument("--g", type=int, nargs="+", default=[1])
        rot.add_argument("--n", type=int, help="number of powers for the interval")

        _seifert_arguments(sub.add_parser("seifert"))

        graph = sub.add_parser("graph")
        _tree_arguments(graph)
        graph.add_argument("--assume-infinite", type=int, nargs="+")

        two_piece = sub.add_parser("two-piece")
        _tree_arguments(two_piece)
        two_piece.add_argument("--alpha", type=int, nargs=2)
        two_piece.add_argument("--peripheral-witness", choices=["first", "second"])
        two_piece.add_argument("--quotient-witness", action="store_true")
        two_piece.add_argument("--rotations", nargs=2)
        two_piece.add_argument("--target")

        cover = sub.add_parser("branched-cover")
        knot = cover.add_mutually_exclusive_group(required=True)
        knot.add_argument("--torus", type=int, nargs=2)
        knot.add_argument("--two-bridge", type=int, nargs=2)
        knot.add_argument("--knot")
        degree = cover.add_mutually_exclusive_group(required=True)
        degree.add_argument("--n", type=int)
        degree.add_argument("--range", type=int, nargs=2)
        cover.add_argument("--known-infinite", type=int, nargs="+")
        cover.add_argument("--not-prime", action="store_true")

        surgery = sub.add_parser("surgery-window")
        surgery.add_argument("--p", type=int)
        surgery.add_argument("--q", type=int)
        surgery.add_argument("--c", required=True, help="c(h) written a/b")
        surgery.add_argument("--p-range", type=int, nargs=2)
        surgery.add_argument("--q-range", type=int, nargs=2)
        surgery.add_argument("--asserted", action="store_true")

        fib = sub.add_parser("fibonacci")
        fib.add_argument("--k", type=int, required=True)
        fib.add_argument("--m", type=int, required=True)

        taka = sub.add_parser("takahashi")
        taka.add_argument("--pair", type=int, nargs=4, action="append", required=True)
        taka.add_argument("--n", type=int, required=True)
        taka.add_argument("--prime", action="store_true")

    def handle(self, *args, **options):
        verbose = options["verbose"]

        def progress(line):
            self.stderr.write(line)

        try:
            if options["replay"]:
                stored = _read_json(options["replay"])
                matches, result = drain(replay(stored, verbose), progress)
                self.stdout.write(render(result), ending="")
                if not matches:
                    raise CommandError(
                        f"replayed document differs from {options['replay']}"
                    )
                return
            if options["input"]:
                document = _read_json(options["input"])
            elif options["subcommand"]:
                name = options["subcommand"]
                document = query_document(name, SUBCOMMANDS[name](options))
            else:
                raise CommandError("give a subcommand, --input or --replay")
            result = drain(run_query(document, verbose), progress)
        except ValidationError as exc:
            raise CommandError(json.dumps(exc.detail, ensure_ascii=False)) from exc
        except ValueError as exc:
            raise CommandError(str(exc)) from exc

        self.stdout.write(render(result), ending="")
        if options["save"]:
            VerdictRecord.objects.create(
                subcommand=result["query"]["subcommand"],
                query=result["query"],
                result=result,
                verdict=result["verdict"],
            )
