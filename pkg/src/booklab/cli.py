"""``booklab`` command-line entry point.

Every run prints JSON lines: first the effective configuration, then one or
more result records. Exit status is 0 on success, 1 on bad input or a domain
error, and 2 when a search stops at its cap without an answer.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import os
import sys
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import analytic, books, coloring, constructions, quasi, search
from .coloring import Color, VertexSet
from .errors import BooklabError, InconclusiveError

EXIT_OK, EXIT_ERROR, EXIT_INCONCLUSIVE = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        if "unrecognized arguments" in message:
            message = "unknown flag: " + message.split(":", 1)[1].strip()
        raise UsageError(message)


def rational(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"malformed rational {text!r}; expected NUM/DEN with DEN > 0") from None


def real(text: str) -> float:
    """A float that may also be written as NUM/DEN."""
    return float(rational(text))


def positive_int(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
    if v < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {v}")
    return v


def _default_threads() -> int:
    raw = os.environ.get("BOOKLAB_THREADS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def _jsonable(obj):
    if isinstance(obj, Fraction):
        return f"{obj.numerator}/{obj.denominator}"
    if isinstance(obj, VertexSet):
        return obj.sorted()
    if isinstance(obj, Color):
        return obj.value
    if isinstance(obj, Path):
        return str(obj)
    if isinstance(obj, np.generic):
        return obj.item()
    if isinstance(obj, (set, frozenset, tuple)):
        return list(obj)
    if dataclasses.is_dataclass(obj):
        return dataclasses.asdict(obj)
    raise TypeError(f"cannot serialize {type(obj).__name__}")


class _Out:
    def __init__(self, stream):
        self.stream = stream

    def __call__(self, record: dict) -> None:
        self.stream.write(json.dumps(record, default=_jsonable) + "\n")


def _load(path: Path) -> coloring.TwoColoring:
    if not path.is_file():
        raise UsageError(f"input file not found: {path}")
    return coloring.load(path)


# -- subcommands -------------------------------------------------------------

def cmd_gen(a, out):
    if a.kind == "kpartite":
        c, part = constructions.balanced_kpartite(a.k, a.part_size)
        extra = {"parts": [p.sorted() for p in part.parts]}
    else:
        c = constructions.random_coloring(a.n, a.p, a.seed)
        extra = {}
    coloring.save(c, a.out)
    out({"written": str(a.out), "N": c.n, "blue_edges": c.blue_edge_count(), **extra})


def cmd_books(a, out):
    c = _load(a.inp)
    color = Color.parse(a.color)
    if a.spectrum:
        for entry in books.spectrum(c, color, a.k).entries():
            out(entry)
    if a.max or not a.spectrum:
        out(books.max_book(c, color, a.k).as_dict())


def cmd_many_books(a, out):
    c = _load(a.inp)
    if (a.c is None) == (a.p is None):
        raise UsageError("give exactly one of --c or --p")
    out(books.many_books(c, a.k, a.gamma, c_param=a.c, p=a.p).as_dict())


def cmd_ramsey(a, out):
    res = search.ramsey_number(a.k, a.m, a.n, a.cap, node_cap=a.node_cap)
    if res.witness is not None and a.out:
        coloring.save(res.witness, a.out)
    out(res.as_dict())
    return EXIT_OK if res.value is not None else EXIT_INCONCLUSIVE


def cmd_witness(a, out):
    init = _load(a.init) if a.init else None
    w = search.witness_search(a.N, a.k, a.m, a.n, a.budget, a.seed, init=init)
    if w is not None and a.out:
        coloring.save(w, a.out)
    out({"found": w is not None, "written": str(a.out) if w is not None and a.out else None,
         "blue_edges": w.blue_edges() if w is not None else None})


def cmd_analytic(a, out):
    what = a.what
    if what == "k1":
        out({"p": a.p, "k1": analytic.k1(a.p)})
    elif what == "k2":
        out({"p": a.p, "k2": analytic.k2(a.p)})
    elif what == "g":
        out({"p": a.p, "g": analytic.g(a.p)})
    elif what == "c1":
        out({"k": a.k, "c1": analytic.c1(a.k), "c1_root": analytic.c1_root(a.k)})
    elif what == "rho":
        out({"k": a.k, "rho": analytic.aes_rho(a.k)})
    elif what == "min-F":
        rep = analytic.grid_min_F(a.p, a.k, a.grid, a.eps0, mode=a.mode, restarts=a.restarts, seed=a.seed)
        out(rep.as_dict())
    elif what == "bounds":
        out({"c": a.c, "k": a.k, "n": a.n, **constructions.dominant_bound(a.c, a.k, a.n)})


def cmd_quasi(a, out):
    c = _load(a.inp)
    exhaustive = a.exhaustive or (a.probes is None and c.n <= quasi.QUASI_EXHAUSTIVE_MAX_N)
    if exhaustive:
        rep = quasi.quasi_exhaustive(c, a.p, a.theta)
    else:
        probes = 1000 if a.probes is None else a.probes
        rep = quasi.quasi_sampled(c, a.p, a.theta, probes, a.seed, workers=a.threads)
    out(rep.as_dict())


def cmd_identity(a, out):
    out(quasi.identity_check(_load(a.inp), a.k, a.p).as_dict())


def cmd_kdist(a, out):
    c = _load(a.inp)
    count, part = quasi.kpartite_distance(c, a.k, a.restarts, a.seed, workers=a.threads)
    out({"k": a.k, "N": c.n, "distance_upper_bound": count,
         "parts": [p.sorted() for p in part.parts]})


# -- parser ------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--threads", type=positive_int, default=_default_threads(),
                        help="worker processes (default: $BOOKLAB_THREADS or 1)")
    common.add_argument("--report", type=Path, help="write JSON lines here instead of stdout")

    p = _Parser(prog="booklab", description="Book Ramsey numbers: colorings, books, search, analytics.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    g = sub.add_parser("gen", parents=[common], help="generate a coloring")
    gsub = g.add_subparsers(dest="kind", required=True, parser_class=_Parser)
    gk = gsub.add_parser("kpartite", parents=[common])
    gk.add_argument("--k", type=positive_int, required=True)
    gk.add_argument("--part-size", type=positive_int, required=True)
    gk.add_argument("--out", type=Path, required=True)
    gr = gsub.add_parser("random", parents=[common])
    gr.add_argument("--n", type=positive_int, required=True)
    gr.add_argument("--p", type=rational, required=True)
    gr.add_argument("--seed", type=int, default=0)
    gr.add_argument("--out", type=Path, required=True)
    g.set_defaults(func=cmd_gen)

    b = sub.add_parser("books", parents=[common], help="largest book / page spectrum")
    b.add_argument("--in", dest="inp", type=Path, required=True)
    b.add_argument("--color", choices=["red", "blue"], required=True)
    b.add_argument("--k", type=positive_int, required=True)
    b.add_argument("--spectrum", action="store_true")
    b.add_argument("--max", action="store_true")
    b.set_defaults(func=cmd_books)

    mb = sub.add_parser("many-books", parents=[common], help="(c, gamma)-many books test")
    mb.add_argument("--in", dest="inp", type=Path, required=True)
    mb.add_argument("--c", type=rational)
    mb.add_argument("--p", type=rational)
    mb.add_argument("--gamma", type=rational, required=True)
    mb.add_argument("--k", type=positive_int, required=True)
    mb.set_defaults(func=cmd_many_books)

    r = sub.add_parser("ramsey", parents=[common], help="exact book Ramsey number search")
    r.add_argument("--k", type=positive_int, required=True)
    r.add_argument("--m", type=positive_int, required=True)
    r.add_argument("--n", type=positive_int, required=True)
    r.add_argument("--cap", type=positive_int, required=True)
    r.add_argument("--node-cap", type=positive_int, default=search.DEFAULT_NODE_CAP)
    r.add_argument("--out", type=Path, help="save the lower-bound witness")
    r.set_defaults(func=cmd_ramsey)

    w = sub.add_parser("witness", parents=[common], help="annealing search for a book-free coloring")
    w.add_argument("--N", type=positive_int, required=True)
    w.add_argument("--k", type=positive_int, required=True)
    w.add_argument("--m", type=positive_int, required=True)
    w.add_argument("--n", type=positive_int, required=True)
    w.add_argument("--budget", type=positive_int, required=True)
    w.add_argument("--seed", type=int, default=0)
    w.add_argument("--init", type=Path)
    w.add_argument("--out", type=Path)
    w.set_defaults(func=cmd_witness)

    an = sub.add_parser("analytic", parents=[common], help="closed-form functions and minimizations")
    asub = an.add_subparsers(dest="what", required=True, parser_class=_Parser)
    for name in ("k1", "k2", "g"):
        s = asub.add_parser(name, parents=[common])
        s.add_argument("--p", type=real, required=True)
    for name in ("c1", "rho"):
        s = asub.add_parser(name, parents=[common])
        s.add_argument("--k", type=positive_int, required=True)
    s = asub.add_parser("min-F", parents=[common])
    s.add_argument("--p", type=real, required=True)
    s.add_argument("--k", type=positive_int, required=True)
    s.add_argument("--eps0", type=real)
    s.add_argument("--grid", type=positive_int, default=21)
    s.add_argument("--mode", choices=["auto", "grid", "descent"], default="auto")
    s.add_argument("--restarts", type=positive_int, default=64)
    s.add_argument("--seed", type=int, default=0)
    s = asub.add_parser("bounds", parents=[common])
    s.add_argument("--c", type=rational, required=True)
    s.add_argument("--k", type=positive_int, required=True)
    s.add_argument("--n", type=positive_int, required=True)
    an.set_defaults(func=cmd_analytic)

    q = sub.add_parser("quasi", parents=[common], help="(p, theta)-quasirandomness witness search")
    q.add_argument("--in", dest="inp", type=Path, required=True)
    q.add_argument("--p", type=rational, required=True)
    q.add_argument("--theta", type=rational, required=True)
    mode = q.add_mutually_exclusive_group()
    mode.add_argument("--exhaustive", action="store_true")
    mode.add_argument("--probes", type=positive_int)
    q.add_argument("--seed", type=int, default=0)
    q.set_defaults(func=cmd_quasi)

    i = sub.add_parser("identity", parents=[common], help="clique-count identity check")
    i.add_argument("--in", dest="inp", type=Path, required=True)
    i.add_argument("--k", type=positive_int, required=True)
    i.add_argument("--p", type=rational, required=True)
    i.set_defaults(func=cmd_identity)

    kd = sub.add_parser("kdist", parents=[common], help="distance to balanced complete k-partite red")
    kd.add_argument("--in", dest="inp", type=Path, required=True)
    kd.add_argument("--k", type=positive_int, required=True)
    kd.add_argument("--restarts", type=positive_int, default=16)
    kd.add_argument("--seed", type=int, default=0)
    kd.set_defaults(func=cmd_kdist)
    return p


def run(argv=None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    try:
        args = build_parser().parse_args(argv)
    except UsageError as exc:
        print(f"booklab: error: {exc}", file=stderr)
        return EXIT_ERROR
    config = {k: v for k, v in vars(args).items() if k != "func"}
    for key in ("inp", "init"):
        path = config.get(key)
        if path is not None and not path.is_file():
            print(f"booklab: error: input file not found: {path}", file=stderr)
            return EXIT_ERROR
    handle = open(args.report, "w") if args.report else None
    out = _Out(handle or stdout)
    try:
        out({"config": config})
        code = args.func(args, out)
        return EXIT_OK if code is None else code
    except InconclusiveError as exc:
        out({"inconclusive": str(exc), "stats": exc.stats})
        return EXIT_INCONCLUSIVE
    except (UsageError, BooklabError, OSError) as exc:
        print(f"booklab: error: {exc}", file=stderr)
        return EXIT_ERROR
    finally:
        if handle:
            handle.close()


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
