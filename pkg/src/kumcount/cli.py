"""``kumcount`` command line.

Exit codes: 0 success, 1 verification disagreement, 2 invalid input,
3 output could not be written.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import report
from .components import (
    count_components_closed_form,
    count_components_oracle,
    count_embedding_orbit_classes,
    count_marked_components,
    enumerate_component_classes,
    isotropic_residues,
    class_representatives,
    marked_isometric,
)
from .errors import DomainError
from .lattice import load_lattice_document

EXIT_OK, EXIT_DISAGREE, EXIT_INPUT, EXIT_IO = 0, 1, 2, 3


class _Fail(Exception):
    def __init__(self, code, msg):
        super().__init__(msg)
        self.code = code


def _emit(text: str, out: str | None) -> None:
    if out is None:
        sys.stdout.write(text)
        return
    try:
        Path(out).write_text(text)
    except OSError as exc:
        raise _Fail(EXIT_IO, f"cannot write {out}: {exc}") from None


def _read(path: str) -> str:
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise _Fail(EXIT_INPUT, f"cannot read {path}: {exc}") from None


def cmd_count(args) -> int:
    n, d, t = args.n, args.d, args.t
    cf = count_components_closed_form(n, d, t)
    oracle = count_components_oracle(n, d, t)
    classes = class_representatives(isotropic_residues(n, d, t), t)
    if args.format == "json":
        doc = {"n": n, "d": d, "t": t, "count": cf.count, "branch": cf.branch,
               "oracle": oracle, "classes": classes, "agree": cf.count == oracle}
        text = json.dumps(doc, indent=2) + "\n"
    else:
        text = (
            f"n={n} d={d} t={t}\n"
            f"closed form: {cf.count} (branch {cf.branch})\n"
            f"oracle: {oracle}\n"
            f"classes: {classes}\n"
        )
    _emit(text, args.out)
    return EXIT_OK if cf.count == oracle else EXIT_DISAGREE


def cmd_grid(args) -> int:
    rows = report.grid_rows(args.n_max, args.d_max)
    text = report.rows_to_json(rows) if args.format == "json" else report.rows_to_csv(rows)
    _emit(text, args.out)
    return EXIT_OK


def cmd_verify(args) -> int:
    rep = report.verify(args.n_max, args.d_max)
    _emit(rep.render(), args.out)
    return EXIT_OK if rep.ok else EXIT_DISAGREE


def cmd_classes(args) -> int:
    classes = enumerate_component_classes(args.n, args.d, args.t)
    recs = [
        {"c": p.c, "gram": [list(r) for r in p.gram], "l": list(p.l_coords), "det": p.det}
        for p in classes
    ]
    if args.format == "json":
        text = json.dumps(recs, indent=2) + "\n"
    else:
        lines = ["c,gram,l,det"]
        for r in recs:
            (a, b), (_, e) = r["gram"]
            lines.append(f'{r["c"]},"[[{a},{b}],[{b},{e}]]","[{r["l"][0]},{r["l"][1]}]",{r["det"]}')
        text = "\n".join(lines) + "\n"
    _emit(text, args.out)
    return EXIT_OK


def cmd_marked(args) -> int:
    n = args.n
    text = (
        f"marked components: {count_marked_components(n)}\n"
        f"embedding orbits: {count_embedding_orbit_classes(n)}\n"
    )
    _emit(text, args.out)
    return EXIT_OK


def _fmt(value) -> str:
    if value is None:
        return "other"
    if isinstance(value, bool):
        return "true" if value else "false"
    return str(value)


def cmd_monodromy_check(args) -> int:
    lattice, kind, matrix = load_lattice_document(_read(args.file), args.file)
    if kind != "matrix":
        raise DomainError(f"{args.file}: expected a 'matrix' field")
    rep = lattice.monodromy_report(matrix)
    if args.format == "json":
        text = json.dumps({"n": lattice.n, **rep}, indent=2) + "\n"
    else:
        text = "".join(f"{k}: {_fmt(v)}\n" for k, v in rep.items())
    _emit(text, args.out)
    return EXIT_OK


def cmd_orbit_invariant(args) -> int:
    lattice, kind, vec = load_lattice_document(_read(args.file), args.file)
    if kind != "vector":
        raise DomainError(f"{args.file}: expected a 'vector' field")
    inv = lattice.orbit_invariant(vec)
    text = (
        f"square: {inv.square}\n"
        f"divisibility: {inv.div}\n"
        f"discriminant: {inv.disc.residue} mod {inv.disc.order} (q = {inv.disc.q_value} mod 2)\n"
    )
    _emit(text, args.out)
    return EXIT_OK


def load_pair_document(text: str, source: str = "<input>"):
    """``{"gram": [[a, b], [b, c]], "l": [x, y]}`` -> ``(gram, l)``."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DomainError(f"{source}:{exc.lineno}:{exc.colno}: {exc.msg}") from None
    if not isinstance(doc, dict):
        raise DomainError(f"{source}: top level must be an object")
    gram = doc.get("gram")
    if not isinstance(gram, list) or len(gram) != 2:
        raise DomainError(f"{source}: field 'gram' must be a 2x2 matrix")
    for i, row in enumerate(gram):
        if not isinstance(row, list) or len(row) != 2:
            raise DomainError(f"{source}: gram[{i}] must have 2 entries")
        for j, x in enumerate(row):
            if not isinstance(x, int) or isinstance(x, bool):
                raise DomainError(f"{source}: gram[{i}][{j}] is not an integer")
    vec = doc.get("l")
    if not isinstance(vec, list) or len(vec) != 2:
        raise DomainError(f"{source}: field 'l' must have 2 entries")
    for i, x in enumerate(vec):
        if not isinstance(x, int) or isinstance(x, bool):
            raise DomainError(f"{source}: l[{i}] is not an integer")
    return (tuple(gram[0]), tuple(gram[1])), tuple(vec)


def cmd_pair_isometric(args) -> int:
    g1, l1 = load_pair_document(_read(args.file1), args.file1)
    g2, l2 = load_pair_document(_read(args.file2), args.file2)
    _emit(_fmt(marked_isometric(g1, l1, g2, l2)) + "\n", args.out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="kumcount", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, formats=("text", "json"), default="text"):
        p.add_argument("--format", choices=formats, default=default)
        p.add_argument("--out", help="write output to this path instead of stdout")

    def profile(p):
        p.add_argument("--n", type=int, required=True)
        p.add_argument("--d", type=int, required=True)
        p.add_argument("--t", type=int, required=True)

    p = sub.add_parser("count", help="closed form and oracle counts for one profile")
    profile(p)
    common(p)
    p.set_defaults(func=cmd_count)

    p = sub.add_parser("grid", help="table of every valid profile")
    p.add_argument("--n-max", type=int, required=True)
    p.add_argument("--d-max", type=int, required=True)
    common(p, ("csv", "json"), "csv")
    p.set_defaults(func=cmd_grid)

    p = sub.add_parser("verify", help="cross-check closed form, oracle and marked lattices")
    p.add_argument("--n-max", type=int, default=50)
    p.add_argument("--d-max", type=int, default=50)
    p.add_argument("--out")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("classes", help="marked lattice representatives for one profile")
    profile(p)
    common(p, ("csv", "json"), "csv")
    p.set_defaults(func=cmd_classes)

    p = sub.add_parser("marked", help="components of the marked moduli space")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--out")
    p.set_defaults(func=cmd_marked)

    p = sub.add_parser("monodromy-check", help="test a 7x7 matrix for monodromy membership")
    p.add_argument("file")
    common(p)
    p.set_defaults(func=cmd_monodromy_check)

    p = sub.add_parser("orbit-invariant", help="square, divisibility and discriminant class of a vector")
    p.add_argument("file")
    p.add_argument("--out")
    p.set_defaults(func=cmd_orbit_invariant)

    p = sub.add_parser("pair-isometric", help="decide isometry of two marked rank-2 lattices")
    p.add_argument("file1")
    p.add_argument("file2")
    p.add_argument("--out")
    p.set_defaults(func=cmd_pair_isometric)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except DomainError as exc:
        print(f"kumcount: error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except _Fail as exc:
        print(f"kumcount: error: {exc}", file=sys.stderr)
        return exc.code


if __name__ == "__main__":
    sys.exit(main())
