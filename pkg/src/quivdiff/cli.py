"""Command-line front end.

Exit codes: 0 success, 1 validation or domain error, 2 parse error,
3 internal invariant violation (a formula/oracle mismatch, i.e. a bug).
Set QUIVDIFF_COLOR=1 to colour verdicts and reports with ANSI codes.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from . import diffproj as dp
from . import formats, koszul, qrep
from .errors import (
    DomainError,
    InternalInvariantError,
    ParseError,
    QuivdiffError,
)
from .quiver import classify_algebra, parse_quiver

EXIT_OK = 0
EXIT_DOMAIN = 1
EXIT_PARSE = 2
EXIT_INTERNAL = 3


def _color_enabled() -> bool:
    return os.environ.get("QUIVDIFF_COLOR", "") in ("1", "true", "yes")


def _paint(text: str, code: str) -> str:
    if _color_enabled():
        return f"\x1b[{code}m{text}\x1b[0m"
    return text


def _good(text):
    return _paint(text, "32")


def _bad(text):
    return _paint(text, "31")


def _read(path: str) -> str:
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def _base_dir(path: str) -> str:
    return os.path.dirname(os.path.abspath(path))


def _load_diffproj(path: str):
    return formats.parse_diffproj(_read(path), _base_dir(path))


def _load_rep(path: str):
    return formats.parse_rep(_read(path), _base_dir(path))


def _emit(args, text_payload: str, json_payload: dict):
    """Write the payload to --output (JSON if the name ends with .json),
    or to stdout (JSON form when --json)."""
    out = getattr(args, "output", None)
    if out:
        if out.endswith(".json"):
            with open(out, "w", encoding="utf-8") as fh:
                json.dump(json_payload, fh, indent=2)
                fh.write("\n")
        else:
            with open(out, "w", encoding="utf-8") as fh:
                fh.write(text_payload)
    elif args.json:
        json.dump(json_payload, sys.stdout, indent=2)
        sys.stdout.write("\n")
    else:
        sys.stdout.write(text_payload)


def cmd_classify(args) -> int:
    Q = parse_quiver(_read(args.quiver_file))
    verdict = classify_algebra(Q)
    if args.json:
        json.dump(verdict.to_json(), sys.stdout, indent=2)
        sys.stdout.write("\n")
    else:
        for i, c in enumerate(verdict.components, start=1):
            shown = c.verdict
            shown = _bad(shown) if c.verdict == "NotVirtuallyGorenstein" else _good(shown)
            print(
                f"component {i}: vertices {', '.join(c.component.vertices)}"
                f" | shape: {c.shape} | verdict: {shown}"
            )
    return EXIT_OK


def cmd_koszul(args) -> int:
    text = _read(args.module_file)
    kind = formats.detect_kind(text)
    if kind == "raw":
        M = dp.from_raw(formats.parse_raw(text, _base_dir(args.module_file)))
    elif kind == "diffproj":
        M = formats.parse_diffproj(text, _base_dir(args.module_file))
    else:
        raise ParseError(f"expected a differential module or raw module file, found {kind}")
    violations = dp.validate(M)
    if violations:
        for v in violations:
            print(_bad(f"violation: {v}"), file=sys.stderr)
        return EXIT_DOMAIN
    mults = None
    if args.reduce_first:
        split = dp.reduce(M)
        M = split.reduced
        mults = split.contractible_mults
        report = " ".join(
            f"{v}={r}" for v, r in zip(M.quiver.vertices, mults)
        )
        print(f"contractible multiplicities: {report}", file=sys.stderr)
    X = koszul.F_module(M)
    payload = formats.rep_to_json(X)
    if mults is not None:
        payload = {"rep": payload, "contractible_mults": {
            v: r for v, r in zip(M.quiver.vertices, mults)}}
    _emit(args, formats.rep_to_text(X), payload)
    return EXIT_OK


def cmd_unkoszul(args) -> int:
    X = _load_rep(args.rep_file)
    M = koszul.G_module(X)
    _emit(args, formats.diffproj_to_text(M), formats.diffproj_to_json(M))
    return EXIT_OK


def cmd_reduce(args) -> int:
    M = _load_diffproj(args.module_file)
    split = dp.reduce(M)
    mults = {v: r for v, r in zip(M.quiver.vertices, split.contractible_mults)}
    if not args.json or args.output:
        print(
            "contractible multiplicities: "
            + " ".join(f"{v}={r}" for v, r in mults.items()),
            file=sys.stderr,
        )
    json_payload = {
        "reduced": formats.diffproj_to_json(split.reduced),
        "contractible_mults": mults,
        "witness": {
            "s": {v: formats.matrix_to_json(S)
                  for v, S in zip(M.quiver.vertices, split.witness_s)},
            "k": {a.name: formats.matrix_to_json(K)
                  for a, K in zip(M.quiver.arrows, split.witness_k)},
        },
    }
    _emit(args, formats.diffproj_to_text(split.reduced), json_payload)
    return EXIT_OK


def cmd_cohomology(args) -> int:
    M = _load_diffproj(args.module_file)
    per_vertex, total = dp.cohomology_dims(M)
    if args.json:
        json.dump(
            {
                "by_vertex": {v: d for v, d in zip(M.quiver.vertices, per_vertex)},
                "total": total,
            },
            sys.stdout,
            indent=2,
        )
        sys.stdout.write("\n")
    else:
        for v, d in zip(M.quiver.vertices, per_vertex):
            print(f"vertex {v}: {d}")
        print(f"total: {total}")
    return EXIT_OK


def cmd_homhot(args) -> int:
    M = _load_diffproj(args.module_m)
    N = _load_diffproj(args.module_n)
    report = koszul.hom_homotopy_dim_formula(M, N, with_oracle=args.oracle)
    if args.json:
        json.dump(report.to_json(), sys.stdout, indent=2)
        sys.stdout.write("\n")
    else:
        line = (
            f"dim_hom={report.dim_hom} dim_ext_shift={report.dim_ext_shift}"
            f" total={report.total}"
        )
        if report.oracle_total is not None:
            line += f" oracle={report.oracle_total} " + _good("agreement")
        print(line)
    return EXIT_OK


def cmd_ext(args) -> int:
    X = _load_rep(args.rep_x)
    Y = _load_rep(args.rep_y)
    dim_hom = qrep.rep_hom_dim(X, Y)
    dim_ext = qrep.rep_ext1_dim(X, Y)
    euler = qrep.euler_pairing(X.quiver, X.dims, Y.dims)
    ok = dim_hom - dim_ext == euler
    if not ok:
        raise InternalInvariantError(
            f"hom - ext = {dim_hom - dim_ext} but the pairing gives {euler}"
        )
    if args.json:
        json.dump(
            {"dim_hom": dim_hom, "dim_ext1": dim_ext, "euler_pairing": euler,
             "euler_check": "ok"},
            sys.stdout,
            indent=2,
        )
        sys.stdout.write("\n")
    else:
        print(f"dim_hom={dim_hom} dim_ext1={dim_ext} euler={euler} check={_good('ok')}")
    return EXIT_OK


def cmd_generator(args) -> int:
    Q = parse_quiver(_read(args.quiver_file))
    field = formats.parse_field(args.field)
    if args.truncate is not None:
        C = koszul.truncated_generator(Q, field, args.truncate)
    else:
        C = koszul.compact_generator(Q, field)
    _emit(args, formats.diffproj_to_text(C), formats.diffproj_to_json(C))
    return EXIT_OK


def cmd_iso(args) -> int:
    X = _load_rep(args.rep_x)
    Y = _load_rep(args.rep_y)
    result = qrep.iso_probe(X, Y, trials=args.trials, seed=args.seed)
    if args.json:
        json.dump({"result": result.kind, "reason": result.reason}, sys.stdout, indent=2)
        sys.stdout.write("\n")
    elif result.kind == "iso":
        print(_good("isomorphic") + " (verified witness)")
    elif result.kind == "not_iso":
        print(_bad("not isomorphic") + f": {result.reason}")
    else:
        print(f"inconclusive: {result.reason}")
    return EXIT_OK


def cmd_check(args) -> int:
    text = _read(args.file)
    base = _base_dir(args.file)
    kind = args.kind or formats.detect_kind(text)
    if kind == "quiver":
        Q = parse_quiver(text)
        print(_good("ok") + f": quiver with {Q.n_vertices} vertices, {Q.n_arrows} arrows")
        return EXIT_OK
    if kind == "rep":
        X = formats.parse_rep(text, base)
        print(_good("ok") + f": representation, dims {list(X.dims)} over {X.field}")
        return EXIT_OK
    if kind == "raw":
        raw = formats.parse_raw(text, base)
        M = dp.from_raw(raw)
        print(_good("ok") + f": raw module is differential projective, tops {list(M.m)}")
        return EXIT_OK
    if kind == "diffproj":
        M = formats.parse_diffproj(text, base)
        violations = dp.validate(M)
        if violations:
            for v in violations:
                print(_bad(f"violation: {v}"))
            return EXIT_DOMAIN
        print(_good("ok") + f": differential module, tops {list(M.m)} over {M.field}")
        return EXIT_OK
    raise ParseError(f"unknown kind {kind!r}")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="quivdiff",
        description=(
            "Compute with differential projective modules over "
            "radical-square-zero path algebras."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, output=False):
        p.add_argument("--json", action="store_true", help="machine-readable output")
        if output:
            p.add_argument("-o", "--output", metavar="PATH",
                           help="write the result here (.json selects JSON)")

    p = sub.add_parser("classify", help="homological type of kQ/J^2 with dual numbers")
    p.add_argument("quiver_file")
    common(p)
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("koszul", help="top representation of a reduced module")
    p.add_argument("module_file")
    p.add_argument("--reduce-first", action="store_true",
                   help="split off contractible summands before applying the functor")
    common(p, output=True)
    p.set_defaults(func=cmd_koszul)

    p = sub.add_parser("unkoszul", help="differential module with a given top representation")
    p.add_argument("rep_file")
    common(p, output=True)
    p.set_defaults(func=cmd_unkoszul)

    p = sub.add_parser("reduce", help="contractible/reduced splitting")
    p.add_argument("module_file")
    common(p, output=True)
    p.set_defaults(func=cmd_reduce)

    p = sub.add_parser("cohomology", help="per-vertex dimensions of ker d / im d")
    p.add_argument("module_file")
    common(p)
    p.set_defaults(func=cmd_cohomology)

    p = sub.add_parser("homhot", help="homotopy hom-space dimensions")
    p.add_argument("module_m")
    p.add_argument("module_n")
    p.add_argument("--oracle", action="store_true",
                   help="cross-check against the brute-force count")
    common(p)
    p.set_defaults(func=cmd_homhot)

    p = sub.add_parser("ext", help="hom/ext dimensions between representations")
    p.add_argument("rep_x")
    p.add_argument("rep_y")
    common(p)
    p.set_defaults(func=cmd_ext)

    p = sub.add_parser("generator", help="compact generator (or a truncation)")
    p.add_argument("quiver_file")
    p.add_argument("--field", default="Q", help="Q (default) or F<p>")
    p.add_argument("--truncate", type=int, metavar="N",
                   help="truncation depth for cyclic quivers")
    common(p, output=True)
    p.set_defaults(func=cmd_generator)

    p = sub.add_parser("iso", help="randomized isomorphism probe between representations")
    p.add_argument("rep_x")
    p.add_argument("rep_y")
    p.add_argument("--trials", type=int, default=8)
    p.add_argument("--seed", type=int, default=0)
    common(p)
    p.set_defaults(func=cmd_iso)

    p = sub.add_parser("check", help="validate any input file")
    p.add_argument("file")
    p.add_argument("--kind", choices=["quiver", "rep", "diffproj", "raw"],
                   help="override the autodetected file kind")
    common(p)
    p.set_defaults(func=cmd_check)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ParseError as exc:
        print(_bad(f"parse error: {exc}"), file=sys.stderr)
        return EXIT_PARSE
    except InternalInvariantError as exc:
        print(_bad(f"internal invariant violated: {exc}"), file=sys.stderr)
        return EXIT_INTERNAL
    except DomainError as exc:
        print(_bad(f"error: {exc}"), file=sys.stderr)
        return EXIT_DOMAIN
    except FileNotFoundError as exc:
        print(_bad(f"error: {exc}"), file=sys.stderr)
        return EXIT_DOMAIN
    except QuivdiffError as exc:
        print(_bad(f"error: {exc}"), file=sys.stderr)
        return EXIT_DOMAIN


if __name__ == "__main__":
    sys.exit(main())
