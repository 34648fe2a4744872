"""Command-line front end.

Inputs are JSON files, ``-`` for stdin, or ``catalog:NAME`` for a built-in
example.  Exit status is 0 on success, 1 on a semantic failure (invalid
decomposition, nonzero d^2, failed chain map) and 2 on unreadable input.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Any, Optional, Sequence

from . import catalog
from .cellcomplex import (
    Decomposition,
    DecompositionError,
    ParseError,
    ValidationFailed,
    parse_decomposition,
    to_parallel,
    validate,
)
from .dgabuild import Dga, build_dga
from .freealg import FreeAlgebraError
from .invariants import DEFAULT_CAP, augmentations, betti, linearize
from .transform import TransformError, cancel_pipeline, load_pipeline, swallowtail_phi, verify_chain_map

EXIT_OK, EXIT_FAIL, EXIT_PARSE = 0, 1, 2


class InputError(Exception):
    pass


def _read(source: str) -> Any:
    if source.startswith("catalog:"):
        try:
            return catalog.get(source[len("catalog:"):])
        except catalog.UnknownEntry:
            raise InputError(f"no catalog entry {source[len('catalog:'):]!r}") from None
    try:
        text = sys.stdin.read() if source == "-" else Path(source).read_text(encoding="utf-8")
    except OSError as exc:
        raise InputError(str(exc)) from exc
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc}") from exc


def _decomposition(source: str) -> Decomposition:
    doc = _read(source)
    return doc if isinstance(doc, Decomposition) else parse_decomposition(doc)


def _dga_or_build(source: str, args: argparse.Namespace) -> Dga:
    doc = _read(source)
    if isinstance(doc, dict) and "generators" in doc:
        try:
            return Dga.from_json(doc)
        except (KeyError, TypeError, ValueError) as exc:
            raise ParseError(f"bad DGA document: {exc}") from exc
    d = doc if isinstance(doc, Decomposition) else parse_decomposition(doc)
    return _build(d, args)


def _base_mu(args: argparse.Namespace) -> Optional[dict[str, int]]:
    if not getattr(args, "base_mu", None):
        return None
    out = {}
    for item in args.base_mu:
        region, sep, value = item.rpartition("=")
        if not sep:
            raise InputError(f"--base-mu expects REGION=VALUE, got {item!r}")
        try:
            out[region] = int(value)
        except ValueError:
            raise InputError(f"--base-mu value must be an integer: {item!r}") from None
    return out


def _build(d: Decomposition, args: argparse.Namespace, decorated: bool = False) -> Dga:
    return build_dga(d, decorated=decorated, m_override=getattr(args, "m_override", None),
                     base_mu=_base_mu(args))


def _emit(text: str) -> None:
    sys.stdout.write(text if text.endswith("\n") else text + "\n")


def _dump(obj: Any) -> None:
    _emit(json.dumps(obj, indent=2, ensure_ascii=False))


def cmd_validate(args: argparse.Namespace) -> int:
    d = _decomposition(args.input)
    bad = validate(d)
    _dump({"valid": not bad, "violations": [v.to_json() for v in bad]})
    return EXIT_OK if not bad else EXIT_FAIL


def cmd_build(args: argparse.Namespace) -> int:
    dga = _build(_decomposition(args.input), args, decorated=args.decorated)
    _emit(dga.dumps())
    return EXIT_OK


def cmd_d2(args: argparse.Namespace) -> int:
    dga = _dga_or_build(args.input, args)
    from .dgabuild import d_squared

    fails = d_squared(dga)
    _dump({"failures": [{"generator": g, "residual": p.render()} for g, p in fails]})
    return EXIT_OK if not fails else EXIT_FAIL


def cmd_simplify(args: argparse.Namespace) -> int:
    dga = _dga_or_build(args.input, args)
    try:
        pairs = load_pipeline(Path(args.pipeline).read_text(encoding="utf-8"))
    except (OSError, ValueError) as exc:
        raise ParseError(f"bad pipeline: {exc}") from exc
    _emit(cancel_pipeline(dga, pairs).dumps())
    return EXIT_OK


def cmd_augment(args: argparse.Namespace) -> int:
    dga = _dga_or_build(args.input, args)
    count, augs = augmentations(dga, cap=args.cap)
    out: dict[str, Any] = {"count": count}
    if args.list:
        out["augmentations"] = [a.to_json() for a in augs]
    _dump(out)
    return EXIT_OK


def cmd_linhom(args: argparse.Namespace) -> int:
    dga = _dga_or_build(args.input, args)
    count, augs = augmentations(dga, cap=args.cap)
    if args.index >= count:
        _dump({"error": "NoAugmentation", "message": f"only {count} augmentation(s)"})
        return EXIT_FAIL
    b = betti(linearize(dga, augs[args.index]))
    _dump({str(d): r for d, r in b.items()})
    return EXIT_OK


def cmd_iso_check(args: argparse.Namespace) -> int:
    phi = swallowtail_phi(_decomposition(args.input))
    fails = verify_chain_map(phi)
    _dump({
        "chain_map": not fails,
        "source_d2": len(phi.source.d2_failures),
        "target_d2": len(phi.target.d2_failures),
        "failures": [{"generator": g, "difference": p.render()} for g, p in fails],
        "map": phi.to_json() if args.show_map else None,
    })
    ok = not fails and not phi.source.d2_failures and not phi.target.d2_failures
    return EXIT_OK if ok else EXIT_FAIL


def cmd_parallel(args: argparse.Namespace) -> int:
    _emit(to_parallel(_decomposition(args.input)).dumps())
    return EXIT_OK


def cmd_catalog(args: argparse.Namespace) -> int:
    if args.name is None:
        _emit("\n".join(catalog.names()))
        return EXIT_OK
    try:
        _emit(catalog.get(args.name).dumps())
    except catalog.UnknownEntry:
        raise InputError(f"no catalog entry {args.name!r}") from None
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="cellular-dga", description="Cellular DGAs of Legendrian surfaces")
    ap.add_argument("--json-errors", action="store_true", help="report errors as JSON on stderr")
    sub = ap.add_subparsers(dest="command", required=True)

    def grading_flags(p: argparse.ArgumentParser) -> None:
        p.add_argument("--m-override", type=int, default=None, help="grading modulus; must divide the Maslov number")
        p.add_argument("--base-mu", action="append", metavar="REGION=VALUE", help="pin a sheet region's potential")

    p = sub.add_parser("validate", help="check a decomposition")
    p.add_argument("input")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("build", help="emit the cellular DGA as JSON")
    p.add_argument("input")
    p.add_argument("--decorated", action="store_true", help="use the decorated swallowtail presentation")
    grading_flags(p)
    p.set_defaults(func=cmd_build)

    p = sub.add_parser("d2", help="check that the differential squares to zero")
    p.add_argument("input")
    grading_flags(p)
    p.set_defaults(func=cmd_d2)

    p = sub.add_parser("simplify", help="apply a cancellation script")
    p.add_argument("input")
    p.add_argument("pipeline", help='JSON list of {"x": id, "y": id}')
    grading_flags(p)
    p.set_defaults(func=cmd_simplify)

    p = sub.add_parser("augment", help="count augmentations")
    p.add_argument("input")
    p.add_argument("--cap", type=int, default=DEFAULT_CAP)
    p.add_argument("--list", action="store_true")
    grading_flags(p)
    p.set_defaults(func=cmd_augment)

    p = sub.add_parser("linhom", help="linearized homology ranks")
    p.add_argument("input")
    p.add_argument("--cap", type=int, default=DEFAULT_CAP)
    p.add_argument("--index", type=int, default=0, help="which augmentation to linearize at")
    grading_flags(p)
    p.set_defaults(func=cmd_linhom)

    p = sub.add_parser("iso-check", help="verify the swallowtail chain map")
    p.add_argument("input")
    p.add_argument("--show-map", action="store_true")
    p.set_defaults(func=cmd_iso_check)

    p = sub.add_parser("parallel", help="subdivide into the parallel decomposition")
    p.add_argument("input")
    p.set_defaults(func=cmd_parallel)

    p = sub.add_parser("catalog", help="list or emit built-in examples")
    p.add_argument("name", nargs="?")
    p.set_defaults(func=cmd_catalog)
    return ap


def _fail(args: argparse.Namespace, exc: BaseException, code: int) -> int:
    if getattr(args, "json_errors", False):
        sys.stderr.write(json.dumps({"error": type(exc).__name__, "message": str(exc)}) + "\n")
    else:
        sys.stderr.write(f"error: {exc}\n")
    return code


def main(argv: Optional[Sequence[str]] = None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        return args.func(args)
    except (ParseError, InputError) as exc:
        return _fail(args, exc, EXIT_PARSE)
    except ValidationFailed as exc:
        if getattr(args, "json_errors", False):
            sys.stderr.write(json.dumps({"error": "ValidationFailed",
                                         "violations": [v.to_json() for v in exc.violations]}) + "\n")
            return EXIT_FAIL
        return _fail(args, exc, EXIT_FAIL)
    except (DecompositionError, TransformError, FreeAlgebraError, ValueError, KeyError) as exc:
        return _fail(args, exc, EXIT_FAIL)


if __name__ == "__main__":
    sys.exit(main())
