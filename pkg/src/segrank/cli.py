"""Command-line front end.

Exit codes: 0 success, 1 input error, 2 the tensor is not of border rank
<= 2 (a valid determination), 3 tensor rank and symmetric rank disagree.
JSON reports go to stdout, diagnostics to stderr.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .classify import NotInSigma2Error, Stratum, _analyze
from .decompose import DegenerateParametersError, decompose, load_decomposition, verify
from .flatten import multilinear_ranks
from .generate import KINDS, GenSpec, generate
from .scalar import parse_scalar
from .symmetric import comon_check, load_poly
from .tensor import load_tensor, tensor_to_json

EXIT_OK, EXIT_INPUT, EXIT_BEYOND, EXIT_COMON = 0, 1, 2, 3


class InputError(Exception):
    pass


def _emit(obj) -> None:
    sys.stdout.write(json.dumps(obj, sort_keys=True) + "\n")


def _read_tensor(path):
    try:
        return load_tensor(path)
    except (OSError, ValueError, KeyError, TypeError) as exc:
        raise InputError(f"{path}: {exc}") from None


def _int_list(text: str) -> tuple:
    parts = text.replace("x", ",").split(",")
    try:
        return tuple(int(p) for p in parts if p.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected integers separated by ',' or 'x', got {text!r}") from None


def _classify_report(T) -> tuple[dict, int]:
    cls = _analyze(T).cls
    rep = {
        "stratum": cls.stratum.value,
        "border_rank": cls.border_rank,
        "rank": cls.rank,
        "eta": cls.rank if cls.stratum not in (Stratum.BEYOND, Stratum.ZERO) else None,
        "eta_defined": cls.eta_defined,
        "multilinear_ranks": multilinear_ranks(T),
    }
    return rep, EXIT_BEYOND if cls.stratum is Stratum.BEYOND else EXIT_OK


def cmd_classify(args) -> int:
    code = EXIT_OK
    for path in args.paths:
        rep, c = _classify_report(_read_tensor(path))
        if len(args.paths) > 1:
            rep["path"] = path
        _emit(rep)
        code = max(code, c)
    return code


def cmd_rank(args) -> int:
    code = EXIT_OK
    for path in args.paths:
        cls = _analyze(_read_tensor(path)).cls
        rep = {"rank": cls.rank, "stratum": cls.stratum.value}
        if len(args.paths) > 1:
            rep["path"] = path
        _emit(rep)
        if cls.stratum is Stratum.BEYOND:
            code = EXIT_BEYOND
    return code


def cmd_decompose(args) -> int:
    T = _read_tensor(args.path)
    params = None
    if args.params is not None:
        try:
            params = [parse_scalar(p) for p in args.params.split(",")]
        except ValueError as exc:
            raise InputError(f"--params: {exc}") from None
    try:
        dec = decompose(T, params)
    except NotInSigma2Error as exc:
        print(f"segrank: {exc}", file=sys.stderr)
        _emit({"stratum": Stratum.BEYOND.value})
        return EXIT_BEYOND
    except DegenerateParametersError as exc:
        raise InputError(str(exc)) from None
    except ValueError as exc:
        raise InputError(str(exc)) from None
    ok = verify(dec, T)
    text = json.dumps(dec.to_json(), sort_keys=True)
    if args.out:
        Path(args.out).write_text(text + "\n")
        _emit({"verified": ok, "claimed_rank": dec.claimed_rank, "out": args.out})
    else:
        sys.stdout.write(text + "\n")
        print(f"verified: {str(ok).lower()}", file=sys.stderr)
    return EXIT_OK if ok else EXIT_INPUT


def cmd_verify(args) -> int:
    T = _read_tensor(args.tensor)
    try:
        dec = load_decomposition(args.decomposition)
    except (OSError, ValueError, KeyError, TypeError) as exc:
        raise InputError(f"{args.decomposition}: {exc}") from None
    try:
        ok = verify(dec, T)
    except ValueError as exc:
        raise InputError(str(exc)) from None
    _emit({"verified": ok, "claimed_rank": dec.claimed_rank})
    return EXIT_OK if ok else EXIT_INPUT


def cmd_comon(args) -> int:
    try:
        f = load_poly(args.path)
        rep = comon_check(f)
    except (OSError, ValueError, KeyError, TypeError) as exc:
        # NotInSigma2Error is a ValueError: the gate failing is an input error here
        raise InputError(f"{args.path}: {exc}") from None
    _emit(rep.to_json())
    if not rep.equal:
        print("segrank: tensor rank and symmetric rank differ; this is a bug", file=sys.stderr)
        return EXIT_COMON
    return EXIT_OK


def cmd_gen(args) -> int:
    try:
        spec = GenSpec(args.kind, args.shape, args.modes, args.seed, args.height)
    except ValueError as exc:
        raise InputError(str(exc)) from None
    T, side = generate(spec)
    data = tensor_to_json(T)
    if args.out:
        out = Path(args.out)
        out.write_text(json.dumps(data, sort_keys=True) + "\n")
        side_path = out.with_name(out.stem + ".sidecar.json")
        side_path.write_text(json.dumps(side, sort_keys=True) + "\n")
        _emit({"tensor": str(out), "sidecar": str(side_path)})
    else:
        _emit({"tensor": data, "sidecar": side})
    return EXIT_OK


class _Parser(argparse.ArgumentParser):
    # usage errors are input errors; argparse's default status 2 is taken
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="segrank", description="Exact rank of tensors of border rank at most two.")
    sub = p.add_subparsers(dest="verb", required=True)

    c = sub.add_parser("classify", help="stratum, rank and type of tensor files")
    c.add_argument("paths", nargs="+")
    c.set_defaults(func=cmd_classify)

    r = sub.add_parser("rank", help="exact rank of tensor files")
    r.add_argument("paths", nargs="+")
    r.set_defaults(func=cmd_rank)

    d = sub.add_parser("decompose", help="verified minimal decomposition")
    d.add_argument("path")
    d.add_argument("--params", help="q-1 nonzero rationals for a tangent input, e.g. 1,2/3")
    d.add_argument("--out", help="write the decomposition here instead of stdout")
    d.set_defaults(func=cmd_decompose)

    v = sub.add_parser("verify", help="check a decomposition against a tensor exactly")
    v.add_argument("tensor")
    v.add_argument("decomposition")
    v.set_defaults(func=cmd_verify)

    m = sub.add_parser("comon", help="compare tensor rank and symmetric rank of a form")
    m.add_argument("path")
    m.set_defaults(func=cmd_comon)

    g = sub.add_parser("gen", help="seeded instance with a ground-truth sidecar")
    g.add_argument("--kind", choices=KINDS, required=True)
    g.add_argument("--shape", type=_int_list, required=True, help="e.g. 3x3x4x2 or 3,3,4,2")
    g.add_argument("--modes", type=_int_list, help="perturbed modes for kind=tangent, e.g. 0,1,2")
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--height", type=int, default=9, help="bound on numerators and denominators")
    g.add_argument("--out", help="tensor file; the sidecar goes next to it")
    g.set_defaults(func=cmd_gen)
    return p


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:
        # --help and usage errors; return the status instead of exiting
        return exc.code if isinstance(exc.code, int) else EXIT_INPUT
    try:
        return args.func(args)
    except InputError as exc:
        print(f"segrank: error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
