"""Command-line front end.

Exit codes: 0 success, 1 domain error (reported as JSON with an ``error``
field under ``--format json``), 2 usage error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

import numpy as np

from .algebra import BUILTIN_NAMES, CFA, builtin, check_axioms, classify_algebra, verify
from .diagram import (evaluate, normalize_fgraph, parse_diagram, parse_ket, spider_signature,
                      to_dot, to_dsl)
from .diagram.core import ALGEBRA_KINDS
from .entanglement import classify_state
from .catalog import ENTRIES, catalog, entry
from .errors import FtriadError, ForeignNode, ParseError, UnknownName
from .ket import format_ket
from .serialize import dumps, tensor_from_json, tensor_json
from .synthesis import Trio, matrix_to_diagram, state_to_diagram
from .tensor_core import ToleranceConfig

DEFAULT_SEED = 0


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _common() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    s = argparse.SUPPRESS
    p.add_argument("--tol", type=float, default=s, help="absolute and relative tolerance")
    p.add_argument("--seed", type=int, default=s, help="random seed (else $FTRIAD_SEED, else 0)")
    p.add_argument("--budget", type=int, default=s, help="xi candidates for classify-state")
    p.add_argument("--format", choices=("json", "text", "dot"), default=s)
    return p


def build_parser() -> argparse.ArgumentParser:
    # Parent parsers share their Action objects, so the top level gets its own
    # copy; otherwise set_defaults below would leak into every subcommand.
    common = _common()
    parser = _Parser(prog="ftriad", description=__doc__.splitlines()[0], parents=[_common()])
    parser.set_defaults(tol=None, seed=None, budget=320, format="json")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("eval", parents=[common], help="evaluate a diagram file ('-' for stdin)")
    p.add_argument("file")
    p.add_argument("--boxes", help="JSON file mapping box names to matrices")

    p = sub.add_parser("axioms", parents=[common], help="check the seven laws of an algebra")
    p.add_argument("algebra", help=f"built-in name ({', '.join(BUILTIN_NAMES)}) or JSON file")

    p = sub.add_parser("classify-algebra", parents=[common], help="classify a verified algebra")
    p.add_argument("algebra")

    p = sub.add_parser("classify-state", parents=[common], help="Frobenius class of a qutrit triple")
    p.add_argument("state", help="ket expression or catalog name")

    p = sub.add_parser("normalize", parents=[common], help="spider normal form of an F-graph")
    p.add_argument("file")

    p = sub.add_parser("synth-matrix", parents=[common], help="realize a 3x3 matrix over the trio")
    p.add_argument("entries", nargs=9, help="row-major entries, e.g. 1 0 (0+1i) ...")

    p = sub.add_parser("synth-state", parents=[common], help="realize a qutrit state over the trio")
    p.add_argument("state", help="ket expression or catalog name")

    p = sub.add_parser("catalog", parents=[common], help="named states")
    csub = p.add_subparsers(dest="action", required=True, parser_class=_Parser)
    csub.add_parser("list", parents=[common])
    show = csub.add_parser("show", parents=[common])
    show.add_argument("name")
    return parser


# -- input helpers ---------------------------------------------------------


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def _array(obj) -> np.ndarray:
    if isinstance(obj, dict):
        return tensor_from_json(obj)
    return np.asarray(obj, dtype=np.complex128)


def _load_algebra(spec: str) -> CFA:
    if spec in BUILTIN_NAMES:
        return builtin(spec, verified=False)
    if not os.path.exists(spec):
        raise UnknownName(f"{spec!r} is neither a built-in algebra ({', '.join(BUILTIN_NAMES)}) nor a file")
    obj = json.loads(_read(spec))
    try:
        mu, eta = _array(obj["mu"]), _array(obj["eta"])
        return CFA(obj.get("name", "custom"), int(obj.get("d", eta.shape[0])), mu, eta,
                   _array(obj["delta"]), _array(obj["epsilon"]))
    except KeyError as exc:
        raise ParseError(f"algebra file lacks field {exc.args[0]!r}") from None


def _load_state(spec: str):
    if "|" in spec:
        return parse_ket(spec)
    return catalog(spec)


def _parse_complex(text: str) -> complex:
    t = text.strip().replace(" ", "")
    if t.startswith("(") and t.endswith(")"):
        t = t[1:-1]
    try:
        return complex(t.replace("i", "j"))
    except ValueError:
        raise ParseError(f"malformed complex number {text!r}") from None


def _registry():
    return {n: builtin(n) for n in BUILTIN_NAMES}


# -- commands --------------------------------------------------------------


def _cmd_eval(args, tol):
    boxes = {}
    if args.boxes:
        boxes = {k: _array(v) for k, v in json.loads(_read(args.boxes)).items()}
    d = parse_diagram(_read(args.file), _registry(), boxes)
    if args.format == "dot":
        return to_dot(d)
    t = evaluate(d)
    if args.format == "text":
        if t.ndim == 0:
            return str(complex(t))
        if not d.inputs and np.any(t):
            return format_ket(t, atol=1e-12)
        return np.array2string(t, precision=6, suppress_small=True)
    return {"inputs": len(d.inputs), "outputs": len(d.outputs), "tensor": tensor_json(t)}


def _cmd_axioms(args, tol):
    report = check_axioms(_load_algebra(args.algebra), tol)
    if args.format == "text":
        lines = [f"{k:16s} {'pass' if report.passed[k] else 'FAIL'}  {report.residuals[k]:.3e}"
                 for k in report.passed]
        return "\n".join(lines)
    return report.to_dict()


def _cmd_classify_algebra(args, tol):
    F = verify(_load_algebra(args.algebra), tol)
    cls = classify_algebra(F, tol)
    if args.format == "text":
        return f"{F.name}: {cls.label} (bubble rank {cls.bubble_rank})"
    return {"algebra": F.name, **cls.to_dict()}


def _cmd_classify_state(args, tol):
    s = _load_state(args.state)
    res = classify_state(s, budget=args.budget, seed=args.seed, tol=tol)
    if args.format == "text":
        return res.name
    out = {"state": format_ket(s.amplitudes, atol=0.0), "label": res.label,
           "residuals": res.residuals, "candidates_tried": res.candidates_tried}
    if res.reason:
        out["reason"] = res.reason
    if res.witness is not None:
        out["witness"] = res.witness.to_dict()
    if res.algebra_class is not None:
        out["algebra"] = res.algebra_class.to_dict()
    return out


def _cmd_normalize(args, tol):
    d = parse_diagram(_read(args.file), _registry())
    algebras = {id(n.gen.algebra): n.gen.algebra for n in d.nodes if n.gen.kind in ALGEBRA_KINDS}
    if len(algebras) > 1:
        raise ForeignNode("the diagram mixes several algebras")
    result = normalize_fgraph(d, next(iter(algebras.values()))) if algebras else d
    if args.format == "dot":
        return to_dot(result)
    text, _ = to_dsl(result)
    if args.format == "text":
        return text
    sig = spider_signature(d)
    return {"dsl": text, "signature": {"m": sig.m, "n": sig.n, "loops": sig.loops,
                                       "components": [list(c.signature) for c in sig.components]}}


def _synth_output(res, args):
    if args.format == "dot":
        return to_dot(res.diagram)
    if args.format == "text":
        text, _ = to_dsl(res.diagram)
        return f"# residual {res.residual:.3e}, scalar {res.scalar}\n{text}"
    return res.to_dict()


def _cmd_synth_matrix(args, tol):
    F = np.array([_parse_complex(e) for e in args.entries]).reshape(3, 3)
    return _synth_output(matrix_to_diagram(F, Trio.default(), tolcfg=tol), args)


def _cmd_synth_state(args, tol):
    s = _load_state(args.state)
    return _synth_output(state_to_diagram(s, Trio.default(), seed=args.seed, tolcfg=tol), args)


def _cmd_catalog(args, tol):
    if args.action == "list":
        if args.format == "text":
            return "\n".join(f"{e.name:10s} {e.display}" for e in ENTRIES.values())
        return {"entries": [{"name": e.name, "ket": e.display, "params": list(e.params),
                             "dim": e.dim, "group": e.group} for e in ENTRIES.values()]}
    e = entry(args.name)
    if args.format == "text":
        return e.display
    return {"name": e.name, "ket": e.display, "params": list(e.params), "dim": e.dim,
            "group": e.group}


_COMMANDS = {
    "eval": _cmd_eval,
    "axioms": _cmd_axioms,
    "classify-algebra": _cmd_classify_algebra,
    "classify-state": _cmd_classify_state,
    "normalize": _cmd_normalize,
    "synth-matrix": _cmd_synth_matrix,
    "synth-state": _cmd_synth_state,
    "catalog": _cmd_catalog,
}


def _wants_json(argv) -> bool:
    """Best guess of the output format before argparse has run (last flag wins)."""
    fmt = "json"
    for k, a in enumerate(argv):
        if a == "--format" and k + 1 < len(argv):
            fmt = argv[k + 1]
        elif a.startswith("--format="):
            fmt = a.split("=", 1)[1]
    return fmt == "json"


def _emit(payload, as_json: bool, stream):
    if as_json and isinstance(payload, dict):
        stream.write(dumps(payload) + "\n")
    else:
        stream.write(str(payload).rstrip("\n") + "\n")


def run(argv=None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    argv = list(sys.argv[1:] if argv is None else argv)
    as_json = _wants_json(argv)
    try:
        args = build_parser().parse_args(argv)
        if args.seed is None:
            env = os.environ.get("FTRIAD_SEED")
            try:
                args.seed = int(env) if env else DEFAULT_SEED
            except ValueError:
                raise UsageError(f"FTRIAD_SEED must be an integer, got {env!r}") from None
        if args.budget < 1:
            raise UsageError("--budget must be at least 1")
        if args.tol is not None and not args.tol >= 0:
            raise UsageError("--tol must be non-negative")
    except UsageError as exc:
        if as_json:
            _emit({"error": "usage", "message": str(exc)}, True, stdout)
        else:
            stderr.write(f"{exc}\n")
        return 2

    tol = ToleranceConfig() if args.tol is None else ToleranceConfig(atol=args.tol, rtol=args.tol)
    try:
        payload = _COMMANDS[args.command](args, tol)
    except FtriadError as exc:
        err = exc.to_dict()
    except (ValueError, KeyError) as exc:
        err = {"error": "invalid_input", "message": str(exc)}
    except OSError as exc:
        err = {"error": "io_error", "message": str(exc)}
    else:
        _emit(payload, args.format == "json", stdout)
        return 0
    if args.format == "json":
        _emit(err, True, stdout)
    else:
        stderr.write(f"error: {err['message']}\n")
    return 1


def main(argv=None) -> int:
    sys.exit(run(argv))


if __name__ == "__main__":
    main()
