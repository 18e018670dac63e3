"""Command-line front end: load category and Q-system files, dispatch the
library operations, and emit JSON or table reports.

Exit codes: 0 all checks pass, 1 usage, 2 parse or schema error, 3 axiom
failure, 4 numeric inconsistency.
"""
from __future__ import annotations

import argparse
import json
import os
import sys

import numpy as np

from .braided import (
    braided_product,
    canonical_qsystem,
    centre_qsystem,
    full_centre,
    z_matrix,
)
from .category import load_category, modular_data, validate_category
from .decompose import central_decomposition, check_intermediate, irreducible_decomposition
from .errors import ParseError, QcatError, SchemaMismatch
from .fixtures import FIXTURE_CATEGORIES, emit_fixture, fixture_category
from .frobenius import (
    check_commutative,
    check_qsystem,
    ising_q,
    qsystem_from_json,
    trivial_qsystem_in,
)
from .modules import boundary_conditions, enumerate_bimodules, enumerate_modules
from .morphisms import morphism_from_json

VERBS = (
    "validate",
    "modular",
    "check-qsystem",
    "centre",
    "intermediate",
    "decompose",
    "braided-product",
    "canonical",
    "full-centre",
    "zmatrix",
    "modules",
    "bimodules",
    "boundary",
    "emit-fixture",
    "diff",
)


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(1)


def _round(obj):
    """Normalize a report tree to 12 significant digits for stable output."""
    if isinstance(obj, dict):
        return {k: _round(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_round(v) for v in obj]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        return float(f"{float(obj):.12g}")
    if isinstance(obj, (complex, np.complexfloating)):
        return [_round(obj.real), _round(obj.imag)]
    return obj


def _emit(report: dict, fmt: str) -> None:
    report = _round(report)
    if fmt == "json":
        print(json.dumps(report, indent=1))
        return
    _emit_table(report, "")


def _emit_table(obj, prefix: str) -> None:
    if isinstance(obj, dict):
        for k, v in obj.items():
            _emit_table(v, f"{prefix}{k}." if isinstance(v, (dict, list)) else f"{prefix}{k}")
        return
    if isinstance(obj, list):
        for i, v in enumerate(obj):
            _emit_table(v, f"{prefix}{i}." if isinstance(v, (dict, list)) else f"{prefix}{i}")
        return
    print(f"{prefix:<40} {obj}")


def _load_json(path: str):
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON in {path}: {exc}") from exc


def _load_cat(spec: str, tol: float | None):
    if spec in FIXTURE_CATEGORIES:
        cat = load_category(fixture_category(spec))
    else:
        cat = load_category(_load_json(spec))
    if tol is not None:
        cat.tol = tol
    return cat


def _load_q(cat, spec: str):
    if spec in ("trivial", "trivial_q"):
        return trivial_qsystem_in(cat)
    if spec in ("ising", "ising_q"):
        return ising_q(cat)
    return qsystem_from_json(cat, _load_json(spec))


def _qsystem_summary(cat, q) -> dict:
    rep = check_qsystem(cat, q)
    comm, comm_res = check_commutative(cat, q)
    return {
        "theta": q.theta.as_json(),
        "d": q.d,
        "axioms": rep.as_dict(),
        "commutative": comm,
        "commutativity_residual": comm_res,
    }


def _reduced_summary(cat, red) -> dict:
    out = _qsystem_summary(cat, red.child)
    out["n_p_scalar"] = red.n_p_scalar
    out["n_p_spectrum"] = list(red.n_p_spectrum)
    return out


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="qcat", description=__doc__.splitlines()[0])
    p.add_argument("verb", choices=VERBS)
    p.add_argument("inputs", nargs="*", help="category / Q-system / report files")
    p.add_argument("--A", dest="qa", help="first Q-system (file or builtin name)")
    p.add_argument("--B", dest="qb", help="second Q-system (file or builtin name)")
    p.add_argument("--tol", type=float, default=None, help="tolerance override")
    p.add_argument("--seed", type=int, default=None, help="RNG seed for idempotent searches")
    p.add_argument("--sign", choices=["+", "-"], default="+", help="braiding chirality")
    p.add_argument("--format", choices=["json", "table"], default="json")
    p.add_argument("--jobs", type=int, default=1, help="parallelism opt-in (1 = serial)")
    p.add_argument("--side", choices=["left", "right"], default="left")
    p.add_argument("--mode", choices=["central", "irreducible"], default="central")
    p.add_argument("--dir", default=".", help="output directory for emit-fixture")
    return p


def _need(args, n: int, usage: str) -> list[str]:
    if len(args.inputs) != n:
        raise SystemExit(_usage_error(usage))
    return args.inputs


def _usage_error(usage: str) -> int:
    print(f"usage: qcat {usage}", file=sys.stderr)
    return 1


def _diff(a, b, tol: float, path: str, out: list) -> None:
    if isinstance(a, dict) and isinstance(b, dict):
        for k in sorted(set(a) | set(b)):
            if k not in a or k not in b:
                out.append(f"{path}{k}: only in one report")
            else:
                _diff(a[k], b[k], tol, f"{path}{k}.", out)
        return
    if isinstance(a, list) and isinstance(b, list):
        if len(a) != len(b):
            out.append(f"{path}: length {len(a)} vs {len(b)}")
            return
        for i, (x, y) in enumerate(zip(a, b)):
            _diff(x, y, tol, f"{path}{i}.", out)
        return
    if isinstance(a, (int, float)) and isinstance(b, (int, float)) and not (
        isinstance(a, bool) or isinstance(b, bool)
    ):
        if abs(a - b) > tol:
            out.append(f"{path.rstrip('.')}: {a} vs {b}")
        return
    if type(a) is not type(b):
        raise SchemaMismatch(f"{path.rstrip('.')}: incompatible types")
    if a != b:
        out.append(f"{path.rstrip('.')}: {a!r} vs {b!r}")


def _dispatch(args) -> int:
    tol = args.tol
    if tol is None and os.environ.get("QCAT_TOL"):
        tol = float(os.environ["QCAT_TOL"])
    fmt = args.format

    if args.verb == "emit-fixture":
        (name,) = _need(args, 1, "emit-fixture <name> [--dir DIR]")
        paths = emit_fixture(name, args.dir)
        _emit({"written": paths}, fmt)
        return 0

    if args.verb == "diff":
        a_path, b_path = _need(args, 2, "diff <report-a> <report-b> [--tol T]")
        out: list[str] = []
        _diff(_load_json(a_path), _load_json(b_path), tol if tol is not None else 1e-9, "", out)
        _emit({"differences": out}, fmt)
        return 0 if not out else 4

    cat_spec = args.inputs[0] if args.inputs else None
    if cat_spec is None:
        return _usage_error(f"{args.verb} <category> ...")
    cat = _load_cat(cat_spec, tol)

    if args.verb == "validate":
        rep = validate_category(cat)
        _emit(rep.as_dict(), fmt)
        return 0 if rep.ok else 3

    if args.verb == "modular":
        md = modular_data(cat)
        _emit(
            {
                "labels": list(md.labels),
                "dims": md.dims.tolist(),
                "global_dim": md.global_dim,
                "twists": [[v.real, v.imag] for v in md.twists],
                "omega": [md.omega.real, md.omega.imag],
                "s_matrix": [[[v.real, v.imag] for v in row] for row in md.s_matrix],
                "t_matrix": [[[v.real, v.imag] for v in row] for row in md.t_matrix],
                "charge_conjugation": md.charge_conjugation.tolist(),
                "is_modular": md.is_modular,
            },
            fmt,
        )
        return 0

    if args.verb == "check-qsystem":
        _, q_spec = _need(args, 2, "check-qsystem <category> <qsystem>")
        q = _load_q(cat, q_spec)
        rep = check_qsystem(cat, q)
        out = rep.as_dict()
        comm, res = check_commutative(cat, q, args.sign)
        out["commutative"] = comm
        out["commutativity_residual"] = res
        _emit(out, fmt)
        return 0 if rep.ok else 3

    if args.verb == "centre":
        _, q_spec = _need(args, 2, "centre <category> <qsystem> [--sign +|-]")
        red = centre_qsystem(cat, _load_q(cat, q_spec), args.sign, tol)
        _emit(_reduced_summary(cat, red), fmt)
        return 0

    if args.verb == "intermediate":
        _, q_spec, p_spec = _need(args, 3, "intermediate <category> <qsystem> <projection>")
        q = _load_q(cat, q_spec)
        p = morphism_from_json(cat, _load_json(p_spec))
        red = check_intermediate(cat, q, p, tol)
        _emit(_reduced_summary(cat, red), fmt)
        return 0

    if args.verb == "decompose":
        _, q_spec = _need(args, 2, "decompose <category> <qsystem> [--mode central|irreducible]")
        q = _load_q(cat, q_spec)
        if args.mode == "central":
            parts = [red for _, red in central_decomposition(cat, q, tol, args.seed)]
        else:
            parts = [red for _, _, _, red in irreducible_decomposition(cat, q, tol, args.seed)]
        _emit({"summands": [_reduced_summary(cat, red) for red in parts]}, fmt)
        return 0

    if args.verb == "braided-product":
        _, qa_spec, qb_spec = _need(args, 3, "braided-product <category> <qA> <qB> [--sign]")
        q = braided_product(cat, _load_q(cat, qa_spec), _load_q(cat, qb_spec), args.sign)
        rep = check_qsystem(cat, q)
        _emit(_qsystem_summary(cat, q), fmt)
        return 0 if rep.ok else 3

    if args.verb == "canonical":
        _need(args, 1, "canonical <category>")
        prod, qr = canonical_qsystem(cat)
        out = _qsystem_summary(prod, qr)
        out["product_labels"] = list(prod.labels)
        _emit(out, fmt)
        return 0 if check_qsystem(prod, qr).ok else 3

    if args.verb == "full-centre":
        _, q_spec = _need(args, 2, "full-centre <category> <qsystem>")
        prod, red = full_centre(cat, _load_q(cat, q_spec), tol)
        _emit(_reduced_summary(prod, red), fmt)
        return 0

    if args.verb == "zmatrix":
        _, q_spec = _need(args, 2, "zmatrix <category> <qsystem>")
        z, info = z_matrix(cat, _load_q(cat, q_spec), tol)
        _emit({"z": z.tolist(), **info}, fmt)
        eff = cat.tol if tol is None else tol
        return 0 if max(info["s_commutator"], info["t_commutator"]) < 1e2 * eff else 3

    if args.verb == "modules":
        _, q_spec = _need(args, 2, "modules <category> <qsystem> [--side left|right]")
        mods = enumerate_modules(cat, _load_q(cat, q_spec), args.side, tol)
        _emit(
            {"count": len(mods), "modules": [
                {"label": m.label, "beta": m.beta.as_json(), "dim": m.dim} for m in mods
            ]},
            fmt,
        )
        return 0

    if args.verb == "bimodules":
        _, qa_spec, qb_spec = _need(args, 3, "bimodules <category> <qA> <qB>")
        mods = enumerate_bimodules(cat, _load_q(cat, qa_spec), _load_q(cat, qb_spec), tol)
        _emit(
            {"count": len(mods), "bimodules": [
                {"label": m.label, "beta": m.beta.as_json(), "dim": m.dim} for m in mods
            ]},
            fmt,
        )
        return 0

    if args.verb == "boundary":
        _need(args, 1, "boundary <category> --A <qsystem> --B <qsystem>")
        if not args.qa or not args.qb:
            return _usage_error("boundary <category> --A <qsystem> --B <qsystem>")
        rep = boundary_conditions(cat, _load_q(cat, args.qa), _load_q(cat, args.qb), tol, args.seed)
        _emit(rep.as_dict(), fmt)
        eff = cat.tol if tol is None else tol
        worst = max(rep.residuals.values())
        return 0 if rep.cross_check == "pass" and worst < 1e2 * eff else 3

    return _usage_error("unknown verb")


def run(argv: list[str]) -> int:
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return _dispatch(args)
    except SystemExit as exc:
        return int(exc.code or 0)
    except QcatError as exc:
        print(f"qcat: {type(exc).__name__}: {exc}", file=sys.stderr)
        return exc.exit_code


def main() -> None:
    raise SystemExit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
