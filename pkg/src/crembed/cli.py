"""Command-line entry point.

Exit codes: 0 pass, 1 verification failure, 2 input error, 3 domain error.
Inputs are file paths or ``catalog:NAME``.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from dataclasses import asdict, dataclass, fields, replace

from . import catalog
from .continuation import check_triangular_dependence, compare_forms, verify_flatness
from .cr_frame import corollary_pipeline
from .errors import (CrembedError, InputError, JacobiViolation, NotNilpotent, NotRational,
                     ParseError, StageFailure)
from .exact_poly import exact_flatness_residual, exact_lambda, exact_omega
from .fd import FDSpec, GridSpec
from .formats import algebra_from_json, read_json, structure_from_json
from .lie_core import classify
from .mc_engine import verify_maurer_cartan
from .reports import dumps

EXIT_OK, EXIT_FAIL, EXIT_INPUT, EXIT_DOMAIN = 0, 1, 2, 3
FORM_AGREEMENT_TOL = 1e-12


@dataclass(frozen=True)
class RunConfig:
    r_max: float = 1.0
    step: float = 1e-4
    richardson_levels: int = 1
    fd_mode: str = "finite_difference"
    grid_points: int = 5
    grid_half_width: float = 0.5
    max_axes: int = 4
    random_samples: int = 200
    sampling: str = "auto"
    seed: int = 0
    samples: int = 50
    tol: float = 1e-8
    target_l: int | None = None
    output: str = "human"

    def validate(self) -> "RunConfig":
        if self.r_max <= 0:
            raise InputError("r_max must be positive")
        if self.grid_half_width > self.r_max:
            raise InputError(f"grid_half_width {self.grid_half_width} exceeds r_max {self.r_max}")
        if self.tol <= 0:
            raise InputError("tol must be positive")
        if self.samples < 1:
            raise InputError("samples must be >= 1")
        if self.output not in ("human", "json"):
            raise InputError("output must be 'human' or 'json'")
        self.fd()
        self.grid()
        return self

    def fd(self) -> FDSpec:
        return FDSpec(self.step, self.richardson_levels, self.fd_mode)

    def grid(self) -> GridSpec:
        return GridSpec(self.grid_half_width, self.grid_points, self.max_axes,
                        self.random_samples, self.seed, self.sampling)

    @classmethod
    def from_mapping(cls, data: dict) -> "RunConfig":
        known = {f.name for f in fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise InputError(f"unknown config keys: {sorted(unknown)}")
        return cls(**data)


_FLAG_FIELDS = {"tol": "tol", "step": "step", "grid": "grid_points", "rmax": "r_max",
                "seed": "seed", "target_l": "target_l", "richardson": "richardson_levels",
                "samples": "samples", "sampling": "sampling", "mode": "fd_mode"}


def resolve_config(args) -> RunConfig:
    """Defaults, then the config file, then explicit flags."""
    cfg = RunConfig()
    if getattr(args, "config", None):
        data = read_json(args.config)
        if not isinstance(data, dict):
            raise ParseError("config file must hold a JSON object")
        data = {k: float(v) if isinstance(v, Fraction) else v for k, v in data.items()}
        cfg = RunConfig.from_mapping({**asdict(cfg), **data})
    updates = {field: getattr(args, flag) for flag, field in _FLAG_FIELDS.items()
               if getattr(args, flag, None) is not None}
    if getattr(args, "json", False):
        updates["output"] = "json"
    return replace(cfg, **updates).validate()


def _load_algebra(spec: str):
    if spec.startswith("catalog:"):
        try:
            return catalog.get(spec[len("catalog:"):]).algebra
        except KeyError as exc:
            raise ParseError(str(exc.args[0])) from exc
    return algebra_from_json(read_json(spec), name=spec)


def _load_structure(spec: str):
    if spec.startswith("catalog:"):
        try:
            entry = catalog.get(spec[len("catalog:"):])
        except KeyError as exc:
            raise ParseError(str(exc.args[0])) from exc
        if entry.structure is None:
            raise ParseError(f"catalog entry {entry.name!r} is an algebra, not a CR structure")
        return entry.structure
    return structure_from_json(read_json(spec), name=spec)


def _emit(cfg: RunConfig, payload: dict, lines: list[str], out):
    if cfg.output == "json":
        out.write(dumps(payload) + "\n")
    else:
        out.write("\n".join(lines) + "\n")


def cmd_validate(args, cfg: RunConfig, out) -> int:
    try:
        algebra = _load_algebra(args.input)
    except JacobiViolation as exc:
        payload = {"command": "validate", "input": args.input, "valid": False,
                   "error": "JacobiViolation", "max_residual": exc.max_residual,
                   "witness": {"indices": [i + 1 for i in exc.indices]}}
        _emit(cfg, payload, [f"INVALID {args.input}: {exc}"], out)
        return EXIT_FAIL
    cls = classify(algebra)
    payload = {"command": "validate", "input": args.input, "valid": True, "dim": algebra.dim,
               "class": cls.to_json(), "class_name": str(cls),
               "jacobi_residual": algebra.jacobi_residual, "exact": algebra.exact is not None}
    _emit(cfg, payload, [f"VALID {args.input}: dim {algebra.dim}, class {cls}, "
                         f"Jacobi residual {algebra.jacobi_residual:.1e}"], out)
    return EXIT_OK


def verify_algebra(algebra, cfg: RunConfig) -> dict:
    """Maurer-Cartan, flatness, bracket form, form agreement and triangular dependence."""
    fd, grid = cfg.fd(), cfg.grid()
    reports = {
        "maurer_cartan": verify_maurer_cartan(algebra, grid, fd, cfg.r_max, cfg.tol).to_json(),
        "flatness": verify_flatness(algebra, grid, fd, cfg.r_max, cfg.tol).to_json(),
        "bracket_form": verify_flatness(algebra, grid, fd, cfg.r_max, cfg.tol, form="bracket").to_json(),
        "form_agreement": compare_forms(algebra, grid, fd, cfg.r_max, FORM_AGREEMENT_TOL),
        "triangular_dependence": check_triangular_dependence(
            algebra, cfg.samples, cfg.seed, cfg.grid_half_width, cfg.r_max).to_json(),
    }
    return reports


def _report_line(name: str, rep: dict) -> str:
    status = "PASS" if rep.get("passed") else "FAIL"
    if "max_residual" in rep:
        w = rep.get("witness") or {}
        return (f"[{status}] {name}: max residual {rep['max_residual']:.3e} "
                f"(tol {rep['tolerance']:.1e}, {rep['n_points']} points); "
                f"worst indices {w.get('indices')} at t={w.get('point')}")
    if "max_difference" in rep:
        return f"[{status}] {name}: max gap {rep['max_difference']:.3e} (tol {rep['tolerance']:.0e})"
    return f"[{status}] {name}: max deviation {rep['max_deviation']:.3e} over {rep['trials']} trials"


def cmd_verify(args, cfg: RunConfig, out) -> int:
    algebra = _load_algebra(args.input)
    reports = verify_algebra(algebra, cfg)
    passed = all(r["passed"] for r in reports.values())
    payload = {"command": "verify", "input": args.input, "passed": passed,
               "config": asdict(cfg), "reports": reports}
    lines = [f"verify {args.input} (dim {algebra.dim}, class {classify(algebra)})"]
    lines += [_report_line(k, v) for k, v in reports.items()]
    lines.append("PASS" if passed else "FAIL")
    _emit(cfg, payload, lines, out)
    return EXIT_OK if passed else EXIT_FAIL


def cmd_embed(args, cfg: RunConfig, out) -> int:
    structure = _load_structure(args.input)
    try:
        cert = corollary_pipeline(structure, cfg.fd(), cfg.r_max, cfg.samples, cfg.seed,
                                  cfg.tol, cfg.target_l)
        code = EXIT_OK
    except StageFailure as exc:
        cert = exc.certificate
        code = EXIT_FAIL
    payload = dict(cert.to_json(), command="embed", input=args.input)
    lines = [f"embed {args.input}: type ({cert.n},{cert.k})"]
    for stage, rep in cert.stages.items():
        lines.append(f"  [{'PASS' if rep.get('passed') else 'FAIL'}] {stage}")
    if code == EXIT_OK:
        n_, k_ = cert.extension_type
        lines.append(f"l = {cert.ell}; extension type ({n_},{k_})"
                     + (" -- a complex structure" if k_ == 0 else ""))
    else:
        lines.append(f"FAILED at stage '{cert.failed_stage}'")
    _emit(cfg, payload, lines, out)
    return code


def cmd_oracle(args, cfg: RunConfig, out) -> int:
    algebra = _load_algebra(args.input)
    omega = exact_omega(algebra)
    lam = exact_lambda(algebra)
    res = exact_flatness_residual(algebra)
    zero = res.is_identically_zero
    payload = {"command": "oracle", "input": args.input, "omega": omega.to_json(),
               "lambda": lam.to_json(), "residual": res.to_json(), "identically_zero": zero}
    lines = [f"oracle {args.input}: exact coefficients (column a = dt^a component)"]
    for title, mat in (("omega", omega), ("lambda", lam)):
        for a in range(algebra.dim):
            col = ", ".join(p.format() for p in mat.column(a))
            lines.append(f"  {title}_{a + 1} = ({col})")
    lines.append(f"flatness residual identically zero: {'yes' if zero else 'no'}")
    _emit(cfg, payload, lines, out)
    return EXIT_OK if zero else EXIT_FAIL


def cmd_selftest(args, cfg: RunConfig, out) -> int:
    results = []
    sink = _Null()
    quiet = replace(cfg, output="json")
    for name, entry in catalog.load_catalog().items():
        ns = argparse.Namespace(input=f"catalog:{name}")
        if entry.structure is not None:
            results.append((f"embed {name}", cmd_embed(ns, quiet, sink)))
            continue
        results.append((f"validate {name}", cmd_validate(ns, quiet, sink)))
        results.append((f"verify {name}", cmd_verify(ns, quiet, sink)))
        if name in catalog.nilpotent_names():
            results.append((f"oracle {name}", cmd_oracle(ns, quiet, sink)))
    passed = all(code == EXIT_OK for _, code in results)
    payload = {"command": "selftest", "passed": passed,
               "results": [{"check": n, "exit_code": c} for n, c in results]}
    lines = [f"[{'PASS' if c == EXIT_OK else 'FAIL'}] {n}" for n, c in results]
    lines.append("PASS" if passed else "FAIL")
    _emit(cfg, payload, lines, out)
    return EXIT_OK if passed else EXIT_FAIL


def cmd_catalog(args, cfg: RunConfig, out) -> int:
    entries = catalog.load_catalog()
    items = []
    lines = []
    for name, e in entries.items():
        kind = "cr-structure" if e.structure is not None else "algebra"
        cls = str(classify(e.algebra))
        item = {"name": name, "kind": kind, "dim": e.algebra.dim, "class": cls, "notes": e.notes}
        if e.structure is not None:
            item["type"] = [e.structure.n, e.structure.k]
        items.append(item)
        extra = f" type ({e.structure.n},{e.structure.k})" if e.structure is not None else ""
        lines.append(f"{name:16s} {kind:13s} dim {e.algebra.dim}  {cls:14s}{extra}  {e.notes}")
    _emit(cfg, {"command": "catalog list", "entries": items}, lines, out)
    return EXIT_OK


class _Null:
    def write(self, _):
        pass


def build_parser() -> argparse.ArgumentParser:
    # SUPPRESS keeps a subcommand's unset flags from clobbering ones given before it
    common = argparse.ArgumentParser(add_help=False, argument_default=argparse.SUPPRESS)
    common.add_argument("--json", action="store_true", help="emit JSON reports")
    common.add_argument("--config", help="JSON config file (flags override it)")
    common.add_argument("--show-config", action="store_true",
                        help="print the effective configuration and exit")
    common.add_argument("--tol", type=float, help="residual tolerance (default 1e-8)")
    common.add_argument("--step", type=float, help="finite-difference step (default 1e-4)")
    common.add_argument("--richardson", type=int, help="Richardson levels (default 1)")
    common.add_argument("--mode", choices=["finite_difference", "exact_polynomial"],
                        help="derivative mode")
    common.add_argument("--grid", type=int, help="grid points per axis (default 5)")
    common.add_argument("--sampling", choices=["auto", "grid", "random"])
    common.add_argument("--rmax", type=float, help="validity radius in max-norm (default 1.0)")
    common.add_argument("--seed", type=int, help="seed for random sampling")
    common.add_argument("--samples", type=int, help="random samples for dependence/certificate checks")
    common.add_argument("--target-l", dest="target_l", type=int, help="number of transverse directions")

    parser = argparse.ArgumentParser(prog="crembed", parents=[common],
                                     description="Maurer-Cartan continuation and CR extension checks")
    sub = parser.add_subparsers(dest="command", metavar="COMMAND")
    for name, helptext in (("validate", "check Jacobi identity and classify an algebra"),
                           ("verify", "numerical Maurer-Cartan / flatness checks"),
                           ("embed", "certify a CR extension of a group structure"),
                           ("oracle", "exact polynomial coefficients for nilpotent algebras")):
        p = sub.add_parser(name, parents=[common], help=helptext)
        p.add_argument("input", help="JSON file or catalog:NAME")
    sub.add_parser("selftest", parents=[common], help="run every catalog pipeline")
    cat = sub.add_parser("catalog", parents=[common], help="built-in fixtures")
    cat.add_argument("action", choices=["list"])
    return parser


COMMANDS = {"validate": cmd_validate, "verify": cmd_verify, "embed": cmd_embed,
            "oracle": cmd_oracle, "selftest": cmd_selftest, "catalog": cmd_catalog}


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = resolve_config(args)
    except CrembedError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    if getattr(args, "show_config", False):
        out.write(json.dumps(asdict(cfg), sort_keys=True, indent=2) + "\n")
        return EXIT_OK
    if not args.command:
        parser.print_help(sys.stderr)
        return EXIT_INPUT
    try:
        return COMMANDS[args.command](args, cfg, out)
    except (NotNilpotent, NotRational) as exc:
        print(f"domain error: {exc}", file=sys.stderr)
        if cfg.output == "json":
            out.write(dumps({"command": args.command, "error": type(exc).__name__,
                             "message": str(exc)}) + "\n")
        return EXIT_DOMAIN
    except JacobiViolation as exc:
        print(f"verification failure: {exc}", file=sys.stderr)
        return EXIT_FAIL
    except (InputError, ParseError) as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except CrembedError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
