"""``phs`` command-line front end.

Exit codes: 0 success, 1 verification failure, 2 usage or parse error,
3 domain precondition violated (dimension mismatch, length > dim, ...).
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

import numpy as np

from . import convergence, projector, ray, verify
from .config import DEFAULT_TOLERANCES, Tolerances, derive_seed
from .exceptions import PHSError
from .hilbert import random_unit, random_units
from .io import (
    ParseError,
    dumps,
    format_vector,
    matrix_from_json,
    matrix_to_json,
    read_vector,
    sequence_from_json,
    sequence_to_json,
)

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_DOMAIN = 0, 1, 2, 3
DEFAULT_SEED = 0


class UsageError(Exception):
    pass


@dataclass(frozen=True)
class RunConfig:
    seed: int
    tolerances: Tolerances
    dim: Optional[int] = None
    tol: Optional[float] = None
    trials: Optional[int] = None
    grid: Optional[int] = None
    out: Optional[Path] = None
    fmt: str = "json"

    @classmethod
    def from_args(cls, args) -> "RunConfig":
        seed = args.seed
        if seed is None:
            env = os.environ.get("PHS_SEED")
            try:
                seed = int(env) if env not in (None, "") else DEFAULT_SEED
            except ValueError:
                raise UsageError(f"PHS_SEED must be an integer, got {env!r}") from None
        tols = DEFAULT_TOLERANCES.override(norm_tol=args.norm_tol, ortho_tol=args.ortho_tol)
        for name in ("norm_tol", "ortho_tol"):
            if getattr(tols, name) <= 0:
                raise UsageError(f"--{name.replace('_', '-')} must be > 0")
        dim = getattr(args, "dim", None)
        if dim is not None and dim < 1:
            raise UsageError("--dim must be >= 1")
        tol = getattr(args, "tol", None)
        if tol is not None and tol <= 0:
            raise UsageError("--tol must be > 0")
        out = getattr(args, "out", None)
        if out is not None:
            out = Path(out)
            if not out.parent.is_dir():
                raise UsageError(f"output directory {out.parent} does not exist")
        return cls(
            seed=seed,
            tolerances=tols,
            dim=dim,
            tol=tol,
            trials=getattr(args, "trials", None),
            grid=getattr(args, "grid", None),
            out=out,
            fmt=getattr(args, "format", None) or "json",
        )

    def rng(self, label: str) -> np.random.Generator:
        return np.random.default_rng(derive_seed(self.seed, label))


def _emit(text: str, out: Optional[Path]) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        out.write_text(text)


def _load_state(path: str) -> projector.PureState:
    return projector.PureState.from_vector(read_vector(path))


def cmd_sample(args, cfg: RunConfig) -> int:
    if cfg.dim is None:
        raise UsageError("sample needs --dim")
    vec = random_unit(cfg.dim, cfg.rng("sample"))
    _emit(format_vector(vec, cfg.fmt), cfg.out)
    return EXIT_OK


def cmd_ray(args, cfg: RunConfig) -> int:
    r = ray.ray_of(read_vector(args.infile), tol=cfg.tolerances)
    _emit(format_vector(r.rep, cfg.fmt, canonical=True), cfg.out)
    return EXIT_OK


def cmd_distance(args, cfg: RunConfig) -> int:
    P, Q = _load_state(args.a), _load_state(args.b)
    if P.dim != Q.dim:
        raise PHSError(f"dimension mismatch: {P.dim} != {Q.dim}")
    oracle = projector.oracle_distances(P, Q)
    rec = {
        "h": projector.transition_probability(P, Q),
        "rho_n": projector.rho_n(P, Q),
        "rho_tr": projector.rho_tr(P, Q),
        "oracle_rho_n": oracle["rho_n"],
        "oracle_rho_tr": oracle["rho_tr"],
    }
    rec["max_abs_diff"] = max(abs(rec["rho_n"] - rec["oracle_rho_n"]), abs(rec["rho_tr"] - rec["oracle_rho_tr"]))
    _emit(dumps(rec), cfg.out)
    return EXIT_OK if rec["max_abs_diff"] < 1e-10 else EXIT_FAIL


def cmd_oracle(args, cfg: RunConfig) -> int:
    if args.matrix:
        try:
            M = matrix_from_json(json.loads(Path(args.matrix).read_text()))
        except (OSError, ValueError) as exc:
            raise ParseError(str(exc)) from None
    else:
        if not args.states or len(args.states) > 2:
            raise UsageError("oracle needs one or two state files, or --matrix")
        states = [_load_state(p) for p in args.states]
        M = projector.materialize(states[0])
        if len(states) == 2:
            if states[0].dim != states[1].dim:
                raise PHSError("dimension mismatch")
            M = M - projector.materialize(states[1])
    spec = projector.dense_spectrum(M)
    rec = {
        "matrix": matrix_to_json(M),
        "spectrum": spec,
        "operator_norm": float(np.max(np.abs(spec))),
        "trace_norm": float(np.sum(np.abs(spec))),
    }
    _emit(dumps(rec), cfg.out)
    return EXIT_OK


def _probe_sets(kind: str, dim: int, count: int, rng):
    if kind == "l2":
        p = convergence.l2_probes(dim, count, rng)
    else:
        p = random_units(dim, count, rng)
    return p, p


def cmd_converge(args, cfg: RunConfig) -> int:
    try:
        seq = sequence_from_json(json.loads(Path(args.infile).read_text()))
    except (OSError, json.JSONDecodeError) as exc:
        raise ParseError(str(exc)) from None
    probes, vectors = _probe_sets(args.probe_kind, seq.dim, args.probes, cfg.rng("converge/probes"))
    rep = convergence.analyze(seq, probes, vectors, cfg.tol or 1e-3, args.tail,
                              include_limit_probe=not args.no_limit_probe)
    out = {"label": seq.label, "dim": seq.dim, "length": len(seq), "probe_kind": args.probe_kind, **rep.to_dict()}
    _emit(dumps(out), cfg.out)
    return EXIT_OK


def counterexample_report(dim: int, length: int, seed: int, tol: float = 0.05, tail: int = 16) -> tuple:
    rng = np.random.default_rng(derive_seed(seed, "counterexample"))
    seq = convergence.orthonormal_counterexample(dim, length, rng)
    X = seq.matrix()
    probes = convergence.l2_probes(dim, 32, rng)
    tail = min(tail, length - 1)
    rep = convergence.analyze(seq, probes, probes, tol, tail)
    steps = [projector.rho_n(X[i], X[i + 1]) for i in range(length - 1)]
    weak_tail = np.max(projector.overlaps(probes, X[-tail:]), axis=0)
    report = {
        "label": seq.label,
        "consecutive_rho_n": steps,
        "bessel_sums": convergence.bessel_sums(seq, probes),
        "weak_probe_residuals": weak_tail,
        "weak_cauchy": rep["weak"].cauchy,
        "norm_cauchy": rep["norm"].cauchy,
        "analysis": rep.to_dict(),
    }
    return seq, report


def cmd_counterexample(args, cfg: RunConfig) -> int:
    if cfg.dim is None:
        raise UsageError("counterexample needs --dim")
    length = args.length if args.length is not None else cfg.dim
    seq, report = counterexample_report(cfg.dim, length, cfg.seed, cfg.tol or 0.05)
    if cfg.out is not None:
        cfg.out.write_text(dumps(sequence_to_json(seq)))
    text = dumps(report)
    if args.report:
        Path(args.report).write_text(text)
    else:
        sys.stdout.write(text)
    ok = all(abs(s - 1.0) <= 1e-10 for s in report["consecutive_rho_n"]) and report["weak_cauchy"] and not report["norm_cauchy"]
    return EXIT_OK if ok else EXIT_FAIL


def cmd_verify(args, cfg: RunConfig) -> int:
    if args.suite not in verify.SUITES + ("all",):
        raise UsageError(f"unknown suite {args.suite!r}; choose from {', '.join(verify.SUITES + ('all',))}")
    scfg = verify.SuiteConfig(
        seed=cfg.seed,
        dim=cfg.dim,
        trials=cfg.trials if cfg.trials is not None else 100,
        grid=cfg.grid if cfg.grid is not None else 10,
        tol=cfg.tol if cfg.tol is not None else 1e-10,
    )
    summary = verify.run_suite(args.suite, scfg)
    _emit(dumps(summary), cfg.out)
    return EXIT_OK if not summary["failures"] else EXIT_FAIL


def cmd_sigma(args, cfg: RunConfig) -> int:
    dim = cfg.dim or 4
    report = verify.sigma_report(dim, args.points, cfg.grid or 10, derive_seed(cfg.seed, "sigma"))
    _emit(dumps(report), cfg.out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=None, help="root seed (default: $PHS_SEED or 0)")
    common.add_argument("--out", default=None, help="output path (default: stdout)")
    common.add_argument("--format", choices=("json", "csv"), default="json")
    common.add_argument("--norm-tol", type=float, default=None)
    common.add_argument("--ortho-tol", type=float, default=None)

    parser = argparse.ArgumentParser(prog="phs", description="Pure-state geometry on projective Hilbert space.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("sample", parents=[common], help="emit a random unit state vector")
    p.add_argument("--dim", type=int, required=True)
    p.set_defaults(func=cmd_sample)

    p = sub.add_parser("ray", parents=[common], help="canonical ray representative of a state file")
    p.add_argument("--in", dest="infile", required=True)
    p.set_defaults(func=cmd_ray)

    p = sub.add_parser("distance", parents=[common], help="h, rho_n and rho_tr between two states, with oracle")
    p.add_argument("a")
    p.add_argument("b")
    p.set_defaults(func=cmd_distance)

    p = sub.add_parser("oracle", parents=[common], help="dense matrix and Jacobi spectrum")
    p.add_argument("states", nargs="*")
    p.add_argument("--matrix", default=None, help="Hermitian matrix JSON instead of state files")
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("converge", parents=[common], help="classify a state sequence per topology")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--probes", type=int, default=32)
    p.add_argument("--probe-kind", choices=("uniform", "l2"), default="uniform")
    p.add_argument("--no-limit-probe", action="store_true")
    p.add_argument("--tol", type=float, default=1e-3)
    p.add_argument("--tail", type=int, default=16)
    p.set_defaults(func=cmd_converge)

    p = sub.add_parser("counterexample", parents=[common], help="orthonormal sequence and its report")
    p.add_argument("--dim", type=int, required=True)
    p.add_argument("--length", type=int, default=None)
    p.add_argument("--tol", type=float, default=0.05)
    p.add_argument("--report", default=None, help="report path (default: stdout)")
    p.set_defaults(func=cmd_counterexample)

    p = sub.add_parser("verify", parents=[common], help="run an invariant suite")
    p.add_argument("suite")
    p.add_argument("--dim", type=int, default=None)
    p.add_argument("--trials", type=int, default=None)
    p.add_argument("--grid", type=int, default=None)
    p.add_argument("--tol", type=float, default=None)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("sigma", parents=[common], help="Borel vs h-generated atoms on a random universe")
    p.add_argument("--dim", type=int, default=4)
    p.add_argument("--points", type=int, default=20)
    p.add_argument("--grid", type=int, default=10)
    p.set_defaults(func=cmd_sigma)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        cfg = RunConfig.from_args(args)
        return args.func(args, cfg)
    except (UsageError, ParseError) as exc:
        print(f"phs: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except PHSError as exc:
        print(f"phs: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except ValueError as exc:
        print(f"phs: {exc}", file=sys.stderr)
        return EXIT_DOMAIN


if __name__ == "__main__":
    sys.exit(main())
