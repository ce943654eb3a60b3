"""Seeded invariant suites behind ``phs verify``.

Every suite returns a list of case records ``{"name", "passed", ...}``.  Each
case draws from its own seed, derived from the root seed and the case name,
so suites can be rerun one at a time with identical results.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from . import borel, convergence, projector, ray, topology
from .config import as_rng, derive_seed
from .hilbert import normalize, random_units

SUITES = ("metrics", "topology", "convergence", "sigma")
METRIC_DIMS = (2, 3, 4, 8, 16, 64)


@dataclass(frozen=True)
class SuiteConfig:
    seed: int = 0
    dim: Optional[int] = None
    trials: int = 100
    grid: int = 10
    tol: float = 1e-10

    def rng(self, label: str) -> np.random.Generator:
        return np.random.default_rng(derive_seed(self.seed, label))

    def dims(self, default) -> tuple:
        return (self.dim,) if self.dim is not None else tuple(default)


def _case(name: str, passed: bool, **detail) -> dict:
    return {"name": name, "passed": bool(passed), **detail}


# -- metrics -----------------------------------------------------------------

def metrics_suite(cfg: SuiteConfig) -> list:
    cases = []
    for dim in cfg.dims(METRIC_DIMS):
        rng = cfg.rng(f"metrics/oracle/{dim}")
        err_n = err_tr = err_spec = max_zero = 0.0
        for _ in range(cfg.trials):
            a, b = random_units(dim, 2, rng)
            spec = projector.dense_spectrum(projector.materialize(a) - projector.materialize(b))
            lam = projector.rho_n(a, b)
            err_n = max(err_n, abs(lam - np.max(np.abs(spec))))
            err_tr = max(err_tr, abs(projector.rho_tr(a, b) - np.sum(np.abs(spec))))
            err_spec = max(err_spec, abs(spec[0] - lam), abs(spec[-1] + lam))
            if dim > 2:
                max_zero = max(max_zero, float(np.max(np.abs(spec[1:-1]))))
        cases.append(_case(f"oracle/dim={dim}", max(err_n, err_tr) <= cfg.tol,
                           max_err_rho_n=err_n, max_err_rho_tr=err_tr))
        cases.append(_case(f"spectrum/dim={dim}", err_spec <= cfg.tol and max_zero <= cfg.tol,
                           max_err_pm=err_spec, max_zero_mode=max_zero))

        rng = cfg.rng(f"metrics/closed/{dim}")
        tri = phase = bound = trace = 0
        for _ in range(cfg.trials):
            a, b, c = random_units(dim, 3, rng)
            for f, slack in ((projector.rho_n, 1e-10), (projector.rho_tr, 1e-10)):
                if f(a, c) > f(a, b) + f(b, c) + slack:
                    tri += 1
            th, et = rng.uniform(0, 2 * np.pi, 2)
            if abs(projector.rho_n(np.exp(1j * th) * a, np.exp(1j * et) * b) - projector.rho_n(a, b)) > 1e-12:
                phase += 1
            if not projector.norm_bound_check(a, b)[2]:
                bound += 1
            if abs(projector.trace_of_product(a, b) - projector.transition_probability(a, b)) > 1e-12:
                trace += 1
            if projector.rho_tr(a, b) != 2.0 * projector.rho_n(a, b):
                trace += 1
        cases.append(_case(f"closed-forms/dim={dim}", tri + phase + bound + trace == 0,
                           triangle=tri, phase=phase, continuity=bound, trace_product=trace))

        rng = cfg.rng(f"metrics/phase-align/{dim}")
        grid = np.exp(1j * 2 * np.pi * np.arange(1000) / 1000)
        opt = bnd = 0
        for _ in range(cfg.trials):
            phi0, phi = random_units(dim, 2, rng)
            if abs(np.vdot(phi, phi0)) <= 0.1:
                continue
            d, b = ray.phase_align_bound(phi, phi0)
            if d > np.min(np.linalg.norm(grid[:, None] * phi[None, :] - phi0[None, :], axis=1)) + 1e-9:
                opt += 1
            if d > b + 1e-12:
                bnd += 1
        cases.append(_case(f"phase-align/dim={dim}", opt + bnd == 0, optimality=opt, bound=bnd))
    return cases


# -- topology ----------------------------------------------------------------

def topology_suite(cfg: SuiteConfig) -> list:
    cases = []
    samples = max(cfg.trials, 10)
    for dim in cfg.dims((2, 4, 16)):
        for eps in (0.1, 0.5, 0.9):
            rng = cfg.rng(f"topology/ball/{dim}/{eps}")
            P = projector.PureState(random_units(dim, 1, rng)[0])
            rep = topology.verify_ball_identity(P, eps, samples, rng)
            cases.append(_case(f"ball-identity/dim={dim}/eps={eps}", rep["agreed"] == rep["checked"],
                               checked=rep["checked"], agreed=rep["agreed"], in_ball=rep["in_ball"]))
            probes = [projector.PureState(v) for v in random_units(dim, 3, rng)]
            inc = topology.inclusion_check(P, probes, eps, samples, rng)
            cases.append(_case(f"inclusion/dim={dim}/eps={eps}", not inc["violations"],
                               checked=inc["checked"], violations=len(inc["violations"])))

        rng = cfg.rng(f"topology/separate/{dim}")
        joint = 0
        pairs = max(cfg.trials // 10, 5)
        for _ in range(pairs):
            a, b = random_units(dim, 2, rng)
            U1, U2 = topology.separate(projector.PureState(a), projector.PureState(b))
            X = np.vstack([random_units(dim, samples, rng),
                           topology.sample_in_ball(U1.center, 0.5, samples // 2, rng),
                           topology.sample_in_ball(U2.center, 0.5, samples // 2, rng)])
            joint += int(np.sum(U1.mask(X) & U2.mask(X)))
        cases.append(_case(f"separation/dim={dim}", joint == 0, pairs=pairs, joint_members=joint))

        rng = cfg.rng(f"topology/openness/{dim}")
        rep = ray.openness_echo(random_units(dim, 1, rng)[0], 0.3, max(cfg.trials // 10, 5), rng, grid=2000)
        cases.append(_case(f"quotient-openness/dim={dim}", not rep["violations"], checked=rep["checked"]))

    rng = cfg.rng("topology/covering")
    small, large = base_covering_pair(2, n_intervals=20, n_points=50, rng=rng)
    cases.append(_case("base-covering/dim=2", large <= small, failures_small=small, failures_large=large))
    return cases


def base_covering_pair(dim: int, n_intervals: int, n_points: int, rng,
                       small=(50, 10, 10), large=(200, 40, 50)) -> tuple[int, int]:
    """Uncovered-point counts for a coarse and a fine base truncation (nested grids)."""
    rng = as_rng(rng)
    base = random_units(dim, large[0], rng)
    fail_small = fail_large = 0
    for _ in range(n_intervals):
        Q = random_units(dim, 1, rng)[0]
        lo, hi = np.sort(rng.uniform(0, 1, 2))
        X = random_units(dim, n_points, rng)
        fail_small += topology.base_covering_failures(Q, (lo, hi), X, base[: small[0]], small[1], small[2])
        fail_large += topology.base_covering_failures(Q, (lo, hi), X, base[: large[0]], large[1], large[2])
    return fail_small, fail_large


# -- convergence -------------------------------------------------------------

def convergence_suite(cfg: SuiteConfig) -> list:
    cases = []
    dim = cfg.dim or 64
    rng = cfg.rng("convergence/counterexample")
    seq = convergence.orthonormal_counterexample(dim, dim, rng)
    X = seq.matrix()
    steps = [projector.rho_n(X[i], X[i + 1]) for i in range(len(seq) - 1)]
    probes = convergence.l2_probes(dim, 32, rng)
    bessel = convergence.bessel_sums(seq, probes)
    tail = min(16, len(seq) - 1)
    rep = convergence.analyze(seq, probes, probes, 0.05, tail)
    cases.append(_case(
        f"counterexample/dim={dim}",
        max(abs(s - 1.0) for s in steps) <= 1e-10 and bessel.max() <= 1 + 1e-9
        and rep["weak"].cauchy and not rep["norm"].cauchy and not rep["norm"].converges,
        max_step_err=max(abs(s - 1.0) for s in steps), max_bessel=float(bessel.max()),
        weak_cauchy=rep["weak"].cauchy, norm_cauchy=rep["norm"].cauchy,
    ))

    seq = convergence.StateSequence(tuple(normalize([1.0, 1.0 / k]) for k in range(1, 1001)), "1/k")
    p2 = random_units(2, 32, cfg.rng("convergence/1k-probes"))
    rep = convergence.analyze(seq, p2, p2, 1e-3, 16)
    comp = convergence.completeness_check(seq, 1e-2)
    dist = convergence.distance_to_limit(comp["limit"], [1.0, 0.0])
    cases.append(_case(
        "one-over-k",
        all(rep[t].converges for t in convergence.TOPOLOGIES) and comp["is_pure"]
        and comp["idempotency_residual"] <= 1e-4 and comp["trace_residual"] <= 1e-4 and dist <= 2e-3,
        idempotency=comp["idempotency_residual"], trace=comp["trace_residual"], limit_distance=dist,
    ))

    rng = cfg.rng("convergence/random")
    bad_order = bad_bound = 0
    for _ in range(max(cfg.trials // 10, 5)):
        seq = random_converging_sequence(cfg.dim or 4, 40, rng)
        pr = random_units(seq.dim, 8, rng)
        rep = convergence.analyze(seq, pr, pr, 1e-2, 10)
        if not consistent(rep):
            bad_order += 1
        L = seq.matrix()[-1]
        H = projector.overlaps(pr, seq.matrix())
        hL = projector.overlaps(pr, L[None, :])
        rho = projector.rho_n_matrix(seq.matrix(), L)[:, 0]
        if np.any(np.abs(H - hL) > rho[None, :] + 1e-12):
            bad_bound += 1
    cases.append(_case("verdict-ordering", bad_order + bad_bound == 0, ordering=bad_order, weak_bound=bad_bound))
    return cases


def random_converging_sequence(dim: int, length: int, rng) -> convergence.StateSequence:
    """States approaching a random target with geometrically shrinking noise."""
    rng = as_rng(rng)
    target = random_units(dim, 1, rng)[0]
    states = []
    for n in range(length):
        noise = random_units(dim, 1, rng)[0] * 0.5 ** n
        states.append(normalize(target + noise))
    return convergence.StateSequence(tuple(states), "geometric")


def consistent(rep: convergence.ConvergenceReport) -> bool:
    v = rep.verdicts
    if v["norm"].converges != v["trace"].converges or v["norm"].cauchy != v["trace"].cauchy:
        return False
    if v["norm"].converges and not v["strong"].converges:
        return False
    if v["strong"].converges and not v["weak"].converges:
        return False
    return all(t.cauchy for t in v.values() if t.converges)


# -- sigma -------------------------------------------------------------------

def sigma_report(dim: int, points: int, R: int, seed) -> dict:
    universe = borel.random_universe(dim, points, seed)
    xi_gen, sigma_gen, _ = borel.matched_grids(universe, R)
    res = borel.misra_check(universe, xi_gen, sigma_gen)
    return {
        "atoms_xi": res["xi_atoms"].to_list(),
        "atoms_sigma": res["sigma_atoms"].to_list(),
        "equal": res["equal"],
        "refinement": res["refinement"],
    }


def impoverished_check(dim: int, points: int, R: int, n_probes: int, seed) -> dict:
    """Σ side restricted to a few probes and ``m = 2``; Ξ side also holds the band balls."""
    universe = borel.random_universe(dim, points, seed)
    probes = universe.points[:n_probes]
    xi_gen, sigma_gen, qs = borel.matched_grids(universe, R, probes=probes, ms=[2])
    xi_gen = xi_gen + borel.preimage_balls(universe, probes, qs, [2])
    return borel.misra_check(universe, xi_gen, sigma_gen)


def sigma_suite(cfg: SuiteConfig) -> list:
    cases = []
    dim = cfg.dim or 4
    R = cfg.grid
    n_seeds = 20
    unequal = []
    for s in range(n_seeds):
        rep = sigma_report(dim, 20, R, derive_seed(cfg.seed, f"sigma/matched/{s}"))
        if not rep["equal"]:
            unequal.append(s)
    cases.append(_case(f"misra-matched/R={R}", not unequal, seeds=n_seeds, unequal=unequal))

    wrong = []
    verdicts = {}
    for s in range(n_seeds):
        res = impoverished_check(dim, 20, R, 3, derive_seed(cfg.seed, f"sigma/poor/{s}"))
        verdicts[res["refinement"]] = verdicts.get(res["refinement"], 0) + 1
        if res["refinement"] not in ("equal", "sigma_coarser"):
            wrong.append(s)
    cases.append(_case("misra-impoverished", not wrong, verdicts=verdicts, wrong_direction=wrong))

    rng = cfg.rng("sigma/order")
    universe = borel.random_universe(dim, 20, rng)
    gen = borel.ball_generators(universe, random_units(dim, 40, rng), [0.5, 0.8])
    base = borel.atoms(universe, gen)
    perm = rng.permutation(len(gen))
    shuffled = borel.GeneratorFamily(tuple(gen.sets[i] for i in perm) + gen.sets[:5])
    fewer = borel.GeneratorFamily(gen.sets[: len(gen) // 2])
    cases.append(_case(
        "atoms-set-determined",
        borel.atoms(universe, shuffled) == base and base.refines(borel.atoms(universe, fewer)),
        blocks=len(base),
    ))
    return cases


SUITE_FUNCS: dict[str, Callable[[SuiteConfig], list]] = {
    "metrics": metrics_suite,
    "topology": topology_suite,
    "convergence": convergence_suite,
    "sigma": sigma_suite,
}


def run_suite(name: str, cfg: SuiteConfig) -> dict:
    """Run one suite (or ``all``) and return ``{suite, cases, failures}``."""
    names = SUITES if name == "all" else (name,)
    if any(n not in SUITE_FUNCS for n in names):
        raise KeyError(name)
    cases = []
    for n in names:
        for c in SUITE_FUNCS[n](cfg):
            cases.append({"suite": n, **c})
    failures = [f"{c['suite']}/{c['name']}" for c in cases if not c["passed"]]
    return {"suite": name, "seed": cfg.seed, "cases": cases, "failures": failures}

