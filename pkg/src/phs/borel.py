"""σ-algebras generated on a finite universe of pure states.

On a finite set the σ-algebra generated by a family of subsets is the set of
all unions of its atoms, and two points share an atom iff no generator
separates them.  Comparing the atoms of metric-ball generators with those of
transition-probability generators is the finite shadow of "Borel sets =
σ-algebra generated by the functions h_Q".
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from .config import as_rng
from .hilbert import random_units
from .projector import PureState, overlaps, rho_n_matrix, state_matrix


@dataclass(frozen=True)
class FiniteUniverse:
    points: np.ndarray = field(repr=False)

    def __post_init__(self):
        pts = state_matrix(self.points)
        if pts.shape[0] > 1:
            h = overlaps(pts, pts)
            np.fill_diagonal(h, 0.0)
            if np.any(np.abs(np.sqrt(h) - 1.0) <= 1e-10):
                raise ValueError("universe points must be pairwise distinct rays")
        pts.setflags(write=False)
        object.__setattr__(self, "points", pts)

    @property
    def dim(self) -> int:
        return self.points.shape[1]

    def __len__(self):
        return self.points.shape[0]

    @property
    def ids(self) -> range:
        return range(len(self))

    def state(self, i: int) -> PureState:
        return PureState(self.points[i])


def random_universe(dim: int, n: int, seed=None) -> FiniteUniverse:
    return FiniteUniverse(random_units(dim, n, as_rng(seed)))


@dataclass(frozen=True)
class GeneratorFamily:
    sets: tuple
    provenance: str = "custom"

    def __post_init__(self):
        object.__setattr__(self, "sets", tuple(frozenset(s) for s in self.sets))

    def __len__(self):
        return len(self.sets)

    def __add__(self, other: "GeneratorFamily") -> "GeneratorFamily":
        return GeneratorFamily(self.sets + other.sets, f"{self.provenance}+{other.provenance}")


@dataclass(frozen=True)
class FinitePartition:
    """Blocks of a partition of ``range(n)``, canonically ordered by smallest id."""

    n: int
    blocks: tuple

    def __post_init__(self):
        blocks = tuple(sorted((tuple(sorted(b)) for b in self.blocks), key=lambda b: b[0]))
        seen = [i for b in blocks for i in b]
        if any(len(b) == 0 for b in blocks) or sorted(seen) != list(range(self.n)):
            raise ValueError("blocks must be nonempty, disjoint and cover every id")
        object.__setattr__(self, "blocks", blocks)

    def __len__(self):
        return len(self.blocks)

    @property
    def sigma_size(self) -> int:
        return 2 ** len(self.blocks)

    def labels(self) -> np.ndarray:
        lab = np.empty(self.n, dtype=int)
        for j, b in enumerate(self.blocks):
            lab[list(b)] = j
        return lab

    def refines(self, other: "FinitePartition") -> bool:
        """True if every block of ``self`` lies inside a block of ``other``."""
        theirs = other.labels()
        return all(len({theirs[i] for i in b}) == 1 for b in self.blocks)

    def to_list(self) -> list:
        return [list(b) for b in self.blocks]


def atoms(universe: FiniteUniverse | int, gen: GeneratorFamily) -> FinitePartition:
    """Atoms of the σ-algebra generated by ``gen``.

    Points are grouped by their membership signature across all generator
    sets, which is independent of generator order and duplication.
    """
    n = universe if isinstance(universe, int) else len(universe)
    groups: dict = {}
    for i in range(n):
        key = frozenset(s for s in gen.sets if i in s)
        groups.setdefault(key, []).append(i)
    return FinitePartition(n, tuple(groups.values()))


def _rho(universe: FiniteUniverse, centers) -> np.ndarray:
    return rho_n_matrix(state_matrix(centers), universe.points)


def ball_generators(universe: FiniteUniverse, centers: Sequence, radii: Sequence[float]) -> GeneratorFamily:
    """Traces of open operator-norm balls on the universe; empty traces are dropped."""
    if any(r <= 0 for r in radii):
        raise ValueError("radii must be > 0")
    rho = _rho(universe, centers)
    sets = []
    for row in rho:
        for r in radii:
            s = np.flatnonzero(row < r)
            if s.size:
                sets.append(s.tolist())
    return GeneratorFamily(tuple(sets), "metric-balls")


def h_generators(universe: FiniteUniverse, probes: Sequence, thresholds: Sequence, m: int | Sequence[int]) -> GeneratorFamily:
    """Sets ``{i : |h_Q(point_i) - q| < 1/m}`` per probe, threshold and ``m``; empty sets dropped."""
    ms = [m] if isinstance(m, (int, np.integer)) else list(m)
    if any(mm < 1 for mm in ms):
        raise ValueError("m must be >= 1")
    if any(not 0 <= q <= 1 for q in thresholds):
        raise ValueError("thresholds must lie in [0, 1]")
    h = overlaps(state_matrix(probes), universe.points)
    sets = []
    for row in h:
        for q in thresholds:
            for mm in ms:
                s = np.flatnonzero(np.abs(row - float(q)) < 1.0 / mm)
                if s.size:
                    sets.append(s.tolist())
    return GeneratorFamily(tuple(sets), "h-preimages")


def preimage_balls(universe: FiniteUniverse, probes: Sequence, thresholds: Sequence, m: int | Sequence[int]) -> GeneratorFamily:
    """Open balls whose Boolean combinations reproduce each ``h``-band a.s.

    ``{h_Q > t} = {rho_n(., Q) < sqrt(1 - t)}``, and ``{h_Q < t}`` differs from
    the complement of that ball only on the level set ``h_Q = t``, which random
    universes miss.  Adding these balls to the Ξ side makes every
    Σ generator Ξ-measurable, so Σ-atoms must come out coarser or equal.
    """
    ms = [m] if isinstance(m, (int, np.integer)) else list(m)
    radii = set()
    for q in thresholds:
        for mm in ms:
            for t in (float(q) - 1.0 / mm, float(q) + 1.0 / mm):
                if 0.0 <= t < 1.0:
                    radii.add(float(np.sqrt(1.0 - t)))
    return ball_generators(universe, probes, sorted(radii))


def compare_partitions(xi: FinitePartition, sigma: FinitePartition) -> str:
    if xi.blocks == sigma.blocks:
        return "equal"
    if xi.refines(sigma):
        return "sigma_coarser"
    if sigma.refines(xi):
        return "xi_coarser"
    return "incomparable"


def misra_check(universe: FiniteUniverse, xi_gen: GeneratorFamily, sigma_gen: GeneratorFamily) -> dict:
    """Compare the atoms generated by ball sets (Ξ side) and h-sets (Σ side).

    ``refinement`` is one of ``equal``, ``sigma_coarser`` (the provable
    direction Σ ⊆ Ξ), ``xi_coarser`` or ``incomparable``.
    """
    xi = atoms(universe, xi_gen)
    sigma = atoms(universe, sigma_gen)
    verdict = compare_partitions(xi, sigma)
    return {"xi_atoms": xi, "sigma_atoms": sigma, "equal": verdict == "equal", "refinement": verdict}


def matched_grids(universe: FiniteUniverse, R: int = 10, probes=None, ms: Sequence[int] | None = None):
    """Ball radii ``{k/R}`` and h-grid ``q = l/R``, ``m in {2..R}`` at one resolution ``R``.

    Balls are centered at every universe point; ``probes`` defaults to the
    universe points as well.
    """
    probes = universe.points if probes is None else probes
    ms = list(range(2, R + 1)) if ms is None else list(ms)
    radii = [k / R for k in range(1, R + 1)]
    qs = [Fraction(l, R) for l in range(R + 1)]
    xi_gen = ball_generators(universe, universe.points, radii)
    sigma_gen = h_generators(universe, probes, qs, ms)
    return xi_gen, sigma_gen, qs
