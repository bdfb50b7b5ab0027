"""Planar point sets with many unit distances from Z[zeta_n].

Z[zeta_n] sits as a lattice in C^d (one complex embedding per real place of F).
Given a totally positive alpha in F, the scaled sup-norm

    ||x|| = max_v |x_v| / sqrt(sigma_v(alpha))

makes every beta with beta * conj(beta) = alpha a unit vector whose planar
projection at place 0 has length exactly 1. Intersecting the lattice with a
randomly shifted ball of radius R and projecting gives the point set.
"""
from __future__ import annotations

import csv
import json
import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from itertools import product

import numpy as np
from scipy.spatial import cKDTree

from .cmfield import (
    CycloElement,
    RealQuadElement,
    degree,
    embed,
    field_norm_to_Q,
    num_places,
    real_norm_to_Q,
    real_subfield_m,
    relative_norm,
)

log = logging.getLogger(__name__)

DEFAULT_BUDGET = 10**7
BOUNDARY_TOL = 1e-9
BOX_MARGIN = 1.01
UNIT_TOL = 1e-9


class BudgetExceeded(RuntimeError):
    pass


def embedding_matrix(n: int) -> np.ndarray:
    """Real 2d x 2d matrix sending power-basis coordinates to (Re, Im) per place."""
    dim = degree(n)
    cols = []
    for j in range(dim):
        basis = CycloElement(n, tuple(int(i == j) for i in range(dim)))
        col = []
        for v in range(num_places(n)):
            z = embed(basis, v)
            col += [z.real, z.imag]
        cols.append(col)
    return np.array(cols).T


def _check_alpha(alpha: RealQuadElement, n: int) -> None:
    if alpha.m != real_subfield_m(n):
        raise ValueError(f"alpha must lie in Q(sqrt {real_subfield_m(n)}) for n={n}")
    if not alpha.is_totally_positive():
        raise ValueError(f"alpha={alpha} is not totally positive")


@dataclass
class ScaledLattice:
    n: int
    alpha: RealQuadElement

    def __post_init__(self):
        _check_alpha(self.alpha, self.n)

    @property
    def d(self) -> int:
        return num_places(self.n)

    @cached_property
    def scales(self) -> np.ndarray:
        """sqrt(sigma_v(alpha)) per place."""
        return np.sqrt([self.alpha.embed(v) for v in range(self.d)])

    @cached_property
    def E(self) -> np.ndarray:
        return embedding_matrix(self.n)

    @cached_property
    def E_inv(self) -> np.ndarray:
        return np.linalg.inv(self.E)

    @property
    def covolume(self) -> float:
        return abs(float(np.linalg.det(self.E)))

    def vectors(self, coords: np.ndarray) -> np.ndarray:
        return coords @ self.E.T

    def norms(self, vecs: np.ndarray) -> np.ndarray:
        """Scaled sup-norm of each row of an (N, 2d) array."""
        z = vecs.reshape(len(vecs), self.d, 2)
        return np.max(np.hypot(z[..., 0], z[..., 1]) / self.scales, axis=1)

    def box(self, center: np.ndarray, radius: float) -> list[range]:
        """Integer coordinate ranges covering the ball of given radius around center."""
        half = np.repeat(radius * self.scales, 2)
        c = self.E_inv @ center
        spread = BOX_MARGIN * (np.abs(self.E_inv) @ half)
        return [range(math.floor(a - s), math.ceil(a + s) + 1) for a, s in zip(c, spread)]

    def ball(self, center: np.ndarray, radius: float, budget: int = DEFAULT_BUDGET):
        """Coordinates and norms (relative to center) of lattice points with ||x - center|| <= radius."""
        ranges = self.box(center, radius)
        size = math.prod(len(r) for r in ranges)
        if size > budget:
            raise BudgetExceeded(f"coordinate box has {size} points, budget is {budget}")
        if size == 0:
            return np.zeros((0, 2 * self.d), dtype=np.int64), np.zeros(0)
        grids = np.meshgrid(*[np.arange(r.start, r.stop) for r in ranges], indexing="ij")
        coords = np.stack([g.ravel() for g in grids], axis=1).astype(np.int64)
        norms = self.norms(self.vectors(coords) - center)
        keep = norms <= radius + BOUNDARY_TOL
        return coords[keep], norms[keep]


def find_representations(alpha: RealQuadElement, n: int) -> list[CycloElement]:
    """All beta in Z[zeta_n] with beta * conj(beta) = alpha, decided exactly."""
    _check_alpha(alpha, n)
    lat = ScaledLattice(n, alpha)
    E = lat.E
    radii = np.repeat(lat.scales, 2)
    spread = BOX_MARGIN * (np.abs(lat.E_inv) @ radii)
    ranges = [range(-math.floor(s), math.floor(s) + 1) for s in spread]
    target = np.array([alpha.embed(v) for v in range(lat.d)])
    out = []
    for coords in product(*ranges):
        z = (E @ np.array(coords, dtype=float)).reshape(lat.d, 2)
        sq = z[:, 0] ** 2 + z[:, 1] ** 2
        # numeric prefilter only; the exact test below decides
        if np.all(np.abs(sq - target) <= 1e-6 * (1 + target)):
            beta = CycloElement(n, coords)
            if relative_norm(beta) == alpha:
                out.append(beta)
    return out


@dataclass
class ShiftChoice:
    w: np.ndarray
    inner: int
    outer: int
    trial: int
    seed: int
    warning: bool

    def holds(self, R: float, d: int) -> bool:
        return self.inner >= (1 - 1 / Fraction(R)) ** (2 * d) * self.outer


def _ball_counts(lat: ScaledLattice, R: float, w: np.ndarray, budget: int) -> tuple[int, int]:
    _, norms = lat.ball(w, R, budget)
    return int(np.sum(norms <= R - 1 + BOUNDARY_TOL)), len(norms)


def choose_shift(
    lat: ScaledLattice, R: float, trials: int = 100, seed: int = 0, budget: int = DEFAULT_BUDGET
) -> ShiftChoice:
    """Random w in the fundamental domain with #B(R-1,w) >= (1-1/R)^(2d) #B(R,w).

    Falls back to the sample with the largest gap, flagged, when no trial
    satisfies the inequality.
    """
    if not R > 1:
        raise ValueError(f"R must exceed 1, got {R}")
    if trials < 1:
        raise ValueError("need at least one trial")
    rng = np.random.default_rng(seed)
    factor = (1 - 1 / Fraction(R)) ** (2 * lat.d)
    best, best_gap = None, None
    for i in range(trials):
        w = lat.E @ rng.random(2 * lat.d)
        inner, outer = _ball_counts(lat, R, w, budget)
        choice = ShiftChoice(w, inner, outer, i, seed, warning=False)
        if choice.holds(R, lat.d):
            return choice
        gap = inner - factor * outer
        if best is None or gap > best_gap:
            best, best_gap = choice, gap
    log.warning("no shift among %d trials satisfied the count inequality", trials)
    best.warning = True
    return best


@dataclass
class PointSet:
    elements: list[CycloElement]
    shift: np.ndarray
    R: float
    projected: np.ndarray
    boundary: list[int] = field(default_factory=list)

    def __len__(self):
        return len(self.elements)


def build_point_set(
    lat: ScaledLattice, R: float, w, budget: int = DEFAULT_BUDGET
) -> PointSet:
    if not R > 1:
        raise ValueError(f"R must exceed 1, got {R}")
    w = np.asarray(w, dtype=float)
    coords, norms = lat.ball(w, R, budget)
    vecs = lat.vectors(coords)
    projected = vecs[:, 0:2] / lat.scales[0]
    boundary = [int(i) for i in np.flatnonzero(np.abs(norms - R) <= BOUNDARY_TOL)]
    if boundary:
        log.warning("%d points within %g of the ball boundary", len(boundary), BOUNDARY_TOL)
    elements = [CycloElement(lat.n, tuple(int(c) for c in row)) for row in coords]
    return PointSet(elements, w, float(R), projected, boundary)


@dataclass
class DistanceCount:
    ordered_pairs: int
    set_size: int
    M: int

    @property
    def ratio(self) -> Fraction:
        return Fraction(self.ordered_pairs, self.set_size) if self.set_size else Fraction(0)

    @property
    def unordered_pairs(self) -> int:
        return self.ordered_pairs // 2

    def to_dict(self) -> dict:
        return {
            "orderedPairsAtUnit": self.ordered_pairs,
            "setSize": self.set_size,
            "ratio": str(self.ratio),
            "ratioFloat": float(self.ratio),
            "M": self.M,
        }

    @classmethod
    def from_dict(cls, doc: dict) -> "DistanceCount":
        return cls(doc["orderedPairsAtUnit"], doc["setSize"], doc["M"])


def exact_unit_pairs(ps: PointSet, reps: list[CycloElement]) -> set[tuple[int, int]]:
    """Index pairs (i, j) with relative_norm(e_j - e_i) = alpha.

    The difference has the right relative norm iff it is one of the
    representations, so a lookup replaces the quadratic scan.
    """
    index = {e.coords: i for i, e in enumerate(ps.elements)}
    pairs = set()
    for i, e in enumerate(ps.elements):
        for r in reps:
            j = index.get((e + r).coords)
            if j is not None:
                pairs.add((i, j))
    return pairs


def numeric_unit_pairs(ps: PointSet, tol: float = UNIT_TOL) -> set[tuple[int, int]]:
    """Ordered index pairs whose projections lie within tol of distance 1."""
    pts = ps.projected
    if len(pts) < 2:
        return set()
    close = cKDTree(pts).query_pairs(1 + tol, output_type="ndarray")
    dist = np.hypot(*(pts[close[:, 0]] - pts[close[:, 1]]).T)
    hits = close[np.abs(dist - 1) <= tol]
    return {(int(i), int(j)) for i, j in hits} | {(int(j), int(i)) for i, j in hits}


def count_unit_distances(ps: PointSet, lat: ScaledLattice) -> DistanceCount:
    reps = find_representations(lat.alpha, lat.n)
    exact = exact_unit_pairs(ps, reps)
    numeric = numeric_unit_pairs(ps)
    if exact != numeric:
        raise AssertionError(
            f"exact and numeric unit-distance predicates disagree on "
            f"{len(exact ^ numeric)} pairs"
        )
    return DistanceCount(ordered_pairs=len(exact), set_size=len(ps), M=len(reps))


@dataclass
class IndexFormulaReport:
    lhs: Fraction
    rhs: float
    rel_error: float
    passed: bool


def verify_index_formula(
    beta: CycloElement, alpha: RealQuadElement, n: int, tol: float = 1e-9
) -> IndexFormulaReport:
    """|N_{K/Q}(beta)| / |N_{F/Q}(alpha)| against prod_v |beta|_v^2 / |alpha|_v."""
    if beta.is_zero() or alpha.is_zero():
        raise ValueError("beta and alpha must be nonzero")
    if beta.n != n or alpha.m != real_subfield_m(n):
        raise ValueError("beta and alpha must belong to the fields for n")
    lhs = Fraction(field_norm_to_Q(beta)) / real_norm_to_Q(alpha)
    rhs = math.prod(abs(embed(beta, v)) ** 2 / abs(alpha.embed(v)) for v in range(num_places(n)))
    err = abs(float(lhs) - rhs) / abs(float(lhs))
    return IndexFormulaReport(lhs, rhs, err, err < tol)


@dataclass
class MinNormReport:
    bound: float
    achieved: float
    minimizer: CycloElement
    passed: bool


def verify_min_norm_bound(lat: ScaledLattice, rel_tol: float = 1e-12) -> MinNormReport:
    """Shortest nonzero vector against |N_{F/Q}(alpha)|^(-1/(2d))."""
    bound = float(real_norm_to_Q(lat.alpha)) ** (-1 / (2 * lat.d))
    origin = np.zeros(2 * lat.d)
    # the vector 1 bounds the minimum from above
    r0 = float(lat.norms(lat.vectors(np.eye(1, 2 * lat.d, dtype=np.int64)))[0])
    coords, norms = lat.ball(origin, r0)
    nonzero = np.any(coords != 0, axis=1)
    coords, norms = coords[nonzero], norms[nonzero]
    i = int(np.argmin(norms))
    achieved = float(norms[i])
    minimizer = CycloElement(lat.n, tuple(int(c) for c in coords[i]))
    return MinNormReport(bound, achieved, minimizer, achieved >= bound * (1 - rel_tol))


def write_csv(ps: PointSet, path) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["x", "y"])
        for x, y in ps.projected:
            writer.writerow([f"{x:.17g}", f"{y:.17g}"])


def sidecar(lat: ScaledLattice, ps: PointSet, shift: ShiftChoice, count: DistanceCount) -> dict:
    return {
        "n": lat.n,
        "alpha": lat.alpha.to_dict(),
        "R": ps.R,
        "w": [float(x) for x in ps.shift],
        "seed": shift.seed,
        "trial": shift.trial,
        "innerCount": shift.inner,
        "outerCount": shift.outer,
        "shiftWarning": shift.warning,
        "boundaryPoints": len(ps.boundary),
        "counts": count.to_dict(),
    }


def write_sidecar(doc: dict, path) -> None:
    with open(path, "w") as fh:
        json.dump(doc, fh, indent=2)
        fh.write("\n")
