"""Permutahedron and simplex geometry: face lattice, collapse, projection.

The n-permutahedron is realized as the convex hull of the permutations
of (1, ..., n+1); the ambient simplex is the tight enclosing one
{x_i >= 1, sum x = (n+1)(n+2)/2} in the same hyperplane, so the
permutahedron is its truncation.  Faces are labelled by strictly
increasing chains of nonempty proper subsets of {1, ..., n+1}.

Exact rational arithmetic is used for the combinatorics, the collapse
map on rational inputs, and the nearest-point projection; the sampled
coverage checks run on floats.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Sequence

import numpy as np

from .bilinear import _solve
from .errors import DomainError, InputError, ResourceError

DAMPING_SLACK = Fraction(1, 4)  # slack scale below which coordinates are pulled in


def subset_level(k: int) -> int:
    """Minimal possible sum of k distinct values from {1, ..., n+1}."""
    return k * (k + 1) // 2


def plane_total(n: int) -> int:
    return (n + 1) * (n + 2) // 2


def proper_subsets(n: int) -> list[tuple[int, ...]]:
    """Nonempty proper subsets of {1, ..., n+1}, sorted lexicographically."""
    ground = range(1, n + 2)
    out = []
    for size in range(1, n + 1):
        out.extend(itertools.combinations(ground, size))
    out.sort()
    return out


@dataclass(frozen=True)
class NestedSequence:
    """Strictly increasing chain of nonempty proper subsets of {1,...,n+1}."""

    n: int
    chain: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        if self.n < 1:
            raise InputError("n must be positive")
        l = len(self.chain)
        if not 1 <= l <= self.n:
            raise InputError(f"chain length must be in 1..{self.n}, got {l}")
        ground = set(range(1, self.n + 2))
        norm = []
        prev = None
        for raw in self.chain:
            s = set(raw)
            if len(s) != len(raw):
                raise InputError(f"repeated element in subset {raw}")
            if not s or not s < ground:
                raise InputError(f"subset {raw} must be nonempty and proper")
            if prev is not None and not prev < s:
                raise InputError("chain subsets must strictly increase")
            prev = s
            norm.append(tuple(sorted(s)))
        object.__setattr__(self, "chain", tuple(norm))

    @property
    def length(self) -> int:
        return len(self.chain)

    def dim(self) -> int:
        """Dimension of the face this chain labels."""
        return self.n - self.length

    def __str__(self):
        return " < ".join("{" + ",".join(map(str, s)) + "}" for s in self.chain)

    @staticmethod
    def parse(n: int, text: str) -> "NestedSequence":
        """Chain syntax '1;1,2' for {1} < {1,2}."""
        try:
            chain = tuple(
                tuple(int(tok) for tok in part.split(","))
                for part in text.split(";")
                if part.strip()
            )
        except ValueError as exc:
            raise InputError(f"cannot parse chain {text!r}") from exc
        return NestedSequence(n, chain)


@dataclass(frozen=True)
class SimplexFace:
    """Face of the simplex where the coordinates in `pinned` sit at the
    lower bound; codimension equals len(pinned)."""

    n: int
    pinned: tuple[int, ...]

    def __post_init__(self):
        s = set(self.pinned)
        ground = set(range(1, self.n + 2))
        if len(s) != len(self.pinned) or not s or not s < ground:
            raise InputError("pinned set must be a nonempty proper subset")
        object.__setattr__(self, "pinned", tuple(sorted(s)))

    def contains_face(self, other: "SimplexFace") -> bool:
        # smaller faces pin more coordinates
        if self.n != other.n:
            raise InputError("simplex dimension mismatch")
        return set(self.pinned) <= set(other.pinned)

    def __str__(self):
        return "{" + ",".join(map(str, self.pinned)) + "}"


def enumerate_faces(n: int, codim: int) -> list[NestedSequence]:
    """All chains of the given length, each once, in lexicographic order."""
    if not 1 <= codim <= n:
        raise InputError(f"codim must be in 1..{n}, got {codim}")
    subsets = proper_subsets(n)
    chains: list[NestedSequence] = []

    # inclusion does not respect the lexicographic order, so scan every
    # subset at each level; strictness makes each chain appear once
    def extend(prefix: list[tuple[int, ...]]):
        if len(prefix) == codim:
            chains.append(NestedSequence(n, tuple(prefix)))
            return
        for cand in subsets:
            if not prefix or set(prefix[-1]) < set(cand):
                prefix.append(cand)
                extend(prefix)
                prefix.pop()

    extend([])
    chains.sort(key=lambda ns: ns.chain)
    return chains


def all_faces(n: int) -> list[NestedSequence]:
    out = []
    for codim in range(1, n + 1):
        out.extend(enumerate_faces(n, codim))
    return out


def face_leq(a: NestedSequence, b: NestedSequence) -> bool:
    """a is a (not necessarily proper) subface of b: b.chain inside a.chain."""
    if a.n != b.n:
        raise InputError("chains live in different permutahedra")
    return set(b.chain) <= set(a.chain)


def forgetful(ns: NestedSequence) -> SimplexFace:
    """Target simplex face: the largest subset of the chain, pinned low."""
    return SimplexFace(ns.n, ns.chain[-1])


# ---------------------------------------------------------------------------
# realization
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class PermRealization:
    n: int
    total: int
    vertices: tuple[tuple[int, ...], ...]

    def slack(self, point: Sequence, subset: tuple[int, ...]) -> Fraction:
        return sum(Fraction(point[i - 1]) for i in subset) - subset_level(len(subset))

    def contains(self, point: Sequence, tol: Fraction = Fraction(0)) -> bool:
        if len(point) != self.n + 1:
            raise InputError("point has wrong length")
        pt = [Fraction(x) for x in point]
        if abs(sum(pt) - self.total) > tol:
            return False
        return all(self.slack(pt, s) >= -tol for s in proper_subsets(self.n))

    def vertices_of_face(self, ns: NestedSequence) -> list[tuple[int, ...]]:
        """Vertices whose value blocks refine the chain: positions in I_1
        carry the smallest |I_1| values, and so on block by block."""
        if ns.n != self.n:
            raise InputError("chain does not match this realization")
        blocks = []
        prev: tuple[int, ...] = ()
        for sub in ns.chain + ((tuple(range(1, self.n + 2))),):
            blocks.append(tuple(sorted(set(sub) - set(prev))))
            prev = sub
        out = []
        for v in self.vertices:
            lo = 0
            good = True
            for block in blocks:
                vals = sorted(v[i - 1] for i in block)
                if vals != list(range(lo + 1, lo + len(block) + 1)):
                    good = False
                    break
                lo += len(block)
            if good:
                out.append(v)
        return out


@dataclass(frozen=True)
class SimplexRealization:
    """The tight enclosing simplex {x_i >= 1, sum x = total}."""

    n: int
    total: int
    vertices: tuple[tuple[int, ...], ...]

    def contains(self, point: Sequence, tol: float = 1e-9) -> bool:
        if len(point) != self.n + 1:
            raise InputError("point has wrong length")
        pt = [Fraction(x) for x in point]
        if abs(sum(pt) - self.total) > Fraction(tol).limit_denominator(10**15):
            return False
        bound = Fraction(1) - Fraction(tol).limit_denominator(10**15)
        return all(x >= bound for x in pt)

    def face_of(self, face: SimplexFace):
        if face.n != self.n:
            raise InputError("face does not match this simplex")
        return face


def realize(n: int) -> PermRealization:
    if n < 1:
        raise InputError("n must be positive")
    if n > 6:
        raise ResourceError(f"realization capped at n = 6, got {n}")
    verts = tuple(sorted(itertools.permutations(range(1, n + 2))))
    return PermRealization(n=n, total=plane_total(n), vertices=verts)


def realize_simplex(n: int) -> SimplexRealization:
    if n < 1:
        raise InputError("n must be positive")
    if n > 6:
        raise ResourceError(f"realization capped at n = 6, got {n}")
    m = plane_total(n)
    verts = []
    for i in range(n + 1):
        v = [1] * (n + 1)
        v[i] = m - n
        verts.append(tuple(v))
    return SimplexRealization(n=n, total=m, vertices=tuple(verts))


# ---------------------------------------------------------------------------
# nearest-point projection onto the permutahedron
# ---------------------------------------------------------------------------


def _project_affine(
    x: list[Fraction], constraints: list[tuple[tuple[int, ...], int]], n1: int
) -> list[Fraction] | None:
    """Euclidean projection of x onto {z : sum_{i in S} z_i = level}."""
    rows = []
    rhs = []
    for subset, level in constraints:
        rows.append(tuple(Fraction(int(i + 1 in subset)) for i in range(n1)))
        rhs.append(Fraction(level))
    # z = x + A^T mu with (A A^T) mu = b - A x
    gram = tuple(
        tuple(sum(r1[k] * r2[k] for k in range(n1)) for r2 in rows) for r1 in rows
    )
    resid = tuple(
        b - sum(r[k] * x[k] for k in range(n1)) for r, b in zip(rows, rhs)
    )
    mu = _solve(gram, resid)
    if mu is None:
        return None
    return [
        x[k] + sum(m * r[k] for m, r in zip(mu, rows)) for k in range(n1)
    ]


def closest_point_map(point: Sequence, realization: PermRealization) -> tuple:
    """Exact euclidean nearest point of the permutahedron.

    Enumerates every face (all chains, plus the whole polytope), solves
    the equality-constrained projection rationally, keeps the feasible
    candidates, and returns the closest.  The input must lie in the
    enclosing simplex.
    """
    n = realization.n
    if n > 4:
        raise ResourceError("projection capped at n = 4")
    n1 = n + 1
    if len(point) != n1:
        raise InputError("point has wrong length")
    x = [Fraction(p) for p in point]
    m = realization.total
    tol = Fraction(1, 10**9)
    if abs(sum(x) - m) > tol or any(xi < 1 - tol for xi in x):
        raise DomainError("point must lie in the enclosing simplex")

    subsets = proper_subsets(n)
    if all(realization.slack(x, s) >= 0 for s in subsets) and sum(x) == m:
        return tuple(x)

    best = None
    best_d = None
    total_constraint = (tuple(range(1, n1 + 1)), m)
    for face in [None] + all_faces(n):
        constraints = [total_constraint]
        if face is not None:
            for sub in face.chain:
                constraints.append((sub, subset_level(len(sub))))
        z = _project_affine(x, constraints, n1)
        if z is None:
            continue
        if any(
            sum(z[i - 1] for i in s) < subset_level(len(s)) for s in subsets
        ):
            continue
        d = sum((a - b) ** 2 for a, b in zip(z, x))
        if best_d is None or d < best_d:
            best, best_d = z, d
    # the projection onto a nonempty closed convex set always exists, and
    # it lies on some face, so the sweep cannot come up empty
    assert best is not None
    return tuple(best)


# ---------------------------------------------------------------------------
# collapse map onto the simplex
# ---------------------------------------------------------------------------


def collapse_to_simplex(point: Sequence, realization: PermRealization) -> tuple:
    """Slack-damped collapse of the permutahedron onto the simplex.

    Coordinates whose tightest containing constraint has slack below
    DAMPING_SLACK are pulled toward the lower bound 1 (reaching it
    exactly when the constraint is tight), and the lost mass is
    redistributed over the undamped coordinates.  On each face the
    pinned coordinates land exactly at 1, and points whose slacks all
    clear DAMPING_SLACK are fixed, so the map restricts to the identity
    on the deep interior.
    """
    n = realization.n
    n1 = n + 1
    if len(point) != n1:
        raise InputError("point has wrong length")
    y = [Fraction(p) for p in point]
    if not realization.contains(y, tol=Fraction(1, 10**9)):
        raise DomainError("collapse input must lie in the permutahedron")
    m = realization.total
    slacks = {s: realization.slack(y, s) for s in proper_subsets(n)}
    weights = []
    for i in range(1, n1 + 1):
        g = min(slacks[s] for s in slacks if i in s)
        w = min(Fraction(1), max(Fraction(0), g / DAMPING_SLACK))
        weights.append(w)
    pulled = [1 + (yi - 1) * w for yi, w in zip(y, weights)]
    spare = m - sum(pulled)
    wsum = sum(weights)
    # the tight subsets at any point form a chain of proper subsets, so
    # they never cover every coordinate and wsum stays positive
    assert wsum > 0
    return tuple(p + spare * w / wsum for p, w in zip(pulled, weights))


def _collapse_batch_arrays(n: int, subsets: list[tuple[int, ...]], m: int):
    masks = np.zeros((len(subsets), n + 1), dtype=bool)
    levels = np.empty(len(subsets))
    for r, s in enumerate(subsets):
        for i in s:
            masks[r, i - 1] = True
        levels[r] = subset_level(len(s))
    return masks, levels


def collapse_batch(realization: PermRealization) -> Callable[[np.ndarray], np.ndarray]:
    """Vectorized float version of collapse_to_simplex for sampling."""
    n = realization.n
    subsets = proper_subsets(n)
    masks, levels = _collapse_batch_arrays(n, subsets, realization.total)
    eps = float(DAMPING_SLACK)
    m = float(realization.total)

    def apply(pts: np.ndarray) -> np.ndarray:
        pts = np.asarray(pts, dtype=float)
        slacks = pts @ masks.T - levels  # (k, n_subsets)
        g = np.full(pts.shape, np.inf)
        for r in range(masks.shape[0]):
            cols = masks[r]
            g[:, cols] = np.minimum(g[:, cols], slacks[:, r : r + 1])
        w = np.clip(g / eps, 0.0, 1.0)
        pulled = 1.0 + (pts - 1.0) * w
        spare = m - pulled.sum(axis=1)
        wsum = w.sum(axis=1)
        return pulled + (spare / wsum)[:, None] * w

    return apply


# ---------------------------------------------------------------------------
# boundary-fixing perturbations and a deliberately broken map
# ---------------------------------------------------------------------------


def _radial_parameter(pts: np.ndarray, center: np.ndarray) -> np.ndarray:
    """lambda in [0,1]: 0 at the simplex center, 1 on the boundary."""
    v = pts - center
    with np.errstate(divide="ignore", invalid="ignore"):
        ratios = np.where(v < 0, (1.0 - center) / v, np.inf)
    t_star = ratios.min(axis=1)
    lam = np.where(np.isfinite(t_star), 1.0 / t_star, 0.0)
    return np.clip(lam, 0.0, 1.0)


def radial_perturbation(
    n: int, coefficient: float
) -> Callable[[np.ndarray], np.ndarray]:
    """Simplex self-map fixing the boundary: radial reparametrization
    lambda -> lambda + c*lambda*(1 - lambda), a bijection for |c| < 1."""
    if not -1.0 < coefficient < 1.0:
        raise InputError("radial coefficient must be in (-1, 1)")
    m = plane_total(n)
    center = np.full(n + 1, m / (n + 1))

    def apply(pts: np.ndarray) -> np.ndarray:
        pts = np.asarray(pts, dtype=float)
        lam = _radial_parameter(pts, center)
        scale = 1.0 + coefficient * (1.0 - lam)
        return center + scale[:, None] * (pts - center)

    return apply


def twist_perturbation(n: int, angle: float) -> Callable[[np.ndarray], np.ndarray]:
    """Boundary-fixing twist of the 2-simplex: rotate the direction from
    the center by angle*(1 - lambda) at constant radial parameter."""
    if n != 2:
        raise InputError("twist perturbation is implemented for n = 2 only")
    m = plane_total(n)
    center = np.full(3, m / 3.0)
    basis = _hyperplane_basis(n)  # (2, 3)

    def boundary_scale(dirs: np.ndarray) -> np.ndarray:
        with np.errstate(divide="ignore", invalid="ignore"):
            ratios = np.where(dirs < 0, (1.0 - center) / dirs, np.inf)
        return ratios.min(axis=1)

    def apply(pts: np.ndarray) -> np.ndarray:
        pts = np.asarray(pts, dtype=float)
        v = pts - center
        lam = _radial_parameter(pts, center)
        uv = v @ basis.T  # in-plane coordinates
        theta = angle * (1.0 - lam)
        cos, sin = np.cos(theta), np.sin(theta)
        rotated = np.stack(
            [cos * uv[:, 0] - sin * uv[:, 1], sin * uv[:, 0] + cos * uv[:, 1]],
            axis=1,
        )
        new_dir = rotated @ basis
        out = np.tile(center, (len(pts), 1))
        nz = np.linalg.norm(new_dir, axis=1) > 1e-14
        unit = new_dir[nz] / np.linalg.norm(new_dir[nz], axis=1, keepdims=True)
        # keep the radial parameter, swap in the rotated direction
        out[nz] = center + (lam[nz] * boundary_scale(unit))[:, None] * unit
        return out

    return apply


def shrink_map(n: int, factor: float) -> Callable[[np.ndarray], np.ndarray]:
    """Pull everything toward the simplex center: breaks the face
    condition and leaves a neighborhood of the boundary uncovered."""
    m = plane_total(n)
    center = np.full(n + 1, m / (n + 1))

    def apply(pts: np.ndarray) -> np.ndarray:
        pts = np.asarray(pts, dtype=float)
        return center + factor * (pts - center)

    return apply


def _hyperplane_basis(n: int) -> np.ndarray:
    """Orthonormal basis (rows) of {v : sum v = 0} in R^{n+1}."""
    ones = np.ones((1, n + 1))
    _, _, vt = np.linalg.svd(ones)
    return vt[1:]


# ---------------------------------------------------------------------------
# sampled surjectivity check
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class FaceViolation:
    chain: NestedSequence
    point: tuple[float, ...]
    image: tuple[float, ...]


@dataclass(frozen=True)
class CoverageReport:
    ok: bool
    grid_points: int
    covered: int
    uncovered_witness: tuple[float, ...] | None
    max_gap: float
    face_violations: tuple[FaceViolation, ...]
    samples_used: int

    def __str__(self):
        lines = [
            f"grid nodes {self.grid_points}, covered {self.covered},"
            f" max gap {self.max_gap:.3g}"
        ]
        if self.uncovered_witness is not None:
            lines.append(f"uncovered witness: {self.uncovered_witness}")
        for v in self.face_violations[:5]:
            lines.append(f"face condition broken on {v.chain}: {v.point} -> {v.image}")
        lines.append("PASS" if self.ok else "FAIL")
        return "\n".join(lines)


def _sample_polytope(realization: PermRealization, step: float) -> np.ndarray:
    """Grid sample of the permutahedron in its hyperplane, plus dense
    samples of every facet so images track the simplex boundary."""
    n = realization.n
    basis = _hyperplane_basis(n)
    center = np.full(n + 1, realization.total / (n + 1))
    verts = np.array(realization.vertices, dtype=float)
    plane = (verts - center) @ basis.T
    lo = plane.min(axis=0) - step
    hi = plane.max(axis=0) + step
    axes = [np.arange(lo[i], hi[i] + step, step) for i in range(n)]
    mesh = np.meshgrid(*axes, indexing="ij")
    coords = np.stack([m.ravel() for m in mesh], axis=1)
    pts = center + coords @ basis
    subsets = proper_subsets(n)
    masks, levels = _collapse_batch_arrays(n, subsets, realization.total)
    interior = pts[(pts @ masks.T - levels >= -1e-12).all(axis=1)]

    boundary = []
    if n == 2:
        t = np.linspace(0.0, 1.0, 2001)[:, None]
        for ns in enumerate_faces(2, 1):
            fv = realization.vertices_of_face(ns)
            a, b = (np.array(v, dtype=float) for v in fv)
            boundary.append(a + t * (b - a))
    else:
        rng = np.random.default_rng(1729)
        for ns in enumerate_faces(n, 1):
            fv = np.array(realization.vertices_of_face(ns), dtype=float)
            bary = rng.dirichlet(np.ones(len(fv)), size=4000)
            boundary.append(bary @ fv)
    return np.concatenate([interior] + boundary, axis=0)


def _simplex_grid(n: int, step: float) -> np.ndarray:
    m = plane_total(n)
    k_total = (m - (n + 1)) / step
    k = int(round(k_total))
    if abs(k - k_total) > 1e-9:
        raise InputError(f"grid step {step} must divide {m - (n + 1)} evenly")
    if (k + 1) ** n > 4 * 10**7:
        raise ResourceError("grid too fine for this dimension")
    axes = np.meshgrid(*[np.arange(k + 1)] * n, indexing="ij")
    ks = np.stack([a.ravel() for a in axes], axis=1)
    ks = ks[ks.sum(axis=1) <= k]
    last = k - ks.sum(axis=1)
    grid = np.concatenate([ks, last[:, None]], axis=1).astype(float)
    return 1.0 + step * grid


def check_face_mapping_surjectivity(
    f: Callable[[np.ndarray], np.ndarray],
    n: int,
    grid_step: float,
    sample_step: float | None = None,
    face_tol: float = 1e-7,
    face_samples: int = 40,
    seed: int = 0,
) -> CoverageReport:
    """Desk-scale surjectivity proxy for a map of the permutahedron onto
    the simplex.

    First verifies the face condition on sampled points of every proper
    face (images must pin the coordinates of the chain's largest subset),
    then checks that every simplex grid node at spacing grid_step has an
    image point within grid_step.  f must accept an (k, n+1) array of
    points and return the mapped array.
    """
    from scipy.spatial import cKDTree

    if n > 3:
        raise ResourceError("coverage check capped at n = 3")
    realization = realize(n)
    if sample_step is None:
        sample_step = grid_step / 10.0

    rng = np.random.default_rng(seed)
    violations = []
    for ns in all_faces(n):
        fv = np.array(realization.vertices_of_face(ns), dtype=float)
        bary = rng.dirichlet(np.ones(len(fv)), size=face_samples)
        pts = bary @ fv
        pts = np.concatenate([pts, fv], axis=0)
        images = np.asarray(f(pts), dtype=float)
        pinned = [i - 1 for i in ns.chain[-1]]
        bad = np.abs(images[:, pinned] - 1.0).max(axis=1) > face_tol
        if bad.any():
            idx = int(np.argmax(bad))
            violations.append(
                FaceViolation(ns, tuple(pts[idx]), tuple(images[idx]))
            )

    samples = _sample_polytope(realization, sample_step)
    images = np.asarray(f(samples), dtype=float)
    grid = _simplex_grid(n, grid_step)
    tree = cKDTree(images)
    dist, _ = tree.query(grid, k=1)
    covered = dist <= grid_step
    witness = None
    if not covered.all():
        witness = tuple(grid[int(np.argmin(covered))])
    ok = covered.all() and not violations
    return CoverageReport(
        ok=bool(ok),
        grid_points=len(grid),
        covered=int(covered.sum()),
        uncovered_witness=witness,
        max_gap=float(dist.max()),
        face_violations=tuple(violations),
        samples_used=len(samples),
    )


# ---------------------------------------------------------------------------
# boundary samples where collapse-after-projection restores the input
# ---------------------------------------------------------------------------


def identity_boundary_samples(n: int, count: int, seed: int = 0) -> list[tuple]:
    """Rational points on the simplex boundary fixed by projection
    followed by collapse.

    These live in the middle of each facet: the pinned coordinate is at
    the bound and all other slacks clear the damping threshold, so the
    projection returns the point itself and the collapse moves nothing.
    Boundary regions cut off by the truncation (near simplex corners and
    all faces of codimension 2 and higher) are genuinely not fixed; see
    the module tests for the corner behavior.
    """
    if n not in (2, 3):
        raise InputError("identity sampling implemented for n in {2, 3}")
    import random as _random

    rng = _random.Random(seed)
    m = plane_total(n)
    out = []
    for k in range(count):
        facet = k % (n + 1)  # pinned coordinate index, 0-based
        if n == 2:
            # free coordinates in [2.3, 2.7], summing to m - 1 = 5
            a = Fraction(rng.randint(2300, 2700), 1000)
            free = [a, Fraction(5) - a]
        else:
            # free coordinates near 3, inside [2.4, 3.6], summing to 9
            a = Fraction(rng.randint(2700, 3300), 1000)
            b = Fraction(rng.randint(2700, 3300), 1000)
            free = [a, b, Fraction(9) - a - b]
        point = []
        it = iter(free)
        for i in range(n + 1):
            point.append(Fraction(1) if i == facet else next(it))
        out.append(tuple(point))
    return out


# ---------------------------------------------------------------------------
# export
# ---------------------------------------------------------------------------


def export_json(n: int) -> dict:
    """Vertices and the full face lattice, exact integer data."""
    if n > 4:
        raise ResourceError("face-lattice export capped at n = 4")
    realization = realize(n)
    vert_index = {v: i for i, v in enumerate(realization.vertices)}
    faces = []
    for ns in all_faces(n):
        fv = realization.vertices_of_face(ns)
        faces.append(
            {
                "chain": [list(s) for s in ns.chain],
                "dim": ns.dim(),
                "vertices": sorted(vert_index[v] for v in fv),
            }
        )
    return {
        "n": n,
        "plane_total": realization.total,
        "vertices": [list(v) for v in realization.vertices],
        "faces": faces,
    }


def export_off(n: int) -> str:
    """OFF mesh of the realization, n <= 3 (planar polygon for n = 2)."""
    if n not in (2, 3):
        raise InputError("OFF export needs n = 2 or 3")
    realization = realize(n)
    verts = np.array(realization.vertices, dtype=float)
    if n == 2:
        coords = verts
    else:
        basis = _hyperplane_basis(3)
        center = verts.mean(axis=0)
        coords = (verts - center) @ basis.T
    vert_index = {v: i for i, v in enumerate(realization.vertices)}

    polygons = []
    if n == 2:
        # the whole hexagon is the unique polygon
        c = coords.mean(axis=0)
        u = coords - c
        ref = u[0] / np.linalg.norm(u[0])
        second = np.cross(np.ones(3) / math.sqrt(3.0), ref)
        angles = np.arctan2(u @ second, u @ ref)
        polygons = [[int(i) for i in np.argsort(angles)]]
        edge_count = len(coords)
    else:
        centroid_all = coords.mean(axis=0)
        for ns in enumerate_faces(n, 1):
            fv = realization.vertices_of_face(ns)
            idx = [vert_index[v] for v in fv]
            pts = coords[idx]
            c = pts.mean(axis=0)
            normal = c - centroid_all
            normal /= np.linalg.norm(normal)
            u = pts - c
            u -= np.outer(u @ normal, normal)
            ref = u[0] / np.linalg.norm(u[0])
            second = np.cross(normal, ref)
            angles = np.arctan2(u @ second, u @ ref)
            order = np.argsort(angles)
            polygons.append([idx[i] for i in order])
        edge_count = sum(len(p) for p in polygons) // 2
    lines = ["OFF", f"{len(coords)} {len(polygons)} {edge_count}"]
    for row in coords:
        lines.append(" ".join(f"{x:.12g}" for x in row))
    for poly in polygons:
        lines.append(str(len(poly)) + " " + " ".join(str(i) for i in poly))
    return "\n".join(lines) + "\n"
