"""Hyperboloid model of the positive grassmannian of a (1, n) form.

When b+ = 1 the space of maximal positive-definite subspaces is the set
of positive lines, which meets the hyperboloid {x . x = 1, x0 > 0} in
exactly one point.  This module works with float coordinates in the
standard diagonal form (route general gram matrices through
``standard_embedding`` first) and classifies constraint loci of rational
subspaces exactly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Sequence

import numpy as np

from .bilinear import (
    GramForm,
    Signature,
    Subspace,
    as_vector,
    signature,
    subspace_signature,
    sym_diagonalize,
    nullspace as form_nullspace,
)
from .errors import (
    DomainError,
    NumericalDomainError,
    PreconditionError,
    ResolutionError,
)

DISTANCE_CLAMP = 1e-9


def mink_dot(v: Sequence[float], w: Sequence[float]) -> float:
    """x0*y0 - sum(xi*yi): the diagonal form of signature (1, n)."""
    return v[0] * w[0] - sum(a * b for a, b in zip(v[1:], w[1:]))


@dataclass(frozen=True)
class HPoint:
    """A point on the upper hyperboloid sheet in R^{1,n}."""

    coords: tuple[float, ...]

    def __post_init__(self):
        x = self.coords
        if len(x) < 2:
            raise DomainError("hyperboloid points need at least 2 coordinates")
        if abs(mink_dot(x, x) - 1.0) > 1e-7 or x[0] <= 0:
            raise DomainError(
                f"not on the upper hyperboloid sheet: {x} (norm {mink_dot(x, x):.3e})"
            )

    @property
    def n(self) -> int:
        return len(self.coords) - 1


def line_to_hpoint(v: Sequence[float]) -> HPoint:
    """Normalize a positive vector to its hyperboloid representative."""
    vv = [float(x) for x in v]
    norm = mink_dot(vv, vv)
    if norm <= 0:
        raise DomainError(f"vector is not positive: norm {norm}")
    scale = 1.0 / math.sqrt(norm)
    if vv[0] < 0:
        scale = -scale
    return HPoint(tuple(x * scale for x in vv))


def to_poincare_disk(p: HPoint) -> tuple[float, ...]:
    """Disk coordinates x_i / (1 + x_0); the image has euclidean norm < 1."""
    x = p.coords
    return tuple(xi / (1.0 + x[0]) for xi in x[1:])


def disk_to_hpoint(d: Sequence[float]) -> HPoint:
    """Inverse of the disk projection."""
    dd = [float(x) for x in d]
    r2 = sum(x * x for x in dd)
    if r2 >= 1.0:
        raise DomainError(f"disk point must have norm < 1, got |d|^2 = {r2}")
    denom = 1.0 - r2
    return HPoint(tuple([(1.0 + r2) / denom] + [2.0 * x / denom for x in dd]))


def hyperbolic_distance(p: HPoint, q: HPoint) -> float:
    """arccosh of the pairing, with a small clamp for round-off."""
    c = mink_dot(p.coords, q.coords)
    if c < 1.0 - DISTANCE_CLAMP:
        raise NumericalDomainError(
            f"pairing {c} below 1 beyond tolerance; inputs are not hyperboloid points"
        )
    return math.acosh(max(c, 1.0))


def ideal_point_direction(v: Sequence[float]) -> tuple[float, ...]:
    """Boundary-circle coordinates of a null direction."""
    vv = [float(x) for x in v]
    if abs(vv[0]) < 1e-12:
        raise DomainError("null direction has vanishing first coordinate")
    if vv[0] < 0:
        vv = [-x for x in vv]
    return tuple(x / vv[0] for x in vv[1:])


# ---------------------------------------------------------------------------
# constraint classification
# ---------------------------------------------------------------------------


class ConstraintKind(Enum):
    GEODESIC = "Geodesic"
    IDEAL_POINT = "IdealPoint"
    POINT = "Point"
    PRODUCT_GRASSMANNIAN = "ProductGrassmannian"


@dataclass(frozen=True)
class ConstraintSet:
    """Classified locus that a rational subspace imposes on the hyperboloid.

    ``kind`` depends only on the signature of the subspace, so it is
    stable under rescaling and base change.  ``vectors`` carry the
    defining data: spanning negative vectors for a geodesic wall, the
    null line for an ideal point, a canonical positive witness line for
    a point constraint.
    """

    kind: ConstraintKind
    vectors: tuple[tuple[Fraction, ...], ...]
    span: Subspace
    determined: bool = True

    def describe(self) -> str:
        tags = {
            ConstraintKind.GEODESIC: "wall of",
            ConstraintKind.IDEAL_POINT: "ideal point at",
            ConstraintKind.POINT: "point on",
            ConstraintKind.PRODUCT_GRASSMANNIAN: "product factor",
        }
        vecs = "; ".join("(" + ", ".join(str(x) for x in v) + ")" for v in self.vectors)
        extra = "" if self.determined else " (witness only)"
        return f"{self.kind.value}: {tags[self.kind]} {vecs}{extra}"


def _positive_witness(sub: Subspace) -> tuple[Fraction, ...]:
    """First positive vector from the exact diagonalization of the span."""
    gram = sub.restricted_gram()
    t, diag = sym_diagonalize(gram)
    cols = list(zip(*t))
    for idx, d in enumerate(diag):
        if d > 0:
            coeff = cols[idx]
            n = sub.ambient.dim
            vec = [Fraction(0)] * n
            for c, bv in zip(coeff, sub.basis):
                for k in range(n):
                    vec[k] += c * bv[k]
            return tuple(vec)
    raise PreconditionError("subspace has no positive vector")


def classify_span(sub: Subspace) -> ConstraintSet:
    """Type of the constraint a subspace puts on the positive line.

    The ambient form must have signature (1, n).  Negative definite
    spans constrain to their orthogonal wall, degenerate spans to the
    ideal point of their null line, and spans containing a positive
    vector pin the positive line into the span (a single point of the
    hyperboloid when the span is a line; otherwise the witness line
    reported is the canonical one from exact diagonalization).  The
    full ambient imposes no constraint and is reported as the product
    description.
    """
    form = sub.ambient
    amb_sig = signature(form)
    n = form.dim - 1
    if amb_sig != Signature(1, n, 0):
        raise PreconditionError(
            f"classification needs ambient signature (1, {n}), got {tuple(amb_sig)}"
        )
    if sub.is_zero() or sub.dim > form.dim:
        raise DomainError("span dimension must be between 1 and the ambient dimension")
    sig = subspace_signature(sub)
    if sig.b_plus == 0 and sig.b_null == 0:
        return ConstraintSet(ConstraintKind.GEODESIC, sub.basis, sub)
    if sig.b_plus == 0:
        # in a (1, n) form the radical of a b+ = 0 span is a single null line
        null = form_nullspace(sub)
        return ConstraintSet(ConstraintKind.IDEAL_POINT, null.canonical, null)
    if sub.dim == form.dim:
        return ConstraintSet(
            ConstraintKind.PRODUCT_GRASSMANNIAN, sub.canonical, sub, determined=False
        )
    witness = _positive_witness(sub)
    return ConstraintSet(
        ConstraintKind.POINT, (witness,), sub, determined=(sub.dim == 1)
    )


# ---------------------------------------------------------------------------
# geodesic walls in the hyperbolic plane
# ---------------------------------------------------------------------------


def wall_subspace(sub: Subspace) -> Subspace:
    """The orthogonal complement carrying a geodesic constraint."""
    from .bilinear import orth_complement

    return orth_complement(sub)


def geodesic_endpoints(
    wall_normal: Sequence[float],
) -> tuple[tuple[float, float], tuple[float, float]]:
    """Ideal endpoints of the wall of a negative vector in R^{1,2}.

    The wall is the orthogonal plane, of signature (1, 1); its two null
    directions project to the boundary circle.  Endpoints are returned
    sorted by angle for determinism.
    """
    w = np.array([float(x) for x in wall_normal], dtype=float)
    if w.shape != (3,):
        raise DomainError("geodesic endpoints are defined for R^{1,2} walls")
    g = np.diag([1.0, -1.0, -1.0])
    if float(w @ g @ w) >= 0:
        raise DomainError("wall normal must be a negative vector")
    # orthonormal-ish basis of the orthogonal plane via projection
    basis = []
    for e in np.eye(3):
        r = e - (float(e @ g @ w) / float(w @ g @ w)) * w
        for b in basis:
            denom = float(b @ b)
            r = r - (float(r @ b) / denom) * b
        if float(r @ r) > 1e-12:
            basis.append(r)
        if len(basis) == 2:
            break
    b1, b2 = basis
    gram = np.array(
        [[b1 @ g @ b1, b1 @ g @ b2], [b2 @ g @ b1, b2 @ g @ b2]], dtype=float
    )
    vals, vecs = np.linalg.eigh(gram)
    # signature (1,1): one negative, one positive eigenvalue
    neg, pos = vals[0], vals[1]
    if not (neg < 0 < pos):
        raise NumericalDomainError(f"wall plane is not of signature (1,1): {vals}")
    e_neg = vecs[:, 0]
    e_pos = vecs[:, 1]
    out = []
    for s in (+1.0, -1.0):
        coeff = math.sqrt(-neg) * e_pos + s * math.sqrt(pos) * e_neg
        vec = coeff[0] * b1 + coeff[1] * b2
        out.append(ideal_point_direction(vec))
    out.sort(key=lambda p: math.atan2(p[1], p[0]))
    return out[0], out[1]


# ---------------------------------------------------------------------------
# rational approximation of positive subspaces
# ---------------------------------------------------------------------------


def _principal_angle_distance(a: np.ndarray, b: np.ndarray) -> float:
    """Largest principal angle between the column spans (euclidean)."""
    qa, _ = np.linalg.qr(a)
    qb, _ = np.linalg.qr(b)
    cos_sv = np.clip(np.linalg.svd(qa.T @ qb, compute_uv=False), -1.0, 1.0)
    theta = float(np.max(np.arccos(cos_sv))) if cos_sv.size else 0.0
    if theta < 0.5:
        # arccos loses half the significant digits near angle zero
        sin_sv = np.clip(
            np.linalg.svd(qb - qa @ (qa.T @ qb), compute_uv=False), 0.0, 1.0
        )
        theta = float(np.max(np.arcsin(sin_sv))) if sin_sv.size else 0.0
    return theta


def rational_orthogonal_approximation(
    form: GramForm,
    target_basis: Sequence[Sequence[float]],
    eps: float,
    max_denominator: int = 10**6,
) -> tuple[list[tuple[Fraction, ...]], int]:
    """Pairwise orthogonal rational vectors spanning a nearby positive span.

    ``target_basis`` spans a positive-definite subspace of ``form`` (in
    form coordinates, float or rational entries).  Entries are rounded
    by continued fractions under ``max_denominator``, re-orthogonalized
    exactly, and the result is accepted only if the largest principal
    angle to the target stays below ``eps``.  Returns the vectors and
    the least common multiple N of their denominators (so N times each
    vector is integral).

    Raises ResolutionError (with the achieved distance) when the
    denominator budget cannot reach ``eps``, and DomainError when the
    target is not positive definite.
    """
    rows = [[float(x) for x in v] for v in target_basis]
    if not rows:
        raise DomainError("target subspace must have positive dimension")
    a = np.array(rows, dtype=float).T  # columns span the target
    g = np.array([[float(x) for x in r] for r in form.gram])
    restricted = a.T @ g @ a
    eig = np.linalg.eigvalsh((restricted + restricted.T) / 2.0)
    if np.min(eig) <= 1e-9 * max(1.0, float(np.max(np.abs(eig)))):
        raise DomainError("target subspace is not positive definite")

    def attempt(bound: int):
        approx = [
            [Fraction(x).limit_denominator(bound) for x in row] for row in rows
        ]
        # exact Gram-Schmidt in the form's pairing
        ortho: list[list[Fraction]] = []
        for v in approx:
            cur = list(v)
            for u in ortho:
                uu = form.evaluate(u, u)
                if uu == 0:
                    return None
                c = form.evaluate(cur, u) / uu
                cur = [x - c * y for x, y in zip(cur, u)]
            if all(x == 0 for x in cur):
                return None
            ortho.append(cur)
        for u in ortho:
            if form.evaluate(u, u) <= 0:
                return None
        return ortho

    best = None
    best_dist = math.inf
    bound = 32
    while True:
        bound = min(bound, max_denominator)
        ortho = attempt(bound)
        if ortho is not None:
            b = np.array([[float(x) for x in u] for u in ortho], dtype=float).T
            dist = _principal_angle_distance(a, b)
            if dist < best_dist:
                best, best_dist = ortho, dist
            if dist <= eps:
                break
        if bound == max_denominator:
            raise ResolutionError(
                f"cannot reach distance {eps} with denominators <= {max_denominator}"
                f" (achieved {best_dist})",
                achieved=best_dist,
            )
        bound *= 32

    lcm = 1
    for u in best:
        for x in u:
            lcm = lcm * x.denominator // math.gcd(lcm, x.denominator)
    return [tuple(x for x in u) for u in best], lcm
