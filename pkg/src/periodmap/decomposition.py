"""Dimension bookkeeping for a space split along a separating hypersurface.

The input is the algebraic shadow of the split: compactly supported
classes of the two pieces (H1, H2), the isotropic image D of the
connecting map, and the two relative second Betti numbers.  The module
checks the additivity identities, completes D to a sum of hyperbolic
planes, and forms the maximal semi-positive subspace that the stretched
family of metrics limits to.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction

from .bilinear import (
    GramForm,
    Signature,
    Subspace,
    _identity,
    _mat_mul,
    _mat_vec,
    _solve,
    _transpose,
    signature,
    subspace_intersect,
    subspace_signature,
    subspace_sum,
    sym_diagonalize,
)
from .errors import InconsistentDataError, InputError, PreconditionError

Vector = tuple[Fraction, ...]


@dataclass(frozen=True)
class DecompositionData:
    """Split data: pairwise orthogonal H1, H2 and isotropic D inside ambient.

    bhat1 and bhat2 are the relative Betti numbers of the two pieces.
    They are independent inputs: the dimension identity relating them to
    the ambient dimension is a check, not a consequence of the subspace
    data.
    """

    ambient: GramForm
    H1: Subspace
    H2: Subspace
    D: Subspace
    bhat1: int
    bhat2: int

    def __post_init__(self):
        for name in ("H1", "H2", "D"):
            sub = getattr(self, name)
            if sub.ambient != self.ambient:
                raise InputError(f"{name} does not live in the ambient form")
        if self.bhat1 < 0 or self.bhat2 < 0:
            raise InputError("relative Betti numbers must be non-negative")

    def to_json(self) -> dict:
        return {
            "ambient": self.ambient.to_json(),
            "H1": self.H1.to_json(include_ambient=False),
            "H2": self.H2.to_json(include_ambient=False),
            "D": self.D.to_json(include_ambient=False),
            "bhat1": self.bhat1,
            "bhat2": self.bhat2,
        }

    @staticmethod
    def from_json(data: dict) -> "DecompositionData":
        if not isinstance(data, dict):
            raise InputError("decomposition JSON must be an object")
        missing = {"ambient", "H1", "H2", "D", "bhat1", "bhat2"} - set(data)
        if missing:
            raise InputError(f"decomposition JSON missing keys: {sorted(missing)}")
        ambient = GramForm.from_json(data["ambient"])
        return DecompositionData(
            ambient=ambient,
            H1=Subspace.from_json(data["H1"], ambient),
            H2=Subspace.from_json(data["H2"], ambient),
            D=Subspace.from_json(data["D"], ambient),
            bhat1=int(data["bhat1"]),
            bhat2=int(data["bhat2"]),
        )


@dataclass(frozen=True)
class ValidationIssue:
    condition: str
    witness: tuple[Vector, Vector]

    def __str__(self):
        a, b = self.witness
        return f"{self.condition}: witness {tuple(map(str, a))}, {tuple(map(str, b))}"


@dataclass(frozen=True)
class ValidationReport:
    issues: tuple[ValidationIssue, ...] = field(default=())

    @property
    def ok(self) -> bool:
        return not self.issues

    def __str__(self):
        if self.ok:
            return "valid"
        return "\n".join(str(i) for i in self.issues)


def _radical_witness(sub: Subspace) -> Vector | None:
    from .bilinear import nullspace

    rad = nullspace(sub)
    return rad.canonical[0] if not rad.is_zero() else None


def validate(data: DecompositionData) -> ValidationReport:
    """Check every structural condition, collecting witnesses for failures.

    Failures are report entries rather than exceptions so that a single
    pass surfaces everything wrong with the input.
    """
    issues = []
    q = data.ambient
    for name, sub in (("H1", data.H1), ("H2", data.H2)):
        w = _radical_witness(sub)
        if w is not None:
            issues.append(
                ValidationIssue(f"pairing degenerate on {name}", (w, w))
            )
    done = False
    for h1 in data.H1.basis:
        for h2 in data.H2.basis:
            if q.evaluate(h1, h2) != 0:
                issues.append(ValidationIssue("H1 not orthogonal to H2", (h1, h2)))
                done = True
                break
        if done:
            break
    done = False
    for i, d1 in enumerate(data.D.basis):
        for d2 in data.D.basis[i:]:
            if q.evaluate(d1, d2) != 0:
                issues.append(ValidationIssue("pairing not trivial on D", (d1, d2)))
                done = True
                break
        if done:
            break
    done = False
    for d in data.D.basis:
        for h in data.H1.basis + data.H2.basis:
            if q.evaluate(d, h) != 0:
                issues.append(ValidationIssue("D not orthogonal to H1 + H2", (d, h)))
                done = True
                break
        if done:
            break
    h1h2 = subspace_sum(data.H1, data.H2)
    overlap = subspace_intersect(data.H1, data.H2)
    if overlap.is_zero():
        overlap = subspace_intersect(h1h2, data.D)
    if not overlap.is_zero():
        w = overlap.canonical[0]
        issues.append(ValidationIssue("H1 + H2 + D is not a direct sum", (w, w)))
    return ValidationReport(tuple(issues))


def _require_valid(data: DecompositionData) -> None:
    report = validate(data)
    if not report.ok:
        raise PreconditionError(f"invalid decomposition data: {report}")


def check_betti_identity(data: DecompositionData) -> bool:
    """Whole = piece + piece + twice the connecting image, in dimensions."""
    _require_valid(data)
    return data.ambient.dim == data.bhat1 + data.bhat2 + 2 * data.D.dim


def check_bpm_identity(data: DecompositionData) -> bool:
    """Signature additivity: each of b+ and b- splits as H1 + H2 + dim D."""
    _require_valid(data)
    amb = signature(data.ambient)
    s1 = subspace_signature(data.H1)
    s2 = subspace_signature(data.H2)
    k = data.D.dim
    return (
        amb.b_plus == s1.b_plus + s2.b_plus + k
        and amb.b_minus == s1.b_minus + s2.b_minus + k
    )


@dataclass(frozen=True)
class HyperbolicComplement:
    """Dual subspace W completing D to a sum of hyperbolic planes.

    pairing_matrix is the Gram matrix of the restricted pairing in the
    interleaved basis d1, w1, d2, w2, ...; the construction makes it
    exactly block diagonal with [[0,1],[1,0]] blocks.
    """

    W: Subspace
    pairing_matrix: tuple[Vector, ...]


def hyperbolic_complement(data: DecompositionData) -> HyperbolicComplement:
    """Solve for a dual of D that is null, normalized, and clears H1 + H2.

    Each dual vector w_j satisfies Q(d_i, w_j) = delta_ij and is
    orthogonal to H1 + H2; cross terms Q(w_j, w_i) for i < j are removed
    with d_i shifts and the self-pairing with the shift
    w_j -> w_j - (1/2) Q(w_j, w_j) d_j, processed in index order.
    """
    _require_valid(data)
    if not (check_betti_identity(data) and check_bpm_identity(data)):
        raise PreconditionError("dimension identities fail; complement undefined")
    q = data.ambient
    n = q.dim
    d_basis = list(data.D.basis)
    side = list(data.H1.basis) + list(data.H2.basis)
    rows = [_mat_vec(q.gram, d) for d in d_basis] + [
        _mat_vec(q.gram, s) for s in side
    ]
    ws: list[Vector] = []
    for j in range(len(d_basis)):
        rhs = [Fraction(int(i == j)) for i in range(len(d_basis))] + [
            Fraction(0)
        ] * len(side)
        w = _solve(rows, rhs)
        if w is None:
            raise InconsistentDataError(
                f"no dual vector for D basis vector {j}; data violates the split"
            )
        for i, prev in enumerate(ws):
            c = q.evaluate(w, prev)
            if c != 0:
                w = tuple(x - c * d for x, d in zip(w, d_basis[i]))
        self_pair = q.evaluate(w, w)
        if self_pair != 0:
            half = self_pair / 2
            w = tuple(x - half * d for x, d in zip(w, d_basis[j]))
        ws.append(w)

    w_sub = Subspace.spanned_by(q, ws)
    if w_sub.dim != len(d_basis):
        raise InconsistentDataError("dual vectors are dependent")
    total = subspace_sum(subspace_sum(data.H1, data.H2), subspace_sum(data.D, w_sub))
    if total.dim != n:
        raise InconsistentDataError(
            f"H1 + H2 + D + W spans only {total.dim} of {n} dimensions"
        )
    inter = []
    for d, w in zip(d_basis, ws):
        inter.extend([d, w])
    pairing = tuple(
        tuple(q.evaluate(a, b) for b in inter) for a in inter
    )
    return HyperbolicComplement(W=Subspace(q, ws), pairing_matrix=pairing)


def _is_maximal_positive_in(
    part: Subspace, whole: Subspace, d: Subspace, name: str
) -> None:
    # membership is only required modulo D: shifting a representative by
    # isotropic D vectors changes nothing downstream
    if not subspace_sum(whole, d).contains_subspace(part):
        raise PreconditionError(f"{name} is not contained in its piece (mod D)")
    sig = subspace_signature(part)
    if sig != Signature(part.dim, 0, 0):
        raise PreconditionError(f"{name} is not positive definite")
    if part.dim != subspace_signature(whole).b_plus:
        raise PreconditionError(f"{name} is not maximal positive in its piece")


def limit_period_subspace(
    data: DecompositionData, H1plus: Subspace, H2plus: Subspace
) -> Subspace:
    """Semi-positive subspace the period points converge to under stretching.

    The result is H1plus + D + H2plus.  Its positive part has dimension
    b_plus(ambient) - dim D and its radical is exactly D, so it lies on
    the boundary of the positive grassmannian precisely when D is
    nonzero.
    """
    _require_valid(data)
    if not check_bpm_identity(data):
        raise PreconditionError("signature additivity fails for this data")
    _is_maximal_positive_in(H1plus, data.H1, data.D, "H1plus")
    _is_maximal_positive_in(H2plus, data.H2, data.D, "H2plus")
    out = subspace_sum(subspace_sum(H1plus, H2plus), data.D)
    k = data.D.dim
    bp = signature(data.ambient).b_plus
    sig = subspace_signature(out)
    if out.dim != bp or sig != Signature(bp - k, 0, k):
        raise InconsistentDataError(
            f"limit subspace has signature {tuple(sig)}, expected ({bp - k}, 0, {k})"
        )
    return out


def default_positive_part(sub: Subspace) -> Subspace:
    """Maximal positive subspace of a piece, from exact diagonalization."""
    if sub.is_zero():
        return sub
    t, diag = sym_diagonalize(sub.restricted_gram())
    cols = list(zip(*t))
    amb = sub.ambient
    vecs = []
    for idx, d in enumerate(diag):
        if d > 0:
            coeff = cols[idx]
            vec = [Fraction(0)] * amb.dim
            for c, bv in zip(coeff, sub.basis):
                for k in range(amb.dim):
                    vec[k] += c * bv[k]
            vecs.append(tuple(vec))
    return Subspace.spanned_by(amb, vecs)


# ---------------------------------------------------------------------------
# worked splits and the fuzz generator
# ---------------------------------------------------------------------------


def connected_sum_split() -> DecompositionData:
    """Two one-piece summands glued along a sphere: diag(1, -1), D = 0."""
    q = GramForm([[1, 0], [0, -1]])
    return DecompositionData(
        ambient=q,
        H1=q.subspace([(1, 0)]),
        H2=q.subspace([(0, 1)]),
        D=q.zero_subspace(),
        bhat1=1,
        bhat2=1,
    )


def product_split() -> DecompositionData:
    """A product split along a circle times a sphere: hyperbolic pairing,
    H1 = H2 = 0 and D spanned by one factor class."""
    q = GramForm([[0, 1], [1, 0]])
    return DecompositionData(
        ambient=q,
        H1=q.zero_subspace(),
        H2=q.zero_subspace(),
        D=q.subspace([(1, 0)]),
        bhat1=0,
        bhat2=0,
    )


def _random_unimodular(rng: random.Random, n: int, steps: int = 12) -> tuple:
    m = [list(row) for row in _identity(n)]
    for _ in range(steps):
        i = rng.randrange(n)
        j = rng.randrange(n)
        if i == j:
            continue
        c = Fraction(rng.choice([-2, -1, 1, 2]))
        for k in range(n):
            m[i][k] += c * m[j][k]
    return tuple(tuple(row) for row in m)


def random_decomposition(
    rng: random.Random, max_dim: int = 8
) -> DecompositionData:
    """Valid split data with known ground truth, then disguised.

    The pairing is built block diagonal from a nondegenerate block for
    each piece plus hyperbolic planes for D and its dual, so every
    identity holds by construction; a random unimodular change of basis
    hides the blocks.
    """
    while True:
        n1 = rng.randint(0, 3)
        n2 = rng.randint(0, 3)
        k = rng.randint(0, 2)
        n = n1 + n2 + 2 * k
        if 1 <= n <= max_dim:
            break
    diag_entries = [
        Fraction(rng.choice([1, 1, 2, -1, -1, -2, -3])) for _ in range(n1 + n2)
    ]
    gram = [[Fraction(0)] * n for _ in range(n)]
    for i, d in enumerate(diag_entries):
        gram[i][i] = d
    for b in range(k):
        i = n1 + n2 + 2 * b
        gram[i][i + 1] = Fraction(1)
        gram[i + 1][i] = Fraction(1)

    u = _random_unimodular(rng, n)
    # new pairing in the disguised coordinates x: x -> u x are old coords
    new_gram = _mat_mul(_mat_mul(_transpose(u), gram), u)
    q = GramForm(new_gram)

    u_inv_rows = _invert(u)
    def pull(idx: int) -> Vector:
        e = [Fraction(0)] * n
        e[idx] = Fraction(1)
        return _mat_vec(u_inv_rows, e)

    h1 = Subspace.spanned_by(q, [pull(i) for i in range(n1)])
    h2 = Subspace.spanned_by(q, [pull(n1 + i) for i in range(n2)])
    d = Subspace.spanned_by(q, [pull(n1 + n2 + 2 * b) for b in range(k)])
    return DecompositionData(
        ambient=q, H1=h1, H2=h2, D=d, bhat1=n1, bhat2=n2
    )


def _invert(m: tuple) -> tuple:
    from .bilinear import _mat_inverse

    return _mat_inverse(m)
