"""Exact calculus for symmetric bilinear forms over the rationals.

Everything in this module is computed with ``fractions.Fraction``; no
floating point enters signature, complement, or intersection results.
A form is a symmetric gram matrix on coordinate space, a subspace is a
rational span inside it, and signatures are obtained by congruence
(symmetric Gauss) diagonalization, so Sylvester's law makes them basis
independent.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, NamedTuple, Sequence

from .errors import DimensionMismatchError, InputError, PreconditionError

Vector = tuple[Fraction, ...]
Matrix = tuple[Vector, ...]


def _frac(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        try:
            return Fraction(x)
        except (ValueError, ZeroDivisionError) as exc:
            raise InputError(f"not a rational literal: {x!r}") from exc
    if isinstance(x, float):
        if x != x or x in (float("inf"), float("-inf")):
            raise InputError(f"not a finite number: {x!r}")
        return Fraction(x).limit_denominator(10**12)
    raise InputError(f"cannot interpret {type(x).__name__} as a rational")


def as_vector(entries: Iterable) -> Vector:
    return tuple(_frac(e) for e in entries)


def _zero_vector(n: int) -> Vector:
    return tuple(Fraction(0) for _ in range(n))


# ---------------------------------------------------------------------------
# bare rational matrix routines (rows are tuples of Fractions)
# ---------------------------------------------------------------------------


def _rref(rows: Sequence[Vector]) -> tuple[list[Vector], list[int]]:
    """Reduced row echelon form; returns (nonzero rows, pivot columns).

    Pivots are chosen left to right, ties among rows broken by the first
    row with a nonzero entry, which makes the output canonical for a
    given row span.
    """
    m = [list(r) for r in rows]
    if not m:
        return [], []
    ncols = len(m[0])
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        pivot_row = None
        for i in range(r, len(m)):
            if m[i][c] != 0:
                pivot_row = i
                break
        if pivot_row is None:
            continue
        m[r], m[pivot_row] = m[pivot_row], m[r]
        inv = m[r][c]
        m[r] = [v / inv for v in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    out = [tuple(row) for row in m[:r]]
    return out, pivots


def _rank(rows: Sequence[Vector]) -> int:
    return len(_rref(rows)[0])


def _kernel(rows: Sequence[Vector], ncols: int) -> list[Vector]:
    """Basis of {x : rows @ x = 0}, from the free columns of the RREF."""
    red, pivots = _rref(rows)
    pivot_set = set(pivots)
    free = [c for c in range(ncols) if c not in pivot_set]
    basis = []
    for f in free:
        v = [Fraction(0)] * ncols
        v[f] = Fraction(1)
        for row, p in zip(red, pivots):
            v[p] = -row[f]
        basis.append(tuple(v))
    return basis


def _solve(rows: Sequence[Vector], rhs: Sequence[Fraction]) -> Vector | None:
    """One solution of rows @ x = rhs, or None if inconsistent.

    Free variables are set to zero, so the answer is canonical.
    """
    if not rows:
        return None
    ncols = len(rows[0])
    aug = [tuple(row) + (b,) for row, b in zip(rows, rhs)]
    red, pivots = _rref(aug)
    for row, p in zip(red, pivots):
        if p == ncols:
            return None
    x = [Fraction(0)] * ncols
    for row, p in zip(red, pivots):
        x[p] = row[ncols]
    return tuple(x)


def _mat_vec(rows: Sequence[Vector], v: Sequence[Fraction]) -> Vector:
    return tuple(sum(a * b for a, b in zip(row, v)) for row in rows)


def _transpose(rows: Sequence[Sequence[Fraction]]) -> Matrix:
    return tuple(tuple(col) for col in zip(*rows))


def _mat_mul(a: Sequence[Vector], b: Sequence[Vector]) -> Matrix:
    bt = list(zip(*b))
    return tuple(
        tuple(sum(x * y for x, y in zip(row, col)) for col in bt) for row in a
    )


def _identity(n: int) -> Matrix:
    return tuple(
        tuple(Fraction(1 if i == j else 0) for j in range(n)) for i in range(n)
    )


def _mat_inverse(rows: Sequence[Vector]) -> Matrix:
    n = len(rows)
    aug = [list(rows[i]) + [Fraction(1 if j == i else 0) for j in range(n)] for i in range(n)]
    red, pivots = _rref([tuple(r) for r in aug])
    if pivots != list(range(n)):
        raise PreconditionError("matrix is not invertible")
    return tuple(tuple(row[n:]) for row in red)


# ---------------------------------------------------------------------------
# forms, signatures, subspaces
# ---------------------------------------------------------------------------


class Signature(NamedTuple):
    """Inertia triple of a symmetric form: positive, negative, null counts."""

    b_plus: int
    b_minus: int
    b_null: int


@dataclass(frozen=True)
class GramForm:
    """A symmetric bilinear form given by its gram matrix on coordinates."""

    gram: Matrix

    def __init__(self, gram: Sequence[Sequence]) -> None:
        rows = tuple(as_vector(r) for r in gram)
        if not rows:
            raise InputError("gram matrix must have dimension at least 1")
        n = len(rows)
        for r in rows:
            if len(r) != n:
                raise InputError("gram matrix must be square")
        for i in range(n):
            for j in range(i + 1, n):
                if rows[i][j] != rows[j][i]:
                    raise InputError("gram matrix must be symmetric")
        object.__setattr__(self, "gram", rows)

    @property
    def dim(self) -> int:
        return len(self.gram)

    def evaluate(self, v: Sequence, w: Sequence) -> Fraction:
        vv, ww = as_vector(v), as_vector(w)
        if len(vv) != self.dim or len(ww) != self.dim:
            raise DimensionMismatchError(
                f"vectors must have {self.dim} entries, got {len(vv)} and {len(ww)}"
            )
        return sum(
            vv[i] * self.gram[i][j] * ww[j]
            for i in range(self.dim)
            for j in range(self.dim)
        )

    def norm_sq(self, v: Sequence) -> Fraction:
        return self.evaluate(v, v)

    def subspace(self, vectors: Sequence[Sequence]) -> "Subspace":
        return Subspace(self, vectors)

    def zero_subspace(self) -> "Subspace":
        return Subspace(self, [])

    def full_subspace(self) -> "Subspace":
        return Subspace(self, _identity(self.dim))

    def signature(self) -> Signature:
        return signature(self)

    def radical(self) -> "Subspace":
        """Vectors pairing to zero with the whole space."""
        return Subspace(self, _kernel(self.gram, self.dim))

    def to_json(self) -> dict:
        return {
            "dim": self.dim,
            "gram": [[_frac_str(x) for x in row] for row in self.gram],
        }

    @staticmethod
    def from_json(data: dict) -> "GramForm":
        if not isinstance(data, dict) or "gram" not in data:
            raise InputError("form JSON must be an object with a 'gram' key")
        form = GramForm(data["gram"])
        if "dim" in data and data["dim"] != form.dim:
            raise InputError(
                f"declared dim {data['dim']} does not match gram size {form.dim}"
            )
        return form


def _frac_str(x: Fraction) -> str:
    return str(x)


class Subspace:
    """A rational subspace of the coordinate space of a GramForm.

    The supplied spanning vectors must be linearly independent.  Equality
    and hashing use the reduced row echelon form of the basis, which is a
    canonical representative of the span.
    """

    __slots__ = ("ambient", "basis", "canonical")

    def __init__(self, ambient: GramForm, vectors: Sequence[Sequence]) -> None:
        self.ambient = ambient
        rows = tuple(as_vector(v) for v in vectors)
        for r in rows:
            if len(r) != ambient.dim:
                raise DimensionMismatchError(
                    f"vector length {len(r)} does not match ambient dim {ambient.dim}"
                )
        red, _ = _rref(rows)
        if len(red) != len(rows):
            raise InputError("spanning vectors must be linearly independent")
        self.basis = rows
        self.canonical = tuple(red)

    @staticmethod
    def spanned_by(ambient: GramForm, vectors: Sequence[Sequence]) -> "Subspace":
        """Span of an arbitrary (possibly dependent) list of vectors."""
        rows = tuple(as_vector(v) for v in vectors)
        for r in rows:
            if len(r) != ambient.dim:
                raise DimensionMismatchError(
                    f"vector length {len(r)} does not match ambient dim {ambient.dim}"
                )
        red, _ = _rref(rows)
        return Subspace(ambient, red)

    @property
    def dim(self) -> int:
        return len(self.canonical)

    def is_zero(self) -> bool:
        return self.dim == 0

    def contains(self, vector: Sequence) -> bool:
        v = as_vector(vector)
        if len(v) != self.ambient.dim:
            raise DimensionMismatchError("vector length does not match ambient")
        red, _ = _rref(tuple(self.canonical) + (v,))
        return len(red) == self.dim

    def contains_subspace(self, other: "Subspace") -> bool:
        _check_same_ambient(self, other)
        return all(self.contains(v) for v in other.canonical)

    def restricted_gram(self) -> Matrix:
        g = self.ambient.gram
        b = self.basis
        return tuple(
            tuple(self.ambient.evaluate(b[i], b[j]) for j in range(len(b)))
            for i in range(len(b))
        )

    def __eq__(self, other) -> bool:
        if not isinstance(other, Subspace):
            return NotImplemented
        return self.ambient == other.ambient and self.canonical == other.canonical

    def __hash__(self) -> int:
        return hash((self.ambient, self.canonical))

    def __repr__(self) -> str:
        rows = ", ".join(
            "(" + ", ".join(str(x) for x in v) + ")" for v in self.canonical
        )
        return f"Subspace[dim {self.dim}: {rows}]"

    def to_json(self, include_ambient: bool = True) -> dict:
        data = {"basis": [[_frac_str(x) for x in v] for v in self.basis]}
        if include_ambient:
            data["ambient"] = self.ambient.to_json()
        return data

    @staticmethod
    def from_json(data: dict, ambient: GramForm | None = None) -> "Subspace":
        if not isinstance(data, dict) or "basis" not in data:
            raise InputError("subspace JSON must be an object with a 'basis' key")
        if ambient is None:
            if "ambient" not in data:
                raise InputError("subspace JSON needs an 'ambient' form")
            ambient = GramForm.from_json(data["ambient"])
        return Subspace(ambient, data["basis"])


def _check_same_ambient(a: Subspace, b: Subspace) -> None:
    if a.ambient != b.ambient:
        raise DimensionMismatchError("subspaces live over different ambient forms")


# ---------------------------------------------------------------------------
# congruence diagonalization and signatures
# ---------------------------------------------------------------------------


def sym_diagonalize(gram: Sequence[Sequence[Fraction]]) -> tuple[Matrix, list[Fraction]]:
    """Congruence diagonalization of a symmetric rational matrix.

    Returns (T, diag) where the columns of T are a basis with
    T^t * gram * T = diag(diag).  Pure symmetric Gauss: use a nonzero
    diagonal pivot, create one by a row/column surgery when only an
    off-diagonal entry is nonzero, and clear the pivot row and column.
    """
    k = len(gram)
    m = [list(row) for row in gram]
    # columns[j] is the j-th basis vector
    cols = [[Fraction(1 if i == j else 0) for i in range(k)] for j in range(k)]

    def col_swap(a, b):
        cols[a], cols[b] = cols[b], cols[a]
        m[a], m[b] = m[b], m[a]
        for row in m:
            row[a], row[b] = row[b], row[a]

    def col_add(dst, src, factor):
        # basis op b_dst <- b_dst + factor * b_src
        cols[dst] = [x + factor * y for x, y in zip(cols[dst], cols[src])]
        for row in m:
            row[dst] += factor * row[src]
        m[dst] = [x + factor * y for x, y in zip(m[dst], m[src])]

    for p in range(k):
        if m[p][p] == 0:
            swap_with = None
            for i in range(p + 1, k):
                if m[i][i] != 0:
                    swap_with = i
                    break
            if swap_with is not None:
                col_swap(p, swap_with)
            else:
                pair = None
                for i in range(p, k):
                    for j in range(i + 1, k):
                        if m[i][j] != 0:
                            pair = (i, j)
                            break
                    if pair:
                        break
                if pair is None:
                    break  # remaining block is identically zero
                i, j = pair
                col_add(i, j, Fraction(1))
                if i != p:
                    col_swap(p, i)
        pivot = m[p][p]
        if pivot == 0:
            continue
        for j in range(p + 1, k):
            if m[p][j] != 0:
                col_add(j, p, -m[p][j] / pivot)
    t = tuple(tuple(cols[j][i] for j in range(k)) for i in range(k))
    return t, [m[i][i] for i in range(k)]


def signature(form: GramForm, sub: Subspace | None = None) -> Signature:
    """Inertia of the form, or of its restriction to a subspace."""
    if sub is None:
        gram = form.gram
    else:
        if sub.ambient != form:
            raise DimensionMismatchError("subspace does not live over this form")
        if sub.is_zero():
            return Signature(0, 0, 0)
        gram = sub.restricted_gram()
    _, diag = sym_diagonalize(gram)
    plus = sum(1 for d in diag if d > 0)
    minus = sum(1 for d in diag if d < 0)
    return Signature(plus, minus, len(diag) - plus - minus)


def subspace_signature(sub: Subspace) -> Signature:
    return signature(sub.ambient, sub)


def is_negative_definite(sub: Subspace) -> bool:
    sig = subspace_signature(sub)
    return sig.b_plus == 0 and sig.b_null == 0


def orth_complement(sub: Subspace) -> Subspace:
    """All vectors pairing to zero with the subspace."""
    form = sub.ambient
    if sub.is_zero():
        return form.full_subspace()
    rows = tuple(_mat_vec(form.gram, v) for v in sub.basis)
    return Subspace(form, _kernel(rows, form.dim))


def nullspace(sub: Subspace) -> Subspace:
    """Radical of the restricted form: sub intersect sub-perp."""
    return subspace_intersect(sub, orth_complement(sub))


def subspace_sum(a: Subspace, b: Subspace) -> Subspace:
    _check_same_ambient(a, b)
    return Subspace.spanned_by(a.ambient, tuple(a.canonical) + tuple(b.canonical))


def subspace_intersect(a: Subspace, b: Subspace) -> Subspace:
    """Intersection via the kernel of the stacked coefficient map."""
    _check_same_ambient(a, b)
    if a.is_zero() or b.is_zero():
        return a.ambient.zero_subspace()
    # coefficients (x, y) with sum_i x_i a_i = sum_j y_j b_j
    n = a.ambient.dim
    rows = []
    for c in range(n):
        rows.append(
            tuple(v[c] for v in a.canonical)
            + tuple(-w[c] for w in b.canonical)
        )
    vectors = []
    for coeff in _kernel(rows, a.dim + b.dim):
        x = coeff[: a.dim]
        vec = [Fraction(0)] * n
        for xi, av in zip(x, a.canonical):
            for c in range(n):
                vec[c] += xi * av[c]
        vectors.append(tuple(vec))
    return Subspace.spanned_by(a.ambient, vectors)


# ---------------------------------------------------------------------------
# standard embedding of a signature (1, n) form
# ---------------------------------------------------------------------------


def _primitive_column(col: Sequence[Fraction]) -> Vector:
    from math import gcd

    den = 1
    for x in col:
        den = den * x.denominator // gcd(den, x.denominator)
    ints = [int(x * den) for x in col]
    g = 0
    for v in ints:
        g = gcd(g, abs(v))
    if g > 1:
        ints = [v // g for v in ints]
    for v in ints:
        if v != 0:
            if v < 0:
                ints = [-u for u in ints]
            break
    return tuple(Fraction(v) for v in ints)


@dataclass(frozen=True)
class StandardEmbedding:
    """Rational congruence to a scaled Minkowski diagonal form.

    columns(matrix)^t * gram * columns(matrix) equals
    diag(scales[0], -scales[1], ..., -scales[n]) with positive rational
    scales; dividing column i by sqrt(scales[i]) over the reals gives
    the exact diag(1, -1, ..., -1) change of basis.
    """

    matrix: Matrix  # columns are the new basis vectors
    scales: tuple[Fraction, ...]

    def to_minkowski(self, v: Sequence) -> tuple[float, ...]:
        """Float coordinates of a form-space vector in R^{1,n}."""
        import math

        vv = as_vector(v)
        inv = _mat_inverse(self.matrix)
        y = _mat_vec(inv, vv)
        return tuple(float(yi) * math.sqrt(float(s)) for yi, s in zip(y, self.scales))


def standard_embedding(form: GramForm) -> StandardEmbedding:
    """Diagonalize a signature (1, n) form into scaled Minkowski shape.

    Raises PreconditionError when the signature is not (1, n, 0).
    Columns are normalized to primitive integer vectors, so the result
    is deterministic and the scales are the resulting diagonal entries.
    """
    sig = signature(form)
    n = form.dim - 1
    if sig != Signature(1, n, 0):
        raise PreconditionError(
            f"standard embedding needs signature (1, {n}), got {tuple(sig)}"
        )
    t, diag = sym_diagonalize(form.gram)
    cols = list(zip(*t))  # column vectors
    order = [i for i, d in enumerate(diag) if d > 0] + [
        i for i, d in enumerate(diag) if d < 0
    ]
    new_cols = []
    scales = []
    for idx in order:
        col = _primitive_column(cols[idx])
        val = sum(
            col[i] * form.gram[i][j] * col[j]
            for i in range(form.dim)
            for j in range(form.dim)
        )
        new_cols.append(col)
        scales.append(abs(val))
    matrix = tuple(tuple(new_cols[j][i] for j in range(form.dim)) for i in range(form.dim))
    return StandardEmbedding(matrix=matrix, scales=tuple(scales))


def minkowski_form(n: int) -> GramForm:
    """The standard diag(1, -1, ..., -1) form on R^{1,n}."""
    if n < 1:
        raise InputError("minkowski form needs n >= 1")
    return GramForm(
        [[1 if i == j == 0 else (-1 if i == j else 0) for j in range(n + 1)] for i in range(n + 1)]
    )


def hyperbolic_plane_form() -> GramForm:
    return GramForm([[0, 1], [1, 0]])


def load_form(path: str) -> GramForm:
    with open(path, "r", encoding="utf-8") as fh:
        return GramForm.from_json(json.load(fh))
