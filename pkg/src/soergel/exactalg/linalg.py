"""Exact linear algebra over Q and over Q(2cos(pi/N)).

Matrices are sequences of rows.  Rational input is handed to FLINT
(``python-flint``); anything involving irrational ``Scalar`` entries goes
through a plain Gaussian elimination written against the field operations.
Both paths return ``Fraction``/``Scalar`` entries so callers never see FLINT
types.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .field import Scalar

try:  # pragma: no cover - exercised implicitly
    import flint

    HAVE_FLINT = True
except ImportError:  # pragma: no cover
    flint = None
    HAVE_FLINT = False

__all__ = [
    "rref",
    "rank",
    "kernel",
    "left_kernel",
    "RowSpace",
    "row_space",
    "solve_left",
    "mat_mul",
    "mat_vec",
    "identity",
    "transpose",
    "HAVE_FLINT",
    "set_backend",
]

_BACKEND = {"name": "flint" if HAVE_FLINT else "python"}


def set_backend(name: str) -> str:
    """Select ``"flint"`` or ``"python"`` for rational input; returns the old one."""
    if name not in ("flint", "python"):
        raise ValueError(name)
    if name == "flint" and not HAVE_FLINT:
        raise RuntimeError("python-flint is not installed")
    old = _BACKEND["name"]
    _BACKEND["name"] = name
    return old


def _all_rational(rows) -> bool:
    for r in rows:
        for x in r:
            if isinstance(x, Scalar):
                return False
    return True


def _to_fmpq(x):
    if isinstance(x, int):
        return x
    return flint.fmpq(x.numerator, x.denominator)


def _from_fmpq(q) -> Fraction:
    return Fraction(int(q.p), int(q.q))


def _rref_flint(rows, ncols):
    nrows = len(rows)
    if nrows == 0 or ncols == 0:
        return [], ()
    M = flint.fmpq_mat(nrows, ncols, [_to_fmpq(x) for r in rows for x in r])
    R, rk = M.rref()
    entries = R.entries()
    out = []
    pivots = []
    for i in range(rk):
        row = [_from_fmpq(q) for q in entries[i * ncols:(i + 1) * ncols]]
        for j, x in enumerate(row):
            if x:
                pivots.append(j)
                break
        out.append(tuple(row))
    return out, tuple(pivots)


def _rref_python(rows, ncols):
    M = [list(r) for r in rows]
    pivots = []
    r = 0
    nrows = len(M)
    for c in range(ncols):
        if r == nrows:
            break
        p = None
        for i in range(r, nrows):
            if M[i][c]:
                p = i
                break
        if p is None:
            continue
        M[r], M[p] = M[p], M[r]
        piv = M[r][c]
        inv = piv.inverse() if isinstance(piv, Scalar) else Fraction(1) / piv
        row = [x * inv if x else x for x in M[r]]
        M[r] = row
        for i in range(nrows):
            if i != r:
                f = M[i][c]
                if f:
                    Mi = M[i]
                    M[i] = [a - f * b if b else a for a, b in zip(Mi, row)]
        pivots.append(c)
        r += 1
    out = []
    for i in range(r):
        out.append(tuple(x if isinstance(x, Scalar) else Fraction(x) for x in M[i]))
    return out, tuple(pivots)


def rref(rows: Sequence[Sequence], ncols: int | None = None):
    """Reduced row echelon form: (nonzero rows, pivot columns)."""
    rows = [tuple(r) for r in rows]
    if ncols is None:
        ncols = len(rows[0]) if rows else 0
    for r in rows:
        if len(r) != ncols:
            raise ValueError("ragged matrix")
    if not rows:
        return [], ()
    if _BACKEND["name"] == "flint" and _all_rational(rows):
        return _rref_flint(rows, ncols)
    return _rref_python(rows, ncols)


def rank(rows: Sequence[Sequence], ncols: int | None = None) -> int:
    rows = [tuple(r) for r in rows]
    if not rows:
        return 0
    if ncols is None:
        ncols = len(rows[0])
    if _BACKEND["name"] == "flint" and _all_rational(rows):
        if ncols == 0:
            return 0
        M = flint.fmpq_mat(len(rows), ncols, [_to_fmpq(x) for r in rows for x in r])
        return M.rank()
    return len(_rref_python(rows, ncols)[1])


def kernel(rows: Sequence[Sequence], ncols: int | None = None) -> list[tuple]:
    """Basis of {x : M x = 0} (column vectors written as tuples)."""
    rows = [tuple(r) for r in rows]
    if ncols is None:
        if not rows:
            raise ValueError("ncols required for an empty matrix")
        ncols = len(rows[0])
    R, piv = rref(rows, ncols)
    pivset = set(piv)
    basis = []
    for free in range(ncols):
        if free in pivset:
            continue
        vec = [Fraction(0)] * ncols
        vec[free] = Fraction(1)
        for row, p in zip(R, piv):
            c = row[free]
            if c:
                vec[p] = -c
        basis.append(tuple(vec))
    return basis


def left_kernel(rows: Sequence[Sequence], ncols: int | None = None) -> list[tuple]:
    """Basis of {c : c M = 0}."""
    rows = [tuple(r) for r in rows]
    if ncols is None:
        ncols = len(rows[0]) if rows else 0
    if not rows:
        return []
    return kernel(transpose(rows, ncols), len(rows))


def transpose(rows, ncols: int | None = None):
    rows = [tuple(r) for r in rows]
    if ncols is None:
        ncols = len(rows[0]) if rows else 0
    return [tuple(r[j] for r in rows) for j in range(ncols)]


def mat_mul(A, B):
    Bt = list(zip(*B))
    return tuple(tuple(_dot(a, b) for b in Bt) for a in A)


def mat_vec(A, x):
    return tuple(_dot(a, x) for a in A)


def _dot(a, b):
    s = 0
    for x, y in zip(a, b):
        if x and y:
            s = s + x * y
    return s


def identity(n: int, one=Fraction(1), zero=Fraction(0)):
    return tuple(tuple(one if i == j else zero for j in range(n)) for i in range(n))


@dataclass(frozen=True)
class RowSpace:
    """A subspace of k^n stored by its reduced row echelon basis.

    Two ``RowSpace`` objects compare equal exactly when they are the same
    subspace, since the RREF basis is canonical.
    """

    ncols: int
    basis: tuple
    pivots: tuple

    @property
    def dim(self) -> int:
        return len(self.basis)

    def __len__(self):
        return len(self.basis)

    def coordinates(self, vec) -> tuple | None:
        """Coordinates of vec in ``basis`` or None when vec is not in the span."""
        coords = tuple(vec[p] for p in self.pivots)
        recon = [0] * self.ncols
        for c, row in zip(coords, self.basis):
            if c:
                for j, x in enumerate(row):
                    if x:
                        recon[j] = recon[j] + c * x
        if any((a - b) for a, b in zip(recon, vec)):
            return None
        return coords

    def contains(self, vec) -> bool:
        return self.coordinates(vec) is not None

    def contains_space(self, other: "RowSpace") -> bool:
        return all(self.contains(v) for v in other.basis)

    def __add__(self, other: "RowSpace") -> "RowSpace":
        return row_space(list(self.basis) + list(other.basis), self.ncols)


def row_space(rows: Sequence[Sequence], ncols: int) -> RowSpace:
    R, piv = rref(rows, ncols)
    return RowSpace(ncols, tuple(R), piv)


def solve_left(rows: Sequence[Sequence], target: Sequence, ncols: int | None = None):
    """Some c with c M = target, or None."""
    rows = [tuple(r) for r in rows]
    if ncols is None:
        ncols = len(target)
    # solve by transposing: M^T c^T = target^T
    Mt = transpose(rows, ncols)
    n = len(rows)
    aug = [tuple(Mt[j]) + (target[j],) for j in range(ncols)]
    R, piv = rref(aug, n + 1)
    if n in piv:
        return None
    c = [Fraction(0)] * n
    for row, p in zip(R, piv):
        c[p] = row[n]
    return tuple(c)
