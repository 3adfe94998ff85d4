"""Exact linear algebra over the Gaussian rationals Q(i).

Scalars are :class:`GaussianRational` values built on :class:`fractions.Fraction`.
Vectors and matrices are immutable tuples of scalars. Rank uses fraction-free
(Bareiss) elimination on a denominator-cleared copy; null spaces use plain
Gauss-Jordan reduction, which is exact in a field.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from math import gcd, lcm
from typing import Iterable, Sequence, Union

__all__ = [
    "GaussianRational",
    "ExactVector",
    "ExactMatrix",
    "IncrementalSpan",
    "parse_rational",
    "format_rational",
    "rank",
    "null_space_basis",
    "inner_product",
]

_RATIONAL_RE = re.compile(r"^-?\d+(/\d+)?$")

Scalar = Union[int, Fraction, "GaussianRational"]


def parse_rational(text: str) -> Fraction:
    """Parse the ``"p/q"`` wire form (``q`` omitted when 1)."""
    if not isinstance(text, str) or not _RATIONAL_RE.match(text):
        raise ValueError(f"malformed rational {text!r}")
    value = Fraction(text)
    return value


def format_rational(value: Fraction) -> str:
    # Fraction.__str__ already drops a unit denominator
    return str(Fraction(value))


class GaussianRational:
    """Complex number ``re + i*im`` with exact rational parts."""

    __slots__ = ("re", "im")

    def __init__(self, re: Union[int, Fraction] = 0, im: Union[int, Fraction] = 0):
        self.re = Fraction(re)
        self.im = Fraction(im)

    @classmethod
    def coerce(cls, value: Scalar) -> "GaussianRational":
        if isinstance(value, GaussianRational):
            return value
        if isinstance(value, complex):
            raise TypeError("floating point complex values are not exact")
        return cls(value)

    def conjugate(self) -> "GaussianRational":
        return GaussianRational(self.re, -self.im)

    def abs2(self) -> Fraction:
        return self.re * self.re + self.im * self.im

    def is_zero(self) -> bool:
        return not self.re and not self.im

    def __bool__(self) -> bool:
        return not self.is_zero()

    def __add__(self, other):
        o = GaussianRational.coerce(other)
        return GaussianRational(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __sub__(self, other):
        o = GaussianRational.coerce(other)
        return GaussianRational(self.re - o.re, self.im - o.im)

    def __rsub__(self, other):
        return GaussianRational.coerce(other) - self

    def __neg__(self):
        return GaussianRational(-self.re, -self.im)

    def __mul__(self, other):
        o = GaussianRational.coerce(other)
        return GaussianRational(
            self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re
        )

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = GaussianRational.coerce(other)
        n = o.abs2()
        if not n:
            raise ZeroDivisionError("division by zero Gaussian rational")
        num = self * o.conjugate()
        return GaussianRational(num.re / n, num.im / n)

    def __rtruediv__(self, other):
        return GaussianRational.coerce(other) / self

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.im == 0 and self.re == other
        if not isinstance(other, GaussianRational):
            return NotImplemented
        return self.re == other.re and self.im == other.im

    def __hash__(self):
        if not self.im:
            return hash(self.re)
        return hash((self.re, self.im))

    def __complex__(self):
        return complex(float(self.re), float(self.im))

    def __repr__(self):
        if not self.im:
            return f"GaussianRational({self.re})"
        return f"GaussianRational({self.re}, {self.im})"

    def to_json(self) -> list:
        return [format_rational(self.re), format_rational(self.im)]

    @classmethod
    def from_json(cls, pair) -> "GaussianRational":
        if not isinstance(pair, (list, tuple)) or len(pair) != 2:
            raise ValueError(f"expected [re, im] pair, got {pair!r}")
        return cls(parse_rational(pair[0]), parse_rational(pair[1]))


ZERO = GaussianRational(0)
ONE = GaussianRational(1)


@dataclass(frozen=True)
class ExactVector:
    entries: tuple

    def __init__(self, entries: Iterable[Scalar]):
        object.__setattr__(
            self, "entries", tuple(GaussianRational.coerce(e) for e in entries)
        )
        if not self.entries:
            raise ValueError("vectors must have positive dimension")

    @property
    def dim(self) -> int:
        return len(self.entries)

    def __len__(self):
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)

    def __getitem__(self, i):
        return self.entries[i]

    def is_zero(self) -> bool:
        return all(e.is_zero() for e in self.entries)

    def conjugate(self) -> "ExactVector":
        return ExactVector(e.conjugate() for e in self.entries)

    def scale(self, c: Scalar) -> "ExactVector":
        c = GaussianRational.coerce(c)
        return ExactVector(c * e for e in self.entries)

    def __add__(self, other: "ExactVector") -> "ExactVector":
        _check_dims(self, other)
        return ExactVector(a + b for a, b in zip(self.entries, other.entries))

    def kron(self, other: "ExactVector") -> "ExactVector":
        return ExactVector(a * b for a in self.entries for b in other.entries)

    def is_real(self) -> bool:
        return all(not e.im for e in self.entries)

    def to_complex(self) -> list:
        return [complex(e) for e in self.entries]

    def integral(self) -> "ExactVector":
        """Positive rational multiple with coprime Gaussian-integer entries."""
        return ExactVector(
            GaussianRational(a, b) for a, b in to_gaussian_integers(self.entries)
        )

    def to_json(self) -> list:
        return [e.to_json() for e in self.entries]

    @classmethod
    def from_json(cls, data) -> "ExactVector":
        if not isinstance(data, list) or not data:
            raise ValueError("coefficient array must be a nonempty list")
        return cls(GaussianRational.from_json(p) for p in data)

    def __repr__(self):
        return f"ExactVector({[_short(e) for e in self.entries]})"


def _short(e: GaussianRational) -> str:
    if not e.im:
        return str(e.re)
    return f"{e.re}{'+' if e.im >= 0 else '-'}{abs(e.im)}i"


@dataclass(frozen=True)
class ExactMatrix:
    rows: int
    cols: int
    entries: tuple  # tuple of row tuples

    def __init__(self, grid: Sequence[Sequence[Scalar]], cols: int | None = None):
        grid = tuple(tuple(GaussianRational.coerce(e) for e in row) for row in grid)
        if cols is None:
            if not grid:
                raise ValueError("column count required for an empty matrix")
            cols = len(grid[0])
        if any(len(row) != cols for row in grid):
            raise ValueError("ragged matrix rows")
        object.__setattr__(self, "rows", len(grid))
        object.__setattr__(self, "cols", cols)
        object.__setattr__(self, "entries", grid)

    @classmethod
    def from_rows(cls, vectors: Sequence[ExactVector], cols: int) -> "ExactMatrix":
        return cls([v.entries for v in vectors], cols=cols)

    @classmethod
    def identity(cls, n: int) -> "ExactMatrix":
        return cls([[int(i == j) for j in range(n)] for i in range(n)])

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "ExactMatrix":
        return cls([[0] * cols for _ in range(rows)], cols=cols)

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i][j]

    def row(self, i: int) -> ExactVector:
        return ExactVector(self.entries[i])

    def conjugate(self) -> "ExactMatrix":
        return ExactMatrix(
            [[e.conjugate() for e in row] for row in self.entries], cols=self.cols
        )

    def matvec(self, v: ExactVector) -> ExactVector:
        if v.dim != self.cols:
            raise ValueError("dimension mismatch")
        out = []
        for row in self.entries:
            acc = ZERO
            for a, b in zip(row, v.entries):
                if a and b:
                    acc = acc + a * b
            out.append(acc)
        return ExactVector(out)

    def __repr__(self):
        return f"ExactMatrix({self.rows}x{self.cols})"


def _check_dims(v: ExactVector, w: ExactVector) -> None:
    if v.dim != w.dim:
        raise ValueError(f"dimension mismatch: {v.dim} vs {w.dim}")


def inner_product(v: ExactVector, w: ExactVector) -> GaussianRational:
    """Hermitian inner product, conjugate-linear in ``v``."""
    _check_dims(v, w)
    re = Fraction(0)
    im = Fraction(0)
    for a, b in zip(v.entries, w.entries):
        # conj(a) * b
        re += a.re * b.re + a.im * b.im
        im += a.re * b.im - a.im * b.re
    return GaussianRational(re, im)


# -- Gaussian integer helpers ------------------------------------------------
# A Gaussian integer is a pair (re, im) of Python ints.


def to_gaussian_integers(entries: Sequence[GaussianRational]) -> list:
    """Scale ``entries`` by a positive rational so all parts are coprime ints."""
    den = 1
    for e in entries:
        den = lcm(den, e.re.denominator, e.im.denominator)
    out = [
        (int(e.re * den), int(e.im * den)) for e in entries
    ]
    return _primitive(out)


def _primitive(vec: list) -> list:
    g = 0
    for a, b in vec:
        g = gcd(g, a, b)
    if g > 1:
        vec = [(a // g, b // g) for a, b in vec]
    return vec


def _gmul(x, y):
    return (x[0] * y[0] - x[1] * y[1], x[0] * y[1] + x[1] * y[0])


def _gsub(x, y):
    return (x[0] - y[0], x[1] - y[1])


def _gdiv_exact(x, y):
    # exact quotient in Z[i]; Bareiss guarantees divisibility
    n = y[0] * y[0] + y[1] * y[1]
    re = x[0] * y[0] + x[1] * y[1]
    im = x[1] * y[0] - x[0] * y[1]
    q_re, r_re = divmod(re, n)
    q_im, r_im = divmod(im, n)
    if r_re or r_im:
        raise ArithmeticError("Bareiss step was not exact")
    return (q_re, q_im)


def rank(M: ExactMatrix) -> int:
    """Exact rank of ``M`` over Q(i) by fraction-free Bareiss elimination."""
    if M.rows == 0 or M.cols == 0:
        return 0
    A = [to_gaussian_integers(row) for row in M.entries]
    nrows, ncols = M.rows, M.cols
    prev = (1, 0)
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        pivot = next((i for i in range(r, nrows) if A[i][c] != (0, 0)), None)
        if pivot is None:
            continue
        if pivot != r:
            A[r], A[pivot] = A[pivot], A[r]
        p = A[r][c]
        for i in range(r + 1, nrows):
            a_ic = A[i][c]
            row_i = A[i]
            row_r = A[r]
            A[i] = [
                _gdiv_exact(_gsub(_gmul(p, row_i[j]), _gmul(a_ic, row_r[j])), prev)
                if j > c else (0, 0)
                for j in range(ncols)
            ]
        prev = p
        r += 1
    return r


def rref(M: ExactMatrix) -> tuple[list, list[int]]:
    """Reduced row echelon form over Q(i); returns (rows, pivot columns)."""
    A = [list(row) for row in M.entries]
    pivots: list[int] = []
    r = 0
    for c in range(M.cols):
        if r == M.rows:
            break
        pivot = next((i for i in range(r, M.rows) if A[i][c]), None)
        if pivot is None:
            continue
        A[r], A[pivot] = A[pivot], A[r]
        inv = ONE / A[r][c]
        A[r] = [e * inv for e in A[r]]
        for i in range(M.rows):
            if i != r and A[i][c]:
                f = A[i][c]
                A[i] = [a - f * b for a, b in zip(A[i], A[r])]
        pivots.append(c)
        r += 1
    return A[:r], pivots


def null_space_basis(M: ExactMatrix) -> list[ExactVector]:
    """Basis of vectors orthogonal to every row of ``M``.

    Rows are read as constraint vectors ``u`` with ``<u|v> = 0``, i.e. the
    system solved is ``conj(M) v = 0``. One basis vector per free column, in
    ascending column order, scaled to coprime Gaussian integers.
    """
    n = M.cols
    if M.rows == 0:
        return [ExactVector(int(i == j) for i in range(n)) for j in range(n)]
    R, pivots = rref(M.conjugate())
    free = [c for c in range(n) if c not in pivots]
    basis = []
    for f in free:
        v = [ZERO] * n
        v[f] = ONE
        for row, p in zip(R, pivots):
            v[p] = -row[f]
        ints = to_gaussian_integers(v)
        basis.append(ExactVector(GaussianRational(a, b) for a, b in ints))
    return basis


class IncrementalSpan:
    """Row space of Gaussian-integer vectors with push/pop in LIFO order.

    Each pushed vector is reduced against the stored echelon rows with
    cross-multiplication (no division) and then divided by its integer
    content, which keeps entries small.
    """

    __slots__ = ("dim", "_rows", "_pivots", "_stack")

    def __init__(self, dim: int):
        self.dim = dim
        self._rows: list = []
        self._pivots: list[int] = []
        self._stack: list[bool] = []

    @property
    def rank(self) -> int:
        return len(self._rows)

    def reduce(self, vec: list) -> list:
        v = list(vec)
        for row, p in zip(self._rows, self._pivots):
            b = v[p]
            if b == (0, 0):
                continue
            a = row[p]
            v = [_gsub(_gmul(a, x), _gmul(b, y)) for x, y in zip(v, row)]
            v = _primitive(v)
        return v

    def contains(self, vec: list) -> bool:
        return all(x == (0, 0) for x in self.reduce(vec))

    def push(self, vec: list) -> bool:
        """Add ``vec``; returns whether the rank grew."""
        v = self.reduce(vec)
        p = next((i for i, x in enumerate(v) if x != (0, 0)), None)
        grew = p is not None
        if grew:
            self._rows.append(v)
            self._pivots.append(p)
        self._stack.append(grew)
        return grew

    def pop(self) -> None:
        if self._stack.pop():
            self._rows.pop()
            self._pivots.pop()
