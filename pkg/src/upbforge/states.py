"""Product states, multipartite systems and UPB candidate sets.

Basis ordering is row-major with party 1 slowest, so for a bipartite state the
coefficient of ``|ij>`` sits at index ``i*n + j`` and the corresponding matrix
is the coefficient vector reshaped to ``m x n``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from math import prod
from typing import Any, Optional, Sequence

from .linalg import (
    ExactMatrix,
    ExactVector,
    GaussianRational,
    inner_product,
    rank,
)

__all__ = [
    "UpbError",
    "SystemDims",
    "ProductState",
    "FullState",
    "UpbCandidate",
    "ket",
    "product",
    "global_inner",
    "expand",
    "corresponding_matrix",
    "flatten",
    "is_product",
    "is_fully_product",
    "missing_number",
]


class UpbError(ValueError):
    """Validation failure carrying a stable machine-readable ``code``."""

    def __init__(self, code: str, message: str):
        super().__init__(message)
        self.code = code

    def to_json(self) -> dict:
        return {"error": self.code, "message": str(self)}


@dataclass(frozen=True)
class SystemDims:
    dims: tuple

    def __init__(self, dims: Sequence[int]):
        dims = tuple(int(d) for d in dims)
        if len(dims) < 2:
            raise UpbError("dims_invalid", f"need at least two parties, got {dims}")
        if any(d < 2 for d in dims):
            raise UpbError("dims_invalid", f"every party dimension must be >= 2: {dims}")
        object.__setattr__(self, "dims", dims)

    @property
    def total(self) -> int:
        return prod(self.dims)

    @property
    def parties(self) -> int:
        return len(self.dims)

    def __iter__(self):
        return iter(self.dims)

    def __len__(self):
        return len(self.dims)

    def __getitem__(self, i):
        return self.dims[i]

    def __str__(self):
        return "x".join(map(str, self.dims))


@dataclass(frozen=True)
class ProductState:
    """One (unnormalised) local vector per party."""

    factors: tuple

    def __init__(self, factors: Sequence[ExactVector]):
        factors = tuple(
            f if isinstance(f, ExactVector) else ExactVector(f) for f in factors
        )
        if not factors:
            raise UpbError("dims_mismatch", "a product state needs at least one factor")
        for f in factors:
            if f.is_zero():
                raise UpbError("zero_factor", "product state has a zero factor")
        object.__setattr__(self, "factors", factors)

    @property
    def dims(self) -> tuple:
        return tuple(f.dim for f in self.factors)

    def __len__(self):
        return len(self.factors)

    def to_json(self) -> list:
        return [f.to_json() for f in self.factors]

    @classmethod
    def from_json(cls, data) -> "ProductState":
        if not isinstance(data, list) or not data:
            raise UpbError("malformed", "state must be a list of per-party arrays")
        try:
            return cls([ExactVector.from_json(f) for f in data])
        except UpbError:
            raise
        except (ValueError, TypeError) as exc:
            raise UpbError("malformed_rational", str(exc)) from exc

    def __repr__(self):
        return "ProductState(" + ", ".join(_ket_text(f) for f in self.factors) + ")"


def _ket_text(v: ExactVector) -> str:
    terms = []
    for i, c in enumerate(v.entries):
        if not c:
            continue
        if c == 1:
            coef = "+" if terms else ""
        elif c == -1:
            coef = "-"
        else:
            coef = ("+" if terms else "") + repr(c)
        terms.append(f"{coef}{i}")
    return "|" + "".join(terms) + ">"


_TERM_RE = re.compile(r"([+-]?)(\d+)")


def ket(dim: int, text: str, offset: int = 0) -> ExactVector:
    """Build an unnormalised basis combination such as ``ket(3, "0-1")``.

    ``text`` is a signed sum of basis indices; ``offset`` shifts every index.
    """
    coeffs = [0] * dim
    pos = 0
    for m in _TERM_RE.finditer(text.replace(" ", "")):
        if m.start() != pos:
            raise ValueError(f"cannot parse ket {text!r}")
        pos = m.end()
        idx = int(m.group(2)) + offset
        if idx >= dim:
            raise ValueError(f"index {idx} outside dimension {dim}")
        coeffs[idx] += -1 if m.group(1) == "-" else 1
    if pos != len(text.replace(" ", "")):
        raise ValueError(f"cannot parse ket {text!r}")
    return ExactVector(coeffs)


def product(*factors: ExactVector) -> ProductState:
    return ProductState(factors)


@dataclass(frozen=True)
class FullState:
    coefficients: ExactVector
    dims: tuple

    def __post_init__(self):
        if self.coefficients.dim != prod(self.dims):
            raise UpbError("dims_mismatch", "coefficient length does not match dims")

    def is_zero(self) -> bool:
        return self.coefficients.is_zero()


def global_inner(p: ProductState, q: ProductState) -> GaussianRational:
    """``<p|q>`` as the product of the local inner products."""
    if p.dims != q.dims:
        raise UpbError("dims_mismatch", f"dims differ: {p.dims} vs {q.dims}")
    out = GaussianRational(1)
    for a, b in zip(p.factors, q.factors):
        c = inner_product(a, b)
        if not c:
            return GaussianRational(0)
        out = out * c
    return out


def expand(p: ProductState) -> FullState:
    vec = p.factors[0]
    for f in p.factors[1:]:
        vec = vec.kron(f)
    return FullState(vec, p.dims)


def _as_dims(dims) -> tuple:
    return tuple(dims.dims) if isinstance(dims, SystemDims) else tuple(dims)


def corresponding_matrix(f: FullState, dims=None) -> ExactMatrix:
    """The ``m x n`` coefficient grid of a bipartite state."""
    dims = _as_dims(dims if dims is not None else f.dims)
    if len(dims) != 2:
        raise UpbError("not_bipartite", f"corresponding matrix needs 2 parties, got {dims}")
    m, n = dims
    c = f.coefficients.entries
    if len(c) != m * n:
        raise UpbError("dims_mismatch", "coefficient length does not match dims")
    return ExactMatrix([c[i * n:(i + 1) * n] for i in range(m)], cols=n)


def flatten(f: FullState, group: Sequence[int]) -> ExactMatrix:
    """Matrix of ``f`` across the cut ``group | rest`` (rows index ``group``)."""
    dims = f.dims
    group = sorted(group)
    rest = [k for k in range(len(dims)) if k not in group]
    rdims = [dims[k] for k in group]
    cdims = [dims[k] for k in rest]
    nrows, ncols = prod(rdims), prod(cdims)
    grid = [[None] * ncols for _ in range(nrows)]
    strides = [prod(dims[k + 1:]) for k in range(len(dims))]

    def digits(x, ds):
        out = []
        for d in reversed(ds):
            x, r = divmod(x, d)
            out.append(r)
        return out[::-1]

    for r in range(nrows):
        rd = digits(r, rdims)
        base = sum(strides[k] * i for k, i in zip(group, rd))
        for c in range(ncols):
            cd = digits(c, cdims)
            idx = base + sum(strides[k] * i for k, i in zip(rest, cd))
            grid[r][c] = f.coefficients.entries[idx]
    return ExactMatrix(grid, cols=ncols)


def is_product(f: FullState, dims=None) -> bool:
    """Bipartite product test: the corresponding matrix has rank one."""
    if f.is_zero():
        raise UpbError("zero_state", "the zero vector is not a state")
    return rank(corresponding_matrix(f, dims)) == 1


def is_fully_product(f: FullState) -> bool:
    """Multipartite product test over every single-party-versus-rest cut."""
    if f.is_zero():
        raise UpbError("zero_state", "the zero vector is not a state")
    return all(rank(flatten(f, [k])) == 1 for k in range(len(f.dims)))


@dataclass(frozen=True)
class UpbCandidate:
    """An orthogonal set of product states in a composite system.

    Construction checks the size bound ``1 <= |states| < D``, factor
    dimensions and exact pairwise orthogonality; pass ``check=False`` to build
    a deliberately invalid set (for negative tests).
    """

    dims: SystemDims
    states: tuple
    label: str = ""
    derivation: Optional[Any] = field(default=None, compare=False)
    source: Optional[str] = field(default=None, compare=False)
    check: bool = field(default=True, compare=False, repr=False)

    def __post_init__(self):
        if not isinstance(self.dims, SystemDims):
            object.__setattr__(self, "dims", SystemDims(self.dims))
        object.__setattr__(self, "states", tuple(self.states))
        if not self.check:
            return
        D = self.dims.total
        if not 1 <= len(self.states) < D:
            raise UpbError(
                "size_out_of_range",
                f"{len(self.states)} states in dimension {D}; need 1 <= k < D",
            )
        for s in self.states:
            if s.dims != self.dims.dims:
                raise UpbError(
                    "dims_mismatch", f"state dims {s.dims} differ from {self.dims.dims}"
                )
        for i, j in _nonorthogonal_pairs(self.states, first_only=True):
            raise UpbError("not_orthogonal", f"states {i} and {j} are not orthogonal")

    @property
    def size(self) -> int:
        return len(self.states)

    def __len__(self):
        return len(self.states)

    def __iter__(self):
        return iter(self.states)


def _nonorthogonal_pairs(states, first_only=False):
    for i in range(len(states)):
        for j in range(i + 1, len(states)):
            if global_inner(states[i], states[j]):
                yield i, j
                if first_only:
                    return


def missing_number(u: UpbCandidate) -> int:
    """``D - |S|``: how many states short of a full basis."""
    return u.dims.total - len(u.states)
