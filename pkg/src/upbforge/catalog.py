"""Explicit base UPBs, block embeddings, JSON interchange and size facts."""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from enum import Enum
from math import prod
from typing import Callable, Sequence

from .linalg import ExactVector
from .states import ProductState, SystemDims, UpbCandidate, UpbError, ket, product

__all__ = [
    "SCHEMA",
    "CompleteBasis",
    "FactSource",
    "ExistenceFact",
    "tiles_3x3",
    "tiles_3x3_shifted",
    "tiles_3x3_right_block",
    "embed",
    "restrict",
    "complete_product_basis",
    "export_upb",
    "import_upb",
    "load_upb",
    "dump_upb",
    "existence_facts",
    "BASES",
    "min_upb_size",
    "gentiles_missing",
]

SCHEMA = "upb/1"


def tiles_3x3() -> UpbCandidate:
    """The five-state Tiles UPB of C^3 (x) C^3."""
    k = lambda s: ket(3, s)  # noqa: E731
    states = [
        product(k("0"), k("0-1")),
        product(k("0-1"), k("2")),
        product(k("1-2"), k("0")),
        product(k("2"), k("1-2")),
        product(k("0+1+2"), k("0+1+2")),
    ]
    return UpbCandidate(SystemDims((3, 3)), states, label="tiles3x3", source="catalog")


def tiles_3x3_shifted() -> UpbCandidate:
    """Right-block Tiles copy: B factors live on coordinates 3..5 of C^6.

    As a 15-dimensional-complement set in C^3 (x) C^6 this is *not* a UPB on
    its own; it is one only inside its block (see :func:`tiles_3x3_right_block`).
    """
    a = lambda s: ket(3, s)  # noqa: E731
    b = lambda s: ket(6, s)  # noqa: E731
    states = [
        product(a("0"), b("3-4")),
        product(a("0-1"), b("5")),
        product(a("2"), b("4-5")),
        product(a("1-2"), b("3")),
        product(a("0+1+2"), b("3+4+5")),
    ]
    return UpbCandidate(
        SystemDims((3, 6)), states, label="tiles3x3_shifted", source="catalog"
    )


def tiles_3x3_right_block() -> UpbCandidate:
    """:func:`tiles_3x3_shifted` restricted to its own 3x3 block, order kept."""
    u = restrict(tiles_3x3_shifted(), party=1, offset=3, dim=3)
    return UpbCandidate(u.dims, u.states, label="tiles3x3_shifted", source="catalog")


BASES: dict[str, Callable[[], UpbCandidate]] = {
    "tiles3x3": tiles_3x3,
    # the recipe leaf is the 3x3 pattern; direct sums place it on its block
    "tiles3x3_shifted": tiles_3x3_right_block,
}


@dataclass(frozen=True)
class CompleteBasis:
    """The standard product basis, usable as a zero-missing operand.

    Party dimensions may be 1 here: a width-one column block is a legitimate
    direct-sum summand even though no UPB lives there.
    """

    dims: tuple

    def __init__(self, dims: Sequence[int]):
        dims = tuple(int(d) for d in dims)
        if len(dims) < 2 or any(d < 1 for d in dims):
            raise UpbError("dims_invalid", f"bad complete-basis dims {dims}")
        object.__setattr__(self, "dims", dims)

    @property
    def states(self) -> list[ProductState]:
        return complete_product_basis(self.dims)

    @property
    def size(self) -> int:
        return prod(self.dims)

    @property
    def label(self) -> str:
        return "complete(" + "x".join(map(str, self.dims)) + ")"


def complete_product_basis(dims) -> list[ProductState]:
    """All ``D`` standard-basis product states in row-major order."""
    dims = tuple(dims.dims) if isinstance(dims, SystemDims) else tuple(dims)
    out = []
    for idx in itertools.product(*(range(d) for d in dims)):
        out.append(
            ProductState(
                [ExactVector(int(i == j) for j in range(d)) for i, d in zip(idx, dims)]
            )
        )
    return out


def _pad(v: ExactVector, offset: int, new_dim: int) -> ExactVector:
    return ExactVector([0] * offset + list(v.entries) + [0] * (new_dim - offset - v.dim))


def embed_states(states, party: int, offset: int, new_dim: int) -> list[ProductState]:
    out = []
    for s in states:
        f = list(s.factors)
        if offset < 0 or offset + f[party].dim > new_dim:
            raise UpbError(
                "block_out_of_range",
                f"block [{offset}, {offset + f[party].dim}) does not fit in {new_dim}",
            )
        f[party] = _pad(f[party], offset, new_dim)
        out.append(ProductState(f))
    return out


def embed(u: UpbCandidate, party: int, offset: int, new_dim: int) -> UpbCandidate:
    """Place ``u`` on the coordinate block ``[offset, offset+d)`` of one party."""
    dims = list(u.dims.dims)
    if not 0 <= party < len(dims):
        raise UpbError("dims_invalid", f"no party {party}")
    if offset < 0 or offset + dims[party] > new_dim:
        raise UpbError(
            "block_out_of_range",
            f"block [{offset}, {offset + dims[party]}) does not fit in {new_dim}",
        )
    states = embed_states(u.states, party, offset, new_dim)
    dims[party] = new_dim
    return UpbCandidate(
        SystemDims(dims), states, label=u.label, derivation=u.derivation, source=u.source
    )


def restrict(u: UpbCandidate, party: int, offset: int, dim: int) -> UpbCandidate:
    """Inverse of :func:`embed`; fails if any factor leaves the block."""
    states = []
    for s in u.states:
        f = list(s.factors)
        v = f[party].entries
        if any(v[i] for i in range(len(v)) if not offset <= i < offset + dim):
            raise UpbError("block_out_of_range", "state has support outside the block")
        f[party] = ExactVector(v[offset:offset + dim])
        states.append(ProductState(f))
    dims = list(u.dims.dims)
    dims[party] = dim
    return UpbCandidate(SystemDims(dims), states, label=u.label, source=u.source)


# -- JSON interchange ----------------------------------------------------------


def export_upb(u: UpbCandidate) -> dict:
    doc = {
        "schema": SCHEMA,
        "dims": list(u.dims.dims),
        "label": u.label,
        "states": [s.to_json() for s in u.states],
    }
    if u.source:
        doc["source"] = u.source
    if u.derivation is not None:
        doc["derivation"] = u.derivation.to_json()
    return doc


def import_upb(doc, source: str | None = None) -> UpbCandidate:
    """Validate and load a UPB document.

    Raises :class:`UpbError` with codes ``malformed``, ``malformed_rational``,
    ``dims_invalid``, ``dims_mismatch``, ``zero_factor``, ``not_orthogonal`` or
    ``size_out_of_range``.
    """
    if not isinstance(doc, dict):
        raise UpbError("malformed", "document must be a JSON object")
    for key in ("dims", "states"):
        if key not in doc:
            raise UpbError("malformed", f"missing key {key!r}")
    dims = doc["dims"]
    if not isinstance(dims, list) or not all(isinstance(d, int) for d in dims):
        raise UpbError("malformed", "dims must be a list of integers")
    sdims = SystemDims(dims)
    if not isinstance(doc["states"], list):
        raise UpbError("malformed", "states must be a list")
    states = []
    for i, raw in enumerate(doc["states"]):
        s = ProductState.from_json(raw)
        if s.dims != sdims.dims:
            raise UpbError("dims_mismatch", f"state {i} has dims {s.dims}, expected {sdims.dims}")
        states.append(s)
    derivation = None
    if doc.get("derivation") is not None:
        from .combinators import DerivationNode

        derivation = DerivationNode.from_json(doc["derivation"])
    return UpbCandidate(
        sdims,
        states,
        label=str(doc.get("label", "")),
        derivation=derivation,
        source=source or doc.get("source") or "import",
    )


def load_upb(path, source: str | None = None) -> UpbCandidate:
    try:
        with open(path, encoding="utf-8") as fh:
            doc = json.load(fh)
    except json.JSONDecodeError as exc:
        raise UpbError("malformed", f"{path}: {exc}") from exc
    return import_upb(doc, source=source)


def dump_upb(u: UpbCandidate, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(export_upb(u), fh, indent=1)
        fh.write("\n")


# -- existence-only size facts ------------------------------------------------


class FactSource(str, Enum):
    MIN_SIZE = "MinSizeLemma"
    GENTILES = "GenTilesLemma"
    TABLE1_SEED = "Table1Seed"
    IMPORTED = "Imported"


@dataclass(frozen=True)
class ExistenceFact:
    dims: tuple
    size: int
    source: FactSource

    def __post_init__(self):
        if not 1 <= self.size < prod(self.dims):
            raise UpbError("size_out_of_range", f"size {self.size} impossible in {self.dims}")

    @property
    def missing(self) -> int:
        return prod(self.dims) - self.size

    def to_json(self) -> dict:
        return {
            "dims": list(self.dims),
            "size": self.size,
            "missing": self.missing,
            "source": self.source.value,
        }


def min_upb_size(d1: int, d2: int) -> int:
    """Smallest bipartite UPB size for ``d1, d2 >= 3``."""
    if d1 < 3 or d2 < 3:
        raise UpbError("hypothesis", f"minimum size formula needs d1, d2 >= 3, got {d1}, {d2}")
    if d1 % 2 == 0 and d2 % 2 == 0:
        return d1 + d2
    return d1 + d2 - 1


def gentiles_missing(m: int, n: int) -> int:
    """Missing number ``2m - 1`` of the size ``mn - 2m + 1`` family."""
    if not (m >= 3 and n > 3 and n >= m):
        raise UpbError("hypothesis", f"GenTiles size needs m >= 3, n > 3, n >= m; got {m}, {n}")
    return m * n - (m * n - 2 * m + 1)


# C^3 (x) C^4 UPBs of sizes 6, 7, 8 exist; 4 is the Tiles cell
TABLE1_SEEDS = {(3, 3): (4,), (3, 4): (4, 5, 6)}


def existence_facts(max_m: int, max_n: int) -> list[ExistenceFact]:
    """Size facts for all ``3 <= d1 <= d2`` with ``d1 <= max_m``, ``d2 <= max_n``."""
    if max_m < 3 or max_n < 3:
        raise UpbError("hypothesis", "grid bounds must be at least 3")
    facts = []
    for d1 in range(3, max_m + 1):
        for d2 in range(d1, max_n + 1):
            facts.append(ExistenceFact((d1, d2), min_upb_size(d1, d2), FactSource.MIN_SIZE))
            if d2 > 3:
                size = d1 * d2 - gentiles_missing(d1, d2)
                facts.append(ExistenceFact((d1, d2), size, FactSource.GENTILES))
    for dims, values in TABLE1_SEEDS.items():
        if dims[0] <= max_m and dims[1] <= max_n:
            for k in values:
                facts.append(ExistenceFact(dims, prod(dims) - k, FactSource.TABLE1_SEED))
    return facts
