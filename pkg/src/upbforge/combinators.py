"""Building new UPBs from old ones.

Every combinator returns a :class:`UpbCandidate` whose ``derivation`` records
how it was made. Missing numbers add under direct sums, four-square blocks and
the party lift; under the tensor product they follow ``D - l1*l2``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from math import prod
from typing import Optional, Sequence, Union

from .catalog import CompleteBasis, embed_states
from .linalg import ExactVector
from .states import ProductState, SystemDims, UpbCandidate, UpbError

__all__ = [
    "Rule",
    "DerivationNode",
    "Operand",
    "direct_sum_b",
    "direct_sum_a",
    "four_square",
    "tensor",
    "lift",
    "leaf_node",
]


class Rule(str, Enum):
    BASE = "Base"
    IMPORT = "Import"
    DIRECT_SUM_B = "DirectSumB"
    DIRECT_SUM_A = "DirectSumA"
    FOUR_SQUARE = "FourSquare"
    TENSOR = "Tensor"
    LIFT = "Lift"
    COMPLETE = "CompleteBasisPad"
    # leaves the planner may emit that carry no explicit states
    MIN_SIZE = "MinSizeLemma"
    GENTILES = "GenTilesLemma"
    SEED = "Table1Seed"


EXISTENCE_RULES = frozenset({Rule.MIN_SIZE, Rule.GENTILES, Rule.SEED})


@dataclass
class DerivationNode:
    rule: Rule
    dims: tuple
    missing: int
    children: list = field(default_factory=list)
    label: Optional[str] = None

    @property
    def buildable(self) -> bool:
        if self.rule in EXISTENCE_RULES:
            return False
        return all(c.buildable for c in self.children)

    def leaves(self):
        if not self.children:
            yield self
        for c in self.children:
            yield from c.leaves()

    def to_json(self) -> dict:
        out = {"rule": self.rule.value, "dims": list(self.dims), "missing": self.missing}
        if self.label is not None:
            out["label"] = self.label
        if self.children:
            out["children"] = [c.to_json() for c in self.children]
        return out

    @classmethod
    def from_json(cls, data) -> "DerivationNode":
        if not isinstance(data, dict) or "rule" not in data:
            raise UpbError("bad_recipe", "derivation node must be an object with a rule")
        try:
            rule = Rule(data["rule"])
        except ValueError as exc:
            raise UpbError("bad_recipe", f"unknown rule {data['rule']!r}") from exc
        return cls(
            rule=rule,
            dims=tuple(data.get("dims", ())),
            missing=int(data.get("missing", 0)),
            children=[cls.from_json(c) for c in data.get("children", [])],
            label=data.get("label"),
        )

    def pretty(self, indent: int = 0) -> str:
        head = f"{'  ' * indent}{self.rule.value}"
        if self.label:
            head += f"[{self.label}]"
        head += f" {'x'.join(map(str, self.dims))} k={self.missing}"
        return "\n".join([head] + [c.pretty(indent + 1) for c in self.children])


Operand = Union[UpbCandidate, CompleteBasis]


def leaf_node(x: Operand) -> DerivationNode:
    if isinstance(x, CompleteBasis):
        return DerivationNode(Rule.COMPLETE, x.dims, 0)
    if x.derivation is not None:
        return x.derivation
    rule = Rule.BASE if x.source in (None, "catalog") else Rule.IMPORT
    return DerivationNode(rule, x.dims.dims, x.dims.total - len(x.states), label=x.label)


def _dims(x: Operand) -> tuple:
    return x.dims if isinstance(x, CompleteBasis) else x.dims.dims


def _missing(x: Operand) -> int:
    return 0 if isinstance(x, CompleteBasis) else x.dims.total - len(x.states)


def _states(x: Operand) -> list:
    return x.states if isinstance(x, CompleteBasis) else list(x.states)


def _build(dims, states, rule, operands, label) -> UpbCandidate:
    dims = tuple(dims)
    node = DerivationNode(
        rule, dims, prod(dims) - len(states), [leaf_node(o) for o in operands]
    )
    return UpbCandidate(SystemDims(dims), states, label=label, derivation=node, source="derived")


def _direct_sum(S1: Operand, S2: Operand, party: int, rule: Rule, name: str) -> UpbCandidate:
    d1, d2 = _dims(S1), _dims(S2)
    if len(d1) != 2 or len(d2) != 2:
        raise UpbError("not_bipartite", f"{name} needs bipartite operands")
    other = 1 - party
    if d1[other] != d2[other]:
        raise UpbError(
            "dims_mismatch",
            f"{name}: party {'AB'[other]} dimensions differ ({d1[other]} vs {d2[other]})",
        )
    if isinstance(S1, CompleteBasis) and isinstance(S2, CompleteBasis):
        raise UpbError("all_complete", f"{name}: at least one operand must be a genuine UPB")
    n1, n2 = d1[party], d2[party]
    total = n1 + n2
    states = embed_states(_states(S1), party, 0, total) + embed_states(
        _states(S2), party, n1, total
    )
    dims = list(d1)
    dims[party] = total
    label = f"{name}({_label(S1)}, {_label(S2)})"
    return _build(dims, states, rule, [S1, S2], label)


def _label(x: Operand) -> str:
    return x.label


def direct_sum_b(S1: Operand, S2: Operand) -> UpbCandidate:
    """Union of ``S1`` on B-columns ``[0, n1)`` and ``S2`` on ``[n1, n1+n2)``.

    Either operand (not both) may be a :class:`CompleteBasis`, which
    contributes zero to the missing number.
    """
    return _direct_sum(S1, S2, 1, Rule.DIRECT_SUM_B, "dsum_b")


def direct_sum_a(S1: Operand, S2: Operand) -> UpbCandidate:
    """Row analogue of :func:`direct_sum_b`: ``S1`` on top, ``S2`` below."""
    return _direct_sum(S1, S2, 0, Rule.DIRECT_SUM_A, "dsum_a")


def four_square(S11: Operand, S12: Operand, S21: Operand, S22: Operand) -> UpbCandidate:
    """Block composition; ``Sij`` sits in row block i, column block j."""
    blocks = [S11, S12, S21, S22]
    if all(isinstance(b, CompleteBasis) for b in blocks):
        raise UpbError("all_complete", "foursq: at least one block must be a genuine UPB")
    d = [_dims(b) for b in blocks]
    if any(len(x) != 2 for x in d):
        raise UpbError("not_bipartite", "foursq needs bipartite blocks")
    if d[0][0] != d[1][0] or d[2][0] != d[3][0] or d[0][1] != d[2][1] or d[1][1] != d[3][1]:
        raise UpbError("dims_mismatch", f"foursq: incompatible block dims {d}")
    top = _rows(S11, S12)
    bottom = _rows(S21, S22)
    m1, m2 = d[0][0], d[2][0]
    n = d[0][1] + d[1][1]
    states = embed_states(top, 0, 0, m1 + m2) + embed_states(bottom, 0, m1, m1 + m2)
    label = f"foursq({', '.join(_label(b) for b in blocks)})"
    return _build((m1 + m2, n), states, Rule.FOUR_SQUARE, blocks, label)


def _rows(left: Operand, right: Operand) -> list:
    # a row of two complete bases is itself a complete block, which is fine here
    n1, n2 = _dims(left)[1], _dims(right)[1]
    return embed_states(_states(left), 1, 0, n1 + n2) + embed_states(
        _states(right), 1, n1, n1 + n2
    )


def tensor(S1: UpbCandidate, S2: UpbCandidate) -> UpbCandidate:
    """States ``|psi_i> (x) |psi_j>`` grouped as (A1 A2) | (B1 B2)."""
    for s in (S1, S2):
        if isinstance(s, CompleteBasis):
            raise UpbError("all_complete", "tensor needs two genuine UPBs")
        if s.dims.parties != 2:
            raise UpbError("not_bipartite", "tensor needs bipartite operands")
    states = [
        ProductState([p.factors[0].kron(q.factors[0]), p.factors[1].kron(q.factors[1])])
        for p in S1.states
        for q in S2.states
    ]
    (m1, n1), (m2, n2) = S1.dims.dims, S2.dims.dims
    label = f"tensor({S1.label}, {S2.label})"
    return _build((m1 * m2, n1 * n2), states, Rule.TENSOR, [S1, S2], label)


def lift(parts: Sequence[Operand]) -> UpbCandidate:
    """Add a party of dimension ``K = len(parts)``; part i gets the factor ``|i>``."""
    parts = list(parts)
    K = len(parts)
    if K < 2:
        raise UpbError("hypothesis", "lift needs at least two parts")
    if all(isinstance(p, CompleteBasis) for p in parts):
        raise UpbError("all_complete", "lift: at least one part must be a genuine UPB")
    dims = _dims(parts[0])
    if any(_dims(p) != dims for p in parts):
        raise UpbError("dims_mismatch", "lift: all parts must share dims")
    if any(d < 2 for d in dims):
        raise UpbError("dims_invalid", f"lift: bad dims {dims}")
    states = []
    for i, part in enumerate(parts):
        tag = ExactVector(int(j == i) for j in range(K))
        states.extend(ProductState(list(s.factors) + [tag]) for s in _states(part))
    label = f"lift({', '.join(_label(p) for p in parts)})"
    return _build(tuple(dims) + (K,), states, Rule.LIFT, parts, label)
