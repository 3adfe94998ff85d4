"""Which missing numbers are reachable in which dimensions.

The closure starts from base facts (explicit UPBs, minimum sizes, the GenTiles
family, the small seeds) and applies the construction rules until nothing
changes:

* column direct sum: ``k1 + k2`` in ``m x (n1+n2)``, either summand may be a
  complete basis (``k = 0``) of any width, but not both;
* row direct sum, the transpose of the above;
* tensor: ``m1 m2 n1 n2 - (m1 n1 - k1)(m2 n2 - k2)`` in ``m1 m2 x n1 n2``.

Rounds are synchronous, so each value's recorded derivation is one of the
shallowest. Sets are stored as int bitmasks.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import prod
from typing import Iterable, Optional, Sequence

from ._table1 import TABLE1
from .catalog import TABLE1_SEEDS, gentiles_missing, min_upb_size
from .combinators import EXISTENCE_RULES, DerivationNode, Rule
from .states import UpbCandidate, UpbError

__all__ = [
    "MissingFact",
    "Closure",
    "closure",
    "min_upb_size",
    "gentiles_missing",
    "near_square_range",
    "seven_column_range",
    "odd_rows_range",
    "even_rows_range",
    "wide_range",
    "lift_range",
    "multipartite_range",
    "theorem_ranges",
    "contiguous_top",
    "Table1Report",
    "reproduce_table1",
    "Realization",
    "realize",
    "multipartite_plan",
    "TABLE1",
]


def _bits(mask: int):
    v = 0
    while mask:
        if mask & 1:
            yield v
        mask >>= 1
        v += 1


def _sumset(a: int, b: int) -> int:
    out = 0
    for k in _bits(a):
        out |= b << k
    return out


@dataclass
class _Prov:
    rule: Rule
    parts: tuple = ()  # ("fact", dims, k) or ("pad", dims)
    label: Optional[str] = None


@dataclass
class MissingFact:
    dims: tuple
    values: list
    provenance: dict = field(default_factory=dict)  # value -> shallow JSON

    def __contains__(self, k):
        return k in set(self.values)

    def to_json(self) -> dict:
        return {
            "schema": "upb/1",
            "dims": list(self.dims),
            "values": list(self.values),
            "provenance": {str(k): self.provenance[k] for k in self.values},
        }


def _shallow(p: _Prov) -> dict:
    out = {"rule": p.rule.value}
    if p.label:
        out["label"] = p.label
    if p.parts:
        out["from"] = [
            {"dims": list(x[1]), "missing": x[2]} if x[0] == "fact"
            else {"dims": list(x[1]), "complete": True}
            for x in p.parts
        ]
    return out


class Closure:
    """Least fixpoint of the missing-number rules over a rectangular grid."""

    def __init__(self, max_m: int, max_n: int, extra_facts: Iterable = (),
                 buildable_only: bool = False):
        if max_m < 3 or max_n < 3:
            raise UpbError("hypothesis", "grid bounds must be at least 3")
        self.max_m, self.max_n = max_m, max_n
        self.buildable_only = buildable_only
        self.masks: dict = {(a, b): 0 for a in range(1, max_m + 1) for b in range(1, max_n + 1)}
        self.prov: dict = {}
        self.rounds = 0
        self.imports: dict = {}
        self._seed(extra_facts)
        self._run()

    # -- seeding ----------------------------------------------------------------

    def _add(self, dims, k, prov):
        if dims not in self.masks or not 0 < k < prod(dims):
            return
        if not self.masks[dims] >> k & 1:
            self.masks[dims] |= 1 << k
            self.prov[dims, k] = prov

    def _seed(self, extra_facts):
        self._add((3, 3), 4, _Prov(Rule.BASE, label="tiles3x3"))
        for fact in extra_facts:
            if isinstance(fact, UpbCandidate):
                if fact.dims.parties != 2:
                    continue
                dims = fact.dims.dims
                k = fact.dims.total - len(fact.states)
                self.imports[fact.label] = fact
                self._add(dims, k, _Prov(Rule.IMPORT, label=fact.label))
            elif not self.buildable_only:
                for k in fact.values:
                    self._add(tuple(fact.dims), k, _Prov(Rule.IMPORT, label="imported-fact"))
        if self.buildable_only:
            return
        for (a, b), values in TABLE1_SEEDS.items():
            for k in values:
                self._add((a, b), k, _Prov(Rule.SEED))
                self._add((b, a), k, _Prov(Rule.SEED))
        for a in range(3, self.max_m + 1):
            for b in range(3, self.max_n + 1):
                self._add((a, b), a * b - min_upb_size(a, b), _Prov(Rule.MIN_SIZE))
                m, n = min(a, b), max(a, b)
                if n > 3:
                    self._add((a, b), gentiles_missing(m, n), _Prov(Rule.GENTILES))

    # -- fixpoint ---------------------------------------------------------------

    def _run(self):
        changed = True
        while changed:
            changed = False
            old = dict(self.masks)
            for (a, b) in sorted(self.masks):
                if self._rules(a, b, old):
                    changed = True
            self.rounds += 1

    def _rules(self, a, b, old) -> bool:
        grew = False
        limit = (1 << (a * b)) - 1
        for n1 in range(1, b):
            grew |= self._sum_rule((a, b), (a, n1), (a, b - n1), old, Rule.DIRECT_SUM_B, limit)
        for m1 in range(1, a):
            grew |= self._sum_rule((a, b), (m1, b), (a - m1, b), old, Rule.DIRECT_SUM_A, limit)
        for m1 in _divisors(a):
            for n1 in _divisors(b):
                grew |= self._tensor_rule((a, b), (m1, n1), (a // m1, b // n1), old)
        return grew

    def _sum_rule(self, target, d1, d2, old, rule, limit) -> bool:
        A, B = old[d1], old[d2]
        if not A and not B:
            return False
        cand = (_sumset(A, B) | A | B) & limit & ~self.masks[target]
        for k in _bits(cand):
            self.prov[target, k] = _Prov(rule, _split(k, d1, A, d2, B))
        self.masks[target] |= cand
        return bool(cand)

    def _tensor_rule(self, target, d1, d2, old) -> bool:
        A, B = old[d1], old[d2]
        if not A or not B:
            return False
        D1, D2 = prod(d1), prod(d2)
        D = prod(target)
        grew = False
        for k1 in _bits(A):
            for k2 in _bits(B):
                k = D - (D1 - k1) * (D2 - k2)
                if 0 < k < D and not self.masks[target] >> k & 1:
                    self.masks[target] |= 1 << k
                    self.prov[target, k] = _Prov(
                        Rule.TENSOR, (("fact", d1, k1), ("fact", d2, k2))
                    )
                    grew = True
        return grew

    # -- queries ----------------------------------------------------------------

    def values(self, m: int, n: int) -> set:
        return set(_bits(self.masks.get((m, n), 0)))

    def __contains__(self, dims):
        return tuple(dims) in self.masks

    def fact(self, m: int, n: int) -> MissingFact:
        vals = sorted(self.values(m, n))
        return MissingFact((m, n), vals, {k: _shallow(self.prov[(m, n), k]) for k in vals})

    def derivation(self, dims, k: int) -> DerivationNode:
        """Full derivation tree of ``k`` at ``dims``; direct sums of direct sums
        with matching block sizes are folded into four-square nodes."""
        dims = tuple(dims)
        p = self.prov[dims, k]
        children = []
        for part in p.parts:
            if part[0] == "fact":
                children.append(self.derivation(part[1], part[2]))
            else:
                children.append(DerivationNode(Rule.COMPLETE, tuple(part[1]), 0))
        node = DerivationNode(p.rule, dims, k, children, label=p.label)
        return _fold_four_square(node)

    def as_dict(self) -> dict:
        return {dims: self.values(*dims) for dims in self.masks}


def _divisors(a):
    return [d for d in range(2, a // 2 + 1) if a % d == 0]


def _split(k, d1, A, d2, B) -> tuple:
    for k1 in _bits(A):
        if k1 >= k:
            break
        if B >> (k - k1) & 1:
            return (("fact", d1, k1), ("fact", d2, k - k1))
    if A >> k & 1:
        return (("fact", d1, k), ("pad", d2))
    return (("pad", d1), ("fact", d2, k))


def _fold_four_square(node: DerivationNode) -> DerivationNode:
    if node.rule not in (Rule.DIRECT_SUM_A, Rule.DIRECT_SUM_B) or len(node.children) != 2:
        return node
    inner = Rule.DIRECT_SUM_A if node.rule is Rule.DIRECT_SUM_B else Rule.DIRECT_SUM_B
    left, right = node.children
    if left.rule is not inner or right.rule is not inner:
        return node
    axis = 0 if inner is Rule.DIRECT_SUM_A else 1
    if left.children[0].dims[axis] != right.children[0].dims[axis]:
        return node
    if node.rule is Rule.DIRECT_SUM_B:
        blocks = [left.children[0], right.children[0], left.children[1], right.children[1]]
    else:
        blocks = [left.children[0], left.children[1], right.children[0], right.children[1]]
    return DerivationNode(Rule.FOUR_SQUARE, node.dims, node.missing, blocks)


_CACHE: dict = {}


def closure(max_m: int = 14, max_n: int = 14, extra_facts: Sequence = (),
            buildable_only: bool = False) -> Closure:
    """Cached :class:`Closure` for the default (no extra facts) case."""
    if extra_facts:
        return Closure(max_m, max_n, extra_facts, buildable_only)
    key = (max_m, max_n, buildable_only)
    if key not in _CACHE:
        _CACHE[key] = Closure(max_m, max_n, (), buildable_only)
    return _CACHE[key]


# -- guaranteed ranges ----------------------------------------------------------


def _hyp(ok: bool, msg: str):
    if not ok:
        raise UpbError("hypothesis", msg)


def near_square_range(n: int, m: int) -> set:
    """``C^n (x) C^m``, ``7 <= n <= m <= n+1``: 4 .. floor(mn/2)+1."""
    _hyp(7 <= n <= m <= n + 1, f"needs 7 <= n <= m <= n+1, got n={n}, m={m}")
    return set(range(4, m * n // 2 + 2))


def seven_column_range(n: int) -> set:
    """``C^n (x) C^7``, ``n >= 7``: 4 .. 6n-14, then 6n-12 and 6n-6 only."""
    _hyp(n >= 7, f"needs n >= 7, got {n}")
    return set(range(4, 6 * n - 13)) | {6 * n - 12, 6 * n - 6}


def odd_rows_range(a: int, n: int) -> set:
    """Odd ``a = 2m+1`` with ``m >= 2`` and ``n >= 10``: 4 .. 2m(n-8)."""
    _hyp(a % 2 == 1 and a >= 5 and n >= 10, f"needs odd a >= 5, n >= 10; got {a}, {n}")
    return set(range(4, (a - 1) * (n - 8) + 1))


def even_rows_range(a: int, n: int) -> set:
    """Even ``a = 2m`` with ``m >= 2`` and ``n >= 10``: 4 .. (2m-1)(n-8)."""
    _hyp(a % 2 == 0 and a >= 4 and n >= 10, f"needs even a >= 4, n >= 10; got {a}, {n}")
    return set(range(4, (a - 1) * (n - 8) + 1))


def wide_range(m: int, n: int) -> set:
    _hyp(m >= 4 and n >= 10, f"needs m >= 4, n >= 10; got {m}, {n}")
    return set(range(4, (m - 1) * (n - 8) + 1))


def lift_range(L: int, d_next: int) -> set:
    """Full run 4..L in N parties gives 4..d_next*L after adding a party."""
    _hyp(L >= 8 and d_next >= 2, f"needs L >= 8 and d >= 2; got L={L}, d={d_next}")
    return set(range(4, d_next * L + 1))


def multipartite_range(dims: Sequence[int]) -> set:
    dims = list(dims)
    _hyp(
        len(dims) >= 3 and dims == sorted(dims, reverse=True) and dims[0] >= 10 and dims[1] >= 4,
        f"needs N >= 3, non-increasing dims, d1 >= 10, d2 >= 4; got {dims}",
    )
    return set(range(4, (dims[0] - 8) * (dims[1] - 1) * prod(dims[2:]) + 1))


def theorem_ranges(*dims: int) -> dict:
    """Every guarantee whose hypothesis holds at ``dims`` (either party order)."""
    out = {}
    if len(dims) == 2:
        a, b = dims
        for name, fn, args in [
            ("near_square", near_square_range, [(a, b), (b, a)]),
            ("seven_column", lambda x, y: seven_column_range(x) if y == 7 else _raise(), [(a, b), (b, a)]),
            ("odd_rows", odd_rows_range, [(a, b), (b, a)]),
            ("even_rows", even_rows_range, [(a, b), (b, a)]),
            ("wide", wide_range, [(a, b), (b, a)]),
        ]:
            for x, y in args:
                try:
                    out[name] = fn(x, y)
                    break
                except UpbError:
                    pass
    else:
        try:
            out["multipartite"] = multipartite_range(dims)
        except UpbError:
            pass
    return out


def _raise():
    raise UpbError("hypothesis", "not applicable")


def contiguous_top(values: Iterable[int], start: int = 4) -> int:
    """Largest ``L`` with ``start..L`` all present (``start - 1`` if none)."""
    s = set(values)
    L = start - 1
    while L + 1 in s:
        L += 1
    return L


# -- table reproduction ---------------------------------------------------------


@dataclass
class Table1Report:
    cells: dict  # (m, n) -> {"table", "closure", "missed", "extra"}

    @property
    def missed_total(self) -> int:
        return sum(len(c["missed"]) for c in self.cells.values())

    @property
    def extra_total(self) -> int:
        return sum(len(c["extra"]) for c in self.cells.values())

    @property
    def ok(self) -> bool:
        return self.missed_total == 0

    def to_json(self) -> dict:
        return {
            "schema": "upb/1",
            "ok": self.ok,
            "missedTotal": self.missed_total,
            "extraTotal": self.extra_total,
            "cells": [
                {
                    "m": m,
                    "n": n,
                    "missed": sorted(c["missed"]),
                    "extra": sorted(c["extra"]),
                    "closure": compress(c["closure"]),
                }
                for (m, n), c in sorted(self.cells.items())
            ],
        }

    def grid_text(self) -> str:
        lines = []
        for m in range(3, 15):
            row = []
            for n in range(3, m + 1):
                c = self.cells[m, n]
                mark = "" if not c["missed"] else "!"
                row.append(compress(c["closure"]) + mark)
            lines.append(f"{m:>2} | " + " | ".join(row))
        return "\n".join(lines)


def compress(values: Iterable[int]) -> str:
    """{4,5,6,8} -> "4-6, 8"."""
    vals = sorted(values)
    out = []
    i = 0
    while i < len(vals):
        j = i
        while j + 1 < len(vals) and vals[j + 1] == vals[j] + 1:
            j += 1
        out.append(str(vals[i]) if i == j else f"{vals[i]}-{vals[j]}")
        i = j + 1
    return ", ".join(out)


def reproduce_table1(cl: Optional[Closure] = None) -> Table1Report:
    cl = cl or closure(14, 14)
    cells = {}
    for (m, n), listed in TABLE1.items():
        got = cl.values(m, n)
        cells[m, n] = {
            "table": set(listed),
            "closure": got,
            "missed": set(listed) - got,
            "extra": got - set(listed),
        }
    return Table1Report(cells)


# -- realization ----------------------------------------------------------------

BUILDABLE = "buildable"
EXISTENCE_ONLY = "existence-only"
UNKNOWN = "unknown"


@dataclass
class Realization:
    status: str
    derivation: Optional[DerivationNode] = None

    def to_json(self) -> dict:
        out = {"status": self.status}
        if self.derivation is not None:
            out["derivation"] = self.derivation.to_json()
        return out


def realize(dims: Sequence[int], k: int, max_dim: int = 14, imports: Sequence = ()) -> Realization:
    """A derivation of missing number ``k`` at ``dims``.

    Derivations whose leaves are all explicit UPBs are preferred; otherwise the
    result is existence-only (some leaf is a size fact), or unknown.
    """
    dims = tuple(dims)
    if len(dims) > 2:
        return _realize_multi(dims, k, imports)
    top = max(max_dim, *dims)
    build = closure(top, top, imports, buildable_only=True)
    if k in build.values(*dims):
        return Realization(BUILDABLE, build.derivation(dims, k))
    full = closure(top, top, imports)
    if k in full.values(*dims):
        return Realization(EXISTENCE_ONLY, full.derivation(dims, k))
    return Realization(UNKNOWN)


# -- multipartite -----------------------------------------------------------------


def _lift_level(prev: dict, K: int) -> dict:
    """Values reachable as a sum of K parts from ``prev`` or 0 (not all 0).

    Returns value -> tuple of K part values (0 marks a complete basis).
    """
    reach = {0: ()}
    options = sorted(prev, reverse=True) + [0]
    for _ in range(K):
        nxt = {}
        for s, parts in reach.items():
            for v in options:
                t = s + v
                if t not in nxt:
                    nxt[t] = parts + (v,)
        reach = nxt
    return {t: parts for t, parts in reach.items() if t > 0}


def multipartite_plan(dims: Sequence[int], imports: Sequence = (),
                      buildable_only: bool = False) -> MissingFact:
    """Missing numbers for ``d1 x d2 x ... x dN`` via repeated party lifts.

    Seeded by the bipartite closure at ``(d1, d2)``; each further party of
    dimension ``K`` lifts K parts (UPBs or complete bases, at least one UPB).
    """
    levels = _multi_levels(tuple(dims), imports, buildable_only)
    vals = sorted(levels[-1])
    prov = {}
    for k in vals:
        parts = levels[-1][k]
        prov[k] = {
            "rule": Rule.LIFT.value,
            "from": [
                {"dims": list(dims[:-1]), "missing": p} if p
                else {"dims": list(dims[:-1]), "complete": True}
                for p in parts
            ],
        }
    return MissingFact(tuple(dims), vals, prov)


def _multi_levels(dims, imports, buildable_only):
    if len(dims) < 3:
        raise UpbError("hypothesis", "multipartite plans need at least three parties")
    top = max(14, dims[0], dims[1])
    cl = closure(top, top, imports, buildable_only=buildable_only)
    base = {k: None for k in cl.values(dims[0], dims[1])}
    levels = [base]
    for K in dims[2:]:
        levels.append(_lift_level(set(levels[-1]), K))
    return levels


def _realize_multi(dims, k, imports) -> Realization:
    for mode, status in ((True, BUILDABLE), (False, EXISTENCE_ONLY)):
        levels = _multi_levels(dims, imports, mode)
        if k in levels[-1]:
            top = max(14, dims[0], dims[1])
            cl = closure(top, top, imports, buildable_only=mode)
            return Realization(status, _multi_tree(dims, k, levels, cl))
    return Realization(UNKNOWN)


def _multi_tree(dims, k, levels, cl) -> DerivationNode:
    if len(dims) == 2:
        return cl.derivation(dims, k)
    parts = levels[len(dims) - 2][k]
    sub = dims[:-1]
    children = [
        _multi_tree(sub, p, levels, cl) if p else DerivationNode(Rule.COMPLETE, sub, 0)
        for p in parts
    ]
    return DerivationNode(Rule.LIFT, dims, k, children)


def is_existence_rule(rule: Rule) -> bool:
    return rule in EXISTENCE_RULES
