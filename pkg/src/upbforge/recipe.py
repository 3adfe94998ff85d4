"""Textual recipes and derivation trees -> materialized UPBs.

Grammar::

    recipe := ident | ident "(" recipe ("," recipe)* ")"

Leaves are catalog names (``tiles3x3``, ``tiles3x3_shifted``), imported names,
or ``complete(MxN[xK...])``. Nodes are ``dsum_a``, ``dsum_b``, ``foursq``,
``tensor`` and ``lift``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from .catalog import BASES, CompleteBasis
from .combinators import (
    DerivationNode,
    Rule,
    direct_sum_a,
    direct_sum_b,
    four_square,
    lift,
    tensor,
)
from .states import UpbError

__all__ = ["Call", "parse_recipe", "build", "build_derivation", "to_recipe"]

_TOKEN = re.compile(r"\s*(?:([A-Za-z_][A-Za-z0-9_.\-]*|\d+(?:x\d+)+)|(.))")
_DIMS = re.compile(r"^\d+(x\d+)+$")

NODES = {
    "dsum_a": (direct_sum_a, 2, 2),
    "dsum_b": (direct_sum_b, 2, 2),
    "foursq": (four_square, 4, 4),
    "tensor": (tensor, 2, 2),
    "lift": (None, 2, None),
}


@dataclass
class Call:
    name: str
    args: list = field(default_factory=list)


def _tokens(text: str):
    pos = 0
    out = []
    text = text.strip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            break
        word, sym = m.groups()
        if word is not None:
            out.append(("id", word))
        elif sym in "(),":
            out.append((sym, sym))
        elif sym.strip():
            raise UpbError("bad_recipe", f"unexpected character {sym!r} in recipe")
        pos = m.end()
    return out


def parse_recipe(text: str) -> Call:
    toks = _tokens(text)
    if not toks:
        raise UpbError("bad_recipe", "empty recipe")
    pos = 0

    def expr():
        nonlocal pos
        if pos >= len(toks) or toks[pos][0] != "id":
            raise UpbError("bad_recipe", f"expected a name at token {pos}")
        name = toks[pos][1]
        pos += 1
        call = Call(name)
        if pos < len(toks) and toks[pos][0] == "(":
            pos += 1
            call.args.append(expr())
            while pos < len(toks) and toks[pos][0] == ",":
                pos += 1
                call.args.append(expr())
            if pos >= len(toks) or toks[pos][0] != ")":
                raise UpbError("bad_recipe", "missing ')'")
            pos += 1
        return call

    tree = expr()
    if pos != len(toks):
        raise UpbError("bad_recipe", f"trailing input after token {pos}")
    return tree


def _dims_arg(call: Call) -> tuple:
    if len(call.args) != 1 or call.args[0].args or not _DIMS.match(call.args[0].name):
        raise UpbError("bad_recipe", "complete() takes one argument like 3x3")
    return tuple(int(x) for x in call.args[0].name.split("x"))


def build(recipe, imports: dict | None = None):
    """Evaluate a recipe (text or parsed :class:`Call`) to a UPB or complete basis."""
    imports = imports or {}
    call = parse_recipe(recipe) if isinstance(recipe, str) else recipe
    name = call.name
    if name == "complete":
        return CompleteBasis(_dims_arg(call))
    if name in NODES:
        fn, lo, hi = NODES[name]
        if len(call.args) < lo or (hi is not None and len(call.args) > hi):
            raise UpbError("bad_recipe", f"{name} takes {lo if lo == hi else f'{lo}+'} arguments")
        args = [build(a, imports) for a in call.args]
        if name == "lift":
            return lift(args)
        return fn(*args)
    if call.args:
        raise UpbError("bad_recipe", f"unknown node {name!r}")
    if name in imports:
        return imports[name]
    if name in BASES:
        return BASES[name]()
    raise UpbError("bad_recipe", f"unknown recipe leaf {name!r}")


_RULE_FN = {
    Rule.DIRECT_SUM_A: direct_sum_a,
    Rule.DIRECT_SUM_B: direct_sum_b,
    Rule.FOUR_SQUARE: four_square,
    Rule.TENSOR: tensor,
}


def build_derivation(node: DerivationNode, imports: dict | None = None):
    """Materialize a derivation tree; existence-only leaves cannot be built."""
    imports = imports or {}
    if node.rule is Rule.COMPLETE:
        return CompleteBasis(node.dims)
    if node.rule in (Rule.BASE, Rule.IMPORT):
        label = node.label or ""
        if label in imports:
            return imports[label]
        if label in BASES:
            return BASES[label]()
        raise UpbError("bad_recipe", f"unknown leaf {label!r}")
    if node.rule is Rule.LIFT:
        return lift([build_derivation(c, imports) for c in node.children])
    if node.rule in _RULE_FN:
        return _RULE_FN[node.rule](*(build_derivation(c, imports) for c in node.children))
    raise UpbError(
        "not_buildable",
        f"{node.rule.value} at {'x'.join(map(str, node.dims))} is a size fact without states",
    )


_RULE_NAME = {
    Rule.DIRECT_SUM_A: "dsum_a",
    Rule.DIRECT_SUM_B: "dsum_b",
    Rule.FOUR_SQUARE: "foursq",
    Rule.TENSOR: "tensor",
    Rule.LIFT: "lift",
}


def to_recipe(node: DerivationNode) -> str:
    """Inverse of :func:`parse_recipe` for buildable trees."""
    if node.rule is Rule.COMPLETE:
        return f"complete({'x'.join(map(str, node.dims))})"
    if node.rule in _RULE_NAME:
        return f"{_RULE_NAME[node.rule]}({', '.join(to_recipe(c) for c in node.children)})"
    if node.label:
        return node.label
    return f"<{node.rule.value}:{'x'.join(map(str, node.dims))}:{node.missing}>"
