"""Token bags feeding the embedding function.

Two views of a class: class-level tokens (name, field names, method names,
parameter names, invoked method names) and method-level tokens (invoked
names, parameters, accessed fields, locals) with call-graph inlining.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import TYPE_CHECKING

from .model import ClassDescriptor, MethodDescriptor

if TYPE_CHECKING:  # pragma: no cover
    from .extract import CallGraph

_SPLIT_RE = re.compile(
    r"""
    [A-Z]+(?![a-z0-9])   # run of uppercase not followed by lowercase (acronym)
    | [A-Z][a-z]*        # capitalized word
    | [a-z]+             # lowercase run
    | [0-9]+             # digit run
    """,
    re.VERBOSE,
)


@dataclass(frozen=True)
class TokenBag:
    """Multiset of lowercase word tokens, stored in a stable order."""

    tokens: tuple[str, ...]

    def __post_init__(self):
        for t in self.tokens:
            if not t or "_" in t or t != t.lower():
                raise ValueError(f"ill-formed token {t!r}")

    def as_set(self) -> frozenset[str]:
        return frozenset(self.tokens)

    def __len__(self) -> int:
        return len(self.tokens)


def split_identifier(identifier: str) -> list[str]:
    """Split an identifier at camel-case, digit, and underscore boundaries.

    The lowercased concatenation of the output (with underscores erased)
    reproduces the input. Examples: ``elementData`` -> ``[element, data]``,
    ``parseHTTPResponse2`` -> ``[parse, http, response, 2]``.
    """
    if not identifier:
        raise ValueError("empty identifier")
    words: list[str] = []
    for part in identifier.replace("$", "_").split("_"):
        if part:
            words.extend(m.lower() for m in _SPLIT_RE.findall(part))
    return words


def _split_many(names) -> list[str]:
    out: list[str] = []
    for n in names:
        out.extend(split_identifier(n))
    return out


def class_tokens(c: ClassDescriptor) -> TokenBag:
    """Class-level bag: simple name, fields, methods, parameters, callees.

    Constructor entries contribute their parameter and callee names but the
    placeholder constructor name itself is skipped (it is not an identifier).
    All declared methods count, regardless of visibility.
    """
    toks: list[str] = []
    toks.extend(split_identifier(c.simple_name))
    toks.extend(_split_many(f.name for f in c.fields))
    for m in c.methods:
        if not m.is_constructor:
            toks.extend(split_identifier(m.name))
    for m in c.methods:
        toks.extend(_split_many(p for p, _ in m.parameters))
    for m in c.methods:
        toks.extend(_split_many(i.callee for i in m.invoked_methods))
    return TokenBag(tuple(toks))


def _own_method_tokens(m: MethodDescriptor) -> list[str]:
    toks = _split_many(i.callee for i in m.invoked_methods)
    toks.extend(_split_many(p for p, _ in m.parameters))
    toks.extend(_split_many(sorted(m.fields_read | m.fields_written)))
    toks.extend(_split_many(m.local_variables))
    return toks


def method_tokens(
    m: MethodDescriptor,
    owner: ClassDescriptor,
    call_graph: "CallGraph",
    inline_depth: int,
    include_own_name: bool = False,
) -> TokenBag:
    """Method-level bag with self-call inlining up to ``inline_depth``.

    Tokens come from invoked method names, parameter names, accessed field
    names and local variables, of the method itself and of every self-receiver
    callee reachable through the call graph. A method is inlined at most once
    per call path, so recursion terminates. The method's own name is excluded
    unless ``include_own_name`` is set.
    """
    if inline_depth < 0:
        raise ValueError("inline_depth must be >= 0")
    by_key = {meth.key: meth for meth in owner.methods}
    edges = call_graph.edges_by_caller()

    toks: list[str] = []
    if include_own_name and not m.is_constructor:
        toks.extend(split_identifier(m.name))

    def inline(meth: MethodDescriptor, depth: int, path: frozenset[str]):
        toks.extend(_own_method_tokens(meth))
        if depth == 0:
            return
        for callee_key in edges.get(meth.key, ()):
            if callee_key in path:
                continue
            callee = by_key.get(callee_key)
            if callee is not None:
                inline(callee, depth - 1, path | {callee_key})

    inline(m, inline_depth, frozenset({m.key}))
    return TokenBag(tuple(toks))
