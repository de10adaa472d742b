"""Source extraction: Java-subset parsing, call graphs, inheritance flattening.

The accepted grammar is documented in ``grammar.ebnf`` (normative). Parsing
produces immutable :class:`~cfind.model.ClassDescriptor` values; body analysis
records identifier order, direct field accesses, and every call expression.
Expressions are tokenized but not interpreted beyond identifier/call/operator
structure.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Sequence

from .model import (
    CONSTRUCTOR_NAME,
    PRIMITIVES,
    ClassDescriptor,
    FieldDescriptor,
    Invocation,
    MethodDescriptor,
    TypeRef,
    with_fields,
)

KEYWORDS = frozenset(
    {
        "abstract", "boolean", "break", "byte", "case", "char", "class",
        "continue", "default", "do", "double", "else", "extends", "false",
        "final", "float", "for", "if", "implements", "import", "instanceof",
        "int", "interface", "long", "native", "new", "null", "package",
        "private", "protected", "public", "return", "short", "static",
        "strictfp", "super", "switch", "synchronized", "this", "throw",
        "throws", "transient", "true", "void", "volatile", "while",
    }
)

MODIFIERS = frozenset(
    {
        "public", "protected", "private", "static", "final", "abstract",
        "transient", "volatile", "native", "synchronized", "strictfp",
        "default",
    }
)

_OPERATORS = [
    ">>>=", ">>>", ">>=", "<<=", "<<", ">=", "<=", "==", "!=", "&&", "||",
    "++", "--", "+=", "-=", "*=", "/=", "%=", "&=", "|=", "^=", "->", "::",
    "...", "+", "-", "*", "/", "%", "=", "<", ">", "!", "&", "|", "^", "~",
    "?", ":", ";", ",", ".", "(", ")", "{", "}", "[", "]", "@",
]

ASSIGN_OPS = frozenset({"=", "+=", "-=", "*=", "/=", "%=", "&=", "|=", "^=", "<<=", ">>=", ">>>="})

_OPEN = {"(": ")", "[": "]", "{": "}"}
_CLOSE = {")", "]", "}"}


class ParseError(Exception):
    """Syntax failure with source position; carries classes parsed so far."""

    def __init__(self, message: str, line: int, column: int, partial=()):
        super().__init__(f"{message} at line {line}, column {column}")
        self.line = line
        self.column = column
        self.partial = tuple(partial)


class CycleError(Exception):
    """Supertype chain revisits a class during flattening."""


@dataclass(frozen=True)
class Tok:
    kind: str  # 'ident' | 'kw' | 'num' | 'str' | 'char' | 'punc' | 'eof'
    text: str
    line: int
    col: int


def _lex(text: str) -> list[Tok]:
    toks: list[Tok] = []
    i, n = 0, len(text)
    line, col = 1, 1

    def advance(k: int):
        nonlocal i, line, col
        for _ in range(k):
            if i < n and text[i] == "\n":
                line += 1
                col = 1
            else:
                col += 1
            i += 1

    while i < n:
        ch = text[i]
        if ch in " \t\r\n":
            advance(1)
            continue
        if text.startswith("//", i):
            j = text.find("\n", i)
            advance((j - i) if j != -1 else (n - i))
            continue
        if text.startswith("/*", i):
            j = text.find("*/", i + 2)
            if j == -1:
                raise ParseError("unterminated block comment", line, col)
            advance(j + 2 - i)
            continue
        if ch.isalpha() or ch in "_$":
            j = i
            while j < n and (text[j].isalnum() or text[j] in "_$"):
                j += 1
            word = text[i:j]
            toks.append(Tok("kw" if word in KEYWORDS else "ident", word, line, col))
            advance(j - i)
            continue
        if ch.isdigit() or (ch == "." and i + 1 < n and text[i + 1].isdigit()):
            j = i
            while j < n and (text[j].isalnum() or text[j] in "._xX"):
                # numeric literal: digits, hex, underscores, suffixes, dots
                if text[j] == "." and not (j + 1 < n and (text[j + 1].isdigit() or text[j + 1] in "fFdDeE")):
                    break
                j += 1
            toks.append(Tok("num", text[i:j], line, col))
            advance(j - i)
            continue
        if ch == '"':
            j = i + 1
            while j < n and text[j] != '"':
                if text[j] == "\\":
                    j += 1
                j += 1
            if j >= n:
                raise ParseError("unterminated string literal", line, col)
            toks.append(Tok("str", text[i : j + 1], line, col))
            advance(j + 1 - i)
            continue
        if ch == "'":
            j = i + 1
            while j < n and text[j] != "'":
                if text[j] == "\\":
                    j += 1
                j += 1
            if j >= n:
                raise ParseError("unterminated char literal", line, col)
            toks.append(Tok("char", text[i : j + 1], line, col))
            advance(j + 1 - i)
            continue
        for op in _OPERATORS:
            if text.startswith(op, i):
                toks.append(Tok("punc", op, line, col))
                advance(len(op))
                break
        else:
            raise ParseError(f"unexpected character {ch!r}", line, col)
    toks.append(Tok("eof", "", line, col))
    return toks


def _match_group(toks: Sequence[Tok], i: int) -> int:
    """Index just past the group opened at ``i`` (toks[i] in ( [ {)."""
    opener = toks[i].text
    closer = _OPEN[opener]
    depth = 0
    j = i
    while j < len(toks):
        t = toks[j].text
        if t == opener:
            depth += 1
        elif t == closer:
            depth -= 1
            if depth == 0:
                return j + 1
        elif toks[j].kind == "eof":
            break
        elif t in _OPEN and t != opener:
            j = _match_group(toks, j) - 1
        j += 1
    raise ParseError(f"unbalanced '{opener}'", toks[i].line, toks[i].col)


def _split_depth0(toks: Sequence[Tok], sep: str) -> list[list[Tok]]:
    parts: list[list[Tok]] = []
    cur: list[Tok] = []
    depth = 0
    for t in toks:
        if t.text in _OPEN:
            depth += 1
        elif t.text in _CLOSE:
            depth -= 1
        if depth == 0 and t.kind == "punc" and t.text == sep:
            parts.append(cur)
            cur = []
        else:
            cur.append(t)
    parts.append(cur)
    return parts


def _looks_like_type(toks: Sequence[Tok], typevars: frozenset[str]) -> bool:
    """Heuristic cast detection: the slice is a bare type expression."""
    if not toks:
        return False
    i = 0
    if toks[i].kind == "kw" and toks[i].text in PRIMITIVES:
        i += 1
    elif toks[i].kind == "ident":
        i += 1
        while i + 1 < len(toks) and toks[i].text == "." and toks[i + 1].kind == "ident":
            i += 2
        if i < len(toks) and toks[i].text == "<":
            j = _skip_generics(toks, i)
            if j is None:
                return False
            i = j
    else:
        return False
    while i + 1 < len(toks) and toks[i].text == "[" and toks[i + 1].text == "]":
        i += 2
    return i == len(toks)


def _skip_generics(toks: Sequence[Tok], i: int) -> int | None:
    """Index past a generic argument list starting at '<', or None."""
    if i >= len(toks) or toks[i].text != "<":
        return None
    depth = 0
    j = i
    while j < len(toks):
        t = toks[j]
        if t.text == "<":
            depth += 1
        elif t.text == ">":
            depth -= 1
        elif t.text == ">>":
            depth -= 2
        elif t.text == ">>>":
            depth -= 3
        elif t.kind == "ident" or t.text in (",", ".", "?", "extends", "super", "[", "]", "&") or (
            t.kind == "kw" and t.text in PRIMITIVES
        ):
            pass
        else:
            return None
        if depth <= 0:
            return j + 1
        j += 1
    return None


@dataclass(frozen=True)
class CallGraph:
    """Intra-class call edges between method keys, plus unresolved calls."""

    owner: str
    edges: frozenset[tuple[str, str]]
    unresolved: frozenset[tuple[str, str]]

    def edges_by_caller(self) -> dict[str, tuple[str, ...]]:
        out: dict[str, list[str]] = {}
        for a, b in sorted(self.edges):
            out.setdefault(a, []).append(b)
        return {k: tuple(v) for k, v in out.items()}

    def reverse_edges(self) -> dict[str, tuple[str, ...]]:
        out: dict[str, list[str]] = {}
        for a, b in sorted(self.edges):
            out.setdefault(b, []).append(a)
        return {k: tuple(v) for k, v in out.items()}


class _BodyScanner:
    """Extracts identifier order, field accesses, calls, and locals from a body."""

    def __init__(self, field_names: frozenset[str], params: Sequence[str], typevars: frozenset[str]):
        self.fields = field_names
        self.typevars = typevars
        self.scopes: list[set[str]] = [set(params)]
        self.body_tokens: list[str] = []
        self.invoked: list[Invocation] = []
        self.reads: set[str] = set()
        self.writes: set[str] = set()
        self.locals: list[str] = []

    # -- scope helpers

    def _in_scope(self, name: str) -> bool:
        return any(name in s for s in self.scopes)

    def _declare(self, name: str):
        self.scopes[-1].add(name)
        self.locals.append(name)

    def _field_ref(self, name: str, this_qualified: bool) -> str | None:
        if not this_qualified and self._in_scope(name):
            return None
        return name if name in self.fields else None

    # -- main entry

    def scan_block(self, toks: Sequence[Tok], i: int) -> int:
        """Scan the block opened at toks[i] == '{'; returns the index past '}'."""
        end = _match_group(toks, i)
        self.scopes.append(set())
        j = i + 1
        while j < end - 1:
            j = self._stmt(toks, j, end - 1)
        self.scopes.pop()
        return end

    def _harvest(self, slc: Sequence[Tok]):
        self.body_tokens.extend(t.text for t in slc if t.kind == "ident")

    def _until_semi(self, toks: Sequence[Tok], i: int, end: int) -> tuple[list[Tok], int]:
        depth = 0
        j = i
        while j < end:
            t = toks[j].text
            if t in _OPEN:
                depth += 1
            elif t in _CLOSE:
                depth -= 1
            elif t == ";" and depth == 0:
                return list(toks[i:j]), j + 1
            j += 1
        raise ParseError("missing ';'", toks[i].line, toks[i].col)

    def _stmt(self, toks: Sequence[Tok], i: int, end: int) -> int:
        t = toks[i]
        if t.text == ";":
            return i + 1
        if t.text == "{":
            return self.scan_block(toks, i)
        if t.kind == "kw":
            if t.text == "if":
                return self._if_stmt(toks, i, end)
            if t.text == "while":
                j = self._paren_cond(toks, i + 1)
                return self._stmt(toks, j, end)
            if t.text == "do":
                j = self._stmt(toks, i + 1, end)
                if toks[j].text != "while":
                    raise ParseError("expected 'while'", toks[j].line, toks[j].col)
                j = self._paren_cond(toks, j + 1)
                if toks[j].text != ";":
                    raise ParseError("expected ';'", toks[j].line, toks[j].col)
                return j + 1
            if t.text == "for":
                return self._for_stmt(toks, i, end)
            if t.text in ("return", "throw"):
                slc, j = self._until_semi(toks, i + 1, end)
                self._harvest(slc)
                self._expr(slc)
                return j
            if t.text in ("break", "continue"):
                _, j = self._until_semi(toks, i + 1, end)
                return j
            if t.text in PRIMITIVES or t.text == "final":
                slc, j = self._until_semi(toks, i, end)
                if not self._try_decl(slc):
                    raise ParseError("expected declaration", t.line, t.col)
                return j
            if t.text in ("this", "super", "new"):
                slc, j = self._until_semi(toks, i, end)
                self._harvest(slc)
                self._expr(slc)
                return j
            raise ParseError(f"unsupported statement '{t.text}'", t.line, t.col)
        # identifier-led: local declaration or expression statement
        slc, j = self._until_semi(toks, i, end)
        if not self._try_decl(slc):
            self._harvest(slc)
            self._expr(slc)
        return j

    def _paren_cond(self, toks: Sequence[Tok], i: int) -> int:
        if toks[i].text != "(":
            raise ParseError("expected '('", toks[i].line, toks[i].col)
        end = _match_group(toks, i)
        inner = list(toks[i + 1 : end - 1])
        self._harvest(inner)
        self._expr(inner)
        return end

    def _if_stmt(self, toks: Sequence[Tok], i: int, end: int) -> int:
        j = self._paren_cond(toks, i + 1)
        j = self._stmt(toks, j, end)
        if j < end and toks[j].text == "else":
            j = self._stmt(toks, j + 1, end)
        return j

    def _for_stmt(self, toks: Sequence[Tok], i: int, end: int) -> int:
        if toks[i + 1].text != "(":
            raise ParseError("expected '('", toks[i + 1].line, toks[i + 1].col)
        close = _match_group(toks, i + 1)
        inner = list(toks[i + 2 : close - 1])
        self.scopes.append(set())
        colon = [k for k, tk in enumerate(inner) if tk.text == ":" and _depth_at(inner, k) == 0]
        if colon and ";" not in {tk.text for tk in inner}:
            k = colon[0]
            head, expr = inner[:k], inner[k + 1 :]
            self._harvest(head)
            if len(head) < 2 or head[-1].kind != "ident":
                raise ParseError("malformed for-each header", toks[i].line, toks[i].col)
            self._declare(head[-1].text)
            self._harvest(expr)
            self._expr(expr)
        else:
            parts = _split_depth0(inner, ";")
            if len(parts) != 3:
                raise ParseError("malformed for header", toks[i].line, toks[i].col)
            init, cond, update = parts
            if init and not self._try_decl(init):
                self._harvest(init)
                self._expr(init)
            self._harvest(cond)
            self._expr(cond)
            self._harvest(update)
            self._expr(update)
        j = self._stmt(toks, close, end)
        self.scopes.pop()
        return j

    # -- declarations

    def _try_decl(self, slc: Sequence[Tok]) -> bool:
        i = 0
        while i < len(slc) and slc[i].text == "final":
            i += 1
        i2 = self._skip_type(slc, i)
        if i2 is None or i2 >= len(slc) or slc[i2].kind != "ident":
            return False
        # declarator list: name ([])* (= init)? (, ...)*
        probe = i2
        declarators: list[tuple[str, list[Tok]]] = []
        while True:
            if probe >= len(slc) or slc[probe].kind != "ident":
                return False
            name = slc[probe].text
            probe += 1
            while probe + 1 < len(slc) and slc[probe].text == "[" and slc[probe + 1].text == "]":
                probe += 2
            init: list[Tok] = []
            if probe < len(slc) and slc[probe].text == "=":
                depth = 0
                probe += 1
                while probe < len(slc):
                    txt = slc[probe].text
                    if txt in _OPEN:
                        depth += 1
                    elif txt in _CLOSE:
                        depth -= 1
                    elif txt == "," and depth == 0:
                        break
                    init.append(slc[probe])
                    probe += 1
            declarators.append((name, init))
            if probe >= len(slc):
                break
            if slc[probe].text == ",":
                probe += 1
                continue
            return False
        self._harvest(slc[: len(slc)])
        for name, init in declarators:
            self._declare(name)
            self._expr(init)
        return True

    def _skip_type(self, slc: Sequence[Tok], i: int) -> int | None:
        if i >= len(slc):
            return None
        if slc[i].kind == "kw" and slc[i].text in PRIMITIVES:
            i += 1
        elif slc[i].kind == "ident":
            i += 1
            while i + 1 < len(slc) and slc[i].text == "." and slc[i + 1].kind == "ident":
                i += 2
            if i < len(slc) and slc[i].text == "<":
                j = _skip_generics(slc, i)
                if j is None:
                    return None
                i = j
        else:
            return None
        while i + 1 < len(slc) and slc[i].text == "[" and slc[i + 1].text == "]":
            i += 2
        return i

    # -- expressions (linear walk with recursion into groups)

    def _expr(self, slc: Sequence[Tok]):
        parts = _split_depth0(slc, ",")
        if len(parts) > 1:
            for p in parts:
                self._expr(p)
            return
        if not slc:
            return
        k = self._find_assign(slc)
        if k is not None:
            self._target(slc[:k], compound=slc[k].text != "=")
            self._expr(slc[k + 1 :])
            return
        self._walk(slc)

    def _find_assign(self, slc: Sequence[Tok]) -> int | None:
        depth = 0
        for k, t in enumerate(slc):
            if t.text in _OPEN:
                depth += 1
            elif t.text in _CLOSE:
                depth -= 1
            elif depth == 0 and t.kind == "punc" and t.text in ASSIGN_OPS:
                return k
        return None

    def _target(self, slc: Sequence[Tok], compound: bool):
        i = 0
        this_qualified = False
        if len(slc) >= 2 and slc[0].text == "this" and slc[1].text == ".":
            this_qualified = True
            i = 2
        if i < len(slc) and slc[i].kind == "ident":
            base = slc[i].text
            rest = slc[i + 1 :]
            if not rest:
                f = self._field_ref(base, this_qualified)
                if f:
                    self.writes.add(f)
                    if compound:
                        self.reads.add(f)
                return
            if rest[0].text == "[":
                # indexed store: the base reference is read, the contents written
                f = self._field_ref(base, this_qualified)
                if f:
                    self.writes.add(f)
                    self.reads.add(f)
                j = 0
                while j < len(rest) and rest[j].text == "[":
                    end = _match_group(rest, j)
                    self._expr(rest[j + 1 : end - 1])
                    j = end
                return
        # chained or parenthesized target: harvest reads only
        self._walk(slc)

    def _walk(self, slc: Sequence[Tok]):
        i = 0
        n = len(slc)
        while i < n:
            t = slc[i]
            if t.text == "new" and t.kind == "kw":
                i = self._new_expr(slc, i)
                continue
            if t.kind == "kw" and t.text == "instanceof":
                j = self._skip_type(slc, i + 1)
                i = j if j is not None else i + 1
                continue
            if t.kind == "ident":
                nxt = slc[i + 1].text if i + 1 < n else ""
                prev = slc[i - 1].text if i > 0 else ""
                if nxt == "(":
                    receiver = "self"
                    if prev == ".":
                        before = slc[i - 2].text if i >= 2 else ""
                        receiver = "self" if before == "this" else "other"
                    end = _match_group(slc, i + 1)
                    args = slc[i + 2 : end - 1]
                    argc = 0 if not args else len(_split_depth0(args, ","))
                    self.invoked.append(Invocation(t.text, argc, receiver))
                    self._expr(args)
                    i = end
                    continue
                if prev == ".":
                    before = slc[i - 2].text if i >= 2 else ""
                    if before == "this":
                        f = self._field_ref(t.text, this_qualified=True)
                        if f:
                            self.reads.add(f)
                            if nxt in ("++", "--"):
                                self.writes.add(f)
                    i += 1
                    continue
                f = self._field_ref(t.text, this_qualified=False)
                if f:
                    self.reads.add(f)
                    if nxt in ("++", "--") or prev in ("++", "--"):
                        self.writes.add(f)
                i += 1
                continue
            if t.text == "(":
                end = _match_group(slc, i)
                inner = slc[i + 1 : end - 1]
                after = slc[end].text if end < n else ""
                after_kind = slc[end].kind if end < n else ""
                is_cast = _looks_like_type(inner, self.typevars) and (
                    after_kind in ("ident", "num", "str", "char")
                    or after in ("(", "this", "new", "!", "~", "-", "+")
                )
                if not is_cast:
                    self._expr(inner)
                i = end
                continue
            if t.text in ("[", "{"):
                end = _match_group(slc, i)
                self._expr(slc[i + 1 : end - 1])
                i = end
                continue
            i += 1

    def _new_expr(self, slc: Sequence[Tok], i: int) -> int:
        j = i + 1
        name = ""
        while j < len(slc) and (slc[j].kind == "ident" or (slc[j].kind == "kw" and slc[j].text in PRIMITIVES)):
            name = slc[j].text
            j += 1
            if j < len(slc) and slc[j].text == ".":
                j += 1
            else:
                break
        g = _skip_generics(slc, j)
        if g is not None:
            j = g
        if j < len(slc) and slc[j].text == "(":
            end = _match_group(slc, j)
            args = slc[j + 1 : end - 1]
            argc = 0 if not args else len(_split_depth0(args, ","))
            self.invoked.append(Invocation(name, argc, "other"))
            self._expr(args)
            return end
        while j < len(slc) and slc[j].text == "[":
            end = _match_group(slc, j)
            self._expr(slc[j + 1 : end - 1])
            j = end
        if j < len(slc) and slc[j].text == "{":
            end = _match_group(slc, j)
            self._expr(slc[j + 1 : end - 1])
            j = end
        return j


def _depth_at(toks: Sequence[Tok], k: int) -> int:
    depth = 0
    for t in toks[:k]:
        if t.text in _OPEN:
            depth += 1
        elif t.text in _CLOSE:
            depth -= 1
    return depth


class _Parser:
    def __init__(self, toks: list[Tok], locator: str):
        self.toks = toks
        self.i = 0
        self.locator = locator
        self.package = ""
        self.done: list[ClassDescriptor] = []

    def peek(self, k: int = 0) -> Tok:
        return self.toks[min(self.i + k, len(self.toks) - 1)]

    def next(self) -> Tok:
        t = self.peek()
        self.i += 1
        return t

    def expect(self, text: str) -> Tok:
        t = self.peek()
        if t.text != text:
            self.fail(f"expected '{text}', found '{t.text or 'end of input'}'")
        return self.next()

    def fail(self, msg: str):
        t = self.peek()
        raise ParseError(msg, t.line, t.col, partial=self.done)

    def _dotted(self) -> str:
        parts = [self.next().text]
        while self.peek().text == "." and self.peek(1).kind in ("ident", "kw"):
            if self.peek(1).text == "*":
                break
            self.next()
            parts.append(self.next().text)
        return ".".join(parts)

    def _skip_annotations(self):
        while self.peek().text == "@":
            self.next()
            self._dotted()
            if self.peek().text == "(":
                self.i = _match_group(self.toks, self.i)

    def parse_unit(self) -> list[ClassDescriptor]:
        self._skip_annotations()
        if self.peek().text == "package":
            self.next()
            self.package = self._dotted()
            self.expect(";")
        while self.peek().text == "import":
            while self.peek().text != ";":
                if self.peek().kind == "eof":
                    self.fail("unterminated import")
                self.next()
            self.next()
        while self.peek().kind != "eof":
            self._skip_annotations()
            self.type_decl(prefix=self.package, outer_typevars=frozenset())
        return self.done

    def _modifiers(self) -> set[str]:
        mods: set[str] = set()
        while True:
            self._skip_annotations()
            t = self.peek()
            if t.kind == "kw" and t.text in MODIFIERS:
                mods.add(self.next().text)
            else:
                return mods

    def _type_params(self) -> tuple[str, ...]:
        if self.peek().text != "<":
            return ()
        end = _skip_generics(self.toks, self.i)
        if end is None:
            self.fail("malformed type parameter list")
        names: list[str] = []
        depth = 0
        take_next = True
        for t in self.toks[self.i : end]:
            if t.text == "<":
                depth += 1
                take_next = depth == 1
            elif t.text in (">", ">>", ">>>"):
                depth -= len(t.text)
            elif t.text == "," and depth == 1:
                take_next = True
            elif t.kind == "ident" and take_next and depth == 1:
                names.append(t.text)
                take_next = False
        self.i = end
        return tuple(names)

    def _parse_typeref(self, typevars: frozenset[str]) -> TypeRef:
        t = self.peek()
        if t.kind == "kw" and t.text in PRIMITIVES:
            self.next()
            base = TypeRef.primitive(t.text)
        elif t.kind in ("ident",):
            name = self._dotted()
            if self.peek().text == "<":
                end = _skip_generics(self.toks, self.i)
                if end is None:
                    self.fail("malformed generic arguments")
                self.i = end
            if "." not in name and name in typevars:
                base = TypeRef.typevar(name)
            else:
                base = TypeRef.named(name)
        else:
            self.fail(f"expected a type, found '{t.text}'")
        dims = 0
        while self.peek().text == "[" and self.peek(1).text == "]":
            self.next()
            self.next()
            dims += 1
        return TypeRef.array(base, dims) if dims else base

    def type_decl(self, prefix: str, outer_typevars: frozenset[str]) -> ClassDescriptor:
        mods = self._modifiers()
        kw = self.peek()
        if kw.text not in ("class", "interface"):
            self.fail(f"expected class or interface, found '{kw.text}'")
        is_interface = self.next().text == "interface"
        name = self.next()
        if name.kind != "ident":
            self.fail("expected a class name")
        typevars = self._type_params()
        all_typevars = outer_typevars | frozenset(typevars)

        supers: list[str] = []
        if self.peek().text == "extends":
            self.next()
            supers.append(str(self._parse_typeref(all_typevars)).replace("[]", ""))
            while self.peek().text == ",":
                self.next()
                supers.append(str(self._parse_typeref(all_typevars)).replace("[]", ""))
        if self.peek().text == "implements":
            self.next()
            supers.append(str(self._parse_typeref(all_typevars)).replace("[]", ""))
            while self.peek().text == ",":
                self.next()
                supers.append(str(self._parse_typeref(all_typevars)).replace("[]", ""))

        qualified = f"{prefix}.{name.text}" if prefix else name.text
        self.expect("{")

        fields: list[FieldDescriptor] = []
        method_stubs: list[dict] = []
        while self.peek().text != "}":
            if self.peek().kind == "eof":
                self.fail("unterminated class body")
            self._member(
                qualified, name.text, is_interface, all_typevars, fields, method_stubs
            )
        self.expect("}")

        field_names = frozenset(f.name for f in fields)
        methods: list[MethodDescriptor] = []
        for stub in method_stubs:
            methods.append(self._finish_method(stub, field_names, all_typevars))

        desc = ClassDescriptor(
            qualified_name=qualified,
            simple_name=name.text,
            type_parameters=typevars,
            supertypes=tuple(supers),
            fields=tuple(fields),
            methods=tuple(methods),
            source_id=self.locator,
        )
        self.done.append(desc)
        return desc

    def _member(self, qualified, simple_name, is_interface, typevars, fields, method_stubs):
        if self.peek().text == ";":
            self.next()
            return
        mods = self._modifiers()
        t = self.peek()
        if t.text in ("class", "interface"):
            # nested type: recurse; its descriptor lands in self.done
            self.type_decl(prefix=qualified, outer_typevars=typevars)
            return
        if t.text == "{":  # instance or static initializer block
            self.i = _match_group(self.toks, self.i)
            return
        # constructor?
        if t.kind == "ident" and t.text == simple_name and self.peek(1).text == "(":
            self.next()
            self._method_stub(
                mods, TypeRef.primitive("void"), CONSTRUCTOR_NAME, is_interface,
                typevars, method_stubs,
            )
            return
        rettype = self._parse_typeref(typevars)
        nm = self.peek()
        if nm.kind != "ident":
            self.fail(f"expected a member name, found '{nm.text}'")
        self.next()
        if self.peek().text == "(":
            self._method_stub(mods, rettype, nm.text, is_interface, typevars, method_stubs)
            return
        # field declarator list
        while True:
            dims = 0
            while self.peek().text == "[" and self.peek(1).text == "]":
                self.next()
                self.next()
                dims += 1
            ftype = TypeRef.array(rettype, dims) if dims else rettype
            visibility = "package"
            for v in ("public", "protected", "private"):
                if v in mods:
                    visibility = v
            fields.append(
                FieldDescriptor(
                    name=nm.text,
                    type=ftype,
                    is_static="static" in mods,
                    is_final="final" in mods,
                    visibility=visibility,
                )
            )
            if self.peek().text == "=":
                depth = 0
                while True:
                    tt = self.peek()
                    if tt.kind == "eof":
                        self.fail("unterminated field initializer")
                    if tt.text in _OPEN:
                        depth += 1
                    elif tt.text in _CLOSE:
                        depth -= 1
                    elif depth == 0 and tt.text in (",", ";"):
                        break
                    self.next()
            if self.peek().text == ",":
                self.next()
                nm = self.next()
                if nm.kind != "ident":
                    self.fail("expected a field name")
                continue
            self.expect(";")
            return

    def _method_stub(self, mods, rettype, name, is_interface, typevars, method_stubs):
        self.expect("(")
        params: list[tuple[str, TypeRef]] = []
        if self.peek().text != ")":
            while True:
                while self.peek().text == "final" or self.peek().text == "@":
                    if self.peek().text == "@":
                        self._skip_annotations()
                    else:
                        self.next()
                ptype = self._parse_typeref(typevars)
                if self.peek().text == "...":
                    self.next()
                    ptype = TypeRef.array(ptype, 1)
                pname = self.next()
                if pname.kind != "ident":
                    self.fail("expected a parameter name")
                params.append((pname.text, ptype))
                if self.peek().text == ",":
                    self.next()
                    continue
                break
        self.expect(")")
        if self.peek().text == "throws":
            self.next()
            self._dotted()
            while self.peek().text == ",":
                self.next()
                self._dotted()
        body_range = None
        if self.peek().text == "{":
            start = self.i
            self.i = _match_group(self.toks, self.i)
            body_range = (start, self.i)
        else:
            self.expect(";")
        is_public = "public" in mods or (
            is_interface and "private" not in mods
        )
        method_stubs.append(
            {
                "name": name,
                "params": tuple(params),
                "rettype": rettype,
                "is_public": is_public,
                "is_static": "static" in mods,
                "body": body_range,
            }
        )

    def _finish_method(self, stub, field_names, typevars) -> MethodDescriptor:
        scanner = _BodyScanner(field_names, [p for p, _ in stub["params"]], typevars)
        if stub["body"] is not None:
            scanner.scan_block(self.toks, stub["body"][0])
        return MethodDescriptor(
            name=stub["name"],
            parameters=stub["params"],
            return_type=stub["rettype"],
            is_public=stub["is_public"],
            is_static=stub["is_static"],
            body_tokens=tuple(scanner.body_tokens),
            invoked_methods=tuple(scanner.invoked),
            fields_read=frozenset(scanner.reads),
            fields_written=frozenset(scanner.writes),
            local_variables=tuple(scanner.locals),
        )


def parse_source(text: str, locator: str = "") -> list[ClassDescriptor]:
    """Parse source text into descriptors, one per top-level or nested class.

    Raises :class:`ParseError` with line/column on malformed input; descriptors
    for classes completed before the failure ride along on ``error.partial``.
    """
    toks = _lex(text)
    parser = _Parser(toks, locator)
    return parser.parse_unit()


def build_call_graph(c: ClassDescriptor) -> CallGraph:
    """Resolve self-receiver calls against the class's own method table.

    An edge a -> b exists iff a records a self call matching b's name and
    arity. Everything else (self calls with no match, calls through other
    receivers) lands in ``unresolved``.
    """
    by_name_arity: dict[tuple[str, int], list[str]] = {}
    for m in c.methods:
        by_name_arity.setdefault((m.name, m.arity), []).append(m.key)
    edges: set[tuple[str, str]] = set()
    unresolved: set[tuple[str, str]] = set()
    for m in c.methods:
        for inv in m.invoked_methods:
            targets = by_name_arity.get((inv.callee, inv.arg_count)) if inv.receiver == "self" else None
            if targets:
                for key in targets:
                    edges.add((m.key, key))
            else:
                unresolved.add((m.key, inv.callee))
    return CallGraph(c.qualified_name, frozenset(edges), frozenset(unresolved))


def flatten_inheritance(
    c: ClassDescriptor, corpus: Mapping[str, ClassDescriptor], depth: int
) -> ClassDescriptor:
    """Merge ancestor members into ``c`` up to ``depth`` levels of supertypes.

    Nearer declarations win: a member is inherited only when no equally-named
    field (or same-keyed method) is already present. Only non-private fields
    and public methods are carried over; field accesses that point at members
    unavailable in the flattened view are dropped so the result validates.
    Raises :class:`CycleError` when a supertype chain revisits a class.
    """
    if depth < 0:
        raise ValueError("depth must be >= 0")
    if depth == 0:
        return c

    ancestors: list[ClassDescriptor] = []
    seen: set[str] = set()

    def walk(cls: ClassDescriptor, level: int, path: frozenset[str]):
        if level > depth:
            return
        for sup_name in cls.supertypes:
            sup = corpus.get(sup_name)
            if sup is None:
                continue
            if sup.qualified_name in path or sup.qualified_name == c.qualified_name:
                raise CycleError(
                    f"supertype cycle through '{sup.qualified_name}'"
                )
            if sup.qualified_name not in seen:
                seen.add(sup.qualified_name)
                ancestors.append(sup)
            walk(sup, level + 1, path | {sup.qualified_name})

    walk(c, 1, frozenset({c.qualified_name}))

    fields = list(c.fields)
    field_names = {f.name for f in fields}
    methods = list(c.methods)
    method_keys = {m.key for m in methods}
    for anc in ancestors:
        for f in anc.fields:
            if f.visibility != "private" and f.name not in field_names:
                fields.append(f)
                field_names.add(f.name)
        for m in anc.methods:
            if m.is_public and not m.is_constructor and m.key not in method_keys:
                methods.append(m)
                method_keys.add(m.key)

    available = frozenset(field_names)
    pruned = tuple(
        with_method_fields(m, available) for m in methods
    )
    return with_fields(c, fields=tuple(fields), methods=pruned)


def with_method_fields(m: MethodDescriptor, available: frozenset[str]) -> MethodDescriptor:
    reads = m.fields_read & available
    writes = m.fields_written & available
    if reads == m.fields_read and writes == m.fields_written:
        return m
    return MethodDescriptor(
        name=m.name,
        parameters=m.parameters,
        return_type=m.return_type,
        is_public=m.is_public,
        is_static=m.is_static,
        body_tokens=m.body_tokens,
        invoked_methods=m.invoked_methods,
        fields_read=reads,
        fields_written=writes,
        local_variables=m.local_variables,
    )
