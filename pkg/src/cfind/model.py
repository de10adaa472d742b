"""Canonical in-memory class representation and the cf-class interchange format.

Descriptors are frozen dataclasses: once constructed they are safe to share
across worker threads. The interchange format is line-delimited JSON (one
class per line, UTF-8) behind a header line ``{"format":"cf-class","version":1}``.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field, replace
from typing import Iterable, Mapping

PRIMITIVES = frozenset(
    {"boolean", "byte", "short", "char", "int", "long", "float", "double", "void"}
)

INTERCHANGE_FORMAT = "cf-class"
INTERCHANGE_VERSION = 1

_IDENT_RE = re.compile(r"[A-Za-z_$][A-Za-z0-9_$]*\Z")


class InterchangeError(Exception):
    """Malformed interchange stream; carries the byte offset of the failure."""

    def __init__(self, message: str, offset: int = 0):
        super().__init__(f"{message} (byte offset {offset})")
        self.offset = offset


class VersionMismatchError(InterchangeError):
    pass


class InvalidDescriptorError(Exception):
    """Raised by save_interchange when a descriptor fails validation."""

    def __init__(self, qualified_name: str, violations: list[str]):
        super().__init__(f"{qualified_name}: " + "; ".join(violations))
        self.qualified_name = qualified_name
        self.violations = violations


@dataclass(frozen=True)
class TypeRef:
    """A type usage: primitive, named class, type variable, or array thereof.

    Arrays store a non-array ``element`` plus ``dimensions >= 1``; the other
    kinds carry only ``name``.
    """

    kind: str  # 'primitive' | 'class' | 'typevar' | 'array'
    name: str = ""
    dimensions: int = 0
    element: "TypeRef | None" = None

    @staticmethod
    def primitive(name: str) -> "TypeRef":
        return TypeRef("primitive", name)

    @staticmethod
    def named(name: str) -> "TypeRef":
        return TypeRef("class", name)

    @staticmethod
    def typevar(name: str) -> "TypeRef":
        return TypeRef("typevar", name)

    @staticmethod
    def array(element: "TypeRef", dimensions: int = 1) -> "TypeRef":
        if element.kind == "array":
            return TypeRef(
                "array",
                element=element.element,
                dimensions=element.dimensions + dimensions,
            )
        return TypeRef("array", element=element, dimensions=dimensions)

    @property
    def simple_name(self) -> str:
        """Last dotted segment for named classes; element name for arrays."""
        if self.kind == "array":
            return self.element.simple_name if self.element else ""
        return self.name.rsplit(".", 1)[-1]

    def violations(self) -> list[str]:
        out: list[str] = []
        if self.kind == "primitive":
            if self.name not in PRIMITIVES:
                out.append(f"unknown primitive type '{self.name}'")
        elif self.kind in ("class", "typevar"):
            if not self.name:
                out.append(f"{self.kind} type with empty name")
        elif self.kind == "array":
            if self.dimensions < 1:
                out.append("array type with dimension < 1")
            if self.element is None:
                out.append("array type without element type")
            elif self.element.kind == "array":
                out.append("array element must not itself be an array")
            else:
                out.extend(self.element.violations())
        else:
            out.append(f"unknown type kind '{self.kind}'")
        return out

    def __str__(self) -> str:
        if self.kind == "array":
            return f"{self.element}" + "[]" * self.dimensions
        return self.name


@dataclass(frozen=True)
class FieldDescriptor:
    name: str
    type: TypeRef
    is_static: bool = False
    is_final: bool = False
    visibility: str = "package"  # public | protected | package | private


@dataclass(frozen=True)
class Invocation:
    """One call expression: callee name, argument count, receiver kind."""

    callee: str
    arg_count: int
    receiver: str  # 'self' | 'other'


CONSTRUCTOR_NAME = "<init>"


@dataclass(frozen=True)
class MethodDescriptor:
    name: str
    parameters: tuple[tuple[str, TypeRef], ...] = ()
    return_type: TypeRef = TypeRef.primitive("void")
    is_public: bool = False
    is_static: bool = False
    body_tokens: tuple[str, ...] = ()
    invoked_methods: tuple[Invocation, ...] = ()
    fields_read: frozenset[str] = frozenset()
    fields_written: frozenset[str] = frozenset()
    local_variables: tuple[str, ...] = ()

    @property
    def key(self) -> str:
        """Stable identity: name plus comma-joined parameter types."""
        return f"{self.name}({','.join(str(t) for _, t in self.parameters)})"

    @property
    def arity(self) -> int:
        return len(self.parameters)

    @property
    def is_constructor(self) -> bool:
        return self.name == CONSTRUCTOR_NAME


@dataclass(frozen=True)
class ClassDescriptor:
    qualified_name: str
    simple_name: str
    type_parameters: tuple[str, ...] = ()
    supertypes: tuple[str, ...] = ()
    fields: tuple[FieldDescriptor, ...] = ()
    methods: tuple[MethodDescriptor, ...] = ()
    source_id: str = ""

    def field_names(self) -> frozenset[str]:
        return frozenset(f.name for f in self.fields)

    def field(self, name: str) -> FieldDescriptor | None:
        for f in self.fields:
            if f.name == name:
                return f
        return None

    def public_methods(self, include_constructors: bool = False):
        """Public methods in declaration order; constructors opt-in."""
        return tuple(
            m
            for m in self.methods
            if m.is_public and (include_constructors or not m.is_constructor)
        )

    def method_by_key(self, key: str) -> MethodDescriptor | None:
        for m in self.methods:
            if m.key == key:
                return m
        return None


def validate_descriptor(c: ClassDescriptor) -> list[str]:
    """Check every descriptor invariant; returns one message per violation.

    Pure and total: never raises, an empty list means the descriptor is valid.
    """
    out: list[str] = []
    if not c.qualified_name:
        out.append("empty qualified name")
    if not c.simple_name:
        out.append("empty simple name")

    seen_fields: set[str] = set()
    for f in c.fields:
        if not _IDENT_RE.match(f.name or ""):
            out.append(f"field '{f.name}' is not an identifier")
        if f.name in seen_fields:
            out.append(f"duplicate field name '{f.name}'")
        seen_fields.add(f.name)
        if f.visibility not in ("public", "protected", "package", "private"):
            out.append(f"field '{f.name}' has unknown visibility '{f.visibility}'")
        for v in f.type.violations():
            out.append(f"field '{f.name}': {v}")

    declared = c.field_names()
    seen_keys: set[str] = set()
    for m in c.methods:
        if m.key in seen_keys:
            out.append(f"duplicate method '{m.key}'")
        seen_keys.add(m.key)
        pnames = [p for p, _ in m.parameters]
        if len(pnames) != len(set(pnames)):
            out.append(f"method '{m.key}' has duplicate parameter names")
        for _, t in m.parameters:
            for v in t.violations():
                out.append(f"method '{m.key}': {v}")
        for v in m.return_type.violations():
            out.append(f"method '{m.key}': {v}")
        for name in sorted(m.fields_read - declared):
            out.append(f"method '{m.key}' reads undeclared field '{name}'")
        for name in sorted(m.fields_written - declared):
            out.append(f"method '{m.key}' writes undeclared field '{name}'")
        for inv in m.invoked_methods:
            if inv.receiver not in ("self", "other"):
                out.append(
                    f"method '{m.key}' invocation '{inv.callee}' has unknown "
                    f"receiver kind '{inv.receiver}'"
                )
            if inv.arg_count < 0:
                out.append(
                    f"method '{m.key}' invocation '{inv.callee}' has negative arity"
                )
    return out


# --- JSON (de)serialization -------------------------------------------------


def _type_to_json(t: TypeRef) -> dict:
    if t.kind == "array":
        return {
            "kind": "array",
            "dimensions": t.dimensions,
            "element": _type_to_json(t.element),
        }
    return {"kind": t.kind, "name": t.name}


def _type_from_json(d: Mapping) -> TypeRef:
    kind = d.get("kind")
    if kind == "array":
        return TypeRef(
            "array",
            element=_type_from_json(d["element"]),
            dimensions=int(d["dimensions"]),
        )
    return TypeRef(kind, d.get("name", ""))


def _method_to_json(m: MethodDescriptor) -> dict:
    return {
        "name": m.name,
        "parameters": [[p, _type_to_json(t)] for p, t in m.parameters],
        "return_type": _type_to_json(m.return_type),
        "is_public": m.is_public,
        "is_static": m.is_static,
        "body_tokens": list(m.body_tokens),
        "invoked_methods": [[i.callee, i.arg_count, i.receiver] for i in m.invoked_methods],
        "fields_read": sorted(m.fields_read),
        "fields_written": sorted(m.fields_written),
        "local_variables": list(m.local_variables),
    }


def _method_from_json(d: Mapping) -> MethodDescriptor:
    return MethodDescriptor(
        name=d["name"],
        parameters=tuple((p, _type_from_json(t)) for p, t in d["parameters"]),
        return_type=_type_from_json(d["return_type"]),
        is_public=bool(d["is_public"]),
        is_static=bool(d["is_static"]),
        body_tokens=tuple(d["body_tokens"]),
        invoked_methods=tuple(
            Invocation(c, int(n), r) for c, n, r in d["invoked_methods"]
        ),
        fields_read=frozenset(d["fields_read"]),
        fields_written=frozenset(d["fields_written"]),
        local_variables=tuple(d["local_variables"]),
    )


def class_to_json(c: ClassDescriptor) -> dict:
    return {
        "qualified_name": c.qualified_name,
        "simple_name": c.simple_name,
        "type_parameters": list(c.type_parameters),
        "supertypes": list(c.supertypes),
        "fields": [
            {
                "name": f.name,
                "type": _type_to_json(f.type),
                "is_static": f.is_static,
                "is_final": f.is_final,
                "visibility": f.visibility,
            }
            for f in c.fields
        ],
        "methods": [_method_to_json(m) for m in c.methods],
        "source_id": c.source_id,
    }


def class_from_json(d: Mapping) -> ClassDescriptor:
    return ClassDescriptor(
        qualified_name=d["qualified_name"],
        simple_name=d["simple_name"],
        type_parameters=tuple(d["type_parameters"]),
        supertypes=tuple(d["supertypes"]),
        fields=tuple(
            FieldDescriptor(
                name=f["name"],
                type=_type_from_json(f["type"]),
                is_static=bool(f["is_static"]),
                is_final=bool(f["is_final"]),
                visibility=f["visibility"],
            )
            for f in d["fields"]
        ),
        methods=tuple(_method_from_json(m) for m in d["methods"]),
        source_id=d.get("source_id", ""),
    )


def _dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"), ensure_ascii=True)


def save_interchange(classes: Iterable[ClassDescriptor]) -> bytes:
    """Serialize descriptors to canonical cf-class bytes.

    Output is deterministic: sorted keys, compact separators, declaration
    order preserved for all arrays. Invalid descriptors raise.
    """
    lines = [_dumps({"format": INTERCHANGE_FORMAT, "version": INTERCHANGE_VERSION})]
    for c in classes:
        violations = validate_descriptor(c)
        if violations:
            raise InvalidDescriptorError(c.qualified_name, violations)
        lines.append(_dumps(class_to_json(c)))
    return ("\n".join(lines) + "\n").encode("utf-8")


def load_interchange(data: bytes) -> list[ClassDescriptor]:
    """Parse a cf-class stream back into validated descriptors."""
    offset = 0
    lines = data.split(b"\n")
    if not lines or not lines[0].strip():
        raise InterchangeError("missing header line", 0)
    try:
        header = json.loads(lines[0].decode("utf-8"))
    except (ValueError, UnicodeDecodeError) as e:
        raise InterchangeError(f"unparseable header: {e}", 0) from e
    if not isinstance(header, dict) or header.get("format") != INTERCHANGE_FORMAT:
        raise InterchangeError("header is not a cf-class header", 0)
    if header.get("version") != INTERCHANGE_VERSION:
        raise VersionMismatchError(
            f"unsupported schema version {header.get('version')!r}", 0
        )
    offset = len(lines[0]) + 1

    out: list[ClassDescriptor] = []
    for raw in lines[1:]:
        if not raw.strip():
            offset += len(raw) + 1
            continue
        try:
            record = json.loads(raw.decode("utf-8"))
            c = class_from_json(record)
        except (ValueError, KeyError, TypeError, UnicodeDecodeError) as e:
            raise InterchangeError(f"malformed class record: {e}", offset) from e
        violations = validate_descriptor(c)
        if violations:
            raise InterchangeError(
                f"invalid descriptor '{c.qualified_name}': {'; '.join(violations)}",
                offset,
            )
        out.append(c)
        offset += len(raw) + 1
    return out


def with_fields(c: ClassDescriptor, **changes) -> ClassDescriptor:
    """dataclasses.replace passthrough, kept next to the model for callers."""
    return replace(c, **changes)
