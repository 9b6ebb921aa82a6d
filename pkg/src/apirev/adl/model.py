"""Syntax tree for revisioned API definitions.

A definition is one ``api`` block containing record types, enum types,
exception types (records restricted to ``throws`` lists) and services.
Every declared element carries a public name (the wire-visible identity
within one revision) and an internal name (the identity code generators
use, defaulting to the public name, overridable with ``as``).

Field and type declarations may carry a replaces clause tying them to an
element of the previous revision; ``replaces nothing`` suppresses the
implicit same-name match.

This module also hosts the structural helpers the rest of the package
shares: inheritance flattening, effective optionality, and subtype maps.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field as dc_field


class Optionality(enum.Enum):
    """How strictly a field must be populated, before direction is applied.

    MANDATORY: required in requests and responses.
    OPTIN: may be omitted in requests, guaranteed in responses.
    OPTIONAL: may be omitted in both directions.

    The order below is the permissiveness order; merging revisions takes
    the least upper bound.
    """

    MANDATORY = 0
    OPTIN = 1
    OPTIONAL = 2

    @property
    def keyword(self) -> str:
        return self.name.lower()


def most_permissive(a: Optionality, b: Optionality) -> Optionality:
    return a if a.value >= b.value else b


# --------------------------------------------------------------------------
# Type references


@dataclass(frozen=True)
class Int32Ref:
    def render(self) -> str:
        return "int32"


@dataclass(frozen=True)
class NumericRef:
    max_digits: int | None = None

    def render(self) -> str:
        return "numeric" if self.max_digits is None else f"numeric({self.max_digits})"


@dataclass(frozen=True)
class StringRef:
    max_length: int | None = None

    def render(self) -> str:
        return "string" if self.max_length is None else f"string({self.max_length})"


@dataclass(frozen=True)
class ListRef:
    element: TypeRef
    bound: int | None = None

    def render(self) -> str:
        suffix = "*" if self.bound is None else f"[{self.bound}]"
        return self.element.render() + suffix


@dataclass(frozen=True)
class NamedRef:
    name: str

    def render(self) -> str:
        return self.name


TypeRef = Int32Ref | NumericRef | StringRef | ListRef | NamedRef


# --------------------------------------------------------------------------
# Replaces clauses


@dataclass(frozen=True)
class QualifiedFieldName:
    """A predecessor field reference, optionally qualified by its declaring type."""

    qualifier: str | None
    name: str

    def render(self) -> str:
        return self.name if self.qualifier is None else f"{self.qualifier}.{self.name}"


@dataclass(frozen=True)
class Replaces:
    """Explicit predecessor naming. ``targets`` is empty for ``replaces nothing``."""

    targets: tuple[QualifiedFieldName, ...]

    @property
    def is_nothing(self) -> bool:
        return not self.targets

    def render(self) -> str:
        if self.is_nothing:
            return "replaces nothing"
        return "replaces " + ", ".join(t.render() for t in self.targets)


REPLACES_NOTHING = Replaces(())


def single_replaces(name: str) -> Replaces:
    return Replaces((QualifiedFieldName(None, name),))


# --------------------------------------------------------------------------
# Declarations


@dataclass(frozen=True)
class Field:
    public_name: str
    type_ref: TypeRef
    optionality: Optionality | None = None
    replaces: Replaces | None = None
    alias: str | None = None

    @property
    def internal_name(self) -> str:
        return self.alias if self.alias is not None else self.public_name


@dataclass(frozen=True)
class RecordType:
    public_name: str
    fields: tuple[Field, ...] = ()
    is_abstract: bool = False
    is_exception: bool = False
    super_type: str | None = None
    default_optionality: Optionality | None = None
    replaces: Replaces | None = None
    alias: str | None = None

    @property
    def internal_name(self) -> str:
        return self.alias if self.alias is not None else self.public_name

    @property
    def keyword(self) -> str:
        return "exception" if self.is_exception else "record"


@dataclass(frozen=True)
class EnumMember:
    public_name: str
    replaces: Replaces | None = None


@dataclass(frozen=True)
class EnumType:
    public_name: str
    members: tuple[EnumMember, ...] = ()
    replaces: Replaces | None = None
    alias: str | None = None

    @property
    def internal_name(self) -> str:
        return self.alias if self.alias is not None else self.public_name


@dataclass(frozen=True)
class ServiceOperation:
    public_name: str
    input_type: str
    output_type: str
    throws: tuple[str, ...] = ()
    replaces: Replaces | None = None
    alias: str | None = None

    @property
    def internal_name(self) -> str:
        return self.alias if self.alias is not None else self.public_name


@dataclass(frozen=True)
class Service:
    public_name: str
    operations: tuple[ServiceOperation, ...] = ()
    replaces: Replaces | None = None
    alias: str | None = None

    @property
    def internal_name(self) -> str:
        return self.alias if self.alias is not None else self.public_name


TypeDecl = RecordType | EnumType
Element = RecordType | EnumType | Service


@dataclass(frozen=True)
class ApiDefinition:
    """One parsed ``api`` block."""

    name: str
    elements: tuple[Element, ...] = ()

    # Lookup tables are derived once; the dataclass stays frozen.
    def __post_init__(self) -> None:
        types: dict[str, TypeDecl] = {}
        services: dict[str, Service] = {}
        for el in self.elements:
            if isinstance(el, Service):
                services.setdefault(el.public_name, el)
            else:
                types.setdefault(el.public_name, el)
        object.__setattr__(self, "_types", types)
        object.__setattr__(self, "_services", services)

    @property
    def types(self) -> dict[str, TypeDecl]:
        return self._types  # type: ignore[attr-defined]

    @property
    def services(self) -> dict[str, Service]:
        return self._services  # type: ignore[attr-defined]

    def records(self) -> list[RecordType]:
        return [t for t in self.types.values() if isinstance(t, RecordType)]

    def enums(self) -> list[EnumType]:
        return [t for t in self.types.values() if isinstance(t, EnumType)]


# --------------------------------------------------------------------------
# Structural helpers


def supertype_chain(definition: ApiDefinition, record: RecordType) -> list[RecordType]:
    """Ancestors of ``record``, root first, excluding the record itself.

    Callers must have validated the definition: unknown or cyclic
    supertypes raise ValueError here.
    """
    chain: list[RecordType] = []
    seen = {record.public_name}
    current = record
    while current.super_type is not None:
        parent = definition.types.get(current.super_type)
        if not isinstance(parent, RecordType):
            raise ValueError(f"unknown supertype {current.super_type!r}")
        if parent.public_name in seen:
            raise ValueError(f"inheritance cycle at {parent.public_name!r}")
        seen.add(parent.public_name)
        chain.append(parent)
        current = parent
    chain.reverse()
    return chain


def effective_default(definition: ApiDefinition, record: RecordType) -> Optionality | None:
    """The record's default optionality, inherited from ancestors when unset."""
    current: RecordType | None = record
    while current is not None:
        if current.default_optionality is not None:
            return current.default_optionality
        if current.super_type is None:
            return None
        parent = definition.types.get(current.super_type)
        current = parent if isinstance(parent, RecordType) else None
    return None


def effective_optionality(definition: ApiDefinition, declaring: RecordType, f: Field) -> Optionality:
    """Innermost explicit setting wins: field, then declaring type (inherited), else MANDATORY."""
    if f.optionality is not None:
        return f.optionality
    inherited = effective_default(definition, declaring)
    return inherited if inherited is not None else Optionality.MANDATORY


@dataclass(frozen=True)
class FlatField:
    """One flattened field copy: the declaration plus where it was declared.

    Inherited fields keep the optionality resolved at their declaration
    site; a subtype's own default never rewrites inherited copies.
    """

    field: Field
    declared_in: str
    optionality: Optionality

    @property
    def public_name(self) -> str:
        return self.field.public_name

    @property
    def internal_name(self) -> str:
        return self.field.internal_name


def flattened_fields(definition: ApiDefinition, record: RecordType) -> list[FlatField]:
    """All fields of ``record``: inherited first (root-most ancestor first), then own."""
    out: list[FlatField] = []
    for owner in [*supertype_chain(definition, record), record]:
        for f in owner.fields:
            out.append(FlatField(f, owner.public_name, effective_optionality(definition, owner, f)))
    return out


def subtype_map(definition: ApiDefinition) -> dict[str, list[str]]:
    """Direct subtypes per record type, in declaration order."""
    out: dict[str, list[str]] = {r.public_name: [] for r in definition.records()}
    for r in definition.records():
        if r.super_type is not None and r.super_type in out:
            out[r.super_type].append(r.public_name)
    return out


def concrete_descendants(definition: ApiDefinition, name: str) -> list[str]:
    """Concrete transitive subtypes of ``name`` in declaration order, then ``name`` itself if concrete."""
    subs = subtype_map(definition)
    ordered: list[str] = []

    def walk(t: str) -> None:
        for child in subs.get(t, ()):  # declaration order preserved by subtype_map
            decl = definition.types[child]
            assert isinstance(decl, RecordType)
            if not decl.is_abstract:
                ordered.append(child)
            walk(child)

    walk(name)
    decl = definition.types[name]
    if isinstance(decl, RecordType) and not decl.is_abstract:
        ordered.append(name)
    return ordered
