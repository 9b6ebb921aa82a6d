"""Wire schemas derived from API definitions.

A schema is the encoder/decoder-facing view of one definition: records
with flattened field lists, enums with ordinal member tables, and
services. Inheritance disappears here; a reference to a record type
becomes either a direct reference (exactly one concrete alternative) or
a tagged union over all concrete alternatives in declaration order,
with a non-abstract supertype listed after its subtypes.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field

from .adl import (
    ApiDefinition,
    EnumType,
    Int32Ref,
    ListRef,
    NamedRef,
    NumericRef,
    Optionality,
    RecordType,
    StringRef,
    TypeRef,
    concrete_descendants,
    flattened_fields,
)
from .errors import ApiRevError


class SchemaError(ApiRevError):
    def __init__(self, problems: list[str]):
        super().__init__("; ".join(problems))
        self.problems = problems


@dataclass(frozen=True)
class WireType:
    def render(self) -> str:
        raise NotImplementedError


@dataclass(frozen=True)
class WireInt32(WireType):
    def render(self) -> str:
        return "int32"


@dataclass(frozen=True)
class WireNumeric(WireType):
    max_digits: int | None = None

    def render(self) -> str:
        return f"numeric({self.max_digits})" if self.max_digits else "numeric"


@dataclass(frozen=True)
class WireString(WireType):
    max_length: int | None = None

    def render(self) -> str:
        return f"string({self.max_length})" if self.max_length else "string"


@dataclass(frozen=True)
class WireList(WireType):
    element: WireType
    bound: int | None = None

    def render(self) -> str:
        suffix = f"[{self.bound}]" if self.bound else "*"
        return f"{self.element.render()}{suffix}"


@dataclass(frozen=True)
class WireEnum(WireType):
    name: str

    def render(self) -> str:
        return self.name


@dataclass(frozen=True)
class WireRecord(WireType):
    """A reference with exactly one concrete alternative: no tag on the wire."""

    name: str

    def render(self) -> str:
        return self.name


@dataclass(frozen=True)
class WireUnion(WireType):
    """A tagged choice between concrete records; the tag is the index."""

    alternatives: tuple[str, ...]

    def render(self) -> str:
        return "one of " + " | ".join(self.alternatives)


@dataclass(frozen=True)
class SchemaField:
    name: str  # wire name
    alias: str  # code-facing name; equals the wire name unless mapped
    type: WireType
    optionality: Optionality
    declared_in: str


@dataclass(frozen=True)
class SchemaRecord:
    name: str
    alias: str
    fields: tuple[SchemaField, ...]  # flattened, inherited first
    is_abstract: bool = False
    is_exception: bool = False
    super_name: str | None = None

    def field(self, name: str) -> SchemaField | None:
        for f in self.fields:
            if f.name == name:
                return f
        return None


@dataclass(frozen=True)
class SchemaEnum:
    name: str
    alias: str
    members: tuple[str, ...]  # ordinal = index

    def ordinal(self, member: str) -> int:
        return self.members.index(member)


@dataclass(frozen=True)
class SchemaOperation:
    name: str
    alias: str
    input_record: str
    output_record: str
    throws: tuple[str, ...]


@dataclass(frozen=True)
class SchemaService:
    name: str
    alias: str
    operations: tuple[SchemaOperation, ...]

    def operation(self, name: str) -> SchemaOperation | None:
        for op in self.operations:
            if op.name == name:
                return op
        return None


@dataclass(frozen=True)
class Schema:
    api_name: str
    records: dict[str, SchemaRecord]
    enums: dict[str, SchemaEnum]
    services: dict[str, SchemaService]
    alternatives: dict[str, tuple[str, ...]] = dc_field(default_factory=dict)

    def reference(self, record_name: str) -> WireType:
        """The wire form of a reference to the named record type."""
        alts = self.alternatives.get(record_name)
        if not alts:
            raise SchemaError([f"{record_name} has no concrete alternatives"])
        if len(alts) == 1:
            return WireRecord(alts[0])
        return WireUnion(alts)


def derive_schema(definition: ApiDefinition) -> Schema:
    """Derive the public wire schema of a single definition."""
    problems: list[str] = []
    alternatives: dict[str, tuple[str, ...]] = {
        r.public_name: tuple(concrete_descendants(definition, r.public_name))
        for r in definition.records()
    }

    def wire_of(ref: TypeRef, path: str) -> WireType:
        if isinstance(ref, Int32Ref):
            return WireInt32()
        if isinstance(ref, NumericRef):
            return WireNumeric(ref.max_digits)
        if isinstance(ref, StringRef):
            return WireString(ref.max_length)
        if isinstance(ref, ListRef):
            return WireList(wire_of(ref.element, path), ref.bound)
        assert isinstance(ref, NamedRef)
        target = definition.types[ref.name]
        if isinstance(target, EnumType):
            return WireEnum(ref.name)
        alts = alternatives[ref.name]
        if not alts:
            problems.append(f"{path}: {ref.name} has no concrete alternatives")
            return WireRecord(ref.name)
        if len(alts) == 1:
            return WireRecord(alts[0])
        return WireUnion(alts)

    records: dict[str, SchemaRecord] = {}
    for record in definition.records():
        fields = tuple(
            SchemaField(
                name=ff.public_name,
                alias=ff.internal_name,
                type=wire_of(ff.field.type_ref, f"{record.public_name}.{ff.public_name}"),
                optionality=ff.optionality,
                declared_in=ff.declared_in,
            )
            for ff in flattened_fields(definition, record)
        )
        records[record.public_name] = SchemaRecord(
            name=record.public_name,
            alias=record.internal_name,
            fields=fields,
            is_abstract=record.is_abstract,
            is_exception=record.is_exception,
            super_name=record.super_type,
        )

    enums = {
        e.public_name: SchemaEnum(
            name=e.public_name,
            alias=e.internal_name,
            members=tuple(m.public_name for m in e.members),
        )
        for e in definition.enums()
    }

    services: dict[str, SchemaService] = {}
    for svc in definition.services.values():
        ops = []
        for op in svc.operations:
            for io_name in (op.input_type, op.output_type):
                if not alternatives.get(io_name):
                    problems.append(
                        f"{svc.public_name}.{op.public_name}: {io_name} has no concrete alternatives"
                    )
            ops.append(
                SchemaOperation(
                    name=op.public_name,
                    alias=op.internal_name,
                    input_record=op.input_type,
                    output_record=op.output_type,
                    throws=tuple(op.throws),
                )
            )
        services[svc.public_name] = SchemaService(
            name=svc.public_name, alias=svc.internal_name, operations=tuple(ops)
        )

    if problems:
        raise SchemaError(problems)
    return Schema(
        api_name=definition.name,
        records=records,
        enums=enums,
        services=services,
        alternatives=alternatives,
    )
