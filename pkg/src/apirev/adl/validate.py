"""Structural well-formedness checks for parsed definitions.

Checks are revision-local: anything involving the previous revision
(replaces targets, internal-name continuity) belongs to the revision
machinery, not here.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

from ..errors import ApiRevError
from .model import (
    ApiDefinition,
    EnumType,
    ListRef,
    NamedRef,
    RecordType,
    Service,
    TypeRef,
    flattened_fields,
)


class Severity(enum.Enum):
    ERROR = "error"
    WARNING = "warning"


@dataclass(frozen=True)
class Diagnostic:
    severity: Severity
    path: str
    code: str
    message: str

    def render(self) -> str:
        return f"{self.severity.value} {self.path}: {self.message} [{self.code}]"


class DefinitionError(ApiRevError):
    """A definition failed validation; carries every diagnostic found."""

    def __init__(self, diagnostics: list[Diagnostic]):
        super().__init__("; ".join(d.render() for d in diagnostics))
        self.diagnostics = diagnostics


def _named_targets(ref: TypeRef) -> list[str]:
    if isinstance(ref, NamedRef):
        return [ref.name]
    if isinstance(ref, ListRef):
        return _named_targets(ref.element)
    return []


def validate_definition(definition: ApiDefinition) -> list[Diagnostic]:
    """All structural diagnostics for one definition, in declaration order."""
    out: list[Diagnostic] = []

    def error(path: str, code: str, message: str) -> None:
        out.append(Diagnostic(Severity.ERROR, path, code, message))

    # Types and services share one namespace, for public and internal names.
    seen_public: set[str] = set()
    seen_internal: dict[str, str] = {}
    for el in definition.elements:
        if el.public_name in seen_public:
            error(el.public_name, "DuplicateName", f"{el.public_name!r} declared twice")
        seen_public.add(el.public_name)
        other = seen_internal.get(el.internal_name)
        if other is not None:
            error(
                el.public_name,
                "DuplicateInternalName",
                f"internal name {el.internal_name!r} already used by {other!r}",
            )
        else:
            seen_internal[el.internal_name] = el.public_name

    # Inheritance links: known targets, record/exception kinds kept apart.
    cyclic: set[str] = set()
    for record in definition.records():
        if record.super_type is None:
            continue
        parent = definition.types.get(record.super_type)
        if parent is None:
            error(record.public_name, "UnknownTypeReference", f"unknown supertype {record.super_type!r}")
        elif not isinstance(parent, RecordType):
            error(record.public_name, "InvalidSupertype", f"{record.super_type!r} is not a record type")
        elif parent.is_exception != record.is_exception:
            kind = "exception" if record.is_exception else "record"
            error(
                record.public_name,
                "InvalidSupertype",
                f"a {kind} cannot extend {parent.keyword} {parent.public_name!r}",
            )

    # Cycle walk, tolerant of the link errors reported above.
    for record in definition.records():
        seen = {record.public_name}
        node = record
        while node.super_type is not None:
            parent = definition.types.get(node.super_type)
            if not isinstance(parent, RecordType):
                break
            if parent.public_name in seen:
                error(record.public_name, "CyclicInheritance", "inheritance cycle through " + parent.public_name)
                cyclic.add(record.public_name)
                break
            seen.add(parent.public_name)
            node = parent

    def check_field_type(path: str, ref: TypeRef) -> None:
        for target in _named_targets(ref):
            decl = definition.types.get(target)
            if decl is None and target in definition.services:
                error(path, "UnknownTypeReference", f"{target!r} is a service, not a type")
            elif decl is None:
                error(path, "UnknownTypeReference", f"unknown type {target!r}")
            elif isinstance(decl, RecordType) and decl.is_exception:
                error(path, "ExceptionUsage", f"exception {target!r} may only appear in throws lists")

    flattenable = {
        r.public_name
        for r in definition.records()
        if r.public_name not in cyclic
        and all(
            isinstance(definition.types.get(a), RecordType)
            for a in _ancestor_names(definition, r)
        )
    }
    for record in definition.records():
        if record.public_name not in flattenable:
            continue
        seen_fields: set[str] = set()
        seen_field_internal: dict[str, str] = {}
        for flat in flattened_fields(definition, record):
            path = f"{record.public_name}.{flat.public_name}"
            if flat.public_name in seen_fields:
                error(path, "DuplicateName", f"field {flat.public_name!r} declared twice (after flattening)")
            seen_fields.add(flat.public_name)
            owner = seen_field_internal.get(flat.internal_name)
            if owner is not None:
                error(
                    path,
                    "DuplicateInternalName",
                    f"internal name {flat.internal_name!r} already used by field {owner!r}",
                )
            else:
                seen_field_internal[flat.internal_name] = flat.public_name
        # Type references are checked on the declaring type only.
        for f in record.fields:
            check_field_type(f"{record.public_name}.{f.public_name}", f.type_ref)

    for record in definition.records():
        if record.public_name not in flattenable:
            for f in record.fields:
                check_field_type(f"{record.public_name}.{f.public_name}", f.type_ref)

    for en in definition.enums():
        seen_members: set[str] = set()
        for member in en.members:
            if member.public_name in seen_members:
                error(
                    f"{en.public_name}.{member.public_name}",
                    "DuplicateName",
                    f"member {member.public_name!r} declared twice",
                )
            seen_members.add(member.public_name)

    for service in definition.services.values():
        seen_ops: set[str] = set()
        seen_op_internal: dict[str, str] = {}
        for op in service.operations:
            path = f"{service.public_name}.{op.public_name}"
            if op.public_name in seen_ops:
                error(path, "DuplicateName", f"operation {op.public_name!r} declared twice")
            seen_ops.add(op.public_name)
            owner = seen_op_internal.get(op.internal_name)
            if owner is not None:
                error(path, "DuplicateInternalName", f"internal name {op.internal_name!r} already used by {owner!r}")
            else:
                seen_op_internal[op.internal_name] = op.public_name
            for io_name in (op.input_type, op.output_type):
                decl = definition.types.get(io_name)
                if decl is None:
                    error(path, "UnknownTypeReference", f"unknown type {io_name!r}")
                elif isinstance(decl, EnumType):
                    error(path, "InvalidOperationType", f"{io_name!r} is an enum; operations take record types")
                elif decl.is_exception:
                    error(path, "ExceptionUsage", f"exception {io_name!r} may only appear in throws lists")
            for thrown in op.throws:
                decl = definition.types.get(thrown)
                if decl is None:
                    error(path, "UnknownTypeReference", f"unknown exception type {thrown!r}")
                elif not (isinstance(decl, RecordType) and decl.is_exception):
                    error(path, "ExceptionUsage", f"{thrown!r} is not an exception type")

    return out


def _ancestor_names(definition: ApiDefinition, record: RecordType) -> list[str]:
    names: list[str] = []
    seen = {record.public_name}
    node = record
    while node.super_type is not None and node.super_type not in seen:
        names.append(node.super_type)
        seen.add(node.super_type)
        parent = definition.types.get(node.super_type)
        if not isinstance(parent, RecordType):
            break
        node = parent
    return names
