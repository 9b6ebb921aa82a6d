"""Definition language: parsing, validation, canonical printing."""

from __future__ import annotations

from .model import (
    ApiDefinition,
    EnumMember,
    EnumType,
    Field,
    FlatField,
    Int32Ref,
    ListRef,
    NamedRef,
    NumericRef,
    Optionality,
    QualifiedFieldName,
    RecordType,
    Replaces,
    Service,
    ServiceOperation,
    StringRef,
    TypeRef,
    concrete_descendants,
    effective_optionality,
    flattened_fields,
    most_permissive,
    subtype_map,
    supertype_chain,
)
from .parser import parse_text
from .printer import format_definition
from .validate import DefinitionError, Diagnostic, Severity, validate_definition


def parse_definition(text: str) -> ApiDefinition:
    """Parse and validate one definition file.

    Raises ApiSyntaxError / InvalidBoundError for grammar violations and
    DefinitionError (carrying all diagnostics) for structural ones.
    """
    definition = parse_text(text)
    diagnostics = [d for d in validate_definition(definition) if d.severity is Severity.ERROR]
    if diagnostics:
        raise DefinitionError(diagnostics)
    return definition


__all__ = [
    "ApiDefinition",
    "DefinitionError",
    "Diagnostic",
    "EnumMember",
    "EnumType",
    "Field",
    "FlatField",
    "Int32Ref",
    "ListRef",
    "NamedRef",
    "NumericRef",
    "Optionality",
    "QualifiedFieldName",
    "RecordType",
    "Replaces",
    "Service",
    "ServiceOperation",
    "Severity",
    "StringRef",
    "TypeRef",
    "concrete_descendants",
    "effective_optionality",
    "flattened_fields",
    "format_definition",
    "most_permissive",
    "parse_definition",
    "parse_text",
    "subtype_map",
    "supertype_chain",
    "validate_definition",
]
