"""Matching a client definition against one provider revision.

A client definition is a plain API definition that names the subset of
the provider API the client uses, always pinned to one provider
revision. Matching is purely name based: a client element matches the
provider element with the same public name. ``as`` aliases are local to
the client's code and never affect matching.

Static direction rules keep later conversions total on matched fields:

* a field the provider requires on input (mandatory) must be declared
  mandatory by the client, or requests could omit it;
* a field the client requires on output (mandatory or optin) must be
  guaranteed by the provider (mandatory or optin), or responses could
  omit it;
* an unmatched provider field is fine unless the provider requires it
  on input; an unmatched client field is fine only when the client
  treats it as fully optional, in which case it resolves as absent.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

from .adl import ApiDefinition, EnumType, Optionality, RecordType
from .errors import ApiRevError
from .schema import (
    Schema,
    WireEnum,
    WireList,
    WireRecord,
    WireType,
    WireUnion,
    derive_schema,
)


class ResolutionCode(enum.Enum):
    UNSUPPORTED_REVISION = "UnsupportedRevision"
    UNKNOWN_NAME = "UnknownName"
    TYPE_MISMATCH = "TypeMismatch"
    MISSING_MANDATORY = "MissingMandatoryElement"
    REPLACES_IN_CLIENT = "ReplacesInClient"


@dataclass(frozen=True)
class ResolutionIssue:
    code: ResolutionCode
    path: str
    message: str

    def render(self) -> str:
        return f"{self.path}: {self.message} [{self.code.value}]"


class ResolutionError(ApiRevError):
    def __init__(self, issues: list[ResolutionIssue]):
        super().__init__("; ".join(i.render() for i in issues))
        self.issues = issues

    def codes(self) -> set[ResolutionCode]:
        return {i.code for i in self.issues}


@dataclass(frozen=True)
class ClientDefinition:
    """A client's view of the API, pinned to one provider revision."""

    definition: ApiDefinition
    provider_revision: int


class Disposition(enum.Enum):
    MATCHED = "matched"
    ABSENT = "absent"  # optional client-only field: never populated


@dataclass(frozen=True)
class ResolvedRecord:
    name: str
    fields: dict[str, Disposition]  # by client public field name


@dataclass(frozen=True)
class ResolutionMap:
    """The outcome of matching one client against one provider revision."""

    api_name: str
    provider_revision: int
    client_schema: Schema
    provider_schema: Schema
    records: dict[str, ResolvedRecord]
    operations: tuple[tuple[str, str], ...]  # matched (service, operation) pairs


def _no_replaces(definition: ApiDefinition, issues: list[ResolutionIssue]) -> None:
    def flag(path: str) -> None:
        issues.append(
            ResolutionIssue(
                ResolutionCode.REPLACES_IN_CLIENT,
                path,
                "client definitions are pinned to a revision and cannot declare predecessors",
            )
        )

    for decl in definition.types.values():
        if decl.replaces is not None:
            flag(decl.public_name)
        if isinstance(decl, RecordType):
            for f in decl.fields:
                if f.replaces is not None:
                    flag(f"{decl.public_name}.{f.public_name}")
        elif isinstance(decl, EnumType):
            for m in decl.members:
                if m.replaces is not None:
                    flag(f"{decl.public_name}.{m.public_name}")
    for svc in definition.services.values():
        if svc.replaces is not None:
            flag(svc.public_name)
        for op in svc.operations:
            if op.replaces is not None:
                flag(f"{svc.public_name}.{op.public_name}")


def _wire_compatible(
    client_type: WireType,
    provider_type: WireType,
    path: str,
    issues: list[ResolutionIssue],
) -> None:
    """Exact structural match; unions may narrow, nothing promotes."""

    def mismatch(detail: str) -> None:
        issues.append(ResolutionIssue(ResolutionCode.TYPE_MISMATCH, path, detail))

    if isinstance(client_type, WireList) and isinstance(provider_type, WireList):
        if client_type.bound != provider_type.bound:
            mismatch(
                f"list bound {client_type.render()} does not equal {provider_type.render()}"
            )
        _wire_compatible(client_type.element, provider_type.element, path, issues)
        return
    if isinstance(client_type, (WireRecord, WireUnion)) and isinstance(
        provider_type, (WireRecord, WireUnion)
    ):
        client_alts = (
            client_type.alternatives
            if isinstance(client_type, WireUnion)
            else (client_type.name,)
        )
        provider_alts = (
            provider_type.alternatives
            if isinstance(provider_type, WireUnion)
            else (provider_type.name,)
        )
        extra = [a for a in client_alts if a not in provider_alts]
        if extra:
            mismatch(
                "client alternatives "
                + ", ".join(extra)
                + " are not available in the provider revision"
            )
        return
    if isinstance(client_type, WireEnum) and isinstance(provider_type, WireEnum):
        if client_type.name != provider_type.name:
            mismatch(f"enum {client_type.name} does not match {provider_type.name}")
        return
    if client_type != provider_type:
        mismatch(f"{client_type.render()} does not equal {provider_type.render()}")


def resolve(client: ClientDefinition, provider_definition: ApiDefinition) -> ResolutionMap:
    """Match a client definition against the provider revision it names.

    Raises ResolutionError with every issue found. The provider
    definition must be the one published as ``client.provider_revision``.
    """
    issues: list[ResolutionIssue] = []
    _no_replaces(client.definition, issues)
    if client.definition.name != provider_definition.name:
        issues.append(
            ResolutionIssue(
                ResolutionCode.UNKNOWN_NAME,
                client.definition.name,
                f"client is written against {client.definition.name!r}, "
                f"provider is {provider_definition.name!r}",
            )
        )
        raise ResolutionError(issues)
    if issues:
        raise ResolutionError(issues)

    client_schema = derive_schema(client.definition)
    provider_schema = derive_schema(provider_definition)

    records: dict[str, ResolvedRecord] = {}
    for name, crecord in client_schema.records.items():
        precord = provider_schema.records.get(name)
        if precord is None:
            if name in provider_schema.enums:
                issues.append(
                    ResolutionIssue(
                        ResolutionCode.TYPE_MISMATCH,
                        name,
                        "the client declares a record, the provider an enum",
                    )
                )
            else:
                issues.append(
                    ResolutionIssue(
                        ResolutionCode.UNKNOWN_NAME,
                        name,
                        "the provider revision has no type of this name",
                    )
                )
            continue
        if crecord.is_exception != precord.is_exception:
            issues.append(
                ResolutionIssue(
                    ResolutionCode.TYPE_MISMATCH,
                    name,
                    "record and exception kinds do not match",
                )
            )
            continue
        dispositions: dict[str, Disposition] = {}
        for cfield in crecord.fields:
            path = f"{name}.{cfield.name}"
            pfield = precord.field(cfield.name)
            if pfield is None:
                if cfield.optionality is Optionality.OPTIONAL:
                    dispositions[cfield.name] = Disposition.ABSENT
                else:
                    issues.append(
                        ResolutionIssue(
                            ResolutionCode.MISSING_MANDATORY,
                            path,
                            "the client requires this field on output, "
                            "but the provider revision does not have it",
                        )
                    )
                continue
            _wire_compatible(cfield.type, pfield.type, path, issues)
            if pfield.optionality is Optionality.MANDATORY and cfield.optionality is not Optionality.MANDATORY:
                issues.append(
                    ResolutionIssue(
                        ResolutionCode.MISSING_MANDATORY,
                        path,
                        "the provider requires this field on input, "
                        "so the client cannot mark it " + cfield.optionality.keyword,
                    )
                )
            elif cfield.optionality is not Optionality.OPTIONAL and pfield.optionality is Optionality.OPTIONAL:
                issues.append(
                    ResolutionIssue(
                        ResolutionCode.MISSING_MANDATORY,
                        path,
                        "the client requires this field on output, "
                        "but the provider only provides it optionally",
                    )
                )
            dispositions[cfield.name] = Disposition.MATCHED
        for pfield in precord.fields:
            if crecord.field(pfield.name) is None and pfield.optionality is Optionality.MANDATORY:
                issues.append(
                    ResolutionIssue(
                        ResolutionCode.MISSING_MANDATORY,
                        f"{name}.{pfield.name}",
                        "the provider requires this field on input, "
                        "but the client does not declare it",
                    )
                )
        records[name] = ResolvedRecord(name, dispositions)

    for name, cenum in client_schema.enums.items():
        penum = provider_schema.enums.get(name)
        if penum is None:
            if name in provider_schema.records:
                issues.append(
                    ResolutionIssue(
                        ResolutionCode.TYPE_MISMATCH,
                        name,
                        "the client declares an enum, the provider a record",
                    )
                )
            else:
                issues.append(
                    ResolutionIssue(
                        ResolutionCode.UNKNOWN_NAME,
                        name,
                        "the provider revision has no enum of this name",
                    )
                )
            continue
        extra = [m for m in cenum.members if m not in penum.members]
        if extra:
            issues.append(
                ResolutionIssue(
                    ResolutionCode.TYPE_MISMATCH,
                    name,
                    "client members " + ", ".join(extra) + " do not exist in the provider revision",
                )
            )

    operations: list[tuple[str, str]] = []
    for name, csvc in client_schema.services.items():
        psvc = provider_schema.services.get(name)
        if psvc is None:
            issues.append(
                ResolutionIssue(
                    ResolutionCode.UNKNOWN_NAME,
                    name,
                    "the provider revision has no service of this name",
                )
            )
            continue
        for cop in csvc.operations:
            path = f"{name}.{cop.name}"
            pop = psvc.operation(cop.name)
            if pop is None:
                issues.append(
                    ResolutionIssue(
                        ResolutionCode.UNKNOWN_NAME,
                        path,
                        "the provider revision has no operation of this name",
                    )
                )
                continue
            if cop.input_record != pop.input_record or cop.output_record != pop.output_record:
                issues.append(
                    ResolutionIssue(
                        ResolutionCode.TYPE_MISMATCH,
                        path,
                        f"operation signature {cop.input_record} -> {cop.output_record} does not "
                        f"match {pop.input_record} -> {pop.output_record}",
                    )
                )
                continue
            extra = [t for t in cop.throws if t not in pop.throws]
            if extra:
                issues.append(
                    ResolutionIssue(
                        ResolutionCode.UNKNOWN_NAME,
                        path,
                        "declared exceptions " + ", ".join(extra) + " do not exist on the provider operation",
                    )
                )
                continue
            operations.append((name, cop.name))

    if issues:
        raise ResolutionError(issues)
    return ResolutionMap(
        api_name=provider_definition.name,
        provider_revision=client.provider_revision,
        client_schema=client_schema,
        provider_schema=provider_schema,
        records=records,
        operations=tuple(operations),
    )


def require_supported(revision: int, supported: "tuple[int, ...] | list[int]", api_name: str) -> None:
    """Raise when a client is pinned to a revision the provider dropped."""
    if revision not in supported:
        raise ResolutionError(
            [
                ResolutionIssue(
                    ResolutionCode.UNSUPPORTED_REVISION,
                    api_name,
                    f"revision {revision} is not in the supported set "
                    + "{" + ", ".join(str(s) for s in supported) + "}",
                )
            ]
        )
