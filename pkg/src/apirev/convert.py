"""Converting payload values between a client's view and the merged form.

The provider stores and passes around values shaped by the merged
internal schema; each registered client speaks the public schema of the
revision it is pinned to. Both directions are pure renames over the
translation maps — no data is reshaped — so a request converts in and a
response converts back out field by field.

Values can fail to convert outward: a newer writer may have stored an
enum member or a union alternative that simply does not exist at the
reading client's revision. That raises UnrepresentableValue naming the
client-side path. For enums the caller may opt into a per-enum
fallback member instead.
"""

from __future__ import annotations

from .errors import ApiRevError
from .internal import InternalRepresentation
from .resolution import Disposition, ResolutionMap
from .schema import (
    Schema,
    WireEnum,
    WireList,
    WireRecord,
    WireType,
    WireUnion,
)
from .values import RecordValue


class ConversionError(ApiRevError):
    def __init__(self, path: str, message: str):
        super().__init__(f"{path}: {message}")
        self.path = path


class UnrepresentableValue(ApiRevError):
    """A stored value has no counterpart at the client's revision."""

    def __init__(self, path: str, message: str):
        super().__init__(f"{path}: {message}")
        self.path = path


def _client_alias_index(schema: Schema) -> dict[str, str]:
    return {record.alias: name for name, record in schema.records.items()}


def _reference_or_fail(schema: Schema, record_name: str) -> WireType:
    if record_name not in schema.records:
        raise ConversionError(record_name, "the client does not declare this record")
    return schema.reference(record_name)


def to_internal(
    rep: InternalRepresentation,
    plan: ResolutionMap,
    record_name: str,
    value: RecordValue,
) -> RecordValue:
    """Convert a client value (code-facing names) into internal form.

    ``record_name`` is the client's public name for the payload type,
    normally an operation's input record.
    """
    revision = plan.provider_revision
    if (revision, record_name) not in rep.type_to_internal:
        raise ConversionError(
            record_name,
            f"revision {revision} is not covered by the internal representation",
        )
    aliases = _client_alias_index(plan.client_schema)

    def conv(wire_type: WireType, v: object, path: str) -> object:
        if isinstance(wire_type, WireList):
            if not isinstance(v, list):
                raise ConversionError(path, f"expected a list, got {type(v).__name__}")
            return [conv(wire_type.element, e, f"{path}[{i}]") for i, e in enumerate(v)]
        if isinstance(wire_type, WireEnum):
            if not isinstance(v, str):
                raise ConversionError(path, f"expected a member name, got {type(v).__name__}")
            entry = rep.member_to_internal.get((revision, wire_type.name, v))
            if entry is None:
                raise ConversionError(
                    path, f"{wire_type.name} has no member {v!r} at revision {revision}"
                )
            return entry[1]
        if isinstance(wire_type, (WireRecord, WireUnion)):
            if not isinstance(v, RecordValue):
                raise ConversionError(path, f"expected a record value, got {type(v).__name__}")
            public = aliases.get(v.type_name)
            allowed = (
                wire_type.alternatives
                if isinstance(wire_type, WireUnion)
                else (wire_type.name,)
            )
            if public is None or public not in allowed:
                raise ConversionError(
                    path, f"{v.type_name!r} is not an alternative of this field"
                )
            return conv_record(public, v, path)
        return v

    def conv_record(public: str, v: RecordValue, path: str) -> RecordValue:
        client_record = plan.client_schema.records[public]
        dispositions = plan.records[public].fields
        internal_type = rep.type_to_internal[(revision, public)]
        fields: dict[str, object] = {}
        for f in client_record.fields:
            if dispositions[f.name] is Disposition.ABSENT:
                continue
            v_field = v.fields.get(f.alias)
            if v_field is None:
                continue
            _, internal_field = rep.field_to_internal[(revision, public, f.name)]
            fields[internal_field] = conv(f.type, v_field, f"{path}.{f.name}")
        return RecordValue(internal_type, fields)

    reference = _reference_or_fail(plan.client_schema, record_name)
    result = conv(reference, value, record_name)
    assert isinstance(result, RecordValue)
    return result


def to_client(
    rep: InternalRepresentation,
    plan: ResolutionMap,
    record_name: str,
    value: RecordValue,
    *,
    enum_fallbacks: "dict[str, str] | None" = None,
) -> RecordValue:
    """Convert an internal value back into a client's view.

    ``enum_fallbacks`` maps a client enum name to the member to
    substitute when the stored member does not exist at the client's
    revision; without an entry such a value raises
    UnrepresentableValue. Union alternatives have no fallback: an
    unknown alternative always raises.
    """
    revision = plan.provider_revision
    if (revision, record_name) not in rep.type_to_internal:
        raise ConversionError(
            record_name,
            f"revision {revision} is not covered by the internal representation",
        )
    fallbacks = enum_fallbacks or {}

    def conv(wire_type: WireType, v: object, path: str) -> object:
        if isinstance(wire_type, WireList):
            if not isinstance(v, list):
                raise ConversionError(path, f"expected a list, got {type(v).__name__}")
            return [conv(wire_type.element, e, f"{path}[{i}]") for i, e in enumerate(v)]
        if isinstance(wire_type, WireEnum):
            if not isinstance(v, str):
                raise ConversionError(path, f"expected a member name, got {type(v).__name__}")
            return conv_member(wire_type.name, v, path)
        if isinstance(wire_type, (WireRecord, WireUnion)):
            if not isinstance(v, RecordValue):
                raise ConversionError(path, f"expected a record value, got {type(v).__name__}")
            public = rep.type_from_internal.get((revision, v.type_name))
            if public is None:
                raise UnrepresentableValue(
                    path,
                    f"a value of internal type {v.type_name!r} has no counterpart "
                    f"at revision {revision}",
                )
            allowed = (
                wire_type.alternatives
                if isinstance(wire_type, WireUnion)
                else (wire_type.name,)
            )
            if public not in allowed:
                raise UnrepresentableValue(
                    path,
                    f"a {public} value is not among the alternatives the client accepts here",
                )
            return conv_record(public, v, path)
        return v

    def conv_member(enum_name: str, member: str, path: str) -> str:
        enum_internal = rep.type_to_internal[(revision, enum_name)]
        client_members = plan.client_schema.enums[enum_name].members
        entry = rep.member_from_internal.get((revision, enum_internal, member))
        if entry is not None and entry[1] in client_members:
            return entry[1]
        fallback = fallbacks.get(enum_name)
        if fallback is not None:
            if fallback not in client_members:
                raise ConversionError(
                    path, f"the configured fallback {fallback!r} is not a member of {enum_name}"
                )
            return fallback
        if entry is None:
            detail = f"member {member!r} does not exist at revision {revision}"
        else:
            detail = f"member {entry[1]!r} is not part of the client's view of {enum_name}"
        raise UnrepresentableValue(path, f"{enum_name} {detail}")

    def conv_record(public: str, v: RecordValue, path: str) -> RecordValue:
        client_record = plan.client_schema.records[public]
        dispositions = plan.records[public].fields
        fields: dict[str, object] = {}
        for f in client_record.fields:
            if dispositions[f.name] is Disposition.ABSENT:
                continue
            _, internal_field = rep.field_to_internal[(revision, public, f.name)]
            v_field = v.fields.get(internal_field)
            if v_field is None:
                continue
            fields[f.alias] = conv(f.type, v_field, f"{path}.{f.name}")
        return RecordValue(client_record.alias, fields)

    reference = _reference_or_fail(plan.client_schema, record_name)
    result = conv(reference, value, record_name)
    assert isinstance(result, RecordValue)
    return result
