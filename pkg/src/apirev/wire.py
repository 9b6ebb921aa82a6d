"""Binary payload encoding.

Payloads are encoded against one schema; names never appear on the
wire, only positions. The encoding is canonical: for every schema,
direction and record there is exactly one byte string per value, and
decoding rejects anything else.

Layout:

* varints are unsigned LEB128 and must be minimal;
* ``int32`` is four bytes, big endian, two's complement;
* ``numeric`` is a varint byte length followed by the ASCII decimal
  digits (no leading zeros, no ``-0``); its bound counts digits;
* ``string`` is a varint byte length followed by UTF-8 bytes; its bound
  counts characters, not bytes;
* lists are a varint element count followed by the elements; a bound is
  the maximum count;
* enum values are the member ordinal as a varint;
* a record reference with several concrete alternatives is a varint tag
  (the index into the schema's alternative list) followed by the record
  body; with exactly one alternative the body stands alone;
* a record body is its flattened fields in schema order. A field the
  direction requires is encoded directly; any other field is prefixed
  with a presence byte, 0x01 for present followed by the value, 0x00
  for absent.

Requests require mandatory fields, responses require mandatory and
optin fields, and the internal direction requires nothing, so stored
internal values always carry presence bytes.
"""

from __future__ import annotations

import enum
import re

from .adl import Optionality
from .errors import ApiRevError
from .schema import (
    Schema,
    SchemaRecord,
    WireEnum,
    WireInt32,
    WireList,
    WireNumeric,
    WireRecord,
    WireString,
    WireType,
    WireUnion,
)
from .values import RecordValue

INT32_MIN = -(2**31)
INT32_MAX = 2**31 - 1

_CANONICAL_NUMBER = re.compile(r"^(0|-?[1-9][0-9]*)$")


class Direction(enum.Enum):
    REQUEST = "request"
    RESPONSE = "response"
    INTERNAL = "internal"

    def requires(self, optionality: Optionality) -> bool:
        if self is Direction.REQUEST:
            return optionality is Optionality.MANDATORY
        if self is Direction.RESPONSE:
            return optionality is not Optionality.OPTIONAL
        return False


class EncodeError(ApiRevError):
    def __init__(self, path: str, code: str, message: str):
        super().__init__(f"{path}: {message} [{code}]")
        self.path = path
        self.code = code


class DecodeError(ApiRevError):
    def __init__(self, path: str, code: str, message: str, offset: int):
        super().__init__(f"{path}: {message} at byte {offset} [{code}]")
        self.path = path
        self.code = code
        self.offset = offset


def encode_varint(n: int) -> bytes:
    if n < 0:
        raise ValueError("varints are unsigned")
    out = bytearray()
    while True:
        group = n & 0x7F
        n >>= 7
        if n:
            out.append(group | 0x80)
        else:
            out.append(group)
            return bytes(out)


class _Reader:
    def __init__(self, data: bytes):
        self.data = data
        self.offset = 0

    def take(self, n: int, path: str) -> bytes:
        if self.offset + n > len(self.data):
            raise DecodeError(path, "truncated", "payload ends early", self.offset)
        chunk = self.data[self.offset : self.offset + n]
        self.offset += n
        return chunk

    def varint(self, path: str) -> int:
        result = 0
        shift = 0
        while True:
            byte = self.take(1, path)[0]
            result |= (byte & 0x7F) << shift
            if not byte & 0x80:
                if shift and byte == 0:
                    raise DecodeError(
                        path, "nonminimal-varint", "varint has padding groups", self.offset
                    )
                return result
            shift += 7
            if shift > 63:
                raise DecodeError(path, "malformed-varint", "varint is too long", self.offset)


def encode_record(schema: Schema, record_name: str, value: object, direction: Direction) -> bytes:
    """Encode one top-level record payload canonically."""
    out = bytearray()
    _encode(schema, schema.reference(record_name), value, direction, record_name, out)
    return bytes(out)


def decode_record(schema: Schema, record_name: str, data: bytes, direction: Direction) -> RecordValue:
    """Decode one top-level record payload, rejecting non-canonical bytes."""
    reader = _Reader(data)
    value = _decode(schema, schema.reference(record_name), direction, record_name, reader)
    if reader.offset != len(data):
        raise DecodeError(
            record_name,
            "trailing-data",
            f"{len(data) - reader.offset} bytes follow the payload",
            reader.offset,
        )
    assert isinstance(value, RecordValue)
    return value


def _encode(
    schema: Schema,
    wire_type: WireType,
    value: object,
    direction: Direction,
    path: str,
    out: bytearray,
) -> None:
    if isinstance(wire_type, WireInt32):
        _require_int(value, path)
        if not INT32_MIN <= value <= INT32_MAX:
            raise EncodeError(path, "int32-range", f"{value} does not fit in 32 bits")
        out += value.to_bytes(4, "big", signed=True)
    elif isinstance(wire_type, WireNumeric):
        _require_int(value, path)
        digits = str(value)
        if wire_type.max_digits is not None and len(digits.lstrip("-")) > wire_type.max_digits:
            raise EncodeError(
                path, "bound-exceeded", f"{value} has more than {wire_type.max_digits} digits"
            )
        raw = digits.encode("ascii")
        out += encode_varint(len(raw))
        out += raw
    elif isinstance(wire_type, WireString):
        if not isinstance(value, str):
            raise EncodeError(path, "wrong-shape", f"expected a string, got {type(value).__name__}")
        if wire_type.max_length is not None and len(value) > wire_type.max_length:
            raise EncodeError(
                path, "bound-exceeded", f"{len(value)} characters exceed the bound of {wire_type.max_length}"
            )
        raw = value.encode("utf-8")
        out += encode_varint(len(raw))
        out += raw
    elif isinstance(wire_type, WireList):
        if not isinstance(value, (list, tuple)):
            raise EncodeError(path, "wrong-shape", f"expected a list, got {type(value).__name__}")
        if wire_type.bound is not None and len(value) > wire_type.bound:
            raise EncodeError(
                path, "bound-exceeded", f"{len(value)} elements exceed the bound of {wire_type.bound}"
            )
        out += encode_varint(len(value))
        for i, element in enumerate(value):
            _encode(schema, wire_type.element, element, direction, f"{path}[{i}]", out)
    elif isinstance(wire_type, WireEnum):
        if not isinstance(value, str):
            raise EncodeError(path, "wrong-shape", f"expected a member name, got {type(value).__name__}")
        members = schema.enums[wire_type.name].members
        if value not in members:
            raise EncodeError(
                path, "unknown-member", f"{value!r} is not a member of {wire_type.name}"
            )
        out += encode_varint(members.index(value))
    elif isinstance(wire_type, WireRecord):
        record = schema.records[wire_type.name]
        _require_record(value, path)
        if value.type_name != record.alias:
            raise EncodeError(
                path, "unknown-tag", f"expected a {record.alias}, got a {value.type_name}"
            )
        _encode_fields(schema, record, value, direction, path, out)
    elif isinstance(wire_type, WireUnion):
        _require_record(value, path)
        for tag, alt in enumerate(wire_type.alternatives):
            record = schema.records[alt]
            if record.alias == value.type_name:
                out += encode_varint(tag)
                _encode_fields(schema, record, value, direction, path, out)
                return
        raise EncodeError(
            path,
            "unknown-tag",
            f"{value.type_name!r} is not one of " + ", ".join(wire_type.alternatives),
        )
    else:  # pragma: no cover - the wire types above are exhaustive
        raise AssertionError(f"unhandled wire type {wire_type!r}")


def _encode_fields(
    schema: Schema,
    record: SchemaRecord,
    value: RecordValue,
    direction: Direction,
    path: str,
    out: bytearray,
) -> None:
    known = {f.alias for f in record.fields}
    for key in value.fields:
        if key not in known:
            raise EncodeError(
                f"{path}.{key}", "unknown-field", f"{record.alias} has no field of this name"
            )
    for f in record.fields:
        field_path = f"{path}.{f.name}"
        v = value.fields.get(f.alias)
        if direction.requires(f.optionality):
            if v is None:
                raise EncodeError(
                    field_path,
                    "missing-field",
                    f"the {direction.value} direction requires this field",
                )
            _encode(schema, f.type, v, direction, field_path, out)
        elif v is None:
            out.append(0x00)
        else:
            out.append(0x01)
            _encode(schema, f.type, v, direction, field_path, out)


def _decode(
    schema: Schema,
    wire_type: WireType,
    direction: Direction,
    path: str,
    reader: _Reader,
) -> object:
    if isinstance(wire_type, WireInt32):
        return int.from_bytes(reader.take(4, path), "big", signed=True)
    if isinstance(wire_type, WireNumeric):
        length = reader.varint(path)
        raw = reader.take(length, path)
        try:
            digits = raw.decode("ascii")
        except UnicodeDecodeError:
            raise DecodeError(path, "noncanonical-number", "number is not ASCII", reader.offset) from None
        if not _CANONICAL_NUMBER.match(digits):
            raise DecodeError(
                path, "noncanonical-number", f"{digits!r} is not a canonical decimal", reader.offset
            )
        if wire_type.max_digits is not None and len(digits.lstrip("-")) > wire_type.max_digits:
            raise DecodeError(
                path,
                "bound-exceeded",
                f"{digits!r} has more than {wire_type.max_digits} digits",
                reader.offset,
            )
        return int(digits)
    if isinstance(wire_type, WireString):
        length = reader.varint(path)
        raw = reader.take(length, path)
        try:
            text = raw.decode("utf-8")
        except UnicodeDecodeError:
            raise DecodeError(path, "invalid-utf8", "string is not valid UTF-8", reader.offset) from None
        if wire_type.max_length is not None and len(text) > wire_type.max_length:
            raise DecodeError(
                path,
                "bound-exceeded",
                f"{len(text)} characters exceed the bound of {wire_type.max_length}",
                reader.offset,
            )
        return text
    if isinstance(wire_type, WireList):
        count = reader.varint(path)
        if wire_type.bound is not None and count > wire_type.bound:
            raise DecodeError(
                path,
                "bound-exceeded",
                f"{count} elements exceed the bound of {wire_type.bound}",
                reader.offset,
            )
        return [
            _decode(schema, wire_type.element, direction, f"{path}[{i}]", reader)
            for i in range(count)
        ]
    if isinstance(wire_type, WireEnum):
        members = schema.enums[wire_type.name].members
        ordinal = reader.varint(path)
        if ordinal >= len(members):
            raise DecodeError(
                path, "unknown-ordinal", f"{wire_type.name} has no member {ordinal}", reader.offset
            )
        return members[ordinal]
    if isinstance(wire_type, WireRecord):
        record = schema.records[wire_type.name]
        return RecordValue(record.alias, _decode_fields(schema, record, direction, path, reader))
    if isinstance(wire_type, WireUnion):
        tag = reader.varint(path)
        if tag >= len(wire_type.alternatives):
            raise DecodeError(path, "unknown-tag", f"no alternative has tag {tag}", reader.offset)
        record = schema.records[wire_type.alternatives[tag]]
        return RecordValue(record.alias, _decode_fields(schema, record, direction, path, reader))
    raise AssertionError(f"unhandled wire type {wire_type!r}")  # pragma: no cover


def _decode_fields(
    schema: Schema,
    record: SchemaRecord,
    direction: Direction,
    path: str,
    reader: _Reader,
) -> dict[str, object]:
    fields: dict[str, object] = {}
    for f in record.fields:
        field_path = f"{path}.{f.name}"
        if direction.requires(f.optionality):
            fields[f.alias] = _decode(schema, f.type, direction, field_path, reader)
            continue
        marker = reader.take(1, field_path)[0]
        if marker == 0x01:
            fields[f.alias] = _decode(schema, f.type, direction, field_path, reader)
        elif marker != 0x00:
            raise DecodeError(
                field_path,
                "invalid-presence",
                f"presence byte must be 00 or 01, got {marker:02x}",
                reader.offset,
            )
    return fields


def _require_int(value: object, path: str) -> None:
    if isinstance(value, bool) or not isinstance(value, int):
        raise EncodeError(path, "wrong-shape", f"expected an integer, got {type(value).__name__}")


def _require_record(value: object, path: str) -> None:
    if not isinstance(value, RecordValue):
        raise EncodeError(path, "wrong-shape", f"expected a record value, got {type(value).__name__}")
