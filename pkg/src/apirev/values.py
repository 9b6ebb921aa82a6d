"""Runtime payload values.

A record value names its type and carries only the fields that are
present. Both the type name and the field keys use the code-facing
names of whichever schema the value belongs to: a client value uses the
client's ``as`` aliases, an internal value uses internal names. Enum
values are member-name strings, numbers are Python ints, and lists are
Python lists; absence is expressed by leaving the key out (a ``None``
value is treated the same way).
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import ApiRevError

TYPE_KEY = "$type"


class ValueShapeError(ApiRevError):
    """A JSON document does not have the shape of a payload value."""


@dataclass(frozen=True)
class RecordValue:
    type_name: str
    fields: dict[str, object] = field(default_factory=dict)

    def with_field(self, name: str, value: object) -> "RecordValue":
        updated = dict(self.fields)
        updated[name] = value
        return RecordValue(self.type_name, updated)

    def without_field(self, name: str) -> "RecordValue":
        updated = {k: v for k, v in self.fields.items() if k != name}
        return RecordValue(self.type_name, updated)


def to_jsonable(value: object) -> object:
    """Render a payload value as JSON-serialisable data.

    Records become objects with a ``$type`` key; everything else is
    already JSON-shaped.
    """
    if isinstance(value, RecordValue):
        out: dict[str, object] = {TYPE_KEY: value.type_name}
        for name, v in value.fields.items():
            out[name] = to_jsonable(v)
        return out
    if isinstance(value, (list, tuple)):
        return [to_jsonable(v) for v in value]
    return value


def from_jsonable(obj: object, path: str = "$") -> object:
    """Read a payload value back from JSON-shaped data."""
    if isinstance(obj, dict):
        type_name = obj.get(TYPE_KEY)
        if not isinstance(type_name, str):
            raise ValueShapeError(
                f"{path}: record objects need a string {TYPE_KEY!r} key"
            )
        fields = {
            name: from_jsonable(v, f"{path}.{name}")
            for name, v in obj.items()
            if name != TYPE_KEY and v is not None
        }
        return RecordValue(type_name, fields)
    if isinstance(obj, list):
        return [from_jsonable(v, f"{path}[{i}]") for i, v in enumerate(obj)]
    if isinstance(obj, bool) or obj is None:
        raise ValueShapeError(f"{path}: {obj!r} is not a payload value")
    if isinstance(obj, (str, int)):
        return obj
    raise ValueShapeError(f"{path}: {type(obj).__name__} is not a payload value")
