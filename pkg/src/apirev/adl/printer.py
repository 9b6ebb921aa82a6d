"""Canonical text renderer for definitions.

Formatting is fixed (two-space indent, one declaration per line) so that
parse -> print -> parse is the identity on the syntax tree.
"""

from __future__ import annotations

from .model import ApiDefinition, EnumType, Field, RecordType, Service


def _head(parts: list[str | None]) -> str:
    return " ".join(p for p in parts if p)


def _render_field(f: Field) -> str:
    parts: list[str | None] = [
        f.optionality.keyword if f.optionality is not None else None,
        f.type_ref.render(),
        f.public_name,
        f.replaces.render() if f.replaces is not None else None,
        f"as {f.alias}" if f.alias is not None else None,
    ]
    return _head(parts)


def _render_record(r: RecordType, lines: list[str]) -> None:
    parts: list[str | None] = [
        "abstract" if r.is_abstract else None,
        r.default_optionality.keyword if r.default_optionality is not None else None,
        r.keyword,
        r.public_name,
        f"extends {r.super_type}" if r.super_type is not None else None,
        r.replaces.render() if r.replaces is not None else None,
        f"as {r.alias}" if r.alias is not None else None,
    ]
    lines.append(f"  {_head(parts)} {{")
    for f in r.fields:
        lines.append(f"    {_render_field(f)}")
    lines.append("  }")


def _render_enum(e: EnumType, lines: list[str]) -> None:
    parts: list[str | None] = [
        "enum",
        e.public_name,
        e.replaces.render() if e.replaces is not None else None,
        f"as {e.alias}" if e.alias is not None else None,
    ]
    lines.append(f"  {_head(parts)} {{")
    for m in e.members:
        member = m.public_name
        if m.replaces is not None:
            member += " " + m.replaces.render()
        lines.append(f"    {member}")
    lines.append("  }")


def _render_service(s: Service, lines: list[str]) -> None:
    parts: list[str | None] = [
        "service",
        s.public_name,
        s.replaces.render() if s.replaces is not None else None,
        f"as {s.alias}" if s.alias is not None else None,
    ]
    lines.append(f"  {_head(parts)} {{")
    for op in s.operations:
        op_parts: list[str | None] = [
            f"{op.output_type} {op.public_name}({op.input_type})",
            op.replaces.render() if op.replaces is not None else None,
            f"as {op.alias}" if op.alias is not None else None,
            f"throws {', '.join(op.throws)}" if op.throws else None,
        ]
        lines.append(f"    {_head(op_parts)}")
    lines.append("  }")


def format_definition(definition: ApiDefinition) -> str:
    lines = [f"api {definition.name} {{"]
    for el in definition.elements:
        if isinstance(el, RecordType):
            _render_record(el, lines)
        elif isinstance(el, EnumType):
            _render_enum(el, lines)
        else:
            _render_service(el, lines)
    lines.append("}")
    return "\n".join(lines) + "\n"
