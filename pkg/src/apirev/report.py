"""Deterministic text and JSON views of the library's outputs.

Everything here is presentation only: the same input always renders the
same lines, so reports can be diffed and golden-tested.
"""

from __future__ import annotations

from .changes import ChangeSet, FieldSite
from .internal import InternalRepresentation
from .registry import ApiStatus
from .resolution import ResolutionMap
from .schema import Schema, SchemaRecord


def span_text(revisions: "set[int] | list[int]") -> str:
    """Compress revision ids into runs: {2, 4, 5, 6} -> "2, 4-6"."""
    ordered = sorted(set(revisions))
    runs: list[str] = []
    start = prev = ordered[0]
    for r in ordered[1:]:
        if r == prev + 1:
            prev = r
            continue
        runs.append(f"{start}-{prev}" if start != prev else str(start))
        start = prev = r
    runs.append(f"{start}-{prev}" if start != prev else str(start))
    return ", ".join(runs)


# ---- change sets -------------------------------------------------------

def _site(site: FieldSite) -> str:
    return site.render()


def render_changes(changes: ChangeSet) -> str:
    lines = [f"changes from revision {changes.from_revision} to {changes.to_revision}"]
    if changes.is_empty:
        lines.append("  none")
        return "\n".join(lines) + "\n"

    def block(label: str, entries: "list[str]") -> None:
        if entries:
            lines.append(f"  {label}:")
            lines.extend(f"    {e}" for e in entries)

    block("types added", list(changes.types_added))
    block("types renamed", [f"{o} -> {n}" for o, n in changes.types_renamed])
    block("types deleted", list(changes.types_deleted))
    block("fields added", [_site(s) for s in changes.fields_added])
    block("fields renamed", [f"{_site(o)} -> {_site(n)}" for o, n in changes.fields_renamed])
    block(
        "fields type-changed",
        [f"{_site(s)}: {old} -> {new}" for s, old, new in changes.fields_type_changed],
    )
    block(
        "fields pulled up",
        [
            ", ".join(_site(s) for s in sources) + f" -> {_site(target)}"
            for sources, target in changes.fields_pulled_up
        ],
    )
    block(
        "fields pushed down",
        [
            f"{_site(source)} -> " + ", ".join(_site(s) for s in targets)
            for source, targets in changes.fields_pushed_down
        ],
    )
    block("fields deleted", [_site(s) for s in changes.fields_deleted])
    block("members added", [f"{e}.{m}" for e, m in changes.members_added])
    block(
        "members renamed",
        [f"{oe}.{om} -> {ne}.{nm}" for (oe, om), (ne, nm) in changes.members_renamed],
    )
    block("members deleted", [f"{e}.{m}" for e, m in changes.members_deleted])
    block("services added", list(changes.services_added))
    block("services renamed", [f"{o} -> {n}" for o, n in changes.services_renamed])
    block("services deleted", list(changes.services_deleted))
    block("operations added", [f"{s}.{o}" for s, o in changes.operations_added])
    block(
        "operations renamed",
        [f"{os_}.{oo} -> {ns}.{no}" for (os_, oo), (ns, no) in changes.operations_renamed],
    )
    block("operations deleted", [f"{s}.{o}" for s, o in changes.operations_deleted])
    block("compatibility notes", list(changes.union_notes))
    return "\n".join(lines) + "\n"


def changes_to_dict(changes: ChangeSet) -> dict:
    def sites(entries):
        return [s.render() for s in entries]

    return {
        "from_revision": changes.from_revision,
        "to_revision": changes.to_revision,
        "types": {
            "added": list(changes.types_added),
            "renamed": [{"from": o, "to": n} for o, n in changes.types_renamed],
            "deleted": list(changes.types_deleted),
        },
        "fields": {
            "added": sites(changes.fields_added),
            "renamed": [
                {"from": o.render(), "to": n.render()} for o, n in changes.fields_renamed
            ],
            "type_changed": [
                {"field": s.render(), "from": old, "to": new}
                for s, old, new in changes.fields_type_changed
            ],
            "pulled_up": [
                {"from": sites(srcs), "to": target.render()}
                for srcs, target in changes.fields_pulled_up
            ],
            "pushed_down": [
                {"from": source.render(), "to": sites(targets)}
                for source, targets in changes.fields_pushed_down
            ],
            "deleted": sites(changes.fields_deleted),
        },
        "members": {
            "added": [f"{e}.{m}" for e, m in changes.members_added],
            "renamed": [
                {"from": f"{oe}.{om}", "to": f"{ne}.{nm}"}
                for (oe, om), (ne, nm) in changes.members_renamed
            ],
            "deleted": [f"{e}.{m}" for e, m in changes.members_deleted],
        },
        "services": {
            "added": list(changes.services_added),
            "renamed": [{"from": o, "to": n} for o, n in changes.services_renamed],
            "deleted": list(changes.services_deleted),
        },
        "operations": {
            "added": [f"{s}.{o}" for s, o in changes.operations_added],
            "renamed": [
                {"from": f"{os_}.{oo}", "to": f"{ns}.{no}"}
                for (os_, oo), (ns, no) in changes.operations_renamed
            ],
            "deleted": [f"{s}.{o}" for s, o in changes.operations_deleted],
        },
        "notes": list(changes.union_notes),
    }


# ---- merged internal representation ------------------------------------

def _field_spans(rep: InternalRepresentation) -> dict[tuple[str, str], set[int]]:
    spans: dict[tuple[str, str], set[int]] = {}
    for (rev, _owner, _field), target in rep.field_to_internal.items():
        spans.setdefault(target, set()).add(rev)
    return spans


def _type_spans(rep: InternalRepresentation) -> dict[str, set[int]]:
    spans: dict[str, set[int]] = {}
    for (rev, _pub), internal in rep.type_to_internal.items():
        spans.setdefault(internal, set()).add(rev)
    for (rev, _pub), internal in rep.service_to_internal.items():
        spans.setdefault(internal, set()).add(rev)
    return spans


def render_internal(rep: InternalRepresentation) -> str:
    schema = rep.schema
    field_spans = _field_spans(rep)
    type_spans = _type_spans(rep)
    lines = [f"api {rep.api_name} merged over revisions {span_text(rep.supported)}"]

    for name in schema.records:
        record = schema.records[name]
        head = "exception" if record.is_exception else "record"
        suffix = " (abstract)" if record.is_abstract else ""
        extends = f" extends {record.super_name}" if record.super_name else ""
        lines.append("")
        lines.append(f"{head} {name}{extends}{suffix}  [revisions {span_text(type_spans[name])}]")
        for f in record.fields:
            if f.declared_in != name:
                continue
            span = field_spans[(name, f.name)]
            lines.append(
                f"  {f.optionality.keyword} {f.type.render()} {f.name}  [revisions {span_text(span)}]"
            )
    for name in schema.enums:
        lines.append("")
        lines.append(f"enum {name}  [revisions {span_text(type_spans[name])}]")
        for ordinal, member in enumerate(schema.enums[name].members):
            lines.append(f"  {member} = {ordinal}")
    for name in schema.services:
        lines.append("")
        lines.append(f"service {name}  [revisions {span_text(type_spans[name])}]")
        for op in schema.services[name].operations:
            throws = " throws " + ", ".join(op.throws) if op.throws else ""
            lines.append(f"  {op.output_record} {op.name}({op.input_record}){throws}")
    return "\n".join(lines) + "\n"


def internal_to_dict(rep: InternalRepresentation) -> dict:
    schema = rep.schema
    field_spans = _field_spans(rep)
    type_spans = _type_spans(rep)

    def record_dict(record: SchemaRecord) -> dict:
        return {
            "abstract": record.is_abstract,
            "exception": record.is_exception,
            "extends": record.super_name,
            "revisions": sorted(type_spans[record.name]),
            "fields": [
                {
                    "name": f.name,
                    "type": f.type.render(),
                    "optionality": f.optionality.keyword,
                    "revisions": sorted(field_spans[(record.name, f.name)]),
                }
                for f in record.fields
                if f.declared_in == record.name
            ],
        }

    return {
        "api": rep.api_name,
        "supported": list(rep.supported),
        "records": {name: record_dict(r) for name, r in schema.records.items()},
        "enums": {
            name: {
                "revisions": sorted(type_spans[name]),
                "members": list(e.members),
            }
            for name, e in schema.enums.items()
        },
        "services": {
            name: {
                "revisions": sorted(type_spans[name]),
                "operations": [
                    {
                        "name": op.name,
                        "input": op.input_record,
                        "output": op.output_record,
                        "throws": list(op.throws),
                    }
                    for op in s.operations
                ],
            }
            for name, s in schema.services.items()
        },
    }


# ---- resolution ---------------------------------------------------------

def render_resolution(plan: ResolutionMap) -> str:
    lines = [f"client of {plan.api_name} pinned to revision {plan.provider_revision}"]
    for name in plan.records:
        record = plan.client_schema.records[name]
        label = f" (client name {record.alias})" if record.alias != name else ""
        lines.append("")
        lines.append(f"record {name}{label}")
        for f in record.fields:
            alias = f" (client name {f.alias})" if f.alias != f.name else ""
            state = plan.records[name].fields[f.name].value
            lines.append(f"  {f.name}{alias}: {state}")
    if plan.operations:
        lines.append("")
        lines.append("operations")
        for service, op in plan.operations:
            lines.append(f"  {service}.{op}: matched")
    return "\n".join(lines) + "\n"


def resolution_to_dict(plan: ResolutionMap) -> dict:
    return {
        "api": plan.api_name,
        "revision": plan.provider_revision,
        "records": {
            name: {
                "client_name": plan.client_schema.records[name].alias,
                "fields": {
                    f.name: {
                        "client_name": f.alias,
                        "state": plan.records[name].fields[f.name].value,
                    }
                    for f in plan.client_schema.records[name].fields
                },
            }
            for name in plan.records
        },
        "operations": [f"{service}.{op}" for service, op in plan.operations],
    }


# ---- registry status ------------------------------------------------------

def render_status(status: ApiStatus) -> str:
    lines = [
        f"api {status.api_name}: revisions 1-{status.head}, "
        f"supported {span_text(status.supported)}"
    ]
    if status.clients:
        lines.append("clients:")
        for record in status.clients:
            lines.append(f"  {record.client_id}: pinned to revision {record.revision}")
    else:
        lines.append("clients: none")
    return "\n".join(lines) + "\n"


def status_to_dict(status: ApiStatus) -> dict:
    return {
        "api": status.api_name,
        "head": status.head,
        "supported": list(status.supported),
        "clients": {c.client_id: {"revision": c.revision} for c in status.clients},
    }


# ---- definition summaries -------------------------------------------------

def render_definition_summary(schema: Schema) -> str:
    records = sum(1 for r in schema.records.values() if not r.is_exception)
    exceptions = sum(1 for r in schema.records.values() if r.is_exception)
    parts = [f"{records} record(s)"]
    if exceptions:
        parts.append(f"{exceptions} exception(s)")
    if schema.enums:
        parts.append(f"{len(schema.enums)} enum(s)")
    if schema.services:
        parts.append(f"{len(schema.services)} service(s)")
    return f"definition {schema.api_name} is valid: " + ", ".join(parts) + "\n"
