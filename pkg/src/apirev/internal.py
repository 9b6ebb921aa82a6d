"""The provider's merged view over a supported revision set.

The merged representation starts from the newest supported revision and
walks backward through the set. Elements whose predecessor chain reaches
the next older supported revision merge into their successor (keeping
the successor's internal name and shape); elements without a successor
were deleted later, but old clients still use them, so they are added
back:

* a deleted field joins its declaring type, forced optional, since
  newer clients no longer provide it;
* a deleted type (or service, enum member, operation) is added whole,
  in its newest form.

Optionality merges to the most permissive declared value across the
revisions where the element exists. Abstractness merges the other way:
a record is concrete if it was concrete in any supported revision, so
values written against old revisions keep a valid union tag.

Internal names must be unambiguous over the whole set: type and service
names across the schema, field names within each record's flattened
view, member names per enum, operation names per service. A clash is a
derivation error; the fix is an internal rename via ``as`` in the
offending revision.
"""

from __future__ import annotations

from dataclasses import dataclass

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
    flattened_fields,
    most_permissive,
    supertype_chain,
)
from .errors import ApiRevError
from .revisions import RevisionHistory, composed_predecessors
from .schema import (
    Schema,
    SchemaEnum,
    SchemaField,
    SchemaOperation,
    SchemaRecord,
    SchemaService,
    WireEnum,
    WireInt32,
    WireList,
    WireNumeric,
    WireRecord,
    WireString,
    WireType,
    WireUnion,
)


class InternalDerivationError(ApiRevError):
    def __init__(self, problems: list[str]):
        super().__init__("; ".join(problems))
        self.problems = problems


class _TypeB:
    """Builder for one merged type (record, exception, or enum)."""

    def __init__(self, decl, revision: int):
        self.is_enum = isinstance(decl, EnumType)
        self.internal_name: str = decl.internal_name
        self.is_exception = getattr(decl, "is_exception", False)
        self.abstract_everywhere = getattr(decl, "is_abstract", False)
        self.concrete_somewhere = not getattr(decl, "is_abstract", True)
        self.super_b: _TypeB | None = None
        self.own_fields: list[_FieldB] = []
        self.members: list[_MemberB] = []
        self.lineage: dict[int, str] = {revision: decl.public_name}

    def merge(self, decl, revision: int) -> None:
        self.lineage[revision] = decl.public_name
        if not self.is_enum:
            self.abstract_everywhere = self.abstract_everywhere and decl.is_abstract
            self.concrete_somewhere = self.concrete_somewhere or not decl.is_abstract

    @property
    def newest_revision(self) -> int:
        return max(self.lineage)


class _FieldB:
    def __init__(self, internal_name: str, type_ref: TypeRef, declared_b: _TypeB):
        self.internal_name = internal_name
        self.type_ref = type_ref  # named references rewritten to internal names
        self.declared_b = declared_b
        self.lub: Optionality | None = None
        self.present_at: set[int] = set()

    def observe(self, optionality: Optionality, revision: int) -> None:
        self.present_at.add(revision)
        self.lub = optionality if self.lub is None else most_permissive(self.lub, optionality)

    def final_optionality(self) -> Optionality:
        if max(self.present_at) < self.declared_b.newest_revision:
            return Optionality.OPTIONAL  # deleted later; newer clients omit it
        assert self.lub is not None
        return self.lub


class _MemberB:
    def __init__(self, internal_name: str, revision: int, public_name: str):
        self.internal_name = internal_name
        self.lineage: dict[int, str] = {revision: public_name}


class _OpB:
    def __init__(self, internal_name: str, input_internal: str, output_internal: str):
        self.internal_name = internal_name
        self.input_internal = input_internal
        self.output_internal = output_internal
        self.throws: list[str] = []
        self.lineage: dict[int, str] = {}

    def add_throws(self, names: list[str]) -> None:
        for name in names:
            if name not in self.throws:
                self.throws.append(name)


class _SvcB:
    def __init__(self, internal_name: str, revision: int, public_name: str):
        self.internal_name = internal_name
        self.ops: list[_OpB] = []
        self.lineage: dict[int, str] = {revision: public_name}


@dataclass(frozen=True)
class InternalRepresentation:
    """Merged schema plus per-revision translation maps.

    The ``*_to_internal`` maps take public paths at one supported
    revision to internal paths; ``*_from_internal`` invert them for the
    response direction (injective per revision by construction).
    """

    api_name: str
    supported: tuple[int, ...]
    schema: Schema
    type_to_internal: dict[tuple[int, str], str]
    type_from_internal: dict[tuple[int, str], str]
    field_to_internal: dict[tuple[int, str, str], tuple[str, str]]
    member_to_internal: dict[tuple[int, str, str], tuple[str, str]]
    member_from_internal: dict[tuple[int, str, str], tuple[str, str]]
    service_to_internal: dict[tuple[int, str], str]
    operation_to_internal: dict[tuple[int, str, str], tuple[str, str]]


def derive_internal(history: RevisionHistory, supported: "list[int] | tuple[int, ...] | set[int]") -> InternalRepresentation:
    supported_ids = sorted(set(supported))
    if not supported_ids:
        raise InternalDerivationError(["the supported revision set is empty"])
    definitions = {s: history.revision(s).definition for s in supported_ids}
    layers = list(reversed(supported_ids))

    all_types: list[_TypeB] = []
    all_services: list[_SvcB] = []
    anchor_types: dict[int, dict[str, _TypeB]] = {}
    anchor_fields: dict[int, dict[tuple[str, str], _FieldB]] = {}
    anchor_members: dict[int, dict[tuple[str, str], _MemberB]] = {}
    anchor_services: dict[int, dict[str, _SvcB]] = {}
    anchor_ops: dict[int, dict[tuple[str, str], _OpB]] = {}

    def rewrite(ref: TypeRef, at: dict[str, _TypeB]) -> TypeRef:
        if isinstance(ref, ListRef):
            return ListRef(rewrite(ref.element, at), ref.bound)
        if isinstance(ref, NamedRef):
            return NamedRef(at[ref.name].internal_name)
        return ref

    def by_depth(definition: ApiDefinition) -> list[RecordType]:
        return sorted(
            definition.records(),
            key=lambda r: len(supertype_chain(definition, r)),
        )

    def ingest(revision: int, definition: ApiDefinition, at: dict[str, _TypeB], sv: dict[str, _SvcB]) -> None:
        """Record fields/members/operations of one layer into builders.

        ``at``/``sv`` already map every type and service of this
        revision to its builder; this pass fills per-element anchors,
        creating builders for elements without successors.
        """
        af: dict[tuple[str, str], _FieldB] = {}
        am: dict[tuple[str, str], _MemberB] = {}
        ao: dict[tuple[str, str], _OpB] = {}
        for record in by_depth(definition):
            rtb = at[record.public_name]
            for ff in flattened_fields(definition, record):
                key = (record.public_name, ff.public_name)
                fb = af.get((ff.declared_in, ff.public_name))
                if fb is None:
                    fb = _FieldB(ff.internal_name, rewrite(ff.field.type_ref, at), at[ff.declared_in])
                    at[ff.declared_in].own_fields.append(fb)
                fb.observe(ff.optionality, revision)
                af[key] = fb
        for en in definition.enums():
            etb = at[en.public_name]
            for m in en.members:
                mb = _MemberB(m.public_name, revision, m.public_name)
                etb.members.append(mb)
                am[(en.public_name, m.public_name)] = mb
        for svc in definition.services.values():
            stb = sv[svc.public_name]
            for op in svc.operations:
                ob = _OpB(
                    op.internal_name,
                    at[op.input_type].internal_name,
                    at[op.output_type].internal_name,
                )
                ob.lineage[revision] = op.public_name
                ob.add_throws([at[t].internal_name for t in op.throws])
                stb.ops.append(ob)
                ao[(svc.public_name, op.public_name)] = ob
        anchor_fields[revision] = af
        anchor_members[revision] = am
        anchor_ops[revision] = ao

    # ---- seed with the newest supported revision ----
    head = layers[0]
    head_def = definitions[head]
    at: dict[str, _TypeB] = {}
    for decl in head_def.types.values():
        tb = _TypeB(decl, head)
        all_types.append(tb)
        at[decl.public_name] = tb
    for decl in head_def.types.values():
        if isinstance(decl, RecordType) and decl.super_type is not None:
            at[decl.public_name].super_b = at[decl.super_type]
    sv: dict[str, _SvcB] = {}
    for svc in head_def.services.values():
        stb = _SvcB(svc.internal_name, head, svc.public_name)
        all_services.append(stb)
        sv[svc.public_name] = stb
    anchor_types[head] = at
    anchor_services[head] = sv
    ingest(head, head_def, at, sv)

    # ---- walk backward through the older supported revisions ----
    for newer, older in zip(layers, layers[1:]):
        rel = composed_predecessors(history, newer, older)
        inv_types = {old: new for new, old in rel.types.items()}
        inv_fields = {old: new for new, old in rel.fields.items()}
        inv_members = {old: new for new, old in rel.members.items()}
        inv_services = {old: new for new, old in rel.services.items()}
        inv_ops = {old: new for new, old in rel.operations.items()}
        old_def = definitions[older]

        prev_at, prev_sv = anchor_types[newer], anchor_services[newer]
        at = {}
        created: list[str] = []
        for decl in old_def.types.values():
            succ = inv_types.get(decl.public_name)
            if succ is not None:
                tb = prev_at[succ]
                tb.merge(decl, older)
            else:
                tb = _TypeB(decl, older)
                all_types.append(tb)
                created.append(decl.public_name)
            at[decl.public_name] = tb
        for name in created:
            decl = old_def.types[name]
            if isinstance(decl, RecordType) and decl.super_type is not None:
                at[name].super_b = at[decl.super_type]
        sv = {}
        for svc in old_def.services.values():
            succ = inv_services.get(svc.public_name)
            if succ is not None:
                stb = prev_sv[succ]
                stb.lineage[older] = svc.public_name
            else:
                stb = _SvcB(svc.internal_name, older, svc.public_name)
                all_services.append(stb)
            sv[svc.public_name] = stb
        anchor_types[older] = at
        anchor_services[older] = sv

        # per-element anchors: merged elements reuse the newer builder
        af: dict[tuple[str, str], _FieldB] = {}
        am: dict[tuple[str, str], _MemberB] = {}
        ao: dict[tuple[str, str], _OpB] = {}
        newer_af = anchor_fields[newer]
        for record in by_depth(old_def):
            for ff in flattened_fields(old_def, record):
                key = (record.public_name, ff.public_name)
                succ = inv_fields.get(key)
                if succ is not None:
                    fb = newer_af[succ]
                elif ff.declared_in != record.public_name:
                    fb = af[(ff.declared_in, ff.public_name)]
                else:
                    fb = _FieldB(ff.internal_name, rewrite(ff.field.type_ref, at), at[record.public_name])
                    at[record.public_name].own_fields.append(fb)
                fb.observe(ff.optionality, older)
                af[key] = fb
        newer_am = anchor_members[newer]
        for en in old_def.enums():
            etb = at[en.public_name]
            for m in en.members:
                key = (en.public_name, m.public_name)
                succ = inv_members.get(key)
                if succ is not None:
                    mb = newer_am[succ]
                    mb.lineage[older] = m.public_name
                else:
                    mb = _MemberB(m.public_name, older, m.public_name)
                    etb.members.append(mb)
                am[key] = mb
        newer_ao = anchor_ops[newer]
        for svc in old_def.services.values():
            stb = sv[svc.public_name]
            for op in svc.operations:
                key = (svc.public_name, op.public_name)
                succ = inv_ops.get(key)
                if succ is not None:
                    ob = newer_ao[succ]
                else:
                    ob = _OpB(
                        op.internal_name,
                        at[op.input_type].internal_name,
                        at[op.output_type].internal_name,
                    )
                    stb.ops.append(ob)
                ob.lineage[older] = op.public_name
                ob.add_throws([at[t].internal_name for t in op.throws])
                ao[key] = ob
        anchor_fields[older] = af
        anchor_members[older] = am
        anchor_ops[older] = ao

    # ---- uniqueness of internal names over the whole set ----
    problems: list[str] = []
    seen_names: dict[str, str] = {}
    for tb in all_types:
        kind = "enum" if tb.is_enum else ("exception" if tb.is_exception else "record")
        if tb.internal_name in seen_names:
            problems.append(
                f"internal name {tb.internal_name!r} is used by more than one type or service"
            )
        seen_names[tb.internal_name] = kind
    for stb in all_services:
        if stb.internal_name in seen_names:
            problems.append(
                f"internal name {stb.internal_name!r} is used by more than one type or service"
            )
        seen_names[stb.internal_name] = "service"

    def flattened_builders(tb: _TypeB) -> list[_FieldB]:
        chain: list[_TypeB] = []
        walk = tb
        while walk is not None:
            chain.append(walk)
            walk = walk.super_b
        out: list[_FieldB] = []
        for ancestor in reversed(chain):
            out.extend(ancestor.own_fields)
        return out

    for tb in all_types:
        if tb.is_enum:
            names = [mb.internal_name for mb in tb.members]
            for name in sorted({n for n in names if names.count(n) > 1}):
                problems.append(f"{tb.internal_name}: internal member name {name!r} is not unique")
            continue
        flat_names = [fb.internal_name for fb in flattened_builders(tb)]
        for name in sorted({n for n in flat_names if flat_names.count(n) > 1}):
            problems.append(f"{tb.internal_name}: internal field name {name!r} is not unique")
    for stb in all_services:
        names = [ob.internal_name for ob in stb.ops]
        for name in sorted({n for n in names if names.count(n) > 1}):
            problems.append(f"{stb.internal_name}: internal operation name {name!r} is not unique")
    if problems:
        raise InternalDerivationError(problems)

    # ---- assemble the internal schema ----
    builder_by_name = {tb.internal_name: tb for tb in all_types}
    children: dict[int, list[_TypeB]] = {}
    for tb in all_types:
        if tb.super_b is not None:
            children.setdefault(id(tb.super_b), []).append(tb)

    def alternatives_of(tb: _TypeB) -> list[str]:
        out: list[str] = []
        for child in children.get(id(tb), []):
            out.extend(alternatives_of(child))
        if tb.concrete_somewhere:
            out.append(tb.internal_name)
        return out

    alternatives = {
        tb.internal_name: tuple(alternatives_of(tb)) for tb in all_types if not tb.is_enum
    }

    def wire_of(ref: TypeRef) -> WireType:
        if isinstance(ref, Int32Ref):
            return WireInt32()
        if isinstance(ref, NumericRef):
            return WireNumeric(ref.max_digits)
        if isinstance(ref, StringRef):
            return WireString(ref.max_length)
        if isinstance(ref, ListRef):
            return WireList(wire_of(ref.element), ref.bound)
        assert isinstance(ref, NamedRef)
        target = builder_by_name[ref.name]
        if target.is_enum:
            return WireEnum(ref.name)
        alts = alternatives[ref.name]
        if not alts:
            raise InternalDerivationError(
                [f"{ref.name} has no concrete alternatives in the merged representation"]
            )
        return WireRecord(alts[0]) if len(alts) == 1 else WireUnion(alts)

    records: dict[str, SchemaRecord] = {}
    enums: dict[str, SchemaEnum] = {}
    for tb in all_types:
        if tb.is_enum:
            enums[tb.internal_name] = SchemaEnum(
                name=tb.internal_name,
                alias=tb.internal_name,
                members=tuple(mb.internal_name for mb in tb.members),
            )
            continue
        fields = tuple(
            SchemaField(
                name=fb.internal_name,
                alias=fb.internal_name,
                type=wire_of(fb.type_ref),
                optionality=fb.final_optionality(),
                declared_in=fb.declared_b.internal_name,
            )
            for fb in flattened_builders(tb)
        )
        records[tb.internal_name] = SchemaRecord(
            name=tb.internal_name,
            alias=tb.internal_name,
            fields=fields,
            is_abstract=not tb.concrete_somewhere,
            is_exception=tb.is_exception,
            super_name=tb.super_b.internal_name if tb.super_b else None,
        )
    services: dict[str, SchemaService] = {}
    for stb in all_services:
        services[stb.internal_name] = SchemaService(
            name=stb.internal_name,
            alias=stb.internal_name,
            operations=tuple(
                SchemaOperation(
                    name=ob.internal_name,
                    alias=ob.internal_name,
                    input_record=ob.input_internal,
                    output_record=ob.output_internal,
                    throws=tuple(ob.throws),
                )
                for ob in stb.ops
            ),
        )
    schema = Schema(
        api_name=history.api_name,
        records=records,
        enums=enums,
        services=services,
        alternatives=alternatives,
    )

    # ---- per-revision translation maps ----
    type_to_internal: dict[tuple[int, str], str] = {}
    type_from_internal: dict[tuple[int, str], str] = {}
    field_to_internal: dict[tuple[int, str, str], tuple[str, str]] = {}
    member_to_internal: dict[tuple[int, str, str], tuple[str, str]] = {}
    member_from_internal: dict[tuple[int, str, str], tuple[str, str]] = {}
    service_to_internal: dict[tuple[int, str], str] = {}
    operation_to_internal: dict[tuple[int, str, str], tuple[str, str]] = {}
    for s in supported_ids:
        for pub, tb in anchor_types[s].items():
            type_to_internal[(s, pub)] = tb.internal_name
            type_from_internal[(s, tb.internal_name)] = pub
        for (owner, field_name), fb in anchor_fields[s].items():
            owner_internal = anchor_types[s][owner].internal_name
            field_to_internal[(s, owner, field_name)] = (owner_internal, fb.internal_name)
        for (enum_name, member), mb in anchor_members[s].items():
            enum_internal = anchor_types[s][enum_name].internal_name
            member_to_internal[(s, enum_name, member)] = (enum_internal, mb.internal_name)
            member_from_internal[(s, enum_internal, mb.internal_name)] = (enum_name, member)
        for pub, stb in anchor_services[s].items():
            service_to_internal[(s, pub)] = stb.internal_name
        for (svc_name, op_name), ob in anchor_ops[s].items():
            svc_internal = anchor_services[s][svc_name].internal_name
            operation_to_internal[(s, svc_name, op_name)] = (svc_internal, ob.internal_name)

    return InternalRepresentation(
        api_name=history.api_name,
        supported=tuple(supported_ids),
        schema=schema,
        type_to_internal=type_to_internal,
        type_from_internal=type_from_internal,
        field_to_internal=field_to_internal,
        member_to_internal=member_to_internal,
        member_from_internal=member_from_internal,
        service_to_internal=service_to_internal,
        operation_to_internal=operation_to_internal,
    )
