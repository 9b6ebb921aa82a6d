"""Revision histories and predecessor relations.

Between two consecutive revisions, five relations connect the newer
elements to their predecessors: types, flattened field instances, enum
members, services, and service operations. Each relation is an injective
partial function from older to newer elements, computed from three cues:

* an explicit ``replaces`` clause,
* ``replaces nothing`` (suppresses matching entirely),
* otherwise an implicit match on equal public name.

A same-named or explicitly named predecessor is *consumed* even when the
types are incompatible - that models a type change (delete plus add
under one name) and is why declaring ``int32 c replaces b`` next to a
same-named ``b`` is rejected: both consume the old ``b``.

Field relations run on flattened instances (one copy of every inherited
field per type, abstract types included), which is what makes pushing a
field down into several subtypes legal: each subtype consumes its own
instance.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

from .adl import (
    ApiDefinition,
    DefinitionError,
    EnumType,
    Field,
    FlatField,
    ListRef,
    NamedRef,
    RecordType,
    Replaces,
    Service,
    Severity,
    TypeRef,
    concrete_descendants,
    flattened_fields,
    validate_definition,
)
from .errors import ApiRevError

FieldKey = tuple[str, str]  # (type public name, field public name) of a flattened instance
OpKey = tuple[str, str]  # (service public name, operation public name)
MemberKey = tuple[str, str]  # (enum public name, member public name)


class IssueCode(enum.Enum):
    MULTIPLE_SUCCESSORS = "MultipleSuccessors"
    UNKNOWN_PREDECESSOR = "UnknownPredecessor"
    INCOMPATIBLE_PULL_UP = "IncompatiblePullUpTypes"
    CHANGED_SUPERTYPE = "ChangedSupertype"
    AMBIGUOUS_PREDECESSOR = "AmbiguousPredecessor"
    INCOMPATIBLE_KIND = "IncompatibleKind"
    MIXED_TARGETS = "MixedReplacesTargets"
    API_NAME_MISMATCH = "ApiNameMismatch"


@dataclass(frozen=True)
class EvolutionIssue:
    code: IssueCode
    path: str
    message: str

    def render(self) -> str:
        return f"{self.path}: {self.message} [{self.code.value}]"


class EvolutionError(ApiRevError):
    """A revision step (or composed query) was rejected; carries all issues."""

    def __init__(self, issues: list[EvolutionIssue]):
        super().__init__("; ".join(i.render() for i in issues))
        self.issues = issues

    def codes(self) -> set[IssueCode]:
        return {i.code for i in self.issues}


class UnknownRevisionError(ApiRevError):
    pass


@dataclass(frozen=True)
class PredecessorMap:
    """Newer-element -> older-element maps for one revision step (or span)."""

    types: dict[str, str]
    fields: dict[FieldKey, FieldKey]
    members: dict[MemberKey, MemberKey]
    services: dict[str, str]
    operations: dict[OpKey, OpKey]

    @staticmethod
    def empty() -> "PredecessorMap":
        return PredecessorMap({}, {}, {}, {}, {})


def types_related(new_ref: TypeRef, old_ref: TypeRef, type_pred: dict[str, str]) -> bool:
    """Structural compatibility across one revision step.

    Bounds must match exactly (a bound change is a type change); named
    references are related when the type relation connects them.
    """
    if isinstance(new_ref, NamedRef) and isinstance(old_ref, NamedRef):
        return type_pred.get(new_ref.name) == old_ref.name
    if isinstance(new_ref, ListRef) and isinstance(old_ref, ListRef):
        return new_ref.bound == old_ref.bound and types_related(new_ref.element, old_ref.element, type_pred)
    if type(new_ref) is type(old_ref):
        return new_ref == old_ref  # primitives: equal bounds required
    return False


class _Claims:
    """Old-element claim registry for one relation; enforces injectivity."""

    def __init__(self, kind: str):
        self.kind = kind
        self.entries: dict[object, list[tuple[object, bool]]] = {}

    def claim(self, old_key: object, new_key: object, compatible: bool) -> None:
        self.entries.setdefault(old_key, []).append((new_key, compatible))

    def resolve(self, issues: list[EvolutionIssue], path_of: "callable") -> dict:
        related: dict = {}
        for old_key, claims in self.entries.items():
            if len(claims) > 1:
                name = path_of(old_key)
                issues.append(
                    EvolutionIssue(
                        IssueCode.MULTIPLE_SUCCESSORS,
                        name,
                        f"multiple replacements for {self.kind} {name!r}",
                    )
                )
                continue
            new_key, compatible = claims[0]
            if compatible:
                related[new_key] = old_key
        return related


def _clause_targets(clause: Replaces | None) -> tuple[bool, Replaces | None]:
    """(suppressed, clause-with-targets-or-None)."""
    if clause is None:
        return False, None
    if clause.is_nothing:
        return True, None
    return False, clause


def relate(previous: ApiDefinition, current: ApiDefinition) -> PredecessorMap:
    """Compute the five predecessor relations for one revision step.

    Raises EvolutionError carrying every issue found; on success every
    map value is unique (injectivity holds by construction).
    """
    issues: list[EvolutionIssue] = []

    prev_flat: dict[str, list[FlatField]] = {
        r.public_name: flattened_fields(previous, r) for r in previous.records()
    }
    cur_flat: dict[str, list[FlatField]] = {
        r.public_name: flattened_fields(current, r) for r in current.records()
    }

    # ---- types (records, exceptions, enums share the type namespace) ----
    type_claims = _Claims("type")
    for decl in current.types.values():
        suppressed, clause = _clause_targets(decl.replaces)
        if suppressed:
            continue
        if clause is None:
            old = previous.types.get(decl.public_name)
            if old is None:
                continue
            type_claims.claim(old.public_name, decl.public_name, _same_type_kind(decl, old))
        else:
            target = clause.targets[0]
            if target.qualifier is not None:
                issues.append(
                    EvolutionIssue(
                        IssueCode.MIXED_TARGETS,
                        decl.public_name,
                        "type predecessors are named without a qualifier",
                    )
                )
                continue
            old = previous.types.get(target.name)
            if old is None:
                issues.append(
                    EvolutionIssue(
                        IssueCode.UNKNOWN_PREDECESSOR,
                        decl.public_name,
                        f"{target.name!r} does not exist in the previous revision",
                    )
                )
            elif not _same_type_kind(decl, old):
                issues.append(
                    EvolutionIssue(
                        IssueCode.INCOMPATIBLE_KIND,
                        decl.public_name,
                        f"{target.name!r} is a different kind of element",
                    )
                )
            else:
                type_claims.claim(old.public_name, decl.public_name, True)
    type_pred: dict[str, str] = type_claims.resolve(issues, lambda k: str(k))

    # ---- supertype stability: changing an existing supertype is rejected ----
    for new_name, old_name in type_pred.items():
        new_decl = current.types[new_name]
        old_decl = previous.types[old_name]
        if not (isinstance(new_decl, RecordType) and isinstance(old_decl, RecordType)):
            continue
        if old_decl.super_type is None:
            continue  # gaining a supertype is allowed
        if new_decl.super_type is None or type_pred.get(new_decl.super_type) != old_decl.super_type:
            issues.append(
                EvolutionIssue(
                    IssueCode.CHANGED_SUPERTYPE,
                    new_name,
                    f"supertype of {old_name!r} cannot change (was {old_decl.super_type!r})",
                )
            )

    # ---- services ----
    service_claims = _Claims("service")
    for svc in current.services.values():
        suppressed, clause = _clause_targets(svc.replaces)
        if suppressed:
            continue
        if clause is None:
            if svc.public_name in previous.services:
                service_claims.claim(svc.public_name, svc.public_name, True)
        else:
            target = clause.targets[0]
            if target.qualifier is not None:
                issues.append(
                    EvolutionIssue(
                        IssueCode.MIXED_TARGETS,
                        svc.public_name,
                        "service predecessors are named without a qualifier",
                    )
                )
            elif target.name in previous.services:
                service_claims.claim(target.name, svc.public_name, True)
            elif target.name in previous.types:
                issues.append(
                    EvolutionIssue(
                        IssueCode.INCOMPATIBLE_KIND,
                        svc.public_name,
                        f"{target.name!r} is a type, not a service",
                    )
                )
            else:
                issues.append(
                    EvolutionIssue(
                        IssueCode.UNKNOWN_PREDECESSOR,
                        svc.public_name,
                        f"{target.name!r} does not exist in the previous revision",
                    )
                )
    service_pred: dict[str, str] = service_claims.resolve(issues, lambda k: str(k))

    # ---- fields, on flattened instances ----
    field_claims = _Claims("field")
    validated_clauses: set[tuple[str, str]] = set()

    def flat_lookup(type_name: str, field_name: str) -> FlatField | None:
        for ff in prev_flat.get(type_name, ()):
            if ff.public_name == field_name:
                return ff
        return None

    def validate_clause(declaring: RecordType, f: Field, clause: Replaces) -> bool:
        """Declaration-level checks, reported once per declaration."""
        key = (declaring.public_name, f.public_name)
        if key in validated_clauses:
            return True
        validated_clauses.add(key)
        path = f"{declaring.public_name}.{f.public_name}"
        qualified = [t for t in clause.targets if t.qualifier is not None]
        unqualified = [t for t in clause.targets if t.qualifier is None]
        ok = True
        if qualified and unqualified:
            issues.append(
                EvolutionIssue(IssueCode.MIXED_TARGETS, path, "qualified and unqualified predecessors cannot be mixed")
            )
            return False
        if len(unqualified) > 1:
            issues.append(
                EvolutionIssue(IssueCode.MIXED_TARGETS, path, "multiple predecessors must be qualified")
            )
            return False
        if unqualified:
            target = unqualified[0]
            old_owner = type_pred.get(declaring.public_name)
            if old_owner is None or flat_lookup(old_owner, target.name) is None:
                where = old_owner or "the previous revision"
                issues.append(
                    EvolutionIssue(
                        IssueCode.UNKNOWN_PREDECESSOR,
                        path,
                        f"{target.name!r} does not exist in {where}",
                    )
                )
                ok = False
            return ok
        seen_qualifiers: set[str] = set()
        source_types: list[TypeRef] = []
        for target in qualified:
            if target.qualifier in seen_qualifiers:
                issues.append(
                    EvolutionIssue(
                        IssueCode.AMBIGUOUS_PREDECESSOR,
                        path,
                        f"{target.qualifier!r} named twice in one replaces clause",
                    )
                )
                ok = False
            seen_qualifiers.add(target.qualifier)
            owner = previous.types.get(target.qualifier)
            declared = None
            if isinstance(owner, RecordType):
                declared = next((g for g in owner.fields if g.public_name == target.name), None)
            if declared is None:
                issues.append(
                    EvolutionIssue(
                        IssueCode.UNKNOWN_PREDECESSOR,
                        path,
                        f"{target.render()} is not declared in the previous revision",
                    )
                )
                ok = False
            else:
                source_types.append(declared.type_ref)
        if len(source_types) > 1:
            first = source_types[0]
            if any(t != first for t in source_types[1:]):
                issues.append(
                    EvolutionIssue(
                        IssueCode.INCOMPATIBLE_PULL_UP,
                        path,
                        "pulled-up predecessors must share one type",
                    )
                )
                ok = False
        return ok

    for record in current.records():
        old_owner_name = type_pred.get(record.public_name)
        for ff in cur_flat[record.public_name]:
            declaring = current.types[ff.declared_in]
            assert isinstance(declaring, RecordType)
            f = ff.field
            suppressed, clause = _clause_targets(f.replaces)
            instance_key: FieldKey = (record.public_name, ff.public_name)
            if suppressed:
                continue
            if clause is None:
                if old_owner_name is None:
                    continue
                old_ff = flat_lookup(old_owner_name, ff.public_name)
                if old_ff is None:
                    continue
                compatible = types_related(f.type_ref, old_ff.field.type_ref, type_pred)
                field_claims.claim((old_owner_name, old_ff.public_name), instance_key, compatible)
                continue
            if not validate_clause(declaring, f, clause):
                continue
            if old_owner_name is None:
                continue
            if clause.targets[0].qualifier is None:
                target = clause.targets[0]
                old_ff = flat_lookup(old_owner_name, target.name)
                if old_ff is None:
                    continue  # this instance's owner never had the field
                compatible = types_related(f.type_ref, old_ff.field.type_ref, type_pred)
                field_claims.claim((old_owner_name, old_ff.public_name), instance_key, compatible)
            else:
                applicable: list[FlatField] = []
                for target in clause.targets:
                    old_ff = flat_lookup(old_owner_name, target.name)
                    if old_ff is not None and old_ff.declared_in == target.qualifier:
                        applicable.append(old_ff)
                if not applicable:
                    continue
                if len(applicable) > 1:
                    issues.append(
                        EvolutionIssue(
                            IssueCode.AMBIGUOUS_PREDECESSOR,
                            f"{record.public_name}.{ff.public_name}",
                            "more than one named predecessor applies to this instance",
                        )
                    )
                    continue
                old_ff = applicable[0]
                compatible = types_related(f.type_ref, old_ff.field.type_ref, type_pred)
                field_claims.claim((old_owner_name, old_ff.public_name), instance_key, compatible)

    field_pred: dict[FieldKey, FieldKey] = field_claims.resolve(issues, lambda k: f"{k[0]}.{k[1]}")

    # ---- enum members, within related enum pairs ----
    member_claims = _Claims("member")
    for new_name, old_name in type_pred.items():
        new_decl = current.types[new_name]
        old_decl = previous.types[old_name]
        if not (isinstance(new_decl, EnumType) and isinstance(old_decl, EnumType)):
            continue
        old_members = {m.public_name for m in old_decl.members}
        for m in new_decl.members:
            suppressed, clause = _clause_targets(m.replaces)
            if suppressed:
                continue
            if clause is None:
                if m.public_name in old_members:
                    member_claims.claim((old_name, m.public_name), (new_name, m.public_name), True)
                continue
            target = clause.targets[0]
            path = f"{new_name}.{m.public_name}"
            if target.qualifier is not None:
                issues.append(
                    EvolutionIssue(IssueCode.MIXED_TARGETS, path, "member predecessors are named without a qualifier")
                )
            elif target.name not in old_members:
                issues.append(
                    EvolutionIssue(
                        IssueCode.UNKNOWN_PREDECESSOR,
                        path,
                        f"{target.name!r} does not exist in {old_name!r}",
                    )
                )
            else:
                member_claims.claim((old_name, target.name), (new_name, m.public_name), True)
    member_pred: dict[MemberKey, MemberKey] = member_claims.resolve(issues, lambda k: f"{k[0]}.{k[1]}")

    # ---- operations, within related service pairs ----
    op_claims = _Claims("operation")
    for new_svc_name, old_svc_name in service_pred.items():
        new_svc = current.services[new_svc_name]
        old_svc = previous.services[old_svc_name]
        old_ops = {op.public_name: op for op in old_svc.operations}

        def io_related(new_op, old_op) -> bool:
            return types_related(
                NamedRef(new_op.input_type), NamedRef(old_op.input_type), type_pred
            ) and types_related(NamedRef(new_op.output_type), NamedRef(old_op.output_type), type_pred)

        for op in new_svc.operations:
            suppressed, clause = _clause_targets(op.replaces)
            if suppressed:
                continue
            if clause is None:
                old_op = old_ops.get(op.public_name)
                if old_op is None:
                    continue
                op_claims.claim(
                    (old_svc_name, old_op.public_name),
                    (new_svc_name, op.public_name),
                    io_related(op, old_op),
                )
                continue
            target = clause.targets[0]
            path = f"{new_svc_name}.{op.public_name}"
            if target.qualifier is not None:
                issues.append(
                    EvolutionIssue(IssueCode.MIXED_TARGETS, path, "operation predecessors are named without a qualifier")
                )
            elif target.name not in old_ops:
                issues.append(
                    EvolutionIssue(
                        IssueCode.UNKNOWN_PREDECESSOR,
                        path,
                        f"{target.name!r} does not exist in {old_svc_name!r}",
                    )
                )
            else:
                old_op = old_ops[target.name]
                op_claims.claim(
                    (old_svc_name, old_op.public_name),
                    (new_svc_name, op.public_name),
                    io_related(op, old_op),
                )
    op_pred: dict[OpKey, OpKey] = op_claims.resolve(issues, lambda k: f"{k[0]}.{k[1]}")

    if issues:
        raise EvolutionError(issues)
    return PredecessorMap(type_pred, field_pred, member_pred, service_pred, op_pred)


def _same_type_kind(a, b) -> bool:
    if isinstance(a, RecordType) and isinstance(b, RecordType):
        return a.is_exception == b.is_exception
    return isinstance(a, EnumType) and isinstance(b, EnumType)


# --------------------------------------------------------------------------
# Histories


@dataclass(frozen=True)
class Revision:
    revision_id: int
    definition: ApiDefinition


@dataclass(frozen=True)
class RevisionHistory:
    """An append-only sequence of revisions with cached step relations.

    Values are persistent: append returns a new history, existing values
    never change, so readers can keep using a loaded history while a
    writer extends the store.
    """

    api_name: str
    revisions: tuple[Revision, ...] = ()
    relations: tuple[PredecessorMap, ...] = ()  # relations[i] connects revision i+1 -> i+2

    @property
    def head(self) -> Revision:
        if not self.revisions:
            raise UnknownRevisionError(f"{self.api_name!r} has no revisions")
        return self.revisions[-1]

    @property
    def revision_ids(self) -> list[int]:
        return [r.revision_id for r in self.revisions]

    def revision(self, revision_id: int) -> Revision:
        if not 1 <= revision_id <= len(self.revisions):
            raise UnknownRevisionError(f"{self.api_name!r} has no revision {revision_id}")
        return self.revisions[revision_id - 1]

    def relation_into(self, revision_id: int) -> PredecessorMap:
        """The step relation from revision_id-1 to revision_id."""
        self.revision(revision_id)
        if revision_id == 1:
            raise UnknownRevisionError("revision 1 has no predecessor revision")
        return self.relations[revision_id - 2]


def empty_history(api_name: str) -> RevisionHistory:
    return RevisionHistory(api_name)


def append_revision(history: RevisionHistory, definition: ApiDefinition) -> RevisionHistory:
    """Validate, relate against the head, and return the extended history.

    The first revision is related against an empty definition, so stray
    replaces clauses surface as UnknownPredecessor even there.
    """
    diagnostics = [d for d in validate_definition(definition) if d.severity is Severity.ERROR]
    if diagnostics:
        raise DefinitionError(diagnostics)
    if definition.name != history.api_name:
        raise EvolutionError(
            [
                EvolutionIssue(
                    IssueCode.API_NAME_MISMATCH,
                    definition.name,
                    f"definition is for {definition.name!r}, history tracks {history.api_name!r}",
                )
            ]
        )
    previous = history.revisions[-1].definition if history.revisions else ApiDefinition(history.api_name, ())
    relation = relate(previous, definition)
    revision = Revision(len(history.revisions) + 1, definition)
    relations = history.relations + (relation,) if history.revisions else history.relations
    return RevisionHistory(history.api_name, history.revisions + (revision,), relations)


def history_from_texts(api_name: str, texts: "list[str] | tuple[str, ...]") -> RevisionHistory:
    """Convenience: parse and append each text in order."""
    from .adl import parse_text

    history = empty_history(api_name)
    for text in texts:
        history = append_revision(history, parse_text(text))
    return history


def composed_predecessors(history: RevisionHistory, newer_id: int, older_id: int) -> PredecessorMap:
    """Predecessors across a span: maps newer-revision elements to their
    older-revision ancestors, composing every step in between. Elements
    whose chain breaks anywhere in the span are simply absent."""
    if newer_id < older_id:
        raise UnknownRevisionError("span must run from an older to a newer revision")
    history.revision(older_id)
    newer = history.revision(newer_id)

    types = {t: t for t in newer.definition.types}
    services = {s: s for s in newer.definition.services}
    fields: dict[FieldKey, FieldKey] = {}
    members: dict[MemberKey, MemberKey] = {}
    operations: dict[OpKey, OpKey] = {}
    for record in newer.definition.records():
        for ff in flattened_fields(newer.definition, record):
            fields[(record.public_name, ff.public_name)] = (record.public_name, ff.public_name)
    for en in newer.definition.enums():
        for m in en.members:
            members[(en.public_name, m.public_name)] = (en.public_name, m.public_name)
    for svc in newer.definition.services.values():
        for op in svc.operations:
            operations[(svc.public_name, op.public_name)] = (svc.public_name, op.public_name)

    for step in range(newer_id, older_id, -1):
        rel = history.relation_into(step)
        types = {k: rel.types[v] for k, v in types.items() if v in rel.types}
        services = {k: rel.services[v] for k, v in services.items() if v in rel.services}
        fields = {k: rel.fields[v] for k, v in fields.items() if v in rel.fields}
        members = {k: rel.members[v] for k, v in members.items() if v in rel.members}
        operations = {k: rel.operations[v] for k, v in operations.items() if v in rel.operations}
    return PredecessorMap(types, fields, members, services, operations)
