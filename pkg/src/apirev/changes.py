"""Declaration-level change sets between two revisions of one API.

The step relations work on flattened field instances; for reporting we
lift them back to declaration sites, so a field pushed down into three
subtypes reads as one change, not three.
"""

from __future__ import annotations

from dataclasses import dataclass

from .adl import ApiDefinition, RecordType, concrete_descendants, flattened_fields
from .revisions import FieldKey, PredecessorMap, RevisionHistory, composed_predecessors


@dataclass(frozen=True, order=True)
class FieldSite:
    """A field declaration site: the declaring type and the field name."""

    type_name: str
    field_name: str

    def render(self) -> str:
        return f"{self.type_name}.{self.field_name}"


@dataclass(frozen=True)
class ChangeSet:
    from_revision: int
    to_revision: int
    types_added: tuple[str, ...]
    types_deleted: tuple[str, ...]
    types_renamed: tuple[tuple[str, str], ...]  # (old, new)
    fields_added: tuple[FieldSite, ...]
    fields_deleted: tuple[FieldSite, ...]
    fields_renamed: tuple[tuple[FieldSite, FieldSite], ...]
    fields_type_changed: tuple[tuple[FieldSite, str, str], ...]  # site, old type, new type
    fields_pulled_up: tuple[tuple[tuple[FieldSite, ...], FieldSite], ...]
    fields_pushed_down: tuple[tuple[FieldSite, tuple[FieldSite, ...]], ...]
    members_added: tuple[tuple[str, str], ...]
    members_deleted: tuple[tuple[str, str], ...]
    members_renamed: tuple[tuple[tuple[str, str], tuple[str, str]], ...]
    services_added: tuple[str, ...]
    services_deleted: tuple[str, ...]
    services_renamed: tuple[tuple[str, str], ...]
    operations_added: tuple[tuple[str, str], ...]
    operations_deleted: tuple[tuple[str, str], ...]
    operations_renamed: tuple[tuple[tuple[str, str], tuple[str, str]], ...]
    union_notes: tuple[str, ...]

    @property
    def is_empty(self) -> bool:
        return not any(
            getattr(self, name)
            for name in self.__dataclass_fields__
            if name not in ("from_revision", "to_revision")
        )


def _declaration_sites(definition: ApiDefinition) -> dict[FieldKey, FieldSite]:
    """Map every flattened instance to its declaration site."""
    sites: dict[FieldKey, FieldSite] = {}
    for record in definition.records():
        for ff in flattened_fields(definition, record):
            sites[(record.public_name, ff.public_name)] = FieldSite(ff.declared_in, ff.public_name)
    return sites


def _instances_of(definition: ApiDefinition, site: FieldSite) -> list[FieldKey]:
    keys: list[FieldKey] = []
    for record in definition.records():
        for ff in flattened_fields(definition, record):
            if ff.declared_in == site.type_name and ff.public_name == site.field_name:
                keys.append((record.public_name, ff.public_name))
    return keys


def diff(history: RevisionHistory, from_id: int, to_id: int) -> ChangeSet:
    """Classify what happened between two revisions of the same history."""
    if from_id > to_id:
        raise ValueError("from_revision must not be newer than to_revision")
    old = history.revision(from_id).definition
    new = history.revision(to_id).definition
    rel = composed_predecessors(history, to_id, from_id)

    types_added = sorted(t for t in new.types if t not in rel.types)
    types_deleted = sorted(t for t in old.types if t not in rel.types.values())
    types_renamed = sorted((o, n) for n, o in rel.types.items() if n != o)

    services_added = sorted(s for s in new.services if s not in rel.services)
    services_deleted = sorted(s for s in old.services if s not in rel.services.values())
    services_renamed = sorted((o, n) for n, o in rel.services.items() if n != o)

    new_sites = _declaration_sites(new)
    old_sites = _declaration_sites(old)

    # Lift instance relations to declaration sites.
    site_preds: dict[FieldSite, set[FieldSite]] = {}
    old_site_succs: dict[FieldSite, set[FieldSite]] = {}
    for new_key, site in new_sites.items():
        site_preds.setdefault(site, set())
        old_key = rel.fields.get(new_key)
        if old_key is not None:
            old_site = old_sites[old_key]
            site_preds[site].add(old_site)
            old_site_succs.setdefault(old_site, set()).add(site)
    for old_key, old_site in old_sites.items():
        old_site_succs.setdefault(old_site, set())

    fields_added: list[FieldSite] = []
    fields_renamed: list[tuple[FieldSite, FieldSite]] = []
    fields_pulled_up: list[tuple[tuple[FieldSite, ...], FieldSite]] = []
    moved_down: dict[FieldSite, list[FieldSite]] = {}
    for site in sorted(site_preds):
        preds = sorted(site_preds[site])
        if not preds:
            fields_added.append(site)
        elif len(preds) > 1:
            fields_pulled_up.append((tuple(preds), site))
        else:
            pred = preds[0]
            same_owner = rel.types.get(site.type_name) == pred.type_name
            if same_owner:
                if pred.field_name != site.field_name:
                    fields_renamed.append((pred, site))
            elif len(old_site_succs.get(pred, ())) > 1 or _is_old_ancestor(old, pred.type_name, rel.types.get(site.type_name)):
                moved_down.setdefault(pred, []).append(site)
            else:
                fields_pulled_up.append(((pred,), site))

    fields_pushed_down = [(src, tuple(sorted(dsts))) for src, dsts in sorted(moved_down.items())]
    fields_deleted = sorted(site for site, succs in old_site_succs.items() if not succs)

    # A same-named add/delete pair under related owners is a type change.
    fields_type_changed: list[tuple[FieldSite, str, str]] = []
    for site in list(fields_added):
        old_owner = rel.types.get(site.type_name)
        if old_owner is None:
            continue
        counterpart = next(
            (d for d in fields_deleted if d.field_name == site.field_name and _is_old_self_or_ancestor(old, d.type_name, old_owner)),
            None,
        )
        if counterpart is not None:
            fields_added.remove(site)
            fields_deleted.remove(counterpart)
            old_ref = _declared_type(old, counterpart)
            new_ref = _declared_type(new, site)
            fields_type_changed.append((site, old_ref, new_ref))

    members_added: list[tuple[str, str]] = []
    members_renamed: list[tuple[tuple[str, str], tuple[str, str]]] = []
    new_member_keys = {
        (e.public_name, m.public_name) for e in new.enums() for m in e.members
    }
    old_member_keys = {
        (e.public_name, m.public_name) for e in old.enums() for m in e.members
    }
    for key in sorted(new_member_keys):
        pred = rel.members.get(key)
        if pred is None:
            members_added.append(key)
        elif pred[1] != key[1]:
            members_renamed.append((pred, key))
    members_deleted = sorted(old_member_keys - set(rel.members.values()))

    operations_added: list[tuple[str, str]] = []
    operations_renamed: list[tuple[tuple[str, str], tuple[str, str]]] = []
    new_op_keys = {
        (s.public_name, op.public_name) for s in new.services.values() for op in s.operations
    }
    old_op_keys = {
        (s.public_name, op.public_name) for s in old.services.values() for op in s.operations
    }
    for key in sorted(new_op_keys):
        pred = rel.operations.get(key)
        if pred is None:
            operations_added.append(key)
        elif pred[1] != key[1]:
            operations_renamed.append((pred, key))
    operations_deleted = sorted(old_op_keys - set(rel.operations.values()))

    union_notes = union_notes_between(old, new, rel)

    return ChangeSet(
        from_revision=from_id,
        to_revision=to_id,
        types_added=tuple(types_added),
        types_deleted=tuple(types_deleted),
        types_renamed=tuple(types_renamed),
        fields_added=tuple(sorted(fields_added)),
        fields_deleted=tuple(sorted(fields_deleted)),
        fields_renamed=tuple(sorted(fields_renamed)),
        fields_type_changed=tuple(sorted(fields_type_changed)),
        fields_pulled_up=tuple(sorted(fields_pulled_up, key=lambda e: e[1])),
        fields_pushed_down=tuple(fields_pushed_down),
        members_added=tuple(members_added),
        members_deleted=tuple(members_deleted),
        members_renamed=tuple(members_renamed),
        services_added=tuple(services_added),
        services_deleted=tuple(services_deleted),
        services_renamed=tuple(services_renamed),
        operations_added=tuple(operations_added),
        operations_deleted=tuple(operations_deleted),
        operations_renamed=tuple(operations_renamed),
        union_notes=tuple(union_notes),
    )


def _is_old_ancestor(old: ApiDefinition, candidate: str, descendant: str | None) -> bool:
    """True when candidate is a strict ancestor of descendant in old."""
    if descendant is None:
        return False
    decl = old.types.get(descendant)
    while isinstance(decl, RecordType) and decl.super_type is not None:
        if decl.super_type == candidate:
            return True
        decl = old.types.get(decl.super_type)
    return False


def _is_old_self_or_ancestor(old: ApiDefinition, candidate: str, descendant: str) -> bool:
    return candidate == descendant or _is_old_ancestor(old, candidate, descendant)


def _declared_type(definition: ApiDefinition, site: FieldSite) -> str:
    decl = definition.types[site.type_name]
    assert isinstance(decl, RecordType)
    for f in decl.fields:
        if f.public_name == site.field_name:
            return f.type_ref.render()
    raise KeyError(site.render())


def union_notes_between(old: ApiDefinition, new: ApiDefinition, rel: PredecessorMap) -> list[str]:
    """Flag related record types whose concrete-subtype set changed.

    References to such a type change wire shape for readers that expand
    type references into unions of concrete alternatives.
    """
    notes: list[str] = []
    for new_name in sorted(rel.types):
        old_name = rel.types[new_name]
        if not isinstance(new.types[new_name], RecordType) or not isinstance(old.types[old_name], RecordType):
            continue
        old_concrete = set(concrete_descendants(old, old_name))
        new_concrete = concrete_descendants(new, new_name)
        mapped = {rel.types[t] for t in new_concrete if t in rel.types}
        if mapped != old_concrete or len(new_concrete) != len(old_concrete):
            notes.append(
                f"concrete alternatives of {new_name} changed; encoded references to it are not wire compatible"
            )
    return notes
