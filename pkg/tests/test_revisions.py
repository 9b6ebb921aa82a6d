"""Predecessor relations, histories, and change classification."""

from __future__ import annotations

import pytest

from apirev import corpus
from apirev.adl import parse_text
from apirev.changes import FieldSite, diff
from apirev.revisions import (
    EvolutionError,
    IssueCode,
    UnknownRevisionError,
    append_revision,
    composed_predecessors,
    empty_history,
    history_from_texts,
    relate,
)


def relate_texts(prev_text: str, cur_text: str):
    return relate(parse_text(prev_text), parse_text(cur_text))


def customer_history():
    return history_from_texts("customer", corpus.CUSTOMER_HISTORY)


# ---------------------------------------------------------------------------
# single-step verdicts on the field-migration table


def test_conflicting_field_migrations_are_rejected():
    with pytest.raises(EvolutionError) as err:
        relate_texts(corpus.RENAME_PREVIOUS, corpus.RENAME_CURRENT)
    issues = err.value.issues
    by_code = {i.code: i.path for i in issues}
    assert by_code[IssueCode.MULTIPLE_SUCCESSORS] == "A.b"
    assert by_code[IssueCode.UNKNOWN_PREDECESSOR] == "B.y"
    assert len(issues) == 2


def test_field_migration_table_fixed_variant_is_accepted():
    rel = relate_texts(corpus.RENAME_PREVIOUS, corpus.RENAME_CURRENT_FIXED)
    assert rel.types == {"B": "A"}
    assert rel.fields == {("B", "d"): ("A", "a")}
    # numeric(5) b silently consumes int32 b: a type change, not a relation
    assert ("B", "b") not in rel.fields
    assert rel.services == {} and rel.operations == {} and rel.members == {}


def test_hierarchy_migration_table_verdicts():
    with pytest.raises(EvolutionError) as err:
        relate_texts(corpus.HIERARCHY_PREVIOUS, corpus.HIERARCHY_CURRENT)
    by_code = {i.code: i.path for i in err.value.issues}
    assert by_code[IssueCode.INCOMPATIBLE_PULL_UP] == "A.a3"
    assert by_code[IssueCode.MULTIPLE_SUCCESSORS] == "C.c"
    assert len(err.value.issues) == 2


def test_hierarchy_migration_fixed_variant_pulls_up_and_pushes_down():
    rel = relate_texts(corpus.HIERARCHY_PREVIOUS, corpus.HIERARCHY_CURRENT_FIXED)
    assert rel.fields[("B", "a2")] == ("B", "b")
    assert rel.fields[("C", "a2")] == ("C", "c")
    assert ("A", "a2") not in rel.fields  # the abstract instance is new
    assert rel.fields[("B", "b3")] == ("B", "a")
    assert rel.fields[("C", "c3")] == ("C", "a")
    assert ("A", "a") not in rel.fields.values() or rel.fields.get(("A", "a"))


# ---------------------------------------------------------------------------
# structural rules


def test_relating_a_definition_to_itself_is_total():
    definition = parse_text(corpus.CUSTOMER_R6)
    rel = relate(definition, definition)
    assert set(rel.types) == set(definition.types)
    for new_key, old_key in rel.fields.items():
        assert new_key == old_key
    # every flattened instance of every record appears
    assert ("StreetAddress", "postalCode") in rel.fields
    assert ("POBoxAddress", "city") in rel.fields


def test_unrelated_same_named_field_of_changed_type_is_consumed():
    rel = relate_texts(
        "api t { record R { int32 v } }",
        "api t { record R { string v } }",
    )
    assert rel.types == {"R": "R"}
    assert rel.fields == {}


def test_explicit_predecessor_beats_nothing_suppression():
    rel = relate_texts(corpus.COVERAGE_BASE, corpus.COVERAGE_NEXT)
    assert rel.types["Profile"] == "Account"
    assert "Account" not in rel.types  # new Account starts fresh
    assert rel.fields[("Profile", "status")] == ("Account", "status")
    assert rel.members[("State", "SHUT")] == ("Status", "CLOSED")
    assert rel.members[("State", "OPEN")] == ("Status", "OPEN")
    assert rel.services == {"ProfileService": "AccountService"}
    assert rel.operations[("ProfileService", "review")] == ("AccountService", "audit")
    assert rel.operations[("ProfileService", "fetch")] == ("AccountService", "fetch")


def test_kind_change_under_explicit_replaces_is_rejected():
    with pytest.raises(EvolutionError) as err:
        relate_texts(
            "api t { enum E { A } }",
            "api t { record F replaces E { int32 v } }",
        )
    assert err.value.codes() == {IssueCode.INCOMPATIBLE_KIND}


def test_kind_change_under_same_name_is_consumption_not_relation():
    rel = relate_texts(
        "api t { enum E { A } }",
        "api t { record E { int32 v } }",
    )
    assert rel.types == {}


def test_record_to_exception_is_a_kind_change():
    rel = relate_texts(
        "api t { record E { int32 v } }",
        "api t { exception E { int32 v } }",
    )
    assert rel.types == {}


def test_changing_a_supertype_is_rejected():
    previous = """
    api t {
      abstract record P { string a }
      abstract record Q { string b }
      record R extends P { string c }
    }
    """
    current = """
    api t {
      abstract record P { string a }
      abstract record Q { string b }
      record R extends Q { string c }
    }
    """
    with pytest.raises(EvolutionError) as err:
        relate_texts(previous, current)
    assert err.value.codes() == {IssueCode.CHANGED_SUPERTYPE}


def test_gaining_a_supertype_is_allowed():
    rel = relate_texts(
        "api t { record R { string a } }",
        "api t { abstract record Base { string z } record R extends Base { string a } }",
    )
    assert rel.types == {"R": "R"}
    assert rel.fields == {("R", "a"): ("R", "a")}


def test_dropping_a_supertype_is_rejected():
    with pytest.raises(EvolutionError) as err:
        relate_texts(
            "api t { abstract record Base { string z } record R extends Base { string a } }",
            "api t { abstract record Base { string z } record R { string a } }",
        )
    assert err.value.codes() == {IssueCode.CHANGED_SUPERTYPE}


def test_mixed_qualified_and_unqualified_targets_are_rejected():
    with pytest.raises(EvolutionError) as err:
        relate_texts(
            "api t { record R { string a; string b } }".replace(";", "\n"),
            "api t { record R { string c replaces R.a, b } }",
        )
    assert IssueCode.MIXED_TARGETS in err.value.codes()


def test_duplicate_qualifier_is_rejected():
    with pytest.raises(EvolutionError) as err:
        relate_texts(
            "api t { abstract record P { string a } record R extends P { string b } }",
            "api t { abstract record P { string n replaces R.b, R.b } record R extends P { } }",
        )
    assert IssueCode.AMBIGUOUS_PREDECESSOR in err.value.codes()


def test_bound_change_is_a_type_change():
    rel = relate_texts(
        "api t { record R { string(10) v\n numeric(5) w\n int32[3] xs } }",
        "api t { record R { string(20) v\n numeric(6) w\n int32[4] xs } }",
    )
    assert rel.fields == {}


def test_list_depth_and_element_relations_matter():
    rel = relate_texts(
        "api t { record E { int32 x } record R { E* items } }",
        "api t { record F replaces E { int32 x } record R { F* items } }",
    )
    assert rel.fields[("R", "items")] == ("R", "items")


# ---------------------------------------------------------------------------
# six-step customer lineage


def test_customer_history_appends_cleanly():
    history = customer_history()
    assert history.revision_ids == [1, 2, 3, 4, 5, 6]


def test_rename_step_relates_address_field():
    history = customer_history()
    rel = history.relation_into(3)
    assert rel.fields[("Customer", "primaryAddress")] == ("Customer", "address")
    assert ("Customer", "secondaryAddresses") not in rel.fields


def test_enum_introduction_consumes_the_integer_field():
    history = customer_history()
    rel = history.relation_into(4)
    assert ("Customer", "gender") not in rel.fields
    assert "Gender" not in rel.types  # newly introduced type


def test_hierarchy_split_keeps_shared_fields_alive():
    history = customer_history()
    rel = history.relation_into(6)
    assert rel.types["Address"] == "Address"
    assert rel.fields[("Address", "postalCode")] == ("Address", "postalCode")
    assert rel.fields[("Address", "city")] == ("Address", "city")
    assert "StreetAddress" not in rel.types
    assert "POBoxAddress" not in rel.types
    # the street-address specifics start fresh in the new subtypes
    assert ("StreetAddress", "street") not in rel.fields
    dead = {key for key in [("Address", "street"), ("Address", "number")]}
    assert dead.isdisjoint(set(rel.fields.values()))


def test_composed_predecessors_span_the_whole_history():
    history = customer_history()
    span = composed_predecessors(history, 6, 1)
    assert span.types["Customer"] == "Customer"
    assert span.types["Address"] == "Address"
    assert span.fields[("Customer", "primaryAddress")] == ("Customer", "address")
    assert ("Customer", "gender") not in span.fields  # chain broken at the type change
    assert span.operations[("CustomerService", "upsert")] == ("CustomerService", "upsert")


def test_identity_span_is_the_identity():
    history = customer_history()
    span = composed_predecessors(history, 4, 4)
    assert all(k == v for k, v in span.fields.items())
    assert all(k == v for k, v in span.types.items())


# ---------------------------------------------------------------------------
# histories


def test_first_revision_with_stray_replaces_is_rejected():
    history = empty_history("t")
    with pytest.raises(EvolutionError) as err:
        append_revision(history, parse_text("api t { record R replaces Old { int32 v } }"))
    assert err.value.codes() == {IssueCode.UNKNOWN_PREDECESSOR}


def test_api_name_mismatch_is_rejected():
    history = empty_history("customer")
    with pytest.raises(EvolutionError) as err:
        append_revision(history, parse_text("api other.name { record R { int32 v } }"))
    assert err.value.codes() == {IssueCode.API_NAME_MISMATCH}


def test_histories_are_persistent_values():
    base = history_from_texts("customer", corpus.CUSTOMER_HISTORY[:2])
    extended = append_revision(base, parse_text(corpus.CUSTOMER_R3))
    assert base.revision_ids == [1, 2]
    assert extended.revision_ids == [1, 2, 3]


def test_unknown_revision_lookups_raise():
    history = customer_history()
    with pytest.raises(UnknownRevisionError):
        history.revision(7)
    with pytest.raises(UnknownRevisionError):
        history.relation_into(1)
    with pytest.raises(UnknownRevisionError):
        composed_predecessors(history, 1, 3)


# ---------------------------------------------------------------------------
# change classification


def site(type_name: str, field_name: str) -> FieldSite:
    return FieldSite(type_name, field_name)


def test_full_lineage_change_set():
    history = customer_history()
    changes = diff(history, 1, 6)
    assert changes.types_added == ("Gender", "POBoxAddress", "StreetAddress")
    assert changes.types_deleted == ()
    assert changes.types_renamed == ()
    assert changes.fields_added == (
        site("Customer", "dateOfBirth"),
        site("Customer", "secondaryAddresses"),
        site("POBoxAddress", "boxNumber"),
        site("StreetAddress", "number"),
        site("StreetAddress", "street"),
    )
    assert changes.fields_deleted == (site("Address", "number"), site("Address", "street"))
    assert changes.fields_renamed == ((site("Customer", "address"), site("Customer", "primaryAddress")),)
    assert changes.fields_type_changed == ((site("Customer", "gender"), "int32", "Gender"),)
    assert changes.members_added == (("Gender", "DIVERSE"), ("Gender", "FEMALE"), ("Gender", "MALE"))
    assert changes.union_notes == (
        "concrete alternatives of Address changed; encoded references to it are not wire compatible",
    )


def test_single_step_change_set_is_quiet_on_unchanged_elements():
    history = customer_history()
    changes = diff(history, 1, 2)
    assert changes.fields_added == (site("Customer", "dateOfBirth"),)
    assert changes.fields_deleted == ()
    assert changes.fields_renamed == ()
    assert changes.fields_type_changed == ()
    assert changes.types_added == ()
    assert changes.union_notes == ()


def test_identical_revisions_diff_to_empty():
    history = history_from_texts("customer", [corpus.CUSTOMER_R1, corpus.CUSTOMER_R1])
    changes = diff(history, 1, 2)
    assert changes.is_empty


def test_pull_up_and_push_down_classification():
    history = history_from_texts(
        "hierarchy.example", [corpus.HIERARCHY_PREVIOUS, corpus.HIERARCHY_CURRENT_FIXED]
    )
    changes = diff(history, 1, 2)
    assert changes.fields_pulled_up == (((site("B", "b"), site("C", "c")), site("A", "a2")),)
    assert changes.fields_pushed_down == ((site("A", "a"), (site("B", "b3"), site("C", "c3"))),)
    assert changes.fields_deleted == (site("B", "b2"), site("C", "c2"))


def test_rename_chains_collapse_in_composed_diffs():
    history = history_from_texts(
        "chain.example",
        [
            "api chain.example { record R { string a } }",
            "api chain.example { record R { string b replaces a } }",
            "api chain.example { record R { string c replaces b } }",
        ],
    )
    changes = diff(history, 1, 3)
    assert changes.fields_renamed == ((site("R", "a"), site("R", "c")),)
    head_only = diff(history, 3, 3)
    assert head_only.is_empty


def test_coverage_pair_change_set():
    history = history_from_texts("coverage.example", [corpus.COVERAGE_BASE, corpus.COVERAGE_NEXT])
    changes = diff(history, 1, 2)
    assert changes.types_added == ("Account",)
    assert ("Account", "Profile") in changes.types_renamed
    assert ("Status", "State") in changes.types_renamed
    assert ("InsufficientFunds", "ShortFunds") in changes.types_renamed
    assert changes.services_renamed == (("AccountService", "ProfileService"),)
    assert changes.operations_renamed == ((("AccountService", "audit"), ("ProfileService", "review")),)
    assert changes.members_renamed == (((("Status", "CLOSED")), ("State", "SHUT")),)
    assert changes.union_notes == ()
