"""End-to-end gate: one test per core guarantee, each a single verdict.

Timing limits are fixed budgets (seconds of wall clock, microseconds
per conversion) chosen with headroom for CI noise; the functional
assertions are exact.
"""

from __future__ import annotations

import time

import pytest

import test_properties as properties
from apirev import changes, corpus
from apirev.adl import Optionality, parse_definition
from apirev.bench import run_bench
from apirev.convert import UnrepresentableValue, to_client, to_internal
from apirev.internal import derive_internal
from apirev.registry import ClientsStillReferencing, Registry
from apirev.resolution import ClientDefinition, ResolutionCode, ResolutionError, resolve
from apirev.revisions import EvolutionError, IssueCode, history_from_texts
from apirev.schema import WireEnum, WireInt32, WireUnion
from apirev.values import RecordValue
from apirev.wire import Direction, decode_record, encode_record

MAX_VERDICT_SECONDS = 1.0
MAX_RANDOMIZED_SECONDS = 120.0
MAX_BENCH_SECONDS = 60.0
MAX_MEDIAN_MICROSECONDS = 50.0
MIN_RANDOMIZED_CASES = 1000


def test_rename_history_verdicts_inside_one_second(tmp_path):
    registry = Registry(tmp_path)
    started = time.perf_counter()

    assert registry.publish(corpus.RENAME_PREVIOUS) == 1
    with pytest.raises(EvolutionError) as err:
        registry.publish(corpus.RENAME_CURRENT)
    assert {i.code for i in err.value.issues} == {
        IssueCode.MULTIPLE_SUCCESSORS,
        IssueCode.UNKNOWN_PREDECESSOR,
    }
    assert {i.path for i in err.value.issues} == {"A.b", "B.y"}
    assert registry.publish(corpus.RENAME_CURRENT_FIXED) == 2

    elapsed = time.perf_counter() - started
    verdicts = changes.diff(registry.history("rename.example"), 1, 2)
    assert verdicts.types_renamed == (("A", "B"),)
    assert [(o.render(), n.render()) for o, n in verdicts.fields_renamed] == [("A.a", "B.d")]
    assert [(site.render(), old, new) for site, old, new in verdicts.fields_type_changed] == [
        ("B.b", "int32", "numeric(5)")
    ]
    assert [site.render() for site in verdicts.fields_added] == ["B.z"]
    assert verdicts.types_deleted == ("X",)
    assert elapsed < MAX_VERDICT_SECONDS


def test_hierarchy_move_verdicts_inside_one_second(tmp_path):
    registry = Registry(tmp_path)
    started = time.perf_counter()

    assert registry.publish(corpus.HIERARCHY_PREVIOUS) == 1
    with pytest.raises(EvolutionError) as err:
        registry.publish(corpus.HIERARCHY_CURRENT)
    rejected = {(i.code, i.path) for i in err.value.issues}
    assert rejected == {
        (IssueCode.INCOMPATIBLE_PULL_UP, "A.a3"),
        (IssueCode.MULTIPLE_SUCCESSORS, "C.c"),
    }
    assert registry.publish(corpus.HIERARCHY_CURRENT_FIXED) == 2

    elapsed = time.perf_counter() - started
    verdicts = changes.diff(registry.history("hierarchy.example"), 1, 2)
    assert [
        ([p.render() for p in preds], site.render()) for preds, site in verdicts.fields_pulled_up
    ] == [(["B.b", "C.c"], "A.a2")]
    assert [
        (source.render(), [d.render() for d in dests])
        for source, dests in verdicts.fields_pushed_down
    ] == [("A.a", ["B.b3", "C.c3"])]
    assert elapsed < MAX_VERDICT_SECONDS


def test_six_revision_history_merges_resolves_and_converts():
    history = history_from_texts("customer", corpus.CUSTOMER_HISTORY)
    assert history.revision_ids == [1, 2, 3, 4, 5, 6]

    rep = derive_internal(history, range(1, 7))
    customer = rep.schema.records["Customer"]
    gender = customer.field("gender")
    assert gender is not None
    assert gender.optionality is Optionality.OPTIONAL
    assert isinstance(gender.type, WireInt32)
    gender_new = customer.field("genderNew")
    assert gender_new is not None
    assert gender_new.type == WireEnum("Gender")

    # The address lineage: the merged field keeps the newest name and a
    # reference to it offers every concrete alternative ever written.
    assert rep.field_to_internal[(1, "Customer", "address")] == ("Customer", "primaryAddress")
    primary = customer.field("primaryAddress")
    assert isinstance(primary.type, WireUnion)
    assert {"StreetAddress", "POBoxAddress"} <= set(primary.type.alternatives)

    plan = resolve(
        ClientDefinition(parse_definition(corpus.CLIENT_R1_FULL), 1),
        history.revision(1).definition,
    )
    client_value = RecordValue(
        "Customer",
        {
            "firstName": "Ada",
            "lastName": "Lovelace",
            "gender": 1,
            "address": RecordValue(
                "Address",
                {
                    "street": "Mill Lane",
                    "number": "12",
                    "postalCode": "CB1",
                    "city": "Cambridge",
                },
            ),
        },
    )
    request = encode_record(plan.client_schema, "Customer", client_value, Direction.REQUEST)
    received = decode_record(plan.client_schema, "Customer", request, Direction.REQUEST)
    internal_value = to_internal(rep, plan, "Customer", received)
    assert internal_value.fields["gender"] == 1
    assert "genderNew" not in internal_value.fields
    assert internal_value.fields["primaryAddress"].type_name == "Address"

    served = to_client(rep, plan, "Customer", internal_value)
    assert served == client_value
    response = encode_record(plan.client_schema, "Customer", served, Direction.RESPONSE)
    echoed = decode_record(plan.client_schema, "Customer", response, Direction.RESPONSE)
    again = to_client(rep, plan, "Customer", to_internal(rep, plan, "Customer", echoed))
    assert encode_record(plan.client_schema, "Customer", again, Direction.RESPONSE) == response


def test_unrepresentable_values_name_the_exact_client_path():
    history = history_from_texts("customer", corpus.CUSTOMER_HISTORY)
    rep = derive_internal(history, range(1, 7))

    plan_r4 = resolve(
        ClientDefinition(parse_definition(corpus.CLIENT_R4), 4),
        history.revision(4).definition,
    )
    newer_member = RecordValue(
        "Customer", {"firstName": "Max", "lastName": "Planck", "genderNew": "DIVERSE"}
    )
    with pytest.raises(UnrepresentableValue) as err:
        to_client(rep, plan_r4, "Customer", newer_member)
    assert err.value.path == "Customer.gender"

    substituted = to_client(
        rep, plan_r4, "Customer", newer_member, enum_fallbacks={"Gender": "FEMALE"}
    )
    assert substituted.fields["gender"] == "FEMALE"

    plan_r1 = resolve(
        ClientDefinition(parse_definition(corpus.CLIENT_R1_FULL), 1),
        history.revision(1).definition,
    )
    newer_alternative = RecordValue(
        "Customer",
        {
            "firstName": "Max",
            "lastName": "Planck",
            "primaryAddress": RecordValue(
                "POBoxAddress", {"boxNumber": "77", "postalCode": "CB1", "city": "Cambridge"}
            ),
        },
    )
    with pytest.raises(UnrepresentableValue) as err:
        to_client(rep, plan_r1, "Customer", newer_alternative)
    assert err.value.path == "Customer.address"


def test_randomized_suites_cover_a_thousand_cases_each():
    properties.CASE_COUNTS.clear()
    started = time.perf_counter()
    properties.test_codec_round_trip()
    properties.test_canonical_encoding_uniqueness()
    properties.test_predecessor_relations_are_injective()
    properties.test_merged_representation_equals_the_brute_force_union()
    properties.test_merged_optionality_is_the_least_upper_bound()
    elapsed = time.perf_counter() - started

    for suite in (
        "codec_round_trip",
        "canonical_uniqueness",
        "relation_injectivity",
        "merge_union",
        "optionality_lub",
    ):
        assert properties.CASE_COUNTS[suite] >= MIN_RANDOMIZED_CASES
    assert elapsed < MAX_RANDOMIZED_SECONDS


def test_lifecycle_guards_and_sparse_windows(tmp_path):
    registry = Registry(tmp_path)
    for text in corpus.CUSTOMER_HISTORY:
        registry.publish(text)
    registry.register_client("customer", "crm", corpus.CLIENT_R1_FULL, 1)

    with pytest.raises(ClientsStillReferencing) as err:
        registry.set_supported("customer", [2, 3, 4, 5, 6])
    assert err.value.pinned == [("crm", 1)]
    assert "crm" in str(err.value)
    assert registry.status("customer").supported == (1, 2, 3, 4, 5, 6)

    rep = registry.set_supported("customer", [2, 4, 5, 6], force=True)
    assert rep.supported == (2, 4, 5, 6)
    merged = rep.schema.records["Customer"]
    assert merged.field("gender").optionality is Optionality.OPTIONAL
    assert merged.field("genderNew") is not None
    with pytest.raises(ResolutionError) as err:
        registry.resolve_client("customer", "crm")
    assert {i.code for i in err.value.issues} == {ResolutionCode.UNSUPPORTED_REVISION}

    registry.drop_client("customer", "crm")
    registry.set_supported("customer", [2, 4, 5, 6])  # no clients left to block


def test_round_trip_latency_budget(tmp_path):
    started = time.perf_counter()
    result = run_bench(iterations=10000, report_dir=tmp_path / "report")
    elapsed = time.perf_counter() - started

    assert result.iterations == 10000
    assert result.samples_path.exists()
    assert result.histogram_path.exists()
    assert result.median_us < MAX_MEDIAN_MICROSECONDS
    assert elapsed < MAX_BENCH_SECONDS
