"""Client-against-revision matching rules."""

from __future__ import annotations

import pytest

from apirev import corpus
from apirev.adl import parse_definition
from apirev.schema import WireRecord
from apirev.resolution import (
    ClientDefinition,
    Disposition,
    ResolutionCode,
    ResolutionError,
    require_supported,
    resolve,
)


def resolve_texts(client_text: str, provider_text: str, revision: int = 1):
    return resolve(
        ClientDefinition(parse_definition(client_text), revision),
        parse_definition(provider_text),
    )


def issues_of(client_text: str, provider_text: str, revision: int = 1):
    with pytest.raises(ResolutionError) as exc:
        resolve_texts(client_text, provider_text, revision)
    return exc.value.issues


class TestPartialClient:
    def test_partial_client_resolves_against_first_revision(self):
        plan = resolve_texts(corpus.CLIENT_R1_PARTIAL, corpus.CUSTOMER_R1)
        assert plan.api_name == "customer"
        assert plan.provider_revision == 1
        assert plan.records["Customer"].fields == {
            "firstName": Disposition.MATCHED,
            "lastName": Disposition.MATCHED,
            "gender": Disposition.MATCHED,
        }
        assert plan.operations == ()

    def test_client_aliases_stay_on_the_client_side(self):
        plan = resolve_texts(corpus.CLIENT_R1_PARTIAL, corpus.CUSTOMER_R1)
        record = plan.client_schema.records["Customer"]
        assert record.alias == "Person"
        assert record.field("lastName").alias == "familyName"
        # and the provider schema is untouched by them
        assert plan.provider_schema.records["Customer"].alias == "Customer"

    def test_full_mirror_client_resolves(self):
        plan = resolve_texts(corpus.CLIENT_R1_FULL, corpus.CUSTOMER_R1)
        assert set(plan.records) == {"Customer", "Address"}
        assert all(
            d is Disposition.MATCHED
            for rec in plan.records.values()
            for d in rec.fields.values()
        )

    def test_enum_subset_client_resolves_against_newer_revision(self):
        # the r4 client knows two members; revision 5 has three
        plan = resolve_texts(corpus.CLIENT_R4, corpus.CUSTOMER_R5, revision=5)
        assert plan.records["Customer"].fields["gender"] is Disposition.MATCHED


class TestClientShapeRules:
    def test_replaces_clauses_are_rejected(self):
        client = """\
api customer {
  record Customer {
    string firstName
    string familyName replaces lastName
    int32 gender
  }
}
"""
        issues = issues_of(client, corpus.CUSTOMER_R1)
        assert [i.code for i in issues] == [ResolutionCode.REPLACES_IN_CLIENT]
        assert issues[0].path == "Customer.familyName"

    def test_replaces_on_client_type_is_rejected(self):
        client = """\
api customer {
  record Person replaces Customer {
    string firstName
    string lastName
    int32 gender
  }
}
"""
        issues = issues_of(client, corpus.CUSTOMER_R1)
        assert issues[0].code is ResolutionCode.REPLACES_IN_CLIENT
        assert issues[0].path == "Person"

    def test_api_name_mismatch(self):
        client = "api customers {\n  record Customer {\n    string firstName\n    string lastName\n    int32 gender\n  }\n}\n"
        issues = issues_of(client, corpus.CUSTOMER_R1)
        assert issues[0].code is ResolutionCode.UNKNOWN_NAME

    def test_unknown_client_type(self):
        client = """\
api customer {
  record Customer {
    string firstName
    string lastName
    int32 gender
  }
  record Loyalty {
    int32 points
  }
}
"""
        issues = issues_of(client, corpus.CUSTOMER_R1)
        assert [(i.code, i.path) for i in issues] == [
            (ResolutionCode.UNKNOWN_NAME, "Loyalty")
        ]


class TestFieldMatching:
    def test_optional_client_only_field_resolves_as_absent(self):
        client = """\
api customer {
  record Customer {
    string firstName
    string lastName
    int32 gender
    optional string nickname
  }
}
"""
        plan = resolve_texts(client, corpus.CUSTOMER_R1)
        assert plan.records["Customer"].fields["nickname"] is Disposition.ABSENT

    def test_required_client_only_field_is_an_error(self):
        client = """\
api customer {
  record Customer {
    string firstName
    string lastName
    int32 gender
    string nickname
  }
}
"""
        issues = issues_of(client, corpus.CUSTOMER_R1)
        assert [(i.code, i.path) for i in issues] == [
            (ResolutionCode.MISSING_MANDATORY, "Customer.nickname")
        ]

    def test_omitting_a_provider_mandatory_field_is_an_error(self):
        client = """\
api customer {
  record Customer {
    string firstName
    int32 gender
  }
}
"""
        issues = issues_of(client, corpus.CUSTOMER_R1)
        assert [(i.code, i.path) for i in issues] == [
            (ResolutionCode.MISSING_MANDATORY, "Customer.lastName")
        ]

    @pytest.mark.parametrize(
        "provider_kw, client_kw, ok",
        [
            ("mandatory", "mandatory", True),
            ("mandatory", "optin", False),
            ("mandatory", "optional", False),
            ("optin", "mandatory", True),
            ("optin", "optin", True),
            ("optin", "optional", True),
            ("optional", "mandatory", False),
            ("optional", "optin", False),
            ("optional", "optional", True),
        ],
    )
    def test_optionality_pairing(self, provider_kw, client_kw, ok):
        provider = f"api m.example {{\n  record R {{\n    {provider_kw} string f\n  }}\n}}\n"
        client = f"api m.example {{\n  record R {{\n    {client_kw} string f\n  }}\n}}\n"
        if ok:
            plan = resolve_texts(client, provider)
            assert plan.records["R"].fields["f"] is Disposition.MATCHED
        else:
            issues = issues_of(client, provider)
            assert [(i.code, i.path) for i in issues] == [
                (ResolutionCode.MISSING_MANDATORY, "R.f")
            ]

    @pytest.mark.parametrize(
        "provider_type, client_type",
        [
            ("int32", "string"),
            ("string(10)", "string(5)"),
            ("string(10)", "string"),
            ("numeric(4)", "numeric(3)"),
            ("int32", "numeric"),
            ("int32[3]", "int32[4]"),
            ("int32*", "int32[4]"),
            ("int32", "int32*"),
        ],
    )
    def test_type_shapes_must_match_exactly(self, provider_type, client_type):
        provider = f"api m.example {{\n  record R {{\n    {provider_type} f\n  }}\n}}\n"
        client = f"api m.example {{\n  record R {{\n    {client_type} f\n  }}\n}}\n"
        issues = issues_of(client, provider)
        assert issues[0].code is ResolutionCode.TYPE_MISMATCH
        assert issues[0].path == "R.f"

    def test_matching_bounded_shapes_resolve(self):
        text = (
            "api m.example {\n"
            "  record R {\n"
            "    string(40) a\n"
            "    numeric(12) b\n"
            "    string(5)[10] c\n"
            "  }\n"
            "}\n"
        )
        plan = resolve_texts(text, text)
        assert all(d is Disposition.MATCHED for d in plan.records["R"].fields.values())


class TestHierarchiesAndEnums:
    def test_client_may_know_fewer_subtypes(self):
        client = """\
api customer {
  record Customer {
    string firstName
    string lastName
    Gender gender
    optin Address primaryAddress
  }
  abstract record Address {
    string postalCode
    string city
  }
  record StreetAddress extends Address {
    string street
    string number
  }
  enum Gender {
    MALE
    FEMALE
    DIVERSE
  }
}
"""
        plan = resolve_texts(client, corpus.CUSTOMER_R6, revision=6)
        # the client's lone concrete subtype collapses to a direct
        # reference, which still narrows the provider's two-way union
        assert plan.client_schema.records["Customer"].field("primaryAddress").type == WireRecord(
            "StreetAddress"
        )

    def test_client_concrete_supertype_needs_provider_support(self):
        # revision 6 made Address abstract; a client that still expects
        # plain Address values cannot resolve against it.
        client = """\
api customer {
  record Customer {
    string firstName
    string lastName
    Gender gender
    optin Address primaryAddress
  }
  record Address {
    string postalCode
    string city
  }
  enum Gender {
    MALE
    FEMALE
  }
}
"""
        issues = issues_of(client, corpus.CUSTOMER_R6, revision=6)
        assert [(i.code, i.path) for i in issues] == [
            (ResolutionCode.TYPE_MISMATCH, "Customer.primaryAddress")
        ]
        assert "Address" in issues[0].message

    def test_client_enum_with_extra_member_is_rejected(self):
        client = """\
api customer {
  record Customer {
    string firstName
    string lastName
    Gender gender
  }
  enum Gender {
    MALE
    FEMALE
    OTHER
  }
}
"""
        issues = issues_of(client, corpus.CUSTOMER_R4, revision=4)
        assert [(i.code, i.path) for i in issues] == [
            (ResolutionCode.TYPE_MISMATCH, "Gender")
        ]
        assert "OTHER" in issues[0].message

    def test_kind_mismatch_record_vs_enum(self):
        client = """\
api m.example {
  record Color {
    string name
  }
}
"""
        provider = "api m.example {\n  enum Color {\n    RED\n  }\n  record R {\n    Color c\n  }\n}\n"
        issues = issues_of(client, provider)
        assert [(i.code, i.path) for i in issues] == [
            (ResolutionCode.TYPE_MISMATCH, "Color")
        ]

    def test_kind_mismatch_enum_vs_record(self):
        client = "api m.example {\n  enum R {\n    A\n  }\n}\n"
        provider = "api m.example {\n  record R {\n    string f\n  }\n}\n"
        issues = issues_of(client, provider)
        assert [(i.code, i.path) for i in issues] == [
            (ResolutionCode.TYPE_MISMATCH, "R")
        ]

    def test_exception_kind_must_match(self):
        client = "api m.example {\n  record Oops {\n    string why\n  }\n}\n"
        provider = "api m.example {\n  exception Oops {\n    string why\n  }\n}\n"
        issues = issues_of(client, provider)
        assert [(i.code, i.path) for i in issues] == [
            (ResolutionCode.TYPE_MISMATCH, "Oops")
        ]


PROVIDER_WITH_SERVICE = """\
api m.example {
  record Ping {
    string token
  }
  record Pong {
    string token
  }
  exception Down {
    string reason
  }
  service Echo {
    Pong ping(Ping) throws Down
    Pong other(Ping)
  }
}
"""


class TestServices:
    def test_client_operation_subset_resolves(self):
        client = """\
api m.example {
  record Ping {
    string token
  }
  record Pong {
    string token
  }
  exception Down {
    string reason
  }
  service Echo {
    Pong ping(Ping) throws Down
  }
}
"""
        plan = resolve_texts(client, PROVIDER_WITH_SERVICE)
        assert plan.operations == (("Echo", "ping"),)

    def test_client_may_declare_fewer_throws(self):
        client = """\
api m.example {
  record Ping {
    string token
  }
  record Pong {
    string token
  }
  service Echo {
    Pong ping(Ping)
  }
}
"""
        plan = resolve_texts(client, PROVIDER_WITH_SERVICE)
        assert plan.operations == (("Echo", "ping"),)

    def test_unknown_operation(self):
        client = """\
api m.example {
  record Ping {
    string token
  }
  record Pong {
    string token
  }
  service Echo {
    Pong shout(Ping)
  }
}
"""
        issues = issues_of(client, PROVIDER_WITH_SERVICE)
        assert [(i.code, i.path) for i in issues] == [
            (ResolutionCode.UNKNOWN_NAME, "Echo.shout")
        ]

    def test_unknown_service(self):
        client = """\
api m.example {
  record Ping {
    string token
  }
  service Loud {
    Ping ping(Ping)
  }
}
"""
        issues = issues_of(client, PROVIDER_WITH_SERVICE)
        assert [(i.code, i.path) for i in issues] == [
            (ResolutionCode.UNKNOWN_NAME, "Loud")
        ]

    def test_signature_mismatch(self):
        client = """\
api m.example {
  record Ping {
    string token
  }
  record Pong {
    string token
  }
  service Echo {
    Ping ping(Ping)
  }
}
"""
        issues = issues_of(client, PROVIDER_WITH_SERVICE)
        assert [(i.code, i.path) for i in issues] == [
            (ResolutionCode.TYPE_MISMATCH, "Echo.ping")
        ]

    def test_extra_declared_exception(self):
        client = """\
api m.example {
  record Ping {
    string token
  }
  record Pong {
    string token
  }
  exception Worse {
    string reason
  }
  service Echo {
    Pong other(Ping) throws Worse
  }
}
"""
        issues = issues_of(client, PROVIDER_WITH_SERVICE)
        codes = {(i.code, i.path) for i in issues}
        assert (ResolutionCode.UNKNOWN_NAME, "Echo.other") in codes
        assert (ResolutionCode.UNKNOWN_NAME, "Worse") in codes


class TestErrorCollection:
    def test_all_issues_are_collected_in_one_raise(self):
        client = """\
api customer {
  record Customer {
    string firstName
    int32 lastName
    string nickname
  }
  record Loyalty {
    int32 points
  }
}
"""
        issues = issues_of(client, corpus.CUSTOMER_R1)
        got = {(i.code, i.path) for i in issues}
        assert got == {
            (ResolutionCode.TYPE_MISMATCH, "Customer.lastName"),
            (ResolutionCode.MISSING_MANDATORY, "Customer.nickname"),
            (ResolutionCode.MISSING_MANDATORY, "Customer.gender"),
            (ResolutionCode.UNKNOWN_NAME, "Loyalty"),
        }


class TestSupportedSet:
    def test_unsupported_revision_is_refused(self):
        with pytest.raises(ResolutionError) as exc:
            require_supported(1, (2, 3, 4), "customer")
        issue = exc.value.issues[0]
        assert issue.code is ResolutionCode.UNSUPPORTED_REVISION
        assert "revision 1" in issue.message
        assert "{2, 3, 4}" in issue.message

    def test_supported_revision_passes(self):
        require_supported(3, (2, 3, 4), "customer")
