"""Wire schema derivation from single definitions."""

from __future__ import annotations

import pytest

from apirev import corpus
from apirev.adl import Optionality, parse_text
from apirev.schema import (
    SchemaError,
    WireEnum,
    WireInt32,
    WireList,
    WireNumeric,
    WireRecord,
    WireString,
    WireUnion,
    derive_schema,
)


def schema_of(text: str):
    return derive_schema(parse_text(text))


def test_initial_customer_schema_shapes():
    schema = schema_of(corpus.CUSTOMER_R1)
    customer = schema.records["Customer"]
    assert [f.name for f in customer.fields] == ["firstName", "lastName", "gender", "address"]
    assert customer.field("firstName").type == WireString()
    assert customer.field("gender").type == WireInt32()
    assert customer.field("address").type == WireRecord("Address")
    assert customer.field("address").optionality is Optionality.OPTIN
    assert customer.field("gender").optionality is Optionality.MANDATORY
    lines = schema.records["FormattedAddress"].field("lines")
    assert lines.type == WireList(WireString())


def test_hierarchy_flattens_and_references_become_unions():
    schema = schema_of(corpus.CUSTOMER_R6)
    street = schema.records["StreetAddress"]
    assert [f.name for f in street.fields] == ["postalCode", "city", "street", "number"]
    assert [f.declared_in for f in street.fields] == ["Address", "Address", "StreetAddress", "StreetAddress"]
    assert street.field("street").alias == "streetLine"
    customer = schema.records["Customer"]
    assert customer.field("primaryAddress").type == WireUnion(("StreetAddress", "POBoxAddress"))
    assert customer.field("secondaryAddresses").type == WireList(
        WireUnion(("StreetAddress", "POBoxAddress"))
    )
    assert customer.field("gender").type == WireEnum("Gender")
    assert schema.enums["Gender"].members == ("MALE", "FEMALE", "DIVERSE")
    assert schema.enums["Gender"].ordinal("DIVERSE") == 2


def test_concrete_supertype_joins_its_union_last():
    schema = schema_of(
        """
        api t {
          record Base { string a }
          record Sub extends Base { string b }
          record Holder { Base ref }
        }
        """
    )
    assert schema.records["Holder"].field("ref").type == WireUnion(("Sub", "Base"))
    assert schema.reference("Base") == WireUnion(("Sub", "Base"))
    assert schema.reference("Sub") == WireRecord("Sub")


def test_reference_to_single_concrete_type_is_direct():
    schema = schema_of(corpus.CUSTOMER_R1)
    assert schema.reference("Customer") == WireRecord("Customer")
    assert schema.alternatives["Customer"] == ("Customer",)


def test_empty_union_is_rejected():
    with pytest.raises(SchemaError) as err:
        schema_of(
            """
            api t {
              abstract record Never { string a }
              record Holder { Never ref }
            }
            """
        )
    assert "no concrete alternatives" in str(err.value)


def test_bounds_carry_into_wire_types():
    schema = schema_of(corpus.COVERAGE_BASE)
    account = schema.records["Account"]
    assert account.field("owner").type == WireString(40)
    assert account.field("balance").type == WireNumeric(12)
    assert account.field("openedYear").type == WireNumeric()
    assert account.field("recentCodes").type == WireList(WireString(5), 10)
    assert account.field("codeHistory").type == WireList(WireList(WireInt32(), 3))
    assert account.field("status").type == WireEnum("Status")


def test_exceptions_and_operations_survive_derivation():
    schema = schema_of(corpus.COVERAGE_BASE)
    short = schema.records["InsufficientFunds"]
    assert short.is_exception and not short.is_abstract
    assert [f.name for f in short.fields] == ["message", "shortfall"]
    svc = schema.services["AccountService"]
    audit = svc.operation("audit")
    assert audit.input_record == "Account"
    assert audit.output_record == "AuditEntry"
    assert audit.throws == ("AccountError", "InsufficientFunds")
    assert schema.alternatives["AccountError"] == ("InsufficientFunds",)
    assert schema.reference("AccountError") == WireRecord("InsufficientFunds")


def test_record_default_optionality_applies_to_fields():
    schema = schema_of(corpus.COVERAGE_BASE)
    audit = schema.records["AuditEntry"]
    assert audit.field("note").optionality is Optionality.OPTIONAL
    assert audit.field("reviewer").optionality is Optionality.OPTIN
