"""Built-in example definitions.

The customer API below evolves over six revisions:

1. initial model: customer with integer gender and one postal address
2. adds an opt-in date of birth
3. renames address to primaryAddress and adds a secondary-address list
4. replaces the integer gender with a Gender enum (new internal name)
5. adds a third enum member
6. splits addresses into street and post-box forms under a now-abstract
   Address supertype; street/number live on StreetAddress from here on

The texts are the single source of truth: the checked-in ``corpus/``
directory is generated from them (see tests), and the benchmark builds
its history from them so the installed package is self-contained.
"""

from __future__ import annotations

CUSTOMER_R1 = """\
api customer {
  record Customer {
    string firstName
    string lastName
    int32 gender
    optin Address address
  }
  record Address {
    string street
    string number
    string postalCode
    string city
  }
  record FormattedAddress {
    string* lines
  }
  service CustomerService {
    Customer upsert(Customer)
    FormattedAddress formatAddress(Address)
  }
}
"""

CUSTOMER_R2 = """\
api customer {
  record Customer {
    string firstName
    string lastName
    optin string dateOfBirth
    int32 gender
    optin Address address
  }
  record Address {
    string street
    string number
    string postalCode
    string city
  }
  record FormattedAddress {
    string* lines
  }
  service CustomerService {
    Customer upsert(Customer)
    FormattedAddress formatAddress(Address)
  }
}
"""

CUSTOMER_R3 = """\
api customer {
  record Customer {
    string firstName
    string lastName
    optin string dateOfBirth
    int32 gender
    optin Address primaryAddress replaces address
    optional Address* secondaryAddresses
  }
  record Address {
    string street
    string number
    string postalCode
    string city
  }
  record FormattedAddress {
    string* lines
  }
  service CustomerService {
    Customer upsert(Customer)
    FormattedAddress formatAddress(Address)
  }
}
"""

CUSTOMER_R4 = """\
api customer {
  record Customer {
    string firstName
    string lastName
    optin string dateOfBirth
    Gender gender as genderNew
    optin Address primaryAddress
    optional Address* secondaryAddresses
  }
  record Address {
    string street
    string number
    string postalCode
    string city
  }
  enum Gender {
    MALE
    FEMALE
  }
  record FormattedAddress {
    string* lines
  }
  service CustomerService {
    Customer upsert(Customer)
    FormattedAddress formatAddress(Address)
  }
}
"""

CUSTOMER_R5 = """\
api customer {
  record Customer {
    string firstName
    string lastName
    optin string dateOfBirth
    Gender gender as genderNew
    optin Address primaryAddress
    optional Address* secondaryAddresses
  }
  record Address {
    string street
    string number
    string postalCode
    string city
  }
  enum Gender {
    MALE
    FEMALE
    DIVERSE
  }
  record FormattedAddress {
    string* lines
  }
  service CustomerService {
    Customer upsert(Customer)
    FormattedAddress formatAddress(Address)
  }
}
"""

CUSTOMER_R6 = """\
api customer {
  record Customer {
    string firstName
    string lastName
    optin string dateOfBirth
    Gender gender as genderNew
    optin Address primaryAddress
    optional Address* secondaryAddresses
  }
  abstract record Address {
    string postalCode
    string city
  }
  record StreetAddress extends Address {
    string street as streetLine
    string number as houseNumber
  }
  record POBoxAddress extends Address {
    string boxNumber
  }
  enum Gender {
    MALE
    FEMALE
    DIVERSE
  }
  record FormattedAddress {
    string* lines
  }
  service CustomerService {
    Customer upsert(Customer)
    FormattedAddress formatAddress(Address)
  }
}
"""

CUSTOMER_HISTORY = (
    CUSTOMER_R1,
    CUSTOMER_R2,
    CUSTOMER_R3,
    CUSTOMER_R4,
    CUSTOMER_R5,
    CUSTOMER_R6,
)

# The combined form of changes 1-3 applied to revision 1 in a single
# step: date of birth added, address renamed with a secondary list, and
# the gender type change declared via a fresh internal name.
CUSTOMER_COMBINED_STEP = """\
api customer {
  record Customer {
    string firstName
    string lastName
    string dateOfBirth
    Address primaryAddress replaces address
    Address* secondaryAddresses
    Gender gender as genderNew
  }
  record Address {
    string street
    string number
    string postalCode
    string city
  }
  enum Gender {
    MALE
    FEMALE
  }
  record FormattedAddress {
    string* lines
  }
  service CustomerService {
    Customer upsert(Customer)
    FormattedAddress formatAddress(Address)
  }
}
"""

# Partial client against revision 1: renames happen only on the client's
# internal side (as clauses); the address field is not consumed at all.
CLIENT_R1_PARTIAL = """\
api customer {
  record Customer as Person {
    string firstName
    string lastName as familyName
    int32 gender
  }
}
"""

# Full mirror of revision 1, for clients that consume every field.
CLIENT_R1_FULL = """\
api customer {
  record Customer {
    string firstName
    string lastName
    int32 gender
    optin Address address
  }
  record Address {
    string street
    string number
    string postalCode
    string city
  }
}
"""

# A revision-4 client: knows the Gender enum with two members only.
CLIENT_R4 = """\
api customer {
  record Customer {
    string firstName
    string lastName
    Gender gender
  }
  enum Gender {
    MALE
    FEMALE
  }
}
"""

# Two-revision pair exercising field rename, type change, explicit
# replacement conflicts and a dangling replacement. The current text is
# rejected; the "fixed" variant drops the two offending declarations.
RENAME_PREVIOUS = """\
api rename.example {
  record A {
    string a
    int32 b
  }
  record X {
    string x
  }
}
"""

RENAME_CURRENT = """\
api rename.example {
  record B replaces A {
    string d replaces a
    numeric(5) b
    int32 c replaces b
    string y replaces x
    string z
  }
}
"""

RENAME_CURRENT_FIXED = """\
api rename.example {
  record B replaces A {
    string d replaces a
    numeric(5) b
    string z
  }
}
"""

# Two-revision pair exercising pull-up and push-down between a supertype
# and its subtypes. The current text carries one incompatible pull-up
# and one double replacement; the fixed variant keeps the legal moves.
HIERARCHY_PREVIOUS = """\
api hierarchy.example {
  abstract record A {
    string a
  }
  record B extends A {
    string b
    string b2
  }
  record C extends A {
    string c
    int32 c2
  }
}
"""

HIERARCHY_CURRENT = """\
api hierarchy.example {
  abstract record A {
    string a2 replaces B.b, C.c
    string a3 replaces B.b2, C.c2
  }
  record B extends A {
    string b3 replaces A.a
  }
  record C extends A {
    string c3 replaces A.a
    string c
  }
}
"""

HIERARCHY_CURRENT_FIXED = """\
api hierarchy.example {
  abstract record A {
    string a2 replaces B.b, C.c
  }
  record B extends A {
    string b3 replaces A.a
  }
  record C extends A {
    string c3 replaces A.a
  }
}
"""

# Exercises the remaining grammar surface: exceptions with inheritance,
# throws lists, explicit mandatory, bounded strings/numerics/lists,
# nested lists, type-level optionality defaults, and replaces nothing.
COVERAGE_BASE = """\
api coverage.example {
  record Account {
    mandatory string(40) owner
    numeric(12) balance
    numeric openedYear
    string(5)[10] recentCodes
    int32[3]* codeHistory
    Status status
  }
  optional record AuditEntry {
    string note
    optin string reviewer
  }
  enum Status {
    OPEN
    CLOSED
  }
  abstract exception AccountError {
    string message
  }
  exception InsufficientFunds extends AccountError {
    numeric(12) shortfall
  }
  service AccountService {
    Account fetch(Account)
    AuditEntry audit(Account) throws AccountError, InsufficientFunds
  }
}
"""

# Successor revision for the coverage pair: renames across every element
# kind (type, field, enum member, service, operation) plus a fresh
# element guarded by replaces nothing.
COVERAGE_NEXT = """\
api coverage.example {
  record Account replaces nothing {
    string holder replaces nothing
  }
  record Profile replaces Account as ProfileRecord {
    mandatory string(40) owner
    numeric(12) balance
    numeric openedYear
    string(5)[10] recentCodes
    int32[3]* codeHistory
    State status replaces status
  }
  optional record AuditEntry {
    string note
    optin string reviewer
  }
  enum State replaces Status as StateKind {
    OPEN
    SHUT replaces CLOSED
  }
  abstract exception AccountError {
    string message
  }
  exception ShortFunds extends AccountError replaces InsufficientFunds as ShortFall {
    numeric(12) shortfall
  }
  service ProfileService replaces AccountService as Profiles {
    Profile fetch(Profile) replaces fetch
    AuditEntry review(Profile) replaces audit as reviewOp throws AccountError, ShortFunds
  }
}
"""

CORPUS_FILES: dict[str, str] = {
    "customer/rev1.api": CUSTOMER_R1,
    "customer/rev2.api": CUSTOMER_R2,
    "customer/rev3.api": CUSTOMER_R3,
    "customer/rev4.api": CUSTOMER_R4,
    "customer/rev5.api": CUSTOMER_R5,
    "customer/rev6.api": CUSTOMER_R6,
    "customer/combined-step.api": CUSTOMER_COMBINED_STEP,
    "customer/client-r1-partial.api": CLIENT_R1_PARTIAL,
    "customer/client-r1-full.api": CLIENT_R1_FULL,
    "customer/client-r4.api": CLIENT_R4,
    "rename/previous.api": RENAME_PREVIOUS,
    "rename/current.api": RENAME_CURRENT,
    "rename/current-fixed.api": RENAME_CURRENT_FIXED,
    "hierarchy/previous.api": HIERARCHY_PREVIOUS,
    "hierarchy/current.api": HIERARCHY_CURRENT,
    "hierarchy/current-fixed.api": HIERARCHY_CURRENT_FIXED,
    "coverage/base.api": COVERAGE_BASE,
    "coverage/next.api": COVERAGE_NEXT,
}
