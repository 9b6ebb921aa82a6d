"""Recursive-descent parser for ``api`` definition files.

One source file holds exactly one ``api`` block. The parser produces the
raw syntax tree and enforces purely lexical rules (reserved words, bound
literals >= 1, modifier sanity); name resolution and the structural
invariants live in :mod:`apirev.adl.validate`.
"""

from __future__ import annotations

from ..errors import ApiSyntaxError, InvalidBoundError
from .lexer import KEYWORDS, Token, tokenize
from . import model
from .model import (
    ApiDefinition,
    EnumMember,
    EnumType,
    Field,
    Optionality,
    QualifiedFieldName,
    RecordType,
    Replaces,
    Service,
    ServiceOperation,
)

OPTIONALITY_KEYWORDS = {
    "optional": Optionality.OPTIONAL,
    "optin": Optionality.OPTIN,
    "mandatory": Optionality.MANDATORY,
}

_FIELD_START = frozenset({"int32", "numeric", "string"}) | set(OPTIONALITY_KEYWORDS)


class Parser:
    def __init__(self, text: str):
        self.tokens = tokenize(text)
        self.pos = 0

    # -- token plumbing ----------------------------------------------------

    @property
    def current(self) -> Token:
        return self.tokens[self.pos]

    def advance(self) -> Token:
        tok = self.current
        if tok.kind != "eof":
            self.pos += 1
        return tok

    def error(self, message: str, *expected: str) -> ApiSyntaxError:
        tok = self.current
        if expected:
            message = f"{message}, found {tok.describe()}"
        return ApiSyntaxError(message, tok.line, tok.column, expected)

    def at_keyword(self, word: str) -> bool:
        tok = self.current
        return tok.kind == "ident" and tok.value == word

    def match_keyword(self, word: str) -> bool:
        if self.at_keyword(word):
            self.advance()
            return True
        return False

    def expect_keyword(self, word: str) -> None:
        if not self.match_keyword(word):
            raise self.error(f"expected {word!r}", word)

    def at_punct(self, sym: str) -> bool:
        tok = self.current
        return tok.kind == "punct" and tok.value == sym

    def match_punct(self, sym: str) -> bool:
        if self.at_punct(sym):
            self.advance()
            return True
        return False

    def expect_punct(self, sym: str) -> None:
        if not self.match_punct(sym):
            raise self.error(f"expected {sym!r}", sym)

    def expect_name(self) -> str:
        tok = self.current
        if tok.kind != "ident":
            raise self.error("expected identifier", "identifier")
        if tok.value in KEYWORDS:
            raise self.error(f"{tok.value!r} is a reserved word", "identifier")
        self.advance()
        return tok.value

    def expect_bound(self) -> int:
        tok = self.current
        if tok.kind != "int":
            raise self.error("expected length bound", "integer")
        value = int(tok.value)
        if value < 1:
            raise InvalidBoundError("length bounds must be at least 1", tok.line, tok.column)
        self.advance()
        return value

    # -- productions -------------------------------------------------------

    def parse_api(self) -> ApiDefinition:
        self.expect_keyword("api")
        name = self.parse_qualified_api_name()
        self.expect_punct("{")
        elements: list[model.Element] = []
        while not self.at_punct("}"):
            elements.append(self.parse_element())
        self.expect_punct("}")
        if self.current.kind != "eof":
            raise self.error("expected end of input after api block", "end of input")
        return ApiDefinition(name, tuple(elements))

    def parse_qualified_api_name(self) -> str:
        parts = [self.expect_name()]
        while self.match_punct("."):
            parts.append(self.expect_name())
        return ".".join(parts)

    def parse_element(self) -> model.Element:
        if self.at_keyword("enum"):
            return self.parse_enum()
        if self.at_keyword("service"):
            return self.parse_service()
        return self.parse_record_like()

    # Records and exceptions share one production; modifiers come first.
    def parse_record_like(self) -> RecordType:
        is_abstract = False
        default_opt: Optionality | None = None
        while True:
            tok = self.current
            if tok.kind != "ident":
                break
            if tok.value == "abstract":
                if is_abstract:
                    raise self.error("duplicate 'abstract' modifier")
                is_abstract = True
                self.advance()
                continue
            if tok.value in OPTIONALITY_KEYWORDS:
                if default_opt is not None:
                    raise self.error("duplicate optionality modifier")
                default_opt = OPTIONALITY_KEYWORDS[tok.value]
                self.advance()
                continue
            break

        if self.match_keyword("exception"):
            is_exception = True
            if default_opt is not None:
                raise self.error("exceptions take no optionality modifier")
        elif self.match_keyword("record"):
            is_exception = False
        else:
            raise self.error("expected 'record' or 'exception'", "record", "exception")

        name = self.expect_name()
        super_type = self.expect_name() if self.match_keyword("extends") else None
        replaces = self.parse_simple_replaces()
        alias = self.expect_name() if self.match_keyword("as") else None
        self.expect_punct("{")
        fields: list[Field] = []
        while not self.at_punct("}"):
            fields.append(self.parse_field())
        self.expect_punct("}")
        return RecordType(
            public_name=name,
            fields=tuple(fields),
            is_abstract=is_abstract,
            is_exception=is_exception,
            super_type=super_type,
            default_optionality=default_opt,
            replaces=replaces,
            alias=alias,
        )

    def parse_field(self) -> Field:
        optionality: Optionality | None = None
        tok = self.current
        if tok.kind == "ident" and tok.value in OPTIONALITY_KEYWORDS:
            optionality = OPTIONALITY_KEYWORDS[tok.value]
            self.advance()
        type_ref = self.parse_type_ref()
        name = self.expect_name()
        replaces = self.parse_field_replaces()
        alias = self.expect_name() if self.match_keyword("as") else None
        return Field(name, type_ref, optionality, replaces, alias)

    def parse_type_ref(self) -> model.TypeRef:
        base: model.TypeRef
        if self.match_keyword("int32"):
            base = model.Int32Ref()
        elif self.match_keyword("numeric"):
            bound = None
            if self.match_punct("("):
                bound = self.expect_bound()
                self.expect_punct(")")
            base = model.NumericRef(bound)
        elif self.match_keyword("string"):
            bound = None
            if self.match_punct("("):
                bound = self.expect_bound()
                self.expect_punct(")")
            base = model.StringRef(bound)
        else:
            base = model.NamedRef(self.expect_name())
        while True:
            if self.match_punct("*"):
                base = model.ListRef(base, None)
            elif self.at_punct("["):
                self.advance()
                bound = self.expect_bound()
                self.expect_punct("]")
                base = model.ListRef(base, bound)
            else:
                return base

    def parse_simple_replaces(self) -> Replaces | None:
        """Type / service / operation / member form: one unqualified target or nothing."""
        if not self.match_keyword("replaces"):
            return None
        if self.match_keyword("nothing"):
            return model.REPLACES_NOTHING
        return model.single_replaces(self.expect_name())

    def parse_field_replaces(self) -> Replaces | None:
        if not self.match_keyword("replaces"):
            return None
        if self.match_keyword("nothing"):
            return model.REPLACES_NOTHING
        targets = [self.parse_qualified_field_name()]
        while self.match_punct(","):
            targets.append(self.parse_qualified_field_name())
        return Replaces(tuple(targets))

    def parse_qualified_field_name(self) -> QualifiedFieldName:
        first = self.expect_name()
        if self.match_punct("."):
            return QualifiedFieldName(first, self.expect_name())
        return QualifiedFieldName(None, first)

    def parse_enum(self) -> EnumType:
        self.expect_keyword("enum")
        name = self.expect_name()
        replaces = self.parse_simple_replaces()
        alias = self.expect_name() if self.match_keyword("as") else None
        self.expect_punct("{")
        members: list[EnumMember] = []
        while not self.at_punct("}"):
            member = self.expect_name()
            members.append(EnumMember(member, self.parse_simple_replaces()))
        self.expect_punct("}")
        return EnumType(name, tuple(members), replaces, alias)

    def parse_service(self) -> Service:
        self.expect_keyword("service")
        name = self.expect_name()
        replaces = self.parse_simple_replaces()
        alias = self.expect_name() if self.match_keyword("as") else None
        self.expect_punct("{")
        operations: list[ServiceOperation] = []
        while not self.at_punct("}"):
            operations.append(self.parse_operation())
        self.expect_punct("}")
        return Service(name, tuple(operations), replaces, alias)

    def parse_operation(self) -> ServiceOperation:
        # Java-style: OutputType name(InputType). Operation input and
        # output are references to named record types, never inline.
        output_type = self.expect_name()
        name = self.expect_name()
        self.expect_punct("(")
        input_type = self.expect_name()
        self.expect_punct(")")
        replaces = self.parse_simple_replaces()
        alias = self.expect_name() if self.match_keyword("as") else None
        throws: list[str] = []
        if self.match_keyword("throws"):
            throws.append(self.expect_name())
            while self.match_punct(","):
                throws.append(self.expect_name())
        return ServiceOperation(name, input_type, output_type, tuple(throws), replaces, alias)


def parse_text(text: str) -> ApiDefinition:
    """Parse one definition file; raises ApiSyntaxError / InvalidBoundError."""
    return Parser(text).parse_api()
