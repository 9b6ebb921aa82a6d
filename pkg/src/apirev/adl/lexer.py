"""Tokenizer for the definition language.

Identifiers are ``[A-Za-z_][A-Za-z0-9_]*``, integers are plain digit
runs, ``//`` starts a comment running to end of line, and whitespace is
insignificant. Keywords are reserved identifiers; the parser decides
which identifiers act as keywords by value.
"""

from __future__ import annotations

from dataclasses import dataclass

from ..errors import ApiSyntaxError

KEYWORDS = frozenset(
    {
        "api",
        "record",
        "enum",
        "service",
        "exception",
        "abstract",
        "optional",
        "optin",
        "mandatory",
        "extends",
        "replaces",
        "as",
        "nothing",
        "throws",
        "int32",
        "numeric",
        "string",
    }
)

PUNCTUATION = frozenset("{}()[]*,.")


@dataclass(frozen=True)
class Token:
    kind: str  # "ident" | "int" | "punct" | "eof"
    value: str
    line: int
    column: int

    def describe(self) -> str:
        return "end of input" if self.kind == "eof" else repr(self.value)


def tokenize(text: str) -> list[Token]:
    tokens: list[Token] = []
    line = 1
    col = 1
    i = 0
    n = len(text)
    while i < n:
        ch = text[i]
        if ch == "\n":
            line += 1
            col = 1
            i += 1
            continue
        if ch in " \t\r":
            col += 1
            i += 1
            continue
        if ch == "/" and text.startswith("//", i):
            while i < n and text[i] != "\n":
                i += 1
            continue
        if ch.isalpha() or ch == "_":
            start = i
            while i < n and (text[i].isalnum() or text[i] == "_"):
                i += 1
            word = text[start:i]
            tokens.append(Token("ident", word, line, col))
            col += i - start
            continue
        if ch.isdigit():
            start = i
            while i < n and text[i].isdigit():
                i += 1
            tokens.append(Token("int", text[start:i], line, col))
            col += i - start
            continue
        if ch in PUNCTUATION:
            tokens.append(Token("punct", ch, line, col))
            col += 1
            i += 1
            continue
        raise ApiSyntaxError(f"unexpected character {ch!r}", line, col)
    tokens.append(Token("eof", "", line, col))
    return tokens
