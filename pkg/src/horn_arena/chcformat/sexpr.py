"""S-expression reader for SMT-LIB 2.6 text with source positions."""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from decimal import Decimal
from fractions import Fraction

from .errors import LexicalError, SyntaxErrorInScript

# SMT-LIB simple symbol alphabet
_SYMBOL_CHARS = set(
    "abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ0123456789~!@$%^&*_-+=<>.?/"
)
_NUMERAL = re.compile(r"0|[1-9][0-9]*")
_DECIMAL = re.compile(r"(0|[1-9][0-9]*)\.[0-9]+")


@dataclass(frozen=True)
class Pos:
    line: int
    col: int


@dataclass(frozen=True)
class Symbol:
    name: str
    quoted: bool = False
    pos: Pos = field(default=Pos(0, 0), compare=False, repr=False)


@dataclass(frozen=True)
class Keyword:
    name: str  # without the leading colon
    pos: Pos = field(default=Pos(0, 0), compare=False, repr=False)


@dataclass(frozen=True)
class Numeral:
    value: int
    pos: Pos = field(default=Pos(0, 0), compare=False, repr=False)


@dataclass(frozen=True)
class DecimalLit:
    value: Fraction
    pos: Pos = field(default=Pos(0, 0), compare=False, repr=False)


@dataclass(frozen=True)
class String:
    value: str
    pos: Pos = field(default=Pos(0, 0), compare=False, repr=False)


@dataclass(frozen=True)
class SList:
    items: tuple
    pos: Pos = field(default=Pos(0, 0), compare=False, repr=False)

    def __len__(self) -> int:
        return len(self.items)

    def __getitem__(self, i):
        return self.items[i]

    def __iter__(self):
        return iter(self.items)

    def head(self) -> str | None:
        if self.items and isinstance(self.items[0], Symbol):
            return self.items[0].name
        return None


Datum = Symbol | Keyword | Numeral | DecimalLit | String | SList


def pos_of(d) -> Pos:
    return getattr(d, "pos", Pos(0, 0))


class _Lexer:
    def __init__(self, text: str):
        self.text = text
        self.i = 0
        self.line = 1
        self.col = 1

    def _advance(self, n: int = 1) -> None:
        for _ in range(n):
            if self.text[self.i] == "\n":
                self.line += 1
                self.col = 1
            else:
                self.col += 1
            self.i += 1

    def tokens(self):
        text = self.text
        while self.i < len(text):
            c = text[self.i]
            if c in " \t\r\n\f\v":
                self._advance()
                continue
            if c == ";":
                while self.i < len(text) and text[self.i] != "\n":
                    self._advance()
                continue
            pos = Pos(self.line, self.col)
            if c in "()":
                self._advance()
                yield c, c, pos
            elif c == '"':
                yield "string", self._string(pos), pos
            elif c == "|":
                yield "qsymbol", self._quoted(pos), pos
            elif c == ":":
                self._advance()
                word = self._word()
                if not word:
                    raise LexicalError("keyword", "empty keyword", pos.line, pos.col)
                yield "keyword", word, pos
            elif c == "#":
                raise LexicalError(
                    "unsupported-literal",
                    "hexadecimal/binary literals are outside the CHC profile",
                    pos.line,
                    pos.col,
                )
            elif c in _SYMBOL_CHARS:
                yield "word", self._word(), pos
            else:
                raise LexicalError(
                    "bad-character", f"unexpected character {c!r}", pos.line, pos.col
                )

    def _word(self) -> str:
        start = self.i
        while self.i < len(self.text) and self.text[self.i] in _SYMBOL_CHARS:
            self._advance()
        return self.text[start : self.i]

    def _string(self, pos: Pos) -> str:
        self._advance()
        out = []
        while True:
            if self.i >= len(self.text):
                raise LexicalError("unterminated-string", "unterminated string", pos.line, pos.col)
            c = self.text[self.i]
            self._advance()
            if c == '"':
                if self.i < len(self.text) and self.text[self.i] == '"':
                    out.append('"')
                    self._advance()
                    continue
                return "".join(out)
            out.append(c)

    def _quoted(self, pos: Pos) -> str:
        self._advance()
        start = self.i
        while self.i < len(self.text) and self.text[self.i] != "|":
            if self.text[self.i] == "\\":
                raise LexicalError("bad-quoted-symbol", "backslash in quoted symbol", pos.line, pos.col)
            self._advance()
        if self.i >= len(self.text):
            raise LexicalError("unterminated-symbol", "unterminated quoted symbol", pos.line, pos.col)
        name = self.text[start : self.i]
        self._advance()
        return name


def _atom(word: str, pos: Pos) -> Datum:
    if _NUMERAL.fullmatch(word):
        return Numeral(int(word), pos)
    if _DECIMAL.fullmatch(word):
        return DecimalLit(Fraction(Decimal(word)), pos)
    if word[0].isdigit():
        raise LexicalError("bad-numeral", f"malformed numeric literal {word!r}", pos.line, pos.col)
    return Symbol(word, False, pos)


def read_all(text: str) -> list[Datum]:
    """Read every top-level datum of ``text``."""
    stack: list[tuple[Pos, list]] = []
    top: list[Datum] = []
    for kind, value, pos in _Lexer(text).tokens():
        if kind == "(":
            stack.append((pos, []))
            continue
        if kind == ")":
            if not stack:
                raise SyntaxErrorInScript("unbalanced", "unexpected ')'", pos.line, pos.col)
            start, items = stack.pop()
            datum: Datum = SList(tuple(items), start)
        elif kind == "string":
            datum = String(value, pos)
        elif kind == "qsymbol":
            datum = Symbol(value, True, pos)
        elif kind == "keyword":
            datum = Keyword(value, pos)
        else:
            datum = _atom(value, pos)
        (stack[-1][1] if stack else top).append(datum)
    if stack:
        pos = stack[-1][0]
        raise SyntaxErrorInScript("unbalanced", "unclosed '('", pos.line, pos.col)
    return top


def needs_quoting(name: str) -> bool:
    return (
        not name
        or any(c not in _SYMBOL_CHARS for c in name)
        or name[0].isdigit()
    )


def symbol_text(name: str) -> str:
    return f"|{name}|" if needs_quoting(name) else name


def fraction_text(value: Fraction) -> str:
    """Exact decimal text for a nonnegative rational with a terminating expansion."""
    if value < 0 or not is_terminating(value):
        raise ValueError(f"{value} has no finite nonnegative decimal form")
    num, den = value.numerator, value.denominator
    whole, rest = divmod(num, den)
    if rest == 0:
        return f"{whole}.0"
    digits = []
    while rest:
        rest *= 10
        d, rest = divmod(rest, den)
        digits.append(str(d))
    return f"{whole}." + "".join(digits)


def is_terminating(value: Fraction) -> bool:
    den = value.denominator
    for p in (2, 5):
        while den % p == 0:
            den //= p
    return den == 1


def datum_text(d: Datum) -> str:
    """Print a datum back to SMT-LIB text (single line)."""
    if isinstance(d, Symbol):
        return f"|{d.name}|" if d.quoted and needs_quoting(d.name) else symbol_text(d.name)
    if isinstance(d, Keyword):
        return ":" + d.name
    if isinstance(d, Numeral):
        return str(d.value)
    if isinstance(d, DecimalLit):
        return fraction_text(d.value)
    if isinstance(d, String):
        return '"' + d.value.replace('"', '""') + '"'
    return "(" + " ".join(datum_text(x) for x in d.items) + ")"
