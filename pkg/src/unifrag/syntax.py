"""First-order formula ASTs, the text grammar, parsing and printing.

Formula grammar (UTF-8 text)::

    f ::= 'true' | 'false'
        | NAME '(' var (',' var)* ')'
        | var '=' var
        | '~' f
        | '(' f ')'                          -- grouping
        | '(' f OP f (OP f)* ')'             -- one operator per group, left-assoc
        | ('E' | 'A') var+ '.' f             -- quantifier block
        | 'E[' ('>='|'<='|'=') INT ']' var '.' f
    OP ::= '&' | '|' | '->'
    NAME, var ::= [A-Za-z][A-Za-z0-9_]*

``true``, ``false``, ``E`` and ``A`` are reserved words and cannot be used
as relation or variable names.  Quantifier blocks are whitespace-separated
variable lists and bind as far to the right as possible.

Variables are plain strings; distinct names denote distinct variables.
All AST nodes are immutable and safe to share across threads.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterator, Mapping, Union

from .errors import ArityError, ParseError, VocabularyError

RESERVED_WORDS = frozenset({"true", "false", "E", "A"})

NAME_RE = re.compile(r"[A-Za-z][A-Za-z0-9_]*")


# ---------------------------------------------------------------------------
# Vocabulary
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Vocabulary:
    """Finite relational vocabulary: a map from relation name to arity.

    Equality is built in and the name ``=`` is therefore rejected.
    """

    symbols: Mapping[str, int]

    def __post_init__(self):
        object.__setattr__(self, "symbols", dict(self.symbols))
        for name, arity in self.symbols.items():
            if name == "=":
                raise VocabularyError("'=' is reserved for built-in equality")
            if not isinstance(arity, int) or arity < 1:
                raise VocabularyError(f"arity of {name!r} must be a positive integer, got {arity!r}")
            # E/A/true/false stay usable as symbols of the data model even
            # though the formula text grammar cannot reference them
            if not NAME_RE.fullmatch(name):
                raise VocabularyError(f"invalid relation name {name!r}")

    def arity(self, name: str) -> int:
        try:
            return self.symbols[name]
        except KeyError:
            raise VocabularyError(f"unknown relation symbol {name!r}") from None

    def __contains__(self, name: str) -> bool:
        return name in self.symbols


# ---------------------------------------------------------------------------
# Formula AST
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Top:
    pass


@dataclass(frozen=True)
class Bottom:
    pass


@dataclass(frozen=True)
class Atom:
    rel: str
    args: tuple[str, ...]

    def __post_init__(self):
        object.__setattr__(self, "args", tuple(self.args))
        if not self.args:
            raise ValueError("atoms take at least one argument (arity >= 1)")


@dataclass(frozen=True)
class Equals:
    left: str
    right: str


@dataclass(frozen=True)
class Not:
    body: "Formula"


@dataclass(frozen=True)
class And:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Or:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Implies:
    left: "Formula"
    right: "Formula"


def _check_block_vars(vars: tuple[str, ...]):
    if not vars:
        raise ValueError("quantifier block needs at least one variable")
    if len(set(vars)) != len(vars):
        raise ValueError(f"duplicate variable in quantifier block: {vars}")


@dataclass(frozen=True)
class ExistsBlock:
    vars: tuple[str, ...]
    body: "Formula"

    def __post_init__(self):
        object.__setattr__(self, "vars", tuple(self.vars))
        _check_block_vars(self.vars)


@dataclass(frozen=True)
class ForallBlock:
    vars: tuple[str, ...]
    body: "Formula"

    def __post_init__(self):
        object.__setattr__(self, "vars", tuple(self.vars))
        _check_block_vars(self.vars)


COUNT_COMPARATORS = (">=", "<=", "=")


@dataclass(frozen=True)
class CountExists:
    """Counting quantifier over a single variable: E[cmp k] x. body."""

    cmp: str
    bound: int
    var: str
    body: "Formula"

    def __post_init__(self):
        if self.cmp not in COUNT_COMPARATORS:
            raise ValueError(f"comparator must be one of {COUNT_COMPARATORS}, got {self.cmp!r}")
        if self.bound < 0:
            raise ValueError("counting bound must be >= 0")


Formula = Union[Top, Bottom, Atom, Equals, Not, And, Or, Implies,
                ExistsBlock, ForallBlock, CountExists]

BOOLEAN_NODES = (Not, And, Or, Implies)
QUANTIFIER_NODES = (ExistsBlock, ForallBlock, CountExists)


def children(f: Formula) -> tuple[Formula, ...]:
    """Subformulas of f in child-index order (used for diagnostic paths)."""
    if isinstance(f, Not):
        return (f.body,)
    if isinstance(f, (And, Or, Implies)):
        return (f.left, f.right)
    if isinstance(f, (ExistsBlock, ForallBlock, CountExists)):
        return (f.body,)
    return ()


def subformula_at(f: Formula, path: tuple[int, ...]) -> Formula:
    for i in path:
        f = children(f)[i]
    return f


def walk(f: Formula) -> Iterator[Formula]:
    yield f
    for c in children(f):
        yield from walk(c)


def free_variables(f: Formula) -> frozenset[str]:
    if isinstance(f, Atom):
        return frozenset(f.args)
    if isinstance(f, Equals):
        return frozenset((f.left, f.right))
    if isinstance(f, Not):
        return free_variables(f.body)
    if isinstance(f, (And, Or, Implies)):
        return free_variables(f.left) | free_variables(f.right)
    if isinstance(f, (ExistsBlock, ForallBlock)):
        return free_variables(f.body) - frozenset(f.vars)
    if isinstance(f, CountExists):
        return free_variables(f.body) - frozenset((f.var,))
    return frozenset()


def validate_formula(f: Formula, vocab: Vocabulary) -> None:
    """Check every atom against the vocabulary (name known, arity matches)."""
    for g in walk(f):
        if isinstance(g, Atom):
            arity = vocab.arity(g.rel)
            if arity != len(g.args):
                raise ArityError(
                    f"relation {g.rel!r} has arity {arity}, got {len(g.args)} arguments")


def infer_vocabulary(f: Formula) -> Vocabulary:
    """Derive a vocabulary from atom usage; occurrences must agree on arity."""
    symbols: dict[str, int] = {}
    for g in walk(f):
        if isinstance(g, Atom):
            seen = symbols.setdefault(g.rel, len(g.args))
            if seen != len(g.args):
                raise ArityError(
                    f"relation {g.rel!r} used with arities {seen} and {len(g.args)}")
    return Vocabulary(symbols)


# ---------------------------------------------------------------------------
# Lexer
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class _Token:
    kind: str
    text: str
    line: int
    col: int


# the last four token kinds only occur in the DL/DLR grammars
_PUNCT = [("->", "ARROW"), (">=", "GE"), ("<=", "LE"), ("(", "LPAREN"), (")", "RPAREN"),
          ("[", "LBRACK"), ("]", "RBRACK"), (",", "COMMA"), (".", "DOT"), ("=", "EQ"),
          ("~", "TILDE"), ("&", "AMP"), ("|", "PIPE"),
          ("$", "DOLLAR"), ("/", "SLASH"), (":", "COLON"), ("*", "STAR")]


def _tokenize(text: str) -> list[_Token]:
    toks = []
    line, col, i = 1, 1, 0
    n = len(text)
    while i < n:
        ch = text[i]
        if ch == "\n":
            line += 1
            col = 1
            i += 1
            continue
        if ch.isspace():
            i += 1
            col += 1
            continue
        m = NAME_RE.match(text, i)
        if m:
            toks.append(_Token("NAME", m.group(), line, col))
            col += len(m.group())
            i = m.end()
            continue
        m = re.match(r"[0-9]+", text[i:])
        if m:
            toks.append(_Token("INT", m.group(), line, col))
            col += len(m.group())
            i += len(m.group())
            continue
        for lit, kind in _PUNCT:
            if text.startswith(lit, i):
                toks.append(_Token(kind, lit, line, col))
                col += len(lit)
                i += len(lit)
                break
        else:
            raise ParseError(f"unexpected character {ch!r}", line, col)
    toks.append(_Token("EOF", "", line, col))
    return toks


class _FormulaParser:
    def __init__(self, text: str):
        self.toks = _tokenize(text)
        self.pos = 0

    def peek(self, ahead: int = 0) -> _Token:
        return self.toks[min(self.pos + ahead, len(self.toks) - 1)]

    def next(self) -> _Token:
        t = self.toks[self.pos]
        if t.kind != "EOF":
            self.pos += 1
        return t

    def expect(self, kind: str) -> _Token:
        t = self.peek()
        if t.kind != kind:
            raise ParseError(f"expected {kind}, found {t.text or 'end of input'!r}", t.line, t.col)
        return self.next()

    def error(self, msg: str) -> ParseError:
        t = self.peek()
        return ParseError(msg, t.line, t.col)

    def name(self, what: str) -> _Token:
        t = self.peek()
        if t.kind != "NAME":
            raise self.error(f"expected {what}, found {t.text or 'end of input'!r}")
        if t.text in RESERVED_WORDS:
            raise self.error(f"{t.text!r} is a reserved word and cannot name a {what}")
        return self.next()

    def parse(self) -> Formula:
        f = self.formula()
        t = self.peek()
        if t.kind != "EOF":
            raise self.error(f"unexpected trailing input {t.text!r}")
        return f

    def formula(self) -> Formula:
        t = self.peek()
        if t.kind == "TILDE":
            self.next()
            return Not(self.formula())
        if t.kind == "LPAREN":
            return self.group()
        if t.kind == "NAME":
            if t.text == "true":
                self.next()
                return Top()
            if t.text == "false":
                self.next()
                return Bottom()
            if t.text == "E" and self.peek(1).kind == "LBRACK":
                return self.counting()
            if t.text in ("E", "A"):
                return self.block()
            return self.atom_or_equality()
        raise self.error(f"expected a formula, found {t.text or 'end of input'!r}")

    def group(self) -> Formula:
        self.expect("LPAREN")
        f = self.formula()
        t = self.peek()
        if t.kind == "RPAREN":
            self.next()
            return f
        op = t.kind
        if op not in ("AMP", "PIPE", "ARROW"):
            raise self.error(f"expected '&', '|', '->' or ')', found {t.text!r}")
        ctor = {"AMP": And, "PIPE": Or, "ARROW": Implies}[op]
        while self.peek().kind == op:
            self.next()
            f = ctor(f, self.formula())
        t = self.peek()
        if t.kind in ("AMP", "PIPE", "ARROW"):
            raise self.error("mixed operators in one group need explicit parentheses")
        self.expect("RPAREN")
        return f

    def block(self) -> Formula:
        quant = self.next().text
        variables = []
        while self.peek().kind == "NAME" and self.peek().text not in RESERVED_WORDS:
            tok = self.next()
            if tok.text in variables:
                raise ParseError(f"duplicate variable {tok.text!r} in quantifier block",
                                 tok.line, tok.col)
            variables.append(tok.text)
        if not variables:
            raise self.error("quantifier block needs at least one variable")
        self.expect("DOT")
        body = self.formula()
        node = ExistsBlock if quant == "E" else ForallBlock
        return node(tuple(variables), body)

    def counting(self) -> Formula:
        self.next()  # E
        self.expect("LBRACK")
        t = self.peek()
        if t.kind == "GE":
            cmp = ">="
        elif t.kind == "LE":
            cmp = "<="
        elif t.kind == "EQ":
            cmp = "="
        else:
            raise self.error(f"expected '>=', '<=' or '=', found {t.text!r}")
        self.next()
        bound = int(self.expect("INT").text)
        self.expect("RBRACK")
        var = self.name("variable").text
        self.expect("DOT")
        return CountExists(cmp, bound, var, self.formula())

    def atom_or_equality(self) -> Formula:
        t = self.name("relation or variable")
        if self.peek().kind == "LPAREN":
            self.next()
            args = [self.name("variable").text]
            while self.peek().kind == "COMMA":
                self.next()
                args.append(self.name("variable").text)
            self.expect("RPAREN")
            return Atom(t.text, tuple(args))
        if self.peek().kind == "EQ":
            self.next()
            right = self.name("variable")
            return Equals(t.text, right.text)
        raise self.error(f"expected '(' or '=' after {t.text!r}")


def parse_formula(text: str, vocab: Vocabulary | None = None) -> Formula:
    """Parse a formula; when a vocabulary is given, atoms are checked
    against it (unknown symbol or arity mismatch raises)."""
    f = _FormulaParser(text).parse()
    if vocab is not None:
        validate_formula(f, vocab)
    return f


# ---------------------------------------------------------------------------
# Printer
# ---------------------------------------------------------------------------

def print_formula(f: Formula) -> str:
    """Render a formula so that ``parse_formula(print_formula(f)) == f``."""
    if isinstance(f, Top):
        return "true"
    if isinstance(f, Bottom):
        return "false"
    if isinstance(f, Atom):
        return f"{f.rel}({','.join(f.args)})"
    if isinstance(f, Equals):
        return f"{f.left} = {f.right}"
    if isinstance(f, Not):
        body = print_formula(f.body)
        if isinstance(f.body, Equals):
            body = f"({body})"
        return f"~{body}"
    if isinstance(f, And):
        return f"({print_formula(f.left)} & {print_formula(f.right)})"
    if isinstance(f, Or):
        return f"({print_formula(f.left)} | {print_formula(f.right)})"
    if isinstance(f, Implies):
        return f"({print_formula(f.left)} -> {print_formula(f.right)})"
    if isinstance(f, ExistsBlock):
        return f"E {' '.join(f.vars)}. {print_formula(f.body)}"
    if isinstance(f, ForallBlock):
        return f"A {' '.join(f.vars)}. {print_formula(f.body)}"
    if isinstance(f, CountExists):
        return f"E[{f.cmp}{f.bound}] {f.var}. {print_formula(f.body)}"
    raise TypeError(f"not a formula: {f!r}")
