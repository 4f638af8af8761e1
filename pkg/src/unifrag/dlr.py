"""n-ary description logic with selections, binary projections, relational
composition, union, reflexive-transitive closure and number restrictions.

Text grammar::

    role    ::= 'top' INT | NAME | '($' i '/' n ':' concept ')'
              | '~' role | '(' role '&' role ')'
    binrel  ::= 'eps' | role '|$' i ',$' j
              | '(' binrel 'o' binrel ')' | '(' binrel 'u' binrel ')'
              | binrel '*'
    concept ::= 'top1' | NAME | '~' concept | '(' concept '&' concept ')'
              | 'exists' binrel '.' concept | 'exists[$' i ']' role
              | '(<=' k '[$' i ']' role ')'

The built-in n-ary top relation admits two conventions, selected by the
``topn`` argument of the extension functions:

* ``"delta"`` (default): the n-th power of the domain;
* ``"explicit"``: a relation named ``top<n>`` read from the structure,
  which must cover every declared n-ary relation.

Role negation is always relative to the top relation of the role's arity,
unlike the absolute role negation of the surjection-based logic in
:mod:`unifrag.dl`.  The number restriction counts tuples: the extension of
``(<=k [$i] R)`` holds the elements occurring at most k times in position
i over all tuples of R.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Union

from .errors import ArityError, ParseError, StructureError, VocabularyError
from .structures import Structure
from .syntax import Vocabulary, _tokenize

TOPN_MODES = ("delta", "explicit")


def topn_relation_name(n: int) -> str:
    return f"top{n}"


# ---------------------------------------------------------------------------
# ASTs
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class TopN:
    n: int

    def __post_init__(self):
        if self.n < 2:
            raise ValueError("top_n needs n >= 2")


@dataclass(frozen=True)
class AtomicRole:
    name: str


@dataclass(frozen=True)
class Sel:
    """($i/n : C): the n-ary top tuples whose i-th component lies in C."""

    i: int
    n: int
    concept: "DlrConcept"

    def __post_init__(self):
        if not (2 <= self.n and 1 <= self.i <= self.n):
            raise ValueError(f"selection needs 1 <= i <= n and n >= 2, got i={self.i}, n={self.n}")


@dataclass(frozen=True)
class NotR:
    role: "DlrRole"


@dataclass(frozen=True)
class AndR:
    left: "DlrRole"
    right: "DlrRole"


DlrRole = Union[TopN, AtomicRole, Sel, NotR, AndR]


@dataclass(frozen=True)
class Eps:
    pass


@dataclass(frozen=True)
class Proj:
    """R|$i,$j: the pairs (t_i, t_j) over the tuples t of the role."""

    role: DlrRole
    i: int
    j: int

    def __post_init__(self):
        if self.i < 1 or self.j < 1:
            raise ValueError("projection indices are 1-based")


@dataclass(frozen=True)
class Comp:
    left: "DlrBinRel"
    right: "DlrBinRel"


@dataclass(frozen=True)
class UnionE:
    left: "DlrBinRel"
    right: "DlrBinRel"


@dataclass(frozen=True)
class Star:
    body: "DlrBinRel"


DlrBinRel = Union[Eps, Proj, Comp, UnionE, Star]


@dataclass(frozen=True)
class Top1:
    pass


@dataclass(frozen=True)
class AtomicConcept:
    name: str


@dataclass(frozen=True)
class NotC:
    body: "DlrConcept"


@dataclass(frozen=True)
class AndC:
    left: "DlrConcept"
    right: "DlrConcept"


@dataclass(frozen=True)
class ExistsE:
    rel: DlrBinRel
    concept: "DlrConcept"


@dataclass(frozen=True)
class ExistsProj:
    """exists[$i] R: elements occurring at position i of some tuple of R."""

    i: int
    role: DlrRole

    def __post_init__(self):
        if self.i < 1:
            raise ValueError("position index is 1-based")


@dataclass(frozen=True)
class AtMost:
    """(<=k [$i] R): elements occurring at position i of at most k tuples."""

    k: int
    i: int
    role: DlrRole

    def __post_init__(self):
        if self.k < 0:
            raise ValueError("number restriction bound must be >= 0")
        if self.i < 1:
            raise ValueError("position index is 1-based")


DlrConcept = Union[Top1, AtomicConcept, NotC, AndC, ExistsE, ExistsProj, AtMost]


def or_dlr(c1: DlrConcept, c2: DlrConcept) -> DlrConcept:
    return NotC(AndC(NotC(c1), NotC(c2)))


# ---------------------------------------------------------------------------
# Extension semantics
# ---------------------------------------------------------------------------

def dlr_role_arity(r: DlrRole, vocab: Vocabulary) -> int:
    if isinstance(r, TopN):
        return r.n
    if isinstance(r, AtomicRole):
        arity = vocab.arity(r.name)
        if arity < 2:
            raise VocabularyError(f"{r.name!r} has arity {arity}; roles need arity >= 2")
        return arity
    if isinstance(r, Sel):
        return r.n
    if isinstance(r, NotR):
        return dlr_role_arity(r.role, vocab)
    if isinstance(r, AndR):
        a1 = dlr_role_arity(r.left, vocab)
        a2 = dlr_role_arity(r.right, vocab)
        if a1 != a2:
            raise ArityError(f"role intersection of arities {a1} and {a2}")
        return a1
    raise TypeError(f"not a role: {r!r}")


def _topn_extension(s: Structure, n: int, topn: str) -> frozenset[tuple[str, ...]]:
    if topn == "delta":
        return frozenset(product(s.domain, repeat=n))
    if topn == "explicit":
        name = topn_relation_name(n)
        if name not in s.vocabulary:
            raise StructureError(
                f"explicit top mode needs a declared relation {name!r}")
        if s.vocabulary.arity(name) != n:
            raise StructureError(f"{name!r} must have arity {n}")
        ext = s.relations[name]
        for rel, arity in s.vocabulary.symbols.items():
            if arity == n and rel != name and not s.relations[rel] <= ext:
                raise StructureError(
                    f"{name!r} does not cover relation {rel!r}")
        return ext
    raise ValueError(f"topn mode must be one of {TOPN_MODES}, got {topn!r}")


def dlr_role_extension(s: Structure, r: DlrRole, topn: str = "delta") -> frozenset[tuple[str, ...]]:
    vocab = s.vocabulary
    if isinstance(r, TopN):
        return _topn_extension(s, r.n, topn)
    if isinstance(r, AtomicRole):
        dlr_role_arity(r, vocab)
        return s.relations[r.name]
    if isinstance(r, Sel):
        good = dlr_concept_extension(s, r.concept, topn)
        top = _topn_extension(s, r.n, topn)
        return frozenset(t for t in top if t[r.i - 1] in good)
    if isinstance(r, NotR):
        n = dlr_role_arity(r.role, vocab)
        return _topn_extension(s, n, topn) - dlr_role_extension(s, r.role, topn)
    if isinstance(r, AndR):
        dlr_role_arity(r, vocab)
        return dlr_role_extension(s, r.left, topn) & dlr_role_extension(s, r.right, topn)
    raise TypeError(f"not a role: {r!r}")


def dlr_binrel_extension(s: Structure, e: DlrBinRel, topn: str = "delta") -> frozenset[tuple[str, str]]:
    if isinstance(e, Eps):
        return frozenset((d, d) for d in s.domain)
    if isinstance(e, Proj):
        n = dlr_role_arity(e.role, s.vocabulary)
        if e.i > n or e.j > n:
            raise ArityError(
                f"projection |${e.i},${e.j} out of range for a role of arity {n}")
        ext = dlr_role_extension(s, e.role, topn)
        return frozenset((t[e.i - 1], t[e.j - 1]) for t in ext)
    if isinstance(e, Comp):
        left = dlr_binrel_extension(s, e.left, topn)
        right = dlr_binrel_extension(s, e.right, topn)
        return frozenset((a, c) for a, b in left for b2, c in right if b == b2)
    if isinstance(e, UnionE):
        return dlr_binrel_extension(s, e.left, topn) | dlr_binrel_extension(s, e.right, topn)
    if isinstance(e, Star):
        # least reflexive-transitive relation containing the body
        closure = set((d, d) for d in s.domain)
        closure |= dlr_binrel_extension(s, e.body, topn)
        while True:
            step = {(a, c) for a, b in closure for b2, c in closure if b == b2}
            if step <= closure:
                return frozenset(closure)
            closure |= step
    raise TypeError(f"not a binary relation term: {e!r}")


def dlr_concept_extension(s: Structure, c: DlrConcept, topn: str = "delta") -> frozenset[str]:
    vocab = s.vocabulary
    if isinstance(c, Top1):
        return frozenset(s.domain)
    if isinstance(c, AtomicConcept):
        arity = vocab.arity(c.name)
        if arity != 1:
            raise VocabularyError(
                f"{c.name!r} has arity {arity}; atomic concepts must be unary")
        return frozenset(t[0] for t in s.relations[c.name])
    if isinstance(c, NotC):
        return frozenset(s.domain) - dlr_concept_extension(s, c.body, topn)
    if isinstance(c, AndC):
        return dlr_concept_extension(s, c.left, topn) & dlr_concept_extension(s, c.right, topn)
    if isinstance(c, ExistsE):
        ext = dlr_binrel_extension(s, c.rel, topn)
        good = dlr_concept_extension(s, c.concept, topn)
        return frozenset(u for u, v in ext if v in good)
    if isinstance(c, ExistsProj):
        n = dlr_role_arity(c.role, vocab)
        if c.i > n:
            raise ArityError(f"position ${c.i} out of range for a role of arity {n}")
        return frozenset(t[c.i - 1] for t in dlr_role_extension(s, c.role, topn))
    if isinstance(c, AtMost):
        n = dlr_role_arity(c.role, vocab)
        if c.i > n:
            raise ArityError(f"position ${c.i} out of range for a role of arity {n}")
        counts: dict[str, int] = {}
        for t in dlr_role_extension(s, c.role, topn):
            counts[t[c.i - 1]] = counts.get(t[c.i - 1], 0) + 1
        return frozenset(d for d in s.domain if counts.get(d, 0) <= c.k)
    raise TypeError(f"not a concept: {c!r}")


def contains_star_or_atmost(c: DlrConcept) -> bool:
    """True when the concept uses closure or number restrictions, the two
    operators the composition-free translation refuses."""

    def role(r: DlrRole) -> bool:
        if isinstance(r, Sel):
            return concept(r.concept)
        if isinstance(r, NotR):
            return role(r.role)
        if isinstance(r, AndR):
            return role(r.left) or role(r.right)
        return False

    def binrel(e: DlrBinRel) -> bool:
        if isinstance(e, Star):
            return True
        if isinstance(e, Proj):
            return role(e.role)
        if isinstance(e, (Comp, UnionE)):
            return binrel(e.left) or binrel(e.right)
        return False

    def concept(d: DlrConcept) -> bool:
        if isinstance(d, AtMost):
            return True
        if isinstance(d, NotC):
            return concept(d.body)
        if isinstance(d, AndC):
            return concept(d.left) or concept(d.right)
        if isinstance(d, ExistsE):
            return binrel(d.rel) or concept(d.concept)
        if isinstance(d, ExistsProj):
            return role(d.role)
        return False

    return concept(c)


# ---------------------------------------------------------------------------
# Parsing (backtracking recursive descent) and printing
# ---------------------------------------------------------------------------

_RESERVED = frozenset({"eps", "exists", "o", "u"})


class _DlrParser:
    def __init__(self, text: str):
        self.toks = _tokenize(text)
        self.pos = 0

    def peek(self, ahead=0):
        return self.toks[min(self.pos + ahead, len(self.toks) - 1)]

    def next(self):
        t = self.toks[self.pos]
        if t.kind != "EOF":
            self.pos += 1
        return t

    def expect(self, kind, text=None):
        t = self.peek()
        if t.kind != kind or (text is not None and t.text != text):
            raise ParseError(f"expected {text or kind}, found {t.text or 'end of input'!r}",
                             t.line, t.col)
        return self.next()

    def error(self, msg):
        t = self.peek()
        return ParseError(msg, t.line, t.col)

    def attempt(self, fn):
        saved = self.pos
        try:
            return fn()
        except ParseError:
            self.pos = saved
            return None

    # concepts ---------------------------------------------------------------

    def concept(self) -> DlrConcept:
        t = self.peek()
        if t.kind == "TILDE":
            self.next()
            return NotC(self.concept())
        if t.kind == "NAME" and t.text == "top1":
            self.next()
            return Top1()
        if t.kind == "NAME" and t.text == "exists":
            self.next()
            if self.peek().kind == "LBRACK":
                self.next()
                self.expect("DOLLAR")
                i = int(self.expect("INT").text)
                self.expect("RBRACK")
                return ExistsProj(i, self.role())
            e = self.binrel()
            self.expect("DOT")
            return ExistsE(e, self.concept())
        if t.kind == "LPAREN":
            if self.peek(1).kind == "LE":
                self.next()
                self.next()
                k = int(self.expect("INT").text)
                self.expect("LBRACK")
                self.expect("DOLLAR")
                i = int(self.expect("INT").text)
                self.expect("RBRACK")
                r = self.role()
                self.expect("RPAREN")
                return AtMost(k, i, r)
            self.next()
            c = self.concept()
            while self.peek().kind == "AMP":
                self.next()
                c = AndC(c, self.concept())
            self.expect("RPAREN")
            return c
        if t.kind == "NAME" and t.text not in _RESERVED:
            self.next()
            return AtomicConcept(t.text)
        raise self.error(f"expected a concept, found {t.text or 'end of input'!r}")

    # binary relation terms ----------------------------------------------------

    def binrel(self) -> DlrBinRel:
        e = self.binrel_prim()
        while self.peek().kind == "STAR":
            self.next()
            e = Star(e)
        return e

    def binrel_prim(self) -> DlrBinRel:
        t = self.peek()
        if t.kind == "NAME" and t.text == "eps":
            self.next()
            return Eps()
        if t.kind == "LPAREN":
            combo = self.attempt(self.binrel_combo)
            if combo is not None:
                return combo
            return self.projection()
        return self.projection()

    def binrel_combo(self) -> DlrBinRel:
        self.expect("LPAREN")
        left = self.binrel()
        t = self.peek()
        if t.kind == "NAME" and t.text in ("o", "u"):
            self.next()
            right = self.binrel()
            self.expect("RPAREN")
            return Comp(left, right) if t.text == "o" else UnionE(left, right)
        raise self.error("expected 'o' or 'u'")

    def projection(self) -> DlrBinRel:
        r = self.role()
        self.expect("PIPE")
        self.expect("DOLLAR")
        i = int(self.expect("INT").text)
        self.expect("COMMA")
        self.expect("DOLLAR")
        j = int(self.expect("INT").text)
        return Proj(r, i, j)

    # roles --------------------------------------------------------------------

    def role(self) -> DlrRole:
        t = self.peek()
        if t.kind == "TILDE":
            self.next()
            return NotR(self.role())
        if t.kind == "NAME" and t.text.startswith("top") and t.text[3:].isdigit():
            self.next()
            n = int(t.text[3:])
            if n < 2:
                raise ParseError("top_n roles need n >= 2 (use top1 as a concept)",
                                 t.line, t.col)
            return TopN(n)
        if t.kind == "LPAREN":
            if self.peek(1).kind == "DOLLAR":
                self.next()
                self.next()
                i = int(self.expect("INT").text)
                self.expect("SLASH")
                n = int(self.expect("INT").text)
                self.expect("COLON")
                c = self.concept()
                self.expect("RPAREN")
                try:
                    return Sel(i, n, c)
                except ValueError as e:
                    raise self.error(str(e)) from None
            self.next()
            r = self.role()
            while self.peek().kind == "AMP":
                self.next()
                r = AndR(r, self.role())
            self.expect("RPAREN")
            return r
        if t.kind == "NAME" and t.text not in _RESERVED:
            self.next()
            return AtomicRole(t.text)
        raise self.error(f"expected a role, found {t.text or 'end of input'!r}")


def parse_dlr_concept(text: str) -> DlrConcept:
    p = _DlrParser(text)
    c = p.concept()
    t = p.peek()
    if t.kind != "EOF":
        raise ParseError(f"unexpected trailing input {t.text!r}", t.line, t.col)
    return c


def print_dlr_role(r: DlrRole) -> str:
    if isinstance(r, TopN):
        return f"top{r.n}"
    if isinstance(r, AtomicRole):
        return r.name
    if isinstance(r, Sel):
        return f"(${r.i}/{r.n}:{print_dlr_concept(r.concept)})"
    if isinstance(r, NotR):
        return f"~{print_dlr_role(r.role)}"
    if isinstance(r, AndR):
        return f"({print_dlr_role(r.left)} & {print_dlr_role(r.right)})"
    raise TypeError(f"not a role: {r!r}")


def print_dlr_binrel(e: DlrBinRel) -> str:
    if isinstance(e, Eps):
        return "eps"
    if isinstance(e, Proj):
        return f"{print_dlr_role(e.role)}|${e.i},${e.j}"
    if isinstance(e, Comp):
        return f"({print_dlr_binrel(e.left)} o {print_dlr_binrel(e.right)})"
    if isinstance(e, UnionE):
        return f"({print_dlr_binrel(e.left)} u {print_dlr_binrel(e.right)})"
    if isinstance(e, Star):
        return f"{print_dlr_binrel(e.body)}*"
    raise TypeError(f"not a binary relation term: {e!r}")


def print_dlr_concept(c: DlrConcept) -> str:
    if isinstance(c, Top1):
        return "top1"
    if isinstance(c, AtomicConcept):
        return c.name
    if isinstance(c, NotC):
        return f"~{print_dlr_concept(c.body)}"
    if isinstance(c, AndC):
        return f"({print_dlr_concept(c.left)} & {print_dlr_concept(c.right)})"
    if isinstance(c, ExistsE):
        return f"exists {print_dlr_binrel(c.rel)} . {print_dlr_concept(c.concept)}"
    if isinstance(c, ExistsProj):
        return f"exists[${c.i}] {print_dlr_role(c.role)}"
    if isinstance(c, AtMost):
        return f"(<={c.k} [${c.i}] {print_dlr_role(c.role)})"
    raise TypeError(f"not a concept: {c!r}")
