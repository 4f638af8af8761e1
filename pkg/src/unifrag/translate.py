"""Semantics-preserving translations between the first-order fragments and
the two description logics.

* ``to_dnf_block``: put a quantified Boolean combination into disjunctive
  normal form and distribute the quantifier prefix, splitting each
  disjunct into its uniform higher-arity part and its unary parts.
* ``fu1_to_dl``: formulas with at most one free variable into concepts of
  the surjection logic;
* ``dl_to_fu1``: the standard translation back;
* ``eliminate_comp_union`` and ``dlr0_to_fu1``: the closure-free,
  counting-free fragment of the n-ary DL into first-order form, by first
  rewriting compositions and unions away and then translating projections,
  selections and position existentials.

Every output is checked against the target fragment and against extension
oracles in the test suite; no rewrite is trusted on its own.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import count
from typing import Iterator, Optional, Union

from . import dl, dlr
from .errors import FragmentGateError, VocabularyError
from .fragments import FragmentId, check_fragment
from .syntax import (And, Atom, Bottom, Equals, ExistsBlock, ForallBlock,
                     Formula, Implies, Not, Or, Top, Vocabulary,
                     free_variables)

# ---------------------------------------------------------------------------
# DNF blocks
# ---------------------------------------------------------------------------

LeafAtom = Union[Atom, Equals]


@dataclass(frozen=True)
class Literal:
    positive: bool
    atom: LeafAtom

    def to_formula(self) -> Formula:
        return self.atom if self.positive else Not(self.atom)


@dataclass(frozen=True)
class Disjunct:
    """One conjunction of the distributed normal form.

    ``relation_literals`` all share a single variable set (the uniform
    part); ``equality_literals`` are equalities between distinct
    variables; ``unary_parts`` pairs each remaining conjunct with its free
    variable (None for sentences).
    """

    relation_literals: tuple[Literal, ...]
    equality_literals: tuple[Literal, ...]
    unary_parts: tuple[tuple[Optional[str], Formula], ...]

    def uniform_variables(self) -> frozenset[str]:
        out: frozenset[str] = frozenset()
        for lit in self.relation_literals + self.equality_literals:
            out |= _leaf_vars(lit.atom)
        return out


@dataclass(frozen=True)
class DnfBlock:
    variables: tuple[str, ...]
    free_var: Optional[str]
    disjuncts: tuple[Disjunct, ...]


def _leaf_vars(a: LeafAtom) -> frozenset[str]:
    if isinstance(a, Atom):
        return frozenset(a.args)
    return frozenset((a.left, a.right))


def _dnf(f: Formula, positive: bool) -> list[list[tuple[bool, Formula]]]:
    """Disjunctive normal form over the Boolean skeleton; quantified
    subformulas and atoms stay opaque leaves.  Returns a list of
    conjunctions, each a list of signed leaves."""
    if isinstance(f, Not):
        return _dnf(f.body, not positive)
    if isinstance(f, Top):
        return [[]] if positive else []
    if isinstance(f, Bottom):
        return [] if positive else [[]]
    if isinstance(f, And) and positive or isinstance(f, Or) and not positive:
        left = _dnf(f.left, positive)
        right = _dnf(f.right, positive)
        return [a + b for a in left for b in right]
    if isinstance(f, Or) and positive or isinstance(f, And) and not positive:
        return _dnf(f.left, positive) + _dnf(f.right, positive)
    if isinstance(f, Implies):
        if positive:
            return _dnf(f.left, False) + _dnf(f.right, True)
        return [a + b for a in _dnf(f.left, True) for b in _dnf(f.right, False)]
    return [[(positive, f)]]


def _classify(conj: list[tuple[bool, Formula]], block_vars: frozenset[str]) -> Disjunct:
    rel_lits: list[Literal] = []
    eq_lits: list[Literal] = []
    chis: list[tuple[Optional[str], Formula]] = []
    seen = set()
    for positive, leaf in conj:
        key = (positive, leaf)
        if key in seen:
            continue
        seen.add(key)
        if isinstance(leaf, Atom) and len(set(leaf.args)) >= 2:
            rel_lits.append(Literal(positive, leaf))
        elif isinstance(leaf, Equals) and leaf.left != leaf.right:
            eq_lits.append(Literal(positive, leaf))
        else:
            fv = free_variables(leaf)
            if len(fv) > 1:
                raise FragmentGateError(
                    f"subformula with free variables {sorted(fv)} cannot appear "
                    f"inside a uniform block")
            var = next(iter(fv)) if fv else None
            chis.append((var, leaf if positive else Not(leaf)))
    sets = {frozenset(l.atom.args) for l in rel_lits}
    if len(sets) > 1:
        raise FragmentGateError(
            "input violates uniformity: higher-arity literals use variable sets "
            + ", ".join(sorted("{%s}" % ",".join(sorted(s)) for s in sets)))
    return Disjunct(tuple(rel_lits), tuple(eq_lits), tuple(chis))


def to_dnf_block(f: Formula) -> DnfBlock:
    """Distribute an existential block over the disjunctive normal form of
    its body.  Each disjunct is saturated: every variable of the uniform
    part carries at least one unary conjunct (true() when nothing else)."""
    if not isinstance(f, ExistsBlock):
        raise FragmentGateError("to_dnf_block expects an existential block")
    leftover = free_variables(f)
    if len(leftover) > 1:
        raise FragmentGateError(
            f"block leaves {len(leftover)} variables free, so it is not "
            f"one-dimensional: {sorted(leftover)}")
    free_var = next(iter(leftover)) if leftover else None
    disjuncts = []
    for conj in _dnf(f.body, True):
        d = _classify(conj, frozenset(f.vars))
        covered = {v for v, _ in d.unary_parts}
        padding = tuple((v, Top()) for v in sorted(d.uniform_variables() - covered))
        disjuncts.append(Disjunct(d.relation_literals, d.equality_literals,
                                  d.unary_parts + padding))
    return DnfBlock(f.vars, free_var, tuple(disjuncts))


# ---------------------------------------------------------------------------
# FU1  ->  DL
# ---------------------------------------------------------------------------

def _and_c(parts: list[dl.Concept]) -> dl.Concept:
    real = [p for p in parts if not isinstance(p, dl.TopC)]
    if not real:
        return dl.TopC()
    out = real[0]
    for p in real[1:]:
        out = dl.AndC(out, p)
    return out


def _or_c(parts: list[dl.Concept]) -> dl.Concept:
    if not parts:
        return dl.NotC(dl.TopC())
    out = parts[0]
    for p in parts[1:]:
        out = dl.or_concept(out, p)
    return out


def _identity_map(k: int) -> tuple[int, ...]:
    return tuple(range(1, k + 1))


def _literal_role(lit: Literal, ys: tuple[str, ...]) -> dl.RoleTerm:
    atom = lit.atom
    if isinstance(atom, Equals):
        role: dl.RoleTerm = dl.Epsilon()
    else:
        sigma = tuple(ys.index(v) + 1 for v in atom.args)
        if sigma == _identity_map(len(ys)):
            role = dl.AtomicRole(atom.rel)
        else:
            role = dl.Apply(dl.Surjection(sigma), dl.AtomicRole(atom.rel))
    return role if lit.positive else dl.NotRole(role)


def fu1_to_dl(f: Formula) -> dl.Concept:
    """Translate a formula with at most one free variable into an
    extension-equal concept.  The input must pass the FU1 checker."""
    diag = check_fragment(f, FragmentId.FU1)
    if not diag.verdict:
        first = diag.violations[0]
        raise FragmentGateError(
            f"not an FU1 formula: {first.kind.value} at path {list(first.path)}: "
            f"{first.message}")
    if len(free_variables(f)) > 1:
        raise FragmentGateError("concept translation needs at most one free variable")
    return _concept_of(f)


def _concept_of(f: Formula) -> dl.Concept:
    if isinstance(f, Top):
        return dl.TopC()
    if isinstance(f, Bottom):
        return dl.NotC(dl.TopC())
    if isinstance(f, Atom):
        if len(set(f.args)) != 1:
            raise FragmentGateError("higher-arity atom outside a quantifier block")
        if len(f.args) == 1:
            return dl.AtomicConcept(f.rel)
        # R(x,...,x): the diagonal, via the identity role
        sigma = dl.Surjection((1,) + (2,) * (len(f.args) - 1))
        diag_role = dl.AndRole(dl.Epsilon(), dl.Apply(sigma, dl.AtomicRole(f.rel)))
        return dl.ExistsRole(diag_role, (dl.TopC(),))
    if isinstance(f, Equals):
        if f.left != f.right:
            raise FragmentGateError("free-standing equality is not an FU1 formula")
        return dl.TopC()
    if isinstance(f, Not):
        return dl.NotC(_concept_of(f.body))
    if isinstance(f, And):
        return _and_c([_concept_of(f.left), _concept_of(f.right)])
    if isinstance(f, Or):
        return _or_c([_concept_of(f.left), _concept_of(f.right)])
    if isinstance(f, Implies):
        return _or_c([dl.NotC(_concept_of(f.left)), _concept_of(f.right)])
    if isinstance(f, ExistsBlock):
        return _block_concept(f)
    if isinstance(f, ForallBlock):
        return dl.NotC(_block_concept(ExistsBlock(f.vars, Not(f.body))))
    raise FragmentGateError("counting quantifiers have no concept translation")


def _block_concept(f: ExistsBlock) -> dl.Concept:
    block = to_dnf_block(f)
    return _or_c([_disjunct_concept(d, block.free_var) for d in block.disjuncts])


def _disjunct_concept(d: Disjunct, x0: Optional[str]) -> dl.Concept:
    uniform = d.relation_literals + d.equality_literals
    chis: dict[Optional[str], list[Formula]] = {}
    for var, chi in d.unary_parts:
        chis.setdefault(var, []).append(chi)

    def chi_concept(var: Optional[str]) -> dl.Concept:
        return _and_c([_concept_of(g) for g in chis.get(var, [])])

    conjuncts: list[dl.Concept] = []
    covered: set[Optional[str]] = set()
    if uniform:
        sets = {_leaf_vars(l.atom) for l in uniform}
        if len(sets) != 1:
            raise FragmentGateError(
                "equality literals do not match the block's uniform variable set")
        (xset,) = sets
        if x0 is not None and x0 in xset:
            ys = (x0,) + tuple(sorted(xset - {x0}))
        else:
            ys = tuple(sorted(xset))
        role = None
        for lit in uniform:
            piece = _literal_role(lit, ys)
            role = piece if role is None else dl.AndRole(role, piece)
        head = _and_c([chi_concept(ys[0]), dl.ExistsRole(role, tuple(chi_concept(y) for y in ys[1:]))])
        covered.update(ys)
        if x0 is not None and x0 in xset:
            conjuncts.append(head)
        else:
            conjuncts.append(dl.ExistsRole(dl.universal_role(), (head,)))
    for var in sorted(chis, key=lambda v: (v is None, v or "")):
        if var in covered:
            continue
        c = chi_concept(var)
        if var is None or var == x0:
            conjuncts.append(c)
        else:
            conjuncts.append(dl.ExistsRole(dl.universal_role(), (c,)))
    return _and_c(conjuncts)


# ---------------------------------------------------------------------------
# DL  ->  FU1
# ---------------------------------------------------------------------------

def dl_to_fu1(c: dl.Concept, vocab: Vocabulary) -> Formula:
    """Standard translation; the result has the single free variable x
    (degenerate subterms denoting the empty relation may drop it)."""
    return _formula_of(c, "x", count(1), vocab)


def _and_f(parts: list[Formula]) -> Formula:
    real = [p for p in parts if not isinstance(p, Top)]
    if not real:
        return Top()
    out = real[0]
    for p in real[1:]:
        out = And(out, p)
    return out


def _formula_of(c: dl.Concept, x: str, ctr: Iterator[int], vocab: Vocabulary) -> Formula:
    if isinstance(c, dl.TopC):
        return Equals(x, x)
    if isinstance(c, dl.AtomicConcept):
        if vocab.arity(c.name) != 1:
            raise VocabularyError(f"{c.name!r} is not a unary symbol")
        return Atom(c.name, (x,))
    if isinstance(c, dl.NotC):
        return Not(_formula_of(c.body, x, ctr, vocab))
    if isinstance(c, dl.AndC):
        return And(_formula_of(c.left, x, ctr, vocab),
                   _formula_of(c.right, x, ctr, vocab))
    if isinstance(c, dl.ExistsRole):
        n = dl.role_arity(c.role, vocab)
        if n != len(c.args) + 1:
            raise VocabularyError(
                f"existential over a role of arity {n} needs {n - 1} argument "
                f"concepts, got {len(c.args)}")
        ys = tuple(f"y{next(ctr)}" for _ in range(n - 1))
        parts = [_role_formula(c.role, (x,) + ys, vocab)]
        parts += [_formula_of(arg, y, ctr, vocab) for arg, y in zip(c.args, ys)]
        return ExistsBlock(ys, _and_f(parts))
    raise TypeError(f"not a concept: {c!r}")


def _role_formula(r: dl.RoleTerm, tup: tuple[str, ...], vocab: Vocabulary) -> Formula:
    if isinstance(r, dl.AtomicRole):
        return Atom(r.name, tup)
    if isinstance(r, dl.Epsilon):
        return Equals(tup[0], tup[1])
    if isinstance(r, dl.NotRole):
        return Not(_role_formula(r.role, tup, vocab))
    if isinstance(r, dl.AndRole):
        if dl.role_arity(r.left, vocab) != dl.role_arity(r.right, vocab):
            return Bottom()
        return And(_role_formula(r.left, tup, vocab),
                   _role_formula(r.right, tup, vocab))
    if isinstance(r, dl.Apply):
        if r.srj.source != dl.role_arity(r.role, vocab):
            return Bottom()
        return _role_formula(r.role, tuple(tup[i - 1] for i in r.srj.map), vocab)
    raise TypeError(f"not a role term: {r!r}")


# ---------------------------------------------------------------------------
# DLR without star and counting  ->  FU1
# ---------------------------------------------------------------------------

def _gate_dlr0(c: dlr.DlrConcept):
    if dlr.contains_star_or_atmost(c):
        raise FragmentGateError(
            "reflexive-transitive closure and number restrictions have no "
            "translation into the uniform fragment; refusing")


def eliminate_comp_union(c: dlr.DlrConcept) -> dlr.DlrConcept:
    """Rewrite away every composition and union of binary relation terms,
    using distribution over union and the unnesting of compositions under
    the binary existential."""
    _gate_dlr0(c)
    return _elim_concept(c)


def _elim_concept(c: dlr.DlrConcept) -> dlr.DlrConcept:
    if isinstance(c, (dlr.Top1, dlr.AtomicConcept)):
        return c
    if isinstance(c, dlr.NotC):
        return dlr.NotC(_elim_concept(c.body))
    if isinstance(c, dlr.AndC):
        return dlr.AndC(_elim_concept(c.left), _elim_concept(c.right))
    if isinstance(c, dlr.ExistsProj):
        return dlr.ExistsProj(c.i, _elim_role(c.role))
    if isinstance(c, dlr.ExistsE):
        body = _elim_concept(c.concept)
        alternatives = []
        for chain in _union_of_chains(c.rel):
            out = body
            for step in reversed(chain):
                out = dlr.ExistsE(step, out)
            alternatives.append(out)
        folded = alternatives[0]
        for alt in alternatives[1:]:
            folded = dlr.or_dlr(folded, alt)
        return folded
    raise TypeError(f"unexpected concept in composition elimination: {c!r}")


def _elim_role(r: dlr.DlrRole) -> dlr.DlrRole:
    if isinstance(r, dlr.Sel):
        return dlr.Sel(r.i, r.n, _elim_concept(r.concept))
    if isinstance(r, dlr.NotR):
        return dlr.NotR(_elim_role(r.role))
    if isinstance(r, dlr.AndR):
        return dlr.AndR(_elim_role(r.left), _elim_role(r.right))
    return r


def _union_of_chains(e: dlr.DlrBinRel) -> list[list[dlr.DlrBinRel]]:
    """A binary relation term as a union of composition chains of atomic
    steps (identity or projection)."""
    if isinstance(e, dlr.Eps):
        return [[e]]
    if isinstance(e, dlr.Proj):
        return [[dlr.Proj(_elim_role(e.role), e.i, e.j)]]
    if isinstance(e, dlr.Comp):
        return [a + b for a in _union_of_chains(e.left) for b in _union_of_chains(e.right)]
    if isinstance(e, dlr.UnionE):
        return _union_of_chains(e.left) + _union_of_chains(e.right)
    raise TypeError(f"unexpected term in composition elimination: {e!r}")


def contains_comp_union(c: dlr.DlrConcept) -> bool:
    def binrel(e: dlr.DlrBinRel) -> bool:
        if isinstance(e, (dlr.Comp, dlr.UnionE)):
            return True
        if isinstance(e, dlr.Star):
            return binrel(e.body)
        if isinstance(e, dlr.Proj):
            return role(e.role)
        return False

    def role(r: dlr.DlrRole) -> bool:
        if isinstance(r, dlr.Sel):
            return concept(r.concept)
        if isinstance(r, dlr.NotR):
            return role(r.role)
        if isinstance(r, dlr.AndR):
            return role(r.left) or role(r.right)
        return False

    def concept(d: dlr.DlrConcept) -> bool:
        if isinstance(d, dlr.NotC):
            return concept(d.body)
        if isinstance(d, dlr.AndC):
            return concept(d.left) or concept(d.right)
        if isinstance(d, dlr.ExistsE):
            return binrel(d.rel) or concept(d.concept)
        if isinstance(d, dlr.ExistsProj):
            return role(d.role)
        if isinstance(d, dlr.AtMost):
            return role(d.role)
        return False

    return concept(c)


def dlr0_to_fu1(c: dlr.DlrConcept, vocab: Vocabulary, topn: str = "delta") -> Formula:
    """Translate a closure-free, counting-free concept into a formula with
    the free variable x.  Under the default convention the built-in top
    relations are the domain powers and translate to true(); in explicit
    mode they translate to atoms over the declared top<n> relations."""
    if topn not in dlr.TOPN_MODES:
        raise ValueError(f"topn mode must be one of {dlr.TOPN_MODES}, got {topn!r}")
    simple = eliminate_comp_union(c)
    return _dlr_T(simple, "x", count(1), vocab, topn)


def _dlr_T(c: dlr.DlrConcept, x: str, ctr: Iterator[int], vocab: Vocabulary,
           topn: str) -> Formula:
    if isinstance(c, dlr.Top1):
        return Top()
    if isinstance(c, dlr.AtomicConcept):
        if vocab.arity(c.name) != 1:
            raise VocabularyError(f"{c.name!r} is not a unary symbol")
        return Atom(c.name, (x,))
    if isinstance(c, dlr.NotC):
        return Not(_dlr_T(c.body, x, ctr, vocab, topn))
    if isinstance(c, dlr.AndC):
        return And(_dlr_T(c.left, x, ctr, vocab, topn),
                   _dlr_T(c.right, x, ctr, vocab, topn))
    if isinstance(c, dlr.ExistsE):
        return _dlr_exists_e(c, x, ctr, vocab, topn)
    if isinstance(c, dlr.ExistsProj):
        n = dlr.dlr_role_arity(c.role, vocab)
        if c.i > n:
            raise VocabularyError(f"position ${c.i} out of range for arity {n}")
        others = tuple(f"x{next(ctr)}" for _ in range(n - 1))
        tup = others[:c.i - 1] + (x,) + others[c.i - 1:]
        return ExistsBlock(others, _dlr_s(c.role, tup, ctr, vocab, topn))
    raise TypeError(f"untranslatable concept (was composition elimination run?): {c!r}")


def _dlr_exists_e(c: dlr.ExistsE, x: str, ctr, vocab, topn) -> Formula:
    e = c.rel
    y = f"x{next(ctr)}"
    inner = _dlr_T(c.concept, y, ctr, vocab, topn)
    if isinstance(e, dlr.Eps):
        return ExistsBlock((y,), And(Equals(x, y), inner))
    if isinstance(e, dlr.Proj):
        n = dlr.dlr_role_arity(e.role, vocab)
        if e.i > n or e.j > n:
            raise VocabularyError(
                f"projection |${e.i},${e.j} out of range for arity {n}")
        if e.i == e.j:
            # (u,v) with u = v = t_i for some tuple t: an equality guard plus
            # a nested membership block keeps the block uniform
            others = tuple(f"x{next(ctr)}" for _ in range(n - 1))
            tup = others[:e.i - 1] + (x,) + others[e.i - 1:]
            member = ExistsBlock(others, _dlr_s(e.role, tup, ctr, vocab, topn))
            return ExistsBlock((y,), _and_f([Equals(x, y), member, inner]))
        zs = tuple(f"x{next(ctr)}" for _ in range(n - 2))
        tup: list[str] = []
        zi = iter(zs)
        for pos in range(1, n + 1):
            if pos == e.i:
                tup.append(x)
            elif pos == e.j:
                tup.append(y)
            else:
                tup.append(next(zi))
        body = _and_f([_dlr_s(e.role, tuple(tup), ctr, vocab, topn), inner])
        return ExistsBlock((y,) + zs, body)
    raise TypeError(f"untranslatable term (was composition elimination run?): {e!r}")


def _dlr_s(r: dlr.DlrRole, tup: tuple[str, ...], ctr, vocab, topn: str) -> Formula:
    n = dlr.dlr_role_arity(r, vocab)
    if n != len(tup):
        raise VocabularyError(f"role of arity {n} used at {len(tup)} positions")
    if isinstance(r, dlr.TopN):
        return _topn_formula(r.n, tup, topn)
    if isinstance(r, dlr.AtomicRole):
        return Atom(r.name, tup)
    if isinstance(r, dlr.Sel):
        return _and_f([_dlr_T(r.concept, tup[r.i - 1], ctr, vocab, topn),
                       _topn_formula(r.n, tup, topn)])
    if isinstance(r, dlr.NotR):
        return _and_f([_topn_formula(n, tup, topn),
                       Not(_dlr_s(r.role, tup, ctr, vocab, topn))])
    if isinstance(r, dlr.AndR):
        return And(_dlr_s(r.left, tup, ctr, vocab, topn),
                   _dlr_s(r.right, tup, ctr, vocab, topn))
    raise TypeError(f"not a role: {r!r}")


def _topn_formula(n: int, tup: tuple[str, ...], topn: str) -> Formula:
    if topn == "delta":
        return Top()
    return Atom(dlr.topn_relation_name(n), tup)
