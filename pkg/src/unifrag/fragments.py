"""Membership checking for the uniform one-dimensional fragment family.

The checker decides whether a formula is generated by the grammar of one of

* ``U1_WO_EQ``  - uniform one-dimensional fragment without equality,
* ``FU1``       - equality admitted only where a binary atom could stand,
* ``U1``        - equality placed freely,
* ``UC1``       - U1 plus counting quantifiers on single variables,
* ``FO2``       - two-variable logic with equality (separate shape check),

and reports each violation as data (kind, subformula path, message).

A formula of the first four fragments is built from four ingredients:
unary leaves (nullary constants, atoms over a single distinct variable),
equality leaves (fragment dependent), Boolean connectives, and quantifier
blocks.  For every block ``E x1..xk. body`` three conditions are enforced:

1. one-dimensionality: at most one variable of ``body`` stays free;
2. every Boolean leaf of ``body`` is either a recursively legal formula
   whose free variables lie in Y = {block variables} + the one free
   variable, or an atom with two or more distinct variables;
3. uniformity: all leaves of the second kind share a single variable set X.

A higher-arity atom can therefore only ever appear inside a quantifier
block; anywhere else it draws a UNIFORMITY violation.  Atoms of shape
``R(x,...,x)`` count as unary leaves, whatever the arity of ``R``, and
never constrain X.

The grammar leaves open whether a lone equality-free block whose atoms all
share a singleton variable set routes through the unary-leaf clause or
through uniformity; both readings generate the same language, and the
checker accepts both (single-variable atoms are simply unary leaves here).
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from enum import Enum
from typing import Optional

from .errors import VocabularyError
from .syntax import (And, Atom, Bottom, CountExists, Equals, ExistsBlock,
                     ForallBlock, Formula, Implies, Not, Or, Top, Vocabulary,
                     free_variables)


class FragmentId(Enum):
    U1_WO_EQ = "u1woeq"
    FU1 = "fu1"
    U1 = "u1"
    UC1 = "uc1"
    FO2 = "fo2"


class ViolationKind(Enum):
    UNIFORMITY = "UNIFORMITY"
    ONE_DIMENSIONALITY = "ONE_DIMENSIONALITY"
    EQUALITY_PLACEMENT = "EQUALITY_PLACEMENT"
    COUNTING_QUANTIFIER = "COUNTING_QUANTIFIER"
    VARIABLE_COUNT = "VARIABLE_COUNT"
    ARITY = "ARITY"


@dataclass(frozen=True)
class Violation:
    kind: ViolationKind
    path: tuple[int, ...]
    message: str


@dataclass(frozen=True)
class Diagnostic:
    verdict: bool
    violations: tuple[Violation, ...]

    def __post_init__(self):
        assert self.verdict == (not self.violations)

    def to_doc(self) -> dict:
        return {
            "verdict": self.verdict,
            "violations": [
                {"kind": v.kind.value, "path": list(v.path), "message": v.message}
                for v in self.violations
            ],
        }


def _diag(violations: list[Violation]) -> Diagnostic:
    return Diagnostic(not violations, tuple(violations))


class _Checker:
    def __init__(self, frag: FragmentId):
        self.frag = frag
        self.out: list[Violation] = []

    def emit(self, kind: ViolationKind, path: tuple[int, ...], message: str):
        self.out.append(Violation(kind, path, message))

    # -- formula positions (clauses 1-3 plus block entry) -------------------

    def check_f(self, f: Formula, path: tuple[int, ...]):
        if isinstance(f, (Top, Bottom)):
            return
        if isinstance(f, Atom):
            if len(set(f.args)) >= 2:
                self.emit(ViolationKind.UNIFORMITY, path,
                          f"atom {f.rel} over two or more distinct variables may only "
                          f"occur inside a quantifier block")
            return
        if isinstance(f, Equals):
            self.check_equality_leaf(f, path, shared_x=None)
            return
        if isinstance(f, Not):
            self.check_f(f.body, path + (0,))
            return
        if isinstance(f, (And, Or, Implies)):
            self.check_f(f.left, path + (0,))
            self.check_f(f.right, path + (1,))
            return
        if isinstance(f, (ExistsBlock, ForallBlock)):
            self.check_block(f.vars, f.body, path)
            return
        if isinstance(f, CountExists):
            if self.frag is not FragmentId.UC1:
                self.emit(ViolationKind.COUNTING_QUANTIFIER, path,
                          f"counting quantifier E[{f.cmp}{f.bound}] is only available in UC1")
            self.check_block((f.var,), f.body, path)
            return
        raise TypeError(f"not a formula: {f!r}")

    def check_equality_leaf(self, f: Equals, path: tuple[int, ...],
                            shared_x: Optional["_SharedX"]):
        """Equality outside uniform-atom positions.

        U1 and UC1 admit x=y anywhere; U1(wo=) admits no equality at all;
        in FU1 an equality between distinct variables stands for a binary
        atom and is handled by the uniformity bookkeeping (shared_x).
        """
        if self.frag is FragmentId.U1_WO_EQ:
            self.emit(ViolationKind.EQUALITY_PLACEMENT, path,
                      "equality is not available in the equality-free fragment")
            return
        if f.left == f.right:
            return  # x=x substitutes a unary atom R(x,x); harmless everywhere else
        if self.frag is FragmentId.FU1:
            if shared_x is None:
                self.emit(ViolationKind.EQUALITY_PLACEMENT, path,
                          "equality between distinct variables may only stand where "
                          "a binary atom could (inside a quantifier block)")
            else:
                shared_x.add_equality(frozenset((f.left, f.right)), path)

    # -- clause 4 ------------------------------------------------------------

    def check_block(self, vars: tuple[str, ...], body: Formula, path: tuple[int, ...]):
        leftover = free_variables(body) - set(vars)
        if len(leftover) > 1:
            self.emit(ViolationKind.ONE_DIMENSIONALITY, path,
                      f"quantifying {' '.join(vars)} leaves "
                      f"{len(leftover)} variables free ({', '.join(sorted(leftover))}) "
                      f"instead of at most one")
        shared = _SharedX()
        self.check_leaves(body, path + (0,), shared)
        shared.report(self)

    def check_leaves(self, f: Formula, path: tuple[int, ...], shared: "_SharedX"):
        """Decompose a block body over the Boolean connectives and classify
        each leaf as a recursively checked formula or as a uniform atom."""
        if isinstance(f, Not):
            self.check_leaves(f.body, path + (0,), shared)
            return
        if isinstance(f, (And, Or, Implies)):
            self.check_leaves(f.left, path + (0,), shared)
            self.check_leaves(f.right, path + (1,), shared)
            return
        if isinstance(f, Atom):
            varset = frozenset(f.args)
            if len(varset) >= 2:
                shared.add_atom(varset, path, f.rel)
            return
        if isinstance(f, Equals):
            self.check_equality_leaf(f, path, shared)
            return
        # anything else is an ordinary formula position
        self.check_f(f, path)


class _SharedX:
    """Uniformity bookkeeping for one quantifier block.

    Collects the variable sets of all higher-arity atoms (and, for FU1, of
    all equality atoms between distinct variables); afterwards every set
    must coincide.  When they do not, every atom outside the unique largest
    class is flagged, and on a tie all classes are flagged, so the mutated
    atom of a single-atom edit is always reported.
    """

    def __init__(self):
        self.atoms: list[tuple[frozenset[str], tuple[int, ...], str]] = []
        self.equalities: list[tuple[frozenset[str], tuple[int, ...]]] = []

    def add_atom(self, varset, path, rel):
        self.atoms.append((varset, path, rel))

    def add_equality(self, varset, path):
        self.equalities.append((varset, path))

    def report(self, checker: _Checker):
        counts = Counter(v for v, _, _ in self.atoms)
        shared: Optional[frozenset[str]] = None
        if counts:
            if len(counts) == 1:
                shared = next(iter(counts))
            else:
                best = max(counts.values())
                majority = [v for v, c in counts.items() if c == best]
                keep = majority[0] if len(majority) == 1 else None
                for varset, path, rel in self.atoms:
                    if varset != keep:
                        others = sorted("{%s}" % ",".join(sorted(v))
                                        for v in counts if v != varset)
                        checker.emit(
                            ViolationKind.UNIFORMITY, path,
                            f"atom {rel} has variable set {{{','.join(sorted(varset))}}} "
                            f"but the block also uses {', '.join(others)}")
                shared = keep
        if not self.equalities:
            return
        # FU1 only: equalities behave like binary atoms and share the same X
        if shared is None and counts:
            return  # uniformity already failed; avoid piling on
        for varset, path in self.equalities:
            if shared is None:
                shared = varset
            if varset != shared:
                checker.emit(
                    ViolationKind.EQUALITY_PLACEMENT, path,
                    f"equality over {{{','.join(sorted(varset))}}} does not match the "
                    f"block's uniform variable set {{{','.join(sorted(shared))}}}")


def check_fragment(f: Formula, frag: FragmentId,
                   vocab: Vocabulary | None = None) -> Diagnostic:
    """Decide membership of ``f`` in the given fragment.

    Violations are returned as data, never raised.  When a vocabulary is
    supplied, atoms with a wrong argument count additionally produce ARITY
    violations.
    """
    if frag is FragmentId.FO2:
        return check_fo2(f, vocab)
    checker = _Checker(frag)
    if vocab is not None:
        _arity_violations(f, vocab, checker)
    checker.check_f(f, ())
    return _diag(checker.out)


def check_fo2(f: Formula, vocab: Vocabulary | None = None) -> Diagnostic:
    """Two-variable shape: at most two distinct variable names, only
    single-variable quantifier blocks, no counting quantifiers."""
    checker = _Checker(FragmentId.FO2)
    if vocab is not None:
        _arity_violations(f, vocab, checker)
    seen: dict[str, tuple[int, ...]] = {}

    def note(names, path):
        for name in names:
            if name not in seen:
                seen[name] = path
                if len(seen) == 3:
                    checker.emit(ViolationKind.VARIABLE_COUNT, path,
                                 f"third distinct variable {name!r} appears here; "
                                 f"FO2 allows at most two")
                elif len(seen) > 3:
                    pass  # one report per formula is enough

    def visit(g: Formula, path: tuple[int, ...]):
        if isinstance(g, Atom):
            note(g.args, path)
        elif isinstance(g, Equals):
            note((g.left, g.right), path)
        elif isinstance(g, Not):
            visit(g.body, path + (0,))
        elif isinstance(g, (And, Or, Implies)):
            visit(g.left, path + (0,))
            visit(g.right, path + (1,))
        elif isinstance(g, (ExistsBlock, ForallBlock)):
            if len(g.vars) > 1:
                checker.emit(ViolationKind.VARIABLE_COUNT, path,
                             f"FO2 quantifies one variable at a time, block has {len(g.vars)}")
            note(g.vars, path)
            visit(g.body, path + (0,))
        elif isinstance(g, CountExists):
            checker.emit(ViolationKind.COUNTING_QUANTIFIER, path,
                         "counting quantifiers are outside FO2")
            note((g.var,), path)
            visit(g.body, path + (0,))

    visit(f, ())
    return _diag(checker.out)


def _arity_violations(f: Formula, vocab: Vocabulary, checker: _Checker):
    def visit(g: Formula, path: tuple[int, ...]):
        if isinstance(g, Atom):
            try:
                arity = vocab.arity(g.rel)
            except VocabularyError:
                checker.emit(ViolationKind.ARITY, path,
                             f"relation {g.rel!r} is not in the vocabulary")
                return
            if arity != len(g.args):
                checker.emit(ViolationKind.ARITY, path,
                             f"relation {g.rel!r} has arity {arity}, "
                             f"used with {len(g.args)} arguments")
            return
        if isinstance(g, Not):
            visit(g.body, path + (0,))
        elif isinstance(g, (And, Or, Implies)):
            visit(g.left, path + (0,))
            visit(g.right, path + (1,))
        elif isinstance(g, (ExistsBlock, ForallBlock, CountExists)):
            visit(g.body, path + (0,))

    visit(f, ())
