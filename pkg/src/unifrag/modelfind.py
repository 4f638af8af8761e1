"""Bounded model search for sentences.

Candidate interpretations at each domain size correspond to bit strings
over a fixed cell sequence (relations sorted by name, tuples in row-major
order over the domain e0..e{n-1}).  The search walks these strings in
increasing binary order, false first, so the reported model is always the
lexicographically least satisfying interpretation of minimal domain size.
Subtrees are cut with a three-valued evaluation of the sentence under the
partial interpretation: a definite false prunes, a definite true is
completed with all remaining cells false.  The pruning is conservative, so
outcomes match an exhaustive enumeration exactly.

NoModelUpTo is a bounded verdict only.  Sentences of the uniform fragment
that are satisfiable at all have models of size exponentially bounded in
the sentence, but the bound's constants are not computed here, so absence
up to ``max_size`` is never an unsatisfiability certificate.

The optional ``prune`` flag adds isomorphism symmetry breaking: partial
assignments certified lexicographically greater than one of their domain
transpositions are skipped.  The least satisfying assignment is invariant
under every domain permutation, hence never skipped, and the flag cannot
change any outcome.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from itertools import product
from typing import Callable, Optional

from .errors import CellLimitError, EvalError
from .semantics import evaluate
from .structures import Structure
from .syntax import (And, Atom, Bottom, CountExists, Equals, ExistsBlock,
                     ForallBlock, Formula, Implies, Not, Or, Top, Vocabulary,
                     free_variables, validate_formula)

DEFAULT_CELL_LIMIT = 64

_MISSING = object()


@dataclass(frozen=True)
class SearchReport:
    """Outcome of a bounded search.  ``model`` is None when no structure of
    size up to ``bound`` satisfies the sentence.  ``nodes_examined`` counts
    the partial interpretations evaluated."""

    sentence: Formula
    bound: int
    model: Optional[Structure]
    nodes_examined: int
    elapsed_seconds: float

    @property
    def found(self) -> bool:
        return self.model is not None


def cell_count(vocab: Vocabulary, size: int) -> int:
    return sum(size ** a for a in vocab.symbols.values())


def find_model(f: Formula, vocab: Vocabulary, max_size: int,
               prune: bool = False,
               cell_limit: int = DEFAULT_CELL_LIMIT) -> SearchReport:
    """Search domain sizes 1..max_size in ascending order and return the
    first (lexicographically least) satisfying structure, if any."""
    if max_size < 1:
        raise ValueError("max_size must be >= 1")
    fv = free_variables(f)
    if fv:
        raise EvalError(f"model search needs a sentence, free: {', '.join(sorted(fv))}")
    validate_formula(f, vocab)
    worst = cell_count(vocab, max_size)
    if worst > cell_limit:
        raise CellLimitError(
            f"{worst} interpretation cells at size {max_size} exceed the limit "
            f"of {cell_limit}; raise cell_limit explicitly to search anyway")
    started = time.perf_counter()
    counter = [0]
    for size in range(1, max_size + 1):
        model = _search_size(f, vocab, size, prune, counter)
        if model is not None:
            if not evaluate(model, {}, f):  # soundness re-check before returning
                raise AssertionError("search returned a non-model; this is a bug")
            return SearchReport(f, max_size, model, counter[0],
                                time.perf_counter() - started)
    return SearchReport(f, max_size, None, counter[0],
                        time.perf_counter() - started)


# ---------------------------------------------------------------------------
# One domain size
# ---------------------------------------------------------------------------

def _search_size(f: Formula, vocab: Vocabulary, n: int, prune: bool,
                 counter: list[int]) -> Optional[Structure]:
    rels = sorted(vocab.symbols)
    offsets: dict[str, int] = {}
    cells: list[tuple[str, tuple[int, ...]]] = []
    for rel in rels:
        offsets[rel] = len(cells)
        arity = vocab.symbols[rel]
        cells.extend((rel, t) for t in product(range(n), repeat=arity))
    vals: list[Optional[bool]] = [None] * len(cells)
    asg: dict[str, int] = {}
    root = _compile(f, n, vocab, offsets, vals, asg)

    swaps = _transposition_maps(vocab, n, offsets) if prune else []

    def lex_violates(depth: int) -> bool:
        # certified "assignment > transposed assignment" on the decided prefix
        for perm in swaps:
            for j in range(depth + 1):
                a = vals[j]
                b = vals[perm[j]]
                if b is None:
                    break
                if a is b:
                    continue
                if a and not b:
                    return True
                break
        return False

    def build() -> Structure:
        domain = tuple(f"e{i}" for i in range(n))
        relations: dict[str, set] = {rel: set() for rel in rels}
        for (rel, t), v in zip(cells, vals):
            if v:
                relations[rel].add(tuple(domain[i] for i in t))
        return Structure(domain, relations, vocab)

    def dfs(i: int) -> Optional[Structure]:
        counter[0] += 1
        verdict = root()
        if verdict is False:
            return None
        if verdict is True:
            for j in range(i, len(vals)):
                vals[j] = False
            return build()
        for value in (False, True):
            vals[i] = value
            if not (prune and lex_violates(i)):
                found = dfs(i + 1)
                if found is not None:
                    return found
        vals[i] = None
        return None

    return dfs(0)


def _transposition_maps(vocab: Vocabulary, n: int, offsets) -> list[list[int]]:
    maps = []
    for p in range(n):
        for q in range(p + 1, n):
            swap = {p: q, q: p}
            perm: list[int] = []
            for rel in sorted(vocab.symbols):
                arity = vocab.symbols[rel]
                for t in product(range(n), repeat=arity):
                    image = tuple(swap.get(i, i) for i in t)
                    rank = 0
                    for i in image:
                        rank = rank * n + i
                    perm.append(offsets[rel] + rank)
            maps.append(perm)
    return maps


# ---------------------------------------------------------------------------
# Three-valued (Kleene) evaluation compiled to closures
# ---------------------------------------------------------------------------

def _compile(f: Formula, n: int, vocab: Vocabulary, offsets, vals,
             asg) -> Callable[[], Optional[bool]]:
    if isinstance(f, Top):
        return lambda: True
    if isinstance(f, Bottom):
        return lambda: False
    if isinstance(f, Atom):
        base = offsets[f.rel]
        args = f.args

        def ev_atom():
            rank = 0
            for v in args:
                rank = rank * n + asg[v]
            return vals[base + rank]

        return ev_atom
    if isinstance(f, Equals):
        left, right = f.left, f.right
        return lambda: asg[left] == asg[right]
    if isinstance(f, Not):
        g = _compile(f.body, n, vocab, offsets, vals, asg)

        def ev_not():
            v = g()
            return None if v is None else not v

        return ev_not
    if isinstance(f, (And, Or, Implies)):
        gl = _compile(f.left, n, vocab, offsets, vals, asg)
        gr = _compile(f.right, n, vocab, offsets, vals, asg)
        if isinstance(f, And):
            def ev_and():
                a = gl()
                if a is False:
                    return False
                b = gr()
                if b is False:
                    return False
                return True if (a and b) else None

            return ev_and
        if isinstance(f, Or):
            def ev_or():
                a = gl()
                if a is True:
                    return True
                b = gr()
                if b is True:
                    return True
                return False if (a is False and b is False) else None

            return ev_or

        def ev_implies():
            a = gl()
            if a is False:
                return True
            b = gr()
            if b is True:
                return True
            if a is True and b is False:
                return False
            return None

        return ev_implies
    if isinstance(f, (ExistsBlock, ForallBlock)):
        body = _compile(f.body, n, vocab, offsets, vals, asg)
        exists = isinstance(f, ExistsBlock)

        def make(vars: tuple[str, ...]) -> Callable[[], Optional[bool]]:
            if not vars:
                return body
            inner = make(vars[1:])
            var = vars[0]

            def ev_quant():
                saw_unknown = False
                saved = asg.get(var, _MISSING)
                try:
                    for d in range(n):
                        asg[var] = d
                        r = inner()
                        if r is exists:
                            return exists
                        if r is None:
                            saw_unknown = True
                finally:
                    if saved is _MISSING:
                        del asg[var]
                    else:
                        asg[var] = saved
                return None if saw_unknown else (not exists)

            return ev_quant

        return make(f.vars)
    if isinstance(f, CountExists):
        body = _compile(f.body, n, vocab, offsets, vals, asg)
        var, bound, cmp = f.var, f.bound, f.cmp

        def ev_count():
            true_count = unknown = 0
            saved = asg.get(var, _MISSING)
            try:
                for d in range(n):
                    asg[var] = d
                    r = body()
                    if r is True:
                        true_count += 1
                    elif r is None:
                        unknown += 1
                    if cmp == ">=" and true_count >= bound:
                        return True
                    if cmp != ">=" and true_count > bound:
                        return False
            finally:
                if saved is _MISSING:
                    del asg[var]
                else:
                    asg[var] = saved
            if cmp == ">=":
                return False if true_count + unknown < bound else None
            if cmp == "<=":
                return True if true_count + unknown <= bound else None
            if true_count + unknown < bound:
                return False
            if true_count == bound and unknown == 0:
                return True
            return None

        return ev_count
    raise TypeError(f"not a formula: {f!r}")
