"""Tarskian model checking over finite structures, including counting
quantifiers.  ``evaluate`` short-circuits quantifiers; ``evaluate_naive``
enumerates every branch and serves as the reference the short-circuiting
evaluator is tested against.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping

from .errors import EvalError
from .structures import Structure
from .syntax import (And, Atom, Bottom, CountExists, Equals, ExistsBlock,
                     ForallBlock, Formula, Implies, Not, Or, Top,
                     free_variables, validate_formula)

Assignment = Mapping[str, str]


@dataclass(frozen=True)
class SatisfactionSet:
    """The subset of the domain a formula with at most one free variable
    carves out; for sentences this is the whole domain or nothing."""

    formula: Formula
    elements: frozenset[str]


def _check_inputs(s: Structure, a: Assignment, f: Formula):
    validate_formula(f, s.vocabulary)
    dom = set(s.domain)
    for var, val in a.items():
        if val not in dom:
            raise EvalError(f"assignment maps {var!r} to {val!r}, not a domain element")
    unbound = free_variables(f) - a.keys()
    if unbound:
        raise EvalError(f"unbound free variables: {', '.join(sorted(unbound))}")


def evaluate(s: Structure, a: Assignment, f: Formula) -> bool:
    """Standard satisfaction; quantifier blocks are iterated quantification
    and E[cmp k] x. f counts the witnesses for x."""
    _check_inputs(s, a, f)
    return _ev(s, dict(a), f)


def _ev(s: Structure, a: dict[str, str], f: Formula) -> bool:
    if isinstance(f, Top):
        return True
    if isinstance(f, Bottom):
        return False
    if isinstance(f, Atom):
        return tuple(a[v] for v in f.args) in s.relations[f.rel]
    if isinstance(f, Equals):
        return a[f.left] == a[f.right]
    if isinstance(f, Not):
        return not _ev(s, a, f.body)
    if isinstance(f, And):
        return _ev(s, a, f.left) and _ev(s, a, f.right)
    if isinstance(f, Or):
        return _ev(s, a, f.left) or _ev(s, a, f.right)
    if isinstance(f, Implies):
        return (not _ev(s, a, f.left)) or _ev(s, a, f.right)
    if isinstance(f, ExistsBlock):
        return _ev_block(s, a, f.vars, f.body, exists=True)
    if isinstance(f, ForallBlock):
        return _ev_block(s, a, f.vars, f.body, exists=False)
    if isinstance(f, CountExists):
        count = 0
        saved = a.get(f.var)
        had = f.var in a
        for d in s.domain:
            a[f.var] = d
            if _ev(s, a, f.body):
                count += 1
                if f.cmp == ">=" and count >= f.bound:
                    break
                if count > f.bound:  # settles both <= and =
                    break
        if had:
            a[f.var] = saved
        else:
            del a[f.var]
        return {">=": count >= f.bound, "<=": count <= f.bound,
                "=": count == f.bound}[f.cmp]
    raise TypeError(f"not a formula: {f!r}")


def _ev_block(s, a, vars, body, exists: bool) -> bool:
    if not vars:
        return _ev(s, a, body)
    v, rest = vars[0], vars[1:]
    saved = a.get(v)
    had = v in a
    result = not exists
    for d in s.domain:
        a[v] = d
        if _ev_block(s, a, rest, body, exists) == exists:
            result = exists
            break
    if had:
        a[v] = saved
    else:
        del a[v]
    return result


def evaluate_naive(s: Structure, a: Assignment, f: Formula) -> bool:
    """No-pruning reference semantics: quantifiers enumerate the full
    domain and combine afterwards."""
    _check_inputs(s, a, f)
    return _ev_naive(s, dict(a), f)


def _ev_naive(s, a, f) -> bool:
    if isinstance(f, Not):
        return not _ev_naive(s, a, f.body)
    if isinstance(f, And):
        left, right = _ev_naive(s, a, f.left), _ev_naive(s, a, f.right)
        return left and right
    if isinstance(f, Or):
        left, right = _ev_naive(s, a, f.left), _ev_naive(s, a, f.right)
        return left or right
    if isinstance(f, Implies):
        left, right = _ev_naive(s, a, f.left), _ev_naive(s, a, f.right)
        return (not left) or right
    if isinstance(f, (ExistsBlock, ForallBlock)):
        results = []

        def enum(vars, a):
            if not vars:
                results.append(_ev_naive(s, dict(a), f.body))
                return
            for d in s.domain:
                enum(vars[1:], {**a, vars[0]: d})

        enum(f.vars, a)
        return any(results) if isinstance(f, ExistsBlock) else all(results)
    if isinstance(f, CountExists):
        count = sum(_ev_naive(s, {**a, f.var: d}, f.body) for d in s.domain)
        return {">=": count >= f.bound, "<=": count <= f.bound,
                "=": count == f.bound}[f.cmp]
    return _ev(s, a, f)


def satisfaction_set(s: Structure, f: Formula) -> SatisfactionSet:
    """All domain elements satisfying a formula with at most one free
    variable; a sentence yields the full domain or the empty set."""
    fv = free_variables(f)
    if len(fv) > 1:
        raise EvalError(
            f"satisfaction_set needs at most one free variable, got {sorted(fv)}")
    if not fv:
        truth = evaluate(s, {}, f)
        return SatisfactionSet(f, frozenset(s.domain) if truth else frozenset())
    (x,) = fv
    elements = frozenset(d for d in s.domain if evaluate(s, {x: d}, f))
    return SatisfactionSet(f, elements)
