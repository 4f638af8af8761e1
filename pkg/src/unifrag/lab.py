"""Structure and formula generators for the expressivity separations, and
an experiment runner that recomputes every expected value.

The catalogue pairs structures that agree on one logic but are told apart
by another:

1. the 2-clique against the 3-clique, separated (beyond two-variable
   logic) by the sentence "some element belongs to every edge";
2. four 3-cycles against three 4-cycles, separated by the triangle
   sentence, which lies outside the uniform fragment; a corpus of uniform
   sentences is expected to agree on the pair;
3. a single reflexive point against its disjoint double, separated by
   free role negation (and by "some non-edge exists"), witnessing that
   concepts of the surjection logic are not closed under disjoint copies;
4. k+1 copies of the k-clique against k copies of the (k+1)-clique for
   k in {2, 3}, separated by a number restriction on incoming edges but
   agreeing on the same corpus of uniform sentences.

The corpus lives in data/u1_corpus.json; a probe with expectation
``agree`` passes when both structures give the same truth value, so the
corpus can only ever falsify the indistinguishability claims, not prove
them.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from importlib import resources
from typing import Optional, Union

from . import dl, dlr
from .errors import LogicError
from .semantics import evaluate
from .structures import Structure, disjoint_union, make_structure
from .syntax import (And, Atom, Equals, ExistsBlock, Formula, Not, Top,
                     parse_formula, print_formula)

RELATION = "R"  # the binary relation all generated structures interpret


def gen_clique(k: int) -> Structure:
    """The k-clique: total binary relation minus the reflexive loops."""
    if k < 2:
        raise ValueError("cliques need at least 2 elements")
    domain = [f"v{i}" for i in range(k)]
    edges = {(a, b) for a in domain for b in domain if a != b}
    return make_structure(domain, {RELATION: 2}, {RELATION: edges})


def gen_directed_cycle(n: int) -> Structure:
    """The directed n-cycle; n = 1 degenerates to a single loop."""
    if n < 1:
        raise ValueError("cycles need at least 1 element")
    domain = [f"v{i}" for i in range(n)]
    edges = {(domain[i], domain[(i + 1) % n]) for i in range(n)}
    return make_structure(domain, {RELATION: 2}, {RELATION: edges})


def disjoint_copies(s: Structure, copies: int) -> Structure:
    if copies < 1:
        raise ValueError("need at least one copy")
    out = s
    for _ in range(copies - 1):
        out = disjoint_union(out, s)
    return out


def one_point_loop() -> Structure:
    """A single element satisfying A and connected to itself by R."""
    return make_structure(["u"], {RELATION: 2, "A": 1},
                          {RELATION: {("u", "u")}, "A": {("u",)}})


def counting_formula(predicate: str, cmp: str, k: int) -> Formula:
    """A sentence of the uniform fragment, built from equality and a block
    of k (respectively k+1) variables, saying |P| >= k, <= k or = k."""
    if k < 0:
        raise ValueError("count bound must be >= 0")
    if cmp == ">=":
        if k == 0:
            return Top()
        vars = tuple(f"x{i}" for i in range(1, k + 1))
        parts: list[Formula] = []
        for i in range(len(vars)):
            for j in range(i + 1, len(vars)):
                parts.append(Not(Equals(vars[i], vars[j])))
        parts.extend(Atom(predicate, (v,)) for v in vars)
        body = parts[0]
        for p in parts[1:]:
            body = And(body, p)
        return ExistsBlock(vars, body)
    if cmp == "<=":
        return Not(counting_formula(predicate, ">=", k + 1))
    if cmp == "=":
        above = counting_formula(predicate, ">=", k)
        below = counting_formula(predicate, "<=", k)
        return below if isinstance(above, Top) else And(above, below)
    raise ValueError(f"comparator must be '>=', '<=' or '=', got {cmp!r}")


# ---------------------------------------------------------------------------
# Experiments
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class FoProbe:
    """A first-order sentence with its expected truth value on each
    structure; expected None means "the pair must agree"."""

    formula: Formula
    expected: Optional[tuple[bool, bool]]

    @property
    def label(self) -> str:
        return print_formula(self.formula)


@dataclass(frozen=True)
class DlProbe:
    concept: dl.Concept
    expected: tuple[str, str]  # "nonempty" | "empty"

    @property
    def label(self) -> str:
        return dl.print_concept(self.concept)


@dataclass(frozen=True)
class DlrProbe:
    concept: dlr.DlrConcept
    expected: tuple[str, str]  # "full" | "empty"

    @property
    def label(self) -> str:
        return dlr.print_dlr_concept(self.concept)


Probe = Union[FoProbe, DlProbe, DlrProbe]


@dataclass(frozen=True)
class Experiment:
    name: str
    provenance: str
    structures: tuple[Structure, Structure]
    probes: tuple[Probe, ...]


@dataclass(frozen=True)
class ProbeResult:
    label: str
    expected: str
    actual: str
    passed: bool


@dataclass(frozen=True)
class ExperimentResult:
    name: str
    probes: tuple[ProbeResult, ...]

    @property
    def passed(self) -> bool:
        return all(p.passed for p in self.probes)


def agreement_corpus() -> list[Formula]:
    doc = json.loads(
        resources.files("unifrag").joinpath("data/u1_corpus.json").read_text())
    return [parse_formula(text) for text in doc["sentences"]]


def corpus_version() -> int:
    doc = json.loads(
        resources.files("unifrag").joinpath("data/u1_corpus.json").read_text())
    return doc["version"]


def separation_experiments() -> list[Experiment]:
    corpus = tuple(FoProbe(f, None) for f in agreement_corpus())

    edge_cover = parse_formula("E x. A y z. (R(y,z) -> (x = y | x = z))")
    triangle = parse_formula("E x y z. (R(x,y) & R(y,z) & R(z,x))")
    some_non_edge = parse_formula("E x y. ~R(x,y)")
    negated_role_witness = dl.parse_concept("~exists ~R.(A)")

    loop = one_point_loop()
    experiments = [
        Experiment(
            name="clique-edge-cover",
            provenance="an element on every edge separates the 2-clique "
                       "from the 3-clique, though the two-pebble game cannot",
            structures=(gen_clique(2), gen_clique(3)),
            probes=(FoProbe(edge_cover, (True, False)),),
        ),
        Experiment(
            name="cycles-triangle",
            provenance="four 3-cycles and three 4-cycles (equal cardinality) "
                       "disagree on the triangle sentence but are expected to "
                       "agree on every uniform one-dimensional sentence",
            structures=(disjoint_copies(gen_directed_cycle(3), 4),
                        disjoint_copies(gen_directed_cycle(4), 3)),
            probes=(FoProbe(triangle, (True, False)),) + corpus,
        ),
        Experiment(
            name="prop2-disjoint-copies",
            provenance="a reflexive point and its disjoint double: free role "
                       "negation is not closed under disjoint copies",
            structures=(loop, disjoint_union(loop, loop)),
            probes=(FoProbe(some_non_edge, (False, True)),
                    DlProbe(negated_role_witness, ("nonempty", "empty"))),
        ),
    ]
    for k in (2, 3):
        experiments.append(Experiment(
            name=f"cliques-count-k{k}",
            provenance=f"{k + 1} copies of the {k}-clique against {k} copies "
                       f"of the {k + 1}-clique: an in-degree restriction "
                       f"separates them, uniform sentences are expected not to",
            structures=(disjoint_copies(gen_clique(k), k + 1),
                        disjoint_copies(gen_clique(k + 1), k)),
            probes=(DlrProbe(dlr.AtMost(k - 1, 2, dlr.AtomicRole(RELATION)),
                             ("full", "empty")),) + corpus,
        ))
    return experiments


def _run_probe(probe: Probe, structures: tuple[Structure, Structure]) -> ProbeResult:
    s1, s2 = structures
    if isinstance(probe, FoProbe):
        actual = (evaluate(s1, {}, probe.formula), evaluate(s2, {}, probe.formula))
        if probe.expected is None:
            return ProbeResult(probe.label, "agree",
                               f"{actual[0]}/{actual[1]}", actual[0] == actual[1])
        expected = f"{probe.expected[0]}/{probe.expected[1]}"
        return ProbeResult(probe.label, expected,
                           f"{actual[0]}/{actual[1]}", actual == probe.expected)
    if isinstance(probe, DlProbe):
        actual = tuple(
            "nonempty" if dl.concept_extension(s, probe.concept) else "empty"
            for s in structures)
        return ProbeResult(probe.label, "/".join(probe.expected),
                           "/".join(actual), actual == probe.expected)
    if isinstance(probe, DlrProbe):
        def classify(s: Structure) -> str:
            ext = dlr.dlr_concept_extension(s, probe.concept)
            if ext == frozenset(s.domain):
                return "full"
            return "empty" if not ext else "partial"

        actual = tuple(classify(s) for s in structures)
        return ProbeResult(probe.label, "/".join(probe.expected),
                           "/".join(actual), actual == probe.expected)
    raise TypeError(f"unknown probe: {probe!r}")


def run_experiments(names: Optional[list[str]] = None) -> list[ExperimentResult]:
    catalogue = separation_experiments()
    if names:
        known = {e.name for e in catalogue}
        unknown = [n for n in names if n not in known]
        if unknown:
            raise LogicError(f"unknown experiment names: {', '.join(unknown)}; "
                             f"available: {', '.join(sorted(known))}")
        catalogue = [e for e in catalogue if e.name in set(names)]
    results = []
    for exp in catalogue:
        probe_results = tuple(_run_probe(p, exp.structures) for p in exp.probes)
        results.append(ExperimentResult(exp.name, probe_results))
    return results


def all_structures() -> dict[str, Structure]:
    """Every structure of the catalogue, keyed for the dump command."""
    out: dict[str, Structure] = {}
    for exp in separation_experiments():
        out[f"{exp.name}-left"] = exp.structures[0]
        out[f"{exp.name}-right"] = exp.structures[1]
    return out
