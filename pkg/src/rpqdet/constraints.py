"""Containment constraints between path queries over a two-color signature.

A constraint lhs -> rhs demands that whenever lhs holds between two
vertices, rhs holds there too.  Lifting a base language L to the colored
signature produces the pair G(L) -> R(L) and R(L) -> G(L); a graph
satisfying both carries a red twin of every green L-connection and vice
versa.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from functools import cached_property

from .automata import (Class, Concat, Empty, Epsilon, Lit, Nfa, Plus, Regex,
                       Star, Union, accepts, compile_nfa, literals_used,
                       parse_regex, render_regex, shortest_word)
from .graphs import LabeledGraph, graph_union
from .rpq import evaluate
from .symbols import Alphabet, Color, Word, WorkbenchError


class ConstraintError(WorkbenchError):
    pass


class WitnessRejectedError(WorkbenchError):
    pass


def recolor_regex(r: Regex, color: Color) -> Regex:
    """Repaint every literal and class with one color."""
    if isinstance(r, (Empty, Epsilon)):
        return r
    if isinstance(r, Lit):
        return Lit(r.symbol.colored(color))
    if isinstance(r, Class):
        return Class(frozenset(s.colored(color) for s in r.symbols))
    if isinstance(r, Union):
        return Union(recolor_regex(r.left, color), recolor_regex(r.right, color))
    if isinstance(r, Concat):
        return Concat(recolor_regex(r.left, color), recolor_regex(r.right, color))
    if isinstance(r, Star):
        return Star(recolor_regex(r.inner, color))
    if isinstance(r, Plus):
        return Plus(recolor_regex(r.inner, color))
    raise TypeError(f"not a regex: {r!r}")


def recolor_nfa(n: Nfa, color: Color) -> Nfa:
    """The same automaton over one colored copy of a base alphabet."""
    return Nfa(alphabet=n.alphabet.colored(),
               n_states=n.n_states,
               transitions=frozenset((a, s.colored(color), b)
                                     for a, s, b in n.transitions),
               start=n.start,
               accepting=n.accepting)


@dataclass(frozen=True)
class RegularConstraint:
    """lhs -> rhs over a colored alphabet, with a stable id."""

    lhs: Regex
    rhs: Regex
    cid: int
    alphabet: Alphabet

    @cached_property
    def lhs_nfa(self) -> Nfa:
        return compile_nfa(self.lhs, self.alphabet)

    @cached_property
    def rhs_nfa(self) -> Nfa:
        return compile_nfa(self.rhs, self.alphabet)

    def describe(self) -> str:
        return (f"{render_regex(self.lhs, self.alphabet)} -> "
                f"{render_regex(self.rhs, self.alphabet)}")


@dataclass(frozen=True)
class ConstraintSet:
    constraints: tuple[RegularConstraint, ...]
    alphabet: Alphabet

    def __iter__(self):
        return iter(self.constraints)

    def __len__(self) -> int:
        return len(self.constraints)

    def by_id(self, cid: int) -> RegularConstraint:
        return self.constraints[cid]


def _check_language(l: Regex, base_alphabet: Alphabet) -> None:
    for s in literals_used(l):
        if s.color is not None:
            raise ConstraintError(f"language uses colored symbol {s.name!r}; "
                                  "expected the base alphabet")
        if s not in base_alphabet:
            raise ConstraintError(f"language uses foreign symbol {s.name!r}")
    n = compile_nfa(l, base_alphabet)
    if accepts(n, ()):
        raise ConstraintError("language contains the empty word; constraint "
                              "sides must be epsilon-free")


def make_arrows(l: Regex, base_alphabet: Alphabet,
                first_id: int = 0) -> tuple[RegularConstraint, RegularConstraint]:
    """The two colored containment constraints induced by a base language:
    green-to-red, then red-to-green."""
    _check_language(l, base_alphabet)
    colored = base_alphabet.colored()
    green = recolor_regex(l, Color.GREEN)
    red = recolor_regex(l, Color.RED)
    return (RegularConstraint(green, red, first_id, colored),
            RegularConstraint(red, green, first_id + 1, colored))


def make_arrow_set(languages, base_alphabet: Alphabet) -> ConstraintSet:
    """Both arrows for every language, in declaration order."""
    out: list[RegularConstraint] = []
    for l in languages:
        fwd, back = make_arrows(l, base_alphabet, first_id=len(out))
        out += [fwd, back]
    return ConstraintSet(tuple(out), base_alphabet.colored())


def satisfied(rc: RegularConstraint, g: LabeledGraph) -> bool:
    return evaluate(rc.lhs_nfa, g) <= evaluate(rc.rhs_nfa, g)


@dataclass(frozen=True)
class Request:
    """A vertex pair where a constraint's lhs holds but its rhs does not."""

    x: str
    y: str
    constraint: RegularConstraint

    @property
    def cid(self) -> int:
        return self.constraint.cid


def requests(cs: ConstraintSet, g: LabeledGraph) -> tuple[Request, ...]:
    """All open requests, ordered by (x, y, constraint id)."""
    out: list[Request] = []
    for rc in cs:
        missing = evaluate(rc.lhs_nfa, g) - evaluate(rc.rhs_nfa, g)
        out += [Request(x, y, rc) for x, y in missing]
    out.sort(key=lambda r: (r.x, r.y, r.cid))
    return tuple(out)


def fresh_names(round_no: int, req_index: int, count: int) -> list[str]:
    return [f"n{round_no}_{req_index}_{k}" for k in range(1, count + 1)]


def apply_add(g: LabeledGraph, r: Request, w: Word, *, round_no: int,
              req_index: int) -> LabeledGraph:
    """Graft a fresh path from r.x to r.y spelling w.

    The word must belong to the constraint's rhs language.  A word of
    length n creates n-1 fresh vertices named n<round>_<index>_<k>.
    """
    g.require_vertex(r.x)
    g.require_vertex(r.y)
    if len(w) == 0:
        raise WitnessRejectedError("witness word is empty")
    if not accepts(r.constraint.rhs_nfa, w):
        raise WitnessRejectedError(
            f"witness {' '.join(s.name for s in w)!r} not in the rhs language "
            f"of constraint {r.cid}")
    names = fresh_names(round_no, req_index, len(w) - 1)
    clash = set(names) & g.vertices
    if clash:
        raise ValueError(f"fresh vertex names already taken: {sorted(clash)}")
    stops = [r.x, *names, r.y]
    path = LabeledGraph.build(stops, [(stops[k], w[k], stops[k + 1])
                                      for k in range(len(w))])
    return graph_union([g, path])


# --------------------------------------------------------------------------
# JSON form: {"constraints": [{"lhs": "...", "rhs": "..."}]} over colored
# symbol tokens.


def constraint_set_to_json(cs: ConstraintSet) -> str:
    obj = {"constraints": [{"lhs": render_regex(rc.lhs, cs.alphabet),
                            "rhs": render_regex(rc.rhs, cs.alphabet)}
                           for rc in cs]}
    return json.dumps(obj, indent=2) + "\n"


def constraint_set_from_json(text: str, base_alphabet: Alphabet) -> ConstraintSet:
    colored = base_alphabet.colored()
    obj = json.loads(text)
    out: list[RegularConstraint] = []
    for i, entry in enumerate(obj["constraints"]):
        lhs = parse_regex(entry["lhs"], colored)
        rhs = parse_regex(entry["rhs"], colored)
        rc = RegularConstraint(lhs, rhs, i, colored)
        if accepts(rc.rhs_nfa, ()):
            raise ConstraintError(f"constraint {i}: rhs contains the empty word")
        if shortest_word(rc.rhs_nfa) is None and shortest_word(rc.lhs_nfa) is not None:
            raise ConstraintError(f"constraint {i}: rhs is empty but lhs is not")
        out.append(rc)
    return ConstraintSet(tuple(out), colored)
