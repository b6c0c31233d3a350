"""The pursuit game that hunts for determinacy counterexamples.

A position is a graph with endpoints a and b; play starts from the green
chain of a word of the start-and-traps language q0.  Each round the player
must satisfy every open constraint request at once by grafting witness
paths.  The player loses as soon as a red q0 word connects a to b; a
position with no open requests is a fixpoint and certifies a counterexample.
"""

from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass
from enum import Enum
from itertools import product

from .automata import Nfa, accepts, enumerate_words, iter_words, shortest_word
from .constraints import (ConstraintSet, RegularConstraint, Request,
                          apply_add, fresh_names, recolor_nfa, requests)
from .graphs import (Edge, EndpointedGraph, LabeledGraph, chain_graph,
                     chain_word)
from .rpq import find_witness, holds
from .symbols import Color, Symbol, Word, WorkbenchError, format_word


class ScriptExhaustedError(WorkbenchError):
    pass


class GuidanceError(WorkbenchError):
    pass


@dataclass(frozen=True)
class Position:
    graph: LabeledGraph
    a: str
    b: str
    round: int

    def endpointed(self) -> EndpointedGraph:
        return EndpointedGraph(self.graph, self.a, self.b)


@dataclass(frozen=True)
class Caps:
    """Bounds for the exhaustive search; every cap must be positive."""

    max_initial_len: int
    max_witness_len: int
    max_rounds: int
    max_branches: int

    def __post_init__(self):
        for name in ("max_initial_len", "max_witness_len", "max_rounds",
                     "max_branches"):
            if getattr(self, name) < 1:
                raise ValueError(f"{name} must be positive")


class PlayOutcome(Enum):
    LOST = "LOST"
    WON_FIXPOINT = "WON_FIXPOINT"
    EXHAUSTED = "EXHAUSTED"


@dataclass(frozen=True)
class PlayResult:
    outcome: PlayOutcome
    round: int


@dataclass(frozen=True)
class RoundRecord:
    round_no: int
    requests: tuple[tuple[str, str, int], ...]
    choices: tuple[Word, ...]
    added_edges: tuple[Edge, ...]


@dataclass(frozen=True)
class PlayTrace:
    initial_word: Word | None
    rounds: tuple[RoundRecord, ...]


# --------------------------------------------------------------------------
# Positions


def initial_position(word: Word) -> Position:
    """Round-zero position: the green chain of the word, from a to b."""
    if not word:
        raise ValueError("initial word must be nonempty")
    green = []
    for s in word:
        if s.color is Color.RED:
            raise ValueError("initial word must be green or uncolored")
        green.append(s if s.color is Color.GREEN else s.colored(Color.GREEN))
    return Position(chain_graph(tuple(green), "a", "b"), "a", "b", 0)


def initial_positions(q0: Nfa, cap: int) -> list[Position]:
    """One position per word of q0 with length at most cap, shortlex order.

    q0 ranges over the base alphabet; the empty word never yields a
    position.
    """
    out = []
    if cap >= 1:
        for w in iter_words(q0, cap):
            if w:
                out.append(initial_position(w))
    return out


# --------------------------------------------------------------------------
# Strategies


class ShortestStrategy:
    """Always answer with the shortlex-least word of the rhs language."""

    def __call__(self, pos: Position, req: Request, cs: ConstraintSet) -> Word:
        w = shortest_word(req.constraint.rhs_nfa)
        if w is None:
            raise GuidanceError(f"constraint {req.cid} has an empty rhs language")
        return w


class ScriptedStrategy:
    """Replay a fixed list of witness words in request order."""

    def __init__(self, words):
        self._queue = deque(words)

    def __call__(self, pos: Position, req: Request, cs: ConstraintSet) -> Word:
        if not self._queue:
            raise ScriptExhaustedError(
                f"script ran out of words at round {pos.round + 1}, request "
                f"({req.x}, {req.y}, {req.cid})")
        return self._queue.popleft()


class GuidedStrategy:
    """Choose witnesses by following a model that satisfies the constraints.

    Maintains a homomorphism from the current position into the model; each
    witness is the shortest rhs path in the model between the images of the
    request endpoints, and fresh vertices are mapped onto that path.
    """

    def __init__(self, model: LabeledGraph, h0: dict[str, str]):
        self.model = model
        self.mapping = dict(h0)
        self._pending: dict[tuple[str, str, int], tuple[str, ...]] = {}

    def __call__(self, pos: Position, req: Request, cs: ConstraintSet) -> Word:
        hx = self.mapping.get(req.x)
        hy = self.mapping.get(req.y)
        if hx is None or hy is None:
            raise GuidanceError(f"request endpoint not in the maintained map: "
                                f"({req.x}, {req.y})")
        hit = find_witness(req.constraint.rhs_nfa, self.model, hx, hy)
        if hit is None:
            raise GuidanceError(
                f"model offers no rhs path for constraint {req.cid} between "
                f"{hx} and {hy}; it does not satisfy the constraint set")
        word, path = hit
        self._pending[(req.x, req.y, req.cid)] = path
        return word

    def observe_round(self, old_pos: Position, reqs, choices, new_pos: Position):
        round_no = old_pos.round + 1
        for i, r in enumerate(reqs):
            path = self._pending.pop((r.x, r.y, r.cid), None)
            if path is None:
                continue
            names = fresh_names(round_no, i, len(path) - 2)
            for name, mv in zip(names, path[1:-1]):
                self.mapping[name] = mv
        self._pending.clear()


class InteractiveStrategy:
    """Prompt for witness words; re-prompt until one the rhs accepts."""

    def __init__(self, input_fn=input, print_fn=print, sample_len: int = 4,
                 sample_count: int = 8):
        self.input_fn = input_fn
        self.print_fn = print_fn
        self.sample_len = sample_len
        self.sample_count = sample_count

    def __call__(self, pos: Position, req: Request, cs: ConstraintSet) -> Word:
        rc = req.constraint
        self.print_fn(f"round {pos.round + 1}: request ({req.x}, {req.y}) "
                      f"for constraint {req.cid}: {rc.describe()}")
        samples = enumerate_words(rc.rhs_nfa, self.sample_len)[:self.sample_count]
        if samples:
            self.print_fn("candidates: " +
                          "; ".join(format_word(w) for w in samples))
        while True:
            try:
                line = self.input_fn("witness> ")
            except EOFError:
                raise ScriptExhaustedError("interactive input closed") from None
            try:
                word = tuple(Symbol(tok) for tok in line.split())
                if word and accepts(rc.rhs_nfa, word):
                    return word
                self.print_fn("not a word of the rhs language, try again")
            except WorkbenchError as e:
                self.print_fn(f"rejected: {e}")


def strategy_shortest() -> ShortestStrategy:
    return ShortestStrategy()


def strategy_scripted(words) -> ScriptedStrategy:
    return ScriptedStrategy(words)


def strategy_guided(model: LabeledGraph, h0: dict[str, str]) -> GuidedStrategy:
    return GuidedStrategy(model, h0)


def strategy_interactive(**kwargs) -> InteractiveStrategy:
    return InteractiveStrategy(**kwargs)


# --------------------------------------------------------------------------
# Playing


def play_round(pos: Position, cs: ConstraintSet, strategy,
               reqs: tuple[Request, ...]) -> tuple[Position, RoundRecord]:
    """Satisfy every open request at once with the strategy's witnesses."""
    round_no = pos.round + 1
    g = pos.graph
    choices: list[Word] = []
    for i, r in enumerate(reqs):
        w = strategy(pos, r, cs)
        choices.append(w)
        g = apply_add(g, r, w, round_no=round_no, req_index=i)
    new_pos = Position(g, pos.a, pos.b, round_no)
    added = tuple(sorted(g.edges - pos.graph.edges,
                         key=lambda e: (e[0], e[1].name, e[2])))
    record = RoundRecord(round_no, tuple((r.x, r.y, r.cid) for r in reqs),
                         tuple(choices), added)
    hook = getattr(strategy, "observe_round", None)
    if hook is not None:
        hook(pos, reqs, record.choices, new_pos)
    return new_pos, record


def step(pos: Position, cs: ConstraintSet, strategy) -> Position:
    """One move; a position with no open requests is returned unchanged."""
    reqs = requests(cs, pos.graph)
    if not reqs:
        return pos
    new_pos, _ = play_round(pos, cs, strategy, reqs)
    return new_pos


def run_play(q0: Nfa, cs: ConstraintSet, strategy, init: Position,
             max_rounds: int) -> tuple[PlayResult, PlayTrace]:
    """Play from init until loss, fixpoint, or the round bound.

    q0 ranges over the base alphabet; the loss test checks its red copy
    between the endpoints after every position, the initial one included.
    """
    red_q0 = recolor_nfa(q0, Color.RED)
    records: list[RoundRecord] = []
    init_word = chain_word(init.graph, init.a, init.b)
    pos = init
    while True:
        if holds(red_q0, pos.graph, pos.a, pos.b):
            result = PlayResult(PlayOutcome.LOST, pos.round)
            break
        reqs = requests(cs, pos.graph)
        if not reqs:
            result = PlayResult(PlayOutcome.WON_FIXPOINT, pos.round)
            break
        if pos.round >= max_rounds:
            result = PlayResult(PlayOutcome.EXHAUSTED, pos.round)
            break
        pos, record = play_round(pos, cs, strategy, reqs)
        records.append(record)
    return result, PlayTrace(init_word, tuple(records))


# --------------------------------------------------------------------------
# Exhaustive bounded search


class VerdictKind(Enum):
    NONDETERMINATE = "NONDETERMINATE"
    ALL_PLAYS_LOSE = "ALL_PLAYS_LOSE"
    INCONCLUSIVE = "INCONCLUSIVE"


@dataclass(frozen=True)
class Verdict:
    kind: VerdictKind
    caps: Caps
    certificate: EndpointedGraph | None = None


_WIN, _ALL_LOST, _UNDECIDED = "win", "all_lost", "undecided"


class ExploreContext:
    """Shared state for the bounded search over one instance."""

    def __init__(self, q0: Nfa, cs: ConstraintSet, caps: Caps):
        self.q0 = q0
        self.cs = cs
        self.caps = caps
        self.red_q0 = recolor_nfa(q0, Color.RED)
        self._candidates: dict[int, tuple[Word, ...]] = {}
        self._forcing: dict[int, bool] = {}

    def candidates(self, rc: RegularConstraint) -> tuple[Word, ...]:
        """Witness words for one request: the first max_branches words of
        the rhs language within max_witness_len, shortlex; when none fit,
        the single shortest rhs word, so bounded play never gets stuck."""
        got = self._candidates.get(rc.cid)
        if got is None:
            out = []
            for w in iter_words(rc.rhs_nfa, self.caps.max_witness_len):
                if not w:
                    continue
                out.append(w)
                if len(out) >= self.caps.max_branches:
                    break
            if not out:
                w = shortest_word(rc.rhs_nfa)
                if w is not None:
                    out.append(w)
            got = tuple(out)
            self._candidates[rc.cid] = got
        return got

    def _forces_loss_alone(self, rc: RegularConstraint) -> bool:
        """True when every candidate witness is itself a red q0 word, so an
        a-to-b request for rc loses on any allowed choice."""
        got = self._forcing.get(rc.cid)
        if got is None:
            cands = self.candidates(rc)
            got = bool(cands) and all(accepts(self.red_q0, u) for u in cands)
            self._forcing[rc.cid] = got
        return got

    def classify_word(self, word: Word):
        """Search all bounded plays from one initial word.

        Returns (kind, certificate) with kind one of win / all_lost /
        undecided.
        """
        pos = initial_position(word)
        green_word = tuple(s.colored(Color.GREEN) for s in word)
        # An all-green chain keeps exactly one a-to-b walk, so an a-to-b
        # request exists iff the lhs accepts the chain word and the rhs does
        # not; when every allowed witness for it is a red q0 word, every
        # play dies in round one no matter what the other requests get.
        for rc in self.cs:
            if (self._forces_loss_alone(rc)
                    and accepts(rc.lhs_nfa, green_word)
                    and not accepts(rc.rhs_nfa, green_word)):
                return _ALL_LOST, None
        return self._dfs(pos)

    def _dfs(self, pos: Position):
        if holds(self.red_q0, pos.graph, pos.a, pos.b):
            return _ALL_LOST, None
        reqs = requests(self.cs, pos.graph)
        if not reqs:
            return _WIN, pos
        if pos.round >= self.caps.max_rounds:
            return _UNDECIDED, None
        cand_lists = [self.candidates(r.constraint) for r in reqs]
        if any(not c for c in cand_lists):
            return _UNDECIDED, None
        # Prune: if some single request loses under each of its candidates
        # in isolation, the added edges of the other requests cannot save
        # the play, so the whole subtree loses.
        for r, cands in zip(reqs, cand_lists):
            if all(self._lost_with(pos, r, u, i)
                   for i, u in enumerate(cands)):
                return _ALL_LOST, None
        round_no = pos.round + 1
        any_undecided = False
        for combo in product(*cand_lists):
            g = pos.graph
            for i, (r, w) in enumerate(zip(reqs, combo)):
                g = apply_add(g, r, w, round_no=round_no, req_index=i)
            kind, cert = self._dfs(Position(g, pos.a, pos.b, round_no))
            if kind == _WIN:
                return kind, cert
            if kind == _UNDECIDED:
                any_undecided = True
        return (_UNDECIDED if any_undecided else _ALL_LOST), None

    def _lost_with(self, pos: Position, r: Request, w: Word, idx: int) -> bool:
        g = apply_add(pos.graph, r, w, round_no=pos.round + 1, req_index=idx)
        return holds(self.red_q0, g, pos.a, pos.b)


def explore(q0: Nfa, cs: ConstraintSet, caps: Caps) -> Verdict:
    """Depth-first search over initial words and witness combinations.

    NONDETERMINATE carries the first fixpoint reached without loss, in
    deterministic branch order; ALL_PLAYS_LOSE means every explored branch
    lost before the caps; anything else is INCONCLUSIVE.
    """
    ctx = ExploreContext(q0, cs, caps)
    saw_word = False
    saw_undecided = False
    for w in iter_words(q0, caps.max_initial_len):
        if not w:
            continue
        saw_word = True
        kind, cert = ctx.classify_word(w)
        if kind == _WIN:
            return Verdict(VerdictKind.NONDETERMINATE, caps, cert.endpointed())
        if kind == _UNDECIDED:
            saw_undecided = True
    if not saw_word or saw_undecided:
        return Verdict(VerdictKind.INCONCLUSIVE, caps)
    return Verdict(VerdictKind.ALL_PLAYS_LOSE, caps)


# --------------------------------------------------------------------------
# Trace serialization: one JSON object per line, a header with the initial
# word and then one object per round.


def trace_to_jsonl(trace: PlayTrace) -> str:
    lines = [json.dumps(
        {"initial": None if trace.initial_word is None
         else format_word(trace.initial_word)}, separators=(",", ":"))]
    for rec in trace.rounds:
        lines.append(json.dumps({
            "round": rec.round_no,
            "requests": [[x, y, cid] for x, y, cid in rec.requests],
            "choices": [format_word(w) for w in rec.choices],
            "added_edges": [[src, s.name, dst] for src, s, dst in rec.added_edges],
        }, separators=(",", ":")))
    return "\n".join(lines) + "\n"


def trace_from_jsonl(text: str) -> PlayTrace:
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise ValueError("empty trace")
    header = json.loads(lines[0])
    initial = header.get("initial")
    initial_word = (None if initial is None
                    else tuple(Symbol(tok) for tok in initial.split()))
    rounds = []
    for ln in lines[1:]:
        obj = json.loads(ln)
        rounds.append(RoundRecord(
            round_no=obj["round"],
            requests=tuple((x, y, cid) for x, y, cid in obj["requests"]),
            choices=tuple(tuple(Symbol(t) for t in c.split())
                          for c in obj["choices"]),
            added_edges=tuple((src, Symbol(s), dst)
                              for src, s, dst in obj["added_edges"]),
        ))
    return PlayTrace(initial_word, tuple(rounds))


def scripted_from_trace(trace: PlayTrace) -> ScriptedStrategy:
    """A strategy replaying the trace's choices in recorded order."""
    words: list[Word] = []
    for rec in trace.rounds:
        words.extend(rec.choices)
    return ScriptedStrategy(words)
