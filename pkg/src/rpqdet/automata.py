"""Regular expressions and nondeterministic finite automata.

Grammar, lowest precedence first: union ``+``, concatenation by
juxtaposition, postfix ``*`` and ``^+``, with parentheses for grouping.
Atoms are symbol tokens, class literals ``[T,D,K,S]`` whose fields may be
``*`` wildcards, and the token ``S0`` for the class of all four-field
symbols.  Class literals expand at parse time against the ambient alphabet;
in a colored alphabet they may carry a ``G:`` or ``R:`` prefix to select one
copy.  The reserved tokens ``EMPTY`` and ``EPS`` denote the empty language
and the empty word.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from collections import deque

from .symbols import (Alphabet, Color, Symbol, SymbolError, Word,
                      WorkbenchError)


class RegexSyntaxError(WorkbenchError):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position})")
        self.position = position


class UnknownSymbolError(RegexSyntaxError):
    def __init__(self, token: str, position: int):
        super().__init__(f"unknown symbol {token!r}", position)
        self.token = token


class ForeignSymbolError(WorkbenchError):
    """A word contains a symbol outside the automaton's alphabet."""


# --------------------------------------------------------------------------
# Syntax trees


class Regex:
    __slots__ = ()


@dataclass(frozen=True)
class Empty(Regex):
    pass


@dataclass(frozen=True)
class Epsilon(Regex):
    pass


@dataclass(frozen=True)
class Lit(Regex):
    symbol: Symbol


@dataclass(frozen=True)
class Class(Regex):
    symbols: frozenset[Symbol]

    def __post_init__(self):
        if not self.symbols:
            raise ValueError("empty symbol class")


@dataclass(frozen=True)
class Union(Regex):
    left: Regex
    right: Regex


@dataclass(frozen=True)
class Concat(Regex):
    left: Regex
    right: Regex


@dataclass(frozen=True)
class Star(Regex):
    inner: Regex


@dataclass(frozen=True)
class Plus(Regex):
    inner: Regex


def union_all(parts) -> Regex:
    """Left-folded union; the empty union is the empty language."""
    parts = list(parts)
    if not parts:
        return Empty()
    out = parts[0]
    for p in parts[1:]:
        out = Union(out, p)
    return out


def concat_all(parts) -> Regex:
    parts = list(parts)
    if not parts:
        return Epsilon()
    out = parts[0]
    for p in parts[1:]:
        out = Concat(out, p)
    return out


def ast_size(r: Regex) -> int:
    if isinstance(r, (Empty, Epsilon, Lit, Class)):
        return 1
    if isinstance(r, (Union, Concat)):
        return 1 + ast_size(r.left) + ast_size(r.right)
    if isinstance(r, (Star, Plus)):
        return 1 + ast_size(r.inner)
    raise TypeError(f"not a regex: {r!r}")


def literals_used(r: Regex) -> frozenset[Symbol]:
    if isinstance(r, Lit):
        return frozenset([r.symbol])
    if isinstance(r, Class):
        return r.symbols
    if isinstance(r, (Union, Concat)):
        return literals_used(r.left) | literals_used(r.right)
    if isinstance(r, (Star, Plus)):
        return literals_used(r.inner)
    return frozenset()


# --------------------------------------------------------------------------
# Parsing

_NAME_CHARS = set("ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789_:-")

_FIELD_VALUES = {0: {"A", "B"}, 1: {"H", "V"}, 2: {"W", "C"}}


def _scan(text: str):
    """Yield (kind, value, position) tokens."""
    i, n = 0, len(text)
    while i < n:
        c = text[i]
        if c.isspace():
            i += 1
            continue
        if c == "(":
            yield ("lparen", None, i)
            i += 1
        elif c == ")":
            yield ("rparen", None, i)
            i += 1
        elif c == "+":
            yield ("union", None, i)
            i += 1
        elif c == "*":
            yield ("star", None, i)
            i += 1
        elif c == "^":
            if i + 1 >= n or text[i + 1] != "+":
                raise RegexSyntaxError("expected '+' after '^'", i)
            yield ("plus", None, i)
            i += 2
        elif c == "[" or text[i:i + 3] in ("G:[", "R:["):
            color = None
            start = i
            if c != "[":
                color = Color.GREEN if c == "G" else Color.RED
                i += 2
            close = text.find("]", i)
            if close < 0:
                raise RegexSyntaxError("unclosed class literal", start)
            fields = [f.strip() for f in text[i + 1:close].split(",")]
            yield ("class", (color, fields), start)
            i = close + 1
        elif c in _NAME_CHARS:
            j = i
            while j < n and text[j] in _NAME_CHARS:
                j += 1
            name = text[i:j]
            if name in ("S0", "G:S0", "R:S0"):
                color = {"G": Color.GREEN, "R": Color.RED}.get(name[0]) if ":" in name else None
                yield ("sigma0", color, i)
            elif name == "EMPTY":
                yield ("empty", None, i)
            elif name == "EPS":
                yield ("eps", None, i)
            else:
                yield ("name", name, i)
            i = j
        else:
            raise RegexSyntaxError(f"unexpected character {c!r}", i)
    yield ("end", None, n)


def _expand_class(alphabet: Alphabet, color: Color | None, fields, pos: int) -> frozenset[Symbol]:
    if len(fields) != 4:
        raise RegexSyntaxError("class literal needs exactly four fields", pos)
    for k in range(3):
        if fields[k] != "*" and fields[k] not in _FIELD_VALUES[k]:
            raise RegexSyntaxError(f"bad class field {fields[k]!r}", pos)
    t, d, k, s = fields
    out = []
    for cand in alphabet.sigma0(color):
        if t != "*" and cand.tag != t:
            continue
        if d != "*" and cand.direction != d:
            continue
        if k != "*" and cand.temperature != k:
            continue
        if s != "*" and cand.shade != s:
            continue
        out.append(cand)
    if not out:
        raise RegexSyntaxError("class literal matches no alphabet symbol", pos)
    return frozenset(out)


_ATOM_STARTS = ("lparen", "name", "class", "sigma0", "empty", "eps")


class _Parser:
    def __init__(self, text: str, alphabet: Alphabet):
        self.alphabet = alphabet
        self.tokens = list(_scan(text))
        self.k = 0

    def peek(self):
        return self.tokens[self.k]

    def take(self):
        tok = self.tokens[self.k]
        self.k += 1
        return tok

    def union(self) -> Regex:
        out = self.concat()
        while self.peek()[0] == "union":
            self.take()
            out = Union(out, self.concat())
        return out

    def concat(self) -> Regex:
        out = self.postfix()
        while self.peek()[0] in _ATOM_STARTS:
            out = Concat(out, self.postfix())
        return out

    def postfix(self) -> Regex:
        out = self.atom()
        while self.peek()[0] in ("star", "plus"):
            kind, _, _ = self.take()
            out = Star(out) if kind == "star" else Plus(out)
        return out

    def atom(self) -> Regex:
        kind, value, pos = self.take()
        if kind == "lparen":
            out = self.union()
            k2, _, p2 = self.take()
            if k2 != "rparen":
                raise RegexSyntaxError("expected ')'", p2)
            return out
        if kind == "name":
            try:
                s = Symbol(value)
            except SymbolError:
                raise UnknownSymbolError(value, pos) from None
            if s not in self.alphabet:
                raise UnknownSymbolError(value, pos)
            return Lit(s)
        if kind == "class":
            color, fields = value
            return Class(_expand_class(self.alphabet, color, fields, pos))
        if kind == "sigma0":
            frag = self.alphabet.sigma0(value)
            if not frag:
                raise RegexSyntaxError("alphabet has no four-field symbols", pos)
            return Class(frozenset(frag))
        if kind == "empty":
            return Empty()
        if kind == "eps":
            return Epsilon()
        raise RegexSyntaxError("expected an atom", pos)


def parse_regex(text: str, alphabet: Alphabet) -> Regex:
    p = _Parser(text, alphabet)
    out = p.union()
    kind, _, pos = p.peek()
    if kind != "end":
        raise RegexSyntaxError("trailing input", pos)
    return out


def parse_word(text: str, alphabet: Alphabet) -> Word:
    """Parse a whitespace-separated sequence of symbol tokens."""
    out = []
    for tok in text.split():
        try:
            s = Symbol(tok)
        except SymbolError:
            raise SymbolError(f"bad symbol token in word: {tok!r}") from None
        if s not in alphabet:
            raise ForeignSymbolError(f"symbol {tok!r} not in alphabet")
        out.append(s)
    return tuple(out)


# --------------------------------------------------------------------------
# Rendering

_PREC_UNION, _PREC_CONCAT, _PREC_POSTFIX, _PREC_ATOM = 1, 2, 3, 4


def _class_token(symbols: frozenset[Symbol], alphabet: Alphabet) -> str:
    colors = {s.color for s in symbols}
    if len(colors) > 1:
        raise ValueError("class mixes colors; not serializable")
    color = colors.pop()
    prefix = f"{color.value}:" if color else ""
    fragment = alphabet.sigma0(color)
    if symbols == frozenset(fragment):
        return f"{prefix}S0"
    fields = []
    for attr, full in (("tag", {"A", "B"}), ("direction", {"H", "V"}),
                       ("temperature", {"W", "C"}), ("shade", None)):
        values = {getattr(s, attr) for s in symbols}
        admitted = {getattr(s, attr) for s in fragment}
        if full is not None:
            admitted &= full
        if values == admitted:
            fields.append("*")
        elif len(values) == 1:
            v = values.pop()
            if v is None:
                raise ValueError("class of shade-stripped symbols is not "
                                 "expressible; use explicit symbols")
            fields.append(v)
        else:
            fields.append(None)
    if None not in fields:
        token = f"{prefix}[{','.join(fields)}]"
        if _expand_class(alphabet, color, fields, 0) == symbols:
            return token
    parts = []
    for s in sorted(symbols, key=alphabet.index):
        if s.shade is None and s.is_sigma0:
            raise ValueError("class not expressible as class literals")
        parts.append(f"{prefix}[{s.tag},{s.direction},{s.temperature},{s.shade}]"
                     if s.is_sigma0 else s.name)
    return "(" + " + ".join(parts) + ")"


def _render(r: Regex, alphabet: Alphabet) -> tuple[str, int]:
    if isinstance(r, Empty):
        return "EMPTY", _PREC_ATOM
    if isinstance(r, Epsilon):
        return "EPS", _PREC_ATOM
    if isinstance(r, Lit):
        return r.symbol.name, _PREC_ATOM
    if isinstance(r, Class):
        return _class_token(r.symbols, alphabet), _PREC_ATOM
    if isinstance(r, (Union, Concat)):
        prec = _PREC_UNION if isinstance(r, Union) else _PREC_CONCAT
        sep = " + " if isinstance(r, Union) else " "
        lt, lp = _render(r.left, alphabet)
        rt, rp = _render(r.right, alphabet)
        if lp < prec:
            lt = f"({lt})"
        if rp <= prec:
            rt = f"({rt})"
        return f"{lt}{sep}{rt}", prec
    if isinstance(r, (Star, Plus)):
        it, ip = _render(r.inner, alphabet)
        if ip < _PREC_ATOM:
            it = f"({it})"
        return it + ("*" if isinstance(r, Star) else "^+"), _PREC_POSTFIX
    raise TypeError(f"not a regex: {r!r}")


def render_regex(r: Regex, alphabet: Alphabet) -> str:
    """Serialize so that reparsing yields an equal syntax tree, for every
    tree whose classes are expressible as class literals.  Other classes
    fall back to a parenthesized union of singletons, which reparses to a
    language-equal tree."""
    return _render(r, alphabet)[0]


# --------------------------------------------------------------------------
# Automata

_INF = 10 ** 9


@dataclass(frozen=True)
class Nfa:
    """Epsilon-free automaton over an ordered alphabet."""

    alphabet: Alphabet
    n_states: int
    transitions: frozenset[tuple[int, Symbol, int]]
    start: int
    accepting: frozenset[int]

    @cached_property
    def delta(self) -> dict[int, dict[Symbol, frozenset[int]]]:
        rows: dict[int, dict[Symbol, set[int]]] = {}
        for src, s, dst in self.transitions:
            rows.setdefault(src, {}).setdefault(s, set()).add(dst)
        return {src: {s: frozenset(ds) for s, ds in row.items()}
                for src, row in rows.items()}

    @cached_property
    def min_dist(self) -> tuple[int, ...]:
        """Per state, the least word length reaching acceptance."""
        rev: dict[int, set[int]] = {}
        for src, _, dst in self.transitions:
            rev.setdefault(dst, set()).add(src)
        dist = [_INF] * self.n_states
        queue = deque()
        for s in self.accepting:
            dist[s] = 0
            queue.append(s)
        while queue:
            v = queue.popleft()
            for u in rev.get(v, ()):
                if dist[u] == _INF:
                    dist[u] = dist[v] + 1
                    queue.append(u)
        return tuple(dist)

    @cached_property
    def _step_cache(self) -> dict:
        return {}

    def step(self, states: frozenset[int], s: Symbol) -> frozenset[int]:
        key = (states, s)
        cached = self._step_cache.get(key)
        if cached is None:
            out: set[int] = set()
            delta = self.delta
            for st in states:
                row = delta.get(st)
                if row:
                    out |= row.get(s, frozenset())
            cached = frozenset(out)
            self._step_cache[key] = cached
        return cached


def thompson_nfa(r: Regex, alphabet: Alphabet):
    """Classic construction with epsilon moves.

    Returns (state count, transitions with None for epsilon, start, accept).
    State count stays within 2 * ast_size(r) + 2.
    """
    transitions: list[tuple[int, Symbol | None, int]] = []
    counter = [0]

    def fresh() -> int:
        counter[0] += 1
        return counter[0] - 1

    def build(node: Regex) -> tuple[int, int]:
        if isinstance(node, Empty):
            return fresh(), fresh()
        if isinstance(node, Epsilon):
            s, a = fresh(), fresh()
            transitions.append((s, None, a))
            return s, a
        if isinstance(node, Lit):
            if node.symbol not in alphabet:
                raise SymbolError(f"literal {node.symbol.name!r} not in alphabet")
            s, a = fresh(), fresh()
            transitions.append((s, node.symbol, a))
            return s, a
        if isinstance(node, Class):
            s, a = fresh(), fresh()
            for x in sorted(node.symbols, key=alphabet.index):
                transitions.append((s, x, a))
            return s, a
        if isinstance(node, Union):
            ls, la = build(node.left)
            rs, ra = build(node.right)
            s, a = fresh(), fresh()
            transitions.extend([(s, None, ls), (s, None, rs), (la, None, a), (ra, None, a)])
            return s, a
        if isinstance(node, Concat):
            ls, la = build(node.left)
            rs, ra = build(node.right)
            transitions.append((la, None, rs))
            return ls, ra
        if isinstance(node, Star):
            is_, ia = build(node.inner)
            s, a = fresh(), fresh()
            transitions.extend([(s, None, is_), (s, None, a), (ia, None, is_), (ia, None, a)])
            return s, a
        if isinstance(node, Plus):
            is_, ia = build(node.inner)
            s, a = fresh(), fresh()
            transitions.extend([(s, None, is_), (ia, None, is_), (ia, None, a)])
            return s, a
        raise TypeError(f"not a regex: {node!r}")

    start, accept = build(r)
    return counter[0], transitions, start, accept


def compile_nfa(r: Regex, alphabet: Alphabet) -> Nfa:
    """Compile via the classic construction, then remove epsilon moves and
    states that are unreachable or cannot reach acceptance."""
    n, transitions, start, accept = thompson_nfa(r, alphabet)

    eps: dict[int, list[int]] = {}
    labeled: dict[int, list[tuple[Symbol, int]]] = {}
    for src, s, dst in transitions:
        if s is None:
            eps.setdefault(src, []).append(dst)
        else:
            labeled.setdefault(src, []).append((s, dst))

    def closure(state: int) -> frozenset[int]:
        seen = {state}
        queue = deque([state])
        while queue:
            v = queue.popleft()
            for u in eps.get(v, ()):
                if u not in seen:
                    seen.add(u)
                    queue.append(u)
        return frozenset(seen)

    closures = [closure(s) for s in range(n)]
    flat: set[tuple[int, Symbol, int]] = set()
    accepting: set[int] = set()
    for s in range(n):
        for t in closures[s]:
            if t == accept:
                accepting.add(s)
            for sym, dst in labeled.get(t, ()):
                flat.add((s, sym, dst))

    # Keep states reachable from the start and able to reach acceptance.
    fwd: dict[int, set[int]] = {}
    for src, _, dst in flat:
        fwd.setdefault(src, set()).add(dst)
    reach = {start}
    queue = deque([start])
    while queue:
        v = queue.popleft()
        for u in fwd.get(v, ()):
            if u not in reach:
                reach.add(u)
                queue.append(u)
    rev: dict[int, set[int]] = {}
    for src, _, dst in flat:
        rev.setdefault(dst, set()).add(src)
    co = set(accepting)
    queue = deque(accepting)
    while queue:
        v = queue.popleft()
        for u in rev.get(v, ()):
            if u not in co:
                co.add(u)
                queue.append(u)
    keep = sorted((reach & co) | {start})
    renum = {old: i for i, old in enumerate(keep)}
    kept = frozenset((renum[a], s, renum[b]) for a, s, b in flat
                     if a in renum and b in renum)
    return Nfa(alphabet=alphabet, n_states=len(keep), transitions=kept,
               start=renum[start],
               accepting=frozenset(renum[s] for s in accepting if s in renum))


def accepts(n: Nfa, word: Word) -> bool:
    for s in word:
        if s not in n.alphabet:
            raise ForeignSymbolError(f"symbol {s.name!r} not in alphabet")
    cur = frozenset([n.start])
    for s in word:
        cur = n.step(cur, s)
        if not cur:
            return False
    return bool(cur & n.accepting)


def iter_words(n: Nfa, max_len: int):
    """Words of the language with length at most max_len, shortlex order.

    Iterative deepening: for each length, a depth-first walk of the live
    prefix tree in alphabet order, pruned by distance-to-acceptance.
    """
    symbols = n.alphabet.symbols
    dist = n.min_dist
    acc = n.accepting
    root = frozenset([n.start])
    prefix: list[Symbol] = []

    def walk(states: frozenset[int], remaining: int):
        if remaining == 0:
            if states & acc:
                yield tuple(prefix)
            return
        for s in symbols:
            nxt = n.step(states, s)
            if not nxt:
                continue
            if min(dist[t] for t in nxt) > remaining - 1:
                continue
            prefix.append(s)
            yield from walk(nxt, remaining - 1)
            prefix.pop()

    if n.n_states == 0:
        return
    for length in range(max_len + 1):
        if dist[n.start] > length:
            continue
        yield from walk(root, length)


def enumerate_words(n: Nfa, max_len: int) -> list[Word]:
    return list(iter_words(n, max_len))


def shortest_word(n: Nfa) -> Word | None:
    """Shortest accepted word, shortlex tie-break; None for the empty
    language."""
    if n.n_states == 0:
        return None
    key = n.alphabet.word_key
    acc = n.accepting
    frontier: dict[frozenset[int], Word] = {frozenset([n.start]): ()}
    visited = set(frontier)
    while frontier:
        hits = [w for ss, w in frontier.items() if ss & acc]
        if hits:
            return min(hits, key=key)
        nxt: dict[frozenset[int], Word] = {}
        for ss, w in sorted(frontier.items(), key=lambda kv: key(kv[1])):
            for s in n.alphabet.symbols:
                stepped = n.step(ss, s)
                if not stepped or stepped in visited:
                    continue
                cand = w + (s,)
                old = nxt.get(stepped)
                if old is None or key(cand) < key(old):
                    nxt[stepped] = cand
        visited |= nxt.keys()
        frontier = nxt
    return None
