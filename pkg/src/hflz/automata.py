"""Labeled transition systems, deterministic automata and parity word automata."""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from typing import Optional


class AutomatonError(Exception):
    pass


@dataclass(frozen=True)
class Lts:
    states: tuple
    actions: frozenset
    transitions: frozenset  # of (src, label, dst)
    init: str

    def __post_init__(self):
        if self.init not in self.states:
            raise AutomatonError(f"initial state {self.init} is not a state")
        for s, a, d in self.transitions:
            if s not in self.states or d not in self.states:
                raise AutomatonError(f"transition ({s}, {a}, {d}) uses an unknown state")
            if a not in self.actions:
                raise AutomatonError(f"transition label {a} is not an action")

    def succ(self, q: str, a: str) -> list:
        return sorted(d for s, b, d in self.transitions if s == q and b == a)

    def index(self, q: str) -> int:
        return self.states.index(q)


def make_lts(states, transitions, init, actions=None) -> Lts:
    transitions = frozenset(tuple(t) for t in transitions)
    acts = set(actions or ()) | {a for _, a, _ in transitions}
    return Lts(tuple(states), frozenset(acts), transitions, init)


def trivial_lts() -> Lts:
    """L_0: one state, no transitions."""
    return make_lts(["q0"], [], "q0")


@dataclass(frozen=True)
class DetAutomaton:
    states: tuple
    alphabet: frozenset
    delta: dict  # (q, a) -> q'
    init: str

    def run(self, word) -> Optional[str]:
        q = self.init
        for a in word:
            q = self.delta.get((q, a))
            if q is None:
                return None
        return q

    def accepts(self, word) -> bool:
        return self.run(word) is not None

    def unreachable_states(self) -> set:
        reach = {self.init}
        todo = [self.init]
        while todo:
            q = todo.pop()
            for (s, _), d in self.delta.items():
                if s == q and d not in reach:
                    reach.add(d)
                    todo.append(d)
        return set(self.states) - reach


def det_automaton_to_lts(A: DetAutomaton) -> Lts:
    trans = [(q, a, d) for (q, a), d in A.delta.items()]
    return make_lts(A.states, trans, A.init, A.alphabet)


def check_det_automaton(A: DetAutomaton) -> None:
    """Warn when the automaton has unreachable states (minimality is the caller's job)."""
    bad = A.unreachable_states()
    if bad:
        warnings.warn(f"deterministic automaton has unreachable states: {sorted(bad)}")


@dataclass(frozen=True)
class ParityAutomaton:
    states: tuple
    alphabet: frozenset
    delta: dict  # (q, a) -> frozenset of states
    init: str
    priority: dict

    @property
    def max_priority(self) -> int:
        return max(self.priority.values()) if self.priority else 0

    def succ(self, q: str, a: str) -> list:
        return sorted(self.delta.get((q, a), ()))

    def is_complete(self) -> bool:
        return all(self.delta.get((q, a)) for q in self.states for a in self.alphabet)


def make_parity(states, priority: dict, transitions, init, alphabet=None) -> ParityAutomaton:
    delta = {}
    for q, a, d in transitions:
        delta.setdefault((q, a), set()).add(d)
    alpha = set(alphabet or ()) | {a for _, a, _ in transitions}
    return ParityAutomaton(tuple(states), frozenset(alpha),
                           {k: frozenset(v) for k, v in delta.items()}, init, dict(priority))


def complete_parity(A: ParityAutomaton, alphabet=None, dead: str = "q_dead") -> ParityAutomaton:
    """Send every missing transition to a fresh dead state of priority 1."""
    alpha = frozenset(A.alphabet | set(alphabet or ()))
    missing = [(q, a) for q in A.states for a in sorted(alpha) if not A.delta.get((q, a))]
    if not missing:
        if alpha == A.alphabet:
            return A
        return ParityAutomaton(A.states, alpha, A.delta, A.init, A.priority)
    while dead in A.states:
        dead += "_"
    delta = dict(A.delta)
    for k in missing:
        delta[k] = frozenset([dead])
    for a in alpha:
        delta[(dead, a)] = frozenset([dead])
    prio = dict(A.priority)
    prio[dead] = 1
    return ParityAutomaton(A.states + (dead,), alpha, delta, A.init, prio)


def _sccs(nodes, succ):
    """Tarjan's algorithm (iterative). Returns a list of sets."""
    index, low, on, stack, out = {}, {}, set(), [], []
    counter = 0
    for root in nodes:
        if root in index:
            continue
        work = [(root, iter(succ(root)))]
        index[root] = low[root] = counter
        counter += 1
        stack.append(root)
        on.add(root)
        while work:
            v, it = work[-1]
            advanced = False
            for w in it:
                if w not in index:
                    index[w] = low[w] = counter
                    counter += 1
                    stack.append(w)
                    on.add(w)
                    work.append((w, iter(succ(w))))
                    advanced = True
                    break
                if w in on:
                    low[v] = min(low[v], index[w])
            if advanced:
                continue
            work.pop()
            if work:
                low[work[-1][0]] = min(low[work[-1][0]], low[v])
            if low[v] == index[v]:
                comp = set()
                while True:
                    w = stack.pop()
                    on.discard(w)
                    comp.add(w)
                    if w == v:
                        break
                out.append(comp)
    return out


def parity_accepts_lasso(A: ParityAutomaton, stem, cycle) -> bool:
    """Does some run of A on stem . cycle^omega satisfy the parity condition?"""
    stem, cycle = list(stem), list(cycle)
    if not cycle:
        raise AutomatonError("lasso cycle must be nonempty")
    cur = {A.init}
    for a in stem:
        cur = {d for q in cur for d in A.succ(q, a)}
    n = len(cycle)

    def succ(node):
        q, i = node
        return [(d, (i + 1) % n) for d in A.succ(q, cycle[i])]

    # reachable product nodes
    reach = {(q, 0) for q in cur}
    todo = list(reach)
    while todo:
        v = todo.pop()
        for w in succ(v):
            if w not in reach:
                reach.add(w)
                todo.append(w)
    prios = sorted({A.priority[q] for q, _ in reach})
    for p in prios:
        if p % 2:
            continue
        sub = {v for v in reach if A.priority[v[0]] <= p}
        for comp in _sccs(sorted(sub), lambda v: [w for w in succ(v) if w in sub]):
            nontrivial = len(comp) > 1 or any(w in comp for w in succ(next(iter(comp))))
            if nontrivial and any(A.priority[v[0]] == p for v in comp):
                return True
    return False


def parity_accepts_lasso_bruteforce(A: ParityAutomaton, stem, cycle, rounds: int = 3) -> bool:
    """Oracle: enumerate runs on stem . cycle^k and look for a repeated configuration
    whose loop segment has an even maximum."""
    stem, cycle = list(stem), list(cycle)
    n = len(cycle)
    k = len(A.states) + 1
    word = stem + cycle * (k * rounds)
    start = len(stem)
    # state sequences via DFS (small automata only)
    results = False

    def dfs(pos, q, trail):
        nonlocal results
        if results:
            return
        if pos >= start and (pos - start) % n == 0:
            for j, (p0, q0) in enumerate(trail):
                if q0 == q and p0 >= start and (pos - p0) % n == 0 and pos > p0:
                    seg = [A.priority[s] for _, s in trail[j:]]
                    if max(seg) % 2 == 0:
                        results = True
                    return
        if pos == len(word):
            return
        for d in A.succ(q, word[pos]):
            dfs(pos + 1, d, trail + [(pos + 1, d)])

    dfs(0, A.init, [(0, A.init)])
    return results


# ---------------------------------------------------------------------------
# text formats


def _lines(text: str):
    for no, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield no, line.split()


def parse_lts(text: str) -> Lts:
    states, trans, init = [], [], None
    for no, toks in _lines(text):
        if toks[0] == "state" and len(toks) in (2, 3):
            states.append(toks[1])
            if len(toks) == 3:
                if toks[2] != "init":
                    raise AutomatonError(f"line {no}: expected 'init'")
                init = toks[1]
        elif toks[0] == "trans" and len(toks) == 4:
            trans.append(tuple(toks[1:]))
        else:
            raise AutomatonError(f"line {no}: cannot parse {' '.join(toks)!r}")
    if init is None:
        if not states:
            raise AutomatonError("no states")
        init = states[0]
    return make_lts(states, trans, init)


def show_lts(L: Lts) -> str:
    lines = [f"state {q}" + (" init" if q == L.init else "") for q in L.states]
    lines += [f"trans {s} {a} {d}" for s, a, d in sorted(L.transitions)]
    return "\n".join(lines) + "\n"


def parse_parity(text: str) -> ParityAutomaton:
    states, prio, trans, init = [], {}, [], None
    for no, toks in _lines(text):
        if toks[0] == "state" and len(toks) in (4, 5) and toks[2] == "prio":
            states.append(toks[1])
            prio[toks[1]] = int(toks[3])
            if len(toks) == 5:
                if toks[4] != "init":
                    raise AutomatonError(f"line {no}: expected 'init'")
                init = toks[1]
        elif toks[0] == "trans" and len(toks) >= 4:
            for d in toks[3:]:
                trans.append((toks[1], toks[2], d))
        else:
            raise AutomatonError(f"line {no}: cannot parse {' '.join(toks)!r}")
    if init is None:
        if not states:
            raise AutomatonError("no states")
        init = states[0]
    for s, _, d in trans:
        if s not in prio or d not in prio:
            raise AutomatonError(f"transition uses an unknown state ({s} or {d})")
    return make_parity(states, prio, trans, init)


def show_parity(A: ParityAutomaton) -> str:
    lines = [f"state {q} prio {A.priority[q]}" + (" init" if q == A.init else "") for q in A.states]
    for (q, a), ds in sorted(A.delta.items()):
        lines.append(f"trans {q} {a} {' '.join(sorted(ds))}")
    return "\n".join(lines) + "\n"


def parse_dfa(text: str) -> DetAutomaton:
    states, delta, init, alpha = [], {}, None, set()
    for no, toks in _lines(text):
        if toks[0] == "state" and len(toks) in (2, 3):
            states.append(toks[1])
            if len(toks) == 3:
                if toks[2] != "init":
                    raise AutomatonError(f"line {no}: expected 'init'")
                init = toks[1]
        elif toks[0] == "trans" and len(toks) == 4:
            key = (toks[1], toks[2])
            if key in delta and delta[key] != toks[3]:
                raise AutomatonError(f"line {no}: nondeterministic transition")
            delta[key] = toks[3]
            alpha.add(toks[2])
        else:
            raise AutomatonError(f"line {no}: cannot parse {' '.join(toks)!r}")
    if init is None:
        if not states:
            raise AutomatonError("no states")
        init = states[0]
    for (s, _), d in delta.items():
        if s not in states or d not in states:
            raise AutomatonError(f"transition uses an unknown state ({s} or {d})")
    return DetAutomaton(tuple(states), frozenset(alpha), delta, init)


def show_dfa(A: DetAutomaton) -> str:
    lines = [f"state {q}" + (" init" if q == A.init else "") for q in A.states]
    lines += [f"trans {q} {a} {d}" for (q, a), d in sorted(A.delta.items())]
    return "\n".join(lines) + "\n"
