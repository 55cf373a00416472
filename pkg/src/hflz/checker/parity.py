"""Max-parity games: Zielonka's recursive algorithm and a brute-force oracle.

Player 0 (Proponent) wins a play iff the largest priority seen infinitely
often is even.  A node without successors loses for its owner.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field

from ..automata import _sccs


@dataclass
class Game:
    owner: list = field(default_factory=list)      # 0 or 1
    priority: list = field(default_factory=list)
    succ: list = field(default_factory=list)       # list of lists of node ids

    def add(self, owner: int, priority: int) -> int:
        self.owner.append(owner)
        self.priority.append(priority)
        self.succ.append([])
        return len(self.owner) - 1

    def edge(self, u: int, v: int) -> None:
        self.succ[u].append(v)

    def __len__(self):
        return len(self.owner)

    def pred(self) -> list:
        out = [[] for _ in self.owner]
        for u, vs in enumerate(self.succ):
            for v in vs:
                out[v].append(u)
        return out


def attractor(g: Game, nodes: set, target: set, player: int, pred=None) -> set:
    """Nodes in `nodes` from which `player` can force a visit to `target`."""
    pred = pred if pred is not None else g.pred()
    attr = set(target)
    count = {v: sum(1 for w in g.succ[v] if w in nodes) for v in nodes}
    todo = list(attr)
    while todo:
        v = todo.pop()
        for u in pred[v]:
            if u not in nodes or u in attr:
                continue
            if g.owner[u] == player:
                attr.add(u)
                todo.append(u)
            else:
                count[u] -= 1
                if count[u] == 0:
                    attr.add(u)
                    todo.append(u)
    return attr


def _dead_ends(g: Game, nodes: set) -> tuple:
    """Winning regions forced by dead ends inside the subgame."""
    w = (set(), set())
    for v in nodes:
        if not any(s in nodes for s in g.succ[v]):
            w[1 - g.owner[v]].add(v)
    return w


def _zielonka(g: Game, nodes: set, pred) -> tuple:
    if not nodes:
        return set(), set()
    dead = _dead_ends(g, nodes)
    if dead[0] or dead[1]:
        a0 = attractor(g, nodes, dead[0], 0, pred)
        a1 = attractor(g, nodes - a0, dead[1], 1, pred)
        # leaving the remainder only helps the player who owns the attractor
        r0, r1 = _zielonka(g, nodes - a0 - a1, pred)
        return r0 | a0, r1 | a1
    d = max(g.priority[v] for v in nodes)
    i = d % 2
    top = {v for v in nodes if g.priority[v] == d}
    a = attractor(g, nodes, top, i, pred)
    w = list(_zielonka(g, nodes - a, pred))
    if not w[1 - i]:
        res = [set(), set()]
        res[i] = set(nodes)
        return tuple(res)
    b = attractor(g, nodes, w[1 - i], 1 - i, pred)
    w2 = list(_zielonka(g, nodes - b, pred))
    res = [set(), set()]
    res[i] = w2[i]
    res[1 - i] = w2[1 - i] | b
    return tuple(res)


def solve(g: Game, nodes=None) -> tuple:
    """Return (W0, W1) for the game restricted to nodes (all by default)."""
    nodes = set(range(len(g))) if nodes is None else set(nodes)
    return _zielonka(g, nodes, g.pred())


def winner(g: Game, v: int) -> int:
    w0, _ = solve(g)
    return 0 if v in w0 else 1


def _odd_cycle_reachable(g: Game, start: int, choice: dict) -> bool:
    """In the one-player graph after fixing player 0's choices, can player 1
    reach a cycle whose maximal priority is odd (or a dead end of player 0)?"""
    def succ(v):
        if g.owner[v] == 0:
            return [choice[v]] if v in choice else []
        return g.succ[v]

    reach, todo = {start}, [start]
    while todo:
        v = todo.pop()
        for w in succ(v):
            if w not in reach:
                reach.add(w)
                todo.append(w)
    for v in reach:
        if g.owner[v] == 0 and not g.succ[v]:
            return True
    for p in sorted({g.priority[v] for v in reach}):
        if p % 2 == 0:
            continue
        sub = {v for v in reach if g.priority[v] <= p}
        for comp in _sccs(sorted(sub), lambda v: [w for w in succ(v) if w in sub]):
            first = next(iter(comp))
            nontrivial = len(comp) > 1 or first in succ(first)
            if nontrivial and any(g.priority[v] == p for v in comp):
                return True
    return False


def brute_force_winner(g: Game, v: int) -> int:
    """Oracle: player 0 wins iff some positional strategy beats every play.

    Player 1's dead ends are handled by the absence of successors.
    Exponential; meant for games of at most about 8 nodes.
    """
    mine = [u for u in range(len(g)) if g.owner[u] == 0 and g.succ[u]]
    for picks in itertools.product(*[g.succ[u] for u in mine]):
        choice = dict(zip(mine, picks))
        if not _odd_cycle_reachable(g, v, choice):
            return 0
    return 1


def random_game(rng: random.Random, n: int, max_prio: int = 4, density: float = 0.35,
                dead_ends: bool = True) -> Game:
    g = Game()
    for _ in range(n):
        g.add(rng.randrange(2), rng.randrange(max_prio + 1))
    for u in range(n):
        for v in range(n):
            if rng.random() < density:
                g.edge(u, v)
        if not dead_ends and not g.succ[u]:
            g.edge(u, rng.randrange(n))
    return g
