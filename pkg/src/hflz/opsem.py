"""Labeled transition semantics of source programs, used as a brute-force oracle."""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Optional

from .surface import (
    Abs, App, BinOp, Cond, Def, Event, If, IntLit, NonDet, PredCond, AndCond, OrCond,
    Program, ProgramError, Term, Unit, Var, spine, subst, map_term, normalize_program,
)

EPS = ""


class StuckError(ProgramError):
    """A redex that the semantics cannot reduce (ill-typed or partial application)."""


def eval_int(t: Term) -> int:
    if isinstance(t, IntLit):
        return t.value
    if isinstance(t, BinOp):
        a, b = eval_int(t.left), eval_int(t.right)
        if t.op == "+":
            return a + b
        if t.op == "-":
            return a - b
        if t.op == "*":
            return a * b
        raise StuckError(f"unknown operator {t.op}")
    raise StuckError(f"not a closed integer expression: {t!r}")


def eval_cond(c: Cond) -> bool:
    if isinstance(c, PredCond):
        vals = [eval_int(a) for a in c.args]
        if c.op == "even":
            return vals[0] % 2 == 0
        if c.op == "odd":
            return vals[0] % 2 == 1
        a, b = vals
        return {"=": a == b, "!=": a != b, "<": a < b, "<=": a <= b,
                ">": a > b, ">=": a >= b}[c.op]
    if isinstance(c, AndCond):
        return eval_cond(c.left) and eval_cond(c.right)
    if isinstance(c, OrCond):
        return eval_cond(c.left) or eval_cond(c.right)
    raise StuckError(f"unknown condition {c!r}")


def _fold(t: Term) -> Term:
    # closed integer arguments are evaluated eagerly; keeps states small
    if isinstance(t, BinOp) and isinstance(t.left, IntLit) and isinstance(t.right, IntLit):
        return IntLit(eval_int(t))
    return t


def fold_ints(t: Term) -> Term:
    return map_term(t, _fold)


def _beta(params, body, args) -> Term:
    sub = {x: fold_ints(a) for x, a in zip(params, args)}
    out = subst(body, sub)
    for a in args[len(params):]:
        out = App(out, a)
    return out


def step(p: Program, t: Term, defs: Optional[dict] = None) -> list:
    """All one-step successors of t as (label, term); label "" is a silent step."""
    defs = defs if defs is not None else p.def_map
    if isinstance(t, Unit):
        return []
    if isinstance(t, Event):
        return [(t.label, t.body)]
    if isinstance(t, NonDet):
        return [(EPS, t.left), (EPS, t.right)]
    if isinstance(t, If):
        return [(EPS, t.then_ if eval_cond(t.cond) else t.else_)]
    head, args = spine(t)
    if isinstance(head, Var):
        d = defs.get(head.name)
        if d is None:
            raise StuckError(f"unbound function {head.name}")
        if len(args) < len(d.params):
            raise StuckError(f"partial application of {head.name} at redex position")
        return [(EPS, _beta(d.params, d.body, args))]
    if isinstance(head, Abs):
        if len(args) < len(head.params):
            raise StuckError("partial application of an abstraction at redex position")
        return [(EPS, _beta(head.params, head.body, args))]
    raise StuckError(f"cannot reduce {t!r}")


def initial_term(p: Program) -> Term:
    return p.main


@dataclass
class TraceSet:
    finite: set = field(default_factory=set)
    maximal: set = field(default_factory=set)
    frontier: set = field(default_factory=set)


def enumerate_traces(p: Program, depth: int) -> TraceSet:
    """Breadth-first exploration of all reduction paths of at most depth steps.

    Traces are tuples of event labels.
    """
    defs = p.def_map
    out = TraceSet()
    level = {((), initial_term(p))}
    out.finite.add(())
    for _ in range(depth):
        nxt = set()
        for trace, t in level:
            succ = step(p, t, defs)
            if not succ:
                out.maximal.add(trace)
                continue
            for lab, t2 in succ:
                tr = trace + (lab,) if lab else trace
                out.finite.add(tr)
                nxt.add((tr, t2))
        level = nxt
        if not level:
            break
    for trace, t in level:
        if isinstance(t, Unit):
            out.maximal.add(trace)
        else:
            out.frontier.add((trace, t))
    return out


class Choice(str, Enum):
    L = "L"
    R = "R"


@dataclass
class ChoiceResult:
    trace: tuple
    term: Term
    remaining: tuple
    exhausted: bool = False


def reduce_with_choice(p: Program, t: Term, pi, max_steps: int = 10_000) -> ChoiceResult:
    """Follow the choice sequence pi (over "L"/"R") until it runs out or t is normal."""
    defs = p.def_map
    pi = tuple(pi)
    trace = ()
    for _ in range(max_steps):
        if isinstance(t, Unit):
            break
        if isinstance(t, NonDet):
            if not pi:
                return ChoiceResult(trace, t, pi, exhausted=True)
            c, pi = pi[0], pi[1:]
            t = t.left if c in ("L", Choice.L) else t.right
            continue
        (lab, t), = step(p, t, defs)
        if lab:
            trace += (lab,)
    return ChoiceResult(trace, t, pi)


# ---------------------------------------------------------------------------
# call sequences

MARK = "#"


@dataclass(frozen=True)
class CallSequence:
    symbols: tuple
    steps: tuple


def _mark(t: Term, names) -> Term:
    return map_term(t, lambda s: Var(s.name + MARK) if isinstance(s, Var) and s.name in names else s)


def _erase(t: Term) -> Term:
    return map_term(t, lambda s: Var(s.name[:-1]) if isinstance(s, Var) and s.name.endswith(MARK) else s)


def _marked_defs(p: Program) -> dict:
    defs = dict(p.def_map)
    for d in p.defs:
        defs[d.name + MARK] = Def(d.name + MARK, d.params, d.body)
    return defs


def call_successors(p: Program, f: str, args: tuple, depth: int, defs=None) -> list:
    """All (g, args', k) with f args ~> g args' found within depth reduction steps."""
    defs = defs if defs is not None else _marked_defs(p)
    names = {d.name for d in p.defs}
    d = p.lookup(f)
    start = _beta(d.params, _mark(d.body, names), list(args))
    found = []
    seen = set()
    level = {start}
    for k in range(depth + 1):
        nxt = set()
        for t in level:
            head, targs = spine(t)
            if isinstance(head, Var) and head.name.endswith(MARK):
                g = head.name[:-1]
                if len(targs) >= len(defs[g].params):
                    key = (g, tuple(_erase(a) for a in targs), k)
                    if key not in seen:
                        seen.add(key)
                        found.append(key)
            if k < depth:
                for _, t2 in step(p, t, defs):
                    nxt.add(t2)
        level = nxt
        if not level:
            break
    return found


def call_sequence_prefixes(p: Program, depth: int) -> set:
    """Prefixes of call sequences from main reachable within depth total steps."""
    p = normalize_program(p)
    defs = _marked_defs(p)
    start = p.main_name
    out = set()
    work = [((start,), (), (), depth)]
    cache = {}
    while work:
        syms, steps, args, budget = work.pop()
        out.add(CallSequence(syms, steps))
        key = (syms[-1], args)
        if key not in cache:
            cache[key] = call_successors(p, syms[-1], args, depth, defs)
        for g, gargs, k in cache[key]:
            if k <= budget:
                work.append((syms + (g,), steps + (k,), gargs, budget - max(k, 1)))
    return out


class Reach(str, Enum):
    YES = "yes"
    NO = "no"
    UNKNOWN = "unknown"


def must_reach_bounded(p: Program, a: str, depth: int) -> Reach:
    """Does every maximal execution emit a? Bounded by depth reduction steps."""
    defs = p.def_map
    level = {(False, initial_term(p))}
    frontier_ok = True
    for _ in range(depth):
        nxt = set()
        for seen, t in level:
            succ = step(p, t, defs)
            if not succ:
                if not seen:
                    return Reach.NO
                continue
            if seen:
                continue  # already emitted a on this path
            for lab, t2 in succ:
                nxt.add((lab == a, t2))
        level = nxt
        if not level:
            break
    for seen, t in level:
        if isinstance(t, Unit):
            if not seen:
                return Reach.NO
        elif not seen:
            frontier_ok = False
    return Reach.YES if frontier_ok else Reach.UNKNOWN


def may_reach_bounded(p: Program, a: Optional[str], depth: int) -> Reach:
    """Does some execution emit a (any event when a is None)?"""
    tr = enumerate_traces(p, depth)
    for t in tr.finite:
        if (a is None and t) or (a is not None and a in t):
            return Reach.YES
    return Reach.NO if not tr.frontier else Reach.UNKNOWN


def traces_upto(p: Program, n_events: int, max_states: int = 200_000) -> set:
    """All event traces of length at most n_events (prefix-closed).

    Explores (trace, term) configurations without a step bound; silent
    divergence is cut off by deduplication, so this terminates whenever the
    reachable configurations with short traces are finite.
    """
    defs = p.def_map
    start = ((), initial_term(p))
    seen = {start}
    todo = [start]
    out = {()}
    while todo:
        trace, t = todo.pop()
        for lab, t2 in step(p, t, defs):
            tr = trace + (lab,) if lab else trace
            if len(tr) > n_events:
                continue
            out.add(tr)
            cfg = (tr, t2)
            if cfg not in seen:
                seen.add(cfg)
                if len(seen) > max_states:
                    raise StuckError("too many configurations")
                todo.append(cfg)
    return out
