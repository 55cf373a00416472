"""Intersection-type-directed program transformation for temporal properties.

Given a program P and a parity automaton A, produce P' and a priority
assignment such that every infinite call sequence of P' satisfies the parity
condition iff no infinite event trace of P is accepted by A.  Variables and
functions are replicated per intersection type (theta, m): theta tracks the
automaton state, m the largest priority seen.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Union

from .automata import ParityAutomaton, complete_parity
from .surface import (
    Abs, App, BinOp, Def, Event, If, IntLit, NonDet, Program, ProgramError, Term, Unit, Var,
    ArrowType, IntType, UnitType, SimpleType, apps, cond_terms, free_vars, fresh, infer_types,
    lift_lambdas, map_cond, map_term, normalize_program, program_events, references, spine,
    subterms,
)
from . import hfl
from .translate import translate_csa


class TransformError(ProgramError):
    pass


# ---------------------------------------------------------------------------
# intersection types


@dataclass(frozen=True)
class StateT:
    q: str

    def __str__(self):
        return self.q


@dataclass(frozen=True)
class IntArg:
    def __str__(self):
        return "int"


@dataclass(frozen=True)
class Conj:
    items: tuple  # sorted, distinct (theta, m) pairs

    def __str__(self):
        if not self.items:
            return "T"
        return " /\\ ".join(f"({t}, {m})" for t, m in self.items)


@dataclass(frozen=True)
class ArrowT:
    arg: Union[IntArg, Conj]
    res: "InterType"

    def __str__(self):
        a = str(self.arg)
        if isinstance(self.arg, Conj) and len(self.arg.items) != 1:
            a = f"({a})"
        return f"{a} -> {self.res}"


InterType = Union[StateT, ArrowT]


def type_key(t) -> tuple:
    """Structural encoding used for the fixed total order on (theta, m) pairs."""
    if isinstance(t, StateT):
        return (0, t.q)
    if isinstance(t.arg, IntArg):
        return (1, (), type_key(t.res))
    return (2, tuple((type_key(a), m) for a, m in t.arg.items), type_key(t.res))


def pair_key(pair) -> tuple:
    return (type_key(pair[0]), pair[1])


def make_conj(pairs) -> Conj:
    return Conj(tuple(sorted(set(pairs), key=pair_key)))


def result_after(t: InterType, n: int) -> Optional[InterType]:
    for _ in range(n):
        if not isinstance(t, ArrowT):
            return None
        t = t.res
    return t


def canonical_types(ty: SimpleType, states, M: int) -> list:
    """Theta_kappa: one canonical intersection type per automaton state."""
    if isinstance(ty, UnitType):
        return [StateT(q) for q in sorted(states)]
    if isinstance(ty, IntType):
        raise TransformError("int has no intersection types")
    res = canonical_types(ty.res, states, M)
    if isinstance(ty.arg, IntType):
        return [ArrowT(IntArg(), r) for r in res]
    conj = make_conj((a, m) for a in canonical_types(ty.arg, states, M) for m in range(M + 1))
    return [ArrowT(conj, r) for r in res]


# ---------------------------------------------------------------------------
# name mangling


def esc(s: str) -> str:
    out = []
    for c in s:
        if c.isascii() and c.isalnum():
            out.append(c)
        elif c == "_":
            out.append("_u")
        else:
            out.append(f"_x{ord(c):x}x")
    return "".join(out)


def enc(t: InterType) -> str:
    if isinstance(t, StateT):
        return "_S" + esc(t.q)
    if isinstance(t.arg, IntArg):
        return "_L_I_T" + enc(t.res) + "_R"
    items = "".join(enc(a) + f"_P{m}_A" for a, m in t.arg.items)
    return "_L_K" + items + "_T" + enc(t.res) + "_R"


def mangle(x: str, t: InterType, m: int) -> str:
    """x_{theta,m} as an identifier; injective in (x, theta, m)."""
    return f"{esc(x)}{enc(t)}_M{m}"


def mangle_int(x: str) -> str:
    return f"{esc(x)}_I"


# ---------------------------------------------------------------------------
# environments and the transformation relation

INT_BINDING = "int"


def env_raise(gamma: dict, m: int) -> dict:
    """Gamma raised by m: (theta, m1, m2) becomes (theta, m1, max(m2, m))."""
    out = {}
    for x, b in gamma.items():
        if b == INT_BINDING:
            out[x] = b
        else:
            out[x] = frozenset((t, m1, max(m2, m)) for t, m1, m2 in b)
    return out


def _int_term(gamma: dict, t: Term) -> Term:
    if isinstance(t, IntLit):
        return t
    if isinstance(t, BinOp):
        return BinOp(t.op, _int_term(gamma, t.left), _int_term(gamma, t.right))
    if isinstance(t, Var):
        if gamma.get(t.name) != INT_BINDING:
            raise _NoDerivation(f"{t.name} is not an int variable")
        return Var(mangle_int(t.name))
    raise _NoDerivation(f"not an integer expression: {t!r}")


class _NoDerivation(Exception):
    pass


def _derive(gamma: dict, t: Term, theta: InterType, A: ParityAutomaton) -> Term:
    if isinstance(t, Unit):
        if isinstance(theta, StateT):
            return t
        raise _NoDerivation("() needs a state type")
    if isinstance(t, If):
        if not isinstance(theta, StateT):
            raise _NoDerivation("if needs a state type")
        cond = map_cond(t.cond, lambda a: _int_term(gamma, a))
        return If(cond, _derive(gamma, t.then_, theta, A), _derive(gamma, t.else_, theta, A))
    if isinstance(t, NonDet):
        if not isinstance(theta, StateT):
            raise _NoDerivation("<> needs a state type")
        return NonDet(_derive(gamma, t.left, theta, A), _derive(gamma, t.right, theta, A))
    if isinstance(t, Event):
        if not isinstance(theta, StateT):
            raise _NoDerivation("event needs a state type")
        succ = A.succ(theta.q, t.label)
        if not succ:
            raise _NoDerivation(f"no {t.label}-transition from {theta.q}")
        parts = [_derive(env_raise(gamma, A.priority[q]), t.body, StateT(q), A) for q in succ]
        body = parts[0]
        for p in parts[1:]:
            body = NonDet(body, p)
        return Event(t.label, body)
    if isinstance(t, (Var, App)):
        head, args = spine(t)
        if not isinstance(head, Var):
            raise _NoDerivation("abstractions must be lifted to top level first")
        b = gamma.get(head.name)
        if b is None:
            raise _NoDerivation(f"unbound variable {head.name}")
        if b == INT_BINDING:
            raise _NoDerivation(f"int variable {head.name} used as a function")
        cands = sorted(((ty, m1) for ty, m1, m2 in b if m1 == m2 and result_after(ty, len(args)) == theta),
                       key=pair_key)
        last = None
        for ty, m in cands:
            try:
                out = Var(mangle(head.name, ty, m))
                cur = ty
                for a in args:
                    if isinstance(cur.arg, IntArg):
                        out = App(out, _int_term(gamma, a))
                    else:
                        for aty, am in cur.arg.items:
                            out = App(out, _derive(env_raise(gamma, am), a, aty, A))
                    cur = cur.res
                return out
            except _NoDerivation as e:
                last = e
        raise last or _NoDerivation(f"no type of {head.name} yields {theta}")
    raise _NoDerivation(f"cannot transform {t!r} at {theta}")


def transform_term(gamma: dict, t: Term, theta: InterType, A: ParityAutomaton) -> Term:
    """The transformed term t' with gamma |- t : theta => t' (first derivation found)."""
    try:
        return _derive(gamma, t, theta, A)
    except _NoDerivation as e:
        raise TransformError(f"no derivation of type {theta}: {e}") from None


def transform_def(xi_gamma: dict, d: Def, theta: InterType, A: ParityAutomaton) -> tuple:
    """IT-Abs/IT-AbsInt for a definition: returns (target params, target body)."""
    gamma = dict(xi_gamma)
    params = []
    cur = theta
    for x in d.params:
        if not isinstance(cur, ArrowT):
            raise _NoDerivation(f"type {theta} has too few arguments for {d.name}")
        if isinstance(cur.arg, IntArg):
            gamma[x] = INT_BINDING
            params.append(mangle_int(x))
        else:
            gamma[x] = frozenset((a, m, 0) for a, m in cur.arg.items)
            params.extend(mangle(x, a, m) for a, m in cur.arg.items)
        cur = cur.res
    if not isinstance(cur, StateT):
        raise _NoDerivation(f"type {theta} has too many arguments for {d.name}")
    return tuple(params), _derive(gamma, d.body, cur, A)


def xi_env(xi) -> dict:
    """Xi |- t means {f : (theta, m, 0) | f : (theta, m) in Xi} |- t."""
    gamma = {}
    for f, t, m in xi:
        gamma.setdefault(f, set()).add((t, m, 0))
    return {f: frozenset(b) for f, b in gamma.items()}


def canonical_env(defs, types: dict, A: ParityAutomaton) -> frozenset:
    M = A.max_priority
    out = set()
    for d in defs:
        for t in canonical_types(types[d.name], A.states, M):
            for m in range(M + 1):
                out.add((d.name, t, m))
    return frozenset(out)


def _derivable(xi, defs: dict, A) -> frozenset:
    gamma = xi_env(xi)
    keep = set()
    cache = {}
    for f, t, m in xi:
        if (f, t) not in cache:
            try:
                transform_def(gamma, defs[f], t, A)
                cache[(f, t)] = True
            except _NoDerivation:
                cache[(f, t)] = False
        if cache[(f, t)]:
            keep.add((f, t, m))
    return frozenset(keep)


def prune_environment(xi, p: Program, A: ParityAutomaton) -> frozenset:
    """Greatest fixpoint of F(Xi) = {f:(theta,m) in Xi | Xi |- D(f) : theta}."""
    defs = p.def_map
    cur = frozenset(xi)
    while True:
        nxt = _derivable(cur, defs, A)
        if nxt == cur:
            return cur
        cur = nxt


# ---------------------------------------------------------------------------
# whole-program transformation


def unguarded_units(t: Term):
    """() in a position where it can become the whole term (not inside an argument)."""
    if isinstance(t, Unit):
        yield t
    elif isinstance(t, If):
        yield from unguarded_units(t.then_)
        yield from unguarded_units(t.else_)
    elif isinstance(t, Event):
        yield from unguarded_units(t.body)
    elif isinstance(t, NonDet):
        yield from unguarded_units(t.left)
        yield from unguarded_units(t.right)


def check_total(p: Program) -> None:
    bodies = [d.body for d in p.defs] + [p.main]
    if any(True for b in bodies for _ in unguarded_units(b)):
        raise TransformError(
            "program may terminate (it contains a () in tail position); "
            "apply instrument_total first")


@dataclass
class Instance:
    name: str
    fun: str
    theta: InterType
    m: int
    params: tuple
    body: Term


def infer_intersection_transform(p: Program, A: ParityAutomaton, prune: bool = True):
    """Return (Xi, P', Omega') for the canonical environment.

    With prune, Xi is filtered by prune_environment, then instances that are
    unreachable from the main term are dropped and unused replicated
    parameters are removed (which also narrows the instance's type).
    """
    p = lift_lambdas(normalize_program(p))
    check_total(p)
    A = complete_parity(A, program_events(p))
    types = infer_types(p).defs
    name = p.main_name
    if name not in references(p):
        defs = [d for d in p.defs if d.name != name]
        main_term = p.lookup(name).body
    else:
        defs = list(p.defs)
        main_term = p.main
    dmap = {d.name: d for d in defs}
    sub = Program(tuple(defs), main_term)
    xi = canonical_env(defs, types, A)
    if prune:
        xi = prune_environment(xi, sub, A)
    gamma = xi_env(xi)
    bodies = {}
    insts = {}
    for f, t, m in sorted(xi, key=lambda b: (b[0], pair_key((b[1], b[2])))):
        if (f, t) not in bodies:
            try:
                bodies[(f, t)] = transform_def(gamma, dmap[f], t, A)
            except _NoDerivation as e:
                raise TransformError(f"{f} : {t} is not derivable: {e}") from None
        params, body = bodies[(f, t)]
        n = mangle(f, t, m)
        insts[n] = Instance(n, f, t, m, params, body)
    try:
        main2 = _derive(gamma, main_term, StateT(A.init), A)
    except _NoDerivation as e:
        raise TransformError(f"main term is not derivable at {A.init}: {e}") from None
    if prune:
        insts, main2 = _shrink(insts, main2)
    used = {i.name for i in insts.values()}
    mname = fresh("main", used | {n for i in insts.values() for n in i.params})
    new_defs = tuple(Def(i.name, i.params, i.body) for i in insts.values())
    p2 = Program(new_defs + (Def(mname, (), main2),), Var(mname))
    omega = {i.name: i.m + 1 for i in insts.values()}
    xi_out = frozenset((i.fun, i.theta, i.m) for i in insts.values())
    return xi_out, p2, omega


def _names_in(t: Term) -> set:
    return {s.name for s in subterms(t) if isinstance(s, Var)}


def _head_only(name: str, arity: int, terms) -> bool:
    """Does name occur only as the head of applications with >= arity arguments?"""
    def ok(t, is_head_ok):
        if isinstance(t, Var):
            return t.name != name or is_head_ok
        if isinstance(t, App):
            head, args = spine(t)
            good = isinstance(head, Var) and head.name == name and len(args) >= arity
            if not ok(head, good):
                return False
            return all(ok(a, False) for a in args)
        if isinstance(t, If):
            return all(ok(a, False) for a in cond_terms(t.cond)) and ok(t.then_, False) and ok(t.else_, False)
        if isinstance(t, (Event,)):
            return ok(t.body, False)
        if isinstance(t, NonDet):
            return ok(t.left, False) and ok(t.right, False)
        if isinstance(t, BinOp):
            return ok(t.left, False) and ok(t.right, False)
        if isinstance(t, Abs):
            return ok(t.body, False)
        return True
    return all(ok(t, False) for t in terms)


def _drop_args(t: Term, old: str, new: str, drop: set) -> Term:
    def fn(s):
        head, args = spine(s)
        if isinstance(head, Var) and head.name == old:
            kept = [a for i, a in enumerate(args) if i not in drop]
            return apps(Var(new), *kept)
        return s
    # rewrite top-down on application spines
    def go(s):
        if isinstance(s, (App, Var)):
            head, args = spine(s)
            args = [go(a) for a in args]
            if isinstance(head, Var) and head.name == old:
                kept = [a for i, a in enumerate(args) if i not in drop]
                return apps(Var(new), *kept)
            return apps(head if not isinstance(head, Abs) else go(head), *args)
        if isinstance(s, If):
            return If(map_cond(s.cond, go), go(s.then_), go(s.else_))
        if isinstance(s, Event):
            return Event(s.label, go(s.body))
        if isinstance(s, NonDet):
            return NonDet(go(s.left), go(s.right))
        if isinstance(s, BinOp):
            return BinOp(s.op, go(s.left), go(s.right))
        if isinstance(s, Abs):
            return Abs(s.params, go(s.body))
        return s
    return go(t)


def _narrow(theta: InterType, params: tuple, drop: set) -> InterType:
    """Remove the conjuncts whose target parameters are dropped."""
    idx = 0
    args = []
    cur = theta
    while isinstance(cur, ArrowT):
        if isinstance(cur.arg, IntArg):
            args.append(cur.arg)
            idx += 1
        else:
            keep = []
            for pair in cur.arg.items:
                if idx not in drop:
                    keep.append(pair)
                idx += 1
            args.append(Conj(tuple(keep)))
        cur = cur.res
    for a in reversed(args):
        cur = ArrowT(a, cur)
    return cur


def _shrink(insts: dict, main: Term):
    changed = True
    while changed:
        changed = False
        # reachability from the main term
        reach = set()
        todo = [n for n in _names_in(main) if n in insts]
        while todo:
            n = todo.pop()
            if n in reach:
                continue
            reach.add(n)
            todo.extend(x for x in _names_in(insts[n].body) if x in insts and x not in reach)
        if set(insts) != reach:
            insts = {n: i for n, i in insts.items() if n in reach}
            changed = True
        # unused replicated parameters
        for n in list(insts):
            inst = insts[n]
            fv = free_vars(inst.body)
            ints = _int_param_positions(inst.theta)
            drop = {i for i, x in enumerate(inst.params) if x not in fv and i not in ints}
            if not drop:
                continue
            terms = [main] + [i.body for i in insts.values()]
            if not _head_only(n, len(inst.params), terms):
                continue
            theta = _narrow(inst.theta, inst.params, drop)
            new = mangle(inst.fun, theta, inst.m)
            if new in insts and new != n:
                continue
            params = tuple(x for i, x in enumerate(inst.params) if i not in drop)
            main = _drop_args(main, n, new, drop)
            rebuilt = {}
            for k, i in insts.items():
                body = _drop_args(i.body, n, new, drop)
                if k == n:
                    rebuilt[new] = Instance(new, i.fun, theta, i.m, params, body)
                else:
                    rebuilt[k] = Instance(i.name, i.fun, i.theta, i.m, i.params, body)
            insts = rebuilt
            changed = True
            break
    return insts, main


def _int_param_positions(theta: InterType) -> set:
    out = set()
    idx = 0
    cur = theta
    while isinstance(cur, ArrowT):
        if isinstance(cur.arg, IntArg):
            out.add(idx)
            idx += 1
        else:
            idx += len(cur.arg.items)
        cur = cur.res
    return out


def temporal_pipeline(p: Program, A: ParityAutomaton, prune: bool = True) -> hfl.Hes:
    """HES valid on L_0 iff no infinite trace of p is accepted by A."""
    _, p2, omega = infer_intersection_transform(p, A, prune=prune)
    return translate_csa(p2, omega)
