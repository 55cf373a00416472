"""HFL_Z model checking by grounding to a parity game.

The game is built on the fly from the HES.  Deterministic evaluation steps
(beta reduction, looking up call-by-name arguments) are compressed away, so
nodes are disjunctions, conjunctions, modalities, leaves, and *claims*
``X(v1, ..., vk)`` at a state.  A claim carries the priority of X and has a
single successor, the body of X.

Claim arguments must be finite values.  Integers are evaluated.  A
proposition or function argument that mentions no fixpoint variable is
passed by name (it can be evaluated without visiting a claim).  Arguments
that do mention one cannot be passed by name: the claims unfolded while
such a closure travels would count toward the parity condition although
they are not recursive calls.  A proposition argument of that kind is
replaced by a set of states chosen by Proponent;
Opponent may accept the choice or challenge one state of it, which
evaluates the argument there.  Function arguments of order 1 are handled the
same way, with Proponent choosing a finite set of atoms (argument tuple,
state) among the points at which the function is ever queried in the
same calling context.  Those
query points are collected by rebuilding the game until they stabilize.

When the reachable game is too large, the frontier is closed pessimistically
and optimistically; a win for the respective player is then conclusive.  A
second abstraction replaces integers by intervals, reusing a claim whose
intervals contain the new ones and widening after a few distinct claims.
Unknown predicates become a leaf that is again treated pessimistically or
optimistically.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Optional

from .. import hfl
from ..automata import Lts
from ..config import GameConfig
from .parity import Game, solve


# ---------------------------------------------------------------------------
# verdicts


@dataclass(frozen=True)
class Verdict:
    kind: str  # "valid" | "invalid" | "unknown"
    reason: Optional[str] = None

    def __str__(self):
        return self.kind if self.reason is None else f"{self.kind} ({self.reason})"

    @property
    def decided(self) -> bool:
        return self.kind != "unknown"


VALID = Verdict("valid")
INVALID = Verdict("invalid")


def Unknown(reason: str) -> Verdict:
    return Verdict("unknown", reason)


class NotGround(Exception):
    """A higher-order argument that has no finite representation here."""


class _BudgetExceeded(Exception):
    pass


class _CandOverflow(Exception):
    pass


# ---------------------------------------------------------------------------
# runtime values


class PSet:
    __slots__ = ("mask",)

    def __init__(self, mask: int):
        self.mask = mask

    def __eq__(self, o):
        return isinstance(o, PSet) and o.mask == self.mask

    def __hash__(self):
        return hash(("P", self.mask))

    def __repr__(self):
        return f"PSet({self.mask})"


class Thunk:
    """An unevaluated argument: expression plus the bindings of its free variables."""

    __slots__ = ("expr", "env", "_h")

    def __init__(self, expr, env: tuple):
        self.expr = expr
        self.env = env
        self._h = hash((id(expr), env))

    def __eq__(self, o):
        return self is o or (isinstance(o, Thunk) and o.expr is self.expr and o.env == self.env)

    def __hash__(self):
        return self._h

    def __repr__(self):
        return f"Thunk({hfl.show(self.expr)}, {self.env})"


class FVal:
    """A finite order-1 function: true exactly above the listed atoms."""

    __slots__ = ("origin", "atoms", "argtypes", "_h")

    def __init__(self, origin, atoms: frozenset, argtypes: tuple):
        self.origin = origin
        self.atoms = atoms
        self.argtypes = argtypes
        self._h = hash(("F", origin, atoms))

    def __eq__(self, o):
        return isinstance(o, FVal) and o.origin == self.origin and o.atoms == self.atoms

    def __hash__(self):
        return self._h

    def __repr__(self):
        return f"FVal({self.origin}, {sorted(self.atoms, key=repr)})"


@dataclass(frozen=True)
class Interval:
    lo: float
    hi: float

    @staticmethod
    def point(n: int) -> "Interval":
        return Interval(n, n)

    @property
    def single(self) -> bool:
        return self.lo == self.hi

    def contains(self, o: "Interval") -> bool:
        return self.lo <= o.lo and o.hi <= self.hi

    def __repr__(self):
        return f"[{self.lo},{self.hi}]"


def _imul(a, b):
    if a == 0 or b == 0:
        return 0
    return a * b


def interval_arith(op: str, a: Interval, b: Interval) -> Interval:
    if op == "+":
        return Interval(a.lo + b.lo, a.hi + b.hi)
    if op == "-":
        return Interval(a.lo - b.hi, a.hi - b.lo)
    if op == "*":
        ps = [_imul(x, y) for x in (a.lo, a.hi) for y in (b.lo, b.hi)]
        return Interval(min(ps), max(ps))
    raise hfl.HflError(f"unknown operator {op}")


def interval_pred(op: str, args) -> Optional[bool]:
    """Three-valued predicate; None means undetermined."""
    if op in ("even", "odd"):
        a, = args
        if not a.single:
            return None
        return hfl.pred_holds(op, (int(a.lo),))
    a, b = args
    if op == "=":
        if a.single and b.single and a.lo == b.lo:
            return True
        if a.hi < b.lo or b.hi < a.lo:
            return False
        return None
    if op == "!=":
        r = interval_pred("=", args)
        return None if r is None else not r
    if op == "<":
        if a.hi < b.lo:
            return True
        if a.lo >= b.hi:
            return False
        return None
    if op == "<=":
        if a.hi <= b.lo:
            return True
        if a.lo > b.hi:
            return False
        return None
    if op == ">":
        return interval_pred("<", (b, a))
    if op == ">=":
        return interval_pred("<=", (b, a))
    raise hfl.HflError(f"unknown predicate {op}")


# ---------------------------------------------------------------------------
# grounding

TRUE = ("T",)
FALSE = ("F",)
UNKNOWN = ("U",)
P, O = 0, 1


def _is_order1(t) -> bool:
    args, res = hfl.split_arrows(t)
    return isinstance(res, hfl.PropType) and all(isinstance(a, (hfl.IntType, hfl.PropType)) for a in args)


def prepare_hes(h) -> hfl.Hes:
    """Accept a formula or an HES; return an HES whose bodies are fixpoint-free."""
    if isinstance(h, hfl.Formula):
        return hfl.formula_to_hes(h)
    if any(not hfl.is_fixpoint_free(e.body) for e in h.equations) or not hfl.is_fixpoint_free(h.main):
        return hfl.formula_to_hes(hfl.hes_to_formula(h))
    return h


@dataclass
class GroundResult:
    game: Game
    init: int
    complete: bool
    keys: list
    unknown_nodes: list
    frontier: list


class _Grounder:
    def __init__(self, lts: Lts, h: hfl.Hes, budget: int, cand: dict, interval: bool,
                 max_cand: int, exact_per_skeleton: int):
        self.lts = lts
        self.h = h
        self.states = list(lts.states)
        self.sidx = {q: i for i, q in enumerate(self.states)}
        self.n = len(self.states)
        self.eqs = {e.name: e for e in h.equations}
        self.prio = h.priorities()
        self.budget = budget
        self.cand = cand
        self.used = set()
        self.dirty = False
        self.interval = interval
        self.max_cand = max_cand
        self.exact_per_skeleton = exact_per_skeleton
        self.skeletons = {}
        self._fv = {}
        self._ff = {}
        self._local = {}
        self.succ = {}
        for s, a, d in lts.transitions:
            self.succ.setdefault((s, a), []).append(d)
        for k in self.succ:
            self.succ[k].sort(key=self.sidx.get)

    # -- helpers ------------------------------------------------------------

    def fv(self, e):
        k = id(e)
        r = self._fv.get(k)
        if r is None:
            r = (e, tuple(sorted(hfl.free_vars(e))))
            self._fv[k] = r
        return r[1]

    def restrict(self, env: dict, e) -> tuple:
        return tuple((x, env[x]) for x in self.fv(e) if x in env)

    def lookup(self, env: tuple, x: str):
        for k, v in env:
            if k == x:
                return v
        return None

    def mkint(self, n: int):
        return Interval.point(n) if self.interval else n

    def eval_int(self, e, env: tuple):
        if isinstance(e, hfl.IntLit):
            return self.mkint(e.value)
        if isinstance(e, hfl.BinOp):
            a, b = self.eval_int(e.left, env), self.eval_int(e.right, env)
            if self.interval:
                return interval_arith(e.op, a, b)
            return hfl.arith(e.op, a, b)
        if isinstance(e, hfl.Var):
            v = self.lookup(env, e.name)
            return self.force_int(v)
        raise hfl.HflError(f"not an integer expression: {hfl.show(e)}")

    def force_int(self, v):
        if isinstance(v, Thunk):
            return self.eval_int(v.expr, v.env)
        if isinstance(v, (int, Interval)):
            return v
        raise hfl.HflError(f"expected an integer, got {v!r}")

    def pred(self, e, env):
        args = tuple(self.eval_int(a, env) for a in e.args)
        if self.interval:
            return interval_pred(e.op, args)
        return hfl.pred_holds(e.op, args)

    def thunk(self, e, env: tuple):
        if isinstance(e, hfl.Var):
            v = self.lookup(env, e.name)
            if v is not None:
                return v
        if isinstance(e, (hfl.IntLit, hfl.BinOp)):
            return self.eval_int(e, env)
        return Thunk(e, tuple((x, v) for x, v in env if x in self.fv(e)))

    def deep_ff(self, v) -> bool:
        """Can v be evaluated without unfolding a fixpoint variable?"""
        if not isinstance(v, Thunk):
            return True
        r = self._ff.get(v)
        if r is None:
            r = True
            for x in self.fv(v.expr):
                w = self.lookup(v.env, x)
                if w is None or not self.deep_ff(w):
                    r = False
                    break
            self._ff[v] = r
        return r

    # -- local evaluation of fixpoint-free arguments -------------------------

    def local(self, e, env: tuple, args: tuple, q: str):
        """Three-valued truth (None = unknown) of a fixpoint-free application."""
        key = (id(e), env, args, q)
        if key in self._local:
            return self._local[key]
        r = self._local_eval(e, env, args, q)
        self._local[key] = r
        return r

    def _local_eval(self, e, env, args, q):
        while True:
            if isinstance(e, hfl.Var):
                v = self.lookup(env, e.name)
                if isinstance(v, Thunk):
                    e, env = v.expr, v.env
                    continue
                if isinstance(v, PSet):
                    return bool(v.mask >> self.sidx[q] & 1)
                if isinstance(v, FVal):
                    vals = []
                    for a, t in zip(args, v.argtypes):
                        if isinstance(t, hfl.IntType):
                            vals.append(self.force_int(a))
                        else:
                            m = self.local_mask(a)
                            if m is None:
                                return None
                            vals.append(PSet(m))
                    return self.query(v, tuple(vals), q)
                raise hfl.HflError(f"cannot evaluate {e.name} locally")
            if isinstance(e, hfl.App):
                args = (self.thunk(e.arg, env),) + args
                e = e.fn
                continue
            if isinstance(e, hfl.Lam):
                a, args = args[0], args[1:]
                if isinstance(e.ty, hfl.IntType):
                    a = self.force_int(a)
                env = self.restrict({**dict(env), e.name: a}, e.body)
                e = e.body
                continue
            break
        if isinstance(e, hfl.Top):
            return True
        if isinstance(e, hfl.Bot):
            return False
        if isinstance(e, hfl.Pred):
            return self.pred(e, env)
        if isinstance(e, (hfl.Or, hfl.And)):
            l = self.local(e.left, self.restrict(dict(env), e.left), (), q)
            r = self.local(e.right, self.restrict(dict(env), e.right), (), q)
            if isinstance(e, hfl.Or):
                if l is True or r is True:
                    return True
                return None if l is None or r is None else False
            if l is False or r is False:
                return False
            return None if l is None or r is None else True
        if isinstance(e, (hfl.Diamond, hfl.Box)):
            benv = self.restrict(dict(env), e.body)
            rs = [self.local(e.body, benv, (), d) for d in self.succ.get((q, e.label), ())]
            if isinstance(e, hfl.Diamond):
                if True in rs:
                    return True
                return None if None in rs else False
            if False in rs:
                return False
            return None if None in rs else True
        raise hfl.HflError(f"cannot evaluate {hfl.show(e)} locally")

    def local_mask(self, v) -> Optional[int]:
        if isinstance(v, PSet):
            return v.mask
        m = 0
        for i, s in enumerate(self.states):
            r = self.local(v.expr, v.env, (), s)
            if r is None:
                return None
            if r:
                m |= 1 << i
        return m

    # -- function values -------------------------------------------------------

    def query(self, f: FVal, vals: tuple, q: str):
        if self.interval and any(isinstance(v, Interval) and not v.single for v in vals):
            return None
        atom = (vals, q)
        bucket = self.cand.setdefault(f.origin, set())
        if atom not in bucket:
            bucket.add(atom)
            if f.origin in self.used:
                self.dirty = True
            if len(bucket) > self.max_cand:
                raise _CandOverflow()
        for bv, aq in f.atoms:
            if aq == q and all(_below(b, v) for b, v in zip(bv, vals)):
                return True
        return False

    # -- resolution of deterministic steps ------------------------------------

    def resolve(self, e, env: tuple, args: tuple, q: str):
        while True:
            if isinstance(e, hfl.Var):
                v = self.lookup(env, e.name)
                if v is None:
                    if e.name not in self.eqs:
                        raise hfl.HflError(f"unbound variable {e.name}")
                    eq = self.eqs[e.name]
                    types = tuple(hfl.split_arrows(eq.ty)[0])
                    if len(args) != len(types):
                        raise hfl.HflError(f"{e.name} applied to {len(args)} arguments, expected {len(types)}")
                    return self.ground(("call", e.name), types, args, q)
                if isinstance(v, Thunk):
                    e, env = v.expr, v.env
                    continue
                if isinstance(v, PSet):
                    return TRUE if v.mask >> self.sidx[q] & 1 else FALSE
                if isinstance(v, FVal):
                    return self.ground(("query", v), v.argtypes, args, q)
                raise hfl.HflError(f"{e.name} is not a proposition")
            if isinstance(e, hfl.App):
                args = (self.thunk(e.arg, env),) + args
                e = e.fn
                continue
            if isinstance(e, hfl.Lam):
                if not args:
                    raise hfl.HflError("function value in proposition position")
                a, args = args[0], args[1:]
                if isinstance(e.ty, hfl.IntType):
                    a = self.force_int(a)
                env = self.restrict({**dict(env), e.name: a}, e.body)
                e = e.body
                continue
            break
        if args:
            raise hfl.HflError(f"proposition applied to arguments: {hfl.show(e)}")
        if isinstance(e, hfl.Top):
            return TRUE
        if isinstance(e, hfl.Bot):
            return FALSE
        if isinstance(e, hfl.Pred):
            r = self.pred(e, env)
            return UNKNOWN if r is None else (TRUE if r else FALSE)
        if isinstance(e, (hfl.Or, hfl.And)):
            # a decided operand settles the connective; this keeps guarded
            # recursion such as (x <= 0) \/ X (x - 1) from descending forever
            win = TRUE if isinstance(e, hfl.Or) else FALSE
            left = self.resolve(e.left, self.restrict(dict(env), e.left), (), q)
            if left == win:
                return win
            right = self.resolve(e.right, self.restrict(dict(env), e.right), (), q)
            if right == win:
                return win
            if left == right and left in (TRUE, FALSE):
                return left
            return ("E", e, self.restrict(dict(env), e), q)
        if isinstance(e, (hfl.Diamond, hfl.Box)):
            return ("E", e, self.restrict(dict(env), e), q)
        if isinstance(e, hfl.Fix):
            raise hfl.HflError("fixpoint inside an equation body; use prepare_hes")
        raise hfl.HflError(f"cannot evaluate {hfl.show(e)}")

    def ground(self, site, types, items: tuple, q: str):
        """Make the arguments finite; returns a node key.

        Deterministic values come first; the remaining positions are chosen
        by Proponent one at a time (see the "G" and "A" nodes).
        """
        base = []
        for t, item in zip(types, items):
            if isinstance(t, hfl.IntType):
                v = self.force_int(item)
            elif isinstance(item, (PSet, FVal)):
                v = item
            elif isinstance(t, hfl.PropType):
                v = None
                if self.deep_ff(item):
                    m = self.local_mask(item)
                    if m is not None:
                        v = PSet(m)
            elif self.deep_ff(item):
                v = item
            elif site[0] == "call" and _is_order1(t):
                v = None
            else:
                raise NotGround(f"argument of type {t} cannot be made finite")
            base.append(v)
        base = tuple(base)
        return self.finish(site, types, base, base, items, q)

    def finish(self, site, types, base, vals, items, q):
        if None in vals:
            return ("G", site, types, base, vals, items, q)
        if site[0] == "query":
            r = self.query(site[1], vals, q)
            return UNKNOWN if r is None else (TRUE if r else FALSE)
        return self.claim(site[1], vals, q)

    def claim(self, x: str, vals: tuple, q: str):
        if not self.interval:
            return ("C", x, vals, q)
        ints = tuple(i for i, v in enumerate(vals) if isinstance(v, Interval))
        skel = (x, tuple(None if i in ints else v for i, v in enumerate(vals)), q)
        vec = tuple(vals[i] for i in ints)
        known = self.skeletons.setdefault(skel, [])
        for old in known:
            if all(a.contains(b) for a, b in zip(old, vec)):
                return ("C", x, self._fill(vals, ints, old), q)
        if len(known) >= self.exact_per_skeleton:
            lo = [min([k[j].lo for k in known]) for j in range(len(ints))]
            hi = [max([k[j].hi for k in known]) for j in range(len(ints))]
            vec = tuple(Interval(-math.inf if b.lo < l else min(b.lo, l), math.inf if b.hi > h else max(b.hi, h))
                        for b, l, h in zip(vec, lo, hi))
            for old in known:
                if all(a.contains(b) for a, b in zip(old, vec)):
                    return ("C", x, self._fill(vals, ints, old), q)
        known.append(vec)
        return ("C", x, self._fill(vals, ints, vec), q)

    @staticmethod
    def _fill(vals, ints, vec):
        out = list(vals)
        for i, v in zip(ints, vec):
            out[i] = v
        return tuple(out)

    # -- expansion ------------------------------------------------------------

    def expand(self, key):
        """(owner, priority, successor keys) of a node."""
        kind = key[0]
        if kind == "T":
            return O, 0, []
        if kind in ("F", "U"):
            return P, 0, []
        if kind == "E":
            _, e, env, q = key
            if isinstance(e, (hfl.Or, hfl.And)):
                kids = [self.resolve(e.left, self.restrict(dict(env), e.left), (), q),
                        self.resolve(e.right, self.restrict(dict(env), e.right), (), q)]
                return (P if isinstance(e, hfl.Or) else O), 0, kids
            benv = self.restrict(dict(env), e.body)
            kids = [self.resolve(e.body, benv, (), d) for d in self.succ.get((q, e.label), ())]
            return (P if isinstance(e, hfl.Diamond) else O), 0, kids
        if kind == "C":
            _, x, vals, q = key
            eq = self.eqs[x]
            k = len(eq.params)
            env = self.restrict(dict(zip(eq.params, vals[:k])), eq.body)
            return P, self.prio[x], [self.resolve(eq.body, env, vals[k:], q)]
        if kind == "G":
            _, site, types, base, vals, items, q = key
            i = vals.index(None)
            t = types[i]
            if isinstance(t, hfl.PropType):
                choices = [PSet(m) for m in range(1 << self.n)]
            else:
                # query points are collected per calling context
                origin = (site[1], i, q, base)
                self.used.add(origin)
                atoms = sorted(self.cand.get(origin, ()), key=repr)
                argtypes = tuple(hfl.split_arrows(t)[0])
                choices = [FVal(origin, frozenset(c), argtypes)
                           for r in range(len(atoms) + 1) for c in itertools.combinations(atoms, r)]
            return P, 0, [("A", site, types, base, vals, items, q, i, c) for c in choices]
        if kind == "A":
            _, site, types, base, vals, items, q, i, c = key
            item = items[i]
            kids = [self.finish(site, types, base, vals[:i] + (c,) + vals[i + 1:], items, q)]
            if isinstance(c, PSet):
                for i, s in enumerate(self.states):
                    if c.mask >> i & 1:
                        kids.append(self.resolve(item.expr, item.env, (), s))
            else:
                for bv, aq in sorted(c.atoms, key=repr):
                    kids.append(self.resolve(item.expr, item.env, bv, aq))
            return O, 0, kids
        raise AssertionError(key)

    def build(self):
        g = Game()
        ids = {}
        keys = []
        todo = []

        def node(k):
            i = ids.get(k)
            if i is None:
                i = len(keys)
                ids[k] = i
                keys.append(k)
                todo.append(k)
                g.add(P, 0)
            return i

        init = node(self.resolve(self.h.main, (), (), self.lts.init))
        head = 0
        complete = True
        while head < len(todo):
            if len(keys) > self.budget:
                complete = False
                break
            k = todo[head]
            head += 1
            i = ids[k]
            owner, prio, kids = self.expand(k)
            g.owner[i] = owner
            g.priority[i] = prio
            for c in kids:
                g.edge(i, node(c))
        frontier = [ids[k] for k in todo[head:]]
        unknown = [i for i, k in enumerate(keys) if k == UNKNOWN]
        return GroundResult(g, init, complete, keys, unknown, frontier)


def _below(b, v) -> bool:
    if isinstance(b, PSet):
        return b.mask & ~v.mask == 0
    return b == v


def _solve_closed(res: GroundResult, optimistic: bool) -> int:
    """Winner at the initial node when unresolved nodes go to one side."""
    g = res.game
    saved = [(i, g.owner[i], list(g.succ[i])) for i in res.frontier + res.unknown_nodes]
    for i, _, _ in saved:
        g.succ[i] = []
        g.owner[i] = O if optimistic else P   # a dead end loses for its owner
    w0, _ = solve(g)
    for i, owner, succ in saved:
        g.owner[i] = owner
        g.succ[i] = succ
    return 0 if res.init in w0 else 1


def ground_game(lts: Lts, h, budget: int = 10 ** 6, interval: bool = False,
                cand: Optional[dict] = None, max_cand: int = 12, exact_per_skeleton: int = 3):
    """Build the game once, starting from the given query points.

    Returns (GroundResult, stable, cand) where stable says that no query
    point was discovered after it could have been offered to Proponent, so
    the game is faithful.
    """
    h = prepare_hes(h)
    cand = {k: set(v) for k, v in (cand or {}).items()}
    gr = _Grounder(lts, h, budget, cand, interval, max_cand, exact_per_skeleton)
    res = gr.build()
    return res, not gr.dirty, cand


def _attempt(lts, h, budget, interval, config: GameConfig):
    """One grounding attempt with candidate refinement; returns a Verdict or None."""
    cand = {}
    for _ in range(4 * config.max_cand + 4):
        try:
            res, stable, cand = ground_game(lts, h, budget, interval, cand, config.max_cand,
                                            config.exact_per_skeleton)
        except _CandOverflow:
            return Unknown("budget")
        if stable:
            break
    else:
        return Unknown("budget")
    if res.complete and not res.unknown_nodes:
        return VALID if _solve_closed(res, False) == 0 else INVALID
    if _solve_closed(res, False) == 0:
        return VALID
    if _solve_closed(res, True) == 1:
        return INVALID
    return None


def eval_hflz(lts: Lts, h, budget: Optional[int] = None, config: GameConfig = GameConfig()) -> Verdict:
    """Decide whether lts.init satisfies h (Valid/Invalid), or give up (Unknown)."""
    budget = config.budget if budget is None else budget
    h = prepare_hes(h)
    plan = [(b, False) for b in config.concrete_schedule]
    plan.append((config.interval_first, True))
    plan += [(b, False) for b in config.concrete_late]
    plan.append((budget, True))
    seen = set()
    for b, interval in plan:
        b = min(b, budget)
        if (b, interval) in seen:
            continue
        seen.add((b, interval))
        try:
            v = _attempt(lts, h, b, interval, config)
        except NotGround:
            return Unknown("non-ground")
        if v is not None and v.decided:
            return v
    return Unknown("budget")


def dump_game(res: GroundResult) -> str:
    """Edge list: one line per node, `id owner priority: succ...`."""
    g = res.game
    lines = [f"init {res.init}"]
    for i in range(len(g)):
        owner = "P" if g.owner[i] == P else "O"
        lines.append(f"{i} {owner} {g.priority[i]}: " + " ".join(map(str, g.succ[i])))
    return "\n".join(lines) + "\n"
