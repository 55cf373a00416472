"""Denotational model checking by Kleene iteration over finite lattices.

Values: a proposition is a bitmask over LTS states, an integer is an int, and
a function is a tuple indexed by an enumeration of its argument domain.
Integer arguments range over a window [-B, B].  Each window is evaluated
twice, sending applications outside the window to bottom and to top
respectively; since formulas are monotone the two runs bracket the true
meaning, and when they agree the answer is exact.
"""

from __future__ import annotations

from typing import Optional

from .. import hfl
from ..automata import Lts
from ..config import DenotConfig


class DenotError(Exception):
    pass


class DomainTooLarge(DenotError):
    pass


class Undetermined(DenotError):
    """The integer windows never closed the gap between the two runs."""

    def __init__(self, lo, hi):
        super().__init__("integer window too small to decide the formula")
        self.lo, self.hi = lo, hi


def _has_int(f: hfl.Formula) -> bool:
    for g in hfl.subformulas(f):
        if isinstance(g, (hfl.IntLit, hfl.Pred, hfl.BinOp)):
            return True
        if isinstance(g, (hfl.Fix, hfl.Lam)) and g.ty is not None and _type_has_int(g.ty):
            return True
    return False


def _type_has_int(t) -> bool:
    if isinstance(t, hfl.IntType):
        return True
    if isinstance(t, hfl.ArrowType):
        return _type_has_int(t.arg) or _type_has_int(t.res)
    return False


class _Sem:
    def __init__(self, lts: Lts, window: int, upper: bool, cap: int, max_steps=None):
        self.lts = lts
        self.steps = 0
        self.max_steps = max_steps
        self.n = len(lts.states)
        self.full = (1 << self.n) - 1
        self.B = window
        self.upper = upper
        self.cap = cap
        self.ints = list(range(-window, window + 1))
        self._enum = {}
        self._index = {}
        self._memo = {}
        self._sizes = {}
        self._fv = {}
        idx = {q: i for i, q in enumerate(lts.states)}
        self.pre = {}
        for s, a, d in lts.transitions:
            self.pre.setdefault(a, []).append((idx[s], idx[d]))
        self.succ = {}
        for s, a, d in lts.transitions:
            self.succ.setdefault(a, {}).setdefault(idx[s], 0)
            self.succ[a][idx[s]] |= 1 << idx[d]

    # -- lattice structure ------------------------------------------------

    def table_size(self, t) -> int:
        """Number of propositions stored in one value of type t."""
        if not isinstance(t, hfl.ArrowType):
            return 1
        if t in self._sizes:
            return self._sizes[t]
        n = len(self.domain(t.arg)) * self.table_size(t.res)
        if n > self.cap:
            raise DomainTooLarge(f"a value of type {hfl.show_type(t)} has {n} entries")
        self._sizes[t] = n
        return n

    def bottom(self, t):
        if isinstance(t, hfl.PropType):
            return 0
        self.table_size(t)
        return tuple(self.bottom(t.res) for _ in self.domain(t.arg))

    def top(self, t):
        if isinstance(t, hfl.PropType):
            return self.full
        self.table_size(t)
        return tuple(self.top(t.res) for _ in self.domain(t.arg))

    def leq(self, t, a, b) -> bool:
        if isinstance(t, hfl.PropType):
            return a & ~b == 0
        return all(self.leq(t.res, x, y) for x, y in zip(a, b))

    def domain(self, t) -> list:
        """All elements of D_t (monotone functions only), in a fixed order."""
        if isinstance(t, hfl.IntType):
            return self.ints
        key = t
        if key in self._enum:
            return self._enum[key]
        if isinstance(t, hfl.PropType):
            if self.n > 20:
                raise DomainTooLarge("too many LTS states")
            out = list(range(self.full + 1))
        else:
            args = self.domain(t.arg)
            res = self.domain(t.res)
            if isinstance(t.arg, hfl.IntType):
                total = len(res) ** len(args)
                if total > self.cap:
                    raise DomainTooLarge(f"domain of {t} has {total} elements")
                out = self._product(len(args), res)
            else:
                out = self._monotone(t, args, res)
        self._enum[key] = out
        self._index[key] = {v: i for i, v in enumerate(out)}
        return out

    def _product(self, k, res):
        out = [()]
        for _ in range(k):
            out = [x + (r,) for x in out for r in res]
        return out

    def _monotone(self, t, args, res):
        # backtracking over argument positions, respecting the order on args
        below = [[j for j in range(i) if self.leq(t.arg, args[j], args[i])] for i in range(len(args))]
        above = [[j for j in range(i) if self.leq(t.arg, args[i], args[j])] for i in range(len(args))]
        out = []
        cur = []

        def go(i):
            if len(out) > self.cap:
                raise DomainTooLarge(f"domain of {t} exceeds {self.cap} elements")
            if i == len(args):
                out.append(tuple(cur))
                return
            for r in res:
                if all(self.leq(t.res, cur[j], r) for j in below[i]) and \
                        all(self.leq(t.res, r, cur[j]) for j in above[i]):
                    cur.append(r)
                    go(i + 1)
                    cur.pop()

        go(0)
        return out

    def index(self, t, v) -> Optional[int]:
        if isinstance(t, hfl.IntType):
            return v + self.B if -self.B <= v <= self.B else None
        self.domain(t)
        return self._index[t][v]

    # -- evaluation ----------------------------------------------------------

    def type_of(self, f, tenv) -> hfl.HflType:
        if isinstance(f, hfl.Var):
            return tenv[f.name]
        if isinstance(f, hfl.Lam):
            return hfl.ArrowType(f.ty, self.type_of(f.body, {**tenv, f.name: f.ty}))
        if isinstance(f, hfl.Fix):
            return f.ty
        if isinstance(f, hfl.App):
            return self.type_of(f.fn, tenv).res
        if isinstance(f, (hfl.IntLit, hfl.BinOp)):
            return hfl.INT
        return hfl.PROP

    def free(self, f):
        k = id(f)
        if k not in self._fv:
            self._fv[k] = (f, tuple(sorted(hfl.free_vars(f))))
        return self._fv[k][1]

    def eval(self, f, env, tenv):
        if self.max_steps is not None:
            self.steps += 1
            if self.steps > self.max_steps:
                raise DomainTooLarge(f"more than {self.max_steps} evaluation steps")
        if isinstance(f, hfl.Top):
            return self.full
        if isinstance(f, hfl.Bot):
            return 0
        if isinstance(f, hfl.IntLit):
            return f.value
        if isinstance(f, hfl.BinOp):
            return hfl.arith(f.op, self.eval(f.left, env, tenv), self.eval(f.right, env, tenv))
        if isinstance(f, hfl.Pred):
            args = tuple(self.eval(a, env, tenv) for a in f.args)
            return self.full if hfl.pred_holds(f.op, args) else 0
        if isinstance(f, hfl.Or):
            return self.eval(f.left, env, tenv) | self.eval(f.right, env, tenv)
        if isinstance(f, hfl.And):
            return self.eval(f.left, env, tenv) & self.eval(f.right, env, tenv)
        if isinstance(f, hfl.Var):
            return env[f.name]
        if isinstance(f, hfl.Diamond):
            s = self.eval(f.body, env, tenv)
            out = 0
            for src, dst in self.pre.get(f.label, ()):
                if s >> dst & 1:
                    out |= 1 << src
            return out
        if isinstance(f, hfl.Box):
            s = self.eval(f.body, env, tenv)
            succ = self.succ.get(f.label, {})
            out = 0
            for i in range(self.n):
                if succ.get(i, 0) & ~s == 0:
                    out |= 1 << i
            return out
        if isinstance(f, hfl.Lam):
            self.table_size(self.type_of(f, tenv))
            t2 = {**tenv, f.name: f.ty}
            return tuple(self.eval(f.body, {**env, f.name: v}, t2) for v in self.domain(f.ty))
        if isinstance(f, hfl.App):
            fn = self.eval(f.fn, env, tenv)
            ty = self.type_of(f.fn, tenv)
            a = self.eval(f.arg, env, tenv)
            i = self.index(ty.arg, a)
            if i is None:
                return self.top(ty.res) if self.upper else self.bottom(ty.res)
            return fn[i]
        if isinstance(f, hfl.Fix):
            return self.fix(f, env, tenv)
        raise DenotError(f"unknown formula {f!r}")

    def fix(self, f, env, tenv):
        fv = self.free(f)
        key = (id(f), tuple(env[x] for x in fv))
        if key in self._memo:
            return self._memo[key]
        t2 = {**tenv, f.name: f.ty}
        x = self.bottom(f.ty) if f.kind == "mu" else self.top(f.ty)
        while True:
            y = self.eval(f.body, {**env, f.name: x}, t2)
            if y == x:
                break
            x = y
        self._memo[key] = x
        return x

    def states(self, mask) -> set:
        return {q for i, q in enumerate(self.lts.states) if mask >> i & 1}


def _as_formula(h) -> hfl.Formula:
    if isinstance(h, hfl.Hes):
        return hfl.hes_to_formula(h)
    return h


def denotational_bounds(lts: Lts, h, config: DenotConfig = DenotConfig()) -> tuple:
    """(lower, upper) state sets; equal when the meaning is determined exactly."""
    f = _as_formula(h)
    if not _has_int(f):
        s = _Sem(lts, 0, False, config.domain_cap, config.max_steps)
        r = s.states(s.eval(f, {}, {}))
        return r, r
    lo = hi = None
    for B in config.windows:
        s_lo = _Sem(lts, B, False, config.domain_cap, config.max_steps)
        s_hi = _Sem(lts, B, True, config.domain_cap, config.max_steps)
        lo = s_lo.states(s_lo.eval(f, {}, {}))
        hi = s_hi.states(s_hi.eval(f, {}, {}))
        if lo == hi:
            break
    return lo, hi


def denotational_check(lts: Lts, h, config: DenotConfig = DenotConfig()) -> set:
    """The set of LTS states satisfying h (an Hes or a closed Prop formula)."""
    lo, hi = denotational_bounds(lts, h, config)
    if lo != hi:
        raise Undetermined(lo, hi)
    return lo


def semantic_function(lts: Lts, f: hfl.Formula, window: int = 0, upper: bool = False,
                      cap: int = 200_000):
    """Evaluate a closed formula to its raw semantic value (tuples for functions).

    Returns (value, evaluator) so callers can inspect domains and orders.
    """
    s = _Sem(lts, window, upper, cap)
    return s.eval(f, {}, {}), s
