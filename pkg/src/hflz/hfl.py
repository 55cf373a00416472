"""HFL_Z formulas, types and hierarchical equation systems.

Formulas are immutable trees.  Fixpoint binders are a single ``Fix`` node
whose ``kind`` is ``"mu"`` or ``"nu"``.  The logic is negation-free: the
only way to get a complement is :func:`dual_formula`, which swaps every
connective with its De Morgan partner.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field
from typing import Iterable, Optional, Union


class HflError(Exception):
    """Raised for ill-typed or malformed HFL input."""


class HflTypeError(HflError):
    pass


class HflSyntaxError(HflError):
    pass


# ---------------------------------------------------------------------------
# types


@dataclass(frozen=True)
class PropType:
    def __str__(self) -> str:
        return "prop"


@dataclass(frozen=True)
class IntType:
    def __str__(self) -> str:
        return "int"


@dataclass(frozen=True)
class ArrowType:
    arg: "HflType"
    res: "HflType"

    def __str__(self) -> str:
        a = str(self.arg)
        if isinstance(self.arg, ArrowType):
            a = f"({a})"
        return f"{a} -> {self.res}"


HflType = Union[PropType, IntType, ArrowType]
PROP = PropType()
INT = IntType()


def arrows(args: Iterable[HflType], res: HflType) -> HflType:
    args = list(args)
    for a in reversed(args):
        res = ArrowType(a, res)
    return res


def split_arrows(ty: HflType) -> tuple[list[HflType], HflType]:
    args = []
    while isinstance(ty, ArrowType):
        args.append(ty.arg)
        ty = ty.res
    return args, ty


def type_order(ty: HflType) -> int:
    """Order of a type: Prop and Int have order 0."""
    if isinstance(ty, ArrowType):
        return max(type_order(ty.arg) + 1, type_order(ty.res))
    return 0


def check_type_wf(ty: HflType) -> None:
    """Int may only appear in argument position."""
    if isinstance(ty, ArrowType):
        if isinstance(ty.res, IntType):
            raise HflTypeError(f"int in result position of {ty}")
        check_type_wf(ty.arg)
        check_type_wf(ty.res)


# ---------------------------------------------------------------------------
# formulas

ARITH_OPS = ("+", "-", "*")
BINARY_PREDS = ("=", "!=", "<", "<=", ">", ">=")
UNARY_PREDS = ("even", "odd")
NEG_PRED = {"=": "!=", "!=": "=", "<": ">=", ">=": "<", ">": "<=", "<=": ">",
            "even": "odd", "odd": "even"}


def pred_holds(p: str, args: tuple[int, ...]) -> bool:
    if p == "even":
        return args[0] % 2 == 0
    if p == "odd":
        return args[0] % 2 == 1
    a, b = args
    return {"=": a == b, "!=": a != b, "<": a < b, "<=": a <= b,
            ">": a > b, ">=": a >= b}[p]


def arith(op: str, a: int, b: int) -> int:
    if op == "+":
        return a + b
    if op == "-":
        return a - b
    if op == "*":
        return a * b
    raise HflError(f"unknown operator {op}")


class Formula:
    __slots__ = ()


@dataclass(frozen=True)
class Top(Formula):
    pass


@dataclass(frozen=True)
class Bot(Formula):
    pass


@dataclass(frozen=True)
class IntLit(Formula):
    value: int


@dataclass(frozen=True)
class BinOp(Formula):
    op: str
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Pred(Formula):
    op: str
    args: tuple


@dataclass(frozen=True)
class Or(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class And(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Var(Formula):
    name: str


@dataclass(frozen=True)
class Diamond(Formula):
    label: str
    body: Formula


@dataclass(frozen=True)
class Box(Formula):
    label: str
    body: Formula


@dataclass(frozen=True)
class Fix(Formula):
    kind: str  # "mu" | "nu"
    name: str
    ty: Optional[HflType]
    body: Formula


@dataclass(frozen=True)
class Lam(Formula):
    name: str
    ty: Optional[HflType]
    body: Formula


@dataclass(frozen=True)
class App(Formula):
    fn: Formula
    arg: Formula


TOP = Top()
BOT = Bot()


def Mu(name, ty, body):
    return Fix("mu", name, ty, body)


def Nu(name, ty, body):
    return Fix("nu", name, ty, body)


def apps(fn: Formula, *args: Formula) -> Formula:
    for a in args:
        fn = App(fn, a)
    return fn


def spine(f: Formula) -> tuple[Formula, list[Formula]]:
    args = []
    while isinstance(f, App):
        args.append(f.arg)
        f = f.fn
    args.reverse()
    return f, args


def disj(*fs: Formula) -> Formula:
    if not fs:
        return BOT
    out = fs[0]
    for f in fs[1:]:
        out = Or(out, f)
    return out


def conj(*fs: Formula) -> Formula:
    if not fs:
        return TOP
    out = fs[0]
    for f in fs[1:]:
        out = And(out, f)
    return out


def children(f: Formula) -> tuple[Formula, ...]:
    if isinstance(f, (BinOp, Or, And)):
        return (f.left, f.right)
    if isinstance(f, Pred):
        return tuple(f.args)
    if isinstance(f, (Diamond, Box, Fix, Lam)):
        return (f.body,)
    if isinstance(f, App):
        return (f.fn, f.arg)
    return ()


def subformulas(f: Formula):
    yield f
    for c in children(f):
        yield from subformulas(c)


def free_vars(f: Formula) -> frozenset[str]:
    if isinstance(f, Var):
        return frozenset([f.name])
    if isinstance(f, (Fix, Lam)):
        return free_vars(f.body) - {f.name}
    out = frozenset()
    for c in children(f):
        out |= free_vars(c)
    return out


def all_names(f: Formula) -> set[str]:
    out = set()
    for g in subformulas(f):
        if isinstance(g, Var):
            out.add(g.name)
        elif isinstance(g, (Fix, Lam)):
            out.add(g.name)
    return out


def fresh_name(base: str, avoid) -> str:
    base = re.sub(r"_\d+$", "", base) or "v"
    if base not in avoid:
        return base
    for i in itertools.count(1):
        cand = f"{base}_{i}"
        if cand not in avoid:
            return cand


def rebuild(f: Formula, kids: list[Formula]) -> Formula:
    if isinstance(f, BinOp):
        return BinOp(f.op, kids[0], kids[1])
    if isinstance(f, Or):
        return Or(kids[0], kids[1])
    if isinstance(f, And):
        return And(kids[0], kids[1])
    if isinstance(f, Pred):
        return Pred(f.op, tuple(kids))
    if isinstance(f, Diamond):
        return Diamond(f.label, kids[0])
    if isinstance(f, Box):
        return Box(f.label, kids[0])
    if isinstance(f, Fix):
        return Fix(f.kind, f.name, f.ty, kids[0])
    if isinstance(f, Lam):
        return Lam(f.name, f.ty, kids[0])
    if isinstance(f, App):
        return App(kids[0], kids[1])
    return f


def subst(f: Formula, name: str, g: Formula) -> Formula:
    """Capture-avoiding substitution [g/name]f."""
    return subst_many(f, {name: g})


def subst_many(f: Formula, sub: dict) -> Formula:
    if not sub:
        return f
    if isinstance(f, Var):
        return sub.get(f.name, f)
    if isinstance(f, (Fix, Lam)):
        inner = {k: v for k, v in sub.items() if k != f.name}
        inner = {k: v for k, v in inner.items() if k in free_vars(f.body)}
        if not inner:
            return f
        fvs = set()
        for v in inner.values():
            fvs |= free_vars(v)
        name, body = f.name, f.body
        if name in fvs:
            avoid = fvs | all_names(body) | set(inner)
            new = fresh_name(name, avoid)
            body = subst_many(body, {name: Var(new)})
            name = new
        body = subst_many(body, inner)
        if isinstance(f, Fix):
            return Fix(f.kind, name, f.ty, body)
        return Lam(name, f.ty, body)
    kids = children(f)
    if not kids:
        return f
    return rebuild(f, [subst_many(c, sub) for c in kids])


def is_fixpoint_free(f: Formula) -> bool:
    return not any(isinstance(g, Fix) for g in subformulas(f))


def canonical(f: Formula) -> Formula:
    """Rename bound variables to positional names (for alpha-equivalence)."""
    counter = itertools.count()

    def go(g, env):
        if isinstance(g, Var):
            return Var(env.get(g.name, g.name))
        if isinstance(g, (Fix, Lam)):
            new = f"%{next(counter)}"
            body = go(g.body, {**env, g.name: new})
            if isinstance(g, Fix):
                return Fix(g.kind, new, g.ty, body)
            return Lam(new, g.ty, body)
        kids = children(g)
        if not kids:
            return g
        return rebuild(g, [go(c, env) for c in kids])

    return go(f, {})


def alpha_equiv(f: Formula, g: Formula) -> bool:
    return canonical(f) == canonical(g)


def dual_formula(f: Formula) -> Formula:
    """De Morgan dual: swap top/bot, or/and, <a>/[a], mu/nu, p/not-p."""
    if isinstance(f, Top):
        return BOT
    if isinstance(f, Bot):
        return TOP
    if isinstance(f, (IntLit, BinOp, Var)):
        return f
    if isinstance(f, Pred):
        return Pred(NEG_PRED[f.op], f.args)
    if isinstance(f, Or):
        return And(dual_formula(f.left), dual_formula(f.right))
    if isinstance(f, And):
        return Or(dual_formula(f.left), dual_formula(f.right))
    if isinstance(f, Diamond):
        return Box(f.label, dual_formula(f.body))
    if isinstance(f, Box):
        return Diamond(f.label, dual_formula(f.body))
    if isinstance(f, Fix):
        return Fix("nu" if f.kind == "mu" else "mu", f.name, f.ty, dual_formula(f.body))
    if isinstance(f, Lam):
        return Lam(f.name, f.ty, dual_formula(f.body))
    if isinstance(f, App):
        return App(dual_formula(f.fn), dual_formula(f.arg))
    raise HflError(f"unknown formula {f!r}")


def labels_of(f: Formula) -> set[str]:
    return {g.label for g in subformulas(f) if isinstance(g, (Diamond, Box))}


# ---------------------------------------------------------------------------
# hierarchical equation systems


@dataclass(frozen=True)
class Equation:
    name: str
    ty: Optional[HflType]
    fix: str  # "mu" | "nu"
    params: tuple[str, ...]
    body: Formula

    def param_types(self) -> list[HflType]:
        args, _ = split_arrows(self.ty)
        return args[: len(self.params)]

    def rhs(self) -> Formula:
        out = self.body
        for p, t in reversed(list(zip(self.params, self.param_types()))):
            out = Lam(p, t, out)
        return out

    @property
    def arity(self) -> int:
        return len(split_arrows(self.ty)[0])


@dataclass(frozen=True)
class Hes:
    equations: tuple[Equation, ...]
    main: Formula

    def names(self) -> list[str]:
        return [e.name for e in self.equations]

    def equation(self, name: str) -> Equation:
        for e in self.equations:
            if e.name == name:
                return e
        raise KeyError(name)

    def priorities(self) -> dict[str, int]:
        """X_i gets 2(n-i) if nu and 2(n-i)+1 if mu (1-based i)."""
        n = len(self.equations)
        out = {}
        for i, e in enumerate(self.equations, start=1):
            out[e.name] = 2 * (n - i) + (1 if e.fix == "mu" else 0)
        return out


def hes_env(h: Hes) -> dict[str, HflType]:
    return {e.name: e.ty for e in h.equations}


def hes_to_formula(h: Hes) -> Formula:
    """toHFL: substitute the last equation first, so X_1 ends up outermost."""
    rhs = [e.rhs() for e in h.equations]
    main = h.main
    for i in range(len(rhs) - 1, -1, -1):
        e = h.equations[i]
        fx = Fix(e.fix, e.name, e.ty, rhs[i])
        for j in range(i):
            rhs[j] = subst(rhs[j], e.name, fx)
        main = subst(main, e.name, fx)
    return main


def uniquify(f: Formula, avoid=()) -> Formula:
    """Rename binders so every bound name is distinct and not in avoid."""
    used = set(avoid) | free_vars(f)

    def go(g, env):
        if isinstance(g, Var):
            return Var(env.get(g.name, g.name))
        if isinstance(g, (Fix, Lam)):
            new = fresh_name(g.name, used)
            used.add(new)
            body = go(g.body, {**env, g.name: new})
            return Fix(g.kind, new, g.ty, body) if isinstance(g, Fix) else Lam(new, g.ty, body)
        kids = children(g)
        if not kids:
            return g
        return rebuild(g, [go(c, env) for c in kids])

    return go(f, {})


def formula_to_hes(f: Formula) -> Hes:
    """Lift every fixpoint to an equation, outermost first.

    A fixpoint under lambdas is lambda-lifted over the lambda-bound
    variables it mentions.  The input must be closed and fully annotated.
    """
    f = uniquify(f)
    eqs: list = []

    def go(g, scope):
        if isinstance(g, Fix):
            extra = [(x, t) for (x, t) in scope if x in free_vars(g)]
            call = apps(Var(g.name), *[Var(x) for x, _ in extra])
            idx = len(eqs)
            eqs.append(None)
            body = go(subst(g.body, g.name, call), scope)
            ty = arrows([t for _, t in extra], g.ty)
            eqs[idx] = Equation(g.name, ty, g.kind, tuple(x for x, _ in extra), body)
            return call
        if isinstance(g, Lam):
            return Lam(g.name, g.ty, go(g.body, scope + [(g.name, g.ty)]))
        kids = children(g)
        if not kids:
            return g
        return rebuild(g, [go(c, scope) for c in kids])

    main = go(f, [])
    return Hes(tuple(eqs), main)


def normalize_hes(h: Hes) -> Hes:
    """Make the main formula a bare variable bound by a leading nu equation."""
    if isinstance(h.main, Var) and h.main.name in h.names():
        return h
    avoid = set(h.names()) | all_names(h.main)
    for e in h.equations:
        avoid |= all_names(e.body) | set(e.params)
    x0 = fresh_name("X0", avoid)
    eq0 = Equation(x0, PROP, "nu", (), h.main)
    return Hes((eq0,) + tuple(h.equations), Var(x0))


def dual_hes(h: Hes) -> Hes:
    eqs = tuple(
        Equation(e.name, e.ty, "nu" if e.fix == "mu" else "mu", e.params, dual_formula(e.body))
        for e in h.equations
    )
    return Hes(eqs, dual_formula(h.main))


def canonical_hes(h: Hes) -> Hes:
    """Rename equation variables and parameters positionally."""
    ren = {e.name: f"X{i}" for i, e in enumerate(h.equations)}
    eqs = []
    for e in h.equations:
        pren = {p: f"p{j}" for j, p in enumerate(e.params)}
        sub = {**{k: Var(v) for k, v in ren.items()}, **{k: Var(v) for k, v in pren.items()}}
        body = canonical(subst_many(e.body, sub))
        eqs.append(Equation(ren[e.name], e.ty, e.fix, tuple(pren[p] for p in e.params), body))
    main = canonical(subst_many(h.main, {k: Var(v) for k, v in ren.items()}))
    return Hes(tuple(eqs), main)


def hes_alpha_equiv(h1: Hes, h2: Hes) -> bool:
    return canonical_hes(h1) == canonical_hes(h2)


def encode_quantifier(kind: str, var: str, body: Formula) -> Formula:
    """exists x.phi = (mu X.\\x. phi x \\/ X(x-1) \\/ X(x+1)) 0; forall is the nu/and analogue."""
    if not isinstance(body, Lam) or body.ty != INT:
        raise HflTypeError("quantifier body must be a lambda over int")
    if kind not in ("exists", "forall"):
        raise HflError(f"unknown quantifier {kind}")
    if var in free_vars(body):
        raise HflError(f"fixpoint variable {var} occurs in the body")
    x = fresh_name(body.name, {var} | all_names(body))
    phi = subst(body.body, body.name, Var(x))
    left = App(Var(var), BinOp("-", Var(x), IntLit(1)))
    right = App(Var(var), BinOp("+", Var(x), IntLit(1)))
    ty = ArrowType(INT, PROP)
    if kind == "exists":
        fx = Fix("mu", var, ty, Lam(x, INT, Or(Or(phi, left), right)))
    else:
        fx = Fix("nu", var, ty, Lam(x, INT, And(And(phi, left), right)))
    return App(fx, IntLit(0))


# ---------------------------------------------------------------------------
# typing


def typecheck_formula(env: dict, f: Formula) -> HflType:
    """Return the type of f under env, or raise HflTypeError."""
    if isinstance(f, (Top, Bot)):
        return PROP
    if isinstance(f, IntLit):
        return INT
    if isinstance(f, BinOp):
        for c in (f.left, f.right):
            if typecheck_formula(env, c) != INT:
                raise HflTypeError(f"arithmetic on non-int in {show(f)}")
        return INT
    if isinstance(f, Pred):
        arity = 1 if f.op in UNARY_PREDS else 2
        if len(f.args) != arity:
            raise HflTypeError(f"predicate {f.op} expects {arity} arguments")
        for c in f.args:
            if typecheck_formula(env, c) != INT:
                raise HflTypeError(f"predicate argument is not int in {show(f)}")
        return PROP
    if isinstance(f, (Or, And)):
        for c in (f.left, f.right):
            if typecheck_formula(env, c) != PROP:
                raise HflTypeError(f"connective on non-prop in {show(f)}")
        return PROP
    if isinstance(f, (Diamond, Box)):
        if typecheck_formula(env, f.body) != PROP:
            raise HflTypeError(f"modality on non-prop in {show(f)}")
        return PROP
    if isinstance(f, Var):
        if f.name not in env:
            raise HflTypeError(f"unbound variable {f.name}")
        return env[f.name]
    if isinstance(f, Fix):
        if f.ty is None or isinstance(f.ty, IntType):
            raise HflTypeError(f"bad fixpoint type for {f.name}")
        check_type_wf(f.ty)
        t = typecheck_formula({**env, f.name: f.ty}, f.body)
        if t != f.ty:
            raise HflTypeError(f"fixpoint {f.name}: body has type {t}, expected {f.ty}")
        return f.ty
    if isinstance(f, Lam):
        if f.ty is None:
            raise HflTypeError(f"missing type on lambda {f.name}")
        check_type_wf(f.ty)
        t = typecheck_formula({**env, f.name: f.ty}, f.body)
        if isinstance(t, IntType):
            raise HflTypeError(f"lambda {f.name} returns int")
        return ArrowType(f.ty, t)
    if isinstance(f, App):
        tf = typecheck_formula(env, f.fn)
        if not isinstance(tf, ArrowType):
            raise HflTypeError(f"applying a non-function in {show(f)}")
        ta = typecheck_formula(env, f.arg)
        if ta != tf.arg:
            raise HflTypeError(f"argument type {ta} does not match {tf.arg} in {show(f)}")
        return tf.res
    raise HflTypeError(f"unknown formula {f!r}")


def typecheck_hes(h: Hes) -> None:
    env = hes_env(h)
    names = h.names()
    if len(set(names)) != len(names):
        raise HflTypeError("duplicate equation variable")
    for e in h.equations:
        if e.ty is None:
            raise HflTypeError(f"missing type for {e.name}")
        check_type_wf(e.ty)
        if isinstance(e.ty, IntType):
            raise HflTypeError(f"equation {e.name} has type int")
        if not is_fixpoint_free(e.body):
            raise HflTypeError(f"right-hand side of {e.name} contains a fixpoint")
        args, _ = split_arrows(e.ty)
        if len(e.params) > len(args):
            raise HflTypeError(f"too many parameters for {e.name}")
        t = typecheck_formula(env, e.rhs())
        if t != e.ty:
            raise HflTypeError(f"equation {e.name}: right-hand side has type {t}, expected {e.ty}")
    if not is_fixpoint_free(h.main):
        raise HflTypeError("main formula contains a fixpoint")
    if typecheck_formula(env, h.main) != PROP:
        raise HflTypeError("main formula is not of type prop")


# -- inference (used by the parser and the program translators)


class _TV:
    __slots__ = ("ref",)

    def __init__(self):
        self.ref = None


def _find(t):
    while isinstance(t, _TV) and t.ref is not None:
        t = t.ref
    return t


def _occurs(v, t):
    t = _find(t)
    if t is v:
        return True
    if isinstance(t, tuple):
        return _occurs(v, t[1]) or _occurs(v, t[2])
    return False


def _unify(a, b, where=""):
    a, b = _find(a), _find(b)
    if a is b:
        return
    if isinstance(a, _TV):
        if _occurs(a, b):
            raise HflTypeError(f"cyclic type {where}")
        a.ref = b
        return
    if isinstance(b, _TV):
        _unify(b, a, where)
        return
    if isinstance(a, tuple) and isinstance(b, tuple):
        _unify(a[1], b[1], where)
        _unify(a[2], b[2], where)
        return
    if a != b:
        raise HflTypeError(f"type mismatch {where}")


def _lift(t):
    if t is None:
        return _TV()
    if isinstance(t, ArrowType):
        return ("->", _lift(t.arg), _lift(t.res))
    return t


def _lower(t):
    t = _find(t)
    if isinstance(t, _TV):
        t.ref = PROP
        return PROP
    if isinstance(t, tuple):
        return ArrowType(_lower(t[1]), _lower(t[2]))
    return t


def infer_hes(h: Hes, main_type: Optional[HflType] = PROP, check: bool = True) -> Hes:
    """Fill in missing types (None) by unification; unconstrained ones become prop."""
    slots = {}  # id(node) -> type var, for binders
    env0 = {}
    eq_info = []
    for e in h.equations:
        t = _lift(e.ty)
        env0[e.name] = t
    for e in h.equations:
        t = env0[e.name]
        ptys = []
        cur = t
        for _ in e.params:
            a, r = _TV(), _TV()
            _unify(cur, ("->", a, r), f"in parameters of {e.name}")
            ptys.append(a)
            cur = r
        eq_info.append((ptys, cur))

    def go(f, env):
        if isinstance(f, (Top, Bot)):
            return PROP
        if isinstance(f, IntLit):
            return INT
        if isinstance(f, BinOp):
            _unify(go(f.left, env), INT, f"in {show(f)}")
            _unify(go(f.right, env), INT, f"in {show(f)}")
            return INT
        if isinstance(f, Pred):
            for a in f.args:
                _unify(go(a, env), INT, f"in {show(f)}")
            return PROP
        if isinstance(f, (Or, And)):
            _unify(go(f.left, env), PROP, f"in {show(f)}")
            _unify(go(f.right, env), PROP, f"in {show(f)}")
            return PROP
        if isinstance(f, (Diamond, Box)):
            _unify(go(f.body, env), PROP, f"in {show(f)}")
            return PROP
        if isinstance(f, Var):
            if f.name not in env:
                raise HflTypeError(f"unbound variable {f.name}")
            return env[f.name]
        if isinstance(f, Fix):
            t = _lift(f.ty)
            slots[id(f)] = t
            _unify(go(f.body, {**env, f.name: t}), t, f"in fixpoint {f.name}")
            return t
        if isinstance(f, Lam):
            t = _lift(f.ty)
            slots[id(f)] = t
            r = go(f.body, {**env, f.name: t})
            return ("->", t, r)
        if isinstance(f, App):
            tf = go(f.fn, env)
            ta = go(f.arg, env)
            r = _TV()
            _unify(tf, ("->", ta, r), f"in {show(f)}")
            return r
        raise HflTypeError(f"unknown formula {f!r}")

    for e, (ptys, rty) in zip(h.equations, eq_info):
        env = dict(env0)
        env.update(zip(e.params, ptys))
        _unify(go(e.body, env), rty, f"in equation {e.name}")
    _unify(go(h.main, env0), _lift(main_type), "in main formula")

    def fill(f):
        if isinstance(f, (Fix, Lam)):
            ty = _lower(slots[id(f)])
            body = fill(f.body)
            return Fix(f.kind, f.name, ty, body) if isinstance(f, Fix) else Lam(f.name, ty, body)
        kids = children(f)
        if not kids:
            return f
        return rebuild(f, [fill(c) for c in kids])

    eqs = tuple(Equation(e.name, _lower(env0[e.name]), e.fix, e.params, fill(e.body))
                for e in h.equations)
    out = Hes(eqs, fill(h.main))
    if check:
        typecheck_hes(out)
    return out


def infer_formula(f: Formula, env: Optional[dict] = None) -> Formula:
    """Annotate a closed (or env-typed) formula's binders."""
    env = env or {}
    eqs = tuple(Equation(k, v, "nu", (), Var(k)) for k, v in env.items())
    out = infer_hes(Hes(eqs, f), main_type=None, check=False).main
    typecheck_formula(env, out)
    return out


# ---------------------------------------------------------------------------
# printing


def show_type(t: HflType) -> str:
    return str(t)


def _atomic(f: Formula) -> bool:
    return isinstance(f, (Top, Bot, Var)) or (isinstance(f, IntLit) and f.value >= 0)


def show(f: Formula) -> str:
    """Fully parenthesized concrete syntax; parse(show(f)) == f."""
    if isinstance(f, Top):
        return "true"
    if isinstance(f, Bot):
        return "false"
    if isinstance(f, IntLit):
        return str(f.value) if f.value >= 0 else f"({f.value})"
    if isinstance(f, Var):
        return f.name
    if isinstance(f, BinOp):
        return f"({show(f.left)} {f.op} {show(f.right)})"
    if isinstance(f, Pred):
        if f.op in UNARY_PREDS:
            return f"{f.op}({show(f.args[0])})"
        return f"({show(f.args[0])} {f.op} {show(f.args[1])})"
    if isinstance(f, Or):
        return f"({show(f.left)} \\/ {show(f.right)})"
    if isinstance(f, And):
        return f"({show(f.left)} /\\ {show(f.right)})"
    if isinstance(f, Diamond):
        return f"<{f.label}>{_arg(f.body)}"
    if isinstance(f, Box):
        return f"[{f.label}]{_arg(f.body)}"
    if isinstance(f, Fix):
        ty = f":{_show_ty(f.ty)}" if f.ty is not None else ""
        return f"({f.kind} {f.name}{ty}. {show(f.body)})"
    if isinstance(f, Lam):
        ty = f":{_show_ty(f.ty)}" if f.ty is not None else ""
        return f"(\\{f.name}{ty}. {show(f.body)})"
    if isinstance(f, App):
        head, args = spine(f)
        return "(" + " ".join([_arg(head)] + [_arg(a) for a in args]) + ")"
    raise HflError(f"unknown formula {f!r}")


def _arg(f: Formula) -> str:
    s = show(f)
    if _atomic(f) or s.startswith("("):
        return s
    return f"({s})"


def _show_ty(t: HflType) -> str:
    s = str(t)
    return f"({s})" if isinstance(t, ArrowType) else s


def show_hes(h: Hes) -> str:
    lines = []
    for e in h.equations:
        parts = [e.name]
        for p, t in zip(e.params, e.param_types()):
            parts.append(p if t == PROP else f"({p}:{t})")
        head = " ".join(parts)
        body = show(e.body)
        _, res = split_arrows(e.ty)
        res_args, _ = split_arrows(e.ty)
        lines.append(f"{head} ={e.fix} {body};")
    lines.append(f"main: {show(h.main)};")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# parsing

_TOKEN = re.compile(
    r"\s*(?:(?P<comment>\#[^\n]*)|(?P<fix>=mu\b|=nu\b)|(?P<int>\d+)|(?P<ident>[A-Za-z_][A-Za-z0-9_']*)"
    r"|(?P<sym>\\/|/\\|->|<=|>=|!=|[()<>\[\]=+\-*\\.:;,]))"
)

KEYWORDS = {"mu", "nu", "true", "false", "even", "odd", "prop", "int", "o", "main"}


def _tokenize(text: str):
    pos = 0
    toks = []
    line = 1
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            if text[pos:].strip() == "":
                break
            raise HflSyntaxError(f"line {line}: unexpected character {text[pos:pos+10]!r}")
        line += text.count("\n", pos, m.end())
        pos = m.end()
        if m.group("comment"):
            continue
        for kind in ("fix", "int", "ident", "sym"):
            if m.group(kind) is not None:
                toks.append((kind, m.group(kind), line))
                break
    toks.append(("eof", "", line))
    return toks


class _Parser:
    def __init__(self, text):
        self.toks = _tokenize(text)
        self.i = 0

    def peek(self, k=0):
        return self.toks[min(self.i + k, len(self.toks) - 1)]

    def next(self):
        t = self.toks[self.i]
        self.i += 1
        return t

    def at(self, val, k=0):
        t = self.peek(k)
        return t[1] == val and t[0] in ("sym", "ident", "fix")

    def expect(self, val):
        t = self.next()
        if t[1] != val:
            raise HflSyntaxError(f"line {t[2]}: expected {val!r}, found {t[1]!r}")
        return t

    def ident(self):
        t = self.next()
        if t[0] != "ident" or t[1] in KEYWORDS - {"o"}:
            raise HflSyntaxError(f"line {t[2]}: expected identifier, found {t[1]!r}")
        return t[1]

    # types
    def type_(self):
        left = self.type_atom()
        if self.at("->"):
            self.next()
            return ArrowType(left, self.type_())
        return left

    def type_atom(self):
        t = self.next()
        if t[1] in ("prop", "o"):
            return PROP
        if t[1] == "int":
            return INT
        if t[1] == "(":
            ty = self.type_()
            self.expect(")")
            return ty
        raise HflSyntaxError(f"line {t[2]}: expected a type, found {t[1]!r}")

    # formulas
    def formula(self):
        if self.at("\\"):
            self.next()
            x = self.ident()
            ty = None
            if self.at(":"):
                self.next()
                ty = self.type_()
            self.expect(".")
            return Lam(x, ty, self.formula())
        if self.at("mu") or self.at("nu"):
            kind = self.next()[1]
            x = self.ident()
            ty = None
            if self.at(":"):
                self.next()
                ty = self.type_()
            self.expect(".")
            return Fix(kind, x, ty, self.formula())
        return self.disj()

    def disj(self):
        left = self.conj()
        while self.at("\\/"):
            self.next()
            left = Or(left, self.conj())
        return left

    def conj(self):
        left = self.cmp()
        while self.at("/\\"):
            self.next()
            left = And(left, self.cmp())
        return left

    def cmp(self):
        left = self.arith()
        if self.peek()[0] == "sym" and self.peek()[1] in BINARY_PREDS:
            op = self.next()[1]
            right = self.arith()
            return Pred(op, (left, right))
        return left

    def arith(self):
        left = self.term()
        while self.peek()[1] in ("+", "-") and self.peek()[0] == "sym":
            op = self.next()[1]
            left = BinOp(op, left, self.term())
        return left

    def term(self):
        left = self.app()
        while self.at("*"):
            self.next()
            left = BinOp("*", left, self.app())
        return left

    def _is_modal(self):
        t0, t1, t2 = self.peek(), self.peek(1), self.peek(2)
        if t0[1] == "<" and t1[0] == "ident" and t2[1] == ">":
            return True
        if t0[1] == "[" and t1[0] == "ident" and t2[1] == "]":
            return True
        return False

    def app(self):
        if self._is_modal():
            open_ = self.next()[1]
            label = self.next()[1]
            self.next()
            body = self.app()
            return Diamond(label, body) if open_ == "<" else Box(label, body)
        head = self.atom(head=True)
        while self._starts_atom():
            head = App(head, self.atom(head=False))
        return head

    def _starts_atom(self):
        t = self.peek()
        if t[0] == "int":
            return True
        if t[0] == "ident" and t[1] not in ("mu", "nu", "main"):
            return True
        return t[1] == "("

    def atom(self, head):
        t = self.next()
        if t[0] == "int":
            return IntLit(int(t[1]))
        if head and t[1] == "-" and self.peek()[0] == "int":
            return IntLit(-int(self.next()[1]))
        if t[1] == "true":
            return TOP
        if t[1] == "false":
            return BOT
        if t[1] in UNARY_PREDS:
            self.expect("(")
            arg = self.formula()
            self.expect(")")
            return Pred(t[1], (arg,))
        if t[1] == "(":
            f = self.formula()
            self.expect(")")
            return f
        if t[0] == "ident" and t[1] not in KEYWORDS - {"o"}:
            return Var(t[1])
        raise HflSyntaxError(f"line {t[2]}: unexpected token {t[1]!r}")


def parse_formula(text: str, env: Optional[dict] = None, infer: bool = True) -> Formula:
    p = _Parser(text)
    f = p.formula()
    if p.peek()[0] != "eof":
        t = p.peek()
        raise HflSyntaxError(f"line {t[2]}: trailing input at {t[1]!r}")
    if infer:
        f = infer_formula(f, env)
    return f


def parse_hes(text: str) -> Hes:
    """Parse the line-oriented HES format (see show_hes)."""
    p = _Parser(text)
    eqs = []
    main = None
    while p.peek()[0] != "eof":
        if p.at("main") and p.at(":", 1):
            p.next()
            p.next()
            main = p.formula()
            p.expect(";")
            continue
        name = p.ident()
        params, ptys = [], []
        while not (p.peek()[0] == "fix"):
            if p.at("("):
                p.next()
                x = p.ident()
                p.expect(":")
                ptys.append(p.type_())
                p.expect(")")
            else:
                x = p.ident()
                ptys.append(None)
            params.append(x)
        fix = p.next()[1][1:]
        body = p.formula()
        p.expect(";")
        ty = None
        if all(t is not None for t in ptys) and not params:
            ty = None
        eqs.append((name, fix, tuple(params), ptys, body))
    if main is None:
        raise HflSyntaxError("missing 'main:' line")
    # partial annotations: encode known param types as a constraint equation type
    built = []
    for name, fix, params, ptys, body in eqs:
        built.append(Equation(name, None, fix, params, body))
    h = Hes(tuple(built), main)
    return _infer_with_params(h, [e[3] for e in eqs])


def _infer_with_params(h: Hes, ptys_list) -> Hes:
    # Wrap annotated params into lambdas so the inference sees their types,
    # then strip them back off.
    eqs = []
    for e, ptys in zip(h.equations, ptys_list):
        body = e.body
        for p, t in reversed(list(zip(e.params, ptys))):
            body = Lam(p, t, body)
        eqs.append(Equation(e.name, None, e.fix, (), body))
    h2 = infer_hes(Hes(tuple(eqs), h.main))
    out = []
    for e, orig in zip(h2.equations, h.equations):
        body = e.body
        for _ in orig.params:
            body = body.body
        out.append(Equation(e.name, e.ty, e.fix, orig.params, body))
    res = Hes(tuple(out), h2.main)
    typecheck_hes(res)
    return res
