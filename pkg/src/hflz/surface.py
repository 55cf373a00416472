"""Source language: a call-by-name functional language with events and ``<>``.

Concrete syntax (OCaml-flavoured)::

    loop x = loop x;
    main = loop (event a; ())

or ``let f x = ... and g y = ... in t``.  Guards of ``if`` are boolean
combinations (``&&``, ``||``) of integer comparisons.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Optional, Union


class ProgramError(Exception):
    pass


class ParseError(ProgramError):
    def __init__(self, msg: str, line: int = 0, col: int = 0):
        super().__init__(f"{line}:{col}: {msg}" if line else msg)
        self.line = line
        self.col = col


class TypeCheckError(ProgramError):
    pass


# ---------------------------------------------------------------------------
# terms


class Term:
    __slots__ = ()


@dataclass(frozen=True)
class Unit(Term):
    pass


@dataclass(frozen=True)
class Var(Term):
    name: str


@dataclass(frozen=True)
class IntLit(Term):
    value: int


@dataclass(frozen=True)
class BinOp(Term):
    op: str
    left: Term
    right: Term


class Cond:
    __slots__ = ()


@dataclass(frozen=True)
class PredCond(Cond):
    op: str
    args: tuple


@dataclass(frozen=True)
class AndCond(Cond):
    left: Cond
    right: Cond


@dataclass(frozen=True)
class OrCond(Cond):
    left: Cond
    right: Cond


@dataclass(frozen=True)
class If(Term):
    cond: Cond
    then_: Term
    else_: Term


@dataclass(frozen=True)
class Event(Term):
    label: str
    body: Term


@dataclass(frozen=True)
class App(Term):
    fn: Term
    arg: Term


@dataclass(frozen=True)
class NonDet(Term):
    left: Term
    right: Term


@dataclass(frozen=True)
class Abs(Term):
    params: tuple
    body: Term


UNIT = Unit()


@dataclass(frozen=True)
class Def:
    name: str
    params: tuple
    body: Term


@dataclass(frozen=True)
class Program:
    defs: tuple
    main: Term

    def lookup(self, name: str) -> Optional[Def]:
        for d in self.defs:
            if d.name == name:
                return d
        return None

    @property
    def def_map(self) -> dict:
        return {d.name: d for d in self.defs}

    @property
    def main_name(self) -> Optional[str]:
        if isinstance(self.main, Var):
            d = self.lookup(self.main.name)
            if d is not None and not d.params:
                return d.name
        return None


BINARY_PREDS = ("=", "!=", "<", "<=", ">", ">=")
UNARY_PREDS = ("even", "odd")
NEG_PRED = {"=": "!=", "!=": "=", "<": ">=", ">=": "<", ">": "<=", "<=": ">",
            "even": "odd", "odd": "even"}


def apps(fn: Term, *args: Term) -> Term:
    for a in args:
        fn = App(fn, a)
    return fn


def spine(t: Term) -> tuple[Term, list]:
    args = []
    while isinstance(t, App):
        args.append(t.arg)
        t = t.fn
    args.reverse()
    return t, args


def negate_cond(c: Cond) -> Cond:
    if isinstance(c, PredCond):
        return PredCond(NEG_PRED[c.op], c.args)
    if isinstance(c, AndCond):
        return OrCond(negate_cond(c.left), negate_cond(c.right))
    return AndCond(negate_cond(c.left), negate_cond(c.right))


def cond_terms(c: Cond):
    if isinstance(c, PredCond):
        yield from c.args
    else:
        yield from cond_terms(c.left)
        yield from cond_terms(c.right)


def map_cond(c: Cond, fn) -> Cond:
    if isinstance(c, PredCond):
        return PredCond(c.op, tuple(fn(a) for a in c.args))
    if isinstance(c, AndCond):
        return AndCond(map_cond(c.left, fn), map_cond(c.right, fn))
    return OrCond(map_cond(c.left, fn), map_cond(c.right, fn))


def subterms(t: Term):
    yield t
    if isinstance(t, BinOp):
        yield from subterms(t.left)
        yield from subterms(t.right)
    elif isinstance(t, If):
        for a in cond_terms(t.cond):
            yield from subterms(a)
        yield from subterms(t.then_)
        yield from subterms(t.else_)
    elif isinstance(t, Event):
        yield from subterms(t.body)
    elif isinstance(t, (App, NonDet)):
        a, b = (t.fn, t.arg) if isinstance(t, App) else (t.left, t.right)
        yield from subterms(a)
        yield from subterms(b)
    elif isinstance(t, Abs):
        yield from subterms(t.body)


def free_vars(t: Term) -> frozenset:
    if isinstance(t, Var):
        return frozenset([t.name])
    if isinstance(t, Abs):
        return free_vars(t.body) - set(t.params)
    if isinstance(t, BinOp):
        return free_vars(t.left) | free_vars(t.right)
    if isinstance(t, If):
        out = free_vars(t.then_) | free_vars(t.else_)
        for a in cond_terms(t.cond):
            out |= free_vars(a)
        return out
    if isinstance(t, Event):
        return free_vars(t.body)
    if isinstance(t, App):
        return free_vars(t.fn) | free_vars(t.arg)
    if isinstance(t, NonDet):
        return free_vars(t.left) | free_vars(t.right)
    return frozenset()


def events_of(t: Term) -> set:
    return {s.label for s in subterms(t) if isinstance(s, Event)}


def program_events(p: Program) -> set:
    out = events_of(p.main)
    for d in p.defs:
        out |= events_of(d.body)
    return out


def map_term(t: Term, fn) -> Term:
    """Bottom-up rebuild: fn is applied to every rebuilt node."""
    if isinstance(t, BinOp):
        t = BinOp(t.op, map_term(t.left, fn), map_term(t.right, fn))
    elif isinstance(t, If):
        t = If(map_cond(t.cond, lambda a: map_term(a, fn)), map_term(t.then_, fn),
               map_term(t.else_, fn))
    elif isinstance(t, Event):
        t = Event(t.label, map_term(t.body, fn))
    elif isinstance(t, App):
        t = App(map_term(t.fn, fn), map_term(t.arg, fn))
    elif isinstance(t, NonDet):
        t = NonDet(map_term(t.left, fn), map_term(t.right, fn))
    elif isinstance(t, Abs):
        t = Abs(t.params, map_term(t.body, fn))
    return fn(t)


def subst(t: Term, sub: dict) -> Term:
    """Substitute closed terms for variables (no capture is possible)."""
    if not sub:
        return t
    if isinstance(t, Var):
        return sub.get(t.name, t)
    if isinstance(t, Abs):
        inner = {k: v for k, v in sub.items() if k not in t.params}
        return Abs(t.params, subst(t.body, inner))
    if isinstance(t, (Unit, IntLit)):
        return t
    if isinstance(t, BinOp):
        return BinOp(t.op, subst(t.left, sub), subst(t.right, sub))
    if isinstance(t, If):
        return If(map_cond(t.cond, lambda a: subst(a, sub)), subst(t.then_, sub),
                  subst(t.else_, sub))
    if isinstance(t, Event):
        return Event(t.label, subst(t.body, sub))
    if isinstance(t, App):
        return App(subst(t.fn, sub), subst(t.arg, sub))
    if isinstance(t, NonDet):
        return NonDet(subst(t.left, sub), subst(t.right, sub))
    raise ProgramError(f"unknown term {t!r}")


def fresh(base: str, avoid) -> str:
    if base not in avoid:
        return base
    i = 1
    while f"{base}{i}" in avoid:
        i += 1
    return f"{base}{i}"


def all_names(p: Program) -> set:
    names = set()
    for d in p.defs:
        names.add(d.name)
        names.update(d.params)
        names.update(s.name for s in subterms(d.body) if isinstance(s, Var))
        names.update(x for s in subterms(d.body) if isinstance(s, Abs) for x in s.params)
    names.update(s.name for s in subterms(p.main) if isinstance(s, Var))
    return names


# ---------------------------------------------------------------------------
# lexer / parser

_TOKEN = re.compile(
    r"(?P<ws>\s+)|(?P<comment>\(\*)|(?P<int>\d+)|(?P<ident>[A-Za-z_][A-Za-z0-9_']*)"
    r"|(?P<sym>\(\)|<>|->|<=|>=|!=|<>|\|\||&&|[()=<>+\-*;])"
)
KEYWORDS = {"let", "in", "and", "if", "then", "else", "event", "assert", "fun"}
_OMEGA_PLACEHOLDER = "%Omega"


def _tokenize(text: str):
    toks = []
    pos, line, col = 0, 1, 1

    def advance(s):
        nonlocal line, col
        for ch in s:
            if ch == "\n":
                line += 1
                col = 1
            else:
                col += 1

    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise ParseError(f"unexpected character {text[pos]!r}", line, col)
        if m.group("comment"):
            depth, i = 1, pos + 2
            while depth and i < len(text):
                if text.startswith("(*", i):
                    depth += 1
                    i += 2
                elif text.startswith("*)", i):
                    depth -= 1
                    i += 2
                else:
                    i += 1
            if depth:
                raise ParseError("unterminated comment", line, col)
            advance(text[pos:i])
            pos = i
            continue
        s = m.group(0)
        if not m.group("ws"):
            kind = "int" if m.group("int") else "ident" if m.group("ident") else "sym"
            if kind == "ident" and s in KEYWORDS:
                kind = "kw"
            toks.append((kind, s, line, col))
        advance(s)
        pos = m.end()
    toks.append(("eof", "", line, col))
    return toks


class _Parser:
    def __init__(self, text: str):
        self.toks = _tokenize(text)
        self.i = 0
        self.used_assert = False

    def peek(self, k=0):
        return self.toks[min(self.i + k, len(self.toks) - 1)]

    def next(self):
        t = self.toks[self.i]
        self.i += 1
        return t

    def at(self, val, k=0):
        t = self.peek(k)
        return t[1] == val and t[0] != "int"

    def fail(self, msg, tok=None):
        tok = tok or self.peek()
        raise ParseError(msg, tok[2], tok[3])

    def expect(self, val):
        t = self.peek()
        if t[1] != val or t[0] == "int":
            self.fail(f"expected {val!r}, found {t[1] or 'end of input'!r}")
        return self.next()

    def ident(self):
        t = self.peek()
        if t[0] != "ident":
            self.fail(f"expected identifier, found {t[1] or 'end of input'!r}")
        return self.next()[1]

    # program level
    def program(self) -> Program:
        if self.at("let"):
            self.next()
            if self.peek()[:2] == ("ident", "rec"):
                self.next()
            defs = [self.definition()]
            while self.at("and"):
                self.next()
                defs.append(self.definition())
            self.expect("in")
            main = self.term()
            if self.at(";"):
                self.next()
            self._eof()
            return self._finish(defs, main)
        defs = []
        while True:
            defs.append(self.definition())
            if self.at(";"):
                self.next()
            if self.peek()[0] == "eof":
                break
        self._eof()
        if not any(d.name == "main" for d in defs):
            raise ParseError("missing definition of main")
        return self._finish(defs, Var("main"))

    def _eof(self):
        if self.peek()[0] != "eof":
            self.fail(f"unexpected {self.peek()[1]!r}")

    def _finish(self, defs, main) -> Program:
        seen = set()
        for d in defs:
            if d.name in seen:
                raise ParseError(f"duplicate function name {d.name}")
            seen.add(d.name)
            if len(set(d.params)) != len(d.params):
                raise ParseError(f"duplicate parameter in {d.name}")
        p = Program(tuple(defs), main)
        if self.used_assert:
            name = fresh("Omega", all_names(p) - {_OMEGA_PLACEHOLDER})
            sub = {_OMEGA_PLACEHOLDER: Var(name)}
            defs = [Def(d.name, d.params, subst(d.body, sub)) for d in defs]
            at = next((i for i, d in enumerate(defs) if d.name == "main"), len(defs))
            defs.insert(at, Def(name, (), Var(name)))
            p = Program(tuple(defs), subst(main, sub))
        return p

    def definition(self) -> Def:
        name = self.ident()
        params = []
        while self.peek()[0] == "ident":
            params.append(self.next()[1])
        self.expect("=")
        return Def(name, tuple(params), self.term())

    # terms
    def term(self) -> Term:
        left = self.seq()
        while self.at("<>"):
            self.next()
            left = NonDet(left, self.seq())
        return left

    def seq(self) -> Term:
        if self.at("if"):
            self.next()
            c = self.cond()
            self.expect("then")
            t1 = self.term()
            self.expect("else")
            return If(c, t1, self.term())
        if self.at("event"):
            self.next()
            a = self.ident()
            self.expect(";")
            return Event(a, self.term())
        if self.at("assert"):
            self.next()
            self.expect("(")
            c = self.cond()
            self.expect(")")
            self.used_assert = True
            fail = Event("fail", Var(_OMEGA_PLACEHOLDER))
            if self.at(";"):
                # assert(b); t  ==  if b then t else fail
                save = self.i
                self.next()
                if self._starts_term():
                    return If(c, self.term(), fail)
                self.i = save
            return If(c, UNIT, fail)
        if self.at("fun"):
            self.next()
            params = [self.ident()]
            while self.peek()[0] == "ident":
                params.append(self.next()[1])
            self.expect("->")
            return Abs(tuple(params), self.term())
        return self.arith()

    def _starts_term(self):
        t = self.peek()
        if t[0] in ("int", "ident"):
            return True
        return t[1] in ("(", "()", "-", "if", "event", "assert", "fun")

    def arith(self) -> Term:
        left = self.mul()
        while self.peek()[0] == "sym" and self.peek()[1] in ("+", "-"):
            op = self.next()[1]
            left = BinOp(op, left, self.mul())
        return left

    def mul(self) -> Term:
        if self.at("-"):
            self.next()
            a = self.app()
            left = IntLit(-a.value) if isinstance(a, IntLit) else BinOp("-", IntLit(0), a)
        else:
            left = self.app()
        while self.at("*"):
            self.next()
            left = BinOp("*", left, self.app())
        return left

    def app(self) -> Term:
        head = self.atom()
        while self.peek()[0] in ("int", "ident") or self.peek()[1] in ("(", "()"):
            head = App(head, self.atom())
        return head

    def atom(self) -> Term:
        t = self.peek()
        if t[0] == "int":
            self.next()
            return IntLit(int(t[1]))
        if t[0] == "ident":
            self.next()
            return Var(t[1])
        if t[1] == "()":
            self.next()
            return UNIT
        if t[1] == "(":
            self.next()
            if self.at(")"):
                self.next()
                return UNIT
            e = self.term()
            self.expect(")")
            return e
        self.fail(f"unexpected {t[1] or 'end of input'!r}")

    # conditions
    def cond(self) -> Cond:
        left = self.cand()
        while self.at("||"):
            self.next()
            left = OrCond(left, self.cand())
        return left

    def cand(self) -> Cond:
        left = self.catom()
        while self.at("&&"):
            self.next()
            left = AndCond(left, self.catom())
        return left

    def catom(self) -> Cond:
        t = self.peek()
        if t[0] == "ident" and t[1] in UNARY_PREDS and self.at("(", 1):
            self.next()
            self.next()
            a = self.arith()
            self.expect(")")
            return PredCond(t[1], (a,))
        if t[1] == "(":
            save = self.i
            try:
                self.next()
                c = self.cond()
                self.expect(")")
                if not (self.peek()[0] == "sym" and self.peek()[1] in BINARY_PREDS):
                    return c
            except ParseError:
                pass
            self.i = save
        a = self.arith()
        op = self.peek()
        if op[0] != "sym" or op[1] not in BINARY_PREDS:
            self.fail("expected a comparison")
        self.next()
        return PredCond(op[1], (a, self.arith()))


def parse_program(text: str) -> Program:
    return _Parser(text).program()


def parse_term(text: str) -> Term:
    p = _Parser(text)
    t = p.term()
    p._eof()
    return t


# ---------------------------------------------------------------------------
# printer

_PREC_ND, _PREC_SEQ, _PREC_ADD, _PREC_MUL, _PREC_APP, _PREC_ATOM = range(6)


def _prec(t: Term) -> int:
    if isinstance(t, NonDet):
        return _PREC_ND
    if isinstance(t, (If, Event, Abs)):
        return _PREC_SEQ
    if isinstance(t, BinOp):
        return _PREC_MUL if t.op == "*" else _PREC_ADD
    if isinstance(t, App):
        return _PREC_APP
    if isinstance(t, IntLit) and t.value < 0:
        return _PREC_MUL
    return _PREC_ATOM


def show_term(t: Term, prec: int = 0) -> str:
    s = _show(t)
    return f"({s})" if _prec(t) < prec else s


def _show(t: Term) -> str:
    if isinstance(t, Unit):
        return "()"
    if isinstance(t, Var):
        return t.name
    if isinstance(t, IntLit):
        return str(t.value)
    if isinstance(t, BinOp):
        p = _prec(t)
        # left-associative: the right operand needs strictly higher precedence
        return f"{show_term(t.left, p)} {t.op} {show_term(t.right, p + 1)}"
    if isinstance(t, NonDet):
        return f"{show_term(t.left, _PREC_ADD)} <> {show_term(t.right, _PREC_ADD)}"
    if isinstance(t, If):
        return (f"if {show_cond(t.cond)} then {show_term(t.then_, _PREC_ND)} "
                f"else {show_term(t.else_, _PREC_ND)}")
    if isinstance(t, Event):
        return f"event {t.label}; {show_term(t.body, _PREC_ND)}"
    if isinstance(t, Abs):
        return f"fun {' '.join(t.params)} -> {show_term(t.body, _PREC_ND)}"
    if isinstance(t, App):
        return f"{show_term(t.fn, _PREC_APP)} {show_term(t.arg, _PREC_ATOM)}"
    raise ProgramError(f"unknown term {t!r}")


def show_cond(c: Cond, top: bool = True) -> str:
    if isinstance(c, PredCond):
        if c.op in UNARY_PREDS:
            return f"{c.op}({show_term(c.args[0])})"
        return f"{show_term(c.args[0], _PREC_ADD)} {c.op} {show_term(c.args[1], _PREC_ADD)}"
    if isinstance(c, OrCond):
        s = f"{show_cond(c.left, False)} || {_cond_operand(c.right, OrCond)}"
        return s if top else f"({s})"
    s = f"{_cond_operand(c.left, AndCond, left=True)} && {_cond_operand(c.right, AndCond)}"
    return s if top else f"({s})"


def _cond_operand(c: Cond, parent, left=False) -> str:
    if isinstance(c, PredCond):
        return show_cond(c)
    if isinstance(c, parent) and left:
        return show_cond(c, True)
    return f"({show_cond(c, True)})"


def show_def(d: Def) -> str:
    head = " ".join((d.name,) + tuple(d.params))
    return f"{head} = {show_term(d.body)}"


def show_program(p: Program) -> str:
    main_def = p.lookup("main")
    if p.main == Var("main") and main_def is not None and not main_def.params:
        return ";\n".join(show_def(d) for d in p.defs) + "\n"
    if not p.defs:
        raise ProgramError("a program without definitions needs a main definition")
    body = "\nand ".join(show_def(d) for d in p.defs)
    return f"let {body}\nin {show_term(p.main)}\n"


# ---------------------------------------------------------------------------
# simple types


@dataclass(frozen=True)
class UnitType:
    def __str__(self):
        return "unit"


@dataclass(frozen=True)
class IntType:
    def __str__(self):
        return "int"


@dataclass(frozen=True)
class ArrowType:
    arg: "SimpleType"
    res: "SimpleType"

    def __str__(self):
        a = f"({self.arg})" if isinstance(self.arg, ArrowType) else str(self.arg)
        return f"{a} -> {self.res}"


SimpleType = Union[UnitType, IntType, ArrowType]
T_UNIT = UnitType()
T_INT = IntType()


def arrows(args, res: SimpleType) -> SimpleType:
    for a in reversed(list(args)):
        res = ArrowType(a, res)
    return res


def split_arrows(ty: SimpleType):
    args = []
    while isinstance(ty, ArrowType):
        args.append(ty.arg)
        ty = ty.res
    return args, ty


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
    return isinstance(t, tuple) and (_occurs(v, t[0]) or _occurs(v, t[1]))


def _unify(a, b, where):
    a, b = _find(a), _find(b)
    if a is b:
        return
    if isinstance(a, _TV):
        if _occurs(a, b):
            raise TypeCheckError(f"cyclic type in {where}")
        a.ref = b
    elif isinstance(b, _TV):
        _unify(b, a, where)
    elif isinstance(a, tuple) and isinstance(b, tuple):
        _unify(a[0], b[0], where)
        _unify(a[1], b[1], where)
    elif a != b:
        raise TypeCheckError(f"type mismatch in {where}")


def _resolve(t) -> SimpleType:
    t = _find(t)
    if isinstance(t, _TV):
        t.ref = T_UNIT
        return T_UNIT
    if isinstance(t, tuple):
        return ArrowType(_resolve(t[0]), _resolve(t[1]))
    return t


def _check_wf(ty: SimpleType, where: str):
    if isinstance(ty, ArrowType):
        if isinstance(ty.res, IntType):
            raise TypeCheckError(f"int in result position ({ty}) in {where}")
        _check_wf(ty.arg, where)
        _check_wf(ty.res, where)


@dataclass
class TypeInfo:
    """Result of type inference: types of definitions and of every binder."""
    defs: dict
    params: dict  # def name -> tuple of parameter types
    abs_params: dict  # id(Abs node) -> tuple of parameter types


def infer_types(p: Program) -> TypeInfo:
    env = {d.name: _TV() for d in p.defs}
    pvars = {}
    absvars = {}

    def go(t, local):
        if isinstance(t, Unit):
            return T_UNIT
        if isinstance(t, IntLit):
            return T_INT
        if isinstance(t, Var):
            if t.name in local:
                return local[t.name]
            if t.name in env:
                return env[t.name]
            raise TypeCheckError(f"unbound variable {t.name}")
        if isinstance(t, BinOp):
            _unify(go(t.left, local), T_INT, show_term(t))
            _unify(go(t.right, local), T_INT, show_term(t))
            return T_INT
        if isinstance(t, If):
            for a in cond_terms(t.cond):
                _unify(go(a, local), T_INT, show_cond(t.cond))
            _unify(go(t.then_, local), T_UNIT, show_term(t.then_))
            _unify(go(t.else_, local), T_UNIT, show_term(t.else_))
            return T_UNIT
        if isinstance(t, Event):
            _unify(go(t.body, local), T_UNIT, show_term(t))
            return T_UNIT
        if isinstance(t, NonDet):
            _unify(go(t.left, local), T_UNIT, show_term(t.left))
            _unify(go(t.right, local), T_UNIT, show_term(t.right))
            return T_UNIT
        if isinstance(t, App):
            f = go(t.fn, local)
            a = go(t.arg, local)
            r = _TV()
            _unify(f, (a, r), show_term(t))
            return r
        if isinstance(t, Abs):
            tvs = [_TV() for _ in t.params]
            absvars[id(t)] = tvs
            body = go(t.body, {**local, **dict(zip(t.params, tvs))})
            out = body
            for v in reversed(tvs):
                out = (v, out)
            return out
        raise TypeCheckError(f"unknown term {t!r}")

    for d in p.defs:
        tvs = [_TV() for _ in d.params]
        pvars[d.name] = tvs
        local = dict(zip(d.params, tvs))
        _unify(go(d.body, local), T_UNIT, f"body of {d.name}")
        fty = T_UNIT
        for v in reversed(tvs):
            fty = (v, fty)
        _unify(env[d.name], fty, f"definition of {d.name}")
    _unify(go(p.main, {}), T_UNIT, "main term")

    defs = {k: _resolve(v) for k, v in env.items()}
    params = {k: tuple(_resolve(v) for v in vs) for k, vs in pvars.items()}
    abs_params = {k: tuple(_resolve(v) for v in vs) for k, vs in absvars.items()}
    for name, ty in defs.items():
        _check_wf(ty, name)
    for k, tys in abs_params.items():
        for ty in tys:
            _check_wf(ty, "abstraction")
    return TypeInfo(defs, params, abs_params)


def typecheck_program(p: Program) -> dict:
    """Return {f: simple type}; every body must have type unit."""
    return infer_types(p).defs


# ---------------------------------------------------------------------------
# normalization and instrumentation


def references(p: Program) -> set:
    """Names of definitions referenced from some definition body."""
    out = set()
    names = {d.name for d in p.defs}
    for d in p.defs:
        out |= free_vars(d.body) & names
    return out


def normalize_program(p: Program) -> Program:
    """Make main a nullary definition: (D, t) becomes (D + {main = t}, main)."""
    if p.main_name is not None:
        return p
    name = fresh("main", all_names(p))
    return Program(p.defs + (Def(name, (), p.main),), Var(name))


def lift_lambdas(p: Program) -> Program:
    """Lift every abstraction inside a body to a fresh top-level definition."""
    avoid = all_names(p)
    new_defs = []

    def lift(t, bound):
        def fn(s):
            if not isinstance(s, Abs):
                return s
            fvs = sorted(free_vars(s) & bound)
            name = fresh("lam", avoid)
            avoid.add(name)
            new_defs.append(Def(name, tuple(fvs) + s.params, s.body))
            return apps(Var(name), *[Var(x) for x in fvs])
        return map_term(t, fn)

    defs = []
    for d in p.defs:
        defs.append(Def(d.name, d.params, _lift_in(d.body, set(d.params), lift)))
    main = _lift_in(p.main, set(), lift)
    # lifted bodies may contain further abstractions (already lifted bottom-up)
    return Program(tuple(defs) + tuple(new_defs), main)


def _lift_in(t, bound, lift):
    # Abs parameters extend the bound set for nested abstractions.
    if isinstance(t, Abs):
        inner = _lift_in(t.body, bound | set(t.params), lift)
        return lift(Abs(t.params, inner), bound)
    if isinstance(t, BinOp):
        return BinOp(t.op, _lift_in(t.left, bound, lift), _lift_in(t.right, bound, lift))
    if isinstance(t, If):
        return If(map_cond(t.cond, lambda a: _lift_in(a, bound, lift)),
                  _lift_in(t.then_, bound, lift), _lift_in(t.else_, bound, lift))
    if isinstance(t, Event):
        return Event(t.label, _lift_in(t.body, bound, lift))
    if isinstance(t, App):
        return App(_lift_in(t.fn, bound, lift), _lift_in(t.arg, bound, lift))
    if isinstance(t, NonDet):
        return NonDet(_lift_in(t.left, bound, lift), _lift_in(t.right, bound, lift))
    return t


def instrument_total(p: Program, dummy: str = "dummy") -> Program:
    """Prefix every body with ``event dummy`` and replace each () by a dummy loop.

    Afterwards every infinite reduction emits infinitely many events and no
    reduction terminates.
    """
    if dummy in program_events(p):
        raise ProgramError(f"event {dummy} is already used by the program")
    p = normalize_program(p)
    loop = fresh("Loop", all_names(p))
    x = "x"

    def replace_unit(t):
        return map_term(t, lambda s: App(Var(loop), UNIT) if isinstance(s, Unit) else s)

    defs = [Def(d.name, d.params, Event(dummy, replace_unit(d.body))) for d in p.defs]
    if any(loop in free_vars(d.body) for d in defs):
        defs.append(Def(loop, (x,), Event(dummy, App(Var(loop), Var(x)))))
    return Program(tuple(defs), p.main)
