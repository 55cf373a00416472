"""Program-to-HES translations: may/must reachability, trace properties, call sequences.

All four share one term translation; they differ only in how (), events,
``<>`` and ``if`` are mapped and in the fixpoint of the equations:

    mode   ()   event a; t    t1 <> t2   if c then t1 else t2           fix
    may    F    T             \\/         (c /\\ t1) \\/ (!c /\\ t2)        mu
    must   F    T             /\\         (!c \\/ t1) /\\ (c \\/ t2)        mu
    path   T    <a>t          /\\         (!c \\/ t1) /\\ (c \\/ t2)        nu
    csa    T    t             /\\         (!c \\/ t1) /\\ (c \\/ t2)        by priority
"""

from __future__ import annotations

from typing import Optional

from . import hfl
from .surface import (
    Abs, AndCond, App, BinOp, Cond, Event, If, IntLit, NonDet, OrCond, PredCond, Program,
    ProgramError, Term, Unit, Var, negate_cond, references,
)


class TranslationError(ProgramError):
    pass


def cond_to_formula(c: Cond) -> hfl.Formula:
    if isinstance(c, PredCond):
        return hfl.Pred(c.op, tuple(term_to_formula_int(a) for a in c.args))
    if isinstance(c, AndCond):
        return hfl.And(cond_to_formula(c.left), cond_to_formula(c.right))
    if isinstance(c, OrCond):
        return hfl.Or(cond_to_formula(c.left), cond_to_formula(c.right))
    raise TranslationError(f"unknown condition {c!r}")


def term_to_formula_int(t: Term) -> hfl.Formula:
    if isinstance(t, IntLit):
        return hfl.IntLit(t.value)
    if isinstance(t, BinOp):
        return hfl.BinOp(t.op, term_to_formula_int(t.left), term_to_formula_int(t.right))
    if isinstance(t, Var):
        return hfl.Var(t.name)
    if isinstance(t, App):
        return hfl.App(term_to_formula_int(t.fn), term_to_formula_int(t.arg))
    raise TranslationError(f"non-arithmetic term in an integer position: {t!r}")


class _Tr:
    def __init__(self, mode: str, event: Optional[str] = None):
        self.mode = mode
        self.event = event

    def __call__(self, t: Term) -> hfl.Formula:
        m = self.mode
        if isinstance(t, Unit):
            return hfl.BOT if m in ("may", "must") else hfl.TOP
        if isinstance(t, Var):
            return hfl.Var(t.name)
        if isinstance(t, IntLit):
            return hfl.IntLit(t.value)
        if isinstance(t, BinOp):
            return hfl.BinOp(t.op, self(t.left), self(t.right))
        if isinstance(t, Event):
            if m in ("may", "must"):
                if self.event is None or t.label == self.event:
                    return hfl.TOP
                return self(t.body)  # unwatched events are erased
            if m == "path":
                return hfl.Diamond(t.label, self(t.body))
            return self(t.body)
        if isinstance(t, NonDet):
            l, r = self(t.left), self(t.right)
            return hfl.Or(l, r) if m == "may" else hfl.And(l, r)
        if isinstance(t, If):
            c, nc = cond_to_formula(t.cond), cond_to_formula(negate_cond(t.cond))
            t1, t2 = self(t.then_), self(t.else_)
            if m == "may":
                return hfl.Or(hfl.And(c, t1), hfl.And(nc, t2))
            return hfl.And(hfl.Or(nc, t1), hfl.Or(c, t2))
        if isinstance(t, App):
            return hfl.App(self(t.fn), self(t.arg))
        if isinstance(t, Abs):
            body = self(t.body)
            for x in reversed(t.params):
                body = hfl.Lam(x, None, body)
            return body
        raise TranslationError(f"unknown term {t!r}")


def _main_split(p: Program, keep: set = frozenset()):
    """Return (defs to emit, main term).

    A nullary main definition that no body refers to is inlined as the main
    formula instead of becoming an equation.
    """
    name = p.main_name
    if name is not None and name not in references(p) and name not in keep:
        d = p.lookup(name)
        return [x for x in p.defs if x.name != name], d.body
    return list(p.defs), p.main


def _build(p: Program, tr: _Tr, fixes: dict, order=None, keep=frozenset()) -> hfl.Hes:
    defs, main = _main_split(p, keep)
    if order is not None:
        pos = {n: i for i, n in enumerate(order)}
        defs = sorted(defs, key=lambda d: pos[d.name])
    eqs = tuple(hfl.Equation(d.name, None, fixes[d.name], tuple(d.params), tr(d.body)) for d in defs)
    try:
        return hfl.infer_hes(hfl.Hes(eqs, tr(main)))
    except hfl.HflError as e:
        raise TranslationError(f"translated HES is ill-typed: {e}") from e


def translate_may(p: Program, event: Optional[str] = None) -> hfl.Hes:
    """L_0 satisfies the result iff some execution of p emits event."""
    return _build(p, _Tr("may", event), {d.name: "mu" for d in p.defs})


def translate_must(p: Program, event: Optional[str] = None) -> hfl.Hes:
    """L_0 satisfies the result iff every execution of p emits event."""
    return _build(p, _Tr("must", event), {d.name: "mu" for d in p.defs})


def translate_path(p: Program) -> hfl.Hes:
    """L_L satisfies the result iff every finite trace of p is in L."""
    return _build(p, _Tr("path"), {d.name: "nu" for d in p.defs})


def csa_order(omega: dict, names) -> list:
    """Names sorted by non-increasing priority, ties kept in program order."""
    names = list(names)
    return sorted(names, key=lambda n: -omega[n])


def translate_csa(p: Program, omega: dict) -> hfl.Hes:
    """L_0 satisfies the result iff every infinite call sequence meets the parity condition."""
    defs, _ = _main_split(p, keep=set(omega))
    missing = [d.name for d in defs if d.name not in omega]
    if missing:
        raise TranslationError(f"no priority for {', '.join(missing)}")
    fixes = {d.name: "nu" if omega[d.name] % 2 == 0 else "mu" for d in defs}
    order = csa_order(omega, [d.name for d in defs])
    return _build(p, _Tr("csa"), fixes, order=order, keep=set(omega))


def normalize_priorities(omega: dict, order) -> dict:
    """Omega'(f_i) = 2(n-i) if Omega(f_i) is even, else 2(n-i)+1."""
    order = list(order)
    if sorted(order) != sorted(omega):
        raise TranslationError("order must list every function exactly once")
    for a, b in zip(order, order[1:]):
        if omega[a] < omega[b]:
            raise TranslationError(f"order is not by non-increasing priority ({a} before {b})")
    n = len(order)
    return {f: 2 * (n - i) + (omega[f] % 2) for i, f in enumerate(order, start=1)}


def parse_priorities(text: str) -> dict:
    out = {}
    for no, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        toks = line.split()
        if len(toks) != 2 or not toks[1].isdigit():
            raise TranslationError(f"line {no}: expected '<function> <priority>'")
        out[toks[0]] = int(toks[1])
    return out


def show_priorities(omega: dict) -> str:
    return "".join(f"{f} {m}\n" for f, m in omega.items())
