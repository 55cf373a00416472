"""Random instances for the property suites: LTSs, pure HFL systems, programs."""

from __future__ import annotations

import random

from . import hfl
from .automata import Lts, make_lts
from .surface import (
    UNIT, App, BinOp, Def, Event, If, IntLit, NonDet, PredCond, Program, Term, Var, apps,
)

LABELS = ("a", "b")


def random_lts(rng: random.Random, n_states: int = 3, labels=LABELS, density: float = 0.4) -> Lts:
    states = [f"q{i}" for i in range(n_states)]
    trans = [(s, a, d) for s in states for a in labels for d in states if rng.random() < density]
    return make_lts(states, trans, states[0], labels)


def _rand_formula(rng, depth, params, arities, labels):
    leaves = ["top", "bot"] + [("param", p) for p in params]
    if depth <= 0:
        c = rng.choice(leaves)
    else:
        c = rng.choice(leaves + ["or", "and", "dia", "box", "call", "call", "call"])
    if c == "top":
        return hfl.TOP
    if c == "bot":
        return hfl.BOT
    if isinstance(c, tuple):
        return hfl.Var(c[1])
    if c in ("or", "and"):
        l = _rand_formula(rng, depth - 1, params, arities, labels)
        r = _rand_formula(rng, depth - 1, params, arities, labels)
        return hfl.Or(l, r) if c == "or" else hfl.And(l, r)
    if c in ("dia", "box"):
        b = _rand_formula(rng, depth - 1, params, arities, labels)
        lab = rng.choice(labels)
        return hfl.Diamond(lab, b) if c == "dia" else hfl.Box(lab, b)
    name = rng.choice(sorted(arities))
    args = [_rand_formula(rng, depth - 1, params, arities, labels) for _ in range(arities[name])]
    return hfl.apps(hfl.Var(name), *args)


def random_hes(rng: random.Random, n_eqs: int = 3, max_arity: int = 1, depth: int = 3,
               labels=LABELS) -> hfl.Hes:
    """A pure HFL system of order at most 1 (parameters are propositions)."""
    names = [f"X{i}" for i in range(1, n_eqs + 1)]
    arities = {x: rng.randint(0, max_arity) for x in names}
    eqs = []
    for x in names:
        params = tuple(f"y{j}" for j in range(arities[x]))
        body = _rand_formula(rng, depth, params, arities, labels)
        ty = hfl.arrows([hfl.PROP] * arities[x], hfl.PROP)
        eqs.append(hfl.Equation(x, ty, rng.choice(["mu", "nu"]), params, body))
    # main calls the outermost equation so the fixpoints actually matter
    args = [_rand_formula(rng, 2, (), arities, labels) for _ in range(arities[names[0]])]
    main = hfl.apps(hfl.Var(names[0]), *args)
    return hfl.Hes(tuple(eqs), main)


def _rand_term(rng, depth, i, n_funs, labels, scope=True, ho=False):
    """Body of f_i: x is an int, k a unit continuation; calls go to f_j with j > i.

    Without scope, x and k are not available (used for the main term)."""
    leaves = ["unit", "k"] if scope else ["unit"]
    opts = leaves + ["event", "nondet"] + (["if"] if scope else [])
    if i + 1 < n_funs and scope:
        opts += ["call", "call"] + (["hcall"] if ho else [])
    if depth <= 0:
        opts = leaves
    c = rng.choice(opts)
    if c == "unit":
        return UNIT
    if c == "k":
        return Var("k")
    if c == "event":
        return Event(rng.choice(labels), _rand_term(rng, depth - 1, i, n_funs, labels, scope, ho))
    if c == "nondet":
        return NonDet(_rand_term(rng, depth - 1, i, n_funs, labels, scope, ho),
                      _rand_term(rng, depth - 1, i, n_funs, labels, scope, ho))
    if c == "if":
        cond = PredCond(rng.choice([">", "<=", "="]), (Var("x"), IntLit(rng.randint(-1, 2))))
        return If(cond, _rand_term(rng, depth - 1, i, n_funs, labels),
                  _rand_term(rng, depth - 1, i, n_funs, labels))
    j = rng.randint(i + 1, n_funs - 1)
    arg = BinOp(rng.choice(["+", "-"]), Var("x"), IntLit(rng.randint(0, 2)))
    k = _rand_term(rng, depth - 1, i, n_funs, labels, scope, ho)
    if c == "hcall":
        return apps(Var("ap"), Var(f"f{j}"), arg, k)
    return apps(Var(f"f{j}"), arg, k)


def random_program(rng: random.Random, n_funs: int = 3, depth: int = 3, labels=LABELS,
                   higher_order: bool = False) -> Program:
    """A terminating program: f_i only calls f_j with j > i.

    With higher_order, some calls go through ``ap h y k = h y k``.
    """
    defs = []
    for i in range(n_funs):
        body = _rand_term(rng, depth, i, n_funs, labels, ho=higher_order)
        defs.append(Def(f"f{i}", ("x", "k"), body))
    if higher_order:
        defs.append(Def("ap", ("h", "y", "k"), apps(Var("h"), Var("y"), Var("k"))))
    main = apps(Var("f0"), IntLit(rng.randint(-1, 3)), _rand_term(rng, 1, n_funs, n_funs, labels, scope=False))
    defs.append(Def("main", (), main))
    return Program(tuple(defs), Var("main"))
