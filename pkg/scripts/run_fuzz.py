#!/usr/bin/env python3
"""Differential fuzzing: denotational vs game backend, and translations vs the
operational oracle.  Prints offending instances; exit status 1 on any mismatch."""

import argparse
import logging
import random
import sys
import time

from hflz import hfl
from hflz.automata import trivial_lts
from hflz.checker import cross_check, eval_hflz
from hflz.gen import random_hes, random_lts, random_program
from hflz.opsem import enumerate_traces
from hflz.surface import show_program
from hflz.translate import translate_may, translate_must, translate_path

log = logging.getLogger("fuzz")


def all_traces(p):
    d = 8
    while True:
        ts = enumerate_traces(p, d)
        if not ts.frontier:
            return ts
        d *= 2


def accepts(L, trace):
    cur = {L.init}
    for a in trace:
        cur = {d for q in cur for d in L.succ(q, a)}
        if not cur:
            return False
    return True


def fuzz_backends(rng, n, max_arity):
    bad = unknown = 0
    for _ in range(n):
        L = random_lts(rng, rng.randint(1, 3))
        h = random_hes(rng, rng.randint(1, 3), max_arity=max_arity, depth=rng.randint(2, 4))
        r = cross_check(L, h)
        unknown += not r.game.decided
        if not r.agree:
            bad += 1
            log.error("backend mismatch: %s\n%s", r, hfl.show_hes(h))
    return bad, unknown


def fuzz_programs(rng, n):
    bad = 0
    L0 = trivial_lts()
    for i in range(n):
        p = random_program(rng, higher_order=i % 2 == 0)
        ts = all_traces(p)
        L = random_lts(rng, rng.randint(1, 3), density=0.6)
        checks = [
            ("may", L0, translate_may(p, "a"), any("a" in t for t in ts.finite)),
            ("must", L0, translate_must(p, "a"), all("a" in t for t in ts.maximal)),
            ("path", L, translate_path(p), all(accepts(L, t) for t in ts.finite)),
        ]
        for name, lts, h, want in checks:
            v = eval_hflz(lts, h)
            if v.kind != ("valid" if want else "invalid"):
                bad += 1
                log.error("%s: expected %s, got %s\n%s", name, want, v, show_program(p))
    return bad


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--hes", type=int, default=500, help="number of random HES instances")
    ap.add_argument("--programs", type=int, default=200, help="number of random programs")
    ap.add_argument("--max-arity", type=int, default=2)
    args = ap.parse_args(argv)
    logging.basicConfig(level=logging.INFO, format="%(message)s")
    rng = random.Random(args.seed)
    t0 = time.perf_counter()
    bad_h, unk = fuzz_backends(rng, args.hes, args.max_arity)
    bad_p = fuzz_programs(rng, args.programs)
    log.info("seed %d: %d/%d backend mismatches (%d unknown), %d/%d program mismatches, %.1fs",
             args.seed, bad_h, args.hes, unk, bad_p, 3 * args.programs, time.perf_counter() - t0)
    return 1 if bad_h or bad_p else 0


if __name__ == "__main__":
    sys.exit(main())
