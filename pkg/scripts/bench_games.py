#!/usr/bin/env python3
"""Time grounding and solving on the file example for growing n, and Zielonka on random games."""

import argparse
import random
import time

from hflz import corpus, hfl
from hflz.checker import ground_game, random_game, solve


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--max-n", type=int, default=200)
    args = ap.parse_args(argv)
    L = corpus.lts_file_end()
    print(f"{'n':>6} {'nodes':>8} {'ground s':>9} {'solve s':>8}")
    n = 1
    while n <= args.max_n:
        h = hfl.normalize_hes(corpus.hes_file_end(n))
        t0 = time.perf_counter()
        res, _, _ = ground_game(L, h, 10 ** 6)
        t1 = time.perf_counter()
        solve(res.game)
        t2 = time.perf_counter()
        print(f"{n:>6} {len(res.game):>8} {t1 - t0:>9.3f} {t2 - t1:>8.3f}")
        n *= 2
    rng = random.Random(args.seed)
    for size in (100, 1000, 5000):
        g = random_game(rng, size, max_prio=6, density=3 / size)
        t0 = time.perf_counter()
        solve(g)
        print(f"random game with {size} nodes: {time.perf_counter() - t0:.3f}s")


if __name__ == "__main__":
    main()
