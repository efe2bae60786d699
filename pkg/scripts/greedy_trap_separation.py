#! /usr/bin/env python3
"""Cumulative greedy vs adaptive residual updates on the greedy-trap family.

Prints one row per size with both costs, their closed forms and ratio / sqrt(n).
"""
import argparse
import math
from dataclasses import dataclass

from subrank import adaptive_residual_updates, cumulative_greedy, greedy_trap


@dataclass
class TrapConfig:
    sizes: tuple = (4, 16, 64, 100, 256, 400, 900)


def closed_forms(n):
    r = math.isqrt(n)
    greedy = (n - r) * (r + 2) + sum(range(2, r + 2))
    column = (n - r) * 2 + sum(range(3, r + 3))
    return greedy, column


def run(cfg: TrapConfig):
    print(f"{'n':>6} {'greedy':>8} {'closed':>8} {'aru':>6} {'closed':>6} {'ratio':>7} {'ratio/sqrt(n)':>13}")
    for n in cfg.sizes:
        inst = greedy_trap(n)
        g = cumulative_greedy(inst).total_cost
        a = adaptive_residual_updates(inst).total_cost
        cg, ca = closed_forms(n)
        print(f"{n:>6} {g:>8.0f} {cg:>8} {a:>6.0f} {ca:>6} {g / a:>7.3f} {g / a / math.sqrt(n):>13.4f}")


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--sizes", type=lambda s: tuple(int(x) for x in s.split(",")), default=TrapConfig.sizes)
    args = parser.parse_args()
    run(TrapConfig(sizes=args.sizes))


if __name__ == "__main__":
    main()
