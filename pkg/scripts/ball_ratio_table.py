#!/usr/bin/env python3
"""Tabulate the ball's shadow-to-volume ratio v_{n-1} r^{n-1} / |B|^{(n-1)/n}.

The ratio is the benchmark every repositioned body is measured against: it
starts at 2/sqrt(pi) in the plane, increases strictly with the dimension,
and approaches sqrt(e) from below at rate O(log n / n).
"""

import argparse
import math
import sys

from shadowgeom import ball_shadow_ratio


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--max-n", type=int, default=200, help="largest dimension (2..200)")
    parser.add_argument("--step", type=int, default=1, help="dimension stride")
    args = parser.parse_args(argv)

    limit = math.sqrt(math.e)
    print(f"{'n':>4} {'ratio':>20} {'gap to sqrt(e)':>16}")
    for n in range(2, args.max_n + 1, args.step):
        ratio = ball_shadow_ratio(n)
        print(f"{n:>4} {ratio:>20.15f} {limit - ratio:>16.3e}")
    print(f"{'inf':>4} {limit:>20.15f} {'(limit)':>16}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
