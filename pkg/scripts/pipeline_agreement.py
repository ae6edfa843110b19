"""Compare the one-, two- and three-solution pipelines with RK4 on x' = 2 - 3x + x^2.

    python3 scripts/pipeline_agreement.py --x0 0 --steps 10000
"""

import argparse
import math
from dataclasses import dataclass

from riccati_gauge import (Const, Interval, RiccatiEquation, count_integrals,
                           cross_ratio, parse_expr, rk4_integrate,
                           solve_one_known, solve_two_known, superposition_expr)


@dataclass(frozen=True)
class Config:
    x0: float = 0.0
    t1: float = 1.0
    steps: int = 10_000


def run(cfg: Config) -> list[tuple[str, float, int]]:
    eq = RiccatiEquation.constant(2.0, -3.0, 1.0, Interval(0.0, cfg.t1))
    x1, x2 = Const(2.0), Const(1.0)
    x3 = parse_expr("1 - 1/(2*exp(t) - 1)")
    k = cross_ratio(cfg.x0, 2.0, 1.0, x3(0.0))
    rows = []
    for name, x in (
        ("one known", solve_one_known(eq, x1, cfg.x0, 0.0)),
        ("two known", solve_two_known(eq, x1, x2, cfg.x0, 0.0)),
        ("three known", superposition_expr(x1, x2, x3, k)),
    ):
        rows.append((name, x(cfg.t1), count_integrals(x)))
    rk4 = rk4_integrate(eq, cfg.x0, 0.0, cfg.t1, cfg.steps).final[1]
    rows.append((f"rk4 ({cfg.steps} steps)", rk4, 0))
    return rows


def main():
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--x0", type=float, default=Config.x0)
    p.add_argument("--t1", type=float, default=Config.t1)
    p.add_argument("--steps", type=int, default=Config.steps)
    cfg = Config(**vars(p.parse_args()))
    rows = run(cfg)
    ref = rows[-1][1]
    print(f"{'pipeline':<20} {'x(t1)':>22} {'|diff vs rk4|':>14} quadratures")
    for name, value, nq in rows:
        print(f"{name:<20} {value:22.16f} {abs(value - ref):14.3e} {nq:>4}")
    if cfg.x0 == 0.0 and cfg.t1 == 1.0:
        print(f"closed form 1 - 1/(2e - 1) = {1 - 1 / (2 * math.e - 1):.16f}")


if __name__ == "__main__":
    main()
