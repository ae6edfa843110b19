"""Cross-ratio drift along RK4 trajectories of x' = 1 + x^2.

    python3 scripts/superposition_demo.py --steps 600
"""

import argparse
from dataclasses import dataclass, field

from riccati_gauge import (Interval, RiccatiEquation, cross_ratio, eval_at,
                           parse_expr, rk4_integrate, superposition_eval)


@dataclass(frozen=True)
class Config:
    t1: float = 0.6
    steps: int = 600
    starts: tuple[float, ...] = field(default=(-10.0, -3.0, -0.5, 0.2, 0.7, 1.3))


def main():
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--t1", type=float, default=Config.t1)
    p.add_argument("--steps", type=int, default=Config.steps)
    cfg = Config(**vars(p.parse_args()))
    eq = RiccatiEquation.constant(1.0, 0.0, 1.0, Interval(0.0, cfg.t1))
    xs = [parse_expr(f"tan(t + {c})") for c in ("0.8", "0.4", "0")]
    print(f"{'x0':>6} {'k':>14} {'spread':>10} {'roundtrip':>10}")
    for x0 in cfg.starts:
        traj = rk4_integrate(eq, x0, 0.0, cfg.t1, cfg.steps)
        ks, worst_back = [], 0.0
        for t, x in zip(traj.t, traj.x):
            x1, x2, x3 = (eval_at(s, t) for s in xs)
            k = cross_ratio(x, x1, x2, x3)
            ks.append(k)
            worst_back = max(worst_back, abs(superposition_eval(x1, x2, x3, k) - x) / (1 + abs(x)))
        print(f"{x0:6.2f} {ks[0]:14.8f} {max(ks) - min(ks):10.2e} {worst_back:10.2e}")


if __name__ == "__main__":
    main()
