"""Worst-case residuals of the cocycle identity and the affine-action law on random curves.

    python3 scripts/cocycle_check.py --pairs 50 --seed 1
"""

import argparse
import random
import sys
from dataclasses import dataclass
from pathlib import Path

import numpy as np

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "tests"))
from helpers import random_element, random_expr  # noqa: E402

from riccati_gauge import (Interval, RiccatiEquation, adjoint_matrix_at,  # noqa: E402
                           cocycle_theta, compose, eval_at, transform)


@dataclass(frozen=True)
class Config:
    pairs: int = 50
    seed: int = 1
    points: int = 50


def main():
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--pairs", type=int, default=Config.pairs)
    p.add_argument("--seed", type=int, default=Config.seed)
    p.add_argument("--points", type=int, default=Config.points)
    cfg = Config(**vars(p.parse_args()))
    rng = random.Random(cfg.seed)
    domain = Interval(0.0, 1.0, cfg.points)
    worst_cocycle = worst_action = 0.0
    for _ in range(cfg.pairs):
        a1, a2 = random_element(rng), random_element(rng)
        prod = compose(a2, a1)
        eq = RiccatiEquation(*(random_expr(rng, 2) for _ in range(3)), domain)
        twice, once = transform(transform(eq, a1), a2), transform(eq, prod)
        for t in domain.grid():
            lhs = cocycle_theta(prod, t).as_array()
            rhs = cocycle_theta(a2, t).as_array() + adjoint_matrix_at(a2, t) @ cocycle_theta(a1, t).as_array()
            worst_cocycle = max(worst_cocycle, float(np.max(np.abs(lhs - rhs))))
            for c, d in zip(twice.coefficients, once.coefficients):
                worst_action = max(worst_action, abs(eval_at(c, t) - eval_at(d, t)))
    print(f"pairs={cfg.pairs} points={cfg.points} seed={cfg.seed}")
    print(f"cocycle identity   max residual {worst_cocycle:.3e}")
    print(f"affine action law  max residual {worst_action:.3e}")


if __name__ == "__main__":
    main()
