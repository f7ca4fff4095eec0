"""Random valid GL(2) orbit data for property checks.

A datum is valid when it could come from an actual vector: vanishing orders
fit inside each component's degree, and every common zero of the components
with minimal slope ``b_i/d_i`` is a listed point.  With two or more such
components the unlisted roots can be taken generic, so only a lone minimal
component has to place all of its roots.
"""

from __future__ import annotations

import random

from .orbit import OrbitDatum, OrbitPoint, Representation


def random_representation(rng: random.Random, max_summands: int = 3, max_degree: int = 8,
                          b_range: tuple[int, int] = (-2, 3)) -> Representation:
    summands = []
    for _ in range(rng.randint(1, max_summands)):
        while True:
            deg = rng.randint(0, max_degree)
            b = rng.randint(*b_range)
            if deg + 2 * b > 0:
                break
        summands.append((deg + b, b))
    return Representation(summands)


def random_datum(rng: random.Random, rep: Representation, max_points: int = 3) -> OrbitDatum:
    k = len(rep.summands)
    nonzero = [rng.random() < 0.85 for _ in range(k)]
    if not any(nonzero):
        nonzero[rng.randrange(k)] = True
    support = [i for i in range(k) if nonzero[i]]
    degs = [rep.summands[i][0] - rep.summands[i][1] for i in support]

    npts = rng.randint(0, max_points)
    orders = [[0] * len(support) for _ in range(npts)]
    for s, deg in enumerate(degs):
        budget = rng.randint(0, deg)
        for _ in range(budget):
            if npts:
                orders[rng.randrange(npts)][s] += 1

    b = min(rep.slope(i) for i in support)
    minimal = [s for s, i in enumerate(support) if rep.slope(i) == b]
    if len(minimal) == 1:
        s = minimal[0]
        left = degs[s] - sum(o[s] for o in orders)
        while left:
            if len(orders) < max_points or not orders:
                orders.append([0] * len(support))
            orders[rng.randrange(len(orders))][s] += 1
            left -= 1

    points = [OrbitPoint(f"u{j}", o) for j, o in enumerate(orders)]
    return OrbitDatum(nonzero, points, a_complete=True)


def random_case(rng: random.Random, **kw) -> tuple[Representation, OrbitDatum]:
    rep = random_representation(rng, **{k: v for k, v in kw.items() if k != "max_points"})
    return rep, random_datum(rng, rep, kw.get("max_points", 3))
