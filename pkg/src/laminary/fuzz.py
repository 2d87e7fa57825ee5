"""Seeded random inputs: monotone maps, laminations, families and scenarios.

All generators take a :class:`random.Random` so that a seed reproduces the
whole stream.  Scenario generation rejects only candidates that fail
:func:`validate_scenario`; anything that validates is handed to the caller
as is, so later failures are real findings rather than filtered noise.
"""
from __future__ import annotations

import random
from fractions import Fraction

from .circle import Linking, PointPair, linked
from .errors import LeafSpaceError, ScenarioError
from .laminations import Lamination, make_lamination
from .monotone import MonotoneFamily, MonotoneMap, make_monotone
from .universal import Scenario, validate_scenario

GRID = 256


def _grid_points(rng: random.Random, k: int, grid: int = GRID) -> list[Fraction]:
    return sorted(Fraction(v, grid) for v in rng.sample(range(grid), k))


def random_monotone(rng: random.Random, max_gaps: int = 10) -> MonotoneMap:
    """A degree-one map with up to ``max_gaps`` gaps and random slopes between them."""
    g = rng.randint(0, max_gaps)
    if g == 0:
        shift = Fraction(rng.randrange(GRID), GRID)
        return make_monotone([(0, shift)])
    xs = _grid_points(rng, 2 * g)
    # rise after each gap; weights sum to one turn
    weights = [rng.randint(1, 8) for _ in range(g)]
    total = sum(weights)
    y = Fraction(rng.randrange(GRID), GRID)
    pairs = []
    for i in range(g):
        pairs.append((xs[2 * i], y))
        pairs.append((xs[2 * i + 1], y))
        y += Fraction(weights[i], total)
    return MonotoneMap.from_lifted([x for x, _ in pairs], [v for _, v in pairs])


def random_lamination(rng: random.Random, max_leaves: int = 20, anchors=()) -> Lamination:
    """Greedy random lamination; ``anchors`` are favoured as endpoints."""
    target = rng.randint(0, max_leaves)
    pool = list(anchors)
    leaves: list[PointPair] = []
    tries = 0
    while len(leaves) < target and tries < 20 * max_leaves + 20:
        tries += 1
        a, b = (rng.choice(pool) if pool and rng.random() < 0.4 else Fraction(rng.randrange(GRID), GRID)
                for _ in range(2))
        if a == b:
            continue
        c = PointPair(a, b)
        if c in leaves or any(linked(c, d) is Linking.LINKED for d in leaves):
            continue
        leaves.append(c)
    return make_lamination(leaves)


def random_map_pair_case(rng: random.Random):
    """(f, g, lamination) with the lamination often touching the gaps of f."""
    f = random_monotone(rng)
    g = random_monotone(rng)
    anchors = [a.start.turn for a in f.gaps()] + [a.end.turn for a in f.gaps()]
    return f, g, random_lamination(rng, anchors=anchors)


# --------------------------------------------------------------------------
# monotone families


def _map_with_core_in(rng: random.Random, start: Fraction, length: Fraction) -> MonotoneMap:
    """Map whose core lies in the closed arc [start, start+length]."""
    inner = sorted({Fraction(rng.randrange(1, 64), 64) for _ in range(2 * rng.randint(1, 4))})
    xs = [start + length * t for t in [Fraction(0)] + inner + [Fraction(1)]]
    rises = [rng.randint(0, 3) for _ in range(len(xs) - 1)]
    if not any(rises):
        rises[0] = 1
    y = Fraction(rng.randrange(GRID), GRID)
    ys = [y]
    for r in rises:
        y += Fraction(r, sum(rises))
        ys.append(y)
    pts = sorted((x - (x.numerator // x.denominator), v - (x.numerator // x.denominator))
                 for x, v in zip(xs, ys))
    return MonotoneMap.from_lifted([x for x, _ in pts], [v for _, v in pts])


def random_family(rng: random.Random):
    """Connected family with connected X and Y satisfying the unlinked hypothesis.

    X cores stay in one closed arc and Y cores in a disjoint one, which makes
    every core at X sit in a single gap closure at every Y and back.  The rest
    of the base carries unconstrained maps.
    """
    nx, ny, nz = rng.randint(1, 4), rng.randint(1, 4), rng.randint(0, 3)
    a0 = Fraction(rng.randrange(GRID), GRID)
    la = Fraction(rng.randint(8, 100), GRID)
    b0 = a0 + la + Fraction(rng.randint(1, 16), GRID)
    lb = Fraction(rng.randint(8, 100), GRID)
    xs = [f"x{i}" for i in range(nx)]
    ys = [f"y{i}" for i in range(ny)]
    zs = [f"z{i}" for i in range(nz)]
    maps = {}
    for v in xs:
        maps[v] = _map_with_core_in(rng, a0, la)
    for v in ys:
        maps[v] = _map_with_core_in(rng, b0, lb)
    for v in zs:
        maps[v] = random_monotone(rng, 3)
    edges = [(xs[i], xs[i + 1]) for i in range(nx - 1)] + [(ys[i], ys[i + 1]) for i in range(ny - 1)]
    chain = [rng.choice(xs)] + zs + [rng.choice(ys)]
    edges += list(zip(chain, chain[1:]))
    verts = xs + ys + zs
    for _ in range(rng.randint(0, 2)):
        u, v = rng.sample(verts, 2)
        if (u, v) not in edges and (v, u) not in edges:
            edges.append((u, v))
    return MonotoneFamily(tuple(verts), tuple(edges), maps), xs, ys


# --------------------------------------------------------------------------
# two-sided scenarios


def _random_two_sided_space(rng: random.Random, extra: int = 2):
    """Leaves, covering edges and nonseparated clusters of a random tree.

    Starts from a chain and grows branches.  A positive branch adds a leaf
    beside an upward neighbour of some leaf, a negative branch one beside a
    downward neighbour; each new branch leaf gets a short tail pointing away
    from the branch point so that both side cores have room.
    """
    n = rng.randint(3, 5)
    leaves = [f"c{i}" for i in range(n)]
    up = {v: [] for v in leaves}
    down = {v: [] for v in leaves}
    for a, b in zip(leaves, leaves[1:]):
        up[a].append(b)
        down[b].append(a)
    clusters: list[tuple[set, str, str]] = []  # members, side, base
    in_cluster: dict[str, int] = {}
    counter = [0]

    def fresh():
        counter[0] += 1
        name = f"b{counter[0]}"
        leaves.append(name)
        up[name], down[name] = [], []
        return name

    def tail(v, upward, k):
        for _ in range(k):
            w = fresh()
            if upward:
                up[v].append(w)
                down[w].append(v)
            else:
                down[v].append(w)
                up[w].append(v)
            v = w

    wanted = ["positive", "negative"] + [rng.choice(["positive", "negative"])
                                         for _ in range(rng.randint(0, extra))]
    for side in wanted:
        options = []
        for x in list(leaves):
            nbrs = up[x] if side == "positive" else down[x]
            for z in nbrs:
                ci = in_cluster.get(z)
                if ci is None or (clusters[ci][1] == side and clusters[ci][2] == x):
                    options.append((x, z))
        if not options:
            continue
        x, z = rng.choice(options)
        y = fresh()
        if side == "positive":
            up[x].append(y)
            down[y].append(x)
        else:
            down[x].append(y)
            up[y].append(x)
        ci = in_cluster.get(z)
        if ci is None:
            clusters.append(({z, y}, side, x))
            ci = len(clusters) - 1
            in_cluster[z] = ci
        else:
            clusters[ci][0].add(y)
        in_cluster[y] = ci
        tail(y, side == "positive", rng.randint(1, 2))
    edges = sorted({(a, b) for a in leaves for b in up[a]})
    return leaves, edges, clusters


def random_two_sided_scenario(rng: random.Random, name: str = "fuzz", attempts: int = 200,
                              extra: int = 2, marks: tuple[int, int] = (3, 5)) -> Scenario:
    for _ in range(attempts):
        leaves, edges, clusters = _random_two_sided_space(rng, extra)
        data = _decorate(rng, leaves, edges, clusters, name, marks)
        try:
            s = Scenario.from_json(data)
            validate_scenario(s)
        except (ScenarioError, LeafSpaceError):
            continue
        return s
    raise RuntimeError("could not generate a valid scenario")


def _decorate(rng, leaves, edges, clusters, name, marks=(3, 5)):
    """Marks and markers.  Markers into a branch point use disjoint blocks."""
    circles = {}
    for v in leaves:
        k = rng.randint(*marks)
        circles[v] = {f"{v}m{i}": f"{p}" for i, p in enumerate(_grid_points(rng, k, 64))}
    # at a cluster's base every member gets its own block of base marks
    blocks = {}
    for members, side, base in clusters:
        base_marks = list(circles[base])
        members = sorted(members)
        need = 2 * len(members)
        while len(base_marks) < need:
            used = {Fraction(p) for p in circles[base].values()}
            free = [Fraction(t, 64) for t in range(64) if Fraction(t, 64) not in used]
            p = rng.choice(free)
            key = f"{base}m{len(base_marks)}"
            circles[base][key] = str(p)
            base_marks = list(circles[base])
        ordered = sorted(base_marks, key=lambda m: Fraction(circles[base][m]))
        offset = rng.randrange(len(ordered))
        ordered = ordered[offset:] + ordered[:offset]
        size = len(ordered) // len(members)
        for i, mbr in enumerate(members):
            blocks[(base, mbr)] = ordered[i * size:(i + 1) * size]
    markers = []
    for a, b in edges:
        pool_a = blocks.get((a, b), list(circles[a]))
        pool_b = blocks.get((b, a), list(circles[b]))
        c = rng.randint(1, min(len(pool_a), len(pool_b), max(3, marks[1] // 2)))
        ma = sorted(rng.sample(pool_a, c), key=lambda m: Fraction(circles[a][m]))
        mb = sorted(rng.sample(pool_b, c), key=lambda m: Fraction(circles[b][m]))
        k = rng.randrange(c)
        for i in range(c):
            markers.append({"name": f"{a}-{b}.{i}", "support": [a, b],
                            "points": [ma[i], mb[(i + k) % c]]})
    nonsep = []
    for members, side, _ in clusters:
        ms = sorted(members)
        for u in ms[1:]:
            nonsep.append({"pair": [ms[0], u], "side": side})
    return {"name": name, "leaves": leaves, "segments": [list(e) for e in edges],
            "nonseparated": nonsep, "circles": circles, "markers": markers}
