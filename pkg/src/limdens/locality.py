"""Gaifman graphs, r-balls and canonical codes for their isomorphism types.

The Gaifman graph joins x and f(x) for every unary table f.  Binary
tables are ignored, so for groups this is the graph of the unary reduct.

Ball code layout (ASCII bytes, fields separated by ';'):

    BC1;r=<radius>;n=<elements>;c=<center labels>;<sym>=<image labels>;...;d=<center distances>

Elements are relabeled by a canonical breadth-first order from the
centers; an image outside the ball is written as -1.  Symbols appear in
sorted order.  Center distances are measured in the whole structure and
capped at 2r+2, which stands for "more than 2r+1".
"""
from __future__ import annotations

import itertools
import math
from collections import deque
from dataclasses import dataclass, field
from typing import Callable, Hashable, Sequence

from .errors import BudgetExceeded, HypothesisError, UnsupportedError
from .structures import FiniteStructure, build_genbij
from .terms import Identity, Presentation, Term
from .variety import VarietySpec, e0_bound, gaifman_group, inverse_words, projection_pi1

CODE_VERSION = b"BC1"
MAX_BRANCHES = 10 ** 4
LOCAL_SEARCH_BUDGET = 10 ** 4


def gaifman_adjacency(struct: FiniteStructure) -> list[set[int]]:
    adj = [set() for _ in range(struct.size)]
    for tab in struct.unary_tables.values():
        for x in range(struct.size):
            y = int(tab[x])
            if y != x:
                adj[x].add(y)
                adj[y].add(x)
    return adj


def _bfs(adj, sources, limit=None) -> dict[int, int]:
    dist = {s: 0 for s in sources}
    q = deque(dist)
    while q:
        x = q.popleft()
        if limit is not None and dist[x] >= limit:
            continue
        for y in adj[x]:
            if y not in dist:
                dist[y] = dist[x] + 1
                q.append(y)
    return dist


def gaifman_distance(struct: FiniteStructure, x: int, y: int):
    """Shortest path length, or math.inf across components."""
    return _bfs(gaifman_adjacency(struct), [x]).get(y, math.inf)


@dataclass(frozen=True)
class Ball:
    """Induced substructure on the elements within distance r of the centers.

    ``tables[f][i]`` is the local index of f(elements[i]), or -1 when that
    image lies outside the ball.
    """

    elements: tuple
    centers: tuple[int, ...]
    radius: int
    tables: dict = field(compare=False)
    center_distances: tuple[tuple[int, ...], ...] = ()

    @property
    def size(self) -> int:
        return len(self.elements)

    def to_dot(self, name: str = "ball") -> str:
        lines = [f"digraph {name} {{"]
        for i, e in enumerate(self.elements):
            mark = ",peripheries=2" if i in self.centers else ""
            lines.append(f'  {i} [label="{e}"{mark}];')
        for sym in sorted(self.tables):
            for i, j in enumerate(self.tables[sym]):
                if j >= 0:
                    lines.append(f'  {i} -> {j} [label="{sym}"];')
        lines.append("}")
        return "\n".join(lines)


def _cap(d, r):
    return 2 * r + 2 if d == math.inf or d > 2 * r + 1 else int(d)


def ball(struct: FiniteStructure, centers: int | Sequence[int], r: int) -> Ball:
    if r < 0:
        raise ValueError("radius must be >= 0")
    centers = (centers,) if isinstance(centers, int) else tuple(centers)
    adj = gaifman_adjacency(struct)
    elems = sorted(_bfs(adj, centers, r))
    local = {e: i for i, e in enumerate(elems)}
    tables = {sym: tuple(local.get(int(tab[e]), -1) for e in elems)
              for sym, tab in struct.unary_tables.items()}
    dists = []
    for c in centers:
        d = _bfs(adj, [c], 2 * r + 2)
        dists.append(tuple(_cap(d.get(c2, math.inf), r) for c2 in centers))
    return Ball(tuple(elems), tuple(local[c] for c in centers), r, tables, tuple(dists))


def symbolic_ball(centers: Sequence[Term], r: int, steps: dict[str, tuple[str, ...]],
                  key: Callable[[Term], Hashable]) -> Ball:
    """Ball in a structure given only by a word-problem oracle.

    ``steps`` maps each symbol f to a word computing f^-1, so the neighbours
    of t are f(t) and f^-1(t).  ``key`` gives canonical positions.
    """
    syms = sorted(steps)
    rep: dict = {}
    order: list = []
    dist: dict = {}

    def add(t, d):
        k = key(t)
        if k not in rep:
            rep[k] = t
            order.append(k)
            dist[k] = d
            return True
        return False

    frontier = []
    for c in centers:
        if add(c, 0):
            frontier.append(c)
    for d in range(1, r + 1):
        nxt = []
        for t in frontier:
            for f in syms:
                for u in (t.then((f,)), t.then(steps[f])):
                    if add(u, d):
                        nxt.append(u)
        frontier = nxt
    local = {k: i for i, k in enumerate(order)}
    tables = {f: tuple(local.get(key(rep[k].then((f,))), -1) for k in order) for f in syms}

    def center_dist(c1, c2):
        target = key(c2)
        seen = {key(c1)}
        layer = [c1]
        for d in range(2 * r + 2):
            if target in seen:
                return d
            nxt = []
            for t in layer:
                for f in syms:
                    for u in (t.then((f,)), t.then(steps[f])):
                        k = key(u)
                        if k not in seen:
                            seen.add(k)
                            nxt.append(u)
            layer = nxt
        return math.inf

    dists = tuple(tuple(_cap(center_dist(c1, c2), r) for c2 in centers) for c1 in centers)
    return Ball(tuple(order), tuple(local[key(c)] for c in centers), r, tables, dists)


# -- canonical codes ------------------------------------------------------

def _refine(b: Ball, pre) -> list[int]:
    """Colour refinement; colours depend only on the isomorphism type."""
    syms = sorted(b.tables)
    n = b.size
    colors = [tuple(i for i, c in enumerate(b.centers) if c == v) for v in range(n)]
    colors = _rank(colors)
    for _ in range(n):
        sig = []
        for v in range(n):
            out = tuple(colors[b.tables[f][v]] if b.tables[f][v] >= 0 else -1 for f in syms)
            inn = tuple(tuple(sorted(colors[u] for u in pre[f][v])) for f in syms)
            sig.append((colors[v], out, inn))
        new = _rank(sig)
        if len(set(new)) == len(set(colors)):
            return new
        colors = new
    return colors


def _rank(items):
    table = {s: i for i, s in enumerate(sorted(set(items)))}
    return [table[s] for s in items]


def canonical_ball_code(b: Ball, max_branches: int = MAX_BRANCHES) -> bytes:
    syms = sorted(b.tables)
    n = b.size
    pre = {f: [[] for _ in range(n)] for f in syms}
    for f in syms:
        for u, v in enumerate(b.tables[f]):
            if v >= 0:
                pre[f][v].append(u)
    colors = _refine(b, pre)
    start: list[int] = []
    for c in b.centers:
        if c not in start:
            start.append(c)
    best = [None]
    branches = [0]

    def encode(order):
        label = {v: i for i, v in enumerate(order)}
        body = tuple(tuple(label[b.tables[f][v]] if b.tables[f][v] >= 0 else -1 for v in order)
                     for f in syms)
        return (tuple(label[c] for c in b.centers), body)

    def extend(order, pos):
        if pos == len(order):
            if len(order) != n:
                raise UnsupportedError("ball is not connected to its centers")
            branches[0] += 1
            if branches[0] > max_branches:
                raise BudgetExceeded(f"canonical labeling needs more than {max_branches} branches")
            cand = encode(order)
            if best[0] is None or cand < best[0]:
                best[0] = cand
            return
        v = order[pos]
        seen = set(order)
        fixed: list[int] = []
        for f in syms:
            w = b.tables[f][v]
            if w >= 0 and w not in seen:
                seen.add(w)
                fixed.append(w)
        groups: list[list[int]] = [fixed] if fixed else []
        for f in syms:
            new = sorted((u for u in pre[f][v] if u not in seen), key=lambda u: colors[u])
            for _, grp in itertools.groupby(new, key=lambda u: colors[u]):
                grp = list(grp)
                seen.update(grp)
                groups.append(grp)
        choices = [[g] if len(g) == 1 or g is fixed else list(itertools.permutations(g))
                   for g in groups]
        for combo in itertools.product(*choices):
            ext = list(order)
            for g in combo:
                ext.extend(g)
            extend(ext, pos + 1)

    extend(start, 0)
    centers, body = best[0]
    parts = [CODE_VERSION, f"r={b.radius}".encode(), f"n={n}".encode(),
             ("c=" + ",".join(map(str, centers))).encode()]
    for f, row in zip(syms, body):
        parts.append((f + "=" + ",".join(map(str, row))).encode())
    parts.append(("d=" + "|".join(",".join(map(str, r)) for r in b.center_distances)).encode())
    return b";".join(parts)


def element_codes(struct: FiniteStructure, r: int) -> list[bytes]:
    return [canonical_ball_code(ball(struct, x, r)) for x in range(struct.size)]


def local_sentence_eval(struct: FiniteStructure, code: bytes, r: int, count: int,
                        budget: int = LOCAL_SEARCH_BUDGET) -> bool:
    """s elements, pairwise more than 2r apart, each with r-ball code ``code``."""
    if count <= 0:
        return True
    cands = [x for x in range(struct.size) if canonical_ball_code(ball(struct, x, r)) == code]
    if len(cands) < count:
        return False
    adj = gaifman_adjacency(struct)
    near = {x: set(_bfs(adj, [x], 2 * r)) for x in cands}
    picked: list[int] = []
    for x in cands:
        if all(x not in near[y] for y in picked):
            picked.append(x)
            if len(picked) == count:
                return True
    nodes = [0]

    def search(start, chosen):
        if len(chosen) == count:
            return True
        for i in range(start, len(cands)):
            nodes[0] += 1
            if nodes[0] > budget:
                raise BudgetExceeded(f"scattered-set search exceeded {budget} nodes")
            x = cands[i]
            if all(x not in near[y] for y in chosen):
                if search(i + 1, chosen + [x]):
                    return True
        return False

    return search(0, [])


# -- free structure versus one-identity quotient ----------------------------

@dataclass(frozen=True)
class BallCheck:
    isomorphic: bool
    hypothesis_ok: bool
    gap: int
    threshold: int
    free_size: int
    quotient_size: int
    mismatches: tuple = ()


def free_vs_quotient_ball_check(spec: VarietySpec, presentation, r: int,
                                require_hypothesis: bool = True, slack: bool = False) -> BallCheck:
    """Compare r-balls around the generators in F and in F / (t1 = t2).

    Balls are built from the same words on both sides; the term map is a
    center-preserving isomorphism iff the two word problems agree on them.
    """
    e = presentation.identities[0] if isinstance(presentation, Presentation) else presentation
    if not isinstance(e, Identity):
        raise TypeError("expected an identity or a one-identity presentation")
    g = gaifman_group(spec)
    gap = abs(projection_pi1(g, e.lhs) - projection_pi1(g, e.rhs))
    bound = e0_bound(g)
    threshold = (bound.slack if slack else bound.e0) * r
    ok = gap > threshold
    if not ok and require_hypothesis and r > 0:
        raise HypothesisError(f"|Pi_1(t1) - Pi_1(t2)| = {gap} is not > {threshold}", gap, threshold)
    steps = inverse_words(spec)
    quotient = build_genbij(e, spec)
    centers = [Term((), x) for x in spec.signature.generators]

    def free_key(t):
        return t.base, g.element(t)

    fb = symbolic_ball(centers, r, steps, free_key)
    qb = symbolic_ball(centers, r, steps, quotient.position)
    words = _ball_words(centers, r, steps, free_key)
    bad = []
    for u, v in itertools.combinations(words, 2):
        if (free_key(u) == free_key(v)) != (quotient.position(u) == quotient.position(v)):
            bad.append((u, v))
            if len(bad) >= 5:
                break
    iso = not bad and fb.size == qb.size
    return BallCheck(iso, ok, gap, threshold, fb.size, qb.size, tuple(bad))


def _ball_words(centers, r, steps, key):
    """One word per free element within distance r of the centers."""
    seen = {}
    for c in centers:
        seen.setdefault(key(c), c)
    frontier = list(seen.values())
    for _ in range(r):
        nxt = []
        for t in frontier:
            for f in sorted(steps):
                for u in (t.then((f,)), t.then(steps[f])):
                    k = key(u)
                    if k not in seen:
                        seen[k] = u
                        nxt.append(u)
        frontier = nxt
    return list(seen.values())
