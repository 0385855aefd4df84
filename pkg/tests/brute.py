"""Brute-force flow oracles, independent of the library's GF(2) solver.

Existence search: enumerate candidate correction sets per vertex filtered
by the per-vertex label conditions, then check that the order forced by
the remaining conditions is acyclic.  Everything is bit-mask based so the
product search stays fast at five vertices.
"""

from itertools import product

from pauliflow.graph import LabelledOpenGraph


class CandidateSpaceTooLarge(RuntimeError):
    pass


class _BruteCtx:
    def __init__(self, g: LabelledOpenGraph):
        self.g = g
        self.verts = sorted(g.vertices)
        self.idx = {v: i for i, v in enumerate(self.verts)}
        n = len(self.verts)
        self.adj = [0] * n
        for a, b in g.edges:
            ia, ib = self.idx[a], self.idx[b]
            self.adj[ia] |= 1 << ib
            self.adj[ib] |= 1 << ia
        self.prepared = [self.idx[v] for v in sorted(g.prepared)]
        self.measured = [self.idx[v] for v in sorted(g.measured)]
        self.labels = [g.labels.get(v) for v in self.verts]

    def odd(self, mask: int) -> int:
        out = 0
        m = mask
        i = 0
        while m:
            if m & 1:
                out ^= self.adj[i]
            m >>= 1
            i += 1
        return out


def _candidate_masks(ctx: _BruteCtx, vi: int):
    lab = ctx.labels[vi]
    vbit = 1 << vi
    out = []
    pool = ctx.prepared
    for sub in range(1 << len(pool)):
        mask = 0
        for j, p in enumerate(pool):
            if sub & (1 << j):
                mask |= 1 << p
        odd = ctx.odd(mask)
        in_p, in_odd = bool(mask & vbit), bool(odd & vbit)
        ok = (
            (lab == "XY" and not in_p and in_odd)
            or (lab == "XZ" and in_p and in_odd)
            or (lab == "YZ" and in_p and not in_odd)
            or (lab == "X" and in_odd)
            or (lab == "Z" and in_p)
            or (lab == "Y" and in_p != in_odd)
        )
        if ok:
            out.append((mask, odd))
    return out


def _forced_pairs_masks(ctx: _BruteCtx, assignment):
    """assignment: list of (mask, odd) aligned with ctx.measured."""
    pairs = set()
    for u, (mask, odd) in zip(ctx.measured, assignment):
        for v in range(len(ctx.verts)):
            if v == u:
                continue
            bit = 1 << v
            lab = ctx.labels[v]
            if (mask & bit) and lab not in ("X", "Y"):
                pairs.add((u, v))
            if (odd & bit) and lab not in ("Y", "Z"):
                pairs.add((u, v))
            if ((mask ^ odd) & bit) and lab == "Y":
                pairs.add((u, v))
    return pairs


def _acyclic(pairs, n):
    succ = [0] * n
    for a, b in pairs:
        succ[a] |= 1 << b
    state = [0] * n  # 0 unseen, 1 open, 2 done

    def visit(x):
        if state[x] == 2:
            return True
        if state[x] == 1:
            return False
        state[x] = 1
        m = succ[x]
        i = 0
        while m:
            if m & 1 and not visit(i):
                return False
            m >>= 1
            i += 1
        state[x] = 2
        return True

    return all(visit(x) for x in range(n))


def brute_force_flows(g: LabelledOpenGraph, cap=400_000):
    """Yield every valid (p map, forced order pairs on vertex names)."""
    ctx = _BruteCtx(g)
    if not ctx.measured:
        yield {}, set()
        return
    candidates = [_candidate_masks(ctx, vi) for vi in ctx.measured]
    total = 1
    for c in candidates:
        total *= len(c)
        if total == 0:
            return
        if total > cap:
            raise CandidateSpaceTooLarge(str(total))
    n = len(ctx.verts)
    for combo in product(*candidates):
        pairs = _forced_pairs_masks(ctx, combo)
        if _acyclic(pairs, n):
            p = {
                ctx.verts[u]: frozenset(
                    ctx.verts[i] for i in range(n) if mask & (1 << i)
                )
                for u, (mask, _) in zip(ctx.measured, combo)
            }
            yield p, {(ctx.verts[a], ctx.verts[b]) for a, b in pairs}


def brute_force_has_flow(g: LabelledOpenGraph, cap=400_000) -> bool:
    for _ in brute_force_flows(g, cap):
        return True
    return False


def delay_profile_from_pairs(vertices, pairs):
    """|V_{cup k}| profile of the most delayed order containing the pairs."""
    succ = {v: set() for v in vertices}
    for a, b in pairs:
        succ[a].add(b)
    depth = {}

    def d(v):
        if v not in depth:
            depth[v] = 0
            depth[v] = 1 + max((d(w) for w in succ[v]), default=-1)
        return depth[v]

    for v in vertices:
        d(v)
    maxd = max(depth.values(), default=0)
    return [
        sum(1 for v in vertices if depth[v] <= k) for k in range(maxd + 1)
    ]


def delay_profile_from_depth(vertices, depth_map):
    maxd = max((depth_map.get(v, 0) for v in vertices), default=0)
    return [
        sum(1 for v in vertices if depth_map.get(v, 0) <= k)
        for k in range(maxd + 1)
    ]


def dominates(a, b):
    """Profile a is at least as delayed as b."""
    n = max(len(a), len(b))
    pad = lambda p: p + [p[-1]] * (n - len(p)) if p else [0] * n
    return all(x >= y for x, y in zip(pad(a), pad(b)))
