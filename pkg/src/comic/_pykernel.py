"""Pure-Python cascade kernels.

This is the fallback used when the compiled ``_ckernel`` extension is not
built. Both implementations consume coins in exactly the same order, so a
given uniform stream (or forced decision prefix) yields identical outcomes.

Coins with probability exactly 0 or 1 are resolved without consuming a
uniform and are never recorded; every other coin is recorded as
``(kind, subject, p, outcome)``.
"""

import numpy as np

IDLE, ADOPTED, REJECTED, SUSPENDED = 0, 1, 2, 3
OS_IDLE, OS_EXHAUSTED = -1, -2

EDGE, TRIAL_A, TRIAL_B, RECON_A, RECON_B, TRIAL = 0, 1, 2, 3, 4, 5

BACKEND = "python"


class BudgetExceeded(RuntimeError):
    def __init__(self, leaves, budget):
        super().__init__(f"decision tree exceeded the budget of {budget} leaves (reached {leaves})")
        self.leaves = leaves
        self.budget = budget


class _Coins:
    __slots__ = ("u", "pos", "forced", "record", "kinds", "subjects", "probs", "outs")

    def __init__(self, uniforms=None, forced=None, record=False):
        self.u = uniforms
        self.pos = 0
        self.forced = forced
        self.record = record or uniforms is None
        self.kinds = []
        self.subjects = []
        self.probs = []
        self.outs = []

    def flip(self, p, kind, subject):
        if p >= 1.0:
            return True
        if p <= 0.0:
            return False
        if self.u is not None:
            if self.pos >= len(self.u):
                raise RuntimeError("uniform stream exhausted")
            out = bool(self.u[self.pos] < p)
            self.pos += 1
        else:
            i = len(self.outs)
            out = bool(self.forced[i]) if i < len(self.forced) else True
        if self.record:
            self.kinds.append(kind)
            self.subjects.append(subject)
            self.probs.append(p)
            self.outs.append(out)
        return out

    def trace(self):
        return list(zip(self.kinds, self.subjects, self.probs, self.outs))


def _comic_core(ga, is_a, is_b, params, recon, coins):
    n = ga.n
    dst, prob, in_rank = ga.dst, ga.prob, ga.in_rank
    out_start, out_edge = ga.out_start, ga.out_edge
    maxin = ga.max_in_degree
    qa0, qb0, qab, qba, rho_a, rho_b = (float(x) for x in params)

    a_state = [IDLE] * n
    b_state = [IDLE] * n
    a_time = [-1] * n
    b_time = [-1] * n
    edge_live = [-1] * len(dst)
    events = []
    for v in range(n):
        if is_a[v]:
            a_state[v] = ADOPTED
            a_time[v] = 0
            events.append((v, 0))
        if is_b[v]:
            b_state[v] = ADOPTED
            b_time[v] = 0
            events.append((v, 1))

    t = 0
    while events:
        t += 1
        keys = []
        last = -1
        for v, idea in events:
            sub = 1 if v == last else 0
            last = v
            for j in range(out_start[v], out_start[v + 1]):
                e = out_edge[j]
                keys.append((((int(dst[e]) * maxin + int(in_rank[e])) * 2 + sub) * 2 + idea, int(e)))
        keys.sort()
        new_events = []
        for key, e in keys:
            idea = key & 1
            u = int(dst[e])
            if idea == 0:
                if a_state[u] != IDLE:
                    continue
            elif b_state[u] != IDLE:
                continue
            if edge_live[e] < 0:
                edge_live[e] = 1 if coins.flip(prob[e], EDGE, e) else 0
            if not edge_live[e]:
                continue
            if idea == 0:
                p = qab if b_state[u] == ADOPTED else qa0
                if coins.flip(p, TRIAL_A, u):
                    a_state[u] = ADOPTED
                    a_time[u] = t
                    new_events.append((u, 0))
                    if recon and b_state[u] == SUSPENDED:
                        if coins.flip(rho_b, RECON_B, u):
                            b_state[u] = ADOPTED
                            b_time[u] = t
                            new_events.append((u, 1))
                        else:
                            b_state[u] = REJECTED
                else:
                    a_state[u] = SUSPENDED if recon else REJECTED
            else:
                p = qba if a_state[u] == ADOPTED else qb0
                if coins.flip(p, TRIAL_B, u):
                    b_state[u] = ADOPTED
                    b_time[u] = t
                    new_events.append((u, 1))
                    if recon and a_state[u] == SUSPENDED:
                        if coins.flip(rho_a, RECON_A, u):
                            a_state[u] = ADOPTED
                            a_time[u] = t
                            new_events.append((u, 0))
                        else:
                            a_state[u] = REJECTED
                else:
                    b_state[u] = SUSPENDED if recon else REJECTED
        events = new_events
    return a_state, b_state, a_time, b_time


def _oneshot_core(ga, seed_idea, q, coins):
    n = ga.n
    dst, prob, in_rank = ga.dst, ga.prob, ga.in_rank
    out_start, out_edge = ga.out_start, ga.out_edge
    maxin = ga.max_in_degree
    state = [OS_IDLE] * n
    time = [-1] * n
    edge_live = [-1] * len(dst)
    events = []
    for v in range(n):
        if seed_idea[v] >= 0:
            state[v] = int(seed_idea[v])
            time[v] = 0
            events.append(v)
    t = 0
    while events:
        t += 1
        keys = []
        for v in events:
            for j in range(out_start[v], out_start[v + 1]):
                e = out_edge[j]
                keys.append((int(dst[e]) * maxin + int(in_rank[e]), int(e)))
        keys.sort()
        new_events = []
        for _, e in keys:
            u = int(dst[e])
            if state[u] != OS_IDLE:
                continue
            if edge_live[e] < 0:
                edge_live[e] = 1 if coins.flip(prob[e], EDGE, e) else 0
            if not edge_live[e]:
                continue
            idea = state[int(ga.src[e])]
            if coins.flip(q[idea], TRIAL, u):
                state[u] = idea
                time[u] = t
                new_events.append(u)
            else:
                state[u] = OS_EXHAUSTED
        events = new_events
    return state, time


def comic_simulate(ga, is_a, is_b, params, recon, uniforms, record=False):
    coins = _Coins(uniforms=uniforms, record=record)
    a_state, b_state, a_time, b_time = _comic_core(ga, is_a, is_b, params, recon, coins)
    return (
        np.array(a_state, dtype=np.int8),
        np.array(b_state, dtype=np.int8),
        np.array(a_time, dtype=np.int64),
        np.array(b_time, dtype=np.int64),
        coins.trace() if record else None,
    )


def oneshot_simulate(ga, seed_idea, q, uniforms, record=False):
    coins = _Coins(uniforms=uniforms, record=record)
    state, time = _oneshot_core(ga, seed_idea, q, coins)
    return np.array(state, dtype=np.int64), np.array(time, dtype=np.int64), coins.trace() if record else None


def comic_batch(ga, is_a, is_b, params, recon, uniforms):
    runs = uniforms.shape[0]
    sig = np.zeros((runs, 2), dtype=np.float64)
    counts = np.zeros((ga.n, 2), dtype=np.int64)
    for r in range(runs):
        a_state, b_state, _, _ = _comic_core(ga, is_a, is_b, params, recon, _Coins(uniforms=uniforms[r]))
        for v in range(ga.n):
            if a_state[v] == ADOPTED:
                counts[v, 0] += 1
                sig[r, 0] += 1
            if b_state[v] == ADOPTED:
                counts[v, 1] += 1
                sig[r, 1] += 1
    return sig, counts


def oneshot_batch(ga, seed_idea, q, uniforms):
    runs = uniforms.shape[0]
    m = len(q)
    sig = np.zeros((runs, m), dtype=np.float64)
    counts = np.zeros((ga.n, m), dtype=np.int64)
    for r in range(runs):
        state, _ = _oneshot_core(ga, seed_idea, q, _Coins(uniforms=uniforms[r]))
        for v, s in enumerate(state):
            if s >= 0:
                counts[v, s] += 1
                sig[r, s] += 1
    return sig, counts


def _enumerate(run, budget):
    """Depth-first walk over every decision sequence of ``run``.

    ``run(coins)`` executes one cascade with forced decisions and returns the
    adopted (row, column) cells of the result grid. Success branches are taken
    first; backtracking flips the deepest remaining success to failure.
    """
    forced = []
    leaves = 0
    total = [0.0, 0.0]
    cells = {}
    while True:
        coins = _Coins(forced=forced)
        adopted = run(coins)
        w = 1.0
        for p, o in zip(coins.probs, coins.outs):
            w *= p if o else 1.0 - p
        leaves += 1
        if leaves > budget:
            raise BudgetExceeded(leaves, budget)
        y = w - total[1]
        t = total[0] + y
        total[1] = (t - total[0]) - y
        total[0] = t
        for cell in adopted:
            acc = cells.get(cell)
            if acc is None:
                cells[cell] = [w, 0.0]
            else:
                y = w - acc[1]
                t = acc[0] + y
                acc[1] = (t - acc[0]) - y
                acc[0] = t
        outs = coins.outs
        i = len(outs) - 1
        while i >= 0 and not outs[i]:
            i -= 1
        if i < 0:
            break
        forced = outs[:i] + [False]
    return cells, total[0], leaves


def comic_exact(ga, is_a, is_b, params, recon, budget):
    def run(coins):
        a_state, b_state, _, _ = _comic_core(ga, is_a, is_b, params, recon, coins)
        cells = [(v, 0) for v in range(ga.n) if a_state[v] == ADOPTED]
        cells.extend((v, 1) for v in range(ga.n) if b_state[v] == ADOPTED)
        return cells

    cells, total, leaves = _enumerate(run, budget)
    per = np.zeros((ga.n, 2))
    for (v, i), acc in cells.items():
        per[v, i] = acc[0]
    return per, total, leaves


def oneshot_exact(ga, seed_idea, q, budget):
    def run(coins):
        state, _ = _oneshot_core(ga, seed_idea, q, coins)
        return [(v, s) for v, s in enumerate(state) if s >= 0]

    cells, total, leaves = _enumerate(run, budget)
    per = np.zeros((ga.n, len(q)))
    for (v, i), acc in cells.items():
        per[v, i] = acc[0]
    return per, total, leaves
