"""Pure-Python belief BFS; beliefs are Python ints used as bitsets.

Mirrors the compiled kernel exactly, including the order in which beliefs
are discovered, so both report the same plan and the same counters.
"""

SAT, UNSAT, CAPPED = 1, 0, 2


def belief_bfs(n_states, n_actions, init, app, offsets, targets, goal, cap):
    app = list(app)
    offsets = list(offsets)
    targets = list(targets)
    app_mask = [0] * n_actions
    succ_mask = [0] * (n_states * n_actions)
    goal_mask = 0
    for s in range(n_states):
        if goal[s]:
            goal_mask |= 1 << s
        for a in range(n_actions):
            k = s * n_actions + a
            if app[k]:
                app_mask[a] |= 1 << s
                m = 0
                for t in targets[offsets[k]:offsets[k + 1]]:
                    m |= 1 << t
                succ_mask[k] = m

    start = 1 << init
    store = [start]
    parent = [-1]
    via = [-1]
    index = {start: 0}
    peak = 1
    if start & ~goal_mask == 0:
        return SAT, [], 1, peak
    head = 0
    while head < len(store):
        b = store[head]
        head += 1
        members = []
        x = b
        while x:
            low = x & -x
            members.append(low.bit_length() - 1)
            x ^= low
        for a in range(n_actions):
            if b & ~app_mask[a]:
                continue
            nb = 0
            for s in members:
                nb |= succ_mask[s * n_actions + a]
            if nb in index:
                continue
            index[nb] = len(store)
            store.append(nb)
            parent.append(head - 1)
            via.append(a)
            peak = max(peak, len(store) - head)
            if nb & ~goal_mask == 0:
                return SAT, _plan(parent, via, len(store) - 1), len(store), peak
            if len(store) > cap:
                return CAPPED, None, len(store), peak
    return UNSAT, None, len(store), peak


def _plan(parent, via, i):
    out = []
    while parent[i] >= 0:
        out.append(via[i])
        i = parent[i]
    out.reverse()
    return out
