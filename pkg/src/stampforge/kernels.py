"""Hot loops.

Every kernel exists twice: a numba version operating on word-packed
``uint64`` bitsets (``*_jit``) and a numpy / plain-Python twin (``*_np``).
The module-level names without suffix dispatch on :data:`stampforge._jit.USE_JIT`.
Both twins are deterministic and must agree bit for bit, including node
counters of the searches; ``tests/test_kernels.py`` holds them to that.
"""
import numpy as np

from ._jit import USE_JIT, njit

_ONE = np.uint64(1)
_ZERO = np.uint64(0)
_ALL = np.uint64(0xFFFFFFFFFFFFFFFF)


# ---------------------------------------------------------------------------
# bit helpers (numba side)
# ---------------------------------------------------------------------------


@njit
def _popcount(x):
    x = x - ((x >> np.uint64(1)) & np.uint64(0x5555555555555555))
    x = (x & np.uint64(0x3333333333333333)) + ((x >> np.uint64(2)) & np.uint64(0x3333333333333333))
    x = (x + (x >> np.uint64(4))) & np.uint64(0x0F0F0F0F0F0F0F0F)
    return np.int64((x * np.uint64(0x0101010101010101)) >> np.uint64(56))


@njit
def _lowbit(x):
    # index of the lowest set bit of a nonzero word
    i = 0
    while (x >> np.uint64(i)) & _ONE == _ZERO:
        i += 1
    return i


@njit
def _or_shifted(dst, src, w, a, nw):
    """dst |= (word src sitting at index w) shifted by a bits (a may be negative)."""
    if a >= 0:
        ws = a >> 6
        bs = np.uint64(a & 63)
        t = w + ws
        if t < nw:
            dst[t] |= src << bs
            if bs != _ZERO and t + 1 < nw:
                dst[t + 1] |= src >> (np.uint64(64) - bs)
    else:
        na = -a
        ws = na >> 6
        bs = np.uint64(na & 63)
        t = w - ws
        if t >= 0:
            dst[t] |= src >> bs
            if bs != _ZERO and t - 1 >= 0:
                dst[t - 1] |= src << (np.uint64(64) - bs)


@njit
def _tail_mask(width):
    r = width & 63
    if r == 0:
        return _ALL
    return (_ONE << np.uint64(r)) - _ONE


# ---------------------------------------------------------------------------
# iterated sumsets inside a window
# ---------------------------------------------------------------------------


@njit
def sumset_levels_jit(shifts, origin, width, h):
    nw = (width + 63) >> 6
    ms = np.zeros(width, np.int8)
    seen = np.zeros(nw, np.uint64)
    front = np.zeros(nw, np.uint64)
    acc = np.zeros(nw, np.uint64)
    front[origin >> 6] = _ONE << np.uint64(origin & 63)
    tail = _tail_mask(width)
    for level in range(1, h + 1):
        acc[:] = _ZERO
        for w in range(nw):
            x = front[w]
            if x == _ZERO:
                continue
            for s in range(shifts.shape[0]):
                _or_shifted(acc, x, w, shifts[s], nw)
        acc[nw - 1] &= tail
        fresh = False
        for w in range(nw):
            new = acc[w] & ~seen[w]
            front[w] = new
            if new != _ZERO:
                fresh = True
                seen[w] |= new
                base = w << 6
                for j in range(64):
                    if (new >> np.uint64(j)) & _ONE:
                        ms[base + j] = level
        if not fresh:
            break
    return ms


def sumset_levels_np(shifts, origin, width, h):
    ms = np.zeros(width, np.int8)
    seen = np.zeros(width, dtype=bool)
    front = np.zeros(width, dtype=bool)
    front[origin] = True
    for level in range(1, h + 1):
        acc = np.zeros(width, dtype=bool)
        for a in shifts.tolist():
            if a >= 0:
                if a < width:
                    acc[a:] |= front[: width - a]
            elif -a < width:
                acc[: width + a] |= front[-a:]
        new = acc & ~seen
        if not new.any():
            break
        ms[new] = level
        seen |= new
        front = new
    return ms


def sumset_levels(shifts, origin, width, h):
    """Least number of summands (1..h) reaching each window slot; 0 if none.

    The walk starts at slot ``origin`` (the empty sum, which is not itself
    recorded) and each step adds one of ``shifts``.  Sums leaving the window
    are discarded.
    """
    shifts = np.ascontiguousarray(shifts, dtype=np.int64)
    if USE_JIT:
        return sumset_levels_jit(shifts, int(origin), int(width), int(h))
    return sumset_levels_np(shifts, int(origin), int(width), int(h))


# ---------------------------------------------------------------------------
# cyclic sumsets
# ---------------------------------------------------------------------------


@njit
def cyclic_levels_jit(residues, b, k):
    ms = np.zeros(b, np.int8)
    seen = np.zeros(b, np.bool_)
    front = np.empty(b, np.int64)
    nxt = np.empty(b, np.int64)
    front[0] = 0
    nf = 1
    for level in range(1, k + 1):
        nn = 0
        for i in range(nf):
            x = front[i]
            for j in range(residues.shape[0]):
                y = (x + residues[j]) % b
                if not seen[y]:
                    seen[y] = True
                    ms[y] = level
                    nxt[nn] = y
                    nn += 1
        if nn == 0:
            break
        front, nxt = nxt, front
        nf = nn
    return ms


def cyclic_levels_np(residues, b, k):
    ms = np.zeros(b, np.int8)
    seen = np.zeros(b, dtype=bool)
    front = np.zeros(b, dtype=bool)
    front[0] = True
    for level in range(1, k + 1):
        acc = np.zeros(b, dtype=bool)
        for a in residues.tolist():
            acc |= np.roll(front, a)
        new = acc & ~seen
        if not new.any():
            break
        ms[new] = level
        seen |= new
        front = new
    return ms


def cyclic_levels(residues, b, k):
    """Least number of summands (1..k) giving each residue mod b; 0 if none."""
    residues = np.ascontiguousarray(residues, dtype=np.int64) % b
    if USE_JIT:
        return cyclic_levels_jit(residues, int(b), int(k))
    return cyclic_levels_np(residues, int(b), int(k))


# ---------------------------------------------------------------------------
# postage-stamp depth-first search
# ---------------------------------------------------------------------------
#
# Elements are chosen in increasing order, 1 first.  ``levels[d, i]`` is the
# set of sums of at most i elements among the first d chosen, the empty sum
# included (bit 0, never counted as a target).  The next element can never exceed the smallest uncovered value
# ("gap"), otherwise the gap stays uncovered forever.  ``caps[j]`` is the
# number of multisets of size <= h drawn from k elements that use at least one
# of the k - j elements not yet chosen: no completion can cover more new
# targets than that.
#
# mode 0 (cover): find a k-set covering [1, n]; first hit wins.
# mode 1 (reach): maximise gap - 1 over all k-sets.
# Return: status (1 done / found, 0 exhausted without hit, -1 budget),
#         witness, witness length, best reach, nodes, prunes by counting
#         bound, candidates cut by the gap rule.


@njit
def _window_count(row, nw, width):
    c = 0
    for w in range(nw):
        c += _popcount(row[w])
    # bit 0 is the empty sum / zero target; never a target
    if row[0] & _ONE:
        c -= 1
    return c


@njit
def _gap(row, nw, width):
    for w in range(nw):
        x = row[w]
        if w == 0:
            x |= _ONE
        inv = ~x
        if inv != _ZERO:
            g = (w << 6) + _lowbit(inv)
            return g if g < width else width
    return width


@njit
def stamp_search_jit(n, h, k, width, mode, descending, budget, caps):
    nw = (width + 63) >> 6
    tail = _tail_mask(width)
    levels = np.zeros((k + 1, h + 1, nw), np.uint64)
    for i in range(h + 1):
        levels[0, i, 0] = _ONE
    elems = np.zeros(k, np.int64)
    cur = np.zeros(k, np.int64)
    stop = np.zeros(k, np.int64)
    best = np.zeros(k, np.int64)
    best_len = 0
    best_reach = -1
    nodes = 0
    pr_bound = 0
    pr_gap = 0
    max_elem = n if mode == 0 else width - 1

    depth = 0
    lo = 1
    hi = 1 if max_elem >= 1 else 0
    if descending:
        cur[0] = hi
        stop[0] = lo - 1
    else:
        cur[0] = lo
        stop[0] = hi + 1
    while depth >= 0:
        a = cur[depth]
        if a == stop[depth]:
            depth -= 1
            continue
        cur[depth] = a - 1 if descending else a + 1
        if nodes >= budget:
            return -1, best, best_len, best_reach, nodes, pr_bound, pr_gap
        nodes += 1
        elems[depth] = a
        d1 = depth + 1
        # levels[d1, i] = levels[depth, i] | (levels[d1, i-1] << a)
        for w in range(nw):
            levels[d1, 0, w] = levels[depth, 0, w]
        for i in range(1, h + 1):
            for w in range(nw):
                levels[d1, i, w] = levels[depth, i, w]
            for w in range(nw):
                x = levels[d1, i - 1, w]
                if x != _ZERO:
                    _or_shifted(levels[d1, i], x, w, a, nw)
            levels[d1, i, nw - 1] &= tail
        row = levels[d1, h]
        covered = _window_count(row, nw, width)
        g = _gap(row, nw, width)
        if mode == 0:
            if covered >= n:
                for j in range(d1):
                    best[j] = elems[j]
                return 1, best, d1, g - 1, nodes, pr_bound, pr_gap
            if n - covered > caps[d1]:
                pr_bound += 1
                continue
            if d1 == k:
                continue
        else:
            if d1 == k:
                if g - 1 > best_reach:
                    best_reach = g - 1
                    for j in range(k):
                        best[j] = elems[j]
                    best_len = k
                continue
            if covered + caps[d1] <= best_reach:
                pr_bound += 1
                continue
        nlo = a + 1
        nhi = g if g < max_elem else max_elem
        if max_elem > nhi:
            pr_gap += max_elem - nhi
        if nlo > nhi:
            continue
        depth = d1
        if descending:
            cur[depth] = nhi
            stop[depth] = nlo - 1
        else:
            cur[depth] = nlo
            stop[depth] = nhi + 1
    status = 0 if mode == 0 else 1
    return status, best, best_len, best_reach, nodes, pr_bound, pr_gap


def stamp_search_np(n, h, k, width, mode, descending, budget, caps):
    mask = (1 << width) - 1
    max_elem = n if mode == 0 else width - 1
    caps = [int(c) for c in caps]
    state = {"nodes": 0, "pr_bound": 0, "pr_gap": 0, "best": [], "best_reach": -1}
    elems = []

    class _Budget(Exception):
        pass

    class _Found(Exception):
        pass

    def gap_of(row):
        inv = ~(row | 1) & mask
        return (inv & -inv).bit_length() - 1 if inv else width

    def visit(levels, lo, hi):
        order = range(hi, lo - 1, -1) if descending else range(lo, hi + 1)
        for a in order:
            if state["nodes"] >= budget:
                raise _Budget
            state["nodes"] += 1
            new = [levels[0]]
            for i in range(1, h + 1):
                new.append((levels[i] | (new[i - 1] << a)) & mask)
            elems.append(a)
            row = new[h]
            covered = bin(row).count("1") - (row & 1)
            g = gap_of(row)
            d1 = len(elems)
            descend = True
            if mode == 0:
                if covered >= n:
                    state["best"] = list(elems)
                    state["best_reach"] = g - 1
                    raise _Found
                if n - covered > caps[d1]:
                    state["pr_bound"] += 1
                    descend = False
                elif d1 == k:
                    descend = False
            else:
                if d1 == k:
                    if g - 1 > state["best_reach"]:
                        state["best_reach"] = g - 1
                        state["best"] = list(elems)
                    descend = False
                elif covered + caps[d1] <= state["best_reach"]:
                    state["pr_bound"] += 1
                    descend = False
            if descend:
                nhi = min(g, max_elem)
                if max_elem > nhi:
                    state["pr_gap"] += max_elem - nhi
                if a + 1 <= nhi:
                    visit(new, a + 1, nhi)
            elems.pop()

    start = [1] * (h + 1)
    status = 0 if mode == 0 else 1
    try:
        if max_elem >= 1:
            visit(start, 1, 1)
    except _Found:
        status = 1
    except _Budget:
        status = -1
    best = np.zeros(k, np.int64)
    best[: len(state["best"])] = state["best"]
    return (status, best, len(state["best"]), state["best_reach"], state["nodes"],
            state["pr_bound"], state["pr_gap"])


def stamp_search(n, h, k, width, mode, descending, budget, caps):
    caps = np.ascontiguousarray(caps, dtype=np.int64)
    args = (int(n), int(h), int(k), int(width), int(mode), bool(descending), int(budget), caps)
    if USE_JIT:
        return stamp_search_jit(*args)
    return stamp_search_np(*args)


# ---------------------------------------------------------------------------
# exhaustive search for 2-fold bases of Z/bZ
# ---------------------------------------------------------------------------
#
# Residues are chosen in increasing order.  Two prunes:
#  * counting: k residues produce k singletons and k(k+1)/2 pair sums, so at
#    most k(k+3)/2 - b of them may collide; a prefix that has already wasted
#    more is dead.
#  * orbit: only the lexicographically smallest member of each orbit is kept.
#    Multiplication by a unit maps bases to bases.  When 0 is in the set the
#    set is a basis for exact two-term sums, which is translation invariant,
#    so x -> u*(x - c) for c in the set also stays in the search space.  A
#    prefix P (the set's full intersection with [0, max P]) is cut when some
#    image g(P) contains a y <= max P outside P with every element of P below
#    y also in g(P): then g(A) < A for every completion A.


@njit
def cyclic_exhaustive_jit(b, k, units, budget):
    W = (b + 63) >> 6
    nu = units.shape[0]
    slack = k * (k + 3) // 2 - b
    cnt = np.zeros(b, np.int32)
    elems = np.zeros(k, np.int64)
    nxt = np.zeros(k, np.int64)
    gm = np.zeros((k, k, nu, W), np.uint64)
    pm = np.zeros((k, W), np.uint64)
    distinct = 0
    depth = 0
    nodes = 0
    if slack < 0:
        return 0, elems, nodes
    while depth >= 0:
        cand = nxt[depth]
        if cand > b - (k - depth):
            depth -= 1
            if depth >= 0:
                a = elems[depth]
                cnt[a] -= 1
                if cnt[a] == 0:
                    distinct -= 1
                for j in range(depth + 1):
                    s = (a + elems[j]) % b
                    cnt[s] -= 1
                    if cnt[s] == 0:
                        distinct -= 1
            continue
        nxt[depth] = cand + 1
        if nodes >= budget:
            return -1, elems, nodes
        nodes += 1
        elems[depth] = cand
        a = cand
        if cnt[a] == 0:
            distinct += 1
        cnt[a] += 1
        for j in range(depth + 1):
            s = (a + elems[j]) % b
            if cnt[s] == 0:
                distinct += 1
            cnt[s] += 1
        d1 = depth + 1
        ok = d1 * (d1 + 3) // 2 - distinct <= slack
        if ok:
            for w in range(W):
                pm[depth, w] = pm[depth - 1, w] if depth > 0 else _ZERO
            pm[depth, a >> 6] |= _ONE << np.uint64(a & 63)
            zero_in = elems[0] == 0
            nci = depth + 1 if zero_in else 1
            for ci in range(nci):
                c = elems[ci] if zero_in else 0
                for ui in range(nu):
                    u = units[ui]
                    if ci < depth:
                        for w in range(W):
                            gm[depth, ci, ui, w] = gm[depth - 1, ci, ui, w]
                        y = (u * (a - c)) % b
                        gm[depth, ci, ui, y >> 6] |= _ONE << np.uint64(y & 63)
                    else:
                        for w in range(W):
                            gm[depth, ci, ui, w] = _ZERO
                        for i in range(depth + 1):
                            y = (u * (elems[i] - c)) % b
                            gm[depth, ci, ui, y >> 6] |= _ONE << np.uint64(y & 63)
            for ci in range(nci):
                if not ok:
                    break
                for ui in range(nu):
                    if ci == 0 and units[ui] == 1:
                        continue
                    ylow = -1
                    for w in range(W):
                        lo = w * 64
                        if lo > a:
                            break
                        if a - lo >= 63:
                            wm = _ALL
                        else:
                            wm = (_ONE << np.uint64(a - lo + 1)) - _ONE
                        dd = gm[depth, ci, ui, w] & wm & ~pm[depth, w]
                        if dd != _ZERO:
                            ylow = lo + _lowbit(dd)
                            break
                    if ylow < 0:
                        continue
                    sub = True
                    for w in range(W):
                        lo = w * 64
                        if lo >= ylow:
                            break
                        if ylow - lo >= 64:
                            bm = _ALL
                        else:
                            bm = (_ONE << np.uint64(ylow - lo)) - _ONE
                        if pm[depth, w] & bm & ~gm[depth, ci, ui, w] != _ZERO:
                            sub = False
                            break
                    if sub:
                        ok = False
                        break
        if ok:
            if d1 == k:
                if distinct == b:
                    return 1, elems, nodes
            else:
                depth = d1
                nxt[depth] = cand + 1
                continue
        cnt[a] -= 1
        if cnt[a] == 0:
            distinct -= 1
        for j in range(depth + 1):
            s = (a + elems[j]) % b
            cnt[s] -= 1
            if cnt[s] == 0:
                distinct -= 1
    return 0, elems, nodes


def cyclic_exhaustive_np(b, k, units, budget):
    slack = k * (k + 3) // 2 - b
    units = [int(u) for u in units]
    cnt = [0] * b
    elems = []
    state = {"nodes": 0, "distinct": 0}

    class _Budget(Exception):
        pass

    class _Found(Exception):
        pass

    def bump(a, step):
        for s in [a, (2 * a) % b] + [(a + e) % b for e in elems]:
            if step > 0 and cnt[s] == 0:
                state["distinct"] += 1
            cnt[s] += step
            if step < 0 and cnt[s] == 0:
                state["distinct"] -= 1

    def orbit_cut(pmask, a):
        zero_in = elems[0] == 0
        centres = elems if zero_in else [0]
        window = (1 << (a + 1)) - 1
        for ci, c in enumerate(centres):
            for u in units:
                if ci == 0 and u == 1:
                    continue
                g = 0
                for e in elems:
                    g |= 1 << ((u * (e - c)) % b)
                d = g & window & ~pmask
                if not d:
                    continue
                y = (d & -d).bit_length() - 1
                if pmask & ((1 << y) - 1) & ~g == 0:
                    return True
        return False

    def visit(start, pmask):
        depth = len(elems)
        for cand in range(start, b - (k - depth) + 1):
            if state["nodes"] >= budget:
                raise _Budget
            state["nodes"] += 1
            bump(cand, +1)
            elems.append(cand)
            d1 = depth + 1
            ok = d1 * (d1 + 3) // 2 - state["distinct"] <= slack
            newmask = pmask | (1 << cand)
            if ok and orbit_cut(newmask, cand):
                ok = False
            if ok:
                if d1 == k:
                    if state["distinct"] == b:
                        raise _Found
                else:
                    visit(cand + 1, newmask)
            elems.pop()
            bump(cand, -1)

    out = np.zeros(k, np.int64)
    if slack < 0:
        return 0, out, 0
    try:
        visit(0, 0)
    except _Found:
        out[:] = elems
        return 1, out, state["nodes"]
    except _Budget:
        out[: len(elems)] = elems
        return -1, out, state["nodes"]
    return 0, out, state["nodes"]


def cyclic_exhaustive(b, k, units, budget):
    units = np.ascontiguousarray(units, dtype=np.int64)
    if USE_JIT:
        return cyclic_exhaustive_jit(int(b), int(k), units, int(budget))
    return cyclic_exhaustive_np(int(b), int(k), units, int(budget))


# ---------------------------------------------------------------------------
# local search for 2-fold bases of Z/bZ
# ---------------------------------------------------------------------------
#
# cnt[r] counts the representations of r as a singleton or an unordered pair.
# A state is valid when no count is zero.  Each round first tries to delete an
# element (ascending order, first success wins); when none can go, one
# replace move x -> y drawn from the supplied random stream is evaluated and
# kept if the state stays valid and the number of residues with a single
# representation does not grow (or, rarely, at random).  Random draws come
# from the caller so both twins walk the same trajectory.


@njit
def _ls_toggle(cnt, stats, elems, m, x, step, b):
    # add (step=+1) or remove (step=-1) x against elems[:m] (x not among them)
    for t in range(m + 2):
        if t == 0:
            s = x
        elif t == 1:
            s = (2 * x) % b
        else:
            s = (x + elems[t - 2]) % b
        old = cnt[s]
        new = old + step
        cnt[s] = new
        if old == 0:
            stats[0] -= 1
        if new == 0:
            stats[0] += 1
        if old == 1:
            stats[1] -= 1
        if new == 1:
            stats[1] += 1


@njit
def cyclic_local_search_jit(b, start, floor, rand_i, rand_u, p_accept, max_moves):
    elems = np.zeros(b, np.int64)
    m = 0
    cnt = np.zeros(b, np.int64)
    stats = np.zeros(2, np.int64)  # zeros, ones
    stats[0] = b
    for i in range(start.shape[0]):
        _ls_toggle(cnt, stats, elems, m, start[i], 1, b)
        elems[m] = start[i]
        m += 1
    moves = 0
    dirty = True
    while moves < max_moves and m > floor:
        if dirty:
            dirty = False
            order = np.sort(elems[:m])
            for i in range(m):
                x = order[i]
                pos = 0
                while elems[pos] != x:
                    pos += 1
                elems[pos] = elems[m - 1]
                m -= 1
                _ls_toggle(cnt, stats, elems, m, x, -1, b)
                if stats[0] == 0:
                    dirty = True
                    break
                _ls_toggle(cnt, stats, elems, m, x, 1, b)
                elems[m] = elems[pos]
                elems[pos] = x
                m += 1
            if dirty:
                continue
        pos = rand_i[2 * moves] % m
        y = rand_i[2 * moves + 1] % b
        u = rand_u[moves]
        moves += 1
        present = False
        for i in range(m):
            if elems[i] == y:
                present = True
                break
        if present:
            continue
        x = elems[pos]
        ones_before = stats[1]
        elems[pos] = elems[m - 1]
        m -= 1
        _ls_toggle(cnt, stats, elems, m, x, -1, b)
        _ls_toggle(cnt, stats, elems, m, y, 1, b)
        elems[m] = y
        m += 1
        if stats[0] == 0 and (stats[1] <= ones_before or u < p_accept):
            dirty = True
            continue
        m -= 1
        _ls_toggle(cnt, stats, elems, m, y, -1, b)
        _ls_toggle(cnt, stats, elems, m, x, 1, b)
        elems[m] = elems[pos]
        elems[pos] = x
        m += 1
    return np.sort(elems[:m]), moves


def _toggle_np(cnt, stats, others, x, step, b):
    for s in [x, (2 * x) % b] + [(x + e) % b for e in others]:
        old = cnt[s]
        new = old + step
        cnt[s] = new
        stats[0] += (new == 0) - (old == 0)
        stats[1] += (new == 1) - (old == 1)


def cyclic_local_search_np(b, start, floor, rand_i, rand_u, p_accept, max_moves):
    # same slot layout as the compiled kernel: members live in elems[:m]
    elems = [0] * b
    m = 0
    cnt = [0] * b
    stats = [b, 0]
    for x in start.tolist():
        _toggle_np(cnt, stats, elems[:m], x, 1, b)
        elems[m] = x
        m += 1
    rand_i = rand_i.tolist()
    rand_u = rand_u.tolist()
    moves = 0
    dirty = True
    while moves < max_moves and m > floor:
        if dirty:
            dirty = False
            for x in sorted(elems[:m]):
                pos = elems.index(x, 0, m)
                elems[pos] = elems[m - 1]
                m -= 1
                _toggle_np(cnt, stats, elems[:m], x, -1, b)
                if stats[0] == 0:
                    dirty = True
                    break
                _toggle_np(cnt, stats, elems[:m], x, 1, b)
                elems[m] = elems[pos]
                elems[pos] = x
                m += 1
            if dirty:
                continue
        pos = rand_i[2 * moves] % m
        y = rand_i[2 * moves + 1] % b
        u = rand_u[moves]
        moves += 1
        if y in elems[:m]:
            continue
        x = elems[pos]
        ones_before = stats[1]
        elems[pos] = elems[m - 1]
        m -= 1
        _toggle_np(cnt, stats, elems[:m], x, -1, b)
        _toggle_np(cnt, stats, elems[:m], y, 1, b)
        elems[m] = y
        m += 1
        if stats[0] == 0 and (stats[1] <= ones_before or u < p_accept):
            dirty = True
            continue
        m -= 1
        _toggle_np(cnt, stats, elems[:m], y, -1, b)
        _toggle_np(cnt, stats, elems[:m], x, 1, b)
        elems[m] = elems[pos]
        elems[pos] = x
        m += 1
    return np.array(sorted(elems[:m]), dtype=np.int64), moves


def cyclic_local_search(b, start, floor, rand_i, rand_u, p_accept, max_moves):
    args = (
        int(b),
        np.ascontiguousarray(start, dtype=np.int64),
        int(floor),
        np.ascontiguousarray(rand_i, dtype=np.int64),
        np.ascontiguousarray(rand_u, dtype=np.float64),
        float(p_accept),
        int(max_moves),
    )
    if USE_JIT:
        return cyclic_local_search_jit(*args)
    return cyclic_local_search_np(*args)


# ---------------------------------------------------------------------------
# fixed-size annealing towards a 2-fold basis of Z/bZ
# ---------------------------------------------------------------------------
#
# The set keeps its size; a move swaps one member for a non-member.  The
# score is the number of uncovered residues, and a move that worsens it by d
# is accepted when the uniform draw falls below accept[d] (0 past the table).
# Acceptance probabilities are tabulated by the caller so that both twins
# take identical decisions.  Return: (elements, found flag, moves used).


@njit
def cyclic_anneal_jit(b, start, rand_i, rand_u, accept, max_moves):
    m = start.shape[0]
    elems = np.zeros(m, np.int64)
    member = np.zeros(b, np.bool_)
    cnt = np.zeros(b, np.int64)
    stats = np.zeros(2, np.int64)
    stats[0] = b
    for i in range(m):
        _ls_toggle(cnt, stats, elems, i, start[i], 1, b)
        elems[i] = start[i]
        member[start[i]] = True
    na = accept.shape[0]
    moves = 0
    while moves < max_moves:
        if stats[0] == 0:
            return np.sort(elems), 1, moves
        pos = rand_i[2 * moves] % m
        y = rand_i[2 * moves + 1] % b
        u = rand_u[moves]
        moves += 1
        if member[y]:
            continue
        x = elems[pos]
        before = stats[0]
        elems[pos] = elems[m - 1]
        _ls_toggle(cnt, stats, elems, m - 1, x, -1, b)
        _ls_toggle(cnt, stats, elems, m - 1, y, 1, b)
        elems[m - 1] = y
        d = stats[0] - before
        if d <= 0 or (d < na and u < accept[d]):
            member[x] = False
            member[y] = True
            continue
        _ls_toggle(cnt, stats, elems, m - 1, y, -1, b)
        _ls_toggle(cnt, stats, elems, m - 1, x, 1, b)
        elems[m - 1] = elems[pos]
        elems[pos] = x
    found = 1 if stats[0] == 0 else 0
    return np.sort(elems), found, moves


def cyclic_anneal_np(b, start, rand_i, rand_u, accept, max_moves):
    elems = start.tolist()
    m = len(elems)
    cnt = [0] * b
    stats = [b, 0]
    for i, x in enumerate(elems):
        _toggle_np(cnt, stats, elems[:i], x, 1, b)
    member = set(elems)
    accept = accept.tolist()
    na = len(accept)
    moves = 0
    while moves < max_moves:
        if stats[0] == 0:
            return np.array(sorted(elems), dtype=np.int64), 1, moves
        pos = int(rand_i[2 * moves]) % m
        y = int(rand_i[2 * moves + 1]) % b
        u = float(rand_u[moves])
        moves += 1
        if y in member:
            continue
        x = elems[pos]
        before = stats[0]
        elems[pos] = elems[m - 1]
        rest = elems[: m - 1]
        _toggle_np(cnt, stats, rest, x, -1, b)
        _toggle_np(cnt, stats, rest, y, 1, b)
        elems[m - 1] = y
        d = stats[0] - before
        if d <= 0 or (d < na and u < accept[d]):
            member.discard(x)
            member.add(y)
            continue
        _toggle_np(cnt, stats, rest, y, -1, b)
        _toggle_np(cnt, stats, rest, x, 1, b)
        elems[m - 1] = elems[pos]
        elems[pos] = x
    return np.array(sorted(elems), dtype=np.int64), int(stats[0] == 0), moves


def cyclic_anneal(b, start, rand_i, rand_u, accept, max_moves):
    args = (
        int(b),
        np.ascontiguousarray(start, dtype=np.int64),
        np.ascontiguousarray(rand_i, dtype=np.int64),
        np.ascontiguousarray(rand_u, dtype=np.float64),
        np.ascontiguousarray(accept, dtype=np.float64),
        int(max_moves),
    )
    if USE_JIT:
        return cyclic_anneal_jit(*args)
    return cyclic_anneal_np(*args)
