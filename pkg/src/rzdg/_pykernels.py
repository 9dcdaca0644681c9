"""Pure-Python search kernels; bitsets are Python ints.

Same call signatures as the compiled ``_ckernels`` module.
"""

import sys
import time
from itertools import combinations

BRUTE_HARD_CAP = 30


def _bits(mask):
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def _cover_bound(coverage, cnt, pick_cost, allow_single):
    """Cheapest way to cover ``cnt`` vertices when j picks cover at most the
    j largest entries of ``coverage`` (sorted descending)."""
    best = cnt if allow_single else float("inf")
    covered = 0
    for j, c in enumerate(coverage, 1):
        if allow_single and c <= pick_cost:
            break
        covered += c
        if covered >= cnt:
            return min(best, pick_cost * j)
        if allow_single:
            best = min(best, pick_cost * j + cnt - covered)
    return best


def branch_and_bound(closed, pick_cost, allow_single, best, best_picks, best_singles,
                     node_budget, time_limit):
    """Minimum-weight cover of all vertices by picks (cost ``pick_cost``,
    covering N[u]) and, if ``allow_single``, singles (cost 1, covering v).

    Returns ``(weight, picks, singles, nodes, complete)``.  The incumbent
    passed in must be feasible; only strictly lighter covers replace it.
    """
    n = len(closed)
    full = (1 << n) - 1
    degree = [c.bit_count() - 1 for c in closed]
    picks = []
    singles = []
    st = {
        "best": best,
        "picks": list(best_picks),
        "singles": list(best_singles),
        "nodes": 0,
        "aborted": False,
    }
    start = time.perf_counter()

    def dfs(res, forb, cost):
        st["nodes"] += 1
        if st["nodes"] > node_budget:
            st["aborted"] = True
            return
        if time_limit > 0 and st["nodes"] & 1023 == 0 and time.perf_counter() - start > time_limit:
            st["aborted"] = True
            return
        allowed = full & ~forb
        uncovered = full & ~res
        forced = []
        for v in _bits(uncovered):
            if not closed[v] & allowed:
                if not allow_single:
                    return
                forced.append(v)
        if forced:
            for v in forced:
                res |= 1 << v
            cost += len(forced)
            uncovered = full & ~res
            singles.extend(forced)
        try:
            if cost >= st["best"]:
                return
            if not uncovered:
                st["best"] = cost
                st["picks"] = list(picks)
                st["singles"] = list(singles)
                return
            coverage = sorted(
                ((closed[u] & uncovered).bit_count() for u in _bits(allowed)), reverse=True
            )
            lb = _cover_bound(coverage, uncovered.bit_count(), pick_cost, allow_single)
            if cost + lb >= st["best"]:
                return

            branch, branch_key = -1, None
            for v in _bits(uncovered):
                key = ((closed[v] & allowed).bit_count(), -degree[v])
                if branch_key is None or key < branch_key:
                    branch, branch_key = v, key
            cands = sorted(
                _bits(closed[branch] & allowed),
                key=lambda u: (-(closed[u] & uncovered).bit_count(), u),
            )
            f = forb
            for u in cands:
                if cost + pick_cost >= st["best"]:
                    break
                f |= 1 << u
                picks.append(u)
                dfs(res | closed[u], f, cost + pick_cost)
                picks.pop()
                if st["aborted"]:
                    return
            if allow_single and cost + 1 < st["best"]:
                singles.append(branch)
                dfs(res | (1 << branch), forb | closed[branch], cost + 1)
                singles.pop()
        finally:
            if forced:
                del singles[len(singles) - len(forced):]

    old_limit = sys.getrecursionlimit()
    sys.setrecursionlimit(max(old_limit, 4 * n + 1000))
    try:
        dfs(0, 0, 0)
    finally:
        sys.setrecursionlimit(old_limit)
    return st["best"], st["picks"], st["singles"], st["nodes"], not st["aborted"]


def brute_roman(closed):
    """Exhaustive over pick sets by increasing size; returns (weight, pick mask)."""
    n = len(closed)
    if n > BRUTE_HARD_CAP:
        raise ValueError(f"brute force limited to {BRUTE_HARD_CAP} vertices")
    best, best_mask = n, 0
    for k in range(1, n + 1):
        if 2 * k >= best:
            break
        for combo in combinations(range(n), k):
            cov = 0
            mask = 0
            for u in combo:
                cov |= closed[u]
                mask |= 1 << u
            w = 2 * k + n - cov.bit_count()
            if w < best:
                best, best_mask = w, mask
    return best, best_mask


def brute_dom(closed):
    """Smallest dominating set by increasing size; returns (size, mask)."""
    n = len(closed)
    if n > BRUTE_HARD_CAP:
        raise ValueError(f"brute force limited to {BRUTE_HARD_CAP} vertices")
    full = (1 << n) - 1
    for k in range(0, n + 1):
        for combo in combinations(range(n), k):
            cov = 0
            for u in combo:
                cov |= closed[u]
            if cov == full:
                return k, sum(1 << u for u in combo)
    raise AssertionError("unreachable: V dominates itself")
