"""Offline optimum machinery: lower bounds, tour schedules, exact search.

The offline problem: k agents start at the root of a fully known tree
and must stand on every vertex at least once; the cost is the number of
rounds until the last new vertex is reached (no return required).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

from .errors import ResourceLimitError
from .tree import ROOT, RootedTree


def trivial_lb(n: int, height: int, k: int) -> int:
    """max(height, ceil((n-1)/k)): depth takes rounds, and k agents reach
    at most k new vertices per round."""
    if n < 1 or k < 1:
        raise ValueError(f"need n >= 1 and k >= 1 (got n={n}, k={k})")
    return max(height, -(-(n - 1) // k))


@dataclass(frozen=True)
class Schedule:
    """Per-agent walks (positions per round, index 0 = start at root)."""

    walks: tuple[tuple[int, ...], ...]
    rounds: int

    def to_json_obj(self) -> dict:
        return {"rounds": self.rounds, "walks": [list(w) for w in self.walks]}


def validate_schedule(tree: RootedTree, schedule: Schedule) -> None:
    """Assert adjacency, full coverage, and makespan consistency."""
    covered = {ROOT}
    max_moves = 0
    for w, walk in enumerate(schedule.walks):
        if not walk or walk[0] != ROOT:
            raise ValueError(f"walk {w} does not start at the root")
        for a, b in zip(walk, walk[1:]):
            if a != b and tree.parent[a] != b and tree.parent[b] != a:
                raise ValueError(f"walk {w} jumps from {a} to {b}")
        covered.update(walk)
        max_moves = max(max_moves, len(walk) - 1)
    if len(covered) != tree.n:
        missing = next(v for v in range(tree.n) if v not in covered)
        raise ValueError(f"schedule misses vertex {missing}")
    if schedule.rounds != max_moves:
        raise ValueError(f"rounds field {schedule.rounds} != longest walk {max_moves}")


def euler_tour(tree: RootedTree) -> list[int]:
    """Vertex sequence of the doubled-edge tour, children in id order.

    Length 2n-1; starts and ends at the root.
    """
    tour = [ROOT]
    stack: list[tuple[int, int]] = [(ROOT, 0)]
    while stack:
        v, idx = stack.pop()
        kids = tree.children[v]
        if idx < len(kids):
            stack.append((v, idx + 1))
            c = kids[idx]
            tour.append(c)
            stack.append((c, 0))
        elif stack:
            tour.append(stack[-1][0])
    return tour


def euler_schedule(tree: RootedTree, k: int) -> Schedule:
    """Split the doubled-edge tour into k contiguous segments.

    Agent j walks from the root to the start of segment j along the tree
    path and then follows its segment, so the makespan is at most
    height + ceil((2n-2)/k). Trailing agents may get empty segments.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    tour = euler_tour(tree)
    edges = len(tour) - 1  # 2n - 2
    seg = -(-edges // k) if edges else 0
    walks = []
    for j in range(k):
        lo = j * seg
        hi = min((j + 1) * seg, edges)
        if edges == 0 or lo >= edges:
            walks.append((ROOT,))
            continue
        start = tour[lo]
        walk = tree.path_from_root(start)
        walk.extend(tour[lo + 1 : hi + 1])
        walks.append(tuple(walk))
    rounds = max(len(w) - 1 for w in walks)
    return Schedule(walks=tuple(walks), rounds=rounds)


def brute_opt(
    tree: RootedTree,
    k: int,
    cap: int | None = None,
    state_limit: int = 500_000,
) -> int | None:
    """Exact optimum by breadth-first search over joint configurations.

    States are (sorted agent positions, visited bitmask); agents are
    interchangeable. Meant for tiny instances (n <= 8, k <= 2). Returns
    None when ``cap`` rounds pass without finishing; raises
    ResourceLimitError when the state space exceeds ``state_limit``.
    """
    n = tree.n
    if cap is None:
        cap = 2 * n
    full = (1 << n) - 1
    start = (tuple([ROOT] * k), 1)
    if start[1] == full:
        return 0
    seen = {start}
    frontier = [start]
    options = [[v] + [p for p in [tree.parent[v]] if p is not None] + tree.children[v] for v in range(n)]
    for t in range(1, cap + 1):
        next_frontier = []
        for positions, mask in frontier:
            for joint in itertools.product(*(options[p] for p in positions)):
                new_mask = mask
                for v in joint:
                    new_mask |= 1 << v
                state = (tuple(sorted(joint)), new_mask)
                if state in seen:
                    continue
                if new_mask == full:
                    return t
                seen.add(state)
                if len(seen) > state_limit:
                    raise ResourceLimitError(
                        f"brute-force search exceeded {state_limit} states (n={n}, k={k})"
                    )
                next_frontier.append(state)
        if not next_frontier:
            break
        frontier = next_frontier
    return None


@dataclass(frozen=True)
class BoundsReport:
    """Offline bounds for one tree, optionally paired with an online result."""

    trivial_lb: int
    euler_ub: int
    brute_opt: int | None
    online_rounds: int | None
    ratio_lb: Fraction | None       # online / euler_ub, a certified ratio floor
    ratio_estimate: Fraction | None  # online / trivial_lb

    def to_json_obj(self) -> dict:
        def frac(f: Fraction | None) -> list[int] | None:
            return None if f is None else [f.numerator, f.denominator]

        return {
            "trivial_lb": self.trivial_lb,
            "euler_ub": self.euler_ub,
            "brute_opt": self.brute_opt,
            "online_rounds": self.online_rounds,
            "ratio_lb": frac(self.ratio_lb),
            "ratio_estimate": frac(self.ratio_estimate),
        }


def bounds_report(
    tree: RootedTree,
    k: int,
    online_rounds: int | None = None,
    brute: bool | None = None,
) -> BoundsReport:
    """Assemble the bound fields for one instance.

    ``brute`` None means attempt the exact search only on tiny instances;
    True forces an attempt (resource errors degrade to an absent field).
    """
    stats = tree.stats()
    lb = trivial_lb(stats.n, stats.height, k)
    ub = euler_schedule(tree, k).rounds
    exact: int | None = None
    if brute is True or (brute is None and stats.n <= 8 and k <= 2):
        try:
            exact = brute_opt(tree, k)
        except ResourceLimitError:
            exact = None
    ratio_lb = Fraction(online_rounds, ub) if online_rounds is not None and ub > 0 else None
    ratio_est = Fraction(online_rounds, lb) if online_rounds is not None and lb > 0 else None
    return BoundsReport(
        trivial_lb=lb,
        euler_ub=ub,
        brute_opt=exact,
        online_rounds=online_rounds,
        ratio_lb=ratio_lb,
        ratio_estimate=ratio_est,
    )
