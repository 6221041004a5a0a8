"""Deterministic explorer strategies.

Every strategy is a per-game instance: construct, then call
``next_moves(view)`` once per round. Strategies read the view's
append-only reveal/visit logs incrementally, so per-round work stays
proportional to what changed plus the number of moving agents.
"""

from __future__ import annotations

from .errors import StrategyInfeasibleError
from .game import ExplorerView
from .tree import ROOT


class IdleExplorer:
    """Baseline that never moves anyone."""

    name = "idle"

    def __init__(self, k: int):
        self.k = k

    def next_moves(self, view: ExplorerView) -> list[int]:
        return list(view.positions)


class SingleDfsExplorer:
    """Agent 0 walks a depth-first traversal of the revealed tree; the rest idle.

    Keeps, per vertex, the count of unvisited revealed vertices in its
    subtree and a cursor over its children. The cursor skips exhausted
    subtrees in O(1) amortized and is rewound when new vertices appear
    below an already-passed child, which makes the walk re-descend.
    """

    name = "single_dfs"

    def __init__(self, k: int):
        self.k = k
        self._log_pos = 0
        self._visit_pos = 0
        self._kids: list[list[int]] = []
        self._childpos: list[int] = []
        self._cursor: list[int] = []
        self._pending: list[int] = []

    def _grow(self, size: int) -> None:
        add = size - len(self._kids)
        if add > 0:
            self._kids.extend([] for _ in range(add))
            self._childpos.extend([0] * add)
            self._cursor.extend([0] * add)
            self._pending.extend([0] * add)

    def _sync(self, view: ExplorerView) -> None:
        log = view.reveal_log
        while self._log_pos < len(log):
            v = log[self._log_pos]
            self._log_pos += 1
            self._grow(v + 1)
            if v != ROOT:
                p = view.parent(v)
                self._kids[p].append(v)
                self._childpos[v] = len(self._kids[p]) - 1
            # count v as pending along its revealed ancestry, rewinding cursors
            self._pending[v] += 1
            while v != ROOT:
                p = view.parent(v)
                if self._cursor[p] > self._childpos[v]:
                    self._cursor[p] = self._childpos[v]
                self._pending[p] += 1
                v = p
        visits = view.visit_log()
        while self._visit_pos < len(visits):
            v = visits[self._visit_pos]
            self._visit_pos += 1
            while True:
                self._pending[v] -= 1
                if v == ROOT:
                    break
                v = view.parent(v)

    def next_moves(self, view: ExplorerView) -> list[int]:
        self._sync(view)
        moves = list(view.positions)
        if self.k == 0 or self._pending[ROOT] == 0:
            return moves
        pos = moves[0]
        kids = self._kids[pos]
        cur = self._cursor[pos]
        while cur < len(kids) and self._pending[kids[cur]] == 0:
            cur += 1
        self._cursor[pos] = cur
        if cur < len(kids):
            moves[0] = kids[cur]
        elif pos != ROOT:
            moves[0] = view.parent(pos)
        return moves


class PhaseBfsExplorer:
    """Breadth-style exploration in phases.

    At each phase start the unvisited leaves of the revealed tree become
    targets; each target gets a fresh agent that walks the root-to-target
    path one edge per round. A new phase begins once all walkers of the
    previous one have arrived. Needs a fresh agent per target over the
    whole game, so it is meant to run with k equal to the vertex budget.
    """

    name = "phase_bfs"

    def __init__(self, k: int):
        self.k = k
        self._phase = 0
        self._next_fresh = 0
        self._walks: list[tuple[int, list[int], int]] = []  # (agent, path, position index)

    def _start_phase(self, view: ExplorerView) -> None:
        self._phase += 1
        targets = sorted(
            v for v in view.reveal_log if not view.is_visited(v) and not view.children(v)
        )
        if not targets:
            return
        if self._next_fresh + len(targets) > self.k:
            raise StrategyInfeasibleError(
                f"phase {self._phase} needs {len(targets)} fresh agents, "
                f"only {self.k - self._next_fresh} of {self.k} remain"
            )
        for v in targets:
            agent = self._next_fresh
            self._next_fresh += 1
            path = []
            u = v
            while u != ROOT:
                path.append(u)
                u = view.parent(u)
            path.reverse()
            self._walks.append((agent, path, 0))

    def next_moves(self, view: ExplorerView) -> list[int]:
        if not self._walks:
            self._start_phase(view)
        moves = list(view.positions)
        still_walking = []
        for agent, path, idx in self._walks:
            moves[agent] = path[idx]
            if idx + 1 < len(path):
                still_walking.append((agent, path, idx + 1))
        self._walks = still_walking
        return moves


class GreedyFrontierExplorer:
    """Matches shallowest unvisited vertices to nearest agents, one step each.

    Each round, unvisited revealed vertices are taken in (depth, id) order
    and greedily matched to the closest unmatched agent (ties toward the
    lower agent index); matched agents step one edge along the tree path
    toward their target, everyone else stays. Matching is recomputed from
    scratch every round.
    """

    name = "greedy_frontier"

    def __init__(self, k: int):
        self.k = k
        self._log_pos = 0
        self._buckets: dict[int, list[int]] = {}
        self._starts: dict[int, int] = {}
        self._dirty: set[int] = set()

    def _sync(self, view: ExplorerView) -> None:
        log = view.reveal_log
        while self._log_pos < len(log):
            v = log[self._log_pos]
            self._log_pos += 1
            if view.is_visited(v):
                continue
            d = view.depth(v)
            bucket = self._buckets.setdefault(d, [])
            if bucket and bucket[-1] > v:
                self._dirty.add(d)
            bucket.append(v)
        for d in self._dirty:
            self._buckets[d].sort()
            self._starts[d] = 0
        self._dirty.clear()

    def _iter_targets(self, view: ExplorerView):
        for d in sorted(self._buckets):
            bucket = self._buckets[d]
            start = self._starts.get(d, 0)
            # drop the fully consumed prefix once, then lazily skip the rest
            while start < len(bucket) and view.is_visited(bucket[start]):
                start += 1
            self._starts[d] = start
            for idx in range(start, len(bucket)):
                v = bucket[idx]
                if not view.is_visited(v):
                    yield v

    def next_moves(self, view: ExplorerView) -> list[int]:
        self._sync(view)
        k = self.k
        positions = list(view.positions)

        by_branch: dict[int, list[int]] = {}
        for x, p in enumerate(positions):
            if p != ROOT:
                by_branch.setdefault(view.branch(p), []).append(x)

        # agents threaded in (depth, index) order through a doubly linked
        # list with sentinel slot k, so matching removes them in O(1)
        nxt = [0] * (k + 1)
        prv = [0] * (k + 1)
        prev_slot = k
        for x in sorted(range(k), key=lambda x: (view.depth(positions[x]), x)):
            nxt[prev_slot] = x
            prv[x] = prev_slot
            prev_slot = x
        nxt[prev_slot] = k
        prv[k] = prev_slot

        matched = bytearray(k)
        moves = list(positions)
        remaining = k

        for v in self._iter_targets(view):
            if remaining == 0:
                break
            dv = view.depth(v)
            bv = view.branch(v)
            best_d = None
            best_x = -1
            for x in by_branch.get(bv, ()):  # exact distance inside the branch
                if matched[x]:
                    continue
                d = view.distance(positions[x], v)
                if best_d is None or (d, x) < (best_d, best_x):
                    best_d, best_x = d, x
            # outside the branch every path runs through the root, so the
            # first non-branch agent in (depth, index) order is nearest
            x = nxt[k]
            while x != k:
                if view.branch(positions[x]) != bv:
                    d = view.depth(positions[x]) + dv
                    if best_d is None or (d, x) < (best_d, best_x):
                        best_d, best_x = d, x
                    break
                x = nxt[x]
            if best_x < 0:
                continue
            matched[best_x] = 1
            remaining -= 1
            nxt[prv[best_x]] = nxt[best_x]
            prv[nxt[best_x]] = prv[best_x]
            moves[best_x] = self._step_toward(view, positions[best_x], v)
        return moves

    @staticmethod
    def _step_toward(view: ExplorerView, pos: int, v: int) -> int:
        dp = view.depth(pos)
        if dp < view.depth(v) and view.ancestor_at_depth(v, dp) == pos:
            return view.ancestor_at_depth(v, dp + 1)
        return view.parent(pos)


class IdleThenExplorer:
    """Idles through the first ``switch_round`` rounds, then delegates.

    Exercises the zero-agents-in-branch behavior of the revealer: parking
    everyone at the root through the first checkpoint makes every branch
    agent count zero there.
    """

    name = "idle_then_greedy"

    def __init__(self, k: int, switch_round: int, inner=None):
        self.k = k
        self.switch_round = switch_round
        self.inner = inner if inner is not None else GreedyFrontierExplorer(k)
        self.name = f"idle_then_{self.inner.name}"

    def next_moves(self, view: ExplorerView) -> list[int]:
        if view.round + 1 <= self.switch_round:
            return list(view.positions)
        return self.inner.next_moves(view)


STRATEGY_NAMES = ("idle", "single_dfs", "phase_bfs", "greedy_frontier")


def make_explorer(name: str, k: int, switch_round: int | None = None):
    """Instantiate a strategy by CLI name."""
    if name == "idle":
        return IdleExplorer(k)
    if name == "single_dfs":
        return SingleDfsExplorer(k)
    if name == "phase_bfs":
        return PhaseBfsExplorer(k)
    if name == "greedy_frontier":
        return GreedyFrontierExplorer(k)
    if name == "idle_then_greedy":
        if switch_round is None:
            raise ValueError("idle_then_greedy needs a switch round")
        return IdleThenExplorer(k, switch_round)
    raise ValueError(f"unknown explorer {name!r}")
