"""The adaptive revealer that forces long exploration games.

The construction starts from a star of ``ceil(n/(2L))`` paths of length
``L``. At checkpoint rounds ``t_i = L * C(i+1, 2)`` it picks, per root
branch, one unvisited vertex at depth ``L*i`` (judged by the visited set
from the end of the previous round), keeps the fraction ``alpha`` of them
with the fewest agents in their branch, and hangs a path-plus-star gadget
below each survivor. Agents near a survivor only ever see enough new
leaves that they cannot finish them before the next checkpoint, while
agents elsewhere are too far away to help in time.

All threshold quantities (``ceil(alpha * count)``, the team-size bound)
are computed with exact integer arithmetic so that boundary cases never
wobble with floating point.
"""

from __future__ import annotations

import math
import warnings
from collections import Counter
from dataclasses import dataclass

from .errors import InfeasibleParamsError, NoBranchError
from .game import Attachment, GameState
from .tree import ROOT, RootedTree, make_path_star


def _least_root_scaled(target: int, n: int, m: int) -> int:
    """Least integer s >= 0 with s**m * n >= target (all integers)."""
    if target <= 0:
        return 0
    lo, hi = 0, 1
    while hi**m * n < target:
        hi *= 2
    while lo < hi:
        mid = (lo + hi) // 2
        if mid**m * n >= target:
            hi = mid
        else:
            lo = mid + 1
    return lo


@dataclass(frozen=True)
class Alpha:
    """The selection fraction (2L/n)^(1/m), kept in exact form.

    ``ceil_mul(count)`` evaluates ceil(alpha * count) without floating
    point: it is the least integer s with s^m * n >= count^m * 2L.
    """

    n: int
    L: int
    m: int

    def __float__(self) -> float:
        return (2 * self.L / self.n) ** (1.0 / self.m)

    def ceil_mul(self, count: int) -> int:
        return _least_root_scaled(count**self.m * 2 * self.L, self.n, self.m)

    def __repr__(self) -> str:
        return f"Alpha((2*{self.L}/{self.n})^(1/{self.m}) ~ {float(self):.6f})"


def max_team_size(n: int, L: int, m: int) -> int:
    """Largest team the round-floor guarantee covers, floor-exact.

    Evaluates floor(n^(1+1/m) / (6 L (m+1)^2 (2L)^(1/m))) as the greatest
    integer k with (6 L (m+1)^2 k)^m * 2L <= n^(m+1).
    """
    _check_preconditions(n, L, m)
    c = 6 * L * (m + 1) ** 2
    rhs = n ** (m + 1)

    def fits(k: int) -> bool:
        return (c * k) ** m * 2 * L <= rhs

    hi = 1
    while fits(hi):
        hi *= 2
    lo = hi // 2  # fits(lo) holds, fits(hi) does not
    while lo + 1 < hi:
        mid = (lo + hi) // 2
        if fits(mid):
            lo = mid
        else:
            hi = mid
    return lo if fits(lo) else 0


def _check_preconditions(n: int, L: int, m: int) -> None:
    if L < 1 or m < 1 or n < 1:
        raise InfeasibleParamsError(
            f"n, L, m must be positive (got n={n}, L={L}, m={m})", violated="n,L,m >= 1"
        )
    if n < L * 16**m:
        raise InfeasibleParamsError(
            f"n >= L*16^m required: {n} < {L * 16 ** m}", violated="n >= L*16^m"
        )


MODES = ("strict", "repaired")


@dataclass(frozen=True)
class AdversaryParams:
    """Validated parameter tuple for one adversary game."""

    n: int
    L: int
    m: int
    k: int
    alpha: Alpha
    checkpoints: tuple[int, ...]
    round_floor: int  # the last checkpoint; play cannot end before it
    mode: str
    max_k: int

    @staticmethod
    def derive(n: int, L: int, m: int, k: int, mode: str = "repaired", warn: bool = True) -> "AdversaryParams":
        _check_preconditions(n, L, m)
        if mode not in MODES:
            raise InfeasibleParamsError(f"unknown mode {mode!r}", violated="mode in strict|repaired")
        if k < 1:
            raise InfeasibleParamsError(f"k must be positive (got {k})", violated="k >= 1")
        max_k = max_team_size(n, L, m)
        if k > max_k and warn:
            warnings.warn(
                f"team size k={k} exceeds the guaranteed bound {max_k} for "
                f"(n={n}, L={L}, m={m}); proceeding, but the round floor may not hold",
                stacklevel=3,
            )
        checkpoints = tuple(L * math.comb(i + 1, 2) for i in range(1, m))
        return AdversaryParams(
            n=n,
            L=L,
            m=m,
            k=k,
            alpha=Alpha(n=n, L=L, m=m),
            checkpoints=checkpoints,
            round_floor=L * math.comb(m, 2),
            mode=mode,
            max_k=max_k,
        )

    @property
    def branch_count(self) -> int:
        return -(-self.n // (2 * self.L))  # ceil(n / 2L)

    def initial_tree(self) -> RootedTree:
        return make_path_star(self.branch_count, self.L)

    def budget_limit(self) -> int:
        """Vertex budget the construction must respect when k <= max_k."""
        if self.mode == "strict":
            return self.n
        return -(-14 * self.n // 10)  # ceil(1.4 n)


def derive_params(n: int, L: int, m: int, k: int, mode: str = "repaired", warn: bool = True) -> AdversaryParams:
    return AdversaryParams.derive(n=n, L=L, m=m, k=k, mode=mode, warn=warn)


def initial_tree(params: AdversaryParams) -> RootedTree:
    return params.initial_tree()


def branch_agent_count(state: GameState, v: int) -> int:
    """Number of agents currently inside v's root branch.

    Agents parked on the root are in no branch and count toward nothing.
    """
    if v == ROOT:
        raise NoBranchError("the root belongs to no branch")
    state.tree._require(v)
    b = state.tree.branch[v]
    return sum(1 for p in state.positions if p != ROOT and state.tree.branch[p] == b)


def checkpoint_candidates(state: GameState, i: int, params: AdversaryParams) -> list[int]:
    """One representative per branch at depth L*i, unvisited as of the previous round.

    Eligibility uses the visited set from the end of round t_i - 1, so a
    vertex an agent stepped onto this very round still qualifies. The
    smallest eligible id represents its branch; output is id-ascending.
    """
    tree = state.tree
    taken: set[int] = set()
    reps: list[int] = []
    for v in tree.vertices_at_depth(params.L * i):
        if state.is_visited_before_round(v):
            continue
        b = tree.branch[v]
        if b not in taken:
            taken.add(b)
            reps.append(v)
    return reps


def select_targets(candidates: list[int], a_values: dict[int, int], alpha: Alpha) -> list[int]:
    """The ceil(alpha*|candidates|) entries with fewest nearby agents.

    Ties break toward smaller ids; the result is returned id-ascending.
    """
    if not candidates:
        return []
    count = min(len(candidates), alpha.ceil_mul(len(candidates)))
    chosen = sorted(candidates, key=lambda v: (a_values[v], v))[:count]
    chosen.sort()
    return chosen


def gadget_spec(i: int, a: int, params: AdversaryParams) -> tuple[int, int]:
    """Shape of the gadget hung below a selected vertex at checkpoint i.

    Returns (path length, leaf count). Strict mode uses the raw agent
    count, so a = 0 yields an empty star; repaired mode floors the count
    at one so every selected vertex keeps a reachable descendant level.
    """
    mult = a if params.mode == "strict" else max(a, 1)
    return (params.L - 1, params.L * (i + 1) * mult)


@dataclass(frozen=True)
class CheckpointRecord:
    """Everything the revealer computed at one checkpoint."""

    i: int
    K: tuple[int, ...]
    a_values: dict[int, int]
    S: tuple[int, ...]
    gadgets: tuple[Attachment, ...]

    def to_json_obj(self) -> dict:
        return {
            "i": self.i,
            "K": list(self.K),
            "a": {str(v): c for v, c in self.a_values.items()},
            "S": list(self.S),
            "gadgets": [g.to_json_obj() for g in self.gadgets],
        }

    @staticmethod
    def from_json_obj(obj: dict) -> "CheckpointRecord":
        return CheckpointRecord(
            i=obj["i"],
            K=tuple(obj["K"]),
            a_values={int(v): c for v, c in obj["a"].items()},
            S=tuple(obj["S"]),
            gadgets=tuple(Attachment.from_json_obj(g) for g in obj["gadgets"]),
        )


class CheckpointRevealer:
    """Revealer that grows gadgets at checkpoint rounds and idles otherwise."""

    name = "lemma"

    def __init__(self, params: AdversaryParams):
        self.params = params
        self._round_to_level = {t: i + 1 for i, t in enumerate(params.checkpoints)}

    def initial_tree(self) -> RootedTree:
        return self.params.initial_tree()

    def reveal(self, state: GameState, t: int) -> tuple[list[Attachment], CheckpointRecord | None]:
        i = self._round_to_level.get(t)
        if i is None:
            return [], None
        params = self.params
        candidates = checkpoint_candidates(state, i, params)
        tree = state.tree
        counts = Counter(
            tree.branch[p] for p in state.positions if p != ROOT
        )
        a_values = {v: counts.get(tree.branch[v], 0) for v in candidates}
        selected = select_targets(candidates, a_values, params.alpha)
        gadgets = []
        for v in selected:
            path_len, leaf_count = gadget_spec(i, a_values[v], params)
            gadgets.append(Attachment(at=v, path_len=path_len, leaf_count=leaf_count))
        record = CheckpointRecord(
            i=i,
            K=tuple(candidates),
            a_values=a_values,
            S=tuple(selected),
            gadgets=tuple(gadgets),
        )
        return gadgets, record


class FixedTreeRevealer:
    """Supplies a known tree up front and never attaches anything."""

    name = "fixed"

    def __init__(self, tree: RootedTree):
        self._tree = tree

    def initial_tree(self) -> RootedTree:
        return self._tree

    def reveal(self, state: GameState, t: int) -> tuple[list[Attachment], None]:
        return [], None


def fixed_tree_revealer(tree: RootedTree) -> FixedTreeRevealer:
    return FixedTreeRevealer(tree)
