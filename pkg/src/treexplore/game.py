"""Round-based two-player exploration game engine.

One game round: the explorer moves each agent along at most one edge,
newly reached vertices join the visited set, then the revealer may attach
subtrees at vertices that were unvisited at the end of the previous
round. The game ends at the start of the first round in which every
vertex of the current tree is visited.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Protocol, Sequence

from .errors import AttachmentViolation, IntegrityError, MoveViolation, VertexNotFoundError
from .tree import ROOT, RootedTree, TreeStats, attach_path_with_star, decode_tree


@dataclass(frozen=True)
class Attachment:
    """One revealer move: a path plus star hung below vertex ``at``."""

    at: int
    path_len: int
    leaf_count: int

    def to_json_obj(self) -> dict:
        return {"at": self.at, "path_len": self.path_len, "leaves": self.leaf_count}

    @staticmethod
    def from_json_obj(obj: dict) -> "Attachment":
        return Attachment(at=obj["at"], path_len=obj["path_len"], leaf_count=obj["leaves"])


@dataclass(frozen=True)
class RoundRecord:
    t: int
    moves: tuple[int, ...]
    attachments: tuple[Attachment, ...]
    newly_visited: int


@dataclass(frozen=True)
class Outcome:
    finished: bool
    final_round: int
    final_stats: TreeStats


@dataclass
class Transcript:
    """Complete deterministic record of one game; replayable bit for bit."""

    params: dict
    rounds: list[RoundRecord]
    checkpoints: list  # CheckpointRecord entries from the revealer, if any
    outcome: Outcome
    # convenience handle set by play(); not serialized, absent after a reload
    final_state: "GameState | None" = None


class GameState:
    """The live triple (tree, visited set, agent assignment) plus bookkeeping.

    ``newly_visited`` holds the vertices first reached by the current
    round's moves; revealers consult it because attachment eligibility is
    judged against the visited set from the end of the previous round.
    """

    __slots__ = (
        "tree",
        "positions",
        "visited",
        "visited_count",
        "round",
        "first_visit",
        "newly_visited",
        "visit_log",
    )

    def __init__(self, tree: RootedTree, k: int):
        self.tree = tree
        self.positions: list[int] = [ROOT] * k
        self.visited = bytearray(tree.n)
        self.visited[ROOT] = 1
        self.visited_count = 1
        self.round = 0
        self.first_visit: list[int] = [-1] * tree.n
        self.first_visit[ROOT] = 0
        self.newly_visited: frozenset[int] = frozenset()
        self.visit_log: list[int] = [ROOT]

    @property
    def k(self) -> int:
        return len(self.positions)

    def is_visited_before_round(self, v: int) -> bool:
        """Visited status as of the end of the previous round."""
        return bool(self.visited[v]) and v not in self.newly_visited


def is_explored(state: GameState) -> bool:
    return state.visited_count == state.tree.n


def validate_moves(state: GameState, proposed: Sequence[int]) -> MoveViolation | None:
    """Check one joint move; returns the first violation, or None if legal.

    A proposed position must equal the agent's current vertex or be its
    parent or one of its children in the current tree.
    """
    if len(proposed) != state.k:
        return MoveViolation.wrong_length(len(proposed), state.k)
    tree = state.tree
    positions = state.positions
    for i, target in enumerate(proposed):
        origin = positions[i]
        if target == origin:
            continue
        if not (0 <= target < tree.n):
            return MoveViolation(i, origin, target)
        if tree.parent[target] != origin and tree.parent[origin] != target:
            return MoveViolation(i, origin, target)
    return None


def _commit_moves(state: GameState, moves: Sequence[int]) -> None:
    """Advance one round: validate, move agents, update the visited set."""
    t = state.round + 1
    if len(moves) != state.k:
        raise MoveViolation.wrong_length(len(moves), state.k, round=t)
    positions = state.positions
    if list(moves) == positions:
        # everyone stays; positions are always visited already
        state.newly_visited = frozenset()
        state.round = t
        return
    violation = validate_moves(state, moves)
    if violation is not None:
        violation.round = t
        raise violation
    newly = []
    visited = state.visited
    for v in moves:
        if not visited[v]:
            visited[v] = 1
            state.first_visit[v] = t
            newly.append(v)
    state.visited_count += len(newly)
    state.positions = list(moves)
    state.newly_visited = frozenset(newly)
    for v in newly:
        state.visit_log.append(v)
    state.round = t


def _commit_attachments(state: GameState, attachments: Sequence[Attachment]) -> list[int]:
    """Apply revealer attachments; returns the created ids in order.

    Targets must belong to the tree as it stood at the start of the round
    and must not have been visited before the round began.
    """
    tree = state.tree
    n_before = tree.n
    created: list[int] = []
    for att in attachments:
        if not (0 <= att.at < n_before):
            raise VertexNotFoundError(f"attachment target {att.at} not in the previous round's tree")
        if state.is_visited_before_round(att.at):
            raise AttachmentViolation(
                f"attachment at visited vertex {att.at}", att.at, round=state.round
            )
        created.extend(attach_path_with_star(tree, att.at, att.path_len, att.leaf_count))
    if created:
        grow = tree.n - n_before
        state.visited.extend(b"\x00" * grow)
        state.first_visit.extend([-1] * grow)
    return created


def apply_round(state: GameState, moves: Sequence[int], attachments: Sequence[Attachment]) -> GameState:
    """Apply one full round (moves then attachments) in place."""
    _commit_moves(state, moves)
    _commit_attachments(state, attachments)
    return state


class ExplorerView:
    """What a strategy is allowed to see.

    In ``game`` mode the full current tree, visited set, positions, and
    round history are exposed. In ``local`` mode only vertices adjacent
    to a visited vertex are exposed: children of an unvisited vertex stay
    hidden until it is first visited.

    ``reveal_log`` and ``visit_log`` are append-only; strategies track how
    much of each they have consumed and stay incremental.
    """

    __slots__ = ("mode", "_state", "history", "reveal_log", "_revealed")

    def __init__(self, state: GameState, mode: str = "game", history: list | None = None):
        if mode not in ("game", "local"):
            raise ValueError(f"unknown view mode {mode!r}")
        self.mode = mode
        self._state = state
        self.history = history if history is not None else []
        if mode == "game":
            self.reveal_log: list[int] = list(range(state.tree.n))
            self._revealed = None
        else:
            self._revealed = bytearray(state.tree.n)
            self.reveal_log = []
            self._reveal(ROOT)
            for c in state.tree.children[ROOT]:
                self._reveal(c)

    # -- engine-side maintenance -------------------------------------------

    def _reveal(self, v: int) -> None:
        if not self._revealed[v]:
            self._revealed[v] = 1
            self.reveal_log.append(v)

    def observe_moves(self) -> None:
        if self.mode == "local":
            tree = self._state.tree
            if len(self._revealed) < tree.n:
                self._revealed.extend(b"\x00" * (tree.n - len(self._revealed)))
            # sorted: the reveal log feeds strategy tie-breaking
            for v in sorted(self._state.newly_visited):
                for c in tree.children[v]:
                    self._reveal(c)

    def observe_attachments(self, created: Sequence[int]) -> None:
        if self.mode == "game":
            self.reveal_log.extend(created)
        else:
            tree = self._state.tree
            if len(self._revealed) < tree.n:
                self._revealed.extend(b"\x00" * (tree.n - len(self._revealed)))
            for v in created:
                # a new vertex is exposed only if its parent is visited
                if self._state.visited[tree.parent[v]]:
                    self._reveal(v)

    # -- strategy-facing queries -------------------------------------------

    @property
    def round(self) -> int:
        return self._state.round

    @property
    def k(self) -> int:
        return self._state.k

    @property
    def positions(self) -> tuple[int, ...]:
        return tuple(self._state.positions)

    def num_revealed(self) -> int:
        return len(self.reveal_log)

    def is_revealed(self, v: int) -> bool:
        if self.mode == "game":
            return v in self._state.tree
        return v < len(self._revealed) and bool(self._revealed[v])

    def is_visited(self, v: int) -> bool:
        return bool(self._state.visited[v])

    def parent(self, v: int) -> int | None:
        return self._state.tree.parent[v]

    def depth(self, v: int) -> int:
        return self._state.tree.depth[v]

    def children(self, v: int) -> list[int]:
        if self.mode == "local" and not self._state.visited[v]:
            return []
        return self._state.tree.children[v]

    def branch(self, v: int) -> int:
        """Depth-1 ancestor of v, or -1 for the root."""
        return self._state.tree.branch[v]

    def distance(self, u: int, v: int) -> int:
        return self._state.tree.distance(u, v)

    def ancestor_at_depth(self, v: int, d: int) -> int:
        return self._state.tree.ancestor_at_depth(v, d)

    def visit_log(self) -> list[int]:
        return self._state.visit_log


class Explorer(Protocol):
    name: str

    def next_moves(self, view: ExplorerView) -> Sequence[int]: ...


class Revealer(Protocol):
    name: str

    def initial_tree(self) -> RootedTree: ...

    def reveal(self, state: GameState, t: int) -> tuple[list[Attachment], object | None]: ...


def play(
    explorer: Explorer,
    revealer: Revealer,
    k: int,
    round_cap: int,
    view_mode: str = "game",
    params_meta: dict | None = None,
) -> Transcript:
    """Run one full game and return its transcript.

    Termination is checked at the start of each round, so ``final_round``
    counts completed move rounds. ``round_cap`` bounds the game length;
    hitting it leaves ``finished`` false.
    """
    if round_cap < 0:
        raise ValueError("round_cap must be >= 0")
    state = GameState(revealer.initial_tree().copy(), k)
    params = dict(params_meta) if params_meta else {}
    params.setdefault("explorer", getattr(explorer, "name", explorer.__class__.__name__))
    params.setdefault("revealer", getattr(revealer, "name", revealer.__class__.__name__))
    params.setdefault("k", k)
    params.setdefault("cap", round_cap)
    params.setdefault("view", view_mode)
    if params["revealer"] != "lemma":
        # adversary trees are derivable from (n, L, m); embed anything else
        params.setdefault("tree", {"n": state.tree.n, "parent": list(state.tree.parent)})
    rounds: list[RoundRecord] = []
    checkpoints: list = []
    view = ExplorerView(state, mode=view_mode, history=rounds)
    while True:
        if is_explored(state):
            finished = True
            break
        if state.round >= round_cap:
            finished = False
            break
        t = state.round + 1
        moves = explorer.next_moves(view)
        _commit_moves(state, moves)
        view.observe_moves()
        attachments, record = revealer.reveal(state, t)
        created = _commit_attachments(state, attachments)
        view.observe_attachments(created)
        if record is not None:
            checkpoints.append(record)
        rounds.append(
            RoundRecord(
                t=t,
                moves=tuple(moves),
                attachments=tuple(attachments),
                newly_visited=len(state.newly_visited),
            )
        )
    outcome = Outcome(finished=finished, final_round=state.round, final_stats=state.tree.stats())
    return Transcript(
        params=params, rounds=rounds, checkpoints=checkpoints, outcome=outcome, final_state=state
    )


def replay_transcript(transcript: Transcript, initial: RootedTree, k: int | None = None) -> GameState:
    """Re-apply all recorded rounds on a fresh state; returns the end state.

    Raises IntegrityError if a recorded round is illegal or its recorded
    newly-visited count disagrees with the replay.
    """
    if k is None:
        k = transcript.params.get("k")
        if k is None:
            raise IntegrityError("transcript params carry no team size")
    state = GameState(initial.copy(), k)
    for rec in transcript.rounds:
        if rec.t != state.round + 1:
            raise IntegrityError(f"round records out of order at t={rec.t}", round=rec.t)
        try:
            apply_round(state, rec.moves, rec.attachments)
        except (MoveViolation, AttachmentViolation, VertexNotFoundError) as exc:
            raise IntegrityError(f"replay failed at round {rec.t}: {exc}", round=rec.t) from exc
        if len(state.newly_visited) != rec.newly_visited:
            raise IntegrityError(
                f"round {rec.t} records {rec.newly_visited} newly visited vertices, "
                f"replay produced {len(state.newly_visited)}",
                round=rec.t,
            )
    return state


# -- transcript serialization ----------------------------------------------


def transcript_to_json(transcript: Transcript) -> str:
    """Stable-key-order JSON with LF endings."""
    doc = {
        "params": transcript.params,
        "rounds": [
            {
                "t": r.t,
                "moves": list(r.moves),
                "attachments": [a.to_json_obj() for a in r.attachments],
                "newly_visited": r.newly_visited,
            }
            for r in transcript.rounds
        ],
        "checkpoints": [c.to_json_obj() for c in transcript.checkpoints],
        "outcome": {
            "finished": transcript.outcome.finished,
            "final_round": transcript.outcome.final_round,
            "n": transcript.outcome.final_stats.n,
            "height": transcript.outcome.final_stats.height,
        },
    }
    return json.dumps(doc, indent=2) + "\n"


def transcript_from_json(text: str | bytes) -> Transcript:
    from .adversary import CheckpointRecord  # local import to avoid a cycle

    doc = json.loads(text)
    rounds = [
        RoundRecord(
            t=r["t"],
            moves=tuple(r["moves"]),
            attachments=tuple(Attachment.from_json_obj(a) for a in r["attachments"]),
            newly_visited=r["newly_visited"],
        )
        for r in doc["rounds"]
    ]
    checkpoints = [CheckpointRecord.from_json_obj(c) for c in doc.get("checkpoints", [])]
    out = doc["outcome"]
    outcome = Outcome(
        finished=out["finished"],
        final_round=out["final_round"],
        final_stats=TreeStats(n=out["n"], height=out["height"], max_degree=-1, root_ecc=out["height"]),
    )
    return Transcript(params=doc["params"], rounds=rounds, checkpoints=checkpoints, outcome=outcome)


def initial_tree_of(transcript: Transcript) -> RootedTree:
    """Reconstruct T_0 for a transcript (derived for the adversary, embedded for fixed)."""
    params = transcript.params
    if params.get("revealer") == "lemma":
        from .adversary import AdversaryParams

        return AdversaryParams.derive(
            n=params["n"], L=params["L"], m=params["m"], k=params["k"], mode=params["mode"],
            warn=False,
        ).initial_tree()
    tree_doc = params.get("tree")
    if tree_doc is None:
        raise IntegrityError("fixed-revealer transcript carries no embedded tree")
    return decode_tree(json.dumps(tree_doc))
