"""Transcript verification for adversary games.

Replays the recorded moves and attachments (never the strategies), cross
checks every checkpoint record against a fresh recomputation, and then
evaluates the construction's claims with exact integer comparisons:

* claim1 (height growth): after checkpoint i the tree height is at most
  L*(i+1); exactly that in repaired mode whenever something was selected.
* claim2 (survivor propagation): the next checkpoint finds exactly one
  candidate branch per previously selected vertex, so |K_{i+1}| = |S_i|;
  asserted in strict mode only when every selected vertex had agents
  nearby (the zero-agent case is the documented gap).
* claim3 (selection envelope): alpha^i * n/(2L) <= |S_i| <= (2alpha)^i * n/(2L);
  the lower bound is asserted in repaired mode, the upper in both.
* root passage: a gadget leaf visited before the next checkpoint must
  have been reached by an agent that already sat in its branch when the
  gadget was created.
* the round floor, the final height, and the vertex budget.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field

from ..adversary import (
    AdversaryParams,
    CheckpointRecord,
    checkpoint_candidates,
    gadget_spec,
    select_targets,
)
from ..errors import IntegrityError, TreexploreError
from ..game import Attachment, GameState, Transcript, _commit_attachments, _commit_moves
from ..tree import ROOT


@dataclass(frozen=True)
class CheckResult:
    """One verified statement with the numbers that were compared."""

    name: str
    checkpoint: int | None
    ok: bool
    asserted: bool  # unasserted results are informational (vacuous or mode-exempt)
    note: str
    values: dict

    def to_json_obj(self) -> dict:
        return {
            "name": self.name,
            "checkpoint": self.checkpoint,
            "ok": self.ok,
            "asserted": self.asserted,
            "note": self.note,
            "values": self.values,
        }


@dataclass
class VerificationReport:
    mode: str
    checks: list[CheckResult]
    budget: dict
    claims_passed: int = 0
    claims_failed: int = 0

    def finalize(self) -> "VerificationReport":
        self.claims_passed = sum(1 for c in self.checks if c.asserted and c.ok)
        self.claims_failed = sum(1 for c in self.checks if c.asserted and not c.ok)
        return self

    @property
    def ok(self) -> bool:
        return self.claims_failed == 0

    def to_json_obj(self) -> dict:
        return {
            "mode": self.mode,
            "claims_passed": self.claims_passed,
            "claims_failed": self.claims_failed,
            "ok": self.ok,
            "checks": [c.to_json_obj() for c in self.checks],
            "budget": self.budget,
        }


def params_from_transcript(transcript: Transcript) -> AdversaryParams:
    meta = transcript.params
    if meta.get("revealer") != "lemma":
        raise IntegrityError(
            f"transcript was produced by revealer {meta.get('revealer')!r}, not the adversary"
        )
    try:
        return AdversaryParams.derive(
            n=meta["n"], L=meta["L"], m=meta["m"], k=meta["k"], mode=meta["mode"], warn=False
        )
    except (KeyError, TreexploreError) as exc:
        raise IntegrityError(f"transcript params are not valid adversary params: {exc}") from exc


@dataclass
class _Replay:
    """Everything the claim checks need, collected in one replay pass."""

    state: GameState
    records: dict[int, CheckpointRecord] = field(default_factory=dict)
    height_after: dict[int, int] = field(default_factory=dict)
    positions_at: dict[int, list[int]] = field(default_factory=dict)
    gadget_leaves: dict[int, list[int]] = field(default_factory=dict)
    arrivals: dict[int, list[int]] = field(default_factory=dict)
    gadget_vertices: dict[int, int] = field(default_factory=dict)


def _replay_and_check_records(transcript: Transcript, params: AdversaryParams) -> _Replay:
    state = GameState(params.initial_tree(), params.k)
    rp = _Replay(state=state)
    checkpoint_level = {t: i + 1 for i, t in enumerate(params.checkpoints)}
    recorded = {rec.i: rec for rec in transcript.checkpoints}
    if len(recorded) != len(transcript.checkpoints):
        raise IntegrityError("duplicate checkpoint records")
    watched: set[int] = set()

    for rec in transcript.rounds:
        t = state.round + 1
        if rec.t != t:
            raise IntegrityError(f"round records out of order at t={rec.t}", round=rec.t)
        try:
            _commit_moves(state, rec.moves)
        except TreexploreError as exc:
            raise IntegrityError(f"replay failed at round {t}: {exc}", round=t) from exc
        if len(state.newly_visited) != rec.newly_visited:
            raise IntegrityError(
                f"round {t}: recorded {rec.newly_visited} new visits, replay saw "
                f"{len(state.newly_visited)}",
                round=t,
            )
        hits = state.newly_visited & watched
        if hits:
            for v in hits:
                rp.arrivals[v] = []
            for x, p in enumerate(state.positions):
                if p in hits:
                    rp.arrivals[p].append(x)

        i = checkpoint_level.get(t)
        if i is not None:
            expected = _recompute_checkpoint(state, i, params)
            rec_cp = recorded.get(i)
            if rec_cp is None:
                raise IntegrityError(f"checkpoint {i} fired at round {t} but has no record", round=t)
            if rec_cp != expected:
                raise IntegrityError(
                    f"checkpoint {i} record does not match its recomputation", round=t
                )
            if tuple(rec.attachments) != expected.gadgets:
                raise IntegrityError(
                    f"round {t} attachments differ from checkpoint {i} gadgets", round=t
                )
            rp.records[i] = rec_cp
            rp.positions_at[i] = list(state.positions)
        elif rec.attachments:
            raise IntegrityError(
                f"round {t} has attachments outside any checkpoint", round=t
            )
        try:
            created = _commit_attachments(state, rec.attachments)
        except TreexploreError as exc:
            raise IntegrityError(f"replay failed at round {t}: {exc}", round=t) from exc
        if i is not None:
            leaves: list[int] = []
            pos = 0
            for att in rec.attachments:
                gadget_ids = created[pos : pos + att.path_len + att.leaf_count]
                pos += att.path_len + att.leaf_count
                leaves.extend(gadget_ids[att.path_len :])
            rp.gadget_leaves[i] = leaves
            rp.gadget_vertices[i] = len(created)
            watched.update(leaves)
            rp.height_after[i] = state.tree.height()

    extra = set(recorded) - set(rp.records)
    if extra:
        raise IntegrityError(f"checkpoint records {sorted(extra)} have no matching rounds")
    if transcript.outcome.final_round != state.round:
        raise IntegrityError(
            f"outcome final_round {transcript.outcome.final_round} != replayed {state.round}"
        )
    if transcript.outcome.final_stats.n != state.tree.n:
        raise IntegrityError(
            f"outcome n {transcript.outcome.final_stats.n} != replayed {state.tree.n}"
        )
    finished = state.visited_count == state.tree.n
    if transcript.outcome.finished != finished:
        raise IntegrityError("outcome finished flag does not match the replayed state")
    return rp


def _recompute_checkpoint(state: GameState, i: int, params: AdversaryParams) -> CheckpointRecord:
    tree = state.tree
    candidates = checkpoint_candidates(state, i, params)
    counts = Counter(tree.branch[p] for p in state.positions if p != ROOT)
    a_values = {v: counts.get(tree.branch[v], 0) for v in candidates}
    selected = select_targets(candidates, a_values, params.alpha)
    gadgets = []
    for v in selected:
        path_len, leaf_count = gadget_spec(i, a_values[v], params)
        gadgets.append(Attachment(at=v, path_len=path_len, leaf_count=leaf_count))
    return CheckpointRecord(
        i=i, K=tuple(candidates), a_values=a_values, S=tuple(selected), gadgets=tuple(gadgets)
    )


def _checkpoint_round(params: AdversaryParams, i: int) -> int:
    return params.L * math.comb(i + 1, 2)


def verify_transcript(
    transcript: Transcript, params: AdversaryParams | None = None
) -> VerificationReport:
    """Replay and evaluate every claim; raises IntegrityError on tampering."""
    derived = params_from_transcript(transcript)
    if params is not None:
        if (params.n, params.L, params.m, params.k, params.mode) != (
            derived.n,
            derived.L,
            derived.m,
            derived.k,
            derived.mode,
        ):
            raise IntegrityError("supplied params do not match the transcript's metadata")
    params = derived
    rp = _replay_and_check_records(transcript, params)
    state = rp.state
    mode = params.mode
    repaired = mode == "repaired"
    checks: list[CheckResult] = []

    n, L, m = params.n, params.L, params.m
    levels = sorted(rp.records)

    for i in levels:
        rec = rp.records[i]
        bound = L * (i + 1)
        height = rp.height_after[i]
        checks.append(
            CheckResult(
                name="claim1_height_upper",
                checkpoint=i,
                ok=height <= bound,
                asserted=True,
                note="height after checkpoint stays within L*(i+1)",
                values={"height": height, "bound": bound},
            )
        )
        if rec.S:
            checks.append(
                CheckResult(
                    name="claim1_height_exact",
                    checkpoint=i,
                    ok=height == bound,
                    asserted=repaired,
                    note="selection non-empty, so the new level exists",
                    values={"height": height, "bound": bound},
                )
            )

        if i + 1 <= m - 1:
            nxt = rp.records.get(i + 1)
            min_a = min((rec.a_values[v] for v in rec.S), default=0)
            if nxt is None:
                checks.append(
                    CheckResult(
                        name="claim2_candidates_propagate",
                        checkpoint=i,
                        ok=True,
                        asserted=False,
                        note=f"checkpoint {i + 1} never fired (game ended or hit the cap)",
                        values={"S_i": len(rec.S)},
                    )
                )
            else:
                ok = len(nxt.K) == len(rec.S)
                vacuous = not repaired and min_a == 0
                checks.append(
                    CheckResult(
                        name="claim2_candidates_propagate",
                        checkpoint=i,
                        ok=ok,
                        asserted=not vacuous,
                        note="vacuous (a=0)" if vacuous else "|K_{i+1}| equals |S_i|",
                        values={"K_next": len(nxt.K), "S_i": len(rec.S), "min_a": min_a},
                    )
                )

        # selection envelope, compared via integers:
        # |S_i| >= alpha^i n/(2L)  <=>  |S|^m (2L)^(m-i) >= n^(m-i)
        # |S_i| <= (2alpha)^i n/(2L)  <=>  |S|^m (2L)^(m-i) <= 2^(im) n^(m-i)
        s = len(rec.S)
        lhs = s**m * (2 * L) ** (m - i)
        rhs = n ** (m - i)
        checks.append(
            CheckResult(
                name="claim3_selection_lower",
                checkpoint=i,
                ok=lhs >= rhs,
                asserted=repaired,
                note="selection count stays above the geometric floor",
                values={"S_i": s, "lhs": lhs, "rhs": rhs},
            )
        )
        checks.append(
            CheckResult(
                name="claim3_selection_upper",
                checkpoint=i,
                ok=lhs <= 2 ** (i * m) * rhs,
                asserted=True,
                note="selection count stays below the geometric ceiling",
                values={"S_i": s, "lhs": lhs, "rhs": 2 ** (i * m) * rhs},
            )
        )

        # gadget leaves reached early must have been reached from inside
        t_next = _checkpoint_round(params, i + 1)
        violations = []
        for v in rp.gadget_leaves.get(i, ()):
            fv = state.first_visit[v]
            if fv == -1 or fv >= t_next:
                continue
            pos_then = rp.positions_at[i]
            branch = state.tree.branch[v]
            if not any(
                pos_then[x] != ROOT and state.tree.branch[pos_then[x]] == branch
                for x in rp.arrivals.get(v, ())
            ):
                violations.append(v)
        checks.append(
            CheckResult(
                name="root_passage_floor",
                checkpoint=i,
                ok=not violations,
                asserted=True,
                note="early gadget-leaf visits all came from inside the branch",
                values={
                    "leaves": len(rp.gadget_leaves.get(i, ())),
                    "next_checkpoint": t_next,
                    "violations": violations[:10],
                },
            )
        )

    # -- final verdicts ------------------------------------------------------

    finished = transcript.outcome.finished
    final_round = transcript.outcome.final_round
    floor_ok = not (finished and final_round < params.round_floor)
    checks.append(
        CheckResult(
            name="round_floor",
            checkpoint=None,
            ok=floor_ok,
            asserted=repaired,
            note="game must not finish before the last checkpoint"
            + ("" if repaired else " (strict mode: known gap, informational)"),
            values={"final_round": final_round, "finished": finished, "floor": params.round_floor},
        )
    )

    all_fired = len(levels) == m - 1
    all_selected = all_fired and all(rp.records[i].S for i in levels)
    final_height = state.tree.height()
    checks.append(
        CheckResult(
            name="final_height",
            checkpoint=None,
            ok=(final_height == L * m) if all_selected else (final_height <= L * m),
            asserted=repaired and all_selected,
            note="height L*m once every checkpoint selected something",
            values={"height": final_height, "target": L * m, "all_selected": all_selected},
        )
    )

    within_k = params.k <= params.max_k
    limit = params.budget_limit()
    checks.append(
        CheckResult(
            name="vertex_budget",
            checkpoint=None,
            ok=state.tree.n <= limit,
            asserted=within_k,
            note="budget guaranteed only for teams within the bound"
            if not within_k
            else f"final size within the {mode} budget",
            values={"vertices": state.tree.n, "limit": limit, "k": params.k, "max_k": params.max_k},
        )
    )

    speed_ok = all(
        state.first_visit[v] < 0 or state.first_visit[v] >= state.tree.depth[v]
        for v in range(state.tree.n)
    )
    checks.append(
        CheckResult(
            name="speed_limit",
            checkpoint=None,
            ok=speed_ok,
            asserted=True,
            note="no vertex visited earlier than its depth",
            values={},
        )
    )

    budget = _budget_audit(params, rp, state.tree.n)
    return VerificationReport(mode=mode, checks=checks, budget=budget).finalize()


def _budget_audit(params: AdversaryParams, rp: _Replay, total_vertices: int) -> dict:
    """Term-by-term audit of the vertex-count chain.

    The initial star contributes ceil(n/(2L))*L + 1 <= n/2 + L + 1 vertices
    and each checkpoint i adds |S_i|*(L-1) path vertices plus
    L*(i+1)*multiplier star leaves. The three classical caps (L+1, the
    agent-weighted gadget term, the geometric path term) are each at most
    n/6 whenever k stays within the team bound and alpha <= 1/8; the
    repaired mode adds the zero-agent surcharge on top.
    """
    n, L, m = params.n, params.L, params.m
    alpha = float(params.alpha)
    agent_term = 0
    path_term = 0
    surcharge = 0
    for i, rec in rp.records.items():
        agent_term += L * (i + 1) * sum(rec.a_values[v] for v in rec.S)
        path_term += len(rec.S) * (L - 1)
        if params.mode == "repaired":
            surcharge += L * (i + 1) * sum(1 for v in rec.S if rec.a_values[v] == 0)
    return {
        "initial_vertices": params.branch_count * L + 1,
        "initial_bound": n / 2 + L + 1,
        "gadget_vertices_per_level": {str(i): rp.gadget_vertices[i] for i in sorted(rp.records)},
        "agent_term": agent_term,
        "agent_term_bound": L * (m + 1) ** 2 * alpha * params.k,
        "path_term": path_term,
        "path_term_bound": 2 * alpha * n / (2 - 4 * alpha),
        "surcharge": surcharge,
        "surcharge_bound": 0.0 if params.mode == "strict" else 7 * n / 18,
        "n_over_6": n / 6,
        "total_vertices": total_vertices,
        "budget_limit": params.budget_limit(),
    }
