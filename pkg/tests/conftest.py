"""Shared builders and invariant checkers for the test suite."""

from __future__ import annotations

import random

import pytest

from treexplore import ROOT, RootedTree, initial_tree_of, replay_transcript


def random_tree(n: int, rng: random.Random) -> RootedTree:
    """Uniform random recursive tree on n vertices (parent drawn from earlier ids)."""
    tree = RootedTree()
    for i in range(1, n):
        tree.add_child(rng.randrange(i))
    return tree


def make_path(length: int) -> RootedTree:
    tree = RootedTree()
    v = ROOT
    for _ in range(length):
        v = tree.add_child(v)
    return tree


def make_star(leaves: int) -> RootedTree:
    tree = RootedTree()
    for _ in range(leaves):
        tree.add_child(ROOT)
    return tree


def assert_transcript_invariants(transcript):
    """Replay-based sanity: legality, monotone visits, speed limit, height floor."""
    state = replay_transcript(transcript, initial_tree_of(transcript))
    assert state.round == transcript.outcome.final_round
    assert state.tree.n == transcript.outcome.final_stats.n
    finished = state.visited_count == state.tree.n
    assert finished == transcript.outcome.finished
    for v in range(state.tree.n):
        fv = state.first_visit[v]
        if fv >= 0:
            assert fv >= state.tree.depth[v], f"vertex {v} visited faster than its depth"
    if finished:
        assert transcript.outcome.final_round >= state.tree.height()
    return state


@pytest.fixture
def rng():
    return random.Random(0xC0FFEE)
