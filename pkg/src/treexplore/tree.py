"""Growable rooted trees with stable vertex identities.

Vertices are dense integers assigned in creation order; id 0 is the root.
Growth is append-only: attaching below an existing vertex never changes
earlier ids, parents, or depths. Children are kept in creation order,
which coincides with ascending id order.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

from .errors import (
    InvalidParameterError,
    NoBranchError,
    TreeParseError,
    VertexNotFoundError,
)

ROOT = 0


@dataclass(frozen=True)
class TreeStats:
    """Summary counts of a tree: size, height, and degree extremes."""

    n: int
    height: int
    max_degree: int
    root_ecc: int  # equal to height; named separately for bound reports


class RootedTree:
    """Append-only rooted tree indexed by dense integer ids.

    Exposes parent/children/depth as flat lists plus two derived indexes
    kept in sync on every insertion: the depth-1 ancestor of each vertex
    (its branch) and a by-depth bucket list.
    """

    __slots__ = ("parent", "children", "depth", "branch", "_by_depth")

    def __init__(self) -> None:
        self.parent: list[int | None] = [None]
        self.children: list[list[int]] = [[]]
        self.depth: list[int] = [0]
        # branch[v] is the depth-1 ancestor of v, or -1 for the root
        self.branch: list[int] = [-1]
        self._by_depth: list[list[int]] = [[ROOT]]

    @property
    def n(self) -> int:
        return len(self.parent)

    def __contains__(self, v: int) -> bool:
        return 0 <= v < len(self.parent)

    def _require(self, v: int) -> None:
        if not (0 <= v < len(self.parent)):
            raise VertexNotFoundError(f"vertex {v} does not exist (tree has {self.n} vertices)")

    def add_child(self, parent: int) -> int:
        """Append a new vertex below ``parent`` and return its id."""
        self._require(parent)
        v = len(self.parent)
        d = self.depth[parent] + 1
        self.parent.append(parent)
        self.children.append([])
        self.depth.append(d)
        self.children[parent].append(v)
        self.branch.append(v if d == 1 else self.branch[parent])
        if d == len(self._by_depth):
            self._by_depth.append([])
        self._by_depth[d].append(v)
        return v

    def height(self) -> int:
        """Maximum depth over all vertices."""
        h = len(self._by_depth) - 1
        while h > 0 and not self._by_depth[h]:
            h -= 1
        return h

    def vertices_at_depth(self, d: int) -> list[int]:
        """All vertex ids at depth ``d``, ascending."""
        if d < 0 or d >= len(self._by_depth):
            return []
        return list(self._by_depth[d])

    def ancestor_at_depth(self, v: int, d: int) -> int:
        """The ancestor of ``v`` at depth ``d`` (``v`` itself if d == depth(v))."""
        self._require(v)
        if d < 0 or d > self.depth[v]:
            raise InvalidParameterError(f"vertex {v} has depth {self.depth[v]}, no ancestor at depth {d}")
        while self.depth[v] > d:
            v = self.parent[v]  # type: ignore[assignment]
        return v

    def path_from_root(self, v: int) -> list[int]:
        """Vertices on the root-to-``v`` path, root first."""
        self._require(v)
        path = []
        while v is not None:  # type: ignore[comparison-overlap]
            path.append(v)
            v = self.parent[v]  # type: ignore[assignment]
        path.reverse()
        return path

    def distance(self, u: int, v: int) -> int:
        """Number of edges on the unique u-v path."""
        self._require(u)
        self._require(v)
        du, dv = self.depth[u], self.depth[v]
        lca_u, lca_v = u, v
        while self.depth[lca_u] > self.depth[lca_v]:
            lca_u = self.parent[lca_u]
        while self.depth[lca_v] > self.depth[lca_u]:
            lca_v = self.parent[lca_v]
        while lca_u != lca_v:
            lca_u = self.parent[lca_u]
            lca_v = self.parent[lca_v]
        return du + dv - 2 * self.depth[lca_u]

    def leaves(self) -> list[int]:
        """Vertices with no children, ascending."""
        return [v for v in range(self.n) if not self.children[v]]

    def copy(self) -> "RootedTree":
        t = RootedTree.__new__(RootedTree)
        t.parent = list(self.parent)
        t.children = [list(c) for c in self.children]
        t.depth = list(self.depth)
        t.branch = list(self.branch)
        t._by_depth = [list(b) for b in self._by_depth]
        return t

    def stats(self) -> TreeStats:
        h = self.height()
        max_deg = 0
        for v in range(self.n):
            deg = len(self.children[v]) + (0 if v == ROOT else 1)
            if deg > max_deg:
                max_deg = deg
        return TreeStats(n=self.n, height=h, max_degree=max_deg, root_ecc=h)


def make_path_star(branch_count: int, path_len: int) -> RootedTree:
    """Build a root with ``branch_count`` disjoint paths of ``path_len`` edges.

    Ids go branch by branch, top to bottom: branch j occupies ids
    (j-1)*path_len+1 .. j*path_len.
    """
    if branch_count < 1 or path_len < 1:
        raise InvalidParameterError(
            f"branch_count and path_len must be positive (got {branch_count}, {path_len})"
        )
    tree = RootedTree()
    for _ in range(branch_count):
        at = ROOT
        for _ in range(path_len):
            at = tree.add_child(at)
    return tree


def attach_path_with_star(tree: RootedTree, at: int, path_len: int, leaf_count: int) -> list[int]:
    """Append a path of ``path_len`` edges below ``at``, then ``leaf_count`` leaves.

    The leaves hang from the path's end (from ``at`` itself when path_len
    is 0). Returns the new ids in creation order; both arguments may be 0,
    in which case nothing is attached.
    """
    tree._require(at)
    new_ids = []
    tip = at
    for _ in range(path_len):
        tip = tree.add_child(tip)
        new_ids.append(tip)
    for _ in range(leaf_count):
        new_ids.append(tree.add_child(tip))
    return new_ids


def root_branch(tree: RootedTree, v: int) -> int:
    """The depth-1 ancestor of ``v``; vertices sharing it form one branch."""
    tree._require(v)
    if v == ROOT:
        raise NoBranchError("the root belongs to no branch")
    return tree.branch[v]


def encode_tree(tree: RootedTree) -> bytes:
    """Serialize to the JSON parent-array format (UTF-8, LF terminated)."""
    doc = {"n": tree.n, "parent": tree.parent}
    return (json.dumps(doc, separators=(", ", ": ")) + "\n").encode("utf-8")


def decode_tree(data: bytes | str) -> RootedTree:
    """Parse the JSON parent-array format back into a tree.

    Enforces parent[0] = null and parent[i] < i, which rules out cycles.
    """
    if isinstance(data, bytes):
        data = data.decode("utf-8")
    try:
        doc = json.loads(data)
    except json.JSONDecodeError as exc:
        raise TreeParseError(f"invalid JSON: {exc.msg}", position=exc.pos) from exc
    if not isinstance(doc, dict) or "n" not in doc or "parent" not in doc:
        raise TreeParseError("expected an object with 'n' and 'parent' keys", position=0)
    n, parents = doc["n"], doc["parent"]
    if not isinstance(n, int) or not isinstance(parents, list) or len(parents) != n or n < 1:
        raise TreeParseError(f"'parent' must be a list of length n >= 1 (n={n})", position=0)
    if parents[0] is not None:
        raise TreeParseError("parent[0] must be null", position=0)
    tree = RootedTree()
    for i in range(1, n):
        p = parents[i]
        if not isinstance(p, int) or not (0 <= p < i):
            raise TreeParseError(
                f"parent[{i}] = {p!r} violates the requirement 0 <= parent[i] < i",
                position=i,
            )
        tree.add_child(p)
    return tree


def tree_to_dot(tree: RootedTree) -> str:
    """DOT digraph with parent->child edges, root labeled, LF endings."""
    lines = ["digraph tree {", '  0 [label="root"];']
    for v in range(1, tree.n):
        lines.append(f"  {tree.parent[v]} -> {v};")
    lines.append("}")
    return "\n".join(lines) + "\n"
