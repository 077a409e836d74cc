"""Shared fixtures for the test suite."""

from specialcovers.tree import HurwitzTree, TreeEdge, assign_a_labels, nu_from_leaves


def five_leaf_decorated():
    """The two-interior-vertex counterexample shape, fully decorated."""
    pairs = [("v0", "b1"), ("v0", "b2"), ("v0", "b3"), ("v0", "v"),
             ("v", "b4"), ("v", "b5")]
    edges = []
    for i, (s, tg) in enumerate(pairs):
        edges.append(TreeEdge(f"f{i}", s, tg, f"f{i}~"))
        edges.append(TreeEdge(f"f{i}~", tg, s, f"f{i}"))
    marked = {"b1": (2, 0), "b2": (1, 0), "b3": (1, 0),
              "b4": (1, 1), "b5": (1, 1)}
    t = HurwitzTree(6, ["v0", "v", "b1", "b2", "b3", "b4", "b5"], edges, marked)
    return nu_from_leaves(assign_a_labels(t), ["b1", "b2", "b3"])
