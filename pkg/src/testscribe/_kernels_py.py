"""Pure-Python kernels; drop-in fallback for the compiled extension."""

from __future__ import annotations


def lcs_length(a, b) -> int:
    """Length of the longest common subsequence of two int sequences."""
    if len(a) < len(b):
        a, b = b, a
    if not b:
        return 0
    prev = [0] * (len(b) + 1)
    for x in a:
        cur = [0]
        row_append = cur.append
        best = 0
        for j, y in enumerate(b):
            if x == y:
                v = prev[j] + 1
            else:
                v = prev[j + 1] if prev[j + 1] >= best else best
            row_append(v)
            best = v
        prev = cur
    return prev[-1]


def admissible_pairs(parents, depths, terminals, max_len):
    """Terminal pairs whose tree path has at most max_len node labels.

    parents/depths describe the whole tree by node index (root parent -1);
    terminals lists the node indices of eligible leaves in traversal order.
    Returns (i, j, lca) triples of node indices with i before j, where the
    label count is depth[i] + depth[j] - 2*depth[lca] + 1.
    """
    out = []
    nt = len(terminals)
    for ai in range(nt):
        a = terminals[ai]
        da = depths[a]
        for bi in range(ai + 1, nt):
            b = terminals[bi]
            u, v = a, b
            du, dv = da, depths[b]
            while du > dv:
                u = parents[u]
                du -= 1
            while dv > du:
                v = parents[v]
                dv -= 1
            while u != v:
                u = parents[u]
                v = parents[v]
                du -= 1
            if da + depths[b] - 2 * du + 1 <= max_len:
                out.append((a, b, u))
    return out
