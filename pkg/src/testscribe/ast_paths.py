"""Terminal-to-terminal AST path extraction with subtokenized endpoints.

A path connects two leaves through their lowest common ancestor; its label
sequence (both terminal labels included) may not exceed the length threshold,
9 by default. Each unordered pair is emitted once, oriented so the
lexicographically smaller endpoint comes first; OPAQUE recovery leaves and
leaves without alphanumeric content are excluded.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import lru_cache

from . import kernels
from .code_ast import Ast, AstNode

DEFAULT_MAX_PATH_LEN = 9

UP_MARK = "↑"
DOWN_MARK = "↓"

_SUBTOKEN_RE = re.compile(
    r"[A-Z]+(?![a-z])|[A-Z][a-z]+|[a-z]+|\d+")


@lru_cache(maxsize=4096)
def subtokenize(identifier: str) -> tuple[str, ...]:
    """Split on camelCase, underscores, digit and punctuation boundaries."""
    return tuple(t.lower() for t in _SUBTOKEN_RE.findall(identifier))


@dataclass(frozen=True)
class AstPath:
    start_subtokens: tuple[str, ...]
    node_labels: tuple[str, ...]  # both terminal labels included
    end_subtokens: tuple[str, ...]
    lca_pos: int  # index of the common-ancestor label within node_labels

    def render(self) -> str:
        """Debug-dump form: `start,label1{up}...{down}labelk,end`, with
        subtokens joined by `|` and direction marks between labels."""
        out = [self.node_labels[0]]
        for i in range(1, len(self.node_labels)):
            out.append(UP_MARK if i <= self.lca_pos else DOWN_MARK)
            out.append(self.node_labels[i])
        return "{},{},{}".format("|".join(self.start_subtokens),
                                 "".join(out),
                                 "|".join(self.end_subtokens))


def _index_tree(ast: Ast):
    nodes = ast.nodes
    ids = {id(n): i for i, n in enumerate(nodes)}
    parents = [-1] * len(nodes)
    depths = [0] * len(nodes)
    for i, n in enumerate(nodes):
        if n.parent is not None:
            p = ids[id(n.parent)]
            parents[i] = p
            depths[i] = depths[p] + 1
    return nodes, parents, depths


def eligible_terminals(ast: Ast) -> list[AstNode]:
    return [t for t in ast.terminals
            if t.label != "OPAQUE" and subtokenize(t.value)]


def extract_paths(ast: Ast,
                  max_path_len: int = DEFAULT_MAX_PATH_LEN) -> list[AstPath]:
    """All admissible terminal-pair paths of an AST."""
    if max_path_len < 2:
        raise ValueError("max_path_len must be >= 2")
    nodes, parents, depths = _index_tree(ast)
    ids = {id(n): i for i, n in enumerate(nodes)}
    term_idx = [ids[id(t)] for t in eligible_terminals(ast)]
    paths = []
    for a, b, lca in kernels.admissible_pairs(parents, depths, term_idx,
                                              max_path_len):
        up = []
        u = a
        while u != lca:
            up.append(nodes[u].label)
            u = parents[u]
        down = []
        v = b
        while v != lca:
            down.append(nodes[v].label)
            v = parents[v]
        labels = up + [nodes[lca].label] + down[::-1]
        start = subtokenize(nodes[a].value)
        end = subtokenize(nodes[b].value)
        lca_pos = len(up)
        if (end, nodes[b].value) < (start, nodes[a].value):
            start, end = end, start
            labels = labels[::-1]
            lca_pos = len(labels) - 1 - lca_pos
        paths.append(AstPath(start, tuple(labels), end, lca_pos))
    return paths
