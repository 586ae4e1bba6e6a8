"""Seeded random layout-tree generator for round-trip testing."""

import random

from testscribe.layout import LayoutNode

TAGS = ["android.widget.Button", "android.widget.TextView",
        "android.widget.EditText", "android.widget.LinearLayout",
        "android.widget.FrameLayout", "Button", "View"]


def random_tree(rng: random.Random, max_depth: int = 6,
                max_fanout: int = 5) -> LayoutNode:
    root = LayoutNode("hierarchy", {})

    def grow(node: LayoutNode, depth: int):
        if depth >= max_depth:
            return
        for _ in range(rng.randint(0, max_fanout)):
            child = LayoutNode(rng.choice(TAGS),
                               {"text": f"t{rng.randint(0, 9)}"},
                               [], node)
            node.children.append(child)
            if rng.random() < 0.5:
                grow(child, depth + 1)

    grow(root, 0)
    if not root.children:  # keep at least one resolvable widget
        root.children.append(LayoutNode("android.widget.Button", {}, [], root))
    return root
