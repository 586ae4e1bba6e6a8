"""Runtime UI layout parsing and XPath-style widget resolution.

Layout dumps are the XML hierarchies produced by UIAutomator-style tooling.
Two selector forms are supported: a content-description lookup
(``//Type[@content-desc="text"]``) and a hierarchy walk with optional 1-based
sibling indices (``/hierarchy/Type/Type[2]``). Type names compare by simple
class name, so ``Button`` and ``android.widget.Button`` are interchangeable.
"""

from __future__ import annotations

import re
import xml.etree.ElementTree as ET
from dataclasses import dataclass, field
from typing import Iterator, Optional, Union

from .errors import (AmbiguousMatchError, NoMatchError, NotInTreeError,
                     XmlSyntaxError, XPathSyntaxError)


@dataclass(frozen=True)
class Rect:
    left: int
    top: int
    right: int
    bottom: int

    @property
    def width(self) -> int:
        return self.right - self.left

    @property
    def height(self) -> int:
        return self.bottom - self.top

    @property
    def area(self) -> int:
        return self.width * self.height

    def intersection_area(self, other: "Rect") -> int:
        w = min(self.right, other.right) - max(self.left, other.left)
        h = min(self.bottom, other.bottom) - max(self.top, other.top)
        if w <= 0 or h <= 0:
            return 0
        return w * h

    def as_list(self) -> list[int]:
        return [self.left, self.top, self.right, self.bottom]


_BOUNDS_RE = re.compile(r"^\[(-?\d+),(-?\d+)\]\[(-?\d+),(-?\d+)\]$")


def parse_bounds(text: str) -> Rect:
    """Parse the `[l,t][r,b]` bounds attribute format."""
    m = _BOUNDS_RE.match(text.strip())
    if not m:
        raise XmlSyntaxError(f"bad bounds attribute: {text!r}")
    l, t, r, b = (int(g) for g in m.groups())
    if l > r or t > b:
        raise XmlSyntaxError(f"inverted bounds: {text!r}")
    return Rect(l, t, r, b)


@dataclass(eq=False)
class LayoutNode:
    tag: str
    attrs: dict[str, str]
    children: list["LayoutNode"] = field(default_factory=list)
    parent: Optional["LayoutNode"] = field(default=None, repr=False)

    def walk(self) -> Iterator["LayoutNode"]:
        yield self
        for c in self.children:
            yield from c.walk()

    @property
    def bounds(self) -> Optional[Rect]:
        raw = self.attrs.get("bounds")
        return parse_bounds(raw) if raw else None


def simple_name(tag: str) -> str:
    return tag.rsplit(".", 1)[-1]


def parse_layout(xml: str) -> LayoutNode:
    """Parse a layout dump into a tree, preserving attributes verbatim."""
    try:
        root_el = ET.fromstring(xml)
    except ET.ParseError as e:
        raise XmlSyntaxError(f"layout XML parse failure: {e}",
                             position=e.position) from e

    def build(el: ET.Element, parent: Optional[LayoutNode]) -> LayoutNode:
        node = LayoutNode(el.tag, dict(el.attrib), [], parent)
        node.children = [build(c, node) for c in el]
        return node

    return build(root_el, None)


# --------------------------------------------------------------------------
# selectors


@dataclass(frozen=True)
class ContentDescSelector:
    widget_type: str
    text: str


@dataclass(frozen=True)
class HierarchyStep:
    view_type: str
    index: Optional[int] = None  # 1-based


@dataclass(frozen=True)
class HierarchySelector:
    steps: tuple[HierarchyStep, ...]


XPathSelector = Union[ContentDescSelector, HierarchySelector]

_CONTENT_DESC_RE = re.compile(
    r'^//([A-Za-z_$][\w.$]*)\[@content-desc=(?:"([^"]*)"|\'([^\']*)\')\]$')
_STEP_RE = re.compile(r"^([A-Za-z_$][\w.$]*)(?:\[(\d+)\])?$")


def parse_xpath(selector: str) -> XPathSelector:
    """Parse one of the two supported selector shapes."""
    if selector.startswith("//"):
        m = _CONTENT_DESC_RE.match(selector)
        if not m:
            raise XPathSyntaxError(
                f"unsupported selector (only @content-desc predicates are "
                f"recognized): {selector!r}")
        return ContentDescSelector(m.group(1),
                                   m.group(2) if m.group(2) is not None
                                   else m.group(3))
    if selector == "/hierarchy" or selector.startswith("/hierarchy/"):
        rest = selector[len("/hierarchy"):]
        parts = rest[1:].split("/") if rest.startswith("/") else []
        if not parts or any(not p for p in parts):
            raise XPathSyntaxError(
                "hierarchy selector needs one non-empty step per slash")
        steps = []
        for part in parts:
            m = _STEP_RE.match(part)
            if not m:
                raise XPathSyntaxError(f"bad hierarchy step: {part!r}")
            idx = int(m.group(2)) if m.group(2) is not None else None
            if idx is not None and idx < 1:
                raise XPathSyntaxError(f"step index must be >= 1: {part!r}")
            steps.append(HierarchyStep(m.group(1), idx))
        return HierarchySelector(tuple(steps))
    raise XPathSyntaxError(f"selector must start with // or /hierarchy: "
                           f"{selector!r}")


@dataclass(frozen=True, eq=False)
class WidgetMatch:
    node: LayoutNode
    bounds: Optional[Rect]
    text: Optional[str]
    content_desc: Optional[str]
    resource_id: Optional[str]

    @classmethod
    def from_node(cls, node: LayoutNode) -> "WidgetMatch":
        return cls(node,
                   node.bounds,
                   node.attrs.get("text") or None,
                   node.attrs.get("content-desc") or None,
                   node.attrs.get("resource-id") or None)


def _types_match(tag: str, selector_type: str) -> bool:
    return simple_name(tag) == simple_name(selector_type)


def resolve_xpath(root: LayoutNode, sel: XPathSelector) -> WidgetMatch:
    """Resolve a parsed selector against a layout tree.

    Hierarchy steps without an index must identify a unique child of that
    type; multiple candidates raise AmbiguousMatchError rather than picking
    the first.
    """
    if isinstance(sel, ContentDescSelector):
        hits = [n for n in root.walk()
                if _types_match(n.tag, sel.widget_type)
                and n.attrs.get("content-desc") == sel.text]
        if not hits:
            raise NoMatchError(f"no {sel.widget_type} with "
                               f"content-desc={sel.text!r}")
        if len(hits) > 1:
            raise AmbiguousMatchError(
                f"{len(hits)} nodes match content-desc={sel.text!r}")
        return WidgetMatch.from_node(hits[0])

    cur = root
    for step in sel.steps:
        candidates = [c for c in cur.children
                      if _types_match(c.tag, step.view_type)]
        if step.index is not None:
            if step.index > len(candidates):
                raise NoMatchError(
                    f"step {step.view_type}[{step.index}] has only "
                    f"{len(candidates)} candidate(s)")
            cur = candidates[step.index - 1]
        else:
            if not candidates:
                raise NoMatchError(f"no child of type {step.view_type}")
            if len(candidates) > 1:
                raise AmbiguousMatchError(
                    f"{len(candidates)} children of type {step.view_type}; "
                    f"an index is required")
            cur = candidates[0]
    return WidgetMatch.from_node(cur)


def node_xpath(root: LayoutNode, node: LayoutNode) -> str:
    """Canonical hierarchy-form selector for a node of the tree.

    A sibling index is emitted exactly when the node has two or more
    same-type siblings (same simple class name), matching what resolve_xpath
    requires for uniqueness.
    """
    chain: list[LayoutNode] = []
    cur = node
    while cur is not None and cur is not root:
        chain.append(cur)
        cur = cur.parent
    if cur is None:
        # parent links may be absent on hand-built trees; fall back to search
        path = _find_path(root, node)
        if path is None:
            raise NotInTreeError("node is not part of the given tree")
        chain = path[1:][::-1]
    parts = []
    for n in reversed(chain):
        parent = n.parent if n.parent is not None else _find_parent(root, n)
        same = [c for c in parent.children if _types_match(c.tag, n.tag)]
        step = simple_name(n.tag)
        if len(same) >= 2:
            step += f"[{same.index(n) + 1}]"
        parts.append(step)
    return "/" + root.tag + ("/" + "/".join(parts) if parts else "")


def _find_path(root: LayoutNode, node: LayoutNode):
    if root is node:
        return [root]
    for c in root.children:
        sub = _find_path(c, node)
        if sub is not None:
            return [root] + sub
    return None


def _find_parent(root: LayoutNode, node: LayoutNode) -> LayoutNode:
    path = _find_path(root, node)
    if path is None or len(path) < 2:
        raise NotInTreeError("node is not part of the given tree")
    return path[-2]


def dedupe_casefold(values: list[str]) -> list[str]:
    """Order-preserving dedup, comparing case-insensitively."""
    seen = set()
    out = []
    for v in values:
        key = v.casefold()
        if key not in seen:
            seen.add(key)
            out.append(v)
    return out


def extract_text_attrs(m: WidgetMatch) -> list[str]:
    """Non-empty text then content-desc, deduplicated case-insensitively."""
    return dedupe_casefold([v for v in (m.text, m.content_desc) if v])
