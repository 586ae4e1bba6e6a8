import random
import re

import pytest

from testscribe.errors import (AmbiguousMatchError, NoMatchError,
                               NotInTreeError, XmlSyntaxError,
                               XPathSyntaxError)
from testscribe.layout import (ContentDescSelector, HierarchySelector,
                               HierarchyStep, LayoutNode, Rect,
                               extract_text_attrs, node_xpath, parse_bounds,
                               parse_layout, parse_xpath, resolve_xpath,
                               WidgetMatch)
from treegen import random_tree


def test_parse_layout_minimal():
    root = parse_layout(
        '<hierarchy><android.widget.Button bounds="[0,0][10,10]"/>'
        "</hierarchy>")
    assert root.tag == "hierarchy"
    assert len(root.children) == 1
    assert root.children[0].tag == "android.widget.Button"
    assert root.children[0].bounds == Rect(0, 0, 10, 10)


def test_parse_layout_preserves_attrs():
    root = parse_layout('<hierarchy><node content-desc="Search" a="1 &amp; 2"/>'
                        "</hierarchy>")
    node = root.children[0]
    assert node.attrs["content-desc"] == "Search"
    assert node.attrs["a"] == "1 & 2"


def test_parse_layout_malformed():
    with pytest.raises(XmlSyntaxError) as exc:
        parse_layout("<hierarchy><node>")
    assert exc.value.position is not None


def test_parse_layout_node_count_matches_tag_scan():
    xml = ('<hierarchy><A><B/><B><C/></B></A><A/></hierarchy>')
    root = parse_layout(xml)
    # independent scan: every element has exactly one opening tag
    opens = len(re.findall(r"<(?!/)", xml))
    assert len(list(root.walk())) == opens


def test_parse_bounds_rejects_garbage():
    with pytest.raises(XmlSyntaxError):
        parse_bounds("[1,2][x,y]")
    with pytest.raises(XmlSyntaxError):
        parse_bounds("[10,0][0,10]")


def test_parse_xpath_content_desc():
    sel = parse_xpath('//android.widget.Button[@content-desc="Search"]')
    assert sel == ContentDescSelector("android.widget.Button", "Search")


def test_parse_xpath_hierarchy():
    sel = parse_xpath("/hierarchy/LinearLayout[2]/Button[2]")
    assert sel == HierarchySelector((HierarchyStep("LinearLayout", 2),
                                     HierarchyStep("Button", 2)))


def test_parse_xpath_rejects_other_predicates():
    with pytest.raises(XPathSyntaxError):
        parse_xpath('//Button[@enabled="true"]')


@pytest.mark.parametrize("bad", [
    "/hierarchy", "/hierarchy/", "Button", "/hierarchy/Button[0]",
    "/hierarchy/Button[2", "/hierarchy//Button", "//Button",
    '//Button[@content-desc="a"]/extra',
])
def test_parse_xpath_rejects_malformed(bad):
    with pytest.raises(XPathSyntaxError):
        parse_xpath(bad)


def _tree(xml):
    return parse_layout(xml)


def test_resolve_unique_child_without_index():
    root = _tree("<hierarchy><android.widget.Button text='Go'/></hierarchy>")
    m = resolve_xpath(root, parse_xpath("/hierarchy/Button"))
    assert m.node is root.children[0]
    assert m.text == "Go"


def test_resolve_requires_index_for_siblings():
    root = _tree("<hierarchy><LinearLayout/><LinearLayout/></hierarchy>")
    with pytest.raises(AmbiguousMatchError):
        resolve_xpath(root, parse_xpath("/hierarchy/LinearLayout"))
    m = resolve_xpath(root, parse_xpath("/hierarchy/LinearLayout[2]"))
    assert m.node is root.children[1]


def test_resolve_index_out_of_range():
    root = _tree("<hierarchy><Button/></hierarchy>")
    with pytest.raises(NoMatchError):
        resolve_xpath(root, parse_xpath("/hierarchy/Button[3]"))


def test_resolve_content_desc_exact_and_suffix_type():
    root = _tree('<hierarchy><android.widget.Button content-desc="Save"/>'
                 "</hierarchy>")
    m = resolve_xpath(root, parse_xpath('//Button[@content-desc="Save"]'))
    assert m.content_desc == "Save"
    with pytest.raises(NoMatchError):
        resolve_xpath(root, parse_xpath('//Button[@content-desc="save"]'))


def test_resolve_content_desc_ambiguous():
    root = _tree('<hierarchy><Button content-desc="X"/>'
                 '<Button content-desc="X"/></hierarchy>')
    with pytest.raises(AmbiguousMatchError):
        resolve_xpath(root, parse_xpath('//Button[@content-desc="X"]'))


def test_simple_name_matching_both_ways():
    root = _tree("<hierarchy><android.widget.Button/></hierarchy>")
    assert resolve_xpath(root, parse_xpath("/hierarchy/Button")).node \
        is root.children[0]
    assert resolve_xpath(
        root, parse_xpath("/hierarchy/android.widget.Button")).node \
        is root.children[0]


def test_node_xpath_emits_index_only_for_same_type_siblings():
    root = _tree("<hierarchy><Button/><Button/><TextView/></hierarchy>")
    assert node_xpath(root, root.children[0]) == "/hierarchy/Button[1]"
    assert node_xpath(root, root.children[1]) == "/hierarchy/Button[2]"
    assert node_xpath(root, root.children[2]) == "/hierarchy/TextView"


def test_node_xpath_not_in_tree():
    root = _tree("<hierarchy><Button/></hierarchy>")
    stranger = LayoutNode("Button", {})
    with pytest.raises(NotInTreeError):
        node_xpath(root, stranger)


def test_roundtrip_small_fixed_trees():
    rng = random.Random(7)
    for _ in range(50):
        root = random_tree(rng, max_depth=4, max_fanout=3)
        for node in root.walk():
            if node is root:
                continue
            sel = parse_xpath(node_xpath(root, node))
            assert resolve_xpath(root, sel).node is node


def test_resolution_is_stable_under_reresolution():
    rng = random.Random(99)
    root = random_tree(rng)
    nodes = [n for n in root.walk() if n is not root]
    for node in nodes[:30]:
        m = resolve_xpath(root, parse_xpath(node_xpath(root, node)))
        again = resolve_xpath(root, parse_xpath(node_xpath(root, m.node)))
        assert again.node is m.node


def test_extract_text_attrs_variants():
    def match(text=None, desc=None):
        attrs = {}
        if text is not None:
            attrs["text"] = text
        if desc is not None:
            attrs["content-desc"] = desc
        return WidgetMatch.from_node(LayoutNode("Button", attrs))

    assert extract_text_attrs(match(text="Submit")) == ["Submit"]
    assert extract_text_attrs(match(text="OK", desc="OK")) == ["OK"]
    assert extract_text_attrs(match(text="Save", desc="Save note")) \
        == ["Save", "Save note"]
    assert extract_text_attrs(match()) == []
    assert extract_text_attrs(match(text="", desc="Hint")) == ["Hint"]
