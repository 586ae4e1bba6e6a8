"""Response-method localization for ID-located widgets.

A widget id can be bound to its handler in five shapes commonly seen in
Android sources: a switch case on the id, an if condition comparing the id,
a findViewById/@BindView binding followed by a listener registration, an
@OnClick annotation, or an android:onClick attribute in a layout file. All
shapes are matched lexically over comment- and string-masked text; the
matched handler snippet is always a whole-line slice of its file so that
(file, span) reproduces it verbatim.
"""

from __future__ import annotations

import bisect
import logging
import re
from dataclasses import dataclass, replace
from enum import IntEnum
from pathlib import Path
from typing import Optional, Sequence

log = logging.getLogger(__name__)

_KEYWORDS = {"if", "else", "for", "while", "switch", "case", "default", "do",
             "return", "break", "continue", "new", "throw", "throws", "try",
             "catch", "finally", "assert", "synchronized", "instanceof",
             "this", "super"}


class Template(IntEnum):
    SWITCH = 1
    IF_ELSE = 2
    ID_BINDING = 3
    ON_CLICK_ANNOTATION = 4
    LAYOUT_ATTRIBUTE = 5


# fixed selection order: bindings and annotations are the most direct
# evidence, layout attributes the weakest
_PRIORITY = {Template.ID_BINDING: 0, Template.ON_CLICK_ANNOTATION: 1,
             Template.SWITCH: 2, Template.IF_ELSE: 3,
             Template.LAYOUT_ATTRIBUTE: 4}


@dataclass(frozen=True)
class ResponseMethod:
    file: str  # posix-style path, relative to the source root when known
    method_name: str
    snippet: str
    template: Template
    span: tuple[int, int]  # 1-based inclusive line range


# --------------------------------------------------------------------------
# text utilities


def mask_comments_and_strings(text: str) -> str:
    """Replace comment and string-literal content with spaces, preserving
    offsets and newlines, so lexical matching cannot fire inside either."""
    out = list(text)
    i = 0
    n = len(text)
    while i < n:
        ch = text[i]
        if text.startswith("//", i):
            j = text.find("\n", i)
            j = n if j < 0 else j
            for k in range(i, j):
                out[k] = " "
            i = j
        elif text.startswith("/*", i):
            j = text.find("*/", i + 2)
            j = n if j < 0 else j + 2
            for k in range(i, j):
                if out[k] != "\n":
                    out[k] = " "
            i = j
        elif ch == '"' or ch == "'":
            quote = ch
            j = i + 1
            while j < n and text[j] != quote:
                j += 2 if text[j] == "\\" else 1
            j = min(j + 1, n)
            for k in range(i, j):
                if out[k] != "\n":
                    out[k] = " "
            i = j
        else:
            i += 1
    return "".join(out)


class _Lines:
    def __init__(self, text: str):
        self.text = text
        self.starts = [0]
        for idx, ch in enumerate(text):
            if ch == "\n":
                self.starts.append(idx + 1)

    def line_of(self, offset: int) -> int:
        return bisect.bisect_right(self.starts, offset)

    def span_of(self, start: int, end: int) -> tuple[int, int]:
        """1-based inclusive line span covering [start, end) after trimming
        surrounding whitespace."""
        region = self.text[start:end]
        lead = len(region) - len(region.lstrip())
        trail = len(region) - len(region.rstrip())
        s = start + lead
        e = max(s, end - trail - 1)
        return self.line_of(s), self.line_of(e)


def slice_lines(text: str, start_line: int, end_line: int) -> str:
    return "\n".join(text.split("\n")[start_line - 1:end_line])


def _matching(text: str, open_idx: int, open_ch: str = "{",
              close_ch: str = "}") -> int:
    """Index of the bracket closing text[open_idx]; -1 when unbalanced."""
    depth = 0
    for i in range(open_idx, len(text)):
        if text[i] == open_ch:
            depth += 1
        elif text[i] == close_ch:
            depth -= 1
            if depth == 0:
                return i
    return -1


_CALL_ONLY_RE = re.compile(
    r"^(?:[\w$]+\s*\.\s*)*([\w$]+)\s*\([^;{}]*\)\s*;?$")


def _single_call_name(body: str) -> Optional[str]:
    """Callee name when the body is a single call statement, else None."""
    trimmed = body.strip()
    trimmed = re.sub(r"\bbreak\s*;\s*$", "", trimmed).strip()
    trimmed = re.sub(r"^return\b", "", trimmed).strip()
    m = _CALL_ONLY_RE.match(trimmed)
    if m and m.group(1) not in _KEYWORDS:
        return m.group(1)
    return None


# --------------------------------------------------------------------------
# candidate file discovery


def _id_patterns(widget_id: str) -> list[re.Pattern]:
    wid = re.escape(widget_id)
    return [re.compile(rf"R\.id\.{wid}\b"),
            re.compile(rf"@\+id/{wid}\b"),
            re.compile(rf"@id/{wid}\b"),
            re.compile(rf'"{wid}"')]


def find_candidate_files(source_root: str | Path,
                         widget_id: str) -> list[Path]:
    """Source and layout files mentioning the widget id as a token.

    Returns paths relative to source_root, sorted; unreadable files are
    skipped with a warning.
    """
    root = Path(source_root)
    patterns = _id_patterns(widget_id)
    hits = []
    for path in sorted(root.rglob("*")):
        if not path.is_file() or path.suffix not in (".java", ".xml"):
            continue
        try:
            text = path.read_text(encoding="utf-8")
        except OSError as e:
            log.warning("skipping unreadable file %s: %s", path, e)
            continue
        if any(p.search(text) for p in patterns):
            hits.append(path.relative_to(root))
    return sorted(hits, key=lambda p: p.as_posix())


# --------------------------------------------------------------------------
# template matching


def match_templates(file_text: str, widget_id: str,
                    file: str | Path = "<memory>") -> list[ResponseMethod]:
    """All template matches for a widget id within one file."""
    file_name = Path(file).as_posix() if not isinstance(file, str) else file
    is_xml = file_name.endswith(".xml") or file_text.lstrip().startswith("<")
    if is_xml:
        matches = _match_layout_attribute(file_text, widget_id, file_name)
    else:
        masked = mask_comments_and_strings(file_text)
        lines = _Lines(file_text)
        matches = []
        matches += _match_switch(file_text, masked, lines, widget_id, file_name)
        matches += _match_if_else(file_text, masked, lines, widget_id, file_name)
        matches += _match_id_binding(file_text, masked, lines, widget_id,
                                     file_name)
        matches += _match_on_click(file_text, masked, lines, widget_id,
                                   file_name)
    return sorted(matches, key=lambda m: (m.span[0], int(m.template)))


_BODY_SCAN_RE = re.compile(r"[{}]|;|\bbreak\b|\breturn\b|\bcase\b|\bdefault\b")


def _case_body_end(masked: str, start: int) -> int:
    """End offset of a case body: up to the first break/return at depth 0,
    or the next case/default label, or the switch's closing brace."""
    depth = 0
    ending = False
    for m in _BODY_SCAN_RE.finditer(masked, start):
        tok = m.group(0)
        if tok == "{":
            depth += 1
        elif tok == "}":
            if depth == 0:
                return m.start()
            depth -= 1
        elif depth == 0:
            if tok == ";" and ending:
                return m.end()
            if tok in ("break", "return"):
                ending = True
            elif tok in ("case", "default") and not ending:
                return m.start()
    return len(masked)


def _match_switch(text, masked, lines, widget_id, file_name):
    out = []
    for m in re.finditer(rf"\bcase\s+R\.id\.{re.escape(widget_id)}\s*:",
                         masked):
        body_start = m.end()
        body_end = _case_body_end(masked, body_start)
        if not text[body_start:body_end].strip():
            continue
        span = lines.span_of(body_start, body_end)
        snippet = slice_lines(text, *span)
        name = _single_call_name(text[body_start:body_end]) \
            or f"case_{widget_id}"
        out.append(ResponseMethod(file_name, name, snippet,
                                  Template.SWITCH, span))
    return out


def _match_if_else(text, masked, lines, widget_id, file_name):
    wid = re.escape(widget_id)
    cond_re = re.compile(rf"==\s*R\.id\.{wid}\b|\bR\.id\.{wid}\s*==")
    out = []
    for m in re.finditer(r"\bif\s*\(", masked):
        open_idx = m.end() - 1
        close_idx = _matching(masked, open_idx, "(", ")")
        if close_idx < 0 or not cond_re.search(masked[open_idx:close_idx]):
            continue
        i = close_idx + 1
        while i < len(masked) and masked[i].isspace():
            i += 1
        if i < len(masked) and masked[i] == "{":
            end = _matching(masked, i)
            if end < 0:
                continue
            body_start, body_end = i + 1, end
        else:
            semi = masked.find(";", i)
            if semi < 0:
                continue
            body_start, body_end = i, semi + 1
        if not text[body_start:body_end].strip():
            continue
        span = lines.span_of(body_start, body_end)
        snippet = slice_lines(text, *span)
        name = _single_call_name(text[body_start:body_end]) \
            or f"if_{widget_id}"
        out.append(ResponseMethod(file_name, name, snippet,
                                  Template.IF_ELSE, span))
    return out


_ANON_METHOD_RE = re.compile(
    r"(?:public\s+|protected\s+|private\s+)?[\w$<>\[\]]+\s+([\w$]+)"
    r"\s*\([^)]*\)\s*\{")


def _listener_body(masked: str, arg_start: int):
    """Locate the body of a listener argument (anonymous class or lambda).

    Returns (body_start, body_end, anon_method_name) or None.
    """
    i = arg_start
    n = len(masked)
    while i < n and masked[i].isspace():
        i += 1
    if masked.startswith("new", i) and (i + 3 >= n or not masked[i + 3].isalnum()):
        brace = masked.find("{", i)
        if brace < 0:
            return None
        class_end = _matching(masked, brace)
        if class_end < 0:
            return None
        mm = _ANON_METHOD_RE.search(masked, brace + 1, class_end)
        if not mm:
            return None
        method_open = masked.find("{", mm.end() - 1)
        method_close = _matching(masked, method_open)
        if method_close < 0 or method_close > class_end:
            return None
        return method_open + 1, method_close, mm.group(1)
    arrow = re.compile(r"(?:\([^)]*\)|[\w$]+)\s*->\s*").match(masked, i)
    if arrow:
        j = arrow.end()
        if j < n and masked[j] == "{":
            end = _matching(masked, j)
            if end < 0:
                return None
            return j + 1, end, None
        # expression lambda: runs to the close of the enclosing call
        depth = 0
        k = j
        while k < n:
            if masked[k] == "(":
                depth += 1
            elif masked[k] == ")":
                if depth == 0:
                    return j, k, None
                depth -= 1
            k += 1
    return None


def _match_id_binding(text, masked, lines, widget_id, file_name):
    wid = re.escape(widget_id)
    vars_bound = []
    for m in re.finditer(
            rf"([\w$]+)\s*=\s*(?:\([^()]*\)\s*)?(?:[\w$]+\s*\.\s*)*"
            rf"findViewById\s*\(\s*R\.id\.{wid}\s*\)", masked):
        vars_bound.append(m.group(1))
    for m in re.finditer(
            rf"@BindView\s*\(\s*R\.id\.{wid}\s*\)\s*"
            rf"(?:[\w$<>\[\]]+\s+)*([\w$]+)\s*;", masked):
        vars_bound.append(m.group(1))
    out = []
    seen_spans = set()
    for var in vars_bound:
        for m in re.finditer(rf"\b{re.escape(var)}\s*\.\s*setOn\w*Listener"
                             rf"\s*\(", masked):
            located = _listener_body(masked, m.end())
            if located is None:
                continue
            body_start, body_end, anon_name = located
            if not text[body_start:body_end].strip():
                continue
            span = lines.span_of(body_start, body_end)
            if span in seen_spans:
                continue
            seen_spans.add(span)
            snippet = slice_lines(text, *span)
            name = _single_call_name(text[body_start:body_end]) \
                or anon_name or f"on_{widget_id}"
            out.append(ResponseMethod(file_name, name, snippet,
                                      Template.ID_BINDING, span))
    return out


_METHOD_DECL_RE = re.compile(
    r"(?:(?:public|private|protected|static|final|synchronized)\s+)*"
    r"[\w$<>\[\]]+\s+([\w$]+)\s*\([^)]*\)\s*\{")


def _match_on_click(text, masked, lines, widget_id, file_name):
    wid = re.escape(widget_id)
    out = []
    for m in re.finditer(rf"@OnClick\s*\((?:[^()]*\bR\.id\.{wid}\b[^()]*)\)",
                         masked):
        dm = _METHOD_DECL_RE.search(masked, m.end())
        if not dm:
            continue
        open_idx = masked.find("{", dm.end() - 1)
        close_idx = _matching(masked, open_idx)
        if close_idx < 0:
            continue
        span = lines.span_of(dm.start(), close_idx + 1)
        snippet = slice_lines(text, *span)
        out.append(ResponseMethod(file_name, dm.group(1), snippet,
                                  Template.ON_CLICK_ANNOTATION, span))
    return out


_XML_TAG_RE = re.compile(r"<[\w.][^>]*>")
_ONCLICK_ATTR_RE = re.compile(r'android:onClick\s*=\s*"([\w$]+)"')


def _match_layout_attribute(text, widget_id, file_name):
    lines = _Lines(text)
    out = []
    for m in _XML_TAG_RE.finditer(text):
        tag = m.group(0)
        if f'android:id="@+id/{widget_id}"' not in tag and \
                f'android:id="@id/{widget_id}"' not in tag:
            continue
        om = _ONCLICK_ATTR_RE.search(tag)
        if not om:
            continue
        span = lines.span_of(m.start(), m.end())
        snippet = slice_lines(text, *span)
        out.append(ResponseMethod(file_name, om.group(1), snippet,
                                  Template.LAYOUT_ATTRIBUTE, span))
    return out


# --------------------------------------------------------------------------
# selection


def prioritize(matches: Sequence[ResponseMethod]) -> Optional[ResponseMethod]:
    """Best match under the fixed template priority, ties by file then line."""
    if not matches:
        return None
    return min(matches, key=lambda m: (_PRIORITY[m.template], m.file,
                                       m.span[0]))


def resolve_layout_handler(rm: ResponseMethod,
                           source_root: str | Path) -> ResponseMethod:
    """Swap a layout-attribute match's snippet for the declared handler
    method in the activity sources; unresolved handlers keep the XML slice."""
    if rm.template is not Template.LAYOUT_ATTRIBUTE:
        return rm
    root = Path(source_root)
    decl_re = re.compile(
        r"(?:(?:public|private|protected|static|final)\s+)*[\w$<>\[\]]+\s+"
        + re.escape(rm.method_name) + r"\s*\([^)]*\)\s*\{")
    for path in sorted(root.rglob("*.java")):
        try:
            text = path.read_text(encoding="utf-8")
        except OSError:
            continue
        masked = mask_comments_and_strings(text)
        dm = decl_re.search(masked)
        if not dm:
            continue
        open_idx = masked.find("{", dm.end() - 1)
        close_idx = _matching(masked, open_idx)
        if close_idx < 0:
            continue
        lines = _Lines(text)
        span = lines.span_of(dm.start(), close_idx + 1)
        return replace(rm, file=path.relative_to(root).as_posix(),
                       snippet=slice_lines(text, *span), span=span)
    return rm


def _path_proximity(a: str, b: str) -> int:
    """Number of common leading path components."""
    pa, pb = a.split("/"), b.split("/")
    n = 0
    for x, y in zip(pa, pb):
        if x != y:
            break
        n += 1
    return n


def localize_id(source_root: str | Path,
                widget_id: str) -> Optional[ResponseMethod]:
    """Full localization for a widget id over a source tree.

    Candidates are ranked by template priority, then proximity to the layout
    file declaring the id, then path and line, so duplicate ids across files
    resolve deterministically.
    """
    root = Path(source_root)
    declaring = []
    matches: list[ResponseMethod] = []
    decl_re = re.compile(rf"@\+id/{re.escape(widget_id)}\b")
    for rel in find_candidate_files(root, widget_id):
        try:
            text = (root / rel).read_text(encoding="utf-8")
        except OSError as e:
            log.warning("skipping unreadable file %s: %s", rel, e)
            continue
        if rel.suffix == ".xml" and decl_re.search(text):
            declaring.append(rel.as_posix())
        matches += match_templates(text, widget_id, file=rel)
    matches = [resolve_layout_handler(m, root) for m in matches]
    if not matches:
        return None

    def rank(m: ResponseMethod):
        prox = max((_path_proximity(m.file, d) for d in declaring), default=0)
        return (_PRIORITY[m.template], -prox, m.file, m.span[0])

    return min(matches, key=rank)


# --------------------------------------------------------------------------
# nested inlining


def _method_index(source_root: str | Path) -> dict[str, str]:
    """Map of method name -> body text over a source tree (first definition
    in path order wins)."""
    index: dict[str, str] = {}
    decl_re = re.compile(r"\b([\w$]+)\s+([\w$]+)\s*\(([^)]*)\)\s*\{")
    for path in sorted(Path(source_root).rglob("*.java")):
        try:
            text = path.read_text(encoding="utf-8")
        except OSError:
            continue
        masked = mask_comments_and_strings(text)
        for m in decl_re.finditer(masked):
            rettype, name = m.group(1), m.group(2)
            if rettype in _KEYWORDS or name in _KEYWORDS or name in index:
                continue
            open_idx = masked.find("{", m.end() - 1)
            close_idx = _matching(masked, open_idx)
            if close_idx < 0:
                continue
            index[name] = text[open_idx + 1:close_idx].strip()
    return index


_CALL_SITE_RE = re.compile(r"(?<![\w$.])([\w$]+)\s*\(")


def inline_nested(rm: ResponseMethod, source_root: str | Path,
                  max_depth: int = 2) -> ResponseMethod:
    """Textually replace calls to tree-local methods with their bodies.

    Expansion runs breadth-first up to max_depth passes; each method body is
    inlined at most once overall, which cuts recursion cycles.
    """
    if max_depth <= 0:
        return rm
    index = _method_index(source_root)
    snippet = rm.snippet
    visited: set[str] = set()
    for _ in range(max_depth):
        masked = mask_comments_and_strings(snippet)
        sites = []
        for m in _CALL_SITE_RE.finditer(masked):
            name = m.group(1)
            if name in _KEYWORDS or name in visited or name not in index:
                continue
            close_idx = _matching(masked, masked.find("(", m.start()),
                                  "(", ")")
            if close_idx < 0:
                continue
            sites.append((m.start(1), close_idx + 1, name))
        if not sites:
            break
        for start, end, name in reversed(sites):
            snippet = snippet[:start] + "{ " + index[name] + " }" \
                + snippet[end:]
        visited.update(name for _, _, name in sites)
    if snippet == rm.snippet:
        return rm
    return replace(rm, snippet=snippet)
