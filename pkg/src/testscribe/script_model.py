"""Operation-sequence model for Appium-style GUI test scripts.

A test script is reduced to an ordered list of operations, each pairing a
widget lookup (``findElementById`` / ``findElementByXPath``) with the action
performed on the returned element. Extraction is lexical: only the two lookup
method names and a fixed action vocabulary are recognized, and element
variables are linked to later actions by name under a single-assignment
assumption.
"""

from __future__ import annotations

import math
import statistics
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Iterator, Optional

from .errors import EmptyCorpus, UnbalancedQuote, UnterminatedCall


class LocatorKind(Enum):
    ID = "ID"
    XPATH = "XPATH"


class ActionKind(Enum):
    CLICK = "CLICK"
    SEND_KEYS = "SEND_KEYS"
    LONG_PRESS = "LONG_PRESS"
    CLEAR = "CLEAR"
    OTHER = "OTHER"


# lookup method name -> locator kind
_LOOKUPS = {
    "findElementById": LocatorKind.ID,
    "findElementByXPath": LocatorKind.XPATH,
}

# action method name -> kind; anything else becomes OTHER(name)
_ACTIONS = {
    "click": ActionKind.CLICK,
    "sendKeys": ActionKind.SEND_KEYS,
    "longPress": ActionKind.LONG_PRESS,
    "longClick": ActionKind.LONG_PRESS,
    "clear": ActionKind.CLEAR,
}


@dataclass(frozen=True)
class Action:
    kind: ActionKind
    name: Optional[str] = None  # set for OTHER only

    @property
    def label(self) -> str:
        if self.kind is ActionKind.OTHER:
            return f"OTHER({self.name})"
        return self.kind.value


@dataclass(frozen=True)
class Operation:
    index: int  # 1-based
    locator_kind: LocatorKind
    selector: str
    action: Action
    payload: Optional[str] = None

    def __post_init__(self):
        if not self.selector:
            raise ValueError("operation selector must be non-empty")
        if self.action.kind is ActionKind.SEND_KEYS and self.payload is None:
            raise ValueError("SEND_KEYS requires a payload")
        if self.action.kind in (ActionKind.CLICK, ActionKind.LONG_PRESS,
                                ActionKind.CLEAR) and self.payload is not None:
            raise ValueError(f"{self.action.kind.value} must not carry a payload")


@dataclass(frozen=True)
class OperationSequence:
    operations: tuple[Operation, ...]
    script_path: str

    def __len__(self) -> int:
        return len(self.operations)


class CommentClass(Enum):
    UNCOMMENTED = "UNCOMMENTED"
    COMMENTED = "COMMENTED"
    WELL_COMMENTED = "WELL_COMMENTED"


@dataclass(frozen=True)
class CommentRatio:
    comment_lines: int
    code_lines: int
    blank_lines: int
    ratio: float
    comment_class: CommentClass


@dataclass(frozen=True)
class CorpusStats:
    script_count: int
    op_counts: tuple[int, ...]
    mean_ops: float
    stddev_ops: float


# --------------------------------------------------------------------------
# tokenizer


@dataclass(frozen=True)
class _Token:
    kind: str  # IDENT | STRING | PUNCT | NUMBER
    text: str
    line: int
    offset: int


_ESCAPES = {"n": "\n", "t": "\t", "r": "\r", "b": "\b", "f": "\f",
            "'": "'", '"': '"', "\\": "\\", "0": "\0"}


def _unescape(raw: str, line: int) -> str:
    out = []
    i = 0
    while i < len(raw):
        ch = raw[i]
        if ch != "\\":
            out.append(ch)
            i += 1
            continue
        if i + 1 >= len(raw):
            raise UnbalancedQuote("dangling escape in string literal", line)
        nxt = raw[i + 1]
        if nxt == "u" and i + 6 <= len(raw):
            hexpart = raw[i + 2:i + 6]
            try:
                out.append(chr(int(hexpart, 16)))
                i += 6
                continue
            except ValueError:
                pass
        out.append(_ESCAPES.get(nxt, nxt))
        i += 2
    return "".join(out)


def _tokenize(source: str) -> Iterator[_Token]:
    """Comment- and string-aware token stream over Java-like source."""
    i = 0
    line = 1
    n = len(source)
    while i < n:
        ch = source[i]
        if ch == "\n":
            line += 1
            i += 1
        elif ch.isspace():
            i += 1
        elif source.startswith("//", i):
            j = source.find("\n", i)
            i = n if j < 0 else j
        elif source.startswith("/*", i):
            j = source.find("*/", i + 2)
            if j < 0:
                # unterminated block comments swallow to EOF; not an error here
                line += source.count("\n", i)
                i = n
            else:
                line += source.count("\n", i, j)
                i = j + 2
        elif ch == '"':
            start_line = line
            j = i + 1
            while j < n:
                c = source[j]
                if c == "\\":
                    j += 2
                    continue
                if c == "\n":
                    raise UnbalancedQuote("string literal not closed", start_line)
                if c == '"':
                    break
                j += 1
            if j >= n:
                raise UnbalancedQuote("string literal not closed", start_line)
            yield _Token("STRING", _unescape(source[i + 1:j], start_line),
                         start_line, i)
            i = j + 1
        elif ch == "'":
            # char literal; skip contents
            j = i + 1
            while j < n and source[j] != "'":
                j += 2 if source[j] == "\\" else 1
            i = min(j + 1, n)
        elif ch.isalpha() or ch == "_" or ch == "$":
            j = i
            while j < n and (source[j].isalnum() or source[j] in "_$"):
                j += 1
            yield _Token("IDENT", source[i:j], line, i)
            i = j
        elif ch.isdigit():
            j = i
            while j < n and (source[j].isalnum() or source[j] in "._"):
                j += 1
            yield _Token("NUMBER", source[i:j], line, i)
            i = j
        else:
            yield _Token("PUNCT", ch, line, i)
            i += 1


# --------------------------------------------------------------------------
# script parsing


@dataclass
class _Lookup:
    kind: LocatorKind
    selector: str
    line: int
    offset: int
    var: Optional[str] = None
    actions: list = field(default_factory=list)  # (offset, name, payload)


def _parse_call_args(tokens: list[_Token], i: int, line: int):
    """Consume a balanced argument list starting at tokens[i] == '('.

    Returns (first_string_arg_or_None, index_after_closing_paren).
    """
    assert tokens[i].text == "("
    depth = 0
    first_string = None
    j = i
    while j < len(tokens):
        t = tokens[j]
        if t.kind == "PUNCT" and t.text == "(":
            depth += 1
        elif t.kind == "PUNCT" and t.text == ")":
            depth -= 1
            if depth == 0:
                return first_string, j + 1
        elif t.kind == "STRING" and first_string is None and depth == 1:
            first_string = t.text
        j += 1
    raise UnterminatedCall("call is never closed", line)


def _receiver_start(tokens: list[_Token], i: int) -> int:
    """Walk back over a `recv.recv2.` chain preceding tokens[i]; return the
    index of the chain's first token (or i when there is no receiver)."""
    j = i
    while j >= 2 and tokens[j - 1].text == "." and tokens[j - 2].kind == "IDENT":
        j -= 2
    return j


def parse_script(source: str, script_path: str = "<memory>") -> OperationSequence:
    """Extract the operation sequence from a test script.

    One operation is produced per lookup-action pair, ordered by the lookup
    call's source offset; a lookup with no action maps to ``OTHER(none)``.
    """
    tokens = list(_tokenize(source))
    lookups: list[_Lookup] = []
    by_var: dict[str, _Lookup] = {}

    i = 0
    while i < len(tokens):
        t = tokens[i]
        if t.kind == "IDENT" and t.text in _LOOKUPS and \
                i + 1 < len(tokens) and tokens[i + 1].text == "(":
            if i + 2 >= len(tokens) or tokens[i + 2].kind != "STRING":
                raise UnterminatedCall(
                    f"{t.text} expects a string literal argument", t.line)
            selector, after = _parse_call_args(tokens, i + 1, t.line)
            if selector is None:
                raise UnterminatedCall(
                    f"{t.text} expects a string literal argument", t.line)
            lk = _Lookup(_LOOKUPS[t.text], selector, t.line, t.offset)
            lookups.append(lk)

            # variable binding: `Type var = driver.findElementById(...)`
            start = _receiver_start(tokens, i)
            if start >= 2 and tokens[start - 1].text == "=" and \
                    tokens[start - 2].kind == "IDENT":
                lk.var = tokens[start - 2].text
                by_var[lk.var] = lk

            # chained action: `.name(...)` immediately after the lookup call
            i = after
            if i + 2 < len(tokens) and tokens[i].text == "." and \
                    tokens[i + 1].kind == "IDENT" and tokens[i + 2].text == "(":
                name = tokens[i + 1]
                payload, i = _parse_call_args(tokens, i + 2, name.line)
                lk.actions.append((name.offset, name.text, payload))
        elif t.kind == "IDENT" and t.text in by_var and \
                i + 3 < len(tokens) and tokens[i + 1].text == "." and \
                tokens[i + 2].kind == "IDENT" and tokens[i + 3].text == "(":
            name = tokens[i + 2]
            payload, i = _parse_call_args(tokens, i + 3, name.line)
            by_var[t.text].actions.append((name.offset, name.text, payload))
        else:
            i += 1

    ops: list[Operation] = []
    for lk in lookups:
        if not lk.actions:
            ops.append(_make_op(len(ops) + 1, lk, "none", None))
            continue
        for _, name, payload in sorted(lk.actions):
            ops.append(_make_op(len(ops) + 1, lk, name, payload))
    return OperationSequence(tuple(ops), script_path)


def _make_op(index: int, lk: _Lookup, action_name: str,
             payload: Optional[str]) -> Operation:
    kind = _ACTIONS.get(action_name)
    if kind is ActionKind.SEND_KEYS:
        return Operation(index, lk.kind, lk.selector,
                         Action(kind), payload if payload is not None else "")
    if kind is not None:
        return Operation(index, lk.kind, lk.selector, Action(kind), None)
    return Operation(index, lk.kind, lk.selector,
                     Action(ActionKind.OTHER, action_name), payload)


def parse_script_file(path: str | Path) -> OperationSequence:
    p = Path(path)
    return parse_script(p.read_text(encoding="utf-8"), str(path))


# --------------------------------------------------------------------------
# corpus statistics


def script_stats(sequences: list[OperationSequence]) -> CorpusStats:
    """Mean and sample standard deviation of per-script operation counts."""
    if not sequences:
        raise EmptyCorpus("no scripts to summarize")
    counts = tuple(len(s) for s in sequences)
    mean = statistics.fmean(counts)
    stddev = statistics.stdev(counts) if len(counts) > 1 else 0.0
    return CorpusStats(len(counts), counts, mean, stddev)


def find_scripts(root: str | Path, pattern: str = "*Test*.java") -> list[Path]:
    """Script files under a directory tree matching a glob on the file name."""
    return sorted(p for p in Path(root).rglob(pattern) if p.is_file())


# --------------------------------------------------------------------------
# comment-code ratio


def comment_code_ratio(source: str) -> CommentRatio:
    """Classify a source file by its ratio of comment lines to code lines.

    A line counts as a comment line when its entire non-blank content lies in
    `//` or `/* */` comments; any code character makes it a code line. The
    well-commented threshold is strict: ratio must exceed 0.3.
    """
    comment_lines = code_lines = blank_lines = 0
    in_block = False
    for raw in source.split("\n"):
        has_code = False
        has_comment = in_block and bool(raw.strip())
        i = 0
        in_string = False
        while i < len(raw):
            ch = raw[i]
            if in_block:
                if raw.startswith("*/", i):
                    in_block = False
                    i += 2
                else:
                    i += 1
                continue
            if in_string:
                if ch == "\\":
                    i += 2
                    continue
                if ch == '"':
                    in_string = False
                has_code = True
                i += 1
                continue
            if raw.startswith("//", i):
                has_comment = True
                break
            if raw.startswith("/*", i):
                in_block = True
                has_comment = True
                i += 2
                continue
            if ch == '"':
                in_string = True
                has_code = True
                i += 1
                continue
            if not ch.isspace():
                has_code = True
            i += 1
        if has_code:
            code_lines += 1
        elif has_comment:
            comment_lines += 1
        else:
            blank_lines += 1

    if code_lines > 0:
        ratio = comment_lines / code_lines
    else:
        ratio = math.inf if comment_lines > 0 else 0.0
    if ratio > 0.3:
        cls = CommentClass.WELL_COMMENTED
    elif ratio > 0:
        cls = CommentClass.COMMENTED
    else:
        cls = CommentClass.UNCOMMENTED
    return CommentRatio(comment_lines, code_lines, blank_lines, ratio, cls)
