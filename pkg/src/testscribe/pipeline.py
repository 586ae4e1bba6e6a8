"""End-to-end orchestration: script -> per-operation intents -> report.

XPath-located operations are resolved against the captured layout and
described from widget text, OCR overlap, and the widget image caption.
ID-located operations go through response-method localization and AST-path
code summarization; when localization fails they fall back to the GUI route
via the layout node carrying the resource id (flagged in the evidence).
Individual operation failures degrade to unmapped entries and never abort
the run.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

from .ast_paths import DEFAULT_MAX_PATH_LEN, AstPath, extract_paths
from .backend import BackendHandle
from .code_ast import build_ast
from .code_intent import code_intent
from .errors import BackendError, BundleIncompleteError, TestscribeError
from .gui_intent import (GalleryEntry, Intent, IntentSource, caption_widget,
                         load_ocr, merge_gui_intents, textual_intent)
from .layout import (LayoutNode, WidgetMatch, node_xpath, parse_layout,
                     parse_xpath, resolve_xpath)
from .localization import ResponseMethod, inline_nested, localize_id
from .script_model import (ActionKind, LocatorKind, Operation,
                           OperationSequence)


@dataclass(frozen=True)
class BundleEntry:
    index: int
    screenshot: Path
    layout: Path
    widget_image: Optional[Path] = None
    ocr: Optional[Path] = None


@dataclass(frozen=True)
class TraceBundle:
    root: Path
    entries: dict[int, BundleEntry]


def load_bundle(root: str | Path) -> TraceBundle:
    """Load a per-operation capture directory via its manifest.json."""
    root = Path(root)
    manifest_path = root / "manifest.json"
    if not manifest_path.is_file():
        raise BundleIncompleteError(f"no manifest.json under {root}")
    manifest = json.loads(manifest_path.read_text(encoding="utf-8"))
    entries: dict[int, BundleEntry] = {}
    missing: list[str] = []

    def resolve(rel: Optional[str], required: bool) -> Optional[Path]:
        if rel is None:
            if required:
                missing.append("<unspecified>")
            return None
        p = root / rel
        if not p.is_file():
            missing.append(rel)
        return p

    for op in manifest.get("operations", []):
        idx = op["index"]
        entries[idx] = BundleEntry(
            idx,
            resolve(op.get("screenshot"), required=True),
            resolve(op.get("layout"), required=True),
            resolve(op.get("widget_image"), required=False),
            resolve(op.get("ocr"), required=False))
    if missing:
        raise BundleIncompleteError(
            f"bundle {root} is missing files: {', '.join(sorted(missing))}")
    return TraceBundle(root, entries)


@dataclass
class PipelineConfig:
    gallery: Optional[list[GalleryEntry]] = None
    backend: Optional[BackendHandle] = None
    inline_depth: int = 2
    max_path_len: int = DEFAULT_MAX_PATH_LEN


@dataclass
class OpResult:
    op: Operation
    intents: list[Intent]
    evidence: dict
    paths: list[AstPath] = field(default_factory=list)
    error: Optional[str] = None

    @property
    def mapped(self) -> bool:
        return bool(self.intents)


@dataclass
class IntentReport:
    script_path: str
    per_op: list[OpResult]
    script_intent: str
    stats: dict[str, int]

    @property
    def has_errors(self) -> bool:
        return any(r.error for r in self.per_op)


def _simple_id(selector: str) -> str:
    return selector.rsplit("/", 1)[-1]


def _widget_evidence(root: LayoutNode, m: WidgetMatch) -> dict:
    return {
        "xpath": node_xpath(root, m.node),
        "bounds": m.bounds.as_list() if m.bounds else None,
        "text": m.text,
        "content_desc": m.content_desc,
        "resource_id": m.resource_id,
    }


def _gui_route(op: Operation, m: WidgetMatch, root: LayoutNode,
               entry: BundleEntry, config: PipelineConfig) -> OpResult:
    tokens = load_ocr(entry.ocr) if entry.ocr else []
    intent_t = textual_intent(m, tokens, op.index)
    intent_v = None
    evidence = {"widget_match": _widget_evidence(root, m)}
    if entry.widget_image is not None and \
            (config.backend is not None or config.gallery):
        try:
            intent_v = caption_widget(entry.widget_image,
                                      config.gallery or [],
                                      config.backend, op.index)
        except BackendError as e:
            # a broken captioner must not discard the textual evidence
            evidence["caption_error"] = str(e)
    merged = merge_gui_intents(intent_v, intent_t)
    return OpResult(op, [merged] if merged else [], evidence)


def _find_by_resource_id(root: LayoutNode, selector: str,
                         simple_id: str) -> Optional[WidgetMatch]:
    exact = [n for n in root.walk()
             if n.attrs.get("resource-id") == selector]
    if len(exact) == 1:
        return WidgetMatch.from_node(exact[0])
    if not exact:
        suffix = [n for n in root.walk()
                  if n.attrs.get("resource-id", "").endswith(f"/{simple_id}")]
        if len(suffix) == 1:
            return WidgetMatch.from_node(suffix[0])
    return None


def _code_route(op: Operation, entry: BundleEntry, source_root: Optional[Path],
                config: PipelineConfig) -> OpResult:
    wid = _simple_id(op.selector)
    rm: Optional[ResponseMethod] = None
    if source_root is not None and source_root.is_dir():
        rm = localize_id(source_root, wid)
    if rm is None:
        # GUI fallback: describe the layout node carrying this resource id
        root = parse_layout(entry.layout.read_text(encoding="utf-8"))
        m = _find_by_resource_id(root, op.selector, wid)
        if m is None:
            return OpResult(op, [], {"error": f"id {wid!r} not localized and "
                                              f"absent from the layout dump"})
        result = _gui_route(op, m, root, entry, config)
        result.evidence["gui_fallback"] = True
        return result
    rm = inline_nested(rm, source_root, config.inline_depth)
    ast = build_ast(rm.snippet)
    paths = extract_paths(ast, config.max_path_len)
    intent = code_intent(rm, paths, config.backend, op.index)
    evidence = {"response_method": {
        "file": rm.file,
        "method_name": rm.method_name,
        "template": int(rm.template),
        "span": list(rm.span),
        "snippet": rm.snippet,
        "path_count": len(paths),
    }}
    return OpResult(op, [intent] if intent else [], evidence, paths=paths)


def run_pipeline(script: OperationSequence, bundle: TraceBundle,
                 source_root: Optional[str | Path],
                 config: Optional[PipelineConfig] = None) -> IntentReport:
    config = config or PipelineConfig()
    src = Path(source_root) if source_root else None
    missing = [op.index for op in script.operations
               if op.index not in bundle.entries]
    if missing:
        raise BundleIncompleteError(
            f"bundle lacks entries for operations {missing}")

    results: list[OpResult] = []
    for op in script.operations:
        entry = bundle.entries[op.index]
        try:
            if op.locator_kind is LocatorKind.XPATH:
                root = parse_layout(entry.layout.read_text(encoding="utf-8"))
                sel = parse_xpath(op.selector)
                m = resolve_xpath(root, sel)
                results.append(_gui_route(op, m, root, entry, config))
            else:
                results.append(_code_route(op, entry, src, config))
        except TestscribeError as e:
            results.append(OpResult(op, [], {"error": str(e)}, error=str(e)))

    results.sort(key=lambda r: r.op.index)
    script_intent = aggregate(
        [r.intents[0] if r.intents else None for r in results])
    gui_sources = (IntentSource.GUI_TEXT, IntentSource.GUI_IMAGE)
    stats = {
        "total_ops": len(results),
        "mapped_ops": sum(1 for r in results if r.mapped),
        "gui_count": sum(1 for r in results
                         if any(i.source in gui_sources for i in r.intents)),
        "code_count": sum(1 for r in results
                          if any(i.source is IntentSource.CODE
                                 for i in r.intents)),
    }
    return IntentReport(script.script_path, results, script_intent, stats)


def aggregate(intents_in_order: list[Optional[Intent]]) -> str:
    """Join per-operation intents into one script-level sentence.

    Consecutive case-insensitive duplicates collapse to the first occurrence;
    unmapped operations appear as transitions.
    """
    parts: list[str] = []
    prev_text: Optional[str] = None
    for i, intent in enumerate(intents_in_order, 1):
        if intent is None:
            parts.append(f"step {i}: (transition)")
            prev_text = None
            continue
        if prev_text is not None and \
                intent.text.casefold() == prev_text.casefold():
            prev_text = intent.text
            continue
        parts.append(f"step {i}: {intent.text}")
        prev_text = intent.text
    return "; ".join(parts)


# --------------------------------------------------------------------------
# rendering


def _report_dict(r: IntentReport) -> dict:
    ops = []
    for res in r.per_op:
        op = res.op
        ops.append({
            "index": op.index,
            "locator_kind": op.locator_kind.value,
            "selector": op.selector,
            "action": op.action.label,
            "payload": op.payload,
            "intents": [{"source": i.source.value, "text": i.text,
                         "confidence": i.confidence} for i in res.intents],
            "mapped": res.mapped,
            "evidence": res.evidence,
        })
    return {"script": r.script_path, "ops": ops,
            "script_intent": r.script_intent, "stats": r.stats}


def render_report(r: IntentReport, format: str = "json") -> str:
    """Serialize a report; JSON output is deterministic byte-for-byte."""
    if format == "json":
        return json.dumps(_report_dict(r), indent=2, ensure_ascii=True) + "\n"
    if format == "md":
        lines = [f"# Test intent report: {r.script_path}", ""]
        if r.script_intent:
            lines += ["**Script intent:** " + r.script_intent, ""]
        for res in r.per_op:
            op = res.op
            lines.append(f"## Step {op.index}: {op.action.label} "
                         f"[{op.locator_kind.value}] `{op.selector}`")
            if res.intents:
                for intent in res.intents:
                    lines.append(f"- {intent.text} "
                                 f"({intent.source.value}, "
                                 f"confidence {intent.confidence:.2f})")
            else:
                lines.append("- (unmapped)")
            if res.error:
                lines.append(f"- error: {res.error}")
            lines.append("")
        s = r.stats
        lines.append(f"Mapped {s['mapped_ops']}/{s['total_ops']} operations "
                     f"(GUI {s['gui_count']}, code {s['code_count']}).")
        return "\n".join(lines) + "\n"
    raise ValueError(f"unknown report format: {format!r}")
