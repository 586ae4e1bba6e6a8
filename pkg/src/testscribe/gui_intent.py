"""GUI-side intent generation: widget text, OCR overlap, and image captions.

The caption backend is pluggable. Without one, widget images are matched
against a caption gallery by 64-bit average hash: the image is reduced to an
8x8 grid of grayscale cell means, thresholded at the mean of the 64 cells
(strictly greater), and packed row-major, MSB first. Nearest Hamming distance
wins; distances above 16 produce no caption.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, replace
from enum import Enum
from pathlib import Path
from typing import Optional, Sequence

import numpy as np
from PIL import Image

from .errors import EmptyGalleryError, TestscribeError
from .layout import Rect, WidgetMatch, dedupe_casefold, extract_text_attrs

# OCR tokens overlap a widget when at least this fraction of the token box
# lies inside the widget bounds (boundary inclusive).
OCR_OVERLAP_THRESHOLD = 0.5

# Hamming distances above this are treated as "no confident caption".
MAX_HASH_DISTANCE = 16


class IntentSource(Enum):
    GUI_TEXT = "GUI_TEXT"
    GUI_IMAGE = "GUI_IMAGE"
    CODE = "CODE"


@dataclass(frozen=True)
class Intent:
    op_index: int
    source: IntentSource
    text: str
    confidence: float

    def __post_init__(self):
        if not self.text:
            raise ValueError("intent text must be non-empty")
        if not 0.0 <= self.confidence <= 1.0:
            raise ValueError("confidence must be within [0, 1]")

    def at_index(self, op_index: int) -> "Intent":
        return replace(self, op_index=op_index)


@dataclass(frozen=True)
class OcrToken:
    text: str
    box: Rect


def load_ocr(path: str | Path) -> list[OcrToken]:
    """Read OCR tokens from a JSON array of {"text":..., "box":[l,t,r,b]}."""
    raw = json.loads(Path(path).read_text(encoding="utf-8"))
    tokens = []
    for item in raw:
        l, t, r, b = item["box"]
        tokens.append(OcrToken(item["text"], Rect(l, t, r, b)))
    return tokens


def ocr_match(tokens: Sequence[OcrToken], widget_bounds: Rect) -> list[str]:
    """Texts of tokens overlapping the widget, in reading order."""
    hits = []
    for tok in tokens:
        area = tok.box.area
        if area <= 0:
            continue
        if tok.box.intersection_area(widget_bounds) / area >= OCR_OVERLAP_THRESHOLD:
            hits.append(tok)
    hits.sort(key=lambda t: (t.box.top, t.box.left))
    return [t.text for t in hits]


def textual_intent(m: WidgetMatch, tokens: Sequence[OcrToken],
                   op_index: int = 0) -> Optional[Intent]:
    """Combine layout text attributes with overlapping OCR text."""
    attrs = extract_text_attrs(m)
    ocr = ocr_match(tokens, m.bounds) if m.bounds is not None else []
    parts = dedupe_casefold(attrs + ocr)
    if not parts:
        return None
    confidence = 1.0 if attrs else 0.8
    return Intent(op_index, IntentSource.GUI_TEXT, " ".join(parts), confidence)


# --------------------------------------------------------------------------
# average hash + gallery


def _to_gray(img: Image.Image) -> np.ndarray:
    rgb = np.asarray(img.convert("RGB"), dtype=np.float64)
    return 0.299 * rgb[:, :, 0] + 0.587 * rgb[:, :, 1] + 0.114 * rgb[:, :, 2]


def average_hash(image: str | Path | Image.Image) -> int:
    """64-bit average hash of an image; depends on pixel content only."""
    if isinstance(image, (str, Path)):
        with Image.open(image) as img:
            gray = _to_gray(img)
    else:
        gray = _to_gray(image)
    h, w = gray.shape
    if h < 8:
        gray = np.repeat(gray, math.ceil(8 / h), axis=0)
    if w < 8:
        gray = np.repeat(gray, math.ceil(8 / w), axis=1)
    cells = np.empty((8, 8))
    for r, band in enumerate(np.array_split(gray, 8, axis=0)):
        for c, cell in enumerate(np.array_split(band, 8, axis=1)):
            cells[r, c] = cell.mean()
    threshold = cells.mean()
    bits = (cells > threshold).flatten()
    value = 0
    for bit in bits:
        value = (value << 1) | int(bit)
    return value


def hamming_distance(a: int, b: int) -> int:
    return (a ^ b).bit_count()


@dataclass(frozen=True)
class GalleryEntry:
    id: str
    image_path: str
    caption: str
    hash: int


def load_gallery(directory: str | Path) -> list[GalleryEntry]:
    """Load a caption gallery: images plus a captions.tsv index.

    Each line of captions.tsv is `id<TAB>image_file<TAB>caption`.
    """
    root = Path(directory)
    index = root / "captions.tsv"
    entries = []
    seen_ids = set()
    for lineno, line in enumerate(
            index.read_text(encoding="utf-8").splitlines(), 1):
        if not line.strip():
            continue
        fields = line.split("\t")
        if len(fields) != 3:
            raise TestscribeError(
                f"{index}:{lineno}: expected id<TAB>image<TAB>caption")
        entry_id, image_file, caption = fields
        if not caption:
            raise TestscribeError(f"{index}:{lineno}: empty caption")
        if entry_id in seen_ids:
            raise TestscribeError(f"{index}:{lineno}: duplicate id {entry_id!r}")
        seen_ids.add(entry_id)
        image_path = root / image_file
        entries.append(GalleryEntry(entry_id, str(image_path), caption,
                                    average_hash(image_path)))
    return entries


def caption_widget(image: str | Path, gallery: Sequence[GalleryEntry],
                   backend=None, op_index: int = 0) -> Optional[Intent]:
    """Caption a widget image via the backend, or nearest gallery entry.

    Gallery matching is deterministic: minimal Hamming distance, ties broken
    by ascending entry id; confidence is 1 - distance/64.
    """
    if backend is not None:
        text = backend.request_caption(str(image))
        return Intent(op_index, IntentSource.GUI_IMAGE, text, 0.7)
    if not gallery:
        raise EmptyGalleryError("caption gallery is empty and no backend given")
    query = average_hash(image)
    best = min(gallery,
               key=lambda e: (hamming_distance(query, e.hash), e.id))
    distance = hamming_distance(query, best.hash)
    if distance > MAX_HASH_DISTANCE:
        return None
    return Intent(op_index, IntentSource.GUI_IMAGE, best.caption,
                  1.0 - distance / 64.0)


def merge_gui_intents(intent_v: Optional[Intent],
                      intent_t: Optional[Intent]) -> Optional[Intent]:
    """Merge visual and textual intents into one GUI intent.

    When both exist and differ (case-insensitively) the visual caption is
    appended in parentheses; an identical caption adds nothing.
    """
    if intent_t is None:
        return intent_v
    if intent_v is None:
        return intent_t
    if intent_t.text.casefold() == intent_v.text.casefold():
        return intent_t
    return Intent(intent_t.op_index, IntentSource.GUI_TEXT,
                  f"{intent_t.text} ({intent_v.text})",
                  max(intent_t.confidence, intent_v.confidence))
