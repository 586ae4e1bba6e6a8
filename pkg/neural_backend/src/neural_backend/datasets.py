"""Bundled dataset loading and the deterministic 7:2:1 split."""

from __future__ import annotations

import json
import random
from dataclasses import dataclass
from pathlib import Path

from .errors import DatasetTooSmall

MIN_CAPTION_IMAGES = 50
MIN_PATH_PAIRS = 100


@dataclass(frozen=True)
class CaptionExample:
    image_path: Path
    caption: str


@dataclass(frozen=True)
class PathExample:
    paths: tuple[str, ...]
    summary: str


def load_caption_dataset(root: str | Path) -> list[CaptionExample]:
    """Read `labels.tsv` (`image_file<TAB>caption`) next to an images dir."""
    root = Path(root)
    out = []
    for line in (root / "labels.tsv").read_text(
            encoding="utf-8").splitlines():
        if not line.strip():
            continue
        image_file, caption = line.split("\t", 1)
        out.append(CaptionExample(root / "images" / image_file, caption))
    return out


def load_path_corpus(path: str | Path) -> list[PathExample]:
    raw = json.loads(Path(path).read_text(encoding="utf-8"))
    return [PathExample(tuple(item["paths"]), item["summary"])
            for item in raw]


def split_731(n: int, seed: int) -> dict[str, list[int]]:
    """Deterministic 7:2:1 index split, recorded verbatim in manifests."""
    order = list(range(n))
    random.Random(seed).shuffle(order)
    n_train = max(1, round(n * 0.7))
    n_val = max(1, round(n * 0.2))
    return {"train": sorted(order[:n_train]),
            "val": sorted(order[n_train:n_train + n_val]),
            "test": sorted(order[n_train + n_val:])}


def require_size(n: int, minimum: int, what: str):
    if n < minimum:
        raise DatasetTooSmall(f"{what}: got {n} examples, need >= {minimum}")
