#!/usr/bin/env python3
"""Regenerate the bundled training datasets.

The caption set is 60 synthetic widget icons (12 archetypes x 5 deterministic
variants). The path corpus is produced by the primary toolkit itself: a
synthetic app source tree plus a 120-operation script are analyzed with
`testscribe analyze --dump-paths`, and the dumped AST paths are paired with
the per-operation code intents from the report.

Run from the neural_backend directory:  python3 tools/make_datasets.py
"""

import json
import subprocess
import sys
import tempfile
from pathlib import Path

import numpy as np
from PIL import Image

HERE = Path(__file__).resolve().parent.parent
DATA = HERE / "data"


# --------------------------------------------------------------------------
# caption dataset


def canvas(bg=235):
    return np.full((32, 32, 3), bg, dtype=np.uint8)


def draw_archetypes():
    icons = {}
    yy, xx = np.mgrid[0:32, 0:32]

    img = canvas()
    img[np.abs(np.hypot(yy - 13, xx - 13) - 8) < 1.8] = 40
    for i in range(20, 30):
        img[i, i - 2:i + 1] = 40
    icons["magnifier"] = (img, "magnifier icon, search")

    img = canvas()
    for i in range(6):
        img[20 + i, 6 + i:8 + i] = 30
    for i in range(14):
        img[25 - i, 12 + i:14 + i] = 30
    icons["checkmark"] = (img, "checkmark icon, confirm")

    img = canvas()
    img[14:18, 4:28] = 50
    img[4:28, 14:18] = 50
    icons["plus"] = (img, "plus icon, add item")

    img = canvas()
    img[np.abs(np.hypot(yy - 16, xx - 16) - 9) < 2.5] = 60
    for sl in ((slice(14, 18), slice(2, 7)), (slice(14, 18), slice(25, 30)),
               (slice(2, 7), slice(14, 18)), (slice(25, 30), slice(14, 18))):
        img[sl] = 60
    icons["gear"] = (img, "gear icon, open settings")

    img = canvas()
    img[10:28, 9:23] = 70
    img[6:9, 6:26] = 70
    img[12:26, 13:15] = 235
    img[12:26, 17:19] = 235
    icons["trash"] = (img, "trash icon, delete")

    img = canvas()
    for i in range(10):
        img[16 - i, 6 + i:8 + i] = 45
        img[16 + i, 6 + i:8 + i] = 45
    img[15:18, 6:26] = 45
    icons["arrow"] = (img, "back arrow, navigate up")

    img = canvas()
    for cy in (7, 16, 25):
        img[np.hypot(yy - cy, xx - 16) < 3.2] = 35
    icons["dots"] = (img, "three dots, more options")

    img = canvas()
    img[(np.hypot(yy - 11, xx - 10) < 6) | (np.hypot(yy - 11, xx - 22) < 6)] \
        = 55
    for i in range(12):
        img[14 + i, 6 + i:27 - i] = 55
    icons["heart"] = (img, "heart icon, favorite")

    img = canvas()
    img[14:18, 4:28] = 65
    img[4:28, 14:18] = 65
    for i in range(10):
        img[8 + i, 8 + i:11 + i] = 65
        img[8 + i, 21 - i:24 - i] = 65
    icons["star"] = (img, "star icon, rate")

    img = canvas()
    for i in range(11):
        img[5 + i, 15 - i:17 + i] = 75
    img[16:28, 8:24] = 75
    img[20:28, 13:19] = 235
    icons["home"] = (img, "home icon, main screen")

    img = canvas()
    for cy, cx in ((8, 24), (16, 7), (26, 24)):
        img[np.hypot(yy - cy, xx - cx) < 3.5] = 45
    icons["share"] = (img, "share icon, send to app")

    img = canvas()
    img[10:26, 4:28] = 80
    img[6:10, 11:21] = 80
    img[np.abs(np.hypot(yy - 18, xx - 16) - 5) < 1.6] = 235
    icons["camera"] = (img, "camera icon, take photo")
    return icons


def variants(img: np.ndarray):
    """Five deterministic variants of an archetype."""
    yield "v0", img
    yield "v1", np.roll(img, 2, axis=1)
    yield "v2", np.roll(img, -2, axis=0)
    yield "v3", 255 - img
    bright = np.clip(img.astype(np.int16) + 15, 0, 255).astype(np.uint8)
    yield "v4", bright


def write_caption_dataset():
    out = DATA / "captions"
    images = out / "images"
    images.mkdir(parents=True, exist_ok=True)
    rows = []
    for name, (img, caption) in sorted(draw_archetypes().items()):
        for suffix, variant in variants(img):
            file_name = f"{name}_{suffix}.png"
            Image.fromarray(variant).save(images / file_name)
            rows.append(f"{file_name}\t{caption}")
    (out / "labels.tsv").write_text("\n".join(rows) + "\n", encoding="utf-8")
    print(f"caption dataset: {len(rows)} images")


# --------------------------------------------------------------------------
# path corpus via the primary CLI

VERBS = [("save", "store.insert(item);"), ("open", "window.show();"),
         ("delete", "db.remove(key);"), ("refresh", "loader.reload();"),
         ("share", "sender.post(payload);"), ("close", "dialog.dismiss();"),
         ("load", "cache.fetch(key);"), ("send", "mailer.deliver(msg);"),
         ("clear", "buffer.reset();"), ("toggle", "state.flip(flag);")]
NOUNS = ["note", "settings", "entry", "list", "item", "profile", "message",
         "alarm", "photo", "contact", "event", "draft"]


def synth_app(root: Path) -> int:
    src = root / "appsrc" / "com" / "example"
    src.mkdir(parents=True)
    cases = []
    methods = []
    ops = []
    index = 0
    for noun in NOUNS:
        for verb, body in VERBS:
            method = f"{verb}{noun.capitalize()}"
            wid = f"widget_{index}"
            cases.append(f"            case R.id.{wid}:\n"
                         f"                {method}();\n"
                         f"                break;")
            methods.append(f"    private void {method}() {{\n"
                           f"        {body}\n"
                           f"    }}")
            ops.append(f'        driver.findElementById('
                       f'"com.example:id/{wid}").click();')
            index += 1
    (src / "Handlers.java").write_text(
        "package com.example;\n\npublic class Handlers {\n\n"
        "    public void onClick(View v) {\n"
        "        switch (v.getId()) {\n" + "\n".join(cases) + "\n"
        "            default:\n                break;\n        }\n    }\n\n"
        + "\n\n".join(methods) + "\n}\n", encoding="utf-8")

    (root / "Script.java").write_text(
        "public class Script {\n    void run() {\n" + "\n".join(ops)
        + "\n    }\n}\n", encoding="utf-8")

    bundle = root / "bundle"
    shared = bundle / "shared"
    shared.mkdir(parents=True)
    Image.fromarray(canvas()).save(shared / "screenshot.png")
    (shared / "layout.xml").write_text(
        "<hierarchy><android.widget.FrameLayout/></hierarchy>",
        encoding="utf-8")
    manifest = {"operations": [
        {"index": i + 1, "screenshot": "shared/screenshot.png",
         "layout": "shared/layout.xml"} for i in range(index)]}
    (bundle / "manifest.json").write_text(json.dumps(manifest),
                                          encoding="utf-8")
    return index


def write_path_corpus():
    out = DATA / "paths"
    out.mkdir(parents=True, exist_ok=True)
    with tempfile.TemporaryDirectory() as tmp:
        root = Path(tmp)
        synth_app(root)
        report_path = root / "report.json"
        subprocess.run(
            [sys.executable, "-m", "testscribe.cli", "analyze",
             "--script", "Script.java", "--bundle", "bundle",
             "--source", "appsrc", "--dump-paths",
             "-o", str(report_path)],
            check=True, cwd=root, capture_output=True, text=True)
        report = json.loads(report_path.read_text(encoding="utf-8"))
        dump = (root / "report.json.paths").read_text(encoding="utf-8")

    groups: dict[int, list[str]] = {}
    current = None
    for line in dump.splitlines():
        if line.startswith("# op "):
            current = int(line.split()[2])
            groups[current] = []
        elif line.strip() and current is not None:
            groups[current].append(line)

    corpus = []
    for op in report["ops"]:
        paths = groups.get(op["index"], [])
        if not paths or not op["intents"]:
            continue
        corpus.append({"paths": paths, "summary": op["intents"][0]["text"]})
    (out / "corpus.json").write_text(json.dumps(corpus, indent=1) + "\n",
                                     encoding="utf-8")
    print(f"path corpus: {len(corpus)} (paths, summary) pairs")


if __name__ == "__main__":
    write_caption_dataset()
    write_path_corpus()
