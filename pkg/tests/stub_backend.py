"""Scripted backend for protocol tests; speaks line-delimited JSON on stdio.

Modes (argv):
  default          caption -> "a <stem> icon", code -> first start subtoken
  --shuffle        buffer replies in pairs and emit them swapped
  --bad-handshake  reply to hello with a malformed object
  --exit-now       exit immediately without answering
  --empty-text     reply with an empty text field
  --error-reply    reply with an error field
  --unknown-id     reply once with a fabricated id
  --caption-only   advertise only the caption kind
"""

import json
import sys
from pathlib import Path


def reply(obj):
    sys.stdout.write(json.dumps(obj) + "\n")
    sys.stdout.flush()


def answer(req):
    if req.get("kind") == "caption":
        name = Path(req.get("image_path", "widget")).stem
        return f"a {name} icon"
    paths = req.get("paths", [])
    if paths:
        first = paths[0].split(",")[0].split("|")[0]
        return first or "something"
    return "does nothing"


def main():
    mode = sys.argv[1] if len(sys.argv) > 1 else ""
    if mode == "--exit-now":
        return 1

    hello = json.loads(sys.stdin.readline())
    assert hello.get("kind") == "hello"
    if mode == "--bad-handshake":
        reply({"surprise": True})
        return 0
    kinds = ["caption"] if mode == "--caption-only" else ["caption", "code"]
    reply({"name": "stub", "version": "1.0", "kinds": kinds})

    held = None
    for line in sys.stdin:
        if not line.strip():
            continue
        try:
            req = json.loads(line)
        except json.JSONDecodeError:
            reply({"id": -1, "error": "unparseable request"})
            continue
        rid = req.get("id")
        if mode == "--empty-text":
            reply({"id": rid, "text": "   "})
        elif mode == "--error-reply":
            reply({"id": rid, "error": "model exploded"})
        elif mode == "--unknown-id":
            reply({"id": 10_000 + (rid or 0), "text": "who am i"})
        elif mode == "--shuffle":
            if held is None:
                held = req
            else:
                reply({"id": rid, "text": answer(req)})
                reply({"id": held["id"], "text": answer(held)})
                held = None
        else:
            reply({"id": rid, "text": answer(req)})
    if held is not None:
        reply({"id": held["id"], "text": answer(held)})
    return 0


if __name__ == "__main__":
    sys.exit(main())
