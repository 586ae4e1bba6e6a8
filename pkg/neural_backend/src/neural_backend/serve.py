"""Serve trained models over the line-delimited JSON backend protocol.

One JSON object per line on stdin/stdout: a `hello` handshake, then
`caption` / `code` requests answered by id. Requests are handled one at a
time in arrival order; malformed lines get an error reply and the process
keeps serving.
"""

from __future__ import annotations

import json
import sys
from pathlib import Path

from . import __version__
from .captioner import load_captioner, load_image_tensor
from .errors import ArtifactError
from .path_model import load_path_model

NAME = "neural-backend"


def _reply(stream, obj):
    stream.write(json.dumps(obj) + "\n")
    stream.flush()


def _load_models(artifact_root: Path):
    captioner = path_model = None
    cap_dir = artifact_root / "captioner"
    path_dir = artifact_root / "path_model"
    if (cap_dir / "manifest.json").is_file():
        captioner = load_captioner(cap_dir)
    if (path_dir / "manifest.json").is_file():
        path_model = load_path_model(path_dir)
    if captioner is None and path_model is None:
        raise ArtifactError(f"no model artifacts under {artifact_root}")
    return captioner, path_model


def serve(artifact_root: str | Path, stdin=None, stdout=None) -> int:
    stdin = stdin or sys.stdin
    stdout = stdout or sys.stdout
    captioner, path_model = _load_models(Path(artifact_root))
    kinds = [k for k, model in (("caption", captioner), ("code", path_model))
             if model is not None]

    hello_line = stdin.readline()
    if not hello_line:
        return 1
    try:
        hello = json.loads(hello_line)
        assert hello.get("kind") == "hello"
    except (json.JSONDecodeError, AssertionError):
        _reply(stdout, {"id": -1, "error": "expected a hello handshake"})
        return 1
    _reply(stdout, {"name": NAME, "version": __version__, "kinds": kinds})

    for line in stdin:
        if not line.strip():
            continue
        try:
            request = json.loads(line)
            request_id = request["id"]
        except (json.JSONDecodeError, TypeError, KeyError):
            _reply(stdout, {"id": -1, "error": "malformed request line"})
            continue
        try:
            kind = request.get("kind")
            if kind == "caption" and captioner is not None:
                image = load_image_tensor(request["image_path"])
                text = captioner.caption(image)
            elif kind == "code" and path_model is not None:
                text = path_model.summarize(list(request.get("paths", [])))
            else:
                raise ValueError(f"unsupported request kind: {kind!r}")
            if not text.strip():
                _reply(stdout, {"id": request_id,
                                "error": "model produced no text"})
            else:
                _reply(stdout, {"id": request_id, "text": text})
        except Exception as e:  # keep serving whatever happens
            _reply(stdout, {"id": request_id, "error": f"{type(e).__name__}: "
                                                       f"{e}"})
    return 0


def main(argv=None) -> int:
    import argparse
    parser = argparse.ArgumentParser(
        description="serve trained models over the backend protocol")
    parser.add_argument("--artifacts", required=True,
                        help="directory holding captioner/ and/or "
                             "path_model/ artifact subdirectories")
    args = parser.parse_args(argv)
    return serve(args.artifacts)


if __name__ == "__main__":
    sys.exit(main())
