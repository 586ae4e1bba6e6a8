"""External caption/code model protocol over a child process.

Wire format: one JSON object per line, UTF-8, LF. The client sends
``{"kind": "hello"}`` and expects ``{"name":..., "version":..., "kinds":
[...]}``; afterwards requests carry unique integer ids and replies are
correlated by id, so a backend may answer out of order. A reply id that
matches no outstanding request poisons the handle.
"""

from __future__ import annotations

import json
import shlex
import subprocess
import threading
from concurrent.futures import Future
from concurrent.futures import TimeoutError as FutureTimeout
from typing import Optional, Sequence

from .errors import (BackendFailure, BackendTimeout, HandshakeTimeout,
                     ProtocolError, SpawnFailure)

CAPTION = "caption"
CODE = "code"

HANDSHAKE_TIMEOUT = 10.0
REQUEST_TIMEOUT = 30.0


class BackendHandle:
    """A running backend process plus the correlation machinery."""

    def __init__(self, proc: subprocess.Popen, name: str, version: str,
                 kinds: frozenset[str]):
        self.proc = proc
        self.name = name
        self.version = version
        self.kinds = kinds
        self._write_lock = threading.Lock()
        self._pending_lock = threading.Lock()
        self._pending: dict[int, Optional[Future]] = {}
        self._next_id = 0
        self._broken: Optional[Exception] = None
        self._reader = threading.Thread(target=self._read_loop, daemon=True)
        self._reader.start()

    # -- lifecycle

    def close(self):
        try:
            if self.proc.stdin:
                self.proc.stdin.close()
        except OSError:
            pass
        try:
            self.proc.terminate()
            self.proc.wait(timeout=5)
        except (OSError, subprocess.TimeoutExpired):
            self.proc.kill()
        if self._reader.is_alive():
            self._reader.join(timeout=5)

    def __enter__(self):
        return self

    def __exit__(self, *exc):
        self.close()
        return False

    # -- reader side

    def _read_loop(self):
        stream = self.proc.stdout
        while True:
            line = stream.readline()
            if not line:
                self._fail_all(BackendFailure("backend closed its output"))
                return
            if not line.strip():
                continue
            try:
                reply = json.loads(line)
                reply_id = reply["id"]
            except (json.JSONDecodeError, TypeError, KeyError):
                self._fail_all(ProtocolError(
                    f"malformed backend reply: {line.strip()!r}"))
                return
            with self._pending_lock:
                if reply_id not in self._pending:
                    err = ProtocolError(
                        f"reply id {reply_id} matches no outstanding request")
                    self._broken = err
                    pending = list(self._pending.values())
                    self._pending.clear()
                    for fut in pending:
                        if fut is not None:
                            fut.set_exception(err)
                    return
                fut = self._pending.pop(reply_id)
            if fut is not None:  # None marks an abandoned (timed out) call
                fut.set_result(reply)

    def _fail_all(self, exc: Exception):
        with self._pending_lock:
            self._broken = exc
            pending = list(self._pending.values())
            self._pending.clear()
        for fut in pending:
            if fut is not None:
                fut.set_exception(exc)

    # -- request side

    def _request(self, payload: dict, timeout: float) -> dict:
        with self._pending_lock:
            if self._broken is not None:
                raise self._broken
            request_id = self._next_id
            self._next_id += 1
            fut: Future = Future()
            self._pending[request_id] = fut
        line = json.dumps({"id": request_id, **payload}) + "\n"
        try:
            with self._write_lock:
                self.proc.stdin.write(line)
                self.proc.stdin.flush()
        except (OSError, ValueError) as e:
            with self._pending_lock:
                self._pending.pop(request_id, None)
            raise BackendFailure(f"cannot write to backend: {e}") from e
        try:
            reply = fut.result(timeout=timeout)
        except FutureTimeout:
            with self._pending_lock:
                if request_id in self._pending:
                    self._pending[request_id] = None  # discard a late reply
            raise BackendTimeout(
                f"backend did not answer request {request_id} within "
                f"{timeout:g}s") from None
        if "error" in reply:
            raise BackendFailure(str(reply["error"]))
        text = reply.get("text")
        if not isinstance(text, str) or not text.strip():
            raise BackendFailure("backend returned no text")
        return reply

    def request_caption(self, image_path: str,
                        timeout: float = REQUEST_TIMEOUT) -> str:
        if CAPTION not in self.kinds:
            raise ProtocolError("backend does not provide captions")
        reply = self._request({"kind": "caption", "image_path": str(image_path)},
                              timeout)
        return reply["text"].strip()

    def request_code_intent(self, paths: Sequence,
                            timeout: float = REQUEST_TIMEOUT) -> str:
        if CODE not in self.kinds:
            raise ProtocolError("backend does not provide code intents")
        rendered = [p if isinstance(p, str) else p.render() for p in paths]
        reply = self._request({"kind": "code", "paths": rendered}, timeout)
        return reply["text"].strip()


def handshake(cmd: str | Sequence[str],
              timeout: float = HANDSHAKE_TIMEOUT) -> BackendHandle:
    """Spawn a backend command and perform the hello exchange."""
    argv = shlex.split(cmd) if isinstance(cmd, str) else list(cmd)
    try:
        proc = subprocess.Popen(argv, stdin=subprocess.PIPE,
                                stdout=subprocess.PIPE,
                                encoding="utf-8", bufsize=1)
    except OSError as e:
        raise SpawnFailure(f"cannot start backend {argv!r}: {e}") from e

    result: dict = {}
    error: list[Exception] = []

    def exchange():
        try:
            proc.stdin.write(json.dumps({"kind": "hello"}) + "\n")
            proc.stdin.flush()
            line = proc.stdout.readline()
            if not line:
                error.append(SpawnFailure("backend exited before answering "
                                          "hello"))
                return
            result.update(json.loads(line))
        except (OSError, ValueError, TypeError) as e:
            error.append(e)

    t = threading.Thread(target=exchange, daemon=True)
    t.start()
    t.join(timeout)
    if t.is_alive():
        proc.kill()
        raise HandshakeTimeout(f"no hello reply within {timeout:g}s")
    if error:
        proc.kill()
        e = error[0]
        if isinstance(e, (json.JSONDecodeError, TypeError)):
            raise ProtocolError(f"malformed hello reply: {e}") from e
        if isinstance(e, SpawnFailure):
            raise e
        raise SpawnFailure(f"handshake failed: {e}") from e

    name = result.get("name")
    version = result.get("version")
    kinds = result.get("kinds")
    if not isinstance(name, str) or not isinstance(version, str) \
            or not isinstance(kinds, list) \
            or not set(kinds) <= {CAPTION, CODE} or not kinds:
        proc.kill()
        raise ProtocolError(f"invalid hello reply: {result!r}")
    return BackendHandle(proc, name, version, frozenset(kinds))


def request_caption(handle: BackendHandle, image_path: str,
                    timeout: float = REQUEST_TIMEOUT) -> str:
    return handle.request_caption(image_path, timeout)


def request_code_intent(handle: BackendHandle, paths: Sequence,
                        timeout: float = REQUEST_TIMEOUT) -> str:
    return handle.request_code_intent(paths, timeout)


_CONFORMANCE_PATHS = ("save|note,Name↑Call↓Callee,insert",
                      "insert,Callee↑Call↑ExprStmt↓Name,note")


def check_protocol_conformance(cmd: str | Sequence[str], *,
                               image_path: Optional[str] = None,
                               paths: Optional[Sequence[str]] = None,
                               concurrent_requests: int = 8,
                               timeout: float = REQUEST_TIMEOUT) -> list[str]:
    """Exercise a backend command against the wire contract.

    Used by the test suite against the scripted stub and by any real backend
    wanting to prove compatibility. Returns the list of performed checks;
    raises (ProtocolError/BackendFailure/...) on the first violation.
    """
    import threading

    performed: list[str] = []
    with handshake(cmd) as h:
        performed.append(f"handshake: name={h.name!r} kinds={sorted(h.kinds)}")
        if CAPTION in h.kinds:
            if image_path is None:
                raise ValueError("a caption-capable backend needs image_path")
            text = h.request_caption(str(image_path), timeout)
            if not text or text != text.strip():
                raise ProtocolError("caption text must be non-empty, trimmed")
            performed.append("caption reply non-empty and trimmed")
        if CODE in h.kinds:
            text = h.request_code_intent(list(paths or _CONFORMANCE_PATHS),
                                         timeout)
            if not text or text != text.strip():
                raise ProtocolError("code text must be non-empty, trimmed")
            performed.append("code reply non-empty and trimmed")

        results: dict[int, str] = {}
        failures: list[Exception] = []

        def ask(i: int):
            try:
                if CAPTION in h.kinds:
                    results[i] = h.request_caption(str(image_path), timeout)
                else:
                    results[i] = h.request_code_intent(
                        list(paths or _CONFORMANCE_PATHS), timeout)
            except Exception as e:
                failures.append(e)

        threads = [threading.Thread(target=ask, args=(i,))
                   for i in range(concurrent_requests)]
        for t in threads:
            t.start()
        for t in threads:
            t.join(timeout)
        if failures:
            raise failures[0]
        if len(results) != concurrent_requests:
            raise ProtocolError("some concurrent requests went unanswered")
        performed.append(f"{concurrent_requests} concurrent requests "
                         "correlated by id")
    return performed
