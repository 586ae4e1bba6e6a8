"""Code-side intent generation for localized response methods."""

from __future__ import annotations

from collections import Counter
from typing import Optional, Sequence

from .ast_paths import AstPath, subtokenize
from .code_ast import build_ast
from .errors import EmptySnippetError
from .gui_intent import Intent, IntentSource
from .localization import ResponseMethod


def snippet_callees(snippet: str) -> list[str]:
    """Called method names within a snippet, in source order."""
    try:
        ast = build_ast(snippet)
    except EmptySnippetError:
        return []
    return [n.value for n in ast.root.walk() if n.label == "Callee"]


def code_intent(rm: ResponseMethod, paths: Sequence[AstPath],
                backend=None, op_index: int = 0) -> Optional[Intent]:
    """Natural-language intent for a response method.

    With a backend the summary comes from the external model. The fallback
    phrases the method name and appends the up-to-three most frequent callees
    ("save note via insert").
    """
    if backend is not None:
        text = backend.request_code_intent(list(paths))
        return Intent(op_index, IntentSource.CODE, text, 0.7)

    name_tokens = subtokenize(rm.method_name)
    counts = Counter()
    first_seen: dict[str, int] = {}
    for pos, callee in enumerate(snippet_callees(rm.snippet)):
        if callee == rm.method_name:
            continue
        counts[callee] += 1
        first_seen.setdefault(callee, pos)
    top = sorted(counts, key=lambda c: (-counts[c], first_seen[c]))[:3]
    phrases = [" ".join(subtokenize(c)) for c in top]
    phrases = [p for p in phrases if p]

    text = " ".join(name_tokens)
    if phrases:
        text = (text + " via " if text else "") + ", ".join(phrases)
    if not text:
        return None
    return Intent(op_index, IntentSource.CODE, text, 0.6)
