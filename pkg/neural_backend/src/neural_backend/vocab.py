"""Token vocabularies shared by training and serving."""

from __future__ import annotations

import re

PAD = "<PAD>"
UNK = "<UNK>"
START = "STARTSEQ"
END = "ENDSEQ"
SEP = "<SEP>"

UP_MARK = "↑"
DOWN_MARK = "↓"

_WORD_RE = re.compile(r"[a-z0-9]+")


def words(text: str) -> list[str]:
    return _WORD_RE.findall(text.lower())


def path_tokens(path_line: str) -> list[str]:
    """Tokenize one dumped AST path: `start,labels,end` with `|`-joined
    subtokens and direction marks between labels."""
    parts = path_line.strip().split(",")
    if len(parts) != 3:
        return []
    start, middle, end = parts
    tokens = [t for t in start.split("|") if t]
    tokens.append(SEP)
    tokens += [t for t in re.split(f"([{UP_MARK}{DOWN_MARK}])", middle) if t]
    tokens.append(SEP)
    tokens += [t for t in end.split("|") if t]
    return tokens


class Vocab:
    def __init__(self, tokens: list[str]):
        self.tokens = list(tokens)
        self.index = {t: i for i, t in enumerate(self.tokens)}

    @classmethod
    def build(cls, sequences, specials=(PAD, UNK, START, END)) -> "Vocab":
        seen = dict.fromkeys(specials)
        for seq in sequences:
            for tok in seq:
                seen.setdefault(tok)
        return cls(list(seen))

    def __len__(self) -> int:
        return len(self.tokens)

    def encode(self, seq: list[str]) -> list[int]:
        unk = self.index[UNK]
        return [self.index.get(t, unk) for t in seq]

    def decode(self, ids: list[int]) -> list[str]:
        return [self.tokens[i] for i in ids]
