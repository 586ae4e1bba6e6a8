"""AST-path code summarizer: per-path BiLSTM encoder + attention decoder.

Each dumped path line becomes a token sequence; a bidirectional LSTM encodes
it into a 128-dim vector. The decoder initializes from the average of the
path vectors and attends over them at every step; greedy decoding stops at
ENDSEQ or the length cap. An empty path set decodes from a zero context.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

import torch
from torch import nn

from .datasets import MIN_PATH_PAIRS, PathExample, require_size, split_731
from .errors import ArtifactError
from .vocab import END, START, Vocab, path_tokens, words

PATH_ENCODING_DIM = 128
MAX_PATH_LEN = 9  # node labels per path; the dump format upstream enforces it


@dataclass
class PathModelConfig:
    path_encoding_dim: int = PATH_ENCODING_DIM
    max_path_len: int = MAX_PATH_LEN
    max_summary_len: int = 10
    max_paths_per_item: int = 24
    embed_dim: int = 64
    epochs: int = 20
    learning_rate: float = 3e-3
    seed: int = 2077
    path_vocab: list[str] = field(default_factory=list)
    out_vocab: list[str] = field(default_factory=list)


class PathEncoder(nn.Module):
    def __init__(self, vocab_size: int, embed_dim: int, out_dim: int):
        super().__init__()
        assert out_dim % 2 == 0
        self.embed = nn.Embedding(vocab_size, embed_dim, padding_idx=0)
        self.lstm = nn.LSTM(embed_dim, out_dim // 2, batch_first=True,
                            bidirectional=True)

    def forward(self, token_ids: torch.Tensor) -> torch.Tensor:
        """(paths, seq) int tensor -> (paths, out_dim) path vectors."""
        _, (h, _) = self.lstm(self.embed(token_ids))
        return torch.cat([h[0], h[1]], dim=1)


class AttnDecoder(nn.Module):
    def __init__(self, vocab_size: int, embed_dim: int, dim: int):
        super().__init__()
        self.embed = nn.Embedding(vocab_size, embed_dim)
        self.cell = nn.LSTMCell(embed_dim + dim, dim)
        self.attn_query = nn.Linear(dim, dim)
        self.out = nn.Linear(dim * 2, vocab_size)
        self.dim = dim

    def step(self, token_id: torch.Tensor, state, memory: torch.Tensor):
        h, c = state
        query = self.attn_query(h)  # (1, dim)
        scores = memory @ query.squeeze(0)  # (paths,)
        weights = torch.softmax(scores, dim=0)
        context = (weights.unsqueeze(1) * memory).sum(dim=0, keepdim=True)
        h, c = self.cell(torch.cat([self.embed(token_id), context], dim=1),
                         (h, c))
        logits = self.out(torch.cat([h, context], dim=1))
        return logits, (h, c)


class PathSummarizer(nn.Module):
    def __init__(self, config: PathModelConfig):
        super().__init__()
        self.config = config
        self.path_vocab = Vocab(config.path_vocab)
        self.out_vocab = Vocab(config.out_vocab)
        self.encoder = PathEncoder(len(self.path_vocab), config.embed_dim,
                                   config.path_encoding_dim)
        self.decoder = AttnDecoder(len(self.out_vocab), config.embed_dim,
                                   config.path_encoding_dim)

    def encode_paths(self, paths: list[str]) -> torch.Tensor:
        """Rendered path lines -> (n, path_encoding_dim) vectors; empty
        input yields a single zero vector (the documented zero context)."""
        dim = self.config.path_encoding_dim
        paths = paths[:self.config.max_paths_per_item]
        if not paths:
            return torch.zeros(1, dim)
        seqs = [self.path_vocab.encode(path_tokens(p)) or [0] for p in paths]
        width = max(len(s) for s in seqs)
        batch = torch.zeros(len(seqs), width, dtype=torch.long)
        for i, s in enumerate(seqs):
            batch[i, :len(s)] = torch.tensor(s)
        vectors = self.encoder(batch)
        assert vectors.shape == (len(seqs), dim)
        return vectors

    def _decode_logits(self, memory: torch.Tensor, target_ids: list[int]):
        """Teacher-forced logits for each target position."""
        h = memory.mean(dim=0, keepdim=True)  # paths merge by average
        c = torch.zeros_like(h)
        state = (h, c)
        token = torch.tensor([self.out_vocab.index[START]])
        steps = []
        for target in target_ids:
            logits, state = self.decoder.step(token, state, memory)
            steps.append(logits)
            token = torch.tensor([target])
        return torch.cat(steps, dim=0)

    @torch.no_grad()
    def summarize(self, paths: list[str]) -> str:
        self.eval()
        memory = self.encode_paths(paths)
        h = memory.mean(dim=0, keepdim=True)
        state = (h, torch.zeros_like(h))
        token = torch.tensor([self.out_vocab.index[START]])
        end = self.out_vocab.index[END]
        out: list[str] = []
        for _ in range(self.config.max_summary_len):
            logits, state = self.decoder.step(token, state, memory)
            next_id = int(logits[0].argmax())
            if next_id == end:
                break
            out.append(self.out_vocab.tokens[next_id])
            token = torch.tensor([next_id])
        return " ".join(out)


def train_path_model(corpus: list[PathExample],
                     config: PathModelConfig | None = None,
                     out_dir: str | Path = "artifacts/path_model"
                     ) -> tuple[Path, dict]:
    """Train on (paths, summary) pairs; returns (artifact dir, manifest)."""
    require_size(len(corpus), MIN_PATH_PAIRS, "path corpus")
    config = config or PathModelConfig()
    torch.manual_seed(config.seed)

    config.path_vocab = Vocab.build(
        [path_tokens(p) for ex in corpus for p in ex.paths]).tokens
    config.out_vocab = Vocab.build(
        [words(ex.summary) for ex in corpus]).tokens
    model = PathSummarizer(config)

    split = split_731(len(corpus), config.seed)
    train_set = [corpus[i] for i in split["train"]]
    targets = [model.out_vocab.encode(words(ex.summary) + [END])
               for ex in train_set]

    optimizer = torch.optim.Adam(model.parameters(), lr=config.learning_rate)
    loss_fn = nn.CrossEntropyLoss()
    losses = []
    model.train()
    for _ in range(config.epochs):
        optimizer.zero_grad()
        total = torch.zeros(())
        for ex, target_ids in zip(train_set, targets):
            memory = model.encode_paths(list(ex.paths))
            logits = model._decode_logits(memory, target_ids)
            total = total + loss_fn(logits, torch.tensor(target_ids))
        loss = total / len(train_set)
        loss.backward()
        optimizer.step()
        losses.append(float(loss.detach()))

    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    torch.save(model.state_dict(), out_dir / "path_model.pt")
    manifest = {
        "kind": "path_model",
        "path_encoding_dim": config.path_encoding_dim,
        "max_path_len": config.max_path_len,
        "max_summary_len": config.max_summary_len,
        "max_paths_per_item": config.max_paths_per_item,
        "embed_dim": config.embed_dim,
        "path_vocab": config.path_vocab,
        "out_vocab": config.out_vocab,
        "seed": config.seed,
        "split": split,
        "epochs": config.epochs,
        "losses": losses,
    }
    (out_dir / "manifest.json").write_text(
        json.dumps(manifest, indent=2) + "\n", encoding="utf-8")
    return out_dir, manifest


def load_path_model(artifact_dir: str | Path) -> PathSummarizer:
    artifact_dir = Path(artifact_dir)
    manifest = json.loads((artifact_dir / "manifest.json").read_text())
    if manifest.get("kind") != "path_model":
        raise ArtifactError(f"{artifact_dir} is not a path-model artifact")
    config = PathModelConfig(
        path_encoding_dim=manifest["path_encoding_dim"],
        max_path_len=manifest["max_path_len"],
        max_summary_len=manifest["max_summary_len"],
        max_paths_per_item=manifest["max_paths_per_item"],
        embed_dim=manifest["embed_dim"],
        path_vocab=manifest["path_vocab"],
        out_vocab=manifest["out_vocab"])
    model = PathSummarizer(config)
    model.load_state_dict(torch.load(artifact_dir / "path_model.pt",
                                     weights_only=True))
    model.eval()
    probe = model.encode_paths([])  # load-time shape check
    if probe.shape != (1, config.path_encoding_dim):
        raise ArtifactError("path encoder dimension mismatch")
    return model
