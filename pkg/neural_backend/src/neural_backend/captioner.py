"""Widget-image captioner: CNN image encoder + LSTM sequence encoder.

The image encoder produces a 256-dim feature (a small strided stand-in for a
classification CNN with its last layer cut); the caption-so-far is encoded to
another 256-dim vector; their 512-dim concatenation feeds the next-word
classifier. Decoding starts from STARTSEQ and stops at ENDSEQ or the length
cap.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
import torch
from PIL import Image
from torch import nn

from .datasets import (MIN_CAPTION_IMAGES, CaptionExample, require_size,
                       split_731)
from .errors import ArtifactError
from .vocab import END, START, Vocab, words

IMAGE_SIZE = (244, 244)  # height, width of the encoder input
IMAGE_FEATURE_DIM = 256
TEXT_FEATURE_DIM = 256
FUSED_DIM = IMAGE_FEATURE_DIM + TEXT_FEATURE_DIM


@dataclass
class CaptionModelConfig:
    image_feature_dim: int = IMAGE_FEATURE_DIM
    text_feature_dim: int = TEXT_FEATURE_DIM
    max_caption_len: int = 12
    embed_dim: int = 64
    epochs: int = 60
    learning_rate: float = 3e-3
    seed: int = 1312
    vocab: list[str] = field(default_factory=list)

    @property
    def fused_dim(self) -> int:
        return self.image_feature_dim + self.text_feature_dim


def load_image_tensor(path: str | Path) -> torch.Tensor:
    with Image.open(path) as img:
        resized = img.convert("RGB").resize(IMAGE_SIZE[::-1], Image.NEAREST)
    arr = np.asarray(resized, dtype=np.float32) / 255.0 - 0.5
    return torch.from_numpy(arr).permute(2, 0, 1)


class ImageEncoder(nn.Module):
    def __init__(self, out_dim: int = IMAGE_FEATURE_DIM):
        super().__init__()
        self.conv = nn.Sequential(
            nn.Conv2d(3, 16, kernel_size=5, stride=4), nn.ReLU(),
            nn.Conv2d(16, 32, kernel_size=3, stride=4), nn.ReLU(),
            nn.Conv2d(32, 64, kernel_size=3, stride=4), nn.ReLU(),
            nn.AdaptiveAvgPool2d(2), nn.Flatten())
        self.proj = nn.Linear(256, out_dim)

    def forward(self, images: torch.Tensor) -> torch.Tensor:
        return self.proj(self.conv(images))


class PrefixEncoder(nn.Module):
    def __init__(self, vocab_size: int, embed_dim: int,
                 out_dim: int = TEXT_FEATURE_DIM):
        super().__init__()
        self.embed = nn.Embedding(vocab_size, embed_dim)
        self.lstm = nn.LSTM(embed_dim, out_dim, batch_first=True)

    def forward(self, prefixes: torch.Tensor,
                lengths: torch.Tensor | None = None) -> torch.Tensor:
        embedded = self.embed(prefixes)
        if lengths is not None:  # ignore right padding
            embedded = nn.utils.rnn.pack_padded_sequence(
                embedded, lengths, batch_first=True, enforce_sorted=False)
        _, (h, _) = self.lstm(embedded)
        return h[-1]


class Captioner(nn.Module):
    def __init__(self, config: CaptionModelConfig):
        super().__init__()
        self.config = config
        self.vocab = Vocab(config.vocab)
        self.image_encoder = ImageEncoder(config.image_feature_dim)
        self.prefix_encoder = PrefixEncoder(len(self.vocab),
                                            config.embed_dim,
                                            config.text_feature_dim)
        self.head = nn.Sequential(
            nn.Linear(config.fused_dim, 256), nn.ReLU(),
            nn.Linear(256, len(self.vocab)))

    def logits_from_features(self, image_feat: torch.Tensor,
                             prefixes: torch.Tensor,
                             lengths: torch.Tensor | None = None
                             ) -> torch.Tensor:
        text_feat = self.prefix_encoder(prefixes, lengths)
        fused = torch.cat([image_feat, text_feat], dim=1)
        assert fused.shape[1] == self.config.fused_dim
        return self.head(fused)

    def logits(self, images: torch.Tensor, prefixes: torch.Tensor,
               lengths: torch.Tensor | None = None) -> torch.Tensor:
        return self.logits_from_features(self.image_encoder(images),
                                         prefixes, lengths)

    @torch.no_grad()
    def caption(self, image: torch.Tensor) -> str:
        self.eval()
        start = self.vocab.index[START]
        end = self.vocab.index[END]
        prefix = [start]
        out: list[str] = []
        image_batch = image.unsqueeze(0)
        for _ in range(self.config.max_caption_len):
            logits = self.logits(image_batch,
                                 torch.tensor([prefix], dtype=torch.long))
            next_id = int(logits[0].argmax())
            if next_id == end:
                break
            out.append(self.vocab.tokens[next_id])
            prefix.append(next_id)
        return " ".join(out)


def _training_rows(examples, vocab: Vocab):
    rows = []
    for idx, ex in enumerate(examples):
        tokens = [START] + words(ex.caption) + [END]
        ids = vocab.encode(tokens)
        for cut in range(1, len(ids)):
            rows.append((idx, ids[:cut], ids[cut]))
    return rows


def train_captioner(examples: list[CaptionExample],
                    config: CaptionModelConfig | None = None,
                    out_dir: str | Path = "artifacts/captioner"
                    ) -> tuple[Path, dict]:
    """Train on labeled widget images; returns (artifact dir, manifest)."""
    require_size(len(examples), MIN_CAPTION_IMAGES, "caption dataset")
    config = config or CaptionModelConfig()
    torch.manual_seed(config.seed)

    captions = [words(ex.caption) for ex in examples]
    config.vocab = Vocab.build(captions).tokens
    model = Captioner(config)
    vocab = model.vocab

    split = split_731(len(examples), config.seed)
    train_examples = [examples[i] for i in split["train"]]
    images = torch.stack([load_image_tensor(ex.image_path)
                          for ex in train_examples])
    rows = _training_rows(train_examples, vocab)
    pad = vocab.index["<PAD>"]
    max_prefix = max(len(r[1]) for r in rows)
    prefix_tensor = torch.full((len(rows), max_prefix), pad, dtype=torch.long)
    for i, (_, prefix, _) in enumerate(rows):
        prefix_tensor[i, :len(prefix)] = torch.tensor(prefix)
    image_index = torch.tensor([r[0] for r in rows])
    targets = torch.tensor([r[2] for r in rows])
    lengths = torch.tensor([len(r[1]) for r in rows])

    optimizer = torch.optim.Adam(model.parameters(), lr=config.learning_rate)
    loss_fn = nn.CrossEntropyLoss()
    losses = []
    model.train()
    for _ in range(config.epochs):
        optimizer.zero_grad()
        # encode each unique image once per epoch, then index per row
        image_feat = model.image_encoder(images)[image_index]
        logits = model.logits_from_features(image_feat, prefix_tensor,
                                            lengths)
        loss = loss_fn(logits, targets)
        loss.backward()
        optimizer.step()
        losses.append(float(loss.detach()))

    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    torch.save(model.state_dict(), out_dir / "captioner.pt")
    manifest = {
        "kind": "captioner",
        "image_size": list(IMAGE_SIZE) + [3],
        "image_feature_dim": config.image_feature_dim,
        "text_feature_dim": config.text_feature_dim,
        "fused_dim": config.fused_dim,
        "embed_dim": config.embed_dim,
        "max_caption_len": config.max_caption_len,
        "vocab": config.vocab,
        "seed": config.seed,
        "split": split,
        "epochs": config.epochs,
        "losses": losses,
    }
    (out_dir / "manifest.json").write_text(
        json.dumps(manifest, indent=2) + "\n", encoding="utf-8")
    return out_dir, manifest


def load_captioner(artifact_dir: str | Path) -> Captioner:
    artifact_dir = Path(artifact_dir)
    manifest = json.loads((artifact_dir / "manifest.json").read_text())
    if manifest.get("kind") != "captioner":
        raise ArtifactError(f"{artifact_dir} is not a captioner artifact")
    config = CaptionModelConfig(
        image_feature_dim=manifest["image_feature_dim"],
        text_feature_dim=manifest["text_feature_dim"],
        max_caption_len=manifest["max_caption_len"],
        embed_dim=manifest["embed_dim"],
        vocab=manifest["vocab"])
    if config.fused_dim != manifest["fused_dim"]:
        raise ArtifactError("manifest dims are inconsistent")
    model = Captioner(config)
    model.load_state_dict(torch.load(artifact_dir / "captioner.pt",
                                     weights_only=True))
    model.eval()
    return model
