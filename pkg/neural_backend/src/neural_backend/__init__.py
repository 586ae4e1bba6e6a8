"""Toy-scale caption and code-intent models behind the testscribe backend
protocol."""

__version__ = "0.1.0"

from .captioner import (CaptionModelConfig, Captioner, ImageEncoder,
                        PrefixEncoder, load_captioner, train_captioner)
from .datasets import load_caption_dataset, load_path_corpus, split_731
from .errors import ArtifactError, DatasetTooSmall, NeuralBackendError
from .path_model import (PathEncoder, PathModelConfig, PathSummarizer,
                         load_path_model, train_path_model)
