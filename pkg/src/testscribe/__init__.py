"""testscribe: natural-language intent inference for GUI test scripts."""

__version__ = "0.1.0"

from .ast_paths import AstPath, extract_paths, subtokenize
from .backend import BackendHandle, handshake, request_caption, \
    request_code_intent
from .code_ast import Ast, build_ast
from .code_intent import code_intent
from .gui_intent import (GalleryEntry, Intent, IntentSource, OcrToken,
                         average_hash, caption_widget, load_gallery, load_ocr,
                         merge_gui_intents, ocr_match, textual_intent)
from .layout import (LayoutNode, Rect, WidgetMatch, extract_text_attrs,
                     node_xpath, parse_layout, parse_xpath, resolve_xpath)
from .localization import (ResponseMethod, Template, find_candidate_files,
                           inline_nested, localize_id, match_templates,
                           prioritize)
from .metrics import (MetricReport, bleu_n, cider, evaluate_corpus, meteor,
                      rouge_l, tokenize)
from .pipeline import (IntentReport, PipelineConfig, TraceBundle, aggregate,
                       load_bundle, render_report, run_pipeline)
from .script_model import (CommentClass, CommentRatio, CorpusStats, Operation,
                           OperationSequence, comment_code_ratio,
                           parse_script, parse_script_file, script_stats)

__all__ = [name for name in dir() if not name.startswith("_")]
