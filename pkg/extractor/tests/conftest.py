import os

os.environ.setdefault("HF_HUB_OFFLINE", "1")
os.environ.setdefault("TRANSFORMERS_OFFLINE", "1")

import numpy as np
import pytest
import torch
from PIL import Image
from tokenizers import Tokenizer, models, pre_tokenizers
from transformers import (
    AutoModel,
    AutoTokenizer,
    BertConfig,
    BertModel,
    GPT2Config,
    GPT2Model,
    PreTrainedTokenizerFast,
)

CORPUS_LINES = [
    "the quick brown fox jumps over the lazy dog",
    "a cat sat on the mat and watched the fox",
    "every model reads the same probing sentences",
    "short line",
    "words unseen by some vocabularies become unknown tokens",
]


def corpus_words():
    return sorted({w for line in CORPUS_LINES for w in line.split()})


def make_word_tokenizer() -> PreTrainedTokenizerFast:
    """Whole-word vocabulary: each known word is a single token."""
    vocab = {"[UNK]": 0, "[PAD]": 1}
    for w in corpus_words():
        vocab.setdefault(w, len(vocab))
    tok = Tokenizer(models.WordPiece(vocab, unk_token="[UNK]"))
    tok.pre_tokenizer = pre_tokenizers.WhitespaceSplit()
    return PreTrainedTokenizerFast(
        tokenizer_object=tok, unk_token="[UNK]", pad_token="[PAD]"
    )


def make_char_tokenizer() -> PreTrainedTokenizerFast:
    """Character-level WordPiece: every word splits into many subwords."""
    vocab = {"[UNK]": 0, "[PAD]": 1}
    chars = sorted({c for w in corpus_words() for c in w})
    for c in chars:
        vocab.setdefault(c, len(vocab))
        vocab.setdefault(f"##{c}", len(vocab))
    tok = Tokenizer(models.WordPiece(vocab, unk_token="[UNK]", max_input_chars_per_word=64))
    tok.pre_tokenizer = pre_tokenizers.WhitespaceSplit()
    return PreTrainedTokenizerFast(
        tokenizer_object=tok, unk_token="[UNK]", pad_token="[PAD]"
    )


def save_bert_checkpoint(path, tokenizer, hidden=32, layers=2, seed=0):
    torch.manual_seed(seed)
    cfg = BertConfig(
        vocab_size=tokenizer.vocab_size,
        hidden_size=hidden,
        num_hidden_layers=layers,
        num_attention_heads=2,
        intermediate_size=2 * hidden,
        max_position_embeddings=256,
    )
    model = BertModel(cfg)
    model.save_pretrained(path)
    tokenizer.save_pretrained(path)
    return str(path)


def save_gpt2_checkpoint(path, tokenizer, hidden=24, seed=0):
    torch.manual_seed(seed)
    cfg = GPT2Config(
        vocab_size=tokenizer.vocab_size,
        n_embd=hidden,
        n_layer=2,
        n_head=2,
        n_positions=256,
    )
    model = GPT2Model(cfg)
    model.save_pretrained(path)
    tokenizer.save_pretrained(path)
    return str(path)


def save_perturbed_copy(src, dst, eps=0.01, seed=99):
    """A same-family checkpoint: the source's weights plus small noise,
    the fine-tuning stand-in."""
    model = AutoModel.from_pretrained(src)
    rng = torch.Generator().manual_seed(seed)
    with torch.no_grad():
        for param in model.parameters():
            scale = param.detach().abs().mean().clamp(min=1e-3)
            param.add_(eps * scale * torch.randn(param.shape, generator=rng))
    model.save_pretrained(dst)
    AutoTokenizer.from_pretrained(src).save_pretrained(dst)
    return str(dst)


@pytest.fixture(scope="session")
def corpus_file(tmp_path_factory):
    path = tmp_path_factory.mktemp("corpus") / "probe.txt"
    path.write_text("\n".join(CORPUS_LINES) + "\n", encoding="utf-8")
    return path


@pytest.fixture(scope="session")
def word_bert(tmp_path_factory):
    path = tmp_path_factory.mktemp("ckpt") / "word_bert"
    return save_bert_checkpoint(path, make_word_tokenizer(), hidden=32, seed=0)


@pytest.fixture(scope="session")
def char_bert(tmp_path_factory):
    path = tmp_path_factory.mktemp("ckpt") / "char_bert"
    return save_bert_checkpoint(path, make_char_tokenizer(), hidden=48, seed=1)


def save_script_cnn(path, channels=3, width=8, seed=0, spatial_output=False):
    """TorchScript feature extractor: conv stack, optionally pre-pooled."""
    torch.manual_seed(seed)
    layers = [
        torch.nn.Conv2d(channels, width, 3, stride=2, padding=1),
        torch.nn.ReLU(),
        torch.nn.Conv2d(width, 2 * width, 3, stride=2, padding=1),
        torch.nn.ReLU(),
    ]
    if not spatial_output:
        layers += [torch.nn.AdaptiveAvgPool2d(1), torch.nn.Flatten()]
    model = torch.nn.Sequential(*layers).eval()
    example = torch.zeros(1, channels, 24, 24)
    scripted = torch.jit.trace(model, example)
    scripted.save(str(path))
    return str(path)


def write_probe_images(directory, count=10, size=24, mode="RGB", seed=0):
    directory.mkdir(parents=True, exist_ok=True)
    rng = np.random.default_rng(seed)
    for i in range(count):
        arr = rng.integers(0, 256, size=(size, size, 3), dtype=np.uint8)
        img = Image.fromarray(arr, mode="RGB")
        if mode != "RGB":
            img = img.convert(mode)
        img.save(directory / f"probe{i:02d}.png")
    return directory
