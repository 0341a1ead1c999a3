"""Sidecar test fixtures: a tiny local fill-mask model and a live server."""

from __future__ import annotations

import threading

import pytest

try:
    import torch  # noqa: F401
    import transformers  # noqa: F401
    HAVE_TRANSFORMERS = True
except ImportError:
    HAVE_TRANSFORMERS = False

VOCAB = [
    "[PAD]", "[UNK]", "[CLS]", "[SEP]", "[MASK]",
    "the", "model", "shall", "be", "implemented", "in", "python",
    "system", "service", "store", "records", "data", "errors", "log",
    "network", "security", "stability", "java", "code", "software",
    "##s", "##ing", "##ed", ".", ",", "a", "an", "and", "of", "to",
]


@pytest.fixture(scope="session")
def tiny_model_dir(tmp_path_factory):
    """A randomly initialized, deterministic BERT small enough for tests."""
    if not HAVE_TRANSFORMERS:
        pytest.skip("transformers/torch not installed")
    import torch
    from transformers import BertConfig, BertForMaskedLM, BertTokenizerFast

    root = tmp_path_factory.mktemp("tinybert")
    (root / "vocab.txt").write_text("\n".join(VOCAB), encoding="utf-8")
    config = BertConfig(vocab_size=len(VOCAB), hidden_size=32,
                        num_hidden_layers=2, num_attention_heads=2,
                        intermediate_size=64, max_position_embeddings=64)
    torch.manual_seed(7)
    BertForMaskedLM(config).save_pretrained(root)
    BertTokenizerFast(str(root / "vocab.txt")).save_pretrained(root)
    return root


@pytest.fixture(scope="session")
def live_server(tiny_model_dir):
    """The sidecar serving the tiny model on an ephemeral port."""
    from mlm_sidecar.server import TransformersFillMask, build_server

    model = TransformersFillMask(str(tiny_model_dir))
    server, _state = build_server(model)
    thread = threading.Thread(target=server.serve_forever, daemon=True)
    thread.start()
    host, port = server.server_address
    yield f"http://{host}:{port}"
    server.shutdown()
    server.server_close()
