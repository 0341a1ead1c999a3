#!/usr/bin/env python3
"""Start the inference sidecar on a tiny local model and query it.

Builds a small randomly initialized BERT on the fly (no downloads), runs
the sidecar against it in-process, and talks to it through the library's
HTTP provider.  With network access you would instead run:

    mlm-sidecar --model bert-base-cased --port 8800

and pass --provider-url http://127.0.0.1:8800 to the CLI.
"""

import tempfile
import threading

from reqcomplete.masking import generate_masked_instances
from reqcomplete.mlm import HttpProvider
from reqcomplete.nlp import annotate


def build_tiny_model(root: str) -> str:
    import torch
    from transformers import BertConfig, BertForMaskedLM, BertTokenizerFast

    vocab = ["[PAD]", "[UNK]", "[CLS]", "[SEP]", "[MASK]",
             "the", "model", "shall", "be", "implemented", "in", "python",
             "java", "code", "software", "system", "##s", ".", ","]
    with open(f"{root}/vocab.txt", "w") as fh:
        fh.write("\n".join(vocab))
    config = BertConfig(vocab_size=len(vocab), hidden_size=32,
                        num_hidden_layers=2, num_attention_heads=2,
                        intermediate_size=64, max_position_embeddings=64)
    torch.manual_seed(7)
    BertForMaskedLM(config).save_pretrained(root)
    BertTokenizerFast(f"{root}/vocab.txt").save_pretrained(root)
    return root


def main():
    from mlm_sidecar.server import TransformersFillMask, build_server

    with tempfile.TemporaryDirectory() as root:
        print("= Building a tiny local fill-mask model (random weights)")
        model_dir = build_tiny_model(root)
        model = TransformersFillMask(model_dir)
        server, _ = build_server(model)
        threading.Thread(target=server.serve_forever, daemon=True).start()
        host, port = server.server_address
        url = f"http://{host}:{port}"
        print(f"  sidecar listening on {url}")

        provider = HttpProvider(url)
        print(f"  health: {provider.health()}")

        doc = annotate("demo", "The model shall be implemented in Python.")
        inst = [i for i in generate_masked_instances(doc)
                if i.masked_surface == "Python"][0]
        print(f"\n= Asking for 5 predictions over {inst.rendered!r}")
        for rec in provider.get_predictions(inst, 5):
            print(f"  {rec.rank}. {rec.prediction.token:12} "
                  f"score {rec.prediction.score:.4f}")
        print("\n(random weights, so the tokens are arbitrary; the point is "
              "the protocol round-trip)")
        server.shutdown()


if __name__ == "__main__":
    main()
