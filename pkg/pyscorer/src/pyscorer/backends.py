"""Scoring backends for the stdio adapter.

MOCK is a pure function of the text (logp = -character count), so
protocol tests can predict every response exactly. NEURAL wraps a pair
of causal language models when torch/transformers are installed;
otherwise construction degrades to MOCK with a warning.
"""

from __future__ import annotations

import sys


class MockBackend:
    kind = "MOCK"

    def logprob(self, text: str, direction: str) -> float:
        scored = text if direction == "fwd" else text[::-1]
        return -float(len(scored))


class NeuralBackend:
    """Causal-LM scorer: forward model for 'fwd', right-to-left model for 'bwd'.

    The backward model is assumed to be trained on character-reversed
    text, so 'bwd' requests are scored on the reversed string.
    """

    kind = "NEURAL"

    def __init__(self, model_name: str, backward_model_name: str | None = None):
        import torch
        from transformers import AutoModelForCausalLM, AutoTokenizer

        self._torch = torch
        self._models = {}
        for direction, name in (("fwd", model_name),
                                ("bwd", backward_model_name or model_name)):
            tokenizer = AutoTokenizer.from_pretrained(name)
            model = AutoModelForCausalLM.from_pretrained(name)
            model.eval()
            self._models[direction] = (tokenizer, model)

    def logprob(self, text: str, direction: str) -> float:
        if direction == "bwd":
            text = text[::-1]
        tokenizer, model = self._models[direction]
        ids = tokenizer(text, return_tensors="pt").input_ids
        if ids.shape[1] < 2:
            return 0.0
        with self._torch.no_grad():
            logits = model(ids).logits
        logprobs = self._torch.log_softmax(logits[0, :-1], dim=-1)
        picked = logprobs.gather(1, ids[0, 1:].unsqueeze(1))
        return float(picked.sum())


def make_backend(kind: str, model_name: str | None = None,
                 backward_model_name: str | None = None):
    if kind == "mock":
        return MockBackend()
    try:
        return NeuralBackend(model_name or "gpt2", backward_model_name)
    except ImportError as exc:
        print(f"pyscorer: neural backend unavailable ({exc}); falling back to MOCK",
              file=sys.stderr)
        return MockBackend()
