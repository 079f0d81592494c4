"""Model backends, one handler per capability.

Identifiers starting with ``dummy:`` select deterministic rule-based stand-ins
that need no downloads and no heavy dependencies; any other identifier is
treated as a pretrained checkpoint and loaded lazily through the optional
neural dependencies. All models are loaded at build time so a broken
configuration fails at startup, not mid-conversation.
"""
from __future__ import annotations

import re
from typing import Callable

from .config import BridgeConfig

Handler = Callable[[dict], dict]

_CAMEL_BOUNDARY = re.compile(r"(?<=[a-z0-9])(?=[A-Z])")
_RELATION_SEPARATOR = "|sep|"
_EDGE_PUNCTUATION = ".,;:!?()[]\"'"


class BridgeModelError(RuntimeError):
    """Raised when a configured model cannot be loaded or built."""


# --------------------------------------------------------------- payload access

def _require_text(payload: dict, key: str = "text") -> str:
    value = payload.get(key)
    if not isinstance(value, str):
        raise ValueError(f"request needs a string {key!r} field")
    return value


def _require_graph(payload: dict) -> list[tuple[str, str, str]]:
    raw = payload.get("graph")
    if not isinstance(raw, list) or not raw:
        raise ValueError("request needs a non-empty 'graph' list")
    triples = []
    for item in raw:
        if not isinstance(item, list) or len(item) != 3 or not all(isinstance(s, str) for s in item):
            raise ValueError(f"each triple must be [head, relation, tail] strings, got {item!r}")
        triples.append((item[0], item[1], item[2]))
    return triples


# --------------------------------------------------------------- dummy models

def _spell_out_relation(relation: str) -> str:
    """Turn a relation label into plain words: camelCase and underscores are
    split, and multi-relation labels joined with the ``|sep|`` marker become
    'first and second'."""
    parts = []
    for part in relation.split(_RELATION_SEPARATOR):
        cleaned = _CAMEL_BOUNDARY.sub(" ", part.replace("_", " ")).lower()
        cleaned = " ".join(cleaned.split())
        if cleaned:
            parts.append(cleaned)
    return " and ".join(parts)


def _dummy_generate(payload: dict) -> dict:
    sentences = []
    for head, relation, tail in _require_graph(payload):
        clause = " ".join(f"{head} {_spell_out_relation(relation)} {tail}".split())
        sentences.append(clause[:1].upper() + clause[1:] + ".")
    return {"text": " ".join(sentences)}


def _dummy_score_lm(payload: dict) -> dict:
    tokens = _require_text(payload).split()
    if not tokens:
        raise ValueError("text has no tokens")
    return {"log_probs": [-(1.0 + min(len(token), 8) / 10.0) for token in tokens]}


def _dummy_score_similarity(payload: dict) -> dict:
    a = set(_require_text(payload, "text_a").lower().split())
    b = set(_require_text(payload, "text_b").lower().split())
    if not a and not b:
        return {"score": 1.0}
    union = a | b
    return {"score": len(a & b) / len(union) if union else 0.0}


def _dummy_extract_entities(payload: dict) -> dict:
    entities = []
    run: list[str] = []
    for token in _require_text(payload).split():
        word = token.strip(_EDGE_PUNCTUATION)
        if word and word[:1].isupper():
            run.append(word)
            continue
        if run:
            entities.append(" ".join(run))
            run = []
    if run:
        entities.append(" ".join(run))
    return {"entities": entities}


def _dummy_score_acceptability(payload: dict) -> dict:
    tokens = _require_text(payload).split()
    return {"score": min(1.0, 0.5 + len(tokens) / 100.0)}


_DUMMY_HANDLERS: dict[str, Handler] = {
    "generate": _dummy_generate,
    "score_lm": _dummy_score_lm,
    "score_similarity": _dummy_score_similarity,
    "extract_entities": _dummy_extract_entities,
    "score_acceptability": _dummy_score_acceptability,
}


# --------------------------------------------------------------- neural models

def _device_index(device: str) -> int:
    # transformers pipelines take -1 for CPU and an integer index for CUDA.
    if device == "cpu":
        return -1
    if device.startswith("cuda"):
        _, _, suffix = device.partition(":")
        return int(suffix) if suffix else 0
    raise BridgeModelError(f"unsupported device {device!r}")


def _neural_generate(config: BridgeConfig, model_id: str) -> Handler:
    import torch
    from transformers import AutoModelForSeq2SeqLM, AutoTokenizer

    tokenizer = AutoTokenizer.from_pretrained(model_id)
    model = AutoModelForSeq2SeqLM.from_pretrained(model_id).to(config.device).eval()

    def handler(payload: dict) -> dict:
        triples = _require_graph(payload)
        source = " ; ".join(
            f"{head} | {_spell_out_relation(relation)} | {tail}"
            for head, relation, tail in triples
        )
        torch.manual_seed(config.seed)
        encoded = tokenizer(source, return_tensors="pt", truncation=True).to(config.device)
        with torch.no_grad():
            output = model.generate(
                **encoded,
                num_beams=config.beam_size,
                repetition_penalty=config.repetition_penalty,
                do_sample=False,
                max_new_tokens=config.max_new_tokens,
            )
        return {"text": tokenizer.decode(output[0], skip_special_tokens=True).strip()}

    return handler


def _neural_score_lm(config: BridgeConfig, model_id: str) -> Handler:
    import torch
    from transformers import AutoModelForCausalLM, AutoTokenizer

    tokenizer = AutoTokenizer.from_pretrained(model_id)
    model = AutoModelForCausalLM.from_pretrained(model_id).to(config.device).eval()

    def handler(payload: dict) -> dict:
        text = _require_text(payload)
        if not text.strip():
            raise ValueError("text has no tokens")
        ids = tokenizer(text, return_tensors="pt").input_ids
        if tokenizer.bos_token_id is not None:
            bos = torch.tensor([[tokenizer.bos_token_id]], dtype=ids.dtype)
            ids = torch.cat([bos, ids], dim=1)
        ids = ids.to(config.device)
        if ids.shape[1] < 2:
            return {"log_probs": [0.0]}
        with torch.no_grad():
            logits = model(ids).logits
        log_probs = torch.log_softmax(logits[0, :-1], dim=-1)
        targets = ids[0, 1:]
        chosen = log_probs.gather(1, targets.unsqueeze(1)).squeeze(1)
        return {"log_probs": [float(value) for value in chosen]}

    return handler


def _neural_score_similarity(config: BridgeConfig, model_id: str) -> Handler:
    from sentence_transformers import SentenceTransformer

    model = SentenceTransformer(model_id, device=config.device)

    def handler(payload: dict) -> dict:
        pair = [_require_text(payload, "text_a"), _require_text(payload, "text_b")]
        embeddings = model.encode(pair, convert_to_numpy=True, normalize_embeddings=True)
        score = float(embeddings[0] @ embeddings[1])
        return {"score": max(0.0, min(1.0, score))}

    return handler


def _neural_extract_entities(config: BridgeConfig, model_id: str) -> Handler:
    from transformers import pipeline

    recognizer = pipeline(
        "token-classification",
        model=model_id,
        aggregation_strategy="simple",
        device=_device_index(config.device),
    )

    def handler(payload: dict) -> dict:
        text = _require_text(payload)
        return {"entities": [str(span["word"]).strip() for span in recognizer(text)]}

    return handler


_ACCEPTABLE_LABELS = {"label_1", "acceptable", "1", "positive"}


def _neural_score_acceptability(config: BridgeConfig, model_id: str) -> Handler:
    from transformers import pipeline

    classifier = pipeline(
        "text-classification", model=model_id, device=_device_index(config.device)
    )

    def handler(payload: dict) -> dict:
        result = classifier(_require_text(payload))[0]
        probability = float(result["score"])
        if str(result["label"]).lower() not in _ACCEPTABLE_LABELS:
            probability = 1.0 - probability
        return {"score": max(0.0, min(1.0, probability))}

    return handler


_NEURAL_BUILDERS: dict[str, Callable[[BridgeConfig, str], Handler]] = {
    "generate": _neural_generate,
    "score_lm": _neural_score_lm,
    "score_similarity": _neural_score_similarity,
    "extract_entities": _neural_extract_entities,
    "score_acceptability": _neural_score_acceptability,
}


def build_handlers(config: BridgeConfig) -> dict[str, Handler]:
    """Load every configured model and return one request handler per kind."""
    handlers: dict[str, Handler] = {}
    for kind, model_id in config.models.items():
        if model_id.startswith("dummy:"):
            handlers[kind] = _DUMMY_HANDLERS[kind]
            continue
        builder = _NEURAL_BUILDERS[kind]
        try:
            handlers[kind] = builder(config, model_id)
        except BridgeModelError:
            raise
        except ImportError as exc:
            raise BridgeModelError(
                f"capability {kind!r} needs the neural extras installed: {exc}"
            ) from exc
        except Exception as exc:
            raise BridgeModelError(f"could not load {model_id!r} for {kind!r}: {exc}") from exc
    return handlers
