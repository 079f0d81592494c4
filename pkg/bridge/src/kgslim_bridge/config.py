"""Bridge configuration: one model identifier per advertised capability."""
from __future__ import annotations

import json
from dataclasses import dataclass, field

KNOWN_KINDS = (
    "generate",
    "score_lm",
    "score_similarity",
    "extract_entities",
    "score_acceptability",
)

_CONFIG_FIELDS = {
    "models",
    "device",
    "beam_size",
    "repetition_penalty",
    "seed",
    "max_new_tokens",
}


class BridgeConfigError(ValueError):
    """Raised when a bridge configuration is unusable."""


@dataclass(frozen=True)
class BridgeConfig:
    """Which model serves each capability, plus shared generation settings."""

    models: dict[str, str] = field(default_factory=dict)
    device: str = "cpu"
    beam_size: int = 5
    repetition_penalty: float = 1.0
    seed: int = 0
    max_new_tokens: int = 96

    def __post_init__(self) -> None:
        if not isinstance(self.models, dict) or not self.models:
            raise BridgeConfigError("config needs a non-empty 'models' mapping")
        for kind, model_id in self.models.items():
            if kind not in KNOWN_KINDS:
                raise BridgeConfigError(
                    f"unknown capability {kind!r}; known: {', '.join(KNOWN_KINDS)}"
                )
            if not isinstance(model_id, str) or not model_id.strip():
                raise BridgeConfigError(f"capability {kind!r} needs a model identifier")
        if not isinstance(self.beam_size, int) or self.beam_size < 1:
            raise BridgeConfigError(f"beam_size must be a positive integer, got {self.beam_size!r}")
        if self.repetition_penalty <= 0:
            raise BridgeConfigError(
                f"repetition_penalty must be positive, got {self.repetition_penalty!r}"
            )
        if not isinstance(self.seed, int) or self.seed < 0:
            raise BridgeConfigError(f"seed must be a non-negative integer, got {self.seed!r}")
        if not isinstance(self.max_new_tokens, int) or self.max_new_tokens < 1:
            raise BridgeConfigError(
                f"max_new_tokens must be a positive integer, got {self.max_new_tokens!r}"
            )

    @property
    def capabilities(self) -> tuple[str, ...]:
        return tuple(sorted(self.models))

    @classmethod
    def load(cls, path: str) -> "BridgeConfig":
        try:
            with open(path, "r", encoding="utf-8") as handle:
                raw = json.load(handle)
        except FileNotFoundError as exc:
            raise BridgeConfigError(f"config file not found: {path}") from exc
        except json.JSONDecodeError as exc:
            raise BridgeConfigError(f"config file {path} is not valid JSON: {exc}") from exc
        if not isinstance(raw, dict):
            raise BridgeConfigError(f"config file {path} must hold a JSON object")
        unknown = set(raw) - _CONFIG_FIELDS
        if unknown:
            raise BridgeConfigError(f"unknown config field(s): {', '.join(sorted(unknown))}")
        return cls(**raw)
