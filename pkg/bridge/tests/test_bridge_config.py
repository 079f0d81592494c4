import json

import pytest

from kgslim_bridge import BridgeConfig, BridgeConfigError, KNOWN_KINDS


def test_defaults_match_the_documented_generation_settings() -> None:
    config = BridgeConfig(models={"generate": "dummy:verbalizer"})
    assert config.beam_size == 5
    assert config.repetition_penalty == 1.0
    assert config.device == "cpu"
    assert config.capabilities == ("generate",)


def test_every_capability_needs_a_model_identifier() -> None:
    with pytest.raises(BridgeConfigError, match="model identifier"):
        BridgeConfig(models={"generate": "  "})
    with pytest.raises(BridgeConfigError, match="non-empty 'models'"):
        BridgeConfig(models={})


def test_unknown_capability_is_rejected() -> None:
    with pytest.raises(BridgeConfigError, match="unknown capability 'telepathy'"):
        BridgeConfig(models={"telepathy": "dummy:x"})


@pytest.mark.parametrize(
    "field, value",
    [("beam_size", 0), ("repetition_penalty", 0.0), ("seed", -1), ("max_new_tokens", 0)],
)
def test_generation_settings_are_validated(field: str, value) -> None:
    with pytest.raises(BridgeConfigError):
        BridgeConfig(models={"generate": "dummy:verbalizer"}, **{field: value})


def test_load_round_trips_a_config_file(tmp_path) -> None:
    path = tmp_path / "bridge.json"
    path.write_text(
        json.dumps(
            {
                "models": {kind: f"dummy:{kind}" for kind in KNOWN_KINDS},
                "beam_size": 3,
                "seed": 7,
            }
        ),
        encoding="utf-8",
    )
    config = BridgeConfig.load(str(path))
    assert config.capabilities == tuple(sorted(KNOWN_KINDS))
    assert config.beam_size == 3
    assert config.seed == 7


def test_load_rejects_missing_file_bad_json_and_unknown_fields(tmp_path) -> None:
    with pytest.raises(BridgeConfigError, match="not found"):
        BridgeConfig.load(str(tmp_path / "missing.json"))
    bad = tmp_path / "bad.json"
    bad.write_text("{not json", encoding="utf-8")
    with pytest.raises(BridgeConfigError, match="not valid JSON"):
        BridgeConfig.load(str(bad))
    extra = tmp_path / "extra.json"
    extra.write_text(json.dumps({"models": {"generate": "dummy:x"}, "temperture": 1}))
    with pytest.raises(BridgeConfigError, match="unknown config field"):
        BridgeConfig.load(str(extra))
    array = tmp_path / "array.json"
    array.write_text("[1, 2]", encoding="utf-8")
    with pytest.raises(BridgeConfigError, match="JSON object"):
        BridgeConfig.load(str(array))
