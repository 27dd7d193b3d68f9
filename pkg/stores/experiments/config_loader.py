import json
import logging
import re
from pathlib import Path

from pydantic import ValidationError

from helpers.errors import ConfigError
from stores.experiments.ExperimentConfig import ExperimentConfig

logger = logging.getLogger(__name__)


def _line_of(text: str, key) -> int | None:
    match = re.search(rf'"{re.escape(str(key))}"\s*:', text)
    if match is None:
        return None
    return text.count("\n", 0, match.start()) + 1


def parse_config(text: str, path: str = "<config>") -> ExperimentConfig:
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(path, exc.lineno, exc.msg) from exc
    if not isinstance(raw, dict):
        raise ConfigError(path, 1, "config must be a JSON object")

    try:
        return ExperimentConfig.model_validate(raw)
    except ValidationError as exc:
        first = exc.errors()[0]
        field = ".".join(str(part) for part in first["loc"]) or "config"
        line = None
        for part in first["loc"]:
            if isinstance(part, str):
                line = _line_of(text, part) or line
        raise ConfigError(path, line if line is not None else 1, f"{field}: {first['msg']}") from exc


def load_config(path: str | Path) -> ExperimentConfig:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(str(path), None, f"cannot read config ({exc.strerror})") from exc
    config = parse_config(text, str(path))
    logger.info("Loaded config %s from %s", config.label, path)
    return config


def apply_overrides(config: ExperimentConfig, source: str = "<flags>", **overrides) -> ExperimentConfig:
    """Re-validate the config with every override that is not None."""
    update = {key: value for key, value in overrides.items() if value is not None}
    if not update:
        return config
    data = config.model_dump(mode="json")
    data.update(update)
    try:
        return ExperimentConfig.model_validate(data)
    except ValidationError as exc:
        first = exc.errors()[0]
        field = ".".join(str(part) for part in first["loc"]) or "config"
        raise ConfigError(source, None, f"{field}: {first['msg']}") from exc
