"""Runtime configuration: lexicon paths, metric policy, windows, splits.

Config files are plain ``key = value`` text; unknown keys are rejected and
all configured paths must exist. The environment variables
``SUPFRAMES_ROLE_INVENTORY`` and ``SUPFRAMES_LIGHT_VERBS`` override the
two lexicon paths (paths only, nothing else).
"""

from __future__ import annotations

import os
from dataclasses import dataclass, fields
from typing import Optional

from . import frames

ENV_OVERRIDES = {
    "role_inventory": "SUPFRAMES_ROLE_INVENTORY",
    "light_verbs": "SUPFRAMES_LIGHT_VERBS",
}


@dataclass
class Config:
    role_inventory: Optional[str] = None  # path; None = shipped inventory
    light_verbs: Optional[str] = None  # path; None = shipped lexicon
    normalization: str = "text"
    entropy_base: str = "nats"
    window_before: int = 2
    window_after: int = 2
    split_seed: int = 13
    split_fractions: tuple[float, float, float] = (0.8, 0.1, 0.1)

    def roles(self) -> frozenset[str]:
        if self.role_inventory is None:
            return frames.default_role_inventory()
        return frames.load_role_inventory(self.role_inventory)

    def light_verb_set(self) -> frozenset[str]:
        if self.light_verbs is None:
            return frames.default_light_verbs()
        return frames.load_light_verbs(self.light_verbs)


def _parse_value(key: str, raw: str):
    if key in ("role_inventory", "light_verbs", "normalization", "entropy_base"):
        return raw
    if key in ("window_before", "window_after", "split_seed"):
        return int(raw)
    if key == "split_fractions":
        parts = tuple(float(p) for p in raw.split(","))
        if len(parts) != 3:
            raise ValueError(f"split_fractions needs 3 numbers, got {raw!r}")
        return parts
    raise KeyError(key)


def load_config(path: Optional[str] = None) -> Config:
    """Build a Config from an optional file plus environment overrides."""
    config = Config()
    known = {f.name for f in fields(Config)}
    if path is not None:
        with open(path, encoding="utf-8") as fh:
            for line_no, line in enumerate(fh, start=1):
                line = line.strip()
                if not line or line.startswith("#"):
                    continue
                if "=" not in line:
                    raise ValueError(f"{path}:{line_no}: expected 'key = value'")
                key, _, raw = line.partition("=")
                key = key.strip()
                raw = raw.strip()
                if key not in known:
                    raise ValueError(f"{path}:{line_no}: unknown config key: {key}")
                setattr(config, key, _parse_value(key, raw))
    for key, env in ENV_OVERRIDES.items():
        value = os.environ.get(env)
        if value:
            setattr(config, key, value)
    for key in ("role_inventory", "light_verbs"):
        value = getattr(config, key)
        if value is not None and not os.path.exists(value):
            raise FileNotFoundError(f"configured {key} does not exist: {value}")
    if config.entropy_base not in ("nats", "bits"):
        raise ValueError(f"entropy_base must be nats or bits, got {config.entropy_base!r}")
    if config.normalization not in ("text",):
        raise ValueError(f"unknown normalization policy: {config.normalization!r}")
    return config
