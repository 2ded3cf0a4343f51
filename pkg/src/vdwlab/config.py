"""Experiment configuration: validation, canonical hashing, replay stanzas.

A config fully determines an experiment's outputs: all randomness flows
through substreams keyed by (seed, task tags), records are serialised with
sorted keys and no timestamps, and every record carries the config hash, so
re-running a config reproduces the output files byte for byte.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field

__all__ = ["ExperimentConfig", "ConfigError", "PAPER_FORMULA_KEYS", "formula_defaults"]


class ConfigError(ValueError):
    """Invalid configuration; the message names the offending field."""


# parameters whose defaults follow the construction formulas; overriding any
# of them demands an explicit toy acknowledgement
PAPER_FORMULA_KEYS = ("rho", "width", "M")


def formula_defaults(N: int | None, D: int | None) -> dict:
    """Construction-formula defaults: rho = D^-4, width = N^(-4/D), M = D^D."""
    out: dict = {}
    if D is not None:
        out["rho"] = float(D) ** -4
        out["M"] = int(D) ** int(D)
        if N is not None:
            out["width"] = float(N) ** (-4.0 / D)
    return out


@dataclass
class ExperimentConfig:
    experiment: str
    seed: int = 0
    toy_ack: bool = False
    output: str | None = None
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        if not self.experiment:
            raise ConfigError("experiment: must be a non-empty verb")
        if not 0 <= int(self.seed) < 2**64:
            raise ConfigError("seed: must fit in 64 bits")
        self.seed = int(self.seed)

    def require(self, *names):
        missing = [n for n in names if self.params.get(n) is None]
        if missing:
            raise ConfigError(f"{missing[0]}: required for experiment {self.experiment!r}")
        return [self.params[n] for n in names]

    def get(self, name, default=None):
        value = self.params.get(name)
        return default if value is None else value

    def validate_toy(self) -> None:
        """Overriding any formula default requires the toy acknowledgement."""
        n = self.params.get("N")
        d = self.params.get("D")
        defaults = formula_defaults(n, d)
        overridden = []
        for key in PAPER_FORMULA_KEYS:
            value = self.params.get(key)
            if value is None or key not in defaults:
                continue
            default = defaults[key]
            if isinstance(default, float):
                if abs(float(value) - default) > 1e-12 * max(1.0, abs(default)):
                    overridden.append(key)
            elif int(value) != default:
                overridden.append(key)
        if overridden and not self.toy_ack:
            raise ConfigError(
                f"{overridden[0]}: overrides the formula default; pass --toy to acknowledge"
            )

    def canonical_json(self) -> str:
        payload = {
            "experiment": self.experiment,
            "seed": self.seed,
            "toy_ack": self.toy_ack,
            "params": {k: v for k, v in sorted(self.params.items()) if v is not None},
        }
        return json.dumps(payload, sort_keys=True, separators=(",", ":"))

    def config_hash(self) -> str:
        return hashlib.sha256(self.canonical_json().encode("utf-8")).hexdigest()[:16]

    def replay_stanza(self) -> dict:
        return {
            "config": json.loads(self.canonical_json()),
            "config_hash": self.config_hash(),
            "schema": "v1",
        }
