"""Application model families and the declarative :class:`ModelSpec`."""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, fields, replace
from pathlib import Path

from ..errors import ConfigError
from ..model import StatisticalModel
from .binomial import BinomialScenario, binomial_landscape, build_binomial
from .magnetometry import FAMILIES, MagnetometryScenario, build_magnetometry

SCENARIOS = FAMILIES + ("binomial", "custom")


@dataclass(frozen=True)
class ModelSpec:
    """One application model.

    Only the fields relevant to ``scenario`` are used: ``n, g, theta,
    estimate_all_three`` for the spin probes; ``G, n, x, phi, lambda_th,
    beta`` for binomial codes; ``path`` (a serialised model) for ``custom``.
    """

    scenario: str
    n: int | None = None
    g: float | None = None
    theta: tuple = (0.0, 0.0, 0.0)
    estimate_all_three: bool = False
    G: int | None = None
    x: float | None = None
    phi: float = 0.0
    lambda_th: float | None = None
    beta: float | None = None
    path: str | None = None

    def __post_init__(self):
        if self.scenario not in SCENARIOS:
            raise ConfigError(f"unknown scenario {self.scenario!r}; choose from {SCENARIOS}")
        object.__setattr__(self, "theta", tuple(float(t) for t in self.theta))

    def _require(self, *names):
        missing = [n for n in names if getattr(self, n) is None]
        if missing:
            raise ConfigError(f"scenario {self.scenario!r} needs {', '.join(missing)}")

    def build(self) -> StatisticalModel:
        if self.scenario in FAMILIES:
            self._require("n", "g")
            return build_magnetometry(
                MagnetometryScenario(self.scenario, int(self.n), float(self.g), self.theta, self.estimate_all_three))
        if self.scenario == "binomial":
            self._require("G", "n", "x", "lambda_th", "beta")
            return build_binomial(BinomialScenario(
                int(self.G), int(self.n), float(self.x), float(self.phi), float(self.lambda_th), float(self.beta)))
        self._require("path")
        try:
            doc = json.loads(Path(self.path).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read model file {self.path}: {exc}") from exc
        return StatisticalModel.from_dict(doc)

    def descriptor(self) -> str:
        """Short stable text naming the scenario and its set parameters."""
        if self.scenario in FAMILIES:
            keys = ["n", "g", "theta"] + (["estimate_all_three"] if self.estimate_all_three else [])
        elif self.scenario == "binomial":
            keys = ["G", "n", "x", "phi", "lambda_th", "beta"]
        else:
            keys = ["path"]
        parts = []
        for k in keys:
            v = getattr(self, k)
            if isinstance(v, tuple):
                v = "/".join(repr(t) for t in v)
            parts.append(f"{k}={v}")
        return f"{self.scenario}[{' '.join(parts)}]"

    def with_values(self, **kw) -> "ModelSpec":
        return replace(self, **kw)

    def to_dict(self) -> dict:
        d = asdict(self)
        d["theta"] = list(self.theta)
        return {k: v for k, v in d.items() if v is not None}

    @classmethod
    def from_dict(cls, doc: dict) -> "ModelSpec":
        known = {f.name for f in fields(cls)}
        unknown = set(doc) - known
        if unknown:
            raise ConfigError(f"unknown model-spec fields: {sorted(unknown)}")
        if "scenario" not in doc:
            raise ConfigError("model spec needs a 'scenario' field")
        doc = dict(doc)
        if "theta" in doc:
            doc["theta"] = tuple(doc["theta"])
        return cls(**doc)


__all__ = [
    "ModelSpec", "SCENARIOS", "BinomialScenario", "MagnetometryScenario",
    "build_binomial", "build_magnetometry", "binomial_landscape",
]
