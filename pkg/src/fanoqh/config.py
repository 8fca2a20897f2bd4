"""Run configuration shared by the solver, the verifier and the CLI."""

from __future__ import annotations

import os
from dataclasses import dataclass, fields

ENV_PREFIX = "FANOQH_"


@dataclass(frozen=True)
class Config:
    tolerance_residual: float = 1e-10
    tolerance_dedupe: float = 1e-8
    degeneracy_threshold: float = 1e-8
    precision: str = "double"
    max_dim: int = 10
    seed: int = 0
    output: str = "json"

    def __post_init__(self):
        for name in ("tolerance_residual", "tolerance_dedupe", "degeneracy_threshold"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be positive")
        if self.max_dim < 1:
            raise ValueError("max_dim must be at least 1")
        if self.precision not in ("double", "high"):
            raise ValueError("precision must be 'double' or 'high'")
        if self.output not in ("json", "text"):
            raise ValueError("output must be 'json' or 'text'")

    @classmethod
    def from_env(cls, environ=None, **overrides) -> "Config":
        """Defaults, then ``FANOQH_<FIELD>`` variables, then explicit overrides (``None`` skipped)."""
        environ = os.environ if environ is None else environ
        values = {}
        for f in fields(cls):
            raw = environ.get(ENV_PREFIX + f.name.upper())
            if raw is not None:
                kind = type(f.default)
                values[f.name] = raw.lower() if kind is str else kind(raw)
        values.update({k: v for k, v in overrides.items() if v is not None})
        return cls(**values)
