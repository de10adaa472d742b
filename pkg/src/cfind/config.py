"""Search configuration with the published threshold defaults."""

from __future__ import annotations

from dataclasses import dataclass, asdict


@dataclass(frozen=True)
class SearchConfig:
    """Thresholds, weights, and sizes steering a query.

    tt/ft/mt gate type, field, and method similarity; fw/mw blend usage or
    token similarity against type similarity; inline_depth bounds method
    inlining during tokenization; candidates is the prefilter size.
    """

    tt: float = 0.8
    ft: float = 0.5
    mt: float = 0.5
    fw: float = 0.5
    mw: float = 0.5
    inline_depth: int = 5
    candidates: int = 1000
    top: int = 10
    seed: int = 42
    jobs: int = 1
    inherit_depth: int = 3
    include_constructors: bool = False
    include_own_name: bool = False
    strict_static: bool = False
    strict_return: bool = False

    def validate(self):
        for name in ("tt", "ft", "mt"):
            v = getattr(self, name)
            if not (-1.0 <= v <= 1.0):
                raise ValueError(f"{name} must lie in [-1, 1], got {v}")
        for name in ("fw", "mw"):
            v = getattr(self, name)
            if not (0.0 <= v <= 1.0):
                raise ValueError(f"{name} must lie in [0, 1], got {v}")
        for name in ("candidates", "top"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive")
        for name in ("inline_depth", "inherit_depth", "jobs"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be >= 0")

    def as_dict(self) -> dict:
        return asdict(self)
