"""Resource caps and run configuration shared by the oracle, suites, service and CLI."""

from __future__ import annotations

from dataclasses import dataclass, replace


@dataclass(frozen=True)
class Caps:
    """Resource limits for exhaustive computations.

    Exceeding a cap is always reported explicitly (incomplete closure status or
    a CapExceeded error), never silently truncated.
    """

    max_nvars: int = 4
    max_generator_arity: int = 6
    max_derived: int = 20000
    max_formula_depth: int = 8
    max_formula_nodes: int = 64
    # raw argument-vector budget for non-symmetric generator heads
    max_general_args: int = 2_000_000

    def __post_init__(self):
        for name, v in self.__dict__.items():
            if v < 1:
                raise ValueError(f"cap {name} must be positive, got {v}")

    def override(self, **kwargs) -> "Caps":
        kwargs = {k: v for k, v in kwargs.items() if v is not None}
        return replace(self, **kwargs) if kwargs else self


@dataclass(frozen=True)
class RunConfig:
    """CLI/service run settings: caps plus sample counts for randomized suites."""

    caps: Caps = Caps()
    samples: int = 500
    seed: int = 0
    output_format: str = "text"

    def __post_init__(self):
        if self.samples < 1:
            raise ValueError("samples must be positive")
        if self.output_format not in ("text", "json"):
            raise ValueError(f"format must be text or json, got {self.output_format!r}")


DEFAULT_CAPS = Caps()


class CapExceeded(RuntimeError):
    """A configured resource cap was hit before the computation completed."""
