"""
Run configuration for the command-line front end
"""

from dataclasses import dataclass, field
from typing import Any, Dict, Optional

from models.errors import ConfigError

SUBCOMMANDS = (
    "mu",
    "params",
    "verify-appendix",
    "phi",
    "rank",
    "clone",
    "augment",
    "secant",
    "tensor",
)


@dataclass
class RunConfig:
    """Parsed command line: one subcommand with its options"""

    subcommand: str
    input_path: Optional[str] = None
    output_path: Optional[str] = None
    seed: int = 0
    budget: int = 1_000_000
    workers: int = 1
    report_format: str = "json"
    options: Dict[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        if self.subcommand not in SUBCOMMANDS:
            raise ConfigError(f"unknown subcommand {self.subcommand!r}")
        if self.workers < 1:
            raise ConfigError(f"workers must be >= 1, got {self.workers}")
        if self.budget < 1:
            raise ConfigError(f"budget must be >= 1, got {self.budget}")
        if not 0 <= self.seed < 2**64:
            raise ConfigError(f"seed must be a 64-bit unsigned integer, got {self.seed}")
        if self.report_format not in ("json", "csv"):
            raise ConfigError(f"format must be json or csv, got {self.report_format!r}")

    def option(self, name: str, default: Any = None) -> Any:
        value = self.options.get(name)
        return default if value is None else value
