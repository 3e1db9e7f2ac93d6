import logging
import os
from dataclasses import asdict, dataclass, fields
from typing import Any, Dict, Mapping, Optional

logger = logging.getLogger(__name__)

ENV_PREFIX = 'SKEINTRACE_'
FORMATS = ('text', 'json')


@dataclass
class Config:
    """Truncation bounds and run options shared by every verb.

    The defaults keep the full ``selftest`` run well under ten minutes.
    """
    max_degree: int = 8        # annulus / Λ degree for dilogarithm checks
    max_weight: int = 6        # pentagon weight
    sw_weight: int = 6         # Seiberg-Witten weight (w = j)
    gl1_weight: int = 10       # quantum-torus weight
    max_size: int = 6          # colored-unknot |λ| bound
    aij_max: int = 4           # i + j bound for the Hecke cross-check
    strand_bound: int = 6      # Hecke oracle strand limit
    coproduct_strands: int = 3
    coproduct_length: int = 4
    random_cases: int = 100
    workers: int = 1           # processes for the coproduct sweep
    seed: int = 0
    format: str = 'text'

    def validate(self) -> 'Config':
        for f in fields(self):
            value = getattr(self, f.name)
            if f.name in ('format',):
                continue
            if not isinstance(value, int) or isinstance(value, bool):
                raise TypeError(f"{f.name} must be an integer, got {value!r}")
            if f.name != 'seed' and value < 0:
                raise ValueError(f"{f.name} must be non-negative, got {value}")
        if self.format not in FORMATS:
            raise ValueError(f"Unsupported format: {self.format}. Choose from {list(FORMATS)}")
        if self.strand_bound < 1:
            raise ValueError("strand_bound must be at least 1")
        return self

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)

    @classmethod
    def from_env(cls, environ: Optional[Mapping[str, str]] = None) -> 'Config':
        """Build a config from SKEINTRACE_* environment variables."""
        environ = os.environ if environ is None else environ
        values: Dict[str, Any] = {}
        for f in fields(cls):
            key = ENV_PREFIX + f.name.upper()
            if key not in environ:
                continue
            raw = environ[key]
            try:
                values[f.name] = raw if f.name == 'format' else int(raw)
            except ValueError as exc:
                raise ValueError(f"Environment variable {key}={raw!r} is not an integer") from exc
            logger.debug("Config override from %s", key)
        return cls(**values).validate()

    def merged(self, overrides: Mapping[str, Any]) -> 'Config':
        """Copy with non-None overrides applied (command-line flags)."""
        values = self.to_dict()
        values.update({k: v for k, v in overrides.items() if v is not None and k in values})
        return Config(**values).validate()

    @classmethod
    def from_args(cls, namespace, base: Optional['Config'] = None) -> 'Config':
        """Environment defaults overlaid with parsed command-line flags."""
        base = base if base is not None else cls.from_env()
        return base.merged(vars(namespace))
