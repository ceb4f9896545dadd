"""Application configuration: a flat JSON object, every key optional."""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, fields
from typing import Optional, Tuple

from .apt import MERGE_OPS
from .composition import CompositionConfig
from .inference import NEIGHBOUR_WEIGHTINGS, InferenceConfig
from .lexicon import BuildConfig
from .similarity import WEIGHTINGS, CandidateSpec


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class AppConfig:
    max_order: int = 2
    key: str = "lemma"
    with_pos: bool = True
    lowercase: bool = True
    stoplist: Tuple[str, ...] = ("punct",)
    weighting: str = "ppmi"
    offset_paths: Tuple[str, ...] = ("amod", "nsubj", "dobj")
    min_frequency: float = 10
    k: int = 10
    merge_op: str = "add"
    neighbour_weighting: str = "similarity"
    composition_mode: str = "intersection"
    intersection_op: str = "min"
    workers: int = 1

    def __post_init__(self):
        for name in ("stoplist", "offset_paths"):
            object.__setattr__(self, name, tuple(getattr(self, name)))
        if self.weighting not in WEIGHTINGS:
            raise ConfigError(f"weighting must be one of {WEIGHTINGS}")
        if self.merge_op not in MERGE_OPS:
            raise ConfigError(f"merge_op must be one of {MERGE_OPS}")
        if self.neighbour_weighting not in NEIGHBOUR_WEIGHTINGS:
            raise ConfigError(f"neighbour_weighting must be one of {NEIGHBOUR_WEIGHTINGS}")
        if self.k < 0:
            raise ConfigError("k must be >= 0")
        try:
            self.build_config()
            self.candidate_spec()
            self.composition_config()
        except ValueError as e:
            raise ConfigError(str(e)) from None

    @classmethod
    def from_dict(cls, data: dict) -> "AppConfig":
        known = {f.name: f for f in fields(cls)}
        unknown = set(data) - set(known)
        if unknown:
            raise ConfigError(f"unknown config keys: {', '.join(sorted(unknown))}")
        for name, value in data.items():
            expected = known[name].type
            if expected.startswith("Tuple"):
                if not isinstance(value, list) or not all(isinstance(v, str) for v in value):
                    raise ConfigError(f"{name} must be a list of strings")
            elif expected == "bool" and not isinstance(value, bool):
                raise ConfigError(f"{name} must be true or false")
            elif expected in ("int", "float") and (isinstance(value, bool) or not isinstance(value, (int, float))):
                raise ConfigError(f"{name} must be a number")
            elif expected == "str" and not isinstance(value, str):
                raise ConfigError(f"{name} must be a string")
        return cls(**data)

    @classmethod
    def load(cls, path) -> "AppConfig":
        with open(path, encoding="utf-8") as f:
            try:
                data = json.load(f)
            except json.JSONDecodeError as e:
                raise ConfigError(f"{path}: invalid JSON: {e}") from None
        if not isinstance(data, dict):
            raise ConfigError(f"{path}: config must be a JSON object")
        return cls.from_dict(data)

    def to_dict(self) -> dict:
        d = asdict(self)
        return {k: list(v) if isinstance(v, tuple) else v for k, v in d.items()}

    def build_config(self) -> BuildConfig:
        return BuildConfig(self.max_order, self.key, self.with_pos, self.lowercase, frozenset(self.stoplist))

    def candidate_spec(self) -> CandidateSpec:
        return CandidateSpec(self.offset_paths, self.min_frequency, self.weighting, self.max_order)

    def inference_config(self, k: Optional[int] = None) -> InferenceConfig:
        return InferenceConfig(self.k if k is None else k, self.merge_op, self.neighbour_weighting,
                               self.weighting, self.candidate_spec())

    def composition_config(self, inference: bool = False) -> CompositionConfig:
        return CompositionConfig(self.composition_mode, self.intersection_op,
                                 self.inference_config() if inference else None, self.max_order)
