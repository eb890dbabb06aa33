"""Experiment configuration and run-report types.

Configs are JSON; every numeric field that feeds exact arithmetic is parsed
as an exact rational (string or integer).  Validation reports all offending
fields at once.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Mapping


class ConfigError(ValueError):
    """Invalid configuration; ``problems`` lists field-level diagnostics."""

    def __init__(self, problems: list[str]):
        self.problems = problems
        super().__init__("; ".join(problems))


def _rational(value: Any, field_name: str, problems: list[str]) -> Fraction:
    try:
        return Fraction(str(value))
    except (ValueError, ZeroDivisionError):
        problems.append(f"{field_name}: expected an exact rational, got {value!r}")
        return Fraction(0)


def _int(value: Any, field_name: str, problems: list[str]) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        problems.append(f"{field_name}: expected an integer, got {value!r}")
        return 0
    return value


@dataclass(frozen=True)
class ExperimentConfig:
    d: int = 2
    window: Fraction = Fraction(1)
    dim: int = 1
    radius: Fraction = Fraction(100)
    seed: int = 1
    stages: dict = field(
        default_factory=lambda: {
            "generate": True,
            "analyze": True,
            "quasi": True,
            "hull": True,
        }
    )
    analysis: dict = field(
        default_factory=lambda: {
            "symmetry": True,
            "gaps": True,
            "k_constant": True,
            "chains": True,
            "chain_samples": 100,
            "chain_norm_bound": 10**6,
        }
    )
    quasimorphism: dict = field(
        default_factory=lambda: {"terms": [{"pattern": "ab", "weight": "1"}]}
    )
    quasi_params: dict = field(
        default_factory=lambda: {
            "twisted_window": "1",
            "twisted_max_len": 6,
            "defect_max_len": 8,
            "test_elements": ["abAB"],
            "max_power": 16,
        }
    )
    hull_params: dict = field(
        default_factory=lambda: {
            "w0": "1",
            "horizon": "200",
            "samples": 3,
            "epsilon": "1/10",
            "equi_t_max": "1000",
            "cocycle_trials": 100,
        }
    )

    @staticmethod
    def from_json(obj: Mapping) -> "ExperimentConfig":
        problems: list[str] = []
        known = {
            "d",
            "window",
            "dim",
            "radius",
            "seed",
            "stages",
            "analysis",
            "quasimorphism",
            "quasi_params",
            "hull_params",
        }
        for key in obj:
            if key not in known:
                problems.append(f"{key}: unknown field")
        defaults = ExperimentConfig()
        d = _int(obj.get("d", defaults.d), "d", problems)
        dim = _int(obj.get("dim", defaults.dim), "dim", problems)
        seed = _int(obj.get("seed", defaults.seed), "seed", problems)
        if not (-(2**63) <= seed < 2**64):
            problems.append("seed: must fit in 64 bits")
        window = _rational(obj.get("window", defaults.window), "window", problems)
        radius = _rational(obj.get("radius", defaults.radius), "radius", problems)
        if window < 0:
            problems.append("window: must be >= 0")
        if radius < 0:
            problems.append("radius: must be >= 0")
        stages = dict(defaults.stages)
        for k, v in dict(obj.get("stages", {})).items():
            if k not in stages:
                problems.append(f"stages.{k}: unknown stage")
            elif not isinstance(v, bool):
                problems.append(f"stages.{k}: expected a boolean")
            else:
                stages[k] = v
        analysis = dict(defaults.analysis)
        analysis.update(dict(obj.get("analysis", {})))
        quasimorphism = obj.get("quasimorphism", defaults.quasimorphism)
        quasi_params = dict(defaults.quasi_params)
        quasi_params.update(dict(obj.get("quasi_params", {})))
        hull_params = dict(defaults.hull_params)
        hull_params.update(dict(obj.get("hull_params", {})))
        if problems:
            raise ConfigError(problems)
        return ExperimentConfig(
            d=d,
            window=window,
            dim=dim,
            radius=radius,
            seed=seed,
            stages=stages,
            analysis=analysis,
            quasimorphism=dict(quasimorphism),
            quasi_params=quasi_params,
            hull_params=hull_params,
        )

    @staticmethod
    def load(path: str) -> "ExperimentConfig":
        try:
            with open(path, "r", encoding="utf-8") as fh:
                obj = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ConfigError([f"config: malformed JSON ({exc})"]) from exc
        except OSError as exc:
            raise ConfigError([f"config: {exc}"]) from exc
        if not isinstance(obj, dict):
            raise ConfigError(["config: top level must be an object"])
        return ExperimentConfig.from_json(obj)

    def echo(self) -> dict:
        return {
            "d": self.d,
            "window": str(self.window),
            "dim": self.dim,
            "radius": str(self.radius),
            "seed": self.seed,
            "stages": dict(self.stages),
            "analysis": {k: (str(v) if isinstance(v, Fraction) else v) for k, v in self.analysis.items()},
            "quasimorphism": self.quasimorphism,
            "quasi_params": self.quasi_params,
            "hull_params": self.hull_params,
        }


def report_json(report: dict) -> str:
    return json.dumps(report, sort_keys=True, indent=2) + "\n"
