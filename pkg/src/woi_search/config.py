"""Run-config documents, built-in presets and their validation.

A config is a JSON object with the keys ``concepts``, ``woi``, ``target_l``,
``budget``, ``ga``, ``policy``, ``mode``, ``seed`` and, for experiments,
``repetitions`` and ``outputs``. ``concepts`` is either the name of a built-in
portfolio (``"case1"``, ``"case2"``) or a list of
``{id, kind, n, scale, offset[, lower, upper]}`` objects.
"""

from __future__ import annotations

import copy
import json
from dataclasses import dataclass, field, replace
from pathlib import Path

from .allocation import AllocationPolicy
from .benchmarks import CASE2_ZDT3_OFFSET, PORTFOLIOS, AffineTransform, Concept, TestFunction
from .engine import GAParams
from .orchestrator import RunConfig
from .objective_space import WindowOfInterest

TOP_KEYS = {"concepts", "woi", "target_l", "budget", "ga", "policy", "mode", "seed",
            "repetitions", "outputs"}
GA_KEYS = {"N", "p_c", "p_m", "eta_c", "eta_m", "n_r", "tournament_size", "rng_seed"}
POLICY_KEYS = {"gq0", "quotas", "category_sizes"}
CONCEPT_KEYS = {"id", "kind", "n", "scale", "offset", "lower", "upper"}
OUTPUTS = {"report", "trajectories", "boxplot", "summary"}


class ConfigError(ValueError):
    """Invalid config document; the message names the offending key."""


def concept_to_dict(concept: Concept) -> dict:
    fn = concept.function
    out = {"id": concept.id, "kind": fn.kind, "n": fn.n,
           "scale": list(concept.transform.scale), "offset": list(concept.transform.offset)}
    if fn.kind == "SCH1":
        out["lower"], out["upper"] = list(fn.lower), list(fn.upper)
    return out


def _case_concepts(name: str) -> list[dict]:
    return [concept_to_dict(c) for c in PORTFOLIOS[name]()]


PRESETS = {
    "case1": {"concepts": "case1", "woi": [0.2, 0.5], "target_l": 1},
    # ZDT3-1's offset is spelled out so the override is visible in the document
    "case2": {
        "concepts": _case_concepts("case1")[:-1] + [{
            "id": "ZDT3-1", "kind": "ZDT3", "n": 30,
            "scale": [1.0, 1.0], "offset": list(CASE2_ZDT3_OFFSET),
        }],
        "woi": [0.3, 0.4],
        "target_l": 2,
    },
}


@dataclass(frozen=True)
class ExperimentSpec:
    base: RunConfig
    repetitions: int = 1
    outputs: frozenset = field(default_factory=lambda: frozenset(OUTPUTS))

    def __post_init__(self):
        if isinstance(self.repetitions, bool) or not isinstance(self.repetitions, int) \
                or self.repetitions < 1:
            raise ConfigError(f"repetitions: must be a positive integer, got {self.repetitions!r}")

    def seed_for(self, rep: int) -> int:
        return self.base.effective_seed + rep

    def run_configs(self, mode: str | None = None) -> list[RunConfig]:
        mode = mode or self.base.mode
        return [replace(self.base, seed=self.seed_for(i), mode=mode)
                for i in range(self.repetitions)]


def preset(name: str) -> dict:
    """Config document for a built-in preset (``case1``, ``case2``, ``single:<fn>:<woi>``)."""
    if name in PRESETS:
        return copy.deepcopy(PRESETS[name])
    if name.startswith("single:"):
        parts = name.split(":")
        if len(parts) != 3:
            raise ConfigError(f"preset: expected single:<fn>:<woi>, got {name!r}")
        _, kind, woi = parts
        try:
            limits = [float(v) for v in woi.split(",")]
        except ValueError as exc:
            raise ConfigError(f"preset: cannot parse window limits {woi!r}") from exc
        return {
            "concepts": [{"id": kind, "kind": kind}],
            "woi": limits,
            "target_l": 1,
            "budget": 1000,
        }
    raise ConfigError(f"preset: unknown preset {name!r}")


def _reject_unknown(doc: dict, allowed: set, where: str) -> None:
    unknown = sorted(set(doc) - allowed)
    if unknown:
        prefix = f"{where}." if where else ""
        raise ConfigError(f"{prefix}{unknown[0]}: unknown key")


def _wrap(key: str, fn, *args, **kwargs):
    try:
        return fn(*args, **kwargs)
    except ConfigError:
        raise
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"{key}: {exc}") from exc


def _parse_concept(doc, i: int) -> Concept:
    key = f"concepts[{i}]"
    if not isinstance(doc, dict):
        raise ConfigError(f"{key}: expected an object")
    _reject_unknown(doc, CONCEPT_KEYS, key)
    for required in ("id", "kind"):
        if required not in doc:
            raise ConfigError(f"{key}.{required}: missing")
    fn = _wrap(f"{key}.kind", TestFunction, doc["kind"], doc.get("n"), doc.get("lower"),
               doc.get("upper"))
    transform = _wrap(f"{key}.scale", AffineTransform, doc.get("scale", (1.0, 1.0)),
                      doc.get("offset", (0.0, 0.0)))
    return Concept(str(doc["id"]), fn, transform)


def parse_config(doc: dict) -> ExperimentSpec:
    """Validate a config document and apply defaults."""
    if not isinstance(doc, dict):
        raise ConfigError("config: top level must be an object")
    _reject_unknown(doc, TOP_KEYS, "")

    concepts = doc.get("concepts")
    if concepts is None:
        raise ConfigError("concepts: missing")
    if isinstance(concepts, str):
        if concepts not in PORTFOLIOS:
            raise ConfigError(f"concepts: unknown portfolio {concepts!r}")
        portfolio = PORTFOLIOS[concepts]()
    elif isinstance(concepts, list):
        portfolio = [_parse_concept(c, i) for i, c in enumerate(concepts)]
    else:
        raise ConfigError("concepts: expected a portfolio name or a list")

    if "woi" not in doc:
        raise ConfigError("woi: missing")
    woi = _wrap("woi", WindowOfInterest, doc["woi"])

    ga_doc = doc.get("ga", {})
    if not isinstance(ga_doc, dict):
        raise ConfigError("ga: expected an object")
    _reject_unknown(ga_doc, GA_KEYS, "ga")
    ga = _ga_params(ga_doc)

    policy_doc = doc.get("policy", {})
    if not isinstance(policy_doc, dict):
        raise ConfigError("policy: expected an object")
    _reject_unknown(policy_doc, POLICY_KEYS, "policy")
    policy_doc = dict(policy_doc)
    if "quotas" in policy_doc:
        policy_doc["quotas"] = tuple(policy_doc["quotas"])
    if isinstance(policy_doc.get("category_sizes"), list):
        policy_doc["category_sizes"] = tuple(policy_doc["category_sizes"])
    policy = _wrap("policy", AllocationPolicy, **policy_doc)

    base = _wrap(
        "config", RunConfig,
        portfolio=tuple(portfolio),
        woi=woi,
        target_l=doc.get("target_l", 1),
        total_generation_budget=doc.get("budget"),
        ga=ga,
        policy=policy,
        mode=doc.get("mode", "simultaneous"),
        seed=doc.get("seed"),
    )
    for concept in portfolio:
        n_o = len(concept.transform.scale)
        if n_o != woi.n_o:
            raise ConfigError(f"woi: has {woi.n_o} limits but concept {concept.id!r} has {n_o} objectives")

    outputs = doc.get("outputs", sorted(OUTPUTS))
    if not isinstance(outputs, list) or not set(outputs) <= OUTPUTS:
        raise ConfigError(f"outputs: expected a subset of {sorted(OUTPUTS)}")
    return ExperimentSpec(base, doc.get("repetitions", 1), frozenset(outputs))


def _ga_params(ga_doc: dict) -> GAParams:
    # name the exact key in the diagnostic
    defaults = GAParams()
    for key in GA_KEYS & set(ga_doc):
        probe = {k: getattr(defaults, k) for k in GA_KEYS}
        probe[key] = ga_doc[key]
        _wrap(f"ga.{key}", GAParams, **probe)
    return _wrap("ga", GAParams, **ga_doc)


def merge(base: dict, override: dict) -> dict:
    merged = copy.deepcopy(base)
    for key, value in override.items():
        if isinstance(value, dict) and isinstance(merged.get(key), dict):
            merged[key] = {**merged[key], **value}
        else:
            merged[key] = copy.deepcopy(value)
    return merged


def load_config(path=None, preset_name: str | None = None, overrides: dict | None = None) -> ExperimentSpec:
    """Read and validate a JSON config, optionally layered over a preset.

    ``path`` may also be a preset name such as ``"case1"``.
    """
    doc: dict = {}
    if preset_name:
        doc = preset(preset_name)
    if path is not None:
        text_path = str(path)
        if not Path(text_path).exists() and (text_path in PRESETS or text_path.startswith("single:")):
            doc = merge(doc, preset(text_path))
        else:
            try:
                file_doc = json.loads(Path(text_path).read_text())
            except FileNotFoundError as exc:
                raise ConfigError(f"config: file not found: {text_path}") from exc
            except json.JSONDecodeError as exc:
                raise ConfigError(f"config: malformed JSON ({exc})") from exc
            if not isinstance(file_doc, dict):
                raise ConfigError("config: top level must be an object")
            doc = merge(doc, file_doc)
    if overrides:
        doc = merge(doc, overrides)
    if not doc:
        raise ConfigError("config: no config file or preset given")
    return parse_config(doc)
