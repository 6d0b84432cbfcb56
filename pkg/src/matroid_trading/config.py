"""Experiment config files: JSON in, validated domain objects out.

All rationals travel as "p/q" strings (or bare integers); floats are
rejected so that config-driven runs stay exact end to end.  Parse errors
raise :class:`ConfigError` carrying the offending field path.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .engine import IIDModel, Model, RandomOrderModel
from .errors import ConfigError, InputError, TradingError
from .matroids import (
    ExplicitMatroid,
    GraphicMatroid,
    Matroid,
    PartitionMatroid,
    UniformMatroid,
)
from .pricing import (
    JointDiscreteDistribution,
    MarginalDistribution,
    as_fraction,
    half_hardness_instance,
    matroid_hardness_instance,
    product,
    uniform_ratio_hardness_instance,
)

MODES = ("simulate", "exact", "hardness-sweep", "random-order", "density", "certify")


@dataclass
class ExperimentConfig:
    mode: str
    seed: int = 0
    trials: int = 1000
    horizon: Optional[int] = None
    matroid: Optional[Matroid] = None
    offline_matroid: Optional[Matroid] = None
    model: Optional[Model] = None
    bound: Optional[Fraction] = None
    generator: Optional[str] = None
    generator_params: dict = field(default_factory=dict)
    epsilons: Optional[list[Fraction]] = None
    label: str = ""
    certify_counts: Optional[dict[str, int]] = None


def _fail(path: str, message: str) -> ConfigError:
    return ConfigError(path or "<config>", message)


def _rational(value, path: str) -> Fraction:
    try:
        return as_fraction(value)
    except InputError as exc:
        raise _fail(path, str(exc)) from exc


def _integer(value, path: str, minimum: Optional[int] = None) -> int:
    if not isinstance(value, int) or isinstance(value, bool):
        raise _fail(path, f"expected an integer, got {value!r}")
    if minimum is not None and value < minimum:
        raise _fail(path, f"must be >= {minimum}, got {value}")
    return value


def parse_matroid(obj, path: str = "matroid") -> Matroid:
    if not isinstance(obj, dict):
        raise _fail(path, f"expected an object, got {type(obj).__name__}")
    kind = obj.get("kind")
    try:
        if kind == "uniform":
            return UniformMatroid(
                _integer(obj.get("k"), f"{path}.k", 1),
                _integer(obj.get("cap"), f"{path}.cap", 1),
            )
        if kind == "partition":
            blocks = obj.get("blocks")
            if not isinstance(blocks, list) or not blocks:
                raise _fail(f"{path}.blocks", "expected a nonempty list of blocks")
            parsed = []
            for i, blk in enumerate(blocks):
                if not isinstance(blk, dict):
                    raise _fail(f"{path}.blocks[{i}]", "expected an object")
                elems = blk.get("elements")
                if not isinstance(elems, list):
                    raise _fail(f"{path}.blocks[{i}].elements", "expected a list")
                parsed.append((elems, _integer(blk.get("cap"), f"{path}.blocks[{i}].cap", 1)))
            return PartitionMatroid(parsed)
        if kind == "graphic":
            edges = obj.get("edges")
            if not isinstance(edges, list) or not edges:
                raise _fail(f"{path}.edges", "expected a nonempty list of [u, v] pairs")
            pairs = []
            for i, e in enumerate(edges):
                if not isinstance(e, list) or len(e) != 2:
                    raise _fail(f"{path}.edges[{i}]", "expected a [u, v] pair")
                pairs.append((e[0], e[1]))
            nv = obj.get("num_vertices")
            return GraphicMatroid(pairs, nv if nv is None else _integer(nv, f"{path}.num_vertices", 1))
        if kind == "explicit":
            k = _integer(obj.get("k"), f"{path}.k", 1)
            fam = obj.get("feasible")
            if not isinstance(fam, list):
                raise _fail(f"{path}.feasible", "expected a list of element lists")
            return ExplicitMatroid(k, fam)
    except TradingError as exc:
        if isinstance(exc, ConfigError):
            raise
        raise _fail(path, str(exc)) from exc
    raise _fail(
        f"{path}.kind",
        f"expected one of uniform/partition/graphic/explicit, got {kind!r}",
    )


def _parse_marginal(obj, path: str) -> MarginalDistribution:
    if not isinstance(obj, list) or not obj:
        raise _fail(path, "expected a nonempty list of {atom, prob} entries")
    atoms = []
    probs = []
    for i, entry in enumerate(obj):
        if not isinstance(entry, dict):
            raise _fail(f"{path}[{i}]", "expected an object with atom and prob")
        atoms.append(_rational(entry.get("atom"), f"{path}[{i}].atom"))
        probs.append(_rational(entry.get("prob"), f"{path}[{i}].prob"))
    try:
        return MarginalDistribution(atoms, probs)
    except TradingError as exc:
        raise _fail(path, str(exc)) from exc


def parse_distribution(obj, path: str = "distribution") -> JointDiscreteDistribution:
    if not isinstance(obj, dict):
        raise _fail(path, f"expected an object, got {type(obj).__name__}")
    if "atoms" in obj:
        entries = obj["atoms"]
        if not isinstance(entries, list) or not entries:
            raise _fail(f"{path}.atoms", "expected a nonempty list")
        atoms = []
        probs = []
        k = None
        for i, entry in enumerate(entries):
            if not isinstance(entry, dict) or "atom" not in entry or "prob" not in entry:
                raise _fail(f"{path}.atoms[{i}]", "expected {atom: [...], prob: p/q}")
            vec = entry["atom"]
            if not isinstance(vec, list):
                raise _fail(f"{path}.atoms[{i}].atom", "expected a list of rationals")
            if k is None:
                k = len(vec)
            atoms.append([_rational(x, f"{path}.atoms[{i}].atom[{j}]") for j, x in enumerate(vec)])
            probs.append(_rational(entry["prob"], f"{path}.atoms[{i}].prob"))
        try:
            return JointDiscreteDistribution(k, atoms, probs)
        except TradingError as exc:
            raise _fail(f"{path}.atoms", str(exc)) from exc
    if "marginals" in obj:
        margs = obj["marginals"]
        if not isinstance(margs, list) or not margs:
            raise _fail(f"{path}.marginals", "expected a nonempty list")
        parsed = [
            _parse_marginal(mobj, f"{path}.marginals[{i}]") for i, mobj in enumerate(margs)
        ]
        try:
            return product(parsed)
        except TradingError as exc:
            raise _fail(f"{path}.marginals", str(exc)) from exc
    if "generator" in obj:
        return _parse_generated(obj["generator"], f"{path}.generator")
    raise _fail(path, "expected one of: atoms, marginals, generator")


def _parse_generated(obj, path: str) -> JointDiscreteDistribution:
    if not isinstance(obj, dict):
        raise _fail(path, "expected an object")
    name = obj.get("name")
    k = _integer(obj.get("k"), f"{path}.k", 1)
    eps = _rational(obj.get("epsilon"), f"{path}.epsilon")
    try:
        if name == "matroid_hardness":
            r = _integer(obj.get("r"), f"{path}.r", 1)
            return matroid_hardness_instance(k, r, eps)
        if name == "uniform_ratio":
            return product(uniform_ratio_hardness_instance(k, eps))
        if name == "half":
            return product(half_hardness_instance(k, eps))
    except TradingError as exc:
        raise _fail(path, str(exc)) from exc
    raise _fail(
        f"{path}.name",
        f"expected one of matroid_hardness/uniform_ratio/half, got {name!r}",
    )


def parse_model(obj, path: str = "model") -> Model:
    if not isinstance(obj, dict):
        raise _fail(path, f"expected an object, got {type(obj).__name__}")
    kind = obj.get("type")
    if kind == "iid":
        return IIDModel(parse_distribution(obj.get("distribution"), f"{path}.distribution"))
    if kind == "random_order":
        ds = obj.get("distributions")
        if not isinstance(ds, list) or not ds:
            raise _fail(f"{path}.distributions", "expected a nonempty list")
        return RandomOrderModel(
            [parse_distribution(d, f"{path}.distributions[{i}]") for i, d in enumerate(ds)]
        )
    raise _fail(f"{path}.type", f"expected iid or random_order, got {kind!r}")


def parse_config_dict(raw, source: str = "<config>") -> ExperimentConfig:
    if not isinstance(raw, dict):
        raise _fail(source, "top-level config must be a JSON object")
    mode = raw.get("mode")
    if mode not in MODES:
        raise _fail("mode", f"expected one of {', '.join(MODES)}, got {mode!r}")
    cfg = ExperimentConfig(mode=mode)
    if "seed" in raw:
        cfg.seed = _integer(raw["seed"], "seed")
    if "trials" in raw:
        cfg.trials = _integer(raw["trials"], "trials", 1)
    if "horizon" in raw:
        cfg.horizon = _integer(raw["horizon"], "horizon", 1)
    if "matroid" in raw:
        cfg.matroid = parse_matroid(raw["matroid"])
    if "offline_matroid" in raw:
        cfg.offline_matroid = parse_matroid(raw["offline_matroid"], "offline_matroid")
    if "model" in raw:
        cfg.model = parse_model(raw["model"])
    if "bound" in raw:
        cfg.bound = _rational(raw["bound"], "bound")
    if "label" in raw:
        if not isinstance(raw["label"], str):
            raise _fail("label", "expected a string")
        cfg.label = raw["label"]
    if "generator" in raw:
        gen = raw["generator"]
        if not isinstance(gen, dict) or "name" not in gen:
            raise _fail("generator", "expected an object with a name")
        cfg.generator = gen["name"]
        cfg.generator_params = {key: val for key, val in gen.items() if key != "name"}
    if "epsilons" in raw:
        eps = raw["epsilons"]
        if not isinstance(eps, list) or not eps:
            raise _fail("epsilons", "expected a nonempty list of rationals")
        cfg.epsilons = [_rational(x, f"epsilons[{i}]") for i, x in enumerate(eps)]
    if "certify" in raw:
        counts = raw["certify"]
        if not isinstance(counts, dict):
            raise _fail("certify", "expected an object of per-property trial counts")
        cfg.certify_counts = {
            name: _integer(v, f"certify.{name}", 1) for name, v in counts.items()
        }
    return cfg


def load_config(path) -> ExperimentConfig:
    try:
        with open(path) as fh:
            raw = json.load(fh)
    except FileNotFoundError as exc:
        raise _fail(str(path), "config file not found") from exc
    except json.JSONDecodeError as exc:
        raise _fail(str(path), f"invalid JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}") from exc
    return parse_config_dict(raw, source=str(path))
