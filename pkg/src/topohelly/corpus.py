"""Corpus runs: generate seeded families and push each through every check.

A corpus config lists groups of instances.  Instance ``i`` of a group uses
seed ``group.seed + i`` and, when ``n`` is a ``[lo, hi]`` range, size
``lo + i mod (hi - lo + 1)``.  ``k`` is an integer, a list cycled over the
instances, or ``"auto"`` for the least k at which the family is
(k-|G|)-acyclic.
"""
from __future__ import annotations

import datetime
import hashlib
import json
import logging
import math
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

from .complexes import SetFamily
from .errors import MalformedInputError, ResourceLimitError
from .generators import RNG_ALGORITHM, GeneratorSpec, generate
from .helly import fractional_helly_check, intersection_depth, transversal_number
from .io import dumps, family_to_json, read_json, write_json
from .nerve import (DEFAULT_MAX_N, DEFAULT_MAX_VERTICES, IntersectionHomology, is_k_acyclic_family,
                    leray_analysis, nerve)
from .spectral import convergence_check, nerve_theorem_check

log = logging.getLogger(__name__)

CHECKS = ("acyclic", "spectral", "leray", "fh", "nervethm", "tau")
PASS, FAIL, HYP, SKIP = "pass", "fail", "hypothesis-failed", "skipped"


@dataclass
class Group:
    name: str
    generator: dict
    count: int
    seed: int
    k: object = "auto"
    nervethm_k: object = None
    checks: tuple = CHECKS

    @classmethod
    def from_json(cls, doc: dict) -> "Group":
        try:
            checks = tuple(doc.get("checks", CHECKS))
            unknown = set(checks) - set(CHECKS)
            if unknown:
                raise MalformedInputError("unknown checks %s" % sorted(unknown))
            return cls(name=str(doc["name"]), generator=dict(doc["generator"]), count=int(doc["count"]),
                       seed=int(doc.get("seed", 0)), k=doc.get("k", "auto"), nervethm_k=doc.get("nervethm_k"),
                       checks=checks)
        except (KeyError, TypeError) as e:
            raise MalformedInputError("bad corpus group %r: %s" % (doc.get("name"), e)) from e

    def spec(self, i: int) -> GeneratorSpec:
        g = dict(self.generator)
        n = g.get("n", 4)
        if isinstance(n, list):
            lo, hi = n
            g["n"] = lo + i % (hi - lo + 1)
        g["seed"] = self.seed + i
        return GeneratorSpec.from_json(g)


def _pick(value, i: int):
    if isinstance(value, list):
        return value[i % len(value)]
    return value


@dataclass
class CorpusConfig:
    name: str
    groups: list
    max_n: int = DEFAULT_MAX_N
    max_vertices: int = DEFAULT_MAX_VERTICES
    rng: str = RNG_ALGORITHM

    @classmethod
    def from_json(cls, doc: dict) -> "CorpusConfig":
        if not isinstance(doc, dict) or "groups" not in doc:
            raise MalformedInputError("corpus config needs a 'groups' list")
        rng = doc.get("rng", RNG_ALGORITHM)
        if rng != RNG_ALGORITHM:
            raise MalformedInputError("unsupported rng %r (only %r)" % (rng, RNG_ALGORITHM))
        caps = doc.get("caps", {})
        cfg = cls(name=str(doc.get("name", "corpus")), groups=[Group.from_json(g) for g in doc["groups"]],
                  max_n=int(caps.get("max_n", DEFAULT_MAX_N)),
                  max_vertices=int(caps.get("max_vertices", DEFAULT_MAX_VERTICES)), rng=rng)
        if cfg.max_n < 1 or cfg.max_vertices < 1:
            raise MalformedInputError("caps must be positive")
        return cfg


def default_config_path():
    return resources.files("topohelly") / "data" / "default_corpus.json"


def load_config(path=None) -> CorpusConfig:
    if path is None:
        return CorpusConfig.from_json(json.loads(default_config_path().read_text()))
    return CorpusConfig.from_json(read_json(path))


@dataclass
class InstanceResult:
    id: str
    group: str
    spec: dict
    n: int
    family_sha256: str
    k: int | None = None
    checks: dict = field(default_factory=dict)
    counterexamples: list = field(default_factory=list)

    @property
    def failed(self) -> bool:
        return any(c["status"] == FAIL for c in self.checks.values())

    def to_json(self) -> dict:
        return {"id": self.id, "group": self.group, "spec": self.spec, "n": self.n, "k": self.k,
                "family_sha256": self.family_sha256, "checks": self.checks}


def _resolve_k(k, i, intersections):
    k = _pick(k, i)
    if k == "auto":
        if intersections is None:
            return 0  # only box families skip enumeration, and those are good covers
        return intersections.minimal_k()
    if not isinstance(k, int) or k < 0:
        raise MalformedInputError("k must be a non-negative integer or 'auto'")
    return k


def run_instance(group: Group, i: int, cfg: CorpusConfig) -> tuple[InstanceResult, SetFamily]:
    spec = group.spec(i)
    family = generate(spec, max_n=cfg.max_n)
    text = dumps(family_to_json(family))
    res = InstanceResult("%s-%03d" % (group.name, i), group.name, spec.to_json(), family.n,
                         hashlib.sha256(text.encode()).hexdigest())
    ih = IntersectionHomology(family, cfg.max_n) if family.n <= cfg.max_n else None
    k = _resolve_k(group.k, i, ih)
    res.k = k
    d = family.grid_dimension
    hyp = None
    for check in group.checks:
        try:
            if check == "acyclic":
                hyp = is_k_acyclic_family(family, k, max_n=cfg.max_n, intersections=ih)
                res.checks[check] = {"status": PASS, "verdict": hyp.verdict, "method": hyp.method,
                                     "violations": len(hyp.violations)}
            elif check == "spectral":
                rep = convergence_check(family, k, max_n=cfg.max_n, intersections=ih)
                res.checks[check] = {
                    "status": PASS if rep.verdict else FAIL,
                    "hypothesis": rep.hypothesis.verdict,
                    "tot": rep.tot, "union": rep.union, "nerve": rep.nerve,
                    "einf_first": rep.einf_first, "einf_second": rep.einf_second,
                    "convergence": rep.convergence, "union_matches_tot": rep.union_matches_tot,
                    "union_equals_nerve_from_k": rep.nerve_agreement if rep.hypothesis.verdict else None,
                    "claim_first_issues": rep.claim_first, "claim_second_issues": rep.claim_second,
                }
            elif check == "leray":
                if hyp is None:
                    hyp = is_k_acyclic_family(family, k, max_n=cfg.max_n, intersections=ih)
                lr = leray_analysis(ih.nerve.complex if ih else nerve(family).complex, cfg.max_vertices)
                good = ih.minimal_k() == 0 if ih else is_k_acyclic_family(family, 0, max_n=cfg.max_n).verdict
                bound = d if good else max(k, d)
                if not hyp.verdict:
                    status = HYP
                else:
                    status = PASS if lr.number <= bound else FAIL
                res.checks[check] = {"status": status, "leray_number": lr.number, "bound": bound,
                                     "good_cover": good, "witness": list(lr.witness) if lr.witness else None}
            elif check == "fh":
                kf = max(k, d)
                if kf + 1 > family.n:
                    res.checks[check] = {"status": SKIP, "k": kf, "reason": "k + 1 exceeds n"}
                    continue
                rep = fractional_helly_check(family, kf, max_n=cfg.max_n, intersections=ih)
                if not rep.hypothesis_holds:
                    status = HYP
                else:
                    status = PASS if rep.verdict else FAIL
                res.checks[check] = {"status": status, "k": kf,
                                     "alpha": {"num": rep.alpha.numerator, "den": rep.alpha.denominator},
                                     "depth": rep.depth, "beta_n_floor": rep.beta_n_floor,
                                     "hypothesis_method": rep.hypothesis.method}
            elif check == "nervethm":
                kt = _pick(group.nervethm_k, i)
                kt = k if kt is None else kt
                rep = nerve_theorem_check(family, kt, max_n=cfg.max_n, intersections=ih)
                if rep.status != "ok":
                    status = HYP
                else:
                    status = PASS if rep.verdict else FAIL
                res.checks[check] = {"status": status, "k": kt, "union": rep.union, "nerve": rep.nerve}
            elif check == "tau":
                tr = transversal_number(family)
                depth = intersection_depth(family).depth
                bound = math.ceil(family.n / depth) if depth else 0
                res.checks[check] = {"status": PASS if tr.tau >= bound else FAIL, "tau": tr.tau,
                                     "depth": depth, "lower_bound": bound, "method": tr.method}
        except ResourceLimitError as e:
            res.checks[check] = {"status": "resource-limit", "error": str(e)}
    return res, family


@dataclass
class CorpusRun:
    config: CorpusConfig
    instances: list
    counterexamples: list
    timestamp: str

    def summary(self) -> dict:
        per: dict = {}
        for inst in self.instances:
            for name, c in inst.checks.items():
                row = per.setdefault(name, {})
                row[c["status"]] = row.get(c["status"], 0) + 1
        failures = sum(1 for inst in self.instances if inst.failed)
        limits = sum(1 for inst in self.instances for c in inst.checks.values() if c["status"] == "resource-limit")
        return {"instances": len(self.instances), "failures": failures, "resource_limits": limits,
                "per_check": {k: dict(sorted(v.items())) for k, v in sorted(per.items())}}

    def manifest(self) -> dict:
        return {
            "config": self.config.name,
            "rng": self.config.rng,
            "caps": {"max_n": self.config.max_n, "max_vertices": self.config.max_vertices},
            "timestamp": self.timestamp,
            "summary": self.summary(),
            "counterexamples": self.counterexamples,
            "instances": [inst.to_json() for inst in self.instances],
        }

    @property
    def exit_code(self) -> int:
        s = self.summary()
        if s["failures"]:
            return 1
        if s["resource_limits"]:
            return 3
        return 0


def run_corpus(cfg: CorpusConfig, out_dir=None) -> CorpusRun:
    """Generate and check every instance; write families, counterexamples and the manifest under ``out_dir``."""
    out = Path(out_dir) if out_dir is not None else None
    if out is not None:
        (out / "families").mkdir(parents=True, exist_ok=True)
    instances, counterexamples = [], []
    for group in cfg.groups:
        for i in range(group.count):
            res, family = run_instance(group, i, cfg)
            log.info("%s: %s", res.id, {c: v["status"] for c, v in res.checks.items()})
            instances.append(res)
            doc = family_to_json(family)
            if out is not None:
                write_json(doc, out / "families" / ("%s.json" % res.id))
            for check, c in res.checks.items():
                if c["status"] == FAIL:
                    name = "%s-%s.json" % (res.id, check)
                    counterexamples.append(name)
                    if out is not None:
                        (out / "counterexamples").mkdir(exist_ok=True)
                        write_json({"instance": res.to_json(), "check": check, "family": doc},
                                   out / "counterexamples" / name)
    stamp = datetime.datetime.now(datetime.timezone.utc).isoformat(timespec="seconds")
    run = CorpusRun(cfg, instances, counterexamples, stamp)
    if out is not None:
        write_json(run.manifest(), out / "manifest.json")
    return run


def strip_timestamp(manifest: dict) -> dict:
    return {k: v for k, v in manifest.items() if k != "timestamp"}
