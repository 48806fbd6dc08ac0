"""Deterministic synthetic cohort for the in-memory Beacon endpoint.

The shipped default places 24 parkinson-affected individuals on the
chromosome-4 site with a 14:10 male/female carrier split (ratio 1.4) and
an even 10:10 split on the X-linked site, so sex-stratification questions
have exact, fixture-determined answers. All sizes are desk-scale inventions:
they support the walk-through, they do not model any real cohort.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from importlib import resources
from random import Random
from typing import Any, Optional


@dataclass(frozen=True)
class SiteSpec:
    site_id: str
    chrom: str
    position: int
    gene: Optional[str] = None

    def __post_init__(self) -> None:
        if self.position <= 0:
            raise ValueError("positions must be positive")


@dataclass(frozen=True)
class StratumSpec:
    """Count of identical individuals: sex x diseases x carried sites."""

    karyotypic_sex: str
    diseases: tuple[tuple[str, str], ...]   # (ontology id, label)
    sites: tuple[str, ...]
    count: int

    def __post_init__(self) -> None:
        if self.karyotypic_sex not in ("XX", "XY"):
            raise ValueError(f"karyotypic sex must be XX or XY, got {self.karyotypic_sex!r}")
        if self.count < 0:
            raise ValueError("stratum counts must be non-negative")


@dataclass(frozen=True)
class FixtureSpec:
    seed: int
    sites: tuple[SiteSpec, ...]
    strata: tuple[StratumSpec, ...]

    def __post_init__(self) -> None:
        if sum(s.count for s in self.strata) <= 0:
            raise ValueError("fixture needs at least one individual")
        site_ids = [s.site_id for s in self.sites]
        if len(site_ids) != len(set(site_ids)):
            raise ValueError("site ids must be unique")
        known = set(site_ids)
        for stratum in self.strata:
            missing = set(stratum.sites) - known
            if missing:
                raise ValueError(f"stratum references unknown sites {sorted(missing)}")


@dataclass(frozen=True)
class CohortFixture:
    individuals: tuple[dict[str, Any], ...]
    variants: tuple[dict[str, Any], ...]

    def __post_init__(self) -> None:
        ids = {ind["id"] for ind in self.individuals}
        site_ids = [v["site_id"] for v in self.variants]
        if len(site_ids) != len(set(site_ids)):
            raise ValueError("variant site ids must be unique")
        for variant in self.variants:
            if variant["position"] <= 0:
                raise ValueError("variant positions must be positive")
            unknown = set(variant["carriers"]) - ids
            if unknown:
                raise ValueError(f"carriers missing from individuals: {sorted(unknown)}")

    def to_json(self) -> str:
        doc = {"individuals": list(self.individuals), "variants": list(self.variants)}
        return json.dumps(doc, indent=2, ensure_ascii=False) + "\n"

    @classmethod
    def from_json(cls, text: str) -> "CohortFixture":
        doc = json.loads(text)
        return cls(individuals=tuple(doc["individuals"]), variants=tuple(doc["variants"]))


_PD = ("SNOMED:49049000", "parkinson disease")
_CC = ("SNOMED:363406005", "colon cancer")
_T2D = ("SNOMED:44054006", "type 2 diabetes")
_ASTHMA = ("SNOMED:195967001", "asthma")
_MIGRAINE = ("SNOMED:37796009", "migraine")
_LI = ("SNOMED:267425008", "lactose intolerance")

DEFAULT_FIXTURE_SPEC = FixtureSpec(
    seed=4807,
    sites=(
        SiteSpec("var-chr1-0", "1", 110050),
        SiteSpec("var-chr4-0", "4", 90645250),
        SiteSpec("var-chrX-0", "X", 153630420),
        SiteSpec("var-chr5-0", "5", 112830000, gene="APC"),
        SiteSpec("var-chr7-0", "7", 505000, gene="EGFR"),
    ),
    strata=(
        # 24 parkinson individuals: 14 XY vs 10 XX on the autosomal site
        # (ratio 1.4), 10 vs 10 on the X-linked site (ratio 1.0).
        StratumSpec("XY", (_PD,), ("var-chr4-0", "var-chrX-0"), 10),
        StratumSpec("XY", (_PD,), ("var-chr4-0",), 4),
        StratumSpec("XX", (_PD,), ("var-chr4-0", "var-chrX-0"), 10),
        StratumSpec("XX", (_CC,), ("var-chr5-0",), 3),
        StratumSpec("XY", (_CC,), ("var-chr5-0",), 2),
        StratumSpec("XY", (_T2D,), ("var-chr7-0",), 2),
        StratumSpec("XX", (_T2D,), ("var-chr7-0",), 1),
        StratumSpec("XX", (_ASTHMA, _MIGRAINE), ("var-chr7-0",), 2),
        StratumSpec("XY", (_ASTHMA,), (), 2),
        StratumSpec("XX", (_LI,), ("var-chr1-0",), 2),
        StratumSpec("XY", (), (), 2),
    ),
)


def generate_fixture(spec: FixtureSpec) -> CohortFixture:
    """Expand stratum counts into concrete individuals and variant sites.

    The seed only drives the interleaving of individuals, so equal specs
    always produce byte-identical fixture files.
    """
    rng = Random(spec.seed)
    members: list[tuple[str, tuple[tuple[str, str], ...], tuple[str, ...]]] = []
    for stratum in spec.strata:
        members.extend((stratum.karyotypic_sex, stratum.diseases, stratum.sites)
                       for _ in range(stratum.count))
    rng.shuffle(members)

    individuals = []
    carriers: dict[str, list[str]] = {site.site_id: [] for site in spec.sites}
    for index, (sex, diseases, sites) in enumerate(members, start=1):
        ind_id = f"I-{index:04d}"
        individuals.append({
            "id": ind_id,
            "karyotypic_sex": sex,
            "diseases": [{"id": code, "label": label} for code, label in diseases],
        })
        for site_id in sites:
            carriers[site_id].append(ind_id)

    variants = tuple(
        {
            "site_id": site.site_id,
            "chrom": site.chrom,
            "position": site.position,
            "gene": site.gene,
            "carriers": carriers[site.site_id],
        }
        for site in spec.sites
    )
    return CohortFixture(individuals=tuple(individuals), variants=variants)


def load_default_fixture() -> CohortFixture:
    """The checked-in fixture file (regenerated in tests to detect drift)."""
    text = resources.files("beaconql").joinpath("mockbeacon/data/cohort.json").read_text()
    return CohortFixture.from_json(text)
