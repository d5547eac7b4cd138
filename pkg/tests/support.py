"""Shared builders for tests: quick entries, registers, and randomized inputs."""

from __future__ import annotations

import random

from riskreg.model import (
    Asset,
    AssetCategory,
    RiskEntry,
    RiskRegister,
    Threat,
    Vulnerability,
)
from riskreg.scoring import compute_risk, score_register

CATEGORIES = tuple(AssetCategory)
OWNERS = ("CEO", "CIO", "COO")


def make_entry(
    entry_id: int,
    a: int = 3,
    t: int = 5,
    v: int = 5,
    *,
    name: str | None = None,
    category: AssetCategory = AssetCategory.SOFTWARE,
    owner: str = "CIO",
    threat_name: str | None = None,
    vuln_name: str | None = None,
    risk: int | None = None,
) -> RiskEntry:
    asset = Asset(entry_id, name or f"Asset {entry_id}", category, owner, a)
    threat = Threat(entry_id, threat_name or f"Threat {entry_id}", t)
    vulnerability = Vulnerability(entry_id, vuln_name or f"Vulnerability {entry_id}", v)
    if risk is None:
        risk = compute_risk(a, t, v)
    return RiskEntry(entry_id, asset, threat, vulnerability, risk)


def make_register(triples, appetite: int = 150) -> RiskRegister:
    entries = tuple(
        make_entry(i + 1, a, t, v) for i, (a, t, v) in enumerate(triples)
    )
    return score_register(RiskRegister(entries, appetite))


def random_triple(rng: random.Random) -> tuple[int, int, int]:
    return rng.randint(1, 5), rng.randint(1, 10), rng.randint(1, 10)


def random_register(rng: random.Random, max_entries: int = 20, appetite: int = 150) -> RiskRegister:
    n = rng.randint(0, max_entries)
    entries = []
    for i in range(n):
        a, t, v = random_triple(rng)
        entries.append(
            make_entry(
                i + 1,
                a,
                t,
                v,
                category=rng.choice(CATEGORIES),
                owner=rng.choice(OWNERS),
            )
        )
    return score_register(RiskRegister(tuple(entries), appetite))
