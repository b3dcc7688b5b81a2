"""Differential campaign: constraint monitor vs brute-force oracle on random instances.

    python scripts/differential.py --cases 1000 --seed 0
"""

from __future__ import annotations

import argparse
import itertools
import random
import time
from dataclasses import dataclass

from hypermon.formula import Spec
from hypermon.monitor import MonitorConfig, monitor_offline
from hypermon.random_gen import random_body, random_core, random_trace_set
from hypermon.semantics import oracle_monitor


@dataclass(frozen=True)
class CampaignConfig:
    cases: int = 1000
    seed: int = 0
    depth: int = 4
    max_traces: int = 4
    max_length: int = 5


CONFIGS = [MonitorConfig(node_tree=t, split=s) for t, s in itertools.product((True, False), repeat=2)]


def agrees(expected, got) -> bool:
    # the monitor may notice a violation later than the earliest doomed prefix, never earlier
    if expected.violation != got.violation:
        return False
    return not got.violation or (got.trace_index == expected.trace_index and got.event_index >= expected.event_index)


def run_campaign(cfg: CampaignConfig, verbose: bool = False) -> dict[str, float]:
    rng = random.Random(cfg.seed)
    mismatches = violations = 0
    start = time.perf_counter()
    for k in range(cfg.cases):
        body = random_core(rng, cfg.depth) if k % 2 else random_body(rng, cfg.depth)
        spec = Spec(("p1", "p2"), body, frozenset("ab"))
        traces = random_trace_set(rng, cfg.max_traces, cfg.max_length)
        expected = oracle_monitor(spec, traces)
        violations += expected.violation
        for mc in CONFIGS:
            got, _ = monitor_offline(spec, traces, mc)
            if not agrees(expected, got):
                mismatches += 1
                if verbose:
                    print(f"MISMATCH case={k} tree={mc.node_tree} split={mc.split} spec={spec} oracle={expected} monitor={got}")
                break
    return {
        "cases": cfg.cases,
        "mismatches": mismatches,
        "violations": violations,
        "seconds": round(time.perf_counter() - start, 2),
    }


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--cases", type=int, default=1000)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--depth", type=int, default=4)
    args = ap.parse_args()
    result = run_campaign(CampaignConfig(args.cases, args.seed, args.depth), verbose=True)
    print(" ".join(f"{k}={v}" for k, v in result.items()))


if __name__ == "__main__":
    main()
