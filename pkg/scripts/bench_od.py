"""Observational-determinism benchmark, node tree on vs off.

Workloads: uniformly random traces (violate early), a duplicate-heavy set of
traces produced by one deterministic program, and exact copies of one trace.

    python scripts/bench_od.py --traces 100 --length 50
"""

from __future__ import annotations

import argparse
import random
import time
from dataclasses import dataclass

from hypermon import MonitorConfig, monitor_offline, parse_spec

OD = "forall p1, p2. G((out_p1 <-> out_p2) W !(in_p1 <-> in_p2))"


@dataclass(frozen=True)
class BenchConfig:
    traces: int = 100
    length: int = 50
    distinct: int = 5
    seed: int = 1


def random_traces(rng: random.Random, n: int, length: int) -> list[list[frozenset[str]]]:
    return [[frozenset(p for p in ("in", "out") if rng.random() < 0.5) for _ in range(length)] for _ in range(n)]


def program_traces(rng: random.Random, n: int, length: int) -> list[list[frozenset[str]]]:
    # out echoes in, so the set satisfies OD
    return [[frozenset(("in", "out")) if rng.random() < 0.5 else frozenset() for _ in range(length)] for _ in range(n)]


def workloads(cfg: BenchConfig) -> dict[str, list]:
    rng = random.Random(cfg.seed)
    base = program_traces(rng, cfg.distinct, cfg.length)
    return {
        "random": random_traces(rng, cfg.traces, cfg.length),
        "duplicates": [base[k % cfg.distinct] for k in range(cfg.traces)],
        "copies": [base[0]] * cfg.traces,
    }


def run(cfg: BenchConfig) -> list[dict]:
    spec = parse_spec(OD)
    rows = []
    for name, traces in workloads(cfg).items():
        for tree in (True, False):
            start = time.perf_counter()
            verdict, stats = monitor_offline(spec, traces, MonitorConfig(node_tree=tree, split=tree))
            rows.append({"workload": name, "tree": tree, "verdict": str(verdict),
                         "seconds": round(time.perf_counter() - start, 2), **stats.as_dict()})
    return rows


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--traces", type=int, default=100)
    ap.add_argument("--length", type=int, default=50)
    ap.add_argument("--distinct", type=int, default=5)
    ap.add_argument("--seed", type=int, default=1)
    args = ap.parse_args()
    for row in run(BenchConfig(args.traces, args.length, args.distinct, args.seed)):
        print(" ".join(f"{k}={v}" for k, v in row.items()))


if __name__ == "__main__":
    main()
