"""Recompute the brute-force reference values stored under tests/data.

Only the enumeration oracles in tests/oracles.py are used, never the
solvers, so the frozen files are an independent check on them.

    python3 scripts/freeze_oracles.py
"""

import json
import sys
import time
from dataclasses import asdict
from pathlib import Path

ROOT = Path(__file__).resolve().parents[1]
sys.path.insert(0, str(ROOT / "tests"))

from cases import connected_graphs, matching_library, small_params  # noqa: E402
from oracles import (domination_number, edge_cover_number, matching_number,  # noqa: E402
                     robust_optimum)

from rmsmqc.instgen import random_instance  # noqa: E402

DATA = ROOT / "tests" / "data"


def main():
    DATA.mkdir(exist_ok=True)
    t0 = time.perf_counter()
    rows = []
    for params in small_params():
        inst = random_instance(params)
        rows.append({"params": asdict(params), "gamma": inst.gamma, "b": list(inst.b),
                     "optimum": robust_optimum(inst)})
    (DATA / "robust_oracle.json").write_text(json.dumps(rows, indent=1) + "\n")
    print(f"robust oracle: {len(rows)} instances in {time.perf_counter() - t0:.1f}s")

    graphs = connected_graphs(30, 8, seed=8)
    dom = [{"edges": [list(e) for e in g], "domination": domination_number(8, g)} for g in graphs]
    (DATA / "domination_corpus.json").write_text(json.dumps(dom, indent=1) + "\n")
    print("domination numbers:", [d["domination"] for d in dom])

    lib = [{"n": n, "edges": [list(e) for e in g], "matching": matching_number(n, g),
            "edge_cover": edge_cover_number(n, g)} for n, g in matching_library()]
    (DATA / "matching_oracle.json").write_text(json.dumps(lib, indent=1) + "\n")
    print(f"matching library: {len(lib)} graphs")


if __name__ == "__main__":
    main()
