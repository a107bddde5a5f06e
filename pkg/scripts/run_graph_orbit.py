#!/usr/bin/env python
"""Stabilizer signs along the preset local-complementation orbits."""
import argparse
from pathlib import Path

from starsim.experiments import graph_orbit
from starsim.statevector import DEFAULT_NOISE


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--shots", type=int, default=8192)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--out", default="results")
    args = ap.parse_args()

    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    for name, (g, steps) in graph_orbit.PRESETS.items():
        result = graph_orbit.graph_orbit_run(g, steps, args.shots, DEFAULT_NOISE, args.seed)
        print(name)
        for st in result:
            pars = " ".join(f"{p:+.3f}" for p in st.stabilizer_parities)
            print(f"  step {st.index} lc={st.lc_node}  {pars}  oracle {st.oracle_signs}")
        (out / f"{name}.csv").write_text(graph_orbit.orbit_csv(result))


if __name__ == "__main__":
    main()
