#!/usr/bin/env python
"""Rabi curves in all three modes, averaged visibilities over several seeds."""
import argparse
from pathlib import Path

import numpy as np

from starsim.experiments import rabi
from starsim.statevector import DEFAULT_NOISE, NoiseModel


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--seeds", type=int, default=20)
    ap.add_argument("--shots", type=int, default=8192)
    ap.add_argument("--noise", default=None, help="p1=..,p2=..,ro=..")
    ap.add_argument("--basis", choices=("Z", "X"), default="Z")
    ap.add_argument("--out", default="results")
    args = ap.parse_args()

    noise = NoiseModel.parse(args.noise) if args.noise else DEFAULT_NOISE
    vis = {m: [] for m in rabi.MODES}
    for s in range(args.seeds):
        pts = rabi.rabi_all_modes(args.shots, noise, s, args.basis)
        for m in rabi.MODES:
            vis[m].append(rabi.curve_visibility([p for p in pts if p.mode == m]))
        if s == 0:
            out = Path(args.out)
            out.mkdir(parents=True, exist_ok=True)
            (out / "rabi_seed0.csv").write_text(rabi.rabi_csv(pts))

    print(f"ideal visibility {rabi.curve_visibility(rabi.rabi_curve('bare', None)):.4f}")
    for m, v in vis.items():
        print(f"{m:22s} V = {np.mean(v):.4f} +- {np.std(v, ddof=1) / np.sqrt(len(v)):.4f}")


if __name__ == "__main__":
    main()
