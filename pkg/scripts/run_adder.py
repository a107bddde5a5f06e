#!/usr/bin/env python
"""Adder truth table, ideal and noisy."""
import argparse
from pathlib import Path

from starsim.experiments import adder
from starsim.statevector import DEFAULT_NOISE


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--shots", type=int, default=8192)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--out", default="results")
    args = ap.parse_args()

    cases = adder.PRESETS["all"]()
    ideal = adder.run_adder_cases(cases, None)
    noisy = adder.run_adder_cases(cases, args.shots, DEFAULT_NOISE, args.seed)
    print(f"{'case':12s} {'expected':12s} ideal   noisy")
    for i, n in zip(ideal, noisy):
        print(f"{i.case.name:12s} {','.join(i.flagged):12s} {i.flagged_probability:.4f}  "
              f"{n.flagged_probability:.4f}{'' if n.modal_correct else '  (not modal)'}")
    print(f"modal correct under noise: {sum(r.modal_correct for r in noisy)}/{len(noisy)}")
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    (out / "adder.csv").write_text(adder.adder_csv(noisy))


if __name__ == "__main__":
    main()
