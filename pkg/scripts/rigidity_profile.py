"""Print the level schedule with its tail quantities, then the certified distance floor for z."""

import argparse
import math

from linrec import rigidity as rg


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--j-max", type=int, default=12)
    ap.add_argument("--growth", type=int, default=4)
    args = ap.parse_args()
    op = rg.RigidityOperator.build(rg.RigidityConfig(j_max=args.j_max, growth_factor=args.growth))
    print("k   log10 m_k   ||w_k||   c_k")
    for k in range(3, op.cfg.j_max + 1):
        print(f"{k:<3d} {math.log10(op.m(k)):9.2f}   {op.w_norm(k):6.3f}   {op.c(k):.3e}")
    fr = rg.nonrecurrence_floor(op, op.z)
    print(f"\nfloor over n <= m_{op.cfg.j_max - 1} (~1e{math.log10(fr.horizon):.0f}): "
          f"{fr.floor:.6f}  (1/(K pi) = {fr.target:.6f})")
    print(f"enumerated n <= {fr.enumerated_upto}: {fr.enumerated_min:.6f}")
    for k, lo, hi, f in fr.bands:
        print(f"  band k={k:<3d} n in [{lo:.3g}, {hi:.3g}]  floor {f:.6f}")


if __name__ == "__main__":
    main()
