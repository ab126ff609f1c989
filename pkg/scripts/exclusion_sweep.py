"""Window counts of witness return sets across levels and witness margins."""

import argparse

from linrec import blockshift as bs


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--j-max", type=int, default=8)
    ap.add_argument("--margins", default="1.000001,2,10")
    args = ap.parse_args()
    p = bs.BlockParams.default(j_max=args.j_max)
    margins = [float(m) for m in args.margins.split(",")]
    print("j   m_j   margin     max_count  2m_j   bd_estimate  2/m_j")
    for j in range(1, p.j_max + 1):
        for margin in margins:
            r = bs.rrec_exclusion_report(p, bs.g_witness(p, [j], margin), j)
            print(f"{j:<3d} {r.m_j:<5d} {margin:<10.7g} {r.max_count:<10d} {r.count_bound:<6d} "
                  f"{r.bd_estimate:<12.3e} {r.bd_bound:.3e}")


if __name__ == "__main__":
    main()
