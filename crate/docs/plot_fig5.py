"""Plot ROC CSVs written by `qiradar fig5` (and optional MC estimates).

    python docs/plot_fig5.py fig5.csv [fig5_qcn_mc.csv ...] -o fig5.png
"""
import argparse

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import pandas as pd


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("curves")
    ap.add_argument("estimates", nargs="*")
    ap.add_argument("-o", "--out", default="fig5.png")
    args = ap.parse_args()

    fig, ax = plt.subplots(figsize=(6, 4.5))
    df = pd.read_csv(args.curves)
    for (radar, method), g in df.groupby(["radar", "method"], sort=False):
        ax.plot(g["pf"], 1 - g["pd"], label=f"{radar} ({method})")
    for path in args.estimates:
        e = pd.read_csv(path)
        pm = 1 - e["pd"]
        err = [pm - (1 - e["ci_high"]), (1 - e["ci_low"]) - pm]
        ax.errorbar(e["pf"], pm, yerr=err, fmt="o", ms=3, capsize=2, label=path)
    ax.set_xscale("log")
    ax.set_yscale("log")
    ax.set_xlabel("P_F")
    ax.set_ylabel("P_M")
    ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(args.out, dpi=150)


if __name__ == "__main__":
    main()
