#!/usr/bin/env python3
"""Plot the fig3 table written by `mmtrain fig3 --out fig3.csv`."""

import argparse

import matplotlib.pyplot as plt
import pandas as pd

SERIES = [
    ("rho_fq", "FQ", "tab:blue"),
    ("rho_ag_fq", "FQ w/ reuse", "tab:green"),
    ("rho_cs", "CS", "tab:red"),
    ("rho_ag_cs", "CS w/ reuse", "black"),
]


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("csv")
    parser.add_argument("--out", default="fig3.png")
    args = parser.parse_args()

    table = pd.read_csv(args.csv, comment="#")
    fig, ax = plt.subplots(figsize=(6, 4))
    for p_out, style in zip(sorted(table.p_out.unique()), ["-", "--", ":"]):
        rows = table[table.p_out == p_out]
        for column, label, color in SERIES:
            ax.plot(rows.K_G, rows[column], style, color=color, label=f"{label}, p_out={p_out:g}")
    ax.set_xlabel("K_G (UEs per group)")
    ax.set_ylabel("rho (UEs supported)")
    ax.legend(fontsize="small")
    fig.tight_layout()
    fig.savefig(args.out, dpi=150)


if __name__ == "__main__":
    main()
