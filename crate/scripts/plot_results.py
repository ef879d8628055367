#!/usr/bin/env python3
"""Render qbias CSV artifacts with matplotlib.

Usage: plot_results.py <file.csv> [more.csv ...]

The plot type is inferred from the CSV header; output is written as a PNG
next to each input file.
"""

import csv
import sys
from collections import defaultdict
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt


def read_rows(path):
    with open(path, newline="") as f:
        return list(csv.DictReader(f))


def plot_encode_bench(rows, out):
    by_encoding = defaultdict(lambda: defaultdict(list))
    for row in rows:
        by_encoding[row["encoding"]][int(row["epoch"])].append(float(row["test_acc"]))
    fig, ax = plt.subplots(figsize=(7, 4.5))
    for encoding, per_epoch in sorted(by_encoding.items()):
        epochs = sorted(per_epoch)
        means = [sum(per_epoch[e]) / len(per_epoch[e]) for e in epochs]
        ax.plot(epochs, means, marker="o", markersize=3, label=encoding)
    ax.set_xlabel("epoch")
    ax.set_ylabel("test accuracy (mean over seeds)")
    ax.set_ylim(0.0, 1.05)
    ax.legend()
    ax.grid(alpha=0.3)
    fig.tight_layout()
    fig.savefig(out, dpi=150)


def plot_readout(rows, out):
    states = sorted({r["state"] for r in rows})
    strategies = sorted({r["strategy"] for r in rows})
    width = 0.8 / len(strategies)
    fig, ax = plt.subplots(figsize=(6, 4))
    for k, strategy in enumerate(strategies):
        xs = [i + k * width for i in range(len(states))]
        ys = [
            float(r["fidelity"])
            for state in states
            for r in rows
            if r["state"] == state and r["strategy"] == strategy
        ]
        ax.bar(xs, ys, width=width, label=strategy)
    ax.set_xticks([i + 0.4 - width / 2 for i in range(len(states))])
    ax.set_xticklabels(states)
    ax.set_ylabel("fidelity")
    ax.set_ylim(0, 1.05)
    ax.legend()
    fig.tight_layout()
    fig.savefig(out, dpi=150)


def plot_sampling(rows, out):
    shots = [int(r["shots"]) for r in rows]
    stds = [float(r["std_estimate"]) for r in rows]
    predicted = [(1.0 / s) ** 0.5 for s in shots]
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.loglog(shots, stds, "o-", label="measured std")
    ax.loglog(shots, predicted, "--", label="sqrt(1/S)")
    ax.set_xlabel("shots")
    ax.set_ylabel("std of <Z> estimate")
    ax.legend()
    ax.grid(alpha=0.3, which="both")
    fig.tight_layout()
    fig.savefig(out, dpi=150)


def plot_kernel(rows, out):
    ns = [int(r["n_qubits"]) for r in rows]
    offdiag = [float(r["mean_offdiag"]) for r in rows]
    lam = [float(r["lambda_max"]) for r in rows]
    predicted = [(0.5 + 2.0 / 3.141592653589793**2) ** n for n in ns]
    fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(9, 4))
    ax1.semilogy(ns, offdiag, "o-", label="measured")
    ax1.semilogy(ns, predicted, "--", label="(1/2 + 2/pi^2)^n")
    ax1.set_xlabel("qubits")
    ax1.set_ylabel("mean off-diagonal kernel value")
    ax1.legend()
    ax1.grid(alpha=0.3, which="both")
    ax2.plot(ns, lam, "s-")
    ax2.set_xlabel("qubits")
    ax2.set_ylabel("dominant eigenvalue")
    ax2.grid(alpha=0.3)
    fig.tight_layout()
    fig.savefig(out, dpi=150)


PLOTTERS = {
    "encoding,epoch,train_loss,train_acc,test_acc,seed": plot_encode_bench,
    "state,strategy,shots,fidelity": plot_readout,
    "shots,mean_estimate,std_estimate,exact": plot_sampling,
    "n_qubits,m,mean_offdiag,lambda_max,seeds": plot_kernel,
}


def main():
    if len(sys.argv) < 2:
        sys.exit(__doc__)
    for arg in sys.argv[1:]:
        path = Path(arg)
        header = path.read_text().splitlines()[0]
        plotter = PLOTTERS.get(header)
        if plotter is None:
            sys.exit(f"{path}: unrecognized header {header!r}")
        out = path.with_suffix(".png")
        plotter(read_rows(path), out)
        print(f"wrote {out}")


if __name__ == "__main__":
    main()
