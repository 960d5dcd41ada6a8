#!/usr/bin/env python3
"""Render the CSV artifacts of one scenario directory as PNG figures.

Convenience only; the CSV/JSON data written by `ptkdv run` is the actual
deliverable. Usage:

    python docs/plot_scenario.py ptkdv-out/kdv-soliton-birth
"""

import glob
import json
import os
import sys

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np


def load_csv(path):
    with open(path) as fh:
        header = fh.readline().strip().split(",")
        data = np.loadtxt(fh, delimiter=",")
    return header, data


def plot_snapshots(outdir, manifest):
    files = sorted(glob.glob(os.path.join(outdir, "snapshot_*.csv")))
    if not files:
        return
    fig, ax = plt.subplots(figsize=(8, 4.5))
    for path, t in zip(files, manifest.get("times", [None] * len(files))):
        header, data = load_csv(path)
        u = data[:, 1]
        label = f"T = {t:g}" if t is not None else os.path.basename(path)
        ax.plot(data[:, 0], u, lw=1.0, label=label)
    ax.set_xlabel("x")
    ax.set_ylabel("u (real part)" if "im_u" in header else "u")
    ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(os.path.join(outdir, "snapshots.png"), dpi=150)
    print(f"wrote {os.path.join(outdir, 'snapshots.png')}")


def plot_profiles(outdir):
    files = sorted(glob.glob(os.path.join(outdir, "profile_n*.csv")))
    if not files:
        return
    fig, ax = plt.subplots(figsize=(7, 4))
    for path in files:
        _, data = load_csv(path)
        base = os.path.basename(path).replace(".csv", "")
        ax.plot(data[:, 0], data[:, 1], lw=1.2, label=base.split("_")[-1])
    ax.set_xlabel("z")
    ax.set_ylabel("f(z)")
    ax.set_xlim(-12, 12)
    ax.legend(title="family")
    fig.tight_layout()
    fig.savefig(os.path.join(outdir, "profiles.png"), dpi=150)
    print(f"wrote {os.path.join(outdir, 'profiles.png')}")


def main():
    if len(sys.argv) != 2:
        print(__doc__)
        return 2
    outdir = sys.argv[1]
    manifest_path = os.path.join(outdir, "manifest.json")
    manifest = {}
    if os.path.exists(manifest_path):
        manifest = json.load(open(manifest_path))
    plot_snapshots(outdir, manifest)
    plot_profiles(outdir)
    return 0


if __name__ == "__main__":
    sys.exit(main())
