"""Benchmark drivers that write delimited data plus rendered figures.

Each driver emits a CSV of raw rows and a PNG rendering next to it, and
returns the paths written.  All randomness is seeded for reproducible CI.
"""

from __future__ import annotations

import csv
import os

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np
import scipy.linalg

from . import spinrep
from .approx import PlanarRotation, Su2SearchEngine, approx_synthesize, map_word, target_su2
from .somat import GateKind, GeneratorId
from .targets import random_haar_so


def _write_csv(path: str, header: list[str], rows: list[tuple]) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        writer.writerows(rows)


def _perturbed_pair(n: int, rng: np.random.Generator, scale: float) -> tuple:
    q = random_haar_so(n, int(rng.integers(0, 2**31)))
    g = rng.standard_normal((2 * n, 2 * n)) * scale
    q_eps = q @ scipy.linalg.expm(g - g.T)
    return q, q_eps


def theorem2_report(
    out_dir: str,
    sizes: tuple[int, ...] = (2, 3, 4, 5, 6),
    samples: int = 200,
    seed: int = 0,
) -> dict:
    """Spin-representation error versus the (pi/2)*n*eps_so bound."""
    os.makedirs(out_dir, exist_ok=True)
    rng = np.random.default_rng(seed)
    rows = []
    violations = 0
    for n in sizes:
        for _ in range(samples):
            scale = 10.0 ** rng.uniform(-4, -0.5)
            q, q_eps = _perturbed_pair(n, rng, scale)
            rec = spinrep.check_theorem2(q, q_eps)
            rows.append((n, rec["eps_so"], rec["eps_spin"], rec["bound"]))
            if not rec["holds"]:
                violations += 1
    csv_path = os.path.join(out_dir, "theorem2.csv")
    _write_csv(csv_path, ["n", "eps_so", "eps_spin", "bound"], rows)
    fig, ax = plt.subplots(figsize=(5, 4))
    for n in sizes:
        pts = [(r[3], r[2]) for r in rows if r[0] == n]
        ax.loglog([p[0] for p in pts], [p[1] for p in pts], ".", ms=3, label=f"n={n}")
    lims = ax.get_xlim()
    ax.loglog(lims, lims, "k--", lw=1, label="bound")
    ax.set_xlabel(r"$(\pi/2)\,n\,\varepsilon_{SO}$")
    ax.set_ylabel(r"$\varepsilon_{spin}$")
    ax.legend(fontsize=7)
    fig.tight_layout()
    png_path = os.path.join(out_dir, "theorem2.png")
    fig.savefig(png_path, dpi=150)
    plt.close(fig)
    return {"csv": csv_path, "png": png_path, "rows": len(rows), "violations": violations}


def ledger_report(
    out_dir: str,
    sizes: tuple[int, ...] = (2, 3, 4, 5),
    samples: int = 8,
    eps_per_rotation: float = 0.05,
    seed: int = 0,
    engine: Su2SearchEngine | None = None,
) -> dict:
    """Local-versus-global error accumulation ledger for random targets."""
    os.makedirs(out_dir, exist_ok=True)
    if engine is None:
        engine = Su2SearchEngine()
    rows = []
    violations = 0
    idx = 0
    for n in sizes:
        for _ in range(samples):
            q = random_haar_so(n, seed * 7919 + idx)
            idx += 1
            m = n * (2 * n - 1)
            res = approx_synthesize(q, eps_per_rotation * m, engine=engine)
            led = res.ledger
            rows.append(
                (
                    led["n"],
                    led["m"],
                    led["eps_budget"],
                    led["eps_loc"],
                    led["eps_glob"],
                    led["rel_gap"],
                )
            )
            if led["eps_glob"] is not None and led["eps_glob"] > led["eps_loc"]:
                violations += 1
    csv_path = os.path.join(out_dir, "error_ledger.csv")
    _write_csv(
        csv_path, ["n", "m", "eps_budget", "eps_loc", "eps_glob", "rel_gap"], rows
    )
    fig, ax = plt.subplots(figsize=(5, 4))
    for n in sizes:
        pts = [(r[3], r[4]) for r in rows if r[0] == n and r[4] is not None]
        ax.plot([p[0] for p in pts], [p[1] for p in pts], "o", ms=4, label=f"n={n}")
    lims = ax.get_xlim()
    ax.plot(lims, lims, "k--", lw=1, label="subadditivity bound")
    ax.set_xlabel(r"$\varepsilon_{loc}$")
    ax.set_ylabel(r"$\varepsilon_{glob}$")
    ax.legend(fontsize=7)
    fig.tight_layout()
    png_path = os.path.join(out_dir, "error_ledger.png")
    fig.savefig(png_path, dpi=150)
    plt.close(fig)
    return {"csv": csv_path, "png": png_path, "rows": len(rows), "violations": violations}


def entanglement_report(
    out_dir: str,
    eps_targets: tuple[float, ...] = (1e-1, 3e-2, 1e-2),
    angles: int = 64,
    engine: Su2SearchEngine | None = None,
) -> dict:
    """Residual operator entanglement of compiled two-qubit z-rotations."""
    os.makedirs(out_dir, exist_ok=True)
    if engine is None:
        engine = Su2SearchEngine()
    rows = []
    violations = 0
    thetas = np.linspace(0, 2 * np.pi, angles, endpoint=False)
    for eps in eps_targets:
        for theta in thetas:
            rot = PlanarRotation(1, float(theta))
            word = engine.search(target_su2(rot), eps)
            circ = map_word(word, rot, 2)
            u_c = spinrep.circuit_unitary(2, circ)
            u_t = spinrep.rz_unitary(2, 1, float(theta))
            e = spinrep.phase_aligned_dist(u_c, u_t)
            ent = spinrep.operator_entanglement(u_c)
            bound = 1.0 - (1.0 - e**2 / 2.0) ** 4
            rows.append((float(theta), eps, e, ent, bound))
            if ent > bound + 1e-12:
                violations += 1
    csv_path = os.path.join(out_dir, "entanglement.csv")
    _write_csv(csv_path, ["theta", "eps_target", "eps_measured", "ent", "bound"], rows)
    fig, ax = plt.subplots(figsize=(5, 4))
    es = np.array([r[2] for r in rows])
    ents = np.array([r[3] for r in rows])
    keep = (ents > 0) & (es > 0)
    grid = np.logspace(np.log10(max(es.min(), 1e-9)), np.log10(es.max() + 1e-9), 50)
    if keep.any():
        ax.loglog(es[keep], ents[keep], ".", ms=4, label="compiled")
        ax.loglog(grid, 1 - (1 - grid**2 / 2) ** 4, "k--", lw=1, label="bound")
    else:  # degenerate sweep (every compilation exact); keep linear axes
        ax.plot(grid, 1 - (1 - grid**2 / 2) ** 4, "k--", lw=1, label="bound")
    ax.axhline(3 / 4, color="g", ls=":", lw=1, label="max two-qubit")
    ax.set_xlabel(r"measured $\varepsilon$")
    ax.set_ylabel(r"$E(U_\varepsilon)$")
    ax.legend(fontsize=7)
    fig.tight_layout()
    png_path = os.path.join(out_dir, "entanglement.png")
    fig.savefig(png_path, dpi=150)
    plt.close(fig)
    return {"csv": csv_path, "png": png_path, "rows": len(rows), "violations": violations}


def magic_report(
    out_dir: str,
    sizes: tuple[int, ...] = (2, 3, 4),
    lengths: tuple[int, ...] = (2, 4, 8, 16, 32),
    samples: int = 50,
    seed: int = 0,
) -> dict:
    """Stabilizer entropy of random discrete-gate circuits on |0...0>.

    Raw values only; no external reference constants are reported.
    """
    import random as pyrandom

    os.makedirs(out_dir, exist_ok=True)
    rng = pyrandom.Random(seed)
    rows = []
    for n in sizes:
        kinds = [GateKind.T, GateKind.TINV, GateKind.S, GateKind.SINV]
        bonds = [GateKind.R, GateKind.RINV] if n > 1 else []
        for ell in lengths:
            values = []
            for _ in range(samples):
                gates = []
                for _ in range(ell):
                    kind = rng.choice(kinds + bonds)
                    hi = n if kind in kinds else n - 1
                    gates.append(GeneratorId(kind, rng.randint(1, hi)))
                u = spinrep.circuit_unitary(n, gates)
                state = u[:, 0]
                values.append(spinrep.stabilizer_entropy(state))
            arr = np.array(values)
            rows.append((n, ell, float(arr.mean()), float(arr.std())))
    csv_path = os.path.join(out_dir, "magic.csv")
    _write_csv(csv_path, ["n", "num_gates", "s_mean", "s_std"], rows)
    fig, ax = plt.subplots(figsize=(5, 4))
    for n in sizes:
        pts = [(r[1], r[2], r[3]) for r in rows if r[0] == n]
        ax.errorbar(
            [p[0] for p in pts],
            [p[1] for p in pts],
            yerr=[p[2] for p in pts],
            marker="o",
            ms=4,
            label=f"n={n}",
        )
    ax.set_xscale("log", base=2)
    ax.set_xlabel("circuit gates")
    ax.set_ylabel("stabilizer entropy")
    ax.legend(fontsize=7)
    fig.tight_layout()
    png_path = os.path.join(out_dir, "magic.png")
    fig.savefig(png_path, dpi=150)
    plt.close(fig)
    return {"csv": csv_path, "png": png_path, "rows": len(rows), "violations": 0}
