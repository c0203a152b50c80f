"""Static figures for sweep results, written to image files.

The layout follows the sweep: a grid becomes an entropy surface, the
``fixed-b`` preset one curve per value of ``b``, and ``families`` the two
one-parameter curves against ``b``.
"""

from __future__ import annotations

from fractions import Fraction
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

from .explorer import LOG_KAPPA, LOG_PHI, SweepResult  # noqa: E402

__all__ = ["plot_sweep", "plot_surface", "plot_fixed_b", "plot_families"]


def _bounds(ax, horizontal: bool = True) -> None:
    draw = ax.axhline if horizontal else ax.axvline
    draw(LOG_KAPPA, color="0.6", lw=0.8, ls=":", label="log kappa")
    draw(LOG_PHI, color="0.6", lw=0.8, ls="--", label="log phi")


def plot_surface(result: SweepResult, path) -> Path:
    recs = result.records
    fig = plt.figure(figsize=(7, 5.5))
    ax = fig.add_subplot(projection="3d")
    if recs:
        sc = ax.scatter([float(r.a) for r in recs], [float(r.b) for r in recs],
                        [r.entropy for r in recs], c=[r.entropy for r in recs], cmap="viridis", s=8)
        fig.colorbar(sc, ax=ax, shrink=0.6, label="entropy")
    ax.set_xlabel("a")
    ax.set_ylabel("b")
    ax.set_zlabel("entropy")
    return _save(fig, path)


def plot_fixed_b(result: SweepResult, path) -> Path:
    fig, ax = plt.subplots(figsize=(7, 4.5))
    by_b: dict[Fraction, list] = {}
    for r in result.records:
        by_b.setdefault(r.b, []).append(r)
    for b, rs in sorted(by_b.items()):
        rs.sort(key=lambda r: r.a)
        ax.plot([float(r.a) for r in rs], [r.entropy for r in rs], marker=".", ms=3, label=f"b = {b}")
        ax.axvline(float(-1 / (b + 1)), color="0.85", lw=0.6)
    _bounds(ax)
    ax.set_xlabel("a")
    ax.set_ylabel("entropy")
    ax.legend(fontsize=8)
    return _save(fig, path)


def plot_families(result: SweepResult, path) -> Path:
    table = result.lookup()
    bs = sorted({b for (a, b) in table})
    diag = [(b, table[(b - 1, b)].entropy) for b in bs if (b - 1, b) in table]
    left = [(b, table[(Fraction(-1), b)].entropy) for b in bs if (Fraction(-1), b) in table]
    fig, ax = plt.subplots(figsize=(7, 4.5))
    for pts, label in ((diag, "(b-1, b)"), (left, "(-1, b)")):
        if pts:
            ax.plot([float(b) for b, _ in pts], [h for _, h in pts], marker=".", ms=3, label=label)
    _bounds(ax)
    ax.set_xlabel("b")
    ax.set_ylabel("entropy")
    ax.legend(fontsize=8)
    return _save(fig, path)


def plot_sweep(result: SweepResult, path) -> Path:
    kind = {"fixed-b": plot_fixed_b, "families": plot_families}.get(result.spec.name, plot_surface)
    return kind(result, path)


def _save(fig, path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    # fixed metadata keeps repeated renders byte-identical
    fig.savefig(path, dpi=110, bbox_inches="tight", metadata={"Software": None} if path.suffix == ".png" else None)
    plt.close(fig)
    return path
