"""Figures for suite reports (matplotlib, Agg backend, imported lazily)."""

from __future__ import annotations

from pathlib import Path


def render(plot: dict, path) -> Path:
    """
    Draw one figure described by ``plot`` and save it to ``path``.

    ``plot["kind"]`` is ``"lines"`` (``x`` plus named ``series``), ``"scatter"``
    (``x``, ``y``) or ``"bars"`` (``labels``, ``values``).
    """
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, ax = plt.subplots(figsize=(6.4, 4.0))
    kind = plot["kind"]
    if kind == "lines":
        for name, ys in plot["series"].items():
            ax.plot(plot["x"], ys, marker="." if len(ys) < 40 else None, label=name)
        if len(plot["series"]) > 1:
            ax.legend(fontsize="small")
    elif kind == "scatter":
        ax.scatter(plot["x"], plot["y"], s=6, alpha=0.6)
    elif kind == "bars":
        ax.bar(range(len(plot["values"])), plot["values"])
        ax.set_xticks(range(len(plot["labels"])), plot["labels"], rotation=30, ha="right", fontsize="small")
    else:
        plt.close(fig)
        raise ValueError(f"unknown plot kind {kind!r}")
    if plot.get("logx"):
        ax.set_xscale("log")
    if plot.get("logy"):
        ax.set_yscale("log")
    ax.set_title(plot.get("title", ""))
    ax.set_xlabel(plot.get("xlabel", ""))
    ax.set_ylabel(plot.get("ylabel", ""))
    fig.tight_layout()
    path = Path(path)
    # fixed metadata keeps the file stable across runs
    fig.savefig(path, dpi=100, metadata={"Software": None})
    plt.close(fig)
    return path
