"""Optional matplotlib renderings of a report.  The JSON report stays canonical;
figures are a view of it and are never read back."""
from __future__ import annotations

from fractions import Fraction
from pathlib import Path


def _as_float(pair) -> float:
    return float(Fraction(pair[0], pair[1]))


def render(report: dict, out_dir) -> list:
    """Write one PNG per eligible check and return the paths written.

    ``compare_all`` checks become a heatmap of the pairwise-equality matrix;
    ``evaluate`` checks become plots of the sampled iterated-limit values.
    """
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    written = []
    for rec in report["checks"]:
        detail = rec.get("detail") or {}
        stem = f"{report['scenario']}-{rec['index']:02d}-{rec['check']}"
        if rec["check"] == "compare_all" and "equal" in detail:
            path = out / f"{stem}.png"
            _heatmap(plt, detail["perms"], detail["equal"], rec["label"], path)
            written.append(path)
        elif rec["check"] == "evaluate" and detail.get("limits"):
            path = out / f"{stem}.png"
            _traces(plt, detail["limits"], rec["label"], path)
            written.append(path)
    return written


def _heatmap(plt, labels, equal, title, path):
    n = len(labels)
    fig, ax = plt.subplots(figsize=(1.2 + 0.5 * n, 1 + 0.5 * n))
    ax.imshow([[1 if v else 0 for v in row] for row in equal], cmap="RdYlGn", vmin=0, vmax=1)
    ax.set_xticks(range(n), labels, rotation=45)
    ax.set_yticks(range(n), labels)
    for i in range(n):
        for j in range(n):
            ax.text(j, i, "=" if equal[i][j] else "x", ha="center", va="center")
    ax.set_title(f"{title}: extension equality")
    fig.tight_layout()
    fig.savefig(path, dpi=100)
    plt.close(fig)


def _traces(plt, limits, title, path):
    fig, axes = plt.subplots(1, len(limits), figsize=(4 * len(limits), 3), squeeze=False)
    for ax, (label, traces) in zip(axes[0], sorted(limits.items())):
        for t in traces:
            xs = [s[0] for s in t["samples"]]
            ys = [_as_float(s[1]) for s in t["samples"]]
            ax.plot(xs, ys, marker="o", label=f"slot {t['slot']}")
        ax.set_title(f"AR^{label}")
        ax.set_xlabel("approximant index")
        handles, names = ax.get_legend_handles_labels()
        uniq = dict(zip(names, handles))
        ax.legend(uniq.values(), uniq.keys(), fontsize=7)
    fig.suptitle(f"{title}: iterated limits")
    fig.tight_layout()
    fig.savefig(path, dpi=100)
    plt.close(fig)
