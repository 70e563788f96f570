"""Static SVG figures of a report: the points plus detected lines and circles.

This is the only module that rounds exact values, and only to place ink.
"""

from __future__ import annotations

import math
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402
from matplotlib.patches import Circle as CirclePatch  # noqa: E402

from .numbers import parse_rational  # noqa: E402

__all__ = ["render_report"]


def _xy(pt) -> tuple[float, float]:
    return float(parse_rational(pt[0])), float(parse_rational(pt[1]))


def _collect(report: dict):
    lines, circles = {}, {}
    for sec in report.get("sections", []):
        for br in sec.get("branches", []):
            if br["type"] == "vertical" and not br["lines"]["no_structure"]:
                for line in br["lines"]["lines"]:
                    pts = [_xy(p) for p in line["points"]]
                    lines[(pts[0], pts[-1])] = len(pts)
            elif br["type"] == "torus" and br.get("circle"):
                c = br["circle"]
                key = (tuple(c["center"]), c["radius_sq"])
                circles[key] = (_xy(c["center"]), math.sqrt(float(parse_rational(c["radius_sq"]))), c["hits"])
    return lines, list(circles.values())


def render_report(report: dict, path: str | Path, title: str | None = None) -> Path:
    """Write an SVG of ``report`` to ``path``; deterministic for a given report."""
    path = Path(path)
    pts = [_xy(p) for p in report["points"]]
    lines, circles = _collect(report)
    plt.rcParams["svg.hashsalt"] = "trimotion"
    fig, ax = plt.subplots(figsize=(6, 6))
    for (a, b), size in sorted(lines.items()):
        ax.plot([a[0], b[0]], [a[1], b[1]], color="tab:blue", lw=1, alpha=0.6)
    for center, radius, hits in sorted(circles):
        ax.add_patch(CirclePatch(center, radius, fill=False, color="tab:red", lw=1.2))
    if pts:
        xs, ys = zip(*pts)
        ax.scatter(xs, ys, s=12, color="black", zorder=3)
    ax.set_aspect("equal", adjustable="datalim")
    verdict = report.get("verdict", {}).get("message", "")
    ax.set_title(title or f"n = {report.get('n', len(pts))}: {verdict}", fontsize=9)
    fig.tight_layout()
    fig.savefig(path, format="svg", metadata={"Date": None})
    plt.close(fig)
    return path
