"""
Figure rendering for tables and verification reports.

Table figures are annotated heatmaps of the coefficient mass of each
entry; verify figures summarize per-section pass/fail counts.  Rendering
is headless (Agg) and writes PNG or PDF next to the delimited output.
"""

from __future__ import annotations

import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt


def render_table_figure(keys, table, path, title=None):
    labels = [k.render() for k in keys]
    n = len(labels)
    mass = [[sum(abs(int(v)) for v in cell.terms.values()) for cell in row]
            for row in table]
    fig, ax = plt.subplots(figsize=(max(4, 1.1 * n), max(3.5, 1.0 * n)))
    im = ax.imshow(mass, cmap="viridis")
    ax.set_xticks(range(n))
    ax.set_yticks(range(n))
    ax.set_xticklabels(labels, rotation=45, ha="right", fontsize=8)
    ax.set_yticklabels(labels, fontsize=8)
    for i in range(n):
        for j in range(n):
            terms = table[i][j].sorted_terms()
            text = "+".join("%s%s" % ("" if v == 1 else "%s*" % v, k.render())
                            for k, v in terms) or "0"
            if len(text) > 18:
                text = text[:17] + "…"
            ax.text(j, i, text, ha="center", va="center", fontsize=6,
                    color="white")
    fig.colorbar(im, ax=ax, shrink=0.8, label="total coefficient mass")
    ax.set_title(title or "structure constants")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path


def render_verify_figure(report, path):
    sections = []
    if "reports" in report:
        for sub in report["reports"]:
            sections.extend(sub["sections"])
    else:
        sections = report["sections"]
    names = [s["name"] for s in sections]
    passed = [s["instances"] - len(s["failures"]) for s in sections]
    failed = [len(s["failures"]) for s in sections]
    fig, ax = plt.subplots(figsize=(8, max(3, 0.35 * len(names))))
    ys = range(len(names))
    ax.barh(ys, passed, color="#2a9d8f", label="pass")
    ax.barh(ys, failed, left=passed, color="#e76f51", label="fail")
    ax.set_yticks(list(ys))
    ax.set_yticklabels(names, fontsize=8)
    ax.invert_yaxis()
    ax.set_xlabel("instances")
    ax.set_title("verification: %s (%s)" % (report["suite"],
                                            "PASS" if report["ok"] else "FAIL"))
    ax.legend(loc="lower right")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path
