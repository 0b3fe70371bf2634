"""Report rendering: delimited Betti data and matplotlib figures per run."""

from __future__ import annotations

import csv
import os

from .cli import results_to_json


def _collect_betti(results):
    """(query_index, query, source_key, betti rows) for every table in the payloads."""
    out = []
    for idx, r in enumerate(results):
        if r.get("status") != "ok":
            continue
        pay = r.get("payload", {})
        found = []
        if "betti" in pay:
            found.append(("resolve", pay["betti"]))
        for key in ("module", "j2", "coker"):
            if key in pay and isinstance(pay[key], dict) and "betti" in pay[key]:
                found.append((key, pay[key]["betti"]))
        if "theta" in pay and isinstance(pay["theta"], dict):
            ck = pay["theta"].get("coker", {})
            if "betti" in ck:
                found.append(("theta.coker", ck["betti"]))
        for key, table in found:
            out.append((idx, r["query"], key, table))
    return out


def write_report(directory: str, results) -> None:
    os.makedirs(directory, exist_ok=True)
    with open(os.path.join(directory, "results.json"), "w", encoding="utf-8") as fh:
        fh.write(results_to_json(results))

    tables = _collect_betti(results)
    with open(os.path.join(directory, "betti.csv"), "w", encoding="utf-8", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["query_index", "query", "source", "homological_degree", "internal_degree", "rank"])
        for idx, query, key, table in tables:
            for (h, d, rank) in table:
                w.writerow([idx, query, key, h, d, rank])

    with open(os.path.join(directory, "summary.csv"), "w", encoding="utf-8", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["query_index", "query", "status", "value"])
        for idx, r in enumerate(results):
            val = ""
            if r["status"] == "ok":
                pay = r.get("payload", {})
                for k in ("value", "is_rbm", "rbm", "zero"):
                    if k in pay:
                        val = str(pay[k]).lower()
                        break
            w.writerow([idx, r["query"], r.get("status"), val])

    _figures(directory, tables)


def _figures(directory: str, tables) -> None:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    for idx, query, key, table in tables:
        if not table:
            continue
        hs = sorted({t[0] for t in table})
        ds = sorted({t[1] for t in table})
        grid = [[0 for _ in hs] for _ in ds]
        for (h, d, rank) in table:
            grid[ds.index(d)][hs.index(h)] = rank
        fig, axis = plt.subplots(figsize=(2.4 + 0.5 * len(hs), 1.8 + 0.4 * len(ds)))
        im = axis.imshow(grid, cmap="Blues", aspect="auto")
        axis.set_xticks(range(len(hs)), [str(h) for h in hs])
        axis.set_yticks(range(len(ds)), [str(d) for d in ds])
        axis.set_xlabel("homological degree")
        axis.set_ylabel("internal degree")
        axis.set_title(f"{query} [{key}]", fontsize=9)
        for i in range(len(ds)):
            for j in range(len(hs)):
                if grid[i][j]:
                    axis.text(j, i, str(grid[i][j]), ha="center", va="center", fontsize=8)
        fig.colorbar(im, ax=axis, shrink=0.8)
        fig.tight_layout()
        safe = "".join(c if c.isalnum() else "_" for c in query)[:40]
        fig.savefig(os.path.join(directory, f"betti_{idx:03d}_{safe}_{key.replace('.', '_')}.png"), dpi=110)
        plt.close(fig)
