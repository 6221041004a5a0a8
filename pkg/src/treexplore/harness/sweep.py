"""Grid sweeps producing deterministic CSV summaries.

A sweep spec (JSON) lists explorers, a parameter grid, modes, and round
caps; one row comes out per cell in a fixed nesting order (grid, then
mode, then cap, then explorer). Cells are fully independent of each
other, which keeps the row set reproducible regardless of how they are
scheduled; this implementation runs them sequentially. Cell failures are
recorded in the trailing error column and never abort the sweep.
"""

from __future__ import annotations

import csv
import io
import json
import warnings
from fractions import Fraction
from pathlib import Path

from ..adversary import AdversaryParams
from ..errors import TreexploreError
from ..offline import euler_schedule, trivial_lb
from ..tree import decode_tree
from .runner import run_adversary_game, run_fixed_game
from .verify import verify_transcript

CSV_COLUMNS = [
    "explorer",
    "revealer",
    "mode",
    "n",
    "L",
    "m",
    "k",
    "finished",
    "final_round",
    "height",
    "vertices",
    "trivial_lb",
    "euler_ub",
    "ratio_lb_num",
    "ratio_lb_den",
    "claims_passed",
    "claims_failed",
    "error",
]


def _explorer_entries(spec: dict) -> list[tuple[str, object]]:
    entries = []
    for e in spec.get("explorers", []):
        if isinstance(e, str):
            entries.append((e, None))
        else:
            entries.append((e["name"], e.get("k")))
    return entries


def _resolve_k(k_setting, grid_entry: dict) -> int:
    if k_setting is None:
        return grid_entry["k"]
    if k_setting == "n":
        return grid_entry["n"]
    return int(k_setting)


def run_sweep(spec: dict, base_dir: Path | None = None) -> str:
    """Execute all cells and return the CSV text (LF line endings)."""
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    revealer = spec.get("revealer", "lemma")
    caps = spec.get("caps") or [spec.get("cap")]
    view = spec.get("view", "game")
    explorers = _explorer_entries(spec)
    if revealer == "lemma":
        for grid_entry in spec.get("grid", []):
            for mode in spec.get("modes", ["repaired"]):
                for cap in caps:
                    for name, k_setting in explorers:
                        writer.writerow(
                            _lemma_cell(grid_entry, mode, cap, name, k_setting, view)
                        )
    elif revealer == "fixed":
        for tree_path in spec.get("trees", []):
            path = Path(tree_path)
            if base_dir is not None and not path.is_absolute():
                path = base_dir / path
            for k in spec.get("k_values", [1]):
                for cap in caps:
                    for name, _ in explorers:
                        writer.writerow(_fixed_cell(path, k, cap, name, view))
    else:
        raise TreexploreError(f"unknown revealer {revealer!r} in sweep spec")
    return out.getvalue()


def _lemma_cell(grid_entry: dict, mode: str, cap, name: str, k_setting, view: str) -> list:
    n, L, m = grid_entry.get("n"), grid_entry.get("L"), grid_entry.get("m")
    row_base = [name, "lemma", mode, n, L, m]
    try:
        k = _resolve_k(k_setting, grid_entry)
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            params = AdversaryParams.derive(n=n, L=L, m=m, k=k, mode=mode)
        transcript = run_adversary_game(params, name, cap=cap, view_mode=view)
        report = verify_transcript(transcript)
        tree = transcript.final_state.tree
        stats = tree.stats()
        lb = trivial_lb(stats.n, stats.height, k)
        ub = euler_schedule(tree, k).rounds
        finished = transcript.outcome.finished
        final_round = transcript.outcome.final_round
        if finished and ub > 0:
            ratio = Fraction(final_round, ub)
            ratio_num, ratio_den = ratio.numerator, ratio.denominator
        else:
            ratio_num = ratio_den = ""
        return row_base + [
            k,
            str(finished).lower(),
            final_round,
            stats.height,
            stats.n,
            lb,
            ub,
            ratio_num,
            ratio_den,
            report.claims_passed,
            report.claims_failed,
            "",
        ]
    except TreexploreError as exc:
        return row_base + [grid_entry.get("k"), "", "", "", "", "", "", "", "", "", "", str(exc)]


def _fixed_cell(path: Path, k: int, cap, name: str, view: str) -> list:
    try:
        tree = decode_tree(path.read_bytes())
        stats = tree.stats()
        row_base = [name, "fixed", "", stats.n, "", ""]
        transcript = run_fixed_game(tree, name, k, cap=cap, view_mode=view)
        lb = trivial_lb(stats.n, stats.height, k)
        ub = euler_schedule(tree, k).rounds
        finished = transcript.outcome.finished
        final_round = transcript.outcome.final_round
        if finished and ub > 0:
            ratio = Fraction(final_round, ub)
            ratio_num, ratio_den = ratio.numerator, ratio.denominator
        else:
            ratio_num = ratio_den = ""
        return row_base + [
            k,
            str(finished).lower(),
            final_round,
            stats.height,
            stats.n,
            lb,
            ub,
            ratio_num,
            ratio_den,
            "",
            "",
            "",
        ]
    except (TreexploreError, OSError) as exc:
        return [name, "fixed", "", "", "", "", k, "", "", "", "", "", "", "", "", "", "", str(exc)]


def load_sweep_spec(path: Path) -> dict:
    with open(path, "rb") as fh:
        return json.load(fh)
