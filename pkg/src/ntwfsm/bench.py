"""Scaling benchmark for the alignment search.

Aligns r-fold repetitions of a word pair for r = 1..rmax and reports, per r:
the repeated lengths, the median wall time, the measured time ratio to r=1
(column B), the quadratic estimate r^2 (column A), and the worst-case
estimate r^2 * (1 + 2*log r / log(len(a)*len(b))) (column C).  With the
alternate-heap flag on, column D adds the pairing-heap/binary-heap time
factor.  Absolute times are hardware-bound; only the ratios are comparable
across machines.
"""

from __future__ import annotations

import math
import statistics
import time
from dataclasses import dataclass

from .align import AlignerSpec, build_aligner
from .search import PairingHeap, best_transduction


@dataclass(frozen=True)
class BenchRow:
    r: int
    len_a: int
    len_b: int
    millis: float
    quadratic: float        # column A
    measured_ratio: float   # column B
    worst_case: float       # column C
    alt_heap_factor: float | None = None  # column D


@dataclass(frozen=True)
class BenchReport:
    pair: tuple
    trials: int
    rows: tuple


def quadratic_ratio(r: int) -> float:
    return float(r * r)


def worst_case_ratio(r: int, base_cells: int) -> float:
    """r^2 * (1 + 2*log r / log(base_cells)); equals 1 at r=1."""
    return r * r * (1.0 + 2.0 * math.log(r) / math.log(base_cells))


def _median_time(machine, pair, trials):
    times = []
    for _ in range(trials):
        started = time.perf_counter()
        best_transduction(machine, pair, (1, 2))
        times.append(time.perf_counter() - started)
    return statistics.median(times)


def run_bench(a="gemacht", b="machen", rmax=8, trials=5, alt_heap=False):
    machine = build_aligner(AlignerSpec())
    base_cells = len(a) * len(b)
    best_transduction(machine, (a, b), (1, 2))  # warm-up
    rows = []
    base = None
    for r in range(1, rmax + 1):
        pair = (a * r, b * r)
        t = _median_time(machine, pair, trials)
        if base is None:
            base = t
        alt_factor = None
        if alt_heap:
            alt_times = []
            for _ in range(trials):
                started = time.perf_counter()
                best_transduction(machine, pair, (1, 2), heap_factory=PairingHeap)
                alt_times.append(time.perf_counter() - started)
            alt_factor = statistics.median(alt_times) / t
        rows.append(
            BenchRow(
                r=r,
                len_a=len(pair[0]),
                len_b=len(pair[1]),
                millis=t * 1000.0,
                quadratic=quadratic_ratio(r),
                measured_ratio=t / base,
                worst_case=worst_case_ratio(r, base_cells),
                alt_heap_factor=alt_factor,
            )
        )
    return BenchReport((a, b), trials, tuple(rows))


def format_text(report: BenchReport) -> str:
    with_alt = report.rows and report.rows[0].alt_heap_factor is not None
    header = f"{'r':>3} {'len1':>5} {'len2':>5} {'ms':>10} {'A':>8} {'B':>8} {'C':>8}"
    if with_alt:
        header += f" {'D':>7}"
    lines = [
        f"pair {report.pair[0]!r}:{report.pair[1]!r}, median of {report.trials} trials",
        header,
    ]
    for row in report.rows:
        line = (
            f"{row.r:>3} {row.len_a:>5} {row.len_b:>5} {row.millis:>10.3f} "
            f"{row.quadratic:>8.1f} {row.measured_ratio:>8.2f} {row.worst_case:>8.2f}"
        )
        if with_alt:
            line += f" {row.alt_heap_factor:>7.3f}"
        lines.append(line)
    return "\n".join(lines) + "\n"


def format_csv(report: BenchReport) -> str:
    with_alt = report.rows and report.rows[0].alt_heap_factor is not None
    header = "r,len1,len2,ms,A,B,C" + (",D" if with_alt else "")
    lines = [header]
    for row in report.rows:
        fields = [
            str(row.r),
            str(row.len_a),
            str(row.len_b),
            f"{row.millis:.6f}",
            f"{row.quadratic:.6f}",
            f"{row.measured_ratio:.6f}",
            f"{row.worst_case:.6f}",
        ]
        if with_alt:
            fields.append(f"{row.alt_heap_factor:.6f}")
        lines.append(",".join(fields))
    return "\n".join(lines) + "\n"


def save_plot(report: BenchReport, path):
    """Render the ratio columns against r to an image file."""
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    rs = [row.r for row in report.rows]
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.plot(rs, [row.quadratic for row in report.rows], "o--", label="A: r²")
    ax.plot(rs, [row.worst_case for row in report.rows], "s--", label="C: worst case")
    ax.plot(rs, [row.measured_ratio for row in report.rows], "d-", label="B: measured")
    if report.rows and report.rows[0].alt_heap_factor is not None:
        ax.plot(
            rs,
            [row.alt_heap_factor for row in report.rows],
            "^-",
            label="D: alt-heap factor",
        )
    ax.set_xlabel("repetition factor r")
    ax.set_ylabel("time ratio to r=1")
    ax.set_title(f"alignment scaling, pair {report.pair[0]}:{report.pair[1]}")
    ax.legend()
    ax.grid(True, alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
