"""Round-trip latency measurement for the conversion pipeline.

One iteration is the full provider-side hot path for a pinned client:
decode the client's request bytes, convert the value into the merged
internal form, convert it back into the client's view, and encode the
response. The report directory receives the raw samples as CSV and a
latency histogram rendered with matplotlib.
"""

from __future__ import annotations

import csv
import statistics
import time
from dataclasses import dataclass
from pathlib import Path

from . import corpus
from .adl import parse_definition
from .convert import to_client, to_internal
from .internal import derive_internal
from .resolution import ClientDefinition, resolve
from .revisions import history_from_texts
from .values import RecordValue
from .wire import Direction, decode_record, encode_record


@dataclass(frozen=True)
class BenchResult:
    iterations: int
    median_us: float
    p90_us: float
    mean_us: float
    min_us: float
    max_us: float
    total_seconds: float
    samples_path: Path
    histogram_path: Path

    def render(self) -> str:
        return (
            f"{self.iterations} round trips in {self.total_seconds:.2f}s\n"
            f"  median {self.median_us:.1f}us, p90 {self.p90_us:.1f}us, "
            f"mean {self.mean_us:.1f}us, min {self.min_us:.1f}us, max {self.max_us:.1f}us\n"
            f"  samples: {self.samples_path}\n"
            f"  histogram: {self.histogram_path}\n"
        )

    def to_dict(self) -> dict:
        return {
            "iterations": self.iterations,
            "median_us": self.median_us,
            "p90_us": self.p90_us,
            "mean_us": self.mean_us,
            "min_us": self.min_us,
            "max_us": self.max_us,
            "total_seconds": self.total_seconds,
            "samples": str(self.samples_path),
            "histogram": str(self.histogram_path),
        }


def _pipeline():
    """The measured scenario: a first-revision client of the six-step API."""
    history = history_from_texts("customer", corpus.CUSTOMER_HISTORY)
    rep = derive_internal(history, range(1, 7))
    plan = resolve(
        ClientDefinition(parse_definition(corpus.CLIENT_R1_FULL), 1),
        history.revision(1).definition,
    )
    value = RecordValue(
        "Customer",
        {
            "firstName": "Ada",
            "lastName": "Lovelace",
            "gender": 1,
            "address": RecordValue(
                "Address",
                {
                    "street": "Mill Lane",
                    "number": "12",
                    "postalCode": "CB1",
                    "city": "Cambridge",
                },
            ),
        },
    )
    request = encode_record(plan.client_schema, "Customer", value, Direction.REQUEST)
    return rep, plan, request


def _round_trip(rep, plan, request: bytes) -> bytes:
    received = decode_record(plan.client_schema, "Customer", request, Direction.REQUEST)
    internal = to_internal(rep, plan, "Customer", received)
    returned = to_client(rep, plan, "Customer", internal)
    return encode_record(plan.client_schema, "Customer", returned, Direction.RESPONSE)


def run_bench(iterations: int = 10000, report_dir: "Path | str" = "bench-report") -> BenchResult:
    rep, plan, request = _pipeline()
    _round_trip(rep, plan, request)  # warm caches before timing

    samples_us: list[float] = []
    started = time.perf_counter()
    for _ in range(iterations):
        t0 = time.perf_counter_ns()
        _round_trip(rep, plan, request)
        samples_us.append((time.perf_counter_ns() - t0) / 1000.0)
    total_seconds = time.perf_counter() - started

    out_dir = Path(report_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    samples_path = out_dir / "samples.csv"
    with open(samples_path, "w", newline="") as handle:
        writer = csv.writer(handle)
        writer.writerow(["iteration", "microseconds"])
        for i, us in enumerate(samples_us):
            writer.writerow([i, f"{us:.3f}"])

    histogram_path = out_dir / "latency-histogram.png"
    _write_histogram(samples_us, histogram_path)

    ordered = sorted(samples_us)
    return BenchResult(
        iterations=iterations,
        median_us=statistics.median(ordered),
        p90_us=ordered[min(len(ordered) - 1, int(len(ordered) * 0.9))],
        mean_us=statistics.fmean(ordered),
        min_us=ordered[0],
        max_us=ordered[-1],
        total_seconds=total_seconds,
        samples_path=samples_path,
        histogram_path=histogram_path,
    )


def _write_histogram(samples_us: list[float], path: Path) -> None:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, ax = plt.subplots(figsize=(8, 4.5))
    ax.hist(samples_us, bins=60, color="#4878a8", edgecolor="white")
    ax.set_xlabel("round-trip latency (µs)")
    ax.set_ylabel("iterations")
    ax.set_title("decode + convert in + convert out + encode")
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
