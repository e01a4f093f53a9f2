"""Run reports and CSV exports (memberships, traces, histograms)."""

import json
import logging
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple, Union

import numpy as np
import pandas as pd

from ensemble.types import ClusteringResult
from utils.errors import DomainError

logger = logging.getLogger(__name__)

PathLike = Union[str, Path]


@dataclass
class RunReport:
    """Summary of one pipeline or SCA run."""

    detected_k: Optional[int] = None
    k_used: Optional[int] = None
    perron_gap: Optional[float] = None
    eigenvalues: List[float] = field(default_factory=list)
    errors: Optional[int] = None
    member_errors: Optional[Tuple[int, int]] = None
    stop_reason: Optional[str] = None
    iterations: Optional[int] = None
    histogram: List[Dict[str, object]] = field(default_factory=list)
    timings: Dict[str, float] = field(default_factory=dict)

    def to_text(self) -> str:
        """key=value lines; absent fields are omitted."""
        lines = []
        for key, value in asdict(self).items():
            if value is None or value == [] or value == {}:
                continue
            if key == "eigenvalues":
                value = " ".join(f"{v:.6f}" for v in value)
            elif key == "member_errors":
                value = f"{value[0]}-{value[1]}"
            elif key == "timings":
                value = " ".join(f"{stage}:{seconds:.3f}s" for stage, seconds in value.items())
            elif key == "histogram":
                value = "; ".join(f"{entry['count']}x[{entry['partition']}]" for entry in value)
            lines.append(f"{key}={value}")
        return "\n".join(lines)

    def to_json(self) -> str:
        return json.dumps(asdict(self), default=float)

    def write(self, out_dir: PathLike) -> Path:
        out_dir = Path(out_dir)
        out_dir.mkdir(parents=True, exist_ok=True)
        (out_dir / "report.txt").write_text(self.to_text() + "\n", encoding="utf-8")
        path = out_dir / "report.jsonl"
        with path.open("a", encoding="utf-8") as handle:
            handle.write(self.to_json() + "\n")
        return path


def describe_partition(C: ClusteringResult, names: Optional[Sequence[str]] = None) -> str:
    """Clusters as ``{a,b}|{c}``, members named when names are given, else 1-based."""
    parts = []
    for members in C.clusters():
        labels = [names[i] if names else str(i + 1) for i in members]
        parts.append("{" + ",".join(labels) + "}")
    return "|".join(parts)


def write_membership(path: PathLike, C: ClusteringResult, names: Optional[Sequence[str]] = None) -> Path:
    """CSV with one ``index,label`` row per element (1-based index)."""
    frame = pd.DataFrame({"index": np.arange(1, C.n + 1), "label": C.labels})
    if names:
        frame["name"] = list(names)
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    frame.to_csv(path, index=False)
    return path


def write_trace(path: PathLike, trace) -> Path:
    """CSV with one row per iteration: t, x_1..x_n, label_1..label_n."""
    rows = []
    for entry in trace:
        row = {"iteration": entry.t}
        row.update({f"x_{i + 1}": v for i, v in enumerate(entry.x)})
        row.update({f"label_{i + 1}": c for i, c in enumerate(entry.clustering.labels)})
        rows.append(row)
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    pd.DataFrame(rows).to_csv(path, index=False, float_format="%.17g")
    return path


def export_histogram(values, bins: int, path: PathLike) -> pd.DataFrame:
    """
    Bin values and write ``bin_left,bin_right,count`` rows for external plotting.

    Raises:
        DomainError: If values is empty or bins < 1
    """
    values = np.asarray(values, dtype=float).ravel()
    if values.size == 0:
        raise DomainError("Cannot build a histogram of no values")
    if bins < 1:
        raise DomainError(f"bins must be >= 1, got {bins}")
    counts, edges = np.histogram(values, bins=bins)
    frame = pd.DataFrame({"bin_left": edges[:-1], "bin_right": edges[1:], "count": counts})
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    frame.to_csv(path, index=False)
    logger.info(f"✅ Histogram of {values.size} values in {bins} bins written to {path}")
    return frame
