"""CSV ingestion into data matrices (columns = elements) and optional truth labels."""

import logging
import re
from pathlib import Path
from typing import Literal, Optional, Tuple, Union

import numpy as np
import pandas as pd

from ensemble.types import ClusteringResult, DataMatrix
from utils.errors import DataFormatError

logger = logging.getLogger(__name__)

Orientation = Literal["rows-elements", "rows-attributes"]


def _resolve_column(df: pd.DataFrame, label_column: Union[str, int]):
    if isinstance(label_column, int) or str(label_column).lstrip("-").isdigit():
        idx = int(label_column)
        if not -df.shape[1] <= idx < df.shape[1]:
            raise DataFormatError(f"Label column index {idx} out of range", column=str(label_column))
        return df.columns[idx]
    if label_column not in df.columns:
        raise DataFormatError("Label column not found", column=str(label_column))
    return label_column


def labels_to_result(values) -> ClusteringResult:
    """Truth labels of any type as a ClusteringResult with ids in first-appearance order."""
    codes, uniques = pd.factorize(pd.Series(values), sort=False)
    return ClusteringResult(
        labels=codes + 1, k=len(uniques), method="truth",
        notes=[f"{i + 1}={name}" for i, name in enumerate(uniques)],
    )


def load_data(
    path: Union[str, Path],
    orientation: Orientation = "rows-elements",
    label_column: Optional[Union[str, int]] = None,
    header: bool = True,
) -> Tuple[DataMatrix, Optional[ClusteringResult]]:
    """
    Read a numeric CSV.

    Args:
        path: CSV file
        orientation: "rows-elements" when each row is one element (the usual
            CSV layout, transposed on load), "rows-attributes" when each row is
            one attribute
        label_column: Column (name or 0-based index) holding truth labels
        header: Whether the first line names the columns

    Returns:
        (DataMatrix with elements as columns, truth labels or None)

    Raises:
        DataFormatError: On ragged rows, missing or non-numeric cells; the message names the line and column
    """
    path = Path(path)
    first_data_line = 2 if header else 1
    try:
        df = pd.read_csv(path, header=0 if header else None, skipinitialspace=True)
    except pd.errors.ParserError as e:
        match = re.search(r"line (\d+)", str(e))
        raise DataFormatError(f"Ragged row in {path.name}: {e}", row=int(match.group(1)) if match else None)
    except (OSError, pd.errors.EmptyDataError) as e:
        raise DataFormatError(f"Cannot read {path}: {e}")

    truth = None
    if label_column is not None:
        column = _resolve_column(df, label_column)
        truth = labels_to_result(df[column].astype(str).to_numpy())
        df = df.drop(columns=[column])

    numeric = df.apply(pd.to_numeric, errors="coerce")
    bad = numeric.isna()
    if bad.to_numpy().any():
        row, col = np.argwhere(bad.to_numpy())[0]
        cell = df.iat[row, col]
        problem = "Missing value" if pd.isna(cell) else f"Non-numeric value {cell!r}"
        raise DataFormatError(problem, row=int(row) + first_data_line, column=str(df.columns[col]))

    values = numeric.to_numpy(dtype=float)
    names = [str(c) for c in df.columns]
    if orientation == "rows-elements":
        A = DataMatrix(values=values.T, attribute_names=names)
    elif orientation == "rows-attributes":
        A = DataMatrix(values=values, element_names=names)
    else:
        raise DataFormatError(f"Unknown orientation {orientation!r}")

    logger.info(f"✅ Loaded {path.name}: {A.m} attributes x {A.n} elements")
    return A, truth
