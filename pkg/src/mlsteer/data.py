"""Dataset model and CSV ingestion.

Ingestion format: UTF-8, comma-delimited, header row, `.` decimal separator,
all columns except the last numeric, last column the class label. Row numbers
in errors count data rows from 1 (the header is row 0); columns from 1.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .errors import Rejection


@dataclass
class Dataset:
    id: str
    name: str
    features: np.ndarray  # (n, d) float64
    labels: list[str]  # length n
    classes: tuple[str, ...]  # first-appearance order
    positive_class: Optional[str]  # binary case; None for >2 classes
    feature_names: list[str] = field(default_factory=list)

    @property
    def n(self) -> int:
        return self.features.shape[0]

    @property
    def d(self) -> int:
        return self.features.shape[1]

    def class_indices(self) -> np.ndarray:
        """Labels as indices into `classes` (the tie-break order everywhere)."""
        lookup = {c: i for i, c in enumerate(self.classes)}
        return np.array([lookup[y] for y in self.labels], dtype=np.int64)

    def describe(self) -> dict:
        return {
            "id": self.id,
            "name": self.name,
            "n": self.n,
            "d": self.d,
            "classes": list(self.classes),
            "positive_class": self.positive_class,
            "feature_names": list(self.feature_names),
        }


def _reject(message: str, row: Optional[int] = None, column: Optional[int] = None) -> Rejection:
    detail = {}
    if row is not None:
        detail["row"] = row
    if column is not None:
        detail["column"] = column
    return Rejection("ingestion_error", message, detail)


def load_csv(data: bytes, name: str = "dataset", dataset_id: str = "",
             positive_class: Optional[str] = None) -> Dataset:
    """Parse CSV bytes into a Dataset.

    Classes keep first-appearance order. For two classes the positive class
    defaults to the lexicographically larger token unless overridden.
    """
    try:
        text = data.decode("utf-8")
    except UnicodeDecodeError as e:
        raise _reject(f"not valid UTF-8: {e}") from None
    rows = list(csv.reader(io.StringIO(text)))
    rows = [r for r in rows if r]  # tolerate trailing blank lines
    if len(rows) < 3:
        raise _reject("need a header row and at least 2 data rows")
    header = rows[0]
    if len(header) < 2:
        raise _reject("need at least 1 feature column plus the label column")
    d = len(header) - 1
    feature_names = [h.strip() for h in header[:-1]]

    features = np.empty((len(rows) - 1, d), dtype=np.float64)
    labels: list[str] = []
    for i, row in enumerate(rows[1:], start=1):
        if len(row) != d + 1:
            raise _reject(f"expected {d + 1} columns, found {len(row)}", row=i)
        for j, cell in enumerate(row[:-1]):
            cell = cell.strip()
            if cell == "":
                raise _reject("empty feature cell", row=i, column=j + 1)
            try:
                features[i - 1, j] = float(cell)
            except ValueError:
                raise _reject(f"non-numeric feature cell {cell!r}",
                              row=i, column=j + 1) from None
        label = row[-1].strip()
        if label == "":
            raise _reject("empty label cell", row=i, column=d + 1)
        labels.append(label)

    classes: list[str] = []
    for y in labels:
        if y not in classes:
            classes.append(y)
    if len(classes) < 2:
        raise _reject("dataset has a single class; need at least 2")

    if positive_class is not None:
        if positive_class not in classes:
            raise _reject(f"positive class {positive_class!r} not among labels")
        positive = positive_class
    elif len(classes) == 2:
        positive = max(classes)
    else:
        positive = None

    return Dataset(id=dataset_id, name=name, features=features, labels=labels,
                   classes=tuple(classes), positive_class=positive,
                   feature_names=feature_names)


def to_csv_bytes(ds: Dataset) -> bytes:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    names = ds.feature_names or [f"f{j}" for j in range(ds.d)]
    writer.writerow(names + ["label"])
    for i in range(ds.n):
        writer.writerow([repr(float(v)) for v in ds.features[i]] + [ds.labels[i]])
    return buf.getvalue().encode("utf-8")
