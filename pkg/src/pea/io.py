"""CSV ingestion, JSON model persistence and assignment files.

Model files are JSON with a fixed field order and Python's shortest
round-trip float repr, so ``save -> load -> save`` reproduces the bytes and
every float comes back bit-identical.
"""
from __future__ import annotations

import csv
import json
import math
from dataclasses import asdict, dataclass
from pathlib import Path

import numpy as np

from .core import ClusterModel, EllipseParams
from .errors import DataError, ModelFormatError

SCHEMA_VERSION = "1"
MODEL_KINDS = ("pea-fit", "pea-cluster")


def _read_rows(path):
    path = Path(path)
    if not path.is_file():
        raise DataError(f"{path}: no such file")
    with path.open(newline="") as fh:
        rows = [(lineno, row) for lineno, row in enumerate(csv.reader(fh), start=1)]
    # blank lines carry no samples
    return [(lineno, [f.strip() for f in row]) for lineno, row in rows if any(f.strip() for f in row)]


def sniff_header(path) -> bool:
    """Guess whether the first line of a CSV file is a header."""
    with Path(path).open(newline="") as fh:
        sample = fh.read(64 * 1024)
    if not sample.strip():
        return False
    try:
        return csv.Sniffer().has_header(sample)
    except csv.Error:
        return False


def _resolve_column(label_column, header, width, path):
    if label_column is None:
        return None
    if isinstance(label_column, str) and not label_column.lstrip("-").isdigit():
        if header is None or label_column not in header:
            raise DataError(f"{path}: no column named {label_column!r}")
        return header.index(label_column)
    idx = int(label_column)
    if not -width <= idx < width:
        raise DataError(f"{path}: label column {idx} out of range for {width} columns")
    return idx % width


def load_csv(path, has_header: bool = False, label_column=None):
    """Read a comma-separated numeric matrix.

    Parameters
    ----------
    path : path-like
    has_header : bool
        Skip the first non-blank line.
    label_column : int or str, optional
        Column holding labels: a 0-based (possibly negative) index, or a
        header name. It is removed from the matrix and returned as strings.

    Returns
    -------
    X : (n, p) float ndarray
    labels : ndarray of str or None

    Row and column numbers in error messages are 1-based file positions.
    """
    rows = _read_rows(path)
    header = None
    if has_header and rows:
        header = rows[0][1]
        rows = rows[1:]
    if not rows:
        raise DataError(f"{path}: no data rows")
    width = len(rows[0][1])
    col = _resolve_column(label_column, header, width, path)
    values, labels = [], []
    for lineno, row in rows:
        if len(row) != width:
            raise DataError(f"{path}: row {lineno} has {len(row)} fields, expected {width}")
        out = []
        for j, field_ in enumerate(row):
            if j == col:
                labels.append(field_)
                continue
            try:
                v = float(field_)
            except ValueError:
                raise DataError(f"{path}: row {lineno}, column {j + 1}: cannot parse {field_!r}") from None
            if not math.isfinite(v):
                raise DataError(f"{path}: row {lineno}, column {j + 1}: non-finite value {field_!r}")
            out.append(v)
        values.append(out)
    X = np.array(values, dtype=float)
    if X.shape[1] == 0:
        raise DataError(f"{path}: no numeric columns")
    return X, (np.array(labels) if col is not None else None)


def read_labels(path, has_header: bool | None = None, column=-1) -> np.ndarray:
    """Read one column of a CSV file as string labels; header auto-detected when ``None``."""
    if has_header is None:
        has_header = sniff_header(path) if Path(path).is_file() else False
    rows = _read_rows(path)
    header = None
    if has_header and rows:
        header = rows[0][1]
        rows = rows[1:]
    if not rows:
        raise DataError(f"{path}: no data rows")
    width = len(rows[0][1])
    col = _resolve_column(column, header, width, path)
    out = []
    for lineno, row in rows:
        if len(row) != width:
            raise DataError(f"{path}: row {lineno} has {len(row)} fields, expected {width}")
        out.append(row[col])
    return np.array(out)


def write_matrix(dest, X, labels=None, header=True):
    """CSV with columns ``x1..xp`` and, when given, a trailing ``label`` column.

    ``dest`` is a path or an open text stream.
    """
    X = np.asarray(X, dtype=float)
    if hasattr(dest, "write"):
        _write_matrix(dest, X, labels, header)
    else:
        with Path(dest).open("w", newline="") as fh:
            _write_matrix(fh, X, labels, header)


def _write_matrix(fh, X, labels, header):
    writer = csv.writer(fh, lineterminator="\n")
    if header:
        writer.writerow([f"x{j + 1}" for j in range(X.shape[1])] + (["label"] if labels is not None else []))
    for i, row in enumerate(X):
        fields = [repr(float(v)) for v in row]
        if labels is not None:
            fields.append(str(labels[i]))
        writer.writerow(fields)


def write_assignments(path, assignments):
    """One ``row_index,cluster_index`` line per sample, both 1-based, no header."""
    with Path(path).open("w", newline="") as fh:
        for i, c in enumerate(np.asarray(assignments, dtype=np.int64)):
            fh.write(f"{i + 1},{c + 1}\n")


@dataclass
class ModelDocument:
    kind: str
    ellipses: list  # [{"mu": [...], "w": [...]}]
    bounds: dict  # {"lambda": lo, "Lambda": hi}
    objective: float
    iterations: int
    converged: bool
    seed: int
    schema_version: str = SCHEMA_VERSION

    @classmethod
    def from_fit(cls, report, seed: int = 0) -> "ModelDocument":
        p = report.params
        return cls(
            kind="pea-fit",
            ellipses=[{"mu": p.mu.tolist(), "w": p.w.tolist()}],
            bounds={"lambda": p.lambda_lo, "Lambda": p.lambda_hi},
            objective=float(report.objective),
            iterations=int(report.iterations),
            converged=bool(report.converged),
            seed=int(seed),
        )

    @classmethod
    def from_cluster(cls, result, seed: int = 0) -> "ModelDocument":
        m = result.model
        e0 = m.ellipses[0]
        return cls(
            kind="pea-cluster",
            ellipses=[{"mu": e.mu.tolist(), "w": e.w.tolist()} for e in m.ellipses],
            bounds={"lambda": e0.lambda_lo, "Lambda": e0.lambda_hi},
            objective=float(result.objective),
            iterations=int(result.iterations),
            converged=bool(result.converged),
            seed=int(seed),
        )

    def to_ellipses(self) -> list:
        lo, hi = self.bounds["lambda"], self.bounds["Lambda"]
        return [EllipseParams(np.array(e["mu"], dtype=float), np.array(e["w"], dtype=float), lo, hi)
                for e in self.ellipses]

    def to_cluster_model(self, assignments=()) -> ClusterModel:
        return ClusterModel(self.to_ellipses(), np.asarray(assignments, dtype=np.int64))

    def to_json(self) -> str:
        d = asdict(self)
        body = {"schema_version": d.pop("schema_version"), **d}
        return json.dumps(body, indent=2, allow_nan=False) + "\n"


def save_model(path, doc: ModelDocument):
    Path(path).write_text(doc.to_json())


def _require(cond, msg):
    if not cond:
        raise ModelFormatError(msg)


def parse_model(text: str, source="<string>") -> ModelDocument:
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ModelFormatError(f"{source}: not valid JSON ({exc})") from None
    _require(isinstance(raw, dict), f"{source}: top level must be an object")
    version = raw.get("schema_version")
    _require(version == SCHEMA_VERSION,
             f"{source}: unsupported schema_version {version!r} (expected {SCHEMA_VERSION!r})")
    required = ("kind", "ellipses", "bounds", "objective", "iterations", "converged", "seed")
    missing = [k for k in required if k not in raw]
    _require(not missing, f"{source}: missing fields {missing}")
    _require(raw["kind"] in MODEL_KINDS, f"{source}: unknown kind {raw['kind']!r}")
    ell = raw["ellipses"]
    _require(isinstance(ell, list) and ell, f"{source}: 'ellipses' must be a non-empty list")
    for e in ell:
        _require(isinstance(e, dict) and isinstance(e.get("mu"), list) and isinstance(e.get("w"), list)
                 and len(e["mu"]) == len(e["w"]) == len(ell[0]["mu"]) > 0,
                 f"{source}: malformed ellipse entry")
    b = raw["bounds"]
    _require(isinstance(b, dict) and {"lambda", "Lambda"} <= set(b), f"{source}: malformed bounds")
    doc = ModelDocument(
        kind=raw["kind"],
        ellipses=[{"mu": list(e["mu"]), "w": list(e["w"])} for e in ell],
        bounds={"lambda": b["lambda"], "Lambda": b["Lambda"]},
        objective=raw["objective"],
        iterations=raw["iterations"],
        converged=raw["converged"],
        seed=raw["seed"],
    )
    try:
        doc.to_ellipses()
    except (ValueError, TypeError) as exc:
        raise ModelFormatError(f"{source}: invalid parameters ({exc})") from None
    return doc


def load_model(path) -> ModelDocument:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ModelFormatError(f"{path}: cannot read ({exc})") from None
    return parse_model(text, source=str(path))
