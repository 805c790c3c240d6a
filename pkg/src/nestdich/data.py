"""Datasets: ARFF/CSV loading, feature encoding, folds and bootstrap replicates.

Raw feature values are kept in a float matrix. Numeric attributes hold their
value, nominal attributes hold the index into the attribute's value list, and
missing cells are NaN.
"""

import csv
import io
import math
import os
from dataclasses import dataclass, field

import numpy as np

from ._random import stream
from .errors import DataError, ParseError, UsageError

NUMERIC = "numeric"
NOMINAL = "nominal"
MISSING_TOKENS = ("", "?")


@dataclass(frozen=True)
class Attribute:
    name: str
    kind: str
    values: tuple = ()

    def __post_init__(self):
        if self.kind not in (NUMERIC, NOMINAL):
            raise UsageError(f"unknown attribute kind {self.kind!r}")
        object.__setattr__(self, "values", tuple(self.values))

    def to_dict(self):
        d = {"name": self.name, "type": self.kind}
        if self.kind == NOMINAL:
            d["values"] = list(self.values)
        return d

    @classmethod
    def from_dict(cls, d):
        return cls(d["name"], d["type"], tuple(d.get("values", ())))


def _frozen(a, dtype):
    a = np.array(a, dtype=dtype)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class Dataset:
    """Labelled instances over a fixed attribute schema and class list."""

    attributes: tuple
    rows: np.ndarray
    labels: np.ndarray
    classes: tuple
    weights: np.ndarray = None
    class_attribute: str = "class"

    def __post_init__(self):
        object.__setattr__(self, "attributes", tuple(self.attributes))
        object.__setattr__(self, "classes", tuple(self.classes))
        rows = np.array(self.rows, dtype=float).reshape(len(self.labels), len(self.attributes))
        labels = np.asarray(self.labels)
        if labels.size and not np.issubdtype(labels.dtype, np.integer):
            raise UsageError("labels must be integer class indices")
        weights = np.ones(len(labels)) if self.weights is None else self.weights
        object.__setattr__(self, "rows", _frozen(rows, float))
        object.__setattr__(self, "labels", _frozen(labels, np.int64))
        object.__setattr__(self, "weights", _frozen(weights, float))

        if len(self.classes) < 2:
            raise DataError("at least 2 classes required")
        if len(self.labels) == 0:
            raise DataError("dataset has no instances")
        if self.labels.min() < 0 or self.labels.max() >= len(self.classes):
            raise DataError("label index out of range")
        if self.weights.shape != self.labels.shape:
            raise UsageError("one weight per instance required")
        if not np.all(self.weights >= 0) or not np.any(self.weights > 0):
            raise DataError("weights must be non-negative with at least one positive")
        for j, att in enumerate(self.attributes):
            if att.kind == NOMINAL:
                col = self.rows[:, j]
                ok = np.isnan(col) | ((col >= 0) & (col < len(att.values)) & (col == np.round(col)))
                if not ok.all():
                    raise DataError(f"attribute {att.name!r}: nominal index out of range")

    @property
    def n_instances(self):
        return len(self.labels)

    @property
    def n_classes(self):
        return len(self.classes)

    def class_counts(self):
        return np.bincount(self.labels, minlength=self.n_classes)

    def subset(self, index, weights=None):
        index = np.asarray(index, dtype=np.int64)
        return Dataset(
            self.attributes,
            self.rows[index],
            self.labels[index],
            self.classes,
            self.weights[index] if weights is None else weights,
            self.class_attribute,
        )

    def with_weights(self, weights):
        return Dataset(
            self.attributes, self.rows, self.labels, self.classes, weights, self.class_attribute
        )


# ---------------------------------------------------------------------------
# parsing


@dataclass
class _RawTable:
    names: list
    kinds: list  # Attribute for ARFF, None for CSV (inferred)
    cells: list = field(default_factory=list)  # list of (line_no, [str, ...])


def _read_text(source):
    if isinstance(source, (bytes, bytearray)):
        return bytes(source).decode("utf-8")
    if isinstance(source, (str, os.PathLike)):
        with open(source, "rb") as fh:
            return fh.read().decode("utf-8")
    data = source.read()
    return data.decode("utf-8") if isinstance(data, bytes) else data


def _infer_format(source, fmt):
    if fmt is not None:
        fmt = fmt.lower()
        if fmt not in ("arff", "csv"):
            raise UsageError(f"unknown format {fmt!r}; expected arff or csv")
        return fmt
    if isinstance(source, (str, os.PathLike)):
        ext = os.path.splitext(os.fspath(source))[1].lower()
        if ext in (".arff", ".csv"):
            return ext[1:]
    raise UsageError("cannot infer data format; pass format='arff' or 'csv'")


def _parse_csv(text):
    reader = csv.reader(io.StringIO(text), delimiter=",", quotechar='"')
    table = None
    for row in reader:
        line = reader.line_num
        if not row or all(not c.strip() for c in row):
            continue
        row = [c.strip() for c in row]
        if table is None:
            table = _RawTable(names=row, kinds=[None] * len(row))
            continue
        if len(row) != len(table.names):
            raise ParseError(f"expected {len(table.names)} fields, found {len(row)}", line)
        table.cells.append((line, row))
    if table is None:
        raise ParseError("empty CSV input", 1)
    return table


def _unquote(tok):
    if len(tok) >= 2 and tok[0] == tok[-1] and tok[0] in "'\"":
        return tok[1:-1]
    return tok


def _split_values(text):
    quote = '"' if '"' in text and "'" not in text else "'"
    rows = list(csv.reader([text], quotechar=quote, skipinitialspace=True))
    return [v.strip() for v in rows[0]] if rows else []


def _parse_attribute(rest, line):
    rest = rest.strip()
    if not rest:
        raise ParseError("attribute declaration without a name", line)
    if rest[0] in "'\"":
        end = rest.find(rest[0], 1)
        if end < 0:
            raise ParseError("unterminated quoted attribute name", line)
        name, typ = rest[1:end], rest[end + 1 :].strip()
    else:
        parts = rest.split(None, 1)
        name, typ = parts[0], (parts[1].strip() if len(parts) > 1 else "")
    if typ.startswith("{"):
        if not typ.endswith("}"):
            raise ParseError(f"unterminated nominal value list for {name!r}", line)
        values = [_unquote(v) for v in _split_values(typ[1:-1]) if v != ""]
        if not values:
            raise ParseError(f"nominal attribute {name!r} has no values", line)
        return Attribute(name, NOMINAL, tuple(values))
    if typ.lower() in ("numeric", "real", "integer"):
        return Attribute(name, NUMERIC)
    if not typ:
        raise ParseError(f"attribute {name!r} has no type", line)
    raise ParseError(f"unsupported attribute type {typ.split()[0]!r} for {name!r}", line)


def _parse_arff(text):
    attributes = []
    table = None
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("%"):
            continue
        if table is None:
            if not line.startswith("@"):
                raise ParseError(f"unexpected content before @data: {line[:40]!r}", line_no)
            parts = line.split(None, 1)
            keyword, rest = parts[0].lower(), (parts[1] if len(parts) > 1 else "")
            if keyword == "@relation":
                continue
            if keyword == "@attribute":
                attributes.append(_parse_attribute(rest, line_no))
            elif keyword == "@data":
                if not attributes:
                    raise ParseError("@data before any @attribute", line_no)
                table = _RawTable(names=[a.name for a in attributes], kinds=attributes)
            else:
                raise ParseError(f"unknown declaration {keyword!r}", line_no)
            continue
        if line.startswith("{"):
            raise ParseError("sparse ARFF rows are not supported", line_no)
        values = [_unquote(v) for v in _split_values(line)]
        if len(values) != len(attributes):
            raise ParseError(f"expected {len(attributes)} values, found {len(values)}", line_no)
        table.cells.append((line_no, values))
    if table is None:
        raise ParseError("no @data section", max(1, len(text.splitlines())))
    return table


def _resolve_class_column(names, class_attribute):
    if class_attribute is None:
        return len(names) - 1
    if isinstance(class_attribute, str):
        if class_attribute in names:
            return names.index(class_attribute)
        if class_attribute.lstrip("-").isdigit():
            class_attribute = int(class_attribute)
        else:
            raise UsageError(f"unknown class attribute {class_attribute!r}")
    idx = int(class_attribute)
    if not -len(names) <= idx < len(names):
        raise UsageError(f"class attribute index {idx} out of range")
    return idx % len(names)


def _parse_number(tok, name, line):
    try:
        return float(tok)
    except ValueError:
        raise ParseError(f"attribute {name!r}: not a number: {tok!r}", line) from None


def _infer_attribute(name, column):
    present = [v for _, v in column if v not in MISSING_TOKENS]
    try:
        for v in present:
            float(v)
    except ValueError:
        return Attribute(name, NOMINAL, tuple(dict.fromkeys(present)))
    return Attribute(name, NUMERIC)


def _column_values(att, column):
    out = np.empty(len(column))
    index = {v: i for i, v in enumerate(att.values)}
    for i, (line, tok) in enumerate(column):
        if tok in MISSING_TOKENS:
            out[i] = np.nan
        elif att.kind == NUMERIC:
            out[i] = _parse_number(tok, att.name, line)
        elif tok in index:
            out[i] = index[tok]
        else:
            raise ParseError(f"attribute {att.name!r}: undeclared value {tok!r}", line)
    return out


def _table(source, fmt):
    text = _read_text(source)
    return _parse_arff(text) if fmt == "arff" else _parse_csv(text)


def load_dataset(source, format=None, class_attribute=None):
    """Read an ARFF or CSV dataset.

    ``source`` is a path, raw bytes or a file object. ``class_attribute`` is a
    column name or 0-based index and defaults to the last column. Class names
    follow declaration order for ARFF and first appearance for CSV.
    """
    fmt = _infer_format(source, format)
    table = _table(source, fmt)
    cls = _resolve_class_column(table.names, class_attribute)
    class_col = [(line, cells[cls]) for line, cells in table.cells]

    if fmt == "arff":
        class_att = table.kinds[cls]
        if class_att.kind != NOMINAL:
            raise DataError(f"class attribute {class_att.name!r} must be nominal")
        classes = class_att.values
    else:
        classes = tuple(dict.fromkeys(v for _, v in class_col if v not in MISSING_TOKENS))
    class_index = {c: i for i, c in enumerate(classes)}
    labels = []
    for line, tok in class_col:
        if tok in MISSING_TOKENS:
            raise DataError(f"line {line}: missing class value")
        if tok not in class_index:
            raise ParseError(f"undeclared class value {tok!r}", line)
        labels.append(class_index[tok])

    attributes, columns = [], []
    for j, name in enumerate(table.names):
        if j == cls:
            continue
        column = [(line, cells[j]) for line, cells in table.cells]
        att = table.kinds[j] if fmt == "arff" else _infer_attribute(name, column)
        attributes.append(att)
        columns.append(_column_values(att, column))
    rows = np.column_stack(columns) if columns else np.empty((len(labels), 0))
    if len(set(labels)) < 2:
        raise DataError("at least 2 classes required")
    return Dataset(tuple(attributes), rows, np.array(labels, dtype=np.int64), classes,
                   class_attribute=table.names[cls])


def load_instances(source, attributes, format=None):
    """Read feature rows for an existing schema, matching columns by name.

    Extra columns (such as the class) are ignored. Nominal values unknown to
    the schema become missing.
    """
    fmt = _infer_format(source, format)
    table = _table(source, fmt)
    columns = []
    for att in attributes:
        if att.name not in table.names:
            raise UsageError(f"data has no column {att.name!r}")
        j = table.names.index(att.name)
        column = [(line, cells[j]) for line, cells in table.cells]
        if att.kind == NOMINAL:
            known = set(att.values)
            column = [(line, tok if tok in known else "?") for line, tok in column]
        columns.append(_column_values(att, column))
    if columns:
        return np.column_stack(columns)
    return np.empty((len(table.cells), 0))


# ---------------------------------------------------------------------------
# encoding


@dataclass(frozen=True)
class Column:
    attribute: str
    value: str = None  # one-hot slot; None for a numeric column


@dataclass(frozen=True)
class Encoder:
    """Imputation and standardization statistics, fitted on one dataset.

    ``fill`` holds the per-attribute mean (numeric) or mode index (nominal).
    ``center``/``scale`` standardize numeric attributes; ``scale == 0`` marks
    a constant column, which encodes to zeros.
    """

    attributes: tuple
    fill: tuple
    center: tuple
    scale: tuple
    warnings: tuple = ()

    @property
    def columns(self):
        cols = []
        for att in self.attributes:
            if att.kind == NUMERIC:
                cols.append(Column(att.name))
            else:
                cols.extend(Column(att.name, v) for v in att.values)
        return tuple(cols)

    @property
    def width(self):
        return sum(1 if a.kind == NUMERIC else len(a.values) for a in self.attributes)

    def transform(self, rows):
        rows = np.asarray(rows, dtype=float)
        if rows.ndim == 1:
            rows = rows[None, :]
        if rows.shape[1] != len(self.attributes):
            raise UsageError(
                f"expected {len(self.attributes)} attribute values, got {rows.shape[1]}"
            )
        out = np.zeros((rows.shape[0], self.width))
        c = 0
        for j, att in enumerate(self.attributes):
            col = np.where(np.isnan(rows[:, j]), self.fill[j], rows[:, j])
            if att.kind == NUMERIC:
                if self.scale[j] > 0:
                    out[:, c] = (col - self.center[j]) / self.scale[j]
                c += 1
            else:
                k = len(att.values)
                idx = col.astype(np.int64)
                if np.any((idx < 0) | (idx >= k)):
                    raise UsageError(f"attribute {att.name!r}: nominal index out of range")
                out[np.arange(len(idx)), c + idx] = 1.0
                c += k
        return out

    def to_dict(self):
        return {
            "fill": list(self.fill),
            "center": list(self.center),
            "scale": list(self.scale),
            "warnings": list(self.warnings),
        }

    @classmethod
    def from_dict(cls, attributes, d):
        return cls(
            tuple(attributes),
            tuple(float(v) for v in d["fill"]),
            tuple(float(v) for v in d["center"]),
            tuple(float(v) for v in d["scale"]),
            tuple(d.get("warnings", ())),
        )


def fit_encoder(d):
    fill, center, scale, warnings = [], [], [], []
    for j, att in enumerate(d.attributes):
        col = d.rows[:, j]
        present = col[~np.isnan(col)]
        if att.kind == NUMERIC:
            if present.size == 0:
                warnings.append(f"{att.name}: all values missing; imputed 0")
                fill.append(0.0)
                center.append(0.0)
                scale.append(0.0)
                continue
            mean = float(present.mean())
            filled = np.where(np.isnan(col), mean, col)
            mu = float(filled.mean())
            sd = float(filled.std())
            fill.append(mean)
            center.append(mu)
            scale.append(sd if sd > 1e-12 * max(1.0, abs(mu)) else 0.0)
        else:
            if present.size == 0:
                warnings.append(f"{att.name}: all values missing; imputed first value")
                fill.append(0.0)
            else:
                counts = np.bincount(present.astype(np.int64), minlength=len(att.values))
                fill.append(float(np.argmax(counts)))
            center.append(0.0)
            scale.append(1.0)
    return Encoder(d.attributes, tuple(fill), tuple(center), tuple(scale), tuple(warnings))


@dataclass(frozen=True, eq=False)
class EncodedDataset:
    matrix: np.ndarray
    column_map: Encoder
    labels: np.ndarray
    weights: np.ndarray
    classes: tuple

    @property
    def n_instances(self):
        return self.matrix.shape[0]

    def subset(self, index, weights=None):
        return EncodedDataset(
            self.matrix[index],
            self.column_map,
            self.labels[index],
            self.weights[index] if weights is None else np.asarray(weights, dtype=float),
            self.classes,
        )


def encode(d, encoder=None):
    """One-hot, impute and standardize ``d``.

    Statistics come from ``d`` itself unless a previously fitted ``encoder``
    is given (e.g. training statistics applied to held-out rows).
    """
    encoder = fit_encoder(d) if encoder is None else encoder
    return EncodedDataset(encoder.transform(d.rows), encoder, d.labels, d.weights, d.classes)


# ---------------------------------------------------------------------------
# resampling


def stratified_fold_ids(labels, k, rng):
    """Fold number per instance.

    Instances are shuffled within each class, laid out class by class and
    dealt round-robin, so every class's fold counts differ by at most one.
    """
    labels = np.asarray(labels)
    n = len(labels)
    if not 1 <= k <= n:
        raise UsageError(f"number of folds must be in [1, {n}], got {k}")
    order = []
    for c in np.unique(labels):
        members = np.flatnonzero(labels == c)
        order.append(members[rng.permutation(len(members))])
    order = np.concatenate(order)
    ids = np.empty(n, dtype=np.int64)
    ids[order] = np.arange(n) % k
    return ids


def stratified_folds(d, k, seed):
    """``k`` disjoint, covering, class-stratified test index sets."""
    ids = stratified_fold_ids(d.labels, k, stream(seed, 0))
    return [np.flatnonzero(ids == f) for f in range(k)]


def bootstrap_indices(n, rng):
    return np.sort(rng.integers(0, n, size=n))


def bootstrap_sample(d, seed):
    """``n`` draws with replacement; weights reset to 1."""
    idx = bootstrap_indices(d.n_instances, stream(seed, 0))
    return d.subset(idx, weights=np.ones(len(idx)))


# ---------------------------------------------------------------------------
# synthetic data


def make_gaussian_classes(n_classes=8, n_instances=2000, n_features=10, seed=1, spread=1.0):
    """Isotropic unit-variance Gaussian classes with random means.

    Class means are drawn from N(0, spread^2 I); instances are split as evenly
    as possible between classes.
    """
    rng = stream(seed, 0)
    means = rng.normal(0.0, spread, size=(n_classes, n_features))
    labels = np.arange(n_instances) % n_classes
    rows = means[labels] + rng.normal(size=(n_instances, n_features))
    attributes = tuple(Attribute(f"x{j}", NUMERIC) for j in range(n_features))
    classes = tuple(f"c{i}" for i in range(n_classes))
    return Dataset(attributes, rows, labels, classes)


def write_csv(d, fh):
    """Write ``d`` as CSV with the class column last."""
    w = csv.writer(fh, lineterminator="\n")
    w.writerow([a.name for a in d.attributes] + [d.class_attribute])
    for row, label in zip(d.rows, d.labels):
        out = []
        for att, v in zip(d.attributes, row):
            if math.isnan(v):
                out.append("?")
            elif att.kind == NOMINAL:
                out.append(att.values[int(v)])
            else:
                out.append(repr(float(v)))
        w.writerow(out + [d.classes[label]])

