"""File formats: assignments and labels CSV, histogram CSV, atomic writes."""
from __future__ import annotations

import csv
import io
import json
import os
import tempfile
from pathlib import Path


def atomic_write_text(path, text: str):
    """Write ``text`` to ``path`` through a temporary file and a rename."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def dumps_json(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def csv_text(header, rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buf.getvalue()


def assignments_csv(assignments: dict) -> str:
    return csv_text(["id", "cluster"], sorted(assignments.items()))


def labels_csv(labels: dict) -> str:
    return csv_text(["id", "label"], sorted(labels.items()))


def histogram_csv(rows) -> str:
    return csv_text(["cluster", "type", "bin_start", "count"], [(c, t, repr(float(b)), n) for c, t, b, n in rows])


def confusion_csv(cm) -> str:
    header = ["true\\pred"] + [str(c) for c in cm.columns]
    rows = [[str(cls)] + row for cls, row in zip(cm.classes, cm.counts.tolist())]
    return csv_text(header, rows)


def read_two_column_csv(path, key: str, value: str) -> dict[str, str]:
    """Read a CSV with header ``key,value`` into a dict."""
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None or key not in reader.fieldnames or value not in reader.fieldnames:
            raise ValueError(f"{path}: expected header '{key},{value}'")
        out = {}
        for row in reader:
            if row[key] in out:
                raise ValueError(f"{path}: duplicated id {row[key]!r}")
            out[row[key]] = row[value]
    return out
