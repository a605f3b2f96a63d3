"""CSV and run-manifest helpers.

CSVs are comma separated with a header row, LF line endings and every number
printed with 17 significant digits, so reruns are byte-identical.
"""

import hashlib
import json
import os
import subprocess
import tempfile
from pathlib import Path
from typing import Dict, Sequence

import numpy as np

from .errors import DomainError, IONotFoundError

FLOAT_FMT = "%.17g"


def write_csv(path, header: Sequence[str], rows) -> Path:
    path = Path(path)
    rows = np.asarray(rows)
    if rows.ndim == 1:
        rows = rows[:, None]
    if rows.shape[1] != len(header):
        raise DomainError(f"{path.name}: {rows.shape[1]} columns for {len(header)} headers")
    if np.iscomplexobj(rows):
        raise DomainError(f"{path.name}: split complex columns before writing")
    with open(path, "w", newline="\n") as fh:
        fh.write(",".join(header) + "\n")
        np.savetxt(fh, rows, fmt=FLOAT_FMT, delimiter=",")
    return path


def read_csv(path, display: str = None):
    """(header, float array) from a headed numeric CSV."""
    p = Path(path)
    if not p.is_file():
        raise IONotFoundError(display if display is not None else str(path))
    with open(p) as fh:
        header = fh.readline().strip().split(",")
        data = np.loadtxt(fh, delimiter=",", ndmin=2)
    if data.size and data.shape[1] != len(header):
        raise DomainError(f"{p.name}: header has {len(header)} columns, data {data.shape[1]}")
    return header, data


def sha256_file(path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 16), b""):
            h.update(chunk)
    return h.hexdigest()


def git_describe() -> str:
    try:
        out = subprocess.run(["git", "describe", "--always", "--dirty", "--tags"],
                             cwd=Path(__file__).resolve().parent, capture_output=True,
                             text=True, timeout=5)
    except (OSError, subprocess.SubprocessError):
        return "unknown"
    return out.stdout.strip() or "unknown"


def write_json_atomic(path, payload: Dict) -> Path:
    path = Path(path)
    fd, tmp = tempfile.mkstemp(prefix=".manifest-", suffix=".json", dir=path.parent)
    try:
        with os.fdopen(fd, "w") as fh:
            json.dump(payload, fh, indent=2, sort_keys=True)
            fh.write("\n")
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
    return path
