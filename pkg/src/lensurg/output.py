"""Rows, CSV / JSON-lines serialization and the on-disk report cache."""
import csv
import hashlib
import io
import json
import os
import tempfile

from . import __version__
from .core import is_nonneg_integer
from .obstruction import REFUTED, fmt_n

HEADER = ["p", "q", "m", "k", "N0", "N1", "N2", "N3", "verdict", "reason"]
_ROW_FILTERS_OK = {"delta-lambda", "surgery-formula"}


def report_rows(report):
    """One row per branch whose N0..N3 are non-negative integers, else one summary row."""
    c = report.candidate
    base = [c.p, c.q, c.m, c.k]
    blocking = next((f for f in report.filters
                     if not f.passed and f.name not in _ROW_FILTERS_OK), None)
    pre = next((f for f in report.filters if not f.passed and f.name != "surgery-formula"), None)
    rows = []
    if blocking is None:
        for b in report.branches:
            head = b.N[:4]
            if len(head) < 4 or not all(is_nonneg_integer(x) for x in head):
                continue
            if pre is not None:
                verdict, reason = REFUTED, f"j={b.j}; {pre.name}: {pre.detail}"
            elif b.passed:
                verdict, reason = report.verdict, b.reason()
                if report.reason:
                    reason += "; " + report.reason
            else:
                verdict, reason = REFUTED, b.reason()
            rows.append(base + [fmt_n(x) for x in head] + [verdict, reason])
    if not rows:
        rows.append(base + [""] * 4 + [report.verdict, report.reason])
    return rows


def all_rows(reports):
    rows = []
    for r in reports:
        rows.extend(report_rows(r))
    rows.sort(key=lambda r: (r[0], r[1], r[2], r[3], r[9]))
    return rows


def to_csv(rows):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(HEADER)
    for r in rows:
        w.writerow([str(x) for x in r])
    return buf.getvalue()


def parse_csv(text):
    rd = csv.reader(io.StringIO(text))
    head = next(rd)
    if head != HEADER:
        raise ValueError("unexpected CSV header")
    return [r for r in rd]


def to_jsonl(dicts):
    return "".join(json.dumps(d, sort_keys=True, ensure_ascii=False) + "\n" for d in dicts)


def parse_jsonl(text):
    return [json.loads(line) for line in text.splitlines() if line.strip()]


def digest(text):
    return hashlib.sha256(text.encode()).hexdigest()


class ReportCache:
    """Content-addressed JSON store keyed by (p, q, m, k, options, tool version)."""

    def __init__(self, root, version=__version__):
        self.root = root
        self.version = version
        os.makedirs(root, exist_ok=True)

    def key(self, p, q, m, k, extra=""):
        raw = json.dumps([p, q, m, k, extra, self.version])
        return hashlib.sha256(raw.encode()).hexdigest()

    def path(self, key):
        return os.path.join(self.root, key[:2], key + ".json")

    def get(self, key):
        try:
            with open(self.path(key), encoding="utf-8") as fh:
                return json.load(fh)
        except (OSError, ValueError):
            return None

    def put(self, key, obj):
        path = self.path(key)
        os.makedirs(os.path.dirname(path), exist_ok=True)
        fd, tmp = tempfile.mkstemp(dir=os.path.dirname(path), suffix=".tmp")
        try:
            with os.fdopen(fd, "w", encoding="utf-8") as fh:
                json.dump(obj, fh, sort_keys=True)
            os.replace(tmp, path)
        except BaseException:
            if os.path.exists(tmp):
                os.unlink(tmp)
            raise
