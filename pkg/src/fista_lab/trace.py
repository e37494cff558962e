"""Per-iteration solver records and their CSV form."""

import csv
import io
from dataclasses import dataclass, field
from typing import List, Optional

COLUMNS = ("k", "norm_dx", "obj", "a_k", "t_k", "alpha_k", "r_k", "time_s")


@dataclass
class TraceRecord:
    k: int
    norm_dx: float
    obj: Optional[float] = None
    a_k: Optional[float] = None
    t_k: Optional[float] = None
    alpha_k: Optional[float] = None
    r_k: Optional[float] = None
    time_s: Optional[float] = None


@dataclass
class Trace:
    records: List[TraceRecord] = field(default_factory=list)

    def append(self, record):
        self.records.append(record)

    def __len__(self):
        return len(self.records)

    def __iter__(self):
        return iter(self.records)

    def __getitem__(self, i):
        return self.records[i]

    def column(self, name):
        return [getattr(r, name) for r in self.records]

    def to_csv(self, fh=None):
        """Write with 17 significant digits; unrecorded fields stay empty."""
        out = io.StringIO() if fh is None else fh
        writer = csv.writer(out, lineterminator="\n")
        writer.writerow(COLUMNS)
        for rec in self.records:
            row = []
            for name in COLUMNS:
                v = getattr(rec, name)
                if v is None:
                    row.append("")
                elif name == "k":
                    row.append(str(v))
                else:
                    row.append(f"{v:.17g}")
            writer.writerow(row)
        if fh is None:
            return out.getvalue()

    @classmethod
    def from_csv(cls, source):
        fh = io.StringIO(source) if isinstance(source, str) else source
        reader = csv.reader(fh)
        header = next(reader)
        if tuple(header) != COLUMNS:
            raise ValueError(f"unexpected trace header {header}")
        trace = cls()
        for row in reader:
            values = {}
            for name, cell in zip(COLUMNS, row):
                if cell == "":
                    values[name] = None
                elif name == "k":
                    values[name] = int(cell)
                else:
                    values[name] = float(cell)
            trace.append(TraceRecord(**values))
        return trace
