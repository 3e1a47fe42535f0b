"""Per-run convergence traces and their on-disk CSV/JSON form.

A trace is the record of one seeded run: cumulative oracle evaluations vs
best value so far, one row per algorithm iteration. The CSV column order is
``evals,iter,best_f,wall_ms``; run metadata (algorithm, instance, seed, full
config echo, config hash) lives in a sidecar ``.meta.json`` that contains no
timestamps, so everything except wall clock is byte-stable under reruns.
"""

from __future__ import annotations

import hashlib
import json
import math
from pathlib import Path
from typing import Optional

CSV_HEADER = "evals,iter,best_f,wall_ms"


class Trace:
    """Monotone best-so-far curve for one run.

    Appends enforce the two structural invariants: evaluation counts strictly
    increase and the best value never increases.
    """

    def __init__(self, meta: Optional[dict] = None):
        self.evals: list[int] = []
        self.iters: list[int] = []
        self.best_f: list[float] = []
        self.wall_ms: list[float] = []
        self.meta: dict = dict(meta or {})

    def __len__(self) -> int:
        return len(self.evals)

    def append(self, evals: int, iteration: int, best_f: float, wall_ms: float = 0.0) -> None:
        if self.evals and evals <= self.evals[-1]:
            raise ValueError(f"evals must strictly increase ({evals} after {self.evals[-1]})")
        if self.best_f and best_f > self.best_f[-1]:
            raise ValueError(f"best_f must be non-increasing ({best_f} after {self.best_f[-1]})")
        if not math.isfinite(best_f):
            raise ValueError("best_f must be finite")
        self.evals.append(int(evals))
        self.iters.append(int(iteration))
        self.best_f.append(float(best_f))
        self.wall_ms.append(float(wall_ms))

    @property
    def final_best(self) -> float:
        if not self.best_f:
            raise ValueError("empty trace")
        return self.best_f[-1]

    @property
    def final_evals(self) -> int:
        if not self.evals:
            raise ValueError("empty trace")
        return self.evals[-1]

    def thinned(self, stride: int) -> "Trace":
        """Every stride-th record plus the last one; stride 1 is the identity."""
        if stride < 1:
            raise ValueError("stride must be >= 1")
        out = Trace(meta=self.meta)
        n = len(self)
        for i in range(n):
            if i % stride == 0 or i == n - 1:
                out.append(self.evals[i], self.iters[i], self.best_f[i], self.wall_ms[i])
        return out

    # -- serialisation ------------------------------------------------------

    def to_csv(self, path) -> None:
        path = Path(path)
        lines = [CSV_HEADER]
        for e, it, f, w in zip(self.evals, self.iters, self.best_f, self.wall_ms):
            lines.append(f"{e},{it},{f!r},{w!r}")
        path.write_text("\n".join(lines) + "\n")
        if self.meta:
            meta_path(path).write_text(json.dumps(self.meta, indent=2, sort_keys=True) + "\n")

    @classmethod
    def from_csv(cls, path) -> "Trace":
        path = Path(path)
        text = path.read_text().strip().splitlines()
        if not text or text[0].strip() != CSV_HEADER:
            raise ValueError(f"{path}: malformed trace file (expected header {CSV_HEADER!r})")
        meta = {}
        mp = meta_path(path)
        if mp.exists():
            meta = json.loads(mp.read_text())
        trace = cls(meta=meta)
        for line in text[1:]:
            e, it, f, w = line.split(",")
            trace.append(int(e), int(it), float(f), float(w))
        return trace

    def payload_bytes(self) -> bytes:
        """Deterministic content: the evals,iter,best_f columns, wall clock excluded."""
        lines = ["evals,iter,best_f"]
        for e, it, f in zip(self.evals, self.iters, self.best_f):
            lines.append(f"{e},{it},{f!r}")
        return ("\n".join(lines) + "\n").encode()


def meta_path(csv_path) -> Path:
    csv_path = Path(csv_path)
    return csv_path.with_suffix(".meta.json")


def config_hash(config: dict) -> str:
    """Stable short hash of a JSON-serialisable config document."""
    blob = json.dumps(config, sort_keys=True, separators=(",", ":")).encode()
    return hashlib.sha256(blob).hexdigest()[:12]
