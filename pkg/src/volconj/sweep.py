"""Parallel grid sweeps over the u-plane with CSV/JSON persistence.

Grid points are independent work items handed to a bounded thread pool;
results are collected and emitted strictly in row-major grid order, so the
output bytes do not depend on the worker count.  Per-point failures become
diagnostics, never aborts: exploring O_K means running into its boundary.
"""

from __future__ import annotations

import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field

import numpy as np

from .errors import DomainError, VolconjError
from .geometry import CLOSED_FORM, NUMERIC_LIMIT, GeometryPoint, geometry_point
from .knots import KnotSpec

__all__ = ["SweepJob", "SweepResult", "run_sweep", "CSV_HEADER"]

CSV_HEADER = "idx,u_re,u_im,H_re,H_im,v_re,v_im,V,geo_len,p,q,err_est,flags"

_MODES = (CLOSED_FORM, NUMERIC_LIMIT, "both")


@dataclass(frozen=True)
class SweepJob:
    """One sweep: a knot, a u-plane rectangle, an N schedule and a mode."""

    knot: KnotSpec
    re_min: float
    re_max: float
    im_min: float
    im_max: float
    steps_re: int
    steps_im: int
    n_min: int = 500
    n_max: int = 2000
    n_step: int = 150
    mode: str = CLOSED_FORM
    tolerances: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.steps_re < 1 or self.steps_im < 1:
            raise DomainError("grid steps must be >= 1")
        for x in (self.re_min, self.re_max, self.im_min, self.im_max):
            if not math.isfinite(x):
                raise DomainError("grid bounds must be finite")
        if self.re_max < self.re_min or self.im_max < self.im_min:
            raise DomainError("grid bounds must be ordered")
        if self.mode not in _MODES:
            raise DomainError(f"mode must be one of {_MODES}, got {self.mode!r}")
        if self.n_min < 2:
            raise DomainError("n_min must be >= 2")
        if self.n_max < self.n_min or self.n_step < 1:
            raise DomainError("bad N schedule")

    def schedule(self) -> list[int]:
        return list(range(self.n_min, self.n_max + 1, self.n_step))

    def grid(self) -> list[complex]:
        res = np.linspace(self.re_min, self.re_max, self.steps_re)
        ims = np.linspace(self.im_min, self.im_max, self.steps_im)
        return [complex(r, i) for r in res for i in ims]

    def to_json_dict(self) -> dict:
        d = asdict(self)
        d["knot"] = self.knot.display()
        return d

    @classmethod
    def from_json_dict(cls, d: dict) -> "SweepJob":
        d = dict(d)
        d["knot"] = KnotSpec.parse(d["knot"])
        return cls(**d)


@dataclass(frozen=True)
class SweepResult:
    job: SweepJob
    rows: tuple  # (idx, GeometryPoint) ordered by idx
    failures: tuple  # (idx, diagnostic string) ordered by idx

    # -- serialization -----------------------------------------------------

    def to_csv(self) -> str:
        lines = [CSV_HEADER]
        for idx, pt in self.rows:
            lines.append(_csv_row(idx, pt))
        return "\n".join(lines) + "\n"

    def to_json(self) -> str:
        doc = {
            "job": self.job.to_json_dict(),
            "rows": [_point_json(idx, pt) for idx, pt in self.rows],
            "failures": [[idx, msg] for idx, msg in self.failures],
        }
        return json.dumps(doc, indent=1, sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "SweepResult":
        doc = json.loads(text)
        job = SweepJob.from_json_dict(doc["job"])
        rows = tuple(
            (int(r["idx"]), _point_from_json(r)) for r in doc["rows"]
        )
        failures = tuple((int(i), str(m)) for i, m in doc["failures"])
        return cls(job, rows, failures)


def _csv_row(idx: int, pt: GeometryPoint) -> str:
    p, q = (pt.surgery if pt.surgery is not None else (None, None))
    cells = [
        str(idx),
        repr(pt.u.real), repr(pt.u.imag),
        repr(pt.H.real), repr(pt.H.imag),
        repr(pt.v.real), repr(pt.v.imag),
        repr(pt.V),
        repr(pt.geodesic_length),
        "" if p is None else repr(p),
        "" if q is None else repr(q),
        repr(pt.err_est),
        ";".join(pt.flags),
    ]
    return ",".join(cells)


def _point_json(idx: int, pt: GeometryPoint) -> dict:
    p, q = (pt.surgery if pt.surgery is not None else (None, None))
    return {
        "idx": idx,
        "u_re": pt.u.real, "u_im": pt.u.imag,
        "H_re": pt.H.real, "H_im": pt.H.imag,
        "v_re": pt.v.real, "v_im": pt.v.imag,
        "V": pt.V,
        "geo_len": pt.geodesic_length,
        "p": p, "q": q,
        "err_est": pt.err_est,
        "flags": list(pt.flags),
        "source": pt.source,
    }


def _point_from_json(r: dict) -> GeometryPoint:
    surgery = None
    if r["p"] is not None:
        surgery = (float(r["p"]), float(r["q"]))
    return GeometryPoint(
        u=complex(r["u_re"], r["u_im"]),
        H=complex(r["H_re"], r["H_im"]),
        v=complex(r["v_re"], r["v_im"]),
        V=float(r["V"]),
        geodesic_length=float(r["geo_len"]),
        surgery=surgery,
        err_est=float(r["err_est"]),
        flags=tuple(r["flags"]),
        source=str(r["source"]),
    )


def _evaluate(job: SweepJob, idx: int, u: complex):
    try:
        pt = geometry_point(job.knot, u, mode=job.mode, schedule=job.schedule())
        return idx, pt, None
    except VolconjError as exc:
        return idx, None, f"{type(exc).__name__}: {exc}"


def run_sweep(job: SweepJob, parallelism: int = 1) -> SweepResult:
    """Evaluate every grid point; failures are isolated, ordering is fixed.

    The output is byte-identical for any ``parallelism`` >= 1.
    """
    if parallelism < 1:
        raise DomainError("parallelism must be >= 1")
    grid = job.grid()
    results = []
    if parallelism == 1:
        results = [_evaluate(job, i, u) for i, u in enumerate(grid)]
    else:
        with ThreadPoolExecutor(max_workers=parallelism) as pool:
            futures = [pool.submit(_evaluate, job, i, u) for i, u in enumerate(grid)]
            results = [f.result() for f in futures]
    results.sort(key=lambda t: t[0])
    rows = tuple((i, pt) for i, pt, err in results if pt is not None)
    failures = tuple((i, err) for i, pt, err in results if err is not None)
    return SweepResult(job, rows, failures)
