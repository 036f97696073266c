"""Solver traces: per-iteration records plus a self-describing header.

Traces serialize to JSON-lines text (one record per line) so that runs are
diff-friendly, byte-identical under a fixed seed, and certifiable offline:
every scalar a certificate needs is stored in the records themselves.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field

import numpy as np

from .exceptions import ParseError
from .linalg import Array


@dataclass
class IterationRecord:
    """State at iterate k plus the step taken from it (if any).

    Step fields (``A`` through ``inner_residual``) describe the step
    k -> k+1 and are None on the final record. ``certificates`` holds the
    per-step check results evaluated during the run.
    """

    k: int
    x: Array
    f_value: float
    F_value: float
    g_norm: float
    subgradient: Array
    A: float | None = None
    H_used: float | None = None
    i_k: int = 0
    step_norm: float | None = None
    lin_term: float | None = None
    quad_term: float | None = None
    breg: float | None = None
    model_value: float | None = None
    inner_iterations: int | None = None
    inner_residual: float | None = None
    fp_noise: float | None = None
    step_certified: bool = True
    b: float | None = None
    B: float | None = None
    v: Array | None = None
    certificates: list[dict] = field(default_factory=list)

    def to_json_dict(self) -> dict:
        out = {
            "type": "iteration",
            "k": self.k,
            "x": [float(v) for v in self.x],
            "f_value": self.f_value,
            "F_value": self.F_value,
            "g_norm": self.g_norm,
            "subgradient": [float(v) for v in self.subgradient],
            "A": self.A,
            "H_used": self.H_used,
            "i_k": self.i_k,
            "step_norm": self.step_norm,
            "lin_term": self.lin_term,
            "quad_term": self.quad_term,
            "breg": self.breg,
            "model_value": self.model_value,
            "inner_iterations": self.inner_iterations,
            "inner_residual": self.inner_residual,
            "fp_noise": self.fp_noise,
            "step_certified": self.step_certified,
            "b": self.b,
            "B": self.B,
            "v": None if self.v is None else [float(t) for t in self.v],
            "certificates": self.certificates,
        }
        return out

    @classmethod
    def from_json_dict(cls, d: dict) -> "IterationRecord":
        return cls(
            k=int(d["k"]),
            x=np.asarray(d["x"], dtype=np.float64),
            f_value=float(d["f_value"]),
            F_value=float(d["F_value"]),
            g_norm=float(d["g_norm"]),
            subgradient=np.asarray(d["subgradient"], dtype=np.float64),
            A=d.get("A"),
            H_used=d.get("H_used"),
            i_k=int(d.get("i_k") or 0),
            step_norm=d.get("step_norm"),
            lin_term=d.get("lin_term"),
            quad_term=d.get("quad_term"),
            breg=d.get("breg"),
            model_value=d.get("model_value"),
            inner_iterations=d.get("inner_iterations"),
            inner_residual=d.get("inner_residual"),
            fp_noise=d.get("fp_noise"),
            step_certified=bool(d.get("step_certified", True)),
            b=d.get("b"),
            B=d.get("B"),
            v=None if d.get("v") is None else np.asarray(d["v"], dtype=np.float64),
            certificates=list(d.get("certificates", [])),
        )


@dataclass
class Trace:
    """A full run: header metadata plus the iteration records."""

    header: dict
    records: list[IterationRecord] = field(default_factory=list)
    summary: dict = field(default_factory=dict)

    @property
    def n_iterations(self) -> int:
        return max(len(self.records) - 1, 0)

    @property
    def F_values(self) -> Array:
        return np.array([r.F_value for r in self.records])

    @property
    def g_norms(self) -> Array:
        return np.array([r.g_norm for r in self.records])

    @property
    def final(self) -> IterationRecord:
        return self.records[-1]

    @property
    def F_star(self) -> float | None:
        return self.header.get("F_star")

    @property
    def x_star(self) -> Array | None:
        xs = self.header.get("x_star")
        return None if xs is None else np.asarray(xs, dtype=np.float64)

    def d_hat(self) -> float | None:
        """Largest realized distance to the reference optimum, if known."""
        xs = self.x_star
        if xs is None or not self.records:
            return None
        from .linalg import norms_from_description

        norms = norms_from_description(self.header.get("norms", {}))
        return max(norms.primal(r.x - xs) for r in self.records)

    def write_jsonl(self, path: str | os.PathLike) -> None:
        with open(path, "w", encoding="ascii") as fh:
            fh.write(_dump_line({"type": "header", **self.header}))
            for rec in self.records:
                fh.write(_dump_line(rec.to_json_dict()))
            fh.write(_dump_line({"type": "summary", **self.summary}))

    @classmethod
    def read_jsonl(cls, path: str | os.PathLike) -> "Trace":
        header: dict | None = None
        summary: dict = {}
        records: list[IterationRecord] = []
        with open(path, "r", encoding="ascii") as fh:
            for lineno, raw in enumerate(fh, start=1):
                line = raw.strip()
                if not line:
                    continue
                try:
                    obj = json.loads(line)
                except json.JSONDecodeError as exc:
                    raise ParseError(f"invalid JSON: {exc}", line=lineno) from exc
                kind = obj.get("type")
                if kind == "header":
                    obj.pop("type")
                    header = obj
                elif kind == "iteration":
                    try:
                        records.append(IterationRecord.from_json_dict(obj))
                    except (KeyError, TypeError, ValueError) as exc:
                        raise ParseError(f"bad iteration record: {exc}", line=lineno) from exc
                elif kind == "summary":
                    obj.pop("type")
                    summary = obj
                else:
                    raise ParseError(f"unknown record type {kind!r}", line=lineno)
        if header is None:
            raise ParseError("trace has no header record")
        return cls(header=header, records=records, summary=summary)


def _dump_line(obj: dict) -> str:
    return json.dumps(obj, allow_nan=True, separators=(",", ":")) + "\n"
