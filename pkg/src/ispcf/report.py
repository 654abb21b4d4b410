"""Machine-readable reports: lossless JSON (rationals as "p/q", dyadics
as "m*2^e") and CSV for tabular payloads."""

from __future__ import annotations

import json
from fractions import Fraction
from typing import Optional

from .exact.dyadic import Dyadic
from .exact.interval import Interval


def fraction_str(q: Fraction) -> str:
    return f"{q.numerator}/{q.denominator}"


def dyadic_str(d: Dyadic) -> str:
    return str(d)


def interval_json(iv: Interval) -> dict:
    return {
        "lo": "-inf" if iv.lo is None else str(iv.lo),
        "hi": "inf" if iv.hi is None else str(iv.hi),
    }


def valuation_json(nu, point_repr) -> list:
    return [{"weight": fraction_str(w), "point": point_repr(x)}
            for w, x in nu.entries]


class Report:
    def __init__(self, command: str, config: dict):
        self.command = command
        self.config = config
        self.results: dict = {}
        self.timing: Optional[float] = None

    def payload(self, with_timing: bool = True) -> dict:
        out = {
            "command": self.command,
            "config": self.config,
            "results": self.results,
        }
        if with_timing:
            out["timing"] = {"seconds": self.timing}
        return out

    def to_json(self, with_timing: bool = True) -> str:
        return json.dumps(self.payload(with_timing), indent=2)

    def rows(self) -> list[list]:
        """Tabular view for CSV output, when the command has one."""
        r = self.results
        if "histogram" in r and r["histogram"].get("edges"):
            h = r["histogram"]
            return [["lo", "hi", "weight"]] + [
                [h["edges"][k], h["edges"][k + 1], h["weights"][k]]
                for k in range(len(h["weights"]))]
        if "valuation" in r:
            return [["weight", "point"]] + [
                [e["weight"], json.dumps(e["point"])]
                for e in r["valuation"]]
        raise ValueError(f"command {self.command!r} has no tabular payload")

    def to_csv(self) -> str:
        return "\n".join(",".join(str(c) for c in row)
                         for row in self.rows()) + "\n"
