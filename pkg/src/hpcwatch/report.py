"""CSV report emission and ingestion.

Three row shapes, all with a header, '.' decimal separator, rows in time
order, floats at 9 significant digits so identical runs produce identical
bytes:

* attack factor series: eval_time,f,contributing
* alerts:               eval_time,f,threshold,counters
* per-counter outliers: event,tick,time,value,lof,rank

``counters`` packs the contributing event names with ';' so the column
count stays fixed.  Every writer here has a matching reader; the CLI never
emits a file it cannot read back.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from typing import Iterable, Sequence

from .detector import Alert, AttackFactorPoint
from .trace import tick_of

ATTACK_FACTOR_HEADER = ["eval_time", "f", "contributing"]
ALERTS_HEADER = ["eval_time", "f", "threshold", "counters"]
OUTLIERS_HEADER = ["event", "tick", "time", "value", "lof", "rank"]


def fmt(x: float) -> str:
    """9 significant digits; round-trips every value the pipeline emits."""
    return "%.9g" % x


@dataclass(frozen=True)
class OutlierRow:
    event: str
    tick: int
    time: float
    value: float
    lof: float
    rank: int


def _writer(fh):
    return csv.writer(fh, lineterminator="\n")


def write_attack_factor_csv(
    path: str, points: Sequence[AttackFactorPoint], tick_interval: float
) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        w = _writer(fh)
        w.writerow(ATTACK_FACTOR_HEADER)
        for p in points:
            w.writerow([fmt(p.eval_tick * tick_interval), fmt(p.f), p.contributing])


def write_alerts_csv(path: str, alerts: Sequence[Alert]) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        w = _writer(fh)
        w.writerow(ALERTS_HEADER)
        for a in alerts:
            w.writerow(alert_row(a))


def alert_row(alert: Alert) -> list[str]:
    """One alert as CSV fields; shared by the report writer and live mode."""
    return [
        fmt(alert.eval_time),
        fmt(alert.f),
        fmt(alert.threshold),
        ";".join(alert.per_counter_lof),
    ]


def write_outliers_csv(path: str, rows: Iterable[OutlierRow]) -> None:
    ordered = sorted(rows, key=lambda r: (r.tick, r.event, r.rank))
    with open(path, "w", encoding="utf-8", newline="") as fh:
        w = _writer(fh)
        w.writerow(OUTLIERS_HEADER)
        for r in ordered:
            w.writerow([r.event, r.tick, fmt(r.time), fmt(r.value), fmt(r.lof), r.rank])


# ---------------------------------------------------------------------------
# Readers
# ---------------------------------------------------------------------------

def _read_rows(path: str, expected_header: list[str]) -> list[list[str]]:
    with open(path, "r", encoding="utf-8", newline="") as fh:
        rows = list(csv.reader(fh))
    if not rows or rows[0] != expected_header:
        raise ValueError(
            f"{path}: expected header {','.join(expected_header)!r}, "
            f"got {rows[0] if rows else 'empty file'!r}"
        )
    return rows[1:]


def read_attack_factor_csv(path: str) -> list[tuple[float, float, int]]:
    return [
        (float(r[0]), float(r[1]), int(r[2]))
        for r in _read_rows(path, ATTACK_FACTOR_HEADER)
    ]


def read_alerts_csv(path: str, tick_interval: float) -> list[Alert]:
    """Rebuild alerts; per-counter scores are not serialized, so the
    snapshot carries the names with a placeholder score."""
    alerts = []
    for r in _read_rows(path, ALERTS_HEADER):
        eval_time = float(r[0])
        names = [n for n in r[3].split(";") if n]
        alerts.append(
            Alert(
                eval_time=eval_time,
                eval_tick=tick_of(eval_time, tick_interval),
                f=float(r[1]),
                threshold=float(r[2]),
                per_counter_lof={n: float("nan") for n in names},
            )
        )
    return alerts


def read_outliers_csv(path: str) -> list[OutlierRow]:
    return [
        OutlierRow(
            event=r[0],
            tick=int(r[1]),
            time=float(r[2]),
            value=float(r[3]),
            lof=float(r[4]),
            rank=int(r[5]),
        )
        for r in _read_rows(path, OUTLIERS_HEADER)
    ]
