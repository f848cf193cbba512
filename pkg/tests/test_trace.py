"""Trace parsing, alignment, and serialization."""

from __future__ import annotations

import io
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hpcwatch.events import CANDIDATE_EVENTS, KNOWN_EVENTS, EventKind
from hpcwatch.trace import (
    CounterSeries,
    LineError,
    Sample,
    SkippedLine,
    Trace,
    align,
    iter_serialized,
    merge_traces,
    parse_line,
    parse_stream,
    serialize_sample,
    tick_of,
)

# The interval-CSV shape a stock profiler prints: one comment header, then
# timestamped deltas with leading whitespace.
LISTING = """\
# started on Sun Apr 19 01:23:16 2015
     0.001225993,1621,branch-load-misses
     0.002574349,5149,branch-load-misses
     0.003808515,5352,branch-load-misses
     0.005025360,5807,branch-load-misses
"""


def test_event_tables():
    assert len(KNOWN_EVENTS) == 24
    assert len(CANDIDATE_EVENTS) == 6
    assert set(CANDIDATE_EVENTS) <= set(KNOWN_EVENTS)
    ev = EventKind("iTLB-load-misses")
    assert ev.known and ev.candidate
    assert EventKind("cpu-cycles").known
    assert not EventKind("cpu-cycles").candidate
    assert not EventKind("made-up-event").known


def test_parse_line_sample():
    s = parse_line("     0.001225993,1621,branch-load-misses", 1)
    assert isinstance(s, Sample)
    assert s.timestamp == 0.001225993
    assert s.delta == 1621
    assert s.event.name == "branch-load-misses"


def test_parse_line_classification():
    assert parse_line("# comment", 1) is SkippedLine.COMMENT
    assert parse_line("   # indented comment", 1) is SkippedLine.COMMENT
    assert parse_line("", 1) is SkippedLine.BLANK
    assert parse_line("   \t  ", 1) is SkippedLine.BLANK


def test_parse_line_not_counted():
    s = parse_line("1.5,<not counted>,LLC-loads", 3)
    assert isinstance(s, Sample)
    assert s.delta is None


def test_parse_line_extra_trailing_fields_ignored():
    s = parse_line("0.1,42,cpu-cycles,100.00,extra", 1)
    assert isinstance(s, Sample)
    assert s.delta == 42
    assert s.event.name == "cpu-cycles"


def test_parse_line_errors():
    for bad in (
        "abc,42,cpu-cycles",
        "0.1,forty,cpu-cycles",
        "0.1,42",
        "justonefield",
        "-1.0,42,cpu-cycles",
        "0.1,-42,cpu-cycles",
        "inf,42,cpu-cycles",
    ):
        got = parse_line(bad, 7)
        assert isinstance(got, LineError), bad
        assert got.line_no == 7


def test_parse_line_event_hint_two_fields():
    hint = EventKind("bus-cycles")
    s = parse_line("0.2,99", 1, event_hint=hint)
    assert isinstance(s, Sample)
    assert s.event == hint
    # three-field lines keep their own event name even with a hint
    s = parse_line("0.2,99,LLC-loads", 1, event_hint=hint)
    assert s.event.name == "LLC-loads"


def test_parse_stream_listing():
    trace, diags = parse_stream(io.StringIO(LISTING))
    assert diags.lines_read == 5
    assert diags.samples_parsed == 4
    assert diags.comments_skipped == 1
    assert diags.malformed == []
    series = trace.series["branch-load-misses"]
    assert [s.delta for s in series.samples] == [1621, 5149, 5352, 5807]


def test_listing_serialize_reparse_identical():
    trace, _ = parse_stream(io.StringIO(LISTING))
    text = "\n".join(iter_serialized(trace)) + "\n"
    again, diags = parse_stream(io.StringIO(text))
    assert diags.malformed == []
    assert again.series.keys() == trace.series.keys()
    assert again.series["branch-load-misses"].samples == trace.series[
        "branch-load-misses"
    ].samples


def test_parse_stream_collects_errors_and_continues():
    text = "0.1,5,LLC-loads\nbogus line\n0.2,6,LLC-loads\n"
    trace, diags = parse_stream(io.StringIO(text))
    assert diags.samples_parsed == 2
    assert len(diags.malformed) == 1
    assert diags.malformed[0][0] == 2
    assert len(trace.series["LLC-loads"].samples) == 2


def test_parse_stream_rejects_stale_timestamps_per_event():
    # a repeated or rewound timestamp breaks the per-series ordering
    # invariant; the line is reported, the rest of the stream survives
    text = (
        "0.1,5,LLC-loads\n"
        "0.1,6,LLC-loads\n"
        "0.05,7,LLC-loads\n"
        "0.1,8,bus-cycles\n"
        "0.2,9,LLC-loads\n"
    )
    trace, diags = parse_stream(io.StringIO(text))
    assert diags.samples_parsed == 3
    assert [line_no for line_no, _ in diags.malformed] == [2, 3]
    assert all("non-increasing" in reason for _, reason in diags.malformed)
    assert [s.delta for s in trace.series["LLC-loads"].samples] == [5, 9]
    assert [s.delta for s in trace.series["bus-cycles"].samples] == [8]


@given(
    st.lists(
        st.one_of(
            st.tuples(
                st.floats(min_value=0, max_value=1e4, allow_nan=False),
                st.integers(min_value=0, max_value=10**12),
            ),
            st.just("comment"),
            st.just("blank"),
            st.just("garbage"),
        ),
        max_size=60,
    )
)
@settings(max_examples=60, deadline=None)
def test_diagnostics_accounting_identity(rows):
    lines = []
    for row in rows:
        if row == "comment":
            lines.append("# a comment")
        elif row == "blank":
            lines.append("   ")
        elif row == "garbage":
            lines.append("not,enough")
        else:
            t, d = row
            lines.append(f"{t!r},{d},cpu-cycles")
    _, diags = parse_stream(io.StringIO("\n".join(lines) + ("\n" if lines else "")))
    assert diags.lines_read == (
        diags.samples_parsed
        + diags.comments_skipped
        + len(diags.malformed)
        + diags.blank_lines
    )


def test_series_rejects_unsorted_timestamps():
    ev = EventKind("cpu-cycles")
    with pytest.raises(ValueError):
        CounterSeries(
            event=ev,
            samples=[Sample(1.0, 5, ev), Sample(0.5, 6, ev)],
        )


def test_merge_traces():
    a, _ = parse_stream(io.StringIO("0.1,5,LLC-loads\n"))
    b, _ = parse_stream(io.StringIO("0.1,9,bus-cycles\n"))
    merged = merge_traces([a, b])
    assert set(merged.series) == {"LLC-loads", "bus-cycles"}
    with pytest.raises(ValueError):
        merge_traces([a, a])


def test_tick_of_half_up():
    assert tick_of(0.0, 0.1) == 0
    assert tick_of(0.049, 0.1) == 0
    assert tick_of(0.051, 0.1) == 1
    assert tick_of(50.0, 0.1) == 500
    assert tick_of(60.0, 0.1) == 600


def test_align_basics():
    text = "0.1,5,LLC-loads\n0.2,7,LLC-loads\n0.4,9,LLC-loads\n"
    trace, _ = parse_stream(io.StringIO(text))
    aligned = align(trace, 0.1)
    col = aligned.values["LLC-loads"]
    assert aligned.n_ticks == 5
    assert col[1] == 5 and col[2] == 7 and col[4] == 9
    assert math.isnan(col[0]) and math.isnan(col[3])
    assert aligned.tick_time(4) == pytest.approx(0.4)


def test_align_sums_same_tick():
    text = "0.299,5,LLC-loads\n0.301,7,LLC-loads\n"
    trace, _ = parse_stream(io.StringIO(text))
    col = align(trace, 0.1).values["LLC-loads"]
    assert col[3] == 12


def test_align_skips_missing_deltas():
    text = "0.1,<not counted>,LLC-loads\n0.2,7,LLC-loads\n"
    trace, _ = parse_stream(io.StringIO(text))
    col = align(trace, 0.1).values["LLC-loads"]
    assert math.isnan(col[1])
    assert col[2] == 7


def test_align_rejects_bad_interval():
    trace, _ = parse_stream(io.StringIO("0.1,5,LLC-loads\n"))
    with pytest.raises(ValueError):
        align(trace, 0.0)


def test_serialize_sample_round_trip_missing():
    ev = EventKind("LLC-loads")
    s = Sample(timestamp=1.25, delta=None, event=ev)
    line = serialize_sample(s)
    assert "<not counted>" in line
    back = parse_line(line, 1)
    assert back == s


@given(
    st.lists(
        st.tuples(
            st.floats(min_value=1e-9, max_value=1e5, allow_nan=False),
            st.one_of(st.none(), st.integers(min_value=0, max_value=10**15)),
        ),
        min_size=1,
        max_size=40,
        unique_by=lambda t: t[0],
    )
)
@settings(max_examples=80, deadline=None)
def test_serialize_reparse_round_trip(raw):
    ev = EventKind("dTLB-loads")
    samples = [Sample(t, d, ev) for t, d in sorted(raw, key=lambda t: t[0])]
    trace = Trace(series={"dTLB-loads": CounterSeries(event=ev, samples=samples)})
    text = "\n".join(iter_serialized(trace)) + "\n"
    again, diags = parse_stream(io.StringIO(text))
    assert diags.malformed == []
    assert again.series["dTLB-loads"].samples == samples


def test_nominal_interval():
    ev = EventKind("LLC-loads")
    samples = [Sample(0.1 * (i + 1), 5, ev) for i in range(10)]
    series = CounterSeries(event=ev, samples=samples)
    assert series.nominal_interval == pytest.approx(0.1)
    assert CounterSeries(event=ev, samples=samples[:1]).nominal_interval == 0.0
