"""SVG chart contract: circles mean outliers, one optional event marker."""

import pytest

from hpcwatch.events import EventKind
from hpcwatch.svgplot import emit_plot, render_plot
from hpcwatch.trace import CounterSeries, Sample

EV = EventKind("LLC-loads")


def series_of(values, missing=()):
    samples = [
        Sample(
            timestamp=(i + 1) * 0.1,
            delta=None if i in missing else int(v),
            event=EV,
        )
        for i, v in enumerate(values)
    ]
    return CounterSeries(event=EV, samples=samples)


def test_circles_mark_exactly_the_outliers():
    series = series_of([5, 5, 5, 90, 5, 5, 5, 70, 5, 5])
    lofs = [1.0] * 10
    svg = render_plot(series, lofs, top_indices=[3, 7])
    assert svg.count("<circle") == 2
    assert svg.count("event-mark") == 0
    assert svg.count("<polyline") == 1


def test_marker_present_only_when_requested():
    series = series_of([5, 6, 7, 8, 9])
    lofs = [1.0] * 5
    plain = render_plot(series, lofs, top_indices=[])
    marked = render_plot(series, lofs, top_indices=[], mark_time=0.3)
    assert plain.count("event-mark") == 0
    assert marked.count("event-mark") == 1
    assert marked.count("<circle") == 0


def test_missing_samples_are_skipped():
    series = series_of([5, 6, 7, 8, 9, 10], missing={2, 4})
    lofs = [1.0] * 4  # one per usable sample
    svg = render_plot(series, lofs, top_indices=[0])
    assert svg.count("<circle") == 1


def test_score_count_must_match_usable_samples():
    series = series_of([5, 6, 7])
    with pytest.raises(ValueError, match="scores for"):
        render_plot(series, [1.0, 1.0], top_indices=[])


def test_no_usable_samples_is_an_error():
    series = series_of([5, 6], missing={0, 1})
    with pytest.raises(ValueError, match="no usable samples"):
        render_plot(series, [], top_indices=[])


def test_identical_inputs_identical_bytes(tmp_path):
    series = series_of([5, 5, 90, 5, 5])
    lofs = [1.0, 1.0, 9.0, 1.0, 1.0]
    a, b = str(tmp_path / "a.svg"), str(tmp_path / "b.svg")
    emit_plot(series, lofs, [2], 0.3, a)
    emit_plot(series, lofs, [2], 0.3, b)
    assert open(a, "rb").read() == open(b, "rb").read()
    assert open(a).read() == render_plot(series, lofs, [2], 0.3)


def test_chart_labels_event_and_axis():
    svg = render_plot(series_of([5, 6, 7]), [1.0] * 3, [])
    assert "LLC-loads" in svg
    assert ">seconds</text>" in svg
    assert svg.startswith("<svg ")
    assert svg.rstrip().endswith("</svg>")


def test_marker_outside_data_stretches_time_axis():
    svg = render_plot(series_of([5, 6, 7]), [1.0] * 3, [], mark_time=2.0)
    assert svg.count("event-mark") == 1
    assert ">2</text>" in svg  # axis end label follows the marker
