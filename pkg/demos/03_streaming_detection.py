"""
Streaming detection, one sample at a time
=========================================

The detector never needs the whole trace.  Each counter keeps a bounded
window; every arriving sample is scored a fixed lag behind the newest one,
and the per-counter scores for a tick average into the attack factor f.
This drives that loop by hand on two counters, with a burst planted at
tick 60.
"""

from hpcwatch.detector import (
    DetectorConfig,
    WindowState,
    evaluate_tick,
    lag,
    push_value,
    threshold_check,
)
from hpcwatch.events import EventKind

config = DetectorConfig()  # k=5, window 50, threshold 1.5, 100 ms ticks
print(f"lag: {lag(config)} ticks, warm-up: {config.warmup} samples\n")

# Steady readouts with one hot run.  The second counter stays flat to show
# the averaging: only the burst counter reacts, so f lands halfway between
# its score and 1.
def readout(name: str, tick: int) -> float:
    base = {"LLC-loads": 1100.0, "bus-cycles": 24000.0}[name]
    if name == "LLC-loads" and tick in (60, 61):
        return base * 30.0
    return base

counters = ["LLC-loads", "bus-cycles"]
states = {n: WindowState(event=EventKind(n), window=config.window) for n in counters}
scores = {n: {} for n in counters}

for tick in range(100):
    for name in counters:
        result = push_value(states[name], tick, readout(name, tick), config)
        if result is not None:
            scored_tick, score = result
            scores[name][scored_tick] = score

    point = evaluate_tick(scores, tick, config)
    if point is None:
        continue  # still warming up
    alert = threshold_check(point, config)
    if alert is not None:
        print(
            f"tick {tick:3}: ALERT for tick {point.eval_tick} "
            f"(t={alert.eval_time:.1f}s) f={point.f}"
        )
    elif tick % 20 == 0:
        print(f"tick {tick:3}: f={point.f:.3f} over {point.contributing} counters")

# The alert names the evaluated tick, not the arrival tick: the burst at
# tick 60 is reported while the stream is at tick 63, three ticks later.
