"""Python bindings for the televiz simulator.

Scenarios cross the boundary as scenario-file text; summaries and wire
messages come back as dicts.
"""

import json

from . import _core
from ._core import (
    ConfigError,
    DegenerateSignal,
    PointBehindCamera,
    WireError,
    billboard_distortion,
    calibrate,
    measure_head_latency,
    preset_names,
)

__all__ = [
    "ConfigError",
    "DegenerateSignal",
    "Engine",
    "PointBehindCamera",
    "WireError",
    "billboard_distortion",
    "calibrate",
    "compare_modes",
    "measure_head_latency",
    "preset",
    "preset_names",
    "run_scenario",
    "sweep_filter",
]


def _text(scenario):
    return scenario if isinstance(scenario, str) else json.dumps(scenario)


def preset(name):
    """Built-in scenario as a dict."""
    return json.loads(_core.preset(name))


def run_scenario(scenario):
    """Returns (rows, summary) for a scenario dict or scenario-file text."""
    rows, summary = _core.run_scenario(_text(scenario))
    return rows, json.loads(summary)


def compare_modes(scenario):
    return {mode: json.loads(s) for mode, s in _core.compare_modes(_text(scenario))}


def sweep_filter(scenario, rates=(1.0, 0.5, 0.2, 0.1, 0.05)):
    return _core.sweep_filter(_text(scenario), list(rates))


class Engine:
    """Step-wise engine; commands and snapshots use the websocket wire format."""

    def __init__(self, scenario):
        self._engine = _core.Engine(_text(scenario))

    def step(self):
        return self._engine.step()

    def command(self, message):
        return json.loads(self._engine.command(_text(message)))

    def snapshot(self):
        return json.loads(self._engine.snapshot())

    @property
    def tick(self):
        return self._engine.tick

    @property
    def done(self):
        return self._engine.done
