"""Gap sets, thickness analytics, splitting combinatorics and Fourier probes."""

import json as _json

from ._lplab import *  # noqa: F401,F403
from ._lplab import ReliabilityError, ValidationError, run_json


def run(config):
    """Run a configuration dict and return the report dict."""
    return _json.loads(run_json(_json.dumps(config)))


__all__ = [name for name in dir() if not name.startswith("_")]
