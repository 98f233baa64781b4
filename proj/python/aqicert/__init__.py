"""Python access to the aqicert pipelines."""

import json

from ._aqicert import Error, generate_graph, girth, localized_min_rayleigh, moore_bound
from ._aqicert import run as _run

__all__ = ["Error", "generate_graph", "girth", "localized_min_rayleigh", "moore_bound", "run"]


def run(config, pipeline="all"):
    """Run a pipeline on a config dict. Returns (exit_code, bundle, files)."""
    code, bundle, files = _run(json.dumps(config), pipeline)
    return code, json.loads(bundle), dict(files)
