"""Headless figure rendering for squareperc artifacts.

Reads only the documented external interfaces of the simulation package:
the sweep CSV schema and the branching dwass/sim JSON shapes. Never
imports the simulation package itself.
"""

from .render import (
    LAMBDA_C_DEFAULT,
    PlotSpec,
    SchemaError,
    render_phase,
    render_progeny,
)

__all__ = [
    "LAMBDA_C_DEFAULT",
    "PlotSpec",
    "SchemaError",
    "render_phase",
    "render_progeny",
]

__version__ = "0.1.0"
