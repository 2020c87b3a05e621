"""Bundled example instances.

The half-integral gadget is the classic witness that the Eulerian
condition does not force integrality: four diamond junctions threaded by
two long bypass arcs, eight unit demands between interleaved terminals.
Splitting every demand half/half over its two candidate routes satisfies
everything, yet no integral routing exists; doubling all capacities and
requests makes the doubled half-integral loading integral and feasible.

The instances live in checked-in JSON files (the ``coord`` fields record
the drawing they were transcribed from); this module only loads them.
"""

from __future__ import annotations

from importlib import resources

from .instances import Instance
from .io import parse_instance


def _load(name: str) -> Instance:
    data = resources.files("planarmcf.data").joinpath(name).read_bytes()
    return parse_instance(data)


def fixture_half_integral() -> Instance:
    """Eulerian, acyclic, planar, and infeasible; fractionally routable."""
    return _load("half_integral.json")


def fixture_half_integral_doubled() -> Instance:
    """The gadget with capacities and requests doubled; feasible."""
    return _load("half_integral_doubled.json")
