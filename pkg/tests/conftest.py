from __future__ import annotations

import pytest

import circuitkit as ck
from circuitkit.cli import bundled_corpus_dir

CORPUS = bundled_corpus_dir()

GRAPH_NAMES = ["digon", "fig1", "figure_eight", "single_loop", "two_loop"]
MAP_NAMES = ["figure_eight", "hexmap", "p2", "square", "theta", "triangle"]


def load_graph(name: str) -> ck.Multigraph:
    return ck.parse_graph((CORPUS / f"{name}.graph").read_text(encoding="utf-8"))


def load_map(name: str) -> ck.PlanarMap:
    return ck.parse_planar_map((CORPUS / f"{name}.planar").read_text(encoding="utf-8"))


@pytest.fixture(scope="session")
def corpus_dir():
    return CORPUS


@pytest.fixture(scope="session")
def fig1():
    return load_graph("fig1")


@pytest.fixture(scope="session")
def single_loop():
    return load_graph("single_loop")


@pytest.fixture(scope="session")
def two_loop():
    return load_graph("two_loop")


@pytest.fixture(scope="session")
def digon():
    return load_graph("digon")


@pytest.fixture(scope="session")
def figure_eight():
    return load_graph("figure_eight")


@pytest.fixture(scope="session")
def corpus_graphs():
    return {name: load_graph(name) for name in GRAPH_NAMES}


@pytest.fixture(scope="session")
def corpus_maps():
    return {name: load_map(name) for name in MAP_NAMES}
