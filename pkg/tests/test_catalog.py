from __future__ import annotations

import json

import pytest

from pervmat import catalog
from pervmat.arrangement import load_arrangement
from pervmat.cousin import compact_cohomology, perversity_report
from pervmat.diagram import load_diagram
from pervmat.dirac import to_dirac


def test_catalog_size():
    assert len(catalog.ENTRIES) == 14
    assert sum(not e.perverse for e in catalog.ENTRIES.values()) == 2
    assert len(catalog.morphisms()) >= 10


@pytest.mark.parametrize("name", sorted(catalog.ARRANGEMENTS))
def test_arrangement_files_match_builders(name):
    assert load_arrangement(catalog.arrangement_path(name)) == catalog.ARRANGEMENTS[name]()


@pytest.mark.parametrize("name", sorted(catalog.ENTRIES))
def test_diagram_files_match_builders(name):
    d = catalog.build(name)
    assert load_diagram(d.index, catalog.diagram_path(name)) == d
    doc = json.loads(catalog.diagram_path(name).read_text())
    assert doc["name"] == name and doc["description"]


@pytest.mark.parametrize("name", sorted(catalog.ENTRIES))
def test_expectation_files_hold(name):
    exp = json.loads(catalog.expect_path(name).read_text())
    assert exp == catalog.expectations(name)
    d = catalog.build(name)
    assert perversity_report(d).perverse == exp["perverse"]
    if exp["perverse"]:
        assert {str(k): v for k, v in compact_cohomology(d).items()} == exp["compact_cohomology"]
    if "dirac_dims" in exp:
        assert list(to_dirac(d).dims) == exp["dirac_dims"]


def test_write_catalog_reproduces_shipped_files(tmp_path):
    written = catalog.write_catalog(tmp_path)
    assert len(written) == 4 + 2 * len(catalog.ENTRIES)
    for p in written:
        shipped = catalog.data_dir() / p.relative_to(tmp_path)
        assert p.read_text() == shipped.read_text(), p.name
