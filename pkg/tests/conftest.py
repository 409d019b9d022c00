from __future__ import annotations

import pathlib

import pytest

from annlint.compiler import compile_set
from annlint.parser import parse_source

FIXTURES = pathlib.Path(__file__).parent / "fixtures"


def load_fixture(name: str):
    file, diagnostics = parse_source((FIXTURES / name).read_text(), filename=name)
    assert not diagnostics, [d.format() for d in diagnostics]
    return file


@pytest.fixture(scope="session")
def person_file():
    return load_fixture("person.ann")


@pytest.fixture(scope="session")
def jpa_file():
    return load_fixture("jpa.ann")


@pytest.fixture(scope="session")
def conflict_file():
    return load_fixture("conflict.ann")


@pytest.fixture(scope="session")
def conflict_fixed_file():
    return load_fixture("conflict_fixed.ann")


@pytest.fixture(scope="session")
def person_ir(person_file):
    ir, warnings = compile_set(person_file)
    assert not warnings
    return ir


@pytest.fixture(scope="session")
def jpa_ir(jpa_file):
    ir, warnings = compile_set(jpa_file)
    assert not warnings
    return ir
