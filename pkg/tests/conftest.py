from __future__ import annotations

import json
from pathlib import Path

import pytest

from accex import fixtures, ingest, whatif

DATA = Path(__file__).parent / "data"


def data_path(name: str) -> Path:
    return DATA / name


def data_text(name: str) -> str:
    return data_path(name).read_text()


@pytest.fixture(scope="session")
def worked_example_spec() -> fixtures.WorkloadSpec:
    return fixtures.WorkloadSpec.from_dict(json.loads(data_text("worked_example_spec.json")))


@pytest.fixture(scope="session")
def worked_example_bundle(worked_example_spec) -> fixtures.FixtureBundle:
    return fixtures.generate(worked_example_spec)


@pytest.fixture(scope="session")
def worked_example() -> whatif.AttributedProfile:
    profile, table = ingest.read_portable_profile(data_text("worked_example_profile.json"))
    return whatif.attribute(profile, table)


@pytest.fixture(scope="session")
def solver_example() -> whatif.AttributedProfile:
    profile, table = ingest.read_portable_profile(data_text("solver_profile.json"))
    return whatif.attribute(profile, table)
