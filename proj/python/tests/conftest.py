import os
import pathlib

import pytest

ROOT = pathlib.Path(os.environ.get("DENDRODYN_ROOT", pathlib.Path(__file__).resolve().parents[2]))


@pytest.fixture
def root():
    return ROOT


@pytest.fixture
def cli():
    path = os.environ.get("DENDRODYN_CLI")
    if not path:
        pytest.skip("DENDRODYN_CLI not set")
    return path
