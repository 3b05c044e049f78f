"""Shared fixtures for the command-line tests."""

import json

import pytest


@pytest.fixture
def write_json(tmp_path):
    """Write a JSON document under tmp_path and return its path."""

    def _write(name, payload):
        path = tmp_path / name
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(json.dumps(payload), encoding="utf-8")
        return path

    return _write


@pytest.fixture
def observation_config(write_json):
    """Config for observation-space Stein nearest neighbour runs."""
    return write_json(
        "observation.json", {"space": "observation", "divergence": "stein"}
    )
