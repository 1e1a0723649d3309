import json
import pathlib

import pytest

DATA = pathlib.Path(__file__).parent / "data"


def fixture_label(name: str) -> str:
    """Read the metadata label straight from a fixture CSV."""
    first = (DATA / name).read_text().splitlines()[0]
    assert first.startswith("# label:")
    return first[len("# label:"):].strip()


@pytest.fixture
def make_spec(tmp_path):
    """Write a JSON figure description into tmp_path and return its path."""

    def _make(payload, name="figure.json"):
        path = tmp_path / name
        path.write_text(json.dumps(payload))
        return path

    return _make
