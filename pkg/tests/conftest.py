import pytest

from mapfile import parse_map
from seriescore import MapTuple, Series


@pytest.fixture
def quadratic():
    """x + x^2 at degree 4."""
    return MapTuple([Series(1, 4, {(1,): 1, (2,): 1})])


@pytest.fixture
def shear():
    """(z1 + z2^2, z2) at degree 8."""
    return parse_map("vars: z1 z2\nF1 = z1 + z2^2\nF2 = z2\n", 8).map


@pytest.fixture
def write_map(tmp_path):
    """Write map file text to a temporary file and return its path."""

    def write(text: str, name: str = "F.map") -> str:
        path = tmp_path / name
        path.write_text(text)
        return str(path)

    return write
