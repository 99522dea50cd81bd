import numpy as np
import pytest

from zetalab.errors import DomainError, InvariantError
from zetalab.geometry import CompactSetSpec, boundary_points, grid_points, interior_points
from zetalab.special_functions import StripRegion


def test_disc_boundary_nodes():
    K = CompactSetSpec.disc(0.75, 0.1, boundary_nodes=16, interior_nodes=0)
    pts = grid_points(K)
    assert len(pts) == 16
    assert np.allclose(np.abs(pts - 0.75), 0.1, atol=1e-15)


def test_rectangle_nodes_inside():
    K = CompactSetSpec.rectangle(0.5 - 0.1j, 0.7 + 0.1j, boundary_nodes=32, interior_nodes=25)
    pts = grid_points(K)
    assert len(pts) == 57
    assert np.all(K.contains(pts, tol=1e-15))
    inner = interior_points(K)
    assert np.all((inner.real > 0.5) & (inner.real < 0.7) & (np.abs(inner.imag) < 0.1))


@pytest.mark.parametrize("kind", ["disc", "rectangle"])
def test_power_of_two_refinement(kind):
    if kind == "disc":
        K = CompactSetSpec.disc(0.75 + 1j, 0.1)
    else:
        K = CompactSetSpec.rectangle(0.6 - 0.2j, 0.9 + 0.1j)
    coarse = boundary_points(K, 64)
    fine = boundary_points(K, 128)
    assert set(coarse.tolist()) <= set(fine.tolist())


def test_disc_interior_strictly_inside():
    K = CompactSetSpec.disc(0.75, 0.1, interior_nodes=25)
    inner = interior_points(K)
    assert len(inner) == 25
    assert np.max(np.abs(inner - 0.75)) < 0.1


def test_validation():
    with pytest.raises(DomainError):
        CompactSetSpec.disc(0.75, 0.1, boundary_nodes=8)
    with pytest.raises(DomainError):
        CompactSetSpec.disc(0.75, -0.1)
    with pytest.raises(DomainError):
        CompactSetSpec.rectangle(1 + 1j, 0j)
    with pytest.raises(InvariantError):
        CompactSetSpec.disc(0.95, 0.1, host_strip=StripRegion(0.5, 1.0))
    CompactSetSpec.disc(0.75, 0.1, host_strip=StripRegion(0.5, 1.0))


def test_json_round_trip():
    for K in (
        CompactSetSpec.disc(0.75 + 2j, 0.1, host_strip=StripRegion(0.5, 1.0)),
        CompactSetSpec.rectangle(0.6 - 0.1j, 0.8 + 0.1j, boundary_nodes=32, interior_nodes=4),
    ):
        assert CompactSetSpec.from_json(K.to_json()) == K
