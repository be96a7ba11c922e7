"""Tests for the 1D block-operator model and its exact-integral assembly."""

import numpy as np
import numpy.testing as npt
import pytest

from eigenclose.dirac1d import (
    LENGTH,
    Mesh1D,
    assemble_1d,
    exact_spectrum_1d,
    uniform_mesh,
)
from eigenclose.enclosure import Signature, local_counting, signature, zm_enclosures
from eigenclose.errors import UnsupportedOrderError


def test_uniform_mesh_basic():
    mesh = uniform_mesh(6)
    assert mesh.n_elems == 6
    npt.assert_allclose(mesh.h, np.pi / 6, rtol=1e-15)
    assert mesh.nodes[0] == 0.0
    npt.assert_allclose(mesh.nodes[-1], np.pi, rtol=1e-16)


def test_uniform_mesh_jitter_reproducible():
    m1 = uniform_mesh(10, jitter=0.3, seed=42)
    m2 = uniform_mesh(10, jitter=0.3, seed=42)
    npt.assert_array_equal(m1.nodes, m2.nodes)
    # different seed, different mesh
    m3 = uniform_mesh(10, jitter=0.3, seed=43)
    assert not np.array_equal(m1.nodes, m3.nodes)


def test_uniform_mesh_jitter_bounds():
    h = np.pi / 10
    mesh = uniform_mesh(10, jitter=0.3, seed=7)
    ref = np.linspace(0.0, np.pi, 11)
    assert np.max(np.abs(mesh.nodes - ref)) <= 0.5 * 0.3 * h
    assert np.all(np.diff(mesh.nodes) > 0)
    # boundary nodes never move
    assert mesh.nodes[0] == 0.0 and mesh.nodes[-1] == ref[-1]


def test_uniform_mesh_validation():
    with pytest.raises(ValueError, match="at least 2"):
        uniform_mesh(1)
    with pytest.raises(ValueError, match="jitter"):
        uniform_mesh(5, jitter=1.0)


def test_mesh1d_validation():
    with pytest.raises(ValueError, match="at least two"):
        Mesh1D([0.0, 1.0])
    with pytest.raises(ValueError, match="increasing"):
        Mesh1D([0.0, 2.0, 1.0, 3.0])


def test_assemble_rejects_unsupported_order():
    with pytest.raises(UnsupportedOrderError, match="order 4"):
        assemble_1d(uniform_mesh(4), 4)


def test_assembly_dimensions_and_dtype():
    model = assemble_1d(uniform_mesh(6), 1)
    # 7 nodes: 5 interior u dofs + 7 v dofs
    assert model.n_u == 5 and model.n_v == 7
    assert model.forms.n == 12
    # exact-integral assembly accumulates in extended precision
    assert model.forms.M0.dtype == np.longdouble
    assert model.x.size == 7


def test_p2_assembly_has_midside_nodes():
    model = assemble_1d(uniform_mesh(3), 2)
    assert model.n_v == 7  # 2*3 + 1 nodes
    npt.assert_allclose(model.x[1], np.pi / 6, rtol=1e-15)  # first midpoint


def test_hat_mass_matrix_exact():
    # classical P1 mass matrix entries: h/3 corners, 2h/3 interior, h/6 off
    model = assemble_1d(uniform_mesh(2), 1)
    h = np.pi / 2
    m0 = np.asarray(model.forms.M0, dtype=float)
    v = slice(model.n_u, model.n_u + model.n_v)  # v block after u block
    expected = h * np.array(
        [
            [1 / 3, 1 / 6, 0.0],
            [1 / 6, 2 / 3, 1 / 6],
            [0.0, 1 / 6, 1 / 3],
        ]
    )
    npt.assert_allclose(m0[v, v], expected, rtol=1e-15)


def test_v_mass_partition_of_unity():
    # nodal P-r functions sum to one, so 1' M0_vv 1 integrates 1 over (0, pi)
    for order in (1, 2, 3):
        model = assemble_1d(uniform_mesh(5, jitter=0.2, seed=3), order)
        v = slice(model.n_u, model.n_u + model.n_v)
        ones = np.ones(model.n_v)
        total = float(ones @ np.asarray(model.forms.M0, dtype=float)[v, v] @ ones)
        npt.assert_allclose(total, np.pi, rtol=1e-14)


def test_m1_off_diagonal_block_structure():
    model = assemble_1d(uniform_mesh(2), 1)
    m1 = np.asarray(model.forms.M1, dtype=float)
    nu = model.n_u
    # the operator couples u with v only
    npt.assert_array_equal(m1[:nu, :nu], np.zeros((nu, nu)))
    npt.assert_array_equal(m1[nu:, nu:], np.zeros((model.n_v, model.n_v)))
    # cross block: -int phi_u' phi_v; for hats the entries are +-1/2
    npt.assert_allclose(m1[0, nu:], [-0.5, 0.0, 0.5], atol=1e-18)


def test_exact_spectrum_1d():
    npt.assert_array_equal(
        exact_spectrum_1d(3), [-3.0, -2.0, -1.0, 0.0, 1.0, 2.0, 3.0]
    )
    with pytest.raises(ValueError):
        exact_spectrum_1d(0)


def test_counting_vanishes_at_zero():
    # (0, 1) is in every trial space: the kernel eigenvalue is represented
    # exactly, so F_1(0) is exactly zero, not merely small
    model = assemble_1d(uniform_mesh(6), 1)
    f = local_counting(model.forms, 0.0).F
    assert f[0] == 0.0


def test_signature_census_at_zero():
    model = assemble_1d(uniform_mesh(6), 1)
    assert signature(model.forms, 0.0) == Signature(1, 1, 5, 5)


def test_forms_validate():
    model = assemble_1d(uniform_mesh(4), 2)
    model.forms.validate()


def test_enclosures_contain_true_eigenvalues():
    model = assemble_1d(uniform_mesh(10), 2)
    enc = zm_enclosures(model.forms, (0.5, 2.5), j_max=2)
    assert len(enc) == 2
    for e, true in zip(enc, (1.0, 2.0)):
        assert e.lower <= true <= e.upper
        assert e.width < 1e-2
        assert not e.inconsistent


def test_enclosures_contain_on_jittered_mesh():
    model = assemble_1d(uniform_mesh(12, jitter=0.4, seed=11), 1)
    enc = zm_enclosures(model.forms, (0.5, 2.5), j_max=2)
    for e, true in zip(enc, (1.0, 2.0)):
        assert e.lower <= true <= e.upper


def test_negative_side_is_symmetric():
    # the spectrum is symmetric; bounds on the negative side mirror it
    model = assemble_1d(uniform_mesh(10), 1)
    enc = zm_enclosures(model.forms, (-1.5, -0.5), j_max=1)
    assert len(enc) == 1
    assert enc[0].lower <= -1.0 <= enc[0].upper


def test_refinement_shrinks_widths():
    widths = []
    for n in (10, 20):
        model = assemble_1d(uniform_mesh(n), 1)
        enc = zm_enclosures(model.forms, (0.5, 1.5), j_max=1)
        widths.append(enc[0].width)
    assert widths[1] < 0.4 * widths[0]  # roughly h^2 for P1
