"""Tests for trial-form containers, shifting, and the .forms format."""

import numpy as np
import numpy.testing as npt
import pytest

from eigenclose.errors import FormsFormatError, NotPositiveDefiniteError
from eigenclose.forms import (
    TrialForms,
    operator_forms,
    read_forms,
    shift,
    write_forms,
)

# the two-eigenvalue worked model: A = diag(1, 2) on the full space
WORKED = TrialForms(np.eye(2), np.diag([1.0, 2.0]), np.diag([1.0, 4.0]))


def test_trial_forms_requires_spd_gram():
    with pytest.raises(NotPositiveDefiniteError):
        TrialForms(np.diag([1.0, 0.0]), np.eye(2), np.eye(2))


def test_trial_forms_requires_matching_shapes():
    with pytest.raises(ValueError, match="share one shape"):
        TrialForms(np.eye(2), np.eye(2), np.eye(3))


def test_trial_forms_requires_stored_symmetry():
    m1 = np.array([[1.0, 1e-9], [0.0, 2.0]])
    with pytest.raises(ValueError, match="symmetric"):
        TrialForms(np.eye(2), m1, np.eye(2))


def test_shift_worked_model_t3():
    st = shift(WORKED, 3.0)
    # Q_3 = M2 - 6 M1 + 9 M0, L_3 = M1 - 3 M0, both diagonal here
    npt.assert_array_equal(st.Qt, np.diag([4.0, 1.0]))
    npt.assert_array_equal(st.Lt, np.diag([-2.0, -1.0]))
    assert st.t == 3.0


def test_shift_worked_model_t_between():
    st = shift(WORKED, 1.5)
    npt.assert_array_equal(st.Qt, np.diag([0.25, 0.25]))
    npt.assert_array_equal(st.Lt, np.diag([-0.5, 0.5]))


def test_shift_preserves_longdouble():
    forms = TrialForms(
        np.eye(2, dtype=np.longdouble),
        np.diag(np.array([1, 2], dtype=np.longdouble)),
        np.diag(np.array([1, 4], dtype=np.longdouble)),
    )
    st = shift(forms, 1.0 / 3.0)
    assert st.Qt.dtype == np.longdouble
    assert st.Lt.dtype == np.longdouble


def test_operator_forms_full_basis_is_exact():
    a = np.diag([1.0, 2.0])
    forms = operator_forms(a, np.eye(2))
    npt.assert_array_equal(forms.M0, WORKED.M0)
    npt.assert_array_equal(forms.M1, WORKED.M1)
    npt.assert_array_equal(forms.M2, WORKED.M2)


def test_operator_forms_subspace():
    # one-dimensional trial space along (e1 + e2)/sqrt(2) of diag(1, 3)
    a = np.diag([1.0, 3.0])
    w = np.array([[1.0], [1.0]]) / np.sqrt(2.0)
    forms = operator_forms(a, w)
    npt.assert_allclose(forms.M0, [[1.0]], atol=1e-15)
    npt.assert_allclose(forms.M1, [[2.0]], atol=1e-15)  # mean of 1 and 3
    npt.assert_allclose(forms.M2, [[5.0]], atol=1e-15)  # mean of 1 and 9


def test_operator_forms_with_gram():
    a = np.diag([1.0, 2.0])
    g = np.diag([2.0, 3.0])
    w = np.eye(2)
    forms = operator_forms(a, w, gram=g)
    npt.assert_array_equal(forms.M0, g)
    npt.assert_array_equal(forms.M1, np.diag([2.0, 6.0]))
    npt.assert_array_equal(forms.M2, np.diag([2.0, 12.0]))


def test_operator_forms_cauchy_schwarz_consistency():
    """M1 quadratic form is bounded by sqrt(M0 q * M2 q) columnwise."""
    rng = np.random.default_rng(41)
    x = rng.standard_normal((6, 6))
    a = 0.5 * (x + x.T)
    w = rng.standard_normal((6, 3))
    forms = operator_forms(a, w)
    for _ in range(50):
        v = rng.standard_normal(3)
        q0 = v @ forms.M0 @ v
        q1 = v @ forms.M1 @ v
        q2 = v @ forms.M2 @ v
        assert q1 * q1 <= q0 * q2 * (1 + 1e-12) + 1e-12


def test_validate_accepts_consistent_forms():
    assert WORKED.validate() is WORKED


def test_validate_rejects_inconsistent_m2():
    # M2 too small: Q_t goes indefinite for shifts near the spectrum
    forms = TrialForms(np.eye(2), np.diag([1.0, 2.0]), np.diag([0.5, 2.0]))
    with pytest.raises(ValueError, match="negative eigenvalue"):
        forms.validate()


def test_forms_roundtrip_bit_exact(tmp_path):
    rng = np.random.default_rng(7)
    w = rng.standard_normal((5, 3))
    a = np.diag([0.3, 1.1, 1.9, 2.7, 3.4])
    forms = operator_forms(a, w)
    path = tmp_path / "case.forms"
    write_forms(forms, path)
    back = read_forms(path)
    npt.assert_array_equal(back.M0, forms.M0)
    npt.assert_array_equal(back.M1, forms.M1)
    npt.assert_array_equal(back.M2, forms.M2)


def test_forms_roundtrip_rounds_longdouble(tmp_path):
    eps = np.longdouble(2) ** -70
    forms = TrialForms(
        np.eye(2, dtype=np.longdouble) * (1 + eps),
        np.diag(np.array([1, 2], dtype=np.longdouble)),
        np.diag(np.array([1, 4], dtype=np.longdouble)),
    )
    path = tmp_path / "ld.forms"
    write_forms(forms, path)
    back = read_forms(path)
    assert back.M0.dtype == np.float64
    # 1 + 2^-70 is not representable in double, so it lands on 1.0
    npt.assert_array_equal(back.M0, np.eye(2))


def test_read_forms_zero_entries_omitted(tmp_path):
    path = tmp_path / "sparse.forms"
    path.write_text("2\n%M0\n1 1 1.0\n2 2 1.0\n%M1\n1 2 0.5\n%M2\n1 1 1.0\n2 2 1.0\n")
    forms = read_forms(path)
    npt.assert_array_equal(forms.M1, np.array([[0.0, 0.5], [0.5, 0.0]]))


@pytest.mark.parametrize(
    "content, lineno, fragment",
    [
        ("", 1, "empty"),
        ("two\n", 1, "dimension"),
        ("0\n", 1, "positive"),
        ("1\n%M9\n", 2, "unknown section"),
        ("1\n1 1 1.0\n", 2, "before any"),
        ("1\n%M0\n1 1\n", 3, "i j value"),
        ("1\n%M0\n1 2 1.0\n", 3, "out of range"),
        ("1\n%M0\n1 1 x\n", 3, "malformed"),
        ("1\n%M0\n1 1 1.0\n%M0\n", 4, "duplicate"),
    ],
)
def test_read_forms_reports_line_numbers(tmp_path, content, lineno, fragment):
    path = tmp_path / "bad.forms"
    path.write_text(content)
    with pytest.raises(FormsFormatError, match=fragment) as exc:
        read_forms(path)
    assert exc.value.lineno == lineno


def test_read_forms_missing_section(tmp_path):
    path = tmp_path / "missing.forms"
    path.write_text("1\n%M0\n1 1 1.0\n%M1\n1 1 1.0\n")
    with pytest.raises(FormsFormatError, match="missing section"):
        read_forms(path)
