"""Trial-subspace form matrices and their shifted combinations.

A trial subspace for a self-adjoint operator A is handed to this package
as three Gram-type matrices over a basis ``b_1 .. b_n`` inside the
operator domain:

* ``M0[i, j] = <b_i, b_j>`` (the Gram matrix, positive definite),
* ``M1[i, j] = <A b_i, b_j>``,
* ``M2[i, j] = <A b_i, A b_j>`` (positive semidefinite).

Everything the bound machinery needs is algebra on these three matrices.
For a real shift t the quadratic form of ``(A - t)^2`` has matrix
``Q_t = M2 - 2 t M1 + t^2 M0`` and the form of ``A - t`` has matrix
``L_t = M1 - t M0``.

The module also reads and writes the plain-text ``.forms`` exchange
format so externally assembled matrices can be certified by the same
pipeline.
"""

from dataclasses import dataclass, field

import numpy as np

from .errors import FormsFormatError
from .linalg import DEFAULT_TOL, check_symmetric, cholesky_spd, symmetrize


@dataclass
class TrialForms:
    """The three form matrices of a trial subspace.

    Construction validates shapes, exact symmetry and positive
    definiteness of ``M0``.  Deeper (more expensive) consistency checks
    live in :meth:`validate`.
    """

    M0: np.ndarray
    M1: np.ndarray
    M2: np.ndarray

    def __post_init__(self):
        # dtype is preserved: models may assemble in extended precision
        self.M0 = check_symmetric(self.M0, "M0")
        self.M1 = check_symmetric(self.M1, "M1")
        self.M2 = check_symmetric(self.M2, "M2")
        if not (self.M0.shape == self.M1.shape == self.M2.shape):
            raise ValueError("M0, M1, M2 must share one shape")
        cholesky_spd(self.M0)  # Gram matrix must be SPD

    @property
    def n(self):
        return self.M0.shape[0]

    def validate(self, tol=DEFAULT_TOL, shifts=None):
        """Run the expensive consistency checks.

        Verifies that ``M2`` is positive semidefinite and that the
        shifted form ``Q_t`` stays positive semidefinite on a sample of
        shifts (it is a square, so it must).  Raises ``ValueError`` on
        the first violation.
        """
        m1 = self.M1.astype(float, copy=False)
        m2 = self.M2.astype(float, copy=False)
        w2 = np.linalg.eigvalsh(m2)
        if w2[0] < -tol * max(1.0, abs(w2[-1])):
            raise ValueError(f"M2 has negative eigenvalue {w2[0]:.3e}")
        if shifts is None:
            # sample the numerical range of the pencil and beyond
            lo = np.min(np.linalg.eigvalsh(m1)) - 1.0
            hi = np.max(np.linalg.eigvalsh(m1)) + 1.0
            shifts = np.linspace(lo, hi, 7)
        for t in shifts:
            qt = shift(self, t).Qt.astype(float, copy=False)
            w = np.linalg.eigvalsh(qt)
            if w[0] < -tol * max(1.0, abs(w[-1])):
                raise ValueError(
                    f"Q_t at t={t:g} has negative eigenvalue {w[0]:.3e}"
                )
        return self


@dataclass
class ShiftedForms:
    """Matrices of the shifted forms at a fixed real shift t.

    ``Qt`` represents the squared graph distance to the shift,
    ``Lt`` the signed linear distance.
    """

    t: float
    Qt: np.ndarray = field(repr=False)
    Lt: np.ndarray = field(repr=False)


def shift(forms, t):
    """Shifted form matrices ``Q_t = M2 - 2t M1 + t^2 M0`` and
    ``L_t = M1 - t M0``.

    Both results are exactly symmetric as stored and keep the precision
    of the input forms (``t^2`` is squared in that precision too).
    """
    tt = forms.M0.dtype.type(t)
    qt = symmetrize(forms.M2 - (2.0 * tt) * forms.M1 + (tt * tt) * forms.M0)
    lt = symmetrize(forms.M1 - tt * forms.M0)
    return ShiftedForms(t=float(t), Qt=qt, Lt=lt)


def operator_forms(operator, basis, gram=None):
    """Build :class:`TrialForms` from an explicit symmetric operator.

    Parameters
    ----------
    operator : (N, N) array_like
        Dense symmetric matrix representing A.
    basis : (N, n) array_like
        Columns span the trial subspace.
    gram : (N, N) array_like, optional
        Inner-product matrix of the ambient space; Euclidean if omitted.

    Notes
    -----
    Useful for worked models where A is known exactly: the three form
    matrices are then consistent by construction, which makes the result
    a convenient oracle.
    """
    a = check_symmetric(operator, "operator")
    w = np.atleast_2d(np.asarray(basis, dtype=float))
    if w.shape[0] != a.shape[0]:
        raise ValueError("basis rows must match operator size")
    aw = a @ w
    if gram is None:
        m0 = w.T @ w
        m1 = w.T @ aw
        m2 = aw.T @ aw
    else:
        g = check_symmetric(gram, "gram")
        m0 = w.T @ g @ w
        m1 = w.T @ g @ aw
        m2 = aw.T @ g @ aw
    return TrialForms(symmetrize(m0), symmetrize(m1), symmetrize(m2))


# ----------------------------------------------------------------------
# .forms plain-text exchange format
#
#   line 1:   n
#   sections: %M0, %M1, %M2, each followed by "i j value" entries
#             (1-based indices, upper triangle, omitted entries are zero)
# ----------------------------------------------------------------------

_SECTIONS = ("%M0", "%M1", "%M2")


def write_forms(forms, path):
    """Write trial forms to a ``.forms`` text file.

    Values are written with :func:`repr`, the shortest decimal string
    that round-trips the IEEE double exactly, so a read-back reproduces
    the matrices bit for bit.
    """
    lines = [str(forms.n)]
    for tag, m in zip(_SECTIONS, (forms.M0, forms.M1, forms.M2)):
        lines.append(tag)
        for i in range(forms.n):
            for j in range(i, forms.n):
                if m[i, j] != 0.0:
                    # extended-precision entries round to double here;
                    # the format carries at most 17 significant digits
                    lines.append(f"{i + 1} {j + 1} {float(m[i, j])!r}")
    with open(path, "w", encoding="ascii") as fh:
        fh.write("\n".join(lines) + "\n")


def read_forms(path):
    """Parse a ``.forms`` text file into :class:`TrialForms`.

    Raises
    ------
    FormsFormatError
        With the offending line number on any malformed content.
    """
    with open(path, "r", encoding="ascii") as fh:
        raw = fh.readlines()

    lines = [
        (no + 1, line.strip()) for no, line in enumerate(raw) if line.strip()
    ]
    if not lines:
        raise FormsFormatError(1, "empty file")

    no, head = lines[0]
    try:
        n = int(head)
    except ValueError:
        raise FormsFormatError(no, f"expected the dimension, got {head!r}")
    if n < 1:
        raise FormsFormatError(no, f"dimension must be positive, got {n}")

    matrices = {}
    current = None
    for no, line in lines[1:]:
        if line.startswith("%"):
            if line not in _SECTIONS:
                raise FormsFormatError(no, f"unknown section {line!r}")
            if line in matrices:
                raise FormsFormatError(no, f"duplicate section {line!r}")
            current = np.zeros((n, n))
            matrices[line] = current
            continue
        if current is None:
            raise FormsFormatError(no, "entry before any %M section")
        parts = line.split()
        if len(parts) != 3:
            raise FormsFormatError(no, f"expected 'i j value', got {line!r}")
        try:
            i, j = int(parts[0]), int(parts[1])
            value = float(parts[2])
        except ValueError:
            raise FormsFormatError(no, f"malformed entry {line!r}")
        if not (1 <= i <= n and 1 <= j <= n):
            raise FormsFormatError(no, f"index ({i}, {j}) out of range 1..{n}")
        current[i - 1, j - 1] = value
        current[j - 1, i - 1] = value

    for tag in _SECTIONS:
        if tag not in matrices:
            raise FormsFormatError(len(raw), f"missing section {tag}")

    return TrialForms(matrices["%M0"], matrices["%M1"], matrices["%M2"])
