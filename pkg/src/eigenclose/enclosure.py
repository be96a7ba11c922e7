"""Certified spectral enclosures from trial-subspace forms.

The central object is the local counting function of a trial subspace:
at a shift t its j-th value ``F_j(t)`` is the square root of the j-th
smallest eigenvalue of the pencil ``(Q_t, M0)``.  Each value bounds the
distance from t to the j-th nearest spectral point from above, it is
1-Lipschitz in t, and ``t -> t + F_j(t)`` / ``t -> t - F_j(t)`` are
nondecreasing.

Certified one-sided bounds come from the Zimmermann-Mertins pencil
``tau Q_t x = L_t x``: with the negative eigenvalues ``tau^-_1 <= ...``
and the positive ones ``tau^+_1 >= ...``,

* ``t + 1/tau^-_j``  is a lower bound for the j-th spectral point
  below t (counting towards -infinity), and
* ``t + 1/tau^+_j``  is an upper bound for the j-th spectral point
  above t.

Pairing upper bounds computed at the left end of a window with lower
bounds computed at the right end yields two-sided enclosures.  Residual
bounds for the eigenvectors follow from the counting values together
with caller-supplied distances and isolation radii.
"""

import enum
import warnings
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    DeflationWarning,
    DegenerateShiftError,
    EmptySideError,
    GapViolationError,
    NegativeEigenvalueError,
)
from .forms import shift
from .linalg import (
    DEFAULT_TOL,
    cholesky_spd,
    inv_sqrt,
    kernel_split,
    sym_generalized_eig,
    symmetrize,
)


@dataclass
class CountingValues:
    """Local counting function values at one shift.

    ``F`` is ascending and nonnegative; column ``U[:, j]`` holds the
    M0-orthonormal coefficient vector attaining ``F[j]``.
    """

    t: float
    F: np.ndarray
    U: np.ndarray = field(repr=False)


@dataclass(frozen=True)
class Signature:
    """Inertia-style census of the shifted pencil at one shift.

    ``n_inf``   dimension of the deflated kernel of Q_t (trial vectors on
                which the shifted operator vanishes identically),
    ``n_zero``  zero eigenvalues of the deflated pencil,
    ``n_minus`` negative eigenvalues (spectrum detected below t),
    ``n_plus``  positive eigenvalues (spectrum detected above t).
    """

    n_inf: int
    n_zero: int
    n_minus: int
    n_plus: int

    @property
    def total(self):
        return self.n_inf + self.n_zero + self.n_minus + self.n_plus


@dataclass
class PencilEigen:
    """Classified eigenpairs of the pencil ``tau Q_t x = L_t x``.

    ``tau_minus`` ascending (most negative first, so index j-1 bounds
    the j-th spectral point below t), ``tau_plus`` descending.  Vector
    columns are Q_t-orthonormal coefficient vectors in the full trial
    basis, deflated kernel directions removed.
    """

    t: float
    tau_minus: np.ndarray
    tau_plus: np.ndarray
    vectors_minus: np.ndarray = field(repr=False)
    vectors_plus: np.ndarray = field(repr=False)
    signature: Signature


class Detectability(enum.Enum):
    """Which sides of a shift the trial subspace can see."""

    ALL_BELOW = "all-below"
    ALL_ABOVE = "all-above"
    MIXED = "mixed"


@dataclass
class Enclosure:
    """A certified two-sided enclosure ``[lower, upper]``.

    ``j`` is 1-based in ascending order inside the window;
    ``t_upper_from`` / ``t_lower_from`` record which shifts produced the
    bounds.  ``inconsistent`` flags ``lower > upper`` (the counts on the
    two sides disagreed); such rows are reported, never silently fixed.
    """

    j: int
    lower: float
    upper: float
    t_lower_from: float
    t_upper_from: float
    inconsistent: bool = False

    @property
    def width(self):
        return self.upper - self.lower

    def __contains__(self, value):
        return self.lower <= value <= self.upper


@dataclass
class ResidualBounds:
    """Eigenvector residuals and graph-norm error bounds.

    ``valid`` is False whenever some ``eps[j] >= 1``; the numbers are
    still returned because partial information (the leading valid
    entries) is often useful.
    """

    eps: np.ndarray
    graph_bounds: np.ndarray
    valid: bool


#: extended precision is worth using only if it genuinely beats double
_LONGDOUBLE_OK = np.finfo(np.longdouble).eps < 1e-18

#: how many pencil eigenvalues per side get the extended-precision polish
REFINE_COUNT = 32


def _polish_tau(st, tau, vectors):
    """Re-evaluate the pencil eigenvalues nearest zero by extended-precision
    Rayleigh quotients.

    The double-precision solve delivers eigenvectors that are accurate
    enough; re-evaluating ``x' L_t x / x' Q_t x`` in longdouble on the
    stored (possibly extended-precision) forms then removes the solve
    roundoff from the eigenvalues that become the tight bounds.  Only
    the ``REFINE_COUNT`` largest eigenvalues of either sign are touched
    -- farther ones yield loose bounds where double accuracy is plenty.
    """
    if not _LONGDOUBLE_OK or tau.size == 0:
        return np.asarray(tau, dtype=float)
    lt = np.asarray(st.Lt, dtype=np.longdouble)
    qt = np.asarray(st.Qt, dtype=np.longdouble)
    k = min(REFINE_COUNT, tau.size)
    polish = np.r_[np.arange(k), np.arange(tau.size - k, tau.size)]
    polish = np.unique(polish)
    out = np.asarray(tau, dtype=float).copy()
    x = vectors[:, polish].astype(np.longdouble)
    num = np.einsum("ij,ij->j", x, lt @ x)
    den = np.einsum("ij,ij->j", x, qt @ x)
    good = den > 0
    out[polish[good]] = (num[good] / den[good]).astype(float)
    return out


def local_counting(forms, t, tol=DEFAULT_TOL):
    """Values of the local counting function at shift t.

    Solves the pencil ``Q_t x = mu^2 M0 x`` and returns
    ``F_j = sqrt(max(mu^2_j, 0))`` ascending together with the
    M0-orthonormal eigenvectors.

    Raises
    ------
    NotPositiveDefiniteError
        If M0 is not positive definite.
    NegativeEigenvalueError
        If the pencil has an eigenvalue below ``-tol * ||Q_t||``; Q_t
        represents a square, so that signals corrupted forms.
    """
    st = shift(forms, t)
    pairs = sym_generalized_eig(st.Qt, forms.M0, tol)
    floor = -tol * np.linalg.norm(st.Qt.astype(float, copy=False), 2)
    if pairs.values[0] < floor:
        raise NegativeEigenvalueError(pairs.values[0], -floor)
    f = np.sqrt(np.maximum(pairs.values, 0.0))
    return CountingValues(t=float(t), F=f, U=pairs.vectors)


def zm_eigen(forms, t, tol=DEFAULT_TOL):
    """Solve and classify the pencil ``tau Q_t x = L_t x`` at shift t.

    The kernel of Q_t (trial directions on which the shifted operator
    vanishes) is deflated first; in exact arithmetic it lies inside the
    kernel of L_t as well, so nothing is lost.  Eigenvalues with
    ``|tau| <= tol * ||L_t|| / ||Q_t||`` count as zero.

    The pencil is solved in double precision; when the platform offers
    a genuine extended-precision ``longdouble`` the eigenvalues nearest
    zero-distance (the ones that turn into tight bounds) are then
    polished with extended-precision Rayleigh quotients evaluated on
    the stored form matrices.  With forms assembled in extended
    precision this pushes the accuracy of the resulting bounds well
    below the double-precision representation floor of ``Q_t``.

    Raises
    ------
    DegenerateShiftError
        If deflation removes the whole subspace.
    NegativeEigenvalueError
        If Q_t is indefinite beyond roundoff.
    NotPositiveDefiniteError
        If the deflated Q_t is still numerically singular.
    """
    st = shift(forms, t)
    qt_d = np.asarray(st.Qt, dtype=float)
    lt_d = np.asarray(st.Lt, dtype=float)
    kernel, complement = kernel_split(qt_d, tol)
    n_inf = kernel.shape[1]
    if n_inf == forms.n:
        raise DegenerateShiftError(
            f"the shifted form vanishes on the whole trial subspace at t={t:g}"
        )
    if n_inf > 0:
        warnings.warn(
            f"deflated a {n_inf}-dimensional kernel of Q_t at t={t:g}",
            DeflationWarning,
            stacklevel=2,
        )
    q = symmetrize(complement.T @ qt_d @ complement)
    l = symmetrize(complement.T @ lt_d @ complement)
    cholesky_spd(q, tol)  # deflated form must be positive definite
    pairs = sym_generalized_eig(l, q, tol)
    vectors = complement @ pairs.vectors
    tau = _polish_tau(st, pairs.values, vectors)

    norm_l = np.linalg.norm(lt_d, 2)
    norm_q = np.linalg.norm(qt_d, 2)
    zero_threshold = tol * (norm_l / norm_q) if norm_q > 0 else 0.0

    order = np.argsort(tau, kind="stable")  # polishing may nudge near-ties
    tau = tau[order]
    vectors = vectors[:, order]

    neg = tau < -zero_threshold
    pos = tau > zero_threshold
    n_minus = int(np.count_nonzero(neg))
    n_plus = int(np.count_nonzero(pos))
    n_zero = tau.size - n_minus - n_plus
    sig = Signature(n_inf=n_inf, n_zero=n_zero, n_minus=n_minus, n_plus=n_plus)

    # tau ascending -> negatives already most-negative-first; positives
    # must be flipped so index 0 is the largest (nearest bound first).
    tau_minus = tau[neg]
    vec_minus = vectors[:, neg]
    tau_plus = tau[pos][::-1]
    vec_plus = vectors[:, pos][:, ::-1]
    return PencilEigen(
        t=float(t),
        tau_minus=tau_minus,
        tau_plus=tau_plus,
        vectors_minus=vec_minus,
        vectors_plus=vec_plus,
        signature=sig,
    )


def signature(forms, t, tol=DEFAULT_TOL):
    """Census (n_inf, n_zero, n_minus, n_plus) of the pencil at shift t.

    The four counts always sum to the trial dimension.  Unlike
    :func:`zm_eigen` this does not fail when the shifted form vanishes
    on the whole subspace (every trial vector an exact eigenvector at
    t): that census is simply ``n_inf = n``.
    """
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", DeflationWarning)
        try:
            return zm_eigen(forms, t, tol).signature
        except DegenerateShiftError:
            return Signature(n_inf=forms.n, n_zero=0, n_minus=0, n_plus=0)


def zm_bounds_one_sided(forms, t, side, tol=DEFAULT_TOL):
    """Certified one-sided bounds from the pencil at shift t.

    Parameters
    ----------
    side : {"left", "right"}
        ``"left"`` returns lower bounds ``t + 1/tau^-_j`` for the
        spectral points below t, nearest first (so the array is
        decreasing).  ``"right"`` returns upper bounds ``t + 1/tau^+_j``
        for the points above t, nearest first (increasing).

    Raises
    ------
    EmptySideError
        If the pencil has no eigenvalues of the requested sign.
    """
    pencil = zm_eigen(forms, t, tol)
    if side == "left":
        tau = pencil.tau_minus
    elif side == "right":
        tau = pencil.tau_plus
    else:
        raise ValueError(f"side must be 'left' or 'right', got {side!r}")
    if tau.size == 0:
        raise EmptySideError(
            f"no spectrum detectable {side} of t={t:g} in this trial subspace"
        )
    return pencil.t + 1.0 / tau


def zm_enclosures(forms, window, j_max, tol=DEFAULT_TOL):
    """Two-sided enclosures inside a window ``(a, b)``.

    Upper bounds are computed at the left end a (for spectral points
    above a), lower bounds at the right end b (for points below b).
    Bounds falling outside the open window are dropped; the k-th
    smallest surviving lower bound is paired with the k-th smallest
    surviving upper bound.  A pair with ``lower > upper`` is returned
    flagged ``inconsistent`` rather than raised, because it conveys that
    the two shifts disagree about how much spectrum the window holds.

    Raises
    ------
    EmptySideError
        Propagated when a window end detects nothing on the required
        side.
    """
    a, b = (float(window[0]), float(window[1]))
    if not a < b:
        raise ValueError(f"window must satisfy a < b, got ({a:g}, {b:g})")
    if j_max < 1:
        raise ValueError(f"j_max must be positive, got {j_max}")

    uppers = zm_bounds_one_sided(forms, a, "right", tol)
    lowers = zm_bounds_one_sided(forms, b, "left", tol)
    uppers = np.sort(uppers[uppers < b])
    lowers = np.sort(lowers[lowers > a])

    count = min(uppers.size, lowers.size, j_max)
    out = []
    for k in range(count):
        low, up = float(lowers[k]), float(uppers[k])
        out.append(
            Enclosure(
                j=k + 1,
                lower=low,
                upper=up,
                t_lower_from=b,
                t_upper_from=a,
                inconsistent=low > up,
            )
        )
    return out


def check_detectability(forms, t, tol=DEFAULT_TOL):
    """Classify which sides of t the trial subspace detects.

    Based on the extreme eigenvalues of the pencil ``(M1, M0)`` (the
    range of Rayleigh quotients over the subspace): spectrum is
    detectable below t iff some quotient lies below t, and above iff
    some quotient lies above.
    """
    pairs = sym_generalized_eig(forms.M1, forms.M0, tol)
    lo, hi = pairs.values[0], pairs.values[-1]
    t = float(t)
    if lo < t and hi > t:
        return Detectability.MIXED
    if lo >= t:
        return Detectability.ALL_ABOVE
    return Detectability.ALL_BELOW


def orthonormalize(basis, m0):
    """M0-orthonormalize basis columns symmetrically.

    Returns ``V = W @ G^{-1/2}`` with ``G = W.T @ M0 @ W``, which is the
    closest M0-orthonormal family to the input columns: the j-th output
    differs from the j-th input by at most ``||I - G^{1/2}||`` in the
    M0 norm.

    Raises
    ------
    NotPositiveDefiniteError
        If the columns are numerically dependent (G not SPD).
    """
    w = np.atleast_2d(np.asarray(basis, dtype=float))
    g = symmetrize(w.T @ m0 @ w)
    return w @ inv_sqrt(g)


def residual_bounds(f_values, distances, isolation, atol=1e-12):
    """Eigenvector residuals from counting values and spectral geometry.

    Parameters
    ----------
    f_values : (m,) array_like
        Counting values ``F_1 <= ... <= F_m`` at the shift of interest.
    distances : (m,) array_like
        Exact distances from the shift to the 1st..m-th nearest spectral
        points.  These are inputs: the caller must know them (e.g. from
        a solvable model); nothing here estimates them.
    isolation : (m,) array_like
        Isolation radii: the distance from the shift beyond which the
        rest of the spectrum lives, for each index.  Must strictly
        exceed the matching distance.

    Returns
    -------
    ResidualBounds
        ``eps[j]`` bounds the angle-type distance from the j-th
        eigenvector to the trial subspace; ``graph_bounds[j] =
        sqrt(F_j^2 - d_j^2 + d_j^2 eps_j^2)`` bounds the graph-norm
        error of the best trial approximation.  If some ``eps_j >= 1``
        the result is flagged invalid (bounds past that index are
        vacuous and reported as ``inf``).

    Raises
    ------
    GapViolationError
        If some isolation radius does not strictly exceed its distance.
    """
    f = np.asarray(f_values, dtype=float)
    d = np.asarray(distances, dtype=float)
    delta = np.asarray(isolation, dtype=float)
    if not (f.shape == d.shape == delta.shape) or f.ndim != 1:
        raise ValueError("f_values, distances, isolation must be 1-d, equal length")
    if np.any(d < 0):
        raise ValueError("distances must be nonnegative")
    if np.any(delta <= d):
        bad = int(np.argmax(delta <= d))
        raise GapViolationError(
            f"isolation radius {delta[bad]:g} at index {bad + 1} does not "
            f"exceed the distance {d[bad]:g}"
        )
    guard = atol * np.maximum(1.0, d)
    if np.any(f < d - guard):
        bad = int(np.argmax(f < d - guard))
        raise ValueError(
            f"counting value F_{bad + 1}={f[bad]:g} lies below the claimed "
            f"distance {d[bad]:g}; the inputs are inconsistent"
        )

    m = f.size
    eps_sq = np.zeros(m)
    eps = np.zeros(m)
    valid = True
    for j in range(m):
        gap = delta[j] ** 2 - d[j] ** 2
        value = max(f[j] ** 2 - d[j] ** 2, 0.0) / gap
        for k in range(j):
            if eps_sq[k] >= 1.0:
                value = np.inf
                break
            value += (eps_sq[k] / (1.0 - eps_sq[k])) * (
                1.0 + (d[j] ** 2 - d[k] ** 2) / gap
            )
        eps_sq[j] = value
        eps[j] = np.sqrt(value) if np.isfinite(value) else np.inf
        if eps_sq[j] >= 1.0:
            valid = False

    graph = np.full(m, np.inf)
    finite = np.isfinite(eps)
    graph[finite] = np.sqrt(
        np.maximum(f[finite] ** 2 - d[finite] ** 2, 0.0)
        + (d[finite] * eps[finite]) ** 2
    )
    return ResidualBounds(eps=eps, graph_bounds=graph, valid=valid)
