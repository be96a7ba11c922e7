"""One-dimensional block-operator model on (0, pi).

The operator acts on pairs ``(u, v)`` as ``A(u, v) = (v', -u')`` with a
Dirichlet condition on ``u`` at both ends and ``v`` free.  It is
self-adjoint with spectrum ``{0} union {+-k : k = 1, 2, ...}``, every
eigenvalue simple: squaring decouples the pair into a Dirichlet
Laplacian for ``u`` and a Neumann Laplacian for ``v``, and the kernel is
spanned by ``(0, 1)``.

Discretizing both components with continuous Lagrange elements gives a
genuinely pollution-prone Galerkin pencil, which makes the model a good
test bed for the certified bound machinery.  The reference-element
integrals are evaluated in exact rational arithmetic and the element
loop accumulates in extended precision, so the assembled matrices carry
no quadrature error at all and only O(1e-19) rounding: every bound
computed from them is a true statement about the operator, and widths
can be resolved well below what double-precision assembly allows.
"""

from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .errors import UnsupportedOrderError
from .forms import TrialForms
from .linalg import symmetrize

#: right end of the interval
LENGTH = np.pi

SUPPORTED_ORDERS = (1, 2, 3)


@dataclass
class Mesh1D:
    """Partition of (0, pi) into elements given by sorted node positions."""

    nodes: np.ndarray

    def __post_init__(self):
        self.nodes = np.asarray(self.nodes, dtype=float)
        if self.nodes.ndim != 1 or self.nodes.size < 3:
            raise ValueError("need at least two elements")
        if np.any(np.diff(self.nodes) <= 0):
            raise ValueError("mesh nodes must be strictly increasing")

    @property
    def n_elems(self):
        return self.nodes.size - 1

    @property
    def h(self):
        """Largest element length."""
        return float(np.max(np.diff(self.nodes)))


def uniform_mesh(n_elems, jitter=0.0, seed=None):
    """Uniform mesh on (0, pi), optionally with jittered interior nodes.

    Each interior node is displaced by at most ``jitter * h / 2`` where
    ``h = pi / n_elems``, so element lengths stay positive for any
    ``jitter < 1``.  The same ``seed`` always reproduces the same mesh.
    """
    if n_elems < 2:
        raise ValueError(f"need at least 2 elements, got {n_elems}")
    if not 0.0 <= jitter < 1.0:
        raise ValueError(f"jitter must lie in [0, 1), got {jitter}")
    nodes = np.linspace(0.0, LENGTH, n_elems + 1)
    if jitter > 0.0:
        h = LENGTH / n_elems
        rng = np.random.default_rng(seed)
        nodes[1:-1] += rng.uniform(-1.0, 1.0, n_elems - 1) * (0.5 * jitter * h)
    return Mesh1D(nodes)


@dataclass
class FEModel:
    """Assembled trial forms for the 1D model.

    The trial basis is ordered u-block first (hat-type functions with the
    boundary dofs removed), then the v-block (all nodal functions).
    ``u_nodes`` maps u dofs to global node indices; ``x`` holds all
    global node positions including the eliminated boundary ones.
    """

    mesh: Mesh1D
    order: int
    forms: TrialForms
    x: np.ndarray = field(repr=False)
    u_nodes: np.ndarray = field(repr=False)

    @property
    def n_u(self):
        return self.u_nodes.size

    @property
    def n_v(self):
        return self.x.size


def _poly_mul(p, q):
    out = [Fraction(0)] * (len(p) + len(q) - 1)
    for i, pi in enumerate(p):
        for j, qj in enumerate(q):
            out[i + j] += pi * qj
    return out


def _poly_deriv(p):
    return [k * p[k] for k in range(1, len(p))]


def _poly_int01(p):
    return sum((c / (k + 1) for k, c in enumerate(p)), Fraction(0))


def _lagrange_coeffs(r):
    """Exact coefficients of the equispaced Lagrange basis on [0, 1].

    Returns ``r + 1`` coefficient lists (ascending powers, `Fraction`
    entries) for the basis tied to the nodes ``a / r``.
    """
    nodes = [Fraction(a, r) for a in range(r + 1)]
    basis = []
    for a, xa in enumerate(nodes):
        poly = [Fraction(1)]
        denom = Fraction(1)
        for k, xk in enumerate(nodes):
            if k == a:
                continue
            poly = _poly_mul(poly, [-xk, Fraction(1)])
            denom *= xa - xk
        basis.append([c / denom for c in poly])
    return basis


def _to_longdouble(rows):
    # numerator and denominator stay far below 2**63 for the supported
    # orders, so both convert exactly
    return np.array(
        [
            [np.longdouble(f.numerator) / np.longdouble(f.denominator) for f in row]
            for row in rows
        ]
    )


def _reference_integrals(r):
    """Reference integrals of the degree-``r`` Lagrange basis on [0, 1].

    Returns ``(mass, stiff, deriv)`` in extended precision, where
    ``mass[a, b] = int l_a l_b``, ``stiff[a, b] = int l_a' l_b'`` and
    ``deriv[a, b] = int l_a' l_b``.  The integrals are computed in exact
    rational arithmetic and rounded once on conversion, so ``mass`` and
    ``stiff`` come out exactly symmetric.
    """
    basis = _lagrange_coeffs(r)
    dbasis = [_poly_deriv(p) for p in basis]
    n = r + 1
    mass = [[_poly_int01(_poly_mul(basis[a], basis[b])) for b in range(n)] for a in range(n)]
    stiff = [[_poly_int01(_poly_mul(dbasis[a], dbasis[b])) for b in range(n)] for a in range(n)]
    deriv = [[_poly_int01(_poly_mul(dbasis[a], basis[b])) for b in range(n)] for a in range(n)]
    return _to_longdouble(mass), _to_longdouble(stiff), _to_longdouble(deriv)


def assemble_1d(mesh, order):
    """Assemble the trial forms on a mesh with Lagrange elements.

    Parameters
    ----------
    mesh : Mesh1D
    order : int
        Polynomial degree, one of 1, 2, 3.

    Returns
    -------
    FEModel
        The form matrices are exactly symmetric, carry no quadrature
        error (the piecewise-polynomial integrands are integrated in
        exact rational arithmetic on the reference element) and are
        accumulated in extended precision.

    Raises
    ------
    UnsupportedOrderError
        For any other degree.
    """
    if order not in SUPPORTED_ORDERS:
        raise UnsupportedOrderError(
            f"order {order} not supported, choose from {SUPPORTED_ORDERS}"
        )
    r = order
    mass_ref, stiff_ref, deriv_ref = _reference_integrals(r)

    n_nodes = r * mesh.n_elems + 1
    x = np.empty(n_nodes)
    mass = np.zeros((n_nodes, n_nodes), dtype=np.longdouble)
    stiff = np.zeros((n_nodes, n_nodes), dtype=np.longdouble)
    deriv = np.zeros((n_nodes, n_nodes), dtype=np.longdouble)  # int phi_a' phi_b

    for e in range(mesh.n_elems):
        left, right = mesh.nodes[e], mesh.nodes[e + 1]
        h = np.longdouble(right) - np.longdouble(left)
        dofs = np.arange(r * e, r * e + r + 1)
        x[dofs] = left + (right - left) * np.linspace(0.0, 1.0, r + 1)
        mass[np.ix_(dofs, dofs)] += h * mass_ref
        stiff[np.ix_(dofs, dofs)] += stiff_ref / h
        deriv[np.ix_(dofs, dofs)] += deriv_ref

    u_nodes = np.arange(1, n_nodes - 1)  # Dirichlet dofs eliminated

    zero_uu = np.zeros((u_nodes.size, u_nodes.size), dtype=np.longdouble)
    zero_vv = np.zeros((n_nodes, n_nodes), dtype=np.longdouble)
    cross = -deriv[np.ix_(u_nodes, np.arange(n_nodes))]
    m0 = _block_diag(mass[np.ix_(u_nodes, u_nodes)], mass)
    m1 = np.block([[zero_uu, cross], [cross.T, zero_vv]])
    m2 = _block_diag(stiff[np.ix_(u_nodes, u_nodes)], stiff)

    forms = TrialForms(symmetrize(m0), m1, symmetrize(m2))
    return FEModel(mesh=mesh, order=order, forms=forms, x=x, u_nodes=u_nodes)


def _block_diag(a, b):
    out = np.zeros(
        (a.shape[0] + b.shape[0], a.shape[1] + b.shape[1]), dtype=np.result_type(a, b)
    )
    out[: a.shape[0], : a.shape[1]] = a
    out[a.shape[0] :, a.shape[1] :] = b
    return out


def exact_spectrum_1d(k_max):
    """The eigenvalues in [-k_max, k_max]: the integers, all simple."""
    if k_max < 1:
        raise ValueError("k_max must be at least 1")
    k = np.arange(1, int(k_max) + 1, dtype=float)
    return np.concatenate([-k[::-1], [0.0], k])
