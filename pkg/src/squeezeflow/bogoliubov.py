"""N-mode Bogoliubov transformations and quasi-free states.

Conventions: ``phi = [[U, conj(V)], [V, conj(U)]]`` acts on ``C^N + C^N``;
``S = diag(1, -1)``; ``J`` is the antilinear swap ``f + g -> conj(g) + conj(f)``,
which on matrices reads ``J M J = X conj(M) X`` with ``X`` the block swap.
A quasi-free state is a ``2N x 2N`` matrix ``P`` with ``P^* S = S P``,
``S P >= 0`` and ``P + J P J = 1``; it transforms as ``P -> (phi^*)^{-1} P phi^*``.
"""
import warnings
from dataclasses import dataclass

import numpy as np

DEFAULT_TOL = 1e-9
COND_WARN = 1e-10


class BogoliubovError(ValueError):
    """Input violates the symplectic or state conditions."""


def _dagger(m):
    return m.conj().T


def metric(n):
    """The indefinite metric ``S = diag(1_N, -1_N)``."""
    return np.diag(np.concatenate([np.ones(n), -np.ones(n)])).astype(complex)


def swap(n):
    """Block swap ``X``; the antilinear ``J`` is ``X`` composed with conjugation."""
    z = np.zeros((n, n))
    e = np.eye(n)
    return np.block([[z, e], [e, z]]).astype(complex)


def j_conjugate(m):
    """``J M J`` for a ``2N x 2N`` matrix ``M``."""
    n = m.shape[0] // 2
    x = swap(n)
    return x @ m.conj() @ x


@dataclass(frozen=True, eq=False)
class BogoliubovN:
    """Bogoliubov transformation with blocks ``U`` and ``V`` (both ``N x N``)."""

    U: np.ndarray
    V: np.ndarray

    def __post_init__(self):
        U = np.atleast_2d(np.asarray(self.U, dtype=complex))
        V = np.atleast_2d(np.asarray(self.V, dtype=complex))
        if U.shape != V.shape or U.shape[0] != U.shape[1]:
            raise ValueError(f"U and V must be square and of equal size, got {U.shape} and {V.shape}")
        object.__setattr__(self, "U", U)
        object.__setattr__(self, "V", V)

    @property
    def n_modes(self):
        return self.U.shape[0]

    @property
    def matrix(self):
        return np.block([[self.U, self.V.conj()], [self.V, self.U.conj()]])

    @property
    def adjoint(self):
        """``phi^* = [[U^*, V^*], [V^t, U^t]]``."""
        return _dagger(self.matrix)

    @classmethod
    def from_matrix(cls, m, tol=DEFAULT_TOL):
        """Read ``U, V`` off a ``2N x 2N`` matrix, checking the block pattern."""
        m = np.asarray(m, dtype=complex)
        n = m.shape[0] // 2
        if m.shape != (2 * n, 2 * n):
            raise ValueError(f"expected an even square matrix, got {m.shape}")
        U, V = m[:n, :n], m[n:, :n]
        if (np.max(np.abs(m[:n, n:] - V.conj()), initial=0.0) > tol
                or np.max(np.abs(m[n:, n:] - U.conj()), initial=0.0) > tol):
            raise BogoliubovError("matrix does not commute with J")
        return cls(U, V)

    @classmethod
    def identity(cls, n):
        return cls(np.eye(n), np.zeros((n, n)))

    @classmethod
    def gauge(cls, w):
        """Mode rotation ``U = w`` (unitary), ``V = 0``."""
        w = np.asarray(w, dtype=complex)
        return cls(w, np.zeros_like(w))


@dataclass(frozen=True, eq=False)
class QuasiFreeState:
    """Two-point matrix ``P`` of a quasi-free state on ``N`` modes."""

    P: np.ndarray

    def __post_init__(self):
        P = np.asarray(self.P, dtype=complex)
        if P.ndim != 2 or P.shape[0] != P.shape[1] or P.shape[0] % 2:
            raise ValueError(f"P must be an even square matrix, got shape {P.shape}")
        object.__setattr__(self, "P", P)

    @property
    def n_modes(self):
        return self.P.shape[0] // 2

    def two_point(self, xi, zeta):
        """``omega(A(xi) A^*(zeta)) = <xi, S P zeta>``."""
        s = metric(self.n_modes)
        return np.vdot(xi, s @ self.P @ zeta)

    def violations(self, tol=DEFAULT_TOL):
        """Conditions the matrix fails, as human-readable strings."""
        P = self.P
        n = self.n_modes
        s = metric(n)
        out = []
        herm = np.max(np.abs(_dagger(P) @ s - s @ P))
        if herm > tol:
            out.append(f"P^* S != S P (max deviation {herm:.3e})")
        sp = s @ P
        low = np.linalg.eigvalsh(0.5 * (sp + _dagger(sp)))[0]
        if low < -tol:
            out.append(f"S P not positive (min eigenvalue {low:.3e})")
        comp = np.max(np.abs(P + j_conjugate(P) - np.eye(2 * n)))
        if comp > tol:
            out.append(f"P + J P J != 1 (max deviation {comp:.3e})")
        return out


def validate(phi, tol=DEFAULT_TOL):
    """List the violated Bogoliubov relations ``phi S phi^* = S`` and ``J phi^* = phi^* J``.

    ``phi`` is a :class:`BogoliubovN` or a raw ``2N x 2N`` array. An empty list
    means both relations hold within ``tol`` in the max-norm.
    """
    m = phi.matrix if isinstance(phi, BogoliubovN) else np.asarray(phi, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] % 2:
        raise ValueError(f"expected an even square matrix, got shape {m.shape}")
    n = m.shape[0] // 2
    s = metric(n)
    out = []
    sym = np.max(np.abs(m @ s @ _dagger(m) - s))
    if sym > tol:
        out.append(f"phi S phi^* != S (max deviation {sym:.3e})")
    adj = _dagger(m)
    comm = np.max(np.abs(j_conjugate(adj) - adj))
    if comm > tol:
        out.append(f"J phi^* != phi^* J (max deviation {comm:.3e})")
    return out


def _require(a, b):
    if a.n_modes != b.n_modes:
        raise ValueError(f"mode counts differ: {a.n_modes} vs {b.n_modes}")


def compose(phi2, phi1):
    """``phi2 @ phi1`` (``phi1`` acts first)."""
    _require(phi2, phi1)
    return BogoliubovN(phi2.U @ phi1.U + phi2.V.conj() @ phi1.V,
                       phi2.V @ phi1.U + phi2.U.conj() @ phi1.V)


def inverse(phi):
    """``phi^{-1} = S phi^* S``, i.e. blocks ``U^*`` and ``-V^t``."""
    return BogoliubovN(_dagger(phi.U), -phi.V.T)


def act_on_state(phi, state, tol=DEFAULT_TOL):
    """Transformed state ``(phi^*)^{-1} P phi^*``, with ``(phi^*)^{-1} = S phi S``."""
    _require(phi, state)
    bad = validate(phi, tol)
    if bad:
        raise BogoliubovError("; ".join(bad))
    s = metric(phi.n_modes)
    m = phi.matrix
    return QuasiFreeState(s @ m @ s @ state.P @ _dagger(m))


def gauge_state(rho_diag):
    """Gauge-invariant state ``P = diag(1 + rho, -rho)`` for occupations ``rho >= 0``."""
    rho = np.asarray(rho_diag, dtype=float).ravel()
    if np.any(rho < 0):
        raise ValueError("occupations must be non-negative")
    return QuasiFreeState(np.diag(np.concatenate([1.0 + rho, -rho])))


def vacuum(n):
    return gauge_state(np.zeros(n))


def _hermitian_sqrt(h):
    w, v = np.linalg.eigh(0.5 * (h + _dagger(h)))
    return (v * np.sqrt(np.clip(w, 0.0, None))) @ _dagger(v), w


def diagonalize(state, tol=DEFAULT_TOL):
    """Bring a quasi-free state to gauge-invariant diagonal form.

    Finds ``phi`` with ``phi^* P (phi^*)^{-1} = diag(1 + rho, -rho)``. The
    eigenvectors ``v_i`` of ``P - 1/2`` for its positive eigenvalues are built as
    ``S (S P~)^{1/2} chi_i`` from the Hermitian matrix ``(S P~)^{1/2} S (S P~)^{1/2}``;
    orthonormal ``chi`` make the ``v_i`` orthonormal for ``S`` even inside
    degenerate eigenspaces, and ``J v_i`` complete the basis.

    Returns:
        ``(phi, rho)`` with ``rho`` sorted ascending.

    Raises:
        BogoliubovError: if ``S (P - 1/2)`` is not positive definite.
    """
    n = state.n_modes
    s = metric(n)
    sp = s @ (state.P - 0.5 * np.eye(2 * n))
    root, spec = _hermitian_sqrt(sp)
    if spec[0] <= tol:
        raise BogoliubovError(f"S(P - 1/2) is not positive definite (min eigenvalue {spec[0]:.3e})")
    lam, chi = np.linalg.eigh(root @ s @ root)
    # Exactly N eigenvalues are positive; eigh sorts ascending.
    lam, chi = lam[n:], chi[:, n:]
    vecs = s @ root @ chi / np.sqrt(lam)
    # v_i = A_i + B_i and J v_i = conj(B_i) + conj(A_i); phi = S [v | J v] S.
    a_blk, b_blk = vecs[:n], vecs[n:]
    phi = BogoliubovN(a_blk, -b_blk)
    rho = lam - 0.5
    if np.any(rho < -tol):
        raise BogoliubovError(f"negative occupation {rho.min():.3e}")
    return phi, np.clip(rho, 0.0, None)


def is_pure(state, tol=DEFAULT_TOL):
    """``True`` iff ``P`` is a projection, i.e. the state is a squeezed (pure) state."""
    return bool(np.max(np.abs(state.P @ state.P - state.P)) <= tol)


def _check_z(Z, tol=1e-12):
    Z = np.atleast_2d(np.asarray(Z, dtype=complex))
    if Z.shape[0] != Z.shape[1]:
        raise ValueError(f"Z must be square, got {Z.shape}")
    if np.max(np.abs(Z - Z.T), initial=0.0) > tol * max(1.0, np.max(np.abs(Z), initial=0.0)):
        raise BogoliubovError("Z must be symmetric")
    norm = np.linalg.norm(Z, 2) if Z.size else 0.0
    if norm >= 1.0:
        raise BogoliubovError(f"Z must be a strict contraction, got operator norm {norm}")
    return Z


def z_matrix(phi):
    """``Z = -(U^*)^{-1} V^*``; the squeezed state obeys ``(a + Z a^*) psi = 0``."""
    return -np.linalg.solve(_dagger(phi.U), _dagger(phi.V))


def phi_from_z(Z):
    """Canonical Bogoliubov matrix for ``Z``: ``U = (1 - Z Z^*)^{-1/2}`` (positive root), ``V = -conj(Z) U``."""
    Z = _check_z(Z)
    n = Z.shape[0]
    w, v = np.linalg.eigh(np.eye(n) - Z @ _dagger(Z))
    if w[0] < COND_WARN:
        warnings.warn(f"1 - Z Z^* is nearly singular (min eigenvalue {w[0]:.2e})", RuntimeWarning, stacklevel=2)
    U = (v / np.sqrt(w)) @ _dagger(v)
    return BogoliubovN(U, -Z.conj() @ U)


def _symmetric_sqrt_unitary(g):
    """Principal-branch square root of a unitary, rotated away from the branch cut.

    A primary matrix function of a symmetric matrix is symmetric, so this
    preserves the symmetry of ``g`` on degenerate blocks.
    """
    w, v = np.linalg.eig(g)
    angles = np.sort(np.angle(w))
    gaps = np.diff(np.concatenate([angles, angles[:1] + 2 * np.pi]))
    k = int(np.argmax(gaps))
    cut = angles[k] + 0.5 * gaps[k]
    # Rotate so the largest gap between eigen-angles sits on the negative axis.
    shift = np.exp(1j * (np.pi - cut))
    ws = w * shift
    root = (v * np.sqrt(ws)) @ np.linalg.inv(v)
    return root / np.sqrt(shift)


def takagi(Z):
    """Takagi factorization ``Z = W^t D W`` with ``W`` unitary and ``D`` descending.

    From the SVD ``Z = X diag(d) Y^*``, symmetry forces ``conj(Y) = X G`` with ``G``
    a unitary that is symmetric on each block of equal singular values; then
    ``Q = X G^{1/2}`` gives ``Z = Q diag(d) Q^t`` and ``W = Q^t``.

    Returns:
        ``(W, d)`` with ``d`` the singular values as a 1-D array.
    """
    Z = np.atleast_2d(np.asarray(Z, dtype=complex))
    if np.max(np.abs(Z - Z.T), initial=0.0) > 1e-12 * max(1.0, np.max(np.abs(Z), initial=0.0)):
        raise BogoliubovError("Takagi factorization needs a symmetric matrix")
    n = Z.shape[0]
    if not np.any(Z):
        return np.eye(n, dtype=complex), np.zeros(n)
    x, d, yh = np.linalg.svd(Z)
    g = _dagger(x) @ yh.T
    # Couplings between blocks of distinct singular values are pure rounding noise.
    scale = max(d[0], 1.0)
    same = np.abs(d[:, None] - d[None, :]) <= 1e-9 * scale
    g = np.where(same, g, 0.0)
    q = x @ _symmetric_sqrt_unitary(g)
    return q.T, d


def norm_constant(Z):
    """Squared norm ``det(1 - Z Z^*)^{-1/2}`` of ``exp(-(a^*, Z a^*)/2)|0>``."""
    Z = _check_z(Z)
    sign, logdet = np.linalg.slogdet(np.eye(Z.shape[0]) - Z @ _dagger(Z))
    return float(np.exp(-0.5 * logdet))


def norm_constant_takagi(Z):
    """Same quantity as :func:`norm_constant`, as ``prod (1 - D_i^2)^{-1/2}``."""
    _, d = takagi(_check_z(Z))
    return float(np.prod((1.0 - d * d) ** -0.5))


def thermal_occupations(rho, n_max):
    """Occupation law ``p_k = (1 - q) q^k`` of one mode with mean ``rho``, for ``k <= n_max``."""
    if n_max < 1:
        raise ValueError("n_max must be at least 1")
    if rho < 0:
        raise ValueError("rho must be non-negative")
    q = rho / (1.0 + rho)
    k = np.arange(n_max + 1)
    return (1.0 - q) * q ** k


def write_matrix(fh, m):
    """Write a square complex matrix: a line with its size, then rows of ``re,im`` pairs."""
    m = np.atleast_2d(np.asarray(m, dtype=complex))
    if m.shape[0] != m.shape[1]:
        raise ValueError("only square matrices are supported")
    fh.write(f"{m.shape[0]}\n")
    for row in m:
        fh.write(" ".join(f"{v.real:.17g},{v.imag:.17g}" for v in row) + "\n")


def read_matrix(fh):
    """Read one matrix written by :func:`write_matrix`; returns ``None`` at end of input."""
    header = fh.readline()
    while header and not header.strip():
        header = fh.readline()
    if not header:
        return None
    n = int(header.strip())
    rows = []
    for _ in range(n):
        entries = fh.readline().split()
        if len(entries) != n:
            raise ValueError(f"expected {n} entries per row, got {len(entries)}")
        rows.append([complex(*map(float, e.split(","))) for e in entries])
    return np.array(rows, dtype=complex).reshape(n, n)


def write_bogoliubov(fh, phi):
    """Write ``U`` followed by ``V``."""
    write_matrix(fh, phi.U)
    write_matrix(fh, phi.V)


def read_bogoliubov(fh):
    U = read_matrix(fh)
    V = read_matrix(fh)
    if U is None or V is None:
        raise ValueError("expected two matrices (U then V)")
    return BogoliubovN(U, V)
