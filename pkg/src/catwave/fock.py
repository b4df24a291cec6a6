"""Truncated multimode Fock-space linear algebra.

Everything downstream (Lindblad evolution, temporal-mode analysis, capture,
breeding) works with the three value types defined here:

* :class:`FockSpace` -- a tuple of per-mode truncation dimensions,
* :class:`Operator` -- a dense complex matrix bound to a space,
* :class:`QuantumState` -- a pure vector or a density matrix on a space.

Conventions fixed once and used everywhere:

* quadratures ``q = (a + a^dag)/sqrt(2)``, ``p = i(a^dag - a)/sqrt(2)``,
* Wigner function ``W(beta) = (2/pi) Tr[rho D(2 beta) P]`` with parity ``P``,
  normalised so that the Riemann sum of ``W`` over the complex plane is 1,
* the global phase of every constructed state is fixed by making its
  lowest-index non-negligible Fock amplitude real positive.

State constructors renormalise after truncation and attach the lost norm as
``truncation_loss``; they warn below 0.999 retained norm and raise
:class:`~catwave.errors.TruncationError` below 0.99.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import expm, sqrtm
from scipy.special import gammaln, iv, jv

from .errors import DimensionMismatchError, TruncationError

__all__ = [
    "FockSpace",
    "Operator",
    "QuantumState",
    "annihilation_op",
    "creation_op",
    "number_op",
    "identity_op",
    "mode_matrix",
    "embed_mode_op",
    "vacuum_state",
    "fock_state",
    "coherent_state",
    "cat_state",
    "pair_coherent_state",
    "pair_cat_state",
    "displacement_op",
    "squeeze_op",
    "parity_op",
    "fidelity",
    "wigner",
    "partial_trace",
    "expectation",
    "trace_distance",
]

TRUNCATION_WARN = 0.999
TRUNCATION_ERROR = 0.99


@dataclass(frozen=True)
class FockSpace:
    """Tensor product of truncated bosonic modes.

    ``mode_dims[m]`` is the matrix dimension of mode ``m`` (photon cutoff
    plus one); the total Hilbert dimension is their product.
    """

    mode_dims: tuple[int, ...]

    def __init__(self, mode_dims):
        dims = tuple(int(d) for d in np.atleast_1d(mode_dims))
        if len(dims) == 0:
            raise ValueError("need at least one mode")
        if any(d < 2 for d in dims):
            raise ValueError(f"every mode dimension must be >= 2, got {dims}")
        object.__setattr__(self, "mode_dims", dims)

    @property
    def n_modes(self) -> int:
        return len(self.mode_dims)

    @property
    def dim(self) -> int:
        return int(np.prod(self.mode_dims))

    def extended(self, extra_dims) -> "FockSpace":
        """Space with additional modes appended (used by the capture stage)."""
        return FockSpace(self.mode_dims + tuple(int(d) for d in np.atleast_1d(extra_dims)))


@dataclass
class Operator:
    """Dense operator on a :class:`FockSpace`."""

    space: FockSpace
    matrix: np.ndarray

    def __post_init__(self):
        self.matrix = np.asarray(self.matrix, dtype=complex)
        if self.matrix.shape != (self.space.dim, self.space.dim):
            raise DimensionMismatchError(
                f"matrix shape {self.matrix.shape} does not match space dim {self.space.dim}"
            )

    def dagger(self) -> "Operator":
        return Operator(self.space, self.matrix.conj().T)

    def __matmul__(self, other):
        if isinstance(other, Operator):
            _require_same_space(self.space, other.space)
            return Operator(self.space, self.matrix @ other.matrix)
        return self.matrix @ other

    def __add__(self, other):
        _require_same_space(self.space, other.space)
        return Operator(self.space, self.matrix + other.matrix)

    def __sub__(self, other):
        _require_same_space(self.space, other.space)
        return Operator(self.space, self.matrix - other.matrix)

    def __mul__(self, scalar):
        return Operator(self.space, scalar * self.matrix)

    __rmul__ = __mul__


@dataclass
class QuantumState:
    """Pure vector or density matrix on a :class:`FockSpace`.

    Invariants (checked on construction unless ``unsafe=True``): pure states
    are normalised to 1e-10; density matrices are Hermitian to 1e-12, unit
    trace to 1e-8 and have min eigenvalue >= -1e-8.
    """

    space: FockSpace
    data: np.ndarray
    pure: bool
    truncation_loss: float = 0.0
    unsafe: bool = field(default=False, repr=False)

    def __post_init__(self):
        self.data = np.asarray(self.data, dtype=complex)
        D = self.space.dim
        if self.pure:
            if self.data.shape != (D,):
                raise DimensionMismatchError(f"pure state shape {self.data.shape} != ({D},)")
        else:
            if self.data.shape != (D, D):
                raise DimensionMismatchError(f"density matrix shape {self.data.shape} != ({D},{D})")
        if not self.unsafe:
            self.validate()

    def validate(self, norm_tol=1e-10, herm_tol=1e-12, trace_tol=1e-8, eig_tol=1e-8):
        if self.pure:
            nrm = np.linalg.norm(self.data)
            if abs(nrm - 1.0) > norm_tol:
                raise ValueError(f"pure state norm {nrm} deviates from 1 by more than {norm_tol}")
        else:
            herm = np.max(np.abs(self.data - self.data.conj().T))
            if herm > herm_tol:
                raise ValueError(f"density matrix not Hermitian: max deviation {herm:.2e}")
            tr = np.trace(self.data).real
            if abs(tr - 1.0) > trace_tol:
                raise ValueError(f"density matrix trace {tr} deviates from 1")
            wmin = float(np.linalg.eigvalsh(self.data)[0])
            if wmin < -eig_tol:
                raise ValueError(f"density matrix min eigenvalue {wmin:.2e} < -{eig_tol}")
        return self

    def density_matrix(self) -> np.ndarray:
        if self.pure:
            return np.outer(self.data, self.data.conj())
        return self.data

    def as_mixed(self) -> "QuantumState":
        if self.pure:
            return QuantumState(self.space, self.density_matrix(), pure=False,
                                truncation_loss=self.truncation_loss, unsafe=True)
        return self


def _require_same_space(s1: FockSpace, s2: FockSpace):
    if s1.mode_dims != s2.mode_dims:
        raise DimensionMismatchError(f"spaces differ: {s1.mode_dims} vs {s2.mode_dims}")


def _check_mode(space: FockSpace, mode: int):
    if not 0 <= mode < space.n_modes:
        raise DimensionMismatchError(f"mode {mode} out of range for {space.n_modes} modes")


def mode_matrix(kind: str, dim: int) -> np.ndarray:
    """Single-mode matrix: 'a', 'adag', 'n' or 'i'."""
    if kind == "a":
        return np.diag(np.sqrt(np.arange(1.0, dim)), 1).astype(complex)
    if kind == "adag":
        return np.diag(np.sqrt(np.arange(1.0, dim)), -1).astype(complex)
    if kind == "n":
        return np.diag(np.arange(dim)).astype(complex)
    if kind == "i":
        return np.eye(dim, dtype=complex)
    raise ValueError(f"unknown mode matrix kind {kind!r}")


def embed_mode_op(space: FockSpace, factors: dict[int, np.ndarray]) -> np.ndarray:
    """Kronecker-embed per-mode factors (identity on unmentioned modes)."""
    for m in factors:
        _check_mode(space, m)
    out = None
    for m, d in enumerate(space.mode_dims):
        f = np.asarray(factors.get(m, np.eye(d)), dtype=complex)
        if f.shape != (d, d):
            raise DimensionMismatchError(f"factor for mode {m} has shape {f.shape}, expected ({d},{d})")
        out = f if out is None else np.kron(out, f)
    return out


def annihilation_op(space: FockSpace, mode: int = 0) -> Operator:
    """Ladder operator ``a`` on one mode, identity on the others."""
    _check_mode(space, mode)
    return Operator(space, embed_mode_op(space, {mode: mode_matrix("a", space.mode_dims[mode])}))


def creation_op(space: FockSpace, mode: int = 0) -> Operator:
    return annihilation_op(space, mode).dagger()


def number_op(space: FockSpace, mode: int = 0) -> Operator:
    _check_mode(space, mode)
    return Operator(space, embed_mode_op(space, {mode: mode_matrix("n", space.mode_dims[mode])}))


def identity_op(space: FockSpace) -> Operator:
    return Operator(space, np.eye(space.dim, dtype=complex))


def _fix_global_phase(vec: np.ndarray) -> np.ndarray:
    mags = np.abs(vec)
    big = np.nonzero(mags > 1e-12 * mags.max())[0]
    if big.size == 0:
        return vec
    return vec * np.exp(-1j * np.angle(vec[big[0]]))


def _finalize_pure(space, vec, what: str) -> QuantumState:
    """Renormalise a truncated construction and enforce the loss policy."""
    nrm2 = float(np.vdot(vec, vec).real)
    loss = 1.0 - nrm2
    if nrm2 < TRUNCATION_ERROR:
        raise TruncationError(
            f"{what}: only {nrm2:.4f} of the norm fits the cutoff {space.mode_dims}; "
            "increase the truncation"
        )
    if nrm2 < TRUNCATION_WARN:
        warnings.warn(f"{what}: truncated norm {nrm2:.5f} < {TRUNCATION_WARN}", stacklevel=3)
    vec = _fix_global_phase(vec / np.sqrt(nrm2))
    return QuantumState(space, vec, pure=True, truncation_loss=max(loss, 0.0))


def vacuum_state(space: FockSpace) -> QuantumState:
    vec = np.zeros(space.dim, dtype=complex)
    vec[0] = 1.0
    return QuantumState(space, vec, pure=True)


def fock_state(space: FockSpace, occupations) -> QuantumState:
    occ = tuple(int(n) for n in np.atleast_1d(occupations))
    if len(occ) != space.n_modes:
        raise DimensionMismatchError("one occupation per mode required")
    idx = 0
    for n, d in zip(occ, space.mode_dims):
        if not 0 <= n < d:
            raise TruncationError(f"occupation {n} outside cutoff {d}")
        idx = idx * d + n
    vec = np.zeros(space.dim, dtype=complex)
    vec[idx] = 1.0
    return QuantumState(space, vec, pure=True)


def _coherent_amplitudes(alpha: complex, dim: int) -> np.ndarray:
    """Unnormalised truncated expansion <n|alpha> = e^{-|a|^2/2} a^n/sqrt(n!)."""
    n = np.arange(dim)
    if alpha == 0:
        out = np.zeros(dim, dtype=complex)
        out[0] = 1.0
        return out
    logmag = -abs(alpha) ** 2 / 2 + n * np.log(abs(alpha)) - 0.5 * gammaln(n + 1.0)
    return np.exp(logmag) * np.exp(1j * n * np.angle(alpha))


def coherent_state(space: FockSpace, mode_amplitudes) -> QuantumState:
    """Product of coherent states, one amplitude per mode."""
    amps = np.atleast_1d(np.asarray(mode_amplitudes, dtype=complex))
    if amps.shape != (space.n_modes,):
        raise DimensionMismatchError("one amplitude per mode required")
    vec = None
    for alpha, d in zip(amps, space.mode_dims):
        c = _coherent_amplitudes(alpha, d)
        vec = c if vec is None else np.kron(vec, c)
    return _finalize_pure(space, vec, f"coherent_state(alpha={amps})")


def cat_state(space: FockSpace, alpha: complex, legs: int = 2, parity: str = "even") -> QuantumState:
    """Superposition of ``legs`` coherent states equally spaced in phase.

    ``legs=2``: ``|alpha> +/- |-alpha>``.
    ``legs=4`` even: ``|alpha> + |-alpha> + |i alpha> + |-i alpha>``;
    odd: ``|alpha> - |-alpha> + i|i alpha> - i|-i alpha>`` (the family obtained
    by applying ``a`` to the even member).
    """
    if space.n_modes != 1:
        raise DimensionMismatchError("cat_state is single mode")
    if legs not in (2, 4):
        raise ValueError("legs must be 2 or 4")
    if parity not in ("even", "odd"):
        raise ValueError("parity must be 'even' or 'odd'")
    d = space.mode_dims[0]
    alpha = complex(alpha)
    if legs == 2:
        signs = [1.0, -1.0 if parity == "odd" else 1.0]
        comps = [alpha, -alpha]
        weights = [1.0, signs[1]]
    else:
        comps = [alpha, -alpha, 1j * alpha, -1j * alpha]
        if parity == "even":
            weights = [1.0, 1.0, 1.0, 1.0]
        else:
            weights = [1.0, -1.0, 1j, -1j]
    vec = np.zeros(d, dtype=complex)
    for w, c in zip(weights, comps):
        vec += w * _coherent_amplitudes(c, d)
    if np.linalg.norm(vec) < 1e-14:  # odd cat at alpha=0 is empty
        raise ValueError("cat state vanishes for this (alpha, parity) combination")
    return _finalize_pure(space, vec, f"cat_state(alpha={alpha}, legs={legs}, {parity})")


def pair_coherent_state(space: FockSpace, alpha: complex) -> QuantumState:
    """Two-mode eigenstate of a1 a2: amplitudes alpha^(2n)/n! on |n,n>."""
    if space.n_modes != 2 or space.mode_dims[0] != space.mode_dims[1]:
        raise DimensionMismatchError("pair_coherent_state needs two modes of equal dimension")
    d = space.mode_dims[0]
    vec = np.zeros(space.dim, dtype=complex)
    alpha = complex(alpha)
    for n in range(d):
        if alpha == 0 and n > 0:
            break
        amp = np.exp(2 * n * np.log(abs(alpha)) - gammaln(n + 1.0)) if alpha != 0 else 1.0
        vec[n * d + n] = amp * np.exp(2j * n * np.angle(alpha))
    norm2 = float(np.vdot(vec, vec).real)
    expected = float(iv(0, 2 * abs(alpha) ** 2))
    loss = 1.0 - norm2 / expected
    if norm2 / expected < TRUNCATION_ERROR:
        raise TruncationError(f"pair_coherent_state: cutoff retains only {norm2 / expected:.4f}")
    if norm2 / expected < TRUNCATION_WARN:
        warnings.warn(f"pair_coherent_state: truncated weight {norm2 / expected:.5f}", stacklevel=2)
    vec = _fix_global_phase(vec / np.sqrt(norm2))
    return QuantumState(space, vec, pure=True, truncation_loss=max(loss, 0.0))


def pair_cat_state(space: FockSpace, alpha: complex, parity: str = "even") -> QuantumState:
    """``|alpha,alpha> +/- |i alpha, i alpha>`` with normalisation
    ``N_pm = sqrt(2 (1 pm J0(2|alpha|^2)/I0(2|alpha|^2)))``."""
    if parity not in ("even", "odd"):
        raise ValueError("parity must be 'even' or 'odd'")
    sgn = 1.0 if parity == "even" else -1.0
    p1 = pair_coherent_state(space, alpha)
    p2 = pair_coherent_state(space, 1j * complex(alpha))
    vec = p1.data + sgn * p2.data
    y = 2 * abs(alpha) ** 2
    npm2 = 2.0 * (1.0 + sgn * float(jv(0, y)) / float(iv(0, y)))
    if npm2 < 1e-14:
        raise ValueError("pair cat state vanishes for this (alpha, parity)")
    loss = max(p1.truncation_loss, p2.truncation_loss)
    vec = _fix_global_phase(vec / np.linalg.norm(vec))
    return QuantumState(space, vec, pure=True, truncation_loss=loss)


def displacement_op(space: FockSpace, beta: complex, mode: int = 0) -> Operator:
    """Unitary ``exp(beta a^dag - beta* a)`` via matrix exponential."""
    _check_mode(space, mode)
    d = space.mode_dims[mode]
    a = mode_matrix("a", d)
    gen = beta * a.conj().T - np.conj(beta) * a
    return Operator(space, embed_mode_op(space, {mode: expm(gen)}))


def squeeze_op(space: FockSpace, delta: float, mode: int = 0) -> Operator:
    """Unitary ``exp(delta (a^2 - a^dag^2))``."""
    _check_mode(space, mode)
    d = space.mode_dims[mode]
    a = mode_matrix("a", d)
    gen = delta * (a @ a - a.conj().T @ a.conj().T)
    return Operator(space, embed_mode_op(space, {mode: expm(gen)}))


def parity_op(space: FockSpace, mode: int = 0) -> Operator:
    _check_mode(space, mode)
    d = space.mode_dims[mode]
    return Operator(space, embed_mode_op(space, {mode: np.diag((-1.0 + 0j) ** np.arange(d))}))


def expectation(state: QuantumState, op) -> complex:
    mat = op.matrix if isinstance(op, Operator) else np.asarray(op)
    if state.pure:
        return complex(np.vdot(state.data, mat @ state.data))
    return complex(np.trace(mat @ state.data))


def fidelity(rho: QuantumState, sigma: QuantumState) -> float:
    """Uhlmann fidelity; reduces to |<psi|phi>|^2 / <psi|rho|psi> when pure."""
    _require_same_space(rho.space, sigma.space)
    if rho.pure and sigma.pure:
        return float(abs(np.vdot(rho.data, sigma.data)) ** 2)
    if rho.pure or sigma.pure:
        psi, mixed = (rho, sigma) if rho.pure else (sigma, rho)
        val = np.vdot(psi.data, mixed.density_matrix() @ psi.data).real
        return float(min(max(val, 0.0), 1.0))
    A = rho.density_matrix()
    B = sigma.density_matrix()
    sqA = sqrtm(A)
    M = sqrtm(sqA @ B @ sqA)
    val = float(np.trace(M).real ** 2)
    return min(max(val, 0.0), 1.0)


def trace_distance(rho: QuantumState, sigma: QuantumState) -> float:
    _require_same_space(rho.space, sigma.space)
    diff = rho.density_matrix() - sigma.density_matrix()
    return float(0.5 * np.sum(np.abs(np.linalg.eigvalsh(diff))))


def partial_trace(state: QuantumState, keep) -> QuantumState:
    """Reduced density matrix on the kept modes (in their original order)."""
    keep = sorted(set(int(k) for k in np.atleast_1d(keep)))
    if not keep:
        raise ValueError("keep set must be non-empty")
    for k in keep:
        _check_mode(state.space, k)
    dims = state.space.mode_dims
    M = len(dims)
    rho = state.density_matrix().reshape(*dims, *dims)
    drop = [m for m in range(M) if m not in keep]
    for j, m in enumerate(sorted(drop, reverse=True)):
        rho = np.trace(rho, axis1=m, axis2=m + (M - j))
    newspace = FockSpace(tuple(dims[k] for k in keep))
    rho = rho.reshape(newspace.dim, newspace.dim)
    rho = 0.5 * (rho + rho.conj().T)
    return QuantumState(newspace, rho, pure=False, truncation_loss=state.truncation_loss,
                        unsafe=True)


def _displacement_matrix_grid(alphas: np.ndarray, dim: int) -> np.ndarray:
    """<m|D(alpha)|n> for an array of alphas; shape (len(alphas), dim, dim).

    Built per diagonal offset from the closed Cahill-Glauber form with
    associated Laguerre polynomials (vectorised over grid points).
    """
    from scipy.special import eval_genlaguerre

    alphas = np.asarray(alphas, dtype=complex).ravel()
    P = alphas.size
    x = np.abs(alphas) ** 2
    out = np.zeros((P, dim, dim), dtype=complex)
    for off in range(dim):
        ns = np.arange(dim - off)
        # log of sqrt(n!/(n+off)!) * |alpha|^off, done in log space for stability
        logpref = 0.5 * (gammaln(ns + 1.0) - gammaln(ns + off + 1.0))
        lag = eval_genlaguerre(ns[None, :], off, x[:, None])
        mag = np.exp(logpref[None, :] + off * np.log(np.maximum(np.abs(alphas)[:, None], 1e-300))
                     - x[:, None] / 2)
        if off == 0:
            mag = np.exp(logpref[None, :] - x[:, None] / 2)
        phase = np.exp(1j * off * np.angle(alphas))[:, None]
        vals = mag * phase * lag
        for i, n in enumerate(ns):
            out[:, n + off, n] = vals[:, i]
            if off:
                out[:, n, n + off] = (-1.0) ** off * np.conj(vals[:, i])
    return out


def displacement_expectation(state: QuantumState, beta: complex, mode: int = 0) -> complex:
    """<D(beta)> on one mode of the state (exact, Laguerre form)."""
    rho = partial_trace(state, [mode]) if state.space.n_modes > 1 else state
    d = rho.space.dim
    Dm = _displacement_matrix_grid(np.array([beta]), d)[0]
    return complex(np.trace(rho.density_matrix() @ Dm))


def wigner(state: QuantumState, grid) -> np.ndarray:
    """``W(beta) = (2/pi) Tr[rho D(2 beta) P]`` at the given complex points.

    Normalised so a Riemann sum with the grid cell area in beta approximates
    Tr rho = 1.
    """
    if state.space.n_modes != 1:
        raise DimensionMismatchError("wigner expects a single-mode state; partial_trace first")
    pts = np.asarray(grid, dtype=complex)
    shape = pts.shape
    d = state.space.dim
    Dm = _displacement_matrix_grid(2.0 * pts.ravel(), d)
    par = (-1.0) ** np.arange(d)
    rho = state.density_matrix()
    rho_par = rho * par[None, :]  # rho @ P
    vals = (2.0 / np.pi) * np.einsum("pmn,nm->p", Dm, rho_par).real
    return vals.reshape(shape)
