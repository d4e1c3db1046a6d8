"""Dense truncated Fock-space linear algebra for a qubit-cavity system.

States live either in the cavity space alone (dimension N) or in the joint
space qubit (x) cavity (dimension 2N).  Joint amplitudes are ordered as
(qubit g, Fock 0..N-1) followed by (qubit e, Fock 0..N-1).  All energies are
stored as angular frequencies (divided by hbar), so propagation times are in
seconds.

Everything here is a pure function of its inputs; the state and operator
types freeze their arrays after construction and are safe to share across
threads.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.linalg import eigh
from scipy.special import gammaln

from .errors import DimensionError, HermiticityError, TruncationError

__all__ = [
    "FockOperator",
    "CavityState",
    "JointState",
    "QUBIT_AMPLITUDES",
    "make_ladder_ops",
    "number_op",
    "coherent_fock",
    "required_fock_dim",
    "Propagator",
    "propagate",
    "fidelity",
    "wigner",
    "displacement_matrix",
    "displace_state",
    "joint_state",
    "top_level_weight",
    "quadrature_covariance",
    "min_quadrature_variance",
]

NORM_TOL = 1e-10
COHERENT_TAIL_TOL = 1e-10
LEAKAGE_THRESHOLD = 1e-8
HERMITICITY_RTOL = 1e-12

_SQ2 = 1.0 / math.sqrt(2.0)

QUBIT_AMPLITUDES = {
    "g": np.array([1.0, 0.0], dtype=complex),
    "e": np.array([0.0, 1.0], dtype=complex),
    "+": np.array([_SQ2, _SQ2], dtype=complex),
    "-": np.array([_SQ2, -_SQ2], dtype=complex),
}


def _freeze(arr: np.ndarray) -> np.ndarray:
    out = np.array(arr, dtype=complex)
    out.setflags(write=False)
    return out


@dataclass(frozen=True)
class FockOperator:
    """Dense complex operator on the truncated cavity or joint space.

    Entries are dimensionless or in angular-frequency units.  Operators
    tagged ``hamiltonian=True`` must be hermitian within
    max|H - H^dag| <= 1e-12 * max|H|.
    """

    matrix: np.ndarray
    hamiltonian: bool = False

    def __post_init__(self):
        m = np.array(self.matrix, dtype=complex)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise DimensionError(f"operator matrix must be square, got shape {m.shape}")
        if m.shape[0] < 2:
            raise DimensionError(f"operator dimension must be >= 2, got {m.shape[0]}")
        if self.hamiltonian:
            scale = float(np.abs(m).max())
            if scale > 0.0 and float(np.abs(m - m.conj().T).max()) > HERMITICITY_RTOL * scale:
                raise HermiticityError("operator tagged as Hamiltonian is not hermitian")
        object.__setattr__(self, "matrix", _freeze(m))

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]


@dataclass(frozen=True)
class CavityState:
    """Pure state of the cavity mode over the first ``fock_dim`` levels.

    ``leakage`` records the norm weight estimated to lie beyond the
    truncation for whatever construction produced the state.
    """

    amplitudes: np.ndarray
    leakage: float = 0.0

    def __post_init__(self):
        v = np.array(self.amplitudes, dtype=complex).ravel()
        if v.size < 2:
            raise DimensionError(f"cavity state needs at least 2 levels, got {v.size}")
        norm2 = float(np.real(np.vdot(v, v)))
        if abs(norm2 - 1.0) > NORM_TOL:
            raise ValueError(f"cavity state not normalized: |amplitudes|^2 = {norm2!r}")
        object.__setattr__(self, "amplitudes", _freeze(v))

    @property
    def fock_dim(self) -> int:
        return self.amplitudes.size


@dataclass(frozen=True)
class JointState:
    """Pure state of qubit (x) cavity, amplitudes ordered g-block then e-block."""

    amplitudes: np.ndarray
    leakage: float = 0.0

    def __post_init__(self):
        v = np.array(self.amplitudes, dtype=complex).ravel()
        if v.size < 4 or v.size % 2 != 0:
            raise DimensionError(f"joint state needs even length >= 4, got {v.size}")
        norm2 = float(np.real(np.vdot(v, v)))
        if abs(norm2 - 1.0) > NORM_TOL:
            raise ValueError(f"joint state not normalized: |amplitudes|^2 = {norm2!r}")
        object.__setattr__(self, "amplitudes", _freeze(v))

    @property
    def fock_dim(self) -> int:
        return self.amplitudes.size // 2

    def qubit_block(self, outcome: str) -> np.ndarray:
        n = self.fock_dim
        if outcome == "g":
            return self.amplitudes[:n]
        if outcome == "e":
            return self.amplitudes[n:]
        raise ValueError(f"unknown qubit outcome {outcome!r}")

    def is_valid(self, leakage_threshold: float = LEAKAGE_THRESHOLD) -> bool:
        return self.leakage < leakage_threshold


def make_ladder_ops(dim: int) -> tuple[FockOperator, FockOperator]:
    """Annihilation and creation operators on the first ``dim`` Fock levels."""
    if dim < 2:
        raise DimensionError(f"Fock truncation must be >= 2, got {dim}")
    a = np.zeros((dim, dim), dtype=complex)
    ns = np.arange(1, dim)
    a[ns - 1, ns] = np.sqrt(ns)
    return FockOperator(a), FockOperator(a.conj().T)


def number_op(dim: int) -> FockOperator:
    """Photon number operator a^dag a."""
    if dim < 2:
        raise DimensionError(f"Fock truncation must be >= 2, got {dim}")
    return FockOperator(np.diag(np.arange(dim, dtype=complex)), hamiltonian=True)


def required_fock_dim(alpha: complex, tail_tol: float = COHERENT_TAIL_TOL, minimum: int = 8) -> int:
    """Smallest truncation whose Poisson tail beyond it is below ``tail_tol``."""
    mu = abs(alpha) ** 2
    if mu == 0.0:
        return max(minimum, 2)
    dim = max(minimum, int(math.ceil(mu)))
    while _poisson_tail(dim, mu) >= tail_tol:
        dim += 1
        if dim > 100000:
            raise TruncationError(f"no adequate truncation found for |alpha|={abs(alpha)!r}")
    return dim


def _poisson_tail(dim: int, mu: float) -> float:
    """P(X >= dim) for X ~ Poisson(mu), i.e. coherent weight beyond the truncation."""
    ns = np.arange(dim)
    captured = np.exp(ns * math.log(mu) - mu - gammaln(ns + 1)).sum() if mu > 0 else 1.0
    return max(0.0, 1.0 - float(captured))


def coherent_fock(alpha: complex, dim: int) -> CavityState:
    """Coherent state with displacement ``alpha`` on ``dim`` Fock levels.

    Amplitudes exp(-|alpha|^2/2) alpha^n / sqrt(n!) are renormalized after
    truncation and the discarded weight is recorded as leakage.  Raises
    TruncationError (with a dimension estimate) when the discarded weight
    would exceed the 1e-10 contract.
    """
    if dim < 2:
        raise DimensionError(f"Fock truncation must be >= 2, got {dim}")
    if alpha == 0:
        v = np.zeros(dim, dtype=complex)
        v[0] = 1.0
        return CavityState(v, leakage=0.0)
    tail = _poisson_tail(dim, abs(alpha) ** 2)
    if tail >= COHERENT_TAIL_TOL:
        need = required_fock_dim(alpha)
        raise TruncationError(
            f"truncation {dim} insufficient for coherent |alpha|={abs(alpha):.6g} "
            f"(tail {tail:.3e}); need >= {need}",
            required_dim=need,
        )
    ns = np.arange(dim)
    logmag = -abs(alpha) ** 2 / 2.0 + ns * math.log(abs(alpha)) - 0.5 * gammaln(ns + 1)
    v = np.exp(logmag + 1j * np.angle(alpha) * ns)
    v /= np.linalg.norm(v)
    return CavityState(v, leakage=tail)


def joint_state(qubit: str | np.ndarray, cavity: CavityState) -> JointState:
    """Tensor a qubit state (name or 2-amplitude vector) with a cavity state."""
    q = QUBIT_AMPLITUDES[qubit] if isinstance(qubit, str) else np.asarray(qubit, dtype=complex)
    if q.size != 2:
        raise DimensionError(f"qubit amplitudes must have length 2, got {q.size}")
    return JointState(np.kron(q, cavity.amplitudes), leakage=cavity.leakage)


class Propagator:
    """Repeated-use evolver exp(-i H t) with the eigendecomposition done once.

    The eigenbasis route preserves the norm to well below the 1e-10
    unitarity contract and composes exactly over time.
    """

    def __init__(self, hamiltonian: FockOperator):
        if not hamiltonian.hamiltonian:
            raise HermiticityError("propagation requires a Hamiltonian-tagged operator")
        self.dim = hamiltonian.dim
        self._evals, self._evecs = eigh(hamiltonian.matrix)

    def __call__(self, state: JointState, t: float) -> JointState:
        if self.dim != state.amplitudes.size:
            raise DimensionError(
                f"dimension mismatch: H is {self.dim}, state is {state.amplitudes.size}"
            )
        phases = np.exp(-1j * self._evals * t)
        out = self._evecs @ (phases * (self._evecs.conj().T @ state.amplitudes))
        return JointState(out, leakage=state.leakage)


def propagate(hamiltonian: FockOperator, state: JointState, t: float) -> JointState:
    """Evolve ``state`` by exp(-i H t).

    ``hamiltonian`` must be tagged hermitian and act on the joint space of
    ``state``.  For many times under one Hamiltonian, build a Propagator
    instead.
    """
    return Propagator(hamiltonian)(state, t)


def fidelity(x: CavityState | JointState, y: CavityState | JointState) -> float:
    """Global-phase-insensitive overlap |<x|y>|^2 of two same-kind states."""
    if type(x) is not type(y):
        raise DimensionError(f"cannot compare {type(x).__name__} with {type(y).__name__}")
    if x.amplitudes.size != y.amplitudes.size:
        raise DimensionError(
            f"dimension mismatch: {x.amplitudes.size} vs {y.amplitudes.size}"
        )
    return float(abs(np.vdot(x.amplitudes, y.amplitudes)) ** 2)


def _triangular_exp_lowering(z: complex, dim: int) -> np.ndarray:
    """Matrix of exp(z a) on the truncated space (exact, upper triangular)."""
    if z == 0:
        return np.eye(dim, dtype=complex)
    ns = np.arange(dim)
    diff = ns[None, :] - ns[:, None]  # n - m, nonzero entries need n >= m
    mask = diff >= 0
    d = np.where(mask, diff, 0)
    # single combined exponent: |z|^d sqrt(n!/m!)/d! overflows if split up
    logmag = (
        0.5 * (gammaln(ns[None, :] + 1) - gammaln(ns[:, None] + 1))
        - gammaln(d + 1)
        + d * math.log(abs(z))
    )
    return np.where(mask, np.exp(logmag + 1j * d * np.angle(z)), 0.0).astype(complex)


def _triangular_exp_raising(z: complex, dim: int) -> np.ndarray:
    """Matrix of exp(z a^dag) on the truncated space (exact, lower triangular)."""
    return _triangular_exp_lowering(np.conj(z), dim).conj().T


def displacement_matrix(beta: complex, dim: int) -> np.ndarray:
    """Truncated displacement operator D(beta) = exp(beta a^dag - beta* a).

    Built from the normal-ordered factorization
    D(beta) = exp(-|beta|^2/2) exp(beta a^dag) exp(-beta* a), whose matrix
    elements on the first ``dim`` levels coincide (in exact arithmetic) with
    the infinite-dimensional operator: neither factor routes amplitude above
    max(m, n).  In floating point the columns are accurate while
    |beta| sqrt(column index) stays moderate; entries with both indices
    large carry the factors' dynamic range and should not be relied on.
    """
    raising = _triangular_exp_raising(beta, dim)
    lowering = _triangular_exp_lowering(-np.conj(beta), dim)
    return math.exp(-abs(beta) ** 2 / 2.0) * (raising @ lowering)


def displace_state(beta: complex, state: CavityState) -> np.ndarray:
    """Amplitudes of D(beta)|state>, applying the normal-ordered factors in turn."""
    lowered = _triangular_exp_lowering(-np.conj(beta), state.fock_dim) @ state.amplitudes
    raised = _triangular_exp_raising(beta, state.fock_dim) @ lowered
    return math.exp(-abs(beta) ** 2 / 2.0) * raised


def wigner(state: CavityState, points) -> np.ndarray:
    """Wigner function W(beta) = (2/pi) <D(beta) Pi D(beta)^dag> at complex points.

    Pi is the photon parity operator, so |W| <= 2/pi everywhere.  The caller
    is responsible for a truncation large enough to hold the state displaced
    to the farthest grid point.
    """
    parity = (-1.0) ** np.arange(state.fock_dim)
    pts = np.asarray(points, dtype=complex).ravel()
    out = np.empty(pts.size, dtype=float)
    for i, beta in enumerate(pts):
        displaced = displace_state(-beta, state)
        out[i] = (2.0 / math.pi) * float(np.sum(parity * np.abs(displaced) ** 2))
    return out


def top_level_weight(state: CavityState | JointState, levels: int = 4) -> float:
    """Population in the top ``levels`` Fock levels (both qubit blocks for joint states)."""
    n = state.fock_dim
    probs = np.abs(state.amplitudes) ** 2
    if isinstance(state, JointState):
        probs = probs[:n] + probs[n:]
    return float(probs[n - levels:].sum())


def quadrature_covariance(state: CavityState) -> np.ndarray:
    """Symmetrized covariance matrix of x = (a + a^dag)/sqrt(2), p = -i(a - a^dag)/sqrt(2)."""
    v = state.amplitudes
    dim = v.size
    ns = np.arange(dim)
    av = np.zeros(dim, dtype=complex)
    av[:-1] = np.sqrt(ns[1:]) * v[1:]
    aav = np.zeros(dim, dtype=complex)
    aav[:-2] = np.sqrt(ns[2:] * (ns[2:] - 1)) * v[2:]
    m_a = complex(np.vdot(v, av))
    m_aa = complex(np.vdot(v, aav))
    m_n = float(np.real(np.vdot(av, av)))
    x_mean = math.sqrt(2.0) * m_a.real
    p_mean = math.sqrt(2.0) * m_a.imag
    var_x = m_aa.real + m_n + 0.5 - x_mean**2
    var_p = -m_aa.real + m_n + 0.5 - p_mean**2
    cov_xp = m_aa.imag - x_mean * p_mean
    return np.array([[var_x, cov_xp], [cov_xp, var_p]])


def min_quadrature_variance(state: CavityState) -> float:
    """Smallest quadrature variance over all phase-space directions (vacuum = 1/2)."""
    return float(np.linalg.eigvalsh(quadrature_covariance(state))[0])
