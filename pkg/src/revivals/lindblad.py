"""Lindblad generator and time propagation for a damped nonlinear mode.

Two propagators share one generator:

* ``rk4_evolve`` - fixed-step classic Runge-Kutta acting directly on the
  D x D density matrix. Because the Hamiltonian is diagonal and the jump
  operators are ladder operators, one generator application is a handful of
  elementwise array operations (no matrix products), which keeps long
  super-revival runs cheap and bit-reproducible.
* ``expm_propagate`` - dense exponential of the D^2 x D^2 superoperator,
  restricted to small dimensions. It exists to cross-check the RK4 path.

The superoperator uses column-major vectorization: vec(A X B) = (B^T kron A) vec(X).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
import scipy.linalg

from .errors import (DimensionError, DimensionMismatch, DomainError,
                     StabilityError, TruncationError)
from .fock import DensityMatrix, FockSpace
from .hamiltonian import DiagonalHamiltonian
from .observables import ObservableRecord, expect_a_raw, expect_n_raw

#: Trace drift treated as an integration failure.
TRACE_TOLERANCE = 1e-6

#: Top-level population treated as truncation overflow during evolution.
TOP_LEVEL_TOLERANCE = 1e-6

#: Hermiticity/trace tolerance for stored snapshots.
SNAPSHOT_TOLERANCE = 1e-8


@dataclass(frozen=True)
class DampingSpec:
    """Bath parameters of the master equation.

    full_equation selects the variant that keeps the upward thermal term
    gamma*N (a+ rho a - {a a+, rho}/2); with it off, only the downward
    channel gamma*(N+1) acts, matching the optical-frequency regime where
    energy flows exclusively into the environment.
    """

    gamma: float = 0.0
    n_thermal: float = 0.0
    full_equation: bool = False

    def __post_init__(self) -> None:
        if self.gamma < 0:
            raise DomainError(f"gamma must be >= 0, got {self.gamma}")
        if self.n_thermal < 0:
            raise DomainError(f"n_thermal must be >= 0, got {self.n_thermal}")


def vectorize(rho: np.ndarray) -> np.ndarray:
    """Column-major vec."""
    return rho.reshape(-1, order="F")


def unvectorize(v: np.ndarray, dim: int) -> np.ndarray:
    return v.reshape((dim, dim), order="F")


class Liouvillian:
    """Generator of the master equation for one (Hamiltonian, damping) pair."""

    def __init__(self, hamiltonian: DiagonalHamiltonian, damping: DampingSpec):
        self.space: FockSpace = hamiltonian.space
        self.hamiltonian = hamiltonian
        self.damping = damping
        d = self.space.dim
        e = hamiltonian.energies
        n = np.arange(d, dtype=float)
        g_down = damping.gamma * (damping.n_thermal + 1.0)
        # diagonal part: unitary phases plus anticommutator decay
        diag = -1j * (e[:, None] - e[None, :]) - 0.5 * g_down * (n[:, None] + n[None, :])
        self._upward = damping.full_equation and damping.n_thermal > 0
        if self._upward:
            g_up = damping.gamma * damping.n_thermal
            aad = n + 1.0
            aad[-1] = 0.0  # truncated a a+ annihilates the top level
            diag = diag - 0.5 * g_up * (aad[:, None] + aad[None, :])
            self._w_up = g_up * np.sqrt(np.outer(n[1:], n[1:]))
        self._diag = diag
        self._w_down = g_down * np.sqrt(np.outer(n[:-1] + 1.0, n[:-1] + 1.0))
        self._matrix: np.ndarray | None = None

    def apply(self, rho: np.ndarray, out: np.ndarray | None = None) -> np.ndarray:
        """drho/dt for a raw D x D array; O(D^2) elementwise work."""
        out = np.multiply(self._diag, rho, out=out)
        out[:-1, :-1] += self._w_down * rho[1:, 1:]
        if self._upward:
            out[1:, 1:] += self._w_up * rho[:-1, :-1]
        return out

    @property
    def matrix(self) -> np.ndarray:
        """Dense D^2 x D^2 superoperator (built lazily, column-vectorized)."""
        if self._matrix is None:
            d = self.space.dim
            eye = np.eye(d)
            n = np.arange(d, dtype=float)
            a = np.zeros((d, d), dtype=complex)
            a[np.arange(d - 1), np.arange(1, d)] = np.sqrt(n[1:])
            ad = a.conj().T
            h = np.diag(self.hamiltonian.energies).astype(complex)
            m = -1j * (np.kron(eye, h) - np.kron(h.T, eye))
            g_down = self.damping.gamma * (self.damping.n_thermal + 1.0)
            nd = ad @ a
            m += g_down * (np.kron(a.conj(), a)
                           - 0.5 * (np.kron(eye, nd) + np.kron(nd.T, eye)))
            if self.damping.full_equation and self.damping.n_thermal > 0:
                g_up = self.damping.gamma * self.damping.n_thermal
                aad = a @ ad
                m += g_up * (np.kron(ad.conj(), ad)
                             - 0.5 * (np.kron(eye, aad) + np.kron(aad.T, eye)))
            self._matrix = m
        return self._matrix

    def omega_max(self) -> float:
        """Fastest phase plus decay scale, used for step-size control."""
        e = self.hamiltonian.energies
        decay = self.damping.gamma * (self.damping.n_thermal + 1.0) * self.space.dim
        return float(e[-1] - e[-2]) + decay


def build_liouvillian(h: DiagonalHamiltonian, d: DampingSpec) -> Liouvillian:
    return Liouvillian(h, d)


@dataclass
class Trajectory:
    """Observable time series plus optional decimated state snapshots."""

    times: np.ndarray
    a_expect: np.ndarray
    n_expect: np.ndarray
    trace: np.ndarray
    purity: np.ndarray
    herm_defect: np.ndarray
    states: list[tuple[float, np.ndarray]] = field(default_factory=list)
    extras: dict[str, np.ndarray] = field(default_factory=dict)

    def record(self, i: int) -> ObservableRecord:
        return ObservableRecord(
            t=float(self.times[i]), a_expect=complex(self.a_expect[i]),
            n_expect=float(self.n_expect[i]), trace=float(self.trace[i]),
            purity=float(self.purity[i]), herm_defect=float(self.herm_defect[i]))

    def __len__(self) -> int:
        return len(self.times)


def default_dt(L: Liouvillian, rho0: DensityMatrix) -> float:
    """Step size keeping dt * Omega_max <= 0.1 and >= 200 steps per T_cl.

    T_cl is evaluated at the wave packet's own center, the rounded mean
    photon number of the initial state.
    """
    h = L.hamiltonian
    n0 = max(1, round(expect_n_raw(rho0.matrix)))
    if h.k == 2:
        e1 = h.omega0 + 2 * h.b * n0
    elif h.k == 3:
        e1 = h.omega0 + 3 * h.b * n0**2
    else:
        e1 = h.omega0 + h.b
    t_cl = 2 * math.pi / e1
    return min(0.1 / L.omega_max(), t_cl / 200.0)


def rk4_evolve(L: Liouvillian, rho0: DensityMatrix, t_final: float,
               dt: float = 0.0, record_every: int = 50,
               observers: tuple = ()) -> Trajectory:
    """Propagate rho0 to t_final with classic fixed-step RK4.

    Observables are recorded every step; full states only every
    record_every steps (0 disables snapshots). The state is re-Hermitized
    after each step; trace is monitored, never renormalized.

    Raises StabilityError when the trace drifts by more than 1e-6 and
    TruncationError when population reaches the top Fock level (possible
    only with the full equation at n_thermal > 0).
    """
    if rho0.space.dim != L.space.dim:
        raise DimensionMismatch(
            f"state dim {rho0.space.dim} vs Liouvillian dim {L.space.dim}")
    if t_final <= 0:
        raise DomainError(f"t_final must be positive, got {t_final}")
    if dt < 0:
        raise DomainError(f"dt must be >= 0, got {dt}")
    if dt == 0.0:
        dt = default_dt(L, rho0)
    if dt * L.omega_max() > 0.1 + 1e-12:
        raise DomainError(
            f"dt={dt:g} too large: dt*Omega_max = {dt * L.omega_max():.3f} > 0.1")
    nsteps = max(1, math.ceil(t_final / dt - 1e-12))
    dt = t_final / nsteps

    d = L.space.dim
    rho = np.array(rho0.matrix, dtype=complex)
    k1, k2, k3, k4, stage = (np.empty_like(rho) for _ in range(5))

    times = np.arange(nsteps + 1) * dt
    a_rec = np.empty(nsteps + 1, dtype=complex)
    n_rec = np.empty(nsteps + 1)
    tr_rec = np.empty(nsteps + 1)
    pur_rec = np.empty(nsteps + 1)
    herm_rec = np.empty(nsteps + 1)
    extras = {obs.__name__: np.empty(nsteps + 1, dtype=complex) for obs in observers}

    states: list[tuple[float, np.ndarray]] = []

    # downward-only dissipation cannot grow the top-level population, so
    # only growth beyond the initial value signals truncation overflow
    top_limit = float(rho[-1, -1].real) + TOP_LEVEL_TOLERANCE

    def observe(i: int, defect: float) -> None:
        a_rec[i] = expect_a_raw(rho)
        n_rec[i] = expect_n_raw(rho)
        tr = float(np.trace(rho).real)
        tr_rec[i] = tr
        pur_rec[i] = float(np.vdot(rho, rho).real)
        herm_rec[i] = defect
        for obs in observers:
            extras[obs.__name__][i] = obs(times[i], rho)
        if abs(tr - 1.0) > TRACE_TOLERANCE:
            raise StabilityError(
                f"trace drifted to {tr!r} at t={times[i]:.6g}; reduce dt")
        if rho[-1, -1].real > top_limit:
            raise TruncationError(
                f"top-level population {rho[-1, -1].real:.3e} at t={times[i]:.6g}; "
                "increase dim")

    def snapshot(i: int) -> None:
        defect = float(np.abs(rho - rho.conj().T).max())
        drift = abs(float(np.trace(rho).real) - 1.0)
        if defect > SNAPSHOT_TOLERANCE or drift > SNAPSHOT_TOLERANCE:
            raise StabilityError(
                f"snapshot at t={times[i]:.6g} fails integrity: "
                f"herm {defect:.2e}, trace drift {drift:.2e}")
        states.append((float(times[i]), rho.copy()))

    observe(0, 0.0)
    if record_every > 0:
        snapshot(0)
    sixth = dt / 6.0
    for s in range(1, nsteps + 1):
        L.apply(rho, out=k1)
        np.multiply(k1, 0.5 * dt, out=stage)
        stage += rho
        L.apply(stage, out=k2)
        np.multiply(k2, 0.5 * dt, out=stage)
        stage += rho
        L.apply(stage, out=k3)
        np.multiply(k3, dt, out=stage)
        stage += rho
        L.apply(stage, out=k4)
        # rho += dt/6 (k1 + 2 k2 + 2 k3 + k4)
        np.add(k2, k3, out=k2)
        k2 *= 2.0
        k1 += k2
        k1 += k4
        k1 *= sixth
        rho += k1
        adj = rho.conj().T
        defect = float(np.abs(rho - adj).max())
        rho += adj
        rho *= 0.5
        observe(s, defect)
        if record_every > 0 and (s % record_every == 0 or s == nsteps):
            snapshot(s)

    return Trajectory(times=times, a_expect=a_rec, n_expect=n_rec, trace=tr_rec,
                      purity=pur_rec, herm_defect=herm_rec, states=states,
                      extras=extras)


#: Largest dimension for which the dense superoperator exponential is allowed.
EXPM_MAX_DIM = 12


def expm_propagate(L: Liouvillian, rho0: DensityMatrix, t: float) -> DensityMatrix:
    """exp(L t) applied to rho0 through the dense superoperator.

    Cross-check path only: limited to dim <= 12 where the D^2 x D^2
    exponential (scaling-and-squaring Pade, via scipy) is cheap.
    """
    if L.space.dim > EXPM_MAX_DIM:
        raise DimensionError(
            f"dense superoperator exponential limited to dim <= {EXPM_MAX_DIM}, "
            f"got {L.space.dim}")
    if rho0.space.dim != L.space.dim:
        raise DimensionMismatch(
            f"state dim {rho0.space.dim} vs Liouvillian dim {L.space.dim}")
    if t == 0.0:
        return rho0
    prop = scipy.linalg.expm(L.matrix * t)
    rho = unvectorize(prop @ vectorize(np.asarray(rho0.matrix)), L.space.dim)
    rho = 0.5 * (rho + rho.conj().T)
    tr = float(np.trace(rho).real)
    if abs(tr - 1.0) > 1e-10:
        raise StabilityError(f"superoperator exponential drifted trace to {tr!r}")
    return DensityMatrix(L.space, rho / tr)
