"""Measurement-based work extraction on the system-clock-storage space.

Basis order |s> x |c> x |w> with s, c, w in {0, 1}, index 4s + 2c + w.
The clock selects which qubit Hamiltonian is active (c=0 before the quench,
c=1 after), the two-level storage receives the energy difference, and the
quench unitary is an energy-conserving involution.  The compression stroke
uses the mirrored protocol: storage prepared in |1>, unitary conjugated by
the storage bit flip, so the commutation with the swapped Hamiltonian holds.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "EXPANSION",
    "COMPRESSION",
    "TripartiteHamiltonian",
    "TripartiteState",
    "WorkOutcome",
    "ConservationReport",
    "build_hamiltonian",
    "build_unitary",
    "apply_extraction",
    "measure_storage",
    "verify_conservation",
]

DIM = 8
EXPANSION = "expansion"
COMPRESSION = "compression"

_HERMITICITY_TOL = 1e-12
_TRACE_TOL = 1e-12
_EIGEN_TOL = 1e-10


def _index(s: int, c: int, w: int) -> int:
    return 4 * s + 2 * c + w


def _storage_projector(w: int) -> np.ndarray:
    diag = np.zeros(DIM)
    for s in (0, 1):
        for c in (0, 1):
            diag[_index(s, c, w)] = 1.0
    return np.diag(diag)


@dataclass(frozen=True)
class TripartiteHamiltonian:
    """Diagonal total Hamiltonian, split into system-clock and storage parts."""

    omega_h: float
    omega_c: float
    direction: str
    system_clock: np.ndarray
    storage: np.ndarray

    @property
    def matrix(self) -> np.ndarray:
        return self.system_clock + self.storage

    @property
    def storage_gap(self) -> float:
        return self.omega_h - self.omega_c

    @property
    def initial_storage_level(self) -> int:
        return 0 if self.direction == EXPANSION else 1


@dataclass(frozen=True)
class TripartiteState:
    """8x8 density matrix of system, clock and storage."""

    matrix: np.ndarray

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=np.complex128)
        if m.shape != (DIM, DIM):
            raise ValueError(f"state must be {DIM}x{DIM}")
        if np.max(np.abs(m - m.conj().T)) > _HERMITICITY_TOL:
            raise ValueError("state is not Hermitian")
        if abs(np.trace(m).real - 1.0) > _TRACE_TOL or abs(np.trace(m).imag) > _TRACE_TOL:
            raise ValueError("state trace must be 1")
        if np.linalg.eigvalsh(m).min() < -_EIGEN_TOL:
            raise ValueError("state is not positive semidefinite")
        object.__setattr__(self, "matrix", m)


@dataclass(frozen=True)
class WorkOutcome:
    """Storage-measurement record: (work, probability) pairs and post states.

    Zero-probability branches keep their (w, 0) entry but contribute no
    post-measurement state.
    """

    outcomes: tuple[tuple[float, float], ...]
    post_states: tuple[TripartiteState, ...]
    post_outcome_index: tuple[int, ...] = field(default=())

    @property
    def expected_work(self) -> float:
        return sum(w * p for w, p in self.outcomes)


def build_hamiltonian(omega_h: float, omega_c: float, direction: str = EXPANSION) -> TripartiteHamiltonian:
    """Assemble the diagonal clock-conditioned Hamiltonian plus storage term."""
    if not omega_h > omega_c > 0.0:
        raise ValueError("frequencies must satisfy omega_h > omega_c > 0")
    if direction not in (EXPANSION, COMPRESSION):
        raise ValueError(f"direction must be {EXPANSION!r} or {COMPRESSION!r}")
    before = omega_h if direction == EXPANSION else omega_c
    after = omega_c if direction == EXPANSION else omega_h
    sc = np.zeros(DIM)
    st = np.zeros(DIM)
    for s in (0, 1):
        for c in (0, 1):
            for w in (0, 1):
                i = _index(s, c, w)
                sc[i] = s * (before if c == 0 else after)
                st[i] = (omega_h - omega_c) * w
    return TripartiteHamiltonian(omega_h=float(omega_h), omega_c=float(omega_c),
                                 direction=direction,
                                 system_clock=np.diag(sc), storage=np.diag(st))


def build_unitary(direction: str = EXPANSION) -> np.ndarray:
    """The quenching involution: clock flips, storage books the energy.

    Expansion pairs: |000><010|+h.c., |100><111|+h.c., |001><011|+h.c.,
    with |110> and |101> fixed.  Compression is the storage-flipped mirror.
    """
    u = np.zeros((DIM, DIM))
    pairs = [((0, 0, 0), (0, 1, 0)), ((1, 0, 0), (1, 1, 1)), ((0, 0, 1), (0, 1, 1))]
    fixed = [(1, 1, 0), (1, 0, 1)]
    for a, b in pairs:
        u[_index(*b), _index(*a)] = 1.0
        u[_index(*a), _index(*b)] = 1.0
    for a in fixed:
        u[_index(*a), _index(*a)] = 1.0
    if direction == EXPANSION:
        return u
    if direction == COMPRESSION:
        flip = _storage_flip()
        return flip @ u @ flip
    raise ValueError(f"direction must be {EXPANSION!r} or {COMPRESSION!r}")


def _storage_flip() -> np.ndarray:
    x = np.zeros((DIM, DIM))
    for s in (0, 1):
        for c in (0, 1):
            x[_index(s, c, 0), _index(s, c, 1)] = 1.0
            x[_index(s, c, 1), _index(s, c, 0)] = 1.0
    return x


def apply_extraction(rho11: float, rho00: float, hamiltonian: TripartiteHamiltonian) -> TripartiteState:
    """Quench a diagonal qubit state through the extraction unitary.

    The qubit enters with populations (rho11, rho00), the clock in |0> and
    the storage in its protocol level; coherences are assumed projected away.
    """
    if abs(rho11 + rho00 - 1.0) > _TRACE_TOL:
        raise ValueError("qubit populations must sum to 1")
    if rho11 < -_TRACE_TOL or rho00 < -_TRACE_TOL:
        raise ValueError("qubit populations must be nonnegative")
    w0 = hamiltonian.initial_storage_level
    rho = np.zeros((DIM, DIM), dtype=np.complex128)
    rho[_index(0, 0, w0), _index(0, 0, w0)] = rho00
    rho[_index(1, 0, w0), _index(1, 0, w0)] = rho11
    u = build_unitary(hamiltonian.direction)
    return TripartiteState(u @ rho @ u.conj().T)


def measure_storage(state: TripartiteState, hamiltonian: TripartiteHamiltonian) -> WorkOutcome:
    """Projective storage measurement; work is the storage-energy increase."""
    rho = state.matrix
    initial_energy = hamiltonian.storage_gap * hamiltonian.initial_storage_level
    outcomes = []
    posts = []
    post_index = []
    for w in (0, 1):
        proj = _storage_projector(w)
        branch = proj @ rho @ proj
        p = float(np.trace(branch).real)
        work = hamiltonian.storage_gap * w - initial_energy
        outcomes.append((work, p))
        if p > 1e-15:
            posts.append(TripartiteState(branch / p))
            post_index.append(len(outcomes) - 1)
    return WorkOutcome(outcomes=tuple(outcomes), post_states=tuple(posts),
                       post_outcome_index=tuple(post_index))


@dataclass(frozen=True)
class ConservationReport:
    """Verifier output; violations are reported, never raised."""

    commutator_max: float
    level1_max_residual: float
    level4_max_residual: float
    violations: tuple[str, ...]

    @property
    def satisfied(self) -> bool:
        return not self.violations


def verify_conservation(hamiltonian: TripartiteHamiltonian, unitary: np.ndarray,
                        rho11_samples=(0.0, 0.3, 0.5, 1.0)) -> ConservationReport:
    """Check [U, H] = 0, the mean energy balance, and per-outcome support.

    Level 1: initial system-clock energy equals mean extracted work plus the
    final system-clock energy.  Level 4: for each energy-eigenstate input and
    each realised outcome j, the post-measurement state is supported on the
    system-clock eigenspace of eigenvalue h_x - w_j.
    """
    violations = []
    h_full = hamiltonian.matrix
    comm = float(np.max(np.abs(unitary @ h_full - h_full @ unitary)))
    if comm >= 1e-13:
        violations.append(f"[U, H] != 0 (max |entry| = {comm:.3e})")

    h_sc = hamiltonian.system_clock
    level1_max = 0.0
    for rho11 in rho11_samples:
        state = apply_extraction(rho11, 1.0 - rho11, hamiltonian)
        # Rebuild the pre-quench state for the balance.
        w0 = hamiltonian.initial_storage_level
        before = np.zeros((DIM, DIM), dtype=np.complex128)
        before[_index(0, 0, w0), _index(0, 0, w0)] = 1.0 - rho11
        before[_index(1, 0, w0), _index(1, 0, w0)] = rho11
        outcome = measure_storage(state, hamiltonian)
        e_before = float(np.trace(h_sc @ before).real)
        e_after = float(np.trace(h_sc @ state.matrix).real)
        residual = abs(e_before - (outcome.expected_work + e_after))
        level1_max = max(level1_max, residual)
        if residual >= 1e-12:
            violations.append(f"level-1 balance off by {residual:.3e} at rho11={rho11:g}")

    level4_max = 0.0
    w0 = hamiltonian.initial_storage_level
    sc_diag = np.diag(h_sc).real
    for s in (0, 1):
        idx = _index(s, 0, w0)
        h_x = sc_diag[idx]
        pure = np.zeros((DIM, DIM), dtype=np.complex128)
        pure[idx, idx] = 1.0
        evolved = unitary @ pure @ unitary.conj().T
        for w in (0, 1):
            proj = _storage_projector(w)
            branch = proj @ evolved @ proj
            p = float(np.trace(branch).real)
            if p <= 1e-15:
                continue
            work = hamiltonian.storage_gap * w - hamiltonian.storage_gap * w0
            target = h_x - work
            support = np.diag((np.abs(sc_diag - target) < 1e-9).astype(float))
            residual = float(np.max(np.abs(branch - support @ branch @ support)))
            level4_max = max(level4_max, residual)
            if residual > 0.0:
                violations.append(
                    f"level-4 support broken for input s={s}, outcome w={w} (residual {residual:.3e})"
                )
    return ConservationReport(commutator_max=comm, level1_max_residual=level1_max,
                              level4_max_residual=level4_max, violations=tuple(violations))
