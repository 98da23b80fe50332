"""Brute-force verification engine on a truncated two-mode Fock space.

Everything the closed-form modules claim is re-derivable here by direct
linear algebra: generator matrices, unitaries built from exponentials of
Hermitian generators, thermal density matrices, expectation values and
variances.

Basis and blocking
------------------
States |n1, n2> with 0 <= n1, n2 <= n_max, global index n1*(n_max+1) + n2.
Every generator used here commutes with the mode imbalance n1 - n2, so all
heavy operations run block-diagonally per imbalance sector d = n1 - n2
(block size n_max - |d| + 1).  That turns one dim^3 = (n_max+1)^6 dense
cost into a sum of small-block costs and is what makes n_max = 120
routine.  `BlockOperator.to_dense()` assembles the full matrix for
small-basis algebra checks.

Truncation honesty
------------------
Truncation corrupts matrix elements near the n_max boundary first, and
squeezing amplifies tails, so variances break before means.  Thermal
states report their tail leakage and refuse to renormalize silently past
a tolerance; evolution helpers can check the boundary occupancy of the
intermediate and final states against a leakage budget and raise instead
of returning quietly wrong numbers.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .core import InterferometerAngles, ProtocolEndpoints
from .errors import TruncationError

__all__ = [
    "FockWorkspace",
    "BlockOperator",
    "ThermalState",
    "GeneratorSet",
    "build_generators",
    "thermal_state",
    "unitary_product",
    "unitary_equiv",
    "evolution_endpoint",
    "hamiltonian_final",
    "number_operator",
    "expect",
    "variance",
    "boundary_occupancy",
    "evolved_boundary_occupancy",
]

_DENSE_LIMIT = 4096  # refuse to assemble dense matrices larger than this
_IMAG_RESIDUE_TOL = 1e-10


@dataclass(frozen=True)
class Sector:
    """One conserved-imbalance block: the states with n1 - n2 = d."""

    d: int
    n1: np.ndarray
    n2: np.ndarray
    idx: np.ndarray  # global indices, ordered by min(n1, n2) ascending

    @property
    def size(self) -> int:
        return len(self.idx)


class FockWorkspace:
    """Truncated two-mode basis with per-sector caches.

    The eigendecomposition of the K_x block is computed once per sector and
    reused by every exponential (K_y shares it through a diagonal phase
    similarity), so repeated unitary construction costs only matrix
    multiplies.
    """

    def __init__(self, n_max: int):
        if n_max < 1:
            raise ValueError(f"n_max must be >= 1, got {n_max}")
        self.n_max = int(n_max)
        self.dim = (self.n_max + 1) ** 2
        sectors = []
        for d in range(-self.n_max, self.n_max + 1):
            low = np.arange(0, self.n_max - abs(d) + 1)
            n1 = low + d if d >= 0 else low
            n2 = low if d >= 0 else low - d
            sectors.append(Sector(d=d, n1=n1, n2=n2, idx=n1 * (self.n_max + 1) + n2))
        self.sectors: tuple[Sector, ...] = tuple(sectors)

    @cached_property
    def kz_diags(self) -> tuple[np.ndarray, ...]:
        return tuple((s.n1 + s.n2 + 1) / 2.0 for s in self.sectors)

    @cached_property
    def n_diags(self) -> tuple[np.ndarray, ...]:
        return tuple((s.n1 + s.n2).astype(float) for s in self.sectors)

    @cached_property
    def kx_blocks(self) -> tuple[np.ndarray, ...]:
        out = []
        for s in self.sectors:
            m = s.size
            kx = np.zeros((m, m))
            if m > 1:
                off = 0.5 * np.sqrt((s.n1[:-1] + 1.0) * (s.n2[:-1] + 1.0))
                rows = np.arange(m - 1)
                kx[rows + 1, rows] = off
                kx[rows, rows + 1] = off
            out.append(kx)
        return tuple(out)

    @cached_property
    def kx_eig(self) -> tuple[tuple[np.ndarray, np.ndarray], ...]:
        return tuple(np.linalg.eigh(kx) for kx in self.kx_blocks)

    @cached_property
    def boundary_masks(self) -> tuple[np.ndarray, ...]:
        return tuple((s.n1 == self.n_max) | (s.n2 == self.n_max) for s in self.sectors)

    def interior_mask(self, layers: int = 1) -> np.ndarray:
        """Global boolean mask of states at least `layers` below the cutoff.

        Products of k truncated operators are exact on columns k layers in,
        so commutator checks use layers=1 and double-commutator/Casimir
        checks use layers=2.
        """
        n1, n2 = np.divmod(np.arange(self.dim), self.n_max + 1)
        bound = self.n_max - layers
        return (n1 <= bound) & (n2 <= bound)


class BlockOperator:
    """Operator stored as one dense block per imbalance sector.

    `diags` is set for diagonal operators, letting products with them run
    in O(m^2) per block instead of a full matrix multiply.
    """

    def __init__(self, ws: FockWorkspace, blocks, *, hermitian=False, unitary=False, diags=None):
        self.ws = ws
        self.blocks = list(blocks)
        self.hermitian = bool(hermitian)
        self.unitary = bool(unitary)
        self.diags = None if diags is None else list(diags)

    @classmethod
    def from_diagonal(cls, ws: FockWorkspace, diags, *, hermitian=True) -> "BlockOperator":
        diags = [np.asarray(v) for v in diags]
        blocks = [np.diag(v) for v in diags]
        return cls(ws, blocks, hermitian=hermitian, unitary=False, diags=diags)

    def dag(self) -> "BlockOperator":
        blocks = [b.conj().T for b in self.blocks]
        diags = None if self.diags is None else [v.conj() for v in self.diags]
        return BlockOperator(
            self.ws, blocks, hermitian=self.hermitian, unitary=self.unitary, diags=diags
        )

    def __matmul__(self, other: "BlockOperator") -> "BlockOperator":
        if not isinstance(other, BlockOperator):
            return NotImplemented
        if other.ws is not self.ws:
            raise ValueError("operators live on different workspaces")
        if self.diags is not None:
            blocks = [v[:, None] * b for v, b in zip(self.diags, other.blocks)]
        elif other.diags is not None:
            blocks = [b * v[None, :] for b, v in zip(self.blocks, other.diags)]
        else:
            blocks = [a @ b for a, b in zip(self.blocks, other.blocks)]
        diags = None
        if self.diags is not None and other.diags is not None:
            diags = [u * v for u, v in zip(self.diags, other.diags)]
        return BlockOperator(
            self.ws, blocks, unitary=self.unitary and other.unitary, diags=diags
        )

    def diagonal(self) -> list[np.ndarray]:
        if self.diags is not None:
            return [np.asarray(v) for v in self.diags]
        return [np.diagonal(b) for b in self.blocks]

    def to_dense(self, *, force: bool = False) -> np.ndarray:
        if self.ws.dim > _DENSE_LIMIT and not force:
            raise ValueError(
                f"dense assembly of a {self.ws.dim}x{self.ws.dim} matrix; pass force=True "
                "if you really want it"
            )
        out = np.zeros((self.ws.dim, self.ws.dim), dtype=complex)
        for s, b in zip(self.ws.sectors, self.blocks):
            out[np.ix_(s.idx, s.idx)] = b
        return out

    def hermiticity_defect(self) -> float:
        return max(float(np.max(np.abs(b - b.conj().T))) for b in self.blocks)

    def unitarity_defect(self) -> float:
        return max(
            float(np.max(np.abs(b.conj().T @ b - np.eye(b.shape[0]))))
            for b in self.blocks
        )


class GeneratorSet:
    """The su(1,1) generators, the number operator and (dense) mode ladders."""

    def __init__(self, ws: FockWorkspace):
        self.ws = ws
        self.kx = BlockOperator(ws, [b.copy() for b in ws.kx_blocks], hermitian=True)
        phases = [(-1j) ** np.arange(s.size) for s in ws.sectors]
        ky_blocks = [
            (p[:, None] * kx) * p.conj()[None, :] for p, kx in zip(phases, ws.kx_blocks)
        ]
        self.ky = BlockOperator(ws, ky_blocks, hermitian=True)
        self.kz = BlockOperator.from_diagonal(ws, ws.kz_diags)
        self.n = BlockOperator.from_diagonal(ws, ws.n_diags)

    @cached_property
    def a1(self) -> np.ndarray:
        """Dense annihilator of mode 1; breaks the imbalance blocking, so dense only."""
        return np.kron(_dense_annihilator(self.ws.n_max), np.eye(self.ws.n_max + 1))

    @cached_property
    def a2(self) -> np.ndarray:
        return np.kron(np.eye(self.ws.n_max + 1), _dense_annihilator(self.ws.n_max))


def _dense_annihilator(n_max: int) -> np.ndarray:
    a = np.zeros((n_max + 1, n_max + 1))
    ns = np.arange(1, n_max + 1)
    a[ns - 1, ns] = np.sqrt(ns)
    return a


def build_generators(ws: FockWorkspace) -> GeneratorSet:
    """K_x, K_y, K_z and N on the workspace, plus dense a1/a2 on demand.

    K_x = (a1+ a2+ + a1 a2)/2, K_y = i (a1 a2 - a1+ a2+)/2,
    K_z = (a1+ a1 + a2 a2+)/2 = (N + 1)/2; the commutators
    [K_x, K_y] = -i K_z, [K_y, K_z] = i K_x, [K_z, K_x] = i K_y hold on the
    interior block of the truncated space.
    """
    return GeneratorSet(ws)


@dataclass(frozen=True)
class ThermalState:
    """Gibbs state of two degenerate oscillators, diagonal in the Fock basis.

    probs hold the per-sector diagonal after renormalizing away the
    truncation tail; partition_function is the exact closed form
    [2 sinh(beta omega / 2)]^-2 and leakage the tail weight that was cut.
    """

    ws: FockWorkspace
    beta: float
    omega: float
    probs: tuple
    partition_function: float
    leakage: float

    def mean_number(self) -> float:
        return float(
            sum(nd @ p for nd, p in zip(self.ws.n_diags, self.probs))
        )


def thermal_state(
    ws: FockWorkspace, beta: float, omega: float, *, leak_tol: float = 1e-10
) -> ThermalState:
    """Thermal state with diagonal weights exp(-beta omega (n1+n2+1)) / Z.

    Raises TruncationError when the retained basis misses more than
    leak_tol of the distribution, or when the boundary layer itself is
    populated above 1e-12 (squeezing applied later would amplify it).
    """
    if beta * omega <= 0.0:
        raise ValueError(f"beta*omega must be positive, got beta={beta}, omega={omega}")
    # weights e^{-beta omega (n1+n2+1)} / Z rewritten as q^(n1+n2) (1-q)^2 with
    # q = e^{-beta omega}: identical distribution, but stable deep in the
    # zero-temperature limit where Z itself underflows
    q = math.exp(-beta * omega)
    norm = (1.0 - q) ** 2
    z = math.exp(-beta * omega) / norm if norm > 0.0 else math.inf
    raw = [norm * q ** (s.n1 + s.n2).astype(float) for s in ws.sectors]
    retained = float(sum(p.sum() for p in raw))
    leakage = 1.0 - retained
    if leakage > leak_tol:
        raise TruncationError(
            f"thermal tail beyond n_max={ws.n_max} holds {leakage:.3e} > {leak_tol:.1e} "
            f"of the weight (beta*omega = {beta * omega:.3g}); increase n_max"
        )
    boundary = max(
        float(p[m].max()) if m.any() else 0.0 for p, m in zip(raw, ws.boundary_masks)
    )
    if boundary > 1e-12:
        raise TruncationError(
            f"thermal occupancy {boundary:.3e} at the n_max boundary exceeds 1e-12"
        )
    probs = tuple(p / retained for p in raw)
    return ThermalState(
        ws=ws, beta=beta, omega=omega, probs=probs, partition_function=z, leakage=leakage
    )


def _exp_i_kx(ws: FockWorkspace, s: float) -> BlockOperator:
    """exp(i s K_x) per sector from the cached eigendecomposition (exactly unitary)."""
    blocks = []
    for lam, vec in ws.kx_eig:
        blocks.append((vec * np.exp(1j * s * lam)) @ vec.T)
    return BlockOperator(ws, blocks, unitary=True)


def _exp_i_ky(ws: FockWorkspace, s: float) -> BlockOperator:
    """exp(i s K_y) = D exp(i s K_x) D+ with D = diag((-i)^k) per sector."""
    blocks = []
    for (lam, vec), sec in zip(ws.kx_eig, ws.sectors):
        d = (-1j) ** np.arange(sec.size)
        e = (vec * np.exp(1j * s * lam)) @ vec.T
        blocks.append((d[:, None] * e) * d.conj()[None, :])
    return BlockOperator(ws, blocks, unitary=True)


def _phase_kz(ws: FockWorkspace, s: float) -> BlockOperator:
    diags = [np.exp(1j * s * kz) for kz in ws.kz_diags]
    op = BlockOperator.from_diagonal(ws, diags, hermitian=False)
    op.unitary = True
    return op


def boundary_occupancy(op: BlockOperator, state: ThermalState) -> float:
    """Total weight of op rho op+ on the n_max boundary layer."""
    if op.ws is not state.ws:
        raise ValueError("operator and state live on different workspaces")
    w = 0.0
    for block, p, mask in zip(op.blocks, state.probs, op.ws.boundary_masks):
        if mask.any():
            w += float((np.abs(block[mask, :]) ** 2 @ p).sum())
    return w


def evolved_boundary_occupancy(factors, state: ThermalState) -> float:
    """Worst boundary occupancy along the chain rho -> F1 rho F1+ -> (F2 F1) rho ....

    `factors` are the unitary factors ordered as they are applied to the
    state (rightmost factor of the operator product first).  Diagonal
    phase factors cannot move population, so they are skipped.
    """
    worst = 0.0
    acc = None
    for f in factors:
        if f.diags is not None:
            continue
        acc = f if acc is None else f @ acc
        worst = max(worst, boundary_occupancy(acc, state))
    return worst


def _guard_leakage(factors, state, leak_tol: float, label: str) -> None:
    if state is None:
        return
    leak = evolved_boundary_occupancy(factors, state)
    if leak > leak_tol:
        raise TruncationError(
            f"{label}: boundary occupancy {leak:.3e} exceeds leakage budget {leak_tol:.1e} "
            f"at n_max={state.ws.n_max}; increase n_max or reduce the squeezing"
        )


def unitary_product(
    angles: InterferometerAngles,
    ws: FockWorkspace,
    *,
    state: ThermalState | None = None,
    leak_tol: float = 1e-8,
) -> BlockOperator:
    """The squeeze / phase / anti-squeeze product
    exp(-i zeta K_x) exp(-i phi K_z) exp(i zeta K_x).

    When a state is supplied, the boundary occupancy of the intermediate
    squeezed state and of the final state is checked against leak_tol (the
    intermediate squeeze is the binding constraint: it spreads the state by
    zeta even when the composed chi is small).
    """
    first = _exp_i_kx(ws, angles.zeta)
    mid = _phase_kz(ws, -angles.phi)
    last = _exp_i_kx(ws, -angles.zeta)
    _guard_leakage((first, mid, last), state, leak_tol, "unitary_product")
    return last @ (mid @ first)


def unitary_equiv(
    endpoints: ProtocolEndpoints,
    ws: FockWorkspace,
    *,
    state: ThermalState | None = None,
    leak_tol: float = 1e-8,
) -> BlockOperator:
    """The endpoint form exp(i theta K_z) exp(i chi K_y) exp(-i theta K_z)."""
    first = _phase_kz(ws, -endpoints.theta)
    mid = _exp_i_ky(ws, endpoints.chi)
    last = _phase_kz(ws, endpoints.theta)
    _guard_leakage((first, mid, last), state, leak_tol, "unitary_equiv")
    return last @ (mid @ first)


def evolution_endpoint(
    f_y_tf: float,
    f_z_tf: float,
    ws: FockWorkspace,
    *,
    state: ThermalState | None = None,
    leak_tol: float = 1e-8,
) -> BlockOperator:
    """The time-ordered endpoint unitary exp(-i f_z K_z) exp(-i f_y K_y)."""
    first = _exp_i_ky(ws, -f_y_tf)
    last = _phase_kz(ws, -f_z_tf)
    _guard_leakage((first, last), state, leak_tol, "evolution_endpoint")
    return last @ first


def hamiltonian_final(omega_f: float, f_y_tf: float, ws: FockWorkspace) -> BlockOperator:
    """End-of-stroke Heisenberg Hamiltonian
    2 omega_f [cosh(f_y) K_z - sinh(f_y) K_x]; reduces to omega_f (N + 1)
    at f_y = 0."""
    ch, sh = math.cosh(f_y_tf), math.sinh(f_y_tf)
    blocks = []
    for kz, kx in zip(ws.kz_diags, ws.kx_blocks):
        blocks.append(2.0 * omega_f * (ch * np.diag(kz) - sh * kx))
    return BlockOperator(ws, blocks, hermitian=True)


def number_operator(ws: FockWorkspace) -> BlockOperator:
    return BlockOperator.from_diagonal(ws, ws.n_diags)


def expect(op: BlockOperator, state: ThermalState) -> float:
    """Tr[O rho] for the diagonal state; warns if the imaginary residue
    exceeds 1e-10 (it should only ever be rounding noise)."""
    if op.ws is not state.ws:
        raise ValueError("operator and state live on different workspaces")
    val = sum(complex(np.dot(d, p)) for d, p in zip(op.diagonal(), state.probs))
    if abs(val.imag) > _IMAG_RESIDUE_TOL:
        warnings.warn(
            f"expectation has imaginary residue {val.imag:.3e}", stacklevel=2
        )
    return float(val.real)


def variance(op: BlockOperator, state: ThermalState) -> float:
    """Tr[O^2 rho] - Tr[O rho]^2; the Hermitian path uses row norms of O
    instead of forming O^2."""
    if op.ws is not state.ws:
        raise ValueError("operator and state live on different workspaces")
    mean = expect(op, state)
    if op.hermitian:
        # (O^2)_jj = sum_k |O_jk|^2 for Hermitian O
        second = sum(
            float(np.dot((np.abs(b) ** 2).sum(axis=1), p))
            for b, p in zip(op.blocks, state.probs)
        )
    else:
        second = sum(
            float(np.real(np.dot(np.diagonal(b @ b), p)))
            for b, p in zip(op.blocks, state.probs)
        )
    return second - mean * mean
