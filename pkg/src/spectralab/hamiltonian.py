"""Spin-1/2 Pauli-sum Hamiltonians: Heisenberg chains/tori, magnetization
sectors, and full or partial eigensystems.

Basis convention: site 0 is the most significant bit, so the computational
basis state with bits ``b_0 b_1 ... b_{n-1}`` has index
``sum_i b_i 2^(n-1-i)``. This matches building operators with
``kron(site_0, kron(site_1, ...))``.
"""

from __future__ import annotations

import hashlib
import json
import warnings
from dataclasses import dataclass, field
from itertools import combinations

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from .linalg import hermitian_eig, lanczos_ground

PAULI_CHARS = frozenset("IXYZ")

# Size guards: dense eigensystems, sector-stored eigensystems, sparse
# ground-state solves.  Chosen so the default test suite runs in minutes.
DENSE_QUBIT_LIMIT = 14
SECTOR_QUBIT_LIMIT = 16
SPARSE_QUBIT_LIMIT = 24

DEGENERACY_GAP = 1e-10

# Single-qubit left-multiplication by Z: Z*X = iY, Z*Y = -iX (used for the
# symbolic magnetization-conservation check).
_Z_TIMES = {"X": (1j, "Y"), "Y": (-1j, "X")}


def _check_pauli_string(paulis: str, n: int) -> None:
    if len(paulis) != n:
        raise ValueError(f"pauli string {paulis!r} has length {len(paulis)}, expected {n}")
    bad = set(paulis) - PAULI_CHARS
    if bad:
        raise ValueError(f"invalid pauli characters {bad!r} in {paulis!r}")


@dataclass(frozen=True)
class PauliHamiltonian:
    """Weighted sum of n-qubit Pauli strings with real coefficients.

    Real coefficients on Hermitian strings make the operator Hermitian by
    construction. ``sz_sector_hint`` marks the magnetization sector that
    contains the ground state, when the builder knows it.
    """

    n: int
    terms: tuple[tuple[float, str], ...]
    sz_sector_hint: int | None = None

    def __post_init__(self) -> None:
        if self.n < 1:
            raise ValueError("need at least one qubit")
        for coeff, paulis in self.terms:
            _check_pauli_string(paulis, self.n)
            if not np.isfinite(coeff):
                raise ValueError("non-finite coefficient")

    @property
    def dim(self) -> int:
        return 1 << self.n

    def to_json_dict(self) -> dict:
        return {
            "n": self.n,
            "terms": [{"coeff": float(c), "paulis": p} for c, p in self.terms],
        }

    @classmethod
    def from_json_dict(cls, doc: dict) -> "PauliHamiltonian":
        terms = tuple((float(t["coeff"]), str(t["paulis"])) for t in doc["terms"])
        return cls(n=int(doc["n"]), terms=terms)

    def canonical_hash(self) -> str:
        doc = {"n": self.n, "terms": sorted((p, float(c)) for c, p in self.terms)}
        blob = json.dumps(doc, sort_keys=True, separators=(",", ":")).encode()
        return hashlib.sha256(blob).hexdigest()


def build_afhm_1d(n: int) -> PauliHamiltonian:
    """Antiferromagnetic Heisenberg ring on n sites.

    H = (1/4) * sum over distinct neighbor pairs {i, i+1 mod n} of
    (XX + YY + ZZ). For n = 2 the single pair {0, 1} appears once.
    """
    if n < 2:
        raise ValueError("ring needs at least 2 sites")
    edges = sorted({tuple(sorted((i, (i + 1) % n))) for i in range(n)})
    return PauliHamiltonian(
        n=n,
        terms=tuple(_heisenberg_terms(n, edges)),
        sz_sector_hint=n // 2 if n % 2 == 0 else None,
    )


def build_afhm_2d(side: int) -> PauliHamiltonian:
    """Antiferromagnetic Heisenberg model on a side x side torus.

    Sites are indexed row-major (site = row*side + col). Each distinct
    neighbor pair contributes one (XX + YY + ZZ)/4 triple; for side = 2
    the wrapped and unwrapped links coincide, leaving 4 edges.
    """
    if side < 2:
        raise ValueError("torus needs side >= 2")
    n = side * side
    edges = set()
    for r in range(side):
        for c in range(side):
            i = r * side + c
            edges.add(tuple(sorted((i, r * side + (c + 1) % side))))
            edges.add(tuple(sorted((i, ((r + 1) % side) * side + c))))
    return PauliHamiltonian(
        n=n,
        terms=tuple(_heisenberg_terms(n, sorted(edges))),
        sz_sector_hint=n // 2,
    )


def _heisenberg_terms(n: int, edges: list[tuple[int, int]]) -> list[tuple[float, str]]:
    terms = []
    for i, j in edges:
        for op in "XYZ":
            chars = ["I"] * n
            chars[i] = chars[j] = op
            terms.append((0.25, "".join(chars)))
    return terms


def permute_sites(h: PauliHamiltonian, perm: list[int]) -> PauliHamiltonian:
    """Relabel sites: new site perm[i] carries what site i carried before."""
    if sorted(perm) != list(range(h.n)):
        raise ValueError("perm must be a permutation of range(n)")
    terms = []
    for coeff, paulis in h.terms:
        chars = ["I"] * h.n
        for i, ch in enumerate(paulis):
            chars[perm[i]] = ch
        terms.append((coeff, "".join(chars)))
    return PauliHamiltonian(n=h.n, terms=tuple(terms), sz_sector_hint=h.sz_sector_hint)


def commutes_with_total_z(h: PauliHamiltonian) -> bool:
    """Exact symbolic check that h conserves total Z-magnetization.

    [H, sum_j Z_j] is expanded term by term; conservation holds iff every
    resulting Pauli string cancels.
    """
    acc: dict[str, complex] = {}
    for coeff, paulis in h.terms:
        for j, ch in enumerate(paulis):
            if ch in _Z_TIMES:
                factor, new = _Z_TIMES[ch]
                q = paulis[:j] + new + paulis[j + 1 :]
                acc[q] = acc.get(q, 0.0) + (-2.0) * coeff * factor
    return all(abs(v) <= 1e-12 for v in acc.values())


# ---------------------------------------------------------------------------
# Integer-basis Pauli application
# ---------------------------------------------------------------------------


def _term_masks(paulis: str, n: int) -> tuple[int, int, int]:
    """(flip mask, phase mask, #Y) for one Pauli string."""
    flip = 0
    phase = 0
    ny = 0
    for i, ch in enumerate(paulis):
        bit = 1 << (n - 1 - i)
        if ch in "XY":
            flip |= bit
        if ch in "ZY":
            phase |= bit
        if ch == "Y":
            ny += 1
    return flip, phase, ny


def apply_term(
    coeff: float, paulis: str, n: int, basis: np.ndarray
) -> tuple[np.ndarray, np.ndarray]:
    """Apply one weighted Pauli string to an array of basis integers.

    Returns ``(targets, amplitudes)``: the string maps ``|b>`` to
    ``amp * |b ^ flip>`` with ``amp = coeff * i^{#Y} * (-1)^{popcount(b & phase_mask)}``.
    """
    flip, phase_mask, ny = _term_masks(paulis, n)
    b = np.asarray(basis, dtype=np.uint64)
    targets = b ^ np.uint64(flip)
    signs = 1.0 - 2.0 * (np.bitwise_count(b & np.uint64(phase_mask)) & 1).astype(np.float64)
    amps = (coeff * (1j**ny)) * signs
    return targets, amps


def apply_hamiltonian(h: PauliHamiltonian, vec: np.ndarray) -> np.ndarray:
    """Matrix-free H @ vec over the full 2^n space."""
    if vec.shape[0] != h.dim:
        raise ValueError("vector length does not match Hamiltonian dimension")
    basis = np.arange(h.dim, dtype=np.uint64)
    out = np.zeros(h.dim, dtype=complex)
    for coeff, paulis in h.terms:
        targets, amps = apply_term(coeff, paulis, h.n, basis)
        # |b> -> amp |t>  contributes amp * vec[b] at row t.
        np.add.at(out, targets.astype(np.intp), amps * vec)
    return out


def full_matrix(h: PauliHamiltonian, sparse: bool = False) -> np.ndarray | sp.csr_matrix:
    """Materialize H over the full 2^n basis (dense by default)."""
    if h.n > (SPARSE_QUBIT_LIMIT if sparse else DENSE_QUBIT_LIMIT):
        raise ValueError(f"n = {h.n} exceeds the configured limit")
    basis = np.arange(h.dim, dtype=np.uint64)
    rows, cols, vals = [], [], []
    for coeff, paulis in h.terms:
        targets, amps = apply_term(coeff, paulis, h.n, basis)
        rows.append(targets.astype(np.intp))
        cols.append(basis.astype(np.intp))
        vals.append(amps)
    mat = sp.coo_matrix(
        (np.concatenate(vals), (np.concatenate(rows), np.concatenate(cols))),
        shape=(h.dim, h.dim),
    ).tocsr()
    return mat if sparse else mat.toarray()


def linear_operator(h: PauliHamiltonian) -> spla.LinearOperator:
    """Matrix-free LinearOperator view of H (memory-light Lanczos)."""
    return spla.LinearOperator(
        (h.dim, h.dim), matvec=lambda v: apply_hamiltonian(h, v), dtype=complex
    )


# ---------------------------------------------------------------------------
# Magnetization sectors
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SzSector:
    """Fixed Hamming-weight subspace: all n-bit strings with ``weight`` ones,
    in ascending integer (lexicographic) order."""

    n: int
    weight: int
    basis: np.ndarray = field(repr=False)

    @classmethod
    def build(cls, n: int, weight: int) -> "SzSector":
        if not 0 <= weight <= n:
            raise ValueError("weight outside [0, n]")
        states = [
            sum(1 << (n - 1 - i) for i in bits)
            for bits in combinations(range(n), weight)
        ]
        return cls(n=n, weight=weight, basis=np.sort(np.array(states, dtype=np.uint64)))

    @property
    def dim(self) -> int:
        return self.basis.size

    def index_of(self, states: np.ndarray) -> np.ndarray:
        """Positions of full-space basis integers inside this sector (-1 if absent)."""
        pos = np.searchsorted(self.basis, states)
        pos_clipped = np.minimum(pos, self.dim - 1)
        hit = self.basis[pos_clipped] == states
        return np.where(hit, pos_clipped, -1)


def sector_matrix(h: PauliHamiltonian, sector: SzSector, leak_tol: float = 1e-12) -> sp.csr_matrix:
    """Restrict H to a fixed-magnetization sector.

    Individual strings may leak outside the sector as long as the leaks
    cancel across terms (e.g. XX and YY on aligned spins); any uncancelled
    leakage raises ValueError.
    """
    if sector.n != h.n:
        raise ValueError("sector size does not match Hamiltonian")
    basis = sector.basis
    rows, cols, vals = [], [], []
    leak_src, leak_dst, leak_amp = [], [], []
    for coeff, paulis in h.terms:
        targets, amps = apply_term(coeff, paulis, h.n, basis)
        idx = sector.index_of(targets)
        inside = idx >= 0
        rows.append(idx[inside].astype(np.intp))
        cols.append(np.nonzero(inside)[0].astype(np.intp))
        vals.append(amps[inside])
        if not inside.all():
            out = ~inside
            leak_src.append(np.nonzero(out)[0])
            leak_dst.append(targets[out])
            leak_amp.append(amps[out])
    if leak_amp:
        src = np.concatenate(leak_src).astype(np.uint64)
        dst = np.concatenate(leak_dst)
        amp = np.concatenate(leak_amp)
        key = (src << np.uint64(h.n)) | dst
        uniq, inv = np.unique(key, return_inverse=True)
        sums = np.zeros(uniq.size, dtype=complex)
        np.add.at(sums, inv, amp)
        worst = float(np.abs(sums).max())
        if worst > leak_tol:
            raise ValueError(
                f"Hamiltonian does not preserve the magnetization sector "
                f"(uncancelled leakage {worst:.3e})"
            )
    mat = sp.coo_matrix(
        (np.concatenate(vals), (np.concatenate(rows), np.concatenate(cols))),
        shape=(sector.dim, sector.dim),
    ).tocsr()
    if mat.nnz and not np.any(mat.data.imag):
        # exactly real couplings (XX+YY pairs, Z diagonals): real symmetric
        # storage halves memory and speeds up the eigensolvers
        mat = sp.csr_matrix((mat.data.real, mat.indices, mat.indptr), shape=mat.shape)
    return mat


def embed_sector_vector(sector: SzSector, vec: np.ndarray) -> np.ndarray:
    """Scatter a sector-basis vector into the full 2^n space."""
    full = np.zeros(1 << sector.n, dtype=complex)
    full[sector.basis.astype(np.intp)] = vec
    return full


# ---------------------------------------------------------------------------
# Eigensystems
# ---------------------------------------------------------------------------


@dataclass
class SectorEigenBlock:
    sector: SzSector
    energies: np.ndarray
    vectors: np.ndarray  # (sector.dim, sector.dim), column i per energy i


@dataclass
class EigenSystem:
    """Globally sorted eigensystem of an n-qubit Hamiltonian.

    Either holds the eigenvectors densely (``vectors[:, i]`` in the full
    2^n basis) or keeps per-sector blocks with scatter-on-demand access.
    Intra-degenerate ordering is unspecified. ``sector_weights[i]`` records
    the magnetization sector of state i when sectors were used.
    """

    n: int
    energies: np.ndarray
    vectors: np.ndarray | None = None
    blocks: list[SectorEigenBlock] | None = None
    order: np.ndarray | None = None  # (k, 2) rows (block, column), global sort
    sector_weights: np.ndarray | None = None

    @property
    def k(self) -> int:
        return self.energies.size

    @property
    def dim(self) -> int:
        return 1 << self.n

    def state(self, i: int) -> np.ndarray:
        if self.vectors is not None:
            return self.vectors[:, i]
        b, c = self.order[i]
        block = self.blocks[b]
        return embed_sector_vector(block.sector, block.vectors[:, c])

    def iter_states(self):
        for i in range(self.k):
            yield self.state(i)

    def overlaps(self, psi: np.ndarray) -> np.ndarray:
        """Amplitudes <state_i | psi> in global energy order."""
        if psi.shape[0] != self.dim:
            raise ValueError("state length does not match eigensystem dimension")
        if self.vectors is not None:
            return self.vectors.conj().T @ psi
        amps = np.empty(self.k, dtype=complex)
        for i, (b, c) in enumerate(self.order):
            block = self.blocks[b]
            amps[i] = block.vectors[:, c].conj() @ psi[block.sector.basis.astype(np.intp)]
        return amps


def full_eigensystem(h: PauliHamiltonian, use_sectors: bool = True) -> EigenSystem:
    """All 2^n eigenpairs, ascending. Sector diagonalization is used when the
    Hamiltonian conserves magnetization; above the dense limit the states
    stay sector-compressed."""
    if use_sectors and commutes_with_total_z(h):
        if h.n > SECTOR_QUBIT_LIMIT:
            raise ValueError(f"n = {h.n} exceeds the sector limit {SECTOR_QUBIT_LIMIT}")
        blocks = []
        for w in range(h.n + 1):
            sector = SzSector.build(h.n, w)
            mat = sector_matrix(h, sector).toarray()
            res = hermitian_eig(mat)
            blocks.append(SectorEigenBlock(sector, res.eigenvalues, res.eigenvectors))
        energies = np.concatenate([b.energies for b in blocks])
        origin = np.concatenate(
            [np.stack([np.full(b.energies.size, ib), np.arange(b.energies.size)], axis=1)
             for ib, b in enumerate(blocks)]
        )
        weights = np.concatenate(
            [np.full(b.energies.size, b.sector.weight) for b in blocks]
        )
        sort = np.argsort(energies, kind="stable")
        system = EigenSystem(
            n=h.n,
            energies=energies[sort],
            blocks=blocks,
            order=origin[sort],
            sector_weights=weights[sort],
        )
        if h.n <= DENSE_QUBIT_LIMIT:
            dense = np.empty((system.dim, system.k), dtype=complex)
            for i in range(system.k):
                dense[:, i] = system.state(i)
            system = EigenSystem(
                n=h.n,
                energies=system.energies,
                vectors=dense,
                sector_weights=system.sector_weights,
            )
        return system
    if h.n > DENSE_QUBIT_LIMIT:
        raise ValueError(
            f"n = {h.n} exceeds the dense limit {DENSE_QUBIT_LIMIT} and the "
            "Hamiltonian does not conserve magnetization"
        )
    res = hermitian_eig(full_matrix(h))
    return EigenSystem(n=h.n, energies=res.eigenvalues, vectors=res.eigenvectors)


def stream_sector_eigensystems(h: PauliHamiltonian):
    """Yield (sector, energies, vectors) per magnetization sector without
    holding more than one diagonalized block in memory.

    Intended for systems above the materialization limit; the caller is
    responsible for global energy ordering across sectors. Large blocks use
    the plain in-place LAPACK driver, trading speed for a single-matrix
    memory footprint.
    """
    if not commutes_with_total_z(h):
        raise ValueError("Hamiltonian does not conserve magnetization")
    for w in range(h.n + 1):
        sector = SzSector.build(h.n, w)
        sparse_block = sector_matrix(h, sector)
        if sector.dim > 4096:
            import scipy.linalg as sla

            # Fortran-ordered dense block lets LAPACK factor in place
            # (single-matrix memory footprint).
            mat = sparse_block.toarray(order="F")
            del sparse_block
            vals, vecs = sla.eigh(mat, overwrite_a=True, driver="ev", check_finite=False)
            yield sector, vals, vecs
        else:
            res = hermitian_eig(sparse_block.toarray())
            yield sector, res.eigenvalues, res.eigenvectors


@dataclass(frozen=True)
class GroundStateResult:
    energy: float
    state: np.ndarray
    residual: float
    gap: float
    sector_weight: int | None

    def __iter__(self):
        # Allows `energy, state = ground_state(h)`.
        return iter((self.energy, self.state))


def _sector_ground(
    h: PauliHamiltonian, weight: int, tol: float
) -> tuple[float, np.ndarray, float, SzSector]:
    sector = SzSector.build(h.n, weight)
    mat = sector_matrix(h, sector)
    if sector.dim <= 64:
        res = hermitian_eig(mat.toarray())
        gap = float(res.eigenvalues[1] - res.eigenvalues[0]) if sector.dim > 1 else np.inf
        return float(res.eigenvalues[0]), res.eigenvectors[:, 0], gap, sector
    v0 = np.random.default_rng(0xA5F).standard_normal(sector.dim)
    vals, vecs = spla.eigsh(mat, k=2, which="SA", v0=v0 / np.linalg.norm(v0), tol=tol * 1e-2)
    order = np.argsort(vals)
    vals, vecs = vals[order], vecs[:, order]
    return float(vals[0]), vecs[:, 0] / np.linalg.norm(vecs[:, 0]), float(vals[1] - vals[0]), sector


def ground_state(h: PauliHamiltonian, tol: float = 1e-9) -> GroundStateResult:
    """Ground eigenpair via sector Lanczos (magnetization-conserving H) or a
    matrix-free full-space solve. Warns when the gap is below 1e-10."""
    if h.n > SPARSE_QUBIT_LIMIT:
        raise ValueError(f"n = {h.n} exceeds the sparse limit {SPARSE_QUBIT_LIMIT}")
    if commutes_with_total_z(h):
        weights = (
            [h.sz_sector_hint]
            if h.sz_sector_hint is not None
            else list(range(h.n + 1))
        )
        results = [_sector_ground(h, w, tol) for w in weights]
        results.sort(key=lambda r: r[0])
        energy, vec, gap, sector = results[0]
        if len(results) > 1:
            # The global gap may connect different sectors.
            gap = min(gap, results[1][0] - energy)
        state = embed_sector_vector(sector, vec)
        weight = sector.weight
    else:
        op = linear_operator(h)
        if h.dim <= 64:
            res = hermitian_eig(full_matrix(h))
            energy, state = float(res.eigenvalues[0]), res.eigenvectors[:, 0]
            gap = float(res.eigenvalues[1] - res.eigenvalues[0]) if h.dim > 1 else np.inf
        else:
            rng = np.random.default_rng(0xA5F)
            v0 = rng.standard_normal(h.dim)
            vals, vecs = spla.eigsh(op, k=2, which="SA", v0=v0 / np.linalg.norm(v0), tol=tol * 1e-2)
            order = np.argsort(vals)
            energy = float(vals[order[0]])
            state = vecs[:, order[0]] / np.linalg.norm(vecs[:, order[0]])
            gap = float(vals[order[1]] - vals[order[0]])
        weight = None
    residual = float(np.linalg.norm(apply_hamiltonian(h, state) - energy * state))
    if residual > tol:
        # Polish with a dense solve in small dimensions, else retry Lanczos.
        energy2, vec2 = lanczos_ground(
            sector_matrix(h, SzSector.build(h.n, weight)) if weight is not None else linear_operator(h),
            tol=tol,
        )
        if weight is not None:
            state = embed_sector_vector(SzSector.build(h.n, weight), vec2)
        else:
            state = vec2
        energy = energy2
        residual = float(np.linalg.norm(apply_hamiltonian(h, state) - energy * state))
    if gap < DEGENERACY_GAP:
        warnings.warn(
            f"ground state is degenerate within {DEGENERACY_GAP:g} (gap = {gap:.3e})",
            stacklevel=2,
        )
    return GroundStateResult(
        energy=energy, state=state, residual=residual, gap=gap, sector_weight=weight
    )
