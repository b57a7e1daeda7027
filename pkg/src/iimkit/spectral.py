"""Normalized Laplacian spectra, the spectral gap, and expander-mixing residuals."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .errors import ConvergenceError, GraphError, IsolatedVertexError, SizeLimitError
from .graph import Graph, SetLike, edge_count_between, induced_subgraph, iter_bits

DEFAULT_TOL = 1e-10
DEFAULT_MAX_SWEEPS = 100
DENSE_LIMIT = 2048
SYMMETRY_TOL = 1e-12


def normalized_laplacian(g: Graph) -> np.ndarray:
    """L = I - D^{-1/2} A D^{-1/2} as a dense float array."""
    iso = g.isolated_vertices()
    if iso:
        raise IsolatedVertexError(iso)
    n = g.n
    inv = [1.0 / math.sqrt(d) for d in g.degrees()]
    m = np.eye(n)
    for u, v in g.edges():
        w = -inv[u] * inv[v]
        m[u, v] = w
        m[v, u] = w
    return m


@dataclass(frozen=True)
class Spectrum:
    eigenvalues: tuple[float, ...]
    residual: float
    sweeps: int

    def __len__(self) -> int:
        return len(self.eigenvalues)

    def __getitem__(self, i: int) -> float:
        return self.eigenvalues[i]


def eigenvalues_symmetric(
    m, tol: float = DEFAULT_TOL, max_sweeps: int = DEFAULT_MAX_SWEEPS, limit: int = DENSE_LIMIT
) -> Spectrum:
    """All eigenvalues of a dense symmetric matrix by cyclic Jacobi rotations."""
    a = np.asarray(m, dtype=np.float64)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise GraphError(f"expected a square matrix, got shape {a.shape}")
    n = a.shape[0]
    if n > limit:
        raise SizeLimitError("eigenvalues_symmetric", n, limit)
    if n and np.max(np.abs(a - a.T)) > SYMMETRY_TOL:
        raise GraphError("matrix is not symmetric")
    eigs, sweeps, off, ok = _kernels.jacobi_eigenvalues(a, tol, max_sweeps)
    if not ok:
        raise ConvergenceError(
            f"Jacobi did not converge in {max_sweeps} sweeps (off-diagonal norm {off:.3e})"
        )
    return Spectrum(tuple(sorted(eigs)), off, sweeps)


def laplacian_spectrum(g: Graph, tol: float = DEFAULT_TOL) -> Spectrum:
    return eigenvalues_symmetric(normalized_laplacian(g), tol)


def gap_from_spectrum(s: Spectrum) -> float:
    ev = s.eigenvalues
    if len(ev) < 2:
        raise GraphError("spectral gap needs at least 2 vertices")
    return max(abs(ev[1] - 1.0), abs(ev[-1] - 1.0))


@dataclass(frozen=True)
class GapResult:
    gap: float
    spectrum: Spectrum
    isolated: tuple[int, ...]
    """Isolated vertices dropped before the computation (empty if none)."""

    @property
    def flagged(self) -> bool:
        return bool(self.isolated)


def spectral_gap_info(g: Graph, tol: float = DEFAULT_TOL) -> GapResult:
    """Gap with isolated vertices removed first; the removal is reported."""
    iso = tuple(g.isolated_vertices())
    core = g
    if iso:
        keep = g.full
        for v in iso:
            keep &= ~(1 << v)
        core, _ = induced_subgraph(g, keep)
    if core.n < 2:
        raise IsolatedVertexError(list(iso) or list(range(g.n)))
    s = laplacian_spectrum(core, tol)
    return GapResult(gap_from_spectrum(s), s, iso)


def spectral_gap(g: Graph, tol: float = DEFAULT_TOL) -> float:
    """max(|lambda_1 - 1|, |lambda_{n-1} - 1|); needs n >= 2 and no isolates."""
    if g.n < 2:
        raise GraphError("spectral gap needs at least 2 vertices")
    return gap_from_spectrum(laplacian_spectrum(g, tol))


def volume(g: Graph, x: SetLike) -> int:
    return sum(g.adj[v].bit_count() for v in iter_bits(g.mask(x)))


def check_expander_mixing(g: Graph, x: SetLike, gap: float | None = None) -> float:
    """lambda*vol(X)*vol(co-X)/vol(G) - |2|E(X)| - vol(X)^2/vol(G)|.

    Non-negative (up to rounding) whenever the mixing inequality holds.
    """
    iso = g.isolated_vertices()
    if iso:
        raise IsolatedVertexError(iso)
    xm = g.mask(x)
    lam = spectral_gap(g) if gap is None else gap
    vol_g = 2 * g.edge_count()
    vx = volume(g, xm)
    vxc = vol_g - vx
    ex = edge_count_between(g, xm, xm)
    return lam * vx * vxc / vol_g - abs(2 * ex - vx * vx / vol_g)


def spectrum_csv_row(graph_id: str, s: Spectrum) -> str:
    vals = ",".join(f"{x:.12g}" for x in s.eigenvalues)
    return f"{graph_id},{vals},{gap_from_spectrum(s):.12g}"


def spectrum_csv(rows: list[tuple[str, Spectrum]]) -> str:
    width = max((len(s) for _, s in rows), default=0)
    header = "graph_id," + ",".join(f"lambda_{i}" for i in range(width)) + ",gap"
    return "\n".join([header] + [spectrum_csv_row(gid, s) for gid, s in rows]) + "\n"
