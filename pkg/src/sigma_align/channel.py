"""Random time-varying channels, time expansion, and the diagonal T matrices.

A draw holds one bounded scalar per (user, antenna, slot).  Time expansion
turns each user's channel into a tall block-diagonal matrix; stacking the
expanded channels of an alignment set gives the square system whose
solution blocks are the diagonal T matrices the precoders are built from.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import numerics
from .errors import NotDiagonal, SingularStack, UnknownPath
from .numerics import DEFAULT_TOL, Tolerance
from .region import SigmaConfig

RATIONAL_DEN = 64
RATIONAL_NUM_LO = 32
RATIONAL_NUM_HI = 128  # inclusive; support is [1/2, 2] in both modes


@dataclass
class ChannelDraw:
    """Per-slot channel vectors for every user, one array per group.

    Array shapes: h_a (la, n1, mu_n), h_b1 (lb, n1, mu_n),
    h_b2 (lb, n2, mu_n), h_c (lc, n2, mu_n).  Float mode stores float64,
    exact mode stores Fraction objects.
    """

    cfg: SigmaConfig
    mu_n: int
    seed: int
    mode: str
    h_a: np.ndarray
    h_b1: np.ndarray
    h_b2: np.ndarray
    h_c: np.ndarray

    @property
    def exact(self) -> bool:
        return self.mode == "rational"


def _draw_block(rng, count, n_ant, mu_n, mode):
    if mode == "float":
        lo, hi = math.log(0.5), math.log(2.0)
        return np.exp(rng.uniform(lo, hi, size=(count, n_ant, mu_n)))
    # Exact mode: k/64 with k in {32..128}, sampled without replacement
    # along each (user, antenna) time series so T diagonals never repeat
    # a value within one series.
    n_values = RATIONAL_NUM_HI - RATIONAL_NUM_LO + 1
    if mu_n > n_values:
        raise ValueError(
            f"rational mode supports at most {n_values} slots, got {mu_n}")
    out = np.empty((count, n_ant, mu_n), dtype=object)
    for u in range(count):
        for a in range(n_ant):
            ks = RATIONAL_NUM_LO + rng.permutation(n_values)[:mu_n]
            for t in range(mu_n):
                out[u, a, t] = Fraction(int(ks[t]), RATIONAL_DEN)
    return out


def draw(cfg: SigmaConfig, mu_n: int, seed: int, mode: str = "float") -> ChannelDraw:
    """Deterministic seeded channel draw with support [1/2, 2].

    Float mode draws log-uniform coefficients; exact mode draws rationals
    with fixed denominator 64 (a deliberate, bounded, non-continuous stand-in
    for the continuous distribution the alignment argument assumes).
    """
    if mu_n < 1:
        raise ValueError("mu_n must be positive")
    if mode not in ("float", "rational"):
        raise ValueError(f"unknown mode {mode!r}")
    rng = np.random.default_rng(seed)
    return ChannelDraw(
        cfg=cfg, mu_n=mu_n, seed=seed, mode=mode,
        h_a=_draw_block(rng, cfg.la, cfg.n1, mu_n, mode),
        h_b1=_draw_block(rng, cfg.lb, cfg.n1, mu_n, mode),
        h_b2=_draw_block(rng, cfg.lb, cfg.n2, mu_n, mode),
        h_c=_draw_block(rng, cfg.lc, cfg.n2, mu_n, mode),
    )


def _series(draw: ChannelDraw, path):
    """(n_ant, mu_n) array for one user's channel toward one BS."""
    kind = path[0]
    if kind == "a" and len(path) == 2 and 1 <= path[1] <= draw.cfg.la:
        return draw.h_a[path[1] - 1]
    if kind == "b" and len(path) == 3 and path[1] in (1, 2) \
            and 1 <= path[2] <= draw.cfg.lb:
        return (draw.h_b1 if path[1] == 1 else draw.h_b2)[path[2] - 1]
    if kind == "c" and len(path) == 2 and 1 <= path[1] <= draw.cfg.lc:
        return draw.h_c[path[1] - 1]
    raise UnknownPath(f"no channel path {path!r}")


def expand(draw: ChannelDraw, path) -> np.ndarray:
    """Block-diagonal time expansion: (n_ant * mu_n) x mu_n.

    Column t carries the slot-t channel vector in row block t; everything
    else is zero.  Paths are ("a", j), ("b", i, j), ("c", j), 1-based.
    """
    h = _series(draw, path)
    n_ant, mu_n = h.shape
    out = numerics.zeros_like_mode(draw.exact, n_ant * mu_n, mu_n)
    for t in range(mu_n):
        out[t * n_ant:(t + 1) * n_ant, t] = h[:, t]
    return out


@dataclass
class StackedChannel:
    """Square stack of the expanded channels of one alignment set at BS i."""

    i: int
    s_set: tuple[int, ...]
    matrix: np.ndarray


def stack(draw: ChannelDraw, i: int, s_set, tol: Tolerance = DEFAULT_TOL) -> StackedChannel:
    """Horizontal stack [H_tilde(b, i, j) for j in s_set]; must be invertible."""
    n_i = draw.cfg.n1 if i == 1 else draw.cfg.n2
    s_set = tuple(s_set)
    if len(s_set) != n_i:
        raise ValueError(f"need exactly {n_i} set members, got {len(s_set)}")
    m = np.hstack([expand(draw, ("b", i, j)) for j in s_set])
    if numerics.rank(m, tol) != m.shape[0]:
        raise SingularStack(
            f"stacked channel at BS {i}, set {s_set}, seed {draw.seed}")
    return StackedChannel(i=i, s_set=s_set, matrix=m)


def compute_t(draw: ChannelDraw, i: int, j: int, s_set,
              tol: Tolerance = DEFAULT_TOL) -> list[np.ndarray]:
    """The N_i diagonal matrices relating user j's channel to the stack at BS i.

    Solves stack(i, s_set) @ X = H_tilde(b, i, j) and splits X into N_i
    vertical mu_n x mu_n blocks.  Each block must come out diagonal
    (off-diagonal magnitude below col_match_tol in float mode, exactly
    zero in exact mode); anything else indicates an indexing bug.
    """
    if j in s_set:
        raise ValueError(f"user {j} is in the alignment set {tuple(s_set)}")
    stacked = stack(draw, i, s_set, tol)
    target = expand(draw, ("b", i, j))
    if draw.exact:
        x = numerics.solve_exact(stacked.matrix, target)
    else:
        try:
            x = np.linalg.solve(stacked.matrix, target)
        except np.linalg.LinAlgError as e:
            raise SingularStack(str(e)) from e
    mu_n = draw.mu_n
    n_i = len(s_set)
    blocks = [x[k * mu_n:(k + 1) * mu_n, :] for k in range(n_i)]
    for k, blk in enumerate(blocks):
        off = blk.copy()
        for t in range(mu_n):
            off[t, t] = Fraction(0) if draw.exact else 0.0
        if draw.exact:
            bad = any(off[r, c] != 0 for r in range(mu_n) for c in range(mu_n))
        else:
            bad = np.max(np.abs(off)) >= tol.col_match_tol
        if bad:
            raise NotDiagonal(f"T block {k + 1} for BS {i}, user {j}")
    return blocks


def t_diagonal(t_mat: np.ndarray) -> np.ndarray:
    """Diagonal of a T matrix as a 1-D array (mode preserved)."""
    return np.diagonal(t_mat).copy()
