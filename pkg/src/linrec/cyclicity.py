"""Eigenstructure and cyclic vectors of finite upper-triangular matrices.

With pairwise distinct diagonal entries an upper-triangular ``T`` is
``L D L^{-1}`` for the unit upper-triangular ``L`` whose columns are the
eigenvectors obtained by back-substitution, and ``x`` is cyclic for the diagonal
``D`` exactly when no coordinate of ``x`` vanishes. The Krylov rank functions give
an independent numerical route to the same answers.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

RANK_RTOL = 1e-9


class RepeatedEigenvalueError(ValueError):
    pass


class ConjugateCollisionError(ValueError):
    pass


class ConditioningWarning(UserWarning):
    pass


@dataclass(frozen=True)
class TriMatrix:
    a: np.ndarray

    def __post_init__(self):
        a = np.array(self.a, dtype=complex)
        if a.ndim != 2 or a.shape[0] != a.shape[1]:
            raise ValueError("need a square matrix")
        if np.any(np.tril(a, -1) != 0):
            raise ValueError("entries below the diagonal must be exactly zero")
        a.setflags(write=False)
        object.__setattr__(self, "a", a)

    @classmethod
    def diagonal_matrix(cls, d) -> "TriMatrix":
        return cls(np.diag(np.asarray(d, dtype=complex)))

    @property
    def N(self) -> int:
        return self.a.shape[0]

    @property
    def diagonal(self) -> np.ndarray:
        return np.diag(self.a).copy()

    @property
    def distinct(self) -> bool:
        return min_gap(self.diagonal) > 0

    @property
    def scale(self) -> float:
        return max(float(np.max(np.abs(self.a), initial=0.0)), 1e-300)


def min_gap(values) -> float:
    v = np.asarray(values, dtype=complex)
    if v.size < 2:
        return np.inf
    diff = np.abs(v[:, None] - v[None, :])
    diff[np.diag_indices(v.size)] = np.inf
    return float(diff.min())


def _check_distinct(t: TriMatrix, warn_rtol: float = 1e-10) -> None:
    gap = min_gap(t.diagonal)
    if gap == 0:
        raise RepeatedEigenvalueError("diagonal entries must be pairwise distinct")
    if gap < warn_rtol * t.scale:
        warnings.warn(f"diagonal gap {gap:.2e} makes the eigenvector basis ill-conditioned",
                      ConditioningWarning, stacklevel=3)


def diagonalize(t: TriMatrix) -> tuple[np.ndarray, np.ndarray]:
    """``(L, D)`` with ``T = L D L^{-1}``; column ``k`` of ``L`` solves ``(T - lam_k) v = 0``, ``v_k = 1``."""
    _check_distinct(t)
    a, lam, n = t.a, t.diagonal, t.N
    L = np.zeros((n, n), dtype=complex)
    for k in range(n):
        v = L[:, k]
        v[k] = 1.0
        for i in range(k - 1, -1, -1):
            v[i] = -(a[i, i + 1:k + 1] @ v[i + 1:k + 1]) / (lam[i] - lam[k])
    return L, np.diag(lam)


def diagonalize_residual(t: TriMatrix) -> float:
    L, D = diagonalize(t)
    return float(np.max(np.abs(L @ D @ np.linalg.inv(L) - t.a)))


def eigen_span_check(t: TriMatrix, rtol: float = RANK_RTOL) -> bool:
    """Do the back-substituted eigenvectors span the whole space numerically?"""
    L, _ = diagonalize(t)
    s = np.linalg.svd(L, compute_uv=False)
    return bool(s[-1] > rtol * s[0])


def diag_cyclic_test(d, x, tol: float = 0.0) -> bool:
    """Cyclicity of ``x`` for ``Diag(d)``: every coordinate is nonzero."""
    d = np.asarray(d, dtype=complex)
    if min_gap(d) == 0:
        raise RepeatedEigenvalueError("diagonal entries must be pairwise distinct")
    return bool(np.all(np.abs(np.asarray(x, dtype=complex)) > tol))


def _as_matrix(t) -> np.ndarray:
    return t.a if isinstance(t, TriMatrix) else np.asarray(t, dtype=complex)


def _numerical_rank(cols: np.ndarray, rtol: float) -> int:
    norms = np.linalg.norm(cols, axis=0)
    live = norms > 0
    if not live.any():
        return 0
    m = cols[:, live] / norms[live]
    s = np.linalg.svd(m, compute_uv=False)
    return int(np.sum(s > rtol * s[0]))


def krylov_matrix(t, x, n_cols: int | None = None, basis: str = "monomial") -> np.ndarray:
    """Columns ``p_0(T)x, ..., p_{n-1}(T)x`` with ``p_i = t^i`` or ``prod_{l<i}(t - lam_l)``.

    Both bases span the same Krylov space; the Newton-type basis shifted by the
    diagonal stays well conditioned when eigenvalues cluster.
    """
    a = _as_matrix(t)
    v = np.asarray(x, dtype=complex)
    n = a.shape[0] if n_cols is None else n_cols
    lam = np.diag(a)
    cols = []
    for i in range(n):
        cols.append(v)
        if basis == "monomial":
            v = a @ v
        elif basis == "newton":
            v = a @ v - lam[i % len(lam)] * v
        else:
            raise ValueError(f"unknown basis {basis!r}")
    return np.column_stack(cols)


def krylov_rank(t, x, basis: str = "monomial", rtol: float = RANK_RTOL) -> int:
    """Numerical rank of ``[x | Tx | ... | T^{N-1} x]`` (columns normalised)."""
    return _numerical_rank(krylov_matrix(t, x, basis=basis), rtol)


def realify(v: np.ndarray) -> np.ndarray:
    v = np.asarray(v, dtype=complex)
    return np.concatenate([v.real, v.imag], axis=0)


def real_krylov_matrix(t, x, basis: str = "newton") -> np.ndarray:
    """Realified images ``p(T)x`` for real polynomials of degree ``< 2N``.

    The ``newton`` basis alternates ``prod_{l<i} q_l`` and ``(t - Re lam_i) prod_{l<i} q_l``
    with the real quadratics ``q_l = (t - lam_l)(t - conj(lam_l))``.
    """
    a = _as_matrix(t)
    n = a.shape[0]
    v = np.asarray(x, dtype=complex)
    cols = []
    if basis == "monomial":
        for _ in range(2 * n):
            cols.append(realify(v))
            v = a @ v
        return np.column_stack(cols)
    if basis != "newton":
        raise ValueError(f"unknown basis {basis!r}")
    lam = np.diag(a)
    for i in range(n):
        cols.append(realify(v))
        cols.append(realify(a @ v - lam[i].real * v))
        av = a @ v
        v = a @ av - 2 * lam[i].real * av + abs(lam[i]) ** 2 * v
    return np.column_stack(cols)


def realified_krylov_rank(t, x, basis: str = "newton", rtol: float = RANK_RTOL) -> int:
    """Rank over the reals of the real-polynomial images of ``x``; ``2N`` means real-cyclic."""
    return _numerical_rank(real_krylov_matrix(t, x, basis), rtol)


def check_conjugate_distinct(d, tol: float = 1e-12) -> None:
    """All of ``lam_k`` and ``conj(lam_k)`` must be pairwise distinct."""
    d = np.asarray(d, dtype=complex)
    if min_gap(np.concatenate([d, d.conj()])) <= tol:
        raise ConjugateCollisionError(
            "some lam_k is real or equals conj(lam_l); real polynomials cannot separate them")


def real_cyclic_test(d, x, tol: float = 0.0) -> bool:
    """Cyclicity of ``x`` for ``Diag(d)`` under polynomials with real coefficients."""
    check_conjugate_distinct(d)
    return bool(np.all(np.abs(np.asarray(x, dtype=complex)) > tol))


def random_tri_matrix(n: int, rng: np.random.Generator, min_sep: float = 0.2) -> TriMatrix:
    """Upper-triangular matrix with a well separated complex diagonal in the unit disk."""
    lam: list[complex] = []
    while len(lam) < n:
        c = complex(*rng.uniform(-1, 1, size=2))
        if abs(c) <= 1 and all(abs(c - l) >= min_sep for l in lam):
            lam.append(c)
    a = np.triu(rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n)), 1) * 0.5
    return TriMatrix(a + np.diag(lam))


# ---------------------------------------------------------------------------
# text format: row-major, whitespace separated, '#' comments, complex as a+bi


def parse_matrix(text: str) -> np.ndarray:
    rows = []
    for line in text.splitlines():
        line = line.split("#", 1)[0].strip()
        if line:
            rows.append([complex(tok.replace("i", "j")) for tok in line.split()])
    if not rows or any(len(r) != len(rows[0]) for r in rows):
        raise ValueError("matrix rows must be nonempty and of equal length")
    return np.array(rows, dtype=complex)


def format_matrix(a: np.ndarray) -> str:
    def fmt(v: complex) -> str:
        sign = "+" if v.imag >= 0 else "-"
        return f"{v.real!r}{sign}{abs(v.imag)!r}i"
    return "\n".join(" ".join(fmt(complex(v)) for v in row) for row in np.asarray(a)) + "\n"
