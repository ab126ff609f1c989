"""Diagonal-plus-shift operator assembled from 2x2 triangular blocks.

Block ``j`` acts on coordinates ``(2j-1, 2j)`` as

    A_j = [[mu1, w], [0, mu2]],   mu1 = exp(2 pi i/m_j^2),  mu2 = exp(4 pi i/m_j^2),

so the operator is ``D + B`` with ``D`` diagonal and ``B`` a weighted backward shift
whose even-indexed weights vanish. Over the reals the block becomes the 4x4 matrix
obtained by writing each complex coordinate as a (real, imaginary) pair.

Powers are exact: ``A^n`` has the closed form
``[[mu1^n, (mu1^n - mu2^n)/(mu1 - mu2) w], [0, mu2^n]]`` and every root of unity is
evaluated from an exact residue, so ``A^{m_j^2}`` is the identity to the last bit.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .density import ReturnSet, upper_banach_window, window_counts
from .seqspace import SparseVector, SpaceConfig

EXCLUSION_EPS = 2.0 / (3.0 * math.pi)


class StructureError(ValueError):
    """Vector does not fit the block structure or scalar field of the operator."""


class InvalidWitness(ValueError):
    """Vector fails the coordinate inequality that drives the window bound."""


def _turn_power(turn: Fraction, ns):
    """``exp(2 pi i n turn)`` with ``n * turn`` reduced exactly modulo 1."""
    p, q = turn.numerator, turn.denominator
    if np.ndim(ns) == 0:
        r = (int(ns) * p) % q
        if r == 0:
            return 1.0 + 0.0j
        return complex(np.exp(2j * np.pi * (r / q)))
    r = (np.asarray(ns, dtype=np.int64) * p) % q
    out = np.exp(2j * np.pi * (r / q))
    out[r == 0] = 1.0
    return out


@dataclass(frozen=True)
class Block2:
    """Upper-triangular 2x2 block with unimodular diagonal given in turns."""

    turn1: Fraction
    turn2: Fraction
    w: complex

    def __post_init__(self):
        if Fraction(self.turn1) % 1 == Fraction(self.turn2) % 1:
            raise ValueError("diagonal entries must differ")

    @classmethod
    def for_level(cls, m: int, w: complex) -> "Block2":
        return cls(Fraction(1, m * m), Fraction(2, m * m), complex(w))

    @property
    def mu1(self) -> complex:
        return _turn_power(self.turn1, 1)

    @property
    def mu2(self) -> complex:
        return _turn_power(self.turn2, 1)

    @property
    def period(self) -> int:
        return math.lcm(self.turn1.denominator, self.turn2.denominator)

    def matrix(self) -> np.ndarray:
        return np.array([[self.mu1, self.w], [0, self.mu2]], dtype=complex)

    def power_entries(self, ns):
        """``(mu1^n, A^n[0,1], mu2^n)``, scalar or vectorised over ``ns``."""
        a = _turn_power(self.turn1, ns)
        d = _turn_power(self.turn2, ns)
        c = (a - d) / (self.mu1 - self.mu2) * self.w
        return a, c, d


def block_power(b: Block2, n: int) -> np.ndarray:
    a, c, d = b.power_entries(n)
    return np.array([[a, c], [0, d]], dtype=complex)


@dataclass(frozen=True)
class BoundCheck:
    value: float
    bound: float
    in_window: bool

    @property
    def holds(self) -> bool:
        return (not self.in_window) or self.value >= self.bound - 1e-9


def in_growth_window(m: int, n) -> np.ndarray | bool:
    """``n = l m^2 + k`` with ``m <= k <= m^2 - m``."""
    k = np.asarray(n) % (m * m)
    res = (k >= m) & (k <= m * m - m)
    return bool(res) if np.ndim(n) == 0 else res


def coord12_bound_check(b: Block2, m: int, n: int) -> BoundCheck:
    """``|A^n[0,1]|`` against ``2 m |w| / pi`` for the block of level ``m``."""
    _, c, _ = b.power_entries(n)
    return BoundCheck(abs(c), 2 * m * abs(b.w) / math.pi, in_growth_window(m, n))


# ---------------------------------------------------------------------------
# parameters


def default_m_schedule(j: int) -> int:
    return j * math.ceil(2 ** (j / 2)) + j + 1


def _eval_schedule(expr: str, j: int) -> int:
    names = {"j": j, "ceil": math.ceil, "floor": math.floor, "sqrt": math.sqrt, "log": math.log}
    return int(eval(expr, {"__builtins__": {}}, names))  # noqa: S307 - config expressions only


@dataclass(frozen=True)
class BlockParams:
    v: tuple[float, ...]
    omega: tuple[complex, ...]  # omega[j-1] is the weight at coordinate 2j-1
    m: tuple[int, ...]
    field: str = "complex"
    space: SpaceConfig = SpaceConfig()

    def __post_init__(self):
        if self.field not in ("complex", "real"):
            raise ValueError(f"field must be 'complex' or 'real', got {self.field!r}")
        if not len(self.v) == len(self.omega) == len(self.m):
            raise ValueError("v, omega and m must have the same length")
        problems = self.violations()
        if problems:
            raise ValueError("; ".join(problems))

    @classmethod
    def default(cls, j_max: int = 8, field: str = "complex", v_rate: float = 0.5,
                m_schedule: str | Sequence[int] | None = None,
                space: SpaceConfig = SpaceConfig()) -> "BlockParams":
        """``v_j = omega_{2j-1} = v_rate^j``; ``m_j`` from the schedule, raised where needed.

        Expressions in ``j`` (and the default schedule) are raised until every
        structural check in :meth:`violations` passes. Explicit lists are taken as given.
        """
        v = tuple(v_rate**j for j in range(1, j_max + 1))
        omega = tuple(complex(x) for x in v)
        if m_schedule is not None and not isinstance(m_schedule, str):
            m = tuple(int(x) for x in m_schedule)
            if len(m) < j_max:
                raise ValueError(f"explicit m schedule needs {j_max} entries")
            return cls(v, omega, m[:j_max], field, space)
        m: list[int] = []
        for j in range(1, j_max + 1):
            mj = default_m_schedule(j) if m_schedule is None else _eval_schedule(m_schedule, j)
            mj = max(mj, j + 1, 3 if field == "real" else 2)
            if m:
                mj = max(mj, m[-1] + 1)
                # m_j |omega_j| > m_{j-1} |omega_{j-1}|
                mj = max(mj, math.floor(m[-1] * abs(omega[j - 2]) / abs(omega[j - 1])) + 1)
            m.append(mj)
        return cls(v, omega, tuple(m), field, space)

    def violations(self) -> list[str]:
        out = []
        m = self.m
        if any(mj <= j for j, mj in enumerate(m, start=1)):
            out.append("need m_j > j")
        if any(b <= a for a, b in zip(m, m[1:])):
            out.append("m must be strictly increasing")
        if any(w == 0 or abs(w) > v + 1e-15 for w, v in zip(self.omega, self.v)):
            out.append("need 0 < |omega_{2j-1}| <= v_j")
        r = self.witness_levels()
        if any(b >= a for a, b in zip(r, r[1:])):
            out.append("1/(m_j |omega_{2j-1}|) must be strictly decreasing")
        if self.field == "real" and m and m[0] <= 2:
            out.append("real field needs m_1 > 2")
        return out

    @property
    def j_max(self) -> int:
        return len(self.m)

    @property
    def block_size(self) -> int:
        return 2 if self.field == "complex" else 4

    def witness_levels(self) -> list[float]:
        """``1/(m_j |omega_{2j-1}|)`` for each generated block."""
        return [1.0 / (mj * abs(w)) for mj, w in zip(self.m, self.omega)]

    def block(self, j: int) -> Block2:
        if not 1 <= j <= self.j_max:
            raise StructureError(f"block {j} outside the generated range 1..{self.j_max}")
        return Block2.for_level(self.m[j - 1], self.omega[j - 1])

    def diagonal(self, n_blocks: int | None = None) -> np.ndarray:
        """``lambda_1, lambda_2, ...`` of the complex operator (two per block)."""
        n_blocks = self.j_max if n_blocks is None else n_blocks
        out = []
        for j in range(1, n_blocks + 1):
            b = self.block(j)
            out += [b.mu1, b.mu2]
        return np.array(out)

    def dense_matrix(self, n_blocks: int | None = None) -> np.ndarray:
        """Matrix of the complex operator restricted to the first ``n_blocks`` blocks."""
        n_blocks = self.j_max if n_blocks is None else n_blocks
        a = np.zeros((2 * n_blocks, 2 * n_blocks), dtype=complex)
        for j in range(1, n_blocks + 1):
            a[2 * j - 2:2 * j, 2 * j - 2:2 * j] = self.block(j).matrix()
        return a


# ---------------------------------------------------------------------------
# the operator on finitely supported vectors


def _blocks_of(p: BlockParams, x: SparseVector) -> dict[int, np.ndarray]:
    """Group the coordinates of ``x`` by block as complex pairs ``(z1, z2)``."""
    if p.field == "real" and not x.is_real:
        raise StructureError("real-field operator applied to a complex vector")
    size = p.block_size
    out: dict[int, np.ndarray] = {}
    for k, val in x:
        j, pos = divmod(k - 1, size)
        j += 1
        if j > p.j_max:
            raise StructureError(f"index {k} lies in block {j} > j_max={p.j_max}")
        pair = out.setdefault(j, np.zeros(2, dtype=complex))
        if size == 2:
            pair[pos] += val
        else:
            pair[pos // 2] += val if pos % 2 == 0 else 1j * val
    return out


def _emit(p: BlockParams, j: int, z1, z2) -> dict[int, complex | float]:
    if p.block_size == 2:
        return {2 * j - 1: z1, 2 * j: z2}
    base = 4 * j - 3
    return {base: z1.real, base + 1: z1.imag, base + 2: z2.real, base + 3: z2.imag}


def apply_op(p: BlockParams, x: SparseVector, n: int = 1) -> SparseVector:
    """Exact ``T^n x``; the support stays inside the blocks ``x`` touches."""
    if n < 0:
        raise ValueError("n must be >= 0")
    entries: dict[int, complex | float] = {}
    for j, (z1, z2) in _blocks_of(p, x).items():
        a, c, d = p.block(j).power_entries(n)
        entries.update(_emit(p, j, a * z1 + c * z2, d * z2))
    return SparseVector(entries)


def orbit_distances(p: BlockParams, x: SparseVector, ns) -> np.ndarray:
    """``||T^n x - x||`` for every ``n`` in ``ns`` (vectorised over ``n``)."""
    ns = np.asarray(ns, dtype=np.int64)
    q = p.space.p
    acc = np.zeros(ns.shape, dtype=float)
    for j, (z1, z2) in _blocks_of(p, x).items():
        a, c, d = p.block(j).power_entries(ns)
        y1, y2 = a * z1 + c * z2 - z1, d * z2 - z2
        if p.block_size == 2:
            parts = [np.abs(y1), np.abs(y2)]
        else:
            parts = [np.abs(y1.real), np.abs(y1.imag), np.abs(y2.real), np.abs(y2.imag)]
        for part in parts:
            acc = np.maximum(acc, part) if math.isinf(q) else acc + part**q
    return acc if math.isinf(q) else acc ** (1.0 / q)


def return_set(p: BlockParams, x: SparseVector, radius: float, horizon: int,
               chunk: int = 1 << 20) -> ReturnSet:
    """``{1 <= n <= horizon : ||T^n x - x|| < radius}``."""
    hits = []
    for start in range(1, horizon + 1, chunk):
        ns = np.arange(start, min(start + chunk, horizon + 1), dtype=np.int64)
        hits.append(ns[orbit_distances(p, x, ns) < radius])
    times = np.concatenate(hits) if hits else np.empty(0, dtype=np.int64)
    return ReturnSet(tuple(times.tolist()), horizon)


# ---------------------------------------------------------------------------
# witness vectors and the window bound


def witness_index(p: BlockParams, j: int) -> int:
    """Coordinate whose size drives the window bound: ``2j`` (complex) or ``4j`` (real)."""
    return 2 * j if p.field == "complex" else 4 * j


def g_witness(p: BlockParams, J, margin: float = 2.0) -> SparseVector:
    """Vector with ``|x_{witness(j)}| = margin / (m_j |omega_{2j-1}|)`` for ``j in J``."""
    J = sorted(set(J))
    if not J:
        raise ValueError("J must be nonempty")
    if not margin > 1:
        raise ValueError("margin must be > 1 for a strict inequality")
    levels = p.witness_levels()
    for j in J:
        p.block(j)
    return SparseVector({witness_index(p, j): margin * levels[j - 1] for j in J})


@dataclass
class ExclusionReport:
    j: int
    m_j: int
    eps: float
    radius: float
    horizon: int
    returns: ReturnSet
    window_counts: np.ndarray  # counts of [s+1, s+m_j^2] for s = 0..horizon-m_j^2
    bd_estimate: float

    @property
    def window(self) -> int:
        return self.m_j**2

    @property
    def max_count(self) -> int:
        return int(self.window_counts.max(initial=0))

    @property
    def count_bound(self) -> int:
        return 2 * self.m_j

    @property
    def bd_bound(self) -> float:
        return 2 * self.m_j / self.m_j**2

    @property
    def holds(self) -> bool:
        return self.max_count <= self.count_bound and self.bd_estimate <= self.bd_bound + 1e-15


def rrec_exclusion_report(p: BlockParams, x: SparseVector, j: int, horizon: int | None = None,
                          check_witness: bool = True) -> ExclusionReport:
    """Return set of ``x`` into the ball of radius ``eps/K``, ``eps = 2/(3 pi)``, and its windows of length ``m_j^2``."""
    m = p.m[j - 1]
    window = m * m
    horizon = 3 * window if horizon is None else horizon
    if check_witness:
        level = p.witness_levels()[j - 1]
        if not abs(x[witness_index(p, j)]) > level:
            raise InvalidWitness(f"|x_{witness_index(p, j)}| must exceed {level:.6g}")
        if horizon < 3 * window:
            raise InvalidWitness("horizon must cover three periods m_j^2")
    radius = EXCLUSION_EPS / p.space.K
    s = return_set(p, x, radius, horizon)
    return ExclusionReport(j, m, EXCLUSION_EPS, radius, horizon, s,
                           window_counts(s, window), upper_banach_window(s, window))


# ---------------------------------------------------------------------------
# periodic eigenvectors


@dataclass(frozen=True)
class Eigenpair:
    value: complex
    vector: SparseVector
    residual: float
    period_error: float


def unimodular_eigenvectors(p: BlockParams, j: int) -> tuple[Eigenpair, Eigenpair]:
    """The two eigenvectors of block ``j``, with ``||Tx - lam x||`` and ``||T^{m_j^2} x - x||``."""
    if p.field != "complex":
        raise StructureError("eigenvectors are taken over the complex field")
    b = p.block(j)
    i1, i2 = 2 * j - 1, 2 * j
    pairs = [(b.mu1, SparseVector({i1: 1.0})),
             (b.mu2, SparseVector({i2: 1.0, i1: b.w / (b.mu2 - b.mu1)}))]
    out = []
    for lam, v in pairs:
        res = np.max(np.abs((apply_op(p, v, 1) - v * lam).to_dense(i2)), initial=0.0)
        per = np.max(np.abs((apply_op(p, v, b.period) - v).to_dense(i2)), initial=0.0)
        out.append(Eigenpair(lam, v, float(res), float(per)))
    return out[0], out[1]


# ---------------------------------------------------------------------------
# real blocks and the complexification conjugacy


def real_block(p: BlockParams, j: int) -> np.ndarray:
    """4x4 real matrix of block ``j``: two rotations and the realified weight."""
    m = p.m[j - 1]
    w = p.omega[j - 1]
    t1, t2 = 2 * math.pi / m**2, 4 * math.pi / m**2
    return np.array([
        [math.cos(t1), -math.sin(t1), w.real, -w.imag],
        [math.sin(t1), math.cos(t1), w.imag, w.real],
        [0.0, 0.0, math.cos(t2), -math.sin(t2)],
        [0.0, 0.0, math.sin(t2), math.cos(t2)],
    ])


def phi(x4: np.ndarray) -> np.ndarray:
    """Pair real coordinates ``(2k-1, 2k)`` into the complex coordinate ``k``."""
    x4 = np.asarray(x4, dtype=float)
    return x4[0::2] + 1j * x4[1::2]


def conjugacy_check(p: BlockParams, j: int, n: int, samples: int = 8, seed: int = 0) -> float:
    """Max deviation between ``phi(B_j^n x)`` and ``A_j^n phi(x)`` over random real ``x``."""
    rng = np.random.default_rng(seed)
    bn = np.linalg.matrix_power(real_block(p, j), n)
    an = block_power(p.block(j), n)
    dev = 0.0
    for _ in range(samples):
        x = rng.normal(size=4)
        dev = max(dev, float(np.max(np.abs(phi(bn @ x) - an @ phi(x)))))
    return dev
