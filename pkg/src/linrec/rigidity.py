"""A recurrent operator whose recurrent vectors are not dense lineable.

The operator acts on finitely supported coordinate vectors as

    T x = R x + sum_{k>=3} (1/m_{k-1}) <w_k, P x> e_k,

where ``R`` is diagonal with entries ``exp(2 pi i / m_k)``, ``P`` projects onto the
first two coordinates and each ``w_k`` is a rescaled element of a dense sequence in
the unit sphere of ``span{e_1*, e_2*}``. The integers ``m_k`` grow so fast that
their ratios dwarf the norms of the ``w_k``; Python integers carry them exactly,
and every root of unity is evaluated from an exact residue ``n mod m``.

Only the coordinates ``k <= k_max`` of an orbit point are computed. The discarded
part is controlled by ``tail_sum``: since consecutive ``m_k`` differ at least by a
factor 2, ``sum_{k>K} ||w_k|| / m_{k-1} <= 2 W / m_K`` with ``W = max_k ||w_k||``.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterator, Sequence

import numpy as np
from scipy.stats import qmc

from .density import ReturnSet
from .seqspace import (
    CoordFunctional,
    SparseVector,
    SpaceConfig,
    dual_norm,
    eval_functional,
    norm,
)

TWO_PI = 2.0 * math.pi


class CertificateNotFound(RuntimeError):
    """No admissible return time reached the requested radius."""

    def __init__(self, msg: str, best: float):
        super().__init__(f"{msg} (best upper bracket {best:.3e})")
        self.best = best


# ---------------------------------------------------------------------------
# roots of unity from exact residues


def _ratio(a: int, m: int) -> float:
    # correctly rounded a/m for arbitrary-size ints; never converts m to float
    return a / m


def root_power(m: int, n: int) -> complex:
    """``exp(2 pi i n / m)`` with the angle reduced exactly modulo ``m``."""
    r = n % m
    if r == 0:
        return 1.0 + 0.0j
    if 2 * r == m:
        return -1.0 + 0.0j
    return cmath.exp(1j * TWO_PI * _ratio(r, m))


def _sin_pi_frac(a: int, m: int) -> float:
    """``sin(pi a / m)`` to full relative precision, exactly zero when ``m | a``."""
    q, r = divmod(a, m)
    if r == 0:
        return 0.0
    s = math.sin(math.pi * _ratio(min(r, m - r), m))
    return -s if q % 2 else s


def geometric_sum(m: int, n: int) -> complex:
    """``sum_{j<n} lam^j`` for ``lam = exp(2 pi i / m)``.

    Uses ``lam^((n-1)/2) * sin(pi n/m) / sin(pi/m)``; the usual quotient
    ``(lam^n - 1)/(lam - 1)`` loses all precision once ``m`` is large.
    """
    if n < 0:
        raise ValueError("n must be >= 0")
    if m == 1:
        return complex(n)
    num = _sin_pi_frac(n, m)
    if num == 0.0:
        return 0j
    phase = cmath.exp(1j * math.pi * _ratio((n - 1) % (2 * m), m))
    return phase * (num / math.sin(math.pi * _ratio(1, m)))


def geometric_sum_direct(m: int, n: int) -> complex:
    """Term-by-term summation; reference for small ``n``."""
    lam = cmath.exp(1j * TWO_PI / m) if m > 1 else 1.0
    acc, p = 0j, 1.0 + 0j
    for _ in range(n):
        acc += p
        p *= lam
    return acc


def geometric_sum_abs_array(m: int, ns: np.ndarray) -> np.ndarray:
    """Vectorised ``|sum_{j<n} exp(2 pi i j/m)|`` for an int64 array ``ns``."""
    ns = np.asarray(ns, dtype=np.int64)
    if m == 1:
        return ns.astype(float)
    if m < 2**62:
        r = ns % m
        s = np.minimum(r, m - r).astype(float) * _ratio(1, m)
    else:
        if ns.size and 2 * int(ns.max()) > m:
            raise ValueError("n beyond m/2 needs exact residues")
        s = ns.astype(float) * _ratio(1, m)
    return np.abs(np.sin(np.pi * s)) / math.sin(math.pi * _ratio(1, m))


# ---------------------------------------------------------------------------
# construction


@dataclass(frozen=True)
class RigidityConfig:
    p: float = 2.0
    K: float = 1.0
    j_max: int = 12
    k_max: int | None = None
    beta: float = 1.0
    n_part: int = 4
    growth_factor: int = 4

    def __post_init__(self):
        if self.k_max is None:
            object.__setattr__(self, "k_max", 2 * self.j_max)
        if self.j_max < 4 or self.k_max < self.j_max:
            raise ValueError("need j_max >= 4 and k_max >= j_max")
        if self.n_part < 1 or self.growth_factor < 2:
            raise ValueError("need n_part >= 1 and growth_factor >= 2")

    @property
    def space(self) -> SpaceConfig:
        return SpaceConfig(self.p, self.K)


def sphere_directions(count: int, cfg: SpaceConfig, skip: int = 0) -> Iterator[CoordFunctional]:
    """Dense sequence in the unit sphere of ``span{e_1*, e_2*}``.

    Halton points in ``[0,1)^3`` become ``(cos t e^{i a}, sin t e^{i b})`` with
    ``t in [0, pi/2]``; each is normalised in the dual norm.
    """
    pts = qmc.Halton(d=3, scramble=False)
    if skip:
        pts.fast_forward(skip)
    for u, a, b in pts.random(count):
        t = 0.5 * math.pi * u
        f = CoordFunctional({1: math.cos(t) * cmath.exp(1j * TWO_PI * a),
                             2: math.sin(t) * cmath.exp(1j * TWO_PI * b)})
        yield f / dual_norm(f, cfg)


@dataclass
class RigidityOperator:
    cfg: RigidityConfig
    z: SparseVector
    wtilde: dict[int, CoordFunctional]  # partition class n -> unit functional
    _m: list[int] = field(default_factory=list, repr=False)
    _w: dict[int, tuple[CoordFunctional, float]] = field(default_factory=dict, repr=False)

    @classmethod
    def build(cls, cfg: RigidityConfig = RigidityConfig(), zero_tol: float = 1e-9) -> "RigidityOperator":
        space = cfg.space
        z = SparseVector({1: math.cos(cfg.beta), 2: math.sin(cfg.beta)})
        z = z / norm(z, space)
        wtilde: dict[int, CoordFunctional] = {}
        n, drawn = 3, 0
        while len(wtilde) < cfg.n_part:
            for f in sphere_directions(4 * cfg.n_part, space, skip=drawn):
                drawn += 1
                if abs(eval_functional(f, z)) > zero_tol:
                    wtilde[n] = f
                    n += 1
                    if len(wtilde) == cfg.n_part:
                        break
        op = cls(cfg, z, wtilde)
        op._extend_m(cfg.k_max + 1)
        return op

    # -- data of the construction -------------------------------------------

    @property
    def K(self) -> float:
        return self.cfg.K

    @property
    def space(self) -> SpaceConfig:
        return self.cfg.space

    @property
    def k_max(self) -> int:
        return self.cfg.k_max

    @property
    def classes(self) -> tuple[int, ...]:
        return tuple(self.wtilde)

    def class_of(self, k: int) -> int:
        """Partition class of ``k >= 3``: ``A_n = {k >= 3 : k = n - 3 mod n_part}``."""
        if k < 3:
            raise ValueError("only indices k >= 3 are partitioned")
        return 3 + (k - 3) % self.cfg.n_part

    def class_members(self, n: int, upto: int) -> list[int]:
        return [k for k in range(3, upto + 1) if self.class_of(k) == n]

    def _w_entry(self, k: int) -> tuple[CoordFunctional, float]:
        n = self.class_of(k)
        if n not in self._w:
            f = self.wtilde[n]
            wk = f / abs(eval_functional(f, self.z))
            self._w[n] = (wk, dual_norm(wk, self.space))
        return self._w[n]

    def w(self, k: int) -> CoordFunctional:
        return self._w_entry(k)[0]

    def w_norm(self, k: int) -> float:
        return self._w_entry(k)[1]

    @cached_property
    def w_sup(self) -> float:
        """``max_k ||w_k||``; finitely many classes, so this is exact."""
        return max(dual_norm(f, self.space) / abs(eval_functional(f, self.z)) for f in self.wtilde.values())

    def _extend_m(self, upto: int) -> None:
        m = self._m
        if not m:
            m.extend([1, 1, 2])  # m_1, m_2, m_3
        g = self.cfg.growth_factor
        while len(m) < upto:
            j = len(m)  # extending m_j -> m_{j+1}
            # the first term of the tail at level j+1 is ||w_{j+2}|| m_j / m_{j+1} ~ g^{-j}
            factor = max(2, math.ceil(self.w_norm(j + 2) * g**j))
            m.append(m[-1] * factor)

    def m(self, k: int) -> int:
        if k < 1:
            raise ValueError("m_k is indexed from 1")
        if k > len(self._m):
            self._extend_m(k)
        return self._m[k - 1]

    def lam(self, k: int) -> complex:
        return root_power(self.m(k), 1)

    def tail_sum(self, k0: int) -> float:
        """Upper bound on ``sum_{k>k0} ||w_k|| / m_{k-1}``."""
        return 2.0 * self.w_sup * _ratio(1, self.m(k0))

    def c(self, j: int, k_cut: int | None = None) -> float:
        """Tail quantity ``m_{j-1} sum_{k>j} ||w_k|| / m_{k-1}`` (bounded above)."""
        k_cut = max(self.k_max, j) if k_cut is None else k_cut
        mj = self.m(j - 1)
        s = sum(self.w_norm(k) * _ratio(mj, self.m(k - 1)) for k in range(j + 1, k_cut + 1))
        return s + 2.0 * self.w_sup * _ratio(mj, self.m(k_cut))

    def validate(self) -> dict[str, bool]:
        """Finite checks of every structural requirement on the generated range."""
        cfg, space = self.cfg, self.space
        ks = range(3, self.k_max + 1)
        cs = [self.c(j) for j in range(3, cfg.j_max + 1)]
        checks = {
            "m1_m2_one": self.m(1) == 1 and self.m(2) == 1,
            "m_divides_next": all(self.m(k + 1) % self.m(k) == 0 for k in range(1, self.k_max + 1)),
            "tail_strictly_decreasing": all(b < a for a, b in zip(cs, cs[1:])),
            "tail_small_at_j_max": cs[-1] < 1e-6,
            "z_not_annihilated": all(abs(eval_functional(f, self.z)) > 1e-9 for f in self.wtilde.values()),
            "unit_pairing_with_z": all(abs(abs(eval_functional(self.w(k), self.z)) - 1) <= 1e-12 for k in ks),
            "w_norm_floor": all(self.w_norm(k) >= 1 / norm(self.z, space) - 1e-12 for k in ks),
            "unit_wtilde": all(abs(dual_norm(f, space) - 1) <= 1e-12 for f in self.wtilde.values()),
        }
        return checks

    # -- the operator -------------------------------------------------------------

    def x0_vector(self, n_class: int, rng: np.random.Generator, support: int = 8,
                  scale: float = 1.0) -> SparseVector:
        """Random vector with ``P x`` in the kernel of ``wtilde[n_class]``."""
        f = self.wtilde[n_class]
        t = complex(rng.normal(), rng.normal())
        entries = {1: t * f[2], 2: -t * f[1]}
        for k in range(3, support + 1):
            entries[k] = complex(rng.normal(), rng.normal())
        x = SparseVector(entries)
        return x * (scale / norm(x, self.space))


def project_P(x: SparseVector) -> SparseVector:
    return x.restrict((1, 2))


def lambda_kn(op: RigidityOperator, k: int, n: int) -> complex:
    """``sum_{j<n} lam_k^j``."""
    return geometric_sum(op.m(k), n)


def _perturbation(op: RigidityOperator, px: SparseVector, k: int) -> complex:
    if k < 3 or not px:
        return 0j
    return eval_functional(op.w(k), px)


def power_coeff(op: RigidityOperator, x: SparseVector, n: int, k: int,
                _px: SparseVector | None = None) -> complex:
    """Coordinate ``k`` of ``T^n x`` in closed form."""
    px = project_P(x) if _px is None else _px
    val = root_power(op.m(k), n) * x[k]
    if k >= 3 and px:
        mk1 = op.m(k - 1)
        val += geometric_sum(op.m(k), n) * _ratio(1, mk1) * _perturbation(op, px, k)
    return val


def power(op: RigidityOperator, x: SparseVector, n: int, k_max: int | None = None) -> tuple[SparseVector, float]:
    """``T^n x`` truncated to ``k <= k_max`` and a bound on the norm of the rest."""
    k_max = op.k_max if k_max is None else k_max
    if x.kmax > k_max:
        raise ValueError("k_max must cover the support of x")
    px = project_P(x)
    y = SparseVector((k, power_coeff(op, x, n, k, px)) for k in range(1, k_max + 1))
    return y, tail_bound(op, px, n, k_max)


def tail_bound(op: RigidityOperator, px: SparseVector, n: int, k_max: int) -> float:
    """Bound on ``||sum_{k>k_max} (lam_{k,n}/m_{k-1}) <w_k, Px> e_k||`` using ``|lam_{k,n}| <= n``."""
    pn = norm(px, op.space)
    if pn == 0:
        return 0.0
    return 2.0 * op.w_sup * pn * _ratio(n, op.m(k_max))


def apply_T(op: RigidityOperator, x: SparseVector, k_max: int | None = None) -> tuple[SparseVector, float]:
    """One application of the defining formula, truncated to ``k <= k_max``."""
    k_max = op.k_max if k_max is None else k_max
    if x.kmax > k_max:
        raise ValueError("k_max must cover the support of x")
    px = project_P(x)
    entries = {k: op.lam(k) * v for k, v in x}
    if px:
        for k in range(3, k_max + 1):
            entries[k] = entries.get(k, 0j) + eval_functional(op.w(k), px) * _ratio(1, op.m(k - 1))
    tb = norm(px, op.space) * op.tail_sum(k_max)
    return SparseVector(entries), tb


def iterate_T(op: RigidityOperator, x: SparseVector, n: int, k_max: int | None = None) -> SparseVector:
    """``n``-fold :func:`apply_T`; truncation is harmless since ``T`` only reads ``P x``."""
    k_max = op.k_max if k_max is None else k_max
    y = x
    for _ in range(n):
        y, _ = apply_T(op, y, k_max)
    return y


# ---------------------------------------------------------------------------
# orbit brackets


@dataclass(frozen=True)
class Bracket:
    n: int
    lower: float
    upper: float


def distance_bracket(op: RigidityOperator, x: SparseVector, n: int, k_max: int | None = None) -> Bracket:
    """``lower <= ||T^n x - x|| <= upper``.

    The lower end is ``max_k |<e_k*, T^n x - x>| / K`` over ``k <= k_max``; the upper end
    adds the tail bound to the norm of the truncated difference.
    """
    y, tb = power(op, x, n, k_max)
    d = y - x
    lower = max((abs(v) for _, v in d), default=0.0) / op.K
    return Bracket(n, lower, norm(d, op.space) + tb)


def orbit_distance_trace(op: RigidityOperator, x: SparseVector, horizon: int,
                         k_max: int | None = None, times: Sequence[int] | None = None) -> list[Bracket]:
    ns = range(1, horizon + 1) if times is None else sorted(set(times))
    return [distance_bracket(op, x, n, k_max) for n in ns]


# ---------------------------------------------------------------------------
# recurrence of vectors with P x in a kernel class


def kernel_classes(op: RigidityOperator, x: SparseVector, tol: float = 1e-9) -> list[int]:
    """Partition classes ``n`` with ``<wtilde_n, P x> = 0`` (up to ``tol * ||Px||``)."""
    px = project_P(x)
    scale = max(norm(px, op.space), 1.0)
    return [n for n, f in op.wtilde.items() if abs(eval_functional(f, px)) <= tol * scale]


def _candidates(op: RigidityOperator, x: SparseVector, tol: float) -> list[int]:
    classes = set(kernel_classes(op, x, tol))
    if not classes:
        raise ValueError("P x is not annihilated by any wtilde_n")
    lo = max(3, x.kmax + 1)
    # k_j < k_max keeps at least one exactly computed coordinate beyond k_j
    return [k for k in range(lo, op.k_max) if op.class_of(k) in classes]


@dataclass(frozen=True)
class RecurrenceCertificate:
    n_class: int
    k_j: int
    time: int
    upper: float
    lower: float
    bound: float  # 2 K ||x|| c_{k_j}


def recurrence_certificate(op: RigidityOperator, x: SparseVector, eps: float,
                           tol: float = 1e-9) -> RecurrenceCertificate:
    """First ``k_j`` in a kernel class with ``||T^{m_{k_j-1}} x - x|| < eps`` certified."""
    best = math.inf
    xn = norm(x, op.space)
    for kj in _candidates(op, x, tol):
        n = op.m(kj - 1)
        br = distance_bracket(op, x, n)
        best = min(best, br.upper)
        if br.upper < eps:
            return RecurrenceCertificate(op.class_of(kj), kj, n, br.upper, br.lower,
                                         2 * op.K * xn * op.c(kj))
    raise CertificateNotFound(f"no return time below eps={eps:g} for k_j < {op.k_max}", best)


@dataclass(frozen=True)
class APWitness:
    k_j: int
    step: int
    length: int
    brackets: tuple[Bracket, ...]
    bound: float  # 2 K ||x|| L c_{k_j}

    @property
    def times(self) -> tuple[int, ...]:
        return tuple(b.n for b in self.brackets)

    def return_set(self) -> ReturnSet:
        return ReturnSet(self.times, self.times[-1])


def ap_witness(op: RigidityOperator, x: SparseVector, eps: float, L: int,
               tol: float = 1e-9) -> APWitness:
    """Progression ``{l m_{k_j-1} : 1 <= l <= L}`` of verified returns into the eps-ball."""
    if L < 1:
        raise ValueError("L must be >= 1")
    xn = norm(x, op.space)
    best = math.inf
    for kj in _candidates(op, x, tol):
        bound = 2 * op.K * xn * L * op.c(kj)
        best = min(best, bound)
        if bound >= eps:
            continue
        step = op.m(kj - 1)
        brs = tuple(distance_bracket(op, x, l * step) for l in range(1, L + 1))
        if all(b.upper < eps for b in brs):
            return APWitness(kj, step, L, brs, bound)
        best = min(best, max(b.upper for b in brs))
    raise CertificateNotFound(f"no progression of length {L} within eps={eps:g}", best)


# ---------------------------------------------------------------------------
# the non-recurrence floor on P^{-1}(z)


@dataclass(frozen=True)
class FloorReport:
    floor: float
    enumerated_min: float
    enumerated_upto: int
    bands: tuple[tuple[int, int, int, float], ...]  # (k, n_lo, n_hi, certified floor)
    target: float  # 1 / (K pi)
    chain_bound: float  # (1/K)(1/pi - max_k 2|x_k|) over the bands' k

    @property
    def horizon(self) -> int:
        return max([self.enumerated_upto] + [b[2] for b in self.bands])


def first_level(op: RigidityOperator, n: int) -> int:
    """``min{j >= 3 : 2n <= m_j}``."""
    k = 3
    while 2 * n > op.m(k):
        k += 1
    return k


def nonrecurrence_floor(op: RigidityOperator, x: SparseVector, horizon: int | None = None,
                        enumerate_upto: int = 4096, tol: float = 1e-12) -> FloorReport:
    """Certified lower bound on ``min_{1<=n<=horizon} ||T^n x - x||`` for ``P x = z``.

    Times up to ``enumerate_upto`` are bracketed one by one. Beyond that the range
    is split into bands ``m_{k-1} < 2n <= m_k``; inside a band the coordinate ``k``
    of ``T^n x - x`` has modulus at least ``|lam_{k,n}|/m_{k-1} - |lam_k^n - 1||x_k|``,
    and ``|lam_{k,n}|`` increases with ``n`` there, so its band minimum sits at the
    band's first time.
    """
    gap = project_P(x) - op.z
    if max((abs(v) for _, v in gap), default=0.0) > tol:
        raise ValueError("x must satisfy P x = z")
    horizon = op.m(op.cfg.j_max - 1) if horizon is None else horizon
    upto = min(enumerate_upto, horizon)
    px = project_P(x)
    enum_min = min((distance_bracket(op, x, n).lower for n in range(1, upto + 1)), default=math.inf)

    bands = []
    k = first_level(op, upto + 1) if upto < horizon else None
    while k is not None:
        lo = max(upto + 1, op.m(k - 1) // 2 + 1)
        hi = min(horizon, op.m(k) // 2)
        if lo <= hi:
            pert = abs(geometric_sum(op.m(k), lo)) * _ratio(1, op.m(k - 1)) * abs(_perturbation(op, px, k))
            drift = 2.0 * abs(_sin_pi_frac(hi, op.m(k))) * abs(x[k])
            bands.append((k, lo, hi, (pert - drift) / op.K))
        if hi >= horizon:
            break
        k += 1
    floor = min([enum_min] + [b[3] for b in bands])
    top = first_level(op, horizon)
    chain = (1 / math.pi - max((2 * abs(x[j]) for j in range(3, top + 1)), default=0.0)) / op.K
    return FloorReport(floor, enum_min, upto, tuple(bands), 1 / (op.K * math.pi), chain)
