"""Coordinate model of a separable Banach space with a bounded biorthogonal system.

Vectors are finitely supported coordinate sequences indexed from 1 (elements of
``c_00``), functionals are finitely supported coefficient sequences acting by the
bilinear pairing ``<f, x> = sum_k f_k x_k``. The ambient norm is an l^p norm and
``K`` bounds every coordinate functional, ``|<e_k*, x>| <= K ||x||``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from types import MappingProxyType
from typing import Iterable, Mapping, Union

import numpy as np

Scalar = Union[float, complex]

#: Tolerance for algebraic identities.
ALG_TOL = 1e-12
#: Tolerance for derived quantities.
DERIVED_TOL = 1e-9


@dataclass(frozen=True)
class SpaceConfig:
    """Norm exponent ``p`` (``math.inf`` allowed) and the coordinate constant ``K``."""

    p: float = 2.0
    K: float = 1.0

    def __post_init__(self):
        if not self.p >= 1:
            raise ValueError(f"norm exponent must be >= 1, got {self.p}")
        if not self.K > 0:
            raise ValueError(f"K must be positive, got {self.K}")

    @property
    def dual_p(self) -> float:
        if self.p == 1:
            return math.inf
        if math.isinf(self.p):
            return 1.0
        return self.p / (self.p - 1.0)


def _clean(value) -> Scalar:
    if isinstance(value, (complex, np.complexfloating)):
        value = complex(value)
        return value if value.imag != 0 else value.real
    return float(value)


class _FiniteCoords:
    """Shared storage: index >= 1 -> nonzero scalar, read-only."""

    __slots__ = ("_entries",)

    def __init__(self, entries: Mapping[int, Scalar] | Iterable[tuple[int, Scalar]] = ()):
        items = entries.items() if isinstance(entries, Mapping) else entries
        store: dict[int, Scalar] = {}
        for k, v in items:
            k = int(k)
            if k < 1:
                raise ValueError(f"coordinate indices start at 1, got {k}")
            v = _clean(v)
            if v != 0:
                store[k] = store.get(k, 0.0) + v
                if store[k] == 0:
                    del store[k]
        self._entries = MappingProxyType(dict(sorted(store.items())))

    @property
    def entries(self) -> Mapping[int, Scalar]:
        return self._entries

    @property
    def support(self) -> tuple[int, ...]:
        return tuple(self._entries)

    @property
    def kmax(self) -> int:
        """Largest index in the support, 0 for the zero element."""
        return max(self._entries, default=0)

    @property
    def is_real(self) -> bool:
        return all(not isinstance(v, complex) for v in self._entries.values())

    def __getitem__(self, k: int) -> Scalar:
        return self._entries.get(k, 0.0)

    def __len__(self):
        return len(self._entries)

    def __iter__(self):
        return iter(self._entries.items())

    def __eq__(self, other):
        return type(self) is type(other) and dict(self._entries) == dict(other._entries)

    def __hash__(self):
        return hash((type(self).__name__, tuple(self._entries.items())))

    def __repr__(self):
        return f"{type(self).__name__}({format_coords(self)!r})"

    def to_dense(self, n: int | None = None, dtype=complex) -> np.ndarray:
        """Coordinates 1..n as an array (index 0 holds coordinate 1)."""
        n = self.kmax if n is None else n
        out = np.zeros(n, dtype=dtype)
        for k, v in self._entries.items():
            if k > n:
                raise ValueError(f"support reaches index {k} > {n}")
            out[k - 1] = v
        return out

    @classmethod
    def from_dense(cls, values, start: int = 1):
        return cls((start + i, v) for i, v in enumerate(values))

    @classmethod
    def basis(cls, k: int, value: Scalar = 1.0):
        return cls({k: value})

    # linear structure
    def __add__(self, other):
        if type(other) is not type(self):
            return NotImplemented
        return type(self)(list(self) + list(other))

    def __neg__(self):
        return type(self)((k, -v) for k, v in self)

    def __sub__(self, other):
        if type(other) is not type(self):
            return NotImplemented
        return self + (-other)

    def __mul__(self, alpha):
        if not isinstance(alpha, (int, float, complex, np.number)):
            return NotImplemented
        return type(self)((k, alpha * v) for k, v in self)

    __rmul__ = __mul__

    def __truediv__(self, alpha):
        return self * (1.0 / alpha)

    def restrict(self, indices: Iterable[int]):
        keep = set(indices)
        return type(self)((k, v) for k, v in self if k in keep)

    def truncate(self, kmax: int):
        return type(self)((k, v) for k, v in self if k <= kmax)


class SparseVector(_FiniteCoords):
    """Finitely supported vector ``x = sum_k x_k e_k``."""

    __slots__ = ()


class CoordFunctional(_FiniteCoords):
    """Finitely supported functional ``f = sum_k f_k e_k*``."""

    __slots__ = ()

    def __call__(self, x: SparseVector) -> Scalar:
        return eval_functional(self, x)


def eval_functional(f: CoordFunctional, x: SparseVector) -> Scalar:
    """Bilinear pairing over the common support."""
    fe, xe = f.entries, x.entries
    small, big = (fe, xe) if len(fe) <= len(xe) else (xe, fe)
    return sum((small[k] * big[k] for k in small if k in big), 0.0)


def _pnorm(values, p: float) -> float:
    arr = np.abs(np.asarray(list(values), dtype=complex))
    if arr.size == 0:
        return 0.0
    if math.isinf(p):
        return float(arr.max())
    return float(np.sum(arr**p) ** (1.0 / p))


def norm(x: SparseVector, cfg: SpaceConfig = SpaceConfig()) -> float:
    """l^p norm of the coordinate sequence."""
    return _pnorm(x.entries.values(), cfg.p)


def dual_norm(f: CoordFunctional, cfg: SpaceConfig = SpaceConfig()) -> float:
    """Operator norm of ``f`` against the l^p norm, i.e. the l^q norm of its coefficients."""
    return _pnorm(f.entries.values(), cfg.dual_p)


def coord_bound_check(x: SparseVector, cfg: SpaceConfig = SpaceConfig(), tol: float = ALG_TOL) -> bool:
    """True iff ``|x_k| <= K ||x||`` for every coordinate."""
    bound = cfg.K * norm(x, cfg) + tol
    return all(abs(v) <= bound for v in x.entries.values())


# text form: "1:0.5 4:-1.25 2:0+1i"

def _parse_scalar(token: str) -> Scalar:
    token = token.strip()
    if "i" in token or "j" in token:
        return _clean(complex(token.replace("i", "j")))
    return float(token)


def _format_scalar(v: Scalar) -> str:
    if isinstance(v, complex):
        sign = "+" if v.imag >= 0 else "-"
        return f"{v.real!r}{sign}{abs(v.imag)!r}i"
    return repr(float(v))


def parse_coords(text: str, cls=SparseVector):
    """Parse whitespace-separated ``index:value`` pairs."""
    pairs = []
    for tok in text.split():
        try:
            k, v = tok.split(":", 1)
            pairs.append((int(k), _parse_scalar(v)))
        except ValueError as exc:
            raise ValueError(f"bad coordinate token {tok!r}") from exc
    return cls(pairs)


def format_coords(x: _FiniteCoords) -> str:
    return " ".join(f"{k}:{_format_scalar(v)}" for k, v in x)
