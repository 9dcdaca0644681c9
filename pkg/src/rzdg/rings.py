"""Finite commutative rings presented as products of local rings Z_{p^k}.

Elements are plain tuples of residues, one per factor.  A ring built from a
modulus (``Z12``) remembers that modulus; its elements are then ordered and
labelled by their integer value in ``[0, n)``.  Explicit products
(``Z2xZ3``) are ordered by the mixed-radix encoding of the residue tuple,
first factor most significant.
"""

from __future__ import annotations

import itertools
import math
import re
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Iterator, Sequence

import numpy as np

from rzdg import config
from rzdg.errors import (
    CapacityError,
    ElementShapeError,
    HypothesisError,
    InvalidModulusError,
    ParseError,
)

Element = tuple  # tuple[int, ...]

PRIME_CHECK_LIMIT = 10**4
_CHUNK = 1 << 20


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


def factorize(n: int) -> list[tuple[int, int]]:
    """Prime-power factorization by trial division, sorted by prime."""
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            k = 0
            while n % d == 0:
                n //= d
                k += 1
            out.append((d, k))
        d += 1 if d == 2 else 2
    if n > 1:
        out.append((n, 1))
    return out


@dataclass(frozen=True)
class RingSpec:
    """A product ring Z_{p_1^{k_1}} x ... x Z_{p_r^{k_r}}.

    ``modulus`` is set when the factors are pairwise coprime and the ring is
    meant as Z_n (always the case for a single factor).
    """

    factors: tuple[tuple[int, int], ...]
    modulus: int | None = field(default=None)

    def __post_init__(self):
        factors = tuple((int(p), int(k)) for p, k in self.factors)
        object.__setattr__(self, "factors", factors)
        if not factors:
            raise InvalidModulusError("a ring needs at least one factor")
        for p, k in factors:
            if not is_prime(p) or k < 1:
                raise InvalidModulusError(f"factor Z_{p}^{k} is not a prime power")
        order = math.prod(p**k for p, k in factors)
        if order > config.max_order():
            raise CapacityError(f"ring order {order} exceeds cap {config.max_order()}")
        if len(factors) == 1 and self.modulus is None:
            object.__setattr__(self, "modulus", order)
        if self.modulus is not None:
            primes = [p for p, _ in factors]
            if self.modulus != order or len(set(primes)) != len(primes):
                raise InvalidModulusError(
                    f"modulus {self.modulus} does not match factors {factors}"
                )

    @cached_property
    def moduli(self) -> tuple[int, ...]:
        return tuple(p**k for p, k in self.factors)

    @cached_property
    def order(self) -> int:
        return math.prod(self.moduli)

    @property
    def is_local(self) -> bool:
        return len(self.factors) == 1

    @cached_property
    def zero(self) -> Element:
        return tuple(0 for _ in self.factors)

    @cached_property
    def one(self) -> Element:
        return tuple(1 % m for m in self.moduli)

    def __str__(self) -> str:
        if self.modulus is not None:
            return f"Z{self.modulus}"
        return "x".join(f"Z{m}" for m in self.moduli)

    # -- elements ---------------------------------------------------------

    def element(self, residues: Sequence[int]) -> Element:
        """Validate a residue tuple and return it as an element."""
        residues = tuple(residues)
        if len(residues) != len(self.factors):
            raise ElementShapeError(
                f"{self} has {len(self.factors)} factors, got {len(residues)} residues"
            )
        for r, m in zip(residues, self.moduli):
            if not isinstance(r, (int, np.integer)) or not 0 <= r < m:
                raise ElementShapeError(f"residue {r!r} out of range for Z{m}")
        return tuple(int(r) for r in residues)

    def from_integer(self, x: int) -> Element:
        """Image of the integer ``x`` under the canonical map Z -> R."""
        return tuple(x % m for m in self.moduli)

    @cached_property
    def _crt_basis(self) -> tuple[int, ...]:
        # e_i = 1 mod m_i and 0 mod m_j for j != i
        n = self.modulus
        basis = []
        for m in self.moduli:
            rest = n // m
            basis.append(rest * pow(rest, -1, m) % n)
        return tuple(basis)

    @cached_property
    def _radix_weights(self) -> tuple[int, ...]:
        weights = []
        w = 1
        for m in reversed(self.moduli):
            weights.append(w)
            w *= m
        return tuple(reversed(weights))

    def index(self, x: Element) -> int:
        """Canonical position of ``x`` in ``[0, order)``."""
        if self.modulus is not None:
            return sum(r * e for r, e in zip(x, self._crt_basis)) % self.modulus
        return sum(r * w for r, w in zip(x, self._radix_weights))

    def element_at(self, i: int) -> Element:
        if not 0 <= i < self.order:
            raise ElementShapeError(f"index {i} out of range for {self}")
        if self.modulus is not None:
            return self.from_integer(i)
        return tuple((i // w) % m for w, m in zip(self._radix_weights, self.moduli))

    def elements(self) -> Iterator[Element]:
        if self.modulus is not None:
            for i in range(self.order):
                yield self.from_integer(i)
        else:
            yield from itertools.product(*(range(m) for m in self.moduli))

    def label(self, x: Element) -> str:
        if self.modulus is not None:
            return str(self.index(x))
        return "(" + ",".join(str(r) for r in x) + ")"

    # -- arithmetic -------------------------------------------------------

    def _check(self, x) -> None:
        if len(x) != len(self.factors):
            raise ElementShapeError(
                f"{self} has {len(self.factors)} factors, got element {x!r}"
            )

    def add(self, a: Element, b: Element) -> Element:
        self._check(a)
        self._check(b)
        return tuple((x + y) % m for x, y, m in zip(a, b, self.moduli))

    def mul(self, a: Element, b: Element) -> Element:
        self._check(a)
        self._check(b)
        return tuple((x * y) % m for x, y, m in zip(a, b, self.moduli))

    def neg(self, a: Element) -> Element:
        self._check(a)
        return tuple((-x) % m for x, m in zip(a, self.moduli))

    # -- vectorised helpers over canonical indices -------------------------

    @cached_property
    def _table(self) -> np.ndarray:
        """Residues of every element, rows in canonical order."""
        idx = np.arange(self.order, dtype=np.int64)
        if self.modulus is not None:
            cols = [idx % m for m in self.moduli]
        else:
            cols = [(idx // w) % m for w, m in zip(self._radix_weights, self.moduli)]
        return np.stack(cols, axis=1)

    def _encode(self, residues: np.ndarray) -> np.ndarray:
        """Canonical indices for an array of shape (..., factors)."""
        if self.modulus is not None:
            basis = np.array(self._crt_basis, dtype=np.int64)
            return (residues * basis).sum(axis=-1) % self.modulus
        return (residues * np.array(self._radix_weights, dtype=np.int64)).sum(axis=-1)

    def _combine(self, op: str, left: np.ndarray, right: np.ndarray) -> np.ndarray:
        """Index-level add/mul of all pairs (outer product) of two index arrays."""
        mod = np.array(self.moduli, dtype=np.int64)
        a = self._table[left][:, None, :]
        b = self._table[right][None, :, :]
        res = (a + b) % mod if op == "add" else (a * b) % mod
        return self._encode(res)


def ring_from_modulus(n: int) -> RingSpec:
    """Z_n as the product of its prime-power factors."""
    if not isinstance(n, int) or n < 2:
        raise InvalidModulusError(f"modulus must be an integer >= 2, got {n!r}")
    if n > config.max_order():
        raise InvalidModulusError(f"modulus {n} exceeds cap {config.max_order()}")
    return RingSpec(tuple(factorize(n)), modulus=n)


def ring_product(parts: Sequence[RingSpec]) -> RingSpec:
    """Direct product, factor order preserved as given."""
    parts = list(parts)
    if not parts:
        raise InvalidModulusError("ring_product needs at least one part")
    if len(parts) == 1:
        return parts[0]
    order = math.prod(r.order for r in parts)
    if order > config.max_order():
        raise CapacityError(f"product order {order} exceeds cap {config.max_order()}")
    return RingSpec(tuple(f for r in parts for f in r.factors))


def parse_ring(literal: str) -> RingSpec:
    """Parse ``Z<n>`` or ``Z<n>xZ<m>x...``."""
    text = literal.strip().replace(" ", "")
    parts = text.split("x")
    mods = []
    for part in parts:
        m = re.fullmatch(r"Z(\d+)", part)
        if not m:
            raise ParseError(f"bad ring literal {literal!r}; expected e.g. Z25 or Z2xZ3")
        mods.append(int(m.group(1)))
    try:
        rings = [ring_from_modulus(m) for m in mods]
    except InvalidModulusError as exc:
        raise ParseError(f"bad ring literal {literal!r}: {exc}") from None
    return ring_product(rings)


def arithmetic(ring: RingSpec, op: str, a: Element, b: Element | None = None) -> Element:
    """Checked ``add``, ``mul`` or ``neg``; operands must be elements of ``ring``."""
    a = ring.element(a)
    if op == "neg":
        if b is not None:
            raise ElementShapeError("neg takes one operand")
        return ring.neg(a)
    if op not in ("add", "mul"):
        raise ValueError(f"unknown operation {op!r}")
    if b is None:
        raise ElementShapeError(f"{op} takes two operands")
    b = ring.element(b)
    return ring.add(a, b) if op == "add" else ring.mul(a, b)


def is_zero_divisor(ring: RingSpec, x: Element, method: str = "fast") -> bool:
    """True iff ``x * y == 0`` for some nonzero ``y``; 0 counts as a zero-divisor.

    ``method="fast"`` checks whether some residue is divisible by its prime;
    ``method="definitional"`` searches for the annihilating ``y``.
    """
    x = ring.element(x)
    if method == "fast":
        return any(r % p == 0 for r, (p, _) in zip(x, ring.factors))
    if method != "definitional":
        raise ValueError(f"unknown method {method!r}")
    prods = ring._combine("mul", np.array([ring.index(x)]), np.arange(1, ring.order))
    return bool((prods == ring.index(ring.zero)).any())


def zero_divisor_mask(ring: RingSpec) -> np.ndarray:
    """Boolean array over canonical indices: True where the element is a zero-divisor."""
    primes = np.array([p for p, _ in ring.factors], dtype=np.int64)
    return (ring._table % primes == 0).any(axis=1)


def zero_divisor_set(ring: RingSpec) -> tuple[Element, ...]:
    """Z(R) including 0, in canonical order."""
    return tuple(ring.element_at(int(i)) for i in np.flatnonzero(zero_divisor_mask(ring)))


def _indices(ring: RingSpec, s: Iterable[Element]) -> np.ndarray:
    return np.array(sorted({ring.index(ring.element(x)) for x in s}), dtype=np.int64)


def _closed(ring: RingSpec, op: str, left: np.ndarray, right: np.ndarray, member: np.ndarray) -> bool:
    if len(left) == 0 or len(right) == 0:
        return True
    step = max(1, _CHUNK // len(right))
    for i in range(0, len(left), step):
        if not member[ring._combine(op, left[i : i + step], right)].all():
            return False
    return True


def subset_is_ideal(ring: RingSpec, s: Iterable[Element]) -> bool:
    """Brute-force ideal test: contains 0, closed under +, -, and R-multiples."""
    idx = _indices(ring, s)
    member = np.zeros(ring.order, dtype=bool)
    member[idx] = True
    if not member[ring.index(ring.zero)]:
        return False
    neg = ring._encode((-ring._table[idx]) % np.array(ring.moduli))
    if not member[neg].all():
        return False
    if not _closed(ring, "add", idx, idx, member):
        return False
    return _closed(ring, "mul", np.arange(ring.order), idx, member)


@dataclass(frozen=True)
class PrimeIdeal:
    factor: int
    elements: tuple[Element, ...]

    @property
    def size(self) -> int:
        return len(self.elements)


def _is_prime_ideal(ring: RingSpec, elements: Sequence[Element]) -> bool:
    idx = _indices(ring, elements)
    member = np.zeros(ring.order, dtype=bool)
    member[idx] = True
    if member[ring.index(ring.one)] or not subset_is_ideal(ring, elements):
        return False
    outside = np.flatnonzero(~member)
    step = max(1, _CHUNK // max(1, len(outside)))
    for i in range(0, len(outside), step):
        if member[ring._combine("mul", outside[i : i + step], outside)].any():
            return False
    return True


def prime_ideals(ring: RingSpec, verify: bool | None = None) -> list[PrimeIdeal]:
    """The prime ideals P_j = {x : x_j = 0 mod p_j}, one per factor.

    With ``verify`` (default: when the order is at most 10^4) each ideal is
    checked against the definition over all element pairs.
    """
    if verify is None:
        verify = ring.order <= PRIME_CHECK_LIMIT
    out = []
    for j, (p, _) in enumerate(ring.factors):
        elems = tuple(x for x in ring.elements() if x[j] % p == 0)
        if verify and not _is_prime_ideal(ring, elems):
            raise AssertionError(f"P_{j} of {ring} failed the prime-ideal check")
        out.append(PrimeIdeal(j, elems))
    return out


def beta(ring: RingSpec) -> int:
    return len(zero_divisor_set(ring))


def alpha(ring: RingSpec) -> int:
    """|R / Z(R)|, defined only when Z(R) is an ideal."""
    z = zero_divisor_set(ring)
    if not subset_is_ideal(ring, z):
        raise HypothesisError(f"Z({ring}) is not an ideal")
    return ring.order // len(z)
