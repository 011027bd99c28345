"""Finite powerset lattices encoded as bitsets, and their product bilattices.

A lattice element is a plain ``int`` whose bit ``i`` is set iff the i-th atom
of an :class:`AtomUniverse` is a member. Pairs of elements live in
:class:`Pair`; the precision order on pairs is :func:`leq_p`.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Callable, Iterable, Iterator, NamedTuple

EXHAUSTIVE_CAP = 12
DEFAULT_SEED = 0xA17

Operator = Callable[[int], int]


class LatticeError(Exception):
    pass


class DivergenceError(LatticeError):
    """A Kleene iterate failed to grow: the operator is not monotone."""


class InternalityError(LatticeError):
    """An iterate left the interval its operator is restricted to."""


class UniverseMismatchError(LatticeError):
    pass


@dataclass(frozen=True)
class AtomUniverse:
    atoms: tuple[str, ...]
    index: dict[str, int] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        atoms = tuple(self.atoms)
        if len(set(atoms)) != len(atoms):
            raise ValueError(f"duplicate atom names in universe: {atoms}")
        object.__setattr__(self, "atoms", atoms)
        object.__setattr__(self, "index", {a: i for i, a in enumerate(atoms)})

    def __len__(self) -> int:
        return len(self.atoms)

    def __contains__(self, name: object) -> bool:
        return name in self.index

    @property
    def top(self) -> int:
        return (1 << len(self.atoms)) - 1

    def bit(self, name: str) -> int:
        try:
            return 1 << self.index[name]
        except KeyError:
            raise UniverseMismatchError(f"atom {name!r} is not in the universe") from None

    def encode(self, names: Iterable[str]) -> int:
        bits = 0
        for name in names:
            bits |= self.bit(name)
        return bits

    def decode(self, bits: int) -> frozenset[str]:
        self.check(bits)
        return frozenset(self.atoms[i] for i in members(bits))

    def sorted_names(self, bits: int) -> list[str]:
        return sorted(self.decode(bits))

    def check(self, bits: int) -> int:
        if bits < 0 or bits & ~self.top:
            raise UniverseMismatchError(
                f"bitset {bits:#x} has members outside a universe of size {len(self)}"
            )
        return bits

    def elements(self) -> range:
        """All 2^n lattice elements, in increasing integer order."""
        return range(1 << len(self.atoms))


def members(bits: int) -> Iterator[int]:
    """Indices of the set bits of ``bits``, ascending."""
    while bits:
        low = bits & -bits
        yield low.bit_length() - 1
        bits ^= low


def subset(x: int, y: int) -> bool:
    return x & ~y == 0


def subsets_of(mask: int) -> Iterator[int]:
    """Every subset of ``mask`` (including 0 and ``mask`` itself)."""
    sub = mask
    while True:
        yield sub
        if sub == 0:
            return
        sub = (sub - 1) & mask


class Pair(NamedTuple):
    """An element of the product bilattice L^2."""

    first: int
    second: int

    @property
    def consistent(self) -> bool:
        return subset(self.first, self.second)

    @property
    def exact(self) -> bool:
        return self.first == self.second

    def names(self, universe: AtomUniverse) -> tuple[list[str], list[str]]:
        return universe.sorted_names(self.first), universe.sorted_names(self.second)


def leq_p(p: Pair, q: Pair, universe: AtomUniverse | None = None) -> bool:
    """Precision order: ``p`` is at most as precise as ``q``.

    When ``universe`` is given, every component is checked to belong to it.
    """
    if universe is not None:
        for bits in (*p, *q):
            universe.check(bits)
    return subset(p.first, q.first) and subset(q.second, p.second)


def lt_p(p: Pair, q: Pair) -> bool:
    return p != q and leq_p(p, q)


def pair_join(pairs: Iterable[Pair], top: int) -> Pair:
    """Least upper bound of ``pairs`` under the precision order."""
    first = 0
    second = top
    for p in pairs:
        first |= p.first
        second &= p.second
    return Pair(first, second)


def lfp(op: Operator, start: int = 0) -> int:
    """Limit of the Kleene chain ``start, op(start), op(op(start)), ...``.

    With ``start = 0`` this is the least fixpoint of a monotone ``op``.
    Raises :class:`DivergenceError` when an iterate is not a superset of its
    predecessor; on a finite lattice that is the only way the chain can fail
    to stabilise.
    """
    x = start
    while True:
        y = op(x)
        if y == x:
            return x
        if not subset(x, y):
            raise DivergenceError(
                f"Kleene iterate {y:#x} does not contain its predecessor {x:#x}"
            )
        x = y


def lfp_in_interval(op: Operator, low: int, high: int) -> int:
    """Least fixpoint of ``op`` viewed as an operator on ``[low, high]``.

    Iteration starts at ``low``; :class:`InternalityError` is raised if an
    iterate leaves the interval.
    """
    if not subset(low, high):
        raise InternalityError(f"empty interval [{low:#x}, {high:#x}]")
    x = low
    while True:
        y = op(x)
        if not (subset(low, y) and subset(y, high)):
            raise InternalityError(
                f"iterate {y:#x} escapes the interval [{low:#x}, {high:#x}]"
            )
        if y == x:
            return x
        if not subset(x, y):
            raise DivergenceError(
                f"Kleene iterate {y:#x} does not contain its predecessor {x:#x}"
            )
        x = y


@dataclass(frozen=True)
class MonotonicityReport:
    """Outcome of :func:`check_monotone`; truthy iff no witness was found."""

    ok: bool
    witness: tuple[int, int] | None = None
    checked: int = 0

    def __bool__(self) -> bool:
        return self.ok


def check_monotone(
    op: Operator,
    size: int,
    samples: int | None = None,
    seed: int = DEFAULT_SEED,
) -> MonotonicityReport:
    """Search for ``x ⊆ y`` with ``op(x) ⊄ op(y)`` over a universe of ``size`` atoms.

    Exhaustive mode (``samples=None``) checks every covering pair
    ``x ⊂ x ∪ {i}``; by transitivity of ⊆ that is equivalent to checking all
    comparable pairs. Sampled mode draws ``samples`` random comparable pairs.
    """
    if samples is None:
        if size > EXHAUSTIVE_CAP:
            raise ValueError(f"exhaustive check capped at {EXHAUSTIVE_CAP} atoms, got {size}")
        values = [op(x) for x in range(1 << size)]
        checked = 0
        for x in range(1 << size):
            for i in range(size):
                bit = 1 << i
                if x & bit:
                    continue
                checked += 1
                if not subset(values[x], values[x | bit]):
                    return MonotonicityReport(False, (x, x | bit), checked)
        return MonotonicityReport(True, None, checked)

    rng = random.Random(seed)
    top = (1 << size) - 1
    for n in range(samples):
        x = rng.getrandbits(size) if size else 0
        y = x | (rng.getrandbits(size) & top if size else 0)
        if not subset(op(x), op(y)):
            return MonotonicityReport(False, (x, y), n + 1)
    return MonotonicityReport(True, None, samples)
