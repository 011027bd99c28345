"""Approximation fixpoint theory on the full product bilattice L^2.

Approximators may send exact pairs to inconsistent ones; stable revision is
defined for every pair, with both projection operators running on all of L.
The interval-domain variant of consistent AFT is kept as a separate function
so that the two can be compared (see :func:`is_strong_for`).
"""

from __future__ import annotations

import random
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Iterable, Mapping

from .lattice import (
    DEFAULT_SEED,
    EXHAUSTIVE_CAP,
    DivergenceError,
    InternalityError,
    Pair,
    leq_p,
    lfp,
    lfp_in_interval,
    subset,
    subsets_of,
)


class ScopeTooLargeError(ValueError):
    pass


class PreconditionError(ValueError):
    pass


class Approximator:
    """An operator on L^2 over a finite powerset lattice of ``size`` atoms.

    Subclasses implement :meth:`first` and :meth:`second`, the two projections
    ``A(x, y)_1`` and ``A(x, y)_2``.
    """

    name: str = "approximator"
    size: int = 0

    def first(self, x: int, y: int) -> int:
        raise NotImplementedError

    def second(self, x: int, y: int) -> int:
        raise NotImplementedError

    def __call__(self, p: Pair) -> Pair:
        return Pair(self.first(p.first, p.second), self.second(p.first, p.second))

    @property
    def top(self) -> int:
        return (1 << self.size) - 1

    def pairs(self) -> Iterable[Pair]:
        n = 1 << self.size
        return (Pair(x, y) for x in range(n) for y in range(n))

    def tabulate(self) -> "TabulatedOperator":
        return TabulatedOperator(self.size, {p: self(p) for p in self.pairs()}, name=self.name)


class FunctionApproximator(Approximator):
    def __init__(self, size: int, fn: Callable[[int, int], tuple[int, int]], name: str = "fn"):
        self.size = size
        self.fn = fn
        self.name = name

    def __call__(self, p: Pair) -> Pair:
        return Pair(*self.fn(p.first, p.second))

    def first(self, x, y):
        return self.fn(x, y)[0]

    def second(self, x, y):
        return self.fn(x, y)[1]


class TabulatedOperator(Approximator):
    """An approximator given by an explicit table over all 4^n pairs."""

    def __init__(self, size: int, table: Mapping[Pair, Pair], name: str = "table"):
        self.size = size
        self.name = name
        n = 1 << size
        missing = [Pair(x, y) for x in range(n) for y in range(n) if (x, y) not in table]
        if missing:
            raise ValueError(f"table undefined on {len(missing)} pairs, e.g. {missing[0]}")
        self.table = {Pair(*k): Pair(*v) for k, v in table.items()}

    @classmethod
    def from_overrides(
        cls,
        size: int,
        overrides: Mapping[tuple[int, int], tuple[int, int]],
        name: str = "table",
    ) -> "TabulatedOperator":
        """Identity on L^2 except on the listed pairs."""
        n = 1 << size
        table = {Pair(x, y): Pair(x, y) for x in range(n) for y in range(n)}
        table.update({Pair(*k): Pair(*v) for k, v in overrides.items()})
        return cls(size, table, name=name)

    @classmethod
    def constant(cls, size: int, value: tuple[int, int], name: str = "const") -> "TabulatedOperator":
        n = 1 << size
        return cls(size, {Pair(x, y): Pair(*value) for x in range(n) for y in range(n)}, name=name)

    def __call__(self, p: Pair) -> Pair:
        return self.table[p]

    def first(self, x, y):
        return self.table[x, y][0]

    def second(self, x, y):
        return self.table[x, y][1]

    @property
    def symmetric(self) -> bool:
        return all(self.first(x, y) == self.second(y, x) for x, y in self.table)


@dataclass(frozen=True, order=True)
class StableFixpointReport:
    pair: Pair
    consistent: bool = field(compare=False)
    total: bool = field(compare=False)
    is_least: bool = field(default=False, compare=False)


def stable_revision(A: Approximator, p: Pair) -> Pair:
    """``(lfp(A(., v)_1), lfp(A(u, .)_2))`` with both projections on all of L."""
    u, v = p
    return Pair(lfp(lambda z: A.first(z, v)), lfp(lambda z: A.second(u, z)))


def stable_revision_consistent(A: Approximator, p: Pair) -> Pair:
    """Stable revision of consistent AFT: the first projection on ``[⊥, v]``,
    the second on ``[u, ⊤]``, iterated from each interval's bottom."""
    u, v = p
    if not p.consistent:
        raise PreconditionError(f"{p} is not consistent")
    return Pair(
        lfp_in_interval(lambda z: A.first(z, v), 0, v),
        lfp_in_interval(lambda z: A.second(u, z), u, A.top),
    )


def is_contracting(A: Approximator, p: Pair) -> bool:
    return leq_p(p, A(p))


def is_prudent(A: Approximator, p: Pair) -> bool:
    return subset(p.first, lfp(lambda z: A.first(z, p.second)))


def kripke_kleene(A: Approximator) -> Pair:
    """The ≤p-least fixpoint of ``A``, iterated from ``(⊥, ⊤)``."""
    return _pair_lfp(A, Pair(0, A.top))


def well_founded_fixpoint(A: Approximator) -> Pair:
    """The least stable fixpoint, by iterating stable revision from ``(⊥, ⊤)``."""
    return _pair_lfp(lambda p: stable_revision(A, p), Pair(0, A.top))


def _pair_lfp(op: Callable[[Pair], Pair], start: Pair) -> Pair:
    p = start
    while True:
        q = op(p)
        if q == p:
            return p
        if not leq_p(p, q):
            raise DivergenceError(f"bilattice iterate {q} is not ≤p-above {p}")
        p = q


def order_key(p: Pair) -> tuple[int, int]:
    # first ascending, second descending: a linear extension of ≤p
    return (p.first, -p.second)


def _least(pairs: list[Pair]) -> Pair | None:
    for p in pairs:
        if all(leq_p(p, q) for q in pairs):
            return p
    return None


def enumerate_stable_fixpoints(
    A: Approximator,
    scope: str = "all",
    *,
    cap: int = EXHAUSTIVE_CAP,
    prudent_only: bool = False,
    brute_force: bool = False,
    jobs: int = 1,
) -> list[StableFixpointReport]:
    """All pairs ``p`` (in ``scope``) with ``stable_revision(A, p) == p``.

    The default search guesses only the second component ``v``: a stable
    fixpoint must have ``u = lfp(A(., v)_1)``, so ``u`` is determined and only
    ``lfp(A(u, .)_2) == v`` remains to verify. ``brute_force=True`` instead
    checks every pair of L^2 (or of L^c); both return the same list.

    ``prudent_only`` restricts consistent guesses to A-contracting and
    A-prudent pairs; inconsistent candidates are unaffected.
    """
    if scope not in ("all", "consistent"):
        raise ValueError(f"unknown scope {scope!r}")
    if A.size > cap:
        raise ScopeTooLargeError(f"universe of {A.size} atoms exceeds enumeration cap {cap}")
    n = 1 << A.size

    def keep(p: Pair) -> bool:
        if scope == "consistent" and not p.consistent:
            return False
        if prudent_only and p.consistent and not (is_contracting(A, p) and is_prudent(A, p)):
            return False
        return stable_revision(A, p) == p

    if brute_force:
        if scope == "consistent":
            candidates = (Pair(u, v) for v in range(n) for u in subsets_of(v))
        else:
            candidates = (Pair(u, v) for u in range(n) for v in range(n))
        found = [p for p in candidates if keep(p)]
    else:
        def from_second(v: int) -> Pair | None:
            p = Pair(lfp(lambda z: A.first(z, v)), v)
            return p if keep(p) else None

        if jobs > 1:
            with ThreadPoolExecutor(max_workers=jobs) as pool:
                results = list(pool.map(from_second, range(n)))
        else:
            results = [from_second(v) for v in range(n)]
        found = [p for p in results if p is not None]

    found.sort(key=order_key)
    least = _least(found)
    return [
        StableFixpointReport(p, p.consistent, p.exact, is_least=(p == least))
        for p in found
    ]


def enumerate_interval_stable_fixpoints(A: Approximator, *, cap: int = EXHAUSTIVE_CAP) -> list[Pair]:
    """Consistent pairs fixed by :func:`stable_revision_consistent`.

    Pairs on which an interval projection is not internal are skipped: the
    interval-domain revision is undefined there.
    """
    if A.size > cap:
        raise ScopeTooLargeError(f"universe of {A.size} atoms exceeds enumeration cap {cap}")
    found = []
    for v in range(1 << A.size):
        for u in subsets_of(v):
            p = Pair(u, v)
            try:
                if stable_revision_consistent(A, p) == p:
                    found.append(p)
            except InternalityError:
                continue
    found.sort(key=order_key)
    return found


def is_strong_for(A: Approximator, p: Pair) -> bool:
    """Whether full-lattice stable revision also fixes the interval-domain
    stable fixpoint ``p``."""
    try:
        fixed = stable_revision_consistent(A, p) == p
    except InternalityError as exc:
        raise PreconditionError(f"{p} is not an interval-domain stable fixpoint: {exc}") from exc
    if not fixed:
        raise PreconditionError(f"{p} is not an interval-domain stable fixpoint")
    return stable_revision(A, p) == p


@dataclass
class ApproximatorDiagnostics:
    monotone: bool = True
    monotonicity_witness: tuple[Pair, Pair] | None = None
    exact_on_consistent: bool = True
    exactness_witness: int | None = None
    checked_pairs: int = 0

    @property
    def ok(self) -> bool:
        return self.monotone and self.exact_on_consistent

    def __bool__(self) -> bool:
        return self.ok


def check_approximator(
    A: Approximator,
    samples: int | None = None,
    seed: int = DEFAULT_SEED,
) -> ApproximatorDiagnostics:
    """Check ≤p-monotonicity and that ``A(x, x)`` is exact whenever consistent.

    Exhaustive mode (``samples=None``) compares every pair with its ≤p-covers
    ``(x ∪ {i}, y)`` and ``(x, y ∖ {i})``; sampled mode draws random
    comparable pairs. Exactness is always checked on every ``x``.
    """
    size = A.size
    n = 1 << size
    diag = ApproximatorDiagnostics()

    if samples is None:
        if size > EXHAUSTIVE_CAP:
            raise ScopeTooLargeError(f"exhaustive check capped at {EXHAUSTIVE_CAP} atoms")
        values = {p: A(p) for p in A.pairs()}
        for (x, y), img in values.items():
            for i in range(size):
                bit = 1 << i
                covers = []
                if not x & bit:
                    covers.append(Pair(x | bit, y))
                if y & bit:
                    covers.append(Pair(x, y & ~bit))
                for q in covers:
                    diag.checked_pairs += 1
                    if not leq_p(img, values[q]):
                        diag.monotone = False
                        diag.monotonicity_witness = (Pair(x, y), q)
                        break
                if not diag.monotone:
                    break
            if not diag.monotone:
                break
    else:
        rng = random.Random(seed)
        for _ in range(samples):
            x1 = rng.getrandbits(size) if size else 0
            y2 = rng.getrandbits(size) if size else 0
            x2 = x1 | (rng.getrandbits(size) if size else 0)
            y1 = y2 | (rng.getrandbits(size) if size else 0)
            p, q = Pair(x1, y1), Pair(x2, y2)
            diag.checked_pairs += 1
            if not leq_p(A(p), A(q)):
                diag.monotone = False
                diag.monotonicity_witness = (p, q)
                break

    for x in range(n):
        img = A(Pair(x, x))
        if img.consistent and not img.exact:
            diag.exact_on_consistent = False
            diag.exactness_witness = x
            break
    return diag


def precision_leq(B: Approximator, A: Approximator, pairs: Iterable[Pair] | None = None) -> list[Pair]:
    """Pairs where ``B(p) ≤p A(p)`` fails (empty when A is at least as precise)."""
    if pairs is None:
        pairs = A.pairs()
    return [p for p in pairs if not leq_p(B(p), A(p))]
