"""Finite descriptions of infinite sequences.

Two shapes are supported: eventually periodic sequences (a finite prefix
followed by a repeating cycle) and finite-support sequences (an explicit
finite map, with a default value everywhere else).  Indices are 1-based
throughout, to match the way tail positions and family members are counted.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd
from typing import Any, Callable, Iterator


def _primitive_period(items: tuple) -> tuple:
    n = len(items)
    for p in range(1, n + 1):
        if n % p == 0 and items[:p] * (n // p) == items:
            return items[:p]
    return items


@dataclass(frozen=True)
class EventuallyPeriodic:
    """``prefix`` followed by ``cycle`` repeated forever.

    An empty cycle is only meaningful for tail schedules, where it stands
    for "empty from here on"; the value past the prefix is then ``empty``.
    """

    prefix: tuple = ()
    cycle: tuple = ()
    empty: Any = ()

    def __post_init__(self):
        object.__setattr__(self, "prefix", tuple(self.prefix))
        object.__setattr__(self, "cycle", tuple(self.cycle))

    def __getitem__(self, j: int):
        if j < 1:
            raise IndexError(f"index {j} out of range (indices start at 1)")
        if j <= len(self.prefix):
            return self.prefix[j - 1]
        if not self.cycle:
            return self.empty
        return self.cycle[(j - len(self.prefix) - 1) % len(self.cycle)]

    def __iter__(self) -> Iterator:
        yield from self.prefix
        if not self.cycle:
            return
        while True:
            yield from self.cycle

    @property
    def is_finite(self) -> bool:
        return not self.cycle

    @property
    def preperiod(self) -> int:
        return len(self.prefix)

    @property
    def period(self) -> int:
        return len(self.cycle)

    def window(self) -> int:
        """Number of leading terms that determine the whole sequence."""
        return len(self.prefix) + max(len(self.cycle), 1)

    def values(self) -> set:
        return set(self.prefix) | set(self.cycle)

    def recurring(self) -> set:
        """Values taken infinitely often."""
        return set(self.cycle)

    def canonical(self) -> "EventuallyPeriodic":
        """Shortest prefix and primitive cycle describing the same sequence."""
        prefix, cycle = list(self.prefix), _primitive_period(self.cycle)
        if cycle == (self.empty,):
            cycle = ()
        if not cycle:
            while prefix and prefix[-1] == self.empty:
                prefix.pop()
            return EventuallyPeriodic(tuple(prefix), (), self.empty)
        cycle = list(cycle)
        while prefix and prefix[-1] == cycle[-1]:
            prefix.pop()
            cycle = [cycle[-1]] + cycle[:-1]
        return EventuallyPeriodic(tuple(prefix), tuple(cycle), self.empty)

    def map(self, fn: Callable) -> "EventuallyPeriodic":
        return EventuallyPeriodic(
            tuple(fn(x) for x in self.prefix),
            tuple(fn(x) for x in self.cycle),
            fn(self.empty),
        )


@dataclass(frozen=True)
class FiniteSupport:
    """Explicit values at finitely many indices, ``empty`` elsewhere."""

    support: tuple = ()  # sorted ((index, value), ...)
    empty: Any = ()

    def __post_init__(self):
        items = dict(self.support)
        if any(j < 1 for j in items):
            raise ValueError("finite-support indices start at 1")
        object.__setattr__(self, "support", tuple(sorted(items.items())))

    def __getitem__(self, j: int):
        if j < 1:
            raise IndexError(f"index {j} out of range (indices start at 1)")
        return dict(self.support).get(j, self.empty)

    def __iter__(self) -> Iterator:
        j = 1
        while True:
            yield self[j]
            j += 1

    @property
    def is_finite(self) -> bool:
        return True

    def window(self) -> int:
        return (self.support[-1][0] if self.support else 0) + 1

    def as_eventually_periodic(self) -> EventuallyPeriodic:
        top = self.support[-1][0] if self.support else 0
        return EventuallyPeriodic(tuple(self[j] for j in range(1, top + 1)), (), self.empty)

    def values(self) -> set:
        return {v for _, v in self.support}

    def recurring(self) -> set:
        return set()

    def canonical(self) -> EventuallyPeriodic:
        return self.as_eventually_periodic().canonical()

    def map(self, fn: Callable) -> "FiniteSupport":
        return FiniteSupport(tuple((j, fn(v)) for j, v in self.support), fn(self.empty))


def constant(value) -> EventuallyPeriodic:
    return EventuallyPeriodic((), (value,))


def from_function(fn: Callable[[int], Any], preperiod: int, period: int, empty=()) -> EventuallyPeriodic:
    """Tabulate ``fn`` known to be periodic with ``period`` from index ``preperiod + 1``."""
    prefix = tuple(fn(j) for j in range(1, preperiod + 1))
    cycle = tuple(fn(j) for j in range(preperiod + 1, preperiod + period + 1))
    return EventuallyPeriodic(prefix, cycle, empty).canonical()


def same_sequence(a, b) -> bool:
    return a.canonical() == b.canonical()


def lcm(*ns: int) -> int:
    out = 1
    for n in ns:
        out = out * n // gcd(out, n)
    return out
