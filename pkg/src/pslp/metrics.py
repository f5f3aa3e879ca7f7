"""Benchmark summary statistics."""

from __future__ import annotations

import math


def arithmetic_mean(values) -> float:
    values = list(values)
    if not values:
        return 0.0
    return sum(values) / len(values)


def shifted_geometric_mean(values, shift: float = 0.0) -> float:
    """(prod(v + shift))**(1/K) - shift, computed in log space.

    The shift damps the influence of tiny values; shift 0 is the plain
    geometric mean. Every shifted value must be positive.

    Logs are taken against the largest shifted value, so a constant vector
    comes back exactly (the naive exp(mean(log)) loses ~shift*eps, which
    matters once shifts dwarf the values).
    """
    shifted = []
    for v in values:
        s = v + shift
        if s <= 0.0:
            raise ValueError(f"value {v} + shift {shift} is not positive")
        shifted.append(s)
    if not shifted:
        return 0.0
    anchor = max(shifted)
    acc = math.fsum(math.log(s / anchor) for s in shifted)
    return anchor * math.exp(acc / len(shifted)) - shift


def geometric_mean(values) -> float:
    return shifted_geometric_mean(values, 0.0)
