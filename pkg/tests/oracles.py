"""Definitional brute-force oracles shared by statistics tests."""

import itertools
import math


def pearson_oracle(x, y):
    """Textbook product-moment formula, independent of the implementation."""
    n = len(x)
    sx, sy = sum(x), sum(y)
    sxx = sum(a * a for a in x)
    syy = sum(b * b for b in y)
    sxy = sum(a * b for a, b in zip(x, y))
    num = n * sxy - sx * sy
    den = math.sqrt(n * sxx - sx * sx) * math.sqrt(n * syy - sy * sy)
    return num / den


def rank_oracle(values):
    """Average ranks computed by explicit counting."""
    out = []
    for v in values:
        less = sum(1 for w in values if w < v)
        equal = sum(1 for w in values if w == v)
        out.append(less + (equal + 1) / 2)
    return out


def kendall_oracle(x, y):
    """Pair-by-pair tau-b with explicit tie bookkeeping."""
    c = d = tx = ty = 0
    for (xi, yi), (xj, yj) in itertools.combinations(zip(x, y), 2):
        if xi == xj and yi == yj:
            continue
        if xi == xj:
            tx += 1
        elif yi == yj:
            ty += 1
        elif (xi - xj) * (yi - yj) > 0:
            c += 1
        else:
            d += 1
    return (c - d) / math.sqrt((c + d + tx) * (c + d + ty))
