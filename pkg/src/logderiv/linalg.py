"""Exact dense linear algebra over the rationals, for small systems."""

from __future__ import annotations

from fractions import Fraction


def _collect_keys(vectors) -> list:
    keys = set()
    for v in vectors:
        keys.update(v.keys())
    return sorted(keys)


def rank(vectors) -> int:
    """Rank of a family of sparse vectors (mappings key -> Fraction)."""
    keys = _collect_keys(vectors)
    if not keys:
        return 0
    rows = [[Fraction(v.get(k, 0)) for k in keys] for v in vectors]
    r = 0
    ncols = len(keys)
    for col in range(ncols):
        pivot = next((i for i in range(r, len(rows)) if rows[i][col]), None)
        if pivot is None:
            continue
        rows[r], rows[pivot] = rows[pivot], rows[r]
        inv = 1 / rows[r][col]
        rows[r] = [x * inv for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][col]:
                f = rows[i][col]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[r])]
        r += 1
        if r == len(rows):
            break
    return r


def solve_in_basis(basis, target) -> list[Fraction]:
    """Coordinates of ``target`` in the span of ``basis``.

    All vectors are mappings key -> Fraction. Raises ValueError if the basis
    is linearly dependent or the target falls outside the span.
    """
    keys = _collect_keys(list(basis) + [target])
    nb = len(basis)
    # augmented system: one equation per key
    rows = [[Fraction(b.get(k, 0)) for b in basis] + [Fraction(target.get(k, 0))]
            for k in keys]
    r = 0
    pivots = []
    for col in range(nb):
        pivot = next((i for i in range(r, len(rows)) if rows[i][col]), None)
        if pivot is None:
            raise ValueError("basis is linearly dependent")
        rows[r], rows[pivot] = rows[pivot], rows[r]
        inv = 1 / rows[r][col]
        rows[r] = [x * inv for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][col]:
                f = rows[i][col]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[r])]
        pivots.append(col)
        r += 1
    for i in range(r, len(rows)):
        if rows[i][nb]:
            raise ValueError("target is not in the span of the basis")
    coords = [Fraction(0)] * nb
    for row_idx, col in enumerate(pivots):
        coords[col] = rows[row_idx][nb]
    return coords
