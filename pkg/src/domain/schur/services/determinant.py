from typing import Callable, Dict, FrozenSet, List, Optional, Tuple, TypeVar

T = TypeVar("T")

# Matrices up to this size are expanded over permutations.
PERMUTATION_LIMIT = 6


def determinant(matrix: List[List[Optional[T]]], one: T, zero: T) -> T:
    """
    Exact determinant over a commutative ring whose elements support +, - and *.

    `None` entries are structural zeros and prune the expansion. Small matrices
    are expanded over permutations; larger ones by cofactor expansion along the
    first row with memoised minors.
    """
    n = len(matrix)
    if n == 0:
        return one
    if n <= PERMUTATION_LIMIT:
        return _permutation_expansion(matrix, one, zero)
    return _cofactor_expansion(matrix, one, zero)


def _permutation_expansion(matrix, one, zero):
    n = len(matrix)
    total = zero
    used = [False] * n

    def walk(row: int, acc, sign: int):
        nonlocal total
        if row == n:
            total = total + acc if sign > 0 else total - acc
            return
        for col in range(n):
            if used[col] or matrix[row][col] is None:
                continue
            # Columns already used to the right of col are inversions.
            flips = sum(1 for c in range(col + 1, n) if used[c])
            used[col] = True
            walk(row + 1, acc * matrix[row][col], sign * (-1) ** flips)
            used[col] = False

    walk(0, one, 1)
    return total


def _cofactor_expansion(matrix, one, zero):
    n = len(matrix)
    memo: Dict[Tuple[int, FrozenSet[int]], object] = {}

    def minor(row: int, cols: FrozenSet[int]):
        if row == n:
            return one
        key = (row, cols)
        if key in memo:
            return memo[key]
        ordered = sorted(cols)
        acc = zero
        for position, col in enumerate(ordered):
            entry = matrix[row][col]
            if entry is None:
                continue
            term = entry * minor(row + 1, cols - {col})
            acc = acc + term if position % 2 == 0 else acc - term
        memo[key] = acc
        return acc

    return minor(0, frozenset(range(n)))
