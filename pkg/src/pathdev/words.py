"""Words over a finite alphabet and the combinatorics behind semicircular moments.

A *word* is a tuple of letters from ``{1, ..., d}``; the empty word ``()`` is
the unit.  Words index tensor coefficients (signatures), mixed moments of a
matrix tuple, and the coefficients of a noncommutative law.  In JSON, a word
serializes as an array of integers (``[]`` for the empty word).

Two derivations act on words:

* the free difference quotient ``∂_i`` splits a word at every occurrence of
  the letter ``i``:  ``∂_i(u i v) -> (u, v)`` summed over occurrences;
* the cyclic derivative ``D_i`` rotates around every occurrence:
  ``D_i(u i v) -> v·u`` summed over occurrences.

Semicircular mixed moments count non-crossing pair partitions whose blocks
pair equal letters; for the single-letter word of length ``2p`` this is the
Catalan number ``C_p``.
"""

from __future__ import annotations

import math
from itertools import product
from typing import Iterator, Sequence

from .errors import InputError

Word = tuple[int, ...]
WordPair = tuple[Word, Word]
Pairing = tuple[tuple[int, int], ...]


def _as_word(w: Sequence[int]) -> Word:
    letters = []
    for x in w:
        value = int(x)
        if value != x:
            raise InputError(f"word letters must be integers, got {x!r}")
        letters.append(value)
    word = tuple(letters)
    if any(x < 1 for x in word):
        raise InputError(f"word letters must be >= 1, got {word}")
    return word


def check_word(w: Sequence[int], dim: int) -> Word:
    """Validate ``w`` as a word over ``{1, ..., dim}`` and return it as a tuple."""
    word = _as_word(w)
    if any(x > dim for x in word):
        raise InputError(f"word {word} uses letters beyond alphabet size {dim}")
    return word


def all_words(dim: int, max_len: int) -> list[Word]:
    """All words over ``{1, ..., dim}`` of length ``<= max_len``.

    Ordered by length, then lexicographically; the empty word comes first.
    The result has ``sum(dim**k for k in range(max_len + 1))`` entries.
    """
    if dim < 1:
        raise InputError(f"alphabet size must be >= 1, got {dim}")
    if max_len < 0:
        raise InputError(f"max_len must be >= 0, got {max_len}")
    out: list[Word] = []
    for n in range(max_len + 1):
        out.extend(product(range(1, dim + 1), repeat=n))
    return out


def word_index(w: Word, dim: int) -> int:
    """Index of ``w`` within the block of words of its own length.

    Row-major: the first letter is the most significant digit, matching the
    flattening of a ``(dim,) * len(w)`` array.
    """
    idx = 0
    for x in w:
        idx = idx * dim + (x - 1)
    return idx


def free_difference_quotient(w: Sequence[int], i: int) -> list[WordPair]:
    """``∂_i`` applied to the word ``w``: one ``(prefix, suffix)`` pair per
    occurrence of the letter ``i``, in left-to-right order."""
    word = _as_word(w)
    return [(word[:k], word[k + 1 :]) for k, x in enumerate(word) if x == int(i)]


def cyclic_derivative(w: Sequence[int], i: int) -> list[Word]:
    """``D_i`` applied to ``w``: the word ``suffix·prefix`` for each occurrence
    of the letter ``i``, in left-to-right order of the occurrence."""
    word = _as_word(w)
    return [word[k + 1 :] + word[:k] for k, x in enumerate(word) if x == int(i)]


def noncrossing_pairings(n: int) -> Iterator[Pairing]:
    """Yield all non-crossing perfect pairings of ``{0, ..., n-1}``.

    ``n`` must be even (raises otherwise).  A pairing is a tuple of ``(a, b)``
    pairs with ``a < b``, sorted by the left endpoint.  There are
    ``catalan(n // 2)`` of them.  The enumeration pairs the first free index
    with a partner of odd relative distance and recurses on the two enclosed
    independent regions — crossings are impossible by construction.
    """
    if n < 0 or n % 2:
        raise InputError(f"pairings need an even non-negative size, got {n}")

    def rec(indices: tuple[int, ...]) -> Iterator[Pairing]:
        if not indices:
            yield ()
            return
        first = indices[0]
        # first is paired with indices[k] for odd k, splitting the rest into
        # an inside region (must pair among itself) and an outside region.
        for k in range(1, len(indices), 2):
            inside = indices[1:k]
            outside = indices[k + 1 :]
            for pi in rec(inside):
                for po in rec(outside):
                    yield tuple(sorted(((first, indices[k]),) + pi + po))

    return rec(tuple(range(n)))


def catalan(p: int) -> int:
    """The Catalan number ``C_p = binom(2p, p) / (p + 1)`` as an exact integer."""
    if p < 0:
        raise InputError(f"catalan index must be >= 0, got {p}")
    return math.comb(2 * p, p) // (p + 1)


def semicircular_moment(w: Sequence[int]) -> float:
    """Mixed moment of a standard free semicircular family at the word ``w``.

    Equals the number of non-crossing pairings of positions of ``w`` whose
    every pair joins equal letters.  Odd-length words give 0; the
    single-letter word of length ``2p`` gives ``catalan(p)``.
    """
    word = _as_word(w)
    n = len(word)
    if n % 2:
        return 0.0

    def rec(seg: tuple[int, ...]) -> int:
        if not seg:
            return 1
        total = 0
        for k in range(1, len(seg), 2):
            if seg[k] == seg[0]:
                total += rec(seg[1:k]) * rec(seg[k + 1 :])
        return total

    return float(rec(word))
