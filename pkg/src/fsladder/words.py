"""Cell addresses and vertex identities on the triangle-in-triangle hierarchy.

Cells are addressed by finite words over the alphabet {1, 2, 3}.  A vertex is
a pair ``(word, corner)`` meaning "corner p_corner of the cell addressed by
word".  Adjacent sibling cells share one corner, expressed by the
identification ``(w + (i,), j) == (w + (j,), i)`` for i != j; canonical form
resolves that pair toward the smaller last letter.
"""

from __future__ import annotations

from itertools import product
from typing import Iterator, NamedTuple, Sequence

LETTERS = (1, 2, 3)

Word = tuple[int, ...]


def validate_word(word: Sequence[int]) -> Word:
    w = tuple(int(a) for a in word)
    if any(a not in LETTERS for a in w):
        raise ValueError(f"word letters must be in {LETTERS}, got {word!r}")
    return w


def words_at_level(n: int) -> Iterator[Word]:
    """All 3**n words of length n, in lexicographic order."""
    if n < 0:
        raise ValueError("level must be >= 0")
    return product(LETTERS, repeat=n)


def word_to_str(word: Word) -> str:
    return "".join(str(a) for a in word)


def word_from_str(s: str) -> Word:
    return validate_word(tuple(int(ch) for ch in s.strip()))


class VertexId(NamedTuple):
    """Canonical address of a hierarchy vertex: corner p_corner of cell `word`."""

    word: Word
    corner: int


def canonical_vertex(word: Sequence[int], corner: int) -> VertexId:
    """Resolve the shared-corner identification toward the smaller last letter.

    Idempotent: a canonical id maps to itself.
    """
    w = validate_word(word)
    if corner not in LETTERS:
        raise ValueError(f"corner must be in {LETTERS}, got {corner!r}")
    if w and w[-1] > corner:
        return VertexId(w[:-1] + (corner,), w[-1])
    return VertexId(w, corner)


def vertex_level(v: VertexId) -> int:
    """Depth of the vertex: 0 for the three outer corners."""
    return len(v.word)


def cells_are_disjoint(w: Word, v: Word) -> bool:
    """Whether the closed cells addressed by w and v are disjoint.

    Cells intersect exactly when one address prefixes the other or when the
    two are siblings (equal up to their differing last letter), in which case
    they share a single corner point.
    """
    k = min(len(w), len(v))
    if w[:k] == v[:k]:  # one is a prefix of the other (or equal)
        return False
    # first differing position
    i = next(idx for idx in range(k) if w[idx] != v[idx])
    return not (len(w) == i + 1 and len(v) == i + 1)
