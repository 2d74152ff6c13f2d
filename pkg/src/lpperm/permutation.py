"""Permutations of {0..n-1} and their matrices.

Matrix convention: the matrix of σ has a 1 at (i, σ(i)).  With this convention
``perm_to_matrix(a) @ perm_to_matrix(b) == perm_to_matrix(a * b)`` where the
product ``a * b`` applies ``a`` first and then ``b``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence, Tuple

from .errors import DimensionMismatchError, ParseError
from .matrix import RationalMatrix


@dataclass(frozen=True, order=True)
class Permutation:
    """A bijection of {0..n-1}; ``images[i]`` is the image of i."""

    images: Tuple[int, ...]

    def __post_init__(self) -> None:
        if sorted(self.images) != list(range(len(self.images))):
            raise ParseError(f"not a permutation: {self.images}")

    @classmethod
    def of(cls, images: Iterable[int]) -> "Permutation":
        return cls(tuple(int(v) for v in images))

    @classmethod
    def identity(cls, n: int) -> "Permutation":
        return cls(tuple(range(n)))

    @classmethod
    def transposition(cls, n: int, a: int, b: int) -> "Permutation":
        images = list(range(n))
        images[a], images[b] = b, a
        return cls(tuple(images))

    @property
    def degree(self) -> int:
        return len(self.images)

    def __call__(self, i: int) -> int:
        return self.images[i]

    def __mul__(self, other: "Permutation") -> "Permutation":
        """Apply ``self`` first, then ``other``."""
        if self.degree != other.degree:
            raise DimensionMismatchError("permutation degrees differ")
        o = other.images
        return Permutation(tuple(o[v] for v in self.images))

    def after(self, other: "Permutation") -> "Permutation":
        """Ordinary function composition ``self ∘ other``."""
        return other * self

    def inverse(self) -> "Permutation":
        inv = [0] * self.degree
        for i, v in enumerate(self.images):
            inv[v] = i
        return Permutation(tuple(inv))

    def is_identity(self) -> bool:
        return all(i == v for i, v in enumerate(self.images))

    def inversions(self) -> int:
        """Number of pairs i < j with images[i] > images[j]."""
        # Fenwick tree over values seen so far
        n = self.degree
        tree = [0] * (n + 1)
        count = 0
        for seen, v in enumerate(self.images):
            k, below = v + 1, 0
            while k > 0:
                below += tree[k]
                k -= k & -k
            count += seen - below
            k = v + 1
            while k <= n:
                tree[k] += 1
                k += k & -k
        return count

    def permute_vector(self, vector: Sequence[Fraction]) -> Tuple[Fraction, ...]:
        """The product (matrix of self)·vector, i.e. entry i is vector[σ(i)]."""
        return tuple(vector[v] for v in self.images)

    def __str__(self) -> str:
        return "[" + ",".join(str(v) for v in self.images) + "]"


def perm_to_matrix(sigma: Permutation) -> RationalMatrix:
    """Zero-one matrix with a 1 at (i, σ(i))."""
    one, zero = Fraction(1), Fraction(0)
    n = sigma.degree
    return RationalMatrix(
        tuple(tuple(one if j == sigma.images[i] else zero for j in range(n)) for i in range(n))
    )


def matrix_to_perm(X: RationalMatrix) -> Permutation:
    """Inverse of perm_to_matrix; raises ParseError if X is not a permutation matrix."""
    if not X.is_square:
        raise ParseError("permutation matrix must be square")
    images = []
    for row in X.entries:
        ones = [j for j, v in enumerate(row) if v != 0]
        if len(ones) != 1 or row[ones[0]] != 1:
            raise ParseError("not a permutation matrix")
        images.append(ones[0])
    return Permutation(tuple(images))


def parse_permutation(text: str) -> Permutation:
    """Parse "0,2,1,3" (images) into a Permutation."""
    try:
        return Permutation.of(int(t) for t in text.replace(" ", "").strip("[]").split(",") if t)
    except ValueError as exc:
        raise ParseError(f"bad permutation literal {text!r}") from exc
