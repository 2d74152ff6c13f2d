"""Exact rational scalars and immutable dense rational matrices."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, List, Sequence, Tuple, Union

from .errors import DimensionMismatchError, ParseError

Rational = Fraction
RationalLike = Union[int, str, Fraction]


def to_rational(value: RationalLike) -> Fraction:
    """Convert an int, a Fraction or a "p/q" string to a Fraction; floats are refused."""
    if isinstance(value, bool):
        raise ParseError(f"boolean is not a rational value: {value!r}")
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise ParseError(f"not a rational literal: {value!r}") from exc
    raise ParseError(f"expected an exact rational, got {type(value).__name__}")


def format_rational(value: Fraction) -> str:
    """Render as "p/q" in lowest terms (the denominator is always present)."""
    return f"{value.numerator}/{value.denominator}"


def parse_vector(text: str) -> Tuple[Fraction, ...]:
    """Parse a comma-separated list of rationals such as "1/2,3,-4/5"."""
    items = [t for t in text.replace(" ", "").split(",") if t]
    return tuple(to_rational(t) for t in items)


@dataclass(frozen=True)
class RationalMatrix:
    """Dense matrix of Fractions stored as a tuple of row tuples."""

    entries: Tuple[Tuple[Fraction, ...], ...]

    def __post_init__(self) -> None:
        width = len(self.entries[0]) if self.entries else 0
        for row in self.entries:
            if len(row) != width:
                raise DimensionMismatchError("ragged matrix rows")

    @classmethod
    def from_rows(cls, rows: Iterable[Iterable[RationalLike]]) -> "RationalMatrix":
        return cls(tuple(tuple(to_rational(v) for v in row) for row in rows))

    @classmethod
    def zeros(cls, rows: int, cols: int | None = None) -> "RationalMatrix":
        cols = rows if cols is None else cols
        zero = Fraction(0)
        return cls(tuple((zero,) * cols for _ in range(rows)))

    @classmethod
    def identity(cls, n: int) -> "RationalMatrix":
        one, zero = Fraction(1), Fraction(0)
        return cls(tuple(tuple(one if i == j else zero for j in range(n)) for i in range(n)))

    @classmethod
    def from_flat(cls, values: Sequence[Fraction], n: int) -> "RationalMatrix":
        if len(values) != n * n:
            raise DimensionMismatchError(f"expected {n * n} values, got {len(values)}")
        return cls(tuple(tuple(values[i * n:(i + 1) * n]) for i in range(n)))

    @classmethod
    def column(cls, values: Iterable[RationalLike]) -> "RationalMatrix":
        return cls(tuple((to_rational(v),) for v in values))

    @property
    def rows(self) -> int:
        return len(self.entries)

    @property
    def cols(self) -> int:
        return len(self.entries[0]) if self.entries else 0

    @property
    def is_square(self) -> bool:
        return self.rows == self.cols

    def __getitem__(self, index: Tuple[int, int]) -> Fraction:
        i, j = index
        return self.entries[i][j]

    def __iter__(self) -> Iterator[Tuple[Fraction, ...]]:
        return iter(self.entries)

    def flat(self) -> Tuple[Fraction, ...]:
        return tuple(v for row in self.entries for v in row)

    def transpose(self) -> "RationalMatrix":
        return RationalMatrix(tuple(zip(*self.entries))) if self.entries else self

    def __add__(self, other: "RationalMatrix") -> "RationalMatrix":
        self._same_shape(other)
        return RationalMatrix(
            tuple(tuple(a + b for a, b in zip(r, s)) for r, s in zip(self.entries, other.entries))
        )

    def __sub__(self, other: "RationalMatrix") -> "RationalMatrix":
        self._same_shape(other)
        return RationalMatrix(
            tuple(tuple(a - b for a, b in zip(r, s)) for r, s in zip(self.entries, other.entries))
        )

    def scale(self, c: RationalLike) -> "RationalMatrix":
        c = to_rational(c)
        return RationalMatrix(tuple(tuple(c * v for v in row) for row in self.entries))

    def __matmul__(self, other: "RationalMatrix") -> "RationalMatrix":
        if self.cols != other.rows:
            raise DimensionMismatchError(
                f"cannot multiply {self.rows}x{self.cols} by {other.rows}x{other.cols}"
            )
        cols = list(zip(*other.entries))
        return RationalMatrix(
            tuple(
                tuple(sum((a * b for a, b in zip(row, col) if a and b), Fraction(0)) for col in cols)
                for row in self.entries
            )
        )

    def apply(self, vector: Sequence[RationalLike]) -> Tuple[Fraction, ...]:
        """Matrix-vector product, returned as a tuple."""
        if len(vector) != self.cols:
            raise DimensionMismatchError(f"vector length {len(vector)} != {self.cols} columns")
        vec = [to_rational(v) for v in vector]
        return tuple(
            sum((a * b for a, b in zip(row, vec) if a), Fraction(0)) for row in self.entries
        )

    def to_json(self) -> List[List[str]]:
        return [[format_rational(v) for v in row] for row in self.entries]

    @classmethod
    def from_json(cls, data: Sequence[Sequence[RationalLike]]) -> "RationalMatrix":
        if not isinstance(data, (list, tuple)):
            raise ParseError("matrix must be a list of rows")
        return cls.from_rows(data)

    def _same_shape(self, other: "RationalMatrix") -> None:
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise DimensionMismatchError("matrix shapes differ")

    def __str__(self) -> str:
        return "\n".join(" ".join(str(v) for v in row) for row in self.entries)
