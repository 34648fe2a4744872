"""Free unital associative algebra over Z/2, its grading, and matrices over it.

A word is a tuple of generator ids; the empty tuple is the unit.  A polynomial
is a finite set of words, since every coefficient is either 0 or 1.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Iterable, Iterator, Mapping, Sequence

__all__ = [
    "Word",
    "Polynomial",
    "Generator",
    "Grading",
    "GenMatrix",
    "FreeAlgebraError",
    "UnknownGenerator",
    "UngradedGenerator",
    "DimensionMismatch",
    "TermCapExceeded",
    "poly_add",
    "poly_mul",
    "derive",
    "substitute",
    "mat_op",
    "word_degree",
    "set_term_cap",
    "get_term_cap",
]

Word = tuple[str, ...]

_TERM_CAP = 10**6


class FreeAlgebraError(Exception):
    pass


class UnknownGenerator(FreeAlgebraError, KeyError):
    pass


class UngradedGenerator(FreeAlgebraError, KeyError):
    pass


class DimensionMismatch(FreeAlgebraError, ValueError):
    pass


class TermCapExceeded(FreeAlgebraError, RuntimeError):
    pass


def set_term_cap(cap: int) -> int:
    """Set the maximum number of terms a polynomial may hold; returns the old cap."""
    global _TERM_CAP
    if cap < 1:
        raise ValueError("term cap must be positive")
    old, _TERM_CAP = _TERM_CAP, cap
    return old


def get_term_cap() -> int:
    return _TERM_CAP


def _checked(terms: set[Word] | frozenset[Word]) -> frozenset[Word]:
    if len(terms) > _TERM_CAP:
        raise TermCapExceeded(f"polynomial has {len(terms)} terms, cap is {_TERM_CAP}")
    return frozenset(terms)


class Polynomial:
    """An element of the free Z/2-algebra, stored as its set of words."""

    __slots__ = ("terms", "_hash")

    def __init__(self, terms: Iterable[Word] = ()) -> None:
        toggled: set[Word] = set()
        for w in terms:
            w = tuple(w)
            if w in toggled:
                toggled.remove(w)
            else:
                toggled.add(w)
        self.terms: frozenset[Word] = _checked(toggled)
        self._hash: int | None = None

    @classmethod
    def _raw(cls, terms: frozenset[Word]) -> "Polynomial":
        p = cls.__new__(cls)
        p.terms = terms
        p._hash = None
        return p

    @classmethod
    def zero(cls) -> "Polynomial":
        return _ZERO

    @classmethod
    def one(cls) -> "Polynomial":
        return _ONE

    @classmethod
    def gen(cls, gid: str) -> "Polynomial":
        return cls._raw(frozenset({(gid,)}))

    def __add__(self, other: "Polynomial") -> "Polynomial":
        return poly_add(self, other)

    def __mul__(self, other: "Polynomial") -> "Polynomial":
        return poly_mul(self, other)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(self.terms)
        return self._hash

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __len__(self) -> int:
        return len(self.terms)

    def __iter__(self) -> Iterator[Word]:
        return iter(self.sorted_terms())

    def __contains__(self, word: object) -> bool:
        return word in self.terms

    def __repr__(self) -> str:
        return f"Polynomial({self.render()!r})"

    def sorted_terms(self) -> list[Word]:
        return sorted(self.terms)

    def generators(self) -> set[str]:
        return {g for w in self.terms for g in w}

    def has_unit(self) -> bool:
        return () in self.terms

    def is_zero(self) -> bool:
        return not self.terms

    def render(self) -> str:
        """Canonical text: terms joined by ' + ', factors by '·'."""
        if not self.terms:
            return "0"
        return " + ".join("·".join(w) if w else "1" for w in self.sorted_terms())

    @classmethod
    def parse(cls, text: str) -> "Polynomial":
        text = text.strip()
        if text == "0":
            return _ZERO
        words: list[Word] = []
        for chunk in text.split(" + "):
            chunk = chunk.strip()
            if not chunk:
                raise ValueError(f"empty term in {text!r}")
            words.append(() if chunk == "1" else tuple(chunk.split("·")))
        return cls(words)


_ZERO = Polynomial._raw(frozenset())
_ONE = Polynomial._raw(frozenset({()}))


def poly_add(p: Polynomial, q: Polynomial) -> Polynomial:
    if not p.terms:
        return q
    if not q.terms:
        return p
    return Polynomial._raw(_checked(p.terms ^ q.terms))


def poly_mul(p: Polynomial, q: Polynomial) -> Polynomial:
    if not p.terms or not q.terms:
        return _ZERO
    if p.terms == _ONE.terms:
        return q
    if q.terms == _ONE.terms:
        return p
    out: set[Word] = set()
    for u in p.terms:
        for v in q.terms:
            w = u + v
            if w in out:
                out.remove(w)
            else:
                out.add(w)
    return Polynomial._raw(_checked(out))


def _lookup(table: Mapping[str, Polynomial], gid: str) -> Polynomial:
    try:
        return table[gid]
    except KeyError:
        raise UnknownGenerator(gid) from None


def derive(d: Mapping[str, Polynomial], p: Polynomial) -> Polynomial:
    """Apply the derivation determined by ``d`` via the Leibniz rule."""
    out: set[Word] = set()
    for w in p.terms:
        for i, g in enumerate(w):
            image = _lookup(d, g)
            if not image.terms:
                continue
            left, right = w[:i], w[i + 1:]
            for t in image.terms:
                nw = left + t + right
                if nw in out:
                    out.remove(nw)
                else:
                    out.add(nw)
    return Polynomial._raw(_checked(out))


def substitute(h: Mapping[str, Polynomial], p: Polynomial) -> Polynomial:
    """Apply the unital algebra homomorphism extending ``h``."""
    total = _ZERO
    for w in p.terms:
        acc = _ONE
        for g in w:
            acc = poly_mul(acc, _lookup(h, g))
            if not acc.terms:
                break
        total = poly_add(total, acc)
    return total


@dataclass(frozen=True)
class Generator:
    id: str
    cell: str
    kind: str
    sheets: tuple[int, int]
    degree: int = 0

    def __post_init__(self) -> None:
        if self.kind not in ("a", "b", "c", "aux"):
            raise ValueError(f"bad generator kind {self.kind!r}")


@dataclass(frozen=True)
class Grading:
    """Degrees mod ``m``; ``m == 0`` means integer grading."""

    m: int
    deg: Mapping[str, int] = field(default_factory=dict)

    def reduce(self, value: int) -> int:
        return value % self.m if self.m > 0 else value

    def of(self, gid: str) -> int:
        try:
            return self.reduce(self.deg[gid])
        except KeyError:
            raise UngradedGenerator(gid) from None


def word_degree(w: Sequence[str], g: Grading) -> int:
    return g.reduce(sum(g.of(x) for x in w))


class GenMatrix:
    """Square matrix of polynomials.  Indices in the public helpers are 1-based."""

    __slots__ = ("n", "rows")

    def __init__(self, rows: Sequence[Sequence[Polynomial]]) -> None:
        self.n = len(rows)
        if any(len(r) != self.n for r in rows):
            raise DimensionMismatch("matrix must be square")
        self.rows: tuple[tuple[Polynomial, ...], ...] = tuple(tuple(r) for r in rows)

    @classmethod
    def zero(cls, n: int) -> "GenMatrix":
        return cls([[_ZERO] * n for _ in range(n)])

    @classmethod
    def identity(cls, n: int) -> "GenMatrix":
        return cls([[_ONE if i == j else _ZERO for j in range(n)] for i in range(n)])

    @classmethod
    def elementary(cls, n: int, i: int, j: int) -> "GenMatrix":
        """E_{i,j}: a single unit entry at row i, column j."""
        return cls.build(n, lambda r, c: _ONE if (r, c) == (i, j) else _ZERO)

    @classmethod
    def build(cls, n: int, entry: Callable[[int, int], Polynomial]) -> "GenMatrix":
        return cls([[entry(i, j) for j in range(1, n + 1)] for i in range(1, n + 1)])

    def __getitem__(self, ij: tuple[int, int]) -> Polynomial:
        i, j = ij
        return self.rows[i - 1][j - 1]

    def __add__(self, other: "GenMatrix") -> "GenMatrix":
        return mat_op(self, other, "add")

    def __mul__(self, other: "GenMatrix") -> "GenMatrix":
        return mat_op(self, other, "mul")

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, GenMatrix):
            return NotImplemented
        return self.rows == other.rows

    def __hash__(self) -> int:
        return hash(self.rows)

    def __repr__(self) -> str:
        body = "; ".join(", ".join(p.render() for p in r) for r in self.rows)
        return f"GenMatrix[{body}]"

    def map(self, f: Callable[[Polynomial], Polynomial]) -> "GenMatrix":
        return GenMatrix([[f(p) for p in r] for r in self.rows])

    def is_strictly_upper(self) -> bool:
        return all(not self.rows[i][j] for i in range(self.n) for j in range(i + 1))

    def is_zero(self) -> bool:
        return all(not p for r in self.rows for p in r)


def mat_op(M: GenMatrix, N: GenMatrix, op: str) -> GenMatrix:
    if M.n != N.n:
        raise DimensionMismatch(f"{M.n}x{M.n} vs {N.n}x{N.n}")
    n = M.n
    if op == "add":
        return GenMatrix([[poly_add(M.rows[i][j], N.rows[i][j]) for j in range(n)] for i in range(n)])
    if op == "mul":
        out = []
        for i in range(n):
            row = []
            for j in range(n):
                acc = _ZERO
                for t in range(n):
                    a = M.rows[i][t]
                    if a.terms:
                        b = N.rows[t][j]
                        if b.terms:
                            acc = poly_add(acc, poly_mul(a, b))
                row.append(acc)
            out.append(row)
        return GenMatrix(out)
    raise ValueError(f"unknown matrix operation {op!r}")
