"""Augmentation counts and linearized homology over Z/2."""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Mapping

import numpy as np

from .dgabuild import Dga
from .freealg import Polynomial, substitute

__all__ = [
    "Augmentation",
    "LinearizedComplex",
    "TooManyUnknowns",
    "InvalidAugmentation",
    "augmentations",
    "is_augmentation",
    "linearize",
    "betti",
    "rank_gf2",
    "DEFAULT_CAP",
]

DEFAULT_CAP = 24
_CHUNK = 1 << 16


class TooManyUnknowns(ValueError):
    pass


class InvalidAugmentation(ValueError):
    pass


@dataclass(frozen=True)
class Augmentation:
    eps: Mapping[str, int]

    def value(self, gid: str) -> int:
        return self.eps.get(gid, 0)

    def to_json(self) -> dict[str, int]:
        return {g: self.eps[g] for g in sorted(self.eps)}


def _unknowns(dga: Dga) -> list[str]:
    if dga.m == 1:
        return sorted(dga.generators)
    return sorted(g for g in dga.generators if dga.degree(g) == 0)


def is_augmentation(dga: Dga, eps: Mapping[str, int]) -> bool:
    """eps is graded and kills every differential."""
    for g, bit in eps.items():
        if bit and dga.degree(g) != 0:
            return False
    h = {g: (Polynomial.one() if eps.get(g, 0) else Polynomial.zero()) for g in dga.generators}
    return all(not substitute(h, p) for p in dga.diff.values())


def augmentations(dga: Dga, cap: int = DEFAULT_CAP) -> tuple[int, list[Augmentation]]:
    """Every graded augmentation, found by trying all assignments of the degree-0 generators."""
    unknowns = _unknowns(dga)
    if len(unknowns) > cap:
        raise TooManyUnknowns(f"{len(unknowns)} degree-0 generators exceed the cap {cap}")
    index = {g: i for i, g in enumerate(unknowns)}
    # each equation is a list of monomials, a monomial a bitmask of unknowns
    equations: list[list[int]] = []
    for p in dga.diff.values():
        eq = []
        for w in p.terms:
            if all(x in index for x in w):
                mask = 0
                for x in w:
                    mask |= 1 << index[x]
                eq.append(mask)
        if eq:
            equations.append(eq)
    n = len(unknowns)
    found: list[int] = []
    total = 1 << n
    for start in range(0, total, _CHUNK):
        a = np.arange(start, min(total, start + _CHUNK), dtype=np.int64)
        ok = np.ones(a.shape, dtype=bool)
        for eq in equations:
            parity = np.zeros(a.shape, dtype=bool)
            for mask in eq:
                parity ^= (a & mask) == mask
            ok &= ~parity
        found.extend(int(x) for x in a[ok])
    augs = [Augmentation({g: (x >> i) & 1 for g, i in index.items()}) for x in found]
    return len(augs), augs


@dataclass(frozen=True)
class LinearizedComplex:
    """Matrices of the linearized differential, keyed by source degree.

    ``maps[d]`` has one row per generator of degree d-1 and one column per
    generator of degree d.
    """

    m: int
    basis: Mapping[int, tuple[str, ...]]
    maps: Mapping[int, np.ndarray]

    def target(self, d: int) -> int:
        return (d - 1) % self.m if self.m > 0 else d - 1


def linearize(dga: Dga, eps: Augmentation | Mapping[str, int]) -> LinearizedComplex:
    """Linear part of the differential twisted by g -> g + eps(g)."""
    bits = eps.eps if isinstance(eps, Augmentation) else eps
    if not is_augmentation(dga, bits):
        raise InvalidAugmentation("eps does not annihilate the differential")
    phi = {g: Polynomial.gen(g) + (Polynomial.one() if bits.get(g, 0) else Polynomial.zero())
           for g in dga.generators}
    basis: dict[int, list[str]] = {}
    for g in sorted(dga.generators):
        basis.setdefault(dga.degree(g), []).append(g)
    degrees = sorted(basis)
    if dga.m > 0:
        degrees = list(range(dga.m))
    else:
        lo, hi = (min(degrees), max(degrees)) if degrees else (0, 0)
        degrees = list(range(lo, hi + 2))
    frozen = {d: tuple(basis.get(d, [])) for d in degrees}
    pos = {d: {g: i for i, g in enumerate(gs)} for d, gs in frozen.items()}
    maps: dict[int, np.ndarray] = {}
    for d in degrees:
        t = (d - 1) % dga.m if dga.m > 0 else d - 1
        rows = frozen.get(t, ())
        M = np.zeros((len(rows), len(frozen[d])), dtype=np.uint8)
        for j, g in enumerate(frozen[d]):
            for w in substitute(phi, dga.diff[g]).terms:
                if len(w) == 1:
                    M[pos[t][w[0]], j] ^= 1
        maps[d] = M
    lc = LinearizedComplex(dga.m, frozen, maps)
    for d in degrees:
        t = lc.target(d)
        if t in maps and maps[t].size and maps[d].size:
            if ((maps[t].astype(np.int64) @ maps[d].astype(np.int64)) % 2).any():
                raise InvalidAugmentation(f"linearized differential does not square to zero at degree {d}")
    return lc


def rank_gf2(M: np.ndarray) -> int:
    """Rank over Z/2 by row reduction on integer bitmasks."""
    rows = [int("".join("1" if x else "0" for x in r), 2) if len(r) else 0 for r in np.asarray(M) % 2]
    rank = 0
    pivots: dict[int, int] = {}
    for r in rows:
        while r:
            top = r.bit_length() - 1
            if top in pivots:
                r ^= pivots[top]
            else:
                pivots[top] = r
                rank += 1
                break
    return rank


def betti(lc: LinearizedComplex) -> dict[int, int]:
    """dim ker - dim im in every degree."""
    out = {}
    for d, gens in lc.basis.items():
        up = d + 1 if lc.m == 0 else (d + 1) % lc.m
        r_out = rank_gf2(lc.maps[d]) if d in lc.maps else 0
        r_in = rank_gf2(lc.maps[up]) if up in lc.maps else 0
        out[d] = len(gens) - r_out - r_in
    return {d: out[d] for d in sorted(out)}


def betti_json(b: Mapping[int, int]) -> str:
    return json.dumps({str(d): r for d, r in b.items()}, indent=2) + "\n"
