"""Signed Pauli words and X-times-diagonal normal forms for stabilizer products.

Two operator representations live here:

* PauliString -- a tensor product of single-site I/X/Z/Y letters with a global
  sign, kept Hermitian (the Y letter absorbs the i in Y = iXZ, so eigenvalues
  are always +-1).
* StabilizerProduct -- sign * (product of X_i over an x-mask) * D_f, where D_f
  is diagonal with entries (-1)^f(z) and f is a boolean polynomial of degree
  at most two. Graph-state stabilizers, their CZ-dressed hypergraph
  generalizations, and all products of these stay inside this normal form.

Sites are 1-indexed in every public signature; bit i-1 of a mask corresponds
to site i.
"""
from __future__ import annotations

from dataclasses import dataclass

from .graphs import GraphSpec, HypergraphSpec

_LETTERS = {(0, 0): "I", (1, 0): "X", (0, 1): "Z", (1, 1): "Y"}


def _mask_from_sites(sites, n: int) -> int:
    mask = 0
    for s in sites:
        if not 1 <= s <= n:
            raise ValueError(f"site {s} outside 1..{n}")
        mask |= 1 << (s - 1)
    return mask


def _check_mask(mask: int, n: int, name: str) -> None:
    if mask < 0 or mask >> n:
        raise ValueError(f"{name} {bin(mask)} does not fit {n} sites")


def _check_sign(sign: int) -> None:
    if sign not in (1, -1):
        raise ValueError(f"sign must be +1 or -1, got {sign!r}")


def parse_setting(setting, n: int | None = None) -> tuple[int, ...]:
    """Normalize a selector to a tuple of 0/1 bits (site 1 first).

    Accepts a string like "1100" or any sequence of 0/1 integers.
    """
    if isinstance(setting, str):
        if not all(c in "01" for c in setting):
            raise ValueError(f"setting string must contain only 0/1, got {setting!r}")
        bits = tuple(int(c) for c in setting)
    else:
        bits = tuple(int(b) for b in setting)
        if not all(b in (0, 1) for b in bits):
            raise ValueError(f"setting bits must be 0/1, got {setting!r}")
    if n is not None and len(bits) != n:
        raise ValueError(f"setting has {len(bits)} bits, expected {n}")
    return bits


def leading_half_setting(n: int) -> tuple[int, ...]:
    """The selector 1^(n/2) 0^(n/2); requires even n."""
    if n % 2:
        raise ValueError(f"half-weight selector needs even n, got {n}")
    return (1,) * (n // 2) + (0,) * (n // 2)


def alternating_setting(n: int) -> tuple[int, ...]:
    """The selector 0101...01 picking every even site; requires even n."""
    if n % 2:
        raise ValueError(f"alternating selector needs even n, got {n}")
    return (0, 1) * (n // 2)


@dataclass(frozen=True)
class PauliString:
    """A Hermitian signed Pauli word on n sites.

    Site letters are read off the mask bits: (x, z) = (0,0) I, (1,0) X,
    (0,1) Z, (1,1) Y. The stored sign is the full prefactor; every
    PauliString squares to the identity.
    """

    n: int
    sign: int = 1
    x_mask: int = 0
    z_mask: int = 0

    def __post_init__(self):
        if self.n < 1:
            raise ValueError(f"need at least one site, got n={self.n}")
        _check_sign(self.sign)
        _check_mask(self.x_mask, self.n, "x_mask")
        _check_mask(self.z_mask, self.n, "z_mask")

    @classmethod
    def identity(cls, n: int) -> "PauliString":
        return cls(n)

    @classmethod
    def from_letters(cls, letters: str, sign: int = 1) -> "PauliString":
        """Build from a letter string like "XZIY" (site 1 first)."""
        x = z = 0
        for pos, c in enumerate(letters):
            if c == "X":
                x |= 1 << pos
            elif c == "Z":
                z |= 1 << pos
            elif c == "Y":
                x |= 1 << pos
                z |= 1 << pos
            elif c != "I":
                raise ValueError(f"unknown letter {c!r} at site {pos + 1}")
        return cls(len(letters), sign, x, z)

    def letter(self, i: int) -> str:
        if not 1 <= i <= self.n:
            raise ValueError(f"site {i} outside 1..{self.n}")
        return _LETTERS[((self.x_mask >> (i - 1)) & 1, (self.z_mask >> (i - 1)) & 1)]

    def letters(self) -> str:
        return "".join(self.letter(i) for i in range(1, self.n + 1))

    def __str__(self) -> str:
        return ("+" if self.sign > 0 else "-") + self.letters()

    @property
    def xy_support(self) -> int:
        """Number of sites carrying X or Y."""
        return self.x_mask.bit_count()

    def xy_sites(self) -> tuple[int, ...]:
        return tuple(i for i in range(1, self.n + 1) if (self.x_mask >> (i - 1)) & 1)

    def _phase(self) -> int:
        # exponent p in the internal form i^p X^x Z^z
        p = (self.x_mask & self.z_mask).bit_count()
        if self.sign < 0:
            p += 2
        return p % 4

    def __mul__(self, other: "PauliString") -> "PauliString":
        if not isinstance(other, PauliString):
            return NotImplemented
        if self.n != other.n:
            raise ValueError(f"size mismatch: {self.n} vs {other.n} sites")
        # (X^xa Z^za)(X^xb Z^zb) = (-1)^{za.xb} X^(xa^xb) Z^(za^zb)
        phase = self._phase() + other._phase()
        phase += 2 * (self.z_mask & other.x_mask).bit_count()
        x = self.x_mask ^ other.x_mask
        z = self.z_mask ^ other.z_mask
        sign_phase = (phase - (x & z).bit_count()) % 4
        if sign_phase % 2:
            raise ValueError("product is not Hermitian (stray factor of i)")
        return PauliString(self.n, 1 if sign_phase == 0 else -1, x, z)


@dataclass(frozen=True)
class StabilizerProduct:
    """Normal form sign * X^x_mask * D_f with f of boolean degree <= 2.

    f(z) = sum_i linear_i z_i + sum_{(i,j) in quadratic} z_i z_j (mod 2),
    with `linear` a bitmask and `quadratic` a set of sorted 1-indexed pairs.
    The set of such operators is closed under multiplication, which is what
    makes exact symbolic products of generalized stabilizers possible.
    """

    n: int
    sign: int = 1
    x_mask: int = 0
    linear: int = 0
    quadratic: frozenset = frozenset()

    def __post_init__(self):
        if self.n < 1:
            raise ValueError(f"need at least one site, got n={self.n}")
        _check_sign(self.sign)
        _check_mask(self.x_mask, self.n, "x_mask")
        _check_mask(self.linear, self.n, "linear")
        canon = set()
        for pair in self.quadratic:
            a, b = pair
            if a == b:
                raise ValueError(f"quadratic pair {tuple(pair)} has repeated site")
            if not (1 <= a <= self.n and 1 <= b <= self.n):
                raise ValueError(f"quadratic pair {tuple(pair)} outside 1..{self.n}")
            canon.add((min(a, b), max(a, b)))
        object.__setattr__(self, "quadratic", frozenset(canon))

    @classmethod
    def identity(cls, n: int) -> "StabilizerProduct":
        return cls(n)

    @property
    def xy_support(self) -> int:
        return self.x_mask.bit_count()

    def phase_polynomial_degree(self) -> int:
        if self.quadratic:
            return 2
        if self.linear:
            return 1
        return 0

    def __mul__(self, other: "StabilizerProduct") -> "StabilizerProduct":
        if not isinstance(other, StabilizerProduct):
            return NotImplemented
        if self.n != other.n:
            raise ValueError(f"size mismatch: {self.n} vs {other.n} sites")
        # Push D_f(self) through other's X factors: substitute z -> z ^ c
        # with c = other.x_mask. Degree never rises; constants become sign.
        c = other.x_mask
        const = (self.linear & c).bit_count()
        linear = self.linear
        quadratic = set(self.quadratic)
        for (a, b) in self.quadratic:
            ca = (c >> (a - 1)) & 1
            cb = (c >> (b - 1)) & 1
            if cb:
                linear ^= 1 << (a - 1)
            if ca:
                linear ^= 1 << (b - 1)
            const += ca & cb
        linear ^= other.linear
        quadratic ^= other.quadratic
        sign = self.sign * other.sign * (-1 if const % 2 else 1)
        return StabilizerProduct(self.n, sign, self.x_mask ^ other.x_mask, linear,
                                 frozenset(quadratic))


def graph_stabilizer(g: GraphSpec, i: int) -> PauliString:
    """Generator of |G>: X on vertex i, Z on each neighbor."""
    if not 1 <= i <= g.n:
        raise ValueError(f"vertex {i} outside 1..{g.n}")
    return PauliString(g.n, 1, 1 << (i - 1), _mask_from_sites(g.neighbors(i), g.n))


def stabilizer_product(g: GraphSpec, setting) -> PauliString:
    """Product of graph-state generators selected by the bits of `setting`.

    Factors multiply left to right in ascending vertex order; the exact sign
    is tracked through every XZ/ZX swap. Sites with selector bit 1 are
    exactly the sites carrying X or Y in the result.
    """
    bits = parse_setting(setting, g.n)
    word = PauliString.identity(g.n)
    for i, b in enumerate(bits, start=1):
        if b:
            word = word * graph_stabilizer(g, i)
    return word


def hypergraph_stabilizer(h: HypergraphSpec, i: int) -> StabilizerProduct:
    """Generalized generator of |G~>: X_i times Z on e2-neighbors times
    CZ on the remaining pair of each incident hyperedge."""
    if not 1 <= i <= h.n:
        raise ValueError(f"vertex {i} outside 1..{h.n}")
    quadratic = frozenset(
        tuple(sorted(v for v in t if v != i)) for t in h.incident_triples(i)
    )
    return StabilizerProduct(
        h.n, 1, 1 << (i - 1), _mask_from_sites(h.neighbors(i), h.n), quadratic
    )


def generalized_product(h: HypergraphSpec, setting) -> StabilizerProduct:
    """Normal-form product of generalized generators selected by `setting`."""
    bits = parse_setting(setting, h.n)
    word = StabilizerProduct.identity(h.n)
    for i, b in enumerate(bits, start=1):
        if b:
            word = word * hypergraph_stabilizer(h, i)
    return word


def try_to_pauli(s: StabilizerProduct) -> PauliString | None:
    """Collapse a StabilizerProduct to a signed Pauli word, or return None.

    Succeeds exactly when the quadratic part is empty: the diagonal tail is
    then a plain Z-mask and the word is a tensor product of Pauli letters.
    """
    if s.quadratic:
        return None
    phase = (0 if s.sign > 0 else 2) - (s.x_mask & s.linear).bit_count()
    phase %= 4
    if phase % 2:
        raise ValueError("operator is not Hermitian; cannot form a Pauli word")
    return PauliString(s.n, 1 if phase == 0 else -1, s.x_mask, s.linear)
