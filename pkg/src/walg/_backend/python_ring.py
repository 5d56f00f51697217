from __future__ import annotations

from sympy import ZZ
from sympy.polys.rings import ring


class PythonRing:
    name = "python"

    def __init__(self, names: tuple[str, ...]):
        self.names = names
        self.ring, *gens = ring(",".join(names), ZZ, "lex")
        self.gens = tuple(gens)
        self.zero = self.ring.zero
        self.one = self.ring.one
        self.nvars = len(names)

    def from_int(self, n: int):
        return self.ring(n)

    def gen(self, i: int):
        return self.gens[i]

    def gcd(self, a, b):
        return a.gcd(b)

    def exquo(self, a, b):
        return a.exquo(b)

    def divides(self, a, b) -> bool:
        return not a.rem(b)

    def is_zero(self, a) -> bool:
        return not a

    def is_one(self, a) -> bool:
        return a == self.one

    def is_constant(self, a) -> bool:
        return a.is_ground

    def content(self, a) -> int:
        return int(a.content())

    def lc(self, a) -> int:
        return int(a.LC)

    def terms(self, a) -> list[tuple[tuple[int, ...], int]]:
        return [(tuple(e), int(c)) for e, c in a.terms()]

    def from_terms(self, terms):
        return self.ring.from_dict({tuple(e): ZZ(c) for e, c in terms})

    def degree(self, a, i: int) -> int:
        if not a:
            return -1
        return int(a.degree(i))

    def used(self, a) -> list[int]:
        return [i for i, d in enumerate(a.degrees()) if d > 0]

    def compose(self, a, images: list):
        pairs = [(g, im) for g, im in zip(self.gens, images) if im != g]
        if not pairs:
            return a
        return a.compose(pairs)

    def factor(self, a) -> list[tuple[object, int]]:
        _, factors = a.factor_list()
        return [(f, int(e)) for f, e in factors]
