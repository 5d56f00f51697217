from __future__ import annotations

import flint


class FlintRing:
    name = "flint"

    def __init__(self, names: tuple[str, ...]):
        self.names = names
        self.ctx = flint.fmpz_mpoly_ctx.get(names, "lex")
        self.gens = self.ctx.gens()
        self.zero = self.ctx.from_dict({})
        self.one = self.ctx.constant(1)
        self.nvars = len(names)

    def from_int(self, n: int):
        return self.ctx.constant(n)

    def gen(self, i: int):
        return self.gens[i]

    def gcd(self, a, b):
        return a.gcd(b)

    def exquo(self, a, b):
        return a / b

    def divides(self, a, b) -> bool:
        """True when ``b`` divides ``a`` exactly."""
        try:
            a / b
        except Exception:
            return False
        return True

    def is_zero(self, a) -> bool:
        return a.is_zero()

    def is_one(self, a) -> bool:
        return a.is_one()

    def is_constant(self, a) -> bool:
        return a.is_constant()

    def content(self, a) -> int:
        return int(a.content())

    def lc(self, a) -> int:
        return int(a.leading_coefficient())

    def terms(self, a) -> list[tuple[tuple[int, ...], int]]:
        return [(tuple(e), int(c)) for e, c in a.terms()]

    def from_terms(self, terms) -> object:
        return self.ctx.from_dict({tuple(e): c for e, c in terms})

    def degree(self, a, i: int) -> int:
        if a.is_zero():
            return -1
        return int(a.degrees()[i])

    def used(self, a) -> list[int]:
        degs = a.degrees()
        return [i for i, d in enumerate(degs) if d > 0]

    def compose(self, a, images: list):
        return a.compose(*images)

    def factor(self, a) -> list[tuple[object, int]]:
        _, factors = a.factor()
        return [(f, int(e)) for f, e in factors]
