"""Arithmetic over GF(2^v) with log/antilog tables.

One published primitive polynomial is fixed per field order so that every
run reproduces the same field (and therefore the same generator polynomials
and codeword bit patterns).  Polynomials are stored as integers with the
LSB holding the constant term.
"""

from __future__ import annotations

import numpy as np

# Minimal-weight primitive polynomials, one per supported order.
PRIMITIVE_POLYS = {
    3: 0b1011,                 # x^3 + x + 1
    4: 0b10011,                # x^4 + x + 1
    5: 0b100101,               # x^5 + x^2 + 1
    6: 0b1000011,              # x^6 + x + 1
    7: 0b10001001,             # x^7 + x^3 + 1
    8: 0b100011101,            # x^8 + x^4 + x^3 + x^2 + 1
    9: 0b1000010001,           # x^9 + x^4 + 1
    10: 0b10000001001,         # x^10 + x^3 + 1
    11: 0b100000000101,        # x^11 + x^2 + 1
    12: 0b1000001010011,       # x^12 + x^6 + x^4 + x + 1
}


class GaloisField:
    """GF(2^v) with exp/log tables built from a fixed primitive polynomial.

    Scalar helpers operate on plain ints (fast in tight Python loops);
    ``exp_np``/``log_np`` expose the same tables as numpy arrays for
    vectorized evaluation.  ``exp`` is doubled in length so sums of two
    logs never need a modular reduction.
    """

    def __init__(self, v: int, primitive_poly: int | None = None):
        if v not in PRIMITIVE_POLYS:
            raise ValueError(f"field order exponent v={v} outside supported range 3..12")
        self.v = v
        self.order = 1 << v
        self.n_elements = self.order - 1  # size of the multiplicative group
        self.poly = primitive_poly if primitive_poly is not None else PRIMITIVE_POLYS[v]

        exp = [0] * (2 * self.n_elements)
        log = [0] * self.order
        x = 1
        for i in range(self.n_elements):
            exp[i] = x
            log[x] = i
            x <<= 1
            if x & self.order:
                x ^= self.poly
        if x != 1:
            raise ValueError(f"polynomial {self.poly:#x} is not primitive for v={v}")
        for i in range(self.n_elements, 2 * self.n_elements):
            exp[i] = exp[i - self.n_elements]
        self.exp = exp
        self.log = log
        self.exp_np = np.array(exp, dtype=np.int64)
        self.log_np = np.array(log, dtype=np.int64)

    def mul(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        return self.exp[self.log[a] + self.log[b]]

    def div(self, a: int, b: int) -> int:
        if b == 0:
            raise ZeroDivisionError("division by zero in GF(2^v)")
        if a == 0:
            return 0
        return self.exp[self.log[a] - self.log[b] + self.n_elements]

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("zero has no inverse in GF(2^v)")
        return self.exp[self.n_elements - self.log[a]]

    def pow_alpha(self, i: int) -> int:
        """alpha**i for any integer i (negative exponents allowed)."""
        return self.exp[i % self.n_elements]

    def poly_mul(self, p: list[int], q: list[int]) -> list[int]:
        """Product of two polynomials with GF coefficients (index = degree)."""
        out = [0] * (len(p) + len(q) - 1)
        for i, a in enumerate(p):
            if a == 0:
                continue
            la = self.log[a]
            for j, b in enumerate(q):
                if b:
                    out[i + j] ^= self.exp[la + self.log[b]]
        return out

    def poly_eval(self, p: list[int], x: int) -> int:
        """Horner evaluation of a GF-coefficient polynomial at x."""
        acc = 0
        for coef in reversed(p):
            acc = self.mul(acc, x) ^ coef
        return acc

    def min_poly(self, elem: int) -> list[int]:
        """Minimal polynomial of elem over GF(2), as 0/1 coefficients."""
        # Conjugacy class {elem^(2^i)}; product of (x - c) has binary coefficients.
        conj = []
        c = elem
        while c not in conj:
            conj.append(c)
            c = self.mul(c, c)
        poly = [1]
        for c in conj:
            poly = self.poly_mul(poly, [c, 1])
        if any(coef not in (0, 1) for coef in poly):
            raise AssertionError("minimal polynomial has non-binary coefficient")
        return poly
