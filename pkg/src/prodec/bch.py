"""Binary BCH / extended BCH component codes with hard-decision decoding.

Conventions (also documented in the README):

* A length-``n`` word is a numpy uint8 array.  Array position ``a``
  corresponds to polynomial degree ``n - 1 - a``, so information bits
  occupy the leading positions ``0..k-1`` and parity the trailing ones.
* Shortening removes the leading information positions of the parent
  ``(2^v - 1)``-length code (they are fixed to zero and not transmitted).
* An extended code appends one overall (even) parity bit at position
  ``n - 1`` to the shortened parent code.

``bdd_decode`` is an exact sphere decoder of radius ``t``: it returns the
codeword within Hamming distance ``t`` of the input whenever one exists
(miscorrections included) and fails otherwise.  ``eed_decode`` is the
erasure analogue with the sphere ``2*errors + erasures <= dmin - 1``;
erased positions are filled with zero before syndrome computation and
recovered through the erasure-locator / Forney formulation of
Berlekamp-Massey.  Decoded outputs are always verified to be codewords, so
a ``decoded`` outcome is trustworthy even outside the guarantee region.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .gf import GaloisField

_EMPTY = np.empty(0, dtype=np.int64)


@dataclass
class TernaryWord:
    """Component decoder outcome: per-bit values in {-1, 0, +1}.

    ``decoded`` outcomes carry values in {-1, +1} (bit 0 maps to +1, bit 1
    to -1) describing a valid codeword; failures carry all zeros.
    """

    values: np.ndarray
    decoded: bool

    @classmethod
    def from_bits(cls, bits: np.ndarray) -> "TernaryWord":
        return cls(values=(1 - 2 * bits.astype(np.int8)), decoded=True)

    @classmethod
    def failure(cls, n: int) -> "TernaryWord":
        return cls(values=np.zeros(n, dtype=np.int8), decoded=False)

    def bits(self) -> np.ndarray:
        """Hard bits of a decoded outcome (valid only when ``decoded``)."""
        return ((1 - self.values) // 2).astype(np.uint8)


@dataclass
class BatchDecode:
    ok: np.ndarray      # bool per row
    words: np.ndarray   # corrected rows where ok, inputs elsewhere


class BchCode:
    """Component code descriptor plus the algebraic decoding machinery."""

    def __init__(self, v: int, t: int, s: int, extended: bool = False,
                 name: str | None = None):
        if not 3 <= v <= 12:
            raise ValueError(f"v={v} outside supported range 3..12")
        if t < 1:
            raise ValueError("error-correcting capability t must be >= 1")
        if s < 0:
            raise ValueError("shortening parameter s must be >= 0")
        self.v = v
        self.t = t
        self.s = s
        self.extended = extended
        self.name = name
        self.field = GaloisField(v)
        self.field_n = (1 << v) - 1  # parent cyclic length

        gen = [1]
        seen: set[int] = set()
        for power in range(1, 2 * t + 1):
            elem = self.field.pow_alpha(power)
            key = min(self._conjugacy_class(elem))
            if key in seen:
                continue
            seen.add(key)
            gen = _poly_mul_gf2(gen, self.field.min_poly(elem))
        self.generator = np.array(gen, dtype=np.uint8)  # index = degree
        deg_g = len(gen) - 1

        parent_n = self.field_n - s
        parent_k = parent_n - deg_g
        self.parent_n = parent_n
        if extended:
            self.n = parent_n + 1
            self.dmin = 2 * t + 2
        else:
            self.n = parent_n
            self.dmin = 2 * t + 1
        self.k = parent_k
        if self.k <= 0 or self.k >= self.n:
            raise ValueError(
                f"invalid parameters: (v={v}, t={t}, s={s}) gives k={self.k}, n={self.n}")

        self._build_tables()
        self._build_parity_matrix()

    def __repr__(self) -> str:
        kind = "eBCH" if self.extended else "BCH"
        return f"{kind}({self.n},{self.k},t={self.t})"

    def _conjugacy_class(self, elem: int) -> list[int]:
        out = []
        c = elem
        while c not in out:
            out.append(c)
            c = self.field.mul(c, c)
        return out

    def _build_tables(self) -> None:
        gf = self.field
        N = self.field_n
        pn = self.parent_n
        twot = 2 * self.t
        # Syndrome table: POW[j-1, a] = alpha^(j * deg(a)) with deg(a) = pn-1-a.
        degs = pn - 1 - np.arange(pn, dtype=np.int64)
        pow_tab = np.empty((twot, pn), dtype=np.int32)
        for j in range(1, twot + 1):
            pow_tab[j - 1] = gf.exp_np[(j * degs) % N].astype(np.int32)
        self._pow = pow_tab
        # Chien table: NEG[k-1, a] = (-k * deg(a)) mod N, so that
        # exp[log(coef) + NEG[k-1]] evaluates coef * alpha^(-k*deg) everywhere.
        neg = np.empty((self.t, pn), dtype=np.int64)
        for kk in range(1, self.t + 1):
            neg[kk - 1] = (N - (kk * degs) % N) % N
        self._chien_neg = neg
        self._degs = degs

    def _build_parity_matrix(self) -> None:
        # rem tracks x^e mod g; rows[i] holds it for e = deg_g + i.  The
        # systematic parity of unit info vector i is x^(pn-1-i) mod g.
        g = self.generator.tolist()
        deg_g = len(g) - 1
        pn = self.parent_n
        k = self.k
        rem = [0] * deg_g
        rem[-1] = 1  # x^(deg_g - 1)
        rows = []
        for _e in range(deg_g, pn):
            carry = rem[-1]
            rem = [0] + rem[:-1]
            if carry:
                for j in range(deg_g):
                    rem[j] ^= g[j]
            rows.append(list(rem))
        P = np.zeros((k, deg_g), dtype=np.uint8)
        for i in range(k):
            coeffs = rows[k - 1 - i]
            for d, c in enumerate(coeffs):
                if c:
                    P[i, deg_g - 1 - d] = 1
        self._parity = P
        self._parity_f = P.astype(np.float32)

    # ------------------------------------------------------------------
    # encoding
    # ------------------------------------------------------------------

    def encode(self, info: np.ndarray) -> np.ndarray:
        """Systematic encoding; accepts a single info word or a batch."""
        info = np.asarray(info, dtype=np.uint8)
        single = info.ndim == 1
        batch = info[None, :] if single else info
        if batch.shape[-1] != self.k:
            raise ValueError(f"information length {batch.shape[-1]} != k={self.k}")
        par = (batch.astype(np.float32) @ self._parity_f).astype(np.int64) & 1
        parent = np.concatenate([batch, par.astype(np.uint8)], axis=1)
        if self.extended:
            overall = parent.sum(axis=1, dtype=np.int64) & 1
            out = np.concatenate([parent, overall.astype(np.uint8)[:, None]], axis=1)
        else:
            out = parent
        return out[0] if single else out

    # ------------------------------------------------------------------
    # syndromes
    # ------------------------------------------------------------------

    def parent_syndromes(self, words: np.ndarray) -> np.ndarray:
        """Power-sum syndromes S_1..S_2t of the parent part of each word."""
        words = np.asarray(words, dtype=np.uint8)
        single = words.ndim == 1
        batch = words[None, :] if single else words
        parent = batch[:, :self.parent_n]
        mask = parent[:, None, :] != 0
        syn = np.bitwise_xor.reduce(np.where(mask, self._pow[None, :, :], 0), axis=2)
        return syn[0] if single else syn

    def is_codeword(self, word: np.ndarray) -> bool:
        word = np.asarray(word, dtype=np.uint8)
        if word.shape[-1] != self.n:
            raise ValueError("length mismatch")
        if np.any(self.parent_syndromes(word)):
            return False
        if self.extended and (int(word.sum()) & 1):
            return False
        return True

    # ------------------------------------------------------------------
    # decoding
    # ------------------------------------------------------------------

    def bdd_decode(self, word: np.ndarray) -> TernaryWord:
        """Bounded-distance decoding (exact sphere of radius t)."""
        word = np.asarray(word, dtype=np.uint8)
        if word.shape != (self.n,):
            raise ValueError(f"expected a length-{self.n} word")
        out = self.decode_batch(word[None, :])
        if out.ok[0]:
            return TernaryWord.from_bits(out.words[0])
        return TernaryWord.failure(self.n)

    def eed_decode(self, word: np.ndarray, erasures) -> TernaryWord:
        """Errors-and-erasures decoding within 2e + s <= dmin - 1."""
        word = np.asarray(word, dtype=np.uint8)
        if word.shape != (self.n,):
            raise ValueError(f"expected a length-{self.n} word")
        ers = sorted(int(e) for e in erasures)
        if len(ers) != len(set(ers)):
            raise ValueError("erasure positions must be distinct")
        if ers and (ers[0] < 0 or ers[-1] >= self.n):
            raise ValueError("erasure position out of range")
        if len(ers) >= self.dmin:
            return TernaryWord.failure(self.n)
        out = self.decode_batch(word[None, :], [np.array(ers, dtype=np.int64)])
        if out.ok[0]:
            return TernaryWord.from_bits(out.words[0])
        return TernaryWord.failure(self.n)

    def decode_batch(self, words: np.ndarray, erasures=None) -> BatchDecode:
        """Decode a batch of rows; ``erasures`` is an optional per-row list.

        Returns corrected words where decoding succeeded and the untouched
        input elsewhere; callers pick the failure semantics.
        """
        words = np.ascontiguousarray(words, dtype=np.uint8)
        B = words.shape[0]
        if erasures is None:
            filled = words
        else:
            filled = words.copy()
            for b in range(B):
                ers = erasures[b]
                if len(ers):
                    filled[b, np.asarray(ers, dtype=np.int64)] = 0
        syn = self.parent_syndromes(filled)
        ok = np.zeros(B, dtype=bool)
        out = words.copy()
        if erasures is None:
            # Already-codeword fast path.
            easy = ~syn.any(axis=1)
            if self.extended:
                easy &= (words.sum(axis=1, dtype=np.int64) & 1) == 0
            ok[easy] = True
            todo = np.nonzero(~easy)[0]
        else:
            todo = range(B)
        for b in todo:
            ers = erasures[b] if erasures is not None else _EMPTY
            res = self._decode_one(filled[b], words[b], syn[b], ers)
            if res is not None:
                ok[b] = True
                out[b] = res
        return BatchDecode(ok=ok, words=out)

    # per-word solve -----------------------------------------------------

    def _decode_one(self, filled, original, syn, erasures):
        if len(erasures) >= self.dmin:
            return None
        if not self.extended:
            cand = self._parent_solve(filled, syn,
                                      [self.parent_n - 1 - int(p) for p in erasures])
            if cand is None:
                return None
            corrected, nerr = cand
            if 2 * nerr + len(erasures) > self.dmin - 1:
                return None
            return corrected

        # Extended code: decode the parent word, then account for the
        # overall parity bit.  A small set of parent attempts covers the
        # full 2e + s <= 2t + 1 sphere of the extended code.
        pn = self.parent_n
        parent_ers = [int(p) for p in erasures if p < pn]
        parity_erased = len(parent_ers) != len(erasures)
        s_total = len(erasures)
        pword = filled[:pn]

        candidates = []
        cand = self._parent_solve(pword, syn, [pn - 1 - p for p in parent_ers])
        if cand is not None:
            candidates.append(cand[0])
        if parent_ers and not parity_erased and s_total % 2 == 1:
            # Odd erasure count boundary: guess one erased bit both ways so
            # the attempt with the true value stays within the parent sphere.
            j = parent_ers[0]
            rest = [pn - 1 - p for p in parent_ers[1:]]
            col = self._pow[:, j].astype(np.int64)
            for bit in (0, 1):
                trial = pword.copy()
                trial[j] = bit
                tsyn = (syn ^ col) if bit else syn
                cand = self._parent_solve(trial, tsyn, rest)
                if cand is not None:
                    candidates.append(cand[0])

        er_mask = np.zeros(self.n, dtype=bool)
        if s_total:
            er_mask[np.asarray(erasures, dtype=np.int64)] = True
        best = None
        best_score = None
        for pc in candidates:
            pbit = int(pc.sum()) & 1
            full = np.concatenate([pc, np.array([pbit], dtype=np.uint8)])
            diff = (full != original) & ~er_mask
            score = 2 * int(diff.sum()) + s_total
            if score <= self.dmin - 1 and (best_score is None or score < best_score):
                best, best_score = full, score
        return best

    def _parent_solve(self, pword, syn, erasure_degs):
        """Exact parent-sphere decode; returns (corrected parent, #errors)."""
        gf = self.field
        exp, log = gf.exp, gf.log
        N = self.field_n
        twot = 2 * self.t
        s = len(erasure_degs)
        if s > twot:
            return None
        S = [int(x) for x in syn]

        if not any(S):
            # The zero-filled word is already a codeword.
            return pword.copy(), 0

        if s:
            gamma = [1]
            for d in erasure_degs:
                gamma = gf.poly_mul(gamma, [1, gf.pow_alpha(d)])
            # Modified syndromes xi_m = sum_u gamma_u S_(m-u) for m = 1..2t;
            # the subsequence past the first s entries is LFSR-generated by
            # the error locator alone.
            xi = []
            for m in range(1, twot + 1):
                acc = 0
                for u, gu in enumerate(gamma):
                    if gu and 1 <= m - u <= twot and S[m - u - 1]:
                        acc ^= exp[log[gu] + log[S[m - u - 1]]]
                xi.append(acc)
            seq = xi[s:]
        else:
            gamma = [1]
            seq = S

        lam, L = _berlekamp_massey(gf, seq)
        if 2 * L > len(seq):
            return None
        while len(lam) > 1 and lam[-1] == 0:
            lam.pop()
        if len(lam) - 1 != L:
            return None

        if L:
            # Chien search, vectorized over all word positions.
            acc = np.ones(self.parent_n, dtype=np.int64)
            for kk in range(1, L + 1):
                if lam[kk]:
                    acc ^= gf.exp_np[log[lam[kk]] + self._chien_neg[kk - 1]]
            root_pos = np.nonzero(acc == 0)[0]
            if len(root_pos) != L:
                # Repeated roots or roots in the shortened range.
                return None
            err_degs = [int(self._degs[p]) for p in root_pos]
            if set(err_degs) & set(erasure_degs):
                return None
        else:
            root_pos = _EMPTY
            err_degs = []

        corrected = pword.copy()
        changed_degs = list(err_degs)
        if s:
            phi = gf.poly_mul(lam, gamma)
            nvals = L + s
            omega = []  # omega[m-1] = coefficient of z^m in Phi(z) S(z)
            for m in range(1, nvals + 1):
                acc2 = 0
                for u, pu in enumerate(phi):
                    if u > m:
                        break
                    if pu and 1 <= m - u <= twot and S[m - u - 1]:
                        acc2 ^= exp[log[pu] + log[S[m - u - 1]]]
                omega.append(acc2)
            dphi = [phi[j] if j % 2 == 1 else 0 for j in range(1, len(phi))]
            for d in err_degs:
                if self._forney_value(d, omega, dphi) != 1:
                    return None
            for d in erasure_degs:
                val = self._forney_value(d, omega, dphi)
                if val == 1:
                    corrected[self.parent_n - 1 - d] = 1
                    changed_degs.append(d)
                elif val != 0:
                    return None
        for p in root_pos:
            corrected[p] ^= 1

        # Verify the corrected word is a codeword via a syndrome update.
        for j in range(1, twot + 1):
            acc3 = S[j - 1]
            for d in changed_degs:
                acc3 ^= exp[(j * d) % N]
            if acc3:
                return None
        return corrected, L

    def _forney_value(self, d: int, omega, dphi) -> int:
        """Error/erasure magnitude at locator alpha^d (X * Omega(1/X) / Phi'(1/X))."""
        gf = self.field
        x = gf.pow_alpha(d)
        xi = gf.inv(x)
        num = 0
        for m in range(len(omega), 0, -1):
            num = gf.mul(num, xi) ^ omega[m - 1]
        num = gf.mul(num, xi)  # account for the z^1 offset of omega
        den = gf.poly_eval(dphi, xi)
        if den == 0:
            return -1
        return gf.mul(x, gf.div(num, den))


def _poly_mul_gf2(p: list[int], q: list[int]) -> list[int]:
    out = [0] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        if a & 1:
            for j, b in enumerate(q):
                if b & 1:
                    out[i + j] ^= 1
    return out


def _berlekamp_massey(gf: GaloisField, seq: list[int]) -> tuple[list[int], int]:
    """Minimal LFSR (connection polynomial, length) generating ``seq``."""
    exp, log = gf.exp, gf.log
    N = gf.n_elements
    C = [1]
    B = [1]
    L = 0
    m = 1
    b = 1
    for i, si in enumerate(seq):
        d = si
        for kk in range(1, L + 1):
            if kk < len(C) and C[kk] and seq[i - kk]:
                d ^= exp[log[C[kk]] + log[seq[i - kk]]]
        if d == 0:
            m += 1
            continue
        coef_log = (log[d] + N - log[b]) % N
        if 2 * L <= i:
            T = C[:]
            if len(C) < m + len(B):
                C = C + [0] * (m + len(B) - len(C))
            for j, Bj in enumerate(B):
                if Bj:
                    C[j + m] ^= exp[coef_log + log[Bj]]
            L = i + 1 - L
            B = T
            b = d
            m = 1
        else:
            if len(C) < m + len(B):
                C = C + [0] * (m + len(B) - len(C))
            for j, Bj in enumerate(B):
                if Bj:
                    C[j + m] ^= exp[coef_log + log[Bj]]
            m += 1
    return C, L


def build_code(v: int, t: int, s: int = 0, extended: bool = False,
               name: str | None = None) -> BchCode:
    """Construct a (shortened, optionally extended) BCH component code."""
    return BchCode(v, t, s, extended, name)
