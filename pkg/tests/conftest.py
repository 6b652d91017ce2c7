import numpy as np
import pytest

from prodec import build_code


def enumerate_codewords(code):
    """All codewords of a small code, via exhaustive information words."""
    k = code.k
    infos = ((np.arange(1 << k)[:, None] >> np.arange(k)[::-1]) & 1).astype(np.uint8)
    return code.encode(infos)


def oracle_bdd(code, words, codewords):
    """Nearest-codeword decoding truncated at radius t."""
    d = (words[:, None, :] != codewords[None, :, :]).sum(axis=2)
    idx = d.argmin(axis=1)
    mind = d[np.arange(len(words)), idx]
    return mind <= code.t, codewords[idx]


def oracle_eed(code, word, erasures, codewords):
    """Erasure-aware decoding: min 2*errors_outside + s, within dmin - 1."""
    mask = np.ones(code.n, dtype=bool)
    if len(erasures):
        mask[np.asarray(erasures, dtype=np.int64)] = False
    e = (word[None, mask] != codewords[:, mask]).sum(axis=1)
    i = int(e.argmin())
    score = 2 * int(e[i]) + len(erasures)
    return score <= code.dmin - 1, codewords[i]


@pytest.fixture(scope="session")
def hamming15():
    return build_code(4, 1, 0)


@pytest.fixture(scope="session")
def hamming15_codewords(hamming15):
    return enumerate_codewords(hamming15)


@pytest.fixture(scope="session")
def bch15_7():
    return build_code(4, 2, 0)


@pytest.fixture(scope="session")
def bch15_7_codewords(bch15_7):
    return enumerate_codewords(bch15_7)


@pytest.fixture(scope="session")
def small_ext():
    return build_code(4, 2, 0, extended=True)


@pytest.fixture(scope="session")
def small_ext_codewords(small_ext):
    return enumerate_codewords(small_ext)
