"""The python and numba backends must agree bit for bit."""
import os
import subprocess
import sys

import numpy as np
import pytest
from hypothesis import given, strategies as st

from ndgcolor import kernels
from ndgcolor.decompose import AlphaVector

from strategies import graphs

needs_jit = pytest.mark.skipif(kernels.JIT is None, reason="numba missing")


@needs_jit
@given(graphs(max_n=15), st.data())
def test_descend_agrees(g, data):
    av = AlphaVector((2, 3, 2))
    col = np.asarray(data.draw(st.lists(st.integers(0, 2), min_size=g.n, max_size=g.n)), dtype=np.int64)
    outs = []
    for b in (kernels.PY, kernels.JIT):
        c = col.copy()
        counts = kernels.color_counts(g.indptr, g.indices, c, 3, backend=b)
        moves = kernels.descend(g.indptr, g.indices, c, av.alphas, counts, backend=b)
        assert np.array_equal(counts, kernels.color_counts(g.indptr, g.indices, c, 3, backend=b))
        outs.append((moves, c.tolist()))
    assert outs[0] == outs[1]


@needs_jit
@given(graphs(max_n=15), st.integers(1, 6), st.data())
def test_greedy_agrees(g, k, data):
    seq = np.asarray(data.draw(st.permutations(range(g.n))), dtype=np.int64)
    outs = []
    for b in (kernels.PY, kernels.JIT):
        col = np.zeros(g.n, dtype=np.int64)
        outs.append((kernels.greedy(g.indptr, g.indices, seq, k, col, backend=b), col.tolist()))
    assert outs[0] == outs[1]


@needs_jit
@given(graphs(max_n=15), st.data())
def test_counts_and_distinct_agree(g, data):
    col = np.asarray(data.draw(st.lists(st.integers(1, 4), min_size=g.n, max_size=g.n)), dtype=np.int64)
    a = kernels.distinct_neighbor_colors(g.indptr, g.indices, col, backend=kernels.PY)
    b = kernels.distinct_neighbor_colors(g.indptr, g.indices, col, backend=kernels.JIT)
    expect = [len({int(col[u]) for u in g.neighbors(v)}) for v in range(g.n)]
    assert list(a) == list(b) == expect
    c0 = col - 1
    assert np.array_equal(kernels.color_counts(g.indptr, g.indices, c0, 4, backend=kernels.PY),
                          kernels.color_counts(g.indptr, g.indices, c0, 4, backend=kernels.JIT))


def test_env_flag_selects_python():
    code = "from ndgcolor import kernels, backend_name; print(kernels.ACTIVE.name, backend_name())"
    env = dict(os.environ, NDGCOLOR_DISABLE_NUMBA="1")
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
    assert out.stdout.split() == ["python", "python"]


@needs_jit
def test_default_is_numba():
    code = "from ndgcolor import kernels; print(kernels.ACTIVE.name)"
    env = {k: v for k, v in os.environ.items() if k != "NDGCOLOR_DISABLE_NUMBA"}
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "numba"
