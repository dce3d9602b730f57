import os
import subprocess
import sys

import pytest
from hypothesis import given, strategies as st

from mell import kernel
from mell.generators import TermGenerator
from mell.kernel import _kernel_py
from mell.syntax import MELL, MLL, canonicalize, free_vars, rename_free, size

compiled = pytest.importorskip("mell.kernel._kernel")
seeds = st.integers(0, 2**32 - 1)


def test_compiled_backend_selected():
    assert kernel.BACKEND == "compiled"


@given(seeds, st.sampled_from([MELL, MLL]))
def test_backends_agree(seed, mode):
    t = TermGenerator(seed, mode, redex_bias=0.3).term(25)
    assert compiled.canonical_key(t) == _kernel_py.canonical_key(t)
    assert compiled.term_size(t) == _kernel_py.term_size(t) == size(t)


@given(seeds)
def test_key_ignores_bound_names_only(seed):
    gen = TermGenerator(seed, MELL)
    t = gen.typed(gen.rng.randint(1, 12)).term
    assert kernel.canonical_key(rename_free(t)) == kernel.canonical_key(t)
    assert kernel.canonical_key(canonicalize(t)) == kernel.canonical_key(t)
    lin, unr = free_vars(t)
    if lin:
        a = sorted(lin)[0]
        assert kernel.canonical_key(rename_free(t, {a: a + "_renamed"})) != kernel.canonical_key(t)
    if unr:
        u = sorted(unr)[0]
        assert kernel.canonical_key(rename_free(t, None, {u: u + "_renamed"})) != kernel.canonical_key(t)


def test_pure_python_fallback_selected_by_environment():
    env = dict(os.environ, MELL_PURE_PYTHON="1")
    out = subprocess.run(
        [sys.executable, "-c", "from mell import kernel; print(kernel.BACKEND)"],
        env=env, capture_output=True, text=True, check=True,
    )
    assert out.stdout.strip() == "python"
