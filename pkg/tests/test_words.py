import numpy as np
import pytest
from hypothesis import given, strategies as st

from wishart_traces.coloring import Coloring
from wishart_traces.parser import parse_trace_expr
from wishart_traces.perm import Permutation
from wishart_traces.words import Letter, TraceExpr, TraceWord, entry_sum_identity_check, evaluate, word_from_cycle

words = st.lists(st.tuples(st.integers(1, 3), st.sampled_from(["", "", "h"])), min_size=1, max_size=6).map(
    lambda ls: TraceWord(tuple(Letter(c, h) for c, h in ls))
)


@st.composite
def exprs(draw):
    n_terms = draw(st.integers(0, 3))
    terms = []
    for _ in range(n_terms):
        mono = draw(st.dictionaries(st.sampled_from(["p1", "p2", "N"]), st.integers(0, 3), max_size=2))
        ws = draw(st.lists(st.sampled_from([TraceWord.of(1), TraceWord.of(1, 2), TraceWord.of(2, 2, 1)]), max_size=2))
        terms.append((mono, ws, draw(st.integers(-3, 3))))
    return TraceExpr.from_terms(terms)


def test_word_from_cycle():
    t = Coloring.parse("1,2")
    assert str(word_from_cycle((1, 2), t)) == "x1 x2"
    assert word_from_cycle((2, 1), t) == word_from_cycle((1, 2), t)
    t6 = Coloring.parse("1,2,3,1,2,3")
    assert word_from_cycle((1, 5, 3, 4, 2, 6), t6).colors == (1, 2, 3, 1, 2, 3)


def test_reversal_is_distinct():
    assert TraceWord.of(1, 2, 3) != TraceWord.of(3, 2, 1)
    assert TraceWord.of(1, 2, 3) == TraceWord.of(2, 3, 1)


@given(words)
def test_canonical_rotation(w):
    letters = w.letters
    for i in range(len(letters)):
        assert TraceWord(letters[i:] + letters[:i]) == w
    assert TraceWord(w.letters).letters == w.letters
    assert w.letters == min(letters[i:] + letters[:i] for i in range(len(letters)))


def test_expr_examples():
    e = TraceExpr.symbol("p1") * TraceExpr.trace(TraceWord.of(1))
    assert e + 0 == e
    prod = e * (TraceExpr.symbol("p2") * TraceExpr.trace(TraceWord.of(2)))
    assert str(prod) == "p1*p2*tr(x1)*tr(x2)"


def test_table1_assembled_from_rows():
    w, ww = TraceWord.of(1, 2), TraceWord.of(1, 2, 1, 2)
    p1, p2 = TraceExpr.symbol("p1"), TraceExpr.symbol("p2")
    rows = [
        p1**2 * p2**2 * TraceExpr.trace(w, w),
        p1**2 * p2 * TraceExpr.trace(ww),
        p1 * p2**2 * TraceExpr.trace(ww),
        p1 * p2 * TraceExpr.trace(w, w),
    ]
    total = sum(rows, TraceExpr())
    assert str(total) == "p1^2*p2^2*tr(x1 x2)^2 + p1^2*p2*tr(x1 x2 x1 x2) + p1*p2^2*tr(x1 x2 x1 x2) + p1*p2*tr(x1 x2)^2"
    # p = 1, Sigma = I_N gives 2N^2 + 2N
    for N in (1, 3):
        assert evaluate(total, [np.eye(N), np.eye(N)], {"p1": 1, "p2": 1}) == 2 * N**2 + 2 * N


def test_evaluate_simple():
    e = TraceExpr.symbol("p1") * TraceExpr.trace(TraceWord.of(1))
    assert evaluate(e, [np.eye(3)], {"p1": 2}) == 6


def test_evaluate_normalized():
    C = np.diag([1.0, 2.0, 3.0])
    e = TraceExpr.trace(TraceWord.of(1, 1, 1, 1, 1, 1), normalized=True)
    assert evaluate(e, [C]) == pytest.approx(np.trace(np.linalg.matrix_power(C, 6)) / 3)


def test_evaluate_errors():
    e = TraceExpr.symbol("p1") * TraceExpr.trace(TraceWord.of(2))
    with pytest.raises(ValueError):
        evaluate(e, [np.eye(2)], {"p1": 1})
    with pytest.raises(ValueError):
        evaluate(TraceExpr.symbol("q"), [np.eye(2)])


def test_mixing_normalization_rejected():
    a = TraceExpr.trace(TraceWord.of(1))
    b = TraceExpr.trace(TraceWord.of(1), normalized=True)
    with pytest.raises(ValueError):
        a + b
    assert (b * TraceExpr.symbol("N")).normalized


@given(exprs(), exprs(), exprs())
def test_ring_axioms(a, b, c):
    assert a + b == b + a
    assert a * b == b * a
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a - a == TraceExpr()
    assert a * 1 == a
    assert a * TraceExpr.constant(0) == TraceExpr()


@given(exprs())
def test_print_parse_roundtrip(e):
    assert parse_trace_expr(str(e)) == e


def test_substitute_identifies_variables():
    e = TraceExpr.symbol("p2") * TraceExpr.trace(TraceWord.of(1, 2))
    out = e.substitute({"p2": "p"}, {2: 1})
    assert str(out) == "p*tr(x1 x1)"


def test_entry_sum_examples():
    rng = np.random.default_rng(0)
    A = rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3))
    B = rng.standard_normal((3, 3))
    lhs, rhs = entry_sum_identity_check(Permutation.identity(1), Coloring((1,)), None, [A])
    assert lhs == pytest.approx(np.trace(A)) and rhs == pytest.approx(np.trace(A))
    lhs, rhs = entry_sum_identity_check(Permutation.identity(2), Coloring((1, 2)), None, [A, B])
    assert lhs == pytest.approx(np.trace(A) * np.trace(B))
    assert rhs == pytest.approx(lhs, rel=1e-12)


@st.composite
def entry_cases(draw):
    n = draw(st.integers(1, 4))
    N = draw(st.integers(1, 4))
    sigma = Permutation(tuple(draw(st.permutations(range(n)))))
    colors = tuple(draw(st.lists(st.integers(1, 2), min_size=n, max_size=n)))
    hpos = draw(st.sets(st.integers(1, n)))
    seed = draw(st.integers(0, 2**32 - 1))
    return sigma, colors, hpos, N, seed


@given(entry_cases())
def test_entry_sum_identity(case):
    sigma, colors, hpos, N, seed = case
    rng = np.random.default_rng(seed)

    def mat():
        return rng.standard_normal((N, N)) + 1j * rng.standard_normal((N, N))

    mats = [mat(), mat()]
    h = {j: mat() for j in hpos}
    lhs, rhs = entry_sum_identity_check(sigma, Coloring(colors), h, mats)
    assert abs(lhs - rhs) <= 1e-10 * max(1.0, abs(lhs))
