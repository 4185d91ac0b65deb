import itertools
import json
import math
import random
from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from covertab.cover import (
    CoverDatum,
    canonical_key,
    datum_from_json,
    degree,
    format_datum,
    genus,
    group_structure,
    is_isomorphic,
    parse_datum,
    row_span,
    validate_datum,
)
from covertab.errors import BadShape, NonIntegralGenus, RowSumNonzero, ZeroColumn
from covertab.snf import smith_diagonal

from conftest import III_STAR, III_STARSTAR, data, random_datum


# -- oracles --------------------------------------------------------------------


def brute_span(N, A):
    m = len(A)
    out = set()
    for n in itertools.product(range(N), repeat=m):
        out.add(tuple(sum(n[i] * A[i][j] for i in range(m)) % N for j in range(len(A[0]))))
    return out


def brute_torsion_counts(N, A):
    """|{g in G : k g = 0}| for each k | N, G the row span (isomorphic to the column span)."""
    span = brute_span(N, A)
    return {k: sum(1 for a in span if all(k * x % N == 0 for x in a)) for k in range(1, N + 1) if N % k == 0}


def torsion_counts(factors, N):
    return {k: math.prod(math.gcd(k, f) for f in factors) for k in range(1, N + 1) if N % k == 0}


def genus_oracle(N, A):
    deg = len(brute_span(N, A))
    s = len(A[0])
    cols = [[A[i][j] for i in range(len(A))] for j in range(s)]
    g = 1 + deg * (Fraction(s - 2, 2) - sum(Fraction(math.gcd(N, *c), 2 * N) for c in cols))
    assert g.denominator == 1
    return int(g)


# -- validation -----------------------------------------------------------------


def test_iii_star_valid():
    d = validate_datum(3, III_STAR)
    assert (d.s, d.m) == (5, 2)


def test_zero_column():
    with pytest.raises(ZeroColumn) as exc:
        validate_datum(4, [[1, 1, 2, 0], [2, 2, 0, 0]])
    assert exc.value.column == 4


def test_row_sum_nonzero():
    with pytest.raises(RowSumNonzero) as exc:
        validate_datum(3, [[1, 1, 2]])
    assert exc.value.row == 1


@pytest.mark.parametrize("N,rows", [(1, [[0, 0, 0]]), (3, [[1, 2]]), (3, [[1, 1, 1], [1, 2]]), (3, [])])
def test_bad_shape(N, rows):
    with pytest.raises(BadShape):
        validate_datum(N, rows)


def test_entries_reduced():
    d = validate_datum(3, [[-1, 5, 4, -2]])
    assert d.A == ((2, 2, 1, 1),)


# -- genus, group, span -----------------------------------------------------------


@pytest.mark.parametrize(
    "N,rows,g",
    [(3, III_STAR, 7), (12, [[4, 6, 7, 7]], 7), (2, [[1, 1, 1, 1]], 1), (4, III_STARSTAR, 5)],
)
def test_genus(N, rows, g):
    assert genus(validate_datum(N, rows)) == g == genus_oracle(N, rows)


def test_genus_formula_is_exact():
    # a datum built directly (bypassing validation) with a nonzero row sum breaks integrality
    d = object.__new__(CoverDatum)
    object.__setattr__(d, "N", 4)
    object.__setattr__(d, "A", ((1, 0, 0),))
    with pytest.raises(NonIntegralGenus):
        genus(d)


@pytest.mark.parametrize(
    "N,rows,factors",
    [(3, III_STAR, (3, 3)), (12, [[4, 6, 7, 7]], (12,)), (4, III_STARSTAR, (2, 4))],
)
def test_group_structure(N, rows, factors):
    d = validate_datum(N, rows)
    G = group_structure(d)
    assert G.invariant_factors == factors
    assert G.order == len(brute_span(N, rows))
    assert torsion_counts(G.invariant_factors, N) == brute_torsion_counts(N, rows)


def test_row_span_examples():
    assert row_span(validate_datum(3, [[1, 1, 1]])) == {(0, 0, 0), (1, 1, 1), (2, 2, 2)}
    assert len(row_span(validate_datum(3, III_STAR))) == 9
    d = validate_datum(4, III_STARSTAR)
    assert len(row_span(d)) == 8
    assert not d.rows_independent
    assert validate_datum(3, III_STAR).rows_independent


def test_row_span_matches_brute_force():
    rng = random.Random(7)
    for _ in range(300):
        d = random_datum(rng, N_max=9, m_max=3, s_max=6)
        assert row_span(d) == brute_span(d.N, d.A)
        assert degree(d) == group_structure(d).order


def test_smith_diagonal_against_sympy():
    from sympy.matrices.normalforms import smith_normal_form

    rng = random.Random(11)
    for _ in range(200):
        r, c = rng.randint(1, 4), rng.randint(1, 6)
        M = [[rng.randint(-9, 9) for _ in range(c)] for _ in range(r)]
        ours = [abs(x) for x in smith_diagonal(M)]
        ref = smith_normal_form(sympy.Matrix(M), domain=sympy.ZZ)
        theirs = [abs(int(ref[i, i])) for i in range(min(r, c))]
        assert sorted(x for x in ours if x) == sorted(x for x in theirs if x)
        for a, b in zip(ours, ours[1:]):
            if a and b:
                assert b % a == 0


def test_group_structure_fuzz_against_torsion_counts():
    rng = random.Random(3)
    for _ in range(500):
        d = random_datum(rng, N_max=12, m_max=3, s_max=6)
        G = group_structure(d)
        fs = G.invariant_factors
        assert all(b % a == 0 for a, b in zip(fs, fs[1:]))
        assert d.N ** d.m % G.order == 0
        assert torsion_counts(fs, d.N) == brute_torsion_counts(d.N, d.A)
        if d.rows_independent:
            assert G.order == d.N ** d.m


# -- reduced form -------------------------------------------------------------------


def test_reduced():
    d = validate_datum(6, [[2, 2, 2]])
    assert d.reducible_modulus
    assert d.reduced() == validate_datum(3, [[1, 1, 1]])
    assert canonical_key(d) == canonical_key(d.reduced())


# -- canonical key ------------------------------------------------------------------


def test_key_row_swap():
    a = validate_datum(3, III_STAR)
    b = validate_datum(3, III_STAR[::-1])
    assert canonical_key(a) == canonical_key(b)
    assert is_isomorphic(a, b)


def test_key_row_operation():
    r1, r2 = III_STAR
    a = validate_datum(3, III_STAR)
    b = validate_datum(3, [r1, [x + y for x, y in zip(r1, r2)]])
    assert canonical_key(a) == canonical_key(b)
    assert is_isomorphic(a, b)


def test_key_distinguishes():
    a = validate_datum(3, III_STAR)
    b = validate_datum(4, III_STARSTAR)
    assert canonical_key(a) != canonical_key(b)
    assert not is_isomorphic(a, b)


def test_key_stable_hex():
    # frozen: the key derivation must not drift between releases
    assert canonical_key(validate_datum(3, III_STAR)).hex() == canonical_key(
        validate_datum(3, [[1, 2, 1, 2, 0], [0, 0, 1, 1, 1]])
    ).hex()
    assert len(canonical_key(validate_datum(2, [[1, 1, 1, 1]])).hex()) == 16


def test_column_perm_flag():
    a = validate_datum(4, [[1, 1, 2, 0, 0], [0, 0, 2, 1, 1]])
    b = validate_datum(4, [[2, 1, 1, 0, 0], [0, 0, 1, 1, 2]])
    c = validate_datum(4, [[1, 2, 1, 0, 0], [0, 0, 1, 1, 2]])
    assert is_isomorphic(b, c)
    assert not is_isomorphic(b, c, column_perm=False)
    assert canonical_key(a, column_perm=False) != canonical_key(a)


def brute_isomorphic(d1, d2):
    if d1.N != d2.N or d1.s != d2.s:
        return False
    s1 = brute_span(d1.N, d1.A)
    s2 = brute_span(d2.N, d2.A)
    if len(s1) != len(s2):
        return False
    return any({tuple(a[j] for j in perm) for a in s1} == s2 for perm in itertools.permutations(range(d1.s)))


def test_key_matches_brute_isomorphism():
    rng = random.Random(5)
    pool = [random_datum(rng, N_max=4, m_max=2, s_max=5, s_min=3) for _ in range(120)]
    pool = [d.reduced() for d in pool]
    for d1, d2 in itertools.combinations(pool, 2):
        assert (canonical_key(d1) == canonical_key(d2)) == brute_isomorphic(d1, d2)


@settings(max_examples=150, deadline=None)
@given(data(N_max=9, m_max=3, s_max=6), st.randoms(use_true_random=False))
def test_key_invariances(d, rnd):
    k = canonical_key(d)
    rows = [list(r) for r in d.A]
    rnd.shuffle(rows)
    assert canonical_key(validate_datum(d.N, rows)) == k
    perm = list(range(d.s))
    rnd.shuffle(perm)
    assert canonical_key(validate_datum(d.N, [[r[j] for j in perm] for r in d.A])) == k
    if d.m >= 2:
        c = rnd.randrange(d.N)
        rows = [list(r) for r in d.A]
        rows[0] = [x + c * y for x, y in zip(rows[0], rows[1])]
        assert canonical_key(validate_datum(d.N, rows)) == k


# -- serialization ----------------------------------------------------------------


def test_text_round_trip():
    d = validate_datum(3, III_STAR)
    assert format_datum(d) == "3:21210/00111"
    assert parse_datum("3:21210/00111") == d
    e = validate_datum(12, [[4, 6, 7, 7]])
    assert format_datum(e) == "12:4,6,7,7"
    assert parse_datum(format_datum(e)) == e


def test_json_round_trip():
    d = validate_datum(4, III_STARSTAR)
    text = json.dumps(d.to_json())
    assert parse_datum(text) == d
    assert datum_from_json(json.loads(text)) == d


@pytest.mark.parametrize("text", ["3", "x:111", "3:1a1", '{"N": 3}', "{bad"])
def test_parse_errors(text):
    with pytest.raises(BadShape):
        parse_datum(text)


@settings(max_examples=200, deadline=None)
@given(data(N_max=14, m_max=3, s_max=7))
def test_round_trip_property(d):
    assert parse_datum(format_datum(d)) == d
    assert parse_datum(json.dumps(d.to_json())) == d
