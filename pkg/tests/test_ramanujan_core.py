import numpy as np
import pytest

from ramverify.errors import CorruptCache, InvalidInput, OutOfRange
from ramverify.ramanujan_core import (
    RamanujanTable, build_table, check_invariants, format_table, load_table, rho, rho_many,
    save_table,
)

from oracles import brute_ramanujan, count_in_half_interval, is_prime_td


@pytest.mark.parametrize("x,expected", [(2, 1), (10, 1), (11, 2)])
def test_rho_examples(small_sieve, x, expected):
    assert rho(small_sieve, x) == expected


def test_rho_matches_direct_count(small_sieve):
    for x in range(2, 3000):
        assert rho(small_sieve, x) == count_in_half_interval(x)


def test_rho_errors(small_sieve):
    with pytest.raises(InvalidInput):
        rho(small_sieve, 1)
    with pytest.raises(OutOfRange):
        rho(small_sieve, 10**5 + 1)


@pytest.mark.parametrize("n_max,n,r,s", [(1, 1, 2, 1), (2, 2, 11, 5), (10, 10, 97, 25)])
def test_build_table_examples(n_max, n, r, s):
    tab = build_table(n_max)
    assert tab.ramanujan(n) == r
    assert tab.index_s(n) == s


def test_accessors(table_100):
    assert table_100.ramanujan(1) == 2
    assert table_100.ramanujan(3) == 17
    assert table_100.index_s(2) == 5
    assert table_100.index_s(1) == 1
    assert table_100.index_s(3) == 7
    with pytest.raises(OutOfRange):
        table_100.ramanujan(0)
    with pytest.raises(OutOfRange):
        table_100.index_s(101)


def test_definition_oracle(table_100):
    expected = [brute_ramanujan(n) for n in range(1, 51)]
    assert table_100.r[:50].tolist() == expected


def test_table_invariants(table_100):
    t = table_100.primes
    for n in range(1, 101):
        r, s = table_100.ramanujan(n), table_100.index_s(n)
        assert is_prime_td(r)
        # (R_n/2, R_n] holds exactly n primes, recounted with two pi calls
        assert t.prime_count(r) - t.prime_count(r // 2) == n
        assert rho(t, r - 1) == n - 1 if r > 2 else True
        assert t.prime_count(r) == s
        if s > n:
            assert 2 * t.nth_prime(s - n) < r
    assert np.all(np.diff(table_100.r) > 0) and np.all(np.diff(table_100.s) > 0)
    assert rho(t, table_100.scan_bound) >= table_100.n_max
    assert check_invariants(table_100, t) == []


def test_rho_steps_bounded(table_100):
    xs = np.arange(2, table_100.scan_bound + 1)
    assert np.abs(np.diff(rho_many(table_100.primes, xs))).max() <= 1


def test_scan_bound_is_p_4n(table_100):
    assert table_100.scan_bound == table_100.primes.nth_prime(400)


def test_reuses_supplied_sieve(small_sieve):
    tab = build_table(50, primes=small_sieve)
    assert tab.primes is small_sieve
    assert tab == build_table(50)


def test_check_invariants_flags_corruption(table_100):
    bad = RamanujanTable(100, table_100.r.copy(), table_100.s.copy(), table_100.scan_bound)
    bad.r[49] -= 1
    assert check_invariants(bad, table_100.primes) == [50]


def test_round_trip(tmp_path, table_100):
    tab = build_table(10)
    path = tmp_path / "t.csv"
    save_table(tab, path)
    assert load_table(path) == tab
    big = tmp_path / "big.csv"
    save_table(table_100, big)
    assert load_table(big) == table_100


def test_file_format(tmp_path):
    tab = build_table(3)
    text = format_table(tab)
    assert text == f"# ramanujan-table v1 n_max=3 scan_bound={tab.scan_bound}\nn,r,s\n1,2,1\n2,11,5\n3,17,7\n"
    save_table(tab, tmp_path / "t.csv")
    assert (tmp_path / "t.csv").read_bytes() == text.encode()


def _write(tmp_path, text):
    p = tmp_path / "bad.csv"
    p.write_text(text)
    return p


@pytest.mark.parametrize("text", [
    "# ramanujan-table v1 n_max=10 scan_bound=173\nn,r,s\n" + "".join(
        f"{n},{r},{s}\n" for n, r, s in zip(range(1, 10), [2, 11, 17, 29, 41, 47, 59, 67, 71],
                                            [1, 5, 7, 10, 13, 15, 17, 19, 20])),
    "# ramanujan-table v1 n_max=3 scan_bound=50\nn,r,s\n1,2,1\n2,17,7\n3,11,5\n",
    "# ramanujan-table v2 n_max=1 scan_bound=7\nn,r,s\n1,2,1\n",
    "# ramanujan-table v1 n_max=x scan_bound=7\nn,r,s\n1,2,1\n",
    "# ramanujan-table v1 n_max=1 scan_bound=7\nn;r;s\n1,2,1\n",
    "# ramanujan-table v1 n_max=2 scan_bound=70\nn,r,s\n1,2,1\n2,11\n",
    "# ramanujan-table v1 n_max=1 scan_bound=7\nn,r,s\n1,two,1\n",
    "# ramanujan-table v1 n_max=1 scan_bound=7\n",
])
def test_corrupt_cache(tmp_path, text):
    with pytest.raises(CorruptCache):
        load_table(_write(tmp_path, text))


def test_invalid_n_max():
    with pytest.raises(InvalidInput):
        build_table(0)
