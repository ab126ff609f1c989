import pytest
from hypothesis import given
from hypothesis import strategies as st

from linrec import density as dn
from linrec.density import ReturnSet

subsets = st.sets(st.integers(1, 120), min_size=1).map(lambda s: ReturnSet.from_iterable(s, 120))


def test_window_examples():
    assert dn.upper_banach_window(ReturnSet(tuple(range(1, 11)), 10), 5) == 1.0
    threes = ReturnSet(tuple(range(3, 91, 3)), 90)
    assert dn.upper_banach_window(threes, 30) == pytest.approx(10 / 30)
    with pytest.raises(ValueError):
        dn.window_max_count(threes, 91)


def test_density_examples():
    full = ReturnSet(tuple(range(1, 101)), 100)
    assert dn.upper_density(full).value == dn.lower_density(full).value == 1.0
    threes = ReturnSet(tuple(range(3, 301, 3)), 300)
    assert dn.upper_density(threes).value == pytest.approx(1 / 3, abs=1 / 300)
    assert dn.lower_density(threes).value == pytest.approx(1 / 3, abs=1 / 300)


def test_log_blocks_oscillate():
    h = 2**12
    s = ReturnSet.from_iterable((n for n in range(1, h + 1) if (n.bit_length() - 1) % 2 == 0), h)
    assert dn.upper_density(s).value == pytest.approx(2 / 3, abs=0.05)
    assert dn.lower_density(s).value == pytest.approx(1 / 3, abs=0.05)


def test_max_gap_examples():
    assert dn.max_gap(ReturnSet(tuple(range(7, 99, 7)), 100)) == 7
    assert dn.max_gap(ReturnSet(tuple(range(1, 21)), 20)) == 1
    assert dn.max_gap(ReturnSet((1, 50), 100)) == 50
    with pytest.raises(ValueError):
        dn.max_gap(ReturnSet((), 10))


def test_longest_ap_examples():
    assert dn.longest_ap(ReturnSet((2, 4, 6, 8), 8)) == 4
    assert dn.longest_ap(ReturnSet((1,), 1)) == 1
    assert dn.longest_ap(ReturnSet((), 5)) == 0
    noisy = {7 * l for l in range(1, 9)} | {3, 11, 12, 40}
    assert dn.longest_ap(noisy) >= 8


def test_return_set_validation():
    with pytest.raises(ValueError):
        ReturnSet((3, 2), 5)
    with pytest.raises(ValueError):
        ReturnSet((0,), 5)
    with pytest.raises(ValueError):
        ReturnSet((6,), 5)
    s = ReturnSet.from_mask([False, True, True])
    assert s.times == (2, 3) and 3 in s and 1 not in s and s.count_upto(2) == 1


@given(subsets, st.integers(1, 120))
def test_window_scan_matches_all_windows(s, w):
    assert dn.window_max_count(s, w) == int(dn.window_counts(s, w).max())


@given(subsets)
def test_banach_dominates_density_at_same_window(s):
    for n in dn.density_grid(s.horizon):
        assert dn.upper_banach_window(s, n) >= s.count_upto(n) / n - 1e-12


@given(subsets)
def test_lower_le_upper(s):
    assert dn.lower_density(s).value <= dn.upper_density(s).value


def test_grid_and_huge_horizon():
    assert dn.density_grid(100) == [64, 96, 100]
    assert dn.density_grid(100, min_fraction=0.4) == [48, 64, 96, 100]
    big = 10**30
    s = ReturnSet((5, big // 2, big), big)
    assert dn.window_max_count(s, big // 2 + 1) == 2


def test_csv_roundtrip(tmp_path):
    s = ReturnSet((2, 4, 6, 8, 20), 20)
    p = dn.write_return_set_csv(tmp_path / "s.csv", s)
    back = dn.read_return_set_csv(p)
    assert back == s
    rep = dn.density_report(s)
    text = dn.write_density_csv(tmp_path / "d.csv", rep).read_text().splitlines()
    assert text[0] == "window,max_count,ratio"
    assert text[-1] == "longest_ap,,4"
    assert any(line.startswith("max_gap,,12") for line in text)


def test_csv_requires_n_column(tmp_path):
    (tmp_path / "bad.csv").write_text("t\n1\n")
    with pytest.raises(ValueError):
        dn.read_return_set_csv(tmp_path / "bad.csv")
