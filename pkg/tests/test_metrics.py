import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from pea.errors import DataError, DimensionError
from pea.metrics import ari, cer, evaluate, nmi
from oracles import ari_pairs, cer_pairs, nmi_entropy, set_partitions


def test_ari_examples():
    assert ari([0, 1, 2, 0], [0, 1, 2, 0]) == 1.0
    assert ari([0, 0, 1, 1], [1, 1, 0, 0]) == 1.0
    assert ari([0, 0, 1, 1], [0, 1, 0, 1]) == pytest.approx(-0.5, abs=1e-15)


def test_nmi_examples():
    assert nmi([0, 0, 1, 1], [0, 0, 1, 1]) == pytest.approx(1.0, abs=1e-15)
    assert nmi([0, 0, 1, 1], [0, 1, 0, 1]) == pytest.approx(0.0, abs=1e-15)
    assert nmi([0, 0, 0], [0, 0, 0]) == 1.0
    assert nmi([0, 0, 0], [0, 1, 0]) == 0.0


def test_cer_examples():
    assert cer([0, 1, 1, 2], [0, 1, 1, 2]) == 0.0
    assert cer([0, 0, 1, 1], [1, 1, 0, 0]) == 0.0
    assert cer([0, 0, 1, 1], [0, 1, 0, 1]) == pytest.approx(2 / 3, abs=1e-15)


def test_string_labels():
    assert ari(["a", "a", "b"], [2, 2, 7]) == 1.0


def test_errors():
    with pytest.raises(DimensionError):
        ari([0, 1], [0, 1, 1])
    with pytest.raises(DimensionError):
        nmi([0], [0, 1])
    with pytest.raises(DataError):
        ari([0], [0])
    with pytest.raises(DataError):
        cer([1], [1])


def test_set_partition_counts():
    # Stirling numbers: S(4,1)+S(4,2)+S(4,3) = 1+7+6
    assert len(set_partitions(4, 3)) == 14
    assert len(set_partitions(6, 3)) == 1 + 31 + 90


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_exhaustive_against_oracles(n):
    parts = set_partitions(n, 3)
    for a in parts:
        for b in parts:
            assert abs(ari(a, b) - ari_pairs(a, b)) <= 1e-12
            assert abs(cer(a, b) - cer_pairs(a, b)) <= 1e-12
            assert abs(nmi(a, b) - nmi_entropy(a, b)) <= 1e-12


labelings = st.integers(2, 30).flatmap(
    lambda n: st.tuples(st.lists(st.integers(0, 4), min_size=n, max_size=n),
                        st.lists(st.integers(0, 4), min_size=n, max_size=n)))


@settings(max_examples=200, deadline=None)
@given(labelings, st.permutations(range(5)), st.permutations(range(5)))
def test_relabeling_and_symmetry(ab, pa, pb):
    a, b = np.array(ab[0]), np.array(ab[1])
    ra, rb = np.array(pa)[a], np.array(pb)[b]
    m = evaluate(a, b)
    for f, v in (("nmi", m.nmi), ("ari", m.ari), ("cer", m.cer)):
        fn = {"nmi": nmi, "ari": ari, "cer": cer}[f]
        assert fn(ra, rb) == pytest.approx(v, abs=1e-12)
        assert fn(b, a) == pytest.approx(v, abs=1e-12)
    assert 0.0 <= m.nmi <= 1.0
    assert 0.0 <= m.cer <= 1.0
    assert m.ari <= 1.0 + 1e-12
    assert (abs(m.ari - 1.0) < 1e-12) == (m.cer == 0.0)


def test_sklearn_agreement():
    sk = pytest.importorskip("sklearn.metrics")
    rng = np.random.default_rng(0)
    for _ in range(20):
        a, b = rng.integers(0, 4, 50), rng.integers(0, 3, 50)
        assert ari(a, b) == pytest.approx(sk.adjusted_rand_score(a, b), abs=1e-12)
        assert nmi(a, b) == pytest.approx(
            sk.normalized_mutual_info_score(a, b, average_method="geometric"), abs=1e-12)


def test_sparse_integer_labels():
    a, b = [0, 0, 10**9, 10**9], [-3, -3, 7, 8]
    assert ari(a, b) == ari([0, 0, 1, 1], [0, 0, 1, 2])
    assert nmi(a, b) == nmi([0, 0, 1, 1], [0, 0, 1, 2])
    assert cer(a, b) == cer([0, 0, 1, 1], [0, 0, 1, 2])
