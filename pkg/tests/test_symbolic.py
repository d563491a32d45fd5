import itertools
import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from forcing_lab.errors import DomainError, GuardError, InputError
from forcing_lab.symbolic import (
    CycleWord,
    TransitionMatrix,
    count_periodic_points,
    entropy_by_charpoly,
    fibonacci_matrix,
    full_shift,
    is_admissible,
    minimal_period,
    orbit_count,
    periodic_words,
    topological_entropy,
)


def brute_force_periodic(A: TransitionMatrix, p: int) -> int:
    """Count words of length p whose cyclic closure is a walk in A."""
    return sum(
        all(A.entries[w[i]][w[(i + 1) % p]] > 0 for i in range(p))
        for w in itertools.product(range(A.q), repeat=p)
    )


def golden_by_bisection() -> float:
    lo, hi = 1.0, 2.0
    for _ in range(200):
        mid = (lo + hi) / 2
        if mid * mid - mid - 1 > 0:
            hi = mid
        else:
            lo = mid
    return lo


matrices = st.integers(1, 4).flatmap(
    lambda q: st.lists(st.lists(st.integers(0, 1), min_size=q, max_size=q), min_size=q, max_size=q)
).map(TransitionMatrix)


class TestAdmissibility:
    def test_graph_examples(self):
        A = fibonacci_matrix()
        assert is_admissible("011", A)
        assert not is_admissible("00", A)
        assert is_admissible("0", A) and is_admissible("1", A)

    def test_out_of_range_symbol(self):
        with pytest.raises(InputError):
            is_admissible("012", fibonacci_matrix())

    @given(matrices, st.data())
    def test_prefix_suffix_closure(self, A, data):
        w = data.draw(st.lists(st.sampled_from(A.labels), min_size=2, max_size=10))
        k = data.draw(st.integers(1, len(w) - 1))
        if is_admissible(w, A):
            assert is_admissible(w[:k], A) and is_admissible(w[k:], A)

    @given(matrices, st.data())
    def test_rotations_of_admissible_cycles(self, A, data):
        w = data.draw(st.lists(st.sampled_from(A.labels), min_size=1, max_size=8))
        if is_admissible(w, A, cyclic=True):
            for r in CycleWord(w).rotations():
                assert is_admissible(r, A, cyclic=True)


class TestCounting:
    @pytest.mark.parametrize("A,p,expected", [
        (fibonacci_matrix(), 3, 4),
        (full_shift(2), 2, 4),
        (fibonacci_matrix(), 1, 1),
    ])
    def test_examples(self, A, p, expected):
        assert count_periodic_points(A, p) == expected
        assert brute_force_periodic(A, p) == expected

    @given(matrices, st.integers(1, 8))
    def test_trace_equals_brute_force(self, A, p):
        assert count_periodic_points(A, p) == brute_force_periodic(A, p)

    def test_no_overflow(self):
        # 10^200 does not fit any machine integer
        assert count_periodic_points(full_shift(10), 200) == 10 ** 200

    def test_bad_period(self):
        with pytest.raises(InputError):
            count_periodic_points(full_shift(2), 0)


class TestEntropy:
    def test_fibonacci_against_bisection(self):
        ref = math.log(golden_by_bisection())
        assert abs(topological_entropy(fibonacci_matrix()) - ref) < 1e-12
        assert abs(entropy_by_charpoly(fibonacci_matrix()) - ref) < 1e-12
        assert round(ref, 7) == 0.4812118

    @pytest.mark.parametrize("q", [1, 2, 3, 5])
    def test_full_shift(self, q):
        assert topological_entropy(full_shift(q)) == pytest.approx(math.log(q), abs=1e-12)

    def test_permutation_and_identity(self):
        assert topological_entropy(TransitionMatrix([[1, 0], [0, 1]])) == 0.0
        assert topological_entropy(TransitionMatrix([[0, 1, 0], [0, 0, 1], [1, 0, 0]])) == 0.0

    def test_nilpotent_has_zero_entropy(self):
        assert topological_entropy(TransitionMatrix([[0, 1], [0, 0]])) == 0.0

    def test_zero_matrix(self):
        with pytest.raises(DomainError):
            topological_entropy(TransitionMatrix([[0, 0], [0, 0]]))

    @given(matrices)
    def test_two_methods_agree(self, A):
        if any(any(r) for r in A.entries):
            assert topological_entropy(A) == pytest.approx(entropy_by_charpoly(A), abs=1e-9)

    @given(matrices, st.data())
    def test_monotone_under_adding_edges(self, A, data):
        i, j = data.draw(st.integers(0, A.q - 1)), data.draw(st.integers(0, A.q - 1))
        rows = [list(r) for r in A.entries]
        rows[i][j] = 1
        B = TransitionMatrix(rows)
        hA = topological_entropy(A) if any(any(r) for r in A.entries) else 0.0
        assert hA >= 0.0
        assert topological_entropy(B) >= hA - 1e-12


class TestPeriodicWords:
    def test_fibonacci_examples(self):
        A = fibonacci_matrix()
        assert [str(w) for w in periodic_words(A, 2)] == ["01", "11"]
        assert [str(w) for w in periodic_words(A, 1)] == ["1"]

    def test_guard(self):
        with pytest.raises(GuardError, match="24"):
            periodic_words(full_shift(2), 25)

    def test_canonical_form(self):
        w = CycleWord("1101")
        assert w.symbols == (0, 1, 1, 1) and w.period == 4
        assert CycleWord("0101").period == 2 and not CycleWord("0101").is_primitive

    @given(matrices, st.integers(1, 9))
    def test_class_sizes_reproduce_trace(self, A, p):
        words = periodic_words(A, p)
        assert len({w.symbols for w in words}) == len(words)
        assert all(minimal_period(w.symbols) == w.period for w in words)
        assert orbit_count(words, p) == count_periodic_points(A, p)
