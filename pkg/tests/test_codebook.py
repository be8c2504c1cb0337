import numpy as np
import pytest

from risid import (
    ArpCode,
    CapacityError,
    build_codebook,
    cyclic_ambiguity_classes,
    generate_hadamard,
    max_cyclic_crosscorr,
)
from risid.codebook import assign_codes


def brute_max_cyclic_corr(a, b):
    """Independent oracle: plain double loop over shifts and positions."""
    m = len(a)
    best = 0
    for s in range(m):
        acc = sum(a[i] * b[(i + s) % m] for i in range(m))
        best = max(best, abs(acc))
    return best / m


def test_hadamard_base_cases():
    assert generate_hadamard(1).tolist() == [[1]]
    assert generate_hadamard(2).tolist() == [[1, 1], [1, -1]]


def test_hadamard_order4_row3_by_hand_recursion():
    # H4 = [[H2, H2], [H2, -H2]]; its last row is [1, -1, -1, 1]
    assert generate_hadamard(4)[3].tolist() == [1, -1, -1, 1]


@pytest.mark.parametrize("order", [1, 2, 4, 8, 16, 32, 64, 128, 256])
def test_hadamard_orthogonality_exact(order):
    h = generate_hadamard(order)
    assert h[0].tolist() == [1] * order
    assert np.array_equal(h @ h.T, order * np.eye(order, dtype=np.int64))


@pytest.mark.parametrize("bad", [0, -4, 3, 6, 12, 100])
def test_hadamard_rejects_non_powers_of_two(bad):
    with pytest.raises(ValueError):
        generate_hadamard(bad)


def test_max_cyclic_crosscorr_identity():
    assert max_cyclic_crosscorr([1, -1, 1, -1], [1, -1, 1, -1]) == 1.0


def test_max_cyclic_crosscorr_shifted_pair():
    # shifting the second vector by one position yields the first
    assert max_cyclic_crosscorr([1, 1, -1, -1], [1, -1, -1, 1]) == 1.0


def test_max_cyclic_crosscorr_orthogonal_classes():
    assert max_cyclic_crosscorr([1, -1, 1, -1], [1, 1, -1, -1]) == 0.0


def test_max_cyclic_crosscorr_length_mismatch():
    with pytest.raises(ValueError):
        max_cyclic_crosscorr([1, -1], [1, -1, 1, -1])


def test_max_cyclic_crosscorr_matches_bruteforce_and_bounds():
    rng = np.random.default_rng(7)
    for _ in range(50):
        m = int(rng.choice([4, 8, 16]))
        a = rng.choice([-1, 1], size=m)
        b = rng.choice([-1, 1], size=m)
        got = max_cyclic_crosscorr(a, b)
        assert got == brute_max_cyclic_corr(a.tolist(), b.tolist())
        assert 0.0 <= got <= 1.0


def test_ambiguity_classes_hadamard4():
    h = generate_hadamard(4)
    classes = cyclic_ambiguity_classes([h[1], h[2], h[3]])
    # indices are positions in the input list (rows 1..3): row 3 is a shift of row 2
    assert classes == [[0], [1, 2]]


def test_ambiguity_classes_singleton_and_duplicates():
    assert cyclic_ambiguity_classes([np.array([1, -1, 1, -1])]) == [[0]]
    row = np.array([1, 1, -1, -1])
    assert cyclic_ambiguity_classes([row, row]) == [[0, 1]]


def test_ambiguity_classes_detect_negation():
    a = np.array([1, 1, -1, -1])
    assert cyclic_ambiguity_classes([a, -a]) == [[0, 1]]


def test_ambiguity_classes_partition_random_rows():
    rng = np.random.default_rng(11)
    rows = [rng.choice([-1, 1], size=8) for _ in range(20)]
    classes = cyclic_ambiguity_classes(rows)
    flat = sorted(i for cls in classes for i in cls)
    assert flat == list(range(20))


def test_build_codebook_m4():
    rep = build_codebook(4, 2)
    assert [c.ris_id for c in rep.codes] == [1, 2]
    h = generate_hadamard(4)
    assert rep.codes[0].symbols.tolist() == h[1].tolist()
    assert rep.codes[1].symbols.tolist() == h[2].tolist()
    assert rep.ambiguity_classes == [[1], [2, 3]]
    assert rep.max_pairwise_cyclic_corr == brute_max_cyclic_corr(
        h[1].tolist(), h[2].tolist()
    )


def test_build_codebook_capacity_exceeded():
    with pytest.raises(CapacityError, match="2 cyclic-equivalence classes"):
        build_codebook(4, 3)


def test_build_codebook_m16_l2():
    rep = build_codebook(16, 2)
    for code in rep.codes:
        assert code.length == 16
        assert int(code.symbols.sum()) == 0
        assert set(code.symbols.tolist()) == {-1, 1}


def test_assigned_codes_never_cyclically_equivalent():
    for m in (4, 8, 16):
        rep = build_codebook(m, 2)
        a, b = rep.codes[0].symbols, rep.codes[1].symbols
        for sign in (1, -1):
            for s in range(m):
                assert not np.array_equal(a, sign * np.roll(b, s))


def test_assign_codes_override_and_default_mix():
    codes = assign_codes(8, [None, 3, None])
    assert codes[1].symbols.tolist() == generate_hadamard(8)[3].tolist()
    assert [c.ris_id for c in codes] == [1, 2, 3]
    # defaults must avoid the class that row 3 occupies
    cls_of = lambda code: tuple(
        min(
            tuple(np.roll(sgn * code.symbols.astype(np.int64), s))
            for sgn in (1, -1)
            for s in range(8)
        )
    )
    assert len({cls_of(c) for c in codes}) == 3


def test_assign_codes_bad_row():
    with pytest.raises(ValueError):
        assign_codes(8, [0])
    with pytest.raises(ValueError):
        assign_codes(8, [8])


def test_arpcode_validation():
    with pytest.raises(ValueError):
        ArpCode(ris_id=0, symbols=np.array([1, -1]))
    with pytest.raises(ValueError):
        ArpCode(ris_id=1, symbols=np.array([1, -1, 1]))  # not a power of two
    with pytest.raises(ValueError):
        ArpCode(ris_id=1, symbols=np.array([1, 1, 1, -1]))  # not zero mean
    with pytest.raises(ValueError):
        ArpCode(ris_id=1, symbols=np.array([2, -2, 2, -2]))  # not +-1
