import pytest
from hypothesis import given
from hypothesis import strategies as st

from cube_om.core import (
    SignedSet,
    card,
    check_dimension,
    coord_mask,
    full_set,
    mask_coords,
    members,
    min_member,
    orthogonal,
    reorient,
    restrict,
    reverse,
    translate,
    vertex_coords,
    vertex_from_coords,
)
from cube_om.errors import CapExceededError, CubeError

from conftest import S, V


def test_vertex_encoding_roundtrip():
    for n in range(1, 6):
        for v in range(1 << n):
            assert vertex_from_coords(vertex_coords(v, n)) == v
    assert V(1, 1, 1) == 0
    assert vertex_coords(0b101, 3) == (-1, 1, -1)


def test_bad_coordinates():
    with pytest.raises(CubeError):
        vertex_from_coords((1, 0, -1))
    with pytest.raises(CubeError):
        vertex_coords(8, 3)


def test_reverse_examples():
    assert vertex_coords(reverse(V(1, 1, 1), coord_mask([1, 3]), 3), 3) == (-1, 1, -1)
    assert reverse(V(1, -1), 0, 2) == V(1, -1)
    with pytest.raises(CubeError):
        reverse(0, coord_mask([4]), 3)


def test_restrict_examples():
    assert restrict(V(1, -1, 1), coord_mask([2]), 3) == (0, -1, 0)
    assert restrict(V(1, 1), coord_mask([1, 2]), 2) == (1, 1)


def test_coord_mask():
    assert coord_mask([1, 3]) == 0b101
    assert mask_coords(0b101) == (1, 3)
    with pytest.raises(CubeError):
        coord_mask([0])
    with pytest.raises(CubeError):
        coord_mask([4], 3)


def test_dimension_cap():
    check_dimension(8)
    with pytest.raises(CapExceededError):
        check_dimension(9)
    with pytest.raises(CapExceededError):
        check_dimension(0)


def test_set_helpers():
    bits = S(1, 4, 6)
    assert members(bits) == [1, 4, 6]
    assert card(bits) == 3
    assert min_member(bits) == 1
    assert full_set(2) == 0b1111
    assert translate(S(0, 1), 0b10) == S(2, 3)
    with pytest.raises(CubeError):
        min_member(0)


def test_signed_set_rejects_overlap():
    with pytest.raises(CubeError):
        SignedSet(0b11, 0b10)


def test_reorient_examples():
    a, b = 0, 1
    X = SignedSet(S(a), S(b))
    assert reorient(X, S(a, b)) == SignedSet(S(b), S(a))
    assert reorient(X, 0) == X


def test_orthogonality_examples():
    # n=2 rectangle vs skew-facet cocircuit of x1 - x2 = 0
    X = SignedSet(S(V(1, 1), V(-1, -1)), S(V(-1, 1), V(1, -1)))
    Y = SignedSet(S(V(1, -1)), S(V(-1, 1)))
    assert orthogonal(X, Y)
    assert orthogonal(SignedSet(S(0), 0), SignedSet(S(1), 0))
    assert not orthogonal(SignedSet(S(0), 0), SignedSet(S(0), 0))


signed_sets = st.tuples(st.integers(0, 2**16 - 1), st.integers(0, 2**16 - 1)).map(
    lambda pq: SignedSet(pq[0] & ~pq[1], pq[1])
)


@given(signed_sets, st.integers(0, 2**16 - 1))
def test_reorient_is_involution(X, A):
    assert reorient(reorient(X, A), A) == X
    assert reorient(X, A).support == X.support


@given(signed_sets, signed_sets, st.integers(0, 2**16 - 1))
def test_orthogonality_invariant(X, Y, A):
    assert orthogonal(X, Y) == orthogonal(-X, Y) == orthogonal(Y, X)
    assert orthogonal(X, Y) == orthogonal(reorient(X, A), reorient(Y, A))


@given(signed_sets)
def test_canonical_representative(X):
    c = X.canonical()
    assert c in (X, -X)
    assert c == (-X).canonical()
    if X.support:
        assert c.sign(min_member(X.support)) == 1


@given(signed_sets)
def test_sign_and_purity(X):
    for v in range(16):
        s = X.sign(v)
        assert s == (1 if (X.positive >> v) & 1 else -1 if (X.negative >> v) & 1 else 0)
    assert X.is_pure() == (bool(X.support) and (not X.positive or not X.negative))
