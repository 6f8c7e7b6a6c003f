import numpy as np
import pytest

from harmclose import (
    ConstraintError,
    ConvexNullSeq,
    construct_cumulative,
    construct_primitive,
    from_family,
    validate_convex_null,
)
from harmclose.criteria import check_weighted_difference


def test_named_sequences():
    assert ConvexNullSeq.harmonic()[3] == 0.5
    assert ConvexNullSeq.named("geometric")[4] == 0.125
    with pytest.raises(ValueError):
        ConvexNullSeq.named("fibonacci")
    with pytest.raises(ValueError):
        ConvexNullSeq(lambda n: 0.0, 10, "vibes")


def test_violation_kinds():
    assert validate_convex_null(ConvexNullSeq.from_list([2, -1])).first_violation == (1, "negative")
    assert validate_convex_null(ConvexNullSeq.from_list([2, 1, 1.5])).first_violation == (1, "increasing")
    assert validate_convex_null(ConvexNullSeq.from_list([2, 1, 0.9, 0])).first_violation == (1, "nonconvex")


def test_limit_is_heuristic_without_certificate():
    rep = validate_convex_null(ConvexNullSeq(lambda n: 2.0 / (n + 1) ** 0.5, 100))
    assert rep.valid and not rep.limit_certified
    assert "heuristic" in rep.limit_status
    assert validate_convex_null(ConvexNullSeq.harmonic()).limit_certified
    # a constant sequence passes the finite checks; only the limit flag tells
    flat = validate_convex_null(ConvexNullSeq(lambda n: 2.0, 50))
    assert flat.valid and flat.tail_value == 2.0 and not flat.limit_certified


def test_constructors_match_families():
    for seq in ("harmonic", "geometric"):
        built = construct_primitive(ConvexNullSeq.named(seq), 0.25, 32)
        fam = from_family("primitive", 32, seq=seq, b=0.25)
        np.testing.assert_allclose(built.h.coeffs, fam.h.coeffs, rtol=1e-15)
        np.testing.assert_allclose(built.g.coeffs, fam.g.coeffs, rtol=1e-15)
        built = construct_cumulative(ConvexNullSeq.named(seq), 0.25, 32)
        fam = from_family("cumulative", 32, seq=seq, b=0.25)
        np.testing.assert_allclose(built.h.coeffs, fam.h.coeffs, rtol=1e-14)


def test_constructor_preconditions():
    with pytest.raises(ConstraintError):
        construct_primitive(ConvexNullSeq.harmonic(), 1.0)
    with pytest.raises(ConstraintError):
        construct_primitive(ConvexNullSeq.from_list([1, 0.5, 0]), 0.1)
    with pytest.raises(ConstraintError):
        construct_cumulative(ConvexNullSeq.from_list([2, 1, 0.9, 0]), 0.1)


def test_custom_sequence_gets_unknown_tail():
    f = construct_primitive(ConvexNullSeq.from_list([2, 1, 0.5, 0.25, 0.1, 0]), 0.5j, 16)
    assert f.params == {"seq": "custom", "b": 0.5j}
    assert f.h[40] == 0
    assert check_weighted_difference(f.h).tail_bound is None
