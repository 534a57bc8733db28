"""Degree grading, named specs, projections, basis enumeration."""

from fractions import Fraction

import pytest

from roughrenorm.errors import ConfigError, DomainError
from roughrenorm.structure import (
    StructureSpec,
    enumerate_basis,
    generic_spec,
    positive_basis,
    project_minus,
    project_plus,
    required_power,
    rough_vol_spec,
    tree_survives_plus,
)
from roughrenorm.trees import (
    EMPTY_FOREST,
    Forest,
    FormalSum,
    INTEGRATION,
    LEAF,
    branch,
    forest_of,
    noise,
    parse_symbol,
    tree_product,
)

XI1 = branch(noise(1))
XI2 = branch(noise(2))
I_BARE = branch(INTEGRATION)
IXI2 = branch(INTEGRATION, XI2)


def test_degrees_are_exact_fractions():
    spec = rough_vol_spec(Fraction(2, 5), Fraction(1, 100))
    assert spec.alpha == (Fraction(49, 100), Fraction(39, 100))
    assert spec.degree_tree(XI1) == Fraction(-51, 100)
    assert spec.degree_tree(IXI2) == Fraction(39, 100)
    assert spec.degree_tree(I_BARE) == 1
    assert spec.degree_tree(tree_product(XI1, IXI2)) == Fraction(-12, 100)
    assert spec.degree_tree(LEAF) == 0


def test_degree_additive_over_forests():
    spec = generic_spec(2, 4)
    f = Forest((XI1, IXI2))
    assert spec.degree(f) == spec.degree_tree(XI1) + spec.degree_tree(IXI2)
    assert spec.degree(EMPTY_FOREST) == 0


def test_required_power_values():
    assert required_power(Fraction(2, 5), Fraction(1, 100)) == 1
    assert required_power(Fraction(1, 10), Fraction(1, 100)) == 5


def test_rough_vol_spec_default_truncation():
    assert rough_vol_spec(Fraction(2, 5), Fraction(1, 100)).truncation == 1
    assert rough_vol_spec(Fraction(1, 10), Fraction(1, 100)).truncation == 5


def test_rough_vol_spec_validation():
    with pytest.raises(ConfigError):
        rough_vol_spec(Fraction(3, 5), Fraction(1, 100))
    with pytest.raises(ConfigError):
        rough_vol_spec(Fraction(1, 4), Fraction(1, 4))
    with pytest.raises(ConfigError):
        rough_vol_spec(Fraction(1, 4), Fraction(0))


def test_spec_text_round_trip():
    spec = rough_vol_spec(Fraction(3, 10), Fraction(1, 100))
    assert StructureSpec.from_text(spec.to_text()) == spec


def test_project_minus_keeps_all_negative_components():
    spec = rough_vol_spec(Fraction(3, 10), Fraction(1, 100))
    x = parse_symbol("Xi_1 . Xi_2 + I(Xi_2)", d=2)
    out = project_minus(x, spec)
    assert out == parse_symbol("Xi_1 . Xi_2", d=2)
    assert project_minus(FormalSum.lift(EMPTY_FOREST), spec) == FormalSum.lift(
        EMPTY_FOREST
    )


def test_project_plus_kills_root_noise_factors():
    spec = rough_vol_spec(Fraction(3, 10), Fraction(1, 100))
    assert not tree_survives_plus(tree_product(XI1, IXI2), spec)
    assert tree_survives_plus(IXI2, spec)
    assert tree_survives_plus(I_BARE, spec)
    assert tree_survives_plus(LEAF, spec)


def test_project_plus_rejects_proper_forests():
    spec = generic_spec(2, 2)
    with pytest.raises(DomainError):
        project_plus(FormalSum.lift(Forest((XI1, XI2))), spec)


def test_positive_basis_contents():
    spec = generic_spec(2, 2)
    names = {t.key for t in positive_basis(spec)}
    expected = set()
    for text in ["1", "I", "I^2", "I(Xi_1)", "I(Xi_1)^2", "I(Xi_2)", "I(Xi_2)^2"]:
        ((f, _),) = list(parse_symbol(text, d=2))
        expected.add(f.trees[0].key if f.trees else LEAF.key)
    assert names == expected


def test_enumerate_basis_count():
    # 1 + d noises + per power n: I^n, d*Xi*I^n, d*I(Xi)^n, d^2*Xi*I(Xi)^n
    spec = generic_spec(2, 3)
    n, d = 3, 2
    assert len(enumerate_basis(spec)) == 1 + d + n * (1 + d + d + d * d)


def test_generic_spec_degrees_negative():
    spec = generic_spec(3, 6)
    for tree in enumerate_basis(spec):
        if any(et.kind == "Xi" for et, _ in tree.children):
            if all(et.kind != "I" or sub.children for et, sub in tree.children):
                assert spec.degree_tree(tree) < 0
