"""Tree/forest algebra, extraction-contraction enumeration, parser."""

from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from roughrenorm.errors import ParseError
from roughrenorm.trees import (
    EMPTY_FOREST,
    FormalSum,
    Forest,
    INTEGRATION,
    LEAF,
    branch,
    forest_of,
    forest_product,
    format_forest,
    format_symbol,
    format_tree,
    in_symbol_family,
    noise,
    parse_symbol,
    subforest_extractions,
    tree_product,
)

XI1 = branch(noise(1))
XI2 = branch(noise(2))
I_BARE = branch(INTEGRATION)
IXI1 = branch(INTEGRATION, XI1)
IXI2 = branch(INTEGRATION, XI2)


def test_tree_product_commutative_associative():
    a = tree_product(XI1, IXI2)
    b = tree_product(IXI2, XI1)
    assert a == b
    assert tree_product(tree_product(XI1, I_BARE), IXI2) == tree_product(
        XI1, tree_product(I_BARE, IXI2)
    )


def test_forest_product_drops_unit_and_sorts():
    f = forest_product(forest_of(XI1), EMPTY_FOREST, forest_of(IXI2))
    g = forest_product(forest_of(IXI2), forest_of(XI1))
    assert f == g
    assert forest_of(LEAF) == EMPTY_FOREST


def test_symbol_family_membership():
    assert in_symbol_family(XI1)
    assert in_symbol_family(tree_product(XI1, IXI2, IXI2))
    assert in_symbol_family(tree_product(XI1, I_BARE))
    # two noises at the root
    assert not in_symbol_family(tree_product(XI1, XI2))
    # depth three
    deep = branch(INTEGRATION, branch(INTEGRATION, XI1))
    assert not in_symbol_family(deep)
    # noise with a child
    assert not in_symbol_family(branch(noise(1), XI2))


# ---------------------------------------------------------------------------
# extraction/contraction vs an independent brute-force enumeration
#
# A family tree is described as a list of branches (et, sub) where sub is
# None or an edge type.  Every subset of edges is enumerated directly:
# the chosen edges are lifted out as a forest and contracted out of the
# remainder.


def _brute_force(branches):
    states = []
    for et, sub in branches:
        opts = [("skip", et, sub)]
        opts.append(("root", et, sub))
        if sub is not None:
            opts.append(("sub", et, sub))
            opts.append(("both", et, sub))
        states.append(opts)

    import itertools

    counts = {}
    for combo in itertools.product(*states):
        root_part = []
        detached = []
        rem = []
        for state, et, sub in combo:
            subtree = branch(sub) if sub is not None else LEAF
            if state == "skip":
                rem.append(branch(et, subtree))
            elif state == "root":
                root_part.append(branch(et))
                if sub is not None:
                    rem.append(branch(sub))
            elif state == "both":
                root_part.append(branch(et, subtree))
            elif state == "sub":
                detached.append(branch(sub))
                rem.append(branch(et))
        pieces = list(detached)
        if root_part:
            pieces.append(tree_product(*root_part))
        forest = Forest(tuple(pieces))
        remainder = tree_product(*rem) if rem else LEAF
        key = (forest, remainder)
        counts[key] = counts.get(key, 0) + 1
    return counts


CASES = [
    [(noise(1), None)],
    [(INTEGRATION, noise(1))],
    [(noise(1), None), (INTEGRATION, noise(1))],
    [(noise(1), None), (INTEGRATION, noise(2)), (INTEGRATION, noise(2))],
    [(noise(1), None), (INTEGRATION, None), (INTEGRATION, noise(2))],
    [(INTEGRATION, noise(1))] * 3,
    [(noise(2), None), (INTEGRATION, None), (INTEGRATION, noise(1))],
]


@pytest.mark.parametrize("branches", CASES)
def test_extractions_match_brute_force(branches):
    tree = tree_product(*[branch(et, branch(s) if s else LEAF) for et, s in branches])
    got = {(f, r): m for f, r, m in subforest_extractions(tree)}
    assert got == _brute_force(branches)


@pytest.mark.parametrize("branches", CASES)
def test_extraction_multiplicities_sum_to_power_of_two(branches):
    tree = tree_product(*[branch(et, branch(s) if s else LEAF) for et, s in branches])
    total = sum(m for _, _, m in subforest_extractions(tree))
    assert total == 2**tree.num_edges


# ---------------------------------------------------------------------------
# formal sums


def test_formal_sum_arithmetic():
    x = FormalSum.lift(forest_of(XI1), Fraction(1, 2))
    y = FormalSum.lift(forest_of(XI1), Fraction(1, 2))
    z = x + y - FormalSum.lift(forest_of(XI1))
    assert z.is_zero
    assert x.scale(0).is_zero


# ---------------------------------------------------------------------------
# parser / printer


@pytest.mark.parametrize(
    "text",
    [
        "1",
        "Xi_1",
        "I(Xi_2)",
        "Xi_1*I(Xi_2)^3",
        "I^2",
        "Xi_2*I",
        "Xi_1 . Xi_1",
        "2*Xi_1 - 1/3*I(Xi_1)*Xi_2",
        "Xi_1*I(Xi_1) + I(Xi_2)^2",
    ],
)
def test_parse_format_round_trip(text):
    x = parse_symbol(text, d=2)
    assert parse_symbol(format_symbol(x), d=2) == x


def test_parser_rejects_double_root_noise():
    with pytest.raises(ParseError):
        parse_symbol("Xi_1^2", d=2)
    with pytest.raises(ParseError):
        parse_symbol("Xi_1*Xi_2", d=2)


def test_parser_rejects_bad_index():
    with pytest.raises(ParseError):
        parse_symbol("Xi_3", d=2)
    with pytest.raises(ParseError):
        parse_symbol("Xi_0", d=2)


def test_parser_error_has_position():
    with pytest.raises(ParseError) as err:
        parse_symbol("Xi_1 + @", d=2)
    assert "position" in str(err.value)


@st.composite
def family_trees(draw):
    root_noise = draw(st.sampled_from([None, 1, 2]))
    n_bare = draw(st.integers(0, 2))
    n_i1 = draw(st.integers(0, 3))
    n_i2 = draw(st.integers(0, 3))
    parts = []
    if root_noise:
        parts.append(branch(noise(root_noise)))
    parts += [I_BARE] * n_bare + [IXI1] * n_i1 + [IXI2] * n_i2
    if not parts:
        return LEAF
    return tree_product(*parts)


@given(st.lists(family_trees(), min_size=1, max_size=3))
@settings(max_examples=60, deadline=None)
def test_random_forest_round_trip(trees):
    f = Forest(tuple(t for t in trees if t.children))
    text = format_forest(f)
    parsed = parse_symbol(text, d=2)
    assert parsed == FormalSum.lift(f)


@given(family_trees())
@settings(max_examples=40, deadline=None)
def test_random_tree_multiplicity_sum(tree):
    total = sum(m for _, _, m in subforest_extractions(tree))
    assert total == 2**tree.num_edges
