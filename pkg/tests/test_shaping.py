import math

import pytest
from pydantic import ValidationError

from app.entropy import composition_of, h0
from app.enumerative import global_rank, global_unrank
from app.errors import InvalidLengthError, NotACodewordError
from app.schemas import DeltaReport, ShapingParams
from app.shaping import is_member, shape, shaped_set_stats, unshape
from app.typeclass import get_class_table

from .helpers import all_sequences, letters, seq


def test_params_derived_values():
    params = ShapingParams(h=3, N=4, K=2)
    assert params.N2 == 6
    assert params.shaped_size == 81


@pytest.mark.parametrize("kwargs", [{"h": 1, "N": 2, "K": 1}, {"h": 2, "N": 0, "K": 1}, {"h": 2, "N": 2, "K": -1}])
def test_params_validation(kwargs):
    with pytest.raises(ValidationError):
        ShapingParams(**kwargs)


@pytest.mark.parametrize(
    "h, N, K, x, y",
    [(3, 1, 1, "a", "aa"), (2, 2, 1, "ab", "aab"), (2, 2, 1, "ba", "aba")],
)
def test_shape_examples(make_ctx, h, N, K, x, y):
    assert letters(shape(seq(x), make_ctx(h, N, K))) == y


def test_unshape_examples(make_ctx):
    assert letters(unshape(seq("cc"), make_ctx(3, 1, 1))) == "c"
    assert letters(unshape(seq("aba"), make_ctx(2, 2, 1))) == "ba"


def test_unshape_flags_non_codeword(make_ctx):
    with pytest.raises(NotACodewordError) as err:
        unshape(seq("baa"), make_ctx(2, 2, 1))
    assert err.value.rank == 4
    assert err.value.shaped_size == 4


def test_is_member_examples(make_ctx):
    ctx = make_ctx(3, 1, 1)
    assert is_member(seq("ab"), ctx) is False
    assert is_member(seq("bb"), ctx) is True


def test_zero_shaping_order_is_identity(make_ctx):
    ctx = make_ctx(3, 3, 0)
    for x in all_sequences(3, 3):
        assert is_member(x, ctx)
        assert shape(x, ctx) == x


def test_length_checks(make_ctx):
    ctx = make_ctx(2, 2, 1)
    with pytest.raises(InvalidLengthError):
        shape(seq("aab"), ctx)
    with pytest.raises(InvalidLengthError):
        is_member(seq("ab"), ctx)


@pytest.mark.slow
@pytest.mark.parametrize("h", [2, 3])
@pytest.mark.parametrize("K", [1, 2])
def test_bijection_exhaustive(make_ctx, h, K):
    for N in range(1, 8):
        ctx = make_ctx(h, N, K)
        for x in all_sequences(h, N):
            y = shape(x, ctx)
            assert len(y) == N + K
            assert unshape(y, ctx) == x


@pytest.mark.slow
def test_image_equals_membership(make_ctx):
    for N in range(1, 6):
        ctx = make_ctx(3, N, 1)
        image = {shape(x, ctx) for x in all_sequences(3, N)}
        members = {y for y in all_sequences(3, N + 1) if is_member(y, ctx)}
        assert image == members
        assert len(image) == 3 ** N


@pytest.mark.slow
def test_members_have_minimal_entropy(make_ctx):
    for N in range(1, 6):
        ctx = make_ctx(3, N, 1)
        table = ctx.table_N2
        member_classes, other_classes = set(), set()
        member_info, other_info = [], []
        for y in all_sequences(3, N + 1):
            comp = composition_of(y, 3)
            index = table.class_index_of(comp)
            info = (N + 1) * h0(comp)
            if is_member(y, ctx):
                member_classes.add(index)
                member_info.append(info)
            else:
                other_classes.add(index)
                other_info.append(info)
        assert max(member_classes) <= min(other_classes)
        assert max(member_info) <= min(other_info) + 1e-12


def test_shape_preserves_rank_order(make_ctx):
    ctx = make_ctx(3, 4, 1)
    shaped = [shape(global_unrank(r, ctx.table_N), ctx) for r in range(3 ** 4)]
    assert [global_rank(y, ctx.table_N2) for y in shaped] == list(range(3 ** 4))


def test_large_source_length(make_ctx):
    ctx = make_ctx(3, 64, 1)
    x = tuple((i * 7 + i // 5) % 3 for i in range(64))
    y = shape(x, ctx)
    assert len(y) == 65
    assert is_member(y, ctx)
    assert unshape(y, ctx) == x


@pytest.mark.parametrize(
    "h, N, K, avg_x, avg_y, delta",
    [
        (3, 1, 1, 0.0, 0.0, 0.0),
        (3, 2, 1, 1.333333, 1.836592, -0.503259),
        (2, 2, 1, 1.0, 1.377444, -0.377444),
    ],
)
def test_shaped_set_stats_examples(h, N, K, avg_x, avg_y, delta):
    report = shaped_set_stats(ShapingParams(h=h, N=N, K=K))
    assert report.avg_NH0_X == pytest.approx(avg_x, abs=1e-6)
    assert report.avg_N2H0_Y == pytest.approx(avg_y, abs=1e-6)
    assert report.delta == pytest.approx(delta, abs=1e-6)


def _brute_force_averages(h, N, K):
    sources = list(all_sequences(h, N))
    avg_x = sum(N * h0(composition_of(x, h)) for x in sources) / len(sources)
    table = get_class_table(h, N + K)
    shaped = [global_unrank(r, table) for r in range(h ** N)]
    avg_y = sum((N + K) * h0(composition_of(y, h)) for y in shaped) / len(shaped)
    return avg_x, avg_y


@pytest.mark.slow
@pytest.mark.parametrize("h", [2, 3])
def test_shaped_set_stats_match_enumeration(h):
    for N in range(1, 9):
        for K in range(0, 3):
            avg_x, avg_y = _brute_force_averages(h, N, K)
            report = shaped_set_stats(ShapingParams(h=h, N=N, K=K))
            assert report.avg_NH0_X == pytest.approx(avg_x, abs=1e-9)
            assert report.avg_N2H0_Y == pytest.approx(avg_y, abs=1e-9)
            assert 0 <= report.avg_NH0_X <= N * math.log2(h) + 1e-12


def test_delta_report_csv_row():
    report = DeltaReport(h=3, N=2, K=1, avg_NH0_X=4 / 3, avg_N2H0_Y=1.8365916681, delta=-0.5032583348)
    assert report.csv_row() == ["3", "2", "1", "1.333333333", "1.836591668", "-0.503258335", "-"]
    assert DeltaReport(h=3, N=1, K=1, avg_NH0_X=0.0, avg_N2H0_Y=0.0, delta=-0.0).sign == "0"
    assert DeltaReport(h=4, N=90, K=1, error="budget").csv_row() == ["4", "90", "1", "", "", "", "error:budget"]
