"""Window searches, same-code regions, convergence, atlas persistence."""

from fractions import Fraction

import pytest

from obc.atlas import (
    SearchWindow,
    load_atlas,
    picture_convergence,
    save_atlas,
    scr_region,
    search_tiles,
)
from obc.errors import AtlasFormatError, ObcError
from obc.geometry import from_scaled, point_xy
from obc.square import square_polygon


def test_square_frame_grid_window(square):
    window = SearchWindow(4, (Fraction(-9), Fraction(-1), Fraction(-1), Fraction(1)),
                          Fraction(1, 8), 64)
    atlas = search_tiles(window, polygon=square)
    periods = sorted(t.period for t in atlas.tiles())
    assert periods == [4, 8, 12, 16]
    assert atlas.provenance["singular_skipped"] > 0
    for t in atlas.tiles():
        assert t.symmetric is True
        assert t.stability.verdict == "stable"
        assert t.stability.limit_point == t.polygon.centroid()


def test_search_determinism_and_monotone_refinement():
    bounds = (Fraction(2, 5), Fraction(4), Fraction(2, 5), Fraction(4))
    coarse = search_tiles(SearchWindow(4, bounds, Fraction(1, 4), 60))
    again = search_tiles(SearchWindow(4, bounds, Fraction(1, 4), 60))
    assert coarse.codes() == again.codes()
    fine = search_tiles(SearchWindow(4, bounds, Fraction(1, 8), 60))
    assert coarse.codes() <= fine.codes()


def test_search_results_merge_by_code_union():
    # scanning two half windows and merging by canonical code gives the
    # same atlas as one pass over the full window (order independence)
    res = Fraction(1, 4)
    x0, x1 = Fraction(2, 5), Fraction(4)
    t0, t1 = Fraction(2, 5), Fraction(4)
    split = x0 + 7 * res
    full = search_tiles(SearchWindow(4, (x0, x1, t0, t1), res, 60))
    left = search_tiles(SearchWindow(4, (x0, split, t0, t1), res, 60))
    right = search_tiles(SearchWindow(4, (split + res, x1, t0, t1), res, 60))
    assert left.codes() | right.codes() == full.codes()


def test_pentagon_census(pentagon_atlas):
    periods = {t.period for t in pentagon_atlas.tiles()}
    assert 5 in periods and 20 in periods
    for t in pentagon_atlas.tiles():
        assert t.symmetric is True
        assert t.stability.verdict == "stable"
        assert len(t.polygon.vertices) <= 10
        # symmetric tiles outside a prime n-gon are regular n- or 2n-gons
        assert t.polygon.is_regular()
        assert len(t.polygon.vertices) in (5, 10)


def test_scr_square_frame_examples(square):
    x = from_scaled(4, -2, 0)
    r = scr_region(4, 1, x, 4, polygon=square)
    pts = sorted(point_xy(v) for v in r.polygon.vertices)
    assert pts == [(-3.0, -1.0), (-3.0, 1.0), (-1.0, -1.0), (-1.0, 1.0)]
    assert scr_region(4, 1, x, 8, polygon=square).polygon == r.polygon


def test_scr_nestedness():
    x = from_scaled(4, -2, 0)
    lam = Fraction(9, 10)
    shallow = scr_region(4, lam, x, 30)
    deep = scr_region(4, lam, x, 60)
    assert all(shallow.polygon.contains(v) for v in deep.polygon.vertices)
    assert deep.polygon.contains(x)


def test_scr_rejects_bad_seed():
    with pytest.raises(ObcError):
        scr_region(4, 1, from_scaled(4, 0, 0), 4)  # inside the polygon
    with pytest.raises(ObcError):
        scr_region(4, 1, from_scaled(4, 3, 1), 4, polygon=square_polygon())  # singular


def test_picture_convergence_square_frame(square):
    x = from_scaled(4, -2, 0)
    rows = picture_convergence(4, x, [Fraction(9, 10), 1], 60, polygon=square)
    assert rows[1][1] == 0.0
    assert rows[0][1] > 0


def test_picture_convergence_monotone_on_lambda_grid(square):
    x = from_scaled(4, -2, 0)
    lams = [Fraction(9, 10), Fraction(19, 20), Fraction(99, 100),
            Fraction(199, 200), Fraction(999, 1000)]
    rows = picture_convergence(4, x, lams, 120, polygon=square)
    ds = [d for _, d in rows]
    assert all(a > b for a, b in zip(ds, ds[1:])), ds


def test_atlas_round_trip(tmp_path):
    atlas = search_tiles(SearchWindow(4, (Fraction(2, 5), Fraction(4), Fraction(2, 5), Fraction(4)),
                                      Fraction(1, 4), 60))
    path = tmp_path / "n4.atlas"
    save_atlas(atlas, path)
    loaded = load_atlas(path)
    assert loaded.codes() == atlas.codes()
    assert loaded.provenance["diagnostics"] == []
    path2 = tmp_path / "n4b.atlas"
    save_atlas(loaded, path2)
    assert path.read_text() == path2.read_text()


def test_atlas_rejects_corruption(tmp_path):
    atlas = search_tiles(SearchWindow(4, (Fraction(2, 5), Fraction(3), Fraction(2, 5), Fraction(3)),
                                      Fraction(1, 4), 40))
    path = tmp_path / "n4.atlas"
    save_atlas(atlas, path)
    lines = path.read_text().splitlines()
    import re

    frag = re.search(r"-?\d+/\d+", lines[1]).group(0)
    lines[1] = lines[1].replace(frag, "12345/7", 1)
    path.write_text("\n".join(lines) + "\n")
    loaded = load_atlas(path)
    assert len(loaded.entries) == len(atlas.entries) - 1
    assert any("line 2" in d for d in loaded.provenance["diagnostics"])


def test_atlas_header_required(tmp_path):
    path = tmp_path / "bad.atlas"
    path.write_text("not an atlas\n")
    with pytest.raises(AtlasFormatError):
        load_atlas(path)


def test_non_canonical_frame_not_persistable(tmp_path, square):
    atlas = search_tiles(
        SearchWindow(4, (Fraction(-3), Fraction(-1), Fraction(-1), Fraction(1)),
                     Fraction(1, 4), 16),
        polygon=square,
    )
    with pytest.raises(ObcError):
        save_atlas(atlas, tmp_path / "x.atlas")


def test_septagon_fixture(septagon_atlas):
    assert septagon_atlas.n == 7
    tiles = septagon_atlas.tiles()
    assert len(tiles) == 8
    exotic = [t for t in tiles if not t.symmetric]
    assert len(exotic) == 1
    assert exotic[0].stability.verdict == "unstable"
    for t in tiles:
        assert len(t.polygon.vertices) <= 14
        if t.symmetric:
            # prime n: symmetric tiles are regular 7- or 14-gons
            assert t.polygon.is_regular()
            assert len(t.polygon.vertices) in (7, 14)
            assert t.stability.verdict == "stable"


def test_float_mode_agrees_with_exact_mode():
    bounds = (Fraction(2, 5), Fraction(3), Fraction(2, 5), Fraction(3))
    exact = search_tiles(SearchWindow(4, bounds, Fraction(1, 4), 60, mode="exact"))
    scr = search_tiles(SearchWindow(4, bounds, Fraction(1, 4), 60, mode="float_then_certify"))
    assert exact.codes() == scr.codes()
