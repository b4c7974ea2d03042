"""Command-line surface: subcommands, formats, exit codes."""

import xml.etree.ElementTree as ET

from obc.cli import run_cli


def run(capsys, *argv):
    code = run_cli(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_orbit_square_frame(capsys):
    code, out, _ = run(capsys, "orbit", "--n", "4", "--square-frame",
                       "--lambda", "1/2", "--seed", "3,0", "--steps", "3")
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0] == "(3, 0)"
    assert lines[1] == "(0, 1.5)"
    assert "code=1,2,3" in out
    assert "termination=cap_reached" in out


def test_orbit_exact_mode(capsys):
    code, out, _ = run(capsys, "orbit", "--n", "4", "--square-frame",
                       "--lambda", "1", "--seed=-2,0", "--steps", "8", "--exact")
    assert code == 0
    assert "4:" in out
    assert "exact_repeat preperiod=0 period=4" in out


def test_orbit_accepts_serialized_seed(capsys):
    # the serialized form of (-2, 0) in Q(i)
    code, out, _ = run(capsys, "orbit", "--n", "4", "--square-frame",
                       "--lambda", "1", "--seed=4:-2/1,0/1", "--steps", "4")
    assert code == 0
    assert "period=4" in out
    code, _, err = run(capsys, "orbit", "--n", "5", "--seed=4:-2/1,0/1")
    assert code == 1 and "conductor" in err


def test_stability_pentagon(capsys):
    code, out, _ = run(capsys, "stability", "--n", "5", "--seed", "0.5,2.1")
    assert code == 0
    assert "symmetric=true" in out
    assert "stable=true" in out
    assert "limit=(" in out


def test_tile_from_code(capsys):
    code, out, _ = run(capsys, "tile", "--n", "4", "--square-frame", "--code", "3,4,1,2")
    assert code == 0
    assert "period=4" in out and "sides=4" in out


def test_square_verify(capsys):
    code, out, _ = run(capsys, "square-verify", "--kmax", "3", "--tol", "1e-12",
                       "--samples", "40", "--max-steps", "3000")
    assert code == 0
    assert "lambda_k enclosure" in out
    assert "0.754877666" in out
    assert "attractors" in out


def test_search_and_render_pipeline(tmp_path, capsys):
    atlas_path = tmp_path / "n4.atlas"
    code, out, _ = run(capsys, "search", "--n", "4", "--window", "2/5,3,2/5,3",
                       "--resolution", "1/4", "--max-period", "40",
                       "--out", str(atlas_path))
    assert code == 0
    assert atlas_path.exists()
    assert "tile orbits" in out
    svg_path = tmp_path / "n4.svg"
    code, out, _ = run(capsys, "render", "--atlas", str(atlas_path),
                       "--out", str(svg_path), "--viewport=-5,5,-5,5")
    assert code == 0
    ET.parse(svg_path)


def test_scr_compare(capsys):
    code, out, _ = run(capsys, "scr", "--n", "4", "--square-frame", "--seed=-2,0",
                       "--lambda", "1", "--depth", "4", "--compare-tile")
    assert code == 0
    assert "hausdorff_to_tile=0.0" in out


def test_scr_picture_mode(capsys):
    code, out, _ = run(capsys, "scr", "--n", "4", "--square-frame", "--seed=-2,0",
                       "--lambdas", "0.9,1", "--depth", "40")
    assert code == 0
    assert "hausdorff_to_tile" in out


def test_usage_error_exit_2(capsys):
    code, _, err = run(capsys, "orbit", "--n", "4", "--badflag")
    assert code == 2


def test_domain_error_exit_1(capsys):
    # seed inside the polygon is not periodic
    code, _, err = run(capsys, "stability", "--n", "4", "--square-frame", "--seed", "0,0")
    assert code == 1
    assert "error:" in err
    # bad contraction rate
    code, _, err = run(capsys, "orbit", "--n", "4", "--lambda", "3/2", "--seed", "3,0")
    assert code == 1
