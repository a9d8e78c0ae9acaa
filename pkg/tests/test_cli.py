from pathlib import Path

import pytest
from click.testing import CliRunner

from loopon.cli import main
from loopon.lattice import hexagon_edges
from loopon.loopcfg import LoopConfig

GOLDEN = Path(__file__).parent / "golden"


@pytest.fixture
def runner():
    return CliRunner()


def test_exact_h1(runner):
    r = runner.invoke(main, ["exact", "--shape", "h1", "--n", "8", "--x", "0.5"])
    assert r.exit_code == 0, r.output
    assert "Z\t9/8" in r.output
    assert "Zfloat\t1.125" in r.output


def test_exact_measure_tsv(runner, tmp_path):
    out = tmp_path / "m.tsv"
    r = runner.invoke(main, ["exact", "--shape", "h1", "--n", "8", "--x", "1/2", "--out", str(out)])
    assert r.exit_code == 0
    lines = out.read_text().splitlines()
    assert lines[0] == "config-id\to\tL\tlog-weight\tprobability"
    assert lines[2].split("\t")[:3] == ["1", "6", "1"]
    assert float(lines[2].split("\t")[4]) == pytest.approx(1 / 9)


def test_exact_checks(runner):
    r = runner.invoke(main, ["exact", "--rect", "a=2,b=3", "--check", "packing"])
    assert r.exit_code == 0 and "unique=true" in r.output
    r = runner.invoke(main, ["exact", "--rect", "4x4-type0", "--check", "repair"])
    assert r.exit_code == 0 and "all identities hold" in r.output
    r = runner.invoke(main, ["exact", "--shape", "h7", "--n", "8", "--x", "0.5", "--check", "peierls"])
    assert r.exit_code == 0 and "violations=0" in r.output


def test_exact_capacity_exit(runner):
    r = runner.invoke(main, ["exact", "--rect", "12x9-type0"])
    assert r.exit_code == 3


def test_usage_errors(runner):
    assert runner.invoke(main, ["exact", "--shape", "h1", "--n", "-1"]).exit_code == 2
    assert runner.invoke(main, ["exact", "--rect", "bogus"]).exit_code == 2
    assert runner.invoke(main, ["exact", "--shape", "h1", "--rect", "4x4-type0"]).exit_code == 2


def test_sample_determinism(runner, tmp_path):
    args = ["sample", "--shape", "h7", "--n", "8", "--x", "2", "--bc", "gnd0", "--seed", "3",
            "--sweeps", "40", "--thin", "4", "--svg"]
    a, b = tmp_path / "a", tmp_path / "b"
    assert runner.invoke(main, args + ["--out", str(a)]).exit_code == 0
    assert runner.invoke(main, args + ["--out", str(b)]).exit_code == 0
    for name in ("trace.tsv", "snapshot.txt", "snapshot.svg", "domain.txt"):
        assert (a / name).read_bytes() == (b / name).read_bytes()
    assert len((a / "trace.tsv").read_text().splitlines()) == 11
    from loopon.circuits import Circuit
    from loopon.loopcfg import flower_domain
    dom_text = (a / "domain.txt").read_text()
    assert Circuit.from_text(dom_text) == flower_domain().circuit
    assert Circuit.from_text(dom_text).to_text() == dom_text
    snap = LoopConfig.from_text((a / "snapshot.txt").read_text())
    assert snap.to_text() == (a / "snapshot.txt").read_text()


def test_sample_zero_sweeps_keeps_initial(runner, tmp_path):
    r = runner.invoke(main, ["sample", "--shape", "h7", "--n", "1", "--x", "1", "--sweeps", "0",
                             "--out", str(tmp_path)])
    assert r.exit_code == 0
    assert (tmp_path / "snapshot.txt").read_text() == ""


def test_sample_multiple_chains(runner, tmp_path):
    r = runner.invoke(main, ["sample", "--shape", "h7", "--n", "1", "--x", "1", "--sweeps", "5",
                             "--chains", "2", "--out", str(tmp_path)])
    assert r.exit_code == 0
    assert (tmp_path / "snapshot_0.txt").exists() and (tmp_path / "snapshot_1.txt").exists()


def test_sample_refuses_infinite_x(runner, tmp_path):
    r = runner.invoke(main, ["sample", "--shape", "h7", "--n", "2", "--x", "inf", "--out", str(tmp_path)])
    assert r.exit_code == 2
    r = runner.invoke(main, ["sample", "--shape", "h7", "--n", "2", "--x", "inf", "--sweeps", "3",
                             "--allow-noergodic", "--out", str(tmp_path)])
    assert r.exit_code == 0


def test_render_golden_svg(runner, tmp_path):
    cfg = tmp_path / "c.txt"
    cfg.write_text(LoopConfig(frozenset(hexagon_edges((0, 0)))).to_text())
    out = tmp_path / "o.svg"
    r = runner.invoke(main, ["render", "--config", str(cfg), "--shape", "h7", "--out", str(out),
                             "--shade", "0"])
    assert r.exit_code == 0, r.output
    assert out.read_text() == (GOLDEN / "h7_center_loop.svg").read_text()


def test_render_empty_is_grid_only(runner, tmp_path):
    cfg = tmp_path / "c.txt"
    cfg.write_text("")
    out = tmp_path / "o.svg"
    assert runner.invoke(main, ["render", "--config", str(cfg), "--shape", "h1", "--out", str(out)]).exit_code == 0
    text = out.read_text()
    assert "<line" not in text and text.count("<polygon") == 7


def test_seeded_sample_golden_svg():
    from loopon.lattice import hexes_of_vertices
    from loopon.loopcfg import BoundaryCondition, ModelParams, flower_domain
    from loopon.mcmc import ChainState
    from loopon.render import RenderStyle, render_svg

    H7 = flower_domain()
    s = ChainState(H7, BoundaryCondition.ground(0), ModelParams(8.0, 2.0), seed=1)
    s.steps(7 * 50)
    svg = render_svg(s.full_config(), hexes_of_vertices(H7.vertices), RenderStyle(shade=(True, True, True)))
    assert svg == (GOLDEN / "h7_sample_seed1.svg").read_text()


def test_ground_state_shades_every_zero_hexagon():
    from loopon.lattice import hex_color
    from loopon.loopcfg import ground_state
    from loopon.render import SHADES, RenderStyle, render_svg

    window = [(a, b) for a in range(4) for b in range(4)]
    svg = render_svg(ground_state(0, window), window, RenderStyle(shade=(True, True, True)))
    assert svg.count(f'fill="{SHADES[0]}"') == sum(hex_color(z) == 0 for z in window)
    assert SHADES[1] not in svg and SHADES[2] not in svg


def test_render_style_validation():
    from loopon.render import RenderStyle
    with pytest.raises(ValueError):
        RenderStyle(radius=0)
