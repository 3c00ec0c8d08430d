import json
import math

import pytest

from volconj.cli import format_complex, main, parse_complex
from volconj.errors import DomainError
from volconj.knots import KnotSpec
from volconj.sweep import CSV_HEADER, SweepJob, SweepResult, run_sweep

TREFOIL = KnotSpec.torus(2, 3)


def _job(**kw):
    base = dict(
        knot=TREFOIL,
        re_min=-1.5,
        re_max=-0.2,
        im_min=-1.0,
        im_max=1.0,
        steps_re=5,
        steps_im=4,
    )
    base.update(kw)
    return SweepJob(**base)


# ---------------------------------------------------------------- job validation


def test_job_validation():
    with pytest.raises(DomainError):
        _job(steps_re=0)
    with pytest.raises(DomainError):
        _job(re_max=float("inf"))
    with pytest.raises(DomainError):
        _job(mode="fancy")
    with pytest.raises(DomainError):
        _job(n_min=1)


def test_grid_row_major_order():
    job = _job(steps_re=2, steps_im=3)
    grid = job.grid()
    assert len(grid) == 6
    assert grid[0].real == grid[1].real == grid[2].real == -1.5
    assert grid[0].imag < grid[1].imag < grid[2].imag


# ---------------------------------------------------------------- sweeps


def test_single_point_sweep_volume_zero():
    job = _job(steps_re=1, steps_im=1, re_min=-0.8, re_max=-0.8, im_min=0.3, im_max=0.3)
    res = run_sweep(job)
    assert len(res.rows) == 1 and not res.failures
    idx, pt = res.rows[0]
    assert idx == 0
    assert abs(pt.V) <= 1e-9


def test_closed_form_sweep_no_failures():
    res = run_sweep(_job(steps_re=10, steps_im=10))
    assert len(res.rows) == 100
    assert res.failures == ()


def test_sweep_determinism_across_parallelism():
    job = _job(steps_re=6, steps_im=6)
    csv1 = run_sweep(job, parallelism=1).to_csv()
    csv8 = run_sweep(job, parallelism=8).to_csv()
    assert csv1.encode() == csv8.encode()


def test_sweep_failures_are_isolated():
    # unknot has no closed-form potential only through h_closed; the sweep
    # handles it via the abelian record, so force failures with a fig8 grid
    # crossing the dilog branch locus instead: real u beyond arccosh(3/2)
    job = SweepJob(
        knot=KnotSpec.figure_eight(),
        re_min=-2.5,
        re_max=2.5,
        im_min=0.0,
        im_max=0.0,
        steps_re=5,
        steps_im=1,
    )
    res = run_sweep(job)
    assert len(res.rows) + len(res.failures) == 5
    assert res.rows  # the small-|u| points succeed


def test_csv_header_and_shape():
    res = run_sweep(_job(steps_re=2, steps_im=2))
    lines = res.to_csv().strip().split("\n")
    assert lines[0] == CSV_HEADER
    assert len(lines) == 5
    assert all(len(line.split(",")) == 13 for line in lines[1:])


def test_json_roundtrip():
    res = run_sweep(_job(steps_re=3, steps_im=2))
    back = SweepResult.from_json(res.to_json())
    assert back == res


# ---------------------------------------------------------------- CLI


def test_parse_complex_grammar():
    assert parse_complex("1.3+0.1i") == 1.3 + 0.1j
    assert parse_complex("-0.6-0.4i") == -0.6 - 0.4j
    assert parse_complex("2") == 2.0
    assert parse_complex("0.5i") == 0.5j
    assert parse_complex("1e-3+2e-4i") == 1e-3 + 2e-4j
    with pytest.raises(DomainError):
        parse_complex("1 + 2i")
    with pytest.raises(DomainError):
        parse_complex("(1+2j)")


def test_format_complex_roundtrip():
    z = -0.625 + 0.25j
    assert parse_complex(format_complex(z)) == z


def test_cli_jones(capsys):
    code = main(["jones", "--knot", "torus:2,3", "--n", "2", "--q", "1.3+0.1i"])
    out = capsys.readouterr().out
    assert code == 0
    assert "log form" in out and "value" in out


def test_cli_unknown_knot_exits_one(capsys):
    code = main(["jones", "--knot", "granny", "--n", "2", "--q", "1.1"])
    assert code == 1
    err = capsys.readouterr().err
    assert "usage" in err


def test_cli_limit(capsys):
    code = main(
        ["limit", "--knot", "fig8", "--u", "0.02+0.03i", "--nmin", "200",
         "--nmax", "1200", "--nstep", "200"]
    )
    out = capsys.readouterr().out
    assert code == 0
    assert "closed form" in out and "error est" in out


def test_cli_sweep_csv_file(tmp_path, capsys):
    out_file = tmp_path / "out.csv"
    code = main(
        ["sweep", "--knot", "torus:2,3", "--grid", "-2:-0.1:0.1:3",
         "--steps", "4x4", "--out", str(out_file)]
    )
    assert code == 0
    text = out_file.read_text()
    assert text.startswith(CSV_HEADER)
    assert len(text.strip().split("\n")) == 17


def test_cli_sweep_threads_deterministic(tmp_path):
    f1 = tmp_path / "a.csv"
    f8 = tmp_path / "b.csv"
    args = ["sweep", "--knot", "torus:2,5", "--grid", "-1.2:-0.3:0:1",
            "--steps", "5x5"]
    assert main(args + ["--threads", "1", "--out", str(f1)]) == 0
    assert main(args + ["--threads", "8", "--out", str(f8)]) == 0
    assert f1.read_bytes() == f8.read_bytes()


def test_cli_geometry_json(capsys):
    code = main(["geometry", "--knot", "fig8", "--u", "0.05+0.05i",
                 "--format", "json"])
    out = capsys.readouterr().out
    assert code == 0
    doc = json.loads(out)
    assert {"u_re", "u_im", "H_re", "H_im", "V"} <= set(doc)


def test_cli_gukov(capsys):
    code = main(["gukov", "--knot", "torus:2,3", "--u", "-0.6+0.4i",
                 "--tol", "1e-8"])
    out = capsys.readouterr().out
    assert code == 0
    assert "ZERO" in out


def test_cli_roots(capsys):
    code = main(["roots", "--knot", "fig8"])
    out = capsys.readouterr().out
    assert code == 0
    assert "Alexander" in out and "A-factor" in out


def test_cli_mm_check(capsys):
    code = main(["mm-check", "--knot", "torus:2,3",
                 "--u", f"0.2-{2 * math.pi}i", "--n", "1500"])
    out = capsys.readouterr().out
    assert code == 0
    assert "PASS" in out


def test_cli_schlafli(capsys):
    code = main(["schlafli", "--knot", "fig8", "--path-start", "0+0i",
                 "--path-end", "-0.1+0.2i", "--t", "0.5"])
    out = capsys.readouterr().out
    assert code == 0
    assert "PASS" in out
