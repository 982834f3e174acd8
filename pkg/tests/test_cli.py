import json

import numpy as np
import pytest

from nsqpwd.cli import (
    EXIT_CONFIG,
    EXIT_DOMAIN,
    EXIT_IO,
    EXIT_OK,
    EXIT_VERIFY,
    main,
    read_grid,
    write_grid,
)
from nsqpwd.errors import ParseError
from nsqpwd.params import omega0
from nsqpwd.qpft import ComplexField, Grid2D, forward, gaussian

MONO = {
    "omega": "omega0",
    "signal": {
        "components": [{"kappa_re": 1.0, "kappa_im": 0.0, "alpha": 0.3, "beta": 0.2, "mu": 0.1, "lambda": 0.5}],
        "T": 40.0,
    },
    "grid": {"n": 64, "half_width": 20.0},
    "wgrid": {"lo1": -3.5, "hi1": -0.5, "lo2": -2.5, "hi2": 0.5, "n": 48},
    "slices": [[0.40, 0.10]],
    "mode": "paper",
    "xi_samples": 128,
}

BI = {
    "omega": "omega0",
    "signal": "bi",
    "grid": {"n": 64, "half_width": 20.0},
    "wgrid": {"lo1": -2.5, "hi1": -1.5, "lo2": -1.6, "hi2": -0.6, "n": 32},
    "slices": [[0.3125, 0.3125]],
    "mode": "clipped",
}

TRI = {
    "omega": "omega1",
    "signal": "tri",
    "grid": {"n": 1000, "half_width": 20.0},
    "wgrid": {"auto": {"pad": 0.6, "n": 64}},
    "slices": [[6, 5], [4, 5], [4, 1]],
    "mode": "clipped",
}


def run(tmp_path, doc, command, *extra):
    cfg = tmp_path / "config.json"
    cfg.write_text(json.dumps(doc))
    return main([command, "--config", str(cfg), "--out", str(tmp_path / "out"), *extra])


class TestGridFiles:
    def field(self):
        rng = np.random.default_rng(0)
        g = Grid2D(3, 5, -1.25, 0.1, 0.5, 0.3)
        return ComplexField(g, rng.standard_normal((3, 5)) + 1j * rng.standard_normal((3, 5)))

    def test_binary_round_trip(self, tmp_path):
        f = self.field()
        write_grid(f, tmp_path / "f.bin", "bin")
        back = read_grid(tmp_path / "f.bin")
        assert back.grid == f.grid
        assert np.array_equal(back.values, f.values)

    def test_binary_header(self, tmp_path):
        write_grid(self.field(), tmp_path / "f.bin", "bin")
        data = (tmp_path / "f.bin").read_bytes()
        assert data[:5] == b"NSQW1"
        assert len(data) == 5 + 8 + 32 + 16 * 15

    def test_csv_round_trip(self, tmp_path):
        f = self.field()
        write_grid(f, tmp_path / "f.csv", "csv")
        back = read_grid(tmp_path / "f.csv")
        assert np.array_equal(back.values, f.values)

    def test_csv_lines(self, tmp_path):
        g = Grid2D(2, 2, 0.0, 0.0, 1.0, 1.0)
        write_grid(ComplexField(g, [[1, 2j], [3, 4]]), tmp_path / "f.csv", "csv")
        lines = (tmp_path / "f.csv").read_text().splitlines()
        assert lines[0] == "x1,x2,re,im"
        assert len(lines) == 5
        assert lines[2] == "0.0,1.0,0.0,2.0"

    def test_truncated(self, tmp_path):
        write_grid(self.field(), tmp_path / "f.bin", "bin")
        p = tmp_path / "t.bin"
        p.write_bytes((tmp_path / "f.bin").read_bytes()[:-3])
        with pytest.raises(ParseError):
            read_grid(p)
        p.write_bytes(b"NSQW1\x01")
        with pytest.raises(ParseError):
            read_grid(p)

    def test_bad_magic(self, tmp_path):
        p = tmp_path / "x.bin"
        p.write_bytes(b"XXXXX" + bytes(50))
        with pytest.raises(ParseError):
            read_grid(p)


class TestWd:
    def test_minimal(self, tmp_path, capsys):
        assert run(tmp_path, MONO, "wd") == EXIT_OK
        lines = (tmp_path / "out" / "slice_0.csv").read_text().splitlines()
        assert lines[0] == "omega1,omega2,re,im,abs"
        assert len(lines) == 1 + 48 * 48
        assert (tmp_path / "out" / "slice_0.dat").exists()
        out = capsys.readouterr().out
        first = [ln for ln in out.splitlines() if "peak 1" in ln][0]
        w1, w2 = (float(v) for v in first.split("(")[1].split(")")[0].split(","))
        assert abs(w1 + 2.091) <= 0.0625 + 1e-3 and abs(w2 + 1.077) <= 0.0625 + 1e-3

    def test_singular_b(self, tmp_path, capsys):
        doc = dict(MONO, omega={"A": [[0, 0], [0, 0]], "B": [[1, 1], [1, 1]], "C": [[0, 0], [0, 0]], "D": [[0, 0], [0, 0]], "E": [[0, 0], [0, 0]]})
        assert run(tmp_path, doc, "wd") == EXIT_CONFIG
        assert "B" in capsys.readouterr().err

    def test_off_grid_slice(self, tmp_path):
        doc = dict(MONO, mode="clipped")
        assert run(tmp_path, doc, "wd", "--slice", "0.1,0.1") == EXIT_DOMAIN

    def test_format_both(self, tmp_path):
        assert run(tmp_path, MONO, "wd", "--format", "both") == EXIT_OK
        slc = read_grid(tmp_path / "out" / "slice_0.bin")
        assert slc.grid.shape == (48, 48)

    def test_gnuplot_matrix(self, tmp_path):
        run(tmp_path, MONO, "wd")
        rows = (tmp_path / "out" / "slice_0.dat").read_text().splitlines()
        assert len(rows) == 49
        assert rows[0].split()[0] == "48" and len(rows[0].split()) == 49


class TestLfm:
    def test_deterministic(self, tmp_path):
        a, b = tmp_path / "a", tmp_path / "b"
        a.mkdir()
        b.mkdir()
        assert run(a, BI, "lfm", "--snr-db", "10", "--seed", "7") == EXIT_OK
        assert run(b, BI, "lfm", "--snr-db", "10", "--seed", "7") == EXIT_OK
        for name in ("slice_0.csv", "slice_0.dat", "detection.json", "detection.txt"):
            assert (a / "out" / name).read_bytes() == (b / "out" / name).read_bytes()

    def test_seed_changes_output(self, tmp_path):
        a, b = tmp_path / "a", tmp_path / "b"
        a.mkdir()
        b.mkdir()
        run(a, BI, "lfm", "--snr-db", "10", "--seed", "7")
        run(b, BI, "lfm", "--snr-db", "10", "--seed", "8")
        assert (a / "out" / "slice_0.csv").read_bytes() != (b / "out" / "slice_0.csv").read_bytes()

    def test_tri_noiseless(self, tmp_path):
        assert run(tmp_path, TRI, "lfm") == EXIT_OK
        rep = json.loads((tmp_path / "out" / "detection.json").read_text())
        assert len(rep) == 3
        for entry in rep:
            assert len(entry["components"]) == 3
            assert all(c["detected"] for c in entry["components"])

    def test_missing_components(self, tmp_path):
        assert run(tmp_path, dict(MONO, signal={"T": 40.0}), "lfm") == EXIT_CONFIG

    def test_unknown_preset(self, tmp_path):
        assert run(tmp_path, dict(MONO, signal="quad"), "lfm") == EXIT_CONFIG


class TestVerify:
    def test_default_suite(self, tmp_path):
        assert main(["verify", "--out", str(tmp_path)]) == EXIT_OK
        rep = json.loads((tmp_path / "verify.json").read_text())
        assert len(rep) == 10
        assert [r["name"] for r in rep] == [
            "moyal",
            "energy",
            "marginal_time",
            "marginal_freq",
            "time_shift",
            "modulation",
            "dilation",
            "convolution",
            "conjugation",
            "stft_association",
        ]
        assert all(r["pass"] for r in rep)
        assert "PASS" in (tmp_path / "verify.txt").read_text()

    def test_zero_tolerance_fails(self, tmp_path):
        doc = {
            "omega": "omega0",
            "signal": "gaussian",
            "grid": {"n": 32, "half_width": 4.0},
            "wgrid": {"lo1": -7.0, "hi1": 4.0, "lo2": -5.0, "hi2": 3.0, "n": 32},
            "tolerances": {"time_shift": 0.0, "energy": 10.0, "moyal": 10.0},
        }
        assert run(tmp_path, doc, "verify") == EXIT_VERIFY
        rep = json.loads((tmp_path / "out" / "verify.json").read_text())
        shift = [r for r in rep if r["name"] == "time_shift"][0]
        assert shift["tol"] == 0.0

    def test_asymmetric_b(self, tmp_path, capsys):
        om = omega0().to_dict()
        om["B"] = [[2.0, 1.0], [0.0, 4.0]]
        assert run(tmp_path, {"omega": om}, "verify") == EXIT_CONFIG
        assert "B" in capsys.readouterr().err


class TestQpft:
    def test_forward_and_inverse(self, tmp_path):
        g = Grid2D.centered(16, 4.0)
        f = gaussian(g)
        write_grid(f, tmp_path / "f.bin", "bin")
        doc = {"omega": "omega0", "qpft": {"grid": {"n": 24, "half_width": 6.0}}, "output": {"format": "bin"}}
        assert run(tmp_path, doc, "qpft", "--input", str(tmp_path / "f.bin")) == EXIT_OK
        F = read_grid(tmp_path / "out" / "forward.bin")
        expect = forward(f, omega0(), Grid2D.centered(24, 6.0))
        assert np.array_equal(F.values, expect.values)
        doc = {"omega": "omega0", "qpft": {"grid": {"n": 16, "half_width": 4.0}}, "output": {"format": "both"}}
        assert run(tmp_path, doc, "qpft", "--input", str(tmp_path / "out" / "forward.bin"), "--inverse") == EXIT_OK
        assert (tmp_path / "out" / "inverse.csv").exists()

    def test_missing_input(self, tmp_path):
        assert run(tmp_path, {"omega": "omega0"}, "qpft", "--input", str(tmp_path / "none.bin")) == EXIT_IO

    def test_truncated_input(self, tmp_path):
        p = tmp_path / "bad.bin"
        p.write_bytes(b"NSQW1" + bytes(10))
        assert run(tmp_path, {"omega": "omega0"}, "qpft", "--input", str(p)) == EXIT_IO

    def test_no_input(self, tmp_path):
        assert run(tmp_path, {"omega": "omega0"}, "qpft") == EXIT_CONFIG


class TestConfigErrors:
    def test_invalid_json(self, tmp_path):
        p = tmp_path / "c.json"
        p.write_text("{not json")
        assert main(["wd", "--config", str(p)]) == EXIT_CONFIG

    def test_missing_config(self, tmp_path):
        assert main(["wd", "--config", str(tmp_path / "none.json")]) == EXIT_IO

    def test_bad_mode(self, tmp_path):
        assert run(tmp_path, dict(MONO, mode="fast"), "wd") == EXIT_CONFIG

    def test_paper_mode_needs_lfm(self, tmp_path):
        doc = {"omega": "omega0", "signal": "gaussian", "slices": [[0.0625, 0.0625]], "wgrid": {"n": 8, "half_width": 2.0}}
        assert run(tmp_path, doc, "wd", "--mode", "paper") == EXIT_CONFIG

    def test_bad_slice_flag(self):
        with pytest.raises(SystemExit):
            main(["wd", "--slice", "1"])
