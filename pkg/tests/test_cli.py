"""Command-line interface: subcommands, exit codes, manifests."""

import hashlib
import json

import numpy as np
import pytest

import samfuse as sf
from samfuse.cli import main


def run(*argv):
    return main([str(a) for a in argv])


@pytest.fixture(scope="module")
def fixture_dir(tmp_path_factory):
    path = tmp_path_factory.mktemp("fx")
    assert run("synth", "-o", path / "half", "--mask", "half",
               "--sigma", 2, "--size", 64, "--seed", 5) == 0
    return path / "half"


class TestSynth:
    def test_layout(self, fixture_dir):
        for name in ("gt.png", "a.png", "b.png", "mask.png", "meta.json"):
            assert (fixture_dir / name).exists()
        meta = json.loads((fixture_dir / "meta.json").read_text())
        assert meta == {"sigma": 2.0, "seed": 5}

    def test_disk_mask(self, tmp_path):
        assert run("synth", "-o", tmp_path / "d", "--mask", "disk:6",
                   "--size", 48) == 0
        mask = sf.load_image(tmp_path / "d" / "mask.png")
        assert 80 < mask.sum() < 140  # pi * 36 with pixel aliasing

    def test_mask_from_file(self, tmp_path, fixture_dir):
        out = tmp_path / "m"
        assert run("synth", fixture_dir / "gt.png", "-o", out,
                   "--mask", f"file:{fixture_dir / 'mask.png'}") == 0
        assert (out / "a.png").exists()

    def test_zero_sigma_rejected(self, tmp_path):
        assert run("synth", "-o", tmp_path / "z", "--sigma", 0) == 4

    def test_bad_mask_spec_rejected(self, tmp_path):
        assert run("synth", "-o", tmp_path / "z", "--mask", "blob") == 4
        assert run("synth", "-o", tmp_path / "z", "--mask", "disk:x") == 4
        assert run("synth", "-o", tmp_path / "z", "--mask", "disk:-3") == 4

    def test_existing_ground_truth(self, tmp_path, fixture_dir):
        out = tmp_path / "g"
        assert run("synth", fixture_dir / "gt.png", "-o", out, "--sigma", 1.5) == 0
        meta = json.loads((out / "meta.json").read_text())
        assert meta["sigma"] == 1.5


class TestFuse:
    def test_writes_output_and_record(self, tmp_path, fixture_dir, capsys):
        out = tmp_path / "fused.png"
        assert run("fuse", fixture_dir / "a.png", fixture_dir / "b.png",
                   "-o", out) == 0
        assert out.exists()
        record = json.loads(capsys.readouterr().out)
        assert record["out"] == str(out)
        assert record["q_mi"] is None
        assert record["ms"] > 0
        assert len(record["config_hash"]) == 16
        assert record["config"]["balance_beta"] == 0.5

    def test_metrics_flag_fills_qmi(self, tmp_path, fixture_dir, capsys):
        out = tmp_path / "f.png"
        assert run("fuse", fixture_dir / "a.png", fixture_dir / "b.png",
                   "-o", out, "--metrics") == 0
        record = json.loads(capsys.readouterr().out)
        assert 0.0 <= record["q_mi"] <= 2.0

    def test_manifest_file_appended(self, tmp_path, fixture_dir):
        manifest = tmp_path / "runs.jsonl"
        for _ in range(2):
            assert run("fuse", fixture_dir / "a.png", fixture_dir / "b.png",
                       "-o", tmp_path / "f.png", "--manifest", manifest) == 0
        lines = manifest.read_text().strip().splitlines()
        assert len(lines) == 2
        assert all(json.loads(l)["config_hash"] for l in lines)

    def test_config_echo(self, tmp_path, fixture_dir, capsys):
        assert run("fuse", fixture_dir / "a.png", fixture_dir / "b.png",
                   "-o", tmp_path / "f.png", "--beta", 0.7, "--scales", 2) == 0
        record = json.loads(capsys.readouterr().out)
        assert record["config"]["balance_beta"] == 0.7
        assert record["config"]["num_scales"] == 2

    def test_self_fusion_identity(self, tmp_path, fixture_dir):
        out = tmp_path / "same.png"
        assert run("fuse", fixture_dir / "a.png", fixture_dir / "a.png",
                   "-o", out) == 0
        a = sf.load_image(fixture_dir / "a.png")
        assert np.array_equal(sf.load_image(out), a)

    def test_debug_maps_written(self, tmp_path, fixture_dir):
        out = tmp_path / "dbg.png"
        assert run("fuse", fixture_dir / "a.png", fixture_dir / "b.png",
                   "-o", out, "--debug-maps") == 0
        stages = ("pf", "epf", "scm1", "scm2", "b1", "b2",
                  "dm", "dbm", "bdm", "tmp", "omp", "rmp", "fmp")
        for stage in stages:
            assert (tmp_path / f"dbg.{stage}.png").exists()
        fmp = np.asarray(sf.load_image(tmp_path / "dbg.fmp.png") * 255).round()
        assert set(np.unique(fmp)) <= {0.0, 128.0, 255.0}

    def test_unreadable_exits_2(self, tmp_path, fixture_dir):
        assert run("fuse", tmp_path / "nope.png", fixture_dir / "b.png",
                   "-o", tmp_path / "f.png") == 2

    def test_dim_mismatch_exits_3(self, tmp_path, fixture_dir):
        small = tmp_path / "small.png"
        sf.save_image(small, np.zeros((16, 16)))
        assert run("fuse", small, fixture_dir / "b.png",
                   "-o", tmp_path / "f.png") == 3

    def test_bad_config_exits_4(self, tmp_path, fixture_dir):
        assert run("fuse", fixture_dir / "a.png", fixture_dir / "b.png",
                   "-o", tmp_path / "f.png", "--beta", 9) == 4


def _strip_timing(manifest_path):
    records = [json.loads(l) for l in manifest_path.read_text().splitlines()]
    return [{k: v for k, v in r.items() if k != "ms"} for r in records]


class TestBatch:
    @pytest.fixture()
    def batch_dir(self, tmp_path, fixture_dir):
        din = tmp_path / "in"
        din.mkdir()
        a = (fixture_dir / "a.png").read_bytes()
        b = (fixture_dir / "b.png").read_bytes()
        for stem in ("x", "y"):
            (din / f"{stem}-A.png").write_bytes(a)
            (din / f"{stem}-B.png").write_bytes(b)
        (din / "lonely-A.png").write_bytes(a)  # no partner, must be skipped
        return din

    def test_fuses_all_pairs(self, batch_dir, tmp_path, monkeypatch):
        monkeypatch.setenv("SAMF_THREADS", "2")
        dout = tmp_path / "out"
        assert run("batch", batch_dir, dout) == 0
        records = _strip_timing(dout / "manifest.jsonl")
        assert [r["out"].endswith(s) for r, s in zip(records, ("x.png", "y.png"))]
        assert (dout / "x.png").exists() and (dout / "y.png").exists()
        assert not (dout / "lonely.png").exists()

    def test_thread_count_invariant(self, batch_dir, tmp_path, monkeypatch):
        outs = {}
        for threads in ("1", "4"):
            monkeypatch.setenv("SAMF_THREADS", threads)
            dout = tmp_path / f"out{threads}"
            assert run("batch", batch_dir, dout, "--metrics") == 0
            digest = [hashlib.sha256(p.read_bytes()).hexdigest()
                      for p in sorted(dout.glob("*.png"))]
            outs[threads] = (digest, _strip_timing(dout / "manifest.jsonl"))
        d1, m1 = outs["1"]
        d4, m4 = outs["4"]
        assert d1 == d4
        strip_paths = lambda recs: [{k: v for k, v in r.items()
                                     if k not in ("out", "pair")} for r in recs]
        assert strip_paths(m1) == strip_paths(m4)

    def test_corrupt_pair_recorded_not_fatal(self, batch_dir, tmp_path):
        (batch_dir / "bad-A.png").write_text("not a png")
        (batch_dir / "bad-B.png").write_text("not a png")
        dout = tmp_path / "out"
        assert run("batch", batch_dir, dout) == 0
        records = [json.loads(l) for l in (dout / "manifest.jsonl").read_text().splitlines()]
        errors = [r for r in records if "error" in r]
        assert len(errors) == 1
        assert errors[0]["code"] == 2
        assert len(records) == 3

    def test_empty_dir_exits_5(self, tmp_path):
        din = tmp_path / "empty"
        din.mkdir()
        dout = tmp_path / "out"
        assert run("batch", din, dout) == 5
        assert (dout / "manifest.jsonl").read_text() == ""

    def test_missing_dir_exits_2(self, tmp_path):
        assert run("batch", tmp_path / "absent", tmp_path / "out") == 2


class TestMetricsCmd:
    def test_reports_qmi_and_psnr(self, tmp_path, fixture_dir, capsys):
        out = tmp_path / "f.png"
        run("fuse", fixture_dir / "a.png", fixture_dir / "b.png", "-o", out)
        capsys.readouterr()
        assert run("metrics", out, fixture_dir / "a.png", fixture_dir / "b.png",
                   "--ground-truth", fixture_dir / "gt.png") == 0
        report = json.loads(capsys.readouterr().out)
        assert 0.0 <= report["q_mi"] <= 2.0
        assert report["psnr"] > 10.0

    def test_dim_mismatch_exits_3(self, tmp_path, fixture_dir):
        small = tmp_path / "s.png"
        sf.save_image(small, np.zeros((8, 8)))
        assert run("metrics", small, fixture_dir / "a.png",
                   fixture_dir / "b.png") == 3


class TestConfigCmd:
    def test_dump_defaults(self, capsys):
        assert run("config", "--dump") == 0
        payload = json.loads(capsys.readouterr().out)
        assert payload["config"]["num_scales"] == 4
        assert len(payload["config_hash"]) == 16

    def test_file_and_flag_precedence(self, tmp_path, capsys):
        cfg_file = tmp_path / "cfg.json"
        cfg_file.write_text(json.dumps({"balance_beta": 0.3, "num_scales": 2}))
        assert run("config", "--dump", "--config", cfg_file, "--scales", 6) == 0
        payload = json.loads(capsys.readouterr().out)
        assert payload["config"]["balance_beta"] == 0.3  # from file
        assert payload["config"]["num_scales"] == 6      # flag wins

    def test_unknown_key_exits_4(self, tmp_path):
        cfg_file = tmp_path / "cfg.json"
        cfg_file.write_text(json.dumps({"nonsense": 1}))
        assert run("config", "--dump", "--config", cfg_file) == 4

    def test_invalid_json_exits_4(self, tmp_path):
        cfg_file = tmp_path / "cfg.json"
        cfg_file.write_text("{broken")
        assert run("config", "--dump", "--config", cfg_file) == 4

    def test_out_of_range_value_exits_4(self, tmp_path):
        cfg_file = tmp_path / "cfg.json"
        cfg_file.write_text(json.dumps({"ssim_window": 4}))
        assert run("config", "--dump", "--config", cfg_file) == 4
