import json

import numpy as np
import pytest

from fiberframe import (
    FiberTarget,
    fiber_residual,
    random_frame_on_fiber,
    read_frame,
    read_path,
    validate_path,
    write_frame,
    write_target,
)
from fiberframe.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def funtf_files(tmp_path, seeds=(0,)):
    t = FiberTarget.funtf(2, 4)
    tfile = tmp_path / "target.json"
    write_target(t, tfile)
    frames = []
    for s in seeds:
        f = tmp_path / f"frame{s}.json"
        write_frame(random_frame_on_fiber(t, seed=s), f)
        frames.append(f)
    return t, str(tfile), [str(f) for f in frames]


class TestCheck:
    def test_funtf_detected(self, tmp_path, capsys):
        _, tfile, (ffile,) = funtf_files(tmp_path)
        code, out, _ = run(capsys, "check", ffile)
        assert code == 0
        assert "is_funtf: True" in out

    def test_on_fiber_membership(self, tmp_path, capsys):
        _, tfile, (ffile,) = funtf_files(tmp_path)
        code, out, _ = run(capsys, "check", ffile, "--target", tfile)
        assert code == 0
        assert "on_fiber: True" in out

    def test_off_fiber_fails(self, tmp_path, capsys):
        t, tfile, (ffile,) = funtf_files(tmp_path)
        F = read_frame(ffile) * 1.05
        bad = tmp_path / "bad.json"
        write_frame(F, bad)
        code, out, _ = run(capsys, "check", str(bad), "--target", tfile)
        assert code == 1
        assert "on_fiber: False" in out

    def test_rank_deficient_fails(self, tmp_path, capsys):
        F = np.array([[1.0, 2.0, 0.0], [2.0, 4.0, 0.0]], dtype=complex)
        f = tmp_path / "flat.json"
        write_frame(F, f)
        code, out, _ = run(capsys, "check", str(f))
        assert code == 1
        assert "is_frame: False" in out

    def test_json_output_is_single_object(self, tmp_path, capsys):
        _, tfile, (ffile,) = funtf_files(tmp_path)
        code, out, _ = run(capsys, "--json", "check", ffile, "--target", tfile)
        assert code == 0
        obj = json.loads(out)
        assert obj["command"] == "check"
        assert obj["on_fiber"] is True

    def test_quiet_suppresses_header(self, tmp_path, capsys):
        _, tfile, (ffile,) = funtf_files(tmp_path)
        _, out, _ = run(capsys, "--quiet", "check", ffile)
        assert "fiberframe" not in out.splitlines()[0]


class TestConstruct:
    def test_writes_frame_on_fiber(self, tmp_path, capsys):
        outfile = tmp_path / "built.json"
        code, out, _ = run(
            capsys,
            "construct",
            "--lambda", "2", "1",
            "--r", "1", "1", "1",
            "--out", str(outfile),
        )
        assert code == 0
        F = read_frame(outfile)
        t = FiberTarget(operator=np.diag([2.0, 1.0]).astype(complex), norms_sq=np.ones(3))
        assert fiber_residual(F, t) <= 1e-16

    def test_deterministic_bytes(self, tmp_path, capsys):
        a, b = tmp_path / "a.json", tmp_path / "b.json"
        for f in (a, b):
            code, _, _ = run(
                capsys, "--seed", "7", "construct",
                "--lambda", "2", "1", "--r", "1.2", "0.9", "0.9", "--out", str(f),
            )
            assert code == 0
        assert a.read_bytes() == b.read_bytes()

    def test_inadmissible_reports_violation(self, capsys):
        code, out, _ = run(capsys, "construct", "--lambda", "1", "1", "--r", "1.5", "0.5")
        assert code == 1
        assert "admissible: False" in out
        assert "partial" in out

    def test_stdout_frame_when_no_out(self, capsys):
        code, out, _ = run(capsys, "--quiet", "construct", "--lambda", "1", "--r", "0.6", "0.4")
        assert code == 0
        frame_line = out.strip().splitlines()[-1]
        obj = json.loads(frame_line)
        assert obj["k"] == 1 and obj["N"] == 2


class TestTighten:
    def test_repairs_perturbed_frame(self, tmp_path, capsys):
        t, tfile, (ffile,) = funtf_files(tmp_path)
        rng = np.random.default_rng(60)
        F = read_frame(ffile)
        F = F + 1e-2 * np.linalg.norm(F) / np.sqrt(F.size) * (
            rng.standard_normal(F.shape) + 1j * rng.standard_normal(F.shape)
        )
        noisy = tmp_path / "noisy.json"
        write_frame(F, noisy)
        fixed = tmp_path / "fixed.json"
        code, out, _ = run(
            capsys, "--tol", "1e-6",
            "tighten", str(noisy), "--target", tfile, "--out", str(fixed),
        )
        assert code == 0
        assert "status: converged" in out
        G = read_frame(fixed)
        assert fiber_residual(G, t) <= 1e-12

    def test_default_target_is_tight(self, tmp_path, capsys):
        t, tfile, (ffile,) = funtf_files(tmp_path)
        code, out, _ = run(capsys, "tighten", ffile)
        assert code == 0
        assert "iterations: 0" in out


class TestConnect:
    def test_writes_valid_path(self, tmp_path, capsys):
        t, tfile, files = funtf_files(tmp_path, seeds=(0, 1))
        pfile = tmp_path / "path.jsonl"
        code, out, _ = run(capsys, "connect", files[0], files[1], tfile, "--out", str(pfile))
        assert code == 0
        assert "status: connected" in out
        path, header = read_path(pfile)
        chk = validate_path(path, tol=1e-8, delta=0.05)
        assert chk.ok, chk.message
        assert header["seed"] == 0

    def test_off_fiber_endpoint_fails(self, tmp_path, capsys):
        t, tfile, files = funtf_files(tmp_path, seeds=(0, 1))
        F = read_frame(files[0]) * 1.05
        bad = tmp_path / "bad.json"
        write_frame(F, bad)
        code, out, _ = run(
            capsys, "connect", str(bad), files[1], tfile, "--out", str(tmp_path / "p.jsonl")
        )
        assert code == 1
        assert "endpoint_off_fiber" in out


class TestEquiv:
    def test_detects_equivalence(self, tmp_path, capsys):
        t, tfile, (ffile,) = funtf_files(tmp_path)
        F = read_frame(ffile)
        rng = np.random.default_rng(61)
        A = rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2))
        Q, _ = np.linalg.qr(A)
        g = tmp_path / "rotated.json"
        write_frame(Q @ F, g)
        code, out, _ = run(capsys, "--json", "equiv", ffile, str(g))
        assert code == 0
        obj = json.loads(out)
        assert obj["equivalent"] is True
        U = np.asarray(obj["unitary"]["re"]) + 1j * np.asarray(obj["unitary"]["im"])
        assert np.linalg.norm(U @ F - Q @ F) <= 1e-8 * np.linalg.norm(F)

    def test_rejects_unrelated(self, tmp_path, capsys):
        t, tfile, files = funtf_files(tmp_path, seeds=(0, 1))
        code, out, _ = run(capsys, "equiv", files[0], files[1])
        assert code == 1
        assert "equivalent: False" in out


class TestErrors:
    def test_missing_file_is_usage_error(self, tmp_path, capsys):
        code, _, err = run(capsys, "check", str(tmp_path / "absent.json"))
        assert code == 2
        assert "error:" in err

    def test_shape_mismatch_is_usage_error(self, tmp_path, capsys):
        t, tfile, (ffile,) = funtf_files(tmp_path)
        other = FiberTarget.funtf(2, 5)
        t2 = tmp_path / "other.json"
        write_target(other, t2)
        code, _, err = run(capsys, "check", ffile, "--target", str(t2))
        assert code == 2

    def test_no_subcommand_exits_2(self, capsys):
        with pytest.raises(SystemExit) as exc:
            main([])
        assert exc.value.code == 2
