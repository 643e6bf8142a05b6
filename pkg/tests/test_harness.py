import numpy as np
import pytest

from templateclust.cli import main
from templateclust.errors import InputError
from templateclust.harness import (
    ExperimentConfig,
    ExperimentRecord,
    aggregate,
    run_and_write,
    run_experiment,
)


def small_cfg(**kw):
    defaults = dict(
        kind="synth",
        dataset="g3",
        sizes=(5,),
        methods=("tb", "spectral", "cnm", "louvain"),
        repetitions=2,
        base_seed=3,
    )
    defaults.update(kw)
    return ExperimentConfig(**defaults)


class TestRunExperiment:
    def test_record_grid_shape(self):
        cfg = small_cfg(sizes=(5, 8), repetitions=3)
        records = run_experiment(cfg)
        assert len(records) == 2 * 3 * 4  # points x reps x methods
        for r in records:
            assert r.seed == cfg.base_seed + r.repetition

    def test_pd_only_for_embedding_methods(self):
        records = run_experiment(small_cfg())
        for r in records:
            if r.method in ("tb", "spectral"):
                assert r.projector_distance is not None
            else:
                assert r.projector_distance is None

    def test_rerun_identical(self):
        a = run_experiment(small_cfg())
        b = run_experiment(small_cfg())
        for ra, rb in zip(a, b):
            assert (ra.method, ra.repetition, ra.ari, ra.projector_distance) == (
                rb.method,
                rb.repetition,
                rb.ari,
                rb.projector_distance,
            )

    def test_fixed_graph_mode(self):
        cfg = small_cfg(fixed_graph=True, methods=("cnm",), repetitions=3)
        records = run_experiment(cfg)
        # same graph every repetition, deterministic method: identical ARI
        assert len({r.ari for r in records}) == 1

    def test_bp_needs_probability(self):
        with pytest.raises(InputError):
            run_experiment(small_cfg(dataset="bp"))

    def test_c2_sweep_points(self):
        cfg = small_cfg(dataset="c2", sizes=(5,), probs=(0.2, 0.3), repetitions=1)
        records = run_experiment(cfg)
        assert sorted({r.param for r in records}) == [0.2, 0.3]

    def test_unknown_method_rejected(self):
        with pytest.raises(InputError):
            small_cfg(methods=("tb", "mystery"))

    def test_real_requires_paths(self):
        with pytest.raises(InputError):
            ExperimentConfig(kind="real", dataset="x")


class TestRealExperiment:
    def test_synthetic_files(self, tmp_path):
        # write a tiny two-community graph and labels, run the real pipeline
        edges = tmp_path / "edges.txt"
        labels = tmp_path / "labels.txt"
        lines = []
        for i in range(4):
            for j in range(i + 1, 4):
                lines.append(f"{i} {j}\n")
        for i in range(4, 8):
            for j in range(i + 1, 8):
                lines.append(f"{i} {j}\n")
        lines.append("0 4\n")
        edges.write_text("".join(lines))
        labels.write_text("".join(f"{i} {0 if i < 4 else 1}\n" for i in range(8)))
        cfg = ExperimentConfig(
            kind="real",
            dataset="toy",
            methods=("tb", "louvain"),
            sigmas=(0.0, 0.5),
            repetitions=2,
            base_seed=1,
            edges_path=str(edges),
            labels_path=str(labels),
        )
        records = run_experiment(cfg)
        assert len(records) == 2 * 2 * 2
        tb = [r for r in records if r.method == "tb" and r.param == 0.0]
        assert all(r.status == "ok" for r in tb)
        assert all(r.ari == 1.0 for r in tb)


class TestAggregate:
    def test_single_record_std_zero(self):
        rec = ExperimentRecord("d", "tb", 5, 0.1, 0, 0, ari=0.7)
        rows = aggregate([rec])
        assert rows[0]["ari_mean"] == 0.7
        assert rows[0]["ari_std"] == 0.0

    def test_two_records_hand_values(self):
        recs = [
            ExperimentRecord("d", "tb", 5, 0.1, 0, 0, ari=0.0),
            ExperimentRecord("d", "tb", 5, 0.1, 1, 1, ari=1.0),
        ]
        rows = aggregate(recs)
        assert rows[0]["ari_mean"] == pytest.approx(0.5)
        assert rows[0]["ari_std"] == pytest.approx(np.sqrt(0.5))

    def test_order_invariant(self):
        recs = [
            ExperimentRecord("d", "tb", 5, 0.1, i, i, ari=x)
            for i, x in enumerate([0.2, 0.9, 0.5])
        ]
        assert aggregate(recs) == aggregate(list(reversed(recs)))

    def test_failed_rows_counted(self):
        recs = [
            ExperimentRecord("d", "tb", 5, 0.1, 0, 0, ari=0.8),
            ExperimentRecord("d", "tb", 5, 0.1, 1, 1, status="failed"),
        ]
        rows = aggregate(recs)
        assert rows[0]["failures"] == 1
        assert rows[0]["ari_mean"] == 0.8

    def test_empty_rejected(self):
        with pytest.raises(InputError):
            aggregate([])


class TestCsvOutput:
    def test_byte_identical_reruns(self, tmp_path):
        cfg = small_cfg()
        run_and_write(cfg, tmp_path / "a")
        run_and_write(cfg, tmp_path / "b")
        assert (tmp_path / "a" / "records.csv").read_bytes() == (
            tmp_path / "b" / "records.csv"
        ).read_bytes()
        assert (tmp_path / "a" / "summary.csv").read_bytes() == (
            tmp_path / "b" / "summary.csv"
        ).read_bytes()

    def test_header_and_lf(self, tmp_path):
        run_and_write(small_cfg(methods=("cnm",), repetitions=1), tmp_path)
        data = (tmp_path / "records.csv").read_bytes()
        assert b"\r" not in data
        assert data.decode().splitlines()[0].startswith("dataset,method,size,param")


class TestCli:
    def test_synth_command(self, tmp_path, capsys):
        rc = main(
            [
                "synth",
                "--family",
                "g3",
                "--sizes",
                "5",
                "--methods",
                "cnm",
                "--reps",
                "2",
                "--seed",
                "1",
                "--out",
                str(tmp_path / "out"),
            ]
        )
        assert rc == 0
        assert (tmp_path / "out" / "records.csv").exists()
        assert (tmp_path / "out" / "summary.csv").exists()

    def test_cluster_command(self, capsys):
        rc = main(
            ["cluster", "--family", "g3", "--size", "6", "--method", "tb", "--seed", "2"]
        )
        assert rc == 0
        out = capsys.readouterr().out
        assert out.startswith("labels:")
        assert "ari:" in out

    def test_input_error_exit_code(self, capsys):
        rc = main(["cluster", "--method", "tb"])
        assert rc == 1

    def test_cluster_with_template_file(self, tmp_path, capsys):
        edges = tmp_path / "edges.txt"
        edges.write_text("0 1\n0 2\n1 2\n3 4\n3 5\n4 5\n")
        template = tmp_path / "template.txt"
        template.write_text("6 0\n0 6\n")
        rc = main(
            [
                "cluster",
                "--edges",
                str(edges),
                "--template",
                str(template),
                "--method",
                "tb",
                "--seed",
                "3",
            ]
        )
        assert rc == 0
        out = capsys.readouterr().out
        labels = [int(x) for x in out.splitlines()[0].split()[1:]]
        assert labels[0] == labels[1] == labels[2]
        assert labels[3] == labels[4] == labels[5]
        assert labels[0] != labels[3]

    def test_cluster_spectral_with_k(self, tmp_path, capsys):
        edges = tmp_path / "edges.txt"
        edges.write_text("0 1\n0 2\n1 2\n3 4\n3 5\n4 5\n")
        rc = main(
            ["cluster", "--edges", str(edges), "--method", "spectral", "--k", "2"]
        )
        assert rc == 0
        out = capsys.readouterr().out
        assert "k_found: 2" in out

    def test_real_command(self, tmp_path, capsys):
        edges = tmp_path / "edges.txt"
        labels = tmp_path / "labels.txt"
        lines = []
        for i in range(5):
            for j in range(i + 1, 5):
                lines.append(f"{i} {j}\n")
        for i in range(5, 10):
            for j in range(i + 1, 10):
                lines.append(f"{i} {j}\n")
        lines.append("0 5\n")
        edges.write_text("".join(lines))
        labels.write_text("".join(f"{i} {0 if i < 5 else 1}\n" for i in range(10)))
        rc = main(
            [
                "real",
                "--edges",
                str(edges),
                "--labels",
                str(labels),
                "--methods",
                "tb",
                "--reps",
                "2",
                "--out",
                str(tmp_path / "out"),
            ]
        )
        assert rc == 0
        assert (tmp_path / "out" / "records.csv").exists()
