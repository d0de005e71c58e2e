import csv
import io
import json

import numpy as np
import pytest

from hybridtumor import cli, pipeline
from hybridtumor.classifiers import Label
from hybridtumor.dataset import DatasetDescription, ingest_dataset, split_dataset, train_count
from hybridtumor.errors import DatasetLayoutError, DegenerateHistogramError, ModelFormatError
from hybridtumor.features import FEATURE_NAMES
from hybridtumor.imaging import GrayImage, load_image, save_pgm
from hybridtumor.segmentation import binarize, histogram, otsu_threshold


def fake_desc(nb, nm):
    return DatasetDescription(
        tuple(f"benign/{i:05d}.png" for i in range(nb)),
        tuple(f"malignant/{i:05d}.png" for i in range(nm)),
    )


@pytest.fixture(scope="module")
def small_data(tmp_path_factory):
    root = tmp_path_factory.mktemp("data")
    pipeline.generate_dataset(root, 10, seed=3)
    return root


@pytest.fixture(scope="module")
def small_model(small_data, tmp_path_factory):
    path = tmp_path_factory.mktemp("model") / "m.json"
    rep = pipeline.run_train(pipeline.RunConfig(data=small_data, model=path, seed=3, n_trees=15))
    return path, rep


class TestDataset:
    def test_ingest(self, tmp_path):
        for name, n in (("benign", 3), ("malignant", 2)):
            (tmp_path / name).mkdir()
            for i in reversed(range(n)):
                (tmp_path / name / f"{i}.pgm").write_bytes(b"")
        (tmp_path / "benign" / "notes.txt").write_text("x")
        d = ingest_dataset(tmp_path)
        assert [p.name for p in d.benign] == ["0.pgm", "1.pgm", "2.pgm"]
        assert len(d.malignant) == 2
        assert ingest_dataset(tmp_path) == d

    def test_missing_class(self, tmp_path):
        (tmp_path / "benign").mkdir()
        with pytest.raises(DatasetLayoutError, match="malignant"):
            ingest_dataset(tmp_path)

    def test_empty_class(self, tmp_path):
        (tmp_path / "benign").mkdir()
        (tmp_path / "malignant").mkdir()
        (tmp_path / "benign" / "a.png").write_bytes(b"")
        with pytest.raises(DatasetLayoutError, match="empty class directory"):
            ingest_dataset(tmp_path)

    def test_table_counts(self):
        s = split_dataset(fake_desc(1278, 1278), 0.85, seed=0)
        for label in Label:
            assert sum(1 for _, lab in s.train if lab == label) == 1086
            assert sum(1 for _, lab in s.test if lab == label) == 192

    def test_half(self):
        s = split_dataset(fake_desc(4, 4), 0.5, seed=1)
        assert len(s.train) == 4 and len(s.test) == 4

    def test_determinism(self):
        a, b = split_dataset(fake_desc(30, 20), seed=5), split_dataset(fake_desc(30, 20), seed=5)
        assert a == b
        c = split_dataset(fake_desc(30, 20), seed=6)
        assert c != a and len(c.train) == len(a.train)
        assert sorted(c.train + c.test) == sorted(a.train + a.test)

    def test_train_count(self):
        assert train_count(40, 0.85) == 34
        assert train_count(2, 0.99) == 1 and train_count(2, 0.01) == 1

    def test_errors(self):
        with pytest.raises(DatasetLayoutError):
            split_dataset(fake_desc(1, 5))
        with pytest.raises(ValueError):
            split_dataset(fake_desc(5, 5), 1.0)


class TestRuns:
    def test_train_report(self, small_model):
        path, rep = small_model
        assert rep.n_train == 16 and rep.n_test == 4 and rep.skipped == []
        assert rep.test.n == 4
        assert json.loads(path.read_text())["version"] == 1

    def test_rerun_identical(self, small_data, small_model, tmp_path):
        path, _ = small_model
        other = tmp_path / "again.json"
        pipeline.run_train(pipeline.RunConfig(data=small_data, model=other, seed=3, n_trees=15, jobs=3))
        assert other.read_bytes() == path.read_bytes()

    def test_predict_votes_tally(self, small_data, small_model):
        path, _ = small_model
        for img in sorted((small_data / "malignant").iterdir())[:3]:
            res = pipeline.run_predict(path, img)
            mal = sum(1 for v in res.votes.values() if v is Label.MALIGNANT)
            assert res.label == (Label.MALIGNANT if mal >= 2 else Label.BENIGN)
            assert res.area_mm2 == pytest.approx(np.sqrt(res.white_pixels) * 0.264)

    def test_evaluate_on_split(self, small_data, small_model):
        path, rep = small_model
        ev, skipped = pipeline.run_evaluate(path, small_data, split=0.85, seed=3)
        assert skipped == [] and ev.confusion == rep.test.confusion
        ev_all, _ = pipeline.run_evaluate(path, small_data)
        assert ev_all.n == 20

    def test_skip_limit(self, small_data, tmp_path):
        root = tmp_path / "data"
        for name in ("benign", "malignant"):
            (root / name).mkdir(parents=True)
            for p in sorted((small_data / name).iterdir()):
                (root / name / p.name).write_bytes(p.read_bytes())
        (root / "benign" / "zz_bad.pgm").write_bytes(b"junk")
        X, y, skipped = pipeline.extract_dataset(ingest_dataset(root).items(), pipeline.RunConfig(root, root).pipeline)
        assert len(skipped) == 1 and "zz_bad.pgm" in skipped[0][0] and X.shape == (20, 13)
        for i in range(3):
            (root / "malignant" / f"zz_bad{i}.pgm").write_bytes(b"junk")
        with pytest.raises(Exception, match="failed feature extraction"):
            pipeline.run_train(pipeline.RunConfig(data=root, model=tmp_path / "m.json", n_trees=3))

    def test_segment_blob(self, tmp_path):
        px = np.full((200, 200), 20, dtype=np.uint8)
        yy, xx = np.mgrid[:200, :200]
        blob = (yy - 90) ** 2 + (xx - 110) ** 2 <= 30**2
        px[blob] = 210
        save_pgm(GrayImage(px), tmp_path / "blob.pgm")
        n, area = pipeline.run_segment(tmp_path / "blob.pgm", tmp_path / "mask.pgm")
        assert area.white_pixels == int(blob.sum())
        mask = load_image(tmp_path / "mask.pgm")
        assert np.array_equal(mask.pixels == 255, blob)
        again = binarize(mask, otsu_threshold(histogram(mask)))
        assert np.array_equal(again.values.astype(bool), blob)

    def test_segment_constant(self, tmp_path):
        save_pgm(GrayImage(np.full((50, 50), 9, np.uint8)), tmp_path / "c.pgm")
        with pytest.raises(DegenerateHistogramError, match="degenerate histogram"):
            pipeline.run_segment(tmp_path / "c.pgm", tmp_path / "o.pgm")

    def test_corrupt_model(self, tmp_path, small_data):
        bad = tmp_path / "m.json"
        bad.write_text('{"format": "hybridtumor-ensemble", "version": 2}')
        img = next((small_data / "benign").iterdir())
        with pytest.raises(ModelFormatError, match="unsupported model version"):
            pipeline.run_predict(bad, img)


class TestMain:
    def test_gen_train_predict(self, tmp_path, capsys):
        data, model = tmp_path / "d", tmp_path / "m.json"
        assert cli.main(["gen-fixtures", "--out", str(data), "--count", "6", "--seed", "2"]) == 0
        assert cli.main(["train", "--data", str(data), "--model", str(model), "--trees", "5", "--split", "0.5"]) == 0
        out = capsys.readouterr().out
        assert "test" in out and model.exists()
        img = str(sorted((data / "malignant").iterdir())[0])
        assert cli.main(["predict", "--model", str(model), img, "--format", "csv"]) == 0
        rows = list(csv.reader(io.StringIO(capsys.readouterr().out)))
        assert rows[0][:2] == ["path", "label"] and rows[1][1] in ("Benign", "Malignant")

    def test_evaluate_csv(self, small_data, small_model, capsys):
        path, _ = small_model
        assert cli.main(["evaluate", "--data", str(small_data), "--model", str(path), "--format", "csv"]) == 0
        head = capsys.readouterr().out.splitlines()[0]
        assert head == "accuracy,precision,sensitivity,specificity,f1_score,youden_index"

    def test_evaluate_positive_flag(self, small_data, small_model, capsys):
        path, _ = small_model
        args = ["evaluate", "--data", str(small_data), "--model", str(path), "--format", "csv"]
        cli.main(args)
        b = capsys.readouterr().out.splitlines()[1].split(",")
        cli.main(args + ["--positive", "malignant"])
        m = capsys.readouterr().out.splitlines()[1].split(",")
        assert b[0] == m[0] and (b[2], b[3]) == (m[3], m[2])

    def test_features_csv(self, small_data, capsys):
        imgs = [str(p) for p in sorted((small_data / "benign").iterdir())[:2]]
        assert cli.main(["features", *imgs]) == 0
        rows = list(csv.reader(io.StringIO(capsys.readouterr().out)))
        assert rows[0] == ["path", *FEATURE_NAMES] and len(rows) == 3

    def test_segment_cmd(self, small_data, tmp_path, capsys):
        img = str(next((small_data / "malignant").iterdir()))
        assert cli.main(["segment", img, "--out", str(tmp_path / "m.pgm")]) == 0
        assert "otsu threshold" in capsys.readouterr().out

    def test_errors_exit_nonzero(self, tmp_path, capsys):
        (tmp_path / "benign").mkdir()
        rc = cli.main(["train", "--data", str(tmp_path), "--model", str(tmp_path / "m.json")])
        assert rc == 1
        err = capsys.readouterr().err
        assert err.startswith("error:") and "malignant" in err
        bad = tmp_path / "bad.json"
        bad.write_text("not json")
        assert cli.main(["predict", "--model", str(bad), str(bad)]) == 1
        assert "unsupported model version" in capsys.readouterr().err
