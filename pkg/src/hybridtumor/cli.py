"""Command-line front end.

Usage examples::

    hybridtumor gen-fixtures --out data --count 40 --seed 11
    hybridtumor train --data data --model model.json --seed 11 --split 0.85
    hybridtumor evaluate --data data --model model.json --split 0.85 --seed 11
    hybridtumor predict --model model.json data/malignant/malignant_0000.pgm
    hybridtumor segment data/benign/benign_0000.pgm --out mask.pgm
    hybridtumor features data/benign/*.pgm --format csv
"""

from __future__ import annotations

import argparse
import csv
import io
import logging
import sys
from pathlib import Path

from . import __version__
from .classifiers import Label
from .errors import PipelineError
from .evaluation import METRIC_COLUMNS
from .features import FEATURE_NAMES, PipelineConfig, extract_features
from .imaging import load_image, standardize
from . import pipeline


def _pipeline_config(args) -> PipelineConfig:
    return PipelineConfig(
        wavelet=args.wavelet,
        pca_k=args.pca_k,
        glcm_levels=args.glcm_levels,
    )


def _emit(text: str, out=None):
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _csv(rows) -> str:
    buf = io.StringIO()
    csv.writer(buf, lineterminator="\n").writerows(rows)
    return buf.getvalue()


def _evaluation_text(title, ev) -> str:
    lines = [f"== {title} ({ev.n} samples) ==", ev.confusion.as_table(), "", ev.metrics.to_text()]
    lines.append("member accuracy: " + ", ".join(f"{m} {a:.4f}" for m, a in ev.member_accuracy.items()))
    return "\n".join(lines) + "\n"


def _evaluation_rows(name, ev):
    return [
        name,
        ev.n,
        ev.confusion.tp,
        ev.confusion.fn,
        ev.confusion.fp,
        ev.confusion.tn,
        *(repr(getattr(ev.metrics, c)) for c in METRIC_COLUMNS),
        *(repr(ev.member_accuracy[m]) for m in ("knn", "forest", "tree")),
    ]


EVAL_HEADER = ["split", "n", "tp", "fn", "fp", "tn", *METRIC_COLUMNS, "knn_accuracy", "forest_accuracy", "tree_accuracy"]


def cmd_train(args):
    cfg = pipeline.RunConfig(
        data=Path(args.data),
        model=Path(args.model),
        seed=args.seed,
        split=args.split,
        pipeline=_pipeline_config(args),
        n_trees=args.trees,
        k=args.k,
        jobs=args.jobs,
        augment=args.augment,
        positive=Label.parse(args.positive),
    )
    rep = pipeline.run_train(cfg)
    for path, err in rep.skipped:
        print(f"skipped {path}: {err}", file=sys.stderr)
    if args.format == "csv":
        text = _csv([EVAL_HEADER, _evaluation_rows("train", rep.train), _evaluation_rows("test", rep.test)])
    else:
        text = (
            f"model written to {args.model}\n"
            f"images: {rep.n_train} train / {rep.n_test} test "
            f"({rep.n_train_samples} training samples), {len(rep.skipped)} skipped\n\n"
            + _evaluation_text("train", rep.train)
            + "\n"
            + _evaluation_text("test", rep.test)
        )
    _emit(text, args.out)


def cmd_evaluate(args):
    ev, skipped = pipeline.run_evaluate(
        args.model, args.data, split=args.split, seed=args.seed, jobs=args.jobs, positive=Label.parse(args.positive)
    )
    for path, err in skipped:
        print(f"skipped {path}: {err}", file=sys.stderr)
    if args.format == "csv":
        text = ev.metrics.to_csv()
    else:
        text = _evaluation_text("evaluation", ev)
    _emit(text, args.out)


def cmd_predict(args):
    res = pipeline.run_predict(args.model, args.image)
    if args.format == "csv":
        header = ["path", "label", "knn", "forest", "tree", *FEATURE_NAMES, "threshold", "white_pixels", "area_mm2"]
        row = [
            args.image,
            str(res.label),
            *(str(res.votes[m]) for m in ("knn", "forest", "tree")),
            *(repr(getattr(res.features, n)) for n in FEATURE_NAMES),
            res.threshold,
            res.white_pixels,
            repr(res.area_mm2),
        ]
        text = _csv([header, row])
    else:
        lines = [
            f"label: {res.label}",
            "votes: " + ", ".join(f"{m}={v}" for m, v in res.votes.items()),
            "features:",
            *(f"  {n:<12}{getattr(res.features, n):.6g}" for n in FEATURE_NAMES),
            f"otsu threshold: {res.threshold}",
            f"white pixels P: {res.white_pixels}",
            f"area (sqrt(P) * 0.264): {res.area_mm2:.4f} mm^2",
        ]
        text = "\n".join(lines) + "\n"
    _emit(text, args.out)


def cmd_segment(args):
    n, area = pipeline.run_segment(args.image, args.out)
    if args.format == "csv":
        sys.stdout.write(_csv([["path", "threshold", "white_pixels", "area_mm2"], [args.image, n, area.white_pixels, repr(area.area_mm2)]]))
    else:
        print(f"mask written to {args.out}")
        print(f"otsu threshold: {n}")
        print(f"white pixels P: {area.white_pixels}")
        print(f"area (sqrt(P) * 0.264): {area.area_mm2:.4f} mm^2")


def cmd_features(args):
    cfg = _pipeline_config(args)
    rows = [["path", *FEATURE_NAMES]]
    for path in args.images:
        fv = extract_features(standardize(load_image(path)), cfg)
        rows.append([path, *(repr(getattr(fv, n)) for n in FEATURE_NAMES)])
    if args.format == "csv":
        text = _csv(rows)
    else:
        text = ""
        for row in rows[1:]:
            text += row[0] + "\n" + "".join(f"  {n:<12}{float(v):.6g}\n" for n, v in zip(FEATURE_NAMES, row[1:]))
    _emit(text, args.out)


def cmd_gen_fixtures(args):
    written = pipeline.generate_dataset(args.out, args.count, args.seed)
    print(f"wrote {len(written)} images under {args.out}")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hybridtumor",
        description="Otsu segmentation, SWT/PCA/GLCM features and a KNN-RF-DT voting ensemble.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    def positive(p):
        p.add_argument(
            "--positive", choices=("benign", "malignant"), default="benign", help="positive class for the metrics"
        )

    def common(p, fmt=True, out=True):
        if fmt:
            p.add_argument("--format", choices=("text", "csv"), default="text")
        if out:
            p.add_argument("--out", help="write the report to this file instead of stdout")

    def feature_opts(p):
        p.add_argument("--pca-k", type=int, default=13, help="principal components kept (default 13)")
        p.add_argument("--glcm-levels", type=int, default=8, help="gray levels for the GLCM (default 8)")
        p.add_argument("--wavelet", default="haar", choices=("haar", "db1", "db2"))

    p = sub.add_parser("train", help="extract features, train the ensemble, report metrics")
    p.add_argument("--data", required=True, help="dataset root with benign/ and malignant/")
    p.add_argument("--model", required=True, help="output model file (JSON)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--split", type=float, default=0.85, help="training fraction per class (default 0.85)")
    p.add_argument("--trees", type=int, default=100)
    p.add_argument("--k", type=int, default=1, help="KNN neighbours (default 1)")
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--augment", action="store_true", help="add flipped/rotated copies of training images")
    feature_opts(p)
    positive(p)
    common(p)
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("evaluate", help="score a saved model on a dataset")
    p.add_argument("--data", required=True)
    p.add_argument("--model", required=True)
    p.add_argument("--split", type=float, default=None, help="evaluate only the held-out part of this split")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--jobs", type=int, default=1)
    positive(p)
    common(p)
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("predict", help="classify one image and measure its segmented area")
    p.add_argument("--model", required=True)
    p.add_argument("image")
    common(p)
    p.set_defaults(func=cmd_predict)

    p = sub.add_parser("segment", help="Otsu mask (PGM, 255 = foreground) and area")
    p.add_argument("image")
    p.add_argument("--out", required=True, help="mask output path (PGM)")
    common(p, out=False)
    p.set_defaults(func=cmd_segment)

    p = sub.add_parser("features", help="print the 13 features of each image")
    p.add_argument("images", nargs="+")
    feature_opts(p)
    common(p)
    p.set_defaults(func=cmd_features, format="csv")

    p = sub.add_parser("gen-fixtures", help="write a synthetic two-class dataset")
    p.add_argument("--out", required=True)
    p.add_argument("--count", type=int, default=40, help="images per class")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_gen_fixtures)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.ERROR, format="%(levelname)s %(message)s")
    try:
        args.func(args)
    except (PipelineError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
