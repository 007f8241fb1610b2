"""Exporter acceptance: format conformance plus an end-to-end wiring run
of the drift grid on exported embeddings (run with -s for PASS/FAIL lines).

The full-scale grid (15,000/5,000, five repeats, pretrained BERT on the
real AG-News file) cannot run in this environment; that check is gated on
DOCDRIFT_AGNEWS_CSV and DOCDRIFT_BERT_MODEL pointing at real resources
and is skipped otherwise.
"""

import os
import time

import numpy as np
import pytest

import docdrift
from docdrift.harness import write_train_indices

from docdrift_export import ExportJob, run_export

from conftest import write_toy_csv


def _criterion(name, started, passed, detail=""):
    verdict = "PASS" if passed else "FAIL"
    suffix = f" [{detail}]" if detail else ""
    print(f"{verdict} ({time.monotonic() - started:6.2f}s) — {name}{suffix}")
    assert passed, f"{name}{suffix}"


@pytest.fixture(scope="module")
def grid_corpus(tmp_path_factory):
    """400-doc corpus + the harness's own train split, as in real use."""
    tmp = tmp_path_factory.mktemp("grid")
    csv_path = str(write_toy_csv(tmp / "corpus.csv", {1: 100, 2: 100, 3: 100, 4: 100}, seed=5))
    dataset = docdrift.load_agnews_csv(csv_path)
    splits = docdrift.build_splits(dataset, 120, seed=99)
    idx = tmp / "train.idx"
    write_train_indices(splits, idx)
    return tmp, csv_path, str(idx)


def _roundtrip_lossless(path, tmp_path):
    via_primary, labels = docdrift.read_embeddings(path)
    rewritten = tmp_path / "rt.dlem"
    docdrift.write_embeddings(via_primary, labels, rewritten)
    again, labels2 = docdrift.read_embeddings(rewritten)
    ok = np.array_equal(via_primary, again)
    if labels is not None:
        ok = ok and np.array_equal(labels, labels2)
    return ok, via_primary.shape


def test_format_conformance_doc2vec(grid_corpus, tmp_path):
    t0 = time.monotonic()
    tmp, csv_path, idx = grid_corpus
    ref, cur = tmp / "doc2vec_ref.dlem", tmp / "doc2vec_cur.dlem"
    run_export(
        ExportJob(input_csv=csv_path, model="doc2vec", out_reference=str(ref),
                  out_current=str(cur), train_indices=idx, seed=4),
        log=lambda m: None,
    )
    ok_ref, ref_shape = _roundtrip_lossless(ref, tmp_path)
    ok_cur, cur_shape = _roundtrip_lossless(cur, tmp_path)
    _criterion(
        "Format conformance — Doc2Vec exports round-trip through data-io at d=300",
        t0, ok_ref and ok_cur and ref_shape == (120, 300) and cur_shape == (400, 300),
        f"ref {ref_shape}, corpus {cur_shape}",
    )


def test_format_conformance_bert(grid_corpus, tiny_bert_dir, tmp_path):
    t0 = time.monotonic()
    tmp, csv_path, idx = grid_corpus
    ref, cur = tmp / "bert_ref.dlem", tmp / "bert_cur.dlem"
    run_export(
        ExportJob(input_csv=csv_path, model="bert", out_reference=str(ref),
                  out_current=str(cur), train_indices=idx, model_path=tiny_bert_dir),
        log=lambda m: None,
    )
    ok_ref, ref_shape = _roundtrip_lossless(ref, tmp_path)
    ok_cur, cur_shape = _roundtrip_lossless(cur, tmp_path)
    _criterion(
        "Format conformance — BERT exports round-trip through data-io at d=768",
        t0, ok_ref and ok_cur and ref_shape == (120, 768) and cur_shape == (400, 768),
        f"ref {ref_shape}, corpus {cur_shape}",
    )


@pytest.mark.parametrize("model,use_pca", [("bert", True), ("doc2vec", False)])
def test_toy_grid_wiring(grid_corpus, tiny_bert_dir, model, use_pca):
    t0 = time.monotonic()
    tmp, csv_path, idx = grid_corpus
    ref, cur = tmp / f"{model}_ref.dlem", tmp / f"{model}_cur.dlem"
    if not ref.exists():  # produced by the conformance tests above
        run_export(
            ExportJob(input_csv=csv_path, model=model, out_reference=str(ref),
                      out_current=str(cur), train_indices=idx, seed=4,
                      model_path=tiny_bert_dir),
            log=lambda m: None,
        )
    spec = docdrift.ExperimentSpec(
        dataset=csv_path,
        pipeline="external-embeddings",
        use_pca=use_pca,
        pca_components=20,
        reference_embeddings=str(ref),
        corpus_embeddings=str(cur),
        train_size=120,
        test_size=60,
        drift_levels=[0.0, 1.0],
        repeats=2,
        master_seed=99,
        permutations=30,
        label=model,
    )
    report = docdrift.run_experiment(spec)
    by = {(r.detector, r.drift_level): r for r in report.rows}
    ok = (
        not report.errors
        and by[("ks", 1.0)].significant
        and by[("mmd", 1.0)].significant
        and not by[("ks", 0.0)].significant
        and all(r.n_repeats == 2 for r in report.rows)
    )
    detail = ", ".join(
        f"{d}@{lvl:g}: p={by[(d, lvl)].mean_p:.3f}" for d in ("ks", "mmd") for lvl in (0.0, 1.0)
    )
    _criterion(
        f"Grid wiring — {model}{'-pca' if use_pca else ''} exports drive the drift grid",
        t0, ok, detail,
    )


@pytest.mark.skipif(
    not (os.environ.get("DOCDRIFT_AGNEWS_CSV") and os.environ.get("DOCDRIFT_BERT_MODEL")),
    reason="full-scale grid needs the real AG-News CSV and a pretrained BERT "
    "checkpoint (set DOCDRIFT_AGNEWS_CSV and DOCDRIFT_BERT_MODEL)",
)
def test_full_scale_sign_pattern(tmp_path):
    """Full-scale sign pattern: every nonzero level significant for both
    detectors and both models, level 0 non-significant for KS."""
    t0 = time.monotonic()
    csv_path = os.environ["DOCDRIFT_AGNEWS_CSV"]
    dataset = docdrift.load_agnews_csv(csv_path)
    splits = docdrift.build_splits(dataset, 15_000, seed=7)
    idx = tmp_path / "train.idx"
    write_train_indices(splits, idx)
    results = {}
    for model in ("doc2vec", "bert"):
        ref, cur = tmp_path / f"{model}_ref.dlem", tmp_path / f"{model}_cur.dlem"
        run_export(
            ExportJob(input_csv=csv_path, model=model, out_reference=str(ref),
                      out_current=str(cur), train_indices=str(idx), seed=7,
                      model_path=os.environ["DOCDRIFT_BERT_MODEL"]),
        )
        spec = docdrift.ExperimentSpec(
            dataset=csv_path,
            pipeline="external-embeddings",
            reference_embeddings=str(ref),
            corpus_embeddings=str(cur),
            train_size=15_000,
            test_size=5_000,
            repeats=5,
            master_seed=7,
            label=model,
        )
        results[model] = {
            (r.detector, r.drift_level): r for r in docdrift.run_experiment(spec).rows
        }
    ok = True
    for model, by in results.items():
        for det in ("ks", "mmd"):
            for level in (0.10, 0.25, 0.50, 0.75, 1.0):
                ok = ok and by[(det, level)].significant
        ok = ok and not by[("ks", 0.0)].significant
    _criterion("Full-scale sign pattern (Doc2Vec + BERT, 15k/5k, 5 repeats)", t0, ok)
