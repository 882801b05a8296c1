"""Pipeline stages.

Each command reads the previous stage's artifacts and writes its own directory.
"""

import logging
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd

from src.common.artifacts import (
    read_json,
    require_file,
    save_arrays,
    write_json,
    write_table,
)
from src.common.config import RunConfig
from src.common.errors import ConfigError, StageInputError
from src.common.manifest import RunManifest, verify_output
from src.corpus.collocations import CollocationTable
from src.corpus.documents import Document, load_corpus, load_lemma_table, write_corpus
from src.corpus.dtm import SparseDtm, Vocabulary, vocabulary_report
from src.corpus.pipeline import preprocess_corpus
from src.covariates.design import (
    DesignMatrix,
    align_documents,
    build_design_matrix,
    load_design,
    save_design,
)
from src.covariates.splines import SplineSpec, make_spline_spec
from src.effects import (
    effect_report,
    estimate_effects,
    journal_topic_extremes,
    model_journal_tc,
    model_journal_topic_trend,
    model_team,
    model_trend,
    model_yearly,
    resolve_base_year,
    team_extremes,
    trend_summary,
    yearly_table,
)
from src.scientometrics import (
    GroupBy,
    aggregate_theta,
    default_labels,
    descriptive_stats,
    extreme_topics,
    journal_network,
    label_table,
    tc_linear_trend,
    top_documents,
    topic_network,
    topic_prevalence_table,
    word_set_contrast,
    yearly_concentration,
)
from src.selection import selection_frame, sweep_k
from src.stm import (
    fit,
    load_model,
    load_posteriors,
    retained_theta,
    save_model,
    save_posteriors,
    simulate_study,
    theta_matrix,
)

logger = logging.getLogger(__name__)

PREPROCESS, FIT, SELECT = "preprocess", "fit", "select"
ANALYZE, SIMULATE = "analyze", "simulate"


def _open_stage(config: RunConfig, stage: str) -> Tuple[Path, RunManifest]:
    stage_dir = config.stage_dir(stage)
    stage_dir.mkdir(parents=True, exist_ok=True)
    config_hash = config.config_hash()
    logger.info(
        f"[{stage}] writing to {stage_dir} "
        f"(config {config_hash[:12]}, seed {config.seed})"
    )
    return stage_dir, RunManifest(stage, stage_dir, config_hash, config.seed)


def _record(manifest: RunManifest, paths: Sequence[Path]) -> None:
    for path in paths:
        manifest.record_artifact(path)


def _theta_frame(
    theta: np.ndarray, doc_ids: Sequence[str], labels: Sequence[str]
) -> pd.DataFrame:
    frame = pd.DataFrame(theta, columns=list(labels))
    frame.insert(0, "doc_id", list(doc_ids))
    return frame


def write_corpus_artifacts(
    stage_dir: Path,
    manifest: RunManifest,
    config_hash: str,
    vocabulary: Vocabulary,
    dtm: SparseDtm,
    design: DesignMatrix,
    report: Dict[str, Any],
    collocations: Optional[CollocationTable] = None,
) -> None:
    """Write vocabulary, count matrix, design and report of a processed corpus."""
    paths: List[Path] = [vocabulary.save(stage_dir / "vocabulary.txt", config_hash)]
    paths += dtm.save(stage_dir, config_hash)
    paths.append(save_design(design, stage_dir / "design.csv", config_hash))
    paths.append(
        write_json(
            {"spline": design.spline_spec.to_dict(), "journals": design.journals},
            stage_dir / "design.json",
            config_hash,
        )
    )
    paths.append(
        write_table(
            vocabulary_report(vocabulary, dtm),
            stage_dir / "vocabulary_report.csv",
            config_hash,
        )
    )
    if collocations is not None:
        frame = pd.DataFrame(
            {
                "phrase": [c.joined for c in collocations.phrases],
                "n_words": [len(c.words) for c in collocations.phrases],
                "count": [c.count for c in collocations.phrases],
                "detector": [c.detector.value for c in collocations.phrases],
            }
        )
        paths.append(write_table(frame, stage_dir / "collocations.csv", config_hash))
    paths.append(write_json(report, stage_dir / "report.json", config_hash))
    _record(manifest, paths)


def load_corpus_artifacts(
    config: RunConfig,
) -> Tuple[Vocabulary, SparseDtm, DesignMatrix]:
    """Read the preprocess stage outputs.

    Raises:
        StageInputError: If an artifact is missing or the pieces disagree.
    """
    stage_dir = config.stage_dir(PREPROCESS)
    vocabulary = Vocabulary.load(require_file(stage_dir / "vocabulary.txt"))
    dtm = SparseDtm.load(stage_dir)
    meta = read_json(stage_dir / "design.json")
    design = load_design(
        require_file(stage_dir / "design.csv"),
        SplineSpec.from_dict(meta["spline"]),
        meta["journals"],
    )
    if dtm.n_tokens != len(vocabulary):
        raise StageInputError(
            f"{stage_dir}: matrix has {dtm.n_tokens} columns "
            f"for {len(vocabulary)} tokens"
        )
    if design.doc_ids != dtm.doc_ids:
        raise StageInputError(
            f"{stage_dir}: design rows are not aligned with the matrix rows"
        )
    return vocabulary, dtm, design


def _corpus_path(config: RunConfig) -> Path:
    if config.paths.corpus:
        return Path(config.paths.corpus)
    simulated = config.stage_dir(SIMULATE) / "corpus.jsonl"
    if simulated.is_file():
        return simulated
    raise ConfigError("paths.corpus is not set and no simulated corpus exists")


def cmd_preprocess(config: RunConfig) -> Path:
    """Corpus file to vocabulary, count matrix, design rows and report."""
    documents = load_corpus(_corpus_path(config))
    lemma_table = load_lemma_table(config.paths.lemma_table)
    stage_dir, manifest = _open_stage(config, PREPROCESS)

    with manifest.timer("text"):
        result = preprocess_corpus(
            documents, lemma_table, config.preprocess, config.workers
        )
    with manifest.timer("design"):
        kept = align_documents(documents, result.dtm.doc_ids)
        spline = config.design.spline
        spec = make_spline_spec(
            [d.year for d in kept], degree=spline.degree, df=spline.df
        )
        design = build_design_matrix(kept, spec, config.design.journals)

    write_corpus_artifacts(
        stage_dir,
        manifest,
        config.config_hash(),
        result.vocabulary,
        result.dtm,
        design,
        result.report.to_dict(),
        result.collocations,
    )
    manifest.update_status(
        "completed",
        {
            "n_documents": result.dtm.n_docs,
            "vocabulary_size": len(result.vocabulary),
            "nnz": int(result.dtm.matrix.nnz),
        },
    )
    return manifest.write()


def cmd_fit(config: RunConfig) -> Path:
    """Fit the topic model on the preprocessed corpus."""
    _, dtm, design = load_corpus_artifacts(config)
    stage_dir, manifest = _open_stage(config, FIT)
    h = config.config_hash()

    with manifest.timer("vem"):
        result = fit(
            dtm, design, config.fit.n_topics, config.fit, config.seed, config.workers
        )

    summary = {
        "n_topics": config.fit.n_topics,
        "converged": result.converged,
        "n_iterations": result.n_iterations,
        "rejected_document_updates": result.rejected_document_updates,
        "final_bound": result.bound_trace[-1],
    }
    labels = default_labels(config.fit.n_topics)
    trace = pd.DataFrame(
        {
            "iteration": np.arange(1, len(result.bound_trace) + 1),
            "bound": result.bound_trace,
        }
    )
    theta = _theta_frame(theta_matrix(result.posteriors), dtm.doc_ids, labels)
    paths = [
        save_model(
            result.model,
            stage_dir / "model.bin",
            h,
            config.fit.model_dump(mode="json"),
            summary,
        ),
        save_posteriors(
            result.posteriors, dtm.doc_ids, stage_dir / "posteriors.bin", h
        ),
        write_table(trace, stage_dir / "bound_trace.csv", h),
        write_table(theta, stage_dir / "theta.csv", h),
        write_json(summary, stage_dir / "fit.json", h),
    ]
    _record(manifest, paths)
    manifest.update_status("completed", summary)
    return manifest.write()


def cmd_select(config: RunConfig) -> Path:
    """Sweep topic counts and tabulate coherence and exclusivity."""
    _, dtm, design = load_corpus_artifacts(config)
    stage_dir, manifest = _open_stage(config, SELECT)

    with manifest.timer("sweep"):
        points = sweep_k(
            dtm,
            design,
            config.selection.k_values,
            config.fit,
            config.selection,
            config.seed,
            config.workers,
        )

    frame = selection_frame(points)
    _record(
        manifest,
        [write_table(frame, stage_dir / "selection.csv", config.config_hash())],
    )
    failed = [p.k for p in points if p.status != "ok"]
    manifest.update_status(
        "completed",
        {"k_values": list(config.selection.k_values), "failed_k": failed},
    )
    return manifest.write()


def _topic_labels(config: RunConfig, n_topics: int) -> List[str]:
    labels = config.analysis.topic_labels
    if labels is None:
        return default_labels(n_topics)
    if len(labels) != n_topics:
        raise ConfigError(
            f"analysis.topic_labels has {len(labels)} entries for {n_topics} topics"
        )
    return list(labels)


def _analyze_descriptive(
    stage_dir: Path, h: str, documents: Sequence[Document]
) -> List[Path]:
    stats = descriptive_stats(documents)
    return [
        write_table(
            stats.journal_year, stage_dir / "descriptive_journal_year.csv", h
        ),
        write_table(stats.yearly, stage_dir / "descriptive_yearly.csv", h),
        write_table(stats.journals, stage_dir / "descriptive_journals.csv", h),
        write_json(stats.growth_summary, stage_dir / "growth_summary.json", h),
    ]


def _analyze_prevalence(
    stage_dir: Path,
    h: str,
    config: RunConfig,
    theta: np.ndarray,
    documents: Sequence[Document],
    labels: List[str],
) -> Tuple[List[Path], Dict[str, Any]]:
    paths, flags = [], {}
    ranked = topic_prevalence_table(theta, labels)
    paths.append(write_table(ranked, stage_dir / "topic_prevalence.csv", h))
    units = (
        (GroupBy.YEAR, "year"),
        (GroupBy.JOURNAL, "journal"),
        (GroupBy.JOURNAL_YEAR, "journal_year"),
    )
    for group_by, stem in units:
        table = aggregate_theta(theta, documents, group_by)
        frame = table.to_frame(labels, percent=True)
        paths.append(write_table(frame, stage_dir / f"prevalence_{stem}.csv", h))
        if group_by != GroupBy.JOURNAL_YEAR:
            extremes = extreme_topics(table, labels)
            paths.append(write_table(extremes, stage_dir / f"extremes_{stem}.csv", h))

    yearly = yearly_concentration(theta, documents, config.analysis.tc_per_article)
    paths.append(write_table(yearly, stage_dir / "tc_year.csv", h))
    if len(yearly) >= 3:
        paths.append(
            write_json(tc_linear_trend(yearly), stage_dir / "tc_trend.json", h)
        )
    else:
        flags["tc_trend"] = f"{len(yearly)} years, trend skipped"
    return paths, flags


def _analyze_networks(
    stage_dir: Path,
    h: str,
    config: RunConfig,
    theta: np.ndarray,
    documents: Sequence[Document],
    labels: List[str],
) -> Tuple[List[Path], Dict[str, Any]]:
    analysis = config.analysis
    threshold, absolute = analysis.network_threshold, analysis.absolute_correlation
    topics = topic_network(theta, labels, threshold, absolute)
    journals = journal_network(theta, documents, threshold, absolute)
    paths = topics.save(stage_dir, "topic_network", h)
    paths += journals.save(stage_dir, "journal_network", h)
    flags = {}
    if topics.undefined:
        flags["topic_network_undefined"] = topics.undefined
    if journals.undefined:
        flags["journal_network_undefined"] = journals.undefined
    return paths, flags


def _analyze_effects(
    stage_dir: Path,
    h: str,
    config: RunConfig,
    posteriors: Sequence[Any],
    documents: Sequence[Document],
    topics: Sequence[int],
    labels: List[str],
) -> Tuple[List[Path], Dict[str, Any]]:
    analysis = config.analysis
    base = resolve_base_year(documents, analysis.base_year)
    n, seed, workers = analysis.n_compositions, config.seed, config.workers
    paths: List[Path] = []
    flags: Dict[str, Any] = {"base_year": base}

    def estimate(specs: Sequence[Any]) -> List[Any]:
        return estimate_effects(posteriors, specs, n, seed, workers)

    trend = estimate([model_trend(documents, k, base) for k in topics])
    paths.append(write_table(effect_report(trend), stage_dir / "effects_trend.csv", h))
    paths.append(write_json(trend_summary(trend), stage_dir / "trend_summary.json", h))

    yearly = estimate([model_yearly(documents, k, base) for k in topics])
    paths.append(
        write_table(effect_report(yearly), stage_dir / "effects_yearly.csv", h)
    )
    paths.append(
        write_table(yearly_table(yearly, labels), stage_dir / "yearly_heatmap.csv", h)
    )
    flags["yearly"] = yearly[0].flags if yearly else []

    tc_specs, skipped = model_journal_tc(documents, base, analysis.tc_per_article)
    journal_tc = estimate(tc_specs)
    paths.append(
        write_table(effect_report(journal_tc), stage_dir / "effects_journal_tc.csv", h)
    )
    flags["journal_tc_skipped"] = skipped

    journal_topic = estimate(
        [model_journal_topic_trend(documents, k, base) for k in topics]
    )
    paths.append(
        write_table(
            effect_report(journal_topic), stage_dir / "effects_journal_topic.csv", h
        )
    )
    extremes = journal_topic_extremes(journal_topic, 2, labels)
    paths.append(write_table(extremes, stage_dir / "journal_topic_extremes.csv", h))
    flags["journal_topic"] = journal_topic[0].flags if journal_topic else []

    team = estimate([model_team(documents, k, base) for k in topics])
    paths.append(write_table(effect_report(team), stage_dir / "effects_team.csv", h))
    paths.append(
        write_table(
            team_extremes(team, analysis.team_extremes, labels),
            stage_dir / "team_extremes.csv",
            h,
        )
    )
    flags["team"] = team[0].flags if team else []
    return paths, flags


def cmd_analyze(config: RunConfig) -> Path:
    """Descriptive tables, prevalence tables, labels, networks and effect models."""
    vocabulary, dtm, _ = load_corpus_artifacts(config)
    fit_dir = config.stage_dir(FIT)
    model, _ = load_model(require_file(fit_dir / "model.bin"))
    posteriors, doc_ids = load_posteriors(require_file(fit_dir / "posteriors.bin"))
    if doc_ids != dtm.doc_ids:
        raise StageInputError(
            f"{fit_dir}: posteriors do not match the preprocessed matrix rows"
        )
    if model.vocab_size != len(vocabulary):
        raise StageInputError(
            f"{fit_dir}: model vocabulary size {model.vocab_size} "
            f"!= {len(vocabulary)}"
        )
    documents = align_documents(load_corpus(_corpus_path(config)), doc_ids)

    analysis = config.analysis
    stage_dir, manifest = _open_stage(config, ANALYZE)
    h = config.config_hash()
    labels = _topic_labels(config, model.n_topics)
    discarded = sorted(set(analysis.discarded_topics))
    if any(not 0 <= k < model.n_topics for k in discarded):
        raise ConfigError(
            f"analysis.discarded_topics {discarded} "
            f"outside 0..{model.n_topics - 1}"
        )
    retained = [k for k in range(model.n_topics) if k not in discarded]
    theta = retained_theta(
        theta_matrix(posteriors), discarded, analysis.renormalize_retained
    )
    retained_labels = [labels[k] for k in retained]
    flags: Dict[str, Any] = {"discarded_topics": discarded}
    paths: List[Path] = []

    with manifest.timer("descriptive"):
        paths += _analyze_descriptive(stage_dir, h, documents)

    with manifest.timer("labels"):
        frex_weight = config.selection.frex_weight
        paths.append(
            write_table(
                label_table(model, vocabulary, analysis.top_m, frex_weight, labels),
                stage_dir / "labels.csv",
                h,
            )
        )
        full_theta = theta_matrix(posteriors)
        rows = []
        for k in retained:
            top = top_documents(full_theta, doc_ids, k, analysis.top_documents)
            ranked = enumerate(zip(top.items, top.scores), start=1)
            for rank, (doc_id, value) in ranked:
                rows.append(
                    {
                        "topic": k,
                        "label": labels[k],
                        "rank": rank,
                        "doc_id": doc_id,
                        "prevalence": value,
                    }
                )
        paths.append(
            write_table(
                pd.DataFrame(
                    rows, columns=["topic", "label", "rank", "doc_id", "prevalence"]
                ),
                stage_dir / "top_documents.csv",
                h,
            )
        )
        if analysis.word_set_positive or analysis.word_set_negative:
            contrast = word_set_contrast(
                model,
                vocabulary,
                analysis.word_set_positive,
                analysis.word_set_negative,
                labels,
            )
            paths.append(write_table(contrast, stage_dir / "word_set_contrast.csv", h))

    with manifest.timer("prevalence"):
        new_paths, new_flags = _analyze_prevalence(
            stage_dir, h, config, theta, documents, retained_labels
        )
        paths += new_paths
        flags.update(new_flags)

    with manifest.timer("networks"):
        new_paths, new_flags = _analyze_networks(
            stage_dir, h, config, theta, documents, retained_labels
        )
        paths += new_paths
        flags.update(new_flags)

    topics = analysis.topics if analysis.topics is not None else retained
    with manifest.timer("effects"):
        new_paths, new_flags = _analyze_effects(
            stage_dir, h, config, posteriors, documents, topics, labels
        )
        paths += new_paths
        flags.update(new_flags)

    paths.append(write_json(flags, stage_dir / "flags.json", h))
    _record(manifest, paths)
    manifest.update_status(
        "completed", {"n_topics": model.n_topics, "retained_topics": retained}
    )
    return manifest.write()


def cmd_simulate(config: RunConfig) -> Path:
    """Draw a synthetic corpus with known parameters.

    Writes the corpus and the truths to the simulate stage, and the count
    matrix and design to the preprocess stage so that fit can run directly.
    """
    h = config.config_hash()
    stage_dir, manifest = _open_stage(config, SIMULATE)
    spline = config.design.spline
    with manifest.timer("simulate"):
        study = simulate_study(
            config.simulation, config.seed, spline.degree, spline.df
        )

    meta = {
        "n_topics": study.model.n_topics,
        "word_columns": study.word_columns.tolist(),
    }
    truths = {
        "truth_theta.bin": {"theta": study.theta, "z_counts": study.z_counts},
        "truth_beta.bin": {
            "beta": study.observed_beta,
            "beta_full": study.model.beta,
        },
        "truth_gamma.bin": {"gamma": study.model.gamma, "sigma": study.model.sigma},
    }
    paths = [write_corpus(study.documents, stage_dir / "corpus.jsonl", h)]
    paths += [
        save_arrays(stage_dir / name, arrays, h, meta)
        for name, arrays in truths.items()
    ]
    _record(manifest, paths)
    manifest.update_status(
        "completed",
        {
            "n_documents": study.dtm.n_docs,
            "vocabulary_size": len(study.vocabulary),
        },
    )
    path = manifest.write()

    pre_dir, pre_manifest = _open_stage(config, PREPROCESS)
    doc_frequency = np.diff(study.dtm.matrix.tocsc().indptr)
    vocabulary = Vocabulary(
        tuple(study.vocabulary), tuple(int(x) for x in doc_frequency)
    )
    report = {
        "source": "simulate",
        "n_documents_out": study.dtm.n_docs,
        "vocabulary_size": len(vocabulary),
    }
    write_corpus_artifacts(
        pre_dir, pre_manifest, h, vocabulary, study.dtm, study.design, report
    )
    pre_manifest.update_status("completed", report)
    pre_manifest.write()
    return path


def cmd_verify(out_dir: Path) -> Dict[str, List[str]]:
    """Re-check every stage manifest under an output directory."""
    results = verify_output(out_dir)
    if not results:
        logger.warning(f"No stage manifests under {out_dir}")
    for stage, problems in results.items():
        for problem in problems:
            logger.error(f"[{stage}] {problem}")
        if not problems:
            logger.info(f"[{stage}] verified")
    return results
