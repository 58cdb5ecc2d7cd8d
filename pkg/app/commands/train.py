import argparse
import logging
from pathlib import Path
from typing import List

from app.business.index_service import build_index
from app.business.pipeline_service import align_pairs, encode_sets, evaluate_task, fit_pipeline
from app.errors import handle_command_errors
from app.infrastructure.code_store import write_codes
from app.infrastructure.config_loader import load_run_config
from app.infrastructure.descriptor_io import read_descriptor_file, write_dictionary_csv
from app.infrastructure.label_io import labels_for
from app.infrastructure.model_store import save_model
from app.infrastructure.report_io import write_json
from app.models.kernel import Modality
from app.schemas.config import config_echo
from app.schemas.reports import MetricsReport, TrainingReport

logger = logging.getLogger(__name__)

MODEL_FILE = "model.mfdh"
REPORT_FILE = "training_report.json"


def register(subparsers: argparse._SubParsersAction) -> None:
    parser = subparsers.add_parser("train", help="Learn dictionaries, anchors and binary codes from a run config")
    parser.add_argument("--config", type=Path, required=True, help="JSON run configuration")
    parser.add_argument("--seed", type=int, default=None, help="Override the config seed")
    parser.add_argument("--out", type=Path, default=None, help="Override paths.output_dir")
    parser.add_argument("--top-r", dest="top_r", type=int, default=None, help="MAP cutoff for query evaluation")
    parser.add_argument("--radius", dest="radii", type=int, action="append", default=None,
                        help="Hamming radius for the PR curve (repeatable; default 0..L)")
    parser.set_defaults(handler=run)


@handle_command_errors
def run(args: argparse.Namespace) -> int:
    overrides = {"seed": args.seed, "top_r": args.top_r, "radii": args.radii}
    config, text = load_run_config(args.config, overrides)
    echo = config_echo(text, overrides)
    out_dir = Path(args.out) if args.out is not None else config.paths.output_dir

    _, image_sets = read_descriptor_file(config.paths.image_descriptors)
    _, text_sets = read_descriptor_file(config.paths.text_descriptors)
    image_sets, text_sets = align_pairs(image_sets, text_sets, str(config.paths.text_descriptors))
    ids = [s.sample_id for s in image_sets]
    labels = labels_for(config.paths.labels, ids)

    fit = fit_pipeline(image_sets, text_sets, labels, config, echo)
    model, state = fit.model, fit.model.state
    save_model(out_dir / MODEL_FILE, model)
    write_dictionary_csv(out_dir / "image_dictionary.csv", model.image_dictionary)
    write_dictionary_csv(out_dir / "text_dictionary.csv", model.text_dictionary)

    databases = {
        Modality.IMAGE: encode_sets(model, image_sets, Modality.IMAGE),
        Modality.TEXT: encode_sets(model, text_sets, Modality.TEXT),
    }
    write_codes(out_dir / "train_image.codes", databases[Modality.IMAGE])
    write_codes(out_dir / "train_text.codes", databases[Modality.TEXT])
    write_codes(out_dir / "train_B.codes", build_index(state.B.T, ids))

    evaluations: List[MetricsReport] = []
    paths = config.paths
    if paths.query_image_descriptors and paths.query_text_descriptors and paths.query_labels:
        _, query_image = read_descriptor_file(paths.query_image_descriptors)
        _, query_text = read_descriptor_file(paths.query_text_descriptors)
        query_image, query_text = align_pairs(query_image, query_text, str(paths.query_text_descriptors))
        query_labels = labels_for(paths.query_labels, [s.sample_id for s in query_image])
        queries = {
            Modality.IMAGE: encode_sets(model, query_image, Modality.IMAGE),
            Modality.TEXT: encode_sets(model, query_text, Modality.TEXT),
        }
        write_codes(out_dir / "query_image.codes", queries[Modality.IMAGE])
        write_codes(out_dir / "query_text.codes", queries[Modality.TEXT])

        for task in config.evaluation.tasks:
            metrics = evaluate_task(
                task,
                queries[task.query_modality],
                databases[task.database_modality],
                query_labels,
                labels,
                top_r=config.evaluation.top_r,
                radii=config.evaluation.radii,
                relevance=config.evaluation.relevance,
                echo=echo,
            )
            write_json(out_dir / f"metrics_{task.value}.json", metrics)
            (out_dir / f"metrics_{task.value}.tsv").write_text(metrics.curve_tsv(), encoding="utf-8")
            evaluations.append(metrics)

    trace = list(state.objective_trace)
    report = TrainingReport(
        objective_trace=trace,
        iterations=state.iterations,
        converged=state.converged,
        wall_time_seconds=state.wall_time,
        n_samples=state.n_samples,
        code_length=state.code_length,
        n_classes=state.n_classes,
        anchor_sizes=state.image_anchors.sizes,
        final_terms=fit.final_terms,
        ridge_used=max(fit.ridge.values()) or None,
        evaluation=evaluations,
        config_echo=echo,
    )
    write_json(out_dir / REPORT_FILE, report)
    logger.info("Training run complete", extra={
        "out_dir": str(out_dir), "iterations": state.iterations, "objective": trace[-1],
    })
    return 0
