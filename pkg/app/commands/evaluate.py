import argparse
import logging
from pathlib import Path

from app.business.pipeline_service import evaluate_task
from app.errors import handle_command_errors
from app.infrastructure.code_store import read_codes
from app.infrastructure.label_io import labels_for
from app.infrastructure.model_store import load_model
from app.infrastructure.report_io import write_json
from app.models.metrics import RelevanceMode, RetrievalTask
from app.schemas.config import config_echo

logger = logging.getLogger(__name__)


def register(subparsers: argparse._SubParsersAction) -> None:
    parser = subparsers.add_parser("eval", help="MAP and hash-lookup precision/recall for one task")
    parser.add_argument("--query-codes", dest="query_codes", type=Path, required=True)
    parser.add_argument("--db-codes", dest="db_codes", type=Path, required=True)
    parser.add_argument("--query-labels", dest="query_labels", type=Path, required=True)
    parser.add_argument("--db-labels", dest="db_labels", type=Path, required=True)
    parser.add_argument("--task", choices=[t.value for t in RetrievalTask], required=True)
    parser.add_argument("--top-r", dest="top_r", type=int, default=None, help="MAP cutoff (default: all)")
    parser.add_argument("--radius", dest="radii", type=int, action="append", default=None,
                        help="PR-curve radius (repeatable; default 0..L)")
    parser.add_argument("--relevance", choices=[m.value for m in RelevanceMode], default=None,
                        help="Relevance predicate (default: inferred from the labels)")
    parser.add_argument("--model", type=Path, default=None, help="Model whose config echo is embedded")
    parser.add_argument("--out", type=Path, required=True, help="Metrics JSON; the curve TSV is written beside it")
    parser.set_defaults(handler=run)


@handle_command_errors
def run(args: argparse.Namespace) -> int:
    if args.model is not None:
        echo = load_model(args.model).echo
    else:
        echo = config_echo("", {"task": args.task, "top_r": args.top_r, "radii": args.radii})

    queries = read_codes(args.query_codes)
    database = read_codes(args.db_codes)
    report = evaluate_task(
        RetrievalTask(args.task),
        queries,
        database,
        labels_for(args.query_labels, queries.ids),
        labels_for(args.db_labels, database.ids),
        top_r=args.top_r,
        radii=args.radii,
        relevance=RelevanceMode(args.relevance) if args.relevance else None,
        echo=echo,
    )
    write_json(args.out, report)
    args.out.with_suffix(".tsv").write_text(report.curve_tsv(), encoding="utf-8")
    print(f"{report.task} MAP@{report.R} = {report.map:.4f}")
    return 0
