import argparse
import logging
from pathlib import Path
from typing import Iterator, Optional, Tuple

from app.business.index_service import rank_positions
from app.errors import ErrorMessages, InvalidArgumentError, handle_command_errors
from app.infrastructure.code_store import read_codes
from app.infrastructure.report_io import write_tsv
from app.models.codes import HammingIndex

logger = logging.getLogger(__name__)


def register(subparsers: argparse._SubParsersAction) -> None:
    parser = subparsers.add_parser("search", help="Rank or radius-search a code database")
    parser.add_argument("--query-codes", dest="query_codes", type=Path, required=True)
    parser.add_argument("--db-codes", dest="db_codes", type=Path, required=True)
    mode = parser.add_mutually_exclusive_group()
    mode.add_argument("--top-r", dest="top_r", type=int, default=None, help="Ranked search cutoff")
    mode.add_argument("--radius", type=int, default=None, help="Hamming lookup radius")
    parser.add_argument("--out", type=Path, required=True, help="TSV of query_id, rank, db_id, distance")
    parser.set_defaults(handler=run)


def search_rows(
    queries: HammingIndex,
    database: HammingIndex,
    top_r: Optional[int] = None,
    radius: Optional[int] = None,
) -> Iterator[Tuple[str, int, str, int]]:
    """Result rows per query, nearest first; ties keep database order."""
    if radius is not None and not 0 <= radius <= database.length:
        raise InvalidArgumentError(
            ErrorMessages.Index.RADIUS_OUT_OF_RANGE.format(length=database.length, radius=radius),
            "radius",
            radius,
        )
    if top_r is not None and top_r < 1:
        raise InvalidArgumentError(ErrorMessages.Index.INVALID_TOP_R.format(top_r=top_r), "top_r", top_r)
    if len(database) == 0:
        return
    limit = len(database) if top_r is None else top_r
    for i, query_id in enumerate(queries.ids):
        code = queries.code(i)
        if radius is None:
            order, distances = rank_positions(code, database, limit)
        else:
            order, distances = rank_positions(code, database, len(database))
            keep = distances <= radius
            order, distances = order[keep], distances[keep]
        for rank, (position, distance) in enumerate(zip(order, distances), start=1):
            yield query_id, rank, database.ids[position], int(distance)


@handle_command_errors
def run(args: argparse.Namespace) -> int:
    queries = read_codes(args.query_codes)
    database = read_codes(args.db_codes)
    if queries.length != database.length:
        raise InvalidArgumentError(
            ErrorMessages.Index.LENGTH_MISMATCH.format(left=queries.length, right=database.length), "codes"
        )
    write_tsv(args.out, ("query_id", "rank", "db_id", "distance"),
              search_rows(queries, database, args.top_r, args.radius))
    logger.info("Search results written", extra={"out": str(args.out), "queries": len(queries)})
    return 0
