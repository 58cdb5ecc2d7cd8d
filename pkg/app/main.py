import argparse
import sys
from typing import List, Optional

from app import __version__
from app.commands import COMMANDS
from app.core.config import settings
from app.core.logging import setup_logging


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mfdh",
        description=f"{settings.APP_NAME}: multi-view discrete hashing for cross-modal retrieval",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("--log-level", dest="log_level", default=None, help="Override MFDH_LOG_LEVEL")
    subparsers = parser.add_subparsers(dest="command", required=True)
    for command in COMMANDS:
        command.register(subparsers)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    setup_logging(args.log_level.upper() if args.log_level else None)
    return args.handler(args)


if __name__ == "__main__":
    sys.exit(main())
