import argparse
from pathlib import Path

from app.business.synthetic_service import generate_dataset
from app.core.config import settings
from app.errors import handle_command_errors


def register(subparsers: argparse._SubParsersAction) -> None:
    parser = subparsers.add_parser("synth", help="Write the synthetic three-class paired dataset and its config")
    parser.add_argument("--out", type=Path, required=True, help="Output directory")
    parser.add_argument("--seed", type=int, default=settings.DEFAULT_SEED)
    parser.set_defaults(handler=run)


@handle_command_errors
def run(args: argparse.Namespace) -> int:
    config_path, counts = generate_dataset(args.out, args.seed)
    print(f"wrote {counts['train']} train / {counts['query']} query pairs; config: {config_path}")
    return 0
