import argparse
import logging
from pathlib import Path

from app.business.pipeline_service import encode_sets
from app.errors import DimensionMismatchError, handle_command_errors
from app.infrastructure.code_store import write_codes
from app.infrastructure.descriptor_io import read_descriptor_file
from app.infrastructure.model_store import load_model
from app.models.kernel import Modality

logger = logging.getLogger(__name__)


def register(subparsers: argparse._SubParsersAction) -> None:
    parser = subparsers.add_parser("encode", help="Encode a descriptor file into binary codes")
    parser.add_argument("--model", type=Path, required=True)
    parser.add_argument("--descriptors", type=Path, required=True, help="MFDH-DESC file")
    parser.add_argument("--modality", choices=[m.value for m in Modality], required=True)
    parser.add_argument("--out", type=Path, required=True, help="MFDH-CODES file to write")
    parser.set_defaults(handler=run)


@handle_command_errors
def run(args: argparse.Namespace) -> int:
    model = load_model(args.model)
    modality = Modality(args.modality)
    dim, sets = read_descriptor_file(args.descriptors)
    expected = model.dictionary(modality).dim
    if dim != expected:
        raise DimensionMismatchError(f"encode {modality.value} descriptors", expected, dim)

    index = encode_sets(model, sets, modality)
    write_codes(args.out, index)
    logger.info("Codes written", extra={"out": str(args.out), "n": len(index)})
    return 0
