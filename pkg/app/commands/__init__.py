"""
Command-line subcommands. Each module exposes ``register(subparsers)`` and a
``run(args)`` handler that returns the process exit code.
"""

from . import encode, evaluate, search, synth, train

COMMANDS = (train, encode, search, evaluate, synth)

__all__ = ["COMMANDS", "encode", "evaluate", "search", "synth", "train"]
