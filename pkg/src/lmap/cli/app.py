import argparse
import logging
import sys

from lmap.cli.commands import assess, evaluate, generate, train
from lmap.cli.deps import EXIT_ERROR, CommandError
from lmap.services.alignment import AlignmentError
from lmap.services.gp import FitError, NumericalError
from lmap.services.trajectory import IngestError
from pydantic import ValidationError

logger = logging.getLogger(__name__)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog='map',
        description='Movement assessment primitives: score robot movement reproductions against a demonstration',
    )
    subparsers = parser.add_subparsers(dest='command', required=True)
    for command in (generate, train, assess, evaluate):
        command.add_parser(subparsers)
    return parser


def run(argv: list[str] | None = None) -> int:
    """Parse `argv`, run the selected command and return its exit code.

    Command errors and invalid input end the run with a message on stderr
    instead of a traceback.
    """
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_ERROR if e.code else 0

    try:
        return args.handler(args)
    except CommandError as e:
        return _fail(e.exit_code, e.detail)
    except (IngestError, AlignmentError, ValidationError) as e:
        return _fail(EXIT_ERROR, str(e))
    except (NumericalError, FitError) as e:
        logger.error(f'Numerical failure in {args.command}: {e}')
        return _fail(EXIT_ERROR, str(e))
    except ValueError as e:
        return _fail(EXIT_ERROR, str(e))


def _fail(exit_code: int, detail: str) -> int:
    print(f'error: {detail}', file=sys.stderr)
    return exit_code
