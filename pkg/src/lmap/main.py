import logging
import sys

import pendulum
from lmap.cli.app import run
from lmap.cli.deps import EXIT_ERROR
from lmap.config import get_settings
from pydantic import ValidationError


def configure_logging():
    # stderr keeps stdout free for command output
    logging.basicConfig(
        level=get_settings().log_level.upper(),
        format='%(asctime)s - %(name)s - %(levelname)s - %(message)s',
        handlers=[
            logging.StreamHandler(sys.stderr)
        ]
    )


def main():
    try:
        configure_logging()
    except ValidationError as e:
        print(f'error: invalid MAP_* environment settings: {e}', file=sys.stderr)
        sys.exit(EXIT_ERROR)
    logger = logging.getLogger(__name__)
    logger.debug(f'Starting map at {pendulum.now().to_iso8601_string()} ({pendulum.now().timezone_name})')
    sys.exit(run(sys.argv[1:]))


if __name__ == '__main__':
    main()
