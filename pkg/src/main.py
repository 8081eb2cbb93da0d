"""Main entry point for the QAP benchmark harness."""

import logging
import sys

from src.cli.commands import main as run_command
from src.config import config

# Configure logging
logging.basicConfig(
    level=logging.INFO if config.environment == "production" else logging.DEBUG,
    format="%(asctime)s - %(name)s - %(levelname)s - %(message)s",
    handlers=[
        logging.StreamHandler(sys.stdout),
        logging.FileHandler(config.log_file) if config.environment == "production" else logging.NullHandler(),
    ],
)

logger = logging.getLogger(__name__)


def main() -> int:
    logger.info(f"Environment: {config.environment}")
    try:
        return run_command()
    except KeyboardInterrupt:
        logger.info("Interrupted by user")
        return 130
    except Exception:
        logger.exception("Fatal error")
        return 1


if __name__ == "__main__":
    sys.exit(main())
