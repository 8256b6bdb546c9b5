"""
Command-line entry point

Exit codes: 0 success, 1 computational failure, 2 usage or configuration error.
"""

import logging
import sys
from typing import List, Optional

import click
from pydantic import ValidationError
from rich.console import Console

from nvreadout import __version__
from nvreadout.commands.registry import COMMANDS
from nvreadout.core.exceptions import ConfigurationError, NVReadoutError
from nvreadout.utils.logging import configure_logging

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_USAGE = 2


def create_application() -> click.Group:
    @click.group(
        name="nvreadout",
        help="Dispersive readout of an NV ensemble: populations, spectra and sensitivity maps.",
    )
    @click.version_option(__version__, prog_name="nvreadout")
    @click.option("-v", "--verbose", count=True, help="-v for INFO, -vv for DEBUG logging.")
    def app(verbose: int) -> None:
        configure_logging(verbose)

    for command in COMMANDS:
        app.add_command(command)
    return app


def run(argv: Optional[List[str]] = None) -> int:
    """Dispatch a subcommand and translate failures into exit codes."""
    console = Console(stderr=True)
    app = create_application()
    try:
        result = app.main(args=argv, prog_name="nvreadout", standalone_mode=False)
    except ConfigurationError as error:
        console.print(f"[red]configuration error:[/red] {error}")
        return EXIT_USAGE
    except click.ClickException as error:
        error.show()
        return error.exit_code
    except click.Abort:
        console.print("aborted")
        return EXIT_FAILURE
    except (NVReadoutError, ValidationError) as error:
        logger.debug("Computation failed", exc_info=True)
        console.print(f"[red]{type(error).__name__}:[/red] {error}")
        return EXIT_FAILURE
    return result if isinstance(result, int) else EXIT_OK


def main() -> None:
    sys.exit(run())
