#!/usr/bin/env python3
import json
import logging
import sys
from collections.abc import Sequence
from typing import Annotated

import click
import typer
from pydantic import ValidationError

from msiq.models import MsiqError
from . import logger
from .estimate import cmd_estimate
from .fraglen import cmd_fraglen
from .simulate import cmd_simulate
from .sweep import cmd_sweep

app = typer.Typer(pretty_exceptions_enable=False)
app.command(name="simulate")(cmd_simulate)
app.command(name="estimate")(cmd_estimate)
app.command(name="fraglen")(cmd_fraglen)
app.command(name="sweep")(cmd_sweep)


@app.callback()
def common(
    ctx: typer.Context,
    debug: Annotated[
        bool,
        typer.Option(
            "-d",
            "--debug",
            help="Turn on debug messages",
            envvar="MSIQ_DEBUG",
        ),
    ] = False,
):
    if debug:
        logger.setLevel(logging.DEBUG)
        logging.getLogger("msiq.quant_sdk").setLevel(logging.DEBUG)
        obj = ctx.ensure_object(dict)
        obj["debug"] = True


def report_error(code: str, message: str):
    """Machine-readable error on stderr."""
    print(json.dumps({"error": code, "message": message}), file=sys.stderr)


def run(argv: Sequence[str] | None = None) -> int:
    """
    Run a `msiq-quant` command.

    Returns:
        0 on success, 2 on a command line error, 1 on any other error.
    """
    try:
        result = app(args=list(argv) if argv is not None else None, standalone_mode=False)
    except click.UsageError as exc:
        report_error("usage_error", exc.format_message())
        return 2
    except MsiqError as exc:
        report_error(exc.code, str(exc))
        return 1
    except ValidationError as exc:
        report_error("validation_error", str(exc))
        return 1
    except (ValueError, OSError) as exc:
        report_error(type(exc).__name__, str(exc))
        return 1
    return result if isinstance(result, int) else 0


def main():
    """
    Launch MSIQ Quantification Tools.

    During installation of msiq-tools, the build backend is configured
    to create the `msiq-quant` script using this function as entrypoint.
    """
    sys.exit(run())


if __name__ == "__main__":
    main()
