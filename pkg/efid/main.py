"""
efid - command-line entry point

Usage:
    python -m efid <command> [flags]

Commands: gen-corpus, encode, decode, sweep, power, plot.
Run `python -m efid <command> --help` for a command's flags.
"""
import sys
from typing import Optional, Sequence

from efid.cli.commands import COMMANDS, EXIT_CONFIG, EXIT_OK
from efid.config import settings
from efid.utils.logger import configure_logging, get_logger

logger = get_logger(__name__)


def usage() -> str:
    return f"usage: python -m efid {{{','.join(COMMANDS)}}} [flags]"


def main(argv: Optional[Sequence[str]] = None) -> int:
    """Dispatch to a command handler and return its exit code"""
    configure_logging(settings.LOG_LEVEL)
    args = list(sys.argv[1:] if argv is None else argv)
    if not args:
        print(usage(), file=sys.stderr)
        return EXIT_CONFIG
    if args[0] in ("-h", "--help"):
        print(usage())
        return EXIT_OK
    if args[0] in ("-V", "--version"):
        print(f"{settings.APP_NAME} {settings.APP_VERSION} ({settings.FORMAT_VERSION})")
        return EXIT_OK

    handler = COMMANDS.get(args[0])
    if handler is None:
        print(f"error: unknown command {args[0]!r}\n{usage()}", file=sys.stderr)
        return EXIT_CONFIG

    logger.debug("command_started", command=args[0], version=settings.APP_VERSION)
    return handler(args[1:])
