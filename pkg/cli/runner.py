"""
Programmatic entry point: ``run(argv)`` runs one subcommand and returns its
exit code, with the report on ``stdout`` and errors on ``stderr``.
"""
import logging
import sys

from django.core.management import call_command
from django.core.management.base import CommandError

logger = logging.getLogger(__name__)

COMMANDS = (
    'validate', 'count', 'measures', 'q', 'decide', 'futaki', 'futaki_consistency', 'examples',
)
COMMAND_ALIASES = {'futaki-consistency': 'futaki_consistency'}


def command_name(name):
    return COMMAND_ALIASES.get(name, name)


def run(argv, stdout=None, stderr=None):
    """0 on success, 2 on input errors, 3 on exceeded caps, 4 on failed verification."""
    stdout = sys.stdout if stdout is None else stdout
    stderr = sys.stderr if stderr is None else stderr
    if not argv or command_name(argv[0]) not in COMMANDS:
        stderr.write(f"usage: <command> [options]; commands: {', '.join(COMMANDS)}\n")
        return 2
    name = command_name(argv[0])
    try:
        call_command(name, *argv[1:], stdout=stdout, stderr=stderr)
    except CommandError as exc:
        # argument parsing failures carry Django's generic code 1
        code = 2 if exc.returncode == 1 else exc.returncode
        stderr.write(f"error: {exc}\n")
        logger.info("run failed command=%s exit_code=%d", name, code)
        return code
    return 0
