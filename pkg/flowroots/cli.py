"""
Programmatic entry point for the ``flowroots`` management command.

    from flowroots.cli import run
    status = run(["poly", "--kind", "flow", "--graph", "C~"])
"""

import os
import sys
from typing import Optional, Sequence, TextIO


def run(argv: Optional[Sequence[str]] = None, stdout: Optional[TextIO] = None,
        stderr: Optional[TextIO] = None) -> int:
    """
    Run one flowroots subcommand and return its exit status.

    Args:
        argv: arguments after the command name; defaults to sys.argv[1:]
        stdout: stream for reports (defaults to sys.stdout)
        stderr: stream for diagnostics (defaults to sys.stderr)

    Returns:
        0 on success, 1 on usage or input errors, 2 on a verify counterexample
    """
    os.environ.setdefault('DJANGO_SETTINGS_MODULE', 'flowroots_project.settings')
    import django
    from django.apps import apps

    if not apps.ready:
        django.setup()

    from flowroots.management.commands.flowroots import Command

    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        Command(stdout=stdout, stderr=stderr).run_from_argv(['manage.py', 'flowroots', *argv])
    except SystemExit as exc:
        if exc.code is None:
            return 0
        return exc.code if isinstance(exc.code, int) else 1
    return 0


if __name__ == '__main__':
    sys.exit(run())
