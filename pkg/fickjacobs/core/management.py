import logging
import sys
from contextlib import contextmanager
from pathlib import Path

from django.conf import settings
from django.core.management.base import BaseCommand, CommandError
from rest_framework.exceptions import ValidationError

from fickjacobs.core import quadrature
from fickjacobs.core.error_response import ErrorReport
from fickjacobs.core.exceptions import ChannelError

logger = logging.getLogger(__name__)


class ChannelCommand(BaseCommand):
    """
    Base for the channel commands.

    Adds the global ``--config``, ``--out``, ``--seed``, ``--threads`` and ``--tol`` flags,
    fills unset flags from settings and turns domain errors into ``CommandError`` with the
    exit code of their class. Subclasses implement ``run``.
    """

    requires_system_checks: list = []
    config_required = True

    def add_arguments(self, parser):
        parser.add_argument("--config", required=self.config_required, help="Path of the channel JSON config.")
        parser.add_argument("--out", help="Output CSV path (directory for figures); stdout when omitted.")
        parser.add_argument("--seed", type=int, help="Seed of the random streams.")
        parser.add_argument("--threads", type=int, help="Worker threads for grid sweeps and particle batches.")
        parser.add_argument("--tol", type=float, help="Relative tolerance of the section quadrature.")
        self.add_command_arguments(parser)

    def add_command_arguments(self, parser):
        pass

    def handle(self, *args, **options):
        self.seed = settings.FJ_SEED if options.get("seed") is None else options["seed"]
        self.threads = settings.FJ_THREADS if options.get("threads") is None else options["threads"]
        self.tol = settings.FJ_QUADRATURE_TOL if options.get("tol") is None else options["tol"]
        if self.threads < 1:
            raise CommandError("--threads must be at least 1.", returncode=2)
        if not self.tol > 0:
            raise CommandError("--tol must be positive.", returncode=2)
        try:
            quadrature.configure(settings.FJ_QUADRATURE_ORDER, settings.FJ_QUADRATURE_MAX_PANELS)
            self.run(**options)
        except (ChannelError, ValidationError) as exc:
            report = ErrorReport.from_exception(exc)
            logger.info("Command failed with exit code %d", report.exit_code)
            raise CommandError(report.render(), returncode=report.exit_code)

    def run(self, **options):
        raise NotImplementedError("subclasses of ChannelCommand must provide a run() method")

    @contextmanager
    def output(self, path: str | None):
        """Text stream for ``path``, or the command's stdout."""
        if path is None or path == "-":
            stream = getattr(self.stdout, "_out", sys.stdout)
            yield stream
            return
        target = Path(path)
        target.parent.mkdir(parents=True, exist_ok=True)
        with target.open("w", newline="") as stream:
            yield stream
