from django.conf import settings

from fickjacobs.apps.frontend.output import write_csv
from fickjacobs.apps.frontend.services import canonical_json, load_config
from fickjacobs.apps.sections.services import moments
from fickjacobs.core.exceptions import ConfigError
from fickjacobs.core.management import ChannelCommand


class Command(ChannelCommand):
    help = "Tabulate area, eta-moments, average sizes and orientation of the cross sections."

    def add_command_arguments(self, parser):
        parser.add_argument("--max-order", type=int, default=4, help="Highest eta-moment to report (at least 2).")

    def run(self, **options):
        max_order = options["max_order"]
        if not 2 <= max_order <= settings.FJ_MAX_MOMENT_ORDER:
            raise ConfigError(f"--max-order must lie in [2, {settings.FJ_MAX_MOMENT_ORDER}].")
        config = load_config(options["config"])
        summaries = [moments(config.channel, u, max_order, self.tol) for u in config.u_grid()]
        power_columns = [f"eta{i}" for i in range(2, max_order + 1)]
        columns = ["u", "A", "eta_mean", "beta_mean", *power_columns, "a", "b", "c", "s1", "s2", "theta"]
        rows = (
            {
                "u": s.u,
                "A": s.A,
                "eta_mean": s.eta_mean,
                "beta_mean": s.beta_mean,
                **{name: s.eta_moments[i] for i, name in enumerate(power_columns, start=2)},
                "a": s.a,
                "b": s.b,
                "c": s.c,
                "s1": s.s1,
                "s2": s.s2,
                "theta": s.theta,
            }
            for s in summaries
        )
        with self.output(options["out"]) as stream:
            header = {"command": "moments", "tol": self.tol, "config": canonical_json(config.document)}
            write_csv(stream, columns, rows, header)
