from fickjacobs.apps.diffusion.services import deff_profile
from fickjacobs.apps.diffusion.types import parse_method
from fickjacobs.apps.frontend.output import write_csv
from fickjacobs.apps.frontend.services import load_config, profile_header, profile_table
from fickjacobs.core.management import ChannelCommand


class Command(ChannelCommand):
    help = "Tabulate the effective diffusion coefficient along the channel."

    def add_command_arguments(self, parser):
        parser.add_argument(
            "--method",
            action="append",
            dest="methods",
            help="quadrature, series:N, second_order, ellipse, rectangle or focal; repeat for several columns.",
        )

    def run(self, **options):
        config = load_config(options["config"])
        methods = [parse_method(text, self.tol) for text in (options["methods"] or ["quadrature"])]
        u_grid = config.u_grid()
        profiles = [deff_profile(config.channel, u_grid, method, self.threads, self.tol) for method in methods]
        columns, rows = profile_table(profiles)
        with self.output(options["out"]) as stream:
            write_csv(stream, columns, rows, profile_header(config.document, profiles, self.tol))
