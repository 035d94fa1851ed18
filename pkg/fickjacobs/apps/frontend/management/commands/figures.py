from pathlib import Path

from fickjacobs.apps.diffusion.services import deff_profile
from fickjacobs.apps.diffusion.types import parse_method
from fickjacobs.apps.frontend.figures import FIGURES
from fickjacobs.apps.frontend.output import write_csv_file
from fickjacobs.apps.frontend.services import build_config, profile_header, profile_table
from fickjacobs.core.management import ChannelCommand


class Command(ChannelCommand):
    help = "Write the data series behind the reference profiles (figures 3 to 7), one CSV per series."

    config_required = False

    def add_command_arguments(self, parser):
        parser.add_argument("which", type=int, nargs="+", choices=sorted(FIGURES), help="Figure numbers.")

    def run(self, **options):
        out_dir = Path(options["out"] or ".")
        for number in options["which"]:
            for series in FIGURES[number]:
                config = build_config(series.document)
                methods = [parse_method(text, self.tol) for text in series.methods]
                profiles = [
                    deff_profile(config.channel, config.u_grid(), method, self.threads, self.tol) for method in methods
                ]
                columns, rows = profile_table(profiles)
                header = {
                    "figure": number,
                    "series": series.name,
                    **profile_header(series.document, profiles, self.tol),
                }
                path = write_csv_file(out_dir / f"{series.name}.csv", columns, rows, header)
                self.stdout.write(str(path))
