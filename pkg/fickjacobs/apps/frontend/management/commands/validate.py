import numpy as np

from fickjacobs.apps.frontend.services import load_config
from fickjacobs.apps.sections.services import max_kappa_eta, section_area
from fickjacobs.core.management import ChannelCommand


class Command(ChannelCommand):
    help = "Check a channel config: schema, section centroid, grid domain and distance from the focal set."

    def run(self, **options):
        config = load_config(options["config"])
        grid = config.u_grid()
        worst = float(np.max(max_kappa_eta(config.channel, grid)))
        area = section_area(config.channel, float(grid[0]), self.tol)
        self.stdout.write(
            f"ok: {config.channel.section.kind} section on a {config.channel.curve.name} curve, "
            f"{grid.size} grid points, area {area:.10g}, max kappa*eta {worst:.6f}"
        )
