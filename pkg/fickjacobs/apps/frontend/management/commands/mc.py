from django.conf import settings

from fickjacobs.apps.brownian.services import simulate
from fickjacobs.apps.brownian.types import WalkConfig
from fickjacobs.apps.diffusion.types import parse_method
from fickjacobs.apps.frontend.output import write_csv, write_csv_file
from fickjacobs.apps.frontend.services import canonical_json, load_config
from fickjacobs.apps.solver.services import effective_axial_coefficient
from fickjacobs.core.management import ChannelCommand

WALK_FLAGS = ("n_particles", "dt", "t_final", "batches", "record_every", "start_u")


class Command(ChannelCommand):
    help = "Simulate reflected Brownian motion in the full channel and estimate the axial coefficient."

    def add_command_arguments(self, parser):
        parser.add_argument("--n-particles", type=int, help="Number of particles.")
        parser.add_argument("--dt", type=float, help="Time step.")
        parser.add_argument("--t-final", type=float, help="Simulated time.")
        parser.add_argument("--batches", type=int, help="Number of independent particle batches.")
        parser.add_argument("--record-every", type=int, help="Record the MSD every N steps.")
        parser.add_argument("--start-u", type=float, help="Start all particles in the slab at this arc length.")
        parser.add_argument("--trajectories", help="Also write per-particle (u, eta, beta) records to this CSV.")
        parser.add_argument("--check-inside", action="store_true", help="Re-check every accepted position.")
        parser.add_argument(
            "--compare",
            metavar="METHOD",
            help="Add the reduced-model coefficient over the whole curve, computed with METHOD, to the header.",
        )

    def run(self, **options):
        config = load_config(options["config"])
        flags = dict(config.walk)
        flags.setdefault("batches", settings.FJ_MC_BATCHES)
        flags.update({name: options[name] for name in WALK_FLAGS if options.get(name) is not None})

        walk = WalkConfig(
            n_particles=flags["n_particles"],
            dt=flags["dt"],
            t_final=flags["t_final"],
            seed=self.seed,
            bulk_D=config.channel.bulk_D,
            batches=flags["batches"],
            record_every=flags["record_every"],
            start_u=flags["start_u"],
            keep_trajectories=options["trajectories"] is not None,
            check_inside=options["check_inside"],
        )
        statistics = simulate(config.channel, walk, self.threads)

        header = {
            "command": "mc",
            "seed": self.seed,
            "n_particles": walk.n_particles,
            "dt": walk.dt,
            "batches": walk.batches,
            "acceptance": statistics.acceptance,
            "config": canonical_json(config.document),
        }
        if options["compare"]:
            s1, s2 = config.channel.curve.domain
            method = parse_method(options["compare"], self.tol)
            header["reduced_estimate"] = effective_axial_coefficient(config.channel, s1, s2, method, self.tol)

        with self.output(options["out"]) as stream:
            write_csv(stream, ["t", "msd_u", "estimate", "stderr"], statistics.rows(), header)

        if statistics.trajectories is not None:
            records, particles, _ = statistics.trajectories.shape
            rows = (
                {"t": statistics.times[i], "particle": k, "u": u, "eta": eta, "beta": beta}
                for i in range(records)
                for k, (u, eta, beta) in enumerate(statistics.trajectories[i])
            )
            write_csv_file(
                options["trajectories"],
                ["t", "particle", "u", "eta", "beta"],
                rows,
                {"command": "mc", "seed": self.seed, "particles": particles},
            )
        self.stderr.write(f"estimate {statistics.estimate:.6g} +- {statistics.stderr:.2g}")
