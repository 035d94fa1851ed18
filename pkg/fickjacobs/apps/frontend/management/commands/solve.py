from fickjacobs.apps.diffusion.types import parse_method
from fickjacobs.apps.frontend.output import write_csv
from fickjacobs.apps.frontend.services import canonical_json, load_config
from fickjacobs.apps.solver.services import (
    assemble,
    evolve,
    face_fluxes,
    initial_condition,
    steady_flux,
    steady_state,
    total_mass,
)
from fickjacobs.apps.solver.types import FixedDensity, Grid1D, NoFlux, SolverConfig
from fickjacobs.core.management import ChannelCommand

SOLVER_FLAGS = ("n_cells", "dt", "theta", "steps", "every", "initial", "method", "bc_left", "bc_right")


def boundary(value):
    return NoFlux() if value is None else FixedDensity(float(value))


class Command(ChannelCommand):
    help = "Integrate the reduced diffusion equation on the channel, or solve for its steady state."

    def add_command_arguments(self, parser):
        parser.add_argument("--n-cells", type=int, help="Number of finite-volume cells.")
        parser.add_argument("--dt", type=float, help="Time step.")
        parser.add_argument("--theta", type=float, help="Time weight: 1 implicit Euler, 0.5 trapezoidal.")
        parser.add_argument("--steps", type=int, help="Number of time steps.")
        parser.add_argument("--every", type=int, help="Write every N-th step.")
        parser.add_argument("--initial", help='"gaussian(mu,sigma)", "uniform" or "equilibrium".')
        parser.add_argument("--method", help="Method for the face coefficients.")
        parser.add_argument("--bc-left", type=float, help="Fixed density at the left end; closed when omitted.")
        parser.add_argument("--bc-right", type=float, help="Fixed density at the right end; closed when omitted.")
        parser.add_argument("--steady", action="store_true", help="Solve for the steady state instead of stepping.")

    def run(self, **options):
        config = load_config(options["config"])
        flags = dict(config.solver)
        flags.update({name: options[name] for name in SOLVER_FLAGS if options.get(name) is not None})

        grid_values = config.u_grid()
        grid = Grid1D(float(grid_values[0]), float(grid_values[-1]), flags["n_cells"])
        method = parse_method(flags["method"], self.tol)
        solver = SolverConfig(
            dt=flags["dt"],
            theta=flags["theta"],
            bc_left=boundary(flags["bc_left"]),
            bc_right=boundary(flags["bc_right"]),
        )
        operator = assemble(config.channel, grid, method, self.threads, self.tol)
        header = {
            "command": "solve",
            "method": method.label,
            "n_cells": grid.n_cells,
            "dt": solver.dt,
            "theta": solver.theta,
            "tol": self.tol,
            "config": canonical_json(config.document),
        }

        if options["steady"]:
            states = [steady_state(operator, solver)]
            if flags["bc_left"] is not None and flags["bc_right"] is not None:
                header["steady_flux"] = steady_flux(
                    config.channel, grid, flags["bc_left"], flags["bc_right"], method, self.tol
                )
        else:
            initial = initial_condition(flags["initial"], operator)
            header["initial"] = flags["initial"]
            header["initial_mass"] = total_mass(initial, grid)
            states = evolve(initial, solver, operator, flags["steps"], flags["every"])

        def rows():
            for state in states:
                j_faces = face_fluxes(state, operator, solver)
                j_cells = 0.5 * (j_faces[:-1] + j_faces[1:])
                ratio = state.p / operator.omega_cells
                for u, p, q, j in zip(grid.centers, state.p, ratio, j_cells):
                    yield {"t": state.t, "u": u, "p": p, "p_over_omega": q, "j": j}

        with self.output(options["out"]) as stream:
            write_csv(stream, ["t", "u", "p", "p_over_omega", "j"], rows(), header)
