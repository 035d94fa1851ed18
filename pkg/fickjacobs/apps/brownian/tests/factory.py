import factory

from fickjacobs.apps.brownian.types import WalkConfig


class WalkConfigFactory(factory.Factory):
    class Meta:
        model = WalkConfig

    n_particles = 200
    dt = 1e-4
    t_final = 0.01
    seed = 12345
    bulk_D = 1.0
    batches = 4
    record_every = 10
    start_u = None
