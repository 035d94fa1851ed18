# contains config loading for the management commands
import json
import logging
from pathlib import Path
from typing import Any

from rest_framework.exceptions import ValidationError

from fickjacobs.apps.diffusion.types import DeffProfile
from fickjacobs.apps.frontend.serializers import ChannelConfigSerializer
from fickjacobs.apps.frontend.types import ChannelConfig
from fickjacobs.apps.sections.services import validate_channel
from fickjacobs.core.exceptions import ConfigError

logger = logging.getLogger(__name__)


def canonical_json(document: dict[str, Any]) -> str:
    return json.dumps(document, sort_keys=True, separators=(",", ":"))


def parse_config_text(text: str) -> dict[str, Any]:
    try:
        document = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"Invalid JSON at line {exc.lineno} column {exc.colno}: {exc.msg}")
    if not isinstance(document, dict):
        raise ConfigError("The config must be a JSON object.")
    return document


def build_config(document: dict[str, Any], validate: bool = True) -> ChannelConfig:
    """
    Validate a channel document and build the channel it describes.

    With ``validate`` the channel is also checked on its grid (centroid, domain and
    narrowness) and recentered when ``section.auto_center`` is set.
    """
    serializer = ChannelConfigSerializer(data=document)
    if not serializer.is_valid():
        raise ValidationError(serializer.errors)
    built = serializer.save()

    config = ChannelConfig(
        channel=built["channel"],
        document=document,
        grid=built["grid"],
        auto_center=built["auto_center"],
        solver=built["solver"],
        walk=built["walk"],
    )
    if validate:
        channel = validate_channel(config.channel, config.u_grid(), auto_center=config.auto_center)
        config = ChannelConfig(
            channel=channel,
            document=document,
            grid=config.grid,
            auto_center=config.auto_center,
            solver=config.solver,
            walk=config.walk,
        )
    logger.debug("Loaded %s channel on a %s curve", config.channel.section.kind, config.channel.curve.name)
    return config


def load_config(path: str | Path, validate: bool = True) -> ChannelConfig:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError(f"Cannot read config {path}: {exc.strerror}")
    return build_config(parse_config_text(text), validate=validate)


def profile_table(profiles: list[DeffProfile]) -> tuple[list[str], list[dict[str, Any]]]:
    """
    Columns and rows for one or more profiles on the same grid.

    A single profile uses ``u, deff, deff_over_D, omega_vol, area, method``; several add a
    ``deff_<method>`` and ``deff_over_D_<method>`` pair per method.
    """
    if len(profiles) == 1:
        columns = ["u", "deff", "deff_over_D", "omega_vol", "area", "method"]
        return columns, list(profiles[0].rows())

    first = profiles[0]
    labels = [profile.method.label for profile in profiles]
    columns = ["u", "omega_vol", "area"]
    for label in labels:
        columns.extend([f"deff_{label}", f"deff_over_D_{label}"])
    rows = []
    for index, u in enumerate(first.u_grid):
        row = {"u": u, "omega_vol": first.omega_vol[index], "area": first.area[index]}
        for label, profile in zip(labels, profiles):
            row[f"deff_{label}"] = profile.deff[index]
            row[f"deff_over_D_{label}"] = profile.deff_over_D[index]
        rows.append(row)
    return columns, rows


def profile_header(document: dict[str, Any], profiles: list[DeffProfile], tol: float) -> dict[str, Any]:
    return {
        "command": "deff",
        "methods": ",".join(profile.method.label for profile in profiles),
        "bulk_D": profiles[0].channel.bulk_D,
        "tol": tol,
        "config": canonical_json(document),
    }
