"""Flat ``key = value`` configuration files.

Every key has a default (the reference link: 300 GHz, 55 dBi antennas,
296 K, 101325 Pa, 50 % humidity, 10 cm aperture, 60 cm beam footprint).
Lines starting with ``#`` and trailing ``# ...`` comments are ignored.
Override values (e.g. from command-line flags) win over file values.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import Any, Callable, Mapping

from .atmosphere import AtmosphericConditions
from .channel import JitterInterpretation, LinkConfig
from .experiments import DEFAULT_DISTANCES, DEFAULT_JITTERS, DEFAULT_SNR_GRID, Method, SweepSpec
from .montecarlo import McConfig, McMode
from .ser import ModulationScheme


class ConfigError(ValueError):
    def __init__(self, key: str, message: str):
        super().__init__(f"{key}: {message}")
        self.key = key


def _float_list(text: str) -> tuple[float, ...]:
    text = text.strip()
    if ":" in text:
        start, stop, step = (float(p) for p in text.split(":"))
        if step <= 0:
            raise ValueError("range step must be positive")
        n = int(round((stop - start) / step)) + 1
        return tuple(start + i * step for i in range(n))
    return tuple(float(p) for p in text.split(",") if p.strip())


def _enum_list(enum_cls):
    def parse(text: str):
        return tuple(enum_cls(p.strip().lower()) for p in text.split(",") if p.strip())

    return parse


def _int(text: str) -> int:
    return int(float(text)) if "e" in text.lower() else int(text)


_LINK_KEYS: dict[str, tuple[Callable[[str], Any], Any]] = {
    "frequency": (float, 300e9),
    "gain_tx": (float, 55.0),
    "gain_rx": (float, 55.0),
    "distance": (float, 50.0),
    "aperture_radius": (float, 0.1),
    "beam_waist": (float, 0.6),
    "jitter": (float, 0.01),
    "jitter_interpretation": (JitterInterpretation, JitterInterpretation.VARIANCE),
    "temperature": (float, 296.0),
    "pressure": (float, 101_325.0),
    "relative_humidity": (float, 50.0),
}
_MC_KEYS: dict[str, tuple[Callable[[str], Any], Any]] = {
    "mode": (McMode, McMode.SEMI_ANALYTIC),
    "trials": (_int, 1_000_000),
    "seed": (_int, 0),
    "chunk_size": (_int, 1 << 18),
    "confidence_level": (float, 0.95),
}
_SWEEP_KEYS: dict[str, tuple[Callable[[str], Any], Any]] = {
    "snr_db": (_float_list, DEFAULT_SNR_GRID),
    "distances": (_float_list, DEFAULT_DISTANCES),
    "jitters": (_float_list, DEFAULT_JITTERS),
    "schemes": (_enum_list(ModulationScheme), (ModulationScheme.BPSK, ModulationScheme.QPSK)),
    "methods": (_enum_list(Method), (Method.CLOSED_FORM, Method.QUADRATURE_EXACT, Method.MC_SEMI)),
    "max_symbol_trials": (_int, 100_000_000),
}
KEYS = {**_LINK_KEYS, **_MC_KEYS, **_SWEEP_KEYS}


@dataclass(frozen=True)
class Settings:
    link: LinkConfig
    mc: McConfig
    sweep: SweepSpec


def read_config_file(path) -> dict[str, str]:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError("config", str(exc)) from None
    values = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}", f"expected 'key = value', got {raw!r}")
        key, value = (part.strip() for part in line.split("=", 1))
        values[key] = value
    return values


def _convert(key: str, value):
    if key not in KEYS:
        raise ConfigError(key, "unknown key")
    parser, _ = KEYS[key]
    if not isinstance(value, str):
        return value
    try:
        return parser(value)
    except ValueError as exc:
        raise ConfigError(key, f"cannot parse {value!r} ({exc})") from None


def parse_config(path=None, overrides: Mapping[str, Any] | None = None) -> Settings:
    """Build validated link, Monte Carlo and sweep settings.

    Raises ConfigError naming the offending key on unknown keys,
    unparsable values or invariant violations.
    """
    raw: dict[str, Any] = dict(read_config_file(path)) if path else {}
    raw.update({k: v for k, v in (overrides or {}).items() if v is not None})
    values = {key: default for key, (_, default) in KEYS.items()}
    for key, value in raw.items():
        values[key] = _convert(key, value)

    def build(field_keys: dict[str, str], factory):
        # field_keys maps dataclass field names (as they appear in messages) to config keys
        try:
            return factory()
        except ValueError as exc:
            message = str(exc)
            key = next((k for f, k in field_keys.items() if f in message), next(iter(field_keys.values())))
            raise ConfigError(key, message) from None

    conditions = build(
        {k: k for k in ("temperature", "pressure", "relative_humidity")},
        lambda: AtmosphericConditions(values["temperature"], values["pressure"], values["relative_humidity"]),
    )
    link = build(
        {"jitter_value": "jitter", **{k: k for k in _LINK_KEYS}},
        lambda: LinkConfig(
            frequency=values["frequency"],
            gain_tx=values["gain_tx"],
            gain_rx=values["gain_rx"],
            distance=values["distance"],
            aperture_radius=values["aperture_radius"],
            beam_waist=values["beam_waist"],
            jitter_value=values["jitter"],
            jitter_interpretation=values["jitter_interpretation"],
            conditions=conditions,
        ),
    )
    mc = build(
        {"num_trials": "trials", "chunk_size": "chunk_size", "confidence_level": "confidence_level", "seed": "seed"},
        lambda: McConfig(
            mode=values["mode"],
            num_trials=values["trials"],
            seed=values["seed"],
            chunk_size=values["chunk_size"],
            confidence_level=values["confidence_level"],
        ),
    )
    sweep = build(
        {"snr_grid": "snr_db", "jitter_values": "jitters", "distances": "distances",
         "schemes": "schemes", "methods": "methods"},
        lambda: SweepSpec(
            snr_grid=values["snr_db"],
            distances=values["distances"],
            jitter_values=values["jitters"],
            schemes=values["schemes"],
            methods=values["methods"],
            base=link,
            mc=mc,
            max_symbol_trials=values["max_symbol_trials"],
        ),
    )
    return Settings(link=link, mc=mc, sweep=sweep)
