"""Run parameters and INI config loading.

Precedence: built-in defaults < config file < command-line flags. The INI
file may carry a bare key=value body or any section headers; sections are
flattened in order, later keys overriding earlier ones.
"""
from __future__ import annotations

import configparser
import dataclasses
from dataclasses import dataclass

from .errors import DataError


@dataclass
class PipelineParams:
    """Everything the clustering pipeline needs besides the inputs."""

    seed: int = 0
    # SPD shift
    shift_lambda: float | None = None  # None: average weighted degree
    # bootstrap solver
    target_rho: float = 1e-8
    rho_mode: str = "total"
    max_components: int = 40
    smooth_iters: int = 15
    smoother: str = "gs"
    jacobi_omega: float = 2.0 / 3.0
    max_levels: int = 20
    max_coarse_size: int = 40
    # augmentation / embedding
    attr_weight: float = 1.0
    trunc_tol: float = 1e-12
    # k-means
    restarts: int = 100
    kmeans_max_iters: int = 300
    kmeans_tol: float = 1e-9
    # reporting
    nmi_raw: bool = False

    def to_dict(self) -> dict:
        return dataclasses.asdict(self)


_FIELD_TYPES = {f.name: f.type for f in dataclasses.fields(PipelineParams)}
_INT_KEYS = {"seed", "max_components", "smooth_iters", "max_levels",
             "max_coarse_size", "restarts", "kmeans_max_iters"}
_FLOAT_KEYS = {"shift_lambda", "target_rho", "jacobi_omega", "attr_weight",
               "trunc_tol", "kmeans_tol"}
_STR_KEYS = {"rho_mode", "smoother"}
_BOOL_KEYS = {"nmi_raw"}


def _coerce(key: str, text: str):
    try:
        if key in _INT_KEYS:
            return int(text)
        if key in _FLOAT_KEYS:
            return float(text)
        if key in _BOOL_KEYS:
            low = text.strip().lower()
            if low in ("1", "true", "yes", "on"):
                return True
            if low in ("0", "false", "no", "off"):
                return False
            raise ValueError(f"not a boolean: {text!r}")
        return text.strip()
    except ValueError as exc:
        raise DataError(f"config key {key!r}: {exc}") from None


def read_config(path) -> dict:
    """Parse an INI file into a {param: value} dict (known keys only)."""
    with open(path, "r", encoding="utf-8") as fh:
        text = fh.read()
    if not text.lstrip().startswith("["):
        text = "[run]\n" + text
    parser = configparser.ConfigParser()
    try:
        parser.read_string(text)
    except configparser.Error as exc:
        raise DataError(f"{path}: {exc}") from None
    out: dict = {}
    for section in parser.sections():
        for key, value in parser.items(section):
            if key not in _FIELD_TYPES:
                raise DataError(f"{path}: unknown config key {key!r}")
            out[key] = _coerce(key, value)
    return out


def build_params(config_file=None, overrides: dict | None = None) -> PipelineParams:
    """Layer file values and explicit overrides over the defaults."""
    values: dict = {}
    if config_file is not None:
        values.update(read_config(config_file))
    if overrides:
        for key, value in overrides.items():
            if value is not None:
                values[key] = value
    params = PipelineParams(**values)
    _validate(params)
    return params


def _validate(p: PipelineParams) -> None:
    if p.rho_mode not in ("total", "per_step"):
        raise DataError(f"rho_mode must be 'total' or 'per_step', got {p.rho_mode!r}")
    if p.smoother not in ("gs", "jacobi"):
        raise DataError(f"smoother must be 'gs' or 'jacobi', got {p.smoother!r}")
    if not 0.0 < p.jacobi_omega <= 1.0:
        raise DataError("jacobi_omega must lie in (0, 1]")
    if p.target_rho < 0:
        raise DataError("target_rho must be >= 0")
    if p.shift_lambda is not None and p.shift_lambda <= 0:
        raise DataError("shift_lambda must be positive")
    if p.attr_weight <= 0:
        raise DataError("attr_weight must be positive")
    if min(p.max_components, p.smooth_iters, p.max_levels,
           p.max_coarse_size, p.restarts, p.kmeans_max_iters) < 1:
        raise DataError("count parameters must be >= 1")
    if p.trunc_tol < 0 or p.kmeans_tol < 0:
        raise DataError("tolerances must be >= 0")
