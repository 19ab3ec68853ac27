"""Versioned JSON backend configuration.

Schema (version 1)::

    {"version": 1, "type": "gaussian"}
    {"version": 1, "type": "skew", "delta": [0.6, 0.2]}
    {"version": 1, "type": "product", "densities": [{"law": "uniform", "a": 0, "b": 1}, ...],
     "default": {"law": "normal"} | null}
    {"version": 1, "type": "classical", "space": "finite", "weights": ["1/2", "1/2"]}
    {"version": 1, "type": "classical", "space": "unit"}

``"type": "finite"`` and ``"type": "unit"`` abbreviate the two classical forms.

Any config may add ``"corrupt": true`` to wrap the backend in the
non-additive test fixture.
"""

from __future__ import annotations

import json
import os
from typing import Mapping, Union

from ..errors import ConfigError
from .base import CorruptedBackend, GeneratorBackend
from .classical import FiniteBackend, UnitIntervalBackend
from .product import GaussianBackend, ProductBackend, distribution_from_spec
from .skew import SkewNormalBackend

CONFIG_VERSION = 1
_KEYS = {"version", "type", "delta", "densities", "default", "space", "weights", "precision", "corrupt"}


def backend_from_config(cfg: Mapping) -> GeneratorBackend:
    if not isinstance(cfg, Mapping):
        raise ConfigError("backend config must be a JSON object")
    unknown = set(cfg) - _KEYS
    if unknown:
        raise ConfigError(f"unknown config keys {sorted(unknown)}")
    version = cfg.get("version", CONFIG_VERSION)
    if version != CONFIG_VERSION:
        raise ConfigError(f"unsupported config version {version!r}")
    kind = cfg.get("type")
    if kind in ("finite", "unit"):
        # shorthand for the classical spaces, matching the bare names
        cfg = {**cfg, "type": "classical", "space": kind}
        kind = "classical"
    try:
        if kind == "gaussian":
            b: GeneratorBackend = GaussianBackend()
        elif kind == "skew":
            prec = cfg.get("precision")
            kw = {"epsabs": float(prec)} if prec is not None else {}
            b = SkewNormalBackend(cfg.get("delta", []), **kw)
        elif kind == "product":
            laws = [distribution_from_spec(d) for d in cfg.get("densities", [])]
            default = cfg.get("default", {"law": "normal"})
            b = ProductBackend(laws, distribution_from_spec(default) if default is not None else None)
        elif kind == "classical":
            space = cfg.get("space", "finite")
            if space == "finite":
                b = FiniteBackend(cfg.get("weights", []))
            elif space == "unit":
                b = UnitIntervalBackend()
            else:
                raise ConfigError(f"unknown classical space {space!r}")
        else:
            raise ConfigError(f"unknown backend type {kind!r}")
    except (TypeError, ValueError) as exc:
        if isinstance(exc, ConfigError):
            raise
        raise ConfigError(str(exc)) from exc
    if cfg.get("corrupt"):
        b = CorruptedBackend(b)
    return b


def load_backend(source: Union[str, Mapping]) -> GeneratorBackend:
    """Backend from a mapping, a JSON file path, inline JSON text, or a bare type name."""
    if isinstance(source, Mapping):
        return backend_from_config(source)
    text = source.strip()
    if text.startswith("{"):
        try:
            cfg = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"invalid inline JSON: {exc}") from exc
        return backend_from_config(cfg)
    if os.path.exists(text):
        try:
            with open(text, encoding="utf-8") as fh:
                cfg = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read backend config {text}: {exc}") from exc
        return backend_from_config(cfg)
    if text in ("gaussian", "skew", "product"):
        return backend_from_config({"type": text})
    if text == "unit":
        return UnitIntervalBackend()
    if text in ("finite", "classical"):
        return FiniteBackend(["1/2", "1/2"])
    raise ConfigError(f"no such backend config file or type: {text!r}")
