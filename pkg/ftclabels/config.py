"""Scheme configuration model and config file loading."""

try:
    import tomllib
except ImportError:
    import tomli as tomllib

from enum import Enum
from io import IOBase
from os import PathLike
from typing import Any, Dict, Mapping, Optional, Union, cast

from pydantic import BaseModel, Extra, ValidationError, root_validator, validator

from .exceptions import ConfigError


class HierarchyMode(str, Enum):
    DETERMINISTIC = "deterministic"
    RANDOMIZED = "randomized"
    # Reserved for the O(log log N)-size rectangle net. Only its existence is known; selecting it
    # is rejected at validation time.
    LOGLOG_NET = "loglog-net"


class SchemeConfig(BaseModel):
    """
    Construction parameters of a label set.

    mode:              Hierarchy backend.
    f:                 Fault budget; queries with more than f faults are rejected.
    c_net:             Multiplier of the deterministic decode threshold K = ⌈c_net·(2f+1)²·log2 n′⌉.
    seed:              Seed for the randomized hierarchy. Drawn at build time when omitted.
    netfind_base:      NetFind returns nothing for point sets of size <= netfind_base·log2 N.
    netfind_eps:       NetFind requests (netfind_eps·log2 N / |P_i|)-nets for the half-planes.
    random_threshold:  Randomized levels stop once |E_i| <= random_threshold·f·log2 n′.
    """

    mode: HierarchyMode = HierarchyMode.DETERMINISTIC
    f: int = 1
    c_net: int = 32
    seed: Optional[int] = None
    netfind_base: int = 4
    netfind_eps: int = 16
    random_threshold: int = 5

    class Config:
        extra = Extra.forbid
        allow_mutation = False

    @validator("f", "c_net", "netfind_base", "netfind_eps", "random_threshold")
    def validate_positive(cls, value: int) -> int:
        if value < 1:
            raise ValueError("must be at least 1")
        return value

    @validator("mode")
    def validate_mode(cls, mode: HierarchyMode) -> HierarchyMode:
        if mode is HierarchyMode.LOGLOG_NET:
            raise ValueError(
                "the loglog-net hierarchy has no construction in this package; use "
                "'deterministic' or 'randomized'"
            )
        return mode

    @root_validator(pre=False, skip_on_failure=True)
    def validate_seed(cls, values: Mapping[str, Any]) -> Mapping[str, Any]:
        """Ensure that a seed is only supplied together with the randomized mode."""
        if values.get("seed") is not None:
            if values["mode"] is not HierarchyMode.RANDOMIZED:
                raise ValueError("a seed is only meaningful in randomized mode")
            if not 0 <= values["seed"] < 2**64:
                raise ValueError("seed must fit in an unsigned 64-bit integer")
        return values


def make_config(**settings: Any) -> SchemeConfig:
    """
    Create a SchemeConfig, converting pydantic validation errors into ConfigErrors.

    Settings that are None are dropped, so that unset command-line flags fall back to defaults.
    """
    try:
        return SchemeConfig(**{k: v for k, v in settings.items() if v is not None})
    except ValidationError as error:
        details = "; ".join(
            f"{'.'.join(str(part) for part in e['loc'])}: {e['msg']}"
            for e in error.errors()
        )
        raise ConfigError(f"invalid scheme configuration: {details}") from error


def load_config(
    config_file: Union[str, PathLike, IOBase, None] = None, **overrides: Any
) -> SchemeConfig:
    """
    Load a SchemeConfig from a TOML document with a [scheme] table, then apply overrides.

    The config file may be given as a path or as an open binary file object.
    """
    settings: Dict[str, Any] = {}
    if config_file:
        try:
            try:
                cast(IOBase, config_file).seek(0)
                config = tomllib.load(config_file)  # type: ignore[arg-type]
            except AttributeError:
                with open(cast(Union[str, PathLike], config_file), "rb") as file_:
                    config = tomllib.load(file_)
        except (OSError, tomllib.TOMLDecodeError) as error:
            raise ConfigError(f"unable to read config file: {error}") from error

        settings.update(
            {key.replace("-", "_"): value for key, value in config.get("scheme", {}).items()}
        )

    settings.update({k: v for k, v in overrides.items() if v is not None})

    return make_config(**settings)
