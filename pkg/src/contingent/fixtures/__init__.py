"""Shipped fixture models and derivations."""

from __future__ import annotations

from importlib import resources

from ..modelfile import Model, loads
from ..proof import Derivation, loads_derivation

MODELS = ("item_v", "item_vi", "item_vii", "c_complement")
DERIVATIONS = ("dc_to_dc_prime", "dc_prime_to_dc", "dm_to_dm_prime", "dm_prime_to_dm")


def model_text(name: str) -> str:
    return resources.files(__name__).joinpath("models", f"{name}.model").read_text(encoding="utf-8")


def model(name: str) -> Model:
    return loads(model_text(name), f"{name}.model")


def derivation_text(name: str) -> str:
    return resources.files(__name__).joinpath("derivations", f"{name}.drv").read_text(encoding="utf-8")


def derivation(name: str) -> Derivation:
    return loads_derivation(derivation_text(name), f"{name}.drv")


def path(kind: str, name: str):
    """Filesystem location of a fixture (``kind`` is "models" or "derivations")."""
    suffix = ".model" if kind == "models" else ".drv"
    return resources.files(__name__).joinpath(kind, name + suffix)
