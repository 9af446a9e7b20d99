"""Hardware description files.

TOML with flat keys mirroring the hardware datasheet convention::

    mesh = [2, 2]
    crossbar_dim = 128
    neuron_energy_pj = 50.0
    switch_plus_2wire_pj = 147.0
    bandwidth_events_per_s = 1.8e9
    # optional overrides
    e_switch_pj = 49.0
    e_wire_pj = 49.0
    i_prog_nominal_ua = 50.0
    t_spk_s = 1e-3
    r_on_ohm = 1000.0
    r_par_ohm = 50.0
    nominal_conductance_s = 1e-4
    in_buffer_events = 1024
    out_buffer_events = 1024

Unspecified keys fall back to the defaults above (a 2x2 mesh of 128x128
crossbars). The switch/wire split defaults to equal thirds of the combined
switch + 2*wire constant; per-hop results at hop distance 2 are split
independent either way.
"""

from __future__ import annotations

from decimal import Decimal

try:
    import tomllib
except ModuleNotFoundError:  # Python 3.10
    import tomli as tomllib

from .model import HardwareModel


def _scale(value, exp: int) -> float:
    """Scale a datasheet number by a decimal power exactly.

    Config values are decimal (picojoules, microamperes); scaling them in
    decimal returns the closest double to the scaled value, so a config
    spelling out the defaults reproduces the default model bit-for-bit.
    """
    return float(Decimal(repr(float(value))).scaleb(exp))


class HardwareConfigError(ValueError):
    """Raised for unreadable or inconsistent hardware descriptions."""


_KNOWN_KEYS = {
    "mesh", "crossbar_dim", "neuron_energy_pj", "switch_plus_2wire_pj",
    "e_switch_pj", "e_wire_pj", "bandwidth_events_per_s", "i_prog_nominal_ua",
    "t_spk_s", "r_on_ohm", "r_par_ohm", "nominal_conductance_s",
    "in_buffer_events", "out_buffer_events",
}


def default_hardware() -> HardwareModel:
    return HardwareModel()


def hardware_from_dict(doc: dict) -> HardwareModel:
    """Absent keys fall through to the HardwareModel defaults untouched,
    so an empty document reproduces the default hardware bit-for-bit."""
    unknown = sorted(set(doc) - _KNOWN_KEYS)
    if unknown:
        raise HardwareConfigError(f"unknown hardware config keys: {unknown}")

    kwargs = {}
    if "mesh" in doc:
        mesh = doc["mesh"]
        if (not isinstance(mesh, (list, tuple)) or len(mesh) != 2
                or not all(isinstance(v, int) for v in mesh)):
            raise HardwareConfigError(f"mesh must be [width, height], got {mesh!r}")
        kwargs["mesh_width"], kwargs["mesh_height"] = mesh

    e_switch_pj = doc.get("e_switch_pj")
    e_wire_pj = doc.get("e_wire_pj")
    if (e_switch_pj is None) != (e_wire_pj is None):
        raise HardwareConfigError("e_switch_pj and e_wire_pj must be given together")
    if e_switch_pj is not None:
        if ("switch_plus_2wire_pj" in doc
                and e_switch_pj + 2.0 * e_wire_pj != doc["switch_plus_2wire_pj"]):
            raise HardwareConfigError(
                f"e_switch_pj + 2*e_wire_pj = {e_switch_pj + 2.0 * e_wire_pj} "
                f"contradicts switch_plus_2wire_pj = {doc['switch_plus_2wire_pj']}")
        kwargs["e_switch"] = _scale(e_switch_pj, -12)
        kwargs["e_wire"] = _scale(e_wire_pj, -12)
    elif "switch_plus_2wire_pj" in doc:
        third = _scale(float(doc["switch_plus_2wire_pj"]) / 3.0, -12)
        kwargs["e_switch"] = third
        kwargs["e_wire"] = third

    scaled = {
        "crossbar_dim": ("crossbar_dim", int),
        "in_buffer_events": ("in_buffer", int),
        "out_buffer_events": ("out_buffer", int),
        "bandwidth_events_per_s": ("bandwidth", float),
        "t_spk_s": ("t_spk", float),
        "r_on_ohm": ("r_on", float),
        "r_par_ohm": ("r_par", float),
        "nominal_conductance_s": ("w_nominal", float),
    }
    for key, (field, cast) in scaled.items():
        if key in doc:
            kwargs[field] = cast(doc[key])
    if "neuron_energy_pj" in doc:
        kwargs["e_neuron"] = _scale(doc["neuron_energy_pj"], -12)
    if "i_prog_nominal_ua" in doc:
        kwargs["i_prog_nominal"] = _scale(doc["i_prog_nominal_ua"], -6)

    try:
        return HardwareModel(**kwargs)
    except ValueError as exc:
        raise HardwareConfigError(str(exc)) from exc


def load_hardware_config(path) -> HardwareModel:
    try:
        with open(path, "rb") as fh:
            doc = tomllib.load(fh)
    except FileNotFoundError:
        raise HardwareConfigError(f"hardware config not found: {path}")
    except tomllib.TOMLDecodeError as exc:
        raise HardwareConfigError(f"{path}: not valid TOML: {exc}") from exc
    return hardware_from_dict(doc)
