"""Experiment configuration: JSON schema, validation, object builders."""
from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass

import jsonschema
import sympy as sp

from . import expr as ex
from .surface import (SurfaceMap, TwistStage, HamiltonianStage, ExplicitStage,
                      TimeHamiltonian, FlowSettings)


SCHEMA = {
    "type": "object",
    "required": ["name", "map", "orbits", "hamiltonian_family"],
    "additionalProperties": False,
    "properties": {
        "name": {"type": "string", "minLength": 1},
        "seed": {"type": "integer", "minimum": 0},
        "map": {
            "type": "object",
            "required": ["stages", "boundary_theta"],
            "additionalProperties": False,
            "properties": {
                "stages": {
                    "type": "array", "minItems": 1,
                    "items": {
                        "type": "object",
                        "required": ["type"],
                        "properties": {
                            "type": {"enum": ["twist", "hamiltonian", "explicit"]},
                            "rho": {"type": "string"},
                            "expression": {"type": "string"},
                            "x": {"type": "string"},
                            "y": {"type": "string"},
                        },
                    },
                },
                "boundary_theta": {
                    "type": "array", "minItems": 2, "maxItems": 2,
                    "items": {"type": "string"},
                },
                "boundary_collar": {"type": "number", "exclusiveMinimum": 0,
                                    "maximum": 0.45},
                "flow_steps": {"type": "integer", "minimum": 16},
            },
        },
        "orbits": {
            "type": "object",
            "required": ["periods"],
            "additionalProperties": False,
            "properties": {
                "periods": {"type": "array", "minItems": 1,
                            "items": {"type": "integer", "minimum": 1}},
                "grid": {"type": "array", "minItems": 2, "maxItems": 2,
                         "items": {"type": "integer", "minimum": 2}},
                "tolerance": {"type": "number", "exclusiveMinimum": 0},
            },
        },
        "hamiltonian_family": {
            "type": "object",
            "required": ["expression", "amplitudes"],
            "additionalProperties": False,
            "properties": {
                "expression": {"type": "string"},
                "amplitudes": {"type": "array", "minItems": 1,
                               "items": {"type": "number", "minimum": 0}},
            },
        },
        "sweep": {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                "samples": {"type": "integer", "minimum": 32},
                "entropy_iterations": {"type": "integer", "minimum": 1},
                "conjugacy_budget": {"type": "integer", "minimum": 1},
                "gap_degree": {"type": "integer", "minimum": 1},
                "gap_grid": {"type": "array", "minItems": 2, "maxItems": 2,
                             "items": {"type": "integer", "minimum": 2}},
                "norm_grid": {"type": "array", "minItems": 3, "maxItems": 3,
                              "items": {"type": "integer", "minimum": 4}},
            },
        },
    },
}


class ConfigError(ValueError):
    pass


@dataclass
class ExperimentConfig:
    raw: dict

    @classmethod
    def from_file(cls, path):
        try:
            with open(path) as fh:
                raw = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError("cannot read config %s: %s" % (path, exc))
        return cls.from_dict(raw)

    @classmethod
    def from_dict(cls, raw):
        try:
            jsonschema.validate(raw, SCHEMA)
        except jsonschema.ValidationError as exc:
            raise ConfigError("config schema violation at %s: %s"
                              % ("/".join(map(str, exc.absolute_path)),
                                 exc.message))
        amps = raw["hamiltonian_family"]["amplitudes"]
        if sorted(amps) != list(amps):
            raise ConfigError("amplitude grid must be sorted ascending")
        # parse every expression up front so errors are config errors
        for st in raw["map"]["stages"]:
            for key in ("rho", "expression", "x", "y"):
                if key in st:
                    ex.parse(st[key])
        for t in raw["map"]["boundary_theta"]:
            ex.parse(t)
        ex.parse(raw["hamiltonian_family"]["expression"])
        return cls(raw=raw)

    # -- accessors

    @property
    def name(self):
        return self.raw["name"]

    @property
    def seed(self):
        return self.raw.get("seed", 0)

    def config_hash(self):
        return hashlib.sha256(canonical_json(self.raw).encode()).hexdigest()

    def flow_settings(self):
        return FlowSettings(steps=self.raw["map"].get("flow_steps", 64))

    def build_map(self):
        mc = self.raw["map"]
        fs = self.flow_settings()
        collar = mc.get("boundary_collar", 0.1)
        stages = []
        for st in mc["stages"]:
            if st["type"] == "twist":
                if "rho" not in st:
                    raise ConfigError("twist stage needs 'rho'")
                stages.append(TwistStage(st["rho"]))
            elif st["type"] == "hamiltonian":
                if "expression" not in st:
                    raise ConfigError("hamiltonian stage needs 'expression'")
                H = TimeHamiltonian(st["expression"], collar=collar)
                stages.append(HamiltonianStage(H, fs))
            else:
                if "x" not in st or "y" not in st:
                    raise ConfigError("explicit stage needs 'x' and 'y'")
                stages.append(ExplicitStage(st["x"], st["y"]))
        return SurfaceMap(stages, boundary_theta=tuple(mc["boundary_theta"]),
                          boundary_collar=collar)

    def orbit_periods(self):
        return sorted(set(self.raw["orbits"]["periods"]))

    def orbit_grid(self):
        return tuple(self.raw["orbits"].get("grid", [12, 12]))

    def orbit_tolerance(self):
        return self.raw["orbits"].get("tolerance", 1e-10)

    def amplitudes(self):
        return list(self.raw["hamiltonian_family"]["amplitudes"])

    def family_hamiltonian(self, amplitude):
        e = ex.parse(self.raw["hamiltonian_family"]["expression"])
        e = ex.substitute(e, A=sp.nsimplify(amplitude, rational=True))
        collar = self.raw["map"].get("boundary_collar", 0.1)
        return TimeHamiltonian(e, collar=collar)

    def sweep_setting(self, key, default):
        return self.raw.get("sweep", {}).get(key, default)


def canonical_json(obj):
    return json.dumps(obj, sort_keys=True, separators=(",", ":"),
                      ensure_ascii=True)
