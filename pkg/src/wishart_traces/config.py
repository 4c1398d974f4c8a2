"""JSON run configuration.

Example::

    {
      "N": 2,
      "sigmas": [[[[1, 0], [0.5, 0]], [[0.5, 0], [1, 0]]], "identity"],
      "p": [3, 5],
      "lambda": [1.0, 1.0],
      "m": [1, 1, 1, 1, 1, 1],
      "h": {"E12": [[[0, 0], [1, 0]], [[0, 0], [0, 0]]]}
    }

Matrix entries are ``[re, im]`` pairs (a bare number means a real entry);
the string ``"identity"`` stands for the N x N identity. Every Sigma is
checked to be Hermitian PSD on load.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .asymptotics import MomentSequence
from .moments import WishartModel, check_hermitian_psd

__all__ = ["ConfigError", "RunConfig", "load_config", "parse_matrix"]


class ConfigError(ValueError):
    pass


def parse_matrix(data, N: int | None = None, what: str = "matrix") -> np.ndarray:
    if data == "identity":
        if N is None:
            raise ConfigError(f"{what}: 'identity' needs N")
        return np.eye(N, dtype=complex)
    try:
        rows = [[complex(*e) if isinstance(e, list) else complex(e) for e in row] for row in data]
        M = np.array(rows, dtype=complex)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"{what}: entries must be numbers or [re, im] pairs ({exc})") from None
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise ConfigError(f"{what}: expected a square matrix, got shape {M.shape}")
    if N is not None and M.shape[0] != N:
        raise ConfigError(f"{what}: expected {N} x {N}, got {M.shape[0]} x {M.shape[1]}")
    return M


@dataclass
class RunConfig:
    N: int | None = None
    sigmas: tuple = ()
    p: tuple = ()
    lam: tuple = ()
    m: tuple = ()
    h: dict = field(default_factory=dict)

    def model(self) -> WishartModel:
        if not self.p:
            raise ConfigError("config has no shape parameters 'p'")
        if self.sigmas:
            if len(self.sigmas) != len(self.p):
                raise ConfigError(f"{len(self.sigmas)} Sigma matrices but {len(self.p)} shape values")
            return WishartModel(tuple(self.sigmas), tuple(float(x) for x in self.p))
        if self.N is None:
            raise ConfigError("config needs 'N' or 'sigmas'")
        return WishartModel.identity(self.N, tuple(float(x) for x in self.p))

    def moments(self) -> MomentSequence:
        if not self.m:
            raise ConfigError("config has no moment sequence 'm'")
        return MomentSequence(tuple(self.m))

    @classmethod
    def from_dict(cls, data: dict) -> "RunConfig":
        if not isinstance(data, dict):
            raise ConfigError("config must be a JSON object")
        unknown = set(data) - {"N", "sigmas", "p", "lambda", "m", "h"}
        if unknown:
            raise ConfigError(f"unknown config keys {sorted(unknown)}")
        N = data.get("N")
        if N is not None and (not isinstance(N, int) or N < 1):
            raise ConfigError("N must be a positive integer")
        sigmas = []
        for i, s in enumerate(data.get("sigmas", [])):
            M = parse_matrix(s, N, f"sigmas[{i}]")
            try:
                check_hermitian_psd(M)
            except ValueError as exc:
                raise ConfigError(f"sigmas[{i}]: {exc}") from None
            N = N or M.shape[0]
            sigmas.append(M)
        p = _numbers(data.get("p", []), "p", positive=True)
        lam = _numbers(_listify(data.get("lambda", [])), "lambda", positive=True)
        m = _numbers(data.get("m", []), "m")
        h = {str(k): parse_matrix(v, N, f"h[{k}]") for k, v in data.get("h", {}).items()}
        return cls(N, tuple(sigmas), p, lam, m, h)


def _listify(x):
    return x if isinstance(x, list) else [x]


def _numbers(xs, what, positive=False) -> tuple:
    if not isinstance(xs, list) or not all(isinstance(x, (int, float)) and not isinstance(x, bool) for x in xs):
        raise ConfigError(f"{what} must be a list of numbers")
    if positive and any(x <= 0 for x in xs):
        raise ConfigError(f"{what} values must be positive")
    return tuple(xs)


def load_config(path: str | Path) -> RunConfig:
    try:
        data = json.loads(Path(path).read_text())
    except OSError as exc:
        raise ConfigError(f"cannot read config: {exc}") from None
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config is not valid JSON: {exc}") from None
    return RunConfig.from_dict(data)
