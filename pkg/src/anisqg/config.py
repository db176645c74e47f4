"""
Key-value configuration files.

One ``key = value`` per line; ``#`` starts a comment. Call-style values such
as ``plane_wave(k1=3, k2=2)`` carry keyword or positional arguments; list
arguments are separated by ``;``. Every error names the key and line.

Simulation keys::

    grid               = 128            (or 128x64 for n1 x n2)
    alpha, beta        = exponents in (0, 1]
    mu, nu             = dissipation coefficients (default 1)
    velocity_law       = sqg | pm
    t_end              = final time
    dt | cfl_factor    = exactly one
    initial_condition  = plane_wave(k1=, k2=, amplitude=)
                       | random(seed=, kmax=, amplitude=, decay_rate=)
                       | from_checkpoint(path=)
    diagnostics_every  = record every k steps (default 1)
    seed               = default seed for random(...)
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Callable

from .gronwall import Coefficient, Constant, GronwallError, GronwallProblem, Piecewise, Polynomial
from .solver import CheckpointIC, PlaneWaveIC, RandomIC, SimulationConfig


class ConfigError(ValueError):
    def __init__(self, message: str, line: int | None = None, key: str | None = None, source: str = "<config>"):
        where = f"{source}:{line}: " if line is not None else f"{source}: "
        super().__init__(where + message)
        self.line = line
        self.key = key


@dataclass(frozen=True)
class Entry:
    key: str
    value: str
    line: int


@dataclass(frozen=True)
class Call:
    name: str
    args: tuple[str, ...]
    kwargs: dict[str, str]


_LINE = re.compile(r"^\s*([A-Za-z_][A-Za-z0-9_]*)\s*=\s*(.*?)\s*$")
_CALL = re.compile(r"^([A-Za-z_][A-Za-z0-9_]*)\s*\((.*)\)$")


def read_entries(text: str, source: str = "<config>") -> dict[str, Entry]:
    entries: dict[str, Entry] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        m = _LINE.match(line)
        if not m:
            raise ConfigError(f"expected 'key = value', got {raw.strip()!r}", lineno, source=source)
        key, value = m.groups()
        if not value:
            raise ConfigError(f"empty value for {key!r}", lineno, key, source)
        if key in entries:
            raise ConfigError(f"duplicate key {key!r} (first set on line {entries[key].line})", lineno, key, source)
        entries[key] = Entry(key, value, lineno)
    return entries


def parse_call(text: str) -> Call:
    m = _CALL.match(text.strip())
    if not m:
        raise ValueError(f"expected name(arg, ...), got {text!r}")
    name, inner = m.groups()
    args, kwargs = [], {}
    for part in filter(None, (p.strip() for p in inner.split(","))):
        if "=" in part:
            k, v = (s.strip() for s in part.split("=", 1))
            if k in kwargs:
                raise ValueError(f"argument {k!r} given twice")
            kwargs[k] = v
        elif kwargs:
            raise ValueError("positional argument after keyword argument")
        else:
            args.append(part)
    return Call(name, tuple(args), kwargs)


class _Reader:
    def __init__(self, entries: dict[str, Entry], allowed: set[str], source: str):
        self.entries = entries
        self.source = source
        for key, e in entries.items():
            if key not in allowed:
                raise ConfigError(f"unknown key {key!r}; allowed keys: {', '.join(sorted(allowed))}", e.line, key, source)

    def error(self, key: str, message: str) -> ConfigError:
        e = self.entries.get(key)
        return ConfigError(message, e.line if e else None, key, self.source)

    def has(self, key: str) -> bool:
        return key in self.entries

    def get(self, key: str, convert: Callable[[str], object], default=None, required: bool = False):
        if key not in self.entries:
            if required:
                raise ConfigError(f"missing required key {key!r}", None, key, self.source)
            return default
        raw = self.entries[key].value
        try:
            return convert(raw)
        except (ValueError, TypeError) as exc:
            raise self.error(key, f"bad value for {key!r}: {exc}") from None

    def number(self, key, default=None, required=False, check=None, rule=""):
        value = self.get(key, float, default, required)
        if value is not None and check is not None and not check(value):
            raise self.error(key, f"{key} = {value!r} is out of range: {rule}")
        return value


def _int(text: str) -> int:
    value = float(text)
    if value != int(value):
        raise ValueError(f"expected an integer, got {text!r}")
    return int(value)


def _grid(text: str) -> tuple[int, int]:
    parts = re.split(r"\s*[x×,]\s*", text.strip())
    if len(parts) == 1:
        n = _int(parts[0])
        return n, n
    if len(parts) == 2:
        return _int(parts[0]), _int(parts[1])
    raise ValueError(f"grid must be N or N1xN2, got {text!r}")


def _unquote(text: str) -> str:
    text = text.strip()
    if len(text) >= 2 and text[0] == text[-1] and text[0] in "'\"":
        return text[1:-1]
    return text


SIMULATION_KEYS = {
    "grid", "alpha", "beta", "mu", "nu", "velocity_law", "t_end", "dt", "cfl_factor",
    "initial_condition", "diagnostics_every", "seed",
}


def _initial_condition(text: str, default_seed: int | None):
    call = parse_call(text)
    kw = dict(call.kwargs)
    if call.args:
        raise ValueError(f"{call.name}(...) takes keyword arguments only")
    def take(name, convert, default=None):
        if name in kw:
            return convert(kw.pop(name))
        if default is None:
            raise ValueError(f"{call.name}(...) needs {name}=")
        return default
    if call.name == "plane_wave":
        ic = PlaneWaveIC(take("k1", _int), take("k2", _int), take("amplitude", float, 1.0))
    elif call.name == "random":
        seed = kw.pop("seed", None)
        if seed is None and default_seed is None:
            raise ValueError("random(...) needs seed= (or a top-level seed key)")
        ic = RandomIC(_int(seed) if seed is not None else default_seed, take("kmax", _int),
                      take("amplitude", float, 1.0), take("decay_rate", float, 2.0))
    elif call.name == "from_checkpoint":
        ic = CheckpointIC(_unquote(take("path", str)))
    else:
        raise ValueError(f"unknown initial condition {call.name!r}; expected plane_wave, random or from_checkpoint")
    if kw:
        raise ValueError(f"{call.name}(...) got unexpected argument(s) {sorted(kw)}")
    return ic


def parse_config(text: str, source: str = "<config>") -> SimulationConfig:
    r = _Reader(read_entries(text, source), SIMULATION_KEYS, source)
    n1, n2 = r.get("grid", _grid, required=True)
    for n in (n1, n2):
        if n < 8 or n % 2:
            raise r.error("grid", f"grid sizes must be even and >= 8, got {n1}x{n2}")
    unit = lambda v: 0 < v <= 1
    alpha = r.number("alpha", required=True, check=unit, rule="need 0 < alpha <= 1")
    beta = r.number("beta", required=True, check=unit, rule="need 0 < beta <= 1")
    mu = r.number("mu", 1.0, check=lambda v: v >= 0, rule="need mu >= 0")
    nu = r.number("nu", 1.0, check=lambda v: v >= 0, rule="need nu >= 0")
    law = r.get("velocity_law", _unquote, "sqg")
    if law not in ("sqg", "pm"):
        raise r.error("velocity_law", f"velocity_law must be sqg or pm, got {law!r}")
    t_end = r.number("t_end", required=True, check=lambda v: v > 0, rule="need t_end > 0")
    if r.has("dt") and r.has("cfl_factor"):
        raise r.error("cfl_factor", "dt and cfl_factor are mutually exclusive; set only one")
    if not (r.has("dt") or r.has("cfl_factor")):
        raise ConfigError("one of 'dt' or 'cfl_factor' is required", None, "dt", source)
    dt = r.number("dt", check=lambda v: v > 0, rule="need dt > 0")
    cfl = r.number("cfl_factor", check=lambda v: v > 0, rule="need cfl_factor > 0")
    every = r.get("diagnostics_every", _int, 1)
    if every < 1:
        raise r.error("diagnostics_every", f"diagnostics_every must be >= 1, got {every}")
    seed = r.get("seed", _int)
    ic = r.get("initial_condition", lambda s: _initial_condition(s, seed), required=True)
    if isinstance(ic, RandomIC) and 3 * ic.kmax > min(n1, n2):
        raise r.error("initial_condition", f"random kmax={ic.kmax} exceeds min(n1, n2)/3 for grid {n1}x{n2}")
    try:
        return SimulationConfig(n1, n2, alpha, beta, t_end, ic, mu, nu, law, dt, cfl, every)
    except ValueError as exc:
        raise ConfigError(str(exc), None, None, source) from None


def config_to_dict(cfg: SimulationConfig) -> dict:
    ic = cfg.initial_condition
    if isinstance(ic, PlaneWaveIC):
        ic_text = f"plane_wave(k1={ic.k1}, k2={ic.k2}, amplitude={ic.amplitude!r})"
    elif isinstance(ic, RandomIC):
        ic_text = f"random(seed={ic.seed}, kmax={ic.kmax}, amplitude={ic.amplitude!r}, decay_rate={ic.decay_rate!r})"
    else:
        ic_text = f"from_checkpoint(path={ic.path})"
    return {
        "grid": f"{cfg.n1}x{cfg.n2}",
        "alpha": cfg.alpha,
        "beta": cfg.beta,
        "mu": cfg.mu,
        "nu": cfg.nu,
        "velocity_law": cfg.velocity_law,
        "t_end": cfg.t_end,
        "dt": cfg.dt,
        "cfl_factor": cfg.cfl_factor,
        "initial_condition": ic_text,
        "diagnostics_every": cfg.diagnostics_every,
    }


# ---------------------------------------------------------------------------
# Gronwall problems

GRONWALL_KEYS = {"gamma", "alpha_g", "beta_g", "C1", "K", "T", "A0", "l", "m", "n", "f"}


def _floats(text: str) -> tuple[float, ...]:
    return tuple(float(x) for x in text.split(";") if x.strip())


def parse_coefficient(text: str) -> Coefficient:
    """constant(c) | polynomial(c0, c1, ...) | piecewise(breaks=b1;b2, values=v0;v1;v2)."""
    call = parse_call(text)
    if call.name == "constant" and len(call.args) == 1 and not call.kwargs:
        return Constant(float(call.args[0]))
    if call.name == "polynomial" and call.args and not call.kwargs:
        return Polynomial(tuple(float(a) for a in call.args))
    if call.name == "piecewise" and not call.args and set(call.kwargs) == {"breaks", "values"}:
        return Piecewise(_floats(call.kwargs["breaks"]), _floats(call.kwargs["values"]))
    raise ValueError(f"cannot read coefficient {text!r}; expected constant(c), polynomial(c0, ...) or piecewise(breaks=..., values=...)")


def parse_gronwall_config(text: str, source: str = "<config>") -> GronwallProblem:
    r = _Reader(read_entries(text, source), GRONWALL_KEYS, source)
    values = {k: r.number(k, required=True) for k in ("gamma", "alpha_g", "beta_g", "C1")}
    values.update({k: r.number(k, d) for k, d in (("K", 0.0), ("T", 1.0), ("A0", 1.0))})
    coeffs = {k: r.get(k, parse_coefficient, Constant(0.0)) for k in ("l", "m", "n", "f")}
    try:
        return GronwallProblem(**values, **coeffs)
    except GronwallError as exc:
        raise ConfigError(str(exc), None, None, source) from None
