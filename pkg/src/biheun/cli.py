"""Command-line front end: spectra, wavefunctions, turning points, verification.

Works entirely in scaled units: the radial equation is
f'' + [2 eps + alpha/r - l(l+1)/r^2 - beta*r - k*r^2] f = 0, i.e. the
2M/hbar^2 factors are already absorbed into (alpha, beta, k) and energies.

For ``spectrum`` the linear coefficient beta is an *output*: polynomial
solutions exist only where beta = b K^3 for a root b of the termination
constraint, and each root defines a different potential.

Exit codes: 0 success, 2 config error, 3 solver failure, 4 verification failure.
"""

from __future__ import annotations

import argparse
import json
import sys as _sys
from dataclasses import asdict, dataclass, field

import numpy as np

from .model import PhysicalSystem, turning_points
from .oracle import RadialGrid, fd_eigensolve, match_energy
from .quantize import normalize, solve_family, wavefunction
from .verify import run_acceptance

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_SOLVER = 3
EXIT_VERIFY = 4


class ConfigError(ValueError):
    pass


class SolverError(RuntimeError):
    pass


@dataclass
class RunConfig:
    command: str
    n: str = "0"
    l: str = "0"
    alpha: float = 0.0
    k: float = 1.0
    beta: float | None = None  # turning-points only
    epsilon: float | None = None  # turning-points only
    branch: int = 0  # wavefunction only
    grid_points: int = 6000
    r_min: float | None = None
    r_max: float | None = None
    tol: float = 1e-5
    verify: bool = False
    format: str = "csv"
    out: str | None = None

    def n_values(self) -> list[int]:
        return _parse_range(self.n, "n")

    def l_values(self) -> list[int]:
        return _parse_range(self.l, "l")

    def validate(self) -> None:
        if self.k <= 0:
            raise ConfigError(f"k must be positive (got {self.k})")
        if self.tol <= 0:
            raise ConfigError(f"tol must be positive (got {self.tol})")
        if self.format not in ("csv", "json"):
            raise ConfigError(f"format must be csv or json (got {self.format})")
        self.n_values()
        self.l_values()


def _parse_range(spec: str, name: str) -> list[int]:
    spec = str(spec)
    try:
        if ".." in spec:
            lo, hi = spec.split("..")
            vals = list(range(int(lo), int(hi) + 1))
        else:
            vals = [int(spec)]
    except ValueError as exc:
        raise ConfigError(f"bad {name} range {spec!r}: expected INT or A..B") from exc
    if not vals or vals[0] < 0:
        raise ConfigError(f"{name} range {spec!r} is empty or negative")
    return vals


def _fmt(x) -> str:
    if isinstance(x, float):
        return f"{x:.17g}"
    return str(x)


def _emit(config: RunConfig, header: list[str], rows: list[list],
          diagnostics: dict) -> None:
    if config.format == "csv":
        lines = [",".join(header)]
        lines += [",".join(_fmt(v) for v in row) for row in rows]
        text = "\n".join(lines) + "\n"
    else:
        results = [dict(zip(header, row)) for row in rows]
        payload = {"config": asdict(config), "results": results,
                   "diagnostics": diagnostics}
        text = json.dumps(payload, indent=2) + "\n"
    if config.out:
        with open(config.out, "w", newline="\n") as fh:
            fh.write(text)
    else:
        _sys.stdout.write(text)


def _grid_for(config: RunConfig, sys: PhysicalSystem, eps_hint: float) -> RadialGrid:
    if config.r_min is not None and config.r_max is not None:
        return RadialGrid(config.r_min, config.r_max, config.grid_points)
    grid = RadialGrid.auto(sys, epsilon_hint=eps_hint, points=config.grid_points)
    if config.r_max is not None:
        h = config.r_max / (config.grid_points + 1)
        grid = RadialGrid(h, config.grid_points * h, config.grid_points)
    return grid


def cmd_spectrum(config: RunConfig) -> None:
    header = ["n", "l", "branch", "b", "beta", "epsilon",
              "constraint_residual", "ode_residual"]
    if config.verify:
        header.append("oracle_gap")
    rows: list[list] = []
    diagnostics: dict = {"families": 0, "solutions": 0}
    for n in config.n_values():
        for l in config.l_values():
            sols = solve_family(n, l, config.alpha, config.k)
            diagnostics["families"] += 1
            for branch, sol in enumerate(sols):
                diagnostics["solutions"] += 1
                row = [n, l, branch, sol.b_root, sol.beta, sol.epsilon,
                       sol.residuals.constraint, sol.residuals.ode_sup]
                if config.verify:
                    res = fd_eigensolve(
                        sol.system(),
                        _grid_for(config, sol.system(), sol.epsilon),
                        2 * n + l + 8,
                    )
                    m = match_energy(res, sol.epsilon, config.tol)
                    if m is None:
                        raise SolverError(
                            f"oracle did not confirm epsilon={sol.epsilon} "
                            f"for (n={n}, l={l}, branch={branch})"
                        )
                    row.append(m[1])
                rows.append(row)
    _emit(config, header, rows, diagnostics)


def cmd_wavefunction(config: RunConfig) -> None:
    n = config.n_values()[0]
    l = config.l_values()[0]
    sols = solve_family(n, l, config.alpha, config.k)
    if not sols:
        raise SolverError(f"no quasi-exact solution for (n={n}, l={l})")
    if not (0 <= config.branch < len(sols)):
        raise ConfigError(f"branch {config.branch} out of range: {len(sols)} branches")
    sol = sols[config.branch]

    sys = sol.system()
    grid = _grid_for(config, sys, sol.epsilon)
    res = fd_eigensolve(sys, grid, 2 * n + l + 8)
    m = match_energy(res, sol.epsilon, config.tol)
    if m is None:
        raise SolverError(f"oracle spectrum has no level near epsilon={sol.epsilon}")
    r = grid.nodes()
    r_oracle = normalize(r, res.vectors[m[0]] / r)
    r_poly = normalize(r, wavefunction(sol, r))
    if np.dot(r_poly, r_oracle) < 0:
        r_oracle = -r_oracle

    header = ["r", "R_polynomial", "R_oracle", "difference"]
    rows = [[float(ri), float(p), float(o), float(p - o)]
            for ri, p, o in zip(r, r_poly, r_oracle)]
    diagnostics = {
        "epsilon": sol.epsilon, "beta": sol.beta, "b": sol.b_root,
        "oracle_index": m[0], "oracle_gap": m[1],
        "node_count": res.node_counts[m[0]],
    }
    _emit(config, header, rows, diagnostics)


def cmd_turning_points(config: RunConfig) -> None:
    if config.epsilon is None:
        raise ConfigError("turning-points requires --epsilon")
    beta = config.beta if config.beta is not None else 0.0
    l = config.l_values()[0]
    sys = PhysicalSystem(alpha=config.alpha, beta=beta, k=config.k, l=l)
    tp = turning_points(sys, config.epsilon)
    header = ["root_index", "re", "im", "is_real", "vieta_residual"]
    rows = [
        [i, z.real, z.imag, int(i < tp.real_count), tp.vieta_residuals[i]]
        for i, z in enumerate(tp.roots)
    ]
    diagnostics = {"real_count": tp.real_count,
                   "max_vieta_residual": max(tp.vieta_residuals)}
    _emit(config, header, rows, diagnostics)


def cmd_verify(config: RunConfig) -> None:
    results = run_acceptance()
    if not all(r.passed for r in results):
        raise VerificationFailure()


class VerificationFailure(Exception):
    pass


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="biheun",
        description="Quasi-exact radial bound states of U = -alpha/r + beta*r + k*r^2 "
        "via bi-confluent Heun series termination (scaled units).",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, with_system=True):
        p.add_argument("--config", help="JSON config file; flags take precedence")
        if with_system:
            p.add_argument("--n", help="polynomial degree, INT or A..B")
            p.add_argument("--l", help="orbital quantum number, INT or A..B")
            p.add_argument("--alpha", type=float, help="Coulomb strength (scaled)")
            p.add_argument("--k", type=float, help="harmonic coefficient, > 0")
        p.add_argument("--grid-points", type=int, dest="grid_points")
        p.add_argument("--r-min", type=float, dest="r_min")
        p.add_argument("--r-max", type=float, dest="r_max")
        p.add_argument("--tol", type=float, help="oracle matching tolerance (relative)")
        p.add_argument("--format", choices=("csv", "json"))
        p.add_argument("--out", help="output path (default: stdout)")

    p = sub.add_parser("spectrum", help="quasi-exact energies per (n, l) family")
    common(p)
    p.add_argument("--verify", action="store_true",
                   help="confirm each energy against the finite-difference oracle")

    p = sub.add_parser("wavefunction", help="polynomial vs oracle wavefunction")
    common(p)
    p.add_argument("--branch", type=int, help="which b root (ascending order)")

    p = sub.add_parser("turning-points", help="quartic roots and Vieta residuals")
    common(p)
    p.add_argument("--beta", type=float, help="explicit linear coefficient")
    p.add_argument("--epsilon", type=float, help="energy at which to evaluate")

    p = sub.add_parser("verify", help="run the full acceptance suite")
    common(p, with_system=False)
    return parser


def config_from_args(args: argparse.Namespace) -> RunConfig:
    values: dict = {}
    if getattr(args, "config", None):
        try:
            with open(args.config) as fh:
                loaded = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read config file {args.config}: {exc}") from exc
        if not isinstance(loaded, dict):
            raise ConfigError("config file must hold a JSON object")
        loaded.pop("command", None)
        loaded.pop("config", None)
        known = set(RunConfig.__dataclass_fields__)
        unknown = set(loaded) - known
        if unknown:
            raise ConfigError(f"unknown config keys: {sorted(unknown)}")
        values.update(loaded)
    for key in RunConfig.__dataclass_fields__:
        if key == "command":
            continue
        flag = getattr(args, key, None)
        if flag is not None and flag is not False:
            values[key] = flag
    cfg = RunConfig(command=args.command, **values)
    cfg.validate()
    return cfg


COMMANDS = {
    "spectrum": cmd_spectrum,
    "wavefunction": cmd_wavefunction,
    "turning-points": cmd_turning_points,
    "verify": cmd_verify,
}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        config = config_from_args(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=_sys.stderr)
        return EXIT_CONFIG
    try:
        COMMANDS[config.command](config)
    except ConfigError as exc:
        print(f"config error: {exc}", file=_sys.stderr)
        return EXIT_CONFIG
    except VerificationFailure:
        print("verification failed", file=_sys.stderr)
        return EXIT_VERIFY
    except (SolverError, ValueError, RuntimeError) as exc:
        print(f"solver error: {exc}", file=_sys.stderr)
        return EXIT_SOLVER
    return EXIT_OK


if __name__ == "__main__":
    raise SystemExit(main())
