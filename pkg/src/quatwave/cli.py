"""Command-line scenario runner.

Usage::

    quatwave coeffs  --config scenario.cfg --out results/
    quatwave evolve  --config scenario.cfg --out results/
    quatwave compare --config scenario.cfg --out results/

The configuration is flat ``key = value`` text; ``#`` starts a comment.
Every key is optional; defaults are the fields of ``Scenario``.  Exit codes: 0 success,
2 configuration error, 3 domain error (``E0 <= V0`` and similar),
4 numerical-resolution failure, 5 output not writable.
"""
from __future__ import annotations

import argparse
import csv
import json
import logging
import math
import sys
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from . import approx
from .metrics import ClearanceError, numeric_probabilities, observe, peak_trajectory
from .packet import (
    DEFAULT_TAUS,
    QuadratureResolutionError,
    SpectralParams,
    WindowError,
    synthesize,
    total_field,
)
from .step import DomainError, Kinematics, PotentialSpec, canonicalize, coefficients, matching_residual

log = logging.getLogger("quatwave")

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_DOMAIN = 3
EXIT_NUMERIC = 4
EXIT_IO = 5

CSV_HEADER = ("x_over_a", "density_complex", "density_quaternionic")
CSV_PATTERN = "evolve_tau_{tau:+.4f}.csv"
SUMMARY_KEYS = ("scenario", "kinematics", "coefficients", "probabilities", "velocities", "fit", "observables")


class ConfigError(ValueError):
    pass


def _floats(text):
    return tuple(float(v) for v in text.replace(",", " ").split())


PARSERS = {
    "e0_over_v0": float,
    "av0": float,
    "potential": str,
    "v1": float,
    "v2": float,
    "v3": float,
    "tau_list": _floats,
    "grid_min": float,
    "grid_max": float,
    "grid_points": int,
    "truncation": float,
    "nodes": lambda s: None if s.lower() == "auto" else int(s),
    "tau0": float,
    "fit_taus": _floats,
    "out_dir": str,
}


@dataclass
class Scenario:
    e0_over_v0: float = 2.0
    av0: float = 100.0
    potential: str = "quaternionic"
    v1: float = 0.0
    v2: float = 1.0
    v3: float = 0.0
    tau_list: tuple = DEFAULT_TAUS
    grid_min: float = -30.0
    grid_max: float = 30.0
    grid_points: int = 4801
    truncation: float = 6.0
    nodes: int | None = None
    tau0: float = 0.15
    fit_taus: tuple = (0.05, 0.10, 0.15)
    out_dir: str = "out"
    lines: dict = field(default_factory=dict, repr=False, compare=False)

    def where(self, key):
        line = self.lines.get(key)
        return f"line {line}: " if line else ""

    def validate(self):
        if self.potential not in ("complex", "quaternionic", "general"):
            raise ConfigError(f"{self.where('potential')}potential must be complex, quaternionic or general")
        if not self.av0 > 0:
            raise ConfigError(f"{self.where('av0')}av0 must be positive")
        if self.grid_points < 3:
            raise ConfigError(f"{self.where('grid_points')}grid_points must be at least 3")
        if not self.grid_max > self.grid_min:
            raise ConfigError(f"{self.where('grid_max')}grid_max must exceed grid_min")
        if not self.tau_list:
            raise ConfigError(f"{self.where('tau_list')}tau_list is empty")
        if len(self.fit_taus) < 3:
            raise ConfigError(f"{self.where('fit_taus')}fit_taus needs at least three values")
        if not self.truncation > 0:
            raise ConfigError(f"{self.where('truncation')}truncation must be positive")
        if not self.e0_over_v0 > 1:
            raise DomainError(f"{self.where('e0_over_v0')}e0_over_v0 must exceed 1 (diffusion regime only)")
        self.canonical()

    def canonical(self):
        """Canonical form of the scenario potential and the case it maps to."""
        if self.potential == "complex":
            spec = PotentialSpec(1.0, 0.0, 0.0)
        elif self.potential == "quaternionic":
            spec = PotentialSpec(0.0, 1.0, 0.0)
        else:
            spec = PotentialSpec(self.v1, self.v2, self.v3)
        canon, alpha = canonicalize(spec)
        if canon.magnitude == 0:
            raise ConfigError(f"{self.where('v1')}general potential has zero magnitude")
        if canon.v1 < 0:
            raise ConfigError(f"{self.where('v1')}v1 must be non-negative")
        if canon.v1 > 0 and canon.v_perp > 0:
            raise DomainError(
                f"{self.where('v1')}mixed potentials (v1 and v_perp both nonzero) have no packet treatment"
            )
        case = "complex" if canon.v1 > 0 else "quaternionic"
        return spec, canon, alpha, case

    def kinematics(self):
        return Kinematics.from_ratio(self.e0_over_v0, self.av0)

    def spectral(self, kin):
        return SpectralParams.for_kinematics(kin, truncation=self.truncation, nodes=self.nodes)

    def grid(self):
        return np.linspace(self.grid_min, self.grid_max, self.grid_points)

    def as_dict(self):
        d = asdict(self)
        d.pop("lines")
        d["tau_list"] = list(self.tau_list)
        d["fit_taus"] = list(self.fit_taus)
        return d


def parse_config(text: str) -> Scenario:
    values, lines = {}, {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected 'key = value', got {raw.strip()!r}")
        key, value = (s.strip() for s in line.split("=", 1))
        if key not in PARSERS:
            raise ConfigError(f"line {lineno}: unknown key {key!r}")
        if key in values:
            raise ConfigError(f"line {lineno}: duplicate key {key!r}")
        try:
            values[key] = PARSERS[key](value)
        except ValueError:
            raise ConfigError(f"line {lineno}: bad value for {key}: {value!r}") from None
        lines[key] = lineno
    return Scenario(**values, lines=lines)


def load_scenario(path) -> Scenario:
    if path is None:
        return Scenario()
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from None
    return parse_config(text)


def _cplx(prefix, z):
    z = complex(z)
    return {f"{prefix}_re": z.real, f"{prefix}_im": z.imag}


def _base_summary(sc: Scenario) -> dict:
    kin = sc.kinematics()
    sp = sc.spectral(kin)
    spec, canon, alpha, case = sc.canonical()
    c = coefficients("complex", kin, kin.eps0)
    q = coefficients("quaternionic", kin, kin.eps0)
    p_ref_c, p_tra_c = approx.probabilities("complex", kin)
    p_ref_q, p_tra_q = approx.probabilities("quaternionic", kin)
    fit = approx.fit_w0(kin)
    fit_v = approx.fit_w0_velocity(kin)

    scenario = sc.as_dict()
    scenario.update(
        canonical_v1=canon.v1,
        canonical_v_perp=canon.v_perp,
        canonical_alpha=alpha,
        dispatched_case=case,
    )
    return {
        "scenario": scenario,
        "kinematics": {
            "eps0": kin.eps0,
            "eps_min": kin.eps_min,
            "sigma0": kin.sigma0,
            "rho0": kin.rho0,
            **_cplx("w0", kin.w0),
            "w0_abs": abs(kin.w0),
            "e0_over_v0": kin.e_over_v,
            "cutoff_ratio": sp.cutoff_ratio,
            "closed_form_valid": approx.is_valid(sp),
        },
        "coefficients": {
            "r_c": float(c.r.real),
            "t_c": float(c.t.real),
            **_cplx("r_q", q.r),
            **_cplx("r_tilde_q", q.r_tilde),
            "t_q": float(q.t.real),
            **_cplx("t_tilde_q", q.t_tilde),
            "matching_residual_c": float(matching_residual(c)),
            "matching_residual_q": float(matching_residual(q)),
        },
        "probabilities": {
            "p_ref_c": p_ref_c,
            "p_tra_c": p_tra_c,
            "p_ref_q": p_ref_q,
            "p_tra_q": p_tra_q,
            "ref_ratio_c_over_q": p_ref_c / p_ref_q,
            "unitarity_residual_c": p_ref_c + p_tra_c - 1,
            "unitarity_residual_q": p_ref_q + p_tra_q - 1,
        },
        "velocities": {
            **approx.velocities(kin),
            "peak_position_ratio": approx.peak_position_ratio(sc.e0_over_v0),
        },
        "fit": {
            "e0_over_w0": kin.e0 / fit.w0,
            "w0_over_v0": fit.w0 / kin.v0,
            "p_ref_fitted": fit.p_ref,
            "p_ref_q": p_ref_q,
            "gap_ratio": fit.p_ref / p_ref_q,
            "e0_over_w0_velocity": kin.e0 / fit_v.w0,
            "w0_over_v0_velocity": fit_v.w0 / kin.v0,
            "p_ref_fitted_velocity": fit_v.p_ref,
            "gap_ratio_velocity": fit_v.p_ref / p_ref_q,
        },
        "observables": {},
    }


def run_coeffs(sc: Scenario) -> dict:
    sc.validate()
    return _base_summary(sc)


def _tau_key(tau):
    return f"{tau:+.4f}"


def _numeric(sp, kin, case, grid, tau0, fit_taus, threads=None):
    inc = synthesize(sp, kin, case, "incident", -tau0, grid, threads)
    ref = synthesize(sp, kin, case, "reflected", tau0, grid, threads)
    tra = synthesize(sp, kin, case, "transmitted", tau0, grid, threads)
    p_ref, p_tra = numeric_probabilities(inc, ref, tra)
    v_tra, _, res_tra = peak_trajectory([synthesize(sp, kin, case, "transmitted", t, grid, threads) for t in fit_taus])
    v_ref, _, res_ref = peak_trajectory([synthesize(sp, kin, case, "reflected", t, grid, threads) for t in fit_taus])
    return {
        "p_ref": p_ref,
        "p_tra": p_tra,
        "v_tra": v_tra,
        "v_tra_fit_residual": res_tra,
        "v_ref": v_ref,
        "v_ref_fit_residual": res_ref,
    }


def _component_observables(sp, kin, case, tau, grid, threads=None):
    out = {}
    comps = ["incident", "reflected", "transmitted"]
    if case == "quaternionic":
        comps += ["evanescent-I", "evanescent-II"]
    for comp in comps:
        g = grid
        if comp == "evanescent-I":
            g = grid[grid <= 0]
        elif comp == "evanescent-II":
            g = grid[grid >= 0]
        if g.size == 0:
            continue
        out[comp] = observe(synthesize(sp, kin, case, comp, tau, g, threads)).as_dict()
    return out


def write_csv(path, grid, dens_c, dens_q):
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(CSV_HEADER)
        for row in zip(grid, dens_c, dens_q):
            writer.writerow([repr(float(v)) for v in row])


def read_csv(path):
    """Read an evolve CSV back into ``(x, density_complex, density_quaternionic)`` arrays."""
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        if tuple(header) != CSV_HEADER:
            raise ValueError(f"unexpected header {header}")
        rows = np.array([[float(v) for v in r] for r in reader])
    return rows[:, 0], rows[:, 1], rows[:, 2]


def run_evolve(sc: Scenario, out_dir, threads=None) -> dict:
    sc.validate()
    summary = _base_summary(sc)
    kin = sc.kinematics()
    sp = sc.spectral(kin)
    grid = sc.grid()
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)

    per_tau = {}
    files = []
    for tau in sc.tau_list:
        dens = {}
        obs = {}
        for case in ("complex", "quaternionic"):
            try:
                total = total_field(sp, kin, case, tau, grid, threads)
            except QuadratureResolutionError as exc:
                raise QuadratureResolutionError(f"tau={tau}: {exc}") from None
            dens[case] = total.density()
            obs[case] = {"total": observe(total).as_dict(), **_component_observables(sp, kin, case, tau, grid, threads)}
        path = out_dir / CSV_PATTERN.format(tau=tau)
        write_csv(path, grid, dens["complex"], dens["quaternionic"])
        files.append(path.name)
        per_tau[_tau_key(tau)] = obs
        log.info("tau=%+.4f written to %s", tau, path)

    numeric = {}
    for case in ("complex", "quaternionic"):
        numeric[case] = _numeric(sp, kin, case, grid, sc.tau0, sc.fit_taus, threads)
    numeric["v_ratio"] = numeric["quaternionic"]["v_tra"] / numeric["complex"]["v_tra"]
    summary["observables"] = {"files": files, "csv_pattern": CSV_PATTERN, "per_tau": per_tau, "numeric": numeric}
    return summary


def run_compare(sc: Scenario, threads=None) -> dict:
    sc.validate()
    summary = _base_summary(sc)
    kin = sc.kinematics()
    grid = sc.grid()
    sp = sc.spectral(kin)
    quat = _numeric(sp, kin, "quaternionic", grid, sc.tau0, sc.fit_taus, threads)
    v_q = approx.velocities(kin)["v_tra_q"]
    p_ref_q = approx.probabilities("quaternionic", kin)[0]

    report = {}
    for name, fit in (("fixed_step_scale", approx.fit_w0(kin)), ("velocity_matched", approx.fit_w0_velocity(kin))):
        kin_w = Kinematics(kin.eps0, math.sqrt(2 * fit.w0))
        sp_w = sc.spectral(kin_w)
        num = _numeric(sp_w, kin_w, "complex", grid, sc.tau0, sc.fit_taus, threads)
        v_c = kin_w.sigma0
        report[name] = {
            "e0_over_w0": kin.e0 / fit.w0,
            "w0_over_v0": fit.w0 / kin.v0,
            "v_tra_c_fitted": v_c,
            "v_tra_q": v_q,
            "velocity_mismatch_rel": (v_c - v_q) / v_q,
            "p_ref_c_fitted": fit.p_ref,
            "p_ref_q": p_ref_q,
            "p_ref_ratio": fit.p_ref / p_ref_q,
            "v_tra_c_fitted_numeric": num["v_tra"],
            "p_ref_c_fitted_numeric": num["p_ref"],
        }
    report["quaternionic_numeric"] = {"v_tra": quat["v_tra"], "p_ref": quat["p_ref"], "p_tra": quat["p_tra"]}
    summary["observables"] = {"comparison": report}
    return summary


def _write_json(path, doc):
    with open(path, "w") as fh:
        json.dump(doc, fh, indent=2)
        fh.write("\n")


def build_parser():
    parser = argparse.ArgumentParser(prog="quatwave", description=__doc__.split("\n\n")[0])
    sub = parser.add_subparsers(dest="command", required=True)
    for name, help_ in (
        ("coeffs", "plane-wave coefficients, probabilities, velocities and W0 fit"),
        ("evolve", "packet densities per tau (CSV) and observables (JSON)"),
        ("compare", "complex fit W0 versus the quaternionic step"),
    ):
        p = sub.add_parser(name, help=help_)
        p.add_argument("--config", help="scenario file (key = value)")
        p.add_argument("--out", help="output directory (overrides out_dir)")
        p.add_argument("-v", "--verbose", action="store_true")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")
    try:
        sc = load_scenario(args.config)
        out_dir = Path(args.out or sc.out_dir)
        if args.command == "coeffs":
            doc = run_coeffs(sc)
        elif args.command == "evolve":
            doc = run_evolve(sc, out_dir)
        else:
            doc = run_compare(sc)
        out_dir.mkdir(parents=True, exist_ok=True)
        path = out_dir / f"{args.command}.json"
        _write_json(path, doc)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except DomainError as exc:
        print(f"domain error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except (QuadratureResolutionError, WindowError, ClearanceError) as exc:
        print(f"numerical error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except OSError as exc:
        print(f"output error: {exc}", file=sys.stderr)
        return EXIT_IO
    print(path)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
