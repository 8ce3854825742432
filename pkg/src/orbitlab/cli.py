"""
Command-line front end.

    orbitlab <command> [options] [--config FILE] [--format json|csv] [--out PATH]

Every JSON report embeds the resolved configuration, the library version and
the schema version, and is byte-identical across runs with the same
configuration.  Exit codes: 0 success, 2 configuration error, 3 a parameter
beyond the numeric reach of the sieve.
"""

import argparse
import csv
import io
import json
import math
import os
import sys
from fractions import Fraction

import numpy as np

from . import __version__
from .arith import MAX_SPF_LIMIT, table_for
from .errors import InvalidArgument, ReachError
from .multfunc import MultFnSpec

SCHEMA_VERSION = 1

COMMANDS = ("scan", "coverage", "discrepancy", "et-bound", "distance", "correlation", "sieve",
            "levelset", "beurling", "counterexample", "ratratio", "kronecker", "concentration")


class ConfigError(InvalidArgument):
    def __init__(self, field, message):
        super().__init__(f"{field}: {message}")
        self.field = field


# ---------------------------------------------------------------------------
# value parsing

def parse_int(text, field="value"):
    if isinstance(text, int):
        return text
    try:
        v = float(text) if any(c in str(text) for c in ".eE") else int(text)
    except (TypeError, ValueError):
        raise ConfigError(field, f"expected an integer, got {text!r}") from None
    if isinstance(v, float):
        if not v.is_integer():
            raise ConfigError(field, f"expected an integer, got {text!r}")
        v = int(v)
    return v


def parse_grid(text, field="x_grid"):
    if isinstance(text, (list, tuple)):
        vals = [parse_int(v, field) for v in text]
    else:
        vals = [parse_int(v, field) for v in str(text).split(",") if v.strip()]
    if not vals:
        raise ConfigError(field, "empty grid")
    if any(b <= a for a, b in zip(vals, vals[1:])):
        raise ConfigError(field, "grid must be strictly increasing")
    return vals


def parse_spec(value, field):
    if value is None:
        return None
    if isinstance(value, dict):
        obj = value
    else:
        text = str(value).strip()
        if not text.startswith("{"):
            if not os.path.exists(text):
                raise ConfigError(field, f"file {text!r} does not exist")
            with open(text) as fh:
                text = fh.read()
        try:
            obj = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ConfigError(field, f"invalid JSON ({exc.msg})") from None
    try:
        return MultFnSpec.from_json(obj)
    except (KeyError, TypeError, ValueError) as exc:
        raise ConfigError(field, f"invalid function spec ({exc})") from None


def _table(x, field="x"):
    if x > MAX_SPF_LIMIT:
        raise ReachError(f"{field}={x} exceeds the sieve cap {MAX_SPF_LIMIT}", field)
    return table_for(x)


# ---------------------------------------------------------------------------
# output

def jsonable(v):
    if isinstance(v, dict):
        return {str(k): jsonable(val) for k, val in v.items()}
    if isinstance(v, (list, tuple)):
        return [jsonable(x) for x in v]
    if isinstance(v, (bool, np.bool_)):
        return bool(v)
    if isinstance(v, (int, np.integer)):
        return int(v)
    if isinstance(v, (float, np.floating)):
        v = float(v)
        return v if math.isfinite(v) else str(v)
    if isinstance(v, complex):
        return {"re": v.real, "im": v.imag}
    if isinstance(v, Fraction):
        return {"fraction": f"{v.numerator}/{v.denominator}", "value": float(v)}
    if isinstance(v, np.ndarray):
        return jsonable(v.tolist())
    if v is None or isinstance(v, str):
        return v
    if hasattr(v, "to_json"):
        return jsonable(v.to_json())
    return str(v)


def fmt(v):
    if isinstance(v, (bool, np.bool_)):
        return str(bool(v)).lower()
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return format(float(v), ".17g")
    return str(v)


class Report:
    def __init__(self, result, rows=None, header=None):
        self.result = result
        self.rows = rows
        self.header = header


def render(command, config, report: Report, fmt_name):
    if fmt_name == "csv":
        if report.rows is None:
            raise ConfigError("format", f"command {command!r} has no tabular output")
        buf = io.StringIO()
        buf.write(f"# orbitlab {__version__} schema {SCHEMA_VERSION} command {command}\n")
        buf.write("# config " + json.dumps(jsonable(config), sort_keys=True) + "\n")
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(report.header)
        for row in report.rows:
            w.writerow([fmt(v) for v in row])
        return buf.getvalue()
    payload = {
        "schema_version": SCHEMA_VERSION,
        "library_version": __version__,
        "command": command,
        "config": config,
        "result": report.result,
    }
    return json.dumps(jsonable(payload), sort_keys=True, indent=2) + "\n"


# ---------------------------------------------------------------------------
# commands

def _pair(cfg, need=True):
    from .scenarios import build_preset
    if cfg.get("preset"):
        P = build_preset(cfg["preset"])
        return P.f, P.g, P
    f, g = parse_spec(cfg.get("f"), "f"), parse_spec(cfg.get("g"), "g")
    if need and (f is None or g is None):
        raise ConfigError("preset", "give --preset or both --f and --g")
    return f, g, None


def _x(cfg, default=None):
    if cfg.get("x") is None:
        if default is None:
            raise ConfigError("x", "missing")
        return default
    x = parse_int(cfg["x"], "x")
    if x < 2:
        raise ConfigError("x", "must be at least 2")
    return x


def _grid(cfg):
    if cfg.get("x_grid"):
        return parse_grid(cfg["x_grid"])
    return [_x(cfg)]


def _scan(cfg, x):
    from .scenarios import orbit_scan
    f, g, P = _pair(cfg)
    powers = tuple(cfg["powers"]) if cfg.get("powers") else (P.powers if P else (1, 1))
    table = _table(x + 1)
    return orbit_scan(f, g, x, table, cfg.get("direction") or "forward", powers)


def cmd_scan(cfg):
    from .discrepancy import grid_coverage, star_discrepancy_bounds
    x = _x(cfg)
    sc = _scan(cfg, x)
    G = parse_int(cfg.get("grid") or 8, "grid")
    cov = grid_coverage(sc.sample, G)
    lo, hi = star_discrepancy_bounds(sc.sample, 1024)
    result = {"points": len(sc.ns), "log_mass": sc.log_mass, "grid": G, "empty_cells": cov.n_empty,
              "d_star_bounds": [lo, hi]}
    stride = max(1, parse_int(cfg.get("stride") or 1, "stride"))
    idx = np.arange(0, len(sc.ns), stride)
    rows = zip(sc.ns[idx].tolist(), sc.theta1[idx].tolist(), sc.theta2[idx].tolist())
    return Report(result, rows, ["n", "theta1", "theta2"])


def cmd_coverage(cfg):
    from .discrepancy import grid_coverage
    x = _x(cfg)
    G = parse_int(cfg.get("grid") or 8, "grid")
    sc = _scan(cfg, x)
    marg = cfg.get("marginal")
    sample = sc.sample if marg is None else sc.marginal(parse_int(marg, "marginal"))
    cov = grid_coverage(sample, G)
    result = cov.to_dict()
    if cov.d == 2:
        off = set(cov.off_cross_cells())
        result["off_cross_empty"] = sum(1 for c in cov.empty_cells if c in off)
        result["cross_empty"] = cov.n_empty - result["off_cross_empty"]
    rows = [list(c["cell"]) + [c["mass"]] for c in result["cells"]]
    header = ["i", "j", "mass"] if cov.d == 2 else ["i", "mass"]
    return Report(result, rows, header)


def _load_points(path):
    if not os.path.exists(path):
        raise ConfigError("points", f"file {path!r} does not exist")
    with open(path) as fh:
        text = fh.read()
    try:
        if path.endswith(".json"):
            obj = json.loads(text)
            pts, w = obj["points"], obj.get("weights")
        else:
            data = np.loadtxt(io.StringIO(text), delimiter=",", ndmin=2, comments="#")
            pts, w = data[:, :-1], data[:, -1]
    except (ValueError, KeyError) as exc:
        raise ConfigError("points", f"cannot read points ({exc})") from None
    from .discrepancy import WeightedSample
    pts = np.asarray(pts, dtype=float)
    return WeightedSample(pts, np.ones(len(pts)) if w is None else np.asarray(w, dtype=float))


def cmd_discrepancy(cfg):
    from .discrepancy import MAX_POINTS_1D, MAX_POINTS_2D, full_discrepancy_bound, star_discrepancy_bounds
    if cfg.get("points"):
        sample = _load_points(cfg["points"])
    else:
        sc = _scan(cfg, _x(cfg))
        sample = sc.sample if cfg.get("marginal") is None else sc.marginal(parse_int(cfg["marginal"], "marginal"))
    cap = MAX_POINTS_1D if sample.d == 1 else MAX_POINTS_2D
    result = {"points": len(sample), "d": sample.d}
    if len(sample) <= cap:
        rep = full_discrepancy_bound(sample)
        result.update({"exact": True, "d_star": rep.d_star, "d_full": rep.d_full,
                       "interval": list(rep.interval), "box_witness": list(rep.box_witness)})
    else:
        lo, hi = star_discrepancy_bounds(sample, parse_int(cfg.get("grid") or 1024, "grid"))
        result.update({"exact": False, "d_star_bounds": [lo, hi], "interval": [lo, 2**sample.d * hi]})
    return Report(result)


def cmd_et_bound(cfg):
    from .discrepancy import correlation_table, erdos_turan_bound, star_discrepancy_bounds
    from .multfunc import phase_range
    from .scenarios import orbit_scan
    x = _x(cfg)
    K = parse_int(cfg.get("K") or 8, "K")
    f, g, _ = _pair(cfg)
    table = _table(x + 1)
    a = phase_range(f, x + 1, table).angles()
    b = phase_range(g, x + 1, table).angles()
    ns = np.arange(1, x + 1)
    C = correlation_table(a[1 : x + 1], b[2 : x + 2], 1.0 / ns, K)
    bound = erdos_turan_bound(C, K, math.log(x))
    lo, hi = star_discrepancy_bounds(orbit_scan(f, g, x, table).sample, 1024)
    rows = [(m1, m2, C[(m1, m2)].real, C[(m1, m2)].imag) for m1, m2 in sorted(C)]
    return Report({"K": K, "x": x, "bound": bound, "d_star_bounds": [lo, hi]}, rows, ["m1", "m2", "re", "im"])


def cmd_distance(cfg):
    from .analysis import pretentious_distance_sq
    grid = _grid(cfg)
    N_low = parse_int(cfg.get("N_low") or 1, "N_low")
    t = cfg.get("t")
    if t is not None:
        f, g = MultFnSpec(), MultFnSpec(twist=float(t))
    else:
        f, g, _ = _pair(cfg)
    table = _table(grid[-1])
    rows = []
    for x in grid:
        d = pretentious_distance_sq(f, g, N_low, x, table)
        row = [x, d.squared_distance, d.prime_terms]
        if t is not None:
            row.append(d.squared_distance - math.log(1 + abs(float(t)) * math.log(x)))
        rows.append(row)
    header = ["x", "distance_sq", "prime_terms"] + (["offset"] if t is not None else [])
    return Report({"rows": [dict(zip(header, r)) for r in rows]}, rows, header)


def cmd_correlation(cfg):
    from .analysis import binary_correlation
    import warnings
    grid = _grid(cfg)
    forms = cfg.get("forms") or [1, 0, 1, 1]
    if isinstance(forms, str):
        forms = forms.split(",")
    if len(forms) != 4:
        raise ConfigError("forms", "expected a1,b1,a2,b2")
    a1, b1, a2, b2 = (parse_int(v, "forms") for v in forms)
    f, g, _ = _pair(cfg)
    table = _table(max(grid[-1] + 1, math.isqrt(max(a1, a2) * grid[-1] + max(b1, b2)) + 1))
    rows = []
    degenerate = False
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        for x in grid:
            r = binary_correlation(f, g, a1, b1, a2, b2, x, table)
            degenerate = r.degenerate
            rows.append([x, r.value.real, r.value.imag, abs(r.value)])
    header = ["x", "re", "im", "abs"]
    return Report({"forms": [a1, b1, a2, b2], "degenerate": degenerate, "rows": [dict(zip(header, r)) for r in rows]},
                  rows, header)


def _sieve_params(cfg):
    from .sievecount import SieveParams
    return SieveParams(parse_int(cfg.get("N") or 2, "N"), parse_int(cfg.get("B") or 1, "B"),
                       parse_int(cfg.get("q") or 1, "q"), parse_int(cfg.get("a") or 0, "a"))


def cmd_sieve(cfg):
    from .sievecount import delta_density, phi_count, triv_residual
    params = _sieve_params(cfg)
    grid = _grid(cfg)
    table = _table(grid[-1])
    delta = delta_density(params)
    rows = [[x, phi_count(params, x, table), triv_residual(params, x, table)] for x in grid]
    result = {"delta": delta, "rows": [{"x": x, "count": c, "residual": r} for x, c, r in rows]}
    if len(rows) == 1:
        result["count"] = rows[0][1]
    return Report(result, rows, ["x", "count", "residual"])


def _arc(text, field):
    from .torus import Angle, Arc
    if not text:
        return None
    parts = text.split(",") if isinstance(text, str) else list(text)
    if len(parts) != 3:
        raise ConfigError(field, "expected center,half_length,frequency")
    try:
        return (Arc(Angle.parse(parts[0]), float(parts[1])), float(parts[2]))
    except (ValueError, InvalidArgument) as exc:
        raise ConfigError(field, str(exc)) from None


def cmd_levelset(cfg):
    from .sievecount import (LevelSetQuery, ext_congruence_logmass, ext_stated_limit,
                             levelset_logmass, phi_count, twisted_levelset_sum)
    from .torus import Angle
    grid = _grid(cfg)
    h1 = parse_spec(cfg.get("h1"), "h1") or MultFnSpec()
    h2 = parse_spec(cfg.get("h2"), "h2") or MultFnSpec()
    table = _table(grid[-1])
    if cfg.get("ext"):
        ext = cfg["ext"]
        if isinstance(ext, str):
            ext = ext.split(",")
        if len(ext) != 3:
            raise ConfigError("ext", "expected M,M',M''")
        M, M1, M2 = (parse_int(v, "ext") for v in ext)
        rows = [[x, ext_congruence_logmass(M, M1, M2, h1, h2, x, table)] for x in grid]
        limit = ext_stated_limit(M, M1, M2, h1, h2)
        return Report({"ext": [M, M1, M2], "stated_limit": limit,
                       "rows": [{"x": x, "logmass": v} for x, v in rows]}, rows, ["x", "logmass"])
    q = LevelSetQuery(_sieve_params(cfg), h1, h2, Angle.parse(cfg.get("alpha") or "0"),
                      Angle.parse(cfg.get("beta") or "0"), _arc(cfg.get("arc_I"), "arc_I"), _arc(cfg.get("arc_J"), "arc_J"))
    u = float(cfg.get("u") or 0.0)
    rows = []
    for x in grid:
        s = twisted_levelset_sum(q, u, x, table)
        rows.append([x, levelset_logmass(q, x, table), phi_count(q.params, x, table), s.real, s.imag])
    header = ["x", "logmass", "phi", "twisted_re", "twisted_im"]
    return Report({"rows": [dict(zip(header, r)) for r in rows]}, rows, header)


def cmd_beurling(cfg):
    from .beurling import beurling_polynomial, interval_majorant, interval_minorant
    K = parse_int(cfg.get("K") or 8, "K")
    interval = cfg.get("interval")
    if interval:
        a, b = (float(v) for v in (interval.split(",") if isinstance(interval, str) else interval))
        P = interval_minorant(K, a, b) if cfg.get("minorant") else interval_majorant(K, a, b)
    else:
        P = beurling_polynomial(K)
    rows = [(m, P.coefficient(m).real, P.coefficient(m).imag) for m in range(-K, K + 1)]
    result = {"K": K, "mean": P.mean, "degenerate": P.degenerate,
              "coefficients": [{"m": m, "re": re, "im": im} for m, re, im in rows]}
    return Report(result, rows, ["m", "re", "im"])


def cmd_counterexample(cfg):
    from .discrepancy import grid_coverage
    from .multfunc import phase_range
    from .scenarios import (PRESETS, SQRT2_M1, SQRT3_M1, counterexample_i, counterexample_ii,
                            cross_violations, orbit_scan)
    family = cfg.get("family") or "ii"
    x = _x(cfg, 10**5)
    G = parse_int(cfg.get("grid") or 8, "grid")
    table = _table(x + 1)
    result = {"family": family, "x": x, "grid": G}
    if family == "i":
        k = parse_int(cfg.get("k") or 2, "k")
        l = parse_int(cfg.get("l") or 2, "l")
        t = float(cfg.get("t") or 1.0)
        f, g = counterexample_i(k, l, t)
        n_id = min(x, 10**4)
        ang = phase_range(f, n_id, table).scaled(k).angles()[1:]
        arch = np.mod(k * t * np.log(np.arange(1, n_id + 1)) / (2 * math.pi), 1.0)
        d = np.abs(ang - arch)
        result["identity_max_error"] = float(np.max(np.minimum(d, 1 - d)))
    elif family == "ii":
        p = parse_int(cfg.get("p") or PRESETS["counterexample-ii"]["p"], "p")
        f, g = counterexample_ii(p, float(cfg.get("alpha") or SQRT2_M1), float(cfg.get("beta") or SQRT3_M1))
        result["cross_violations"] = cross_violations(f, g, x, table)
    else:
        raise ConfigError("family", f"expected 'i' or 'ii', got {family!r}")
    sc = orbit_scan(f, g, x, table)
    cov = grid_coverage(sc.sample, G)
    result["empty_cells"] = cov.n_empty
    result["marginal_empty"] = [grid_coverage(sc.marginal(i), 2 * G).n_empty for i in (0, 1)]
    result["f"], result["g"] = f.to_json(), g.to_json()
    return Report(result)


def cmd_ratratio(cfg):
    from .discrepancy import grid_coverage
    from .scenarios import diagonal_gaps, orbit_scan, ratratio_family
    fam = ratratio_family(parse_int(cfg.get("k") or 2, "k"), parse_int(cfg.get("l") or 3, "l"),
                          parse_int(cfg.get("r1") or 1, "r1"), parse_int(cfg.get("s1") or 2, "s1"),
                          float(cfg.get("t_prime") or 5.0), bool(cfg.get("irrational")))
    x = _x(cfg, 10**5)
    G = parse_int(cfg.get("grid") or 8, "grid")
    table = _table(x + 1)
    ns = np.arange(2, x + 1, dtype=np.int64)
    gaps = diagonal_gaps(fam, ns, table)
    sc = orbit_scan(fam.f, fam.g, x, table, powers=fam.exponents)
    result = {"t": fam.t, "t_prime": fam.t_prime, "u": fam.u, "exponents": list(fam.exponents),
              "diagonal_violations": int(np.count_nonzero(gaps > abs(fam.u) / ns)),
              "max_scaled_gap": float(np.max(gaps * ns)), "empty_cells": grid_coverage(sc.sample, G).n_empty,
              "f": fam.f.to_json(), "g": fam.g.to_json()}
    return Report(result)


def cmd_kronecker(cfg):
    from .scenarios import KroneckerQuery, kronecker_search
    from .torus import Angle
    alphas = cfg.get("alpha") or []
    targets = cfg.get("target") or []
    if not alphas:
        raise ConfigError("alpha", "at least one --alpha is required")
    try:
        q = KroneckerQuery(tuple(Angle.parse(a) for a in alphas), tuple(Angle.parse(t) for t in targets),
                           float(cfg.get("eta") or 0.01), parse_int(cfg.get("M") or 1000, "M"),
                           parse_int(cfg.get("k") or 1, "k"))
    except InvalidArgument as exc:
        raise ConfigError("alpha", str(exc)) from None
    m = kronecker_search(q, accelerated=bool(cfg.get("accelerated")))
    return Report({"m": m, "found": m is not None}, [[m if m is not None else ""]], ["m"])


def cmd_concentration(cfg):
    from .analysis import concentration_diagnostic
    f, _, _ = _pair({**cfg, "g": cfg.get("g") or cfg.get("f")})
    x = _x(cfg)
    N = parse_int(cfg.get("N") or 5, "N")
    B = parse_int(cfg.get("B") or 2, "B")
    table = _table(x)
    rep = concentration_diagnostic(f, N, B, x, table, bool(cfg.get("shifted")))
    result = {"lhs": rep.lhs, "drift": rep.drift, "phi": rep.phi, "distance_sq": rep.distance_sq,
              "sieve_term": rep.sieve_term, "error_term": rep.error_term, "ratio": rep.ratio,
              "shifted": rep.shifted}
    return Report(result)


HANDLERS = {
    "scan": cmd_scan, "coverage": cmd_coverage, "discrepancy": cmd_discrepancy, "et-bound": cmd_et_bound,
    "distance": cmd_distance, "correlation": cmd_correlation, "sieve": cmd_sieve, "levelset": cmd_levelset,
    "beurling": cmd_beurling, "counterexample": cmd_counterexample, "ratratio": cmd_ratratio,
    "kronecker": cmd_kronecker, "concentration": cmd_concentration,
}


# ---------------------------------------------------------------------------
# parser

class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise ConfigError("argv", message)


def build_parser():
    from .scenarios import PRESETS
    p = _Parser(prog="orbitlab", description=__doc__.strip().splitlines()[0])
    p.add_argument("--version", action="version", version=f"orbitlab {__version__}")
    sub = p.add_subparsers(dest="command", parser_class=_Parser)

    def common(sp):
        sp.add_argument("--config", help="JSON config file; flags override its keys")
        sp.add_argument("--format", choices=["json", "csv"])
        sp.add_argument("--out", help="output path (default stdout)")
        return sp

    def funcs(sp):
        sp.add_argument("--preset", choices=sorted(PRESETS))
        sp.add_argument("--f", help="function spec: inline JSON or path")
        sp.add_argument("--g", help="function spec: inline JSON or path")

    sp = common(sub.add_parser("scan", help="materialise an orbit"))
    funcs(sp)
    sp.add_argument("--x")
    sp.add_argument("--grid")
    sp.add_argument("--direction", choices=["forward", "backward"])
    sp.add_argument("--powers", type=int, nargs=2)
    sp.add_argument("--stride", help="keep every stride-th row in CSV output")

    sp = common(sub.add_parser("coverage", help="grid coverage of an orbit"))
    funcs(sp)
    sp.add_argument("--x")
    sp.add_argument("--grid")
    sp.add_argument("--marginal", help="0 or 1: 1-d coverage of one coordinate")
    sp.add_argument("--direction", choices=["forward", "backward"])
    sp.add_argument("--powers", type=int, nargs=2)

    sp = common(sub.add_parser("discrepancy", help="D* and the D interval"))
    funcs(sp)
    sp.add_argument("--x")
    sp.add_argument("--points", help="CSV (coords..., weight) or JSON {points, weights}")
    sp.add_argument("--marginal")
    sp.add_argument("--grid", help="grid size for large-sample bounds")
    sp.add_argument("--direction", choices=["forward", "backward"])
    sp.add_argument("--powers", type=int, nargs=2)

    sp = common(sub.add_parser("et-bound", help="Erdos-Turan style bound of an orbit"))
    funcs(sp)
    sp.add_argument("--x")
    sp.add_argument("--K")

    sp = common(sub.add_parser("distance", help="pretentious distance sweep"))
    funcs(sp)
    sp.add_argument("--x")
    sp.add_argument("--x-grid", dest="x_grid")
    sp.add_argument("--N-low", dest="N_low")
    sp.add_argument("--t", type=float, help="compare 1 with n^{it}")

    sp = common(sub.add_parser("correlation", help="binary correlation sweep"))
    funcs(sp)
    sp.add_argument("--x")
    sp.add_argument("--x-grid", dest="x_grid")
    sp.add_argument("--forms", help="a1,b1,a2,b2 (default 1,0,1,1)")

    sp = common(sub.add_parser("sieve", help="sieved counts and residuals"))
    for name in ("N", "B", "q", "a", "x"):
        sp.add_argument(f"--{name}")
    sp.add_argument("--x-grid", dest="x_grid")

    sp = common(sub.add_parser("levelset", help="level-set log masses"))
    for name in ("N", "B", "q", "a", "x", "h1", "h2", "alpha", "beta", "u"):
        sp.add_argument(f"--{name}")
    sp.add_argument("--x-grid", dest="x_grid")
    sp.add_argument("--arc-I", dest="arc_I", help="center,half_length,u")
    sp.add_argument("--arc-J", dest="arc_J", help="center,half_length,v")
    sp.add_argument("--ext", help="M,M',M'': congruence-restricted mass instead")

    sp = common(sub.add_parser("beurling", help="Beurling polynomial coefficients"))
    sp.add_argument("--K")
    sp.add_argument("--coeffs", action="store_true", help="emit the coefficient table (CSV by default)")
    sp.add_argument("--interval", help="a,b: interval majorant instead")
    sp.add_argument("--minorant", action="store_true")

    sp = common(sub.add_parser("counterexample", help="the two counterexample families"))
    sp.add_argument("--family", choices=["i", "ii"])
    for name in ("x", "grid", "k", "l", "t", "p", "alpha", "beta"):
        sp.add_argument(f"--{name}")

    sp = common(sub.add_parser("ratratio", help="rational vs irrational ratio families"))
    for name in ("k", "l", "r1", "s1", "x", "grid"):
        sp.add_argument(f"--{name}")
    sp.add_argument("--t-prime", dest="t_prime")
    sp.add_argument("--irrational", action="store_true", default=None)

    sp = common(sub.add_parser("kronecker", help="first m with m alpha near a target"))
    sp.add_argument("--alpha", action="append")
    sp.add_argument("--target", action="append")
    for name in ("eta", "M", "k"):
        sp.add_argument(f"--{name}")
    sp.add_argument("--accelerated", action="store_true", default=None)

    sp = common(sub.add_parser("concentration", help="concentration diagnostic"))
    funcs(sp)
    for name in ("x", "N", "B"):
        sp.add_argument(f"--{name}")
    sp.add_argument("--shifted", action="store_true", default=None)
    return p


_META = {"config", "format", "out", "command", "coeffs"}


def resolve_config(ns) -> dict:
    cfg = {}
    if ns.config:
        if not os.path.exists(ns.config):
            raise ConfigError("config", f"file {ns.config!r} does not exist")
        with open(ns.config) as fh:
            try:
                loaded = json.load(fh)
            except json.JSONDecodeError as exc:
                raise ConfigError("config", f"invalid JSON ({exc.msg})") from None
        if not isinstance(loaded, dict):
            raise ConfigError("config", "expected a JSON object")
        if loaded.get("command") not in (None, ns.command):
            raise ConfigError("command", f"config is for {loaded['command']!r}, not {ns.command!r}")
        cfg.update({k: v for k, v in loaded.items() if k not in ("command", "format", "out")})
    for k, v in vars(ns).items():
        if k in _META or v is None:
            continue
        cfg[k] = v
    return dict(sorted(cfg.items()))


def run(argv=None, stdout=None) -> int:
    stdout = stdout or sys.stdout
    try:
        ns = build_parser().parse_args(argv)
        if not ns.command:
            raise ConfigError("command", f"expected one of {', '.join(COMMANDS)}")
        cfg = resolve_config(ns)
        report = HANDLERS[ns.command](cfg)
        fmt_name = ns.format or ("csv" if getattr(ns, "coeffs", False) else "json")
        text = render(ns.command, cfg, report, fmt_name)
    except ReachError as exc:
        print(f"error: parameter {exc.parameter or '?'} out of reach: {exc}", file=sys.stderr)
        return 3
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except InvalidArgument as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except SystemExit as exc:     # --help / --version
        return int(exc.code or 0)
    if ns.out:
        with open(ns.out, "w", newline="") as fh:
            fh.write(text)
    else:
        stdout.write(text)
    return 0


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
