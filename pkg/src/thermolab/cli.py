"""Command-line experiment runner.

``thermolab <subcommand> [--config FILE] [--out DIR] [--seed U64] [--workers N] [flags...]``

Each run writes its outputs plus ``manifest.json`` (effective config, seed,
version, RNG, timestamps and a sha256 per output). ``thermolab replay
MANIFEST`` re-executes a run and compares checksums.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import io
import json
import math
import os
import sys
import tempfile
import time
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Callable

import numpy as np

from . import __version__
from ._kernels import BACKEND
from .errors import ConfigError, ResourceError, ThermolabError

OUTPUT_ENV = "THERMOLAB_OUTPUT_DIR"
EXIT_OK, EXIT_FAIL, EXIT_CONFIG, EXIT_RESOURCE = 0, 1, 2, 3
U64_MAX = 2**64 - 1


class SchemaError(ConfigError):
    pass


# ---------------------------------------------------------------- schema


@dataclass(frozen=True)
class Field:
    kind: str  # int | float | str | ints | opt_int | opt_float
    default: Any
    check: Callable[[Any], bool] | None = None
    hint: str = ""
    choices: tuple | None = None


def _ge(v):
    return lambda x: x >= v


def _range(lo, hi):
    return lambda x: lo <= x <= hi


_MODEL = {
    "W": Field("float", 1.0, _ge(0), ">= 0"),
    "Delta": Field("float", 1.0),
    "J": Field("float", 1.0),
    "boundary": Field("str", "open", choices=("open", "periodic")),
}

SCHEMAS: dict[str, dict[str, Field]] = {
    "eth-scan": {
        "L": Field("ints", [6, 8, 10], _range(2, 14), "each 2 <= L <= 14"),
        "obs": Field("str", "huo"),
        **_MODEL,
        "ndis": Field("int", 1, _ge(1), ">= 1"),
        "policy": Field("str", "auto", choices=("auto", "sector", "full")),
        "bulk": Field("float", 0.5, lambda x: 0 < x <= 1, "in (0, 1]"),
    },
    "mbl-dynamics": {
        "L": Field("int", 10, _range(2, 14), "2 <= L <= 14"),
        **{**_MODEL, "W": Field("float", 10.0, _ge(0), ">= 0")},
        "ndis": Field("int", 50, _ge(1), ">= 1"),
        "axis": Field("str", "x", choices=("x", "y", "z")),
        "tmin": Field("float", 0.1, _ge(1e-300), "> 0"),
        "tmax": Field("float", 1e3, _ge(1e-300), "> 0"),
        "npoints": Field("int", 200, _ge(2), ">= 2"),
        "fit_tmin": Field("float", 1.0, _ge(1e-300), "> 0"),
        "fit_tmax": Field("float", 1e3, _ge(1e-300), "> 0"),
    },
    "mub-build": {
        "dim": Field("int", 3, _range(2, 31), "prime <= 31"),
    },
    "huo-check": {
        "L": Field("int", 10, _range(2, 13), "2 <= L <= 13"),
        **_MODEL,
    },
    "levels": {
        "L": Field("int", 12, _range(4, 14), "4 <= L <= 14"),
        **_MODEL,
        "sector": Field("opt_int", None),
        "bulk": Field("float", 0.5, lambda x: 0 < x <= 1, "in (0, 1]"),
        "bins": Field("int", 50, _ge(1), ">= 1"),
    },
    "spinnet-surface": {
        "N": Field("int", 3, _ge(2), ">= 2"),
        "k": Field("int", 1, _ge(1), ">= 1"),
        "J0": Field("int", 1, _ge(0), ">= 0"),
        "Jmax": Field("opt_float", None),
        "eps": Field("float", 1e-10, _ge(1e-300), "> 0"),
        "digits": Field("int", 30, _range(1, 1000), "1 <= digits <= 1000"),
    },
    "spinnet-boundary": {
        "E": Field("int", 8, _ge(1), ">= 1"),
        "L": Field("int", 16, _ge(0), ">= 0"),
        "j0": Field("float", 0.5, lambda x: x > 0 and float(2 * x).is_integer(), "positive half-integer"),
    },
    "theorem-scan": {
        "Nmin": Field("int", 14, _range(1, 24), "1 <= N <= 24"),
        "Nmax": Field("int", 24, _range(1, 24), "1 <= N <= 24"),
    },
}


def _coerce(name: str, f: Field, value):
    def bad(msg=None):
        return SchemaError(f"field '{name}': {msg or 'expected ' + f.kind + (' ' + f.hint if f.hint else '')}, got {value!r}")

    try:
        if f.kind in ("opt_int", "opt_float") and value is None:
            return None
        if f.kind in ("int", "opt_int"):
            if isinstance(value, bool) or (isinstance(value, float) and not value.is_integer()):
                raise bad()
            v = int(value)
        elif f.kind in ("float", "opt_float"):
            if isinstance(value, bool):
                raise bad()
            v = float(value)
            if not math.isfinite(v):
                raise bad()
        elif f.kind == "ints":
            if not isinstance(value, (list, tuple)) or not value:
                raise bad("expected a non-empty list of integers")
            v = [_coerce(name, Field("int", None, f.check, f.hint), x) for x in value]
            return v
        else:
            if not isinstance(value, str):
                raise bad()
            v = value
    except (TypeError, ValueError):
        raise bad() from None
    if f.choices and v not in f.choices:
        raise bad(f"expected one of {list(f.choices)}")
    if f.check and not f.check(v):
        raise bad()
    return v


def validate(command: str, params: dict) -> dict:
    """Coerce and check a parameter block against the subcommand schema."""
    schema = SCHEMAS[command]
    unknown = sorted(set(params) - set(schema))
    if unknown:
        raise SchemaError(f"field '{unknown[0]}': unknown for {command}")
    out = {k: _coerce(k, f, params.get(k, f.default)) for k, f in schema.items()}
    if command == "mbl-dynamics" and not out["tmin"] < out["tmax"]:
        raise SchemaError("field 'tmax': must exceed tmin")
    if command == "theorem-scan" and out["Nmin"] >= out["Nmax"]:
        raise SchemaError("field 'Nmax': must exceed Nmin")
    return out


def validate_common(cfg: dict) -> dict:
    seed = cfg.get("seed", 0)
    if isinstance(seed, bool) or not isinstance(seed, int) or not 0 <= seed <= U64_MAX:
        raise SchemaError(f"field 'seed': expected an unsigned 64-bit integer, got {seed!r}")
    workers = cfg.get("workers", 1)
    if isinstance(workers, bool) or not isinstance(workers, int) or workers < 1:
        raise SchemaError(f"field 'workers': expected an integer >= 1, got {workers!r}")
    return {"seed": seed, "workers": workers}


# ---------------------------------------------------------------- output


def fmt(x) -> str:
    if isinstance(x, (bool, np.bool_)):
        return str(bool(x)).lower()
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if isinstance(x, (float, np.floating)):
        return format(float(x), ".17g")
    return str(x)


class Writer:
    """Collects output files for one run and their checksums."""

    def __init__(self, out: Path):
        self.out = out
        self.files: dict[str, str] = {}
        out.mkdir(parents=True, exist_ok=True)

    def _record(self, name: str, data: bytes) -> None:
        (self.out / name).write_bytes(data)
        self.files[name] = hashlib.sha256(data).hexdigest()

    def csv(self, name: str, header: list[str], rows) -> None:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(header)
        for r in rows:
            w.writerow([fmt(v) for v in r])
        self._record(name, buf.getvalue().encode("utf-8"))

    def json(self, name: str, obj) -> None:
        self._record(name, (json.dumps(_jsonable(obj), indent=2, sort_keys=True) + "\n").encode("utf-8"))


def _jsonable(o):
    if isinstance(o, dict):
        return {str(k): _jsonable(v) for k, v in o.items()}
    if isinstance(o, (list, tuple)):
        return [_jsonable(v) for v in o]
    if isinstance(o, (np.bool_, bool)):
        return bool(o)
    if isinstance(o, (np.integer,)):
        return int(o)
    if isinstance(o, (np.floating, float)):
        f = float(o)
        return f if math.isfinite(f) else str(f)
    if isinstance(o, np.ndarray):
        return _jsonable(o.tolist())
    return o


# ------------------------------------------------------------- commands


def _xxz(cfg, L):
    from .models import XXZParams

    return XXZParams(L, cfg["J"], cfg["Delta"], cfg["W"], cfg["boundary"], cfg["seed"])


def cmd_eth_scan(cfg: dict, w: Writer) -> None:
    from .eth import eth_scaling

    res = eth_scaling(
        cfg["L"], cfg["obs"], cfg["W"], cfg["Delta"], cfg["J"], cfg["boundary"], cfg["ndis"], cfg["seed"], cfg["policy"], cfg["bulk"], cfg["workers"]
    )
    fits = {"offdiag_std": res.offdiag_std_fit, "offdiag_median": res.offdiag_median_fit, "diag_step_median": res.diag_step_fit}
    header = ["L", "W", "seed", "obs_id", "diag_step_median", "offdiag_std", "offdiag_max", "offdiag_median"]
    header += [f"slope_{k}" for k in fits]
    rows = [[r.row()[h] for h in header[:8]] + [f.slope for f in fits.values()] for r in res.reports]
    w.csv("eth_scan.csv", header, rows)
    w.json("eth_fit.json", {k: {"slope": f.slope, "intercept": f.intercept, "stderr": f.stderr, "ci95": f.ci95} for k, f in fits.items()} | {"policy": res.reports[0].policy})


def cmd_mbl_dynamics(cfg: dict, w: Writer) -> None:
    from . import mbl

    p = _xxz(cfg, cfg["L"])
    grid = mbl.TimeGrid.log(cfg["tmin"], cfg["tmax"], cfg["npoints"])
    mag = mbl.local_magnetization_run(p, cfg["axis"], grid, cfg["ndis"], cfg["seed"], cfg["workers"])
    ent = mbl.local_entropies_run(p, grid, cfg["ndis"], cfg["seed"], f"neel-{cfg['axis']}", cfg["workers"])
    ms = mbl.staggered_magnetization(mag)
    rows = []
    for i, t in enumerate(grid.points):
        rows += [[t, n, mag.mean[i, n], mag.stderr[i, n]] for n in range(p.L)]
        rows.append([t, "staggered", ms[i], float("nan")])
    w.csv(f"magnetization_{cfg['axis']}.csv", ["t", "site", "mean", "stderr"], rows)
    rows = []
    for i, t in enumerate(grid.points):
        rows += [[t, n, ent.site.mean[i, n], ent.site.stderr[i, n]] for n in range(p.L)]
        rows.append([t, "S", ent.average.mean[i], ent.average.stderr[i]])
        rows.append([t, "T", ent.total_correlations.mean[i], ent.total_correlations.stderr[i]])
    w.csv("entropies.csv", ["t", "site", "mean", "stderr"], rows)
    summary = {"identity_error": ent.max_identity_error, "sync_metric": ent.sync_metric, **mbl.run_metadata(p, grid, cfg["ndis"], cfg["seed"])}
    try:
        fit = mbl.log_modulation_fit(ent.average, (cfg["fit_tmin"], cfg["fit_tmax"]))
        summary["fit"] = {"a": fit.intercept, "b": fit.slope, "r_squared": fit.r_squared, "minima": len(fit.minima_times)}
        w.csv("log_fit.csv", ["a", "b", "r_squared", "minima"], [[fit.intercept, fit.slope, fit.r_squared, len(fit.minima_times)]])
    except ThermolabError as exc:
        summary["fit"] = {"error": str(exc)}
    w.json("log_fit.json", summary)


def cmd_mub_build(cfg: dict, w: Writer) -> None:
    from .unbiased import mub_family_prime

    fam = mub_family_prime(cfg["dim"])
    dev = fam.max_deviation()
    w.json("mub_family.json", {"dim": fam.dim, "labels": fam.labels, "bases": [{"re": b.real, "im": b.imag} for b in fam.bases]})
    w.json("mub_report.json", {"dim": fam.dim, "n_bases": len(fam), "max_deviation": dev, "tolerance": 1e-10, "all_pass": dev <= 1e-10})


def cmd_huo_check(cfg: dict, w: Writer) -> None:
    from .eth import bulk_statistics, matrix_elements
    from .models import build_xxz, draw_disorder
    from .spectral import diagonalize
    from .unbiased import balanced_huo, hub_from_spectrum, unbiasedness_score

    p = _xxz(cfg, cfg["L"])
    sd = diagonalize(build_xxz(p, draw_disorder(p.W, p.L, cfg["seed"], 0)))
    huo = balanced_huo(sd, cfg["seed"])
    tab = matrix_elements(huo, sd)
    st = bulk_statistics(tab, 1.0)
    D = sd.dim
    w.json(
        "huo_check.json",
        {
            "D": D,
            "hub_deviation": unbiasedness_score(sd.vectors, hub_from_spectrum(sd)),
            "max_abs_diagonal": float(np.max(np.abs(np.diag(tab.elements)))),
            "offdiag_std": st.offdiag_std,
            "offdiag_std_reference": 1 / math.sqrt(D),
            "offdiag_std_ratio": st.offdiag_std * math.sqrt(D),
        },
    )


def cmd_levels(cfg: dict, w: Writer) -> None:
    from .models import build_xxz, draw_disorder
    from .spectral import level_spacing_stats, sector_spectrum

    p = _xxz(cfg, cfg["L"])
    m = cfg["sector"] if cfg["sector"] is not None else p.L % 2
    sd = sector_spectrum(build_xxz(p, draw_disorder(p.W, p.L, cfg["seed"], 0)), p.L, m)
    st = level_spacing_stats(sd, cfg["bulk"], cfg["bins"])
    w.csv("spacing_histogram.csv", ["bin_left", "bin_right", "density"], zip(st.bin_edges[:-1], st.bin_edges[1:], st.histogram))
    w.json("levels.json", {"sector": m, "levels": sd.dim, "bulk_levels": st.spacings.size + 1, "mean_ratio": st.mean_ratio, "poisson": 2 * math.log(2) - 1, "goe": 0.5307})


def _decimal(q, digits: int) -> str:
    import mpmath

    with mpmath.workdps(digits + 5):
        return mpmath.nstr(mpmath.mpf(q.numerator) / q.denominator, digits)


def cmd_spinnet_surface(cfg: dict, w: Writer) -> None:
    from . import spinnet as sn

    spec = sn.IntertwinerSpec(cfg["N"], cfg["k"], cfg["J0"], cfg["Jmax"])
    st = sn.canonical_surface_state(spec)
    probs = st.probabilities()
    header = {"N": spec.N, "k": spec.k, "J0": spec.J0, "d_R": st.d_R, "normalization": str(st.normalization())}
    rows = [
        {"J_S": js2 / 2, "x": x2 / 2, "W_S": ws, "W_E": we, "weight": str(st.weight(r)), "weight_decimal": _decimal(st.weight(r), cfg["digits"]), "multiplicity": st.multiplicity(r), "probability": fmt(pr)}
        for r, pr in zip(st.rows, probs)
        for js2, x2, ws, we in [r]
    ]
    w.json("surface_weights.json", {"header": header, "rows": rows})
    w.csv("surface_weights.csv", list(rows[0]) if rows else ["J_S"], [list(r.values()) for r in rows])
    reg = sn.surface_entropy_regimes(spec)
    typ = sn.typicality_bound(spec, cfg["eps"]) if spec.J0 > 0 else None
    w.json(
        "surface_summary.json",
        {
            "d_R": st.d_R,
            "entropy": st.entropy(),
            "regime": reg.label,
            "asymptotic": reg.asymptotic,
            "relative_deviation": reg.relative_deviation,
            "mean_area": float(st.mean_area()),
            "typicality": typ.to_json() if typ else None,
        },
    )


def cmd_spinnet_boundary(cfg: dict, w: Writer) -> None:
    from . import spinnet as sn

    spec = sn.FlowerGraphSpec(cfg["E"], cfg["L"], int(round(2 * cfg["j0"])))
    r = sn.boundary_report(spec)
    w.json(
        "boundary_report.json",
        {
            "E": spec.E,
            "L": spec.L,
            "j0": spec.j0,
            "exact": r.exact,
            "entropy": r.entropy,
            "asymptotic_entropy": r.asymptotic_entropy,
            "ln_ratio_exact": r.ln_ratio_exact,
            "ln_ratio_asymptotic": r.ln_ratio_asymptotic,
            "below_threshold": r.below_threshold,
            "d_FR": r.state.d_FR if r.state else None,
        },
    )


def cmd_theorem_scan(cfg: dict, w: Writer) -> None:
    from .unbiased import fit_slope, magnetization_theorem_scan

    scan, dev = magnetization_theorem_scan(range(cfg["Nmin"], cfg["Nmax"] + 1))
    w.csv("theorem_scan.csv", ["N", "q", "j_star", "j_max"], [[r.N, r.q, r.j_star, r.j_max] for r in scan])
    w.csv("deviation.csv", ["N", "j", "D_j", "log_ratio", "log_bound"], [[r.N, r.j, r.D_j, r.log_ratio, r.log_bound] for r in dev])
    slope, icpt = fit_slope([r.N for r in scan], [r.q for r in scan])
    w.json("theorem_fit.json", {"slope": slope, "intercept": icpt})


COMMANDS: dict[str, Callable[[dict, Writer], None]] = {
    "eth-scan": cmd_eth_scan,
    "mbl-dynamics": cmd_mbl_dynamics,
    "mub-build": cmd_mub_build,
    "huo-check": cmd_huo_check,
    "levels": cmd_levels,
    "spinnet-surface": cmd_spinnet_surface,
    "spinnet-boundary": cmd_spinnet_boundary,
    "theorem-scan": cmd_theorem_scan,
}


# ---------------------------------------------------------------- runner


def _now() -> str:
    return time.strftime("%Y-%m-%dT%H:%M:%S%z")


def default_out(command: str) -> Path:
    return Path(os.environ.get(OUTPUT_ENV, "thermolab-output")) / command


def run(command: str, params: dict, common: dict, out: Path) -> dict:
    """Validate, execute and write the manifest; returns the manifest."""
    from .models import RNG_NAME

    common = validate_common(common)
    cfg = validate(command, params)
    started = _now()
    w = Writer(Path(out))
    COMMANDS[command]({**cfg, **common}, w)
    manifest = {
        "subcommand": command,
        "config": cfg,
        "seed": common["seed"],
        "workers": common["workers"],
        "version": __version__,
        "backend": BACKEND,
        "rng": RNG_NAME,
        "started": started,
        "finished": _now(),
        "outputs": w.files,
    }
    (Path(out) / "manifest.json").write_text(json.dumps(_jsonable(manifest), indent=2, sort_keys=True) + "\n", encoding="utf-8")
    return manifest


def _numeric_close(a: Path, b: Path, rtol: float = 1e-10) -> bool:
    ta, tb = a.read_text(encoding="utf-8"), b.read_text(encoding="utf-8")
    if a.suffix == ".json":
        return _json_close(json.loads(ta), json.loads(tb), rtol)
    ra, rb = list(csv.reader(ta.splitlines())), list(csv.reader(tb.splitlines()))
    if len(ra) != len(rb):
        return False
    for x, y in zip(ra, rb):
        if len(x) != len(y) or not all(_cell_close(u, v, rtol) for u, v in zip(x, y)):
            return False
    return True


def _cell_close(u: str, v: str, rtol: float) -> bool:
    if u == v:
        return True
    try:
        fu, fv = float(u), float(v)
    except ValueError:
        return False
    return math.isclose(fu, fv, rel_tol=rtol, abs_tol=0.0) or (math.isnan(fu) and math.isnan(fv))


def _json_close(a, b, rtol) -> bool:
    if isinstance(a, dict) and isinstance(b, dict):
        return a.keys() == b.keys() and all(_json_close(a[k], b[k], rtol) for k in a)
    if isinstance(a, list) and isinstance(b, list):
        return len(a) == len(b) and all(_json_close(x, y, rtol) for x, y in zip(a, b))
    if isinstance(a, (int, float)) and isinstance(b, (int, float)) and not isinstance(a, bool):
        return math.isclose(a, b, rel_tol=rtol)
    return a == b


def replay(manifest_path: Path, seed: int | None = None, workers: int | None = None, out: Path | None = None) -> tuple[bool, list[str]]:
    """Re-run a manifest's config and compare outputs; returns (match, report lines)."""
    man = json.loads(Path(manifest_path).read_text(encoding="utf-8"))
    common = {"seed": man["seed"] if seed is None else seed, "workers": man.get("workers", 1) if workers is None else workers}
    report = []
    exact = man.get("version") == __version__
    if not exact:
        report.append(f"warning: version {man.get('version')} != {__version__}; comparing numerically at 1e-10")
    with tempfile.TemporaryDirectory() as tmp:
        target = Path(out) if out else Path(tmp)
        new = run(man["subcommand"], man["config"], common, target)
        src = Path(manifest_path).parent
        ok = True
        for name, digest in man["outputs"].items():
            got = new["outputs"].get(name)
            if got == digest:
                continue
            if not exact and got is not None and (src / name).exists() and _numeric_close(src / name, target / name):
                report.append(f"{name}: within tolerance")
                continue
            ok = False
            report.append(f"{name}: checksum mismatch ({digest[:12]} -> {str(got)[:12]})")
        for name in sorted(set(new["outputs"]) - set(man["outputs"])):
            ok = False
            report.append(f"{name}: not present in original manifest")
    if ok:
        report.append("all outputs identical" if exact else "all outputs match")
    return ok, report


# ------------------------------------------------------------------ argv


def _add_common(sp: argparse.ArgumentParser) -> None:
    sp.add_argument("--config", type=Path, help="JSON config; flags override its fields")
    sp.add_argument("--out", type=Path, help=f"output directory (default ${OUTPUT_ENV}/<subcommand>)")
    sp.add_argument("--seed", type=int, default=argparse.SUPPRESS, help="unsigned 64-bit master seed")
    sp.add_argument("--workers", type=int, default=argparse.SUPPRESS, help="worker processes")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="thermolab", description="Thermalization and spin-network experiments.")
    ap.add_argument("--version", action="version", version=f"thermolab {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)
    for name, schema in SCHEMAS.items():
        sp = sub.add_parser(name)
        _add_common(sp)
        for key, f in schema.items():
            kw: dict[str, Any] = {"default": argparse.SUPPRESS, "dest": key}
            if f.kind == "ints":
                kw.update(type=int, nargs="+")
            elif f.kind in ("int", "opt_int"):
                kw["type"] = int
            elif f.kind in ("float", "opt_float"):
                kw["type"] = float
            if f.choices:
                kw["choices"] = f.choices
            sp.add_argument(f"--{key}", help=f"default {f.default!r}", **kw)
    rp = sub.add_parser("replay")
    rp.add_argument("manifest", type=Path)
    rp.add_argument("--seed", type=int, default=None)
    rp.add_argument("--workers", type=int, default=None)
    rp.add_argument("--out", type=Path, default=None)
    return ap


def _split(command: str, ns: argparse.Namespace) -> tuple[dict, dict, Path]:
    cfg: dict = {}
    if ns.config is not None:
        try:
            cfg = json.loads(Path(ns.config).read_text(encoding="utf-8"))
        except (OSError, json.JSONDecodeError) as exc:
            raise SchemaError(f"field 'config': cannot read {ns.config}: {exc}") from None
        if not isinstance(cfg, dict):
            raise SchemaError("field 'config': top level must be a JSON object")
        cfg = dict(cfg.get("config", cfg))
    flags = {k: v for k, v in vars(ns).items() if k not in ("command", "config", "out")}
    cfg.update(flags)
    common = {k: cfg.pop(k) for k in ("seed", "workers") if k in cfg}
    out = ns.out or (Path(cfg.pop("out")) if "out" in cfg else default_out(command))
    return cfg, common, out


def main(argv: list[str] | None = None) -> int:
    ns = build_parser().parse_args(argv)
    try:
        if ns.command == "replay":
            ok, report = replay(ns.manifest, ns.seed, ns.workers, ns.out)
            print("\n".join(report))
            return EXIT_OK if ok else EXIT_FAIL
        params, common, out = _split(ns.command, ns)
        man = run(ns.command, params, common, out)
        print(f"wrote {len(man['outputs'])} files and manifest.json to {out}")
        return EXIT_OK
    except ResourceError as exc:
        print(f"resource error: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except ThermolabError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
