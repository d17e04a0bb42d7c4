"""Command-line front door: subst, spectrum, gaps, dims, dos, surface, scan.

All configuration is flags-only; every floating value is printed with 17
significant digits so repeated runs diff cleanly.  Exit codes: 0 on
success, 2 on usage errors, 1 on computation errors.
"""

import argparse
import csv
import json
import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from . import fractal, spectrum as spec_mod
from .dos import dos_dimension_summary, ids
from .jacobi import JacobiParams
from .rotation import rotation_number, scan_beta
from .spectrum import default_energy_range, floquet_bands, gaps_with_labels
from .substitution import fixed_point_prefix, parse_substitution
from .tracemap import recipe_from_substitution, surface_section

F17 = lambda x: format(float(x), ".17g")


def _write_csv(path, header, rows):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(header)
        for row in rows:
            w.writerow([F17(v) if isinstance(v, float) else v for v in row])


def _write_json(path, obj):
    with open(path, "w") as fh:
        json.dump(obj, fh, indent=2, sort_keys=True)
        fh.write("\n")


def _emit(args, obj):
    if getattr(args, "json", False):
        print(json.dumps(obj, indent=2, sort_keys=True))
    else:
        for k, v in obj.items():
            print("%s: %s" % (k, v))


def _params(args):
    return JacobiParams(args.p, args.q)


def _out_dir(args):
    out = args.out_dir
    os.makedirs(out, exist_ok=True)
    return out


def cmd_subst(args):
    s = parse_substitution(args.substitution)
    report = {
        "substitution": s.text(),
        "primitive": s.primitive,
        "invertible": s.invertible,
        "abelianization": [list(r) for r in s.abelianization],
    }
    if s.primitive and s.invertible:
        rot = rotation_number(s)
        recipe = recipe_from_substitution(s)
        report["alpha"] = F17(rot.alpha)
        report["alpha_cf_preperiod"] = list(rot.cf_preperiod)
        report["alpha_cf_period"] = list(rot.cf_period)
        report["recipe"] = recipe.text()
        if args.scan_beta:
            report["beta_scan"] = scan_beta(s, n_letters=args.prefix or 50)
    if args.prefix:
        report["prefix"] = fixed_point_prefix(s, args.prefix)
    _emit(args, report)
    return 0


def _bands_rows(bands):
    return [(bands.level, a, b) for a, b in bands.bands]


def cmd_spectrum(args):
    s = parse_substitution(args.substitution)
    params = _params(args)
    e_range = (args.e_min, args.e_max) if args.e_min is not None else None
    bands = floquet_bands(s, params, args.level, e_range=e_range, grid=args.grid,
                          tol=args.tol)
    out = _out_dir(args)
    csv_path = os.path.join(out, "bands_k%d.csv" % args.level)
    _write_csv(csv_path, ("level", "band_lo", "band_hi"), _bands_rows(bands))
    summary = {
        "substitution": s.text(),
        "p": F17(params.p),
        "q": F17(params.q),
        "k": args.level,
        "band_count": bands.band_count,
        "measure": F17(bands.measure()),
        "hull": [F17(bands.hull()[0]), F17(bands.hull()[1])],
        "csv": csv_path,
    }
    _write_json(os.path.join(out, "bands_k%d.json" % args.level), summary)
    _emit(args, summary)
    return 0


def cmd_gaps(args):
    s = parse_substitution(args.substitution)
    params = _params(args)
    bands = floquet_bands(s, params, args.level, grid=args.grid, tol=args.tol)
    lo, hi = default_energy_range(params)
    mids = [0.5 * (g[0] + g[1]) for g in bands.gaps()]
    grid = np.unique(np.concatenate([np.linspace(lo, hi, 2049), np.array(mids)])) \
        if mids else np.linspace(lo, hi, 2049)
    table = ids(s, params, args.length, grid)
    alpha = rotation_number(s).alpha
    tol = args.label_tol if args.label_tol is not None else 2.0 / args.length
    labeled = gaps_with_labels(bands, table, alpha, m_max=args.m_max, tol=tol)
    out = _out_dir(args)
    path = os.path.join(out, "gaps_k%d.csv" % args.level)
    rows = [(g.lo, g.hi, g.width, g.ids_value,
             "" if g.label_m is None else g.label_m,
             g.label_value if not math.isnan(g.label_value) else "")
            for g in labeled]
    _write_csv(path, ("gap_lo", "gap_hi", "width", "ids", "label_m", "label_value"),
               rows)
    matched = sum(1 for g in labeled if g.label_m is not None)
    _emit(args, {"gaps": len(labeled), "labeled": matched, "alpha": F17(alpha),
                 "csv": path})
    return 0


def cmd_dims(args):
    s = parse_substitution(args.substitution)
    params = _params(args)
    bands = floquet_bands(s, params, args.level, grid=args.grid, tol=args.tol)
    est = fractal.box_dimension(bands)
    tau = fractal.thickness(bands)
    report = {
        "dim": F17(est.value), "stderr": F17(est.stderr),
        "scale_min": F17(est.scale_min), "scale_max": F17(est.scale_max),
        "thickness": F17(tau.value), "band_count": bands.band_count,
        "measure": F17(bands.measure()),
    }
    out = _out_dir(args)
    rows = []
    if args.windows > 1:
        profile = fractal.local_dimension_profile(s, params, args.level,
                                                  args.windows, bands=bands)
        for center, e in profile:
            rows.append((center, "" if e is None else e.value,
                         "" if e is None else e.stderr))
        _write_csv(os.path.join(out, "dim_profile_k%d.csv" % args.level),
                   ("E_center", "dim", "stderr"), rows)
        report["profile_csv"] = os.path.join(out, "dim_profile_k%d.csv" % args.level)
    _write_json(os.path.join(out, "dims_k%d.json" % args.level), report)
    _emit(args, report)
    return 0


def cmd_dos(args):
    s = parse_substitution(args.substitution)
    params = _params(args)
    lo, hi = default_energy_range(params)
    table = ids(s, params, args.length, np.linspace(lo, hi, args.grid))
    out = _out_dir(args)
    path = os.path.join(out, "ids_L%d.csv" % args.length)
    _write_csv(path, ("E", "N"), list(zip(table.e_grid, table.n_values)))
    report = {"L": args.length, "csv": path}
    if args.samples:
        summary = dos_dimension_summary(s, params, args.samples, args.length,
                                        seed=args.seed)
        report.update({
            "d_min": F17(summary.d_min), "d_median": F17(summary.d_median),
            "d_max": F17(summary.d_max), "skipped": summary.skipped,
        })
        _write_json(os.path.join(out, "dos_exponents.json"), report)
    _emit(args, report)
    return 0


def cmd_surface(args):
    raster = surface_section(args.invariant, args.resolution,
                             max_steps=args.max_steps)
    out = _out_dir(args)
    base = os.path.join(out, "surface_V%s" % F17(args.invariant))
    rows = []
    for sheet in range(2):
        for iy, yv in enumerate(raster["y"]):
            for ix, xv in enumerate(raster["x"]):
                rows.append((sheet, xv, yv, int(raster["steps"][sheet][iy, ix])))
    _write_csv(base + ".csv", ("sheet", "x", "y", "steps"), rows)
    _write_ppm(base + ".ppm", raster)
    _emit(args, {"csv": base + ".csv", "ppm": base + ".ppm",
                 "bounded_cells": int((raster["steps"] > raster["max_steps"]).sum()),
                 "escaped_cells": int(((raster["steps"] >= 0)
                                       & (raster["steps"] <= raster["max_steps"])).sum())})
    return 0


def _write_ppm(path, raster):
    steps = raster["steps"]
    max_steps = raster["max_steps"]
    sheets, h, w = steps.shape
    img = np.zeros((sheets * h, w, 3), dtype=np.uint8)
    for sheet in range(sheets):
        block = steps[sheet]
        tile = np.zeros((h, w, 3), dtype=np.uint8)
        esc = (block >= 0) & (block <= max_steps)
        bounded = block > max_steps
        t = np.zeros_like(block, dtype=float)
        t[esc] = block[esc] / float(max_steps)
        tile[..., 0] = np.where(esc, (255 * (1 - t)).astype(np.uint8), 0)
        tile[..., 1] = np.where(esc, (200 * t).astype(np.uint8), 0)
        tile[..., 2] = np.where(bounded, 200, 0).astype(np.uint8)
        img[sheet * h:(sheet + 1) * h] = tile
    with open(path, "wb") as fh:
        fh.write(b"P6\n%d %d\n255\n" % (w, sheets * h))
        fh.write(img.tobytes())


def cmd_scan(args):
    s = parse_substitution(args.substitution)
    values = [float(v) for v in args.values.split(",") if v.strip()]
    out = _out_dir(args)
    if args.kind == "large_coupling":
        rows = fractal.large_coupling_check(values, k=args.level, s=s)
        path = os.path.join(out, "scan_large_coupling.csv")
        _write_csv(path, ("V", "dim", "stderr", "asymptote", "bands"),
                   [(r["V"], r["dim"], r["stderr"], r["asymptote"], r["bands"])
                    for r in rows])
    elif args.kind == "p_to_zero":
        result = fractal.p_to_zero_scan(s, args.q, values, k=args.level)
        path = os.path.join(out, "scan_p_to_zero.csv")
        _write_csv(path, ("p", "dim", "measure", "dist_to_reference"),
                   [(r["p"], r["dim"], r["measure"], r["dist_to_reference"])
                    for r in result["rows"]])
    elif args.kind == "gap_rate":
        res = fractal.gap_opening_rate(s, lambda t: (1.0, t), values,
                                       label_m=args.label_m, k=args.level)
        path = os.path.join(out, "scan_gap_rate.csv")
        _write_csv(path, ("t", "width", "ratio"),
                   list(zip(res.t_values, res.widths, res.ratios)))
    else:  # probe: escape classification along an energy grid
        params = _params(args)
        recipe = recipe_from_substitution(s)
        lo, hi = default_energy_range(params)
        energies = np.linspace(lo, hi, int(values[0]) if values else 512)
        chunks = np.array_split(np.arange(energies.size), max(args.threads, 1))

        def work(ix):
            out_rows = []
            for i in ix:
                v = spec_mod.dynamical_spectrum_probe(
                    s, params, [energies[i]], recipe=recipe)[0]
                out_rows.append((energies[i], v.kind, v.steps_used))
            return out_rows

        with ThreadPoolExecutor(max_workers=max(args.threads, 1)) as pool:
            results = list(pool.map(work, chunks))
        rows = [r for chunk in results for r in chunk]
        path = os.path.join(out, "scan_probe.csv")
        _write_csv(path, ("E", "kind", "steps"), rows)
    _emit(args, {"csv": path})
    return 0


def _add_common(sp, with_params=True):
    sp.add_argument("--out-dir", default=".", help="output directory")
    sp.add_argument("--json", action="store_true", help="machine-readable report")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--threads", type=int, default=os.cpu_count() or 1)
    if with_params:
        sp.add_argument("--p", type=float, default=1.0, help="hopping on letter 1")
        sp.add_argument("--q", type=float, default=0.0, help="potential on letter 1")
        sp.add_argument("--level", type=int, default=8, help="periodic approximation level")
        sp.add_argument("--grid", type=int, default=4096)
        sp.add_argument("--tol", type=float, default=None, help="band edge tolerance")


def build_parser():
    ap = argparse.ArgumentParser(prog="sturmtrace",
                                 description="substitution Jacobi spectra via trace maps")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("subst", help="inspect a substitution")
    p.add_argument("substitution")
    p.add_argument("--prefix", type=int, default=0)
    p.add_argument("--scan-beta", action="store_true")
    _add_common(p, with_params=False)
    p.set_defaults(fn=cmd_subst)

    p = sub.add_parser("spectrum", help="periodic-approximation band set")
    p.add_argument("substitution")
    p.add_argument("--e-min", type=float, default=None)
    p.add_argument("--e-max", type=float, default=None)
    _add_common(p)
    p.set_defaults(fn=cmd_spectrum)

    p = sub.add_parser("gaps", help="gap labeling against the IDS")
    p.add_argument("substitution")
    p.add_argument("--length", type=int, default=2584, help="IDS truncation L")
    p.add_argument("--m-max", type=int, default=34)
    p.add_argument("--label-tol", type=float, default=None)
    _add_common(p)
    p.set_defaults(fn=cmd_gaps)

    p = sub.add_parser("dims", help="box dimension and thickness")
    p.add_argument("substitution")
    p.add_argument("--windows", type=int, default=1)
    _add_common(p)
    p.set_defaults(fn=cmd_dims)

    p = sub.add_parser("dos", help="integrated density of states")
    p.add_argument("substitution")
    p.add_argument("--length", type=int, default=987)
    p.add_argument("--samples", type=int, default=0)
    _add_common(p)
    p.set_defaults(fn=cmd_dos)

    p = sub.add_parser("surface", help="escape-time raster of S_V")
    p.add_argument("--invariant", type=float, default=0.01, help="Fricke-Vogt value V")
    p.add_argument("--resolution", type=int, default=128)
    p.add_argument("--max-steps", type=int, default=60)
    _add_common(p, with_params=False)
    p.set_defaults(fn=cmd_surface)

    p = sub.add_parser("scan", help="batch scans (large_coupling, p_to_zero, gap_rate, probe)")
    p.add_argument("substitution")
    p.add_argument("--kind", choices=["large_coupling", "p_to_zero", "gap_rate", "probe"],
                   required=True)
    p.add_argument("--values", default="", help="comma-separated scan values")
    p.add_argument("--label-m", type=int, default=1)
    _add_common(p)
    p.set_defaults(fn=cmd_scan)
    return ap


def main(argv=None):
    from .substitution import SubstitutionError

    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        return args.fn(args)
    except SubstitutionError as exc:
        print("usage error: %s" % exc, file=sys.stderr)
        return 2
    except (ValueError, RuntimeError, OSError) as exc:
        print("error: %s" % exc, file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
