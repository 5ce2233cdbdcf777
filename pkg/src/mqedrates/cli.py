"""
Command-line front end.

Exit codes: 0 success, 1 usage error, 2 physics-domain or scenario error.
Lengths on the command line are in Angstrom.
"""
import argparse
import math
import sys

import numpy as np

from mqedrates import analysis, greens, rates, scenario, units
from mqedrates.errors import DomainError

EXIT_OK, EXIT_USAGE, EXIT_DOMAIN = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: error: {message}\n{self.format_usage()}")


def _complex_arg(text):
    try:
        re_, im_ = (float(x) for x in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected RE,IM, got {text!r}") from None
    return complex(re_, im_)


_COMPLEX_FLAGS = ("--rnr", "--alpha")


def _join_complex_values(argv):
    """Let ``--rnr -2,0`` through: argparse would read ``-2,0`` as an option."""
    out, it = [], iter(argv)
    for tok in it:
        if tok in _COMPLEX_FLAGS:
            nxt = next(it, None)
            out.append(tok if nxt is None else f"{tok}={nxt}")
        else:
            out.append(tok)
    return out


def build_parser():
    common = _Parser(add_help=False)
    common.add_argument("--config", help="scenario JSON file (or name of a bundled scenario)")
    common.add_argument("--output", help="write CSV here (atomically)")
    common.add_argument("--format", choices=("csv", "pretty"), default="pretty")

    surface = _Parser(add_help=False)
    mat = surface.add_mutually_exclusive_group()
    mat.add_argument("--material", type=int, choices=(1, 2, 3, 4), help="reflection-coefficient table index")
    mat.add_argument("--rnr", type=_complex_arg, help="reflection coefficient RE,IM")
    surface.add_argument("--geometry", choices=analysis.GEOMETRIES)
    surface.add_argument("--orientation", choices=rates.ORIENTATIONS)
    surface.add_argument("--r-ab", type=float, help="donor-acceptor distance (Angstrom)")
    surface.add_argument("--auger-radius", type=float, help="Auger radius (Angstrom)")

    parser = _Parser(prog="mqedrates", description=__doc__.split("\n")[1])
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)

    p = sub.add_parser("rate", parents=[common, surface], help="single-point rate")
    p.add_argument("--process", choices=("spontaneous", "icd", "auger"), required=True)
    p.add_argument("--dr", type=float, help="donor-surface distance (Angstrom)")

    p = sub.add_parser("sweep", parents=[common, surface], help="rates versus surface distance")
    p.add_argument("--dr-min", type=float)
    p.add_argument("--dr-max", type=float)
    p.add_argument("--steps", type=int)
    p.add_argument("--spacing", choices=("linear", "log"))

    p = sub.add_parser("contour", parents=[common, surface], help="2-D donor-position scan")
    p.add_argument("--acceptor-height", type=float, help="acceptor height (Angstrom); default 5 Auger radii")
    p.add_argument("--x-range", type=float, nargs=2, metavar=("MIN", "MAX"))
    p.add_argument("--z-range", type=float, nargs=2, metavar=("MIN", "MAX"))
    p.add_argument("--nx", type=int, default=41)
    p.add_argument("--nz", type=int, default=41)

    p = sub.add_parser("cavity", parents=[common], help="cavity Q-factor enhancement")
    p.add_argument("--q", type=float, help="quality factor")
    p.add_argument("--s", type=float, help="scale factor 3 lambda^3 / (4 pi^2 V)")

    p = sub.add_parser("table", parents=[common], help="channel ratio matrix")
    p.add_argument("--alpha", type=_complex_arg, default=0j,
                   help="mediator polarisability volume RE,IM (Angstrom^3)")

    sub.add_parser("hene", parents=[common], help="HeNe dimer numbers")
    sub.add_parser("materials", parents=[common], help="reflection-coefficient table")
    return parser


# --------------------------------------------------------------------------
# helpers
# --------------------------------------------------------------------------

def _config(args):
    if not args.config:
        return None
    path = args.config
    try:
        open(path).close()
    except OSError:
        bundled = scenario.bundled_path(path)
        if bundled.exists():
            path = bundled
    return scenario.load_scenario(path)


def _transition(cfg):
    """ICD and Auger data from the scenario, falling back to HeNe."""
    if cfg is not None:
        return cfg.icd, cfg.auger
    hene = scenario.hene_dataset()
    return hene.icd, hene.auger


def _r_nr(args, cfg):
    if args.rnr is not None:
        return args.rnr
    if args.material is not None:
        return scenario.material(args.material).r_nr
    if cfg is not None and isinstance(cfg.environment, greens.Surface):
        return cfg.environment.r_nr
    return complex(-2.0)


def _pick(value, cfg, key, default):
    if value is not None:
        return value
    if cfg is not None and key in cfg.geometry:
        return cfg.geometry[key]
    return default


def _length(value_angstrom, fallback_m, name):
    if value_angstrom is None:
        if fallback_m is None:
            raise UsageError(f"--{name} is required")
        return fallback_m
    if not value_angstrom > 0:
        raise UsageError(f"--{name} must be positive")
    return units.angstrom_to_m(value_angstrom)


def _emit(args, grid, summary_lines, out):
    if args.output:
        scenario.write_csv(grid, args.output)
    if args.format == "csv" and not args.output:
        out.write(scenario.render_csv(grid))
    else:
        out.write("\n".join(summary_lines) + "\n")
        if args.output:
            out.write(f"wrote {len(grid.rows)} rows to {args.output}\n")


def _g(x):
    return f"{x:.6g}"


# --------------------------------------------------------------------------
# subcommands
# --------------------------------------------------------------------------

def cmd_rate(args, out):
    cfg = _config(args)
    icd_data, auger_data = _transition(cfg)
    env = cfg.environment if cfg is not None else greens.FreeSpace()
    if args.rnr is not None or args.material is not None:
        env = greens.Surface(_r_nr(args, cfg))
    layout = _pick(args.geometry, cfg, "layout", "parallel")
    orientation = _pick(args.orientation, cfg, "orientation", "iso")
    r_ab = _length(args.r_ab, icd_data.separation, "r-ab")
    dr = _length(args.dr, (cfg.geometry.get("surface_distance") if cfg else None), "dr") \
        if isinstance(env, greens.Surface) else None
    if dr is not None:
        donor, acceptor = analysis.surface_positions(layout, dr, r_ab)
    else:
        donor, acceptor = np.zeros(3), np.array([r_ab, 0.0, 0.0])

    if args.process == "spontaneous":
        res = rates.spontaneous_rate(icd_data, env, donor, orientation, axis=acceptor - donor)
        label = "Gamma_s"
    elif args.process == "icd":
        res = rates.icd_rate(icd_data, env, donor, acceptor, orientation)
        label = "Gamma_ICD"
    else:
        if args.auger_radius is not None:
            auger_data = rates.AtomicTransitionData(
                omega=auger_data.omega, gamma=auger_data.gamma, sigma=auger_data.sigma,
                auger_radius=units.angstrom_to_m(args.auger_radius))
        res = rates.auger_rate_environment(auger_data, env, donor)
        label = "Gamma_A"

    grid = analysis.SweepGrid(
        columns=["process", f"{label} [1/s]", f"{label}_0 [1/s]", "relative [1]",
                 "bulk [1/s]", "cross [1/s]", "scattering [1/s]", "flags"],
        rows=[(args.process, res.absolute, res.free_space, res.relative_to_free_space,
               res.decomposition["bulk"], res.decomposition["cross"],
               res.decomposition["scattering"], ";".join(res.validity_flags))],
        shape=(1,),
    )
    lines = [
        f"{label}_0 = {_g(res.free_space)} 1/s   (free space)",
        f"{label}   = {_g(res.absolute)} 1/s",
        f"{label}/{label}_0 = {_g(res.relative_to_free_space)}",
    ]
    if res.validity_flags:
        lines.append("flags: " + ", ".join(res.validity_flags))
    _emit(args, grid, lines, out)


def cmd_sweep(args, out):
    cfg = _config(args)
    icd_data, auger_data = _transition(cfg)
    sw = cfg.sweep if cfg is not None else {}
    lo = _length(args.dr_min, sw.get("dr_min"), "dr-min")
    hi = _length(args.dr_max, sw.get("dr_max"), "dr-max")
    steps = args.steps if args.steps is not None else sw.get("steps")
    if steps is None:
        raise UsageError("--steps is required")
    if steps < 2:
        raise UsageError("--steps must be at least 2")
    if not lo < hi:
        raise UsageError("--dr-min must be smaller than --dr-max")
    spacing = args.spacing or sw.get("spacing", "linear")
    drs = np.geomspace(lo, hi, steps) if spacing == "log" else np.linspace(lo, hi, steps)
    layout = _pick(args.geometry, cfg, "layout", "parallel")
    orientation = _pick(args.orientation, cfg, "orientation", "iso")
    r_ab = _length(args.r_ab, icd_data.separation, "r-ab")
    a = _length(args.auger_radius, auger_data.auger_radius, "auger-radius")
    r_nr = _r_nr(args, cfg)
    grid = analysis.surface_sweep(layout, orientation, r_nr, drs, r_ab, a, omega=icd_data.omega)
    bb = grid.column("B/B0 [1]")
    lines = [
        f"surface sweep: {layout}, orientation {orientation}, r_NR = {r_nr:.4g}",
        f"r_ab = {units.m_to_angstrom(r_ab):.4g} A, a = {units.m_to_angstrom(a):.4g} A, {steps} points",
        f"B/B0 range: {_g(bb.min())} .. {_g(bb.max())}",
    ]
    _emit(args, grid, lines, out)


def cmd_contour(args, out):
    cfg = _config(args)
    icd_data, auger_data = _transition(cfg)
    a = _length(args.auger_radius, auger_data.auger_radius, "auger-radius")
    h = units.angstrom_to_m(args.acceptor_height) if args.acceptor_height else 5 * a
    if not h > 0:
        raise UsageError("--acceptor-height must be positive")
    r_ab = _length(args.r_ab, icd_data.separation, "r-ab")
    xr = args.x_range or (-4 * r_ab / units.ANGSTROM, 4 * r_ab / units.ANGSTROM)
    zr = args.z_range or (0.1 * a / units.ANGSTROM, h / units.ANGSTROM + 4 * r_ab / units.ANGSTROM)
    if args.nx < 2 or args.nz < 2:
        raise UsageError("--nx and --nz must be at least 2")
    xs = np.linspace(*xr, args.nx) * units.ANGSTROM
    zs = np.linspace(*zr, args.nz) * units.ANGSTROM
    orientation = _pick(args.orientation, cfg, "orientation", "iso")
    r_nr = _r_nr(args, cfg)
    grid = analysis.contour_scan([0.0, 0.0, h], xs, zs, r_nr, a, orientation)
    bad = sum(1 for row in grid.rows if row[-1] != "ok")
    lines = [
        f"contour scan: orientation {orientation}, r_NR = {r_nr:.4g}, acceptor at z = {h / units.ANGSTROM:.4g} A",
        f"{args.nx} x {args.nz} donor positions, {bad} skipped",
    ]
    _emit(args, grid, lines, out)


def cmd_cavity(args, out):
    cfg = _config(args)
    icd_data, _ = _transition(cfg)
    cav = cfg.cavity if cfg is not None else {}
    q = args.q if args.q is not None else cav.get("Q")
    s = args.s if args.s is not None else cav.get("s", 1.0)
    if q is None:
        raise UsageError("--q is required")
    est = analysis.cavity_estimate(q, s, icd_data)
    grid = analysis.SweepGrid(
        columns=["Q [1]", "s [1]", "b_icd [1]", "b_a [1]", "enhancement_icd [1]",
                 "enhancement_auger [1]", "flags"],
        rows=[(est.Q, est.s, est.b_icd, est.b_a, est.enhancement_icd, est.enhancement_auger,
               ";".join(est.validity_flags))],
        shape=(1,),
    )
    lines = [
        f"b_icd = {_g(est.b_icd)}   b_a = {_g(est.b_a)}",
        f"Gamma_ICD^cav / Gamma_ICD,0 = {_g(est.enhancement_icd)}",
        f"Gamma_A^cav / Gamma_A,0     = {_g(est.enhancement_auger)}",
    ]
    _emit(args, grid, lines, out)


def cmd_table(args, out):
    cfg = _config(args)
    icd_data, auger_data = _transition(cfg)
    if icd_data.separation is None or auger_data.auger_radius is None:
        raise UsageError("the ratio table needs separation and Auger radius")
    alpha = complex(args.alpha) * units.ANGSTROM ** 3
    scales = analysis.LengthScales.from_physical(
        icd_data.omega, icd_data.separation, auger_data.auger_radius, icd_data.sigma, alpha)
    t = analysis.ratio_table(scales)
    labels = analysis.RATE_LABELS
    grid = analysis.SweepGrid(columns=["rate", *[f"/{lab} [1]" for lab in labels]], shape=(5, 5))
    for i, lab in enumerate(labels):
        grid.rows.append((lab, *t[i]))
    width = max(len(x) for x in labels)
    lines = [" " * width + "  " + "  ".join(f"{lab:>13}" for lab in labels)]
    for i, lab in enumerate(labels):
        cells = ["" if math.isnan(v) else f"{v:.6g}" for v in t[i]]
        lines.append(f"{lab:>{width}}  " + "  ".join(f"{c:>13}" for c in cells))
    _emit(args, grid, lines, out)


def hene_numbers(auger_radius_angstrom=None):
    """Numbers reproduced for the HeNe dimer."""
    hene = scenario.hene_dataset(auger_radius_angstrom)
    dr = units.angstrom_to_m(2.0)
    out = {
        "r_ab/a": hene.separation / hene.auger_radius,
        "b_icd": analysis.b_icd(hene.omega, hene.separation),
        "b_a": analysis.b_auger(hene.omega, hene.auger_radius),
        "Gamma_A0": rates.auger_rate_free(hene.auger).absolute,
        "Gamma_ICD0": rates.icd_rate_free_nonretarded(hene.icd, hene.separation),
    }
    out["B0"] = out["Gamma_ICD0"] / out["Gamma_A0"]
    for r_nr in (-2.0, 2.0):
        out[f"B/B0(r_NR={r_nr:+g})"] = analysis.surface_branching(
            "parallel", "mpm1", r_nr, dr, hene.separation, hene.auger_radius)
    return out


def cmd_hene(args, out):
    n = hene_numbers()
    described = [
        ("r_ab/a", n["r_ab/a"], "1", "ratio of r_ab/a = 6.58"),
        ("b_icd", n["b_icd"], "1", "b_icd = 7.99e-5"),
        ("b_a", n["b_a"], "1", "b_a = 5.78e-6"),
        ("Gamma_A0", n["Gamma_A0"], "1/s", "free-space Auger rate from a = 0.457 A"),
        ("Gamma_ICD0", n["Gamma_ICD0"], "1/s", "free-space ICD rate at r_ab = 3.01 A"),
        ("B0", n["B0"], "1", "free-space branching ratio"),
        ("B/B0(r_NR=-2)", n["B/B0(r_NR=-2)"], "1", "parallel, Pi state, dr = 2 A: B/B0 = 2"),
        ("B/B0(r_NR=+2)", n["B/B0(r_NR=+2)"], "1", "parallel, Pi state, dr = 2 A: B/B0 ~ 1/2"),
    ]
    grid = analysis.SweepGrid(columns=["quantity", "value [see unit]", "unit", "reference"],
                              rows=described, shape=(len(described),))
    lines = [f"{name:<15} = {_g(val):>12} {unit:<4} [{ref}]" for name, val, unit, ref in described]
    _emit(args, grid, lines, out)


def cmd_materials(args, out):
    grid = analysis.SweepGrid(
        columns=["index", "Re r_NR [1]", "Im r_NR [1]", "Re eps [1]", "Im eps [1]",
                 "Re n_r [1]", "Im n_r [1]"],
        shape=(4,),
    )
    lines = []
    for m in scenario.material_table():
        grid.rows.append((m.index, m.r_nr.real, m.r_nr.imag, m.eps.real, m.eps.imag,
                          m.n_r.real, m.n_r.imag))
        lines.append(f"{m.index}: r_NR = {m.r_nr:.3g}   eps = {m.eps:.3g}   n_r = {m.n_r:.3g}")
    _emit(args, grid, lines, out)


COMMANDS = {
    "rate": cmd_rate, "sweep": cmd_sweep, "contour": cmd_contour, "cavity": cmd_cavity,
    "table": cmd_table, "hene": cmd_hene, "materials": cmd_materials,
}


def run(argv=None, out=None, err=None):
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        argv = sys.argv[1:] if argv is None else list(argv)
        args = parser.parse_args(_join_complex_values(argv))
        if args.command is None:
            raise UsageError(parser.format_usage())
        COMMANDS[args.command](args, out)
    except UsageError as exc:
        err.write(str(exc).rstrip() + "\n")
        return EXIT_USAGE
    except DomainError as exc:
        err.write(f"error: {exc}\n")
        return EXIT_DOMAIN
    except OSError as exc:
        err.write(f"error: {exc}\n")
        return EXIT_DOMAIN
    return EXIT_OK


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
