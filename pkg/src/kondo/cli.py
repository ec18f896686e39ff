"""Command-line front end.

Subcommands: spectrum, condensate, running-coupling, evolve, excitations,
selftest.  Every run resolves its full configuration up front; CSV output
starts with one `# config {...}` comment line carrying that JSON, and when
writing to a file a pretty-printed sidecar `<out>.meta.json` is written next
to it.  Floats are printed with 17 significant digits so reruns are
byte-identical.

Exit codes: 0 success, 1 numerical/domain failure (message on stderr),
2 usage error (argparse).

The coupling is given either as --g MOD[:PHASE_DEG] or as --j J; with --j the
modulus of g is recovered by inverting the finite-band coupling sum.  Grids
come from --lambda/--slope or from a key=value file via --energies (see
kondo.grid.read_grid_config for the keys); the two styles are mutually
exclusive.
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import __version__
from ._backend import KERNEL_BACKEND
from .condensate import condensate_profile, occupations, psi_residue
from .dynamics import nonlinear_evolve, quasiparticle_excitations
from .errors import KondoError
from .grid import build_linear_grid, read_grid_config
from .oracle import run_selftest
from .renorm import af_ratio, j_inverse_finite, j_inverse_integral, solve_coupling
from .spectrum import build_spectrum, find_roots


def _fmt(v):
    if isinstance(v, (bool, np.bool_)):
        return "1" if v else "0"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return format(float(v), ".17g")
    return str(v)


def _emit(cfg: dict, columns, rows, fmt: str, out: str | None):
    cfg_json = json.dumps(cfg, sort_keys=True, separators=(",", ":"))
    if fmt == "csv":
        lines = ["# config " + cfg_json, ",".join(columns)]
        lines.extend(",".join(_fmt(v) for v in row) for row in rows)
        text = "\n".join(lines) + "\n"
    else:
        doc = {"config": cfg, "columns": list(columns),
               "rows": [[(v if isinstance(v, str) else float(v)) for v in row]
                        for row in rows]}
        text = json.dumps(doc, sort_keys=True, indent=1) + "\n"
    if out is None:
        sys.stdout.write(text)
    else:
        with open(out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
        with open(out + ".meta.json", "w", encoding="utf-8", newline="\n") as fh:
            fh.write(json.dumps(cfg, sort_keys=True, indent=2) + "\n")


def _parse_g(text: str) -> complex:
    mod, _, phase = text.partition(":")
    try:
        m = float(mod)
        deg = float(phase) if phase else 0.0
    except ValueError:
        raise KondoError(f"could not parse coupling {text!r} "
                         f"(expected MOD or MOD:PHASE_DEG)") from None
    if m < 0:
        raise KondoError(f"coupling modulus must be >= 0, got {m}")
    return m * complex(np.cos(np.deg2rad(deg)), np.sin(np.deg2rad(deg)))


def _add_grid_args(p, required=True, continuum=False):
    p.add_argument("--lambda", dest="lam", type=int, metavar="N",
                   help="band cutoff (levels per branch)")
    if continuum:
        p.add_argument("--lambda-cont", action="store_true",
                       help="work on the infinite linear band instead")
    p.add_argument("--slope", type=float, default=1.0, metavar="C",
                   help="dispersion slope (default 1.0)")
    p.add_argument("--energies", metavar="PATH",
                   help="key=value grid file (mutually exclusive with "
                        "--lambda/--lambda-cont)")


def _add_coupling_args(p, allow_j=True):
    p.add_argument("--g", metavar="MOD[:PHASE]",
                   help="coupling modulus, optional phase in degrees")
    if allow_j:
        p.add_argument("--j", type=float, metavar="J",
                       help="bare coupling; |g| recovered by inverse solve")


def _add_output_args(p):
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--out", metavar="PATH", help="write here instead of stdout")


def _resolve_grid(args, parser, continuum=False):
    if args.energies is not None:
        if args.lam is not None or (continuum and args.lambda_cont):
            parser.error("--energies conflicts with --lambda/--lambda-cont")
        return read_grid_config(args.energies), False
    if continuum and args.lambda_cont:
        if args.lam is not None:
            parser.error("choose one of --lambda and --lambda-cont")
        return None, True
    if args.lam is None:
        parser.error("need --lambda N (or --energies PATH)")
    return build_linear_grid(args.lam, args.slope), False


def _resolve_coupling(args, parser, grid):
    """Returns (g, J) with both sides of the relation filled in."""
    has_j = getattr(args, "j", None) is not None
    if (args.g is None) == (not has_j):
        parser.error("give exactly one of --g and --j")
    if args.g is not None:
        g = _parse_g(args.g)
        J = 1.0 / j_inverse_finite(grid, g) if (grid is not None and abs(g) > 0) \
            else None
        return g, J
    if grid is None:
        parser.error("--j needs a finite grid to invert on")
    mod = solve_coupling(args.j, grid)
    return complex(mod), args.j


def _config_dict(args, command, **extra):
    cfg = {"command": command, "version": __version__,
           "kernel_backend": KERNEL_BACKEND}
    cfg.update(extra)
    return cfg


# -- subcommands -------------------------------------------------------------

def _cmd_spectrum(args, parser):
    grid, _ = _resolve_grid(args, parser)
    g, J = _resolve_coupling(args, parser, grid)
    spec = build_spectrum(grid, g)
    cfg = _config_dict(args, "spectrum", lam=grid.lam, slope=grid.c,
                       custom_grid=not grid.linear, g_abs=abs(g),
                       g_phase_deg=float(np.rad2deg(np.angle(g))),
                       j=J)
    rows = [(a, spec.roots[a], spec.xprime[a], spec.impurity_weight[a])
            for a in range(spec.dim)]
    _emit(cfg, ("alpha", "nu", "xprime", "impurity_weight"), rows,
          args.format, args.out)
    return 0


def _cmd_condensate(args, parser):
    grid, cont = _resolve_grid(args, parser, continuum=True)
    if cont:
        if args.g is None:
            parser.error("the continuum route needs --g")
        g = _parse_g(args.g)
        prof = condensate_profile("continuum", g, args.xi, kmax=args.kmax,
                                  c=args.slope)
        J = None
    else:
        g, J = _resolve_coupling(args, parser, grid)
        prof = condensate_profile(grid, g, args.xi, kmax=args.kmax)
    cfg = _config_dict(args, "condensate", continuum=cont,
                       lam=None if cont else grid.lam,
                       slope=args.slope if cont else grid.c,
                       g_abs=abs(prof.g),
                       g_phase_deg=float(np.rad2deg(np.angle(prof.g))),
                       j=J, xi=args.xi, kmax=args.kmax)
    even, odd = prof.even(), prof.odd()
    rows = [(int(prof.k[i]), prof.omega[i], prof.psi[i].real, prof.psi[i].imag,
             even[i].real, odd[i].real)
            for i in range(prof.k.size)]
    _emit(cfg, ("k", "omega_k", "re_psi", "im_psi", "even_part", "odd_part"),
          rows, args.format, args.out)
    return 0


def _cmd_running_coupling(args, parser):
    if args.lambdas:
        try:
            lams = [int(tok) for tok in args.lambdas.split(",") if tok.strip()]
        except ValueError:
            parser.error(f"bad --lambdas list {args.lambdas!r}")
    elif args.lam is not None:
        lams = [args.lam]
    else:
        parser.error("need --lambda N or --lambdas N1,N2,...")
    if args.g is None:
        parser.error("running-coupling needs --g (J is the output)")
    g = _parse_g(args.g)
    cfg = _config_dict(args, "running-coupling", lambdas=lams, slope=args.slope,
                       g_abs=abs(g), g_phase_deg=float(np.rad2deg(np.angle(g))))
    rows = []
    for lam in lams:
        jinv = j_inverse_integral(lam, g, c=args.slope)
        rows.append((lam, abs(g), jinv, 1.0 / jinv,
                     af_ratio(lam, g, c=args.slope)))
    _emit(cfg, ("lambda", "g_abs", "j_inverse", "j", "af_ratio"), rows,
          args.format, args.out)
    return 0


def _cmd_evolve(args, parser):
    grid, _ = _resolve_grid(args, parser)
    g, J = _resolve_coupling(args, parser, grid)
    if J is None:
        parser.error("evolve needs a nonzero coupling (g or J)")
    spec = build_spectrum(grid, g)
    cond = psi_residue(spec, occupations(spec, args.xi))
    phi = cond.matrix()
    if args.perturb:
        rng = np.random.default_rng(args.seed)
        a = rng.standard_normal((grid.dim, grid.dim)) \
            + 1j * rng.standard_normal((grid.dim, grid.dim))
        herm = 0.5 * (a + a.conj().T)
        phi = phi + args.perturb * herm / np.abs(herm).max()
    traj = nonlinear_evolve(phi, grid, J, args.t_final, args.dt,
                            stride=args.stride)
    cfg = _config_dict(args, "evolve", lam=grid.lam, slope=grid.c,
                       custom_grid=not grid.linear, g_abs=abs(g),
                       g_phase_deg=float(np.rad2deg(np.angle(g))), j=J,
                       xi=args.xi, dt=args.dt, t_final=args.t_final,
                       stride=args.stride, perturb=args.perturb,
                       seed=args.seed)
    rows = [(traj.times[i], traj.energy[i], traj.phi_dd[i],
             traj.hermiticity_defect[i], traj.spectral_drift[i])
            for i in range(traj.times.size)]
    _emit(cfg, ("t", "energy", "phi_dd", "hermiticity_defect",
                "spectral_drift"), rows, args.format, args.out)
    return 0


def _cmd_excitations(args, parser):
    grid, _ = _resolve_grid(args, parser)
    g, J = _resolve_coupling(args, parser, grid)
    spec = find_roots(grid, g)
    exc = quasiparticle_excitations(spec, args.xi, args.n_spins, args.top)
    cfg = _config_dict(args, "excitations", lam=grid.lam, slope=grid.c,
                       custom_grid=not grid.linear, g_abs=abs(g),
                       g_phase_deg=float(np.rad2deg(np.angle(g))), j=J,
                       xi=args.xi, n_spins=args.n_spins, top=args.top)
    z = spec.zero_index

    def tag(indices):
        # root index relative to the zero mode: 0 is the zero mode itself
        return ";".join(str(i - z) for i in indices)

    rows = [(r + 1, e.energy, len(e.particles), tag(e.particles), tag(e.holes))
            for r, e in enumerate(exc.excitations)]
    _emit(cfg, ("rank", "energy", "n_pairs", "particles", "holes"), rows,
          args.format, args.out)
    return 0


def _cmd_selftest(args, parser):
    rows = run_selftest()
    width = max(len(r.name) for r in rows)
    failed = 0
    for r in rows:
        status = "ok" if r.passed else "FAIL"
        if not r.passed:
            failed += 1
        print(f"{r.name:<{width}}  max_err={r.max_err:9.3e}  "
              f"tol={r.tol:7.1e}  {status}")
    print(f"{len(rows) - failed}/{len(rows)} checks passed")
    return 0 if failed == 0 else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="kondo",
        description="Desk-scale Kondo impurity: spectra, condensate, "
                    "running coupling, flows")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("spectrum", help="secular roots and impurity weights")
    _add_grid_args(p)
    _add_coupling_args(p)
    _add_output_args(p)

    p = sub.add_parser("condensate", help="ground-state impurity column")
    _add_grid_args(p, continuum=True)
    _add_coupling_args(p)
    p.add_argument("--xi", type=float, default=0.0,
                   help="zero-mode filling offset in (-1/2, 1/2]")
    p.add_argument("--kmax", type=int, default=None, metavar="K",
                   help="emit levels |k| <= K")
    _add_output_args(p)

    p = sub.add_parser("running-coupling", help="J and af ratio vs cutoff")
    p.add_argument("--lambda", dest="lam", type=int, metavar="N")
    p.add_argument("--lambdas", metavar="N1,N2,...",
                   help="comma-separated cutoff sweep")
    p.add_argument("--slope", type=float, default=1.0, metavar="C")
    _add_coupling_args(p, allow_j=False)
    _add_output_args(p)

    p = sub.add_parser("evolve", help="nonlinear matrix flow with monitors")
    _add_grid_args(p)
    _add_coupling_args(p)
    p.add_argument("--xi", type=float, default=0.0)
    p.add_argument("--dt", type=float, default=1e-3)
    p.add_argument("--t-final", type=float, default=1.0)
    p.add_argument("--stride", type=int, default=100,
                   help="record every this many steps")
    p.add_argument("--perturb", type=float, default=0.0, metavar="EPS",
                   help="add a random Hermitian kick of this size")
    p.add_argument("--seed", type=int, default=0)
    _add_output_args(p)

    p = sub.add_parser("excitations", help="lowest quasiparticle energies")
    _add_grid_args(p)
    _add_coupling_args(p)
    p.add_argument("--xi", type=float, default=0.0)
    p.add_argument("--n-spins", type=int, default=2, metavar="N")
    p.add_argument("--top", type=int, default=10, metavar="M")
    _add_output_args(p)

    p = sub.add_parser("selftest",
                       help="secular route vs dense diagonalisation sweep")

    return parser


_HANDLERS = {
    "spectrum": _cmd_spectrum,
    "condensate": _cmd_condensate,
    "running-coupling": _cmd_running_coupling,
    "evolve": _cmd_evolve,
    "excitations": _cmd_excitations,
    "selftest": _cmd_selftest,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return _HANDLERS[args.command](args, parser)
    except KondoError as exc:
        print(f"error: {args.command}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
