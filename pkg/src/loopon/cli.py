"""Command-line interface: ``loopon sample``, ``loopon exact`` and ``loopon render``.

Exit codes: 0 success, 2 usage error, 3 enumeration capacity exceeded,
4 a requested check failed.
"""

from __future__ import annotations

import math
import re
import sys
from fractions import Fraction
from pathlib import Path
from typing import Optional

import click

from .circuits import Circuit, domain_of_circuit
from .lattice import hexes_of_vertices
from .loopcfg import (
    INFINITY,
    BoundaryCondition,
    Domain,
    LoopConfig,
    ModelParams,
    NotADomain,
    TooLarge,
    flower_domain,
    rect_domain,
    single_hexagon_domain,
)

EXIT_USAGE = 2
EXIT_CAPACITY = 3
EXIT_CHECK = 4


def _number(text: str):
    """Parse a parameter, keeping it rational when written as an integer, decimal or fraction."""
    t = text.strip().lower()
    if t in ("inf", "infinity"):
        return INFINITY
    try:
        q = Fraction(t)
    except ValueError:
        raise click.BadParameter(f"not a number: {text!r}")
    return int(q) if q.denominator == 1 else q


def _params(n: str, x: str) -> ModelParams:
    try:
        return ModelParams(_number(n), _number(x))
    except ValueError as err:
        raise click.UsageError(str(err))


def _float_params(p: ModelParams) -> ModelParams:
    return ModelParams(float(p.n), p.x if p.infinite else float(p.x))


_RECT = re.compile(r"^(\d+)x(\d+)-type([012])$")
_AB = re.compile(r"^a=(\d+),b=(\d+)$")


def _domain(domain_file: Optional[str], rect: Optional[str], shape: Optional[str]) -> Domain:
    given = [v for v in (domain_file, rect, shape) if v]
    if len(given) != 1:
        raise click.UsageError("give exactly one of --domain, --rect or --shape")
    try:
        if domain_file:
            return domain_of_circuit(Circuit.from_text(Path(domain_file).read_text()))
        if shape:
            return {"h1": single_hexagon_domain, "h7": flower_domain}[shape]()
        m = _RECT.match(rect)
        if m:
            return rect_domain(int(m.group(1)), int(m.group(2)), int(m.group(3)))
        m = _AB.match(rect)
        if m:
            from .exact import rectangle_domain
            return rectangle_domain(int(m.group(1)), int(m.group(2)))
    except (ValueError, NotADomain, OSError) as err:
        raise click.UsageError(f"bad domain: {err}")
    raise click.UsageError(f"--rect must look like 60x45-type0 or a=2,b=3, got {rect!r}")


def _bc(text: str) -> BoundaryCondition:
    if text == "vacant":
        return BoundaryCondition.vacant()
    m = re.match(r"^gnd([012])$", text)
    if m:
        return BoundaryCondition.ground(int(m.group(1)))
    if text.startswith("file:"):
        try:
            return BoundaryCondition.explicit(LoopConfig.from_text(Path(text[5:]).read_text()))
        except (OSError, ValueError) as err:
            raise click.UsageError(f"bad boundary file: {err}")
    raise click.UsageError(f"unknown boundary condition {text!r}")


domain_options = [
    click.option("--domain", "domain_file", type=click.Path(exists=True, dir_okay=False),
                 help="Domain file with a 'circuit:' line."),
    click.option("--rect", help="Parallelogram WxH-typec, or a=A,b=B for the packing rectangle."),
    click.option("--shape", type=click.Choice(["h1", "h7"]), help="Built-in small domain."),
]


def with_domain(f):
    for opt in reversed(domain_options):
        f = opt(f)
    return f


@click.group()
def main():
    """Loop O(n) model on the hexagonal lattice."""


@main.command()
@click.option("--n", "n_text", required=True, help="Loop weight n > 0.")
@click.option("--x", "x_text", required=True, help="Edge weight x > 0 or 'inf'.")
@with_domain
@click.option("--bc", "bc_text", default="vacant", show_default=True,
              help="vacant | gnd0 | gnd1 | gnd2 | file:PATH")
@click.option("--seed", default=0, show_default=True, type=int)
@click.option("--sweeps", default=100, show_default=True, type=click.IntRange(min=0))
@click.option("--burnin", default=0, show_default=True, type=click.IntRange(min=0))
@click.option("--thin", default=1, show_default=True, type=click.IntRange(min=1))
@click.option("--chains", default=1, show_default=True, type=click.IntRange(min=1))
@click.option("--out", "out_dir", required=True, type=click.Path(file_okay=False))
@click.option("--svg/--no-svg", default=False, help="Also write an SVG of the final state.")
@click.option("--allow-noergodic", is_flag=True, help="Permit x = inf dynamics.")
def sample(n_text, x_text, domain_file, rect, shape, bc_text, seed, sweeps, burnin, thin,
           chains, out_dir, svg, allow_noergodic):
    """Run Glauber dynamics and write a trace, the final snapshot and optionally an SVG."""
    from .mcmc import ChainState, NonErgodicError, RunConfig, chain_seeds, run
    from .render import RenderStyle, render_svg

    p = _float_params(_params(n_text, x_text))
    dom = _domain(domain_file, rect, shape)
    bc = _bc(bc_text)
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    seeds = [seed] if chains == 1 else chain_seeds(seed, chains)
    header = None
    rows = []
    for k, s_seed in enumerate(seeds):
        try:
            state = ChainState(dom, bc, p, seed=s_seed, allow_nonergodic=allow_noergodic)
        except NonErgodicError as err:
            raise click.UsageError(f"{err} (use --allow-noergodic)")
        trace = run(state, RunConfig(sweeps=sweeps, burn_in=burnin, thin=thin, seed=s_seed))
        lines = trace.to_tsv().splitlines()
        header = "seed\t" + lines[0]
        rows.extend(f"{s_seed}\t{line}" for line in lines[1:])
        suffix = "" if chains == 1 else f"_{k}"
        (out / f"snapshot{suffix}.txt").write_text(state.full_config().to_text())
        if svg:
            window = hexes_of_vertices(dom.vertices)
            (out / f"snapshot{suffix}.svg").write_text(
                render_svg(state.full_config(), window, RenderStyle(shade=(True, True, True))))
    (out / "trace.tsv").write_text("\n".join([header, *rows]) + "\n")
    (out / "domain.txt").write_text(dom.circuit.to_text())
    click.echo(f"wrote {len(rows)} trace rows for {len(seeds)} chain(s) to {out}")


CHECKS = ["peierls", "vbad", "repair", "hardhex", "height", "packing"]


@main.command()
@click.option("--n", "n_text", default="1", show_default=True)
@click.option("--x", "x_text", default="1", show_default=True)
@with_domain
@click.option("--bc", "bc_text", default="vacant", show_default=True)
@click.option("--cap", default=24, show_default=True, type=int, help="Maximum interior faces.")
@click.option("--check", "checks", multiple=True, type=click.Choice(CHECKS))
@click.option("--lam", default=1.0, show_default=True, type=float, help="Fugacity for hardhex.")
@click.option("--out", "out_file", type=click.Path(dir_okay=False),
              help="Write the per-configuration measure TSV here.")
def exact(n_text, x_text, domain_file, rect, shape, bc_text, cap, checks, lam, out_file):
    """Enumerate a small domain exactly and run the requested checks."""
    from . import exact as ex

    p = _params(n_text, x_text)
    dom = _domain(domain_file, rect, shape)
    bc = _bc(bc_text)
    failed = []
    try:
        idx = ex.DomainIndex(dom, bc, cap)
        logZ = ex.partition_function(dom, bc, _float_params(p), cap)
        click.echo(f"faces\t{idx.nfaces}")
        click.echo(f"configs\t{1 << idx.nfaces}")
        if not p.infinite and isinstance(p.n, (int, Fraction)) and isinstance(p.x, (int, Fraction)):
            click.echo(f"Z\t{ex.partition_function_exact(dom, bc, p, cap)}")
        click.echo(f"logZ\t{logZ:.12g}")
        click.echo(f"Zfloat\t{math.exp(logZ):.12g}")
        if out_file:
            _write_measure(Path(out_file), idx, _float_params(p))
        for check in checks:
            ok, msg = _run_check(check, dom, bc, p, lam, cap)
            click.echo(f"{check}\t{'ok' if ok else 'FAILED'}\t{msg}")
            if not ok:
                failed.append(check)
    except TooLarge as err:
        click.echo(f"error: {err}", err=True)
        sys.exit(EXIT_CAPACITY)
    except ex.InconsistentBoundary as err:
        raise click.UsageError(str(err))
    if failed:
        sys.exit(EXIT_CHECK)


def _write_measure(path: Path, idx, p: ModelParams) -> None:
    from . import exact as ex
    import numpy as np
    probs = ex._weights(idx, p)
    o, L = idx.stats
    lines = ["config-id\to\tL\tlog-weight\tprobability"]
    order = np.argsort(idx.codes)
    for i in order:
        if p.infinite:
            lw = L[i] * math.log(p.n) if probs[i] > 0 else float("-inf")
        else:
            lw = o[i] * math.log(p.x) + L[i] * math.log(p.n)
        lines.append(f"{idx.codes[i]}\t{o[i]}\t{L[i]}\t{lw:.12g}\t{probs[i]:.12g}")
    path.write_text("\n".join(lines) + "\n")


def _run_check(check, dom, bc, p, lam, cap) -> tuple[bool, str]:
    from . import exact as ex
    from .structure import repair_sweep

    fp = _float_params(p)
    if check == "peierls":
        r = ex.peierls_check(dom, bc, fp, cap=min(cap, 16))
        return r.violations == 0, f"checked={r.checked} violations={r.violations} max_ratio={r.max_ratio:.6g}"
    if check in ("repair", "vbad"):
        r = repair_sweep(dom, cap=min(cap, 16))
        names = [k for k in r.violations if check == "repair" or k == "vbad"]
        bad = sum(r.violations[k] for k in names)
        verdict = "all identities hold" if bad == 0 else f"{bad} violations"
        return bad == 0, f"configs={r.configs} {verdict}"
    if check == "hardhex":
        tv = [ex.hard_hexagon_compare(dom, lam, float(n), cap) for n in (fp.n, 100.0 * fp.n)]
        return tv[1] <= tv[0], f"lam={lam} tv(n={fp.n:g})={tv[0]:.6g} tv(n={100 * fp.n:g})={tv[1]:.6g}"
    if check == "height":
        if p.n not in (1, 2) or p.infinite:
            raise click.UsageError("height check needs n in {1, 2} and finite x")
        ok = ex.height_pushforward_check(dom, int(p.n), p.x, cap=min(cap, 12))
        return ok, "pushforward matches" if ok else "pushforward differs"
    if check == "packing":
        k = len(ex.optimal_configs(dom, cap))
        return k == 1, f"unique={'true' if k == 1 else 'false'} optimal_configs={k}"
    raise click.UsageError(f"unknown check {check}")


@main.command()
@click.option("--config", "config_file", required=True, type=click.Path(exists=True, dir_okay=False))
@with_domain
@click.option("--out", "out_file", required=True, type=click.Path(dir_okay=False))
@click.option("--radius", default=12.0, show_default=True, type=float)
@click.option("--shade", default="", help="Colors whose flowers get shaded, e.g. 012.")
def render(config_file, domain_file, rect, shape, out_file, radius, shade):
    """Render an edge-list configuration as SVG."""
    from .render import RenderStyle, render_svg

    try:
        omega = LoopConfig.from_text(Path(config_file).read_text())
    except ValueError as err:
        raise click.UsageError(f"bad configuration: {err}")
    dom = _domain(domain_file, rect, shape)
    style = RenderStyle(radius=radius, shade=tuple(str(c) in shade for c in range(3)))
    Path(out_file).write_text(render_svg(omega, hexes_of_vertices(dom.vertices), style))


if __name__ == "__main__":
    main()
