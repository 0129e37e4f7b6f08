"""Command-line frontend: build families, verify ranks, emit JSON reports.

Subcommands: verify, dist, dual, equiv, minors, bound.  Field parameters are
given as --p/--m/--n (with an optional --modulus as comma-separated F_p
coefficients from the constant term upward); elements are written as packed
decimal integers, and eta accepts the shorthands `primitive` and
`primitive^K` resolved against the context's fixed primitive element.

Every option can also be supplied through an environment variable with the
SYMRANK_ prefix (e.g. SYMRANK_VERIFY_WORKERS).  Exit codes: 0 success,
1 verification failure, 2 usage error.
"""

from __future__ import annotations

import csv
import functools
import io
import json
import sys

import click

from . import __version__
from .codes import BudgetError, build_S, build_T
from .dickson import run_minor_trials
from .equiv import (apply_transform, check_condition, codes_equal, derive_eta2,
                    monomial_transform, s_family_distinguisher)
from .gf import FieldCtx, FieldElement, field_create, is_square
from .symforms import delsarte_dual, inner_product
from .verify import bound_size, min_rank, verify_maximum

CONTEXT_SETTINGS = {"auto_envvar_prefix": "SYMRANK",
                    "help_option_names": ["-h", "--help"]}


def _usage_errors(fn):
    @functools.wraps(fn)
    def wrapper(*args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except (ValueError, BudgetError) as exc:
            raise click.UsageError(str(exc))
    return wrapper


def field_options(fn):
    fn = click.option("--modulus", default=None,
                      help="comma-separated F_p coefficients, constant term "
                           "first (monic of degree m*n); default: "
                           "deterministic search")(fn)
    fn = click.option("--n", type=int, required=True)(fn)
    fn = click.option("--m", type=int, default=1, show_default=True)(fn)
    fn = click.option("--p", type=int, required=True)(fn)
    return fn


def output_options(fn):
    fn = click.option("--format", "fmt", type=click.Choice(["json", "csv"]),
                      default="json", show_default=True)(fn)
    fn = click.option("--out", type=click.Path(dir_okay=False), default=None,
                      help="write the report here instead of stdout")(fn)
    return fn


def _make_ctx(p: int, m: int, n: int, modulus: str | None) -> FieldCtx:
    coeffs = None
    if modulus:
        coeffs = [int(c) for c in modulus.split(",")]
    return field_create(p, m, n, coeffs)


def _resolve_eta(ctx: FieldCtx, text: str) -> FieldElement:
    if text is None:
        raise ValueError("family T needs --eta")
    text = text.strip()
    if text == "primitive":
        eta = ctx.primitive
    elif text.startswith("primitive^"):
        eta = ctx.primitive ** int(text.split("^", 1)[1])
    else:
        eta = FieldElement(ctx, int(text))
    return eta


def _build_family(ctx: FieldCtx, family: str, s: int, d: int | None,
                  eta: str | None):
    if family == "T":
        return build_T(ctx, s, _resolve_eta(ctx, eta))
    if d is None:
        raise ValueError("family S needs --d")
    return build_S(ctx, d, s)


def _payload(subcommand: str, **body) -> dict:
    return {"tool": "symrank", "version": __version__,
            "subcommand": subcommand, **body}


def _emit(payload: dict, out: str | None, fmt: str = "json",
          histogram: dict | None = None) -> None:
    if fmt == "csv":
        if histogram is None:
            raise click.UsageError("csv format is only available for "
                                   "histogram output (dist)")
        buf = io.StringIO()
        writer = csv.writer(buf)
        writer.writerow(["rank", "count"])
        for rank in sorted(histogram, key=int):
            writer.writerow([rank, histogram[rank]])
        text = buf.getvalue()
    else:
        text = json.dumps(payload, sort_keys=True, indent=2) + "\n"
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        click.echo(text, nl=False)


@click.group(context_settings=CONTEXT_SETTINGS)
@click.version_option(__version__)
def main():
    """Symmetric rank-distance code toolbox."""


@main.command()
@field_options
@click.option("--family", type=click.Choice(["S", "T"]), required=True)
@click.option("--s", type=int, required=True)
@click.option("--d", type=int, default=None, help="distance parameter (family S)")
@click.option("--eta", default=None,
              help="non-square for family T: packed integer, `primitive`, "
                   "or `primitive^K`")
@click.option("--mode", type=click.Choice(["full", "projective", "sample"]),
              default="full", show_default=True)
@click.option("--count", type=int, default=None, help="sample mode: draws")
@click.option("--seed", type=int, default=None, help="sample mode: RNG seed")
@click.option("--workers", type=int, default=1, show_default=True)
@click.option("--force", is_flag=True,
              help="allow enumerations beyond the default budget")
@click.option("--orbit-reduction", "orbit", is_flag=True,
              help="full mode: skip Frobenius-orbit duplicates (validated "
                   "first; refused for families where orbits change rank)")
@output_options
@_usage_errors
def verify(p, m, n, modulus, family, s, d, eta, mode, count, seed, workers,
           force, orbit, out, fmt):
    """Minimum-rank verification run; exit 1 if the family's claim fails."""
    if fmt == "csv":
        raise click.UsageError("verify reports are JSON only; csv is for dist")
    ctx = _make_ctx(p, m, n, modulus)
    basis = _build_family(ctx, family, s, d, eta)
    if family == "T" and eta is not None:
        resolved = _resolve_eta(ctx, eta)
        click.echo(f"eta resolved to {resolved.val} "
                   f"(non-square: {not is_square(ctx, resolved)})", err=True)
    report = min_rank(basis, mode=mode, count=count, seed=seed,
                      workers=workers, force=force, reduce_orbit=orbit)
    passed, _ = verify_maximum(basis, report=report)
    payload = _payload("verify", verdict="pass" if passed else "fail",
                       declared_distance=basis.spec.declared_distance,
                       bound=str(bound_size(basis.spec.q, n,
                                            basis.spec.declared_distance)),
                       report=report.to_json_dict())
    _emit(payload, out)
    if not passed:
        sys.exit(1)


@main.command()
@field_options
@click.option("--family", type=click.Choice(["S", "T"]), required=True)
@click.option("--s", type=int, required=True)
@click.option("--d", type=int, default=None)
@click.option("--eta", default=None)
@click.option("--family2", type=click.Choice(["S", "T"]), default=None,
              help="compare rank distributions against a second family")
@click.option("--s2", type=int, default=None)
@click.option("--d2", type=int, default=None)
@click.option("--eta2", default=None)
@click.option("--mode", type=click.Choice(["full", "projective", "sample"]),
              default="full", show_default=True)
@click.option("--count", type=int, default=None)
@click.option("--seed", type=int, default=None)
@click.option("--workers", type=int, default=1, show_default=True)
@click.option("--force", is_flag=True)
@output_options
@_usage_errors
def dist(p, m, n, modulus, family, s, d, eta, family2, s2, d2, eta2, mode,
         count, seed, workers, force, out, fmt):
    """Rank distribution; with --family2, the histogram-comparison verdict."""
    ctx = _make_ctx(p, m, n, modulus)
    basis = _build_family(ctx, family, s, d, eta)
    kwargs = dict(mode=mode, count=count, seed=seed, workers=workers,
                  force=force)
    if family2 is None:
        report = min_rank(basis, **kwargs)
        payload = _payload("dist", report=report.to_json_dict())
        _emit(payload, out, fmt,
              histogram=report.to_json_dict()["histogram"])
        return
    if fmt == "csv":
        raise click.UsageError("comparison reports are JSON only")
    basis2 = _build_family(ctx, family2, s2 if s2 is not None else s, d2, eta2)
    result = s_family_distinguisher(basis, basis2, **kwargs)
    _emit(_payload("dist", **result), out)


@main.command()
@field_options
@click.option("--family", type=click.Choice(["S", "T"]), required=True)
@click.option("--s", type=int, required=True)
@click.option("--d", type=int, default=None)
@click.option("--eta", default=None)
@output_options
@_usage_errors
def dual(p, m, n, modulus, family, s, d, eta, out, fmt):
    """Delsarte dual of the family: basis, dimension, orthogonality check."""
    if fmt == "csv":
        raise click.UsageError("dual reports are JSON only")
    ctx = _make_ctx(p, m, n, modulus)
    basis = _build_family(ctx, family, s, d, eta)
    dual_basis = delsarte_dual(ctx, basis.gens)
    checked = all(inner_product(ctx, f, g).val == 0
                  for f in dual_basis for g in basis.gens)
    payload = _payload(
        "dual",
        code=basis.spec.to_json(),
        dim_fp=len(dual_basis),
        expected_dim_fp=ctx.m * n * (n + 1) // 2 - basis.dim,
        orthogonality_verified=checked,
        basis=[f.to_json() for f in dual_basis],
        modulus=list(ctx.modulus),
        primitive=ctx.w,
    )
    _emit(payload, out)
    if not checked or len(dual_basis) != ctx.m * n * (n + 1) // 2 - basis.dim:
        sys.exit(1)


@main.command()
@field_options
@click.option("--branch", type=click.Choice(["a", "b"]), required=True)
@click.option("--s1", type=int, required=True)
@click.option("--s2", type=int, required=True)
@click.option("--eta1", required=True)
@click.option("--eta2", required=True)
@click.option("--apply", "do_apply", is_flag=True,
              help="also perform the transform-and-compare roundtrip")
@output_options
@_usage_errors
def equiv(p, m, n, modulus, branch, s1, s2, eta1, eta2, do_apply, out, fmt):
    """Decide equivalence between two twisted-family members."""
    if fmt == "csv":
        raise click.UsageError("equiv reports are JSON only")
    ctx = _make_ctx(p, m, n, modulus)
    e1, e2 = _resolve_eta(ctx, eta1), _resolve_eta(ctx, eta2)
    witness = check_condition(ctx, branch, s1, s2, e1, e2)
    body = {"branch": branch, "s1": s1, "s2": s2,
            "eta1": str(e1.val), "eta2": str(e2.val),
            "witness": witness.to_json() if witness else None,
            "equivalent": witness is not None,
            "modulus": list(ctx.modulus), "primitive": ctx.w}
    roundtrip_ok = True
    if do_apply and witness is not None:
        basis1 = build_T(ctx, s1, e1)
        basis2 = build_T(ctx, s2, e2)
        t = monomial_transform(ctx, witness.a, (s1 * witness.i) % n, witness.r)
        images = apply_transform(ctx, basis1.gens, t)
        roundtrip_ok = codes_equal(ctx, images, basis2.gens)
        body["roundtrip_codes_equal"] = roundtrip_ok
    _emit(_payload("equiv", **body), out)
    if not roundtrip_ok:
        sys.exit(1)


@main.command()
@click.option("--k", type=click.Choice(["3", "4", "5"]), required=True)
@click.option("--trials", type=int, default=1000, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--p", type=int, default=3, show_default=True)
@click.option("--m", type=int, default=1, show_default=True)
@output_options
@_usage_errors
def minors(k, trials, seed, p, m, out, fmt):
    """Closed-form minor determinants vs. elimination oracle agreement."""
    if fmt == "csv":
        raise click.UsageError("minors reports are JSON only")
    k = int(k)
    ctx = field_create(p, m, 2 * k)
    results = run_minor_trials(ctx, k, trials, seed)
    ok = all(v["agree"] == v["trials"] for v in results.values())
    payload = _payload("minors", k=k, trials=trials, seed=seed,
                       results=results, all_agree=ok,
                       modulus=list(ctx.modulus), primitive=ctx.w)
    _emit(payload, out)
    if not ok:
        sys.exit(1)


@main.command()
@click.option("--q", type=int, required=True)
@click.option("--n", type=int, required=True)
@click.option("--d", type=int, required=True)
@click.option("--out", type=click.Path(dir_okay=False), default=None)
@_usage_errors
def bound(q, n, d, out):
    """Size bound for additive d-codes of symmetric forms on n-space."""
    value = bound_size(q, n, d)
    click.echo(str(value))
    if out:
        _emit(_payload("bound", q=q, n=n, d=d, bound=str(value)), out)


if __name__ == "__main__":
    main()
