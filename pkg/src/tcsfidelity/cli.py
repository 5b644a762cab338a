"""Command-line interface: fidelity routes, optimization, CF grids, and sweeps.

Results go to stdout as JSON or CSV; warnings and failure messages go to
stderr. Output is deterministic: identical invocations produce byte-identical
streams, and no timestamps or wall-clock values appear anywhere.

Exit codes: 0 success, 1 numerical or convergence failure, 2 usage error.
"""

from __future__ import annotations

import json
import sys
from itertools import combinations

import click
import numpy as np

from . import closed_form, fock_oracle, gaussian_overlap, optimizer, states

SCHEMA_VERSION = 1

#: CLI route names mapped to the JSON route identifiers.
ROUTES = {
    "closed-form": "closed_form",
    "oracle": "oracle",
    "purification-optimized": "purification_optimized",
    "gaussian-overlap": "gaussian_overlap",
}


class ComplexParam(click.ParamType):
    """Complex number in the exact form 're,im' (one comma, no spaces)."""

    name = "re,im"

    def convert(self, value, param, ctx):
        if isinstance(value, complex):
            return value
        text = str(value)
        if " " in text or text.count(",") != 1:
            self.fail(f"{text!r} is not of the form 're,im'", param, ctx)
        re_text, im_text = text.split(",")
        try:
            return complex(float(re_text), float(im_text))
        except ValueError:
            self.fail(f"{text!r} is not of the form 're,im'", param, ctx)


class RangeParam(click.ParamType):
    """Evenly spaced grid in the form 'start:stop:count'."""

    name = "start:stop:count"

    def convert(self, value, param, ctx):
        if isinstance(value, list):
            return value
        parts = str(value).split(":")
        if len(parts) != 3:
            self.fail(f"{value!r} is not of the form 'start:stop:count'", param, ctx)
        try:
            start, stop, count = float(parts[0]), float(parts[1]), int(parts[2])
        except ValueError:
            self.fail(f"{value!r} is not of the form 'start:stop:count'", param, ctx)
        if count < 1:
            self.fail("grid count must be >= 1", param, ctx)
        if count == 1 and start != stop:
            self.fail("a single-point grid needs start == stop", param, ctx)
        return [float(x) for x in np.linspace(start, stop, count)]


class RealListParam(click.ParamType):
    """Comma-separated reals 'a,b,c' or a range 'start:stop:count'."""

    name = "list|range"

    def convert(self, value, param, ctx):
        if isinstance(value, list):
            return value
        text = str(value)
        if ":" in text:
            return RangeParam().convert(text, param, ctx)
        try:
            return [float(piece) for piece in text.split(",")]
        except ValueError:
            self.fail(f"{text!r} is not a comma-separated list of reals", param, ctx)


class ComplexListParam(click.ParamType):
    """Semicolon-separated complex values 're,im;re,im;...'."""

    name = "re,im;..."

    def convert(self, value, param, ctx):
        if isinstance(value, list):
            return value
        return [
            ComplexParam().convert(piece, param, ctx)
            for piece in str(value).split(";")
        ]


COMPLEX = ComplexParam()
RANGE = RangeParam()
REAL_LIST = RealListParam()
COMPLEX_LIST = ComplexListParam()


def format_complex(z: complex) -> str:
    """Shortest-representation 're,im' text; round-trips losslessly."""
    return f"{z.real!r},{z.imag!r}"


def _emit_json(payload: dict) -> None:
    click.echo(json.dumps(payload, indent=2))


def _fail_numerical(payload: dict, message: str) -> None:
    _emit_json(payload)
    click.echo(f"error: {message}", err=True)
    sys.exit(1)


def _resolve_occupancy(n: float | None, ratio: float | None, label: str) -> float:
    if n is not None and ratio is not None:
        click.echo(
            f"warning: both --{label} and its --temp-ratio flag given; using --{label}",
            err=True,
        )
        return n
    if ratio is not None:
        try:
            return states.mean_occupancy_from_temperature(ratio=ratio)
        except ValueError as exc:
            raise click.UsageError(str(exc)) from exc
    return n if n is not None else 0.0


def _build_state(n: float, alpha: complex) -> states.DisplacedThermalState:
    try:
        return states.DisplacedThermalState(states.ThermalParams(n), alpha)
    except ValueError as exc:
        raise click.UsageError(str(exc)) from exc


def _report(
    route_key: str,
    fidelity: float,
    *,
    beta_star: complex | None = None,
    cutoff: int | None = None,
    diagnostics: dict | None = None,
) -> dict:
    # Round-off may overshoot 1 by ulps; anything further is a bug.
    if 1.0 < fidelity <= 1.0 + 1e-9:
        fidelity = 1.0
    if not 0.0 < fidelity <= 1.0:
        raise click.ClickException(
            f"internal error: route {route_key} produced fidelity {fidelity!r}"
        )
    report = {
        "route": route_key,
        "fidelity": fidelity,
        "bures_distance": closed_form.bures_distance(fidelity),
    }
    if beta_star is not None:
        report["beta_star"] = format_complex(beta_star)
    if cutoff is not None:
        report["cutoff"] = cutoff
    report["diagnostics"] = diagnostics or {}
    return report


def _route_report(
    route: str,
    state1: states.DisplacedThermalState,
    state2: states.DisplacedThermalState,
    cutoff: int,
    max_iters: int,
) -> dict:
    try:
        return _compute_route(route, state1, state2, cutoff, max_iters)
    except ValueError as exc:
        # domain failures from the library (occupancy cap, underflow)
        raise click.UsageError(str(exc)) from exc


def _compute_route(
    route: str,
    state1: states.DisplacedThermalState,
    state2: states.DisplacedThermalState,
    cutoff: int,
    max_iters: int,
) -> dict:
    if route == "closed-form":
        value = closed_form.tcs_fidelity(state1, state2).value
        return _report("closed_form", value)
    if route == "oracle":
        rho1 = fock_oracle.displaced_thermal_matrix(state1, cutoff)
        rho2 = fock_oracle.displaced_thermal_matrix(state2, cutoff)
        value = fock_oracle.uhlmann_fidelity(rho1, rho2)
        diagnostics = {
            "truncation_tail_1": state1.s**cutoff,
            "truncation_tail_2": state2.s**cutoff,
        }
        return _report("oracle", value, cutoff=cutoff, diagnostics=diagnostics)
    if route == "purification-optimized":
        config = optimizer.OptimizerConfig(max_iters=max_iters)
        result = optimizer.maximize_overlap(state1, state2, config)
        diagnostics = {
            "iterations": result.iterations,
            "gradient_norm": result.gradient_norm,
        }
        if not result.converged:
            _fail_numerical(
                {
                    "schema": SCHEMA_VERSION,
                    "route": "purification_optimized",
                    "converged": False,
                    "diagnostics": diagnostics,
                },
                "optimizer did not converge",
            )
        return _report(
            "purification_optimized",
            result.value,
            beta_star=result.beta_star,
            diagnostics=diagnostics,
        )
    if route == "gaussian-overlap":
        beta = closed_form.optimal_beta(state1, state2)
        reference = states.PurificationSpec(state1.thermal, state1.displacement, 0j)
        free = states.PurificationSpec(state2.thermal, state2.displacement, beta)
        overlap = gaussian_overlap.pure_overlap(
            states.purification_gaussian_form(reference),
            states.purification_gaussian_form(free),
        )
        return _report(
            "gaussian_overlap",
            overlap.value,
            beta_star=beta,
            diagnostics={"log_value": overlap.log_value},
        )
    raise click.UsageError(f"unknown route {route!r}")


def _state_options(command):
    decorators = [
        click.option("--n1", type=float, default=None, help="Mean occupancy of state 1."),
        click.option("--n2", type=float, default=None, help="Mean occupancy of state 2."),
        click.option(
            "--temp-ratio1",
            type=float,
            default=None,
            help="hbar*w/(k_B*T) for state 1; --n1 wins if both are given.",
        ),
        click.option(
            "--temp-ratio2",
            type=float,
            default=None,
            help="hbar*w/(k_B*T) for state 2; --n2 wins if both are given.",
        ),
        click.option(
            "--alpha1", type=COMPLEX, default="0,0", help="Displacement of state 1."
        ),
        click.option(
            "--alpha2", type=COMPLEX, default="0,0", help="Displacement of state 2."
        ),
    ]
    for decorator in reversed(decorators):
        command = decorator(command)
    return command


@click.group()
def main() -> None:
    """Fidelity between displaced thermal states, with cross-validating routes."""


@main.command()
@_state_options
@click.option(
    "--route",
    type=click.Choice(tuple(ROUTES)),
    default="closed-form",
    help="Computation route.",
)
@click.option("--all-routes", is_flag=True, help="Run every route and compare.")
@click.option(
    "--cutoff",
    type=int,
    default=fock_oracle.DEFAULT_CUTOFF,
    show_default=True,
    help="Fock truncation for the oracle route.",
)
@click.option(
    "--tol",
    type=float,
    default=None,
    help="With --all-routes: exit 1 if the max pairwise discrepancy exceeds this.",
)
@click.option("--max-iters", type=int, default=200, show_default=True)
@click.option("--json/--csv", "emit_json", default=True, help="Output format.")
def fidelity(
    n1, n2, temp_ratio1, temp_ratio2, alpha1, alpha2,
    route, all_routes, cutoff, tol, max_iters, emit_json,
):
    """Fidelity and Bures distance between two displaced thermal states."""
    state1 = _build_state(_resolve_occupancy(n1, temp_ratio1, "n1"), alpha1)
    state2 = _build_state(_resolve_occupancy(n2, temp_ratio2, "n2"), alpha2)
    if all_routes:
        reports = [
            _route_report(name, state1, state2, cutoff, max_iters) for name in ROUTES
        ]
        discrepancy = max(
            abs(a["fidelity"] - b["fidelity"]) for a, b in combinations(reports, 2)
        )
        payload = {
            "schema": SCHEMA_VERSION,
            "reports": reports,
            "max_pairwise_discrepancy": discrepancy,
        }
        if emit_json:
            if tol is not None and discrepancy > tol:
                _fail_numerical(payload, f"route discrepancy {discrepancy!r} > {tol!r}")
            _emit_json(payload)
        else:
            _echo_report_csv(reports)
            if tol is not None and discrepancy > tol:
                click.echo(f"error: route discrepancy {discrepancy!r} > {tol!r}", err=True)
                sys.exit(1)
        return
    report = _route_report(route, state1, state2, cutoff, max_iters)
    if emit_json:
        _emit_json({"schema": SCHEMA_VERSION, **report})
    else:
        _echo_report_csv([report])


def _echo_report_csv(reports: list[dict]) -> None:
    click.echo("route,fidelity,bures_distance,beta_star,cutoff")
    for report in reports:
        beta = report.get("beta_star")
        beta_field = f'"{beta}"' if beta is not None else ""
        cut = report.get("cutoff", "")
        click.echo(
            f"{report['route']},{report['fidelity']!r},"
            f"{report['bures_distance']!r},{beta_field},{cut}"
        )


@main.command()
@_state_options
@click.option("--method", type=click.Choice(optimizer.METHODS), default="newton",
              show_default=True)
@click.option("--beta-tol", type=float, default=1e-8, show_default=True)
@click.option("--value-tol", type=float, default=1e-10, show_default=True)
@click.option("--max-iters", type=int, default=200, show_default=True)
def optimize(
    n1, n2, temp_ratio1, temp_ratio2, alpha1, alpha2,
    method, beta_tol, value_tol, max_iters,
):
    """Maximize the purification overlap numerically and compare with the
    analytic optimum."""
    state1 = _build_state(_resolve_occupancy(n1, temp_ratio1, "n1"), alpha1)
    state2 = _build_state(_resolve_occupancy(n2, temp_ratio2, "n2"), alpha2)
    try:
        config = optimizer.OptimizerConfig(
            method=method, beta_tol=beta_tol, value_tol=value_tol, max_iters=max_iters
        )
    except ValueError as exc:
        raise click.UsageError(str(exc)) from exc
    result = optimizer.maximize_overlap(state1, state2, config)
    analytic = closed_form.optimal_beta(state1, state2)
    diagnostics = {
        "iterations": result.iterations,
        "gradient_norm": result.gradient_norm,
    }
    payload = {
        "schema": SCHEMA_VERSION,
        **_report(
            "purification_optimized",
            result.value,
            beta_star=result.beta_star,
            diagnostics=diagnostics,
        ),
        "beta_analytic": format_complex(analytic),
        "beta_deviation": abs(result.beta_star - analytic),
        "converged": result.converged,
    }
    if not result.converged:
        _fail_numerical(payload, "optimizer did not converge")
    _emit_json(payload)


@main.command(name="cf-grid")
@click.option("--n", type=float, default=None, help="Mean occupancy.")
@click.option("--temp-ratio", type=float, default=None,
              help="hbar*w/(k_B*T); --n wins if both are given.")
@click.option("--alpha", type=COMPLEX, default="0,0", help="Mode-1 displacement.")
@click.option("--beta", type=COMPLEX, default="0,0", help="Mode-2 displacement.")
@click.option("--l1-re", type=RANGE, default="0:0:1", help="Grid over Re lambda1.")
@click.option("--l1-im", type=RANGE, default="0:0:1", help="Grid over Im lambda1.")
@click.option("--l2-re", type=RANGE, default="0:0:1", help="Grid over Re lambda2.")
@click.option("--l2-im", type=RANGE, default="0:0:1", help="Grid over Im lambda2.")
@click.option("--oracle-check", type=int, default=None, metavar="N",
              help="Also evaluate the Fock-oracle CF at cutoff N and report the deviation.")
@click.option("--tol", type=float, default=None,
              help="With --oracle-check: exit 1 if the max deviation exceeds this.")
def cf_grid(n, temp_ratio, alpha, beta, l1_re, l1_im, l2_re, l2_im, oracle_check, tol):
    """Tabulate the purification characteristic function on a lambda grid (CSV)."""
    occupancy = _resolve_occupancy(n, temp_ratio, "n")
    try:
        spec = states.PurificationSpec(states.ThermalParams(occupancy), alpha, beta)
    except ValueError as exc:
        raise click.UsageError(str(exc)) from exc
    vector = None
    cached_d = {}
    if oracle_check is not None:
        if oracle_check < 1:
            raise click.UsageError("--oracle-check cutoff must be >= 1")
        vector = fock_oracle.schmidt_purification(
            spec.mode1_state(), spec.beta, oracle_check
        )

        def oracle_displacement(lam: complex) -> np.ndarray:
            if lam not in cached_d:
                cached_d[lam] = fock_oracle.displacement_matrix(
                    lam, oracle_check
                ).entries
            return cached_d[lam]

    header = "re_l1,im_l1,re_l2,im_l2,re_chi,im_chi"
    if oracle_check is not None:
        header += ",re_chi_oracle,im_chi_oracle"
    click.echo(header)
    worst = 0.0
    for re1 in l1_re:
        for im1 in l1_im:
            for re2 in l2_re:
                for im2 in l2_im:
                    l1 = complex(re1, im1)
                    l2 = complex(re2, im2)
                    chi = states.purification_cf(spec, l1, l2)
                    row = (
                        f"{re1!r},{im1!r},{re2!r},{im2!r},"
                        f"{chi.real!r},{chi.imag!r}"
                    )
                    if oracle_check is not None:
                        amp = vector.amplitudes
                        chi_oracle = complex(
                            np.vdot(
                                amp,
                                oracle_displacement(l1) @ amp @ oracle_displacement(l2).T,
                            )
                        )
                        worst = max(worst, abs(chi - chi_oracle))
                        row += f",{chi_oracle.real!r},{chi_oracle.imag!r}"
                    click.echo(row)
    if oracle_check is not None:
        click.echo(f"# max_abs_deviation={worst!r}")
        if tol is not None and worst > tol:
            click.echo(f"error: CF deviation {worst!r} > {tol!r}", err=True)
            sys.exit(1)


@main.command()
@click.option("--n1", type=REAL_LIST, default="0", help="Occupancies of state 1.")
@click.option("--n2", type=REAL_LIST, default="0", help="Occupancies of state 2.")
@click.option("--dalpha", type=COMPLEX_LIST, default="0,0",
              help="Displacement differences, 're,im;re,im;...'.")
@click.option("--alpha1", type=COMPLEX, default="0,0",
              help="Base displacement of state 1; state 2 sits at alpha1 + dalpha.")
@click.option("--routes", default="all",
              help="Comma-separated routes, or 'all'.")
@click.option("--cutoff", type=int, default=fock_oracle.DEFAULT_CUTOFF,
              show_default=True)
@click.option("--max-iters", type=int, default=200, show_default=True)
@click.option("--json/--csv", "emit_json", default=False, help="Output format.")
def sweep(n1, n2, dalpha, alpha1, routes, cutoff, max_iters, emit_json):
    """Fidelity over a parameter grid, one row per grid point per route (CSV).

    Rows are ordered lexicographically in (n1, n2, Re dalpha, Im dalpha) and
    then by route name; the discrepancy column compares each route against the
    closed form.
    """
    if routes == "all":
        selected = sorted(ROUTES)
    else:
        selected = sorted(set(routes.split(",")))
        unknown = [name for name in selected if name not in ROUTES]
        if unknown:
            raise click.UsageError(
                f"unknown routes {unknown}; valid: {', '.join(ROUTES)}"
            )
    points = sorted(
        (float(v1), float(v2), d.real, d.imag)
        for v1 in n1
        for v2 in n2
        for d in dalpha
    )
    rows = []
    for v1, v2, d_re, d_im in points:
        state1 = _build_state(v1, alpha1)
        state2 = _build_state(v2, alpha1 + complex(d_re, d_im))
        closed_value = closed_form.tcs_fidelity(state1, state2).value
        for name in selected:
            report = _route_report(name, state1, state2, cutoff, max_iters)
            rows.append(
                {
                    "n1": v1,
                    "n2": v2,
                    "re_dalpha": d_re,
                    "im_dalpha": d_im,
                    "route": report["route"],
                    "fidelity": report["fidelity"],
                    "bures_distance": report["bures_distance"],
                    "discrepancy_vs_closed_form": abs(
                        report["fidelity"] - closed_value
                    ),
                }
            )
    if emit_json:
        _emit_json({"schema": SCHEMA_VERSION, "rows": rows})
        return
    click.echo(
        "n1,n2,re_dalpha,im_dalpha,route,fidelity,bures_distance,"
        "discrepancy_vs_closed_form"
    )
    for row in rows:
        click.echo(
            f"{row['n1']!r},{row['n2']!r},{row['re_dalpha']!r},{row['im_dalpha']!r},"
            f"{row['route']},{row['fidelity']!r},{row['bures_distance']!r},"
            f"{row['discrepancy_vs_closed_form']!r}"
        )


@main.command()
@click.option("--fidelity", "fidelity_value", type=float, required=True,
              help="Transition probability in (0, 1].")
def bures(fidelity_value):
    """Bures distance for a given fidelity."""
    try:
        distance = closed_form.bures_distance(fidelity_value)
    except ValueError as exc:
        raise click.UsageError(str(exc)) from exc
    _emit_json(
        {
            "schema": SCHEMA_VERSION,
            "fidelity": fidelity_value,
            "bures_distance": distance,
        }
    )


if __name__ == "__main__":
    main()
