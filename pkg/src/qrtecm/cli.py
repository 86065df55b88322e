"""Command-line interface.

stdout carries one line per record (JSON with ``--json``), stderr carries
logging and diagnostics. Exit codes: 0 success, 1 usage or configuration
error, 2 no factor found.
"""

import logging
import sys
from dataclasses import dataclass
from typing import List, Optional, Sequence

import click
from pydantic import BaseModel, ValidationError

from .core.arith import Modulus, NonInvertibleError, parse_int
from .core.curves import FAMILIES, DegenerateParametersError, Family
from .core.ecm import factorize
from .core.metrics_manager import MetricsManager
from .core.scalar import build_chain, exponent
from .models.config import BenchConfig, EcmConfig, PrngConfig, default_seed
from .models.reports import (
    ChainTraceRow,
    ConvertReport,
    FactorReport,
    PrngReport,
    SequenceRow,
    TransportRow,
    TrialRow,
    TwistRow,
)
from .services.bench import bench_report
from .services.birational import WeierstrassCurve, WPoint, lift, pencil_params, transport, twist_check
from .services.sequences import (
    ORDER,
    DegenerateSequenceError,
    EdsSeq,
    SomosKind,
    eds_check,
    eds_extend,
    monobit_fraction,
    prng_stream,
    somos_extend,
    somos_sequence,
    tau_to_u,
)

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_NO_FACTOR = 2


@dataclass
class CliState:
    seed: int
    json: bool


def _emit(state: CliState, row: BaseModel, text: str) -> None:
    click.echo(row.model_dump_json() if state.json else text)


def _integer(ctx, param, value: Optional[str]) -> Optional[int]:
    if value is None:
        return None
    try:
        return parse_int(value)
    except ValueError:
        raise click.BadParameter(f"not an integer: {value!r}") from None


def _integers(ctx, param, value: Optional[str]) -> Optional[List[int]]:
    if value is None:
        return None
    try:
        return [parse_int(v) for v in value.split(",")]
    except ValueError:
        raise click.BadParameter(f"expected comma-separated integers, got {value!r}") from None


def _override_seed(ctx: click.Context, param, value: Optional[int]) -> None:
    if value is not None:
        ctx.obj.seed = value


def _override_json(ctx: click.Context, param, value: bool) -> None:
    if value:
        ctx.obj.json = True


def common_options(f):
    """``--seed`` and ``--json`` are also accepted after the subcommand name."""
    f = click.option("--json", "as_json", is_flag=True, expose_value=False, callback=_override_json)(f)
    return click.option("--seed", type=int, expose_value=False, callback=_override_seed)(f)


def _pair(values: Optional[Sequence[object]]) -> Optional[List[str]]:
    return None if values is None else [str(v) for v in values]


@click.group()
@click.option(
    "--seed",
    type=int,
    default=None,
    help="Root seed for all randomness (default: $QRT_ECM_SEED, else 0).",
)
@click.option("--json", "as_json", is_flag=True, help="Emit JSON lines.")
@click.option("--quiet", is_flag=True, help="Only warnings and errors on stderr.")
@click.option("--verbose", is_flag=True, help="Debug logging on stderr.")
@click.pass_context
def cli(ctx: click.Context, seed: Optional[int], as_json: bool, quiet: bool, verbose: bool):
    """ECM factorisation and experiments with QRT maps."""
    level = logging.DEBUG if verbose else logging.WARNING if quiet else logging.INFO
    logging.basicConfig(
        level=level,
        stream=sys.stderr,
        format="%(levelname)s %(name)s: %(message)s",
        force=True,
    )
    ctx.obj = CliState(seed=default_seed() if seed is None else seed, json=as_json)


@cli.command()
@click.argument("n", callback=_integer)
@click.option("--family", type=click.Choice([f.value for f in Family]), default="lyness")
@click.option("--b1", type=int, default=1000, show_default=True)
@click.option("--trials", type=int, default=20, show_default=True)
@click.option("--pipeline", type=click.Choice(["affine", "projective"]), default="affine")
@click.option("--exponent-mode", type=click.Choice(["product", "single"]), default="product")
@click.option("--threads", type=int, default=1, show_default=True)
@click.option("--fixed-params", callback=_integers, help="Curve parameters as a,b,c.")
@click.option("--s", "s", callback=_integer, help="Use this scalar instead of one derived from B1.")
@click.option("--chain-trace", is_flag=True, help="Print the addition chain before running.")
@click.option("--metrics-file", type=click.Path(dir_okay=False), default=None)
@click.option("--timing", is_flag=True, help="Include elapsed time in the result line.")
@common_options
@click.pass_obj
def factor(
    state: CliState,
    n: int,
    family: str,
    b1: int,
    trials: int,
    pipeline: str,
    exponent_mode: str,
    threads: int,
    fixed_params: Optional[List[int]],
    s: Optional[int],
    chain_trace: bool,
    metrics_file: Optional[str],
    timing: bool,
) -> int:
    """Factor N with stage-1 ECM on random QRT curves."""
    if n < 2:
        raise click.BadParameter(f"N must be >= 2, got {n}", param_hint="N")
    config = EcmConfig(
        family=family,
        b1=b1,
        trials=trials,
        seed=state.seed,
        pipeline=pipeline,
        exponent_mode=exponent_mode,
        threads=threads,
        fixed_params=fixed_params,
        s=s,
    )
    if chain_trace:
        target = config.s if config.s is not None else exponent(config.b1, config.exponent_mode.value)
        chain = build_chain(target, FAMILIES[config.family].base)
        for step, (op, index) in enumerate(zip(chain.ops, chain.replay()[1:])):
            _emit(state, ChainTraceRow(step=step, op=op.value, index=index), f"{step} {op.value} {index}")

    metrics = MetricsManager()
    result = factorize(n, config, metrics)
    for outcome in result.outcomes:
        row = TrialRow.from_outcome(outcome)
        _emit(state, row, f"trial {row.trial} N={row.n}: {row.status} factor={row.factor} step={row.step}")

    report = FactorReport.from_result(result, timing)
    text = " * ".join(f"{p}^{k}" if k > 1 else str(p) for p, k in report.factors)
    if report.unfactored:
        text += f" (unfactored: {', '.join(map(str, report.unfactored))})"
    _emit(state, report, f"{report.n} = {text or '?'}  [{report.status}]")
    if metrics_file:
        metrics.write(metrics_file)
    return EXIT_NO_FACTOR if report.status == "NoFactor" else EXIT_OK


@cli.command()
@click.option("--bits", type=int, default=64, show_default=True)
@click.option("--scalars", type=int, default=100, show_default=True)
@common_options
@click.pass_obj
def bench(state: CliState, bits: int, scalars: int) -> int:
    """Projective Lyness operation counts against the twisted-Edwards cost model."""
    config = BenchConfig(bits=bits, scalars=scalars, seed=state.seed)
    for row in bench_report(config):
        text = (
            f"{row.kind:8} {row.op[:24]:24} D={row.doubles:<5} A={row.adds:<5} "
            f"lyness M={row.lyness.M} B={row.lyness.B}  "
            f"edwards M={row.edwards.M} S={row.edwards.S}  ratio={row.ratio:.3f}"
        )
        _emit(state, row, text)
    return EXIT_OK


@cli.command()
@click.argument("kind", type=click.Choice([k.value for k in SomosKind] + ["eds"]))
@click.option("--coeffs", callback=_integers, default="1,1", show_default=True)
@click.option("--init", "initial", callback=_integers, help="Initial terms (eds: tau2,tau3,tau4).")
@click.option("--count", type=int, default=20, show_default=True)
@click.option("--modulus", callback=_integer, help="Work mod N instead of over the rationals.")
@common_options
@click.pass_obj
def sequence(
    state: CliState,
    kind: str,
    coeffs: List[int],
    initial: Optional[List[int]],
    count: int,
    modulus: Optional[int],
) -> int:
    """Print terms of a Somos or elliptic divisibility sequence."""
    if count < 1:
        raise click.BadParameter("count must be >= 1", param_hint="--count")
    if kind == "eds":
        initial = initial or [1, -1, 1]
        if len(initial) != 3:
            raise click.BadParameter("eds takes tau2,tau3,tau4", param_hint="--init")
        tau2, tau3, tau4 = initial
        seq = eds_extend(EdsSeq(tau2, tau3, tau4), count)
        report = eds_check(seq)
        logger.info("EDS relations checked on %d pairs: %s", report.checked, "ok" if report.ok else "FAILED")
        for i, t in enumerate(seq.terms[:count]):
            _emit(state, SequenceRow(kind=kind, index=i, tau=str(t)), f"{i} {t}")
        return EXIT_OK if report.ok else EXIT_USAGE

    skind = SomosKind(kind)
    if len(coeffs) != 2:
        raise click.BadParameter("expected two coefficients", param_hint="--coeffs")
    if initial is not None and len(initial) < ORDER[skind]:
        raise click.BadParameter(f"{kind} needs {ORDER[skind]} initial terms", param_hint="--init")
    mod = Modulus(modulus) if modulus is not None else None
    seq = somos_sequence(skind, coeffs, initial or [1] * ORDER[skind], mod)
    try:
        somos_extend(seq, max(0, count - len(seq)))
    except NonInvertibleError as e:
        logger.warning("stopped at term %d: divisor shares %d with the modulus", len(seq), e.g)
    for i, t in enumerate(seq.terms):
        try:
            u = str(tau_to_u(seq, i))
        except (IndexError, DegenerateSequenceError, NonInvertibleError):
            u = None
        _emit(state, SequenceRow(kind=kind, index=i, tau=str(t), u=u), f"{i} {t} {u or '-'}")
    return EXIT_OK


@cli.command()
@click.option("--modulus", callback=_integer, required=True)
@click.option("--q", "q", callback=_integer, default="1", show_default=True)
@click.option("--b-table", callback=_integers, default="1", show_default=True)
@click.option("--count", type=int, default=4, show_default=True)
@click.option("--warmup", type=int, default=16, show_default=True)
@common_options
@click.pass_obj
def prng(state: CliState, modulus: int, q: int, b_table: List[int], count: int, warmup: int) -> int:
    """Byte stream from the q-difference Lyness recurrence mod N."""
    config = PrngConfig(
        modulus=modulus, q=q, b_table=b_table, seed=state.seed, count=count, warmup=warmup
    )
    out = prng_stream(config.modulus, config.q, config.b_table, config.seed, config.count, config.warmup)
    blocks = [b.hex() for b in out.blocks]
    report = PrngReport(
        modulus=config.modulus,
        q=config.q,
        b_table=config.b_table,
        seed=config.seed,
        count=config.count,
        reseeds=out.reseeds,
        blocks=blocks,
        monobit=monobit_fraction(out.data),
    )
    _emit(state, report, "\n".join(blocks))
    return EXIT_OK


@cli.command()
@click.option("--A", "A", callback=_integer, required=True)
@click.option("--B", "B", callback=_integer, required=True)
@click.option("--point", callback=_integers, required=True, help="P as x,y.")
@click.option("--modulus", callback=_integer, help="Work mod a prime instead of over the rationals.")
@click.option("--upto", type=int, default=8, show_default=True)
@common_options
@click.pass_obj
def convert(
    state: CliState, A: int, B: int, point: List[int], modulus: Optional[int], upto: int
) -> int:
    """QRT pencil parameters and transported multiples for (E, P)."""
    if len(point) != 2:
        raise click.BadParameter("expected x,y", param_hint="--point")
    mod = Modulus(modulus) if modulus is not None else None
    curve = WeierstrassCurve.over(A, B, mod)
    if not curve.contains(WPoint(lift(point[0], mod), lift(point[1], mod))):
        raise click.BadParameter(f"({point[0]}, {point[1]}) is not on the curve", param_hint="--point")
    params = pencil_params(A, point[0], point[1], mod)
    try:
        tw = twist_check(params)
        twist = TwistRow(
            A=str(tw.curve.A), B=str(tw.curve.B), x=str(tw.point.x), y=str(tw.point.y), on_curve=tw.on_curve
        )
    except DegenerateParametersError as e:
        logger.warning("no twist: %s", e)
        twist = None
    rows = [
        TransportRow(
            n=t.n,
            weierstrass=_pair(t.weierstrass),
            somos4=_pair(t.somos4),
            lyness=_pair(t.lyness),
            somos5=_pair(t.somos5),
        )
        for t in transport(params, upto)
    ]
    report = ConvertReport(
        modulus=modulus,
        params=params.as_dict(),
        degeneracies=list(params.degeneracies),
        twist=twist,
        points=rows,
    )
    lines = [" ".join(f"{k}={v}" for k, v in report.params.items())]
    lines += [f"{r.n}P: W={r.weierstrass} S4={r.somos4} L={r.lyness} S5={r.somos5}" for r in rows]
    _emit(state, report, "\n".join(lines))
    return EXIT_OK


def _describe(e: ValidationError) -> str:
    err = e.errors()[0]
    where = ".".join(str(p) for p in err["loc"])
    return f"{where}: {err['msg']}" if where else err["msg"]


def main(argv: Optional[Sequence[str]] = None) -> int:
    """Run the CLI and return its exit code instead of exiting."""
    try:
        rv = cli.main(args=list(argv) if argv is not None else None, prog_name="qrtecm", standalone_mode=False)
    except click.ClickException as e:
        click.echo(f"error: {e.format_message()}", err=True)
        return EXIT_USAGE
    except click.exceptions.Abort:
        click.echo("error: aborted", err=True)
        return EXIT_USAGE
    except ValidationError as e:
        click.echo(f"error: invalid configuration: {_describe(e)}", err=True)
        return EXIT_USAGE
    except (DegenerateParametersError, DegenerateSequenceError, NonInvertibleError) as e:
        click.echo(f"error: {e}", err=True)
        return EXIT_USAGE
    except ValueError as e:
        click.echo(f"error: {e}", err=True)
        return EXIT_USAGE
    return rv if isinstance(rv, int) else EXIT_OK


def run() -> None:
    sys.exit(main())
