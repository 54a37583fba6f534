"""
Command Line Interface
======================

Click front end tying configuration ingestion to the library and the
CSV/JSON emitters.

Commands:
- kappa: kappa on a u-grid (CSV) and its cosine view (JSON)
- jfun: J on an s-grid with truncation order and bound (CSV)
- kernel: kernel grid, slice or diagonal (CSV)
- density: windowed mu_p densities of a point file (JSON)
- trace: averaged trace convergence table (JSON)
- sweep: empirical frame-bound sweep over densities and windows (JSON)
- verify: identity and structure checks (JSON, exit 3 on failure)

Exit codes: 0 success, 1 invalid input, 2 numerical failure,
3 verification failure.
"""

import functools
import json
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional

import click
import numpy as np
from loguru import logger
from pydantic import BaseModel, ConfigDict, ValidationError as PydanticValidationError, field_validator

from varband import __version__
from varband.analysis.density import PointSet, beurling_densities, trace_convergence_report
from varband.analysis.sampling import density_sweep
from varband.analysis.verification import FAULTS, run_verification
from varband.config import settings
from varband.core.grid import GridSpec
from varband.core.piecewise import BandwidthProfile
from varband.core.transfer import connection_table
from varband.errors import ValidationError, VarBandError, VerificationError
from varband.kernel.evaluator import KernelEvaluator
from varband.spectral import QuadratureJ, SeriesJ, SpectralSet, kappa_of, make_j_evaluator
from varband.ui.emitters import format_csv, format_json, write_text


class RunConfig(BaseModel):
    """
    Validated configuration of one command run.

    Attributes:
        command: Subcommand name
        profile: Bandwidth profile
        spectrum: Spectral set
        seed: Seed for randomized parts
        out: Output path, stdout when None
        options: Command-specific options
    """

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    command: str
    profile: BandwidthProfile
    spectrum: SpectralSet
    seed: int
    out: Optional[Path] = None
    options: Dict[str, Any] = {}

    @field_validator("profile", mode="before")
    @classmethod
    def _load_profile(cls, value: Any) -> BandwidthProfile:
        if value is None:
            return BandwidthProfile.constant(1.0)
        if isinstance(value, BandwidthProfile):
            return value
        if isinstance(value, dict):
            return BandwidthProfile.from_dict(value)
        return BandwidthProfile.from_dict(_read_json(str(value), "profile"))

    @field_validator("spectrum", mode="before")
    @classmethod
    def _load_spectrum(cls, value: Any) -> SpectralSet:
        if value is None:
            return SpectralSet.band(settings.default_omega)
        if isinstance(value, SpectralSet):
            return value
        if isinstance(value, dict):
            return SpectralSet.from_dict(value)
        return SpectralSet.from_dict(_read_json(str(value), "spectrum"))

    def describe(self) -> Dict[str, Any]:
        """Plain description used for hashing and report headers."""
        return {
            "command": self.command,
            "profile": self.profile.to_dict(),
            "spectrum": self.spectrum.to_dict(),
            "seed": self.seed,
            "options": self.options,
        }


def _read_json(source: str, field: str) -> Any:
    text = source
    if not source.lstrip().startswith("{"):
        path = Path(source)
        if not path.is_file():
            raise ValidationError(f"file not found: {source}", field=field)
        text = path.read_text(encoding="utf-8")
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        raise ValidationError(f"line {e.lineno} column {e.colno}: {e.msg}", field=field) from e


def load_run_config(command: str, profile: Optional[str], spectrum: Optional[str], seed: Optional[int], out: Optional[str], **options: Any) -> RunConfig:
    """
    Validate all inputs of a run before any computation.

    Raises:
        ValidationError: With the offending field in its message
    """
    try:
        return RunConfig(
            command=command,
            profile=profile,
            spectrum=spectrum,
            seed=settings.default_seed if seed is None else seed,
            out=Path(out) if out else None,
            options=options,
        )
    except PydanticValidationError as e:
        first = e.errors()[0]
        loc = ".".join(str(part) for part in first.get("loc", ()))
        raise ValidationError(first.get("msg", "invalid value"), field=loc or None) from e


def parse_floats(text: Optional[str], field: str) -> List[float]:
    if text is None or not text.strip():
        raise ValidationError("expected a comma-separated list of numbers", field=field)
    try:
        return [float(item) for item in text.split(",") if item.strip()]
    except ValueError as e:
        raise ValidationError(f"cannot parse {text!r}", field=field) from e


def emit(text: str, config: RunConfig) -> None:
    path = write_text(text, config.out)
    if path is None:
        click.echo(text, nl=False)
    else:
        logger.info(f"Wrote {path}")


class VarBandGroup(click.Group):
    """Group that reports option errors of subcommands with exit code 1."""

    def invoke(self, ctx: click.Context) -> Any:
        try:
            return super().invoke(ctx)
        except click.UsageError as e:
            e.exit_code = 1
            raise


def handle_errors(func: Callable) -> Callable:
    """Map library exceptions to exit codes."""

    @functools.wraps(func)
    def wrapper(*args: Any, **kwargs: Any) -> Any:
        try:
            return func(*args, **kwargs)
        except VarBandError as e:
            logger.error(f"{type(e).__name__}: {e}")
            raise click.exceptions.Exit(e.exit_code)
        except np.linalg.LinAlgError as e:
            logger.error(f"Eigen solver failed: {e}")
            raise click.exceptions.Exit(2)

    return wrapper


def common_options(func: Callable) -> Callable:
    func = click.option("--out", type=str, default=None, help="Output file (stdout when omitted).")(func)
    func = click.option("--seed", type=int, default=None, help="Seed for randomized parts.")(func)
    func = click.option("--spectrum", type=str, default=None, help='Spectral set JSON file or inline {"intervals": [[a, b], ...]}.')(func)
    func = click.option("--profile", type=str, default=None, help='Profile JSON file or inline {"knots": [...], "levels": [...]}.')(func)
    return func


@click.group(cls=VarBandGroup)
@click.version_option(__version__, prog_name="varband")
def cli() -> None:
    """Kernels, spectral densities and sampling densities for variable bandwidth."""


@cli.command()
@common_options
@click.option("--grid", "grid", default="0:20:401", show_default=True, help="u grid start:stop:num.")
@click.option("--cosine-out", default=None, help="Where to write the cosine view JSON.")
@handle_errors
def kappa(profile, spectrum, seed, out, grid, cosine_out) -> None:
    """Evaluate kappa on a u-grid and report its cosine view."""
    config = load_run_config("kappa", profile, spectrum, seed, out, grid=grid)
    spec = GridSpec.parse(grid)
    kap = kappa_of(config.profile, connection_table(config.profile))
    u = spec.points()
    emit(format_csv(["u", "kappa"], [u, kap(u)]), config)
    if cosine_out:
        write_text(format_json({"cosine_view": kap.to_dict()}, config.describe()), cosine_out)


@cli.command()
@common_options
@click.option("--grid", "grid", default="-50:50:2001", show_default=True, help="s grid start:stop:num.")
@click.option("--mode", default="auto", show_default=True, help="auto, quadrature, series or elementary.")
@click.option("--eps", type=float, default=None, help="Series truncation target.")
@handle_errors
def jfun(profile, spectrum, seed, out, grid, mode, eps) -> None:
    """Evaluate J(s) with the truncation order and error bound used."""
    config = load_run_config("jfun", profile, spectrum, seed, out, grid=grid, mode=mode, eps=eps)
    s = GridSpec.parse(grid).points()
    kap = kappa_of(config.profile, connection_table(config.profile))
    jev = make_j_evaluator(kap, config.spectrum, config.profile, mode=mode, eps=eps)
    values = jev(s)
    # Quadrature has no a-priori bound; its last column is the panel tolerance.
    last = "bound"
    if isinstance(jev, SeriesJ):
        order, bound = float(jev.order), jev.bound
    elif isinstance(jev, QuadratureJ):
        order, bound, last = -1.0, jev.tol, "tolerance"
    else:
        order, bound = 0.0, 0.0
    columns = [s, np.real(values), np.imag(values), np.full(s.shape, order), np.full(s.shape, bound)]
    emit(format_csv(["s", "re", "im", "order", last], columns), config)


@cli.command()
@common_options
@click.option("--mode", "view", default="slice", show_default=True, help="grid, slice or diag.")
@click.option("--grid", "grid", default="-10:10:201", show_default=True, help="x (and y) grid start:stop:num.")
@click.option("--x0", type=float, default=0.0, show_default=True, help="First argument of the slice.")
@click.option("--kernel-mode", default="auto", show_default=True, help="auto, generic or closed_form_n2.")
@click.option("--j-mode", default="auto", show_default=True, help="auto, quadrature, series or elementary.")
@handle_errors
def kernel(profile, spectrum, seed, out, view, grid, x0, kernel_mode, j_mode) -> None:
    """Evaluate the reproducing kernel on a grid, a slice or the diagonal."""
    config = load_run_config("kernel", profile, spectrum, seed, out, view=view, grid=grid, x0=x0, kernel_mode=kernel_mode, j_mode=j_mode)
    if view not in ("grid", "slice", "diag"):
        raise ValidationError(f"unknown view {view!r}, expected grid, slice or diag", field="mode")
    pts = GridSpec.parse(grid).points()
    ev = KernelEvaluator(config.profile, config.spectrum, j_mode=j_mode, mode=kernel_mode)
    if view == "grid":
        X, Y = np.meshgrid(pts, pts, indexing="ij")
        text = format_csv(["x", "y", "k"], [X, Y, ev.matrix(pts)])
    elif view == "slice":
        text = format_csv(["y", "k"], [pts, ev(np.full(pts.shape, x0), pts)])
    else:
        text = format_csv(["y", "k"], [pts, ev.diagonal(pts)])
    emit(text, config)


@cli.command()
@common_options
@click.option("--points", "points", required=True, help="Point file: one float per line or CSV with column x.")
@click.option("--radii", default="10,20,40", show_default=True, help="Comma-separated radii.")
@handle_errors
def density(profile, spectrum, seed, out, points, radii) -> None:
    """Windowed mu_p Beurling densities of a point set."""
    config = load_run_config("density", profile, spectrum, seed, out, points=points, radii=radii)
    if not Path(points).is_file():
        raise ValidationError(f"file not found: {points}", field="points")
    X = PointSet.load_from_file(points)
    report = beurling_densities(config.profile, X, parse_floats(radii, "radii"), critical=config.spectrum.critical_density)
    emit(format_json(report.to_dict(), config.describe()), config)


@cli.command()
@common_options
@click.option("--radii", default="10,20,40,80", show_default=True, help="Comma-separated radii r of [-r, r].")
@handle_errors
def trace(profile, spectrum, seed, out, radii) -> None:
    """Averaged kernel trace over [-r, r] against the critical density."""
    config = load_run_config("trace", profile, spectrum, seed, out, radii=radii)
    ev = KernelEvaluator(config.profile, config.spectrum)
    report = trace_convergence_report(ev, parse_floats(radii, "radii"))
    emit(format_json(report.to_dict(), config.describe()), config)


@cli.command()
@common_options
@click.option("--factors", default="1.5,0.6", show_default=True, help="Densities relative to the critical value.")
@click.option("--windows", default="20,40,80", show_default=True, help="Half-widths of the reference windows.")
@click.option("--trials", type=int, default=1, show_default=True, help="Draws per configuration.")
@click.option("--oversampling", type=int, default=None, help="Reference grid oversampling.")
@handle_errors
def sweep(profile, spectrum, seed, out, factors, windows, trials, oversampling) -> None:
    """Empirical frame bounds and interpolation conditioning over densities."""
    config = load_run_config("sweep", profile, spectrum, seed, out, factors=factors, windows=windows, trials=trials, oversampling=oversampling)
    ev = KernelEvaluator(config.profile, config.spectrum)
    rows = density_sweep(
        ev,
        parse_floats(factors, "factors"),
        parse_floats(windows, "windows"),
        trials=trials,
        seed=config.seed,
        oversampling=oversampling,
    )
    report = {"label": "empirical", "seed": config.seed, "rows": [row.to_dict() for row in rows]}
    emit(format_json(report, config.describe()), config)


@cli.command()
@common_options
@click.option("--samples", type=int, default=50, show_default=True, help="Sampled spectral points.")
@click.option("--random-jumps", type=int, default=0, show_default=True, help="Check a seeded random profile with this many jumps instead of --profile.")
@click.option("--inject-fault", type=str, default=None, hidden=True)
@handle_errors
def verify(profile, spectrum, seed, out, samples, random_jumps, inject_fault) -> None:
    """Check the exact identities and kernel structure for a configuration."""
    config = load_run_config("verify", profile, spectrum, seed, out, samples=samples, random_jumps=random_jumps, inject_fault=inject_fault)
    if random_jumps < 0:
        raise ValidationError(f"number of jumps must be non-negative, got {random_jumps}", field="random-jumps")
    if random_jumps and profile is not None:
        raise ValidationError("--random-jumps and --profile are exclusive", field="random-jumps")
    if random_jumps:
        drawn = BandwidthProfile.random(random_jumps, np.random.default_rng(config.seed))
        config = config.model_copy(update={"profile": drawn})
        logger.info(f"Random profile with {random_jumps} jumps from seed {config.seed}")
    if inject_fault is not None and inject_fault not in FAULTS:
        raise ValidationError(f"unknown fault {inject_fault!r}", field="inject-fault")
    report = run_verification(config.profile, config.spectrum, seed=config.seed, samples=samples, fault=inject_fault)
    document = {**report.to_dict(), "profile": config.profile.to_dict(), "random_jumps": random_jumps}
    emit(format_json(document, config.describe()), config)
    if not report.passed:
        raise VerificationError(f"failed checks: {', '.join(report.failed)}", failed=report.failed)
