"""Command-line front end: sweeps, figure tables and the spectrum check.

Every subcommand writes CSV (UTF-8, LF, ``#`` comment lines, header row,
17 significant digits) to ``--out`` or stdout. Exit codes: 0 success,
1 validation error, 2 computation error, 3 I/O error, 4 eigencheck
threshold exceeded.
"""
from __future__ import annotations

import argparse
import csv
import dataclasses
import io
import logging
import sys
from dataclasses import dataclass, field, fields
from pathlib import Path

import numpy as np

from . import canonical, core, eigenoracle, superstat
from .errors import ComputationError, LandauError, ValidationError

log = logging.getLogger("graphene_landau")

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_COMPUTATION = 2
EXIT_IO = 3
EXIT_THRESHOLD = 4

FIGURE_FILES = (
    "fig1_spectrum.csv",
    "fig1_boltzmann.csv",
    "fig2_partition.csv",
    "fig3_energy.csv",
    "fig4_heat.csv",
    "fig5_entropy.csv",
    "fig6_free.csv",
)


@dataclass
class RunConfig:
    units: str = "natural"
    field_strength: float = 1.0  # D in natural units, B0 in tesla for SI
    lambda_max: float = 1.0
    q: float = 0.5
    k_boltz: float = 1.0
    beta_min: float = 0.01
    beta_max: float = 100.0
    beta_count: int = 100
    beta_spacing: str = "log"
    output_path: str = "-"
    permissive_q: bool = False
    tolerance: float = 1e-3

    def validate(self) -> None:
        if self.units not in ("natural", "si"):
            raise ValidationError(f"units must be 'natural' or 'si', got {self.units!r}")
        if self.beta_spacing not in ("linear", "log"):
            raise ValidationError(f"beta_spacing must be 'linear' or 'log', got {self.beta_spacing!r}")
        if not self.beta_min > 0:
            raise ValidationError(f"beta_min must be positive, got {self.beta_min}")
        if self.beta_count < 1:
            raise ValidationError(f"beta_count must be >= 1, got {self.beta_count}")
        if self.beta_max < self.beta_min:
            raise ValidationError("beta_max must be >= beta_min")
        if self.beta_count > 1 and self.beta_max == self.beta_min:
            raise ValidationError("beta_max == beta_min only allowed with beta_count = 1")
        if not self.tolerance > 0:
            raise ValidationError(f"tolerance must be positive, got {self.tolerance}")
        superstat.validate_q(self.q, self.permissive_q)

    def physical(self) -> core.PhysicalParams:
        if self.units == "si":
            return core.PhysicalParams.si(self.field_strength)
        return core.PhysicalParams.natural(self.field_strength, self.k_boltz)

    def derived(self) -> core.DerivedParams:
        return core.derive_params(self.physical(), self.lambda_max)

    def betas(self) -> np.ndarray:
        if self.beta_count == 1:
            return np.array([self.beta_min])
        if self.beta_spacing == "log":
            return np.geomspace(self.beta_min, self.beta_max, self.beta_count)
        return np.linspace(self.beta_min, self.beta_max, self.beta_count)

    def summary(self) -> str:
        """One-line provenance record; the output location is left out."""
        return " ".join(
            f"{f.name}={_format_value(getattr(self, f.name))}"
            for f in fields(self)
            if f.name != "output_path"
        )


# --- config files -----------------------------------------------------------

def _format_value(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, str):
        return '"' + value.replace("\\", "\\\\").replace('"', '\\"') + '"'
    return repr(value)


def _parse_value(text: str, kind: type, key: str):
    text = text.strip()
    if kind is str:
        if len(text) >= 2 and text[0] == text[-1] and text[0] in "\"'":
            return text[1:-1].replace('\\"', '"').replace("\\\\", "\\")
        return text
    if kind is bool:
        if text in ("true", "false"):
            return text == "true"
        raise ValidationError(f"config key {key!r} expects true/false, got {text!r}")
    try:
        return kind(text)
    except ValueError:
        raise ValidationError(f"config key {key!r} expects {kind.__name__}, got {text!r}") from None


def _field_types() -> dict[str, type]:
    return {f.name: type(f.default) for f in fields(RunConfig)}


def parse_config_text(text: str, base: RunConfig | None = None) -> RunConfig:
    """Parse flat ``key = value`` lines (a TOML subset) onto ``base``."""
    types = _field_types()
    values = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ValidationError(f"config line {lineno}: expected 'key = value', got {raw!r}")
        key, value = (part.strip() for part in line.split("=", 1))
        if key not in types:
            raise ValidationError(f"config line {lineno}: unknown key {key!r}")
        values[key] = _parse_value(value, types[key], key)
    return dataclasses.replace(base or RunConfig(), **values)


def config_to_text(config: RunConfig) -> str:
    return "".join(f"{f.name} = {_format_value(getattr(config, f.name))}\n" for f in fields(config))


def load_config(path: str | Path) -> RunConfig:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise OSError(f"cannot read config {path}: {exc.strerror}") from exc
    return parse_config_text(text)


# --- CSV output -------------------------------------------------------------

def fmt(value) -> str:
    if isinstance(value, (int, np.integer)) and not isinstance(value, bool):
        return str(int(value))
    value = float(value)
    if value == 0.0:
        value = 0.0  # drop the sign of negative zero
    return format(value, ".17g")


@dataclass
class Table:
    header: list[str]
    rows: list[list] = field(default_factory=list)
    comments: list[str] = field(default_factory=list)

    def render(self, buf: io.StringIO) -> None:
        for line in self.comments:
            buf.write(f"# {line}\n")
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(self.header)
        for row in self.rows:
            writer.writerow([fmt(v) for v in row])

    def column(self, name: str) -> list:
        i = self.header.index(name)
        return [row[i] for row in self.rows]


def render_tables(tables: list[Table]) -> str:
    buf = io.StringIO()
    for i, table in enumerate(tables):
        if i:
            buf.write("\n")
        table.render(buf)
    return buf.getvalue()


def write_output(text: str, path: str | Path) -> None:
    if str(path) == "-":
        sys.stdout.write(text)
        sys.stdout.flush()
        return
    try:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    except OSError as exc:
        raise OSError(f"cannot write {path}: {exc.strerror}") from exc


def _provenance(config: RunConfig, command: str) -> list[str]:
    return [f"graphene_landau {command}", f"config: {config.summary()}"]


# --- tables -----------------------------------------------------------------

def spectrum_table(config: RunConfig, n_max: int) -> Table:
    if n_max < 0:
        raise ValidationError(f"n_max must be >= 0, got {n_max}")
    phys, dp = config.physical(), config.derived()
    table = Table(["n", "e_electron", "e_hole"], comments=_provenance(config, "spectrum"))
    for n in range(n_max + 1):
        table.rows.append([
            n,
            core.landau_energy(n, core.Band.ELECTRON, dp, phys),
            core.landau_energy(n, core.Band.HOLE, dp, phys),
        ])
    return table


def thermo_points(config: RunConfig) -> list[canonical.ThermoPoint]:
    return canonical.thermo_sweep(config.betas(), config.derived(), config.physical().k_boltz)


def superstat_points(config: RunConfig, q: float | None = None) -> list[superstat.SuperstatPoint]:
    q = config.q if q is None else q
    return superstat.superstat_sweep(
        config.betas(), q, config.derived(), config.physical().k_boltz, config.permissive_q
    )


def thermo_table(config: RunConfig) -> Table:
    table = Table(["beta", "z", "u", "c", "s", "f"], comments=_provenance(config, "thermo"))
    for p in thermo_points(config):
        table.rows.append([p.beta, p.z, p.u, p.c, p.s, p.f])
    return table


def warn_lambda(config: RunConfig) -> None:
    if config.lambda_max != 1.0:
        log.warning(
            "lambda=%g: the closed-form Z_s (2+6q)/(a^2 beta^2) and the direct integral "
            "(1+3q)/(b beta^2) differ by a factor of lambda; reported values use the closed form",
            config.lambda_max,
        )


def superstat_table(config: RunConfig) -> Table:
    warn_lambda(config)
    table = Table(["beta", "q", "z_s", "u_s", "c_s", "s_s", "f_s"], comments=_provenance(config, "superstat"))
    for p in superstat_points(config):
        table.rows.append([p.beta, p.q, p.z_s, p.u_s, p.c_s, p.s_s, p.f_s])
    return table


def _q_label(q: float) -> str:
    return f"q={q:g}"


def boltzmann_tables(
    config: RunConfig,
    e_max: float,
    q_list: list[float],
    energy: float = 1.0,
    beta_fixed: float = 1.0,
    energy_count: int = 101,
) -> list[Table]:
    """B(E) over the beta grid at fixed E, and over E in [0, e_max] at fixed beta."""
    if not e_max > 0:
        raise ValidationError(f"e_max must be positive, got {e_max}")
    if energy_count < 2:
        raise ValidationError(f"energy_count must be >= 2, got {energy_count}")
    if not q_list:
        raise ValidationError("q_list must not be empty")
    for q in q_list:
        superstat.validate_q(q, config.permissive_q)
    canonical.check_beta(beta_fixed)

    by_beta = Table(
        ["beta"]
        + [f"B_{_q_label(q)}" for q in q_list]
        + [f"dB_dbeta_{_q_label(q)}" for q in q_list],
        comments=_provenance(config, "boltzmann") + [f"section: beta sweep at fixed energy E={energy!r}"],
    )
    for beta in config.betas():
        beta = float(beta)
        by_beta.rows.append(
            [beta]
            + [superstat.boltzmann_factor_q(energy, beta, q) for q in q_list]
            + [superstat.boltzmann_slope_q(energy, beta, q) for q in q_list]
        )

    by_energy = Table(
        ["energy"] + [f"B_{_q_label(q)}" for q in q_list],
        comments=[f"section: energy sweep at fixed beta={beta_fixed!r}"],
    )
    for e in np.linspace(0.0, e_max, energy_count):
        e = float(e)
        by_energy.rows.append([e] + [superstat.boltzmann_factor_q(e, beta_fixed, q) for q in q_list])
    return [by_beta, by_energy]


def eigencheck_table(config: RunConfig, k1: float, n_levels: int) -> tuple[Table, bool]:
    """Grid spectrum versus 2nD; second item is True when within tolerance * D."""
    if n_levels > eigenoracle.MAX_LEVELS:
        raise ValidationError(
            f"grid accuracy budget: n_levels={n_levels} exceeds {eigenoracle.MAX_LEVELS}"
        )
    phys, dp = config.physical(), config.derived()
    grid = eigenoracle.GridSpec.reference(dp, k1)
    report = eigenoracle.verify_spectrum(dp, k1, grid, n_levels)
    threshold = config.tolerance * dp.d
    levels = eigenoracle.dirac_levels_from_oracle(report, phys, tolerance=threshold)
    ok = report.max_deviation <= threshold
    comments = _provenance(config, "eigencheck") + [
        f"k1={k1!r} grid=[{grid.x_min!r}, {grid.x_max!r}] points={grid.n_points} h={grid.spacing!r}",
        f"max_deviation={fmt(report.max_deviation)} threshold={fmt(threshold)} "
        f"status={'PASS' if ok else 'FAIL'}",
    ]
    table = Table(
        ["n", "computed", "analytic", "abs_deviation", "dirac_oracle", "dirac_analytic"],
        comments=comments,
    )
    for n in range(n_levels):
        table.rows.append([
            n,
            report.computed[n],
            report.analytic[n],
            report.abs_deviation[n],
            levels[n].energy,
            core.landau_energy(n, core.Band.ELECTRON, dp, phys),
        ])
    return table, ok


def figure_tables(config: RunConfig, n_max: int = 10) -> dict[str, list[Table]]:
    warn_lambda(config)
    k = config.physical().k_boltz
    thermo = thermo_points(config)
    sstat = superstat_points(config)
    q_lo = superstat_points(config, 0.0)
    q_hi = superstat_points(config, 1.0)
    comments = _provenance(config, "figdata")

    def side_by_side(cols, values):
        table = Table(["beta"] + cols, comments=comments)
        for i, p in enumerate(thermo):
            table.rows.append([p.beta] + [v(i) for v in values])
        return [table]

    q_list = sorted({0.0, config.q, 1.0})
    spectrum = spectrum_table(config, n_max)
    spectrum.comments = comments
    boltz = boltzmann_tables(config, e_max=5.0, q_list=q_list)
    boltz[0].comments = comments + boltz[0].comments[2:]
    return {
        "fig1_spectrum.csv": [spectrum],
        "fig1_boltzmann.csv": boltz,
        "fig2_partition.csv": side_by_side(["z", "z_s"], [lambda i: thermo[i].z, lambda i: sstat[i].z_s]),
        "fig3_energy.csv": side_by_side(["u", "u_s"], [lambda i: thermo[i].u, lambda i: sstat[i].u_s]),
        "fig4_heat.csv": side_by_side(
            ["c", "c_s", "c_limit"],
            [lambda i: thermo[i].c, lambda i: sstat[i].c_s, lambda i: 2.0 * k],
        ),
        "fig5_entropy.csv": side_by_side(
            ["s", "s_s", "s_s_q=0", "s_s_q=1"],
            [lambda i: thermo[i].s, lambda i: sstat[i].s_s, lambda i: q_lo[i].s_s, lambda i: q_hi[i].s_s],
        ),
        "fig6_free.csv": side_by_side(["f", "f_s"], [lambda i: thermo[i].f, lambda i: sstat[i].f_s]),
    }


def write_figdata(config: RunConfig, directory: str | Path, n_max: int = 10) -> list[Path]:
    directory = Path(directory)
    tables = figure_tables(config, n_max)
    try:
        directory.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise OSError(f"cannot create {directory}: {exc.strerror}") from exc
    written = []
    for name in FIGURE_FILES:
        path = directory / name
        write_output(render_tables(tables[name]), path)
        written.append(path)
    return written


# --- argument parsing -------------------------------------------------------

class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_VALIDATION, f"{self.prog}: error: {message}\n")


def _q_list(text: str) -> list[float]:
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None


def _common(parser: argparse.ArgumentParser) -> None:
    g = parser.add_argument_group("configuration (flags override --config)")
    g.add_argument("--config", help="flat key = value configuration file")
    g.add_argument("--units", choices=("natural", "si"))
    field_group = g.add_mutually_exclusive_group()
    field_group.add_argument("--D", dest="d", type=float, help="field constant D (natural units)")
    field_group.add_argument("--B0", dest="b0", type=float, help="field strength in tesla (SI units)")
    g.add_argument("--lambda", dest="lambda_max", type=float, help="upper limit of the n integral")
    g.add_argument("--q", type=float, help="deformation parameter")
    g.add_argument("--k", dest="k_boltz", type=float, help="Boltzmann constant (natural units)")
    g.add_argument("--beta-min", type=float)
    g.add_argument("--beta-max", type=float)
    g.add_argument("--beta-count", type=int)
    g.add_argument("--beta-spacing", choices=("linear", "log"))
    g.add_argument("--out", dest="output_path", help="output file ('-' for stdout) or directory for figdata")
    g.add_argument("--permissive-q", action="store_true", default=None, help="allow q > 1")
    g.add_argument("--tolerance", type=float, help="eigencheck threshold, in units of D")
    g.add_argument("-v", "--verbose", action="store_true")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="graphene-landau", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("spectrum", help="Landau levels n = 0..n_max")
    _common(p)
    p.add_argument("--n-max", type=int, default=10)

    p = sub.add_parser("thermo", help="canonical Z, U, C, S, F over the beta grid")
    _common(p)

    p = sub.add_parser("superstat", help="superstatistical Z_s, U_s, C_s, S_s, F_s over the beta grid")
    _common(p)

    p = sub.add_parser("boltzmann", help="generalized Boltzmann factor tables")
    _common(p)
    p.add_argument("--e-max", type=float, default=5.0)
    p.add_argument("--q-list", type=_q_list, default=[0.0, 0.5, 1.0])
    p.add_argument("--energy", type=float, default=1.0, help="fixed energy for the beta sweep")
    p.add_argument("--beta-fixed", type=float, default=1.0, help="fixed beta for the energy sweep")
    p.add_argument("--energy-count", type=int, default=101)
    p.add_argument("--split", action="store_true",
                   help="write <out>_beta.csv and <out>_energy.csv instead of one two-section file")

    p = sub.add_parser("eigencheck", help="grid eigensolver check of the spectrum 2nD")
    _common(p)
    p.add_argument("--k1", type=float, default=0.0)
    p.add_argument("--n-levels", type=int, default=6)

    p = sub.add_parser("figdata", help="write the seven figure tables into a directory")
    _common(p)
    p.add_argument("--n-max", type=int, default=10)
    return parser


def resolve_config(args: argparse.Namespace) -> RunConfig:
    config = load_config(args.config) if args.config else RunConfig()
    overrides = {}
    for name in ("units", "lambda_max", "q", "k_boltz", "beta_min", "beta_max",
                 "beta_count", "beta_spacing", "output_path", "permissive_q", "tolerance"):
        value = getattr(args, name, None)
        if value is not None:
            overrides[name] = value
    if args.d is not None:
        if overrides.get("units") == "si":
            raise ValidationError("--D is a natural-units flag; use --B0 with --units si")
        overrides["field_strength"] = args.d
        overrides.setdefault("units", "natural")
    if args.b0 is not None:
        if overrides.get("units") == "natural":
            raise ValidationError("--B0 is an SI flag; use --D with --units natural")
        overrides["field_strength"] = args.b0
        overrides.setdefault("units", "si")
    config = dataclasses.replace(config, **overrides)
    config.validate()
    return config


def run(args: argparse.Namespace) -> int:
    config = resolve_config(args)
    if args.command == "spectrum":
        write_output(render_tables([spectrum_table(config, args.n_max)]), config.output_path)
    elif args.command == "thermo":
        write_output(render_tables([thermo_table(config)]), config.output_path)
    elif args.command == "superstat":
        write_output(render_tables([superstat_table(config)]), config.output_path)
    elif args.command == "boltzmann":
        tables = boltzmann_tables(
            config, args.e_max, args.q_list, args.energy, args.beta_fixed, args.energy_count
        )
        if args.split:
            if config.output_path == "-":
                raise ValidationError("--split needs --out naming a file")
            out = Path(config.output_path)
            tables[1].comments = tables[0].comments[:2] + tables[1].comments
            write_output(render_tables([tables[0]]), out.with_name(out.stem + "_beta.csv"))
            write_output(render_tables([tables[1]]), out.with_name(out.stem + "_energy.csv"))
        else:
            write_output(render_tables(tables), config.output_path)
    elif args.command == "eigencheck":
        table, ok = eigencheck_table(config, args.k1, args.n_levels)
        write_output(render_tables([table]), config.output_path)
        if not ok:
            log.error("eigencheck: deviation above threshold")
            return EXIT_THRESHOLD
    elif args.command == "figdata":
        directory = "figdata" if config.output_path == "-" else config.output_path
        for path in write_figdata(config, directory, args.n_max):
            log.info("wrote %s", path)
    return EXIT_OK


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    handler = logging.StreamHandler(sys.stderr)
    handler.setFormatter(logging.Formatter("%(levelname)s: %(message)s"))
    log.addHandler(handler)
    log.setLevel(logging.INFO if args.verbose else logging.WARNING)
    try:
        return run(args)
    except ValidationError as exc:
        log.error("%s", exc)
        return EXIT_VALIDATION
    except (ComputationError, LandauError) as exc:
        log.error("%s", exc)
        return EXIT_COMPUTATION
    except OSError as exc:
        log.error("%s", exc)
        return EXIT_IO
    finally:
        log.removeHandler(handler)


if __name__ == "__main__":
    sys.exit(main())
