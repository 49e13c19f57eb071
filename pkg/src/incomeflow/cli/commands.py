"""
The incomeflow command line.

Usage:
    incomeflow ccdf --input=survey.csv --out=curve.tsv [--decimate=10]
    incomeflow match --input=survey.csv --wealth=rich.csv --year=2008 --out=merged.csv
    incomeflow fit --input=curve.tsv --out=fit.json [--config=cfg.json]
    incomeflow simulate --out=hist.tsv [--config=sim.json] [--seed=7] [--jobs=4]
    incomeflow sample --year=2008 --out=synthetic.csv [--n=100000] [--seed=1]
    incomeflow report --config=batch.json --out=table.txt [--jobs=4]

Every written file gets a `<file>.manifest.json` sidecar.
"""

import json
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path
from typing import Any, Dict, List, Optional, Type, TypeVar

from loguru import logger
from pydantic import BaseModel, ConfigDict, Field

from config.env import NUMERICS, PATHS
from incomeflow.cli.decorators import (
    EXIT_GAP_OPEN,
    EXIT_NOT_CONVERGED,
    EXIT_OK,
    exit_on_error,
)
from incomeflow.cli.manifest import Command, RunManifest
from incomeflow.cli.plots import write_gnuplot, write_overlay
from incomeflow.empirical import (
    CcdfCurve,
    IncomeSample,
    build_ccdf,
    loglog_points,
    read_curve_tsv,
    read_income_csv,
    write_curve_tsv,
    write_income_csv,
)
from incomeflow.errors import ConfigurationError, DataFormatError, EmptySampleError
from incomeflow.fitting import (
    FitConfig,
    FitReport,
    default_fit_config,
    fit,
    format_parameter_table,
    published_comparison,
)
from incomeflow.matching import estimate_incomes, find_factor, read_wealth_csv
from incomeflow.model import Dataset, EyShape, from_langevin, published, sample
from incomeflow.simulation import (
    SimConfig,
    build_histogram,
    default_config,
    ks_distance,
    run_ensemble,
)

logger = logger.bind(component="cli")

M = TypeVar("M", bound=BaseModel)


class BatchRun(BaseModel):
    """One per-year fit of a report batch."""

    model_config = ConfigDict(frozen=True)

    year: int
    input: str
    dataset: Optional[Dataset] = None


class Batch(BaseModel):
    """A report batch: runs plus the FitConfig overrides they share."""

    model_config = ConfigDict(frozen=True)

    runs: List[BatchRun] = Field(min_length=1)
    fit: Dict[str, Any] = Field(default_factory=dict)


def read_text(path: Path | str) -> str:
    """Contents of a configuration file.

    Raises:
        DataFormatError: if the file is missing or empty
    """
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except FileNotFoundError as e:
        raise DataFormatError("file not found", path) from e
    if not text.strip():
        raise DataFormatError("file is empty", path)
    return text


def read_config(path: Path | str, model: Type[M]) -> M:
    """Validate a JSON file straight into `model`.

    Raises:
        DataFormatError: if the file is missing or empty
        pydantic.ValidationError: if the JSON is malformed or does not fit `model`
    """
    return model.model_validate_json(read_text(path))


def read_json(path: Path | str) -> Dict[str, Any]:
    """Parse a JSON object from a file.

    Raises:
        DataFormatError: if the file is missing, empty or not a JSON object
    """
    path = Path(path)
    text = read_text(path)
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise DataFormatError(f"invalid JSON: {e.msg}", path, [e.lineno]) from e
    if not isinstance(data, dict):
        raise DataFormatError("expected a JSON object", path)
    return data


def records_of_year(s: IncomeSample, year: int) -> IncomeSample:
    """The records of `s` dated `year`.

    Raises:
        EmptySampleError: if no record carries that year
    """
    mask = s.years == year
    if not mask.any():
        where = s.metadata.get("input", "the input")
        raise EmptySampleError(f"no records for year {year} in {where}")
    return IncomeSample(
        incomes=s.incomes[mask],
        sources=s.sources[mask],
        years=s.years[mask],
        metadata={**s.metadata, "year": year},
    )


def load_curve(path: Path | str, year: Optional[int] = None) -> CcdfCurve:
    """A curve TSV as is, or the CCDF of an income CSV (optionally one year)."""
    path = Path(path)
    if path.suffix.lower() == ".tsv":
        return read_curve_tsv(path)
    records = read_income_csv(path)
    if year is not None:
        records = records_of_year(records, year)
    return build_ccdf(records)


def fit_config(curve: CcdfCurve, overrides: Dict[str, Any]) -> FitConfig:
    """FitConfig from JSON overrides; the curve supplies a missing initial_guess."""
    if "initial_guess" in overrides:
        return FitConfig.model_validate(overrides)
    return default_fit_config(curve, **overrides)


def fit_batch_run(run: BatchRun, overrides: Dict[str, Any], base: str) -> FitReport:
    """Fit one batch run; module level so worker processes can receive it."""
    path = Path(run.input)
    if not path.is_absolute():
        path = Path(base) / path
    curve = load_curve(path, run.year)
    dataset = run.dataset.value if run.dataset is not None else None
    return fit(curve, fit_config(curve, overrides), year=run.year, dataset=dataset)


def stem_path(out: Path, suffix: str) -> Path:
    """`out` with its last suffix replaced, e.g. fit.json -> fit.overlay.tsv."""
    return out.with_name(out.stem + suffix)


class IncomeFlowCLI:
    """Income distribution model: curves, matching, fitting and simulation."""

    @exit_on_error
    def ccdf(self, input: str, out: str, decimate: Optional[int] = None) -> int:
        """Empirical CCDF of an income CSV as a curve TSV.

        Args:
            input: income CSV (income,source,year)
            out: curve TSV to write
            decimate: also write a log-log plot table keeping the top 100
                points and every decimate-th point after them
        """
        records = read_income_csv(input)
        curve = build_ccdf(records)
        out_path = PATHS.resolve_output(out)
        outputs = [write_curve_tsv(curve, out_path)]
        if decimate is not None:
            table = loglog_points(curve, int(decimate))
            plot_path = stem_path(out_path, ".loglog.tsv")
            table.to_csv(plot_path, sep="\t", index=False, float_format="%.10g")
            outputs.append(plot_path)
        RunManifest(
            command=Command.CCDF,
            inputs=[str(input)],
            config={"decimate": decimate},
            outputs=[str(p) for p in outputs],
        ).write()
        print(f"{len(curve)} points written to {out_path}")
        return EXIT_OK

    @exit_on_error
    def match(
        self,
        input: str,
        wealth: str,
        year: int,
        out: str,
        kappa: float = 1.0,
        allow_open_gap: bool = False,
    ) -> int:
        """Scale rich-list incomes onto the survey and merge the two.

        Exits with code 3 when the junction gap of the merged curve stays at
        or above the configured tolerance; the outputs are written anyway.

        Args:
            input: survey income CSV; only records of `year` are used
            wealth: rich-list CSV (person_id,year,wealth_eur) covering
                year-1 and year
            year: calendar year of the incomes
            out: merged income CSV; the match summary goes to <stem>.match.json
            kappa: income fraction of a positive wealth change
            allow_open_gap: exit 0 even if the junction gap stays open
        """
        year = int(year)
        survey = records_of_year(read_income_csv(input), year)
        rich = estimate_incomes(read_wealth_csv(wealth), year, kappa=kappa)
        result = find_factor(survey, rich, year=year)

        out_path = PATHS.resolve_output(out)
        summary_path = stem_path(out_path, ".match.json")
        write_income_csv(result.merged, out_path)
        summary_path.write_text(
            json.dumps(result.summary(), indent=2) + "\n", encoding="utf-8"
        )
        RunManifest(
            command=Command.MATCH,
            inputs=[str(input), str(wealth)],
            config={"year": year, "kappa": kappa},
            outputs=[str(out_path), str(summary_path)],
        ).write()
        print(
            f"factor {result.factor:.3g}, "
            f"junction gap {result.junction_gap:.3f} decades, "
            f"{len(result.merged)} merged records"
        )
        if not result.gap_closed and not allow_open_gap:
            logger.error(
                f"Junction gap {result.junction_gap:.3f} decades is not below "
                f"{NUMERICS.GAP_TOLERANCE}; pass --allow-open-gap to accept the merge"
            )
            return EXIT_GAP_OPEN
        return EXIT_OK

    @exit_on_error
    def fit(
        self,
        input: str,
        out: str,
        config: Optional[str] = None,
        year: Optional[int] = None,
        dataset: Optional[str] = None,
        allow_nonconverged: bool = False,
    ) -> int:
        """Fit the six structural parameters to a curve.

        Writes the FitReport JSON to `out`, the overlay TSV
        (income, empirical, model) and a gnuplot script next to it.

        Args:
            input: curve TSV, or income CSV whose CCDF is taken
            out: FitReport JSON to write
            config: JSON with FitConfig fields; without `initial_guess` the
                guess comes from the curve
            year: keep only records of this year (income CSV input)
            dataset: label stored in the report ("survey" or "matched")
            allow_nonconverged: exit 0 even if the fit did not converge
        """
        curve = load_curve(input, year)
        overrides = read_json(config) if config else {}
        cfg = fit_config(curve, overrides)
        report = fit(curve, cfg, year=year, dataset=dataset)

        out_path = PATHS.resolve_output(out)
        out_path.write_text(report.model_dump_json(indent=2) + "\n", encoding="utf-8")
        overlay_path = stem_path(out_path, ".overlay.tsv")
        overlay = write_overlay(curve, report.params, overlay_path)
        script = write_gnuplot(
            overlay, report.params, stem_path(out_path, ".gp"), title=f"fit of {input}"
        )
        RunManifest(
            command=Command.FIT,
            inputs=[str(input)] + ([str(config)] if config else []),
            config=cfg.model_dump(mode="json"),
            outputs=[str(out_path), str(overlay), str(script)],
        ).write()
        print(format_parameter_table([report]))
        if report.flags:
            print(f"flags: {', '.join(report.flags)}")
        if not report.converged and not allow_nonconverged:
            logger.error("Fit did not converge; pass --allow-nonconverged to accept it")
            return EXIT_NOT_CONVERGED
        return EXIT_OK

    @exit_on_error
    def simulate(
        self,
        out: str,
        config: Optional[str] = None,
        seed: Optional[int] = None,
        jobs: int = 1,
    ) -> int:
        """Stationary histogram of the Langevin ensemble plus its KS distance.

        Args:
            out: histogram TSV (bin_center, density); the KS diagnostic goes
                to <stem>.ks.json
            config: SimConfig JSON; defaults to the 2009 matched-dataset run
            seed: overrides the configured seed
            jobs: worker processes
        """
        if config:
            cfg = read_config(config, SimConfig)
        else:
            cfg = default_config()
        if seed is not None:
            cfg = cfg.model_copy(update={"seed": int(seed)})
        states = run_ensemble(cfg, jobs=int(jobs))
        histogram = build_histogram(states, cfg.lp, cfg.n_bins)
        ks = ks_distance(states, from_langevin(cfg.lp))

        out_path = PATHS.resolve_output(out)
        histogram.to_tsv(out_path)
        ks_path = stem_path(out_path, ".ks.json")
        diagnostic = {"ks_distance": ks, "n_states": int(states.size), "seed": cfg.seed}
        ks_path.write_text(json.dumps(diagnostic, indent=2) + "\n", encoding="utf-8")
        RunManifest(
            command=Command.SIMULATE,
            inputs=[str(config)] if config else [],
            config=cfg.model_dump(mode="json"),
            seed=cfg.seed,
            outputs=[str(out_path), str(ks_path)],
        ).write()
        print(f"KS distance {ks:.4f} over {states.size} recorded states")
        return EXIT_OK

    @exit_on_error
    def sample(
        self,
        out: str,
        config: Optional[str] = None,
        year: Optional[int] = None,
        dataset: str = Dataset.MATCHED.value,
        n: int = 100_000,
        seed: int = 0,
    ) -> int:
        """Synthetic survey CSV drawn from the equilibrium law.

        Args:
            out: income CSV to write
            config: JSON with the six structural parameters
            year: published row to use when no config is given; also the
                year stamped on the records
            dataset: "matched" or "survey" published row
            n: number of draws
            seed: random seed
        """
        if config:
            params = read_config(config, EyShape)
        elif year is not None:
            params = published(int(year), dataset)
        else:
            raise ConfigurationError("sample needs --config or --year")
        draws = sample(params, int(n), seed=int(seed), year=int(year or 0))
        out_path = write_income_csv(draws, PATHS.resolve_output(out))
        RunManifest(
            command=Command.SAMPLE,
            inputs=[str(config)] if config else [],
            config={
                "params": params.model_dump(),
                "n": int(n),
                "year": year,
                "dataset": dataset,
            },
            seed=int(seed),
            outputs=[str(out_path)],
        ).write()
        print(f"{len(draws)} records written to {out_path}")
        return EXIT_OK

    @exit_on_error
    def report(
        self,
        config: str,
        out: str,
        jobs: int = 1,
        allow_nonconverged: bool = False,
    ) -> int:
        """Per-year fits of a batch, tabulated and compared with the published rows.

        Args:
            config: batch JSON {"runs": [{"year", "input", "dataset"}], "fit": {...}};
                relative inputs are resolved against the batch file
            out: parameter table to write; reports go to <stem>.reports.json
                and the comparison to <stem>.comparison.tsv
            jobs: worker processes, one run per process
            allow_nonconverged: exit 0 even if some fit did not converge
        """
        jobs = int(jobs)
        if jobs < 1:
            raise ConfigurationError(f"jobs={jobs} must be at least 1")
        batch = read_config(config, Batch)
        base = str(Path(config).resolve().parent)
        workers = min(jobs, len(batch.runs))
        logger.info(f"Fitting {len(batch.runs)} run(s) on {workers} worker(s)")
        if workers == 1:
            reports = [fit_batch_run(run, batch.fit, base) for run in batch.runs]
        else:
            with ProcessPoolExecutor(max_workers=workers) as pool:
                futures = [
                    pool.submit(fit_batch_run, run, batch.fit, base)
                    for run in batch.runs
                ]
                reports = [f.result() for f in futures]

        out_path = PATHS.resolve_output(out)
        table = format_parameter_table(reports)
        out_path.write_text(table + "\n", encoding="utf-8")
        reports_path = stem_path(out_path, ".reports.json")
        reports_path.write_text(
            json.dumps([r.model_dump(mode="json") for r in reports], indent=2) + "\n",
            encoding="utf-8",
        )
        comparison_path = stem_path(out_path, ".comparison.tsv")
        published_comparison(reports).to_csv(
            comparison_path, sep="\t", index=False, float_format="%.6g"
        )
        RunManifest(
            command=Command.REPORT,
            inputs=[str(config)] + [run.input for run in batch.runs],
            config=batch.model_dump(mode="json"),
            outputs=[str(out_path), str(reports_path), str(comparison_path)],
        ).write()
        print(table)
        failed = [r.year for r in reports if not r.converged]
        if failed and not allow_nonconverged:
            logger.error(f"Fits for {failed} did not converge")
            return EXIT_NOT_CONVERGED
        return EXIT_OK

