//! Pipeline driver behind the CLI: simulate → reconstruct → metrics →
//! sweep/tables/figure, all file-to-file and reproducible from any output's
//! header.

use std::path::{Path, PathBuf};
use std::time::Instant;

use crate::error::{Error, Result};
use crate::forward::{apply_noise, synthesize_dataset, FarFieldDataset, ProblemKind};
use crate::geometry::SamplingGrid;
use crate::indicators::{
    indicator_by_kind, indicator_rho_with, EvalOptions, IndicatorField, IndicatorKind,
};
use crate::io::config::fmt_f64;
use crate::io::figure::{write_figure, FigureOutput, PlotScalar};
use crate::io::{dataset, field, write_atomic, RunConfig};
use crate::metrics::{
    relative_l2_report, region_restricted_sup, threshold_diff, trend_report, ErrorMode,
    MetricsReport, Reference, ThresholdSpec, TrendAxis, TrendVerdict,
};
use crate::sources::{DerivKind, SourceSpec};

/// Result summary of a simulation run.
#[derive(Debug, Clone)]
pub struct SimulateSummary {
    pub clean_path: PathBuf,
    pub noisy_path: PathBuf,
    pub record_count: usize,
    pub synth_seconds: f64,
}

/// Synthesizes the dataset for `config`, writes the noiseless file and the
/// noisy file (at the configured `noise.delta` and seed).
pub fn cmd_simulate(config: &RunConfig) -> Result<SimulateSummary> {
    let spec = config.build_source()?;
    let physics = config.physics()?;
    let dirs = config.direction_set()?;
    let freqs = config.frequencies()?;
    let t = Instant::now();
    let clean = synthesize_dataset(&spec, &physics, &dirs, &freqs)?;
    let synth_seconds = t.elapsed().as_secs_f64();
    let noisy = apply_noise(&clean, config.noise_delta, config.seed)?;
    let clean_path = config.output_dir.join("dataset_clean.txt");
    let noisy_path = config.output_dir.join("dataset_noisy.txt");
    dataset::write_dataset(&clean_path, &clean)?;
    dataset::write_dataset(&noisy_path, &noisy)?;
    Ok(SimulateSummary {
        clean_path,
        noisy_path,
        record_count: clean.record_count(),
        synth_seconds,
    })
}

fn dataset_matches_config(ds: &FarFieldDataset, config: &RunConfig) -> Result<()> {
    if ds.problem() != config.problem {
        return Err(Error::DimensionMismatch(format!(
            "dataset is {}, config expects {}",
            ds.problem().as_str(),
            config.problem.as_str()
        )));
    }
    Ok(())
}

/// Evaluates the configured indicators on the configured grids.
pub fn cmd_reconstruct(config: &RunConfig, dataset_path: &Path) -> Result<Vec<PathBuf>> {
    let ds = dataset::read_dataset(dataset_path)?;
    dataset_matches_config(&ds, config)?;
    if config.indicators.is_empty() {
        return Ok(Vec::new());
    }
    let opts = EvalOptions {
        allow_full_volume: config.full_volume,
        ..Default::default()
    };
    let mut written = Vec::new();
    for (tag, grid) in config.grids()? {
        for kind in &config.indicators {
            let f = match kind {
                IndicatorKind::Rho => {
                    let charge = config.source.charge_density()?;
                    indicator_rho_with(&ds, &charge, &grid, &opts)?
                }
                other => indicator_by_kind(&ds, &grid, *other, &opts)?,
            };
            let name = if tag.is_empty() {
                format!("field_{}.txt", kind.as_str())
            } else {
                format!("field_{}_{}.txt", kind.as_str(), tag)
            };
            let path = config.output_dir.join(name);
            field::write_field(&path, &f)?;
            written.push(path);
        }
    }
    Ok(written)
}

/// The reference quantity an indicator approximates.
pub fn reference_for<'a>(kind: IndicatorKind, spec: &'a SourceSpec) -> Reference<'a> {
    match kind {
        IndicatorKind::F2d | IndicatorKind::F3d | IndicatorKind::E | IndicatorKind::Rho => {
            Reference::Source(spec)
        }
        IndicatorKind::P2d | IndicatorKind::P3d => Reference::Derivative {
            spec,
            kind: DerivKind::Div,
            scale: 1.0,
        },
        IndicatorKind::S2d => Reference::Derivative {
            spec,
            kind: DerivKind::DivPerp,
            scale: 1.0,
        },
        // the spatial shear indicator approximates -curl S
        IndicatorKind::S3d => Reference::Derivative {
            spec,
            kind: DerivKind::Curl,
            scale: -1.0,
        },
        IndicatorKind::H => Reference::Derivative {
            spec,
            kind: DerivKind::Curl,
            scale: 1.0,
        },
    }
}

/// Quality metrics of a reconstructed field against the configured source.
/// Appends one CSV row to `metrics.csv` in the output directory.
pub fn cmd_metrics(config: &RunConfig, field_path: &Path) -> Result<MetricsReport> {
    let f = field::read_field(field_path)?;
    let spec = config.build_source()?;
    if f.provenance.source_label != spec.label() {
        return Err(Error::Config(format!(
            "field was reconstructed from `{}`, config names `{}`",
            f.provenance.source_label,
            spec.label()
        )));
    }
    let reference = reference_for(f.kind, &spec);
    let report = relative_l2_report(&f, &reference, config.error_mode)?;
    let sup = region_restricted_sup(&f, &reference, config.exclude_band, config.error_mode).ok();
    let mask = threshold_diff(
        &f,
        &reference,
        ThresholdSpec::new(config.threshold)?,
        config.error_mode,
    )?;
    let row = MetricsReport {
        e_f: report.e_f,
        e_f_std: 0.0,
        n_seeds: 1,
        per_component: report.per_component,
        sup_error_interior: sup,
        threshold_fraction: Some(mask.fraction()),
        error_mode: config.error_mode,
        direction_count: f.provenance.direction_count,
        freq_count: f.provenance.freq_count,
        freq_delta: f.provenance.freq_delta,
        noise_delta: f.provenance.noise_delta,
        seed: f.provenance.seed,
    };
    append_metrics_row(&config.output_dir.join("metrics.csv"), &f, &row)?;
    Ok(row)
}

fn append_metrics_row(path: &Path, f: &IndicatorField, row: &MetricsReport) -> Result<()> {
    let header = "kind,source,L,freq_count,freq_delta,noise_delta,seed,error_mode,e_f,\
                  e_f_std,n_seeds,per_component,sup_interior,threshold_fraction\n";
    let mut text = if path.exists() {
        std::fs::read_to_string(path)?
    } else {
        header.to_string()
    };
    let per: Vec<String> = row.per_component.iter().map(|v| fmt_f64(*v)).collect();
    text.push_str(&format!(
        "{},{},{},{},{},{},{},{},{},{},{},{},{},{}\n",
        f.kind.as_str(),
        f.provenance.source_label,
        row.direction_count,
        row.freq_count,
        fmt_f64(row.freq_delta),
        fmt_f64(row.noise_delta),
        row.seed,
        row.error_mode.as_str(),
        fmt_f64(row.e_f),
        fmt_f64(row.e_f_std),
        row.n_seeds,
        per.join(";"),
        row.sup_error_interior.map(fmt_f64).unwrap_or_default(),
        row.threshold_fraction.map(fmt_f64).unwrap_or_default(),
    ));
    write_atomic(path, text.as_bytes())
}

/// Mean/std of e_F over seed replicates for one parameter cell.
///
/// The noiseless dataset is synthesized once; each seed only re-applies
/// noise and re-evaluates the indicator.
pub fn seed_mean_error(
    config: &RunConfig,
    kind: IndicatorKind,
    grid: &SamplingGrid,
) -> Result<MetricsReport> {
    let spec = config.build_source()?;
    let physics = config.physics()?;
    let dirs = config.direction_set()?;
    let freqs = config.frequencies()?;
    let clean = synthesize_dataset(&spec, &physics, &dirs, &freqs)?;
    let reference = reference_for(kind, &spec);
    let opts = EvalOptions {
        allow_full_volume: config.full_volume,
        ..Default::default()
    };
    let n = if config.noise_delta == 0.0 {
        1
    } else {
        config.seeds_count
    };
    let mut errs = Vec::with_capacity(n);
    for i in 0..n {
        let seed = config.seed + i as u64;
        let noisy = apply_noise(&clean, config.noise_delta, seed)?;
        let f = match kind {
            IndicatorKind::Rho => {
                let charge = config.source.charge_density()?;
                indicator_rho_with(&noisy, &charge, grid, &opts)?
            }
            other => indicator_by_kind(&noisy, grid, other, &opts)?,
        };
        errs.push(relative_l2_report(&f, &reference, config.error_mode)?.e_f);
    }
    let mean = errs.iter().sum::<f64>() / n as f64;
    let var = if n > 1 {
        errs.iter().map(|e| (e - mean) * (e - mean)).sum::<f64>() / (n - 1) as f64
    } else {
        0.0
    };
    Ok(MetricsReport {
        e_f: mean,
        e_f_std: var.sqrt(),
        n_seeds: n,
        per_component: Vec::new(),
        sup_error_interior: None,
        threshold_fraction: None,
        error_mode: config.error_mode,
        direction_count: config.direction_count,
        freq_count: config.freq_count,
        freq_delta: config.freq_delta,
        noise_delta: config.noise_delta,
        seed: config.seed,
    })
}

/// A sweep result: one ordered axis, e_F seed means with deviations.
#[derive(Debug, Clone)]
pub struct SweepResult {
    pub axis: TrendAxis,
    pub values: Vec<f64>,
    pub reports: Vec<MetricsReport>,
    pub verdict: TrendVerdict,
}

/// Runs the configured indicator over a list of values on one axis and
/// checks the expected accuracy trend. Writes `sweep_<axis>.csv`.
pub fn cmd_sweep(config: &RunConfig, axis: TrendAxis, values: &[f64]) -> Result<SweepResult> {
    if values.is_empty() {
        return Err(Error::invalid("sweep needs at least one axis value"));
    }
    let kind = *config
        .indicators
        .first()
        .ok_or_else(|| Error::Config("sweep needs an indicator".into()))?;
    let grids = config.grids()?;
    let (_, grid) = grids
        .first()
        .ok_or_else(|| Error::Config("sweep needs a grid".into()))?;
    let mut reports = Vec::with_capacity(values.len());
    for v in values {
        let mut cell = config.clone();
        match axis {
            TrendAxis::DirectionCount => cell.direction_count = *v as usize,
            TrendAxis::OmegaMax => {
                let count = (v / cell.freq_delta).round() as usize;
                if count == 0 {
                    return Err(Error::invalid(format!("omega_max {v} below one step")));
                }
                cell.freq_count = count;
            }
            TrendAxis::DeltaOmega => {
                let omega_max = config.freq_count as f64 * config.freq_delta;
                cell.freq_delta = *v;
                cell.freq_count = (omega_max / v).round() as usize;
            }
            TrendAxis::NoiseDelta => cell.noise_delta = *v,
        }
        reports.push(seed_mean_error(&cell, kind, grid)?);
    }
    let verdict = if reports.len() >= 2 {
        trend_report(&reports, axis)?
    } else {
        TrendVerdict::MonotoneDecreasing
    };
    let mut csv = String::from("axis,value,e_f,e_f_std,n_seeds\n");
    for (v, r) in values.iter().zip(&reports) {
        csv.push_str(&format!(
            "{},{},{},{},{}\n",
            axis.as_str(),
            fmt_f64(*v),
            fmt_f64(r.e_f),
            fmt_f64(r.e_f_std),
            r.n_seeds
        ));
    }
    csv.push_str(&format!("# verdict: {:?}\n", verdict));
    write_atomic(
        &config.output_dir.join(format!("sweep_{}.csv", axis.as_str())),
        csv.as_bytes(),
    )?;
    Ok(SweepResult {
        axis,
        values: values.to_vec(),
        reports,
        verdict,
    })
}

/// Resolution/seed profile for the benchmark table runs.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TableProfile {
    /// 10 seeds on the h = 0.01 grid.
    Full,
    /// 3 seeds on the h = 0.02 grid (the continuous-integration budget);
    /// comparison tolerances widen from ±0.02/±0.015 to ±0.03.
    Ci,
}

impl TableProfile {
    pub fn seeds(&self) -> usize {
        match self {
            TableProfile::Full => 10,
            TableProfile::Ci => 3,
        }
    }

    pub fn grid_h(&self) -> f64 {
        match self {
            TableProfile::Full => 0.01,
            TableProfile::Ci => 0.02,
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "full" => Ok(TableProfile::Full),
            "ci" => Ok(TableProfile::Ci),
            other => Err(Error::Config(format!("unknown profile `{other}`"))),
        }
    }
}

/// e_F grid over two swept parameters, with per-row/column trend verdicts.
#[derive(Debug, Clone)]
pub struct TableResult {
    pub row_label: &'static str,
    pub col_label: &'static str,
    pub rows: Vec<f64>,
    pub cols: Vec<f64>,
    /// `cells[r][c]`
    pub cells: Vec<Vec<MetricsReport>>,
    pub row_verdicts: Vec<TrendVerdict>,
    pub col_verdicts: Vec<TrendVerdict>,
}

impl TableResult {
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("{}\\{}", self.row_label, self.col_label));
        for c in &self.cols {
            out.push_str(&format!(",{}", fmt_f64(*c)));
        }
        out.push('\n');
        for (r, row) in self.rows.iter().zip(&self.cells) {
            out.push_str(&fmt_f64(*r));
            for cell in row {
                out.push_str(&format!(",{:.4}", cell.e_f));
            }
            out.push('\n');
        }
        for (r, v) in self.rows.iter().zip(&self.row_verdicts) {
            out.push_str(&format!("# row {} = {}: {:?}\n", self.row_label, fmt_f64(*r), v));
        }
        for (c, v) in self.cols.iter().zip(&self.col_verdicts) {
            out.push_str(&format!("# col {} = {}: {:?}\n", self.col_label, fmt_f64(*c), v));
        }
        out
    }

    pub fn all_monotone(&self) -> bool {
        self.row_verdicts
            .iter()
            .chain(&self.col_verdicts)
            .all(|v| *v == TrendVerdict::MonotoneDecreasing)
    }
}

fn elastic_benchmark_config(profile: TableProfile, base_seed: u64) -> RunConfig {
    let mut cfg = RunConfig::defaults(ProblemKind::Elastic2);
    cfg.source.name = "example_two".into();
    cfg.grid_h = profile.grid_h();
    cfg.seeds_count = profile.seeds();
    cfg.seed = base_seed;
    cfg.error_mode = ErrorMode::RealPart;
    cfg
}

/// Full-data benchmark over direction counts and top frequencies
/// (rows ω_Λ ∈ {30,40,50}, columns L ∈ {51,101,151,201}, δ = 0.3).
pub fn table_accuracy_vs_directions(
    profile: TableProfile,
    base_seed: u64,
) -> Result<TableResult> {
    let rows = vec![30.0, 40.0, 50.0];
    let cols = vec![51.0, 101.0, 151.0, 201.0];
    let base = elastic_benchmark_config(profile, base_seed);
    let grid = base.grids()?.remove(0).1;
    let mut cells = Vec::new();
    for omega_max in &rows {
        let mut row = Vec::new();
        for l in &cols {
            let mut cfg = base.clone();
            cfg.direction_count = *l as usize;
            cfg.freq_count = (omega_max / cfg.freq_delta).round() as usize;
            row.push(seed_mean_error(&cfg, IndicatorKind::F2d, &grid)?);
        }
        cells.push(row);
    }
    finish_table(
        "omega_max",
        "L",
        rows,
        cols,
        cells,
        TrendAxis::DirectionCount,
        TrendAxis::OmegaMax,
    )
}

/// Full-data benchmark over frequency steps and noise levels
/// (rows Δω ∈ {1/2,1/4,1/8}, columns δ ∈ {0.05,0.10,0.15,0.20};
/// L = 51, ω_Λ = 40).
pub fn table_accuracy_vs_noise(profile: TableProfile, base_seed: u64) -> Result<TableResult> {
    let rows = vec![0.5, 0.25, 0.125];
    let cols = vec![0.05, 0.10, 0.15, 0.20];
    let base = elastic_benchmark_config(profile, base_seed);
    let grid = base.grids()?.remove(0).1;
    let mut cells = Vec::new();
    for delta_omega in &rows {
        let mut row = Vec::new();
        for noise in &cols {
            let mut cfg = base.clone();
            cfg.freq_delta = *delta_omega;
            cfg.freq_count = (40.0 / delta_omega).round() as usize;
            cfg.noise_delta = *noise;
            row.push(seed_mean_error(&cfg, IndicatorKind::F2d, &grid)?);
        }
        cells.push(row);
    }
    finish_table(
        "delta_omega",
        "delta",
        rows,
        cols,
        cells,
        TrendAxis::NoiseDelta,
        TrendAxis::DeltaOmega,
    )
}

fn finish_table(
    row_label: &'static str,
    col_label: &'static str,
    rows: Vec<f64>,
    cols: Vec<f64>,
    cells: Vec<Vec<MetricsReport>>,
    row_axis: TrendAxis,
    col_axis: TrendAxis,
) -> Result<TableResult> {
    let mut row_verdicts = Vec::new();
    for row in &cells {
        row_verdicts.push(trend_report(row, row_axis)?);
    }
    let mut col_verdicts = Vec::new();
    for c in 0..cols.len() {
        let column: Vec<MetricsReport> = cells.iter().map(|row| row[c].clone()).collect();
        col_verdicts.push(trend_report(&column, col_axis)?);
    }
    Ok(TableResult {
        row_label,
        col_label,
        rows,
        cols,
        cells,
        row_verdicts,
        col_verdicts,
    })
}

/// One-shot reproduction of both benchmark tables; writes
/// `table_directions.csv` and `table_noise.csv` into `out_dir`.
pub fn cmd_tables(
    profile: TableProfile,
    base_seed: u64,
    out_dir: &Path,
) -> Result<(TableResult, TableResult)> {
    let t1 = table_accuracy_vs_directions(profile, base_seed)?;
    write_atomic(&out_dir.join("table_directions.csv"), t1.to_csv().as_bytes())?;
    let t2 = table_accuracy_vs_noise(profile, base_seed)?;
    write_atomic(&out_dir.join("table_noise.csv"), t2.to_csv().as_bytes())?;
    Ok((t1, t2))
}

/// Renders one component of a stored field (see `io::figure`).
pub fn cmd_figure(
    field_path: &Path,
    component: usize,
    scalar: PlotScalar,
    range: Option<(f64, f64)>,
) -> Result<FigureOutput> {
    let f = field::read_field(field_path)?;
    let stem = field_path.with_extension("");
    let stem_name = format!(
        "{}_c{component}_{}",
        stem.file_name().and_then(|s| s.to_str()).unwrap_or("field"),
        scalar.as_str()
    );
    let stem = stem.with_file_name(stem_name);
    write_figure(&f, component, scalar, range, &stem)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tmp_config(dir: &Path) -> RunConfig {
        let mut cfg = RunConfig::defaults(ProblemKind::Elastic2);
        cfg.direction_count = 9;
        cfg.freq_count = 12;
        cfg.grid_h = 0.5;
        cfg.seeds_count = 2;
        cfg.output_dir = dir.to_path_buf();
        cfg
    }

    #[test]
    fn simulate_reconstruct_metrics_pipeline() {
        let dir = std::env::temp_dir().join("farfield-driver-test");
        std::fs::remove_dir_all(&dir).ok();
        let mut cfg = tmp_config(&dir);
        cfg.indicators = vec![IndicatorKind::F2d, IndicatorKind::P2d];

        let sim = cmd_simulate(&cfg).unwrap();
        assert_eq!(sim.record_count, 9 * 12);
        assert!(sim.clean_path.exists() && sim.noisy_path.exists());

        let fields = cmd_reconstruct(&cfg, &sim.noisy_path).unwrap();
        assert_eq!(fields.len(), 2);

        let row = cmd_metrics(&cfg, &fields[0]).unwrap();
        assert!(row.e_f.is_finite());
        assert!(dir.join("metrics.csv").exists());
        std::fs::remove_dir_all(&dir).ok();
    }

    #[test]
    fn simulate_is_byte_identical_for_fixed_seed() {
        let dir = std::env::temp_dir().join("farfield-driver-test-det");
        std::fs::remove_dir_all(&dir).ok();
        let cfg = tmp_config(&dir);
        let a = cmd_simulate(&cfg).unwrap();
        let first = std::fs::read(&a.noisy_path).unwrap();
        let b = cmd_simulate(&cfg).unwrap();
        let second = std::fs::read(&b.noisy_path).unwrap();
        assert_eq!(first, second);
        std::fs::remove_dir_all(&dir).ok();
    }

    #[test]
    fn mismatched_dataset_is_rejected() {
        let dir = std::env::temp_dir().join("farfield-driver-test-mismatch");
        std::fs::remove_dir_all(&dir).ok();
        let cfg = tmp_config(&dir);
        let sim = cmd_simulate(&cfg).unwrap();
        let mut em = RunConfig::defaults(ProblemKind::Em3);
        em.output_dir = dir.clone();
        match cmd_reconstruct(&em, &sim.noisy_path) {
            Err(Error::DimensionMismatch(_)) => {}
            other => panic!("expected dimension mismatch, got {other:?}"),
        }
        std::fs::remove_dir_all(&dir).ok();
    }

    #[test]
    fn empty_indicator_list_is_a_noop() {
        let dir = std::env::temp_dir().join("farfield-driver-test-empty");
        std::fs::remove_dir_all(&dir).ok();
        let mut cfg = tmp_config(&dir);
        cfg.indicators = Vec::new();
        let sim = cmd_simulate(&cfg).unwrap();
        let fields = cmd_reconstruct(&cfg, &sim.noisy_path).unwrap();
        assert!(fields.is_empty());
        std::fs::remove_dir_all(&dir).ok();
    }

    #[test]
    fn sweep_produces_trend_and_csv() {
        let dir = std::env::temp_dir().join("farfield-driver-test-sweep");
        std::fs::remove_dir_all(&dir).ok();
        let mut cfg = tmp_config(&dir);
        cfg.seeds_count = 2;
        let sweep = cmd_sweep(&cfg, TrendAxis::DirectionCount, &[7.0, 15.0]).unwrap();
        assert_eq!(sweep.reports.len(), 2);
        assert!(dir.join("sweep_L.csv").exists());
        std::fs::remove_dir_all(&dir).ok();
    }
}
