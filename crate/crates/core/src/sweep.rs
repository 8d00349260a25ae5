//! Grid evaluation over `(p, T)` and the CSV/JSON row format consumed by the
//! plotting scripts.

use std::fmt;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::bounds::{full_report, UncertaintyReport};
use crate::channel::unruh_channel;
use crate::error::{Error, Result};
use crate::measurement::{Observable, ObservableSpec, PauliAxis};
use crate::state::{bell_diagonal_from_p, werner, x_state, DensityMatrix};

/// Column order of the CSV contract.
pub const CSV_HEADER: &str =
    "family,p,T,omega,c,mu_bound,s_cond_ab,berta_bound,delta,adabi_bound,lhs,qsk_rate";

/// Temperatures drawn as separate curves in the line-plot panels.
pub const LINE_TEMPERATURES: [f64; 5] = [0.1, 0.5, 1.0, 2.0, 10.0];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum StateFamily {
    BellDiagonal,
    Werner,
    XState,
}

impl StateFamily {
    pub const ALL: [StateFamily; 3] = [
        StateFamily::BellDiagonal,
        StateFamily::Werner,
        StateFamily::XState,
    ];

    pub fn state(self, p: f64) -> Result<DensityMatrix> {
        match self {
            StateFamily::BellDiagonal => bell_diagonal_from_p(p),
            StateFamily::Werner => werner(p),
            StateFamily::XState => x_state(p),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            StateFamily::BellDiagonal => "bell-diagonal",
            StateFamily::Werner => "werner",
            StateFamily::XState => "x-state",
        }
    }
}

impl fmt::Display for StateFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for StateFamily {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "bell-diagonal" | "bell_diagonal" | "bell" => Ok(StateFamily::BellDiagonal),
            "werner" => Ok(StateFamily::Werner),
            "x-state" | "x_state" | "x" => Ok(StateFamily::XState),
            _ => Err(Error::UnknownLabel(s.to_string())),
        }
    }
}

impl Serialize for StateFamily {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Csv,
    Json,
}

impl FromStr for OutputFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "csv" => Ok(OutputFormat::Csv),
            "json" => Ok(OutputFormat::Json),
            _ => Err(Error::UnknownLabel(s.to_string())),
        }
    }
}

#[derive(Debug, Clone)]
pub struct SweepConfig {
    pub family: StateFamily,
    pub p_grid: Vec<f64>,
    pub t_grid: Vec<f64>,
    pub omega: f64,
    pub q_axis: ObservableSpec,
    pub r_axis: ObservableSpec,
    pub output_path: Option<PathBuf>,
    pub format: OutputFormat,
}

impl SweepConfig {
    pub fn new(family: StateFamily, p_grid: Vec<f64>, t_grid: Vec<f64>) -> Self {
        Self {
            family,
            p_grid,
            t_grid,
            omega: 1.0,
            q_axis: ObservableSpec::Pauli(PauliAxis::X),
            r_axis: ObservableSpec::Pauli(PauliAxis::Z),
            output_path: None,
            format: OutputFormat::Csv,
        }
    }

    pub fn validate(&self) -> Result<()> {
        check_grid("p", &self.p_grid)?;
        check_grid("T", &self.t_grid)?;
        if let Some(p) = self.p_grid.iter().find(|p| !(0.0..=1.0).contains(*p)) {
            return Err(Error::Domain(format!("probability {p} is outside [0, 1]")));
        }
        if let Some(t) = self.t_grid.iter().find(|t| !t.is_finite() || **t < 0.0) {
            return Err(Error::Domain(format!(
                "temperature {t} must be finite and >= 0"
            )));
        }
        if !(self.omega.is_finite() && self.omega > 0.0) {
            return Err(Error::Domain(format!(
                "frequency {} must be positive",
                self.omega
            )));
        }
        Ok(())
    }

    pub fn observables(&self) -> Result<(Observable, Observable)> {
        Ok((self.q_axis.observable()?, self.r_axis.observable()?))
    }
}

fn check_grid(name: &str, grid: &[f64]) -> Result<()> {
    if grid.is_empty() {
        return Err(Error::Domain(format!("{name} grid is empty")));
    }
    if grid.iter().any(|v| !v.is_finite()) {
        return Err(Error::Domain(format!("{name} grid has non-finite values")));
    }
    if grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::Domain(format!(
            "{name} grid is not strictly increasing"
        )));
    }
    Ok(())
}

fn snap(v: f64) -> f64 {
    (v * 1e12).round() / 1e12
}

/// `min, min + step, …` up to and including `max` (within rounding).
///
/// Values are snapped to 12 decimals so that e.g. `0.3` prints as `0.3`.
pub fn linear_grid(min: f64, max: f64, step: f64) -> Result<Vec<f64>> {
    if !(step > 0.0 && step.is_finite()) {
        return Err(Error::Domain(format!("grid step {step} must be positive")));
    }
    if !(min.is_finite() && max.is_finite()) || max < min {
        return Err(Error::Domain(format!(
            "grid bounds [{min}, {max}] are invalid"
        )));
    }
    let count = ((max - min) / step + 1e-9).floor() as usize + 1;
    Ok((0..count).map(|k| snap(min + k as f64 * step)).collect())
}

/// `n` evenly spaced points from `min` to `max` inclusive.
pub fn linspace(min: f64, max: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![min],
        _ => {
            let step = (max - min) / (n - 1) as f64;
            (0..n)
                .map(|k| {
                    if k == n - 1 {
                        max
                    } else {
                        snap(min + k as f64 * step)
                    }
                })
                .collect()
        }
    }
}

/// One grid point of a sweep.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ResultRow {
    pub family: StateFamily,
    pub p: f64,
    #[serde(rename = "T")]
    pub t: f64,
    pub omega: f64,
    pub c: f64,
    pub mu_bound: f64,
    pub s_cond_ab: f64,
    pub berta_bound: f64,
    pub delta: f64,
    pub adabi_bound: f64,
    pub lhs: f64,
    pub qsk_rate: f64,
}

impl ResultRow {
    pub fn from_report(
        family: StateFamily,
        p: f64,
        t: f64,
        omega: f64,
        report: &UncertaintyReport,
    ) -> Self {
        Self {
            family,
            p,
            t,
            omega,
            c: report.c,
            mu_bound: report.mu_bound,
            s_cond_ab: report.s_cond_ab,
            berta_bound: report.berta_bound,
            delta: report.delta,
            adabi_bound: report.adabi_bound,
            lhs: report.lhs,
            qsk_rate: report.qsk_lower,
        }
    }

    pub fn to_csv_line(&self) -> String {
        let values = [
            self.p,
            self.t,
            self.omega,
            self.c,
            self.mu_bound,
            self.s_cond_ab,
            self.berta_bound,
            self.delta,
            self.adabi_bound,
            self.lhs,
            self.qsk_rate,
        ];
        let mut line = self.family.name().to_string();
        for v in values {
            line.push(',');
            line.push_str(&format_significant(v));
        }
        line
    }
}

/// `%.9g`-style formatting: nine significant digits, trailing zeros trimmed,
/// scientific notation outside `1e-5 ≤ |v| < 1e9`.
pub fn format_significant(v: f64) -> String {
    if v == 0.0 {
        return "0".to_string();
    }
    if !v.is_finite() {
        return v.to_string();
    }
    let sci = format!("{v:.8e}");
    let (mantissa, exponent) = sci
        .split_once('e')
        .expect("scientific format has an exponent");
    let exponent: i32 = exponent.parse().expect("integer exponent");
    if !(-5..9).contains(&exponent) {
        return format!("{}e{}", trim_zeros(mantissa), exponent);
    }
    let decimals = (8 - exponent) as usize;
    trim_zeros(&format!("{v:.decimals$}")).to_string()
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// Full report for one point, the shared path of `report` and `sweep`.
pub fn evaluate_point(
    family: StateFamily,
    p: f64,
    t: f64,
    omega: f64,
    q: &Observable,
    r: &Observable,
) -> Result<UncertaintyReport> {
    let state = family.state(p)?;
    let channel = unruh_channel(omega, t)?;
    full_report(&state, Some(&channel), q, r)
}

fn run_in_pool<T: Send>(jobs: Option<usize>, f: impl FnOnce() -> T + Send) -> Result<T> {
    match jobs {
        None => Ok(f()),
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n.max(1))
                .build()
                .map_err(|e| Error::Domain(format!("cannot start worker pool: {e}")))?;
            Ok(pool.install(f))
        }
    }
}

/// Rows for every `(p, T)` pair, sorted by `p` then `T`.
///
/// Grid points are evaluated in parallel; `collect` on an indexed parallel
/// iterator keeps input order, so output is independent of scheduling.
pub fn evaluate(config: &SweepConfig, jobs: Option<usize>) -> Result<Vec<ResultRow>> {
    config.validate()?;
    let (q, r) = config.observables()?;
    let points: Vec<(f64, f64)> = config
        .p_grid
        .iter()
        .flat_map(|&p| config.t_grid.iter().map(move |&t| (p, t)))
        .collect();
    run_in_pool(jobs, || {
        points
            .par_iter()
            .map(|&(p, t)| {
                let report = evaluate_point(config.family, p, t, config.omega, &q, &r)?;
                Ok(ResultRow::from_report(
                    config.family,
                    p,
                    t,
                    config.omega,
                    &report,
                ))
            })
            .collect::<Result<Vec<_>>>()
    })?
}

pub fn write_csv<W: Write>(rows: &[ResultRow], mut out: W) -> Result<()> {
    writeln!(out, "{CSV_HEADER}")?;
    for row in rows {
        writeln!(out, "{}", row.to_csv_line())?;
    }
    out.flush()?;
    Ok(())
}

pub fn write_json<W: Write>(rows: &[ResultRow], mut out: W) -> Result<()> {
    serde_json::to_writer_pretty(&mut out, rows)?;
    writeln!(out)?;
    out.flush()?;
    Ok(())
}

pub fn write_rows<W: Write>(rows: &[ResultRow], format: OutputFormat, out: W) -> Result<()> {
    match format {
        OutputFormat::Csv => write_csv(rows, out),
        OutputFormat::Json => write_json(rows, out),
    }
}

/// Which quantity a figure plots.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FigureQuantity {
    AdabiBound,
    QskRate,
}

impl FigureQuantity {
    pub fn column(self) -> &'static str {
        match self {
            FigureQuantity::AdabiBound => "adabi_bound",
            FigureQuantity::QskRate => "qsk_rate",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FigurePreset {
    pub name: &'static str,
    pub family: StateFamily,
    pub quantity: FigureQuantity,
}

pub const FIGURE_PRESETS: [FigurePreset; 6] = [
    FigurePreset {
        name: "fig2",
        family: StateFamily::BellDiagonal,
        quantity: FigureQuantity::AdabiBound,
    },
    FigurePreset {
        name: "fig3",
        family: StateFamily::BellDiagonal,
        quantity: FigureQuantity::QskRate,
    },
    FigurePreset {
        name: "fig4",
        family: StateFamily::Werner,
        quantity: FigureQuantity::AdabiBound,
    },
    FigurePreset {
        name: "fig5",
        family: StateFamily::Werner,
        quantity: FigureQuantity::QskRate,
    },
    FigurePreset {
        name: "fig6",
        family: StateFamily::XState,
        quantity: FigureQuantity::AdabiBound,
    },
    FigurePreset {
        name: "fig7",
        family: StateFamily::XState,
        quantity: FigureQuantity::QskRate,
    },
];

/// Temperature axis of a figure file: the 101-point contour axis on
/// `[0.01, 10]` merged with the line-plot temperatures.
pub fn figure_temperatures() -> Vec<f64> {
    let mut t = linspace(0.01, 10.0, 101);
    t.extend_from_slice(&LINE_TEMPERATURES);
    t.sort_by(f64::total_cmp);
    t.dedup();
    t
}

pub fn figure_config(preset: &FigurePreset) -> SweepConfig {
    SweepConfig::new(
        preset.family,
        linspace(0.0, 1.0, 101),
        figure_temperatures(),
    )
}

/// Writes `fig2.csv` … `fig7.csv` into `dir` and returns their paths.
pub fn write_figures(dir: &Path, jobs: Option<usize>) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(dir)?;
    let mut written = Vec::with_capacity(FIGURE_PRESETS.len());
    for preset in &FIGURE_PRESETS {
        let rows = evaluate(&figure_config(preset), jobs)?;
        let path = dir.join(format!("{}.csv", preset.name));
        let file = fs::File::create(&path)?;
        write_csv(&rows, std::io::BufWriter::new(file))?;
        written.push(path);
    }
    Ok(written)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn significant_digit_formatting() {
        assert_eq!(format_significant(0.0), "0");
        assert_eq!(format_significant(-0.0), "0");
        assert_eq!(format_significant(1.0), "1");
        assert_eq!(format_significant(0.1), "0.1");
        assert_eq!(format_significant(1.0 / 3.0), "0.333333333");
        assert_eq!(format_significant(-0.5487949406953985), "-0.548794941");
        assert_eq!(format_significant(1.6225562489182652), "1.62255625");
        assert_eq!(format_significant(9.9999999996), "10");
        assert_eq!(format_significant(123456789.4), "123456789");
        assert_eq!(format_significant(1e9), "1e9");
        assert_eq!(format_significant(2.5e-17), "2.5e-17");
        assert_eq!(format_significant(1e-5), "0.00001");
        assert_eq!(format_significant(0.0397887357729738), "0.0397887358");
    }

    #[test]
    fn grids() {
        let g = linear_grid(0.0, 1.0, 0.1).unwrap();
        assert_eq!(g.len(), 11);
        assert_eq!(g[3], 0.3);
        assert_eq!(*g.last().unwrap(), 1.0);
        assert!(linear_grid(0.0, 1.0, 0.0).is_err());
        assert!(linear_grid(1.0, 0.0, 0.1).is_err());
        let l = linspace(0.0, 1.0, 101);
        assert_eq!(l.len(), 101);
        assert_eq!(l[37], 0.37);
        assert_eq!(l[100], 1.0);
    }

    #[test]
    fn figure_axis() {
        let t = figure_temperatures();
        assert_eq!(t.len(), 105);
        assert_eq!(t[0], 0.01);
        assert_eq!(*t.last().unwrap(), 10.0);
        for v in LINE_TEMPERATURES {
            assert!(t.contains(&v));
        }
        assert!(t.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn config_validation() {
        let mut cfg = SweepConfig::new(StateFamily::Werner, vec![0.0, 0.5], vec![1.0]);
        assert!(cfg.validate().is_ok());
        cfg.p_grid = vec![0.5, 0.5];
        assert!(cfg.validate().is_err());
        cfg.p_grid = vec![0.5, 1.5];
        assert!(cfg.validate().is_err());
        cfg.p_grid = vec![];
        assert!(cfg.validate().is_err());
        cfg.p_grid = vec![0.5];
        cfg.t_grid = vec![-1.0, 1.0];
        assert!(cfg.validate().is_err());
    }

    #[test]
    fn rows_are_ordered_and_counted() {
        let cfg = SweepConfig::new(
            StateFamily::BellDiagonal,
            vec![0.0, 0.5, 1.0],
            vec![0.0, 1.0],
        );
        let rows = evaluate(&cfg, Some(2)).unwrap();
        assert_eq!(rows.len(), 6);
        let keys: Vec<(f64, f64)> = rows.iter().map(|r| (r.p, r.t)).collect();
        assert_eq!(
            keys,
            vec![
                (0.0, 0.0),
                (0.0, 1.0),
                (0.5, 0.0),
                (0.5, 1.0),
                (1.0, 0.0),
                (1.0, 1.0)
            ]
        );
    }

    #[test]
    fn csv_shape() {
        let cfg = SweepConfig::new(StateFamily::Werner, vec![1.0], vec![0.0]);
        let rows = evaluate(&cfg, None).unwrap();
        let mut buf = Vec::new();
        write_csv(&rows, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], CSV_HEADER);
        assert!(lines[1].starts_with("werner,1,0,1,0.5,1,"), "{}", lines[1]);
        assert!(!text.contains('\r'));
    }

    #[test]
    fn json_uses_contract_names() {
        let cfg = SweepConfig::new(StateFamily::XState, vec![0.5], vec![2.0]);
        let rows = evaluate(&cfg, None).unwrap();
        let mut buf = Vec::new();
        write_json(&rows, &mut buf).unwrap();
        let value: serde_json::Value = serde_json::from_slice(&buf).unwrap();
        assert_eq!(value[0]["family"], "x-state");
        assert_eq!(value[0]["T"], 2.0);
        assert!(value[0]["qsk_rate"].is_number());
    }

    #[test]
    fn family_parsing() {
        for f in StateFamily::ALL {
            assert_eq!(f.name().parse::<StateFamily>().unwrap(), f);
        }
        assert!("ghz".parse::<StateFamily>().is_err());
    }
}
