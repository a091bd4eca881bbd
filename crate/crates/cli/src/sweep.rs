//! Parameter sweeps over (mass × disorder strength) with per-realization and
//! averaged records, written in a fixed order.

use std::io::{self, Write};
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;

use ncbloch_core::invariants::{
    chern_even, chern_odd, dirac_phase, fredholm_index_even, fredholm_index_odd,
    uniform_x0_grid, IndexOptions, InvariantResult,
};
use ncbloch_core::clifford::build_clifford_rep;
use ncbloch_core::lattice::{build_hamiltonian, gallery_model, DisorderKind, DisorderSpec};
use ncbloch_core::nccalc::{localization_profile, TraceStrategy};
use ncbloch_core::spectral::{default_tolerance, fermi_projector, flat_band_unitary, hamiltonian_sign};
use ncbloch_core::{c64, Boundary, DenseOperator, Error};

use crate::config::{InvariantChoice, SweepConfig};

pub const CODE_VERSION: &str = concat!("ncbloch ", env!("CARGO_PKG_VERSION"));

/// CSV column order; matches the JSON field order.
pub const CSV_COLUMNS: [&str; 17] = [
    "model",
    "m",
    "L",
    "disorder",
    "lambda",
    "realization",
    "invariant",
    "status",
    "value_re",
    "value_im",
    "nearest_integer",
    "deviation",
    "std_error",
    "localization_rate",
    "wall_time_ms",
    "seed",
    "code_version",
];

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(untagged)]
pub enum Realization {
    Index(u64),
    Label(&'static str),
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ResultRecord {
    pub model: String,
    pub m: f64,
    #[serde(rename = "L")]
    pub size: usize,
    pub disorder: &'static str,
    pub lambda: f64,
    pub realization: Realization,
    pub invariant: &'static str,
    /// "ok", "gapless" or "error".
    pub status: &'static str,
    pub value_re: Option<f64>,
    pub value_im: Option<f64>,
    pub nearest_integer: Option<i64>,
    pub deviation: Option<f64>,
    pub std_error: Option<f64>,
    /// Decay rate of the ground-state datum; null when it does not decay
    /// measurably (including the infinite rate of a site-diagonal datum).
    pub localization_rate: Option<f64>,
    pub wall_time_ms: Option<f64>,
    pub seed: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub message: Option<String>,
    pub code_version: &'static str,
}

impl ResultRecord {
    pub fn is_error(&self) -> bool {
        self.status == "error"
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("records serialize")
    }

    pub fn to_csv(&self) -> String {
        let num = |v: Option<f64>| v.map(|x| serde_json::to_string(&x).expect("finite")).unwrap_or_default();
        let realization = match &self.realization {
            Realization::Index(i) => i.to_string(),
            Realization::Label(s) => s.to_string(),
        };
        [
            self.model.clone(),
            num(Some(self.m)),
            self.size.to_string(),
            self.disorder.to_string(),
            num(Some(self.lambda)),
            realization,
            self.invariant.to_string(),
            self.status.to_string(),
            num(self.value_re),
            num(self.value_im),
            self.nearest_integer.map(|v| v.to_string()).unwrap_or_default(),
            num(self.deviation),
            num(self.std_error),
            num(self.localization_rate),
            num(self.wall_time_ms),
            self.seed.to_string(),
            self.code_version.to_string(),
        ]
        .join(",")
    }
}

pub fn invariant_name(c: InvariantChoice) -> &'static str {
    match c {
        InvariantChoice::ChernEven => "chern_even",
        InvariantChoice::ChernOdd => "chern_odd",
        InvariantChoice::IndexEven => "index_even",
        InvariantChoice::IndexOdd => "index_odd",
        InvariantChoice::All => "all",
    }
}

#[derive(Clone, Debug)]
enum Outcome {
    Ok { result: InvariantResult, rate: f64 },
    Gapless(String),
    Failed(String),
}

fn classify(e: Error) -> Outcome {
    match e {
        Error::FermiLevelOnSpectrum { .. } | Error::Gapless(_) | Error::NotInvertible { .. } => {
            Outcome::Gapless(e.to_string())
        }
        other => Outcome::Failed(other.to_string()),
    }
}

/// Ground-state datum of one realization: P for even models, the reduced
/// flat-band unitary for chiral ones.
fn ground_state(
    cfg: &SweepConfig,
    m: f64,
    dis: &DisorderSpec,
    index: u64,
    boundary: Boundary,
    odd: bool,
) -> Result<DenseOperator, Error> {
    let spec = gallery_model(cfg.gallery(m), cfg.size, boundary)?;
    let h = build_hamiltonian(&spec, dis, index)?;
    let tol = default_tolerance(&h);
    if odd {
        let q = hamiltonian_sign(&h, tol)?;
        let cs = spec
            .chiral()
            .ok_or_else(|| Error::InvalidModel("model has no chiral structure".into()))?;
        Ok(flat_band_unitary(&q, cs)?.reduced)
    } else {
        fermi_projector(&h, 0.0, tol)
    }
}

fn evaluate(
    cfg: &SweepConfig,
    m: f64,
    dis: &DisorderSpec,
    index: u64,
    which: InvariantChoice,
) -> Result<(InvariantResult, f64), Error> {
    let odd = matches!(which, InvariantChoice::ChernOdd | InvariantChoice::IndexOdd);
    let local = matches!(which, InvariantChoice::ChernEven | InvariantChoice::ChernOdd);
    // The bulk-trace strategy works with true positions, so its Hamiltonians
    // live on an open box; everything else uses the torus.
    let boundary = match cfg.strategy {
        TraceStrategy::OpenBulk { .. } if local => Boundary::Open,
        _ => Boundary::Periodic,
    };
    let datum = ground_state(cfg, m, dis, index, boundary, odd)?;
    let rate = localization_profile(&datum).rate;
    let result = match which {
        InvariantChoice::ChernEven => chern_even(&datum, cfg.strategy)?,
        InvariantChoice::ChernOdd => chern_odd(&datum, cfg.strategy)?,
        InvariantChoice::IndexEven | InvariantChoice::IndexOdd => {
            let d = datum.geometry().dim;
            let rep = build_clifford_rep(d)?;
            let grid = uniform_x0_grid(d, cfg.x0_grid);
            let mut sum = 0i64;
            for x0 in &grid {
                let f = dirac_phase(datum.geometry(), x0, &rep)?;
                let r = if odd {
                    fredholm_index_odd(&datum, &f, IndexOptions::adaptive())?
                } else {
                    fredholm_index_even(&datum, &f, IndexOptions::adaptive())?
                };
                sum += r.index;
            }
            let mut r = InvariantResult::single(c64::new(sum as f64 / grid.len() as f64, 0.0));
            r.x0_samples = grid.len();
            r
        }
        InvariantChoice::All => unreachable!("expanded during validation"),
    };
    Ok((result, rate))
}

struct Point {
    m: f64,
    lambda: f64,
}

fn disorder_label(k: DisorderKind) -> &'static str {
    match k {
        DisorderKind::Bond => "bond",
        DisorderKind::Onsite => "onsite",
    }
}

fn record(cfg: &SweepConfig, p: &Point, which: InvariantChoice, realization: Realization) -> ResultRecord {
    ResultRecord {
        model: cfg.model.clone(),
        m: p.m,
        size: cfg.size,
        disorder: disorder_label(cfg.kind),
        lambda: p.lambda,
        realization,
        invariant: invariant_name(which),
        status: "ok",
        value_re: None,
        value_im: None,
        nearest_integer: None,
        deviation: None,
        std_error: None,
        localization_rate: None,
        wall_time_ms: None,
        seed: cfg.seed,
        message: None,
        code_version: CODE_VERSION,
    }
}

fn fill(rec: &mut ResultRecord, r: &InvariantResult, rate: f64, std_error: bool) {
    rec.value_re = Some(r.value.re);
    rec.value_im = Some(r.value.im);
    rec.nearest_integer = Some(r.nearest_integer);
    rec.deviation = Some(r.deviation);
    rec.std_error = std_error.then_some(r.std_error);
    rec.localization_rate = rate.is_finite().then_some(rate);
}

/// Records for one grid point: every realization in index order, then the mean.
fn point_records(cfg: &SweepConfig, p: &Point, which: InvariantChoice) -> Vec<ResultRecord> {
    let dis = DisorderSpec::new(cfg.kind, p.lambda, cfg.seed).expect("validated strength");
    let outcomes: Vec<(Outcome, f64)> = (0..cfg.realizations as u64)
        .into_par_iter()
        .map(|i| {
            let start = Instant::now();
            let o = match evaluate(cfg, p.m, &dis, i, which) {
                Ok((result, rate)) => Outcome::Ok { result, rate },
                Err(e) => classify(e),
            };
            (o, start.elapsed().as_secs_f64() * 1e3)
        })
        .collect();
    let mut out = Vec::with_capacity(outcomes.len() + 1);
    for (i, (o, ms)) in outcomes.iter().enumerate() {
        let mut rec = record(cfg, p, which, Realization::Index(i as u64));
        rec.wall_time_ms = cfg.output.timing.then_some(*ms);
        match o {
            Outcome::Ok { result, rate } => fill(&mut rec, result, *rate, false),
            Outcome::Gapless(msg) => {
                rec.status = "gapless";
                rec.message = Some(msg.clone());
            }
            Outcome::Failed(msg) => {
                rec.status = "error";
                rec.message = Some(msg.clone());
            }
        }
        out.push(rec);
    }
    let mut mean = record(cfg, p, which, Realization::Label("mean"));
    mean.wall_time_ms = cfg
        .output
        .timing
        .then(|| outcomes.iter().map(|(_, ms)| ms).sum());
    let ok: Vec<(InvariantResult, f64)> = outcomes
        .iter()
        .filter_map(|(o, _)| match o {
            Outcome::Ok { result, rate } => Some((*result, *rate)),
            _ => None,
        })
        .collect();
    if ok.len() == outcomes.len() {
        let results: Vec<InvariantResult> = ok.iter().map(|(r, _)| *r).collect();
        let agg = InvariantResult::mean(&results).expect("at least one realization");
        let rate = ok.iter().map(|(_, r)| *r).fold(f64::INFINITY, f64::min);
        fill(&mut mean, &agg, rate, true);
    } else if outcomes.iter().any(|(o, _)| matches!(o, Outcome::Failed(_))) {
        mean.status = "error";
        mean.message = Some("a realization failed".into());
    } else {
        mean.status = "gapless";
        mean.message = Some(format!(
            "{} of {} realizations gapless",
            outcomes.len() - ok.len(),
            outcomes.len()
        ));
    }
    out.push(mean);
    out
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct SweepSummary {
    pub records: usize,
    pub gapless: usize,
    pub errors: usize,
}

/// Runs the grid (mass outermost, then λ, then invariant) and hands each
/// record to `sink` in that order. Work inside a batch of points runs on the
/// current rayon pool; output order never depends on scheduling.
///
/// faer's global parallelism is switched to sequential for the duration, since
/// its blocked kernels reduce in an order that depends on the pool size.
pub fn run_sweep(
    cfg: &SweepConfig,
    sink: impl FnMut(&ResultRecord) -> io::Result<()>,
) -> io::Result<SweepSummary> {
    let previous = faer::get_global_parallelism();
    faer::set_global_parallelism(faer::Par::Seq);
    let out = sweep_points(cfg, sink);
    faer::set_global_parallelism(previous);
    out
}

fn sweep_points(
    cfg: &SweepConfig,
    mut sink: impl FnMut(&ResultRecord) -> io::Result<()>,
) -> io::Result<SweepSummary> {
    let mut tasks = Vec::new();
    for &m in &cfg.masses {
        for &lambda in &cfg.lambdas {
            for &which in &cfg.invariants {
                tasks.push((Point { m, lambda }, which));
            }
        }
    }
    let batch = rayon::current_num_threads().max(1);
    let mut summary = SweepSummary::default();
    for chunk in tasks.chunks(batch) {
        let records: Vec<Vec<ResultRecord>> = chunk
            .par_iter()
            .map(|(p, which)| point_records(cfg, p, *which))
            .collect();
        for rec in records.iter().flatten() {
            summary.records += 1;
            summary.gapless += usize::from(rec.status == "gapless");
            summary.errors += usize::from(rec.is_error());
            sink(rec)?;
        }
    }
    Ok(summary)
}

/// Writes JSONL (or CSV) to `out`, and a CSV copy to `csv` when given.
pub fn write_sweep(
    cfg: &SweepConfig,
    out: &mut dyn Write,
    mut csv: Option<&mut dyn Write>,
) -> io::Result<SweepSummary> {
    let as_csv = cfg.output.format == crate::config::OutputFormat::Csv;
    if as_csv {
        writeln!(out, "{}", CSV_COLUMNS.join(","))?;
    }
    if let Some(w) = csv.as_deref_mut() {
        writeln!(w, "{}", CSV_COLUMNS.join(","))?;
    }
    let summary = run_sweep(cfg, |rec| {
        if as_csv {
            writeln!(out, "{}", rec.to_csv())?;
        } else {
            writeln!(out, "{}", rec.to_json())?;
        }
        if let Some(w) = csv.as_deref_mut() {
            writeln!(w, "{}", rec.to_csv())?;
        }
        out.flush()
    })?;
    Ok(summary)
}
