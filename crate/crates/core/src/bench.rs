//! Timing sweeps over one varied bound.
//!
//! Every run draws a fresh instance from a seed derived from
//! `(seed, value, trial)`, so all columns except `time_ms` are reproducible.

use std::fmt;
use std::io::{self, Write};
use std::str::FromStr;
use std::time::Instant;

use crate::domain::{MultiPoly, PolyBox};
use crate::error::{invalid, Error, Result};
use crate::gen::{random_multi_poly, random_sparse_poly, rng_from_seed};
use crate::multivariate::{mpoly_si_mk, mpoly_si_mk_int, pro_mpoly_si_mk, Bounds};
use crate::outcome::Outcome;
use crate::univariate::upoly_si_rat;
use crate::BlackBox;

/// The bound being swept.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Param {
    Terms,
    Degree,
    Magnitude,
    Denominator,
    Vars,
}

impl Param {
    fn apply(self, base: &Bounds, value: u64) -> Result<Bounds> {
        let mut b = *base;
        match self {
            Param::Terms => b.terms = value as usize,
            Param::Degree => b.degree = value,
            Param::Magnitude => b.magnitude = value,
            Param::Denominator => b.denominator = value,
            Param::Vars => b.nvars = value as usize,
        }
        Bounds::new(b.nvars, b.degree, b.terms, b.magnitude, b.denominator)
    }
}

impl fmt::Display for Param {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Param::Terms => "T",
            Param::Degree => "D",
            Param::Magnitude => "C",
            Param::Denominator => "H",
            Param::Vars => "n",
        })
    }
}

impl FromStr for Param {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "T" => Ok(Param::Terms),
            "D" => Ok(Param::Degree),
            "C" => Ok(Param::Magnitude),
            "H" => Ok(Param::Denominator),
            "n" => Ok(Param::Vars),
            _ => Err(invalid(format!("unknown parameter {s:?}; expected T, D, C, H or n"))),
        }
    }
}

/// Which interpolation routine a run exercises.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Algo {
    /// Univariate for `n = 1`, deterministic otherwise.
    #[default]
    Auto,
    Uni,
    Det,
    Prob,
    Int,
}

impl FromStr for Algo {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "auto" => Ok(Algo::Auto),
            "uni" => Ok(Algo::Uni),
            "det" => Ok(Algo::Det),
            "prob" => Ok(Algo::Prob),
            "int" => Ok(Algo::Int),
            _ => Err(invalid(format!("unknown algorithm {s:?}; expected auto, uni, det, prob or int"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BenchConfig {
    pub vary: Param,
    pub values: Vec<u64>,
    pub trials: usize,
    pub seed: u64,
    /// Fixed bounds; the varied one is overwritten per value.
    pub base: Bounds,
    pub algo: Algo,
}

/// One timed run.
#[derive(Clone, Debug, PartialEq)]
pub struct BenchRecord {
    pub param: Param,
    pub value: u64,
    pub trial: usize,
    pub time_ms: f64,
    pub blackbox_evals: u64,
    pub success: bool,
}

pub const CSV_HEADER: &str = "param,value,trial,time_ms,blackbox_evals,success";

fn run_seed(seed: u64, value: u64, trial: usize) -> u64 {
    // splitmix64 finalizer over the mixed inputs
    let mut z = seed ^ value.wrapping_mul(0x9E37_79B9_7F4A_7C15) ^ (trial as u64).wrapping_mul(0xD1B5_4A32_D192_ED03);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Draws one instance and times a single interpolation of it.
pub fn run_once(bounds: &Bounds, algo: Algo, seed: u64) -> Result<(f64, u64, bool)> {
    let mut rng = rng_from_seed(seed);
    let algo = match algo {
        Algo::Auto if bounds.nvars == 1 => Algo::Uni,
        Algo::Auto => Algo::Det,
        a => a,
    };
    let (n, d, t, c, h) = (bounds.nvars, bounds.degree, bounds.terms, bounds.magnitude, bounds.denominator);
    if algo == Algo::Uni {
        if n != 1 {
            return Err(invalid("univariate runs need n = 1"));
        }
        let f = random_sparse_poly(&mut rng, d, t, c, h)?;
        let bb = PolyBox::new(f.clone());
        let start = Instant::now();
        let out = upoly_si_rat(&bb, c, h, Some(t))?;
        let ms = start.elapsed().as_secs_f64() * 1e3;
        return Ok((ms, bb.probes(), out == Outcome::Success(f)));
    }
    let h = if algo == Algo::Int { 1 } else { h };
    let f: MultiPoly = random_multi_poly(&mut rng, n, d, t, c, h)?;
    let bounds = Bounds { denominator: h, ..*bounds };
    let bb = PolyBox::new(f.clone());
    let start = Instant::now();
    let got = match algo {
        Algo::Det => Outcome::Success(mpoly_si_mk(&bb, &bounds, None)?.poly),
        Algo::Int => Outcome::Success(mpoly_si_mk_int(&bb, &bounds, None)?.poly),
        Algo::Prob => pro_mpoly_si_mk(&bb, &bounds, None, seed)?.outcome,
        Algo::Uni | Algo::Auto => unreachable!("resolved above"),
    };
    let ms = start.elapsed().as_secs_f64() * 1e3;
    Ok((ms, bb.probes(), got == Outcome::Success(f)))
}

/// Runs every `(value, trial)` pair in order.
pub fn run_bench(cfg: &BenchConfig) -> Result<Vec<BenchRecord>> {
    if cfg.values.is_empty() || cfg.trials == 0 {
        return Err(invalid("bench needs at least one value and one trial"));
    }
    let mut out = Vec::with_capacity(cfg.values.len() * cfg.trials);
    for &value in &cfg.values {
        let bounds = cfg.vary.apply(&cfg.base, value)?;
        for trial in 0..cfg.trials {
            let (time_ms, blackbox_evals, success) = run_once(&bounds, cfg.algo, run_seed(cfg.seed, value, trial))?;
            out.push(BenchRecord { param: cfg.vary, value, trial, time_ms, blackbox_evals, success });
        }
    }
    Ok(out)
}

/// Header plus one LF-terminated row per record.
pub fn write_csv(records: &[BenchRecord], mut w: impl Write) -> io::Result<()> {
    writeln!(w, "{CSV_HEADER}")?;
    for r in records {
        writeln!(
            w,
            "{},{},{},{:.3},{},{}",
            r.param, r.value, r.trial, r.time_ms, r.blackbox_evals, r.success
        )?;
    }
    Ok(())
}
