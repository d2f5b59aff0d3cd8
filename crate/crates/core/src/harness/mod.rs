//! Suite orchestration and JSON reports for the `atlas` CLI.

mod checks;

use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{contract, Error, Result};
use crate::liealg::{AlgebraCtx, MAX_N};
use crate::orbit::Characteristic;
use crate::sampling::{sample_rng, SampleRng};
use crate::weylgrp::ThetaSet;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, PartialOrd, Ord)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Liealg,
    Weyl,
    Orbit,
    Cotangent,
    Product,
    Rep,
    Lagrangian,
}

impl Suite {
    pub const ALL: [Suite; 7] = [
        Suite::Liealg,
        Suite::Weyl,
        Suite::Orbit,
        Suite::Cotangent,
        Suite::Product,
        Suite::Rep,
        Suite::Lagrangian,
    ];

    pub fn parse(s: &str) -> Result<Vec<Suite>> {
        if s == "all" {
            return Ok(Self::ALL.to_vec());
        }
        s.split(',')
            .map(|p| match p.trim() {
                "liealg" => Ok(Suite::Liealg),
                "weyl" => Ok(Suite::Weyl),
                "orbit" => Ok(Suite::Orbit),
                "cotangent" => Ok(Suite::Cotangent),
                "product" => Ok(Suite::Product),
                "rep" => Ok(Suite::Rep),
                "lagrangian" => Ok(Suite::Lagrangian),
                other => Err(contract(format!("unknown suite '{other}'"))),
            })
            .collect()
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SuiteConfig {
    pub n: usize,
    pub theta: Vec<usize>,
    pub k: usize,
    pub samples: usize,
    pub seed: u64,
    pub tol_exact: f64,
    pub tol_fd: f64,
    pub suites: Vec<Suite>,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            n: 2,
            theta: Vec::new(),
            k: 1,
            samples: 50,
            seed: 42,
            tol_exact: 1e-8,
            tol_fd: 1e-4,
            suites: Suite::ALL.to_vec(),
        }
    }
}

impl SuiteConfig {
    pub fn validate(&self) -> Result<()> {
        if !(2..=MAX_N).contains(&self.n) {
            return Err(contract(format!("n must lie in 2..={MAX_N}")));
        }
        let theta = ThetaSet::new(self.n, self.theta.iter().cloned())?;
        if theta.indices.len() == self.n - 1 {
            return Err(contract("Theta cannot contain every simple root"));
        }
        if self.k == 0 || self.k >= self.n || self.k > 4 {
            return Err(contract("k must satisfy 1 <= k < n and k <= 4"));
        }
        if self.samples == 0 {
            return Err(contract("samples must be positive"));
        }
        if !(self.tol_exact > 0.0) || !(self.tol_fd > 0.0) {
            return Err(contract("tolerances must be positive"));
        }
        Ok(())
    }

    /// Tolerance for an exact identity whose nominal bound is `nominal`.
    pub fn exact(&self, nominal: f64) -> f64 {
        nominal.min(self.tol_exact)
    }

    /// Tolerance for a finite-difference identity, scaled by tol_fd / 1e-4.
    pub fn fd(&self, nominal: f64) -> f64 {
        nominal * self.tol_fd / 1e-4
    }
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct CheckResult {
    pub suite: Suite,
    pub name: String,
    pub anchor: String,
    pub max_residual: f64,
    pub tol: f64,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub error: Option<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SuiteTime {
    pub suite: Suite,
    pub wall_time_s: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Report {
    pub config: SuiteConfig,
    pub calibrated_sign: f64,
    pub checks: Vec<CheckResult>,
    pub wall_time: Vec<SuiteTime>,
    pub pass: bool,
}

impl Report {
    pub fn failures(&self) -> Vec<&CheckResult> {
        self.checks.iter().filter(|c| !c.pass).collect()
    }
}

pub(crate) struct Env<'a> {
    pub cfg: &'a SuiteConfig,
    pub ctx: &'a AlgebraCtx,
    pub ch: &'a Characteristic,
    suite: Suite,
    out: Vec<CheckResult>,
    sink: &'a mut dyn FnMut(&CheckResult),
}

fn salt_of(name: &str) -> u64 {
    // FNV-1a
    name.bytes().fold(0xcbf2_9ce4_8422_2325u64, |h, b| {
        (h ^ b as u64).wrapping_mul(0x0100_0000_01b3)
    })
}

impl<'a> Env<'a> {
    /// Record a check from its largest residual.
    pub fn check(&mut self, name: &str, anchor: &str, tol: f64, r: Result<f64>) {
        let (max_residual, error) = match r {
            Ok(r) if r.is_nan() => (f64::INFINITY, Some("NaN residual".to_string())),
            Ok(r) => (r, None),
            Err(e) => (f64::INFINITY, Some(e.to_string())),
        };
        let res = CheckResult {
            suite: self.suite,
            name: name.to_string(),
            anchor: anchor.to_string(),
            max_residual,
            tol,
            pass: error.is_none() && max_residual <= tol,
            error,
        };
        (self.sink)(&res);
        self.out.push(res);
    }

    /// A control that must stay above `threshold`: residual threshold / observed, tol 1.
    pub fn control(&mut self, name: &str, anchor: &str, threshold: f64, r: Result<f64>) {
        let r = r.map(|v| if v > 0.0 { threshold / v } else { f64::INFINITY });
        self.check(name, anchor, 1.0, r);
    }

    pub fn samples(&self, cap: usize) -> usize {
        self.cfg.samples.min(cap).max(1)
    }

    /// Max of f over per-sample generators, evaluated in parallel.
    pub fn par_max<F>(&self, name: &str, count: usize, f: F) -> Result<f64>
    where
        F: Fn(&mut SampleRng) -> Result<f64> + Sync,
    {
        let seed = self.cfg.seed;
        let salt = salt_of(name);
        let rs: Vec<Result<f64>> = (0..count)
            .into_par_iter()
            .map(|i| {
                let mut rng = sample_rng(seed, salt, i as u64);
                f(&mut rng)
            })
            .collect();
        let mut worst = 0.0f64;
        for r in rs {
            let v = r?;
            worst = if v.is_nan() { f64::INFINITY } else { worst.max(v) };
        }
        Ok(worst)
    }

    pub fn seed_for(&self, name: &str) -> u64 {
        self.cfg.seed ^ salt_of(name)
    }
}

/// Runs the selected suites; `sink` sees every check as soon as it finishes.
pub fn run_suite_streaming(cfg: &SuiteConfig, sink: &mut dyn FnMut(&CheckResult)) -> Result<Report> {
    cfg.validate()?;
    let ctx = AlgebraCtx::new(cfg.n)?;
    let theta = ThetaSet::new(cfg.n, cfg.theta.iter().cloned())?;
    let ch = Characteristic::canonical(cfg.n, &theta)?;
    let calibrated_sign = ctx.kks_sign;
    let mut env = Env {
        cfg,
        ctx: &ctx,
        ch: &ch,
        suite: Suite::Liealg,
        out: Vec::new(),
        sink,
    };
    let mut suites = cfg.suites.clone();
    suites.sort();
    suites.dedup();
    let mut wall_time = Vec::new();
    for s in suites {
        env.suite = s;
        let t0 = Instant::now();
        match s {
            Suite::Liealg => checks::liealg(&mut env),
            Suite::Weyl => checks::weyl(&mut env),
            Suite::Orbit => checks::orbit(&mut env),
            Suite::Cotangent => checks::cotangent(&mut env),
            Suite::Product => checks::product(&mut env),
            Suite::Rep => checks::rep(&mut env),
            Suite::Lagrangian => checks::lagrangian(&mut env),
        }
        wall_time.push(SuiteTime {
            suite: s,
            wall_time_s: t0.elapsed().as_secs_f64(),
        });
    }
    let checks = env.out;
    let pass = checks.iter().all(|c| c.pass);
    Ok(Report {
        config: cfg.clone(),
        calibrated_sign,
        checks,
        wall_time,
        pass,
    })
}

pub fn run_suite(cfg: &SuiteConfig) -> Result<Report> {
    run_suite_streaming(cfg, &mut |_| {})
}

/// Report as JSON with the timing fields removed (for reproducibility comparisons).
pub fn report_without_timing(r: &Report) -> Result<String> {
    let mut v = serde_json::to_value(r).map_err(|e| Error::Io(e.to_string()))?;
    if let Some(obj) = v.as_object_mut() {
        obj.remove("wall_time");
    }
    serde_json::to_string(&v).map_err(|e| Error::Io(e.to_string()))
}
