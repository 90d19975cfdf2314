//! Parameter sweeps. Jobs fan out over rayon and come back in parameter order.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::qarith::{QParam, DEFAULT_MAX_TERMS};

use super::identities::Verifier;
use super::report::VerifyReport;

pub const Q_GRID: [f64; 4] = [0.2, 0.5, 0.8, 0.95];

/// Real and complex points kept away from every pole `z = [k]/q^k`.
pub fn default_z_grid() -> Vec<Complex64> {
    [
        (0.0, 0.0),
        (0.3, 0.0),
        (-0.7, 0.0),
        (0.5, 0.5),
        (2.5, 0.0),
        (0.0, -3.0),
        (-0.7, 0.2),
        (0.0, 1.5),
        (-2.0, 0.0),
        (0.9, -0.4),
        (-5.0, 1.0),
        (4.0, 3.0),
    ]
    .iter()
    .map(|&(re, im)| Complex64::new(re, im))
    .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Identity {
    Sum,
    Gf,
    Abreps,
    Euler,
    Drin,
    Height,
    Diagonal,
    All,
}

impl Identity {
    pub const EACH: [Identity; 7] = [
        Identity::Sum,
        Identity::Gf,
        Identity::Abreps,
        Identity::Euler,
        Identity::Drin,
        Identity::Height,
        Identity::Diagonal,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Identity::Sum => "sum",
            Identity::Gf => "gf",
            Identity::Abreps => "abreps",
            Identity::Euler => "euler",
            Identity::Drin => "drin",
            Identity::Height => "height",
            Identity::Diagonal => "diagonal",
            Identity::All => "all",
        }
    }
}

impl fmt::Display for Identity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Identity {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Identity::EACH
            .iter()
            .chain(std::iter::once(&Identity::All))
            .copied()
            .find(|id| id.name() == s)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown identity '{s}'")))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    pub q_list: Vec<f64>,
    pub tol: f64,
    pub max_terms: u64,
    pub sum_max_weight: u32,
    /// Restricts the sum formula to one depth when set.
    pub sum_depth: Option<u32>,
    pub gf_max_depth: u32,
    pub gf_coeff_orders: u32,
    pub z_grid: Vec<Complex64>,
    pub euler_m: Vec<u32>,
    pub ab_max_m: u64,
    pub ab_n_max: u32,
    pub ab_x: Vec<Complex64>,
    pub drin_cap: usize,
    pub height_cap: usize,
    pub diagonal_weight: u32,
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self {
            q_list: Q_GRID.to_vec(),
            tol: 1e-10,
            max_terms: DEFAULT_MAX_TERMS,
            sum_max_weight: 8,
            sum_depth: None,
            gf_max_depth: 4,
            gf_coeff_orders: 3,
            z_grid: default_z_grid(),
            euler_m: (2..=8).collect(),
            ab_max_m: 20,
            ab_n_max: 40,
            ab_x: vec![Complex64::new(0.3, 0.0), Complex64::new(0.5, 0.2)],
            drin_cap: 8,
            height_cap: 6,
            diagonal_weight: 8,
        }
    }
}

#[derive(Debug, Clone, Copy)]
enum Job {
    Sum(u32, u32),
    Gf(u32, Complex64),
    GfCoeff(u32, u32),
    Ab(u64, Complex64),
    Euler(u32),
    Drin,
    DrinSymmetry,
    Height,
    Diagonal,
}

fn jobs(identity: Identity, cfg: &SweepConfig) -> Vec<Job> {
    let mut out = Vec::new();
    match identity {
        Identity::Sum => {
            for n in 1..=cfg.sum_max_weight {
                for r in 1..=n {
                    if cfg.sum_depth.is_none_or(|d| d == r) {
                        out.push(Job::Sum(n, r));
                    }
                }
            }
        }
        Identity::Gf => {
            for r in 1..=cfg.gf_max_depth {
                out.extend(cfg.z_grid.iter().map(|&z| Job::Gf(r, z)));
                out.extend((0..=cfg.gf_coeff_orders).map(|p| Job::GfCoeff(r, p)));
            }
        }
        Identity::Abreps => {
            for m in 1..=cfg.ab_max_m {
                out.extend(cfg.ab_x.iter().map(|&x| Job::Ab(m, x)));
            }
        }
        Identity::Euler => out.extend(cfg.euler_m.iter().map(|&m| Job::Euler(m))),
        Identity::Drin => out.extend([Job::Drin, Job::DrinSymmetry]),
        Identity::Height => out.push(Job::Height),
        Identity::Diagonal => out.push(Job::Diagonal),
        Identity::All => {
            for id in Identity::EACH {
                out.extend(jobs(id, cfg));
            }
        }
    }
    out
}

fn run_job(v: &Verifier, job: Job, cfg: &SweepConfig, qp: &QParam) -> Result<Vec<VerifyReport>> {
    Ok(match job {
        Job::Sum(n, r) => vec![v.sum_formula(n, r, qp)?],
        Job::Gf(r, z) => vec![v.gf_identity(r, z, qp)?],
        Job::GfCoeff(r, p) => vec![v.gf_coefficient(r, p, qp)?],
        Job::Ab(m, x) => v.ab_representations(m, x, cfg.ab_n_max, qp)?.to_vec(),
        Job::Euler(m) => vec![v.euler_reduction(m, qp)?],
        Job::Drin => vec![v.drin(qp, cfg.drin_cap)?],
        Job::DrinSymmetry => vec![v.drin_symmetry(qp, cfg.drin_cap)?],
        Job::Height => vec![v.height_relation(qp, cfg.height_cap)?],
        Job::Diagonal => vec![v.phi_diagonal(qp, cfg.diagonal_weight)?],
    })
}

/// Runs every parameter point of `identity` for each `q` in the config.
/// Reports are ordered by identity, then `q`, then the identity's own
/// parameters, whatever order the workers finish in.
pub fn run_sweep(identity: Identity, cfg: &SweepConfig) -> Result<Vec<VerifyReport>> {
    let qps: Vec<QParam> = cfg
        .q_list
        .iter()
        .map(|&q| QParam::new(q, cfg.tol, cfg.max_terms))
        .collect::<Result<_>>()?;
    let verifier = Verifier::new();
    let ids: Vec<Identity> = match identity {
        Identity::All => Identity::EACH.to_vec(),
        one => vec![one],
    };
    let mut points = Vec::new();
    for id in ids {
        for qp in &qps {
            points.extend(jobs(id, cfg).into_iter().map(|job| (job, *qp)));
        }
    }
    let batches: Vec<Vec<VerifyReport>> = points
        .par_iter()
        .map(|(job, qp)| run_job(&verifier, *job, cfg, qp))
        .collect::<Result<_>>()?;
    Ok(batches.into_iter().flatten().collect())
}
