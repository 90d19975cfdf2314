//! Both sides of the generating-function form of the sum formula:
//!
//! ```text
//! L_r(z) = sum_{k1 > ... > kr > 0} q^k1 / [k1] prod_j 1 / ([kj] - z q^kj)
//! R_r(z) = sum_{m >= 1} q^(r m) / ([m]^r ([m] - z q^m))
//! ```
//!
//! Both are defined for `z` off the pole set `{ q^-m [m]_q : m >= 1 }`.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::qarith::{powi, qint_raw, CertifiedValue, QParam};

use super::engine::{self, NestedTerms};

/// Minimum admissible distance of `[m]_q - z q^m` from zero.
pub fn pole_margin(z: Complex64) -> f64 {
    1e-6 * (1.0 + z.norm())
}

fn shifted_denominator(k: u64, q: f64, z: Complex64) -> Result<(f64, f64, Complex64)> {
    let qk = powi(q, k as i64);
    let qi = qint_raw(k as i64, q);
    let den = Complex64::new(qi, 0.0) - z * qk;
    let distance = den.norm();
    if distance < pole_margin(z) {
        return Err(Error::PoleProximity { m: k, distance });
    }
    Ok((qk, qi, den))
}

// Lower bound for |[m] - z q^m| over m > k; nonpositive means none yet.
fn denominator_floor(k: u64, q: f64, z: Complex64) -> f64 {
    qint_raw(k as i64 + 1, q) - z.norm() * powi(q, k as i64 + 1)
}

struct LeftTerms {
    depth: usize,
    q: f64,
    z: Complex64,
}

impl NestedTerms<Complex64> for LeftTerms {
    fn depth(&self) -> usize {
        self.depth
    }

    fn terms_at(&self, k: u64, out: &mut [Complex64]) -> Result<()> {
        let (qk, qi, den) = shifted_denominator(k, self.q, self.z)?;
        let inv = den.inv();
        out[0] = inv * (qk / qi);
        for slot in &mut out[1..] {
            *slot = inv;
        }
        Ok(())
    }

    fn inner_sup_beyond(&self, _level: usize, k: u64) -> f64 {
        let d = denominator_floor(k, self.q, self.z);
        if d > 0.0 {
            1.0 / d
        } else {
            f64::INFINITY
        }
    }

    fn outer_envelope(&self, k: u64) -> (f64, f64) {
        let d = denominator_floor(k, self.q, self.z);
        if d <= 0.0 {
            return (f64::INFINITY, self.q);
        }
        let c = powi(self.q, k as i64 + 1) / (qint_raw(k as i64 + 1, self.q) * d);
        (c, self.q)
    }

    fn identical_inner(&self) -> bool {
        true
    }
}

struct RightTerms {
    depth: i32,
    q: f64,
    z: Complex64,
}

impl NestedTerms<Complex64> for RightTerms {
    fn depth(&self) -> usize {
        1
    }

    fn terms_at(&self, k: u64, out: &mut [Complex64]) -> Result<()> {
        let (qk, qi, den) = shifted_denominator(k, self.q, self.z)?;
        out[0] = den.inv() * (qk / qi).powi(self.depth);
        Ok(())
    }

    fn inner_sup_beyond(&self, _level: usize, _k: u64) -> f64 {
        0.0
    }

    fn outer_envelope(&self, k: u64) -> (f64, f64) {
        let d = denominator_floor(k, self.q, self.z);
        let rho = self.q.powi(self.depth);
        if d <= 0.0 {
            return (f64::INFINITY, rho);
        }
        let next = k as i64 + 1;
        let c = (powi(self.q, next) / qint_raw(next, self.q)).powi(self.depth) / d;
        (c, rho)
    }
}

fn check_depth(r: u32) -> Result<()> {
    if r == 0 {
        return Err(Error::InvalidArgument("depth r must be positive".into()));
    }
    Ok(())
}

/// Nested left-hand side `L_r(z)`.
pub fn eval_lr(r: u32, z: Complex64, qp: &QParam) -> Result<CertifiedValue<Complex64>> {
    check_depth(r)?;
    let terms = LeftTerms {
        depth: r as usize,
        q: qp.q(),
        z,
    };
    engine::sum_adaptive(&terms, 0, qp)
}

/// Single-sum right-hand side `R_r(z)`.
pub fn eval_rr(r: u32, z: Complex64, qp: &QParam) -> Result<CertifiedValue<Complex64>> {
    check_depth(r)?;
    let terms = RightTerms {
        depth: r as i32,
        q: qp.q(),
        z,
    };
    engine::sum_adaptive(&terms, 0, qp)
}
