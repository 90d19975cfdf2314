//! The building blocks `A(m, n, k)` and `B(m, n)` of the partial-fraction
//! decomposition, and their generating-function products
//!
//! ```text
//! A_m(x) = q^m / [m] prod_{c=1}^{m} (1 - x q^c / [c])^-1
//! B_m(x) = prod_{b=1}^{m-1} (1 - x q^b / [b])
//! ```

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::qarith::{powi, qint_raw, CertifiedValue, QParam};

use super::engine::{self, NestedTerms};

fn check_m(m: u64) -> Result<()> {
    if m == 0 {
        return Err(Error::InvalidArgument("m must be positive".into()));
    }
    Ok(())
}

/// `q^m / [m]_q`, the value of `A(m, 0)`.
fn head(m: u64, q: f64) -> f64 {
    powi(q, m as i64) / qint_raw(m as i64, q)
}

struct ATerms {
    m: u64,
    depth: usize,
    q: f64,
}

impl ATerms {
    fn outer(&self, b: u64) -> f64 {
        head(self.m + b, self.q) / qint_raw(b as i64, self.q)
    }
}

impl NestedTerms<f64> for ATerms {
    fn depth(&self) -> usize {
        self.depth
    }

    fn terms_at(&self, b: u64, out: &mut [f64]) -> Result<()> {
        let inv = 1.0 / qint_raw(b as i64, self.q);
        out[0] = head(self.m + b, self.q) * inv;
        for slot in &mut out[1..] {
            *slot = inv;
        }
        Ok(())
    }

    fn inner_sup_beyond(&self, _level: usize, b: u64) -> f64 {
        1.0 / qint_raw(b as i64 + 1, self.q)
    }

    fn outer_envelope(&self, b: u64) -> (f64, f64) {
        (self.outer(b + 1), self.q)
    }

    fn identical_inner(&self) -> bool {
        true
    }
}

/// `A(m, n, k) = sum_{b1 > ... > bn > k} q^(m + b1) / [m + b1] prod_j 1 / [bj]`.
pub fn eval_a(m: u64, n: u32, k: u64, qp: &QParam) -> Result<CertifiedValue> {
    check_m(m)?;
    if n == 0 {
        return Ok(CertifiedValue::exact(head(m, qp.q())));
    }
    let terms = ATerms {
        m,
        depth: n as usize,
        q: qp.q(),
    };
    engine::sum_adaptive(&terms, k, qp)
}

/// `A(m, n) = A(m, n, 0)` for every `n` in `0..=n_max` in a single pass.
///
/// The chains below the outer index are elementary symmetric functions of
/// `1/[1], ..., 1/[b-1]`, so all depths share one recurrence.
pub fn eval_a_all(m: u64, n_max: u32, qp: &QParam) -> Result<Vec<CertifiedValue>> {
    check_m(m)?;
    let q = qp.q();
    let n_max = n_max as usize;
    let mut out = vec![CertifiedValue::exact(head(m, q))];
    if n_max == 0 {
        return Ok(out);
    }
    // elem[d] = e_d(1/[1], ..., 1/[b-1])
    let mut elem = vec![0.0; n_max];
    elem[0] = 1.0;
    let mut acc = vec![0.0; n_max + 1];
    let mut abs_sum = 0.0;
    let mut tails = vec![f64::INFINITY; n_max + 1];
    let inv_gap = 1.0 / (1.0 - q);
    let mut b = 0u64;
    loop {
        b += 1;
        let inv = 1.0 / qint_raw(b as i64, q);
        let outer = head(m + b, q) * inv;
        for n in 1..=n_max {
            acc[n] += outer * elem[n - 1];
        }
        for d in (1..n_max).rev() {
            elem[d] += elem[d - 1] * inv;
        }
        abs_sum += inv;

        // tail_n <= c sum_{i=0}^{d} S^{d-i}/(d-i)! u^i/(1-q)^{i+1}, d = n - 1
        let c = head(m + b + 1, q) / qint_raw(b as i64 + 1, q);
        let u = 1.0 / qint_raw(b as i64 + 1, q);
        let mut done = true;
        for (d, tail) in tails.iter_mut().enumerate().skip(1).map(|(n, t)| (n - 1, t)) {
            let mut s_pow = 1.0; // S^{d-i}/(d-i)! built from i = d downwards
            let mut terms = vec![0.0; d + 1];
            for j in 0..=d {
                if j > 0 {
                    s_pow *= abs_sum / j as f64;
                }
                terms[d - j] = s_pow;
            }
            let mut bound = 0.0;
            let mut geo = inv_gap;
            for (i, t) in terms.iter().enumerate() {
                if i > 0 {
                    geo *= u * inv_gap;
                }
                bound += t * geo;
            }
            *tail = c * bound;
            if *tail > qp.tol() {
                done = false;
            }
        }
        if done || b >= qp.max_terms() {
            for n in 1..=n_max {
                out.push(CertifiedValue::new(acc[n], tails[n], b));
            }
            if !done {
                let worst = out
                    .iter()
                    .max_by(|a, b| a.tail_bound.total_cmp(&b.tail_bound))
                    .copied()
                    .unwrap_or(out[0]);
                return Err(engine::budget_exceeded(&worst, qp.tol()));
            }
            return Ok(out);
        }
    }
}

/// `B(m, n) = sum_{m > k1 > ... > kn > 0} prod_i 1 / [ki - m]_q`, a finite sum
/// over negative q-integers; zero when `n > m - 1`.
pub fn eval_b(m: u64, n: u32, qp: &QParam) -> Result<f64> {
    check_m(m)?;
    let n = n as usize;
    if n as u64 > m - 1 {
        return Ok(0.0);
    }
    let q = qp.q();
    // elementary symmetric polynomial of 1/[k - m], k = 1..m-1
    let mut elem = vec![0.0; n + 1];
    elem[0] = 1.0;
    for k in 1..m {
        let v = 1.0 / qint_raw(k as i64 - m as i64, q);
        for d in (1..=n).rev() {
            elem[d] += elem[d - 1] * v;
        }
    }
    Ok(elem[n])
}

/// Product representation of `A_m(x)`; requires every factor
/// `1 - x q^c / [c]` to stay away from zero.
pub fn closed_am(m: u64, x: Complex64, qp: &QParam) -> Result<Complex64> {
    check_m(m)?;
    let q = qp.q();
    let margin = 1e-6 * (1.0 + x.norm());
    let mut prod = Complex64::new(head(m, q), 0.0);
    for c in 1..=m {
        let factor = Complex64::new(1.0, 0.0) - x * head(c, q);
        if factor.norm() < margin {
            return Err(Error::PoleProximity {
                m: c,
                distance: factor.norm(),
            });
        }
        prod /= factor;
    }
    Ok(prod)
}

/// Product representation of `B_m(x)`; `B_1(x) = 1`.
pub fn closed_bm(m: u64, x: Complex64, qp: &QParam) -> Result<Complex64> {
    check_m(m)?;
    let q = qp.q();
    Ok((1..m).fold(Complex64::new(1.0, 0.0), |acc, b| {
        acc * (Complex64::new(1.0, 0.0) - x * head(b, q))
    }))
}
