//! One checker per identity. Each evaluates both sides through independent
//! code paths and compares the residual with a computed error budget.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::indices::{compositions, enumerate_i0, ones_padded, MultiIndex};
use crate::powerseries::{newton_power_sums, TruncSeries};
use crate::qarith::{powi, qint_raw, CertifiedValue, QParam, ROUNDING_EPS_PER_TERM};
use crate::series::{closed_am, closed_bm, eval_a_all, eval_b, eval_lr, eval_rr, Evaluator};
use crate::stuffle::reduce_zeta_m1;

use super::report::{Params, Side, TableEntry, VerifyReport};

/// Rounding allowance for `ops` floating-point operations on quantities of
/// size `scale`.
pub fn rounding_slack(ops: usize, scale: f64) -> f64 {
    ops.max(1) as f64 * ROUNDING_EPS_PER_TERM * f64::EPSILON * scale.max(1.0)
}

/// Sample radius and count for extracting Taylor coefficients in `z`.
const COEFF_RADIUS: f64 = 0.3;
const COEFF_MAJORANT_RADIUS: f64 = 0.9;
const COEFF_SAMPLES: usize = 32;

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

fn index(parts: &[u32]) -> MultiIndex {
    MultiIndex::new(parts.to_vec()).expect("positive parts")
}

/// Runs the identity checkers against a shared memoizing evaluator.
#[derive(Debug, Default)]
pub struct Verifier {
    ev: Evaluator,
}

impl Verifier {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn evaluator(&self) -> &Evaluator {
        &self.ev
    }

    fn zeta(&self, parts: &[u32], qp: &QParam) -> Result<CertifiedValue> {
        self.ev.qmzv(&index(parts), qp)
    }

    /// `sum_{n1+...+nr=N} zeta*[n] = zeta*[N]`.
    pub fn sum_formula(&self, total: u32, depth: u32, qp: &QParam) -> Result<VerifyReport> {
        if depth == 0 || total < depth {
            return Err(Error::InvalidArgument(format!(
                "sum formula needs N >= r >= 1, got N={total} r={depth}"
            )));
        }
        let parts: Vec<_> = compositions(total, depth)
            .map(|idx| self.ev.qmzv_star(&idx, qp))
            .collect::<Result<_>>()?;
        let lhs = CertifiedValue::sum(&parts);
        let rhs = self.ev.qmzv_star(&index(&[total]), qp)?;
        let errors: f64 =
            parts.iter().map(CertifiedValue::error_bound).sum::<f64>() + rhs.error_bound();
        let budget = errors + rounding_slack(parts.len() + 1, lhs.value.abs());
        Ok(VerifyReport::new(
            "sum",
            Params::new()
                .int("N", total.into())
                .int("r", depth.into())
                .real("q", qp.q()),
            Side::Real(lhs),
            Side::Real(rhs),
            (lhs.value - rhs.value).abs(),
            budget,
        ))
    }

    /// `L_r(z) = R_r(z)`.
    pub fn gf_identity(&self, depth: u32, z: Complex64, qp: &QParam) -> Result<VerifyReport> {
        let lhs = eval_lr(depth, z, qp)?;
        let rhs = eval_rr(depth, z, qp)?;
        let budget = lhs.error_bound() + rhs.error_bound() + rounding_slack(2, lhs.value.norm());
        Ok(VerifyReport::new(
            "gf",
            Params::new()
                .int("r", depth.into())
                .complex("z", z)
                .real("q", qp.q()),
            Side::Complex(lhs),
            Side::Complex(rhs),
            (lhs.value - rhs.value).norm(),
            budget,
        ))
    }

    /// Coefficient of `z^p` in `L_r(z)`, extracted numerically from samples on
    /// a circle, against `zeta*[r + p]` (the same coefficient of `R_r`).
    ///
    /// The aliasing error is bounded with `|L_r(z)| <= L_r(|z|)` on a larger
    /// circle, which holds because every Taylor coefficient in `z` is positive.
    pub fn gf_coefficient(&self, depth: u32, power: u32, qp: &QParam) -> Result<VerifyReport> {
        if power as usize >= COEFF_SAMPLES {
            return Err(Error::InvalidArgument(format!(
                "coefficient order must be below {COEFF_SAMPLES}"
            )));
        }
        let n = COEFF_SAMPLES;
        let mut acc = c(0.0);
        let mut sample_err: f64 = 0.0;
        let mut terms = 0;
        for l in 0..n {
            let angle = 2.0 * std::f64::consts::PI * l as f64 / n as f64;
            let z = Complex64::from_polar(COEFF_RADIUS, angle);
            let v = eval_lr(depth, z, qp)?;
            sample_err = sample_err.max(v.error_bound());
            terms = terms.max(v.terms_used);
            acc += v.value * Complex64::from_polar(1.0, -angle * f64::from(power));
        }
        let scale = COEFF_RADIUS.powi(power as i32);
        let estimate = acc / (n as f64 * scale);

        let outer = eval_lr(depth, c(COEFF_MAJORANT_RADIUS), qp)?;
        let max_modulus = outer.value.norm() + outer.error_bound();
        let theta = (COEFF_RADIUS / COEFF_MAJORANT_RADIUS).powi(n as i32);
        let aliasing =
            max_modulus * COEFF_MAJORANT_RADIUS.powi(-(power as i32)) * theta / (1.0 - theta);

        let rhs = self.ev.qmzv_star(&index(&[depth + power]), qp)?;
        let lhs = CertifiedValue::new(estimate, aliasing + sample_err / scale, terms);
        let budget = lhs.tail_bound
            + rhs.error_bound()
            + rounding_slack(n * (terms as usize).max(1), max_modulus) / scale;
        Ok(VerifyReport::new(
            "gf-coeff",
            Params::new()
                .int("r", depth.into())
                .int("p", power.into())
                .real("q", qp.q()),
            Side::Complex(lhs),
            Side::Real(rhs),
            (estimate - c(rhs.value)).norm(),
            budget,
        ))
    }

    /// Series-versus-product checks for `A_m(x)` and `B_m(x)`.
    pub fn ab_representations(
        &self,
        m: u64,
        x: Complex64,
        n_max: u32,
        qp: &QParam,
    ) -> Result<[VerifyReport; 2]> {
        let q = qp.q();
        let params = Params::new()
            .int("m", m as i64)
            .complex("x", x)
            .int("n_max", n_max.into())
            .real("q", q);

        // A side
        let closed_a = closed_am(m, x, qp)?;
        let coeffs = eval_a_all(m, n_max, qp)?;
        let mut series = c(0.0);
        let mut coeff_err = 0.0;
        let mut terms = 0;
        for (n, v) in coeffs.iter().enumerate() {
            series += x.powu(n as u32) * v.value;
            coeff_err += x.norm().powi(n as i32) * v.error_bound();
            terms = terms.max(v.terms_used);
        }
        let truncation = a_series_tail(m, x.norm(), n_max, q)?;
        let lhs_a = CertifiedValue::new(series, coeff_err + truncation, terms);
        let budget_a =
            lhs_a.tail_bound + rounding_slack(4 * (n_max as usize + m as usize), closed_a.norm());
        let a = VerifyReport::new(
            "abreps-A",
            params.clone(),
            Side::Complex(lhs_a),
            Side::Complex(CertifiedValue::exact(closed_a)),
            (series - closed_a).norm(),
            budget_a,
        );

        // B side: finite on both routes
        let closed_b = closed_bm(m, x, qp)?;
        let mut poly = c(0.0);
        let mut majorant = 0.0;
        for n in 0..m as u32 {
            let b = eval_b(m, n, qp)?;
            poly += x.powu(n) * b;
            majorant += x.norm().powi(n as i32) * b.abs();
        }
        let ops = (m * m) as usize + 4;
        let b = VerifyReport::new(
            "abreps-B",
            params,
            Side::Complex(CertifiedValue::exact(poly)),
            Side::Complex(CertifiedValue::exact(closed_b)),
            (poly - closed_b).norm(),
            rounding_slack(ops, majorant.max(closed_b.norm())),
        );
        Ok([a, b])
    }

    /// `2 zeta[m,1] = m zeta[m+1] + (1-q)(m-2) zeta[m] - sum_k zeta[m-k] zeta[k+1]`.
    pub fn euler_reduction(&self, m: u32, qp: &QParam) -> Result<VerifyReport> {
        let reduction = reduce_zeta_m1(m)?;
        let eps = qp.eps();
        let zm1 = self.zeta(&[m, 1], qp)?;
        let lhs = CertifiedValue::new(2.0 * zm1.value, 2.0 * zm1.error_bound(), zm1.terms_used);

        let mut value = 0.0;
        let mut err = 0.0;
        let mut terms = 0;
        let mut ops = 4;
        for (idx, coeff) in reduction.linear.terms() {
            let z = self.ev.qmzv(idx, qp)?;
            value += coeff.eval(eps) * z.value;
            err += coeff.eval_abs(eps) * z.error_bound();
            terms = terms.max(z.terms_used);
        }
        for &(s, t) in &reduction.products {
            let a = self.zeta(&[s], qp)?;
            let b = self.zeta(&[t], qp)?;
            let p = a.product(&b);
            value -= p.value;
            err += p.tail_bound
                + a.rounding_bound() * b.value.abs()
                + b.rounding_bound() * a.value.abs();
            terms = terms.max(p.terms_used);
            ops += 2;
        }
        let rhs = CertifiedValue::new(value, err, terms);
        let budget = lhs.tail_bound + rhs.tail_bound + rounding_slack(ops, lhs.value.abs());
        let consistent = reduction.is_consistent();
        Ok(VerifyReport::new(
            "euler",
            Params::new().int("m", m.into()).real("q", q_of(qp)),
            Side::Real(lhs),
            Side::Real(rhs),
            (lhs.value - rhs.value).abs(),
            budget,
        )
        .with_note(format!(
            "symbolic relation equals twice the depth-2 sum formula: {consistent}"
        )))
    }

    /// Coefficient table `zeta[m+2, {1}^n]` for `m + n + 2 <= cap`, keyed by
    /// `[m, n]`.
    pub fn drin_table(&self, qp: &QParam, cap: usize) -> Result<Vec<(u32, u32, CertifiedValue)>> {
        let mut out = Vec::new();
        for total in 0..=cap.saturating_sub(2) as u32 {
            for m in (0..=total).rev() {
                let n = total - m;
                out.push((m, n, self.ev.qmzv(&ones_padded(m, n), qp)?));
            }
        }
        Ok(out)
    }

    /// Double generating function of `zeta[m+2, {1}^n]` against
    /// `1 - exp(sum_k {x^k + y^k - (x + y + (1-q) x y)^k} / k sum_j (q-1)^(k-j) zeta[j])`.
    pub fn drin(&self, qp: &QParam, cap: usize) -> Result<VerifyReport> {
        check_cap(cap)?;
        let q = qp.q();
        let table = self.drin_table(qp, cap)?;
        let mut lhs = TruncSeries::zero(2, cap)?;
        let mut lhs_err = TruncSeries::zero(2, cap)?;
        for &(m, n, v) in &table {
            lhs.set_coeff(&[m + 1, n + 1], c(v.value))?;
            lhs_err.set_coeff(&[m + 1, n + 1], c(v.error_bound()))?;
        }

        let x = TruncSeries::var(2, cap, 0)?;
        let y = TruncSeries::var(2, cap, 1)?;
        let shifted = x.add(&y)?.add(&x.mul(&y)?.scale_real(1.0 - q))?;
        let mut diffs = Vec::new();
        for k in 2..=cap as u32 {
            diffs.push(x.pow(k)?.add(&y.pow(k)?)?.sub(&shifted.pow(k)?)?);
        }
        let (exponent, exponent_err, muls) = self.exponent_sum(qp, &diffs)?;
        let one = TruncSeries::one(2, cap)?;
        let rhs = one.sub(&exponent.exp()?)?;
        let rhs_err = exp_error(&exponent, &exponent_err)?;

        let residual = lhs.max_abs_diff(&rhs)?;
        let total_err = lhs_err.add(&rhs_err)?;
        let scale = exponent.majorant().exp()?.max_abs_coeff();
        let monomials = lhs.monomials().len();
        let budget = total_err.max_abs_coeff() + rounding_slack(muls * monomials, scale);

        let lhs_rows = table
            .iter()
            .map(|&(m, n, v)| TableEntry {
                key: vec![m, n],
                value: c(v.value),
                bound: v.error_bound(),
            })
            .collect();
        let rhs_rows = table
            .iter()
            .map(|&(m, n, _)| TableEntry {
                key: vec![m, n],
                value: rhs.coeff(&[m + 1, n + 1]),
                bound: rhs_err.coeff(&[m + 1, n + 1]).re,
            })
            .collect();
        Ok(VerifyReport::new(
            "drin",
            Params::new().int("D", cap as i64).real("q", q),
            Side::Table(lhs_rows),
            Side::Table(rhs_rows),
            residual,
            budget,
        )
        .with_note("residual and budget are maxima over every monomial of total degree <= D"))
    }

    /// `zeta[m+2, {1}^n] = zeta[n+2, {1}^m]` across the table.
    pub fn drin_symmetry(&self, qp: &QParam, cap: usize) -> Result<VerifyReport> {
        check_cap(cap)?;
        let table = self.drin_table(qp, cap)?;
        let lookup = |m: u32, n: u32| {
            table
                .iter()
                .find(|&&(a, b, _)| a == m && b == n)
                .map(|&(_, _, v)| v)
                .expect("table is symmetric in shape")
        };
        let mut residual: f64 = 0.0;
        let mut budget: f64 = 0.0;
        let mut lhs_rows = Vec::new();
        let mut rhs_rows = Vec::new();
        for &(m, n, v) in table.iter().filter(|&&(m, n, _)| m > n) {
            let w = lookup(n, m);
            residual = residual.max((v.value - w.value).abs());
            budget = budget.max(v.error_bound() + w.error_bound());
            lhs_rows.push(TableEntry {
                key: vec![m, n],
                value: c(v.value),
                bound: v.error_bound(),
            });
            rhs_rows.push(TableEntry {
                key: vec![n, m],
                value: c(w.value),
                bound: w.error_bound(),
            });
        }
        budget += rounding_slack(1, 1.0);
        Ok(VerifyReport::new(
            "drin-symmetry",
            Params::new().int("D", cap as i64).real("q", qp.q()),
            Side::Table(lhs_rows),
            Side::Table(rhs_rows),
            residual,
            budget,
        ))
    }

    /// `G0[n, r, s]`: sum of `zeta[idx]` over admissible indices of weight `n`,
    /// depth `r` and height `s`.
    pub fn g0(&self, weight: u32, depth: u32, height: u32, qp: &QParam) -> Result<CertifiedValue> {
        let values: Vec<_> = enumerate_i0(weight, depth, height)
            .map(|idx| self.ev.qmzv(&idx, qp))
            .collect::<Result<_>>()?;
        let mut total = CertifiedValue::sum(&values);
        total.tail_bound = values.iter().map(CertifiedValue::error_bound).sum();
        Ok(total)
    }

    /// `Phi_0[x, y, z]` truncated at total degree `cap - 1`, with a
    /// coefficientwise error series.
    pub fn phi0(&self, qp: &QParam, cap: usize) -> Result<(TruncSeries, TruncSeries)> {
        let mut phi = TruncSeries::zero(3, cap)?;
        let mut err = TruncSeries::zero(3, cap)?;
        let top = cap.saturating_sub(1) as u32;
        for s in 1..=top + 1 {
            for a in 0..=top + 1 - s {
                for b in 0..=top + 1 - s - a {
                    let weight = a + b + 2 * s;
                    let depth = b + s;
                    let g = self.g0(weight, depth, s, qp)?;
                    phi.set_coeff(&[a, b, s - 1], c(g.value))?;
                    err.set_coeff(&[a, b, s - 1], c(g.tail_bound))?;
                }
            }
        }
        Ok((phi, err))
    }

    /// Weight/depth/height generating function:
    /// `1 + (z - xy) Phi_0 = exp(sum_k (x^k + y^k - alpha^k - beta^k) / k sum_j (q-1)^(k-j) zeta[j])`
    /// with `alpha + beta = x + y + (q-1)(z - xy)` and `alpha beta = z`.
    pub fn height_relation(&self, qp: &QParam, cap: usize) -> Result<VerifyReport> {
        check_cap(cap)?;
        let q = qp.q();
        let (phi, phi_err) = self.phi0(qp, cap)?;
        let x = TruncSeries::var(3, cap, 0)?;
        let y = TruncSeries::var(3, cap, 1)?;
        let z = TruncSeries::var(3, cap, 2)?;
        let xy = x.mul(&y)?;
        let shift = z.sub(&xy)?;
        let one = TruncSeries::one(3, cap)?;
        let lhs = one.add(&shift.mul(&phi)?)?;
        let lhs_err = z.add(&xy)?.mul(&phi_err)?;

        // z has total degree 1 but alpha, beta behave like sqrt(z), so power
        // sums up to k = 2 cap reach degree cap.
        let kmax = 2 * cap;
        let e1 = x.add(&y)?.add(&shift.scale_real(q - 1.0))?;
        let power_sums = newton_power_sums(&e1, &z, kmax)?;
        let mut diffs = Vec::new();
        for k in 2..=kmax as u32 {
            let xk_yk = x.pow(k)?.add(&y.pow(k)?)?;
            diffs.push(xk_yk.sub(&power_sums[k as usize - 1])?);
        }
        let (exponent, exponent_err, muls) = self.exponent_sum(qp, &diffs)?;
        let rhs = exponent.exp()?;
        let rhs_err = exp_error(&exponent, &exponent_err)?;

        let residual = lhs.max_abs_diff(&rhs)?;
        let scale = exponent.majorant().exp()?.max_abs_coeff();
        let monomials = lhs.monomials().len();
        let budget = lhs_err.add(&rhs_err)?.max_abs_coeff()
            + rounding_slack((muls + kmax) * monomials, scale);

        let lhs_rows = series_rows(&lhs, &lhs_err);
        let rhs_rows = series_rows(&rhs, &rhs_err);
        Ok(VerifyReport::new(
            "height",
            Params::new().int("D", cap as i64).real("q", q),
            Side::Table(lhs_rows),
            Side::Table(rhs_rows),
            residual,
            budget,
        )
        .with_note("Phi_0 sums the strata s >= 1 only; s = 0 is empty since every admissible index has height >= 1")
        .with_note("residual and budget are maxima over every monomial of total degree <= D"))
    }

    /// `G0[n, r] = sum_s G0[n, r, s] = zeta[n]` for `2 <= n <= max_weight`,
    /// `1 <= r < n`: the diagonal `z = xy` of `Phi_0`.
    pub fn phi_diagonal(&self, qp: &QParam, max_weight: u32) -> Result<VerifyReport> {
        if max_weight < 2 {
            return Err(Error::InvalidArgument("diagonal needs weight >= 2".into()));
        }
        let mut residual: f64 = 0.0;
        let mut budget: f64 = 0.0;
        let mut lhs_rows = Vec::new();
        let mut rhs_rows = Vec::new();
        for n in 2..=max_weight {
            let zn = self.zeta(&[n], qp)?;
            for r in 1..n {
                let g = self.g0_total(n, r, qp)?;
                residual = residual.max((g.value - zn.value).abs());
                budget = budget.max(
                    g.tail_bound + zn.error_bound() + rounding_slack(n as usize, g.value.abs()),
                );
                lhs_rows.push(TableEntry {
                    key: vec![n, r],
                    value: c(g.value),
                    bound: g.tail_bound,
                });
                rhs_rows.push(TableEntry {
                    key: vec![n, r],
                    value: c(zn.value),
                    bound: zn.error_bound(),
                });
            }
        }
        Ok(VerifyReport::new(
            "diagonal",
            Params::new()
                .int("max_weight", max_weight.into())
                .real("q", qp.q()),
            Side::Table(lhs_rows),
            Side::Table(rhs_rows),
            residual,
            budget,
        )
        .with_note("residual and budget are maxima over all (n, r) entries"))
    }

    /// `G0[n, r]`, the sum of all admissible `zeta` of weight `n` and depth `r`.
    pub fn g0_total(&self, weight: u32, depth: u32, qp: &QParam) -> Result<CertifiedValue> {
        let parts: Vec<_> = (0..=depth)
            .map(|s| self.g0(weight, depth, s, qp))
            .collect::<Result<_>>()?;
        let mut total = CertifiedValue::sum(&parts);
        total.tail_bound = parts.iter().map(|p| p.tail_bound).sum();
        Ok(total)
    }

    /// `sum_{k>=2} c_k diffs[k-2]` with `c_k = (1/k) sum_{j=2}^{k} (q-1)^(k-j) zeta[j]`,
    /// its coefficientwise error majorant, and the number of series products.
    fn exponent_sum(
        &self,
        qp: &QParam,
        diffs: &[TruncSeries],
    ) -> Result<(TruncSeries, TruncSeries, usize)> {
        let first = diffs
            .first()
            .ok_or_else(|| Error::InvalidArgument("empty exponent".into()))?;
        let mut sum = TruncSeries::zero(first.nvars(), first.cap())?;
        let mut err = sum.clone();
        let qm1 = qp.q() - 1.0;
        let zetas: Vec<_> = (2..=diffs.len() as u32 + 1)
            .map(|j| self.zeta(&[j], qp))
            .collect::<Result<_>>()?;
        for (i, diff) in diffs.iter().enumerate() {
            let k = i as u32 + 2;
            let mut ck = 0.0;
            let mut dk = 0.0;
            for j in 2..=k {
                let zj = &zetas[(j - 2) as usize];
                let w = qm1.powi((k - j) as i32);
                ck += w * zj.value;
                dk += w.abs() * zj.error_bound();
            }
            ck /= f64::from(k);
            dk /= f64::from(k);
            sum = sum.add(&diff.scale_real(ck))?;
            err = err.add(&diff.majorant().scale_real(dk))?;
        }
        let muls = diffs.len() * (diffs.len() + 2) + first.cap();
        Ok((sum, err, muls))
    }
}

fn q_of(qp: &QParam) -> f64 {
    qp.q()
}

fn check_cap(cap: usize) -> Result<()> {
    if !(2..=10).contains(&cap) {
        return Err(Error::InvalidArgument(format!(
            "degree cap must lie in 2..=10, got {cap}"
        )));
    }
    Ok(())
}

/// Coefficientwise bound on `exp(E + dE) - exp(E)` given `|dE| <= err`:
/// `exp(|E| + err) - exp(|E|)`, valid because `exp` has nonnegative Taylor
/// coefficients.
fn exp_error(exponent: &TruncSeries, err: &TruncSeries) -> Result<TruncSeries> {
    let base = exponent.majorant();
    base.add(err)?.exp()?.sub(&base.exp()?)
}

fn series_rows(s: &TruncSeries, err: &TruncSeries) -> Vec<TableEntry> {
    s.monomials()
        .into_iter()
        .map(|key| TableEntry {
            value: s.coeff(&key),
            bound: err.coeff(&key).re,
            key,
        })
        .collect()
}

/// `q^m/[m] (prod_c 1/(1 - t w_c) - sum_{n <= N} t^n h_n(w))` with
/// `w_c = q^c/[c]`: the exact tail of the `A_m` series at `|x| = t` once
/// `A(m, n) = q^m/[m] h_n(w)` is granted. The complete homogeneous values come
/// from their own recurrence, independent of the nested sums.
fn a_series_tail(m: u64, t: f64, n_max: u32, q: f64) -> Result<f64> {
    let weights: Vec<f64> = (1..=m)
        .map(|c| powi(q, c as i64) / qint_raw(c as i64, q))
        .collect();
    let mut product = 1.0;
    for &w in &weights {
        let f = 1.0 - t * w;
        if f <= 0.0 {
            return Err(Error::PoleProximity { m, distance: f });
        }
        product /= f;
    }
    let n_max = n_max as usize;
    // h[n] over the variables seen so far
    let mut h = vec![0.0; n_max + 1];
    h[0] = 1.0;
    for &w in &weights {
        for n in 1..=n_max {
            h[n] += w * h[n - 1];
        }
    }
    let partial: f64 = h
        .iter()
        .enumerate()
        .map(|(n, v)| t.powi(n as i32) * v)
        .sum();
    let head = powi(q, m as i64) / qint_raw(m as i64, q);
    let tail = (product - partial).max(0.0);
    Ok(head * (tail + 4.0 * f64::EPSILON * product * (n_max + m as usize) as f64))
}
