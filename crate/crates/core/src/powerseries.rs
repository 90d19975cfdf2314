//! Truncated power series in up to three variables with complex coefficients.
//!
//! Truncation is by total degree: a series with cap `D` stores every monomial
//! of total degree at most `D` and products drop everything above. Storage is a
//! dense `(D + 1)^nvars` cube; slots above the cap are kept at zero, which lets
//! a product add flat indices directly.

use num_complex::Complex64;

use crate::error::{Error, Result};

pub const MAX_VARS: usize = 3;

/// Default verification cap.
pub const DEFAULT_CAP: usize = 8;

#[derive(Debug, Clone, PartialEq)]
pub struct TruncSeries {
    nvars: usize,
    cap: usize,
    coeffs: Vec<Complex64>,
}

fn zero() -> Complex64 {
    Complex64::new(0.0, 0.0)
}

impl TruncSeries {
    pub fn zero(nvars: usize, cap: usize) -> Result<Self> {
        if !(1..=MAX_VARS).contains(&nvars) {
            return Err(Error::ShapeMismatch(format!(
                "between 1 and {MAX_VARS} variables supported, got {nvars}"
            )));
        }
        let len = (cap + 1).pow(nvars as u32);
        Ok(Self {
            nvars,
            cap,
            coeffs: vec![zero(); len],
        })
    }

    pub fn constant(nvars: usize, cap: usize, c: Complex64) -> Result<Self> {
        let mut s = Self::zero(nvars, cap)?;
        s.coeffs[0] = c;
        Ok(s)
    }

    pub fn one(nvars: usize, cap: usize) -> Result<Self> {
        Self::constant(nvars, cap, Complex64::new(1.0, 0.0))
    }

    /// The variable with index `var` (0 = x, 1 = y, 2 = z).
    pub fn var(nvars: usize, cap: usize, var: usize) -> Result<Self> {
        let mut exps = [0u32; MAX_VARS];
        if var >= nvars {
            return Err(Error::ShapeMismatch(format!(
                "variable {var} out of range for {nvars} variables"
            )));
        }
        exps[var] = 1;
        Self::monomial(nvars, cap, &exps[..nvars], Complex64::new(1.0, 0.0))
    }

    pub fn monomial(nvars: usize, cap: usize, exps: &[u32], c: Complex64) -> Result<Self> {
        let mut s = Self::zero(nvars, cap)?;
        s.set_coeff(exps, c)?;
        Ok(s)
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn cap(&self) -> usize {
        self.cap
    }

    fn flat(&self, exps: &[u32]) -> Option<usize> {
        if exps.len() != self.nvars {
            return None;
        }
        let deg: u32 = exps.iter().sum();
        if deg as usize > self.cap {
            return None;
        }
        let base = self.cap + 1;
        Some(exps.iter().rev().fold(0, |acc, &e| acc * base + e as usize))
    }

    fn unflat(&self, mut pos: usize) -> [u32; MAX_VARS] {
        let base = self.cap + 1;
        let mut exps = [0u32; MAX_VARS];
        for slot in exps.iter_mut().take(self.nvars) {
            *slot = (pos % base) as u32;
            pos /= base;
        }
        exps
    }

    /// Coefficient of `x^e0 y^e1 z^e2`; zero above the cap.
    pub fn coeff(&self, exps: &[u32]) -> Complex64 {
        self.flat(exps).map_or_else(zero, |i| self.coeffs[i])
    }

    pub fn set_coeff(&mut self, exps: &[u32], c: Complex64) -> Result<()> {
        let i = self.flat(exps).ok_or_else(|| {
            Error::ShapeMismatch(format!(
                "monomial {exps:?} outside {} variables with cap {}",
                self.nvars, self.cap
            ))
        })?;
        self.coeffs[i] = c;
        Ok(())
    }

    /// Flat positions and total degrees of every monomial within the cap.
    fn support(&self) -> Vec<(usize, usize)> {
        (0..self.coeffs.len())
            .filter_map(|pos| {
                let deg: u32 = self.unflat(pos).iter().sum();
                (deg as usize <= self.cap).then_some((pos, deg as usize))
            })
            .collect()
    }

    /// Nonzero terms in graded order (by total degree, then exponents).
    pub fn terms(&self) -> Vec<(Vec<u32>, Complex64)> {
        let mut out: Vec<_> = self
            .support()
            .into_iter()
            .filter(|&(pos, _)| self.coeffs[pos] != zero())
            .map(|(pos, deg)| {
                let e = self.unflat(pos);
                (deg, e[..self.nvars].to_vec(), self.coeffs[pos])
            })
            .collect();
        out.sort_by(|a, b| a.0.cmp(&b.0).then_with(|| b.1.cmp(&a.1)));
        out.into_iter().map(|(_, e, c)| (e, c)).collect()
    }

    /// Every monomial within the cap, zero coefficients included.
    pub fn monomials(&self) -> Vec<Vec<u32>> {
        let mut out: Vec<_> = self
            .support()
            .into_iter()
            .map(|(pos, deg)| (deg, self.unflat(pos)[..self.nvars].to_vec()))
            .collect();
        out.sort_by(|a, b| a.0.cmp(&b.0).then_with(|| b.1.cmp(&a.1)));
        out.into_iter().map(|(_, e)| e).collect()
    }

    fn check_shape(&self, other: &Self) -> Result<()> {
        if self.nvars != other.nvars || self.cap != other.cap {
            return Err(Error::ShapeMismatch(format!(
                "({} vars, cap {}) vs ({} vars, cap {})",
                self.nvars, self.cap, other.nvars, other.cap
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_shape(other)?;
        let mut out = self.clone();
        for (a, b) in out.coeffs.iter_mut().zip(&other.coeffs) {
            *a += b;
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_shape(other)?;
        let mut out = self.clone();
        for (a, b) in out.coeffs.iter_mut().zip(&other.coeffs) {
            *a -= b;
        }
        Ok(out)
    }

    pub fn scale(&self, c: Complex64) -> Self {
        let mut out = self.clone();
        for a in &mut out.coeffs {
            *a *= c;
        }
        out
    }

    pub fn scale_real(&self, c: f64) -> Self {
        self.scale(Complex64::new(c, 0.0))
    }

    /// Cauchy product truncated at the cap.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_shape(other)?;
        let support = self.support();
        let left: Vec<_> = support
            .iter()
            .copied()
            .filter(|&(p, _)| self.coeffs[p] != zero())
            .collect();
        let right: Vec<_> = support
            .iter()
            .copied()
            .filter(|&(p, _)| other.coeffs[p] != zero())
            .collect();
        let mut out = Self::zero(self.nvars, self.cap)?;
        for &(i, di) in &left {
            let a = self.coeffs[i];
            for &(j, dj) in &right {
                // per-variable exponents stay below cap + 1, so flat indices add
                if di + dj <= self.cap {
                    out.coeffs[i + j] += a * other.coeffs[j];
                }
            }
        }
        Ok(out)
    }

    pub fn pow(&self, k: u32) -> Result<Self> {
        let mut acc = Self::one(self.nvars, self.cap)?;
        for _ in 0..k {
            acc = acc.mul(self)?;
        }
        Ok(acc)
    }

    pub fn constant_term(&self) -> Complex64 {
        self.coeffs[0]
    }

    /// `exp(a)` for `a` without constant term; exact at the cap since `a` is
    /// nilpotent there.
    pub fn exp(&self) -> Result<Self> {
        if self.constant_term() != zero() {
            return Err(Error::ConstantTerm(format!(
                "exp needs a zero constant term, got {}",
                self.constant_term()
            )));
        }
        let one = Self::one(self.nvars, self.cap)?;
        let mut acc = one.clone();
        for k in (1..=self.cap).rev() {
            acc = one.add(&self.mul(&acc)?.scale_real(1.0 / k as f64))?;
        }
        Ok(acc)
    }

    /// `log(a)` for `a` with constant term 1.
    pub fn log(&self) -> Result<Self> {
        let c0 = self.constant_term();
        if (c0 - Complex64::new(1.0, 0.0)).norm() > 1e-12 {
            return Err(Error::ConstantTerm(format!(
                "log needs constant term 1, got {c0}"
            )));
        }
        let mut b = self.clone();
        b.coeffs[0] = zero();
        if self.cap == 0 {
            return Ok(b);
        }
        let sign = |k: usize| if k % 2 == 1 { 1.0 } else { -1.0 };
        let mut acc = Self::constant(
            self.nvars,
            self.cap,
            Complex64::new(sign(self.cap) / self.cap as f64, 0.0),
        )?;
        for k in (1..self.cap).rev() {
            let c = Self::constant(
                self.nvars,
                self.cap,
                Complex64::new(sign(k) / k as f64, 0.0),
            )?;
            acc = c.add(&b.mul(&acc)?)?;
        }
        b.mul(&acc)
    }

    /// Coefficientwise absolute values, as a real series.
    pub fn majorant(&self) -> Self {
        let mut out = self.clone();
        for a in &mut out.coeffs {
            *a = Complex64::new(a.norm(), 0.0);
        }
        out
    }

    pub fn max_abs_coeff(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    pub fn max_abs_diff(&self, other: &Self) -> Result<f64> {
        Ok(self.sub(other)?.max_abs_coeff())
    }

    /// The slice where variable `var` has exponent zero.
    pub fn slice_zero(&self, var: usize) -> Result<Self> {
        if var >= self.nvars {
            return Err(Error::ShapeMismatch(format!("no variable {var}")));
        }
        let mut out = self.clone();
        for (pos, c) in out.coeffs.iter_mut().enumerate() {
            if self.unflat(pos)[var] != 0 {
                *c = zero();
            }
        }
        Ok(out)
    }

    /// Drops the variable `var`, keeping only terms where it is absent.
    pub fn drop_var(&self, var: usize) -> Result<Self> {
        let slice = self.slice_zero(var)?;
        let mut out = Self::zero(self.nvars - 1, self.cap)?;
        for (pos, _) in slice.support() {
            let e = slice.unflat(pos);
            if e[var] != 0 {
                continue;
            }
            let reduced: Vec<u32> = (0..self.nvars)
                .filter(|&i| i != var)
                .map(|i| e[i])
                .collect();
            out.set_coeff(&reduced, slice.coeffs[pos])?;
        }
        Ok(out)
    }
}

/// Power sums `p_k = alpha^k + beta^k`, `k = 1..=kmax`, from `e1 = alpha + beta`
/// and `e2 = alpha beta` without separating the roots:
/// `p_1 = e1`, `p_2 = e1^2 - 2 e2`, `p_k = e1 p_{k-1} - e2 p_{k-2}`.
pub fn newton_power_sums(
    e1: &TruncSeries,
    e2: &TruncSeries,
    kmax: usize,
) -> Result<Vec<TruncSeries>> {
    e1.check_shape(e2)?;
    if kmax == 0 {
        return Err(Error::InvalidArgument("kmax must be at least 1".into()));
    }
    let mut out = vec![e1.clone()];
    if kmax >= 2 {
        out.push(e1.mul(e1)?.sub(&e2.scale_real(2.0))?);
    }
    for k in 3..=kmax {
        let next = e1.mul(&out[k - 2])?.sub(&e2.mul(&out[k - 3])?)?;
        out.push(next);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn one_plus_x_times_one_minus_x() {
        let one = TruncSeries::one(1, 2).unwrap();
        let x = TruncSeries::var(1, 2, 0).unwrap();
        let p = one.add(&x).unwrap().mul(&one.sub(&x).unwrap()).unwrap();
        assert_eq!(p.coeff(&[0]), c(1.0));
        assert_eq!(p.coeff(&[1]), c(0.0));
        assert_eq!(p.coeff(&[2]), c(-1.0));
    }

    #[test]
    fn products_above_cap_vanish() {
        let x = TruncSeries::var(2, 1, 0).unwrap();
        let y = TruncSeries::var(2, 1, 1).unwrap();
        let s = x.add(&y).unwrap();
        assert_eq!(s.mul(&s).unwrap().max_abs_coeff(), 0.0);
    }

    #[test]
    fn square_of_one_plus_x_plus_y() {
        let one = TruncSeries::one(2, 2).unwrap();
        let x = TruncSeries::var(2, 2, 0).unwrap();
        let y = TruncSeries::var(2, 2, 1).unwrap();
        let s = one.add(&x).unwrap().add(&y).unwrap();
        let sq = s.mul(&s).unwrap();
        let expect = [
            ([0, 0], 1.0),
            ([1, 0], 2.0),
            ([0, 1], 2.0),
            ([2, 0], 1.0),
            ([1, 1], 2.0),
            ([0, 2], 1.0),
        ];
        for (e, v) in expect {
            assert_eq!(sq.coeff(&e), c(v), "{e:?}");
        }
        assert_eq!(sq.terms().len(), 6);
    }

    #[test]
    fn exp_examples() {
        let z = TruncSeries::zero(1, 3).unwrap();
        assert_eq!(z.exp().unwrap(), TruncSeries::one(1, 3).unwrap());
        let x = TruncSeries::var(1, 3, 0).unwrap();
        let e = x.exp().unwrap();
        for (k, v) in [1.0, 1.0, 0.5, 1.0 / 6.0].iter().enumerate() {
            assert!((e.coeff(&[k as u32]) - c(*v)).norm() < 1e-15);
        }
    }

    #[test]
    fn preconditions_enforced() {
        let one = TruncSeries::one(2, 3).unwrap();
        assert!(matches!(one.exp(), Err(Error::ConstantTerm(_))));
        let x = TruncSeries::var(2, 3, 0).unwrap();
        assert!(matches!(x.log(), Err(Error::ConstantTerm(_))));
        let other = TruncSeries::one(2, 4).unwrap();
        assert!(matches!(one.add(&other), Err(Error::ShapeMismatch(_))));
        assert!(matches!(
            one.mul(&TruncSeries::one(3, 3).unwrap()),
            Err(Error::ShapeMismatch(_))
        ));
        assert!(TruncSeries::zero(4, 2).is_err());
        assert!(TruncSeries::var(2, 2, 2).is_err());
    }

    #[test]
    fn newton_sums_on_diagonal() {
        // e1 = x + y, e2 = xy gives alpha = x, beta = y
        let x = TruncSeries::var(2, 8, 0).unwrap();
        let y = TruncSeries::var(2, 8, 1).unwrap();
        let e1 = x.add(&y).unwrap();
        let e2 = x.mul(&y).unwrap();
        let p = newton_power_sums(&e1, &e2, 6).unwrap();
        assert_eq!(p[0], e1);
        for k in 1..=6u32 {
            let want = x.pow(k).unwrap().add(&y.pow(k).unwrap()).unwrap();
            assert!(
                p[k as usize - 1].max_abs_diff(&want).unwrap() < 1e-12,
                "k={k}"
            );
        }
    }

    #[test]
    fn slices() {
        let x = TruncSeries::var(3, 3, 0).unwrap();
        let z = TruncSeries::var(3, 3, 2).unwrap();
        let s = x.add(&z).unwrap().add(&x.mul(&z).unwrap()).unwrap();
        let sl = s.slice_zero(2).unwrap();
        assert_eq!(sl, x);
        let dropped = s.drop_var(2).unwrap();
        assert_eq!(dropped, TruncSeries::var(2, 3, 0).unwrap());
    }
}
