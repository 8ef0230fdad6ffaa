//! Truncated Taylor series with complex coefficients.
//!
//! A [`TaylorSeries`] stores the expansion `sum_k c_k (t - t0)^k` of a
//! holomorphic function around a base point `t0`, truncated at a fixed
//! degree. Arithmetic truncates to the smaller operand order, so accuracy
//! loss across a pipeline is visible in the order of the result.
//!
//! Branch conventions: `sqrt`, `root4`, and `log` take the principal branch
//! on the constant coefficient (argument in (-pi, pi]). Coefficients with
//! magnitude below 1e-300 are flushed to zero to avoid subnormal noise.

use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::{Error, Result};

/// Default truncation degree for pipeline-built series.
pub const DEFAULT_ORDER: usize = 24;

/// Magnitude below which a coefficient component is treated as zero.
const FLUSH_THRESHOLD: f64 = 1e-300;

/// Tolerance used by reversion preconditions (c0 = 0, c1 != 0).
const REVERT_EPS: f64 = 1e-12;

fn flush(c: Complex64) -> Complex64 {
    let re = if c.re.abs() < FLUSH_THRESHOLD { 0.0 } else { c.re };
    let im = if c.im.abs() < FLUSH_THRESHOLD { 0.0 } else { c.im };
    Complex64::new(re, im)
}

fn is_finite(c: Complex64) -> bool {
    c.re.is_finite() && c.im.is_finite()
}

/// Truncated power series `sum_k c_k (t - base)^k`.
///
/// `radius` is a trust radius for evaluation: `Some(r)` restricts
/// [`evaluate`](TaylorSeries::evaluate) to `|t - base| < r`, `None` means
/// unknown and leaves evaluation unguarded. Exact builders (constants, the
/// identity) carry `Some(f64::INFINITY)`; operations that can introduce
/// singularities at unknown distance (division, roots, log, reversion)
/// reset it to unknown.
#[derive(Clone, Debug, PartialEq)]
pub struct TaylorSeries {
    base: Complex64,
    coeffs: Vec<Complex64>,
    radius: Option<f64>,
}

impl TaylorSeries {
    /// Builds a series from explicit coefficients (index k is the
    /// coefficient of `(t - base)^k`). The trust radius starts unknown.
    pub fn new(base: Complex64, coeffs: Vec<Complex64>) -> Result<Self> {
        if coeffs.is_empty() || !is_finite(base) || !coeffs.iter().all(|&c| is_finite(c)) {
            return Err(Error::InvalidCoefficients);
        }
        Ok(Self::from_parts(base, coeffs, None))
    }

    fn from_parts(base: Complex64, coeffs: Vec<Complex64>, radius: Option<f64>) -> Self {
        debug_assert!(!coeffs.is_empty());
        let coeffs = coeffs.into_iter().map(flush).collect();
        TaylorSeries { base, coeffs, radius }
    }

    /// Constant series of the given truncation degree.
    pub fn constant(base: Complex64, value: Complex64, order: usize) -> Self {
        let mut coeffs = vec![Complex64::new(0.0, 0.0); order + 1];
        coeffs[0] = value;
        Self::from_parts(base, coeffs, Some(f64::INFINITY))
    }

    /// The identity function `t`, expanded around `base`.
    pub fn variable(base: Complex64, order: usize) -> Self {
        let order = order.max(1);
        let mut coeffs = vec![Complex64::new(0.0, 0.0); order + 1];
        coeffs[0] = base;
        coeffs[1] = Complex64::new(1.0, 0.0);
        Self::from_parts(base, coeffs, Some(f64::INFINITY))
    }

    /// Zero series.
    pub fn zero(base: Complex64, order: usize) -> Self {
        Self::constant(base, Complex64::new(0.0, 0.0), order)
    }

    pub fn base(&self) -> Complex64 {
        self.base
    }

    /// Truncation degree N; the series holds N + 1 coefficients.
    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    /// Coefficient of `(t - base)^k`, zero beyond the truncation degree.
    pub fn coeff(&self, k: usize) -> Complex64 {
        self.coeffs.get(k).copied().unwrap_or(Complex64::new(0.0, 0.0))
    }

    pub fn radius_hint(&self) -> Option<f64> {
        self.radius
    }

    /// Overrides the trust radius; `None` removes the evaluation guard.
    pub fn with_radius_hint(mut self, radius: Option<f64>) -> Result<Self> {
        if let Some(r) = radius {
            if !(r > 0.0) {
                return Err(Error::InvalidRadius);
            }
        }
        self.radius = radius;
        Ok(self)
    }

    /// Copy truncated to `order` (no-op if already at most that long).
    pub fn truncated(&self, order: usize) -> Self {
        if order >= self.order() {
            return self.clone();
        }
        TaylorSeries {
            base: self.base,
            coeffs: self.coeffs[..=order].to_vec(),
            radius: self.radius,
        }
    }

    fn combine_radius(a: Option<f64>, b: Option<f64>) -> Option<f64> {
        match (a, b) {
            (Some(x), Some(y)) => Some(x.min(y)),
            _ => None,
        }
    }

    fn check_base(&self, rhs: &Self) -> Result<usize> {
        if self.base != rhs.base {
            return Err(Error::BaseMismatch);
        }
        Ok(self.order().min(rhs.order()))
    }

    pub fn add(&self, rhs: &Self) -> Result<Self> {
        let n = self.check_base(rhs)?;
        let coeffs = (0..=n).map(|k| self.coeffs[k] + rhs.coeffs[k]).collect();
        Ok(Self::from_parts(self.base, coeffs, Self::combine_radius(self.radius, rhs.radius)))
    }

    pub fn sub(&self, rhs: &Self) -> Result<Self> {
        let n = self.check_base(rhs)?;
        let coeffs = (0..=n).map(|k| self.coeffs[k] - rhs.coeffs[k]).collect();
        Ok(Self::from_parts(self.base, coeffs, Self::combine_radius(self.radius, rhs.radius)))
    }

    /// Cauchy product, truncated to the smaller operand order.
    pub fn mul(&self, rhs: &Self) -> Result<Self> {
        let n = self.check_base(rhs)?;
        let mut coeffs = vec![Complex64::new(0.0, 0.0); n + 1];
        for k in 0..=n {
            let mut acc = Complex64::new(0.0, 0.0);
            for j in 0..=k {
                acc += self.coeffs[j] * rhs.coeffs[k - j];
            }
            coeffs[k] = acc;
        }
        Ok(Self::from_parts(self.base, coeffs, Self::combine_radius(self.radius, rhs.radius)))
    }

    /// Division by a series with nonzero constant term. The quotient's
    /// trust radius is unknown: the denominator may vanish at unknown
    /// distance from the base.
    pub fn div(&self, rhs: &Self) -> Result<Self> {
        let n = self.check_base(rhs)?;
        let b0 = rhs.coeffs[0];
        if b0.re == 0.0 && b0.im == 0.0 {
            return Err(Error::DivisionByZeroConstantTerm);
        }
        let mut coeffs = vec![Complex64::new(0.0, 0.0); n + 1];
        for k in 0..=n {
            let mut acc = self.coeffs[k];
            for j in 1..=k {
                acc -= rhs.coeffs[j] * coeffs[k - j];
            }
            coeffs[k] = acc / b0;
        }
        Ok(Self::from_parts(self.base, coeffs, None))
    }

    pub fn neg(&self) -> Self {
        self.scale(Complex64::new(-1.0, 0.0))
    }

    /// Multiplies every coefficient by a constant.
    pub fn scale(&self, c: Complex64) -> Self {
        let coeffs = self.coeffs.iter().map(|&a| a * c).collect();
        Self::from_parts(self.base, coeffs, self.radius)
    }

    /// Adds a constant to the series value.
    pub fn add_scalar(&self, c: Complex64) -> Self {
        let mut coeffs = self.coeffs.clone();
        coeffs[0] += c;
        Self::from_parts(self.base, coeffs, self.radius)
    }

    /// Termwise derivative; the order drops by one.
    pub fn differentiate(&self) -> Self {
        if self.coeffs.len() == 1 {
            return Self::from_parts(self.base, vec![Complex64::new(0.0, 0.0)], self.radius);
        }
        let coeffs = (1..self.coeffs.len())
            .map(|k| self.coeffs[k] * (k as f64))
            .collect();
        Self::from_parts(self.base, coeffs, self.radius)
    }

    /// Termwise antiderivative with integration constant zero; the order
    /// rises by one.
    pub fn integrate(&self) -> Self {
        let mut coeffs = vec![Complex64::new(0.0, 0.0); self.coeffs.len() + 1];
        for k in 0..self.coeffs.len() {
            coeffs[k + 1] = self.coeffs[k] / ((k + 1) as f64);
        }
        Self::from_parts(self.base, coeffs, self.radius)
    }

    /// exp of the series. Entire, so the trust radius carries over.
    pub fn exp(&self) -> Self {
        let n = self.order();
        let mut coeffs = vec![Complex64::new(0.0, 0.0); n + 1];
        coeffs[0] = self.coeffs[0].exp();
        for k in 1..=n {
            let mut acc = Complex64::new(0.0, 0.0);
            for j in 1..=k {
                acc += self.coeffs[j] * (j as f64) * coeffs[k - j];
            }
            coeffs[k] = acc / (k as f64);
        }
        Self::from_parts(self.base, coeffs, self.radius)
    }

    pub fn cosh(&self) -> Self {
        let ep = self.exp();
        let em = self.neg().exp();
        // same base by construction
        ep.add(&em).expect("same base").scale(Complex64::new(0.5, 0.0))
    }

    pub fn sinh(&self) -> Self {
        let ep = self.exp();
        let em = self.neg().exp();
        ep.sub(&em).expect("same base").scale(Complex64::new(0.5, 0.0))
    }

    /// Principal square root; requires a nonzero constant term.
    pub fn sqrt(&self) -> Result<Self> {
        let n = self.order();
        let a0 = self.coeffs[0];
        if a0.re == 0.0 && a0.im == 0.0 {
            return Err(Error::RootAtBranchPoint);
        }
        let s0 = a0.sqrt();
        let mut coeffs = vec![Complex64::new(0.0, 0.0); n + 1];
        coeffs[0] = s0;
        let two_s0 = s0 * 2.0;
        for k in 1..=n {
            let mut acc = self.coeffs[k];
            for j in 1..k {
                acc -= coeffs[j] * coeffs[k - j];
            }
            coeffs[k] = acc / two_s0;
        }
        Ok(Self::from_parts(self.base, coeffs, None))
    }

    /// Principal fourth root (argument of the constant term lands in
    /// (-pi/4, pi/4]); iterated principal square roots realize exactly that.
    pub fn root4(&self) -> Result<Self> {
        self.sqrt()?.sqrt()
    }

    /// Principal logarithm; requires a nonzero constant term.
    pub fn log(&self) -> Result<Self> {
        let a0 = self.coeffs[0];
        if a0.re == 0.0 && a0.im == 0.0 {
            return Err(Error::LogAtZero);
        }
        // log(A) = ln(a0) + integral of A'/A, exact through the truncation
        // degree because differentiate/div work one order lower.
        let l = self.differentiate().div(self)?.integrate();
        let mut out = l.add_scalar(a0.ln());
        out.radius = None;
        Ok(out)
    }

    /// Integer power; negative exponents divide into one.
    pub fn powi(&self, n: i32) -> Result<Self> {
        let one = Self::constant(self.base, Complex64::new(1.0, 0.0), self.order());
        if n == 0 {
            return Ok(one);
        }
        let mut result = one.clone();
        let mut acc = self.clone();
        let mut e = n.unsigned_abs();
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul(&acc)?;
            }
            e >>= 1;
            if e > 0 {
                acc = acc.mul(&acc)?;
            }
        }
        if n < 0 {
            result = one.div(&result)?;
        }
        Ok(result)
    }

    /// Formal composition `self(inner(s))`: Horner evaluation of the
    /// truncated polynomial at the inner series. The result lives at the
    /// inner base; its order is the smaller of the two operand orders.
    pub fn compose(&self, inner: &Self) -> Result<Self> {
        if let Some(r) = self.radius {
            if (inner.coeffs[0] - self.base).norm() >= r {
                return Err(Error::CompositionOutsideRadius);
            }
        }
        let n = self.order().min(inner.order());
        let dx = inner.truncated(n).add_scalar(-self.base);
        let mut acc = TaylorSeries::constant(inner.base, self.coeff(self.order()), n);
        for k in (0..self.order()).rev() {
            acc = acc.mul(&dx)?.add_scalar(self.coeff(k));
        }
        acc.radius = Self::combine_radius(self.radius, inner.radius);
        Ok(acc)
    }

    /// Series reversion: returns B with `self(B(s)) = s` through the
    /// truncation degree. Requires c0 = 0 and c1 != 0. B is developed
    /// around 0 in the value plane and its constant term is `self.base`,
    /// so `compose(self, B)` is the identity around 0 and
    /// `compose(B, self)` the identity around `self.base`.
    pub fn revert(&self) -> Result<Self> {
        let n = self.order();
        if self.coeffs[0].norm() > REVERT_EPS || n < 1 {
            return Err(Error::NotInvertibleAtBase);
        }
        let a1 = self.coeffs[1];
        if a1.norm() <= REVERT_EPS {
            return Err(Error::NotInvertibleAtBase);
        }
        // Offset form: a(tau) = sum_{k>=1} a_k tau^k with a true zero
        // constant term, so the triangular solve below is exact in shape.
        let mut a = self.coeffs.clone();
        a[0] = Complex64::new(0.0, 0.0);
        let a = TaylorSeries::from_parts(Complex64::new(0.0, 0.0), a, None);

        let mut b = vec![Complex64::new(0.0, 0.0); n + 1];
        b[1] = Complex64::new(1.0, 0.0) / a1;
        // b_m appears in coefficient m of a(b(s)) only through a1 * b_m;
        // everything else involves b_{<m}, so solve degree by degree.
        for m in 2..=n {
            let partial = TaylorSeries::from_parts(Complex64::new(0.0, 0.0), b[..=m].to_vec(), None);
            let c = a.truncated(m).compose(&partial)?;
            b[m] = -c.coeff(m) / a1;
        }
        b[0] = self.base;
        Ok(TaylorSeries::from_parts(Complex64::new(0.0, 0.0), b, None))
    }

    /// Horner evaluation at `t`, guarded by the trust radius when one is
    /// set.
    pub fn evaluate(&self, t: Complex64) -> Result<Complex64> {
        if let Some(r) = self.radius {
            if (t - self.base).norm() >= r {
                return Err(Error::OutsideTrustRadius);
            }
        }
        let dt = t - self.base;
        let mut acc = Complex64::new(0.0, 0.0);
        for &c in self.coeffs.iter().rev() {
            acc = acc * dt + c;
        }
        Ok(acc)
    }

    /// The series of `conj(self(conj(s)))`: conjugated coefficients around
    /// the conjugated base. This is how an antiholomorphic parameter change
    /// acts on holomorphic data while staying inside the series calculus.
    pub fn conj_coeffs(&self) -> Self {
        let coeffs = self.coeffs.iter().map(|c| c.conj()).collect();
        Self::from_parts(self.base.conj(), coeffs, self.radius)
    }

    /// Largest coefficient magnitude.
    pub fn max_coeff_norm(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// Largest coefficient-wise distance to `rhs`, padding the shorter
    /// series with zeros. Infinity when the bases differ.
    pub fn max_coeff_distance(&self, rhs: &Self) -> f64 {
        if self.base != rhs.base {
            return f64::INFINITY;
        }
        let n = self.coeffs.len().max(rhs.coeffs.len());
        (0..n).map(|k| (self.coeff(k) - rhs.coeff(k)).norm()).fold(0.0, f64::max)
    }

    /// Largest deviation from the constant function `c`: max of
    /// `|c0 - c|` and all higher coefficient magnitudes.
    pub fn deviation_from_constant(&self, c: Complex64) -> f64 {
        let mut d = (self.coeffs[0] - c).norm();
        for &a in &self.coeffs[1..] {
            d = d.max(a.norm());
        }
        d
    }
}
