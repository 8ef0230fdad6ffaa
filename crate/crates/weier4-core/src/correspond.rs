//! The bridge between R^4 and R^3 minimal surfaces: the classical R^3
//! representation from a single function g, finite-difference residuals of
//! the natural equation (R^3) and the system of natural equations (R^4),
//! the split of an R^4 curvature pair into two conformal factors and back,
//! and unitary Mobius equivalence of generating pairs.

use alloc::vec::Vec;

use num_complex::Complex64;

use crate::geometry::{GridSpec, SurfacePatch};
use crate::linalg::Vec4;
use crate::real;
use crate::series::TaylorSeries;
use crate::weierstrass::{Flavor, HoloPair};
use crate::{Error, Result};

/// Linear fractional transformation `g -> (-conj(b) + conj(a) g)/(a + b g)`
/// with `|a|^2 + |b|^2 = 1`; the unit-determinant unitary maps of the
/// g-sphere. Applying one per component of a pair moves the surface by a
/// rigid motion.
#[derive(Clone, Copy, Debug)]
pub struct MobiusMap {
    a: Complex64,
    b: Complex64,
}

impl MobiusMap {
    pub fn new(a: Complex64, b: Complex64) -> Result<Self> {
        if ((a.norm_sqr() + b.norm_sqr()) - 1.0).abs() > 1e-12 {
            return Err(Error::NotUnitary);
        }
        Ok(MobiusMap { a, b })
    }

    pub fn identity() -> Self {
        MobiusMap { a: Complex64::new(1.0, 0.0), b: Complex64::new(0.0, 0.0) }
    }

    pub fn a(&self) -> Complex64 {
        self.a
    }

    pub fn b(&self) -> Complex64 {
        self.b
    }

    /// The map acting as `self` after `first`; matches the product of the
    /// associated 2x2 unitary matrices.
    pub fn compose(&self, first: &MobiusMap) -> MobiusMap {
        MobiusMap {
            a: self.a * first.a - self.b * first.b.conj(),
            b: self.b * first.a.conj() + self.a * first.b,
        }
    }
}

/// An isotropic holomorphic curve in C^3: the derivative data of a minimal
/// surface in R^3, `x = Re integral Phi`.
#[derive(Clone, Debug)]
pub struct Phi3Curve {
    phi: [TaylorSeries; 3],
}

impl Phi3Curve {
    /// Validates the isotropy `phi1^2 + phi2^2 + phi3^2 = 0` (relative to
    /// the squared coefficient scale) and truncates to a common order.
    pub fn from_components(phi: [TaylorSeries; 3]) -> Result<Self> {
        if phi[1].base() != phi[0].base() || phi[2].base() != phi[0].base() {
            return Err(Error::BaseMismatch);
        }
        let order = phi.iter().map(|s| s.order()).min().unwrap();
        let phi: [TaylorSeries; 3] = [
            phi[0].truncated(order),
            phi[1].truncated(order),
            phi[2].truncated(order),
        ];
        let mut sq = phi[0].mul(&phi[0])?;
        for c in &phi[1..] {
            sq = sq.add(&c.mul(c)?)?;
        }
        let m = phi.iter().map(|s| s.max_coeff_norm()).fold(0.0, f64::max);
        if sq.max_coeff_norm() > 1e-10 * f64::max(1.0, m * m) {
            return Err(Error::NotIsotropic);
        }
        Ok(Phi3Curve { phi })
    }

    pub fn components(&self) -> &[TaylorSeries; 3] {
        &self.phi
    }

    pub fn base(&self) -> Complex64 {
        self.phi[0].base()
    }

    pub fn order(&self) -> usize {
        self.phi[0].order()
    }

    pub fn eval(&self, t: Complex64) -> Result<[Complex64; 3]> {
        Ok([
            self.phi[0].evaluate(t)?,
            self.phi[1].evaluate(t)?,
            self.phi[2].evaluate(t)?,
        ])
    }
}

/// What a scalar grid sample represents; `Nu` fields must be positive.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FieldRole {
    Nu,
    GaussK,
    NormalKappa,
}

/// A rectangular grid of real samples with uniform spacing, row-major.
#[derive(Clone, Debug)]
pub struct ScalarField {
    role: FieldRole,
    h: f64,
    rows: usize,
    cols: usize,
    values: Vec<f64>,
}

impl ScalarField {
    pub fn new(
        role: FieldRole,
        h: f64,
        rows: usize,
        cols: usize,
        values: Vec<f64>,
    ) -> Result<Self> {
        if !(h > 0.0) || rows == 0 || cols == 0 {
            return Err(Error::InvalidGrid);
        }
        if values.len() != rows * cols {
            return Err(Error::FieldShapeMismatch);
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFiniteField);
        }
        if role == FieldRole::Nu && values.iter().any(|&v| !(v > 0.0)) {
            return Err(Error::NonPositiveNu);
        }
        Ok(ScalarField { role, h, rows, cols, values })
    }

    /// Evaluates `f(u, v)` on every node of `grid`.
    pub fn sample<F>(role: FieldRole, grid: &GridSpec, mut f: F) -> Result<Self>
    where
        F: FnMut(f64, f64) -> Result<f64>,
    {
        let mut values = Vec::with_capacity(grid.n_nodes());
        for r in 0..grid.rows {
            for c in 0..grid.cols {
                let (u, v) = grid.node(r, c);
                values.push(f(u, v)?);
            }
        }
        Self::new(role, grid.h, grid.rows, grid.cols, values)
    }

    pub fn role(&self) -> FieldRole {
        self.role
    }

    pub fn h(&self) -> f64 {
        self.h
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn value(&self, r: usize, c: usize) -> f64 {
        self.values[r * self.cols + c]
    }
}

/// The R^3 representation of a minimal surface from one function:
/// `Phi = ((g^2 - 1)/(2 g'), -i (g^2 + 1)/(2 g'), -g/g')`.
pub fn build_r3(g: &TaylorSeries) -> Result<Phi3Curve> {
    let dg = g.differentiate();
    if dg.coeff(0).norm() <= 1e-10 {
        return Err(Error::DegenerateG);
    }
    let i = Complex64::new(0.0, 1.0);
    let g2 = g.mul(g)?;
    let phi1 = g2.add_scalar(Complex64::new(-1.0, 0.0)).scale(Complex64::new(0.5, 0.0)).div(&dg)?;
    let phi2 = g2.add_scalar(Complex64::new(1.0, 0.0)).scale(i * -0.5).div(&dg)?;
    let phi3 = g.scale(Complex64::new(-1.0, 0.0)).div(&dg)?;
    Phi3Curve::from_components([phi1, phi2, phi3])
}

/// Componentwise antiderivative pinned to vanish at the base point.
pub fn integrate_phi3(phi: &Phi3Curve) -> [TaylorSeries; 3] {
    let c = phi.components();
    [c[0].integrate(), c[1].integrate(), c[2].integrate()]
}

/// Evaluates the R^3 surface `x = Re Psi` on a grid, embedded in R^4 with a
/// zero fourth coordinate so the patch utilities (Laplacian residuals,
/// exporters) apply unchanged.
pub fn eval_patch_r3(psi: &[TaylorSeries; 3], grid: &GridSpec) -> Result<SurfacePatch> {
    let dpsi = [
        psi[0].differentiate(),
        psi[1].differentiate(),
        psi[2].differentiate(),
    ];
    let mut points = Vec::with_capacity(grid.n_nodes());
    let mut e = Vec::with_capacity(grid.n_nodes());
    for r in 0..grid.rows {
        for c in 0..grid.cols {
            let t = grid.t(r, c);
            let mut x: Vec4 = [0.0; 4];
            let mut n2 = 0.0;
            for i in 0..3 {
                x[i] = psi[i].evaluate(t)?.re;
                n2 += dpsi[i].evaluate(t)?.norm_sqr();
            }
            let ei = 0.5 * n2;
            if !(ei > 0.0) {
                return Err(Error::DegeneratePoint);
            }
            points.push(x);
            e.push(ei);
        }
    }
    let origin = Complex64::new(0.0, 0.0);
    let origin_pinned = match psi[0].evaluate(origin) {
        Ok(_) => {
            let mut s = 0.0;
            for component in psi {
                s += component.evaluate(origin)?.norm_sqr();
            }
            s < 1e-20
        }
        Err(_) => false,
    };
    SurfacePatch::from_parts(*grid, points, e, origin_pinned)
}

/// The conformal factor generated by g in R^3:
/// `nu = 4 |g'|^2 / (|g|^2 + 1)^2`.
pub fn nu_r3(g: &TaylorSeries, t: Complex64) -> Result<f64> {
    let gv = g.evaluate(t)?;
    let dgv = g.differentiate().evaluate(t)?;
    let d = gv.norm_sqr() + 1.0;
    Ok(4.0 * dgv.norm_sqr() / (d * d))
}

fn five_point_laplacian(values: &[f64], cols: usize, idx: usize, h: f64) -> f64 {
    (values[idx - 1] + values[idx + 1] + values[idx - cols] + values[idx + cols]
        - 4.0 * values[idx])
        / (h * h)
}

/// Max interior residual of `Delta ln(nu) + 2 nu = 0` under the 5-point
/// stencil. For fields sampled from an exact solution this is pure
/// discretization error, O(h^2).
pub fn natural_residual_r3(nu: &ScalarField) -> Result<f64> {
    if nu.rows < 5 || nu.cols < 5 {
        return Err(Error::GridTooSmall);
    }
    if nu.values.iter().any(|&v| !(v > 0.0)) {
        return Err(Error::NonPositiveNu);
    }
    let ln_nu: Vec<f64> = nu.values.iter().map(|&v| real::ln(v)).collect();
    let mut worst = 0.0_f64;
    for r in 1..nu.rows - 1 {
        for c in 1..nu.cols - 1 {
            let idx = r * nu.cols + c;
            let lap = five_point_laplacian(&ln_nu, nu.cols, idx, nu.h);
            worst = worst.max((lap + 2.0 * nu.values[idx]).abs());
        }
    }
    Ok(worst)
}

/// Max interior residuals of the two coupled equations
/// `(K^2 - kappa^2)^{1/4} Delta ln|kappa - K| = 2 (2K - kappa)` and
/// `(K^2 - kappa^2)^{1/4} Delta ln|kappa + K| = 2 (2K + kappa)`,
/// evaluated with the flat 5-point Laplacian on the sampling grid.
///
/// Requires the general-type inequalities `K < 0`, `-K > |kappa|` at every
/// node (they make both logarithm arguments nonzero).
pub fn natural_residual_r4(k: &ScalarField, kappa: &ScalarField) -> Result<(f64, f64)> {
    if k.rows != kappa.rows || k.cols != kappa.cols || k.h != kappa.h {
        return Err(Error::FieldShapeMismatch);
    }
    if k.rows < 5 || k.cols < 5 {
        return Err(Error::GridTooSmall);
    }
    for (&kv, &kp) in k.values.iter().zip(&kappa.values) {
        if !(kv < 0.0) || !(-kv > kp.abs()) {
            return Err(Error::NotGeneralTypeField);
        }
    }
    let ln_minus: Vec<f64> = k
        .values
        .iter()
        .zip(&kappa.values)
        .map(|(&kv, &kp)| real::ln((kp - kv).abs()))
        .collect();
    let ln_plus: Vec<f64> = k
        .values
        .iter()
        .zip(&kappa.values)
        .map(|(&kv, &kp)| real::ln((kp + kv).abs()))
        .collect();

    let mut worst = (0.0_f64, 0.0_f64);
    for r in 1..k.rows - 1 {
        for c in 1..k.cols - 1 {
            let idx = r * k.cols + c;
            let kv = k.values[idx];
            let kp = kappa.values[idx];
            let quarter = real::sqrt(real::sqrt(kv * kv - kp * kp));
            let r1 = quarter * five_point_laplacian(&ln_minus, k.cols, idx, k.h)
                - 2.0 * (2.0 * kv - kp);
            let r2 = quarter * five_point_laplacian(&ln_plus, k.cols, idx, k.h)
                - 2.0 * (2.0 * kv + kp);
            worst = (worst.0.max(r1.abs()), worst.1.max(r2.abs()));
        }
    }
    Ok(worst)
}

/// Splits the curvature data of the pair `(g1, g2)` into the two conformal
/// factors `nu_i = 4 |g_i'|^2 / (|g_i|^2 + 1)^2` and recombines them:
/// `K = -1/2 sqrt(nu1 nu2) (nu1 + nu2)`,
/// `kappa = 1/2 sqrt(nu1 nu2) (nu1 - nu2)`.
/// Returns `(nu1, nu2, K, kappa)`.
pub fn split_combine(
    g1: &TaylorSeries,
    g2: &TaylorSeries,
    t: Complex64,
) -> Result<(f64, f64, f64, f64)> {
    if g1.differentiate().evaluate(t)?.norm() <= 1e-10
        || g2.differentiate().evaluate(t)?.norm() <= 1e-10
    {
        return Err(Error::DegenerateG);
    }
    let nu1 = nu_r3(g1, t)?;
    let nu2 = nu_r3(g2, t)?;
    let root = real::sqrt(nu1 * nu2);
    Ok((nu1, nu2, -0.5 * root * (nu1 + nu2), 0.5 * root * (nu1 - nu2)))
}

/// Applies the unitary Mobius map to a generating function.
pub fn mobius_apply(g: &TaylorSeries, m: &MobiusMap) -> Result<TaylorSeries> {
    let num = g.scale(m.a.conj()).add_scalar(-m.b.conj());
    let den = g.scale(m.b).add_scalar(m.a);
    if den.coeff(0).norm() < 1e-12 {
        return Err(Error::PoleAtBase);
    }
    num.div(&den)
}

/// Decides whether two g-flavor pairs generate congruent surfaces, by
/// comparing their curvature fields on the grid: the pairs are related by
/// componentwise unitary Mobius maps — equivalently the surfaces by a
/// proper motion — exactly when `(K, kappa)` agree as functions of the
/// canonical parameter.
pub fn equivalent_pairs(p: &HoloPair, q: &HoloPair, grid: &GridSpec) -> Result<bool> {
    if p.flavor() != Flavor::G || q.flavor() != Flavor::G {
        return Err(Error::FlavorMismatch);
    }
    for r in 0..grid.rows {
        for c in 0..grid.cols {
            let t = grid.t(r, c);
            let (kp, kapp) = canonical_g_curvatures(p, t)?;
            let (kq, kapq) = canonical_g_curvatures(q, t)?;
            let tol = 1e-8 * f64::max(1.0, kp.abs().max(kq.abs()));
            if (kp - kq).abs() > tol || (kapp - kapq).abs() > tol {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

fn canonical_g_curvatures(pair: &HoloPair, t: Complex64) -> Result<(f64, f64)> {
    let dp = pair.p().differentiate().evaluate(t)?;
    let dq = pair.q().differentiate().evaluate(t)?;
    if dp.norm() <= 1e-10 || dq.norm() <= 1e-10 {
        return Err(Error::NotGeneralType);
    }
    crate::curvature::curvatures_closed_form(
        crate::curvature::ClosedFormKind::CanonicalG,
        None,
        pair,
        t,
    )
}
