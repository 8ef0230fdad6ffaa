//! From the holomorphic curve to surface geometry: integration to the
//! position function, grid evaluation, fundamental forms, moving frames,
//! and rigid motions of the ambient R^4.

use alloc::vec::Vec;

use num_complex::Complex64;

use crate::linalg::{cross4, dot4, hermitian_dot, norm4, scale4, CVec4, Vec4};
use crate::real;
use crate::series::TaylorSeries;
use crate::weierstrass::PhiCurve;
use crate::{Error, Result};

/// Node-centered rectangular lattice in the (u, v) parameter plane with
/// uniform spacing `h` in both directions. Row index advances v, column
/// index advances u; nodes are stored row-major.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GridSpec {
    pub u0: f64,
    pub v0: f64,
    pub h: f64,
    pub rows: usize,
    pub cols: usize,
}

impl GridSpec {
    pub fn new(u0: f64, v0: f64, h: f64, rows: usize, cols: usize) -> Result<Self> {
        if !(h > 0.0) || !u0.is_finite() || !v0.is_finite() || rows == 0 || cols == 0 {
            return Err(Error::InvalidGrid);
        }
        Ok(GridSpec { u0, v0, h, rows, cols })
    }

    /// Closed rectangle `[u_lo, u_hi] x [v_lo, v_hi]` sampled with spacing
    /// `h`; the extents are rounded to whole numbers of steps.
    pub fn from_bounds(u_lo: f64, u_hi: f64, v_lo: f64, v_hi: f64, h: f64) -> Result<Self> {
        if !(h > 0.0) || !(u_hi > u_lo) || !(v_hi > v_lo) {
            return Err(Error::InvalidGrid);
        }
        let cols = real::round((u_hi - u_lo) / h) as usize + 1;
        let rows = real::round((v_hi - v_lo) / h) as usize + 1;
        Self::new(u_lo, v_lo, h, rows, cols)
    }

    /// Square grid `[lo, hi]^2`.
    pub fn square(lo: f64, hi: f64, h: f64) -> Result<Self> {
        Self::from_bounds(lo, hi, lo, hi, h)
    }

    pub fn node(&self, r: usize, c: usize) -> (f64, f64) {
        (self.u0 + (c as f64) * self.h, self.v0 + (r as f64) * self.h)
    }

    /// The node as a complex parameter `t = u + iv`.
    pub fn t(&self, r: usize, c: usize) -> Complex64 {
        let (u, v) = self.node(r, c);
        Complex64::new(u, v)
    }

    pub fn idx(&self, r: usize, c: usize) -> usize {
        r * self.cols + c
    }

    pub fn n_nodes(&self) -> usize {
        self.rows * self.cols
    }
}

/// A sampled surface: positions `x(u, v)` in R^4 and the conformal factor
/// `E` per node.
#[derive(Clone, Debug)]
pub struct SurfacePatch {
    pub grid: GridSpec,
    points: Vec<Vec4>,
    e: Vec<f64>,
    origin_pinned: bool,
}

impl SurfacePatch {
    /// Assembles a patch from raw node data (row-major, matching `grid`).
    pub fn from_parts(
        grid: GridSpec,
        points: Vec<Vec4>,
        e: Vec<f64>,
        origin_pinned: bool,
    ) -> Result<Self> {
        if points.len() != grid.n_nodes() || e.len() != grid.n_nodes() {
            return Err(Error::FieldShapeMismatch);
        }
        if points.iter().any(|p| p.iter().any(|x| !x.is_finite())) {
            return Err(Error::InvalidCoefficients);
        }
        if e.iter().any(|&x| !(x > 0.0) || !x.is_finite()) {
            return Err(Error::DegeneratePoint);
        }
        Ok(SurfacePatch { grid, points, e, origin_pinned })
    }

    pub fn point(&self, r: usize, c: usize) -> Vec4 {
        self.points[self.grid.idx(r, c)]
    }

    pub fn e(&self, r: usize, c: usize) -> f64 {
        self.e[self.grid.idx(r, c)]
    }

    pub fn points(&self) -> &[Vec4] {
        &self.points
    }

    pub fn e_values(&self) -> &[f64] {
        &self.e
    }

    pub fn origin_pinned(&self) -> bool {
        self.origin_pinned
    }
}

/// Proper rigid motion of R^4: `x -> A x + b` with `A` special orthogonal.
#[derive(Clone, Copy, Debug)]
pub struct Motion4 {
    pub a: [[f64; 4]; 4],
    pub b: Vec4,
}

impl Motion4 {
    pub fn new(a: [[f64; 4]; 4], b: Vec4) -> Result<Self> {
        let m = Motion4 { a, b };
        m.validate()?;
        Ok(m)
    }

    pub fn identity() -> Self {
        let mut a = [[0.0; 4]; 4];
        for k in 0..4 {
            a[k][k] = 1.0;
        }
        Motion4 { a, b: [0.0; 4] }
    }

    /// Checks A^T A = I and det A = +1 (both within 1e-12).
    pub fn validate(&self) -> Result<()> {
        for i in 0..4 {
            for j in 0..4 {
                let mut dot = 0.0;
                for k in 0..4 {
                    dot += self.a[k][i] * self.a[k][j];
                }
                let expected = if i == j { 1.0 } else { 0.0 };
                if (dot - expected).abs() > 1e-12 {
                    return Err(Error::NotOrthogonal);
                }
            }
        }
        if (crate::linalg::det4_real(&self.a) - 1.0).abs() > 1e-12 {
            return Err(Error::NotOrthogonal);
        }
        Ok(())
    }

    pub fn apply_point(&self, x: &Vec4) -> Vec4 {
        let mut y = self.b;
        for i in 0..4 {
            for j in 0..4 {
                y[i] += self.a[i][j] * x[j];
            }
        }
        y
    }
}

/// First- and second-order data of the surface at a point, in the
/// coordinate directions and in the orthonormal frame `(X1, X2, n1, n2)`.
///
/// `sigma_uu` and `sigma_uv` are the second-fundamental-form values on the
/// coordinate vectors `(x_u, x_u)` and `(x_u, x_v)`; minimality makes
/// `sigma(x_v, x_v) = -sigma_uu`. The frame is orthonormal and positively
/// oriented with `n1` along `sigma(X1, X1)`.
#[derive(Clone, Debug)]
pub struct FundamentalData {
    pub e: f64,
    pub sigma_uu: Vec4,
    pub sigma_uv: Vec4,
    pub frame: [Vec4; 4],
}

impl FundamentalData {
    /// Normal-ellipse semi-axis `nu = |sigma(X1, X1)|` (the frame-scaled
    /// second fundamental form: `sigma(X1, X1) = sigma_uu / E`).
    pub fn nu(&self) -> f64 {
        norm4(&self.sigma_uu) / self.e
    }

    /// The other invariant `mu = sigma(X1, X2) . n2`.
    pub fn mu(&self) -> f64 {
        dot4(&self.sigma_uv, &self.frame[3]) / self.e
    }
}

/// Componentwise antiderivative of the curve with the integration constant
/// pinned to zero, so the position function vanishes at the base point.
pub fn integrate_phi(phi: &PhiCurve) -> [TaylorSeries; 4] {
    let c = phi.components();
    [c[0].integrate(), c[1].integrate(), c[2].integrate(), c[3].integrate()]
}

/// Evaluates the surface `x = Re Psi` and the conformal factor
/// `E = |Phi|^2 / 2` on a grid.
pub fn eval_patch(psi: &[TaylorSeries; 4], grid: &GridSpec) -> Result<SurfacePatch> {
    let dpsi = [
        psi[0].differentiate(),
        psi[1].differentiate(),
        psi[2].differentiate(),
        psi[3].differentiate(),
    ];
    let mut points = Vec::with_capacity(grid.n_nodes());
    let mut e = Vec::with_capacity(grid.n_nodes());
    for r in 0..grid.rows {
        for c in 0..grid.cols {
            let t = grid.t(r, c);
            let mut x = [0.0; 4];
            let mut n2 = 0.0;
            for i in 0..4 {
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

/// The normal part of `Phi'` at `t`:
/// `Phi'perp = Phi' - (Phi' . conj(Phi) / |Phi|^2) Phi`. Hermitian-orthogonal
/// to both `Phi(t)` and its conjugate (the tangent plane).
pub fn normal_project(phi: &PhiCurve, t: Complex64) -> Result<CVec4> {
    let v = phi.eval(t)?;
    let d = phi.derivative();
    let dv = [
        d[0].evaluate(t)?,
        d[1].evaluate(t)?,
        d[2].evaluate(t)?,
        d[3].evaluate(t)?,
    ];
    let n2: f64 = v.iter().map(|c| c.norm_sqr()).sum();
    if real::sqrt(n2) <= 1e-10 {
        return Err(Error::DegeneratePoint);
    }
    let coef = hermitian_dot(&dv, &v) / n2;
    let mut out = dv;
    for i in 0..4 {
        out[i] -= coef * v[i];
    }
    Ok(out)
}

/// Fundamental forms and the canonical orthonormal frame at a point.
pub fn fundamental_data(phi: &PhiCurve, t: Complex64) -> Result<FundamentalData> {
    let v = phi.eval(t)?;
    let n2: f64 = v.iter().map(|c| c.norm_sqr()).sum();
    if real::sqrt(n2) <= 1e-10 {
        return Err(Error::DegeneratePoint);
    }
    let e = 0.5 * n2;

    let perp = normal_project(phi, t)?;
    let sigma_uu: Vec4 = [perp[0].re, perp[1].re, perp[2].re, perp[3].re];
    let sigma_uv: Vec4 = [-perp[0].im, -perp[1].im, -perp[2].im, -perp[3].im];

    let inv_sqrt_e = 1.0 / real::sqrt(e);
    let x1: Vec4 = core::array::from_fn(|i| v[i].re * inv_sqrt_e);
    let x2: Vec4 = core::array::from_fn(|i| -v[i].im * inv_sqrt_e);

    let s11 = scale4(&sigma_uu, 1.0 / e);
    let nu = norm4(&s11);
    if nu < 1e-10 {
        return Err(Error::UmbilicLikeFrame);
    }
    let n1 = scale4(&s11, 1.0 / nu);
    let raw = cross4(&x1, &x2, &n1);
    let raw_norm = norm4(&raw);
    if raw_norm < 1e-12 {
        return Err(Error::DegeneratePoint);
    }
    let n2v = scale4(&raw, 1.0 / raw_norm);

    Ok(FundamentalData { e, sigma_uu, sigma_uv, frame: [x1, x2, n1, n2v] })
}

/// Applies the rotation part of a motion to the curve: `Phi -> A Phi`
/// componentwise on coefficients. Orthogonality preserves isotropy and the
/// canonical normalization, so the kind tag carries over.
pub fn apply_motion(phi: &PhiCurve, m: &Motion4) -> Result<PhiCurve> {
    m.validate()?;
    let c = phi.components();
    let mut out: [TaylorSeries; 4] = core::array::from_fn(|_| c[0].clone());
    for (i, slot) in out.iter_mut().enumerate() {
        let mut acc = c[0].scale(Complex64::new(m.a[i][0], 0.0));
        for j in 1..4 {
            acc = acc.add(&c[j].scale(Complex64::new(m.a[i][j], 0.0)))?;
        }
        *slot = acc;
    }
    Ok(PhiCurve::from_components(out)?.restore_kind(phi.kind()))
}

/// Largest 5-point-Laplacian norm over interior nodes; a discrete check
/// that every coordinate function is harmonic. Expect O(h^2) times the
/// fourth-derivative scale for a genuine minimal surface.
pub fn harmonic_residual(patch: &SurfacePatch) -> Result<f64> {
    let g = &patch.grid;
    if g.rows < 5 || g.cols < 5 {
        return Err(Error::GridTooSmall);
    }
    let h2 = g.h * g.h;
    let mut worst = 0.0_f64;
    for r in 1..g.rows - 1 {
        for c in 1..g.cols - 1 {
            let center = patch.point(r, c);
            let mut lap = [0.0; 4];
            for (nr, nc) in [(r - 1, c), (r + 1, c), (r, c - 1), (r, c + 1)] {
                let p = patch.point(nr, nc);
                for i in 0..4 {
                    lap[i] += p[i];
                }
            }
            for i in 0..4 {
                lap[i] = (lap[i] - 4.0 * center[i]) / h2;
            }
            worst = worst.max(norm4(&lap));
        }
    }
    Ok(worst)
}
