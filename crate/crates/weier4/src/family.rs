//! The two-parameter deformation family M(k1, k2; alpha): explicit
//! coordinates on a grid, the generating pair `(e^{-k1 a z}, e^{-k2 a z})`
//! with `a = cos(alpha) + i sin(alpha)`, curvature-field verification
//! across the family, and comparison against the canonical pipeline.

use num_complex::Complex64;
use weier4_core::curvature::{curvatures_closed_form, ClosedFormKind};
use weier4_core::geometry::{GridSpec, SurfacePatch};
use weier4_core::weierstrass::{Flavor, HoloPair};
use weier4_core::TaylorSeries;

use crate::error::{AppError, AppResult};

pub const FAMILY_TOL: f64 = 1e-8;

#[derive(Clone, Debug)]
pub struct FamilyParams {
    pub k1: f64,
    pub k2: f64,
    pub alpha: f64,
    pub grid: GridSpec,
}

fn validate_k(k1: f64, k2: f64) -> AppResult<()> {
    if !(k1 > 0.0) || !(k2 > 0.0) || !k1.is_finite() || !k2.is_finite() {
        return Err(AppError::Invalid("family: k1 and k2 must be positive".into()));
    }
    if (k1 - k2).abs() <= 1e-12 * k1.max(k2) {
        return Err(AppError::Invalid("family: k1 and k2 must differ".into()));
    }
    Ok(())
}

fn validate_alpha(alpha: f64) -> AppResult<()> {
    if !(0.0..=std::f64::consts::FRAC_PI_4).contains(&alpha) {
        return Err(AppError::Invalid(
            "family: alpha must lie in [0, pi/4]".into(),
        ));
    }
    Ok(())
}

impl FamilyParams {
    pub fn new(k1: f64, k2: f64, alpha: f64, grid: GridSpec) -> AppResult<Self> {
        validate_k(k1, k2)?;
        validate_alpha(alpha)?;
        Ok(FamilyParams { k1, k2, alpha, grid })
    }
}

/// Evaluate the family surface directly from its closed-form coordinates.
///
/// With `p = u cos(alpha) - v sin(alpha)`, `q = u sin(alpha) + v cos(alpha)`,
/// `k' = (k1+k2)/2`, `k'' = (k1-k2)/2`:
///
/// ```text
/// z1 = ( sin(2a) sinh(k'p) cos(k'q) - cos(2a) cosh(k'p) sin(k'q)) / (k' sqrt(k1 k2))
/// z2 = (-cos(2a) cosh(k'p) cos(k'q) - sin(2a) sinh(k'p) sin(k'q)) / (k' sqrt(k1 k2))
/// z3 = ( cos(2a) sinh(k''p) cos(k''q) + sin(2a) cosh(k''p) sin(k''q)) / (k'' sqrt(k1 k2))
/// z4 = (-sin(2a) cosh(k''p) cos(k''q) + cos(2a) sinh(k''p) sin(k''q)) / (k'' sqrt(k1 k2))
/// ```
///
/// The conformal factor is that of the canonical generating pair:
/// `E = cosh(k1 p) cosh(k2 p) / (k1 k2)`.
pub fn family_m(params: &FamilyParams) -> AppResult<SurfacePatch> {
    let FamilyParams { k1, k2, alpha, ref grid } = *params;
    let kp = 0.5 * (k1 + k2);
    let km = 0.5 * (k1 - k2);
    let root = (k1 * k2).sqrt();
    let (s2a, c2a) = (2.0 * alpha).sin_cos();
    let (sa, ca) = alpha.sin_cos();
    let mut points = Vec::with_capacity(grid.n_nodes());
    let mut e = Vec::with_capacity(grid.n_nodes());
    let mut pinned = false;
    for r in 0..grid.rows {
        for c in 0..grid.cols {
            let (u, v) = grid.node(r, c);
            let p = u * ca - v * sa;
            let q = u * sa + v * ca;
            let (shp, chp) = ((kp * p).sinh(), (kp * p).cosh());
            let (snq, csq) = (kp * q).sin_cos();
            let (shm, chm) = ((km * p).sinh(), (km * p).cosh());
            let (snm, csm) = (km * q).sin_cos();
            let z1 = (s2a * shp * csq - c2a * chp * snq) / (kp * root);
            let z2 = (-c2a * chp * csq - s2a * shp * snq) / (kp * root);
            let z3 = (c2a * shm * csm + s2a * chm * snm) / (km * root);
            let z4 = (-s2a * chm * csm + c2a * shm * snm) / (km * root);
            let x = [z1, z2, z3, z4];
            if u.abs() < grid.h / 2.0 && v.abs() < grid.h / 2.0 {
                pinned = x.iter().map(|s| s * s).sum::<f64>() < 1e-20;
            }
            points.push(x);
            e.push((k1 * p).cosh() * (k2 * p).cosh() / (k1 * k2));
        }
    }
    SurfacePatch::from_parts(grid.clone(), points, e, pinned).map_err(AppError::Core)
}

/// The family's generating pair `(e^{-k1 a z}, e^{-k2 a z})` as series
/// around 0, with `a = cos(alpha) + i sin(alpha)` exactly.
pub fn family_pair(k1: f64, k2: f64, alpha: f64, order: usize) -> AppResult<HoloPair> {
    validate_k(k1, k2)?;
    validate_alpha(alpha)?;
    let a = Complex64::new(alpha.cos(), alpha.sin());
    let z = TaylorSeries::variable(Complex64::new(0.0, 0.0), order);
    let g1 = z.scale(-k1 * a).exp();
    let g2 = z.scale(-k2 * a).exp();
    HoloPair::new(g1, g2, Flavor::G).map_err(AppError::Core)
}

/// Sample the family member's `(K, kappa)` fields at rotation-matched
/// parameters: node `t` of the base grid corresponds to parameter
/// `e^{-i alpha} t` on the `alpha` member, which is where the two
/// surfaces are isometric point for point.
pub fn family_fields(
    k1: f64,
    k2: f64,
    alpha: f64,
    grid: &GridSpec,
    order: usize,
) -> AppResult<(Vec<f64>, Vec<f64>)> {
    let pair = family_pair(k1, k2, alpha, order)?;
    let rot = Complex64::from_polar(1.0, -alpha);
    let mut ks = Vec::with_capacity(grid.n_nodes());
    let mut kappas = Vec::with_capacity(grid.n_nodes());
    for r in 0..grid.rows {
        for c in 0..grid.cols {
            let t = rot * grid.t(r, c);
            let (k, kappa) = curvatures_closed_form(ClosedFormKind::CanonicalG, None, &pair, t)
                .map_err(AppError::Core)?;
            ks.push(k);
            kappas.push(kappa);
        }
    }
    Ok((ks, kappas))
}

/// Largest componentwise gaps between two `(K, kappa)` field pairs.
pub fn field_deviation(
    a: &(Vec<f64>, Vec<f64>),
    b: &(Vec<f64>, Vec<f64>),
) -> AppResult<(f64, f64)> {
    if a.0.len() != b.0.len() || a.1.len() != b.1.len() {
        return Err(AppError::Invalid("field comparison: shape mismatch".into()));
    }
    let gap = |x: &[f64], y: &[f64]| {
        x.iter()
            .zip(y)
            .map(|(p, q)| (p - q).abs())
            .fold(0.0_f64, f64::max)
    };
    Ok((gap(&a.0, &b.0), gap(&a.1, &b.1)))
}

#[derive(Clone, Debug)]
pub struct FamilyReport {
    pub k1: f64,
    pub k2: f64,
    pub alphas: Vec<f64>,
    pub max_dk: f64,
    pub max_dkappa: f64,
    pub tolerance: f64,
}

impl FamilyReport {
    pub fn pass(&self) -> bool {
        self.max_dk < self.tolerance && self.max_dkappa < self.tolerance
    }
}

impl std::fmt::Display for FamilyReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "family k1={} k2={}", self.k1, self.k2)?;
        let alphas: Vec<String> = self.alphas.iter().map(|a| format!("{a}")).collect();
        writeln!(f, "alphas: {}", alphas.join(", "))?;
        writeln!(
            f,
            "fields sampled at rotation-matched parameters t -> exp(-i*alpha)*t"
        )?;
        writeln!(f, "max |K(alpha) - K(0)| = {:.3e}", self.max_dk)?;
        writeln!(f, "max |kappa(alpha) - kappa(0)| = {:.3e}", self.max_dkappa)?;
        if self.pass() {
            write!(f, "PASS (tolerance {:.0e})", self.tolerance)
        } else {
            write!(f, "FAIL (tolerance {:.0e})", self.tolerance)
        }
    }
}

/// Compare every listed family member against the alpha = 0 base member.
pub fn verify_family(
    k1: f64,
    k2: f64,
    alphas: &[f64],
    grid: &GridSpec,
    order: usize,
) -> AppResult<FamilyReport> {
    if alphas.is_empty() {
        return Err(AppError::Invalid("family: need at least one alpha".into()));
    }
    let base = family_fields(k1, k2, 0.0, grid, order)?;
    let mut max_dk = 0.0_f64;
    let mut max_dkappa = 0.0_f64;
    for &alpha in alphas {
        let member = family_fields(k1, k2, alpha, grid, order)?;
        let (dk, dkappa) = field_deviation(&base, &member)?;
        max_dk = max_dk.max(dk);
        max_dkappa = max_dkappa.max(dkappa);
    }
    Ok(FamilyReport {
        k1,
        k2,
        alphas: alphas.to_vec(),
        max_dk,
        max_dkappa,
        tolerance: FAMILY_TOL,
    })
}

/// How two patches over the same grid match after quotienting out the
/// unpinned integration constant and the square-root sign: the recorded
/// transformation maps patch `b` onto patch `a` as `x_a = sign * x_b +
/// translation`.
#[derive(Clone, Copy, Debug)]
pub struct PatchMatch {
    pub sign: f64,
    pub translation: [f64; 4],
    pub max_distance: f64,
}

impl std::fmt::Display for PatchMatch {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "matched with sign {:+.0}, translation [{:.6e}, {:.6e}, {:.6e}, {:.6e}], \
             max node distance {:.3e}",
            self.sign,
            self.translation[0],
            self.translation[1],
            self.translation[2],
            self.translation[3],
            self.max_distance
        )
    }
}

/// Compare two patches modulo translation and a global sign. Each patch
/// is recentered on its node nearest the parameter origin; the sign
/// minimizing the worst node distance wins.
pub fn compare_mod_translation_sign(
    a: &SurfacePatch,
    b: &SurfacePatch,
) -> AppResult<PatchMatch> {
    let (ga, gb) = (&a.grid, &b.grid);
    if ga.rows != gb.rows || ga.cols != gb.cols {
        return Err(AppError::Invalid("patch comparison: grid shape mismatch".into()));
    }
    let origin_idx = |g: &GridSpec| {
        let mut best = (0usize, f64::INFINITY);
        for r in 0..g.rows {
            for c in 0..g.cols {
                let (u, v) = g.node(r, c);
                let d = u * u + v * v;
                if d < best.1 {
                    best = (g.idx(r, c), d);
                }
            }
        }
        best.0
    };
    let a0 = a.points()[origin_idx(ga)];
    let b0 = b.points()[origin_idx(gb)];
    let mut best: Option<PatchMatch> = None;
    for sign in [1.0_f64, -1.0] {
        let mut worst = 0.0_f64;
        for (pa, pb) in a.points().iter().zip(b.points()) {
            let mut d2 = 0.0;
            for i in 0..4 {
                let da = pa[i] - a0[i];
                let db = sign * (pb[i] - b0[i]);
                d2 += (da - db) * (da - db);
            }
            worst = worst.max(d2.sqrt());
        }
        let candidate = PatchMatch {
            sign,
            translation: [
                a0[0] - sign * b0[0],
                a0[1] - sign * b0[1],
                a0[2] - sign * b0[2],
                a0[3] - sign * b0[3],
            ],
            max_distance: worst,
        };
        if best.as_ref().is_none_or(|b| candidate.max_distance < b.max_distance) {
            best = Some(candidate);
        }
    }
    Ok(best.expect("two candidates examined"))
}
