//! Glue between parsed expressions and the core library: resolve which
//! representation to build, construct the curve, and sample surfaces and
//! curvature data over grids.

use num_complex::Complex64;
use weier4_core::curvature::{curvatures_from_phi, ellipse_invariants};
use weier4_core::geometry::{eval_patch, integrate_phi, GridSpec, SurfacePatch};
use weier4_core::weierstrass::{
    build_canonical, build_representation, Flavor, HoloPair, PhiCurve, RepKind,
};
use weier4_core::TaylorSeries;

use crate::error::{AppError, AppResult};
use crate::expr::parse_holo;

/// Which surface constructor the CLI should run.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BuildKind {
    W1,
    W2,
    W5,
    W6,
    CanonicalG,
    CanonicalW,
    CanonicalH,
}

impl BuildKind {
    pub fn parse(s: &str) -> AppResult<Self> {
        match s {
            "w1" => Ok(BuildKind::W1),
            "w2" => Ok(BuildKind::W2),
            "w5" => Ok(BuildKind::W5),
            "w6" => Ok(BuildKind::W6),
            "canonical-g" => Ok(BuildKind::CanonicalG),
            "canonical-w" => Ok(BuildKind::CanonicalW),
            "canonical-h" => Ok(BuildKind::CanonicalH),
            other => Err(AppError::Usage(format!(
                "unknown kind `{other}` (expected w1, w2, w5, w6, \
                 canonical-g, canonical-w, or canonical-h)"
            ))),
        }
    }

    fn flavor(self) -> Flavor {
        match self {
            BuildKind::W1 | BuildKind::W2 | BuildKind::CanonicalH => Flavor::H,
            BuildKind::W5 | BuildKind::CanonicalW => Flavor::W,
            BuildKind::W6 | BuildKind::CanonicalG => Flavor::G,
        }
    }

    fn is_canonical(self) -> bool {
        matches!(
            self,
            BuildKind::CanonicalG | BuildKind::CanonicalW | BuildKind::CanonicalH
        )
    }

    /// Names of the generating-pair flags for this kind.
    fn pair_flags(self) -> (&'static str, &'static str) {
        match self.flavor() {
            Flavor::H => ("h1", "h2"),
            Flavor::W => ("w1", "w2"),
            Flavor::G => ("g1", "g2"),
        }
    }
}

/// Raw expression sources as they arrive from flags/config.
#[derive(Clone, Debug, Default)]
pub struct ExprSources {
    pub f: Option<String>,
    pub g1: Option<String>,
    pub g2: Option<String>,
    pub h1: Option<String>,
    pub h2: Option<String>,
    pub w1: Option<String>,
    pub w2: Option<String>,
}

impl ExprSources {
    fn pair_for(&self, flavor: Flavor) -> (Option<&str>, Option<&str>) {
        match flavor {
            Flavor::H => (self.h1.as_deref(), self.h2.as_deref()),
            Flavor::W => (self.w1.as_deref(), self.w2.as_deref()),
            Flavor::G => (self.g1.as_deref(), self.g2.as_deref()),
        }
    }

    /// When no `--kind` is given, infer the canonical constructor from
    /// which pair of expressions is present.
    fn infer_kind(&self) -> AppResult<BuildKind> {
        let mut found = Vec::new();
        if self.g1.is_some() || self.g2.is_some() {
            found.push(BuildKind::CanonicalG);
        }
        if self.w1.is_some() || self.w2.is_some() {
            found.push(BuildKind::CanonicalW);
        }
        if self.h1.is_some() || self.h2.is_some() {
            found.push(BuildKind::CanonicalH);
        }
        match found.as_slice() {
            [one] => Ok(*one),
            [] => Err(AppError::Usage(
                "no generating pair given; pass --g1/--g2, --w1/--w2, or --h1/--h2".into(),
            )),
            _ => Err(AppError::Usage(
                "expressions from multiple pair families given; pick one or set --kind".into(),
            )),
        }
    }
}

/// A constructed curve plus everything needed for diagnostics.
pub struct BuiltSurface {
    pub kind: BuildKind,
    pub phi: PhiCurve,
    pub pair: HoloPair,
    pub f: Option<TaylorSeries>,
}

/// Parse the expressions and run the selected constructor.
///
/// Canonical kinds reject pairs that are superconformal at the base point;
/// the message names the offending input (for example `superconformal:
/// g1' = 0`).
pub fn build_surface(
    kind: Option<BuildKind>,
    sources: &ExprSources,
    base: Complex64,
    order: usize,
) -> AppResult<BuiltSurface> {
    let kind = match kind {
        Some(k) => k,
        None => sources.infer_kind()?,
    };
    let flavor = kind.flavor();
    let (name_a, name_b) = kind.pair_flags();
    let (src_a, src_b) = sources.pair_for(flavor);
    let src_a = src_a.ok_or_else(|| missing_flag(kind, name_a))?;
    let src_b = src_b.ok_or_else(|| missing_flag(kind, name_b))?;
    let a = parse_holo(src_a, base, order)?;
    let b = parse_holo(src_b, base, order)?;
    let pair = HoloPair::new(a, b, flavor).map_err(AppError::Core)?;

    if kind.is_canonical() {
        if sources.f.is_some() {
            return Err(AppError::Usage(format!(
                "--f is not accepted with canonical kinds; the \
                 normalization determines the scaling (kind {kind:?})"
            )));
        }
        if !pair.is_general_type() {
            return Err(superconformal_message(&pair, name_a, name_b));
        }
        let phi = build_canonical(flavor, &pair).map_err(AppError::Core)?;
        return Ok(BuiltSurface { kind, phi, pair, f: None });
    }

    let f_src = sources.f.as_deref().unwrap_or("1");
    let f = parse_holo(f_src, base, order)?;
    if f.coeff(0).norm() <= 1e-12 {
        return Err(AppError::Invalid("scaling function f vanishes at the base".into()));
    }
    let rep = match kind {
        BuildKind::W1 => RepKind::W1,
        BuildKind::W2 => RepKind::W2,
        BuildKind::W5 => RepKind::W5,
        BuildKind::W6 => RepKind::W6,
        _ => unreachable!("canonical kinds returned above"),
    };
    let phi = build_representation(rep, &f, &pair).map_err(AppError::Core)?;
    Ok(BuiltSurface { kind, phi, pair, f: Some(f) })
}

fn missing_flag(kind: BuildKind, name: &str) -> AppError {
    AppError::Usage(format!("kind {kind:?} requires --{name}"))
}

fn superconformal_message(pair: &HoloPair, name_a: &str, name_b: &str) -> AppError {
    let da = pair.p().differentiate().coeff(0);
    let db = pair.q().differentiate().coeff(0);
    let msg = if pair.flavor() == Flavor::H {
        format!("superconformal: {name_a}'^2 = {name_b}'^2 at the base point")
    } else if da.norm() <= db.norm() {
        format!("superconformal: {name_a}' = 0")
    } else {
        format!("superconformal: {name_b}' = 0")
    };
    AppError::Invalid(msg)
}

/// Surface positions and conformal factor over a grid.
pub fn patch_from_phi(phi: &PhiCurve, grid: &GridSpec) -> AppResult<SurfacePatch> {
    let psi = integrate_phi(phi);
    eval_patch(&psi, grid).map_err(AppError::Core)
}

/// Per-node curvature record used by the JSON and PLY exporters.
#[derive(Clone, Copy, Debug)]
pub struct CurvatureNode {
    pub x: [f64; 4],
    pub k: f64,
    pub kappa: f64,
    /// Curvature-ellipse semi-axes; absent where the point is not of
    /// general type (for example superconformal points).
    pub nu: Option<f64>,
    pub mu: Option<f64>,
    pub e: f64,
}

/// Sample position, curvatures, and conformal factor at every grid node.
pub fn curvature_grid(
    phi: &PhiCurve,
    grid: &GridSpec,
) -> AppResult<(SurfacePatch, Vec<CurvatureNode>)> {
    let patch = patch_from_phi(phi, grid)?;
    let mut nodes = Vec::with_capacity(grid.n_nodes());
    for r in 0..grid.rows {
        for c in 0..grid.cols {
            let t = grid.t(r, c);
            let (k, kappa) = curvatures_from_phi(phi, t).map_err(AppError::Core)?;
            let (nu, mu) = match ellipse_invariants(k, kappa) {
                Ok((nu, mu)) => (Some(nu), Some(mu)),
                Err(_) => (None, None),
            };
            nodes.push(CurvatureNode {
                x: patch.point(r, c),
                k,
                kappa,
                nu,
                mu,
                e: patch.e(r, c),
            });
        }
    }
    Ok((patch, nodes))
}

/// Curvature data at a single parameter value.
pub struct CurvaturePoint {
    pub k: f64,
    pub kappa: f64,
    pub nu: Option<f64>,
    pub mu: Option<f64>,
    pub e: f64,
}

pub fn curvature_at(phi: &PhiCurve, t: Complex64) -> AppResult<CurvaturePoint> {
    let (k, kappa) = curvatures_from_phi(phi, t).map_err(AppError::Core)?;
    let (nu, mu) = match ellipse_invariants(k, kappa) {
        Ok((nu, mu)) => (Some(nu), Some(mu)),
        Err(_) => (None, None),
    };
    let v = phi.eval(t).map_err(AppError::Core)?;
    let e = 0.5 * v.iter().map(|c| c.norm_sqr()).sum::<f64>();
    Ok(CurvaturePoint { k, kappa, nu, mu, e })
}

/// Largest `|Phi^2(t)|` over the grid — the conformality defect that
/// every surface-building path is expected to keep at rounding level.
pub fn isotropy_violation(phi: &PhiCurve, grid: &GridSpec) -> AppResult<f64> {
    let sq = phi.phi_sq();
    let mut worst = 0.0_f64;
    for r in 0..grid.rows {
        for c in 0..grid.cols {
            let v = sq.evaluate(grid.t(r, c)).map_err(AppError::Core)?;
            worst = worst.max(v.norm());
        }
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn zero() -> Complex64 {
        Complex64::new(0.0, 0.0)
    }

    fn golden_sources() -> ExprSources {
        ExprSources {
            g1: Some("exp(-z)".into()),
            g2: Some("exp(-2*z)".into()),
            ..ExprSources::default()
        }
    }

    #[test]
    fn canonical_g_is_inferred_and_matches_golden_values() {
        let built = build_surface(None, &golden_sources(), zero(), 24).unwrap();
        assert_eq!(built.kind, BuildKind::CanonicalG);
        let p = curvature_at(&built.phi, zero()).unwrap();
        assert_relative_eq!(p.k, -5.0, max_relative = 1e-12);
        assert_relative_eq!(p.kappa, -3.0, max_relative = 1e-12);
        assert_relative_eq!(p.nu.unwrap(), 1.5 * std::f64::consts::SQRT_2, max_relative = 1e-12);
        assert_relative_eq!(p.mu.unwrap(), -0.5 * std::f64::consts::SQRT_2, max_relative = 1e-12);
        assert_relative_eq!(p.e, 0.5, max_relative = 1e-12);
    }

    #[test]
    fn constant_input_reports_superconformal() {
        let sources = ExprSources {
            g1: Some("5".into()),
            g2: Some("exp(-2*z)".into()),
            ..ExprSources::default()
        };
        match build_surface(None, &sources, zero(), 24) {
            Err(AppError::Invalid(msg)) => assert_eq!(msg, "superconformal: g1' = 0"),
            other => panic!("expected superconformal rejection, got {:?}", other.is_ok()),
        }
    }

    #[test]
    fn kind_and_pair_family_must_agree() {
        // w6 wants g-expressions; giving only w-expressions is an error.
        let sources = ExprSources {
            w1: Some("z".into()),
            w2: Some("2*z".into()),
            ..ExprSources::default()
        };
        assert!(matches!(
            build_surface(Some(BuildKind::W6), &sources, zero(), 24),
            Err(AppError::Usage(_))
        ));
        // Mixed families without --kind are ambiguous.
        let mixed = ExprSources {
            g1: Some("exp(-z)".into()),
            g2: Some("exp(-2*z)".into()),
            w1: Some("z".into()),
            ..ExprSources::default()
        };
        assert!(matches!(
            build_surface(None, &mixed, zero(), 24),
            Err(AppError::Usage(_))
        ));
        // --f with a canonical kind contradicts the normalization.
        let mut with_f = golden_sources();
        with_f.f = Some("2".into());
        assert!(matches!(
            build_surface(None, &with_f, zero(), 24),
            Err(AppError::Usage(_))
        ));
    }

    #[test]
    fn general_representation_accepts_f() {
        let sources = ExprSources {
            f: Some("1".into()),
            g1: Some("exp(-z)".into()),
            g2: Some("exp(-2*z)".into()),
            ..ExprSources::default()
        };
        let built = build_surface(Some(BuildKind::W6), &sources, zero(), 24).unwrap();
        assert!(built.f.is_some());
        // W6 with f = 1 is a different (non-canonical) scaling of the same
        // surface; curvatures at 0 differ from the canonical -5/-3.
        let p = curvature_at(&built.phi, zero()).unwrap();
        assert!(p.k < 0.0);
        let grid = GridSpec::square(-0.1, 0.1, 0.05).unwrap();
        assert!(isotropy_violation(&built.phi, &grid).unwrap() < 1e-10);
    }

    #[test]
    fn grid_sampling_is_consistent_with_point_sampling() {
        let built = build_surface(None, &golden_sources(), zero(), 24).unwrap();
        let grid = GridSpec::square(-0.05, 0.05, 0.05).unwrap();
        let (patch, nodes) = curvature_grid(&built.phi, &grid).unwrap();
        assert_eq!(nodes.len(), 9);
        assert!(patch.origin_pinned());
        let t = grid.t(1, 2);
        let point = curvature_at(&built.phi, t).unwrap();
        let node = &nodes[grid.idx(1, 2)];
        assert_relative_eq!(node.k, point.k, max_relative = 1e-14);
        assert_relative_eq!(node.kappa, point.kappa, max_relative = 1e-14);
        assert_relative_eq!(node.e, point.e, max_relative = 1e-14);
    }
}
