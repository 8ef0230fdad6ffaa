//! Gauss curvature K, normal curvature kappa, the curvature-ellipse
//! invariants nu and mu, and the conformal factor E.
//!
//! Every quantity is computed along two independent routes where the source
//! formulas allow it: intrinsically from the curve Phi, and in closed form
//! from the generating pair. The intrinsic route itself cross-checks two
//! expressions for K and fails loudly on disagreement instead of returning
//! a silently wrong number.

use num_complex::Complex64;

use crate::geometry::normal_project;
use crate::linalg::{det4_complex, hermitian_dot, hermitian_norm_sqr, CVec4};
use crate::real;
use crate::series::TaylorSeries;
use crate::weierstrass::{Flavor, HoloPair, PhiCurve};
use crate::{Error, Result};

/// Curvature data at a single general-type point.
///
/// Construction checks the defining relations (`K = -(nu^2 + mu^2)`,
/// `kappa = 2 nu mu`) and the general-type inequalities, so a sample that
/// exists is internally consistent.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CurvatureSample {
    pub k: f64,
    pub kappa: f64,
    pub nu: f64,
    pub mu: f64,
    pub e: f64,
}

impl CurvatureSample {
    pub fn new(k: f64, kappa: f64, nu: f64, mu: f64, e: f64) -> Result<Self> {
        if !(k < 0.0) || !(-k > kappa.abs()) || !(nu > mu.abs()) {
            return Err(Error::NotGeneralType);
        }
        if !(e > 0.0) {
            return Err(Error::DegeneratePoint);
        }
        let k_tol = 1e-9 * f64::max(1.0, k.abs());
        let kap_tol = 1e-9 * f64::max(1.0, kappa.abs());
        if (k + nu * nu + mu * mu).abs() > k_tol || (kappa - 2.0 * nu * mu).abs() > kap_tol {
            return Err(Error::InternalInconsistency);
        }
        Ok(CurvatureSample { k, kappa, nu, mu, e })
    }
}

/// Which closed-form formula set to use, and therefore which flavor and
/// whether a scale function `f` is expected.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ClosedFormKind {
    /// Pair `(w1, w2)` with an explicit `f`.
    GeneralW,
    /// Pair `(g1, g2)` with an explicit `f`.
    GeneralG,
    /// Canonically normalized `(w1, w2)` (no `f`).
    CanonicalW,
    /// Canonically normalized `(g1, g2)` (no `f`).
    CanonicalG,
}

impl ClosedFormKind {
    fn flavor(self) -> Flavor {
        match self {
            ClosedFormKind::GeneralW | ClosedFormKind::CanonicalW => Flavor::W,
            ClosedFormKind::GeneralG | ClosedFormKind::CanonicalG => Flavor::G,
        }
    }

    fn wants_f(self) -> bool {
        matches!(self, ClosedFormKind::GeneralW | ClosedFormKind::GeneralG)
    }
}

/// Canonical flavor selector for the (nu, mu) closed forms.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CanonicalKind {
    W,
    G,
}

fn eval4(
    pair: &HoloPair,
    t: Complex64,
) -> Result<(Complex64, Complex64, Complex64, Complex64)> {
    let p = pair.p().evaluate(t)?;
    let q = pair.q().evaluate(t)?;
    let dp = pair.p().differentiate().evaluate(t)?;
    let dq = pair.q().differentiate().evaluate(t)?;
    Ok((p, q, dp, dq))
}

/// Intrinsic curvatures at `t`:
///
/// * `K = -4 |Phi'perp|^2 / |Phi|^4`, cross-checked against the wedge form
///   `-4 (|Phi|^2 |Phi'|^2 - |conj(Phi) . Phi'|^2) / |Phi|^6`;
/// * `kappa = -4 Re det(Phi, conj Phi, Phi', conj Phi') / |Phi|^6`, whose
///   imaginary residue must vanish.
pub fn curvatures_from_phi(phi: &PhiCurve, t: Complex64) -> Result<(f64, f64)> {
    let v = phi.eval(t)?;
    let d = phi.derivative();
    let dv: CVec4 = [
        d[0].evaluate(t)?,
        d[1].evaluate(t)?,
        d[2].evaluate(t)?,
        d[3].evaluate(t)?,
    ];
    let n2 = hermitian_norm_sqr(&v);
    if real::sqrt(n2) <= 1e-10 {
        return Err(Error::DegeneratePoint);
    }

    let perp = normal_project(phi, t)?;
    let k_perp = -4.0 * hermitian_norm_sqr(&perp) / (n2 * n2);

    let wedge = n2 * hermitian_norm_sqr(&dv) - hermitian_dot(&dv, &v).norm_sqr();
    let k_wedge = -4.0 * wedge / (n2 * n2 * n2);

    if (k_perp - k_wedge).abs() > 1e-9 * f64::max(1.0, k_perp.abs()) {
        return Err(Error::InternalInconsistency);
    }

    let vbar: CVec4 = core::array::from_fn(|i| v[i].conj());
    let dvbar: CVec4 = core::array::from_fn(|i| dv[i].conj());
    let det = det4_complex(&[v, vbar, dv, dvbar]);
    if det.im.abs() > 1e-9 * f64::max(1.0, det.norm()) {
        return Err(Error::InternalInconsistency);
    }
    let kappa = -4.0 * det.re / (n2 * n2 * n2);

    Ok((k_perp, kappa))
}

/// Closed-form `(K, kappa)` from the generating pair.
pub fn curvatures_closed_form(
    kind: ClosedFormKind,
    f: Option<&TaylorSeries>,
    pair: &HoloPair,
    t: Complex64,
) -> Result<(f64, f64)> {
    if pair.flavor() != kind.flavor() || kind.wants_f() != f.is_some() {
        return Err(Error::FlavorMismatch);
    }
    let (p, q, dp, dq) = eval4(pair, t)?;
    let (pre, t1, t2) = match kind {
        ClosedFormKind::GeneralW | ClosedFormKind::CanonicalW => {
            let c1 = real::cosh(p.re);
            let c2 = real::cosh(q.re);
            let t1 = dp.norm_sqr() / (c1 * c1);
            let t2 = dq.norm_sqr() / (c2 * c2);
            let pre = match kind {
                ClosedFormKind::GeneralW => {
                    let fv = f.unwrap().evaluate(t)?;
                    1.0 / (2.0 * fv.norm_sqr() * c1 * c2)
                }
                _ => (dp * dq).norm() / (2.0 * c1 * c2),
            };
            (pre, t1, t2)
        }
        ClosedFormKind::GeneralG | ClosedFormKind::CanonicalG => {
            let d1 = p.norm_sqr() + 1.0;
            let d2 = q.norm_sqr() + 1.0;
            let t1 = dp.norm_sqr() / (d1 * d1);
            let t2 = dq.norm_sqr() / (d2 * d2);
            let pre = match kind {
                ClosedFormKind::GeneralG => {
                    let fv = f.unwrap().evaluate(t)?;
                    2.0 / (fv.norm_sqr() * d1 * d2)
                }
                _ => 8.0 * (dp * dq).norm() / (d1 * d2),
            };
            (pre, t1, t2)
        }
    };
    Ok((-pre * (t1 + t2), pre * (t1 - t2)))
}

/// Converts `(K, kappa)` to the curvature-ellipse invariants:
/// `nu = (sqrt(-K + kappa) + sqrt(-K - kappa)) / 2` and
/// `mu = (sqrt(-K + kappa) - sqrt(-K - kappa)) / 2`.
pub fn ellipse_invariants(k: f64, kappa: f64) -> Result<(f64, f64)> {
    if !(k < 0.0) || !(-k > kappa.abs()) {
        return Err(Error::NotGeneralType);
    }
    let plus = real::sqrt(-k + kappa);
    let minus = real::sqrt(-k - kappa);
    Ok((0.5 * (plus + minus), 0.5 * (plus - minus)))
}

/// Closed-form `(nu, mu)` on canonically parameterized data.
pub fn numu_closed_form(
    kind: CanonicalKind,
    pair: &HoloPair,
    t: Complex64,
) -> Result<(f64, f64)> {
    let expected = match kind {
        CanonicalKind::W => Flavor::W,
        CanonicalKind::G => Flavor::G,
    };
    if pair.flavor() != expected {
        return Err(Error::FlavorMismatch);
    }
    let (p, q, dp, dq) = eval4(pair, t)?;
    if dp.norm() <= 1e-10 || dq.norm() <= 1e-10 {
        return Err(Error::NotGeneralType);
    }
    let (nu, mu) = match kind {
        CanonicalKind::W => {
            let c1 = real::cosh(p.re);
            let c2 = real::cosh(q.re);
            let s = real::sqrt((dp * dq).norm() / (c1 * c2));
            let t1 = dp.norm() / c1;
            let t2 = dq.norm() / c2;
            (0.5 * s * (t1 + t2), 0.5 * s * (t1 - t2))
        }
        CanonicalKind::G => {
            let d1 = p.norm_sqr() + 1.0;
            let d2 = q.norm_sqr() + 1.0;
            let s = real::sqrt((dp * dq).norm() / (d1 * d2));
            let t1 = dp.norm() / d1;
            let t2 = dq.norm() / d2;
            (2.0 * s * (t1 + t2), 2.0 * s * (t1 - t2))
        }
    };
    Ok((nu, mu))
}

/// Closed-form conformal factor `E` from the generating pair.
pub fn coefficient_e_closed_form(
    kind: ClosedFormKind,
    f: Option<&TaylorSeries>,
    pair: &HoloPair,
    t: Complex64,
) -> Result<f64> {
    if pair.flavor() != kind.flavor() || kind.wants_f() != f.is_some() {
        return Err(Error::FlavorMismatch);
    }
    let (p, q, dp, dq) = eval4(pair, t)?;
    let e = match kind {
        ClosedFormKind::GeneralW => {
            let fv = f.unwrap().evaluate(t)?;
            fv.norm_sqr() * real::cosh(p.re) * real::cosh(q.re)
        }
        ClosedFormKind::CanonicalW => real::cosh(p.re) * real::cosh(q.re) / (dp * dq).norm(),
        ClosedFormKind::GeneralG => {
            let fv = f.unwrap().evaluate(t)?;
            fv.norm_sqr() * (p.norm_sqr() + 1.0) * (q.norm_sqr() + 1.0)
        }
        ClosedFormKind::CanonicalG => {
            (p.norm_sqr() + 1.0) * (q.norm_sqr() + 1.0) / (4.0 * (dp * dq).norm())
        }
    };
    Ok(e)
}

/// Full curvature sample on canonically parameterized g-data, assembled
/// from the closed forms and validated by [`CurvatureSample::new`].
pub fn sample_canonical_g(pair: &HoloPair, t: Complex64) -> Result<CurvatureSample> {
    let (k, kappa) = curvatures_closed_form(ClosedFormKind::CanonicalG, None, pair, t)?;
    let (nu, mu) = numu_closed_form(CanonicalKind::G, pair, t)?;
    let e = coefficient_e_closed_form(ClosedFormKind::CanonicalG, None, pair, t)?;
    CurvatureSample::new(k, kappa, nu, mu, e)
}
