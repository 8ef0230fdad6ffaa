//! Normalizing the parameter: classify points as superconformal or
//! general-type, reparameterize a curve so that `Phi'^2` becomes the
//! constant `+1` (first type) or `-1` (second type), and rotate between the
//! two types.
//!
//! The change of parameter solves `root4(+-Phi'^2) dt = dt_new` with the
//! integration constant pinned so the new parameter is 0 at the old base.

use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::linalg::hermitian_norm_sqr;
use crate::series::TaylorSeries;
use crate::weierstrass::{PhiCurve, PhiKind};
use crate::{Error, Result};

/// Which canonical normalization to target.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CanonicalType {
    /// `Phi'^2 = +1`.
    First,
    /// `Phi'^2 = -1`.
    Second,
}

/// Pointwise classification by the value of `Phi'^2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PointClass {
    /// `Phi'^2 = 0`: no canonical parameters exist near this point.
    Superconformal,
    GeneralType,
}

/// An invertible parameter change produced by [`to_canonical`].
///
/// `forward` maps the original parameter to the canonical one (vanishing at
/// the original base); `inverse` maps back and is developed around 0.
#[derive(Clone, Debug)]
pub struct Reparam {
    pub forward: TaylorSeries,
    pub inverse: TaylorSeries,
    pub target: CanonicalType,
}

/// The series `(phi1')^2 + ... + (phi4')^2` controlling canonicity.
pub fn phiprime_sq(phi: &PhiCurve) -> TaylorSeries {
    phi.phi_prime_sq()
}

fn derivative_scale_at(phi: &PhiCurve, t: Complex64) -> Result<f64> {
    let d = phi.derivative();
    let dv = [
        d[0].evaluate(t)?,
        d[1].evaluate(t)?,
        d[2].evaluate(t)?,
        d[3].evaluate(t)?,
    ];
    Ok(f64::max(1.0, hermitian_norm_sqr(&dv)))
}

/// Classifies the point `t` by whether `Phi'^2` vanishes there (relative to
/// the size of `Phi'`).
pub fn classify_point(phi: &PhiCurve, t: Complex64) -> Result<PointClass> {
    let q = phi.phi_prime_sq().evaluate(t)?;
    let scale = derivative_scale_at(phi, t)?;
    if q.norm() < 1e-10 * scale {
        Ok(PointClass::Superconformal)
    } else {
        Ok(PointClass::GeneralType)
    }
}

/// Reparameterizes a general-type curve into canonical coordinates of the
/// requested type. Returns the transformed curve (based at the new
/// parameter 0) together with the parameter change.
///
/// The new curve is `Phi_new(s) = Phi(inverse(s)) * inverse'(s)`, the
/// transformation law that keeps `Phi` a derivative of the same surface.
pub fn to_canonical(phi: &PhiCurve, target: CanonicalType) -> Result<(PhiCurve, Reparam)> {
    let q = phi.phi_prime_sq();
    let scale = derivative_scale_at(phi, phi.base())?;
    if q.coeff(0).norm() < 1e-10 * scale {
        return Err(Error::SuperconformalInput);
    }
    let signed = match target {
        CanonicalType::First => q,
        CanonicalType::Second => q.neg(),
    };
    let forward = signed.root4()?.integrate();
    let inverse = forward.revert().map_err(|e| match e {
        Error::NotInvertibleAtBase => Error::NotInvertible,
        other => other,
    })?;
    let dinv = inverse.differentiate();

    let c = phi.components();
    let new: [TaylorSeries; 4] = [
        c[0].compose(&inverse)?.mul(&dinv)?,
        c[1].compose(&inverse)?.mul(&dinv)?,
        c[2].compose(&inverse)?.mul(&dinv)?,
        c[3].compose(&inverse)?.mul(&dinv)?,
    ];
    let curve = PhiCurve::from_components(new)?;

    let (expected, kind) = match target {
        CanonicalType::First => (Complex64::new(1.0, 0.0), PhiKind::CanonicalFirst),
        CanonicalType::Second => (Complex64::new(-1.0, 0.0), PhiKind::CanonicalSecond),
    };
    if curve.phi_prime_sq().deviation_from_constant(expected) > 1e-8 {
        return Err(Error::InternalInconsistency);
    }
    Ok((curve.restore_kind(kind), Reparam { forward, inverse, target }))
}

fn canonical_kind_of(phi: &PhiCurve) -> Option<PhiKind> {
    let q = phi.phi_prime_sq();
    let scale = f64::max(1.0, q.coeff(0).norm());
    if q.deviation_from_constant(Complex64::new(1.0, 0.0)) < 1e-9 * scale {
        Some(PhiKind::CanonicalFirst)
    } else if q.deviation_from_constant(Complex64::new(-1.0, 0.0)) < 1e-9 * scale {
        Some(PhiKind::CanonicalSecond)
    } else {
        None
    }
}

/// The eighth root of unity realizing the type switch: substituting
/// `t = u s` with `u = e^{i pi/4}` multiplies `Phi'^2` by `u^4 = -1`.
pub fn rotate_type(phi: &PhiCurve) -> Result<PhiCurve> {
    let from_kind = match canonical_kind_of(phi) {
        Some(k) => k,
        None => return Err(Error::NotCanonicalFirst),
    };
    let u = Complex64::from_polar(1.0, core::f64::consts::FRAC_PI_4);
    // inner(s) = u s, developed around the preimage of the old base and
    // padded so composition keeps the full order
    let new_base = phi.base() / u;
    let mut lin = vec![Complex64::new(0.0, 0.0); phi.order() + 1];
    lin[0] = phi.base();
    if lin.len() > 1 {
        lin[1] = u;
    }
    let inner = TaylorSeries::new(new_base, lin).unwrap();

    let c = phi.components();
    let rotated: [TaylorSeries; 4] = [
        c[0].compose(&inner)?.scale(u),
        c[1].compose(&inner)?.scale(u),
        c[2].compose(&inner)?.scale(u),
        c[3].compose(&inner)?.scale(u),
    ];
    let to_kind = match from_kind {
        PhiKind::CanonicalFirst => PhiKind::CanonicalSecond,
        _ => PhiKind::CanonicalFirst,
    };
    Ok(PhiCurve::from_components(rotated)?.restore_kind(to_kind))
}

/// The eight parameter changes producing the same canonical normalization:
/// scaling the canonical parameter by a fourth root of unity, optionally
/// after conjugating the change of variables (represented by its
/// conjugated-coefficient series). Comparisons "up to canonical ambiguity"
/// quantify over this orbit.
pub fn ambiguity_orbit(rep: &Reparam) -> Vec<Reparam> {
    let units = [
        Complex64::new(1.0, 0.0),
        Complex64::new(-1.0, 0.0),
        Complex64::new(0.0, 1.0),
        Complex64::new(0.0, -1.0),
    ];
    let mut orbit = Vec::with_capacity(8);
    for conjugated in [false, true] {
        let (f, g) = if conjugated {
            (rep.forward.conj_coeffs(), rep.inverse.conj_coeffs())
        } else {
            (rep.forward.clone(), rep.inverse.clone())
        };
        for &u in &units {
            // forward_u = u * f; its inverse is g(s / u), and 1/u = conj(u)
            let mut lin = vec![Complex64::new(0.0, 0.0); g.order().max(1) + 1];
            lin[1] = u.conj();
            let scaling = TaylorSeries::new(Complex64::new(0.0, 0.0), lin).unwrap();
            let forward = f.scale(u);
            let inverse = g.compose(&scaling).expect("linear rescale composes");
            orbit.push(Reparam { forward, inverse, target: rep.target });
        }
    }
    orbit
}

/// The antiholomorphic parameter change: the curve of the mirrored surface,
/// with conjugated coefficients around the conjugated base. Canonicity of
/// either type is preserved.
pub fn conjugate_components(phi: &PhiCurve) -> PhiCurve {
    let c = phi.components();
    let conj: [TaylorSeries; 4] = [
        c[0].conj_coeffs(),
        c[1].conj_coeffs(),
        c[2].conj_coeffs(),
        c[3].conj_coeffs(),
    ];
    PhiCurve::with_kind(conj, phi.kind())
}
