//! Building the generating curve of a minimal surface in R^4.
//!
//! A minimal surface `x : D -> R^4` in isothermal parameters is encoded by
//! the holomorphic curve `Phi = x_u - i x_v`, which is isotropic
//! (`Phi^2 = 0`) and nowhere zero. This module builds [`PhiCurve`] values
//! from generating holomorphic data in four shapes (trigonometric,
//! hyperbolic, sum/difference exponents, and the rational pair `(g1, g2)`),
//! converts between the data flavors, builds the canonical variants
//! normalized to `Phi'^2 = 1`, and recovers the generating triple from Phi.

use num_complex::Complex64;

use crate::series::TaylorSeries;
use crate::{Error, Result};

fn c64(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Which generating pair a [`HoloPair`] carries.
///
/// * `H` — exponent pair for the trigonometric/hyperbolic shapes
/// * `W` — sum/difference exponents `w1 = h1 + h2`, `w2 = h1 - h2`
/// * `G` — exponentials `g1 = e^{w1}`, `g2 = e^{w2}`
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Flavor {
    H,
    W,
    G,
}

/// Representation shape selector for [`build_representation`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RepKind {
    /// Trigonometric: `(f cos h1, f sin h1, i f cos h2, i f sin h2)`.
    W1,
    /// Hyperbolic: `(i f cosh h1, f sinh h1, f cosh h2, i f sinh h2)`.
    W2,
    /// Sum/difference exponents `(w1, w2)` in the hyperbolic shape.
    W5,
    /// Rational in `(g1, g2)`: `(i f (g1 g2 + 1), f (g1 g2 - 1), f (g1 + g2), i f (g1 - g2))`.
    W6,
}

/// Provenance tag on a [`PhiCurve`]: how the curve was normalized.
/// Invariant checks re-derive canonicity from `Phi'^2` rather than trusting
/// this tag.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PhiKind {
    General,
    /// `Phi'^2` is the constant series 1.
    CanonicalFirst,
    /// `Phi'^2` is the constant series -1.
    CanonicalSecond,
}

/// Threshold below which a general-type condition value counts as zero.
const DEGENERACY_EPS: f64 = 1e-10;

/// A pair of holomorphic functions generating a surface, tagged with its
/// flavor. Both series share a base; they are truncated to a common order.
#[derive(Clone, Debug)]
pub struct HoloPair {
    p: TaylorSeries,
    q: TaylorSeries,
    flavor: Flavor,
}

impl HoloPair {
    /// Pairs two series of the same base. General-type conditions are *not*
    /// enforced here — degenerate (superconformal) pairs are legitimate
    /// inputs for the non-canonical builders; operations that need the
    /// condition check it themselves.
    pub fn new(p: TaylorSeries, q: TaylorSeries, flavor: Flavor) -> Result<Self> {
        if p.base() != q.base() {
            return Err(Error::BaseMismatch);
        }
        let n = p.order().min(q.order());
        Ok(HoloPair { p: p.truncated(n), q: q.truncated(n), flavor })
    }

    pub fn p(&self) -> &TaylorSeries {
        &self.p
    }

    pub fn q(&self) -> &TaylorSeries {
        &self.q
    }

    pub fn flavor(&self) -> Flavor {
        self.flavor
    }

    pub fn base(&self) -> Complex64 {
        self.p.base()
    }

    pub fn order(&self) -> usize {
        self.p.order()
    }

    /// Whether the flavor's general-type condition holds at the base:
    /// `h1'^2 != h2'^2` for H, `w1' w2' != 0` for W, `g1' g2' != 0` for G.
    pub fn is_general_type(&self) -> bool {
        let dp = self.p.differentiate().coeff(0);
        let dq = self.q.differentiate().coeff(0);
        match self.flavor {
            Flavor::H => {
                let scale = f64::max(1.0, f64::max(dp.norm_sqr(), dq.norm_sqr()));
                (dp * dp - dq * dq).norm() > DEGENERACY_EPS * scale
            }
            Flavor::W | Flavor::G => {
                let sp = f64::max(1.0, dp.norm());
                let sq = f64::max(1.0, dq.norm());
                dp.norm() > DEGENERACY_EPS * sp && dq.norm() > DEGENERACY_EPS * sq
            }
        }
    }
}

/// The isotropic holomorphic curve `Phi = x_u - i x_v` of a minimal surface
/// in R^4: four series with a common base, `Phi^2 = 0`, `Phi(base) != 0`.
#[derive(Clone, Debug)]
pub struct PhiCurve {
    phi: [TaylorSeries; 4],
    kind: PhiKind,
}

impl PhiCurve {
    /// Validates and wraps four components: common base, isotropy
    /// (`Phi^2 = 0` coefficient-wise) and regularity (`|Phi(base)| > 0`).
    /// The result is tagged [`PhiKind::General`].
    pub fn from_components(phi: [TaylorSeries; 4]) -> Result<Self> {
        let base = phi[0].base();
        if phi.iter().any(|c| c.base() != base) {
            return Err(Error::BaseMismatch);
        }
        let order = phi.iter().map(|c| c.order()).min().unwrap();
        let phi: [TaylorSeries; 4] = [
            phi[0].truncated(order),
            phi[1].truncated(order),
            phi[2].truncated(order),
            phi[3].truncated(order),
        ];

        let m = phi.iter().map(|c| c.max_coeff_norm()).fold(0.0, f64::max);
        let scale = f64::max(1.0, m * m);
        let sq = component_sq(&phi)?;
        if sq.max_coeff_norm() > 1e-10 * scale {
            return Err(Error::NotIsotropic);
        }

        let norm0: f64 = phi.iter().map(|c| c.coeff(0).norm_sqr()).sum();
        if norm0 <= 1e-12 {
            return Err(Error::DegeneratePoint);
        }
        Ok(PhiCurve { phi, kind: PhiKind::General })
    }

    /// Wraps already-validated components under a canonical tag. Callers
    /// must have verified the `Phi'^2 = +-1` postcondition.
    pub(crate) fn with_kind(phi: [TaylorSeries; 4], kind: PhiKind) -> Self {
        PhiCurve { phi, kind }
    }

    pub(crate) fn restore_kind(self, kind: PhiKind) -> Self {
        PhiCurve { kind, ..self }
    }

    pub fn base(&self) -> Complex64 {
        self.phi[0].base()
    }

    pub fn order(&self) -> usize {
        self.phi[0].order()
    }

    pub fn kind(&self) -> PhiKind {
        self.kind
    }

    pub fn components(&self) -> &[TaylorSeries; 4] {
        &self.phi
    }

    /// Componentwise derivative series.
    pub fn derivative(&self) -> [TaylorSeries; 4] {
        [
            self.phi[0].differentiate(),
            self.phi[1].differentiate(),
            self.phi[2].differentiate(),
            self.phi[3].differentiate(),
        ]
    }

    pub fn eval(&self, t: Complex64) -> Result<[Complex64; 4]> {
        Ok([
            self.phi[0].evaluate(t)?,
            self.phi[1].evaluate(t)?,
            self.phi[2].evaluate(t)?,
            self.phi[3].evaluate(t)?,
        ])
    }

    /// The series `phi1^2 + phi2^2 + phi3^2 + phi4^2` (zero for a valid
    /// curve, up to rounding).
    pub fn phi_sq(&self) -> TaylorSeries {
        component_sq(&self.phi).expect("components share a base")
    }

    /// The series `(phi1')^2 + ... + (phi4')^2`, the quantity whose
    /// vanishing characterizes superconformal points and whose value
    /// normalizes canonical parameters.
    pub fn phi_prime_sq(&self) -> TaylorSeries {
        component_sq(&self.derivative()).expect("components share a base")
    }
}

fn component_sq(phi: &[TaylorSeries; 4]) -> Result<TaylorSeries> {
    let mut acc = phi[0].mul(&phi[0])?;
    for c in &phi[1..] {
        acc = acc.add(&c.mul(c)?)?;
    }
    Ok(acc)
}

fn cos_series(a: &TaylorSeries) -> TaylorSeries {
    a.scale(I).cosh()
}

fn sin_series(a: &TaylorSeries) -> TaylorSeries {
    a.scale(I).sinh().scale(-I)
}

/// Builds `Phi` in the requested shape from a scaling function `f` and a
/// generating pair of the matching flavor (`H` for the trigonometric and
/// hyperbolic shapes, `W` for [`RepKind::W5`], `G` for [`RepKind::W6`]).
pub fn build_representation(kind: RepKind, f: &TaylorSeries, pair: &HoloPair) -> Result<PhiCurve> {
    let expected = match kind {
        RepKind::W1 | RepKind::W2 => Flavor::H,
        RepKind::W5 => Flavor::W,
        RepKind::W6 => Flavor::G,
    };
    if pair.flavor() != expected {
        return Err(Error::FlavorMismatch);
    }
    if f.coeff(0).norm() <= 1e-14 {
        return Err(Error::ZeroF);
    }
    let (p, q) = (pair.p(), pair.q());
    let fi = f.scale(I);
    let phi = match kind {
        RepKind::W1 => [
            f.mul(&cos_series(p))?,
            f.mul(&sin_series(p))?,
            fi.mul(&cos_series(q))?,
            fi.mul(&sin_series(q))?,
        ],
        RepKind::W2 => [
            fi.mul(&p.cosh())?,
            f.mul(&p.sinh())?,
            f.mul(&q.cosh())?,
            fi.mul(&q.sinh())?,
        ],
        RepKind::W5 => {
            let half = c64(0.5, 0.0);
            let s = p.add(q)?.scale(half);
            let d = p.sub(q)?.scale(half);
            [fi.mul(&s.cosh())?, f.mul(&s.sinh())?, f.mul(&d.cosh())?, fi.mul(&d.sinh())?]
        }
        RepKind::W6 => {
            let one = c64(1.0, 0.0);
            let pq = p.mul(q)?;
            [
                fi.mul(&pq.add_scalar(one))?,
                f.mul(&pq.add_scalar(-one))?,
                f.mul(&p.add(q)?)?,
                fi.mul(&p.sub(q)?)?,
            ]
        }
    };
    PhiCurve::from_components(phi)
}

/// Builds the canonically normalized curve (`Phi'^2 = 1`) directly from a
/// generating pair, dividing by the principal square root of the flavor's
/// normalization function. Rejects pairs violating the general-type
/// condition at the base — such surfaces admit no canonical parameters.
pub fn build_canonical(kind: Flavor, pair: &HoloPair) -> Result<PhiCurve> {
    if pair.flavor() != kind {
        return Err(Error::FlavorMismatch);
    }
    if !pair.is_general_type() {
        return Err(Error::SuperconformalInput);
    }
    let (p, q) = (pair.p(), pair.q());
    let dp = p.differentiate();
    let dq = q.differentiate();
    let half = c64(0.5, 0.0);
    let half_i = c64(0.0, 0.5);
    let one = c64(1.0, 0.0);

    let phi = match kind {
        Flavor::G => {
            // root of g1' g2'; components (i/2)(g1 g2 + 1), (1/2)(g1 g2 - 1),
            // (1/2)(g1 + g2), (i/2)(g1 - g2), all over the root
            let den = dp.mul(&dq)?.sqrt()?;
            let pq = p.mul(q)?;
            [
                pq.add_scalar(one).scale(half_i).div(&den)?,
                pq.add_scalar(-one).scale(half).div(&den)?,
                p.add(q)?.scale(half).div(&den)?,
                p.sub(q)?.scale(half_i).div(&den)?,
            ]
        }
        Flavor::H => {
            // root of h1'^2 - h2'^2; hyperbolic components over the root
            let den = dp.mul(&dp)?.sub(&dq.mul(&dq)?)?.sqrt()?;
            [
                p.cosh().scale(I).div(&den)?,
                p.sinh().div(&den)?,
                q.cosh().div(&den)?,
                q.sinh().scale(I).div(&den)?,
            ]
        }
        Flavor::W => {
            // root of w1' w2'; hyperbolic components in the half-sum and
            // half-difference over the root
            let den = dp.mul(&dq)?.sqrt()?;
            let s = p.add(q)?.scale(half);
            let d = p.sub(q)?.scale(half);
            [
                s.cosh().scale(I).div(&den)?,
                s.sinh().div(&den)?,
                d.cosh().div(&den)?,
                d.sinh().scale(I).div(&den)?,
            ]
        }
    };

    let curve = PhiCurve::from_components(phi)?;
    if curve.phi_prime_sq().deviation_from_constant(one) > 1e-9 {
        return Err(Error::InternalInconsistency);
    }
    Ok(curve.restore_kind(PhiKind::CanonicalFirst))
}

/// Converts a generating pair to another flavor. `H <-> W` is the linear
/// sum/difference change; `W -> G` exponentiates and `G -> W` takes the
/// principal logarithm (so a `W -> G -> W` round trip is exact only up to
/// the `2 pi i` lattice).
pub fn convert_pair(pair: &HoloPair, to: Flavor) -> Result<HoloPair> {
    let (p, q) = (pair.p().clone(), pair.q().clone());
    let half = c64(0.5, 0.0);
    let (np, nq) = match (pair.flavor(), to) {
        (a, b) if a == b => (p, q),
        (Flavor::H, Flavor::W) => (p.add(&q)?, p.sub(&q)?),
        (Flavor::W, Flavor::H) => (p.add(&q)?.scale(half), p.sub(&q)?.scale(half)),
        (Flavor::W, Flavor::G) => (p.exp(), q.exp()),
        (Flavor::G, Flavor::W) => (p.log()?, q.log()?),
        (Flavor::H, Flavor::G) => {
            let w = convert_pair(pair, Flavor::W)?;
            return convert_pair(&w, Flavor::G);
        }
        (Flavor::G, Flavor::H) => {
            let w = convert_pair(pair, Flavor::W)?;
            return convert_pair(&w, Flavor::H);
        }
        _ => unreachable!(),
    };
    HoloPair::new(np, nq, to)
}

/// Recovers the generating triple `(f, g1, g2)` of the rational shape from
/// a curve: `f = -(i phi1 + phi2)/2`, `g1 = -(phi3 - i phi4)/(i phi1 + phi2)`,
/// `g2 = -(phi3 + i phi4)/(i phi1 + phi2)`. The returned pair has flavor
/// [`Flavor::G`].
pub fn recover_triplet(phi: &PhiCurve) -> Result<(TaylorSeries, HoloPair)> {
    let [p1, p2, p3, p4] = phi.components();
    let den = p1.scale(I).add(p2)?;
    if den.coeff(0).norm() <= 1e-12 {
        return Err(Error::DegenerateRecovery);
    }
    let f = den.scale(c64(-0.5, 0.0));
    let g1 = p3.sub(&p4.scale(I))?.div(&den)?.neg();
    let g2 = p3.add(&p4.scale(I))?.div(&den)?.neg();
    Ok((f, HoloPair::new(g1, g2, Flavor::G)?))
}

/// Largest coefficient-wise distance between two curves' components. With
/// `allow_sign`, the smaller of the distances to `b` and to `-b` is
/// returned: the canonical builders fix a square-root branch, so curves
/// from equivalent data may differ by an overall sign.
pub fn max_component_dist(a: &PhiCurve, b: &PhiCurve, allow_sign: bool) -> f64 {
    let direct = (0..4)
        .map(|i| a.components()[i].max_coeff_distance(&b.components()[i]))
        .fold(0.0, f64::max);
    if !allow_sign {
        return direct;
    }
    let flipped = (0..4)
        .map(|i| a.components()[i].max_coeff_distance(&b.components()[i].neg()))
        .fold(0.0, f64::max);
    direct.min(flipped)
}

/// Largest coefficient-wise distance between the series of two pairs.
pub fn max_pair_dist(a: &HoloPair, b: &HoloPair) -> f64 {
    f64::max(a.p().max_coeff_distance(b.p()), a.q().max_coeff_distance(b.q()))
}
