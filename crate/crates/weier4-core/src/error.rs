//! Error type shared by every module of the crate.

use core::fmt;

/// Everything that can go wrong in series arithmetic or geometry.
///
/// One flat enum keeps `?` working across module boundaries; the variants
/// are grouped by the layer that raises them.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Error {
    // --- series ---
    /// Coefficients were empty or not finite.
    InvalidCoefficients,
    /// Binary operation on series developed around different base points.
    BaseMismatch,
    /// Division by a series whose constant term vanishes.
    DivisionByZeroConstantTerm,
    /// sqrt/root4 of a series whose constant term vanishes (branch point).
    RootAtBranchPoint,
    /// log of a series whose constant term vanishes.
    LogAtZero,
    /// Inner series maps the base point outside the outer trust disc.
    CompositionOutsideRadius,
    /// Reversion needs a vanishing constant term and a nonzero linear term.
    NotInvertibleAtBase,
    /// Evaluation point lies outside the series' trust radius.
    OutsideTrustRadius,
    /// A trust radius must be positive.
    InvalidRadius,

    // --- weierstrass ---
    /// Scale factor f vanishes at the base point.
    ZeroF,
    /// Pair flavor does not match what the operation expects.
    FlavorMismatch,
    /// The general-type condition fails at the base point.
    SuperconformalInput,
    /// i*phi1 + phi2 vanishes at the base point; the triplet is not
    /// recoverable there.
    DegenerateRecovery,
    /// Component quadruple is not isotropic (Phi^2 != 0).
    NotIsotropic,

    // --- geometry ---
    /// ||Phi||^2 is numerically zero at the requested point.
    DegeneratePoint,
    /// sigma(X1, X1) is too small to define the canonical normal frame.
    UmbilicLikeFrame,
    /// Motion matrix is not special orthogonal.
    NotOrthogonal,
    /// Grid has no interior nodes for the 5-point stencil.
    GridTooSmall,
    /// Grid spacing or extents are not usable (h <= 0, empty, or reversed).
    InvalidGrid,

    // --- curvature ---
    /// The two independent Gauss-curvature routes disagree.
    InternalInconsistency,
    /// K < 0 and -K > |kappa| is required and does not hold.
    NotGeneralType,

    // --- canonize ---
    /// The reparameterizing series could not be reverted.
    NotInvertible,
    /// Input is not a canonical curve of either type.
    NotCanonicalFirst,

    // --- correspond ---
    /// g' vanishes where the R^3 representation divides by it.
    DegenerateG,
    /// A nu field must be strictly positive.
    NonPositiveNu,
    /// (K, kappa) fields violate the general-type inequalities somewhere.
    NotGeneralTypeField,
    /// Mobius denominator a + b g vanishes at the base point.
    PoleAtBase,
    /// (a, b) is not a unit vector in C^2.
    NotUnitary,
    /// Two fields that must share shape and spacing do not.
    FieldShapeMismatch,
    /// A scalar field contains NaN or infinite values.
    NonFiniteField,
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let msg = match self {
            Error::InvalidCoefficients => "coefficients must be a nonempty list of finite complex numbers",
            Error::BaseMismatch => "series are developed around different base points",
            Error::DivisionByZeroConstantTerm => "division by a series with zero constant term",
            Error::RootAtBranchPoint => "root of a series with zero constant term (branch point)",
            Error::LogAtZero => "logarithm of a series with zero constant term",
            Error::CompositionOutsideRadius => "inner series maps the base point outside the outer trust disc",
            Error::NotInvertibleAtBase => "series reversion needs c0 = 0 and c1 != 0",
            Error::OutsideTrustRadius => "evaluation point outside the trust radius",
            Error::InvalidRadius => "trust radius must be positive",
            Error::ZeroF => "scale factor f vanishes at the base point",
            Error::FlavorMismatch => "function pair flavor does not match the operation",
            Error::SuperconformalInput => "general-type condition fails at the base point (superconformal input)",
            Error::DegenerateRecovery => "i*phi1 + phi2 vanishes at the base point; triplet not recoverable",
            Error::NotIsotropic => "component quadruple is not isotropic (Phi^2 != 0)",
            Error::DegeneratePoint => "||Phi||^2 vanishes at the requested point",
            Error::UmbilicLikeFrame => "second fundamental form too small to orient the normal frame",
            Error::NotOrthogonal => "motion matrix is not special orthogonal",
            Error::GridTooSmall => "grid needs at least one interior node",
            Error::InvalidGrid => "grid spacing must be positive and extents nonempty",
            Error::InternalInconsistency => "independent computation routes disagree beyond tolerance",
            Error::NotGeneralType => "point is not of general type (requires K < 0 and -K > |kappa|)",
            Error::NotInvertible => "reparameterizing series is not invertible",
            Error::NotCanonicalFirst => "input is not a canonical curve (Phi'^2 must be constant +1 or -1)",
            Error::DegenerateG => "g' vanishes at the requested point",
            Error::NonPositiveNu => "nu field must be strictly positive",
            Error::NotGeneralTypeField => "curvature fields violate K < 0, -K > |kappa| at some node",
            Error::PoleAtBase => "Mobius denominator a + b*g vanishes at the base point",
            Error::NotUnitary => "(a, b) must satisfy |a|^2 + |b|^2 = 1",
            Error::FieldShapeMismatch => "scalar fields must share rows, cols, and spacing",
            Error::NonFiniteField => "scalar field values must all be finite",
        };
        f.write_str(msg)
    }
}

impl core::error::Error for Error {}
