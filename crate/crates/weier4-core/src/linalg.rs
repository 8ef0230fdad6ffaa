//! Small fixed-size linear algebra over R^4 and C^4.
//!
//! Everything here is 3x3 / 4x4 sized and hand-rolled: the call sites need
//! complex determinants and a trilinear cross product that generic matrix
//! crates don't offer without pulling std in.

use num_complex::Complex64;

use crate::real;

/// Real 4-vector.
pub type Vec4 = [f64; 4];

/// Complex 4-vector.
pub type CVec4 = [Complex64; 4];

/// Euclidean dot product.
pub fn dot4(a: &Vec4, b: &Vec4) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2] + a[3] * b[3]
}

pub fn norm4(a: &Vec4) -> f64 {
    real::sqrt(dot4(a, a))
}

pub fn scale4(a: &Vec4, s: f64) -> Vec4 {
    [a[0] * s, a[1] * s, a[2] * s, a[3] * s]
}

pub fn sub4(a: &Vec4, b: &Vec4) -> Vec4 {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2], a[3] - b[3]]
}

/// Bilinear dot product `sum a_i b_i` (no conjugation).
pub fn bilinear_dot(a: &CVec4, b: &CVec4) -> Complex64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2] + a[3] * b[3]
}

/// Hermitian dot product `sum a_i conj(b_i)`.
pub fn hermitian_dot(a: &CVec4, b: &CVec4) -> Complex64 {
    a[0] * b[0].conj() + a[1] * b[1].conj() + a[2] * b[2].conj() + a[3] * b[3].conj()
}

/// Squared Hermitian norm `sum |a_i|^2`.
pub fn hermitian_norm_sqr(a: &CVec4) -> f64 {
    a.iter().map(|c| c.norm_sqr()).sum()
}

fn det3(m: &[[f64; 3]; 3]) -> f64 {
    m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
        - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
}

/// Determinant of a real 4x4 matrix given as rows (Laplace along row 0;
/// fine at this size).
pub fn det4_real(rows: &[Vec4; 4]) -> f64 {
    let mut det = 0.0;
    for col in 0..4 {
        let mut minor = [[0.0; 3]; 3];
        for (mi, row) in rows[1..].iter().enumerate() {
            let mut mj = 0;
            for (j, &v) in row.iter().enumerate() {
                if j != col {
                    minor[mi][mj] = v;
                    mj += 1;
                }
            }
        }
        let sign = if col % 2 == 0 { 1.0 } else { -1.0 };
        det += sign * rows[0][col] * det3(&minor);
    }
    det
}

/// Determinant of a complex 4x4 matrix given as rows, via Gaussian
/// elimination with partial pivoting.
pub fn det4_complex(rows: &[CVec4; 4]) -> Complex64 {
    let mut m = *rows;
    let mut det = Complex64::new(1.0, 0.0);
    for k in 0..4 {
        let mut pivot = k;
        for r in k + 1..4 {
            if m[r][k].norm_sqr() > m[pivot][k].norm_sqr() {
                pivot = r;
            }
        }
        if m[pivot][k].norm_sqr() == 0.0 {
            return Complex64::new(0.0, 0.0);
        }
        if pivot != k {
            m.swap(pivot, k);
            det = -det;
        }
        det *= m[k][k];
        for r in k + 1..4 {
            let f = m[r][k] / m[k][k];
            for c in k..4 {
                let sub = f * m[k][c];
                m[r][c] -= sub;
            }
        }
    }
    det
}

/// The vector d with `det(a, b, c, d) = |d|^2`: the unique completion of
/// three independent vectors to a positively oriented 4-frame, scaled by
/// the parallelepiped volume. Component l is the signed cofactor of the
/// (4, l) entry.
pub fn cross4(a: &Vec4, b: &Vec4, c: &Vec4) -> Vec4 {
    let mut d = [0.0; 4];
    for l in 0..4 {
        let mut minor = [[0.0; 3]; 3];
        for (mi, row) in [a, b, c].iter().enumerate() {
            let mut mj = 0;
            for (j, &v) in row.iter().enumerate() {
                if j != l {
                    minor[mi][mj] = v;
                    mj += 1;
                }
            }
        }
        // cofactor expansion of det(a, b, c, d) along the last row
        let sign = if l % 2 == 0 { -1.0 } else { 1.0 };
        d[l] = sign * det3(&minor);
    }
    d
}
