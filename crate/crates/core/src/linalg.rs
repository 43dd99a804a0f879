//! Small fixed-size complex linear algebra used throughout the crate.

use nalgebra::{Complex, DMatrix, SMatrix, SVector, SymmetricEigen};

pub type C64 = Complex<f64>;

pub type CVec3 = SVector<C64, 3>;
pub type CVec4 = SVector<C64, 4>;
pub type CVec6 = SVector<C64, 6>;
pub type CVec8 = SVector<C64, 8>;
pub type CMat2 = SMatrix<C64, 2, 2>;
pub type CMat4 = SMatrix<C64, 4, 4>;
pub type CMat6 = SMatrix<C64, 6, 6>;
pub type CMat8 = SMatrix<C64, 8, 8>;
pub type RMat3 = SMatrix<f64, 3, 3>;
pub type RMat6 = SMatrix<f64, 6, 6>;
pub type RVec3 = SVector<f64, 3>;

pub const I: C64 = C64::new(0.0, 1.0);
pub const ONE: C64 = C64::new(1.0, 0.0);
pub const ZERO: C64 = C64::new(0.0, 0.0);

#[inline]
pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

/// Unconjugated bilinear product `Σ aᵢ bᵢ`.
pub fn bilinear<const N: usize>(a: &SVector<C64, N>, b: &SVector<C64, N>) -> C64 {
    a.iter().zip(b.iter()).map(|(x, y)| x * y).sum()
}

/// Hermitian norm squared `Σ |aᵢ|²`.
pub fn norm_sqr<const N: usize>(a: &SVector<C64, N>) -> f64 {
    a.iter().map(|x| x.norm_sqr()).sum()
}

pub fn max_abs_diff<const R: usize, const C: usize>(a: &SMatrix<C64, R, C>, b: &SMatrix<C64, R, C>) -> f64 {
    a.iter().zip(b.iter()).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

pub fn max_abs_diff_real<const R: usize, const C: usize>(a: &SMatrix<f64, R, C>, b: &SMatrix<f64, R, C>) -> f64 {
    a.iter().zip(b.iter()).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

/// Largest entry of `|U U† − 1|`.
pub fn unitarity_defect<const N: usize>(u: &SMatrix<C64, N, N>) -> f64 {
    max_abs_diff(&(u * u.adjoint()), &SMatrix::<C64, N, N>::identity())
}

pub fn hermiticity_defect<const N: usize>(h: &SMatrix<C64, N, N>) -> f64 {
    max_abs_diff(h, &h.adjoint())
}

pub fn kron2(a: &CMat2, b: &CMat2) -> CMat4 {
    CMat4::from_fn(|r, col| a[(r / 2, col / 2)] * b[(r % 2, col % 2)])
}

/// Eigenvalues and eigenvectors (as columns) of a Hermitian matrix, `H = V Λ V†`.
pub fn hermitian_eig<const N: usize>(h: &SMatrix<C64, N, N>) -> ([f64; N], SMatrix<C64, N, N>) {
    let eig = SymmetricEigen::new(DMatrix::from_iterator(N, N, h.iter().copied()));
    let mut values = [0.0; N];
    for (o, v) in values.iter_mut().zip(eig.eigenvalues.iter()) {
        *o = *v;
    }
    let vectors = SMatrix::<C64, N, N>::from_iterator(eig.eigenvectors.iter().copied());
    (values, vectors)
}

/// `exp(−i H t)` for Hermitian `H`, via the eigendecomposition `H = V Λ V†`.
pub fn expm_hermitian<const N: usize>(h: &SMatrix<C64, N, N>, t: f64) -> SMatrix<C64, N, N> {
    let (values, v) = hermitian_eig(h);
    let phases =
        SMatrix::<C64, N, N>::from_diagonal(&SVector::<C64, N>::from_fn(|k, _| C64::from_polar(1.0, -values[k] * t)));
    v * phases * v.adjoint()
}

/// Ascending eigenvalues of a Hermitian matrix.
pub fn hermitian_eigenvalues<const N: usize>(h: &SMatrix<C64, N, N>) -> [f64; N] {
    let (mut out, _) = hermitian_eig(h);
    out.sort_by(f64::total_cmp);
    out
}

/// Positive square root of a positive semidefinite Hermitian matrix.
/// Eigenvalues below zero (round-off) are clamped.
pub fn psd_sqrt<const N: usize>(h: &SMatrix<C64, N, N>) -> SMatrix<C64, N, N> {
    let (values, v) = hermitian_eig(h);
    let d = SMatrix::<C64, N, N>::from_diagonal(&SVector::<C64, N>::from_fn(|k, _| {
        C64::new(values[k].max(0.0).sqrt(), 0.0)
    }));
    v * d * v.adjoint()
}

// Padé(13) numerator coefficients (Higham 2005).
const PADE13: [f64; 14] = [
    64764752532480000.0,
    32382376266240000.0,
    7771770303897600.0,
    1187353796428800.0,
    129060195264000.0,
    10559470521600.0,
    670442572800.0,
    33522128640.0,
    1323241920.0,
    40840800.0,
    960960.0,
    16380.0,
    182.0,
    1.0,
];
const THETA13: f64 = 5.371920351148152;

/// Matrix exponential of a real square matrix by scaling and squaring with a
/// Padé(13) approximant.
pub fn expm_real<const N: usize>(a: &SMatrix<f64, N, N>) -> SMatrix<f64, N, N> {
    let norm1 = (0..N)
        .map(|j| a.column(j).iter().map(|x| x.abs()).sum::<f64>())
        .fold(0.0, f64::max);
    let squarings = if norm1 > THETA13 {
        (norm1 / THETA13).log2().ceil() as i32
    } else {
        0
    };
    let a = a * 2f64.powi(-squarings);
    let id = SMatrix::<f64, N, N>::identity();
    let b = &PADE13;
    let a2 = a * a;
    let a4 = a2 * a2;
    let a6 = a4 * a2;
    let u_inner = a6 * (a6 * b[13] + a4 * b[11] + a2 * b[9]) + a6 * b[7] + a4 * b[5] + a2 * b[3] + id * b[1];
    let u = a * u_inner;
    let v = a6 * (a6 * b[12] + a4 * b[10] + a2 * b[8]) + a6 * b[6] + a4 * b[4] + a2 * b[2] + id * b[0];
    let p = v + u;
    let q = v - u;
    let dyn_q = DMatrix::from_iterator(N, N, q.iter().copied());
    let dyn_p = DMatrix::from_iterator(N, N, p.iter().copied());
    let solved = dyn_q
        .lu()
        .solve(&dyn_p)
        .expect("Padé denominator is nonsingular after scaling");
    let mut r = SMatrix::<f64, N, N>::from_iterator(solved.iter().copied());
    for _ in 0..squarings {
        r = r * r;
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn expm_real_plane_rotation() {
        let theta = 0.7;
        let mut g = RMat6::zeros();
        g[(0, 4)] = -theta;
        g[(4, 0)] = theta;
        let r = expm_real(&g);
        assert!((r[(0, 0)] - theta.cos()).abs() < 1e-15);
        assert!((r[(4, 0)] - theta.sin()).abs() < 1e-15);
        assert!((r[(0, 4)] + theta.sin()).abs() < 1e-15);
        assert!((r[(2, 2)] - 1.0).abs() < 1e-15);
    }

    #[test]
    fn expm_real_large_angle_needs_squaring() {
        let theta = 40.0;
        let mut g = RMat3::zeros();
        g[(0, 1)] = -theta;
        g[(1, 0)] = theta;
        let r = expm_real(&g);
        assert!((r[(0, 0)] - theta.cos()).abs() < 1e-12);
        assert!((r[(1, 0)] - theta.sin()).abs() < 1e-12);
    }

    #[test]
    fn expm_hermitian_matches_expm_real_on_real_generator() {
        // exp(-i H t) with H = [[0, -i], [i, 0]] (σ_y) equals the real rotation exp(-t [[0,1],[-1,0]])
        let h = CMat2::new(ZERO, -I, I, ZERO);
        let u = expm_hermitian(&h, 0.3);
        let g = SMatrix::<f64, 2, 2>::new(0.0, -0.3, 0.3, 0.0);
        let r = expm_real(&g);
        for k in 0..4 {
            assert!((u[k].re - r[k]).abs() < 1e-14);
            assert!(u[k].im.abs() < 1e-14);
        }
    }

    #[test]
    fn psd_sqrt_squares_back() {
        let h = CMat2::new(c(0.75, 0.0), c(0.1, 0.2), c(0.1, -0.2), c(0.25, 0.0));
        let s = psd_sqrt(&h);
        assert!(max_abs_diff(&(s * s), &h) < 1e-14);
    }
}
