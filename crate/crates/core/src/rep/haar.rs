//! Haar-distributed random unitaries.

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use super::CMatrix;

/// Draws `U ∈ U(d)` from the Haar measure.
///
/// QR-factors a matrix of i.i.d. standard complex Gaussians and multiplies
/// column `j` of `Q` by the phase of `R_jj`. Without that phase correction
/// the result is unitary but not Haar distributed.
pub fn sample_haar_unitary<R: Rng + ?Sized>(d: usize, rng: &mut R) -> CMatrix {
    assert!(d >= 1, "dimension must be positive");
    let scale = std::f64::consts::FRAC_1_SQRT_2;
    let z = CMatrix::from_fn(d, d, |_, _| {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        Complex64::new(re * scale, im * scale)
    });
    let qr = z.qr();
    let r = qr.r();
    let mut q = qr.q();
    for j in 0..d {
        let rjj = r[(j, j)];
        let norm = rjj.norm();
        let phase = if norm > 0.0 { rjj / norm } else { Complex64::new(1.0, 0.0) };
        for i in 0..d {
            q[(i, j)] *= phase;
        }
    }
    q
}

/// `‖U·U* − I‖_F`.
pub fn unitarity_residual(u: &CMatrix) -> f64 {
    (u * u.adjoint() - CMatrix::identity(u.nrows(), u.ncols())).norm()
}
