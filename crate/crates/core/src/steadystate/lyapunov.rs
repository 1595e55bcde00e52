use nalgebra::DMatrix;

use crate::error::{Error, Result};

/// Solves `M C + C Mᵀ + D = 0` for the stationary covariance `C`.
///
/// The equation is vectorised as `(I ⊗ M + M ⊗ I) vec C = −vec D` and solved
/// by LU with one step of iterative refinement; systems here are at most
/// 5×5, so the 25×25 dense solve is cheap.
pub fn lyapunov_solve(m: &DMatrix<f64>, d: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    let n = m.nrows();
    if m.ncols() != n || d.nrows() != n || d.ncols() != n {
        return Err(Error::Domain(format!(
            "drift {}x{} and diffusion {}x{} must be square and of equal size",
            m.nrows(),
            m.ncols(),
            d.nrows(),
            d.ncols()
        )));
    }
    let dscale = d.amax();
    if (d - d.transpose()).amax() > 1e-12 * dscale.max(f64::MIN_POSITIVE) {
        return Err(Error::Domain("diffusion matrix must be symmetric".into()));
    }
    let schur = m
        .clone()
        .try_schur(f64::EPSILON, 10_000)
        .ok_or_else(|| Error::Numerical("Schur decomposition of the drift did not converge".into()))?;
    let max_re = schur
        .complex_eigenvalues()
        .iter()
        .map(|z| z.re)
        .fold(f64::NEG_INFINITY, f64::max);
    if !(max_re < 0.0) {
        return Err(Error::NoSteadyState(format!(
            "drift has an eigenvalue with real part {max_re:e} >= 0"
        )));
    }

    let eye = DMatrix::<f64>::identity(n, n);
    let op = eye.kronecker(m) + m.kronecker(&eye);
    let rhs = -DMatrix::from_column_slice(n * n, 1, d.as_slice());
    let lu = op.clone().lu();
    let mut x = lu
        .solve(&rhs)
        .ok_or_else(|| Error::Numerical("singular Lyapunov operator".into()))?;
    let r = &rhs - &op * &x;
    if let Some(dx) = lu.solve(&r) {
        x += dx;
    }
    let c = DMatrix::from_column_slice(n, n, x.as_slice());
    let c = (&c + c.transpose()) * 0.5;

    let residual = (m * &c + &c * m.transpose() + d).amax();
    if residual > 1e-10 * dscale.max(f64::MIN_POSITIVE) {
        return Err(Error::Numerical(format!(
            "Lyapunov residual {residual:e} exceeds tolerance for |D| = {dscale:e}"
        )));
    }
    Ok(c)
}

#[cfg(test)]
mod tests {
    use nalgebra::dmatrix;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    use super::*;

    #[test]
    fn scalar_balance() {
        let m = -DMatrix::<f64>::identity(2, 2);
        let d = DMatrix::<f64>::identity(2, 2) * 2.0;
        let c = lyapunov_solve(&m, &d).unwrap();
        assert!((c - DMatrix::<f64>::identity(2, 2)).amax() < 1e-14);
    }

    #[test]
    fn free_cavity_thermalises() {
        let (k, w0, nc) = (0.7, 2.3, 1.4);
        let m = dmatrix![-k, w0; -w0, -k];
        let d = DMatrix::<f64>::identity(2, 2) * (2.0 * k * (1.0 + 2.0 * nc));
        let c = lyapunov_solve(&m, &d).unwrap() / 2.0;
        let expected = DMatrix::<f64>::identity(2, 2) * ((1.0 + 2.0 * nc) / 2.0);
        assert!((c - expected).amax() < 1e-13);
    }

    #[test]
    fn random_stable_systems() {
        let mut rng = StdRng::seed_from_u64(7);
        for _ in 0..200 {
            let a = DMatrix::<f64>::from_fn(5, 5, |_, _| rng.random_range(-1.0..1.0));
            // shift the spectrum left of the imaginary axis
            let shift = a
                .clone()
                .complex_eigenvalues()
                .iter()
                .map(|z| z.re)
                .fold(f64::NEG_INFINITY, f64::max);
            let m = a - DMatrix::<f64>::identity(5, 5) * (shift + rng.random_range(0.1..2.0));
            let b = DMatrix::<f64>::from_fn(5, 3, |_, _| rng.random_range(-1.0..1.0));
            let d = &b * b.transpose();
            let c = lyapunov_solve(&m, &d).unwrap();
            let res = (&m * &c + &c * m.transpose() + &d).amax();
            assert!(res <= 1e-10 * d.amax());
            assert_eq!(c, c.transpose());
            assert!(c.symmetric_eigenvalues().min() > -1e-10);
        }
    }

    #[test]
    fn unstable_drift_has_no_steady_state() {
        let m = dmatrix![0.1, 1.0; -1.0, 0.05];
        let d = DMatrix::<f64>::identity(2, 2);
        assert!(matches!(lyapunov_solve(&m, &d), Err(Error::NoSteadyState(_))));
    }

    #[test]
    fn shape_and_symmetry_errors() {
        let m = -DMatrix::<f64>::identity(2, 2);
        assert!(lyapunov_solve(&m, &DMatrix::identity(3, 3)).is_err());
        assert!(lyapunov_solve(&m, &dmatrix![1.0, 0.5; 0.0, 1.0]).is_err());
    }
}
