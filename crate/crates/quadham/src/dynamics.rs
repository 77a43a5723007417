//! Heisenberg-picture evolution of the dynamical variables.
//!
//! With the basis collected in a row vector O(t), the equations of motion
//! read Ȯ(t) = iO(t)H with solution O(t) = O e^{itH}. Coefficient matrices
//! are stored row-major: row j of a sample is the expansion of O_j(t) over
//! the static basis, i.e. the transpose of e^{itH}.
//!
//! Since P(H) = 0 (Cayley–Hamilton), every dynamical variable satisfies the
//! order-2K differential equation P(−i d/dt) O(t) = 0.

use crate::adjoint::{max_abs, AdjointRep};
use crate::spectrum::{char_poly, charpoly_at_matrix, eigen, SpectrumError, COLLISION_FACTOR};
use nalgebra::DMatrix;
use num_complex::Complex64;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum DynamicsError {
    #[error(transparent)]
    Spectrum(#[from] SpectrumError),
    #[error("matrix exponential series failed to converge")]
    ConvergenceFailure,
    #[error("finite-difference ODE check supports order 2K <= 6, got {0}")]
    UnsupportedOrder(usize),
}

#[derive(Debug, Clone)]
pub struct TrajectorySample {
    pub t: f64,
    /// Row j = expansion of O_j(t) over the static basis.
    pub coefficients: DMatrix<Complex64>,
}

/// Series truncation threshold for the scaling-and-squaring exponential.
const EXP_SERIES_TOL: f64 = 1e-16;

fn exp_series(a: &DMatrix<Complex64>) -> Result<DMatrix<Complex64>, DynamicsError> {
    let n = a.nrows();
    let norm = max_abs(a) * n as f64;
    let squarings = if norm > 0.5 {
        (norm / 0.5).log2().ceil() as u32
    } else {
        0
    };
    let scaled = a / Complex64::new(2f64.powi(squarings as i32), 0.0);
    let mut result = DMatrix::<Complex64>::identity(n, n);
    let mut term = DMatrix::<Complex64>::identity(n, n);
    let mut converged = false;
    for k in 1..200 {
        term = (&term * &scaled) / Complex64::new(k as f64, 0.0);
        result += &term;
        if max_abs(&term) < EXP_SERIES_TOL {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(DynamicsError::ConvergenceFailure);
    }
    let mut out = result;
    for _ in 0..squarings {
        out = &out * &out;
    }
    Ok(out)
}

/// e^{itH}. Uses eigendecomposition away from eigenvalue collisions and a
/// squaring-based series near them (the eigenvector matrix degenerates at
/// exceptional points).
pub fn propagator(rep: &AdjointRep, t: f64) -> Result<DMatrix<Complex64>, DynamicsError> {
    let h = rep.matrix_h();
    let n = rep.dim();
    let it = Complex64::new(0.0, t);
    let report = eigen(rep, 1e-10)?;
    if report.min_gap < COLLISION_FACTOR * report.scale {
        return exp_series(&(h * it));
    }
    let v = DMatrix::<Complex64>::from_columns(&report.eigenvectors);
    match v.clone().lu().try_inverse() {
        Some(v_inv) => {
            let diag = DMatrix::<Complex64>::from_fn(n, n, |r, c| {
                if r == c {
                    (it * report.eigenvalues[r]).exp()
                } else {
                    Complex64::default()
                }
            });
            Ok(&v * diag * v_inv)
        }
        None => exp_series(&(h * it)),
    }
}

pub fn evolve(rep: &AdjointRep, times: &[f64]) -> Result<Vec<TrajectorySample>, DynamicsError> {
    times
        .iter()
        .map(|&t| {
            let prop = propagator(rep, t)?;
            Ok(TrajectorySample { t, coefficients: prop.transpose() })
        })
        .collect()
}

/// Cayley–Hamilton residual ‖P(H) e^{itH}‖∞: a joint consistency check of
/// the characteristic polynomial and the propagator.
pub fn ode_residual(rep: &AdjointRep, t: f64) -> Result<f64, DynamicsError> {
    let coeffs = char_poly(rep);
    let ph = charpoly_at_matrix(&coeffs, rep.matrix_h());
    let prop = propagator(rep, t)?;
    Ok(max_abs(&(ph * prop)))
}

/// O(h²) central stencils for the m-th derivative: (offsets, weights).
fn stencil(m: usize) -> Option<(&'static [i32], &'static [f64])> {
    match m {
        1 => Some((&[-1, 1], &[-0.5, 0.5])),
        2 => Some((&[-1, 0, 1], &[1.0, -2.0, 1.0])),
        3 => Some((&[-2, -1, 1, 2], &[-0.5, 1.0, -1.0, 0.5])),
        4 => Some((&[-2, -1, 0, 1, 2], &[1.0, -4.0, 6.0, -4.0, 1.0])),
        5 => Some((&[-3, -2, -1, 1, 2, 3], &[-0.5, 2.0, -2.5, 2.5, -2.0, 0.5])),
        6 => Some((&[-3, -2, -1, 0, 1, 2, 3], &[1.0, -6.0, 15.0, -20.0, 15.0, -6.0, 1.0])),
        _ => None,
    }
}

/// Apply P(−i d/dt) to the trajectory at time `t` by central finite
/// differences with step `h`; the result vanishes like O(h²).
pub fn finite_difference_residual(
    rep: &AdjointRep,
    t: f64,
    h: f64,
) -> Result<f64, DynamicsError> {
    let order = rep.dim();
    if order > 6 {
        return Err(DynamicsError::UnsupportedOrder(order));
    }
    let coeffs = char_poly(rep);
    let n = rep.dim();
    // Sample the propagator on the widest stencil once.
    let mut samples = std::collections::BTreeMap::new();
    for off in -3i32..=3 {
        samples.insert(off, propagator(rep, t + off as f64 * h)?);
    }
    let mut acc = samples[&0].clone() * coeffs[0];
    let minus_i = Complex64::new(0.0, -1.0);
    for (m, &c) in coeffs.iter().enumerate().skip(1) {
        if c.norm() == 0.0 {
            continue;
        }
        let (offsets, weights) = stencil(m).ok_or(DynamicsError::UnsupportedOrder(m))?;
        let mut deriv = DMatrix::<Complex64>::from_element(n, n, Complex64::default());
        for (&off, &w) in offsets.iter().zip(weights) {
            deriv += &samples[&off] * Complex64::new(w, 0.0);
        }
        deriv /= Complex64::new(h.powi(m as i32), 0.0);
        acc += deriv * (minus_i.powu(m as u32) * c);
    }
    Ok(max_abs(&acc))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::adjoint::build_adjoint;
    use crate::models::{instantiate, ModelKind, ModelSpec};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn rep_for(kind: ModelKind, a: f64, b: Complex64) -> AdjointRep {
        let spec = ModelSpec::builtin(kind, a, b);
        build_adjoint(&instantiate(&spec).unwrap().0).unwrap()
    }

    #[test]
    fn identity_at_time_zero() {
        let rep = rep_for(ModelKind::OneD, 1.0, c(0.3, 0.0));
        let samples = evolve(&rep, &[0.0]).unwrap();
        let id = DMatrix::<Complex64>::identity(2, 2);
        assert!(max_abs(&(&samples[0].coefficients - id)) < 1e-12);
    }

    #[test]
    fn harmonic_rotation() {
        // b=0: x(t) = cos(2t)x + sin(2t)p
        let rep = rep_for(ModelKind::OneD, 1.0, c(0.0, 0.0));
        let t = 0.37;
        let samples = evolve(&rep, &[t]).unwrap();
        let coeffs = &samples[0].coefficients;
        assert!((coeffs[(0, 0)] - c((2.0 * t).cos(), 0.0)).norm() < 1e-12);
        assert!((coeffs[(0, 1)] - c((2.0 * t).sin(), 0.0)).norm() < 1e-12);
        assert!((coeffs[(1, 0)] + c((2.0 * t).sin(), 0.0)).norm() < 1e-12);
        assert!((coeffs[(1, 1)] - c((2.0 * t).cos(), 0.0)).norm() < 1e-12);
    }

    #[test]
    fn group_property() {
        let rep = rep_for(ModelKind::CoupledXY, 2.0, c(0.8, 0.0));
        for (t1, t2) in [(0.4, 1.3), (-0.7, 2.1), (5.0, -5.0)] {
            let p1 = propagator(&rep, t1).unwrap();
            let p2 = propagator(&rep, t2).unwrap();
            let p12 = propagator(&rep, t1 + t2).unwrap();
            assert!(max_abs(&(&p1 * &p2 - p12)) < 1e-10);
        }
    }

    #[test]
    fn cayley_hamilton_residual() {
        for t in [0.1, 1.0, 10.0] {
            let rep = rep_for(ModelKind::Angular, 1.0, c(1.0, 0.0));
            assert!(ode_residual(&rep, t).unwrap() < 1e-9);
        }
    }

    #[test]
    fn oned_second_order_ode() {
        // b=0: charpoly λ²−4 ⇒ d²x/dt² + 4x = 0
        let rep = rep_for(ModelKind::OneD, 1.0, c(0.0, 0.0));
        let res = finite_difference_residual(&rep, 0.5, 1e-4).unwrap();
        assert!(res < 1e-6);
    }

    #[test]
    fn fourth_order_ode_richardson() {
        // residual shrinks like h²; h must stay large enough that the
        // h⁻⁴ roundoff amplification of the 4th-derivative stencil is
        // negligible against the O(h²) truncation term
        let rep = rep_for(ModelKind::Angular, 1.0, c(1.0, 0.0));
        let r1 = finite_difference_residual(&rep, 0.7, 2e-2).unwrap();
        let r2 = finite_difference_residual(&rep, 0.7, 1e-2).unwrap();
        let ratio = r1 / r2;
        assert!(ratio > 3.0 && ratio < 5.0, "ratio {}", ratio);
    }

    #[test]
    fn series_path_at_exceptional_point() {
        let rep = rep_for(ModelKind::OneD, 1.0, c(1.0, 0.0));
        // H is defective here; e^{itH} = I + itH since H² = 0
        let t = 0.9;
        let prop = propagator(&rep, t).unwrap();
        let expected = DMatrix::<Complex64>::identity(2, 2) + rep.matrix_h() * c(0.0, t);
        assert!(max_abs(&(prop - expected)) < 1e-12);
    }
}
