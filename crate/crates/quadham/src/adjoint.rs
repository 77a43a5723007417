//! Adjoint (regular) matrix representation of a quadratic Hamiltonian.
//!
//! For H quadratic in the canonical basis {O_1..O_2K} = {x_1..x_K, p_1..p_K}
//! the commutators close, [H, O_i] = Σ_j H_ji O_j, and the 2K×2K matrix H
//! carries the full spectral content of the operator. The commutator Gram
//! matrix [O_i, O_j] = U_ij is i[[0,I],[−I,0]] in this basis.

use crate::algebra::{AlgebraError, OperatorPoly};
use nalgebra::DMatrix;
use num_complex::Complex64;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum AdjointError {
    #[error("Hamiltonian has degree-1 terms; the commutator leaves the span of the basis")]
    InhomogeneousHamiltonian,
    #[error("commutator closure residual {0:.3e} exceeds tolerance")]
    NonClosure(f64),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

/// Absolute residual allowed when expanding [H, O_i] over the basis.
pub const CLOSURE_TOL: f64 = 1e-12;

/// Coefficient matrix γ of H = Σ_ij γ_ij O_i O_j.
#[derive(Debug, Clone)]
pub struct GammaMatrix {
    modes: usize,
    entries: DMatrix<Complex64>,
}

impl GammaMatrix {
    pub fn new(modes: usize, entries: DMatrix<Complex64>) -> Result<Self, DimensionError> {
        if entries.nrows() != 2 * modes || entries.ncols() != 2 * modes {
            return Err(DimensionError {
                expected: 2 * modes,
                got: (entries.nrows(), entries.ncols()),
            });
        }
        Ok(GammaMatrix { modes, entries })
    }

    pub fn modes(&self) -> usize {
        self.modes
    }

    pub fn entries(&self) -> &DMatrix<Complex64> {
        &self.entries
    }

    /// Assemble the operator Σ_ij γ_ij O_i O_j.
    pub fn to_poly(&self) -> OperatorPoly {
        let k = self.modes;
        let mut h = OperatorPoly::zero(k);
        for i in 0..2 * k {
            for j in 0..2 * k {
                let coeff = self.entries[(i, j)];
                if coeff.norm() == 0.0 {
                    continue;
                }
                let oi = OperatorPoly::basis_op(k, i);
                let oj = OperatorPoly::basis_op(k, j);
                h = h.add(&oi.multiply(&oj).expect("degree-2 product").scale(coeff));
            }
        }
        h
    }
}

#[derive(Debug, Error)]
#[error("expected a {expected}x{expected} matrix, got {got:?}")]
pub struct DimensionError {
    pub expected: usize,
    pub got: (usize, usize),
}

/// The adjoint representation: matrix H, Gram matrix U, the ordered
/// degree-1 basis, and the constant part of the Hamiltonian (it shifts
/// E_0 but not the matrix).
#[derive(Debug, Clone)]
pub struct AdjointRep {
    modes: usize,
    matrix_h: DMatrix<Complex64>,
    matrix_u: DMatrix<Complex64>,
    basis: Vec<OperatorPoly>,
    constant: Complex64,
}

impl AdjointRep {
    pub fn modes(&self) -> usize {
        self.modes
    }

    pub fn dim(&self) -> usize {
        2 * self.modes
    }

    pub fn matrix_h(&self) -> &DMatrix<Complex64> {
        &self.matrix_h
    }

    pub fn matrix_u(&self) -> &DMatrix<Complex64> {
        &self.matrix_u
    }

    pub fn basis(&self) -> &[OperatorPoly] {
        &self.basis
    }

    pub fn constant(&self) -> Complex64 {
        self.constant
    }
}

/// The commutator Gram matrix i[[0,I],[−I,0]] for K modes.
pub fn build_u(modes: usize) -> DMatrix<Complex64> {
    let n = 2 * modes;
    let i = Complex64::new(0.0, 1.0);
    DMatrix::from_fn(n, n, |r, c| {
        if c == r + modes {
            i
        } else if r == c + modes {
            -i
        } else {
            Complex64::default()
        }
    })
}

fn canonical_basis(modes: usize) -> Vec<OperatorPoly> {
    (0..2 * modes).map(|i| OperatorPoly::basis_op(modes, i)).collect()
}

/// Build the adjoint representation of a quadratic (plus optional constant)
/// Hamiltonian by exact commutator expansion: column i of the matrix holds
/// the coefficients of [H, O_i] over the basis.
pub fn build_adjoint(h: &OperatorPoly) -> Result<AdjointRep, AdjointError> {
    let k = h.modes();
    let n = 2 * k;
    if h.terms().any(|(m, c)| m.degree() == 1 && c.norm() > CLOSURE_TOL) {
        return Err(AdjointError::InhomogeneousHamiltonian);
    }
    let basis = canonical_basis(k);
    let mut matrix_h = DMatrix::from_element(n, n, Complex64::default());
    for (i, op) in basis.iter().enumerate() {
        let comm = h.commutator(op)?;
        let (linear, constant, residual) = comm.linear_decomposition();
        let residual = residual.max(constant.norm());
        if residual > CLOSURE_TOL {
            return Err(AdjointError::NonClosure(residual));
        }
        for (j, c) in linear.into_iter().enumerate() {
            matrix_h[(j, i)] = c;
        }
    }
    Ok(AdjointRep {
        modes: k,
        matrix_h,
        matrix_u: build_u(k),
        basis,
        constant: h.constant_part(),
    })
}

/// Build the adjoint representation directly from γ via H = (γ + γᵗ)U.
pub fn gamma_to_adjoint(gamma: &GammaMatrix) -> AdjointRep {
    let k = gamma.modes();
    let u = build_u(k);
    let g = gamma.entries();
    let matrix_h = (g + g.transpose()) * &u;
    AdjointRep {
        modes: k,
        matrix_h,
        matrix_u: u,
        basis: canonical_basis(k),
        constant: Complex64::default(),
    }
}

/// Verdicts of the structural matrix relations. The Hermitian-only checks
/// are left unset when the input operator is not Hermitian.
#[derive(Debug, Clone)]
pub struct StructureReport {
    /// (UH)ᵗ = UH
    pub uh_symmetric: bool,
    pub uh_residual: f64,
    /// H_ij* = −H_ij (entries purely imaginary); Hermitian inputs only.
    pub entries_antireal: Option<bool>,
    /// H† = UHU (U-pseudo-Hermiticity); Hermitian inputs only.
    pub pseudo_hermitian: Option<bool>,
}

pub fn check_structure(rep: &AdjointRep, hermitian_input: bool, tol: f64) -> StructureReport {
    let h = rep.matrix_h();
    let u = rep.matrix_u();
    let uh = u * h;
    let uh_residual = (&uh.transpose() - &uh).camax();
    let uh_symmetric = uh_residual <= tol;
    let (entries_antireal, pseudo_hermitian) = if hermitian_input {
        let max_re = h.iter().map(|c| c.re.abs()).fold(0.0, f64::max);
        let ph_residual = (h.adjoint() - u * h * u).camax();
        (Some(max_re <= tol), Some(ph_residual <= tol))
    } else {
        (None, None)
    };
    StructureReport {
        uh_symmetric,
        uh_residual,
        entries_antireal,
        pseudo_hermitian,
    }
}

/// Max-entry magnitude, used all over as a matrix residual norm.
pub fn max_abs(m: &DMatrix<Complex64>) -> f64 {
    m.iter().map(|c| c.norm()).fold(0.0, f64::max)
}
