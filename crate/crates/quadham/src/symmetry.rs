//! Unitary and antiunitary symmetries represented as 2K×2K matrices
//! acting on the operator basis.
//!
//! A unitary S must satisfy SH = HS and SᵗUS = U; an antiunitary A must
//! satisfy AH* = HA and AᵗUA = −U. Antiunitary operators are stored as a
//! plain matrix with the complex conjugation implicit in the kind: the
//! action on a coefficient vector is v ↦ A·v*. An antiunitary symmetry
//! that is exact on an eigenvector (A·C* = bC) forces its eigenvalue to
//! be real.
//!
//! Each symmetry has a sign ambiguity: −A satisfies exactly the same
//! relations as A. The builtin catalog stores one representative each.

use crate::adjoint::{max_abs, AdjointRep};
use crate::spectrum::{SpectrumReport, COLLISION_FACTOR};
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SymmetryKind {
    Unitary,
    Antiunitary,
}

#[derive(Debug, Clone)]
pub struct SymmetrySpec {
    pub kind: SymmetryKind,
    pub matrix: DMatrix<Complex64>,
    pub label: String,
}

impl SymmetrySpec {
    pub fn new(kind: SymmetryKind, matrix: DMatrix<Complex64>, label: impl Into<String>) -> Self {
        SymmetrySpec { kind, matrix, label: label.into() }
    }

    /// Apply to a coefficient vector; conjugates first for antiunitaries.
    pub fn apply(&self, v: &DVector<Complex64>) -> DVector<Complex64> {
        match self.kind {
            SymmetryKind::Unitary => &self.matrix * v,
            SymmetryKind::Antiunitary => &self.matrix * v.map(|c| c.conj()),
        }
    }
}

#[derive(Debug, Error)]
pub enum SymmetryError {
    #[error("symmetry matrix is {got}x{got} but the representation has dimension {expected}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("builtin symmetry catalog covers K in {{1, 2}}, got K = {0}")]
    UnsupportedDimension(usize),
    #[error("exactness requires an antiunitary symmetry")]
    NotAntiunitary,
}

#[derive(Debug, Clone)]
pub struct SymmetryCheckReport {
    /// SH = HS (unitary) or AH* = HA (antiunitary) within tolerance.
    pub commutes: bool,
    pub commute_residual: f64,
    /// SᵗUS = U (unitary) or AᵗUA = −U (antiunitary) within tolerance.
    pub u_relation: bool,
    pub u_residual: f64,
    /// For antiunitaries with a spectrum at hand: eigenvalue multiset
    /// closed under complex conjugation.
    pub conjugation_closure: Option<bool>,
}

pub fn check_symmetry(
    rep: &AdjointRep,
    sym: &SymmetrySpec,
    spectrum: Option<&SpectrumReport>,
    tol: f64,
) -> Result<SymmetryCheckReport, SymmetryError> {
    let n = rep.dim();
    if sym.matrix.nrows() != n || sym.matrix.ncols() != n {
        return Err(SymmetryError::DimensionMismatch { expected: n, got: sym.matrix.nrows() });
    }
    let h = rep.matrix_h();
    let u = rep.matrix_u();
    let a = &sym.matrix;
    let (commute_residual, u_residual) = match sym.kind {
        SymmetryKind::Unitary => (
            max_abs(&(a * h - h * a)),
            max_abs(&(a.transpose() * u * a - u)),
        ),
        SymmetryKind::Antiunitary => (
            max_abs(&(a * h.map(|c| c.conj()) - h * a)),
            max_abs(&(a.transpose() * u * a + u)),
        ),
    };
    let conjugation_closure = match (sym.kind, spectrum) {
        (SymmetryKind::Antiunitary, Some(report)) => {
            let tol_pair = 1e-9 * report.scale.max(1.0);
            Some(multiset_closed_under(&report.eigenvalues, |l| l.conj(), tol_pair))
        }
        _ => None,
    };
    Ok(SymmetryCheckReport {
        commutes: commute_residual <= tol,
        commute_residual,
        u_relation: u_residual <= tol,
        u_residual,
        conjugation_closure,
    })
}

/// Does applying `map` permute the multiset within `tol`?
pub fn multiset_closed_under(
    values: &[Complex64],
    map: impl Fn(Complex64) -> Complex64,
    tol: f64,
) -> bool {
    let mut used = vec![false; values.len()];
    'outer: for &v in values {
        let target = map(v);
        for (i, &w) in values.iter().enumerate() {
            if !used[i] && (w - target).norm() <= tol {
                used[i] = true;
                continue 'outer;
            }
        }
        return false;
    }
    true
}

fn diag(entries: &[f64]) -> DMatrix<Complex64> {
    let n = entries.len();
    DMatrix::from_fn(n, n, |r, c| {
        if r == c {
            Complex64::new(entries[r], 0.0)
        } else {
            Complex64::default()
        }
    })
}

/// The built-in symmetry catalog: per-coordinate parities S_q,
/// their time-reversal composites A_q = S_q·T, and the full PT. All are
/// signed diagonal matrices in the {x.., p..} basis; time reversal
/// contributes x → x, p → −p together with the conjugation.
pub fn builtin_symmetries(modes: usize) -> Result<Vec<SymmetrySpec>, SymmetryError> {
    match modes {
        1 => Ok(vec![
            SymmetrySpec::new(SymmetryKind::Unitary, diag(&[-1.0, -1.0]), "parity"),
            SymmetrySpec::new(SymmetryKind::Antiunitary, diag(&[-1.0, 1.0]), "PT"),
        ]),
        2 => Ok(vec![
            SymmetrySpec::new(SymmetryKind::Unitary, diag(&[-1.0, 1.0, -1.0, 1.0]), "S_x"),
            SymmetrySpec::new(SymmetryKind::Unitary, diag(&[1.0, -1.0, 1.0, -1.0]), "S_y"),
            SymmetrySpec::new(SymmetryKind::Unitary, diag(&[-1.0, -1.0, -1.0, -1.0]), "parity"),
            SymmetrySpec::new(
                SymmetryKind::Antiunitary,
                diag(&[-1.0, 1.0, 1.0, -1.0]),
                "A_x partial PT",
            ),
            SymmetrySpec::new(
                SymmetryKind::Antiunitary,
                diag(&[1.0, -1.0, -1.0, 1.0]),
                "A_y partial PT",
            ),
            SymmetrySpec::new(SymmetryKind::Antiunitary, diag(&[-1.0, -1.0, 1.0, 1.0]), "PT"),
        ]),
        k => Err(SymmetryError::UnsupportedDimension(k)),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum ExactnessVerdict {
    /// A·C* = bC for the reported scalar; the eigenvalue must be real.
    Exact { scalar: Complex64 },
    Broken,
    /// Verdict undefined for clustered eigenvalues.
    SkippedDegenerate,
}

/// Per-eigenvector exactness of an antiunitary symmetry.
pub fn exactness(
    rep: &AdjointRep,
    sym: &SymmetrySpec,
    spectrum: &SpectrumReport,
    tol: f64,
) -> Result<Vec<ExactnessVerdict>, SymmetryError> {
    if sym.kind != SymmetryKind::Antiunitary {
        return Err(SymmetryError::NotAntiunitary);
    }
    let n = rep.dim();
    if sym.matrix.nrows() != n {
        return Err(SymmetryError::DimensionMismatch { expected: n, got: sym.matrix.nrows() });
    }
    let collision_tol = COLLISION_FACTOR * spectrum.scale;
    let mut verdicts = Vec::with_capacity(n);
    for (i, lam) in spectrum.eigenvalues.iter().enumerate() {
        let degenerate = spectrum
            .eigenvalues
            .iter()
            .enumerate()
            .any(|(j, l)| j != i && (l - lam).norm() <= collision_tol);
        if degenerate {
            verdicts.push(ExactnessVerdict::SkippedDegenerate);
            continue;
        }
        let c = &spectrum.eigenvectors[i];
        let image = sym.apply(c);
        // extract b from the largest-magnitude component of C
        let (mut pivot, mut mag) = (0usize, 0.0f64);
        for (j, comp) in c.iter().enumerate() {
            if comp.norm() > mag {
                mag = comp.norm();
                pivot = j;
            }
        }
        let scalar = image[pivot] / c[pivot];
        let miss = (&image - c * scalar).iter().map(|z| z.norm()).fold(0.0, f64::max);
        if miss <= tol {
            verdicts.push(ExactnessVerdict::Exact { scalar });
        } else {
            verdicts.push(ExactnessVerdict::Broken);
        }
    }
    Ok(verdicts)
}
