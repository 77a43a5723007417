//! Catalog of quadratic model Hamiltonians with closed-form spectra.
//!
//! Builtins:
//!   oned       H = p² + x² + b(xp + px)
//!   coupled_xy H = p_x² + p_y² + x² + ay² + bxy
//!   coupled_pp H = p_x² + p_y² + x² + ay² + b p_x p_y
//!   angular    H = p_x² + p_y² + x² + ay² + b(x p_y − y p_x)
//!
//! `b` is accepted as a general complex number; the closed forms are
//! analytic in b, which is what makes continuation through the
//! exceptional points possible.

use crate::adjoint::GammaMatrix;
use crate::algebra::OperatorPoly;
use num_complex::Complex64;
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModelKind {
    OneD,
    CoupledXY,
    CoupledPP,
    Angular,
    Custom,
}

impl ModelKind {
    pub fn name(&self) -> &'static str {
        match self {
            ModelKind::OneD => "oned",
            ModelKind::CoupledXY => "coupled_xy",
            ModelKind::CoupledPP => "coupled_pp",
            ModelKind::Angular => "angular",
            ModelKind::Custom => "custom",
        }
    }

    pub fn parse(name: &str) -> Option<Self> {
        match name {
            "oned" => Some(ModelKind::OneD),
            "coupled_xy" => Some(ModelKind::CoupledXY),
            "coupled_pp" => Some(ModelKind::CoupledPP),
            "angular" => Some(ModelKind::Angular),
            "custom" => Some(ModelKind::Custom),
            _ => None,
        }
    }

    pub fn builtin_modes(&self) -> Option<usize> {
        match self {
            ModelKind::OneD => Some(1),
            ModelKind::Custom => None,
            _ => Some(2),
        }
    }
}

#[derive(Debug, Clone)]
pub struct ModelSpec {
    pub kind: ModelKind,
    pub modes: usize,
    pub a: f64,
    pub b: Complex64,
    pub gamma: Option<GammaMatrix>,
    pub constant: f64,
}

impl ModelSpec {
    pub fn builtin(kind: ModelKind, a: f64, b: Complex64) -> Self {
        let modes = kind.builtin_modes().expect("builtin kind");
        ModelSpec { kind, modes, a, b, gamma: None, constant: 0.0 }
    }

    pub fn custom(gamma: GammaMatrix, constant: f64) -> Self {
        ModelSpec {
            kind: ModelKind::Custom,
            modes: gamma.modes(),
            a: 0.0,
            b: Complex64::default(),
            gamma: Some(gamma),
            constant,
        }
    }
}

#[derive(Debug, Error)]
pub enum ModelError {
    #[error("invalid parameter: {0}")]
    InvalidParam(String),
    #[error("custom model requires a gamma matrix of dimension 2Kx2K")]
    DimensionMismatch,
    #[error("not available for custom models")]
    NotAvailable,
}

/// Eigenvalues of the adjoint matrix as given by the closed forms.
#[derive(Debug, Clone)]
pub struct ClosedFormSpectrum {
    pub lambdas: Vec<Complex64>,
}

/// The two squared natural frequencies ξ± of the 2D models.
pub fn xi_pm(kind: ModelKind, a: f64, b: Complex64) -> Option<(Complex64, Complex64)> {
    let ac = Complex64::new(a, 0.0);
    let one = Complex64::new(1.0, 0.0);
    match kind {
        ModelKind::CoupledXY => {
            let root = (b * b + (ac - one) * (ac - one)).sqrt();
            Some((2.0 * (ac + one + root), 2.0 * (ac + one - root)))
        }
        ModelKind::CoupledPP => {
            let root = (ac * b * b + (ac - one) * (ac - one)).sqrt();
            Some((2.0 * (ac + one + root), 2.0 * (ac + one - root)))
        }
        ModelKind::Angular => {
            // the square root carries a factor 2; that is the version
            // consistent with both the adjoint matrix and the reality
            // condition (b^2 - 4)(4a - b^2) < 0
            let root = 2.0 * ((ac - one) * (ac - one) + 2.0 * (ac + one) * b * b).sqrt();
            Some((2.0 * ac + b * b + 2.0 * one + root, 2.0 * ac + b * b + 2.0 * one - root))
        }
        _ => None,
    }
}

fn closed_form(kind: ModelKind, a: f64, b: Complex64) -> Option<ClosedFormSpectrum> {
    match kind {
        ModelKind::OneD => {
            let lam = 2.0 * (Complex64::new(1.0, 0.0) - b * b).sqrt();
            Some(ClosedFormSpectrum { lambdas: vec![-lam, lam] })
        }
        ModelKind::Custom => None,
        _ => {
            let (xp, xm) = xi_pm(kind, a, b)?;
            let (sp, sm) = (xp.sqrt(), xm.sqrt());
            Some(ClosedFormSpectrum { lambdas: vec![-sp, -sm, sm, sp] })
        }
    }
}

/// Build the Hamiltonian polynomial; for builtins also return the
/// closed-form spectrum of its adjoint matrix.
pub fn instantiate(
    spec: &ModelSpec,
) -> Result<(OperatorPoly, Option<ClosedFormSpectrum>), ModelError> {
    let b = spec.b;
    let poly = match spec.kind {
        ModelKind::OneD => {
            let x = OperatorPoly::coordinate(1, 0);
            let p = OperatorPoly::momentum(1, 0);
            let xp = x.multiply(&p).expect("degree 2");
            let px = p.multiply(&x).expect("degree 2");
            p.multiply(&p)
                .expect("degree 2")
                .add(&x.multiply(&x).expect("degree 2"))
                .add(&xp.add(&px).scale(b))
        }
        ModelKind::Custom => {
            let gamma = spec.gamma.as_ref().ok_or(ModelError::DimensionMismatch)?;
            gamma.to_poly()
        }
        kind => {
            if spec.a <= 0.0 {
                return Err(ModelError::InvalidParam(format!(
                    "model {} requires a > 0, got a = {}",
                    kind.name(),
                    spec.a
                )));
            }
            let x = OperatorPoly::coordinate(2, 0);
            let y = OperatorPoly::coordinate(2, 1);
            let px = OperatorPoly::momentum(2, 0);
            let py = OperatorPoly::momentum(2, 1);
            let a = Complex64::new(spec.a, 0.0);
            let base = px
                .multiply(&px)
                .expect("degree 2")
                .add(&py.multiply(&py).expect("degree 2"))
                .add(&x.multiply(&x).expect("degree 2"))
                .add(&y.multiply(&y).expect("degree 2").scale(a));
            let coupling = match kind {
                ModelKind::CoupledXY => x.multiply(&y).expect("degree 2"),
                ModelKind::CoupledPP => px.multiply(&py).expect("degree 2"),
                ModelKind::Angular => x
                    .multiply(&py)
                    .expect("degree 2")
                    .sub(&y.multiply(&px).expect("degree 2")),
                _ => unreachable!(),
            };
            base.add(&coupling.scale(b))
        }
    };
    let poly = if spec.constant != 0.0 {
        poly.add(&OperatorPoly::constant(
            spec.modes,
            Complex64::new(spec.constant, 0.0),
        ))
    } else {
        poly
    };
    Ok((poly, closed_form(spec.kind, spec.a, spec.b)))
}

/// A parameter locus where eigenvalues coalesce, given as the real value
/// of b² at the collision (negative values mean b on the imaginary axis).
#[derive(Debug, Clone)]
pub struct EpLocus {
    pub description: String,
    pub b_squared: f64,
}

impl EpLocus {
    /// Positive representative of b on the locus: real for b² ≥ 0,
    /// otherwise the imaginary part β of b = iβ.
    pub fn boundary_param(&self) -> f64 {
        self.b_squared.abs().sqrt()
    }

    pub fn is_imaginary_axis(&self) -> bool {
        self.b_squared < 0.0
    }
}

/// Closed-form exceptional-point loci of the builtin models.
pub fn exceptional_points(spec: &ModelSpec) -> Result<Vec<EpLocus>, ModelError> {
    let a = spec.a;
    let loci = match spec.kind {
        ModelKind::OneD => vec![EpLocus { description: "b^2 = 1".into(), b_squared: 1.0 }],
        ModelKind::CoupledXY => vec![
            EpLocus { description: "b^2 = 4a".into(), b_squared: 4.0 * a },
            EpLocus {
                description: "b^2 = -(a-1)^2".into(),
                b_squared: -(a - 1.0) * (a - 1.0),
            },
        ],
        ModelKind::CoupledPP => vec![
            EpLocus { description: "b^2 = 4".into(), b_squared: 4.0 },
            EpLocus {
                description: "b^2 = -(a-1)^2/a".into(),
                b_squared: -(a - 1.0) * (a - 1.0) / a,
            },
        ],
        ModelKind::Angular => vec![
            EpLocus { description: "b^2 = 4".into(), b_squared: 4.0 },
            EpLocus { description: "b^2 = 4a".into(), b_squared: 4.0 * a },
            EpLocus {
                description: "b^2 = -(a-1)^2/(2(a+1))".into(),
                b_squared: -(a - 1.0) * (a - 1.0) / (2.0 * (a + 1.0)),
            },
        ],
        ModelKind::Custom => return Err(ModelError::NotAvailable),
    };
    Ok(loci)
}

/// The reality window of each builtin as an inequality in the real number
/// b². Defined for b real or purely imaginary; `None` for general complex
/// b or custom models. Boundary points (exceptional points) count as
/// outside the open window.
pub fn reality_window(kind: ModelKind, a: f64, b: Complex64) -> Option<bool> {
    let b2 = if b.im == 0.0 {
        b.re * b.re
    } else if b.re == 0.0 {
        -b.im * b.im
    } else {
        return None;
    };
    match kind {
        ModelKind::OneD => Some(b2 < 1.0),
        ModelKind::CoupledXY => Some(-(a - 1.0) * (a - 1.0) < b2 && b2 < 4.0 * a),
        ModelKind::CoupledPP => Some(-(a - 1.0) * (a - 1.0) / a < b2 && b2 < 4.0),
        ModelKind::Angular => {
            Some(b2 > -(a - 1.0) * (a - 1.0) / (2.0 * (a + 1.0)) && (b2 - 4.0) * (4.0 * a - b2) < 0.0)
        }
        ModelKind::Custom => None,
    }
}
