//! Exact algebra of polynomials in the canonical variables
//! {x_1..x_K, p_1..p_K} with [x_m, p_n] = i δ_mn (ħ = 1).
//!
//! Every polynomial is kept in normal order: within each mode all
//! coordinate factors stand to the left of all momentum factors. Products
//! are re-normalized exhaustively through the reordering identity
//!
//!   p^b x^c = Σ_j C(b,j) C(c,j) j! (−i)^j x^(c−j) p^(b−j),
//!
//! which is all that is needed for products of quadratics (degree ≤ 4).

use num_complex::Complex64;
use std::collections::BTreeMap;
use std::fmt;
use thiserror::Error;

/// Terms with coefficient magnitude below this are dropped after every
/// arithmetic operation, keeping the term map canonical.
pub const ZERO_THRESHOLD: f64 = 1e-14;

/// Products of quadratics never exceed this; anything larger is rejected
/// rather than silently truncated.
pub const MAX_DEGREE: u32 = 4;

#[derive(Debug, Error, PartialEq)]
pub enum AlgebraError {
    #[error("product degree {0} exceeds the supported maximum {MAX_DEGREE}")]
    DegreeOverflow(u32),
    #[error("operands act on different numbers of modes ({0} vs {1})")]
    ModeMismatch(usize, usize),
}

/// A normally ordered monomial x_1^a1 … x_K^aK p_1^b1 … p_K^bK.
///
/// `exps` stores the 2K exponents in that canonical order (coordinates
/// first, then momenta). The derived lexicographic `Ord` fixes the term
/// order inside an [`OperatorPoly`].
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial {
    exps: Vec<u8>,
}

impl Monomial {
    pub fn new(exps: Vec<u8>) -> Self {
        assert!(exps.len() % 2 == 0, "exponent list must have even length");
        Monomial { exps }
    }

    pub fn unit(modes: usize) -> Self {
        Monomial { exps: vec![0; 2 * modes] }
    }

    pub fn modes(&self) -> usize {
        self.exps.len() / 2
    }

    pub fn degree(&self) -> u32 {
        self.exps.iter().map(|&e| e as u32).sum()
    }

    pub fn is_constant(&self) -> bool {
        self.exps.iter().all(|&e| e == 0)
    }

    pub fn x_exp(&self, mode: usize) -> u8 {
        self.exps[mode]
    }

    pub fn p_exp(&self, mode: usize) -> u8 {
        self.exps[self.modes() + mode]
    }

    pub fn exps(&self) -> &[u8] {
        &self.exps
    }
}

/// A complex-coefficient polynomial in the canonical variables, stored as
/// a map from normally ordered monomials to coefficients.
#[derive(Debug, Clone, PartialEq)]
pub struct OperatorPoly {
    modes: usize,
    terms: BTreeMap<Monomial, Complex64>,
}

fn binom(n: u8, k: u8) -> f64 {
    let (n, k) = (n as u64, k as u64);
    if k > n {
        return 0.0;
    }
    let mut acc = 1u64;
    for j in 0..k {
        acc = acc * (n - j) / (j + 1);
    }
    acc as f64
}

fn factorial(n: u8) -> f64 {
    (1..=n as u64).product::<u64>() as f64
}

/// Expansion of p^b x^a for a single mode in normal order:
/// returns (x exponent, p exponent, scalar) triples.
fn reorder_p_x(b: u8, a: u8) -> Vec<(u8, u8, Complex64)> {
    let minus_i = Complex64::new(0.0, -1.0);
    (0..=b.min(a))
        .map(|j| {
            let scalar = binom(b, j) * binom(a, j) * factorial(j);
            (a - j, b - j, minus_i.powu(j as u32) * scalar)
        })
        .collect()
}

impl OperatorPoly {
    pub fn zero(modes: usize) -> Self {
        OperatorPoly { modes, terms: BTreeMap::new() }
    }

    pub fn constant(modes: usize, value: Complex64) -> Self {
        let mut p = Self::zero(modes);
        p.add_term(Monomial::unit(modes), value);
        p
    }

    /// The coordinate operator x_mode.
    pub fn coordinate(modes: usize, mode: usize) -> Self {
        assert!(mode < modes);
        let mut exps = vec![0u8; 2 * modes];
        exps[mode] = 1;
        let mut p = Self::zero(modes);
        p.add_term(Monomial::new(exps), Complex64::new(1.0, 0.0));
        p
    }

    /// The momentum operator p_mode.
    pub fn momentum(modes: usize, mode: usize) -> Self {
        assert!(mode < modes);
        let mut exps = vec![0u8; 2 * modes];
        exps[modes + mode] = 1;
        let mut p = Self::zero(modes);
        p.add_term(Monomial::new(exps), Complex64::new(1.0, 0.0));
        p
    }

    /// The i-th element of the canonical basis {x_1..x_K, p_1..p_K}.
    pub fn basis_op(modes: usize, index: usize) -> Self {
        if index < modes {
            Self::coordinate(modes, index)
        } else {
            Self::momentum(modes, index - modes)
        }
    }

    /// Σ_i coeffs[i] O_i over the canonical degree-1 basis.
    pub fn from_linear(modes: usize, coeffs: &[Complex64]) -> Self {
        assert_eq!(coeffs.len(), 2 * modes);
        let mut p = Self::zero(modes);
        for (i, &c) in coeffs.iter().enumerate() {
            let mut exps = vec![0u8; 2 * modes];
            exps[i] = 1;
            p.add_term(Monomial::new(exps), c);
        }
        p.prune();
        p
    }

    pub fn modes(&self) -> usize {
        self.modes
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Complex64)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.terms.keys().map(Monomial::degree).max().unwrap_or(0)
    }

    pub fn coefficient(&self, m: &Monomial) -> Complex64 {
        self.terms.get(m).copied().unwrap_or_default()
    }

    pub fn constant_part(&self) -> Complex64 {
        self.coefficient(&Monomial::unit(self.modes))
    }

    /// Largest coefficient magnitude over the non-constant monomials.
    pub fn nonconstant_norm(&self) -> f64 {
        self.terms
            .iter()
            .filter(|(m, _)| !m.is_constant())
            .map(|(_, c)| c.norm())
            .fold(0.0, f64::max)
    }

    /// Largest coefficient magnitude over all monomials.
    pub fn max_norm(&self) -> f64 {
        self.terms.values().map(|c| c.norm()).fold(0.0, f64::max)
    }

    fn add_term(&mut self, m: Monomial, c: Complex64) {
        let entry = self.terms.entry(m).or_insert_with(Complex64::default);
        *entry += c;
    }

    fn prune(&mut self) {
        self.terms.retain(|_, c| c.norm() >= ZERO_THRESHOLD);
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), *c);
        }
        out.prune();
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(Complex64::new(-1.0, 0.0)))
    }

    pub fn scale(&self, factor: Complex64) -> Self {
        let mut out = self.clone();
        for c in out.terms.values_mut() {
            *c *= factor;
        }
        out.prune();
        out
    }

    /// Normally ordered product self·other.
    pub fn multiply(&self, other: &Self) -> Result<Self, AlgebraError> {
        if self.modes != other.modes {
            return Err(AlgebraError::ModeMismatch(self.modes, other.modes));
        }
        let total = self.degree() + other.degree();
        if total > MAX_DEGREE {
            return Err(AlgebraError::DegreeOverflow(total));
        }
        let k = self.modes;
        let mut out = Self::zero(k);
        for (ml, cl) in &self.terms {
            for (mr, cr) in &other.terms {
                // Per mode: x^a p^b · x^c p^d = x^a (p^b x^c) p^d.
                // Modes commute, so expand each independently and combine.
                let mut partial: Vec<(Vec<u8>, Complex64)> =
                    vec![(vec![0u8; 2 * k], cl * cr)];
                for mode in 0..k {
                    let a = ml.x_exp(mode);
                    let b = ml.p_exp(mode);
                    let c = mr.x_exp(mode);
                    let d = mr.p_exp(mode);
                    let pieces = reorder_p_x(b, c);
                    let mut next = Vec::with_capacity(partial.len() * pieces.len());
                    for (exps, coeff) in &partial {
                        for &(xe, pe, s) in &pieces {
                            let mut e = exps.clone();
                            e[mode] = a + xe;
                            e[k + mode] = pe + d;
                            next.push((e, coeff * s));
                        }
                    }
                    partial = next;
                }
                for (exps, coeff) in partial {
                    out.add_term(Monomial::new(exps), coeff);
                }
            }
        }
        out.prune();
        Ok(out)
    }

    /// pq − qp in normal order.
    pub fn commutator(&self, other: &Self) -> Result<Self, AlgebraError> {
        Ok(self.multiply(other)?.sub(&other.multiply(self)?))
    }

    /// Hermitian adjoint: conjugated coefficients, factor order reversed
    /// per monomial and re-normalized. x and p are Hermitian, so the
    /// reversal of x^a p^b is p^b x^a.
    pub fn adjoint(&self) -> Self {
        let k = self.modes;
        let mut out = Self::zero(k);
        for (m, c) in &self.terms {
            let mut partial: Vec<(Vec<u8>, Complex64)> = vec![(vec![0u8; 2 * k], c.conj())];
            for mode in 0..k {
                let a = m.x_exp(mode);
                let b = m.p_exp(mode);
                let pieces = reorder_p_x(b, a);
                let mut next = Vec::with_capacity(partial.len() * pieces.len());
                for (exps, coeff) in &partial {
                    for &(xe, pe, s) in &pieces {
                        let mut e = exps.clone();
                        e[mode] = xe;
                        e[k + mode] = pe;
                        next.push((e, coeff * s));
                    }
                }
                partial = next;
            }
            for (exps, coeff) in partial {
                out.add_term(Monomial::new(exps), coeff);
            }
        }
        out.prune();
        out
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.approx_eq(&self.adjoint(), tol)
    }

    /// Coefficient-wise equality within `tol` over the union of monomials.
    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        self.max_diff(other) <= tol
    }

    /// Largest coefficient-wise difference.
    pub fn max_diff(&self, other: &Self) -> f64 {
        let mut worst = 0.0f64;
        for (m, c) in &self.terms {
            worst = worst.max((c - other.coefficient(m)).norm());
        }
        for (m, c) in &other.terms {
            if !self.terms.contains_key(m) {
                worst = worst.max(c.norm());
            }
        }
        worst
    }

    /// Split into (degree-1 coefficients over the canonical basis, constant
    /// part, max coefficient magnitude of everything of degree ≥ 2).
    pub fn linear_decomposition(&self) -> (Vec<Complex64>, Complex64, f64) {
        let k = self.modes;
        let mut linear = vec![Complex64::default(); 2 * k];
        let mut constant = Complex64::default();
        let mut residual = 0.0f64;
        for (m, c) in &self.terms {
            match m.degree() {
                0 => constant = *c,
                1 => {
                    let idx = m.exps.iter().position(|&e| e == 1).unwrap();
                    linear[idx] = *c;
                }
                _ => residual = residual.max(c.norm()),
            }
        }
        (linear, constant, residual)
    }
}

impl fmt::Display for OperatorPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let k = self.modes;
        let mut first = true;
        for (m, c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({:.6}{:+.6}i)", c.re, c.im)?;
            for mode in 0..k {
                for (label, e) in [("x", m.x_exp(mode)), ("p", m.p_exp(mode))] {
                    if e > 0 {
                        write!(f, " {}{}", label, mode + 1)?;
                        if e > 1 {
                            write!(f, "^{}", e)?;
                        }
                    }
                }
            }
        }
        Ok(())
    }
}
