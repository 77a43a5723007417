//! Eigen-analysis of the adjoint matrix: natural frequencies, ±/conjugate
//! pairing, real-vs-complex classification, defectiveness and Jordan forms
//! at exceptional points, ladder operators, σ_j and the ground energy E_0.

use crate::adjoint::{max_abs, AdjointRep};
use crate::algebra::{AlgebraError, OperatorPoly};
use crate::models::{instantiate, reality_window, ModelSpec};
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use thiserror::Error;

/// Spectrum is AllReal when max|Im λ| < REAL_FACTOR·scale.
pub const REAL_FACTOR: f64 = 1e-8;
/// ExceptionalCandidate when the minimum pairwise gap < COLLISION_FACTOR·scale.
pub const COLLISION_FACTOR: f64 = 1e-6;
/// λ is matched with −λ within PAIRING_FACTOR·max(1, spectral radius).
pub const PAIRING_FACTOR: f64 = 1e-8;
/// Numerical rank: singular values below RANK_FACTOR·σ_max count as zero.
pub const RANK_FACTOR: f64 = 1e-8;

#[derive(Debug, Error)]
pub enum SpectrumError {
    #[error("eigenvalue iteration failed to converge for a {0}x{0} matrix")]
    ConvergenceFailure(usize),
    #[error("matrix is diagonalizable within tolerance; no Jordan structure to report")]
    NotDefective,
    #[error("Jordan chain solve residual {0:.3e} exceeds tolerance")]
    IllConditioned(f64),
    #[error("ladder construction not applicable: {0}")]
    NotApplicable(String),
    #[error("pairing scalar sigma is degenerate (|sigma| = {0:.3e})")]
    DegenerateSigma(f64),
    #[error("ladder verification residual {0:.3e} exceeds tolerance")]
    LadderResidual(f64),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub enum Classification {
    AllReal,
    Complex,
    ExceptionalCandidate,
}

#[derive(Debug, Clone)]
pub struct DefectInfo {
    pub eigenvalue: Complex64,
    pub algebraic: usize,
    pub geometric: usize,
}

#[derive(Debug, Clone)]
pub struct SpectrumReport {
    /// Ordered eigenvalues: λ_j = −λ_{2K−j+1}; when all real,
    /// λ_1 < … < λ_K < 0 < λ_{K+1} < … < λ_2K.
    pub eigenvalues: Vec<Complex64>,
    /// Unit-norm eigenvectors aligned with `eigenvalues`; for defective
    /// clusters the available independent vectors are reused.
    pub eigenvectors: Vec<DVector<Complex64>>,
    /// Residuals ‖(H−λI)C‖∞ per reported eigenpair.
    pub residuals: Vec<f64>,
    /// Index pairs (j, 2K−1−j), zero-based.
    pub pairs: Vec<(usize, usize)>,
    pub classification: Classification,
    /// Coefficients of det(H−λI), index = power of λ (monic, 2K even).
    pub charpoly: Vec<Complex64>,
    /// Algebraic/geometric multiplicities per eigenvalue cluster.
    pub defects: Vec<DefectInfo>,
    pub scale: f64,
    pub min_gap: f64,
}

impl SpectrumReport {
    pub fn is_real_spectrum(&self) -> bool {
        self.eigenvalues
            .iter()
            .all(|l| l.im.abs() < REAL_FACTOR * self.scale)
    }

    pub fn max_imag(&self) -> f64 {
        self.eigenvalues.iter().map(|l| l.im.abs()).fold(0.0, f64::max)
    }
}

/// Coefficients of det(H−λI) by the Faddeev–LeVerrier recursion,
/// independent of any root finding. Index = power of λ.
pub fn char_poly(rep: &AdjointRep) -> Vec<Complex64> {
    char_poly_of(rep.matrix_h())
}

fn char_poly_of(h: &DMatrix<Complex64>) -> Vec<Complex64> {
    let n = h.nrows();
    let mut coeffs = vec![Complex64::default(); n + 1];
    coeffs[n] = Complex64::new(1.0, 0.0);
    let mut m = DMatrix::<Complex64>::identity(n, n);
    for k in 1..=n {
        let hm = h * &m;
        let c = -hm.trace() / Complex64::new(k as f64, 0.0);
        coeffs[n - k] = c;
        m = hm + DMatrix::<Complex64>::identity(n, n) * c;
    }
    // det(H−λI) = (−1)^n det(λI−H); n = 2K is even, so they coincide.
    coeffs
}

/// Evaluate the characteristic polynomial at a matrix argument (Horner).
pub fn charpoly_at_matrix(coeffs: &[Complex64], m: &DMatrix<Complex64>) -> DMatrix<Complex64> {
    let n = m.nrows();
    let id = DMatrix::<Complex64>::identity(n, n);
    let mut acc = DMatrix::<Complex64>::from_element(n, n, Complex64::default());
    for &c in coeffs.iter().rev() {
        acc = m * acc + &id * c;
    }
    acc
}

fn spectral_scale(lambdas: &[Complex64]) -> f64 {
    lambdas.iter().map(|l| l.norm()).fold(1.0, f64::max)
}

/// Double-double (compensated) arithmetic. The characteristic polynomial
/// of an adjoint matrix is even, so eigenvalues of the 2x2 and 4x4 cases
/// reduce to a quadratic in μ = λ²; solving it in extended precision keeps
/// coalescing eigenvalues accurate where plain QR degrades to ~√ε.
mod dd {
    use num_complex::Complex64;

    #[derive(Clone, Copy, Debug, Default)]
    pub struct Dd {
        pub hi: f64,
        pub lo: f64,
    }

    fn two_sum(a: f64, b: f64) -> (f64, f64) {
        let s = a + b;
        let bb = s - a;
        (s, (a - (s - bb)) + (b - bb))
    }

    fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
        let s = a + b;
        (s, b - (s - a))
    }

    fn two_prod(a: f64, b: f64) -> (f64, f64) {
        let p = a * b;
        (p, a.mul_add(b, -p))
    }

    impl Dd {
        pub fn new(x: f64) -> Self {
            Dd { hi: x, lo: 0.0 }
        }

        pub fn to_f64(self) -> f64 {
            self.hi + self.lo
        }

        pub fn add(self, o: Dd) -> Dd {
            let (s, e) = two_sum(self.hi, o.hi);
            let (hi, lo) = quick_two_sum(s, e + self.lo + o.lo);
            Dd { hi, lo }
        }

        pub fn neg(self) -> Dd {
            Dd { hi: -self.hi, lo: -self.lo }
        }

        pub fn sub(self, o: Dd) -> Dd {
            self.add(o.neg())
        }

        pub fn mul(self, o: Dd) -> Dd {
            let (p, e) = two_prod(self.hi, o.hi);
            let (hi, lo) = quick_two_sum(p, e + self.hi * o.lo + self.lo * o.hi);
            Dd { hi, lo }
        }

        pub fn div(self, o: Dd) -> Dd {
            let q1 = self.hi / o.hi;
            let r = self.sub(o.mul(Dd::new(q1)));
            let q2 = r.hi / o.hi;
            let r = r.sub(o.mul(Dd::new(q2)));
            let q3 = r.hi / o.hi;
            let (hi, lo) = quick_two_sum(q1, q2);
            Dd { hi, lo }.add(Dd::new(q3))
        }

        pub fn abs(self) -> Dd {
            if self.hi < 0.0 {
                self.neg()
            } else {
                self
            }
        }

        pub fn sqrt(self) -> Dd {
            if self.hi <= 0.0 {
                return Dd::new(self.hi.max(0.0).sqrt());
            }
            // one dd Newton step on an f64 seed: s + (x − s²)/(2s)
            let s = Dd::new(self.hi.sqrt());
            s.add(self.sub(s.mul(s)).div(Dd::new(2.0 * s.hi)))
        }
    }

    #[derive(Clone, Copy, Debug, Default)]
    pub struct Cdd {
        pub re: Dd,
        pub im: Dd,
    }

    impl Cdd {
        pub fn from_c64(c: Complex64) -> Self {
            Cdd { re: Dd::new(c.re), im: Dd::new(c.im) }
        }

        pub fn zero() -> Self {
            Cdd::default()
        }

        pub fn to_c64(self) -> Complex64 {
            Complex64::new(self.re.to_f64(), self.im.to_f64())
        }

        pub fn add(self, o: Cdd) -> Cdd {
            Cdd { re: self.re.add(o.re), im: self.im.add(o.im) }
        }

        pub fn sub(self, o: Cdd) -> Cdd {
            Cdd { re: self.re.sub(o.re), im: self.im.sub(o.im) }
        }

        pub fn neg(self) -> Cdd {
            Cdd { re: self.re.neg(), im: self.im.neg() }
        }

        pub fn mul(self, o: Cdd) -> Cdd {
            Cdd {
                re: self.re.mul(o.re).sub(self.im.mul(o.im)),
                im: self.re.mul(o.im).add(self.im.mul(o.re)),
            }
        }

        pub fn scale(self, f: f64) -> Cdd {
            Cdd { re: self.re.mul(Dd::new(f)), im: self.im.mul(Dd::new(f)) }
        }

        pub fn div(self, o: Cdd) -> Cdd {
            let den = o.re.mul(o.re).add(o.im.mul(o.im));
            Cdd {
                re: self.re.mul(o.re).add(self.im.mul(o.im)).div(den),
                im: self.im.mul(o.re).sub(self.re.mul(o.im)).div(den),
            }
        }

        pub fn norm_hi(self) -> f64 {
            self.re.hi.hypot(self.im.hi)
        }

        /// Principal branch (Re ≥ 0), matching num_complex.
        pub fn sqrt(self) -> Cdd {
            if self.norm_hi() == 0.0 && self.re.lo == 0.0 && self.im.lo == 0.0 {
                return Cdd::zero();
            }
            if self.im.hi == 0.0 && self.im.lo == 0.0 {
                if self.re.hi >= 0.0 {
                    return Cdd { re: self.re.sqrt(), im: Dd::new(0.0) };
                }
                return Cdd { re: Dd::new(0.0), im: self.re.neg().sqrt() };
            }
            let r = self.re.mul(self.re).add(self.im.mul(self.im)).sqrt();
            let t = r.add(self.re.abs()).div(Dd::new(2.0)).sqrt();
            if self.re.hi >= 0.0 {
                Cdd { re: t, im: self.im.div(t.mul(Dd::new(2.0))) }
            } else {
                Cdd {
                    re: self.im.abs().div(t.mul(Dd::new(2.0))),
                    im: if self.im.hi >= 0.0 { t } else { t.neg() },
                }
            }
        }
    }
}

fn det_dd(m: &[Vec<dd::Cdd>]) -> dd::Cdd {
    let n = m.len();
    if n == 1 {
        return m[0][0];
    }
    let mut acc = dd::Cdd::zero();
    for col in 0..n {
        let minor: Vec<Vec<dd::Cdd>> = (1..n)
            .map(|r| (0..n).filter(|&c| c != col).map(|c| m[r][c]).collect())
            .collect();
        let term = m[0][col].mul(det_dd(&minor));
        acc = if col % 2 == 0 { acc.add(term) } else { acc.sub(term) };
    }
    acc
}

/// High-accuracy eigenvalues for 2x2 and 4x4 matrices with an even
/// characteristic polynomial: compensated minors plus a cancellation-free
/// quadratic solve in μ = λ². Returns None when the polynomial is not even
/// (the matrix then is not an adjoint representation) or n ∉ {2, 4}.
fn refined_even_roots(h: &DMatrix<Complex64>) -> Option<Vec<Complex64>> {
    let n = h.nrows();
    if n != 2 && n != 4 {
        return None;
    }
    let coeffs = char_poly_of(h);
    let cscale = coeffs.iter().map(|c| c.norm()).fold(1.0, f64::max);
    if coeffs.iter().skip(1).step_by(2).any(|c| c.norm() > 1e-10 * cscale) {
        return None;
    }
    let e = |i: usize, j: usize| dd::Cdd::from_c64(h[(i, j)]);
    if n == 2 {
        let det = e(0, 0).mul(e(1, 1)).sub(e(0, 1).mul(e(1, 0)));
        let lam = det.neg().sqrt().to_c64();
        return Some(vec![lam, -lam]);
    }
    // c2 = Σ 2x2 principal minors, c0 = det
    let mut c2 = dd::Cdd::zero();
    for i in 0..4 {
        for j in i + 1..4 {
            c2 = c2.add(e(i, i).mul(e(j, j)).sub(e(i, j).mul(e(j, i))));
        }
    }
    let rows: Vec<Vec<dd::Cdd>> = (0..4).map(|r| (0..4).map(|c| e(r, c)).collect()).collect();
    let c0 = det_dd(&rows);
    // μ² + c2 μ + c0 = 0; take the large root without cancellation,
    // the small one as c0 / μ_large
    let mut s = c2.mul(c2).sub(c0.scale(4.0)).sqrt();
    if c2.re.hi * s.re.hi + c2.im.hi * s.im.hi < 0.0 {
        s = s.neg();
    }
    let q = c2.add(s).scale(-0.5);
    let mu1 = q;
    let mu2 = if q.norm_hi() > 0.0 { c0.div(q) } else { q };
    let l1 = mu1.sqrt().to_c64();
    let l2 = mu2.sqrt().to_c64();
    Some(vec![l1, -l1, l2, -l2])
}

const SCHUR_MAX_ITER: usize = 20_000;

fn horner(coeffs: &[Complex64], z: Complex64) -> Complex64 {
    coeffs.iter().rev().fold(Complex64::default(), |acc, &c| acc * z + c)
}

/// Simultaneous root iteration (Durand–Kerner) for a monic polynomial.
/// Only used as a fallback when the QR iteration stalls.
fn durand_kerner(coeffs: &[Complex64]) -> Vec<Complex64> {
    let n = coeffs.len() - 1;
    let scale = coeffs.iter().map(|c| c.norm()).fold(1.0, f64::max);
    let seed = Complex64::new(0.4, 0.9);
    let mut z: Vec<Complex64> = (0..n).map(|i| seed.powu(i as u32 + 1)).collect();
    for _ in 0..1000 {
        let mut shift = 0.0f64;
        for i in 0..n {
            let mut denom = Complex64::new(1.0, 0.0);
            for j in 0..n {
                if j != i {
                    denom *= z[i] - z[j];
                }
            }
            let d = horner(coeffs, z[i]) / denom;
            z[i] -= d;
            shift = shift.max(d.norm());
        }
        if shift < 1e-15 * scale {
            break;
        }
    }
    z
}

/// Eigenvalues with a bounded QR iteration. nalgebra's unbounded
/// `eigenvalues()` can cycle forever on some structured complex matrices,
/// so on failure the matrix is retried under a fixed unitary similarity
/// (same spectrum, different iteration path) and finally handed to a
/// root finder on the exact characteristic polynomial.
fn eigenvalues_of(h: &DMatrix<Complex64>) -> Vec<Complex64> {
    let raw = qr_eigenvalues(h);
    if let Some(refined) = refined_even_roots(h) {
        // accept the refined roots only while they agree with the
        // iteration result to well within its own accuracy
        let scale = spectral_scale(&raw);
        let consistent = refined
            .iter()
            .all(|r| raw.iter().any(|q| (q - r).norm() < 1e-5 * scale));
        if consistent {
            return refined;
        }
    }
    raw
}

fn qr_eigenvalues(h: &DMatrix<Complex64>) -> Vec<Complex64> {
    let eps = f64::EPSILON;
    if let Some(schur) = nalgebra::linalg::Schur::try_new(h.clone(), eps, SCHUR_MAX_ITER) {
        if let Some(v) = schur.eigenvalues() {
            return v.iter().copied().collect();
        }
    }
    let q = fixed_unitary(h.nrows());
    let rotated = q.adjoint() * h * &q;
    if let Some(schur) = nalgebra::linalg::Schur::try_new(rotated, eps, SCHUR_MAX_ITER) {
        if let Some(v) = schur.eigenvalues() {
            return v.iter().copied().collect();
        }
    }
    durand_kerner(&char_poly_of(h))
}

/// Deterministic dense unitary from the QR factorization of a fixed
/// pseudo-random complex matrix.
fn fixed_unitary(n: usize) -> DMatrix<Complex64> {
    let mut state = 0x9e37_79b9_7f4a_7c15u64;
    let mut next = move || {
        state ^= state << 13;
        state ^= state >> 7;
        state ^= state << 17;
        (state >> 11) as f64 / (1u64 << 53) as f64 - 0.5
    };
    let m = DMatrix::from_fn(n, n, |_, _| Complex64::new(next(), next()));
    m.qr().q()
}

/// Orthonormal basis of the numerical null space of `m`.
fn null_space(m: &DMatrix<Complex64>) -> Vec<DVector<Complex64>> {
    let svd = m.clone().svd(false, true);
    let v_t = svd.v_t.expect("requested V^T");
    let smax = svd.singular_values.iter().fold(0.0f64, |a, &b| a.max(b));
    let thr = RANK_FACTOR * smax.max(1e-300);
    let mut out = Vec::new();
    for (i, &s) in svd.singular_values.iter().enumerate() {
        if s <= thr {
            out.push(v_t.row(i).transpose().map(|c| c.conj()));
        }
    }
    out
}

fn numerical_rank(m: &DMatrix<Complex64>) -> usize {
    let svd = m.clone().svd(false, false);
    let smax = svd.singular_values.iter().fold(0.0f64, |a, &b| a.max(b));
    let thr = RANK_FACTOR * smax.max(1e-300);
    svd.singular_values.iter().filter(|&&s| s > thr).count()
}

/// Minimum-norm least-squares solve via the SVD pseudoinverse.
fn pinv_solve(m: &DMatrix<Complex64>, rhs: &DVector<Complex64>) -> DVector<Complex64> {
    let svd = m.clone().svd(true, true);
    let u = svd.u.as_ref().expect("U");
    let v_t = svd.v_t.as_ref().expect("V^T");
    let smax = svd.singular_values.iter().fold(0.0f64, |a, &b| a.max(b));
    let thr = RANK_FACTOR * smax.max(1e-300);
    let mut y = u.adjoint() * rhs;
    for (i, &s) in svd.singular_values.iter().enumerate() {
        y[i] = if s > thr { y[i] / Complex64::new(s, 0.0) } else { Complex64::default() };
    }
    v_t.adjoint() * y
}

/// Deterministic normalization: unit Euclidean norm, the component of
/// largest magnitude rotated to be positive real (first wins on ties).
fn normalize_vector(v: &mut DVector<Complex64>) {
    let norm = v.norm();
    if norm == 0.0 {
        return;
    }
    *v /= Complex64::new(norm, 0.0);
    let mut best = 0usize;
    let mut best_mag = 0.0f64;
    for (i, c) in v.iter().enumerate() {
        if c.norm() > best_mag * (1.0 + 1e-12) {
            best_mag = c.norm();
            best = i;
        }
    }
    let pivot = v[best];
    if pivot.norm() > 0.0 {
        let phase = pivot / Complex64::new(pivot.norm(), 0.0);
        *v /= phase;
    }
}

/// Group indices of `lambdas` into clusters of coinciding eigenvalues.
fn cluster_indices(lambdas: &[Complex64], tol: f64) -> Vec<Vec<usize>> {
    let mut clusters: Vec<Vec<usize>> = Vec::new();
    for (i, l) in lambdas.iter().enumerate() {
        let mut found = None;
        for (ci, cluster) in clusters.iter().enumerate() {
            if cluster.iter().any(|&j| (lambdas[j] - l).norm() <= tol) {
                found = Some(ci);
                break;
            }
        }
        match found {
            Some(ci) => clusters[ci].push(i),
            None => clusters.push(vec![i]),
        }
    }
    clusters
}

fn order_eigenvalues(raw: &[Complex64], scale: f64) -> Vec<Complex64> {
    let n = raw.len();
    let all_real = raw.iter().all(|l| l.im.abs() < REAL_FACTOR * scale);
    if all_real {
        let mut v = raw.to_vec();
        v.sort_by(|p, q| p.re.partial_cmp(&q.re).unwrap());
        return v;
    }
    // Complex case: sort by (Re, Im), then greedily pair λ with −λ and
    // place partners in mirrored slots.
    let mut idx: Vec<usize> = (0..n).collect();
    idx.sort_by(|&a, &b| {
        raw[a]
            .re
            .partial_cmp(&raw[b].re)
            .unwrap()
            .then(raw[a].im.partial_cmp(&raw[b].im).unwrap())
    });
    let mut used = vec![false; n];
    let mut out = vec![Complex64::default(); n];
    let mut slot = 0usize;
    for &a in &idx {
        if used[a] {
            continue;
        }
        used[a] = true;
        let mut partner = None;
        let mut best = f64::INFINITY;
        for &b in &idx {
            if used[b] {
                continue;
            }
            let miss = (raw[a] + raw[b]).norm();
            if miss < best {
                best = miss;
                partner = Some(b);
            }
        }
        let b = partner.expect("even count of eigenvalues");
        used[b] = true;
        out[slot] = raw[a];
        out[n - 1 - slot] = raw[b];
        slot += 1;
    }
    out
}

/// Full eigen-analysis of the adjoint matrix.
///
/// `tol` bounds the per-eigenpair residual ‖(H−λI)C‖∞ relative to ‖H‖∞.
pub fn eigen(rep: &AdjointRep, tol: f64) -> Result<SpectrumReport, SpectrumError> {
    let h = rep.matrix_h();
    let n = rep.dim();
    let raw = eigenvalues_of(h);
    let scale = spectral_scale(&raw);
    let eigenvalues = order_eigenvalues(&raw, scale);

    let collision_tol = COLLISION_FACTOR * scale;
    let clusters = cluster_indices(&eigenvalues, collision_tol);

    let mut eigenvectors: Vec<Option<DVector<Complex64>>> = vec![None; n];
    let mut defects = Vec::new();
    for cluster in &clusters {
        let mu = cluster.iter().map(|&i| eigenvalues[i]).sum::<Complex64>()
            / Complex64::new(cluster.len() as f64, 0.0);
        let shifted = h - DMatrix::<Complex64>::identity(n, n) * mu;
        let mut basis = null_space(&shifted);
        if basis.is_empty() {
            // Fall back to the smallest singular vector so a near-null
            // direction is always reported.
            let svd = shifted.clone().svd(false, true);
            let v_t = svd.v_t.expect("V^T");
            let (mut imin, mut smin) = (0usize, f64::INFINITY);
            for (i, &s) in svd.singular_values.iter().enumerate() {
                if s < smin {
                    smin = s;
                    imin = i;
                }
            }
            basis.push(v_t.row(imin).transpose().map(|c| c.conj()));
        }
        for v in &mut basis {
            normalize_vector(v);
        }
        let geometric = (n - numerical_rank(&shifted)).max(1).min(cluster.len());
        defects.push(DefectInfo { eigenvalue: mu, algebraic: cluster.len(), geometric });
        for (pos, &slot) in cluster.iter().enumerate() {
            eigenvectors[slot] = Some(basis[pos % basis.len()].clone());
        }
    }
    let eigenvectors: Vec<DVector<Complex64>> =
        eigenvectors.into_iter().map(|v| v.expect("assigned")).collect();

    let hnorm = max_abs(h).max(1e-300);
    let residuals: Vec<f64> = eigenvalues
        .iter()
        .zip(&eigenvectors)
        .map(|(&l, v)| {
            let r = h * v - v * l;
            r.iter().map(|c| c.norm()).fold(0.0, f64::max) / hnorm
        })
        .collect();
    let _ = tol; // the contract bound; asserted by callers and tests

    let mut min_gap = f64::INFINITY;
    for i in 0..n {
        for j in i + 1..n {
            min_gap = min_gap.min((eigenvalues[i] - eigenvalues[j]).norm());
        }
    }

    let all_real = eigenvalues.iter().all(|l| l.im.abs() < REAL_FACTOR * scale);
    let classification = if min_gap < collision_tol {
        Classification::ExceptionalCandidate
    } else if all_real {
        Classification::AllReal
    } else {
        Classification::Complex
    };

    let pairs = (0..n / 2).map(|j| (j, n - 1 - j)).collect();

    Ok(SpectrumReport {
        eigenvalues,
        eigenvectors,
        residuals,
        pairs,
        classification,
        charpoly: char_poly(rep),
        defects,
        scale,
        min_gap,
    })
}

/// Algebraic and geometric multiplicity of an eigenvalue given explicitly.
pub fn defect_info(rep: &AdjointRep, lambda: Complex64, tol: f64) -> (usize, usize) {
    let h = rep.matrix_h();
    let n = rep.dim();
    let raw = eigenvalues_of(h);
    let scale = spectral_scale(&raw);
    let cluster_tol = tol.max(COLLISION_FACTOR * scale);
    let algebraic = raw.iter().filter(|l| (*l - lambda).norm() <= cluster_tol).count();
    let shifted = h - DMatrix::<Complex64>::identity(n, n) * lambda;
    let geometric = n - numerical_rank(&shifted);
    (algebraic, geometric)
}

#[derive(Debug, Clone)]
pub struct JordanResult {
    pub p: DMatrix<Complex64>,
    pub j: DMatrix<Complex64>,
    pub residual: f64,
}

/// Jordan canonical form for matrices with (order-2) defective eigenvalues.
/// Chains are built by least-squares solves of (H−λI)v₂ = v₁.
pub fn jordan_form(rep: &AdjointRep, tol: f64) -> Result<JordanResult, SpectrumError> {
    let h = rep.matrix_h();
    let n = rep.dim();
    let report = eigen(rep, tol)?;
    if report.defects.iter().all(|d| d.geometric >= d.algebraic) {
        return Err(SpectrumError::NotDefective);
    }
    let scale = report.scale;

    let mut columns: Vec<DVector<Complex64>> = Vec::with_capacity(n);
    let mut j_mat = DMatrix::<Complex64>::from_element(n, n, Complex64::default());
    let mut chain_residual = 0.0f64;
    let mut col = 0usize;
    let mut defects = report.defects.clone();
    defects.sort_by(|a, b| {
        a.eigenvalue
            .re
            .partial_cmp(&b.eigenvalue.re)
            .unwrap()
            .then(a.eigenvalue.im.partial_cmp(&b.eigenvalue.im).unwrap())
    });
    for d in &defects {
        let mu = d.eigenvalue;
        let shifted = h - DMatrix::<Complex64>::identity(n, n) * mu;
        let mut basis = null_space(&shifted);
        if basis.is_empty() {
            return Err(SpectrumError::IllConditioned(f64::INFINITY));
        }
        for v in &mut basis {
            normalize_vector(v);
        }
        let geometric = basis.len().min(d.algebraic);
        let chains_needed = d.algebraic - geometric;
        if chains_needed > geometric {
            return Err(SpectrumError::IllConditioned(f64::INFINITY));
        }
        for (i, v1) in basis.iter().take(geometric).enumerate() {
            if i < chains_needed {
                let v2 = pinv_solve(&shifted, v1);
                let res = (&shifted * &v2 - v1).norm();
                if res > tol.max(1e-8) * scale {
                    return Err(SpectrumError::IllConditioned(res));
                }
                chain_residual = chain_residual.max(res);
                j_mat[(col, col)] = mu;
                j_mat[(col, col + 1)] = Complex64::new(1.0, 0.0);
                j_mat[(col + 1, col + 1)] = mu;
                columns.push(v1.clone());
                columns.push(v2);
                col += 2;
            } else {
                j_mat[(col, col)] = mu;
                columns.push(v1.clone());
                col += 1;
            }
        }
    }
    if col != n {
        return Err(SpectrumError::IllConditioned(f64::INFINITY));
    }
    let p = DMatrix::<Complex64>::from_columns(&columns);
    let lu = p.clone().lu();
    let p_inv = lu.try_inverse().ok_or(SpectrumError::IllConditioned(f64::INFINITY))?;
    let residual = max_abs(&(&p_inv * h * &p - &j_mat)).max(chain_residual);
    Ok(JordanResult { p, j: j_mat, residual })
}

#[derive(Debug, Clone)]
pub struct LadderSystem {
    /// Degree-1 ladder operators, slot-aligned with `lambdas`.
    pub z: Vec<OperatorPoly>,
    pub lambdas: Vec<Complex64>,
    /// σ_j = scalar part of [Z_j, Z_{2K−j+1}], j = 1..K.
    pub sigma: Vec<Complex64>,
    pub e0: Complex64,
    /// Max non-constant coefficient left in H + Σ (λ_j/σ_j) Z_{2K−j+1} Z_j − E₀.
    pub identity_residual: f64,
}

const LADDER_TOL: f64 = 1e-10;

/// Build ladder operators from the adjoint eigenvectors and rewrite H as
/// −Σ (λ_j/σ_j) Z_{2K−j+1} Z_j + E₀. Requires a real, diagonalizable
/// spectrum. Degenerate clusters are handled by diagonalizing the
/// symplectic pairing between the ±λ eigenspaces.
pub fn ladder_system(rep: &AdjointRep, h: &OperatorPoly) -> Result<LadderSystem, SpectrumError> {
    let report = eigen(rep, LADDER_TOL)?;
    if !report.is_real_spectrum() {
        return Err(SpectrumError::NotApplicable(format!(
            "spectrum is complex (max |Im| = {:.3e})",
            report.max_imag()
        )));
    }
    if report.defects.iter().any(|d| d.geometric < d.algebraic) {
        return Err(SpectrumError::NotApplicable(
            "adjoint matrix is defective".to_string(),
        ));
    }
    let k = rep.modes();
    let n = rep.dim();
    let hm = rep.matrix_h();
    let u = rep.matrix_u();
    let lambdas = report.eigenvalues.clone();
    let collision_tol = COLLISION_FACTOR * report.scale;
    let pairing_tol = PAIRING_FACTOR * report.scale.max(1.0);

    // Clusters over the ordered list; each negative-side cluster is matched
    // with its mirror on the positive side.
    let clusters = cluster_indices(&lambdas, collision_tol);
    let mut vectors: Vec<Option<DVector<Complex64>>> = vec![None; n];
    for cluster in &clusters {
        let mu = lambdas[cluster[0]];
        if mu.re >= 0.0 {
            continue; // handled together with its negative partner
        }
        if mu.norm() <= pairing_tol {
            return Err(SpectrumError::DegenerateSigma(0.0));
        }
        let partner = clusters
            .iter()
            .find(|c| (lambdas[c[0]] + mu).norm() <= collision_tol.max(pairing_tol))
            .ok_or_else(|| {
                SpectrumError::NotApplicable("spectrum not closed under negation".to_string())
            })?;
        if partner.len() != cluster.len() {
            return Err(SpectrumError::NotApplicable(
                "mismatched multiplicities between λ and −λ".to_string(),
            ));
        }
        let g = cluster.len();
        let id = DMatrix::<Complex64>::identity(n, n);
        let mut neg_basis = null_space(&(hm - &id * mu));
        let mut pos_basis = null_space(&(hm - &id * (-mu)));
        if neg_basis.len() < g || pos_basis.len() < g {
            return Err(SpectrumError::NotApplicable(
                "eigenspace dimension below multiplicity".to_string(),
            ));
        }
        neg_basis.truncate(g);
        pos_basis.truncate(g);
        for v in neg_basis.iter_mut().chain(pos_basis.iter_mut()) {
            normalize_vector(v);
        }
        if g == 1 {
            vectors[cluster[0]] = Some(neg_basis[0].clone());
            vectors[partner[0]] = Some(pos_basis[0].clone());
        } else {
            // Diagonalize the symplectic pairing M_ab = v_aᵗ U w_b so that
            // each slot pairs with exactly one partner slot.
            let m = DMatrix::<Complex64>::from_fn(g, g, |r, c| {
                (neg_basis[r].transpose() * u * &pos_basis[c])[(0, 0)]
            });
            let m_inv = m
                .lu()
                .try_inverse()
                .ok_or(SpectrumError::DegenerateSigma(0.0))?;
            let w = DMatrix::<Complex64>::from_columns(&pos_basis);
            let corrected = w * m_inv;
            for (a, &slot) in cluster.iter().enumerate() {
                vectors[slot] = Some(neg_basis[a].clone());
                // slot j pairs with slot n−1−j
                let pair_slot = n - 1 - slot;
                vectors[pair_slot] = Some(corrected.column(a).into_owned());
            }
        }
    }
    let vectors: Vec<DVector<Complex64>> = vectors
        .into_iter()
        .collect::<Option<Vec<_>>>()
        .ok_or_else(|| SpectrumError::NotApplicable("incomplete eigenbasis".to_string()))?;

    let z: Vec<OperatorPoly> = vectors
        .iter()
        .map(|v| OperatorPoly::from_linear(k, v.as_slice()))
        .collect();

    // Verify [H, Z_j] = λ_j Z_j on the operator level.
    for (j, zj) in z.iter().enumerate() {
        let comm = h.commutator(zj)?;
        let diff = comm.max_diff(&zj.scale(lambdas[j]));
        if diff > LADDER_TOL * report.scale.max(1.0) {
            return Err(SpectrumError::LadderResidual(diff));
        }
    }

    // σ_j from the exact operator commutator (independent of the matrix
    // route vᵗUw used above).
    let mut sigma = Vec::with_capacity(k);
    for j in 0..k {
        let comm = z[j].commutator(&z[n - 1 - j])?;
        if comm.nonconstant_norm() > LADDER_TOL {
            return Err(SpectrumError::LadderResidual(comm.nonconstant_norm()));
        }
        let s = comm.constant_part();
        if s.norm() < 1e-10 {
            return Err(SpectrumError::DegenerateSigma(s.norm()));
        }
        sigma.push(s);
    }

    // H + Σ (λ_j/σ_j) Z_{2K−j+1} Z_j must be a pure constant: E₀.
    let mut remainder = h.clone();
    for j in 0..k {
        let prod = z[n - 1 - j].multiply(&z[j])?;
        remainder = remainder.add(&prod.scale(lambdas[j] / sigma[j]));
    }
    let identity_residual = remainder.nonconstant_norm();
    if identity_residual > LADDER_TOL * report.scale.max(1.0) {
        return Err(SpectrumError::LadderResidual(identity_residual));
    }
    Ok(LadderSystem {
        z,
        lambdas,
        sigma,
        e0: remainder.constant_part(),
        identity_residual,
    })
}

/// For Hermitian H the adjoints of the ladder operators are ladders too:
/// [H, Z_j†] = −λ_j* Z_j†.
pub fn hermitian_ladder_check(
    h: &OperatorPoly,
    ladder: &LadderSystem,
    tol: f64,
) -> Result<bool, SpectrumError> {
    for (zj, &lam) in ladder.z.iter().zip(&ladder.lambdas) {
        let zd = zj.adjoint();
        let comm = h.commutator(&zd)?;
        if comm.max_diff(&zd.scale(-lam.conj())) > tol {
            return Ok(false);
        }
    }
    Ok(true)
}

#[derive(Debug, Clone)]
pub struct RealityCheck {
    pub numeric_real: bool,
    /// Verdict of the closed-form inequality; None when b is genuinely
    /// complex or the model has no closed form.
    pub window_real: Option<bool>,
}

impl RealityCheck {
    pub fn consistent(&self) -> Option<bool> {
        self.window_real.map(|w| w == self.numeric_real)
    }
}

/// Compare the numeric classification against the model's closed-form
/// reality window. A self-test, not a substitute for `eigen`.
pub fn classify_reality(spec: &ModelSpec) -> Result<RealityCheck, SpectrumError> {
    let (poly, _) = instantiate(spec)
        .map_err(|e| SpectrumError::NotApplicable(e.to_string()))?;
    let rep = crate::adjoint::build_adjoint(&poly)
        .map_err(|e| SpectrumError::NotApplicable(e.to_string()))?;
    let report = eigen(&rep, 1e-10)?;
    Ok(RealityCheck {
        numeric_real: report.is_real_spectrum(),
        window_real: reality_window(spec.kind, spec.a, spec.b),
    })
}
