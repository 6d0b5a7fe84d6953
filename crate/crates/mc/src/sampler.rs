//! Haar sampling of O(N), U(N) and Sp(2N), of the symmetric-space
//! representatives AI, AII, AIII, BDI and CII, and of the induced stochastic
//! matrices `M_ij = |U_ij|²`.
//!
//! Every sample draws from its own ChaCha8 generator positioned by
//! `(seed, stream, index)`, so results do not depend on thread scheduling.

use nalgebra::{Complex, DMatrix};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};
use stochmat_core::moments::Ensemble;

use crate::error::{Error, Result};

pub type RMatrix = DMatrix<f64>;
pub type CMatrix = DMatrix<Complex<f64>>;

/// Which matrix to draw and how to seed it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EnsembleSpec {
    pub family: Ensemble,
    /// `N`: the side for U, O, AI, AIII, BDI; half the side for S, AII, CII.
    pub n: usize,
    /// Chiral signature with `a + b = N`; zero otherwise.
    pub a: usize,
    pub b: usize,
    pub seed: u64,
    pub stream: u64,
}

impl EnsembleSpec {
    /// A non-chiral ensemble at size `N`.
    pub fn new(family: Ensemble, n: usize) -> Result<Self> {
        if family.chiral() {
            return Err(Error::InvalidSpec(format!("{family} needs a signature (a, b)")));
        }
        if n == 0 {
            return Err(Error::InvalidSpec("N must be at least 1".into()));
        }
        Ok(Self { family, n, a: 0, b: 0, seed: 0, stream: 0 })
    }

    /// A chiral ensemble with `N = a + b`.
    pub fn chiral(family: Ensemble, a: usize, b: usize) -> Result<Self> {
        if !family.chiral() {
            return Err(Error::InvalidSpec(format!("{family} takes no signature")));
        }
        if a + b == 0 {
            return Err(Error::InvalidSpec("a + b must be at least 1".into()));
        }
        Ok(Self { family, n: a + b, a, b, seed: 0, stream: 0 })
    }

    pub fn with_seed(mut self, seed: u64, stream: u64) -> Self {
        self.seed = seed;
        self.stream = stream;
        self
    }

    /// Side of the stochastic matrix.
    pub fn side(&self) -> usize {
        self.n * self.family.side_factor() as usize
    }

    /// `α = (a − b)/N`.
    pub fn alpha(&self) -> f64 {
        if self.family.chiral() {
            (self.a as f64 - self.b as f64) / self.n as f64
        } else {
            0.0
        }
    }

    /// Generator for sample `index`.
    pub fn rng(&self, index: u64) -> ChaCha8Rng {
        sample_rng(self.seed, self.stream, index)
    }
}

/// Independent generator per `(seed, stream, index)`; each sample owns a
/// window of 2⁴⁰ words of the stream.
pub fn sample_rng(seed: u64, stream: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng.set_word_pos((index as u128) << 40);
    rng
}

fn gaussian<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    rng.sample(StandardNormal)
}

fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R) -> Complex<f64> {
    Complex::new(gaussian(rng), gaussian(rng)) * std::f64::consts::FRAC_1_SQRT_2
}

/// Haar orthogonal matrix: QR of a Gaussian matrix with the signs of `R`'s
/// diagonal moved into `Q`.
pub fn haar_orthogonal<R: Rng + ?Sized>(n: usize, rng: &mut R) -> RMatrix {
    let z = RMatrix::from_fn(n, n, |_, _| gaussian(rng));
    let qr = z.qr();
    let (mut q, r) = (qr.q(), qr.r());
    for j in 0..n {
        if r[(j, j)] < 0.0 {
            q.column_mut(j).neg_mut();
        }
    }
    q
}

/// Haar unitary matrix: QR of a complex Gaussian matrix with the phases of
/// `R`'s diagonal moved into `Q`.
pub fn haar_unitary<R: Rng + ?Sized>(n: usize, rng: &mut R) -> CMatrix {
    let z = CMatrix::from_fn(n, n, |_, _| complex_gaussian(rng));
    let qr = z.qr();
    let (mut q, r) = (qr.q(), qr.r());
    for j in 0..n {
        let d = r[(j, j)];
        let norm = d.norm();
        if norm > 0.0 {
            let phase = d / norm;
            for i in 0..n {
                q[(i, j)] *= phase;
            }
        }
    }
    q
}

/// `J = [[0, I], [−I, 0]]` of size `2N`.
pub fn symplectic_form(n: usize) -> RMatrix {
    let mut j = RMatrix::zeros(2 * n, 2 * n);
    for i in 0..n {
        j[(i, i + n)] = 1.0;
        j[(i + n, i)] = -1.0;
    }
    j
}

/// Haar element of `Sp(2N) = {S unitary : S J Sᵀ = J}` by quaternionic
/// Gram–Schmidt: column `j + N` is always `−J conj(s_j)`, and each new
/// Gaussian column is orthogonalized against all earlier pairs.
pub fn haar_symplectic<R: Rng + ?Sized>(n: usize, rng: &mut R) -> CMatrix {
    let k = 2 * n;
    let mut s = CMatrix::zeros(k, k);
    let partner = |v: &[Complex<f64>]| -> Vec<Complex<f64>> {
        // −J conj(v): rows i < N take −conj(v_{i+N}); rows i ≥ N take conj(v_{i−N})
        (0..k).map(|i| if i < n { -v[i + n].conj() } else { v[i - n].conj() }).collect()
    };
    for j in 0..n {
        loop {
            let mut v: Vec<Complex<f64>> = (0..k).map(|_| complex_gaussian(rng)).collect();
            // two passes of modified Gram–Schmidt for numerical orthogonality
            for _ in 0..2 {
                for c in (0..j).chain(n..n + j) {
                    let col = s.column(c);
                    let dot: Complex<f64> = col.iter().zip(&v).map(|(a, b)| a.conj() * b).sum();
                    for (x, a) in v.iter_mut().zip(col.iter()) {
                        *x -= dot * a;
                    }
                }
            }
            let norm = v.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
            if norm < 1e-8 {
                continue;
            }
            for x in v.iter_mut() {
                *x /= norm;
            }
            let w = partner(&v);
            for i in 0..k {
                s[(i, j)] = v[i];
                s[(i, j + n)] = w[i];
            }
            break;
        }
    }
    s
}

/// `diag(1^a, (−1)^b)`.
pub fn chiral_signature(a: usize, b: usize) -> Vec<f64> {
    (0..a + b).map(|i| if i < a { 1.0 } else { -1.0 }).collect()
}

/// The unitary matrix an ensemble member is built from.
#[derive(Clone, Debug, PartialEq)]
pub enum SourceMatrix {
    Real(RMatrix),
    Complex(CMatrix),
}

impl SourceMatrix {
    pub fn side(&self) -> usize {
        match self {
            SourceMatrix::Real(m) => m.nrows(),
            SourceMatrix::Complex(m) => m.nrows(),
        }
    }

    pub fn to_complex(&self) -> CMatrix {
        match self {
            SourceMatrix::Real(m) => m.map(|x| Complex::new(x, 0.0)),
            SourceMatrix::Complex(m) => m.clone(),
        }
    }

    /// `‖U U† − I‖_max`.
    pub fn unitarity_residual(&self) -> f64 {
        let u = self.to_complex();
        let prod = &u * u.adjoint();
        max_abs_diff(&prod, &CMatrix::identity(u.nrows(), u.ncols()))
    }
}

fn max_abs_diff(a: &CMatrix, b: &CMatrix) -> f64 {
    a.iter().zip(b.iter()).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

fn scale_columns(v: &CMatrix, d: &[f64]) -> CMatrix {
    let mut out = v.clone();
    for (j, &s) in d.iter().enumerate() {
        for i in 0..out.nrows() {
            out[(i, j)] *= s;
        }
    }
    out
}

/// Draws the underlying unitary matrix of the ensemble.
pub fn source_sample<R: Rng + ?Sized>(spec: &EnsembleSpec, rng: &mut R) -> SourceMatrix {
    let n = spec.n;
    match spec.family {
        Ensemble::O => SourceMatrix::Real(haar_orthogonal(n, rng)),
        Ensemble::U => SourceMatrix::Complex(haar_unitary(n, rng)),
        Ensemble::S => SourceMatrix::Complex(haar_symplectic(n, rng)),
        // V Vᵀ
        Ensemble::AI => {
            let v = haar_unitary(n, rng);
            SourceMatrix::Complex(&v * v.transpose())
        }
        // V J Vᵀ, V ∈ U(2N)
        Ensemble::AII => {
            let v = haar_unitary(2 * n, rng);
            let j = symplectic_form(n).map(|x| Complex::new(x, 0.0));
            SourceMatrix::Complex(&v * j * v.transpose())
        }
        // V J̃ V†
        Ensemble::AIII => {
            let v = haar_unitary(n, rng);
            let vj = scale_columns(&v, &chiral_signature(spec.a, spec.b));
            SourceMatrix::Complex(vj * v.adjoint())
        }
        // V J̃ Vᵀ, V ∈ O(N)
        Ensemble::BDI => {
            let v = haar_orthogonal(n, rng);
            let mut vj = v.clone();
            for (j, s) in chiral_signature(spec.a, spec.b).into_iter().enumerate() {
                vj.column_mut(j).scale_mut(s);
            }
            SourceMatrix::Real(vj * v.transpose())
        }
        // V K̃ V^D with V^D = J Vᵀ Jᵀ, V ∈ Sp(2N)
        Ensemble::CII => {
            let v = haar_symplectic(n, rng);
            let mut k = chiral_signature(spec.a, spec.b);
            k.extend(chiral_signature(spec.a, spec.b));
            let j = symplectic_form(n).map(|x| Complex::new(x, 0.0));
            let vd = &j * v.transpose() * j.transpose();
            SourceMatrix::Complex(scale_columns(&v, &k) * vd)
        }
    }
}

/// `M_ij = |U_ij|²`.
pub fn to_stochastic(u: &SourceMatrix) -> RMatrix {
    match u {
        SourceMatrix::Real(m) => m.map(|x| x * x),
        SourceMatrix::Complex(m) => m.map(|x| x.norm_sqr()),
    }
}

/// Largest unitarity residual accepted by [`to_stochastic_checked`].
pub const UNITARITY_TOLERANCE: f64 = 1e-10;

#[derive(Clone, Debug, PartialEq)]
pub struct StochasticMatrix {
    pub entries: RMatrix,
    pub source_unitarity_residual: f64,
}

/// [`to_stochastic`] with the unitarity precondition enforced.
pub fn to_stochastic_checked(u: &SourceMatrix) -> Result<StochasticMatrix> {
    let source_unitarity_residual = u.unitarity_residual();
    if !(source_unitarity_residual <= UNITARITY_TOLERANCE) {
        return Err(Error::NotUnitary(source_unitarity_residual));
    }
    Ok(StochasticMatrix { entries: to_stochastic(u), source_unitarity_residual })
}

/// One ensemble member together with its source.
#[derive(Clone, Debug, PartialEq)]
pub struct Sample {
    pub source: SourceMatrix,
    pub stochastic: StochasticMatrix,
}

/// Draws sample `index` of the ensemble.
pub fn sample(spec: &EnsembleSpec, index: u64) -> Sample {
    let mut rng = spec.rng(index);
    let source = source_sample(spec, &mut rng);
    let entries = to_stochastic(&source);
    let source_unitarity_residual = source.unitarity_residual();
    Sample { source, stochastic: StochasticMatrix { entries, source_unitarity_residual } }
}

/// Draws only the stochastic matrix of sample `index`.
pub fn stochastic_sample(spec: &EnsembleSpec, index: u64) -> RMatrix {
    let mut rng = spec.rng(index);
    to_stochastic(&source_sample(spec, &mut rng))
}

/// Round-off measures of the defining structure of a sample.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StructureReport {
    /// Largest deviation of a row or column sum from 1.
    pub bistochastic_residual: f64,
    pub min_entry: f64,
    pub max_entry: f64,
    /// `‖M − Mᵀ‖_max`.
    pub symmetry_residual: f64,
    pub unitarity_residual: f64,
    /// `‖S J Sᵀ − J‖_max` for Sp(2N) sources.
    pub symplectic_residual: Option<f64>,
    /// `‖U + Uᵀ‖_max` for AII sources.
    pub antisymmetry_residual: Option<f64>,
}

pub fn structure_report(spec: &EnsembleSpec, s: &Sample) -> StructureReport {
    let m = &s.stochastic.entries;
    let k = m.nrows();
    let mut bistochastic_residual: f64 = 0.0;
    for i in 0..k {
        bistochastic_residual = bistochastic_residual.max((m.row(i).sum() - 1.0).abs());
        bistochastic_residual = bistochastic_residual.max((m.column(i).sum() - 1.0).abs());
    }
    let symmetry_residual = m.iter().zip(m.transpose().iter()).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    let symplectic_residual = (spec.family == Ensemble::S).then(|| {
        let u = s.source.to_complex();
        let j = symplectic_form(spec.n).map(|x| Complex::new(x, 0.0));
        max_abs_diff(&(&u * &j * u.transpose()), &j)
    });
    let antisymmetry_residual = (spec.family == Ensemble::AII).then(|| {
        let u = s.source.to_complex();
        (&u + u.transpose()).iter().map(|x| x.norm()).fold(0.0, f64::max)
    });
    StructureReport {
        bistochastic_residual,
        min_entry: m.min(),
        max_entry: m.max(),
        symmetry_residual,
        unitarity_residual: s.stochastic.source_unitarity_residual,
        symplectic_residual,
        antisymmetry_residual,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn specs() -> Vec<EnsembleSpec> {
        vec![
            EnsembleSpec::new(Ensemble::O, 7).unwrap(),
            EnsembleSpec::new(Ensemble::U, 7).unwrap(),
            EnsembleSpec::new(Ensemble::S, 4).unwrap(),
            EnsembleSpec::new(Ensemble::AI, 7).unwrap(),
            EnsembleSpec::new(Ensemble::AII, 4).unwrap(),
            EnsembleSpec::chiral(Ensemble::AIII, 4, 3).unwrap(),
            EnsembleSpec::chiral(Ensemble::BDI, 2, 5).unwrap(),
            EnsembleSpec::chiral(Ensemble::CII, 3, 1).unwrap(),
        ]
    }

    #[test]
    fn structure_of_every_family() {
        for spec in specs() {
            for i in 0..5 {
                let s = sample(&spec, i);
                assert_eq!(s.stochastic.entries.nrows(), spec.side());
                let r = structure_report(&spec, &s);
                assert!(r.bistochastic_residual < 1e-10, "{:?} {r:?}", spec.family);
                assert!(r.min_entry >= 0.0 && r.max_entry <= 1.0 + 1e-12);
                assert!(r.unitarity_residual < 1e-10, "{:?} {r:?}", spec.family);
                if spec.family.symmetric() {
                    assert!(r.symmetry_residual < 1e-12, "{:?} {r:?}", spec.family);
                }
                if let Some(x) = r.symplectic_residual {
                    assert!(x < 1e-8);
                }
                if let Some(x) = r.antisymmetry_residual {
                    assert!(x < 1e-12);
                }
            }
        }
    }

    #[test]
    fn sampling_is_reproducible_and_streams_differ() {
        let spec = EnsembleSpec::new(Ensemble::U, 5).unwrap().with_seed(11, 0);
        assert_eq!(stochastic_sample(&spec, 3), stochastic_sample(&spec, 3));
        assert_ne!(stochastic_sample(&spec, 3), stochastic_sample(&spec, 4));
        let other = spec.clone().with_seed(11, 1);
        assert_ne!(stochastic_sample(&spec, 3), stochastic_sample(&other, 3));
    }

    #[test]
    fn degenerate_chiral_is_identity() {
        let spec = EnsembleSpec::chiral(Ensemble::AIII, 0, 4).unwrap();
        let m = stochastic_sample(&spec, 0);
        assert!((m - RMatrix::identity(4, 4)).abs().max() < 1e-12);
    }

    #[test]
    fn rejects_bad_specs() {
        assert!(EnsembleSpec::new(Ensemble::AIII, 4).is_err());
        assert!(EnsembleSpec::chiral(Ensemble::U, 2, 2).is_err());
        assert!(EnsembleSpec::new(Ensemble::U, 0).is_err());
        assert!(EnsembleSpec::chiral(Ensemble::BDI, 0, 0).is_err());
    }

    #[test]
    fn orthogonal_entry_second_moment() {
        // E[O_11²] = 1/N
        let spec = EnsembleSpec::new(Ensemble::O, 6).unwrap();
        let k = 4000;
        let mean: f64 = (0..k).map(|i| sample(&spec, i).stochastic.entries[(0, 0)]).sum::<f64>() / k as f64;
        assert!((mean - 1.0 / 6.0).abs() < 0.02, "{mean}");
    }
}
