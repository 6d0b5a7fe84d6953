//! Reduced spectra of sampled stochastic matrices and their empirical
//! statistics: moments with jackknife errors, macroscopic law fits and
//! histograms.

use std::collections::BTreeMap;

use nalgebra::Complex;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use stochmat_core::moments::Ensemble;

use crate::error::{Error, Result};
use crate::sampler::{stochastic_sample, EnsembleSpec, RMatrix};

/// Perron–Frobenius residual above which a sample is flagged.
pub const PF_FLAG_THRESHOLD: f64 = 1e-6;
/// Relative threshold on `|Im λ|` for counting an eigenvalue as real.
pub const REAL_AXIS_THRESHOLD: f64 = 1e-8;

/// The spectrum of one sample with the Perron–Frobenius eigenvalue removed.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpectrumSample {
    pub family: Ensemble,
    pub n: usize,
    pub a: usize,
    pub b: usize,
    pub seed: u64,
    pub stream: u64,
    pub index: u64,
    /// Reduced eigenvalues; imaginary parts are zero for symmetric families.
    #[serde(with = "complex_pairs")]
    pub eigenvalues: Vec<Complex<f64>>,
    /// Reduced singular values.
    pub singular_values: Vec<f64>,
    pub pf_removed: bool,
    /// `|λ_PF − 1|`.
    pub pf_residual: f64,
    /// More than one eigenvalue lies within the flag threshold of 1.
    pub pf_degenerate: bool,
    /// `pf_residual` exceeds [`PF_FLAG_THRESHOLD`].
    pub flagged: bool,
}

mod complex_pairs {
    use nalgebra::Complex;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(v: &[Complex<f64>], s: S) -> Result<S::Ok, S::Error> {
        v.iter().map(|z| [z.re, z.im]).collect::<Vec<_>>().serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Complex<f64>>, D::Error> {
        Ok(Vec::<[f64; 2]>::deserialize(d)?.into_iter().map(|[re, im]| Complex::new(re, im)).collect())
    }
}

/// Reduced eigenvalues of `m` with the removed eigenvalue's residual.
#[derive(Clone, Debug, PartialEq)]
pub struct ReducedSpectrum {
    pub eigenvalues: Vec<Complex<f64>>,
    pub pf_residual: f64,
    pub pf_degenerate: bool,
}

fn remove_closest_to_one<T: Copy>(values: &mut Vec<T>, dist: impl Fn(T) -> f64) -> (f64, bool) {
    if values.is_empty() {
        return (f64::NAN, false);
    }
    let (idx, best) = values
        .iter()
        .enumerate()
        .map(|(i, &v)| (i, dist(v)))
        .min_by(|x, y| x.1.total_cmp(&y.1))
        .expect("non-empty");
    let near = values.iter().filter(|&&v| dist(v) <= PF_FLAG_THRESHOLD).count();
    values.remove(idx);
    (best, near > 1)
}

fn symmetry_residual(m: &RMatrix) -> f64 {
    let t = m.transpose();
    m.iter().zip(t.iter()).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max)
}

/// Eigenvalues of `m` except the one closest to 1. With `symmetric` the
/// symmetric solver is used, after checking that `m` is symmetric.
pub fn reduced_spectrum(m: &RMatrix, symmetric: bool) -> Result<ReducedSpectrum> {
    if !m.is_square() {
        return Err(Error::Solver(format!("matrix is {}×{}", m.nrows(), m.ncols())));
    }
    if !m.iter().all(|x| x.is_finite()) {
        return Err(Error::Solver("non-finite entries".into()));
    }
    let mut eigenvalues: Vec<Complex<f64>> = if symmetric {
        let r = symmetry_residual(m);
        if r > 1e-10 {
            return Err(Error::Solver(format!("symmetric solver on a matrix with asymmetry {r:e}")));
        }
        m.clone().symmetric_eigenvalues().iter().map(|&x| Complex::new(x, 0.0)).collect()
    } else {
        m.complex_eigenvalues().iter().copied().collect()
    };
    let (pf_residual, pf_degenerate) = remove_closest_to_one(&mut eigenvalues, |z| (z - 1.0).norm());
    Ok(ReducedSpectrum { eigenvalues, pf_residual, pf_degenerate })
}

/// Singular values of `m` except the one closest to 1.
pub fn reduced_singulars(m: &RMatrix) -> Result<Vec<f64>> {
    if !m.iter().all(|x| x.is_finite()) {
        return Err(Error::Solver("non-finite entries".into()));
    }
    let mut s: Vec<f64> = m.singular_values().iter().copied().collect();
    remove_closest_to_one(&mut s, |x| (x - 1.0).abs());
    Ok(s)
}

/// Reduced spectrum and singular values of sample `index`.
pub fn analyze(spec: &EnsembleSpec, index: u64, m: &RMatrix) -> Result<SpectrumSample> {
    let r = reduced_spectrum(m, spec.family.symmetric())?;
    let singular_values = reduced_singulars(m)?;
    Ok(SpectrumSample {
        family: spec.family,
        n: spec.n,
        a: spec.a,
        b: spec.b,
        seed: spec.seed,
        stream: spec.stream,
        index,
        pf_removed: !m.is_empty(),
        flagged: r.pf_residual > PF_FLAG_THRESHOLD,
        eigenvalues: r.eigenvalues,
        singular_values,
        pf_residual: r.pf_residual,
        pf_degenerate: r.pf_degenerate,
    })
}

/// Draws and analyzes samples `start..start + count` in parallel.
pub fn sample_spectra(spec: &EnsembleSpec, start: u64, count: u64) -> Result<Vec<SpectrumSample>> {
    (start..start + count).into_par_iter().map(|i| analyze(spec, i, &stochastic_sample(spec, i))).collect()
}

/// `tr Mᵏ` for `k = 1..=max`.
pub fn power_traces(m: &RMatrix, max: usize) -> Vec<f64> {
    let mut out = Vec::with_capacity(max);
    let mut p = m.clone();
    for k in 1..=max {
        if k > 1 {
            p = &p * m;
        }
        out.push(p.trace());
    }
    out
}

/// `tr (MMᵀ)ᵏ` for `k = 1..=max`.
pub fn singular_power_traces(m: &RMatrix, max: usize) -> Vec<f64> {
    power_traces(&(m * m.transpose()), max)
}

/// `Σ Re λᵏ` over the reduced spectrum.
pub fn spectral_trace(eigenvalues: &[Complex<f64>], k: usize) -> f64 {
    eigenvalues.iter().map(|z| z.powu(k as u32).re).sum()
}

/// `Σ s²ᵏ` over the reduced singular values.
pub fn singular_trace(singulars: &[f64], k: usize) -> f64 {
    singulars.iter().map(|s| s.powi(2 * k as i32)).sum()
}

/// Which empirical moment to form.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MomentKind {
    /// `tr Mⁿ` over the reduced spectrum.
    Trace,
    /// `tr (MMᵀ)ⁿ` over the reduced singular values.
    Singular,
}

/// A mean with its standard error.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Estimate {
    pub mean: f64,
    pub se: f64,
}

impl Estimate {
    /// Distance from `target` in units of the standard error.
    pub fn z(&self, target: f64) -> f64 {
        if self.se > 0.0 {
            (self.mean - target).abs() / self.se
        } else if self.mean == target {
            0.0
        } else {
            f64::INFINITY
        }
    }
}

/// Delete-one jackknife over samples. Each sample contributes a vector of
/// additive aggregates; `f` maps the aggregate totals to the statistic.
pub fn jackknife(aggregates: &[Vec<f64>], f: impl Fn(&[f64]) -> f64) -> Result<Estimate> {
    let k = aggregates.len();
    if k < 2 {
        return Err(Error::InsufficientData(format!("jackknife needs at least 2 samples, got {k}")));
    }
    let width = aggregates[0].len();
    let mut total = vec![0.0; width];
    for a in aggregates {
        for (t, x) in total.iter_mut().zip(a) {
            *t += x;
        }
    }
    let mut loo = vec![0.0; width];
    let thetas: Vec<f64> = aggregates
        .iter()
        .map(|a| {
            for ((l, t), x) in loo.iter_mut().zip(&total).zip(a) {
                *l = t - x;
            }
            f(&loo)
        })
        .collect();
    let mean_theta = thetas.iter().sum::<f64>() / k as f64;
    let var = thetas.iter().map(|t| (t - mean_theta).powi(2)).sum::<f64>() * (k - 1) as f64 / k as f64;
    Ok(Estimate { mean: f(&total), se: var.sqrt() })
}

/// Mean over samples of the reduced `n`-th moment, with jackknife error.
pub fn empirical_moment(samples: &[SpectrumSample], n: usize, kind: MomentKind) -> Result<Estimate> {
    let agg: Vec<Vec<f64>> = samples
        .iter()
        .map(|s| {
            let v = match kind {
                MomentKind::Trace => spectral_trace(&s.eigenvalues, n),
                MomentKind::Singular => singular_trace(&s.singular_values, n),
            };
            vec![1.0, v]
        })
        .collect();
    jackknife(&agg, |t| t[1] / t[0])
}

/// Catalan number `C_k` as a float.
pub fn catalan(k: usize) -> f64 {
    (0..k).fold(1.0, |c, i| c * 2.0 * (2 * i + 1) as f64 / (i + 2) as f64)
}

/// `C_k X²ᵏ / 4ᵏ`, the `2k`-th moment of the semicircle and quarter-circle
/// laws of radius `X`.
pub fn circle_moment(k: usize, radius: f64) -> f64 {
    catalan(k) * (radius * radius / 4.0).powi(k as i32)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Law {
    GinibreDisc,
    Semicircle,
    QuarterCircle,
}

/// Empirical `2k`-th moment against the law's prediction.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MomentCheck {
    pub order: usize,
    pub observed: Estimate,
    /// Prediction at the reference radius.
    pub reference: f64,
    pub z_reference: f64,
    /// Observed minus the prediction at the fitted radius, with its jackknife error.
    pub fitted_gap: Estimate,
    pub z_fitted: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LawFit {
    pub law: Law,
    pub radius: f64,
    pub reference_radius: f64,
    /// `|radius / reference − 1|`.
    pub relative_radius_error: f64,
    /// Centre of the semicircle; zero for the other laws.
    pub center: f64,
    pub moments: Vec<MomentCheck>,
    pub real_axis_count_mean: Option<f64>,
}

const FIT_ORDERS: usize = 3;

/// Pooled power sums `[count, Σx, …, Σx^{2·FIT_ORDERS}]` per sample.
fn power_sums(values: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; 2 * FIT_ORDERS + 1];
    for &x in values {
        let mut p = 1.0;
        for o in out.iter_mut() {
            *o += p;
            p *= x;
        }
    }
    out
}

fn binomial(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |c, i| c * (n - i) as f64 / (i + 1) as f64)
}

/// Pooled mean and central moment of order `p` from power sums.
fn central(t: &[f64], p: usize) -> f64 {
    let mu = t[1] / t[0];
    (0..=p).map(|j| binomial(p, j) * t[j] / t[0] * (-mu).powi((p - j) as i32)).sum()
}

fn fit_circle(law: Law, per_sample: Vec<Vec<f64>>, reference_radius: f64, centered: bool) -> Result<LawFit> {
    let total: usize = per_sample.iter().map(|v| v.len()).sum();
    if total < 2 {
        return Err(Error::InsufficientData("no reduced values to fit".into()));
    }
    let agg: Vec<Vec<f64>> = per_sample.iter().map(|v| power_sums(v)).collect();
    let moment = move |t: &[f64], p: usize| if centered { central(t, p) } else { t[p] / t[0] };
    let radius_of = |t: &[f64]| (4.0 * moment(t, 2)).sqrt();
    let grand = jackknife(&agg, |t| t[1] / t[0])?;
    let radius = jackknife(&agg, radius_of)?.mean;
    let moments = (1..=FIT_ORDERS)
        .map(|k| {
            let observed = jackknife(&agg, |t| moment(t, 2 * k))?;
            let reference = circle_moment(k, reference_radius);
            let fitted_gap = jackknife(&agg, |t| moment(t, 2 * k) - circle_moment(k, radius_of(t)))?;
            Ok(MomentCheck {
                order: 2 * k,
                observed,
                reference,
                z_reference: observed.z(reference),
                z_fitted: if k == 1 { 0.0 } else { fitted_gap.z(0.0) },
                fitted_gap,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(LawFit {
        law,
        radius,
        reference_radius,
        relative_radius_error: (radius / reference_radius - 1.0).abs(),
        center: if centered { grand.mean } else { 0.0 },
        moments,
        real_axis_count_mean: None,
    })
}

/// Semicircle fit of the real reduced eigenvalues: centre at the pooled
/// mean, `X² = 4·⟨(x − c)²⟩`, central moments against `C_k X²ᵏ/4ᵏ`.
pub fn semicircle_fit(samples: &[SpectrumSample], reference_radius: f64) -> Result<LawFit> {
    let per_sample = samples.iter().map(|s| s.eigenvalues.iter().map(|z| z.re).collect()).collect();
    fit_circle(Law::Semicircle, per_sample, reference_radius, true)
}

/// Quarter-circle fit of the reduced singular values: `X² = 4·⟨s²⟩`, raw
/// even moments against `C_k X²ᵏ/4ᵏ`.
pub fn quarter_circle_fit(samples: &[SpectrumSample], reference_radius: f64) -> Result<LawFit> {
    let per_sample = samples.iter().map(|s| s.singular_values.clone()).collect();
    fit_circle(Law::QuarterCircle, per_sample, reference_radius, false)
}

/// Number of eigenvalues with `|Im λ| < 10⁻⁸ · max |λ|`.
pub fn real_axis_count(eigenvalues: &[Complex<f64>]) -> usize {
    let scale = eigenvalues.iter().map(|z| z.norm()).fold(0.0, f64::max);
    eigenvalues.iter().filter(|z| z.im.abs() < REAL_AXIS_THRESHOLD * scale).count()
}

fn quantile(sorted: &[f64], q: f64) -> f64 {
    let pos = q * (sorted.len() - 1) as f64;
    let (lo, hi) = (pos.floor() as usize, pos.ceil() as usize);
    sorted[lo] + (sorted[hi] - sorted[lo]) * (pos - lo as f64)
}

/// Uniform-disc fit: for a disc of radius `R` the 95th percentile of `|λ|`
/// is `R·√0.95`, which is insensitive to the few outliers beyond the edge.
pub fn disc_fit(samples: &[SpectrumSample], reference_radius: f64) -> Result<LawFit> {
    let mut moduli: Vec<f64> = samples.iter().flat_map(|s| s.eigenvalues.iter().map(|z| z.norm())).collect();
    if moduli.len() < 2 {
        return Err(Error::InsufficientData("no reduced eigenvalues to fit".into()));
    }
    moduli.sort_by(f64::total_cmp);
    let radius = quantile(&moduli, 0.95) / 0.95f64.sqrt();
    let counts: Vec<f64> = samples.iter().map(|s| real_axis_count(&s.eigenvalues) as f64).collect();
    Ok(LawFit {
        law: Law::GinibreDisc,
        radius,
        reference_radius,
        relative_radius_error: (radius / reference_radius - 1.0).abs(),
        center: 0.0,
        moments: Vec::new(),
        real_axis_count_mean: Some(counts.iter().sum::<f64>() / counts.len() as f64),
    })
}

/// Dispatches to the fit for `law`.
pub fn law_fit(samples: &[SpectrumSample], law: Law, reference_radius: f64) -> Result<LawFit> {
    match law {
        Law::GinibreDisc => disc_fit(samples, reference_radius),
        Law::Semicircle => semicircle_fit(samples, reference_radius),
        Law::QuarterCircle => quarter_circle_fit(samples, reference_radius),
    }
}

/// Radius of the limiting law for an ensemble at matrix side `side`, where one
/// is known: discs `√(2/N)`, `1/√N`, `1/√(2N)` for O, U, S; semicircle
/// `2/√side` for AI, AII; quarter circle `2√(2/N)`, `2/√N` for O, U.
pub fn reference_radius(family: Ensemble, law: Law, side: usize) -> Option<f64> {
    let s = side as f64;
    match (family, law) {
        (Ensemble::O, Law::GinibreDisc) => Some((2.0 / s).sqrt()),
        (Ensemble::U, Law::GinibreDisc) => Some(1.0 / s.sqrt()),
        (Ensemble::S, Law::GinibreDisc) => Some(1.0 / s.sqrt()),
        (Ensemble::AI | Ensemble::AII, Law::Semicircle) => Some(2.0 / s.sqrt()),
        (Ensemble::O, Law::QuarterCircle) => Some(2.0 * (2.0 / s).sqrt()),
        (Ensemble::U, Law::QuarterCircle) => Some(2.0 / s.sqrt()),
        _ => None,
    }
}

/// Binned density; masses `density · width` sum to 1.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Histogram {
    pub edges: Vec<f64>,
    pub density: Vec<f64>,
}

impl Histogram {
    /// Freedman–Diaconis bins (width `2·IQR·n^{−1/3}`) unless `bins` is given.
    pub fn new(values: &[f64], bins: Option<usize>) -> Result<Self> {
        let mut v: Vec<f64> = values.iter().copied().filter(|x| x.is_finite()).collect();
        if v.is_empty() {
            return Err(Error::InsufficientData("histogram of no values".into()));
        }
        v.sort_by(f64::total_cmp);
        let (lo, mut hi) = (v[0], v[v.len() - 1]);
        if hi <= lo {
            hi = lo + 1.0;
        }
        let bins = bins.unwrap_or_else(|| {
            let iqr = quantile(&v, 0.75) - quantile(&v, 0.25);
            let h = 2.0 * iqr / (v.len() as f64).cbrt();
            if h > 0.0 {
                (((hi - lo) / h).ceil() as usize).clamp(1, 10_000)
            } else {
                1
            }
        });
        let bins = bins.max(1);
        let width = (hi - lo) / bins as f64;
        let mut counts = vec![0usize; bins];
        for x in &v {
            let i = (((x - lo) / width) as usize).min(bins - 1);
            counts[i] += 1;
        }
        let edges = (0..=bins).map(|i| if i == bins { hi } else { lo + width * i as f64 }).collect();
        let total = v.len() as f64;
        let density = counts.iter().map(|&c| c as f64 / (total * width)).collect();
        Ok(Self { edges, density })
    }

    pub fn mass(&self) -> f64 {
        self.density.iter().zip(self.edges.windows(2)).map(|(d, e)| d * (e[1] - e[0])).sum()
    }

    /// CSV with columns `bin_left,bin_right,density`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("bin_left,bin_right,density\n");
        for (d, e) in self.density.iter().zip(self.edges.windows(2)) {
            out.push_str(&format!("{},{},{}\n", e[0], e[1], d));
        }
        out
    }
}

/// Aggregate statistics of a batch of samples.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpectralSummary {
    pub ensemble: EnsembleSpec,
    pub samples: usize,
    pub trace_moments: BTreeMap<usize, Estimate>,
    pub singular_moments: BTreeMap<usize, Estimate>,
    pub disc_radius_estimate: f64,
    pub real_axis_count_mean: f64,
    pub max_pf_residual: f64,
    pub flagged_samples: usize,
    /// Density of real eigenvalues for symmetric families, of singular values otherwise.
    pub histogram: Histogram,
}

/// Summary of `samples` with moments up to `max_order`.
pub fn summarize(
    spec: &EnsembleSpec,
    samples: &[SpectrumSample],
    max_order: usize,
    bins: Option<usize>,
) -> Result<SpectralSummary> {
    if samples.len() < 2 {
        return Err(Error::InsufficientData(format!("a summary needs at least 2 samples, got {}", samples.len())));
    }
    let moments = |kind| {
        (1..=max_order).map(|n| Ok((n, empirical_moment(samples, n, kind)?))).collect::<Result<BTreeMap<_, _>>>()
    };
    let values: Vec<f64> = if spec.family.symmetric() {
        samples.iter().flat_map(|s| s.eigenvalues.iter().map(|z| z.re)).collect()
    } else {
        samples.iter().flat_map(|s| s.singular_values.iter().copied()).collect()
    };
    let histogram = Histogram::new(&values, bins)?;
    let (disc_radius_estimate, real_axis_count_mean) = match disc_fit(samples, 1.0) {
        Ok(f) => (f.radius, f.real_axis_count_mean.unwrap_or(0.0)),
        Err(_) => (0.0, 0.0),
    };
    Ok(SpectralSummary {
        ensemble: spec.clone(),
        samples: samples.len(),
        trace_moments: moments(MomentKind::Trace)?,
        singular_moments: moments(MomentKind::Singular)?,
        disc_radius_estimate,
        real_axis_count_mean,
        max_pf_residual: samples.iter().map(|s| s.pf_residual).filter(|x| x.is_finite()).fold(0.0, f64::max),
        flagged_samples: samples.iter().filter(|s| s.flagged).count(),
        histogram,
    })
}
