//! Statistical properties of the samplers and the spectral estimators.

use rayon::prelude::*;
use stochmat_core::moments::Ensemble;
use stochmat_core::weingarten::wg_u;
use stochmat_core::permcore::Partition;
use stochmat_core::symmfunc::rational;
use stochmat_mc::sampler::{stochastic_sample, EnsembleSpec, RMatrix};
use stochmat_mc::spectra::{
    empirical_moment, jackknife, power_traces, reduced_spectrum, sample_spectra, singular_power_traces,
    singular_trace, spectral_trace, summarize, MomentKind,
};

fn mean_and_se(xs: &[f64]) -> (f64, f64) {
    let k = xs.len() as f64;
    let m = xs.iter().sum::<f64>() / k;
    let v = xs.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (k - 1.0);
    (m, (v / k).sqrt())
}

#[test]
fn unitary_entry_mean_matches_weingarten() {
    // ∫ |U₁₁|² dU = Wg([1], N)
    let n = 8;
    let want = wg_u(&Partition::new(vec![1]).unwrap(), &rational(n as i64)).unwrap();
    let want = want.numer().to_string().parse::<f64>().unwrap() / want.denom().to_string().parse::<f64>().unwrap();
    assert_eq!(want, 1.0 / 8.0);
    let spec = EnsembleSpec::new(Ensemble::U, n).unwrap().with_seed(17, 0);
    let xs: Vec<f64> = (0..100_000u64).into_par_iter().map(|i| stochastic_sample(&spec, i)[(0, 0)]).collect();
    let (m, se) = mean_and_se(&xs);
    assert!((m - want).abs() < 5.0 * se, "{m} ± {se}");
}

#[test]
fn haar_invariance_under_permutations() {
    // entries of P·U·Q have the law of U: compare first and second moments of
    // |U_{ij}|² at two positions related by fixed permutations
    let n = 5;
    let spec = EnsembleSpec::new(Ensemble::U, n).unwrap().with_seed(23, 0);
    let p = [3usize, 0, 4, 1, 2];
    let q = [1usize, 4, 0, 2, 3];
    let pairs: Vec<(f64, f64)> = (0..10_000u64)
        .into_par_iter()
        .map(|i| {
            let m = stochastic_sample(&spec, i);
            (m[(0, 0)], m[(p[0], q[0])])
        })
        .collect();
    for power in [1, 2] {
        let diff: Vec<f64> = pairs.iter().map(|(x, y)| x.powi(power) - y.powi(power)).collect();
        let (m, se) = mean_and_se(&diff);
        assert!(m.abs() < 5.0 * se, "power {power}: {m} ± {se}");
    }
}

#[test]
fn spectral_and_matrix_power_moments_agree() {
    for spec in [
        EnsembleSpec::new(Ensemble::U, 30).unwrap(),
        EnsembleSpec::new(Ensemble::O, 30).unwrap(),
        EnsembleSpec::new(Ensemble::S, 15).unwrap(),
        EnsembleSpec::new(Ensemble::AI, 30).unwrap(),
        EnsembleSpec::chiral(Ensemble::AIII, 20, 10).unwrap(),
    ] {
        for s in sample_spectra(&spec, 0, 4).unwrap() {
            let m = stochastic_sample(&spec, s.index);
            let direct = power_traces(&m, 4);
            let sing = singular_power_traces(&m, 3);
            for k in 1..=4 {
                let a = spectral_trace(&s.eigenvalues, k);
                let b = direct[k - 1] - 1.0;
                assert!((a - b).abs() <= 1e-8 * b.abs().max(1.0), "{:?} k={k}: {a} vs {b}", spec.family);
            }
            for k in 1..=3 {
                let a = singular_trace(&s.singular_values, k);
                let b = sing[k - 1] - 1.0;
                assert!((a - b).abs() <= 1e-8 * b.abs().max(1.0), "{:?} k={k}: {a} vs {b}", spec.family);
            }
            assert!(s.pf_residual < 1e-8);
            assert_eq!(s.eigenvalues.len(), spec.side() - 1);
            assert_eq!(s.singular_values.len(), spec.side() - 1);
        }
    }
}

#[test]
fn full_spectrum_sums_to_trace() {
    let spec = EnsembleSpec::new(Ensemble::O, 40).unwrap();
    let m: RMatrix = stochastic_sample(&spec, 0);
    let sum: f64 = m.complex_eigenvalues().iter().map(|z| z.re).sum();
    assert!((sum - m.trace()).abs() < 1e-10);
}

#[test]
fn symmetric_families_have_real_spectra() {
    for spec in [EnsembleSpec::new(Ensemble::AII, 20).unwrap(), EnsembleSpec::chiral(Ensemble::BDI, 25, 15).unwrap()] {
        let m = stochastic_sample(&spec, 0);
        let general = reduced_spectrum(&m, false).unwrap();
        assert!(general.eigenvalues.iter().all(|z| z.im.abs() < 1e-10));
        let sym = reduced_spectrum(&m, true).unwrap();
        let mut a: Vec<f64> = general.eigenvalues.iter().map(|z| z.re).collect();
        let mut b: Vec<f64> = sym.eigenvalues.iter().map(|z| z.re).collect();
        a.sort_by(f64::total_cmp);
        b.sort_by(f64::total_cmp);
        assert!(a.iter().zip(&b).all(|(x, y)| (x - y).abs() < 1e-10));
    }
}

#[test]
fn single_unitary_sample_has_disc_radius_near_inverse_sqrt_n() {
    let spec = EnsembleSpec::new(Ensemble::U, 100).unwrap().with_seed(7, 0);
    let s = &sample_spectra(&spec, 0, 1).unwrap()[0];
    let r = s.eigenvalues.iter().map(|z| z.norm()).fold(0.0, f64::max);
    assert!((r / 0.1 - 1.0).abs() < 0.2, "{r}");
}

#[test]
fn singular_values_at_side_one_hundred() {
    let u = EnsembleSpec::new(Ensemble::U, 100).unwrap().with_seed(8, 0);
    let samples = sample_spectra(&u, 0, 20).unwrap();
    let mean_sq = empirical_moment(&samples, 1, MomentKind::Singular).unwrap();
    // reduced s₁ = (N − 1)/(N + 1), spread over N − 1 values
    let want = (99.0 / 101.0) / 99.0;
    assert!((mean_sq.mean / 99.0 / want - 1.0).abs() < 0.05, "{mean_sq:?}");

    let o = EnsembleSpec::new(Ensemble::O, 100).unwrap().with_seed(8, 0);
    let s = &sample_spectra(&o, 0, 1).unwrap()[0];
    let top = s.singular_values.iter().copied().fold(0.0, f64::max);
    assert!((top / (2.0 * 0.02f64.sqrt()) - 1.0).abs() < 0.2, "{top}");
}

#[test]
fn standard_error_shrinks_like_inverse_sqrt_samples() {
    let spec = EnsembleSpec::new(Ensemble::U, 8).unwrap().with_seed(31, 0);
    let all = sample_spectra(&spec, 0, 10_000).unwrap();
    let want = 1.0 / 9.0;
    let mut ses = Vec::new();
    for k in [100, 1000, 10_000] {
        let e = empirical_moment(&all[..k], 2, MomentKind::Trace).unwrap();
        assert!(e.z(want) < 5.0, "{k}: {e:?}");
        ses.push(e.se);
    }
    let slope = |a: f64, b: f64| (b / a).ln() / 10f64.ln();
    for w in ses.windows(2) {
        let s = slope(w[0], w[1]);
        assert!((s + 0.5).abs() < 0.15, "slope {s} from {ses:?}");
    }
}

#[test]
fn summary_is_finite_with_unit_mass() {
    let spec = EnsembleSpec::chiral(Ensemble::AIII, 30, 10).unwrap().with_seed(2, 1);
    let samples = sample_spectra(&spec, 0, 20).unwrap();
    let s = summarize(&spec, &samples, 3, None).unwrap();
    assert!((s.histogram.mass() - 1.0).abs() < 1e-12);
    assert!(s.trace_moments.values().chain(s.singular_moments.values()).all(|e| e.mean.is_finite() && e.se.is_finite()));
    assert_eq!(s.flagged_samples, 0);
}

#[test]
fn jackknife_ratio_statistic() {
    // ratio of sums: the jackknife estimate is the pooled ratio
    let agg = vec![vec![2.0, 1.0], vec![3.0, 2.0], vec![5.0, 2.0], vec![4.0, 3.0]];
    let e = jackknife(&agg, |t| t[1] / t[0]).unwrap();
    assert!((e.mean - 8.0 / 14.0).abs() < 1e-15);
    assert!(e.se > 0.0);
}
