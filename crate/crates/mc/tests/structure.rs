//! Algebraic structure of the sampled matrices.

use nalgebra::Complex;
use proptest::prelude::*;
use stochmat_core::moments::Ensemble;
use stochmat_mc::sampler::{
    haar_orthogonal, haar_symplectic, haar_unitary, sample, sample_rng, source_sample, structure_report,
    symplectic_form, to_stochastic, to_stochastic_checked, CMatrix, EnsembleSpec, RMatrix, SourceMatrix,
};

fn cmax(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

#[test]
fn one_by_one_unitary_has_unit_modulus() {
    let u = haar_unitary(1, &mut sample_rng(3, 0, 0));
    assert!((u[(0, 0)].norm() - 1.0).abs() < 1e-14);
}

#[test]
fn orthogonal_columns_are_unit_vectors() {
    let o = haar_orthogonal(50, &mut sample_rng(1, 0, 0));
    for j in 0..50 {
        assert!((o.column(j).norm() - 1.0).abs() < 1e-12);
    }
}

#[test]
fn symplectic_structure() {
    for n in [1, 3, 10, 25] {
        let s = haar_symplectic(n, &mut sample_rng(5, 0, n as u64));
        let j = symplectic_form(n).map(|x| Complex::new(x, 0.0));
        assert!(cmax(&(&s * &j * s.transpose() - &j)) < 1e-8);
        assert!(cmax(&(&s * s.adjoint() - CMatrix::identity(2 * n, 2 * n))) < 1e-10);
        // block form [[A, B], [−B̄, Ā]]
        for r in 0..n {
            for c in 0..n {
                assert!((s[(r + n, c + n)] - s[(r, c)].conj()).norm() < 1e-12);
                assert!((s[(r + n, c)] + s[(r, c + n)].conj()).norm() < 1e-12);
            }
        }
    }
}

#[test]
fn identity_and_rotation_map_to_expected_stochastic_matrices() {
    let id = SourceMatrix::Real(RMatrix::identity(4, 4));
    assert_eq!(to_stochastic(&id), RMatrix::identity(4, 4));
    let t: f64 = 0.4;
    let (c, s) = (t.cos(), t.sin());
    let rot = SourceMatrix::Real(RMatrix::from_row_slice(2, 2, &[c, -s, s, c]));
    let m = to_stochastic_checked(&rot).unwrap().entries;
    let want = RMatrix::from_row_slice(2, 2, &[c * c, s * s, s * s, c * c]);
    assert!((m - want).abs().max() < 1e-15);
    let bad = SourceMatrix::Real(RMatrix::from_row_slice(2, 2, &[1.0, 0.1, 0.0, 1.0]));
    assert!(to_stochastic_checked(&bad).is_err());
}

#[test]
fn unitary_rows_and_columns_sum_to_one() {
    let spec = EnsembleSpec::new(Ensemble::U, 8).unwrap();
    let m = sample(&spec, 0).stochastic.entries;
    for i in 0..8 {
        assert!((m.row(i).sum() - 1.0).abs() < 1e-12);
        assert!((m.column(i).sum() - 1.0).abs() < 1e-12);
    }
}

#[test]
fn circular_orthogonal_at_one_is_trivial() {
    let spec = EnsembleSpec::new(Ensemble::AI, 1).unwrap();
    let s = sample(&spec, 0);
    assert!((s.source.to_complex()[(0, 0)].norm() - 1.0).abs() < 1e-14);
    assert!((s.stochastic.entries[(0, 0)] - 1.0).abs() < 1e-14);
}

#[test]
fn chiral_sources_are_hermitian_involutions() {
    for (e, a, b) in [(Ensemble::AIII, 5, 3), (Ensemble::BDI, 4, 4), (Ensemble::CII, 3, 2)] {
        let spec = EnsembleSpec::chiral(e, a, b).unwrap();
        let u = source_sample(&spec, &mut spec.rng(0)).to_complex();
        let k = u.nrows();
        assert!(cmax(&(&u - u.adjoint())) < 1e-10, "{e}");
        assert!(cmax(&(&u * &u - CMatrix::identity(k, k))) < 1e-10, "{e}");
    }
}

#[test]
fn chiral_orthogonal_signature_multiplicities() {
    let spec = EnsembleSpec::chiral(Ensemble::BDI, 4, 4).unwrap();
    let SourceMatrix::Real(u) = source_sample(&spec, &mut spec.rng(0)) else { panic!("BDI source is real") };
    let ev = u.symmetric_eigenvalues();
    assert_eq!(ev.iter().filter(|x| (*x - 1.0).abs() < 1e-10).count(), 4);
    assert_eq!(ev.iter().filter(|x| (*x + 1.0).abs() < 1e-10).count(), 4);
}

#[test]
fn quaternionic_symmetric_space_is_self_dual() {
    let n = 4;
    let spec = EnsembleSpec::chiral(Ensemble::CII, 2, 2).unwrap();
    let s = sample(&spec, 1);
    let u = s.source.to_complex();
    let j = symplectic_form(n).map(|x| Complex::new(x, 0.0));
    assert!(cmax(&(&j * u.transpose() * j.transpose() - &u)) < 1e-10);
    // the diagonal blocks pair up: U_{j+N, i+N} = U_{ij}
    for i in 0..n {
        for k in 0..n {
            assert!((u[(k + n, i + n)] - u[(i, k)]).norm() < 1e-10);
        }
    }
    let m = &s.stochastic.entries;
    assert!((m - m.transpose()).abs().max() < 1e-12);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn circular_symplectic_source_is_antisymmetric(n in 1usize..12, seed in any::<u64>()) {
        let spec = EnsembleSpec::new(Ensemble::AII, n).unwrap().with_seed(seed, 0);
        let u = source_sample(&spec, &mut spec.rng(0)).to_complex();
        prop_assert!(cmax(&(&u + u.transpose())) < 1e-12);
    }

    #[test]
    fn every_family_is_bistochastic(f in 0usize..8, n in 1usize..10, a in 0usize..10, seed in any::<u64>()) {
        let family = Ensemble::ALL[f];
        let spec = if family.chiral() {
            let a = a.min(n);
            EnsembleSpec::chiral(family, a, n - a).unwrap()
        } else {
            EnsembleSpec::new(family, n).unwrap()
        }
        .with_seed(seed, 0);
        let s = sample(&spec, 0);
        let r = structure_report(&spec, &s);
        prop_assert!(r.bistochastic_residual < 1e-10);
        prop_assert!(r.min_entry >= 0.0 && r.max_entry <= 1.0 + 1e-12);
        if family.symmetric() {
            prop_assert!(r.symmetry_residual < 1e-12);
        }
        if let Some(x) = r.symplectic_residual {
            prop_assert!(x < 1e-8);
        }
    }

    #[test]
    fn same_seed_same_samples(seed in any::<u64>(), stream in 0u64..4, index in 0u64..1000) {
        let spec = EnsembleSpec::new(Ensemble::S, 3).unwrap().with_seed(seed, stream);
        prop_assert_eq!(sample(&spec, index), sample(&spec, index));
    }
}
