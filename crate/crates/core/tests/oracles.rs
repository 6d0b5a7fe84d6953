//! Cross-checks between independent computation paths.

use num_traits::{Signed, Zero};
use proptest::prelude::*;
use stochmat_core::enumerate::{enumerate_table, golden_tables, table_checksums, TableFamily, DEFAULT_BUDGET};
use stochmat_core::moments::{
    catalan, direct_contraction, exact_moment, laurent_coefficients, reconstruct_moment, Ensemble, MomentSpec,
    Params, Quantity, Variant,
};
use stochmat_core::symmfunc::{rational, ExactRational};

#[test]
fn golden_tables_reproduced_with_checksums() {
    for (family, n, rows) in golden_tables() {
        let t = enumerate_table(family, n, DEFAULT_BUDGET).unwrap();
        assert_eq!(t.matrix(), rows, "{family}_{n}");
        table_checksums(&t).unwrap();
    }
}

#[test]
fn larger_tables_pass_checksums() {
    for (family, n) in [(TableFamily::GU, 3), (TableFamily::GO, 2), (TableFamily::FO, 5), (TableFamily::FAI, 5)] {
        let t = enumerate_table(family, n, DEFAULT_BUDGET).unwrap();
        table_checksums(&t).unwrap();
    }
}

fn params_for(e: Ensemble, n: u64) -> Vec<Params> {
    if e.chiral() {
        (0..=n).map(|a| Params::Signature { a, b: n - a }).collect()
    } else {
        vec![Params::n(n as i64)]
    }
}

#[test]
fn table_path_equals_direct_contraction() {
    let ensembles = [Ensemble::U, Ensemble::O, Ensemble::AI, Ensemble::AII, Ensemble::AIII, Ensemble::BDI];
    for e in ensembles {
        for n in 1..=4u64 {
            for p in params_for(e, n) {
                for k in 1..=2 {
                    let q = Quantity::Trace(k);
                    let spec = MomentSpec::new(e, q, Variant::Full, p.clone()).unwrap();
                    let table = exact_moment(&spec).unwrap();
                    let direct = direct_contraction(e, q, &p, DEFAULT_BUDGET).unwrap();
                    assert_eq!(table, direct, "{e} {q} {p}");
                }
            }
        }
    }
}

#[test]
fn singular_table_path_equals_direct_contraction() {
    for e in [Ensemble::U, Ensemble::O, Ensemble::AI, Ensemble::AIII] {
        for n in 1..=3u64 {
            for p in params_for(e, n) {
                let q = Quantity::Singular(1);
                let spec = MomentSpec::new(e, q, Variant::Full, p.clone()).unwrap();
                let table = exact_moment(&spec).unwrap();
                assert_eq!(table, direct_contraction(e, q, &p, DEFAULT_BUDGET).unwrap(), "{e} {q} {p}");
            }
        }
    }
}

#[test]
fn catalan_signatures() {
    for n in 1..=3 {
        let f = reconstruct_moment(Ensemble::U, Quantity::Singular(n), Variant::Reduced, None, DEFAULT_BUDGET).unwrap();
        let t = laurent_coefficients(&f, n, 2 * n);
        assert!(t[..2 * n - 1].iter().all(Zero::is_zero), "U n={n}: {t:?}");
        assert_eq!(t[2 * n - 1], rational(catalan(n) as i64));
    }
    for n in 1..=2 {
        let f = reconstruct_moment(Ensemble::O, Quantity::Singular(n), Variant::Reduced, None, DEFAULT_BUDGET).unwrap();
        let t = laurent_coefficients(&f, n, 2 * n);
        assert_eq!(t[2 * n - 1], rational((1i64 << n) * catalan(n) as i64));
        let f = reconstruct_moment(Ensemble::AI, Quantity::Trace(2 * n), Variant::Reduced, None, DEFAULT_BUDGET).unwrap();
        let t = laurent_coefficients(&f, n, 2 * n);
        assert_eq!(t[2 * n - 1], rational(catalan(n) as i64));
    }
}

#[test]
fn chiral_unitary_moments_grow_like_alpha_power() {
    // reduced m_n / N approaches α^{2n}; the gap shrinks as N doubles
    let alpha = ExactRational::new(1.into(), 2.into());
    for k in 1..=2usize {
        let target = (0..2 * k).fold(rational(1), |acc, _| acc * &alpha);
        let gaps: Vec<ExactRational> = [40u64, 80, 160]
            .iter()
            .map(|&n| {
                let (a, b) = (3 * n / 4, n / 4);
                let spec = MomentSpec::new(Ensemble::AIII, Quantity::Trace(k), Variant::Reduced, Params::Signature { a, b });
                let m = exact_moment(&spec.unwrap()).unwrap() / rational(n as i64);
                (m - &target).abs()
            })
            .collect();
        assert!(gaps[1] < gaps[0] && gaps[2] < gaps[1], "{gaps:?}");
        assert!(gaps[2] < ExactRational::new(1.into(), 50.into()));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn reduced_is_full_minus_one(e in 0usize..6, k in 1usize..4, n in 1u64..7, a in 0u64..7) {
        let e = [Ensemble::U, Ensemble::O, Ensemble::AI, Ensemble::AII, Ensemble::AIII, Ensemble::BDI][e];
        let p = if e.chiral() { Params::Signature { a: a.min(n), b: n - a.min(n) } } else { Params::n(n as i64) };
        let full = exact_moment(&MomentSpec::new(e, Quantity::Trace(k), Variant::Full, p.clone()).unwrap()).unwrap();
        let red = exact_moment(&MomentSpec::new(e, Quantity::Trace(k), Variant::Reduced, p).unwrap()).unwrap();
        prop_assert_eq!(full - red, rational(1));
    }
}
