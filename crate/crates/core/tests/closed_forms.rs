//! Reconstructed moments against their known closed forms.

use num_rational::BigRational;
use stochmat_core::enumerate::DEFAULT_BUDGET;
use stochmat_core::moments::{
    direct_contraction, exact_moment_symbolic, reconstruct_moment, Ensemble, Params, Quantity, Variant,
};
use stochmat_core::ratfunc::{reconstruct_auto, RationalFunction};
use stochmat_core::symmfunc::{rational, ExactRational};

fn n() -> RationalFunction {
    RationalFunction::var()
}

fn c(k: i64) -> RationalFunction {
    RationalFunction::integer(k)
}

fn cq(x: &ExactRational) -> RationalFunction {
    RationalFunction::constant(x.clone())
}

fn reduced(e: Ensemble, q: Quantity) -> RationalFunction {
    reconstruct_moment(e, q, Variant::Reduced, None, DEFAULT_BUDGET).unwrap()
}

#[test]
fn unitary_moments() {
    use Quantity::*;
    let e = Ensemble::U;
    assert_eq!(reduced(e, Trace(2)), c(1) / (n() + c(1)));
    assert_eq!(reduced(e, Trace(3)), c(2) / ((n() + c(1)) * (n() + c(2))));
    assert_eq!(
        reduced(e, Trace(4)),
        (n() * n() + c(12) * n() + c(6)) / (n() * (n() + c(1)) * (n() + c(2)) * (n() + c(3)))
    );
    assert_eq!(reduced(e, Trace(5)), c(34) / ((n() + c(1)) * (n() + c(2)) * (n() + c(3)) * (n() + c(4))));
    assert_eq!(reduced(e, Singular(1)), (n() - c(1)) / (n() + c(1)));
    assert_eq!(
        reduced(e, Singular(2)),
        c(2) * (n() - c(1)) * (n() + c(4)) / ((n() + c(3)) * (n() + c(2)) * (n() + c(1)))
    );
    let num = c(5) * n().pow(4) + c(60) * n().pow(3) + c(217) * n().pow(2) - c(46) * n() - c(256);
    let den = (n() + c(5)) * (n() + c(4)) * (n() + c(3)) * (n() + c(2)) * (n() + c(1)).pow(2);
    assert_eq!(reduced(e, Singular(3)), num / den);
}

#[test]
fn orthogonal_moments() {
    use Quantity::*;
    let e = Ensemble::O;
    assert_eq!(reduced(e, Trace(2)), c(2) / (n() + c(2)));
    assert_eq!(reduced(e, Trace(3)), c(8) / ((n() + c(2)) * (n() + c(4))));
    assert_eq!(
        reduced(e, Trace(4)),
        c(4) * (n() * n() + c(23) * n() + c(36)) / ((n() + c(1)) * (n() + c(2)) * (n() + c(4)) * (n() + c(6)))
    );
    assert_eq!(
        reduced(e, Trace(5)),
        c(16) * (c(29) * n() + c(24)) / ((n() + c(1)) * (n() + c(2)) * (n() + c(4)) * (n() + c(6)) * (n() + c(8)))
    );
    assert_eq!(reduced(e, Singular(1)), (c(2) * n() - c(2)) / (n() + c(2)));
    assert_eq!(
        reduced(e, Singular(2)),
        (c(4) * n() - c(4)) * (c(2) * n() * n() + c(17) * n() + c(12))
            / ((n() + c(1)) * (n() + c(2)) * (n() + c(4)) * (n() + c(6)))
    );
}

#[test]
fn circular_orthogonal_moments() {
    use Quantity::*;
    let e = Ensemble::AI;
    assert_eq!(reduced(e, Trace(1)), (n() - c(1)) / (n() + c(1)));
    assert_eq!(reduced(e, Trace(2)), (n() - c(1)) * (n() + c(5)) / ((n() + c(1)) * (n() + c(3))));
    assert_eq!(
        reduced(e, Trace(3)),
        (c(3) * n() * n() + c(22) * n() - c(29)) / ((n() + c(1)) * (n() + c(3)) * (n() + c(5)))
    );
    let num = c(2) * (n().pow(4) + c(20) * n().pow(3) + c(146) * n().pow(2) + c(92) * n() - c(323));
    let den = (n() + c(1)) * (n() + c(2)) * (n() + c(3)) * (n() + c(5)) * (n() + c(7));
    assert_eq!(reduced(e, Trace(4)), num / den);
}

#[test]
fn circular_symplectic_moments() {
    use Quantity::*;
    let e = Ensemble::AII;
    assert_eq!(reduced(e, Trace(1)), c(-1));
    assert_eq!(reduced(e, Trace(2)), c(1));
    assert_eq!(reduced(e, Trace(3)), c(-3) / (c(2) * n() + c(1)));
    assert_eq!(reduced(e, Trace(4)), (c(2) * n() + c(5)) / ((c(2) * n() + c(1)) * (n() + c(1))));
}

fn alphas() -> [ExactRational; 2] {
    [rational(0), BigRational::new(1.into(), 2.into())]
}

#[test]
fn chiral_unitary_moments_on_rays() {
    for al in alphas() {
        let a2 = cq(&(&al * &al));
        let rec = |q, v| reconstruct_moment(Ensemble::AIII, q, v, Some(&al), DEFAULT_BUDGET).unwrap();
        let m1 = (n() * n() * a2.clone() - c(1)) / (n() + c(1));
        assert_eq!(rec(Quantity::Trace(1), Variant::Reduced), m1, "α = {al}");
        let a4 = a2.clone() * a2.clone();
        let num = a4 * n().pow(3) + (c(2) * a2.clone() + c(1)) * n() * n() - (c(4) * a2.clone() - c(3)) * n() - c(3);
        let m2 = num / ((n() + c(1)) * (n() + c(3)));
        assert_eq!(rec(Quantity::Trace(2), Variant::Reduced), m2, "α = {al}");
        let mu1 = (a2.clone() - c(1)) / (n() + c(1));
        assert_eq!(rec(Quantity::Trace(1), Variant::Shifted), mu1, "α = {al}");
    }
}

#[test]
fn chiral_orthogonal_moments_on_rays() {
    for al in alphas() {
        let a2 = cq(&(&al * &al));
        let rec = |q, v| reconstruct_moment(Ensemble::BDI, q, v, Some(&al), DEFAULT_BUDGET).unwrap();
        let m1 = (n() * n() * a2.clone() + n() - c(2)) / (n() + c(2));
        assert_eq!(rec(Quantity::Trace(1), Variant::Reduced), m1, "α = {al}");
        let mu1 = -((a2.clone() - c(1)) * (n() - c(2))) / (n() + c(2));
        assert_eq!(rec(Quantity::Trace(1), Variant::Shifted), mu1, "α = {al}");
    }
}

#[test]
fn symplectic_moments_from_direct_contraction() {
    let rec = |q: Quantity| {
        reconstruct_auto(
            |x: &ExactRational| {
                direct_contraction(Ensemble::S, q, &Params::N(x.clone()), DEFAULT_BUDGET).map(|v| v - rational(1))
            },
            (2..).map(rational),
            4,
        )
        .unwrap()
    };
    assert_eq!(rec(Quantity::Trace(2)), c(2) / (c(2) * n() + c(1)));
    // the singular moment of the symplectic ensemble
    assert_eq!(rec(Quantity::Singular(1)), (c(2) * n() - c(1)) / (c(2) * n() + c(1)));
}

#[test]
fn symbolic_assembly_agrees_with_reconstruction() {
    use Quantity::*;
    for (e, q) in [(Ensemble::U, Singular(2)), (Ensemble::O, Trace(4)), (Ensemble::AI, Trace(3)), (Ensemble::AII, Trace(4))] {
        let sym = exact_moment_symbolic(e, q, Variant::Reduced, None, DEFAULT_BUDGET).unwrap();
        assert_eq!(sym, reduced(e, q), "{e} {q}");
    }
    let half = BigRational::new(1.into(), 2.into());
    for e in [Ensemble::AIII, Ensemble::BDI] {
        for v in [Variant::Reduced, Variant::Shifted] {
            let sym = exact_moment_symbolic(e, Quantity::Trace(2), v, Some(&half), DEFAULT_BUDGET).unwrap();
            let rec = reconstruct_moment(e, Quantity::Trace(2), v, Some(&half), DEFAULT_BUDGET).unwrap();
            assert_eq!(sym, rec, "{e} {v}");
        }
    }
}
