//! Weingarten functions of the classical groups and of the symmetric spaces
//! AI, AII, AIII and BDI.
//!
//! Unitary-type functions are character sums over `λ ⊢ k`; orthogonal-type
//! functions are sums of zonal spherical functions. At a positive integer
//! dimension the sums run only over the irreducible representations that
//! actually occur (`ℓ(μ) ≤ N`, or `μ₁ ≤ N` for the symplectic continuations),
//! which keeps small dimensions finite. At other dimensions the full sum is
//! used and a vanishing denominator is reported as [`Error::Pole`].

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::permcore::{factorial, Partition, Permutation};
use crate::ratfunc::{Polynomial, RationalFunction};
use crate::symmfunc::{
    character, dim, jack_from_power_sums, jack_one_n, jack_signature, partitions, rational, zonal_spherical,
    ExactRational, JackParam,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Family {
    U,
    O,
    Sp,
    AI,
    AII,
    AIII,
    BDI,
}

impl Family {
    pub fn name(self) -> &'static str {
        match self {
            Family::U => "U",
            Family::O => "O",
            Family::Sp => "Sp",
            Family::AI => "AI",
            Family::AII => "AII",
            Family::AIII => "AIII",
            Family::BDI => "BDI",
        }
    }

    /// Sp and AII carry an extra `ε(σ)` sign on top of the coset type.
    pub fn sign_dependent(self) -> bool {
        matches!(self, Family::Sp | Family::AII)
    }

    pub fn chiral(self) -> bool {
        matches!(self, Family::AIII | Family::BDI)
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s.to_ascii_uppercase().as_str() {
            "U" => Family::U,
            "O" => Family::O,
            "SP" | "S" => Family::Sp,
            "AI" => Family::AI,
            "AII" => Family::AII,
            "AIII" => Family::AIII,
            "BDI" => Family::BDI,
            _ => return Err(Error::UnknownName(s.to_string())),
        })
    }
}

/// Which representations enter the sum.
#[derive(Clone, Copy, Debug)]
enum Keep {
    All,
    LengthAtMost(usize),
    FirstPartAtMost(usize),
}

impl Keep {
    fn admits(self, mu: &Partition) -> bool {
        match self {
            Keep::All => true,
            Keep::LengthAtMost(n) => mu.len() <= n,
            Keep::FirstPartAtMost(n) => mu.largest_part() <= n,
        }
    }
}

fn positive_integer(x: &ExactRational) -> Option<usize> {
    (x.is_integer() && x.is_positive()).then(|| x.to_integer().to_usize()).flatten()
}

fn length_rule(n: &ExactRational) -> Keep {
    positive_integer(n).map_or(Keep::All, Keep::LengthAtMost)
}

fn first_part_rule(n: &ExactRational) -> Keep {
    positive_integer(n).map_or(Keep::All, Keep::FirstPartAtMost)
}

fn pole(family: Family, at: impl fmt::Display) -> Error {
    Error::Pole { family: family.name().into(), dimension: at.to_string() }
}

fn inverse_or_pole(x: ExactRational, family: Family, at: &dyn fmt::Display) -> Result<ExactRational> {
    if x.is_zero() {
        Err(pole(family, at))
    } else {
        Ok(x.recip())
    }
}

/// `(1/k!) Σ_μ d_μ χ_μ(λ) w(μ)`.
fn unitary_sum<F>(lambda: &Partition, keep: Keep, mut w: F) -> Result<ExactRational>
where
    F: FnMut(&Partition) -> Result<ExactRational>,
{
    let k = lambda.weight();
    let mut total = ExactRational::zero();
    for mu in partitions(k).iter().filter(|m| keep.admits(m)) {
        let chi = character(mu, lambda)?;
        if chi == 0 {
            continue;
        }
        total += rational(chi) * BigRational::from_integer(BigInt::from(dim(mu))) * w(mu)?;
    }
    Ok(total / BigRational::from_integer(BigInt::from(factorial(k as u64))))
}

/// `(2^k k!/(2k)!) Σ_μ d_{2μ} ω_μ(λ) w(μ)`.
fn orthogonal_sum<F>(lambda: &Partition, keep: Keep, mut w: F) -> Result<ExactRational>
where
    F: FnMut(&Partition) -> Result<ExactRational>,
{
    let k = lambda.weight();
    let mut total = ExactRational::zero();
    for mu in partitions(k).iter().filter(|m| keep.admits(m)) {
        let omega = zonal_spherical(mu, lambda)?;
        if omega.is_zero() {
            continue;
        }
        total += omega * BigRational::from_integer(BigInt::from(dim(&mu.doubled()))) * w(mu)?;
    }
    Ok(total * orthogonal_prefactor(k))
}

fn orthogonal_prefactor(k: usize) -> ExactRational {
    let num = BigInt::from(2u32).pow(k as u32) * BigInt::from(factorial(k as u64));
    BigRational::new(num, BigInt::from(factorial(2 * k as u64)))
}

fn sign_power(k: usize) -> ExactRational {
    rational(if k % 2 == 0 { 1 } else { -1 })
}

/// `W^U_N(λ) = (1/k!) Σ_μ d_μ χ_μ(λ) / J^1_μ(1^N)`.
pub fn wg_u(lambda: &Partition, n: &ExactRational) -> Result<ExactRational> {
    unitary_sum(lambda, length_rule(n), |mu| {
        inverse_or_pole(jack_one_n(mu, JackParam::One, n), Family::U, n)
    })
}

fn orthogonal_at(lambda: &Partition, x: &ExactRational, keep: Keep, family: Family, at: &ExactRational) -> Result<ExactRational> {
    orthogonal_sum(lambda, keep, |mu| inverse_or_pole(jack_one_n(mu, JackParam::Two, x), family, at))
}

/// `W^O_N(λ) = (2^k k!/(2k)!) Σ_μ d_{2μ} ω_μ(λ) / J^2_μ(1^N)`, `λ` a coset type.
pub fn wg_o(lambda: &Partition, n: &ExactRational) -> Result<ExactRational> {
    orthogonal_at(lambda, n, length_rule(n), Family::O, n)
}

/// The symplectic value for an even-sign representative of coset type `λ`:
/// `(−1)^k W^O_{−2N}(λ)`.
pub fn wg_sp_class(lambda: &Partition, n: &ExactRational) -> Result<ExactRational> {
    let x = -(rational(2) * n);
    Ok(sign_power(lambda.weight()) * orthogonal_at(lambda, &x, first_part_rule(n), Family::Sp, n)?)
}

/// `W^Sp_N(σ) = (−1)^k ε(σ) W^O_{−2N}([σ])` for a representative `σ ∈ S_2k`.
pub fn wg_sp(rep: &Permutation, n: &ExactRational) -> Result<ExactRational> {
    Ok(rational(rep.sign() as i64) * wg_sp_class(&rep.coset_type()?, n)?)
}

/// `W^AI_N = W^O_{N+1}`.
pub fn wg_ai(lambda: &Partition, n: &ExactRational) -> Result<ExactRational> {
    let x = n + rational(1);
    orthogonal_at(lambda, &x, length_rule(n), Family::AI, n)
}

/// `(−1)^k W^O_{1−2N}(λ)`: the AII value for an even-sign permutation.
pub fn wg_aii_class(lambda: &Partition, n: &ExactRational) -> Result<ExactRational> {
    let x = rational(1) - rational(2) * n;
    Ok(sign_power(lambda.weight()) * orthogonal_at(lambda, &x, first_part_rule(n), Family::AII, n)?)
}

/// `W^AII_N(σ) = (−1)^k ε(σ) W^O_{1−2N}([σ])`.
pub fn wg_aii(sigma: &Permutation, n: &ExactRational) -> Result<ExactRational> {
    Ok(rational(sigma.sign() as i64) * wg_aii_class(&sigma.coset_type()?, n)?)
}

fn check_signature(a: u64, b: u64) -> Result<()> {
    if a + b == 0 {
        return Err(Error::InvalidParameters("a + b must be at least 1".into()));
    }
    Ok(())
}

/// `W^AIII(λ) = (1/k!) Σ_μ d_μ J^1_μ(1^a,(−1)^b)/J^1_μ(1^{a+b}) χ_μ(λ)`.
pub fn wg_aiii(lambda: &Partition, a: u64, b: u64) -> Result<ExactRational> {
    check_signature(a, b)?;
    let n = rational((a + b) as i64);
    let at = format!("a={a}, b={b}");
    unitary_sum(lambda, Keep::LengthAtMost((a + b) as usize), |mu| {
        let num = jack_signature(mu, JackParam::One, a as i64, b as i64);
        Ok(num * inverse_or_pole(jack_one_n(mu, JackParam::One, &n), Family::AIII, &at)?)
    })
}

/// `W^BDI(λ) = (2^k k!/(2k)!) Σ_μ d_{2μ} J^2_μ(1^a,(−1)^b)/J^2_μ(1^{a+b}) ω_μ(λ)`.
pub fn wg_bdi(lambda: &Partition, a: u64, b: u64) -> Result<ExactRational> {
    check_signature(a, b)?;
    let n = rational((a + b) as i64);
    let at = format!("a={a}, b={b}");
    orthogonal_sum(lambda, Keep::LengthAtMost((a + b) as usize), |mu| {
        let num = jack_signature(mu, JackParam::Two, a as i64, b as i64);
        Ok(num * inverse_or_pole(jack_one_n(mu, JackParam::Two, &n), Family::BDI, &at)?)
    })
}

/// Weingarten values as rational functions of the symbolic dimension `N`.
pub mod symbolic {
    use super::*;

    /// `J^γ_μ(1^x)` with `x = slope·N + intercept`, as a polynomial in `N`.
    fn jack_ones_poly(mu: &Partition, gamma: JackParam, slope: &ExactRational, intercept: &ExactRational) -> Polynomial {
        let g = gamma.value();
        let mut acc = Polynomial::one();
        for (i, &row) in mu.parts().iter().enumerate() {
            for j in 0..row {
                let c = intercept - rational(i as i64) + rational(g * j as i64);
                acc = acc * Polynomial::linear(slope.clone(), c);
            }
        }
        acc
    }

    /// `J^γ_μ` at the signature point along the ray `a − b = αN`:
    /// `p_k = αN` for odd `k` and `N` for even `k`.
    fn jack_ray_poly(mu: &Partition, gamma: JackParam, alpha: &ExactRational) -> Polynomial {
        jack_from_power_sums(mu, gamma, |k| {
            if k % 2 == 0 {
                Polynomial::var()
            } else {
                Polynomial::linear(alpha.clone(), ExactRational::zero())
            }
        })
    }

    fn unitary_sum_sym<F>(lambda: &Partition, mut w: F) -> RationalFunction
    where
        F: FnMut(&Partition) -> RationalFunction,
    {
        let k = lambda.weight();
        let mut total = RationalFunction::zero();
        for mu in partitions(k) {
            let chi = character(&mu, lambda).expect("same weight");
            if chi == 0 {
                continue;
            }
            let c = rational(chi) * BigRational::from_integer(BigInt::from(dim(&mu)));
            total = total + RationalFunction::constant(c) * w(&mu);
        }
        total * RationalFunction::constant(BigRational::new(BigInt::one(), BigInt::from(factorial(k as u64))))
    }

    fn orthogonal_sum_sym<F>(lambda: &Partition, mut w: F) -> RationalFunction
    where
        F: FnMut(&Partition) -> RationalFunction,
    {
        let k = lambda.weight();
        let mut total = RationalFunction::zero();
        for mu in partitions(k) {
            let omega = zonal_spherical(&mu, lambda).expect("same weight");
            if omega.is_zero() {
                continue;
            }
            let c = omega * BigRational::from_integer(BigInt::from(dim(&mu.doubled())));
            total = total + RationalFunction::constant(c) * w(&mu);
        }
        total * RationalFunction::constant(orthogonal_prefactor(k))
    }

    fn recip(p: Polynomial) -> RationalFunction {
        RationalFunction::new(Polynomial::one(), p).expect("Jack value is a nonzero polynomial")
    }

    pub fn wg_u(lambda: &Partition) -> RationalFunction {
        let (one, zero) = (rational(1), rational(0));
        unitary_sum_sym(lambda, |mu| recip(jack_ones_poly(mu, JackParam::One, &one, &zero)))
    }

    /// `W^O` evaluated at `x = slope·N + intercept`.
    pub fn wg_o_at(lambda: &Partition, slope: &ExactRational, intercept: &ExactRational) -> RationalFunction {
        orthogonal_sum_sym(lambda, |mu| recip(jack_ones_poly(mu, JackParam::Two, slope, intercept)))
    }

    pub fn wg_o(lambda: &Partition) -> RationalFunction {
        wg_o_at(lambda, &rational(1), &rational(0))
    }

    /// Symplectic value for an even-sign representative.
    pub fn wg_sp_class(lambda: &Partition) -> RationalFunction {
        let s = RationalFunction::constant(sign_power(lambda.weight()));
        s * wg_o_at(lambda, &rational(-2), &rational(0))
    }

    pub fn wg_ai(lambda: &Partition) -> RationalFunction {
        wg_o_at(lambda, &rational(1), &rational(1))
    }

    /// AII value for an even-sign permutation.
    pub fn wg_aii_class(lambda: &Partition) -> RationalFunction {
        let s = RationalFunction::constant(sign_power(lambda.weight()));
        s * wg_o_at(lambda, &rational(-2), &rational(1))
    }

    /// `W^AIII` along the ray `a − b = αN`.
    pub fn wg_aiii_ray(lambda: &Partition, alpha: &ExactRational) -> RationalFunction {
        let (one, zero) = (rational(1), rational(0));
        unitary_sum_sym(lambda, |mu| {
            RationalFunction::new(jack_ray_poly(mu, JackParam::One, alpha), jack_ones_poly(mu, JackParam::One, &one, &zero))
                .expect("nonzero denominator")
        })
    }

    /// `W^BDI` along the ray `a − b = αN`.
    pub fn wg_bdi_ray(lambda: &Partition, alpha: &ExactRational) -> RationalFunction {
        let (one, zero) = (rational(1), rational(0));
        orthogonal_sum_sym(lambda, |mu| {
            RationalFunction::new(jack_ray_poly(mu, JackParam::Two, alpha), jack_ones_poly(mu, JackParam::Two, &one, &zero))
                .expect("nonzero denominator")
        })
    }
}

/// Dimension parameters of a table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Dimension {
    N(ExactRational),
    Signature { a: u64, b: u64 },
}

impl fmt::Display for Dimension {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Dimension::N(n) => write!(f, "N={n}"),
            Dimension::Signature { a, b } => write!(f, "a={a}, b={b}"),
        }
    }
}

/// All values of one Weingarten function at a fixed order and dimension,
/// keyed by cycle type (U, AIII) or coset type (the others). For Sp and AII
/// the stored value belongs to even-sign representatives; odd ones are negated.
#[derive(Clone, Debug, PartialEq)]
pub struct WeingartenTable {
    pub family: Family,
    pub order: usize,
    pub dimension: Dimension,
    pub entries: Vec<(Partition, ExactRational)>,
}

impl WeingartenTable {
    pub fn get(&self, lambda: &Partition) -> Option<&ExactRational> {
        self.entries.iter().find(|(l, _)| l == lambda).map(|(_, v)| v)
    }
}

/// Evaluates one class of any family.
pub fn wg_class(family: Family, lambda: &Partition, dimension: &Dimension) -> Result<ExactRational> {
    match (family, dimension) {
        (Family::U, Dimension::N(n)) => wg_u(lambda, n),
        (Family::O, Dimension::N(n)) => wg_o(lambda, n),
        (Family::Sp, Dimension::N(n)) => wg_sp_class(lambda, n),
        (Family::AI, Dimension::N(n)) => wg_ai(lambda, n),
        (Family::AII, Dimension::N(n)) => wg_aii_class(lambda, n),
        (Family::AIII, Dimension::Signature { a, b }) => wg_aiii(lambda, *a, *b),
        (Family::BDI, Dimension::Signature { a, b }) => wg_bdi(lambda, *a, *b),
        (f, d) => Err(Error::InvalidParameters(format!("family {f} does not take dimension {d}"))),
    }
}

pub fn weingarten_table(family: Family, order: usize, dimension: Dimension) -> Result<WeingartenTable> {
    let entries = partitions(order)
        .into_iter()
        .map(|l| wg_class(family, &l, &dimension).map(|v| (l, v)))
        .collect::<Result<Vec<_>>>()?;
    Ok(WeingartenTable { family, order, dimension, entries })
}
