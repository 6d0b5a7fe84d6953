//! Univariate polynomials and rational functions over the rationals, in the
//! symbolic dimension `N`.
//!
//! A [`RationalFunction`] is kept in canonical form: coprime numerator and
//! denominator with a monic denominator. [`RationalFunction::integer_parts`]
//! gives the display form with integer coefficients.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::symmfunc::{rational, ExactRational};

/// Dense polynomial, coefficients in ascending degree, no trailing zeros.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Polynomial {
    coeffs: Vec<ExactRational>,
}

impl Polynomial {
    pub fn new(mut coeffs: Vec<ExactRational>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn from_integers(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| rational(c)).collect())
    }

    pub fn constant(c: ExactRational) -> Self {
        Self::new(vec![c])
    }

    /// The indeterminate `N`.
    pub fn var() -> Self {
        Self::from_integers(&[0, 1])
    }

    /// `slope·N + intercept`.
    pub fn linear(slope: ExactRational, intercept: ExactRational) -> Self {
        Self::new(vec![intercept, slope])
    }

    pub fn coeffs(&self) -> &[ExactRational] {
        &self.coeffs
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&ExactRational> {
        self.coeffs.last()
    }

    pub fn coeff(&self, i: usize) -> ExactRational {
        self.coeffs.get(i).cloned().unwrap_or_else(ExactRational::zero)
    }

    pub fn eval(&self, x: &ExactRational) -> ExactRational {
        let mut acc = ExactRational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn scale(&self, c: &ExactRational) -> Self {
        Self::new(self.coeffs.iter().map(|x| x * c).collect())
    }

    pub fn pow(&self, e: u32) -> Self {
        (0..e).fold(Self::one(), |acc, _| &acc * self)
    }

    /// Substitutes `N ↦ slope·N + intercept`.
    pub fn compose_linear(&self, slope: &ExactRational, intercept: &ExactRational) -> Self {
        let inner = Self::linear(slope.clone(), intercept.clone());
        let mut acc = Self::zero();
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * &inner) + &Self::constant(c.clone());
        }
        acc
    }

    /// Euclidean division; panics on a zero divisor.
    pub fn div_rem(&self, divisor: &Polynomial) -> (Polynomial, Polynomial) {
        let dd = divisor.degree().expect("division by the zero polynomial");
        let lead = divisor.leading().unwrap().clone();
        let mut rem = self.coeffs.clone();
        let mut quot = vec![ExactRational::zero(); rem.len().saturating_sub(dd)];
        while rem.len() > dd && !rem.is_empty() {
            let top = rem.len() - 1;
            let c = &rem[top] / &lead;
            let shift = top - dd;
            for (i, d) in divisor.coeffs.iter().enumerate() {
                rem[shift + i] -= &c * d;
            }
            quot[shift] = c;
            rem.pop();
            while rem.last().is_some_and(|x| x.is_zero()) {
                rem.pop();
            }
        }
        (Polynomial::new(quot), Polynomial::new(rem))
    }

    /// Monic greatest common divisor (zero if both are zero).
    pub fn gcd(&self, other: &Polynomial) -> Polynomial {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn monic(&self) -> Polynomial {
        match self.leading() {
            Some(l) => self.scale(&l.recip()),
            None => self.clone(),
        }
    }

    /// Integer coefficients with content 1 and the same sign as `self`, plus
    /// the rational factor `self / primitive`.
    pub fn primitive(&self) -> (Vec<BigInt>, ExactRational) {
        if self.is_zero() {
            return (Vec::new(), ExactRational::one());
        }
        let lcm = self.coeffs.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let ints: Vec<BigInt> = self.coeffs.iter().map(|c| (c * &lcm).to_integer()).collect();
        let content = ints.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
        let prim: Vec<BigInt> = ints.iter().map(|c| c / &content).collect();
        (prim, BigRational::new(content, lcm))
    }
}

impl Zero for Polynomial {
    fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }
}

impl One for Polynomial {
    fn one() -> Self {
        Self::from_integers(&[1])
    }
}

impl From<ExactRational> for Polynomial {
    fn from(c: ExactRational) -> Self {
        Self::constant(c)
    }
}

impl Add for &Polynomial {
    type Output = Polynomial;

    fn add(self, rhs: &Polynomial) -> Polynomial {
        let len = self.coeffs.len().max(rhs.coeffs.len());
        Polynomial::new((0..len).map(|i| self.coeff(i) + rhs.coeff(i)).collect())
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;

    fn sub(self, rhs: &Polynomial) -> Polynomial {
        let len = self.coeffs.len().max(rhs.coeffs.len());
        Polynomial::new((0..len).map(|i| self.coeff(i) - rhs.coeff(i)).collect())
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;

    fn mul(self, rhs: &Polynomial) -> Polynomial {
        if self.is_zero() || rhs.is_zero() {
            return Polynomial::zero();
        }
        let mut out = vec![ExactRational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Polynomial::new(out)
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;

    fn neg(self) -> Polynomial {
        Polynomial::new(self.coeffs.iter().map(|c| -c).collect())
    }
}

macro_rules! forward_owned {
    ($ty:ty, $($tr:ident $m:ident),*) => {$(
        impl $tr for $ty {
            type Output = $ty;
            fn $m(self, rhs: $ty) -> $ty {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&$ty> for $ty {
            type Output = $ty;
            fn $m(self, rhs: &$ty) -> $ty {
                (&self).$m(rhs)
            }
        }
    )*};
}

forward_owned!(Polynomial, Add add, Sub sub, Mul mul);

fn write_poly(f: &mut fmt::Formatter<'_>, coeffs: &[BigInt]) -> fmt::Result {
    let mut first = true;
    for (i, c) in coeffs.iter().enumerate().rev() {
        if c.is_zero() {
            continue;
        }
        let mag = c.abs();
        if first {
            if c.is_negative() {
                write!(f, "-")?;
            }
        } else {
            write!(f, "{}", if c.is_negative() { " - " } else { " + " })?;
        }
        first = false;
        let unit = mag.is_one() && i > 0;
        if !unit {
            write!(f, "{mag}")?;
        }
        match i {
            0 => {}
            1 => write!(f, "N")?,
            _ => write!(f, "N^{i}")?,
        }
    }
    if first {
        write!(f, "0")?;
    }
    Ok(())
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (prim, factor) = self.primitive();
        if !factor.is_one() {
            write!(f, "({factor})*(")?;
            write_poly(f, &prim)?;
            write!(f, ")")
        } else {
            write_poly(f, &prim)
        }
    }
}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// `num/den` in lowest terms with monic denominator.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RationalFunction {
    num: Polynomial,
    den: Polynomial,
}

impl RationalFunction {
    pub fn new(num: Polynomial, den: Polynomial) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::InvalidParameters("zero denominator".into()));
        }
        if num.is_zero() {
            return Ok(Self::zero());
        }
        let g = num.gcd(&den);
        let (num, _) = num.div_rem(&g);
        let (den, _) = den.div_rem(&g);
        let lead = den.leading().unwrap().recip();
        Ok(Self { num: num.scale(&lead), den: den.scale(&lead) })
    }

    pub fn from_polynomial(p: Polynomial) -> Self {
        Self { num: p, den: Polynomial::one() }
    }

    pub fn constant(c: ExactRational) -> Self {
        Self::from_polynomial(Polynomial::constant(c))
    }

    pub fn integer(c: i64) -> Self {
        Self::constant(rational(c))
    }

    /// The indeterminate `N`.
    pub fn var() -> Self {
        Self::from_polynomial(Polynomial::var())
    }

    pub fn numerator(&self) -> &Polynomial {
        &self.num
    }

    pub fn denominator(&self) -> &Polynomial {
        &self.den
    }

    /// Display form: integer numerator and denominator, jointly of content 1,
    /// denominator with positive leading coefficient.
    pub fn integer_parts(&self) -> (Vec<BigInt>, Vec<BigInt>) {
        if self.num.is_zero() {
            return (Vec::new(), vec![BigInt::one()]);
        }
        let lcm = self
            .num
            .coeffs()
            .iter()
            .chain(self.den.coeffs())
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let to_int = |p: &Polynomial| -> Vec<BigInt> { p.coeffs().iter().map(|c| (c * &lcm).to_integer()).collect() };
        let (n, d) = (to_int(&self.num), to_int(&self.den));
        let content = n.iter().chain(d.iter()).fold(BigInt::zero(), |acc, c| acc.gcd(c));
        (n.iter().map(|c| c / &content).collect(), d.iter().map(|c| c / &content).collect())
    }

    pub fn eval(&self, x: &ExactRational) -> Result<ExactRational> {
        let d = self.den.eval(x);
        if d.is_zero() {
            return Err(Error::Pole { family: "rational function".into(), dimension: x.to_string() });
        }
        Ok(self.num.eval(x) / d)
    }

    pub fn recip(&self) -> Result<Self> {
        Self::new(self.den.clone(), self.num.clone())
    }

    pub fn pow(&self, e: u32) -> Self {
        Self { num: self.num.pow(e), den: self.den.pow(e) }
    }

    /// Substitutes `N ↦ slope·N + intercept`.
    pub fn compose_linear(&self, slope: &ExactRational, intercept: &ExactRational) -> Result<Self> {
        Self::new(self.num.compose_linear(slope, intercept), self.den.compose_linear(slope, intercept))
    }

    /// `deg num − deg den`; `None` for the zero function.
    pub fn degree_at_infinity(&self) -> Option<i64> {
        Some(self.num.degree()? as i64 - self.den.degree().unwrap() as i64)
    }

    /// The first `count` coefficients `c_0, c_1, …` of the expansion
    /// `f(N) = Σ_j c_j N^{top − j}` at infinity, with `top` the first returned value.
    pub fn expansion_at_infinity(&self, top: i64, count: usize) -> Vec<ExactRational> {
        // Work with reversed polynomials in u = 1/N.
        let Some(dn) = self.num.degree() else {
            return vec![ExactRational::zero(); count];
        };
        let dd = self.den.degree().unwrap();
        let rev = |p: &Polynomial, d: usize| -> Vec<ExactRational> { (0..=d).map(|i| p.coeff(d - i)).collect() };
        let a = rev(&self.num, dn);
        let b = rev(&self.den, dd);
        // f = u^{dd-dn} · A(u)/B(u); series of A/B: c_k
        let shift = dd as i64 - dn as i64; // f = Σ s_k u^{k+shift} = Σ s_k N^{-(k+shift)}
        let mut s: Vec<ExactRational> = Vec::new();
        let needed_last = -top + count as i64 - 1 - shift; // largest k needed
        if needed_last >= 0 {
            for k in 0..=needed_last as usize {
                let mut acc = a.get(k).cloned().unwrap_or_else(ExactRational::zero);
                for j in 1..=k.min(dd) {
                    acc -= &b[j] * &s[k - j];
                }
                s.push(acc / &b[0]);
            }
        }
        (0..count)
            .map(|j| {
                // exponent top - j equals -(k + shift)
                let k = -(top - j as i64) - shift;
                if k < 0 {
                    ExactRational::zero()
                } else {
                    s[k as usize].clone()
                }
            })
            .collect()
    }
}

impl Zero for RationalFunction {
    fn zero() -> Self {
        Self { num: Polynomial::zero(), den: Polynomial::one() }
    }

    fn is_zero(&self) -> bool {
        self.num.is_zero()
    }
}

impl One for RationalFunction {
    fn one() -> Self {
        Self::integer(1)
    }
}

impl From<ExactRational> for RationalFunction {
    fn from(c: ExactRational) -> Self {
        Self::constant(c)
    }
}

impl From<Polynomial> for RationalFunction {
    fn from(p: Polynomial) -> Self {
        Self::from_polynomial(p)
    }
}

impl Add for &RationalFunction {
    type Output = RationalFunction;

    fn add(self, rhs: &RationalFunction) -> RationalFunction {
        if self.den == rhs.den {
            return RationalFunction::new(&self.num + &rhs.num, self.den.clone()).expect("nonzero denominator");
        }
        RationalFunction::new(&(&self.num * &rhs.den) + &(&rhs.num * &self.den), &self.den * &rhs.den)
            .expect("nonzero denominator")
    }
}

impl Sub for &RationalFunction {
    type Output = RationalFunction;

    fn sub(self, rhs: &RationalFunction) -> RationalFunction {
        self + &(-rhs)
    }
}

impl Mul for &RationalFunction {
    type Output = RationalFunction;

    fn mul(self, rhs: &RationalFunction) -> RationalFunction {
        RationalFunction::new(&self.num * &rhs.num, &self.den * &rhs.den).expect("nonzero denominator")
    }
}

impl Div for &RationalFunction {
    type Output = RationalFunction;

    /// # Panics
    /// On division by the zero function.
    fn div(self, rhs: &RationalFunction) -> RationalFunction {
        self * &rhs.recip().expect("division by the zero rational function")
    }
}

impl Neg for &RationalFunction {
    type Output = RationalFunction;

    fn neg(self) -> RationalFunction {
        RationalFunction { num: -&self.num, den: self.den.clone() }
    }
}

impl Neg for RationalFunction {
    type Output = RationalFunction;

    fn neg(self) -> RationalFunction {
        -&self
    }
}

forward_owned!(RationalFunction, Add add, Sub sub, Mul mul, Div div);

impl fmt::Display for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (n, d) = self.integer_parts();
        if d.len() == 1 && d[0].is_one() {
            return write_poly(f, &n);
        }
        write!(f, "(")?;
        write_poly(f, &n)?;
        write!(f, ")/(")?;
        write_poly(f, &d)?;
        write!(f, ")")
    }
}

impl fmt::Debug for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Bounds on numerator and denominator degrees for reconstruction.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DegreeBounds {
    pub num: usize,
    pub den: usize,
}

/// Number of samples held out to verify a reconstruction.
pub const HELD_OUT: usize = 3;

/// Recovers `p/q` with `deg p ≤ bounds.num`, `deg q ≤ bounds.den` from exact
/// samples by solving `p(x) − v·q(x) = 0`. The last [`HELD_OUT`] samples are
/// not used for fitting; they must be reproduced exactly.
pub fn reconstruct_rational(samples: &[(ExactRational, ExactRational)], bounds: DegreeBounds) -> Result<RationalFunction> {
    let unknowns = bounds.num + bounds.den + 2;
    if samples.len() < unknowns + HELD_OUT {
        return Err(Error::Reconstruction(format!(
            "{} samples given, need {} (degrees {}/{} plus {HELD_OUT} held out)",
            samples.len(),
            unknowns + HELD_OUT,
            bounds.num,
            bounds.den
        )));
    }
    let xs: Vec<&ExactRational> = samples.iter().map(|(x, _)| x).collect();
    for i in 0..xs.len() {
        if xs[i + 1..].contains(&xs[i]) {
            return Err(Error::Reconstruction(format!("repeated sample point {}", xs[i])));
        }
    }
    let (fit, held) = samples.split_at(samples.len() - HELD_OUT);
    let mut rows: Vec<Vec<ExactRational>> = fit
        .iter()
        .map(|(x, v)| {
            let mut row = Vec::with_capacity(unknowns);
            let mut pw = ExactRational::one();
            for _ in 0..=bounds.num {
                row.push(pw.clone());
                pw *= x;
            }
            let mut pw = ExactRational::one();
            for _ in 0..=bounds.den {
                row.push(-(v * &pw));
                pw *= x;
            }
            row
        })
        .collect();
    let pivots = row_reduce(&mut rows, unknowns);
    let free: Vec<usize> = (0..unknowns).filter(|c| !pivots.contains(c)).collect();
    if free.is_empty() {
        return Err(Error::Reconstruction(format!(
            "no rational function with degrees {}/{} fits the samples",
            bounds.num, bounds.den
        )));
    }
    for &f in &free {
        let mut sol = vec![ExactRational::zero(); unknowns];
        sol[f] = ExactRational::one();
        for (r, &pc) in pivots.iter().enumerate() {
            sol[pc] = -rows[r][f].clone();
        }
        let p = Polynomial::new(sol[..=bounds.num].to_vec());
        let q = Polynomial::new(sol[bounds.num + 1..].to_vec());
        if q.is_zero() {
            continue;
        }
        if fit.iter().any(|(x, _)| q.eval(x).is_zero()) {
            continue;
        }
        let candidate = RationalFunction::new(p, q)?;
        for (x, v) in held {
            match candidate.eval(x) {
                Ok(val) if &val == v => {}
                _ => {
                    return Err(Error::Reconstruction(format!(
                        "candidate {candidate} misses the held-out sample at N = {x}"
                    )))
                }
            }
        }
        return Ok(candidate);
    }
    Err(Error::Reconstruction("every kernel vector has a vanishing denominator".into()))
}

/// Gauss–Jordan elimination in place; returns pivot columns (row `r` has pivot `pivots[r]`).
fn row_reduce(rows: &mut Vec<Vec<ExactRational>>, cols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = rows[r][c].recip();
        for x in rows[r].iter_mut() {
            *x *= &inv;
        }
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i != r && !row[c].is_zero() {
                let factor = row[c].clone();
                for (x, y) in row.iter_mut().zip(&pivot_row) {
                    *x -= &factor * y;
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    rows.truncate(r);
    pivots
}

/// Reconstruction with automatic degree search: tries total degree
/// `d = 0, 1, …, max_degree` with bounds `(d, d)`, evaluating `f` lazily at
/// successive `nodes`. Nodes where `f` fails (poles) are skipped.
pub fn reconstruct_auto<F, I>(mut f: F, nodes: I, max_degree: usize) -> Result<RationalFunction>
where
    F: FnMut(&ExactRational) -> Result<ExactRational>,
    I: IntoIterator<Item = ExactRational>,
{
    let mut nodes = nodes.into_iter();
    let mut samples: Vec<(ExactRational, ExactRational)> = Vec::new();
    for d in 0..=max_degree {
        let need = 2 * d + 2 + HELD_OUT;
        while samples.len() < need {
            let x = nodes
                .next()
                .ok_or_else(|| Error::Reconstruction(format!("ran out of sample points at degree {d}")))?;
            match f(&x) {
                Ok(v) => samples.push((x, v)),
                Err(Error::Pole { .. }) => continue,
                Err(e) => return Err(e),
            }
        }
        if let Ok(r) = reconstruct_rational(&samples[..need], DegreeBounds { num: d, den: d }) {
            // Accept only if every sample collected so far agrees.
            if samples.iter().all(|(x, v)| r.eval(x).as_ref() == Ok(v)) {
                return Ok(r);
            }
        }
    }
    Err(Error::Reconstruction(format!("no fit up to degree {max_degree}")))
}

/// `T_{n,1..count}`: coefficients of `N^{n−j}` in the expansion of `f(N)/N`.
pub fn laurent_coefficients(f: &RationalFunction, n: usize, count: usize) -> Vec<ExactRational> {
    let scaled = f * &RationalFunction::var().recip().expect("N is nonzero");
    scaled.expansion_at_infinity(n as i64 - 1, count)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(a: i64, b: i64) -> ExactRational {
        BigRational::new(a.into(), b.into())
    }

    fn n() -> RationalFunction {
        RationalFunction::var()
    }

    fn c(k: i64) -> RationalFunction {
        RationalFunction::integer(k)
    }

    #[test]
    fn canonical_form_cancels_common_factors() {
        let f = (n() * n() - c(1)) / (n() + c(1));
        assert_eq!(f, n() - c(1));
        assert_eq!(f.denominator(), &Polynomial::one());
        let g = (c(2) * n()) / (c(4) * n() + c(2));
        let (num, den) = g.integer_parts();
        assert_eq!(num, vec![BigInt::zero(), BigInt::one()]);
        assert_eq!(den, vec![BigInt::one(), BigInt::from(2)]);
        assert_eq!(g.to_string(), "(N)/(2N + 1)");
    }

    #[test]
    fn gcd_and_division() {
        let a = Polynomial::from_integers(&[-1, 0, 1]);
        let b = Polynomial::from_integers(&[1, 1]);
        assert_eq!(a.gcd(&b), b);
        let (quot, rem) = a.div_rem(&b);
        assert_eq!(quot, Polynomial::from_integers(&[-1, 1]));
        assert!(rem.is_zero());
    }

    #[test]
    fn reconstruction_recovers_known_function() {
        let target = (n() * n() + c(12) * n() + c(6)) / (n() * (n() + c(1)) * (n() + c(2)) * (n() + c(3)));
        let samples: Vec<_> = (5..=16).map(|k| (q(k, 1), target.eval(&q(k, 1)).unwrap())).collect();
        let r = reconstruct_rational(&samples, DegreeBounds { num: 2, den: 4 }).unwrap();
        assert_eq!(r, target);
        let auto = reconstruct_auto(|x| target.eval(x), (1..40).map(|k| q(k, 1)), 8).unwrap();
        assert_eq!(auto, target);
    }

    #[test]
    fn reconstruction_of_constant() {
        let samples: Vec<_> = (1..=5).map(|k| (q(k, 1), q(1, 1))).collect();
        let r = reconstruct_rational(&samples, DegreeBounds { num: 0, den: 0 }).unwrap();
        assert_eq!(r, RationalFunction::one());
    }

    #[test]
    fn reconstruction_rejects_inconsistent_data() {
        let samples: Vec<_> = (1..=8).map(|k| (q(k, 1), q(k * k * k + 1, k + 7))).collect();
        assert!(reconstruct_rational(&samples, DegreeBounds { num: 1, den: 1 }).is_err());
        assert!(reconstruct_rational(&samples[..3], DegreeBounds { num: 1, den: 1 }).is_err());
    }

    #[test]
    fn laurent_examples() {
        // (N-1)/(N+1): T_{1,1} = 0, T_{1,2} = 1
        let s1 = (n() - c(1)) / (n() + c(1));
        assert_eq!(laurent_coefficients(&s1, 1, 3), vec![q(0, 1), q(1, 1), q(-2, 1)]);
        // f = 1: f/N = N^{-1}, so T_{1,1} = 0 and T_{1,2} = 1
        assert_eq!(laurent_coefficients(&c(1), 1, 2), vec![q(0, 1), q(1, 1)]);
        // 1/(N+1)^2 at n=2: f/N = N^{-3} - 2N^{-4}: exponents 1,0,-1,-2,-3,-4
        let g = (n() + c(1)).pow(2).recip().unwrap();
        assert_eq!(
            laurent_coefficients(&g, 2, 6),
            vec![q(0, 1), q(0, 1), q(0, 1), q(0, 1), q(1, 1), q(-2, 1)]
        );
    }

    #[test]
    fn compose_linear_matches_evaluation() {
        let f = (n() * n() + c(3)) / (n() - c(2));
        let g = f.compose_linear(&q(-2, 1), &q(1, 1)).unwrap();
        for k in 3..9 {
            let x = q(k, 1);
            assert_eq!(g.eval(&x).unwrap(), f.eval(&(q(1, 1) - q(2, 1) * &x)).unwrap());
        }
    }

    #[test]
    fn pole_is_reported() {
        let f = c(1) / (n() - c(3));
        assert!(matches!(f.eval(&q(3, 1)), Err(Error::Pole { .. })));
    }
}
