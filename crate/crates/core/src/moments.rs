//! Exact spectral moments of the induced stochastic matrices.
//!
//! Two independent paths are provided. [`exact_moment`] contracts the count
//! tables of [`crate::enumerate`] against Weingarten values, while
//! [`direct_contraction`] expands every matrix entry and sums the Weingarten
//! formula over all index strings literally. Symbolic forms in `N` come from
//! exact sampling plus rational reconstruction, or from assembling the
//! symbolic Weingarten functions directly.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::enumerate::{cached_table, CountTable, TableFamily, DEFAULT_BUDGET};
use crate::error::{Error, Result};
use crate::permcore::{
    coset_type_of_partners, coset_type_zero_based, cycle_lengths, double_factorial, factorial, meet_type, Partition,
};
use crate::ratfunc::{reconstruct_auto, Polynomial, RationalFunction};
use crate::symmfunc::{rational, ExactRational};
use crate::weingarten::{self, symbolic};

pub use crate::ratfunc::laurent_coefficients;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Ensemble {
    U,
    O,
    S,
    AI,
    AII,
    AIII,
    BDI,
    CII,
}

impl Ensemble {
    pub const ALL: [Ensemble; 8] = [
        Ensemble::U,
        Ensemble::O,
        Ensemble::S,
        Ensemble::AI,
        Ensemble::AII,
        Ensemble::AIII,
        Ensemble::BDI,
        Ensemble::CII,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Ensemble::U => "U",
            Ensemble::O => "O",
            Ensemble::S => "S",
            Ensemble::AI => "AI",
            Ensemble::AII => "AII",
            Ensemble::AIII => "AIII",
            Ensemble::BDI => "BDI",
            Ensemble::CII => "CII",
        }
    }

    /// Parametrized by `(a, b)` rather than `N`.
    pub fn chiral(self) -> bool {
        matches!(self, Ensemble::AIII | Ensemble::BDI | Ensemble::CII)
    }

    /// The stochastic matrix is symmetric, so `MMᵀ = M²`.
    pub fn symmetric(self) -> bool {
        matches!(self, Ensemble::AI | Ensemble::AII | Ensemble::AIII | Ensemble::BDI | Ensemble::CII)
    }

    /// Matrix side per unit of `N` (2 for the quaternionic families).
    pub fn side_factor(self) -> u64 {
        match self {
            Ensemble::S | Ensemble::AII | Ensemble::CII => 2,
            _ => 1,
        }
    }

    /// Whether exact moments are available at all.
    pub fn has_exact(self) -> bool {
        self != Ensemble::CII
    }
}

impl fmt::Display for Ensemble {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Ensemble {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s.eq_ignore_ascii_case("sp") {
            return Ok(Ensemble::S);
        }
        Ensemble::ALL
            .into_iter()
            .find(|e| e.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::UnknownName(s.to_string()))
    }
}

/// `tr Mⁿ` or `tr (MMᵀ)ⁿ`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Quantity {
    Trace(usize),
    Singular(usize),
}

impl Quantity {
    pub fn power(self) -> usize {
        match self {
            Quantity::Trace(n) | Quantity::Singular(n) => n,
        }
    }

    /// Number of `M` factors in the index expansion.
    pub fn factors(self) -> usize {
        match self {
            Quantity::Trace(n) => n,
            Quantity::Singular(n) => 2 * n,
        }
    }
}

impl fmt::Display for Quantity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Quantity::Trace(n) => write!(f, "trace {n}"),
            Quantity::Singular(n) => write!(f, "singular {n}"),
        }
    }
}

/// Full trace, trace with the Perron–Frobenius eigenvalue removed, or the
/// reduced trace of `(M − α²)ⁿ` for the chiral families.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Variant {
    Full,
    Reduced,
    Shifted,
}

impl FromStr for Variant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "full" => Ok(Variant::Full),
            "reduced" => Ok(Variant::Reduced),
            "shifted" => Ok(Variant::Shifted),
            _ => Err(Error::UnknownName(s.to_string())),
        }
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Variant::Full => "full",
            Variant::Reduced => "reduced",
            Variant::Shifted => "shifted",
        })
    }
}

/// Dimension parameters: `N` for U, O, S, AI, AII (side `2N` for S and AII),
/// `(a, b)` with `N = a + b` for the chiral families.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Params {
    N(ExactRational),
    Signature { a: u64, b: u64 },
}

impl Params {
    pub fn n(n: i64) -> Self {
        Params::N(rational(n))
    }

    /// `α = (a − b)/N`; zero for non-chiral parameters.
    pub fn alpha(&self) -> ExactRational {
        match self {
            Params::N(_) => ExactRational::zero(),
            Params::Signature { a, b } => BigRational::new(
                BigInt::from(*a as i64 - *b as i64),
                BigInt::from(*a + *b),
            ),
        }
    }

    fn dimension(&self) -> ExactRational {
        match self {
            Params::N(n) => n.clone(),
            Params::Signature { a, b } => rational((a + b) as i64),
        }
    }
}

impl fmt::Display for Params {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Params::N(n) => write!(f, "N={n}"),
            Params::Signature { a, b } => write!(f, "a={a},b={b}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MomentSpec {
    pub ensemble: Ensemble,
    pub quantity: Quantity,
    pub variant: Variant,
    pub params: Params,
}

impl MomentSpec {
    pub fn new(ensemble: Ensemble, quantity: Quantity, variant: Variant, params: Params) -> Result<Self> {
        let spec = Self { ensemble, quantity, variant, params };
        spec.validate()?;
        Ok(spec)
    }

    fn validate(&self) -> Result<()> {
        if self.quantity.power() == 0 {
            return Err(Error::InvalidParameters("moment order must be at least 1".into()));
        }
        match (&self.params, self.ensemble.chiral()) {
            (Params::Signature { a, b }, true) => {
                if a + b == 0 {
                    return Err(Error::InvalidParameters("a + b must be at least 1".into()));
                }
            }
            (Params::N(n), false) => {
                if !n.is_positive() {
                    return Err(Error::InvalidParameters(format!("N must be positive, got {n}")));
                }
            }
            (p, _) => {
                return Err(Error::InvalidParameters(format!("ensemble {} does not take parameters {p}", self.ensemble)))
            }
        }
        if self.variant == Variant::Shifted {
            if !self.ensemble.chiral() {
                return Err(Error::InvalidParameters("shifted moments exist only for chiral ensembles".into()));
            }
            if matches!(self.quantity, Quantity::Singular(_)) {
                return Err(Error::InvalidParameters("shifted moments are defined for traces only".into()));
            }
        }
        Ok(())
    }

    /// Matrix side.
    pub fn side(&self) -> ExactRational {
        self.params.dimension() * rational(self.ensemble.side_factor() as i64)
    }
}

/// An exact moment with the ingredients that produced it.
#[derive(Clone, Debug, PartialEq)]
pub struct MomentValue {
    pub value: ExactRational,
    /// Count tables contracted, e.g. `FU_3`; empty for direct contraction.
    pub tables: Vec<String>,
    /// Weingarten values used, as `(family, class, value)`.
    pub weingarten: Vec<(String, Partition, ExactRational)>,
}

/// `C_n = binom(2n, n)/(n + 1)`.
pub fn catalan(n: usize) -> u128 {
    let mut c: u128 = 1;
    for k in 0..n as u128 {
        c = c * 2 * (2 * k + 1) / (k + 2);
    }
    c
}

fn binomial(n: usize, k: usize) -> BigInt {
    let mut r = BigInt::one();
    for i in 0..k {
        r = r * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    r
}

fn pow_rational(x: &ExactRational, e: usize) -> ExactRational {
    let mut r = ExactRational::one();
    for _ in 0..e {
        r *= x;
    }
    r
}

/// Exact moment with the default enumeration budget.
pub fn exact_moment(spec: &MomentSpec) -> Result<ExactRational> {
    Ok(exact_moment_with(spec, DEFAULT_BUDGET)?.value)
}

/// Exact moment; tables above `budget` classifications are refused.
pub fn exact_moment_with(spec: &MomentSpec, budget: u128) -> Result<MomentValue> {
    spec.validate()?;
    let mut out = MomentValue { value: ExactRational::zero(), tables: Vec::new(), weingarten: Vec::new() };
    out.value = match spec.variant {
        Variant::Full => full_moment(spec, budget, &mut out)?,
        Variant::Reduced => full_moment(spec, budget, &mut out)? - ExactRational::one(),
        Variant::Shifted => {
            let n = spec.quantity.power();
            let shift = -(spec.params.alpha() * spec.params.alpha());
            let mut total = ExactRational::zero();
            for k in 0..=n {
                let reduced = if k == 0 {
                    spec.side() - ExactRational::one()
                } else {
                    let sub = MomentSpec { quantity: Quantity::Trace(k), variant: Variant::Full, ..spec.clone() };
                    full_moment(&sub, budget, &mut out)? - ExactRational::one()
                };
                total += BigRational::from_integer(binomial(n, k)) * pow_rational(&shift, n - k) * reduced;
            }
            total
        }
    };
    Ok(out)
}

fn full_moment(spec: &MomentSpec, budget: u128, out: &mut MomentValue) -> Result<ExactRational> {
    let e = spec.ensemble;
    // tr (MMᵀ)ⁿ = tr M²ⁿ for symmetric matrices
    let quantity = match spec.quantity {
        Quantity::Singular(n) if e.symmetric() => Quantity::Trace(2 * n),
        q => q,
    };
    if let Params::Signature { a, b } = spec.params {
        if a == 0 || b == 0 {
            // M = I
            return Ok(spec.side());
        }
    }
    match e {
        Ensemble::CII => Err(Error::Unsupported("no exact moments for CII; use Monte Carlo".into())),
        Ensemble::S => {
            let v = direct_contraction(e, spec.quantity, &spec.params, budget)?;
            Ok(v)
        }
        _ => table_moment(e, quantity, &spec.params, budget, out),
    }
}

fn table_for(e: Ensemble, q: Quantity) -> Result<(TableFamily, usize)> {
    Ok(match (e, q) {
        (Ensemble::U, Quantity::Trace(n)) => (TableFamily::FU, n),
        (Ensemble::U, Quantity::Singular(n)) => (TableFamily::GU, n),
        (Ensemble::O, Quantity::Trace(n)) => (TableFamily::FO, n),
        (Ensemble::O, Quantity::Singular(n)) => (TableFamily::GO, n),
        (Ensemble::AI, Quantity::Trace(n)) => (TableFamily::FAI, n),
        (Ensemble::AII, Quantity::Trace(n)) => (TableFamily::FAII, n),
        (Ensemble::AIII, Quantity::Trace(n)) => (TableFamily::FAIII, n),
        (Ensemble::BDI, Quantity::Trace(n)) => (TableFamily::FBDI, n),
        _ => return Err(Error::Unsupported(format!("no count table for {e} {q}"))),
    })
}

/// The Weingarten value multiplying a table column, as used by the table sum.
fn column_weight(e: Ensemble, lambda: &Partition, params: &Params) -> Result<ExactRational> {
    let n = params.dimension();
    match (e, params) {
        (Ensemble::U, _) => weingarten::wg_u(lambda, &n),
        (Ensemble::O, _) => weingarten::wg_o(lambda, &n),
        (Ensemble::AI, _) => weingarten::wg_ai(lambda, &n),
        // the stored AII table already carries (−1)ⁿ, so the weight is W^O_{1−2N}
        (Ensemble::AII, _) => {
            let s = if lambda.weight() % 2 == 0 { 1 } else { -1 };
            Ok(rational(s) * weingarten::wg_aii_class(lambda, &n)?)
        }
        (Ensemble::AIII, Params::Signature { a, b }) => weingarten::wg_aiii(lambda, *a, *b),
        (Ensemble::BDI, Params::Signature { a, b }) => weingarten::wg_bdi(lambda, *a, *b),
        _ => Err(Error::Unsupported(format!("no column weights for {e} at {params}"))),
    }
}

fn table_moment(e: Ensemble, q: Quantity, params: &Params, budget: u128, out: &mut MomentValue) -> Result<ExactRational> {
    let (family, n) = table_for(e, q)?;
    let table = cached_table(family, n, budget)?;
    out.tables.push(format!("{family}_{n}"));
    let base = params.dimension() * rational(e.side_factor() as i64);
    let mut weights: Vec<Option<ExactRational>> = vec![None; table.columns.len()];
    let mut total = ExactRational::zero();
    for (m, k, lambda, count) in table.nonzero() {
        let c = table.column_index(lambda).expect("column of the table");
        if weights[c].is_none() {
            let w = column_weight(e, lambda, params)?;
            out.weingarten.push((e.to_string(), lambda.clone(), w.clone()));
            weights[c] = Some(w);
        }
        let w = weights[c].as_ref().expect("filled above");
        let exponent = if family.two_index() { m + k } else { m };
        total += rational(count) * w * pow_rational(&base, exponent);
    }
    Ok(total)
}

/// Symbolic moment as a rational function of `N`, assembled from the count
/// tables and the symbolic Weingarten functions. Chiral families are taken
/// along the ray `a − b = αN`.
pub fn exact_moment_symbolic(
    ensemble: Ensemble,
    quantity: Quantity,
    variant: Variant,
    alpha: Option<&ExactRational>,
    budget: u128,
) -> Result<RationalFunction> {
    if ensemble.chiral() != alpha.is_some() {
        return Err(Error::InvalidParameters("α is required exactly for chiral ensembles".into()));
    }
    if matches!(ensemble, Ensemble::S | Ensemble::CII) {
        return Err(Error::Unsupported(format!("no symbolic table assembly for {ensemble}")));
    }
    if quantity.power() == 0 {
        return Err(Error::InvalidParameters("moment order must be at least 1".into()));
    }
    let side = RationalFunction::var() * RationalFunction::integer(ensemble.side_factor() as i64);
    let one = RationalFunction::one();
    match variant {
        Variant::Full => symbolic_full(ensemble, quantity, alpha, budget),
        Variant::Reduced => Ok(symbolic_full(ensemble, quantity, alpha, budget)? - one),
        Variant::Shifted => {
            let alpha = alpha.ok_or_else(|| Error::InvalidParameters("shifted moments need α".into()))?;
            let Quantity::Trace(n) = quantity else {
                return Err(Error::InvalidParameters("shifted moments are defined for traces only".into()));
            };
            let shift = RationalFunction::constant(-(alpha * alpha));
            let mut total = RationalFunction::zero();
            for k in 0..=n {
                let reduced = if k == 0 {
                    &side - &one
                } else {
                    symbolic_full(ensemble, Quantity::Trace(k), Some(alpha), budget)? - one.clone()
                };
                let c = RationalFunction::constant(BigRational::from_integer(binomial(n, k)));
                total = total + c * shift.pow((n - k) as u32) * reduced;
            }
            Ok(total)
        }
    }
}

fn symbolic_full(
    e: Ensemble,
    quantity: Quantity,
    alpha: Option<&ExactRational>,
    budget: u128,
) -> Result<RationalFunction> {
    let quantity = match quantity {
        Quantity::Singular(n) if e.symmetric() => Quantity::Trace(2 * n),
        q => q,
    };
    if let Some(a) = alpha {
        if a.abs() == ExactRational::one() {
            return Ok(RationalFunction::var());
        }
    }
    let (family, n) = table_for(e, quantity)?;
    let table = cached_table(family, n, budget)?;
    let base = RationalFunction::var() * RationalFunction::integer(e.side_factor() as i64);
    let mut weights: Vec<Option<RationalFunction>> = vec![None; table.columns.len()];
    let mut total = RationalFunction::zero();
    for (m, k, lambda, count) in table.nonzero() {
        let c = table.column_index(lambda).expect("column of the table");
        if weights[c].is_none() {
            weights[c] = Some(match e {
                Ensemble::U => symbolic::wg_u(lambda),
                Ensemble::O => symbolic::wg_o(lambda),
                Ensemble::AI => symbolic::wg_ai(lambda),
                Ensemble::AII => symbolic::wg_o_at(lambda, &rational(-2), &rational(1)),
                Ensemble::AIII => symbolic::wg_aiii_ray(lambda, alpha.expect("chiral")),
                Ensemble::BDI => symbolic::wg_bdi_ray(lambda, alpha.expect("chiral")),
                _ => unreachable!("filtered above"),
            });
        }
        let exponent = if family.two_index() { m + k } else { m };
        let term = RationalFunction::integer(count) * weights[c].clone().expect("filled") * base.pow(exponent as u32);
        total = total + term;
    }
    Ok(total)
}

/// `(a, b)` on the ray `a − b = αN`, if both are integers.
pub fn ray_signature(alpha: &ExactRational, n: u64) -> Option<(u64, u64)> {
    let nq = rational(n as i64);
    let a = (&nq + alpha * &nq) / rational(2);
    let b = &nq - &a;
    if !a.is_integer() || a.is_negative() || b.is_negative() {
        return None;
    }
    Some((a.to_integer().to_u64()?, b.to_integer().to_u64()?))
}

/// Smallest step in `N` keeping `(a, b)` integral along the ray.
pub fn ray_step(alpha: &ExactRational) -> u64 {
    let q = alpha.denom().to_u64().unwrap_or(1);
    (1..=2 * q).find(|&s| ray_signature(alpha, s).is_some()).unwrap_or(2 * q)
}

/// Order of the Weingarten function involved, which is the smallest `N` at
/// which the moment agrees with its rational form.
fn weingarten_order(e: Ensemble, q: Quantity) -> usize {
    let factors = match q {
        Quantity::Singular(n) if e.symmetric() => 2 * n,
        q => q.factors(),
    };
    if e.chiral() {
        2 * factors
    } else {
        factors
    }
}

/// Pointwise evaluation at `N` (on the α-ray for chiral families), through
/// the table path or, for S, direct contraction.
pub fn moment_at(
    ensemble: Ensemble,
    quantity: Quantity,
    variant: Variant,
    alpha: Option<&ExactRational>,
    n: u64,
    budget: u128,
) -> Result<ExactRational> {
    let params = match (ensemble.chiral(), alpha) {
        (true, Some(al)) => {
            let (a, b) = ray_signature(al, n)
                .ok_or_else(|| Error::InvalidParameters(format!("α = {al} has no integer signature at N = {n}")))?;
            Params::Signature { a, b }
        }
        (false, None) => Params::n(n as i64),
        _ => return Err(Error::InvalidParameters("α is required exactly for chiral ensembles".into())),
    };
    let spec = MomentSpec::new(ensemble, quantity, variant, params)?;
    Ok(exact_moment_with(&spec, budget)?.value)
}

/// Recovers the moment as a rational function of `N` from exact samples at
/// `N = N₀, N₀ + step, …`, with three held-out checks.
pub fn reconstruct_moment(
    ensemble: Ensemble,
    quantity: Quantity,
    variant: Variant,
    alpha: Option<&ExactRational>,
    budget: u128,
) -> Result<RationalFunction> {
    let step = alpha.map(ray_step).unwrap_or(1);
    let order = weingarten_order(ensemble, quantity).max(2) as u64;
    let start = order.div_ceil(step) * step;
    let nodes = (0..).map(move |i| rational((start + i * step) as i64));
    let max_degree = 4 * order as usize + 6;
    let f = |x: &ExactRational| {
        let n = x.to_integer().to_u64().expect("integer node");
        moment_at(ensemble, quantity, variant, alpha, n, budget)
    };
    reconstruct_auto(f, nodes, max_degree)
}

/// Index pattern of a moment: `M` factors as (row variable, column variable).
fn word(q: Quantity) -> (usize, Vec<(usize, usize)>) {
    match q {
        Quantity::Trace(n) => (n, (0..n).map(|k| (k, (k + 1) % n)).collect()),
        Quantity::Singular(n) => {
            let mut f = Vec::with_capacity(2 * n);
            for k in 0..n {
                f.push((k, n + k));
                f.push(((k + 1) % n, n + k));
            }
            (2 * n, f)
        }
    }
}

/// All `σ` with `src[σ(x)] = dst[x]` for every `x`.
fn perms_matching(src: &[usize], dst: &[usize]) -> Vec<Vec<usize>> {
    fn rec(x: usize, src: &[usize], dst: &[usize], used: &mut [bool], cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if x == dst.len() {
            out.push(cur.clone());
            return;
        }
        for y in 0..src.len() {
            if !used[y] && src[y] == dst[x] {
                used[y] = true;
                cur.push(y);
                rec(x + 1, src, dst, used, cur, out);
                cur.pop();
                used[y] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(0, src, dst, &mut vec![false; src.len()], &mut Vec::new(), &mut out);
    out
}

/// Matchings with nonzero weight, where a block `{x < y}` weighs
/// `pair(x, y)`. Returns `(partner array, sign of representative, weight)`;
/// the representative lists the blocks in order of their smaller element.
fn weighted_matchings<F: Fn(usize, usize) -> i64>(k: usize, pair: F) -> Vec<(Vec<usize>, i32, i64)> {
    fn rec<F: Fn(usize, usize) -> i64>(
        partner: &mut Vec<usize>,
        rep: &mut Vec<usize>,
        weight: i64,
        pair: &F,
        out: &mut Vec<(Vec<usize>, i32, i64)>,
    ) {
        let k = partner.len();
        let Some(x) = (0..k).find(|&i| partner[i] == usize::MAX) else {
            out.push((partner.clone(), perm_sign(rep), weight));
            return;
        };
        for y in x + 1..k {
            if partner[y] != usize::MAX {
                continue;
            }
            let w = pair(x, y);
            if w == 0 {
                continue;
            }
            partner[x] = y;
            partner[y] = x;
            rep.push(x);
            rep.push(y);
            rec(partner, rep, weight * w, pair, out);
            rep.truncate(rep.len() - 2);
            partner[x] = usize::MAX;
            partner[y] = usize::MAX;
        }
    }
    let mut out = Vec::new();
    rec(&mut vec![usize::MAX; k], &mut Vec::with_capacity(k), 1, &pair, &mut out);
    out
}

fn perm_sign(images: &[usize]) -> i32 {
    let cycles = cycle_lengths(images).len();
    if (images.len() - cycles) % 2 == 0 {
        1
    } else {
        -1
    }
}

fn cycle_type_of(images: &[usize]) -> Partition {
    Partition::from_unsorted(cycle_lengths(images))
}

/// `σ⁻¹τ` for 0-based images.
fn inverse_then(sigma: &[usize], tau: &[usize]) -> Vec<usize> {
    let mut inv = vec![0; sigma.len()];
    for (i, &x) in sigma.iter().enumerate() {
        inv[x] = i;
    }
    tau.iter().map(|&x| inv[x]).collect()
}

/// Symplectic form `⟨i|j⟩` on 0-based indices in `[0, 2N)`.
fn symplectic(i: usize, j: usize, n: usize) -> i64 {
    if i < n && j == i + n {
        1
    } else if j < n && i == j + n {
        -1
    } else {
        0
    }
}

/// Signed class counts of one index string.
type ClassCounts = HashMap<Partition, i64>;

fn add_counts(mut a: ClassCounts, b: ClassCounts) -> ClassCounts {
    for (k, v) in b {
        *a.entry(k).or_insert(0) += v;
    }
    a
}

/// Brute-force moment: expands every `M` entry into the underlying matrix
/// entries, applies the Weingarten formula of the family for each index
/// string, and sums. Returns the full (unreduced) moment.
pub fn direct_contraction(ensemble: Ensemble, quantity: Quantity, params: &Params, budget: u128) -> Result<ExactRational> {
    let spec = MomentSpec::new(ensemble, quantity, Variant::Full, params.clone())?;
    if ensemble == Ensemble::CII {
        return Err(Error::Unsupported("no Weingarten formula for CII".into()));
    }
    let dim = params.dimension();
    if !dim.is_integer() {
        return Err(Error::InvalidParameters(format!("direct contraction needs an integer dimension, got {dim}")));
    }
    let n = dim.to_integer().to_usize().ok_or_else(|| Error::InvalidParameters("dimension too large".into()))?;
    let side = spec.side().to_integer().to_usize().expect("integer side");
    let (vars, factors) = word(quantity);
    let k = factors.len();
    let outer = match ensemble {
        Ensemble::U => factorial(k as u64),
        Ensemble::O | Ensemble::S => double_factorial(2 * k as u64 - 1),
        Ensemble::AI | Ensemble::AII | Ensemble::AIII => factorial(2 * k as u64),
        Ensemble::BDI => double_factorial(4 * k as u64 - 1),
        Ensemble::CII => unreachable!(),
    };
    let strings = (side as u128).checked_pow(vars as u32).unwrap_or(u128::MAX);
    let cost = strings.saturating_mul(outer);
    if cost > budget {
        return Err(Error::Budget { what: format!("direct contraction of {ensemble} {quantity} at {params}"), cost, budget });
    }
    let total_strings = side.pow(vars as u32);
    let counts = (0..total_strings)
        .into_par_iter()
        .fold(ClassCounts::new, |mut acc, code| {
            let mut idx = vec![0; vars];
            let mut c = code;
            for v in idx.iter_mut() {
                *v = c % side;
                c /= side;
            }
            let entries: Vec<(usize, usize)> = factors.iter().map(|&(r, c)| (idx[r], idx[c])).collect();
            contract_string(ensemble, &entries, n, &mut acc);
            acc
        })
        .reduce(ClassCounts::new, add_counts);
    let mut total = ExactRational::zero();
    for (lambda, count) in counts {
        if count == 0 {
            continue;
        }
        let w = match ensemble {
            Ensemble::U => weingarten::wg_u(&lambda, &dim)?,
            Ensemble::O => weingarten::wg_o(&lambda, &dim)?,
            Ensemble::S => weingarten::wg_sp_class(&lambda, &dim)?,
            Ensemble::AI => weingarten::wg_ai(&lambda, &dim)?,
            Ensemble::AII => weingarten::wg_aii_class(&lambda, &dim)?,
            Ensemble::AIII | Ensemble::BDI => {
                let Params::Signature { a, b } = params else { unreachable!("validated") };
                if ensemble == Ensemble::AIII {
                    weingarten::wg_aiii(&lambda, *a, *b)?
                } else {
                    weingarten::wg_bdi(&lambda, *a, *b)?
                }
            }
            Ensemble::CII => unreachable!(),
        };
        total += rational(count) * w;
    }
    Ok(total)
}

/// Adds the Weingarten classes (with signs) of `E[Π M_{rc}]` for one string.
fn contract_string(e: Ensemble, entries: &[(usize, usize)], n: usize, acc: &mut ClassCounts) {
    let mut bump = |lambda: Partition, by: i64| *acc.entry(lambda).or_insert(0) += by;
    match e {
        // M_rc = U_rc conj(U_rc)
        Ensemble::U => {
            let rows: Vec<usize> = entries.iter().map(|e| e.0).collect();
            let cols: Vec<usize> = entries.iter().map(|e| e.1).collect();
            let ss = perms_matching(&rows, &rows);
            let ts = perms_matching(&cols, &cols);
            for s in &ss {
                for t in &ts {
                    bump(cycle_type_of(&inverse_then(s, t)), 1);
                }
            }
        }
        // M_rc = O_rc O_rc
        Ensemble::O => {
            let rows: Vec<usize> = entries.iter().flat_map(|e| [e.0, e.0]).collect();
            let cols: Vec<usize> = entries.iter().flat_map(|e| [e.1, e.1]).collect();
            let ss = weighted_matchings(rows.len(), |x, y| (rows[x] == rows[y]) as i64);
            let ts = weighted_matchings(cols.len(), |x, y| (cols[x] == cols[y]) as i64);
            for (s, _, _) in &ss {
                for (t, _, _) in &ts {
                    bump(meet_type(s, t), 1);
                }
            }
        }
        // M_rc = S_rc conj(S_rc) = ⟨r|r̄⟩⟨c|c̄⟩ S_rc S_r̄c̄
        Ensemble::S => {
            let bar = |i: usize| (i + n) % (2 * n);
            let mut sign = 1;
            for &(r, c) in entries {
                sign *= symplectic(r, bar(r), n) * symplectic(c, bar(c), n);
            }
            let rows: Vec<usize> = entries.iter().flat_map(|e| [e.0, bar(e.0)]).collect();
            let cols: Vec<usize> = entries.iter().flat_map(|e| [e.1, bar(e.1)]).collect();
            let ss = weighted_matchings(rows.len(), |x, y| symplectic(rows[x], rows[y], n));
            let ts = weighted_matchings(cols.len(), |x, y| symplectic(cols[x], cols[y], n));
            for (s, es, ws) in &ss {
                for (t, et, wt) in &ts {
                    let eps = (*es * *et) as i64;
                    bump(meet_type(s, t), sign * ws * wt * eps);
                }
            }
        }
        // M_rc = U_rc conj(U_rc), U symmetric or antisymmetric
        Ensemble::AI | Ensemble::AII => {
            let v: Vec<usize> = entries.iter().flat_map(|e| [e.0, e.1]).collect();
            for s in perms_matching(&v, &v) {
                let by = if e == Ensemble::AII { perm_sign(&s) as i64 } else { 1 };
                bump(coset_type_zero_based(&s), by);
            }
        }
        // M_rc = U_rc U_cr, U hermitian
        Ensemble::AIII => {
            let src: Vec<usize> = entries.iter().flat_map(|e| [e.0, e.1]).collect();
            let dst: Vec<usize> = entries.iter().flat_map(|e| [e.1, e.0]).collect();
            for s in perms_matching(&src, &dst) {
                bump(cycle_type_of(&s), 1);
            }
        }
        // M_rc = U_rc U_rc, U real symmetric
        Ensemble::BDI => {
            let v: Vec<usize> = entries.iter().flat_map(|e| [e.0, e.1, e.0, e.1]).collect();
            for (p, _, _) in weighted_matchings(v.len(), |x, y| (v[x] == v[y]) as i64) {
                bump(coset_type_of_partners(&p), 1);
            }
        }
        Ensemble::CII => unreachable!("rejected earlier"),
    }
}

/// The leading Catalan signature data of a reduced singular moment:
/// `(T_{n,1..2n}, C_n)`.
pub fn catalan_signature(f: &RationalFunction, n: usize) -> (Vec<ExactRational>, u128) {
    (laurent_coefficients(f, n, 2 * n), catalan(n))
}

/// Helper for tables: exposes the table used for a moment.
pub fn moment_table(ensemble: Ensemble, quantity: Quantity, budget: u128) -> Result<std::sync::Arc<CountTable>> {
    let q = match quantity {
        Quantity::Singular(n) if ensemble.symmetric() => Quantity::Trace(2 * n),
        q => q,
    };
    let (family, n) = table_for(ensemble, q)?;
    cached_table(family, n, budget)
}

/// A rational function from integer coefficient lists, lowest degree first.
pub fn closed_form(num: &[i64], den: &[i64]) -> RationalFunction {
    RationalFunction::new(Polynomial::from_integers(num), Polynomial::from_integers(den)).expect("nonzero denominator")
}
