//! Symmetric-group characters, zonal spherical functions and Jack polynomial
//! specializations.
//!
//! Characters come from the Murnaghan–Nakayama rule on beta-sets. Zonal
//! spherical functions of `(S_2n, H_n)` are brute-force averages over the
//! hyperoctahedral group, cached per coset type. Caches are read-mostly and
//! populated idempotently, so concurrent use is safe.

use std::collections::{BTreeMap, HashMap};
use std::ops::Mul;
use std::sync::{OnceLock, RwLock};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::permcore::{cycle_lengths, factorial, hyperoctahedral, Partition, Permutation};

/// Arbitrary-precision rational used for every exact value.
pub type ExactRational = BigRational;

/// The Jack parameter: 1 (Schur normalization) or 2 (zonal polynomials).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum JackParam {
    One,
    Two,
}

impl JackParam {
    pub fn value(self) -> i64 {
        match self {
            JackParam::One => 1,
            JackParam::Two => 2,
        }
    }
}

pub fn rational(n: i64) -> ExactRational {
    BigRational::from_integer(BigInt::from(n))
}

/// All partitions of `n` in lexicographic order of their parts,
/// e.g. `[1,1,1,1], [2,1,1], [2,2], [3,1], [4]`.
pub fn partitions(n: usize) -> Vec<Partition> {
    fn rec(n: usize, max: usize, prefix: &mut Vec<usize>, out: &mut Vec<Partition>) {
        if n == 0 {
            out.push(Partition::new(prefix.clone()).expect("generated partition is valid"));
            return;
        }
        for p in 1..=max.min(n) {
            prefix.push(p);
            rec(n - p, p, prefix, out);
            prefix.pop();
        }
    }
    static CACHE: OnceLock<RwLock<HashMap<usize, Vec<Partition>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(hit) = cache.read().unwrap().get(&n) {
        return hit.clone();
    }
    let mut out = Vec::new();
    rec(n, n, &mut Vec::new(), &mut out);
    out.sort();
    cache.write().unwrap().insert(n, out.clone());
    out
}

fn check_weights(a: &Partition, b: &Partition) -> Result<()> {
    if a.weight() != b.weight() {
        return Err(Error::WeightMismatch { left: a.weight(), right: b.weight() });
    }
    Ok(())
}

/// Irreducible character `χ_λ(μ)` of `S_n`.
pub fn character(lambda: &Partition, mu: &Partition) -> Result<i64> {
    check_weights(lambda, mu)?;
    Ok(character_unchecked(lambda.parts(), mu.parts()))
}

type CharKey = (Vec<usize>, Vec<usize>);

fn character_unchecked(lambda: &[usize], mu: &[usize]) -> i64 {
    static CACHE: OnceLock<RwLock<HashMap<CharKey, i64>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    let key = (lambda.to_vec(), mu.to_vec());
    if let Some(&v) = cache.read().unwrap().get(&key) {
        return v;
    }
    let value = murnaghan_nakayama(lambda, mu);
    cache.write().unwrap().insert(key, value);
    value
}

fn murnaghan_nakayama(lambda: &[usize], mu: &[usize]) -> i64 {
    let Some((&k, rest)) = mu.split_first() else {
        return if lambda.is_empty() { 1 } else { 0 };
    };
    let len = lambda.len();
    let beta: Vec<usize> = lambda.iter().enumerate().map(|(i, &l)| l + len - 1 - i).collect();
    let mut total = 0;
    for (idx, &b) in beta.iter().enumerate() {
        if b < k || beta.contains(&(b - k)) {
            continue;
        }
        let target = b - k;
        let between = beta.iter().filter(|&&x| x > target && x < b).count();
        let mut next = beta.clone();
        next[idx] = target;
        next.sort_unstable_by(|x, y| y.cmp(x));
        let shape: Vec<usize> = next
            .iter()
            .enumerate()
            .map(|(i, &x)| x - (len - 1 - i))
            .filter(|&p| p > 0)
            .collect();
        let sign = if between % 2 == 0 { 1 } else { -1 };
        total += sign * character_unchecked(&shape, rest);
    }
    total
}

/// Dimension `d_λ` by the hook length formula.
pub fn dim(lambda: &Partition) -> u128 {
    let conj = lambda.conjugate();
    let mut hooks: u128 = 1;
    for (i, &row) in lambda.parts().iter().enumerate() {
        for j in 0..row {
            hooks *= (row - j + conj.parts()[j] - i - 1) as u128;
        }
    }
    factorial(lambda.weight() as u64) / hooks
}

/// `z_μ = Π_j j^{a_j} a_j!`, the centralizer order.
pub fn centralizer_order(mu: &Partition) -> u128 {
    mu.multiplicities()
        .iter()
        .map(|&(part, mult)| (part as u128).pow(mult as u32) * factorial(mult as u64))
        .product()
}

/// Size of the conjugacy class of cycle type `μ`.
pub fn class_size(mu: &Partition) -> u128 {
    factorial(mu.weight() as u64) / centralizer_order(mu)
}

/// A permutation of `S_2n` with the given coset type.
pub fn coset_type_representative(mu: &Partition) -> Permutation {
    let mut images = Vec::with_capacity(2 * mu.weight());
    let mut offset = 0;
    for &part in mu.parts() {
        let size = 2 * part;
        for x in 0..size {
            images.push(offset + (x + 1) % size);
        }
        offset += size;
    }
    Permutation::try_from_zero_based(images).expect("valid representative")
}

/// Cycle-type histogram of `τ·ξ` over `ξ ∈ H_n`.
fn coset_histogram(images: &[usize], h: &[Permutation]) -> BTreeMap<Partition, u128> {
    let mut hist = BTreeMap::new();
    let mut prod = vec![0; images.len()];
    for xi in h {
        for (slot, &x) in prod.iter_mut().zip(xi.as_zero_based()) {
            *slot = images[x];
        }
        *hist.entry(Partition::from_unsorted(cycle_lengths(&prod))).or_insert(0) += 1;
    }
    hist
}

fn hyperoctahedral_cached(n: usize) -> std::sync::Arc<Vec<Permutation>> {
    static CACHE: OnceLock<RwLock<HashMap<usize, std::sync::Arc<Vec<Permutation>>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(h) = cache.read().unwrap().get(&n) {
        return h.clone();
    }
    let h = std::sync::Arc::new(hyperoctahedral(n));
    cache.write().unwrap().insert(n, h.clone());
    h
}

fn omega_from_histogram(lambda: &Partition, hist: &BTreeMap<Partition, u128>) -> ExactRational {
    let doubled = lambda.doubled();
    let mut sum = BigInt::zero();
    let mut total: u128 = 0;
    for (nu, &count) in hist {
        sum += BigInt::from(count) * BigInt::from(character_unchecked(doubled.parts(), nu.parts()));
        total += count;
    }
    BigRational::new(sum, BigInt::from(total))
}

/// Zonal spherical function `ω_λ` of the Gelfand pair `(S_2n, H_n)`, as a
/// function of the coset type. Normalized by `|H_n|` so that `ω_λ(1^n) = 1`.
pub fn zonal_spherical(lambda: &Partition, coset: &Partition) -> Result<ExactRational> {
    check_weights(lambda, coset)?;
    type Hist = BTreeMap<Partition, u128>;
    static HIST: OnceLock<RwLock<HashMap<Partition, std::sync::Arc<Hist>>>> = OnceLock::new();
    let cache = HIST.get_or_init(Default::default);
    let cached = cache.read().unwrap().get(coset).cloned();
    let hist = match cached {
        Some(h) => h,
        None => {
            let rep = coset_type_representative(coset);
            let h = std::sync::Arc::new(coset_histogram(rep.as_zero_based(), &hyperoctahedral_cached(coset.weight())));
            cache.write().unwrap().insert(coset.clone(), h.clone());
            h
        }
    };
    Ok(omega_from_histogram(lambda, &hist))
}

/// `ω_λ` evaluated from an explicit permutation, without using the coset-type cache.
pub fn zonal_spherical_at(lambda: &Partition, tau: &Permutation) -> Result<ExactRational> {
    if tau.degree() != 2 * lambda.weight() {
        return Err(Error::DegreeMismatch { expected: 2 * lambda.weight(), found: tau.degree() });
    }
    let h = hyperoctahedral_cached(lambda.weight());
    Ok(omega_from_histogram(lambda, &coset_histogram(tau.as_zero_based(), &h)))
}

/// `J^γ_λ(1^N) = Π_{(i,j)∈λ} (N − i + 1 + γ·j)` with `i` from 1 and `j` from 0.
pub fn jack_one_n(lambda: &Partition, gamma: JackParam, n: &ExactRational) -> ExactRational {
    let g = gamma.value();
    let mut acc = ExactRational::one();
    for (i, &row) in lambda.parts().iter().enumerate() {
        for j in 0..row {
            acc *= n - rational(i as i64) + rational(g * j as i64);
        }
    }
    acc
}

/// `p_μ(1^a, (−1)^b) = Π_i (a + (−1)^{μ_i} b)`.
pub fn power_sum_signature(mu: &Partition, a: i64, b: i64) -> BigInt {
    mu.parts()
        .iter()
        .map(|&p| BigInt::from(if p % 2 == 0 { a + b } else { a - b }))
        .product()
}

/// Coefficients of `J^γ_λ` in the power-sum basis, keyed by `μ`.
pub fn jack_power_sum_coefficients(lambda: &Partition, gamma: JackParam) -> Vec<(Partition, ExactRational)> {
    let n = lambda.weight();
    let d = BigInt::from(dim(lambda));
    partitions(n)
        .into_iter()
        .filter_map(|mu| {
            let size = BigInt::from(class_size(&mu));
            let coeff = match gamma {
                JackParam::One => {
                    let chi = character_unchecked(lambda.parts(), mu.parts());
                    BigRational::new(size * BigInt::from(chi), d.clone())
                }
                JackParam::Two => {
                    let omega = zonal_spherical(lambda, &mu).expect("weights agree");
                    let scale = BigInt::from(2u32).pow((n - mu.len()) as u32) * size;
                    omega * BigRational::from_integer(scale)
                }
            };
            (!coeff.is_zero()).then_some((mu, coeff))
        })
        .collect()
}

/// Evaluates `J^γ_λ` given the power sums `p_k` as values of any ring that
/// embeds the rationals.
pub fn jack_from_power_sums<T, F>(lambda: &Partition, gamma: JackParam, p: F) -> T
where
    T: Clone + Zero + One + Mul<Output = T> + From<ExactRational>,
    F: Fn(usize) -> T,
{
    let mut total = T::zero();
    for (mu, coeff) in jack_power_sum_coefficients(lambda, gamma) {
        let mut term = T::from(coeff);
        for &part in mu.parts() {
            term = term * p(part);
        }
        total = total + term;
    }
    total
}

/// `J^γ_λ(1^a, (−1)^b)` from the power-sum expansion.
pub fn jack_signature(lambda: &Partition, gamma: JackParam, a: i64, b: i64) -> ExactRational {
    jack_from_power_sums(lambda, gamma, |k| {
        BigRational::from_integer(BigInt::from(if k % 2 == 0 { a + b } else { a - b }))
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::permcore::Permutations;

    fn part(s: &str) -> Partition {
        s.parse().unwrap()
    }

    fn q(num: i64, den: i64) -> ExactRational {
        BigRational::new(num.into(), den.into())
    }

    #[test]
    fn partition_lists() {
        assert_eq!(partitions(0), vec![Partition::empty()]);
        let p3: Vec<String> = partitions(3).iter().map(|p| p.to_string()).collect();
        assert_eq!(p3, ["[1,1,1]", "[2,1]", "[3]"]);
        let p4: Vec<String> = partitions(4).iter().map(|p| p.to_string()).collect();
        assert_eq!(p4, ["[1,1,1,1]", "[2,1,1]", "[2,2]", "[3,1]", "[4]"]);
        assert_eq!(partitions(6).len(), 11);
        assert_eq!(partitions(10).len(), 42);
    }

    #[test]
    fn character_examples() {
        for mu in partitions(5) {
            assert_eq!(character(&part("[5]"), &mu).unwrap(), 1);
        }
        assert_eq!(character(&part("[1,1]"), &part("[2]")).unwrap(), -1);
        assert_eq!(character(&part("[2,1]"), &part("[1,1,1]")).unwrap(), 2);
        assert!(character(&part("[2,1]"), &part("[2]")).is_err());
        // a known S_4 entry
        assert_eq!(character(&part("[2,2]"), &part("[3,1]")).unwrap(), -1);
        assert_eq!(character(&part("[3,1]"), &part("[2,2]")).unwrap(), -1);
    }

    #[test]
    fn character_matches_brute_force_sign() {
        for n in 1..=6 {
            for mu in partitions(n) {
                let sign = if (n - mu.len()) % 2 == 0 { 1 } else { -1 };
                assert_eq!(character(&Partition::ones(n), &mu).unwrap(), sign);
            }
        }
    }

    #[test]
    fn dims_and_class_sizes() {
        assert_eq!(dim(&part("[4]")), 1);
        assert_eq!(dim(&part("[2,1]")), 2);
        assert_eq!(dim(&part("[3,2,1]")), 16);
        for n in 0..=8 {
            let ps = partitions(n);
            assert_eq!(ps.iter().map(|l| dim(l).pow(2)).sum::<u128>(), factorial(n as u64));
            assert_eq!(ps.iter().map(class_size).sum::<u128>(), factorial(n as u64));
            for l in &ps {
                assert_eq!(character(l, &Partition::ones(n)).unwrap() as u128, dim(l));
            }
        }
        assert_eq!(class_size(&Partition::ones(4)), 1);
        assert_eq!(class_size(&part("[2,1]")), 3);
        assert_eq!(class_size(&part("[3]")), 2);
    }

    #[test]
    fn class_sizes_match_enumeration() {
        let mut counts: BTreeMap<Partition, u128> = BTreeMap::new();
        for p in Permutations::new(6) {
            *counts.entry(p.cycle_type()).or_default() += 1;
        }
        for (mu, c) in counts {
            assert_eq!(class_size(&mu), c);
        }
    }

    #[test]
    fn orthogonality_up_to_six() {
        for n in 1..=6 {
            let ps = partitions(n);
            let nf = factorial(n as u64) as i128;
            for a in &ps {
                for b in &ps {
                    let col: i128 = ps
                        .iter()
                        .map(|l| (character(l, a).unwrap() * character(l, b).unwrap()) as i128)
                        .sum();
                    let expect = if a == b { nf / class_size(a) as i128 } else { 0 };
                    assert_eq!(col, expect, "column {a} {b}");
                    let row: i128 = ps
                        .iter()
                        .map(|mu| class_size(mu) as i128 * (character(a, mu).unwrap() * character(b, mu).unwrap()) as i128)
                        .sum();
                    assert_eq!(row, if a == b { nf } else { 0 }, "row {a} {b}");
                }
            }
        }
    }

    #[test]
    fn zonal_examples() {
        for n in 1..=3 {
            for l in partitions(n) {
                assert_eq!(zonal_spherical(&l, &Partition::ones(n)).unwrap(), q(1, 1));
            }
            for mu in partitions(n) {
                assert_eq!(zonal_spherical(&Partition::row(n), &mu).unwrap(), q(1, 1));
            }
        }
        // two representatives of coset type [2] in S_4
        let a = Permutation::parse_cycles("(2 3)", 4).unwrap();
        let b = Permutation::parse_cycles("(1 3)", 4).unwrap();
        for l in partitions(2) {
            assert_eq!(zonal_spherical_at(&l, &a).unwrap(), zonal_spherical_at(&l, &b).unwrap());
        }
        assert_eq!(zonal_spherical(&part("[1,1]"), &part("[2]")).unwrap(), q(-1, 2));
    }

    #[test]
    fn zonal_is_coset_type_invariant() {
        for n in 1..=3 {
            for tau in Permutations::new(2 * n) {
                let ty = tau.coset_type().unwrap();
                for l in partitions(n) {
                    assert_eq!(zonal_spherical_at(&l, &tau).unwrap(), zonal_spherical(&l, &ty).unwrap());
                }
            }
        }
    }

    #[test]
    fn representative_has_requested_type() {
        for n in 1..=6 {
            for mu in partitions(n) {
                assert_eq!(coset_type_representative(&mu).coset_type().unwrap(), mu);
            }
        }
    }

    #[test]
    fn jack_one_n_examples() {
        let n = q(7, 3);
        assert_eq!(jack_one_n(&part("[1]"), JackParam::One, &n), n);
        assert_eq!(jack_one_n(&part("[1,1]"), JackParam::One, &n), &n * (&n - q(1, 1)));
        assert_eq!(jack_one_n(&part("[2]"), JackParam::Two, &n), &n * (&n + q(2, 1)));
    }

    #[test]
    fn jack_one_n_vanishes_below_length() {
        for k in 1..=5 {
            for l in partitions(k) {
                for nn in 1..=6i64 {
                    let v = jack_one_n(&l, JackParam::One, &q(nn, 1));
                    if (nn as usize) < l.len() {
                        assert!(v.is_zero());
                    } else {
                        assert!(v > q(0, 1));
                    }
                }
            }
        }
    }

    #[test]
    fn power_sum_examples() {
        assert_eq!(power_sum_signature(&part("[1,1]"), 3, 3), BigInt::zero());
        assert_eq!(power_sum_signature(&part("[2]"), 4, 7), BigInt::from(11));
        assert_eq!(power_sum_signature(&part("[2,1]"), 3, 1), BigInt::from(8));
    }

    #[test]
    fn jack_signature_degenerates_to_ones() {
        for n in 1..=3 {
            for l in partitions(n) {
                for gamma in [JackParam::One, JackParam::Two] {
                    for a in 1..=5 {
                        assert_eq!(jack_signature(&l, gamma, a, 0), jack_one_n(&l, gamma, &q(a, 1)));
                    }
                }
            }
        }
        assert_eq!(jack_signature(&part("[1]"), JackParam::One, 5, 2), q(3, 1));
        assert_eq!(jack_signature(&part("[1]"), JackParam::Two, 5, 2), q(3, 1));
    }

    /// Monomial expansions in the standard Jack normalization:
    /// J_(1) = m_1, J_(2) = (1+γ) m_2 + 2 m_11, J_(1,1) = 2 m_11.
    #[test]
    fn jack_signature_matches_monomial_oracle() {
        for a in 0..=4i64 {
            for b in 0..=4i64 {
                if a + b == 0 {
                    continue;
                }
                let x: Vec<i64> = std::iter::repeat(1).take(a as usize).chain(std::iter::repeat(-1).take(b as usize)).collect();
                let m1: i64 = x.iter().sum();
                let m2: i64 = x.iter().map(|v| v * v).sum();
                let mut m11 = 0;
                for i in 0..x.len() {
                    for j in i + 1..x.len() {
                        m11 += x[i] * x[j];
                    }
                }
                for (gamma, g) in [(JackParam::One, 1), (JackParam::Two, 2)] {
                    assert_eq!(jack_signature(&part("[1]"), gamma, a, b), q(m1, 1));
                    assert_eq!(jack_signature(&part("[2]"), gamma, a, b), q((1 + g) * m2 + 2 * m11, 1));
                    assert_eq!(jack_signature(&part("[1,1]"), gamma, a, b), q(2 * m11, 1));
                }
            }
        }
    }
}
