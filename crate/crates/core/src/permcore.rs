//! Permutations, partitions, matchings and coset types.
//!
//! Permutations are stored 0-based; everything that crosses the public
//! boundary (images, cycles, text) is 1-based. Composition follows the usual
//! right-to-left convention: `(a * b)(x) = a(b(x))`.

use std::fmt;
use std::ops::Mul;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    images: Vec<usize>,
}

impl Permutation {
    pub fn identity(k: usize) -> Self {
        Self { images: (0..k).collect() }
    }

    /// Builds a permutation from its 1-based one-line notation.
    pub fn from_images(images: &[usize]) -> Result<Self> {
        if images.iter().any(|&x| x == 0) {
            return Err(Error::InvalidPermutation(format!("{images:?} contains 0")));
        }
        Self::try_from_zero_based(images.iter().map(|&x| x - 1).collect())
    }

    pub fn try_from_zero_based(images: Vec<usize>) -> Result<Self> {
        let k = images.len();
        let mut seen = vec![false; k];
        for &x in &images {
            if x >= k || seen[x] {
                return Err(Error::InvalidPermutation(format!(
                    "{:?} is not a bijection of 1..{k}",
                    images.iter().map(|x| x + 1).collect::<Vec<_>>()
                )));
            }
            seen[x] = true;
        }
        Ok(Self { images })
    }

    pub(crate) fn from_zero_based(images: Vec<usize>) -> Self {
        debug_assert!(Self::try_from_zero_based(images.clone()).is_ok());
        Self { images }
    }

    /// Builds a permutation of degree `k` from 1-based disjoint cycles.
    pub fn from_cycles(k: usize, cycles: &[Vec<usize>]) -> Result<Self> {
        let mut images: Vec<usize> = (0..k).collect();
        let mut touched = vec![false; k];
        for cycle in cycles {
            for (idx, &x) in cycle.iter().enumerate() {
                if x == 0 || x > k || touched[x - 1] {
                    return Err(Error::InvalidPermutation(format!(
                        "cycle {cycle:?} is not a disjoint cycle on 1..{k}"
                    )));
                }
                touched[x - 1] = true;
                images[x - 1] = cycle[(idx + 1) % cycle.len()] - 1;
            }
        }
        Ok(Self { images })
    }

    /// Parses cycle notation such as `(1 2)(3 4)`; `()` is the identity.
    pub fn parse_cycles(text: &str, k: usize) -> Result<Self> {
        let mut cycles = Vec::new();
        let mut rest = text.trim();
        while !rest.is_empty() {
            let body = rest
                .strip_prefix('(')
                .ok_or_else(|| Error::Parse(format!("expected `(` in {text:?}")))?;
            let close = body
                .find(')')
                .ok_or_else(|| Error::Parse(format!("unbalanced cycle in {text:?}")))?;
            let cycle = body[..close]
                .split(|c: char| c.is_whitespace() || c == ',')
                .filter(|s| !s.is_empty())
                .map(|s| s.parse::<usize>().map_err(|e| Error::Parse(format!("{s:?}: {e}"))))
                .collect::<Result<Vec<_>>>()?;
            if !cycle.is_empty() {
                cycles.push(cycle);
            }
            rest = body[close + 1..].trim_start();
        }
        Self::from_cycles(k, &cycles)
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    /// Image of the 1-based point `i`.
    pub fn apply(&self, i: usize) -> usize {
        self.images[i - 1] + 1
    }

    pub fn images(&self) -> Vec<usize> {
        self.images.iter().map(|x| x + 1).collect()
    }

    pub fn as_zero_based(&self) -> &[usize] {
        &self.images
    }

    /// `self * other`, i.e. apply `other` first.
    ///
    /// # Panics
    /// If the degrees differ.
    pub fn compose(&self, other: &Permutation) -> Permutation {
        assert_eq!(self.degree(), other.degree(), "composing permutations of different degree");
        Self { images: other.images.iter().map(|&x| self.images[x]).collect() }
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0; self.degree()];
        for (i, &x) in self.images.iter().enumerate() {
            inv[x] = i;
        }
        Self { images: inv }
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &x)| i == x)
    }

    /// All cycles (including fixed points), 1-based, each starting at its least element.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let k = self.degree();
        let mut seen = vec![false; k];
        let mut out = Vec::new();
        for start in 0..k {
            if seen[start] {
                continue;
            }
            let mut cycle = Vec::new();
            let mut x = start;
            while !seen[x] {
                seen[x] = true;
                cycle.push(x + 1);
                x = self.images[x];
            }
            out.push(cycle);
        }
        out
    }

    pub fn cycle_type(&self) -> Partition {
        Partition::from_unsorted(cycle_lengths(&self.images))
    }

    pub fn sign(&self) -> i32 {
        let k = self.degree();
        let cycles = cycle_lengths(&self.images).len();
        if (k - cycles) % 2 == 0 {
            1
        } else {
            -1
        }
    }

    /// Coset type `[p]`: half the component sizes of the graph joining the
    /// trivial matching and its image under `p`.
    pub fn coset_type(&self) -> Result<Partition> {
        if self.degree() % 2 != 0 {
            return Err(Error::OddDegree(self.degree()));
        }
        Ok(coset_type_zero_based(&self.images))
    }
}

impl Mul for &Permutation {
    type Output = Permutation;

    fn mul(self, rhs: &Permutation) -> Permutation {
        self.compose(rhs)
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut any = false;
        for cycle in self.cycles().into_iter().filter(|c| c.len() > 1) {
            any = true;
            let body: Vec<String> = cycle.iter().map(|x| x.to_string()).collect();
            write!(f, "({})", body.join(" "))?;
        }
        if !any {
            write!(f, "()")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self} in S_{}", self.degree())
    }
}

pub(crate) fn cycle_lengths(images: &[usize]) -> Vec<usize> {
    let k = images.len();
    let mut seen = vec![false; k];
    let mut lengths = Vec::new();
    for start in 0..k {
        if seen[start] {
            continue;
        }
        let mut len = 0;
        let mut x = start;
        while !seen[x] {
            seen[x] = true;
            len += 1;
            x = images[x];
        }
        lengths.push(len);
    }
    lengths
}

/// Coset type of a 0-based permutation of even degree.
pub(crate) fn coset_type_zero_based(images: &[usize]) -> Partition {
    let k = images.len();
    let mut partner = vec![0; k];
    for r in 0..k / 2 {
        let (a, b) = (images[2 * r], images[2 * r + 1]);
        partner[a] = b;
        partner[b] = a;
    }
    coset_type_of_partners(&partner)
}

/// Coset type of the pair (trivial matching, matching given by `partner`).
pub(crate) fn coset_type_of_partners(partner: &[usize]) -> Partition {
    let k = partner.len();
    let mut seen = vec![false; k];
    let mut parts = Vec::new();
    for start in 0..k {
        if seen[start] {
            continue;
        }
        let mut len = 0;
        let mut v = start;
        loop {
            let w = v ^ 1;
            seen[v] = true;
            seen[w] = true;
            len += 1;
            v = partner[w];
            if v == start {
                break;
            }
        }
        parts.push(len);
    }
    Partition::from_unsorted(parts)
}

/// Coset type of two matchings given as partner arrays.
pub(crate) fn meet_type(a: &[usize], b: &[usize]) -> Partition {
    let k = a.len();
    let mut seen = vec![false; k];
    let mut parts = Vec::new();
    for start in 0..k {
        if seen[start] {
            continue;
        }
        let mut len = 0;
        let mut v = start;
        loop {
            let w = a[v];
            seen[v] = true;
            seen[w] = true;
            len += 1;
            v = b[w];
            if v == start {
                break;
            }
        }
        parts.push(len);
    }
    Partition::from_unsorted(parts)
}

/// A weakly decreasing list of positive integers.
///
/// The derived ordering is plain lexicographic on the parts, which is the
/// column order used by every count table.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Partition {
    parts: Vec<usize>,
}

impl Partition {
    pub fn new(parts: Vec<usize>) -> Result<Self> {
        if parts.iter().any(|&p| p == 0) {
            return Err(Error::InvalidPartition(format!("{parts:?} has a zero part")));
        }
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::InvalidPartition(format!("{parts:?} is not weakly decreasing")));
        }
        Ok(Self { parts })
    }

    /// Sorts the parts decreasingly and drops zeros.
    pub fn from_unsorted(mut parts: Vec<usize>) -> Self {
        parts.retain(|&p| p > 0);
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Self { parts }
    }

    pub fn empty() -> Self {
        Self::default()
    }

    /// The partition `1^n`.
    pub fn ones(n: usize) -> Self {
        Self { parts: vec![1; n] }
    }

    /// The one-part partition `[n]` (empty for `n = 0`).
    pub fn row(n: usize) -> Self {
        Self::from_unsorted(vec![n])
    }

    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    pub fn weight(&self) -> usize {
        self.parts.iter().sum()
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn largest_part(&self) -> usize {
        self.parts.first().copied().unwrap_or(0)
    }

    /// `2λ`: every part doubled.
    pub fn doubled(&self) -> Self {
        Self { parts: self.parts.iter().map(|p| 2 * p).collect() }
    }

    /// Pairs `(part, multiplicity)` in decreasing order of part.
    pub fn multiplicities(&self) -> Vec<(usize, usize)> {
        let mut out: Vec<(usize, usize)> = Vec::new();
        for &p in &self.parts {
            match out.last_mut() {
                Some((q, m)) if *q == p => *m += 1,
                _ => out.push((p, 1)),
            }
        }
        out
    }

    pub fn conjugate(&self) -> Self {
        let cols = self.largest_part();
        Self {
            parts: (1..=cols).map(|j| self.parts.iter().filter(|&&p| p >= j).count()).collect(),
        }
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let body: Vec<String> = self.parts.iter().map(|p| p.to_string()).collect();
        write!(f, "[{}]", body.join(","))
    }
}

impl fmt::Debug for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Partition {
    type Err = Error;

    /// Accepts `[3,1,1]`, `3,1,1` or `3 1 1`.
    fn from_str(s: &str) -> Result<Self> {
        let body = s.trim().trim_start_matches('[').trim_end_matches(']');
        let parts = body
            .split(|c: char| c == ',' || c.is_whitespace())
            .filter(|t| !t.is_empty())
            .map(|t| t.parse::<usize>().map_err(|e| Error::Parse(format!("{t:?}: {e}"))))
            .collect::<Result<Vec<_>>>()?;
        Partition::new(parts)
    }
}

impl Serialize for Partition {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Partition {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let text = String::deserialize(d)?;
        text.parse().map_err(serde::de::Error::custom)
    }
}

/// A perfect matching of `{1..2n}` together with its canonical coset representative.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Matching {
    blocks: Vec<(usize, usize)>,
    rep: Permutation,
}

impl Matching {
    /// Accepts 1-based blocks in any order.
    pub fn from_blocks(blocks: &[(usize, usize)]) -> Result<Self> {
        let k = 2 * blocks.len();
        let mut seen = vec![false; k];
        let mut sorted = Vec::with_capacity(blocks.len());
        for &(a, b) in blocks {
            let (a, b) = (a.min(b), a.max(b));
            for x in [a, b] {
                if x == 0 || x > k || seen[x - 1] || a == b {
                    return Err(Error::InvalidMatching(format!("{blocks:?} is not a perfect matching")));
                }
                seen[x - 1] = true;
            }
            sorted.push((a, b));
        }
        sorted.sort_unstable();
        let mut images = Vec::with_capacity(k);
        for &(a, b) in &sorted {
            images.push(a - 1);
            images.push(b - 1);
        }
        Ok(Self { blocks: sorted, rep: Permutation::from_zero_based(images) })
    }

    /// The matching `p(𝔱)`.
    pub fn from_permutation(p: &Permutation) -> Result<Self> {
        if p.degree() % 2 != 0 {
            return Err(Error::OddDegree(p.degree()));
        }
        let blocks: Vec<(usize, usize)> =
            (0..p.degree() / 2).map(|r| (p.apply(2 * r + 1), p.apply(2 * r + 2))).collect();
        Self::from_blocks(&blocks)
    }

    /// The trivial matching `𝔱 = {1,2},{3,4},…`.
    pub fn trivial(n: usize) -> Self {
        Self {
            blocks: (0..n).map(|r| (2 * r + 1, 2 * r + 2)).collect(),
            rep: Permutation::identity(2 * n),
        }
    }

    pub(crate) fn from_sorted_blocks_zero_based(blocks: &[(usize, usize)]) -> Self {
        let mut images = Vec::with_capacity(2 * blocks.len());
        for &(a, b) in blocks {
            images.push(a);
            images.push(b);
        }
        Self {
            blocks: blocks.iter().map(|&(a, b)| (a + 1, b + 1)).collect(),
            rep: Permutation::from_zero_based(images),
        }
    }

    pub fn n(&self) -> usize {
        self.blocks.len()
    }

    pub fn blocks(&self) -> &[(usize, usize)] {
        &self.blocks
    }

    /// The minimal-lexicographic permutation in the coset `rep·H_n`.
    pub fn canonical_rep(&self) -> &Permutation {
        &self.rep
    }

    /// The fixed-point-free involution whose 2-cycles are the blocks.
    pub fn fpf_involution(&self) -> Permutation {
        Permutation::from_zero_based(self.partners())
    }

    /// 0-based partner array.
    pub(crate) fn partners(&self) -> Vec<usize> {
        let mut partner = vec![0; 2 * self.n()];
        for &(a, b) in &self.blocks {
            partner[a - 1] = b - 1;
            partner[b - 1] = a - 1;
        }
        partner
    }

    /// Coset type of the pair: half the component sizes of the union graph.
    pub fn meet(&self, other: &Matching) -> Result<Partition> {
        if self.n() != other.n() {
            return Err(Error::DegreeMismatch { expected: 2 * self.n(), found: 2 * other.n() });
        }
        Ok(meet_type(&self.partners(), &other.partners()))
    }
}

impl fmt::Display for Matching {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let body: Vec<String> = self.blocks.iter().map(|(a, b)| format!("{{{a},{b}}}")).collect();
        write!(f, "{{{}}}", body.join(","))
    }
}

/// The fixed-point-free involution of a matching.
pub fn fpf_involution(m: &Matching) -> Permutation {
    m.fpf_involution()
}

pub fn cycle_type(p: &Permutation) -> Partition {
    p.cycle_type()
}

pub fn sign(p: &Permutation) -> i32 {
    p.sign()
}

pub fn coset_type(p: &Permutation) -> Result<Partition> {
    p.coset_type()
}

/// Union-find over `0..k` with a reusable buffer.
pub(crate) struct UnionFind {
    parent: Vec<usize>,
    components: usize,
}

impl UnionFind {
    pub(crate) fn new(k: usize) -> Self {
        Self { parent: (0..k).collect(), components: k }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    pub(crate) fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra] = rb;
            self.components -= 1;
        }
    }

    /// Merges every point with its image under a 0-based permutation.
    pub(crate) fn union_perm(&mut self, images: &[usize]) {
        for (i, &x) in images.iter().enumerate() {
            self.union(i, x);
        }
    }

    pub(crate) fn components(&self) -> usize {
        self.components
    }
}

/// Number of orbits of `⟨generators⟩` on `{1..k}`.
pub fn orbit_count(generators: &[Permutation], k: usize) -> Result<usize> {
    let mut uf = UnionFind::new(k);
    for g in generators {
        if g.degree() != k {
            return Err(Error::DegreeMismatch { expected: k, found: g.degree() });
        }
        uf.union_perm(&g.images);
    }
    Ok(uf.components())
}

/// The named permutations used to encode traces as index strings.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SpecialPermutation {
    /// `(1 2 … n)` in `S_n`.
    PiU,
    /// `(1 2)(3 4)…` in `S_2n`.
    PhiU,
    /// `(2 3)(4 5)…(2n 1)` in `S_2n`.
    VarphiU,
    /// `(1 2 … 2n)²` in `S_2n`.
    PiO,
    /// `(1 2 3 4)(5 6 7 8)…` in `S_4n`.
    PhiO,
    /// `(1 2 4n−1 4n)(3 4 5 6)(7 8 9 10)…` in `S_4n`.
    VarphiO,
    /// Product of `(4k−2, 4k, 4k+1, 4k+3)` mod `4n`, in `S_4n`.
    PiBdi,
}

impl FromStr for SpecialPermutation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "pi_U" => Self::PiU,
            "phi_U" => Self::PhiU,
            "varphi_U" => Self::VarphiU,
            "pi_O" => Self::PiO,
            "phi_O" => Self::PhiO,
            "varphi_O" => Self::VarphiO,
            "pi_BDI" => Self::PiBdi,
            other => return Err(Error::UnknownName(other.to_string())),
        })
    }
}

pub fn special_permutation(name: SpecialPermutation, n: usize) -> Result<Permutation> {
    if n == 0 {
        return Err(Error::InvalidParameters("special permutations need n >= 1".into()));
    }
    let wrap = |x: usize, k: usize| (x - 1) % k + 1;
    let (k, cycles): (usize, Vec<Vec<usize>>) = match name {
        SpecialPermutation::PiU => (n, vec![(1..=n).collect()]),
        SpecialPermutation::PhiU => (2 * n, (0..n).map(|r| vec![2 * r + 1, 2 * r + 2]).collect()),
        SpecialPermutation::VarphiU => {
            (2 * n, (0..n).map(|r| vec![2 * r + 2, wrap(2 * r + 3, 2 * n)]).collect())
        }
        SpecialPermutation::PiO => {
            let cycle = Permutation::from_cycles(2 * n, &[(1..=2 * n).collect()])?;
            return Ok(cycle.compose(&cycle));
        }
        SpecialPermutation::PhiO => {
            (4 * n, (0..n).map(|r| (4 * r + 1..=4 * r + 4).collect()).collect())
        }
        SpecialPermutation::VarphiO => {
            let mut cycles = vec![vec![1, 2, 4 * n - 1, 4 * n]];
            cycles.extend((1..n).map(|r| (4 * r - 1..=4 * r + 2).collect()));
            (4 * n, cycles)
        }
        SpecialPermutation::PiBdi => (
            4 * n,
            (1..=n)
                .map(|k| [4 * k - 2, 4 * k, 4 * k + 1, 4 * k + 3].iter().map(|&x| wrap(x, 4 * n)).collect())
                .collect(),
        ),
    };
    Permutation::from_cycles(k, &cycles)
}

/// All `(2n−1)!!` matchings of `{1..2n}`, in lexicographic order of their canonical representatives.
pub fn matchings(n: usize) -> Vec<Matching> {
    fn rec(remaining: &mut Vec<usize>, current: &mut Vec<(usize, usize)>, out: &mut Vec<Matching>) {
        if remaining.is_empty() {
            out.push(Matching::from_sorted_blocks_zero_based(current));
            return;
        }
        let first = remaining.remove(0);
        for idx in 0..remaining.len() {
            let other = remaining.remove(idx);
            current.push((first, other));
            rec(remaining, current, out);
            current.pop();
            remaining.insert(idx, other);
        }
        remaining.insert(0, first);
    }
    let mut out = Vec::with_capacity(double_factorial(2 * n as u64 - 1) as usize);
    let mut remaining: Vec<usize> = (0..2 * n).collect();
    rec(&mut remaining, &mut Vec::with_capacity(n), &mut out);
    out
}

/// All `n!·2^n` elements of the stabilizer of the trivial matching in `S_2n`.
pub fn hyperoctahedral(n: usize) -> Vec<Permutation> {
    let mut out = Vec::with_capacity((factorial(n as u64) as usize) << n);
    for rho in Permutations::new(n) {
        for mask in 0..(1usize << n) {
            let mut images = vec![0; 2 * n];
            for r in 0..n {
                let flip = (mask >> r) & 1;
                for e in 0..2 {
                    images[2 * r + e] = 2 * rho.as_zero_based()[r] + (e ^ flip);
                }
            }
            out.push(Permutation::from_zero_based(images));
        }
    }
    out
}

/// Lexicographic enumeration of `S_k`, optionally restricted to `p(1) = first`.
pub struct Permutations {
    current: Option<Vec<usize>>,
    fixed_head: bool,
}

impl Permutations {
    pub fn new(k: usize) -> Self {
        Self { current: Some((0..k).collect()), fixed_head: false }
    }

    /// Permutations with 1-based `p(1) = first`; used to shard enumerations.
    pub fn with_first(k: usize, first: usize) -> Self {
        assert!(first >= 1 && first <= k);
        let mut start = vec![first - 1];
        start.extend((0..k).filter(|&x| x != first - 1));
        Self { current: Some(start), fixed_head: true }
    }
}

impl Iterator for Permutations {
    type Item = Permutation;

    fn next(&mut self) -> Option<Permutation> {
        let current = self.current.take()?;
        let mut next = current.clone();
        let advanced = if self.fixed_head && !next.is_empty() {
            next_permutation(&mut next[1..])
        } else {
            next_permutation(&mut next)
        };
        if advanced {
            self.current = Some(next);
        }
        Some(Permutation::from_zero_based(current))
    }
}

/// Advances to the next lexicographic permutation; false when wrapping.
pub(crate) fn next_permutation(a: &mut [usize]) -> bool {
    if a.len() < 2 {
        return false;
    }
    let mut i = a.len() - 1;
    while i > 0 && a[i - 1] >= a[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = a.len() - 1;
    while a[j] <= a[i - 1] {
        j -= 1;
    }
    a.swap(i - 1, j);
    a[i..].reverse();
    true
}

pub fn factorial(n: u64) -> u128 {
    (1..=n as u128).product()
}

/// `k!!`, with `(−1)!! = 0!! = 1`.
pub fn double_factorial(k: u64) -> u128 {
    let k = k as i64;
    let mut acc = 1u128;
    let mut x = k;
    while x > 1 {
        acc *= x as u128;
        x -= 2;
    }
    acc
}
