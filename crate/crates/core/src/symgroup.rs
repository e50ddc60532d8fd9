//! Exact combinatorics and representations of the symmetric group.
//!
//! Partitions double as Young diagrams and as cycle types. Irreducible
//! representations are realised in Young's seminormal form over the
//! rationals, so questions such as "does `s_12 + ... + s_1N` act by a
//! scalar" are answered exactly rather than up to rounding.
//!
//! Standard tableaux are listed in *last-letter order*: the largest entry is
//! placed in each removable corner, corners taken from the bottom row
//! upwards, and the remaining entries are ordered recursively. For `(2,1)`
//! this gives `[[1,2],[3]]` before `[[1,3],[2]]`.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use thiserror::Error;

use crate::linalg::{RationalMatrix, Scalarity};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PartitionError {
    #[error("parts must be positive, found {0}")]
    NonPositivePart(i64),
    #[error("parts must be weakly decreasing: {0} is followed by {1}")]
    NotDecreasing(usize, usize),
    #[error("cannot parse partition part {0:?}")]
    Parse(String),
}

/// A Young diagram: weakly decreasing positive parts.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Partition {
    parts: Vec<usize>,
}

impl Partition {
    pub fn new(parts: Vec<usize>) -> Result<Self, PartitionError> {
        if let Some(&p) = parts.iter().find(|&&p| p == 0) {
            return Err(PartitionError::NonPositivePart(p as i64));
        }
        if let Some(w) = parts.windows(2).find(|w| w[0] < w[1]) {
            return Err(PartitionError::NotDecreasing(w[0], w[1]));
        }
        Ok(Self { parts })
    }

    /// Sorts and drops zero parts.
    pub fn from_unsorted(mut parts: Vec<usize>) -> Self {
        parts.retain(|&p| p > 0);
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Self { parts }
    }

    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    /// Number of cells.
    pub fn n(&self) -> usize {
        self.parts.iter().sum()
    }

    /// Number of rows.
    pub fn height(&self) -> usize {
        self.parts.len()
    }

    /// Number of columns.
    pub fn width(&self) -> usize {
        self.parts.first().copied().unwrap_or(0)
    }

    /// `Some((height, width))` when the diagram is a rectangle.
    pub fn rectangle(&self) -> Option<(usize, usize)> {
        match self.parts.first() {
            Some(&w) if self.parts.iter().all(|&p| p == w) => Some((self.parts.len(), w)),
            _ => None,
        }
    }

    /// Removable cells as 1-based `(row, col)`, top row first.
    pub fn corners(&self) -> Vec<(usize, usize)> {
        let h = self.parts.len();
        (0..h)
            .filter(|&i| i + 1 == h || self.parts[i + 1] < self.parts[i])
            .map(|i| (i + 1, self.parts[i]))
            .collect()
    }

    /// Sum of `col - row` over all cells, and the same quantity for each
    /// corner (in [`Partition::corners`] order).
    pub fn contents(&self) -> Contents {
        let total = self
            .parts
            .iter()
            .enumerate()
            .map(|(i, &p)| (0..p).map(|j| j as i64 - i as i64).sum::<i64>())
            .sum();
        let corner_contents = self.corners().into_iter().map(|(r, c)| c as i64 - r as i64).collect();
        Contents { total, corner_contents }
    }

    /// Column lengths.
    pub fn conjugate(&self) -> Partition {
        Partition {
            parts: (0..self.width())
                .map(|j| self.parts.iter().filter(|&&p| p > j).count())
                .collect(),
        }
    }

    /// Dimension of the irreducible representation, `n! / prod(hooks)`.
    pub fn hook_dim(&self) -> u64 {
        let conj = self.conjugate();
        let mut hooks: u128 = 1;
        for (i, &p) in self.parts.iter().enumerate() {
            for j in 0..p {
                let arm = p - j - 1;
                let leg = conj.parts[j] - i - 1;
                hooks *= (arm + leg + 1) as u128;
            }
        }
        (factorial(self.n()) / hooks) as u64
    }

    /// The diagrams obtained by removing one corner, in corner order.
    pub fn branch_restrict(&self) -> Vec<Partition> {
        self.corners()
            .into_iter()
            .map(|(r, _)| {
                let mut parts = self.parts.clone();
                parts[r - 1] -= 1;
                parts.retain(|&p| p > 0);
                Partition { parts }
            })
            .collect()
    }

    /// Multiplicity of each part size: `counts[i]` is the number of parts equal to `i`.
    fn multiplicities(&self) -> Vec<usize> {
        let mut counts = vec![0; self.width() + 1];
        for &p in &self.parts {
            counts[p] += 1;
        }
        counts
    }

    /// Centraliser order `z_t = prod i^{m_i} m_i!` of a permutation with
    /// this cycle type.
    pub fn centralizer_order(&self) -> u128 {
        self.multiplicities()
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, &m)| (i as u128).pow(m as u32) * factorial(m))
            .product()
    }

    /// Size of the conjugacy class of this cycle type in `S_n`.
    pub fn class_size(&self) -> u128 {
        factorial(self.n()) / self.centralizer_order()
    }

    /// A permutation with this cycle type: consecutive blocks, each a cycle.
    pub fn representative(&self) -> Perm {
        let n = self.n();
        let mut image = vec![0; n];
        let mut start = 0;
        for &len in &self.parts {
            for k in 0..len {
                image[start + k] = start + (k + 1) % len;
            }
            start += len;
        }
        Perm(image)
    }
}

impl fmt::Debug for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self)
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: Vec<String> = self.parts.iter().map(usize::to_string).collect();
        write!(f, "{}", s.join(","))
    }
}

impl FromStr for Partition {
    type Err = PartitionError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s.is_empty() {
            return Partition::new(Vec::new());
        }
        let mut parts = Vec::new();
        for tok in s.split(',') {
            let v: i64 = tok.trim().parse().map_err(|_| PartitionError::Parse(tok.to_string()))?;
            if v <= 0 {
                return Err(PartitionError::NonPositivePart(v));
            }
            parts.push(v as usize);
        }
        Partition::new(parts)
    }
}

/// A partition read as the cycle lengths of a permutation.
pub type CycleType = Partition;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Contents {
    pub total: i64,
    pub corner_contents: Vec<i64>,
}

pub fn factorial(n: usize) -> u128 {
    (1..=n as u128).product()
}

/// All partitions of `n` in decreasing lexicographic order.
pub fn partitions_of(n: usize) -> Vec<Partition> {
    fn rec(remaining: usize, max: usize, prefix: &mut Vec<usize>, out: &mut Vec<Partition>) {
        if remaining == 0 {
            out.push(Partition { parts: prefix.clone() });
            return;
        }
        for p in (1..=remaining.min(max)).rev() {
            prefix.push(p);
            rec(remaining - p, p, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, n, &mut Vec::new(), &mut out);
    out
}

/// A permutation of `{0, .., n-1}`; `self.0[k]` is the image of `k`.
/// Composition follows functions: `(a * b)(k) = a(b(k))`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Perm(pub Vec<usize>);

impl Perm {
    pub fn identity(n: usize) -> Self {
        Perm((0..n).collect())
    }

    /// Transposition of positions `i` and `j` (0-based).
    pub fn transposition(n: usize, i: usize, j: usize) -> Self {
        let mut p = Self::identity(n);
        p.0.swap(i, j);
        p
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn apply(&self, k: usize) -> usize {
        self.0[k]
    }

    pub fn compose(&self, other: &Perm) -> Perm {
        Perm(other.0.iter().map(|&k| self.0[k]).collect())
    }

    pub fn inverse(&self) -> Perm {
        let mut inv = vec![0; self.0.len()];
        for (k, &v) in self.0.iter().enumerate() {
            inv[v] = k;
        }
        Perm(inv)
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(k, &v)| k == v)
    }

    pub fn fixed_points(&self) -> usize {
        self.0.iter().enumerate().filter(|(k, &v)| *k == v).count()
    }

    pub fn cycle_type(&self) -> CycleType {
        let n = self.0.len();
        let mut seen = vec![false; n];
        let mut lengths = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut len = 0;
            let mut k = start;
            while !seen[k] {
                seen[k] = true;
                k = self.0[k];
                len += 1;
            }
            lengths.push(len);
        }
        Partition::from_unsorted(lengths)
    }

    /// Word `[b_1, .., b_r]` with `self = s_{b_1} * .. * s_{b_r}`, where
    /// `s_b` swaps positions `b` and `b + 1`.
    pub fn adjacent_word(&self) -> Vec<usize> {
        let mut cur = self.clone();
        let mut word = Vec::new();
        loop {
            let inv = cur.inverse();
            // values b, b+1 appearing out of order; left-multiplying by s_b
            // removes one inversion
            match (0..cur.len().saturating_sub(1)).find(|&b| inv.0[b] > inv.0[b + 1]) {
                Some(b) => {
                    cur = Perm::transposition(cur.len(), b, b + 1).compose(&cur);
                    word.push(b);
                }
                None => return word,
            }
        }
    }

    /// All permutations of `n` letters in lexicographic order of images.
    pub fn all(n: usize) -> Vec<Perm> {
        use itertools::Itertools;
        (0..n).permutations(n).map(Perm).collect()
    }
}

/// Cells `(row, col)` (0-based) of the entries `1..=n`.
pub type Tableau = Vec<(usize, usize)>;

/// Standard Young tableaux of `mu` in last-letter order.
pub fn standard_tableaux(mu: &Partition) -> Vec<Tableau> {
    if mu.n() == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    let corners = mu.corners();
    for &(r, c) in corners.iter().rev() {
        let mut smaller = mu.parts.clone();
        smaller[r - 1] -= 1;
        smaller.retain(|&p| p > 0);
        for mut t in standard_tableaux(&Partition { parts: smaller }) {
            t.push((r - 1, c - 1));
            out.push(t);
        }
    }
    out
}

/// An irreducible representation of `S_N` in Young's seminormal form.
#[derive(Clone, Debug)]
pub struct SeminormalRep {
    pub partition: Partition,
    pub dim: usize,
    pub tableaux: Vec<Tableau>,
    /// Images of `s_1, .., s_{N-1}`; `gens[b]` swaps `b + 1` and `b + 2`.
    pub gens: Vec<RationalMatrix>,
}

#[cfg(test)]
fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// Seminormal matrices of the adjacent transpositions on the standard
/// tableau basis. With `r = c(k+1) - c(k)` the axial distance,
/// `s_k v_T = v_T / r + v_{T'}` when `k` lies in a higher row than `k + 1`,
/// and `s_k v_T = v_T / r + (1 - 1/r^2) v_{T'}` otherwise.
pub fn seminormal_rep(mu: &Partition) -> SeminormalRep {
    let n = mu.n();
    let tableaux = standard_tableaux(mu);
    let dim = tableaux.len();
    let index: HashMap<&Tableau, usize> = tableaux.iter().enumerate().map(|(i, t)| (t, i)).collect();
    let content = |cell: (usize, usize)| cell.1 as i64 - cell.0 as i64;
    let mut gens = Vec::with_capacity(n.saturating_sub(1));
    for b in 0..n.saturating_sub(1) {
        let mut m = RationalMatrix::zeros(dim, dim);
        for (t_idx, t) in tableaux.iter().enumerate() {
            let (lo, hi) = (t[b], t[b + 1]);
            let r = content(hi) - content(lo);
            let a = BigRational::new(BigInt::one(), BigInt::from(r));
            m.set(t_idx, t_idx, a.clone());
            if lo.0 == hi.0 || lo.1 == hi.1 {
                continue;
            }
            let mut swapped = t.clone();
            swapped.swap(b, b + 1);
            let other = index[&swapped];
            let coeff = if lo.0 < hi.0 {
                BigRational::one()
            } else {
                BigRational::one() - &a * &a
            };
            m.set(other, t_idx, coeff);
        }
        gens.push(m);
    }
    SeminormalRep {
        partition: mu.clone(),
        dim,
        tableaux,
        gens,
    }
}

impl SeminormalRep {
    pub fn n(&self) -> usize {
        self.partition.n()
    }

    /// Image of an arbitrary permutation.
    pub fn matrix_of(&self, perm: &Perm) -> RationalMatrix {
        perm.adjacent_word()
            .into_iter()
            .fold(RationalMatrix::identity(self.dim), |acc, b| &acc * &self.gens[b])
    }

    /// Images of all transpositions `(i j)`, `i < j` (0-based), keyed in
    /// lexicographic order.
    pub fn transpositions(&self) -> Vec<((usize, usize), RationalMatrix)> {
        let n = self.n();
        let mut out = Vec::new();
        for i in 0..n {
            if i + 1 >= n {
                break;
            }
            // s_{i,j+1} = s_j s_{i,j} s_j
            let mut cur = self.gens[i].clone();
            out.push(((i, i + 1), cur.clone()));
            for j in (i + 1)..(n - 1) {
                cur = &(&self.gens[j] * &cur) * &self.gens[j];
                out.push(((i, j + 1), cur.clone()));
            }
        }
        out
    }

    /// Image of the sum of all transpositions (central in the group algebra).
    pub fn central_sum(&self) -> RationalMatrix {
        self.transpositions()
            .iter()
            .fold(RationalMatrix::zeros(self.dim, self.dim), |acc, (_, m)| &acc + m)
    }

    /// Image of `C = s_12 + s_13 + .. + s_1N`.
    pub fn star_sum(&self) -> RationalMatrix {
        self.transpositions()
            .iter()
            .filter(|((i, _), _)| *i == 0)
            .fold(RationalMatrix::zeros(self.dim, self.dim), |acc, (_, m)| &acc + m)
    }
}

/// Murnaghan-Nakayama evaluator with a memo keyed by `(shape, cycle type)`.
#[derive(Default)]
pub struct MnCharacters {
    memo: HashMap<(Vec<usize>, Vec<usize>), i64>,
}

impl MnCharacters {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn value(&mut self, mu: &Partition, t: &CycleType) -> i64 {
        assert_eq!(mu.n(), t.n(), "shape and cycle type have different sizes");
        self.rec(&mu.parts, &t.parts)
    }

    fn rec(&mut self, mu: &[usize], cycles: &[usize]) -> i64 {
        let Some((&r, rest)) = cycles.split_first() else {
            return i64::from(mu.is_empty());
        };
        let key = (mu.to_vec(), cycles.to_vec());
        if let Some(&v) = self.memo.get(&key) {
            return v;
        }
        // beta numbers: removing a rim hook of length r moves one bead down by r
        let len = mu.len();
        let beta: Vec<usize> = mu.iter().enumerate().map(|(i, &p)| p + len - 1 - i).collect();
        let mut total = 0;
        for (i, &b) in beta.iter().enumerate() {
            if b < r || beta.contains(&(b - r)) {
                continue;
            }
            let target = b - r;
            let crossed = beta.iter().filter(|&&x| target < x && x < b).count();
            let sign = if crossed % 2 == 0 { 1 } else { -1 };
            let mut next = beta.clone();
            next[i] = target;
            next.sort_unstable_by(|a, b| b.cmp(a));
            let shape: Vec<usize> = next
                .iter()
                .enumerate()
                .map(|(k, &x)| x - (len - 1 - k))
                .filter(|&p| p > 0)
                .collect();
            total += sign * self.rec(&shape, rest);
        }
        self.memo.insert(key, total);
        total
    }
}

/// Character of the irreducible `mu` at a permutation of cycle type `t`.
pub fn mn_character(mu: &Partition, t: &CycleType) -> i64 {
    MnCharacters::new().value(mu, t)
}

/// `dim Hom_{S_N}(h (x) pi_mu, pi_mu)` for the reflection representation
/// `h`, via the character inner product with `chi_h = fix - 1`.
pub fn refl_hom_dim(mu: &Partition) -> usize {
    let n = mu.n();
    let mut chars = MnCharacters::new();
    let mut acc: i128 = 0;
    for t in partitions_of(n) {
        let chi = chars.value(mu, &t) as i128;
        let fix = t.parts.iter().filter(|&&p| p == 1).count() as i128;
        acc += t.class_size() as i128 * (fix - 1) * chi * chi;
    }
    let order = factorial(n) as i128;
    assert_eq!(acc % order, 0, "character inner product must be an integer");
    (acc / order) as usize
}

/// Exact scalarity test for `C = s_12 + .. + s_1N` on `pi_mu`.
pub fn c_operator(mu: &Partition) -> Scalarity {
    seminormal_rep(mu).star_sum().scalarity()
}

/// `psi_W` at a transposition.
pub fn transposition_character(mu: &Partition) -> i64 {
    let n = mu.n();
    if n < 2 {
        return 0;
    }
    let mut parts = vec![2];
    parts.extend(std::iter::repeat_n(1, n - 2));
    mn_character(mu, &Partition { parts })
}
