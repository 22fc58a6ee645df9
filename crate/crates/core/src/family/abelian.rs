//! Finite abelian groups in invariant-factor form and their surjections.

use std::fmt;

use serde::{Deserialize, Serialize};

use super::snf::{integer_kernel, quotient_invariants};
use crate::error::{Error, Result};

/// `Z/d_1 x ... x Z/d_r` with `d_1 | d_2 | ... | d_r`, every `d_i >= 2`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<u64>", into = "Vec<u64>")]
pub struct AbelianGroup {
    factors: Vec<u64>,
}

impl TryFrom<Vec<u64>> for AbelianGroup {
    type Error = Error;
    fn try_from(v: Vec<u64>) -> Result<Self> {
        AbelianGroup::new(v)
    }
}

impl From<AbelianGroup> for Vec<u64> {
    fn from(g: AbelianGroup) -> Self {
        g.factors
    }
}

impl AbelianGroup {
    /// Takes invariant factors exactly; rejects anything that is not a divisor chain.
    pub fn new(factors: Vec<u64>) -> Result<Self> {
        if let Some(d) = factors.iter().find(|&&d| d < 2) {
            return Err(Error::InvalidGroup(format!(
                "invariant factor {d} is below 2"
            )));
        }
        if let Some(w) = factors.windows(2).find(|w| w[1] % w[0] != 0) {
            return Err(Error::InvalidGroup(format!(
                "{} does not divide {}",
                w[0], w[1]
            )));
        }
        Ok(AbelianGroup { factors })
    }

    /// Normalizes any list of cyclic orders, e.g. `[2, 3]` becomes `C6`.
    pub fn from_cyclic_orders(orders: &[u64]) -> Result<Self> {
        if orders.contains(&0) {
            return Err(Error::InvalidGroup("cyclic order 0".into()));
        }
        let n = orders.len();
        let rel: Vec<Vec<i128>> = (0..n)
            .map(|j| {
                (0..n)
                    .map(|i| if i == j { i128::from(orders[i]) } else { 0 })
                    .collect()
            })
            .collect();
        let factors = quotient_invariants(&rel, n)
            .ok_or_else(|| Error::InvalidGroup("infinite group".into()))?;
        AbelianGroup::new(factors)
    }

    pub fn trivial() -> Self {
        AbelianGroup { factors: vec![] }
    }

    pub fn cyclic(n: u64) -> Self {
        if n <= 1 {
            Self::trivial()
        } else {
            AbelianGroup { factors: vec![n] }
        }
    }

    pub fn elementary(p: u64, rank: usize) -> Self {
        AbelianGroup {
            factors: vec![p; rank],
        }
    }

    pub fn factors(&self) -> &[u64] {
        &self.factors
    }

    pub fn rank(&self) -> usize {
        self.factors.len()
    }

    pub fn order(&self) -> u64 {
        self.factors.iter().product()
    }

    pub fn is_trivial(&self) -> bool {
        self.factors.is_empty()
    }

    /// The prime `p` if this is a nontrivial `p`-group.
    pub fn prime(&self) -> Option<u64> {
        let p = smallest_prime_factor(*self.factors.first()?);
        self.factors.iter().all(|&d| is_power_of(d, p)).then_some(p)
    }

    pub fn label(&self) -> String {
        if self.factors.is_empty() {
            return "1".into();
        }
        self.factors
            .iter()
            .map(|d| format!("C{d}"))
            .collect::<Vec<_>>()
            .join("x")
    }

    /// All elements as coordinate tuples, lexicographic.
    pub fn elements(&self) -> Vec<Vec<u64>> {
        let mut out = vec![vec![]];
        for &d in &self.factors {
            out = out
                .into_iter()
                .flat_map(|prefix| {
                    (0..d).map(move |x| {
                        let mut v = prefix.clone();
                        v.push(x);
                        v
                    })
                })
                .collect();
        }
        out
    }
}

impl fmt::Display for AbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

fn smallest_prime_factor(n: u64) -> u64 {
    (2..=n).find(|d| n.is_multiple_of(*d)).unwrap_or(n)
}

fn is_power_of(mut n: u64, p: u64) -> bool {
    while n.is_multiple_of(p) {
        n /= p;
    }
    n == 1
}

pub fn is_prime(p: u64) -> bool {
    p >= 2 && smallest_prime_factor(p) == p
}

/// A homomorphism `H -> G` as the `rank(G) x rank(H)` integer matrix whose
/// column `j` is the image of the `j`-th generator of `H`, row `i` reduced
/// modulo the `i`-th invariant factor of `G`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct HomMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<i64>,
}

impl HomMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<i64>) -> Self {
        assert_eq!(entries.len(), rows * cols);
        HomMatrix {
            rows,
            cols,
            entries,
        }
    }

    pub fn identity(g: &AbelianGroup) -> Self {
        let n = g.rank();
        let entries = (0..n * n).map(|k| i64::from(k / n == k % n)).collect();
        HomMatrix {
            rows: n,
            cols: n,
            entries,
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn entries(&self) -> &[i64] {
        &self.entries
    }

    pub fn get(&self, r: usize, c: usize) -> i64 {
        self.entries[r * self.cols + c]
    }

    /// `self ∘ inner`, reduced modulo the target's invariant factors.
    pub fn compose(&self, inner: &HomMatrix, target: &AbelianGroup) -> HomMatrix {
        assert_eq!(self.cols, inner.rows, "composable shapes");
        let mut entries = vec![0i64; self.rows * inner.cols];
        for i in 0..self.rows {
            let d = target.factors()[i] as i64;
            for j in 0..inner.cols {
                let mut acc: i64 = 0;
                for k in 0..self.cols {
                    acc = (acc + self.get(i, k) * inner.get(k, j)) % d;
                }
                entries[i * inner.cols + j] = acc.rem_euclid(d);
            }
        }
        HomMatrix {
            rows: self.rows,
            cols: inner.cols,
            entries,
        }
    }

    /// Image of an element of the source.
    pub fn apply(&self, x: &[u64], target: &AbelianGroup) -> Vec<u64> {
        (0..self.rows)
            .map(|i| {
                let d = target.factors()[i];
                (0..self.cols).fold(0u64, |acc, j| (acc + (self.get(i, j) as u64) * x[j]) % d)
            })
            .collect()
    }

    pub fn label_entries(&self) -> String {
        let rows: Vec<String> = (0..self.rows)
            .map(|r| {
                (0..self.cols)
                    .map(|c| self.get(r, c).to_string())
                    .collect::<Vec<_>>()
                    .join(",")
            })
            .collect();
        format!("[{}]", rows.join(";"))
    }
}

/// Isomorphism type of the subgroup of `g` generated by the given elements.
pub fn subgroup_type(g: &AbelianGroup, generators: &[Vec<u64>]) -> AbelianGroup {
    let n = g.rank();
    let m = generators.len();
    if m == 0 || n == 0 {
        return AbelianGroup::trivial();
    }
    // The subgroup is Z^m / K with K = { x : M x ∈ diag(d) Z^n },
    // i.e. the projection of ker_Z [M | diag(d)] onto the first m coordinates.
    let a: Vec<Vec<i128>> = (0..n)
        .map(|i| {
            let mut row: Vec<i128> = generators
                .iter()
                .map(|gen| i128::from(gen[i] as i64))
                .collect();
            row.extend((0..n).map(|k| {
                if k == i {
                    i128::from(g.factors()[i])
                } else {
                    0
                }
            }));
            row
        })
        .collect();
    let kernel = integer_kernel(&a, m + n);
    let relations: Vec<Vec<i128>> = kernel.into_iter().map(|v| v[..m].to_vec()).collect();
    let factors = quotient_invariants(&relations, m).expect("subgroup of a finite group is finite");
    AbelianGroup { factors }
}

/// Whether the columns of `hom` generate all of `target`.
pub fn is_surjective(hom: &HomMatrix, target: &AbelianGroup) -> bool {
    if target.is_trivial() {
        return true;
    }
    if let Some(p) = target.prime() {
        // For a p-group, S = G iff S + pG = G, and G/pG is F_p^rank.
        return rank_mod_p(hom, p) == target.rank();
    }
    let gens: Vec<Vec<u64>> = (0..hom.cols())
        .map(|j| (0..hom.rows()).map(|i| hom.get(i, j) as u64).collect())
        .collect();
    subgroup_type(target, &gens) == *target
}

fn rank_mod_p(hom: &HomMatrix, p: u64) -> usize {
    let p = p as i64;
    let mut rows: Vec<Vec<i64>> = (0..hom.rows())
        .map(|i| {
            (0..hom.cols())
                .map(|j| hom.get(i, j).rem_euclid(p))
                .collect()
        })
        .collect();
    let mut rank = 0;
    for c in 0..hom.cols() {
        let Some(pr) = (rank..rows.len()).find(|&r| rows[r][c] != 0) else {
            continue;
        };
        rows.swap(rank, pr);
        let inv = mod_inverse(rows[rank][c], p);
        for x in rows[rank].iter_mut() {
            *x = (*x * inv).rem_euclid(p);
        }
        let pivot = rows[rank].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            if r != rank && row[c] != 0 {
                let k = row[c];
                for (x, y) in row.iter_mut().zip(&pivot) {
                    *x = (*x - k * y).rem_euclid(p);
                }
            }
        }
        rank += 1;
    }
    rank
}

fn mod_inverse(a: i64, p: i64) -> i64 {
    (1..p)
        .find(|x| (a * x).rem_euclid(p) == 1)
        .expect("nonzero residue mod a prime")
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// All surjective homomorphisms `h -> g`, sorted lexicographically by matrix entries.
pub fn enumerate_surjections(h: &AbelianGroup, g: &AbelianGroup) -> Vec<HomMatrix> {
    if h.order() < g.order() || !h.order().is_multiple_of(g.order()) {
        return vec![];
    }
    let (rows, cols) = (g.rank(), h.rank());
    // Column j may be any element killed by the order of the j-th generator:
    // coordinate i ranges over multiples of d_i / gcd(d_i, e_j).
    let column_choices: Vec<Vec<Vec<i64>>> = h
        .factors()
        .iter()
        .map(|&e| {
            let mut cols: Vec<Vec<i64>> = vec![vec![]];
            for &d in g.factors() {
                let step = d / gcd(d, e);
                cols = cols
                    .into_iter()
                    .flat_map(|prefix| {
                        (0..d).step_by(step as usize).map(move |x| {
                            let mut v = prefix.clone();
                            v.push(x as i64);
                            v
                        })
                    })
                    .collect();
            }
            cols
        })
        .collect();

    let mut out = Vec::new();
    let mut idx = vec![0usize; cols];
    if column_choices.iter().any(Vec::is_empty) {
        return out;
    }
    loop {
        let mut entries = vec![0i64; rows * cols];
        for (j, &k) in idx.iter().enumerate() {
            for (i, &x) in column_choices[j][k].iter().enumerate() {
                entries[i * cols + j] = x;
            }
        }
        let hom = HomMatrix::new(rows, cols, entries);
        if is_surjective(&hom, g) {
            out.push(hom);
        }
        // Odometer over column choices.
        let mut j = cols;
        loop {
            if j == 0 {
                out.sort();
                return out;
            }
            j -= 1;
            idx[j] += 1;
            if idx[j] < column_choices[j].len() {
                break;
            }
            idx[j] = 0;
        }
    }
}

/// Abelian `p`-groups of order at most `bound`, as partitions of the exponent.
pub fn abelian_p_groups(p: u64, bound: u64) -> Vec<AbelianGroup> {
    let mut out = vec![AbelianGroup::trivial()];
    let mut k = 1u32;
    while p.checked_pow(k).is_some_and(|o| o <= bound) {
        for part in partitions(k, k) {
            // Partition parts descending; invariant factors ascending.
            let mut factors: Vec<u64> = part.iter().map(|&e| p.pow(e)).collect();
            factors.sort();
            out.push(AbelianGroup { factors });
        }
        k += 1;
    }
    out
}

fn partitions(n: u32, max_part: u32) -> Vec<Vec<u32>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for first in (1..=max_part.min(n)).rev() {
        for mut rest in partitions(n - first, first) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}
