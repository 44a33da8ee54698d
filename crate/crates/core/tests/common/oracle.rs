//! Exhaustive subgroup search, independent of the library's enumeration.
//!
//! Small-integer arithmetic only. For G = ⊕ Z/n_i the subgroups of index |C|
//! are the Hermite-form lattices L ⊇ ⊕ n_i Z of that index; each is checked
//! for L/⊕n_iZ ≅ A and Z^k/L ≅ C.

#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

/// Invariant factors (> 1) of the cokernel of an integer matrix, by naive elimination.
pub fn invariant_factors(mut m: Vec<Vec<i64>>, cols: usize) -> Vec<i64> {
    let rows = m.len();
    let mut diag = Vec::new();
    let mut t = 0;
    while t < rows.min(cols) {
        // smallest nonzero entry in the remaining block
        let mut best: Option<(usize, usize)> = None;
        for r in t..rows {
            for c in t..cols {
                if m[r][c] != 0 && best.is_none_or(|(br, bc)| m[r][c].abs() < m[br][bc].abs()) {
                    best = Some((r, c));
                }
            }
        }
        let Some((pr, pc)) = best else { break };
        m.swap(t, pr);
        for row in m.iter_mut() {
            row.swap(t, pc);
        }
        let p = m[t][t];
        let mut clean = true;
        for r in t + 1..rows {
            let q = m[r][t] / p;
            if q != 0 {
                let pivot = m[t].clone();
                for (x, y) in m[r][t..cols].iter_mut().zip(&pivot[t..cols]) {
                    *x -= q * y;
                }
            }
            if m[r][t] != 0 {
                clean = false;
            }
        }
        for c in t + 1..cols {
            let q = m[t][c] / p;
            if q != 0 {
                for row in &mut m[t..rows] {
                    row[c] -= q * row[t];
                }
            }
            if m[t][c] != 0 {
                clean = false;
            }
        }
        if clean {
            diag.push(p.abs());
            t += 1;
        }
    }
    diag.extend(std::iter::repeat_n(0, cols - diag.len()));
    // Diagonal to invariant factors: d_i d_j -> gcd, lcm repeatedly.
    for i in 0..diag.len() {
        for j in i + 1..diag.len() {
            let (a, b) = (diag[i], diag[j]);
            let g = gcd(a, b);
            if g != 0 {
                diag[i] = g;
                diag[j] = a / g * b;
            }
        }
    }
    diag.into_iter().filter(|&d| d != 1).collect()
}

fn divisors(n: i64) -> Vec<i64> {
    (1..=n).filter(|d| n % d == 0).collect()
}

fn factor(mut n: i64) -> Vec<(i64, u32)> {
    let mut out = Vec::new();
    let mut p = 2;
    while n > 1 {
        let mut e = 0;
        while n % p == 0 {
            n /= p;
            e += 1;
        }
        if e > 0 {
            out.push((p, e));
        }
        p += 1;
    }
    out
}

pub fn partitions(n: u32) -> Vec<Vec<u32>> {
    fn go(n: u32, max: u32) -> Vec<Vec<u32>> {
        if n == 0 {
            return vec![vec![]];
        }
        let mut out = Vec::new();
        for p in (1..=n.min(max)).rev() {
            for mut rest in go(n - p, p) {
                rest.insert(0, p);
                out.push(rest);
            }
        }
        out
    }
    go(n, n)
}

pub fn abelian_groups_of_order(n: i64) -> Vec<Vec<i64>> {
    let mut groups: Vec<Vec<i64>> = vec![vec![]];
    for (p, e) in factor(n) {
        let mut next = Vec::new();
        for g in &groups {
            for lambda in partitions(e) {
                let mut h = g.clone();
                h.extend(lambda.iter().map(|&x| p.pow(x)));
                next.push(h);
            }
        }
        groups = next;
    }
    groups
}

pub fn canonical(orders: &[i64]) -> Vec<i64> {
    let k = orders.len();
    let m: Vec<Vec<i64>> = (0..k)
        .map(|i| (0..k).map(|j| if i == j { orders[i] } else { 0 }).collect())
        .collect();
    invariant_factors(m, k)
}

pub fn all_groups_up_to(bound: i64) -> Vec<Vec<i64>> {
    (1..=bound)
        .flat_map(abelian_groups_of_order)
        .map(|g| canonical(&g))
        .collect()
}

fn exponent(orders: &[i64]) -> i64 {
    orders.iter().fold(1, |acc, &d| acc / gcd(acc, d) * d)
}

struct Search<'a> {
    n: &'a [i64],
    a: &'a [i64],
    c: &'a [i64],
    exp_a: i64,
    exp_c: i64,
    h: Vec<Vec<i64>>,
    /// Complete lattices reached, for reporting search sizes.
    nodes: u64,
}

impl Search<'_> {
    /// Is `v` (zero before column `from`) in the span of rows `from..` of h?
    fn in_span(&self, from: usize, mut v: Vec<i64>) -> bool {
        for col in from..v.len() {
            let d = self.h[col][col];
            if v[col] % d != 0 {
                return false;
            }
            let q = v[col] / d;
            if q != 0 {
                for (x, y) in v[col..].iter_mut().zip(&self.h[col][col..]) {
                    *x -= q * y;
                }
            }
        }
        true
    }

    /// Rows are filled bottom-up. Once row i is fixed, rows i.. span
    /// L ∩ ⟨e_i, …⟩. Necessary conditions checked along the way:
    /// exp(A)·L ⊆ ⊕n_jZ (entry-local), exp(C)·e_i, n_i·e_i ∈ L, and the
    /// partial subgroup and quotient embed in A and C.
    fn rows(&mut self, i: usize, left: i64) -> bool {
        let Some(i) = i.checked_sub(1) else {
            return left == 1 && self.finish();
        };
        for d in divisors(self.n[i]) {
            if left % d == 0 && (self.exp_a * d) % self.n[i] == 0 {
                self.h[i][i] = d;
                if self.entries(i, i + 1, left / d) {
                    return true;
                }
            }
        }
        false
    }

    fn entries(&mut self, i: usize, j: usize, left: i64) -> bool {
        let k = self.n.len();
        if j == k {
            return self.row_ok(i) && self.rows(i, left);
        }
        for v in 0..self.h[j][j] {
            if (self.exp_a * v) % self.n[j] != 0 {
                continue;
            }
            self.h[i][j] = v;
            if self.entries(i, j + 1, left) {
                self.h[i][j] = 0;
                return true;
            }
        }
        self.h[i][j] = 0;
        false
    }

    fn row_ok(&self, i: usize) -> bool {
        let k = self.n.len();
        let mut e = vec![0i64; k];
        e[i] = self.n[i];
        if !self.in_span(i, e) {
            return false;
        }
        let mut e = vec![0i64; k];
        e[i] = self.exp_c;
        if !self.in_span(i, e) {
            return false;
        }
        // ⟨e_i, …⟩ / (L ∩ ⟨e_i, …⟩) embeds in Z^k/L, and
        // (L ∩ ⟨e_i, …⟩) / (R ∩ ⟨e_i, …⟩) embeds in L/R.
        let tail: Vec<Vec<i64>> = self.h[i..].iter().map(|r| r[i..].to_vec()).collect();
        if !embeds(&invariant_factors(tail, k - i), self.c) {
            return false;
        }
        match self.relation_coords(i) {
            Some(coords) => embeds(&invariant_factors(coords, k - i), self.a),
            None => false,
        }
    }

    /// Coordinates of n_j e_j (j ≥ i) in the basis of rows i.. of h.
    fn relation_coords(&self, i: usize) -> Option<Vec<Vec<i64>>> {
        let k = self.n.len();
        let mut coords = Vec::with_capacity(k - i);
        for j in i..k {
            let mut x = vec![0i64; k - i];
            for col in i..k {
                let partial: i64 = (i..col).map(|l| x[l - i] * self.h[l][col]).sum();
                let target = if col == j { self.n[j] } else { 0 };
                let rest = target - partial;
                if rest % self.h[col][col] != 0 {
                    return None;
                }
                x[col - i] = rest / self.h[col][col];
            }
            coords.push(x);
        }
        Some(coords)
    }

    fn finish(&mut self) -> bool {
        self.nodes += 1;
        let k = self.n.len();
        if invariant_factors(self.h.clone(), k) != self.c {
            return false;
        }
        self.relation_coords(0)
            .is_some_and(|coords| invariant_factors(coords, k) == self.a)
    }
}

/// Is a group with invariant factors `h` isomorphic to a subgroup of one
/// with invariant factors `g`? Both lists ascending.
fn embeds(h: &[i64], g: &[i64]) -> bool {
    h.len() <= g.len() && h.iter().rev().zip(g.iter().rev()).all(|(x, y)| y % x == 0)
}

/// Does G = ⊕ Z/n_i (canonical) contain a subgroup of type `a` with quotient of type `c`?
pub fn realizes(n: &[i64], a: &[i64], c: &[i64]) -> bool {
    realizes_counting(n, a, c).0
}

pub fn realizes_counting(n: &[i64], a: &[i64], c: &[i64]) -> (bool, u64) {
    // A is a subgroup and C a quotient, hence also a subgroup, of G.
    if !embeds(a, n) || !embeds(c, n) {
        return (false, 0);
    }
    let k = n.len();
    let mut s = Search {
        n,
        a,
        c,
        exp_a: exponent(a),
        exp_c: exponent(c),
        h: vec![vec![0i64; k]; k],
        nodes: 0,
    };
    let index: i64 = c.iter().product();
    let found = s.rows(k, index);
    (found, s.nodes)
}

/// All middle groups, by searching every abelian group of order |A|·|C|.
pub fn oracle(a: &[i64], c: &[i64]) -> Vec<Vec<i64>> {
    let order: i64 = a.iter().product::<i64>() * c.iter().product::<i64>();
    let ca = canonical(a);
    let cc = canonical(c);
    // d(G) ≤ d(A) + d(C), so higher-rank groups need no search.
    let max_rank = ca.len() + cc.len();
    let mut out: Vec<Vec<i64>> = abelian_groups_of_order(order)
        .into_iter()
        .map(|g| canonical(&g))
        .filter(|g| g.len() <= max_rank && realizes(g, &ca, &cc))
        .collect();
    out.sort();
    out
}

/// p-primary component of a canonical group, as a partition of exponents.
pub fn primary_partition(g: &[i64], p: i64) -> Vec<u32> {
    let mut out: Vec<u32> = g
        .iter()
        .map(|&d| {
            let mut e = 0;
            let mut d = d;
            while d % p == 0 {
                d /= p;
                e += 1;
            }
            e
        })
        .filter(|&e| e > 0)
        .collect();
    out.sort_unstable_by(|x, y| y.cmp(x));
    out
}

/// Type of (A ⊕ Z^s)/⟨c_j f_j − Σ_i x_ji e_i⟩, an extension of C by A.
pub fn extension_type(a: &[i64], c: &[i64], x: &[Vec<i64>]) -> Vec<i64> {
    let (r, s) = (a.len(), c.len());
    let mut m = vec![vec![0i64; r + s]; r + s];
    for (i, &ai) in a.iter().enumerate() {
        m[i][i] = ai;
    }
    for (j, &cj) in c.iter().enumerate() {
        m[r + j][r + j] = cj;
        for i in 0..r {
            m[r + j][i] = -x[j][i];
        }
    }
    invariant_factors(m, r + s)
}

/// (p, type of A, type of C)
type MemoKey = (i64, Vec<u32>, Vec<u32>);

/// Subgroups and quotients split along primes, so the middle groups of a
/// pair are products of per-prime answers, memoized by (p, type A_p, type C_p).
///
/// A type is accepted when a sampled presentation (A ⊕ Z^s)/⟨c_j f_j − x_j⟩
/// has it (A injects and the quotient is C for any choice of x_j), or when
/// the lattice search finds a subgroup. Types are rejected only by an
/// exhausted search.
#[derive(Default)]
pub struct PrimaryOracle {
    memo: BTreeMap<MemoKey, Vec<Vec<u32>>>,
    pub nodes: u64,
    pub searched: u64,
}

/// Extension classes sampled per (A, C) before falling back to search.
const SAMPLES: usize = 400;

impl PrimaryOracle {
    pub fn middle_types(&mut self, p: i64, mu: &[u32], nu: &[u32]) -> Vec<Vec<u32>> {
        let key = (p, mu.to_vec(), nu.to_vec());
        if let Some(v) = self.memo.get(&key) {
            return v.clone();
        }
        let pow = |e: &[u32]| -> Vec<i64> {
            let mut v: Vec<i64> = e.iter().map(|&x| p.pow(x)).collect();
            v.sort();
            v
        };
        let (a, c) = (pow(mu), pow(nu));
        let mut witnessed = BTreeSet::new();
        let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
        for sample in 0..SAMPLES {
            // Vary sparsity so that low-rank gluing data gets sampled too.
            let density = [0, 1, 2, 4, 8][sample % 5];
            let x: Vec<Vec<i64>> = c
                .iter()
                .map(|&cj| {
                    a.iter()
                        .map(|&ai| {
                            let g = gcd(ai, cj);
                            if rng.gen_range(0..8) < density {
                                rng.gen_range(0..g) * (ai / g)
                            } else {
                                0
                            }
                        })
                        .collect()
                })
                .collect();
            witnessed.insert(extension_type(&a, &c, &x));
        }
        let size: u32 = mu.iter().sum::<u32>() + nu.iter().sum::<u32>();
        let mut out = Vec::new();
        for lambda in partitions(size) {
            if lambda.len() > mu.len() + nu.len() {
                continue;
            }
            let n = pow(&lambda);
            if witnessed.contains(&n) {
                out.push(lambda);
                continue;
            }
            let (found, nodes) = realizes_counting(&n, &a, &c);
            self.nodes += nodes;
            self.searched += 1;
            if found {
                out.push(lambda);
            }
        }
        self.memo.insert(key, out.clone());
        out
    }

    /// Sorted canonical middle groups of (A, C).
    pub fn middle_groups(&mut self, a: &[i64], c: &[i64]) -> Vec<Vec<i64>> {
        let order: i64 = a.iter().product::<i64>() * c.iter().product::<i64>();
        let mut acc: Vec<Vec<i64>> = vec![vec![]];
        for (p, _) in factor(order) {
            let types = self.middle_types(p, &primary_partition(a, p), &primary_partition(c, p));
            let mut next = Vec::new();
            for g in &acc {
                for t in &types {
                    let mut h = g.clone();
                    h.extend(t.iter().map(|&e| p.pow(e)));
                    next.push(h);
                }
            }
            acc = next;
        }
        let mut out: Vec<Vec<i64>> = acc.iter().map(|g| canonical(g)).collect();
        out.sort();
        out
    }
}
