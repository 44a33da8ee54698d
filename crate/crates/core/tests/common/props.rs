//! Property checks shared by the proptest suite and the counted acceptance runs.

#![allow(dead_code)]

use cohomotopy::abelian::{smith_normal_form, GroupHom, IntMatrix, PresentedGroup};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn big(v: &[i64]) -> Vec<BigInt> {
    v.iter().map(|&x| BigInt::from(x)).collect()
}

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        if !$cond {
            return Err(format!($($fmt)+));
        }
    };
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    if n < k {
        return vec![];
    }
    let mut out = subsets(n - 1, k);
    for mut s in subsets(n - 1, k - 1) {
        s.push(n - 1);
        out.push(s);
    }
    out
}

// Cofactor expansion; the matrices here are at most 4x4.
fn det(rows: &[Vec<BigInt>]) -> BigInt {
    let n = rows.len();
    if n == 0 {
        return BigInt::from(1);
    }
    let mut total = BigInt::zero();
    for j in 0..n {
        let minor: Vec<Vec<BigInt>> = rows[1..]
            .iter()
            .map(|r| {
                r.iter()
                    .enumerate()
                    .filter(|(c, _)| *c != j)
                    .map(|(_, x)| x.clone())
                    .collect()
            })
            .collect();
        let term = &rows[0][j] * det(&minor);
        if j % 2 == 0 {
            total += term;
        } else {
            total -= term;
        }
    }
    total
}

/// gcd of all k×k minors, for k = 1..min(r, c).
pub fn determinantal_divisors(m: &IntMatrix) -> Vec<BigInt> {
    let kmax = m.rows().min(m.cols());
    (1..=kmax)
        .map(|k| {
            let mut g = BigInt::zero();
            for rs in subsets(m.rows(), k) {
                for cs in subsets(m.cols(), k) {
                    let sub: Vec<Vec<BigInt>> = rs
                        .iter()
                        .map(|&r| cs.iter().map(|&c| m.get(r, c).clone()).collect())
                        .collect();
                    g = g.gcd(&det(&sub));
                }
            }
            g
        })
        .collect()
}

/// u·m·v = d, u and v unimodular, d diagonal with d_i | d_{i+1}, and the
/// products of leading entries equal the determinantal divisors.
pub fn check_smith(m: &IntMatrix) -> Result<(), String> {
    let s = smith_normal_form(m);
    ensure!(s.u.is_unimodular(), "u not unimodular for {m:?}");
    ensure!(s.v.is_unimodular(), "v not unimodular for {m:?}");
    ensure!(&(&s.u * m) * &s.v == s.d, "u m v != d for {m:?}");
    ensure!(s.d.is_diagonal(), "d not diagonal for {m:?}");
    let diag = s.diagonal();
    for w in diag.windows(2) {
        ensure!(
            w[1].is_zero() || (!w[0].is_zero() && (&w[1] % &w[0]).is_zero()),
            "divisibility fails on {diag:?}"
        );
    }
    ensure!(
        diag.iter().all(|d| !d.is_negative()),
        "negative diagonal {diag:?}"
    );
    let mut prod = BigInt::from(1);
    for (k, dk) in determinantal_divisors(m).iter().enumerate() {
        prod *= &diag[k];
        ensure!(&prod == dk, "minor gcd {k}: {prod} vs {dk} for {m:?}");
    }
    Ok(())
}

/// Random elementary row and column moves leave the canonical group unchanged.
pub fn check_presentation_invariance(m: &IntMatrix, seed: u64) -> Result<(), String> {
    let (r, c) = (m.rows(), m.cols());
    let g = PresentedGroup::new(m.clone(), c).canonical().clone();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut w = m.clone();
    for _ in 0..8 {
        if r >= 2 && rng.gen_bool(0.5) {
            let (a, b) = (rng.gen_range(0..r), rng.gen_range(0..r));
            if a != b {
                w.add_row_multiple(a, b, &BigInt::from(rng.gen_range(-3..=3)));
            }
        } else if c >= 2 {
            let (a, b) = (rng.gen_range(0..c), rng.gen_range(0..c));
            if a != b {
                w.add_col_multiple(a, b, &BigInt::from(rng.gen_range(-3..=3)));
            }
        }
    }
    let moved = PresentedGroup::new(w, c).canonical().clone();
    ensure!(moved == g, "{g} became {moved}");
    Ok(())
}

/// A random well-defined homomorphism between cyclic sums (0 = free): source
/// generator i of order d_i goes to an element killed by d_i.
pub fn random_hom(src: &[u64], tgt: &[u64], seed: u64) -> GroupHom {
    let s = PresentedGroup::cyclic_sum_u64(src);
    let t = PresentedGroup::cyclic_sum_u64(tgt);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let rows: Vec<Vec<i64>> = src
        .iter()
        .map(|&d| {
            tgt.iter()
                .map(|&e| {
                    let x = rng.gen_range(-5i64..=5);
                    match (d, e) {
                        (_, 0) if d != 0 => 0,
                        (0, _) => x,
                        (d, e) => x * (e as i64 / (d as i64).gcd(&(e as i64))),
                    }
                })
                .collect()
        })
        .collect();
    GroupHom::new(s, t, IntMatrix::from_rows(tgt.len(), &rows)).expect("matrix respects orders")
}

/// source / kernel ≅ image, with orders and ranks adding up.
pub fn check_first_isomorphism(h: &GroupHom) -> Result<(), String> {
    let s = h.source();
    let t = h.target();
    let quotient = s
        .quotient(&h.kernel_subgroup().generators)
        .map_err(|e| e.to_string())?
        .canonical()
        .clone();
    ensure!(
        quotient == h.image(),
        "source/ker = {quotient}, image = {}",
        h.image()
    );
    if s.canonical().is_finite() && t.canonical().is_finite() {
        ensure!(
            h.kernel().torsion_order() * h.image().torsion_order() == s.canonical().torsion_order(),
            "|ker| |im| != |source|"
        );
    }
    ensure!(
        h.image().free_rank() + h.cokernel().free_rank() == t.canonical().free_rank(),
        "ranks of image and cokernel do not add up"
    );
    Ok(())
}

pub fn random_matrix(rng: &mut ChaCha8Rng) -> IntMatrix {
    let (r, c) = (rng.gen_range(0..5usize), rng.gen_range(0..5usize));
    let data: Vec<i64> = (0..r * c).map(|_| rng.gen_range(-12..12)).collect();
    IntMatrix::from_vec(r, c, big(&data))
}

pub const CYCLIC_ORDERS: [u64; 8] = [0, 2, 3, 4, 6, 8, 9, 12];

pub fn random_orders(rng: &mut ChaCha8Rng) -> Vec<u64> {
    let len = rng.gen_range(0..4);
    (0..len)
        .map(|_| CYCLIC_ORDERS[rng.gen_range(0..CYCLIC_ORDERS.len())])
        .collect()
}
