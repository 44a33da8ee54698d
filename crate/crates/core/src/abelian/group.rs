use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::lattice::Lattice;
use super::matrix::IntMatrix;
use super::smith::{smith_normal_form, SmithDecomposition};
use super::AbelianError;

/// Order of a group element or of a group.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Order {
    Finite(BigInt),
    Infinite,
}

impl Order {
    pub fn finite(n: u64) -> Self {
        Order::Finite(BigInt::from(n))
    }

    pub fn as_finite(&self) -> Option<&BigInt> {
        match self {
            Order::Finite(n) => Some(n),
            Order::Infinite => None,
        }
    }
}

impl fmt::Display for Order {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Order::Finite(n) => write!(f, "{n}"),
            Order::Infinite => write!(f, "inf"),
        }
    }
}

/// A finitely generated abelian group in invariant-factor form:
/// `Z^free_rank ⊕ Z/d1 ⊕ … ⊕ Z/dk` with `2 ≤ d1 | d2 | … | dk`.
///
/// The representation is canonical, so `==` is group isomorphism.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FinAbGroup {
    free_rank: usize,
    torsion: Vec<BigInt>,
}

impl FinAbGroup {
    pub fn trivial() -> Self {
        FinAbGroup {
            free_rank: 0,
            torsion: Vec::new(),
        }
    }

    pub fn free(rank: usize) -> Self {
        FinAbGroup {
            free_rank: rank,
            torsion: Vec::new(),
        }
    }

    pub fn cyclic(n: u64) -> Self {
        Self::from_cyclic_orders(0, &[BigInt::from(n)])
    }

    /// Canonical form of `Z^free ⊕ ⊕ Z/orders[i]`. Orders may be arbitrary
    /// positive integers in any order; 1s vanish and 0 counts as a free summand.
    pub fn from_cyclic_orders(free: usize, orders: &[BigInt]) -> Self {
        let diag: Vec<BigInt> = orders.iter().map(|o| o.abs()).collect();
        let free_extra = diag.iter().filter(|d| d.is_zero()).count();
        let finite: Vec<BigInt> = diag.into_iter().filter(|d| !d.is_zero()).collect();
        let m = IntMatrix::diagonal(finite.len(), finite.len(), &finite);
        let g = group_from_presentation(&m, finite.len());
        FinAbGroup {
            free_rank: free + free_extra + g.free_rank,
            torsion: g.torsion,
        }
    }

    pub fn from_u64(free: usize, orders: &[u64]) -> Self {
        let v: Vec<BigInt> = orders.iter().map(|&o| BigInt::from(o)).collect();
        Self::from_cyclic_orders(free, &v)
    }

    pub fn free_rank(&self) -> usize {
        self.free_rank
    }

    pub fn torsion(&self) -> &[BigInt] {
        &self.torsion
    }

    pub fn is_trivial(&self) -> bool {
        self.free_rank == 0 && self.torsion.is_empty()
    }

    pub fn is_finite(&self) -> bool {
        self.free_rank == 0
    }

    pub fn torsion_order(&self) -> BigInt {
        self.torsion.iter().fold(BigInt::one(), |acc, d| acc * d)
    }

    pub fn order(&self) -> Order {
        if self.free_rank > 0 {
            Order::Infinite
        } else {
            Order::Finite(self.torsion_order())
        }
    }

    /// Torsion subgroup.
    pub fn torsion_part(&self) -> FinAbGroup {
        FinAbGroup {
            free_rank: 0,
            torsion: self.torsion.clone(),
        }
    }

    /// p-primary part for a prime `p` (free summands dropped).
    pub fn primary_part(&self, p: &BigInt) -> FinAbGroup {
        let orders: Vec<BigInt> = self.torsion.iter().map(|d| p_power_part(d, p)).collect();
        FinAbGroup::from_cyclic_orders(0, &orders)
    }

    /// Torsion coprime to `p` (free summands dropped).
    pub fn prime_to_part(&self, p: &BigInt) -> FinAbGroup {
        let orders: Vec<BigInt> = self
            .torsion
            .iter()
            .map(|d| d / p_power_part(d, p))
            .collect();
        FinAbGroup::from_cyclic_orders(0, &orders)
    }

    /// Cyclic orders of the elementary-divisor (prime power) decomposition,
    /// sorted by prime, then by decreasing exponent.
    pub fn elementary_divisors(&self) -> Vec<(BigInt, u32)> {
        let pd = primary_decomposition(self);
        let mut out = Vec::new();
        for (p, part) in pd.parts {
            let mut exps: Vec<u32> = part.torsion.iter().map(|q| multiplicity(q, &p)).collect();
            exps.sort_unstable_by(|a, b| b.cmp(a));
            out.extend(exps.into_iter().map(|e| (p.clone(), e)));
        }
        out
    }

    /// Canonical ASCII rendering such as `Z + Z/8 + Z/2`, or `0`.
    pub fn canonical_string(&self) -> String {
        let mut terms: Vec<String> = Vec::new();
        match self.free_rank {
            0 => {}
            1 => terms.push("Z".into()),
            r => terms.push(format!("Z^{r}")),
        }
        terms.extend(self.torsion.iter().map(|d| format!("Z/{d}")));
        if terms.is_empty() {
            "0".into()
        } else {
            terms.join(" + ")
        }
    }
}

impl fmt::Display for FinAbGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.canonical_string())
    }
}

impl fmt::Debug for FinAbGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FinAbGroup({})", self.canonical_string())
    }
}

fn p_power_part(n: &BigInt, p: &BigInt) -> BigInt {
    let mut n = n.abs();
    let mut out = BigInt::one();
    while !n.is_zero() && n.is_multiple_of(p) {
        n /= p;
        out *= p;
    }
    out
}

fn multiplicity(n: &BigInt, p: &BigInt) -> u32 {
    let mut n = n.abs();
    let mut e = 0;
    while !n.is_zero() && n.is_multiple_of(p) {
        n /= p;
        e += 1;
    }
    e
}

/// Prime factors of `n > 0` by trial division, ascending, without multiplicity.
pub fn prime_factors(n: &BigInt) -> Vec<BigInt> {
    let mut n = n.abs();
    let mut out = Vec::new();
    let mut p = BigInt::from(2);
    while &p * &p <= n {
        if n.is_multiple_of(&p) {
            out.push(p.clone());
            while n.is_multiple_of(&p) {
                n /= &p;
            }
        }
        p += if p == BigInt::from(2) { 1 } else { 2 };
    }
    if n > BigInt::one() {
        out.push(n);
    }
    out
}

/// `Z^num_generators / rowspan(relations)` in canonical form.
pub fn group_from_presentation(relations: &IntMatrix, num_generators: usize) -> FinAbGroup {
    assert_eq!(
        relations.cols(),
        num_generators,
        "relation matrix needs one column per generator"
    );
    let s = smith_normal_form(relations);
    let diag = s.diagonal();
    let rank = diag.iter().filter(|d| !d.is_zero()).count();
    let torsion: Vec<BigInt> = diag
        .into_iter()
        .filter(|d| !d.is_zero() && !d.is_one())
        .collect();
    FinAbGroup {
        free_rank: num_generators - rank,
        torsion,
    }
}

pub fn direct_sum(a: &FinAbGroup, b: &FinAbGroup) -> FinAbGroup {
    let orders: Vec<BigInt> = a.torsion.iter().chain(&b.torsion).cloned().collect();
    FinAbGroup::from_cyclic_orders(a.free_rank + b.free_rank, &orders)
}

pub fn direct_sum_all<'a, I: IntoIterator<Item = &'a FinAbGroup>>(groups: I) -> FinAbGroup {
    groups
        .into_iter()
        .fold(FinAbGroup::trivial(), |acc, g| direct_sum(&acc, g))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrimaryDecomposition {
    pub free_rank: usize,
    pub parts: BTreeMap<BigInt, FinAbGroup>,
}

impl PrimaryDecomposition {
    pub fn reassemble(&self) -> FinAbGroup {
        direct_sum(
            &FinAbGroup::free(self.free_rank),
            &direct_sum_all(self.parts.values()),
        )
    }
}

pub fn primary_decomposition(g: &FinAbGroup) -> PrimaryDecomposition {
    let mut parts = BTreeMap::new();
    if let Some(top) = g.torsion.last() {
        for p in prime_factors(top) {
            let part = g.primary_part(&p);
            parts.insert(p, part);
        }
    }
    PrimaryDecomposition {
        free_rank: g.free_rank,
        parts,
    }
}

/// A finitely presented abelian group `Z^n / rowspan(relations)` whose
/// elements are integer coordinate vectors on the `n` generators.
#[derive(Clone, Debug)]
pub struct PresentedGroup {
    generators: usize,
    relations: IntMatrix,
    smith: SmithDecomposition,
    canonical: FinAbGroup,
}

impl PresentedGroup {
    pub fn new(relations: IntMatrix, generators: usize) -> Self {
        assert_eq!(relations.cols(), generators);
        let smith = smith_normal_form(&relations);
        let canonical = group_from_presentation(&relations, generators);
        PresentedGroup {
            generators,
            relations,
            smith,
            canonical,
        }
    }

    /// Direct sum of cyclic groups; order 0 means a free summand.
    pub fn cyclic_sum(orders: &[BigInt]) -> Self {
        let n = orders.len();
        let rows: Vec<Vec<BigInt>> = orders
            .iter()
            .enumerate()
            .filter(|(_, o)| !o.is_zero())
            .map(|(i, o)| {
                let mut r = vec![BigInt::zero(); n];
                r[i] = o.clone();
                r
            })
            .collect();
        Self::new(IntMatrix::from_big_rows(n, &rows), n)
    }

    pub fn cyclic_sum_u64(orders: &[u64]) -> Self {
        let v: Vec<BigInt> = orders.iter().map(|&o| BigInt::from(o)).collect();
        Self::cyclic_sum(&v)
    }

    /// Presentation of the canonical group itself, generators in invariant-factor order.
    pub fn from_canonical(g: &FinAbGroup) -> Self {
        let mut orders: Vec<BigInt> = vec![BigInt::zero(); g.free_rank];
        orders.extend(g.torsion.iter().cloned());
        Self::cyclic_sum(&orders)
    }

    pub fn num_generators(&self) -> usize {
        self.generators
    }

    pub fn relations(&self) -> &IntMatrix {
        &self.relations
    }

    pub fn canonical(&self) -> &FinAbGroup {
        &self.canonical
    }

    fn check_dim(&self, x: &[BigInt]) -> Result<(), AbelianError> {
        if x.len() != self.generators {
            return Err(AbelianError::DimensionMismatch {
                expected: self.generators,
                found: x.len(),
            });
        }
        Ok(())
    }

    /// Coordinates of `x` in `⊕ Z/d_i` (all diagonal slots, including trivial
    /// `d_i = 1` and free `d_i = 0` ones), reduced into `[0, d_i)` where finite.
    pub fn normal_coordinates(&self, x: &[BigInt]) -> Result<Vec<BigInt>, AbelianError> {
        self.check_dim(x)?;
        let y = self.smith.v.left_apply(x);
        let diag = self.smith.diagonal();
        Ok(y.into_iter()
            .enumerate()
            .map(|(i, c)| match diag.get(i) {
                Some(d) if !d.is_zero() => c.mod_floor(d),
                _ => c,
            })
            .collect())
    }

    pub fn is_zero(&self, x: &[BigInt]) -> Result<bool, AbelianError> {
        Ok(self.normal_coordinates(x)?.iter().all(Zero::is_zero))
    }

    pub fn equal(&self, x: &[BigInt], y: &[BigInt]) -> Result<bool, AbelianError> {
        let diff: Vec<BigInt> = x.iter().zip(y).map(|(a, b)| a - b).collect();
        self.check_dim(y)?;
        self.is_zero(&diff)
    }

    /// Least `n ≥ 1` with `n·x = 0`, or infinite.
    pub fn element_order(&self, x: &[BigInt]) -> Result<Order, AbelianError> {
        let y = self.normal_coordinates(x)?;
        let diag = self.smith.diagonal();
        let mut acc = BigInt::one();
        for (i, c) in y.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            match diag.get(i) {
                Some(d) if !d.is_zero() => {
                    let ord = d / c.gcd(d);
                    acc = acc.lcm(&ord);
                }
                _ => return Ok(Order::Infinite),
            }
        }
        Ok(Order::Finite(acc))
    }

    fn relation_rows(&self) -> Vec<Vec<BigInt>> {
        (0..self.relations.rows())
            .map(|r| self.relations.row_vec(r))
            .collect()
    }

    /// The subgroup `⟨gens⟩` and the quotient `G/⟨gens⟩`, both canonical.
    pub fn subgroup_and_quotient(
        &self,
        gens: &[Vec<BigInt>],
    ) -> Result<(FinAbGroup, FinAbGroup), AbelianError> {
        for g in gens {
            self.check_dim(g)?;
        }
        Ok((self.subgroup(gens)?, self.quotient(gens)?.canonical))
    }

    /// Canonical structure of `⟨gens⟩ ≤ G`.
    pub fn subgroup(&self, gens: &[Vec<BigInt>]) -> Result<FinAbGroup, AbelianError> {
        for g in gens {
            self.check_dim(g)?;
        }
        let mut rows = gens.to_vec();
        rows.extend(self.relation_rows());
        let lattice = Lattice::span(
            self.generators,
            &IntMatrix::from_big_rows(self.generators, &rows),
        );
        Ok(lattice_quotient(&lattice, &self.relation_rows()))
    }

    /// Presentation of `G/⟨gens⟩` on the same generators.
    pub fn quotient(&self, gens: &[Vec<BigInt>]) -> Result<PresentedGroup, AbelianError> {
        for g in gens {
            self.check_dim(g)?;
        }
        let extra = IntMatrix::from_big_rows(self.generators, gens);
        Ok(PresentedGroup::new(
            self.relations.vstack(&extra),
            self.generators,
        ))
    }

    /// One generator-coordinate representative per element of a finite group.
    pub fn elements(&self) -> Result<Vec<Vec<BigInt>>, AbelianError> {
        if !self.canonical.is_finite() {
            return Err(AbelianError::InfiniteGroup);
        }
        let total = self
            .canonical
            .torsion_order()
            .to_usize()
            .ok_or(AbelianError::InfiniteGroup)?;
        let diag = self.smith.diagonal();
        let vinv = unimodular_inverse(&self.smith.v);
        let slots: Vec<(usize, BigInt)> = diag
            .iter()
            .enumerate()
            .filter(|(_, d)| !d.is_zero() && !d.is_one())
            .map(|(i, d)| (i, d.clone()))
            .collect();
        let mut out = Vec::with_capacity(total);
        let mut counter = vec![BigInt::zero(); slots.len()];
        loop {
            let mut y = vec![BigInt::zero(); self.generators];
            for ((i, _), c) in slots.iter().zip(&counter) {
                y[*i] = c.clone();
            }
            out.push(vinv.left_apply(&y));
            let mut k = 0;
            loop {
                if k == slots.len() {
                    return Ok(out);
                }
                counter[k] += 1;
                if counter[k] == slots[k].1 {
                    counter[k] = BigInt::zero();
                    k += 1;
                } else {
                    break;
                }
            }
        }
    }
}

/// Structure of `L / R` where `R ⊆ L` is given by generating rows.
pub(crate) fn lattice_quotient(lattice: &Lattice, sub_rows: &[Vec<BigInt>]) -> FinAbGroup {
    let r = lattice.rank();
    let rows: Vec<Vec<BigInt>> = sub_rows
        .iter()
        .map(|x| {
            lattice
                .coordinates(x)
                .expect("sublattice generator outside the ambient lattice")
        })
        .collect();
    group_from_presentation(&IntMatrix::from_big_rows(r, &rows), r)
}

/// Inverse of a unimodular matrix via the adjugate-free route: solve with its own SNF.
pub(crate) fn unimodular_inverse(m: &IntMatrix) -> IntMatrix {
    // For unimodular m, SNF gives u·m·v = I, so m⁻¹ = v·u.
    let s = smith_normal_form(m);
    debug_assert!(s.d == IntMatrix::identity(m.rows()));
    &s.v * &s.u
}

#[cfg(test)]
mod tests {
    use super::*;

    fn b(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn presentation_examples() {
        let g = group_from_presentation(&IntMatrix::zeros(0, 2), 2);
        assert_eq!(g, FinAbGroup::free(2));
        let g = group_from_presentation(&IntMatrix::from_rows(2, &[[2, 0], [0, 4]]), 2);
        assert_eq!(g, FinAbGroup::from_u64(0, &[2, 4]));
        let g = group_from_presentation(&IntMatrix::from_rows(2, &[[2, 4], [6, 8]]), 2);
        assert_eq!(g.torsion(), &b(&[2, 4])[..]);
    }

    #[test]
    fn direct_sums() {
        let s = direct_sum(&FinAbGroup::cyclic(2), &FinAbGroup::cyclic(3));
        assert_eq!(s.torsion(), &b(&[6])[..]);
        let s = direct_sum(&FinAbGroup::cyclic(4), &FinAbGroup::cyclic(4));
        assert_eq!(s.torsion(), &b(&[4, 4])[..]);
        let left = FinAbGroup::from_u64(0, &[8, 2]);
        let right = FinAbGroup::from_u64(0, &[9, 3, 3, 5]);
        assert_eq!(direct_sum(&left, &right).torsion(), &b(&[3, 6, 360])[..]);
    }
}
