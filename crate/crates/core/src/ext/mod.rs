//! Extension problems `0 → A → G → C → 0` of finitely generated abelian groups.

mod evidence;
mod partitions;

pub use evidence::{
    apply_evidence, apply_evidence_with_bound, normalize_element, Citation, Coefficient, Evidence,
    EvidenceRecord, RelationTerm, ResolvedExtension,
};
pub use partitions::{lr_coefficient, lr_positive, partitions};

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use thiserror::Error;

use crate::abelian::{direct_sum, prime_factors, FinAbGroup};
use crate::named::NamedGroup;

pub const DEFAULT_BOUND: u64 = 1 << 20;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ExtError {
    #[error("torsion order {size} exceeds the enumeration bound {bound}")]
    BoundExceeded { bound: u64, size: BigInt },
    #[error("{problem}: evidence leaves no candidate ({detail})")]
    Inconsistent { problem: String, detail: String },
    #[error("{problem}: unresolved, candidates {}", list(.candidates))]
    Unresolved {
        problem: String,
        candidates: Vec<FinAbGroup>,
    },
    #[error("{problem}: invalid evidence #{index}: {reason}")]
    InvalidEvidence {
        problem: String,
        index: usize,
        reason: String,
    },
}

fn list(groups: &[FinAbGroup]) -> String {
    let parts: Vec<String> = groups.iter().map(|g| format!("[{g}]")).collect();
    parts.join(", ")
}

/// `0 → sub → G → quot → 0`, with named generators on both ends.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtensionProblem {
    pub sub: NamedGroup,
    pub quot: NamedGroup,
    /// `(n, k)` when the problem comes from `[Σ^{n+k}CP², S^n]`.
    pub context: Option<(u32, u32)>,
}

impl ExtensionProblem {
    pub fn new(sub: NamedGroup, quot: NamedGroup) -> Self {
        ExtensionProblem {
            sub,
            quot,
            context: None,
        }
    }

    pub fn with_context(mut self, n: u32, k: u32) -> Self {
        self.context = Some((n, k));
        self
    }

    pub fn sub_group(&self) -> FinAbGroup {
        self.sub.canonical()
    }

    pub fn quot_group(&self) -> FinAbGroup {
        self.quot.canonical()
    }

    pub fn split(&self) -> FinAbGroup {
        direct_sum(&self.sub_group(), &self.quot_group())
    }
}

impl fmt::Display for ExtensionProblem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some((n, k)) = self.context {
            write!(f, "(n={n}, k={k}) ")?;
        }
        write!(
            f,
            "0 -> {} -> G -> {} -> 0",
            self.sub_group(),
            self.quot_group()
        )
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtensionCandidateSet {
    pub problem: ExtensionProblem,
    /// Pairwise non-isomorphic, sorted by canonical form.
    pub candidates: Vec<FinAbGroup>,
}

impl ExtensionCandidateSet {
    pub fn contains(&self, g: &FinAbGroup) -> bool {
        self.candidates.binary_search(g).is_ok()
    }
}

/// Ext¹_Z(c, a), expanded biadditively over cyclic summands.
pub fn ext_group(c: &FinAbGroup, a: &FinAbGroup) -> FinAbGroup {
    let mut orders = Vec::new();
    for n in c.torsion() {
        for _ in 0..a.free_rank() {
            orders.push(n.clone());
        }
        for m in a.torsion() {
            orders.push(n.gcd(m));
        }
    }
    FinAbGroup::from_cyclic_orders(0, &orders)
}

fn partition_of(g: &FinAbGroup, p: &BigInt) -> Vec<u32> {
    g.elementary_divisors()
        .into_iter()
        .filter(|(q, _)| q == p)
        .map(|(_, e)| e)
        .collect()
}

/// Every isomorphism class of middle group, with the default bound.
pub fn enumerate_middle_groups(p: &ExtensionProblem) -> Result<ExtensionCandidateSet, ExtError> {
    enumerate_middle_groups_with_bound(p, DEFAULT_BOUND)
}

/// Works prime by prime: a p-group of type λ is a middle group for types μ,
/// ν exactly when the Littlewood–Richardson coefficient c^λ_{μν} is nonzero.
/// Free parts split off.
pub fn enumerate_middle_groups_with_bound(
    p: &ExtensionProblem,
    bound: u64,
) -> Result<ExtensionCandidateSet, ExtError> {
    let a = p.sub_group();
    let c = p.quot_group();
    let size = a.torsion_order() * c.torsion_order();
    if size > BigInt::from(bound) {
        return Err(ExtError::BoundExceeded { bound, size });
    }
    let primes: BTreeSet<BigInt> = prime_factors(&size).into_iter().collect();
    let mut per_prime: Vec<Vec<Vec<BigInt>>> = Vec::new();
    for prime in &primes {
        let mu = partition_of(&a, prime);
        let nu = partition_of(&c, prime);
        let n = mu.iter().sum::<u32>() + nu.iter().sum::<u32>();
        let options: Vec<Vec<BigInt>> = partitions(n)
            .into_iter()
            .filter(|lambda| lr_positive(lambda, &mu, &nu))
            .map(|lambda| {
                lambda
                    .iter()
                    .map(|&e| num_traits::pow(prime.clone(), e as usize))
                    .collect()
            })
            .collect();
        per_prime.push(options);
    }
    let free = a.free_rank() + c.free_rank();
    let mut candidates = BTreeSet::new();
    let mut choice = vec![0usize; per_prime.len()];
    loop {
        let orders: Vec<BigInt> = choice
            .iter()
            .zip(&per_prime)
            .flat_map(|(&i, opts)| opts[i].iter().cloned())
            .collect();
        candidates.insert(FinAbGroup::from_cyclic_orders(free, &orders));
        let mut k = 0;
        loop {
            if k == choice.len() {
                return Ok(ExtensionCandidateSet {
                    problem: p.clone(),
                    candidates: candidates.into_iter().collect(),
                });
            }
            choice[k] += 1;
            if choice[k] == per_prime[k].len() {
                choice[k] = 0;
                k += 1;
            } else {
                break;
            }
        }
    }
}
