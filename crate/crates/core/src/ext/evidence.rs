use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use super::{ExtError, ExtensionCandidateSet, ExtensionProblem, DEFAULT_BOUND};
use crate::abelian::{group_from_presentation, FinAbGroup, IntMatrix, Order};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Citation {
    pub location: String,
    pub quote: String,
}

impl Citation {
    pub fn new(location: impl Into<String>, quote: impl Into<String>) -> Self {
        Citation {
            location: location.into(),
            quote: quote.into(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.location.trim().is_empty() || self.quote.trim().is_empty()
    }
}

impl fmt::Display for Citation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: \"{}\"", self.location, self.quote)
    }
}

/// An integer coefficient, or one known only to be odd.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Coefficient {
    Int(BigInt),
    Odd,
}

impl fmt::Display for Coefficient {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Coefficient::Int(c) => write!(f, "{c}"),
            Coefficient::Odd => f.write_str("odd"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RelationTerm {
    pub coefficient: Coefficient,
    pub element: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Evidence {
    /// The extension splits.
    Retraction,
    /// `element` lifts `maps_to` and has the given order in G.
    ElementOrderLift {
        element: String,
        order: Order,
        maps_to: String,
    },
    /// `multiple · lift = Σ terms`, where `lift` maps to the quotient generator
    /// `lifts` and the terms are generators of the subgroup.
    RelationFact {
        id: String,
        lift: String,
        lifts: String,
        multiple: BigInt,
        terms: Vec<RelationTerm>,
    },
    /// G is isomorphic to the already resolved group at `source`.
    EhpInjectivity {
        source: (u32, u32),
        resolved: Option<FinAbGroup>,
    },
    /// G is known from elsewhere.
    ExternalFact { group: FinAbGroup },
}

impl Evidence {
    pub fn kind(&self) -> &'static str {
        match self {
            Evidence::Retraction => "retraction",
            Evidence::ElementOrderLift { .. } => "element-order-lift",
            Evidence::RelationFact { .. } => "relation-fact",
            Evidence::EhpInjectivity { .. } => "ehp-injectivity",
            Evidence::ExternalFact { .. } => "external-fact",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct EvidenceRecord {
    pub evidence: Evidence,
    pub cite: Citation,
}

impl EvidenceRecord {
    pub fn new(evidence: Evidence, cite: Citation) -> Self {
        EvidenceRecord { evidence, cite }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ResolvedExtension {
    pub problem: ExtensionProblem,
    pub result: FinAbGroup,
    /// Subgroup generators followed by one lift per quotient generator.
    pub generator_names: Vec<String>,
    pub evidence_used: Vec<EvidenceRecord>,
}

/// Element names compare modulo whitespace and a trailing pinch map
/// `. S^m p`, since subgroup elements enter G composed with the pinch.
pub fn normalize_element(name: &str) -> String {
    let compact: String = name.chars().filter(|c| !c.is_whitespace()).collect();
    if let Some(pos) = compact.rfind(".S^") {
        let tail = &compact[pos + 3..];
        if let Some(digits) = tail.strip_suffix('p') {
            if !digits.is_empty() && digits.chars().all(|c| c.is_ascii_digit()) {
                return compact[..pos].to_string();
            }
        }
    }
    compact
}

fn find(names: &[String], name: &str) -> Option<usize> {
    let target = normalize_element(name);
    names.iter().position(|n| normalize_element(n) == target)
}

pub fn apply_evidence(
    cands: &ExtensionCandidateSet,
    ev: &[EvidenceRecord],
) -> Result<ResolvedExtension, ExtError> {
    apply_evidence_with_bound(cands, ev, DEFAULT_BOUND)
}

/// The middle group is `(A ⊕ Z{f_j}) / ⟨m_j f_j − a_j⟩`, with `m_j` the order
/// of the j-th quotient generator and `a_j ∈ A` determined modulo `m_j A`.
/// Evidence restricts the admissible classes of each `a_j` or filters the
/// resulting groups; the unique surviving isomorphism class is the answer.
pub fn apply_evidence_with_bound(
    cands: &ExtensionCandidateSet,
    ev: &[EvidenceRecord],
    bound: u64,
) -> Result<ResolvedExtension, ExtError> {
    let problem = &cands.problem;
    let label = problem.to_string();
    let sub_names = problem.sub.names();
    let quot_names = problem.quot.names();
    let sub_orders = problem.sub.orders();
    let quot_orders = problem.quot.orders();
    let invalid = |index: usize, reason: String| ExtError::InvalidEvidence {
        problem: label.clone(),
        index,
        reason,
    };

    let mut allowed: Vec<Option<BTreeSet<Vec<BigInt>>>> = vec![None; quot_orders.len()];
    let mut filters: Vec<(usize, FinAbGroup)> = Vec::new();
    let mut lift_names: Vec<Option<String>> = vec![None; quot_orders.len()];

    for (index, record) in ev.iter().enumerate() {
        if record.cite.is_empty() {
            return Err(invalid(index, "citation is empty".into()));
        }
        match &record.evidence {
            Evidence::Retraction => {
                for (j, m) in quot_orders.iter().enumerate() {
                    if !m.is_zero() {
                        restrict(
                            &mut allowed[j],
                            [vec![BigInt::zero(); sub_orders.len()]].into(),
                        );
                    }
                }
            }
            Evidence::ElementOrderLift {
                element,
                order,
                maps_to,
            } => {
                let j = find(&quot_names, maps_to).ok_or_else(|| {
                    invalid(index, format!("'{maps_to}' is not a quotient generator"))
                })?;
                lift_names[j] = Some(element.clone());
                let m = &quot_orders[j];
                match order {
                    Order::Infinite if m.is_zero() => {}
                    Order::Infinite => {
                        return Err(invalid(
                            index,
                            format!("lift of '{maps_to}' (order {m}) cannot have infinite order"),
                        ))
                    }
                    Order::Finite(_) if m.is_zero() => {
                        return Err(invalid(
                            index,
                            format!("lift of free generator '{maps_to}' must have infinite order"),
                        ))
                    }
                    Order::Finite(n) => {
                        if n < &BigInt::one() || !(n % m).is_zero() {
                            return Err(invalid(
                                index,
                                format!("order {n} is not a multiple of the image order {m}"),
                            ));
                        }
                        let t = n / m;
                        let classes: BTreeSet<Vec<BigInt>> = torsion_elements(&sub_orders, bound)
                            .map_err(|size| ExtError::BoundExceeded { bound, size })?
                            .into_iter()
                            .filter(|a| element_order(a, &sub_orders) == t)
                            .map(|a| reduce(&a, &sub_orders, m))
                            .collect();
                        restrict(&mut allowed[j], classes);
                    }
                }
            }
            Evidence::RelationFact {
                id,
                lift,
                lifts,
                multiple,
                terms,
            } => {
                let j = find(&quot_names, lifts).ok_or_else(|| {
                    invalid(
                        index,
                        format!("relation {id}: '{lifts}' is not a quotient generator"),
                    )
                })?;
                let m = &quot_orders[j];
                if m.is_zero() || multiple != m {
                    return Err(invalid(
                        index,
                        format!(
                            "relation {id}: multiple {multiple} differs from the order {m} of '{lifts}'"
                        ),
                    ));
                }
                lift_names[j] = Some(lift.clone());
                let mut choices: Vec<Vec<Vec<BigInt>>> = Vec::new();
                for term in terms {
                    let i = find(&sub_names, &term.element).ok_or_else(|| {
                        invalid(
                            index,
                            format!(
                                "relation {id}: '{}' is not a subgroup generator",
                                term.element
                            ),
                        )
                    })?;
                    let d = &sub_orders[i];
                    if d.is_zero() {
                        return Err(invalid(
                            index,
                            format!("relation {id}: '{}' has infinite order", term.element),
                        ));
                    }
                    let coefficients: Vec<BigInt> = match &term.coefficient {
                        Coefficient::Int(c) => vec![c.mod_floor(d)],
                        Coefficient::Odd => {
                            let limit = d * 2u32;
                            let mut out: BTreeSet<BigInt> = BTreeSet::new();
                            let mut x = BigInt::one();
                            while x < limit {
                                out.insert(x.mod_floor(d));
                                x += 2u32;
                            }
                            out.into_iter().collect()
                        }
                    };
                    choices.push(
                        coefficients
                            .into_iter()
                            .map(|c| {
                                let mut v = vec![BigInt::zero(); sub_orders.len()];
                                v[i] = c;
                                v
                            })
                            .collect(),
                    );
                }
                let mut sums: BTreeSet<Vec<BigInt>> =
                    [vec![BigInt::zero(); sub_orders.len()]].into();
                for options in &choices {
                    let mut next = BTreeSet::new();
                    for s in &sums {
                        for o in options {
                            let v: Vec<BigInt> = s.iter().zip(o).map(|(x, y)| x + y).collect();
                            next.insert(reduce(&v, &sub_orders, m));
                        }
                    }
                    sums = next;
                }
                restrict(&mut allowed[j], sums);
            }
            Evidence::EhpInjectivity { source, resolved } => match resolved {
                Some(g) => filters.push((index, g.clone())),
                None => {
                    return Err(invalid(
                        index,
                        format!(
                            "source (n={}, k={}) has not been resolved",
                            source.0, source.1
                        ),
                    ))
                }
            },
            Evidence::ExternalFact { group } => filters.push((index, group.clone())),
        }
    }

    let generator_names: Vec<String> = sub_names
        .iter()
        .cloned()
        .chain(
            quot_names
                .iter()
                .zip(lift_names)
                .map(|(q, l)| l.unwrap_or_else(|| format!("lift({q})"))),
        )
        .collect();
    let resolved = |result: FinAbGroup| ResolvedExtension {
        problem: problem.clone(),
        result,
        generator_names: generator_names.clone(),
        evidence_used: ev.to_vec(),
    };

    if ev.is_empty() {
        return match cands.candidates.as_slice() {
            [only] => Ok(resolved(only.clone())),
            [] => Err(ExtError::Inconsistent {
                problem: label,
                detail: "empty candidate set".into(),
            }),
            many => Err(ExtError::Unresolved {
                problem: label,
                candidates: many.to_vec(),
            }),
        };
    }

    // Admissible classes per torsion quotient generator; free ones lift freely.
    let mut options: Vec<(usize, Vec<Vec<BigInt>>)> = Vec::new();
    let mut count = BigInt::one();
    for (j, m) in quot_orders.iter().enumerate() {
        if m.is_zero() {
            continue;
        }
        let set: Vec<Vec<BigInt>> = match allowed[j].take() {
            Some(s) => s.into_iter().collect(),
            None => {
                let total: BigInt = sub_orders.iter().map(|d| class_modulus(d, m)).product();
                if total > BigInt::from(bound) {
                    return Err(ExtError::BoundExceeded { bound, size: total });
                }
                all_classes(&sub_orders, m)
            }
        };
        count *= set.len();
        options.push((j, set));
    }
    if count > BigInt::from(bound) {
        return Err(ExtError::BoundExceeded { bound, size: count });
    }
    if count.is_zero() {
        return Err(ExtError::Inconsistent {
            problem: label,
            detail: "no extension class satisfies the lift and relation evidence".into(),
        });
    }

    let s = sub_orders.len();
    let width = s + quot_orders.len();
    let mut realized: BTreeSet<FinAbGroup> = BTreeSet::new();
    let mut choice = vec![0usize; options.len()];
    'outer: loop {
        let mut rows: Vec<Vec<BigInt>> = Vec::new();
        for (i, d) in sub_orders.iter().enumerate() {
            if !d.is_zero() {
                let mut r = vec![BigInt::zero(); width];
                r[i] = d.clone();
                rows.push(r);
            }
        }
        for ((j, set), &c) in options.iter().zip(&choice) {
            let mut r = vec![BigInt::zero(); width];
            for (i, a) in set[c].iter().enumerate() {
                r[i] = -a.clone();
            }
            r[s + j] = quot_orders[*j].clone();
            rows.push(r);
        }
        let g = group_from_presentation(&IntMatrix::from_big_rows(width, &rows), width);
        realized.insert(g);
        let mut k = 0;
        loop {
            if k == choice.len() {
                break 'outer;
            }
            choice[k] += 1;
            if choice[k] == options[k].1.len() {
                choice[k] = 0;
                k += 1;
            } else {
                break;
            }
        }
    }

    for g in &realized {
        if !cands.contains(g) {
            return Err(ExtError::Inconsistent {
                problem: label,
                detail: format!("realized group {g} is not among the candidates"),
            });
        }
    }
    let survivors: Vec<FinAbGroup> = realized
        .into_iter()
        .filter(|g| filters.iter().all(|(_, f)| f == g))
        .collect();
    match survivors.as_slice() {
        [only] => Ok(resolved(only.clone())),
        [] => {
            let stated: Vec<String> = filters
                .iter()
                .map(|(i, g)| format!("evidence #{i} states {g}"))
                .collect();
            Err(ExtError::Inconsistent {
                problem: label,
                detail: if stated.is_empty() {
                    "no extension class survives".into()
                } else {
                    stated.join("; ")
                },
            })
        }
        many => Err(ExtError::Unresolved {
            problem: label,
            candidates: many.to_vec(),
        }),
    }
}

fn restrict(slot: &mut Option<BTreeSet<Vec<BigInt>>>, set: BTreeSet<Vec<BigInt>>) {
    *slot = Some(match slot.take() {
        None => set,
        Some(prev) => prev.intersection(&set).cloned().collect(),
    });
}

/// Free coordinates of `a_j` are pinned to zero: the free part of the
/// subgroup is taken to split off.
fn class_modulus(d: &BigInt, m: &BigInt) -> BigInt {
    if d.is_zero() {
        BigInt::one()
    } else {
        d.gcd(m)
    }
}

fn reduce(a: &[BigInt], orders: &[BigInt], m: &BigInt) -> Vec<BigInt> {
    a.iter()
        .zip(orders)
        .map(|(x, d)| x.mod_floor(&class_modulus(d, m)))
        .collect()
}

fn all_classes(orders: &[BigInt], m: &BigInt) -> Vec<Vec<BigInt>> {
    let moduli: Vec<BigInt> = orders.iter().map(|d| class_modulus(d, m)).collect();
    odometer(&moduli)
}

fn odometer(moduli: &[BigInt]) -> Vec<Vec<BigInt>> {
    let mut out = Vec::new();
    let mut v = vec![BigInt::zero(); moduli.len()];
    loop {
        out.push(v.clone());
        let mut k = 0;
        loop {
            if k == v.len() {
                return out;
            }
            v[k] += 1;
            if v[k] == moduli[k] {
                v[k] = BigInt::zero();
                k += 1;
            } else {
                break;
            }
        }
    }
}

/// Elements of the torsion subgroup, free coordinates held at zero.
fn torsion_elements(orders: &[BigInt], bound: u64) -> Result<Vec<Vec<BigInt>>, BigInt> {
    let moduli: Vec<BigInt> = orders
        .iter()
        .map(|d| {
            if d.is_zero() {
                BigInt::one()
            } else {
                d.clone()
            }
        })
        .collect();
    let size: BigInt = moduli.iter().product();
    match size.to_u64() {
        Some(n) if n <= bound => Ok(odometer(&moduli)),
        _ => Err(size),
    }
}

fn element_order(a: &[BigInt], orders: &[BigInt]) -> BigInt {
    a.iter().zip(orders).fold(BigInt::one(), |acc, (x, d)| {
        if d.is_zero() {
            acc
        } else {
            acc.lcm(&(d / x.gcd(d)))
        }
    })
}
