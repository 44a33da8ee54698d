use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::abelian::{FinAbGroup, Order, PresentedGroup};

/// A generator of a direct sum of cyclic groups, with its order.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct NamedGenerator {
    pub name: String,
    pub order: Order,
}

impl NamedGenerator {
    pub fn new(name: impl Into<String>, order: Order) -> Self {
        NamedGenerator {
            name: name.into(),
            order,
        }
    }
}

/// `⊕ Z/ord(g)` over named generators, the form in which every group of the
/// dataset is written. Not necessarily in invariant-factor order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct NamedGroup {
    pub generators: Vec<NamedGenerator>,
}

impl NamedGroup {
    pub fn new(generators: Vec<NamedGenerator>) -> Self {
        NamedGroup { generators }
    }

    pub fn trivial() -> Self {
        NamedGroup::default()
    }

    /// Parses `"name:order, name:order"` shorthand, `inf` marking infinite order.
    /// Intended for tests and small hand-written inputs.
    pub fn from_spec(pairs: &[(&str, Option<u64>)]) -> Self {
        NamedGroup {
            generators: pairs
                .iter()
                .map(|(n, o)| {
                    NamedGenerator::new(*n, o.map(Order::finite).unwrap_or(Order::Infinite))
                })
                .collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.generators.iter().position(|g| g.name == name)
    }

    pub fn names(&self) -> Vec<String> {
        self.generators.iter().map(|g| g.name.clone()).collect()
    }

    /// Cyclic orders with 0 standing for infinite.
    pub fn orders(&self) -> Vec<BigInt> {
        self.generators
            .iter()
            .map(|g| match &g.order {
                Order::Finite(n) => n.clone(),
                Order::Infinite => BigInt::zero(),
            })
            .collect()
    }

    pub fn presented(&self) -> PresentedGroup {
        PresentedGroup::cyclic_sum(&self.orders())
    }

    pub fn canonical(&self) -> FinAbGroup {
        FinAbGroup::from_cyclic_orders(0, &self.orders())
    }

    pub fn free_rank(&self) -> usize {
        self.generators
            .iter()
            .filter(|g| g.order == Order::Infinite)
            .count()
    }

    /// Generators restricted to those whose order is a power of `p` (order 1 excluded).
    pub fn primary_part(&self, p: u64) -> NamedGroup {
        NamedGroup {
            generators: self
                .generators
                .iter()
                .filter(|g| match &g.order {
                    Order::Finite(n) => is_power_of(n, p),
                    Order::Infinite => false,
                })
                .cloned()
                .collect(),
        }
    }

    /// Free generators plus 2-power torsion generators.
    pub fn two_local(&self) -> NamedGroup {
        NamedGroup {
            generators: self
                .generators
                .iter()
                .filter(|g| match &g.order {
                    Order::Finite(n) => is_power_of(n, 2),
                    Order::Infinite => true,
                })
                .cloned()
                .collect(),
        }
    }

    pub fn concat(&self, other: &NamedGroup) -> NamedGroup {
        let mut generators = self.generators.clone();
        generators.extend(other.generators.iter().cloned());
        NamedGroup { generators }
    }
}

pub(crate) fn is_power_of(n: &BigInt, p: u64) -> bool {
    let p = BigInt::from(p);
    let mut n = n.clone();
    if n <= BigInt::one() {
        return false;
    }
    while n > BigInt::one() {
        if !(&n % &p).is_zero() {
            return false;
        }
        n /= &p;
    }
    true
}

impl fmt::Display for NamedGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.generators.is_empty() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self
            .generators
            .iter()
            .map(|g| match &g.order {
                Order::Infinite => format!("Z{{{}}}", g.name),
                Order::Finite(n) => format!("Z/{n}{{{}}}", g.name),
            })
            .collect();
        f.write_str(&parts.join(" + "))
    }
}
