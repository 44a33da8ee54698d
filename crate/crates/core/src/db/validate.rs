use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::{Context, Coord, Database, EvidencePayload, GroupEntry, GroupKind, Scope};
use crate::abelian::{prime_factors, FinAbGroup, Order};
use crate::ext::Citation;

/// Last row of each table before its stable column.
pub const STABLE_BOUND: [(i32, u32); 3] = [(6, 12), (7, 13), (8, 14)];

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckResult {
    pub record: String,
    pub check: &'static str,
    pub passed: bool,
    pub detail: String,
    pub cites: Vec<Citation>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub results: Vec<CheckResult>,
}

impl ValidationReport {
    pub fn failures(&self) -> impl Iterator<Item = &CheckResult> {
        self.results.iter().filter(|r| !r.passed)
    }

    pub fn is_ok(&self) -> bool {
        self.failures().next().is_none()
    }

    fn record(
        &mut self,
        record: String,
        check: &'static str,
        cites: &[Citation],
        outcome: Result<(), String>,
    ) {
        let (passed, detail) = match outcome {
            Ok(()) => (true, String::new()),
            Err(d) => (false, d),
        };
        self.results.push(CheckResult {
            record,
            check,
            passed,
            detail,
            cites: cites.to_vec(),
        });
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in &self.results {
            let status = if r.passed { "PASS" } else { "FAIL" };
            write!(f, "{status} {} {}", r.check, r.record)?;
            if !r.detail.is_empty() {
                write!(f, ": {}", r.detail)?;
            }
            if let Some(c) = r.cites.first() {
                write!(f, " [{}]", c.location)?;
            }
            writeln!(f)?;
        }
        let failed = self.failures().count();
        write!(f, "{} checks, {} failed", self.results.len(), failed)
    }
}

fn cite_check(cites: &[Citation]) -> Result<(), String> {
    if cites.is_empty() {
        return Err("no citation".into());
    }
    match cites.iter().find(|c| c.is_empty()) {
        Some(c) => Err(format!("empty citation '{c}'")),
        None => Ok(()),
    }
}

fn slot_label(i: usize, o: &Order) -> String {
    match o {
        Order::Infinite => format!("slot {i} (Z)"),
        Order::Finite(n) => format!("slot {i} (Z/{n})"),
    }
}

fn generator_check(g: &GroupEntry) -> Result<(), String> {
    let Some(gens) = &g.generators else {
        return Ok(());
    };
    if gens.len() != g.slots.len() {
        return Err(format!(
            "{} generators for {} slots",
            gens.len(),
            g.slots.len()
        ));
    }
    for (i, (gen, slot)) in gens.iter().zip(&g.slots).enumerate() {
        if &gen.order != slot {
            return Err(format!(
                "generator '{}' has order {} in {}",
                gen.name,
                gen.order,
                slot_label(i, slot)
            ));
        }
    }
    Ok(())
}

fn is_power_of(n: &BigInt, p: u32) -> bool {
    let p = BigInt::from(p);
    let mut n = n.clone();
    while !n.is_one() {
        if !n.is_multiple_of(&p) {
            return false;
        }
        n /= &p;
    }
    true
}

fn odd_part_check(g: &GroupEntry) -> Result<(), String> {
    let p = g.p.unwrap_or(0);
    let pb = BigInt::from(p);
    if p < 3 || prime_factors(&pb) != vec![pb] {
        return Err(format!("p = {p} is not an odd prime"));
    }
    for (i, slot) in g.slots.iter().enumerate() {
        match slot {
            Order::Finite(n) if is_power_of(n, p) => {}
            _ => return Err(format!("{} is not a {p}-group", slot_label(i, slot))),
        }
    }
    Ok(())
}

fn two_part(g: &FinAbGroup) -> FinAbGroup {
    let t = g.primary_part(&BigInt::from(2));
    FinAbGroup::from_cyclic_orders(g.free_rank(), t.torsion())
}

fn odd_torsion(g: &FinAbGroup) -> FinAbGroup {
    g.torsion_part().prime_to_part(&BigInt::from(2))
}

/// Order of the element with coordinates `x` in `⊕ Z/o_i`; `None` if infinite.
fn element_order(orders: &[Order], x: &[BigInt]) -> Option<BigInt> {
    let mut out = BigInt::one();
    for (o, c) in orders.iter().zip(x) {
        match o {
            Order::Infinite if !c.is_zero() => return None,
            Order::Infinite => {}
            Order::Finite(n) => {
                let g = n.gcd(c);
                out = out.lcm(&(n / g));
            }
        }
    }
    Some(out)
}

pub fn validate_db(db: &Database) -> ValidationReport {
    let mut report = ValidationReport::default();

    for g in &db.groups {
        report.record(g.label(), "cite", &g.cites, cite_check(&g.cites));
        report.record(g.label(), "generator-orders", &g.cites, generator_check(g));
        if g.kind == GroupKind::OddPart {
            report.record(g.label(), "odd-primary", &g.cites, odd_part_check(g));
        }
        if g.kind == GroupKind::MapSpace {
            let ok = g.rows.lo >= 4 && g.rows.hi.is_some_and(|h| h <= 13);
            report.record(
                g.label(),
                "mapspace-range",
                &g.cites,
                if ok {
                    Ok(())
                } else {
                    Err("rows outside 4..=13".into())
                },
            );
        }
    }
    for s in &db.symbols {
        let label = format!("[symbol] {}", s.name);
        report.record(label, "cite", &s.cites, cite_check(&s.cites));
    }
    for r in &db.relations {
        let label = format!("[relation] id={}", r.id);
        report.record(label.clone(), "cite", &r.cites, cite_check(&r.cites));
        let ok = if r.multiple.is_zero() {
            Err("multiple is zero".into())
        } else {
            Ok(())
        };
        report.record(label, "statement", &r.cites, ok);
    }
    for e in &db.evidence {
        report.record(e.label(), "cite", &e.cites, cite_check(&e.cites));
        let refs = match &e.payload {
            EvidencePayload::Relation { relation, .. } if db.relation(relation).is_none() => {
                Err(format!("unknown relation '{relation}'"))
            }
            EvidencePayload::Ehp { source_n } if e.rows.contains(*source_n) => {
                Err(format!("EHP source {source_n} is its own row"))
            }
            _ => Ok(()),
        };
        report.record(e.label(), "references", &e.cites, refs);
    }
    for w in &db.whitehead {
        report.record(w.label(), "cite", &w.cites, cite_check(&w.cites));
        report.record(w.label(), "images", &w.cites, whitehead_check(db, w));
    }

    for (k, bound) in STABLE_BOUND {
        // Coverage is owed only by tables the database has started.
        let present = [GroupKind::Bracket, GroupKind::CokerEta, GroupKind::KerEta]
            .into_iter()
            .any(|kind| db.entries(kind).any(|e| e.k == Some(k)));
        if !present {
            continue;
        }
        for n in 2..=bound {
            let label = format!("(n={n}, k={k})");
            let golden = db.lookup(&Context::Bracket { n, k });
            let coker = db.lookup(&Context::CokerEta { n, k });
            let ker = db.lookup(&Context::KerEta { n, k });
            let coverage = match (&golden, &coker, &ker) {
                (Some(_), Some(_), Some(_)) => Ok(()),
                _ => Err(format!(
                    "missing {}",
                    [
                        ("bracket", golden.is_none()),
                        ("coker-eta", coker.is_none()),
                        ("ker-eta", ker.is_none())
                    ]
                    .iter()
                    .filter(|(_, m)| *m)
                    .map(|(s, _)| *s)
                    .collect::<Vec<_>>()
                    .join(", ")
                )),
            };
            report.record(label.clone(), "coverage", &[], coverage);
            let (Some(golden), Some(coker), Some(ker)) = (golden, coker, ker) else {
                continue;
            };
            let cites: Vec<Citation> = golden
                .cites
                .iter()
                .chain(&coker.cites)
                .chain(&ker.cites)
                .cloned()
                .collect();
            report.record(
                label.clone(),
                "order-law",
                &cites,
                order_law(&golden, &coker, &ker),
            );
            if golden.scope() == Scope::Full {
                let odd = crate::abelian::direct_sum_all(
                    db.odd_parts(n, k)
                        .iter()
                        .map(|o| o.group())
                        .collect::<Vec<_>>()
                        .iter(),
                );
                let expected = odd_torsion(&golden.group());
                let ok = if odd == expected {
                    Ok(())
                } else {
                    Err(format!("odd parts give {odd}, table has {expected}"))
                };
                report.record(label, "odd-parts", &cites, ok);
            }
        }
    }
    report
}

/// |Coker|·|Ker| equals the 2-part of the stated group, free ranks adding.
fn order_law(golden: &GroupEntry, coker: &GroupEntry, ker: &GroupEntry) -> Result<(), String> {
    let (c, k) = (coker.group(), ker.group());
    let expected = two_part(&golden.group());
    let order = c.torsion_order() * k.torsion_order();
    let rank = c.free_rank() + k.free_rank();
    if order != expected.torsion_order() || rank != expected.free_rank() {
        return Err(format!(
            "|Coker|·|Ker| = {order} with rank {rank}, 2-part of {} has order {} and rank {}",
            golden.group(),
            expected.torsion_order(),
            expected.free_rank()
        ));
    }
    Ok(())
}

fn whitehead_check(db: &Database, w: &super::WhiteheadEntry) -> Result<(), String> {
    let k = w.n as i32 - w.m as i32;
    let source = db
        .lookup(&Context::Bracket { n: w.m, k })
        .ok_or_else(|| format!("no bracket record for [S^{} CP2, S^{}]", w.n, w.m))?;
    let targets: Vec<Order> = w
        .target
        .generators
        .iter()
        .map(|g| g.order.clone())
        .collect();
    let gens = source.named();
    for img in &w.images {
        if img.coords.len() != targets.len() {
            return Err(format!(
                "image of '{}' has {} coordinates for {} target generators",
                img.source,
                img.coords.len(),
                targets.len()
            ));
        }
        let i = gens
            .generators
            .iter()
            .position(|g| super::normalize(&g.name) == super::normalize(&img.source))
            .ok_or_else(|| format!("'{}' is not a generator of the source group", img.source))?;
        // An unknown odd coefficient is a unit wherever it matters.
        let x: Vec<BigInt> = img
            .coords
            .iter()
            .map(|c| match c {
                Coord::Int(v) => v.clone(),
                Coord::Odd { negative } => BigInt::from(if *negative { -1 } else { 1 }),
            })
            .collect();
        let order = element_order(&targets, &x)
            .ok_or_else(|| format!("image of '{}' has infinite order", img.source))?;
        if let Order::Finite(src) = &gens.generators[i].order {
            if !src.is_multiple_of(&order) {
                return Err(format!(
                    "image of '{}' has order {order}, not dividing its order {src}",
                    img.source
                ));
            }
        }
    }
    Ok(())
}
