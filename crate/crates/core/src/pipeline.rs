//! `[Σ^{n+k}CP², S^n]` assembled from the dataset: the 2-primary part as an
//! extension of Coker η* by Ker η*, odd parts added as direct summands.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::abelian::{direct_sum, direct_sum_all, FinAbGroup};
use crate::db::{Context, Database, GroupEntry, Scope, STABLE_BOUND};
use crate::ext::{
    apply_evidence, enumerate_middle_groups, Citation, Evidence, ExtError, ExtensionProblem,
    ResolvedExtension,
};
use crate::named::{NamedGenerator, NamedGroup};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PipelineError {
    #[error("no {kind} record for (n={n}, k={k})")]
    Missing { kind: &'static str, n: u32, k: i32 },
    #[error("k = {k} is not one of the tabulated stems 6, 7, 8")]
    UnsupportedStem { k: i32 },
    #[error("n = {n} is outside 4..=13")]
    OutOfRange { n: u32 },
    #[error("EHP sources loop back to (n={n}, k={k})")]
    Cycle { n: u32, k: i32 },
    #[error(transparent)]
    Ext(#[from] ExtError),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CohomotopyResult {
    pub n: u32,
    pub k: i32,
    pub two_primary: ResolvedExtension,
    pub odd_parts: BTreeMap<u32, FinAbGroup>,
    pub total: FinAbGroup,
    /// 2-primary generators (subgroup, then lifts) followed by odd ones.
    pub generators: Vec<String>,
    pub provenance: Vec<Citation>,
}

/// Last tabulated row for stem `k`; rows from there on repeat.
pub fn stable_bound(k: i32) -> Option<u32> {
    STABLE_BOUND.iter().find(|(s, _)| *s == k).map(|(_, b)| *b)
}

pub fn compute_group(db: &Database, n: u32, k: i32) -> Result<CohomotopyResult, PipelineError> {
    if stable_bound(k).is_none() {
        return Err(PipelineError::UnsupportedStem { k });
    }
    compute(db, n, k, &mut Vec::new())
}

fn lookup(
    db: &Database,
    ctx: Context,
    kind: &'static str,
    n: u32,
    k: i32,
) -> Result<GroupEntry, PipelineError> {
    db.lookup(&ctx).ok_or(PipelineError::Missing { kind, n, k })
}

fn compute(
    db: &Database,
    n: u32,
    k: i32,
    path: &mut Vec<u32>,
) -> Result<CohomotopyResult, PipelineError> {
    if path.contains(&n) {
        return Err(PipelineError::Cycle { n, k });
    }
    let coker = lookup(db, Context::CokerEta { n, k }, "coker-eta", n, k)?;
    let ker = lookup(db, Context::KerEta { n, k }, "ker-eta", n, k)?;

    // Coker η* sits in π_{n+k+4}(S^n) and enters through the pinch map.
    let pinch = format!("S^{} p", n as i32 + k);
    let sub = NamedGroup::new(
        coker
            .named()
            .generators
            .into_iter()
            .map(|g| NamedGenerator::new(format!("{} . {pinch}", g.name), g.order))
            .collect(),
    );
    let problem = ExtensionProblem::new(sub, ker.named()).with_context(n, k as u32);

    let mut evidence = db.lookup_evidence(n, k);
    for record in &mut evidence {
        if let Evidence::EhpInjectivity { source, resolved } = &mut record.evidence {
            path.push(n);
            let at_source = compute(db, source.0, k, path);
            path.pop();
            *resolved = Some(at_source?.two_primary.result);
        }
    }
    let candidates = enumerate_middle_groups(&problem)?;
    let two_primary = apply_evidence(&candidates, &evidence)?;

    let mut provenance: Vec<Citation> = coker.cites.iter().chain(&ker.cites).cloned().collect();
    provenance.extend(two_primary.evidence_used.iter().map(|e| e.cite.clone()));

    let mut generators = two_primary.generator_names.clone();
    let mut odd_parts = BTreeMap::new();
    for part in db.odd_parts(n, k) {
        let p = part.p.unwrap_or_default();
        match &part.generators {
            Some(gens) => generators.extend(gens.iter().map(|g| g.name.clone())),
            None => generators.extend(part.slots.iter().map(|o| format!("(unnamed Z/{o})"))),
        }
        provenance.extend(part.cites.iter().cloned());
        odd_parts.insert(p, part.group());
    }
    let total = direct_sum(&two_primary.result, &direct_sum_all(odd_parts.values()));
    dedup(&mut provenance);
    Ok(CohomotopyResult {
        n,
        k,
        two_primary,
        odd_parts,
        total,
        generators,
        provenance,
    })
}

fn dedup(cites: &mut Vec<Citation>) {
    let mut seen = std::collections::BTreeSet::new();
    cites.retain(|c| seen.insert((c.location.clone(), c.quote.clone())));
}

/// Free part plus 2-primary torsion.
pub fn two_local(g: &FinAbGroup) -> FinAbGroup {
    let t = g.primary_part(&BigInt::from(2));
    FinAbGroup::from_cyclic_orders(g.free_rank(), t.torsion())
}

fn prime_power_terms(g: &FinAbGroup) -> Vec<(BigInt, BigInt)> {
    g.elementary_divisors()
        .into_iter()
        .map(|(p, e)| {
            let q = num_traits::pow(p.clone(), e as usize);
            (p, q)
        })
        .collect()
}

/// Primary decomposition in `Z/q` terms: free part, then 2-part, then odd
/// primes ascending, e.g. `Z/4 + Z/4 + Z/9 + Z/3`.
pub fn primary_string(g: &FinAbGroup) -> String {
    let mut terms: Vec<String> = (0..g.free_rank()).map(|_| "Z".to_string()).collect();
    terms.extend(
        prime_power_terms(g)
            .into_iter()
            .map(|(_, q)| format!("Z/{q}")),
    );
    if terms.is_empty() {
        "0".into()
    } else {
        terms.join(" + ")
    }
}

/// The tables' notation: `inf` per free summand, the 2-part with exponents
/// for repeats, and the odd part as a single number when it is cyclic
/// (`63`, `21`, `15`), otherwise by prime powers (`9+3`, `3^2+5`).
pub fn paper_notation(g: &FinAbGroup) -> String {
    let mut terms: Vec<String> = (0..g.free_rank()).map(|_| "inf".to_string()).collect();
    let two = BigInt::from(2);
    let pp = prime_power_terms(g);
    let evens: Vec<BigInt> = pp
        .iter()
        .filter(|(p, _)| *p == two)
        .map(|(_, q)| q.clone())
        .collect();
    let odds: Vec<(BigInt, BigInt)> = pp.into_iter().filter(|(p, _)| *p != two).collect();
    push_with_exponents(&mut terms, &evens);
    let cyclic = {
        let mut primes: Vec<&BigInt> = odds.iter().map(|(p, _)| p).collect();
        primes.dedup();
        primes.len() == odds.len()
    };
    if cyclic && !odds.is_empty() {
        let order: BigInt = odds.iter().map(|(_, q)| q).product();
        terms.push(order.to_string());
    } else {
        push_with_exponents(
            &mut terms,
            &odds.into_iter().map(|(_, q)| q).collect::<Vec<_>>(),
        );
    }
    if terms.is_empty() {
        "0".into()
    } else {
        terms.join("+")
    }
}

fn push_with_exponents(terms: &mut Vec<String>, orders: &[BigInt]) {
    let mut i = 0;
    while i < orders.len() {
        let run = orders[i..].iter().take_while(|q| **q == orders[i]).count();
        terms.push(if run == 1 {
            orders[i].to_string()
        } else {
            format!("{}^{run}", orders[i])
        });
        i += run;
    }
}

/// Invariant factors in table notation, e.g. `inf+2+504`.
pub fn compact_invariants(g: &FinAbGroup) -> String {
    let mut terms: Vec<String> = (0..g.free_rank()).map(|_| "inf".to_string()).collect();
    terms.extend(g.torsion().iter().map(|d| d.to_string()));
    if terms.is_empty() {
        "0".into()
    } else {
        terms.join("+")
    }
}

/// Parses table notation: `0`, or `+`-separated terms `inf`, `q`, `q^m`.
pub fn parse_notation(s: &str) -> Result<FinAbGroup, String> {
    let s = s.trim();
    if s == "0" {
        return Ok(FinAbGroup::trivial());
    }
    let mut free = 0;
    let mut orders = Vec::new();
    for term in s.split('+').map(str::trim) {
        if term == "inf" {
            free += 1;
            continue;
        }
        let (base, exp) = match term.split_once('^') {
            Some((b, e)) => (
                b,
                e.parse::<usize>()
                    .map_err(|_| format!("bad exponent in '{term}'"))?,
            ),
            None => (term, 1),
        };
        let q: BigInt = base.parse().map_err(|_| format!("bad term '{term}'"))?;
        if q < BigInt::one() {
            return Err(format!("bad term '{term}'"));
        }
        orders.extend(std::iter::repeat_n(q, exp));
    }
    Ok(FinAbGroup::from_cyclic_orders(free, &orders))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TableRow {
    pub k: i32,
    pub n: u32,
    /// The row stands for every `m >= n`.
    pub open: bool,
    pub paper: String,
    pub canonical: String,
    pub total: FinAbGroup,
    /// Where the golden value is stated.
    pub cite: Option<Citation>,
}

impl TableRow {
    pub fn label(&self) -> String {
        if self.open {
            format!("{}+", self.n)
        } else {
            self.n.to_string()
        }
    }
}

pub fn render_table(db: &Database, k: i32) -> Result<Vec<TableRow>, PipelineError> {
    let bound = stable_bound(k).ok_or(PipelineError::UnsupportedStem { k })?;
    (2..=bound)
        .map(|n| {
            let total = compute_group(db, n, k)?.total;
            let cite = db
                .lookup(&Context::Bracket { n, k })
                .and_then(|e| e.cites.first().cloned());
            Ok(TableRow {
                k,
                n,
                open: n == bound,
                paper: paper_notation(&total),
                canonical: compact_invariants(&total),
                total,
                cite,
            })
        })
        .collect()
}

pub fn table_csv(rows: &[TableRow]) -> String {
    let mut out = String::from("k,n,canonical,paper_notation\n");
    for r in rows {
        out.push_str(&format!("{},{},{},{}\n", r.k, r.n, r.canonical, r.paper));
    }
    out
}

pub fn table_ascii(rows: &[TableRow]) -> String {
    let head = ("n", "table", "canonical", "source");
    let w0 = rows
        .iter()
        .map(|r| r.label().len())
        .chain([head.0.len()])
        .max()
        .unwrap_or(1);
    let w1 = rows
        .iter()
        .map(|r| r.paper.len())
        .chain([head.1.len()])
        .max()
        .unwrap_or(1);
    let w2 = rows
        .iter()
        .map(|r| r.canonical.len())
        .chain([head.2.len()])
        .max()
        .unwrap_or(1);
    let mut out = String::new();
    if let Some(r) = rows.first() {
        out.push_str(&format!("k = {}\n", r.k));
    }
    out.push_str(&format!(
        "{:<w0$}  {:<w1$}  {:<w2$}  {}\n",
        head.0, head.1, head.2, head.3
    ));
    for r in rows {
        let source = r.cite.as_ref().map_or("-", |c| c.location.as_str());
        out.push_str(&format!(
            "{:<w0$}  {:<w1$}  {:<w2$}  {source}\n",
            r.label(),
            r.paper,
            r.canonical
        ));
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MapSpaceResult {
    pub n: u32,
    pub group: FinAbGroup,
    pub generators: Vec<String>,
    /// True when assembled by [`compute_group`] rather than read off a record.
    pub computed: bool,
    pub provenance: Vec<Citation>,
}

/// `π_n(map_*(CP², CP²)) ≅ [Σ^n CP², S^5]` for `4 <= n <= 13`.
pub fn mapping_space_pi(db: &Database, n: u32) -> Result<MapSpaceResult, PipelineError> {
    if !(4..=13).contains(&n) {
        return Err(PipelineError::OutOfRange { n });
    }
    let k = n as i32 - 5;
    if stable_bound(k).is_some() {
        let r = compute_group(db, 5, k)?;
        return Ok(MapSpaceResult {
            n,
            group: r.total,
            generators: r.generators,
            computed: true,
            provenance: r.provenance,
        });
    }
    let e = db
        .lookup(&Context::MapSpace { n })
        .ok_or(PipelineError::Missing {
            kind: "mapspace",
            n,
            k,
        })?;
    Ok(MapSpaceResult {
        n,
        group: e.group(),
        generators: e.named().names(),
        computed: false,
        provenance: e.cites.clone(),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Status {
    Pass,
    /// Disagrees with the stated value in a way recorded in the dataset.
    Documented,
    Fail,
    Missing,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Pass => "PASS",
            Status::Documented => "DOCUMENTED",
            Status::Fail => "FAIL",
            Status::Missing => "MISSING",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cell {
    /// `k6`, `k7`, `k8`, `mapspace`, `gottlieb`, `components`.
    pub family: String,
    pub n: u32,
    pub status: Status,
    pub expected: String,
    pub computed: String,
    pub detail: String,
    pub cites: Vec<Citation>,
}

impl fmt::Display for Cell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} {} {} {} {}",
            self.family, self.n, self.status, self.expected, self.computed
        )?;
        if !self.detail.is_empty() {
            write!(f, " ({})", self.detail)?;
        }
        if let Some(c) = self.cites.first() {
            write!(f, " [{}]", c.location)?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct VerificationReport {
    pub cells: Vec<Cell>,
}

impl VerificationReport {
    pub fn family(&self, family: &str) -> impl Iterator<Item = &Cell> {
        let family = family.to_string();
        self.cells.iter().filter(move |c| c.family == family)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Cell> {
        self.cells
            .iter()
            .filter(|c| matches!(c.status, Status::Fail | Status::Missing))
    }

    pub fn documented(&self) -> impl Iterator<Item = &Cell> {
        self.cells.iter().filter(|c| c.status == Status::Documented)
    }

    pub fn is_ok(&self) -> bool {
        self.failures().next().is_none()
    }

    pub fn extend(&mut self, other: VerificationReport) {
        self.cells.extend(other.cells);
    }

    pub fn summary(&self) -> String {
        let failed = self.failures().count();
        let documented: Vec<String> = self
            .documented()
            .map(|c| format!("{} n={}", c.family, c.n))
            .collect();
        let docs = match documented.len() {
            0 => "no documented discrepancies".to_string(),
            1 => format!("1 documented discrepancy ({})", documented[0]),
            d => format!("{d} documented discrepancies ({})", documented.join(", ")),
        };
        if failed == 0 {
            format!("all golden cells pass; {docs}")
        } else {
            format!("{failed} of {} golden cells fail; {docs}", self.cells.len())
        }
    }
}

impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.cells {
            writeln!(f, "{c}")?;
        }
        write!(f, "{}", self.summary())
    }
}

fn compare(
    family: String,
    n: u32,
    expected: &FinAbGroup,
    computed: Result<FinAbGroup, PipelineError>,
    cites: Vec<Citation>,
) -> Cell {
    let (status, computed, detail) = match computed {
        Ok(g) if &g == expected => (Status::Pass, compact_invariants(&g), String::new()),
        Ok(g) => (
            Status::Fail,
            compact_invariants(&g),
            "not isomorphic".into(),
        ),
        Err(e @ PipelineError::Missing { .. }) => (Status::Missing, "-".into(), e.to_string()),
        Err(e) => (Status::Fail, "-".into(), e.to_string()),
    };
    Cell {
        family,
        n,
        status,
        expected: compact_invariants(expected),
        computed,
        detail,
        cites,
    }
}

fn missing(family: String, n: u32, what: &str) -> Cell {
    Cell {
        family,
        n,
        status: Status::Missing,
        expected: "-".into(),
        computed: "-".into(),
        detail: format!("no {what} record"),
        cites: Vec::new(),
    }
}

/// Every table cell and mapping-space group against its golden record.
pub fn verify_all(db: &Database) -> VerificationReport {
    let mut report = VerificationReport::default();
    for (k, bound) in STABLE_BOUND {
        let family = format!("k{k}");
        for n in 2..=bound {
            let Some(golden) = db.lookup(&Context::Bracket { n, k }) else {
                report.cells.push(missing(family.clone(), n, "bracket"));
                continue;
            };
            let computed = compute_group(db, n, k).map(|r| match golden.scope() {
                Scope::Full => r.total,
                Scope::TwoPrimary => two_local(&r.total),
            });
            report.cells.push(compare(
                family.clone(),
                n,
                &golden.group(),
                computed,
                golden.cites.clone(),
            ));
        }
    }
    for n in 4..=13 {
        let Some(golden) = db.lookup(&Context::MapSpace { n }) else {
            report.cells.push(missing("mapspace".into(), n, "mapspace"));
            continue;
        };
        let computed = mapping_space_pi(db, n).map(|r| r.group);
        report.cells.push(compare(
            "mapspace".into(),
            n,
            &golden.group(),
            computed,
            golden.cites.clone(),
        ));
    }
    report
}

/// The order law `|Coker|·|Ker| = |2-part|` with free ranks adding.
pub fn order_law_holds(r: &CohomotopyResult) -> bool {
    let p = &r.two_primary.problem;
    let (a, c) = (p.sub_group(), p.quot_group());
    let g = &r.two_primary.result;
    g.torsion_order() == a.torsion_order() * c.torsion_order()
        && g.free_rank() == a.free_rank() + c.free_rank()
        && r.odd_parts
            .values()
            .all(|o| o.free_rank() == 0 && !o.torsion_order().is_zero())
}
