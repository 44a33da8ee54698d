//! The cited dataset: η*-cokernel and kernel tables, odd-primary parts,
//! golden results, Whitehead-product values, relations and extension evidence.
//!
//! Stored as a `.cohdb` text file, see [`format`].

pub mod format;
pub mod grammar;
mod validate;

pub use validate::{validate_db, CheckResult, ValidationReport, STABLE_BOUND};

use std::collections::BTreeSet;
use std::fmt;
use std::path::Path;

use num_bigint::BigInt;
use thiserror::Error;

use crate::abelian::{FinAbGroup, Order};
use crate::ext::{Citation, Coefficient, Evidence, EvidenceRecord, RelationTerm};
use crate::named::{NamedGenerator, NamedGroup};
use grammar::Element;

/// The dataset shipped with the crate.
pub const SHIPPED: &str = include_str!("../../data/paper.cohdb");

#[derive(Debug, Error)]
pub enum DbError {
    #[error("line {line}: {reason}")]
    Parse { line: usize, reason: String },
    #[error("{record} (line {line}): dangling reference to '{name}'")]
    Dangling {
        record: String,
        line: usize,
        name: String,
    },
    #[error("line {line}: duplicate record {key}")]
    Duplicate { key: String, line: usize },
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GroupKind {
    /// `π_{m+k}(S^m)`.
    Sphere,
    CokerEta,
    KerEta,
    /// The p-primary part of `[Σ^{n+k}CP², S^n]` for an odd prime p.
    OddPart,
    /// `[Σ^{n+k}CP², S^n]` as stated in the source; k may be negative.
    Bracket,
    /// `G_{m+k}(S^m)`.
    SphereGottlieb,
    /// `π_n(map_*(CP², CP²))`.
    MapSpace,
    /// `G_n(CP², S^{n+1})` with the number of path components.
    GottliebExpected,
}

impl GroupKind {
    pub const ALL: [GroupKind; 8] = [
        GroupKind::Sphere,
        GroupKind::CokerEta,
        GroupKind::KerEta,
        GroupKind::OddPart,
        GroupKind::Bracket,
        GroupKind::SphereGottlieb,
        GroupKind::MapSpace,
        GroupKind::GottliebExpected,
    ];

    pub fn tag(self) -> &'static str {
        match self {
            GroupKind::Sphere => "sphere",
            GroupKind::CokerEta => "coker-eta",
            GroupKind::KerEta => "ker-eta",
            GroupKind::OddPart => "odd-part",
            GroupKind::Bracket => "bracket",
            GroupKind::SphereGottlieb => "sphere-gottlieb",
            GroupKind::MapSpace => "mapspace",
            GroupKind::GottliebExpected => "gottlieb-expected",
        }
    }

    pub fn from_tag(tag: &str) -> Option<GroupKind> {
        GroupKind::ALL.into_iter().find(|k| k.tag() == tag)
    }

    /// Name of the row variable: the sphere dimension for sphere records.
    pub fn row_key(self) -> &'static str {
        match self {
            GroupKind::Sphere | GroupKind::SphereGottlieb => "m",
            _ => "n",
        }
    }

    fn has_k(self) -> bool {
        !matches!(self, GroupKind::MapSpace | GroupKind::GottliebExpected)
    }
}

/// A row range: `5`, `5-7` or `12+`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Rows {
    pub lo: u32,
    pub hi: Option<u32>,
}

impl Rows {
    pub fn single(n: u32) -> Self {
        Rows { lo: n, hi: Some(n) }
    }

    pub fn from(n: u32) -> Self {
        Rows { lo: n, hi: None }
    }

    pub fn contains(&self, n: u32) -> bool {
        n >= self.lo && self.hi.is_none_or(|h| n <= h)
    }

    pub fn overlaps(&self, other: &Rows) -> bool {
        let a_hi = self.hi.unwrap_or(u32::MAX);
        let b_hi = other.hi.unwrap_or(u32::MAX);
        self.lo <= b_hi && other.lo <= a_hi
    }

    /// Concrete rows, with `extra` rows standing in for an open range.
    pub fn sample(&self, extra: u32) -> impl Iterator<Item = u32> {
        self.lo..=self.hi.unwrap_or(self.lo + extra)
    }
}

impl fmt::Display for Rows {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.hi {
            None => write!(f, "{}+", self.lo),
            Some(h) if h == self.lo => write!(f, "{}", self.lo),
            Some(h) => write!(f, "{}-{}", self.lo, h),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Scope {
    Full,
    /// Only the 2-primary part is stated.
    TwoPrimary,
}

/// A concrete key for [`Database::lookup`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Context {
    Sphere { m: u32, k: i32 },
    CokerEta { n: u32, k: i32 },
    KerEta { n: u32, k: i32 },
    OddPart { n: u32, k: i32, p: u32 },
    Bracket { n: u32, k: i32 },
    SphereGottlieb { m: u32, k: i32 },
    MapSpace { n: u32 },
    GottliebExpected { n: u32 },
}

impl Context {
    fn parts(&self) -> (GroupKind, u32, Option<i32>, Option<u32>) {
        match *self {
            Context::Sphere { m, k } => (GroupKind::Sphere, m, Some(k), None),
            Context::CokerEta { n, k } => (GroupKind::CokerEta, n, Some(k), None),
            Context::KerEta { n, k } => (GroupKind::KerEta, n, Some(k), None),
            Context::OddPart { n, k, p } => (GroupKind::OddPart, n, Some(k), Some(p)),
            Context::Bracket { n, k } => (GroupKind::Bracket, n, Some(k), None),
            Context::SphereGottlieb { m, k } => (GroupKind::SphereGottlieb, m, Some(k), None),
            Context::MapSpace { n } => (GroupKind::MapSpace, n, None, None),
            Context::GottliebExpected { n } => (GroupKind::GottliebExpected, n, None, None),
        }
    }
}

impl fmt::Display for Context {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (kind, n, k, p) = self.parts();
        write!(f, "{} {}={n}", kind.tag(), kind.row_key())?;
        if let Some(k) = k {
            write!(f, " k={k}")?;
        }
        if let Some(p) = p {
            write!(f, " p={p}")?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupEntry {
    pub kind: GroupKind,
    pub rows: Rows,
    pub k: Option<i32>,
    pub p: Option<u32>,
    /// The group expression, one order per cyclic term.
    pub slots: Vec<Order>,
    /// Named generators, one per slot; optional for golden records.
    pub generators: Option<Vec<NamedGenerator>>,
    /// The printed table cell, verbatim.
    pub table: Option<String>,
    pub scope: Option<Scope>,
    pub components: Option<u32>,
    /// Component count the identification rules give where it differs from
    /// `components`.
    pub documented: Option<u32>,
    pub note: Option<String>,
    pub cites: Vec<Citation>,
}

impl GroupEntry {
    pub fn group(&self) -> FinAbGroup {
        orders_group(&self.slots)
    }

    /// The generators as a named group, or anonymous `g0, g1, …` names.
    pub fn named(&self) -> NamedGroup {
        match &self.generators {
            Some(gens) => NamedGroup::new(gens.clone()),
            None => NamedGroup::new(
                self.slots
                    .iter()
                    .enumerate()
                    .map(|(i, o)| NamedGenerator::new(format!("g{i}"), o.clone()))
                    .collect(),
            ),
        }
    }

    pub fn scope(&self) -> Scope {
        self.scope.unwrap_or(Scope::Full)
    }

    pub fn label(&self) -> String {
        let mut s = format!(
            "[{}] {}={}",
            self.kind.tag(),
            self.kind.row_key(),
            self.rows
        );
        if let Some(k) = self.k {
            s.push_str(&format!(" k={k}"));
        }
        if let Some(p) = self.p {
            s.push_str(&format!(" p={p}"));
        }
        s
    }

    /// The entry for the single row `n`, with generator names instantiated.
    pub fn instantiate(&self, n: u32) -> GroupEntry {
        let mut e = self.clone();
        e.rows = Rows::single(n);
        if let Some(gens) = &mut e.generators {
            for g in gens {
                g.name = instantiate_name(&g.name, n);
            }
        }
        e
    }
}

pub(crate) fn orders_group(slots: &[Order]) -> FinAbGroup {
    let orders: Vec<BigInt> = slots
        .iter()
        .map(|o| match o {
            Order::Finite(n) => n.clone(),
            Order::Infinite => BigInt::from(0),
        })
        .collect();
    FinAbGroup::from_cyclic_orders(0, &orders)
}

pub(crate) fn instantiate_name(name: &str, n: u32) -> String {
    match Element::parse(name) {
        Ok(e) => e.instantiate(n).to_string(),
        Err(_) => name.to_string(),
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymbolRecord {
    pub name: String,
    pub order: Order,
    pub cites: Vec<Citation>,
}

/// `multiple · lift = Σ coefficient · element`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RelationRecord {
    pub id: String,
    pub multiple: BigInt,
    pub lift: String,
    pub terms: Vec<RelationTerm>,
    pub cites: Vec<Citation>,
}

impl RelationRecord {
    pub fn instantiate(&self, n: u32) -> RelationRecord {
        let mut r = self.clone();
        r.lift = instantiate_name(&r.lift, n);
        for t in &mut r.terms {
            t.element = instantiate_name(&t.element, n);
        }
        r
    }

    pub fn statement(&self) -> String {
        let rhs: Vec<String> = self
            .terms
            .iter()
            .map(|t| format!("{} * {}", t.coefficient, t.element))
            .collect();
        format!("{} * {} = {}", self.multiple, self.lift, rhs.join(" + "))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum EvidencePayload {
    Retraction,
    ElementOrderLift {
        element: String,
        order: Order,
        maps_to: String,
    },
    Relation {
        relation: String,
        lifts: String,
    },
    /// Same group as at `(source_n, k)`.
    Ehp {
        source_n: u32,
    },
    External {
        slots: Vec<Order>,
    },
}

impl EvidencePayload {
    pub fn kind(&self) -> &'static str {
        match self {
            EvidencePayload::Retraction => "retraction",
            EvidencePayload::ElementOrderLift { .. } => "element-order-lift",
            EvidencePayload::Relation { .. } => "relation",
            EvidencePayload::Ehp { .. } => "ehp",
            EvidencePayload::External { .. } => "external",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EvidenceRow {
    pub rows: Rows,
    pub k: i32,
    pub payload: EvidencePayload,
    pub cites: Vec<Citation>,
}

impl EvidenceRow {
    pub fn label(&self) -> String {
        format!(
            "[evidence] n={} k={} kind={}",
            self.rows,
            self.k,
            self.payload.kind()
        )
    }
}

/// A Whitehead-product coordinate: an integer, or an unknown odd integer.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Coord {
    Int(BigInt),
    Odd { negative: bool },
}

impl fmt::Display for Coord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Coord::Int(c) => write!(f, "{c}"),
            Coord::Odd { negative: false } => f.write_str("odd"),
            Coord::Odd { negative: true } => f.write_str("-odd"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WhiteheadImage {
    pub source: String,
    pub coords: Vec<Coord>,
}

/// `f ↦ [f, ι_m]` on `[Σ^n CP², S^m]`, given on generators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WhiteheadEntry {
    pub n: u32,
    pub m: u32,
    pub target: NamedGroup,
    pub images: Vec<WhiteheadImage>,
    pub cites: Vec<Citation>,
}

impl WhiteheadEntry {
    pub fn label(&self) -> String {
        format!("[whitehead] n={} m={}", self.n, self.m)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Database {
    pub groups: Vec<GroupEntry>,
    pub symbols: Vec<SymbolRecord>,
    pub relations: Vec<RelationRecord>,
    pub evidence: Vec<EvidenceRow>,
    pub whitehead: Vec<WhiteheadEntry>,
}

pub fn load_db(path: impl AsRef<Path>) -> Result<Database, DbError> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|source| DbError::Io {
        path: path.display().to_string(),
        source,
    })?;
    Database::parse(&text)
}

impl Database {
    pub fn parse(text: &str) -> Result<Database, DbError> {
        format::parse(text)
    }

    pub fn shipped() -> Database {
        Database::parse(SHIPPED).expect("shipped dataset parses")
    }

    pub fn to_cohdb(&self) -> String {
        format::serialize(self)
    }

    pub fn entries(&self, kind: GroupKind) -> impl Iterator<Item = &GroupEntry> {
        self.groups.iter().filter(move |g| g.kind == kind)
    }

    /// The record covering `ctx`, with names instantiated for that row.
    pub fn lookup(&self, ctx: &Context) -> Option<GroupEntry> {
        let (kind, n, k, p) = ctx.parts();
        self.groups
            .iter()
            .find(|g| g.kind == kind && g.k == k && g.p == p && g.rows.contains(n))
            .map(|g| g.instantiate(n))
    }

    /// All odd-primary records for `(n, k)`, ascending by prime.
    pub fn odd_parts(&self, n: u32, k: i32) -> Vec<GroupEntry> {
        let mut out: Vec<GroupEntry> = self
            .groups
            .iter()
            .filter(|g| g.kind == GroupKind::OddPart && g.k == Some(k) && g.rows.contains(n))
            .map(|g| g.instantiate(n))
            .collect();
        out.sort_by_key(|g| g.p);
        out
    }

    pub fn relation(&self, id: &str) -> Option<&RelationRecord> {
        self.relations.iter().find(|r| r.id == id)
    }

    pub fn evidence_rows(&self, n: u32, k: i32) -> impl Iterator<Item = &EvidenceRow> {
        self.evidence
            .iter()
            .filter(move |e| e.k == k && e.rows.contains(n))
    }

    /// Evidence for `(n, k)` as solver input. EHP rows come back with
    /// `resolved: None`; the pipeline fills them in.
    pub fn lookup_evidence(&self, n: u32, k: i32) -> Vec<EvidenceRecord> {
        self.evidence_rows(n, k)
            .filter_map(|row| self.evidence_record(row, n))
            .collect()
    }

    fn evidence_record(&self, row: &EvidenceRow, n: u32) -> Option<EvidenceRecord> {
        let cite = row
            .cites
            .first()
            .cloned()
            .unwrap_or_else(|| Citation::new("", ""));
        let evidence = match &row.payload {
            EvidencePayload::Retraction => Evidence::Retraction,
            EvidencePayload::ElementOrderLift {
                element,
                order,
                maps_to,
            } => Evidence::ElementOrderLift {
                element: instantiate_name(element, n),
                order: order.clone(),
                maps_to: instantiate_name(maps_to, n),
            },
            EvidencePayload::Relation { relation, lifts } => {
                let r = self.relation(relation)?.instantiate(n);
                Evidence::RelationFact {
                    id: r.id,
                    lift: r.lift,
                    lifts: instantiate_name(lifts, n),
                    multiple: r.multiple,
                    terms: r.terms,
                }
            }
            EvidencePayload::Ehp { source_n } => Evidence::EhpInjectivity {
                source: (*source_n, row.k.unsigned_abs()),
                resolved: None,
            },
            EvidencePayload::External { slots } => Evidence::ExternalFact {
                group: orders_group(slots),
            },
        };
        Some(EvidenceRecord::new(evidence, cite))
    }

    pub fn lookup_whitehead(&self, n: u32, m: u32) -> Option<&WhiteheadEntry> {
        self.whitehead.iter().find(|w| w.n == n && w.m == m)
    }

    /// Canonical names (families instantiated over sample rows) that a
    /// reference may resolve to.
    pub(crate) fn declared_names(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        for g in &self.groups {
            for gen in g.generators.iter().flatten() {
                insert_family(&mut out, &gen.name, &g.rows, 48);
            }
        }
        for s in &self.symbols {
            insert_family(&mut out, &s.name, &Rows::from(1), 48);
        }
        for w in &self.whitehead {
            for gen in &w.target.generators {
                out.insert(normalize(&gen.name));
            }
        }
        out
    }
}

fn insert_family(out: &mut BTreeSet<String>, name: &str, rows: &Rows, extra: u32) {
    out.insert(normalize(name));
    for n in rows.sample(extra) {
        out.insert(normalize(&instantiate_name(name, n)));
    }
}

/// Canonical spelling with any trailing pinch map dropped.
pub(crate) fn normalize(name: &str) -> String {
    let canon = grammar::canonical_name(name).unwrap_or_else(|_| name.to_string());
    crate::ext::normalize_element(&canon)
}

/// `odd` or an integer.
pub(crate) fn parse_coefficient(s: &str) -> Option<Coefficient> {
    match s.trim() {
        "odd" => Some(Coefficient::Odd),
        t => t.parse::<BigInt>().ok().map(Coefficient::Int),
    }
}
