//! The `.cohdb` text format.
//!
//! Records are blank-line-separated blocks. A block starts with a `[type]`
//! line followed by `key = value` lines; lines starting with `#` are
//! comments. Group expressions are `0` or terms `Z`, `Z^k`, `Z/n` joined by
//! `+`. Generator lists are comma-separated `name : order` entries with
//! `inf` for infinite order. Citations are `cite = location | quote` and may
//! repeat. Rows are `5`, `5-7` or `12+`.
//!
//! ```text
//! [coker-eta]
//! k = 6
//! n = 4
//! group = Z/8 + Z/2
//! generators = nu_4 . sigma' : 8, S(eps') : 2
//! cite = <location> | <verbatim quote>
//! ```

use std::collections::{BTreeSet, HashMap};

use num_bigint::BigInt;
use num_traits::{One, Signed};

use super::grammar::Element;
use super::{
    instantiate_name, normalize, parse_coefficient, Coord, Database, DbError, EvidencePayload,
    EvidenceRow, GroupEntry, GroupKind, RelationRecord, Rows, Scope, SymbolRecord, WhiteheadEntry,
    WhiteheadImage,
};
use crate::abelian::Order;
use crate::ext::{Citation, RelationTerm};
use crate::named::{NamedGenerator, NamedGroup};

struct Field<'a> {
    line: usize,
    key: &'a str,
    value: &'a str,
}

struct Block<'a> {
    line: usize,
    tag: &'a str,
    fields: Vec<Field<'a>>,
}

fn err(line: usize, reason: impl Into<String>) -> DbError {
    DbError::Parse {
        line,
        reason: reason.into(),
    }
}

fn blocks(text: &str) -> Result<Vec<Block<'_>>, DbError> {
    let mut out: Vec<Block> = Vec::new();
    let mut open = false;
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let t = raw.trim();
        if t.starts_with('#') {
            continue;
        }
        if t.is_empty() {
            open = false;
            continue;
        }
        if !open {
            let tag = t
                .strip_prefix('[')
                .and_then(|s| s.strip_suffix(']'))
                .ok_or_else(|| err(line, format!("expected a [record-type] line, found '{t}'")))?;
            out.push(Block {
                line,
                tag: tag.trim(),
                fields: Vec::new(),
            });
            open = true;
            continue;
        }
        let (key, value) = t
            .split_once('=')
            .ok_or_else(|| err(line, format!("expected 'key = value', found '{t}'")))?;
        out.last_mut().expect("open block").fields.push(Field {
            line,
            key: key.trim(),
            value: value.trim(),
        });
    }
    Ok(out)
}

impl<'a> Block<'a> {
    fn check_keys(&self, allowed: &[&str]) -> Result<(), DbError> {
        let mut seen = BTreeSet::new();
        for f in &self.fields {
            if !allowed.contains(&f.key) {
                return Err(err(
                    f.line,
                    format!("unknown key '{}' in [{}]", f.key, self.tag),
                ));
            }
            if !matches!(f.key, "cite" | "image") && !seen.insert(f.key) {
                return Err(err(f.line, format!("key '{}' given twice", f.key)));
            }
        }
        Ok(())
    }

    fn get(&self, key: &str) -> Option<&Field<'a>> {
        self.fields.iter().find(|f| f.key == key)
    }

    fn require(&self, key: &str) -> Result<&Field<'a>, DbError> {
        self.get(key)
            .ok_or_else(|| err(self.line, format!("[{}] is missing '{key}'", self.tag)))
    }

    fn cites(&self) -> Result<Vec<Citation>, DbError> {
        self.fields
            .iter()
            .filter(|f| f.key == "cite")
            .map(|f| {
                let (loc, quote) = f
                    .value
                    .split_once('|')
                    .ok_or_else(|| err(f.line, "cite must be 'location | quote'"))?;
                Ok(Citation::new(loc.trim(), quote.trim()))
            })
            .collect()
    }
}

fn int<T: std::str::FromStr>(f: &Field) -> Result<T, DbError> {
    f.value.parse().map_err(|_| {
        err(
            f.line,
            format!("'{}' is not a valid integer for '{}'", f.value, f.key),
        )
    })
}

fn rows(f: &Field) -> Result<Rows, DbError> {
    let bad = || err(f.line, format!("bad row range '{}'", f.value));
    let v = f.value;
    if let Some(lo) = v.strip_suffix('+') {
        return Ok(Rows::from(lo.trim().parse().map_err(|_| bad())?));
    }
    if let Some((lo, hi)) = v.split_once('-') {
        let lo: u32 = lo.trim().parse().map_err(|_| bad())?;
        let hi: u32 = hi.trim().parse().map_err(|_| bad())?;
        if hi < lo {
            return Err(bad());
        }
        return Ok(Rows { lo, hi: Some(hi) });
    }
    Ok(Rows::single(v.parse().map_err(|_| bad())?))
}

pub fn parse_group_expr(s: &str) -> Result<Vec<Order>, String> {
    let s = s.trim();
    if s == "0" {
        return Ok(Vec::new());
    }
    let mut out = Vec::new();
    for term in s.split('+') {
        let t: String = term.chars().filter(|c| !c.is_whitespace()).collect();
        if t == "Z" {
            out.push(Order::Infinite);
        } else if let Some(k) = t.strip_prefix("Z^") {
            let k: usize = k.parse().map_err(|_| format!("bad term '{t}'"))?;
            out.extend(std::iter::repeat_n(Order::Infinite, k));
        } else if let Some(n) = t.strip_prefix("Z/") {
            let n: BigInt = n.parse().map_err(|_| format!("bad term '{t}'"))?;
            if n <= BigInt::one() {
                return Err(format!("cyclic order must exceed 1 in '{t}'"));
            }
            out.push(Order::Finite(n));
        } else {
            return Err(format!("bad group term '{t}'"));
        }
    }
    Ok(out)
}

pub fn format_group_expr(slots: &[Order]) -> String {
    if slots.is_empty() {
        return "0".into();
    }
    slots
        .iter()
        .map(|o| match o {
            Order::Infinite => "Z".to_string(),
            Order::Finite(n) => format!("Z/{n}"),
        })
        .collect::<Vec<_>>()
        .join(" + ")
}

fn parse_order(s: &str) -> Result<Order, String> {
    let s = s.trim();
    if s == "inf" {
        return Ok(Order::Infinite);
    }
    let n: BigInt = s.parse().map_err(|_| format!("bad order '{s}'"))?;
    if !n.is_positive() {
        return Err(format!("order must be positive, found '{s}'"));
    }
    Ok(Order::Finite(n))
}

fn format_order(o: &Order) -> String {
    match o {
        Order::Infinite => "inf".into(),
        Order::Finite(n) => n.to_string(),
    }
}

/// Split at `sep` outside parentheses and brackets.
fn split_top(s: &str, sep: char) -> Vec<&str> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, c) in s.char_indices() {
        match c {
            '(' | '[' | '{' => depth += 1,
            ')' | ']' | '}' => depth -= 1,
            _ if c == sep && depth == 0 => {
                out.push(&s[start..i]);
                start = i + c.len_utf8();
            }
            _ => {}
        }
    }
    out.push(&s[start..]);
    out
}

fn name(f: &Field, s: &str) -> Result<String, DbError> {
    let s = s.trim();
    Element::parse(s).map_err(|e| err(f.line, e.to_string()))?;
    Ok(s.to_string())
}

fn generators(f: &Field) -> Result<Vec<NamedGenerator>, DbError> {
    if f.value == "-" {
        return Ok(Vec::new());
    }
    split_top(f.value, ',')
        .into_iter()
        .map(|entry| {
            let (n, o) = entry.rsplit_once(':').ok_or_else(|| {
                err(
                    f.line,
                    format!("generator '{}' lacks ': order'", entry.trim()),
                )
            })?;
            let order = parse_order(o).map_err(|e| err(f.line, e))?;
            Ok(NamedGenerator::new(name(f, n)?, order))
        })
        .collect()
}

fn format_generators(gens: &[NamedGenerator]) -> String {
    if gens.is_empty() {
        return "-".into();
    }
    gens.iter()
        .map(|g| format!("{} : {}", g.name, format_order(&g.order)))
        .collect::<Vec<_>>()
        .join(", ")
}

/// `multiple * lift = coef * element + ...`
fn statement(f: &Field) -> Result<(BigInt, String, Vec<RelationTerm>), DbError> {
    let (lhs, rhs) = f
        .value
        .split_once('=')
        .ok_or_else(|| err(f.line, "statement needs '='"))?;
    let (m, lift) = lhs
        .split_once('*')
        .ok_or_else(|| err(f.line, "left side must be 'multiple * lift'"))?;
    let multiple: BigInt = m
        .trim()
        .parse()
        .map_err(|_| err(f.line, format!("bad multiple '{}'", m.trim())))?;
    // A '+' inside an element name leaves a piece without '*'; glue it back.
    let mut pieces: Vec<String> = Vec::new();
    for piece in split_top(rhs, '+') {
        match pieces.last_mut() {
            Some(last) if !piece.contains('*') => {
                last.push('+');
                last.push_str(piece);
            }
            _ => pieces.push(piece.to_string()),
        }
    }
    let mut terms = Vec::new();
    for piece in pieces {
        let (c, e) = piece.split_once('*').ok_or_else(|| {
            err(
                f.line,
                format!("term '{}' must be 'coefficient * element'", piece.trim()),
            )
        })?;
        let coefficient = parse_coefficient(c)
            .ok_or_else(|| err(f.line, format!("bad coefficient '{}'", c.trim())))?;
        terms.push(RelationTerm {
            coefficient,
            element: name(f, e)?,
        });
    }
    Ok((multiple, name(f, lift)?, terms))
}

fn coords(f: &Field, s: &str) -> Result<Vec<Coord>, DbError> {
    if s.trim().is_empty() {
        return Ok(Vec::new());
    }
    s.split(',')
        .map(|c| match c.trim() {
            "odd" => Ok(Coord::Odd { negative: false }),
            "-odd" => Ok(Coord::Odd { negative: true }),
            t => t
                .parse::<BigInt>()
                .map(Coord::Int)
                .map_err(|_| err(f.line, format!("bad coordinate '{t}'"))),
        })
        .collect()
}

const GROUP_KEYS: [&str; 12] = [
    "n",
    "m",
    "k",
    "p",
    "group",
    "generators",
    "table",
    "scope",
    "components",
    "documented",
    "note",
    "cite",
];

fn group_entry(b: &Block, kind: GroupKind) -> Result<GroupEntry, DbError> {
    b.check_keys(&GROUP_KEYS)?;
    let rows = rows(b.require(kind.row_key())?)?;
    let other = if kind.row_key() == "n" { "m" } else { "n" };
    if let Some(f) = b.get(other) {
        return Err(err(
            f.line,
            format!("[{}] rows are keyed by '{}'", b.tag, kind.row_key()),
        ));
    }
    let k = match b.get("k") {
        Some(f) if kind.has_k() => Some(int(f)?),
        Some(f) => return Err(err(f.line, format!("[{}] takes no 'k'", b.tag))),
        None if kind.has_k() => return Err(err(b.line, format!("[{}] is missing 'k'", b.tag))),
        None => None,
    };
    let p = match (b.get("p"), kind) {
        (Some(f), GroupKind::OddPart) => Some(int(f)?),
        (None, GroupKind::OddPart) => return Err(err(b.line, "[odd-part] is missing 'p'")),
        (Some(f), _) => return Err(err(f.line, format!("[{}] takes no 'p'", b.tag))),
        (None, _) => None,
    };
    let gf = b.require("group")?;
    let slots = parse_group_expr(gf.value).map_err(|e| err(gf.line, e))?;
    let generators = b.get("generators").map(generators).transpose()?;
    let scope = match b.get("scope") {
        None => None,
        Some(f) => Some(match f.value {
            "full" => Scope::Full,
            "two-primary" => Scope::TwoPrimary,
            v => {
                return Err(err(
                    f.line,
                    format!("scope must be full or two-primary, found '{v}'"),
                ))
            }
        }),
    };
    Ok(GroupEntry {
        kind,
        rows,
        k,
        p,
        slots,
        generators,
        table: b.get("table").map(|f| f.value.to_string()),
        scope,
        components: b.get("components").map(int).transpose()?,
        documented: b.get("documented").map(int).transpose()?,
        note: b.get("note").map(|f| f.value.to_string()),
        cites: b.cites()?,
    })
}

fn symbol(b: &Block) -> Result<SymbolRecord, DbError> {
    b.check_keys(&["name", "order", "cite"])?;
    let nf = b.require("name")?;
    let of = b.require("order")?;
    Ok(SymbolRecord {
        name: name(nf, nf.value)?,
        order: parse_order(of.value).map_err(|e| err(of.line, e))?,
        cites: b.cites()?,
    })
}

fn relation(b: &Block) -> Result<RelationRecord, DbError> {
    b.check_keys(&["id", "statement", "cite"])?;
    let (multiple, lift, terms) = statement(b.require("statement")?)?;
    Ok(RelationRecord {
        id: b.require("id")?.value.to_string(),
        multiple,
        lift,
        terms,
        cites: b.cites()?,
    })
}

fn evidence(b: &Block) -> Result<EvidenceRow, DbError> {
    b.check_keys(&[
        "n", "k", "kind", "element", "order", "maps-to", "relation", "lifts", "source", "group",
        "cite",
    ])?;
    let kf = b.require("kind")?;
    let payload = match kf.value {
        "retraction" => EvidencePayload::Retraction,
        "element-order-lift" => {
            let ef = b.require("element")?;
            let of = b.require("order")?;
            let mf = b.require("maps-to")?;
            EvidencePayload::ElementOrderLift {
                element: name(ef, ef.value)?,
                order: parse_order(of.value).map_err(|e| err(of.line, e))?,
                maps_to: name(mf, mf.value)?,
            }
        }
        "relation" => {
            let lf = b.require("lifts")?;
            EvidencePayload::Relation {
                relation: b.require("relation")?.value.to_string(),
                lifts: name(lf, lf.value)?,
            }
        }
        "ehp" => EvidencePayload::Ehp {
            source_n: int(b.require("source")?)?,
        },
        "external" => {
            let gf = b.require("group")?;
            EvidencePayload::External {
                slots: parse_group_expr(gf.value).map_err(|e| err(gf.line, e))?,
            }
        }
        v => return Err(err(kf.line, format!("unknown evidence kind '{v}'"))),
    };
    Ok(EvidenceRow {
        rows: rows(b.require("n")?)?,
        k: int(b.require("k")?)?,
        payload,
        cites: b.cites()?,
    })
}

fn whitehead(b: &Block) -> Result<WhiteheadEntry, DbError> {
    b.check_keys(&["n", "m", "target", "image", "cite"])?;
    let images = b
        .fields
        .iter()
        .filter(|f| f.key == "image")
        .map(|f| {
            let (src, c) = f
                .value
                .rsplit_once("->")
                .ok_or_else(|| err(f.line, "image must be 'source -> coordinates'"))?;
            Ok(WhiteheadImage {
                source: name(f, src)?,
                coords: coords(f, c)?,
            })
        })
        .collect::<Result<Vec<_>, DbError>>()?;
    Ok(WhiteheadEntry {
        n: int(b.require("n")?)?,
        m: int(b.require("m")?)?,
        target: NamedGroup::new(generators(b.require("target")?)?),
        images,
        cites: b.cites()?,
    })
}

pub fn parse(text: &str) -> Result<Database, DbError> {
    let mut db = Database::default();
    // Start line of every record, for cross-reference errors.
    let mut lines: HashMap<String, usize> = HashMap::new();
    let mut evidence_lines = Vec::new();
    let mut relation_lines = Vec::new();
    let mut whitehead_lines = Vec::new();
    for b in blocks(text)? {
        match b.tag {
            "symbol" => {
                let s = symbol(&b)?;
                let key = format!("symbol {}", normalize(&s.name));
                if lines.insert(key.clone(), b.line).is_some() {
                    return Err(DbError::Duplicate { key, line: b.line });
                }
                db.symbols.push(s);
            }
            "relation" => {
                let r = relation(&b)?;
                let key = format!("relation {}", r.id);
                if lines.insert(key.clone(), b.line).is_some() {
                    return Err(DbError::Duplicate { key, line: b.line });
                }
                relation_lines.push(b.line);
                db.relations.push(r);
            }
            "evidence" => {
                evidence_lines.push(b.line);
                db.evidence.push(evidence(&b)?);
            }
            "whitehead" => {
                let w = whitehead(&b)?;
                let key = w.label();
                if lines.insert(key.clone(), b.line).is_some() {
                    return Err(DbError::Duplicate { key, line: b.line });
                }
                whitehead_lines.push(b.line);
                db.whitehead.push(w);
            }
            tag => {
                let kind = GroupKind::from_tag(tag)
                    .ok_or_else(|| err(b.line, format!("unknown record type [{tag}]")))?;
                let g = group_entry(&b, kind)?;
                if let Some(prev) = db.groups.iter().find(|o| {
                    o.kind == g.kind && o.k == g.k && o.p == g.p && o.rows.overlaps(&g.rows)
                }) {
                    return Err(DbError::Duplicate {
                        key: format!("{} overlaps {}", g.label(), prev.label()),
                        line: b.line,
                    });
                }
                db.groups.push(g);
            }
        }
    }
    check_references(&db, &evidence_lines, &relation_lines, &whitehead_lines)?;
    Ok(db)
}

/// Open ranges are sampled this many rows past their start.
const SAMPLE: u32 = 8;

fn check_references(
    db: &Database,
    evidence_lines: &[usize],
    relation_lines: &[usize],
    whitehead_lines: &[usize],
) -> Result<(), DbError> {
    let declared = db.declared_names();
    let resolves = |name: &str, rows: Option<&Rows>| -> bool {
        if declared.contains(&normalize(name)) {
            return true;
        }
        match rows {
            Some(r) => r
                .sample(SAMPLE)
                .all(|n| declared.contains(&normalize(&instantiate_name(name, n)))),
            None => false,
        }
    };
    let dangling = |record: String, line: usize, name: &str| DbError::Dangling {
        record,
        line,
        name: name.to_string(),
    };

    for (e, &line) in db.evidence.iter().zip(evidence_lines) {
        let names: Vec<&str> = match &e.payload {
            EvidencePayload::ElementOrderLift {
                element, maps_to, ..
            } => vec![element, maps_to],
            EvidencePayload::Relation { relation, lifts } => {
                if db.relation(relation).is_none() {
                    return Err(dangling(e.label(), line, relation));
                }
                vec![lifts]
            }
            _ => vec![],
        };
        for n in names {
            if !resolves(n, Some(&e.rows)) {
                return Err(dangling(e.label(), line, n));
            }
        }
    }
    for (r, &line) in db.relations.iter().zip(relation_lines) {
        let users: Vec<&Rows> = db
            .evidence
            .iter()
            .filter(|e| matches!(&e.payload, EvidencePayload::Relation { relation, .. } if *relation == r.id))
            .map(|e| &e.rows)
            .collect();
        let names = std::iter::once(&r.lift).chain(r.terms.iter().map(|t| &t.element));
        for n in names {
            let ok = if users.is_empty() {
                resolves(n, None)
            } else {
                users.iter().all(|rows| resolves(n, Some(rows)))
            };
            if !ok {
                return Err(dangling(format!("[relation] id={}", r.id), line, n));
            }
        }
    }
    for (w, &line) in db.whitehead.iter().zip(whitehead_lines) {
        for img in &w.images {
            if !resolves(&img.source, None) {
                return Err(dangling(w.label(), line, &img.source));
            }
        }
    }
    Ok(())
}

fn push_cites(out: &mut String, cites: &[Citation]) {
    for c in cites {
        out.push_str(&format!("cite = {} | {}\n", c.location, c.quote));
    }
}

pub fn serialize(db: &Database) -> String {
    let mut out = String::new();
    for g in &db.groups {
        out.push_str(&format!("[{}]\n", g.kind.tag()));
        if let Some(k) = g.k {
            out.push_str(&format!("k = {k}\n"));
        }
        out.push_str(&format!("{} = {}\n", g.kind.row_key(), g.rows));
        if let Some(p) = g.p {
            out.push_str(&format!("p = {p}\n"));
        }
        out.push_str(&format!("group = {}\n", format_group_expr(&g.slots)));
        if let Some(gens) = &g.generators {
            out.push_str(&format!("generators = {}\n", format_generators(gens)));
        }
        if let Some(t) = &g.table {
            out.push_str(&format!("table = {t}\n"));
        }
        if let Some(s) = g.scope {
            let s = match s {
                Scope::Full => "full",
                Scope::TwoPrimary => "two-primary",
            };
            out.push_str(&format!("scope = {s}\n"));
        }
        if let Some(c) = g.components {
            out.push_str(&format!("components = {c}\n"));
        }
        if let Some(c) = g.documented {
            out.push_str(&format!("documented = {c}\n"));
        }
        if let Some(n) = &g.note {
            out.push_str(&format!("note = {n}\n"));
        }
        push_cites(&mut out, &g.cites);
        out.push('\n');
    }
    for s in &db.symbols {
        out.push_str(&format!(
            "[symbol]\nname = {}\norder = {}\n",
            s.name,
            format_order(&s.order)
        ));
        push_cites(&mut out, &s.cites);
        out.push('\n');
    }
    for r in &db.relations {
        out.push_str(&format!(
            "[relation]\nid = {}\nstatement = {}\n",
            r.id,
            r.statement()
        ));
        push_cites(&mut out, &r.cites);
        out.push('\n');
    }
    for e in &db.evidence {
        out.push_str(&format!(
            "[evidence]\nk = {}\nn = {}\nkind = {}\n",
            e.k,
            e.rows,
            e.payload.kind()
        ));
        match &e.payload {
            EvidencePayload::Retraction => {}
            EvidencePayload::ElementOrderLift {
                element,
                order,
                maps_to,
            } => out.push_str(&format!(
                "element = {element}\norder = {}\nmaps-to = {maps_to}\n",
                format_order(order)
            )),
            EvidencePayload::Relation { relation, lifts } => {
                out.push_str(&format!("relation = {relation}\nlifts = {lifts}\n"))
            }
            EvidencePayload::Ehp { source_n } => out.push_str(&format!("source = {source_n}\n")),
            EvidencePayload::External { slots } => {
                out.push_str(&format!("group = {}\n", format_group_expr(slots)))
            }
        }
        push_cites(&mut out, &e.cites);
        out.push('\n');
    }
    for w in &db.whitehead {
        out.push_str(&format!(
            "[whitehead]\nn = {}\nm = {}\ntarget = {}\n",
            w.n,
            w.m,
            format_generators(&w.target.generators)
        ));
        for img in &w.images {
            let c: Vec<String> = img.coords.iter().map(|c| c.to_string()).collect();
            out.push_str(&format!("image = {} -> {}\n", img.source, c.join(", ")));
        }
        push_cites(&mut out, &w.cites);
        out.push('\n');
    }
    out
}
