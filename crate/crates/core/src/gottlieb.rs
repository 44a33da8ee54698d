//! Gottlieb groups `G_n(CP², S^{n+1})` as kernels of the Whitehead pairing
//! `f ↦ [f, ι_{n+1}]` on `[Σ^n CP², S^{n+1}]`, and the path components of
//! `map(Σ^n CP², S^{n+1})` up to translation by that kernel and negation.

use std::cmp::Reverse;
use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::abelian::{direct_sum, AbelianError, FinAbGroup, GroupHom, IntMatrix, Order};
use crate::db::{normalize, Context, Coord, Database};
use crate::ext::Citation;
use crate::named::NamedGroup;
use crate::pipeline::{compact_invariants, Cell, Status, VerificationReport};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GottliebError {
    #[error("no Whitehead entry for n={n}")]
    MissingWhitehead { n: u32 },
    #[error("no bracket record for [S^{n} CP2, S^{m}]", m = .n + 1)]
    MissingSource { n: u32 },
    #[error("image of '{source_name}' is not a generator of the source group at n={n}")]
    UnknownSource { n: u32, source_name: String },
    #[error("no Gottlieb group of S^{m} in degree {n}")]
    MissingSphere { n: u32, m: u32 },
    #[error("pairing at n={n}: {error}")]
    Pairing { n: u32, error: AbelianError },
    #[error("pairing at n={n} has infinite image; the coset space is infinite")]
    InfiniteCosets { n: u32 },
}

/// The pairing `[Σ^n CP², S^{n+1}] → target` as a homomorphism, additive
/// because the source is a suspension.
#[derive(Clone, Debug)]
pub struct Pairing {
    pub n: u32,
    pub source: NamedGroup,
    pub target: NamedGroup,
    pub hom: GroupHom,
    pub cites: Vec<Citation>,
}

pub fn pairing(db: &Database, n: u32) -> Result<Pairing, GottliebError> {
    let entry = db
        .lookup(&Context::Bracket { n: n + 1, k: -1 })
        .ok_or(GottliebError::MissingSource { n })?;
    let w = db
        .lookup_whitehead(n, n + 1)
        .ok_or(GottliebError::MissingWhitehead { n })?;
    let source = entry.named();
    let target = w.target.clone();
    let width = target.len();
    // Generators without a listed image pair to zero.
    let mut rows = vec![vec![BigInt::zero(); width]; source.len()];
    for img in &w.images {
        let i = source
            .generators
            .iter()
            .position(|g| normalize(&g.name) == normalize(&img.source))
            .ok_or_else(|| GottliebError::UnknownSource {
                n,
                source_name: img.source.clone(),
            })?;
        // An odd unknown is a unit in every cyclic summand it meets; ±1 stands in for it.
        rows[i] = img
            .coords
            .iter()
            .map(|c| match c {
                Coord::Int(v) => v.clone(),
                Coord::Odd { negative: true } => -BigInt::one(),
                Coord::Odd { negative: false } => BigInt::one(),
            })
            .collect();
    }
    let matrix = IntMatrix::from_big_rows(width, &rows);
    let hom = GroupHom::new(source.presented(), target.presented(), matrix)
        .map_err(|error| GottliebError::Pairing { n, error })?;
    let mut cites = entry.cites.clone();
    cites.extend(w.cites.iter().cloned());
    Ok(Pairing {
        n,
        source,
        target,
        hom,
        cites,
    })
}

/// `c_1 g_1 + c_2 g_2 + …` in generator names.
pub fn element_name(group: &NamedGroup, x: &[BigInt]) -> String {
    let terms: Vec<String> = group
        .generators
        .iter()
        .zip(x)
        .filter(|(_, c)| !c.is_zero())
        .map(|(g, c)| {
            if c.is_one() {
                g.name.clone()
            } else if *c == -BigInt::one() {
                format!("-{}", g.name)
            } else {
                format!("{c}{}", g.name)
            }
        })
        .collect();
    if terms.is_empty() {
        "0".into()
    } else {
        terms.join(" + ")
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GottliebResult {
    pub n: u32,
    pub group: FinAbGroup,
    /// Generating vectors in the source generators' coordinates.
    pub generators: Vec<Vec<BigInt>>,
    pub names: Vec<String>,
    pub ambient: FinAbGroup,
    /// Order of `ambient / group`.
    pub index: BigInt,
    pub cites: Vec<Citation>,
}

pub fn gottlieb_subgroup(db: &Database, n: u32) -> Result<GottliebResult, GottliebError> {
    let p = pairing(db, n)?;
    let kernel = p.hom.kernel_subgroup();
    let image = p.hom.image();
    if !image.is_finite() {
        return Err(GottliebError::InfiniteCosets { n });
    }
    let generators = tidy_generators(&p, &kernel.generators);
    let names = generators
        .iter()
        .map(|v| element_name(&p.source, v))
        .collect();
    let mut cites: Vec<Citation> = db
        .lookup(&Context::GottliebExpected { n })
        .map(|e| e.cites)
        .unwrap_or_default();
    cites.extend(p.cites);
    Ok(GottliebResult {
        n,
        group: kernel.group,
        generators,
        names,
        ambient: p.source.canonical(),
        index: image.torsion_order(),
        cites,
    })
}

/// Reduce coordinates modulo the generator orders, then keep, simplest
/// first, only vectors not already in the span of those kept.
fn tidy_generators(p: &Pairing, gens: &[Vec<BigInt>]) -> Vec<Vec<BigInt>> {
    let orders = p.source.orders();
    let mut reduced: Vec<Vec<BigInt>> = gens
        .iter()
        .map(|v| {
            v.iter()
                .zip(&orders)
                .map(|(c, o)| {
                    if o.is_zero() {
                        c.clone()
                    } else {
                        c.mod_floor(o)
                    }
                })
                .collect()
        })
        .collect();
    reduced.sort_by_key(|v| simplicity(v));
    let source = p.hom.source();
    let mut kept: Vec<Vec<BigInt>> = Vec::new();
    for v in reduced {
        let redundant = source
            .quotient(&kept)
            .and_then(|q| q.is_zero(&v))
            .unwrap_or(false);
        if !redundant {
            kept.push(v);
        }
    }
    kept
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComponentClass {
    pub representative: Vec<BigInt>,
    pub name: String,
    /// Cosets of the Gottlieb subgroup in the class: 1 or 2.
    pub cosets: usize,
    /// Number of homotopy classes, when the group is finite.
    pub size: Option<BigInt>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MatchStatus {
    Match,
    DocumentedDiscrepancy,
    Mismatch,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassificationReport {
    pub n: u32,
    pub gottlieb: FinAbGroup,
    pub classes: Vec<ComponentClass>,
    pub paper_expected: Option<u32>,
    pub status: MatchStatus,
    pub cites: Vec<Citation>,
}

/// Source vectors covering every coset: finite generators up to their
/// order, free ones up to `scale` times the order of their image.
fn coset_box(p: &Pairing, scale: u64) -> Result<Vec<Vec<BigInt>>, GottliebError> {
    let s = p.source.len();
    let mut ranges = Vec::with_capacity(s);
    for (i, g) in p.source.generators.iter().enumerate() {
        let bound = match &g.order {
            Order::Finite(o) => o.clone(),
            Order::Infinite => {
                let mut e = vec![BigInt::zero(); s];
                e[i] = BigInt::one();
                let img = p.hom.apply(&e).expect("unit vector has source width");
                match p.hom.target().element_order(&img) {
                    Ok(Order::Finite(o)) => o * scale,
                    _ => return Err(GottliebError::InfiniteCosets { n: p.n }),
                }
            }
        };
        ranges.push(
            bound
                .to_u64()
                .ok_or(GottliebError::InfiniteCosets { n: p.n })?,
        );
    }
    let mut out = Vec::new();
    let mut x = vec![0u64; s];
    loop {
        out.push(x.iter().map(|&c| BigInt::from(c)).collect());
        let mut i = s;
        loop {
            if i == 0 {
                return Ok(out);
            }
            i -= 1;
            x[i] += 1;
            if x[i] < ranges[i] {
                break;
            }
            x[i] = 0;
        }
    }
}

/// Cosets are the fibres of the pairing; a value and its negative share an orbit.
fn orbit_key(p: &Pairing, x: &[BigInt]) -> Vec<BigInt> {
    let target = p.hom.target();
    let img = p.hom.apply(x).expect("box vectors have source width");
    let neg: Vec<BigInt> = img.iter().map(|c| -c).collect();
    let a = target.normal_coordinates(&img).expect("target width");
    let b = target.normal_coordinates(&neg).expect("target width");
    a.min(b)
}

fn coset_key(p: &Pairing, x: &[BigInt]) -> Vec<BigInt> {
    let img = p.hom.apply(x).expect("box vectors have source width");
    p.hom
        .target()
        .normal_coordinates(&img)
        .expect("target width")
}

/// Simplest first: fewer nonzero coordinates, then smaller ones, then
/// earlier generators.
fn simplicity(x: &[BigInt]) -> (usize, BigInt, Reverse<Vec<BigInt>>) {
    let nonzero = x.iter().filter(|c| !c.is_zero()).count();
    let total: BigInt = x.iter().map(|c| c.abs()).sum();
    (nonzero, total, Reverse(x.to_vec()))
}

/// Simplest member and the cosets met.
type Orbit = (Vec<BigInt>, BTreeSet<Vec<BigInt>>);

pub fn classify_components(db: &Database, n: u32) -> Result<ClassificationReport, GottliebError> {
    let p = pairing(db, n)?;
    let gottlieb = gottlieb_subgroup(db, n)?;
    let mut orbits: BTreeMap<Vec<BigInt>, Orbit> = BTreeMap::new();
    for x in coset_box(&p, 1)? {
        let entry = orbits
            .entry(orbit_key(&p, &x))
            .or_insert_with(|| (x.clone(), BTreeSet::new()));
        if simplicity(&x) < simplicity(&entry.0) {
            entry.0 = x.clone();
        }
        entry.1.insert(coset_key(&p, &x));
    }
    let kernel_order = gottlieb.group.order();
    let mut classes: Vec<ComponentClass> = orbits
        .into_values()
        .map(|(rep, cosets)| ComponentClass {
            name: element_name(&p.source, &rep),
            representative: rep,
            cosets: cosets.len(),
            size: match &kernel_order {
                Order::Finite(o) => Some(o * cosets.len()),
                Order::Infinite => None,
            },
        })
        .collect();
    classes.sort_by_key(|c| simplicity(&c.representative));

    let expected = db.lookup(&Context::GottliebExpected { n });
    let paper_expected = expected.as_ref().and_then(|e| e.components);
    let documented = expected.as_ref().and_then(|e| e.documented);
    let count = classes.len() as u32;
    let status = if paper_expected == Some(count) {
        MatchStatus::Match
    } else if paper_expected.is_some() && documented == Some(count) {
        MatchStatus::DocumentedDiscrepancy
    } else {
        MatchStatus::Mismatch
    };
    let mut cites: Vec<Citation> = expected
        .iter()
        .flat_map(|e| e.cites.iter().cloned())
        .collect();
    cites.extend(p.cites.iter().cloned());
    Ok(ClassificationReport {
        n,
        gottlieb: gottlieb.group,
        classes,
        paper_expected,
        status,
        cites,
    })
}

impl ClassificationReport {
    pub fn render(&self) -> String {
        let cite = self
            .cites
            .first()
            .map(|c| format!("  [{}]", c.location))
            .unwrap_or_default();
        let mut out = format!(
            "n = {}: G = {}, {} classes{cite}\n",
            self.n,
            self.gottlieb,
            self.classes.len()
        );
        let plural = |k: &BigInt, one: &str, many: &str| {
            format!("{k} {}", if k.is_one() { one } else { many })
        };
        for c in &self.classes {
            let size = c
                .size
                .as_ref()
                .map(|s| format!(", {}", plural(s, "map", "maps")))
                .unwrap_or_default();
            let sign = if c.cosets == 2 { "+-" } else { "" };
            let cosets = plural(&BigInt::from(c.cosets), "coset", "cosets");
            out.push_str(&format!("  {sign}({}) + G  [{cosets}{size}]\n", c.name));
        }
        let status = match self.status {
            MatchStatus::Match => "match",
            MatchStatus::DocumentedDiscrepancy => "documented-discrepancy",
            MatchStatus::Mismatch => "mismatch",
        };
        match self.paper_expected {
            Some(e) => out.push_str(&format!("  stated: {e} ({status})")),
            None => out.push_str("  stated: none"),
        }
        out
    }
}

/// `w_f` and `w_g` are fibre homotopy equivalent when `[f, ι] = ±[g, ι]`.
pub fn fibration_equivalent(
    db: &Database,
    n: u32,
    f: &[BigInt],
    g: &[BigInt],
) -> Result<bool, GottliebError> {
    let p = pairing(db, n)?;
    let dim = |x: &[BigInt]| {
        if x.len() == p.source.len() {
            Ok(())
        } else {
            Err(GottliebError::Pairing {
                n,
                error: AbelianError::DimensionMismatch {
                    expected: p.source.len(),
                    found: x.len(),
                },
            })
        }
    };
    dim(f)?;
    dim(g)?;
    Ok(orbit_key(&p, f) == orbit_key(&p, g))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EquivalenceClass {
    /// `[f, ι]` up to sign, in the target's normal coordinates.
    pub value: Vec<BigInt>,
    pub members: Vec<Vec<BigInt>>,
    pub names: Vec<String>,
}

/// Classes of mutually equivalent evaluation fibrations among small
/// multiples of the generators (free ones up to twice their pairing order).
pub fn fibration_equivalences(
    db: &Database,
    n: u32,
) -> Result<Vec<EquivalenceClass>, GottliebError> {
    let p = pairing(db, n)?;
    let mut classes: BTreeMap<Vec<BigInt>, Vec<Vec<BigInt>>> = BTreeMap::new();
    for x in coset_box(&p, 2)? {
        classes.entry(orbit_key(&p, &x)).or_default().push(x);
    }
    Ok(classes
        .into_iter()
        .map(|(value, mut members)| {
            members.sort_by_key(|x| simplicity(x));
            let names = members.iter().map(|x| element_name(&p.source, x)).collect();
            EquivalenceClass {
                value,
                members,
                names,
            }
        })
        .collect())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NullComponent {
    pub group: FinAbGroup,
    pub sphere: FinAbGroup,
    pub bracket: FinAbGroup,
    pub cites: Vec<Citation>,
}

/// `G_n(map(Σ^m CP², S^{m+1}; 0)) ≅ G_n(S^{m+1}) ⊕ G_m(CP², S^{m+1})`.
pub fn null_component_gottlieb(
    db: &Database,
    n: u32,
    m: u32,
) -> Result<NullComponent, GottliebError> {
    let j = m + 1;
    let (sphere, mut cites) = if n < j {
        (
            FinAbGroup::trivial(),
            vec![Citation::new("connectivity", "pi_n(S^j) = 0 for n < j")],
        )
    } else {
        let e = db
            .lookup(&Context::SphereGottlieb {
                m: j,
                k: (n - j) as i32,
            })
            .ok_or(GottliebError::MissingSphere { n, m: j })?;
        (e.group(), e.cites.clone())
    };
    let g = gottlieb_subgroup(db, m)?;
    cites.extend(g.cites);
    Ok(NullComponent {
        group: direct_sum(&sphere, &g.group),
        sphere,
        bracket: g.group,
        cites,
    })
}

/// Gottlieb groups and component counts for every `n` with an expected record.
pub fn verify_gottlieb(db: &Database) -> VerificationReport {
    let mut report = VerificationReport::default();
    let mut ns: Vec<u32> = db
        .entries(crate::db::GroupKind::GottliebExpected)
        .flat_map(|e| e.rows.sample(0))
        .collect();
    ns.sort_unstable();
    ns.dedup();
    for n in ns {
        let Some(expected) = db.lookup(&Context::GottliebExpected { n }) else {
            continue;
        };
        let (status, computed, detail) = match gottlieb_subgroup(db, n) {
            Ok(g) if g.group == expected.group() => {
                (Status::Pass, compact_invariants(&g.group), String::new())
            }
            Ok(g) => (
                Status::Fail,
                compact_invariants(&g.group),
                "not isomorphic".into(),
            ),
            Err(e) => (Status::Missing, "-".into(), e.to_string()),
        };
        report.cells.push(Cell {
            family: "gottlieb".into(),
            n,
            status,
            expected: compact_invariants(&expected.group()),
            computed,
            detail,
            cites: expected.cites.clone(),
        });
        let Some(stated) = expected.components else {
            continue;
        };
        let (status, computed, detail) = match classify_components(db, n) {
            Ok(r) => {
                let count = r.classes.len();
                match r.status {
                    MatchStatus::Match => (Status::Pass, count.to_string(), String::new()),
                    MatchStatus::DocumentedDiscrepancy => (
                        Status::Documented,
                        count.to_string(),
                        format!("{count} rule-derived orbits, {stated} stated"),
                    ),
                    MatchStatus::Mismatch => (Status::Fail, count.to_string(), String::new()),
                }
            }
            Err(e) => (Status::Missing, "-".into(), e.to_string()),
        };
        report.cells.push(Cell {
            family: "components".into(),
            n,
            status,
            expected: stated.to_string(),
            computed,
            detail,
            cites: expected.cites.clone(),
        });
    }
    report
}
