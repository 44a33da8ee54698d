//! `cohomotopy_py`: the dataset, group computations and verification from Python.

use num_bigint::BigInt;
use pyo3::create_exception;
use pyo3::exceptions::{PyException, PyValueError};
use pyo3::prelude::*;

use cohomotopy::abelian::{FinAbGroup, IntMatrix, PresentedGroup};
use cohomotopy::db::{load_db, validate_db};
use cohomotopy::ext::{enumerate_middle_groups, ExtError, ExtensionProblem};
use cohomotopy::gottlieb::{self as gt, GottliebError, MatchStatus};
use cohomotopy::named::{NamedGenerator, NamedGroup};
use cohomotopy::pipeline::{self, PipelineError};

create_exception!(cohomotopy_py, DatabaseError, PyException);
create_exception!(cohomotopy_py, UnresolvedExtension, PyException);

fn pipeline_err(e: PipelineError) -> PyErr {
    match e {
        PipelineError::Ext(ExtError::Unresolved { .. }) => {
            UnresolvedExtension::new_err(e.to_string())
        }
        PipelineError::UnsupportedStem { .. } | PipelineError::OutOfRange { .. } => {
            PyValueError::new_err(e.to_string())
        }
        _ => DatabaseError::new_err(e.to_string()),
    }
}

fn gottlieb_err(e: GottliebError) -> PyErr {
    DatabaseError::new_err(e.to_string())
}

type Cites = Vec<(String, String)>;

fn cites(c: &[cohomotopy::ext::Citation]) -> Cites {
    c.iter()
        .map(|c| (c.location.clone(), c.quote.clone()))
        .collect()
}

/// A finitely generated abelian group in invariant-factor form.
#[pyclass(name = "Group", frozen, get_all, skip_from_py_object)]
#[derive(Clone)]
pub struct PyGroup {
    free_rank: usize,
    torsion: Vec<BigInt>,
}

impl From<&FinAbGroup> for PyGroup {
    fn from(g: &FinAbGroup) -> Self {
        PyGroup {
            free_rank: g.free_rank(),
            torsion: g.torsion().to_vec(),
        }
    }
}

impl PyGroup {
    fn group(&self) -> FinAbGroup {
        FinAbGroup::from_cyclic_orders(self.free_rank, &self.torsion)
    }
}

#[pymethods]
impl PyGroup {
    #[new]
    #[pyo3(signature = (free_rank=0, orders=Vec::new()))]
    fn new(free_rank: usize, orders: Vec<BigInt>) -> Self {
        PyGroup::from(&FinAbGroup::from_cyclic_orders(free_rank, &orders))
    }

    /// Sum of prime-power cyclic groups, e.g. "Z/4 + Z/4 + Z/9 + Z/3".
    fn primary(&self) -> String {
        pipeline::primary_string(&self.group())
    }

    /// Tabulated notation, e.g. "4^2+9+3".
    fn notation(&self) -> String {
        pipeline::paper_notation(&self.group())
    }

    fn __eq__(&self, other: &PyGroup) -> bool {
        self.free_rank == other.free_rank && self.torsion == other.torsion
    }

    fn __repr__(&self) -> String {
        format!("Group({})", self.group())
    }
}

#[pyclass(name = "Computation", frozen, get_all)]
pub struct PyComputation {
    n: u32,
    k: i32,
    group: PyGroup,
    generators: Vec<String>,
    evidence: Vec<String>,
    citations: Cites,
}

#[pyclass(name = "Gottlieb", frozen, get_all)]
pub struct PyGottlieb {
    n: u32,
    group: PyGroup,
    ambient: PyGroup,
    index: BigInt,
    generators: Vec<String>,
    citations: Cites,
}

#[pyclass(name = "Components", frozen, get_all)]
pub struct PyComponents {
    n: u32,
    gottlieb: PyGroup,
    /// (representative, number of cosets) per class.
    classes: Vec<(String, usize)>,
    expected: Option<u32>,
    status: String,
    report: String,
}

/// The cited dataset; the built-in copy unless a path is given.
#[pyclass(name = "Database", frozen)]
pub struct PyDatabase {
    db: cohomotopy::db::Database,
}

#[pymethods]
impl PyDatabase {
    #[new]
    #[pyo3(signature = (path=None))]
    fn new(path: Option<String>) -> PyResult<Self> {
        let db = match path {
            Some(p) => load_db(&p).map_err(|e| DatabaseError::new_err(e.to_string()))?,
            None => cohomotopy::db::Database::shipped(),
        };
        Ok(PyDatabase { db })
    }

    /// Failed structural checks as (check, record, detail); empty when valid.
    fn check(&self) -> Vec<(String, String, String)> {
        validate_db(&self.db)
            .failures()
            .map(|f| (f.check.to_string(), f.record.clone(), f.detail.clone()))
            .collect()
    }

    /// [S^{n+k} CP^2, S^n].
    fn compute(&self, n: u32, k: i32) -> PyResult<PyComputation> {
        let r = pipeline::compute_group(&self.db, n, k).map_err(pipeline_err)?;
        Ok(PyComputation {
            n,
            k,
            group: PyGroup::from(&r.total),
            generators: r.generators.clone(),
            evidence: r
                .two_primary
                .evidence_used
                .iter()
                .map(|e| e.evidence.kind().to_string())
                .collect(),
            citations: cites(&r.provenance),
        })
    }

    #[pyo3(signature = (k, format="ascii"))]
    fn table(&self, k: i32, format: &str) -> PyResult<String> {
        let rows = pipeline::render_table(&self.db, k).map_err(pipeline_err)?;
        match format {
            "ascii" => Ok(pipeline::table_ascii(&rows)),
            "csv" => Ok(pipeline::table_csv(&rows)),
            other => Err(PyValueError::new_err(format!("unknown format '{other}'"))),
        }
    }

    fn mapspace(&self, n: u32) -> PyResult<PyGroup> {
        let m = pipeline::mapping_space_pi(&self.db, n).map_err(pipeline_err)?;
        Ok(PyGroup::from(&m.group))
    }

    fn gottlieb(&self, n: u32) -> PyResult<PyGottlieb> {
        let g = gt::gottlieb_subgroup(&self.db, n).map_err(gottlieb_err)?;
        Ok(PyGottlieb {
            n,
            group: PyGroup::from(&g.group),
            ambient: PyGroup::from(&g.ambient),
            index: g.index.clone(),
            generators: g.names.clone(),
            citations: cites(&g.cites),
        })
    }

    fn components(&self, n: u32) -> PyResult<PyComponents> {
        let r = gt::classify_components(&self.db, n).map_err(gottlieb_err)?;
        Ok(PyComponents {
            n,
            gottlieb: PyGroup::from(&r.gottlieb),
            classes: r
                .classes
                .iter()
                .map(|c| (c.name.clone(), c.cosets))
                .collect(),
            expected: r.paper_expected,
            status: match r.status {
                MatchStatus::Match => "match",
                MatchStatus::DocumentedDiscrepancy => "documented-discrepancy",
                MatchStatus::Mismatch => "mismatch",
            }
            .to_string(),
            report: r.render(),
        })
    }

    /// (all cells pass, summary line, cell lines).
    fn verify(&self) -> (bool, String, Vec<String>) {
        let report = cohomotopy::cli::full_verification(&self.db);
        let lines = report.cells.iter().map(|c| c.to_string()).collect();
        (report.is_ok(), report.summary(), lines)
    }
}

/// Invariant factors of Z^cols modulo the rows of `relations`.
#[pyfunction]
fn presented_group(relations: Vec<Vec<BigInt>>, cols: usize) -> PyResult<PyGroup> {
    if relations.iter().any(|r| r.len() != cols) {
        return Err(PyValueError::new_err("every relation needs `cols` entries"));
    }
    let m = IntMatrix::from_big_rows(cols, &relations);
    Ok(PyGroup::from(PresentedGroup::new(m, cols).canonical()))
}

/// Every G with A -> G -> C exact, for cyclic orders `a`, `c` (0 = free).
#[pyfunction]
fn middle_groups(a: Vec<BigInt>, c: Vec<BigInt>) -> PyResult<Vec<PyGroup>> {
    let named = |orders: &[BigInt], tag: &str| {
        NamedGroup::new(
            orders
                .iter()
                .enumerate()
                .map(|(i, o)| {
                    let order = if o == &BigInt::from(0) {
                        cohomotopy::abelian::Order::Infinite
                    } else {
                        cohomotopy::abelian::Order::Finite(o.clone())
                    };
                    NamedGenerator::new(format!("{tag}{i}"), order)
                })
                .collect(),
        )
    };
    let p = ExtensionProblem::new(named(&a, "a"), named(&c, "c"));
    let set = enumerate_middle_groups(&p).map_err(|e| PyValueError::new_err(e.to_string()))?;
    Ok(set.candidates.iter().map(PyGroup::from).collect())
}

/// Same as the command-line tool: (exit code, stdout, stderr).
#[pyfunction]
fn run_cli(args: Vec<String>) -> (i32, String, String) {
    let out = cohomotopy::cli::run(std::iter::once("cohomotopy".to_string()).chain(args));
    (out.code, out.stdout, out.stderr)
}

#[pymodule]
fn cohomotopy_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyGroup>()?;
    m.add_class::<PyDatabase>()?;
    m.add_class::<PyComputation>()?;
    m.add_class::<PyGottlieb>()?;
    m.add_class::<PyComponents>()?;
    m.add_function(wrap_pyfunction!(presented_group, m)?)?;
    m.add_function(wrap_pyfunction!(middle_groups, m)?)?;
    m.add_function(wrap_pyfunction!(run_cli, m)?)?;
    m.add("DatabaseError", m.py().get_type::<DatabaseError>())?;
    m.add(
        "UnresolvedExtension",
        m.py().get_type::<UnresolvedExtension>(),
    )?;
    Ok(())
}
