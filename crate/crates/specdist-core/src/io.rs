//! JSON ingestion for triples, states, and metric spaces.
//!
//! Three document shapes are accepted:
//!
//! * triple — `{ "label", "dim", "dirac": [[entry, …], …], "grading"?:
//!   [[entry, …], …], "algebra": { "kind": "diagonal" | "full_matrix" |
//!   "explicit", "factor"?: n, "basis"?: [[[entry, …], …], …] } }` where an
//!   entry is either a bare number or `{ "re": r, "im": i }`;
//! * state — `{ "kind": "density" | "bloch" | "simplex" | "coeffs" }` with
//!   payload key `"matrix"`, `"x"`, `"p"`, or `"values"` respectively;
//! * metric — `{ "size", "g": [[…]] }` with the string `"inf"` allowed
//!   off-diagonal for disconnected pairs.

use crate::error::IoError;
use crate::matrix::{CMatrix, C64};
use crate::metric::FiniteMetric;
use crate::triple::{full_matrix_triple, Algebra, FiniteSpectralTriple, Sector, State};
use serde::Deserialize;

/// A complex entry: bare real number or explicit `{re, im}` pair.
#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(untagged)]
enum EntryRepr {
    Real(f64),
    Complex {
        re: f64,
        #[serde(default)]
        im: f64,
    },
}

impl EntryRepr {
    fn value(self) -> C64 {
        match self {
            EntryRepr::Real(re) => C64::new(re, 0.0),
            EntryRepr::Complex { re, im } => C64::new(re, im),
        }
    }
}

fn matrix_from_entries(rows: &[Vec<EntryRepr>], what: &str) -> Result<CMatrix, IoError> {
    let n = rows.len();
    if n == 0 {
        return Err(IoError::Invalid {
            reason: format!("{what} must have at least one row"),
        });
    }
    let cols = rows[0].len();
    if rows.iter().any(|r| r.len() != cols) {
        return Err(IoError::Invalid {
            reason: format!("{what} has ragged rows"),
        });
    }
    Ok(CMatrix::from_rows(
        &rows
            .iter()
            .map(|r| r.iter().map(|e| e.value()).collect())
            .collect::<Vec<Vec<C64>>>(),
    ))
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct AlgebraRepr {
    kind: String,
    /// For `full_matrix`: size `n` of the matrix algebra when the Hilbert
    /// space carries it with multiplicity `dim / n`. Defaults to `dim`.
    factor: Option<usize>,
    basis: Option<Vec<Vec<Vec<EntryRepr>>>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct TripleRepr {
    label: String,
    dim: usize,
    dirac: Vec<Vec<EntryRepr>>,
    grading: Option<Vec<Vec<EntryRepr>>>,
    algebra: AlgebraRepr,
}

/// Parse a spectral-triple document. All structural invariants (Hermitian
/// basis, identity in the span, grading relations, …) are re-validated by
/// the constructors, so a file that parses but violates them still fails.
pub fn triple_from_json(text: &str) -> Result<FiniteSpectralTriple, IoError> {
    let repr: TripleRepr = serde_json::from_str(text)?;
    if repr.dim == 0 {
        return Err(IoError::Invalid {
            reason: "dim must be positive".into(),
        });
    }
    let dirac = matrix_from_entries(&repr.dirac, "dirac")?;
    if dirac.rows() != repr.dim || dirac.cols() != repr.dim {
        return Err(IoError::Invalid {
            reason: format!(
                "dirac is {}x{} but dim is {}",
                dirac.rows(),
                dirac.cols(),
                repr.dim
            ),
        });
    }
    let grading = repr
        .grading
        .as_ref()
        .map(|g| matrix_from_entries(g, "grading"))
        .transpose()?;

    match repr.algebra.kind.as_str() {
        "diagonal" => {
            if repr.algebra.basis.is_some() || repr.algebra.factor.is_some() {
                return Err(IoError::Invalid {
                    reason: "a diagonal algebra takes no basis or factor".into(),
                });
            }
            let algebra = Algebra::diagonal(repr.dim);
            let rep = algebra.basis().to_vec();
            Ok(FiniteSpectralTriple::new(
                repr.label,
                algebra,
                vec![Sector::operator(dirac, grading, rep)],
            )?)
        }
        "full_matrix" => {
            if repr.algebra.basis.is_some() {
                return Err(IoError::Invalid {
                    reason: "a full matrix algebra takes no explicit basis".into(),
                });
            }
            let n = repr.algebra.factor.unwrap_or(repr.dim);
            if n == 0 || repr.dim % n != 0 {
                return Err(IoError::Invalid {
                    reason: format!("factor {n} must divide dim {}", repr.dim),
                });
            }
            let mut triple = full_matrix_triple(n, repr.dim / n, dirac)?;
            triple.label = repr.label;
            if let Some(g) = grading {
                let sector = match triple.sectors()[0].clone() {
                    Sector::Operator { dirac, rep, .. } => {
                        Sector::operator(dirac, Some(g), rep)
                    }
                    other => other,
                };
                triple =
                    FiniteSpectralTriple::new(triple.label.clone(), triple.algebra().clone(), vec![sector])?;
            }
            Ok(triple)
        }
        "explicit" => {
            let basis_reprs = repr.algebra.basis.as_ref().ok_or_else(|| IoError::Invalid {
                reason: "an explicit algebra needs a basis".into(),
            })?;
            if repr.algebra.factor.is_some() {
                return Err(IoError::Invalid {
                    reason: "an explicit algebra takes no factor".into(),
                });
            }
            let mut basis = Vec::with_capacity(basis_reprs.len());
            for (k, rows) in basis_reprs.iter().enumerate() {
                let b = matrix_from_entries(rows, &format!("basis element {k}"))?;
                if b.rows() != repr.dim || b.cols() != repr.dim {
                    return Err(IoError::Invalid {
                        reason: format!(
                            "basis element {k} is {}x{} but dim is {}",
                            b.rows(),
                            b.cols(),
                            repr.dim
                        ),
                    });
                }
                basis.push(b);
            }
            let algebra = Algebra::explicit(basis)?;
            let rep = algebra.basis().to_vec();
            Ok(FiniteSpectralTriple::new(
                repr.label,
                algebra,
                vec![Sector::operator(dirac, grading, rep)],
            )?)
        }
        other => Err(IoError::Invalid {
            reason: format!("unknown algebra kind {other:?}"),
        }),
    }
}

#[derive(Debug, Deserialize)]
#[serde(tag = "kind", deny_unknown_fields)]
enum StateRepr {
    #[serde(rename = "density")]
    Density { matrix: Vec<Vec<EntryRepr>> },
    #[serde(rename = "bloch")]
    Bloch { x: [f64; 3] },
    #[serde(rename = "simplex")]
    Simplex { p: Vec<f64> },
    #[serde(rename = "coeffs")]
    Coeffs { values: Vec<f64> },
}

/// Parse a state document against the algebra it will pair with.
pub fn state_from_json(alg: &Algebra, text: &str) -> Result<State, IoError> {
    let repr: StateRepr = serde_json::from_str(text)?;
    match repr {
        StateRepr::Density { matrix } => {
            let rho = matrix_from_entries(&matrix, "density matrix")?;
            Ok(State::from_density(alg, rho)?)
        }
        StateRepr::Bloch { x } => Ok(State::from_bloch(alg, &x)?),
        StateRepr::Simplex { p } => Ok(State::from_simplex(alg, &p)?),
        StateRepr::Coeffs { values } => Ok(State::from_coeffs(alg, values)?),
    }
}

/// A metric entry: a number, or the string `"inf"` for a disconnected pair.
#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
enum MetricEntry {
    Number(f64),
    Word(String),
}

impl MetricEntry {
    fn value(&self) -> Result<f64, IoError> {
        match self {
            MetricEntry::Number(v) => Ok(*v),
            MetricEntry::Word(w) if w == "inf" => Ok(f64::INFINITY),
            MetricEntry::Word(w) => Err(IoError::Invalid {
                reason: format!("metric entries are numbers or \"inf\", got {w:?}"),
            }),
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct MetricRepr {
    size: usize,
    g: Vec<Vec<MetricEntry>>,
}

/// Parse a metric document; symmetry, zero diagonal, and triangle
/// inequalities are re-validated by the metric constructor.
pub fn metric_from_json(text: &str) -> Result<FiniteMetric, IoError> {
    let repr: MetricRepr = serde_json::from_str(text)?;
    if repr.g.len() != repr.size || repr.g.iter().any(|r| r.len() != repr.size) {
        return Err(IoError::Invalid {
            reason: format!("g must be a {0}x{0} matrix", repr.size),
        });
    }
    let mut rows = Vec::with_capacity(repr.size);
    for r in &repr.g {
        let mut row = Vec::with_capacity(repr.size);
        for e in r {
            row.push(e.value()?);
        }
        rows.push(row);
    }
    Ok(FiniteMetric::new(rows)?)
}

/// Either geometry document a distance command accepts.
#[derive(Debug)]
pub enum Geometry {
    Triple(FiniteSpectralTriple),
    Metric(FiniteMetric),
}

/// Dispatch on the document shape: a top-level `"g"` key means a metric
/// space, anything else is read as a spectral triple.
pub fn geometry_from_json(text: &str) -> Result<Geometry, IoError> {
    let value: serde_json::Value = serde_json::from_str(text)?;
    if value.get("g").is_some() {
        Ok(Geometry::Metric(metric_from_json(text)?))
    } else {
        Ok(Geometry::Triple(triple_from_json(text)?))
    }
}
