use crate::error::{AuditError, Result};
use serde::{Deserialize, Serialize};
use std::fmt;
use std::io::{BufRead, Write};

/// Note prefix of rows whose failure is the expected outcome.
pub const EXPECTED_FAIL: &str = "expected-fail";
/// Note prefix of rows outside the asserted regime.
pub const EXPLORATORY: &str = "exploratory";
/// Note prefix of rows with no sample points.
pub const VACUOUS: &str = "vacuous";

/// Identifier of an audit predicate.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckId {
    WNegative,
    DirectionalLower,
    DirectionalUpper,
    NeumannTangentialLower,
    NeumannTangentialUpper,
    HwExponent,
    SymmetryDefect,
    SymmetryRate,
    MonotoneX1,
    MonotoneX2Half,
    DoubleNegative,
    SubcapDirectional,
    FullLineDirectional,
    ChainedComparison,
}

impl CheckId {
    pub fn as_str(self) -> &'static str {
        match self {
            CheckId::WNegative => "w_negative",
            CheckId::DirectionalLower => "directional_lower",
            CheckId::DirectionalUpper => "directional_upper",
            CheckId::NeumannTangentialLower => "neumann_tangential_lower",
            CheckId::NeumannTangentialUpper => "neumann_tangential_upper",
            CheckId::HwExponent => "hw_exponent",
            CheckId::SymmetryDefect => "symmetry_defect",
            CheckId::SymmetryRate => "symmetry_rate",
            CheckId::MonotoneX1 => "monotone_x1",
            CheckId::MonotoneX2Half => "monotone_x2_half",
            CheckId::DoubleNegative => "double_negative",
            CheckId::SubcapDirectional => "subcap_directional",
            CheckId::FullLineDirectional => "full_line_directional",
            CheckId::ChainedComparison => "chained_comparison",
        }
    }
}

impl fmt::Display for CheckId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// One audited predicate. `max_violation` is the largest sampled value of the quantity that
/// must stay at or below `tolerance`; it is absent when no point was sampled.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AuditRow {
    pub check_id: CheckId,
    pub alpha: f64,
    pub beta: f64,
    pub lambda: Option<f64>,
    pub theta: Option<f64>,
    pub theta1: Option<f64>,
    pub n_points: usize,
    pub max_violation: Option<f64>,
    pub tolerance: f64,
    pub pass: bool,
    pub note: String,
}

impl AuditRow {
    /// Row with `pass ⇔ max_violation ≤ tolerance`; a row without samples passes vacuously.
    pub fn new(
        check_id: CheckId,
        (alpha, beta): (f64, f64),
        (lambda, theta, theta1): (Option<f64>, Option<f64>, Option<f64>),
        n_points: usize,
        max_violation: Option<f64>,
        tolerance: f64,
    ) -> Self {
        let (pass, note) = match max_violation {
            Some(v) => (v <= tolerance, String::new()),
            None => (true, VACUOUS.to_string()),
        };
        Self { check_id, alpha, beta, lambda, theta, theta1, n_points, max_violation, tolerance, pass, note }
    }

    pub fn with_note(mut self, note: impl AsRef<str>) -> Self {
        let note = note.as_ref();
        if !note.is_empty() {
            if !self.note.is_empty() {
                self.note.push_str("; ");
            }
            self.note.push_str(note);
        }
        self
    }

    fn with_prefix(mut self, prefix: &str) -> Self {
        self.note = if self.note.is_empty() { prefix.to_string() } else { format!("{prefix}; {}", self.note) };
        self
    }

    /// Marks a row whose failure is the expected outcome.
    pub fn expected_fail(self) -> Self {
        self.with_prefix(EXPECTED_FAIL)
    }

    /// Marks a row outside the asserted regime.
    pub fn exploratory(self) -> Self {
        self.with_prefix(EXPLORATORY)
    }

    pub fn is_expected_fail(&self) -> bool {
        self.note.starts_with(EXPECTED_FAIL)
    }

    pub fn is_exploratory(&self) -> bool {
        self.note.starts_with(EXPLORATORY)
    }

    pub fn is_vacuous(&self) -> bool {
        self.max_violation.is_none()
    }

    /// A failing row that is neither expected to fail nor exploratory.
    pub fn is_regression(&self) -> bool {
        !self.pass && !self.is_expected_fail() && !self.is_exploratory()
    }
}

/// Rows of an audit run together with the tolerance constant `κ` used for them.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AuditReport {
    pub kappa: f64,
    pub rows: Vec<AuditRow>,
}

const KAPPA_HEADER: &str = "# kappa=";

impl AuditReport {
    pub fn new(kappa: f64) -> Self {
        Self { kappa, rows: Vec::new() }
    }

    pub fn regressions(&self) -> impl Iterator<Item = &AuditRow> {
        self.rows.iter().filter(|r| r.is_regression())
    }

    /// No regressions among the rows.
    pub fn passed(&self) -> bool {
        self.regressions().next().is_none()
    }

    /// Writes the `# kappa=` header line followed by the CSV table.
    pub fn write_csv<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "{KAPPA_HEADER}{}", self.kappa)?;
        let mut csv = csv::Writer::from_writer(w);
        for row in &self.rows {
            csv.serialize(row)?;
        }
        if self.rows.is_empty() {
            csv.write_record(HEADER)?;
        }
        csv.flush()?;
        Ok(())
    }

    /// Parses the output of [`AuditReport::write_csv`].
    pub fn read_csv<R: BufRead>(mut r: R) -> Result<Self> {
        let mut first = String::new();
        r.read_line(&mut first)?;
        let kappa = first
            .trim_end()
            .strip_prefix(KAPPA_HEADER)
            .and_then(|v| v.parse::<f64>().ok())
            .ok_or_else(|| AuditError::Report(format!("missing `{KAPPA_HEADER}` header")))?;
        let mut csv = csv::Reader::from_reader(r);
        let rows = csv.deserialize().collect::<std::result::Result<Vec<AuditRow>, _>>()?;
        Ok(Self { kappa, rows })
    }
}

/// CSV column names, in order.
pub const HEADER: [&str; 11] = [
    "check_id",
    "alpha",
    "beta",
    "lambda",
    "theta",
    "theta1",
    "n_points",
    "max_violation",
    "tolerance",
    "pass",
    "note",
];
