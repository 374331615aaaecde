//! Exact inequality records and their text/JSON rendering.

use std::fmt::{self, Write as _};

use num_rational::Ratio;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

/// Exact rational used for every audited quantity.
pub type Rational = Ratio<i128>;

pub fn int(v: usize) -> Rational {
    Rational::from_integer(v as i128)
}

pub fn frac(num: i128, den: i128) -> Rational {
    Rational::new(num, den)
}

pub fn to_f64(q: &Rational) -> f64 {
    q.to_f64().unwrap_or(f64::NAN)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Relation {
    #[serde(rename = "<")]
    Lt,
    #[serde(rename = "<=")]
    Le,
    #[serde(rename = "=")]
    Eq,
    #[serde(rename = ">=")]
    Ge,
    #[serde(rename = ">")]
    Gt,
}

impl Relation {
    pub fn holds(self, lhs: &Rational, rhs: &Rational) -> bool {
        match self {
            Relation::Lt => lhs < rhs,
            Relation::Le => lhs <= rhs,
            Relation::Eq => lhs == rhs,
            Relation::Ge => lhs >= rhs,
            Relation::Gt => lhs > rhs,
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Relation::Lt => "<",
            Relation::Le => "<=",
            Relation::Eq => "=",
            Relation::Ge => ">=",
            Relation::Gt => ">",
        }
    }

    /// Margin by which the relation holds; negative when it fails.
    fn slack(self, lhs: &Rational, rhs: &Rational) -> Rational {
        match self {
            Relation::Lt | Relation::Le => rhs - lhs,
            Relation::Ge | Relation::Gt => lhs - rhs,
            Relation::Eq => -(lhs - rhs).abs(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RecordStatus {
    /// Evaluated and required to hold.
    Checked,
    /// The claim degenerates (e.g. an empty cover turns `<` into `0 < 0`); reported but not enforced.
    Degenerate,
    /// A conditional step whose hypothesis the run did not meet; reported but not enforced.
    ConditionNotMet,
}

/// One evaluated inequality.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AuditRecord {
    pub name: String,
    #[serde(deserialize_with = "nan_from_null")]
    pub lhs: f64,
    pub relation: Relation,
    #[serde(deserialize_with = "nan_from_null")]
    pub rhs: f64,
    /// Exact form, `lhs rel rhs`.
    pub exact: String,
    #[serde(deserialize_with = "nan_from_null")]
    pub slack: f64,
    /// Whether the relation is actually true on the numbers.
    pub holds: bool,
    pub status: RecordStatus,
    pub pass: bool,
}

// JSON has no NaN; failure records serialize their numbers as null.
fn nan_from_null<'de, D: serde::Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
    Ok(Option::<f64>::deserialize(d)?.unwrap_or(f64::NAN))
}

impl AuditRecord {
    fn build(name: &str, lhs: Rational, relation: Relation, rhs: Rational, status: RecordStatus) -> Self {
        let holds = relation.holds(&lhs, &rhs);
        AuditRecord {
            name: name.to_string(),
            lhs: to_f64(&lhs),
            relation,
            rhs: to_f64(&rhs),
            exact: format!("{lhs} {} {rhs}", relation.symbol()),
            slack: to_f64(&relation.slack(&lhs, &rhs)),
            holds,
            status,
            pass: holds || status != RecordStatus::Checked,
        }
    }

    pub fn check(name: &str, lhs: Rational, relation: Relation, rhs: Rational) -> Self {
        Self::build(name, lhs, relation, rhs, RecordStatus::Checked)
    }

    pub fn check_int(name: &str, lhs: usize, relation: Relation, rhs: usize) -> Self {
        Self::check(name, int(lhs), relation, int(rhs))
    }

    pub fn degenerate(name: &str, lhs: Rational, relation: Relation, rhs: Rational) -> Self {
        Self::build(name, lhs, relation, rhs, RecordStatus::Degenerate)
    }

    /// Checked normally unless `degenerate`, in which case only reported.
    pub fn check_unless(degenerate: bool, name: &str, lhs: Rational, relation: Relation, rhs: Rational) -> Self {
        if degenerate {
            Self::degenerate(name, lhs, relation, rhs)
        } else {
            Self::check(name, lhs, relation, rhs)
        }
    }

    pub fn conditional(applies: bool, name: &str, lhs: Rational, relation: Relation, rhs: Rational) -> Self {
        let status = if applies {
            RecordStatus::Checked
        } else {
            RecordStatus::ConditionNotMet
        };
        Self::build(name, lhs, relation, rhs, status)
    }

    /// A record that always fails, for violations detected outside an inequality.
    pub fn failure(name: &str, detail: &str) -> Self {
        AuditRecord {
            name: name.to_string(),
            lhs: f64::NAN,
            relation: Relation::Eq,
            rhs: f64::NAN,
            exact: detail.to_string(),
            slack: f64::NAN,
            holds: false,
            status: RecordStatus::Checked,
            pass: false,
        }
    }
}

impl fmt::Display for AuditRecord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = match (self.pass, self.status) {
            (false, _) => "FAIL",
            (true, RecordStatus::Checked) => "PASS",
            (true, RecordStatus::Degenerate) => "PASS (degenerate)",
            (true, RecordStatus::ConditionNotMet) => "SKIP (condition not met)",
        };
        write!(f, "{tag} {}: {} [slack {}]", self.name, self.exact, self.slack)
    }
}

/// A list of inequality records; passes iff every record passes.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct RatioAudit {
    pub records: Vec<AuditRecord>,
}

impl RatioAudit {
    pub fn new() -> Self {
        RatioAudit::default()
    }

    pub fn push(&mut self, record: AuditRecord) {
        self.records.push(record);
    }

    pub fn passes(&self) -> bool {
        self.records.iter().all(|r| r.pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &AuditRecord> {
        self.records.iter().filter(|r| !r.pass)
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    /// One line per record.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for r in &self.records {
            let _ = writeln!(out, "{r}");
        }
        out
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("audit records serialize")
    }
}

impl Extend<AuditRecord> for RatioAudit {
    fn extend<T: IntoIterator<Item = AuditRecord>>(&mut self, iter: T) {
        self.records.extend(iter);
    }
}

/// `x choose 2` as an exact rational.
/// Reads `p/q`, an integer, or a plain decimal such as `0.25`, exactly.
pub fn parse_rational(text: &str) -> Option<Rational> {
    let text = text.trim();
    if text.contains('/') {
        return text.parse().ok();
    }
    let (whole, fraction) = text.split_once('.').unwrap_or((text, ""));
    if fraction.len() > 18 || !fraction.chars().all(|c| c.is_ascii_digit()) {
        return None;
    }
    let (negative, digits) = match whole.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, whole),
    };
    if digits.is_empty() && fraction.is_empty() || !digits.chars().all(|c| c.is_ascii_digit()) {
        return None;
    }
    let scale = 10i128.pow(fraction.len() as u32);
    let whole: i128 = if digits.is_empty() { 0 } else { digits.parse().ok()? };
    let part: i128 = if fraction.is_empty() { 0 } else { fraction.parse().ok()? };
    let value = frac(whole.checked_mul(scale)?.checked_add(part)?, scale);
    Some(if negative { -value } else { value })
}

pub fn choose2(x: usize) -> Rational {
    int(x * x.saturating_sub(1) / 2)
}

pub fn is_zero(q: &Rational) -> bool {
    q.is_zero()
}
