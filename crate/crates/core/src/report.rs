//! Self-contained, re-checkable run reports.

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::audit::{AuditRecord, RatioAudit, Rational, RecordStatus, Relation};
use crate::dimacs;
use crate::graph::Graph;

/// Size and content hash of an input graph. The hash is over its canonical DIMACS text.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InstanceDescriptor {
    pub vertices: usize,
    pub edges: usize,
    pub sha256: String,
}

impl InstanceDescriptor {
    pub fn of(g: &Graph) -> Self {
        InstanceDescriptor {
            vertices: g.vertex_count(),
            edges: g.edge_count(),
            sha256: canonical_hash(g),
        }
    }
}

pub fn canonical_hash(g: &Graph) -> String {
    let text = dimacs::write_graph(g, &[]);
    hex::encode(Sha256::digest(text.as_bytes()))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Verdict {
    Pass,
    Fail,
}

impl Verdict {
    pub fn from_pass(pass: bool) -> Self {
        if pass {
            Verdict::Pass
        } else {
            Verdict::Fail
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub command: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub instance: Option<InstanceDescriptor>,
    pub parameters: serde_json::Value,
    pub outputs: serde_json::Value,
    pub checks: RatioAudit,
    /// Wall-clock data; only present when explicitly requested, so that reports stay reproducible.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub timings: Option<serde_json::Value>,
    pub verdict: Verdict,
}

impl RunReport {
    pub fn new(command: &str, parameters: serde_json::Value, outputs: serde_json::Value, checks: RatioAudit) -> Self {
        let verdict = Verdict::from_pass(checks.passes());
        RunReport {
            command: command.to_string(),
            instance: None,
            parameters,
            outputs,
            checks,
            timings: None,
            verdict,
        }
    }

    pub fn with_instance(mut self, g: &Graph) -> Self {
        self.instance = Some(InstanceDescriptor::of(g));
        self
    }

    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }

    pub fn to_json_pretty(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// Re-evaluates every record from its exact form and checks the verdict against them.
    pub fn recheck(&self) -> Result<(), String> {
        for r in &self.checks.records {
            let holds = recheck_record(r)?;
            if holds != r.holds {
                return Err(format!(
                    "record `{}` claims holds={} but evaluates to {holds}",
                    r.name, r.holds
                ));
            }
            let pass = holds || r.status != RecordStatus::Checked;
            if pass != r.pass {
                return Err(format!("record `{}` has an inconsistent pass flag", r.name));
            }
        }
        let expected = Verdict::from_pass(self.checks.passes());
        if expected != self.verdict {
            return Err(format!(
                "verdict {:?} disagrees with its checks ({expected:?})",
                self.verdict
            ));
        }
        Ok(())
    }
}

/// Parses `lhs rel rhs` back into exact rationals. Failure records (no numbers) evaluate to false.
fn recheck_record(r: &AuditRecord) -> Result<bool, String> {
    if r.lhs.is_nan() {
        return Ok(false);
    }
    let sym = r.relation.symbol();
    let (lhs, rhs) = r
        .exact
        .split_once(&format!(" {sym} "))
        .ok_or_else(|| format!("record `{}`: cannot parse `{}`", r.name, r.exact))?;
    let parse = |s: &str| {
        s.trim()
            .parse::<Rational>()
            .map_err(|e| format!("record `{}`: bad number `{s}`: {e}", r.name))
    };
    Ok(Relation::holds(r.relation, &parse(lhs)?, &parse(rhs)?))
}
