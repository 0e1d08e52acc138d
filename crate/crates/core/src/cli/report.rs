//! Run reports and their JSON and text renderings.

use std::fmt::Write as _;

use serde::Serialize;

use crate::locus::{Classification, ComponentKind, LocusResult};
use crate::polycore::Polynomial;
use crate::reasoner::{Discovery, GradeReport, GradeSource, ProofResult, Stage, Verdict};

#[derive(Debug, Clone, Serialize)]
pub struct RunReport {
    pub version: String,
    pub command: String,
    pub file: String,
    pub order: String,
    pub timeout_s: f64,
    pub results: Vec<CommandResult>,
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct CommandResult {
    pub kind: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub predicate: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub verdict: Option<Verdict>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub conditions: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub grade: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub source: Option<GradeSource>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ledger: Option<Vec<LedgerJson>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub locus: Option<LocusJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub findings: Option<Vec<FindingJson>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub truncated: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    pub time_ms: u64,
}

#[derive(Debug, Clone, Serialize)]
pub struct LedgerJson {
    pub q_degree: u32,
    pub cofactor_degree: u32,
}

#[derive(Debug, Clone, Serialize)]
pub struct LocusJson {
    pub mover: String,
    pub poly: String,
    pub total_degree: u32,
    pub components: Vec<ComponentJson>,
    pub residual: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct ComponentJson {
    pub poly: String,
    pub kind: ComponentKind,
    pub classification: Classification,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub proof: Option<Verdict>,
}

#[derive(Debug, Clone, Serialize)]
pub struct FindingJson {
    pub predicate: String,
    pub stage: Stage,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub verdict: Option<Verdict>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub conditions: Option<Vec<String>>,
}

fn poly_strings(ps: &[Polynomial]) -> Vec<String> {
    ps.iter().map(Polynomial::to_string).collect()
}

impl CommandResult {
    pub fn new(kind: &str) -> Self {
        CommandResult {
            kind: kind.to_string(),
            ..Default::default()
        }
    }

    pub fn with_proof(mut self, p: &ProofResult) -> Self {
        self.verdict = Some(p.verdict);
        self.conditions = Some(poly_strings(&p.conditions));
        self
    }

    pub fn with_grade(mut self, g: &GradeReport) -> Self {
        self.grade = Some(g.grade);
        self.source = Some(g.source);
        self.ledger = Some(
            g.ledger
                .iter()
                .map(|e| LedgerJson {
                    q_degree: e.q_degree,
                    cofactor_degree: e.cofactor_degree,
                })
                .collect(),
        );
        self
    }

    pub fn with_locus(mut self, l: &LocusResult) -> Self {
        self.locus = Some(LocusJson {
            mover: l.mover.clone(),
            poly: l.locus_poly.to_string(),
            total_degree: l.locus_poly.total_degree(),
            components: l
                .components
                .iter()
                .map(|c| ComponentJson {
                    poly: c.poly.to_string(),
                    kind: c.kind,
                    classification: c.classification,
                    proof: c.proof.as_ref().map(|p| p.verdict),
                })
                .collect(),
            residual: l.residual.to_string(),
        });
        self
    }

    pub fn with_discovery(mut self, d: &Discovery) -> Self {
        self.findings = Some(
            d.findings
                .iter()
                .map(|f| FindingJson {
                    predicate: f.predicate.to_dsl(),
                    stage: f.stage,
                    verdict: f.proof.as_ref().map(|p| p.verdict),
                    conditions: f.proof.as_ref().map(|p| poly_strings(&p.conditions)),
                })
                .collect(),
        );
        self.truncated = Some(d.truncated);
        self
    }
}

/// Pretty-printed JSON; absent fields are omitted.
pub fn emit_json(report: &RunReport) -> String {
    serde_json::to_string_pretty(report).expect("report serializes")
}

/// Human-readable rendering of the same report.
pub fn emit_text(report: &RunReport) -> String {
    let mut out = String::new();
    for r in &report.results {
        if report.results.len() > 1 {
            if let Some(p) = &r.predicate {
                let _ = writeln!(out, "{} {p}", r.kind);
            }
        }
        if let Some(v) = r.verdict {
            let _ = writeln!(out, "{v}");
        }
        for c in r.conditions.iter().flatten() {
            let _ = writeln!(out, "  nondegeneracy: {c} != 0");
        }
        if let Some(g) = r.grade {
            let _ = writeln!(out, "grade {g}");
            for (i, e) in r.ledger.iter().flatten().enumerate() {
                let _ = writeln!(out, "  element {i}: q degree {}, cofactor degree {}", e.q_degree, e.cofactor_degree);
            }
        }
        if let Some(l) = &r.locus {
            let _ = writeln!(out, "locus of {} (degree {}): {}", l.mover, l.total_degree, l.poly);
            for c in &l.components {
                let _ = write!(out, "  {:?} {:?}: {}", c.kind, c.classification, c.poly);
                if let Some(v) = c.proof {
                    let _ = write!(out, " [{v}]");
                }
                out.push('\n');
            }
            let _ = writeln!(out, "  residual: {}", l.residual);
        }
        for f in r.findings.iter().flatten() {
            let status = f.verdict.map(|v| v.as_str()).unwrap_or("NUMERIC");
            let _ = writeln!(out, "{status} {}", f.predicate);
        }
        if r.truncated == Some(true) {
            let _ = writeln!(out, "(search truncated)");
        }
        if let Some(e) = &r.error {
            let _ = writeln!(out, "error: {e}");
        }
    }
    out
}
