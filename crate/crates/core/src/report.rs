//! Verification reports.

use serde::Serialize;
use serde_json::Value;

use crate::algebra::{ExpandedRational, FactoredRational, RationalSum};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

/// Both sides of a failed identity, as stored and fully expanded.
#[derive(Clone, Debug, Serialize)]
pub struct Witness {
    pub lhs: Value,
    pub rhs: Value,
    pub lhs_expanded: ExpandedRational,
    pub rhs_expanded: ExpandedRational,
}

impl Witness {
    pub fn factored(lhs: &FactoredRational, rhs: &FactoredRational) -> Witness {
        Witness {
            lhs: serde_json::to_value(lhs).expect("serializable"),
            rhs: serde_json::to_value(rhs).expect("serializable"),
            lhs_expanded: lhs.expand(),
            rhs_expanded: rhs.expand(),
        }
    }

    pub fn sums(lhs: &RationalSum, rhs: &RationalSum) -> Witness {
        Witness {
            lhs: Value::String(lhs.to_string()),
            rhs: Value::String(rhs.to_string()),
            lhs_expanded: lhs.expand(),
            rhs_expanded: rhs.expand(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CaseRecord {
    pub id: String,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
}

impl CaseRecord {
    pub fn pass(id: impl Into<String>) -> CaseRecord {
        CaseRecord { id: id.into(), status: Status::Pass, detail: None, witness: None }
    }

    pub fn fail(id: impl Into<String>, detail: impl Into<String>, witness: Option<Witness>) -> CaseRecord {
        CaseRecord { id: id.into(), status: Status::Fail, detail: Some(detail.into()), witness }
    }

    pub fn with_detail(mut self, detail: impl Into<String>) -> CaseRecord {
        self.detail = Some(detail.into());
        self
    }

    /// Pass or fail with both sides as witness.
    pub fn compare_factored(
        id: impl Into<String>,
        ok: bool,
        lhs: &FactoredRational,
        rhs: &FactoredRational,
    ) -> CaseRecord {
        if ok {
            CaseRecord::pass(id)
        } else {
            CaseRecord::fail(id, "sides differ", Some(Witness::factored(lhs, rhs)))
        }
    }

    pub fn compare_sums(id: impl Into<String>, ok: bool, lhs: &RationalSum, rhs: &RationalSum) -> CaseRecord {
        if ok {
            CaseRecord::pass(id)
        } else {
            CaseRecord::fail(id, "sides differ", Some(Witness::sums(lhs, rhs)))
        }
    }

    pub fn error(id: impl Into<String>, e: &crate::Error) -> CaseRecord {
        CaseRecord::fail(id, e.to_string(), None)
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Summary {
    pub total: usize,
    pub passed: usize,
    pub failed: usize,
}

/// Conventions adopted where the underlying formulas admit several readings.
#[derive(Clone, Debug, Serialize)]
pub struct Conventions {
    pub commutation: &'static str,
    pub compatibility_twin: &'static str,
    pub i_coefficient: &'static str,
    pub vertex_normalization: &'static str,
    pub roof: &'static str,
    pub d2_operator: &'static str,
    pub bethe_operator: &'static str,
    pub bethe_k: &'static str,
    pub bethe_s: &'static str,
    pub relation: &'static str,
    pub exponent_encoding: &'static str,
}

pub fn conventions() -> Conventions {
    Conventions {
        commutation: "Q_i^a S_i^b = q^(-a*b) S_i^b Q_i^a",
        compatibility_twin: "B_y pairs with the twin prod(1 + y a_i S); the form prod(1 - y a_i S) pairs with coefficients prod (y q a_i)_d / (q a_i)_d",
        i_coefficient: "1/(A' B' C') with (1 - q^m) once per (i, m)",
        vertex_normalization: "brace symbols without the (-q^(1/2) hbar^(-1/2))^d factor and without q^(nd/2); localization divided by (-q^(1/2) hbar^(-1/2))^(nd)",
        roof: "s(mu) = mu^(-1/2) / (1 - mu^(-1))",
        d2_operator: "D2 = prod_j (1 + y lambda q P_j/P_i S_j/S_i) prod_a (1 + y P_i/t_a S_i) Q_i prod_j (1 - lambda q P_i/P_j S_i/S_j)",
        bethe_operator: "second Bethe-side term carries prod_a (1 - hbar P_i/t_a); Lambda_a = t_a",
        bethe_k: "hbar",
        bethe_s: "1",
        relation: "prod_a (1 - P/t_a) = 0 applied by substituting P = t_a for each a",
        exponent_encoding: "doubled integers",
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub schema_version: u32,
    pub command: String,
    pub conventions: Conventions,
    pub cases: Vec<CaseRecord>,
    pub summary: Summary,
    pub wall_time_ms: u64,
}

impl Report {
    pub fn new(command: impl Into<String>, cases: Vec<CaseRecord>) -> Report {
        let passed = cases.iter().filter(|c| c.passed()).count();
        Report {
            schema_version: SCHEMA_VERSION,
            command: command.into(),
            conventions: conventions(),
            summary: Summary { total: cases.len(), passed, failed: cases.len() - passed },
            cases,
            wall_time_ms: 0,
        }
    }

    pub fn all_passed(&self) -> bool {
        self.summary.failed == 0
    }

    /// Appends the cases of `other`, prefixing their ids.
    pub fn absorb(&mut self, prefix: &str, other: Report) {
        for mut c in other.cases {
            c.id = format!("{prefix}/{}", c.id);
            self.cases.push(c);
        }
        let passed = self.cases.iter().filter(|c| c.passed()).count();
        self.summary = Summary { total: self.cases.len(), passed, failed: self.cases.len() - passed };
    }

    /// JSON with the timing field removed, for reproducibility comparisons.
    pub fn body(&self) -> Value {
        let mut v = serde_json::to_value(self).expect("serializable");
        if let Value::Object(m) = &mut v {
            m.remove("wall_time_ms");
        }
        v
    }
}
