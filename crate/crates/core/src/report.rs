//! Itemized pass/fail reports shared by the property suites.

use serde::Serialize;

#[derive(Serialize, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail,
    NotApplicable,
}

impl Status {
    pub fn from_bool(ok: bool) -> Status {
        if ok {
            Status::Pass
        } else {
            Status::Fail
        }
    }
}

#[derive(Serialize, Clone, Debug)]
pub struct Clause {
    pub id: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub coordinate: Option<usize>,
    pub status: Status,
    pub detail: String,
}

impl Clause {
    pub fn new(id: &str, coordinate: Option<usize>, ok: bool, detail: impl Into<String>) -> Clause {
        Clause {
            id: id.to_string(),
            coordinate,
            status: Status::from_bool(ok),
            detail: detail.into(),
        }
    }

    pub fn not_applicable(id: &str, coordinate: Option<usize>, detail: impl Into<String>) -> Clause {
        Clause {
            id: id.to_string(),
            coordinate,
            status: Status::NotApplicable,
            detail: detail.into(),
        }
    }

    /// A clause that is only guaranteed on transitive systems: a failure on
    /// a non-transitive system is recorded as not applicable.
    pub fn when_transitive(
        id: &str,
        coordinate: Option<usize>,
        transitive: bool,
        ok: bool,
        detail: impl Into<String>,
    ) -> Clause {
        if ok || transitive {
            Clause::new(id, coordinate, ok, detail)
        } else {
            Clause::not_applicable(
                id,
                coordinate,
                format!("fails, but the system is not G_omega-transitive: {}", detail.into()),
            )
        }
    }

    pub fn passed(&self) -> bool {
        self.status != Status::Fail
    }
}

#[derive(Serialize, Clone, Debug)]
pub struct PropertyReport {
    pub suite: String,
    pub clauses: Vec<Clause>,
}

impl PropertyReport {
    pub fn new(suite: &str) -> PropertyReport {
        PropertyReport {
            suite: suite.to_string(),
            clauses: Vec::new(),
        }
    }

    pub fn push(&mut self, c: Clause) {
        self.clauses.push(c);
    }

    pub fn passed(&self) -> bool {
        self.clauses.iter().all(Clause::passed)
    }

    pub fn failures(&self) -> Vec<&Clause> {
        self.clauses.iter().filter(|c| !c.passed()).collect()
    }

    pub fn ids(&self) -> Vec<&str> {
        self.clauses.iter().map(|c| c.id.as_str()).collect()
    }
}
