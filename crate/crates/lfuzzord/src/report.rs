//! Machine-readable run reports (`lfuzzord/1`).

use serde::Serialize;

pub const SCHEMA: &str = "lfuzzord/1";

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum Verdict {
    Holds,
    Violated { clause: String, witness: String, count: u64 },
    Error { kind: String, message: String },
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConfigEcho {
    pub seed: String,
    pub guard: u64,
    pub samples: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub window: Option<i64>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RunReport {
    pub claim: String,
    #[serde(flatten)]
    pub verdict: Verdict,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub status: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub scope: Option<String>,
    pub checked: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timing_ms: Option<f64>,
    pub config: ConfigEcho,
}

impl RunReport {
    pub fn holds(&self) -> bool {
        self.verdict == Verdict::Holds
    }

    pub fn text_line(&self) -> String {
        let mut s = match &self.verdict {
            Verdict::Holds => format!("{:<24} holds", self.claim),
            Verdict::Violated { clause, witness, count } => {
                format!("{:<24} VIOLATED {clause} ({count}x): {witness}", self.claim)
            }
            Verdict::Error { kind, message } => format!("{:<24} ERROR {kind}: {message}", self.claim),
        };
        if let Some(st) = &self.scope {
            s.push_str(&format!(" [{st}; {} checks]", self.checked));
        }
        if let Some(t) = self.timing_ms {
            s.push_str(&format!(" {t:.1}ms"));
        }
        s
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SuiteReport {
    pub schema: &'static str,
    pub reports: Vec<RunReport>,
}

impl SuiteReport {
    pub fn new(reports: Vec<RunReport>) -> Self {
        SuiteReport { schema: SCHEMA, reports }
    }

    /// 0 when every claim holds, 1 on a violation, otherwise the worst
    /// error code.
    pub fn exit_code(&self) -> i32 {
        let mut code = 0;
        for r in &self.reports {
            let c = match &r.verdict {
                Verdict::Holds => 0,
                Verdict::Violated { .. } => 1,
                Verdict::Error { kind, .. } if kind == "GuardExceeded" => 3,
                Verdict::Error { .. } => 2,
            };
            code = code.max(c);
        }
        code
    }
}
