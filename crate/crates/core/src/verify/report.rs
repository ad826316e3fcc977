use serde::Serialize;
use serde_json::Value;

/// Outcome of one verification run.
#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub check: String,
    pub scope: Value,
    pub instances: u64,
    pub failures: Vec<Value>,
    pub seed: u64,
    pub elapsed_ms: u64,
    pub data: Value,
}

impl Report {
    pub fn new(check: impl Into<String>, scope: Value, seed: u64) -> Self {
        Report {
            check: check.into(),
            scope,
            instances: 0,
            failures: Vec::new(),
            seed,
            elapsed_ms: 0,
            data: Value::Null,
        }
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// JSON with the timing field zeroed, for byte comparisons.
    pub fn canonical_json(&self) -> String {
        let mut r = self.clone();
        r.elapsed_ms = 0;
        serde_json::to_string(&r).expect("report serializes")
    }
}

/// Runs `f` and stores the wall time in the returned report.
pub fn timed(f: impl FnOnce() -> Report) -> Report {
    let start = std::time::Instant::now();
    let mut r = f();
    r.elapsed_ms = start.elapsed().as_millis() as u64;
    r
}
