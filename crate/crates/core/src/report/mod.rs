//! Runs the analyses of a validated scenario and renders the results.
//!
//! The JSON form has the shape
//!
//! ```json
//! {"scenario": "...", "analyses": [{"kind": "...", "target": [...],
//!   "status": "pass", "details": {...}, "ms": null}], "version": "...", "seed": 0}
//! ```
//!
//! Details are sorted maps, so output is byte-stable for a fixed scenario,
//! seed and version. `ms` stays `null` unless timings are requested.

mod analyses;

use std::fmt;
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;

pub use analyses::DEFAULT_SHRINKIND_SAMPLES;
use analyses::{run_request, Ctx, Details};

use crate::dsl::Resolved;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Pass,
    Fail,
    Skipped,
    HypothesesNotMet,
    BudgetExceeded,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Skipped => "skipped",
            Status::HypothesesNotMet => "hypotheses_not_met",
            Status::BudgetExceeded => "budget_exceeded",
        }
    }
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Record {
    pub kind: String,
    pub target: Vec<String>,
    pub status: Status,
    pub details: Details,
    pub ms: Option<u64>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Report {
    pub scenario: String,
    pub analyses: Vec<Record>,
    pub version: String,
    pub seed: u64,
}

#[derive(Clone, Debug)]
pub struct RunConfig {
    pub jobs: usize,
    /// Overrides the scenario's `set seed`.
    pub seed: Option<u64>,
    pub timings: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            jobs: 1,
            seed: None,
            timings: false,
        }
    }
}

/// Executes every request on a pool of `jobs` threads; records come back in
/// request order whatever the pool size.
pub fn run(res: &Resolved, config: &RunConfig) -> Report {
    let seed = config.seed.or(res.options.seed).unwrap_or(0);
    let ctx = Ctx {
        seed,
        node_budget: res.options.node_budget,
    };
    let one = |(i, req): (usize, &crate::dsl::Request)| {
        let start = Instant::now();
        let (status, details) = run_request(res, req, i, &ctx);
        Record {
            kind: req.kind.name().to_string(),
            target: req.target.clone(),
            status,
            details,
            ms: config.timings.then(|| start.elapsed().as_millis() as u64),
        }
    };
    let analyses = match rayon::ThreadPoolBuilder::new()
        .num_threads(config.jobs.max(1))
        .build()
    {
        Ok(pool) => pool.install(|| res.analyses.par_iter().enumerate().map(one).collect()),
        Err(_) => res.analyses.iter().enumerate().map(one).collect(),
    };
    Report {
        scenario: res.label().to_string(),
        analyses,
        version: VERSION.to_string(),
        seed,
    }
}

impl Report {
    pub fn any_failed(&self) -> bool {
        self.analyses.iter().any(|r| r.status == Status::Fail)
    }

    /// Process exit code: non-zero only when some record failed.
    pub fn exit_code(&self) -> i32 {
        i32::from(self.any_failed())
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    /// An aligned table, one row per record.
    pub fn to_text(&self) -> String {
        let header = ["#", "kind", "target", "status", "details"];
        let rows: Vec<[String; 5]> = self
            .analyses
            .iter()
            .enumerate()
            .map(|(i, r)| {
                let mut details: Vec<String> = r
                    .details
                    .iter()
                    .map(|(k, v)| format!("{k}={}", serde_json::to_string(v).expect("json value")))
                    .collect();
                if let Some(ms) = r.ms {
                    details.push(format!("ms={ms}"));
                }
                [
                    (i + 1).to_string(),
                    r.kind.clone(),
                    r.target.join(", "),
                    r.status.as_str().to_uppercase(),
                    details.join(" "),
                ]
            })
            .collect();
        let mut widths = header.map(str::len);
        for row in &rows {
            for (w, cell) in widths.iter_mut().zip(row) {
                *w = (*w).max(cell.chars().count());
            }
        }
        let line = |cells: [&str; 5]| {
            let mut s = String::new();
            for (i, c) in cells.iter().enumerate() {
                if i == 4 {
                    s.push_str(c);
                } else {
                    s.push_str(&format!("{c:<w$}  ", w = widths[i]));
                }
            }
            s.trim_end().to_string()
        };
        let mut out = format!(
            "scenario: {}\nversion: {}  seed: {}\n\n",
            self.scenario, self.version, self.seed
        );
        out.push_str(&line(header));
        out.push('\n');
        for row in &rows {
            out.push_str(&line([&row[0], &row[1], &row[2], &row[3], &row[4]]));
            out.push('\n');
        }
        let count = |s: Status| self.analyses.iter().filter(|r| r.status == s).count();
        out.push_str(&format!(
            "\n{} analyses: {} pass, {} fail, {} skipped, {} hypotheses_not_met, {} budget_exceeded\n",
            self.analyses.len(),
            count(Status::Pass),
            count(Status::Fail),
            count(Status::Skipped),
            count(Status::HypothesesNotMet),
            count(Status::BudgetExceeded)
        ));
        out
    }
}

/// Scenario source for the `Z/p^k ⋊ U(p^k)` tower with `(a, u) ↦ (pa, u)`.
pub fn demo_scenario(p: u64, depth: usize) -> String {
    format!(
        "# Z/p^k x| U(p^k), phi(a, u) = (pa, u)\n\
         set label = \"units-semidirect p={p} depth={depth}\"\n\
         tower T = units_semidirect({p}) depth {depth}\n\
         analyze theorem_a(T)\n\
         analyze theorem_b(T)\n\
         analyze typef(T, 2)\n"
    )
}
