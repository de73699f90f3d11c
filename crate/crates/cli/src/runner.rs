//! Validation and execution of a whole document.

use std::panic::{catch_unwind, AssertUnwindSafe};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::document::{self, InputError, TaskDocument};
use crate::env::{Env, TaskError};
use crate::ops::{self, Entry};
use crate::payload;

/// A document whose declarations are built and whose tasks all resolve.
pub struct Prepared {
    pub doc: TaskDocument,
    env: Env,
    entries: Vec<&'static Entry>,
}

impl Prepared {
    pub fn new(doc: TaskDocument) -> Result<Self, InputError> {
        let env = Env::build(&doc)?;
        let mut entries = Vec::with_capacity(doc.tasks.len());
        for (i, t) in doc.tasks.iter().enumerate() {
            let at = format!("tasks[{i}]");
            let entry =
                ops::lookup(&t.op).ok_or_else(|| InputError::schema(format!("{at}.op"), format!("unknown op {:?}", t.op)))?;
            entry.check(&t.args, &env, &at)?;
            entries.push(entry);
        }
        Ok(Prepared { doc, env, entries })
    }

    pub fn task_count(&self) -> usize {
        self.entries.len()
    }
}

/// Parses and validates document text.
pub fn prepare(text: &str) -> Result<Prepared, InputError> {
    Prepared::new(document::parse(text)?)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Ok,
    Error,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ErrorRecord {
    pub code: String,
    pub message: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TaskResult {
    pub index: usize,
    pub op: String,
    pub status: Status,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub payload: Option<Value>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<ErrorRecord>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ResultDocument {
    pub results: Vec<TaskResult>,
}

impl ResultDocument {
    pub fn all_ok(&self) -> bool {
        self.results.iter().all(|r| r.status == Status::Ok)
    }

    /// Pretty JSON with keys in sorted order and a trailing newline.
    pub fn to_json(&self) -> String {
        let v = serde_json::to_value(self).expect("results always serialize");
        let mut s = serde_json::to_string_pretty(&v).expect("values always serialize");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<Self, InputError> {
        document::from_json(text)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for r in &self.results {
            let body = match (&r.payload, &r.error) {
                (Some(p), _) => payload::render(p),
                (None, Some(e)) => format!("error {}: {}", e.code, e.message),
                (None, None) => String::new(),
            };
            out.push_str(&format!("[{}] {}: {}\n", r.index, r.op, body));
        }
        out
    }
}

fn run_one(p: &Prepared, i: usize) -> TaskResult {
    let task = &p.doc.tasks[i];
    let outcome = catch_unwind(AssertUnwindSafe(|| p.entries[i].run(&task.args, &p.env)))
        .unwrap_or_else(|_| Err(TaskError::new("Panic", "operation panicked")));
    let (status, payload, error) = match outcome {
        Ok(v) => (Status::Ok, Some(v), None),
        Err(e) => (Status::Error, None, Some(ErrorRecord { code: e.code, message: e.message })),
    };
    TaskResult { index: i, op: task.op.clone(), status, payload, error }
}

/// Runs every task on a pool of `jobs` threads. Results come back in task
/// order whatever the pool size.
pub fn run(p: &Prepared, jobs: usize) -> ResultDocument {
    let pool = rayon::ThreadPoolBuilder::new().num_threads(jobs.max(1)).build().expect("thread pool");
    let results = pool.install(|| (0..p.entries.len()).into_par_iter().map(|i| run_one(p, i)).collect());
    ResultDocument { results }
}
