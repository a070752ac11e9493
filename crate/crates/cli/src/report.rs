use std::time::Instant;

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde_json::{json, Map, Value};

use covlab::covers::{CoverReport, CoverSolution, IncidenceStructure};
use covlab::exact_arith::{format_scalar, ExactScalar};
use covlab::geometry::{Hyperplane, Point};
use covlab::Error;

/// One JSON document per run. `serde_json` objects are key-sorted, so the
/// output is stable byte for byte when timings are left out.
pub struct Report {
    command: String,
    inputs: Map<String, Value>,
    results: Map<String, Value>,
    timings: Map<String, Value>,
    budget_hits: Vec<Value>,
    started: Instant,
    last: Instant,
    with_timings: bool,
    silent: bool,
}

impl Report {
    pub fn new(command: &str, with_timings: bool) -> Self {
        let now = Instant::now();
        Self {
            command: command.to_string(),
            inputs: Map::new(),
            results: Map::new(),
            timings: Map::new(),
            budget_hits: Vec::new(),
            started: now,
            last: now,
            with_timings,
            silent: false,
        }
    }

    pub fn input(&mut self, key: &str, v: impl Into<Value>) {
        self.inputs.insert(key.to_string(), v.into());
    }

    pub fn result(&mut self, key: &str, v: impl Into<Value>) {
        self.results.insert(key.to_string(), v.into());
    }

    /// Records the time since the previous phase ended.
    pub fn phase(&mut self, name: &str) {
        let now = Instant::now();
        self.timings.insert(name.to_string(), json!((now - self.last).as_secs_f64()));
        self.last = now;
    }

    pub fn budget_hit(&mut self, what: impl Into<String>) {
        self.budget_hits.push(Value::String(what.into()));
    }

    pub fn has_budget_hits(&self) -> bool {
        !self.budget_hits.is_empty()
    }

    /// The command wrote its own output; no report is printed.
    pub fn silence(&mut self) {
        self.silent = true;
    }

    pub fn is_silent(&self) -> bool {
        self.silent
    }

    pub fn finish(mut self, error: Option<&Error>) -> Value {
        let mut doc = Map::new();
        doc.insert("command".into(), json!(self.command));
        doc.insert("inputs".into(), Value::Object(self.inputs));
        doc.insert("results".into(), Value::Object(self.results));
        doc.insert("budget_hits".into(), Value::Array(self.budget_hits));
        if self.with_timings {
            self.timings.insert("total".into(), json!(self.started.elapsed().as_secs_f64()));
            doc.insert("timings".into(), Value::Object(self.timings));
        }
        if let Some(e) = error {
            doc.insert("error".into(), json!({ "kind": error_kind(e), "message": e.to_string() }));
        }
        Value::Object(doc)
    }
}

pub fn error_kind(e: &Error) -> &'static str {
    match e {
        Error::DegenerateInput(_) => "DegenerateInput",
        Error::ShapeMismatch(_) => "ShapeMismatch",
        Error::SizeLimit(_) => "SizeLimit",
        Error::DegenerateSpan => "DegenerateSpan",
        Error::IsAmbientHyperplane => "IsAmbientHyperplane",
        Error::DegenerateCollection(_) => "DegenerateCollection",
        Error::Infeasible(_) => "Infeasible",
        Error::NotAMember => "NotAMember",
        Error::NoAmbientHyperplane => "NoAmbientHyperplane",
        Error::HypothesisViolated(_) => "HypothesisViolated",
        Error::ParityMismatch(_) => "ParityMismatch",
        Error::DegreeMismatch { .. } => "DegreeMismatch",
        Error::ContractViolated(_) => "ContractViolated",
        Error::BudgetExceeded(_) => "BudgetExceeded",
        Error::Overflow(_) => "Overflow",
        Error::Parse(_) => "Parse",
        Error::CacheMismatch(_) => "CacheMismatch",
    }
}

pub fn int_json(x: &BigInt) -> Value {
    match x.to_i64() {
        Some(v) => json!(v),
        None => json!(x.to_string()),
    }
}

pub fn scalar_json(x: &ExactScalar) -> Value {
    if x.is_integer() {
        int_json(x.numer())
    } else {
        json!(format_scalar(x))
    }
}

pub fn point_json(p: &Point) -> Value {
    json!(p.to_string())
}

pub fn hyperplane_json(h: &Hyperplane) -> Value {
    json!({
        "normal": h.normal().iter().map(int_json).collect::<Vec<_>>(),
        "offset": int_json(h.offset()),
        "mode": h.mode().as_str(),
        "equation": h.to_string(),
    })
}

pub fn hyperplanes_json(hs: &[Hyperplane]) -> Value {
    Value::Array(hs.iter().map(hyperplane_json).collect())
}

/// Node counts depend on how a parallel search interleaves, so they are only
/// reported when the search is sequential.
pub fn solution_json(sol: &CoverSolution, deterministic: bool) -> Value {
    let mut m = Map::new();
    m.insert("size".into(), json!(sol.size));
    m.insert("optimal".into(), json!(sol.optimal));
    m.insert("lower_bound_at_root".into(), json!(sol.lower_bound_at_root));
    m.insert("chosen".into(), json!(sol.chosen));
    m.insert("hyperplanes".into(), hyperplanes_json(&sol.hyperplanes));
    if deterministic {
        m.insert("nodes_expanded".into(), json!(sol.nodes_expanded));
    }
    Value::Object(m)
}

pub fn candidates_json(inc: &IncidenceStructure<'_>) -> Value {
    let s = inc.stats();
    json!({
        "count": inc.len(),
        "mode": inc.mode().as_str(),
        "subsets_scanned": s.subsets_scanned,
        "degenerate_subsets": s.degenerate_subsets,
        "spanned": s.spanned,
        "through_forbidden": s.through_forbidden,
        "fallback_added": s.fallback_added,
        "fallback_fired": inc.fallback_fired(),
        "dominated_removed": s.dominated_removed,
        "from_cache": s.from_cache,
    })
}

pub fn cover_report_json(r: &CoverReport) -> Value {
    json!({
        "trace_sizes": r.trace_sizes,
        "pairwise_disjoint": r.pairwise_disjoint,
        "missed": r.missed_points.iter().map(point_json).collect::<Vec<_>>(),
        "problems": r.problems,
        "pass": r.pass,
    })
}
