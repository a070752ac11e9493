//! Text cache for incidence structures.
//!
//! ```text
//! # covlab incidence v1
//! # digest=<sha256 of the point-set text> mode=induced forbidden=3 candidates=2
//! 0 1 -1 ; 1 ; 0 4 9
//! ...
//! ```
//!
//! Each record is `normal ; offset ; trace`. Loading recomputes every trace
//! and rejects the file on any disagreement.

use std::fmt::Write as _;

use num_bigint::BigInt;

use super::bits::{self, words_for};
use super::candidates::{trace_of, CandidateStats, IncidenceStructure};
use super::frame::LocalFrame;
use crate::error::{Error, Result};
use crate::geometry::{Hyperplane, Mode};
use crate::pointsets::PointSet;

const MAGIC: &str = "# covlab incidence v1";

pub fn write_cache(inc: &IncidenceStructure<'_>) -> String {
    let mut out = String::new();
    let forbidden = inc.forbidden().map_or("none".to_string(), |v| v.to_string());
    writeln!(out, "{MAGIC}").unwrap();
    writeln!(
        out,
        "# digest={} mode={} forbidden={forbidden} candidates={}",
        inc.points().digest(),
        inc.mode().as_str(),
        inc.len()
    )
    .unwrap();
    for i in 0..inc.len() {
        let h = inc.hyperplane(i);
        let normal: Vec<String> = h.normal().iter().map(ToString::to_string).collect();
        let trace: Vec<String> = inc.trace_indices(i).iter().map(ToString::to_string).collect();
        writeln!(out, "{} ; {} ; {}", normal.join(" "), h.offset(), trace.join(" ")).unwrap();
    }
    out
}

fn mismatch(msg: impl Into<String>) -> Error {
    Error::CacheMismatch(msg.into())
}

pub fn read_cache<'a>(x: &'a PointSet, text: &str) -> Result<IncidenceStructure<'a>> {
    let mut lines = text.lines();
    if lines.next().map(str::trim) != Some(MAGIC) {
        return Err(mismatch("missing cache header"));
    }
    let header = lines.next().ok_or_else(|| mismatch("missing cache header"))?;
    let mut digest = None;
    let mut mode = None;
    let mut forbidden = None;
    let mut count = None;
    for field in header.trim_start_matches('#').split_whitespace() {
        let (k, v) = field.split_once('=').ok_or_else(|| mismatch(format!("bad header field {field:?}")))?;
        match k {
            "digest" => digest = Some(v.to_string()),
            "mode" => mode = Some(v.to_string()),
            "forbidden" => {
                forbidden = Some(if v == "none" {
                    None
                } else {
                    Some(v.parse::<usize>().map_err(|_| mismatch("bad forbidden index"))?)
                })
            }
            "candidates" => count = Some(v.parse::<usize>().map_err(|_| mismatch("bad candidate count"))?),
            _ => return Err(mismatch(format!("unknown header field {k:?}"))),
        }
    }
    if digest.as_deref() != Some(x.digest().as_str()) {
        return Err(mismatch("cache was built for a different point set"));
    }
    let expected_mode = if x.hull().is_full() { Mode::Ambient } else { Mode::Induced };
    if mode.as_deref() != Some(expected_mode.as_str()) {
        return Err(mismatch("cache mode does not match the point set"));
    }
    let forbidden = forbidden.ok_or_else(|| mismatch("missing forbidden field"))?;
    if forbidden.is_some_and(|v| v >= x.len()) {
        return Err(mismatch("forbidden index out of range"));
    }
    let count = count.ok_or_else(|| mismatch("missing candidate count"))?;

    let frame = LocalFrame::new(x)?;
    let words = words_for(x.len());
    let mut entries: Vec<(Vec<i64>, Vec<u64>)> = Vec::with_capacity(count);
    for (k, line) in lines.enumerate().filter(|(_, l)| !l.trim().is_empty()) {
        let parts: Vec<&str> = line.split(';').collect();
        if parts.len() != 3 {
            return Err(mismatch(format!("record {k}: expected `normal ; offset ; trace`")));
        }
        let ints = |s: &str| -> Result<Vec<BigInt>> {
            s.split_whitespace()
                .map(|t| t.parse::<BigInt>().map_err(|_| mismatch(format!("record {k}: bad integer {t:?}"))))
                .collect()
        };
        let normal = ints(parts[0])?;
        let offset = ints(parts[1])?.pop().ok_or_else(|| mismatch(format!("record {k}: missing offset")))?;
        let h = Hyperplane::from_canonical(normal, offset, expected_mode)
            .map_err(|e| mismatch(format!("record {k}: {e}")))?;
        let form = frame
            .local_form(&h)
            .map_err(|e| mismatch(format!("record {k}: {e}")))?
            .ok_or_else(|| mismatch(format!("record {k}: not a hyperplane of the hull")))?;
        if frame.to_hyperplane(&form)? != h {
            return Err(mismatch(format!("record {k}: hyperplane is not canonical for this hull")));
        }
        let trace = trace_of(&frame, &form, words);
        let listed: Vec<usize> = parts[2]
            .split_whitespace()
            .map(|t| t.parse::<usize>().map_err(|_| mismatch(format!("record {k}: bad index {t:?}"))))
            .collect::<Result<_>>()?;
        if listed != bits::iter_ones(&trace).collect::<Vec<_>>() {
            return Err(mismatch(format!("record {k}: trace does not match the point set")));
        }
        if forbidden.is_some_and(|v| bits::test(&trace, v)) {
            return Err(mismatch(format!("record {k}: trace contains the forbidden point")));
        }
        entries.push((form, trace));
    }
    if entries.len() != count {
        return Err(mismatch(format!("expected {count} records, found {}", entries.len())));
    }
    let stats = CandidateStats { from_cache: true, ..CandidateStats::default() };
    Ok(IncidenceStructure::from_parts(x, frame, entries, forbidden, stats))
}
