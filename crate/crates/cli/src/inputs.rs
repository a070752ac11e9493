//! Parsing of command-line operands: point sets, vertices, hyperplane
//! lists and generator files.

use std::path::Path;
use std::str::FromStr;

use num_bigint::BigInt;
use serde_json::Value;

use covlab::exact_arith::{parse_scalar, ExactScalar, ExactVector};
use covlab::geometry::{canonicalize, CanonMode, Hyperplane, Mode, Point};
use covlab::pointsets::{cube, grid, orbit_points, permutohedron, zonotope_rank, PointSet, Zonotope};
use covlab::{Error, Result};

pub fn read_file(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("cannot read {}: {e}", path.display())))
}

pub fn scalars(s: &str) -> Result<ExactVector> {
    s.split(',').filter(|t| !t.trim().is_empty()).map(parse_scalar).collect()
}

/// A point set operand: a file in the point-set text format, or one of the
/// inline forms `perm:N`, `cube:N`, `orbit:a,b,..` and `grid:a,bxc,d,..`.
pub fn pointset(spec: &str) -> Result<PointSet> {
    let path = Path::new(spec);
    if path.exists() {
        return PointSet::from_text(&read_file(path)?);
    }
    let Some((kind, arg)) = spec.split_once(':') else {
        return Err(Error::Parse(format!("no such point-set file: {spec}")));
    };
    let count = || usize::from_str(arg).map_err(|_| Error::Parse(format!("bad size in {spec:?}")));
    match kind {
        "perm" | "permutohedron" => permutohedron(count()?),
        "cube" => cube(count()?),
        "orbit" => orbit_points(&scalars(arg)?),
        "grid" => grid(&arg.split('x').map(scalars).collect::<Result<Vec<_>>>()?),
        _ => Err(Error::Parse(format!("unknown point-set form {kind:?}"))),
    }
}

/// A point of `x`, given by its index in file order or by coordinates
/// (`1,2,3` or `(1,2,3)`; the parenthesised form keeps a leading minus
/// sign from being read as a flag).
pub fn vertex(x: &PointSet, spec: &str) -> Result<Point> {
    let spec = spec.trim();
    if let Ok(i) = usize::from_str(spec) {
        return x
            .points()
            .get(i)
            .cloned()
            .ok_or_else(|| Error::Parse(format!("vertex index {i} out of range (set has {} points)", x.len())));
    }
    let inner = spec.trim_start_matches('(').trim_end_matches(')');
    let p = Point::new(scalars(inner)?);
    if p.dim() != x.ambient_dim() {
        return Err(Error::ShapeMismatch(format!(
            "vertex {p} has dimension {}, the set has {}",
            p.dim(),
            x.ambient_dim()
        )));
    }
    Ok(p)
}

/// Generators, one per line in the point-set text format.
pub fn generators(path: &Path, base: Option<&str>) -> Result<Zonotope> {
    let mut gens = Vec::new();
    for line in read_file(path)?.lines().map(str::trim) {
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        gens.push(line.split_whitespace().map(parse_scalar).collect::<Result<ExactVector>>()?);
    }
    let dim = gens.first().map(Vec::len).ok_or_else(|| Error::Parse("generator file is empty".into()))?;
    let base = match base {
        Some(b) => Point::new(scalars(b.trim_start_matches('(').trim_end_matches(')'))?),
        None => Point::new(vec![ExactScalar::from_integer(0.into()); dim]),
    };
    zonotope_rank(gens, base)
}

fn int_field(v: &Value) -> Result<BigInt> {
    match v {
        Value::Number(n) => n
            .as_i64()
            .map(BigInt::from)
            .ok_or_else(|| Error::Parse(format!("non-integer coefficient {n}"))),
        Value::String(s) => BigInt::from_str(s).map_err(|_| Error::Parse(format!("bad integer {s:?}"))),
        _ => Err(Error::Parse(format!("bad coefficient {v}"))),
    }
}

fn hyperplane_from_json(v: &Value) -> Result<Hyperplane> {
    let normal = v
        .get("normal")
        .and_then(Value::as_array)
        .ok_or_else(|| Error::Parse("hyperplane without a normal".into()))?
        .iter()
        .map(int_field)
        .collect::<Result<Vec<_>>>()?;
    let offset = int_field(v.get("offset").ok_or_else(|| Error::Parse("hyperplane without an offset".into()))?)?;
    let mode = match v.get("mode").and_then(Value::as_str) {
        Some("induced") => Mode::Induced,
        _ => Mode::Ambient,
    };
    Hyperplane::from_canonical(normal, offset, mode)
}

/// First array named `hyperplanes`, searched depth first in key order.
fn find_hyperplanes(v: &Value) -> Option<&Vec<Value>> {
    match v {
        Value::Object(m) => {
            if let Some(Value::Array(a)) = m.get("hyperplanes") {
                return Some(a);
            }
            m.values().find_map(find_hyperplanes)
        }
        _ => None,
    }
}

fn find_key<'a>(v: &'a Value, key: &str) -> Option<&'a Value> {
    match v {
        Value::Object(m) => m.get(key).or_else(|| m.values().find_map(|c| find_key(c, key))),
        _ => None,
    }
}

pub struct HyperplaneList {
    pub hyperplanes: Vec<Hyperplane>,
    /// Points a report says should stay uncovered.
    pub expect_missed: Option<Vec<String>>,
}

/// Either a JSON report that echoes `hyperplanes`, or text lines
/// `a_1 .. a_d ; b` for `a · x + b = 0`, optionally followed by `; induced`
/// for forms that are already canonical inside a proper flat.
pub fn hyperplanes(path: &Path) -> Result<HyperplaneList> {
    let text = read_file(path)?;
    if text.trim_start().starts_with('{') {
        let doc: Value = serde_json::from_str(&text).map_err(|e| Error::Parse(format!("bad report: {e}")))?;
        let list = find_hyperplanes(&doc).ok_or_else(|| Error::Parse("report lists no hyperplanes".into()))?;
        let expect_missed = find_key(&doc, "expect_missed").and_then(Value::as_array).map(|a| {
            a.iter().filter_map(Value::as_str).map(str::to_string).collect()
        });
        return Ok(HyperplaneList {
            hyperplanes: list.iter().map(hyperplane_from_json).collect::<Result<_>>()?,
            expect_missed,
        });
    }
    let mut hs = Vec::new();
    for line in text.lines().map(str::trim) {
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split(';').map(str::trim).collect();
        let (normal, offset) = match fields.as_slice() {
            [n, o] | [n, o, _] => (*n, *o),
            _ => return Err(Error::Parse(format!("bad hyperplane line {line:?}"))),
        };
        let normal: ExactVector = normal.split_whitespace().map(parse_scalar).collect::<Result<_>>()?;
        let offset = parse_scalar(offset)?;
        let h = match fields.get(2) {
            Some(&"induced") => {
                let ints = |v: &ExactScalar| {
                    v.is_integer()
                        .then(|| v.numer().clone())
                        .ok_or_else(|| Error::Parse(format!("induced form must be integral: {line:?}")))
                };
                Hyperplane::from_canonical(normal.iter().map(ints).collect::<Result<_>>()?, ints(&offset)?, Mode::Induced)?
            }
            Some(&"ambient") | None => canonicalize(&normal, &offset, &CanonMode::Ambient)?,
            Some(other) => return Err(Error::Parse(format!("unknown hyperplane mode {other:?}"))),
        };
        hs.push(h);
    }
    Ok(HyperplaneList { hyperplanes: hs, expect_missed: None })
}
