use std::path::Path;
use std::time::{Duration, Instant};

use serde_json::{json, Value};

use covlab::covers::{
    ac_from_candidates, construction_exact_cover, construction_scaled_hull_cover, construction_sharp_almost_cover,
    enumerate_candidates_with, max_trace, min_cover_with, read_cache, verify_cover, write_cache, BitSet,
    CoverSolution, EnumerateOptions, ExactCoverVariant, IncidenceStructure, SolveOptions,
};
use covlab::exact_arith::ExactScalar;
use covlab::geometry::{affine_hull, Hyperplane, Point};
use covlab::pointsets::{
    cube, grid, orbit_points, permutohedron, zonotope_vertices, PointSet, Zonotope, MAX_PERMUTATION_N,
};
use covlab::polymethod::{
    alon_furedi_check, axis_product, distinct_products_numbering, find_nonvanishing_witness, per_vandermonde,
    signed_perm_sum, vandermonde_poly, SparsePoly,
};
use covlab::{Error, Result};

use crate::inputs::{self, read_file};
use crate::report::{
    candidates_json, cover_report_json, hyperplane_json, hyperplanes_json, point_json, scalar_json, solution_json,
    Report,
};
use crate::{Cli, Command, ConstructKind, GenFamily, Global, Outcome, PolyOp, ZonoOp};

pub fn name(c: &Command) -> &'static str {
    match c {
        Command::Gen { .. } => "gen",
        Command::Ac { .. } => "ac",
        Command::Cover { .. } => "cover",
        Command::Maxtrace { .. } => "maxtrace",
        Command::Punctured { .. } => "punctured",
        Command::Construct { .. } => "construct",
        Command::Verify { .. } => "verify",
        Command::Poly { .. } => "poly",
        Command::Zono { .. } => "zono",
    }
}

struct Ctx<'g> {
    g: &'g Global,
    started: Instant,
}

impl Ctx<'_> {
    fn budget(&self) -> Option<Duration> {
        self.g.time_budget.map(Duration::from_secs_f64)
    }

    fn enumerate(&self) -> EnumerateOptions {
        let mut o = EnumerateOptions::default();
        if let Some(b) = self.g.budget_subsets {
            o.budget_subsets = b;
        }
        o.deadline = self.budget().map(|d| self.started + d);
        o
    }

    fn solve(&self) -> SolveOptions {
        SolveOptions {
            max_size: None,
            time_budget: self.budget(),
            deterministic: self.g.deterministic,
            no_symmetry: self.g.no_symmetry,
        }
    }

    /// Candidates through the cache when one is configured.
    fn candidates<'a>(
        &self,
        x: &'a PointSet,
        forbidden: Option<&Point>,
        report: &mut Report,
    ) -> Result<IncidenceStructure<'a>> {
        let want = forbidden.map(|v| x.index_of(v).ok_or(Error::NotAMember)).transpose()?;
        let inc = match &self.g.cache {
            Some(path) if path.exists() => {
                let inc = read_cache(x, &read_file(path)?)?;
                if inc.forbidden() != want {
                    return Err(Error::CacheMismatch(format!(
                        "cache excludes point {:?}, this run needs {:?}",
                        inc.forbidden(),
                        want
                    )));
                }
                report.input("cache", json!({ "path": path.display().to_string(), "action": "loaded" }));
                inc
            }
            Some(path) => {
                let inc = enumerate_candidates_with(x, forbidden, &self.enumerate())?;
                std::fs::write(path, write_cache(&inc))
                    .map_err(|e| Error::Parse(format!("cannot write {}: {e}", path.display())))?;
                report.input("cache", json!({ "path": path.display().to_string(), "action": "written" }));
                inc
            }
            None => enumerate_candidates_with(x, forbidden, &self.enumerate())?,
        };
        report.phase("candidates");
        report.result("candidates", candidates_json(&inc));
        Ok(inc)
    }

    fn solution(&self, report: &mut Report, sol: &CoverSolution) -> Value {
        if !sol.optimal {
            report.budget_hit(format!(
                "time budget ran out; best cover found has {} hyperplanes, lower bound {}",
                sol.size, sol.lower_bound_at_root
            ));
        }
        solution_json(sol, self.g.deterministic)
    }
}

fn pointset_inputs(report: &mut Report, spec: &str, x: &PointSet) {
    report.input("pointset", spec);
    report.input("points", x.len());
    report.input("dim", x.ambient_dim());
    report.input("digest", x.digest());
}

fn all_but(n: usize, skip: &[usize]) -> BitSet {
    let mut s = BitSet::full(n);
    for &i in skip {
        s.remove(i);
    }
    s
}

pub fn run(cli: &Cli, report: &mut Report) -> Result<Outcome> {
    let ctx = Ctx { g: &cli.global, started: Instant::now() };
    if let Some(t) = cli.global.time_budget {
        if !(t.is_finite() && t > 0.0) {
            return Err(Error::Parse(format!("time budget must be a positive number of seconds, got {t}")));
        }
        report.input("time_budget", t);
    }
    if let Some(b) = cli.global.budget_subsets {
        report.input("budget_subsets", b);
    }
    match &cli.command {
        Command::Gen { family, output } => gen(family, output.as_deref(), report),
        Command::Ac { pointset, vertex, transitive } => ac(&ctx, pointset, vertex.as_deref(), *transitive, report),
        Command::Cover { pointset, exclude_hull } => cover(&ctx, pointset, *exclude_hull, report),
        Command::Maxtrace { pointset } => maxtrace(&ctx, pointset, report),
        Command::Punctured { pointset, holes, vertex } => punctured(&ctx, pointset, holes, vertex, report),
        Command::Construct { which } => construct(&cli.global, which, report),
        Command::Verify { pointset, hyperplanes, expect_missed } => {
            verify(&cli.global, pointset, hyperplanes, expect_missed.as_deref(), report)
        }
        Command::Poly { op } => poly(op, report),
        Command::Zono { op: ZonoOp::Ac { generators, base } } => zono_ac(&ctx, generators, base.as_deref(), report),
    }
}

fn gen(family: &GenFamily, output: Option<&Path>, report: &mut Report) -> Result<Outcome> {
    let x = match family {
        GenFamily::Permutohedron { n } => {
            report.input("family", "permutohedron");
            report.input("n", *n);
            permutohedron(*n)?
        }
        GenFamily::Orbit { values } => {
            report.input("family", "orbit");
            report.input("values", values.clone());
            let alphas = values.iter().map(|v| inputs::scalars(v)).collect::<Result<Vec<_>>>()?;
            orbit_points(&alphas.concat())?
        }
        GenFamily::Grid { factor } => {
            report.input("family", "grid");
            report.input("factors", factor.clone());
            grid(&factor.iter().map(|f| inputs::scalars(f)).collect::<Result<Vec<_>>>()?)?
        }
        GenFamily::Cube { n } => {
            report.input("family", "cube");
            report.input("n", *n);
            cube(*n)?
        }
        GenFamily::Zonotope { generators, base } => {
            report.input("family", "zonotope");
            report.input("generators", generators.display().to_string());
            let z = inputs::generators(generators, base.as_deref())?;
            report.result("rank", z.rank());
            zonotope_vertices(&z)?.points
        }
    };
    let text = x.to_text();
    match output {
        Some(path) => {
            std::fs::write(path, &text).map_err(|e| Error::Parse(format!("cannot write {}: {e}", path.display())))?;
            report.input("output", path.display().to_string());
            report.result("points", x.len());
            report.result("dim", x.ambient_dim());
            report.result("digest", x.digest());
        }
        None => {
            print!("{text}");
            report.silence();
        }
    }
    Ok(Outcome::Ok)
}

fn ac(ctx: &Ctx, spec: &str, vertex: Option<&str>, transitive: bool, report: &mut Report) -> Result<Outcome> {
    let x = inputs::pointset(spec)?;
    pointset_inputs(report, spec, &x);
    report.input("transitive", transitive);
    if x.len() < 2 {
        return Err(Error::DegenerateInput("ac needs at least two points".into()));
    }
    let v = vertex.map(|s| inputs::vertex(&x, s)).transpose()?;
    let vi = v.as_ref().map(|p| x.index_of(p).ok_or(Error::NotAMember)).transpose()?;
    if let Some(p) = &v {
        report.input("vertex", point_json(p));
    }
    let all = ctx.candidates(&x, None, report)?;
    let (value, vertex_index, vertices_solved, sol) = match vi {
        Some(i) => {
            let inc = all.without_point(i)?;
            let sol = min_cover_with(&inc, &all_but(x.len(), &[i]), &ctx.solve())?;
            (sol.size, i, 1, sol)
        }
        None => {
            let r = ac_from_candidates(&all, transitive, &ctx.solve())?;
            (r.value, r.vertex, r.vertices_solved, r.solution)
        }
    };
    report.phase("search");
    let missed = &x.points()[vertex_index];
    report.result("value", value);
    report.result("optimal", sol.optimal);
    report.result("vertex", point_json(missed));
    report.result("vertex_index", vertex_index);
    report.result("vertices_solved", vertices_solved);
    report.result("expect_missed", json!([missed.to_string()]));
    let s = ctx.solution(report, &sol);
    report.result("solution", s);
    Ok(Outcome::Ok)
}

fn cover(ctx: &Ctx, spec: &str, exclude_hull: bool, report: &mut Report) -> Result<Outcome> {
    let x = inputs::pointset(spec)?;
    pointset_inputs(report, spec, &x);
    report.input("exclude_hull", exclude_hull);
    if exclude_hull && x.hull().is_full() {
        return Err(Error::NoAmbientHyperplane);
    }
    let inc = ctx.candidates(&x, None, report)?;
    let sol = min_cover_with(&inc, &BitSet::full(x.len()), &ctx.solve())?;
    report.phase("search");
    report.result("value", sol.size);
    report.result("optimal", sol.optimal);
    report.result("hull_dim", x.hull().dim());
    report.result("expect_missed", json!([]));
    let s = ctx.solution(report, &sol);
    report.result("solution", s);
    Ok(Outcome::Ok)
}

fn maxtrace(ctx: &Ctx, spec: &str, report: &mut Report) -> Result<Outcome> {
    let x = inputs::pointset(spec)?;
    pointset_inputs(report, spec, &x);
    let m = max_trace(&x, &ctx.enumerate())?;
    report.phase("scan");
    report.result("size", m.size);
    report.result("witness", hyperplane_json(&m.witness));
    report.result("witness_trace", m.witness_trace.clone());
    report.result("spanned_hyperplanes", m.hyperplanes);
    Ok(Outcome::Ok)
}

fn punctured(ctx: &Ctx, spec: &str, holes: &[String], vertex: &str, report: &mut Report) -> Result<Outcome> {
    let x = inputs::pointset(spec)?;
    pointset_inputs(report, spec, &x);
    let v = inputs::vertex(&x, vertex)?;
    let hs = holes.iter().map(|h| inputs::vertex(&x, h)).collect::<Result<Vec<_>>>()?;
    report.input("vertex", point_json(&v));
    report.input("holes", hs.iter().map(point_json).collect::<Vec<_>>());
    let vi = x.index_of(&v).ok_or(Error::NotAMember)?;
    let mut skip = vec![vi];
    for h in &hs {
        skip.push(x.index_of(h).ok_or(Error::NotAMember)?);
    }
    if !hs.is_empty() && affine_hull(&hs)?.contains(&v) {
        return Err(Error::HypothesisViolated(format!("{v} lies in the affine hull of the holes")));
    }
    let inc = ctx.candidates(&x, Some(&v), report)?;
    let sol = min_cover_with(&inc, &all_but(x.len(), &skip), &ctx.solve())?;
    report.phase("search");
    report.result("value", sol.size);
    report.result("optimal", sol.optimal);
    let s = ctx.solution(report, &sol);
    report.result("solution", s);
    Ok(Outcome::Ok)
}

fn write_trace_csv(path: &Path, hs: &[Hyperplane], sizes: &[usize]) -> Result<()> {
    let io = |e: csv::Error| Error::Parse(format!("cannot write {}: {e}", path.display()));
    let mut w = csv::Writer::from_path(path).map_err(io)?;
    w.write_record(["index", "hyperplane", "trace_size"]).map_err(io)?;
    for (i, (h, s)) in hs.iter().zip(sizes).enumerate() {
        w.write_record([i.to_string(), h.to_string(), s.to_string()]).map_err(io)?;
    }
    w.flush().map_err(|e| Error::Parse(format!("cannot write {}: {e}", path.display())))
}

/// Traces of `hs` on `x`, compared with the points that should be missed.
fn check(g: &Global, report: &mut Report, x: &PointSet, hs: &[Hyperplane], missed: &[Point]) -> Result<Outcome> {
    let r = verify_cover(x, hs, missed);
    report.result("verification", cover_report_json(&r));
    if let Some(path) = &g.trace_csv {
        write_trace_csv(path, hs, &r.trace_sizes)?;
        report.input("trace_csv", path.display().to_string());
    }
    Ok(if r.pass { Outcome::Ok } else { Outcome::Failed })
}

fn construct(g: &Global, which: &ConstructKind, report: &mut Report) -> Result<Outcome> {
    let (kind, n) = match which {
        ConstructKind::Sharp { n } => ("sharp", *n),
        ConstructKind::Column { n } => ("column", *n),
        ConstructKind::Diagonal { n } => ("diagonal", *n),
        ConstructKind::Odd { n } => ("odd", *n),
        ConstructKind::Even { n } => ("even", *n),
        ConstructKind::Scaledhull { generators, base } => {
            report.input("construction", "scaledhull");
            report.input("generators", generators.display().to_string());
            let z = inputs::generators(generators, base.as_deref())?;
            let hs = construction_scaled_hull_cover(&z)?;
            let x = zonotope_vertices(&z)?.points;
            report.result("count", hs.len());
            report.result("hyperplanes", hyperplanes_json(&hs));
            report.result("expect_missed", json!([z.base().to_string()]));
            return check(g, report, &x, &hs, &[z.base().clone()]);
        }
    };
    report.input("construction", kind);
    report.input("n", n);
    let (hs, missed) = if kind == "sharp" {
        if n == 0 {
            return Err(Error::DegenerateInput("n must be at least 1".into()));
        }
        let id = Point::new((1..=n as i64).map(|i| ExactScalar::from_integer(i.into())).collect());
        (construction_sharp_almost_cover(n), vec![id])
    } else {
        let variant: ExactCoverVariant = kind.parse()?;
        (construction_exact_cover(n, variant)?, vec![])
    };
    report.result("count", hs.len());
    report.result("hyperplanes", hyperplanes_json(&hs));
    report.result("expect_missed", missed.iter().map(|p| p.to_string()).collect::<Vec<_>>());
    if n > MAX_PERMUTATION_N {
        report.result("verification", Value::Null);
        return Ok(Outcome::Ok);
    }
    let x = permutohedron(n)?;
    check(g, report, &x, &hs, &missed)
}

fn verify(g: &Global, spec: &str, path: &Path, expect: Option<&[String]>, report: &mut Report) -> Result<Outcome> {
    let x = inputs::pointset(spec)?;
    pointset_inputs(report, spec, &x);
    report.input("hyperplanes", path.display().to_string());
    let list = inputs::hyperplanes(path)?;
    for h in &list.hyperplanes {
        if h.dim() != x.ambient_dim() {
            return Err(Error::ShapeMismatch(format!(
                "hyperplane {h} in dimension {}, points in {}",
                h.dim(),
                x.ambient_dim()
            )));
        }
    }
    let expect: Vec<String> = match expect {
        Some(e) => e.to_vec(),
        None => list.expect_missed.clone().unwrap_or_default(),
    };
    let missed = expect.iter().map(|s| inputs::vertex(&x, s)).collect::<Result<Vec<_>>>()?;
    report.input("expect_missed", missed.iter().map(point_json).collect::<Vec<_>>());
    report.result("count", list.hyperplanes.len());
    check(g, report, &x, &list.hyperplanes, &missed)
}

fn read_poly(path: &Path) -> Result<SparsePoly> {
    SparsePoly::from_text(&read_file(path)?)
}

fn poly_summary(f: &SparsePoly) -> Value {
    json!({ "nvars": f.nvars(), "terms": f.len(), "degree": f.degree() })
}

fn poly(op: &PolyOp, report: &mut Report) -> Result<Outcome> {
    match op {
        PolyOp::Vandermonde { n, output } => {
            report.input("op", "vandermonde");
            report.input("n", *n);
            let f = vandermonde_poly(*n)?;
            report.result("polynomial", poly_summary(&f));
            match output {
                Some(p) => {
                    std::fs::write(p, f.to_text())
                        .map_err(|e| Error::Parse(format!("cannot write {}: {e}", p.display())))?;
                    report.input("output", p.display().to_string());
                }
                None => report.result("text", f.to_text()),
            }
        }
        PolyOp::Signedsum { poly } => {
            report.input("op", "signedsum");
            report.input("poly", poly.display().to_string());
            let f = read_poly(poly)?;
            report.result("polynomial", poly_summary(&f));
            report.result("value", scalar_json(&signed_perm_sum(&f)?));
        }
        PolyOp::Witness { poly, alphas } => {
            report.input("op", "witness");
            report.input("poly", poly.display().to_string());
            report.input("alphas", alphas.as_str());
            let f = read_poly(poly)?;
            let a = inputs::scalars(alphas)?;
            report.result("polynomial", poly_summary(&f));
            let w = find_nonvanishing_witness(&f, &a)?;
            report.result("found", w.is_some());
            report.result("point", w.as_ref().map_or(Value::Null, |(p, _)| point_json(p)));
            report.result("value", w.as_ref().map_or(Value::Null, |(_, v)| scalar_json(v)));
            let sum = match signed_perm_sum(&f) {
                Ok(s) => scalar_json(&s),
                Err(Error::DegreeMismatch { .. }) => Value::Null,
                Err(e) => return Err(e),
            };
            report.result("signed_sum", sum);
        }
        PolyOp::Pervandermonde { values } => {
            report.input("op", "pervandermonde");
            report.input("values", values.clone());
            let a = values.iter().map(|v| inputs::scalars(v)).collect::<Result<Vec<_>>>()?.concat();
            report.result("value", scalar_json(&per_vandermonde(&a)?));
        }
        PolyOp::Numbering { a, values } => {
            report.input("op", "numbering");
            report.input("a", a.as_str());
            report.input("values", values.as_str());
            let a = inputs::scalars(a)?;
            let b = inputs::scalars(values)?;
            report.result("permanent", scalar_json(&per_vandermonde(&a)?));
            let found = distinct_products_numbering(&a, &b)?;
            report.result("found", found.is_some());
            report.result(
                "numbering",
                found.map_or(Value::Null, |b| Value::Array(b.iter().map(scalar_json).collect())),
            );
        }
        PolyOp::Afcheck { poly, factor } => {
            report.input("op", "afcheck");
            report.input("factors", factor.clone());
            let factors = factor.iter().map(|f| inputs::scalars(f)).collect::<Result<Vec<_>>>()?;
            let f = match poly {
                Some(p) => {
                    report.input("poly", p.display().to_string());
                    read_poly(p)?
                }
                None => {
                    report.input("poly", "axis-product");
                    axis_product(&factors)?
                }
            };
            let r = alon_furedi_check(&f, &factors)?;
            report.result("grid_size", r.grid_size);
            report.result("nonvanishing", r.nonvanishing.iter().map(point_json).collect::<Vec<_>>());
            report.result("applicable", r.applicable);
            report.result("degree", r.degree);
            report.result("bound", r.bound);
            report.result("margin", r.margin);
        }
    }
    Ok(Outcome::Ok)
}

fn zono_ac(ctx: &Ctx, generators: &Path, base: Option<&str>, report: &mut Report) -> Result<Outcome> {
    report.input("generators", generators.display().to_string());
    let z: Zonotope = inputs::generators(generators, base)?;
    report.input("rank", z.rank());
    report.input("dim", z.dim());
    let x = zonotope_vertices(&z)?.points;
    report.result("vertices", x.len());
    report.phase("vertices");
    let all = ctx.candidates(&x, None, report)?;
    let r = ac_from_candidates(&all, false, &ctx.solve())?;
    report.phase("search");
    report.result("value", r.value);
    report.result("optimal", r.solution.optimal);
    report.result("at_least_rank", r.value >= z.rank());
    report.result("vertex", point_json(&x.points()[r.vertex]));
    let s = ctx.solution(report, &r.solution);
    report.result("solution", s);
    let scaled = match construction_scaled_hull_cover(&z) {
        Ok(hs) => {
            let v = verify_cover(&x, &hs, &[z.base().clone()]);
            json!({ "count": hs.len(), "verification": cover_report_json(&v) })
        }
        Err(Error::HypothesisViolated(why)) => json!({ "skipped": why }),
        Err(e) => return Err(e),
    };
    report.result("scaled_hull", scaled);
    Ok(Outcome::Ok)
}
