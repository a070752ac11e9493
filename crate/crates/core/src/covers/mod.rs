//! Hyperplane covers: candidate enumeration, exact minimum covers, the
//! explicit constructions, and a cover verifier.

mod bits;
mod cache;
mod candidates;
mod constructions;
mod frame;
mod solver;

pub use bits::BitSet;
pub use cache::{read_cache, write_cache};
pub use candidates::{
    enumerate_candidates, enumerate_candidates_with, max_trace, CandidateStats, EnumerateOptions,
    IncidenceStructure, MaxTrace, DEFAULT_BUDGET_SUBSETS,
};
pub use constructions::{
    construction_exact_cover, construction_scaled_hull_cover, construction_sharp_almost_cover,
    verify_cover, CoverReport, ExactCoverVariant,
};
pub use solver::{min_cover, min_cover_with, CoverSolution, SolveOptions};

use crate::error::{Error, Result};
use crate::geometry::{affine_hull, Point};
use crate::pointsets::PointSet;

/// Options shared by the composite cover operations.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CoverOptions {
    pub enumerate: EnumerateOptions,
    pub solve: SolveOptions,
}

fn all_but(n: usize, skip: &[usize]) -> BitSet {
    let mut s = BitSet::full(n);
    for &i in skip {
        s.remove(i);
    }
    s
}

fn member(x: &PointSet, p: &Point) -> Result<usize> {
    x.index_of(p).ok_or(Error::NotAMember)
}

/// `ac(X, v)`: fewest hyperplanes covering `X \ {v}`, none through `v`.
pub fn almost_cover_number(x: &PointSet, v: &Point, opts: &CoverOptions) -> Result<CoverSolution> {
    let vi = member(x, v)?;
    let inc = enumerate_candidates_with(x, Some(v), &opts.enumerate)?;
    min_cover_with(&inc, &all_but(x.len(), &[vi]), &opts.solve)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AcResult {
    pub value: usize,
    pub vertex: usize,
    pub solution: CoverSolution,
    /// Vertices actually solved (1 when the set was declared transitive).
    pub vertices_solved: usize,
}

/// `ac(X) = min_v ac(X, v)`. With `transitive`, the caller asserts that
/// all points are equivalent under symmetries of `X` and only the first
/// point is solved.
pub fn ac(x: &PointSet, transitive: bool, opts: &CoverOptions) -> Result<AcResult> {
    if x.len() < 2 {
        return Err(Error::DegenerateInput("ac needs at least two points".into()));
    }
    let all = enumerate_candidates_with(x, None, &opts.enumerate)?;
    ac_from_candidates(&all, transitive, &opts.solve)
}

/// [`ac`] on precomputed candidates, which must have no forbidden point.
pub fn ac_from_candidates(all: &IncidenceStructure<'_>, transitive: bool, opts: &SolveOptions) -> Result<AcResult> {
    let x = all.points();
    if x.len() < 2 {
        return Err(Error::DegenerateInput("ac needs at least two points".into()));
    }
    if all.forbidden().is_some() {
        return Err(Error::DegenerateInput("candidates already exclude a point".into()));
    }
    let vertices = if transitive { 1 } else { x.len() };
    let mut best: Option<AcResult> = None;
    for v in 0..vertices {
        let inc = all.without_point(v)?;
        let mut solve = opts.clone();
        if let Some(b) = &best {
            // only a strictly smaller cover can change the minimum
            if b.value == 0 {
                break;
            }
            let cap = b.value - 1;
            solve.max_size = Some(solve.max_size.map_or(cap, |m| m.min(cap)));
        }
        match min_cover_with(&inc, &all_but(x.len(), &[v]), &solve) {
            Ok(sol) => {
                let optimal = sol.optimal && best.as_ref().map_or(true, |b| b.solution.optimal);
                best = Some(AcResult {
                    value: sol.size,
                    vertex: v,
                    solution: CoverSolution { optimal, ..sol },
                    vertices_solved: v + 1,
                });
            }
            Err(Error::Infeasible(_)) if best.is_some() => {
                if let Some(b) = best.as_mut() {
                    b.vertices_solved = v + 1;
                }
            }
            Err(e) => return Err(e),
        }
    }
    best.ok_or_else(|| Error::Infeasible("no almost cover found".into()))
}

/// Fewest hyperplanes of the hull covering all of `x` (so none of them is
/// the hull itself).
pub fn exact_cover_number_excluding_ambient(x: &PointSet, opts: &CoverOptions) -> Result<CoverSolution> {
    if x.hull().is_full() {
        return Err(Error::NoAmbientHyperplane);
    }
    let inc = enumerate_candidates_with(x, None, &opts.enumerate)?;
    min_cover_with(&inc, &BitSet::full(x.len()), &opts.solve)
}

/// Fewest hyperplanes avoiding `v` that cover `x \ (holes ∪ {v})`, given
/// that `v` is not in the affine hull of the holes.
pub fn punctured_cover_number(
    x: &PointSet,
    holes: &[Point],
    v: &Point,
    opts: &CoverOptions,
) -> Result<CoverSolution> {
    let vi = member(x, v)?;
    let mut skip = vec![vi];
    for h in holes {
        skip.push(member(x, h)?);
    }
    if !holes.is_empty() && affine_hull(holes)?.contains(v) {
        return Err(Error::HypothesisViolated(format!(
            "{v} lies in the affine hull of the holes"
        )));
    }
    let inc = enumerate_candidates_with(x, Some(v), &opts.enumerate)?;
    min_cover_with(&inc, &all_but(x.len(), &skip), &opts.solve)
}
