use rayon::prelude::*;

use num_traits::Zero;

use super::{strict_feasible, PointSet};
use crate::error::{Error, Result};
use crate::exact_arith::{ExactScalar, ExactVector};
use crate::geometry::Point;

pub const MAX_ZONOTOPE_RANK: usize = 16;
pub const MAX_ZONOTOPE_DIM: usize = 6;

/// Minkowski sum `base + Σ [0, v_i]` of pairwise non-parallel nonzero
/// segments.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Zonotope {
    generators: Vec<ExactVector>,
    base: Point,
}

impl Zonotope {
    pub fn generators(&self) -> &[ExactVector] {
        &self.generators
    }

    pub fn base(&self) -> &Point {
        &self.base
    }

    pub fn rank(&self) -> usize {
        self.generators.len()
    }

    pub fn dim(&self) -> usize {
        self.base.dim()
    }

    /// `base + Σ_{i ∈ subset} v_i`, with the subset given as a bitmask.
    pub fn subset_sum(&self, subset: u32) -> Point {
        let mut c = self.base.coords().to_vec();
        for (i, v) in self.generators.iter().enumerate() {
            if subset >> i & 1 == 1 {
                for (x, y) in c.iter_mut().zip(v) {
                    *x += y;
                }
            }
        }
        Point::new(c)
    }
}

fn parallel(a: &[ExactScalar], b: &[ExactScalar]) -> bool {
    (0..a.len()).all(|i| (i + 1..a.len()).all(|j| (&a[i] * &b[j] - &a[j] * &b[i]).is_zero()))
}

/// Validates a segment collection and returns the zonotope, whose rank is
/// the number of generators.
pub fn zonotope_rank(generators: Vec<ExactVector>, base: Point) -> Result<Zonotope> {
    let dim = base.dim();
    for (i, v) in generators.iter().enumerate() {
        if v.len() != dim {
            return Err(Error::ShapeMismatch(format!(
                "generator {i} has dimension {} but the base has {dim}",
                v.len()
            )));
        }
        if v.iter().all(Zero::is_zero) {
            return Err(Error::DegenerateCollection(format!("generator {i} is zero")));
        }
        if let Some(j) = (0..i).find(|&j| parallel(&generators[j], v)) {
            return Err(Error::DegenerateCollection(format!(
                "generators {j} and {i} are parallel"
            )));
        }
    }
    Ok(Zonotope { generators, base })
}

/// Vertex set of a zonotope with, for each vertex, its generator subset and a
/// functional that is maximised on it and nowhere else.
#[derive(Debug, Clone)]
pub struct ZonotopeVertices {
    pub points: PointSet,
    pub subsets: Vec<u32>,
    pub witnesses: Vec<ExactVector>,
}

/// Enumerates sign vectors: the subset sum for `S` is a vertex iff some `c`
/// has `c · v_i > 0` on `S` and `c · v_i < 0` off `S`. Output is ordered by
/// subset bitmask.
pub fn zonotope_vertices(z: &Zonotope) -> Result<ZonotopeVertices> {
    let rank = z.rank();
    if rank > MAX_ZONOTOPE_RANK || z.dim() > MAX_ZONOTOPE_DIM {
        return Err(Error::SizeLimit(format!(
            "zonotope of rank {rank} in dimension {} exceeds rank {MAX_ZONOTOPE_RANK} / dimension {MAX_ZONOTOPE_DIM}",
            z.dim()
        )));
    }
    let found: Vec<Option<(u32, ExactVector)>> = (0..1u32 << rank)
        .into_par_iter()
        .map(|subset| {
            let rows: Vec<ExactVector> = z
                .generators
                .iter()
                .enumerate()
                .map(|(i, v)| {
                    if subset >> i & 1 == 1 {
                        v.clone()
                    } else {
                        v.iter().map(|x| -x.clone()).collect()
                    }
                })
                .collect();
            let c = if rows.is_empty() {
                Some(vec![ExactScalar::zero(); z.dim()])
            } else {
                strict_feasible(&rows)?
            };
            Ok(c.map(|c| (subset, c)))
        })
        .collect::<Result<_>>()?;

    let mut subsets = Vec::new();
    let mut witnesses = Vec::new();
    let mut points: Vec<Point> = Vec::new();
    let mut seen = std::collections::HashSet::new();
    for (subset, c) in found.into_iter().flatten() {
        let p = z.subset_sum(subset);
        if seen.insert(p.clone()) {
            points.push(p);
            subsets.push(subset);
            witnesses.push(c);
        }
    }
    Ok(ZonotopeVertices { points: PointSet::new(points)?, subsets, witnesses })
}
