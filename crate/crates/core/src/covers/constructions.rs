//! Explicit covers of permutohedra and zonotopes, and a verifier.

use std::collections::BTreeSet;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::exact_arith::{int, ExactMatrix, ExactScalar};
use crate::geometry::{canonicalize, CanonMode, Hyperplane, Point};
use crate::pointsets::{PointSet, Zonotope};

/// `x_i = j` for `1 ≤ i < j ≤ n`: covers `P_n` except `(1, 2, …, n)`.
pub fn construction_sharp_almost_cover(n: usize) -> Vec<Hyperplane> {
    let mut out = Vec::new();
    for i in 0..n {
        for j in i + 2..=n {
            out.push(Hyperplane::axis(n, i, &int(j as i64)));
        }
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ExactCoverVariant {
    Column,
    Diagonal,
    Odd,
    Even,
}

impl ExactCoverVariant {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::Column => "column",
            Self::Diagonal => "diagonal",
            Self::Odd => "odd",
            Self::Even => "even",
        }
    }
}

impl std::str::FromStr for ExactCoverVariant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "column" => Ok(Self::Column),
            "diagonal" => Ok(Self::Diagonal),
            "odd" => Ok(Self::Odd),
            "even" => Ok(Self::Even),
            _ => Err(Error::Parse(format!("unknown cover variant {s:?}"))),
        }
    }
}

fn unit(n: usize, terms: &[(usize, i64)]) -> Vec<i64> {
    let mut v = vec![0; n];
    for &(i, a) in terms {
        v[i] += a;
    }
    v
}

/// Covers of all of `P_n` by hyperplanes other than `Σ x_i = n(n+1)/2`.
pub fn construction_exact_cover(n: usize, variant: ExactCoverVariant) -> Result<Vec<Hyperplane>> {
    if n == 0 {
        return Err(Error::DegenerateInput("n must be at least 1".into()));
    }
    let m = n as i64;
    let hs = match variant {
        ExactCoverVariant::Column => {
            (1..=m).map(|i| Hyperplane::from_equation(&unit(n, &[(0, 1)]), i)).collect()
        }
        ExactCoverVariant::Diagonal => {
            if n < 2 {
                return Err(Error::DegenerateInput("diagonal variant needs n ≥ 2".into()));
            }
            let mut hs = vec![Hyperplane::from_equation(&unit(n, &[(n - 1, 1)]), 1)];
            for i in 0..n - 1 {
                hs.push(Hyperplane::from_equation(&unit(n, &[(n - 1, 1), (i, -1)]), 1));
            }
            hs
        }
        ExactCoverVariant::Odd => {
            if n % 2 == 0 {
                return Err(Error::ParityMismatch(format!("odd variant needs odd n, got {n}")));
            }
            let mut hs = vec![Hyperplane::from_equation(&unit(n, &[(0, 1)]), (m + 1) / 2)];
            for j in 1..n {
                hs.push(Hyperplane::from_equation(&unit(n, &[(0, 1), (j, 1)]), m + 1));
            }
            hs
        }
        ExactCoverVariant::Even => {
            if n % 2 == 1 || n < 4 {
                return Err(Error::ParityMismatch(format!("even variant needs even n ≥ 4, got {n}")));
            }
            (1..n).map(|j| Hyperplane::from_equation(&unit(n, &[(0, 1), (j, 1)]), m + 1)).collect()
        }
    };
    Ok(hs)
}

/// The hyperplanes `kH`, `k = 1..rank`, where `H` is the affine hull of the
/// generator endpoints. Together they cover every vertex but the origin.
pub fn construction_scaled_hull_cover(z: &Zonotope) -> Result<Vec<Hyperplane>> {
    let d = z.dim();
    if z.base().coords().iter().any(|c| !c.is_zero()) {
        return Err(Error::HypothesisViolated("zonotope base is not the origin".into()));
    }
    if z.rank() == 0 || ExactMatrix::from_rows(z.generators().to_vec())?.rank() < d {
        return Err(Error::HypothesisViolated("zonotope is not full-dimensional".into()));
    }
    // (c, e) with c · v_i + e = 0 for every generator
    let rows: Vec<Vec<ExactScalar>> = z
        .generators()
        .iter()
        .map(|v| v.iter().cloned().chain(std::iter::once(int(1))).collect())
        .collect();
    let ns = ExactMatrix::from_rows(rows)?.nullspace();
    if ns.len() != 1 {
        return Err(Error::HypothesisViolated(
            "generator endpoints do not span a hyperplane".into(),
        ));
    }
    let c: Vec<ExactScalar> = ns[0][..d].iter().map(|x| ExactScalar::from_integer(x.clone())).collect();
    let e = ExactScalar::from_integer(ns[0][d].clone());
    if e.is_zero() {
        return Err(Error::HypothesisViolated(
            "the affine hull of the generators passes through the origin".into(),
        ));
    }
    (1..=z.rank())
        .map(|k| canonicalize(&c, &(&e * int(k as i64)), &CanonMode::Ambient))
        .collect()
}

/// Result of checking a hyperplane family against a point set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoverReport {
    pub trace_sizes: Vec<usize>,
    pub pairwise_disjoint: bool,
    /// Indices of the points on no hyperplane.
    pub missed: Vec<usize>,
    pub missed_points: Vec<Point>,
    pub problems: Vec<String>,
    pub pass: bool,
}

/// Computes all traces of `hs` on `x` and compares the missed points with
/// `expect_missed`. Failures are reported, never raised.
pub fn verify_cover(x: &PointSet, hs: &[Hyperplane], expect_missed: &[Point]) -> CoverReport {
    let mut problems = Vec::new();
    let mut covered = vec![0usize; x.len()];
    let mut trace_sizes = Vec::with_capacity(hs.len());
    for (k, h) in hs.iter().enumerate() {
        if h.dim() != x.ambient_dim() {
            problems.push(format!("hyperplane {k} has dimension {} but points have {}", h.dim(), x.ambient_dim()));
            trace_sizes.push(0);
            continue;
        }
        let mut size = 0;
        for (i, p) in x.points().iter().enumerate() {
            if h.contains(p) {
                covered[i] += 1;
                size += 1;
            }
        }
        trace_sizes.push(size);
    }
    let pairwise_disjoint = covered.iter().all(|&c| c <= 1);
    let missed: Vec<usize> = (0..x.len()).filter(|&i| covered[i] == 0).collect();
    let missed_points: Vec<Point> = missed.iter().map(|&i| x.points()[i].clone()).collect();
    let expected: BTreeSet<&Point> = expect_missed.iter().collect();
    for p in &expected {
        if !x.contains(p) {
            problems.push(format!("expected missed point {p} is not in the set"));
        }
    }
    let got: BTreeSet<&Point> = missed_points.iter().collect();
    if got != expected {
        problems.push(format!("{} points missed, {} expected", got.len(), expected.len()));
    }
    CoverReport {
        pass: problems.is_empty(),
        trace_sizes,
        pairwise_disjoint,
        missed,
        missed_points,
        problems,
    }
}
