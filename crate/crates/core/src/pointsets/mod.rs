//! Finite point families: permutohedron vertices, permutation orbits,
//! Cartesian grids and zonotope vertex sets.

mod feasibility;
mod zonotope;

use std::collections::HashMap;
use std::fmt::Write as _;

use itertools::Itertools;
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::exact_arith::{format_scalar, int, parse_scalar, ExactScalar};
use crate::geometry::{affine_hull, Flat, Point};

pub use feasibility::strict_feasible;
pub use zonotope::{zonotope_rank, zonotope_vertices, Zonotope, ZonotopeVertices};

pub const MAX_PERMUTATION_N: usize = 8;
pub const MAX_GRID_POINTS: usize = 1_000_000;

/// An indexed list of pairwise distinct points together with their affine
/// hull.
#[derive(Debug, Clone)]
pub struct PointSet {
    points: Vec<Point>,
    ambient_dim: usize,
    hull: Flat,
    index: HashMap<Point, usize>,
}

impl PartialEq for PointSet {
    fn eq(&self, other: &Self) -> bool {
        self.points == other.points
    }
}

impl Eq for PointSet {}

impl PointSet {
    pub fn new(points: Vec<Point>) -> Result<Self> {
        let first = points
            .first()
            .ok_or_else(|| Error::DegenerateInput("empty point set".into()))?;
        let ambient_dim = first.dim();
        if points.iter().any(|p| p.dim() != ambient_dim) {
            return Err(Error::ShapeMismatch("points of different dimensions".into()));
        }
        let mut index = HashMap::with_capacity(points.len());
        for (i, p) in points.iter().enumerate() {
            if index.insert(p.clone(), i).is_some() {
                return Err(Error::DegenerateInput(format!("repeated point {p}")));
            }
        }
        let hull = affine_hull(&points)?;
        Ok(Self { points, ambient_dim, hull, index })
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn hull(&self) -> &Flat {
        &self.hull
    }

    pub fn index_of(&self, p: &Point) -> Option<usize> {
        self.index.get(p).copied()
    }

    pub fn contains(&self, p: &Point) -> bool {
        self.index.contains_key(p)
    }

    /// Line-oriented text form: a `# dim=<d> count=<m>` header, then one
    /// point per line with coordinates written as `p/q`.
    pub fn to_text(&self) -> String {
        let mut s = format!("# dim={} count={}\n", self.ambient_dim, self.points.len());
        for p in &self.points {
            let line = p.coords().iter().map(format_scalar).join(" ");
            let _ = writeln!(s, "{line}");
        }
        s
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut dim = None;
        let mut count = None;
        let mut points = Vec::new();
        for line in text.lines().map(str::trim).filter(|l| !l.is_empty()) {
            if let Some(header) = line.strip_prefix('#') {
                for field in header.split_whitespace() {
                    if let Some(v) = field.strip_prefix("dim=") {
                        dim = Some(v.parse::<usize>().map_err(|_| Error::Parse(line.into()))?);
                    } else if let Some(v) = field.strip_prefix("count=") {
                        count = Some(v.parse::<usize>().map_err(|_| Error::Parse(line.into()))?);
                    }
                }
                continue;
            }
            let coords = line
                .split_whitespace()
                .map(parse_scalar)
                .collect::<Result<Vec<_>>>()?;
            points.push(Point::new(coords));
        }
        if let Some(d) = dim {
            if let Some(p) = points.iter().find(|p| p.dim() != d) {
                return Err(Error::Parse(format!("point {p} does not have dim={d}")));
            }
        }
        if let Some(c) = count {
            if c != points.len() {
                return Err(Error::Parse(format!("header count={c} but {} points", points.len())));
            }
        }
        Self::new(points)
    }

    /// SHA-256 of the text form, hex encoded.
    pub fn digest(&self) -> String {
        hex::encode(Sha256::digest(self.to_text().as_bytes()))
    }
}

/// Vertex set `P_n` of the permutohedron: all permutations of `(1, …, n)`,
/// in lexicographic order.
pub fn permutohedron(n: usize) -> Result<PointSet> {
    if n == 0 || n > MAX_PERMUTATION_N {
        return Err(Error::SizeLimit(format!(
            "permutohedron order must be in 1..={MAX_PERMUTATION_N}, got {n}"
        )));
    }
    let alphas: Vec<ExactScalar> = (1..=n as i64).map(int).collect();
    orbit_points(&alphas)
}

/// All coordinate permutations of pairwise distinct `alphas`.
pub fn orbit_points(alphas: &[ExactScalar]) -> Result<PointSet> {
    let n = alphas.len();
    if n == 0 || n > MAX_PERMUTATION_N {
        return Err(Error::SizeLimit(format!(
            "orbit length must be in 1..={MAX_PERMUTATION_N}, got {n}"
        )));
    }
    if !alphas.iter().all_unique() {
        return Err(Error::DegenerateInput("orbit values must be pairwise different".into()));
    }
    let points = (0..n)
        .permutations(n)
        .map(|p| Point::new(p.iter().map(|&i| alphas[i].clone()).collect()))
        .collect();
    PointSet::new(points)
}

/// Cartesian product `S_1 × … × S_n`, first factor varying slowest.
pub fn grid(factors: &[Vec<ExactScalar>]) -> Result<PointSet> {
    if factors.is_empty() {
        return Err(Error::DegenerateInput("grid needs at least one factor".into()));
    }
    let mut size: usize = 1;
    for f in factors {
        if f.is_empty() {
            return Err(Error::DegenerateInput("empty grid factor".into()));
        }
        if !f.iter().all_unique() {
            return Err(Error::DegenerateInput("grid factor with repeated values".into()));
        }
        size = size
            .checked_mul(f.len())
            .filter(|&s| s <= MAX_GRID_POINTS)
            .ok_or_else(|| {
                Error::SizeLimit(format!("grid exceeds {MAX_GRID_POINTS} points"))
            })?;
    }
    let points = factors
        .iter()
        .map(|f| f.iter().cloned())
        .multi_cartesian_product()
        .map(Point::new)
        .collect();
    PointSet::new(points)
}

/// Vertices of the unit cube `{0,1}^n`.
pub fn cube(n: usize) -> Result<PointSet> {
    grid(&vec![vec![int(0), int(1)]; n])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_arith::{affine_rank, frac, ints};
    use crate::geometry::{ambient_sum, incidence};

    #[test]
    fn permutohedron_examples() {
        let p1 = permutohedron(1).unwrap();
        assert_eq!(p1.points(), &[Point::from_ints(&[1])]);
        assert_eq!(p1.hull().dim(), 0);

        let p3 = permutohedron(3).unwrap();
        assert_eq!(p3.len(), 6);
        for p in p3.points() {
            assert_eq!(p.coords().iter().sum::<ExactScalar>(), int(6));
        }
        let p4 = permutohedron(4).unwrap();
        assert_eq!(p4.len(), 24);
        assert_eq!(p4.hull().dim(), 3);
        let raw: Vec<_> = p4.points().iter().map(|p| p.coords().to_vec()).collect();
        assert_eq!(affine_rank(&raw).unwrap(), 3);

        assert!(matches!(permutohedron(0), Err(Error::SizeLimit(_))));
        assert!(matches!(permutohedron(9), Err(Error::SizeLimit(_))));
    }

    #[test]
    fn permutohedron_sizes_and_ambient_incidence() {
        let mut fact = 1;
        for n in 1..=6 {
            fact *= n;
            let p = permutohedron(n).unwrap();
            assert_eq!(p.len(), fact);
            assert_eq!(incidence(&ambient_sum(n), &p).unwrap().len(), fact);
            if n >= 2 {
                assert_eq!(p.hull().dim(), n - 1);
            }
        }
    }

    #[test]
    fn orbit_examples() {
        assert_eq!(orbit_points(&ints(&[1, 2, 3])).unwrap(), permutohedron(3).unwrap());
        let o = orbit_points(&ints(&[0, 1])).unwrap();
        assert_eq!(o.points(), &[Point::from_ints(&[0, 1]), Point::from_ints(&[1, 0])]);
        assert!(matches!(orbit_points(&ints(&[1, 2, 2])), Err(Error::DegenerateInput(_))));
        let r = orbit_points(&[frac(1, 2), frac(-3, 7), int(5)]).unwrap();
        assert_eq!(r.len(), 6);
    }

    #[test]
    fn grid_examples() {
        let sq = grid(&[ints(&[0, 1]), ints(&[0, 1])]).unwrap();
        assert_eq!(sq.len(), 4);
        let g = grid(&vec![ints(&[1, 2, 3]); 3]).unwrap();
        assert_eq!(g.len(), 27);
        for p in permutohedron(3).unwrap().points() {
            assert!(g.contains(p));
        }
        let single = grid(&[ints(&[5])]).unwrap();
        assert_eq!(single.points(), &[Point::from_ints(&[5])]);
        assert!(matches!(grid(&[ints(&[1]), vec![]]), Err(Error::DegenerateInput(_))));
        let huge = vec![(0..10).map(int).collect::<Vec<_>>(); 7];
        assert!(matches!(grid(&huge), Err(Error::SizeLimit(_))));
        assert_eq!(cube(3).unwrap().len(), 8);
    }

    #[test]
    fn text_round_trip_and_errors() {
        let p = orbit_points(&[frac(1, 2), int(-3), int(4)]).unwrap();
        let text = p.to_text();
        assert!(text.starts_with("# dim=3 count=6\n1/2 -3/1 4/1\n"));
        let back = PointSet::from_text(&text).unwrap();
        assert_eq!(back, p);
        assert_eq!(back.digest(), p.digest());
        assert!(PointSet::from_text("# dim=2 count=2\n1 2\n").is_err());
        assert!(PointSet::from_text("1 2\n1 2\n").is_err());
        assert!(PointSet::from_text("1 a\n").is_err());
    }

    #[test]
    fn distinct_points_required() {
        let pts = vec![Point::from_ints(&[1, 2]), Point::from_ints(&[1, 2])];
        assert!(matches!(PointSet::new(pts), Err(Error::DegenerateInput(_))));
        assert!(matches!(PointSet::new(vec![]), Err(Error::DegenerateInput(_))));
    }
}
