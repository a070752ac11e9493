//! Exact points, affine flats and hyperplanes.
//!
//! A hyperplane is stored as a jointly primitive integer equation
//! `normal · x + offset = 0` whose first nonzero normal entry is positive, so
//! two hyperplanes are equal exactly when their stored forms are equal.
//! Hyperplanes of a proper flat (for example the hyperplane `H_0` holding a
//! permutohedron) are equivalence classes of ambient equations; the class
//! representative has its normal projected onto the flat's direction space.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::exact_arith::{
    int, primitive_normalize, rref, EchelonBasis, ExactMatrix, ExactScalar, ExactVector,
};
use crate::pointsets::PointSet;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Point {
    coords: ExactVector,
}

impl Point {
    pub fn new(coords: ExactVector) -> Self {
        Self { coords }
    }

    pub fn from_ints(coords: &[i64]) -> Self {
        Self::new(coords.iter().map(|&c| int(c)).collect())
    }

    pub fn coords(&self) -> &[ExactScalar] {
        &self.coords
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn sub(&self, other: &Point) -> ExactVector {
        self.coords.iter().zip(&other.coords).map(|(a, b)| a - b).collect()
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coords.iter().map(|c| c.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// Whether a hyperplane is an equation of the whole space or the class
/// representative of a hyperplane inside a proper flat.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Mode {
    Ambient,
    Induced,
}

impl Mode {
    pub fn as_str(self) -> &'static str {
        match self {
            Mode::Ambient => "ambient",
            Mode::Induced => "induced",
        }
    }
}

/// How [`canonicalize`] reduces an equation. `Induced` works modulo the
/// linear form `f_0(x) = Σ x_i − level`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CanonMode {
    Ambient,
    Induced { level: ExactScalar },
}

impl CanonMode {
    /// Induced mode for the permutohedron `P_n`, level `n(n+1)/2`.
    pub fn permutohedron(n: usize) -> Self {
        CanonMode::Induced { level: int((n * (n + 1) / 2) as i64) }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Hyperplane {
    normal: Vec<BigInt>,
    offset: BigInt,
    mode: Mode,
}

impl Hyperplane {
    /// Builds a hyperplane from an already canonical integer form. Fails if
    /// the form is not canonical.
    pub fn from_canonical(normal: Vec<BigInt>, offset: BigInt, mode: Mode) -> Result<Self> {
        let mut all = normal.clone();
        all.push(offset.clone());
        let canon = crate::exact_arith::primitive_normalize_ints(&all)?;
        if canon != all || normal.iter().all(Zero::is_zero) {
            return Err(Error::DegenerateInput(
                "hyperplane equation is not in canonical form".into(),
            ));
        }
        Ok(Self { normal, offset, mode })
    }

    /// Ambient hyperplane `normal · x = rhs` from small integers.
    pub fn from_equation(normal: &[i64], rhs: i64) -> Self {
        let n: ExactVector = normal.iter().map(|&a| int(a)).collect();
        canonicalize(&n, &int(-rhs), &CanonMode::Ambient).expect("nonzero normal")
    }

    /// The coordinate hyperplane `x_axis = value` in dimension `dim`
    /// (`axis` is zero-based).
    pub fn axis(dim: usize, axis: usize, value: &ExactScalar) -> Self {
        let mut n = vec![ExactScalar::zero(); dim];
        n[axis] = ExactScalar::one();
        canonicalize(&n, &-value.clone(), &CanonMode::Ambient).expect("nonzero normal")
    }

    pub fn normal(&self) -> &[BigInt] {
        &self.normal
    }

    pub fn offset(&self) -> &BigInt {
        &self.offset
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn dim(&self) -> usize {
        self.normal.len()
    }

    pub fn evaluate(&self, p: &Point) -> ExactScalar {
        let mut acc = BigRational::from_integer(self.offset.clone());
        for (a, x) in self.normal.iter().zip(p.coords()) {
            if !a.is_zero() {
                acc += x * BigRational::from_integer(a.clone());
            }
        }
        acc
    }

    pub fn contains(&self, p: &Point) -> bool {
        // integer points are the common case; skip rational arithmetic there
        if p.coords().iter().all(|c| c.is_integer()) {
            let mut acc = self.offset.clone();
            for (a, x) in self.normal.iter().zip(p.coords()) {
                if !a.is_zero() {
                    acc += a * x.numer();
                }
            }
            return acc.is_zero();
        }
        self.evaluate(p).is_zero()
    }
}

impl fmt::Display for Hyperplane {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, a) in self.normal.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            let mag = a.abs();
            let sign = if a.is_negative() { "-" } else { "+" };
            if first {
                if a.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            if mag.is_one() {
                write!(f, "x{}", i + 1)?;
            } else {
                write!(f, "{mag}*x{}", i + 1)?;
            }
            first = false;
        }
        if !self.offset.is_zero() {
            let sign = if self.offset.is_negative() { "-" } else { "+" };
            write!(f, " {sign} {}", self.offset.abs())?;
        }
        write!(f, " = 0")?;
        if self.mode == Mode::Induced {
            write!(f, " (induced)")?;
        }
        Ok(())
    }
}

/// Canonical form of `normal · x + offset = 0`.
///
/// In induced mode the multiple `β f_0` with `β = −(Σ normal_i)/n` is added
/// first, so the representative normal sums to zero; two equations agree
/// modulo scaling and multiples of `f_0` iff their canonical forms coincide.
pub fn canonicalize(
    normal: &[ExactScalar],
    offset: &ExactScalar,
    mode: &CanonMode,
) -> Result<Hyperplane> {
    if normal.iter().all(Zero::is_zero) {
        return Err(Error::DegenerateInput("hyperplane with zero normal".into()));
    }
    let (normal, offset, mode) = match mode {
        CanonMode::Ambient => (normal.to_vec(), offset.clone(), Mode::Ambient),
        CanonMode::Induced { level } => {
            let n = int(normal.len() as i64);
            let sum: ExactScalar = normal.iter().sum();
            let beta = -(sum / n);
            let reduced: ExactVector = normal.iter().map(|a| a + &beta).collect();
            if reduced.iter().all(Zero::is_zero) {
                return Err(Error::IsAmbientHyperplane);
            }
            (reduced, offset - &beta * level, Mode::Induced)
        }
    };
    let mut all = normal;
    all.push(offset);
    let mut prim = primitive_normalize(&all)?;
    let offset = prim.pop().expect("offset entry");
    Ok(Hyperplane { normal: prim, offset, mode })
}

/// The hyperplane `Σ x_i − n(n+1)/2 = 0` containing every point of `P_n`.
pub fn ambient_sum(n: usize) -> Hyperplane {
    let normal = vec![int(1); n];
    canonicalize(&normal, &-int((n * (n + 1) / 2) as i64), &CanonMode::Ambient)
        .expect("nonzero normal")
}

/// An affine flat: basepoint plus linearly independent integer directions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Flat {
    basepoint: Point,
    directions: Vec<Vec<BigInt>>,
    /// Row-reduced rational form of the direction space.
    reduced: Vec<ExactVector>,
    pivots: Vec<usize>,
}

impl Flat {
    fn from_basis(basepoint: Point, basis: EchelonBasis) -> Self {
        let (reduced, pivots) = basis.into_rref();
        let directions = reduced
            .iter()
            .map(|r| primitive_normalize(r).expect("basis rows are nonzero"))
            .collect();
        Self { basepoint, directions, reduced, pivots }
    }

    /// The flat through `basepoint` spanned by `directions` (which need not be
    /// independent).
    pub fn new(basepoint: Point, directions: &[ExactVector]) -> Result<Self> {
        let dim = basepoint.dim();
        let mut basis = EchelonBasis::default();
        for d in directions {
            if d.len() != dim {
                return Err(Error::ShapeMismatch("direction of wrong dimension".into()));
            }
            basis.insert(d.clone());
        }
        Ok(Self::from_basis(basepoint, basis))
    }

    pub fn whole_space(dim: usize) -> Self {
        let dirs: Vec<ExactVector> = (0..dim)
            .map(|i| (0..dim).map(|j| int((i == j) as i64)).collect())
            .collect();
        Self::new(Point::new(vec![ExactScalar::zero(); dim]), &dirs).expect("consistent dims")
    }

    pub fn basepoint(&self) -> &Point {
        &self.basepoint
    }

    pub fn directions(&self) -> &[Vec<BigInt>] {
        &self.directions
    }

    pub fn dim(&self) -> usize {
        self.directions.len()
    }

    pub fn ambient_dim(&self) -> usize {
        self.basepoint.dim()
    }

    pub fn is_full(&self) -> bool {
        self.dim() == self.ambient_dim()
    }

    /// Row-reduced direction basis; row `j` has a 1 at `pivots()[j]` and 0 at
    /// the other pivots.
    pub(crate) fn reduced_rows(&self) -> &[ExactVector] {
        &self.reduced
    }

    /// Coordinates onto which the projection of the flat is a bijection.
    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn contains(&self, p: &Point) -> bool {
        if p.dim() != self.ambient_dim() {
            return false;
        }
        let mut v = p.sub(&self.basepoint);
        for (row, &piv) in self.reduced.iter().zip(&self.pivots) {
            if !v[piv].is_zero() {
                let f = v[piv].clone();
                for (x, y) in v.iter_mut().zip(row) {
                    *x -= y * &f;
                }
            }
        }
        v.iter().all(Zero::is_zero)
    }

    /// Orthogonal projection of `w` onto the direction space.
    fn project(&self, w: &[ExactScalar]) -> ExactVector {
        let d = self.dim();
        if d == 0 {
            return vec![ExactScalar::zero(); w.len()];
        }
        let dot = |a: &[ExactScalar], b: &[ExactScalar]| -> ExactScalar {
            a.iter().zip(b).map(|(x, y)| x * y).sum()
        };
        // Gram system G λ = R w, augmented
        let rows: Vec<ExactVector> = (0..d)
            .map(|i| {
                let mut r: ExactVector =
                    (0..d).map(|j| dot(&self.reduced[i], &self.reduced[j])).collect();
                r.push(dot(&self.reduced[i], w));
                r
            })
            .collect();
        let (solved, _) = rref(rows, d + 1);
        let mut out = vec![ExactScalar::zero(); w.len()];
        for (i, row) in solved.iter().enumerate() {
            let lam = &row[d];
            for (o, r) in out.iter_mut().zip(&self.reduced[i]) {
                *o += lam * r;
            }
        }
        out
    }

    /// Canonical representative of the hyperplane of this flat cut out by
    /// `normal · x + offset = 0`.
    pub fn hyperplane_class(&self, normal: &[ExactScalar], offset: &ExactScalar) -> Result<Hyperplane> {
        if normal.len() != self.ambient_dim() {
            return Err(Error::ShapeMismatch("normal of wrong dimension".into()));
        }
        if self.is_full() {
            return canonicalize(normal, offset, &CanonMode::Ambient);
        }
        let proj = self.project(normal);
        if proj.iter().all(Zero::is_zero) {
            return Err(Error::IsAmbientHyperplane);
        }
        let shift: ExactScalar = normal
            .iter()
            .zip(&proj)
            .zip(self.basepoint.coords())
            .map(|((a, b), x)| (a - b) * x)
            .sum();
        let mut h = canonicalize(&proj, &(offset + shift), &CanonMode::Ambient)?;
        h.mode = Mode::Induced;
        Ok(h)
    }
}

/// Affine hull of a nonempty list of points.
pub fn affine_hull(points: &[Point]) -> Result<Flat> {
    let first = points
        .first()
        .ok_or_else(|| Error::DegenerateInput("affine hull of an empty list".into()))?;
    let dim = first.dim();
    if points.iter().any(|p| p.dim() != dim) {
        return Err(Error::ShapeMismatch("points of different dimensions".into()));
    }
    let mut basis = EchelonBasis::default();
    for p in &points[1..] {
        if basis.rank() == dim {
            break;
        }
        basis.insert(p.sub(first));
    }
    Ok(Flat::from_basis(first.clone(), basis))
}

/// The unique hyperplane of `ambient` through `points`, which must be
/// `dim(ambient)` affinely independent points of the flat.
pub fn hyperplane_through(points: &[Point], ambient: &Flat) -> Result<Hyperplane> {
    let d = ambient.dim();
    if points.len() != d {
        return Err(Error::ShapeMismatch(format!(
            "{} points given for a hyperplane of a {d}-flat",
            points.len()
        )));
    }
    if d == 0 {
        return Err(Error::DegenerateSpan);
    }
    if let Some(p) = points.iter().find(|p| !ambient.contains(p)) {
        return Err(Error::DegenerateInput(format!("point {p} is not in the ambient flat")));
    }
    let dirs: Vec<ExactVector> = ambient
        .directions()
        .iter()
        .map(|v| v.iter().map(|x| BigRational::from_integer(x.clone())).collect())
        .collect();
    let p0 = &points[0];
    let mut entries = Vec::with_capacity((d - 1) * d);
    for p in &points[1..] {
        let diff = p.sub(p0);
        for dir in &dirs {
            entries.push(diff.iter().zip(dir).map(|(a, b)| a * b).sum());
        }
    }
    let m = ExactMatrix::new(d - 1, d, entries)?;
    let ns = m.nullspace();
    if ns.len() != 1 {
        return Err(Error::DegenerateSpan);
    }
    let mut w = vec![ExactScalar::zero(); ambient.ambient_dim()];
    for (lam, dir) in ns[0].iter().zip(&dirs) {
        let lam = BigRational::from_integer(lam.clone());
        for (o, x) in w.iter_mut().zip(dir) {
            *o += &lam * x;
        }
    }
    let offset: ExactScalar = -w.iter().zip(p0.coords()).map(|(a, x)| a * x).sum::<ExactScalar>();
    ambient.hyperplane_class(&w, &offset)
}

/// Indices of the points of `x` lying on `h`.
pub fn incidence(h: &Hyperplane, x: &PointSet) -> Result<Vec<usize>> {
    if h.dim() != x.ambient_dim() {
        return Err(Error::ShapeMismatch(format!(
            "hyperplane in dimension {} vs points in dimension {}",
            h.dim(),
            x.ambient_dim()
        )));
    }
    Ok(x
        .points()
        .iter()
        .enumerate()
        .filter(|(_, p)| h.contains(p))
        .map(|(i, _)| i)
        .collect())
}
