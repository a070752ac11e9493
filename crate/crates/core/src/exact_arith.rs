//! Exact rational scalars, fraction-free linear algebra and permanents.
//!
//! Every quantity in the crate is a `BigRational`; nothing here ever touches
//! floating point. Matrices are small (desk scale), so the routines favour
//! clarity over cache behaviour, but intermediate growth is kept polynomial by
//! working over the integers wherever possible (Bareiss elimination, Ryser
//! over cleared denominators).

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Arbitrary-precision rational, always stored reduced with a positive
/// denominator.
pub type ExactScalar = BigRational;
/// A coordinate vector of exact scalars.
pub type ExactVector = Vec<ExactScalar>;

/// Largest side accepted by [`ExactMatrix::permanent`].
pub const PERMANENT_MAX_SIDE: usize = 20;

pub fn int(v: i64) -> ExactScalar {
    BigRational::from_integer(BigInt::from(v))
}

pub fn frac(p: i64, q: i64) -> ExactScalar {
    BigRational::new(BigInt::from(p), BigInt::from(q))
}

pub fn ints(vs: &[i64]) -> ExactVector {
    vs.iter().map(|&v| int(v)).collect()
}

/// Parses `p`, `-p` or `p/q`.
pub fn parse_scalar(s: &str) -> Result<ExactScalar> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not an exact rational: {s:?}"));
    match s.split_once('/') {
        Some((p, q)) => {
            let p = BigInt::from_str(p.trim()).map_err(|_| bad())?;
            let q = BigInt::from_str(q.trim()).map_err(|_| bad())?;
            if q.is_zero() {
                return Err(Error::Parse(format!("zero denominator in {s:?}")));
            }
            Ok(BigRational::new(p, q))
        }
        None => Ok(BigRational::from_integer(
            BigInt::from_str(s).map_err(|_| bad())?,
        )),
    }
}

/// Always `p/q`, also for integers (`3/1`), so the text formats stay uniform.
pub fn format_scalar(x: &ExactScalar) -> String {
    format!("{}/{}", x.numer(), x.denom())
}

/// Lowest common multiple of all denominators.
pub fn common_denominator(v: &[ExactScalar]) -> BigInt {
    v.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()))
}

/// Scales `v` by the lcm of its denominators and returns the integer vector.
pub fn clear_denominators(v: &[ExactScalar]) -> (Vec<BigInt>, BigInt) {
    let l = common_denominator(v);
    let out = v
        .iter()
        .map(|x| (x * BigRational::from_integer(l.clone())).to_integer())
        .collect();
    (out, l)
}

/// The unique positive multiple of `v` that is a primitive integer vector
/// whose first nonzero entry is positive.
pub fn primitive_normalize(v: &[ExactScalar]) -> Result<Vec<BigInt>> {
    let (ints, _) = clear_denominators(v);
    primitive_normalize_ints(&ints)
}

pub fn primitive_normalize_ints(v: &[BigInt]) -> Result<Vec<BigInt>> {
    let first = v
        .iter()
        .find(|x| !x.is_zero())
        .ok_or_else(|| Error::DegenerateInput("zero vector has no primitive form".into()))?;
    let g = v.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    let g = if first.is_negative() { -g } else { g };
    Ok(v.iter().map(|x| x / &g).collect())
}

/// Reduced row echelon form. Returns the nonzero rows and their pivot columns.
pub fn rref(mut rows: Vec<ExactVector>, cols: usize) -> (Vec<ExactVector>, Vec<usize>) {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows.len() {
            break;
        }
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = rows[r][c].recip();
        for x in rows[r].iter_mut() {
            *x *= &inv;
        }
        for i in 0..rows.len() {
            if i != r && !rows[i][c].is_zero() {
                let f = rows[i][c].clone();
                for j in c..cols {
                    let d = &rows[r][j] * &f;
                    rows[i][j] -= d;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    rows.truncate(r);
    (rows, pivots)
}

/// Incrementally maintained row-reduced basis; used where many vectors are
/// streamed through a small span (affine hulls of large point sets).
#[derive(Debug, Clone, Default)]
pub(crate) struct EchelonBasis {
    rows: Vec<ExactVector>,
    pivots: Vec<usize>,
}

impl EchelonBasis {
    /// Reduces `v` against the basis; returns true if it was independent and
    /// has been added.
    pub(crate) fn insert(&mut self, mut v: ExactVector) -> bool {
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            if !v[p].is_zero() {
                let f = v[p].clone();
                for (x, y) in v.iter_mut().zip(row) {
                    *x -= y * &f;
                }
            }
        }
        let Some(p) = v.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        let inv = v[p].recip();
        for x in v.iter_mut() {
            *x *= &inv;
        }
        for row in self.rows.iter_mut() {
            if !row[p].is_zero() {
                let f = row[p].clone();
                for (x, y) in row.iter_mut().zip(&v) {
                    *x -= y * &f;
                }
            }
        }
        self.rows.push(v);
        self.pivots.push(p);
        true
    }

    pub(crate) fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Rows sorted by pivot column, i.e. a proper RREF.
    pub(crate) fn into_rref(self) -> (Vec<ExactVector>, Vec<usize>) {
        let mut both: Vec<_> = self.pivots.into_iter().zip(self.rows).collect();
        both.sort_by_key(|(p, _)| *p);
        let (pivots, rows) = both.into_iter().unzip();
        (rows, pivots)
    }
}

/// Dimension of the affine hull of `points`.
pub fn affine_rank(points: &[ExactVector]) -> Result<usize> {
    let first = points
        .first()
        .ok_or_else(|| Error::DegenerateInput("affine rank of an empty list".into()))?;
    let dim = first.len();
    if let Some(p) = points.iter().find(|p| p.len() != dim) {
        return Err(Error::ShapeMismatch(format!(
            "point of dimension {} among points of dimension {dim}",
            p.len()
        )));
    }
    let mut basis = EchelonBasis::default();
    for p in &points[1..] {
        basis.insert(p.iter().zip(first).map(|(a, b)| a - b).collect());
        if basis.rank() == dim {
            break;
        }
    }
    Ok(basis.rank())
}

/// Dense row-major matrix of exact scalars.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExactMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<ExactScalar>,
}

impl ExactMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<ExactScalar>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::ShapeMismatch(format!(
                "{} entries for a {rows}x{cols} matrix",
                entries.len()
            )));
        }
        Ok(Self { rows, cols, entries })
    }

    pub fn from_rows(rows: Vec<ExactVector>) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::ShapeMismatch("ragged rows".into()));
        }
        let n = rows.len();
        Self::new(n, cols, rows.into_iter().flatten().collect())
    }

    pub fn identity(n: usize) -> Self {
        let mut entries = vec![ExactScalar::zero(); n * n];
        for i in 0..n {
            entries[i * n + i] = ExactScalar::one();
        }
        Self { rows: n, cols: n, entries }
    }

    /// The matrix `(a_i^(j-1))`.
    pub fn vandermonde(a: &[ExactScalar]) -> Self {
        let n = a.len();
        let mut entries = Vec::with_capacity(n * n);
        for ai in a {
            let mut p = ExactScalar::one();
            for _ in 0..n {
                entries.push(p.clone());
                p *= ai;
            }
        }
        Self { rows: n, cols: n, entries }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &ExactScalar {
        &self.entries[i * self.cols + j]
    }

    pub fn row(&self, i: usize) -> &[ExactScalar] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    fn require_square(&self) -> Result<usize> {
        if self.rows != self.cols {
            return Err(Error::ShapeMismatch(format!(
                "{}x{} matrix is not square",
                self.rows, self.cols
            )));
        }
        Ok(self.rows)
    }

    /// Each row scaled to integers; returns the rows and the product of the
    /// row scale factors.
    fn integer_rows(&self) -> (Vec<Vec<BigInt>>, BigInt) {
        let mut scale = BigInt::one();
        let rows = (0..self.rows)
            .map(|i| {
                let (r, l) = clear_denominators(self.row(i));
                scale *= l;
                r
            })
            .collect();
        (rows, scale)
    }

    pub fn rank(&self) -> usize {
        let rows = (0..self.rows).map(|i| self.row(i).to_vec()).collect();
        rref(rows, self.cols).1.len()
    }

    /// Determinant by Bareiss fraction-free elimination over cleared rows.
    pub fn determinant(&self) -> Result<ExactScalar> {
        let n = self.require_square()?;
        if n == 0 {
            return Ok(ExactScalar::one());
        }
        let (mut a, scale) = self.integer_rows();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if a[k][k].is_zero() {
                match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                    Some(p) => {
                        a.swap(k, p);
                        sign = -sign;
                    }
                    None => return Ok(ExactScalar::zero()),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                    a[i][j] = v / &prev;
                }
            }
            prev = a[k][k].clone();
        }
        Ok(BigRational::new(sign * &a[n - 1][n - 1], scale))
    }

    /// Permanent by Ryser's inclusion-exclusion formula with Gray-code subset
    /// order, so each step updates the row sums by a single column.
    pub fn permanent(&self) -> Result<ExactScalar> {
        let n = self.require_square()?;
        if n > PERMANENT_MAX_SIDE {
            return Err(Error::SizeLimit(format!(
                "permanent of side {n} exceeds the limit {PERMANENT_MAX_SIDE}"
            )));
        }
        if n == 0 {
            return Ok(ExactScalar::one());
        }
        let (a, scale) = self.integer_rows();
        let mut row_sums = vec![BigInt::zero(); n];
        let mut in_set = vec![false; n];
        let mut total = BigInt::zero();
        let mut gray: u64 = 0;
        for k in 1u64..(1u64 << n) {
            let j = k.trailing_zeros() as usize;
            gray ^= 1 << j;
            in_set[j] = !in_set[j];
            for (s, row) in row_sums.iter_mut().zip(&a) {
                if in_set[j] {
                    *s += &row[j];
                } else {
                    *s -= &row[j];
                }
            }
            let prod = row_sums.iter().fold(BigInt::one(), |acc, s| acc * s);
            if gray.count_ones() % 2 == 1 {
                total -= prod;
            } else {
                total += prod;
            }
        }
        if n % 2 == 1 {
            total = -total;
        }
        Ok(BigRational::new(total, scale))
    }

    /// A basis of the right nullspace, each vector primitive over the integers.
    pub fn nullspace(&self) -> Vec<Vec<BigInt>> {
        let rows = (0..self.rows).map(|i| self.row(i).to_vec()).collect();
        let (r, pivots) = rref(rows, self.cols);
        let mut out = Vec::new();
        for free in (0..self.cols).filter(|c| !pivots.contains(c)) {
            let mut v = vec![ExactScalar::zero(); self.cols];
            v[free] = ExactScalar::one();
            for (row, &p) in r.iter().zip(&pivots) {
                v[p] = -row[free].clone();
            }
            out.push(primitive_normalize(&v).expect("free variable is nonzero"));
        }
        out
    }
}

impl fmt::Display for ExactMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(|x| x.to_string()).collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}
