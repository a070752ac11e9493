//! Integer coordinates on the affine hull of a point set.
//!
//! Projecting the hull onto its pivot coordinates is an affine bijection, and
//! after scaling by the common denominator every point becomes an integer
//! vector of length `d = dim(hull)`. All candidate enumeration and incidence
//! tests run in these coordinates with machine integers; exact
//! [`Hyperplane`]s are produced only for output.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::exact_arith::{common_denominator, ExactScalar};
use crate::geometry::{Flat, Hyperplane};
use crate::pointsets::PointSet;

#[derive(Debug, Clone)]
pub(crate) struct LocalFrame {
    pub(crate) d: usize,
    pub(crate) n: usize,
    coords: Vec<i64>,
    scale: BigInt,
    hull: Flat,
}

impl LocalFrame {
    pub(crate) fn new(x: &PointSet) -> Result<Self> {
        let hull = x.hull().clone();
        let pivots = hull.pivots().to_vec();
        let d = pivots.len();
        let all: Vec<ExactScalar> = x
            .points()
            .iter()
            .flat_map(|p| pivots.iter().map(move |&k| p.coords()[k].clone()))
            .collect();
        let scale = common_denominator(&all);
        let s = BigRational::from_integer(scale.clone());
        let coords = all
            .iter()
            .map(|c| {
                (c * &s)
                    .to_integer()
                    .to_i64()
                    .filter(|v| v.abs() < 1 << 40)
                    .ok_or_else(|| Error::Overflow(format!("coordinate {c} too large")))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { d, n: x.len(), coords, scale, hull })
    }

    pub(crate) fn point(&self, i: usize) -> &[i64] {
        &self.coords[i * self.d..(i + 1) * self.d]
    }

    /// Value of the local form `a · y + b` at point `i`.
    #[inline]
    pub(crate) fn eval(&self, form: &[i64], i: usize) -> i128 {
        let p = self.point(i);
        let mut acc = form[self.d] as i128;
        for k in 0..self.d {
            acc += form[k] as i128 * p[k] as i128;
        }
        acc
    }

    pub(crate) fn on(&self, form: &[i64], i: usize) -> bool {
        self.eval(form, i) == 0
    }

    /// Primitive form `(a, b)` of the hyperplane through `idx` (which must
    /// have `d` entries), or `None` when the points are affinely dependent.
    pub(crate) fn spanned_form(&self, idx: &[usize]) -> Result<Option<Vec<i64>>> {
        let d = self.d;
        let p0 = self.point(idx[0]);
        let diffs: Vec<Vec<i128>> = idx[1..]
            .iter()
            .map(|&i| self.point(i).iter().zip(p0).map(|(a, b)| (*a - *b) as i128).collect())
            .collect();
        // generalized cross product: a_j = (-1)^j det(diffs without column j)
        let mut a = vec![0i128; d];
        let mut minor = vec![0i128; (d - 1) * (d - 1)];
        for j in 0..d {
            for (r, row) in diffs.iter().enumerate() {
                let mut c = 0;
                for (k, &v) in row.iter().enumerate() {
                    if k != j {
                        minor[r * (d - 1) + c] = v;
                        c += 1;
                    }
                }
            }
            let det = det_i128(&mut minor, d - 1)?;
            a[j] = if j % 2 == 0 { det } else { -det };
        }
        if a.iter().all(|&v| v == 0) {
            return Ok(None);
        }
        let mut b: i128 = 0;
        for (x, y) in a.iter().zip(p0) {
            b = b
                .checked_sub(x.checked_mul(*y as i128).ok_or_else(overflow)?)
                .ok_or_else(overflow)?;
        }
        let mut form = a;
        form.push(b);
        Ok(Some(normalize_i128(&form)?))
    }

    /// Exact canonical hyperplane of the hull for a local form.
    pub(crate) fn to_hyperplane(&self, form: &[i64]) -> Result<Hyperplane> {
        let dim = self.hull.ambient_dim();
        let mut normal = vec![ExactScalar::zero(); dim];
        for (k, &piv) in self.hull.pivots().iter().enumerate() {
            normal[piv] = BigRational::from_integer(&self.scale * BigInt::from(form[k]));
        }
        let offset = BigRational::from_integer(BigInt::from(form[self.d]));
        self.hull.hyperplane_class(&normal, &offset)
    }

    /// Local form of an exact hyperplane; `None` if it contains the hull or
    /// misses it entirely.
    pub(crate) fn local_form(&self, h: &Hyperplane) -> Result<Option<Vec<i64>>> {
        if h.dim() != self.hull.ambient_dim() {
            return Err(Error::ShapeMismatch("hyperplane of wrong dimension".into()));
        }
        let w: Vec<BigRational> =
            h.normal().iter().map(|x| BigRational::from_integer(x.clone())).collect();
        let base = self.hull.basepoint().coords();
        let dot = |u: &[BigRational], v: &[BigRational]| -> BigRational {
            u.iter().zip(v).map(|(x, y)| x * y).sum()
        };
        // x = base + Σ_j (y_j / s − base_{P_j}) r_j over the reduced rows r_j
        let rows = self.hull.reduced_rows();
        let s = BigRational::from_integer(self.scale.clone());
        let mut form = Vec::with_capacity(self.d + 1);
        let mut b = BigRational::from_integer(h.offset().clone()) + dot(&w, base);
        for (row, &piv) in rows.iter().zip(self.hull.pivots()) {
            let wr = dot(&w, row);
            b -= &base[piv] * &wr;
            form.push(wr / &s);
        }
        if form.iter().all(Zero::is_zero) {
            return Ok(None);
        }
        form.push(b);
        let (ints, _) = crate::exact_arith::clear_denominators(&form);
        let prim = crate::exact_arith::primitive_normalize_ints(&ints)?;
        prim.iter()
            .map(|v| v.to_i64().ok_or_else(overflow))
            .collect::<Result<Vec<_>>>()
            .map(Some)
    }
}

fn overflow() -> Error {
    Error::Overflow("local hyperplane coefficients".into())
}

/// Determinant of a small integer matrix by Bareiss elimination; `m` is
/// clobbered.
fn det_i128(m: &mut [i128], n: usize) -> Result<i128> {
    if n == 0 {
        return Ok(1);
    }
    let mut sign = 1i128;
    let mut prev = 1i128;
    for k in 0..n - 1 {
        if m[k * n + k] == 0 {
            match (k + 1..n).find(|&i| m[i * n + k] != 0) {
                Some(p) => {
                    for j in 0..n {
                        m.swap(k * n + j, p * n + j);
                    }
                    sign = -sign;
                }
                None => return Ok(0),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = m[i * n + j]
                    .checked_mul(m[k * n + k])
                    .and_then(|x| x.checked_sub(m[i * n + k].checked_mul(m[k * n + j])?))
                    .ok_or_else(overflow)?;
                m[i * n + j] = v / prev;
            }
        }
        prev = m[k * n + k];
    }
    Ok(sign * m[n * n - 1])
}

fn normalize_i128(v: &[i128]) -> Result<Vec<i64>> {
    let g = v.iter().fold(0i128, |acc, &x| acc.gcd(&x));
    let first = v.iter().copied().find(|&x| x != 0).unwrap_or(1);
    let g = if first < 0 { -g } else { g };
    v.iter().map(|&x| i64::try_from(x / g).map_err(|_| overflow())).collect()
}
