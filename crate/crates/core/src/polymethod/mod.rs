//! Polynomial-method certificates: Vandermonde expansions, signed sums of
//! permutation coefficients, nonvanishing witnesses on permutation orbits,
//! Vandermonde permanents, and the degree bound for polynomials vanishing on
//! all but one grid point.

mod poly;

pub use poly::{Monomial, SparsePoly, MAX_TERMS};

use itertools::Itertools;
use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::exact_arith::{int, ExactMatrix, ExactScalar};
use crate::geometry::{Hyperplane, Point};
use crate::pointsets::{grid, PointSet};

/// Largest `n` for which `n!` permutations are enumerated.
pub const MAX_PERMUTATION_VARS: usize = 8;
pub const MAX_PER_VANDERMONDE: usize = 12;
pub const MAX_PATTERN_POINTS: usize = 1_000_000;

fn check_perm_size(n: usize) -> Result<()> {
    if n > MAX_PERMUTATION_VARS {
        return Err(Error::SizeLimit(format!(
            "{n}! permutations; at most {MAX_PERMUTATION_VARS} variables are supported"
        )));
    }
    Ok(())
}

/// Sign of a permutation given as an image list.
pub fn permutation_sign(perm: &[usize]) -> i64 {
    let inversions = (0..perm.len())
        .flat_map(|i| (i + 1..perm.len()).map(move |j| (i, j)))
        .filter(|&(i, j)| perm[i] > perm[j])
        .count();
    if inversions % 2 == 0 {
        1
    } else {
        -1
    }
}

fn binom2(n: usize) -> usize {
    n * n.saturating_sub(1) / 2
}

/// `V(x) = Σ_π sgn(π) ∏ x_i^{π(i)−1} = ∏_{i<j} (x_j − x_i)`.
pub fn vandermonde_poly(n: usize) -> Result<SparsePoly> {
    check_perm_size(n)?;
    SparsePoly::from_terms(
        n,
        (0..n).permutations(n).map(|perm| {
            let e = perm.iter().map(|&p| p as u16).collect();
            (e, int(permutation_sign(&perm)))
        }),
    )
}

/// Expanded product of the linear forms `normal · x + offset`.
pub fn product_of_linear_forms(nvars: usize, forms: &[(Vec<ExactScalar>, ExactScalar)]) -> Result<SparsePoly> {
    let mut acc = SparsePoly::one(nvars);
    for (normal, offset) in forms {
        if normal.len() != nvars {
            return Err(Error::ShapeMismatch(format!(
                "linear form in {} variables, expected {nvars}",
                normal.len()
            )));
        }
        acc = acc.multiply(&SparsePoly::linear(normal, offset))?;
    }
    Ok(acc)
}

/// The defining linear form of a hyperplane.
pub fn hyperplane_form(h: &Hyperplane) -> (Vec<ExactScalar>, ExactScalar) {
    (
        h.normal().iter().map(|a| ExactScalar::from_integer(a.clone())).collect(),
        ExactScalar::from_integer(h.offset().clone()),
    )
}

pub fn multiply(f: &SparsePoly, g: &SparsePoly) -> Result<SparsePoly> {
    f.multiply(g)
}

pub fn evaluate(f: &SparsePoly, p: &Point) -> Result<ExactScalar> {
    f.evaluate(p.coords())
}

pub fn coefficient(f: &SparsePoly, exps: &[u16]) -> Result<ExactScalar> {
    f.coefficient(exps)
}

/// `Σ_π sgn(π) c_π`, where `c_π` is the coefficient of `∏ x_i^{π(i)−1}`.
/// Requires `deg f = C(n, 2)`.
pub fn signed_perm_sum(f: &SparsePoly) -> Result<ExactScalar> {
    let n = f.nvars();
    let expected = binom2(n);
    match f.degree() {
        Some(d) if d == expected => {}
        other => {
            return Err(Error::DegreeMismatch {
                expected,
                found: other.map_or("zero polynomial".into(), |d| d.to_string()),
            })
        }
    }
    check_perm_size(n)?;
    let mut sum = ExactScalar::zero();
    for perm in (0..n).permutations(n) {
        let e: Vec<u16> = perm.iter().map(|&p| p as u16).collect();
        let c = f.coefficient(&e)?;
        if !c.is_zero() {
            sum += c * int(permutation_sign(&perm));
        }
    }
    Ok(sum)
}

fn check_distinct(alphas: &[ExactScalar]) -> Result<()> {
    for (i, a) in alphas.iter().enumerate() {
        if alphas[..i].contains(a) {
            return Err(Error::DegenerateInput(format!("repeated value {a}")));
        }
    }
    Ok(())
}

/// Scans the orbit `X(α)` in lexicographic order of permutations and
/// returns the first point where `f` is nonzero, with the value there.
///
/// A nonzero signed permutation sum at degree `C(n, 2)` guarantees such a
/// point; failing to find one is reported as a contract violation.
pub fn find_nonvanishing_witness(f: &SparsePoly, alphas: &[ExactScalar]) -> Result<Option<(Point, ExactScalar)>> {
    let n = f.nvars();
    if alphas.len() != n {
        return Err(Error::ShapeMismatch(format!("{} values for {n} variables", alphas.len())));
    }
    check_distinct(alphas)?;
    check_perm_size(n)?;
    for perm in (0..n).permutations(n) {
        let x: Vec<ExactScalar> = perm.iter().map(|&i| alphas[i].clone()).collect();
        let v = f.evaluate(&x)?;
        if !v.is_zero() {
            return Ok(Some((Point::new(x), v)));
        }
    }
    if f.degree() == Some(binom2(n)) && !signed_perm_sum(f)?.is_zero() {
        return Err(Error::ContractViolated(
            "nonzero signed permutation sum but f vanishes on the whole orbit".into(),
        ));
    }
    Ok(None)
}

/// Permanent of `(a_i^{j−1})`.
pub fn per_vandermonde(a: &[ExactScalar]) -> Result<ExactScalar> {
    if a.len() > MAX_PER_VANDERMONDE {
        return Err(Error::SizeLimit(format!(
            "permanent of side {} exceeds {MAX_PER_VANDERMONDE}",
            a.len()
        )));
    }
    ExactMatrix::vandermonde(a).permanent()
}

/// First numbering `b` of `values` (in lexicographic order of index
/// permutations) with the products `a_i b_i` pairwise distinct.
///
/// A nonzero Vandermonde permanent of `a` guarantees one exists.
pub fn distinct_products_numbering(a: &[ExactScalar], values: &[ExactScalar]) -> Result<Option<Vec<ExactScalar>>> {
    let n = a.len();
    if values.len() != n {
        return Err(Error::ShapeMismatch(format!("{} values for {n} coefficients", values.len())));
    }
    check_distinct(values)?;
    check_perm_size(n)?;
    for perm in (0..n).permutations(n) {
        let b: Vec<ExactScalar> = perm.iter().map(|&i| values[i].clone()).collect();
        let products: Vec<ExactScalar> = a.iter().zip(&b).map(|(x, y)| x * y).collect();
        if products.iter().all_unique() {
            return Ok(Some(b));
        }
    }
    if !per_vandermonde(a)?.is_zero() {
        return Err(Error::ContractViolated(
            "nonzero Vandermonde permanent but no numbering with distinct products".into(),
        ));
    }
    Ok(None)
}

/// Indices of the points of `x` where `f` does not vanish.
pub fn vanishing_pattern(f: &SparsePoly, x: &PointSet) -> Result<Vec<usize>> {
    if x.ambient_dim() != f.nvars() {
        return Err(Error::ShapeMismatch(format!(
            "points in dimension {} for a polynomial in {} variables",
            x.ambient_dim(),
            f.nvars()
        )));
    }
    if x.len() > MAX_PATTERN_POINTS {
        return Err(Error::SizeLimit(format!("{} points exceed {MAX_PATTERN_POINTS}", x.len())));
    }
    let flags: Vec<bool> = x
        .points()
        .par_iter()
        .map(|p| f.evaluate(p.coords()).map(|v| !v.is_zero()))
        .collect::<Result<_>>()?;
    Ok(flags.iter().enumerate().filter(|(_, &nz)| nz).map(|(i, _)| i).collect())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlonFurediReport {
    pub grid_size: usize,
    pub nonvanishing: Vec<Point>,
    /// True when exactly one grid point survives.
    pub applicable: bool,
    pub degree: Option<usize>,
    pub bound: usize,
    /// `degree − bound`, when applicable.
    pub margin: Option<i64>,
}

/// Checks the degree bound `deg f ≥ Σ (|S_i| − 1)` for polynomials that
/// vanish on all of `S_1 × … × S_n` but one point.
pub fn alon_furedi_check(f: &SparsePoly, factors: &[Vec<ExactScalar>]) -> Result<AlonFurediReport> {
    if factors.len() != f.nvars() {
        return Err(Error::ShapeMismatch(format!(
            "{} factors for a polynomial in {} variables",
            factors.len(),
            f.nvars()
        )));
    }
    let g = grid(factors)?;
    let survivors = vanishing_pattern(f, &g)?;
    let bound: usize = factors.iter().map(|s| s.len().saturating_sub(1)).sum();
    let degree = f.degree();
    let applicable = survivors.len() == 1;
    let margin = applicable.then(|| degree.unwrap_or(0) as i64 - bound as i64);
    if margin.is_some_and(|m| m < 0) {
        return Err(Error::ContractViolated(format!(
            "polynomial of degree {} vanishes on all but one grid point, below the bound {bound}",
            degree.unwrap_or(0)
        )));
    }
    Ok(AlonFurediReport {
        grid_size: g.len(),
        nonvanishing: survivors.iter().map(|&i| g.points()[i].clone()).collect(),
        applicable,
        degree,
        bound,
        margin,
    })
}

/// `∏_i ∏_{s ∈ S_i, s ≠ max S_i} (x_i − s)`: vanishes on the grid except at
/// the corner of maxima.
pub fn axis_product(factors: &[Vec<ExactScalar>]) -> Result<SparsePoly> {
    let n = factors.len();
    let mut forms = Vec::new();
    for (i, s) in factors.iter().enumerate() {
        let Some(top) = s.iter().max() else { continue };
        for v in s.iter().filter(|v| *v != top) {
            let mut normal = vec![ExactScalar::zero(); n];
            normal[i] = ExactScalar::one();
            forms.push((normal, -v.clone()));
        }
    }
    product_of_linear_forms(n, &forms)
}

#[cfg(test)]
mod tests;
