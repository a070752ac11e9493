//! Fourier–Motzkin elimination for homogeneous strict systems `a_k · c > 0`.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::exact_arith::{clear_denominators, int, ExactScalar, ExactVector};

/// Upper bound on the number of rows any elimination stage may hold.
const MAX_STAGE_ROWS: usize = 250_000;

type Row = Vec<BigInt>;

/// Divides by the positive gcd; the direction of a strict inequality is kept.
fn reduce(mut r: Row) -> Row {
    let g = r.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if !g.is_zero() && !g.is_one() {
        for x in r.iter_mut() {
            *x /= &g;
        }
    }
    r
}

/// Decides whether some `c` satisfies `row · c > 0` for every row, and if so
/// returns one such `c`.
///
/// Variables are eliminated one at a time, always picking the variable that
/// minimises the number of generated combinations. Once a stage contains the
/// zero row the system implies `0 > 0` and is infeasible; it is feasible iff
/// every variable can be eliminated without that happening. The witness is
/// rebuilt by back-substitution, taking the midpoint of each open interval.
pub fn strict_feasible(rows: &[ExactVector]) -> Result<Option<ExactVector>> {
    let dim = match rows.first() {
        Some(r) => r.len(),
        None => return Ok(Some(Vec::new())),
    };
    if rows.iter().any(|r| r.len() != dim) {
        return Err(Error::ShapeMismatch("inequalities of different lengths".into()));
    }
    let mut system: BTreeSet<Row> = rows.iter().map(|r| reduce(clear_denominators(r).0)).collect();
    let mut stages: Vec<(usize, Vec<Row>)> = Vec::with_capacity(dim);
    let mut remaining: Vec<usize> = (0..dim).collect();

    loop {
        if system.iter().any(|r| r.iter().all(Zero::is_zero)) {
            return Ok(None);
        }
        if remaining.is_empty() || system.is_empty() {
            break;
        }
        let (pick, _) = remaining
            .iter()
            .enumerate()
            .map(|(slot, &v)| {
                let pos = system.iter().filter(|r| r[v].is_positive()).count();
                let neg = system.iter().filter(|r| r[v].is_negative()).count();
                (slot, pos * neg)
            })
            .min_by_key(|&(slot, cost)| (cost, slot))
            .expect("remaining is nonempty");
        let var = remaining.remove(pick);

        let rows: Vec<Row> = system.into_iter().collect();
        let mut next = BTreeSet::new();
        let (pos, rest): (Vec<&Row>, Vec<&Row>) = rows.iter().partition(|r| r[var].is_positive());
        let (neg, zero): (Vec<&Row>, Vec<&Row>) = rest.into_iter().partition(|r| r[var].is_negative());
        for r in zero {
            next.insert(r.clone());
        }
        for p in &pos {
            for q in &neg {
                let a = &p[var];
                let b = -&q[var];
                let combined: Row = p.iter().zip(q.iter()).map(|(x, y)| x * &b + y * a).collect();
                next.insert(reduce(combined));
                if next.len() > MAX_STAGE_ROWS {
                    return Err(Error::SizeLimit(format!(
                        "Fourier-Motzkin stage exceeds {MAX_STAGE_ROWS} rows"
                    )));
                }
            }
        }
        stages.push((var, rows));
        system = next;
    }

    let mut c: ExactVector = vec![ExactScalar::zero(); dim];
    for (var, rows) in stages.iter().rev() {
        let mut lo: Option<ExactScalar> = None;
        let mut hi: Option<ExactScalar> = None;
        for r in rows {
            let coeff = &r[*var];
            if coeff.is_zero() {
                continue;
            }
            let rest: ExactScalar = r
                .iter()
                .zip(&c)
                .enumerate()
                .filter(|(j, _)| j != var)
                .map(|(_, (a, x))| BigRational::from_integer(a.clone()) * x)
                .sum();
            let bound = -rest / BigRational::from_integer(coeff.clone());
            if coeff.is_positive() {
                if lo.as_ref().map_or(true, |l| &bound > l) {
                    lo = Some(bound);
                }
            } else if hi.as_ref().map_or(true, |h| &bound < h) {
                hi = Some(bound);
            }
        }
        c[*var] = match (lo, hi) {
            (Some(l), Some(h)) => (l + h) / int(2),
            (Some(l), None) => l + int(1),
            (None, Some(h)) => h - int(1),
            (None, None) => ExactScalar::zero(),
        };
    }

    for r in rows {
        let v: ExactScalar = r.iter().zip(&c).map(|(a, x)| a * x).sum();
        if !v.is_positive() {
            return Err(Error::ContractViolated(
                "Fourier-Motzkin witness fails an inequality".into(),
            ));
        }
    }
    Ok(Some(c))
}
