use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::exact_arith::{parse_scalar, ExactScalar};

/// Largest number of terms a product may have.
pub const MAX_TERMS: usize = 1_000_000;

/// Exponent vector, ordered graded-lexicographically: by total degree, then
/// lexicographically with `x_1` most significant.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Monomial(Vec<u16>);

impl Monomial {
    pub fn new(exps: Vec<u16>) -> Self {
        Self(exps)
    }

    pub fn one(nvars: usize) -> Self {
        Self(vec![0; nvars])
    }

    pub fn exponents(&self) -> &[u16] {
        &self.0
    }

    pub fn degree(&self) -> usize {
        self.0.iter().map(|&e| e as usize).sum()
    }

    fn mul(&self, other: &Monomial) -> Result<Monomial> {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| a.checked_add(*b).ok_or_else(|| Error::Overflow("exponent".into())))
            .collect::<Result<_>>()
            .map(Monomial)
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree().cmp(&other.degree()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Sparse polynomial over ℚ in a fixed number of variables. Zero
/// coefficients are never stored.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SparsePoly {
    nvars: usize,
    terms: BTreeMap<Monomial, ExactScalar>,
}

impl SparsePoly {
    pub fn zero(nvars: usize) -> Self {
        Self { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: ExactScalar) -> Self {
        let mut p = Self::zero(nvars);
        p.add_term(Monomial::one(nvars), c);
        p
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, ExactScalar::one())
    }

    /// The variable `x_{i+1}`.
    pub fn var(nvars: usize, i: usize) -> Result<Self> {
        if i >= nvars {
            return Err(Error::ShapeMismatch(format!("variable {i} of {nvars}")));
        }
        let mut e = vec![0; nvars];
        e[i] = 1;
        let mut p = Self::zero(nvars);
        p.add_term(Monomial(e), ExactScalar::one());
        Ok(p)
    }

    /// `normal · x + offset`.
    pub fn linear(normal: &[ExactScalar], offset: &ExactScalar) -> Self {
        let n = normal.len();
        let mut p = Self::constant(n, offset.clone());
        for (i, a) in normal.iter().enumerate() {
            let mut e = vec![0; n];
            e[i] = 1;
            p.add_term(Monomial(e), a.clone());
        }
        p
    }

    pub fn from_terms(nvars: usize, terms: impl IntoIterator<Item = (Vec<u16>, ExactScalar)>) -> Result<Self> {
        let mut p = Self::zero(nvars);
        for (e, c) in terms {
            if e.len() != nvars {
                return Err(Error::ShapeMismatch(format!(
                    "exponent vector of length {} for {nvars} variables",
                    e.len()
                )));
            }
            p.add_term(Monomial(e), c);
        }
        Ok(p)
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in graded-lex order.
    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &ExactScalar)> {
        self.terms.iter()
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.terms.keys().next_back().map(Monomial::degree)
    }

    pub(crate) fn add_term(&mut self, m: Monomial, c: ExactScalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    fn check_vars(&self, other: usize) -> Result<()> {
        if self.nvars != other {
            return Err(Error::ShapeMismatch(format!(
                "polynomial in {} variables used with {other}",
                self.nvars
            )));
        }
        Ok(())
    }

    pub fn coefficient(&self, exps: &[u16]) -> Result<ExactScalar> {
        self.check_vars(exps.len())?;
        Ok(self.terms.get(&Monomial(exps.to_vec())).cloned().unwrap_or_else(ExactScalar::zero))
    }

    pub fn add(&self, other: &SparsePoly) -> Result<SparsePoly> {
        self.check_vars(other.nvars)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn scale(&self, k: &ExactScalar) -> SparsePoly {
        let mut out = Self::zero(self.nvars);
        for (m, c) in &self.terms {
            out.add_term(m.clone(), c * k);
        }
        out
    }

    pub fn multiply(&self, other: &SparsePoly) -> Result<SparsePoly> {
        self.check_vars(other.nvars)?;
        let mut out = Self::zero(self.nvars);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                out.add_term(ma.mul(mb)?, ca * cb);
            }
            if out.len() > MAX_TERMS {
                return Err(Error::SizeLimit(format!("product exceeds {MAX_TERMS} terms")));
            }
        }
        Ok(out)
    }

    pub fn pow(&self, k: u32) -> Result<SparsePoly> {
        let mut out = Self::one(self.nvars);
        for _ in 0..k {
            out = out.multiply(self)?;
        }
        Ok(out)
    }

    /// `f(a_1 x_1, …, a_n x_n)`.
    pub fn scale_variables(&self, a: &[ExactScalar]) -> Result<SparsePoly> {
        self.check_vars(a.len())?;
        let mut out = Self::zero(self.nvars);
        for (m, c) in &self.terms {
            let mut k = c.clone();
            for (ai, &e) in a.iter().zip(&m.0) {
                for _ in 0..e {
                    k *= ai;
                }
            }
            out.add_term(m.clone(), k);
        }
        Ok(out)
    }

    pub fn evaluate(&self, x: &[ExactScalar]) -> Result<ExactScalar> {
        self.check_vars(x.len())?;
        // powers are shared across terms
        let maxdeg: Vec<usize> = (0..self.nvars)
            .map(|i| self.terms.keys().map(|m| m.0[i] as usize).max().unwrap_or(0))
            .collect();
        let powers: Vec<Vec<ExactScalar>> = x
            .iter()
            .zip(&maxdeg)
            .map(|(xi, &d)| {
                let mut p = vec![ExactScalar::one()];
                for k in 0..d {
                    let next = &p[k] * xi;
                    p.push(next);
                }
                p
            })
            .collect();
        let mut acc = ExactScalar::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (i, &e) in m.0.iter().enumerate() {
                if e > 0 {
                    t *= &powers[i][e as usize];
                }
            }
            acc += t;
        }
        Ok(acc)
    }

    /// `# nvars=n`, then `coeff e1 … en` per term in graded-lex order.
    pub fn to_text(&self) -> String {
        let mut s = format!("# nvars={}\n", self.nvars);
        for (m, c) in &self.terms {
            s.push_str(&format_coeff(c));
            for e in &m.0 {
                s.push(' ');
                s.push_str(&e.to_string());
            }
            s.push('\n');
        }
        s
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty());
        let header = lines.next().ok_or_else(|| Error::Parse("empty polynomial file".into()))?;
        let nvars: usize = header
            .strip_prefix("# nvars=")
            .and_then(|n| n.trim().parse().ok())
            .ok_or_else(|| Error::Parse(format!("bad polynomial header {header:?}")))?;
        let mut p = Self::zero(nvars);
        for line in lines {
            if line.starts_with('#') {
                continue;
            }
            let mut parts = line.split_whitespace();
            let c = parse_scalar(parts.next().expect("nonempty line"))?;
            let e: Vec<u16> = parts
                .map(|t| t.parse().map_err(|_| Error::Parse(format!("bad exponent {t:?}"))))
                .collect::<Result<_>>()?;
            if e.len() != nvars {
                return Err(Error::Parse(format!("term {line:?} does not have {nvars} exponents")));
            }
            p.add_term(Monomial(e), c);
        }
        Ok(p)
    }
}

fn format_coeff(c: &ExactScalar) -> String {
    if c.denom() == &BigInt::one() {
        c.numer().to_string()
    } else {
        format!("{}/{}", c.numer(), c.denom())
    }
}

impl fmt::Display for SparsePoly {
    /// Highest terms first, e.g. `x2*x3^2 - x1^2*x3 + 2`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (m, c)) in self.terms.iter().rev().enumerate() {
            let vars: Vec<String> = m
                .0
                .iter()
                .enumerate()
                .filter(|(_, &e)| e > 0)
                .map(|(i, &e)| if e == 1 { format!("x{}", i + 1) } else { format!("x{}^{e}", i + 1) })
                .collect();
            let mag = c.abs();
            let sign = if c.is_negative() { "-" } else { "+" };
            if k == 0 {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            if vars.is_empty() {
                write!(f, "{}", format_coeff(&mag))?;
            } else if mag.is_one() {
                write!(f, "{}", vars.join("*"))?;
            } else {
                write!(f, "{}*{}", format_coeff(&mag), vars.join("*"))?;
            }
        }
        Ok(())
    }
}
