//! Enumeration of spanned hyperplanes and their traces.
//!
//! Every hyperplane of the hull spanned by points of `X` is visited exactly
//! once: a `d`-subset is accepted only if it is the lexicographically first
//! affinely independent `d`-subset of its own trace (the greedy basis). That
//! test only looks at points with index below the subset's last element, so
//! no hash set of seen hyperplanes is needed.

use std::time::Instant;

use rayon::prelude::*;

use super::bits::{self, words_for, BitSet};
use super::frame::LocalFrame;
use crate::error::{Error, Result};
use crate::exact_arith::{rref, ExactMatrix, ExactScalar, ExactVector};
use crate::geometry::{Hyperplane, Mode, Point};
use crate::pointsets::PointSet;

use num_rational::BigRational;
use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};

pub const DEFAULT_BUDGET_SUBSETS: u64 = 20_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EnumerateOptions {
    /// Maximum number of `d`-subsets the scan may visit.
    pub budget_subsets: u64,
    pub deadline: Option<Instant>,
}

impl Default for EnumerateOptions {
    fn default() -> Self {
        Self { budget_subsets: DEFAULT_BUDGET_SUBSETS, deadline: None }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CandidateStats {
    pub subsets_scanned: u64,
    pub degenerate_subsets: u64,
    /// Distinct spanned hyperplanes, including those through the forbidden point.
    pub spanned: usize,
    pub through_forbidden: usize,
    pub fallback_added: usize,
    pub dominated_removed: usize,
    pub from_cache: bool,
}

/// Candidate hyperplanes for a cover problem on one point set, each with its
/// exact trace.
#[derive(Debug, Clone)]
pub struct IncidenceStructure<'a> {
    points: &'a PointSet,
    pub(crate) frame: LocalFrame,
    forms: Vec<i64>,
    traces: Vec<u64>,
    words: usize,
    forbidden: Option<usize>,
    stats: CandidateStats,
}

impl<'a> IncidenceStructure<'a> {
    pub fn len(&self) -> usize {
        self.traces.len() / self.words.max(1)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn points(&self) -> &'a PointSet {
        self.points
    }

    pub fn forbidden(&self) -> Option<usize> {
        self.forbidden
    }

    pub fn stats(&self) -> &CandidateStats {
        &self.stats
    }

    pub fn fallback_fired(&self) -> bool {
        self.stats.fallback_added > 0
    }

    pub fn mode(&self) -> Mode {
        if self.points.hull().is_full() {
            Mode::Ambient
        } else {
            Mode::Induced
        }
    }

    pub(crate) fn words(&self) -> usize {
        self.words
    }

    pub(crate) fn trace_words(&self, i: usize) -> &[u64] {
        &self.traces[i * self.words..(i + 1) * self.words]
    }

    pub(crate) fn form(&self, i: usize) -> &[i64] {
        let w = self.frame.d + 1;
        &self.forms[i * w..(i + 1) * w]
    }

    pub fn trace(&self, i: usize) -> BitSet {
        BitSet::from_words(self.trace_words(i).to_vec(), self.points.len())
    }

    pub fn trace_indices(&self, i: usize) -> Vec<usize> {
        bits::iter_ones(self.trace_words(i)).collect()
    }

    pub fn hyperplane(&self, i: usize) -> Hyperplane {
        self.frame
            .to_hyperplane(self.form(i))
            .expect("local forms always map to hyperplanes of the hull")
    }

    pub fn hyperplanes(&self) -> Vec<Hyperplane> {
        (0..self.len()).map(|i| self.hyperplane(i)).collect()
    }

    /// Index of a candidate equal to `h` (as a hyperplane of the hull).
    pub fn find(&self, h: &Hyperplane) -> Option<usize> {
        let form = self.frame.local_form(h).ok()??;
        (0..self.len()).find(|&i| self.form(i) == form.as_slice())
    }

    /// Candidates avoiding point `v`, with the completeness fallback rerun
    /// for that forbidden point.
    pub fn without_point(&self, v: usize) -> Result<IncidenceStructure<'a>> {
        let mut out = IncidenceStructure {
            points: self.points,
            frame: self.frame.clone(),
            forms: Vec::new(),
            traces: Vec::new(),
            words: self.words,
            forbidden: Some(v),
            stats: CandidateStats { fallback_added: 0, dominated_removed: 0, ..self.stats.clone() },
        };
        let mut removed = 0;
        for i in 0..self.len() {
            if bits::test(self.trace_words(i), v) {
                removed += 1;
            } else {
                out.forms.extend_from_slice(self.form(i));
                out.traces.extend_from_slice(self.trace_words(i));
            }
        }
        out.stats.through_forbidden = removed;
        out.complete_with_fallback()?;
        Ok(out)
    }

    fn push(&mut self, form: &[i64], trace: &[u64]) {
        self.forms.extend_from_slice(form);
        self.traces.extend_from_slice(trace);
    }

    fn sort_canonical(&mut self) {
        let w = self.frame.d + 1;
        let mut order: Vec<usize> = (0..self.len()).collect();
        order.sort_by(|&a, &b| self.forms[a * w..(a + 1) * w].cmp(&self.forms[b * w..(b + 1) * w]));
        let mut forms = Vec::with_capacity(self.forms.len());
        let mut traces = Vec::with_capacity(self.traces.len());
        for i in order {
            forms.extend_from_slice(self.form(i));
            traces.extend_from_slice(self.trace_words(i));
        }
        self.forms = forms;
        self.traces = traces;
    }

    /// Adds traces of lower-dimensional flats for point pairs that no
    /// candidate covers together, then drops dominated traces.
    fn complete_with_fallback(&mut self) -> Result<()> {
        let n = self.points.len();
        let w = self.words;
        let mut partners = vec![0u64; n * w];
        for c in 0..self.len() {
            let t = self.trace_words(c).to_vec();
            for p in bits::iter_ones(&t) {
                for (dst, src) in partners[p * w..(p + 1) * w].iter_mut().zip(&t) {
                    *dst |= src;
                }
            }
        }
        let first_new = self.len();
        for p in 0..n {
            if Some(p) == self.forbidden {
                continue;
            }
            for q in p + 1..n {
                if Some(q) == self.forbidden || bits::test(&partners[p * w..(p + 1) * w], q) {
                    continue;
                }
                let Some(form) = grow_flat(&self.frame, self.forbidden, p, q)? else {
                    continue;
                };
                let trace = trace_of(&self.frame, &form, w);
                for a in bits::iter_ones(&trace) {
                    for (dst, src) in partners[a * w..(a + 1) * w].iter_mut().zip(&trace) {
                        *dst |= src;
                    }
                }
                self.push(&form, &trace);
                self.stats.fallback_added += 1;
            }
        }
        if self.len() > first_new {
            self.remove_dominated(first_new);
            self.sort_canonical();
        }
        Ok(())
    }

    /// Distinct spanned traces never contain one another (a trace spans its
    /// hyperplane), so only traces from `first_new` on can be dominated.
    fn remove_dominated(&mut self, first_new: usize) {
        let m = self.len();
        let mut keep = vec![true; m];
        for i in first_new..m {
            let ti = self.trace_words(i);
            let dominated = (0..m).any(|j| {
                j != i
                    && keep[j]
                    && bits::is_subset(ti, self.trace_words(j))
                    && (ti != self.trace_words(j) || j < i)
            });
            if dominated {
                keep[i] = false;
            }
        }
        let removed = keep.iter().filter(|k| !**k).count();
        if removed > 0 {
            let w = self.frame.d + 1;
            let mut forms = Vec::new();
            let mut traces = Vec::new();
            for (i, _) in keep.iter().enumerate().filter(|(_, k)| **k) {
                forms.extend_from_slice(&self.forms[i * w..(i + 1) * w]);
                traces.extend_from_slice(self.trace_words(i));
            }
            self.forms = forms;
            self.traces = traces;
            self.stats.dominated_removed += removed;
        }
    }

    pub(crate) fn from_parts(
        points: &'a PointSet,
        frame: LocalFrame,
        entries: Vec<(Vec<i64>, Vec<u64>)>,
        forbidden: Option<usize>,
        stats: CandidateStats,
    ) -> Self {
        let words = words_for(points.len());
        let mut out = Self {
            points,
            frame,
            forms: Vec::new(),
            traces: Vec::new(),
            words,
            forbidden,
            stats,
        };
        for (f, t) in entries {
            out.push(&f, &t);
        }
        out
    }
}

pub(crate) fn trace_of(frame: &LocalFrame, form: &[i64], words: usize) -> Vec<u64> {
    let mut t = vec![0u64; words];
    for i in 0..frame.n {
        if frame.on(form, i) {
            bits::set(&mut t, i);
        }
    }
    t
}

fn binomial(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}

/// Rank of a few small integer vectors, by fraction-free elimination.
fn rank_i128(mut rows: Vec<Vec<i128>>) -> usize {
    let cols = rows.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows.len()).find(|&i| rows[i][c] != 0) else {
            continue;
        };
        rows.swap(r, p);
        for i in r + 1..rows.len() {
            if rows[i][c] != 0 {
                let (a, b) = (rows[r][c], rows[i][c]);
                let g = num_integer::gcd(a, b);
                let (a, b) = (a / g, b / g);
                for j in c..cols {
                    rows[i][j] = rows[i][j] * a - rows[r][j] * b;
                }
            }
        }
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    r
}

#[derive(Debug, Default, Clone)]
pub(crate) struct ScanCounts {
    pub(crate) scanned: u64,
    pub(crate) degenerate: u64,
    pub(crate) spanned: usize,
    pub(crate) through_forbidden: usize,
}

impl ScanCounts {
    fn merge(mut self, o: ScanCounts) -> Self {
        self.scanned += o.scanned;
        self.degenerate += o.degenerate;
        self.spanned += o.spanned;
        self.through_forbidden += o.through_forbidden;
        self
    }
}

/// Visits every spanned hyperplane whose greedy basis starts at `first`.
/// `sink` receives the local form and the trace of each hyperplane that
/// avoids `forbidden`.
pub(crate) fn scan_first(
    frame: &LocalFrame,
    first: usize,
    forbidden: Option<usize>,
    counts: &mut ScanCounts,
    sink: &mut dyn FnMut(&[i64], &[u64]),
) -> Result<()> {
    let d = frame.d;
    let n = frame.n;
    let words = words_for(n);
    if first + d > n {
        return Ok(());
    }
    let mut idx: Vec<usize> = (first..first + d).collect();
    loop {
        counts.scanned += 1;
        match frame.spanned_form(&idx)? {
            None => counts.degenerate += 1,
            Some(form) => {
                if is_greedy_basis(frame, &form, &idx) {
                    counts.spanned += 1;
                    if forbidden.is_some_and(|v| frame.on(&form, v)) {
                        counts.through_forbidden += 1;
                    } else {
                        let trace = trace_of(frame, &form, words);
                        sink(&form, &trace);
                    }
                }
            }
        }
        // next combination with idx[0] fixed
        let mut k = d;
        loop {
            if k == 1 {
                return Ok(());
            }
            k -= 1;
            if idx[k] < n - (d - k) {
                idx[k] += 1;
                for j in k + 1..d {
                    idx[j] = idx[j - 1] + 1;
                }
                break;
            }
        }
    }
}

fn is_greedy_basis(frame: &LocalFrame, form: &[i64], idx: &[usize]) -> bool {
    let last = *idx.last().expect("d >= 1");
    let mut below = 0;
    for q in 0..last {
        if below < idx.len() && idx[below] == q {
            below += 1;
            continue;
        }
        if !frame.on(form, q) {
            continue;
        }
        if below < 2 {
            return false;
        }
        // q must lie in the affine hull of the basis points before it
        let p0 = frame.point(idx[0]);
        let mut rows: Vec<Vec<i128>> = idx[1..below]
            .iter()
            .map(|&i| frame.point(i).iter().zip(p0).map(|(a, b)| (*a - *b) as i128).collect())
            .collect();
        rows.push(frame.point(q).iter().zip(p0).map(|(a, b)| (*a - *b) as i128).collect());
        if rank_i128(rows) == below {
            return false;
        }
    }
    true
}

fn check_budget(n: usize, d: usize, opts: &EnumerateOptions) -> Result<()> {
    let need = binomial(n as u64, d as u64);
    if need > opts.budget_subsets as u128 {
        return Err(Error::SizeLimit(format!(
            "enumerating C({n},{d}) = {need} subsets exceeds the budget of {}; rerun with a budget of at least {need}",
            opts.budget_subsets
        )));
    }
    Ok(())
}

fn check_deadline(deadline: Option<Instant>) -> Result<()> {
    if deadline.is_some_and(|t| Instant::now() > t) {
        return Err(Error::BudgetExceeded("time budget exhausted during candidate enumeration".into()));
    }
    Ok(())
}

fn require_positive_dim(x: &PointSet) -> Result<()> {
    if x.hull().dim() == 0 {
        return Err(Error::DegenerateInput(
            "candidate hyperplanes need a hull of dimension at least 1".into(),
        ));
    }
    Ok(())
}

/// All distinct spanned hyperplanes of the hull of `x` avoiding `forbidden`,
/// with exact traces, plus fallback traces for uncovered pairs. Sorted by
/// local form.
pub fn enumerate_candidates<'a>(
    x: &'a PointSet,
    forbidden: Option<&Point>,
) -> Result<IncidenceStructure<'a>> {
    enumerate_candidates_with(x, forbidden, &EnumerateOptions::default())
}

pub fn enumerate_candidates_with<'a>(
    x: &'a PointSet,
    forbidden: Option<&Point>,
    opts: &EnumerateOptions,
) -> Result<IncidenceStructure<'a>> {
    require_positive_dim(x)?;
    let forbidden = match forbidden {
        Some(p) => Some(x.index_of(p).ok_or(Error::NotAMember)?),
        None => None,
    };
    let frame = LocalFrame::new(x)?;
    check_budget(x.len(), frame.d, opts)?;
    let words = words_for(x.len());
    let chunks: Vec<(ScanCounts, Vec<(Vec<i64>, Vec<u64>)>)> = (0..x.len())
        .into_par_iter()
        .map(|first| {
            check_deadline(opts.deadline)?;
            let mut counts = ScanCounts::default();
            let mut found = Vec::new();
            scan_first(&frame, first, forbidden, &mut counts, &mut |f, t| {
                found.push((f.to_vec(), t.to_vec()))
            })?;
            Ok((counts, found))
        })
        .collect::<Result<_>>()?;
    let mut counts = ScanCounts::default();
    let mut entries = Vec::new();
    for (c, f) in chunks {
        counts = counts.merge(c);
        entries.extend(f);
    }
    entries.sort_by(|a, b| a.0.cmp(&b.0));
    debug_assert!(entries.windows(2).all(|w| w[0].0 != w[1].0));
    let stats = CandidateStats {
        subsets_scanned: counts.scanned,
        degenerate_subsets: counts.degenerate,
        spanned: counts.spanned,
        through_forbidden: counts.through_forbidden,
        ..CandidateStats::default()
    };
    let mut inc = IncidenceStructure::from_parts(x, frame, entries, forbidden, stats);
    debug_assert_eq!(inc.words, words);
    inc.complete_with_fallback()?;
    Ok(inc)
}

/// Largest trace of a spanned hyperplane of the hull.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MaxTrace {
    pub size: usize,
    pub witness: Hyperplane,
    pub witness_trace: Vec<usize>,
    /// Number of distinct spanned hyperplanes scanned.
    pub hyperplanes: usize,
}

/// Exhaustive scan for the maximum trace. Ties are broken by the smallest
/// local form, so the witness does not depend on the thread count.
pub fn max_trace(x: &PointSet, opts: &EnumerateOptions) -> Result<MaxTrace> {
    require_positive_dim(x)?;
    let frame = LocalFrame::new(x)?;
    check_budget(x.len(), frame.d, opts)?;
    type Best = Option<(usize, Vec<i64>, Vec<u64>)>;
    let better = |a: Best, b: Best| -> Best {
        match (a, b) {
            (None, b) => b,
            (a, None) => a,
            (Some(a), Some(b)) => {
                if (b.0, std::cmp::Reverse(&b.1)) > (a.0, std::cmp::Reverse(&a.1)) {
                    Some(b)
                } else {
                    Some(a)
                }
            }
        }
    };
    let results: Vec<(ScanCounts, Best)> = (0..x.len())
        .into_par_iter()
        .map(|first| {
            check_deadline(opts.deadline)?;
            let mut counts = ScanCounts::default();
            let mut best: Best = None;
            scan_first(&frame, first, None, &mut counts, &mut |f, t| {
                let size = bits::count(t);
                if best.as_ref().map_or(true, |b| (size, std::cmp::Reverse(f)) > (b.0, std::cmp::Reverse(b.1.as_slice()))) {
                    best = Some((size, f.to_vec(), t.to_vec()));
                }
            })?;
            Ok((counts, best))
        })
        .collect::<Result<_>>()?;
    let mut counts = ScanCounts::default();
    let mut best: Best = None;
    for (c, b) in results {
        counts = counts.merge(c);
        best = better(best, b);
    }
    let (size, form, trace) = best.ok_or_else(|| {
        Error::DegenerateInput("point set spans no hyperplane of its hull".into())
    })?;
    Ok(MaxTrace {
        size,
        witness: frame.to_hyperplane(&form)?,
        witness_trace: bits::iter_ones(&trace).collect(),
        hyperplanes: counts.spanned,
    })
}

/// Greedily grows the flat through points `p` and `q` by further points of
/// the set while it stays clear of `forbidden` and below hyperplane
/// dimension, then extends it generically to a hyperplane that misses
/// `forbidden`. Returns `None` if the line `pq` already hits `forbidden`.
fn grow_flat(
    frame: &LocalFrame,
    forbidden: Option<usize>,
    p: usize,
    q: usize,
) -> Result<Option<Vec<i64>>> {
    let d = frame.d;
    if d < 2 {
        // hyperplanes of a line are single points
        return Ok(None);
    }
    let as_vec = |i: usize| -> ExactVector {
        frame.point(i).iter().map(|&c| BigRational::from_integer(BigInt::from(c))).collect()
    };
    let base = as_vec(p);
    let diff = |i: usize| -> ExactVector { as_vec(i).iter().zip(&base).map(|(a, b)| a - b).collect() };
    let in_span = |dirs: &[ExactVector], v: &ExactVector| -> bool {
        let mut rows = dirs.to_vec();
        let r0 = rref(rows.clone(), d).1.len();
        rows.push(v.clone());
        rref(rows, d).1.len() == r0
    };
    let mut dirs = vec![diff(q)];
    let hits_forbidden = |dirs: &[ExactVector]| forbidden.is_some_and(|v| in_span(dirs, &diff(v)));
    if hits_forbidden(&dirs) {
        return Ok(None);
    }
    for r in 0..frame.n {
        if dirs.len() + 1 >= d {
            break;
        }
        if Some(r) == forbidden || r == p || r == q {
            continue;
        }
        let v = diff(r);
        if in_span(&dirs, &v) {
            continue;
        }
        dirs.push(v);
        if hits_forbidden(&dirs) {
            dirs.pop();
        }
    }
    // generic completion along the moment curve (1, t, t^2, ...)
    let mut t: i64 = 1;
    loop {
        let mut full = dirs.clone();
        let mut s = t;
        while full.len() + 1 < d {
            let v: ExactVector = (0..d as u32)
                .map(|k| BigRational::from_integer(BigInt::from(s).pow(k)))
                .collect();
            if !in_span(&full, &v) {
                full.push(v);
            }
            s += 1;
        }
        let m = if full.is_empty() {
            ExactMatrix::new(0, d, vec![])?
        } else {
            ExactMatrix::from_rows(full)?
        };
        let ns = m.nullspace();
        if ns.len() == 1 {
            let a = &ns[0];
            let b: BigInt = -a.iter().zip(&base).map(|(x, y)| BigRational::from_integer(x.clone()) * y).sum::<ExactScalar>().to_integer();
            let mut form: Vec<i64> = Vec::with_capacity(d + 1);
            for x in a.iter().chain(std::iter::once(&b)) {
                form.push(x.to_i64().ok_or_else(|| Error::Overflow("fallback hyperplane".into()))?);
            }
            let g = form.iter().fold(0i64, |acc, &x| num_integer::gcd(acc, x));
            if g > 1 {
                form.iter_mut().for_each(|x| *x /= g);
            }
            if !forbidden.is_some_and(|v| frame.on(&form, v)) && !form[..d].iter().all(Zero::is_zero) {
                return Ok(Some(form));
            }
        }
        t += d as i64;
        if t > 1000 {
            return Err(Error::ContractViolated("no generic hyperplane extension found".into()));
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_arith::ints;
    use crate::geometry::{hyperplane_through, incidence};
    use crate::pointsets::{cube, grid, permutohedron};
    use itertools::Itertools;
    use std::collections::BTreeSet;

    /// Brute force: every d-subset through the exact geometry path.
    fn oracle_hyperplanes(x: &PointSet, forbidden: Option<usize>) -> BTreeSet<Hyperplane> {
        let d = x.hull().dim();
        (0..x.len())
            .combinations(d)
            .filter_map(|c| {
                let pts: Vec<Point> = c.iter().map(|&i| x.points()[i].clone()).collect();
                hyperplane_through(&pts, x.hull()).ok()
            })
            .filter(|h| forbidden.map_or(true, |v| !h.contains(&x.points()[v])))
            .collect()
    }

    #[test]
    fn hexagon_counts() {
        let p3 = permutohedron(3).unwrap();
        let inc = enumerate_candidates(&p3, None).unwrap();
        assert_eq!(inc.len(), 15);
        assert!(!inc.fallback_fired());
        let inc = enumerate_candidates(&p3, Some(&Point::from_ints(&[1, 2, 3]))).unwrap();
        assert_eq!(inc.len(), 10);
        assert_eq!(inc.stats().through_forbidden, 5);
        let sq = cube(2).unwrap();
        assert_eq!(enumerate_candidates(&sq, None).unwrap().len(), 6);
    }

    #[test]
    fn matches_exact_oracle() {
        let sets = [permutohedron(3).unwrap(), permutohedron(4).unwrap(), cube(3).unwrap(),
            grid(&[ints(&[0, 1, 2]), ints(&[0, 1, 3])]).unwrap()];
        for x in &sets {
            for forbidden in [None, Some(0), Some(x.len() - 1)] {
                let fp = forbidden.map(|i| x.points()[i].clone());
                let inc = enumerate_candidates(x, fp.as_ref()).unwrap();
                let got: BTreeSet<Hyperplane> = inc.hyperplanes().into_iter().collect();
                assert_eq!(got.len(), inc.len(), "duplicates");
                assert_eq!(got, oracle_hyperplanes(x, forbidden));
                for i in 0..inc.len() {
                    assert_eq!(inc.trace_indices(i), incidence(&inc.hyperplane(i), x).unwrap());
                }
                // no trace contains another
                for i in 0..inc.len() {
                    for j in 0..inc.len() {
                        if i != j {
                            assert!(!inc.trace(i).is_subset(&inc.trace(j)));
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn restricting_matches_direct_enumeration() {
        let p4 = permutohedron(4).unwrap();
        let all = enumerate_candidates(&p4, None).unwrap();
        for v in [0, 7, 23] {
            let direct = enumerate_candidates(&p4, Some(&p4.points()[v])).unwrap();
            let restricted = all.without_point(v).unwrap();
            assert_eq!(direct.hyperplanes(), restricted.hyperplanes());
        }
    }

    #[test]
    fn budget_and_membership_errors() {
        let p4 = permutohedron(4).unwrap();
        let opts = EnumerateOptions { budget_subsets: 100, deadline: None };
        match enumerate_candidates_with(&p4, None, &opts) {
            Err(Error::SizeLimit(msg)) => assert!(msg.contains("2024")),
            other => panic!("{other:?}"),
        }
        assert_eq!(
            enumerate_candidates(&p4, Some(&Point::from_ints(&[1, 1, 1, 1]))).unwrap_err(),
            Error::NotAMember
        );
        let single = PointSet::new(vec![Point::from_ints(&[1, 2])]).unwrap();
        assert!(matches!(enumerate_candidates(&single, None), Err(Error::DegenerateInput(_))));
    }

    #[test]
    fn fallback_fires_when_pairs_are_blocked() {
        // three collinear points plus the forbidden one on the same line in
        // the plane: the line is excluded, so the pairs on it need fallback
        let pts = [[0, 0], [1, 0], [2, 0], [3, 0], [0, 1]];
        let x = PointSet::new(pts.iter().map(|p| Point::from_ints(p)).collect()).unwrap();
        let inc = enumerate_candidates(&x, Some(&Point::from_ints(&[3, 0]))).unwrap();
        assert!(!inc.fallback_fired());
        // in 3-space with a forbidden point on the plane of four coplanar points
        let pts = [[0, 0, 0], [1, 0, 0], [0, 1, 0], [1, 1, 0], [0, 0, 1]];
        let x = PointSet::new(pts.iter().map(|p| Point::from_ints(p)).collect()).unwrap();
        let inc = enumerate_candidates(&x, Some(&Point::from_ints(&[1, 1, 0]))).unwrap();
        for i in 0..inc.len() {
            assert!(!inc.trace(i).contains(3));
        }
    }

    #[test]
    fn fallback_restores_pair_coverage() {
        // drop every candidate through point 0 and let the fallback repair it
        let c3 = cube(3).unwrap();
        let forbidden = 7;
        let full = enumerate_candidates(&c3, Some(&c3.points()[forbidden])).unwrap();
        let kept: Vec<(Vec<i64>, Vec<u64>)> = (0..full.len())
            .filter(|&i| !full.trace(i).contains(0))
            .map(|i| (full.form(i).to_vec(), full.trace_words(i).to_vec()))
            .collect();
        let before = kept.len();
        let mut inc = IncidenceStructure::from_parts(
            &c3,
            full.frame.clone(),
            kept,
            Some(forbidden),
            CandidateStats::default(),
        );
        inc.complete_with_fallback().unwrap();
        assert!(inc.fallback_fired());
        assert!(inc.len() > before);
        for q in 1..7 {
            assert!((0..inc.len()).any(|i| inc.trace(i).contains(0) && inc.trace(i).contains(q)));
        }
        for i in 0..inc.len() {
            assert!(!inc.trace(i).contains(forbidden));
            assert_eq!(inc.trace_indices(i), incidence(&inc.hyperplane(i), &c3).unwrap());
        }
    }

    #[test]
    fn grown_flats_avoid_the_forbidden_point() {
        let x = permutohedron(4).unwrap();
        let frame = LocalFrame::new(&x).unwrap();
        for (p, q, v) in [(0, 1, 2), (0, 23, 5), (3, 9, 0)] {
            let form = grow_flat(&frame, Some(v), p, q).unwrap().unwrap();
            assert!(frame.on(&form, p) && frame.on(&form, q) && !frame.on(&form, v));
        }
        // v on the line through p and q
        let line = PointSet::new(vec![Point::from_ints(&[0, 0]), Point::from_ints(&[1, 1]),
            Point::from_ints(&[2, 2]), Point::from_ints(&[0, 1])]).unwrap();
        let frame = LocalFrame::new(&line).unwrap();
        assert_eq!(grow_flat(&frame, Some(1), 0, 2).unwrap(), None);
    }

    #[test]
    fn max_trace_small_cases() {
        let p3 = permutohedron(3).unwrap();
        let mt = max_trace(&p3, &EnumerateOptions::default()).unwrap();
        assert_eq!(mt.size, 2);
        assert_eq!(mt.hyperplanes, 15);
        let p4 = permutohedron(4).unwrap();
        let mt = max_trace(&p4, &EnumerateOptions::default()).unwrap();
        assert_eq!(mt.size, 8);
        assert_eq!(incidence(&mt.witness, &p4).unwrap(), mt.witness_trace);
    }
}
