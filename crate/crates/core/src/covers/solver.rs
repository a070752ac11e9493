//! Exact minimum set cover by branch-and-bound.

use std::sync::atomic::{AtomicBool, AtomicU64, AtomicUsize, Ordering};
use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};
use std::time::{Duration, Instant};

use rayon::prelude::*;

use super::bits::{self, BitSet};
use super::candidates::IncidenceStructure;
use crate::error::{Error, Result};
use crate::geometry::{Hyperplane, Point};
use itertools::Itertools;

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SolveOptions {
    /// Only covers with at most this many hyperplanes are of interest; if
    /// none exists the solver returns `Infeasible`.
    pub max_size: Option<usize>,
    pub time_budget: Option<Duration>,
    /// Sequential search, so the chosen witness is reproducible.
    pub deterministic: bool,
    /// Disables pruning by coordinate-permutation symmetries.
    pub no_symmetry: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoverSolution {
    pub chosen: Vec<usize>,
    pub size: usize,
    /// False only when the time budget ran out before the search finished.
    pub optimal: bool,
    pub nodes_expanded: u64,
    pub lower_bound_at_root: usize,
    pub hyperplanes: Vec<Hyperplane>,
}

struct Shared {
    best: AtomicUsize,
    witness: Mutex<Option<Vec<u32>>>,
    nodes: AtomicU64,
    timed_out: AtomicBool,
    deadline: Option<Instant>,
}

impl Shared {
    fn offer(&self, chosen: &[u32]) {
        let mut w = self.witness.lock().expect("poisoned");
        if chosen.len() < self.best.load(Ordering::SeqCst) {
            self.best.store(chosen.len(), Ordering::SeqCst);
            *w = Some(chosen.to_vec());
        }
    }
}

struct Problem<'i> {
    n: usize,
    w: usize,
    m: usize,
    /// Candidate traces restricted to the required set.
    traces: Vec<u64>,
    /// For each point, the candidates covering it, in index order.
    covering: Vec<Vec<u32>>,
    symmetry: Option<Symmetry<'i>>,
}

/// Coordinate permutations preserving the point set, the required set and
/// the forbidden point, acting on candidates through their traces.
struct Symmetry<'i> {
    inc: &'i IncidenceStructure<'i>,
    /// Point permutations; entry 0 is the identity.
    perms: Vec<Vec<u32>>,
    index: OnceLock<HashMap<&'i [u64], u32>>,
}

impl<'i> Symmetry<'i> {
    /// Only used when the candidates are exactly the spanned hyperplanes
    /// avoiding the forbidden point, a family every affine automorphism
    /// fixing that point maps to itself.
    fn detect(inc: &'i IncidenceStructure<'i>, required: &BitSet) -> Option<Self> {
        if inc.fallback_fired() || inc.stats().from_cache {
            return None;
        }
        let x = inc.points();
        let dim = x.ambient_dim();
        let order: usize = (1..=dim).product();
        if dim < 2 || order.saturating_mul(x.len()) > SYMMETRY_WORK_LIMIT {
            return None;
        }
        let permute = |p: &Point, sigma: &[usize]| -> Point {
            Point::new(sigma.iter().map(|&k| p.coords()[k].clone()).collect())
        };
        let mut perms = Vec::new();
        'sigma: for sigma in (0..dim).permutations(dim) {
            if let Some(v) = inc.forbidden() {
                if x.index_of(&permute(&x.points()[v], &sigma)) != Some(v) {
                    continue;
                }
            }
            let mut perm = Vec::with_capacity(x.len());
            for (i, p) in x.points().iter().enumerate() {
                match x.index_of(&permute(p, &sigma)) {
                    Some(j) if required.contains(i) == required.contains(j) => perm.push(j as u32),
                    _ => continue 'sigma,
                }
            }
            perms.push(perm);
        }
        // the identity permutation is enumerated first
        (perms.len() > 1).then(|| Self { inc, perms, index: OnceLock::new() })
    }

    fn image(&self, g: u32, c: u32) -> u32 {
        let index = self.index.get_or_init(|| {
            (0..self.inc.len()).map(|c| (self.inc.trace_words(c), c as u32)).collect()
        });
        let perm = &self.perms[g as usize];
        let mut t = vec![0u64; self.inc.words()];
        for u in bits::iter_ones(self.inc.trace_words(c as usize)) {
            bits::set(&mut t, perm[u] as usize);
        }
        *index.get(t.as_slice()).expect("symmetries permute the candidates")
    }

    fn all(&self) -> Vec<u32> {
        (0..self.perms.len() as u32).collect()
    }
}

const SYMMETRY_WORK_LIMIT: usize = 2_000_000;

impl Problem<'_> {
    fn trace(&self, c: usize) -> &[u64] {
        &self.traces[c * self.w..(c + 1) * self.w]
    }
}

struct Node {
    /// Per candidate: size of the trace inside the uncovered set (0 if banned).
    gain: Vec<u32>,
    /// Per uncovered point: number of usable candidates through it.
    count: Vec<u32>,
    lower_bound: usize,
}

impl Problem<'_> {
    fn evaluate(&self, uncovered: &[u64], banned: &[u64]) -> Node {
        let mut gain = vec![0u32; self.m];
        let mut count = vec![0u32; self.n];
        let mut heaviest = vec![0u32; self.n];
        let mut hist = vec![0u32; self.n + 1];
        for c in 0..self.m {
            if bits::test(banned, c) {
                continue;
            }
            let g = bits::and_count(self.trace(c), uncovered) as u32;
            if g == 0 {
                continue;
            }
            gain[c] = g;
            hist[g as usize] += 1;
            for (k, (a, b)) in self.trace(c).iter().zip(uncovered).enumerate() {
                let mut word = a & b;
                while word != 0 {
                    let u = k * 64 + word.trailing_zeros() as usize;
                    word &= word - 1;
                    count[u] += 1;
                    heaviest[u] = heaviest[u].max(g);
                }
            }
        }
        let remaining = bits::count(uncovered);
        if remaining == 0 {
            return Node { gain, count, lower_bound: 0 };
        }
        if bits::iter_ones(uncovered).any(|u| count[u] == 0) {
            return Node { gain, count, lower_bound: usize::MAX };
        }

        // each point u needs 1/heaviest(u) of some hyperplane
        let fractional: f64 = bits::iter_ones(uncovered).map(|u| 1.0 / heaviest[u] as f64).sum();
        let frac_bound = (fractional - 1e-9).ceil().max(0.0) as usize;

        // fewest traces whose sizes could add up to the uncovered count
        let mut topk = 0;
        let mut covered = 0usize;
        'outer: for g in (1..=self.n).rev() {
            for _ in 0..hist[g] {
                if covered >= remaining {
                    break 'outer;
                }
                covered += g;
                topk += 1;
            }
        }

        // uncovered points no two of which share a usable candidate
        let mut order: Vec<usize> = bits::iter_ones(uncovered).collect();
        order.sort_by_key(|&u| (count[u], u));
        let mut blocked = vec![0u64; self.w];
        let mut packing = 0;
        for u in order {
            if bits::test(&blocked, u) {
                continue;
            }
            packing += 1;
            for &c in &self.covering[u] {
                if gain[c as usize] > 0 {
                    for (b, t) in blocked.iter_mut().zip(self.trace(c as usize)) {
                        *b |= t;
                    }
                }
            }
        }
        let lower_bound = frac_bound.max(topk).max(packing);
        Node { gain, count, lower_bound }
    }

    /// Candidates to try at a node: those through the most constrained
    /// uncovered point, largest gain first, ties by index.
    fn branches(&self, uncovered: &[u64], node: &Node) -> Vec<u32> {
        let u = bits::iter_ones(uncovered)
            .min_by_key(|&u| (node.count[u], u))
            .expect("nonempty uncovered set");
        let mut cands: Vec<u32> =
            self.covering[u].iter().copied().filter(|&c| node.gain[c as usize] > 0).collect();
        cands.sort_by_key(|&c| (std::cmp::Reverse(node.gain[c as usize]), c));
        cands
    }

    fn search(
        &self,
        shared: &Shared,
        uncovered: &mut Vec<u64>,
        banned: &mut Vec<u64>,
        chosen: &mut Vec<u32>,
        group: &[u32],
    ) {
        let visited = shared.nodes.fetch_add(1, Ordering::Relaxed) + 1;
        if shared.timed_out.load(Ordering::Relaxed) {
            return;
        }
        if visited % 4096 == 0 && shared.deadline.is_some_and(|d| Instant::now() > d) {
            shared.timed_out.store(true, Ordering::Relaxed);
            return;
        }
        if uncovered.iter().all(|&x| x == 0) {
            shared.offer(chosen);
            return;
        }
        let node = self.evaluate(uncovered, banned);
        if node.lower_bound == usize::MAX
            || chosen.len() + node.lower_bound >= shared.best.load(Ordering::SeqCst)
        {
            return;
        }
        self.descend(shared, uncovered, banned, chosen, &node, group);
    }

    /// Tries each candidate through the branching point. `group` lists the
    /// symmetries fixing the chosen and banned candidates; after a candidate
    /// is explored its whole orbit is banned, since any cover using an
    /// image maps back to one already examined.
    fn descend(
        &self,
        shared: &Shared,
        uncovered: &mut Vec<u64>,
        banned: &mut Vec<u64>,
        chosen: &mut Vec<u32>,
        node: &Node,
        group: &[u32],
    ) {
        let cands = self.branches(uncovered, node);
        let saved_banned = banned.clone();
        for &c in &cands {
            if bits::test(banned, c as usize) {
                continue;
            }
            if chosen.len() + 1 >= shared.best.load(Ordering::SeqCst) {
                break;
            }
            let saved = uncovered.clone();
            for (u, t) in uncovered.iter_mut().zip(self.trace(c as usize)) {
                *u &= !t;
            }
            chosen.push(c);
            match &self.symmetry {
                Some(sym) if group.len() > 1 => {
                    let sub: Vec<u32> = group.iter().copied().filter(|&g| sym.image(g, c) == c).collect();
                    self.search(shared, uncovered, banned, chosen, &sub);
                }
                _ => self.search(shared, uncovered, banned, chosen, group),
            }
            chosen.pop();
            *uncovered = saved;
            self.ban_orbit(banned, c, group);
        }
        *banned = saved_banned;
    }

    fn ban_orbit(&self, banned: &mut [u64], c: u32, group: &[u32]) {
        match &self.symmetry {
            Some(sym) if group.len() > 1 => {
                for &g in group {
                    bits::set(banned, sym.image(g, c) as usize);
                }
            }
            _ => bits::set(banned, c as usize),
        }
    }
}

fn greedy(p: &Problem, required: &[u64]) -> Option<Vec<u32>> {
    let mut uncovered = required.to_vec();
    let mut chosen = Vec::new();
    while uncovered.iter().any(|&x| x != 0) {
        let (best, gain) = (0..p.m)
            .map(|c| (c, bits::and_count(p.trace(c), &uncovered)))
            .max_by_key(|&(c, g)| (g, std::cmp::Reverse(c)))?;
        if gain == 0 {
            return None;
        }
        for (u, t) in uncovered.iter_mut().zip(p.trace(best)) {
            *u &= !t;
        }
        chosen.push(best as u32);
    }
    Some(chosen)
}

pub fn min_cover(inc: &IncidenceStructure<'_>, required: &BitSet) -> Result<CoverSolution> {
    min_cover_with(inc, required, &SolveOptions::default())
}

/// Minimum number of candidate traces whose union contains `required`.
///
/// The result is exact unless the time budget runs out, in which case the
/// best cover found so far is returned with `optimal = false`.
pub fn min_cover_with(
    inc: &IncidenceStructure<'_>,
    required: &BitSet,
    opts: &SolveOptions,
) -> Result<CoverSolution> {
    let n = inc.points().len();
    if required.capacity() != n {
        return Err(Error::ShapeMismatch(format!(
            "required set has capacity {} for {n} points",
            required.capacity()
        )));
    }
    let start = Instant::now();
    let w = inc.words();
    let m = inc.len();
    let req = required.words();
    let mut traces = Vec::with_capacity(m * w);
    let mut covering = vec![Vec::new(); n];
    for c in 0..m {
        for (t, r) in inc.trace_words(c).iter().zip(req) {
            traces.push(t & r);
        }
        for u in bits::iter_ones(&traces[c * w..]) {
            covering[u].push(c as u32);
        }
    }
    if let Some(u) = required.iter().find(|&u| covering[u].is_empty()) {
        return Err(Error::Infeasible(format!(
            "point {u} {} lies on no candidate hyperplane",
            inc.points().points()[u]
        )));
    }
    let symmetry = if opts.no_symmetry { None } else { Symmetry::detect(inc, required) };
    let p = Problem { n, w, m, traces, covering, symmetry };
    let group = p.symmetry.as_ref().map_or(vec![0], Symmetry::all);

    let cap = opts.max_size.map_or(usize::MAX, |k| k + 1);
    let initial = greedy(&p, req).expect("every required point is coverable");
    let shared = Shared {
        best: AtomicUsize::new(cap),
        witness: Mutex::new(None),
        nodes: AtomicU64::new(0),
        timed_out: AtomicBool::new(false),
        deadline: opts.time_budget.map(|b| start + b),
    };
    shared.offer(&initial);

    let mut uncovered = req.to_vec();
    let mut banned = vec![0u64; m.div_ceil(64).max(1)];
    let root = p.evaluate(&uncovered, &banned);
    let lower_bound_at_root = if required.is_empty() { 0 } else { root.lower_bound };
    shared.nodes.fetch_add(1, Ordering::Relaxed);
    if !required.is_empty() && root.lower_bound < shared.best.load(Ordering::SeqCst) {
        let parallel = !opts.deterministic && rayon::current_num_threads() > 1;
        if parallel {
            // one root branch per orbit; branch k bans the orbits before it
            let mut reps = Vec::new();
            let mut seen = banned.clone();
            for c in p.branches(&uncovered, &root) {
                if !bits::test(&seen, c as usize) {
                    p.ban_orbit(&mut seen, c, &group);
                    reps.push(c);
                }
            }
            reps.par_iter().enumerate().for_each(|(k, &c)| {
                let mut banned = banned.clone();
                for &earlier in &reps[..k] {
                    p.ban_orbit(&mut banned, earlier, &group);
                }
                let mut uncovered: Vec<u64> =
                    req.iter().zip(p.trace(c as usize)).map(|(r, t)| r & !t).collect();
                let sub: Vec<u32> = match &p.symmetry {
                    Some(sym) => group.iter().copied().filter(|&g| sym.image(g, c) == c).collect(),
                    None => group.clone(),
                };
                p.search(&shared, &mut uncovered, &mut banned, &mut vec![c], &sub);
            });
        } else {
            p.descend(&shared, &mut uncovered, &mut banned, &mut Vec::new(), &root, &group);
        }
    }

    let witness = shared.witness.into_inner().expect("poisoned");
    let Some(chosen) = witness else {
        return Err(Error::Infeasible(format!(
            "no cover with at most {} hyperplanes",
            opts.max_size.unwrap_or(0)
        )));
    };
    let mut chosen: Vec<usize> = chosen.into_iter().map(|c| c as usize).collect();
    chosen.sort_unstable();
    Ok(CoverSolution {
        size: chosen.len(),
        hyperplanes: chosen.iter().map(|&c| inc.hyperplane(c)).collect(),
        chosen,
        optimal: !shared.timed_out.load(Ordering::SeqCst),
        nodes_expanded: shared.nodes.load(Ordering::SeqCst),
        lower_bound_at_root,
    })
}
