//! Branch-and-bound for minimum set cover.
//!
//! Each node picks the uncovered element with the fewest remaining
//! candidates and branches on which candidate covers it; candidates tried in
//! earlier siblings are excluded from later ones, so every subset is visited
//! at most once. The lower bound at a node is the least `k` such that the
//! `k` largest marginal coverages reach the number of uncovered elements
//! (at least `ceil(uncovered / largest marginal)`).
//!
//! Parallel runs split the tree into tasks numbered in sequential DFS
//! order. A task may tie the incumbent only if it comes before the task
//! that produced it, so the returned selection is the one the sequential
//! search would return, whatever the worker count.

use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};
use std::sync::Mutex;
use std::time::{Duration, Instant};

use rayon::prelude::*;

use super::{Label, SetCoverInstance};

#[derive(Clone, Debug)]
pub struct SolveOptions {
    /// Use the instance's symmetry hint, if it has one.
    pub symmetry: bool,
    pub time_limit: Option<Duration>,
    /// Worker threads; `None` uses rayon's global pool, `Some(1)` searches
    /// sequentially on the calling thread.
    pub threads: Option<usize>,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            symmetry: true,
            time_limit: None,
            threads: None,
        }
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum Status {
    /// `chosen` is a certified minimum cover.
    Optimal,
    /// The time limit expired; `chosen` is the best cover found.
    FeasibleOnly,
    /// Some element is covered by no candidate.
    Infeasible,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchStats {
    pub nodes: u64,
    pub root_lower_bound: usize,
    pub bound: &'static str,
    pub symmetry_used: bool,
    pub tasks: usize,
    pub elapsed: Duration,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SolveResult {
    pub status: Status,
    /// Size of `chosen`; the minimum when `status` is `Optimal`.
    pub optimum: usize,
    /// Best proven lower bound (equals `optimum` when optimal).
    pub lower_bound: usize,
    /// Candidate indices, ascending.
    pub chosen_indices: Vec<usize>,
    pub chosen: Vec<Label>,
    pub stats: SearchStats,
}

impl SolveResult {
    pub fn gap(&self) -> usize {
        self.optimum - self.lower_bound
    }
}

const BOUND_RULE: &str = "top-k marginal coverage";

#[inline]
fn words(bits: usize) -> usize {
    bits.div_ceil(64)
}

#[inline]
fn test(set: &[u64], i: usize) -> bool {
    set[i / 64] >> (i % 64) & 1 == 1
}

#[inline]
fn set_bit(set: &mut [u64], i: usize) {
    set[i / 64] |= 1 << (i % 64);
}

#[inline]
fn clear_bit(set: &mut [u64], i: usize) {
    set[i / 64] &= !(1 << (i % 64));
}

#[inline]
fn count(set: &[u64]) -> usize {
    set.iter().map(|w| w.count_ones() as usize).sum()
}

#[inline]
fn count_and(a: &[u64], b: &[u64]) -> u32 {
    a.iter().zip(b).map(|(x, y)| (x & y).count_ones()).sum()
}

fn ones(set: &[u64]) -> impl Iterator<Item = usize> + '_ {
    set.iter().enumerate().flat_map(|(wi, &w)| {
        let mut w = w;
        std::iter::from_fn(move || {
            if w == 0 {
                return None;
            }
            let b = w.trailing_zeros() as usize;
            w &= w - 1;
            Some(wi * 64 + b)
        })
    })
}

/// Bit-matrix form of an instance. Element `universe_size`, when present,
/// is the symmetry pseudo-element covered exactly by the hint's candidates.
struct Prepared {
    n_cand: usize,
    we: usize,
    wc: usize,
    cand: Vec<u64>,
    elem: Vec<u64>,
    root_uncovered: Vec<u64>,
}

impl Prepared {
    fn new(inst: &SetCoverInstance, use_hint: bool) -> Prepared {
        let n_cand = inst.candidates().len();
        let hint = inst
            .symmetry()
            .filter(|h| use_hint && inst.universe_size() > 0 && !h.candidates.is_empty());
        let n_elem = inst.universe_size() + usize::from(hint.is_some());
        let we = words(n_elem).max(1);
        let wc = words(n_cand).max(1);
        let mut cand = vec![0u64; n_cand * we];
        let mut elem = vec![0u64; n_elem * wc];
        for (c, candidate) in inst.candidates().iter().enumerate() {
            for &e in &candidate.elements {
                set_bit(&mut cand[c * we..(c + 1) * we], e);
                set_bit(&mut elem[e * wc..(e + 1) * wc], c);
            }
        }
        if let Some(h) = hint {
            let e = inst.universe_size();
            for &c in &h.candidates {
                set_bit(&mut cand[c * we..(c + 1) * we], e);
                set_bit(&mut elem[e * wc..(e + 1) * wc], c);
            }
        }
        let mut root_uncovered = vec![0u64; we];
        for e in 0..n_elem {
            set_bit(&mut root_uncovered, e);
        }
        Prepared {
            n_cand,
            we,
            wc,
            cand,
            elem,
            root_uncovered,
        }
    }

    #[inline]
    fn cand(&self, c: usize) -> &[u64] {
        &self.cand[c * self.we..(c + 1) * self.we]
    }

    #[inline]
    fn elem(&self, e: usize) -> &[u64] {
        &self.elem[e * self.wc..(e + 1) * self.wc]
    }

    fn all_candidates(&self) -> Vec<u64> {
        let mut set = vec![0u64; self.wc];
        for c in 0..self.n_cand {
            set_bit(&mut set, c);
        }
        set
    }

    /// Marginal coverage of every allowed candidate that still covers
    /// something; writes those candidates into `live`.
    fn marginals(
        &self,
        uncovered: &[u64],
        allowed: &[u64],
        live: &mut [u64],
        out: &mut Vec<(u32, u32)>,
    ) {
        out.clear();
        live.fill(0);
        for c in ones(allowed) {
            let m = count_and(self.cand(c), uncovered);
            if m > 0 {
                out.push((m, c as u32));
                set_bit(live, c);
            }
        }
    }

    /// Uncovered element with the fewest live candidates, lowest index on ties.
    fn branch_element(&self, uncovered: &[u64], live: &[u64]) -> (usize, u32) {
        let mut best = (usize::MAX, u32::MAX);
        for e in ones(uncovered) {
            let k = count_and(self.elem(e), live);
            if k < best.1 {
                best = (e, k);
                if k <= 1 {
                    break;
                }
            }
        }
        best
    }
}

/// Smallest `k` with the `k` largest marginals summing to `remaining`, or
/// `cap + 1` if even `cap` of them fall short.
fn cover_bound(margs: &[(u32, u32)], remaining: usize, cap: usize) -> usize {
    let mut top: Vec<u32> = Vec::with_capacity(cap + 1);
    for &(m, _) in margs {
        if top.len() < cap {
            let pos = top.partition_point(|&x| x >= m);
            top.insert(pos, m);
        } else if cap > 0 && m > top[cap - 1] {
            top.pop();
            let pos = top.partition_point(|&x| x >= m);
            top.insert(pos, m);
        }
    }
    let mut sum = 0usize;
    for (k, &m) in top.iter().enumerate() {
        sum += m as usize;
        if sum >= remaining {
            return k + 1;
        }
    }
    cap + 1
}

/// Incumbent shared between workers: size in the high half, the task that
/// found it in the low half (0 is the greedy seed; tasks count from 1).
struct Shared {
    best: AtomicU64,
    solution: Mutex<Vec<usize>>,
    deadline: Option<Instant>,
    timed_out: AtomicBool,
}

impl Shared {
    fn load(&self) -> (usize, usize) {
        let v = self.best.load(Ordering::Acquire);
        ((v >> 32) as usize, (v & 0xffff_ffff) as usize)
    }

    fn offer(&self, size: usize, task: usize, path: &[usize]) {
        let mut sol = self.solution.lock().expect("incumbent lock");
        let (bs, bt) = self.load();
        if size < bs || (size == bs && task < bt) {
            *sol = path.to_vec();
            self.best
                .store(((size as u64) << 32) | task as u64, Ordering::Release);
        }
    }

    /// Largest solution size a task may still report.
    fn limit(&self, task: usize) -> usize {
        let (bs, bt) = self.load();
        if task < bt {
            bs
        } else {
            bs.saturating_sub(1)
        }
    }
}

struct Task {
    path: Vec<usize>,
    uncovered: Vec<u64>,
    allowed: Vec<u64>,
}

struct Worker<'a> {
    prep: &'a Prepared,
    shared: &'a Shared,
    task: usize,
    local_best: usize,
    path: Vec<usize>,
    nodes: u64,
    scratch: Vec<Scratch>,
}

#[derive(Default)]
struct Scratch {
    margs: Vec<(u32, u32)>,
    live: Vec<u64>,
    child: Vec<u64>,
    order: Vec<(u32, u32)>,
}

impl<'a> Worker<'a> {
    fn new(prep: &'a Prepared, shared: &'a Shared, task: usize, path: Vec<usize>) -> Self {
        Worker {
            prep,
            shared,
            task,
            local_best: usize::MAX,
            path,
            nodes: 0,
            scratch: Vec::new(),
        }
    }

    fn limit(&self) -> usize {
        self.shared
            .limit(self.task)
            .min(self.local_best.saturating_sub(1))
    }

    fn dfs(&mut self, uncovered: &[u64], allowed: &[u64]) {
        self.nodes += 1;
        if self.nodes & 0x3ff == 0 {
            if let Some(d) = self.shared.deadline {
                if Instant::now() >= d {
                    self.shared.timed_out.store(true, Ordering::Relaxed);
                }
            }
        }
        if self.shared.timed_out.load(Ordering::Relaxed) {
            return;
        }
        let remaining = count(uncovered);
        if remaining == 0 {
            self.local_best = self.path.len();
            self.shared.offer(self.path.len(), self.task, &self.path);
            return;
        }
        let limit = self.limit();
        if self.path.len() >= limit {
            return;
        }
        let budget = limit - self.path.len();

        let depth = self.path.len();
        if self.scratch.len() <= depth {
            self.scratch.resize_with(depth + 1, Scratch::default);
        }
        let mut s = std::mem::take(&mut self.scratch[depth]);
        s.live.resize(self.prep.wc, 0);
        s.child.resize(self.prep.we, 0);

        self.prep
            .marginals(uncovered, allowed, &mut s.live, &mut s.margs);
        if cover_bound(&s.margs, remaining, budget) <= budget {
            let (e, k) = self.prep.branch_element(uncovered, &s.live);
            if k > 0 {
                s.order.clear();
                let elem = self.prep.elem(e);
                s.order.extend(
                    s.margs
                        .iter()
                        .filter(|&&(_, c)| test(elem, c as usize))
                        .map(|&(m, c)| (m, c)),
                );
                s.order
                    .sort_unstable_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(&b.1)));
                for i in 0..s.order.len() {
                    let c = s.order[i].1 as usize;
                    for (w, (&u, &cw)) in s
                        .child
                        .iter_mut()
                        .zip(uncovered.iter().zip(self.prep.cand(c)))
                    {
                        *w = u & !cw;
                    }
                    let child = std::mem::take(&mut s.child);
                    self.path.push(c);
                    self.dfs(&child, &s.live);
                    self.path.pop();
                    s.child = child;
                    clear_bit(&mut s.live, c);
                    if self.path.len() + 1 > self.limit() {
                        break;
                    }
                }
            }
        }
        self.scratch[depth] = s;
    }
}

/// Splits the search tree below `root` into tasks listed in sequential DFS
/// order, expanding level by level until there are at least `target`.
fn split_tasks(prep: &Prepared, root: Task, limit: usize, target: usize) -> Vec<Task> {
    let mut frontier = vec![root];
    for _ in 0..4 {
        if frontier.len() >= target {
            break;
        }
        let mut next = Vec::new();
        for node in frontier {
            let remaining = count(&node.uncovered);
            if remaining == 0 || node.path.len() >= limit {
                next.push(node);
                continue;
            }
            let budget = limit - node.path.len();
            let mut live = vec![0u64; prep.wc];
            let mut margs = Vec::new();
            prep.marginals(&node.uncovered, &node.allowed, &mut live, &mut margs);
            if cover_bound(&margs, remaining, budget) > budget {
                continue;
            }
            let (e, k) = prep.branch_element(&node.uncovered, &live);
            if k == 0 {
                continue;
            }
            let elem = prep.elem(e);
            let mut order: Vec<(u32, u32)> = margs
                .iter()
                .copied()
                .filter(|&(_, c)| test(elem, c as usize))
                .collect();
            order.sort_unstable_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(&b.1)));
            for (m, c) in order {
                let _ = m;
                let c = c as usize;
                let uncovered: Vec<u64> = node
                    .uncovered
                    .iter()
                    .zip(prep.cand(c))
                    .map(|(&u, &cw)| u & !cw)
                    .collect();
                let mut path = node.path.clone();
                path.push(c);
                next.push(Task {
                    path,
                    uncovered,
                    allowed: live.clone(),
                });
                clear_bit(&mut live, c);
            }
        }
        frontier = next;
    }
    frontier
}

/// Largest-marginal-first greedy cover; ties go to the lower candidate index.
pub fn solve_greedy(inst: &SetCoverInstance) -> SolveResult {
    let start = Instant::now();
    let prep = Prepared::new(inst, false);
    let (chosen, status) = greedy_indices(&prep);
    let lower_bound = if status == Status::Infeasible {
        0
    } else {
        root_bound(&prep, chosen.len())
    };
    finish(
        inst,
        status,
        chosen,
        lower_bound,
        SearchStats {
            nodes: 0,
            root_lower_bound: lower_bound,
            bound: BOUND_RULE,
            symmetry_used: false,
            tasks: 0,
            elapsed: start.elapsed(),
        },
    )
}

fn greedy_indices(prep: &Prepared) -> (Vec<usize>, Status) {
    let mut uncovered = prep.root_uncovered.clone();
    let mut chosen = Vec::new();
    while count(&uncovered) > 0 {
        let best = (0..prep.n_cand)
            .map(|c| (count_and(prep.cand(c), &uncovered), c))
            .fold(
                (0u32, usize::MAX),
                |acc, x| if x.0 > acc.0 { x } else { acc },
            );
        if best.0 == 0 {
            return (chosen, Status::Infeasible);
        }
        chosen.push(best.1);
        for (u, &cw) in uncovered.iter_mut().zip(prep.cand(best.1)) {
            *u &= !cw;
        }
    }
    chosen.sort_unstable();
    (chosen, Status::FeasibleOnly)
}

fn root_bound(prep: &Prepared, cap: usize) -> usize {
    let remaining = count(&prep.root_uncovered);
    if remaining == 0 {
        return 0;
    }
    let mut live = vec![0u64; prep.wc];
    let mut margs = Vec::new();
    prep.marginals(
        &prep.root_uncovered,
        &prep.all_candidates(),
        &mut live,
        &mut margs,
    );
    cover_bound(&margs, remaining, cap).min(cap)
}

fn finish(
    inst: &SetCoverInstance,
    status: Status,
    mut chosen: Vec<usize>,
    lower_bound: usize,
    stats: SearchStats,
) -> SolveResult {
    chosen.sort_unstable();
    SolveResult {
        status,
        optimum: chosen.len(),
        lower_bound,
        chosen: chosen.iter().map(|&c| inst.candidates()[c].label).collect(),
        chosen_indices: chosen,
        stats,
    }
}

/// Exact minimum cover by branch and bound, seeded with the greedy cover.
pub fn solve_exact(inst: &SetCoverInstance, opts: &SolveOptions) -> SolveResult {
    let start = Instant::now();
    let plain = Prepared::new(inst, false);
    let (seed, seed_status) = greedy_indices(&plain);
    let symmetry_used = opts.symmetry
        && inst.symmetry().is_some_and(|h| !h.candidates.is_empty())
        && inst.universe_size() > 0;
    let mut stats = SearchStats {
        nodes: 0,
        root_lower_bound: 0,
        bound: BOUND_RULE,
        symmetry_used,
        tasks: 0,
        elapsed: Duration::ZERO,
    };
    if seed_status == Status::Infeasible {
        stats.elapsed = start.elapsed();
        return finish(inst, Status::Infeasible, Vec::new(), 0, stats);
    }
    let root_lb = root_bound(&plain, seed.len());
    stats.root_lower_bound = root_lb;
    if root_lb >= seed.len() {
        stats.elapsed = start.elapsed();
        return finish(inst, Status::Optimal, seed, root_lb, stats);
    }

    let prep = if symmetry_used {
        Prepared::new(inst, true)
    } else {
        plain
    };
    let shared = Shared {
        best: AtomicU64::new((seed.len() as u64) << 32),
        solution: Mutex::new(seed.clone()),
        deadline: opts.time_limit.map(|t| start + t),
        timed_out: AtomicBool::new(false),
    };
    let root = Task {
        path: Vec::new(),
        uncovered: prep.root_uncovered.clone(),
        allowed: prep.all_candidates(),
    };

    let threads = opts
        .threads
        .unwrap_or_else(rayon::current_num_threads)
        .max(1);
    let nodes = if threads == 1 {
        stats.tasks = 1;
        let mut w = Worker::new(&prep, &shared, 1, Vec::new());
        w.dfs(&root.uncovered, &root.allowed);
        w.nodes
    } else {
        let tasks = split_tasks(&prep, root, seed.len() - 1, threads * 16);
        stats.tasks = tasks.len();
        let run = || {
            tasks
                .par_iter()
                .enumerate()
                .map(|(i, t)| {
                    let mut w = Worker::new(&prep, &shared, i + 1, t.path.clone());
                    w.dfs(&t.uncovered, &t.allowed);
                    w.nodes
                })
                .sum::<u64>()
        };
        match opts.threads {
            Some(n) => match rayon::ThreadPoolBuilder::new().num_threads(n).build() {
                Ok(pool) => pool.install(run),
                Err(_) => run(),
            },
            None => run(),
        }
    };
    stats.nodes = nodes;
    stats.elapsed = start.elapsed();

    let chosen = shared.solution.into_inner().expect("incumbent lock");
    if shared.timed_out.load(Ordering::Relaxed) {
        let lb = root_lb.min(chosen.len());
        finish(inst, Status::FeasibleOnly, chosen, lb, stats)
    } else {
        let n = chosen.len();
        finish(inst, Status::Optimal, chosen, n, stats)
    }
}
