//! Fitting matrices and exhaustive / randomized search over them.
//!
//! A fitting matrix has one row per (singleton-normalized, non-degenerate)
//! receiver `i`: a 1 in the column of the wanted message, free entries in
//! the side-information columns and 0 elsewhere. Broadcasting `E·X`, with
//! `E` any row basis of a fitting matrix `M`, lets every receiver decode.
//!
//! Free cells are ordered row-major; assignments are compared
//! lexicographically with field elements ordered `0 < 1 < ... < q-1`, and the
//! exhaustive searches return the least assignment among the optima.

use std::collections::BTreeMap;
use std::sync::atomic::{AtomicUsize, Ordering};

use rand::{Rng, SeedableRng};
use rand_pcg::Pcg64;
use rayon::prelude::*;
use thiserror::Error;

use crate::gf::{Echelon, MatrixGF, PrimeField};
use crate::instance::{AdversarySplit, Instance};

/// Free cells the exhaustive search accepts by default over GF(2).
pub const DEFAULT_MAX_FREE_CELLS_GF2: usize = 24;

/// Minimum number of independent subtrees before the search fans out
/// across threads.
const PARALLEL_PREFIXES: usize = 256;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Cell {
    One,
    Zero,
    Free,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FittingPattern {
    field: PrimeField,
    rows: usize,
    cols: usize,
    cells: Vec<Cell>,
    free: Vec<(usize, usize)>,
}

impl FittingPattern {
    /// Pattern of the singleton-normalized instance; degenerate receivers
    /// get no row.
    pub fn from_instance(inst: &Instance) -> Self {
        let norm = inst.normalize_singleton_wants();
        let cols = norm.message_count();
        let mut cells = Vec::new();
        let mut rows = 0;
        for r in norm.receivers().iter().filter(|r| !r.is_degenerate()) {
            let want = *r.wants.iter().next().unwrap();
            cells.extend((0..cols).map(|c| {
                if c == want {
                    Cell::One
                } else if r.has.contains(&c) {
                    Cell::Free
                } else {
                    Cell::Zero
                }
            }));
            rows += 1;
        }
        let free = (0..rows)
            .flat_map(|r| (0..cols).map(move |c| (r, c)))
            .filter(|&(r, c)| cells[r * cols + c] == Cell::Free)
            .collect();
        FittingPattern { field: inst.field(), rows, cols, cells, free }
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn cell(&self, r: usize, c: usize) -> Cell {
        self.cells[r * self.cols + c]
    }

    /// Free cells in row-major order.
    pub fn free_cells(&self) -> &[(usize, usize)] {
        &self.free
    }

    pub fn free_count(&self) -> usize {
        self.free.len()
    }

    /// The fitting matrix with the free cells set to `assignment`.
    pub fn fill(&self, assignment: &[u32]) -> MatrixGF {
        assert_eq!(assignment.len(), self.free.len(), "assignment length");
        let mut m = MatrixGF::zeros(self.field, self.rows, self.cols);
        for r in 0..self.rows {
            for c in 0..self.cols {
                if self.cell(r, c) == Cell::One {
                    m.set(r, c, 1);
                }
            }
        }
        for (&(r, c), &v) in self.free.iter().zip(assignment) {
            m.set(r, c, v);
        }
        m
    }

    /// Whether `m` has this pattern's shape, ones and zeros.
    pub fn matches(&self, m: &MatrixGF) -> bool {
        m.field() == self.field
            && m.rows() == self.rows
            && m.cols() == self.cols
            && (0..self.rows).all(|r| {
                (0..self.cols).all(|c| match self.cell(r, c) {
                    Cell::One => m.get(r, c) == 1,
                    Cell::Zero => m.get(r, c) == 0,
                    Cell::Free => true,
                })
            })
    }

    /// Every fitting matrix, in lexicographic assignment order.
    pub fn enumerate(&self) -> impl Iterator<Item = MatrixGF> + '_ {
        let q = self.field.order();
        let total = (q as u64).pow(self.free.len() as u32);
        (0..total).map(move |mut code| {
            let mut a = vec![0u32; self.free.len()];
            for slot in a.iter_mut().rev() {
                *slot = (code % q as u64) as u32;
                code /= q as u64;
            }
            self.fill(&a)
        })
    }

    /// Per-row options in lexicographic order. Free cells whose column is
    /// in `pinned` are held at zero.
    fn row_options(&self, pinned: &dyn Fn(usize) -> bool) -> Vec<Vec<RowOption>> {
        let q = self.field.order();
        (0..self.rows)
            .map(|r| {
                let base: Vec<u32> = (0..self.cols).map(|c| u32::from(self.cell(r, c) == Cell::One)).collect();
                let free_cols: Vec<usize> = (0..self.cols).filter(|&c| self.cell(r, c) == Cell::Free).collect();
                let open: Vec<usize> = free_cols.iter().copied().filter(|&c| !pinned(c)).collect();
                let count = (q as usize).pow(open.len() as u32);
                (0..count)
                    .map(|mut code| {
                        let mut row = base.clone();
                        for &c in open.iter().rev() {
                            row[c] = (code % q as usize) as u32;
                            code /= q as usize;
                        }
                        let assignment = free_cols.iter().map(|&c| row[c]).collect();
                        RowOption { row, assignment }
                    })
                    .collect()
            })
            .collect()
    }
}

#[derive(Debug, Clone)]
struct RowOption {
    row: Vec<u32>,
    /// Values of this row's free cells, left to right.
    assignment: Vec<u32>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Objective {
    /// `rank(M)`
    Rank,
    /// `rank([S U]) - rank(U)` for the given split
    Leakage(AdversarySplit),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SearchMode {
    Exhaustive,
    /// Uniformly random assignments from a PCG-64 stream seeded with `seed`.
    Randomized { seed: u64, iterations: u64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchLimits {
    pub max_free_cells: usize,
    pub mode: SearchMode,
}

impl SearchLimits {
    /// Exhaustive search allowing as many free cells as GF(2) gets with
    /// [`DEFAULT_MAX_FREE_CELLS_GF2`], i.e. the largest `F` with
    /// `q^F <= 2^24`.
    pub fn exhaustive(field: PrimeField) -> Self {
        let q = field.order() as u64;
        let budget = 1u64 << DEFAULT_MAX_FREE_CELLS_GF2;
        let mut f = 0;
        let mut size = 1u64;
        while size * q <= budget {
            size *= q;
            f += 1;
        }
        SearchLimits { max_free_cells: f, mode: SearchMode::Exhaustive }
    }

    pub fn randomized(field: PrimeField, seed: u64, iterations: u64) -> Self {
        SearchLimits { mode: SearchMode::Randomized { seed, iterations }, ..Self::exhaustive(field) }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SearchError {
    #[error("{free} free cells exceed the exhaustive limit of {max}")]
    TooManyFreeCells { free: usize, max: usize },
    #[error("randomized search needs at least one iteration")]
    ZeroIterations,
    #[error("this search is only available in exhaustive mode")]
    ExhaustiveOnly,
    #[error("split covers {split} messages but the pattern has {cols} columns")]
    SplitMismatch { split: usize, cols: usize },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchOutcome {
    pub value: usize,
    pub witness: MatrixGF,
    /// Free-cell values of the witness, row-major.
    pub assignment: Vec<u32>,
    /// True iff the value is a proven global minimum.
    pub certified: bool,
    /// Complete assignments evaluated.
    pub evaluated: u64,
}

/// Objective value of a concrete matrix.
pub fn objective_value(m: &MatrixGF, objective: &Objective) -> usize {
    match objective {
        Objective::Rank => m.rank(),
        Objective::Leakage(split) => leakage_rank_gap(m, split),
    }
}

/// `rank([S U]) - rank(U)` with columns taken S first, then U.
pub fn leakage_rank_gap(m: &MatrixGF, split: &AdversarySplit) -> usize {
    let su = m.select_columns(&split.sensitive_then_nonsensitive()).expect("split within matrix columns");
    let u: Vec<usize> = split.nonsensitive().iter().copied().collect();
    let u = m.select_columns(&u).expect("split within matrix columns");
    su.rank() - u.rank()
}

/// Encoder rows: a row basis of the fitting matrix.
pub fn extract_encoder(m: &MatrixGF) -> MatrixGF {
    m.row_basis()
}

fn check_split(pattern: &FittingPattern, objective: &Objective) -> Result<(), SearchError> {
    if let Objective::Leakage(split) = objective {
        if split.message_count() != pattern.cols() {
            return Err(SearchError::SplitMismatch { split: split.message_count(), cols: pattern.cols() });
        }
    }
    Ok(())
}

pub fn search_min(pattern: &FittingPattern, objective: &Objective, limits: &SearchLimits) -> Result<SearchOutcome, SearchError> {
    check_split(pattern, objective)?;
    match limits.mode {
        SearchMode::Exhaustive => exhaustive_min(pattern, objective, limits.max_free_cells),
        SearchMode::Randomized { seed, iterations } => randomized_min(pattern, objective, seed, iterations),
    }
}

fn randomized_min(pattern: &FittingPattern, objective: &Objective, seed: u64, iterations: u64) -> Result<SearchOutcome, SearchError> {
    if iterations == 0 {
        return Err(SearchError::ZeroIterations);
    }
    let q = pattern.field().order();
    let mut rng = Pcg64::seed_from_u64(seed);
    let mut best: Option<(usize, Vec<u32>)> = None;
    for _ in 0..iterations {
        let a: Vec<u32> = (0..pattern.free_count()).map(|_| rng.gen_range(0..q)).collect();
        let v = objective_value(&pattern.fill(&a), objective);
        if best.as_ref().is_none_or(|(bv, ba)| (v, &a) < (*bv, ba)) {
            best = Some((v, a));
        }
    }
    let (value, assignment) = best.unwrap();
    Ok(SearchOutcome { value, witness: pattern.fill(&assignment), assignment, certified: false, evaluated: iterations })
}

/// Which echelon forms a search keeps per partial matrix.
#[derive(Clone)]
struct Tracker {
    full: Option<Echelon>,
    su: Option<(Vec<usize>, Echelon)>,
    u: Option<(Vec<usize>, Echelon)>,
}

impl Tracker {
    fn new(field: PrimeField, cols: usize, full: bool, split: Option<&AdversarySplit>) -> Self {
        let (su, u) = match split {
            Some(s) => {
                let su_cols = s.sensitive_then_nonsensitive();
                let u_cols: Vec<usize> = s.nonsensitive().iter().copied().collect();
                let su_e = Echelon::new(field, su_cols.len());
                let u_e = Echelon::new(field, u_cols.len());
                (Some((su_cols, su_e)), Some((u_cols, u_e)))
            }
            None => (None, None),
        };
        Tracker { full: full.then(|| Echelon::new(field, cols)), su, u }
    }

    fn push(&mut self, row: &[u32]) {
        if let Some(e) = self.full.as_mut() {
            e.insert(row);
        }
        for (cols, e) in [self.su.as_mut(), self.u.as_mut()].into_iter().flatten() {
            let projected: Vec<u32> = cols.iter().map(|&c| row[c]).collect();
            e.insert(&projected);
        }
    }

    fn rank(&self) -> usize {
        self.full.as_ref().map_or(0, Echelon::rank)
    }

    fn gap(&self) -> usize {
        self.su.as_ref().map_or(0, |(_, e)| e.rank()) - self.u.as_ref().map_or(0, |(_, e)| e.rank())
    }
}

/// Splits the search tree into lexicographically ordered subtrees by
/// fixing the options of the first few rows.
fn prefixes(opts: &[Vec<RowOption>], root: &Tracker) -> (usize, Vec<(Vec<usize>, Tracker)>) {
    let mut depth = 0;
    let mut count = 1usize;
    while depth < opts.len() && count < PARALLEL_PREFIXES {
        count = count.saturating_mul(opts[depth].len());
        depth += 1;
    }
    let mut out = vec![(Vec::new(), root.clone())];
    for row_opts in &opts[..depth] {
        let mut next = Vec::with_capacity(out.len() * row_opts.len());
        for (chosen, tracker) in &out {
            for (i, o) in row_opts.iter().enumerate() {
                let mut c = chosen.clone();
                c.push(i);
                let mut t = tracker.clone();
                t.push(&o.row);
                next.push((c, t));
            }
        }
        out = next;
    }
    (depth, out)
}

fn assemble(pattern: &FittingPattern, opts: &[Vec<RowOption>], chosen: &[usize]) -> (MatrixGF, Vec<u32>) {
    let assignment: Vec<u32> = chosen.iter().enumerate().flat_map(|(r, &i)| opts[r][i].assignment.iter().copied()).collect();
    (pattern.fill(&assignment), assignment)
}

struct MinSearch<'a> {
    opts: &'a [Vec<RowOption>],
    rank_objective: bool,
    shared_best: &'a AtomicUsize,
    best: usize,
    best_choice: Option<Vec<usize>>,
    evaluated: u64,
}

impl MinSearch<'_> {
    /// Returns true when no further improvement is possible.
    fn go(&mut self, row: usize, tracker: &Tracker, chosen: &mut Vec<usize>) -> bool {
        if row == self.opts.len() {
            self.evaluated += 1;
            let v = if self.rank_objective { tracker.rank() } else { tracker.gap() };
            if v < self.best {
                self.best = v;
                self.best_choice = Some(chosen.clone());
                self.shared_best.fetch_min(v, Ordering::Relaxed);
            }
            return self.best == 0;
        }
        for (i, o) in self.opts[row].iter().enumerate() {
            let mut t = tracker.clone();
            t.push(&o.row);
            // Ranks of row prefixes only grow, so they bound the final rank.
            if self.rank_objective && (t.rank() >= self.best || t.rank() > self.shared_best.load(Ordering::Relaxed)) {
                continue;
            }
            chosen.push(i);
            let done = self.go(row + 1, &t, chosen);
            chosen.pop();
            if done {
                return true;
            }
        }
        false
    }
}

fn exhaustive_min(pattern: &FittingPattern, objective: &Objective, max_free: usize) -> Result<SearchOutcome, SearchError> {
    let split = match objective {
        Objective::Rank => None,
        Objective::Leakage(s) => Some(s),
    };
    // Columns of K never enter the leakage objective; their free cells stay 0.
    let pinned = |c: usize| split.is_some_and(|s| s.known().contains(&c));
    let effective = pattern.free_cells().iter().filter(|&&(_, c)| !pinned(c)).count();
    if effective > max_free {
        return Err(SearchError::TooManyFreeCells { free: effective, max: max_free });
    }
    let opts = pattern.row_options(&pinned);
    let rank_objective = split.is_none();
    let root = Tracker::new(pattern.field(), pattern.cols(), rank_objective, split);
    let (depth, starts) = prefixes(&opts, &root);
    let shared_best = AtomicUsize::new(usize::MAX);

    let results: Vec<(usize, Option<Vec<usize>>, u64)> = starts
        .into_par_iter()
        .map(|(mut chosen, tracker)| {
            let mut s = MinSearch {
                opts: &opts,
                rank_objective,
                shared_best: &shared_best,
                best: usize::MAX,
                best_choice: None,
                evaluated: 0,
            };
            if !(rank_objective && tracker.rank() > shared_best.load(Ordering::Relaxed)) {
                s.go(depth, &tracker, &mut chosen);
            }
            (s.best, s.best_choice, s.evaluated)
        })
        .collect();

    let evaluated = results.iter().map(|r| r.2).sum();
    // Subtrees are in lexicographic order, so the first optimum wins ties.
    let (value, choice) = results
        .into_iter()
        .filter_map(|(v, c, _)| c.map(|c| (v, c)))
        .min_by_key(|(v, _)| *v)
        .expect("at least one fitting matrix exists");
    let (witness, assignment) = assemble(pattern, &opts, &choice);
    Ok(SearchOutcome { value, witness, assignment, certified: true, evaluated })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParetoPoint {
    pub rank: usize,
    /// Least leakage objective among fitting matrices of exactly this rank.
    pub leakage: usize,
    pub witness: MatrixGF,
}

/// For every achievable rank, the least leakage at that rank.
pub fn pareto_sweep(pattern: &FittingPattern, split: &AdversarySplit, limits: &SearchLimits) -> Result<Vec<ParetoPoint>, SearchError> {
    if limits.mode != SearchMode::Exhaustive {
        return Err(SearchError::ExhaustiveOnly);
    }
    check_split(pattern, &Objective::Leakage(split.clone()))?;
    if pattern.free_count() > limits.max_free_cells {
        return Err(SearchError::TooManyFreeCells { free: pattern.free_count(), max: limits.max_free_cells });
    }
    let opts = pattern.row_options(&|_| false);
    let root = Tracker::new(pattern.field(), pattern.cols(), true, Some(split));
    let (depth, starts) = prefixes(&opts, &root);

    fn walk(opts: &[Vec<RowOption>], row: usize, t: &Tracker, chosen: &mut Vec<usize>, best: &mut BTreeMap<usize, (usize, Vec<usize>)>) {
        if row == opts.len() {
            let (r, g) = (t.rank(), t.gap());
            match best.get(&r) {
                Some((bg, _)) if *bg <= g => {}
                _ => {
                    best.insert(r, (g, chosen.clone()));
                }
            }
            return;
        }
        for (i, o) in opts[row].iter().enumerate() {
            let mut next = t.clone();
            next.push(&o.row);
            chosen.push(i);
            walk(opts, row + 1, &next, chosen, best);
            chosen.pop();
        }
    }

    let partials: Vec<BTreeMap<usize, (usize, Vec<usize>)>> = starts
        .into_par_iter()
        .map(|(mut chosen, t)| {
            let mut best = BTreeMap::new();
            walk(&opts, depth, &t, &mut chosen, &mut best);
            best
        })
        .collect();

    let mut merged: BTreeMap<usize, (usize, Vec<usize>)> = BTreeMap::new();
    for part in partials {
        for (r, (g, c)) in part {
            match merged.get(&r) {
                Some((bg, _)) if *bg <= g => {}
                _ => {
                    merged.insert(r, (g, c));
                }
            }
        }
    }
    Ok(merged
        .into_iter()
        .map(|(rank, (leakage, choice))| ParetoPoint { rank, leakage, witness: assemble(pattern, &opts, &choice).0 })
        .collect())
}
