//! Leakage to a guessing adversary.
//!
//! The adversary knows `X_K` and tries to guess `X_S` in one shot; `X_U` is
//! neither known nor targeted. With uniform independent messages and block
//! length `t`, the leakage of an encoder is
//!
//! ```text
//! q^L = q^{-(k+u)t} · Σ_{x_K, y} max_{x_S} N(y, x_K, x_S)
//! ```
//!
//! where `N` is the number (or total kernel weight) of `x_U` completing
//! `(x_K, x_S)` to a tuple that encodes to `y`. All of this is exact; `L` is
//! only taken as a float when reporting.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::gf::MatrixGF;
use crate::graph::{ConfusionGraph, GraphError};
use crate::instance::{AdversarySplit, Instance};
use crate::rate::{beta_exact, mais_bound, RateError};
use crate::rational::{exact_log, log, power, Rational, RationalRepr};
use crate::space::TupleSpace;

/// Largest tuple space the oracle routines enumerate.
pub const ORACLE_TUPLE_CAP: usize = 1 << 20;
/// Largest `q^n` the exhaustive deterministic-code search accepts.
pub const EXHAUSTIVE_TUPLE_CAP: usize = 64;
pub const DEFAULT_NODE_BUDGET: u64 = 200_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LeakageError {
    #[error("q^(n t) = {q}^{dims} exceeds the cap of {cap} tuples")]
    TupleCap { q: u32, dims: usize, cap: usize },
    #[error("table has {got} rows, expected {expected}")]
    TableLength { got: usize, expected: usize },
    #[error("codeword {codeword} out of range for {count} codewords")]
    CodewordOutOfRange { codeword: usize, count: usize },
    #[error("invalid kernel: {0}")]
    InvalidKernel(String),
    #[error("encoder is over q={enc_q}, n={enc_n} but the instance has q={q}, n={n}")]
    Mismatch { enc_q: u32, enc_n: usize, q: u32, n: usize },
    #[error("matrix has {cols} columns, expected {expected}")]
    ColumnMismatch { cols: usize, expected: usize },
    #[error("receiver {0} does not exist")]
    NoSuchReceiver(usize),
    #[error("codeword {0} is not a valid codeword id")]
    NoSuchCodeword(usize),
    #[error("side information has {got} symbols, expected {expected}")]
    SideInfoLength { got: usize, expected: usize },
    #[error("{candidates} different wanted values are consistent with the codeword and side information")]
    Ambiguous { candidates: usize },
    #[error("no message tuple is consistent with the codeword and side information")]
    Inconsistent,
    #[error("search exceeded its budget of {0} nodes")]
    NodeBudget(u64),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Rate(#[from] RateError),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EncoderKind {
    /// Codeword id per tuple index.
    Deterministic(Vec<usize>),
    /// Sparse `w(y | x)` per tuple index: positive weights, sorted by
    /// codeword, summing to one.
    Stochastic(Vec<Vec<(usize, Rational)>>),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "EncoderDocument", into = "EncoderDocument")]
pub struct EncoderTable {
    q: u32,
    n: usize,
    t: usize,
    codeword_count: usize,
    kind: EncoderKind,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
enum EncoderDocument {
    Deterministic { q: u32, n: usize, t: usize, codeword_count: usize, codewords: Vec<usize> },
    Stochastic { q: u32, n: usize, t: usize, codeword_count: usize, entries: Vec<KernelEntry> },
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct KernelEntry {
    tuple: usize,
    codeword: usize,
    num: String,
    den: String,
}

impl TryFrom<EncoderDocument> for EncoderTable {
    type Error = LeakageError;

    fn try_from(doc: EncoderDocument) -> Result<Self, LeakageError> {
        match doc {
            EncoderDocument::Deterministic { q, n, t, codeword_count, codewords } => {
                EncoderTable::deterministic_with_count(q, n, t, codeword_count, codewords)
            }
            EncoderDocument::Stochastic { q, n, t, codeword_count, entries } => {
                let space = tuple_space(q, n, t, ORACLE_TUPLE_CAP)?;
                let mut rows = vec![Vec::new(); space.size()];
                for e in entries {
                    let w = Rational::try_from(&RationalRepr { num: e.num, den: e.den }).map_err(LeakageError::InvalidKernel)?;
                    let row = rows.get_mut(e.tuple).ok_or_else(|| LeakageError::InvalidKernel(format!("tuple {} out of range", e.tuple)))?;
                    row.push((e.codeword, w));
                }
                EncoderTable::stochastic(q, n, t, codeword_count, rows)
            }
        }
    }
}

impl From<EncoderTable> for EncoderDocument {
    fn from(enc: EncoderTable) -> Self {
        let EncoderTable { q, n, t, codeword_count, kind } = enc;
        match kind {
            EncoderKind::Deterministic(codewords) => EncoderDocument::Deterministic { q, n, t, codeword_count, codewords },
            EncoderKind::Stochastic(rows) => EncoderDocument::Stochastic {
                q,
                n,
                t,
                codeword_count,
                entries: rows
                    .into_iter()
                    .enumerate()
                    .flat_map(|(tuple, row)| {
                        row.into_iter().map(move |(codeword, w)| {
                            let r = RationalRepr::from(&w);
                            KernelEntry { tuple, codeword, num: r.num, den: r.den }
                        })
                    })
                    .collect(),
            },
        }
    }
}

fn tuple_space(q: u32, n: usize, t: usize, cap: usize) -> Result<TupleSpace, LeakageError> {
    TupleSpace::new(q, n, t, cap).ok_or(LeakageError::TupleCap { q, dims: n * t, cap })
}

impl EncoderTable {
    /// Deterministic table; the codeword count is one past the largest id.
    pub fn deterministic(q: u32, n: usize, t: usize, codewords: Vec<usize>) -> Result<Self, LeakageError> {
        let count = codewords.iter().max().map_or(1, |m| m + 1);
        Self::deterministic_with_count(q, n, t, count, codewords)
    }

    pub fn deterministic_with_count(q: u32, n: usize, t: usize, codeword_count: usize, codewords: Vec<usize>) -> Result<Self, LeakageError> {
        let space = tuple_space(q, n, t, ORACLE_TUPLE_CAP)?;
        if codewords.len() != space.size() {
            return Err(LeakageError::TableLength { got: codewords.len(), expected: space.size() });
        }
        if let Some(&codeword) = codewords.iter().find(|&&c| c >= codeword_count) {
            return Err(LeakageError::CodewordOutOfRange { codeword, count: codeword_count });
        }
        Ok(EncoderTable { q, n, t, codeword_count, kind: EncoderKind::Deterministic(codewords) })
    }

    pub fn stochastic(q: u32, n: usize, t: usize, codeword_count: usize, rows: Vec<Vec<(usize, Rational)>>) -> Result<Self, LeakageError> {
        let space = tuple_space(q, n, t, ORACLE_TUPLE_CAP)?;
        if rows.len() != space.size() {
            return Err(LeakageError::TableLength { got: rows.len(), expected: space.size() });
        }
        let mut clean = Vec::with_capacity(rows.len());
        for (x, row) in rows.into_iter().enumerate() {
            let mut merged: Vec<(usize, Rational)> = Vec::new();
            let mut sorted = row;
            sorted.sort_by_key(|(y, _)| *y);
            for (y, w) in sorted {
                if y >= codeword_count {
                    return Err(LeakageError::CodewordOutOfRange { codeword: y, count: codeword_count });
                }
                if w.is_negative() {
                    return Err(LeakageError::InvalidKernel(format!("negative weight for tuple {x}")));
                }
                match merged.last_mut() {
                    Some((last, acc)) if *last == y => *acc += w,
                    _ => merged.push((y, w)),
                }
            }
            merged.retain(|(_, w)| !w.is_zero());
            let total: Rational = merged.iter().map(|(_, w)| w.clone()).sum();
            if !total.is_one() {
                return Err(LeakageError::InvalidKernel(format!("weights for tuple {x} sum to {total}")));
            }
            clean.push(merged);
        }
        Ok(EncoderTable { q, n, t, codeword_count, kind: EncoderKind::Stochastic(clean) })
    }

    /// `y = E x` for single-symbol blocks; the codeword id is the base-q
    /// number of `y`.
    pub fn from_linear(e: &MatrixGF, n: usize) -> Result<Self, LeakageError> {
        if e.cols() != n {
            return Err(LeakageError::ColumnMismatch { cols: e.cols(), expected: n });
        }
        let q = e.field().order();
        let space = tuple_space(q, n, 1, ORACLE_TUPLE_CAP)?;
        let count = (q as usize).checked_pow(e.rows() as u32).ok_or(LeakageError::TupleCap { q, dims: e.rows(), cap: usize::MAX })?;
        let codewords = (0..space.size())
            .map(|x| {
                let y = e.mul_vec(&space.digits(x)).expect("matrix width checked");
                y.iter().fold(0usize, |acc, &d| acc * q as usize + d as usize)
            })
            .collect();
        Self::deterministic_with_count(q, n, 1, count, codewords)
    }

    pub fn constant(q: u32, n: usize, t: usize) -> Result<Self, LeakageError> {
        let size = tuple_space(q, n, t, ORACLE_TUPLE_CAP)?.size();
        Self::deterministic(q, n, t, vec![0; size])
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn messages(&self) -> usize {
        self.n
    }

    pub fn block_length(&self) -> usize {
        self.t
    }

    pub fn codeword_count(&self) -> usize {
        self.codeword_count
    }

    pub fn kind(&self) -> &EncoderKind {
        &self.kind
    }

    pub fn is_deterministic(&self) -> bool {
        matches!(self.kind, EncoderKind::Deterministic(_))
    }

    pub fn space(&self) -> TupleSpace {
        TupleSpace::new(self.q, self.n, self.t, usize::MAX).expect("size checked on construction")
    }

    /// Codewords `x` can be sent as, with their probabilities.
    pub fn outputs(&self, x: usize) -> Vec<(usize, Rational)> {
        match &self.kind {
            EncoderKind::Deterministic(c) => vec![(c[x], Rational::one())],
            EncoderKind::Stochastic(rows) => rows[x].clone(),
        }
    }

    fn support(&self, x: usize) -> impl Iterator<Item = usize> + '_ {
        let (single, row) = match &self.kind {
            EncoderKind::Deterministic(c) => (Some(c[x]), None),
            EncoderKind::Stochastic(rows) => (None, Some(rows[x].iter().map(|(y, _)| *y))),
        };
        single.into_iter().chain(row.into_iter().flatten())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("encoder tables serialize")
    }

    pub fn from_json(text: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }

    fn check_split(&self, split: &AdversarySplit) -> Result<(), LeakageError> {
        if split.message_count() != self.n {
            return Err(LeakageError::Mismatch { enc_q: self.q, enc_n: self.n, q: self.q, n: split.message_count() });
        }
        Ok(())
    }

    fn check_instance(&self, inst: &Instance) -> Result<(), LeakageError> {
        if inst.q() != self.q || inst.message_count() != self.n {
            return Err(LeakageError::Mismatch { enc_q: self.q, enc_n: self.n, q: inst.q(), n: inst.message_count() });
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LeakageMethod {
    Formula,
    Oracle,
    MutualInfo,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LeakageResult {
    /// `q^L`, exact.
    pub q_l: Rational,
    /// `L` in q-ary units.
    pub leakage: f64,
    /// `L / t`.
    pub rate: f64,
    pub method: LeakageMethod,
}

impl LeakageResult {
    fn new(q: u32, t: usize, q_l: Rational, method: LeakageMethod) -> Self {
        let leakage = match exact_log(&q_l, q) {
            Some(e) => e as f64,
            None => log(&q_l, q),
        };
        LeakageResult { q_l, leakage, rate: leakage / t as f64, method }
    }

    /// `L` as an integer number of q-ary symbols, when it is one.
    pub fn exact_symbols(&self, q: u32) -> Option<i64> {
        exact_log(&self.q_l, q)
    }
}

/// Probability of guessing `X_S` blindly: `q^{-ts}`.
pub fn prior_success(split: &AdversarySplit, q: u32, t: usize) -> Rational {
    power(q, -((split.s() * t) as i64))
}

/// Per-(x_K, y, x_S) mass `N`, keyed by projected indices.
fn joint_counts(enc: &EncoderTable, split: &AdversarySplit) -> HashMap<(usize, usize, usize), Rational> {
    let space = enc.space();
    let k = space.coords_of(split.known());
    let s = space.coords_of(split.sensitive());
    let mut counts: HashMap<(usize, usize, usize), Rational> = HashMap::new();
    match &enc.kind {
        EncoderKind::Deterministic(c) => {
            let mut ints: HashMap<(usize, usize, usize), u64> = HashMap::new();
            for (x, &y) in c.iter().enumerate() {
                *ints.entry((space.project(x, &k), y, space.project(x, &s))).or_default() += 1;
            }
            counts.extend(ints.into_iter().map(|(key, v)| (key, Rational::from_integer(BigInt::from(v)))));
        }
        EncoderKind::Stochastic(rows) => {
            for (x, row) in rows.iter().enumerate() {
                let (kx, sx) = (space.project(x, &k), space.project(x, &s));
                for (y, w) in row {
                    *counts.entry((kx, *y, sx)).or_insert_with(Rational::zero) += w;
                }
            }
        }
    }
    counts
}

/// `Σ_{x_K, y} max_{x_S} N(y, x_K, x_S)`.
fn guessing_mass(enc: &EncoderTable, split: &AdversarySplit) -> Rational {
    let mut best: HashMap<(usize, usize), Rational> = HashMap::new();
    for ((kx, y, _), v) in joint_counts(enc, split) {
        let slot = best.entry((kx, y)).or_insert_with(Rational::zero);
        if v > *slot {
            *slot = v;
        }
    }
    best.into_values().sum()
}

/// Probability that the best single guess of `X_S` from `(Y, X_K)` is right.
pub fn posterior_success(enc: &EncoderTable, split: &AdversarySplit) -> Result<Rational, LeakageError> {
    enc.check_split(split)?;
    Ok(guessing_mass(enc, split) * power(enc.q, -((enc.n * enc.t) as i64)))
}

pub fn oracle_leakage(enc: &EncoderTable, split: &AdversarySplit) -> Result<LeakageResult, LeakageError> {
    enc.check_split(split)?;
    let scale = power(enc.q, -(((split.k() + split.u()) * enc.t) as i64));
    Ok(LeakageResult::new(enc.q, enc.t, guessing_mass(enc, split) * scale, LeakageMethod::Oracle))
}

/// Leakage of `Y = E X` from ranks: `rank([S U]) - rank(U)`.
pub fn linear_leakage(e: &MatrixGF, split: &AdversarySplit) -> Result<LeakageResult, LeakageError> {
    if e.cols() != split.message_count() {
        return Err(LeakageError::ColumnMismatch { cols: e.cols(), expected: split.message_count() });
    }
    let gap = crate::fitting::leakage_rank_gap(e, split);
    let q = e.field().order();
    Ok(LeakageResult::new(q, 1, power(q, gap as i64), LeakageMethod::Formula))
}

/// `I(X_S; Y | X_K)` in q-ary units under uniform independent messages.
pub fn mutual_info_leakage(enc: &EncoderTable, split: &AdversarySplit) -> Result<f64, LeakageError> {
    enc.check_split(split)?;
    let counts = joint_counts(enc, split);
    let mut marginal: HashMap<(usize, usize), Rational> = HashMap::new();
    for ((kx, y, _), v) in &counts {
        *marginal.entry((*kx, *y)).or_insert_with(Rational::zero) += v;
    }
    let q = enc.q as f64;
    let total = q.powi((enc.n * enc.t) as i32);
    let sensitive_size = power(enc.q, (split.s() * enc.t) as i64);
    let mut info = 0.0;
    for ((kx, y, _), v) in &counts {
        if v.is_zero() {
            continue;
        }
        // p(y | x_K, x_S) / p(y | x_K) = N q^{st} / Σ_{x_S} N
        let ratio = v * &sensitive_size / &marginal[&(*kx, *y)];
        info += v.to_f64().unwrap() / total * log(&ratio, enc.q);
    }
    Ok(info.max(0.0))
}

/// Two tuples sharing a codeword that some receiver cannot tell apart.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Confusion {
    pub x: usize,
    pub z: usize,
    /// 0-based receiver index.
    pub receiver: usize,
}

/// `None` when the code is valid, otherwise the first conflict found
/// scanning tuples in order.
pub fn validate_encoder(enc: &EncoderTable, inst: &Instance) -> Result<Option<Confusion>, LeakageError> {
    enc.check_instance(inst)?;
    let space = enc.space();
    // (receiver, symbol, codeword, side information) -> first tuple seen
    let mut seen: HashMap<(usize, usize, usize, usize), usize> = HashMap::new();
    let per_symbol: Vec<(usize, usize, Vec<usize>, Vec<usize>)> = inst
        .receivers()
        .iter()
        .enumerate()
        .filter(|(_, r)| !r.is_degenerate())
        .flat_map(|(i, r)| {
            let space = &space;
            (0..enc.t).map(move |s| {
                let w = r.wants.iter().map(|&j| space.coordinate(j, s)).collect();
                let a = r.has.iter().map(|&j| space.coordinate(j, s)).collect();
                (i, s, w, a)
            })
        })
        .collect();
    for z in 0..space.size() {
        for y in enc.support(z) {
            for (i, s, w, a) in &per_symbol {
                let key = (*i, *s, y, space.project(z, a));
                match seen.get(&key) {
                    Some(&x) if space.project(x, w) != space.project(z, w) => {
                        return Ok(Some(Confusion { x, z, receiver: *i }));
                    }
                    Some(_) => {}
                    None => {
                        seen.insert(key, z);
                    }
                }
            }
        }
    }
    Ok(None)
}

/// Wanted values of receiver `i` from the codeword and its side
/// information. Values are listed symbol by symbol, messages ascending
/// within a symbol.
pub fn decode_receiver(enc: &EncoderTable, inst: &Instance, i: usize, y: usize, side_info: &[u32]) -> Result<Vec<u32>, LeakageError> {
    enc.check_instance(inst)?;
    let r = inst.receivers().get(i).ok_or(LeakageError::NoSuchReceiver(i))?;
    if y >= enc.codeword_count {
        return Err(LeakageError::NoSuchCodeword(y));
    }
    let space = enc.space();
    let a = space.coords_of(&r.has);
    if side_info.len() != a.len() {
        return Err(LeakageError::SideInfoLength { got: side_info.len(), expected: a.len() });
    }
    let w = space.coords_of(&r.wants);
    let mut found: Vec<Vec<u32>> = Vec::new();
    for x in 0..space.size() {
        if enc.support(x).any(|c| c == y) && space.project_digits(x, &a) == side_info {
            let v = space.project_digits(x, &w);
            if !found.contains(&v) {
                found.push(v);
            }
        }
    }
    match found.len() {
        0 => Err(LeakageError::Inconsistent),
        1 => Ok(found.pop().unwrap()),
        candidates => Err(LeakageError::Ambiguous { candidates }),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum BoundBacking {
    /// `β` of the extended subproblem from its independence number.
    Exact { messages: usize, alpha: usize },
    /// Acyclic-subset size, used when the confusion graph is too large.
    Mais { size: usize },
}

#[derive(Debug, Clone, PartialEq)]
pub struct LowerBound {
    /// `β(Γ̃(S ∪ U)) - u` in q-ary units.
    pub value: f64,
    /// Set when the bound is an integer.
    pub exact: Option<i64>,
    pub backing: BoundBacking,
    pub u: usize,
}

/// Lower bound on the optimal leakage rate from the instance extended with
/// a receiver that knows `K ∪ S` and wants `U`, restricted to `S ∪ U`.
pub fn theorem2_lower_bound(inst: &Instance, split: &AdversarySplit) -> Result<LowerBound, LeakageError> {
    let sub = adversary_subproblem(inst, split)?;
    let u = split.u();
    match beta_exact(&sub) {
        Ok(b) => Ok(LowerBound {
            value: b.beta - u as f64,
            exact: b.exact.map(|e| e - u as i64),
            backing: BoundBacking::Exact { messages: b.messages, alpha: b.alpha },
            u,
        }),
        Err(RateError::Graph(GraphError::VertexCap { .. })) => {
            let m = mais_bound(&sub.normalize_singleton_wants())?;
            let exact = m.size as i64 - u as i64;
            Ok(LowerBound { value: exact as f64, exact: Some(exact), backing: BoundBacking::Mais { size: m.size }, u })
        }
        Err(e) => Err(e.into()),
    }
}

fn adversary_subproblem(inst: &Instance, split: &AdversarySplit) -> Result<Instance, LeakageError> {
    if split.message_count() != inst.message_count() {
        return Err(LeakageError::Mismatch { enc_q: inst.q(), enc_n: split.message_count(), q: inst.q(), n: inst.message_count() });
    }
    let extended = inst.extend_with_adversary_receiver(split);
    Ok(extended.induce_subproblem(&split.unknown()).expect("split messages are in range").instance)
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExhaustiveOutcome {
    pub leakage: LeakageResult,
    pub witness: EncoderTable,
    /// Assignment steps explored.
    pub nodes: u64,
    /// The optimum met the independence-number floor, ending the search early.
    pub reached_floor: bool,
}

/// Confusion-graph adjacency of `Γ_1` as bitmasks over at most 64 tuples.
fn small_adjacency(inst: &Instance) -> Result<(TupleSpace, Vec<u64>), LeakageError> {
    let space = tuple_space(inst.q(), inst.message_count(), 1, EXHAUSTIVE_TUPLE_CAP)?;
    let g = ConfusionGraph::build(inst, 1)?;
    let adj = (0..space.size())
        .map(|x| g.connection_set().iter().fold(0u64, |m, &d| m | 1 << space.add(x, d)))
        .collect();
    Ok((space, adj))
}

struct PartitionSearch<'a> {
    adj: &'a [u64],
    /// x_K index and x_S index per tuple
    kidx: Vec<usize>,
    sidx: Vec<usize>,
    k_values: usize,
    s_values: usize,
    /// `q^u`: every x_K value contributes at least this much.
    floor_per_k: u64,
    class_nbrs: Vec<u64>,
    /// counts[(class * k_values + a) * s_values + xs]
    counts: Vec<u32>,
    /// maxes[class * k_values + a]
    maxes: Vec<u32>,
    /// remaining[a * s_values + xs]
    remaining: Vec<u32>,
    assign: Vec<usize>,
    best: u64,
    best_assign: Option<Vec<usize>>,
    stop_at: u64,
    nodes: u64,
    budget: u64,
}

impl PartitionSearch<'_> {
    fn lower_bound(&self) -> u64 {
        let classes = self.class_nbrs.len();
        let mut total = 0u64;
        for a in 0..self.k_values {
            let mut sum_max = 0u64;
            for c in 0..classes {
                sum_max += self.maxes[c * self.k_values + a] as u64;
            }
            let mut extra = 0u64;
            for xs in 0..self.s_values {
                let r = self.remaining[a * self.s_values + xs] as u64;
                if r == 0 {
                    continue;
                }
                let mut slack = 0u64;
                for c in 0..classes {
                    let m = self.maxes[c * self.k_values + a];
                    slack += (m - self.counts[(c * self.k_values + a) * self.s_values + xs]) as u64;
                }
                extra = extra.max(r.saturating_sub(slack));
            }
            total += (sum_max + extra).max(self.floor_per_k);
        }
        total
    }

    fn place(&mut self, v: usize, c: usize) -> u32 {
        let (a, xs) = (self.kidx[v], self.sidx[v]);
        let slot = (c * self.k_values + a) * self.s_values + xs;
        self.counts[slot] += 1;
        let old = self.maxes[c * self.k_values + a];
        self.maxes[c * self.k_values + a] = old.max(self.counts[slot]);
        self.remaining[a * self.s_values + xs] -= 1;
        self.assign[v] = c;
        old
    }

    fn unplace(&mut self, v: usize, c: usize, old_max: u32) {
        let (a, xs) = (self.kidx[v], self.sidx[v]);
        self.counts[(c * self.k_values + a) * self.s_values + xs] -= 1;
        self.maxes[c * self.k_values + a] = old_max;
        self.remaining[a * self.s_values + xs] += 1;
    }

    fn open_class(&mut self) {
        self.class_nbrs.push(0);
        self.counts.extend(std::iter::repeat_n(0, self.k_values * self.s_values));
        self.maxes.extend(std::iter::repeat_n(0, self.k_values));
    }

    fn close_class(&mut self) {
        self.class_nbrs.pop();
        self.counts.truncate(self.class_nbrs.len() * self.k_values * self.s_values);
        self.maxes.truncate(self.class_nbrs.len() * self.k_values);
    }

    /// Returns true once the search can stop.
    fn go(&mut self, v: usize) -> Result<bool, LeakageError> {
        if v == self.adj.len() {
            let value: u64 = self.maxes.iter().map(|&m| m as u64).sum();
            if value < self.best {
                self.best = value;
                self.best_assign = Some(self.assign.clone());
            }
            return Ok(self.best <= self.stop_at);
        }
        let bit = 1u64 << v;
        for c in 0..=self.class_nbrs.len() {
            let fresh = c == self.class_nbrs.len();
            if !fresh && self.class_nbrs[c] & bit != 0 {
                continue;
            }
            self.nodes += 1;
            if self.nodes > self.budget {
                return Err(LeakageError::NodeBudget(self.budget));
            }
            if fresh {
                self.open_class();
            }
            let old_max = self.place(v, c);
            let old_nbrs = self.class_nbrs[c];
            self.class_nbrs[c] |= self.adj[v];
            let done = if self.lower_bound() < self.best { self.go(v + 1)? } else { false };
            self.class_nbrs[c] = old_nbrs;
            self.unplace(v, c, old_max);
            if fresh {
                self.close_class();
            }
            if done {
                return Ok(true);
            }
        }
        Ok(false)
    }
}

/// Least leakage over all deterministic single-symbol codes, searching
/// partitions of the tuples into confusion-free codeword classes.
///
/// The optimum is exact for single-symbol deterministic codes and so an
/// upper bound on the optimal leakage rate. `incumbent`, if given, must be a
/// valid code; the search only reports codes that beat it, and returns it
/// when none does.
pub fn exhaustive_min_det_leakage_t1(
    inst: &Instance,
    split: &AdversarySplit,
    incumbent: Option<&EncoderTable>,
    budget: u64,
) -> Result<ExhaustiveOutcome, LeakageError> {
    let (space, adj) = small_adjacency(inst)?;
    let sub = adversary_subproblem(inst, split)?;
    let alpha_tilde = ConfusionGraph::build(&sub, 1)?.max_independent_set()?.size as u64;

    let q = inst.q() as u64;
    let k_coords = space.coords_of(split.known());
    let s_coords = space.coords_of(split.sensitive());
    let k_values = q.pow(split.k() as u32) as usize;
    let s_values = q.pow(split.s() as u32) as usize;
    let unknown_values = q.pow((split.s() + split.u()) as u32);
    // Each x_K slice splits into classes; in each, the tuples agreeing on
    // x_S with distinct x_U form an independent set of the extended graph.
    let floor_per_k = q.pow(split.u() as u32).max(unknown_values.div_ceil(alpha_tilde));

    let mut search = PartitionSearch {
        adj: &adj,
        kidx: (0..space.size()).map(|x| space.project(x, &k_coords)).collect(),
        sidx: (0..space.size()).map(|x| space.project(x, &s_coords)).collect(),
        k_values,
        s_values,
        floor_per_k,
        class_nbrs: Vec::new(),
        counts: Vec::new(),
        maxes: Vec::new(),
        remaining: vec![0; k_values * s_values],
        assign: vec![usize::MAX; space.size()],
        best: u64::MAX,
        best_assign: None,
        stop_at: floor_per_k * k_values as u64,
        nodes: 0,
        budget,
    };
    for x in 0..space.size() {
        search.remaining[search.kidx[x] * s_values + search.sidx[x]] += 1;
    }

    let mut witness = None;
    if let Some(enc) = incumbent {
        if enc.is_deterministic() && enc.block_length() == 1 {
            search.best = guessing_mass(enc, split).to_integer().to_u64().expect("mass of a deterministic code is an integer");
            witness = Some(enc.clone());
        }
    }
    let reached_floor = search.best <= search.stop_at || search.go(0)?;
    if let Some(assign) = search.best_assign.take() {
        witness = Some(EncoderTable::deterministic(inst.q(), inst.message_count(), 1, assign)?);
    }
    let witness = witness.expect("some partition is always found without an incumbent");
    let q_l = Rational::new(BigInt::from(search.best), BigInt::from(q.pow((split.k() + split.u()) as u32)));
    Ok(ExhaustiveOutcome { leakage: LeakageResult::new(inst.q(), 1, q_l, LeakageMethod::Oracle), witness, nodes: search.nodes, reached_floor })
}

/// Calls `visit` with every valid single-symbol deterministic code using
/// exactly `classes` codewords, one per partition of the tuples.
pub fn for_each_valid_code(inst: &Instance, classes: usize, mut visit: impl FnMut(&EncoderTable)) -> Result<u64, LeakageError> {
    let (_, adj) = small_adjacency(inst)?;
    fn go(adj: &[u64], v: usize, want: usize, nbrs: &mut Vec<u64>, assign: &mut Vec<usize>, out: &mut dyn FnMut(&[usize])) {
        if adj.len() - v < want - nbrs.len() {
            return;
        }
        if v == adj.len() {
            out(assign);
            return;
        }
        for c in 0..nbrs.len() {
            if nbrs[c] & 1 << v == 0 {
                let old = nbrs[c];
                nbrs[c] |= adj[v];
                assign[v] = c;
                go(adj, v + 1, want, nbrs, assign, out);
                nbrs[c] = old;
            }
        }
        if nbrs.len() < want {
            nbrs.push(adj[v]);
            assign[v] = nbrs.len() - 1;
            go(adj, v + 1, want, nbrs, assign, out);
            nbrs.pop();
        }
    }
    let mut count = 0u64;
    let (q, n) = (inst.q(), inst.message_count());
    let mut assign = vec![0; adj.len()];
    go(&adj, 0, classes, &mut Vec::new(), &mut assign, &mut |a| {
        count += 1;
        let enc = EncoderTable::deterministic_with_count(q, n, 1, classes, a.to_vec()).expect("partition covers every tuple");
        visit(&enc);
    });
    Ok(count)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::PrimeField;
    use crate::instance::{parse_instance, Receiver};
    use crate::rational::int;

    fn gf2() -> PrimeField {
        PrimeField::binary()
    }

    const EXAMPLE1: &str = r#"{"q":2,"n":5,"receivers":[{"wants":[1],"has":[4,5]},{"wants":[2],"has":[1]},
        {"wants":[3],"has":[2]},{"wants":[4],"has":[3]},{"wants":[5],"has":[4]}],
        "adversary":{"knows":[5],"sensitive":[1,3],"nonsensitive":[2,4]}}"#;
    const EXAMPLE2: &str = r#"{"q":2,"n":4,"receivers":[{"wants":[1],"has":[2,3]},{"wants":[2],"has":[1,4]}],
        "adversary":{"sensitive":[1,2],"nonsensitive":[3,4]}}"#;

    fn split(n: usize, k: &[usize], s: &[usize], u: &[usize]) -> AdversarySplit {
        let set = |v: &[usize]| v.iter().copied().collect();
        AdversarySplit::new(n, set(k), set(s), set(u)).unwrap()
    }

    fn figure1_split() -> AdversarySplit {
        split(4, &[], &[0, 1], &[2, 3])
    }

    fn matrix(cols: usize, rows: &[&[u32]]) -> MatrixGF {
        MatrixGF::from_rows(gf2(), cols, rows).unwrap()
    }

    fn figure2() -> Instance {
        Instance::new(gf2(), 2, vec![Receiver::new([0], [1]), Receiver::new([1], [0])]).unwrap()
    }

    fn example1_m() -> MatrixGF {
        matrix(5, &[&[1, 0, 0, 1, 0], &[1, 1, 0, 0, 0], &[0, 1, 1, 0, 0], &[0, 0, 1, 1, 0], &[0, 0, 0, 0, 1]])
    }

    fn r(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    #[test]
    fn prior_success_values() {
        assert_eq!(prior_success(&figure1_split(), 2, 1), r(1, 4));
        assert_eq!(prior_success(&split(1, &[], &[0], &[]), 3, 1), r(1, 3));
        assert_eq!(prior_success(&figure1_split(), 2, 2), r(1, 16));
    }

    #[test]
    fn figure1_codes() {
        let y = EncoderTable::from_linear(&matrix(4, &[&[1, 1, 0, 0], &[0, 0, 1, 1]]), 4).unwrap();
        let l = oracle_leakage(&y, &figure1_split()).unwrap();
        assert_eq!(l.q_l, int(2));
        assert_eq!(l.leakage, 1.0);
        assert_eq!(posterior_success(&y, &figure1_split()).unwrap(), r(1, 2));

        let y_tilde = EncoderTable::from_linear(&matrix(4, &[&[1, 0, 1, 0], &[0, 1, 0, 1]]), 4).unwrap();
        let l = oracle_leakage(&y_tilde, &figure1_split()).unwrap();
        assert_eq!(l.q_l, int(1));
        assert_eq!(l.leakage, 0.0);
        assert_eq!(mutual_info_leakage(&y_tilde, &figure1_split()).unwrap(), 0.0);
    }

    #[test]
    fn full_reveal_leaks_everything() {
        for t in 1..=2 {
            let sp = TupleSpace::new(2, 3, t, 1 << 10).unwrap();
            let enc = EncoderTable::deterministic(2, 3, t, (0..sp.size()).collect()).unwrap();
            let s = split(3, &[0], &[1], &[2]);
            let l = oracle_leakage(&enc, &s).unwrap();
            assert_eq!(l.q_l, power(2, t as i64));
            assert_eq!(l.rate, 1.0);
            assert_eq!(posterior_success(&enc, &s).unwrap(), int(1));
            assert!((mutual_info_leakage(&enc, &s).unwrap() - t as f64).abs() < 1e-12);
        }
    }

    #[test]
    fn linear_formula_examples() {
        let (_, s1) = parse_instance(EXAMPLE1).unwrap();
        let e1 = example1_m().row_basis();
        assert_eq!(linear_leakage(&e1, &s1).unwrap().q_l, int(2));
        let enc = EncoderTable::from_linear(&e1, 5).unwrap();
        assert_eq!(oracle_leakage(&enc, &s1).unwrap().q_l, int(2));
        assert!((mutual_info_leakage(&enc, &s1).unwrap() - 1.0).abs() < 1e-12);

        let (_, s2) = parse_instance(EXAMPLE2).unwrap();
        let l = linear_leakage(&matrix(4, &[&[1, 1, 0, 0]]), &s2).unwrap();
        assert_eq!((l.q_l.clone(), l.method), (int(2), LeakageMethod::Formula));

        let empty = MatrixGF::zeros(gf2(), 0, 4);
        assert_eq!(linear_leakage(&empty, &s2).unwrap().leakage, 0.0);
        assert!(matches!(linear_leakage(&matrix(3, &[&[1, 0, 0]]), &s2), Err(LeakageError::ColumnMismatch { .. })));
    }

    #[test]
    fn stochastic_kernel_mixing_two_codes() {
        // Half the time send the leaky code, half the time the safe one.
        let leaky = EncoderTable::from_linear(&matrix(4, &[&[1, 1, 0, 0], &[0, 0, 1, 1]]), 4).unwrap();
        let safe = EncoderTable::from_linear(&matrix(4, &[&[1, 0, 1, 0], &[0, 1, 0, 1]]), 4).unwrap();
        let half = r(1, 2);
        let rows = (0..16)
            .map(|x| vec![(leaky.outputs(x)[0].0, half.clone()), (4 + safe.outputs(x)[0].0, half.clone())])
            .collect();
        let enc = EncoderTable::stochastic(2, 4, 1, 8, rows).unwrap();
        let l = oracle_leakage(&enc, &figure1_split()).unwrap();
        // brute force: Σ_y max_{x_S} Σ_{x_U} w(y|x)
        let mut expected = Rational::zero();
        for y in 0..8 {
            let mut best = Rational::zero();
            for xs in 0..4usize {
                let mut acc = Rational::zero();
                for xu in 0..4usize {
                    let x = xs * 4 + xu;
                    for (c, w) in enc.outputs(x) {
                        if c == y {
                            acc += w;
                        }
                    }
                }
                best = best.max(acc);
            }
            expected += best;
        }
        assert_eq!(l.q_l, expected * r(1, 4));
        assert!(l.q_l >= int(1));

        let round = EncoderTable::from_json(&enc.to_json()).unwrap();
        assert_eq!(round, enc);
    }

    #[test]
    fn invalid_kernels_rejected() {
        let rows = vec![vec![(0, r(1, 2))]; 2];
        assert!(matches!(EncoderTable::stochastic(2, 1, 1, 1, rows), Err(LeakageError::InvalidKernel(_))));
        let rows = vec![vec![(0, r(3, 2)), (1, r(-1, 2))]; 2];
        assert!(matches!(EncoderTable::stochastic(2, 1, 1, 2, rows), Err(LeakageError::InvalidKernel(_))));
        assert!(matches!(EncoderTable::deterministic(2, 2, 1, vec![0; 3]), Err(LeakageError::TableLength { .. })));
        assert!(matches!(EncoderTable::deterministic_with_count(2, 1, 1, 1, vec![0, 1]), Err(LeakageError::CodewordOutOfRange { .. })));
        assert!(matches!(EncoderTable::constant(2, 21, 1), Err(LeakageError::TupleCap { .. })));
        assert!(EncoderTable::from_json(r#"{"kind":"deterministic","q":2,"n":1,"t":1,"codeword_count":1,"codewords":[0,3]}"#).is_err());
    }

    #[test]
    fn deterministic_json_shape() {
        let enc = EncoderTable::from_linear(&matrix(2, &[&[1, 1]]), 2).unwrap();
        assert_eq!(enc.to_json(), r#"{"kind":"deterministic","q":2,"n":2,"t":1,"codeword_count":2,"codewords":[0,1,1,0]}"#);
    }

    #[test]
    fn validation() {
        let (inst1, _) = parse_instance(EXAMPLE1).unwrap();
        let enc = EncoderTable::from_linear(&example1_m().row_basis(), 5).unwrap();
        assert_eq!(validate_encoder(&enc, &inst1).unwrap(), None);

        let constant = EncoderTable::constant(2, 2, 1).unwrap();
        let c = validate_encoder(&constant, &figure2()).unwrap().unwrap();
        let sp = constant.space();
        assert_eq!((sp.label(c.x), sp.label(c.z), c.receiver + 1), ("00".to_string(), "01".to_string(), 2));

        let nobody = Instance::new(gf2(), 2, vec![]).unwrap();
        assert_eq!(validate_encoder(&constant, &nobody).unwrap(), None);
        assert!(matches!(validate_encoder(&constant, &inst1), Err(LeakageError::Mismatch { .. })));
    }

    #[test]
    fn validation_matches_definition() {
        // Brute force over all pairs for every 2-codeword code of Figure 2
        // and a few block-length-2 tables.
        let inst = figure2();
        for t in 1..=2 {
            let sp = TupleSpace::new(2, 2, t, 1 << 10).unwrap();
            for pattern in 0u32..64 {
                let table: Vec<usize> = (0..sp.size()).map(|x| ((pattern >> (x % 6)) & 1) as usize).collect();
                let enc = EncoderTable::deterministic_with_count(2, 2, t, 2, table.clone()).unwrap();
                let brute = (0..sp.size()).any(|x| {
                    (0..sp.size()).any(|z| table[x] == table[z] && crate::graph::confusing_receiver(&inst, &sp, x, z).is_some())
                });
                assert_eq!(validate_encoder(&enc, &inst).unwrap().is_some(), brute, "t={t} pattern={pattern}");
            }
        }
    }

    #[test]
    fn decoding() {
        let (inst1, _) = parse_instance(EXAMPLE1).unwrap();
        let enc = EncoderTable::from_linear(&example1_m().row_basis(), 5).unwrap();
        let sp = enc.space();
        let EncoderKind::Deterministic(table) = enc.kind() else { unreachable!() };
        for (x, &y) in table.iter().enumerate() {
            let d = sp.digits(x);
            assert_eq!(decode_receiver(&enc, &inst1, 1, y, &[d[0]]).unwrap(), vec![d[1]]);
        }

        let xor = EncoderTable::from_linear(&matrix(2, &[&[1, 1]]), 2).unwrap();
        for x in 0..4 {
            let d = xor.space().digits(x);
            let y = (d[0] ^ d[1]) as usize;
            assert_eq!(decode_receiver(&xor, &figure2(), 0, y, &[d[1]]).unwrap(), vec![y as u32 ^ d[1]]);
        }

        let degenerate = Instance::new(gf2(), 2, vec![Receiver::new([], [0, 1])]).unwrap();
        assert_eq!(decode_receiver(&xor, &degenerate, 0, 1, &[0, 1]).unwrap(), Vec::<u32>::new());

        let constant = EncoderTable::constant(2, 2, 1).unwrap();
        assert_eq!(decode_receiver(&constant, &figure2(), 0, 0, &[0]), Err(LeakageError::Ambiguous { candidates: 2 }));
        assert_eq!(decode_receiver(&xor, &degenerate, 0, 0, &[0, 1]), Err(LeakageError::Inconsistent));
        assert_eq!(decode_receiver(&xor, &figure2(), 0, 5, &[0]), Err(LeakageError::NoSuchCodeword(5)));
        assert_eq!(decode_receiver(&xor, &figure2(), 0, 0, &[]), Err(LeakageError::SideInfoLength { got: 0, expected: 1 }));
    }

    #[test]
    fn lower_bound_examples() {
        let (inst, s) = parse_instance(EXAMPLE1).unwrap();
        let b = theorem2_lower_bound(&inst, &s).unwrap();
        assert_eq!(b.exact, Some(1));
        assert_eq!(b.backing, BoundBacking::Exact { messages: 4, alpha: 2 });

        // U = ∅: extra receiver is degenerate, bound is β(Γ(S))
        let s = split(5, &[4], &[0, 1, 2, 3], &[]);
        let b = theorem2_lower_bound(&inst, &s).unwrap();
        let direct = beta_exact(&inst.induce_subproblem(&[0, 1, 2, 3].into()).unwrap().instance).unwrap();
        assert_eq!(b.exact, direct.exact);

        let nobody = Instance::new(gf2(), 3, vec![]).unwrap();
        let b = theorem2_lower_bound(&nobody, &split(3, &[], &[0, 1, 2], &[])).unwrap();
        assert_eq!((b.exact, b.value), (Some(0), 0.0));
    }

    #[test]
    fn lower_bound_falls_back_to_mais() {
        let n = 21;
        let inst = Instance::new(gf2(), n, (0..n).map(|i| Receiver::new([i], [])).collect()).unwrap();
        let s = split(n, &[], &(0..n).collect::<Vec<_>>(), &[]);
        let b = theorem2_lower_bound(&inst, &s).unwrap();
        assert_eq!(b.backing, BoundBacking::Mais { size: n });
        assert_eq!(b.exact, Some(n as i64));
    }

    /// Every deterministic map from tuples to codeword ids, up to relabeling,
    /// with no pruning at all.
    fn brute_min_leakage(inst: &Instance, s: &AdversarySplit) -> Rational {
        let size = (inst.q() as usize).pow(inst.message_count() as u32);
        let mut best: Option<Rational> = None;
        let mut assign = vec![0usize; size];
        fn rec(v: usize, classes: usize, assign: &mut Vec<usize>, f: &mut dyn FnMut(&[usize], usize)) {
            if v == assign.len() {
                f(assign, classes);
                return;
            }
            for c in 0..=classes {
                assign[v] = c;
                rec(v + 1, classes.max(c + 1), assign, f);
            }
        }
        rec(0, 0, &mut assign, &mut |a, classes| {
            let enc = EncoderTable::deterministic_with_count(inst.q(), inst.message_count(), 1, classes, a.to_vec()).unwrap();
            if validate_encoder(&enc, inst).unwrap().is_none() {
                let l = oracle_leakage(&enc, s).unwrap().q_l;
                if best.as_ref().is_none_or(|b| l < *b) {
                    best = Some(l);
                }
            }
        });
        best.unwrap()
    }

    #[test]
    fn exhaustive_examples() {
        let (inst, s) = parse_instance(EXAMPLE2).unwrap();
        let out = exhaustive_min_det_leakage_t1(&inst, &s, None, DEFAULT_NODE_BUDGET).unwrap();
        assert_eq!(out.leakage.q_l, int(1));
        assert_eq!(validate_encoder(&out.witness, &inst).unwrap(), None);

        let out = exhaustive_min_det_leakage_t1(&figure2(), &split(2, &[], &[0], &[1]), None, DEFAULT_NODE_BUDGET).unwrap();
        assert_eq!(out.leakage.q_l, int(1));
        assert_eq!(brute_min_leakage(&figure2(), &split(2, &[], &[0], &[1])), int(1));

        let nobody = Instance::new(gf2(), 3, vec![]).unwrap();
        let out = exhaustive_min_det_leakage_t1(&nobody, &split(3, &[0], &[1], &[2]), None, DEFAULT_NODE_BUDGET).unwrap();
        assert_eq!(out.leakage.q_l, int(1));
        assert_eq!(out.witness.codeword_count(), 1);
    }

    #[test]
    fn exhaustive_matches_unpruned_enumeration() {
        let mut checked = 0;
        for seed in 0..400 {
            let (inst, s) = crate::testgen::random_instance(seed);
            if (inst.q() as usize).pow(inst.message_count() as u32) > 8 {
                continue;
            }
            let out = exhaustive_min_det_leakage_t1(&inst, &s, None, DEFAULT_NODE_BUDGET).unwrap();
            assert_eq!(out.leakage.q_l, brute_min_leakage(&inst, &s), "seed {seed}");
            assert_eq!(oracle_leakage(&out.witness, &s).unwrap().q_l, out.leakage.q_l);
            assert_eq!(validate_encoder(&out.witness, &inst).unwrap(), None);
            checked += 1;
        }
        assert!(checked >= 20, "only {checked} small instances");
    }

    #[test]
    fn exhaustive_budget_and_cap() {
        let (inst, s) = parse_instance(EXAMPLE1).unwrap();
        let tiny = exhaustive_min_det_leakage_t1(&inst, &split(5, &[], &[0, 1], &[2, 3, 4]), None, 3);
        assert_eq!(tiny, Err(LeakageError::NodeBudget(3)));
        let big = Instance::new(gf2(), 7, vec![]).unwrap();
        assert!(matches!(
            exhaustive_min_det_leakage_t1(&big, &split(7, &[], &[0], &[1, 2, 3, 4, 5, 6]), None, 10),
            Err(LeakageError::TupleCap { .. })
        ));
        let out = exhaustive_min_det_leakage_t1(&inst, &s, None, DEFAULT_NODE_BUDGET).unwrap();
        assert_eq!(out.leakage.q_l, int(2));
    }

    #[test]
    fn incumbent_is_kept_when_optimal() {
        let (inst, s) = parse_instance(EXAMPLE2).unwrap();
        let m_tilde = matrix(4, &[&[1, 0, 1, 0], &[0, 1, 0, 1]]);
        let enc = EncoderTable::from_linear(&m_tilde, 4).unwrap();
        let out = exhaustive_min_det_leakage_t1(&inst, &s, Some(&enc), DEFAULT_NODE_BUDGET).unwrap();
        assert_eq!(out.witness, enc);
        assert!(out.reached_floor);
        assert_eq!(out.nodes, 0);
    }

    #[test]
    fn two_codeword_codes_of_example2_all_leak() {
        let (inst, s) = parse_instance(EXAMPLE2).unwrap();
        let mut least: Option<Rational> = None;
        let count = for_each_valid_code(&inst, 2, |enc| {
            assert_eq!(validate_encoder(enc, &inst).unwrap(), None);
            let l = oracle_leakage(enc, &s).unwrap().q_l;
            least = Some(least.take().map_or(l.clone(), |b: Rational| b.min(l)));
        })
        .unwrap();
        assert!(count > 0);
        assert!(least.unwrap() >= int(2));
    }
}
