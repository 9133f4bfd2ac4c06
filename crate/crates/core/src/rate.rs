//! Broadcast-rate quantities: the exact rate from the independence number of
//! the confusion graph, the acyclic-subset (MAIS) lower bound and the
//! minrank upper bound.

use thiserror::Error;

use crate::fitting::{search_min, FittingPattern, Objective, SearchError, SearchLimits, SearchOutcome};
use crate::graph::{ConfusionGraph, GraphError};
use crate::instance::Instance;
use crate::rational::{exact_log, int};

/// Largest message count the subset DP accepts.
pub const MAIS_MAX_MESSAGES: usize = 24;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RateError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Search(#[from] SearchError),
    #[error("{n} messages exceed the acyclic-subset limit of {max}")]
    TooManyMessages { n: usize, max: usize },
}

/// `β = n - log_q α(Γ_1)` together with the integers it came from.
#[derive(Debug, Clone, PartialEq)]
pub struct BetaExact {
    pub messages: usize,
    pub q: u32,
    pub alpha: usize,
    pub beta: f64,
    /// Set when `α` is a power of `q`.
    pub exact: Option<i64>,
}

pub fn beta_exact(inst: &Instance) -> Result<BetaExact, RateError> {
    let g = ConfusionGraph::build(inst, 1)?;
    let alpha = g.max_independent_set()?.size;
    Ok(beta_from_alpha(inst.message_count(), inst.q(), alpha))
}

pub fn beta_from_alpha(messages: usize, q: u32, alpha: usize) -> BetaExact {
    let exact = exact_log(&int(alpha as i64), q).map(|e| messages as i64 - e);
    let beta = match exact {
        Some(b) => b as f64,
        None => messages as f64 - (alpha as f64).ln() / (q as f64).ln(),
    };
    BetaExact { messages, q, alpha, beta, exact }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MaisBound {
    pub size: usize,
    /// Messages in decoding order.
    pub order: Vec<usize>,
    /// Receiver used for each message in `order`.
    pub receivers: Vec<usize>,
}

impl MaisBound {
    /// Replays the ordering: receiver `receivers[k]` wants `order[k]` and
    /// every side-information message it has inside the set comes earlier.
    pub fn verify(&self, inst: &Instance) -> bool {
        if self.order.len() != self.size || self.receivers.len() != self.size {
            return false;
        }
        let set: std::collections::BTreeSet<usize> = self.order.iter().copied().collect();
        if set.len() != self.size {
            return false;
        }
        self.order.iter().zip(&self.receivers).enumerate().all(|(k, (&j, &i))| {
            let Some(r) = inst.receivers().get(i) else { return false };
            r.wants.contains(&j) && r.has.iter().filter(|a| set.contains(a)).all(|a| self.order[..k].contains(a))
        })
    }
}

/// Largest message set with a decoding order in which each message has a
/// receiver whose side information inside the set is already decoded.
///
/// Subsets are solved bottom-up: `J` qualifies iff some `j ∈ J` has a
/// receiver wanting `j` with no side information in `J`, and `J \ {j}`
/// qualifies; `j` then goes first in the order.
pub fn mais_bound(inst: &Instance) -> Result<MaisBound, RateError> {
    let n = inst.message_count();
    if n > MAIS_MAX_MESSAGES {
        return Err(RateError::TooManyMessages { n, max: MAIS_MAX_MESSAGES });
    }
    // (side-information mask, receiver) per wanted message
    let mut wanting: Vec<Vec<(u32, usize)>> = vec![Vec::new(); n];
    for (i, r) in inst.receivers().iter().enumerate() {
        let has = r.has.iter().fold(0u32, |m, &a| m | 1 << a);
        for &j in &r.wants {
            wanting[j].push((has, i));
        }
    }
    let full = 1usize << n;
    // first[J] = 1 + message peeled first from J, 0 if J fails
    let mut first: Vec<u8> = vec![0; full];
    let mut best = 0usize;
    for set in 1..full {
        let mut bits = set;
        while bits != 0 {
            let j = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            let rest = set & !(1 << j);
            if rest != 0 && first[rest] == 0 {
                continue;
            }
            if wanting[j].iter().any(|&(has, _)| has as usize & set == 0) {
                first[set] = j as u8 + 1;
                break;
            }
        }
        if first[set] != 0 && set.count_ones() as usize > best.count_ones() as usize {
            best = set;
        }
    }
    let mut order = Vec::new();
    let mut receivers = Vec::new();
    let mut set = best;
    while set != 0 {
        let j = first[set] as usize - 1;
        order.push(j);
        receivers.push(wanting[j].iter().find(|&&(has, _)| has as usize & set == 0).unwrap().1);
        set &= !(1 << j);
    }
    Ok(MaisBound { size: order.len(), order, receivers })
}

/// Minimum rank over the fitting matrices of `inst`.
pub fn minrank(inst: &Instance, limits: &SearchLimits) -> Result<SearchOutcome, RateError> {
    Ok(search_min(&FittingPattern::from_instance(inst), &Objective::Rank, limits)?)
}

#[derive(Debug, Clone, PartialEq)]
pub struct RateReport {
    pub beta: BetaExact,
    pub mais: MaisBound,
    pub minrank: Option<SearchOutcome>,
}

impl RateReport {
    /// `mais ≤ β ≤ minrank`, compared exactly where `β` is an integer.
    pub fn is_consistent(&self) -> bool {
        let lower_ok = match self.beta.exact {
            Some(b) => self.mais.size as i64 <= b,
            None => (self.mais.size as f64) < self.beta.beta,
        };
        let upper_ok = match (&self.minrank, self.beta.exact) {
            (None, _) => true,
            (Some(m), Some(b)) => b <= m.value as i64,
            (Some(m), None) => self.beta.beta < m.value as f64,
        };
        lower_ok && upper_ok
    }
}

/// All three rate quantities; minrank is skipped when `limits` is `None`.
pub fn rate_report(inst: &Instance, limits: Option<&SearchLimits>) -> Result<RateReport, RateError> {
    let beta = beta_exact(inst)?;
    let mais = mais_bound(&inst.normalize_singleton_wants())?;
    let minrank = limits.map(|l| minrank(inst, l)).transpose()?;
    Ok(RateReport { beta, mais, minrank })
}
