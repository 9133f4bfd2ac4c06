//! Serialized analysis and graph reports.
//!
//! Reals are rounded to 12 significant digits before they are stored, so a
//! report read back from JSON serializes to the same bytes. Exact rationals
//! are `{"num": "...", "den": "..."}` pairs.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use icleak_core::leakage::EncoderTable;
use icleak_core::rational::RationalRepr;
use icleak_core::InstanceDocument;
use serde::{Deserialize, Serialize};

pub const REPORT_SCHEMA: &str = "icleak.report/v1";
pub const GRAPH_SCHEMA: &str = "icleak.graph/v1";
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

/// `x` rounded to 12 significant digits.
pub fn round_real(x: f64) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return x.abs();
    }
    format!("{x:.11e}").parse().expect("formatted float parses")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Units {
    #[serde(rename = "q-ary")]
    QAry,
    #[serde(rename = "bits")]
    Bits,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AnalysisReport {
    pub schema: String,
    pub tool_version: String,
    pub instance: InstanceDocument,
    pub limits: LimitsUsed,
    /// Unit of every leakage value; rates are always in q-ary symbols.
    pub units: Units,
    pub rate: RateSection,
    pub leakage: LeakageSection,
    pub bracket: Bracket,
    pub timing_ms: BTreeMap<String, f64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LimitsUsed {
    pub max_free_cells: usize,
    pub mode: String,
    pub seed: Option<u64>,
    pub iterations: Option<u64>,
    pub node_budget: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RateSection {
    pub beta: BetaEntry,
    pub mais: MaisEntry,
    pub minrank: MinrankEntry,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BetaEntry {
    pub value: f64,
    /// Present when `β` is an integer.
    pub exact: Option<i64>,
    pub messages: usize,
    pub alpha: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MaisEntry {
    pub value: usize,
    /// 1-based messages in decoding order.
    pub order: Vec<usize>,
    /// 1-based receiver decoding each message of `order`.
    pub receivers: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MinrankEntry {
    pub value: usize,
    pub certified: bool,
    pub witness: Vec<Vec<u32>>,
    pub encoder: Vec<Vec<u32>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LeakageSection {
    pub linear_min: LinearMinEntry,
    pub theorem2_lower: LowerBoundEntry,
    pub exhaustive_t1: Option<ExhaustiveEntry>,
    pub mutual_info: Option<MutualInfoEntry>,
    pub pareto: Option<Vec<ParetoEntry>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LinearMinEntry {
    pub value: f64,
    /// `rank([S U]) - rank(U)` of the witness, in q-ary symbols.
    pub symbols: usize,
    pub q_l: RationalRepr,
    pub certified: bool,
    pub witness: Vec<Vec<u32>>,
    pub encoder: Vec<Vec<u32>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum Backing {
    Exact { messages: usize, alpha: usize },
    Mais { size: usize },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LowerBoundEntry {
    pub value: f64,
    /// Present when the bound is an integer number of q-ary symbols.
    pub exact: Option<i64>,
    pub backing: Backing,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExhaustiveEntry {
    pub value: f64,
    pub q_l: RationalRepr,
    pub codewords: usize,
    pub nodes: u64,
    pub reached_floor: bool,
    pub witness: EncoderTable,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MutualInfoEntry {
    /// `I(X_S; Y | X_K)` of the least-leakage linear code.
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ParetoEntry {
    pub rank: usize,
    pub leakage: usize,
    pub witness: Vec<Vec<u32>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Bracket {
    pub lower: f64,
    pub upper: f64,
    /// Lower and upper bounds coincide: the optimal leakage rate is known.
    pub tight: bool,
}

impl AnalysisReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }

    pub fn from_json(text: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }

    pub fn render_human(&self) -> String {
        let unit = match self.units {
            Units::QAry => format!("{}-ary symbols", self.instance.q),
            Units::Bits => "bits".to_string(),
        };
        let mut out = String::new();
        let a = &self.instance.adversary;
        let _ = writeln!(
            out,
            "instance        q={} n={} receivers={}  K={} S={} U={}",
            self.instance.q,
            self.instance.n,
            self.instance.receivers.len(),
            braces(&a.knows),
            braces(&a.sensitive),
            braces(&a.nonsensitive)
        );
        let r = &self.rate;
        let _ = writeln!(out, "broadcast rate  beta = {}  (alpha = {}, n = {})", r.beta.value, r.beta.alpha, r.beta.messages);
        let _ = writeln!(out, "                mais = {}  order {:?}", r.mais.value, r.mais.order);
        let _ = writeln!(out, "                minrank = {}{}", r.minrank.value, certified(r.minrank.certified));
        let l = &self.leakage;
        let _ = writeln!(out, "leakage ({unit})");
        let _ = writeln!(out, "  linear min    {}{}", l.linear_min.value, certified(l.linear_min.certified));
        let _ = writeln!(out, "  lower bound   {}", l.theorem2_lower.value);
        if let Some(e) = &l.exhaustive_t1 {
            let _ = writeln!(out, "  exhaustive t1 {}  ({} codewords, {} nodes)", e.value, e.codewords, e.nodes);
        }
        if let Some(mi) = &l.mutual_info {
            let _ = writeln!(out, "  mutual info   {}", mi.value);
        }
        if let Some(front) = &l.pareto {
            let pairs: Vec<String> = front.iter().map(|p| format!("({},{})", p.rank, p.leakage)).collect();
            let _ = writeln!(out, "  pareto        {}", pairs.join(" "));
        }
        let _ = writeln!(
            out,
            "bracket         [{}, {}]{}",
            self.bracket.lower,
            self.bracket.upper,
            if self.bracket.tight { "  tight" } else { "" }
        );
        out
    }
}

fn braces(v: &[usize]) -> String {
    let items: Vec<String> = v.iter().map(|j| j.to_string()).collect();
    format!("{{{}}}", items.join(","))
}

fn certified(c: bool) -> &'static str {
    if c {
        ""
    } else {
        "  (non-certified)"
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphReport {
    pub schema: String,
    pub messages: usize,
    pub block_length: usize,
    pub vertices: usize,
    pub edges: usize,
    pub degree: usize,
    pub alpha: usize,
    /// Absent when the graph is over the coloring cap.
    pub chromatic: Option<usize>,
    pub fractional_chromatic: RationalRepr,
    pub fractional_chromatic_value: f64,
}

impl GraphReport {
    pub fn render_human(&self) -> String {
        let chi = self.chromatic.map_or_else(|| "skipped (over cap)".to_string(), |c| c.to_string());
        let frac = if self.fractional_chromatic.den == "1" {
            self.fractional_chromatic.num.clone()
        } else {
            format!("{}/{}", self.fractional_chromatic.num, self.fractional_chromatic.den)
        };
        format!(
            "|V| = {}\n|E| = {}\nalpha = {}\nchi = {}\nchi_f = {} ({})\n",
            self.vertices, self.edges, self.alpha, chi, frac, self.fractional_chromatic_value
        )
    }
}
