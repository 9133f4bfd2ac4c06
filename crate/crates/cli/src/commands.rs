use std::collections::BTreeMap;
use std::time::Instant;

use icleak_core::fitting::{
    extract_encoder, pareto_sweep, search_min, FittingPattern, Objective, SearchLimits, SearchMode,
};
use icleak_core::leakage::{
    exhaustive_min_det_leakage_t1, linear_leakage, mutual_info_leakage, theorem2_lower_bound, BoundBacking,
    EncoderTable,
};
use icleak_core::rate::rate_report;
use icleak_core::rational::{exact_log, RationalRepr};
use icleak_core::{AdversarySplit, ConfusionGraph, Instance, InstanceDocument, InstanceError};
use num_traits::ToPrimitive;

use crate::report::{
    round_real, AnalysisReport, Backing, BetaEntry, Bracket, ExhaustiveEntry, GraphReport, LeakageSection,
    LimitsUsed, LinearMinEntry, LowerBoundEntry, MaisEntry, MinrankEntry, MutualInfoEntry, ParetoEntry,
    RateSection, Units, GRAPH_SCHEMA, REPORT_SCHEMA, TOOL_VERSION,
};
use crate::CliError;

#[derive(Debug, Clone)]
pub struct AnalyzeOptions {
    /// Reinterpret the instance over GF(q).
    pub q: Option<u64>,
    pub limits: SearchLimits,
    pub exhaustive_t1: bool,
    pub pareto: bool,
    pub mutual_info: bool,
    pub bits: bool,
    pub node_budget: u64,
}

impl AnalyzeOptions {
    pub fn new(limits: SearchLimits) -> Self {
        AnalyzeOptions {
            q: None,
            limits,
            exhaustive_t1: false,
            pareto: false,
            mutual_info: false,
            bits: false,
            node_budget: icleak_core::leakage::DEFAULT_NODE_BUDGET,
        }
    }
}

/// Parses an instance document and applies a field override.
pub fn load_instance(text: &str, q: Option<u64>) -> Result<(InstanceDocument, Instance, AdversarySplit), CliError> {
    let mut doc = InstanceDocument::from_json(text)?;
    if let Some(q) = q {
        doc.q = q;
    }
    let (inst, split) = doc.validate()?;
    Ok((doc, inst, split))
}

fn elapsed_ms(start: Instant) -> f64 {
    round_real(start.elapsed().as_secs_f64() * 1e3)
}

fn one_based(v: &[usize]) -> Vec<usize> {
    v.iter().map(|j| j + 1).collect()
}

pub fn analyze(text: &str, opts: &AnalyzeOptions) -> Result<AnalysisReport, CliError> {
    let (doc, inst, split) = load_instance(text, opts.q)?;
    let q = inst.q();
    let scale = if opts.bits { (q as f64).log2() } else { 1.0 };
    let in_units = |symbols: f64| round_real(symbols * scale);
    let mut timing = BTreeMap::new();

    let start = Instant::now();
    let rates = rate_report(&inst, Some(&opts.limits))?;
    timing.insert("rate".to_string(), elapsed_ms(start));
    let minrank = rates.minrank.expect("minrank requested");

    let start = Instant::now();
    let pattern = FittingPattern::from_instance(&inst);
    let linear = search_min(&pattern, &Objective::Leakage(split.clone()), &opts.limits)?;
    let encoder = extract_encoder(&linear.witness);
    let linear_result = linear_leakage(&encoder, &split)?;
    timing.insert("linear_min".to_string(), elapsed_ms(start));

    let start = Instant::now();
    let lower = theorem2_lower_bound(&inst, &split)?;
    timing.insert("theorem2_lower".to_string(), elapsed_ms(start));

    let exhaustive = if opts.exhaustive_t1 {
        let start = Instant::now();
        let incumbent = EncoderTable::from_linear(&encoder, inst.message_count())?;
        let out = exhaustive_min_det_leakage_t1(&inst, &split, Some(&incumbent), opts.node_budget)?;
        timing.insert("exhaustive_t1".to_string(), elapsed_ms(start));
        Some(out)
    } else {
        None
    };

    let mutual_info = if opts.mutual_info {
        let start = Instant::now();
        let enc = EncoderTable::from_linear(&encoder, inst.message_count())?;
        let value = mutual_info_leakage(&enc, &split)?;
        timing.insert("mutual_info".to_string(), elapsed_ms(start));
        Some(MutualInfoEntry { value: in_units(value) })
    } else {
        None
    };

    let pareto = if opts.pareto {
        let start = Instant::now();
        let front = pareto_sweep(&pattern, &split, &opts.limits)?;
        timing.insert("pareto".to_string(), elapsed_ms(start));
        Some(front.into_iter().map(|p| ParetoEntry { rank: p.rank, leakage: p.leakage, witness: p.witness.to_rows() }).collect())
    } else {
        None
    };

    // Upper bound: best of the linear optimum and the single-symbol optimum.
    let mut upper = (linear.value as f64, Some(linear.value as i64));
    if let Some(ex) = &exhaustive {
        if ex.leakage.leakage < upper.0 {
            upper = (ex.leakage.leakage, exact_log(&ex.leakage.q_l, q));
        }
    }
    let tight = match (lower.exact, upper.1) {
        (Some(a), Some(b)) => a == b,
        _ => (lower.value - upper.0).abs() < 1e-9,
    };

    let (mode, seed, iterations) = match opts.limits.mode {
        SearchMode::Exhaustive => ("exhaustive", None, None),
        SearchMode::Randomized { seed, iterations } => ("randomized", Some(seed), Some(iterations)),
    };

    Ok(AnalysisReport {
        schema: REPORT_SCHEMA.to_string(),
        tool_version: TOOL_VERSION.to_string(),
        instance: doc,
        limits: LimitsUsed {
            max_free_cells: opts.limits.max_free_cells,
            mode: mode.to_string(),
            seed,
            iterations,
            node_budget: opts.node_budget,
        },
        units: if opts.bits { Units::Bits } else { Units::QAry },
        rate: RateSection {
            beta: BetaEntry {
                value: round_real(rates.beta.beta),
                exact: rates.beta.exact,
                messages: rates.beta.messages,
                alpha: rates.beta.alpha,
            },
            mais: MaisEntry {
                value: rates.mais.size,
                order: one_based(&rates.mais.order),
                receivers: one_based(&rates.mais.receivers),
            },
            minrank: MinrankEntry {
                value: minrank.value,
                certified: minrank.certified,
                witness: minrank.witness.to_rows(),
                encoder: extract_encoder(&minrank.witness).to_rows(),
            },
        },
        leakage: LeakageSection {
            linear_min: LinearMinEntry {
                value: in_units(linear_result.leakage),
                symbols: linear.value,
                q_l: RationalRepr::from(&linear_result.q_l),
                certified: linear.certified,
                witness: linear.witness.to_rows(),
                encoder: encoder.to_rows(),
            },
            theorem2_lower: LowerBoundEntry {
                value: in_units(lower.value),
                exact: lower.exact,
                backing: match lower.backing {
                    BoundBacking::Exact { messages, alpha } => Backing::Exact { messages, alpha },
                    BoundBacking::Mais { size } => Backing::Mais { size },
                },
            },
            exhaustive_t1: exhaustive.map(|ex| ExhaustiveEntry {
                value: in_units(ex.leakage.leakage),
                q_l: RationalRepr::from(&ex.leakage.q_l),
                codewords: ex.witness.codeword_count(),
                nodes: ex.nodes,
                reached_floor: ex.reached_floor,
                witness: ex.witness,
            }),
            mutual_info,
            pareto,
        },
        bracket: Bracket { lower: in_units(lower.value), upper: in_units(upper.0), tight },
        timing_ms: timing,
    })
}

#[derive(Debug, Clone, Default)]
pub struct GraphOptions {
    pub q: Option<u64>,
    pub t: usize,
    /// Use the instance extended with the adversary's receiver, restricted
    /// to the messages the adversary does not know.
    pub adversary_view: bool,
}

pub fn graph(text: &str, opts: &GraphOptions) -> Result<(GraphReport, ConfusionGraph), CliError> {
    let (_, inst, split) = load_instance(text, opts.q)?;
    let inst = if opts.adversary_view {
        inst.extend_with_adversary_receiver(&split).induce_subproblem(&split.unknown()).map_err(CliError::Parse)?.instance
    } else {
        inst
    };
    let t = opts.t.max(1);
    let g = ConfusionGraph::build(&inst, t)?;
    let mis = g.max_independent_set()?;
    let chromatic = g.chromatic_number().ok();
    let frac = g.fractional_chromatic()?;
    let report = GraphReport {
        schema: GRAPH_SCHEMA.to_string(),
        messages: inst.message_count(),
        block_length: t,
        vertices: g.vertex_count(),
        edges: g.edge_count(),
        degree: g.degree(),
        alpha: mis.size,
        chromatic,
        fractional_chromatic: RationalRepr::from(&frac),
        fractional_chromatic_value: round_real(frac.to_f64().unwrap_or(f64::NAN)),
    };
    Ok((report, g))
}

impl From<InstanceError> for CliError {
    fn from(e: InstanceError) -> Self {
        CliError::Parse(e)
    }
}
