//! Built-in reference instances and the checks `verify-paper` runs on them.

use icleak_core::fitting::{
    extract_encoder, leakage_rank_gap, pareto_sweep, search_min, Cell, FittingPattern, Objective, SearchLimits,
};
use icleak_core::leakage::{
    exhaustive_min_det_leakage_t1, for_each_valid_code, linear_leakage, mutual_info_leakage, oracle_leakage, posterior_success,
    prior_success, theorem2_lower_bound, validate_encoder, EncoderTable, DEFAULT_NODE_BUDGET,
};
use icleak_core::rate::{beta_exact, mais_bound, minrank};
use icleak_core::rational::exact_log;
use icleak_core::{
    parse_instance, AdversarySplit, ConfusionGraph, Instance, MatrixGF, MessageSet, PrimeField, Rational, Receiver,
};
use serde::{Deserialize, Serialize};

use crate::commands::{analyze, AnalyzeOptions};
use crate::CliError;

pub const EXAMPLE1: &str = include_str!("../fixtures/example1.json");
pub const EXAMPLE2: &str = include_str!("../fixtures/example2.json");
pub const FIGURE1: &str = include_str!("../fixtures/figure1.json");
pub const FIGURE2: &str = include_str!("../fixtures/figure2.json");
pub const THREE_RECEIVERS: &str = include_str!("../fixtures/three_receivers.json");

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub expected: String,
    pub actual: String,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub passed: Vec<String>,
    pub failed: Vec<String>,
    pub checks: Vec<Check>,
}

impl VerifyReport {
    pub fn all_passed(&self) -> bool {
        self.failed.is_empty()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("verify reports serialize")
    }

    pub fn render_human(&self) -> String {
        let width = self.checks.iter().map(|c| c.name.len()).max().unwrap_or(0);
        let mut out = String::new();
        for c in &self.checks {
            let status = if c.passed { "PASS" } else { "FAIL" };
            out.push_str(&format!("{status}  {:width$}  expected {}  got {}\n", c.name, c.expected, c.actual));
        }
        out.push_str(&format!("{} passed, {} failed\n", self.passed.len(), self.failed.len()));
        out
    }
}

type Probe = fn() -> Result<String, String>;

fn load(text: &str) -> (Instance, AdversarySplit) {
    parse_instance(text).expect("embedded fixtures are valid")
}

fn gf2_rows(cols: usize, rows: &[&[u32]]) -> MatrixGF {
    MatrixGF::from_rows(PrimeField::binary(), cols, rows).expect("fixture matrix")
}

fn example1_matrix() -> MatrixGF {
    gf2_rows(5, &[&[1, 0, 0, 1, 0], &[1, 1, 0, 0, 0], &[0, 1, 1, 0, 0], &[0, 0, 1, 1, 0], &[0, 0, 0, 0, 1]])
}

fn limits(inst: &Instance) -> SearchLimits {
    SearchLimits::exhaustive(inst.field())
}

fn err(e: impl std::fmt::Display) -> String {
    e.to_string()
}

fn symbols(q_l: &Rational, q: u32) -> String {
    exact_log(q_l, q).map_or_else(|| format!("log_{q}({q_l})"), |e| e.to_string())
}

fn one_based(set: &MessageSet) -> String {
    let items: Vec<String> = set.iter().map(|j| (j + 1).to_string()).collect();
    format!("{{{}}}", items.join(","))
}

fn receivers(inst: &Instance) -> String {
    let parts: Vec<String> =
        inst.receivers().iter().map(|r| format!("W={} A={}", one_based(&r.wants), one_based(&r.has))).collect();
    parts.join("; ")
}

fn example2_keyed_matrix() -> MatrixGF {
    gf2_rows(4, &[&[1, 0, 1, 0], &[0, 1, 0, 1]])
}

fn example3_instance() -> Instance {
    let (inst, split) = load(EXAMPLE1);
    inst.extend_with_adversary_receiver(&split).induce_subproblem(&split.unknown()).expect("in range").instance
}

const PROBES: &[(&str, &str, Probe)] = &[
    ("example1.parse", "W={1} A={4,5}; W={2} A={1}; W={3} A={2}; W={4} A={3}; W={5} A={4} | K={5} S={1,3} U={2,4}", || {
        let (inst, split) = load(EXAMPLE1);
        Ok(format!(
            "{} | K={} S={} U={}",
            receivers(&inst),
            one_based(split.known()),
            one_based(split.sensitive()),
            one_based(split.nonsensitive())
        ))
    }),
    ("example1.adversary_receiver", "W={2,4} A={1,3,5}", || {
        let (inst, split) = load(EXAMPLE1);
        let extended = inst.extend_with_adversary_receiver(&split);
        let r = extended.receivers().last().ok_or("no receivers")?;
        Ok(format!("W={} A={}", one_based(&r.wants), one_based(&r.has)))
    }),
    ("example1.reference_matrix_fits", "true", || {
        let (inst, _) = load(EXAMPLE1);
        Ok(FittingPattern::from_instance(&inst).matches(&example1_matrix()).to_string())
    }),
    ("example1.u_block_rank", "2", || {
        Ok(example1_matrix().select_columns(&[1, 3]).map_err(err)?.rank().to_string())
    }),
    ("example1.pareto_has_rank4_leakage1", "true", || {
        let (inst, split) = load(EXAMPLE1);
        let front = pareto_sweep(&FittingPattern::from_instance(&inst), &split, &limits(&inst)).map_err(err)?;
        Ok(front.iter().any(|p| (p.rank, p.leakage) == (4, 1)).to_string())
    }),
    ("example1.minrank", "4", || {
        let (inst, _) = load(EXAMPLE1);
        minrank(&inst, &limits(&inst)).map(|m| m.value.to_string()).map_err(err)
    }),
    ("example1.reference_matrix_rank", "4", || Ok(example1_matrix().rank().to_string())),
    ("example1.reference_matrix_leakage", "3-2=1", || {
        let (_, split) = load(EXAMPLE1);
        let m = example1_matrix();
        let su = m.select_columns(&split.sensitive_then_nonsensitive()).map_err(err)?.rank();
        let u = m.select_columns(&split.nonsensitive().iter().copied().collect::<Vec<_>>()).map_err(err)?.rank();
        Ok(format!("{su}-{u}={}", leakage_rank_gap(&m, &split)))
    }),
    ("example1.min_linear_leakage", "1", || {
        let (inst, split) = load(EXAMPLE1);
        let p = FittingPattern::from_instance(&inst);
        search_min(&p, &Objective::Leakage(split), &limits(&inst)).map(|o| o.value.to_string()).map_err(err)
    }),
    ("example1.encoder_valid", "valid", || {
        let (inst, _) = load(EXAMPLE1);
        let enc = EncoderTable::from_linear(&example1_matrix().row_basis(), 5).map_err(err)?;
        Ok(match validate_encoder(&enc, &inst).map_err(err)? {
            None => "valid".into(),
            Some(c) => format!("conflict at receiver {}", c.receiver + 1),
        })
    }),
    ("example1.lower_bound", "1", || {
        let (inst, split) = load(EXAMPLE1);
        let b = theorem2_lower_bound(&inst, &split).map_err(err)?;
        Ok(b.exact.map_or_else(|| b.value.to_string(), |e| e.to_string()))
    }),
    ("example1.bracket_tight", "true", || {
        let (inst, _) = load(EXAMPLE1);
        let report = analyze(EXAMPLE1, &AnalyzeOptions::new(limits(&inst))).map_err(err)?;
        Ok(report.bracket.tight.to_string())
    }),
    ("example2.minrank", "1", || {
        let (inst, _) = load(EXAMPLE2);
        minrank(&inst, &limits(&inst)).map(|m| m.value.to_string()).map_err(err)
    }),
    ("example2.rank_one_code_leakage", "1", || {
        let (_, split) = load(EXAMPLE2);
        let l = linear_leakage(&gf2_rows(4, &[&[1, 1, 0, 0]]), &split).map_err(err)?;
        Ok(symbols(&l.q_l, 2))
    }),
    ("example2.all_ones_matrix_rank", "1", || Ok(gf2_rows(4, &[&[1, 1, 0, 0], &[1, 1, 0, 0]]).rank().to_string())),
    ("example2.rank_one_encoder", "[[1, 1, 0, 0]]", || {
        Ok(format!("{:?}", extract_encoder(&gf2_rows(4, &[&[1, 1, 0, 0], &[1, 1, 0, 0]])).to_rows()))
    }),
    ("example2.keyed_matrix_u_block", "[[1, 0], [0, 1]] rank 2", || {
        let u = example2_keyed_matrix().select_columns(&[2, 3]).map_err(err)?;
        Ok(format!("{:?} rank {}", u.to_rows(), u.rank()))
    }),
    ("example2.keyed_matrix_leakage", "2-2=0", || {
        let (inst, split) = load(EXAMPLE2);
        let m = example2_keyed_matrix();
        if !FittingPattern::from_instance(&inst).matches(&m) {
            return Err("not a fitting matrix".into());
        }
        let u = m.select_columns(&[2, 3]).map_err(err)?.rank();
        Ok(format!("{}-{u}={}", m.rank(), leakage_rank_gap(&m, &split)))
    }),
    ("example2.min_linear_leakage", "0", || {
        let (inst, split) = load(EXAMPLE2);
        let p = FittingPattern::from_instance(&inst);
        search_min(&p, &Objective::Leakage(split), &limits(&inst)).map(|o| o.value.to_string()).map_err(err)
    }),
    ("example2.pareto", "[(1,1),(2,0)]", || {
        let (inst, split) = load(EXAMPLE2);
        let front = pareto_sweep(&FittingPattern::from_instance(&inst), &split, &limits(&inst)).map_err(err)?;
        let pairs: Vec<String> = front.iter().map(|p| format!("({},{})", p.rank, p.leakage)).collect();
        Ok(format!("[{}]", pairs.join(",")))
    }),
    ("example2.exhaustive_t1", "0", || {
        let (inst, split) = load(EXAMPLE2);
        let out = exhaustive_min_det_leakage_t1(&inst, &split, None, DEFAULT_NODE_BUDGET).map_err(err)?;
        Ok(symbols(&out.leakage.q_l, 2))
    }),
    ("example2.two_codeword_min_leakage", "1", || {
        let (inst, split) = load(EXAMPLE2);
        let mut least: Option<Rational> = None;
        let mut failure = None;
        for_each_valid_code(&inst, 2, |enc| match oracle_leakage(enc, &split) {
            Ok(l) => {
                if least.as_ref().is_none_or(|b| l.q_l < *b) {
                    least = Some(l.q_l);
                }
            }
            Err(e) => failure = Some(e.to_string()),
        })
        .map_err(err)?;
        if let Some(e) = failure {
            return Err(e);
        }
        least.map(|l| symbols(&l, 2)).ok_or_else(|| "no two-codeword code".to_string())
    }),
    ("figure1.prior_success", "1/4", || {
        let (_, split) = load(FIGURE1);
        Ok(prior_success(&split, 2, 1).to_string())
    }),
    ("figure1.xor_pairs_posterior", "1/2", || {
        let (_, split) = load(FIGURE1);
        let enc = EncoderTable::from_linear(&gf2_rows(4, &[&[1, 1, 0, 0], &[0, 0, 1, 1]]), 4).map_err(err)?;
        posterior_success(&enc, &split).map(|p| p.to_string()).map_err(err)
    }),
    ("figure1.xor_pairs_leakage_bits", "1", || {
        let (_, split) = load(FIGURE1);
        let enc = EncoderTable::from_linear(&gf2_rows(4, &[&[1, 1, 0, 0], &[0, 0, 1, 1]]), 4).map_err(err)?;
        oracle_leakage(&enc, &split).map(|l| symbols(&l.q_l, 2)).map_err(err)
    }),
    ("figure1.keyed_code_leakage_bits", "0", || {
        let (_, split) = load(FIGURE1);
        let enc = EncoderTable::from_linear(&gf2_rows(4, &[&[1, 0, 1, 0], &[0, 1, 0, 1]]), 4).map_err(err)?;
        oracle_leakage(&enc, &split).map(|l| symbols(&l.q_l, 2)).map_err(err)
    }),
    ("figure1.keyed_code_mutual_info", "0", || {
        let (_, split) = load(FIGURE1);
        let enc = EncoderTable::from_linear(&gf2_rows(4, &[&[1, 0, 1, 0], &[0, 1, 0, 1]]), 4).map_err(err)?;
        let mi = mutual_info_leakage(&enc, &split).map_err(err)?;
        Ok(if mi.abs() < 1e-12 { "0".into() } else { mi.to_string() })
    }),
    ("figure2.parse", "W={1} A={2}; W={2} A={1}", || Ok(receivers(&load(FIGURE2).0))),
    ("figure2.edges", "{00,01} {00,10} {01,11} {10,11}", || {
        let (inst, _) = load(FIGURE2);
        let g = ConfusionGraph::build(&inst, 1).map_err(err)?;
        let sp = g.space();
        let mut edges = Vec::new();
        for x in 0..g.vertex_count() {
            for z in x + 1..g.vertex_count() {
                if g.adjacent(x, z) {
                    edges.push(format!("{{{},{}}}", sp.label(x), sp.label(z)));
                }
            }
        }
        Ok(edges.join(" "))
    }),
    ("figure2.pair_00_01", "adjacent, not independent", || {
        let (inst, _) = load(FIGURE2);
        let g = ConfusionGraph::build(&inst, 1).map_err(err)?;
        let adjacent = if g.adjacent(0, 1) { "adjacent" } else { "not adjacent" };
        let independent = if g.is_independent_set(&[0, 1]) { "independent" } else { "not independent" };
        Ok(format!("{adjacent}, {independent}"))
    }),
    ("figure2.dot", "4 nodes, 4 edges", || {
        let (inst, _) = load(FIGURE2);
        let dot = ConfusionGraph::build(&inst, 1).map_err(err)?.to_dot().map_err(err)?;
        Ok(format!("{} nodes, {} edges", dot.matches("[label=").count(), dot.matches(" -- ").count()))
    }),
    ("figure2.confusion_graph", "|V|=4 |E|=4 alpha=2 chi=2 chi_f=2", || {
        let (inst, _) = load(FIGURE2);
        let g = ConfusionGraph::build(&inst, 1).map_err(err)?;
        Ok(format!(
            "|V|={} |E|={} alpha={} chi={} chi_f={}",
            g.vertex_count(),
            g.edge_count(),
            g.max_independent_set().map_err(err)?.size,
            g.chromatic_number().map_err(err)?,
            g.fractional_chromatic().map_err(err)?
        ))
    }),
    ("figure2.beta", "1", || {
        let (inst, _) = load(FIGURE2);
        let b = beta_exact(&inst).map_err(err)?;
        Ok(b.exact.map_or_else(|| b.beta.to_string(), |e| e.to_string()))
    }),
    ("figure2.constant_code_conflict", "(00, 01) at receiver 2", || {
        let (inst, _) = load(FIGURE2);
        let enc = EncoderTable::constant(2, 2, 1).map_err(err)?;
        let sp = enc.space();
        Ok(match validate_encoder(&enc, &inst).map_err(err)? {
            Some(c) => format!("({}, {}) at receiver {}", sp.label(c.x), sp.label(c.z), c.receiver + 1),
            None => "valid".into(),
        })
    }),
    ("example3.alpha", "2", || {
        let g = ConfusionGraph::build(&example3_instance(), 1).map_err(err)?;
        g.max_independent_set().map(|m| m.size.to_string()).map_err(err)
    }),
    ("example3.beta", "3", || {
        let b = beta_exact(&example3_instance()).map_err(err)?;
        Ok(b.exact.map_or_else(|| b.beta.to_string(), |e| e.to_string()))
    }),
    ("example3.mais", "3", || {
        mais_bound(&example3_instance().normalize_singleton_wants()).map(|m| m.size.to_string()).map_err(err)
    }),
    ("example3.minrank", "3", || {
        let inst = example3_instance();
        minrank(&inst, &limits(&inst)).map(|m| m.value.to_string()).map_err(err)
    }),
    ("three_receivers.fitting_pattern", "10??0/?10??/0?10?", || {
        let (inst, _) = load(THREE_RECEIVERS);
        let p = FittingPattern::from_instance(&inst);
        let rows: Vec<String> = (0..p.rows())
            .map(|r| {
                (0..p.cols())
                    .map(|c| match p.cell(r, c) {
                        Cell::One => '1',
                        Cell::Zero => '0',
                        Cell::Free => '?',
                    })
                    .collect()
            })
            .collect();
        Ok(rows.join("/"))
    }),
    ("normalization.multi_want_receiver", "W={1} A={3}; W={2} A={3}", || {
        let r = Receiver::new([0, 1], [2]);
        let inst = Instance::new(PrimeField::binary(), 3, vec![r]).map_err(err)?;
        Ok(receivers(&inst.normalize_singleton_wants()))
    }),
    ("lower_bound.no_nonsensitive", "bound 3, beta(S) 3", || {
        let (inst, split) = load(EXAMPLE1);
        let mut sensitive = split.sensitive().clone();
        sensitive.extend(split.nonsensitive().iter().copied());
        let split = AdversarySplit::new(5, split.known().clone(), sensitive.clone(), MessageSet::new()).map_err(err)?;
        let bound = theorem2_lower_bound(&inst, &split).map_err(err)?;
        let induced = inst.induce_subproblem(&sensitive).map_err(err)?.instance;
        let beta = beta_exact(&induced).map_err(err)?;
        let show = |exact: Option<i64>, v: f64| exact.map_or_else(|| v.to_string(), |e| e.to_string());
        Ok(format!("bound {}, beta(S) {}", show(bound.exact, bound.value), show(beta.exact, beta.beta)))
    }),
];

pub fn check_names() -> Vec<&'static str> {
    PROBES.iter().map(|(name, _, _)| *name).collect()
}

/// Runs every reference check. `corrupt` replaces one check's expected
/// value so the harness can be seen failing.
pub fn verify_paper(corrupt: Option<&str>) -> Result<VerifyReport, CliError> {
    if let Some(name) = corrupt {
        if !check_names().contains(&name) {
            return Err(CliError::Usage(format!("no check named {name:?}")));
        }
    }
    let checks: Vec<Check> = PROBES
        .iter()
        .map(|(name, expected, probe)| {
            let expected = if corrupt == Some(*name) { format!("corrupted:{expected}") } else { expected.to_string() };
            let actual = probe().unwrap_or_else(|e| format!("error: {e}"));
            Check { name: name.to_string(), passed: actual == expected, expected, actual }
        })
        .collect();
    let (passed, failed): (Vec<&Check>, Vec<&Check>) = checks.iter().partition(|c| c.passed);
    Ok(VerifyReport {
        passed: passed.iter().map(|c| c.name.clone()).collect(),
        failed: failed.iter().map(|c| c.name.clone()).collect(),
        checks,
    })
}
