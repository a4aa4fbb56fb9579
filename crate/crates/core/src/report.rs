//! End-to-end analyses behind the command-line tool.
//!
//! Every builder returns a serializable report and a list of named
//! contracts. A report passes when every contract held; the binary maps a
//! failed contract to exit code 1.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::Serialize;

use crate::bounds::{
    amplification_query_cap, dj_randomized_upper_bound, exact_quantum_lower_bound, f_epsilon,
    f_epsilon_real, mixture_error, polynomial_speedup_bound, repetitions_for_target,
    speedup_bound_quantum, BoundReport, ChainMetrics, DjBound,
};
use crate::decomp::{decompose, DecompositionMetrics};
use crate::dequant::{
    build_mixture, simulate_from_polynomial, simulation_report, threshold_target, MixtureArm,
    MixtureSimulator, SimulationReport,
};
use crate::error::{Error, Result};
use crate::fourier::{
    wht_forward, FourierSpectrum, InputWord, MonomialPolynomial, RealHypercubeFunction,
};
use crate::qqm::{
    build_deutsch_jozsa, max_modulus, oracle_apply, QueryAlgorithm, ValidationReport,
};

/// Slack for the bound chain comparisons.
pub const CHAIN_SLACK: f64 = 1e-9;
/// Tolerance for `grouped_l` against the spectrum's 1-norm.
pub const GROUPED_TOLERANCE: f64 = 1e-8;
/// Tolerance for reconstruction against direct simulation.
pub const RECONSTRUCTION_TOLERANCE: f64 = 1e-8;
/// Tolerance for closed-form spectra in the demos.
pub const DEMO_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Contract {
    pub name: String,
    pub held: bool,
}

fn contract(name: &str, held: bool) -> Contract {
    Contract {
        name: name.into(),
        held,
    }
}

fn all_held(contracts: &[Contract]) -> bool {
    contracts.iter().all(|c| c.held)
}

/// A nonzero Fourier coefficient, keyed by its 1-based variable set.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Coefficient {
    pub mask: Vec<usize>,
    pub coeff: f64,
}

fn support_list(spec: &FourierSpectrum) -> Vec<Coefficient> {
    spec.support()
        .map(|(mask, coeff)| Coefficient {
            mask: mask.indices(),
            coeff,
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProbabilityRow {
    pub x: String,
    pub pi: f64,
}

fn probability_rows(f: &RealHypercubeFunction) -> Vec<ProbabilityRow> {
    InputWord::all(f.n())
        .zip(f.values())
        .map(|(x, &pi)| ProbabilityRow {
            x: x.to_bit_string(),
            pi,
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AnalysisReport {
    pub n: usize,
    pub m: usize,
    pub t: usize,
    pub label: u32,
    pub epsilon: f64,
    pub validation: ValidationReport,
    pub pi: Vec<ProbabilityRow>,
    pub spectrum: Vec<Coefficient>,
    pub l1: f64,
    pub degree: usize,
    pub degree_budget: usize,
    pub eps_tilde: f64,
    pub decomposition: DecompositionMetrics,
    pub discarded_mass: f64,
    pub chain: ChainMetrics,
    pub grouped_l: f64,
    pub reconstruction_deviation: f64,
    pub bounds: BoundReport,
    pub contracts: Vec<Contract>,
}

impl AnalysisReport {
    pub fn passed(&self) -> bool {
        all_held(&self.contracts)
    }
}

/// Output probability, spectrum, decomposition metrics and the bound chain
/// of `alg` for output label `label`.
pub fn analyze(alg: &QueryAlgorithm, label: u32, epsilon: f64) -> Result<AnalysisReport> {
    let pi = alg.output_probability_function(label)?;
    let spec = wht_forward(&pi);
    let l1 = spec.l1_norm();
    let degree = spec.degree();

    let d = decompose(alg)?;
    let metrics = d.summary_metrics()?;
    let chain = d.chain_metrics(label, l1)?;
    let grouped_l = d.grouped_l(label)?;

    let ut_adj = alg.cumulative_unitaries()[alg.t()].adjoint();
    let mut reconstruction_deviation: f64 = 0.0;
    for x in InputWord::all(alg.n()) {
        let direct = alg.run(x)?;
        let phased = &ut_adj * oracle_apply(x, alg.m(), &direct)?;
        reconstruction_deviation =
            reconstruction_deviation.max(max_modulus(&(d.reconstruct(x)? - phased)));
    }

    let bounds = speedup_bound_quantum(&chain, epsilon)?;
    let contracts = vec![
        contract("degree <= 2t", degree <= 2 * alg.t()),
        contract(
            "reconstruction",
            reconstruction_deviation <= RECONSTRUCTION_TOLERANCE,
        ),
        contract("bound chain", chain.is_ordered(CHAIN_SLACK)),
        contract("grouped l1", (grouped_l - l1).abs() <= GROUPED_TOLERANCE),
    ];
    Ok(AnalysisReport {
        n: alg.n(),
        m: alg.m(),
        t: alg.t(),
        label,
        epsilon,
        validation: alg.validate(),
        pi: probability_rows(&pi),
        spectrum: support_list(&spec),
        l1,
        degree,
        degree_budget: 2 * alg.t(),
        eps_tilde: mixture_error(epsilon, l1),
        decomposition: metrics,
        discarded_mass: d.discarded_mass(),
        chain,
        grouped_l,
        reconstruction_deviation,
        bounds,
        contracts,
    })
}

/// Monte Carlo settings for [`simulate_algorithm`] and [`simulate_polynomial`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Sampling {
    pub seed: u64,
    pub trials: u64,
    /// Majority-vote repetitions; `None` picks the smallest odd `j` whose
    /// amplified error bound is at most `target`.
    pub j: Option<usize>,
    pub target: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SimulateReport {
    pub source: &'static str,
    pub n: usize,
    pub t: usize,
    pub degree: usize,
    pub target: f64,
    pub zero_arm_weight: f64,
    pub arms: Vec<MixtureArm>,
    pub simulation: SimulationReport,
    pub contracts: Vec<Contract>,
}

impl SimulateReport {
    pub fn passed(&self) -> bool {
        all_held(&self.contracts)
    }
}

/// Smallest odd `j` with `exp(−j (1/2 − ε̃)² / (2(1 − ε̃))) ≤ target`.
pub fn default_repetitions(target: f64, eps_tilde: f64) -> Result<usize> {
    let j = repetitions_for_target(target, eps_tilde)?.ceil().max(1.0) as usize;
    Ok(if j.is_multiple_of(2) { j + 1 } else { j })
}

fn finish_simulation(
    source: &'static str,
    sim: &MixtureSimulator,
    degree: usize,
    t: usize,
    target: &[Option<u8>],
    sampling: Sampling,
) -> Result<SimulateReport> {
    let j = match sampling.j {
        Some(j) => j,
        None => default_repetitions(sampling.target, sim.eps_tilde())?,
    };
    let simulation = simulation_report(sim, target, j, Some((sampling.seed, sampling.trials)))?;
    let contracts = vec![
        contract("exact error <= eps_tilde", simulation.contract_held),
        contract(
            "empirical within 3 sigma",
            simulation
                .empirical
                .as_ref()
                .is_none_or(|e| e.within_three_sigma),
        ),
    ];
    Ok(SimulateReport {
        source,
        n: sim.n(),
        t,
        degree,
        target: sampling.target,
        zero_arm_weight: sim.zero_arm_weight(),
        arms: sim.arms().to_vec(),
        simulation,
        contracts,
    })
}

/// Simulates `alg` classically. The target function is read off `π₁` with
/// promise threshold `epsilon`.
pub fn simulate_algorithm(
    alg: &QueryAlgorithm,
    epsilon: f64,
    sampling: Sampling,
) -> Result<SimulateReport> {
    let pi = alg.output_probability_function(1)?;
    let spec = wht_forward(&pi);
    let sim = build_mixture(&spec, epsilon, alg.t())?;
    let target = threshold_target(&pi, epsilon);
    finish_simulation("algorithm", &sim, spec.degree(), alg.t(), &target, sampling)
}

/// Simulates a polynomial of degree at most `2t` that approximates its
/// target within `epsilon`.
pub fn simulate_polynomial(
    p: &MonomialPolynomial,
    t: usize,
    epsilon: f64,
    sampling: Sampling,
) -> Result<SimulateReport> {
    let sim = simulate_from_polynomial(p, t, epsilon)?;
    let values = RealHypercubeFunction::from_fn(p.n(), |x| {
        p.evaluate(x).expect("input width matches the polynomial")
    })?;
    let target = threshold_target(&values, epsilon);
    finish_simulation("polynomial", &sim, p.degree(), t, &target, sampling)
}

/// Coefficients of one Hamming weight class of masks.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WeightClass {
    pub weight: usize,
    pub masks: usize,
    pub expected: f64,
    pub max_deviation: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DjDemo {
    pub n: usize,
    pub epsilon: f64,
    pub classes: Vec<WeightClass>,
    pub l1: f64,
    pub degree: usize,
    pub eps_tilde: f64,
    pub f_epsilon_real_at_one: f64,
    pub dj_bound: DjBound,
    pub amplification_cap: u64,
    pub contracts: Vec<Contract>,
}

impl DjDemo {
    pub fn passed(&self) -> bool {
        all_held(&self.contracts)
    }
}

fn binomial(n: usize, k: usize) -> usize {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

/// Deutsch–Jozsa on `n` bits: `π₁(x) = (n − 2|x|)²/n²` has `α_∅ = 1/n`,
/// `α_b = 2/n²` for `|b| = 2` and nothing else.
pub fn demo_dj(n: usize, epsilon: f64) -> Result<DjDemo> {
    let alg = build_deutsch_jozsa(n)?;
    let spec = wht_forward(&alg.output_probability_function(1)?);
    let nf = n as f64;
    let mut worst = vec![0.0f64; n + 1];
    for (b, &a) in spec.coeffs().iter().enumerate() {
        let w = b.count_ones() as usize;
        let expected = match w {
            0 => 1.0 / nf,
            2 => 2.0 / (nf * nf),
            _ => 0.0,
        };
        worst[w] = worst[w].max((a - expected).abs());
    }
    let classes: Vec<WeightClass> = worst
        .iter()
        .enumerate()
        .map(|(w, &dev)| WeightClass {
            weight: w,
            masks: binomial(n, w),
            expected: match w {
                0 => 1.0 / nf,
                2 => 2.0 / (nf * nf),
                _ => 0.0,
            },
            max_deviation: dev,
        })
        .collect();
    let l1 = spec.l1_norm();
    let contracts = vec![
        contract(
            "coefficient pattern",
            classes.iter().all(|c| c.max_deviation <= DEMO_TOLERANCE),
        ),
        contract("l1 = 1", (l1 - 1.0).abs() <= DEMO_TOLERANCE),
        contract("degree = 2", spec.degree() == 2),
    ];
    Ok(DjDemo {
        n,
        epsilon,
        classes,
        l1,
        degree: spec.degree(),
        eps_tilde: mixture_error(0.0, l1),
        f_epsilon_real_at_one: f_epsilon_real(epsilon, 1.0)?,
        dj_bound: dj_randomized_upper_bound(epsilon)?,
        amplification_cap: amplification_query_cap(epsilon, 1.0)?,
        contracts,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AndDemo {
    pub n: usize,
    pub epsilon: f64,
    pub l1: f64,
    pub degree: usize,
    pub f_epsilon_l1: u64,
    pub r_eps_lower: f64,
    pub q_exact_lower: f64,
    pub contracts: Vec<Contract>,
}

impl AndDemo {
    pub fn passed(&self) -> bool {
        all_held(&self.contracts)
    }
}

/// `AND_n` as a 0/1 function.
pub fn and_function(n: usize) -> Result<RealHypercubeFunction> {
    RealHypercubeFunction::from_fn(n, |x| if x.weight() as usize == n { 1.0 } else { 0.0 })
}

/// `L(AND_n) = 1`, and `R_ε(AND_n) ≥ n/3 − 1` turns into a lower bound on
/// the exact quantum query complexity.
pub fn demo_and(n: usize, epsilon: f64) -> Result<AndDemo> {
    if n == 0 {
        return Err(Error::Invalid("AND needs at least one variable".into()));
    }
    let spec = wht_forward(&and_function(n)?);
    let l1 = spec.l1_norm();
    let r_eps_lower = n as f64 / 3.0 - 1.0;
    let contracts = vec![
        contract("l1 = 1", (l1 - 1.0).abs() <= DEMO_TOLERANCE),
        contract("degree = n", spec.degree() == n),
    ];
    Ok(AndDemo {
        n,
        epsilon,
        l1,
        degree: spec.degree(),
        f_epsilon_l1: f_epsilon(epsilon, l1)?,
        r_eps_lower,
        q_exact_lower: exact_quantum_lower_bound(l1, r_eps_lower, epsilon)?,
        contracts,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScalarBounds {
    pub epsilon: f64,
    pub l1: f64,
    pub f_epsilon_real: f64,
    pub f_epsilon: u64,
    pub eps_tilde: f64,
    pub amplification_cap: u64,
    pub dj_bound: DjBound,
    pub polynomial: Option<BoundReport>,
}

/// Closed-form caps for a given Fourier 1-norm, with the polynomial cap
/// when a query count is supplied.
pub fn scalar_bounds(epsilon: f64, l1: f64, t: Option<usize>) -> Result<ScalarBounds> {
    Ok(ScalarBounds {
        epsilon,
        l1,
        f_epsilon_real: f_epsilon_real(epsilon, l1)?,
        f_epsilon: f_epsilon(epsilon, l1)?,
        eps_tilde: mixture_error(epsilon, l1),
        amplification_cap: amplification_query_cap(epsilon, l1)?,
        dj_bound: dj_randomized_upper_bound(epsilon)?,
        polynomial: t
            .map(|t| polynomial_speedup_bound(l1, t, epsilon))
            .transpose()?,
    })
}

/// Run parameters recorded next to every report.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunConfig {
    pub command: String,
    pub input: Option<String>,
    pub epsilon: f64,
    pub seed: u64,
    pub trials: u64,
    pub j: Option<usize>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Envelope<T: Serialize> {
    pub config: RunConfig,
    pub passed: bool,
    pub report: T,
}

impl<T: Serialize> Envelope<T> {
    pub fn to_json(&self) -> Result<String> {
        let mut text = serde_json::to_string_pretty(self)?;
        text.push('\n');
        Ok(text)
    }
}

fn contracts_table(out: &mut String, contracts: &[Contract]) {
    for c in contracts {
        let _ = writeln!(
            out,
            "  {:<28} {}",
            c.name,
            if c.held { "held" } else { "FAILED" }
        );
    }
}

fn chain_table(out: &mut String, chain: &ChainMetrics, f_values: &BTreeMap<String, u64>) {
    let _ = writeln!(out, "{:<14} {:>18} {:>12}", "chain", "value", "F_eps");
    for (key, value) in ChainMetrics::KEYS.iter().zip(chain.values()) {
        let f = f_values.get(*key).map_or("-".to_string(), u64::to_string);
        let _ = writeln!(out, "{key:<14} {value:>18.12} {f:>12}");
    }
}

pub fn render_analysis(r: &AnalysisReport) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "algorithm: n = {}, m = {}, t = {}, label = {}",
        r.n, r.m, r.t, r.label
    );
    let _ = writeln!(
        out,
        "validation worst deviation: {:.3e}",
        r.validation.worst_deviation()
    );
    let _ = writeln!(out, "\n{:<24} {:>18}", "x", "pi");
    for row in &r.pi {
        let _ = writeln!(out, "{:<24} {:>18.12}", row.x, row.pi);
    }
    let _ = writeln!(out, "\n{:<24} {:>18}", "mask", "coefficient");
    for c in &r.spectrum {
        let _ = writeln!(out, "{:<24} {:>18.12}", format!("{:?}", c.mask), c.coeff);
    }
    let _ = writeln!(
        out,
        "\nL = {:.12}  degree = {} (budget {})",
        r.l1, r.degree, r.degree_budget
    );
    let _ = writeln!(out, "eps = {}  eps_tilde = {:.12}", r.epsilon, r.eps_tilde);
    let _ = writeln!(
        out,
        "components = {}  grouped L = {:.12}  reconstruction deviation = {:.3e}\n",
        r.decomposition.d_count, r.grouped_l, r.reconstruction_deviation
    );
    chain_table(&mut out, &r.chain, &r.bounds.f_values);
    for (k, v) in &r.bounds.caps {
        let _ = writeln!(out, "cap {k:<24} {v}");
    }
    for note in &r.bounds.notes {
        let _ = writeln!(out, "note: {note}");
    }
    let _ = writeln!(out, "\ncontracts:");
    contracts_table(&mut out, &r.contracts);
    out
}

pub fn render_simulation(r: &SimulateReport) -> String {
    let s = &r.simulation;
    let mut out = String::new();
    let _ = writeln!(
        out,
        "{} source: n = {}, t = {}, degree = {}",
        r.source, r.n, r.t, r.degree
    );
    let _ = writeln!(
        out,
        "eps = {}  L = {:.12}  eps_tilde = {:.12}  arms = {}",
        s.epsilon,
        s.l1,
        s.eps_tilde,
        r.arms.len()
    );
    let _ = writeln!(
        out,
        "j = {}  amplified bound = {:.6e}  query budget = {} (amplified {})",
        s.j, s.bound, s.query_budget, s.amplified_query_budget
    );
    let freq = s.empirical.as_ref().map(|e| (&e.freq, &e.amplified_error));
    let _ = writeln!(
        out,
        "\n{:<20} {:>14} {:>4} {:>14} {:>12} {:>14}",
        "x", "pi_hat", "f", "error", "freq", "ampl. error"
    );
    for (idx, row) in s.per_input.iter().enumerate() {
        let f = row.f.map_or("-".to_string(), |f| f.to_string());
        let err = row.error.map_or("-".to_string(), |e| format!("{e:.12}"));
        let (fr, ae) = match freq {
            Some((fr, ae)) => (
                format!("{:.6}", fr[idx]),
                ae[idx].map_or("-".to_string(), |e| format!("{e:.6}")),
            ),
            None => ("-".into(), "-".into()),
        };
        let _ = writeln!(
            out,
            "{:<20} {:>14.12} {:>4} {:>14} {:>12} {:>14}",
            row.x, row.pi_hat, f, err, fr, ae
        );
    }
    let _ = writeln!(out, "\nworst exact error = {:.12}", s.worst_error);
    if let Some(e) = &s.empirical {
        let _ = writeln!(
            out,
            "seed = {}  trials = {}  max queries single/amplified = {}/{}",
            e.seed, e.trials, e.max_queries_single, e.max_queries_amplified
        );
    }
    let _ = writeln!(out, "\ncontracts:");
    contracts_table(&mut out, &r.contracts);
    out
}

pub fn render_dj(r: &DjDemo) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "Deutsch-Jozsa, n = {}", r.n);
    let _ = writeln!(
        out,
        "\n{:>6} {:>8} {:>18} {:>14}",
        "|b|", "masks", "alpha_b", "max dev"
    );
    for c in &r.classes {
        let _ = writeln!(
            out,
            "{:>6} {:>8} {:>18.12} {:>14.3e}",
            c.weight, c.masks, c.expected, c.max_deviation
        );
    }
    let _ = writeln!(
        out,
        "\nL = {:.12}  degree = {}  eps_tilde = {:.12}",
        r.l1, r.degree, r.eps_tilde
    );
    let _ = writeln!(out, "eps = {}", r.epsilon);
    let _ = writeln!(
        out,
        "R_eps cap, displayed form (2 - eps): {}",
        r.dj_bound.displayed
    );
    let _ = writeln!(
        out,
        "R_eps cap, F_eps(1):                {} (before ceiling {:.10})",
        r.dj_bound.f_at_one, r.f_epsilon_real_at_one
    );
    let _ = writeln!(
        out,
        "amplification cap ceil(2j) at L = 1: {}",
        r.amplification_cap
    );
    let _ = writeln!(out, "\ncontracts:");
    contracts_table(&mut out, &r.contracts);
    out
}

pub fn render_and(r: &AndDemo) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "AND, n = {}", r.n);
    let _ = writeln!(out, "L = {:.12}  degree = {}", r.l1, r.degree);
    let _ = writeln!(out, "eps = {}  F_eps(L) = {}", r.epsilon, r.f_epsilon_l1);
    let _ = writeln!(out, "R_eps lower bound n/3 - 1 = {:.12}", r.r_eps_lower);
    let _ = writeln!(out, "Q_E >= (n/3 - 1) / F_eps(L) = {:.12}", r.q_exact_lower);
    let _ = writeln!(out, "\ncontracts:");
    contracts_table(&mut out, &r.contracts);
    out
}

pub fn render_bounds(r: &ScalarBounds) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "eps = {}  L = {}", r.epsilon, r.l1);
    let _ = writeln!(
        out,
        "F_eps(L) = {} (before ceiling {:.10})",
        r.f_epsilon, r.f_epsilon_real
    );
    let _ = writeln!(out, "eps_tilde = {:.12}", r.eps_tilde);
    let _ = writeln!(out, "amplification cap ceil(2j) = {}", r.amplification_cap);
    let _ = writeln!(
        out,
        "Deutsch-Jozsa caps: displayed {} / F_eps(1) {}",
        r.dj_bound.displayed, r.dj_bound.f_at_one
    );
    if let Some(p) = &r.polynomial {
        for (k, v) in &p.caps {
            let _ = writeln!(out, "polynomial cap {k} = {v}");
        }
        for note in &p.notes {
            let _ = writeln!(out, "note: {note}");
        }
    }
    out
}
