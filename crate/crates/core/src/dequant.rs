//! Classical simulation of a query algorithm from the Fourier expansion of
//! its output probability.
//!
//! Each nonzero coefficient `α_b` becomes a deterministic parity tree that
//! queries the bits of `b` and outputs 1 iff `sgn(α_b)·χ_b(x) = +1`. The
//! mixture picks tree `b` with probability `2|α_b|/(1+2L)` and a constant-0
//! arm with probability `1/(1+2L)`, giving
//!
//! ```text
//! π̂₁(x) = (L + Σ_b α_b χ_b(x)) / (1 + 2L)
//! ```
//!
//! and worst-case error `ε̃ = (ε + L)/(1 + 2L)` on the promise set. Majority
//! voting over `j` runs pushes the error below
//! `exp(−j (1/2 − ε̃)² / (2(1 − ε̃)))`.

use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use statrs::function::gamma::ln_gamma;

use crate::bounds::mixture_error;
use crate::error::{Error, Result};
use crate::fourier::{
    monomials_to_fourier, FourierSpectrum, InputWord, Mask, MonomialPolynomial,
    RealHypercubeFunction,
};

/// Reads input bits and counts how many were read.
#[derive(Debug)]
pub struct QueryCounter {
    x: InputWord,
    queries: usize,
}

impl QueryCounter {
    pub fn new(x: InputWord) -> Self {
        Self { x, queries: 0 }
    }

    pub fn query(&mut self, i: usize) -> Result<u8> {
        let bit = self.x.bit(i)?;
        self.queries += 1;
        Ok(bit)
    }

    pub fn queries(&self) -> usize {
        self.queries
    }
}

/// Deterministic tree `D(b)` with sign `sgn(α_b)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ParityTree {
    #[serde(serialize_with = "serialize_mask")]
    mask: Mask,
    sign: i8,
}

fn serialize_mask<S: serde::Serializer>(mask: &Mask, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(mask.indices())
}

impl ParityTree {
    pub fn new(mask: Mask, sign: i8) -> Result<Self> {
        if sign != 1 && sign != -1 {
            return Err(Error::Invalid(format!(
                "parity tree sign must be ±1, got {sign}"
            )));
        }
        Ok(Self { mask, sign })
    }

    pub fn mask(&self) -> Mask {
        self.mask
    }

    pub fn sign(&self) -> i8 {
        self.sign
    }

    pub fn query_cost(&self) -> usize {
        self.mask.weight()
    }

    /// Queries exactly the bits in the mask.
    pub fn run_counted(&self, input: &mut QueryCounter) -> Result<u8> {
        if input.x.n() != self.mask.n() {
            return Err(Error::DimensionMismatch {
                expected: self.mask.n(),
                found: input.x.n(),
            });
        }
        let mut parity = 0u8;
        for i in self.mask.indices() {
            parity ^= input.query(i)?;
        }
        let chi: i8 = if parity == 0 { 1 } else { -1 };
        Ok(u8::from(chi * self.sign == 1))
    }
}

/// `π̂₁^b(x) = 1/2 + sgn(α_b) χ_b(x)/2` as a single deterministic bit.
pub fn run_parity_tree(tree: &ParityTree, x: InputWord) -> Result<u8> {
    tree.run_counted(&mut QueryCounter::new(x))
}

/// One run of a randomized simulator.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Sample {
    pub bit: u8,
    pub queries: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MixtureArm {
    pub weight: f64,
    pub tree: ParityTree,
}

/// The randomized simulator `R`.
#[derive(Debug, Clone)]
pub struct MixtureSimulator {
    n: usize,
    arms: Vec<MixtureArm>,
    zero_arm_weight: f64,
    source_l1: f64,
    source_epsilon: f64,
    query_budget: usize,
    // index 0 is the zero arm, index a+1 is arms[a]
    picker: WeightedIndex<f64>,
}

/// Builds `R` from the spectrum of `π₁` for a `t`-query algorithm that
/// computes its target within `epsilon`.
///
/// Arms are created only for `|α_b| > 1e-12`, and `L` is the 1-norm over
/// those arms so that the weights sum to one.
pub fn build_mixture(spec: &FourierSpectrum, epsilon: f64, t: usize) -> Result<MixtureSimulator> {
    if !(0.0..0.5).contains(&epsilon) {
        return Err(Error::EpsilonDomain(epsilon, "[0, 1/2)"));
    }
    let budget = 2 * t;
    let degree = spec.degree();
    if degree > budget {
        return Err(Error::DegreeExceedsBudget { degree, budget });
    }
    let support: Vec<(Mask, f64)> = spec.support().collect();
    let l1: f64 = support.iter().map(|(_, a)| a.abs()).sum();
    let denom = 1.0 + 2.0 * l1;
    let arms = support
        .into_iter()
        .map(|(mask, a)| {
            Ok(MixtureArm {
                weight: 2.0 * a.abs() / denom,
                tree: ParityTree::new(mask, if a > 0.0 { 1 } else { -1 })?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let zero_arm_weight = 1.0 / denom;
    let picker =
        WeightedIndex::new(std::iter::once(zero_arm_weight).chain(arms.iter().map(|a| a.weight)))
            .map_err(|e| Error::Invalid(format!("mixture weights: {e}")))?;
    Ok(MixtureSimulator {
        n: spec.n(),
        arms,
        zero_arm_weight,
        source_l1: l1,
        source_epsilon: epsilon,
        query_budget: budget,
        picker,
    })
}

/// Polynomial entry path: converts to the Fourier basis, then builds `R`
/// with `L = L(p)`.
pub fn simulate_from_polynomial(
    p: &MonomialPolynomial,
    t: usize,
    epsilon: f64,
) -> Result<MixtureSimulator> {
    let degree = p.degree();
    if degree > 2 * t {
        return Err(Error::DegreeExceedsBudget {
            degree,
            budget: 2 * t,
        });
    }
    build_mixture(&monomials_to_fourier(p)?, epsilon, t)
}

impl MixtureSimulator {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn arms(&self) -> &[MixtureArm] {
        &self.arms
    }

    pub fn zero_arm_weight(&self) -> f64 {
        self.zero_arm_weight
    }

    pub fn source_l1(&self) -> f64 {
        self.source_l1
    }

    pub fn source_epsilon(&self) -> f64 {
        self.source_epsilon
    }

    /// Worst-case budget `2t`.
    pub fn query_budget(&self) -> usize {
        self.query_budget
    }

    /// `ε̃ = (ε + L)/(1 + 2L)`.
    pub fn eps_tilde(&self) -> f64 {
        mixture_error(self.source_epsilon, self.source_l1)
    }

    fn check_input(&self, x: InputWord) -> Result<()> {
        if x.n() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: x.n(),
            });
        }
        Ok(())
    }

    /// Exact probability that `R` outputs 1 on `x`.
    pub fn output_prob(&self, x: InputWord) -> Result<f64> {
        self.check_input(x)?;
        let mut total = 0.0;
        for arm in &self.arms {
            if run_parity_tree(&arm.tree, x)? == 1 {
                total += arm.weight;
            }
        }
        Ok(total)
    }

    /// Draws one arm by weight and runs it.
    pub fn sample<R: Rng + ?Sized>(&self, x: InputWord, rng: &mut R) -> Result<Sample> {
        self.check_input(x)?;
        let pick = self.picker.sample(rng);
        if pick == 0 {
            return Ok(Sample { bit: 0, queries: 0 });
        }
        let mut counter = QueryCounter::new(x);
        let bit = self.arms[pick - 1].tree.run_counted(&mut counter)?;
        assert!(
            counter.queries() <= self.query_budget,
            "parity tree read {} bits with budget {}",
            counter.queries(),
            self.query_budget
        );
        Ok(Sample {
            bit,
            queries: counter.queries(),
        })
    }
}

pub fn mixture_output_prob(sim: &MixtureSimulator, x: InputWord) -> Result<f64> {
    sim.output_prob(x)
}

pub fn sample_mixture<R: Rng + ?Sized>(
    sim: &MixtureSimulator,
    x: InputWord,
    rng: &mut R,
) -> Result<Sample> {
    sim.sample(x, rng)
}

/// `R̂`: majority vote over `j` independent runs of `R`.
#[derive(Debug, Clone)]
pub struct AmplifiedSimulator {
    base: MixtureSimulator,
    j: usize,
}

impl AmplifiedSimulator {
    pub fn new(base: MixtureSimulator, j: usize) -> Result<Self> {
        if j == 0 {
            return Err(Error::Invalid(
                "amplification needs j ≥ 1 repetitions".into(),
            ));
        }
        Ok(Self { base, j })
    }

    pub fn base(&self) -> &MixtureSimulator {
        &self.base
    }

    pub fn j(&self) -> usize {
        self.j
    }

    /// Ties (even `j`) are broken by a fair coin.
    pub fn run<R: Rng + ?Sized>(&self, x: InputWord, rng: &mut R) -> Result<Sample> {
        let mut ones = 0usize;
        let mut queries = 0usize;
        for _ in 0..self.j {
            let s = self.base.sample(x, rng)?;
            ones += usize::from(s.bit);
            queries += s.queries;
        }
        assert!(queries <= self.j * self.base.query_budget);
        let bit = match (2 * ones).cmp(&self.j) {
            std::cmp::Ordering::Greater => 1,
            std::cmp::Ordering::Less => 0,
            std::cmp::Ordering::Equal => u8::from(rng.random_bool(0.5)),
        };
        Ok(Sample { bit, queries })
    }
}

pub fn run_amplified<R: Rng + ?Sized>(
    sim: &AmplifiedSimulator,
    x: InputWord,
    rng: &mut R,
) -> Result<Sample> {
    sim.run(x, rng)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AmplificationBound {
    pub bound: f64,
    /// False when `ε̃ ≥ 1/2`, where majority voting cannot help.
    pub useful: bool,
}

/// `exp(−j (1/2 − ε̃)² / (2(1 − ε̃)))`, or 1 (flagged) when `ε̃ ≥ 1/2`.
pub fn amplified_error_bound(eps_tilde: f64, j: i64) -> Result<AmplificationBound> {
    if j < 0 {
        return Err(Error::Invalid(format!(
            "repetition count must be non-negative, got {j}"
        )));
    }
    if !(0.0..=1.0).contains(&eps_tilde) {
        return Err(Error::EpsilonDomain(eps_tilde, "[0, 1]"));
    }
    if eps_tilde >= 0.5 {
        return Ok(AmplificationBound {
            bound: 1.0,
            useful: false,
        });
    }
    let margin = 0.5 - eps_tilde;
    Ok(AmplificationBound {
        bound: (-(j as f64) * margin * margin / (2.0 * (1.0 - eps_tilde))).exp(),
        useful: true,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ChernoffTail {
    /// `⌊(1−β) j p⌋`.
    pub cutoff: u64,
    /// `Σ_{i=0}^{cutoff} C(j,i) p^i (1−p)^{j−i}`.
    pub exact_tail: f64,
    /// `exp(−β² j p / 2)`.
    pub bound: f64,
}

/// Lower binomial tail and its Chernoff bound, summed in log space.
pub fn chernoff_tail(j: u64, p: f64, beta: f64) -> Result<ChernoffTail> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::Invalid(format!("p = {p} outside [0, 1]")));
    }
    if !(0.0..=1.0).contains(&beta) {
        return Err(Error::Invalid(format!("beta = {beta} outside [0, 1]")));
    }
    let jf = j as f64;
    // absorb representation error of decimal p and beta before the floor
    let cutoff = (((1.0 - beta) * jf * p) + 1e-9).floor().min(jf) as u64;
    let bound = (-beta * beta * jf * p / 2.0).exp();

    let exact_tail = if p == 0.0 {
        1.0
    } else if p == 1.0 {
        if cutoff >= j {
            1.0
        } else {
            0.0
        }
    } else {
        let (lp, lq) = (p.ln(), (1.0 - p).ln());
        let ln_j_fact = ln_gamma(jf + 1.0);
        let logs: Vec<f64> = (0..=cutoff)
            .map(|i| {
                let i = i as f64;
                ln_j_fact - ln_gamma(i + 1.0) - ln_gamma(jf - i + 1.0) + i * lp + (jf - i) * lq
            })
            .collect();
        let peak = logs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        (peak + logs.iter().map(|l| (l - peak).exp()).sum::<f64>().ln())
            .exp()
            .min(1.0)
    };
    Ok(ChernoffTail {
        cutoff,
        exact_tail,
        bound,
    })
}

/// Partial Boolean target read off `π₁`: 1 where `π₁ ≥ 1 − ε`, 0 where
/// `π₁ ≤ ε`, outside the promise set otherwise. A 1e-9 tolerance keeps
/// exact values perturbed by round-off inside the promise set.
pub fn threshold_target(pi1: &RealHypercubeFunction, epsilon: f64) -> Vec<Option<u8>> {
    const TOL: f64 = 1e-9;
    pi1.values()
        .iter()
        .map(|&p| {
            if p >= 1.0 - epsilon - TOL {
                Some(1)
            } else if p <= epsilon + TOL {
                Some(0)
            } else {
                None
            }
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InputRow {
    pub x: String,
    pub pi_hat: f64,
    pub f: Option<u8>,
    /// Exact error probability of `R` where the target is defined.
    pub error: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EmpiricalResults {
    pub seed: u64,
    pub trials: u64,
    pub j: usize,
    /// Empirical 1-frequency of single runs, per input.
    pub freq: Vec<f64>,
    /// Empirical error frequency of the amplified simulator on promise inputs.
    pub amplified_error: Vec<Option<f64>>,
    pub max_queries_single: usize,
    pub max_queries_amplified: usize,
    pub within_three_sigma: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SimulationReport {
    pub epsilon: f64,
    pub l1: f64,
    pub eps_tilde: f64,
    pub j: usize,
    pub bound: f64,
    pub amplification_useful: bool,
    pub query_budget: usize,
    pub amplified_query_budget: usize,
    pub worst_error: f64,
    pub contract_held: bool,
    pub per_input: Vec<InputRow>,
    pub empirical: Option<EmpiricalResults>,
}

impl SimulationReport {
    /// Exact contract and, when sampled, the 3σ agreement both held.
    pub fn passed(&self) -> bool {
        self.contract_held && self.empirical.as_ref().is_none_or(|e| e.within_three_sigma)
    }
}

fn three_sigma(p: f64, trials: u64) -> f64 {
    3.0 * (p * (1.0 - p) / trials as f64).sqrt()
}

/// Exact per-input evaluation of `R` against `target`, plus an optional
/// Monte Carlo pass of `trials` runs per input with per-input ChaCha
/// streams derived from `seed`.
pub fn simulation_report(
    sim: &MixtureSimulator,
    target: &[Option<u8>],
    j: usize,
    sampling: Option<(u64, u64)>,
) -> Result<SimulationReport> {
    let n = sim.n();
    if target.len() != 1 << n {
        return Err(Error::DimensionMismatch {
            expected: 1 << n,
            found: target.len(),
        });
    }
    let amplified = AmplifiedSimulator::new(sim.clone(), j)?;
    let eps_tilde = sim.eps_tilde();
    let bound = amplified_error_bound(eps_tilde, j as i64)?;

    let per_input = InputWord::all(n)
        .zip(target)
        .map(|(x, &f)| {
            let pi_hat = sim.output_prob(x)?;
            let error = f.map(|f| if f == 1 { 1.0 - pi_hat } else { pi_hat });
            Ok(InputRow {
                x: x.to_bit_string(),
                pi_hat,
                f,
                error,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let worst_error = per_input.iter().filter_map(|r| r.error).fold(0.0, f64::max);

    let empirical = match sampling {
        None => None,
        Some((_, 0)) => return Err(Error::Invalid("trials must be at least 1".into())),
        Some((seed, trials)) => Some(monte_carlo(
            &amplified, target, &per_input, bound, seed, trials,
        )?),
    };

    Ok(SimulationReport {
        epsilon: sim.source_epsilon(),
        l1: sim.source_l1(),
        eps_tilde,
        j,
        bound: bound.bound,
        amplification_useful: bound.useful,
        query_budget: sim.query_budget(),
        amplified_query_budget: j * sim.query_budget(),
        worst_error,
        contract_held: worst_error <= eps_tilde + 1e-12,
        per_input,
        empirical,
    })
}

struct InputTally {
    ones: u64,
    amplified_errors: Option<u64>,
    max_single: usize,
    max_amplified: usize,
}

fn monte_carlo(
    amplified: &AmplifiedSimulator,
    target: &[Option<u8>],
    rows: &[InputRow],
    bound: AmplificationBound,
    seed: u64,
    trials: u64,
) -> Result<EmpiricalResults> {
    let n = amplified.base().n();
    let tallies = (0..target.len())
        .into_par_iter()
        .map(|idx| {
            let x = InputWord::new(n, idx as u64)?;
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(idx as u64);
            let mut tally = InputTally {
                ones: 0,
                amplified_errors: target[idx].map(|_| 0),
                max_single: 0,
                max_amplified: 0,
            };
            for _ in 0..trials {
                let s = amplified.base().sample(x, &mut rng)?;
                tally.ones += u64::from(s.bit);
                tally.max_single = tally.max_single.max(s.queries);
            }
            if let Some(f) = target[idx] {
                for _ in 0..trials {
                    let s = amplified.run(x, &mut rng)?;
                    if s.bit != f {
                        *tally.amplified_errors.as_mut().expect("promise input") += 1;
                    }
                    tally.max_amplified = tally.max_amplified.max(s.queries);
                }
            }
            Ok(tally)
        })
        .collect::<Result<Vec<_>>>()?;

    let trials_f = trials as f64;
    let freq: Vec<f64> = tallies.iter().map(|t| t.ones as f64 / trials_f).collect();
    let amplified_error: Vec<Option<f64>> = tallies
        .iter()
        .map(|t| t.amplified_errors.map(|e| e as f64 / trials_f))
        .collect();
    let single_ok = freq
        .iter()
        .zip(rows)
        .all(|(&f, r)| (f - r.pi_hat).abs() <= three_sigma(r.pi_hat, trials) + 1e-12);
    let amplified_ok = !bound.useful
        || amplified_error
            .iter()
            .flatten()
            .all(|&e| e <= bound.bound + three_sigma(bound.bound, trials));
    Ok(EmpiricalResults {
        seed,
        trials,
        j: amplified.j(),
        freq,
        amplified_error,
        max_queries_single: tallies.iter().map(|t| t.max_single).max().unwrap_or(0),
        max_queries_amplified: tallies.iter().map(|t| t.max_amplified).max().unwrap_or(0),
        within_three_sigma: single_ok && amplified_ok,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fourier::wht_forward;

    fn dj2_spectrum() -> FourierSpectrum {
        FourierSpectrum::new(2, vec![0.5, 0.0, 0.0, 0.5]).unwrap()
    }

    fn word(bits: &[u8]) -> InputWord {
        InputWord::from_bits(bits).unwrap()
    }

    #[test]
    fn parity_tree_examples() {
        let empty = ParityTree::new(Mask::empty(2), 1).unwrap();
        for x in InputWord::all(2) {
            assert_eq!(run_parity_tree(&empty, x).unwrap(), 1);
        }
        let both = Mask::from_indices(2, &[1, 2]).unwrap();
        let plus = ParityTree::new(both, 1).unwrap();
        let minus = ParityTree::new(both, -1).unwrap();
        assert_eq!(run_parity_tree(&plus, word(&[0, 1])).unwrap(), 0);
        assert_eq!(run_parity_tree(&minus, word(&[0, 1])).unwrap(), 1);
        assert!(ParityTree::new(both, 0).is_err());
        assert!(run_parity_tree(&plus, InputWord::zeros(3)).is_err());
    }

    #[test]
    fn parity_tree_reads_exactly_its_mask() {
        let tree = ParityTree::new(Mask::from_indices(5, &[1, 3, 4]).unwrap(), 1).unwrap();
        let mut counter = QueryCounter::new(InputWord::zeros(5));
        tree.run_counted(&mut counter).unwrap();
        assert_eq!(counter.queries(), 3);
        assert_eq!(tree.query_cost(), 3);
    }

    #[test]
    fn constant_one_mixture() {
        let spec = FourierSpectrum::new(1, vec![1.0, 0.0]).unwrap();
        let sim = build_mixture(&spec, 0.0, 0).unwrap();
        assert_eq!(sim.arms().len(), 1);
        assert!((sim.arms()[0].weight - 2.0 / 3.0).abs() < 1e-15);
        assert_eq!(sim.arms()[0].tree.sign(), 1);
        assert!((sim.zero_arm_weight() - 1.0 / 3.0).abs() < 1e-15);
        assert!((sim.eps_tilde() - 1.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn dj_mixture_arms() {
        let sim = build_mixture(&dj2_spectrum(), 0.0, 1).unwrap();
        let masks: Vec<u64> = sim.arms().iter().map(|a| a.tree.mask().bits()).collect();
        assert_eq!(masks, vec![0b00, 0b11]);
        for arm in sim.arms() {
            assert!((arm.weight - 1.0 / 3.0).abs() < 1e-15);
        }
        assert!((sim.zero_arm_weight() - 1.0 / 3.0).abs() < 1e-15);
        assert!((sim.eps_tilde() - 1.0 / 3.0).abs() < 1e-15);
        assert!((mixture_output_prob(&sim, word(&[0, 0])).unwrap() - 2.0 / 3.0).abs() < 1e-15);
        assert!((mixture_output_prob(&sim, word(&[0, 1])).unwrap() - 1.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn zero_spectrum_mixture() {
        let spec = FourierSpectrum::zero(3).unwrap();
        let sim = build_mixture(&spec, 1.0 / 3.0, 2).unwrap();
        assert!(sim.arms().is_empty());
        assert_eq!(sim.zero_arm_weight(), 1.0);
        assert!((sim.eps_tilde() - 1.0 / 3.0).abs() < 1e-15);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for x in InputWord::all(3) {
            assert_eq!(mixture_output_prob(&sim, x).unwrap(), 0.0);
            assert_eq!(
                sample_mixture(&sim, x, &mut rng).unwrap(),
                Sample { bit: 0, queries: 0 }
            );
            let amp = AmplifiedSimulator::new(sim.clone(), 7).unwrap();
            assert_eq!(run_amplified(&amp, x, &mut rng).unwrap().bit, 0);
        }
    }

    #[test]
    fn mixture_preconditions() {
        let spec = dj2_spectrum();
        assert!(matches!(
            build_mixture(&spec, 0.0, 0),
            Err(Error::DegreeExceedsBudget {
                degree: 2,
                budget: 0
            })
        ));
        assert!(matches!(
            build_mixture(&spec, 0.5, 1),
            Err(Error::EpsilonDomain(..))
        ));
        assert!(matches!(
            build_mixture(&spec, -0.1, 1),
            Err(Error::EpsilonDomain(..))
        ));
    }

    #[test]
    fn sampling_tracks_closed_form() {
        let sim = build_mixture(&dj2_spectrum(), 0.0, 1).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(2024);
        let trials = 100_000;
        let x = word(&[0, 0]);
        let mut ones = 0;
        for _ in 0..trials {
            let s = sample_mixture(&sim, x, &mut rng).unwrap();
            assert!(s.queries == 0 || s.queries == 2);
            ones += u64::from(s.bit);
        }
        let freq = ones as f64 / trials as f64;
        let p = 2.0 / 3.0;
        assert!((freq - p).abs() <= three_sigma(p, trials), "{freq}");
    }

    #[test]
    fn single_repetition_matches_mixture() {
        let sim = build_mixture(&dj2_spectrum(), 0.0, 1).unwrap();
        let amp = AmplifiedSimulator::new(sim.clone(), 1).unwrap();
        let mut a = ChaCha8Rng::seed_from_u64(5);
        let mut b = ChaCha8Rng::seed_from_u64(5);
        for x in (0..200u64).map(|k| InputWord::new(2, k % 4).unwrap()) {
            assert_eq!(
                run_amplified(&amp, x, &mut a).unwrap(),
                sample_mixture(&sim, x, &mut b).unwrap()
            );
        }
        assert!(AmplifiedSimulator::new(sim, 0).is_err());
    }

    #[test]
    fn amplified_bound_examples() {
        let b = amplified_error_bound(4.0 / 9.0, 360).unwrap();
        assert!((b.bound - (-1.0f64).exp()).abs() < 1e-12);
        assert!(b.useful);
        assert_eq!(amplified_error_bound(0.0, 0).unwrap().bound, 1.0);
        for j in [1i64, 48, 201, 1000] {
            let b = amplified_error_bound(1.0 / 3.0, j).unwrap();
            assert!((b.bound - (-(j as f64) / 48.0).exp()).abs() < 1e-12);
        }
        let flat = amplified_error_bound(0.6, 100).unwrap();
        assert_eq!(
            flat,
            AmplificationBound {
                bound: 1.0,
                useful: false
            }
        );
        assert!(amplified_error_bound(0.2, -1).is_err());
    }

    #[test]
    fn chernoff_edge_cases() {
        let t = chernoff_tail(10, 0.5, 0.0).unwrap();
        assert_eq!(t.cutoff, 5);
        assert_eq!(t.bound, 1.0);
        // P[X ≤ 5] for Bin(10, 1/2) = 638/1024
        assert!((t.exact_tail - 638.0 / 1024.0).abs() < 1e-12);

        let t = chernoff_tail(0, 0.3, 0.5).unwrap();
        assert_eq!((t.cutoff, t.exact_tail, t.bound), (0, 1.0, 1.0));

        assert_eq!(chernoff_tail(5, 0.0, 0.5).unwrap().exact_tail, 1.0);
        assert_eq!(chernoff_tail(5, 1.0, 0.5).unwrap().exact_tail, 0.0);
        assert!(chernoff_tail(5, 1.2, 0.5).is_err());
        assert!(chernoff_tail(5, 0.5, -0.1).is_err());
    }

    #[test]
    fn chernoff_large_j_is_finite() {
        let t = chernoff_tail(2000, 0.6, 0.2).unwrap();
        assert!(t.exact_tail.is_finite() && t.exact_tail > 0.0);
        assert!(t.exact_tail <= t.bound);
    }

    #[test]
    fn polynomial_path() {
        let p = MonomialPolynomial::new(1, [(vec![1], 1.0)]).unwrap();
        let sim = simulate_from_polynomial(&p, 1, 0.0).unwrap();
        assert!((sim.source_l1() - 1.0).abs() < 1e-15);
        assert!((sim.eps_tilde() - 1.0 / 3.0).abs() < 1e-15);

        let zero = MonomialPolynomial::constant(2, 0.0).unwrap();
        let sim = simulate_from_polynomial(&zero, 0, 0.0).unwrap();
        assert!(sim.arms().is_empty());
        assert_eq!(sim.eps_tilde(), 0.0);

        let quad = MonomialPolynomial::new(3, [(vec![1, 2, 3], 1.0)]).unwrap();
        assert!(matches!(
            simulate_from_polynomial(&quad, 1, 0.0),
            Err(Error::DegreeExceedsBudget {
                degree: 3,
                budget: 2
            })
        ));
    }

    #[test]
    fn dj_polynomial_matches_spectrum_path() {
        let pi1 = RealHypercubeFunction::new(2, vec![1.0, 0.0, 0.0, 1.0]).unwrap();
        let p = MonomialPolynomial::from_function(&pi1);
        let a = simulate_from_polynomial(&p, 1, 0.0).unwrap();
        let b = build_mixture(&wht_forward(&pi1), 0.0, 1).unwrap();
        assert_eq!(a.arms().len(), b.arms().len());
        for (x, y) in a.arms().iter().zip(b.arms()) {
            assert_eq!(x.tree, y.tree);
            assert!((x.weight - y.weight).abs() < 1e-12);
        }
        assert!((a.eps_tilde() - b.eps_tilde()).abs() < 1e-12);
    }

    #[test]
    fn threshold_with_tolerance() {
        let pi = RealHypercubeFunction::new(2, vec![0.999_999_999_9, 0.5, 1e-11, 0.8]).unwrap();
        assert_eq!(
            threshold_target(&pi, 0.0),
            vec![Some(1), None, Some(0), None]
        );
        assert_eq!(
            threshold_target(&pi, 0.25),
            vec![Some(1), None, Some(0), Some(1)]
        );
    }

    #[test]
    fn report_is_reproducible() {
        let sim = build_mixture(&dj2_spectrum(), 0.0, 1).unwrap();
        let target = vec![Some(1), Some(0), Some(0), Some(1)];
        let a = simulation_report(&sim, &target, 11, Some((7, 2000))).unwrap();
        let b = simulation_report(&sim, &target, 11, Some((7, 2000))).unwrap();
        assert_eq!(a, b);
        assert!(a.contract_held);
        assert!((a.worst_error - 1.0 / 3.0).abs() < 1e-12);
        let e = a.empirical.as_ref().unwrap();
        assert!(e.max_queries_single <= 2);
        assert!(e.max_queries_amplified <= 22);
        assert!(simulation_report(&sim, &target, 11, Some((7, 0))).is_err());
        assert!(simulation_report(&sim, &target[..3], 11, None).is_err());
    }
}
