//! Closed-form speedup caps built on
//!
//! ```text
//! F_ε(l) = ⌈ −16 ln(ε) (1 + l)(1 + l − ε) / (1 − 2ε)² ⌉,   0 < ε < 1/2.
//! ```
//!
//! `R_ε(f)` is never computed here. Callers supply known lower bounds where a
//! quotient needs one.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{Error, Result};

fn check_epsilon(epsilon: f64) -> Result<()> {
    if epsilon > 0.0 && epsilon < 0.5 {
        Ok(())
    } else {
        Err(Error::EpsilonDomain(epsilon, "(0, 1/2)"))
    }
}

fn check_argument(l: f64) -> Result<()> {
    if l.is_finite() && l >= 0.0 {
        Ok(())
    } else {
        Err(Error::Invalid(format!(
            "bound argument {l} must be finite and non-negative"
        )))
    }
}

/// The expression inside the ceiling of `F_ε(l)`.
pub fn f_epsilon_real(epsilon: f64, l: f64) -> Result<f64> {
    check_epsilon(epsilon)?;
    check_argument(l)?;
    let gap = 1.0 - 2.0 * epsilon;
    Ok(-16.0 * epsilon.ln() * (1.0 + l) * (1.0 + l - epsilon) / (gap * gap))
}

/// `F_ε(l)`, with the ceiling applied once to the whole expression.
pub fn f_epsilon(epsilon: f64, l: f64) -> Result<u64> {
    Ok(f_epsilon_real(epsilon, l)?.ceil() as u64)
}

/// Mixture error `ε̃ = (ε + L) / (1 + 2L)`.
pub fn mixture_error(epsilon: f64, l1: f64) -> f64 {
    (epsilon + l1) / (1.0 + 2.0 * l1)
}

/// Repetition count `j` solving `target = exp(−j (1/2 − ε̃)² / (2 (1 − ε̃)))`.
pub fn repetitions_for_target(target: f64, eps_tilde: f64) -> Result<f64> {
    check_epsilon(target)?;
    if !(0.0..0.5).contains(&eps_tilde) {
        return Err(Error::EpsilonDomain(
            eps_tilde,
            "[0, 1/2) for the mixture error",
        ));
    }
    let margin = 0.5 - eps_tilde;
    Ok(-2.0 * (1.0 - eps_tilde) * target.ln() / (margin * margin))
}

/// `⌈2j⌉` where `j` drives the amplified mixture error down to `ε`, with the
/// same `ε` as the quantum error. This is the query cap the amplified
/// simulator actually certifies per query of the quantum algorithm.
pub fn amplification_query_cap(epsilon: f64, l: f64) -> Result<u64> {
    check_argument(l)?;
    let j = repetitions_for_target(epsilon, mixture_error(epsilon, l))?;
    Ok((2.0 * j).ceil() as u64)
}

/// Arguments of the bound chain
/// `L(π₁) ≤ L̃ ≤ (Σ‖Ψ(k)‖)² ≤ d ≤ 1/min⟨Ψ(k)|Ψ(k)⟩`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ChainMetrics {
    pub l1: f64,
    pub l_tilde: f64,
    pub norm_sum_sq: f64,
    pub d: f64,
    pub inv_min_norm: f64,
}

impl ChainMetrics {
    pub const KEYS: [&'static str; 5] = ["l1", "l_tilde", "norm_sum_sq", "d", "inv_min_norm"];

    pub fn values(&self) -> [f64; 5] {
        [
            self.l1,
            self.l_tilde,
            self.norm_sum_sq,
            self.d,
            self.inv_min_norm,
        ]
    }

    /// True when each link holds up to `slack`.
    pub fn is_ordered(&self, slack: f64) -> bool {
        self.values().windows(2).all(|w| w[0] <= w[1] + slack)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundReport {
    pub epsilon: f64,
    pub inputs: BTreeMap<String, f64>,
    pub f_values: BTreeMap<String, u64>,
    pub caps: BTreeMap<String, f64>,
    pub notes: Vec<String>,
}

impl BoundReport {
    fn new(epsilon: f64) -> Self {
        Self {
            epsilon,
            inputs: BTreeMap::new(),
            f_values: BTreeMap::new(),
            caps: BTreeMap::new(),
            notes: Vec::new(),
        }
    }

    /// `F_ε` values along the chain, in chain order.
    pub fn chain_values(&self) -> Vec<u64> {
        ChainMetrics::KEYS
            .iter()
            .filter_map(|k| self.f_values.get(*k).copied())
            .collect()
    }

    pub fn chain_is_monotone(&self) -> bool {
        self.chain_values().windows(2).all(|w| w[0] <= w[1])
    }
}

/// `R_ε(f)/t` caps from the Fourier 1-norm and the decomposition metrics.
pub fn speedup_bound_quantum(metrics: &ChainMetrics, epsilon: f64) -> Result<BoundReport> {
    let mut report = BoundReport::new(epsilon);
    for (key, value) in ChainMetrics::KEYS.iter().zip(metrics.values()) {
        report.inputs.insert(key.to_string(), value);
        report
            .f_values
            .insert(key.to_string(), f_epsilon(epsilon, value)?);
    }
    report
        .caps
        .insert("r_eps_per_query".into(), report.f_values["l1"] as f64);
    report.caps.insert(
        "amplification_2j_l1".into(),
        amplification_query_cap(epsilon, metrics.l1)? as f64,
    );
    report.notes.push(
        "f_values bound R_eps(f)/t; keys follow l1 <= l_tilde <= norm_sum_sq <= d <= inv_min_norm"
            .into(),
    );
    if metrics.l1 > 0.0 {
        report.notes.push(format!(
            "solving the amplified error for j gives ceil(2j) = {} at l1, which exceeds F_eps(l1) = {} whenever l1 > 0",
            report.caps["amplification_2j_l1"], report.f_values["l1"]
        ));
    }
    Ok(report)
}

/// Lower bound `Q_E(f) ≥ R_ε(f) / F_ε(L(f))` for a total function, given a
/// known lower bound on `R_ε(f)`.
pub fn exact_quantum_lower_bound(l1_of_f: f64, r_eps_lower: f64, epsilon: f64) -> Result<f64> {
    Ok(r_eps_lower / f_epsilon(epsilon, l1_of_f)? as f64)
}

/// `R_ε(f)/(2t) ≤ F_ε(L(p))` for a degree-≤2t approximating polynomial.
pub fn polynomial_speedup_bound(l1_of_p: f64, t: usize, epsilon: f64) -> Result<BoundReport> {
    let f = f_epsilon(epsilon, l1_of_p)?;
    let mut report = BoundReport::new(epsilon);
    report.inputs.insert("l1_p".into(), l1_of_p);
    report.inputs.insert("t".into(), t as f64);
    report.f_values.insert("l1_p".into(), f);
    report
        .caps
        .insert("r_eps".into(), (2 * t) as f64 * f as f64);
    report
        .notes
        .push("polynomial cap divides R_eps by 2t, whereas the algorithm cap divides by t".into());
    Ok(report)
}

/// The two Deutsch–Jozsa caps on `R_ε`: the closed form with `(2 − ε)` as
/// displayed for DJ, and `F_ε(1)` from `L(π₁) = 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DjBound {
    pub displayed: u64,
    pub f_at_one: u64,
}

pub fn dj_randomized_upper_bound(epsilon: f64) -> Result<DjBound> {
    check_epsilon(epsilon)?;
    let gap = 1.0 - 2.0 * epsilon;
    let displayed = (-16.0 * epsilon.ln() * (2.0 - epsilon) / (gap * gap)).ceil() as u64;
    Ok(DjBound {
        displayed,
        f_at_one: f_epsilon(epsilon, 1.0)?,
    })
}
