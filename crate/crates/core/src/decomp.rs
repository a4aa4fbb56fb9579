//! State decomposition of a query algorithm into phase-flip components.
//!
//! With `Ũ_j = U_j ⋯ U_0` and `P̄_i` the projector onto the block
//! `{|i⟩|j⟩ : j = 1..m}`, the conjugated projectors `P̃_i^j = Ũ_j† P̄_i Ũ_j`
//! form a CSOP for each level `j`. The component for an index tuple
//! `k = (k_0, …, k_t)` is
//!
//! ```text
//! |Ψ(k)⟩ = P̃_{k_t}^t ⋯ P̃_{k_0}^0 |Ψ⟩
//! ```
//!
//! and the input enters only through the signs `(−1)^{Σ_i x_{k_i}}`.
//!
//! All components live in the frame of the initial state. The final state
//! satisfies `Ũ_t† |Ψ_x^f⟩ = Σ_k (−1)^{Σ_{i<t} x_{k_i}} |Ψ(k)⟩`: the last
//! tuple entry carries no query phase because no oracle call follows `U_t`.
//! Output probabilities are therefore read through `Ũ_t† P_z Ũ_t`, and the
//! pair relation `(k, h) ∼ b` XORs the entries `k_0..k_{t−1}`, `h_0..h_{t−1}`.

use std::collections::{BTreeMap, HashMap};

use num_complex::Complex64;
use serde::Serialize;

use crate::bounds::ChainMetrics;
use crate::error::{Error, Result};
use crate::fourier::{FourierSpectrum, InputWord};
use crate::qqm::{Matrix, QueryAlgorithm, State};

/// Components with squared norm at or below this are dropped.
pub const VECTOR_THRESHOLD: f64 = 1e-12;

/// Largest number of index tuples `(n+1)^{t+1}` a decomposition may range over.
pub const MAX_TUPLES: u128 = 10_000_000;

/// `(k_0, …, k_t)` with every entry in `0..=n`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct IndexTuple(Vec<u8>);

impl IndexTuple {
    pub fn entries(&self) -> &[u8] {
        &self.0
    }

    /// Mask obtained by XOR-ing bit `k_i − 1` for every entry `k_i ≥ 1`
    /// among the first `count` entries. Repeated indices cancel.
    pub fn parity_mask(&self, count: usize) -> u64 {
        self.0[..count]
            .iter()
            .filter(|&&k| k > 0)
            .fold(0u64, |acc, &k| acc ^ (1 << (k - 1)))
    }
}

#[derive(Debug, Clone)]
pub struct StateDecomposition {
    n: usize,
    m: usize,
    t: usize,
    components: BTreeMap<IndexTuple, State>,
    /// `Ũ_t`, mapping the initial frame to the output frame.
    final_unitary: Matrix,
    labels: Vec<u32>,
    projectors: Vec<Matrix>,
    discarded_mass: f64,
}

/// Conjugated block projectors `P̃_i^j` for `i = 0..=n` at level `j`.
pub fn level_projectors(alg: &QueryAlgorithm, level: usize) -> Result<Vec<Matrix>> {
    let cum = alg.cumulative_unitaries();
    let u = cum
        .get(level)
        .ok_or_else(|| Error::Invalid(format!("level {level} beyond t = {}", alg.t())))?;
    let m = alg.m();
    Ok((0..=alg.n())
        .map(|i| {
            let mut block = Matrix::zeros(alg.dim(), alg.dim());
            for j in 0..m {
                block[(i * m + j, i * m + j)] = Complex64::new(1.0, 0.0);
            }
            u.adjoint() * block * u
        })
        .collect())
}

/// Builds the decomposition level by level, pruning vanishing branches.
pub fn decompose(alg: &QueryAlgorithm) -> Result<StateDecomposition> {
    let (n, m, t) = (alg.n(), alg.m(), alg.t());
    let tuples = (n as u128 + 1)
        .checked_pow(t as u32 + 1)
        .unwrap_or(u128::MAX);
    if tuples > MAX_TUPLES {
        return Err(Error::SizeGuard {
            what: "index tuple count (n+1)^(t+1)",
            value: tuples,
            limit: MAX_TUPLES,
        });
    }
    let cum = alg.cumulative_unitaries();
    let mut discarded_mass = 0.0;
    let mut frontier: Vec<(Vec<u8>, State)> = vec![(Vec::new(), alg.initial().clone())];
    for u in &cum {
        let u_adj = u.adjoint();
        let mut next = Vec::with_capacity(frontier.len() * (n + 1));
        for (prefix, v) in &frontier {
            let rotated = u * v;
            for i in 0..=n {
                let mut block = State::zeros(rotated.len());
                block.rows_mut(i * m, m).copy_from(&rotated.rows(i * m, m));
                let component = &u_adj * block;
                let mass = component.norm_squared();
                if mass > VECTOR_THRESHOLD {
                    let mut tuple = prefix.clone();
                    tuple.push(i as u8);
                    next.push((tuple, component));
                } else {
                    discarded_mass += mass;
                }
            }
        }
        frontier = next;
    }
    Ok(StateDecomposition {
        n,
        m,
        t,
        components: frontier
            .into_iter()
            .map(|(k, v)| (IndexTuple(k), v))
            .collect(),
        final_unitary: cum[t].clone(),
        labels: alg.csop().labels().to_vec(),
        projectors: alg.csop().projectors().to_vec(),
        discarded_mass,
    })
}

/// Count, norm and extremal quantities of the stored components.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DecompositionMetrics {
    /// `d = #{k : Ψ(k) ≠ 0}`.
    pub d_count: usize,
    /// `(Σ_k ‖Ψ(k)‖)²`.
    pub norm_sum_sq: f64,
    /// `min_k ⟨Ψ(k)|Ψ(k)⟩`.
    pub min_norm_sq: f64,
    /// `Σ_k ⟨Ψ(k)|Ψ(k)⟩`, which is 1 up to discarded mass.
    pub total_norm_sq: f64,
}

impl StateDecomposition {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn t(&self) -> usize {
        self.t
    }

    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    pub fn components(&self) -> impl Iterator<Item = (&IndexTuple, &State)> {
        self.components.iter()
    }

    pub fn discarded_mass(&self) -> f64 {
        self.discarded_mass
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

    fn signed_sum(&self, x: InputWord, phased_entries: usize) -> State {
        let dim = (self.n + 1) * self.m;
        self.components
            .iter()
            .fold(State::zeros(dim), |mut acc, (k, v)| {
                if (k.parity_mask(phased_entries) & x.bits())
                    .count_ones()
                    .is_multiple_of(2)
                {
                    acc += v;
                } else {
                    acc -= v;
                }
                acc
            })
    }

    /// `Σ_k (−1)^{Σ_{i=0}^{t} x_{k_i}} |Ψ(k)⟩`, which equals
    /// `Ũ_t† O_x U_t O_x ⋯ U_1 O_x U_0 |Ψ⟩` (t+1 oracle calls).
    pub fn reconstruct(&self, x: InputWord) -> Result<State> {
        self.check_input(x)?;
        Ok(self.signed_sum(x, self.t + 1))
    }

    /// `Σ_k (−1)^{Σ_{i<t} x_{k_i}} |Ψ(k)⟩ = Ũ_t† |Ψ_x^f⟩`.
    pub fn reconstruct_output_frame(&self, x: InputWord) -> Result<State> {
        self.check_input(x)?;
        Ok(self.signed_sum(x, self.t))
    }

    fn projector(&self, z: u32) -> Result<&Matrix> {
        self.labels
            .iter()
            .position(|&l| l == z)
            .map(|k| &self.projectors[k])
            .ok_or(Error::UnknownLabel(z))
    }

    /// `P_z Ũ_t |Ψ(k)⟩` for every stored component, in tuple order.
    fn measured(&self, z: u32) -> Result<Vec<(&IndexTuple, State)>> {
        let p = self.projector(z)?;
        let op = p * &self.final_unitary;
        Ok(self.components.iter().map(|(k, v)| (k, &op * v)).collect())
    }

    /// `L̃ = Σ_k Σ_h |⟨Ψ(k)| Ũ_t† P_z Ũ_t |Ψ(h)⟩|`, an upper bound on `L(π_z)`.
    pub fn l_tilde(&self, z: u32) -> Result<f64> {
        let phi = self.measured(z)?;
        let mut total = 0.0;
        for (a, (_, u)) in phi.iter().enumerate() {
            total += u.dotc(u).norm();
            for (_, v) in &phi[a + 1..] {
                total += 2.0 * u.dotc(v).norm();
            }
        }
        Ok(total)
    }

    /// Pair sums grouped by the mask `b` with `(k, h) ∼ b`; these are the
    /// Fourier coefficients of `π_z`.
    pub fn grouped_coefficients(&self, z: u32) -> Result<FourierSpectrum> {
        let phi = self.measured(z)?;
        let mut groups: HashMap<u64, Complex64> = HashMap::new();
        let masks: Vec<u64> = phi.iter().map(|(k, _)| k.parity_mask(self.t)).collect();
        for (a, (_, u)) in phi.iter().enumerate() {
            for (b, (_, v)) in phi.iter().enumerate() {
                *groups.entry(masks[a] ^ masks[b]).or_default() += u.dotc(v);
            }
        }
        let mut coeffs = vec![0.0; 1 << self.n];
        for (mask, value) in groups {
            coeffs[mask as usize] = value.re;
        }
        FourierSpectrum::new(self.n, coeffs)
    }

    /// `Σ_b |Σ_{(k,h)∼b} ⟨Ψ(k)| Ũ_t† P_z Ũ_t |Ψ(h)⟩|`, equal to `L(π_z)`.
    pub fn grouped_l(&self, z: u32) -> Result<f64> {
        Ok(self.grouped_coefficients(z)?.l1_norm())
    }

    pub fn summary_metrics(&self) -> Result<DecompositionMetrics> {
        if self.components.is_empty() {
            return Err(Error::EmptyDecomposition);
        }
        let masses: Vec<f64> = self.components.values().map(|v| v.norm_squared()).collect();
        let norm_sum: f64 = masses.iter().map(|m| m.sqrt()).sum();
        Ok(DecompositionMetrics {
            d_count: masses.len(),
            norm_sum_sq: norm_sum * norm_sum,
            min_norm_sq: masses.iter().copied().fold(f64::INFINITY, f64::min),
            total_norm_sq: masses.iter().sum(),
        })
    }

    /// Every argument of the speedup bound chain, given `L(π_z)` from the spectrum.
    pub fn chain_metrics(&self, z: u32, l1: f64) -> Result<ChainMetrics> {
        let metrics = self.summary_metrics()?;
        Ok(ChainMetrics {
            l1,
            l_tilde: self.l_tilde(z)?,
            norm_sum_sq: metrics.norm_sum_sq,
            d: metrics.d_count as f64,
            inv_min_norm: 1.0 / metrics.min_norm_sq,
        })
    }

    pub fn to_json(&self) -> serde_json::Value {
        let vectors: Vec<_> = self
            .components
            .iter()
            .map(|(k, v)| {
                serde_json::json!({
                    "tuple": k,
                    "vector": v.iter().map(|c| [c.re, c.im]).collect::<Vec<_>>(),
                })
            })
            .collect();
        serde_json::json!({
            "n": self.n,
            "m": self.m,
            "t": self.t,
            "threshold": VECTOR_THRESHOLD,
            "vectors": vectors,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fourier::wht_forward;
    use crate::qqm::{
        build_deutsch_jozsa, build_random_algorithm, max_modulus, oracle_apply, Csop,
    };

    fn single_block(n: usize, p1_identity: bool) -> QueryAlgorithm {
        let dim = n + 1;
        let mut initial = State::zeros(dim);
        initial[0] = Complex64::new(1.0, 0.0);
        let (p0, p1) = if p1_identity {
            (Matrix::zeros(dim, dim), Matrix::identity(dim, dim))
        } else {
            (Matrix::identity(dim, dim), Matrix::zeros(dim, dim))
        };
        QueryAlgorithm::new(
            n,
            1,
            initial,
            vec![Matrix::identity(dim, dim)],
            Csop::new(vec![0, 1], vec![p0, p1]).unwrap(),
        )
        .unwrap()
    }

    #[test]
    fn zero_query_identity_has_one_component() {
        let alg = single_block(3, true);
        let d = decompose(&alg).unwrap();
        assert_eq!(d.len(), 1);
        let (k, v) = d.components().next().unwrap();
        assert_eq!(k.entries(), &[0]);
        assert_eq!(v, alg.initial());

        let m = d.summary_metrics().unwrap();
        assert_eq!((m.d_count, m.norm_sum_sq, m.min_norm_sq), (1, 1.0, 1.0));
        assert!((d.l_tilde(1).unwrap() - 1.0).abs() < 1e-15);
        assert!((d.grouped_l(1).unwrap() - 1.0).abs() < 1e-15);
        assert_eq!(d.grouped_l(0).unwrap(), 0.0);
    }

    #[test]
    fn two_half_mass_components() {
        let h = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        let alg = QueryAlgorithm::new(
            1,
            1,
            State::from_vec(vec![h, h]),
            vec![Matrix::identity(2, 2)],
            Csop::binary(Matrix::identity(2, 2)).unwrap(),
        )
        .unwrap();
        let m = decompose(&alg).unwrap().summary_metrics().unwrap();
        assert_eq!(m.d_count, 2);
        assert!((m.norm_sum_sq - 2.0).abs() < 1e-12);
        assert!((m.min_norm_sq - 0.5).abs() < 1e-12);
        assert!((m.total_norm_sq - 1.0).abs() < 1e-12);
    }

    #[test]
    fn zero_query_components_sum_to_initial() {
        let alg = build_random_algorithm(2, 2, 0, 3).unwrap();
        let d = decompose(&alg).unwrap();
        let sum = d.reconstruct_output_frame(InputWord::zeros(2)).unwrap();
        assert!(max_modulus(&(sum - alg.initial())) < 1e-12);
    }

    #[test]
    fn reconstruct_matches_direct_simulation() {
        let alg = build_random_algorithm(3, 2, 2, 17).unwrap();
        let d = decompose(&alg).unwrap();
        let ut_adj = alg.cumulative_unitaries()[alg.t()].adjoint();
        for x in InputWord::all(3) {
            let direct = alg.run(x).unwrap();
            let phased = &ut_adj * oracle_apply(x, alg.m(), &direct).unwrap();
            assert!(max_modulus(&(d.reconstruct(x).unwrap() - phased)) <= 1e-8);
            let output_side = &ut_adj * &direct;
            assert!(max_modulus(&(d.reconstruct_output_frame(x).unwrap() - output_side)) <= 1e-8);
        }
    }

    #[test]
    fn all_zero_input_sums_components() {
        let alg = build_deutsch_jozsa(4).unwrap();
        let d = decompose(&alg).unwrap();
        let x = InputWord::zeros(4);
        let expected = alg.cumulative_unitaries()[1].adjoint() * alg.run(x).unwrap();
        assert!(max_modulus(&(d.reconstruct(x).unwrap() - expected)) < 1e-12);
    }

    #[test]
    fn dj_reconstruction_is_tight() {
        let alg = build_deutsch_jozsa(4).unwrap();
        let d = decompose(&alg).unwrap();
        let ut_adj = alg.cumulative_unitaries()[1].adjoint();
        for x in InputWord::all(4) {
            let direct = &ut_adj * oracle_apply(x, 1, &alg.run(x).unwrap()).unwrap();
            assert!(max_modulus(&(d.reconstruct(x).unwrap() - direct)) <= 1e-10);
        }
    }

    #[test]
    fn dj_counts_are_stable() {
        let a = decompose(&build_deutsch_jozsa(2).unwrap()).unwrap();
        let b = decompose(&build_deutsch_jozsa(2).unwrap()).unwrap();
        assert_eq!(a.len(), b.len());
        assert!(!a.is_empty() && a.len() <= 9);
        assert!(a.l_tilde(1).unwrap() >= 1.0 - 1e-9);
        assert!((a.grouped_l(1).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn level_projectors_partition_identity() {
        let alg = build_random_algorithm(2, 2, 2, 4).unwrap();
        for level in 0..=alg.t() {
            let sum = level_projectors(&alg, level)
                .unwrap()
                .into_iter()
                .fold(Matrix::zeros(alg.dim(), alg.dim()), |acc, p| acc + p);
            assert!((sum - Matrix::identity(alg.dim(), alg.dim())).norm() < 1e-9);
        }
        assert!(level_projectors(&alg, 3).is_err());
    }

    #[test]
    fn grouped_coefficients_are_the_spectrum() {
        let alg = build_random_algorithm(3, 1, 2, 8).unwrap();
        let d = decompose(&alg).unwrap();
        let spectral = wht_forward(&alg.output_probability_function(1).unwrap());
        let grouped = d.grouped_coefficients(1).unwrap();
        for (a, b) in spectral.coeffs().iter().zip(grouped.coeffs()) {
            assert!((a - b).abs() < 1e-10);
        }
    }

    #[test]
    fn mass_is_conserved() {
        let alg = build_random_algorithm(3, 2, 3, 21).unwrap();
        let d = decompose(&alg).unwrap();
        let m = d.summary_metrics().unwrap();
        assert!((m.total_norm_sq + d.discarded_mass() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn unknown_label_is_rejected() {
        let d = decompose(&build_deutsch_jozsa(2).unwrap()).unwrap();
        assert!(matches!(d.l_tilde(5), Err(Error::UnknownLabel(5))));
        assert!(matches!(d.grouped_l(5), Err(Error::UnknownLabel(5))));
    }

    #[test]
    fn parity_mask_cancels_repeats() {
        let k = IndexTuple(vec![2, 0, 2, 3]);
        assert_eq!(k.parity_mask(3), 0);
        assert_eq!(k.parity_mask(4), 0b100);
    }

    #[test]
    fn export_layout() {
        let d = decompose(&build_deutsch_jozsa(2).unwrap()).unwrap();
        let v = d.to_json();
        assert_eq!(v["t"], 1);
        assert_eq!(v["threshold"], 1e-12);
        let first = &v["vectors"][0];
        assert_eq!(first["tuple"].as_array().unwrap().len(), 2);
        assert_eq!(first["vector"].as_array().unwrap().len(), 3);
    }
}
