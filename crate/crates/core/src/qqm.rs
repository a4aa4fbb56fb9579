//! Exact state-vector simulation of quantum query algorithms.
//!
//! The Hilbert space has basis `|i⟩|j⟩` with query position `i ∈ {0..n}` and
//! workspace index `j ∈ {1..m}`; `|i⟩|j⟩` is stored at offset `i·m + (j−1)`.
//! An algorithm is `U_t O_x U_{t−1} ⋯ O_x U_0 |Ψ⟩` followed by a measurement
//! given by a complete set of orthogonal projectors (CSOP).

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fourier::{InputWord, RealHypercubeFunction};

pub type Matrix = DMatrix<Complex64>;
pub type State = DVector<Complex64>;

/// Frobenius tolerance for every validation check.
pub const VALIDATION_TOLERANCE: f64 = 1e-9;

/// Largest `n` for which the exhaustive 2^n input sweep is allowed.
pub const MAX_SWEEP_BITS: usize = 20;

/// Largest Hilbert-space dimension accepted by the random builder.
pub const MAX_RANDOM_DIM: usize = 64;

/// Largest query count accepted by the random builder.
pub const MAX_RANDOM_QUERIES: usize = 4;

/// One check of [`QueryAlgorithm::validate`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckResult {
    pub name: &'static str,
    pub worst_deviation: f64,
    /// Which object produced the worst deviation, e.g. `U_2` or `P_1`.
    pub locus: String,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ValidationReport {
    pub tolerance: f64,
    pub checks: Vec<CheckResult>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn worst_deviation(&self) -> f64 {
        self.checks
            .iter()
            .map(|c| c.worst_deviation)
            .fold(0.0, f64::max)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckResult> {
        self.checks.iter().filter(|c| !c.passed)
    }

    pub fn failure_summary(&self) -> String {
        let parts: Vec<String> = self
            .failures()
            .map(|c| {
                format!(
                    "{} at {} (deviation {:.3e})",
                    c.name, c.locus, c.worst_deviation
                )
            })
            .collect();
        if parts.is_empty() {
            "none".to_string()
        } else {
            parts.join("; ")
        }
    }

    fn record(&mut self, name: &'static str, worst: Option<(f64, String)>) {
        let (worst_deviation, locus) = worst.unwrap_or((0.0, "-".to_string()));
        self.checks.push(CheckResult {
            name,
            worst_deviation,
            locus,
            passed: worst_deviation <= self.tolerance,
        });
    }
}

fn worst_of(items: impl Iterator<Item = (f64, String)>) -> Option<(f64, String)> {
    items.fold(None, |acc, (d, locus)| match acc {
        // a NaN deviation wins so that it surfaces as a failure
        Some((best, _)) if best.is_nan() || !(d.is_nan() || d > best) => acc,
        _ => Some((d, locus)),
    })
}

/// A complete set of orthogonal projectors, one per output label.
#[derive(Debug, Clone, PartialEq)]
pub struct Csop {
    labels: Vec<u32>,
    projectors: Vec<Matrix>,
}

impl Csop {
    pub fn new(labels: Vec<u32>, projectors: Vec<Matrix>) -> Result<Self> {
        if labels.is_empty() || labels.len() != projectors.len() {
            return Err(Error::Invalid(format!(
                "CSOP needs one projector per label, got {} labels and {} projectors",
                labels.len(),
                projectors.len()
            )));
        }
        let mut sorted = labels.clone();
        sorted.sort_unstable();
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::Invalid("duplicate CSOP label".into()));
        }
        let dim = projectors[0].nrows();
        for p in &projectors {
            if p.nrows() != dim || p.ncols() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: if p.nrows() != dim {
                        p.nrows()
                    } else {
                        p.ncols()
                    },
                });
            }
        }
        Ok(Self { labels, projectors })
    }

    /// `{P_0 = I − P, P_1 = P}`.
    pub fn binary(p1: Matrix) -> Result<Self> {
        let p0 = Matrix::identity(p1.nrows(), p1.ncols()) - &p1;
        Self::new(vec![0, 1], vec![p0, p1])
    }

    pub fn labels(&self) -> &[u32] {
        &self.labels
    }

    pub fn projectors(&self) -> &[Matrix] {
        &self.projectors
    }

    pub fn dim(&self) -> usize {
        self.projectors[0].nrows()
    }

    pub fn projector(&self, z: u32) -> Result<&Matrix> {
        self.labels
            .iter()
            .position(|&l| l == z)
            .map(|k| &self.projectors[k])
            .ok_or(Error::UnknownLabel(z))
    }

    /// True when the labels are exactly {0, 1}.
    pub fn is_binary(&self) -> bool {
        let mut l = self.labels.clone();
        l.sort_unstable();
        l == [0, 1]
    }
}

/// A validated `t`-query algorithm: `(|Ψ⟩, U_0..U_t, CSOP)`.
#[derive(Debug, Clone, PartialEq)]
pub struct QueryAlgorithm {
    n: usize,
    m: usize,
    initial: State,
    unitaries: Vec<Matrix>,
    csop: Csop,
}

impl QueryAlgorithm {
    /// Checks shapes, then runs [`validate`](Self::validate) and refuses on
    /// any deviation above [`VALIDATION_TOLERANCE`].
    pub fn new(
        n: usize,
        m: usize,
        initial: State,
        unitaries: Vec<Matrix>,
        csop: Csop,
    ) -> Result<Self> {
        let alg = Self::from_parts_unchecked(n, m, initial, unitaries, csop)?;
        let report = alg.validate();
        if report.passed() {
            Ok(alg)
        } else {
            Err(Error::Validation(Box::new(report)))
        }
    }

    /// Shape checks only; the result may violate unitarity or CSOP rules.
    pub(crate) fn from_parts_unchecked(
        n: usize,
        m: usize,
        initial: State,
        unitaries: Vec<Matrix>,
        csop: Csop,
    ) -> Result<Self> {
        if m == 0 {
            return Err(Error::Invalid(
                "workspace multiplicity m must be at least 1".into(),
            ));
        }
        if n > 63 {
            return Err(Error::SizeGuard {
                what: "input bit count",
                value: n as u128,
                limit: 63,
            });
        }
        let dim = (n + 1) * m;
        if unitaries.is_empty() {
            return Err(Error::Invalid("an algorithm needs at least U_0".into()));
        }
        if initial.len() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: initial.len(),
            });
        }
        for u in &unitaries {
            if u.nrows() != dim || u.ncols() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: if u.nrows() != dim {
                        u.nrows()
                    } else {
                        u.ncols()
                    },
                });
            }
        }
        if csop.dim() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: csop.dim(),
            });
        }
        Ok(Self {
            n,
            m,
            initial,
            unitaries,
            csop,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    /// Number of queries.
    pub fn t(&self) -> usize {
        self.unitaries.len() - 1
    }

    pub fn dim(&self) -> usize {
        (self.n + 1) * self.m
    }

    pub fn initial(&self) -> &State {
        &self.initial
    }

    pub fn unitaries(&self) -> &[Matrix] {
        &self.unitaries
    }

    pub fn csop(&self) -> &Csop {
        &self.csop
    }

    /// Offset of basis state `|i⟩|j⟩`, `j` 1-based.
    pub fn basis_index(&self, i: usize, j: usize) -> usize {
        basis_index(self.m, i, j)
    }

    /// Prefix products `Ũ_k = U_k ⋯ U_0` for `k = 0..=t`.
    pub fn cumulative_unitaries(&self) -> Vec<Matrix> {
        let mut out: Vec<Matrix> = Vec::with_capacity(self.unitaries.len());
        for u in &self.unitaries {
            let next = match out.last() {
                Some(prev) => u * prev,
                None => u.clone(),
            };
            out.push(next);
        }
        out
    }

    pub fn validate(&self) -> ValidationReport {
        let dim = self.dim();
        let id = Matrix::identity(dim, dim);
        let mut report = ValidationReport {
            tolerance: VALIDATION_TOLERANCE,
            checks: Vec::new(),
        };

        report.record(
            "initial norm",
            Some(((self.initial.norm() - 1.0).abs(), "|Ψ⟩".to_string())),
        );
        report.record(
            "unitarity",
            worst_of(
                self.unitaries
                    .iter()
                    .enumerate()
                    .map(|(k, u)| ((u.adjoint() * u - &id).norm(), format!("U_{k}"))),
            ),
        );

        let named = || self.csop.labels.iter().zip(&self.csop.projectors);
        report.record(
            "hermiticity",
            worst_of(named().map(|(z, p)| ((p - p.adjoint()).norm(), format!("P_{z}")))),
        );
        report.record(
            "idempotence",
            worst_of(named().map(|(z, p)| ((p * p - p).norm(), format!("P_{z}")))),
        );
        report.record(
            "orthogonality",
            worst_of(named().enumerate().flat_map(|(a, (z, p))| {
                named()
                    .skip(a + 1)
                    .map(move |(w, q)| ((p * q).norm(), format!("P_{z}·P_{w}")))
            })),
        );
        let total = self
            .csop
            .projectors
            .iter()
            .fold(Matrix::zeros(dim, dim), |acc, p| acc + p);
        report.record(
            "completeness",
            Some(((total - &id).norm(), "Σ_z P_z".to_string())),
        );
        report
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

    /// Final state `|Ψ_x^f⟩ = U_t O_x U_{t−1} ⋯ O_x U_0 |Ψ⟩`.
    pub fn run(&self, x: InputWord) -> Result<State> {
        self.check_input(x)?;
        let mut state = &self.unitaries[0] * &self.initial;
        for u in &self.unitaries[1..] {
            apply_oracle_in_place(x, self.m, &mut state);
            state = u * state;
        }
        Ok(state)
    }

    /// `π_z(x) = ‖P_z |Ψ_x^f⟩‖²`.
    pub fn output_probability(&self, x: InputWord, z: u32) -> Result<f64> {
        let p = self.csop.projector(z)?;
        let state = self.run(x)?;
        Ok((p * state).norm_squared())
    }

    /// `π_z(x)` for every label, in label order.
    pub fn output_distribution(&self, x: InputWord) -> Result<Vec<f64>> {
        let state = self.run(x)?;
        Ok(self
            .csop
            .projectors
            .iter()
            .map(|p| (p * &state).norm_squared())
            .collect())
    }

    /// `π_z` tabulated over all 2^n inputs.
    pub fn output_probability_function(&self, z: u32) -> Result<RealHypercubeFunction> {
        self.guard_sweep()?;
        let p = self.csop.projector(z)?;
        let values = (0..1u64 << self.n)
            .into_par_iter()
            .map(|bits| {
                let x = InputWord::new(self.n, bits)?;
                Ok((p * self.run(x)?).norm_squared())
            })
            .collect::<Result<Vec<f64>>>()?;
        RealHypercubeFunction::new(self.n, values)
    }

    /// Output probabilities for every label plus the per-input completeness residual.
    pub fn probability_report(&self) -> Result<ProbabilityReport> {
        self.guard_sweep()?;
        let rows = (0..1u64 << self.n)
            .into_par_iter()
            .map(|bits| self.output_distribution(InputWord::new(self.n, bits)?))
            .collect::<Result<Vec<Vec<f64>>>>()?;
        let pi = (0..self.csop.labels.len())
            .map(|k| RealHypercubeFunction::new(self.n, rows.iter().map(|r| r[k]).collect()))
            .collect::<Result<Vec<_>>>()?;
        let residuals = rows.iter().map(|r| 1.0 - r.iter().sum::<f64>()).collect();
        Ok(ProbabilityReport {
            labels: self.csop.labels.clone(),
            pi,
            residuals,
        })
    }

    fn guard_sweep(&self) -> Result<()> {
        if self.n > MAX_SWEEP_BITS {
            return Err(Error::SizeGuard {
                what: "input sweep bit count",
                value: self.n as u128,
                limit: MAX_SWEEP_BITS as u128,
            });
        }
        Ok(())
    }
}

/// Output probabilities of every label over the whole hypercube.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbabilityReport {
    pub labels: Vec<u32>,
    pub pi: Vec<RealHypercubeFunction>,
    /// `1 − Σ_z π_z(x)` per input.
    pub residuals: Vec<f64>,
}

impl ProbabilityReport {
    pub fn max_residual(&self) -> f64 {
        self.residuals.iter().map(|r| r.abs()).fold(0.0, f64::max)
    }
}

/// Largest entry modulus, the max-norm used for state comparisons.
pub fn max_modulus(v: &State) -> f64 {
    v.iter().map(|c| c.norm()).fold(0.0, f64::max)
}

pub fn basis_index(m: usize, i: usize, j: usize) -> usize {
    i * m + (j - 1)
}

fn apply_oracle_in_place(x: InputWord, m: usize, v: &mut State) {
    // block 0 is never flipped since x_0 = 0
    for (i, block) in v.as_mut_slice().chunks_exact_mut(m).enumerate().skip(1) {
        if (x.bits() >> (i - 1)) & 1 == 1 {
            block.iter_mut().for_each(|a| *a = -*a);
        }
    }
}

/// `O_x |i⟩|j⟩ = (−1)^{x_i} |i⟩|j⟩`.
pub fn oracle_apply(x: InputWord, m: usize, v: &State) -> Result<State> {
    let dim = (x.n() + 1) * m;
    if m == 0 || v.len() != dim {
        return Err(Error::DimensionMismatch {
            expected: dim,
            found: v.len(),
        });
    }
    let mut out = v.clone();
    apply_oracle_in_place(x, m, &mut out);
    Ok(out)
}

/// One-query Deutsch–Jozsa with `π_1(x) = (n − 2|x|)² / n²`.
///
/// `U_0` is the Householder reflection swapping `|0⟩|1⟩` with the uniform
/// superposition over `|i⟩|1⟩, i = 1..n`; `U_1 = U_0†` (the reflection is
/// its own inverse) and `P_1` projects onto `|0⟩|1⟩`.
pub fn build_deutsch_jozsa(n: usize) -> Result<QueryAlgorithm> {
    if n < 2 || !n.is_multiple_of(2) {
        return Err(Error::Invalid(format!(
            "Deutsch–Jozsa needs an even n ≥ 2, got {n}"
        )));
    }
    let dim = n + 1;
    let amp = 1.0 / (n as f64).sqrt();
    // w = e_0 − u has squared norm 2
    let w = State::from_fn(dim, |i, _| {
        Complex64::new(if i == 0 { 1.0 } else { -amp }, 0.0)
    });
    let householder = Matrix::identity(dim, dim) - (&w * w.adjoint());
    let mut p1 = Matrix::zeros(dim, dim);
    p1[(0, 0)] = Complex64::new(1.0, 0.0);
    let mut initial = State::zeros(dim);
    initial[0] = Complex64::new(1.0, 0.0);
    QueryAlgorithm::new(
        n,
        1,
        initial,
        vec![householder.clone(), householder.adjoint()],
        Csop::binary(p1)?,
    )
}

fn gaussian_matrix(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> Matrix {
    let scale = std::f64::consts::FRAC_1_SQRT_2;
    Matrix::from_fn(rows, cols, |_, _| {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        Complex64::new(re * scale, im * scale)
    })
}

/// Haar-random unitary: QR of a complex Ginibre matrix with the phases of
/// `diag(R)` folded back into `Q`.
pub(crate) fn random_unitary(rng: &mut ChaCha8Rng, dim: usize) -> Matrix {
    let qr = gaussian_matrix(rng, dim, dim).qr();
    let (mut q, r) = qr.unpack();
    for (k, mut col) in q.column_iter_mut().enumerate() {
        let d = r[(k, k)];
        let phase = if d.norm() > 0.0 {
            d / d.norm()
        } else {
            Complex64::new(1.0, 0.0)
        };
        col *= phase;
    }
    q
}

/// Random validated algorithm, deterministic in `seed`.
///
/// Unitaries are Haar-random, the initial state is a normalized Gaussian
/// vector and `P_1` projects onto a random subspace of random rank in
/// `1..dim`.
pub fn build_random_algorithm(n: usize, m: usize, t: usize, seed: u64) -> Result<QueryAlgorithm> {
    let dim = (n + 1) * m;
    if m == 0 || dim < 2 {
        return Err(Error::Invalid(format!(
            "degenerate dimensions n = {n}, m = {m}"
        )));
    }
    if dim > MAX_RANDOM_DIM {
        return Err(Error::SizeGuard {
            what: "Hilbert-space dimension",
            value: dim as u128,
            limit: MAX_RANDOM_DIM as u128,
        });
    }
    if t > MAX_RANDOM_QUERIES {
        return Err(Error::SizeGuard {
            what: "query count",
            value: t as u128,
            limit: MAX_RANDOM_QUERIES as u128,
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let unitaries: Vec<Matrix> = (0..=t).map(|_| random_unitary(&mut rng, dim)).collect();
    let g = gaussian_matrix(&mut rng, dim, 1);
    let initial = State::from_column_slice(g.as_slice()).normalize();
    let basis = random_unitary(&mut rng, dim);
    let rank = rng.random_range(1..dim);
    let span = |cols: std::ops::Range<usize>| {
        let v = basis.columns(cols.start, cols.len());
        v * v.adjoint()
    };
    let csop = Csop::new(vec![0, 1], vec![span(rank..dim), span(0..rank)])?;
    QueryAlgorithm::new(n, m, initial, unitaries, csop)
}

type ComplexPair = [f64; 2];

#[derive(Serialize, Deserialize)]
struct CsopFile {
    labels: Vec<u32>,
    projectors: Vec<Vec<ComplexPair>>,
}

#[derive(Serialize, Deserialize)]
struct AlgorithmFile {
    n: usize,
    m: usize,
    t: usize,
    initial: Vec<ComplexPair>,
    unitaries: Vec<Vec<ComplexPair>>,
    csop: CsopFile,
}

fn pairs_to_state(pairs: &[ComplexPair]) -> State {
    State::from_iterator(
        pairs.len(),
        pairs.iter().map(|p| Complex64::new(p[0], p[1])),
    )
}

fn state_to_pairs(v: &State) -> Vec<ComplexPair> {
    v.iter().map(|c| [c.re, c.im]).collect()
}

fn pairs_to_matrix(pairs: &[ComplexPair], dim: usize, what: &str) -> Result<Matrix> {
    if pairs.len() != dim * dim {
        return Err(Error::Invalid(format!(
            "{what}: expected {} entries for a {dim}×{dim} matrix, found {}",
            dim * dim,
            pairs.len()
        )));
    }
    Ok(Matrix::from_row_iterator(
        dim,
        dim,
        pairs.iter().map(|p| Complex64::new(p[0], p[1])),
    ))
}

fn matrix_to_pairs(a: &Matrix) -> Vec<ComplexPair> {
    a.row_iter()
        .flat_map(|row| row.iter().map(|c| [c.re, c.im]).collect::<Vec<_>>())
        .collect()
}

impl QueryAlgorithm {
    /// Parses the JSON algorithm format and validates the result.
    pub fn from_json(text: &str) -> Result<Self> {
        let file: AlgorithmFile = serde_json::from_str(text)?;
        let dim = (file.n + 1) * file.m;
        if file.unitaries.len() != file.t + 1 {
            return Err(Error::Invalid(format!(
                "t = {} requires {} unitaries, found {}",
                file.t,
                file.t + 1,
                file.unitaries.len()
            )));
        }
        let unitaries = file
            .unitaries
            .iter()
            .enumerate()
            .map(|(k, u)| pairs_to_matrix(u, dim, &format!("unitaries[{k}]")))
            .collect::<Result<Vec<_>>>()?;
        let projectors = file
            .csop
            .projectors
            .iter()
            .enumerate()
            .map(|(k, p)| pairs_to_matrix(p, dim, &format!("csop.projectors[{k}]")))
            .collect::<Result<Vec<_>>>()?;
        let csop = Csop::new(file.csop.labels, projectors)?;
        Self::new(
            file.n,
            file.m,
            pairs_to_state(&file.initial),
            unitaries,
            csop,
        )
    }

    pub fn to_json(&self) -> String {
        let file = AlgorithmFile {
            n: self.n,
            m: self.m,
            t: self.t(),
            initial: state_to_pairs(&self.initial),
            unitaries: self.unitaries.iter().map(matrix_to_pairs).collect(),
            csop: CsopFile {
                labels: self.csop.labels.clone(),
                projectors: self.csop.projectors.iter().map(matrix_to_pairs).collect(),
            },
        };
        serde_json::to_string(&file).expect("algorithm serialization cannot fail")
    }
}
