//! Fourier analysis of real functions on the Boolean hypercube {0,1}^n.
//!
//! Inputs and masks are packed into a `u64`: logical index `i` in `1..=n`
//! lives at bit position `i - 1`. Logical index 0 is the dummy query
//! position and always reads 0; it is never stored.
//!
//! Coefficients use the normalization `α_b = 2^{-n} Σ_x f(x) χ_b(x)`, so that
//! `f(x) = Σ_b α_b χ_b(x)` with no extra factor.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest bit count for which dense 2^n tables are built.
pub const MAX_TABLE_BITS: usize = 24;

/// Coefficients with magnitude at or below this are treated as zero.
pub const ZERO_THRESHOLD: f64 = 1e-12;

fn check_bits(n: usize, bits: u64) -> Result<()> {
    if n > 63 {
        return Err(Error::SizeGuard {
            what: "bit count",
            value: n as u128,
            limit: 63,
        });
    }
    if bits >> n != 0 {
        return Err(Error::Invalid(format!(
            "word {bits:#b} has bits set beyond n = {n}"
        )));
    }
    Ok(())
}

fn check_table_size(n: usize) -> Result<()> {
    if n > MAX_TABLE_BITS {
        return Err(Error::SizeGuard {
            what: "table bit count",
            value: n as u128,
            limit: MAX_TABLE_BITS as u128,
        });
    }
    Ok(())
}

/// An input `x = x_1 … x_n`, with the convention `x_0 = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct InputWord {
    n: usize,
    bits: u64,
}

impl InputWord {
    pub fn new(n: usize, bits: u64) -> Result<Self> {
        check_bits(n, bits)?;
        Ok(Self { n, bits })
    }

    pub fn zeros(n: usize) -> Self {
        Self { n, bits: 0 }
    }

    /// Builds a word from `x_1, …, x_n` given in order.
    pub fn from_bits(bits: &[u8]) -> Result<Self> {
        let mut packed = 0u64;
        for (pos, &b) in bits.iter().enumerate() {
            match b {
                0 => {}
                1 => packed |= 1 << pos,
                other => return Err(Error::Invalid(format!("bit value {other} is not 0 or 1"))),
            }
        }
        Self::new(bits.len(), packed)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn bits(&self) -> u64 {
        self.bits
    }

    /// Dense table index of this input.
    pub fn index(&self) -> usize {
        self.bits as usize
    }

    /// Reads logical bit `i`; `bit(0)` is always 0.
    pub fn bit(&self, i: usize) -> Result<u8> {
        match i {
            0 => Ok(0),
            i if i <= self.n => Ok(((self.bits >> (i - 1)) & 1) as u8),
            index => Err(Error::BitIndex { index, n: self.n }),
        }
    }

    /// Hamming weight |x|.
    pub fn weight(&self) -> u32 {
        self.bits.count_ones()
    }

    /// All 2^n inputs in table order.
    pub fn all(n: usize) -> impl Iterator<Item = InputWord> {
        (0..1u64 << n).map(move |bits| InputWord { n, bits })
    }

    /// Renders as `x_1 x_2 … x_n`, left to right.
    pub fn to_bit_string(&self) -> String {
        (0..self.n)
            .map(|pos| {
                if (self.bits >> pos) & 1 == 1 {
                    '1'
                } else {
                    '0'
                }
            })
            .collect()
    }
}

/// A subset of `{1..n}`, i.e. the label `b` of the character `χ_b`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Mask {
    n: usize,
    bits: u64,
}

impl Mask {
    pub fn new(n: usize, bits: u64) -> Result<Self> {
        check_bits(n, bits)?;
        Ok(Self { n, bits })
    }

    pub fn empty(n: usize) -> Self {
        Self { n, bits: 0 }
    }

    /// Builds a mask from 1-based logical indices.
    pub fn from_indices(n: usize, indices: &[usize]) -> Result<Self> {
        let mut bits = 0u64;
        for &i in indices {
            if i == 0 || i > n {
                return Err(Error::BitIndex { index: i, n });
            }
            bits |= 1 << (i - 1);
        }
        Self::new(n, bits)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn bits(&self) -> u64 {
        self.bits
    }

    /// |b|, which is also the query cost of the parity on `b`.
    pub fn weight(&self) -> usize {
        self.bits.count_ones() as usize
    }

    /// 1-based logical indices contained in the mask, ascending.
    pub fn indices(&self) -> Vec<usize> {
        (0..self.n)
            .filter(|pos| (self.bits >> pos) & 1 == 1)
            .map(|pos| pos + 1)
            .collect()
    }
}

/// `χ_b(x) = (-1)^{b·x}`.
pub fn chi(b: Mask, x: InputWord) -> Result<i8> {
    if b.n != x.n {
        return Err(Error::DimensionMismatch {
            expected: b.n,
            found: x.n,
        });
    }
    Ok(parity_sign(b.bits & x.bits))
}

#[inline]
pub(crate) fn parity_sign(bits: u64) -> i8 {
    if bits.count_ones().is_multiple_of(2) {
        1
    } else {
        -1
    }
}

#[derive(Serialize, Deserialize)]
struct FunctionFile {
    n: usize,
    values: Vec<f64>,
}

/// A real-valued function on {0,1}^n stored as its full truth table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "FunctionFile", into = "FunctionFile")]
pub struct RealHypercubeFunction {
    n: usize,
    values: Vec<f64>,
}

impl RealHypercubeFunction {
    pub fn new(n: usize, values: Vec<f64>) -> Result<Self> {
        check_table_size(n)?;
        if values.len() != 1 << n {
            return Err(Error::DimensionMismatch {
                expected: 1 << n,
                found: values.len(),
            });
        }
        if let Some(pos) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::Invalid(format!(
                "value at index {pos} is not finite"
            )));
        }
        Ok(Self { n, values })
    }

    pub fn from_fn(n: usize, f: impl Fn(InputWord) -> f64) -> Result<Self> {
        check_table_size(n)?;
        Self::new(n, InputWord::all(n).map(f).collect())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn value(&self, x: InputWord) -> Result<f64> {
        if x.n != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: x.n,
            });
        }
        Ok(self.values[x.index()])
    }
}

impl TryFrom<FunctionFile> for RealHypercubeFunction {
    type Error = Error;

    fn try_from(file: FunctionFile) -> Result<Self> {
        Self::new(file.n, file.values)
    }
}

impl From<RealHypercubeFunction> for FunctionFile {
    fn from(f: RealHypercubeFunction) -> Self {
        FunctionFile {
            n: f.n,
            values: f.values,
        }
    }
}

#[derive(Serialize, Deserialize)]
struct SpectrumFile {
    n: usize,
    coeffs: Vec<f64>,
}

/// Fourier coefficients `α_b`, indexed by the packed mask `b`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "SpectrumFile", into = "SpectrumFile")]
pub struct FourierSpectrum {
    n: usize,
    coeffs: Vec<f64>,
}

impl FourierSpectrum {
    pub fn new(n: usize, coeffs: Vec<f64>) -> Result<Self> {
        let f = RealHypercubeFunction::new(n, coeffs)?;
        Ok(Self {
            n: f.n,
            coeffs: f.values,
        })
    }

    pub fn zero(n: usize) -> Result<Self> {
        check_table_size(n)?;
        Ok(Self {
            n,
            coeffs: vec![0.0; 1 << n],
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn coeff(&self, b: Mask) -> Result<f64> {
        if b.n != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: b.n,
            });
        }
        Ok(self.coeffs[b.bits as usize])
    }

    /// Nonzero coefficients (above [`ZERO_THRESHOLD`]) in mask order.
    pub fn support(&self) -> impl Iterator<Item = (Mask, f64)> + '_ {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| c.abs() > ZERO_THRESHOLD)
            .map(|(b, &c)| {
                (
                    Mask {
                        n: self.n,
                        bits: b as u64,
                    },
                    c,
                )
            })
    }

    /// `Σ_b α_b χ_b(x)`.
    pub fn eval(&self, x: InputWord) -> Result<f64> {
        if x.n != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: x.n,
            });
        }
        Ok(self
            .coeffs
            .iter()
            .enumerate()
            .map(|(b, &c)| c * f64::from(parity_sign(b as u64 & x.bits)))
            .sum())
    }

    /// Fourier 1-norm `L = Σ_b |α_b|`.
    pub fn l1_norm(&self) -> f64 {
        self.coeffs.iter().map(|c| c.abs()).sum()
    }

    /// Largest |b| with a nonzero coefficient; 0 for the zero spectrum.
    pub fn degree(&self) -> usize {
        self.support().map(|(b, _)| b.weight()).max().unwrap_or(0)
    }

    /// Inverse transform back to the truth table.
    pub fn to_function(&self) -> RealHypercubeFunction {
        let mut values = self.coeffs.clone();
        butterfly(&mut values);
        RealHypercubeFunction { n: self.n, values }
    }
}

impl TryFrom<SpectrumFile> for FourierSpectrum {
    type Error = Error;

    fn try_from(file: SpectrumFile) -> Result<Self> {
        Self::new(file.n, file.coeffs)
    }
}

impl From<FourierSpectrum> for SpectrumFile {
    fn from(s: FourierSpectrum) -> Self {
        SpectrumFile {
            n: s.n,
            coeffs: s.coeffs,
        }
    }
}

/// Unnormalized in-place Walsh–Hadamard butterfly, O(n 2^n).
fn butterfly(data: &mut [f64]) {
    let len = data.len();
    let mut half = 1;
    while half < len {
        for block in data.chunks_exact_mut(2 * half) {
            let (lo, hi) = block.split_at_mut(half);
            for (a, b) in lo.iter_mut().zip(hi.iter_mut()) {
                let (s, d) = (*a + *b, *a - *b);
                *a = s;
                *b = d;
            }
        }
        half <<= 1;
    }
}

/// Forward transform `α_b = 2^{-n} Σ_x f(x) χ_b(x)`.
pub fn wht_forward(f: &RealHypercubeFunction) -> FourierSpectrum {
    let mut coeffs = f.values.clone();
    butterfly(&mut coeffs);
    let scale = 1.0 / (1u64 << f.n) as f64;
    coeffs.iter_mut().for_each(|c| *c *= scale);
    FourierSpectrum { n: f.n, coeffs }
}

#[derive(Serialize, Deserialize)]
struct TermFile {
    vars: Vec<usize>,
    coeff: f64,
}

#[derive(Serialize, Deserialize)]
struct PolynomialFile {
    n: usize,
    terms: Vec<TermFile>,
}

/// A real polynomial `p(x) = Σ_S c_S Π_{i∈S} x_i` in the monomial basis.
///
/// Terms are keyed by the packed subset `S`. Since inputs are Boolean,
/// repeated variables inside one monomial collapse (`x_i² = x_i`) and
/// repeated monomials are summed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "PolynomialFile", into = "PolynomialFile")]
pub struct MonomialPolynomial {
    n: usize,
    terms: BTreeMap<u64, f64>,
}

impl MonomialPolynomial {
    pub fn new(n: usize, terms: impl IntoIterator<Item = (Vec<usize>, f64)>) -> Result<Self> {
        if n > 63 {
            return Err(Error::SizeGuard {
                what: "variable count",
                value: n as u128,
                limit: 63,
            });
        }
        let mut map = BTreeMap::new();
        for (vars, coeff) in terms {
            if !coeff.is_finite() {
                return Err(Error::Invalid(format!(
                    "coefficient of {vars:?} is not finite"
                )));
            }
            let subset = Mask::from_indices(n, &vars)?;
            *map.entry(subset.bits).or_insert(0.0) += coeff;
        }
        Ok(Self { n, terms: map })
    }

    pub fn constant(n: usize, c: f64) -> Result<Self> {
        Self::new(n, [(vec![], c)])
    }

    /// Exact multilinear representation of a truth table (Möbius inversion).
    pub fn from_function(f: &RealHypercubeFunction) -> Self {
        let mut c = f.values.clone();
        for pos in 0..f.n {
            let bit = 1usize << pos;
            for s in 0..c.len() {
                if s & bit != 0 {
                    c[s] -= c[s ^ bit];
                }
            }
        }
        let terms = c
            .into_iter()
            .enumerate()
            .filter(|(_, v)| *v != 0.0)
            .map(|(s, v)| (s as u64, v))
            .collect();
        Self { n: f.n, terms }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Terms as (subset, coefficient) pairs in subset order.
    pub fn terms(&self) -> impl Iterator<Item = (Mask, f64)> + '_ {
        self.terms
            .iter()
            .map(|(&bits, &c)| (Mask { n: self.n, bits }, c))
    }

    /// Largest |S| with a coefficient above [`ZERO_THRESHOLD`].
    pub fn degree(&self) -> usize {
        self.terms
            .iter()
            .filter(|(_, c)| c.abs() > ZERO_THRESHOLD)
            .map(|(s, _)| s.count_ones() as usize)
            .max()
            .unwrap_or(0)
    }

    pub fn evaluate(&self, x: InputWord) -> Result<f64> {
        if x.n != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: x.n,
            });
        }
        Ok(self
            .terms
            .iter()
            .filter(|(&s, _)| s & x.bits == s)
            .map(|(_, &c)| c)
            .sum())
    }
}

impl TryFrom<PolynomialFile> for MonomialPolynomial {
    type Error = Error;

    fn try_from(file: PolynomialFile) -> Result<Self> {
        Self::new(file.n, file.terms.into_iter().map(|t| (t.vars, t.coeff)))
    }
}

impl From<MonomialPolynomial> for PolynomialFile {
    fn from(p: MonomialPolynomial) -> Self {
        let n = p.n;
        PolynomialFile {
            n,
            terms: p
                .terms
                .into_iter()
                .map(|(bits, coeff)| TermFile {
                    vars: Mask { n, bits }.indices(),
                    coeff,
                })
                .collect(),
        }
    }
}

/// Fourier spectrum of a monomial-basis polynomial.
///
/// Substitutes `x_i = (1 - χ_{{i}})/2`, so that
/// `Π_{i∈S} x_i = 2^{-|S|} Σ_{T⊆S} (-1)^{|T|} χ_T`.
pub fn monomials_to_fourier(p: &MonomialPolynomial) -> Result<FourierSpectrum> {
    check_table_size(p.n)?;
    let mut coeffs = vec![0.0; 1 << p.n];
    for (&s, &c) in &p.terms {
        let scale = c / (1u64 << s.count_ones()) as f64;
        // walk every subset t of s, including s itself and the empty set
        let mut t = s;
        loop {
            coeffs[t as usize] += scale * f64::from(parity_sign(t));
            if t == 0 {
                break;
            }
            t = (t - 1) & s;
        }
    }
    Ok(FourierSpectrum { n: p.n, coeffs })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn approx_eq(a: &[f64], b: &[f64], tol: f64) -> bool {
        a.len() == b.len() && a.iter().zip(b).all(|(x, y)| (x - y).abs() <= tol)
    }

    #[test]
    fn bit_zero_is_dummy() {
        let x = InputWord::from_bits(&[1, 0, 1]).unwrap();
        assert_eq!(x.bit(0).unwrap(), 0);
        assert_eq!(x.bit(1).unwrap(), 1);
        assert_eq!(x.bit(2).unwrap(), 0);
        assert_eq!(x.bit(3).unwrap(), 1);
        assert!(matches!(x.bit(4), Err(Error::BitIndex { index: 4, n: 3 })));
        assert_eq!(x.to_bit_string(), "101");
    }

    #[test]
    fn word_rejects_stray_bits() {
        assert!(InputWord::new(2, 0b100).is_err());
        assert!(InputWord::from_bits(&[0, 2]).is_err());
        assert!(Mask::from_indices(3, &[0]).is_err());
        assert!(Mask::from_indices(3, &[4]).is_err());
    }

    #[test]
    fn chi_examples() {
        let any = InputWord::from_bits(&[1, 0, 1, 1]).unwrap();
        assert_eq!(chi(Mask::empty(4), any).unwrap(), 1);

        let b = Mask::from_indices(2, &[1, 2]).unwrap();
        let x = InputWord::from_bits(&[0, 1]).unwrap();
        assert_eq!(chi(b, x).unwrap(), -1);

        let b = Mask::from_indices(3, &[1, 3]).unwrap();
        let x = InputWord::from_bits(&[1, 1, 1]).unwrap();
        assert_eq!(chi(b, x).unwrap(), 1);

        assert!(matches!(
            chi(Mask::empty(2), InputWord::zeros(3)),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn constant_function_spectrum() {
        let f = RealHypercubeFunction::new(3, vec![1.0; 8]).unwrap();
        let s = wht_forward(&f);
        assert_eq!(s.coeffs()[0], 1.0);
        assert!(s.coeffs()[1..].iter().all(|&c| c == 0.0));
        assert_eq!(s.degree(), 0);
        assert_eq!(s.l1_norm(), 1.0);
    }

    // Expected values for AND_2 come from the naive double sum
    // 2^{-2} Σ_x f(x) χ_b(x) with f = (0,0,0,1): only x = 11 contributes,
    // χ_b(11) = +1, -1, -1, +1 for b = ∅, {1}, {2}, {1,2}.
    #[test]
    fn and2_spectrum() {
        let f = RealHypercubeFunction::new(2, vec![0.0, 0.0, 0.0, 1.0]).unwrap();
        let s = wht_forward(&f);
        assert!(approx_eq(s.coeffs(), &[0.25, -0.25, -0.25, 0.25], 1e-15));
        assert_eq!(s.degree(), 2);
        assert!((s.l1_norm() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn dj_two_bit_spectrum() {
        let f = RealHypercubeFunction::new(2, vec![1.0, 0.0, 0.0, 1.0]).unwrap();
        let s = wht_forward(&f);
        assert!(approx_eq(s.coeffs(), &[0.5, 0.0, 0.0, 0.5], 1e-15));
        assert_eq!(s.eval(InputWord::from_bits(&[0, 0]).unwrap()).unwrap(), 1.0);
        assert_eq!(s.eval(InputWord::from_bits(&[0, 1]).unwrap()).unwrap(), 0.0);
        assert_eq!(s.l1_norm(), 1.0);
    }

    #[test]
    fn dj_four_bit_degree() {
        let f = RealHypercubeFunction::from_fn(4, |x| {
            let d = 4.0 - 2.0 * f64::from(x.weight());
            d * d / 16.0
        })
        .unwrap();
        let s = wht_forward(&f);
        assert_eq!(s.degree(), 2);
        assert!((s.l1_norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn eval_trivial_spectrum() {
        let mut coeffs = vec![0.0; 8];
        coeffs[0] = 1.0;
        let s = FourierSpectrum::new(3, coeffs).unwrap();
        for x in InputWord::all(3) {
            assert_eq!(s.eval(x).unwrap(), 1.0);
        }
        assert!(s.eval(InputWord::zeros(2)).is_err());
    }

    #[test]
    fn zero_spectrum_norm_and_degree() {
        let s = FourierSpectrum::zero(5).unwrap();
        assert_eq!(s.l1_norm(), 0.0);
        assert_eq!(s.degree(), 0);
        assert_eq!(s.support().count(), 0);
    }

    #[test]
    fn degree_ignores_round_off() {
        let mut coeffs = vec![0.0; 8];
        coeffs[0] = 0.5;
        coeffs[7] = 1e-13;
        assert_eq!(FourierSpectrum::new(3, coeffs).unwrap().degree(), 0);
    }

    #[test]
    fn table_validation() {
        assert!(RealHypercubeFunction::new(2, vec![0.0; 3]).is_err());
        assert!(RealHypercubeFunction::new(1, vec![0.0, f64::NAN]).is_err());
        assert!(matches!(
            RealHypercubeFunction::new(25, vec![]),
            Err(Error::SizeGuard { .. })
        ));
    }

    #[test]
    fn monomial_single_variable() {
        let p = MonomialPolynomial::new(1, [(vec![1], 1.0)]).unwrap();
        let s = monomials_to_fourier(&p).unwrap();
        assert_eq!(s.coeffs(), &[0.5, -0.5]);
    }

    #[test]
    fn monomial_constant() {
        let p = MonomialPolynomial::constant(3, 2.5).unwrap();
        let s = monomials_to_fourier(&p).unwrap();
        assert_eq!(s.coeffs()[0], 2.5);
        assert!(s.coeffs()[1..].iter().all(|&c| c == 0.0));
        assert_eq!(p.degree(), 0);
    }

    #[test]
    fn monomial_product_matches_and2() {
        let p = MonomialPolynomial::new(2, [(vec![1, 2], 1.0)]).unwrap();
        let via_monomials = monomials_to_fourier(&p).unwrap();
        let table = RealHypercubeFunction::from_fn(2, |x| p.evaluate(x).unwrap()).unwrap();
        let via_table = wht_forward(&table);
        assert!(approx_eq(via_monomials.coeffs(), via_table.coeffs(), 1e-15));
        assert_eq!(via_monomials.degree(), p.degree());
    }

    #[test]
    fn monomial_terms_merge_and_collapse() {
        let p = MonomialPolynomial::new(3, [(vec![2, 2], 1.0), (vec![2], 0.5)]).unwrap();
        assert_eq!(p.terms().count(), 1);
        let (mask, c) = p.terms().next().unwrap();
        assert_eq!(mask.indices(), vec![2]);
        assert_eq!(c, 1.5);
    }

    #[test]
    fn monomial_oversize_guard() {
        let p = MonomialPolynomial::new(30, [(vec![1], 1.0)]).unwrap();
        assert!(matches!(
            monomials_to_fourier(&p),
            Err(Error::SizeGuard { .. })
        ));
    }

    #[test]
    fn mobius_round_trip() {
        let f = RealHypercubeFunction::new(3, vec![0.3, -1.0, 2.0, 0.0, 0.5, 0.25, -0.75, 4.0])
            .unwrap();
        let p = MonomialPolynomial::from_function(&f);
        for x in InputWord::all(3) {
            assert!((p.evaluate(x).unwrap() - f.value(x).unwrap()).abs() < 1e-12);
        }
    }

    #[test]
    fn json_formats() {
        let f: RealHypercubeFunction =
            serde_json::from_str(r#"{"n": 1, "values": [0.25, 0.75]}"#).unwrap();
        assert_eq!(f.values(), &[0.25, 0.75]);
        let s = wht_forward(&f);
        let text = serde_json::to_string(&s).unwrap();
        assert_eq!(text, r#"{"n":1,"coeffs":[0.5,-0.25]}"#);

        let p: MonomialPolynomial = serde_json::from_str(
            r#"{"n": 2, "terms": [{"vars": [1, 2], "coeff": 2.0}, {"vars": [], "coeff": 1.0}]}"#,
        )
        .unwrap();
        assert_eq!(p.degree(), 2);
        let back: MonomialPolynomial =
            serde_json::from_str(&serde_json::to_string(&p).unwrap()).unwrap();
        assert_eq!(back, p);

        assert!(
            serde_json::from_str::<RealHypercubeFunction>(r#"{"n": 2, "values": [1.0]}"#).is_err()
        );
        assert!(serde_json::from_str::<MonomialPolynomial>(
            r#"{"n": 2, "terms": [{"vars": [3], "coeff": 1.0}]}"#
        )
        .is_err());
    }
}
