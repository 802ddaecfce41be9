//! Formal substitution `t = e^{a hbar}`, `w = e^{b hbar}` into group-ring
//! values, truncated exact-rational series in `hbar`, and the residues
//! `d! u_d mod p`.
//!
//! A term `c * t^E` expands through its integer Laurent lift `E` as
//! `c * exp(a hbar E(e^{b hbar}))`; all arithmetic is exact rational, so the
//! non-integral series coefficients reduce mod `p` through modular inverses
//! of their denominators. Singular braid words expand as signed sums over
//! their resolutions.

use num::complex::Complex64;
use num::{BigInt, BigRational, Integer, One, Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::arith::{mod_inverse, ArithError, IntLaurent};
use crate::cochain::CochainPoly;
use crate::coloring::ColoringPolicy;
use crate::diagram::{resolve_singulars, BraidWord};
use crate::invariant::{
    state_sum_2_unchecked, state_sum_3_unchecked, GroupRingElement, InvariantError,
};
use crate::quandle::AlexanderQuandle;

/// Default series truncation degree.
pub const DEFAULT_TRUNCATION: usize = 8;

/// Errors from the expansion layer.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum ExpansionError {
    #[error("substitution does not annihilate h: |h(zeta)| = {0:.3e}")]
    RelationNotAnnihilated(f64),
    #[error("invalid substitution parameters: {0}")]
    InvalidParams(String),
    #[error(transparent)]
    Invariant(#[from] InvariantError),
    #[error(transparent)]
    Arith(#[from] ArithError),
}

/// The substitution `t = e^{a hbar}`, `w = e^{b hbar}` together with the
/// modulus it must annihilate and the truncation degree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubstitutionParams {
    pub a: i64,
    pub b: i64,
    pub p: u64,
    /// Integer coefficients of the modulus `h`, constant first; evaluated
    /// over the complex numbers, so signs matter (`w^2 - w + 1` and its
    /// mod-3 reduction `w^2 + 2w + 1` are different relations numerically).
    pub h: Vec<i64>,
    /// Truncation degree: coefficients are kept for `hbar^0 .. hbar^degree`.
    pub degree: usize,
}

impl SubstitutionParams {
    pub fn new(a: i64, b: i64, p: u64, h: &[i64]) -> SubstitutionParams {
        SubstitutionParams {
            a,
            b,
            p,
            h: h.to_vec(),
            degree: DEFAULT_TRUNCATION,
        }
    }

    pub fn with_degree(mut self, degree: usize) -> SubstitutionParams {
        self.degree = degree;
        self
    }
}

/// Checks that the substitution realizes the ring relations: at
/// `hbar = 2 pi i / (a p)` the value `t = e^{2 pi i / p}` satisfies
/// `t^p = 1` automatically, and `w = zeta = e^{2 pi i b / (a p)}` must be a
/// root of `h`.
pub fn validate_substitution(params: &SubstitutionParams) -> Result<(), ExpansionError> {
    if params.a <= 0 || params.b <= 0 {
        return Err(ExpansionError::InvalidParams(
            "a and b must be positive".into(),
        ));
    }
    if params.p < 2 {
        return Err(ExpansionError::InvalidParams("p must be prime".into()));
    }
    if params.h.len() < 2 {
        return Err(ExpansionError::InvalidParams(
            "h must have degree >= 1".into(),
        ));
    }
    let theta =
        2.0 * std::f64::consts::PI * params.b as f64 / (params.a as f64 * params.p as f64);
    let zeta = Complex64::from_polar(1.0, theta);
    let mut val = Complex64::new(0.0, 0.0);
    for &c in params.h.iter().rev() {
        val = val * zeta + Complex64::new(c as f64, 0.0);
    }
    if val.norm() >= 1e-9 {
        return Err(ExpansionError::RelationNotAnnihilated(val.norm()));
    }
    Ok(())
}

/// A truncated power series in `hbar` with exact rational coefficients,
/// indices `0..=degree`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HbarSeries {
    coeffs: Vec<BigRational>,
}

impl HbarSeries {
    pub fn zero(degree: usize) -> HbarSeries {
        HbarSeries {
            coeffs: vec![BigRational::zero(); degree + 1],
        }
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn coeff(&self, d: usize) -> &BigRational {
        &self.coeffs[d]
    }

    pub fn truncation_degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn add(&self, other: &HbarSeries) -> HbarSeries {
        let n = self.coeffs.len().min(other.coeffs.len());
        HbarSeries {
            coeffs: (0..n).map(|i| &self.coeffs[i] + &other.coeffs[i]).collect(),
        }
    }

    pub fn scale_int(&self, c: i64) -> HbarSeries {
        let c = BigRational::from_integer(BigInt::from(c));
        HbarSeries {
            coeffs: self.coeffs.iter().map(|x| x * &c).collect(),
        }
    }

    /// Truncated product.
    pub fn mul(&self, other: &HbarSeries) -> HbarSeries {
        let n = self.coeffs.len().min(other.coeffs.len());
        let mut coeffs = vec![BigRational::zero(); n];
        for i in 0..n {
            if self.coeffs[i].is_zero() {
                continue;
            }
            for j in 0..n - i {
                if !other.coeffs[j].is_zero() {
                    coeffs[i + j] += &self.coeffs[i] * &other.coeffs[j];
                }
            }
        }
        HbarSeries { coeffs }
    }
}

/// `exp(a hbar E(e^{b hbar}))` truncated at `degree`.
fn expand_term(e: &IntLaurent, a: i64, b: i64, degree: usize) -> HbarSeries {
    let d = degree;
    // inner = E(e^{b hbar}) = sum_j E_j sum_k (b j)^k hbar^k / k!
    let mut inner = vec![BigRational::zero(); d + 1];
    for (&j, &ej) in e.terms() {
        let bj = BigInt::from(b) * BigInt::from(j);
        let mut fact = BigInt::one();
        for k in 0..=d {
            let num = (&bj).pow(k as u32) * BigInt::from(ej);
            inner[k] += BigRational::new(num, fact.clone());
            fact *= k as i64 + 1;
        }
    }
    // arg = a hbar inner: degree shift by one, zero constant term
    let a_big = BigRational::from_integer(BigInt::from(a));
    let mut arg = vec![BigRational::zero(); d + 1];
    for k in 0..d {
        arg[k + 1] = &a_big * &inner[k];
    }
    // exp(arg) = sum_k arg^k / k!
    let mut out = vec![BigRational::zero(); d + 1];
    out[0] = BigRational::one();
    let mut powt = vec![BigRational::zero(); d + 1];
    powt[0] = BigRational::one();
    let mut fact = BigInt::one();
    for k in 1..=d {
        let mut next = vec![BigRational::zero(); d + 1];
        for i in 0..=d {
            if powt[i].is_zero() {
                continue;
            }
            for j in 0..=d - i {
                if !arg[j].is_zero() {
                    next[i + j] += &powt[i] * &arg[j];
                }
            }
        }
        powt = next;
        fact *= k as i64;
        let fact_r = BigRational::from_integer(fact.clone());
        for i in 0..=d {
            if !powt[i].is_zero() {
                out[i] += &powt[i] / &fact_r;
            }
        }
    }
    HbarSeries { coeffs: out }
}

/// Expands a group-ring element through the lifts its terms carry. The
/// parameters must pass `validate_substitution` and agree with the element's
/// ring.
pub fn expand(
    g: &GroupRingElement,
    params: &SubstitutionParams,
) -> Result<HbarSeries, ExpansionError> {
    validate_substitution(params)?;
    let ring = g.ring();
    if params.p != ring.p() {
        return Err(ExpansionError::InvalidParams(format!(
            "p = {} does not match the ring's p = {}",
            params.p,
            ring.p()
        )));
    }
    let reduced: Vec<u64> = params
        .h
        .iter()
        .map(|&c| c.rem_euclid(params.p as i64) as u64)
        .collect();
    if reduced != ring.h_coeffs() {
        return Err(ExpansionError::InvalidParams(
            "h does not reduce to the ring's modulus".into(),
        ));
    }
    let mut out = HbarSeries::zero(params.degree);
    for term in g.terms() {
        let s = expand_term(&term.lift, params.a, params.b, params.degree);
        out = out.add(&s.scale_int(term.coeff));
    }
    Ok(out)
}

/// The residues `d! u_d mod p`, with `None` marking degrees whose
/// coefficient is not `p`-integral after the `d!` scaling.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VassilievReport {
    pub p: u64,
    pub residues: Vec<Option<u64>>,
}

impl VassilievReport {
    /// Lowest degree with a nonzero residue.
    pub fn lowest_nonzero(&self) -> Option<usize> {
        self.residues
            .iter()
            .position(|r| matches!(r, Some(v) if *v != 0))
    }
}

/// Reduces `d! s_d` mod `p` for each degree.
pub fn vassiliev_coeffs(s: &HbarSeries, p: u64) -> VassilievReport {
    let pb = BigInt::from(p);
    let mut fact = BigInt::one();
    let mut residues = Vec::with_capacity(s.coeffs.len());
    for (d, c) in s.coeffs.iter().enumerate() {
        if d > 0 {
            fact *= d as i64;
        }
        let v = c * BigRational::from_integer(fact.clone());
        if (v.denom() % &pb).is_zero() {
            residues.push(None);
            continue;
        }
        let num = v.numer().mod_floor(&pb).to_u64().expect("residue fits u64");
        let den = v.denom().abs().mod_floor(&pb).to_u64().expect("residue fits u64");
        let inv = mod_inverse(den, p).expect("denominator coprime to p");
        residues.push(Some(((num as u128 * inv as u128) % p as u128) as u64));
    }
    VassilievReport { p, residues }
}

/// Which state sum a singular expansion runs.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SumDegree {
    Two,
    Three,
}

/// Everything needed to evaluate one state sum per resolved word.
#[derive(Debug, Clone)]
pub struct CocycleConfig {
    pub quandle: AlexanderQuandle,
    pub cochain: CochainPoly,
    pub degree: SumDegree,
    pub policy: ColoringPolicy,
}

/// Expands a braid word with singular letters as the signed sum of its
/// resolutions' state-sum expansions. Verifies the cocycle condition first.
pub fn singular_vassiliev(
    word: &BraidWord,
    config: &CocycleConfig,
    params: &SubstitutionParams,
) -> Result<HbarSeries, ExpansionError> {
    if !config.cochain.is_cocycle(&config.quandle) {
        return Err(ExpansionError::Invariant(InvariantError::NotACocycle));
    }
    singular_vassiliev_unchecked(word, config, params)
}

/// `singular_vassiliev` without the cocycle verification.
pub fn singular_vassiliev_unchecked(
    word: &BraidWord,
    config: &CocycleConfig,
    params: &SubstitutionParams,
) -> Result<HbarSeries, ExpansionError> {
    validate_substitution(params)?;
    let mut out = HbarSeries::zero(params.degree);
    for (sign, resolved) in resolve_singulars(word) {
        let g = match config.degree {
            SumDegree::Two => state_sum_2_unchecked(
                &resolved,
                &config.cochain,
                &config.quandle,
                &config.policy,
            )?,
            SumDegree::Three => state_sum_3_unchecked(
                &resolved,
                &config.cochain,
                &config.quandle,
                &config.policy,
            )?,
        };
        out = out.add(&expand(&g, params)?.scale_int(sign));
    }
    Ok(out)
}
