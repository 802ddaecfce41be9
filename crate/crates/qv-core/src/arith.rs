//! Arithmetic in the ground ring `S = F_p[w]/(h(w))`, in the symbolic Laurent
//! ring `F_p[w^{±1}]`, and in integer Laurent lifts bridging the two.

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

/// Errors from ring construction, arithmetic, and element parsing.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ArithError {
    #[error("p = {0} is not prime")]
    NonPrime(u64),
    #[error("h must be monic of degree >= 1 after reduction mod p")]
    NonMonic,
    #[error("h(0) = 0 mod p, so w is not a unit in S")]
    OmegaNotUnit,
    #[error("element is not a unit")]
    NotAUnit,
    #[error("h(1) = 0 mod p, no augmentation-normalized lift exists")]
    AugmentationSingular,
    #[error("parse error at column {col}: {msg}")]
    Parse { col: usize, msg: String },
}

/// An element of `S`, stored as `m` canonical coefficients, constant first.
///
/// The ordering (lexicographic on coefficients, highest degree first, i.e.
/// counting order `0, 1, .., p-1, w, w+1, ..`) is the enumeration order used
/// everywhere determinism matters.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RingElement(Vec<u64>);

impl PartialOrd for RingElement {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for RingElement {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.0.iter().rev().cmp(other.0.iter().rev())
    }
}

impl RingElement {
    /// Coefficients of the canonical representative, constant first.
    pub fn coeffs(&self) -> &[u64] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }
}

/// The ground ring `F_p[w]/(h(w))` with `h` monic of degree `m >= 1` and
/// `h(0) != 0`, so the class of `w` is a unit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroundRing {
    p: u64,
    /// Reduced coefficients of `h`, constant first, length `m + 1`, leading 1.
    h: Vec<u64>,
    m: usize,
}

fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

impl GroundRing {
    /// Builds `F_p[w]/(h(w))` from integer coefficients of `h`, constant first.
    pub fn new(p: u64, h: &[i64]) -> Result<GroundRing, ArithError> {
        if !is_prime(p) {
            return Err(ArithError::NonPrime(p));
        }
        let hr: Vec<u64> = h.iter().map(|&c| c.rem_euclid(p as i64) as u64).collect();
        if hr.len() < 2 || *hr.last().unwrap() != 1 {
            return Err(ArithError::NonMonic);
        }
        if hr[0] == 0 {
            return Err(ArithError::OmegaNotUnit);
        }
        let m = hr.len() - 1;
        Ok(GroundRing { p, h: hr, m })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    /// Degree of `h`.
    pub fn m(&self) -> usize {
        self.m
    }

    /// Reduced coefficients of `h`, constant first, length `m + 1`.
    pub fn h_coeffs(&self) -> &[u64] {
        &self.h
    }

    /// Number of elements `p^m`.
    pub fn order(&self) -> u64 {
        self.p.pow(self.m as u32)
    }

    pub fn zero(&self) -> RingElement {
        RingElement(vec![0; self.m])
    }

    pub fn one(&self) -> RingElement {
        self.from_coeffs(&[1])
    }

    /// The class of `w`.
    pub fn omega(&self) -> RingElement {
        let mut c = vec![0i64; self.m + 1];
        c[1] = 1;
        self.from_coeffs(&c)
    }

    /// The inverse of the class of `w`; always exists since `h(0) != 0`.
    pub fn omega_inv(&self) -> RingElement {
        self.invert(&self.omega()).expect("w is a unit when h(0) != 0")
    }

    /// Element from integer coefficients, constant first, any length.
    pub fn from_coeffs(&self, coeffs: &[i64]) -> RingElement {
        let v: Vec<u64> = coeffs
            .iter()
            .map(|&c| c.rem_euclid(self.p as i64) as u64)
            .collect();
        self.reduce_poly(v)
    }

    /// Reduces a polynomial in `w` (coefficients already in `[0, p)`,
    /// constant first) modulo `h`.
    fn reduce_poly(&self, mut v: Vec<u64>) -> RingElement {
        let p = self.p;
        while v.len() > self.m {
            let top = v.pop().unwrap();
            if top == 0 {
                continue;
            }
            let d = v.len() - self.m;
            // subtract top * w^d * h  (leading term of h is w^m)
            for (i, &hc) in self.h.iter().take(self.m).enumerate() {
                let idx = d + i;
                v[idx] = (v[idx] + (p - hc % p) * top) % p;
            }
        }
        v.resize(self.m, 0);
        RingElement(v)
    }

    pub fn add(&self, a: &RingElement, b: &RingElement) -> RingElement {
        RingElement(
            a.0.iter()
                .zip(&b.0)
                .map(|(&x, &y)| (x + y) % self.p)
                .collect(),
        )
    }

    pub fn sub(&self, a: &RingElement, b: &RingElement) -> RingElement {
        RingElement(
            a.0.iter()
                .zip(&b.0)
                .map(|(&x, &y)| (x + self.p - y) % self.p)
                .collect(),
        )
    }

    pub fn neg(&self, a: &RingElement) -> RingElement {
        RingElement(a.0.iter().map(|&x| (self.p - x) % self.p).collect())
    }

    pub fn scale(&self, c: u64, a: &RingElement) -> RingElement {
        let c = c % self.p;
        RingElement(a.0.iter().map(|&x| (x * c) % self.p).collect())
    }

    pub fn mul(&self, a: &RingElement, b: &RingElement) -> RingElement {
        let mut prod = vec![0u64; 2 * self.m];
        for (i, &x) in a.0.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.0.iter().enumerate() {
                prod[i + j] = (prod[i + j] + x * y) % self.p;
            }
        }
        self.reduce_poly(prod)
    }

    pub fn pow(&self, a: &RingElement, e: u64) -> RingElement {
        let mut base = a.clone();
        let mut e = e;
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        acc
    }

    /// Power with a possibly negative exponent; needs `a` to be a unit when
    /// `e < 0`.
    pub fn pow_signed(&self, a: &RingElement, e: i64) -> Result<RingElement, ArithError> {
        if e >= 0 {
            Ok(self.pow(a, e as u64))
        } else {
            let inv = self.invert(a)?;
            Ok(self.pow(&inv, e.unsigned_abs()))
        }
    }

    /// Inverse by the extended Euclidean algorithm on polynomials over `F_p`.
    pub fn invert(&self, a: &RingElement) -> Result<RingElement, ArithError> {
        let p = self.p;
        // (r0, s0) and (r1, s1) with s * a = r mod h throughout
        let mut r0: Vec<u64> = self.h.clone();
        let mut s0: Vec<u64> = vec![0];
        let mut r1: Vec<u64> = a.0.clone();
        let mut s1: Vec<u64> = vec![1];
        trim(&mut r0);
        trim(&mut r1);
        while !r1.is_empty() {
            let (quo, rem) = poly_divmod(&r0, &r1, p);
            let s2 = poly_sub(&s0, &poly_mul(&quo, &s1, p), p);
            r0 = r1;
            s0 = s1;
            r1 = rem;
            s1 = s2;
        }
        // r0 = gcd; invertible iff gcd is a nonzero constant
        if r0.len() != 1 {
            return Err(ArithError::NotAUnit);
        }
        let c_inv = mod_inverse(r0[0], p).ok_or(ArithError::NotAUnit)?;
        let scaled: Vec<u64> = s0.iter().map(|&c| (c * c_inv) % p).collect();
        Ok(self.reduce_poly(scaled))
    }

    /// All elements in counting order `0, 1, .., p-1, w, w+1, ..`
    /// (lexicographic on coefficients read from highest degree down).
    pub fn elements(&self) -> Vec<RingElement> {
        let mut out = Vec::with_capacity(self.order() as usize);
        let mut cur = vec![0u64; self.m];
        loop {
            out.push(RingElement(cur.clone()));
            // increment as a base-p counter, constant coefficient fastest
            let mut i = 0;
            loop {
                if i == self.m {
                    return out;
                }
                cur[i] += 1;
                if cur[i] < self.p {
                    break;
                }
                cur[i] = 0;
                i += 1;
            }
        }
    }

    /// All units, in the same order as `elements`.
    pub fn units(&self) -> Vec<RingElement> {
        self.elements()
            .into_iter()
            .filter(|e| self.invert(e).is_ok())
            .collect()
    }

    /// Multiplicative order of a unit.
    pub fn unit_order(&self, a: &RingElement) -> u64 {
        let one = self.one();
        let mut x = a.clone();
        let mut k = 1;
        while x != one {
            x = self.mul(&x, a);
            k += 1;
        }
        k
    }

    /// Substitutes the class of `w` into a symbolic Laurent polynomial.
    pub fn reduce_laurent(&self, f: &LaurentPoly) -> RingElement {
        let w = self.omega();
        let wi = self.omega_inv();
        let mut out = self.zero();
        for (&e, &c) in &f.terms {
            let pw = if e >= 0 {
                self.pow(&w, e as u64)
            } else {
                self.pow(&wi, e.unsigned_abs())
            };
            out = self.add(&out, &self.scale(c, &pw));
        }
        out
    }

    /// Evaluates a symbolic Laurent polynomial at an arbitrary element,
    /// which must be a unit when negative exponents occur.
    pub fn eval_laurent(&self, f: &LaurentPoly, at: &RingElement) -> Result<RingElement, ArithError> {
        let mut out = self.zero();
        for (&e, &c) in &f.terms {
            let pw = self.pow_signed(at, e)?;
            out = self.add(&out, &self.scale(c, &pw));
        }
        Ok(out)
    }

    /// Reduces an integer Laurent lift back into `S` (coefficients mod p,
    /// then `w` to its class).
    pub fn reduce_int_laurent(&self, lift: &IntLaurent) -> RingElement {
        self.reduce_laurent(&lift.reduce_mod(self.p))
    }

    /// The canonical lift: coefficients in `[0, p)`, exponents in `[0, m)`.
    pub fn canonical_lift(&self, e: &RingElement) -> IntLaurent {
        IntLaurent {
            terms: e
                .0
                .iter()
                .enumerate()
                .filter(|(_, &c)| c != 0)
                .map(|(i, &c)| (i as i64, c as i64))
                .collect(),
        }
    }

    /// An integer lift `E` with `E = e` in `S` and `E(1) = 0 mod p`:
    /// the canonical lift plus the right multiple of (the canonical lift of)
    /// `h`. Fails when `h(1) = 0 mod p`.
    pub fn normalized_lift(&self, e: &RingElement) -> Result<IntLaurent, ArithError> {
        let h1: u64 = self.h.iter().sum::<u64>() % self.p;
        let h1_inv = mod_inverse(h1, self.p).ok_or(ArithError::AugmentationSingular)?;
        let e0 = self.canonical_lift(e);
        let e0_at_1 = e0.eval_at_one().rem_euclid(self.p as i64) as u64;
        let k = ((self.p - e0_at_1 % self.p) % self.p * h1_inv) % self.p;
        let mut h_lift = IntLaurent::zero();
        for (i, &c) in self.h.iter().enumerate() {
            if c != 0 {
                h_lift.terms.insert(i as i64, c as i64);
            }
        }
        let out = e0.add(&h_lift.scale(k as i64));
        debug_assert_eq!(out.eval_at_one().rem_euclid(self.p as i64), 0);
        debug_assert_eq!(self.reduce_int_laurent(&out), *e);
        Ok(out)
    }

    /// Parses an element expression such as `1+2*w`, `w^-2`, or `2*w^2-w+1`.
    pub fn parse_element(&self, text: &str) -> Result<RingElement, ArithError> {
        let lift = IntLaurent::parse(text)?;
        Ok(self.reduce_int_laurent(&lift))
    }

    /// Canonical display of an element, descending powers of `w`.
    pub fn element_string(&self, e: &RingElement) -> String {
        let lift = self.canonical_lift(e);
        lift.to_string()
    }
}

fn trim(v: &mut Vec<u64>) {
    while v.last() == Some(&0) {
        v.pop();
    }
}

fn poly_sub(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let n = a.len().max(b.len());
    let mut out = vec![0u64; n];
    for (i, slot) in out.iter_mut().enumerate() {
        let x = a.get(i).copied().unwrap_or(0);
        let y = b.get(i).copied().unwrap_or(0);
        *slot = (x + p - y % p) % p;
    }
    trim(&mut out);
    out
}

fn poly_mul(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + x * y) % p;
        }
    }
    trim(&mut out);
    out
}

/// Division with remainder of polynomials over `F_p`; `b` nonzero.
pub(crate) fn poly_divmod(a: &[u64], b: &[u64], p: u64) -> (Vec<u64>, Vec<u64>) {
    let mut rem: Vec<u64> = a.to_vec();
    trim(&mut rem);
    let db = b.len() - 1;
    let lead_inv = mod_inverse(*b.last().unwrap(), p).expect("nonzero leading coefficient");
    if rem.len() <= db {
        return (Vec::new(), rem);
    }
    let mut quo = vec![0u64; rem.len() - db];
    while rem.len() > db {
        let da = rem.len() - 1;
        let c = (rem[da] * lead_inv) % p;
        if c != 0 {
            quo[da - db] = c;
            for (i, &bc) in b.iter().enumerate() {
                let idx = da - db + i;
                rem[idx] = (rem[idx] + p - c * bc % p) % p;
            }
        }
        rem.pop();
        trim(&mut rem);
        if rem.is_empty() {
            break;
        }
    }
    trim(&mut quo);
    (quo, rem)
}

pub(crate) fn mod_inverse(a: u64, p: u64) -> Option<u64> {
    let a = a % p;
    if a == 0 {
        return None;
    }
    // p prime: a^(p-2)
    let mut acc = 1u64;
    let mut base = a;
    let mut e = p - 2;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % p;
        }
        base = base * base % p;
        e >>= 1;
    }
    Some(acc)
}

/// A Laurent polynomial over `F_p` in the symbol `w`; the modulus is passed
/// to each operation rather than stored.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct LaurentPoly {
    terms: BTreeMap<i64, u64>,
}

impl LaurentPoly {
    pub fn zero() -> LaurentPoly {
        LaurentPoly::default()
    }

    pub fn constant(p: u64, c: i64) -> LaurentPoly {
        LaurentPoly::monomial(p, 0, c)
    }

    pub fn one(p: u64) -> LaurentPoly {
        LaurentPoly::constant(p, 1)
    }

    pub fn monomial(p: u64, exp: i64, c: i64) -> LaurentPoly {
        let c = c.rem_euclid(p as i64) as u64;
        let mut terms = BTreeMap::new();
        if c != 0 {
            terms.insert(exp, c);
        }
        LaurentPoly { terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> &BTreeMap<i64, u64> {
        &self.terms
    }

    pub fn add(&self, other: &LaurentPoly, p: u64) -> LaurentPoly {
        let mut out = self.terms.clone();
        for (&e, &c) in &other.terms {
            let v = (out.get(&e).copied().unwrap_or(0) + c) % p;
            if v == 0 {
                out.remove(&e);
            } else {
                out.insert(e, v);
            }
        }
        LaurentPoly { terms: out }
    }

    pub fn neg(&self, p: u64) -> LaurentPoly {
        LaurentPoly {
            terms: self.terms.iter().map(|(&e, &c)| (e, (p - c) % p)).collect(),
        }
    }

    pub fn sub(&self, other: &LaurentPoly, p: u64) -> LaurentPoly {
        self.add(&other.neg(p), p)
    }

    pub fn scale(&self, c: i64, p: u64) -> LaurentPoly {
        let c = c.rem_euclid(p as i64) as u64;
        let mut terms = BTreeMap::new();
        for (&e, &x) in &self.terms {
            let v = x * c % p;
            if v != 0 {
                terms.insert(e, v);
            }
        }
        LaurentPoly { terms }
    }

    pub fn mul(&self, other: &LaurentPoly, p: u64) -> LaurentPoly {
        let mut out: BTreeMap<i64, u64> = BTreeMap::new();
        for (&e1, &c1) in &self.terms {
            for (&e2, &c2) in &other.terms {
                let v = (out.get(&(e1 + e2)).copied().unwrap_or(0) + c1 * c2) % p;
                if v == 0 {
                    out.remove(&(e1 + e2));
                } else {
                    out.insert(e1 + e2, v);
                }
            }
        }
        LaurentPoly { terms: out }
    }

    pub fn pow(&self, e: u32, p: u64) -> LaurentPoly {
        let mut acc = LaurentPoly::one(p);
        for _ in 0..e {
            acc = acc.mul(self, p);
        }
        acc
    }

    /// The augmentation: value at `w = 1`.
    pub fn eval_at_one(&self, p: u64) -> u64 {
        self.terms.values().sum::<u64>() % p
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_laurent_terms(f, self.terms.iter().rev().map(|(&e, &c)| (e, c as i64)))
    }
}

/// An integer Laurent polynomial in `w`: an exponent lift for the group-ring
/// substitution `t = e^{a hbar}`, `w = e^{b hbar}`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct IntLaurent {
    terms: BTreeMap<i64, i64>,
}

impl IntLaurent {
    pub fn zero() -> IntLaurent {
        IntLaurent::default()
    }

    pub fn constant(c: i64) -> IntLaurent {
        IntLaurent::monomial(0, c)
    }

    pub fn monomial(exp: i64, c: i64) -> IntLaurent {
        let mut terms = BTreeMap::new();
        if c != 0 {
            terms.insert(exp, c);
        }
        IntLaurent { terms }
    }

    pub fn from_terms(pairs: &[(i64, i64)]) -> IntLaurent {
        let mut out = IntLaurent::zero();
        for &(e, c) in pairs {
            out = out.add(&IntLaurent::monomial(e, c));
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> &BTreeMap<i64, i64> {
        &self.terms
    }

    pub fn add(&self, other: &IntLaurent) -> IntLaurent {
        let mut out = self.terms.clone();
        for (&e, &c) in &other.terms {
            let v = out.get(&e).copied().unwrap_or(0) + c;
            if v == 0 {
                out.remove(&e);
            } else {
                out.insert(e, v);
            }
        }
        IntLaurent { terms: out }
    }

    pub fn scale(&self, c: i64) -> IntLaurent {
        if c == 0 {
            return IntLaurent::zero();
        }
        IntLaurent {
            terms: self.terms.iter().map(|(&e, &x)| (e, x * c)).collect(),
        }
    }

    pub fn mul(&self, other: &IntLaurent) -> IntLaurent {
        let mut out = IntLaurent::zero();
        for (&e1, &c1) in &self.terms {
            for (&e2, &c2) in &other.terms {
                out = out.add(&IntLaurent::monomial(e1 + e2, c1 * c2));
            }
        }
        out
    }

    pub fn pow(&self, e: u32) -> IntLaurent {
        let mut acc = IntLaurent::constant(1);
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// The augmentation: value at `w = 1`.
    pub fn eval_at_one(&self) -> i64 {
        self.terms.values().sum()
    }

    /// Coefficientwise reduction mod p.
    pub fn reduce_mod(&self, p: u64) -> LaurentPoly {
        let mut out = LaurentPoly::zero();
        for (&e, &c) in &self.terms {
            out = out.add(&LaurentPoly::monomial(p, e, c), p);
        }
        out
    }

    /// Parses expressions such as `w^-2-w^-1`, `(1-w)*w^-2`, or `3`.
    pub fn parse(text: &str) -> Result<IntLaurent, ArithError> {
        let terms = parse_poly_expr(text, &[])?;
        let mut out = IntLaurent::zero();
        for (exps, lau) in terms {
            debug_assert!(exps.iter().all(|&e| e == 0));
            out = out.add(&lau);
        }
        Ok(out)
    }
}

impl fmt::Display for IntLaurent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_laurent_terms(f, self.terms.iter().rev().map(|(&e, &c)| (e, c)))
    }
}

fn write_laurent_terms<I: Iterator<Item = (i64, i64)>>(
    f: &mut fmt::Formatter<'_>,
    terms: I,
) -> fmt::Result {
    let mut first = true;
    let mut any = false;
    for (e, c) in terms {
        any = true;
        let mag = c.unsigned_abs();
        if c < 0 {
            write!(f, "-")?;
        } else if !first {
            write!(f, "+")?;
        }
        first = false;
        if e == 0 {
            write!(f, "{mag}")?;
        } else {
            if mag != 1 {
                write!(f, "{mag}*")?;
            }
            if e == 1 {
                write!(f, "w")?;
            } else {
                write!(f, "w^{e}")?;
            }
        }
    }
    if !any {
        write!(f, "0")?;
    }
    Ok(())
}

/// Dense operation tables over a small ring, for exhaustive checks.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ElementTable {
    q: usize,
    elems: Vec<RingElement>,
    index: BTreeMap<RingElement, u16>,
    add_t: Vec<u16>,
    mul_t: Vec<u16>,
    neg_t: Vec<u16>,
    one_idx: u16,
    zero_idx: u16,
}

impl ElementTable {
    pub fn new(ring: &GroundRing) -> ElementTable {
        let elems = ring.elements();
        let q = elems.len();
        assert!(q <= u16::MAX as usize, "ring too large for dense tables");
        let index: BTreeMap<RingElement, u16> = elems
            .iter()
            .enumerate()
            .map(|(i, e)| (e.clone(), i as u16))
            .collect();
        let mut add_t = vec![0u16; q * q];
        let mut mul_t = vec![0u16; q * q];
        let mut neg_t = vec![0u16; q];
        for i in 0..q {
            neg_t[i] = index[&ring.neg(&elems[i])];
            for j in 0..q {
                add_t[i * q + j] = index[&ring.add(&elems[i], &elems[j])];
                mul_t[i * q + j] = index[&ring.mul(&elems[i], &elems[j])];
            }
        }
        let one_idx = index[&ring.one()];
        let zero_idx = index[&ring.zero()];
        ElementTable {
            q,
            elems,
            index,
            add_t,
            mul_t,
            neg_t,
            one_idx,
            zero_idx,
        }
    }

    pub fn q(&self) -> usize {
        self.q
    }

    pub fn elem(&self, i: u16) -> &RingElement {
        &self.elems[i as usize]
    }

    pub fn index_of(&self, e: &RingElement) -> u16 {
        self.index[e]
    }

    #[inline]
    pub fn add(&self, i: u16, j: u16) -> u16 {
        self.add_t[i as usize * self.q + j as usize]
    }

    #[inline]
    pub fn mul(&self, i: u16, j: u16) -> u16 {
        self.mul_t[i as usize * self.q + j as usize]
    }

    #[inline]
    pub fn neg(&self, i: u16) -> u16 {
        self.neg_t[i as usize]
    }

    pub fn pow(&self, i: u16, e: u32) -> u16 {
        let mut acc = self.one_idx;
        for _ in 0..e {
            acc = self.mul(acc, i);
        }
        acc
    }

    pub fn one_idx(&self) -> u16 {
        self.one_idx
    }

    pub fn zero_idx(&self) -> u16 {
        self.zero_idx
    }
}

/// Parses a polynomial expression in the given variables and `w`.
///
/// Returns a map from variable-exponent vectors to integer Laurent
/// coefficients in `w`. Grammar: sums of products of factors; a factor is an
/// integer, a variable, `w`, or a parenthesized expression, optionally raised
/// by `^` to an integer exponent. Negative exponents are allowed only on `w`.
pub fn parse_poly_expr(
    text: &str,
    vars: &[char],
) -> Result<BTreeMap<Vec<u32>, IntLaurent>, ArithError> {
    let mut parser = ExprParser {
        chars: text.char_indices().collect(),
        pos: 0,
        vars: vars.to_vec(),
    };
    parser.skip_ws();
    let out = parser.expr()?;
    parser.skip_ws();
    if parser.pos < parser.chars.len() {
        return Err(parser.error("unexpected trailing input"));
    }
    Ok(out)
}

/// Multivariate polynomial with IntLaurent coefficients, used only while
/// parsing; keys have length `vars.len()`.
pub(crate) type PolyMap = BTreeMap<Vec<u32>, IntLaurent>;

struct ExprParser {
    chars: Vec<(usize, char)>,
    pos: usize,
    vars: Vec<char>,
}

impl ExprParser {
    fn error(&self, msg: &str) -> ArithError {
        let col = self
            .chars
            .get(self.pos)
            .map(|&(i, _)| i + 1)
            .unwrap_or_else(|| self.chars.last().map(|&(i, _)| i + 2).unwrap_or(1));
        ArithError::Parse {
            col,
            msg: msg.to_string(),
        }
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).map(|&(_, c)| c)
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek();
        if c.is_some() {
            self.pos += 1;
        }
        c
    }

    fn skip_ws(&mut self) {
        while matches!(self.peek(), Some(c) if c.is_whitespace()) {
            self.pos += 1;
        }
    }

    fn nvars(&self) -> usize {
        self.vars.len()
    }

    fn const_poly(&self, c: i64) -> PolyMap {
        let mut out = PolyMap::new();
        if c != 0 {
            out.insert(vec![0; self.nvars()], IntLaurent::constant(c));
        }
        out
    }

    fn expr(&mut self) -> Result<PolyMap, ArithError> {
        self.skip_ws();
        let mut negate = false;
        if self.peek() == Some('-') {
            self.bump();
            negate = true;
        } else if self.peek() == Some('+') {
            self.bump();
        }
        let mut acc = self.term()?;
        if negate {
            acc = poly_map_scale(&acc, -1);
        }
        loop {
            self.skip_ws();
            match self.peek() {
                Some('+') => {
                    self.bump();
                    let t = self.term()?;
                    acc = poly_map_add(&acc, &t);
                }
                Some('-') => {
                    self.bump();
                    let t = self.term()?;
                    acc = poly_map_add(&acc, &poly_map_scale(&t, -1));
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<PolyMap, ArithError> {
        let mut acc = self.factor()?;
        loop {
            self.skip_ws();
            if self.peek() == Some('*') {
                self.bump();
                let f = self.factor()?;
                acc = poly_map_mul(&acc, &f);
            } else {
                return Ok(acc);
            }
        }
    }

    fn factor(&mut self) -> Result<PolyMap, ArithError> {
        self.skip_ws();
        let (base, is_bare_w) = self.atom()?;
        self.skip_ws();
        if self.peek() == Some('^') {
            self.bump();
            self.skip_ws();
            let exp = self.integer()?;
            if exp < 0 {
                if !is_bare_w {
                    return Err(self.error("negative exponents are only allowed on w"));
                }
                let mut out = PolyMap::new();
                out.insert(vec![0; self.nvars()], IntLaurent::monomial(exp, 1));
                return Ok(out);
            }
            if exp > 64 {
                return Err(self.error("exponent too large"));
            }
            return Ok(poly_map_pow(&base, exp as u32, self.nvars()));
        }
        Ok(base)
    }

    /// Returns the parsed atom and whether it was the bare symbol `w`.
    fn atom(&mut self) -> Result<(PolyMap, bool), ArithError> {
        self.skip_ws();
        match self.peek() {
            Some('(') => {
                self.bump();
                let inner = self.expr()?;
                self.skip_ws();
                if self.peek() != Some(')') {
                    return Err(self.error("expected `)`"));
                }
                self.bump();
                Ok((inner, false))
            }
            Some('w') => {
                self.bump();
                let mut out = PolyMap::new();
                out.insert(vec![0; self.nvars()], IntLaurent::monomial(1, 1));
                Ok((out, true))
            }
            Some(c) if c.is_ascii_digit() => {
                let v = self.integer()?;
                Ok((self.const_poly(v), false))
            }
            Some(c) => {
                if let Some(vi) = self.vars.iter().position(|&v| v == c) {
                    self.bump();
                    let mut key = vec![0u32; self.nvars()];
                    key[vi] = 1;
                    let mut out = PolyMap::new();
                    out.insert(key, IntLaurent::constant(1));
                    Ok((out, false))
                } else {
                    Err(self.error(&format!("unexpected character `{c}`")))
                }
            }
            None => Err(self.error("unexpected end of input")),
        }
    }

    fn integer(&mut self) -> Result<i64, ArithError> {
        self.skip_ws();
        let mut neg = false;
        if self.peek() == Some('-') {
            self.bump();
            neg = true;
        }
        let mut digits = String::new();
        while matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
            digits.push(self.bump().unwrap());
        }
        if digits.is_empty() {
            return Err(self.error("expected an integer"));
        }
        let v: i64 = digits
            .parse()
            .map_err(|_| self.error("integer out of range"))?;
        Ok(if neg { -v } else { v })
    }
}

pub(crate) fn poly_map_add(a: &PolyMap, b: &PolyMap) -> PolyMap {
    let mut out = a.clone();
    for (k, v) in b {
        let cur = out.entry(k.clone()).or_insert_with(IntLaurent::zero);
        *cur = cur.add(v);
        if cur.is_zero() {
            out.remove(k);
        }
    }
    out
}

pub(crate) fn poly_map_scale(a: &PolyMap, c: i64) -> PolyMap {
    a.iter()
        .filter_map(|(k, v)| {
            let s = v.scale(c);
            (!s.is_zero()).then(|| (k.clone(), s))
        })
        .collect()
}

pub(crate) fn poly_map_mul(a: &PolyMap, b: &PolyMap) -> PolyMap {
    let mut out = PolyMap::new();
    for (k1, v1) in a {
        for (k2, v2) in b {
            let k: Vec<u32> = k1.iter().zip(k2).map(|(x, y)| x + y).collect();
            let v = v1.mul(v2);
            let cur = out.entry(k.clone()).or_insert_with(IntLaurent::zero);
            *cur = cur.add(&v);
            if cur.is_zero() {
                out.remove(&k);
            }
        }
    }
    out
}

pub(crate) fn poly_map_pow(a: &PolyMap, e: u32, nvars: usize) -> PolyMap {
    let mut acc = PolyMap::new();
    acc.insert(vec![0; nvars], IntLaurent::constant(1));
    for _ in 0..e {
        acc = poly_map_mul(&acc, a);
    }
    acc
}
