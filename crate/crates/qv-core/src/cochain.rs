//! Polynomial quandle cochains, the coboundary operator, and the explicit
//! cocycle bases for Alexander quandles on finite fields.
//!
//! Cochains are polynomials with `F_p[w^{±1}]` coefficients, in either arc
//! coordinates `x_1..x_n` or difference coordinates `U_i = x_i - x_{i+1}`,
//! `U_n = x_n`. The symbol `w` always denotes the class of `w` in `S`; the
//! quandle's omega enters formulas through explicit lifts.

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::arith::{
    mod_inverse, poly_map_mul, poly_map_pow, parse_poly_expr, poly_divmod, ArithError, ElementTable,
    GroundRing, IntLaurent, LaurentPoly, PolyMap, RingElement,
};
use crate::quandle::AlexanderQuandle;

/// Errors from cochain evaluation, basis construction, and parsing.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CochainError {
    #[error("arity mismatch: cochain takes {expected} arguments, got {got}")]
    ArityMismatch { expected: usize, got: usize },
    #[error("h is reducible over F_p; the basis formulas require a field")]
    NotAField,
    #[error("omega = 1 is the trivial quandle; no basis is defined")]
    OmegaTrivial,
    #[error("division by zero in a basis coefficient")]
    DivisionByZero,
    #[error("integer expansion is not divisible by p")]
    NotDivisibleByP,
    #[error("unknown cocycle name `{0}`")]
    UnknownCocycle(String),
    #[error("family condition violated for {name}: {reason}")]
    FamilyCondition { name: String, reason: String },
    #[error("parse error at column {col}: {msg}")]
    Parse { col: usize, msg: String },
    #[error(transparent)]
    Arith(#[from] ArithError),
}

/// Which variables a cochain polynomial is written in.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CoordSystem {
    /// Arc colors `x_1, .., x_n`.
    X,
    /// Differences `U_i = x_i - x_{i+1}` for `i < n`, `U_n = x_n`.
    U,
}

/// A polynomial cochain: map from exponent vectors (length `nvars`) to
/// Laurent coefficients in `w`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CochainPoly {
    p: u64,
    nvars: usize,
    coords: CoordSystem,
    terms: BTreeMap<Vec<u32>, LaurentPoly>,
}

type TermMap = BTreeMap<Vec<u32>, LaurentPoly>;

fn term_map_insert(map: &mut TermMap, key: Vec<u32>, coeff: LaurentPoly, p: u64) {
    if coeff.is_zero() {
        return;
    }
    let cur = map.entry(key.clone()).or_insert_with(LaurentPoly::zero);
    *cur = cur.add(&coeff, p);
    if cur.is_zero() {
        map.remove(&key);
    }
}

fn term_map_mul(a: &TermMap, b: &TermMap, p: u64) -> TermMap {
    let mut out = TermMap::new();
    for (k1, c1) in a {
        for (k2, c2) in b {
            let key: Vec<u32> = k1.iter().zip(k2).map(|(x, y)| x + y).collect();
            term_map_insert(&mut out, key, c1.mul(c2, p), p);
        }
    }
    out
}

impl CochainPoly {
    pub fn zero(p: u64, nvars: usize, coords: CoordSystem) -> CochainPoly {
        CochainPoly {
            p,
            nvars,
            coords,
            terms: TermMap::new(),
        }
    }

    /// A single term `coeff * prod_i var_i^{exps[i]}`.
    pub fn monomial(
        p: u64,
        coords: CoordSystem,
        exps: &[u32],
        coeff: LaurentPoly,
    ) -> CochainPoly {
        let mut out = CochainPoly::zero(p, exps.len(), coords);
        term_map_insert(&mut out.terms, exps.to_vec(), coeff, p);
        out
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn coords(&self) -> CoordSystem {
        self.coords
    }

    pub fn terms(&self) -> &BTreeMap<Vec<u32>, LaurentPoly> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn assert_compatible(&self, other: &CochainPoly) {
        assert_eq!(self.p, other.p, "mixed moduli");
        assert_eq!(self.nvars, other.nvars, "mixed variable counts");
        assert!(
            matches!(
                (self.coords, other.coords),
                (CoordSystem::X, CoordSystem::X) | (CoordSystem::U, CoordSystem::U)
            ),
            "mixed coordinate systems"
        );
    }

    pub fn add(&self, other: &CochainPoly) -> CochainPoly {
        self.assert_compatible(other);
        let mut out = self.clone();
        for (k, c) in &other.terms {
            term_map_insert(&mut out.terms, k.clone(), c.clone(), self.p);
        }
        out
    }

    pub fn neg(&self) -> CochainPoly {
        CochainPoly {
            p: self.p,
            nvars: self.nvars,
            coords: self.coords,
            terms: self
                .terms
                .iter()
                .map(|(k, c)| (k.clone(), c.neg(self.p)))
                .collect(),
        }
    }

    pub fn sub(&self, other: &CochainPoly) -> CochainPoly {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &LaurentPoly) -> CochainPoly {
        let mut out = CochainPoly::zero(self.p, self.nvars, self.coords);
        for (k, coeff) in &self.terms {
            term_map_insert(&mut out.terms, k.clone(), coeff.mul(c, self.p), self.p);
        }
        out
    }

    pub fn mul(&self, other: &CochainPoly) -> CochainPoly {
        self.assert_compatible(other);
        CochainPoly {
            p: self.p,
            nvars: self.nvars,
            coords: self.coords,
            terms: term_map_mul(&self.terms, &other.terms, self.p),
        }
    }

    pub fn pow(&self, e: u32) -> CochainPoly {
        let mut acc = CochainPoly::monomial(
            self.p,
            self.coords,
            &vec![0; self.nvars],
            LaurentPoly::one(self.p),
        );
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Reinterprets the cochain in `new_nvars >= nvars` variables, placing
    /// the old variables at positions `offset..offset+nvars`.
    pub fn embed(&self, new_nvars: usize, offset: usize) -> CochainPoly {
        assert!(offset + self.nvars <= new_nvars);
        let terms = self
            .terms
            .iter()
            .map(|(k, c)| {
                let mut key = vec![0u32; new_nvars];
                key[offset..offset + self.nvars].copy_from_slice(k);
                (key, c.clone())
            })
            .collect();
        CochainPoly {
            p: self.p,
            nvars: new_nvars,
            coords: self.coords,
            terms,
        }
    }

    /// Substitutes `var -> factor * var`, multiplying each term's coefficient
    /// by `factor^{exponent of var}`.
    pub fn scale_var(&self, var: usize, factor: &LaurentPoly) -> CochainPoly {
        let mut out = CochainPoly::zero(self.p, self.nvars, self.coords);
        for (k, c) in &self.terms {
            let scaled = c.mul(&factor.pow(k[var], self.p), self.p);
            term_map_insert(&mut out.terms, k.clone(), scaled, self.p);
        }
        out
    }

    /// Substitutes each variable by a linear form in new variables;
    /// `forms[i]` lists `(new_var, coefficient)` pairs.
    fn substitute_linear(
        &self,
        new_nvars: usize,
        forms: &[Vec<(usize, LaurentPoly)>],
    ) -> TermMap {
        assert_eq!(forms.len(), self.nvars);
        let p = self.p;
        let form_maps: Vec<TermMap> = forms
            .iter()
            .map(|form| {
                let mut m = TermMap::new();
                for (var, coeff) in form {
                    let mut key = vec![0u32; new_nvars];
                    key[*var] = 1;
                    term_map_insert(&mut m, key, coeff.clone(), p);
                }
                m
            })
            .collect();
        let mut out = TermMap::new();
        for (k, c) in &self.terms {
            let mut term = TermMap::new();
            term.insert(vec![0u32; new_nvars], c.clone());
            for (i, &e) in k.iter().enumerate() {
                for _ in 0..e {
                    term = term_map_mul(&term, &form_maps[i], p);
                }
            }
            for (key, coeff) in term {
                term_map_insert(&mut out, key, coeff, p);
            }
        }
        out
    }

    /// Converts between arc and difference coordinates.
    pub fn to_coords(&self, target: CoordSystem) -> CochainPoly {
        match (self.coords, target) {
            (CoordSystem::X, CoordSystem::X) | (CoordSystem::U, CoordSystem::U) => self.clone(),
            (CoordSystem::U, CoordSystem::X) => {
                // U_i = x_i - x_{i+1} for i < n, U_n = x_n
                let n = self.nvars;
                let p = self.p;
                let one = LaurentPoly::one(p);
                let minus_one = one.neg(p);
                let forms: Vec<Vec<(usize, LaurentPoly)>> = (0..n)
                    .map(|i| {
                        if i + 1 < n {
                            vec![(i, one.clone()), (i + 1, minus_one.clone())]
                        } else {
                            vec![(i, one.clone())]
                        }
                    })
                    .collect();
                CochainPoly {
                    p,
                    nvars: n,
                    coords: CoordSystem::X,
                    terms: self.substitute_linear(n, &forms),
                }
            }
            (CoordSystem::X, CoordSystem::U) => {
                // x_i = U_i + U_{i+1} + .. + U_n
                let n = self.nvars;
                let p = self.p;
                let one = LaurentPoly::one(p);
                let forms: Vec<Vec<(usize, LaurentPoly)>> = (0..n)
                    .map(|i| (i..n).map(|j| (j, one.clone())).collect())
                    .collect();
                CochainPoly {
                    p,
                    nvars: n,
                    coords: CoordSystem::U,
                    terms: self.substitute_linear(n, &forms),
                }
            }
        }
    }

    /// Evaluates at arc colors (x-coordinates) in `S`. Arguments are always
    /// colors; a `U`-coordinate cochain converts them internally.
    pub fn evaluate(
        &self,
        ring: &GroundRing,
        args: &[RingElement],
    ) -> Result<RingElement, CochainError> {
        if args.len() != self.nvars {
            return Err(CochainError::ArityMismatch {
                expected: self.nvars,
                got: args.len(),
            });
        }
        assert_eq!(ring.p(), self.p, "cochain modulus does not match ring");
        let us: Vec<RingElement> = match self.coords {
            CoordSystem::X => args.to_vec(),
            CoordSystem::U => (0..self.nvars)
                .map(|i| {
                    if i + 1 < self.nvars {
                        ring.sub(&args[i], &args[i + 1])
                    } else {
                        args[i].clone()
                    }
                })
                .collect(),
        };
        let mut out = ring.zero();
        for (k, c) in &self.terms {
            let mut term = ring.reduce_laurent(c);
            for (i, &e) in k.iter().enumerate() {
                term = ring.mul(&term, &ring.pow(&us[i], e as u64));
            }
            out = ring.add(&out, &term);
        }
        Ok(out)
    }

    /// Evaluates at symbolic Laurent records of arc colors.
    pub fn evaluate_sym(
        &self,
        args: &[LaurentPoly],
    ) -> Result<LaurentPoly, CochainError> {
        if args.len() != self.nvars {
            return Err(CochainError::ArityMismatch {
                expected: self.nvars,
                got: args.len(),
            });
        }
        let p = self.p;
        let us: Vec<LaurentPoly> = match self.coords {
            CoordSystem::X => args.to_vec(),
            CoordSystem::U => (0..self.nvars)
                .map(|i| {
                    if i + 1 < self.nvars {
                        args[i].sub(&args[i + 1], p)
                    } else {
                        args[i].clone()
                    }
                })
                .collect(),
        };
        let mut out = LaurentPoly::zero();
        for (k, c) in &self.terms {
            let mut term = c.clone();
            for (i, &e) in k.iter().enumerate() {
                term = term.mul(&us[i].pow(e, p), p);
            }
            out = out.add(&term, p);
        }
        Ok(out)
    }

    /// The quandle coboundary in difference coordinates, with `w` as omega:
    ///
    /// `(delta f)(U_1..U_{n+1}) = sum_{i=1}^{n} (-1)^{i-1} [
    ///    f(w U_1, .., w U_{i-1}, w U_i + U_{i+1}, U_{i+2}, ..)
    ///  - f(U_1, .., U_{i-1}, U_i + U_{i+1}, U_{i+2}, ..) ]`
    ///
    /// An `X`-coordinate input is converted first; the result is in `U`
    /// coordinates with one more variable.
    pub fn coboundary(&self) -> CochainPoly {
        let f = self.to_coords(CoordSystem::U);
        let n = f.nvars;
        let p = f.p;
        let one = LaurentPoly::one(p);
        let w = LaurentPoly::monomial(p, 1, 1);
        let mut acc = CochainPoly::zero(p, n + 1, CoordSystem::U);
        for i in 1..=n {
            let mut forms_a: Vec<Vec<(usize, LaurentPoly)>> = Vec::with_capacity(n);
            let mut forms_b: Vec<Vec<(usize, LaurentPoly)>> = Vec::with_capacity(n);
            for k in 0..n {
                if k + 1 < i {
                    forms_a.push(vec![(k, w.clone())]);
                    forms_b.push(vec![(k, one.clone())]);
                } else if k + 1 == i {
                    forms_a.push(vec![(k, w.clone()), (k + 1, one.clone())]);
                    forms_b.push(vec![(k, one.clone()), (k + 1, one.clone())]);
                } else {
                    forms_a.push(vec![(k + 1, one.clone())]);
                    forms_b.push(vec![(k + 1, one.clone())]);
                }
            }
            let part_a = CochainPoly {
                p,
                nvars: n + 1,
                coords: CoordSystem::U,
                terms: f.substitute_linear(n + 1, &forms_a),
            };
            let part_b = CochainPoly {
                p,
                nvars: n + 1,
                coords: CoordSystem::U,
                terms: f.substitute_linear(n + 1, &forms_b),
            };
            let diff = part_a.sub(&part_b);
            acc = if i % 2 == 1 { acc.add(&diff) } else { acc.sub(&diff) };
        }
        acc
    }

    /// Exhaustively checks the cocycle condition over the quandle: the
    /// degeneracy condition (vanishing when some `U_i = 0`, `i < n`) and the
    /// pointwise coboundary, computed with the quandle's actual omega.
    pub fn is_cocycle(&self, quandle: &AlexanderQuandle) -> bool {
        let ring = quandle.ring();
        assert_eq!(ring.p(), self.p, "cochain modulus does not match quandle");
        let f = self.to_coords(CoordSystem::U);
        let n = f.nvars;
        let table = ElementTable::new(ring);
        let q = table.q();

        // reduce each term to (coefficient index, exponents)
        let reduced: Vec<(u16, Vec<u32>)> = f
            .terms
            .iter()
            .map(|(k, c)| (table.index_of(&ring.reduce_laurent(c)), k.clone()))
            .collect();
        let max_exp = f
            .terms
            .keys()
            .flat_map(|k| k.iter().copied())
            .max()
            .unwrap_or(0);
        let mut pow_t = vec![0u16; q * (max_exp as usize + 1)];
        for v in 0..q {
            for e in 0..=max_exp as usize {
                pow_t[v * (max_exp as usize + 1) + e] = table.pow(v as u16, e as u32);
            }
        }
        let stride = max_exp as usize + 1;
        let eval_u = |u: &[u16]| -> u16 {
            let mut acc = table.zero_idx();
            for (c_idx, exps) in &reduced {
                let mut t = *c_idx;
                for (i, &e) in exps.iter().enumerate() {
                    t = table.mul(t, pow_t[u[i] as usize * stride + e as usize]);
                }
                acc = table.add(acc, t);
            }
            acc
        };

        // value table over S^n
        let total = q.pow(n as u32);
        let mut vals = vec![0u16; total];
        let mut tup = vec![0u16; n];
        for (flat, slot) in vals.iter_mut().enumerate() {
            let mut rem = flat;
            for i in (0..n).rev() {
                tup[i] = (rem % q) as u16;
                rem /= q;
            }
            *slot = eval_u(&tup);
        }

        // degeneracy: zero whenever U_i = 0 for some i < n
        let zero = table.zero_idx();
        for (flat, &val) in vals.iter().enumerate() {
            let mut rem = flat;
            for i in (0..n).rev() {
                tup[i] = (rem % q) as u16;
                rem /= q;
            }
            let degenerate = tup[..n.saturating_sub(1)].contains(&zero);
            if degenerate && val != zero {
                return false;
            }
        }

        // pointwise coboundary over S^{n+1}
        let om = table.index_of(quandle.omega());
        let flat_of = |u: &[u16]| -> usize {
            let mut idx = 0usize;
            for &v in u {
                idx = idx * q + v as usize;
            }
            idx
        };
        let mut v_tup = vec![0u16; n + 1];
        let mut args = vec![0u16; n];
        for flat in 0..q.pow(n as u32 + 1) {
            let mut rem = flat;
            for i in (0..=n).rev() {
                v_tup[i] = (rem % q) as u16;
                rem /= q;
            }
            let mut acc = zero;
            for i in 1..=n {
                // f(w V_1, .., w V_{i-1}, w V_i + V_{i+1}, V_{i+2}, ..)
                for k in 0..n {
                    args[k] = match (k + 1).cmp(&i) {
                        std::cmp::Ordering::Less => table.mul(om, v_tup[k]),
                        std::cmp::Ordering::Equal => {
                            table.add(table.mul(om, v_tup[k]), v_tup[k + 1])
                        }
                        std::cmp::Ordering::Greater => v_tup[k + 1],
                    };
                }
                let a = vals[flat_of(&args)];
                // f(V_1, .., V_{i-1}, V_i + V_{i+1}, V_{i+2}, ..)
                for k in 0..n {
                    args[k] = match (k + 1).cmp(&i) {
                        std::cmp::Ordering::Less => v_tup[k],
                        std::cmp::Ordering::Equal => table.add(v_tup[k], v_tup[k + 1]),
                        std::cmp::Ordering::Greater => v_tup[k + 1],
                    };
                }
                let b = vals[flat_of(&args)];
                let diff = table.add(a, table.neg(b));
                acc = if i % 2 == 1 {
                    table.add(acc, diff)
                } else {
                    table.add(acc, table.neg(diff))
                };
            }
            if acc != zero {
                return false;
            }
        }
        true
    }

    /// The mod-p divided power `chi(U, V) = (1/p)((U+V)^p - U^p - V^p)`,
    /// written as `sum_{j=1}^{p-1} (-1)^{j-1} j^{-1} U^{p-j} V^j`.
    pub fn chi(p: u64) -> CochainPoly {
        let mut out = CochainPoly::zero(p, 2, CoordSystem::U);
        for j in 1..p {
            let inv_j = mod_inverse(j, p).expect("1 <= j < p");
            let sign: i64 = if j % 2 == 1 { 1 } else { -1 };
            let coeff = LaurentPoly::constant(p, sign * inv_j as i64);
            term_map_insert(
                &mut out.terms,
                vec![(p - j) as u32, j as u32],
                coeff,
                p,
            );
        }
        out
    }

    /// Mochizuki's 3-cocycle `(x - y) (1/p) (y^p - z^p - (y - z + w^{-1}z)^p
    /// + (w^{-1}z)^p)`, built by exact integer expansion followed by division
    /// by p.
    pub fn mochizuki_p3(quandle: &AlexanderQuandle) -> Result<CochainPoly, CochainError> {
        let ring = quandle.ring();
        let p = ring.p();
        let inv_lift = quandle.omega_inv_lift();

        // integer polynomials in (x, y, z) with IntLaurent coefficients
        let mono = |key: [u32; 3], c: IntLaurent| -> PolyMap {
            let mut m = PolyMap::new();
            if !c.is_zero() {
                m.insert(key.to_vec(), c);
            }
            m
        };
        let one = IntLaurent::constant(1);
        let y = mono([0, 1, 0], one.clone());
        let z_coeff = IntLaurent::constant(-1).add(&inv_lift); // coefficient of z in y - z + w^{-1} z
        let mut tri = y.clone();
        for (k, v) in mono([0, 0, 1], z_coeff) {
            tri.insert(k, v);
        }
        let pe = p as u32;
        let tri_p = poly_map_pow(&tri, pe, 3);
        let y_p = mono([0, pe, 0], one.clone());
        let z_p = mono([0, 0, pe], one.clone());
        let wz_p = mono([0, 0, pe], inv_lift.pow(pe));

        let mut bracket = crate::arith::poly_map_add(&y_p, &crate::arith::poly_map_scale(&z_p, -1));
        bracket = crate::arith::poly_map_add(&bracket, &crate::arith::poly_map_scale(&tri_p, -1));
        bracket = crate::arith::poly_map_add(&bracket, &wz_p);

        // divide every integer coefficient by p
        let mut divided = PolyMap::new();
        for (k, lau) in bracket {
            let mut new_terms = IntLaurent::zero();
            for (&e, &c) in lau.terms() {
                if c % (p as i64) != 0 {
                    return Err(CochainError::NotDivisibleByP);
                }
                new_terms = new_terms.add(&IntLaurent::monomial(e, c / p as i64));
            }
            if !new_terms.is_zero() {
                divided.insert(k, new_terms);
            }
        }

        // multiply by (x - y) and reduce mod p
        let x_minus_y = {
            let mut m = mono([1, 0, 0], one);
            for (k, v) in mono([0, 1, 0], IntLaurent::constant(-1)) {
                m.insert(k, v);
            }
            m
        };
        let full = poly_map_mul(&x_minus_y, &divided);
        let mut out = CochainPoly::zero(p, 3, CoordSystem::X);
        for (k, lau) in full {
            term_map_insert(&mut out.terms, k, lau.reduce_mod(p), p);
        }
        Ok(out)
    }
}

impl fmt::Display for CochainPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        // graded lexicographic: total degree descending, then exponent
        // vector descending
        let mut keys: Vec<&Vec<u32>> = self.terms.keys().collect();
        keys.sort_by(|a, b| {
            let da: u32 = a.iter().sum();
            let db: u32 = b.iter().sum();
            db.cmp(&da).then_with(|| b.cmp(a))
        });
        let var_name = |i: usize| -> String {
            match self.coords {
                CoordSystem::X => ["x", "y", "z"]
                    .get(i)
                    .map(|s| s.to_string())
                    .unwrap_or_else(|| format!("x{}", i + 1)),
                CoordSystem::U => format!("U{}", i + 1),
            }
        };
        let mut first = true;
        for key in keys {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let coeff = &self.terms[key];
            let coeff_str = coeff.to_string();
            let is_one = coeff_str == "1";
            let mut vars = String::new();
            for (i, &e) in key.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                if !vars.is_empty() {
                    vars.push('*');
                }
                vars.push_str(&var_name(i));
                if e > 1 {
                    vars.push_str(&format!("^{e}"));
                }
            }
            if vars.is_empty() {
                write!(f, "{coeff_str}")?;
            } else if is_one {
                write!(f, "{vars}")?;
            } else if coeff.terms().len() > 1 {
                write!(f, "({coeff_str})*{vars}")?;
            } else {
                write!(f, "{coeff_str}*{vars}")?;
            }
        }
        Ok(())
    }
}

/// True when `h` is irreducible over `F_p`, i.e. `S` is the field `F_{p^m}`.
pub fn ring_is_field(ring: &GroundRing) -> bool {
    let m = ring.m();
    if m == 1 {
        return true;
    }
    let p = ring.p();
    let h: Vec<u64> = ring.h_coeffs().to_vec();
    // trial division by every monic polynomial of degree 1..=m/2
    for d in 1..=m / 2 {
        let mut coeffs = vec![0u64; d + 1];
        coeffs[d] = 1;
        loop {
            let (_, rem) = poly_divmod(&h, &coeffs, p);
            if rem.is_empty() {
                return false;
            }
            // increment low coefficients as a base-p counter
            let mut i = 0;
            loop {
                if i == d {
                    break;
                }
                coeffs[i] += 1;
                if coeffs[i] < p {
                    break;
                }
                coeffs[i] = 0;
                i += 1;
            }
            if i == d {
                break;
            }
        }
    }
    true
}

fn check_field_and_omega(quandle: &AlexanderQuandle) -> Result<(), CochainError> {
    if !ring_is_field(quandle.ring()) {
        return Err(CochainError::NotAField);
    }
    if quandle.is_trivial() {
        return Err(CochainError::OmegaTrivial);
    }
    Ok(())
}

fn omega_power_is_one(quandle: &AlexanderQuandle, e: u64) -> bool {
    quandle.ring().pow(quandle.omega(), e) == quandle.ring().one()
}

fn p_pow(p: u64, e: u32) -> u32 {
    p.checked_pow(e)
        .and_then(|v| u32::try_from(v).ok())
        .expect("p^e fits in u32 at desk scale")
}

/// The monomial basis of `H^2_Q`: `U_1^{p^v} U_2^{p^u}` for `0 <= v < u < m`
/// with `omega^{p^v + p^u} = 1`. Returns `(selector name, cochain)` pairs.
pub fn basis_h2(
    quandle: &AlexanderQuandle,
) -> Result<Vec<(String, CochainPoly)>, CochainError> {
    check_field_and_omega(quandle)?;
    let ring = quandle.ring();
    let p = ring.p();
    let m = ring.m() as u32;
    let mut out = Vec::new();
    for v in 0..m {
        for u in v + 1..m {
            if omega_power_is_one(quandle, (p_pow(p, v) + p_pow(p, u)) as u64) {
                let poly = CochainPoly::monomial(
                    p,
                    CoordSystem::U,
                    &[p_pow(p, v), p_pow(p, u)],
                    LaurentPoly::one(p),
                );
                out.push((format!("basis2:{v},{u}"), poly));
            }
        }
    }
    Ok(out)
}

/// Constructs one element of the `H^3_Q` basis families. `family` is one of
/// `0`, `1`, `2`, `3`, `4-1`..`4-5`; `params` are the family's exponent
/// parameters. Family conditions are validated.
pub fn basis3_element(
    quandle: &AlexanderQuandle,
    family: &str,
    params: &[u32],
) -> Result<CochainPoly, CochainError> {
    check_field_and_omega(quandle)?;
    let ring = quandle.ring();
    let p = ring.p();
    let m = ring.m() as u32;
    let name = format!(
        "basis3:{family}:{}",
        params
            .iter()
            .map(|v| v.to_string())
            .collect::<Vec<_>>()
            .join(",")
    );
    let fail = |reason: &str| -> CochainError {
        CochainError::FamilyCondition {
            name: name.clone(),
            reason: reason.to_string(),
        }
    };
    let arity = |want: usize| -> Result<(), CochainError> {
        if params.len() != want {
            Err(fail(&format!("expected {want} parameters")))
        } else {
            Ok(())
        }
    };
    let pw = |e: u32| p_pow(p, e);
    let om_is_one = |e: u64| omega_power_is_one(quandle, e);
    match family {
        "0" => {
            arity(2)?;
            let (v, u) = (params[0], params[1]);
            if !(v < u && u < m) {
                return Err(fail("requires 0 <= v < u < m"));
            }
            if !om_is_one((pw(v) + pw(u)) as u64) {
                return Err(fail("requires omega^(p^v + p^u) = 1"));
            }
            Ok(CochainPoly::monomial(
                p,
                CoordSystem::U,
                &[pw(v), pw(u), 0],
                LaurentPoly::one(p),
            ))
        }
        "1" => {
            arity(3)?;
            let (v, u, t) = (params[0], params[1], params[2]);
            if !(v < u && u < t && t < m) {
                return Err(fail("requires 0 <= v < u < t < m"));
            }
            if !om_is_one((pw(v) + pw(u) + pw(t)) as u64) {
                return Err(fail("requires omega^(p^v + p^u + p^t) = 1"));
            }
            Ok(CochainPoly::monomial(
                p,
                CoordSystem::U,
                &[pw(v), pw(u), pw(t)],
                LaurentPoly::one(p),
            ))
        }
        "2" => {
            arity(2)?;
            let (u, t) = (params[0], params[1]);
            if !(u < t && t < m) {
                return Err(fail("requires 0 <= u < t < m"));
            }
            if !om_is_one((pw(u + 1) + pw(t)) as u64) {
                return Err(fail("requires omega^(p^(u+1) + p^t) = 1"));
            }
            let chi = CochainPoly::chi(p).embed(3, 0);
            let diff = chi.scale_var(0, &quandle.omega_sym()).sub(&chi);
            let f = diff.pow(pw(u));
            let u3 = CochainPoly::monomial(
                p,
                CoordSystem::U,
                &[0, 0, pw(t)],
                LaurentPoly::one(p),
            );
            Ok(f.mul(&u3))
        }
        "3" => {
            arity(2)?;
            let (v, t) = (params[0], params[1]);
            if !(v <= t && t < m) {
                return Err(fail("requires 0 <= v <= t < m"));
            }
            if !om_is_one((pw(v) + pw(t + 1)) as u64) {
                return Err(fail("requires omega^(p^v + p^(t+1)) = 1"));
            }
            let chi = CochainPoly::chi(p).embed(3, 1);
            let diff = chi.sub(&chi.scale_var(2, &quandle.omega_inv_sym()));
            let f = diff.pow(pw(t));
            let u1 = CochainPoly::monomial(
                p,
                CoordSystem::U,
                &[pw(v), 0, 0],
                LaurentPoly::one(p),
            );
            Ok(u1.mul(&f))
        }
        "4-1" | "4-2" | "4-3" | "4-4" | "4-5" => {
            arity(4)?;
            let (v, u, t, s) = (params[0], params[1], params[2], params[3]);
            if !(u <= t && v < t && t < m && u < s && s < m) {
                return Err(fail("requires u <= t, v < t < m, u < s < m"));
            }
            if !om_is_one((pw(v) + pw(t)) as u64) || !om_is_one((pw(u) + pw(s)) as u64) {
                return Err(fail("requires omega^(p^v + p^t) = omega^(p^u + p^s) = 1"));
            }
            let vu_one = om_is_one((pw(v) + pw(u)) as u64);
            let mono = |e1: u32, e2: u32, e3: u32| {
                CochainPoly::monomial(p, CoordSystem::U, &[e1, e2, e3], LaurentPoly::one(p))
            };
            match family {
                "4-1" => {
                    if !vu_one {
                        return Err(fail("requires omega^(p^v + p^u) = 1"));
                    }
                    Ok(mono(pw(v), pw(u) + pw(t), pw(s)))
                }
                "4-2" => {
                    if vu_one {
                        return Err(fail("requires omega^(p^v + p^u) != 1"));
                    }
                    if t <= s {
                        return Err(fail("requires t > s"));
                    }
                    // c = (1 - omega^(p^v + p^u)) / (omega^(p^u) - 1)
                    let om_vu = ring.pow(quandle.omega(), (pw(v) + pw(u)) as u64);
                    let om_u = ring.pow(quandle.omega(), pw(u) as u64);
                    let num = ring.sub(&ring.one(), &om_vu);
                    let den = ring.sub(&om_u, &ring.one());
                    let den_inv = ring.invert(&den).map_err(|_| CochainError::DivisionByZero)?;
                    let c = ring.mul(&num, &den_inv);
                    let c_sym = ring.canonical_lift(&c).reduce_mod(p);
                    let main = mono(pw(v), pw(u) + pw(t), pw(s))
                        .sub(&mono(pw(u), pw(v) + pw(s), pw(t)));
                    let tail = mono(pw(v), pw(u), pw(t) + pw(s))
                        .sub(&mono(pw(v) + pw(u), pw(s), pw(t)));
                    Ok(main.sub(&tail.scale(&c_sym)))
                }
                "4-3" => {
                    if p == 2 {
                        return Err(fail("requires p != 2"));
                    }
                    if vu_one {
                        return Err(fail("requires omega^(p^v + p^u) != 1"));
                    }
                    if t != s {
                        return Err(fail("requires t = s"));
                    }
                    // c = 2^{-1} (1 + omega^{-p^t}); this is the coefficient
                    // forced by delta(M1) = -c * delta(M2), which the
                    // cohomology tests verify pointwise
                    let om_inv_t = ring.pow(quandle.omega_inv(), pw(t) as u64);
                    let two_inv = ring
                        .invert(&ring.from_coeffs(&[2]))
                        .map_err(|_| CochainError::DivisionByZero)?;
                    let c = ring.mul(&two_inv, &ring.add(&ring.one(), &om_inv_t));
                    let c_sym = ring.canonical_lift(&c).reduce_mod(p);
                    let m1 = mono(pw(v), pw(u) + pw(t), pw(s));
                    let m2 = mono(pw(v), pw(u), pw(t) + pw(s));
                    Ok(m1.add(&m2.scale(&c_sym)))
                }
                "4-4" | "4-5" => {
                    if family == "4-4" {
                        if p == 2 {
                            return Err(fail("requires p != 2"));
                        }
                        if !(u <= v && v < t && t < s) {
                            return Err(fail("requires u <= v < t < s"));
                        }
                    } else {
                        if p != 2 {
                            return Err(fail("requires p = 2"));
                        }
                        if !(u < v && v < t && t < s) {
                            return Err(fail("requires u < v < t < s"));
                        }
                    }
                    if vu_one {
                        return Err(fail("requires omega^(p^v + p^u) != 1"));
                    }
                    let om_v = ring.pow(quandle.omega(), pw(v) as u64);
                    let om_u = ring.pow(quandle.omega(), pw(u) as u64);
                    if om_v != om_u {
                        return Err(fail("requires omega^(p^v) = omega^(p^u)"));
                    }
                    // c = (1 - omega^(2 p^v)) / (omega^(p^v) - 1)
                    let num = ring.sub(&ring.one(), &ring.mul(&om_v, &om_v));
                    let den = ring.sub(&om_v, &ring.one());
                    let den_inv = ring.invert(&den).map_err(|_| CochainError::DivisionByZero)?;
                    let c = ring.mul(&num, &den_inv);
                    let c_sym = ring.canonical_lift(&c).reduce_mod(p);
                    let a = mono(pw(v), pw(u) + pw(t), pw(s));
                    let b = mono(pw(u), pw(v) + pw(t), pw(s));
                    let tail = mono(pw(v) + pw(u), pw(t), pw(s));
                    Ok(a.add(&b).sub(&tail.scale(&c_sym)))
                }
                _ => unreachable!(),
            }
        }
        _ => Err(CochainError::UnknownCocycle(format!("basis3:{family}"))),
    }
}

/// The basis of `H^3_Q` as the union of families `I_1, I_2, I_3, I_4, I_0`,
/// enumerated deterministically. Returns `(selector name, cochain)` pairs.
pub fn basis_h3(
    quandle: &AlexanderQuandle,
) -> Result<Vec<(String, CochainPoly)>, CochainError> {
    check_field_and_omega(quandle)?;
    let ring = quandle.ring();
    let p = ring.p();
    let m = ring.m() as u32;
    let pw = |e: u32| p_pow(p, e);
    let om_is_one = |e: u64| omega_power_is_one(quandle, e);
    let mut out: Vec<(String, CochainPoly)> = Vec::new();
    let push = |family: &str, params: &[u32], out: &mut Vec<(String, CochainPoly)>| {
        let name = format!(
            "basis3:{family}:{}",
            params
                .iter()
                .map(|v| v.to_string())
                .collect::<Vec<_>>()
                .join(",")
        );
        let poly = basis3_element(quandle, family, params)
            .expect("enumeration satisfies the family conditions");
        out.push((name, poly));
    };

    // I_1
    for v in 0..m {
        for u in v + 1..m {
            for t in u + 1..m {
                if om_is_one((pw(v) + pw(u) + pw(t)) as u64) {
                    push("1", &[v, u, t], &mut out);
                }
            }
        }
    }
    // I_2
    for u in 0..m {
        for t in u + 1..m {
            if om_is_one((pw(u + 1) + pw(t)) as u64) {
                push("2", &[u, t], &mut out);
            }
        }
    }
    // I_3
    for v in 0..m {
        for t in v..m {
            if om_is_one((pw(v) + pw(t + 1)) as u64) {
                push("3", &[v, t], &mut out);
            }
        }
    }
    // I_4 under the shared condition: u <= t, v < t < m, u < s < m,
    // omega^(p^v + p^t) = omega^(p^u + p^s) = 1
    for v in 0..m {
        for u in 0..m {
            for t in 0..m {
                for s in 0..m {
                    if !(u <= t && v < t && u < s) {
                        continue;
                    }
                    if !om_is_one((pw(v) + pw(t)) as u64) || !om_is_one((pw(u) + pw(s)) as u64) {
                        continue;
                    }
                    let vu_one = om_is_one((pw(v) + pw(u)) as u64);
                    if vu_one {
                        push("4-1", &[v, u, t, s], &mut out);
                    } else if t > s {
                        push("4-2", &[v, u, t, s], &mut out);
                    } else if t == s {
                        if p != 2 {
                            push("4-3", &[v, u, t, s], &mut out);
                        }
                    } else {
                        // t < s
                        let om_v = ring.pow(quandle.omega(), pw(v) as u64);
                        let om_u = ring.pow(quandle.omega(), pw(u) as u64);
                        if om_v == om_u {
                            if p != 2 && u <= v && v < t {
                                push("4-4", &[v, u, t, s], &mut out);
                            } else if p == 2 && u < v && v < t {
                                push("4-5", &[v, u, t, s], &mut out);
                            }
                        }
                    }
                }
            }
        }
    }
    // I_0: two-variable monomials viewed as 3-cochains
    for v in 0..m {
        for u in v + 1..m {
            if om_is_one((pw(v) + pw(u)) as u64) {
                push("0", &[v, u], &mut out);
            }
        }
    }
    Ok(out)
}

/// Looks up a cocycle by selector name: `mochizuki-p3`, `example111`,
/// `basis2:v,u`, or `basis3:<family>:<params>`.
pub fn named_cocycle(
    name: &str,
    quandle: &AlexanderQuandle,
) -> Result<CochainPoly, CochainError> {
    let p = quandle.ring().p();
    if name == "mochizuki-p3" {
        return CochainPoly::mochizuki_p3(quandle);
    }
    if name == "example111" {
        // (x - y) y^2 = x y^2 - y^3
        let mut out = CochainPoly::zero(p, 2, CoordSystem::X);
        term_map_insert(&mut out.terms, vec![1, 2], LaurentPoly::one(p), p);
        term_map_insert(&mut out.terms, vec![0, 3], LaurentPoly::constant(p, -1), p);
        return Ok(out);
    }
    let parse_params = |text: &str| -> Result<Vec<u32>, CochainError> {
        text.split(',')
            .map(|tok| {
                tok.trim()
                    .parse::<u32>()
                    .map_err(|_| CochainError::UnknownCocycle(name.to_string()))
            })
            .collect()
    };
    if let Some(rest) = name.strip_prefix("basis2:") {
        let params = parse_params(rest)?;
        if params.len() != 2 {
            return Err(CochainError::UnknownCocycle(name.to_string()));
        }
        let found = basis_h2(quandle)?;
        let want = format!("basis2:{},{}", params[0], params[1]);
        return found
            .into_iter()
            .find(|(n, _)| *n == want)
            .map(|(_, poly)| poly)
            .ok_or_else(|| CochainError::FamilyCondition {
                name: want,
                reason: "no basis element with these parameters".to_string(),
            });
    }
    if let Some(rest) = name.strip_prefix("basis3:") {
        let (family, params_text) = rest
            .split_once(':')
            .ok_or_else(|| CochainError::UnknownCocycle(name.to_string()))?;
        let params = parse_params(params_text)?;
        return basis3_element(quandle, family, &params);
    }
    Err(CochainError::UnknownCocycle(name.to_string()))
}

/// Parses one cocycle polynomial in the variables `x, y, z, w` (arc
/// coordinates). The arity is 3 when `z` occurs, otherwise 2.
pub fn parse_cochain(p: u64, text: &str) -> Result<CochainPoly, CochainError> {
    let parsed = parse_poly_expr(text, &['x', 'y', 'z']).map_err(|e| match e {
        ArithError::Parse { col, msg } => CochainError::Parse { col, msg },
        other => CochainError::Arith(other),
    })?;
    let uses_z = parsed.keys().any(|k| k[2] > 0);
    let nvars = if uses_z { 3 } else { 2 };
    let mut out = CochainPoly::zero(p, nvars, CoordSystem::X);
    for (key, lau) in parsed {
        let trimmed: Vec<u32> = key[..nvars].to_vec();
        term_map_insert(&mut out.terms, trimmed, lau.reduce_mod(p), p);
    }
    Ok(out)
}
