//! The braiding operator attached to a quandle 2-cocycle, and the operator
//! form of the state-sum invariant.
//!
//! For a 2-cocycle `f` the map `R(e_x (x) e_y) = t^{f(x, y)} e_y (x) e_{x*y}`
//! is a weighted permutation of the basis of `V (x) V`, `V` the free module
//! on `S`. It satisfies the Yang-Baxter equation, and for cochains vanishing
//! on the diagonal the Markov trace conditions, so the trace of the induced
//! braid representation recovers the state sum directly.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::arith::{ArithError, ElementTable, GroundRing, RingElement};
use crate::cochain::{CochainError, CochainPoly};
use crate::diagram::{BraidLetter, BraidWord, DiagramError};
use crate::invariant::GroupRingElement;
use crate::quandle::AlexanderQuandle;

/// Errors from the braiding-operator layer.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RMatrixError {
    #[error("the cochain is not a cocycle over this quandle")]
    NotACocycle,
    #[error(transparent)]
    Cochain(#[from] CochainError),
    #[error(transparent)]
    Diagram(#[from] DiagramError),
    #[error(transparent)]
    Arith(#[from] ArithError),
}

/// A weighted permutation of the basis of `V (x) V`: column `(x, y)` carries
/// the single entry `t^exp` in row `perm[(x, y)]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RMatrix {
    ring: GroundRing,
    q: usize,
    /// Row of the unique entry in each column; basis pairs flatten as
    /// `ix * q + iy`.
    perm: Vec<usize>,
    /// Exponent class of each column's entry, as an element-table index.
    exp: Vec<u16>,
    table: ElementTable,
}

/// A diagonal map `V -> V` sending `e_x` to `t^{mu_x} e_x`, with `None`
/// entries meaning the coefficient is zero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiagonalMap {
    entries: Vec<Option<RingElement>>,
}

impl DiagonalMap {
    pub fn new(entries: Vec<Option<RingElement>>) -> DiagonalMap {
        DiagonalMap { entries }
    }

    /// The identity map: every entry `t^0`.
    pub fn identity(ring: &GroundRing) -> DiagonalMap {
        DiagonalMap {
            entries: vec![Some(ring.zero()); ring.order() as usize],
        }
    }

    pub fn entries(&self) -> &[Option<RingElement>] {
        &self.entries
    }
}

impl RMatrix {
    /// The identity operator on `V (x) V`.
    pub fn identity(ring: GroundRing) -> RMatrix {
        let table = ElementTable::new(&ring);
        let q = table.q();
        RMatrix {
            ring,
            q,
            perm: (0..q * q).collect(),
            exp: vec![table.zero_idx(); q * q],
            table,
        }
    }

    pub fn ring(&self) -> &GroundRing {
        &self.ring
    }

    pub fn q(&self) -> usize {
        self.q
    }

    /// Applies the operator to the basis pair `(a, b)` of element-table
    /// indices, returning the image pair and the exponent's table index.
    pub fn apply(&self, a: u16, b: u16) -> (u16, u16, u16) {
        let col = a as usize * self.q + b as usize;
        let row = self.perm[col];
        ((row / self.q) as u16, (row % self.q) as u16, self.exp[col])
    }

    /// The inverse weighted permutation: transposed, with negated exponents.
    pub fn inverse(&self) -> RMatrix {
        let mut perm = vec![0usize; self.q * self.q];
        let mut exp = vec![0u16; self.q * self.q];
        for col in 0..self.q * self.q {
            perm[self.perm[col]] = col;
            exp[self.perm[col]] = self.table.neg(self.exp[col]);
        }
        RMatrix {
            ring: self.ring.clone(),
            q: self.q,
            perm,
            exp,
            table: self.table.clone(),
        }
    }

    /// Verifies `(R (x) id)(id (x) R)(R (x) id) = (id (x) R)(R (x) id)(id (x) R)`
    /// on all `q^3` basis states.
    pub fn check_yang_baxter(&self) -> bool {
        let q = self.q;
        let apply12 = |state: (u16, u16, u16)| {
            let (a, b, e) = self.apply(state.0, state.1);
            ((a, b, state.2), e)
        };
        let apply23 = |state: (u16, u16, u16)| {
            let (a, b, e) = self.apply(state.1, state.2);
            ((state.0, a, b), e)
        };
        for ia in 0..q as u16 {
            for ib in 0..q as u16 {
                for ic in 0..q as u16 {
                    let start = (ia, ib, ic);
                    let (s1, e1) = apply12(start);
                    let (s2, e2) = apply23(s1);
                    let (lhs, e3) = apply12(s2);
                    let le = self.table.add(self.table.add(e1, e2), e3);
                    let (s1, e1) = apply23(start);
                    let (s2, e2) = apply12(s1);
                    let (rhs, e3) = apply23(s2);
                    let re = self.table.add(self.table.add(e1, e2), e3);
                    if lhs != rhs || le != re {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// Markov trace conditions with the identity enhancement.
    pub fn markov_conditions(&self) -> bool {
        self.markov_conditions_with(&DiagonalMap::identity(&self.ring))
    }

    /// Markov trace conditions with enhancement `h`: the partial traces
    /// `tr_2((id (x) h) R^{+-1})` both equal `id_V`, and `h (x) h` commutes
    /// with `R`. The zero map is rejected.
    pub fn markov_conditions_with(&self, h: &DiagonalMap) -> bool {
        let q = self.q;
        if h.entries.len() != q || h.entries.iter().all(|e| e.is_none()) {
            return false;
        }
        let mu: Vec<Option<u16>> = h
            .entries
            .iter()
            .map(|e| e.as_ref().map(|c| self.table.index_of(c)))
            .collect();

        // tr_2((id (x) h) R^{+-1}) = id_V, as formal sums per matrix entry so
        // that cancelling contributions are still caught
        for mat in [self.clone(), self.inverse()] {
            let mut entries: BTreeMap<(u16, u16), BTreeMap<u16, i64>> = BTreeMap::new();
            for x in 0..q as u16 {
                for y in 0..q as u16 {
                    let (ox, oy, e) = mat.apply(x, y);
                    if oy != y {
                        continue;
                    }
                    if let Some(m) = mu[oy as usize] {
                        let class = self.table.add(e, m);
                        *entries
                            .entry((ox, x))
                            .or_default()
                            .entry(class)
                            .or_insert(0) += 1;
                    }
                }
            }
            for (key, sum) in &mut entries {
                sum.retain(|_, c| *c != 0);
                let expect_identity = key.0 == key.1;
                let is_unit = sum.len() == 1
                    && sum.get(&self.table.zero_idx()) == Some(&1);
                if expect_identity != is_unit || !(is_unit || sum.is_empty()) {
                    return false;
                }
            }
            for x in 0..q as u16 {
                if !entries.contains_key(&(x, x)) {
                    return false;
                }
            }
        }

        // (h (x) h) R = R (h (x) h) entrywise
        for x in 0..q as u16 {
            for y in 0..q as u16 {
                let (ox, oy, _) = self.apply(x, y);
                let lhs = match (&mu[ox as usize], &mu[oy as usize]) {
                    (Some(a), Some(b)) => Some(self.table.add(*a, *b)),
                    _ => None,
                };
                let rhs = match (&mu[x as usize], &mu[y as usize]) {
                    (Some(a), Some(b)) => Some(self.table.add(*a, *b)),
                    _ => None,
                };
                if lhs != rhs {
                    return false;
                }
            }
        }
        true
    }
}

/// Builds the braiding operator of a verified 2-cocycle.
pub fn build_r_matrix(
    f: &CochainPoly,
    quandle: &AlexanderQuandle,
) -> Result<RMatrix, RMatrixError> {
    if f.nvars() != 2 {
        return Err(RMatrixError::Cochain(CochainError::ArityMismatch {
            expected: 2,
            got: f.nvars(),
        }));
    }
    if !f.is_cocycle(quandle) {
        return Err(RMatrixError::NotACocycle);
    }
    build_r_matrix_unchecked(f, quandle)
}

/// `build_r_matrix` without the cocycle verification; the result need not
/// satisfy the Yang-Baxter equation.
pub fn build_r_matrix_unchecked(
    f: &CochainPoly,
    quandle: &AlexanderQuandle,
) -> Result<RMatrix, RMatrixError> {
    if f.nvars() != 2 {
        return Err(RMatrixError::Cochain(CochainError::ArityMismatch {
            expected: 2,
            got: f.nvars(),
        }));
    }
    let ring = quandle.ring();
    let table = ElementTable::new(ring);
    let q = table.q();
    let mut perm = vec![0usize; q * q];
    let mut exp = vec![0u16; q * q];
    for ix in 0..q as u16 {
        for iy in 0..q as u16 {
            let x = table.elem(ix).clone();
            let y = table.elem(iy).clone();
            let out = quandle.op(&x, &y);
            let col = ix as usize * q + iy as usize;
            perm[col] = iy as usize * q + table.index_of(&out) as usize;
            exp[col] = table.index_of(&f.evaluate(ring, &[x, y])?);
        }
    }
    Ok(RMatrix {
        ring: ring.clone(),
        q,
        perm,
        exp,
        table,
    })
}

/// The trace of the braid representation: applies `R^{+-1}` per letter to
/// each of the `q^n` basis states and collects `t^E` over the fixed ones.
/// Fails on singular letters; resolve those first.
pub fn operator_invariant(
    word: &BraidWord,
    r: &RMatrix,
) -> Result<GroupRingElement, RMatrixError> {
    if word.has_singular() {
        return Err(RMatrixError::Diagram(DiagramError::SingularPresent));
    }
    let n = word.strands();
    let q = r.q;
    let total = q
        .checked_pow(n as u32)
        .expect("state space q^n overflows usize");
    let r_inv = r.inverse();
    let mut counts: BTreeMap<RingElement, i64> = BTreeMap::new();
    let mut start = vec![0u16; n];
    for s in 0..total {
        let mut rem = s;
        for d in start.iter_mut().rev() {
            *d = (rem % q) as u16;
            rem /= q;
        }
        let mut state = start.clone();
        let mut exp_idx = r.table.zero_idx();
        for letter in word.letters() {
            let k = letter.index() - 1;
            let mat = match letter {
                BraidLetter::Positive(_) => r,
                BraidLetter::Negative(_) => &r_inv,
                BraidLetter::Singular(_) => unreachable!(),
            };
            let (a, b, e) = mat.apply(state[k], state[k + 1]);
            state[k] = a;
            state[k + 1] = b;
            exp_idx = r.table.add(exp_idx, e);
        }
        if state == start {
            *counts.entry(r.table.elem(exp_idx).clone()).or_insert(0) += 1;
        }
    }
    Ok(GroupRingElement::from_class_counts(r.ring.clone(), &counts)?)
}
