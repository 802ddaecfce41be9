//! Alexander quandles `x * y = w x + (1 - w) y` on the ground ring, with
//! axiom checking for the quandle laws.

use crate::arith::{ArithError, GroundRing, IntLaurent, LaurentPoly, RingElement};

/// The Alexander quandle on `S` determined by a unit `omega`:
/// `x * y = omega x + (1 - omega) y`.
#[derive(Debug, Clone)]
pub struct AlexanderQuandle {
    ring: GroundRing,
    omega: RingElement,
    omega_inv: RingElement,
    one_minus_omega: RingElement,
    omega_is_generator: bool,
}

/// Result of an axiom check; `witness` describes the first counterexample.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AxiomReport {
    pub ok: bool,
    pub witness: Option<String>,
}

impl AxiomReport {
    fn pass() -> AxiomReport {
        AxiomReport {
            ok: true,
            witness: None,
        }
    }

    fn fail(witness: String) -> AxiomReport {
        AxiomReport {
            ok: false,
            witness: Some(witness),
        }
    }
}

impl AlexanderQuandle {
    /// Fails with `NotAUnit` when `omega` is not invertible in `S`.
    pub fn new(ring: GroundRing, omega: RingElement) -> Result<AlexanderQuandle, ArithError> {
        let omega_inv = ring.invert(&omega)?;
        let one_minus_omega = ring.sub(&ring.one(), &omega);
        let omega_is_generator = omega == ring.omega();
        Ok(AlexanderQuandle {
            ring,
            omega,
            omega_inv,
            one_minus_omega,
            omega_is_generator,
        })
    }

    pub fn ring(&self) -> &GroundRing {
        &self.ring
    }

    pub fn omega(&self) -> &RingElement {
        &self.omega
    }

    pub fn omega_inv(&self) -> &RingElement {
        &self.omega_inv
    }

    /// True for the trivial quandle `omega = 1`, where `x * y = x`.
    pub fn is_trivial(&self) -> bool {
        self.omega == self.ring.one()
    }

    /// `x * y = omega x + (1 - omega) y`.
    pub fn op(&self, x: &RingElement, y: &RingElement) -> RingElement {
        self.ring.add(
            &self.ring.mul(&self.omega, x),
            &self.ring.mul(&self.one_minus_omega, y),
        )
    }

    /// The inverse operation in the first slot: `unop(a, b) * b = a`,
    /// so `unop(a, b) = omega^{-1} (a - (1 - omega) b)`.
    pub fn unop(&self, a: &RingElement, b: &RingElement) -> RingElement {
        self.ring.mul(
            &self.omega_inv,
            &self.ring.sub(a, &self.ring.mul(&self.one_minus_omega, b)),
        )
    }

    /// Integer lift of `omega`: the monomial `w` when omega is the class of
    /// `w`, otherwise the canonical lift. Either way it reduces to `omega`.
    pub fn omega_lift(&self) -> IntLaurent {
        if self.omega_is_generator {
            IntLaurent::monomial(1, 1)
        } else {
            self.ring.canonical_lift(&self.omega)
        }
    }

    /// Integer lift of `omega^{-1}`, with the same convention as `omega_lift`.
    pub fn omega_inv_lift(&self) -> IntLaurent {
        if self.omega_is_generator {
            IntLaurent::monomial(-1, 1)
        } else {
            self.ring.canonical_lift(&self.omega_inv)
        }
    }

    /// Symbolic `omega` as a mod-p Laurent polynomial.
    pub fn omega_sym(&self) -> LaurentPoly {
        self.omega_lift().reduce_mod(self.ring.p())
    }

    /// Symbolic `omega^{-1}`, with the same convention as `omega_sym`.
    pub fn omega_inv_sym(&self) -> LaurentPoly {
        self.omega_inv_lift().reduce_mod(self.ring.p())
    }

    /// Quandle operation on symbolic Laurent records; reduces compatibly
    /// with `op`.
    pub fn op_sym(&self, x: &LaurentPoly, y: &LaurentPoly) -> LaurentPoly {
        let p = self.ring.p();
        let om = self.omega_sym();
        let one_minus = LaurentPoly::one(p).sub(&om, p);
        om.mul(x, p).add(&one_minus.mul(y, p), p)
    }

    /// Inverse symbolic operation; reduces compatibly with `unop`.
    pub fn unop_sym(&self, a: &LaurentPoly, b: &LaurentPoly) -> LaurentPoly {
        let p = self.ring.p();
        let om = self.omega_sym();
        let omi = self.omega_inv_sym();
        let one_minus = LaurentPoly::one(p).sub(&om, p);
        omi.mul(&a.sub(&one_minus.mul(b, p), p), p)
    }

    /// Exhaustively checks idempotence, right-invertibility, and right
    /// self-distributivity over all of `S`.
    pub fn check_axioms(&self) -> AxiomReport {
        let elems = self.ring.elements();
        let show = |e: &RingElement| self.ring.element_string(e);
        for a in &elems {
            if self.op(a, a) != *a {
                return AxiomReport::fail(format!("idempotence fails at a = {}", show(a)));
            }
        }
        for a in &elems {
            for b in &elems {
                let c = self.op(a, b);
                if self.unop(&c, b) != *a {
                    return AxiomReport::fail(format!(
                        "right-invertibility fails at a = {}, b = {}",
                        show(a),
                        show(b)
                    ));
                }
            }
        }
        for a in &elems {
            for b in &elems {
                let ab = self.op(a, b);
                for c in &elems {
                    let lhs = self.op(&ab, c);
                    let rhs = self.op(&self.op(a, c), &self.op(b, c));
                    if lhs != rhs {
                        return AxiomReport::fail(format!(
                            "distributivity fails at a = {}, b = {}, c = {}",
                            show(a),
                            show(b),
                            show(c)
                        ));
                    }
                }
            }
        }
        AxiomReport::pass()
    }
}

/// Checks the quandle axioms on a raw operation table `t[a][b] = a * b`
/// over indices; used as a negative control on corrupted tables.
pub fn check_axioms_table(table: &[Vec<usize>]) -> AxiomReport {
    let n = table.len();
    if table.iter().any(|row| row.len() != n) {
        return AxiomReport::fail("table is not square".to_string());
    }
    if let Some((a, row)) = table
        .iter()
        .enumerate()
        .find(|(_, row)| row.iter().any(|&v| v >= n))
    {
        let b = row.iter().position(|&v| v >= n).unwrap();
        return AxiomReport::fail(format!("entry ({a}, {b}) out of range"));
    }
    for a in 0..n {
        if table[a][a] != a {
            return AxiomReport::fail(format!("idempotence fails at a = {a}"));
        }
    }
    for b in 0..n {
        let mut seen = vec![false; n];
        for a in 0..n {
            seen[table[a][b]] = true;
        }
        if !seen.iter().all(|&s| s) {
            return AxiomReport::fail(format!("right translation by b = {b} is not a bijection"));
        }
    }
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                if table[table[a][b]][c] != table[table[a][c]][table[b][c]] {
                    return AxiomReport::fail(format!(
                        "distributivity fails at a = {a}, b = {b}, c = {c}"
                    ));
                }
            }
        }
    }
    AxiomReport::pass()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::GroundRing;

    fn f4_quandle() -> AlexanderQuandle {
        let r = GroundRing::new(2, &[1, 1, 1]).unwrap();
        let w = r.omega();
        AlexanderQuandle::new(r, w).unwrap()
    }

    fn r3_quandle() -> AlexanderQuandle {
        let r = GroundRing::new(3, &[1, 1]).unwrap();
        let w = r.omega();
        AlexanderQuandle::new(r, w).unwrap()
    }

    fn s_prime_quandle() -> AlexanderQuandle {
        let r = GroundRing::new(3, &[1, 2, 1]).unwrap();
        let w = r.omega();
        AlexanderQuandle::new(r, w).unwrap()
    }

    #[test]
    fn creation_requires_unit() {
        let r = GroundRing::new(2, &[1, 1, 1]).unwrap();
        let zero = r.zero();
        assert!(matches!(
            AlexanderQuandle::new(r, zero),
            Err(ArithError::NotAUnit)
        ));
        let s = GroundRing::new(3, &[1, 2, 1]).unwrap();
        let eps = s.from_coeffs(&[1, 1]);
        assert!(matches!(
            AlexanderQuandle::new(s, eps),
            Err(ArithError::NotAUnit)
        ));
    }

    #[test]
    fn dihedral_operation() {
        // F_3[w]/(w+1) sends w to 2, giving the dihedral quandle R_3:
        // x * y = 2x + 2y
        let q = r3_quandle();
        let r = q.ring();
        assert_eq!(*q.omega(), r.from_coeffs(&[2]));
        let zero = r.zero();
        let one = r.one();
        assert_eq!(q.op(&zero, &one), r.from_coeffs(&[2]));
        for x in r.elements() {
            assert_eq!(q.op(&x, &x), x);
        }
    }

    #[test]
    fn symbolic_operation_reduces_to_ring_operation() {
        for q in [f4_quandle(), r3_quandle(), s_prime_quandle()] {
            let r = q.ring();
            let p = r.p();
            for x in r.elements() {
                for y in r.elements() {
                    let xs = r.canonical_lift(&x).reduce_mod(p);
                    let ys = r.canonical_lift(&y).reduce_mod(p);
                    assert_eq!(r.reduce_laurent(&q.op_sym(&xs, &ys)), q.op(&x, &y));
                    assert_eq!(r.reduce_laurent(&q.unop_sym(&xs, &ys)), q.unop(&x, &y));
                }
            }
        }
    }

    #[test]
    fn symbolic_operation_on_trefoil_colors() {
        // 0 * 1 = 1 - w symbolically over F_4
        let q = f4_quandle();
        let p = q.ring().p();
        let zero = LaurentPoly::zero();
        let one = LaurentPoly::one(p);
        let got = q.op_sym(&zero, &one);
        assert_eq!(got, LaurentPoly::one(p).add(&LaurentPoly::monomial(p, 1, 1), p));
    }

    #[test]
    fn unop_inverts_op_exhaustively() {
        for q in [f4_quandle(), r3_quandle(), s_prime_quandle()] {
            let elems = q.ring().elements();
            for a in &elems {
                for b in &elems {
                    assert_eq!(q.unop(&q.op(a, b), b), *a);
                    assert_eq!(q.op(&q.unop(a, b), b), *a);
                }
            }
        }
    }

    #[test]
    fn axioms_pass_for_standard_quandles() {
        for q in [f4_quandle(), r3_quandle(), s_prime_quandle()] {
            let report = q.check_axioms();
            assert!(report.ok, "witness: {:?}", report.witness);
        }
    }

    #[test]
    fn corrupted_table_fails_axioms() {
        // the dihedral quandle R_3 as a table: t[a][b] = 2b - a mod 3
        let mut table: Vec<Vec<usize>> = (0..3)
            .map(|a| (0..3).map(|b| (2 * b + 2 * a) % 3).collect())
            .collect();
        assert!(check_axioms_table(&table).ok);
        table[0][1] = 0; // break right-invertibility in column 1
        let report = check_axioms_table(&table);
        assert!(!report.ok);
        assert!(report.witness.is_some());
    }
}
