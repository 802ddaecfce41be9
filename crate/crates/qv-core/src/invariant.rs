//! Group-ring valued state sums: the 2-cocycle invariant and the shadow
//! 3-cocycle invariant.
//!
//! Each coloring contributes `t^E` where `E in S` is the signed sum of
//! cocycle values over the crossings; the invariant collects these by
//! `S`-class. Every class carries an integer Laurent lift of its exponent
//! for the `hbar`-expansion: pipeline-built elements use the
//! augmentation-normalized lift, while elements read from files keep their
//! supplied lifts.

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::arith::{ArithError, GroundRing, IntLaurent, LaurentPoly, RingElement};
use crate::cochain::{CochainError, CochainPoly};
use crate::coloring::{enumerate_colorings, shadow_extend, ColoringError, ColoringPolicy};
use crate::diagram::BraidWord;
use crate::quandle::AlexanderQuandle;

/// Errors from state-sum evaluation.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum InvariantError {
    #[error("the cochain is not a cocycle over this quandle")]
    NotACocycle,
    #[error(transparent)]
    Cochain(#[from] CochainError),
    #[error(transparent)]
    Coloring(#[from] ColoringError),
    #[error(transparent)]
    Arith(#[from] ArithError),
}

/// One group-ring term `coeff * t^class`, with an integer lift of the
/// exponent.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct GroupRingTerm {
    pub class: RingElement,
    pub lift: IntLaurent,
    pub coeff: i64,
}

/// An element of `Z[S]` written `sum coeff * t^E`, sorted by exponent class.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupRingElement {
    ring: GroundRing,
    terms: Vec<GroupRingTerm>,
}

impl GroupRingElement {
    pub fn zero(ring: GroundRing) -> GroupRingElement {
        GroupRingElement {
            ring,
            terms: Vec::new(),
        }
    }

    /// Builds from class multiplicities, attaching the normalized lift of
    /// each class.
    pub fn from_class_counts(
        ring: GroundRing,
        counts: &BTreeMap<RingElement, i64>,
    ) -> Result<GroupRingElement, ArithError> {
        let mut terms = Vec::with_capacity(counts.len());
        for (class, &coeff) in counts {
            if coeff == 0 {
                continue;
            }
            let lift = ring.normalized_lift(class)?;
            terms.push(GroupRingTerm {
                class: class.clone(),
                lift,
                coeff,
            });
        }
        Ok(GroupRingElement { ring, terms })
    }

    /// Builds from explicit `(coeff, lift)` pairs, e.g. read from a file.
    /// Terms with the same class but different lifts stay separate; exact
    /// duplicates merge.
    pub fn from_terms(ring: GroundRing, raw: Vec<(i64, IntLaurent)>) -> GroupRingElement {
        let mut merged: BTreeMap<(RingElement, IntLaurent), i64> = BTreeMap::new();
        for (coeff, lift) in raw {
            let class = ring.reduce_int_laurent(&lift);
            *merged.entry((class, lift)).or_insert(0) += coeff;
        }
        let terms = merged
            .into_iter()
            .filter(|(_, coeff)| *coeff != 0)
            .map(|((class, lift), coeff)| GroupRingTerm { class, lift, coeff })
            .collect();
        GroupRingElement { ring, terms }
    }

    pub fn ring(&self) -> &GroundRing {
        &self.ring
    }

    pub fn terms(&self) -> &[GroupRingTerm] {
        &self.terms
    }

    /// Evaluation at `t = 1`: the sum of coefficients.
    pub fn eval_t1(&self) -> i64 {
        self.terms.iter().map(|t| t.coeff).sum()
    }

    /// Multiplicity of each exponent class, merging terms with equal class.
    pub fn class_counts(&self) -> BTreeMap<RingElement, i64> {
        let mut out = BTreeMap::new();
        for t in &self.terms {
            *out.entry(t.class.clone()).or_insert(0) += t.coeff;
        }
        out.retain(|_, c| *c != 0);
        out
    }
}

impl fmt::Display for GroupRingElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, term) in self.terms.iter().enumerate() {
            let mag = term.coeff.unsigned_abs();
            if i == 0 {
                if term.coeff < 0 {
                    write!(f, "-")?;
                }
            } else if term.coeff < 0 {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            if term.class.is_zero() {
                write!(f, "{mag}")?;
            } else if mag == 1 {
                write!(f, "t^({})", self.ring.element_string(&term.class))?;
            } else {
                write!(f, "{mag}*t^({})", self.ring.element_string(&term.class))?;
            }
        }
        Ok(())
    }
}

/// Per-coloring diagnostics: the exponent class and its symbolic record.
#[derive(Debug, Clone)]
pub struct StateSumDetail {
    pub per_coloring: Vec<(RingElement, LaurentPoly)>,
}

fn check_arity(f: &CochainPoly, want: usize) -> Result<(), InvariantError> {
    if f.nvars() != want {
        return Err(InvariantError::Cochain(CochainError::ArityMismatch {
            expected: want,
            got: f.nvars(),
        }));
    }
    Ok(())
}

/// The 2-cocycle invariant: signed cocycle values summed over crossings,
/// collected over colorings. A `FixArcAndRegion` policy fixes only the arc;
/// regions play no role in degree 2.
pub fn state_sum_2(
    word: &BraidWord,
    f: &CochainPoly,
    quandle: &AlexanderQuandle,
    policy: &ColoringPolicy,
) -> Result<GroupRingElement, InvariantError> {
    check_arity(f, 2)?;
    if !f.is_cocycle(quandle) {
        return Err(InvariantError::NotACocycle);
    }
    state_sum_2_unchecked(word, f, quandle, policy)
}

/// `state_sum_2` without the cocycle verification. The result is a link
/// invariant only when `f` is a cocycle.
pub fn state_sum_2_unchecked(
    word: &BraidWord,
    f: &CochainPoly,
    quandle: &AlexanderQuandle,
    policy: &ColoringPolicy,
) -> Result<GroupRingElement, InvariantError> {
    Ok(state_sum_2_detailed(word, f, quandle, policy)?.0)
}

/// As `state_sum_2_unchecked`, also returning per-coloring exponents.
pub fn state_sum_2_detailed(
    word: &BraidWord,
    f: &CochainPoly,
    quandle: &AlexanderQuandle,
    policy: &ColoringPolicy,
) -> Result<(GroupRingElement, StateSumDetail), InvariantError> {
    check_arity(f, 2)?;
    let ring = quandle.ring();
    let p = ring.p();
    let (diagram, colorings) = enumerate_colorings(word, quandle, policy)?;
    let mut counts: BTreeMap<RingElement, i64> = BTreeMap::new();
    let mut detail = Vec::with_capacity(colorings.len());
    for col in &colorings {
        let mut exp = ring.zero();
        let mut exp_sym = LaurentPoly::zero();
        for c in diagram.crossings() {
            let x = if c.sign > 0 {
                c.under_in
            } else {
                c.under_out
            };
            let w = f.evaluate(ring, &[col.color(x).clone(), col.color(c.over).clone()])?;
            let w_sym = f.evaluate_sym(&[col.symbolic(x).clone(), col.symbolic(c.over).clone()])?;
            if c.sign > 0 {
                exp = ring.add(&exp, &w);
                exp_sym = exp_sym.add(&w_sym, p);
            } else {
                exp = ring.sub(&exp, &w);
                exp_sym = exp_sym.sub(&w_sym, p);
            }
        }
        *counts.entry(exp.clone()).or_insert(0) += 1;
        detail.push((exp, exp_sym));
    }
    let element = GroupRingElement::from_class_counts(ring.clone(), &counts)?;
    Ok((
        element,
        StateSumDetail {
            per_coloring: detail,
        },
    ))
}

/// The shadow 3-cocycle invariant: weights `phi(z, x, y)` with `z` the color
/// of the region west of the crossing. The policy decides both the arc
/// constraint and the base region colors summed over: `SumAll` and `FixArc`
/// sum over all bases, `FixArcAndRegion` uses its single base.
pub fn state_sum_3(
    word: &BraidWord,
    phi: &CochainPoly,
    quandle: &AlexanderQuandle,
    policy: &ColoringPolicy,
) -> Result<GroupRingElement, InvariantError> {
    check_arity(phi, 3)?;
    if !phi.is_cocycle(quandle) {
        return Err(InvariantError::NotACocycle);
    }
    state_sum_3_unchecked(word, phi, quandle, policy)
}

/// `state_sum_3` without the cocycle verification. The result is a link
/// invariant only when `phi` is a cocycle.
pub fn state_sum_3_unchecked(
    word: &BraidWord,
    phi: &CochainPoly,
    quandle: &AlexanderQuandle,
    policy: &ColoringPolicy,
) -> Result<GroupRingElement, InvariantError> {
    Ok(state_sum_3_detailed(word, phi, quandle, policy)?.0)
}

/// As `state_sum_3_unchecked`, also returning per-(coloring, base)
/// exponents.
pub fn state_sum_3_detailed(
    word: &BraidWord,
    phi: &CochainPoly,
    quandle: &AlexanderQuandle,
    policy: &ColoringPolicy,
) -> Result<(GroupRingElement, StateSumDetail), InvariantError> {
    check_arity(phi, 3)?;
    let ring = quandle.ring();
    let p = ring.p();
    let (diagram, colorings) = enumerate_colorings(word, quandle, policy)?;
    let bases: Vec<RingElement> = match policy.fixed_region() {
        Some(base) => vec![base.clone()],
        None => ring.elements(),
    };
    let mut counts: BTreeMap<RingElement, i64> = BTreeMap::new();
    let mut detail = Vec::new();
    for col in &colorings {
        for base in &bases {
            let shadow = shadow_extend(&diagram, quandle, col, base)?;
            let mut exp = ring.zero();
            let mut exp_sym = LaurentPoly::zero();
            for c in diagram.crossings() {
                let x = if c.sign > 0 {
                    c.under_in
                } else {
                    c.under_out
                };
                let west = c.corners[0];
                let w = phi.evaluate(
                    ring,
                    &[
                        shadow.region(west).clone(),
                        col.color(x).clone(),
                        col.color(c.over).clone(),
                    ],
                )?;
                let w_sym = phi.evaluate_sym(&[
                    shadow.region_symbolic(west).clone(),
                    col.symbolic(x).clone(),
                    col.symbolic(c.over).clone(),
                ])?;
                if c.sign > 0 {
                    exp = ring.add(&exp, &w);
                    exp_sym = exp_sym.add(&w_sym, p);
                } else {
                    exp = ring.sub(&exp, &w);
                    exp_sym = exp_sym.sub(&w_sym, p);
                }
            }
            *counts.entry(exp.clone()).or_insert(0) += 1;
            detail.push((exp, exp_sym));
        }
    }
    let element = GroupRingElement::from_class_counts(ring.clone(), &counts)?;
    Ok((
        element,
        StateSumDetail {
            per_coloring: detail,
        },
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cochain::named_cocycle;

    fn quandle(p: u64, h: &[i64]) -> AlexanderQuandle {
        let r = GroundRing::new(p, h).unwrap();
        let w = r.omega();
        AlexanderQuandle::new(r, w).unwrap()
    }

    fn f4() -> AlexanderQuandle {
        quandle(2, &[1, 1, 1])
    }

    fn s_prime() -> AlexanderQuandle {
        quandle(3, &[1, 2, 1])
    }

    fn r3() -> AlexanderQuandle {
        quandle(3, &[1, 1])
    }

    fn counts_of(g: &GroupRingElement) -> Vec<(Vec<u64>, i64)> {
        g.class_counts()
            .into_iter()
            .map(|(e, c)| (e.coeffs().to_vec(), c))
            .collect()
    }

    #[test]
    fn example111_torus_links() {
        let q = f4();
        let f = named_cocycle("example111", &q).unwrap();
        let g3 = state_sum_2(
            &BraidWord::torus(3),
            &f,
            &q,
            &ColoringPolicy::SumAll,
        )
        .unwrap();
        assert_eq!(g3.eval_t1(), 16);
        assert_eq!(counts_of(&g3), vec![(vec![0, 0], 4), (vec![0, 1], 12)]);

        let g6 = state_sum_2(
            &BraidWord::torus(6),
            &f,
            &q,
            &ColoringPolicy::SumAll,
        )
        .unwrap();
        assert_eq!(counts_of(&g6), vec![(vec![0, 0], 16)]);
    }

    #[test]
    fn unknot_and_trivial_words() {
        let q = f4();
        let f = named_cocycle("example111", &q).unwrap();
        let kink = state_sum_2(&BraidWord::torus(1), &f, &q, &ColoringPolicy::SumAll).unwrap();
        assert_eq!(counts_of(&kink), vec![(vec![0, 0], 4)]);

        // sigma_1 sigma_1^{-1} equals the crossingless 2-strand closure
        let cancel = state_sum_2(
            &BraidWord::parse("2 ; 1 -1").unwrap(),
            &f,
            &q,
            &ColoringPolicy::SumAll,
        )
        .unwrap();
        let empty = state_sum_2(&BraidWord::torus(0), &f, &q, &ColoringPolicy::SumAll).unwrap();
        assert_eq!(cancel, empty);
        assert_eq!(counts_of(&empty), vec![(vec![0, 0], 16)]);
    }

    #[test]
    fn coboundary_gives_trivial_invariant() {
        // f = delta(U_1) = (w-1)U_1 is a 2-cocycle over R_3
        let q = r3();
        let f = CochainPoly::monomial(3, crate::cochain::CoordSystem::U, &[1], LaurentPoly::one(3))
            .coboundary();
        let g = state_sum_2(&BraidWord::torus(3), &f, &q, &ColoringPolicy::SumAll).unwrap();
        assert_eq!(counts_of(&g), vec![(vec![0], 9)]);
        let g = state_sum_2(&BraidWord::torus(4), &f, &q, &ColoringPolicy::SumAll).unwrap();
        assert_eq!(counts_of(&g), vec![(vec![0], 3)]);
    }

    #[test]
    fn markov_moves_preserve_state_sum() {
        let q = f4();
        let f = named_cocycle("example111", &q).unwrap();
        let sum = |text: &str| {
            state_sum_2(
                &BraidWord::parse(text).unwrap(),
                &f,
                &q,
                &ColoringPolicy::SumAll,
            )
            .unwrap()
        };
        // conjugation within B_3
        assert_eq!(sum("3 ; 1 1 1"), sum("3 ; 2 1 1 1 -2"));
        // stabilization from B_2 to B_3
        assert_eq!(sum("2 ; 1 1 1"), sum("3 ; 1 1 1 2"));
        assert_eq!(sum("3 ; 1 1 1").eval_t1(), 64);
    }

    #[test]
    fn example110_torus_links() {
        let q = s_prime();
        let phi = named_cocycle("mochizuki-p3", &q).unwrap();
        let policy = ColoringPolicy::FixArcAndRegion {
            arc: 0,
            color: q.ring().zero(),
            region: q.ring().zero(),
        };
        let g3 =
            state_sum_3_unchecked(&BraidWord::torus(3), &phi, &q, &policy).unwrap();
        assert_eq!(g3.eval_t1(), 9);
        assert_eq!(
            counts_of(&g3),
            vec![
                (vec![0, 0], 3),
                (vec![2, 0], 2),
                (vec![0, 1], 2),
                (vec![1, 2], 2),
            ]
        );
        let g6 =
            state_sum_3_unchecked(&BraidWord::torus(6), &phi, &q, &policy).unwrap();
        assert_eq!(
            counts_of(&g6),
            vec![
                (vec![0, 0], 3),
                (vec![1, 0], 2),
                (vec![2, 1], 2),
                (vec![0, 2], 2),
            ]
        );
        assert_eq!(g6.eval_t1(), 9);
        let g9 =
            state_sum_3_unchecked(&BraidWord::torus(9), &phi, &q, &policy).unwrap();
        assert_eq!(counts_of(&g9), vec![(vec![0, 0], 9)]);
    }

    #[test]
    fn example110_sum_all_scales_the_fixed_sum() {
        let q = s_prime();
        let phi = named_cocycle("mochizuki-p3", &q).unwrap();
        let g = state_sum_3_unchecked(
            &BraidWord::torus(3),
            &phi,
            &q,
            &ColoringPolicy::SumAll,
        )
        .unwrap();
        assert_eq!(g.eval_t1(), 729);
        assert_eq!(
            counts_of(&g),
            vec![
                (vec![0, 0], 243),
                (vec![2, 0], 162),
                (vec![0, 1], 162),
                (vec![1, 2], 162),
            ]
        );
    }

    #[test]
    fn shadow_invariant_of_unknot_counts_colorings() {
        let q = s_prime();
        let phi = named_cocycle("mochizuki-p3", &q).unwrap();
        let policy = ColoringPolicy::FixArcAndRegion {
            arc: 0,
            color: q.ring().zero(),
            region: q.ring().zero(),
        };
        let g = state_sum_3_unchecked(&BraidWord::torus(1), &phi, &q, &policy).unwrap();
        assert_eq!(counts_of(&g), vec![(vec![0, 0], 1)]);
    }

    #[test]
    fn dihedral_shadow_trefoil() {
        // the classical shadow invariant of the trefoil over R_3
        let q = r3();
        let phi = named_cocycle("mochizuki-p3", &q).unwrap();
        assert!(phi.is_cocycle(&q));
        let policy = ColoringPolicy::FixArcAndRegion {
            arc: 0,
            color: q.ring().zero(),
            region: q.ring().zero(),
        };
        let g = state_sum_3(&BraidWord::torus(3), &phi, &q, &policy).unwrap();
        assert_eq!(counts_of(&g), vec![(vec![0], 1), (vec![2], 2)]);
    }

    #[test]
    fn cocycle_verification_gates_the_checked_entry_points() {
        let q = f4();
        // U_1 U_2 is not a 2-cocycle over F_4 (omega^2 != 1)
        let bad =
            CochainPoly::monomial(2, crate::cochain::CoordSystem::U, &[1, 1], LaurentPoly::one(2));
        assert!(matches!(
            state_sum_2(&BraidWord::torus(3), &bad, &q, &ColoringPolicy::SumAll),
            Err(InvariantError::NotACocycle)
        ));

        // the p = 3 cocycle fails the cocycle condition over S'
        let q = s_prime();
        let phi = named_cocycle("mochizuki-p3", &q).unwrap();
        assert!(matches!(
            state_sum_3(&BraidWord::torus(3), &phi, &q, &ColoringPolicy::SumAll),
            Err(InvariantError::NotACocycle)
        ));
    }

    #[test]
    fn arity_is_checked() {
        let q = f4();
        let f = named_cocycle("example111", &q).unwrap();
        assert!(matches!(
            state_sum_3(&BraidWord::torus(3), &f, &q, &ColoringPolicy::SumAll),
            Err(InvariantError::Cochain(CochainError::ArityMismatch { .. }))
        ));
    }

    #[test]
    fn invalid_policy_is_reported() {
        let q = f4();
        let f = named_cocycle("example111", &q).unwrap();
        let policy = ColoringPolicy::FixArc {
            arc: 99,
            color: q.ring().zero(),
        };
        assert!(matches!(
            state_sum_2(&BraidWord::torus(3), &f, &q, &policy),
            Err(InvariantError::Coloring(ColoringError::PolicyInvalid(_)))
        ));
    }

    #[test]
    fn t1_matches_coloring_count() {
        let q = f4();
        let f = named_cocycle("example111", &q).unwrap();
        for text in ["2 ; 1", "2 ; 1 1", "2 ; 1 1 1", "3 ; 1 -2"] {
            let w = BraidWord::parse(text).unwrap();
            let g = state_sum_2(&w, &f, &q, &ColoringPolicy::SumAll).unwrap();
            let n = enumerate_colorings(&w, &q, &ColoringPolicy::SumAll)
                .unwrap()
                .1
                .len();
            assert_eq!(g.eval_t1(), n as i64);
        }
    }

    #[test]
    fn pipeline_lifts_are_normalized() {
        let q = s_prime();
        let phi = named_cocycle("mochizuki-p3", &q).unwrap();
        let policy = ColoringPolicy::FixArcAndRegion {
            arc: 0,
            color: q.ring().zero(),
            region: q.ring().zero(),
        };
        let g = state_sum_3_unchecked(&BraidWord::torus(3), &phi, &q, &policy).unwrap();
        let ring = g.ring().clone();
        for term in g.terms() {
            assert_eq!(term.lift.eval_at_one().rem_euclid(3), 0);
            assert_eq!(ring.reduce_int_laurent(&term.lift), term.class);
        }
    }

    #[test]
    fn from_terms_merges_exact_duplicates_only() {
        let ring = GroundRing::new(3, &[1, 2, 1]).unwrap();
        // two lifts of the same class stay distinct; exact duplicates merge
        let e1 = IntLaurent::from_terms(&[(-2, 1), (-1, -1)]);
        let e2 = IntLaurent::from_terms(&[(1, 1), (0, -2), (-1, 1)]);
        assert_eq!(
            ring.reduce_int_laurent(&e1),
            ring.reduce_int_laurent(&e2)
        );
        let g = GroupRingElement::from_terms(
            ring.clone(),
            vec![(2, e1.clone()), (1, e2.clone()), (1, e1.clone())],
        );
        assert_eq!(g.terms().len(), 2);
        assert_eq!(g.eval_t1(), 4);
        assert_eq!(g.class_counts().len(), 1);

        // zero net coefficients drop
        let g = GroupRingElement::from_terms(ring, vec![(1, e1.clone()), (-1, e1)]);
        assert!(g.terms().is_empty());
    }

    #[test]
    fn display_format() {
        let q = f4();
        let f = named_cocycle("example111", &q).unwrap();
        let g = state_sum_2(&BraidWord::torus(3), &f, &q, &ColoringPolicy::SumAll).unwrap();
        assert_eq!(g.to_string(), "4 + 12*t^(w)");
        let zero = GroupRingElement::zero(q.ring().clone());
        assert_eq!(zero.to_string(), "0");
    }
}
