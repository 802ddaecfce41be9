//! Shared fixtures for the integration suites: the brute-force cohomology
//! complex, ground-ring constructors, and the published torus-family
//! elements with their integer lifts.
#![allow(dead_code)]

use std::collections::BTreeMap;

use qv_core::arith::{ElementTable, GroundRing, IntLaurent, RingElement};
use qv_core::expansion::SubstitutionParams;
use qv_core::invariant::GroupRingElement;
use qv_core::quandle::AlexanderQuandle;

pub fn quandle(p: u64, h: &[i64]) -> AlexanderQuandle {
    let ring = GroundRing::new(p, h).unwrap();
    let omega = ring.omega();
    AlexanderQuandle::new(ring, omega).unwrap()
}

/// Class counts rendered as strings, in the ring's element order.
pub fn counts(g: &GroupRingElement) -> Vec<(String, i64)> {
    g.class_counts()
        .iter()
        .map(|(cls, c)| (g.ring().element_string(cls), *c))
        .collect()
}

pub fn lau(pairs: &[(i64, i64)]) -> IntLaurent {
    IntLaurent::from_terms(pairs)
}

pub fn f4_ring() -> GroundRing {
    GroundRing::new(2, &[1, 1, 1]).unwrap()
}

pub fn s_prime_ring() -> GroundRing {
    GroundRing::new(3, &[1, 2, 1]).unwrap()
}

pub fn params111() -> SubstitutionParams {
    SubstitutionParams::new(3, 2, 2, &[1, 1, 1])
}

pub fn params110() -> SubstitutionParams {
    SubstitutionParams::new(2, 1, 3, &[1, -1, 1])
}

/// The published torus value over `F_4` at `n = 3k`, from its integer
/// lifts: the three nonzero exponents scale linearly with `k`.
pub fn paper_element_111(n: usize) -> GroupRingElement {
    let k = (n / 3) as i64;
    let g1 = lau(&[(2, 1), (0, -1)]).scale(k);
    let g2 = lau(&[(2, 1), (1, 1), (0, -2)]).scale(k);
    let g3 = lau(&[(1, 1), (0, -1)]).scale(k);
    GroupRingElement::from_terms(
        f4_ring(),
        vec![(4, IntLaurent::zero()), (10, g1), (1, g2), (1, g3)],
    )
}

/// The lifts of the published shadow value over `F_3[w]/(w^2+2w+1)` at
/// `n = 3k`, paired with their display coefficients (3, 2, 1, 2, 1).
pub fn paper_terms_110(n: usize) -> Vec<(i64, IntLaurent)> {
    let k = (n / 3) as i64;
    vec![
        (3, IntLaurent::zero()),
        (2, lau(&[(-2, 1), (-1, -1)]).scale(k)),
        (1, lau(&[(0, -2), (-1, 1), (1, 1)]).scale(k)),
        (2, lau(&[(0, 2), (-1, -1), (1, -2), (2, 2), (3, -1)]).scale(k)),
        (1, lau(&[(0, -2), (-2, -2), (1, 1), (2, 2), (3, 1)]).scale(k)),
    ]
}

pub fn paper_element_110(n: usize) -> GroupRingElement {
    GroupRingElement::from_terms(s_prime_ring(), paper_terms_110(n))
}

/// Tuples over `0..q` of length `n` with no two consecutive entries equal,
/// in lexicographic order, plus the index map back from tuple to position.
pub fn nondegenerate_tuples(
    q: usize,
    n: usize,
) -> (Vec<Vec<u16>>, BTreeMap<Vec<u16>, usize>) {
    let mut tuples = Vec::new();
    let mut cur = vec![0u16; n];
    loop {
        if (1..n).all(|i| cur[i] != cur[i - 1]) {
            tuples.push(cur.clone());
        }
        let mut i = n;
        loop {
            if i == 0 {
                let index: BTreeMap<Vec<u16>, usize> = tuples
                    .iter()
                    .enumerate()
                    .map(|(k, t)| (t.clone(), k))
                    .collect();
                return (tuples, index);
            }
            i -= 1;
            cur[i] += 1;
            if (cur[i] as usize) < q {
                break;
            }
            cur[i] = 0;
        }
    }
}

/// The quandle cochain complex over a finite ground ring, with the
/// coboundary rebuilt from scratch in arc coordinates: `(delta f)(x_1..
/// x_{n+1}) = sum_{j=2}^{n+1} (-1)^j [f(x_1*x_j, .., x_{j-1}*x_j, x_{j+1},
/// ..) - f(x_1, .., x_{j-1}, x_{j+1}, ..)]` on functions vanishing whenever
/// two consecutive arguments agree.
pub struct Complex {
    pub quandle: AlexanderQuandle,
    pub table: ElementTable,
    pub star: Vec<Vec<u16>>,
}

impl Complex {
    pub fn new(quandle: AlexanderQuandle) -> Complex {
        let table = ElementTable::new(quandle.ring());
        let q = table.q();
        let star = (0..q)
            .map(|i| {
                (0..q)
                    .map(|j| {
                        table.index_of(&quandle.op(table.elem(i as u16), table.elem(j as u16)))
                    })
                    .collect()
            })
            .collect();
        Complex { quandle, table, star }
    }

    pub fn q(&self) -> usize {
        self.table.q()
    }

    /// The coboundary of the point function at `src` (an `n`-tuple),
    /// accumulated as signed integer entries over nondegenerate
    /// `(n+1)`-tuples.
    pub fn delta_of_point(&self, src: &[u16], rows: &[Vec<u16>], entries: &mut [i64]) {
        let n = src.len();
        for (r, row) in rows.iter().enumerate() {
            let mut acc = 0i64;
            for j in 1..=n {
                let sign = if j % 2 == 1 { 1 } else { -1 };
                // row with entry j (0-based) dropped and the prefix acted on
                let hit_acted = (0..n).all(|k| {
                    let want = if k < j {
                        self.star[row[k] as usize][row[j] as usize]
                    } else {
                        row[k + 1]
                    };
                    want == src[k]
                });
                let hit_plain = (0..n).all(|k| {
                    let want = if k < j { row[k] } else { row[k + 1] };
                    want == src[k]
                });
                if hit_acted {
                    acc += sign;
                }
                if hit_plain {
                    acc -= sign;
                }
            }
            entries[r] = acc;
        }
    }

    /// Rank over `F_p` of the coboundary matrix from `n`-cochains to
    /// `(n+1)`-cochains. The matrix has prime-field entries, so this is
    /// also its rank as a map of free `S`-modules.
    pub fn delta_rank(&self, n: usize) -> usize {
        let q = self.q();
        let p = self.quandle.ring().p();
        let (cols, _) = nondegenerate_tuples(q, n);
        let (rows, _) = nondegenerate_tuples(q, n + 1);
        let mut echelon: Vec<(usize, Vec<u64>)> = Vec::new();
        let mut entries = vec![0i64; rows.len()];
        for src in &cols {
            self.delta_of_point(src, &rows, &mut entries);
            let mut vector: Vec<u64> = entries
                .iter()
                .map(|&e| e.rem_euclid(p as i64) as u64)
                .collect();
            for (lead, row) in &echelon {
                let factor = vector[*lead];
                if factor == 0 {
                    continue;
                }
                for (slot, &c) in vector.iter_mut().zip(row.iter()) {
                    *slot = (*slot + (p - factor) * c) % p;
                }
            }
            if let Some(lead) = vector.iter().position(|&c| c != 0) {
                let inv = scalar_inverse(vector[lead], p);
                for c in vector.iter_mut() {
                    *c = *c * inv % p;
                }
                echelon.push((lead, vector));
                echelon.sort_by_key(|(l, _)| *l);
            }
        }
        echelon.len()
    }
}

pub fn scalar_inverse(a: u64, p: u64) -> u64 {
    (1..p).find(|&x| a * x % p == 1).expect("not invertible")
}

/// Row echelon basis over the ground ring `S` (a field wherever this is
/// used), for membership tests with `S`-valued vectors.
pub struct SEchelon<'a> {
    ring: &'a GroundRing,
    rows: Vec<(usize, Vec<RingElement>)>,
}

impl<'a> SEchelon<'a> {
    pub fn new(ring: &'a GroundRing) -> SEchelon<'a> {
        SEchelon { ring, rows: Vec::new() }
    }

    pub fn reduce(&self, v: &mut [RingElement]) {
        for (lead, row) in &self.rows {
            let factor = v[*lead].clone();
            if factor.is_zero() {
                continue;
            }
            for (slot, c) in v.iter_mut().zip(row.iter()) {
                *slot = self.ring.sub(slot, &self.ring.mul(&factor, c));
            }
        }
    }

    /// Reduces and inserts; returns whether the vector added a new pivot.
    pub fn insert(&mut self, mut v: Vec<RingElement>) -> bool {
        self.reduce(&mut v);
        let Some(lead) = v.iter().position(|c| !c.is_zero()) else {
            return false;
        };
        let inv = self.ring.invert(&v[lead]).expect("pivot not invertible");
        for c in v.iter_mut() {
            *c = self.ring.mul(c, &inv);
        }
        self.rows.push((lead, v));
        self.rows.sort_by_key(|(lead, _)| *lead);
        true
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }
}

/// Brute-force `H^2` and `H^3` dimensions, as `S`-module ranks.
pub fn cohomology_dims(cx: &Complex) -> (usize, usize) {
    let q = cx.q();
    let c2 = q * (q - 1);
    let c3 = q * (q - 1) * (q - 1);
    let d1 = cx.delta_rank(1);
    let d2 = cx.delta_rank(2);
    let d3 = cx.delta_rank(3);
    (c2 - d2 - d1, c3 - d3 - d2)
}

/// Feeds the coboundary columns of degree `n - 1` into an `S`-echelon and
/// then requires every enumerated degree-`n` basis element to stay
/// independent, i.e. to lie in the kernel but not in the coboundary span.
pub fn check_basis_independent_mod_coboundaries(
    cx: &Complex,
    basis: &[(String, qv_core::cochain::CochainPoly)],
    n: usize,
) {
    let ring = cx.quandle.ring();
    let q = cx.q();
    let (cols, _) = nondegenerate_tuples(q, n - 1);
    let (rows, _) = nondegenerate_tuples(q, n);
    let mut echelon = SEchelon::new(ring);
    let mut entries = vec![0i64; rows.len()];
    for src in &cols {
        cx.delta_of_point(src, &rows, &mut entries);
        let v: Vec<RingElement> = entries
            .iter()
            .map(|&e| {
                let c = e.rem_euclid(ring.p() as i64) as u64;
                ring.scale(c, &ring.one())
            })
            .collect();
        echelon.insert(v);
    }
    let coboundary_rank = echelon.rank();

    for (name, poly) in basis {
        assert!(
            poly.is_cocycle(&cx.quandle),
            "basis element {name} fails the cocycle check"
        );
        let v: Vec<RingElement> = rows
            .iter()
            .map(|tuple| {
                let args: Vec<RingElement> =
                    tuple.iter().map(|&i| cx.table.elem(i).clone()).collect();
                poly.evaluate(ring, &args).unwrap()
            })
            .collect();
        assert!(
            echelon.insert(v),
            "basis element {name} is a coboundary combination"
        );
    }
    assert_eq!(
        echelon.rank(),
        coboundary_rank + basis.len(),
        "basis elements are not jointly independent mod coboundaries"
    );
}
