//! Quandle colorings of braid-closure diagrams and their shadow extensions
//! to region colorings.
//!
//! Colorings are enumerated by seeding the top strand colors and propagating
//! through each letter; a seed survives when the closure identifies top and
//! bottom. Every color carries a parallel symbolic record: the canonical
//! lifts of the seeds propagated through the same operations in `F_p[w^{±1}]`
//! without `h`-reduction.

use thiserror::Error;

use crate::arith::{LaurentPoly, RingElement};
use crate::diagram::{BraidWord, DiagramError, LinkDiagram};
use crate::quandle::AlexanderQuandle;

/// Errors from coloring enumeration and shadow extension.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ColoringError {
    #[error(transparent)]
    Diagram(#[from] DiagramError),
    #[error("invalid coloring policy: {0}")]
    PolicyInvalid(String),
    #[error("shadow propagation disagreed around a face; the arc coloring is invalid")]
    InconsistentColoring,
}

/// How colorings are counted in a state sum.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ColoringPolicy {
    /// Every coloring (and every base region color, for shadow sums).
    SumAll,
    /// Only colorings assigning `color` to arc `arc`.
    FixArc { arc: usize, color: RingElement },
    /// Additionally fix the unbounded region's color for shadow sums.
    FixArcAndRegion {
        arc: usize,
        color: RingElement,
        region: RingElement,
    },
}

impl ColoringPolicy {
    /// The arc constraint, if any.
    pub fn fixed_arc(&self) -> Option<(usize, &RingElement)> {
        match self {
            ColoringPolicy::SumAll => None,
            ColoringPolicy::FixArc { arc, color }
            | ColoringPolicy::FixArcAndRegion { arc, color, .. } => Some((*arc, color)),
        }
    }

    /// The unbounded-region constraint, if any.
    pub fn fixed_region(&self) -> Option<&RingElement> {
        match self {
            ColoringPolicy::FixArcAndRegion { region, .. } => Some(region),
            _ => None,
        }
    }

    pub fn validate(&self, diagram: &LinkDiagram) -> Result<(), ColoringError> {
        if let Some((arc, _)) = self.fixed_arc() {
            if arc >= diagram.num_arcs() {
                return Err(ColoringError::PolicyInvalid(format!(
                    "arc {arc} does not exist; the diagram has {} arcs",
                    diagram.num_arcs()
                )));
            }
        }
        Ok(())
    }
}

/// An arc coloring: one color per arc id, with its symbolic record.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ArcColoring {
    colors: Vec<RingElement>,
    symbolic: Vec<LaurentPoly>,
}

impl ArcColoring {
    pub fn color(&self, arc: usize) -> &RingElement {
        &self.colors[arc]
    }

    pub fn symbolic(&self, arc: usize) -> &LaurentPoly {
        &self.symbolic[arc]
    }

    pub fn len(&self) -> usize {
        self.colors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.colors.is_empty()
    }

    pub fn colors(&self) -> &[RingElement] {
        &self.colors
    }
}

/// An arc coloring extended to the diagram's regions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ShadowColoring {
    arcs: ArcColoring,
    regions: Vec<RingElement>,
    regions_symbolic: Vec<LaurentPoly>,
}

impl ShadowColoring {
    pub fn arcs(&self) -> &ArcColoring {
        &self.arcs
    }

    pub fn region(&self, id: usize) -> &RingElement {
        &self.regions[id]
    }

    pub fn region_symbolic(&self, id: usize) -> &LaurentPoly {
        &self.regions_symbolic[id]
    }

    pub fn regions(&self) -> &[RingElement] {
        &self.regions
    }
}

/// Enumerates the colorings of a prebuilt diagram, in lexicographic seed
/// order. The policy's arc constraint filters the output.
pub fn enumerate_colorings_on(
    diagram: &LinkDiagram,
    quandle: &AlexanderQuandle,
    policy: &ColoringPolicy,
) -> Result<Vec<ArcColoring>, ColoringError> {
    policy.validate(diagram)?;
    let ring = quandle.ring();
    let n = diagram.strands();
    let elems = ring.elements();
    let lifts: Vec<LaurentPoly> = elems
        .iter()
        .map(|e| ring.canonical_lift(e).reduce_mod(ring.p()))
        .collect();
    let q = elems.len();
    let mut out = Vec::new();

    let mut seed_idx = vec![0usize; n];
    loop {
        let seed: Vec<RingElement> = seed_idx.iter().map(|&i| elems[i].clone()).collect();
        // propagate to check the closure condition
        let mut row = seed.clone();
        for letter in diagram.word().letters() {
            let l = letter.index() - 1;
            step(quandle, &mut row, l, letter_sign(letter));
        }
        if row == seed {
            let mut colors = vec![ring.zero(); diagram.num_arcs()];
            let mut symbolic = vec![LaurentPoly::zero(); diagram.num_arcs()];
            let mut row = seed.clone();
            let mut sym_row: Vec<LaurentPoly> =
                seed_idx.iter().map(|&i| lifts[i].clone()).collect();
            for j in 0..n {
                colors[diagram.arc_at(0, j)] = row[j].clone();
                symbolic[diagram.arc_at(0, j)] = sym_row[j].clone();
            }
            for (r, letter) in diagram.word().letters().iter().enumerate() {
                let l = letter.index() - 1;
                let sign = letter_sign(letter);
                step(quandle, &mut row, l, sign);
                step_sym(quandle, &mut sym_row, l, sign);
                colors[diagram.arc_at(r + 1, l)] = row[l].clone();
                colors[diagram.arc_at(r + 1, l + 1)] = row[l + 1].clone();
                symbolic[diagram.arc_at(r + 1, l)] = sym_row[l].clone();
                symbolic[diagram.arc_at(r + 1, l + 1)] = sym_row[l + 1].clone();
            }
            // the crossing equation holds by construction; re-verify
            for c in diagram.crossings() {
                let (uin, uout) = (&colors[c.under_in], &colors[c.under_out]);
                let over = &colors[c.over];
                let ok = if c.sign > 0 {
                    quandle.op(uin, over) == *uout
                } else {
                    quandle.op(uout, over) == *uin
                };
                assert!(ok, "propagated coloring violates a crossing equation");
            }
            let keep = match policy.fixed_arc() {
                Some((arc, color)) => colors[arc] == *color,
                None => true,
            };
            if keep {
                out.push(ArcColoring { colors, symbolic });
            }
        }
        // next seed, last coordinate fastest
        let mut i = n;
        loop {
            if i == 0 {
                return Ok(out);
            }
            i -= 1;
            seed_idx[i] += 1;
            if seed_idx[i] < q {
                break;
            }
            seed_idx[i] = 0;
        }
    }
}

/// Builds the closure diagram and enumerates its colorings.
pub fn enumerate_colorings(
    word: &BraidWord,
    quandle: &AlexanderQuandle,
    policy: &ColoringPolicy,
) -> Result<(LinkDiagram, Vec<ArcColoring>), ColoringError> {
    let diagram = LinkDiagram::new(word)?;
    let colorings = enumerate_colorings_on(&diagram, quandle, policy)?;
    Ok((diagram, colorings))
}

fn letter_sign(letter: &crate::diagram::BraidLetter) -> i8 {
    match letter {
        crate::diagram::BraidLetter::Positive(_) => 1,
        crate::diagram::BraidLetter::Negative(_) => -1,
        crate::diagram::BraidLetter::Singular(_) => {
            unreachable!("diagram construction rejects singular letters")
        }
    }
}

/// One letter's action on the strand colors at lanes `l, l+1`:
/// positive `(a, b) -> (b, a * b)`, negative `(a, b) -> (unop(b, a), a)`.
fn step(quandle: &AlexanderQuandle, row: &mut [RingElement], l: usize, sign: i8) {
    let a = row[l].clone();
    let b = row[l + 1].clone();
    if sign > 0 {
        row[l] = b.clone();
        row[l + 1] = quandle.op(&a, &b);
    } else {
        row[l] = quandle.unop(&b, &a);
        row[l + 1] = a;
    }
}

fn step_sym(quandle: &AlexanderQuandle, row: &mut [LaurentPoly], l: usize, sign: i8) {
    let a = row[l].clone();
    let b = row[l + 1].clone();
    if sign > 0 {
        row[l] = b.clone();
        row[l + 1] = quandle.op_sym(&a, &b);
    } else {
        row[l] = quandle.unop_sym(&b, &a);
        row[l + 1] = a;
    }
}

/// Extends an arc coloring to the regions, with `base` on the unbounded
/// region. Crossing a strand of color `x` eastward sends the region color
/// `z` to `z * x`. The extension is verified on every segment.
pub fn shadow_extend(
    diagram: &LinkDiagram,
    quandle: &AlexanderQuandle,
    coloring: &ArcColoring,
    base: &RingElement,
) -> Result<ShadowColoring, ColoringError> {
    let ring = quandle.ring();
    let n = diagram.strands();
    let rows = diagram.rows();
    let mut z: Vec<Option<RingElement>> = vec![None; diagram.num_regions()];
    let mut z_sym: Vec<Option<LaurentPoly>> = vec![None; diagram.num_regions()];
    z[diagram.unbounded_region()] = Some(base.clone());
    z_sym[diagram.unbounded_region()] = Some(ring.canonical_lift(base).reduce_mod(ring.p()));

    let mut changed = true;
    while changed {
        changed = false;
        for r in 0..=rows {
            for j in 0..n {
                let (w, e) = diagram.seg_regions(r, j);
                let x = coloring.color(diagram.arc_at(r, j));
                let xs = coloring.symbolic(diagram.arc_at(r, j));
                match (z[w].is_some(), z[e].is_some()) {
                    (true, false) => {
                        z[e] = Some(quandle.op(z[w].as_ref().unwrap(), x));
                        z_sym[e] = Some(quandle.op_sym(z_sym[w].as_ref().unwrap(), xs));
                        changed = true;
                    }
                    (false, true) => {
                        z[w] = Some(quandle.unop(z[e].as_ref().unwrap(), x));
                        z_sym[w] = Some(quandle.unop_sym(z_sym[e].as_ref().unwrap(), xs));
                        changed = true;
                    }
                    _ => {}
                }
            }
        }
    }
    if z.iter().any(|c| c.is_none()) {
        return Err(ColoringError::InconsistentColoring);
    }
    // full verification: every segment's east region is west * x
    for r in 0..=rows {
        for j in 0..n {
            let (w, e) = diagram.seg_regions(r, j);
            let x = coloring.color(diagram.arc_at(r, j));
            if quandle.op(z[w].as_ref().unwrap(), x) != *z[e].as_ref().unwrap() {
                return Err(ColoringError::InconsistentColoring);
            }
        }
    }
    Ok(ShadowColoring {
        arcs: coloring.clone(),
        regions: z.into_iter().map(Option::unwrap).collect(),
        regions_symbolic: z_sym.into_iter().map(Option::unwrap).collect(),
    })
}
