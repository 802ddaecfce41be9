//! Braid words and the planar link diagrams of their closures.
//!
//! A braid word on `n` strands closes to a link diagram in an annulus.
//! Segments live at levels `(r, j)` for rows `r in 0..=L` and lanes
//! `j in 0..n`; arcs are unions of segments not separated by an under-pass;
//! regions are the cells the strands cut out of the `n + 1` annular columns.

use std::fmt;

use thiserror::Error;

/// Errors from braid parsing and diagram construction.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DiagramError {
    #[error("bad braid token `{0}`")]
    BadToken(String),
    #[error("letter index {index} out of range 1..={max} for {strands} strands")]
    IndexOutOfRange {
        index: usize,
        max: usize,
        strands: usize,
    },
    #[error("a braid needs at least 2 strands, got {0}")]
    TooFewStrands(usize),
    #[error("the word contains singular letters; resolve them first")]
    SingularPresent,
}

/// One letter of a braid word; the index `i` ranges over `1..=n-1` and acts
/// on strands `i, i+1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BraidLetter {
    /// `sigma_i`: the strand entering from the upper left passes under.
    Positive(usize),
    /// `sigma_i^{-1}`.
    Negative(usize),
    /// A double point, to be resolved as positive minus negative.
    Singular(usize),
}

impl BraidLetter {
    pub fn index(&self) -> usize {
        match *self {
            BraidLetter::Positive(i) | BraidLetter::Negative(i) | BraidLetter::Singular(i) => i,
        }
    }

    pub fn is_singular(&self) -> bool {
        matches!(self, BraidLetter::Singular(_))
    }
}

impl fmt::Display for BraidLetter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            BraidLetter::Positive(i) => write!(f, "{i}"),
            BraidLetter::Negative(i) => write!(f, "-{i}"),
            BraidLetter::Singular(i) => write!(f, "s{i}"),
        }
    }
}

/// A braid word: strand count plus a sequence of letters.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BraidWord {
    strands: usize,
    letters: Vec<BraidLetter>,
}

impl BraidWord {
    pub fn new(strands: usize, letters: Vec<BraidLetter>) -> Result<BraidWord, DiagramError> {
        if strands < 2 {
            return Err(DiagramError::TooFewStrands(strands));
        }
        for letter in &letters {
            let i = letter.index();
            if i < 1 || i > strands - 1 {
                return Err(DiagramError::IndexOutOfRange {
                    index: i,
                    max: strands - 1,
                    strands,
                });
            }
        }
        Ok(BraidWord { strands, letters })
    }

    /// Parses `"<n> ; <tok> <tok> ..."` with tokens `k`, `-k`, `sk`.
    pub fn parse(text: &str) -> Result<BraidWord, DiagramError> {
        let (head, rest) = match text.split_once(';') {
            Some((h, r)) => (h, r),
            None => (text, ""),
        };
        let head = head.trim();
        let strands: usize = head
            .parse()
            .map_err(|_| DiagramError::BadToken(head.to_string()))?;
        let mut letters = Vec::new();
        for tok in rest.split_whitespace() {
            let letter = if let Some(num) = tok.strip_prefix('s') {
                let i: usize = num
                    .parse()
                    .map_err(|_| DiagramError::BadToken(tok.to_string()))?;
                BraidLetter::Singular(i)
            } else {
                let k: i64 = tok
                    .parse()
                    .map_err(|_| DiagramError::BadToken(tok.to_string()))?;
                if k > 0 {
                    BraidLetter::Positive(k as usize)
                } else {
                    BraidLetter::Negative(k.unsigned_abs() as usize)
                }
            };
            letters.push(letter);
        }
        BraidWord::new(strands, letters)
    }

    /// `sigma_1^n` on two strands, whose closure is the `(2, n)` torus link.
    pub fn torus(n: usize) -> BraidWord {
        BraidWord {
            strands: 2,
            letters: vec![BraidLetter::Positive(1); n],
        }
    }

    pub fn strands(&self) -> usize {
        self.strands
    }

    pub fn letters(&self) -> &[BraidLetter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn has_singular(&self) -> bool {
        self.letters.iter().any(|l| l.is_singular())
    }
}

impl fmt::Display for BraidWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ;", self.strands)?;
        for letter in &self.letters {
            write!(f, " {letter}")?;
        }
        Ok(())
    }
}

/// Expands every singular letter into positive minus negative: `k` singular
/// letters give `2^k` signed words, the sign being the product of the
/// per-letter choices (`-1` for each negative resolution).
pub fn resolve_singulars(word: &BraidWord) -> Vec<(i64, BraidWord)> {
    let mut out: Vec<(i64, Vec<BraidLetter>)> = vec![(1, Vec::new())];
    for letter in &word.letters {
        if let BraidLetter::Singular(i) = *letter {
            let mut next = Vec::with_capacity(out.len() * 2);
            for (s, w) in &out {
                let mut pos = w.clone();
                pos.push(BraidLetter::Positive(i));
                next.push((*s, pos));
            }
            for (s, w) in &out {
                let mut neg = w.clone();
                neg.push(BraidLetter::Negative(i));
                next.push((-s, neg));
            }
            out = next;
        } else {
            for (_, w) in &mut out {
                w.push(*letter);
            }
        }
    }
    out.into_iter()
        .map(|(s, letters)| {
            (
                s,
                BraidWord {
                    strands: word.strands,
                    letters,
                },
            )
        })
        .collect()
}

/// One crossing of the closed diagram, with arc ids and the region ids at
/// its four corners.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Crossing {
    /// `+1` for a positive letter, `-1` for a negative one.
    pub sign: i8,
    /// Arc passing over.
    pub over: usize,
    /// Under-arc entering from above.
    pub under_in: usize,
    /// Under-arc leaving below.
    pub under_out: usize,
    /// Row `r` of the letter that made this crossing.
    pub row: usize,
    /// Left lane `l = i - 1` of the two strands crossed.
    pub lane: usize,
    /// Region ids west, north, east, south of the crossing.
    pub corners: [usize; 4],
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn new(n: usize) -> UnionFind {
        UnionFind((0..n).collect())
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.0[x] != x {
            self.0[x] = self.0[self.0[x]];
            x = self.0[x];
        }
        x
    }

    fn union(&mut self, x: usize, y: usize) {
        let rx = self.find(x);
        let ry = self.find(y);
        self.0[rx] = ry;
    }
}

/// The closure of a braid word as a planar diagram: arcs, signed crossings,
/// and regions. Regions are the cells of the `n + 1` annular columns between
/// strands, cut at crossing heights; column 0's single outermost cell is the
/// unbounded region.
#[derive(Debug, Clone)]
pub struct LinkDiagram {
    word: BraidWord,
    num_arcs: usize,
    /// Arc id of segment `(r, j)`, flattened as `r * n + j`.
    arc: Vec<usize>,
    crossings: Vec<Crossing>,
    /// Per column `c in 0..=n`: sorted quadrupled cut heights `4(r+1)`.
    cuts: Vec<Vec<usize>>,
    /// Region id of the first cell of each column.
    cell_offset: Vec<usize>,
    num_regions: usize,
    components: usize,
}

impl LinkDiagram {
    pub fn new(word: &BraidWord) -> Result<LinkDiagram, DiagramError> {
        if word.has_singular() {
            return Err(DiagramError::SingularPresent);
        }
        let n = word.strands;
        let rows = word.letters.len();
        let node = |r: usize, j: usize| r * n + j;

        // arcs: segments merged unless separated by an under-pass
        let mut uf = UnionFind::new((rows + 1) * n);
        for (r, letter) in word.letters.iter().enumerate() {
            let l = letter.index() - 1;
            for j in 0..n {
                if j != l && j != l + 1 {
                    uf.union(node(r, j), node(r + 1, j));
                }
            }
            match letter {
                // the over strand continues through the crossing
                BraidLetter::Positive(_) => uf.union(node(r, l + 1), node(r + 1, l)),
                BraidLetter::Negative(_) => uf.union(node(r, l), node(r + 1, l + 1)),
                BraidLetter::Singular(_) => unreachable!(),
            }
        }
        for j in 0..n {
            uf.union(node(rows, j), node(0, j));
        }
        let mut id_of_root = vec![usize::MAX; (rows + 1) * n];
        let mut num_arcs = 0;
        let mut arc = vec![0usize; (rows + 1) * n];
        for r in 0..=rows {
            for j in 0..n {
                let root = uf.find(node(r, j));
                if id_of_root[root] == usize::MAX {
                    id_of_root[root] = num_arcs;
                    num_arcs += 1;
                }
                arc[node(r, j)] = id_of_root[root];
            }
        }

        // regions: column c is cut at height r+1 by each letter of index c
        let mut cuts: Vec<Vec<usize>> = vec![Vec::new(); n + 1];
        for (r, letter) in word.letters.iter().enumerate() {
            cuts[letter.index()].push(4 * (r + 1));
        }
        let mut cell_offset = Vec::with_capacity(n + 1);
        let mut num_regions = 0;
        for col in &cuts {
            cell_offset.push(num_regions);
            num_regions += col.len().max(1);
        }

        // link components: cycles of the strand permutation
        let mut perm: Vec<usize> = (0..n).collect();
        for letter in &word.letters {
            let l = letter.index() - 1;
            perm.swap(l, l + 1);
        }
        let mut seen = vec![false; n];
        let mut components = 0;
        for start in 0..n {
            if !seen[start] {
                components += 1;
                let mut j = start;
                while !seen[j] {
                    seen[j] = true;
                    j = perm[j];
                }
            }
        }

        // Euler check: regions = crossings + 1 + connected groups of strands
        let mut guf = UnionFind::new(n);
        for letter in &word.letters {
            let l = letter.index() - 1;
            guf.union(l, l + 1);
        }
        let mut roots: Vec<usize> = (0..n).map(|j| guf.find(j)).collect();
        roots.sort_unstable();
        roots.dedup();
        assert_eq!(
            num_regions,
            rows + 1 + roots.len(),
            "region cells violate the Euler count"
        );

        let mut diagram = LinkDiagram {
            word: word.clone(),
            num_arcs,
            arc,
            crossings: Vec::with_capacity(rows),
            cuts,
            cell_offset,
            num_regions,
            components,
        };
        for (r, letter) in word.letters.iter().enumerate() {
            let l = letter.index() - 1;
            let (sign, over, under_in, under_out) = match letter {
                BraidLetter::Positive(_) => (
                    1i8,
                    diagram.arc_at(r, l + 1),
                    diagram.arc_at(r, l),
                    diagram.arc_at(r + 1, l + 1),
                ),
                BraidLetter::Negative(_) => (
                    -1i8,
                    diagram.arc_at(r, l),
                    diagram.arc_at(r, l + 1),
                    diagram.arc_at(r + 1, l),
                ),
                BraidLetter::Singular(_) => unreachable!(),
            };
            // corner heights: just past the crossing for west/east, the
            // adjacent segment heights for north/south
            let corners = [
                diagram.cell_at(l, 4 * (r + 1) + 1),
                diagram.cell_at(l + 1, 4 * r + 2),
                diagram.cell_at(l + 2, 4 * (r + 1) + 1),
                diagram.cell_at(l + 1, 4 * r + 6),
            ];
            diagram.crossings.push(Crossing {
                sign,
                over,
                under_in,
                under_out,
                row: r,
                lane: l,
                corners,
            });
        }
        Ok(diagram)
    }

    pub fn word(&self) -> &BraidWord {
        &self.word
    }

    pub fn strands(&self) -> usize {
        self.word.strands
    }

    /// Number of letter rows.
    pub fn rows(&self) -> usize {
        self.word.letters.len()
    }

    pub fn num_arcs(&self) -> usize {
        self.num_arcs
    }

    /// Arc id of the segment at row `r in 0..=rows`, lane `j`.
    pub fn arc_at(&self, r: usize, j: usize) -> usize {
        self.arc[r * self.word.strands + j]
    }

    pub fn crossings(&self) -> &[Crossing] {
        &self.crossings
    }

    pub fn num_regions(&self) -> usize {
        self.num_regions
    }

    /// The outermost cell of column 0.
    pub fn unbounded_region(&self) -> usize {
        self.cell_offset[0]
    }

    pub fn components(&self) -> usize {
        self.components
    }

    /// Region containing quadrupled cyclic height `h4` in column `c`. Cells
    /// are the cyclic intervals between this column's cut heights.
    fn cell_at(&self, c: usize, h4: usize) -> usize {
        let cuts = &self.cuts[c];
        if cuts.is_empty() {
            return self.cell_offset[c];
        }
        let mut lo = if h4 < cuts[0] { cuts.len() - 1 } else { 0 };
        for (i, &cut) in cuts.iter().enumerate() {
            if cut <= h4 {
                lo = i;
            }
        }
        self.cell_offset[c] + lo
    }

    /// Regions west and east of the segment `(r, j)`.
    pub fn seg_regions(&self, r: usize, j: usize) -> (usize, usize) {
        (self.cell_at(j, 4 * r + 2), self.cell_at(j + 1, 4 * r + 2))
    }
}
