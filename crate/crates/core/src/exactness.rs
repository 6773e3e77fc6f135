//! Finite-window checks of the exact sequence `0 → 𝕁 → 𝕏 → 𝕐 → 0`.
//!
//! Each graded piece `𝕏^n_{k,l}` is identified with a model space spanned by
//! symbols `E_i` (two copies when `k < l`). The model space has an explicit
//! ordered basis `D` whose image is the set `B^n_{k,l}` of tangency values.
//! Taking the first `N` elements in these orderings gives a triangular
//! system, so every check below is an exact statement about a finite
//! subspace.

use std::collections::HashMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{combine, rank, transpose, Echelon, SparseRow};
use crate::symbols::{
    is_odd, predicted_delta, project, rat, DoubleIndex, JKind, JSymbol, Rational, XSymbol, XVector,
};

/// Position of `E_i` in the order `E_0, E_1, E_{-1}, E_2, E_{-2}, …`.
pub fn model_position(i: i64) -> usize {
    if i >= 1 {
        (2 * i - 1) as usize
    } else {
        (-2 * i) as usize
    }
}

/// Inverse of [`model_position`].
pub fn model_index(pos: usize) -> i64 {
    let p = pos as i64;
    if p % 2 == 1 {
        (p + 1) / 2
    } else {
        -p / 2
    }
}

/// The `j`-th element of `D` as `(lower, upper)` with value `E_lower + E_upper`.
/// Even `j = 2i` gives `E_{-i} + E_i`, odd `j = 2i + 1` gives `E_{-i} + E_{1+i}`.
pub fn generator_pair(j: usize) -> (i64, i64) {
    let i = (j / 2) as i64;
    if j.is_multiple_of(2) {
        (-i, i)
    } else {
        (-i, 1 + i)
    }
}

fn generator_row(j: usize) -> SparseRow {
    let (lo, hi) = generator_pair(j);
    let mut row = SparseRow::new();
    for e in [lo, hi] {
        *row.entry(model_position(e)).or_insert_with(|| rat(0)) += rat(1);
    }
    row
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RankCertificate {
    pub rows: usize,
    pub cols: usize,
    pub rank: usize,
    /// Rank recomputed from the transposed matrix.
    pub transpose_rank: usize,
    pub pivots: Vec<usize>,
    pub claimed_rank: usize,
    pub claimed_codimension: usize,
    pub codimension: usize,
    pub pass: bool,
}

/// Checks that for every `m ≤ N` the first `m` elements of `D` span the
/// same space as the first `m` symbols `E_i`.
pub fn model_basis_check(depth: usize) -> RankCertificate {
    let mut e = Echelon::new();
    let mut rows = Vec::with_capacity(depth);
    let mut ok = depth >= 1;
    for m in 1..=depth {
        let row = generator_row(m - 1);
        // Triangular: the m-th element only involves the first m symbols.
        ok &= row.keys().all(|&p| p < m);
        e.insert(row.clone());
        rows.push(row);
        ok &= e.rank() == m;
    }
    let transpose_rank = rank(&transpose(&rows));
    RankCertificate {
        rows: depth,
        cols: depth,
        rank: e.rank(),
        transpose_rank,
        pivots: e.pivots(),
        claimed_rank: depth,
        claimed_codimension: 0,
        codimension: depth - e.rank(),
        pass: ok && transpose_rank == e.rank(),
    }
}

/// A graded piece `𝕏^n_{k,l}` truncated to the first `depth` elements of
/// `B^n_{k,l}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TruncationWindow {
    pub n: i64,
    pub k: i64,
    pub l: i64,
    pub depth: usize,
}

impl TruncationWindow {
    pub fn new(n: i64, k: i64, l: i64, depth: usize) -> Result<Self> {
        let w = TruncationWindow { n, k, l, depth };
        w.validate()?;
        Ok(w)
    }

    pub fn validate(&self) -> Result<()> {
        if !is_odd(self.k) || !is_odd(self.l) || self.k > self.l || self.depth == 0 {
            return Err(Error::WindowMisaligned(format!(
                "need odd k <= l and depth >= 1, got k = {}, l = {}, depth = {}",
                self.k, self.l, self.depth
            )));
        }
        Ok(())
    }

    pub fn is_diagonal(&self) -> bool {
        self.k == self.l
    }

    /// Number of monomials spanned by the first `depth` elements.
    pub fn monomial_count(&self) -> usize {
        if self.is_diagonal() {
            self.depth
        } else {
            self.depth + 1
        }
    }

    fn half(&self) -> (i64, bool) {
        (self.n.div_euclid(2), self.n.rem_euclid(2) == 1)
    }

    /// Image of `E_i` (or `E'_i` when `primed`).
    pub fn symbol_for(&self, i: i64, primed: bool) -> XSymbol {
        let (m, odd) = self.half();
        let (a, b) = if odd {
            (m + i, m + 1 - i)
        } else {
            (m - i, m + i)
        };
        let (k, l) = (self.k, self.l);
        let swap = (i >= 1) != primed;
        if swap {
            XSymbol::new(a, b, l, k)
        } else {
            XSymbol::new(a, b, k, l)
        }
    }

    /// Ordered monomial basis: `φ(E_{e_0}), φ(E'_{e_0}), φ(E_{e_1}), …`,
    /// without the primed copies when `k = l`.
    pub fn monomials(&self, count: usize) -> Vec<XSymbol> {
        (0..count)
            .map(|idx| {
                if self.is_diagonal() {
                    self.symbol_for(model_index(idx), false)
                } else {
                    self.symbol_for(model_index(idx / 2), idx % 2 == 1)
                }
            })
            .collect()
    }

    fn generator_value(&self, j: usize, primed: bool) -> XVector {
        let (lo, hi) = generator_pair(j);
        let mut v = XVector::zero();
        v.add_term(self.symbol_for(lo, primed), rat(1));
        v.add_term(self.symbol_for(hi, primed), rat(1));
        v
    }

    /// The tangency symbol whose value is the `j`-th image of `D` (or `D'`).
    fn generator_symbol(&self, j: usize, primed: bool) -> JSymbol {
        let (m, odd) = self.half();
        let (k, l) = (self.k, self.l);
        let i = (j / 2) as i64;
        let even_j = j.is_multiple_of(2);
        let pair = |a: i64, b: i64| (DoubleIndex::new(a, k), DoubleIndex::new(b, l));
        let (kind, (p, q)) = match (odd, even_j, primed) {
            (false, true, false) => (JKind::Plus, pair(m + i, m - i)),
            (false, true, true) => (JKind::Plus, pair(m - i, m + i)),
            (false, false, false) => (JKind::A, pair(m + i, m - 1 - i)),
            (false, false, true) => (JKind::A, pair(m - 1 - i, m + i)),
            (true, true, false) => (JKind::A, pair(m - i, m + i)),
            (true, true, true) => (JKind::A, pair(m + i, m - i)),
            (true, false, false) => (JKind::Plus, pair(m - i, m + 1 + i)),
            (true, false, true) => (JKind::Plus, pair(m + 1 + i, m - i)),
        };
        JSymbol::new(kind, p, q)
    }
}

/// The first elements of `B^n_{k,l}` with their tangency symbols and the
/// aligned monomial basis.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RelationWindow {
    pub window: TruncationWindow,
    pub elements: Vec<XVector>,
    pub symbols: Vec<JSymbol>,
    pub monomials: Vec<XSymbol>,
}

pub fn build_relations(window: &TruncationWindow) -> Result<RelationWindow> {
    window.validate()?;
    let n = window.depth;
    let mut elements = Vec::with_capacity(n);
    let mut symbols = Vec::with_capacity(n);
    if window.is_diagonal() {
        for j in 0..n {
            elements.push(window.generator_value(j, false));
            symbols.push(window.generator_symbol(j, false));
        }
    } else {
        // 2E_0 and 2E'_0 are replaced by the single element φ(E_0) + φ(E'_0).
        let mut first = XVector::zero();
        first.add_term(window.symbol_for(0, false), rat(1));
        first.add_term(window.symbol_for(0, true), rat(1));
        elements.push(first);
        symbols.push(window.generator_symbol(0, false));
        let mut j = 1;
        while elements.len() < n {
            for primed in [false, true] {
                if elements.len() < n {
                    elements.push(window.generator_value(j, primed));
                    symbols.push(window.generator_symbol(j, primed));
                }
            }
            j += 1;
        }
    }
    Ok(RelationWindow {
        window: *window,
        elements,
        symbols,
        monomials: window.monomials(window.monomial_count()),
    })
}

impl RelationWindow {
    fn index(&self) -> HashMap<XSymbol, usize> {
        self.monomials
            .iter()
            .enumerate()
            .map(|(i, s)| (*s, i))
            .collect()
    }

    /// Coordinates of `v` in the window's monomial basis.
    pub fn to_row(&self, v: &XVector) -> Result<SparseRow> {
        let index = self.index();
        let mut row = SparseRow::new();
        for (s, c) in v.terms() {
            let &i = index.get(s).ok_or_else(|| {
                Error::WindowMisaligned(format!(
                    "{s} lies outside the first {} monomials",
                    self.monomials.len()
                ))
            })?;
            row.insert(i, c.clone());
        }
        Ok(row)
    }

    pub fn rows(&self) -> Result<Vec<SparseRow>> {
        self.elements.iter().map(|v| self.to_row(v)).collect()
    }

    /// Every element lies in `𝕏^n_{k,l}` and equals the tangency value of
    /// its recorded symbol.
    pub fn consistent(&self) -> bool {
        let w = &self.window;
        let in_piece = |s: &XSymbol| {
            s.a + s.b == w.n && ((s.k, s.l) == (w.k, w.l) || (s.k, s.l) == (w.l, w.k))
        };
        self.elements
            .iter()
            .zip(&self.symbols)
            .all(|(v, j)| v.symbols().all(in_piece) && predicted_delta(j) == *v)
    }
}

/// Rank and codimension of the truncated `B^n_{k,l}` in its aligned
/// monomial window: full rank with codimension 0 when `k = l`, codimension 1
/// when `k < l`.
pub fn verify_window_rank(window: &TruncationWindow) -> Result<RankCertificate> {
    let b = build_relations(window)?;
    let rows = b.rows()?;
    let cols = b.monomials.len();
    let mut e = Echelon::new();
    for r in &rows {
        e.insert(r.clone());
    }
    let transpose_rank = rank(&transpose(&rows));
    let claimed_codimension = usize::from(!window.is_diagonal());
    let codimension = cols - e.rank();
    Ok(RankCertificate {
        rows: rows.len(),
        cols,
        rank: e.rank(),
        transpose_rank,
        pivots: e.pivots(),
        claimed_rank: window.depth,
        claimed_codimension,
        codimension,
        pass: b.consistent()
            && e.rank() == window.depth
            && transpose_rank == e.rank()
            && codimension == claimed_codimension,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExactnessReport {
    pub window: TruncationWindow,
    /// Images of the truncated tangency symbols are independent.
    pub injective: bool,
    /// `Ψ` kills every element of `B`.
    pub projection_vanishes: bool,
    pub b_rank: usize,
    pub projection_rank: usize,
    pub kernel_dim: usize,
    /// `dim ker Ψ` in the window equals `rank B`.
    pub kernel_in_span: bool,
    pub samples_solved: usize,
    pub samples: usize,
    pub pass: bool,
}

/// Window-level check of exactness, including random kernel elements
/// written explicitly in terms of `B`.
pub fn verify_exactness(
    window: &TruncationWindow,
    samples: usize,
    seed: u64,
) -> Result<ExactnessReport> {
    let b = build_relations(window)?;
    let rows = b.rows()?;
    let mut e = Echelon::new();
    for r in &rows {
        e.insert(r.clone());
    }
    let b_rank = e.rank();
    let injective = b_rank == rows.len() && b.consistent();
    let projection_vanishes = b.elements.iter().all(|v| project(v).is_zero());

    // Ψ on the window monomials lands in the span of one Y symbol (or zero).
    let projection_rows: Vec<SparseRow> = b
        .monomials
        .iter()
        .map(|s| {
            let y = project(&XVector::single(*s));
            y.terms().map(|(_, c)| (0usize, c.clone())).collect()
        })
        .collect();
    let projection_rank = rank(&projection_rows);
    let kernel_dim = b.monomials.len() - projection_rank;
    let kernel_in_span = kernel_dim == b_rank;

    // Random kernel elements: a random combination, corrected along one
    // monomial with non-zero image.
    let mut rng = ChaCha8Rng::seed_from_u64(
        seed ^ (window.n as u64).wrapping_mul(0x9e37_79b9) ^ window.depth as u64,
    );
    let pivot = projection_rows.iter().position(|r| !r.is_empty());
    let mut solved = 0;
    for _ in 0..samples {
        let mut v = SparseRow::new();
        for i in 0..b.monomials.len() {
            let c: i64 = rng.gen_range(-5..=5);
            if c != 0 {
                v.insert(i, rat(c));
            }
        }
        if let Some(p) = pivot {
            let image: Rational = v
                .iter()
                .filter_map(|(i, c)| projection_rows[*i].get(&0).map(|y| c * y))
                .sum();
            let fix = -(image / &projection_rows[p][&0]);
            let entry = v.entry(p).or_insert_with(|| rat(0));
            *entry += fix;
            if *entry == rat(0) {
                v.remove(&p);
            }
        }
        if let Some(coeffs) = e.solve(&v) {
            if combine(&rows, &coeffs) == v {
                solved += 1;
            }
        }
    }
    let expected_image = usize::from(!window.is_diagonal());
    let pass = injective
        && projection_vanishes
        && kernel_in_span
        && projection_rank == expected_image
        && solved == samples;
    Ok(ExactnessReport {
        window: *window,
        injective,
        projection_vanishes,
        b_rank,
        projection_rank,
        kernel_dim,
        kernel_in_span,
        samples_solved: solved,
        samples,
        pass,
    })
}
