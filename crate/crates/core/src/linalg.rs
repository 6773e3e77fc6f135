//! Exact row echelon form over ℚ for sparse rows.

use std::collections::BTreeMap;

use num_traits::Zero;

use crate::symbols::Rational;

pub type SparseRow = BTreeMap<usize, Rational>;

fn axpy(target: &mut SparseRow, c: &Rational, row: &SparseRow) {
    for (&j, v) in row {
        let e = target.entry(j).or_insert_with(Rational::zero);
        *e += c * v;
        if e.is_zero() {
            target.remove(&j);
        }
    }
}

/// Incrementally built echelon basis. Each stored row remembers how it was
/// combined from the inserted rows, so membership queries return explicit
/// coefficients.
#[derive(Debug, Clone, Default)]
pub struct Echelon {
    rows: Vec<SparseRow>,
    combos: Vec<SparseRow>,
    by_pivot: BTreeMap<usize, usize>,
    inserted: usize,
}

impl Echelon {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Number of rows passed to [`Echelon::insert`].
    pub fn inserted(&self) -> usize {
        self.inserted
    }

    pub fn pivots(&self) -> Vec<usize> {
        self.by_pivot.keys().copied().collect()
    }

    /// Eliminates leading entries that sit on pivot columns. Returns the
    /// residual and the combination of inserted rows that was subtracted.
    fn reduce(&self, mut row: SparseRow) -> (SparseRow, SparseRow) {
        let mut combo = SparseRow::new();
        while let Some((&lead, v)) = row.iter().next() {
            let Some(&r) = self.by_pivot.get(&lead) else {
                break;
            };
            let c = -(v / &self.rows[r][&lead]);
            axpy(&mut row, &c, &self.rows[r]);
            axpy(&mut combo, &c, &self.combos[r]);
        }
        (row, combo)
    }

    /// Adds a row. Returns its new pivot column, or `None` when the row is
    /// dependent on earlier ones.
    pub fn insert(&mut self, row: SparseRow) -> Option<usize> {
        let id = self.inserted;
        self.inserted += 1;
        let (residual, mut combo) = self.reduce(row);
        let &lead = residual.keys().next()?;
        combo.insert(id, Rational::from_integer(1.into()));
        self.by_pivot.insert(lead, self.rows.len());
        self.rows.push(residual);
        self.combos.push(combo);
        Some(lead)
    }

    /// Coefficients `c` with `Σ c_i · row_i = target`, over the inserted
    /// rows, if the target lies in their span.
    pub fn solve(&self, target: &SparseRow) -> Option<SparseRow> {
        let (residual, combo) = self.reduce(target.clone());
        if !residual.is_empty() {
            return None;
        }
        let mut out = SparseRow::new();
        axpy(&mut out, &Rational::from_integer((-1).into()), &combo);
        Some(out)
    }
}

/// `Σ c_i · rows[i]`.
pub fn combine(rows: &[SparseRow], coeffs: &SparseRow) -> SparseRow {
    let mut out = SparseRow::new();
    for (&i, c) in coeffs {
        axpy(&mut out, c, &rows[i]);
    }
    out
}

pub fn rank(rows: &[SparseRow]) -> usize {
    let mut e = Echelon::new();
    for r in rows {
        e.insert(r.clone());
    }
    e.rank()
}

pub fn transpose(rows: &[SparseRow]) -> Vec<SparseRow> {
    let ncols = rows
        .iter()
        .filter_map(|r| r.keys().next_back())
        .max()
        .map_or(0, |&m| m + 1);
    let mut out = vec![SparseRow::new(); ncols];
    for (i, r) in rows.iter().enumerate() {
        for (&j, v) in r {
            out[j].insert(i, v.clone());
        }
    }
    out
}
