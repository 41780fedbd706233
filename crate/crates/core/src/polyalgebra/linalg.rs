//! Exact linear algebra over the rationals.
//!
//! Elimination runs on integer rows. Rational input rows are first scaled to
//! integers; each elimination step cross-multiplies by the pivot ratio and
//! then divides the resulting row by its content (the gcd of its entries),
//! which is an exact division. Rows stay primitive, so coefficient growth is
//! bounded by the size of the minors rather than compounding.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::Rat;

/// Sparse integer row, entries sorted by column, no zeros stored.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SparseRow(Vec<(usize, BigInt)>);

impl SparseRow {
    pub fn new(mut entries: Vec<(usize, BigInt)>) -> Self {
        entries.retain(|(_, v)| !v.is_zero());
        entries.sort_by_key(|(c, _)| *c);
        let mut out: Vec<(usize, BigInt)> = Vec::with_capacity(entries.len());
        for (c, v) in entries {
            match out.last_mut() {
                Some((lc, lv)) if *lc == c => *lv += v,
                _ => out.push((c, v)),
            }
        }
        out.retain(|(_, v)| !v.is_zero());
        SparseRow(out)
    }

    /// Scales a rational row to a primitive integer row.
    pub fn from_rationals(entries: impl IntoIterator<Item = (usize, Rat)>) -> Self {
        let entries: Vec<(usize, Rat)> = entries.into_iter().filter(|(_, v)| !v.is_zero()).collect();
        let den = entries.iter().fold(BigInt::one(), |acc, (_, v)| acc.lcm(v.denom()));
        let mut row = SparseRow::new(
            entries
                .into_iter()
                .map(|(c, v)| (c, v.numer() * (&den / v.denom())))
                .collect(),
        );
        row.make_primitive();
        row
    }

    pub fn entries(&self) -> &[(usize, BigInt)] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn leading(&self) -> Option<(usize, &BigInt)> {
        self.0.first().map(|(c, v)| (*c, v))
    }

    pub fn get(&self, col: usize) -> Option<&BigInt> {
        self.0
            .binary_search_by_key(&col, |(c, _)| *c)
            .ok()
            .map(|i| &self.0[i].1)
    }

    /// Divides out the content and makes the leading entry positive.
    fn make_primitive(&mut self) {
        let Some((_, lead)) = self.0.first() else { return };
        let mut g = BigInt::zero();
        for (_, v) in &self.0 {
            g = g.gcd(v);
            if g.is_one() {
                break;
            }
        }
        if lead.is_negative() {
            g = -g;
        }
        if !g.is_one() {
            for (_, v) in self.0.iter_mut() {
                *v = &*v / &g;
            }
        }
    }

    /// Replaces `self` with a primitive multiple of `b*self - a*other`
    /// where `a`, `b` are this row's and `other`'s entries at `col`,
    /// eliminating that column.
    fn eliminate(&mut self, other: &SparseRow, col: usize) {
        let a = self.get(col).cloned().unwrap_or_default();
        if a.is_zero() {
            return;
        }
        let b = other.get(col).expect("pivot entry present");
        let g = a.gcd(b);
        let fa = b / &g;
        let fb = &a / &g;
        let mut out = Vec::with_capacity(self.0.len() + other.0.len());
        let (mut i, mut j) = (0, 0);
        while i < self.0.len() || j < other.0.len() {
            let ci = self.0.get(i).map(|e| e.0).unwrap_or(usize::MAX);
            let cj = other.0.get(j).map(|e| e.0).unwrap_or(usize::MAX);
            let (c, v) = if ci < cj {
                i += 1;
                (ci, &self.0[i - 1].1 * &fa)
            } else if cj < ci {
                j += 1;
                (cj, -(&other.0[j - 1].1 * &fb))
            } else {
                i += 1;
                j += 1;
                (ci, &self.0[i - 1].1 * &fa - &other.0[j - 1].1 * &fb)
            };
            if !v.is_zero() {
                out.push((c, v));
            }
        }
        self.0 = out;
        self.make_primitive();
    }
}

/// Incremental row echelon form keyed by leading column.
#[derive(Debug, Clone, Default)]
pub struct Echelon {
    pivots: BTreeMap<usize, SparseRow>,
}

impl Echelon {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// Reduces `row` against the current pivots; inserts it and returns true
    /// if it was independent.
    pub fn insert(&mut self, mut row: SparseRow) -> bool {
        row.make_primitive();
        while let Some((lead, _)) = row.leading() {
            match self.pivots.get(&lead) {
                Some(p) => row.eliminate(p, lead),
                None => {
                    self.pivots.insert(lead, row);
                    return true;
                }
            }
        }
        false
    }

    /// Reduced echelon form: each returned row has a distinct pivot column
    /// and is zero in every other pivot column. Rows are primitive integer
    /// vectors, ordered by pivot column.
    pub fn reduced(&self) -> Vec<SparseRow> {
        let mut done: BTreeMap<usize, SparseRow> = BTreeMap::new();
        for (&lead, row) in self.pivots.iter().rev() {
            let mut row = row.clone();
            let later: Vec<usize> = row
                .entries()
                .iter()
                .skip(1)
                .map(|(c, _)| *c)
                .filter(|c| done.contains_key(c))
                .collect();
            for c in later {
                row.eliminate(&done[&c], c);
            }
            done.insert(lead, row);
        }
        done.into_values().collect()
    }

    pub fn pivot_columns(&self) -> impl Iterator<Item = usize> + '_ {
        self.pivots.keys().copied()
    }
}

/// Dense matrix of rationals.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExactMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Rat>,
}

impl ExactMatrix {
    /// Row-major entries; panics when the length is not `rows * cols`.
    pub fn new(rows: usize, cols: usize, entries: Vec<Rat>) -> Self {
        assert_eq!(entries.len(), rows * cols, "matrix shape mismatch");
        ExactMatrix { rows, cols, entries }
    }

    pub fn from_integers(rows: usize, cols: usize, entries: &[i64]) -> Self {
        Self::new(
            rows,
            cols,
            entries.iter().map(|&v| Rat::from_integer(v.into())).collect(),
        )
    }

    pub fn identity(n: usize) -> Self {
        let mut e = vec![Rat::zero(); n * n];
        for i in 0..n {
            e[i * n + i] = Rat::one();
        }
        Self::new(n, n, e)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &Rat {
        &self.entries[r * self.cols + c]
    }

    pub fn row(&self, r: usize) -> &[Rat] {
        &self.entries[r * self.cols..(r + 1) * self.cols]
    }

    fn echelon(&self) -> Echelon {
        let mut ech = Echelon::new();
        for r in 0..self.rows {
            let row = SparseRow::from_rationals(self.row(r).iter().cloned().enumerate());
            ech.insert(row);
        }
        ech
    }

    pub fn rank(&self) -> usize {
        self.echelon().rank()
    }

    /// Basis of the right kernel. Each vector has a 1 in its free column and
    /// zeros in the other free columns.
    pub fn nullspace(&self) -> Vec<Vec<Rat>> {
        let reduced = self.echelon().reduced();
        let pivot_of: BTreeMap<usize, &SparseRow> = reduced
            .iter()
            .map(|row| (row.leading().expect("nonzero pivot row").0, row))
            .collect();
        let mut basis = Vec::new();
        for free in (0..self.cols).filter(|c| !pivot_of.contains_key(c)) {
            let mut v = vec![Rat::zero(); self.cols];
            v[free] = Rat::one();
            for (&pc, row) in &pivot_of {
                if let Some(a) = row.get(free) {
                    let p = row.get(pc).expect("pivot entry");
                    v[pc] = -Rat::new(a.clone(), p.clone());
                }
            }
            basis.push(v);
        }
        basis
    }

    pub fn mul_vec(&self, v: &[Rat]) -> Vec<Rat> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|r| {
                self.row(r)
                    .iter()
                    .zip(v)
                    .fold(Rat::zero(), |acc, (a, b)| acc + a * b)
            })
            .collect()
    }
}
