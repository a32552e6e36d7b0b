//! Exact sparse linear algebra over `Q` and `F_p`.
//!
//! Matrices are coordinate lists sorted by `(row, column)` with no stored
//! zeros. Reduction goes through a dense Gauss–Jordan kernel below 64x64
//! and a sparse elimination with Markowitz-style pivot selection above;
//! either way the output is the unique reduced row-echelon form, so every
//! derived object (kernel bases, particular solutions, homology
//! representatives) is deterministic.

use crate::scalar::{Field, Scalar};
use crate::{par, Error, Result};
use std::cmp::Reverse;
use std::collections::BinaryHeap;

/// A sparse column vector: sorted `(index, value)` pairs, no zeros.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SparseVec {
    pub dim: usize,
    pub entries: Vec<(usize, Scalar)>,
}

impl SparseVec {
    pub fn zero(dim: usize) -> Self {
        SparseVec { dim, entries: Vec::new() }
    }

    pub fn unit(dim: usize, i: usize, field: Field) -> Self {
        assert!(i < dim);
        SparseVec { dim, entries: vec![(i, field.one())] }
    }

    pub fn from_entries(dim: usize, mut entries: Vec<(usize, Scalar)>, field: Field) -> Self {
        entries.sort_by_key(|e| e.0);
        let mut out: Vec<(usize, Scalar)> = Vec::with_capacity(entries.len());
        for (i, v) in entries {
            assert!(i < dim, "index {i} out of range {dim}");
            match out.last_mut() {
                Some((j, acc)) if *j == i => *acc = field.add(acc, &v),
                _ => out.push((i, v)),
            }
        }
        out.retain(|(_, v)| !v.is_zero());
        SparseVec { dim, entries: out }
    }

    pub fn from_dense(values: &[Scalar]) -> Self {
        SparseVec {
            dim: values.len(),
            entries: values
                .iter()
                .enumerate()
                .filter(|(_, v)| !v.is_zero())
                .map(|(i, v)| (i, v.clone()))
                .collect(),
        }
    }

    pub fn to_dense(&self, field: Field) -> Vec<Scalar> {
        let mut out = vec![field.zero(); self.dim];
        for (i, v) in &self.entries {
            out[*i] = v.clone();
        }
        out
    }

    pub fn get(&self, i: usize) -> Option<&Scalar> {
        self.entries
            .binary_search_by_key(&i, |e| e.0)
            .ok()
            .map(|k| &self.entries[k].1)
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn scale(&self, c: &Scalar, field: Field) -> Self {
        if c.is_zero() {
            return SparseVec::zero(self.dim);
        }
        SparseVec {
            dim: self.dim,
            entries: self
                .entries
                .iter()
                .map(|(i, v)| (*i, field.mul(v, c)))
                .collect(),
        }
    }

    /// `self + c * other`, merging sorted entry lists.
    pub fn add_scaled(&self, other: &SparseVec, c: &Scalar, field: Field) -> Self {
        assert_eq!(self.dim, other.dim);
        if c.is_zero() {
            return self.clone();
        }
        let mut out = Vec::with_capacity(self.entries.len() + other.entries.len());
        let (mut a, mut b) = (0usize, 0usize);
        while a < self.entries.len() || b < other.entries.len() {
            let ia = self.entries.get(a).map(|e| e.0);
            let ib = other.entries.get(b).map(|e| e.0);
            match (ia, ib) {
                (Some(i), Some(j)) if i == j => {
                    let v = field.add(&self.entries[a].1, &field.mul(c, &other.entries[b].1));
                    if !v.is_zero() {
                        out.push((i, v));
                    }
                    a += 1;
                    b += 1;
                }
                (Some(i), Some(j)) if i < j => {
                    out.push(self.entries[a].clone());
                    let _ = i;
                    a += 1;
                }
                (Some(_), Some(j)) => {
                    out.push((j, field.mul(c, &other.entries[b].1)));
                    b += 1;
                }
                (Some(_), None) => {
                    out.push(self.entries[a].clone());
                    a += 1;
                }
                (None, Some(j)) => {
                    out.push((j, field.mul(c, &other.entries[b].1)));
                    b += 1;
                }
                (None, None) => unreachable!(),
            }
        }
        SparseVec { dim: self.dim, entries: out }
    }

    pub fn sub(&self, other: &SparseVec, field: Field) -> Self {
        self.add_scaled(other, &field.from_i64(-1), field)
    }
}

/// A sparse matrix over a fixed field.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SparseMatrix {
    pub rows: usize,
    pub cols: usize,
    pub field: Field,
    /// Sorted by `(row, col)`, unique positions, no zeros.
    entries: Vec<(u32, u32, Scalar)>,
}

/// Result of row reduction: the unique RREF and its pivot columns.
#[derive(Clone, Debug)]
pub struct Rref {
    pub reduced: SparseMatrix,
    pub pivot_columns: Vec<usize>,
}

impl Rref {
    pub fn rank(&self) -> usize {
        self.pivot_columns.len()
    }
}

impl SparseMatrix {
    pub fn zero(rows: usize, cols: usize, field: Field) -> Self {
        SparseMatrix { rows, cols, field, entries: Vec::new() }
    }

    pub fn identity(n: usize, field: Field) -> Self {
        SparseMatrix {
            rows: n,
            cols: n,
            field,
            entries: (0..n as u32).map(|i| (i, i, field.one())).collect(),
        }
    }

    pub fn from_triplets(
        rows: usize,
        cols: usize,
        field: Field,
        triplets: Vec<(usize, usize, Scalar)>,
    ) -> Self {
        let mut ts: Vec<(u32, u32, Scalar)> = triplets
            .into_iter()
            .map(|(r, c, v)| {
                assert!(r < rows && c < cols, "entry ({r},{c}) out of {rows}x{cols}");
                (r as u32, c as u32, v)
            })
            .collect();
        ts.sort_by_key(|e| (e.0, e.1));
        let mut out: Vec<(u32, u32, Scalar)> = Vec::with_capacity(ts.len());
        for (r, c, v) in ts {
            match out.last_mut() {
                Some((pr, pc, acc)) if *pr == r && *pc == c => *acc = field.add(acc, &v),
                _ => out.push((r, c, v)),
            }
        }
        out.retain(|(_, _, v)| !v.is_zero());
        SparseMatrix { rows, cols, field, entries: out }
    }

    pub fn from_columns(rows: usize, columns: &[SparseVec], field: Field) -> Self {
        let mut triplets = Vec::new();
        for (j, col) in columns.iter().enumerate() {
            assert_eq!(col.dim, rows);
            for (i, v) in &col.entries {
                triplets.push((*i, j, v.clone()));
            }
        }
        Self::from_triplets(rows, columns.len(), field, triplets)
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, &Scalar)> {
        self.entries.iter().map(|(r, c, v)| (*r as usize, *c as usize, v))
    }

    pub fn get(&self, r: usize, c: usize) -> Option<&Scalar> {
        self.entries
            .binary_search_by_key(&(r as u32, c as u32), |e| (e.0, e.1))
            .ok()
            .map(|k| &self.entries[k].2)
    }

    pub fn transpose(&self) -> Self {
        let mut ts: Vec<(u32, u32, Scalar)> =
            self.entries.iter().map(|(r, c, v)| (*c, *r, v.clone())).collect();
        ts.sort_by_key(|e| (e.0, e.1));
        SparseMatrix { rows: self.cols, cols: self.rows, field: self.field, entries: ts }
    }

    /// Materializes the columns as sparse vectors.
    pub fn to_columns(&self) -> Vec<SparseVec> {
        let mut cols = vec![Vec::new(); self.cols];
        for (r, c, v) in &self.entries {
            cols[*c as usize].push((*r as usize, v.clone()));
        }
        cols.into_iter()
            .map(|entries| SparseVec { dim: self.rows, entries })
            .collect()
    }

    /// Entries are sorted by row first, so a single column needs a scan.
    pub fn column(&self, j: usize) -> SparseVec {
        let entries = self
            .entries
            .iter()
            .filter(|(_, c, _)| *c as usize == j)
            .map(|(r, _, v)| (*r as usize, v.clone()))
            .collect();
        SparseVec { dim: self.rows, entries }
    }

    pub fn apply(&self, v: &SparseVec) -> SparseVec {
        assert_eq!(v.dim, self.cols, "matrix-vector dimension mismatch");
        let field = self.field;
        let mut dense: Vec<Option<Scalar>> = vec![None; self.rows];
        // group the vector for O(1) lookup
        let mut lookup: Vec<Option<&Scalar>> = vec![None; self.cols];
        for (i, val) in &v.entries {
            lookup[*i] = Some(val);
        }
        for (r, c, m) in &self.entries {
            if let Some(x) = lookup[*c as usize] {
                let term = field.mul(m, x);
                let slot = &mut dense[*r as usize];
                *slot = Some(match slot.take() {
                    Some(acc) => field.add(&acc, &term),
                    None => term,
                });
            }
        }
        let entries = dense
            .into_iter()
            .enumerate()
            .filter_map(|(i, v)| v.map(|v| (i, v)))
            .filter(|(_, v)| !v.is_zero())
            .collect();
        SparseVec { dim: self.rows, entries }
    }

    /// Matrix product, parallel over the columns of `rhs`.
    pub fn mul(&self, rhs: &SparseMatrix) -> SparseMatrix {
        assert_eq!(self.cols, rhs.rows, "matrix product dimension mismatch");
        assert_eq!(self.field, rhs.field);
        let field = self.field;
        let my_cols = self.to_columns();
        let rhs_cols = rhs.to_columns();
        let out_cols: Vec<SparseVec> = par::map_slice(&rhs_cols, |col| {
            let mut acc: Vec<(usize, Scalar)> = Vec::new();
            for (k, v) in &col.entries {
                for (i, m) in &my_cols[*k].entries {
                    acc.push((*i, field.mul(m, v)));
                }
            }
            SparseVec::from_entries(self.rows, acc, field)
        });
        SparseMatrix::from_columns(self.rows, &out_cols, field)
    }

    pub fn add(&self, rhs: &SparseMatrix) -> SparseMatrix {
        self.add_scaled(rhs, &self.field.one())
    }

    pub fn sub(&self, rhs: &SparseMatrix) -> SparseMatrix {
        self.add_scaled(rhs, &self.field.from_i64(-1))
    }

    pub fn add_scaled(&self, rhs: &SparseMatrix, c: &Scalar) -> SparseMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        assert_eq!(self.field, rhs.field);
        let mut triplets: Vec<(usize, usize, Scalar)> =
            self.entries.iter().map(|(r, col, v)| (*r as usize, *col as usize, v.clone())).collect();
        for (r, col, v) in &rhs.entries {
            triplets.push((*r as usize, *col as usize, self.field.mul(c, v)));
        }
        SparseMatrix::from_triplets(self.rows, self.cols, self.field, triplets)
    }

    pub fn scale(&self, c: &Scalar) -> SparseMatrix {
        if c.is_zero() {
            return SparseMatrix::zero(self.rows, self.cols, self.field);
        }
        SparseMatrix {
            rows: self.rows,
            cols: self.cols,
            field: self.field,
            entries: self
                .entries
                .iter()
                .map(|(r, col, v)| (*r, *col, self.field.mul(v, c)))
                .collect(),
        }
    }

    pub fn neg(&self) -> SparseMatrix {
        self.scale(&self.field.from_i64(-1))
    }

    /// Horizontal concatenation `[self | rhs]`.
    pub fn hstack(&self, rhs: &SparseMatrix) -> SparseMatrix {
        assert_eq!(self.rows, rhs.rows);
        assert_eq!(self.field, rhs.field);
        let mut triplets: Vec<(usize, usize, Scalar)> =
            self.entries.iter().map(|(r, c, v)| (*r as usize, *c as usize, v.clone())).collect();
        for (r, c, v) in &rhs.entries {
            triplets.push((*r as usize, *c as usize + self.cols, v.clone()));
        }
        SparseMatrix::from_triplets(self.rows, self.cols + rhs.cols, self.field, triplets)
    }

    /// The unique reduced row-echelon form with its pivot columns.
    pub fn rref(&self) -> Rref {
        self.reduce(true)
    }

    /// Rank only; uses forward elimination, which fills less.
    pub fn rank(&self) -> usize {
        self.reduce(false).pivot_columns.len()
    }

    fn reduce(&self, full: bool) -> Rref {
        if self.rows < 64 && self.cols < 64 {
            self.reduce_dense(full)
        } else {
            self.reduce_sparse(full)
        }
    }

    fn reduce_dense(&self, _full: bool) -> Rref {
        let field = self.field;
        let mut m: Vec<Vec<Scalar>> = vec![vec![field.zero(); self.cols]; self.rows];
        for (r, c, v) in &self.entries {
            m[*r as usize][*c as usize] = v.clone();
        }
        let mut pivots = Vec::new();
        let mut pr = 0usize;
        for c in 0..self.cols {
            let Some(sel) = (pr..self.rows).find(|&r| !m[r][c].is_zero()) else {
                continue;
            };
            m.swap(pr, sel);
            let inv = field.inv(&m[pr][c]).expect("pivot is nonzero");
            for j in c..self.cols {
                m[pr][j] = field.mul(&m[pr][j], &inv);
            }
            for r in 0..self.rows {
                if r != pr && !m[r][c].is_zero() {
                    let coeff = std::mem::replace(&mut m[r][c], field.zero());
                    for j in (c + 1)..self.cols {
                        let t = field.mul(&coeff, &m[pr][j]);
                        m[r][j] = field.sub(&m[r][j], &t);
                    }
                }
            }
            pivots.push(c);
            pr += 1;
            if pr == self.rows {
                break;
            }
        }
        let mut triplets = Vec::new();
        for (r, row) in m.iter().enumerate() {
            for (c, v) in row.iter().enumerate() {
                if !v.is_zero() {
                    triplets.push((r, c, v.clone()));
                }
            }
        }
        Rref {
            reduced: SparseMatrix::from_triplets(self.rows, self.cols, field, triplets),
            pivot_columns: pivots,
        }
    }

    fn reduce_sparse(&self, full: bool) -> Rref {
        let field = self.field;
        let ncols = self.cols;
        // rows as sorted (col, value) lists
        let mut rows: Vec<Option<Vec<(u32, Scalar)>>> = vec![Some(Vec::new()); self.rows];
        for (r, c, v) in &self.entries {
            rows[*r as usize].as_mut().unwrap().push((*c, v.clone()));
        }
        for row in rows.iter_mut().flatten() {
            row.sort_by_key(|e| e.0);
        }
        let mut col_count: Vec<u32> = vec![0; ncols];
        let mut col_rows: Vec<Vec<u32>> = vec![Vec::new(); ncols];
        for (r, row) in rows.iter().enumerate() {
            for (c, _) in row.as_ref().unwrap() {
                col_count[*c as usize] += 1;
                col_rows[*c as usize].push(r as u32);
            }
        }
        let mut active: Vec<bool> = rows.iter().map(|r| !r.as_ref().unwrap().is_empty()).collect();
        for (r, row) in rows.iter_mut().enumerate() {
            if row.as_ref().unwrap().is_empty() {
                *row = None;
                let _ = r;
            }
        }
        // lazy min-count heap over columns
        let mut heap: BinaryHeap<Reverse<(u32, u32)>> = BinaryHeap::new();
        for (c, &count) in col_count.iter().enumerate() {
            if count > 0 {
                heap.push(Reverse((count, c as u32)));
            }
        }
        let mut pivots: Vec<(u32, u32)> = Vec::new(); // (row, col)
        let nnz =
            |row: &Option<Vec<(u32, Scalar)>>| row.as_ref().map(|r| r.len()).unwrap_or(usize::MAX);

        while let Some(Reverse((count, c))) = heap.pop() {
            let c = c as usize;
            if col_count[c] == 0 || count != col_count[c] {
                continue; // stale heap entry
            }
            // membership lists may hold stale rows; confirm against content.
            // Once a column is eliminated no row ever regains it, so the
            // cleaned list is exact from here on.
            col_rows[c].sort_unstable();
            col_rows[c].dedup();
            col_rows[c].retain(|&r| {
                rows[r as usize]
                    .as_ref()
                    .is_some_and(|row| row.binary_search_by_key(&(c as u32), |e| e.0).is_ok())
            });
            debug_assert_eq!(
                col_rows[c].iter().filter(|&&r| active[r as usize]).count() as u32,
                col_count[c]
            );
            // Markowitz-style: cheapest active row in the cheapest column
            let &pr = col_rows[c]
                .iter()
                .filter(|&&r| active[r as usize])
                .min_by_key(|&&r| (nnz(&rows[r as usize]), r))
                .expect("column count was positive");
            let pr = pr as usize;
            // normalize the pivot row
            {
                let row = rows[pr].as_mut().unwrap();
                let k = row.binary_search_by_key(&(c as u32), |e| e.0).unwrap();
                let inv = field.inv(&row[k].1).expect("pivot is nonzero");
                if !inv.is_one() {
                    for (_, v) in row.iter_mut() {
                        *v = field.mul(v, &inv);
                    }
                }
            }
            // retire the pivot row from the active counts
            active[pr] = false;
            for (col, _) in rows[pr].as_ref().unwrap().clone() {
                let col = col as usize;
                col_count[col] -= 1;
                if col_count[col] > 0 {
                    heap.push(Reverse((col_count[col], col as u32)));
                }
            }
            // eliminate column c from every other row holding it (including
            // earlier pivot rows when a full reduction is requested)
            let members: Vec<u32> = std::mem::take(&mut col_rows[c])
                .into_iter()
                .filter(|&r| r as usize != pr)
                .collect();
            let pivot_row = rows[pr].as_ref().unwrap().clone();
            for r in members {
                let r = r as usize;
                if rows[r].is_none() {
                    continue;
                }
                if !full && !active[r] {
                    continue; // forward-only: leave earlier pivot rows alone
                }
                let Some(row) = rows[r].as_ref() else { continue };
                let Ok(k) = row.binary_search_by_key(&(c as u32), |e| e.0) else {
                    continue;
                };
                let coeff = field.neg(&row[k].1);
                let (new_row, added, removed) =
                    row_add_scaled(row, &pivot_row, &coeff, field);
                for &col in &added {
                    col_rows[col as usize].push(r as u32);
                }
                if active[r] {
                    for &col in &added {
                        col_count[col as usize] += 1;
                        heap.push(Reverse((col_count[col as usize], col)));
                    }
                    for &col in &removed {
                        col_count[col as usize] -= 1;
                        if col_count[col as usize] > 0 {
                            heap.push(Reverse((col_count[col as usize], col)));
                        }
                    }
                }
                rows[r] = if new_row.is_empty() { None } else { Some(new_row) };
                if rows[r].is_none() {
                    active[r] = false;
                }
            }
            debug_assert_eq!(col_count[c], 0);
            pivots.push((pr as u32, c as u32));
        }

        pivots.sort_by_key(|&(_, c)| c);
        let mut triplets = Vec::new();
        for (out_r, &(r, _)) in pivots.iter().enumerate() {
            for (c, v) in rows[r as usize].as_ref().unwrap() {
                triplets.push((out_r, *c as usize, v.clone()));
            }
        }
        Rref {
            reduced: SparseMatrix::from_triplets(self.rows, ncols, field, triplets),
            pivot_columns: pivots.iter().map(|&(_, c)| c as usize).collect(),
        }
    }

    /// Canonical kernel basis read off the RREF, free columns in increasing
    /// order.
    pub fn kernel_basis(&self) -> Vec<SparseVec> {
        let rref = self.rref();
        kernel_from_rref(&rref, self.cols, self.field)
    }

    /// The columns of `self` at the pivot positions of a reduction of
    /// `self`; a canonical basis of the column space.
    pub fn image_basis_from(&self, rref: &Rref) -> Vec<SparseVec> {
        let mut wanted = vec![false; self.cols];
        for &c in &rref.pivot_columns {
            wanted[c] = true;
        }
        let mut cols: Vec<Vec<(usize, Scalar)>> = vec![Vec::new(); self.cols];
        for (r, c, v) in self.entries() {
            if wanted[c] {
                cols[c].push((r, v.clone()));
            }
        }
        rref.pivot_columns
            .iter()
            .map(|&c| SparseVec { dim: self.rows, entries: std::mem::take(&mut cols[c]) })
            .collect()
    }

    /// Deterministic particular solution of `self * x = rhs` with free
    /// variables set to zero, or `None` if the system is inconsistent.
    pub fn solve(&self, rhs: &SparseVec) -> Option<SparseVec> {
        assert_eq!(rhs.dim, self.rows, "rhs length must equal row count");
        let aug = self.hstack(&SparseMatrix::from_columns(self.rows, &[rhs.clone()], self.field));
        let rref = aug.rref();
        if rref.pivot_columns.iter().any(|&c| c >= self.cols) {
            return None;
        }
        let mut entries = Vec::new();
        for (row, &pc) in rref.pivot_columns.iter().enumerate() {
            if let Some(v) = rref.reduced.get(row, self.cols) {
                entries.push((pc, v.clone()));
            }
        }
        Some(SparseVec::from_entries(self.cols, entries, self.field))
    }

    /// Simultaneous solve for several right-hand sides; errors if any system
    /// is inconsistent.
    pub fn solve_multi(&self, rhses: &[SparseVec]) -> Result<Vec<SparseVec>> {
        let aug = self.hstack(&SparseMatrix::from_columns(self.rows, rhses, self.field));
        let rref = aug.rref();
        if let Some(&c) = rref.pivot_columns.iter().find(|&&c| c >= self.cols) {
            return Err(Error::Inconsistent(format!(
                "right-hand side {} is outside the column span",
                c - self.cols
            )));
        }
        let mut sols = vec![Vec::new(); rhses.len()];
        for (row, &pc) in rref.pivot_columns.iter().enumerate() {
            let lo = rref
                .reduced
                .entries
                .partition_point(|e| (e.0 as usize) < row);
            for e in &rref.reduced.entries[lo..] {
                if e.0 as usize != row {
                    break;
                }
                let c = e.1 as usize;
                if c >= self.cols {
                    sols[c - self.cols].push((pc, e.2.clone()));
                }
            }
        }
        Ok(sols
            .into_iter()
            .map(|entries| SparseVec::from_entries(self.cols, entries, self.field))
            .collect())
    }
}

fn row_add_scaled(
    dst: &[(u32, Scalar)],
    src: &[(u32, Scalar)],
    c: &Scalar,
    field: Field,
) -> (Vec<(u32, Scalar)>, Vec<u32>, Vec<u32>) {
    let mut out = Vec::with_capacity(dst.len() + src.len());
    let mut added = Vec::new();
    let mut removed = Vec::new();
    let (mut a, mut b) = (0usize, 0usize);
    while a < dst.len() || b < src.len() {
        let ia = dst.get(a).map(|e| e.0);
        let ib = src.get(b).map(|e| e.0);
        match (ia, ib) {
            (Some(i), Some(j)) if i == j => {
                let v = field.add(&dst[a].1, &field.mul(c, &src[b].1));
                if v.is_zero() {
                    removed.push(i);
                } else {
                    out.push((i, v));
                }
                a += 1;
                b += 1;
            }
            (Some(i), Some(j)) if i < j => {
                out.push(dst[a].clone());
                let _ = i;
                a += 1;
            }
            (Some(_), Some(j)) => {
                let v = field.mul(c, &src[b].1);
                if !v.is_zero() {
                    out.push((j, v));
                    added.push(j);
                }
                b += 1;
            }
            (Some(_), None) => {
                out.push(dst[a].clone());
                a += 1;
            }
            (None, Some(j)) => {
                let v = field.mul(c, &src[b].1);
                if !v.is_zero() {
                    out.push((j, v));
                    added.push(j);
                }
                b += 1;
            }
            (None, None) => unreachable!(),
        }
    }
    (out, added, removed)
}

/// Canonical kernel basis of the matrix a given RREF reduces.
pub fn kernel_from_rref(rref: &Rref, cols: usize, field: Field) -> Vec<SparseVec> {
    let pivots = &rref.pivot_columns;
    let mut is_pivot = vec![false; cols];
    for &c in pivots {
        is_pivot[c] = true;
    }
    let free: Vec<usize> = (0..cols).filter(|&c| !is_pivot[c]).collect();
    let mut slot_of_free = vec![usize::MAX; cols];
    for (k, &f) in free.iter().enumerate() {
        slot_of_free[f] = k;
    }
    let mut vecs: Vec<Vec<(usize, Scalar)>> = free.iter().map(|&f| vec![(f, field.one())]).collect();
    for (r, c, v) in rref.reduced.entries() {
        if !is_pivot[c] {
            vecs[slot_of_free[c]].push((pivots[r], field.neg(v)));
        }
    }
    vecs.into_iter()
        .map(|entries| SparseVec::from_entries(cols, entries, field))
        .collect()
}

/// One homological degree: dimension, chosen representative cycles, and the
/// projection sending any cycle onto its coordinates in the class basis.
#[derive(Clone, Debug)]
pub struct HomologySpace {
    pub degree: usize,
    pub ambient_dim: usize,
    pub dim: usize,
    pub representatives: Vec<SparseVec>,
    /// `dim x ambient` matrix; for `z` in the cycle space, `projection * z`
    /// is the class coordinate vector of `[z]`. Off the cycle space the
    /// values carry no meaning.
    pub projection: SparseMatrix,
}

impl HomologySpace {
    pub fn project(&self, cycle: &SparseVec) -> SparseVec {
        self.projection.apply(cycle)
    }

    /// Expands class coordinates back into an ambient representative.
    pub fn lift(&self, coords: &SparseVec, field: Field) -> SparseVec {
        assert_eq!(coords.dim, self.dim);
        let mut out = SparseVec::zero(self.ambient_dim);
        for (i, c) in &coords.entries {
            out = out.add_scaled(&self.representatives[*i], c, field);
        }
        out
    }
}

/// Computes `span(cycles) / span(boundaries)` with deterministic
/// representatives: the cycle columns that complete the boundary space to a
/// basis of the cycle space, chosen by pivoting in ambient coordinate order.
///
/// `cycles` must be linearly independent and every boundary must lie in
/// their span; the latter is checked and reported as an error.
pub fn subquotient(
    field: Field,
    ambient_dim: usize,
    degree: usize,
    cycles: &[SparseVec],
    boundaries: &[SparseVec],
) -> Result<HomologySpace> {
    let k = cycles.len();
    let b = boundaries.len();
    let bmat = SparseMatrix::from_columns(ambient_dim, boundaries, field);
    let cmat = SparseMatrix::from_columns(ambient_dim, cycles, field);
    let joint = bmat.hstack(&cmat);
    let rref = joint.rref();
    if rref.rank() > k {
        // find a witness boundary outside the cycle span
        let check = cmat.hstack(&bmat).rref();
        let col = check
            .pivot_columns
            .iter()
            .find(|&&c| c >= k)
            .map(|&c| c - k)
            .unwrap_or(0);
        return Err(Error::BoundaryNotInCycleSpan(col));
    }
    let rank_b = rref.pivot_columns.iter().filter(|&&c| c < b).count();
    let dim = k - rank_b;

    let boundary_basis: Vec<&SparseVec> = rref
        .pivot_columns
        .iter()
        .filter(|&&c| c < b)
        .map(|&c| &boundaries[c])
        .collect();
    let representatives: Vec<SparseVec> = rref
        .pivot_columns
        .iter()
        .filter(|&&c| c >= b)
        .map(|&c| cycles[c - b].clone())
        .collect();
    debug_assert_eq!(representatives.len(), dim);

    // projection: rows i of L with L * [B' | R] = I, for i in the R block
    let m = rank_b + dim;
    let mut basis_cols: Vec<SparseVec> = boundary_basis.into_iter().cloned().collect();
    basis_cols.extend(representatives.iter().cloned());
    let mt = SparseMatrix::from_columns(ambient_dim, &basis_cols, field).transpose();
    let units: Vec<SparseVec> =
        (rank_b..m).map(|i| SparseVec::unit(m, i, field)).collect();
    let sols = mt.solve_multi(&units)?;
    let projection = SparseMatrix::from_columns(ambient_dim, &sols, field).transpose();
    debug_assert_eq!(projection.rows, dim);

    Ok(HomologySpace { degree, ambient_dim, dim, representatives, projection })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q() -> Field {
        Field::Q
    }

    fn mat(rows: usize, cols: usize, data: &[(usize, usize, i64)]) -> SparseMatrix {
        SparseMatrix::from_triplets(
            rows,
            cols,
            q(),
            data.iter().map(|&(r, c, v)| (r, c, q().from_i64(v))).collect(),
        )
    }

    #[test]
    fn rref_empty_matrix() {
        let m = SparseMatrix::zero(0, 0, q());
        let r = m.rref();
        assert_eq!(r.reduced.rows, 0);
        assert_eq!(r.reduced.cols, 0);
        assert!(r.pivot_columns.is_empty());
    }

    #[test]
    fn rref_identity_is_fixed() {
        let m = SparseMatrix::identity(2, q());
        let r = m.rref();
        assert_eq!(r.reduced, m);
        assert_eq!(r.pivot_columns, vec![0, 1]);
    }

    #[test]
    fn rref_rank_one_example() {
        // [[2,4],[1,2]] reduces to [[1,2],[0,0]] with pivot column 0
        let m = mat(2, 2, &[(0, 0, 2), (0, 1, 4), (1, 0, 1), (1, 1, 2)]);
        let r = m.rref();
        assert_eq!(r.pivot_columns, vec![0]);
        assert_eq!(r.reduced, mat(2, 2, &[(0, 0, 1), (0, 1, 2)]));
    }

    #[test]
    fn kernel_of_identity_is_empty() {
        assert!(SparseMatrix::identity(3, q()).kernel_basis().is_empty());
    }

    #[test]
    fn kernel_of_zero_map_is_standard_basis() {
        let m = SparseMatrix::zero(2, 3, q());
        let k = m.kernel_basis();
        assert_eq!(k.len(), 3);
        for (i, v) in k.iter().enumerate() {
            assert_eq!(*v, SparseVec::unit(3, i, q()));
        }
    }

    #[test]
    fn kernel_over_f5() {
        let f5 = Field::prime(5).unwrap();
        let m = SparseMatrix::from_triplets(
            1,
            2,
            f5,
            vec![(0, 0, f5.one()), (0, 1, f5.one())],
        );
        let k = m.kernel_basis();
        assert_eq!(k.len(), 1);
        assert_eq!(
            k[0],
            SparseVec::from_entries(2, vec![(0, Scalar::Mod(4)), (1, Scalar::Mod(1))], f5)
        );
    }

    #[test]
    fn solve_identity_returns_rhs() {
        let m = SparseMatrix::identity(3, q());
        let b = SparseVec::from_entries(3, vec![(0, q().from_i64(7)), (2, q().from_i64(-1))], q());
        assert_eq!(m.solve(&b).unwrap(), b);
    }

    #[test]
    fn solve_underdetermined_sets_free_vars_to_zero() {
        let m = mat(1, 2, &[(0, 0, 1), (0, 1, 1)]);
        let b = SparseVec::from_entries(1, vec![(0, q().from_i64(2))], q());
        let x = m.solve(&b).unwrap();
        assert_eq!(x, SparseVec::from_entries(2, vec![(0, q().from_i64(2))], q()));
    }

    #[test]
    fn solve_inconsistent_returns_none() {
        let m = SparseMatrix::zero(1, 1, q());
        let b = SparseVec::unit(1, 0, q());
        assert!(m.solve(&b).is_none());
    }

    #[test]
    fn subquotient_basics() {
        let f = q();
        let e1 = SparseVec::unit(2, 0, f);
        let e2 = SparseVec::unit(2, 1, f);
        let h = subquotient(f, 2, 0, &[e1.clone(), e2.clone()], &[e1.clone()]).unwrap();
        assert_eq!(h.dim, 1);
        assert_eq!(h.representatives, vec![e2.clone()]);

        let h = subquotient(f, 3, 0, &[], &[]).unwrap();
        assert_eq!(h.dim, 0);

        // cycles {e1, e1+e2}, boundaries {2 e2}: dim 2 - 1 = 1
        let c2 = e1.add_scaled(&e2, &f.one(), f);
        let b1 = e2.scale(&f.from_i64(2), f);
        let h = subquotient(f, 2, 0, &[e1.clone(), c2], &[b1.clone()]).unwrap();
        assert_eq!(h.dim, 1);
        // the projection kills the boundary
        assert!(h.project(&b1).is_zero());
    }

    #[test]
    fn subquotient_rejects_stray_boundary() {
        let f = q();
        let e1 = SparseVec::unit(2, 0, f);
        let e2 = SparseVec::unit(2, 1, f);
        let err = subquotient(f, 2, 0, &[e1], &[e2]).unwrap_err();
        assert!(matches!(err, Error::BoundaryNotInCycleSpan(0)));
    }

    #[test]
    fn projection_then_lift_is_identity_on_classes() {
        let f = q();
        // ambient Q^3, cycles all of it, boundaries span{e0 - e1}
        let e: Vec<SparseVec> = (0..3).map(|i| SparseVec::unit(3, i, f)).collect();
        let b = e[0].sub(&e[1], f);
        let h = subquotient(f, 3, 1, &e, &[b.clone()]).unwrap();
        assert_eq!(h.dim, 2);
        for (i, rep) in h.representatives.iter().enumerate() {
            let p = h.project(rep);
            assert_eq!(p, SparseVec::unit(h.dim, i, f));
        }
        // a shifted cycle projects to the same class
        let z = h.representatives[0].add_scaled(&b, &f.from_i64(5), f);
        assert_eq!(h.project(&z), SparseVec::unit(h.dim, 0, f));
    }
}
