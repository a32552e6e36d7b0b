//! Hochschild chains and cochains with their differentials and cyclic
//! operators, and the homology pipeline on top of them.
//!
//! Chain conventions, fixed once and pinned by the identity suites:
//!
//! * `b(a_0ksb...ksb a_n) = sum_{i<n} (-1)^i a_0 ksb...ksb a_i a_{i+1} ksb ... + (-1)^n a_n a_0 ksb a_1 ksb ...`
//!   (`ksb` standing in for the tensor sign), `b'` is `b` without the last
//!   (cyclic) term, `t(a_0 ksb ... ksb a_n) = (-1)^n a_n ksb a_0 ksb ...`, `N = sum t^j`.
//! * The normalized model lives over the unit-first basis change of the
//!   algebra: basis vector `0` is the unit and interior tensor slots range
//!   over the remaining basis vectors.
//! * `delta` is the Hochschild cochain differential with
//!   `(delta f)(a_1,...,a_{n+1}) = a_1 f(...) + sum (-1)^i f(..., a_i a_{i+1}, ...) + (-1)^{n+1} f(...) a_{n+1}`.

use crate::algebra::{Algebra, UnitFirstModel};
use crate::scalar::{Field, Scalar};
use crate::sparse::{
    kernel_from_rref, subquotient, HomologySpace, Rref, SparseMatrix, SparseVec,
};
use crate::{par, Check, Error, Report, Result};

/// Default cap on the dimension of any materialized chain space.
pub const DEFAULT_MAX_CHAIN_DIM: usize = 1_000_000;

/// Basis enumeration of `C_n = A^{(n+1)-fold tensor}` (arity = n+1) or of
/// its normalized variant, where slots `1..arity` exclude the unit
/// direction. Tuples are enumerated lexicographically.
#[derive(Clone, Copy, Debug)]
pub struct ChainBasis {
    pub d: usize,
    pub arity: usize,
    pub normalized: bool,
}

impl ChainBasis {
    pub fn new(d: usize, degree: usize, normalized: bool) -> Self {
        ChainBasis { d, arity: degree + 1, normalized }
    }

    pub fn dim(&self) -> usize {
        if self.normalized {
            self.d * (self.d - 1).pow((self.arity - 1) as u32)
        } else {
            self.d.pow(self.arity as u32)
        }
    }

    /// Index of a tuple, or `None` when the tuple is killed by
    /// normalization (an interior slot on the unit).
    pub fn index_of(&self, tuple: &[usize]) -> Option<usize> {
        debug_assert_eq!(tuple.len(), self.arity);
        if self.normalized {
            let r = self.d - 1;
            let mut idx = tuple[0];
            for &t in &tuple[1..] {
                if t == 0 {
                    return None;
                }
                idx = idx * r + (t - 1);
            }
            Some(idx)
        } else {
            let mut idx = 0;
            for &t in tuple {
                idx = idx * self.d + t;
            }
            Some(idx)
        }
    }

    pub fn tuple_of(&self, mut index: usize) -> Vec<usize> {
        let mut tuple = vec![0usize; self.arity];
        if self.normalized {
            let r = self.d - 1;
            for k in (1..self.arity).rev() {
                tuple[k] = index % r + 1;
                index /= r;
            }
            tuple[0] = index;
        } else {
            for k in (0..self.arity).rev() {
                tuple[k] = index % self.d;
                index /= self.d;
            }
        }
        tuple
    }
}

/// Basis enumeration of cochain argument tuples: length-`len` tuples, all
/// slots interior in the normalized variant.
#[derive(Clone, Copy, Debug)]
pub struct ArgBasis {
    pub d: usize,
    pub len: usize,
    pub normalized: bool,
}

impl ArgBasis {
    pub fn dim(&self) -> usize {
        if self.normalized {
            (self.d - 1).pow(self.len as u32)
        } else {
            self.d.pow(self.len as u32)
        }
    }

    pub fn index_of(&self, tuple: &[usize]) -> Option<usize> {
        debug_assert_eq!(tuple.len(), self.len);
        let mut idx = 0;
        for &t in tuple {
            if self.normalized {
                if t == 0 {
                    return None;
                }
                idx = idx * (self.d - 1) + (t - 1);
            } else {
                idx = idx * self.d + t;
            }
        }
        Some(idx)
    }

    pub fn tuple_of(&self, mut index: usize) -> Vec<usize> {
        let mut tuple = vec![0usize; self.len];
        let r = if self.normalized { self.d - 1 } else { self.d };
        for k in (0..self.len).rev() {
            tuple[k] = index % r + usize::from(self.normalized);
            index /= r;
        }
        tuple
    }
}

/// Cochain indexing: a degree-`n` cochain basis element is a pair
/// `(argument tuple J, output basis vector l)` with combined index
/// `J_index * d + l`.
#[derive(Clone, Copy, Debug)]
pub struct CochainBasis {
    pub args: ArgBasis,
}

impl CochainBasis {
    pub fn new(d: usize, degree: usize, normalized: bool) -> Self {
        CochainBasis { args: ArgBasis { d, len: degree, normalized } }
    }

    pub fn dim(&self) -> usize {
        self.args.dim() * self.args.d
    }

    pub fn index_of(&self, args: &[usize], out: usize) -> Option<usize> {
        self.args.index_of(args).map(|j| j * self.args.d + out)
    }

    pub fn split(&self, index: usize) -> (Vec<usize>, usize) {
        (self.args.tuple_of(index / self.args.d), index % self.args.d)
    }
}

fn guard(dim: usize, max_dim: usize, what: &str) -> Result<()> {
    if dim > max_dim {
        return Err(Error::ResourceLimit(format!(
            "{what} has dimension {dim}, above the cap {max_dim}"
        )));
    }
    Ok(())
}

/// The Hochschild boundary `b: C_n -> C_{n-1}` in the lexicographic tensor
/// basis. For `n = 0` the zero map out of `C_0` is returned.
pub fn boundary_b(a: &Algebra, n: usize, normalized: bool) -> SparseMatrix {
    boundary_impl(a, n, normalized, true)
}

/// `b'`: the boundary without its cyclic term.
pub fn boundary_bprime(a: &Algebra, n: usize, normalized: bool) -> SparseMatrix {
    boundary_impl(a, n, normalized, false)
}

fn boundary_impl(a: &Algebra, n: usize, normalized: bool, cyclic_term: bool) -> SparseMatrix {
    let src = ChainBasis::new(a.dim, n, normalized);
    if n == 0 {
        return SparseMatrix::zero(0, src.dim(), a.field);
    }
    let dst = ChainBasis::new(a.dim, n - 1, normalized);
    let field = a.field;
    let columns: Vec<SparseVec> = par::map_indexed(src.dim(), |col| {
        let tuple = src.tuple_of(col);
        let mut entries: Vec<(usize, Scalar)> = Vec::new();
        let mut out = vec![0usize; n];
        for i in 0..n {
            // slots before i unchanged, product in slot i, tail shifted
            out[..i].copy_from_slice(&tuple[..i]);
            out[i..].copy_from_slice(&tuple[i + 1..]);
            let sign = i % 2 == 1;
            for (l, c) in a.basis_product(tuple[i], tuple[i + 1]) {
                out[i] = *l;
                if let Some(idx) = dst.index_of(&out) {
                    entries.push((idx, if sign { field.neg(c) } else { c.clone() }));
                }
            }
        }
        if cyclic_term {
            out[1..].copy_from_slice(&tuple[1..n]);
            let sign = n % 2 == 1;
            for (l, c) in a.basis_product(tuple[n], tuple[0]) {
                out[0] = *l;
                if let Some(idx) = dst.index_of(&out) {
                    entries.push((idx, if sign { field.neg(c) } else { c.clone() }));
                }
            }
        }
        SparseVec::from_entries(dst.dim(), entries, field)
    });
    SparseMatrix::from_columns(dst.dim(), &columns, field)
}

/// The signed cyclic permutation `t` on unnormalized `C_n`.
pub fn cyclic_t(a: &Algebra, n: usize) -> SparseMatrix {
    let basis = ChainBasis::new(a.dim, n, false);
    let field = a.field;
    let sign = n % 2 == 1;
    let columns: Vec<SparseVec> = par::map_indexed(basis.dim(), |col| {
        let tuple = basis.tuple_of(col);
        let mut out = Vec::with_capacity(n + 1);
        out.push(tuple[n]);
        out.extend_from_slice(&tuple[..n]);
        let idx = basis.index_of(&out).unwrap();
        let v = if sign { field.from_i64(-1) } else { field.one() };
        SparseVec::from_entries(basis.dim(), vec![(idx, v)], field)
    });
    SparseMatrix::from_columns(basis.dim(), &columns, field)
}

/// The norm operator `N = 1 + t + ... + t^n` on unnormalized `C_n`.
pub fn cyclic_norm(a: &Algebra, n: usize) -> SparseMatrix {
    let basis = ChainBasis::new(a.dim, n, false);
    let field = a.field;
    let columns: Vec<SparseVec> = par::map_indexed(basis.dim(), |col| {
        let mut entries = Vec::with_capacity(n + 1);
        let mut tuple = basis.tuple_of(col);
        let mut sign = false;
        for _ in 0..=n {
            entries.push((
                basis.index_of(&tuple).unwrap(),
                if sign { field.from_i64(-1) } else { field.one() },
            ));
            tuple.rotate_right(1);
            sign ^= n % 2 == 1;
        }
        SparseVec::from_entries(basis.dim(), entries, field)
    });
    SparseMatrix::from_columns(basis.dim(), &columns, field)
}

/// The extra degeneracy `s(a_0 ... a_n) = 1 (x) a_0 (x) ... (x) a_n` on the
/// unnormalized complex.
pub fn extra_degeneracy(a: &Algebra, n: usize) -> SparseMatrix {
    let src = ChainBasis::new(a.dim, n, false);
    let dst = ChainBasis::new(a.dim, n + 1, false);
    let field = a.field;
    let columns: Vec<SparseVec> = par::map_indexed(src.dim(), |col| {
        let tuple = src.tuple_of(col);
        let mut out = Vec::with_capacity(n + 2);
        out.push(0usize);
        out.extend_from_slice(&tuple);
        let mut entries = Vec::new();
        for (k, c) in a.unit.iter().enumerate() {
            if !c.is_zero() {
                out[0] = k;
                entries.push((dst.index_of(&out).unwrap(), c.clone()));
            }
        }
        SparseVec::from_entries(dst.dim(), entries, field)
    });
    SparseMatrix::from_columns(dst.dim(), &columns, field)
}

/// Connes' operator `B = (1 - t) s N` on the unnormalized complex.
pub fn connes_b_unnormalized(a: &Algebra, n: usize) -> SparseMatrix {
    let t = cyclic_t(a, n + 1);
    let one_minus_t = SparseMatrix::identity(t.rows, a.field).sub(&t);
    one_minus_t.mul(&extra_degeneracy(a, n)).mul(&cyclic_norm(a, n))
}

/// Connes' operator on the normalized complex:
/// `B(a_0 (x) v_1 (x) ... (x) v_n) = sum_i (-1)^{in} 1 (x) v_i (x) ... (x) v_n (x) v_0 (x) ... (x) v_{i-1}`,
/// with any term whose interior hits the unit direction dropped. The
/// algebra must be a unit-first model.
pub fn connes_b_normalized(a: &Algebra, n: usize) -> Result<SparseMatrix> {
    if !a.unit.iter().enumerate().all(|(i, c)| (i == 0) == c.is_one() && (i == 0 || c.is_zero())) {
        return Err(Error::Validation(
            "normalized Connes operator needs the unit-first basis".into(),
        ));
    }
    let src = ChainBasis::new(a.dim, n, true);
    let dst = ChainBasis::new(a.dim, n + 1, true);
    let field = a.field;
    let columns: Vec<SparseVec> = par::map_indexed(src.dim(), |col| {
        let tuple = src.tuple_of(col);
        let mut entries = Vec::new();
        let mut out = vec![0usize; n + 2];
        for i in 0..=n {
            // 1 (x) v_i ... v_n (x) v_0 ... v_{i-1}
            out[0] = 0;
            for (slot, k) in (i..=n).chain(0..i).enumerate() {
                out[slot + 1] = tuple[k];
            }
            if let Some(idx) = dst.index_of(&out) {
                let v =
                    if (i * n) % 2 == 1 { field.from_i64(-1) } else { field.one() };
                entries.push((idx, v));
            }
        }
        SparseVec::from_entries(dst.dim(), entries, field)
    });
    Ok(SparseMatrix::from_columns(dst.dim(), &columns, field))
}

/// The cochain differential `delta: C^n -> C^{n+1}` in the
/// `(arguments, output)` basis.
pub fn cochain_delta(a: &Algebra, n: usize, normalized: bool) -> SparseMatrix {
    let src = CochainBasis::new(a.dim, n, normalized);
    let dst = CochainBasis::new(a.dim, n + 1, normalized);
    let field = a.field;
    let interior_ok = |k: usize| !normalized || k != 0;
    let columns: Vec<SparseVec> = par::map_indexed(src.dim(), |col| {
        let (args, out) = src.split(col);
        let mut entries: Vec<(usize, Scalar)> = Vec::new();
        let mut k_tuple = vec![0usize; n + 1];
        // a_1 * f(a_2, ..., a_{n+1})
        k_tuple[1..].copy_from_slice(&args);
        for k in 0..a.dim {
            if !interior_ok(k) {
                continue;
            }
            k_tuple[0] = k;
            for (m, c) in a.basis_product(k, out) {
                if let Some(idx) = dst.index_of(&k_tuple, *m) {
                    entries.push((idx, c.clone()));
                }
            }
        }
        // interior contractions
        for i in 1..=n {
            let sign = i % 2 == 1;
            for (u, v, c) in a.products_with_target(args[i - 1]) {
                if !interior_ok(*u) || !interior_ok(*v) {
                    continue;
                }
                k_tuple[..i - 1].copy_from_slice(&args[..i - 1]);
                k_tuple[i - 1] = *u;
                k_tuple[i] = *v;
                k_tuple[i + 1..].copy_from_slice(&args[i..]);
                if let Some(idx) = dst.index_of(&k_tuple, out) {
                    entries.push((idx, if sign { field.neg(c) } else { c.clone() }));
                }
            }
        }
        // (-1)^{n+1} f(a_1, ..., a_n) * a_{n+1}
        let sign = (n + 1) % 2 == 1;
        k_tuple[..n].copy_from_slice(&args);
        for k in 0..a.dim {
            if !interior_ok(k) {
                continue;
            }
            k_tuple[n] = k;
            for (m, c) in a.basis_product(out, k) {
                if let Some(idx) = dst.index_of(&k_tuple, *m) {
                    entries.push((idx, if sign { field.neg(c) } else { c.clone() }));
                }
            }
        }
        SparseVec::from_entries(dst.dim(), entries, field)
    });
    SparseMatrix::from_columns(dst.dim(), &columns, field)
}

/// Projection from unnormalized chains in the original basis onto
/// normalized chains in the unit-first basis; a chain-level quasi-iso.
pub fn normalization_projection(model: &UnitFirstModel, n: usize) -> SparseMatrix {
    let a = &model.algebra;
    let field = a.field;
    let src = ChainBasis::new(a.dim, n, false);
    let dst = ChainBasis::new(a.dim, n, true);
    let e_in_f: Vec<SparseVec> = model.to_f.to_columns();
    let columns: Vec<SparseVec> = par::map_indexed(src.dim(), |col| {
        let tuple = src.tuple_of(col);
        // expand every slot through the basis change and drop killed tuples
        let mut terms: Vec<(Vec<usize>, Scalar)> = vec![(Vec::new(), field.one())];
        for (slot, &i) in tuple.iter().enumerate() {
            let mut next = Vec::new();
            for (prefix, coeff) in &terms {
                for (j, c) in &e_in_f[i].entries {
                    if slot > 0 && *j == 0 {
                        continue;
                    }
                    let mut p = prefix.clone();
                    p.push(*j);
                    next.push((p, field.mul(coeff, c)));
                }
            }
            terms = next;
        }
        let entries = terms
            .into_iter()
            .filter_map(|(t, c)| dst.index_of(&t).map(|idx| (idx, c)))
            .collect();
        SparseVec::from_entries(dst.dim(), entries, field)
    });
    SparseMatrix::from_columns(dst.dim(), &columns, field)
}

/// A materialized chain or cochain complex segment with its per-degree
/// reductions cached.
pub struct ComplexSlice {
    pub field: Field,
    pub dims: Vec<usize>,
    /// `maps[n]`: the differential out of degree `n` (towards `n-1` for
    /// chains, `n+1` for cochains).
    pub maps: Vec<SparseMatrix>,
    rrefs: Vec<Rref>,
    raising: bool,
}

impl ComplexSlice {
    fn new(field: Field, dims: Vec<usize>, maps: Vec<SparseMatrix>, raising: bool) -> Self {
        let rrefs = par::map_slice(&maps, |m| m.rref());
        ComplexSlice { field, dims, maps, rrefs, raising }
    }

    pub fn top(&self) -> usize {
        self.dims.len() - 1
    }

    /// Homology at degree `n`; both the out-map at `n` and the in-map must
    /// be materialized.
    pub fn homology_at(&self, n: usize) -> Result<HomologySpace> {
        let cycles = kernel_from_rref(&self.rrefs[n], self.dims[n], self.field);
        let in_deg = if self.raising {
            if n == 0 {
                None
            } else {
                Some(n - 1)
            }
        } else if n + 1 <= self.top() {
            Some(n + 1)
        } else {
            None
        };
        let boundaries = match in_deg {
            Some(m) => self.maps[m].image_basis_from(&self.rrefs[m]),
            None => Vec::new(),
        };
        subquotient(self.field, self.dims[n], n, &cycles, &boundaries)
    }

    pub fn homology_range(&self, upto: usize) -> Result<Vec<HomologySpace>> {
        (0..=upto).map(|n| self.homology_at(n)).collect()
    }

    /// `dim H_n` for every degree where both ranks are known, using only
    /// rank bookkeeping (no representatives).
    pub fn homology_dims(&self, upto: usize) -> Vec<usize> {
        (0..=upto)
            .map(|n| {
                let rank_out = self.rrefs[n].rank();
                let rank_in = if self.raising {
                    if n == 0 {
                        0
                    } else {
                        self.rrefs[n - 1].rank()
                    }
                } else if n + 1 <= self.top() {
                    self.rrefs[n + 1].rank()
                } else {
                    0
                };
                self.dims[n] - rank_out - rank_in
            })
            .collect()
    }
}

/// Builds the Hochschild chain complex through degree `top` (boundaries
/// `b_0..b_top` materialized).
pub fn chain_complex(
    a: &Algebra,
    top: usize,
    normalized: bool,
    max_dim: usize,
) -> Result<ComplexSlice> {
    let mut dims = Vec::new();
    for n in 0..=top {
        let dim = ChainBasis::new(a.dim, n, normalized).dim();
        guard(dim, max_dim, &format!("chain space C_{n}"))?;
        dims.push(dim);
    }
    let maps: Vec<SparseMatrix> =
        (0..=top).map(|n| boundary_b(a, n, normalized)).collect();
    Ok(ComplexSlice::new(a.field, dims, maps, false))
}

/// Builds the Hochschild cochain complex with `delta_0..delta_top`.
pub fn cochain_complex(
    a: &Algebra,
    top: usize,
    normalized: bool,
    max_dim: usize,
) -> Result<ComplexSlice> {
    let mut dims = Vec::new();
    for n in 0..=top {
        let dim = CochainBasis::new(a.dim, n, normalized).dim();
        guard(dim, max_dim, &format!("cochain space C^{n}"))?;
        dims.push(dim);
    }
    guard(
        CochainBasis::new(a.dim, top + 1, normalized).dim(),
        max_dim,
        &format!("cochain space C^{}", top + 1),
    )?;
    let maps: Vec<SparseMatrix> =
        (0..=top).map(|n| cochain_delta(a, n, normalized)).collect();
    Ok(ComplexSlice::new(a.field, dims, maps, true))
}

/// Hochschild homology through degree `max_degree`. For the normalized
/// variant the complex is built over the unit-first model.
pub fn hochschild_homology(
    a: &Algebra,
    max_degree: usize,
    normalized: bool,
    max_dim: usize,
) -> Result<Vec<HomologySpace>> {
    let slice = if normalized {
        let model = a.unit_first_model();
        chain_complex(&model.algebra, max_degree + 1, true, max_dim)?
    } else {
        chain_complex(a, max_degree + 1, false, max_dim)?
    };
    slice.homology_range(max_degree)
}

/// Hochschild cohomology through degree `max_degree`.
pub fn hochschild_cohomology(
    a: &Algebra,
    max_degree: usize,
    normalized: bool,
    max_dim: usize,
) -> Result<Vec<HomologySpace>> {
    let slice = if normalized {
        let model = a.unit_first_model();
        cochain_complex(&model.algebra, max_degree, true, max_dim)?
    } else {
        cochain_complex(a, max_degree, false, max_dim)?
    };
    slice.homology_range(max_degree)
}

/// Chain-level structural identities through degree `top`:
/// `b^2 = 0`, `b'^2 = 0`, `delta^2 = 0`, `t^{n+1} = 1`,
/// `(1-t) b' = b (1-t)`, `N b = b' N`, `B^2 = 0` and `bB + Bb = 0` on the
/// normalized complex. Exact matrix identities, one check per degree.
pub fn structural_report(a: &Algebra, top: usize, max_dim: usize) -> Result<Report> {
    let mut report = Report::new(format!("structural identities for {}", a.name));
    let field = a.field;
    for n in 0..=top {
        guard(ChainBasis::new(a.dim, n + 1, false).dim(), max_dim, "chain space")?;
    }
    let b: Vec<SparseMatrix> =
        (0..=top + 1).map(|n| boundary_b(a, n, false)).collect();
    let bp: Vec<SparseMatrix> =
        (0..=top + 1).map(|n| boundary_bprime(a, n, false)).collect();
    for n in 1..=top {
        report.push(Check::from_bool(
            format!("chain.b2.n{n}"),
            b[n].mul(&b[n + 1]).is_zero(),
            format!("b_{n} b_{} != 0", n + 1),
        ));
        report.push(Check::from_bool(
            format!("chain.bprime2.n{n}"),
            bp[n].mul(&bp[n + 1]).is_zero(),
            format!("b'_{n} b'_{} != 0", n + 1),
        ));
    }
    for n in 0..=top {
        let t = cyclic_t(a, n);
        let mut power = SparseMatrix::identity(t.rows, field);
        for _ in 0..=n {
            power = power.mul(&t);
        }
        report.push(Check::from_bool(
            format!("chain.t_order.n{n}"),
            power == SparseMatrix::identity(t.rows, field),
            format!("t^{} != 1 on C_{n}", n + 1),
        ));
    }
    // (1 - t) b' = b (1 - t) and N b = b' N, as maps C_{n+1} -> C_n
    let t: Vec<SparseMatrix> = (0..=top + 1).map(|n| cyclic_t(a, n)).collect();
    let norm: Vec<SparseMatrix> = (0..=top + 1).map(|n| cyclic_norm(a, n)).collect();
    for n in 0..top {
        let one_minus_t_lo = SparseMatrix::identity(t[n].rows, field).sub(&t[n]);
        let one_minus_t_hi = SparseMatrix::identity(t[n + 1].rows, field).sub(&t[n + 1]);
        report.push(Check::from_bool(
            format!("chain.cone_comm.n{n}"),
            one_minus_t_lo.mul(&bp[n + 1]) == b[n + 1].mul(&one_minus_t_hi),
            format!("(1-t) b' != b (1-t) out of C_{}", n + 1),
        ));
        report.push(Check::from_bool(
            format!("chain.norm_comm.n{n}"),
            norm[n].mul(&b[n + 1]) == bp[n + 1].mul(&norm[n + 1]),
            format!("N b != b' N out of C_{}", n + 1),
        ));
    }
    // normalized model: B^2 = 0, bB + Bb = 0
    let model = a.unit_first_model();
    let m = &model.algebra;
    let bn: Vec<SparseMatrix> =
        (0..=top + 1).map(|n| boundary_b(m, n, true)).collect();
    let cb: Vec<SparseMatrix> = (0..=top + 1)
        .map(|n| connes_b_normalized(m, n))
        .collect::<Result<_>>()?;
    for n in 0..=top {
        report.push(Check::from_bool(
            format!("chain.B2.n{n}"),
            cb[n + 1].mul(&cb[n]).is_zero(),
            format!("B^2 != 0 on normalized C_{n}"),
        ));
        let mut anti = bn[n + 1].mul(&cb[n]);
        if n > 0 {
            anti = anti.add(&cb[n - 1].mul(&bn[n]));
        }
        report.push(Check::from_bool(
            format!("chain.bB_anti.n{n}"),
            anti.is_zero(),
            format!("bB + Bb != 0 on normalized C_{n}"),
        ));
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra;

    const CAP: usize = DEFAULT_MAX_CHAIN_DIM;

    fn q() -> Field {
        Field::Q
    }

    #[test]
    fn chain_basis_roundtrip() {
        let basis = ChainBasis::new(3, 2, false);
        for i in 0..basis.dim() {
            assert_eq!(basis.index_of(&basis.tuple_of(i)), Some(i));
        }
        let norm = ChainBasis::new(3, 2, true);
        assert_eq!(norm.dim(), 3 * 2 * 2);
        for i in 0..norm.dim() {
            assert_eq!(norm.index_of(&norm.tuple_of(i)), Some(i));
        }
        assert_eq!(norm.index_of(&[1, 0, 1]), None);
    }

    #[test]
    fn boundary_on_dual_numbers_degree_one_vanishes() {
        // commutative algebra: b(a (x) a') = aa' - a'a = 0
        let a = algebra::dual_numbers(q());
        assert!(boundary_b(&a, 1, false).is_zero());
    }

    #[test]
    fn boundary_on_dual_numbers_degree_two() {
        // b(1 (x) x (x) x) = x (x) x - 1 (x) x^2 + x (x) x = 2 (x (x) x)
        let a = algebra::dual_numbers(q());
        let b2 = boundary_b(&a, 2, false);
        let basis3 = ChainBasis::new(2, 2, false);
        let basis2 = ChainBasis::new(2, 1, false);
        let col = b2.column(basis3.index_of(&[0, 1, 1]).unwrap());
        let expected = SparseVec::from_entries(
            4,
            vec![(basis2.index_of(&[1, 1]).unwrap(), q().from_i64(2))],
            q(),
        );
        assert_eq!(col, expected);
    }

    #[test]
    fn bprime_drops_the_cyclic_term() {
        let a = algebra::dual_numbers(q());
        // b'(u (x) v) = uv; on x (x) x that is 0, on 1 (x) x it is x
        let bp1 = boundary_bprime(&a, 1, false);
        let basis1 = ChainBasis::new(2, 1, false);
        assert!(bp1.column(basis1.index_of(&[1, 1]).unwrap()).is_zero());
        let col = bp1.column(basis1.index_of(&[0, 1]).unwrap());
        assert_eq!(col, SparseVec::from_entries(2, vec![(1, q().one())], q()));
        // b'(1 (x) x (x) x) = x (x) x
        let bp2 = boundary_bprime(&a, 2, false);
        let basis2 = ChainBasis::new(2, 2, false);
        let col = bp2.column(basis2.index_of(&[0, 1, 1]).unwrap());
        assert_eq!(
            col,
            SparseVec::from_entries(4, vec![(basis1.index_of(&[1, 1]).unwrap(), q().one())], q())
        );
    }

    #[test]
    fn cyclic_operators_small_cases() {
        let a = algebra::dual_numbers(q());
        // n = 0: t = N = identity
        assert_eq!(cyclic_t(&a, 0), SparseMatrix::identity(2, q()));
        assert_eq!(cyclic_norm(&a, 0), SparseMatrix::identity(2, q()));
        // n = 1: t(x (x) 1) = -(1 (x) x); N = 1 + t
        let t = cyclic_t(&a, 1);
        let basis = ChainBasis::new(2, 1, false);
        let x1 = basis.index_of(&[1, 0]).unwrap();
        let ox = basis.index_of(&[0, 1]).unwrap();
        assert_eq!(
            t.column(x1),
            SparseVec::from_entries(4, vec![(ox, q().from_i64(-1))], q())
        );
        let n_op = cyclic_norm(&a, 1);
        let expected = SparseVec::from_entries(
            4,
            vec![(x1, q().one()), (ox, q().from_i64(-1))],
            q(),
        );
        assert_eq!(n_op.column(x1), expected);
    }

    #[test]
    fn delta_degree_zero_on_commutative_is_zero() {
        let a = algebra::dual_numbers(q());
        assert!(cochain_delta(&a, 0, false).is_zero());
    }

    #[test]
    fn delta_degree_zero_detects_noncentral_elements() {
        // T_2: (delta e11)(e12) = e12 e11 - e11 e12 = -e12
        let a = algebra::upper_triangular(q(), 2);
        let d0 = cochain_delta(&a, 0, false);
        let dst = CochainBasis::new(3, 1, false);
        let col = d0.column(0); // e11 as a 0-cochain
        let at = dst.index_of(&[1], 1).unwrap(); // argument e12, output e12
        assert_eq!(col.get(at), Some(&q().from_i64(-1)));
    }

    #[test]
    fn delta_of_identity_cochain_is_multiplication() {
        // (delta id)(u, v) = u v for every algebra
        let a = algebra::upper_triangular(q(), 2);
        let src = CochainBasis::new(a.dim, 1, false);
        let mut id_entries = Vec::new();
        for i in 0..a.dim {
            id_entries.push((src.index_of(&[i], i).unwrap(), q().one()));
        }
        let id_cochain = SparseVec::from_entries(src.dim(), id_entries, q());
        let image = cochain_delta(&a, 1, false).apply(&id_cochain);
        let dst = CochainBasis::new(a.dim, 2, false);
        let mut expected = Vec::new();
        for u in 0..a.dim {
            for v in 0..a.dim {
                for (l, c) in a.basis_product(u, v) {
                    expected.push((dst.index_of(&[u, v], *l).unwrap(), c.clone()));
                }
            }
        }
        assert_eq!(image, SparseVec::from_entries(dst.dim(), expected, q()));
    }

    #[test]
    fn connes_b_small_values() {
        let a = algebra::dual_numbers(q());
        let model = a.unit_first_model();
        let m = &model.algebra;
        // B(x) = 1 (x) x, B(1) = 0
        let b0 = connes_b_normalized(m, 0).unwrap();
        let c1 = ChainBasis::new(2, 1, true);
        assert_eq!(
            b0.column(1),
            SparseVec::from_entries(c1.dim(), vec![(c1.index_of(&[0, 1]).unwrap(), q().one())], q())
        );
        assert!(b0.column(0).is_zero());
        // B(x (x) x) = 1 (x) x (x) x - 1 (x) x (x) x = 0
        let b1 = connes_b_normalized(m, 1).unwrap();
        let idx = c1.index_of(&[1, 1]).unwrap();
        assert!(b1.column(idx).is_zero());
    }

    #[test]
    fn connes_b_requires_unit_first_basis() {
        let a = algebra::kxk(q());
        assert!(connes_b_normalized(&a, 0).is_err());
    }

    #[test]
    fn ground_field_homology_dims() {
        let a = algebra::ground_field(q());
        let h = hochschild_homology(&a, 3, false, CAP).unwrap();
        assert_eq!(h.iter().map(|s| s.dim).collect::<Vec<_>>(), vec![1, 0, 0, 0]);
        let hc = hochschild_cohomology(&a, 3, false, CAP).unwrap();
        assert_eq!(hc.iter().map(|s| s.dim).collect::<Vec<_>>(), vec![1, 0, 0, 0]);
    }

    #[test]
    fn dual_numbers_homology_dims() {
        let a = algebra::dual_numbers(q());
        for normalized in [false, true] {
            let h = hochschild_homology(&a, 4, normalized, CAP).unwrap();
            assert_eq!(
                h.iter().map(|s| s.dim).collect::<Vec<_>>(),
                vec![2, 1, 1, 1, 1],
                "normalized={normalized}"
            );
        }
    }

    #[test]
    fn dual_numbers_cohomology_dims() {
        let a = algebra::dual_numbers(q());
        for normalized in [false, true] {
            let h = hochschild_cohomology(&a, 2, normalized, CAP).unwrap();
            assert_eq!(
                h.iter().map(|s| s.dim).collect::<Vec<_>>(),
                vec![2, 1, 1],
                "normalized={normalized}"
            );
        }
    }

    #[test]
    fn separable_and_hereditary_examples() {
        let h = hochschild_homology(&algebra::kxk(q()), 3, false, CAP).unwrap();
        assert_eq!(h.iter().map(|s| s.dim).collect::<Vec<_>>(), vec![2, 0, 0, 0]);
        let h = hochschild_cohomology(&algebra::upper_triangular(q(), 2), 2, false, CAP).unwrap();
        assert_eq!(h.iter().map(|s| s.dim).collect::<Vec<_>>(), vec![1, 0, 0]);
    }

    #[test]
    fn hh0_matches_commutator_rank() {
        for a in [
            algebra::dual_numbers(q()),
            algebra::kxk(q()),
            algebra::upper_triangular(q(), 2),
            algebra::matrix_algebra(q(), 2),
            algebra::a3_linear(q()),
        ] {
            let h0 = hochschild_homology(&a, 0, false, CAP).unwrap()[0].dim;
            // independent route: d - rank of the commutator span
            let mut comms = Vec::new();
            for i in 0..a.dim {
                for j in 0..a.dim {
                    let ij = a.multiply(&a.basis_element(i), &a.basis_element(j)).unwrap();
                    let ji = a.multiply(&a.basis_element(j), &a.basis_element(i)).unwrap();
                    let diff: Vec<Scalar> =
                        ij.iter().zip(&ji).map(|(x, y)| q().sub(x, y)).collect();
                    comms.push(SparseVec::from_dense(&diff));
                }
            }
            let rank = SparseMatrix::from_columns(a.dim, &comms, q()).rank();
            assert_eq!(h0, a.dim - rank, "{}", a.name);
        }
    }

    #[test]
    fn hh0_cohomology_is_the_center() {
        for a in [
            algebra::dual_numbers(q()),
            algebra::matrix_algebra(q(), 2),
            algebra::a3_linear(q()),
        ] {
            let h0 = hochschild_cohomology(&a, 0, false, CAP).unwrap()[0].dim;
            // center = kernel of z -> (z e_j - e_j z for every j), solved
            // directly as a linear system in the coordinates of z
            let mut triplets = Vec::new();
            for j in 0..a.dim {
                for i in 0..a.dim {
                    for (l, c) in a.basis_product(i, j) {
                        triplets.push((j * a.dim + l, i, c.clone()));
                    }
                    for (l, c) in a.basis_product(j, i) {
                        triplets.push((j * a.dim + l, i, q().neg(c)));
                    }
                }
            }
            let m = SparseMatrix::from_triplets(a.dim * a.dim, a.dim, q(), triplets);
            let center_dim = m.kernel_basis().len();
            assert_eq!(h0, center_dim, "{}", a.name);
        }
    }

    #[test]
    fn structural_identities_dual_numbers() {
        let report = structural_report(&algebra::dual_numbers(q()), 4, CAP).unwrap();
        assert!(report.passed(), "{}", report.render_table());
    }

    #[test]
    fn resource_guard_triggers() {
        let a = algebra::matrix_algebra(q(), 2);
        assert!(matches!(
            chain_complex(&a, 5, false, 1000),
            Err(Error::ResourceLimit(_))
        ));
    }

    #[test]
    fn normalization_projection_is_a_chain_map() {
        let a = algebra::kxk(q());
        let model = a.unit_first_model();
        for n in 1..=3 {
            let pi_n = normalization_projection(&model, n);
            let pi_prev = normalization_projection(&model, n - 1);
            let b_un = boundary_b(&a, n, false);
            let b_norm = boundary_b(&model.algebra, n, true);
            assert_eq!(pi_prev.mul(&b_un), b_norm.mul(&pi_n), "degree {n}");
        }
    }
}
