//! Finite-dimensional associative unital algebras given by structure
//! constants, plus the bundled example families.
//!
//! Elements are always coefficient vectors in the fixed basis; there are no
//! symbolic expressions. Path algebras use left-to-right composition:
//! `p * q` is "first travel `p`, then `q`", defined when the target of `p`
//! is the source of `q`. Only monomial relations are supported, so the
//! admissible-path basis is computed by subpath exclusion.

use crate::scalar::{Field, Scalar};
use crate::sparse::{SparseMatrix, SparseVec};
use crate::{Check, Error, Report, Result};
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, HashMap};

#[derive(Clone, Debug)]
pub struct Algebra {
    pub name: String,
    pub field: Field,
    pub dim: usize,
    pub basis: Vec<String>,
    /// Unit as a dense coefficient vector of length `dim`.
    pub unit: Vec<Scalar>,
    /// Structure constants: `(i, j) -> [(l, c)]` meaning `e_i e_j = sum c e_l`.
    mult: BTreeMap<(usize, usize), Vec<(usize, Scalar)>>,
    /// Reverse index: for each target `l`, the `(i, j, c)` with `c_{ij}^l = c`.
    rev: Vec<Vec<(usize, usize, Scalar)>>,
    /// Optional pairwise-orthogonal idempotent family summing to the unit.
    pub idempotents: Option<Vec<Vec<Scalar>>>,
}

impl Algebra {
    pub fn new(
        name: impl Into<String>,
        field: Field,
        dim: usize,
        basis: Vec<String>,
        unit: Vec<Scalar>,
        mult_triplets: Vec<(usize, usize, usize, Scalar)>,
        idempotents: Option<Vec<Vec<Scalar>>>,
    ) -> Result<Algebra> {
        if basis.len() != dim {
            return Err(Error::Dimension(format!(
                "{} basis labels for dimension {dim}",
                basis.len()
            )));
        }
        if unit.len() != dim {
            return Err(Error::Dimension(format!(
                "unit vector has length {} but dimension is {dim}",
                unit.len()
            )));
        }
        let mut mult: BTreeMap<(usize, usize), Vec<(usize, Scalar)>> = BTreeMap::new();
        for (i, j, l, c) in mult_triplets {
            if i >= dim || j >= dim || l >= dim {
                return Err(Error::Dimension(format!(
                    "structure constant ({i},{j},{l}) out of range for dimension {dim}"
                )));
            }
            if c.is_zero() {
                continue;
            }
            mult.entry((i, j)).or_default().push((l, c));
        }
        for row in mult.values_mut() {
            row.sort_by_key(|e| e.0);
            let mut merged: Vec<(usize, Scalar)> = Vec::with_capacity(row.len());
            for (l, c) in row.drain(..) {
                match merged.last_mut() {
                    Some((pl, acc)) if *pl == l => *acc = field.add(acc, &c),
                    _ => merged.push((l, c)),
                }
            }
            merged.retain(|(_, c)| !c.is_zero());
            *row = merged;
        }
        mult.retain(|_, row| !row.is_empty());
        if let Some(idems) = &idempotents {
            for (k, u) in idems.iter().enumerate() {
                if u.len() != dim {
                    return Err(Error::Dimension(format!(
                        "idempotent {k} has length {} but dimension is {dim}",
                        u.len()
                    )));
                }
            }
        }
        let mut rev = vec![Vec::new(); dim];
        for ((i, j), row) in &mult {
            for (l, c) in row {
                rev[*l].push((*i, *j, c.clone()));
            }
        }
        Ok(Algebra { name: name.into(), field, dim, basis, unit, mult, rev, idempotents })
    }

    /// `e_i * e_j` as structure-constant support.
    pub fn basis_product(&self, i: usize, j: usize) -> &[(usize, Scalar)] {
        self.mult.get(&(i, j)).map(|v| v.as_slice()).unwrap_or(&[])
    }

    /// All `(i, j, c)` with `e_i e_j` having coefficient `c` along `e_l`.
    pub fn products_with_target(&self, l: usize) -> &[(usize, usize, Scalar)] {
        &self.rev[l]
    }

    /// Bilinear product of coefficient vectors.
    pub fn multiply(&self, u: &[Scalar], v: &[Scalar]) -> Result<Vec<Scalar>> {
        if u.len() != self.dim || v.len() != self.dim {
            return Err(Error::Dimension(format!(
                "element lengths {} and {} do not match dimension {}",
                u.len(),
                v.len(),
                self.dim
            )));
        }
        let f = self.field;
        let mut out = vec![f.zero(); self.dim];
        for (i, ui) in u.iter().enumerate() {
            if ui.is_zero() {
                continue;
            }
            for (j, vj) in v.iter().enumerate() {
                if vj.is_zero() {
                    continue;
                }
                let coeff = f.mul(ui, vj);
                for (l, c) in self.basis_product(i, j) {
                    f.add_mul(&mut out[*l], c, &coeff);
                }
            }
        }
        Ok(out)
    }

    pub fn zero_element(&self) -> Vec<Scalar> {
        vec![self.field.zero(); self.dim]
    }

    pub fn basis_element(&self, i: usize) -> Vec<Scalar> {
        let mut v = self.zero_element();
        v[i] = self.field.one();
        v
    }

    pub fn add_elements(&self, u: &[Scalar], v: &[Scalar]) -> Vec<Scalar> {
        u.iter().zip(v).map(|(a, b)| self.field.add(a, b)).collect()
    }

    pub fn scale_element(&self, u: &[Scalar], c: &Scalar) -> Vec<Scalar> {
        u.iter().map(|a| self.field.mul(a, c)).collect()
    }

    /// Checks every axiom and reports each violation with a witness.
    pub fn validate(&self) -> Report {
        let mut report = Report::new(format!("algebra {}", self.name));
        // associativity on all basis triples
        for i in 0..self.dim {
            for j in 0..self.dim {
                let ij = self.multiply(&self.basis_element(i), &self.basis_element(j)).unwrap();
                for l in 0..self.dim {
                    let left = self.multiply(&ij, &self.basis_element(l)).unwrap();
                    let jl = self
                        .multiply(&self.basis_element(j), &self.basis_element(l))
                        .unwrap();
                    let right = self.multiply(&self.basis_element(i), &jl).unwrap();
                    if left != right {
                        report.push(Check::fail(
                            format!("alg.assoc.{i}.{j}.{l}"),
                            format!(
                                "({bi}*{bj})*{bl} = {lhs} but {bi}*({bj}*{bl}) = {rhs}",
                                bi = self.basis[i],
                                bj = self.basis[j],
                                bl = self.basis[l],
                                lhs = self.render_element(&left),
                                rhs = self.render_element(&right),
                            ),
                        ));
                    }
                }
            }
        }
        // two-sided unit
        for i in 0..self.dim {
            let e = self.basis_element(i);
            let left = self.multiply(&self.unit, &e).unwrap();
            if left != e {
                report.push(Check::fail(
                    format!("alg.unit.left.{i}"),
                    format!("1*{} = {}", self.basis[i], self.render_element(&left)),
                ));
            }
            let right = self.multiply(&e, &self.unit).unwrap();
            if right != e {
                report.push(Check::fail(
                    format!("alg.unit.right.{i}"),
                    format!("{}*1 = {}", self.basis[i], self.render_element(&right)),
                ));
            }
        }
        // declared idempotents: orthogonality and completeness
        if let Some(idems) = &self.idempotents {
            for a in 0..idems.len() {
                for b in 0..idems.len() {
                    let prod = self.multiply(&idems[a], &idems[b]).unwrap();
                    let expected =
                        if a == b { idems[a].clone() } else { self.zero_element() };
                    if prod != expected {
                        report.push(Check::fail(
                            format!("alg.idem.orth.{a}.{b}"),
                            format!("u_{a} u_{b} = {}", self.render_element(&prod)),
                        ));
                    }
                }
            }
            let mut sum = self.zero_element();
            for u in idems {
                sum = self.add_elements(&sum, u);
            }
            if sum != self.unit {
                report.push(Check::fail(
                    "alg.idem.sum",
                    format!("sum of idempotents = {} != unit", self.render_element(&sum)),
                ));
            }
        }
        if report.checks.is_empty() {
            report.push(Check::pass("alg.valid"));
        }
        report
    }

    pub fn render_element(&self, u: &[Scalar]) -> String {
        let mut parts = Vec::new();
        for (i, c) in u.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if c.is_one() {
                parts.push(self.basis[i].clone());
            } else {
                parts.push(format!("{}*{}", self.field.render(c), self.basis[i]));
            }
        }
        if parts.is_empty() {
            "0".into()
        } else {
            parts.join(" + ")
        }
    }

    /// The opposite algebra: same basis, `c'[i][j] = c[j][i]`.
    pub fn opposite(&self) -> Algebra {
        let mut triplets = Vec::new();
        for ((i, j), row) in &self.mult {
            for (l, c) in row {
                triplets.push((*j, *i, *l, c.clone()));
            }
        }
        Algebra::new(
            format!("{}^op", self.name),
            self.field,
            self.dim,
            self.basis.clone(),
            self.unit.clone(),
            triplets,
            self.idempotents.clone(),
        )
        .expect("opposite of a well-formed algebra is well-formed")
    }

    /// Change of basis making basis vector 0 the unit; the tail of the new
    /// basis is a greedy completion by standard basis vectors, so labels stay
    /// meaningful. Used by the normalized chain model and Connes operator.
    pub fn unit_first_model(&self) -> UnitFirstModel {
        let f = self.field;
        let d = self.dim;
        // greedy column selection: unit, then independent standard vectors
        let mut cols: Vec<Vec<Scalar>> = vec![self.unit.clone()];
        let mut labels = vec!["1".to_string()];
        let mut work: Vec<Vec<Scalar>> = vec![self.unit.clone()];
        for i in 0..d {
            if cols.len() == d {
                break;
            }
            let cand = self.basis_element(i);
            let mut trial = work.clone();
            trial.push(cand.clone());
            if dense_rank(&trial, f) > work.len() {
                work.push(cand.clone());
                cols.push(cand);
                labels.push(self.basis[i].clone());
            }
        }
        assert_eq!(cols.len(), d, "unit completes to a basis over a field");
        // from_f: columns are the f-basis vectors in e-coordinates
        let from_f_cols: Vec<SparseVec> = cols.iter().map(|c| SparseVec::from_dense(c)).collect();
        let from_f = SparseMatrix::from_columns(d, &from_f_cols, f);
        let to_f = invert_dense(&cols, f);
        // conjugated structure constants
        let mut triplets = Vec::new();
        for i in 0..d {
            for j in 0..d {
                let prod = self.multiply(&cols[i], &cols[j]).unwrap();
                let in_f = to_f.apply(&SparseVec::from_dense(&prod));
                for (l, c) in &in_f.entries {
                    triplets.push((i, j, *l, c.clone()));
                }
            }
        }
        let mut unit = vec![f.zero(); d];
        unit[0] = f.one();
        let algebra = Algebra::new(
            format!("{} (unit-first)", self.name),
            f,
            d,
            labels,
            unit,
            triplets,
            None,
        )
        .expect("conjugated algebra is well-formed");
        UnitFirstModel { algebra, to_f, from_f }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_doc()).expect("algebra serialization cannot fail")
    }

    pub fn from_json(s: &str) -> Result<Algebra> {
        let doc: AlgebraDoc =
            serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
        Algebra::from_doc(doc, None)
    }

    /// Parses a JSON document, reinterpreting all scalars in `field` when an
    /// override is given.
    pub fn from_json_with_field(s: &str, field: Option<Field>) -> Result<Algebra> {
        let doc: AlgebraDoc =
            serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
        Algebra::from_doc(doc, field)
    }

    fn to_doc(&self) -> AlgebraDoc {
        let f = self.field;
        let mut mult = Vec::new();
        for ((i, j), row) in &self.mult {
            for (l, c) in row {
                mult.push((*i, *j, *l, f.render(c)));
            }
        }
        AlgebraDoc {
            name: self.name.clone(),
            field: self.field,
            dim: self.dim,
            basis: self.basis.clone(),
            unit: self.unit.iter().map(|c| f.render(c)).collect(),
            mult,
            idempotents: self
                .idempotents
                .as_ref()
                .map(|us| us.iter().map(|u| u.iter().map(|c| f.render(c)).collect()).collect()),
        }
    }

    fn from_doc(doc: AlgebraDoc, field_override: Option<Field>) -> Result<Algebra> {
        let field = field_override.unwrap_or(doc.field);
        if let Field::Fp { p } = field {
            Field::prime(p)?;
        }
        let parse_vec = |v: &[String]| -> Result<Vec<Scalar>> {
            v.iter().map(|s| field.parse(s)).collect()
        };
        let unit = parse_vec(&doc.unit)?;
        let mut triplets = Vec::new();
        for (i, j, l, c) in &doc.mult {
            triplets.push((*i, *j, *l, field.parse(c)?));
        }
        let idempotents = match &doc.idempotents {
            Some(us) => Some(us.iter().map(|u| parse_vec(u)).collect::<Result<Vec<_>>>()?),
            None => None,
        };
        Algebra::new(doc.name, field, doc.dim, doc.basis, unit, triplets, idempotents)
    }
}

/// Serialized form; all scalars travel as decimal or `a/b` fraction strings.
#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct AlgebraDoc {
    name: String,
    field: Field,
    dim: usize,
    basis: Vec<String>,
    unit: Vec<String>,
    mult: Vec<(usize, usize, usize, String)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    idempotents: Option<Vec<Vec<String>>>,
}

/// Result of [`Algebra::unit_first_model`].
pub struct UnitFirstModel {
    pub algebra: Algebra,
    /// Original coordinates -> unit-first coordinates.
    pub to_f: SparseMatrix,
    /// Unit-first coordinates -> original coordinates.
    pub from_f: SparseMatrix,
}

fn dense_rank(cols: &[Vec<Scalar>], field: Field) -> usize {
    if cols.is_empty() {
        return 0;
    }
    SparseMatrix::from_columns(
        cols[0].len(),
        &cols.iter().map(|c| SparseVec::from_dense(c)).collect::<Vec<_>>(),
        field,
    )
    .rank()
}

fn invert_dense(cols: &[Vec<Scalar>], field: Field) -> SparseMatrix {
    let d = cols.len();
    let m = SparseMatrix::from_columns(
        d,
        &cols.iter().map(|c| SparseVec::from_dense(c)).collect::<Vec<_>>(),
        field,
    );
    let units: Vec<SparseVec> = (0..d).map(|i| SparseVec::unit(d, i, field)).collect();
    let sols = m.solve_multi(&units).expect("basis matrix is invertible");
    SparseMatrix::from_columns(d, &sols, field)
}

// ---------------------------------------------------------------------------
// quivers and path algebras
// ---------------------------------------------------------------------------

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Arrow {
    pub source: usize,
    pub target: usize,
    pub label: String,
}

/// A finite quiver with monomial relations (each a composable arrow
/// sequence, left-to-right).
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Quiver {
    pub vertices: usize,
    pub arrows: Vec<Arrow>,
    pub relations: Vec<Vec<usize>>,
}

impl Quiver {
    pub fn new(
        vertices: usize,
        arrows: Vec<(usize, usize, &str)>,
        relations: Vec<Vec<usize>>,
    ) -> Result<Quiver> {
        let arrows: Vec<Arrow> = arrows
            .into_iter()
            .map(|(source, target, label)| Arrow { source, target, label: label.into() })
            .collect();
        for (k, a) in arrows.iter().enumerate() {
            if a.source >= vertices || a.target >= vertices {
                return Err(Error::Dimension(format!(
                    "arrow {k} has endpoints outside 0..{vertices}"
                )));
            }
        }
        for (k, rel) in relations.iter().enumerate() {
            if rel.is_empty() {
                return Err(Error::Validation(format!("relation {k} is empty")));
            }
            for w in rel.windows(2) {
                if w[0] >= arrows.len()
                    || w[1] >= arrows.len()
                    || arrows[w[0]].target != arrows[w[1]].source
                {
                    return Err(Error::Validation(format!("relation {k} is not composable")));
                }
            }
            if rel[0] >= arrows.len() {
                return Err(Error::Validation(format!("relation {k} names a missing arrow")));
            }
        }
        Ok(Quiver { vertices, arrows, relations })
    }
}

/// A path: starting vertex plus arrow sequence (empty = trivial path).
#[derive(Clone, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
struct Path {
    source: usize,
    arrows: Vec<usize>,
}

impl Path {
    fn target(&self, q: &Quiver) -> usize {
        self.arrows.last().map(|&a| q.arrows[a].target).unwrap_or(self.source)
    }
}

// ---------------------------------------------------------------------------
// bundled families
// ---------------------------------------------------------------------------

pub fn ground_field(field: Field) -> Algebra {
    Algebra::new(
        "k",
        field,
        1,
        vec!["1".into()],
        vec![field.one()],
        vec![(0, 0, 0, field.one())],
        None,
    )
    .unwrap()
}

/// `k[x]/(x^n)`.
pub fn truncated_poly(field: Field, n: usize) -> Algebra {
    assert!(n >= 1);
    let basis: Vec<String> = (0..n)
        .map(|i| match i {
            0 => "1".into(),
            1 => "x".into(),
            _ => format!("x^{i}"),
        })
        .collect();
    let mut unit = vec![field.zero(); n];
    unit[0] = field.one();
    let mut triplets = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if i + j < n {
                triplets.push((i, j, i + j, field.one()));
            }
        }
    }
    let name = if n == 2 { "dual_numbers".to_string() } else { format!("k[x]/(x^{n})") };
    Algebra::new(name, field, n, basis, unit, triplets, None).unwrap()
}

pub fn dual_numbers(field: Field) -> Algebra {
    truncated_poly(field, 2)
}

/// Direct product of algebras, with the block units as idempotents.
pub fn product(name: impl Into<String>, factors: &[Algebra]) -> Result<Algebra> {
    let field = factors.first().map(|a| a.field).unwrap_or(Field::Q);
    for a in factors {
        if a.field != field {
            return Err(Error::FieldMismatch(field, a.field));
        }
    }
    let dim: usize = factors.iter().map(|a| a.dim).sum();
    let mut basis = Vec::new();
    let mut unit = vec![field.zero(); dim];
    let mut triplets = Vec::new();
    let mut idempotents = Vec::new();
    let mut offset = 0;
    for (k, a) in factors.iter().enumerate() {
        for (i, label) in a.basis.iter().enumerate() {
            basis.push(format!("{label}_{}", k + 1));
            unit[offset + i] = a.unit[i].clone();
        }
        let mut idem = vec![field.zero(); dim];
        for (i, c) in a.unit.iter().enumerate() {
            idem[offset + i] = c.clone();
        }
        idempotents.push(idem);
        for i in 0..a.dim {
            for j in 0..a.dim {
                for (l, c) in a.basis_product(i, j) {
                    triplets.push((offset + i, offset + j, offset + l, c.clone()));
                }
            }
        }
        offset += a.dim;
    }
    Algebra::new(name, field, dim, basis, unit, triplets, Some(idempotents))
}

/// The full matrix algebra `M_n(k)` on the matrix-unit basis.
pub fn matrix_algebra(field: Field, n: usize) -> Algebra {
    let dim = n * n;
    let idx = |i: usize, j: usize| i * n + j;
    let basis: Vec<String> = (0..n)
        .flat_map(|i| (0..n).map(move |j| format!("e{}{}", i + 1, j + 1)))
        .collect();
    let mut unit = vec![field.zero(); dim];
    let mut idempotents = Vec::new();
    for i in 0..n {
        unit[idx(i, i)] = field.one();
        let mut u = vec![field.zero(); dim];
        u[idx(i, i)] = field.one();
        idempotents.push(u);
    }
    let mut triplets = Vec::new();
    for i in 0..n {
        for j in 0..n {
            for l in 0..n {
                // e_{ij} e_{jl} = e_{il}
                triplets.push((idx(i, j), idx(j, l), idx(i, l), field.one()));
            }
        }
    }
    Algebra::new(format!("M_{n}(k)"), field, dim, basis, unit, triplets, Some(idempotents))
        .unwrap()
}

/// Upper-triangular `n x n` matrices.
pub fn upper_triangular(field: Field, n: usize) -> Algebra {
    let pairs: Vec<(usize, usize)> =
        (0..n).flat_map(|i| (i..n).map(move |j| (i, j))).collect();
    let index: HashMap<(usize, usize), usize> =
        pairs.iter().enumerate().map(|(k, &p)| (p, k)).collect();
    let dim = pairs.len();
    let basis: Vec<String> = pairs.iter().map(|&(i, j)| format!("e{}{}", i + 1, j + 1)).collect();
    let mut unit = vec![field.zero(); dim];
    let mut idempotents = Vec::new();
    for i in 0..n {
        let k = index[&(i, i)];
        unit[k] = field.one();
        let mut u = vec![field.zero(); dim];
        u[k] = field.one();
        idempotents.push(u);
    }
    let mut triplets = Vec::new();
    for &(i, j) in &pairs {
        for l in j..n {
            triplets.push((index[&(i, j)], index[&(j, l)], index[&(i, l)], field.one()));
        }
    }
    Algebra::new(format!("T_{n}(k)"), field, dim, basis, unit, triplets, Some(idempotents))
        .unwrap()
}

/// Path algebra of a quiver with monomial relations. The basis consists of
/// all paths containing no relation as a contiguous subpath: trivial paths
/// first, then by (length, arrow sequence). Errors when that set is
/// infinite.
pub fn path_algebra(field: Field, name: impl Into<String>, quiver: &Quiver) -> Result<Algebra> {
    let rel_len: usize = quiver.relations.iter().map(|r| r.len()).sum();
    // pumping bound for the factor-avoiding path language
    let max_len = quiver.vertices * (rel_len + 1) + 1;

    let is_admissible_extension = |path: &Path, arrow: usize| -> bool {
        for rel in &quiver.relations {
            let n = rel.len();
            if n == 0 || n > path.arrows.len() + 1 {
                continue;
            }
            if rel[n - 1] != arrow {
                continue;
            }
            if path.arrows[path.arrows.len() - (n - 1)..] == rel[..n - 1] {
                return false;
            }
        }
        true
    };

    let mut paths: Vec<Path> =
        (0..quiver.vertices).map(|v| Path { source: v, arrows: Vec::new() }).collect();
    let mut frontier = paths.clone();
    let mut len = 0usize;
    while !frontier.is_empty() {
        len += 1;
        if len >= max_len {
            return Err(Error::InfiniteDimensional(format!(
                "admissible paths of length {max_len} exist; a cycle is not killed by any relation"
            )));
        }
        let mut next = Vec::new();
        for p in &frontier {
            let at = p.target(quiver);
            for (a, arrow) in quiver.arrows.iter().enumerate() {
                if arrow.source == at && is_admissible_extension(p, a) {
                    let mut q = p.clone();
                    q.arrows.push(a);
                    next.push(q);
                }
            }
        }
        next.sort();
        frontier = next;
        paths.extend(frontier.iter().cloned());
    }
    paths.sort_by_key(|p| (p.arrows.len(), p.arrows.clone(), p.source));

    let index: HashMap<Path, usize> =
        paths.iter().enumerate().map(|(k, p)| (p.clone(), k)).collect();
    let basis: Vec<String> = paths
        .iter()
        .map(|p| {
            if p.arrows.is_empty() {
                format!("e{}", p.source + 1)
            } else {
                p.arrows.iter().map(|&a| quiver.arrows[a].label.clone()).collect::<Vec<_>>()
                    .join("*")
            }
        })
        .collect();
    let dim = paths.len();
    let mut unit = vec![field.zero(); dim];
    let mut idempotents = Vec::new();
    for v in 0..quiver.vertices {
        let k = index[&Path { source: v, arrows: Vec::new() }];
        unit[k] = field.one();
        let mut u = vec![field.zero(); dim];
        u[k] = field.one();
        idempotents.push(u);
    }
    let mut triplets = Vec::new();
    for (pi, p) in paths.iter().enumerate() {
        for (qi, q) in paths.iter().enumerate() {
            if p.target(quiver) != q.source {
                continue;
            }
            let mut joined = p.clone();
            joined.arrows.extend(&q.arrows);
            if let Some(&l) = index.get(&joined) {
                triplets.push((pi, qi, l, field.one()));
            }
        }
    }
    Algebra::new(name, field, dim, basis, unit, triplets, Some(idempotents))
}

/// The linearly ordered `A_3` quiver `1 -> 2 -> 3`.
pub fn a3_linear(field: Field) -> Algebra {
    let q = Quiver::new(3, vec![(0, 1, "a"), (1, 2, "b")], vec![]).unwrap();
    path_algebra(field, "kA3", &q).unwrap()
}

/// The `A_3` quiver with the other orientation, `1 -> 2 <- 3`.
pub fn a3_alternating(field: Field) -> Algebra {
    let q = Quiver::new(3, vec![(0, 1, "a"), (2, 1, "c")], vec![]).unwrap();
    path_algebra(field, "kA3_alt", &q).unwrap()
}

pub fn kxk(field: Field) -> Algebra {
    product("kxk", &[ground_field(field), ground_field(field)]).unwrap()
}

/// Test harness helper: redirects the product `e_i * e_j` to the basis
/// vector `e_l`, leaving everything else untouched. Used by the mutation
/// tests that confirm the verifiers catch corrupted multiplication tables.
pub fn corrupt_structure_constant(a: &Algebra, i: usize, j: usize, l: usize) -> Algebra {
    let mut triplets = Vec::new();
    for x in 0..a.dim {
        for y in 0..a.dim {
            if (x, y) == (i, j) {
                continue;
            }
            for (t, c) in a.basis_product(x, y) {
                triplets.push((x, y, *t, c.clone()));
            }
        }
    }
    triplets.push((i, j, l, a.field.one()));
    Algebra::new(
        format!("{} (corrupted)", a.name),
        a.field,
        a.dim,
        a.basis.clone(),
        a.unit.clone(),
        triplets,
        a.idempotents.clone(),
    )
    .expect("corruption preserves well-formedness")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bundled_families_validate() {
        let f = Field::Q;
        for a in [
            ground_field(f),
            dual_numbers(f),
            truncated_poly(f, 4),
            kxk(f),
            matrix_algebra(f, 2),
            upper_triangular(f, 2),
            a3_linear(f),
            a3_alternating(f),
        ] {
            let report = a.validate();
            assert!(report.passed(), "{} failed: {}", a.name, report.render_table());
        }
    }

    #[test]
    fn dual_numbers_squares_to_zero() {
        let a = dual_numbers(Field::Q);
        let x = a.basis_element(1);
        assert_eq!(a.multiply(&x, &x).unwrap(), a.zero_element());
        let v = vec![Field::Q.from_i64(3), Field::Q.from_i64(-2)];
        assert_eq!(a.multiply(&a.unit, &v).unwrap(), v);
    }

    #[test]
    fn upper_triangular_matrix_units() {
        let a = upper_triangular(Field::Q, 2);
        // basis order: e11, e12, e22
        let e11 = a.basis_element(0);
        let e12 = a.basis_element(1);
        assert_eq!(a.multiply(&e11, &e12).unwrap(), e12);
        assert_eq!(a.multiply(&e12, &e11).unwrap(), a.zero_element());
    }

    #[test]
    fn corrupted_table_fails_validation() {
        // T_2 with e12 * e22 redirected to e11: then
        // (e12 e22) e22 = e11 e22 = 0 while e12 (e22 e22) = e11.
        let a = corrupt_structure_constant(&upper_triangular(Field::Q, 2), 1, 2, 0);
        let report = a.validate();
        assert!(!report.passed());
        assert!(report.failures().any(|c| c.id.starts_with("alg.assoc")));
    }

    #[test]
    fn dual_numbers_with_x_squared_x_stays_associative() {
        // redirecting x*x inside a commutative one-generator algebra cannot
        // break associativity; it just lands on k[x]/(x^2 - x)
        let a = corrupt_structure_constant(&dual_numbers(Field::Q), 1, 1, 1);
        assert!(a.validate().passed());
    }

    #[test]
    fn incomplete_idempotents_fail_validation() {
        let f = Field::Q;
        let mut a = kxk(f);
        a.idempotents = Some(vec![a.idempotents.as_ref().unwrap()[0].clone()]);
        let report = a.validate();
        assert!(report.failures().any(|c| c.id == "alg.idem.sum"));
    }

    #[test]
    fn path_algebra_dimensions() {
        assert_eq!(a3_linear(Field::Q).dim, 6);
        assert_eq!(a3_alternating(Field::Q).dim, 5);
        // loop with x^3 = 0 has basis e, x, x^2
        let q = Quiver::new(1, vec![(0, 0, "x")], vec![vec![0, 0, 0]]).unwrap();
        let a = path_algebra(Field::Q, "loop3", &q).unwrap();
        assert_eq!(a.dim, 3);
        assert!(a.validate().passed());
    }

    #[test]
    fn unrelated_cycle_is_rejected() {
        let q = Quiver::new(1, vec![(0, 0, "x")], vec![]).unwrap();
        assert!(matches!(
            path_algebra(Field::Q, "bad", &q),
            Err(Error::InfiniteDimensional(_))
        ));
    }

    #[test]
    fn truncated_poly_two_is_dual_numbers() {
        let a = truncated_poly(Field::Q, 2);
        let b = dual_numbers(Field::Q);
        assert_eq!(a.dim, b.dim);
        for i in 0..2 {
            for j in 0..2 {
                assert_eq!(a.basis_product(i, j), b.basis_product(i, j));
            }
        }
    }

    #[test]
    fn opposite_is_involutive() {
        for a in [a3_linear(Field::Q), matrix_algebra(Field::Q, 2)] {
            let b = a.opposite().opposite();
            for i in 0..a.dim {
                for j in 0..a.dim {
                    assert_eq!(a.basis_product(i, j), b.basis_product(i, j));
                }
            }
        }
    }

    #[test]
    fn path_algebra_idempotents_match_vertices() {
        let a = a3_alternating(Field::Q);
        let idems = a.idempotents.as_ref().unwrap();
        assert_eq!(idems.len(), 3);
        for (x, u) in idems.iter().enumerate() {
            for (y, v) in idems.iter().enumerate() {
                let prod = a.multiply(u, v).unwrap();
                if x == y {
                    assert_eq!(&prod, u);
                } else {
                    assert_eq!(prod, a.zero_element());
                }
            }
        }
    }

    #[test]
    fn json_round_trip() {
        let a = matrix_algebra(Field::Q, 2);
        let s = a.to_json();
        let b = Algebra::from_json(&s).unwrap();
        assert_eq!(a.name, b.name);
        assert_eq!(a.dim, b.dim);
        assert_eq!(a.unit, b.unit);
        for i in 0..a.dim {
            for j in 0..a.dim {
                assert_eq!(a.basis_product(i, j), b.basis_product(i, j));
            }
        }
        assert_eq!(b.to_json(), s);
    }

    #[test]
    fn json_rejects_unknown_fields() {
        let s = r#"{"name":"k","field":{"type":"Q"},"dim":1,"basis":["1"],
                    "unit":["1"],"mult":[[0,0,0,"1"]],"extra":true}"#;
        assert!(Algebra::from_json(s).is_err());
    }

    #[test]
    fn unit_first_model_fixes_the_unit() {
        for a in [kxk(Field::Q), matrix_algebra(Field::Q, 2), a3_linear(Field::Q)] {
            let model = a.unit_first_model();
            let m = &model.algebra;
            assert!(m.validate().passed(), "{}", m.name);
            let mut expected = vec![Field::Q.zero(); m.dim];
            expected[0] = Field::Q.one();
            assert_eq!(m.unit, expected);
            // to_f and from_f are mutually inverse
            let id = model.to_f.mul(&model.from_f);
            assert_eq!(id, SparseMatrix::identity(a.dim, a.field));
        }
    }
}
