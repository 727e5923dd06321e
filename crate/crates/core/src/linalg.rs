//! Exact linear algebra: row reduction, subspaces, kernels, inverses and
//! corestriction of tensors into subspaces.

use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::scalar::{FieldSpec, Scalar};
use crate::tensor::{volume, LinearMap, Tensor};

/// Incrementally maintained reduced row echelon form.
#[derive(Clone, Debug)]
pub struct Echelon {
    field: FieldSpec,
    width: usize,
    rows: Vec<Vec<Scalar>>,
    pivots: Vec<usize>,
}

impl Echelon {
    pub fn new(field: FieldSpec, width: usize) -> Self {
        Echelon {
            field,
            width,
            rows: Vec::new(),
            pivots: Vec::new(),
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[Vec<Scalar>] {
        &self.rows
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Reduces `v` against the current rows; the remainder is zero iff `v`
    /// lies in their span.
    pub fn reduce(&self, v: &[Scalar]) -> Vec<Scalar> {
        let mut v = v.to_vec();
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            if v[p].is_zero() {
                continue;
            }
            let c = v[p].clone();
            for (x, r) in v.iter_mut().zip(row).skip(p) {
                if !r.is_zero() {
                    *x -= &(&c * r);
                }
            }
        }
        v
    }

    /// Adds `v` to the span. Returns `false` if it was already there.
    pub fn insert(&mut self, v: &[Scalar]) -> bool {
        debug_assert_eq!(v.len(), self.width);
        let mut v = self.reduce(v);
        let Some(p) = v.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        let inv = v[p].inv().expect("pivot is nonzero");
        for x in v.iter_mut().skip(p) {
            if !x.is_zero() {
                *x = &*x * &inv;
            }
        }
        for row in &mut self.rows {
            if row[p].is_zero() {
                continue;
            }
            let c = row[p].clone();
            for (x, y) in row.iter_mut().zip(&v).skip(p) {
                if !y.is_zero() {
                    *x -= &(&c * y);
                }
            }
        }
        let at = self.pivots.partition_point(|&q| q < p);
        self.rows.insert(at, v);
        self.pivots.insert(at, p);
        true
    }

    pub fn contains(&self, v: &[Scalar]) -> bool {
        self.reduce(v).iter().all(Scalar::is_zero)
    }

    #[allow(dead_code)]
    pub(crate) fn field(&self) -> FieldSpec {
        self.field
    }
}

/// A subspace of a tensor product space, stored as an RREF basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubspaceBasis {
    field: FieldSpec,
    ambient: Vec<usize>,
    rows: Vec<Vec<Scalar>>,
    pivots: Vec<usize>,
}

impl SubspaceBasis {
    pub fn from_spanning(field: FieldSpec, ambient: &[usize], vectors: &[Tensor]) -> Result<Self> {
        let width = volume(ambient);
        let mut ech = Echelon::new(field, width);
        for v in vectors {
            if v.dims() != ambient {
                return Err(Error::Shape(format!(
                    "spanning vector of shape {:?} in ambient {:?}",
                    v.dims(),
                    ambient
                )));
            }
            ech.insert(v.data());
        }
        Ok(SubspaceBasis {
            field,
            ambient: ambient.to_vec(),
            rows: ech.rows,
            pivots: ech.pivots,
        })
    }

    pub fn full(field: FieldSpec, ambient: &[usize]) -> Self {
        let n = volume(ambient);
        let rows = (0..n)
            .map(|i| {
                let mut r = vec![field.zero(); n];
                r[i] = field.one();
                r
            })
            .collect();
        SubspaceBasis {
            field,
            ambient: ambient.to_vec(),
            rows,
            pivots: (0..n).collect(),
        }
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn ambient(&self) -> &[usize] {
        &self.ambient
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn vector(&self, i: usize) -> Tensor {
        Tensor::from_vec(self.field, &self.ambient, self.rows[i].clone()).expect("row has ambient length")
    }

    pub fn vectors(&self) -> Vec<Tensor> {
        (0..self.dim()).map(|i| self.vector(i)).collect()
    }

    /// Coordinates of `v` in this basis, or `None` if `v` is outside.
    pub fn coordinates(&self, v: &Tensor) -> Option<Vec<Scalar>> {
        if v.dims() != self.ambient {
            return None;
        }
        let coords: Vec<Scalar> = self.pivots.iter().map(|&p| v.get(p).clone()).collect();
        let mut rebuilt = vec![self.field.zero(); v.data().len()];
        for (c, row) in coords.iter().zip(&self.rows) {
            if c.is_zero() {
                continue;
            }
            for (x, r) in rebuilt.iter_mut().zip(row) {
                if !r.is_zero() {
                    *x += &(c * r);
                }
            }
        }
        (rebuilt == v.data()).then_some(coords)
    }

    pub fn contains(&self, v: &Tensor) -> bool {
        self.coordinates(v).is_some()
    }

    /// The inclusion `k^dim → ambient`.
    pub fn inclusion(&self) -> LinearMap {
        LinearMap::from_columns(self.field, &[self.dim()], &self.ambient, self.vectors())
            .expect("basis vectors have ambient shape")
    }

    /// A left inverse of [`inclusion`](Self::inclusion): reads coordinates off
    /// the pivot positions.
    pub fn projection(&self) -> LinearMap {
        let k = self.dim();
        let n = volume(&self.ambient);
        let mut columns = vec![Tensor::zeros(self.field, &[k]); n];
        for (i, &p) in self.pivots.iter().enumerate() {
            columns[p].set(i, self.field.one());
        }
        LinearMap::from_columns(self.field, &self.ambient, &[k], columns).expect("projection shape")
    }

    pub fn same_subspace(&self, other: &SubspaceBasis) -> bool {
        self == other
    }

    /// Stable hex digest identifying the field, ambient shape and basis.
    pub fn fingerprint(&self) -> String {
        let mut h = Sha256::new();
        h.update(self.field.name().as_bytes());
        h.update(format!("{:?}", self.ambient).as_bytes());
        for row in &self.rows {
            h.update(b"|");
            for x in row {
                h.update(x.to_string().as_bytes());
                h.update(b",");
            }
        }
        h.finalize().iter().map(|b| format!("{b:02x}")).collect()
    }
}

fn matrix_rows(f: &LinearMap) -> Vec<Vec<Scalar>> {
    (0..f.rows())
        .map(|r| (0..f.cols()).map(|c| f.entry(r, c).clone()).collect())
        .collect()
}

pub fn rank(f: &LinearMap) -> usize {
    let mut ech = Echelon::new(f.field(), f.cols());
    for row in matrix_rows(f) {
        ech.insert(&row);
    }
    ech.rank()
}

/// Basis of `ker f` inside the source of `f`.
pub fn kernel_basis(f: &LinearMap) -> SubspaceBasis {
    let field = f.field();
    let n = f.cols();
    let mut ech = Echelon::new(field, n);
    for row in matrix_rows(f) {
        ech.insert(&row);
    }
    let mut is_pivot = vec![false; n];
    for &p in ech.pivots() {
        is_pivot[p] = true;
    }
    let mut vectors = Vec::new();
    for j in (0..n).filter(|&j| !is_pivot[j]) {
        let mut v = vec![field.zero(); n];
        v[j] = field.one();
        for (row, &p) in ech.rows().iter().zip(ech.pivots()) {
            v[p] = -&row[j];
        }
        vectors.push(Tensor::from_vec(field, f.source(), v).expect("kernel vector shape"));
    }
    SubspaceBasis::from_spanning(field, f.source(), &vectors).expect("kernel vectors have source shape")
}

/// Basis of the image of `f` inside its target.
pub fn image_basis(f: &LinearMap) -> SubspaceBasis {
    SubspaceBasis::from_spanning(f.field(), f.target(), f.columns()).expect("columns have target shape")
}

/// Inverse of a square map, with leg shapes swapped.
pub fn invert_map(f: &LinearMap) -> Result<LinearMap> {
    let field = f.field();
    let n = f.cols();
    if f.rows() != n {
        return Err(Error::Shape(format!(
            "cannot invert a {}x{} map",
            f.rows(),
            n
        )));
    }
    let mut ech = Echelon::new(field, 2 * n);
    for (r, mut row) in matrix_rows(f).into_iter().enumerate() {
        row.extend((0..n).map(|c| if c == r { field.one() } else { field.zero() }));
        ech.insert(&row);
    }
    let rank_a = ech.pivots().iter().filter(|&&p| p < n).count();
    if rank_a < n {
        return Err(Error::Singular {
            kernel_dim: n - rank_a,
        });
    }
    // Rows of the right half form A⁻¹ in row-major order.
    let mut columns = vec![Tensor::zeros(field, f.source()); n];
    for (r, row) in ech.rows().iter().enumerate() {
        for (c, col) in columns.iter_mut().enumerate() {
            col.set(r, row[n + c].clone());
        }
    }
    LinearMap::from_columns(field, f.target(), f.source(), columns)
}

/// Replaces each group of legs `start .. start + basis.ambient().len()` of
/// `v` by a single leg carrying coordinates in `basis`. Fails if any
/// component of `v` leaves the given subspaces.
pub fn corestrict(v: &Tensor, groups: &[(usize, &SubspaceBasis)]) -> Result<Tensor> {
    let mut end = 0;
    for &(start, b) in groups {
        if start < end {
            return Err(Error::Shape("corestriction groups overlap or are unsorted".into()));
        }
        end = start + b.ambient().len();
        if end > v.legs() || v.dims()[start..end] != *b.ambient() {
            return Err(Error::Shape(format!(
                "corestriction group at leg {start} does not match shape {:?}",
                v.dims()
            )));
        }
    }
    let mut out = v.clone();
    for &(start, b) in groups.iter().rev() {
        out = b.projection().apply_on_legs(&out, start)?;
    }
    // Positions of the collapsed legs in `out`.
    let mut rebuilt = out.clone();
    let mut shift = 0;
    let mut positions = Vec::with_capacity(groups.len());
    for &(start, b) in groups {
        positions.push(start - shift);
        shift += b.ambient().len() - 1;
    }
    for (&(_, b), &pos) in groups.iter().zip(&positions).rev() {
        rebuilt = b.inclusion().apply_on_legs(&rebuilt, pos)?;
    }
    if rebuilt != *v {
        return Err(Error::CorestrictionFailure(format!(
            "tensor of shape {:?} is not in the product of the given subspaces",
            v.dims()
        )));
    }
    Ok(out)
}

/// Corestricts every column of a map.
pub fn corestrict_map(f: &LinearMap, groups: &[(usize, &SubspaceBasis)]) -> Result<LinearMap> {
    let target = corestrict(&Tensor::zeros(f.field(), f.target()), groups)?
        .dims()
        .to_vec();
    let columns = f
        .columns()
        .iter()
        .map(|c| corestrict(c, groups))
        .collect::<Result<Vec<_>>>()?;
    LinearMap::from_columns(f.field(), f.source(), &target, columns)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q() -> FieldSpec {
        FieldSpec::Rationals
    }

    fn mat(rows: usize, cols: usize, v: &[i64]) -> LinearMap {
        let f = q();
        let e: Vec<Scalar> = v.iter().map(|&x| f.from_i64(x)).collect();
        LinearMap::from_matrix(f, rows, cols, &e).unwrap()
    }

    #[test]
    fn inverse_of_2x2() {
        let a = mat(2, 2, &[2, 1, 1, 1]);
        let inv = invert_map(&a).unwrap();
        assert_eq!(inv, mat(2, 2, &[1, -1, -1, 2]));
        assert_eq!(a.compose(&inv).unwrap(), LinearMap::identity(q(), &[2]));
    }

    #[test]
    fn singular_reports_kernel_dimension() {
        let a = mat(3, 3, &[1, 2, 3, 2, 4, 6, 1, 1, 1]);
        assert_eq!(invert_map(&a), Err(Error::Singular { kernel_dim: 1 }));
    }

    #[test]
    fn kernel_of_rank_one() {
        let a = mat(1, 3, &[1, 1, 1]);
        let k = kernel_basis(&a);
        assert_eq!(k.dim(), 2);
        for v in k.vectors() {
            assert!(a.apply(&v).unwrap().is_zero());
        }
    }

    #[test]
    fn coordinates_round_trip() {
        let f = q();
        let v1 = Tensor::from_vec(f, &[3], vec![f.from_i64(1), f.from_i64(2), f.from_i64(0)]).unwrap();
        let v2 = Tensor::from_vec(f, &[3], vec![f.from_i64(0), f.from_i64(1), f.from_i64(1)]).unwrap();
        let b = SubspaceBasis::from_spanning(f, &[3], &[v1.clone(), v2.clone()]).unwrap();
        let w = v1.plus(&v2.scaled(&f.from_i64(3))).unwrap();
        let c = b.coordinates(&w).unwrap();
        let back = b.inclusion().apply(&Tensor::from_vec(f, &[2], c).unwrap()).unwrap();
        assert_eq!(back, w);
        assert!(!b.contains(&Tensor::basis(f, &[3], 2)));
    }

    #[test]
    fn corestriction_rejects_escaping_tensor() {
        let f = q();
        let line = SubspaceBasis::from_spanning(f, &[2], &[Tensor::basis(f, &[2], 0)]).unwrap();
        let inside = Tensor::basis(f, &[2], 0).outer(&Tensor::basis(f, &[2], 1));
        let out = corestrict(&inside, &[(0, &line)]).unwrap();
        assert_eq!(out.dims(), &[1, 2]);
        let outside = Tensor::basis(f, &[2], 1).outer(&Tensor::basis(f, &[2], 1));
        assert!(matches!(
            corestrict(&outside, &[(0, &line)]),
            Err(Error::CorestrictionFailure(_))
        ));
    }

    #[test]
    fn fingerprint_depends_on_subspace() {
        let f = q();
        let a = SubspaceBasis::from_spanning(f, &[2], &[Tensor::basis(f, &[2], 0)]).unwrap();
        let b = SubspaceBasis::from_spanning(f, &[2], &[Tensor::basis(f, &[2], 1)]).unwrap();
        assert_ne!(a.fingerprint(), b.fingerprint());
        assert_eq!(a.fingerprint().len(), 64);
    }
}
