//! Dense tensors and linear maps between tensor products of coordinate
//! spaces.
//!
//! A tensor lives in `V_1 ⊗ ... ⊗ V_k` where each leg `V_i` has a fixed
//! dimension. Coordinates are flattened with leg 1 most significant. A
//! [`LinearMap`] stores one tensor per source basis element (its column),
//! so every structural map of an algebra, coalgebra or torsor is just a
//! `LinearMap` with the appropriate leg shapes.

use std::sync::OnceLock;

use crate::error::{Error, Result};
use crate::par;
use crate::scalar::{FieldSpec, Scalar};

/// Largest total number of legs (source + target) of a stored map.
pub const MAX_LEGS: usize = 6;

const DEFAULT_MAX_DIM: usize = 16;

/// Cap on the dimension of a single presented space. `TORSORKIT_MAX_DIM`
/// overrides the default of 16.
pub fn max_dim() -> usize {
    static CAP: OnceLock<usize> = OnceLock::new();
    *CAP.get_or_init(|| {
        std::env::var("TORSORKIT_MAX_DIM")
            .ok()
            .and_then(|v| v.trim().parse().ok())
            .unwrap_or(DEFAULT_MAX_DIM)
    })
}

pub(crate) fn check_dim(dim: usize) -> Result<()> {
    let cap = max_dim();
    if dim > cap {
        return Err(Error::DimensionCap { dim, cap });
    }
    Ok(())
}

pub fn volume(dims: &[usize]) -> usize {
    dims.iter().product()
}

pub fn flat_index(dims: &[usize], multi: &[usize]) -> usize {
    debug_assert_eq!(dims.len(), multi.len());
    multi.iter().zip(dims).fold(0, |acc, (&i, &d)| acc * d + i)
}

pub fn multi_index(dims: &[usize], mut flat: usize) -> Vec<usize> {
    let mut out = vec![0; dims.len()];
    for (slot, &d) in out.iter_mut().zip(dims).rev() {
        *slot = flat % d;
        flat /= d;
    }
    out
}

fn validate_perm(perm: &[usize], legs: usize) -> Result<()> {
    let mut seen = vec![false; legs];
    if perm.len() != legs {
        return Err(Error::BadPermutation(perm.to_vec()));
    }
    for &p in perm {
        if p >= legs || seen[p] {
            return Err(Error::BadPermutation(perm.to_vec()));
        }
        seen[p] = true;
    }
    Ok(())
}

/// Inverse of a leg permutation.
pub fn invert_perm(perm: &[usize]) -> Vec<usize> {
    let mut inv = vec![0; perm.len()];
    for (i, &p) in perm.iter().enumerate() {
        inv[p] = i;
    }
    inv
}

/// Permutation of `legs` legs exchanging `i` and `j` (0-based).
pub fn swap(legs: usize, i: usize, j: usize) -> Vec<usize> {
    let mut p: Vec<usize> = (0..legs).collect();
    p.swap(i, j);
    p
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Tensor {
    field: FieldSpec,
    dims: Vec<usize>,
    data: Vec<Scalar>,
}

impl Tensor {
    pub fn zeros(field: FieldSpec, dims: &[usize]) -> Self {
        Tensor {
            field,
            dims: dims.to_vec(),
            data: vec![field.zero(); volume(dims)],
        }
    }

    pub fn basis(field: FieldSpec, dims: &[usize], flat: usize) -> Self {
        let mut t = Tensor::zeros(field, dims);
        t.data[flat] = field.one();
        t
    }

    /// A 0-leg tensor holding a single scalar.
    pub fn scalar(value: Scalar) -> Self {
        Tensor {
            field: value.field(),
            dims: Vec::new(),
            data: vec![value],
        }
    }

    pub fn from_vec(field: FieldSpec, dims: &[usize], data: Vec<Scalar>) -> Result<Self> {
        if data.len() != volume(dims) {
            return Err(Error::Shape(format!(
                "{} entries for a tensor of shape {:?}",
                data.len(),
                dims
            )));
        }
        for s in &data {
            field.check(s)?;
        }
        Ok(Tensor {
            field,
            dims: dims.to_vec(),
            data,
        })
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn legs(&self) -> usize {
        self.dims.len()
    }

    pub fn data(&self) -> &[Scalar] {
        &self.data
    }

    pub fn into_data(self) -> Vec<Scalar> {
        self.data
    }

    pub fn get(&self, flat: usize) -> &Scalar {
        &self.data[flat]
    }

    pub fn at(&self, multi: &[usize]) -> &Scalar {
        &self.data[flat_index(&self.dims, multi)]
    }

    pub fn set(&mut self, flat: usize, value: Scalar) {
        debug_assert_eq!(value.field(), self.field);
        self.data[flat] = value;
    }

    pub fn add_at(&mut self, flat: usize, value: &Scalar) {
        self.data[flat] += value;
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Scalar::is_zero)
    }

    pub fn nonzeros(&self) -> impl Iterator<Item = (usize, &Scalar)> {
        self.data.iter().enumerate().filter(|(_, s)| !s.is_zero())
    }

    fn same_shape(&self, other: &Tensor) -> Result<()> {
        if self.dims != other.dims {
            return Err(Error::Shape(format!(
                "tensor shapes differ: {:?} vs {:?}",
                self.dims, other.dims
            )));
        }
        if self.field != other.field {
            return Err(Error::ModulusMismatch(self.field.name(), other.field.name()));
        }
        Ok(())
    }

    /// `self += c * other`.
    pub fn add_scaled(&mut self, other: &Tensor, c: &Scalar) -> Result<()> {
        self.same_shape(other)?;
        for (i, v) in other.nonzeros() {
            self.data[i] += &(v * c);
        }
        Ok(())
    }

    pub fn plus(&self, other: &Tensor) -> Result<Tensor> {
        let mut out = self.clone();
        out.add_scaled(other, &self.field.one())?;
        Ok(out)
    }

    pub fn minus(&self, other: &Tensor) -> Result<Tensor> {
        let mut out = self.clone();
        out.add_scaled(other, &-self.field.one())?;
        Ok(out)
    }

    pub fn scaled(&self, c: &Scalar) -> Tensor {
        Tensor {
            field: self.field,
            dims: self.dims.clone(),
            data: self.data.iter().map(|v| v * c).collect(),
        }
    }

    /// Tensor product `self ⊗ other`; legs of `self` come first.
    pub fn outer(&self, other: &Tensor) -> Tensor {
        let mut dims = self.dims.clone();
        dims.extend_from_slice(&other.dims);
        let mut out = Tensor::zeros(self.field, &dims);
        let w = other.data.len();
        for (i, a) in self.nonzeros() {
            for (j, b) in other.nonzeros() {
                out.data[i * w + j] = a * b;
            }
        }
        out
    }

    /// Reorders legs: output leg `i` is input leg `perm[i]`.
    pub fn permute_legs(&self, perm: &[usize]) -> Result<Tensor> {
        validate_perm(perm, self.legs())?;
        let dims: Vec<usize> = perm.iter().map(|&p| self.dims[p]).collect();
        let mut out = Tensor::zeros(self.field, &dims);
        let mut target = vec![0; perm.len()];
        for (flat, v) in self.nonzeros() {
            let m = multi_index(&self.dims, flat);
            for (slot, &p) in target.iter_mut().zip(perm) {
                *slot = m[p];
            }
            out.data[flat_index(&dims, &target)] = v.clone();
        }
        Ok(out)
    }

    /// Same coordinates viewed with a different leg shape of equal volume.
    pub fn reshape(&self, dims: &[usize]) -> Result<Tensor> {
        if volume(dims) != self.data.len() {
            return Err(Error::Shape(format!(
                "cannot reshape {:?} into {:?}",
                self.dims, dims
            )));
        }
        Ok(Tensor {
            field: self.field,
            dims: dims.to_vec(),
            data: self.data.clone(),
        })
    }
}

/// A linear map `V_{s_1} ⊗ ... ⊗ V_{s_a} → W_{t_1} ⊗ ... ⊗ W_{t_b}` stored
/// column by column.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LinearMap {
    field: FieldSpec,
    source: Vec<usize>,
    target: Vec<usize>,
    columns: Vec<Tensor>,
}

impl LinearMap {
    pub fn from_columns(
        field: FieldSpec,
        source: &[usize],
        target: &[usize],
        columns: Vec<Tensor>,
    ) -> Result<Self> {
        let legs = source.len() + target.len();
        if legs > MAX_LEGS {
            return Err(Error::LegCapExceeded {
                legs,
                cap: MAX_LEGS,
            });
        }
        if columns.len() != volume(source) {
            return Err(Error::Shape(format!(
                "{} columns for source shape {:?}",
                columns.len(),
                source
            )));
        }
        for c in &columns {
            if c.dims != target {
                return Err(Error::Shape(format!(
                    "column of shape {:?} for target shape {:?}",
                    c.dims, target
                )));
            }
            if c.field != field {
                return Err(Error::ModulusMismatch(field.name(), c.field.name()));
            }
        }
        Ok(LinearMap {
            field,
            source: source.to_vec(),
            target: target.to_vec(),
            columns,
        })
    }

    /// Builds the map whose column `j` is `f(j)`; columns are evaluated in
    /// parallel when the `parallel` feature is on.
    pub fn from_fn<F>(field: FieldSpec, source: &[usize], target: &[usize], f: F) -> Result<Self>
    where
        F: Fn(usize) -> Result<Tensor> + Sync + Send,
    {
        let legs = source.len() + target.len();
        if legs > MAX_LEGS {
            return Err(Error::LegCapExceeded {
                legs,
                cap: MAX_LEGS,
            });
        }
        let columns = par::try_map_range(volume(source), f)?;
        LinearMap::from_columns(field, source, target, columns)
    }

    /// Builds a map from the images of basis tensors.
    pub fn from_basis_images<F>(
        field: FieldSpec,
        source: &[usize],
        target: &[usize],
        f: F,
    ) -> Result<Self>
    where
        F: Fn(&Tensor) -> Result<Tensor> + Sync + Send,
    {
        LinearMap::from_fn(field, source, target, |j| {
            f(&Tensor::basis(field, source, j))
        })
    }

    pub fn identity(field: FieldSpec, dims: &[usize]) -> Self {
        let columns = (0..volume(dims))
            .map(|j| Tensor::basis(field, dims, j))
            .collect();
        LinearMap {
            field,
            source: dims.to_vec(),
            target: dims.to_vec(),
            columns,
        }
    }

    pub fn zero(field: FieldSpec, source: &[usize], target: &[usize]) -> Self {
        LinearMap {
            field,
            source: source.to_vec(),
            target: target.to_vec(),
            columns: vec![Tensor::zeros(field, target); volume(source)],
        }
    }

    /// Map from a dense row-major matrix `rows × cols` between single legs.
    pub fn from_matrix(field: FieldSpec, rows: usize, cols: usize, entries: &[Scalar]) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::Shape(format!(
                "{} entries for a {rows}x{cols} matrix",
                entries.len()
            )));
        }
        let columns = (0..cols)
            .map(|c| Tensor::from_vec(field, &[rows], (0..rows).map(|r| entries[r * cols + c].clone()).collect()))
            .collect::<Result<Vec<_>>>()?;
        LinearMap::from_columns(field, &[cols], &[rows], columns)
    }

    /// Dense row-major entries (`rows = |target|`, `cols = |source|`).
    pub fn to_matrix(&self) -> Vec<Scalar> {
        let rows = self.rows();
        let cols = self.cols();
        let mut out = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                out.push(self.columns[c].data[r].clone());
            }
        }
        out
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn source(&self) -> &[usize] {
        &self.source
    }

    pub fn target(&self) -> &[usize] {
        &self.target
    }

    pub fn rows(&self) -> usize {
        volume(&self.target)
    }

    pub fn cols(&self) -> usize {
        self.columns.len()
    }

    pub fn columns(&self) -> &[Tensor] {
        &self.columns
    }

    pub fn column(&self, j: usize) -> &Tensor {
        &self.columns[j]
    }

    pub fn entry(&self, row: usize, col: usize) -> &Scalar {
        &self.columns[col].data[row]
    }

    pub fn set_entry(&mut self, row: usize, col: usize, value: Scalar) {
        self.columns[col].set(row, value);
    }

    pub fn is_square(&self) -> bool {
        self.rows() == self.cols()
    }

    /// Reinterprets the leg shapes without touching coordinates.
    pub fn reshape(&self, source: &[usize], target: &[usize]) -> Result<Self> {
        if volume(source) != self.cols() || volume(target) != self.rows() {
            return Err(Error::Shape(format!(
                "cannot reshape {:?}->{:?} into {:?}->{:?}",
                self.source, self.target, source, target
            )));
        }
        let columns = self
            .columns
            .iter()
            .map(|c| c.reshape(target))
            .collect::<Result<Vec<_>>>()?;
        LinearMap::from_columns(self.field, source, target, columns)
    }

    pub fn apply(&self, v: &Tensor) -> Result<Tensor> {
        if v.dims != self.source {
            return Err(Error::ArityMismatch(format!(
                "map expects {:?}, got tensor of shape {:?}",
                self.source, v.dims
            )));
        }
        self.apply_on_legs(v, 0)
    }

    /// Applies the map to legs `start .. start + source_arity` of `v`,
    /// acting as the identity on all other legs.
    pub fn apply_on_legs(&self, v: &Tensor, start: usize) -> Result<Tensor> {
        let s = self.source.len();
        if start + s > v.legs() || v.dims[start..start + s] != self.source[..] {
            return Err(Error::ArityMismatch(format!(
                "map with source {:?} cannot act on legs {}.. of shape {:?}",
                self.source, start, v.dims
            )));
        }
        if v.field != self.field {
            return Err(Error::ModulusMismatch(self.field.name(), v.field.name()));
        }
        let mid = volume(&self.source);
        let post = volume(&v.dims[start + s..]);
        let tmid = volume(&self.target);
        let mut dims = v.dims[..start].to_vec();
        dims.extend_from_slice(&self.target);
        dims.extend_from_slice(&v.dims[start + s..]);
        let mut out = Tensor::zeros(self.field, &dims);
        for (flat, c) in v.nonzeros() {
            let q = flat % post;
            let rest = flat / post;
            let m = rest % mid;
            let p = rest / mid;
            for (row, f) in self.columns[m].nonzeros() {
                out.data[(p * tmid + row) * post + q] += &(c * f);
            }
        }
        Ok(out)
    }

    /// `self ∘ inner`.
    pub fn compose(&self, inner: &LinearMap) -> Result<LinearMap> {
        if inner.target != self.source {
            return Err(Error::ArityMismatch(format!(
                "cannot compose map with source {:?} after map with target {:?}",
                self.source, inner.target
            )));
        }
        LinearMap::from_fn(self.field, &inner.source, &self.target, |j| {
            self.apply(&inner.columns[j])
        })
    }

    /// `self ⊗ other`, legs of `self` first on both sides.
    pub fn tensor(&self, other: &LinearMap) -> Result<LinearMap> {
        if self.field != other.field {
            return Err(Error::ModulusMismatch(self.field.name(), other.field.name()));
        }
        let mut source = self.source.clone();
        source.extend_from_slice(&other.source);
        let mut target = self.target.clone();
        target.extend_from_slice(&other.target);
        let w = other.cols();
        LinearMap::from_fn(self.field, &source, &target, |j| {
            Ok(self.columns[j / w].outer(&other.columns[j % w]))
        })
    }

    /// Permutes target legs (output leg `i` is input leg `perm[i]`).
    pub fn permute_target(&self, perm: &[usize]) -> Result<LinearMap> {
        validate_perm(perm, self.target.len())?;
        let target: Vec<usize> = perm.iter().map(|&p| self.target[p]).collect();
        LinearMap::from_fn(self.field, &self.source, &target, |j| {
            self.columns[j].permute_legs(perm)
        })
    }

    /// Precomposes with a leg permutation of the source.
    pub fn permute_source(&self, perm: &[usize]) -> Result<LinearMap> {
        validate_perm(perm, self.source.len())?;
        // (f ∘ P)(e_m) where P sends input leg perm[i] to output leg i.
        let inv = invert_perm(perm);
        let source: Vec<usize> = inv.iter().map(|&p| self.source[p]).collect();
        LinearMap::from_fn(self.field, &source, &self.target, |j| {
            let m = multi_index(&source, j);
            let permuted: Vec<usize> = perm.iter().map(|&p| m[p]).collect();
            Ok(self.columns[flat_index(&self.source, &permuted)].clone())
        })
    }

    pub fn transpose(&self) -> LinearMap {
        let rows = self.rows();
        let columns = (0..rows)
            .map(|r| Tensor {
                field: self.field,
                dims: self.source.clone(),
                data: self.columns.iter().map(|c| c.data[r].clone()).collect(),
            })
            .collect();
        LinearMap {
            field: self.field,
            source: self.target.clone(),
            target: self.source.clone(),
            columns,
        }
    }

    pub fn minus(&self, other: &LinearMap) -> Result<LinearMap> {
        if self.source != other.source || self.target != other.target {
            return Err(Error::Shape(format!(
                "maps of shapes {:?}->{:?} and {:?}->{:?} cannot be subtracted",
                self.source, self.target, other.source, other.target
            )));
        }
        let columns = self
            .columns
            .iter()
            .zip(&other.columns)
            .map(|(a, b)| a.minus(b))
            .collect::<Result<Vec<_>>>()?;
        LinearMap::from_columns(self.field, &self.source, &self.target, columns)
    }

    pub fn scaled(&self, c: &Scalar) -> LinearMap {
        LinearMap {
            field: self.field,
            source: self.source.clone(),
            target: self.target.clone(),
            columns: self.columns.iter().map(|t| t.scaled(c)).collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.columns.iter().all(Tensor::is_zero)
    }

    /// First `(column, row)` where the two maps disagree.
    pub fn first_difference(&self, other: &LinearMap) -> Option<(usize, usize)> {
        for (j, (a, b)) in self.columns.iter().zip(&other.columns).enumerate() {
            if let Some(r) = a.data.iter().zip(&b.data).position(|(x, y)| x != y) {
                return Some((j, r));
            }
        }
        None
    }
}

/// Permutes the legs of a tensor; convenience wrapper over
/// [`Tensor::permute_legs`].
pub fn permute_legs(v: &Tensor, perm: &[usize]) -> Result<Tensor> {
    v.permute_legs(perm)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q() -> FieldSpec {
        FieldSpec::Rationals
    }

    fn sample_map(source: &[usize], target: &[usize], seed: i64) -> LinearMap {
        let f = q();
        LinearMap::from_fn(f, source, target, |j| {
            let n = volume(target);
            let data = (0..n)
                .map(|r| f.from_i64(((j as i64 * 7 + r as i64 * 3 + seed) % 5) - 2))
                .collect();
            Tensor::from_vec(f, target, data)
        })
        .unwrap()
    }

    #[test]
    fn flat_and_multi_agree() {
        let dims = [2, 3, 4];
        for flat in 0..24 {
            assert_eq!(flat_index(&dims, &multi_index(&dims, flat)), flat);
        }
    }

    #[test]
    fn identity_is_neutral() {
        let f = sample_map(&[2, 2], &[3], 1);
        let id_s = LinearMap::identity(q(), &[2, 2]);
        let id_t = LinearMap::identity(q(), &[3]);
        assert_eq!(f.compose(&id_s).unwrap(), f);
        assert_eq!(id_t.compose(&f).unwrap(), f);
    }

    #[test]
    fn identity_tensor_identity() {
        let id = LinearMap::identity(q(), &[2]);
        let id2 = id.tensor(&id).unwrap();
        assert_eq!(id2, LinearMap::identity(q(), &[2, 2]));
    }

    #[test]
    fn tensor_product_acts_leg_wise() {
        let f = sample_map(&[2], &[3], 0);
        let g = sample_map(&[2], &[2], 4);
        let fg = f.tensor(&g).unwrap();
        for a in 0..2 {
            for b in 0..2 {
                let u = Tensor::basis(q(), &[2], a);
                let v = Tensor::basis(q(), &[2], b);
                let lhs = fg.apply(&u.outer(&v)).unwrap();
                let rhs = f.apply(&u).unwrap().outer(&g.apply(&v).unwrap());
                assert_eq!(lhs, rhs);
            }
        }
    }

    #[test]
    fn tau13_is_an_involution_and_reverses() {
        let dims = [2, 2, 2];
        let e = |i| Tensor::basis(q(), &[2], i);
        let v = e(0).outer(&e(1)).outer(&e(1));
        let w = v.permute_legs(&[2, 1, 0]).unwrap();
        assert_eq!(w, e(1).outer(&e(1)).outer(&e(0)));
        assert_eq!(w.permute_legs(&[2, 1, 0]).unwrap(), v);
        assert!(Tensor::zeros(q(), &dims).permute_legs(&[0, 0, 1]).is_err());
    }

    #[test]
    fn apply_on_middle_legs() {
        let f = sample_map(&[2, 2], &[3], 2);
        let e = |i, d| Tensor::basis(q(), &[d], i);
        let v = e(1, 3).outer(&e(0, 2)).outer(&e(1, 2)).outer(&e(2, 4));
        let out = f.apply_on_legs(&v, 1).unwrap();
        let expect = e(1, 3)
            .outer(&f.apply(&e(0, 2).outer(&e(1, 2))).unwrap())
            .outer(&e(2, 4));
        assert_eq!(out, expect);
    }

    #[test]
    fn transpose_reverses_composition() {
        let f = sample_map(&[2], &[3, 2], 1);
        let g = sample_map(&[3, 2], &[4], 3);
        let lhs = g.compose(&f).unwrap().transpose();
        let rhs = f.transpose().compose(&g.transpose()).unwrap();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn leg_cap_is_enforced() {
        let err = LinearMap::zero(q(), &[2, 2, 2], &[2, 2, 2, 2]);
        let built = LinearMap::from_columns(q(), err.source(), err.target(), err.columns().to_vec());
        assert!(matches!(built, Err(Error::LegCapExceeded { legs: 7, .. })));
    }

    #[test]
    fn permute_source_matches_permuting_inputs() {
        let f = sample_map(&[2, 3], &[2], 5);
        let perm = [1, 0];
        let g = f.permute_source(&perm).unwrap();
        assert_eq!(g.source(), &[3, 2]);
        for a in 0..3 {
            for b in 0..2 {
                let v = Tensor::basis(q(), &[3], a).outer(&Tensor::basis(q(), &[2], b));
                let w = v.permute_legs(&perm).unwrap();
                assert_eq!(g.apply(&v).unwrap(), f.apply(&w).unwrap());
            }
        }
    }
}
