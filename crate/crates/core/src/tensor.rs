//! Dense row-major tensors over a generic floating scalar.
//!
//! Shapes are small (vectors and matrices of the model dimensions), so the
//! representation is a flat `Vec` plus a shape. All reductions run in a
//! fixed left-to-right order so results are reproducible bit for bit.

use crate::error::{Error, Result};
use crate::scalar::Scalar;

#[derive(Clone, Debug, PartialEq)]
pub struct Tensor<S> {
    shape: Vec<usize>,
    data: Vec<S>,
}

impl<S: Scalar> Tensor<S> {
    pub fn new(shape: Vec<usize>, data: Vec<S>) -> Result<Self> {
        let expected: usize = shape.iter().product();
        if expected != data.len() {
            return Err(Error::dimension("tensor construction", &shape, &[data.len()]));
        }
        Ok(Tensor { shape, data })
    }

    pub fn zeros(shape: &[usize]) -> Self {
        let len = shape.iter().product();
        Tensor {
            shape: shape.to_vec(),
            data: vec![S::zero(); len],
        }
    }

    /// Length-1 vector holding a single value.
    pub fn scalar(value: S) -> Self {
        Tensor {
            shape: vec![1],
            data: vec![value],
        }
    }

    pub fn vector(data: Vec<S>) -> Self {
        Tensor {
            shape: vec![data.len()],
            data,
        }
    }

    pub fn matrix(rows: usize, cols: usize, data: Vec<S>) -> Result<Self> {
        Tensor::new(vec![rows, cols], data)
    }

    pub fn shape(&self) -> &[usize] {
        &self.shape
    }

    pub fn rank(&self) -> usize {
        self.shape.len()
    }

    pub fn len(&self) -> usize {
        self.data.len()
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn data(&self) -> &[S] {
        &self.data
    }

    pub fn data_mut(&mut self) -> &mut [S] {
        &mut self.data
    }

    pub fn into_data(self) -> Vec<S> {
        self.data
    }

    /// Single stored value; panics if the tensor does not hold exactly one.
    pub fn item(&self) -> S {
        assert_eq!(self.data.len(), 1, "item() on tensor of length {}", self.data.len());
        self.data[0]
    }

    pub fn is_matrix(&self) -> bool {
        self.shape.len() == 2
    }

    pub fn rows(&self) -> usize {
        assert!(self.is_matrix(), "rows() on shape {:?}", self.shape);
        self.shape[0]
    }

    pub fn cols(&self) -> usize {
        assert!(self.is_matrix(), "cols() on shape {:?}", self.shape);
        self.shape[1]
    }

    pub fn at(&self, row: usize, col: usize) -> S {
        self.data[row * self.cols() + col]
    }

    pub fn row(&self, row: usize) -> &[S] {
        let cols = self.cols();
        &self.data[row * cols..(row + 1) * cols]
    }

    /// Matrix-vector product `self * x`.
    pub fn matvec(&self, x: &Tensor<S>) -> Result<Tensor<S>> {
        if !self.is_matrix() || x.rank() != 1 || self.cols() != x.len() {
            return Err(Error::dimension("matvec", &self.shape, x.shape()));
        }
        let mut out = vec![S::zero(); self.rows()];
        for (r, slot) in out.iter_mut().enumerate() {
            *slot = dot_slices(self.row(r), x.data());
        }
        Ok(Tensor::vector(out))
    }

    /// Transposed matrix-vector product `selfᵀ * y`.
    pub fn matvec_transpose(&self, y: &Tensor<S>) -> Result<Tensor<S>> {
        if !self.is_matrix() || y.rank() != 1 || self.rows() != y.len() {
            return Err(Error::dimension("matvec_transpose", &self.shape, y.shape()));
        }
        let cols = self.cols();
        let mut out = vec![S::zero(); cols];
        for (r, &yr) in y.data().iter().enumerate() {
            for (slot, &w) in out.iter_mut().zip(self.row(r)) {
                *slot = *slot + w * yr;
            }
        }
        Ok(Tensor::vector(out))
    }

    /// Rank-one update `self += y ⊗ x` for gradient accumulation.
    pub fn add_outer(&mut self, y: &[S], x: &[S]) {
        let cols = self.cols();
        debug_assert_eq!(self.rows(), y.len());
        debug_assert_eq!(cols, x.len());
        for (r, &yr) in y.iter().enumerate() {
            let row = &mut self.data[r * cols..(r + 1) * cols];
            for (slot, &xc) in row.iter_mut().zip(x) {
                *slot = *slot + yr * xc;
            }
        }
    }

    /// `out[i] += self[i, col] * scale` for a single matrix column.
    pub fn add_column_into(&self, col: usize, scale: S, out: &mut [S]) {
        let cols = self.cols();
        debug_assert!(col < cols);
        debug_assert_eq!(self.rows(), out.len());
        for (r, slot) in out.iter_mut().enumerate() {
            *slot = *slot + self.data[r * cols + col] * scale;
        }
    }

    pub fn dot(&self, other: &Tensor<S>) -> Result<S> {
        if self.len() != other.len() {
            return Err(Error::dimension("dot", &self.shape, other.shape()));
        }
        Ok(dot_slices(self.data(), other.data()))
    }

    pub fn map(&self, f: impl Fn(S) -> S) -> Tensor<S> {
        Tensor {
            shape: self.shape.clone(),
            data: self.data.iter().map(|&v| f(v)).collect(),
        }
    }

    pub fn zip_map(&self, other: &Tensor<S>, f: impl Fn(S, S) -> S) -> Result<Tensor<S>> {
        if self.shape != other.shape {
            return Err(Error::dimension("elementwise op", &self.shape, other.shape()));
        }
        Ok(Tensor {
            shape: self.shape.clone(),
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(&a, &b)| f(a, b))
                .collect(),
        })
    }

    pub fn add(&self, other: &Tensor<S>) -> Result<Tensor<S>> {
        self.zip_map(other, |a, b| a + b)
    }

    pub fn add_assign(&mut self, other: &Tensor<S>) -> Result<()> {
        if self.shape != other.shape {
            return Err(Error::dimension("add_assign", &self.shape, other.shape()));
        }
        for (slot, &v) in self.data.iter_mut().zip(&other.data) {
            *slot = *slot + v;
        }
        Ok(())
    }

    pub fn add_assign_scaled(&mut self, other: &Tensor<S>, factor: S) -> Result<()> {
        if self.shape != other.shape {
            return Err(Error::dimension("add_assign_scaled", &self.shape, other.shape()));
        }
        for (slot, &v) in self.data.iter_mut().zip(&other.data) {
            *slot = *slot + v * factor;
        }
        Ok(())
    }

    pub fn scale_in_place(&mut self, factor: S) {
        for slot in &mut self.data {
            *slot = *slot * factor;
        }
    }

    pub fn squared_norm(&self) -> S {
        dot_slices(self.data(), self.data())
    }

    pub fn max_abs(&self) -> S {
        self.data
            .iter()
            .fold(S::zero(), |acc, &v| acc.max(v.abs()))
    }

    pub fn all_finite(&self) -> bool {
        self.data.iter().all(|v| v.is_finite())
    }
}

/// Fixed-order dot product with four-way accumulator unrolling.
///
/// The split accumulators speed up the hot matrix-vector loops noticeably;
/// the summation order is still a pure function of the slice length, so the
/// result is reproducible.
pub fn dot_slices<S: Scalar>(a: &[S], b: &[S]) -> S {
    debug_assert_eq!(a.len(), b.len());
    let mut acc = [S::zero(); 4];
    let chunks = a.len() / 4;
    for i in 0..chunks {
        let j = i * 4;
        acc[0] = acc[0] + a[j] * b[j];
        acc[1] = acc[1] + a[j + 1] * b[j + 1];
        acc[2] = acc[2] + a[j + 2] * b[j + 2];
        acc[3] = acc[3] + a[j + 3] * b[j + 3];
    }
    let mut tail = S::zero();
    for j in chunks * 4..a.len() {
        tail = tail + a[j] * b[j];
    }
    ((acc[0] + acc[1]) + (acc[2] + acc[3])) + tail
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn construction_checks_length() {
        assert!(Tensor::<f64>::new(vec![2, 3], vec![0.0; 6]).is_ok());
        assert!(Tensor::<f64>::new(vec![2, 3], vec![0.0; 5]).is_err());
    }

    #[test]
    fn matvec_matches_hand_computation() {
        let w = Tensor::matrix(2, 2, vec![1.0, 2.0, 3.0, 4.0]).unwrap();
        let x = Tensor::vector(vec![1.0, 1.0]);
        let y = w.matvec(&x).unwrap();
        assert_eq!(y.data(), &[3.0, 7.0]);
    }

    #[test]
    fn matvec_rejects_mismatch() {
        let w = Tensor::<f64>::zeros(&[2, 3]);
        let x = Tensor::vector(vec![1.0, 2.0]);
        assert!(matches!(w.matvec(&x), Err(Error::Dimension { .. })));
    }

    #[test]
    fn transpose_product_agrees_with_explicit_transpose() {
        let w = Tensor::matrix(2, 3, vec![1.0, 2.0, 3.0, 4.0, 5.0, 6.0]).unwrap();
        let y = Tensor::vector(vec![1.0, -1.0]);
        let out = w.matvec_transpose(&y).unwrap();
        assert_eq!(out.data(), &[-3.0, -3.0, -3.0]);
    }

    #[test]
    fn dot_slices_is_order_stable() {
        let a: Vec<f64> = (0..11).map(|i| i as f64 * 0.37).collect();
        let b: Vec<f64> = (0..11).map(|i| (i as f64).sin()).collect();
        assert_eq!(dot_slices(&a, &b).to_bits(), dot_slices(&a, &b).to_bits());
    }
}
