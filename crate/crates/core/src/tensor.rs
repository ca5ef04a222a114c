//! Mode products on small dense row-major tensors.

use std::ops::{Add, Mul};

use rayon::prelude::*;

/// Contracts the last axis of `data` (shape `shape`) with `matrix`
/// (`rows × shape.last()`, row-major) and moves the new axis to the front.
///
/// Output shape: `[rows, shape[0], …, shape[d−2]]`.
pub(crate) fn contract_last_to_front<T, M>(data: &[T], shape: &[usize], matrix: &[M], rows: usize) -> Vec<T>
where
    T: Copy + Send + Sync + Default + Add<Output = T> + Mul<M, Output = T>,
    M: Copy + Send + Sync,
{
    let inner = *shape.last().expect("tensor has at least one axis");
    debug_assert_eq!(matrix.len(), rows * inner);
    let outer: usize = shape[..shape.len() - 1].iter().product();
    let mut out = vec![T::default(); rows * outer];
    out.par_chunks_mut(outer).enumerate().for_each(|(r, chunk)| {
        let row = &matrix[r * inner..(r + 1) * inner];
        for (o, slot) in chunk.iter_mut().enumerate() {
            let fibre = &data[o * inner..(o + 1) * inner];
            let mut acc = T::default();
            for (&x, &w) in fibre.iter().zip(row) {
                acc = acc + x * w;
            }
            *slot = acc;
        }
    });
    out
}

/// Contracts every axis of a `[n; d]`-shaped tensor with the same
/// `rows × n` matrix; output has shape `[rows; d]` in the original axis order.
pub(crate) fn contract_axes(data: Vec<f64>, shape: &[usize], matrix: &[f64], rows: usize) -> Vec<f64> {
    let mut shape = shape.to_vec();
    let mut data = data;
    for _ in 0..shape.len() {
        data = contract_last_to_front(&data, &shape, matrix, rows);
        shape.pop();
        shape.insert(0, rows);
    }
    data
}
