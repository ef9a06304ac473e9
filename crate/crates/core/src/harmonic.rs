//! Harmonic functions on the curve, evaluated by address.
//!
//! The level-`m` graph is a chain with unit conductances, so the harmonic
//! extension of boundary values `(a, b)` is linear in the arc-length
//! parameter. The parameter of `f_w(P_0)` is the base-8 fraction
//! `sum (w_i - 1) / 8^i`; `f_w(P_1)` adds `8^-|w|`.

use crate::error::Result;
use crate::geometry::{cell_count, check_level, Word};
use crate::scalar::Scalar;

#[derive(Clone, Debug, PartialEq)]
pub struct BoundaryData<T> {
    /// Value at `P_0`.
    pub a: T,
    /// Value at `P_1`.
    pub b: T,
}

impl<T: Scalar> BoundaryData<T> {
    pub fn new(a: T, b: T) -> Self {
        BoundaryData { a, b }
    }

    fn at_param(&self, theta: T) -> T {
        self.a.clone() + (self.b.clone() - self.a.clone()) * theta
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Corner {
    P0,
    P1,
}

/// Arc-length parameter of `f_w(corner)`.
pub fn word_param<T: Scalar>(w: &Word, corner: Corner) -> T {
    let eight = T::from_i64(8);
    let mut scale = T::one();
    let mut theta = T::zero();
    for &l in w.letters() {
        scale = scale / eight.clone();
        theta = theta + T::from_i64(i64::from(l) - 1) * scale.clone();
    }
    match corner {
        Corner::P0 => theta,
        Corner::P1 => theta + scale,
    }
}

/// Value at `f_w(corner)` of the harmonic function with boundary data `bd`.
pub fn harmonic_at<T: Scalar>(bd: &BoundaryData<T>, w: &Word, corner: Corner) -> T {
    bd.at_param(word_param(w, corner))
}

/// The harmonic function sampled on `V_m` in chain order.
pub fn sample_harmonic<T: Scalar>(bd: &BoundaryData<T>, m: u32) -> Result<Vec<T>> {
    check_level(m)?;
    let cells = cell_count(m);
    let denom = T::from_usize(cells);
    Ok((0..=cells)
        .map(|i| bd.at_param(T::from_usize(i) / denom.clone()))
        .collect())
}
