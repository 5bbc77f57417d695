use std::ops::{Deref, Index};

use crate::error::{invalid, Result};

/// A point or direction in `R^n`. The dimension is fixed at construction.
#[derive(Clone, Debug, PartialEq)]
pub struct Vector(Vec<f64>);

impl Vector {
    /// Checked constructor: non-empty with finite components.
    pub fn new(components: Vec<f64>) -> Result<Self> {
        if components.is_empty() {
            return Err(invalid("vector must have dimension >= 1"));
        }
        if let Some(i) = components.iter().position(|c| !c.is_finite()) {
            return Err(invalid(format!("vector component {i} is not finite")));
        }
        Ok(Self(components))
    }

    pub(crate) fn from_raw(components: Vec<f64>) -> Self {
        Self(components)
    }

    pub fn zeros(n: usize) -> Self {
        Self(vec![0.0; n])
    }

    pub fn filled(n: usize, value: f64) -> Self {
        Self(vec![value; n])
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.0
    }

    pub fn dot(&self, other: &Vector) -> f64 {
        self.0.iter().zip(&other.0).map(|(a, b)| a * b).sum()
    }

    pub fn norm_sq(&self) -> f64 {
        self.0.iter().map(|a| a * a).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sq().sqrt()
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|c| c.is_finite())
    }

    /// `self + alpha * dir`
    pub fn add_scaled(&self, alpha: f64, dir: &Vector) -> Vector {
        Self(self.0.iter().zip(&dir.0).map(|(a, d)| a + alpha * d).collect())
    }

    pub fn scaled(&self, alpha: f64) -> Vector {
        Self(self.0.iter().map(|a| alpha * a).collect())
    }

    pub fn sub(&self, other: &Vector) -> Vector {
        self.add_scaled(-1.0, other)
    }

    pub fn distance_sq(&self, other: &Vector) -> f64 {
        self.0.iter().zip(&other.0).map(|(a, b)| (a - b) * (a - b)).sum()
    }

    pub(crate) fn component_mut(&mut self, i: usize) -> &mut f64 {
        &mut self.0[i]
    }
}

impl Deref for Vector {
    type Target = [f64];

    fn deref(&self) -> &[f64] {
        &self.0
    }
}

impl Index<usize> for Vector {
    type Output = f64;

    fn index(&self, i: usize) -> &f64 {
        &self.0[i]
    }
}

impl TryFrom<Vec<f64>> for Vector {
    type Error = crate::Error;

    fn try_from(v: Vec<f64>) -> Result<Self> {
        Vector::new(v)
    }
}
