//! Canonical contact coordinates and sampled trajectories.
//!
//! A point on the (2d+1)-dimensional contact manifold is written in the
//! canonical coordinates `{q, p, s}`: position, conjugate momentum, and the
//! accumulated (Lagrangian) action.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// One point `{q, p, s}` on the contact manifold.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ContactState {
    pub q: Vec<f64>,
    pub p: Vec<f64>,
    pub s: f64,
}

impl ContactState {
    pub fn new(q: Vec<f64>, p: Vec<f64>, s: f64) -> Self {
        debug_assert_eq!(q.len(), p.len());
        Self { q, p, s }
    }

    /// Origin of the `(2d+1)`-dimensional manifold.
    pub fn zeros(dim: usize) -> Self {
        Self {
            q: vec![0.0; dim],
            p: vec![0.0; dim],
            s: 0.0,
        }
    }

    pub fn dim(&self) -> usize {
        self.q.len()
    }

    /// Flatten to `[q, p, s]`.
    pub fn to_vec(&self) -> Vec<f64> {
        let mut v = Vec::with_capacity(2 * self.q.len() + 1);
        v.extend_from_slice(&self.q);
        v.extend_from_slice(&self.p);
        v.push(self.s);
        v
    }

    /// Rebuild from a flat `[q, p, s]` vector of length `2*dim + 1`.
    pub fn from_vec(v: &[f64], dim: usize) -> Result<Self> {
        if v.len() != 2 * dim + 1 {
            return Err(Error::DimensionMismatch {
                context: "ContactState::from_vec",
                expected: 2 * dim + 1,
                got: v.len(),
            });
        }
        Ok(Self {
            q: v[..dim].to_vec(),
            p: v[dim..2 * dim].to_vec(),
            s: v[2 * dim],
        })
    }

    pub fn is_finite(&self) -> bool {
        self.s.is_finite()
            && self.q.iter().all(|x| x.is_finite())
            && self.p.iter().all(|x| x.is_finite())
    }

    /// Infinity norm over all coordinates.
    pub fn norm_inf(&self) -> f64 {
        self.q
            .iter()
            .chain(self.p.iter())
            .chain(std::iter::once(&self.s))
            .fold(0.0_f64, |m, x| m.max(x.abs()))
    }

    /// Infinity-norm distance to another state.
    pub fn dist_inf(&self, other: &Self) -> f64 {
        let mut m: f64 = (self.s - other.s).abs();
        for i in 0..self.q.len() {
            m = m.max((self.q[i] - other.q[i]).abs());
            m = m.max((self.p[i] - other.p[i]).abs());
        }
        m
    }
}

/// Uniformly time-sampled sequence of contact states.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Trajectory {
    pub states: Vec<ContactState>,
    /// Time step between consecutive states; strictly positive.
    pub dt: f64,
    /// Time of the first state.
    pub t0: f64,
}

impl Trajectory {
    pub fn new(states: Vec<ContactState>, dt: f64, t0: f64) -> Result<Self> {
        if states.is_empty() {
            return Err(Error::ShapeMismatch("trajectory must have at least one state".into()));
        }
        if !(dt > 0.0) {
            return Err(Error::Config(format!("trajectory dt must be positive, got {dt}")));
        }
        let d = states[0].dim();
        if states.iter().any(|z| z.dim() != d) {
            return Err(Error::ShapeMismatch("all trajectory states must share one dimension".into()));
        }
        Ok(Self { states, dt, t0 })
    }

    pub fn dim(&self) -> usize {
        self.states[0].dim()
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    /// Sample time of state `k`.
    pub fn time(&self, k: usize) -> f64 {
        self.t0 + self.dt * k as f64
    }

    /// Position rows, one `Vec<f64>` of length d per sample.
    pub fn positions(&self) -> Vec<Vec<f64>> {
        self.states.iter().map(|z| z.q.clone()).collect()
    }
}

// Small dense-vector helpers shared across the crate.
pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub(crate) fn axpy(y: &mut [f64], a: f64, x: &[f64]) {
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi += a * xi;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flat_roundtrip() {
        let z = ContactState::new(vec![1.0, 2.0], vec![-0.5, 0.25], 3.0);
        let v = z.to_vec();
        assert_eq!(v, vec![1.0, 2.0, -0.5, 0.25, 3.0]);
        let back = ContactState::from_vec(&v, 2).unwrap();
        assert_eq!(back, z);
    }

    #[test]
    fn from_vec_rejects_bad_length() {
        assert!(ContactState::from_vec(&[1.0, 2.0], 2).is_err());
    }

    #[test]
    fn trajectory_rejects_mixed_dims() {
        let a = ContactState::zeros(1);
        let b = ContactState::zeros(2);
        assert!(Trajectory::new(vec![a, b], 0.1, 0.0).is_err());
    }

    #[test]
    fn trajectory_rejects_nonpositive_dt() {
        let a = ContactState::zeros(1);
        assert!(Trajectory::new(vec![a], 0.0, 0.0).is_err());
    }
}
