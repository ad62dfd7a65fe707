//! The three built-in latent contact Hamiltonians and their flows.
//!
//! `Periodic` is the plain harmonic oscillator, `Stable` adds a `+s` damping
//! term that depletes the energy and pulls everything to the origin, and
//! `Safe` multiplies the whole energy by `s²` so the system can stop with
//! non-zero `q, p` once the action is exhausted.

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::hamiltonian::{
    integrate_reference, vector_field, HamiltonianField, HamiltonianHessian,
};
use crate::state::{dot, ContactState, Trajectory};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LatentKind {
    Periodic,
    Stable,
    Safe,
}

impl LatentKind {
    pub fn parse(name: &str) -> Option<Self> {
        match name.trim().to_ascii_lowercase().as_str() {
            "periodic" => Some(Self::Periodic),
            "stable" => Some(Self::Stable),
            "safe" => Some(Self::Safe),
            _ => None,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Self::Periodic => "periodic",
            Self::Stable => "stable",
            Self::Safe => "safe",
        }
    }
}

/// A fixed latent Hamiltonian of one of the three built-in kinds.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LatentSpec {
    pub kind: LatentKind,
    pub dim: usize,
}

impl LatentSpec {
    pub fn new(kind: LatentKind, dim: usize) -> Self {
        assert!(dim >= 1, "latent dimension must be at least 1");
        Self { kind, dim }
    }

    fn mechanical_energy(z: &ContactState) -> f64 {
        0.5 * dot(&z.p, &z.p) + 0.5 * dot(&z.q, &z.q)
    }
}

impl HamiltonianField for LatentSpec {
    fn dim(&self) -> usize {
        self.dim
    }

    fn value(&self, z: &ContactState) -> f64 {
        let e = Self::mechanical_energy(z);
        match self.kind {
            LatentKind::Periodic => e,
            LatentKind::Stable => e + z.s,
            LatentKind::Safe => (e + z.s) * z.s * z.s,
        }
    }

    fn grad_q(&self, z: &ContactState) -> Vec<f64> {
        match self.kind {
            LatentKind::Periodic | LatentKind::Stable => z.q.clone(),
            LatentKind::Safe => {
                let s2 = z.s * z.s;
                z.q.iter().map(|q| q * s2).collect()
            }
        }
    }

    fn grad_p(&self, z: &ContactState) -> Vec<f64> {
        match self.kind {
            LatentKind::Periodic | LatentKind::Stable => z.p.clone(),
            LatentKind::Safe => {
                let s2 = z.s * z.s;
                z.p.iter().map(|p| p * s2).collect()
            }
        }
    }

    fn dh_ds(&self, z: &ContactState) -> f64 {
        match self.kind {
            LatentKind::Periodic => 0.0,
            LatentKind::Stable => 1.0,
            LatentKind::Safe => {
                let e = Self::mechanical_energy(z);
                2.0 * z.s * (e + z.s) + z.s * z.s
            }
        }
    }
}

impl HamiltonianHessian for LatentSpec {
    fn hess_qq(&self, z: &ContactState) -> Vec<f64> {
        let d = self.dim;
        let diag = match self.kind {
            LatentKind::Periodic | LatentKind::Stable => 1.0,
            LatentKind::Safe => z.s * z.s,
        };
        let mut m = vec![0.0; d * d];
        for i in 0..d {
            m[i * d + i] = diag;
        }
        m
    }

    fn hess_pp(&self, z: &ContactState) -> Vec<f64> {
        self.hess_qq(z)
    }

    fn hess_qp(&self, _z: &ContactState) -> Vec<f64> {
        vec![0.0; self.dim * self.dim]
    }

    fn hess_qs(&self, z: &ContactState) -> Vec<f64> {
        match self.kind {
            LatentKind::Periodic | LatentKind::Stable => vec![0.0; self.dim],
            LatentKind::Safe => z.q.iter().map(|q| 2.0 * z.s * q).collect(),
        }
    }

    fn hess_ps(&self, z: &ContactState) -> Vec<f64> {
        match self.kind {
            LatentKind::Periodic | LatentKind::Stable => vec![0.0; self.dim],
            LatentKind::Safe => z.p.iter().map(|p| 2.0 * z.s * p).collect(),
        }
    }

    fn hess_ss(&self, z: &ContactState) -> f64 {
        match self.kind {
            LatentKind::Periodic | LatentKind::Stable => 0.0,
            LatentKind::Safe => 2.0 * Self::mechanical_energy(z) + 6.0 * z.s,
        }
    }
}

/// Integrate the latent flow for a horizon `t` with step `dt`.
pub fn latent_flow(spec: &LatentSpec, z0: &ContactState, t: f64, dt: f64) -> Result<Trajectory> {
    let n = (t / dt).round() as usize;
    integrate_reference(spec, z0, dt, n)
}

/// Measured energy along a trajectory together with the prediction of the
/// damping law `H(t) = H(0) exp(-∫ ∂H/∂s dτ)` evaluated by trapezoidal
/// quadrature along the same samples.
#[derive(Debug, Clone)]
pub struct EnergyCurves {
    pub measured: Vec<f64>,
    pub predicted: Vec<f64>,
}

pub fn energy_along_flow(spec: &LatentSpec, traj: &Trajectory) -> EnergyCurves {
    let h0 = spec.value(&traj.states[0]);
    let mut measured = Vec::with_capacity(traj.len());
    let mut predicted = Vec::with_capacity(traj.len());
    let mut integral = 0.0;
    let mut prev_hs = spec.dh_ds(&traj.states[0]);
    for (k, z) in traj.states.iter().enumerate() {
        measured.push(spec.value(z));
        let hs = spec.dh_ds(z);
        if k > 0 {
            integral += 0.5 * (prev_hs + hs) * traj.dt;
        }
        prev_hs = hs;
        predicted.push(h0 * (-integral).exp());
    }
    EnergyCurves { measured, predicted }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hamiltonian_values_match_closed_forms() {
        let stable = LatentSpec::new(LatentKind::Stable, 2);
        assert_eq!(stable.value(&ContactState::zeros(2)), 0.0);

        let periodic = LatentSpec::new(LatentKind::Periodic, 2);
        let z = ContactState::new(vec![1.0, 0.0], vec![0.0, 0.0], 3.7);
        assert_eq!(periodic.value(&z), 0.5);

        let safe = LatentSpec::new(LatentKind::Safe, 2);
        let z = ContactState::new(vec![2.0, -1.0], vec![0.3, 0.4], 0.0);
        assert_eq!(safe.value(&z), 0.0);
    }

    #[test]
    fn safe_with_zero_action_is_a_fixed_point() {
        let spec = LatentSpec::new(LatentKind::Safe, 1);
        let z0 = ContactState::new(vec![0.7], vec![-0.4], 0.0);
        let traj = latent_flow(&spec, &z0, 1.0, 0.01).unwrap();
        for z in &traj.states {
            assert_eq!(z.q, z0.q);
            assert_eq!(z.p, z0.p);
            assert_eq!(z.s, 0.0);
        }
    }

    #[test]
    fn stable_flow_contracts_to_origin() {
        let spec = LatentSpec::new(LatentKind::Stable, 2);
        let z0 = ContactState::new(vec![1.0, -0.5], vec![0.2, 0.8], 0.3);
        let traj = latent_flow(&spec, &z0, 10.0, 1e-3).unwrap();
        let n0 = z0.norm_inf();
        let nt = traj.states.last().unwrap().norm_inf();
        assert!(nt < 0.05 * n0, "norm only decayed to {nt} from {n0}");
    }

    #[test]
    fn periodic_flow_returns_after_one_period() {
        let spec = LatentSpec::new(LatentKind::Periodic, 1);
        let z0 = ContactState::new(vec![1.0], vec![0.0], 0.0);
        let t = 2.0 * std::f64::consts::PI;
        let dt = t / ((t / 1e-4).round());
        let traj = latent_flow(&spec, &z0, t, dt).unwrap();
        let q_end = traj.states.last().unwrap().q[0];
        assert!((q_end - 1.0).abs() < 1e-4);
    }

    #[test]
    fn energy_law_matches_for_all_kinds() {
        // Periodic: both curves constant; Stable: e^{-t}; Safe from s=0: zero.
        let z0 = ContactState::new(vec![0.8], vec![-0.2], 0.4);
        for kind in [LatentKind::Periodic, LatentKind::Stable] {
            let spec = LatentSpec::new(kind, 1);
            let traj = latent_flow(&spec, &z0, 5.0, 1e-3).unwrap();
            let curves = energy_along_flow(&spec, &traj);
            let h0 = curves.measured[0];
            for (m, p) in curves.measured.iter().zip(&curves.predicted) {
                assert!((m - p).abs() / h0.abs() < 1e-3, "kind {kind:?}: {m} vs {p}");
            }
        }
        let spec = LatentSpec::new(LatentKind::Safe, 1);
        let z0 = ContactState::new(vec![0.8], vec![-0.2], 0.0);
        let traj = latent_flow(&spec, &z0, 2.0, 1e-3).unwrap();
        let curves = energy_along_flow(&spec, &traj);
        for (m, p) in curves.measured.iter().zip(&curves.predicted) {
            assert_eq!(*m, 0.0);
            assert_eq!(*p, 0.0);
        }
    }

    #[test]
    fn periodic_conserves_energy_over_one_period() {
        let spec = LatentSpec::new(LatentKind::Periodic, 1);
        let z0 = ContactState::new(vec![1.0], vec![0.0], 0.0);
        let t = 2.0 * std::f64::consts::PI;
        let n = (t / 1e-4).round() as usize;
        let traj = integrate_reference(&spec, &z0, t / n as f64, n).unwrap();
        let h0 = spec.value(&z0);
        for z in &traj.states {
            assert!((spec.value(z) - h0).abs() / h0 < 1e-6);
        }
    }

    #[test]
    fn vector_field_consistency_for_safe_spec() {
        // Safe couples s multiplicatively; make sure the hand-written partials
        // stay in sync with the value.
        use rand::prelude::*;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        let spec = LatentSpec::new(LatentKind::Safe, 3);
        for _ in 0..50 {
            let z = ContactState::new(
                (0..3).map(|_| rng.random_range(-1.0..1.0)).collect(),
                (0..3).map(|_| rng.random_range(-1.0..1.0)).collect(),
                rng.random_range(-1.0..1.0),
            );
            let e = 1e-6;
            let mut zp = z.clone();
            zp.s += e;
            let mut zm = z.clone();
            zm.s -= e;
            let fd = (spec.value(&zp) - spec.value(&zm)) / (2.0 * e);
            let an = spec.dh_ds(&z);
            assert!((fd - an).abs() < 1e-6 * (1.0 + an.abs()));
            let _ = vector_field(&spec, &z).unwrap();
        }
    }
}
