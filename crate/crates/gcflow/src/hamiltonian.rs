//! Contact Hamiltonian vector fields and the reference integrator.
//!
//! In canonical coordinates the vector field of a contact Hamiltonian H is
//!
//! ```text
//! q̇_i = ∂H/∂p_i
//! ṗ_i = -∂H/∂q_i - p_i ∂H/∂s
//! ṡ   = Σ_i p_i ∂H/∂p_i - H
//! ```
//!
//! The reference integrator is a classical fourth-order one-step method over
//! this field; it serves as the high-accuracy oracle against which the
//! structure-preserving splitting scheme is compared.

use crate::error::{Error, Result};
use crate::state::{dot, ContactState, Trajectory};

/// Default infinity-norm bound above which integration reports divergence.
pub const DEFAULT_BLOWUP_BOUND: f64 = 1e6;

/// Evaluator contract for a contact Hamiltonian and its exact first partials.
pub trait HamiltonianField {
    fn dim(&self) -> usize;
    fn value(&self, z: &ContactState) -> f64;
    fn grad_q(&self, z: &ContactState) -> Vec<f64>;
    fn grad_p(&self, z: &ContactState) -> Vec<f64>;
    fn dh_ds(&self, z: &ContactState) -> f64;
}

/// Tangent triple `(q̇, ṗ, ṡ)` at a state.
#[derive(Debug, Clone, PartialEq)]
pub struct Tangent {
    pub dq: Vec<f64>,
    pub dp: Vec<f64>,
    pub ds: f64,
}

impl Tangent {
    pub fn to_vec(&self) -> Vec<f64> {
        let mut v = Vec::with_capacity(2 * self.dq.len() + 1);
        v.extend_from_slice(&self.dq);
        v.extend_from_slice(&self.dp);
        v.push(self.ds);
        v
    }
}

/// Contact Hamiltonian vector field at `z`.
pub fn vector_field<H: HamiltonianField + ?Sized>(h: &H, z: &ContactState) -> Result<Tangent> {
    let d = z.dim();
    if h.dim() != d {
        return Err(Error::DimensionMismatch {
            context: "vector_field",
            expected: h.dim(),
            got: d,
        });
    }
    let hq = h.grad_q(z);
    let hp = h.grad_p(z);
    let hs = h.dh_ds(z);
    let hv = h.value(z);

    for (i, g) in hq.iter().enumerate() {
        if !g.is_finite() {
            return Err(Error::NonFinite { component: format!("dH/dq[{i}]") });
        }
    }
    for (i, g) in hp.iter().enumerate() {
        if !g.is_finite() {
            return Err(Error::NonFinite { component: format!("dH/dp[{i}]") });
        }
    }
    if !hs.is_finite() {
        return Err(Error::NonFinite { component: "dH/ds".into() });
    }
    if !hv.is_finite() {
        return Err(Error::NonFinite { component: "H".into() });
    }

    let dq = hp.clone();
    let dp: Vec<f64> = (0..d).map(|i| -hq[i] - z.p[i] * hs).collect();
    let ds = dot(&z.p, &hp) - hv;
    Ok(Tangent { dq, dp, ds })
}

fn add_scaled(z: &ContactState, k: &Tangent, a: f64) -> ContactState {
    let d = z.dim();
    let mut q = z.q.clone();
    let mut p = z.p.clone();
    for i in 0..d {
        q[i] += a * k.dq[i];
        p[i] += a * k.dp[i];
    }
    ContactState { q, p, s: z.s + a * k.ds }
}

/// One classical fourth-order step of duration `dt`.
pub fn reference_step<H: HamiltonianField + ?Sized>(
    h: &H,
    z: &ContactState,
    dt: f64,
) -> Result<ContactState> {
    let k1 = vector_field(h, z)?;
    let k2 = vector_field(h, &add_scaled(z, &k1, 0.5 * dt))?;
    let k3 = vector_field(h, &add_scaled(z, &k2, 0.5 * dt))?;
    let k4 = vector_field(h, &add_scaled(z, &k3, dt))?;
    let d = z.dim();
    let mut q = z.q.clone();
    let mut p = z.p.clone();
    let c = dt / 6.0;
    for i in 0..d {
        q[i] += c * (k1.dq[i] + 2.0 * k2.dq[i] + 2.0 * k3.dq[i] + k4.dq[i]);
        p[i] += c * (k1.dp[i] + 2.0 * k2.dp[i] + 2.0 * k3.dp[i] + k4.dp[i]);
    }
    let s = z.s + c * (k1.ds + 2.0 * k2.ds + 2.0 * k3.ds + k4.ds);
    Ok(ContactState { q, p, s })
}

/// Integrate the field for `n` steps of size `dt` with a blow-up guard.
pub fn integrate_reference<H: HamiltonianField + ?Sized>(
    h: &H,
    z0: &ContactState,
    dt: f64,
    n: usize,
) -> Result<Trajectory> {
    integrate_reference_bounded(h, z0, dt, n, DEFAULT_BLOWUP_BOUND)
}

/// As [`integrate_reference`] with a configurable blow-up bound.
pub fn integrate_reference_bounded<H: HamiltonianField + ?Sized>(
    h: &H,
    z0: &ContactState,
    dt: f64,
    n: usize,
    blowup: f64,
) -> Result<Trajectory> {
    if !(dt > 0.0) {
        return Err(Error::Config(format!("integration dt must be positive, got {dt}")));
    }
    let mut states = Vec::with_capacity(n + 1);
    states.push(z0.clone());
    let mut z = z0.clone();
    for step in 0..n {
        z = reference_step(h, &z, dt)?;
        if !z.is_finite() || z.norm_inf() > blowup {
            return Err(Error::Divergence { step, bound: blowup });
        }
        states.push(z.clone());
    }
    Trajectory::new(states, dt, 0.0)
}

/// Second partial derivatives of a Hamiltonian, needed to propagate state
/// sensitivities through the reference integrator.
pub trait HamiltonianHessian: HamiltonianField {
    /// d×d block ∂²H/∂q∂q (row-major).
    fn hess_qq(&self, z: &ContactState) -> Vec<f64>;
    /// d×d block ∂²H/∂p∂p.
    fn hess_pp(&self, z: &ContactState) -> Vec<f64>;
    /// d×d block ∂²H/∂q∂p (entry (i,j) = ∂²H/∂q_i∂p_j).
    fn hess_qp(&self, z: &ContactState) -> Vec<f64>;
    /// d-vector ∂²H/∂q∂s.
    fn hess_qs(&self, z: &ContactState) -> Vec<f64>;
    /// d-vector ∂²H/∂p∂s.
    fn hess_ps(&self, z: &ContactState) -> Vec<f64>;
    fn hess_ss(&self, z: &ContactState) -> f64;
}

/// Jacobian of the contact vector field, as a dense (2d+1)² row-major matrix
/// in the flat `[q, p, s]` ordering.
pub fn field_jacobian<H: HamiltonianHessian + ?Sized>(h: &H, z: &ContactState) -> Vec<f64> {
    let d = z.dim();
    let n = 2 * d + 1;
    let hqq = h.hess_qq(z);
    let hpp = h.hess_pp(z);
    let hqp = h.hess_qp(z);
    let hqs = h.hess_qs(z);
    let hps = h.hess_ps(z);
    let hss = h.hess_ss(z);
    let hq = h.grad_q(z);
    let hp = h.grad_p(z);
    let hs = h.dh_ds(z);

    let mut jac = vec![0.0; n * n];
    // Row block q̇ = H_p: ∂/∂q = H_pq = (H_qp)ᵀ, ∂/∂p = H_pp, ∂/∂s = H_ps.
    for i in 0..d {
        for j in 0..d {
            jac[i * n + j] = hqp[j * d + i];
            jac[i * n + d + j] = hpp[i * d + j];
        }
        jac[i * n + 2 * d] = hps[i];
    }
    // Row block ṗ = -H_q - p H_s.
    for i in 0..d {
        let r = (d + i) * n;
        for j in 0..d {
            jac[r + j] = -hqq[i * d + j] - z.p[i] * hqs[j];
            jac[r + d + j] = -hqp[i * d + j] - z.p[i] * hps[j];
            if i == j {
                jac[r + d + j] -= hs;
            }
        }
        jac[r + 2 * d] = -hqs[i] - z.p[i] * hss;
    }
    // Row ṡ = pᵀH_p - H.
    {
        let r = 2 * d * n;
        for j in 0..d {
            // ∂/∂q_j: Σ_i p_i H_{p_i q_j} - H_q_j
            let mut acc = -hq[j];
            for i in 0..d {
                acc += z.p[i] * hqp[j * d + i];
            }
            jac[r + j] = acc;
            // ∂/∂p_j: H_p_j + Σ_i p_i H_{p_i p_j} - H_p_j = (H_pp p)_j
            let mut accp = 0.0;
            for i in 0..d {
                accp += hpp[j * d + i] * z.p[i];
            }
            jac[r + d + j] = accp;
        }
        jac[r + 2 * d] = dot(&z.p, &hps) - hs;
    }
    jac
}

fn mat_vec(a: &[f64], x: &[f64], n: usize) -> Vec<f64> {
    let mut y = vec![0.0; n];
    for i in 0..n {
        y[i] = dot(&a[i * n..(i + 1) * n], x);
    }
    y
}

fn mat_mul(a: &[f64], b: &[f64], n: usize) -> Vec<f64> {
    let mut c = vec![0.0; n * n];
    for i in 0..n {
        for k in 0..n {
            let aik = a[i * n + k];
            if aik == 0.0 {
                continue;
            }
            for j in 0..n {
                c[i * n + j] += aik * b[k * n + j];
            }
        }
    }
    c
}

/// Integrate and propagate `J(t) = ∂z(t)/∂z(0)` jointly. The sensitivity
/// recursion is the exact derivative of the discrete fourth-order step, so
/// gradients pulled back through `jacobians` match finite differences of the
/// integrator itself.
pub fn integrate_with_sensitivity<H: HamiltonianHessian + ?Sized>(
    h: &H,
    z0: &ContactState,
    dt: f64,
    n: usize,
    blowup: f64,
) -> Result<(Trajectory, Vec<Vec<f64>>)> {
    if !(dt > 0.0) {
        return Err(Error::Config(format!("integration dt must be positive, got {dt}")));
    }
    let d = z0.dim();
    let m = 2 * d + 1;
    let mut states = Vec::with_capacity(n + 1);
    let mut jacs = Vec::with_capacity(n + 1);
    let eye: Vec<f64> = {
        let mut e = vec![0.0; m * m];
        for i in 0..m {
            e[i * m + i] = 1.0;
        }
        e
    };
    states.push(z0.clone());
    jacs.push(eye.clone());

    let mut z = z0.clone();
    let mut jac = eye.clone();
    for step in 0..n {
        // Stage states and stage sensitivities share the RK4 tableau.
        let k1 = vector_field(h, &z)?;
        let a1 = field_jacobian(h, &z);
        let z2 = add_scaled(&z, &k1, 0.5 * dt);
        let k2 = vector_field(h, &z2)?;
        let a2 = field_jacobian(h, &z2);
        let z3 = add_scaled(&z, &k2, 0.5 * dt);
        let k3 = vector_field(h, &z3)?;
        let a3 = field_jacobian(h, &z3);
        let z4 = add_scaled(&z, &k3, dt);
        let k4 = vector_field(h, &z4)?;
        let a4 = field_jacobian(h, &z4);

        // M_i = ∂k_i/∂z, built by the chain rule through the stages.
        let shifted = |base: &[f64], scale: f64| {
            let mut t = eye.clone();
            for (ti, bi) in t.iter_mut().zip(base) {
                *ti += scale * bi;
            }
            t
        };
        let m1 = a1;
        let m2 = mat_mul(&a2, &shifted(&m1, 0.5 * dt), m);
        let m3 = mat_mul(&a3, &shifted(&m2, 0.5 * dt), m);
        let m4 = mat_mul(&a4, &shifted(&m3, dt), m);

        // Step transition S = I + dt/6 (M1 + 2 M2 + 2 M3 + M4).
        let mut s_mat = eye.clone();
        let c = dt / 6.0;
        for i in 0..m * m {
            s_mat[i] += c * (m1[i] + 2.0 * m2[i] + 2.0 * m3[i] + m4[i]);
        }
        jac = mat_mul(&s_mat, &jac, m);

        let mut zq = z.q.clone();
        let mut zp = z.p.clone();
        for i in 0..d {
            zq[i] += c * (k1.dq[i] + 2.0 * k2.dq[i] + 2.0 * k3.dq[i] + k4.dq[i]);
            zp[i] += c * (k1.dp[i] + 2.0 * k2.dp[i] + 2.0 * k3.dp[i] + k4.dp[i]);
        }
        let zs = z.s + c * (k1.ds + 2.0 * k2.ds + 2.0 * k3.ds + k4.ds);
        z = ContactState { q: zq, p: zp, s: zs };
        if !z.is_finite() || z.norm_inf() > blowup {
            return Err(Error::Divergence { step, bound: blowup });
        }
        states.push(z.clone());
        jacs.push(jac.clone());
    }
    Ok((Trajectory::new(states, dt, 0.0)?, jacs))
}

/// Apply the transpose of a flat row-major matrix to a vector.
pub(crate) fn mat_t_vec(a: &[f64], x: &[f64], n: usize) -> Vec<f64> {
    let mut y = vec![0.0; n];
    for i in 0..n {
        let xi = x[i];
        if xi == 0.0 {
            continue;
        }
        for j in 0..n {
            y[j] += a[i * n + j] * xi;
        }
    }
    y
}

pub(crate) use mat_vec as apply_matrix;
