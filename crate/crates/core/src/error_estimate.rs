//! Lag-`d` a-posteriori error estimates for the shifted Lanczos values.
//!
//! * `mu_{k,d} = beta_k ||v||^2 |e_1^T (T_k^<)^{-1} e_k| |e_1^T (T_{k+d}^<)^{-1} e_{k+1}|`
//! * `nu_{k,d} = |L_k - L_{k+d}|`
//!
//! where `T_k^< = zI - T_{k,k}`. Both become available only after iteration
//! `k + d`.
//!
//! Because `T_k^<` has off-diagonal entries `-beta_j`, the corner entry is
//! `(beta_1 ... beta_{k-1}) / (delta_1 ... delta_k)` with no alternating sign,
//! and the bridge entry is
//! `(beta_1 ... beta_k) / (delta_1 ... delta_{k+d}) * phi_2 ... phi_d` with
//! `phi_d = z - alpha_{k+d}` and `phi_j = z - alpha_{k+j} - beta_{k+j}^2 / phi_{j+1}`.
//! Here `beta_m` couples rows `m` and `m+1`. Only moduli enter `mu`.

use std::collections::VecDeque;

use crate::linalg::C64;

/// Estimates for iteration `k`, emitted after iteration `k + d`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LagEstimate {
    pub k: usize,
    /// The approximation at iteration `k`.
    pub value: C64,
    pub nu: Option<f64>,
    pub mu: Option<f64>,
    pub corner: Option<C64>,
    pub bridge: Option<C64>,
}

/// `g_{k+1} = (beta_k / delta_{k+1}) g_k`. `None` on a zero pivot.
pub fn corner_update(corner: C64, beta: f64, delta_next: C64) -> Option<C64> {
    if delta_next == C64::new(0.0, 0.0) {
        return None;
    }
    Some(corner * beta / delta_next)
}

/// Bridge entry `e_1^T (zI - T_{k+d})^{-1} e_{k+1}` assembled from the corner
/// entry `g_k` and the lag window.
///
/// `alpha_tail` holds `alpha_{k+1} .. alpha_{k+d}`, `beta_tail` holds
/// `beta_{k+1} .. beta_{k+d-1}` and `delta_tail` holds
/// `delta_{k+1} .. delta_{k+d}`. Returns `None` when a `phi_j` or pivot
/// vanishes.
pub fn bridge_entry(
    z: C64,
    corner: C64,
    beta_k: f64,
    alpha_tail: &[f64],
    beta_tail: &[f64],
    delta_tail: &[C64],
) -> Option<C64> {
    let d = delta_tail.len();
    assert!(d >= 1, "lag must be positive");
    assert_eq!(alpha_tail.len(), d);
    assert_eq!(beta_tail.len(), d - 1);
    let zero = C64::new(0.0, 0.0);
    if delta_tail.contains(&zero) {
        return None;
    }
    let mut h = corner * beta_k / delta_tail[0];
    if d >= 2 {
        let mut phi = z - alpha_tail[d - 1];
        if phi == zero {
            return None;
        }
        h *= phi / delta_tail[d - 1];
        for j in (2..d).rev() {
            let b = beta_tail[j - 1];
            phi = z - alpha_tail[j - 1] - b * b / phi;
            if phi == zero {
                return None;
            }
            h *= phi / delta_tail[j - 1];
        }
    }
    Some(h)
}

/// `mu_{k,d}`.
pub fn mu_estimate(beta_k: f64, vnorm2: f64, corner: C64, bridge: C64) -> f64 {
    beta_k * vnorm2 * corner.norm() * bridge.norm()
}

/// `nu_{k,d}`.
pub fn nu_estimate(value_k: C64, value_k_plus_d: C64) -> f64 {
    (value_k - value_k_plus_d).norm()
}

/// `nu`-only lag window, used for the methods that carry no Jacobi matrix.
#[derive(Debug, Clone)]
pub struct DifferenceEstimator {
    d: usize,
    window: VecDeque<(usize, C64)>,
    emitted_through: usize,
}

impl DifferenceEstimator {
    pub fn new(d: usize) -> Self {
        assert!(d >= 1, "lag must be positive");
        DifferenceEstimator {
            d,
            window: VecDeque::with_capacity(d + 2),
            emitted_through: 0,
        }
    }

    /// Pushes the value of iteration `k` (consecutive from 1).
    pub fn push(&mut self, k: usize, value: C64) -> Option<LagEstimate> {
        self.window.push_back((k, value));
        if self.window.len() > self.d + 1 {
            self.window.pop_front();
        }
        if self.window.len() == self.d + 1 {
            let (j, old) = self.window[0];
            self.emitted_through = j;
            return Some(LagEstimate {
                k: j,
                value: old,
                nu: Some(nu_estimate(old, value)),
                mu: None,
                corner: None,
                bridge: None,
            });
        }
        None
    }

    /// For a sequence that is stationary from now on: emits `nu` for every
    /// pending iteration against the final value.
    pub fn finalize_stationary(&mut self) -> Vec<LagEstimate> {
        let Some(&(_, last)) = self.window.back() else {
            return Vec::new();
        };
        let out = self
            .window
            .iter()
            .filter(|(j, _)| *j > self.emitted_through)
            .map(|&(j, v)| LagEstimate {
                k: j,
                value: v,
                nu: Some(nu_estimate(v, last)),
                mu: None,
                corner: None,
                bridge: None,
            })
            .collect();
        self.window.clear();
        out
    }
}

#[derive(Debug, Clone, Copy)]
struct WindowEntry {
    k: usize,
    alpha: f64,
    /// `beta_{k-1}`; zero for `k = 1`.
    beta_prev: f64,
    delta: C64,
    value: C64,
    corner: C64,
}

/// Lag window over `(alpha, beta, delta, L)` for one shift.
#[derive(Debug, Clone)]
pub struct EstimatorState {
    d: usize,
    z: C64,
    vnorm2: f64,
    window: VecDeque<WindowEntry>,
    corner: C64,
    emitted_through: usize,
}

impl EstimatorState {
    pub fn new(d: usize, z: C64, vnorm2: f64) -> Self {
        assert!(d >= 1, "lag must be positive");
        EstimatorState {
            d,
            z,
            vnorm2,
            window: VecDeque::with_capacity(d + 2),
            corner: C64::new(0.0, 0.0),
            emitted_through: 0,
        }
    }

    pub fn lag(&self) -> usize {
        self.d
    }

    /// Current corner entry `g_k`.
    pub fn corner(&self) -> C64 {
        self.corner
    }

    /// Number of tuples held (at most `d + 1`).
    pub fn window_len(&self) -> usize {
        self.window.len()
    }

    /// Pushes iteration `k`: `alpha_k`, `beta_{k-1}` (ignored for `k = 1`),
    /// `delta_k` and `L_k`. Returns the estimates for iteration `k - d` once
    /// available.
    pub fn push(
        &mut self,
        alpha: f64,
        beta_prev: f64,
        delta: C64,
        value: C64,
    ) -> Option<LagEstimate> {
        let k = self.window.back().map_or(1, |e| e.k + 1);
        self.corner = if k == 1 {
            C64::new(1.0, 0.0) / delta
        } else {
            corner_update(self.corner, beta_prev, delta).unwrap_or(C64::new(f64::NAN, f64::NAN))
        };
        self.window.push_back(WindowEntry {
            k,
            alpha,
            beta_prev: if k == 1 { 0.0 } else { beta_prev },
            delta,
            value,
            corner: self.corner,
        });
        if self.window.len() > self.d + 1 {
            self.window.pop_front();
        }
        if self.window.len() == self.d + 1 {
            return Some(self.emit_front());
        }
        None
    }

    fn emit_front(&mut self) -> LagEstimate {
        let d = self.d;
        let w = &self.window;
        let front = w[0];
        let beta_k = w[1].beta_prev;
        let alpha_tail: Vec<f64> = (1..=d).map(|i| w[i].alpha).collect();
        let beta_tail: Vec<f64> = (2..=d).map(|i| w[i].beta_prev).collect();
        let delta_tail: Vec<C64> = (1..=d).map(|i| w[i].delta).collect();
        let bridge = bridge_entry(
            self.z,
            front.corner,
            beta_k,
            &alpha_tail,
            &beta_tail,
            &delta_tail,
        )
        .filter(|h| h.re.is_finite() && h.im.is_finite());
        let mu = bridge.map(|h| mu_estimate(beta_k, self.vnorm2, front.corner, h));
        self.emitted_through = front.k;
        LagEstimate {
            k: front.k,
            value: front.value,
            nu: Some(nu_estimate(front.value, w[d].value)),
            mu,
            corner: Some(front.corner),
            bridge,
        }
    }

    /// Called on an invariant subspace: the values are exact and stationary
    /// from the last pushed iteration on. Emits `nu` against the final value
    /// for every pending iteration and `mu = 0` for the final one.
    pub fn finalize_invariant(&mut self) -> Vec<LagEstimate> {
        let Some(last) = self.window.back().copied() else {
            return Vec::new();
        };
        let out = self
            .window
            .iter()
            .filter(|e| e.k > self.emitted_through)
            .map(|e| LagEstimate {
                k: e.k,
                value: e.value,
                nu: Some(nu_estimate(e.value, last.value)),
                mu: (e.k == last.k).then_some(0.0),
                corner: Some(e.corner),
                bridge: None,
            })
            .collect();
        self.window.clear();
        out
    }
}
