//! Torque-limited pendulum swing-up. `θ = 0` is upright; reward is `cos θ`.

use std::f64::consts::PI;

use rand::Rng;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PendulumParams {
    pub mass: f64,
    pub length: f64,
    pub gravity: f64,
    pub friction: f64,
    pub max_torque: f64,
    pub dt: f64,
    pub steps_per_episode: usize,
    pub max_speed: f64,
}

impl Default for PendulumParams {
    fn default() -> Self {
        Self {
            mass: 1.0,
            length: 1.0,
            gravity: 9.81,
            friction: 0.01,
            max_torque: 5.0,
            dt: 0.05,
            steps_per_episode: 200,
            max_speed: 10.0,
        }
    }
}

impl PendulumParams {
    /// Positivity (friction may be zero), plus `max_torque < m·g·l` so the pole cannot be lifted
    /// statically.
    pub fn validate(&self) -> Result<(), String> {
        let named = [
            ("mass", self.mass),
            ("length", self.length),
            ("gravity", self.gravity),
            ("max_torque", self.max_torque),
            ("dt", self.dt),
            ("max_speed", self.max_speed),
        ];
        if let Some((name, v)) = named.iter().find(|(_, v)| !(v.is_finite() && *v > 0.0)) {
            return Err(format!("{name} must be positive, got {v}"));
        }
        if !(self.friction.is_finite() && self.friction >= 0.0) {
            return Err(format!("friction must be non-negative, got {}", self.friction));
        }
        if self.steps_per_episode == 0 {
            return Err("steps_per_episode must be positive".into());
        }
        if self.max_torque >= self.mass * self.gravity * self.length {
            return Err("max_torque must be below m·g·l".into());
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PendulumState {
    /// Angle from upright, in `(−π, π]`.
    pub theta: f64,
    pub theta_dot: f64,
}

impl PendulumState {
    /// `(cos θ, sin θ, θ̇ / θ̇_max)`.
    pub fn features(&self, params: &PendulumParams) -> [f64; 3] {
        [self.theta.cos(), self.theta.sin(), self.theta_dot / params.max_speed]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, thiserror::Error)]
#[error("pendulum state became non-finite")]
pub struct NonFiniteState;

/// Map an angle into `(−π, π]`.
pub fn wrap_angle(theta: f64) -> f64 {
    let mut t = theta - 2.0 * PI * ((theta - PI) / (2.0 * PI)).ceil();
    if t <= -PI {
        t += 2.0 * PI;
    }
    t
}

/// One semi-implicit Euler step. Torque is clipped to `±max_torque`.
pub fn pendulum_step(
    params: &PendulumParams,
    state: PendulumState,
    torque: f64,
) -> Result<(PendulumState, f64), NonFiniteState> {
    let p = params;
    let u = torque.clamp(-p.max_torque, p.max_torque);
    let accel = (-p.friction * state.theta_dot + p.mass * p.gravity * p.length * state.theta.sin() + u)
        / (p.mass * p.length * p.length);
    let theta_dot = (state.theta_dot + p.dt * accel).clamp(-p.max_speed, p.max_speed);
    let theta = wrap_angle(state.theta + p.dt * theta_dot);
    if !(theta.is_finite() && theta_dot.is_finite()) {
        return Err(NonFiniteState);
    }
    Ok((PendulumState { theta, theta_dot }, theta.cos()))
}

/// Hanging start: `θ = π + δ`, `δ ~ U(−0.05, 0.05)`, at rest.
pub fn pendulum_reset<R: Rng + ?Sized>(_params: &PendulumParams, rng: &mut R) -> PendulumState {
    let delta = rng.random_range(-0.05..0.05);
    PendulumState {
        theta: wrap_angle(PI + delta),
        theta_dot: 0.0,
    }
}
