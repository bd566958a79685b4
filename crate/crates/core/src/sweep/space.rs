use std::collections::BTreeMap;
use std::fmt;

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::SweepError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Scale {
    #[default]
    Linear,
    Log,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DimKind {
    #[default]
    Continuous,
    Integer,
}

/// One axis of a hyperparameter box.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Dim {
    pub name: String,
    pub lo: f64,
    pub hi: f64,
    #[serde(default)]
    pub scale: Scale,
    #[serde(default)]
    pub kind: DimKind,
}

impl Dim {
    pub fn linear(name: &str, lo: f64, hi: f64) -> Self {
        Self {
            name: name.to_owned(),
            lo,
            hi,
            scale: Scale::Linear,
            kind: DimKind::Continuous,
        }
    }

    pub fn log(name: &str, lo: f64, hi: f64) -> Self {
        Self {
            scale: Scale::Log,
            ..Self::linear(name, lo, hi)
        }
    }

    pub fn integer(name: &str, lo: f64, hi: f64) -> Self {
        Self {
            kind: DimKind::Integer,
            ..Self::linear(name, lo, hi)
        }
    }

    fn check(&self) -> Result<(), String> {
        let name = &self.name;
        if !(self.lo.is_finite() && self.hi.is_finite() && self.lo < self.hi) {
            return Err(format!("{name}: need finite lo < hi, got [{}, {}]", self.lo, self.hi));
        }
        if self.scale == Scale::Log && self.lo <= 0.0 {
            return Err(format!("{name}: log scale requires lo > 0"));
        }
        if self.kind == DimKind::Integer {
            if self.lo.fract() != 0.0 || self.hi.fract() != 0.0 {
                return Err(format!("{name}: integer bounds must be integral"));
            }
            if self.hi - self.lo < 1.0 {
                return Err(format!("{name}: integer range must span at least 1"));
            }
        }
        Ok(())
    }

    fn contains(&self, v: f64) -> bool {
        v >= self.lo && v <= self.hi && (self.kind == DimKind::Continuous || v.fract() == 0.0)
    }

    fn to_unit(&self, v: f64) -> f64 {
        match self.scale {
            Scale::Linear => (v - self.lo) / (self.hi - self.lo),
            Scale::Log => (v.ln() - self.lo.ln()) / (self.hi.ln() - self.lo.ln()),
        }
    }

    fn value_at(&self, u: f64) -> f64 {
        let u = u.clamp(0.0, 1.0);
        let v = if u == 0.0 {
            self.lo
        } else if u == 1.0 {
            self.hi
        } else {
            match self.scale {
                Scale::Linear => self.lo + u * (self.hi - self.lo),
                Scale::Log => (self.lo.ln() + u * (self.hi.ln() - self.lo.ln())).exp(),
            }
        };
        let v = match self.kind {
            DimKind::Continuous => v,
            DimKind::Integer => round_half_toward_lo(v),
        };
        v.clamp(self.lo, self.hi)
    }
}

/// Nearest integer; an exact .5 goes down (toward `lo`).
fn round_half_toward_lo(v: f64) -> f64 {
    let f = v.floor();
    if v - f > 0.5 {
        f + 1.0
    } else {
        f
    }
}

/// A box of continuous and integer hyperparameters with unique names.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<Dim>", into = "Vec<Dim>")]
pub struct HyperParamSpace {
    dims: Vec<Dim>,
}

impl TryFrom<Vec<Dim>> for HyperParamSpace {
    type Error = SweepError;

    fn try_from(dims: Vec<Dim>) -> Result<Self, Self::Error> {
        Self::new(dims)
    }
}

impl From<HyperParamSpace> for Vec<Dim> {
    fn from(space: HyperParamSpace) -> Self {
        space.dims
    }
}

impl HyperParamSpace {
    pub fn new(dims: Vec<Dim>) -> Result<Self, SweepError> {
        if dims.is_empty() {
            return Err(SweepError::InvalidSpace("no dimensions".into()));
        }
        for (i, d) in dims.iter().enumerate() {
            d.check().map_err(SweepError::InvalidSpace)?;
            if dims[..i].iter().any(|o| o.name == d.name) {
                return Err(SweepError::InvalidSpace(format!("duplicate dimension {}", d.name)));
            }
        }
        Ok(Self { dims })
    }

    pub fn dims(&self) -> &[Dim] {
        &self.dims
    }

    pub fn len(&self) -> usize {
        self.dims.len()
    }

    pub fn is_empty(&self) -> bool {
        self.dims.is_empty()
    }

    pub fn dim(&self, name: &str) -> Option<&Dim> {
        self.dims.iter().find(|d| d.name == name)
    }

    /// Membership: exactly this space's names, each in bounds, integers
    /// integral.
    pub fn validate(&self, point: &HyperParamPoint) -> Result<(), SweepError> {
        for d in &self.dims {
            let v = point
                .get(&d.name)
                .ok_or_else(|| SweepError::InvalidPoint(format!("missing {}", d.name)))?;
            if !d.contains(v) {
                return Err(SweepError::InvalidPoint(format!(
                    "{} = {v} outside [{}, {}]{}",
                    d.name,
                    d.lo,
                    d.hi,
                    if d.kind == DimKind::Integer {
                        " or not integral"
                    } else {
                        ""
                    }
                )));
            }
        }
        if let Some(extra) = point.names().find(|n| self.dim(n).is_none()) {
            return Err(SweepError::InvalidPoint(format!("unknown dimension {extra}")));
        }
        Ok(())
    }

    /// Map a valid point into `[0, 1]^d` (log dims logarithmically).
    pub fn normalize(&self, point: &HyperParamPoint) -> Result<Vec<f64>, SweepError> {
        self.validate(point)?;
        Ok(self
            .dims
            .iter()
            .map(|d| d.to_unit(point.get(&d.name).unwrap()))
            .collect())
    }

    /// Inverse of [`normalize`](Self::normalize). Coordinates are clamped to
    /// `[0, 1]`; integer dims round to nearest with ties toward `lo`.
    pub fn denormalize(&self, unit: &[f64]) -> HyperParamPoint {
        assert_eq!(unit.len(), self.dims.len(), "coordinate count");
        self.dims
            .iter()
            .zip(unit)
            .map(|(d, &u)| (d.name.clone(), d.value_at(u)))
            .collect()
    }
}

/// A concrete configuration: dimension name → value.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct HyperParamPoint {
    values: BTreeMap<String, f64>,
}

impl HyperParamPoint {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with(mut self, name: &str, value: f64) -> Self {
        self.values.insert(name.to_owned(), value);
        self
    }

    pub fn get(&self, name: &str) -> Option<f64> {
        self.values.get(name).copied()
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.values.keys().map(String::as_str)
    }

    /// `(name, value)` pairs in name order.
    pub fn iter(&self) -> impl Iterator<Item = (&str, f64)> {
        self.values.iter().map(|(k, &v)| (k.as_str(), v))
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

impl FromIterator<(String, f64)> for HyperParamPoint {
    fn from_iter<I: IntoIterator<Item = (String, f64)>>(iter: I) -> Self {
        Self {
            values: iter.into_iter().collect(),
        }
    }
}

impl std::ops::Index<&str> for HyperParamPoint {
    type Output = f64;

    /// Panics if `name` is absent; validate the point first.
    fn index(&self, name: &str) -> &f64 {
        self.values
            .get(name)
            .unwrap_or_else(|| panic!("point has no dimension {name:?}"))
    }
}

impl fmt::Display for HyperParamPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.iter().map(|(k, v)| format!("{k}={v}")).collect();
        write!(f, "{{{}}}", parts.join(", "))
    }
}

/// `n` points, each coordinate uniform in normalized space.
pub fn sample_uniform<R: Rng + ?Sized>(
    space: &HyperParamSpace,
    n: usize,
    rng: &mut R,
) -> Result<Vec<HyperParamPoint>, SweepError> {
    if n == 0 {
        return Err(SweepError::InvalidPlan("uniform sampling needs n >= 1".into()));
    }
    Ok((0..n)
        .map(|_| {
            let unit: Vec<f64> = (0..space.len()).map(|_| rng.random::<f64>()).collect();
            space.denormalize(&unit)
        })
        .collect())
}

/// Normalized coordinates drawn uniformly from the L∞ ball of radius
/// `epsilon` around `center`, before clipping to the unit box.
pub fn epsilon_ball_unclipped<R: Rng + ?Sized>(
    space: &HyperParamSpace,
    center: &HyperParamPoint,
    epsilon: f64,
    n: usize,
    rng: &mut R,
) -> Result<Vec<Vec<f64>>, SweepError> {
    if !(epsilon > 0.0 && epsilon <= 1.0) {
        return Err(SweepError::InvalidPlan(format!(
            "epsilon must be in (0, 1], got {epsilon}"
        )));
    }
    if n == 0 {
        return Err(SweepError::InvalidPlan("epsilon-ball sampling needs n >= 1".into()));
    }
    let c = space.normalize(center)?;
    Ok((0..n)
        .map(|_| {
            c.iter()
                .map(|&ci| ci + epsilon * (2.0 * rng.random::<f64>() - 1.0))
                .collect()
        })
        .collect())
}

/// ε-ball perturbations of `center`: uniform in the normalized L∞ ball,
/// clipped to the box, then denormalized.
pub fn sample_epsilon_ball<R: Rng + ?Sized>(
    space: &HyperParamSpace,
    center: &HyperParamPoint,
    epsilon: f64,
    n: usize,
    rng: &mut R,
) -> Result<Vec<HyperParamPoint>, SweepError> {
    Ok(epsilon_ball_unclipped(space, center, epsilon, n, rng)?
        .into_iter()
        .map(|u| space.denormalize(&u))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn space() -> HyperParamSpace {
        HyperParamSpace::new(vec![
            Dim::linear("x", 0.0, 10.0),
            Dim::log("lr", 1e-5, 1e-1),
            Dim::integer("width", 8.0, 64.0),
        ])
        .unwrap()
    }

    #[test]
    fn space_validation() {
        assert!(HyperParamSpace::new(vec![]).is_err());
        assert!(HyperParamSpace::new(vec![Dim::linear("a", 1.0, 1.0)]).is_err());
        assert!(HyperParamSpace::new(vec![Dim::log("a", 0.0, 1.0)]).is_err());
        assert!(HyperParamSpace::new(vec![Dim::integer("a", 0.0, 0.5)]).is_err());
        assert!(HyperParamSpace::new(vec![Dim::integer("a", 0.5, 3.0)]).is_err());
        assert!(HyperParamSpace::new(vec![Dim::linear("a", 0.0, 1.0), Dim::linear("a", 0.0, 2.0)]).is_err());
    }

    #[test]
    fn normalize_examples() {
        let s = space();
        let p = HyperParamPoint::new()
            .with("x", 5.0)
            .with("lr", 1e-3)
            .with("width", 8.0);
        let u = s.normalize(&p).unwrap();
        assert_eq!(u[0], 0.5);
        assert!((u[1] - 0.5).abs() < 1e-15);
        assert_eq!(u[2], 0.0);
    }

    #[test]
    fn membership_rejects() {
        let s = space();
        let ok = HyperParamPoint::new()
            .with("x", 1.0)
            .with("lr", 0.01)
            .with("width", 9.0);
        assert!(s.validate(&ok).is_ok());
        assert!(s.validate(&ok.clone().with("x", 10.5)).is_err());
        assert!(s.validate(&ok.clone().with("width", 9.5)).is_err());
        assert!(s.validate(&ok.clone().with("extra", 0.0)).is_err());
        assert!(s.validate(&HyperParamPoint::new().with("x", 1.0)).is_err());
    }

    #[test]
    fn integer_rounding_ties_toward_lo() {
        let s = HyperParamSpace::new(vec![Dim::integer("k", 0.0, 2.0)]).unwrap();
        assert_eq!(s.denormalize(&[0.25]).get("k"), Some(0.0)); // 0.5 → 0
        assert_eq!(s.denormalize(&[0.75]).get("k"), Some(1.0)); // 1.5 → 1
        assert_eq!(s.denormalize(&[0.76]).get("k"), Some(2.0));
        assert_eq!(s.denormalize(&[1.7]).get("k"), Some(2.0));
    }

    #[test]
    fn uniform_mean_and_determinism() {
        let s = HyperParamSpace::new(vec![Dim::linear("a", 0.0, 1.0)]).unwrap();
        let pts = sample_uniform(&s, 10_000, &mut ChaCha8Rng::seed_from_u64(5)).unwrap();
        let mean = pts.iter().map(|p| p.get("a").unwrap()).sum::<f64>() / 1e4;
        assert!((0.48..=0.52).contains(&mean), "{mean}");
        let again = sample_uniform(&s, 10_000, &mut ChaCha8Rng::seed_from_u64(5)).unwrap();
        assert_eq!(pts, again);
        assert!(sample_uniform(&s, 0, &mut ChaCha8Rng::seed_from_u64(5)).is_err());
    }

    #[test]
    fn tiny_ball_collapses_to_center() {
        let s = HyperParamSpace::new(vec![Dim::linear("x", -2.0, 2.0), Dim::log("lr", 1e-5, 1e-1)]).unwrap();
        let c = HyperParamPoint::new().with("x", 0.3).with("lr", 2e-3);
        let pts = sample_epsilon_ball(&s, &c, 1e-9, 100, &mut ChaCha8Rng::seed_from_u64(1)).unwrap();
        for p in pts {
            assert!((p.get("x").unwrap() - 0.3).abs() < 1e-8);
            assert!((p.get("lr").unwrap() / 2e-3 - 1.0).abs() < 1e-8);
        }
    }

    #[test]
    fn boundary_center_is_one_sided() {
        let s = HyperParamSpace::new(vec![Dim::linear("x", 0.0, 1.0)]).unwrap();
        let c = HyperParamPoint::new().with("x", 1.0);
        let pts = sample_epsilon_ball(&s, &c, 0.1, 1000, &mut ChaCha8Rng::seed_from_u64(2)).unwrap();
        assert!(pts.iter().all(|p| (0.9..=1.0).contains(&p.get("x").unwrap())));
        assert!(pts.iter().any(|p| p.get("x").unwrap() == 1.0));
    }

    #[test]
    fn epsilon_guards() {
        let s = space();
        let c = HyperParamPoint::new()
            .with("x", 1.0)
            .with("lr", 0.01)
            .with("width", 9.0);
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        assert!(sample_epsilon_ball(&s, &c, 0.0, 1, &mut rng).is_err());
        assert!(sample_epsilon_ball(&s, &c, 1.5, 1, &mut rng).is_err());
        assert!(sample_epsilon_ball(&s, &c.clone().with("x", 11.0), 0.1, 1, &mut rng).is_err());
    }

    proptest! {
        #[test]
        fn continuous_round_trip(x in 0.0f64..=10.0, e in -5.0f64..=-1.0) {
            let s = HyperParamSpace::new(vec![Dim::linear("x", 0.0, 10.0), Dim::log("lr", 1e-5, 1e-1)]).unwrap();
            let p = HyperParamPoint::new().with("x", x).with("lr", 10f64.powf(e).clamp(1e-5, 1e-1));
            let back = s.denormalize(&s.normalize(&p).unwrap());
            for (name, v) in p.iter() {
                let w = back.get(name).unwrap();
                prop_assert!((v - w).abs() <= 1e-12 * v.abs().max(1e-12), "{} {} {}", name, v, w);
            }
        }

        #[test]
        fn samples_stay_in_bounds(seed in any::<u64>(), eps in 1e-6f64..=1.0) {
            let s = space();
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let c = sample_uniform(&s, 1, &mut rng).unwrap().remove(0);
            for p in sample_uniform(&s, 20, &mut rng).unwrap() {
                prop_assert!(s.validate(&p).is_ok());
            }
            for p in sample_epsilon_ball(&s, &c, eps, 20, &mut rng).unwrap() {
                prop_assert!(s.validate(&p).is_ok());
            }
        }
    }
}
