//! Randomized descent search that can only ever refute local minimality.
//!
//! Candidate points are generated in floating point, converted to exact
//! rationals, and accepted only if they are feasible and strictly improve the
//! objective in exact arithmetic. Giving up proves nothing.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::LocalMinCertificate;
use crate::algebra::{rat_from_f64, rat_to_f64, Rat, RatVec};
use crate::polyopt::QpInstance;
use crate::verdict::ser_rat;

#[derive(Clone, Debug)]
pub struct FalsifierConfig {
    /// Neighbourhood radii, tried in order.
    pub radii: Vec<f64>,
    pub random_directions: usize,
    pub seed: u64,
}

impl Default for FalsifierConfig {
    fn default() -> Self {
        FalsifierConfig {
            radii: (1..=20).map(|j| 2f64.powi(-j)).collect(),
            random_directions: 8,
            seed: 0,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ImprovingStep {
    pub radius: f64,
    pub point: RatVec,
    #[serde(serialize_with = "ser_rat")]
    pub value: Rat,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum FalsifierOutcome {
    /// One exact improving point inside every tested radius.
    ImprovingPoint {
        base: RatVec,
        #[serde(serialize_with = "ser_rat")]
        base_value: Rat,
        steps: Vec<ImprovingStep>,
    },
    /// No improving point found at this radius.
    GiveUp { radius: f64 },
}

impl FalsifierOutcome {
    pub fn improved(&self) -> bool {
        matches!(self, FalsifierOutcome::ImprovingPoint { .. })
    }

    /// Descent evidence as a certificate of non-minimality.
    pub fn to_certificate(&self) -> Option<LocalMinCertificate> {
        match self {
            FalsifierOutcome::ImprovingPoint { steps, .. } => Some(LocalMinCertificate::DescentSequence {
                radii: RatVec(steps.iter().map(|s| rat_from_f64(s.radius).expect("finite radius")).collect()),
                points: steps.iter().map(|s| s.point.clone()).collect(),
            }),
            FalsifierOutcome::GiveUp { .. } => None,
        }
    }
}

/// Step lengths tried inside each radius: `radius · 2^-m`.
const STEP_HALVINGS: u32 = 40;

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

fn unit(v: Vec<f64>) -> Option<Vec<f64>> {
    let n = norm(&v);
    (n > 0.0 && n.is_finite()).then(|| v.into_iter().map(|x| x / n).collect())
}

/// Structured directions: scaling the point up and down, coordinate moves,
/// and moves tangent to `Σx = const`.
fn structured_directions(x: &[f64]) -> Vec<Vec<f64>> {
    let n = x.len();
    let mut dirs = Vec::new();
    if let Some(u) = unit(x.to_vec()) {
        dirs.push(u.iter().map(|v| -v).collect());
        dirs.push(u);
    }
    for i in 0..n {
        let mut e = vec![0.0; n];
        e[i] = 1.0;
        dirs.push(e.clone());
        e[i] = -1.0;
        dirs.push(e);
    }
    for i in 0..n {
        for j in 0..n {
            if i != j {
                let mut e = vec![0.0; n];
                e[i] = std::f64::consts::FRAC_1_SQRT_2;
                e[j] = -std::f64::consts::FRAC_1_SQRT_2;
                dirs.push(e);
            }
        }
    }
    dirs
}

fn objective_f64(q: &[Vec<f64>], c: &[f64], y: &[f64]) -> f64 {
    let quad: f64 = q.iter().zip(y).map(|(row, yi)| yi * row.iter().zip(y).map(|(a, b)| a * b).sum::<f64>()).sum();
    quad + c.iter().zip(y).map(|(a, b)| a * b).sum::<f64>()
}

fn rationalize(v: &[f64]) -> Option<RatVec> {
    v.iter().map(|&x| rat_from_f64(x)).collect::<Option<Vec<_>>>().map(RatVec)
}

pub fn descent_falsifier(qp: &QpInstance, x: &[f64], config: &FalsifierConfig) -> FalsifierOutcome {
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let n = qp.dim();
    assert_eq!(x.len(), n, "point dimension mismatch");
    let base = rationalize(x).expect("finite point");
    let base_value = qp.objective(&base);
    let structured = structured_directions(x);
    let qf: Vec<Vec<f64>> = qp.q.rows().iter().map(|r| r.iter().map(rat_to_f64).collect()).collect();
    let cf = qp.c.to_f64();
    let base_f64 = objective_f64(&qf, &cf, x);

    let mut steps = Vec::with_capacity(config.radii.len());
    for &radius in &config.radii {
        let mut dirs = structured.clone();
        for _ in 0..config.random_directions {
            let v: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
            if let Some(u) = unit(v) {
                dirs.push(u.iter().map(|c| c.abs()).collect());
                dirs.push(u);
            }
        }
        // Breadth-first over step lengths; a float prescreen filters candidates
        // before the exact check, which alone decides.
        let found = (0..STEP_HALVINGS).find_map(|m| {
            let s = radius * 2f64.powi(-(m as i32));
            dirs.iter().find_map(|d| {
                let y: Vec<f64> = x.iter().zip(d).map(|(a, b)| a + s * b).collect();
                if objective_f64(&qf, &cf, &y) > base_f64 + 1e-9 * (1.0 + base_f64.abs()) {
                    return None;
                }
                let y = rationalize(&y)?;
                if !qp.feasible.contains(&y) {
                    return None;
                }
                let value = qp.objective(&y);
                (value < base_value).then_some(ImprovingStep { radius, point: y, value })
            })
        });
        match found {
            Some(step) => steps.push(step),
            None => return FalsifierOutcome::GiveUp { radius },
        }
    }
    FalsifierOutcome::ImprovingPoint { base, base_value, steps }
}
