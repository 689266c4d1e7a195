//! Multi-start coordinate ascent over measurement settings, used as an
//! independent numerical check of the closed-form maxima.
//!
//! Every block update is solved exactly up to a one-dimensional angle
//! search: for a pair of settings `(s, s′)` the functional only sees
//! `s + s′ = 2 cos α z` and `s − s′ = 2 sin α x` with `z ⊥ x`, the best
//! `(z, x)` lies in the plane of the two image vectors, and the best `α`
//! has a closed form.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::linalg::{orthogonal_unit, Mat3, Vec3};
use crate::network::{
    linear_correlators_raw, star_correlators_raw, BsmFrame, LinearSettings, NetworkSpec, QubitFrame, StarEdge,
    StarSettings, Topology,
};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OptimizerConfig {
    pub starts: usize,
    pub max_sweeps: usize,
    /// A sweep improving the objective by less than this ends the ascent.
    pub tolerance: f64,
    /// Also rotate the intermediate parties' Bell-measurement frames.
    pub optimize_frames: bool,
    /// Keep the central star party's two factors per qubit orthogonal, as
    /// the parity readouts of a Bell-state measurement are. The closed-form
    /// star maximum assumes this; without it the functional can exceed it.
    pub orthogonal_central: bool,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        Self {
            starts: 8,
            max_sweeps: 5000,
            tolerance: 1e-12,
            optimize_frames: true,
            orthogonal_central: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OptimizedSettings {
    Linear(LinearSettings),
    Star(StarSettings),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OptimizationResult {
    pub settings: OptimizedSettings,
    pub value: f64,
    /// Sweeps performed by the winning start.
    pub iterations: usize,
    pub converged: bool,
    pub start: usize,
    /// Objective after each sweep of the winning start.
    #[serde(skip)]
    pub trace: Vec<f64>,
}

const GRID: usize = 90;
const GOLDEN_STEPS: usize = 64;
const TINY: f64 = 1e-300;

/// Maximises `|z·p|^m + |x·q|^m` over orthonormal `(z, x)`. Returns `None`
/// when both image vectors vanish.
fn best_frame(p: &Vec3, q: &Vec3, m: f64) -> Option<(Vec3, Vec3)> {
    let (pn, qn) = (p.norm(), q.norm());
    if pn < TINY && qn < TINY {
        return None;
    }
    let e1 = if pn >= TINY { p / pn } else { orthogonal_unit(q) };
    let rest = q - e1 * q.dot(&e1);
    let rest = rest - e1 * rest.dot(&e1);
    let e2 = if rest.norm() > 1e-12 * qn.max(TINY) {
        rest.normalize()
    } else {
        orthogonal_unit(&e1)
    };
    let (p1, p2, q1, q2) = (p.dot(&e1), p.dot(&e2), q.dot(&e1), q.dot(&e2));
    let f = |phi: f64| {
        let (s, c) = phi.sin_cos();
        (c * p1 + s * p2).abs().powf(m) + (c * q2 - s * q1).abs().powf(m)
    };
    let step = std::f64::consts::PI / GRID as f64;
    let mut best = 0.0;
    let mut best_val = f64::NEG_INFINITY;
    for k in 0..GRID {
        let phi = k as f64 * step;
        let val = f(phi);
        if val > best_val {
            best_val = val;
            best = phi;
        }
    }
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let (mut lo, mut hi) = (best - step, best + step);
    let mut x1 = hi - inv_phi * (hi - lo);
    let mut x2 = lo + inv_phi * (hi - lo);
    let (mut f1, mut f2) = (f(x1), f(x2));
    for _ in 0..GOLDEN_STEPS {
        if f1 < f2 {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + inv_phi * (hi - lo);
            f2 = f(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - inv_phi * (hi - lo);
            f1 = f(x1);
        }
    }
    let phi = if f1 > best_val.max(f2) {
        x1
    } else if f2 > best_val {
        x2
    } else {
        best
    };
    let (s, c) = phi.sin_cos();
    Some((e1 * c + e2 * s, e2 * c - e1 * s))
}

/// Splits an orthonormal `(z, x)` into `(s, s′)` with weight exponent `e`:
/// `tan α = (B/A)^e`.
fn split_pair(z: Vec3, x: Vec3, a: f64, b: f64, e: f64) -> (Vec3, Vec3) {
    let alpha = if a <= TINY {
        std::f64::consts::FRAC_PI_2
    } else {
        (b / a).powf(e).atan()
    };
    let (s, c) = alpha.sin_cos();
    (z * c + x * s, z * c - x * s)
}

fn random_unit<R: Rng + ?Sized>(rng: &mut R) -> Vec3 {
    loop {
        let v = Vec3::from_fn(|_, _| rng.sample(StandardNormal));
        let n = v.norm();
        if n > 1e-8 {
            return v / n;
        }
    }
}

fn random_frame<R: Rng + ?Sized>(rng: &mut R) -> QubitFrame {
    let z = random_unit(rng);
    let r = random_unit(rng);
    let x = r - z * r.dot(&z);
    let x = if x.norm() > 1e-8 { x.normalize() } else { orthogonal_unit(&z) };
    QubitFrame { z, x }
}

fn start_rng(seed: u64, start: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(start as u64);
    rng
}

struct Run<S> {
    settings: S,
    value: f64,
    iterations: usize,
    converged: bool,
    trace: Vec<f64>,
}

fn ascend<S: Clone>(
    mut settings: S,
    config: &OptimizerConfig,
    objective: impl Fn(&S) -> f64,
    sweep: impl Fn(&mut S, &mut f64),
) -> Run<S> {
    let mut value = objective(&settings);
    let mut trace = Vec::new();
    let mut converged = false;
    let mut iterations = 0;
    while iterations < config.max_sweeps {
        iterations += 1;
        let before = value;
        sweep(&mut settings, &mut value);
        trace.push(value);
        if value - before < config.tolerance {
            converged = true;
            break;
        }
    }
    Run {
        settings,
        value,
        iterations,
        converged,
        trace,
    }
}

/// Replaces `current` by `candidate` only when the objective does not drop.
fn accept<S: Clone>(current: &mut S, value: &mut f64, candidate: S, objective: &impl Fn(&S) -> f64) {
    let v = objective(&candidate);
    if v >= *value {
        *current = candidate;
        *value = v;
    }
}

fn pick_best<S>(runs: Vec<Run<S>>) -> (usize, Run<S>) {
    runs.into_iter()
        .enumerate()
        .reduce(|best, next| if next.1.value > best.1.value { next } else { best })
        .expect("at least one start")
}

fn linear_value(tensors: &[Mat3], s: &LinearSettings) -> f64 {
    let (i, j) = linear_correlators_raw(tensors, s);
    i.abs().sqrt() + j.abs().sqrt()
}

/// `(left_z, left_x, right_z, right_x)` for source `j`; end parties give
/// the sum and difference vectors.
fn source_vectors(s: &LinearSettings, n: usize, j: usize) -> (Vec3, Vec3, Vec3, Vec3) {
    let (lz, lx) = if j == 0 {
        (s.a + s.a_prime, s.a - s.a_prime)
    } else {
        (s.bsm[j - 1].next.z, s.bsm[j - 1].next.x)
    };
    let (rz, rx) = if j == n - 1 {
        (s.b + s.b_prime, s.b - s.b_prime)
    } else {
        (s.bsm[j].prev.z, s.bsm[j].prev.x)
    };
    (lz, lx, rz, rx)
}

fn linear_sweep(tensors: &[Mat3], s: &mut LinearSettings, value: &mut f64, frames: bool) {
    let n = tensors.len();
    let objective = |s: &LinearSettings| linear_value(tensors, s);
    // Products of the per-source factors for I and J, skipping `skip`.
    let others = |s: &LinearSettings, skip: usize| {
        let (mut pi, mut pj) = (0.25, 0.25);
        for (j, r) in tensors.iter().enumerate() {
            if j != skip {
                let (lz, lx, rz, rx) = source_vectors(s, n, j);
                pi *= lz.dot(&(r * rz));
                pj *= lx.dot(&(r * rx));
            }
        }
        (pi, pj)
    };

    // First end party.
    let (ci, cj) = others(s, 0);
    let (_, _, rz, rx) = source_vectors(s, n, 0);
    let (p, q) = (tensors[0] * rz * ci, tensors[0] * rx * cj);
    if let Some((z, x)) = best_frame(&p, &q, 2.0 / 3.0) {
        let (a, a_prime) = split_pair(z, x, z.dot(&p).abs(), x.dot(&q).abs(), 1.0 / 3.0);
        let mut cand = s.clone();
        cand.a = a;
        cand.a_prime = a_prime;
        accept(s, value, cand, &objective);
    }

    // Intermediate frames.
    if frames {
        for k in 0..n - 1 {
            let (ci, cj) = others(s, k);
            let (lz, lx, _, _) = source_vectors(s, n, k);
            let (p, q) = (tensors[k].transpose() * lz * ci, tensors[k].transpose() * lx * cj);
            if let Some((z, x)) = best_frame(&p, &q, 0.5) {
                let mut cand = s.clone();
                cand.bsm[k].prev = QubitFrame { z, x };
                accept(s, value, cand, &objective);
            }
            let (ci, cj) = others(s, k + 1);
            let (_, _, rz, rx) = source_vectors(s, n, k + 1);
            let (p, q) = (tensors[k + 1] * rz * ci, tensors[k + 1] * rx * cj);
            if let Some((z, x)) = best_frame(&p, &q, 0.5) {
                let mut cand = s.clone();
                cand.bsm[k].next = QubitFrame { z, x };
                accept(s, value, cand, &objective);
            }
        }
    }

    // Last end party.
    let last = n - 1;
    let (ci, cj) = others(s, last);
    let (lz, lx, _, _) = source_vectors(s, n, last);
    let (p, q) = (tensors[last].transpose() * lz * ci, tensors[last].transpose() * lx * cj);
    if let Some((z, x)) = best_frame(&p, &q, 2.0 / 3.0) {
        let (b, b_prime) = split_pair(z, x, z.dot(&p).abs(), x.dot(&q).abs(), 1.0 / 3.0);
        let mut cand = s.clone();
        cand.b = b;
        cand.b_prime = b_prime;
        accept(s, value, cand, &objective);
    }
}

/// Maximises `√|I_n| + √|J_n|` over chain settings.
pub fn maximize_linear(net: &NetworkSpec, config: &OptimizerConfig, seed: u64) -> Result<OptimizationResult> {
    net.require(Topology::Linear)?;
    let tensors = net.tensors();
    let n = net.n();
    let starts = config.starts.max(1);
    let runs: Vec<_> = (0..starts)
        .into_par_iter()
        .map(|start| {
            let mut rng = start_rng(seed, start);
            let bsm = (0..n - 1)
                .map(|_| {
                    if config.optimize_frames {
                        BsmFrame {
                            prev: random_frame(&mut rng),
                            next: random_frame(&mut rng),
                        }
                    } else {
                        BsmFrame::standard()
                    }
                })
                .collect();
            let init = LinearSettings {
                a: random_unit(&mut rng),
                a_prime: random_unit(&mut rng),
                b: random_unit(&mut rng),
                b_prime: random_unit(&mut rng),
                bsm,
            };
            ascend(
                init,
                config,
                |s| linear_value(&tensors, s),
                |s, v| linear_sweep(&tensors, s, v, config.optimize_frames),
            )
        })
        .collect();
    let (start, run) = pick_best(runs);
    Ok(OptimizationResult {
        settings: OptimizedSettings::Linear(run.settings),
        value: run.value,
        iterations: run.iterations,
        converged: run.converged,
        start,
        trace: run.trace,
    })
}

fn star_value(tensors: &[Mat3], s: &StarSettings) -> f64 {
    star_correlators_raw(tensors, s).2
}

fn star_sweep(tensors: &[Mat3], s: &mut StarSettings, value: &mut f64, orthogonal_central: bool) {
    let n = tensors.len();
    let r = 1.0 / n as f64;
    let objective = |s: &StarSettings| star_value(tensors, s);
    let others = |s: &StarSettings, skip: usize| {
        let mut g0 = 0.5f64.powi(n as i32);
        let mut g1 = g0;
        for (i, (t, e)) in tensors.iter().zip(&s.edges).enumerate() {
            if i != skip {
                g0 *= (e.a0 + e.a1).dot(&(t * e.b0));
                g1 *= (e.a0 - e.a1).dot(&(t * e.b1));
            }
        }
        (g0, g1)
    };
    for i in 0..n {
        let t = &tensors[i];
        let (g0, g1) = others(s, i);
        let e = s.edges[i];
        let (p, q) = (t * e.b0 * g0, t * e.b1 * g1);
        if let Some((z, x)) = best_frame(&p, &q, 2.0 * r / (2.0 - r)) {
            let (a0, a1) = split_pair(z, x, z.dot(&p).abs(), x.dot(&q).abs(), r / (2.0 - r));
            let mut cand = s.clone();
            cand.edges[i].a0 = a0;
            cand.edges[i].a1 = a1;
            accept(s, value, cand, &objective);
        }
        let e = s.edges[i];
        let (g0, g1) = others(s, i);
        let img0 = t.transpose() * (e.a0 + e.a1) * g0;
        let img1 = t.transpose() * (e.a0 - e.a1) * g1;
        let mut cand = s.clone();
        if orthogonal_central {
            match best_frame(&img0, &img1, r) {
                Some((b0, b1)) => {
                    cand.edges[i].b0 = b0;
                    cand.edges[i].b1 = b1;
                }
                None => continue,
            }
        } else {
            if img0.norm() > TINY {
                cand.edges[i].b0 = img0.normalize();
            }
            if img1.norm() > TINY {
                cand.edges[i].b1 = img1.normalize();
            }
        }
        accept(s, value, cand, &objective);
    }
}

/// Maximises `|J_0|^(1/n) + |J_1|^(1/n)` over star settings.
pub fn maximize_star(net: &NetworkSpec, config: &OptimizerConfig, seed: u64) -> Result<OptimizationResult> {
    net.require(Topology::Star)?;
    let tensors = net.tensors();
    let starts = config.starts.max(1);
    let runs: Vec<_> = (0..starts)
        .into_par_iter()
        .map(|start| {
            let mut rng = start_rng(seed, start);
            let edges = (0..net.n())
                .map(|_| {
                    let (a0, a1) = (random_unit(&mut rng), random_unit(&mut rng));
                    let f = random_frame(&mut rng);
                    StarEdge { a0, a1, b0: f.z, b1: f.x }
                })
                .collect();
            ascend(
                StarSettings { edges },
                config,
                |s| star_value(&tensors, s),
                |s, v| star_sweep(&tensors, s, v, config.orthogonal_central),
            )
        })
        .collect();
    let (start, run) = pick_best(runs);
    Ok(OptimizationResult {
        settings: OptimizedSettings::Star(run.settings),
        value: run.value,
        iterations: run.iterations,
        converged: run.converged,
        start,
        trace: run.trace,
    })
}

/// Dispatches on the network's topology.
pub fn maximize(net: &NetworkSpec, config: &OptimizerConfig, seed: u64) -> Result<OptimizationResult> {
    match net.topology() {
        Topology::Linear => maximize_linear(net, config, seed),
        Topology::Star => maximize_star(net, config, seed),
    }
}
