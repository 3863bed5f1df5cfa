//! Orbit iteration, invariant-measure sampling on level sets, the ellipse
//! disintegration over the first coordinate, and equidistribution
//! statistics.
//!
//! The invariant area measure on a level set `κ = t`, in the normalization
//! that gives the compact reducible component total mass 1, projects to the
//! `(x,y)`-plane as density `1/(2π² √D)` per sheet, where
//! `D(x,y) = (x² − 4)(y² − 4) + 4(t − 2)` is the discriminant of the
//! quadratic `κ(x, y, ·) = t` and the two sheets are its roots
//! `z± = (xy ± √D)/2`.  Sampling uses an exact arcsine envelope on the
//! `|x| < 2` strip (where the conditional in `y` is an arcsine law) and
//! importance-weighted columns with closed-form inverse CDFs on the
//! `|x| > 2` strips, so the square-root boundary singularity never has to
//! be tamed by a grid.

use crate::char_space::Character;
use crate::modular_group::GeneratorId;
use crate::stats::{chi_square_two_sample, effective_sample_size, ChiSquareReport};
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use std::f64::consts::PI;

#[derive(Debug, Clone, thiserror::Error, PartialEq)]
pub enum DynamicsError {
    #[error("{0}")]
    OutOfRange(String),
    #[error("empty ellipse: t + 2 - x0^2 must be positive")]
    EmptyEllipse,
    #[error("matrix {0:?} is not unimodular")]
    NonUnimodular([[i64; 2]; 2]),
    #[error("sample sets must be nonempty")]
    EmptySample,
    #[error("bin count must be at least 2")]
    BadBins,
}

/// How successive orbit moves are chosen.
#[derive(Clone, Debug)]
pub enum OrbitPolicy {
    /// Cycle through a fixed generator word, one generator per step.
    FixedWordCycle(Vec<GeneratorId>),
    /// Apply one uniformly random generator per step.
    UniformRandomGenerator { seed: u64 },
    /// Apply an independent random reduced word of the given length per step.
    RandomReducedWord { length: usize, seed: u64 },
}

enum PolicyState {
    Cycle { word: Vec<GeneratorId>, pos: usize },
    Uniform { rng: ChaCha8Rng },
    Reduced { rng: ChaCha8Rng, length: usize },
}

/// Inverse generator within the alphabet, where one exists; used to keep
/// random words reduced.
fn action_inverse(g: GeneratorId) -> Option<GeneratorId> {
    use GeneratorId::*;
    match g {
        Sigma1 | Sigma2 | Sigma3 | P12 | P13 | P23 | Qx | Qy | Qz | Nu => Some(g),
        P123 => Some(P132),
        P132 => Some(P123),
        TauX | TauY => None,
        Epsilon => Some(Epsilon),
    }
}

impl PolicyState {
    fn new(policy: &OrbitPolicy) -> PolicyState {
        match policy {
            OrbitPolicy::FixedWordCycle(word) => PolicyState::Cycle {
                word: word.clone(),
                pos: 0,
            },
            OrbitPolicy::UniformRandomGenerator { seed } => PolicyState::Uniform {
                rng: ChaCha8Rng::seed_from_u64(*seed),
            },
            OrbitPolicy::RandomReducedWord { length, seed } => PolicyState::Reduced {
                rng: ChaCha8Rng::seed_from_u64(*seed),
                length: *length,
            },
        }
    }

    fn next_word(&mut self) -> Vec<GeneratorId> {
        match self {
            PolicyState::Cycle { word, pos } => {
                if word.is_empty() {
                    return vec![];
                }
                let g = word[*pos];
                *pos = (*pos + 1) % word.len();
                vec![g]
            }
            PolicyState::Uniform { rng } => {
                vec![GeneratorId::ALL[rng.gen_range(0..GeneratorId::ALL.len())]]
            }
            PolicyState::Reduced { rng, length } => {
                // Reduced words avoid the trivial generator and adjacent
                // inverse pairs.
                let alphabet: Vec<GeneratorId> = GeneratorId::ALL
                    .iter()
                    .copied()
                    .filter(|g| *g != GeneratorId::Epsilon)
                    .collect();
                let mut word = Vec::with_capacity(*length);
                while word.len() < *length {
                    let g = alphabet[rng.gen_range(0..alphabet.len())];
                    if let Some(&prev) = word.last() {
                        if action_inverse(prev) == Some(g) {
                            continue;
                        }
                    }
                    word.push(g);
                }
                word
            }
        }
    }
}

/// One emitted orbit point: the generators applied at this step (rightmost
/// first) and the resulting character.
#[derive(Clone, Debug)]
pub struct OrbitStep {
    pub step: u64,
    pub applied: Vec<GeneratorId>,
    pub character: Character,
}

/// Iterator over `n` successive images of `start` under the policy.
pub struct Orbit {
    current: Character,
    state: PolicyState,
    emitted: u64,
    limit: u64,
}

impl Iterator for Orbit {
    type Item = OrbitStep;

    fn next(&mut self) -> Option<OrbitStep> {
        if self.emitted >= self.limit {
            return None;
        }
        let word = self.state.next_word();
        for g in word.iter().rev() {
            self.current = g.apply(&self.current);
        }
        self.emitted += 1;
        Some(OrbitStep {
            step: self.emitted,
            applied: word,
            character: self.current.clone(),
        })
    }
}

/// `n` successive images of `start`; deterministic given the policy seed.
pub fn orbit(start: &Character, policy: &OrbitPolicy, n: u64) -> Orbit {
    Orbit {
        current: start.clone(),
        state: PolicyState::new(policy),
        emitted: 0,
        limit: n,
    }
}

/// Float-mode orbit streamed through a fold, avoiding per-step allocation.
pub fn orbit_f64_fold<F: FnMut(u64, [f64; 3])>(
    start: [f64; 3],
    policy: &OrbitPolicy,
    n: u64,
    mut visit: F,
) {
    let mut state = PolicyState::new(policy);
    let mut cur = start;
    for step in 1..=n {
        for g in state.next_word().iter().rev() {
            cur = g.apply_f64(cur);
        }
        visit(step, cur);
    }
}

/// The Dehn-twist map on the `(y,z)` slice at `x = x0`.
pub fn tau_x_yz_step(x0: f64, (y, z): (f64, f64)) -> (f64, f64) {
    (x0 * y - z, y)
}

/// Rotation angle of the twist on the ellipse `E(x0)`: `arccos(x0 / 2)`.
pub fn dehn_rotation_angle(x0: f64) -> Result<f64, DynamicsError> {
    if !(-2.0..2.0).contains(&x0) || x0 <= -2.0 {
        return Err(DynamicsError::OutOfRange(format!(
            "x0 = {} outside (-2, 2)",
            x0
        )));
    }
    Ok((x0 / 2.0).acos())
}

/// The conic `κ(x0, y, z) = t` in the rotated frame `(y+z, y−z)`:
/// `((2−x0)/4)(y+z)² + ((2+x0)/4)(y−z)² = t + 2 − x0²`.
///
/// The right-hand side is forced by κ itself: the quadratic form expands to
/// `y² + z² − x0·yz`, and `κ(x0,y,z) = t` moves the remaining terms across
/// as `t + 2 − x0²` (e.g. `κ(1, √7, √7) = 6` sits on the `t = 6` ellipse
/// with right-hand side 7).
#[derive(Clone, Debug)]
pub struct EllipseForm {
    pub x0: f64,
    pub t: f64,
    /// Coefficient of `(y+z)²`.
    pub coeff_sum: f64,
    /// Coefficient of `(y−z)²`.
    pub coeff_diff: f64,
    /// Right-hand side `t + 2 − x0²`.
    pub rhs: f64,
    pub semi_axis_sum: f64,
    pub semi_axis_diff: f64,
    /// Set when either coefficient is within 1e−9 of zero (x0 → ±2).
    pub degenerate: bool,
}

pub fn ellipse_e(x0: f64, t: f64) -> Result<EllipseForm, DynamicsError> {
    if x0 <= -2.0 || x0 >= 2.0 {
        return Err(DynamicsError::OutOfRange(format!(
            "x0 = {} outside (-2, 2)",
            x0
        )));
    }
    let rhs = t + 2.0 - x0 * x0;
    if rhs <= 0.0 {
        return Err(DynamicsError::EmptyEllipse);
    }
    let coeff_sum = (2.0 - x0) / 4.0;
    let coeff_diff = (2.0 + x0) / 4.0;
    Ok(EllipseForm {
        x0,
        t,
        coeff_sum,
        coeff_diff,
        rhs,
        semi_axis_sum: (rhs / coeff_sum).sqrt(),
        semi_axis_diff: (rhs / coeff_diff).sqrt(),
        degenerate: coeff_sum.abs() <= 1e-9 || coeff_diff.abs() <= 1e-9,
    })
}

impl EllipseForm {
    /// Normalized angle in `[0,1)` of a point `(y,z)` of the ellipse.
    pub fn angle(&self, y: f64, z: f64) -> f64 {
        let u = (y + z) / self.semi_axis_sum;
        let v = (y - z) / self.semi_axis_diff;
        let phi = v.atan2(u) / (2.0 * PI);
        phi.rem_euclid(1.0)
    }

    /// The point of the ellipse at normalized angle `phi`.
    pub fn point(&self, phi: f64) -> (f64, f64) {
        let a = 2.0 * PI * phi;
        let u = self.semi_axis_sum * a.cos();
        let v = self.semi_axis_diff * a.sin();
        ((u + v) / 2.0, (u - v) / 2.0)
    }

    /// Residual of the defining equation at `(y,z)`.
    pub fn residual(&self, y: f64, z: f64) -> f64 {
        let s = y + z;
        let d = y - z;
        (self.coeff_sum * s * s + self.coeff_diff * d * d - self.rhs).abs()
    }
}

/// Linear action of a unimodular integer matrix on the angle torus.
pub fn gl2z_torus_action(
    m: [[i64; 2]; 2],
    (a, b): (f64, f64),
) -> Result<(f64, f64), DynamicsError> {
    let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
    if det != 1 && det != -1 {
        return Err(DynamicsError::NonUnimodular(m));
    }
    Ok((
        (m[0][0] as f64 * a + m[0][1] as f64 * b).rem_euclid(1.0),
        (m[1][0] as f64 * a + m[1][1] as f64 * b).rem_euclid(1.0),
    ))
}

/// Discriminant of `κ(x, y, ·) = t`; nonnegative exactly over the image of
/// the projection of the level set to the `(x,y)`-plane.
pub fn sheet_discriminant(t: f64, x: f64, y: f64) -> f64 {
    (x * x - 4.0) * (y * y - 4.0) + 4.0 * (t - 2.0)
}

/// Whether `(x,y)` lies under the level set `κ = t`.
pub fn in_projection_region(t: f64, x: f64, y: f64) -> bool {
    sheet_discriminant(t, x, y) >= 0.0
}

/// Axis-aligned sampling window.
#[derive(Copy, Clone, Debug, PartialEq)]
pub struct Window {
    pub x: [f64; 2],
    pub y: [f64; 2],
    pub z: [f64; 2],
}

impl Window {
    pub fn cube(r: f64) -> Window {
        Window {
            x: [-r, r],
            y: [-r, r],
            z: [-r, r],
        }
    }

    pub fn contains(&self, [x, y, z]: [f64; 3]) -> bool {
        x >= self.x[0]
            && x <= self.x[1]
            && y >= self.y[0]
            && y <= self.y[1]
            && z >= self.z[0]
            && z <= self.z[1]
    }
}

/// A weighted point of a level set.  The weight is invariant-measure mass
/// (2π²-normalized) carried by the sample.
#[derive(Clone, Debug)]
pub struct LevelSample {
    pub character: Character,
    pub weight: f64,
}

/// Result of a sampling run.
#[derive(Clone, Debug)]
pub struct SampleRun {
    pub samples: Vec<LevelSample>,
    /// Monte Carlo estimate of the invariant mass of `window ∩ κ⁻¹(t)`.
    pub total_mass: f64,
    pub proposals: u64,
    pub note: Option<String>,
}

/// Antiderivative of `1/√(a y² + c)` for `a > 0`, on its domain.
fn hyper_antideriv(a: f64, c: f64, y: f64) -> f64 {
    let sa = a.sqrt();
    if c > 0.0 {
        (y * (a / c).sqrt()).asinh() / sa
    } else if c < 0.0 {
        let r = (-c / a).sqrt();
        if y.abs() < r {
            0.0
        } else {
            y.signum() * (y.abs() / r).acosh() / sa
        }
    } else {
        if y == 0.0 {
            return 0.0;
        }
        y.signum() * y.abs().ln() / sa
    }
}

fn hyper_inverse(a: f64, c: f64, g: f64) -> f64 {
    let sa = a.sqrt();
    if c > 0.0 {
        (g * sa).sinh() / (a / c).sqrt()
    } else if c < 0.0 {
        let r = (-c / a).sqrt();
        g.signum() * r * (g.abs() * sa).cosh()
    } else {
        g.signum() * (g.abs() * sa).exp()
    }
}

/// Interval clip helper returning `[lo, hi]` with `lo <= hi`, or `None`.
fn clip(lo: f64, hi: f64, a: f64, b: f64) -> Option<[f64; 2]> {
    let l = lo.max(a);
    let h = hi.min(b);
    if l < h {
        Some([l, h])
    } else {
        None
    }
}

struct ColumnSampler {
    a: f64,
    c: f64,
    /// Region intervals with cumulative antiderivative masses.
    intervals: Vec<([f64; 2], f64)>,
    total: f64,
}

impl ColumnSampler {
    /// Conditional structure of the density `1/√(a y² + c)` (a > 0) on the
    /// window column.
    fn new(a: f64, c: f64, ylo: f64, yhi: f64) -> ColumnSampler {
        let mut raw: Vec<[f64; 2]> = Vec::new();
        if c > 0.0 {
            if let Some(iv) = clip(ylo, yhi, f64::NEG_INFINITY, f64::INFINITY) {
                raw.push(iv);
            }
        } else {
            let r = (-c / a).sqrt();
            if let Some(iv) = clip(ylo, yhi, f64::NEG_INFINITY, -r) {
                raw.push(iv);
            }
            if let Some(iv) = clip(ylo, yhi, r, f64::INFINITY) {
                raw.push(iv);
            }
        }
        let mut intervals = Vec::new();
        let mut total = 0.0;
        for iv in raw {
            let mass = hyper_antideriv(a, c, iv[1]) - hyper_antideriv(a, c, iv[0]);
            if mass > 0.0 && mass.is_finite() {
                intervals.push((iv, mass));
                total += mass;
            }
        }
        ColumnSampler {
            a,
            c,
            intervals,
            total,
        }
    }

    fn draw(&self, rng: &mut impl Rng) -> Option<f64> {
        if self.total <= 0.0 {
            return None;
        }
        let mut target = rng.gen::<f64>() * self.total;
        for (i, (iv, mass)) in self.intervals.iter().enumerate() {
            if target <= *mass || i + 1 == self.intervals.len() {
                let g0 = hyper_antideriv(self.a, self.c, iv[0]);
                let y = hyper_inverse(self.a, self.c, g0 + target.min(*mass));
                return Some(y.clamp(iv[0], iv[1]));
            }
            target -= mass;
        }
        None
    }
}

/// Rejection/importance sampler for the invariant measure on
/// `κ⁻¹(t) ∩ window`, deterministic in the seed.
pub fn sample_level_set(
    t: f64,
    n: usize,
    window: &Window,
    seed: u64,
) -> Result<SampleRun, DynamicsError> {
    sample_level_set_stream(t, n, window, seed, 0)
}

/// Worker-indexed variant: each worker owns the RNG stream `worker + 1`
/// derived from the same seed, so multi-worker runs are reproducible.
pub fn sample_level_set_stream(
    t: f64,
    n: usize,
    window: &Window,
    seed: u64,
    worker: u64,
) -> Result<SampleRun, DynamicsError> {
    if window.x[0] > window.x[1] || window.y[0] > window.y[1] || window.z[0] > window.z[1] {
        return Err(DynamicsError::OutOfRange("empty window".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(worker + 1);

    let [ylo, yhi] = window.y;
    // Inner strip, further clipped to where the column quadratic is
    // solvable (4(t + 2 − x²) > 0); below t = −2 it is empty.
    let solvable = if t + 2.0 >= 4.0 {
        2.0
    } else if t + 2.0 > 0.0 {
        (t + 2.0).sqrt()
    } else {
        0.0
    };
    let inner = clip(window.x[0], window.x[1], -solvable, solvable);
    let strip_neg = clip(window.x[0], window.x[1], f64::NEG_INFINITY, -2.0);
    let strip_pos = clip(window.x[0], window.x[1], 2.0, f64::INFINITY);
    let strip_len = strip_neg.map_or(0.0, |s| s[1] - s[0]) + strip_pos.map_or(0.0, |s| s[1] - s[0]);

    // Arcsine envelope mass over the inner strip.
    let w1 = inner.map_or(0.0, |[lo, hi]| {
        ((hi / 2.0).asin() - (lo / 2.0).asin()) / PI
    });

    // Rough outer-strip mass for sample allocation only (correctness does
    // not depend on it: outer samples carry exact importance weights).
    let mut outer_scan = 0.0;
    if strip_len > 0.0 {
        let grid = 256;
        let mut acc = 0.0;
        for strip in [strip_neg, strip_pos].into_iter().flatten() {
            let len = strip[1] - strip[0];
            for i in 0..grid {
                let x = strip[0] + (i as f64 + 0.5) / grid as f64 * len;
                let a = x * x - 4.0;
                let c = 4.0 * (t + 2.0 - x * x);
                acc += ColumnSampler::new(a, c, ylo, yhi).total * len / grid as f64;
            }
        }
        outer_scan = acc / (PI * PI);
    }

    let total_hint = w1 + outer_scan;
    if total_hint <= 0.0 {
        return Ok(SampleRun {
            samples: Vec::new(),
            total_mass: 0.0,
            proposals: 0,
            note: Some("window does not meet the level set projection".into()),
        });
    }
    let n_inner = if w1 > 0.0 {
        ((n as f64 * w1 / total_hint).round() as usize).clamp(usize::from(n > 0), n)
    } else {
        0
    };
    let n_outer = n - n_inner.min(n);

    let mut samples = Vec::with_capacity(n);
    let mut proposals = 0u64;
    let mut total_mass = 0.0;

    // Inner strip: exact rejection under the arcsine envelope.
    if n_inner > 0 && w1 > 0.0 {
        let [lo, hi] = inner.unwrap();
        let th_lo = (lo / 2.0).asin();
        let th_hi = (hi / 2.0).asin();
        let mut accepted = Vec::with_capacity(n_inner);
        let mut prop = 0u64;
        let cap = 10_000u64 + 2_000 * n_inner as u64;
        while accepted.len() < n_inner && prop < cap {
            prop += 1;
            let x = 2.0 * (th_lo + rng.gen::<f64>() * (th_hi - th_lo)).sin();
            let c = 4.0 * (t + 2.0 - x * x);
            if c <= 0.0 {
                continue;
            }
            let abs_a = 4.0 - x * x;
            let cap_y = (c / abs_a).sqrt();
            let theta = (rng.gen::<f64>() - 0.5) * PI;
            let y = cap_y * theta.sin();
            if y < ylo || y > yhi {
                continue;
            }
            let disc = (c - abs_a * y * y).max(0.0);
            let s = if rng.gen::<bool>() { 1.0 } else { -1.0 };
            let z = 0.5 * (x * y + s * disc.sqrt());
            if z < window.z[0] || z > window.z[1] {
                continue;
            }
            accepted.push([x, y, z]);
        }
        let mass = w1 * accepted.len() as f64 / prop.max(1) as f64;
        let per = if accepted.is_empty() {
            0.0
        } else {
            mass / accepted.len() as f64
        };
        for p in accepted {
            samples.push(LevelSample {
                character: Character::from_f64s(p[0], p[1], p[2]),
                weight: per,
            });
        }
        proposals += prop;
        total_mass += mass;
    }

    // Outer strips: importance weights L · N(x) / π², exact per column.
    if n_outer > 0 && strip_len > 0.0 {
        for _ in 0..n_outer {
            proposals += 1;
            let mut u = rng.gen::<f64>() * strip_len;
            let mut x = f64::NAN;
            for strip in [strip_neg, strip_pos].into_iter().flatten() {
                let len = strip[1] - strip[0];
                if u <= len {
                    x = strip[0] + u;
                    break;
                }
                u -= len;
            }
            if !x.is_finite() {
                continue;
            }
            let a = x * x - 4.0;
            let c = 4.0 * (t + 2.0 - x * x);
            let col = ColumnSampler::new(a, c, ylo, yhi);
            let weight = strip_len * col.total / (PI * PI) / n_outer as f64;
            if weight <= 0.0 {
                continue;
            }
            let Some(y) = col.draw(&mut rng) else { continue };
            let disc = (a * y * y + c).max(0.0);
            let s = if rng.gen::<bool>() { 1.0 } else { -1.0 };
            let z = 0.5 * (x * y + s * disc.sqrt());
            if z < window.z[0] || z > window.z[1] {
                // Mass outside the z-window is real but not part of the
                // restricted run.
                continue;
            }
            total_mass += weight;
            samples.push(LevelSample {
                character: Character::from_f64s(x, y, z),
                weight,
            });
        }
    }

    let note = if samples.is_empty() {
        Some("no samples accepted in the window".into())
    } else {
        None
    };
    Ok(SampleRun {
        samples,
        total_mass,
        proposals,
        note,
    })
}

/// Multi-worker deterministic sampling: quotas split evenly, per-worker RNG
/// streams, merged in worker order with weights rescaled so that the merged
/// weight sum still estimates the window mass.
pub fn sample_level_set_workers(
    t: f64,
    n: usize,
    window: &Window,
    seed: u64,
    workers: usize,
) -> Result<SampleRun, DynamicsError> {
    let workers = workers.max(1);
    if workers == 1 {
        return sample_level_set(t, n, window, seed);
    }
    let mut runs = Vec::with_capacity(workers);
    let quota = n / workers;
    let extra = n % workers;
    std::thread::scope(|scope| -> Result<(), DynamicsError> {
        let mut handles = Vec::new();
        for w in 0..workers {
            let my_n = quota + usize::from(w < extra);
            let window = *window;
            handles
                .push(scope.spawn(move || sample_level_set_stream(t, my_n, &window, seed, w as u64)));
        }
        for h in handles {
            runs.push(h.join().expect("sampler worker panicked")?);
        }
        Ok(())
    })?;
    let live = runs.iter().filter(|r| !r.samples.is_empty()).count().max(1) as f64;
    let mut samples = Vec::with_capacity(n);
    let mut total_mass = 0.0;
    let mut proposals = 0;
    for run in runs {
        if !run.samples.is_empty() {
            total_mass += run.total_mass / live;
            for mut s in run.samples {
                s.weight /= live;
                samples.push(s);
            }
        }
        proposals += run.proposals;
    }
    let note = if samples.is_empty() {
        Some("no samples accepted in the window".into())
    } else {
        None
    };
    Ok(SampleRun {
        samples,
        total_mass,
        proposals,
        note,
    })
}

/// Wraps orbit output as unit-weight samples for the statistics helpers.
pub fn orbit_as_samples(start: &Character, policy: &OrbitPolicy, n: u64, thin: u64) -> Vec<LevelSample> {
    let thin = thin.max(1);
    let mut out = Vec::with_capacity((n / thin) as usize);
    orbit_f64_fold(start.to_f64_triple(), policy, n, |step, p| {
        if step % thin == 0 {
            out.push(LevelSample {
                character: Character::from_f64s(p[0], p[1], p[2]),
                weight: 1.0,
            });
        }
    });
    out
}

/// Chi-square distance between the binned weighted distributions of two
/// sample sets, binned over `(x, y, sheet)`.
///
/// The second set is the reference: the bin box spans its weighted
/// 0.5%..99.5% quantiles.  Points of either set outside the box — including
/// wandering-orbit points whose coordinates have escaped to infinity — are
/// clamped deterministically into the edge bins.
pub fn equidistribution_stat(
    a: &[LevelSample],
    b: &[LevelSample],
    bins: usize,
) -> Result<ChiSquareReport, DynamicsError> {
    if bins < 2 {
        return Err(DynamicsError::BadBins);
    }
    if a.is_empty() || b.is_empty() {
        return Err(DynamicsError::EmptySample);
    }
    let quantile_range = |axis: usize| -> Result<[f64; 2], DynamicsError> {
        let mut vals: Vec<(f64, f64)> = b
            .iter()
            .map(|s| (s.character.to_f64_triple()[axis], s.weight))
            .filter(|(v, _)| v.is_finite())
            .collect();
        if vals.is_empty() {
            return Err(DynamicsError::EmptySample);
        }
        vals.sort_by(|p, q| p.0.partial_cmp(&q.0).expect("finite"));
        let total: f64 = vals.iter().map(|v| v.1).sum();
        let pick = |p: f64| -> f64 {
            let mut acc = 0.0;
            for (v, w) in &vals {
                acc += w;
                if acc >= p * total {
                    return *v;
                }
            }
            vals.last().unwrap().0
        };
        let lo = pick(0.005);
        let hi = pick(0.995);
        let pad = 1e-9 + 0.05 * (hi - lo).abs();
        Ok([lo - pad, hi + pad])
    };
    let xr = quantile_range(0)?;
    let yr = quantile_range(1)?;
    let index = |s: &LevelSample| -> usize {
        let [x, y, z] = s.character.to_f64_triple();
        let i = (((x - xr[0]) / (xr[1] - xr[0]) * bins as f64) as usize).min(bins - 1);
        let j = (((y - yr[0]) / (yr[1] - yr[0]) * bins as f64) as usize).min(bins - 1);
        let sheet = usize::from(2.0 * z - x * y >= 0.0);
        (i * bins + j) * 2 + sheet
    };
    let mut ha = vec![0.0; bins * bins * 2];
    let mut hb = vec![0.0; bins * bins * 2];
    for s in a {
        ha[index(s)] += s.weight;
    }
    for s in b {
        hb[index(s)] += s.weight;
    }
    let ess_a = effective_sample_size(a.iter().map(|s| s.weight));
    let ess_b = effective_sample_size(b.iter().map(|s| s.weight));
    Ok(chi_square_two_sample(&ha, &hb, ess_a, ess_b))
}

/// Angles along `E(x)` of the slab samples `|x − x0| < eps`, for the
/// disintegration checks; uses each sample's own column ellipse.
pub fn slab_angles(samples: &[LevelSample], x0: f64, eps: f64, t: f64) -> Vec<f64> {
    let mut out = Vec::new();
    for s in samples {
        let [x, y, z] = s.character.to_f64_triple();
        if (x - x0).abs() >= eps || x.abs() >= 2.0 {
            continue;
        }
        if let Ok(e) = ellipse_e(x, t) {
            out.push(e.angle(y, z));
        }
    }
    out
}
