//! The sort-and-reflect normal-form algorithm on levels κ > 2, and
//! membership in the wandering domain Ω.
//!
//! Starting from any real character with κ > 2, alternating a linear
//! normalization `2 < x ≤ y ≤ z` with the reflection `z ↦ xy − z` reaches,
//! in finitely many steps, a character with a coordinate in `[−2, 2]` or
//! one with all coordinates below −2.  Each reflection step lowers the top
//! coordinate by more than `μ = 2√(κ − 2)`, which bounds the step count by
//! `⌈(x + y + z − 6)/μ⌉` from a sorted start.

use crate::char_space::{Character, Repr};
use crate::modular_group::{GammaElement, GeneratorId};
use crate::scalar::{rational_sqrt, Scalar};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Signed;
use std::cmp::Ordering;
use std::fmt;

/// Iteration cap for float-mode reduction, where `μ` can round to nearly
/// zero near κ = 2.
pub const FLOAT_STEP_CAP: u64 = 1_000_000;

#[derive(Debug, Clone, thiserror::Error, PartialEq)]
pub enum ReduceError {
    #[error("reduction requires kappa > 2 (got {0})")]
    KappaNotAboveTwo(String),
    #[error("no linear move reaches 2 < x <= y <= z from {0}")]
    NotSortable(String),
    #[error("both arguments must exceed 2 (got {0}, {1})")]
    ZetaDomain(String, String),
    #[error("iteration cap {0} exceeded (kappa barely above 2 in float mode)")]
    IterationCap(u64),
}

/// Which coordinate witnesses the non-hyperbolic verdict.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum Axis {
    X,
    Y,
    Z,
}

impl fmt::Display for Axis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Axis::X => write!(f, "x"),
            Axis::Y => write!(f, "y"),
            Axis::Z => write!(f, "z"),
        }
    }
}

const AXES: [Axis; 3] = [Axis::X, Axis::Y, Axis::Z];

/// Terminal state of the reduction.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    /// All coordinates below −2: a three-holed-sphere character.
    FrickePants,
    /// The named coordinate lies in `[−2, 2]`.
    NonHyperbolicCoordinate(Axis),
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::FrickePants => write!(f, "FrickePants"),
            Verdict::NonHyperbolicCoordinate(a) => {
                write!(f, "NonHyperbolicCoordinate({})", a)
            }
        }
    }
}

/// Outcome of [`reduce`]: `apply(applied, input) == normal_form`, and
/// `steps` counts the quadratic reflections used.
#[derive(Clone, Debug)]
pub struct ReductionResult {
    pub normal_form: Character,
    pub applied: GammaElement,
    pub steps: u64,
    pub verdict: Verdict,
}

/// The two roots `ζ±(x,y) = ½(xy ± √((x²−4)(y²−4)))` of the column
/// quadratic; for `2 < x ≤ y` they straddle `y`.
#[derive(Clone, Debug, PartialEq)]
pub struct ZetaInterval {
    pub lo: Scalar,
    pub hi: Scalar,
}

/// Computes `ζ±`.  Exact inputs stay exact when the radicand is a rational
/// square, otherwise the interval falls back to float scalars.
pub fn zeta_pm(x: &Scalar, y: &Scalar) -> Result<ZetaInterval, ReduceError> {
    let domain_err = || ReduceError::ZetaDomain(x.to_string(), y.to_string());
    match (x, y) {
        (Scalar::Exact(a), Scalar::Exact(b)) => {
            let two = BigRational::from_integer(BigInt::from(2));
            if *a <= two || *b <= two {
                return Err(domain_err());
            }
            let four = BigRational::from_integer(BigInt::from(4));
            let rad = (a * a - &four) * (b * b - &four);
            let prod = a * b;
            if let Some(s) = rational_sqrt(&rad) {
                Ok(ZetaInterval {
                    lo: Scalar::Exact((&prod - &s) / &two),
                    hi: Scalar::Exact((&prod + &s) / &two),
                })
            } else {
                let xf = x.to_f64();
                let yf = y.to_f64();
                let r = ((xf * xf - 4.0) * (yf * yf - 4.0)).sqrt();
                Ok(ZetaInterval {
                    lo: Scalar::Float(0.5 * (xf * yf - r)),
                    hi: Scalar::Float(0.5 * (xf * yf + r)),
                })
            }
        }
        (Scalar::Float(a), Scalar::Float(b)) => {
            if *a <= 2.0 || *b <= 2.0 {
                return Err(domain_err());
            }
            let r = ((a * a - 4.0) * (b * b - 4.0)).sqrt();
            Ok(ZetaInterval {
                lo: Scalar::Float(0.5 * (a * b - r)),
                hi: Scalar::Float(0.5 * (a * b + r)),
            })
        }
        _ => Err(domain_err()),
    }
}

/// The quadratic reflection `z ↦ xy − z`; κ-preserving.
pub fn qz_step(c: &Character) -> Character {
    GeneratorId::Qz.apply(c)
}

trait ReduceField: Clone {
    /// Compare against the constant 2.
    fn cmp2(&self) -> Ordering;
    /// Compare against the constant −2.
    fn cmp_neg2(&self) -> Ordering;
    fn is_neg(&self) -> bool;
    fn le(&self, other: &Self) -> bool;
    fn neg_val(&self) -> Self;
    fn reflect(x: &Self, y: &Self, z: &Self) -> Self;
    fn kappa_above_two(v: &[Self; 3]) -> bool
    where
        Self: Sized;
}

impl ReduceField for BigRational {
    fn cmp2(&self) -> Ordering {
        self.cmp(&BigRational::from_integer(BigInt::from(2)))
    }
    fn cmp_neg2(&self) -> Ordering {
        self.cmp(&BigRational::from_integer(BigInt::from(-2)))
    }
    fn is_neg(&self) -> bool {
        self.is_negative()
    }
    fn le(&self, other: &Self) -> bool {
        self <= other
    }
    fn neg_val(&self) -> Self {
        -self.clone()
    }
    fn reflect(x: &Self, y: &Self, z: &Self) -> Self {
        x * y - z
    }
    fn kappa_above_two(v: &[Self; 3]) -> bool {
        crate::char_space::kappa_rational(&v[0], &v[1], &v[2]).cmp2() == Ordering::Greater
    }
}

impl ReduceField for f64 {
    fn cmp2(&self) -> Ordering {
        self.partial_cmp(&2.0).expect("NaN coordinate")
    }
    fn cmp_neg2(&self) -> Ordering {
        self.partial_cmp(&-2.0).expect("NaN coordinate")
    }
    fn is_neg(&self) -> bool {
        *self < 0.0
    }
    fn le(&self, other: &Self) -> bool {
        self <= other
    }
    fn neg_val(&self) -> Self {
        -*self
    }
    fn reflect(x: &Self, y: &Self, z: &Self) -> Self {
        x * y - z
    }
    fn kappa_above_two(v: &[Self; 3]) -> bool {
        crate::char_space::kappa_f64(*v) > 2.0
    }
}

fn in_box<F: ReduceField>(v: &F) -> bool {
    v.cmp2() != Ordering::Greater && v.cmp_neg2() != Ordering::Less
}

fn apply_gen<F: ReduceField>(g: GeneratorId, v: &[F; 3]) -> [F; 3] {
    use GeneratorId::*;
    let [x, y, z] = v;
    match g {
        Sigma1 => [x.clone(), y.neg_val(), z.neg_val()],
        Sigma2 => [x.neg_val(), y.clone(), z.neg_val()],
        Sigma3 => [x.neg_val(), y.neg_val(), z.clone()],
        P12 => [y.clone(), x.clone(), z.clone()],
        P13 => [z.clone(), y.clone(), x.clone()],
        P23 => [x.clone(), z.clone(), y.clone()],
        P123 => [z.clone(), x.clone(), y.clone()],
        P132 => [y.clone(), z.clone(), x.clone()],
        Qz => [x.clone(), y.clone(), F::reflect(x, y, z)],
        _ => unreachable!("reduction uses linear moves and Qz only"),
    }
}

/// Linear moves available to the normalization.
const PERM_PREFERENCE: [GeneratorId; 6] = [
    GeneratorId::Epsilon, // stands for the identity here
    GeneratorId::P12,
    GeneratorId::P23,
    GeneratorId::P13,
    GeneratorId::P123,
    GeneratorId::P132,
];

struct CoreOutcome<F> {
    // Generators in application order (first applied first).
    word: Vec<GeneratorId>,
    coords: [F; 3],
    steps: u64,
    verdict: Verdict,
}

fn reduce_core<F: ReduceField>(mut v: [F; 3], cap: u64) -> Result<CoreOutcome<F>, ReduceError> {
    let mut word: Vec<GeneratorId> = Vec::new();
    let mut steps = 0u64;
    loop {
        // A coordinate in [−2, 2] ends the procedure.
        if let Some(i) = (0..3).find(|&i| in_box(&v[i])) {
            return Ok(CoreOutcome {
                word,
                coords: v,
                steps,
                verdict: Verdict::NonHyperbolicCoordinate(AXES[i]),
            });
        }
        // All coordinates below 2 (hence below −2, the box being excluded).
        if v.iter().all(|c| c.cmp2() == Ordering::Less) {
            debug_assert!(v.iter().all(|c| c.cmp_neg2() == Ordering::Less));
            return Ok(CoreOutcome {
                word,
                coords: v,
                steps,
                verdict: Verdict::FrickePants,
            });
        }
        // Every coordinate now has magnitude above 2.  Sign changes flip
        // pairs, so an odd number of negatives normalizes to all-negative
        // and an even number to all-positive.
        let negs: Vec<usize> = (0..3).filter(|&i| v[i].is_neg()).collect();
        match negs.len() {
            1 => {
                let sigma = [GeneratorId::Sigma1, GeneratorId::Sigma2, GeneratorId::Sigma3]
                    [negs[0]];
                v = apply_gen(sigma, &v);
                word.push(sigma);
                continue;
            }
            2 => {
                let fixed = (0..3).find(|i| !negs.contains(i)).unwrap();
                let sigma =
                    [GeneratorId::Sigma1, GeneratorId::Sigma2, GeneratorId::Sigma3][fixed];
                v = apply_gen(sigma, &v);
                word.push(sigma);
                continue;
            }
            _ => {}
        }
        // Sort ascending, preferring the identity on ties.
        let sorted = |u: &[F; 3]| u[0].le(&u[1]) && u[1].le(&u[2]);
        if !sorted(&v) {
            let mut moved = false;
            for g in PERM_PREFERENCE {
                if g == GeneratorId::Epsilon {
                    continue;
                }
                let cand = apply_gen(g, &v);
                if sorted(&cand) {
                    v = cand;
                    word.push(g);
                    moved = true;
                    break;
                }
            }
            debug_assert!(moved, "some permutation sorts any triple");
        }
        // Reflect the top coordinate; it drops by more than 2√(κ−2).
        v = apply_gen(GeneratorId::Qz, &v);
        word.push(GeneratorId::Qz);
        steps += 1;
        if steps > cap {
            return Err(ReduceError::IterationCap(cap));
        }
    }
}

fn linear_normalize<F: ReduceField>(v: &[F; 3]) -> Option<(Vec<GeneratorId>, [F; 3])> {
    if v.iter().any(in_box) {
        return None;
    }
    let negs: Vec<usize> = (0..3).filter(|&i| v[i].is_neg()).collect();
    if negs.len() % 2 == 1 {
        return None;
    }
    let mut word = Vec::new();
    let mut u = v.clone();
    if negs.len() == 2 {
        let fixed = (0..3).find(|i| !negs.contains(i)).unwrap();
        let sigma = [GeneratorId::Sigma1, GeneratorId::Sigma2, GeneratorId::Sigma3][fixed];
        u = apply_gen(sigma, &u);
        word.push(sigma);
    }
    if u.iter().any(|c| c.cmp2() != Ordering::Greater) {
        return None;
    }
    let sorted = |w: &[F; 3]| w[0].le(&w[1]) && w[1].le(&w[2]);
    if !sorted(&u) {
        for g in PERM_PREFERENCE.into_iter().skip(1) {
            let cand = apply_gen(g, &u);
            if sorted(&cand) {
                u = cand;
                word.push(g);
                break;
            }
        }
    }
    debug_assert!(sorted(&u));
    Some((word, u))
}

fn word_to_element(application_order: &[GeneratorId]) -> GammaElement {
    let product_order: Vec<GeneratorId> = application_order.iter().rev().copied().collect();
    GammaElement::from_word(&product_order)
}

fn rebuild<F: ReduceField>(coords: [F; 3]) -> Character
where
    Character: FromCoords<F>,
{
    Character::from_coords(coords)
}

trait FromCoords<F> {
    fn from_coords(coords: [F; 3]) -> Character;
}

impl FromCoords<BigRational> for Character {
    fn from_coords(coords: [BigRational; 3]) -> Character {
        Character::from_rationals(coords)
    }
}

impl FromCoords<f64> for Character {
    fn from_coords(coords: [f64; 3]) -> Character {
        Character::from_f64s(coords[0], coords[1], coords[2])
    }
}

fn kappa_above_two_err(c: &Character) -> Result<(), ReduceError> {
    let ok = match c.repr() {
        Repr::Exact(v) => BigRational::kappa_above_two(v),
        Repr::Float(v) => f64::kappa_above_two(v),
    };
    if ok {
        Ok(())
    } else {
        Err(ReduceError::KappaNotAboveTwo(c.kappa().to_string()))
    }
}

/// Returns an equivalent character with `2 < x ≤ y ≤ z` together with the
/// linear element used (one sign change plus one permutation at most).
/// Fails when no linear move reaches that octant.
pub fn sort_normalize(c: &Character) -> Result<(Character, GammaElement), ReduceError> {
    kappa_above_two_err(c)?;
    let outcome = match c.repr() {
        Repr::Exact(v) => linear_normalize(v).map(|(w, u)| (w, rebuild(u))),
        Repr::Float(v) => linear_normalize(v).map(|(w, u)| (w, rebuild(u))),
    };
    match outcome {
        Some((word, normalized)) => Ok((normalized, word_to_element(&word))),
        None => Err(ReduceError::NotSortable(c.to_string())),
    }
}

/// Runs the full reduction with the mode-appropriate iteration cap.
pub fn reduce(c: &Character) -> Result<ReductionResult, ReduceError> {
    let cap = match c.repr() {
        Repr::Exact(_) => u64::MAX,
        Repr::Float(_) => FLOAT_STEP_CAP,
    };
    reduce_with_cap(c, cap)
}

/// Reduction with an explicit cap on the number of reflections.
pub fn reduce_with_cap(c: &Character, cap: u64) -> Result<ReductionResult, ReduceError> {
    kappa_above_two_err(c)?;
    let (word, normal_form, steps, verdict) = match c.repr() {
        Repr::Exact(v) => {
            let out = reduce_core(v.clone(), cap)?;
            (out.word, rebuild(out.coords), out.steps, out.verdict)
        }
        Repr::Float(v) => {
            let out = reduce_core(*v, cap)?;
            (out.word, rebuild(out.coords), out.steps, out.verdict)
        }
    };
    let applied = word_to_element(&word);
    debug_assert!(
        c.mode() == crate::scalar::Mode::Float || applied.apply(c) == normal_form,
        "word replays to the normal form"
    );
    Ok(ReductionResult {
        normal_form,
        applied,
        steps,
        verdict,
    })
}

/// Step bound `⌈(x + y + z − 6)/μ⌉`, `μ = 2√(κ−2)`, valid for starts that
/// sort into `(2, ∞)³`.
pub fn step_bound(sorted_start: [f64; 3], kappa: f64) -> f64 {
    let mu = 2.0 * (kappa - 2.0).sqrt();
    (((sorted_start[0] + sorted_start[1] + sorted_start[2] - 6.0) / mu) + 1e-12).ceil()
}

/// Membership in Ω, the union of Γ-translates of the open octant
/// `(−∞,−2)³`: true exactly when κ > 18 and the reduction lands strictly
/// below −2 in all coordinates.
pub fn in_omega(c: &Character) -> Result<bool, ReduceError> {
    let result = reduce(c)?;
    if result.verdict != Verdict::FrickePants {
        return Ok(false);
    }
    let above_18 = match c.repr() {
        Repr::Exact(v) => {
            crate::char_space::kappa_rational(&v[0], &v[1], &v[2])
                > BigRational::from_integer(BigInt::from(18))
        }
        Repr::Float(v) => crate::char_space::kappa_f64(*v) > 18.0,
    };
    // FrickePants implies strictly below −2 here: a coordinate equal to −2
    // is caught by the box test first.
    Ok(above_18)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::char_space::kappa_f64;
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn zeta_examples() {
        let i = zeta_pm(&Scalar::from_int(3), &Scalar::from_int(3)).unwrap();
        assert_eq!(i.lo, Scalar::from_int(2));
        assert_eq!(i.hi, Scalar::from_int(7));

        let i = zeta_pm(&Scalar::from_int(3), &Scalar::from_int(4)).unwrap();
        let lo = i.lo.to_f64();
        let hi = i.hi.to_f64();
        assert!((lo - 0.5 * (12.0 - 60.0f64.sqrt())).abs() < 1e-12);
        assert!((hi - 0.5 * (12.0 + 60.0f64.sqrt())).abs() < 1e-12);
        assert!((2.0..2.2).contains(&lo) && (9.8..9.9).contains(&hi));

        let i = zeta_pm(&Scalar::Float(2.0001), &Scalar::Float(2.0001)).unwrap();
        let (lo, hi) = (i.lo.to_f64(), i.hi.to_f64());
        assert!(lo < hi);
        assert!((lo - 2.0001f64 * 2.0001 / 2.0).abs() < 0.01);

        assert!(zeta_pm(&Scalar::from_int(2), &Scalar::from_int(3)).is_err());
        assert!(zeta_pm(&Scalar::Float(1.5), &Scalar::Float(3.0)).is_err());
    }

    #[test]
    fn zeta_sandwich_and_main_lemma_exact() {
        let mut rng = ChaCha8Rng::seed_from_u64(61);
        let two = BigRational::from_integer(BigInt::from(2));
        let four = BigRational::from_integer(BigInt::from(4));
        for _ in 0..400 {
            let x = rat(rng.gen_range(21..200), 10);
            let mut y = rat(rng.gen_range(21..200), 10);
            if y < x {
                y = &x + rat(1, 10);
            }
            // Sandwich, in the equivalent rational form κ(x,y,y) < 2.
            let k = crate::char_space::kappa_rational(&x, &y, &y);
            assert!(k < two, "kappa(x,y,y) = {}", k);

            // Descent: for sorted 2 < x ≤ y ≤ z with κ > 2,
            // (z − z')² > 4(κ − 2) with z − z' > 0.
            let zc = &x * &y / &two + rat(rng.gen_range(30..90), 10);
            let kap = crate::char_space::kappa_rational(&x, &y, &zc);
            if kap <= two || zc < y {
                continue;
            }
            let z_ref = &x * &y - &zc;
            let diff = &zc - &z_ref;
            assert!(diff.is_positive());
            assert!(&diff * &diff > &four * (&kap - &two));
        }
    }

    #[test]
    fn qz_step_examples() {
        assert_eq!(
            qz_step(&Character::from_ints(3, 3, 9)),
            Character::from_ints(3, 3, 0)
        );
        assert_eq!(
            qz_step(&Character::from_ints(3, 3, 0)),
            Character::from_ints(3, 3, 9)
        );
        // Fixed locus z = xy/2.
        let fixed = Character::from_rationals([rat(3, 1), rat(5, 1), rat(15, 2)]);
        assert_eq!(qz_step(&fixed), fixed);
    }

    #[test]
    fn sort_normalize_examples() {
        let (c, g) = sort_normalize(&Character::from_ints(9, 3, 3)).unwrap();
        assert_eq!(c, Character::from_ints(3, 3, 9));
        assert_eq!(g.apply(&Character::from_ints(9, 3, 3)), c);

        let (c, g) = sort_normalize(&Character::from_ints(-3, -24, 9)).unwrap();
        assert_eq!(c, Character::from_ints(3, 9, 24));
        assert_eq!(g.to_string(), "P23 Sigma3");
        assert_eq!(g.apply(&Character::from_ints(-3, -24, 9)), c);

        // κ(1,1,5) = 20 > 2 but no linear move exits the box coordinates.
        assert!(matches!(
            sort_normalize(&Character::from_ints(1, 1, 5)),
            Err(ReduceError::NotSortable(_))
        ));
        // Already in the all-negative octant: nothing to sort either.
        assert!(sort_normalize(&Character::from_ints(-3, -3, -3)).is_err());
    }

    #[test]
    fn reduce_examples() {
        let r = reduce(&Character::from_ints(3, 3, 9)).unwrap();
        assert_eq!(r.steps, 1);
        assert_eq!(r.verdict, Verdict::NonHyperbolicCoordinate(Axis::Z));
        assert_eq!(r.normal_form, Character::from_ints(3, 3, 0));
        assert_eq!(r.applied.apply(&Character::from_ints(3, 3, 9)), r.normal_form);

        let r = reduce(&Character::from_ints(-3, -3, -3)).unwrap();
        assert_eq!(r.steps, 0);
        assert_eq!(r.verdict, Verdict::FrickePants);
        assert_eq!(r.normal_form, Character::from_ints(-3, -3, -3));

        let r = reduce(&Character::from_ints(3, 24, 9)).unwrap();
        assert_eq!(r.steps, 2);
        assert_eq!(r.verdict, Verdict::NonHyperbolicCoordinate(Axis::Z));
        assert_eq!(r.applied.apply(&Character::from_ints(3, 24, 9)), r.normal_form);

        assert!(matches!(
            reduce(&Character::from_ints(1, 1, 1)),
            Err(ReduceError::KappaNotAboveTwo(_))
        ));
    }

    #[test]
    fn reduce_respects_step_bound_on_integer_starts() {
        let mut rng = ChaCha8Rng::seed_from_u64(67);
        let mut tested = 0;
        while tested < 200 {
            let v = [
                rng.gen_range(3..=20i64),
                rng.gen_range(3..=20i64),
                rng.gen_range(3..=20i64),
            ];
            let c = Character::from_ints(v[0], v[1], v[2]);
            let kappa = kappa_f64([v[0] as f64, v[1] as f64, v[2] as f64]);
            if kappa <= 2.0 {
                continue;
            }
            tested += 1;
            let mut s: Vec<f64> = v.iter().map(|&n| n as f64).collect();
            s.sort_by(|a, b| a.partial_cmp(b).unwrap());
            let bound = step_bound([s[0], s[1], s[2]], kappa);
            let r = reduce(&c).unwrap();
            assert!(
                (r.steps as f64) <= bound,
                "steps {} > bound {} at {:?}",
                r.steps,
                bound,
                v
            );
            assert_eq!(r.applied.apply(&c), r.normal_form);
        }
    }

    #[test]
    fn float_mode_and_caps() {
        let r = reduce(&Character::from_f64s(3.0, 3.0, 9.0)).unwrap();
        assert_eq!(r.steps, 1);
        assert_eq!(r.verdict, Verdict::NonHyperbolicCoordinate(Axis::Z));

        // A cap below the needed number of reflections is reported; this
        // start unreduces (3,3,9) three times, so four reflections close it.
        let c = Character::from_ints(213, 1893, 9);
        let full = reduce(&c).unwrap();
        assert_eq!(full.steps, 4);
        assert!(matches!(
            reduce_with_cap(&c, 3),
            Err(ReduceError::IterationCap(3))
        ));
    }

    #[test]
    fn omega_membership() {
        assert!(in_omega(&Character::from_ints(-3, -3, -3)).unwrap());
        assert!(!in_omega(&Character::from_ints(-2, -2, -2)).unwrap());
        assert!(!in_omega(&Character::from_ints(3, 3, 9)).unwrap());
        // κ(1,1,1) = 0 is rejected outright.
        assert!(in_omega(&Character::from_ints(1, 1, 1)).is_err());
        // A translate of the octant stays in Ω.
        let c = Character::from_ints(-3, -4, -5);
        let moved = GeneratorId::TauX.apply(&GeneratorId::Qz.apply(&c));
        assert!(in_omega(&moved).unwrap());
    }

    #[test]
    fn omega_infimum_approaches_18() {
        let mut last = f64::INFINITY;
        for delta in [1.0, 0.1, 0.01, 0.001] {
            let mut min_kappa = f64::INFINITY;
            let grid = 12;
            for i in 0..grid {
                for j in 0..grid {
                    for k in 0..grid {
                        let p = [
                            -2.0 - delta * (1.0 + i as f64) / grid as f64,
                            -2.0 - delta * (1.0 + j as f64) / grid as f64,
                            -2.0 - delta * (1.0 + k as f64) / grid as f64,
                        ];
                        min_kappa = min_kappa.min(kappa_f64(p));
                    }
                }
            }
            assert!(min_kappa > 18.0);
            assert!(min_kappa < last);
            last = min_kappa;
        }
        assert!(last - 18.0 < 0.01, "grid infimum {}", last);
    }
}
