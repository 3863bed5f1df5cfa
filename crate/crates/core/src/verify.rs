//! Runnable property suites: every invariant stated across the library,
//! packaged as named checks with pass/fail results.  The CLI `verify`
//! subcommand and the acceptance test suite both run these.

use crate::char_space::{
    classify_form, component_of, kappa_f64, Character, Classification, ComponentLabel, FormClass,
    Sign, SignPattern,
};
use crate::dynamics::{
    dehn_rotation_angle, ellipse_e, equidistribution_stat, gl2z_torus_action, orbit,
    orbit_as_samples, sample_level_set, slab_angles, tau_x_yz_step, LevelSample, OrbitPolicy,
    Window,
};
use crate::hyperbolic::{
    axes_cross, commutator_trace, is_embedded_quadrilateral, lift_character, pants_hexagon,
    points_collinear, quad_vertices, Isometry,
};
use crate::modular_group::{
    random_rational_character, GammaElement, GeneratorId, Perm3, SignVector,
};
use crate::reduction::{in_omega, reduce, step_bound, Verdict};
use crate::scalar::Scalar;
use crate::stats::{ks_critical, ks_statistic_uniform};
use crate::trace_calculus::{
    angle_action, factorization_check, numeric_trace, random_word, torus_cover, FreeWord,
    TraceCalculator, TracePolynomial,
};
use num_bigint::BigInt;
use num_rational::BigRational;
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use std::fmt;
use std::str::FromStr;

/// One named check with its outcome.
#[derive(Clone, Debug)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    pub details: String,
}

fn check(name: &str, passed: bool, details: String) -> CheckResult {
    CheckResult {
        name: name.to_string(),
        passed,
        details,
    }
}

/// A suite of checks, matching the CLI `--suite` values.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum Suite {
    Group,
    Trace,
    Reduction,
    Hyperbolic,
    Dynamics,
}

impl Suite {
    pub const ALL: [Suite; 5] = [
        Suite::Group,
        Suite::Trace,
        Suite::Reduction,
        Suite::Hyperbolic,
        Suite::Dynamics,
    ];
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Suite::Group => write!(f, "group"),
            Suite::Trace => write!(f, "trace"),
            Suite::Reduction => write!(f, "reduction"),
            Suite::Hyperbolic => write!(f, "hyperbolic"),
            Suite::Dynamics => write!(f, "dynamics"),
        }
    }
}

impl FromStr for Suite {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "group" => Ok(Suite::Group),
            "trace" => Ok(Suite::Trace),
            "reduction" => Ok(Suite::Reduction),
            "hyperbolic" => Ok(Suite::Hyperbolic),
            "dynamics" => Ok(Suite::Dynamics),
            other => Err(format!("unknown suite `{}`", other)),
        }
    }
}

#[derive(Clone, Debug)]
pub struct SuiteReport {
    pub suite: Suite,
    pub checks: Vec<CheckResult>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn counts(&self) -> (usize, usize) {
        let pass = self.checks.iter().filter(|c| c.passed).count();
        (pass, self.checks.len() - pass)
    }
}

pub fn run_suite(suite: Suite) -> SuiteReport {
    let checks = match suite {
        Suite::Group => group_checks(),
        Suite::Trace => trace_checks(),
        Suite::Reduction => reduction_checks(),
        Suite::Hyperbolic => hyperbolic_checks(),
        Suite::Dynamics => dynamics_checks(),
    };
    SuiteReport { suite, checks }
}

pub fn run_all() -> Vec<SuiteReport> {
    Suite::ALL.iter().map(|s| run_suite(*s)).collect()
}

// ---------------------------------------------------------------- group --

/// Exact κ-invariance of all 15 generators on random rational characters.
pub fn check_kappa_invariance(chars: usize, seed: u64) -> CheckResult {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut violations = 0u64;
    for _ in 0..chars {
        let c = random_rational_character(&mut rng, 50, 12);
        let k = c.kappa();
        for g in GeneratorId::ALL {
            if g.apply(&c).kappa() != k {
                violations += 1;
            }
        }
    }
    check(
        "kappa-invariance",
        violations == 0,
        format!(
            "{} generators x {} exact characters, {} violations",
            GeneratorId::ALL.len(),
            chars,
            violations
        ),
    )
}

/// Involution and composition relations as actions on random characters.
pub fn check_relation_suite(chars: usize, seed: u64) -> CheckResult {
    use GeneratorId::*;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let gen = GammaElement::generator;
    let squares = [Qx, Qy, Qz, Sigma1, Sigma2, Sigma3];
    let p123 = gen(P123);
    let cube = p123.compose(&p123).compose(&p123);
    let pairs = [
        (gen(TauY), gen(P13).compose(&gen(Qz))),
        (gen(TauX), gen(P23).compose(&gen(Qz))),
        (gen(Nu), gen(P12).compose(&gen(Qz))),
    ];
    let mut failures = 0u64;
    for _ in 0..chars {
        let c = random_rational_character(&mut rng, 30, 8);
        for g in squares {
            if g.apply(&g.apply(&c)) != c {
                failures += 1;
            }
        }
        if cube.apply(&c) != c {
            failures += 1;
        }
        for (lhs, rhs) in &pairs {
            if lhs.apply(&c) != rhs.apply(&c) {
                failures += 1;
            }
        }
        if !cube.is_identity_normal_form() {
            failures += 1;
        }
    }
    check(
        "relation-suite",
        failures == 0,
        format!("involutions/compositions on {} characters, {} failures", chars, failures),
    )
}

/// `homology(g ∘ h) = homology(g) · homology(h)` on random word pairs.
pub fn check_homology_multiplicativity(pairs: usize, seed: u64) -> CheckResult {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut failures = 0u64;
    for _ in 0..pairs {
        let g = GammaElement::random_with_rng(rng.gen_range(0..8), &mut rng);
        let h = GammaElement::random_with_rng(rng.gen_range(0..8), &mut rng);
        let lhs = g.compose(&h).homology();
        let rhs = g.homology().mul(&h.homology());
        if lhs != rhs {
            failures += 1;
        }
    }
    check(
        "homology-multiplicativity",
        failures == 0,
        format!("{} word pairs, {} failures", pairs, failures),
    )
}

/// Word action equals the action of the element rebuilt from its normal
/// form, pointwise on random exact characters.
pub fn check_normal_form_soundness(chars: usize, seed: u64) -> CheckResult {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut failures = 0u64;
    for len in 0..=12usize {
        let g = GammaElement::random_with_rng(len, &mut rng);
        let rebuilt = GammaElement::from_gl2z(g.pgl(), *g.signs());
        for _ in 0..chars {
            let c = random_rational_character(&mut rng, 20, 6);
            if g.apply(&c) != rebuilt.apply(&c) {
                failures += 1;
            }
        }
    }
    check(
        "normal-form-soundness",
        failures == 0,
        format!("words of length 0..=12 x {} characters, {} failures", chars, failures),
    )
}

pub fn check_origin_fixed() -> CheckResult {
    let origin = Character::from_ints(0, 0, 0);
    let ok = GeneratorId::ALL.iter().all(|g| g.apply(&origin) == origin);
    check("origin-fixed", ok, "all 15 generators fix (0,0,0)".into())
}

/// The Jacobian at the origin of each π-induced generator is a signed
/// permutation matrix whose underlying permutation is the S3 image.
pub fn check_differential_at_origin() -> CheckResult {
    let mut failures = 0u64;
    for g in GeneratorId::ALL {
        if g.sign_vector() != SignVector::IDENTITY {
            continue;
        }
        let m = g.linear_part_at_origin();
        let mut perm = [usize::MAX; 3];
        let mut ok = true;
        for i in 0..3 {
            let cols: Vec<usize> = (0..3).filter(|&j| m[i][j] != 0).collect();
            if cols.len() != 1 || m[i][cols[0]].abs() != 1 {
                ok = false;
                break;
            }
            perm[cols[0]] = i;
        }
        if !ok || Perm3(perm) != g.homology().s3_image() {
            failures += 1;
        }
    }
    check(
        "differential-at-origin",
        failures == 0,
        format!("signed-permutation Jacobians match S3 images, {} failures", failures),
    )
}

/// Words over `{Qx,Qy,Qz,σ1,σ2,σ3}` are exactly the level-two elements.
pub fn check_level_two_membership(words: usize, seed: u64) -> CheckResult {
    use GeneratorId::*;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let gens2 = [Qx, Qy, Qz, Sigma1, Sigma2, Sigma3];
    let mut failures = 0u64;
    for _ in 0..words {
        let len = rng.gen_range(0..8);
        let w: Vec<GeneratorId> = (0..len).map(|_| gens2[rng.gen_range(0..6)]).collect();
        if !GammaElement::from_word(&w).in_level_two() {
            failures += 1;
        }
        let g = GammaElement::random_with_rng(rng.gen_range(0..8), &mut rng);
        let member = g.in_level_two();
        let by_image = g.s3_image().is_identity();
        if member != by_image {
            failures += 1;
        }
    }
    for g in [P12, P13, P23, P123, P132, TauX, TauY, Nu] {
        if GammaElement::generator(g).in_level_two() {
            failures += 1;
        }
    }
    check(
        "level-two-membership",
        failures == 0,
        format!("{} sampled words, {} failures", words, failures),
    )
}

/// κ agrees with its projection form; the bilinear form determinant equals
/// −2(κ−2); degeneracy happens exactly at κ = 2.
pub fn check_bilinear_and_projection(chars: usize, seed: u64) -> CheckResult {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let minus_two = BigRational::from_integer(BigInt::from(-2));
    let two = BigRational::from_integer(BigInt::from(2));
    let mut failures = 0u64;
    for i in 0..chars {
        let c = if i % 7 == 0 {
            // Mix in reducible-locus points so Degenerate is exercised.
            let xi = Scalar::from_ratio(rng.gen_range(1..20), rng.gen_range(1..6));
            let eta = Scalar::from_ratio(rng.gen_range(1..20), rng.gen_range(1..6));
            crate::trace_calculus::reducible_param(&xi, &eta).expect("nonzero")
        } else {
            random_rational_character(&mut rng, 40, 10)
        };
        if c.kappa() != c.kappa_via_projection() {
            failures += 1;
        }
        let kappa = match c.kappa() {
            Scalar::Exact(k) => k,
            _ => unreachable!(),
        };
        let det = match c.bilinear_form().det() {
            Scalar::Exact(d) => d,
            _ => unreachable!(),
        };
        if det != &minus_two * (&kappa - &two) {
            failures += 1;
        }
        let degenerate = classify_form(&c) == FormClass::Degenerate;
        if degenerate != (kappa == two) {
            failures += 1;
        }
    }
    check(
        "bilinear-form-identities",
        failures == 0,
        format!("{} exact characters, {} failures", chars, failures),
    )
}

fn expected_sigma_label(j: usize, label: ComponentLabel) -> ComponentLabel {
    let sigma_signs = [
        [Sign::Plus, Sign::Minus, Sign::Minus],
        [Sign::Minus, Sign::Plus, Sign::Minus],
        [Sign::Minus, Sign::Minus, Sign::Plus],
    ][j - 1];
    match label {
        ComponentLabel::TeichOctant(SignPattern(p)) => {
            let mut q = [Sign::Plus; 3];
            for i in 0..3 {
                q[i] = if (p[i] == Sign::Minus) ^ (sigma_signs[i] == Sign::Minus) {
                    Sign::Minus
                } else {
                    Sign::Plus
                };
            }
            ComponentLabel::TeichOctant(SignPattern(q))
        }
        ComponentLabel::ReducibleC(i) => ComponentLabel::ReducibleC(i ^ (j as u8)),
        other => other,
    }
}

/// Sign changes permute octant labels and fix the compact pieces setwise.
pub fn check_sigma_equivariance(chars: usize, seed: u64) -> CheckResult {
    use GeneratorId::*;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut failures = 0u64;
    let mut classified = 0u64;
    for i in 0..chars {
        let c = if i % 5 == 0 {
            let xi = Scalar::from_ratio(rng.gen_range(1..20), rng.gen_range(1..6));
            let eta = Scalar::from_ratio(rng.gen_range(1..20), rng.gen_range(1..6));
            crate::trace_calculus::reducible_param(&xi, &eta).expect("nonzero")
        } else {
            random_rational_character(&mut rng, 40, 10)
        };
        let label = match component_of(&c) {
            Classification::Component(l) => l,
            Classification::BoundaryAmbiguous => continue,
        };
        classified += 1;
        for (j, sigma) in [(1usize, Sigma1), (2, Sigma2), (3, Sigma3)] {
            let moved = sigma.apply(&c);
            let got = match component_of(&moved) {
                Classification::Component(l) => l,
                Classification::BoundaryAmbiguous => {
                    failures += 1;
                    continue;
                }
            };
            if got != expected_sigma_label(j, label) {
                failures += 1;
            }
        }
    }
    check(
        "sigma-equivariance",
        failures == 0 && classified > 0,
        format!("{} classified characters x 3 sign changes, {} failures", classified, failures),
    )
}

fn group_checks() -> Vec<CheckResult> {
    vec![
        check_kappa_invariance(1000, 101),
        check_relation_suite(100, 102),
        check_homology_multiplicativity(500, 103),
        check_normal_form_soundness(100, 104),
        check_origin_fixed(),
        check_differential_at_origin(),
        check_level_two_membership(200, 105),
        check_bilinear_and_projection(1000, 106),
        check_sigma_equivariance(1000, 107),
    ]
}

// ---------------------------------------------------------------- trace --

/// Trace polynomials match the numeric matrix oracle to 1e−9 relative.
pub fn check_trace_oracle(words: usize, chars: usize, seed: u64) -> CheckResult {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let calc = TraceCalculator::new();
    let mut failures = 0u64;
    let mut worst: f64 = 0.0;
    for _ in 0..words {
        let w = random_word(&mut rng, 10);
        let p = calc.trace_polynomial(&w);
        for _ in 0..chars {
            let c = Character::from_f64s(
                rng.gen_range(-3.0..3.0),
                rng.gen_range(-3.0..3.0),
                rng.gen_range(-3.0..3.0),
            );
            let numeric = numeric_trace(&w, &c);
            let poly = p.eval_f64(c.to_f64_triple());
            let err = ((numeric.re - poly).abs() + numeric.im.abs())
                / (1.0 + numeric.norm());
            worst = worst.max(err);
            if err > 1e-9 {
                failures += 1;
            }
        }
    }
    check(
        "trace-oracle",
        failures == 0,
        format!(
            "{} words x {} characters, worst relative error {:.2e}, {} failures",
            words, chars, worst, failures
        ),
    )
}

pub fn check_commutator_polynomial() -> CheckResult {
    let p = TraceCalculator::new().trace_polynomial(&FreeWord::commutator());
    let ok = p == TracePolynomial::kappa();
    check(
        "commutator-polynomial",
        ok,
        "f_[X,Y] equals kappa coefficient-wise".into(),
    )
}

/// Inversion and cyclic invariance of trace polynomials.
pub fn check_word_invariance(words: usize, seed: u64) -> CheckResult {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let calc = TraceCalculator::new();
    let mut failures = 0u64;
    for _ in 0..words {
        let w = random_word(&mut rng, 9);
        let p = calc.trace_polynomial(&w);
        if p != calc.trace_polynomial(&w.inverse()) {
            failures += 1;
        }
        let k = rng.gen_range(0..w.syllables().len().max(1));
        if p != calc.trace_polynomial(&w.rotated(k)) {
            failures += 1;
        }
    }
    check(
        "word-invariance",
        failures == 0,
        format!("{} words, inversion + rotation, {} failures", words, failures),
    )
}

/// Exact factorization of κ − 2 over the reducible parametrization.
pub fn check_factorization(cases: usize, seed: u64) -> CheckResult {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut failures = 0u64;
    for _ in 0..cases {
        let sign = if rng.gen_bool(0.5) { 1 } else { -1 };
        let xi = BigRational::new(
            BigInt::from(sign * rng.gen_range(1..40)),
            BigInt::from(rng.gen_range(1..12)),
        );
        let eta = BigRational::new(
            BigInt::from(rng.gen_range(1..40)),
            BigInt::from(rng.gen_range(1..12)),
        );
        let zeta = &xi * &eta;
        match factorization_check(&xi, &eta, &zeta) {
            Ok(true) => {}
            _ => failures += 1,
        }
    }
    check(
        "factorization-identity",
        failures == 0,
        format!("{} random (xi, eta) pairs, {} failures", cases, failures),
    )
}

/// The deck transformation of the reducible parametrization.
pub fn check_deck_invariance(cases: usize, seed: u64) -> CheckResult {
    use num_traits::One;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut failures = 0u64;
    for _ in 0..cases {
        let sign = if rng.gen_bool(0.5) { 1 } else { -1 };
        let xi = BigRational::new(
            BigInt::from(sign * rng.gen_range(1..30)),
            BigInt::from(rng.gen_range(1..10)),
        );
        let eta = BigRational::new(BigInt::from(rng.gen_range(1..30)), BigInt::from(rng.gen_range(1..10)));
        let inv = |r: &BigRational| BigRational::one() / r;
        let a = crate::trace_calculus::reducible_param(
            &Scalar::Exact(xi.clone()),
            &Scalar::Exact(eta.clone()),
        );
        let b = crate::trace_calculus::reducible_param(
            &Scalar::Exact(inv(&xi)),
            &Scalar::Exact(inv(&eta)),
        );
        if a != b {
            failures += 1;
        }
    }
    check(
        "deck-invariance",
        failures == 0,
        format!("{} parameter pairs, {} failures", cases, failures),
    )
}

/// The torus cover intertwines the linear angle actions with the character
/// actions of the three distinguished generators.
pub fn check_angle_equivariance(cases: usize, seed: u64) -> CheckResult {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut failures = 0u64;
    for g in [GeneratorId::TauX, GeneratorId::TauY, GeneratorId::P12] {
        let m = angle_action(g).expect("angle action exists");
        for _ in 0..cases {
            let angles = (rng.gen_range(0.0..1.0), rng.gen_range(0.0..1.0));
            let lhs = g.apply(&torus_cover(angles)).to_f64_triple();
            let rhs = torus_cover(gl2z_torus_action(m, angles).expect("unimodular"))
                .to_f64_triple();
            if (0..3).any(|i| (lhs[i] - rhs[i]).abs() > 1e-9) {
                failures += 1;
            }
        }
    }
    check(
        "angle-equivariance",
        failures == 0,
        format!("3 generators x {} angle pairs, {} failures", cases, failures),
    )
}

/// Cross-validation of the generator action tables against the trace
/// calculus: a surface-induced generator sends `(x, y, z)` to the traces of
/// the images of `(X, Y, XY)` under the inverse automorphism, so each table
/// row must agree with the corresponding trace polynomials on all
/// characters.
pub fn check_tables_against_traces(chars: usize, seed: u64) -> CheckResult {
    let calc = TraceCalculator::new();
    let parse = |s: &str| s.parse::<FreeWord>().expect("word literal");
    // (generator, images of X, Y, XY under the inverse automorphism)
    let rows: [(GeneratorId, [FreeWord; 3]); 8] = [
        (
            GeneratorId::TauX,
            [parse("X"), parse("Y X^-1"), parse("X Y X^-1")],
        ),
        (
            GeneratorId::TauY,
            [parse("X Y^-1"), parse("Y"), parse("X")],
        ),
        (GeneratorId::Qz, [parse("X"), parse("Y^-1"), parse("X Y^-1")]),
        (
            GeneratorId::Qx,
            [parse("Y^2 X"), parse("Y^-1"), parse("Y^2 X Y^-1")],
        ),
        (
            GeneratorId::Qy,
            [parse("X"), parse("X^-1 Y^-1 X^-1"), parse("Y^-1 X^-1")],
        ),
        (
            GeneratorId::P13,
            [parse("Y^-1 X^-1"), parse("X Y X^-1"), parse("X^-1")],
        ),
        (
            GeneratorId::Nu,
            [parse("Y^-1"), parse("Y X Y^-1"), parse("X Y^-1")],
        ),
        (
            GeneratorId::P23,
            [parse("Y^-1 X Y"), parse("Y^-1 X^-1"), parse("Y^-1")],
        ),
    ];

    let polys: Vec<(GeneratorId, [crate::trace_calculus::TracePolynomial; 3])> = rows
        .iter()
        .map(|(g, ws)| {
            (
                *g,
                [
                    calc.trace_polynomial(&ws[0]),
                    calc.trace_polynomial(&ws[1]),
                    calc.trace_polynomial(&ws[2]),
                ],
            )
        })
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut failures = 0u64;
    for _ in 0..chars {
        let c = random_rational_character(&mut rng, 30, 8);
        for (g, ps) in &polys {
            let moved = g.apply(&c);
            let expect = [ps[0].eval(&c), ps[1].eval(&c), ps[2].eval(&c)];
            if moved.coords() != expect {
                failures += 1;
            }
        }
    }
    check(
        "tables-against-traces",
        failures == 0,
        format!(
            "8 generator rows x {} exact characters, {} failures",
            chars, failures
        ),
    )
}

fn trace_checks() -> Vec<CheckResult> {
    vec![
        check_trace_oracle(500, 20, 201),
        check_commutator_polynomial(),
        check_word_invariance(200, 202),
        check_factorization(200, 203),
        check_deck_invariance(100, 204),
        check_angle_equivariance(100, 205),
        check_tables_against_traces(100, 206),
    ]
}

// ------------------------------------------------------------ reduction --

/// Descent inequality `(z − z')² > 4(κ − 2)` on sorted exact triples.
pub fn check_main_lemma(cases: usize, seed: u64) -> CheckResult {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let two = BigRational::from_integer(BigInt::from(2));
    let four = BigRational::from_integer(BigInt::from(4));
    let mut tested = 0usize;
    let mut failures = 0u64;
    while tested < cases {
        let mut v: Vec<BigRational> = (0..3)
            .map(|_| BigRational::new(BigInt::from(rng.gen_range(21..240)), BigInt::from(10)))
            .collect();
        v.sort();
        let kappa = crate::char_space::kappa_rational(&v[0], &v[1], &v[2]);
        if kappa <= two {
            continue;
        }
        tested += 1;
        let z_ref = &v[0] * &v[1] - &v[2];
        let diff = &v[2] - &z_ref;
        use num_traits::Signed;
        if !diff.is_positive() || &diff * &diff <= &four * (&kappa - &two) {
            failures += 1;
        }
    }
    check(
        "descent-inequality",
        failures == 0,
        format!("{} sorted exact triples, {} failures", cases, failures),
    )
}

/// Interval lemma: for `2 < x ≤ y`, `ζ− < y < ζ+`, i.e. `κ(x,y,y) < 2`.
pub fn check_y_interval(cases: usize, seed: u64) -> CheckResult {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let two = BigRational::from_integer(BigInt::from(2));
    let mut failures = 0u64;
    for _ in 0..cases {
        let x = BigRational::new(BigInt::from(rng.gen_range(21..200)), BigInt::from(10));
        let mut y = BigRational::new(BigInt::from(rng.gen_range(21..200)), BigInt::from(10));
        if y < x {
            y = &x + BigRational::new(BigInt::from(rng.gen_range(0..20)), BigInt::from(10));
        }
        if crate::char_space::kappa_rational(&x, &y, &y) >= two {
            failures += 1;
        }
        // Float route: the interval itself straddles y.
        let i = crate::reduction::zeta_pm(
            &Scalar::Float(x.to_f64().unwrap()),
            &Scalar::Float(y.to_f64().unwrap()),
        )
            .expect("domain");
        use num_traits::ToPrimitive;
        let yf = y.to_f64().unwrap();
        if !(i.lo.to_f64() < yf && yf < i.hi.to_f64()) {
            failures += 1;
        }
    }
    check(
        "interval-lemma",
        failures == 0,
        format!("{} pairs, {} failures", cases, failures),
    )
}

/// Step bound and exact soundness on random starts in `(2,20]³` with κ > 2:
/// integer starts plus small-denominator rationals constrained to κ ≥ 6.
pub fn check_reduction_bound(cases: usize, seed: u64) -> CheckResult {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let half = cases / 2;
    let mut failures = 0u64;
    let mut max_steps = 0u64;
    let mut produced = 0usize;
    while produced < cases {
        let integral = produced < half;
        let coords: [BigRational; 3] = if integral {
            [
                BigRational::from_integer(BigInt::from(rng.gen_range(3..=20))),
                BigRational::from_integer(BigInt::from(rng.gen_range(3..=20))),
                BigRational::from_integer(BigInt::from(rng.gen_range(3..=20))),
            ]
        } else {
            [
                BigRational::new(BigInt::from(rng.gen_range(9..=80)), BigInt::from(4)),
                BigRational::new(BigInt::from(rng.gen_range(9..=80)), BigInt::from(4)),
                BigRational::new(BigInt::from(rng.gen_range(9..=80)), BigInt::from(4)),
            ]
        };
        let kappa = crate::char_space::kappa_rational(&coords[0], &coords[1], &coords[2]);
        let min_kappa = if integral { 2 } else { 6 };
        if kappa <= BigRational::from_integer(BigInt::from(min_kappa)) {
            continue;
        }
        produced += 1;
        use num_traits::ToPrimitive;
        let mut f: Vec<f64> = coords.iter().map(|r| r.to_f64().unwrap()).collect();
        f.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let bound = step_bound([f[0], f[1], f[2]], kappa.to_f64().unwrap());
        let c = Character::from_rationals(coords);
        let r = reduce(&c).expect("kappa > 2");
        max_steps = max_steps.max(r.steps);
        if (r.steps as f64) > bound {
            failures += 1;
        }
        if r.applied.apply(&c) != r.normal_form {
            failures += 1;
        }
        let ok_verdict = match r.verdict {
            Verdict::FrickePants => {
                r.normal_form.coords().iter().all(|v| {
                    v.fuzzy_cmp_int(-2) == Some(std::cmp::Ordering::Less)
                })
            }
            Verdict::NonHyperbolicCoordinate(_) => true,
        };
        if !ok_verdict {
            failures += 1;
        }
    }
    check(
        "reduction-step-bound",
        failures == 0,
        format!(
            "{} starts in (2,20]^3, max steps {}, {} failures",
            cases, max_steps, failures
        ),
    )
}

/// Samples points of `Ω₀ ∩ κ⁻¹(t)` for a given t > 18.
pub fn sample_omega0(t: f64, n: usize, rng: &mut impl Rng) -> Vec<[f64; 3]> {
    let hi = (t - 14.0).sqrt().min(6.0).max(2.2);
    let mut out = Vec::with_capacity(n);
    while out.len() < n {
        let u = rng.gen_range(2.0..hi);
        let v = rng.gen_range(2.0..hi);
        let disc = u * u * v * v - 4.0 * (u * u + v * v - 2.0 - t);
        if disc <= 0.0 {
            continue;
        }
        let w = 0.5 * (-u * v + disc.sqrt());
        if w <= 2.0 {
            continue;
        }
        out.push([-u, -v, -w]);
    }
    out
}

/// Distinct nontrivial level-two elements realized by words of bounded
/// length over `{Qx,Qy,Qz,σ1,σ2,σ3}`.
pub fn level_two_words(max_len: usize) -> Vec<GammaElement> {
    use GeneratorId::*;
    let gens2 = [Qx, Qy, Qz, Sigma1, Sigma2, Sigma3];
    let mut elements: Vec<GammaElement> = Vec::new();
    let mut seen = std::collections::HashSet::new();
    let mut frontier: Vec<Vec<GeneratorId>> = vec![vec![]];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for w in &frontier {
            for g in gens2 {
                let mut nw = w.clone();
                nw.push(g);
                let elem = GammaElement::from_word(&nw);
                let key = (elem.pgl().rep(), elem.signs().bits());
                if !elem.is_identity_normal_form() && seen.insert(key) {
                    elements.push(elem.clone());
                }
                next.push(nw);
            }
        }
        frontier = next;
    }
    elements
}

/// Disjointness of the octant translates: every nontrivial level-two word
/// of length ≤ 4 moves sampled octant points out of the octant; all samples
/// have κ > 18; `in_omega` rejects everything with κ ≤ 18.
pub fn check_omega_disjointness(points: usize, seed: u64) -> CheckResult {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let words = level_two_words(4);
    let mut failures = 0u64;
    let mut moved_checks = 0u64;
    for t in [19.0, 25.0, 52.0] {
        for p in sample_omega0(t, points, &mut rng) {
            if kappa_f64(p) <= 18.0 {
                failures += 1;
            }
            let c = Character::from_f64s(p[0], p[1], p[2]);
            if !in_omega(&c).unwrap_or(false) {
                failures += 1;
            }
            for w in &words {
                let q = w.apply_f64(p);
                moved_checks += 1;
                if q[0] < -2.0 && q[1] < -2.0 && q[2] < -2.0 {
                    failures += 1;
                }
            }
        }
    }
    // Below the threshold nothing is in Ω.
    for t in [3.0, 10.0, 18.0] {
        let window = Window::cube(12.0);
        let run = sample_level_set(t, 200, &window, seed ^ 0x5f5f).expect("sampler");
        for s in &run.samples {
            if in_omega(&s.character).unwrap_or(true) {
                failures += 1;
            }
        }
    }
    check(
        "omega-disjointness",
        failures == 0,
        format!(
            "{} octant points x {} level-two words ({} image checks), {} failures",
            points * 3,
            words.len(),
            moved_checks,
            failures
        ),
    )
}

/// Grid infimum of κ over shrinking octant collars approaches 18.
pub fn check_omega_threshold() -> CheckResult {
    let mut last = f64::INFINITY;
    let mut ok = true;
    for delta in [1.0, 0.1, 0.01, 0.001] {
        let grid = 14;
        let mut min_kappa = f64::INFINITY;
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
        ok &= min_kappa > 18.0 && min_kappa < last;
        last = min_kappa;
    }
    ok &= last - 18.0 < 0.01;
    check(
        "omega-threshold",
        ok,
        format!("octant grid infimum approaches 18 (reached {:.6})", last),
    )
}

fn reduction_checks() -> Vec<CheckResult> {
    vec![
        check_main_lemma(1000, 301),
        check_y_interval(1000, 302),
        check_reduction_bound(1000, 303),
        check_omega_disjointness(200, 304),
        check_omega_threshold(),
    ]
}

// ----------------------------------------------------------- hyperbolic --

fn random_isometry(rng: &mut impl Rng) -> Isometry {
    let r1 = Isometry::rotation(rng.gen_range(-3.0..3.0));
    let d = Isometry::diagonal(rng.gen_range(0.3..3.0));
    let r2 = Isometry::rotation(rng.gen_range(-3.0..3.0));
    r1.mul(&d).mul(&r2)
}

fn random_hyperbolic(rng: &mut impl Rng) -> Isometry {
    loop {
        let g = random_isometry(rng);
        if g.trace().abs() > 2.0 + 1e-3 {
            return g;
        }
    }
}

/// The four commutator-trace closed forms against direct computation.
pub fn check_closed_forms(cases: usize, seed: u64) -> CheckResult {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut failures = 0u64;
    let mut worst: f64 = 0.0;
    let mut push = |err: f64| {
        worst = worst.max(err);
        if err > 1e-9 {
            failures += 1;
        }
    };
    for _ in 0..cases {
        let eta = random_isometry(&mut rng);
        let [[a, b], [c, d]] = eta.matrix();

        let lambda = rng.gen_range(0.4..2.5);
        let xi = Isometry::diagonal(lambda);
        push(
            (commutator_trace(&xi, &eta) - (2.0 - b * c * (lambda - 1.0 / lambda).powi(2))).abs(),
        );

        let s = rng.gen_range(-2.0..2.0);
        let xi = Isometry::unipotent(s);
        push((commutator_trace(&xi, &eta) - (2.0 + s * s * c * c)).abs());

        let theta = rng.gen_range(-3.0..3.0);
        let xi = Isometry::rotation(theta);
        let rot = 2.0 + theta.sin().powi(2) * (a * a + b * b + c * c + d * d - 2.0);
        push((commutator_trace(&xi, &eta) - rot).abs());

        let th: f64 = rng.gen_range(0.2..1.5);
        let ph: f64 = rng.gen_range(0.2..1.5);
        let r = rng.gen_range(-3.0..3.0);
        let two = 2.0 + 4.0 * (r * r - 1.0) * th.sinh().powi(2) * ph.sinh().powi(2);
        push(
            (commutator_trace(
                &Isometry::translation_pm1(th),
                &Isometry::upper_with_fixed(r, ph),
            ) - two)
                .abs(),
        );
    }
    check(
        "commutator-closed-forms",
        failures == 0,
        format!(
            "4 forms x {} parameter draws, worst error {:.2e}, {} failures",
            cases, worst, failures
        ),
    )
}

/// Crossing axes are equivalent to commutator trace below 2.
pub fn check_crossing_equivalence(cases: usize, seed: u64) -> CheckResult {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut failures = 0u64;
    let mut crossings = 0usize;
    let mut tested = 0usize;
    while tested < cases {
        let a = random_hyperbolic(&mut rng);
        let b = random_hyperbolic(&mut rng);
        let t = commutator_trace(&a, &b);
        if (t - 2.0).abs() < 1e-6 {
            continue;
        }
        tested += 1;
        match axes_cross(&a, &b) {
            Ok(crossing) => {
                if crossing != (t < 2.0) {
                    failures += 1;
                }
                if crossing {
                    crossings += 1;
                }
            }
            Err(_) => failures += 1,
        }
    }
    check(
        "crossing-equivalence",
        failures == 0 && crossings > 0 && crossings < cases,
        format!("{} hyperbolic pairs, {} crossing, {} failures", cases, crossings, failures),
    )
}

/// Random pairs with elliptic commutator give embedded, non-collinear
/// quadrilaterals with the stated side pairing.
pub fn check_embedded_quadrilaterals(cases: usize, seed: u64) -> CheckResult {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut produced = 0usize;
    let mut failures = 0u64;
    while produced < cases {
        let x = rng.gen_range(-4.0..4.0);
        let y = rng.gen_range(-4.0..4.0);
        let t = rng.gen_range(-1.9..1.9);
        let disc: f64 = x * x * y * y / 4.0 - (x * x + y * y - 2.0 - t);
        if disc <= 0.0 {
            continue;
        }
        let z = x * y / 2.0 + disc.sqrt();
        if z.abs() < 2.0 + 1e-6 {
            continue;
        }
        let c = Character::from_f64s(x, y, z);
        let (a, b) = match lift_character(&c) {
            Ok(p) => p,
            Err(_) => continue,
        };
        let g = random_isometry(&mut rng);
        let a = g.mul(&a).mul(&g.inverse());
        let b = g.mul(&b).mul(&g.inverse());
        let quad = match quad_vertices(&a, &b) {
            Ok(q) => q,
            Err(_) => {
                failures += 1;
                produced += 1;
                continue;
            }
        };
        produced += 1;
        if !is_embedded_quadrilateral(&quad).unwrap_or(false) {
            failures += 1;
        }
        if points_collinear(&quad, 1e-9) {
            failures += 1;
        }
        let pair_err = (a.apply(&quad[0]).coords() - quad[3].coords()).norm()
            + (a.apply(&quad[1]).coords() - quad[2].coords()).norm()
            + (b.apply(&quad[1]).coords() - quad[0].coords()).norm()
            + (b.apply(&quad[2]).coords() - quad[3].coords()).norm();
        if pair_err > 1e-9 {
            failures += 1;
        }
    }
    check(
        "embedded-quadrilaterals",
        failures == 0,
        format!("{} elliptic-commutator pairs, {} counterexample candidates", cases, failures),
    )
}

/// Right-angled hexagons for random octant characters.
pub fn check_pants_hexagons(cases: usize, seed: u64) -> CheckResult {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut failures = 0u64;
    let mut worst: f64 = 0.0;
    for _ in 0..cases {
        let c = Character::from_f64s(
            -rng.gen_range(2.05..6.0),
            -rng.gen_range(2.05..6.0),
            -rng.gen_range(2.05..6.0),
        );
        match pants_hexagon(&c) {
            Ok(hex) => {
                for r in hex.right_angle_residuals {
                    worst = worst.max(r);
                    if r > 1e-6 {
                        failures += 1;
                    }
                }
            }
            Err(_) => failures += 1,
        }
    }
    check(
        "pants-hexagons",
        failures == 0,
        format!(
            "{} octant characters, worst right-angle residual {:.2e}, {} failures",
            cases, worst, failures
        ),
    )
}

fn hyperbolic_checks() -> Vec<CheckResult> {
    vec![
        check_closed_forms(1000, 401),
        check_crossing_equivalence(1000, 402),
        check_embedded_quadrilaterals(500, 403),
        check_pants_hexagons(100, 404),
    ]
}

// ------------------------------------------------------------- dynamics --

/// Twist orbits close after 4/6/8 steps at the three distinguished angles
/// and stay on the ellipse for 10⁴ steps at random angles.
pub fn check_dehn_rotation(seed: u64) -> CheckResult {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let t = 6.0;
    let mut failures = 0u64;
    for (x0, order) in [(0.0, 4u32), (1.0, 6), (2.0f64.sqrt(), 8)] {
        let angle = dehn_rotation_angle(x0).expect("in range");
        if (angle - std::f64::consts::PI * 2.0 / order as f64).abs() > 1e-12 {
            failures += 1;
        }
        let e = ellipse_e(x0, t).expect("nonempty");
        let start = e.point(0.34);
        let mut p = start;
        for k in 1..=order {
            p = tau_x_yz_step(x0, p);
            let gap = (p.0 - start.0).abs() + (p.1 - start.1).abs();
            if k < order && gap < 1e-6 {
                failures += 1;
            }
            if k == order && gap > 1e-9 {
                failures += 1;
            }
        }
    }
    for _ in 0..20 {
        let x0 = rng.gen_range(-1.9..1.9);
        let e = match ellipse_e(x0, t) {
            Ok(e) => e,
            Err(_) => continue,
        };
        let mut p = e.point(rng.gen_range(0.0..1.0));
        let mut worst: f64 = 0.0;
        for _ in 0..10_000 {
            p = tau_x_yz_step(x0, p);
            worst = worst.max(e.residual(p.0, p.1));
        }
        if worst > 1e-9 * (1.0 + e.rhs.abs()) {
            failures += 1;
        }
    }
    check(
        "dehn-rotation",
        failures == 0,
        format!("closure orders 4/6/8 + 20 long orbits, {} failures", failures),
    )
}

/// Monte Carlo invariant mass of the compact reducible component.
pub fn check_compact_mass(n: usize, seed: u64) -> CheckResult {
    let run = sample_level_set(2.0, n, &Window::cube(2.0), seed).expect("sampler");
    let ok = (run.total_mass - 1.0).abs() <= 0.02;
    check(
        "compact-component-mass",
        ok,
        format!("mass estimate {:.5} from {} samples (target 1 ± 0.02)", run.total_mass, n),
    )
}

/// Slab-conditioned samples are uniform in the ellipse angle (KS at 1%).
pub fn check_slab_disintegration(n: usize, seed: u64) -> CheckResult {
    let t = 6.0;
    let x0 = 0.4;
    let eps = 0.05;
    let w = Window {
        x: [x0 - eps, x0 + eps],
        y: [-12.0, 12.0],
        z: [-12.0, 12.0],
    };
    let run = sample_level_set(t, n, &w, seed).expect("sampler");
    let mut angles = slab_angles(&run.samples, x0, eps, t);
    if angles.len() < n / 2 {
        return check(
            "slab-disintegration",
            false,
            format!("only {} slab samples", angles.len()),
        );
    }
    let d = ks_statistic_uniform(&mut angles);
    let crit = ks_critical(0.01, angles.len());
    check(
        "slab-disintegration",
        d < crit,
        format!("KS statistic {:.5} vs 1% critical {:.5} (n = {})", d, crit, angles.len()),
    )
}

/// Applying the twist leaves the slab angle distribution unchanged
/// (two-sample chi-square at 1%).
pub fn check_twist_invariance(n: usize, seed: u64) -> CheckResult {
    let t = 6.0;
    let x0 = 0.4;
    let eps = 0.05;
    let w = Window {
        x: [x0 - eps, x0 + eps],
        y: [-12.0, 12.0],
        z: [-12.0, 12.0],
    };
    let run = sample_level_set(t, n, &w, seed).expect("sampler");
    let before = slab_angles(&run.samples, x0, eps, t);
    let twisted: Vec<LevelSample> = run
        .samples
        .iter()
        .map(|s| LevelSample {
            character: GeneratorId::TauX.apply(&s.character),
            weight: s.weight,
        })
        .collect();
    let after = slab_angles(&twisted, x0, eps, t);
    let bins = 24;
    let mut ha = vec![0.0; bins];
    let mut hb = vec![0.0; bins];
    for a in &before {
        ha[((a * bins as f64) as usize).min(bins - 1)] += 1.0;
    }
    for a in &after {
        hb[((a * bins as f64) as usize).min(bins - 1)] += 1.0;
    }
    let rep = crate::stats::chi_square_two_sample(&ha, &hb, before.len() as f64, after.len() as f64);
    let crit = rep.critical(0.01);
    check(
        "twist-invariance",
        rep.statistic < crit,
        format!("chi-square {:.3} vs 1% critical {:.3}", rep.statistic, crit),
    )
}

/// The quadratic reflection exchanges the two sheets over the projection.
pub fn check_sheet_exchange(n: usize, seed: u64) -> CheckResult {
    let run = sample_level_set(6.0, n, &Window::cube(8.0), seed).expect("sampler");
    let mut failures = 0u64;
    let mut tested = 0u64;
    for s in &run.samples {
        let [x, y, z] = s.character.to_f64_triple();
        let height = 2.0 * z - x * y;
        if height.abs() < 1e-9 {
            continue;
        }
        tested += 1;
        let [qx, qy, qz] = GeneratorId::Qz.apply(&s.character).to_f64_triple();
        let moved = 2.0 * qz - qx * qy;
        if (moved + height).abs() > 1e-9 * (1.0 + height.abs()) {
            failures += 1;
        }
    }
    check(
        "sheet-exchange",
        failures == 0 && tested > 0,
        format!("{} samples, {} failures", tested, failures),
    )
}

/// Exact orbits never change κ, bit for bit.
pub fn check_exact_orbit_invariance(steps: u64, seed: u64) -> CheckResult {
    let start = Character::from_ints(1, 1, 1);
    let policy = OrbitPolicy::UniformRandomGenerator { seed };
    let target = Scalar::from_int(0);
    let mut failures = 0u64;
    for step in orbit(&start, &policy, steps) {
        if step.character.kappa() != target {
            failures += 1;
        }
    }
    check(
        "exact-orbit-invariance",
        failures == 0,
        format!("{} exact steps at kappa = 0, {} failures", steps, failures),
    )
}

/// Orbit-level conjugation of the torus action through the cover.
pub fn check_torus_conjugation(seed: u64) -> CheckResult {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let gens = [GeneratorId::TauX, GeneratorId::TauY, GeneratorId::P12];
    let mut failures = 0u64;
    for _ in 0..20 {
        let mut angles = (rng.gen_range(0.0..1.0), rng.gen_range(0.0..1.0));
        let mut c = torus_cover(angles);
        for _ in 0..50 {
            let g = gens[rng.gen_range(0..3)];
            let m = angle_action(g).expect("angle action");
            angles = gl2z_torus_action(m, angles).expect("unimodular");
            c = g.apply(&c);
            let via_cover = torus_cover(angles).to_f64_triple();
            let direct = c.to_f64_triple();
            if (0..3).any(|i| (via_cover[i] - direct[i]).abs() > 1e-6) {
                failures += 1;
                break;
            }
        }
    }
    check(
        "torus-conjugation",
        failures == 0,
        format!("20 fifty-step conjugated orbits, {} failures", failures),
    )
}

/// The sampler at t = 2 matches the pushforward of Lebesgue measure under
/// the exponential parametrization of the planar reducible piece.
pub fn check_reducible_pushforward(n: usize, seed: u64) -> CheckResult {
    let w = Window {
        x: [2.05, 8.0],
        y: [2.05, 8.0],
        z: [2.05, 30.0],
    };
    let run = sample_level_set(2.0, n, &w, seed).expect("sampler");
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0xabcd);
    let mut oracle = Vec::with_capacity(n);
    let span = 2.2f64;
    while oracle.len() < n {
        let xi = rng.gen_range(-span..span);
        let eta = rng.gen_range(-span..span);
        let p = [
            2.0 * xi.cosh(),
            2.0 * eta.cosh(),
            2.0 * (xi + eta).cosh(),
        ];
        if w.contains(p) {
            oracle.push(LevelSample {
                character: Character::from_f64s(p[0], p[1], p[2]),
                weight: 1.0,
            });
        }
    }
    let rep = equidistribution_stat(&run.samples, &oracle, 8).expect("stat");
    let crit = rep.critical(0.01);
    check(
        "reducible-pushforward",
        rep.statistic < crit,
        format!(
            "two-sample chi-square {:.3} vs 1% critical {:.3} (n = {})",
            rep.statistic, crit, n
        ),
    )
}

/// Statistical corroboration (not proof): a long orbit on the compact
/// component of κ⁻¹(0) matches invariant samples below the 1% chi-square
/// critical value, while a wandering octant orbit at t = 52 fails the same
/// test.  Reported as consistency with equidistribution.
pub fn check_ergodicity_corroboration(orbit_len: u64, seed: u64) -> CheckResult {
    let thin = 8;
    // A generic (non-integral) starting point on the compact component of
    // κ⁻¹(0); integer points have finite orbits and equidistribute nothing.
    let x0 = 0.3f64;
    let y0 = 0.4f64;
    let z0 = 0.5 * (x0 * y0 + (x0 * x0 * y0 * y0 - 4.0 * (x0 * x0 + y0 * y0 - 2.0)).sqrt());
    let start = Character::from_f64s(x0, y0, z0);
    let policy = OrbitPolicy::UniformRandomGenerator { seed };
    let orbit_samples = orbit_as_samples(&start, &policy, orbit_len, thin);
    let invariant = sample_level_set(
        0.0,
        orbit_samples.len(),
        &Window::cube(2.0),
        seed ^ 0x77,
    )
    .expect("sampler");
    let rep = equidistribution_stat(&orbit_samples, &invariant.samples, 10).expect("stat");
    let crit = rep.critical(0.01);
    let compact_consistent = rep.statistic < crit;

    let wander_start = Character::from_f64s(-3.0, -3.0, -3.0);
    let wander = orbit_as_samples(&wander_start, &policy, 50_000, 1);
    let finite: Vec<LevelSample> = wander
        .into_iter()
        .filter(|s| s.character.to_f64_triple().iter().all(|v| v.is_finite()))
        .collect();
    let invariant52 = sample_level_set(52.0, finite.len().max(1000), &Window::cube(40.0), seed ^ 0x99)
        .expect("sampler");
    let rep52 = equidistribution_stat(&finite, &invariant52.samples, 10).expect("stat");
    let wandering_inconsistent = rep52.statistic > rep52.critical(0.01);

    check(
        "ergodicity-corroboration",
        compact_consistent && wandering_inconsistent,
        format!(
            "compact orbit consistent with equidistribution: chi-square {:.1} vs {:.1}; wandering orbit inconsistent: {:.1} vs {:.1}",
            rep.statistic, crit, rep52.statistic, rep52.critical(0.01)
        ),
    )
}

/// Hyperbolic toral automorphism equidistributes its angle orbit.
pub fn check_cat_map(seed: u64) -> CheckResult {
    let _ = seed;
    // Quadratic irrational seed angles.
    let mut angles = (2.0f64.sqrt() - 1.0, 3.0f64.sqrt() - 1.0);
    let bins = 16;
    let mut hist = vec![0.0; bins * bins];
    let n = 200_000;
    for _ in 0..n {
        angles = gl2z_torus_action([[2, 1], [1, 1]], angles).expect("unimodular");
        let i = ((angles.0 * bins as f64) as usize).min(bins - 1);
        let j = ((angles.1 * bins as f64) as usize).min(bins - 1);
        hist[i * bins + j] += 1.0;
    }
    let expect = n as f64 / (bins * bins) as f64;
    let max_dev = hist
        .iter()
        .map(|h| (h - expect).abs() / expect)
        .fold(0.0f64, f64::max);
    check(
        "cat-map-equidistribution",
        max_dev < 0.2,
        format!("max relative bin deviation {:.4}", max_dev),
    )
}

fn dynamics_checks() -> Vec<CheckResult> {
    vec![
        check_dehn_rotation(501),
        check_compact_mass(1_000_000, 502),
        check_slab_disintegration(100_000, 503),
        check_twist_invariance(40_000, 504),
        check_sheet_exchange(20_000, 505),
        check_exact_orbit_invariance(10_000, 506),
        check_torus_conjugation(507),
        check_reducible_pushforward(20_000, 508),
        check_ergodicity_corroboration(1_000_000, 509),
        check_cat_map(510),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quick_suites_pass() {
        // Smaller sizes here; full sizes run in the acceptance suite.
        assert!(check_kappa_invariance(50, 1).passed);
        assert!(check_relation_suite(20, 2).passed);
        assert!(check_homology_multiplicativity(50, 3).passed);
        assert!(check_normal_form_soundness(5, 4).passed);
        assert!(check_origin_fixed().passed);
        assert!(check_differential_at_origin().passed);
        assert!(check_level_two_membership(30, 5).passed);
        assert!(check_bilinear_and_projection(60, 6).passed);
        assert!(check_sigma_equivariance(60, 7).passed);
        assert!(check_trace_oracle(40, 4, 8).passed);
        assert!(check_commutator_polynomial().passed);
        assert!(check_tables_against_traces(20, 99).passed);
        assert!(check_word_invariance(30, 9).passed);
        assert!(check_factorization(30, 10).passed);
        assert!(check_deck_invariance(20, 11).passed);
        assert!(check_angle_equivariance(20, 12).passed);
        assert!(check_main_lemma(100, 13).passed);
        assert!(check_y_interval(100, 14).passed);
        assert!(check_reduction_bound(60, 15).passed);
        assert!(check_omega_threshold().passed);
    }

    #[test]
    fn quick_geometry_and_dynamics_pass() {
        assert!(check_closed_forms(60, 16).passed);
        assert!(check_crossing_equivalence(60, 17).passed);
        assert!(check_embedded_quadrilaterals(40, 18).passed);
        assert!(check_pants_hexagons(15, 19).passed);
        assert!(check_dehn_rotation(20).passed);
        assert!(check_sheet_exchange(2000, 21).passed);
        assert!(check_exact_orbit_invariance(500, 22).passed);
        assert!(check_torus_conjugation(23).passed);
    }

    #[test]
    fn quick_omega_disjointness() {
        let r = check_omega_disjointness(20, 24);
        assert!(r.passed, "{}", r.details);
    }

    #[test]
    fn quick_statistical_checks() {
        let r = check_compact_mass(100_000, 25);
        assert!(r.passed, "{}", r.details);
        let r = check_slab_disintegration(20_000, 26);
        assert!(r.passed, "{}", r.details);
        let r = check_twist_invariance(10_000, 27);
        assert!(r.passed, "{}", r.details);
        let r = check_reducible_pushforward(8_000, 28);
        assert!(r.passed, "{}", r.details);
        let r = check_ergodicity_corroboration(200_000, 29);
        assert!(r.passed, "{}", r.details);
    }
}


