//! Points of the trace coordinate space, the invariant polynomial κ, the
//! associated symmetric bilinear form, and level-set component classification.

use crate::scalar::{Mode, Scalar, ScalarError, FLOAT_EPS};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::cmp::Ordering;
use std::fmt;

/// A point `(x, y, z)` of the moduli space: the traces of `ρ(X)`, `ρ(Y)`,
/// `ρ(XY)`.  All three coordinates live in the same arithmetic mode.
#[derive(Clone, Debug, PartialEq)]
pub struct Character {
    repr: Repr,
}

#[derive(Clone, Debug, PartialEq)]
pub(crate) enum Repr {
    Exact([BigRational; 3]),
    Float([f64; 3]),
}

impl Character {
    pub fn new(x: Scalar, y: Scalar, z: Scalar) -> Result<Self, ScalarError> {
        match (x, y, z) {
            (Scalar::Exact(x), Scalar::Exact(y), Scalar::Exact(z)) => Ok(Character {
                repr: Repr::Exact([x, y, z]),
            }),
            (Scalar::Float(x), Scalar::Float(y), Scalar::Float(z)) => Ok(Character {
                repr: Repr::Float([x, y, z]),
            }),
            _ => Err(ScalarError::ModeMismatch),
        }
    }

    pub fn from_ints(x: i64, y: i64, z: i64) -> Self {
        Character {
            repr: Repr::Exact([
                BigRational::from_integer(BigInt::from(x)),
                BigRational::from_integer(BigInt::from(y)),
                BigRational::from_integer(BigInt::from(z)),
            ]),
        }
    }

    pub fn from_rationals(coords: [BigRational; 3]) -> Self {
        Character {
            repr: Repr::Exact(coords),
        }
    }

    pub fn from_f64s(x: f64, y: f64, z: f64) -> Self {
        Character {
            repr: Repr::Float([x, y, z]),
        }
    }

    pub fn mode(&self) -> Mode {
        match self.repr {
            Repr::Exact(_) => Mode::Exact,
            Repr::Float(_) => Mode::Float,
        }
    }

    pub fn x(&self) -> Scalar {
        self.coord(0)
    }

    pub fn y(&self) -> Scalar {
        self.coord(1)
    }

    pub fn z(&self) -> Scalar {
        self.coord(2)
    }

    pub fn coord(&self, i: usize) -> Scalar {
        match &self.repr {
            Repr::Exact(c) => Scalar::Exact(c[i].clone()),
            Repr::Float(c) => Scalar::Float(c[i]),
        }
    }

    pub fn coords(&self) -> [Scalar; 3] {
        [self.coord(0), self.coord(1), self.coord(2)]
    }

    pub fn to_f64_triple(&self) -> [f64; 3] {
        match &self.repr {
            Repr::Exact(c) => [
                c[0].to_f64().unwrap_or(f64::NAN),
                c[1].to_f64().unwrap_or(f64::NAN),
                c[2].to_f64().unwrap_or(f64::NAN),
            ],
            Repr::Float(c) => *c,
        }
    }

    /// Lossy conversion into float mode.
    pub fn to_float(&self) -> Character {
        let [x, y, z] = self.to_f64_triple();
        Character::from_f64s(x, y, z)
    }

    pub(crate) fn repr(&self) -> &Repr {
        &self.repr
    }

    /// The boundary-trace polynomial `x² + y² + z² − xyz − 2`.
    pub fn kappa(&self) -> Scalar {
        match &self.repr {
            Repr::Exact([x, y, z]) => Scalar::Exact(kappa_rational(x, y, z)),
            Repr::Float([x, y, z]) => Scalar::Float(kappa_f64([*x, *y, *z])),
        }
    }

    /// Same value computed through the projection to the `(x,y)`-plane:
    /// `2 + ¼((2z − xy)² − (x² − 4)(y² − 4))`.
    pub fn kappa_via_projection(&self) -> Scalar {
        match &self.repr {
            Repr::Exact([x, y, z]) => {
                let two = BigRational::from_integer(BigInt::from(2));
                let four = BigRational::from_integer(BigInt::from(4));
                let w = &two * z - x * y;
                let q = &w * &w - (x * x - &four) * (y * y - &four);
                Scalar::Exact(two + q / four)
            }
            Repr::Float([x, y, z]) => {
                let w = 2.0 * z - x * y;
                Scalar::Float(2.0 + 0.25 * (w * w - (x * x - 4.0) * (y * y - 4.0)))
            }
        }
    }

    pub fn bilinear_form(&self) -> BilinearForm {
        let two = match self.mode() {
            Mode::Exact => Scalar::from_int(2),
            Mode::Float => Scalar::Float(2.0),
        };
        let [x, y, z] = self.coords();
        BilinearForm {
            entries: [
                [two.clone(), z.clone(), y.clone()],
                [z, two.clone(), x.clone()],
                [y, x, two],
            ],
        }
    }
}

impl fmt::Display for Character {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.x(), self.y(), self.z())
    }
}

pub fn kappa_f64([x, y, z]: [f64; 3]) -> f64 {
    x * x + y * y + z * z - x * y * z - 2.0
}

pub(crate) fn kappa_rational(x: &BigRational, y: &BigRational, z: &BigRational) -> BigRational {
    x * x + y * y + z * z - x * y * z - BigRational::from_integer(BigInt::from(2))
}

/// The symmetric matrix with diagonal `(2,2,2)` and off-diagonal entries
/// `z, y, x`; its determinant equals `−2(κ − 2)`.
#[derive(Clone, Debug)]
pub struct BilinearForm {
    entries: [[Scalar; 3]; 3],
}

impl BilinearForm {
    pub fn entry(&self, i: usize, j: usize) -> &Scalar {
        &self.entries[i][j]
    }

    pub fn entries(&self) -> &[[Scalar; 3]; 3] {
        &self.entries
    }

    pub fn det(&self) -> Scalar {
        let m = &self.entries;
        let minor = |a: &Scalar, b: &Scalar, c: &Scalar, d: &Scalar| &(a * d) - &(b * c);
        let m00 = minor(&m[1][1], &m[1][2], &m[2][1], &m[2][2]);
        let m01 = minor(&m[1][0], &m[1][2], &m[2][0], &m[2][2]);
        let m02 = minor(&m[1][0], &m[1][1], &m[2][0], &m[2][1]);
        &(&(&m[0][0] * &m00) - &(&m[0][1] * &m01)) + &(&m[0][2] * &m02)
    }
}

/// Signature of the form restricted to real coordinates.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum FormClass {
    Definite,
    Indefinite,
    Degenerate,
}

/// `Degenerate` iff κ = 2; `Definite` iff all coordinates lie in `[−2,2]`
/// and κ < 2; `Indefinite` otherwise.  Float mode applies the 1e−9 tolerance
/// to both tests.
pub fn classify_form(c: &Character) -> FormClass {
    let kappa = c.kappa();
    match kappa.fuzzy_cmp_int(2) {
        None | Some(Ordering::Equal) => FormClass::Degenerate,
        Some(Ordering::Greater) => FormClass::Indefinite,
        Some(Ordering::Less) => {
            let in_box = c.coords().iter().all(|v| {
                v.fuzzy_cmp_int(2) != Some(Ordering::Greater)
                    && v.fuzzy_cmp_int(-2) != Some(Ordering::Less)
            });
            if in_box {
                FormClass::Definite
            } else {
                FormClass::Indefinite
            }
        }
    }
}

/// A coordinate sign, used for octant labels.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    fn of(o: Ordering) -> Sign {
        if o == Ordering::Less {
            Sign::Minus
        } else {
            Sign::Plus
        }
    }
}

/// Octant sign pattern of a point whose coordinates all have magnitude ≥ 2.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub struct SignPattern(pub [Sign; 3]);

impl SignPattern {
    pub fn minus_count(&self) -> usize {
        self.0.iter().filter(|s| **s == Sign::Minus).count()
    }
}

impl fmt::Display for SignPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in self.0 {
            write!(f, "{}", if s == Sign::Plus { '+' } else { '-' })?;
        }
        Ok(())
    }
}

/// Which connected piece of its level set a real character belongs to.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub enum ComponentLabel {
    /// Compact component of unitary characters, `t < 2`.
    Su2Compact,
    /// One of the four contractible components, labelled by the sign
    /// pattern of the coordinates (all of magnitude > 2).
    TeichOctant(SignPattern),
    /// Reducible compact piece `κ⁻¹(2) ∩ [−2,2]³` minus its singular points.
    ReducibleCK,
    /// Reducible planar piece, octant index 0..=3.
    ReducibleC(u8),
    /// One of the four singular points of `κ⁻¹(2)`.
    SingularS0,
    /// The connected level set for t > 2.
    ConnectedAboveTwo,
    /// The isolated fixed point `(0,0,0)` on `κ⁻¹(−2)`.
    Origin,
}

impl fmt::Display for ComponentLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ComponentLabel::Su2Compact => write!(f, "Su2Compact"),
            ComponentLabel::TeichOctant(p) => write!(f, "TeichOctant({})", p),
            ComponentLabel::ReducibleCK => write!(f, "ReducibleCK"),
            ComponentLabel::ReducibleC(i) => write!(f, "ReducibleC{}", i),
            ComponentLabel::SingularS0 => write!(f, "SingularS0"),
            ComponentLabel::ConnectedAboveTwo => write!(f, "ConnectedAboveTwo"),
            ComponentLabel::Origin => write!(f, "Origin"),
        }
    }
}

/// Result of classification.  Float-mode points within tolerance of a
/// boundary are flagged rather than silently assigned.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum Classification {
    Component(ComponentLabel),
    BoundaryAmbiguous,
}

impl Classification {
    pub fn component(self) -> Option<ComponentLabel> {
        match self {
            Classification::Component(l) => Some(l),
            Classification::BoundaryAmbiguous => None,
        }
    }
}

impl fmt::Display for Classification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Classification::Component(l) => write!(f, "{}", l),
            Classification::BoundaryAmbiguous => write!(f, "boundary-ambiguous"),
        }
    }
}

const S0_POINTS: [[i64; 3]; 4] = [[2, 2, 2], [2, -2, -2], [-2, 2, -2], [-2, -2, 2]];

/// Total classification of a real character by level value, box membership
/// and octant sign pattern.
pub fn component_of(c: &Character) -> Classification {
    let coords = c.coords();

    let all_zero = match c.repr() {
        Repr::Exact(v) => v.iter().all(|r| r.is_zero()),
        Repr::Float(v) => v.iter().all(|x| x.abs() <= FLOAT_EPS),
    };
    if all_zero {
        return Classification::Component(ComponentLabel::Origin);
    }

    let t_vs_2 = match c.kappa().fuzzy_cmp_int(2) {
        Some(o) => o,
        None => return Classification::BoundaryAmbiguous,
    };

    // Box membership; in float mode a coordinate within tolerance of ±2 is
    // a genuine boundary case.
    let mut in_box = true;
    for v in &coords {
        let (hi, lo) = match (v.fuzzy_cmp_int(2), v.fuzzy_cmp_int(-2)) {
            (Some(a), Some(b)) => (a, b),
            _ => return Classification::BoundaryAmbiguous,
        };
        if hi == Ordering::Greater || lo == Ordering::Less {
            in_box = false;
        }
    }

    let pattern = || {
        let mut signs = [Sign::Plus; 3];
        for (i, v) in coords.iter().enumerate() {
            match v.fuzzy_sign() {
                Some(o) => signs[i] = Sign::of(o),
                // Magnitude ≥ 2 on every relevant branch, so a sign is
                // always resolvable.
                None => unreachable!("zero coordinate outside the box"),
            }
        }
        SignPattern(signs)
    };

    match t_vs_2 {
        Ordering::Greater => Classification::Component(ComponentLabel::ConnectedAboveTwo),
        Ordering::Less => {
            if in_box {
                Classification::Component(ComponentLabel::Su2Compact)
            } else {
                Classification::Component(ComponentLabel::TeichOctant(pattern()))
            }
        }
        Ordering::Equal => {
            if let Repr::Exact(v) = c.repr() {
                let is_s0 = S0_POINTS.iter().any(|p| {
                    (0..3).all(|i| v[i] == BigRational::from_integer(BigInt::from(p[i])))
                });
                if is_s0 {
                    return Classification::Component(ComponentLabel::SingularS0);
                }
            }
            if in_box {
                Classification::Component(ComponentLabel::ReducibleCK)
            } else {
                let p = pattern();
                let idx = match p.0 {
                    [Sign::Plus, Sign::Plus, Sign::Plus] => 0,
                    [Sign::Plus, Sign::Minus, Sign::Minus] => 1,
                    [Sign::Minus, Sign::Plus, Sign::Minus] => 2,
                    [Sign::Minus, Sign::Minus, Sign::Plus] => 3,
                    // Odd sign patterns cannot occur on κ = 2 outside the box.
                    _ => unreachable!("impossible octant on the reducible locus"),
                };
                Classification::Component(ComponentLabel::ReducibleC(idx))
            }
        }
    }
}

#[derive(Serialize, Deserialize)]
struct CharacterJson {
    x: NumberIn,
    y: NumberIn,
    z: NumberIn,
    mode: String,
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum NumberIn {
    Text(String),
    Value(f64),
}

impl NumberIn {
    fn as_string(&self) -> String {
        match self {
            NumberIn::Text(s) => s.clone(),
            NumberIn::Value(v) => format!("{}", v),
        }
    }
}

impl Serialize for Character {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let [x, y, z] = self.coords();
        CharacterJson {
            x: NumberIn::Text(x.to_string()),
            y: NumberIn::Text(y.to_string()),
            z: NumberIn::Text(z.to_string()),
            mode: self.mode().to_string(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Character {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let raw = CharacterJson::deserialize(deserializer)?;
        let mode: Mode = raw.mode.parse().map_err(D::Error::custom)?;
        let parse = |v: &NumberIn| Scalar::parse(&v.as_string(), mode).map_err(D::Error::custom);
        Character::new(parse(&raw.x)?, parse(&raw.y)?, parse(&raw.z)?).map_err(D::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rational_sqrt;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn kappa_values() {
        assert_eq!(Character::from_ints(0, 0, 0).kappa(), Scalar::from_int(-2));
        assert_eq!(Character::from_ints(2, 2, 2).kappa(), Scalar::from_int(2));
        assert_eq!(
            Character::from_ints(-2, -2, -2).kappa(),
            Scalar::from_int(18)
        );
        assert_eq!(Character::from_ints(3, 3, 9).kappa(), Scalar::from_int(16));
    }

    #[test]
    fn projection_route_agrees() {
        for c in [
            Character::from_ints(3, 3, 9),
            Character::from_ints(0, 0, 0),
            Character::from_ints(2, 2, 2),
            Character::from_rationals([rat(5, 2), rat(10, 3), rat(37, 6)]),
        ] {
            assert_eq!(c.kappa(), c.kappa_via_projection(), "at {}", c);
        }
    }

    #[test]
    fn bilinear_form_matches_kappa() {
        let c = Character::from_ints(0, 0, 0);
        assert_eq!(c.bilinear_form().det(), Scalar::from_int(8));
        let c = Character::from_ints(2, 2, 2);
        assert_eq!(c.bilinear_form().det(), Scalar::from_int(0));
        let c = Character::from_ints(3, 3, 9);
        assert_eq!(c.bilinear_form().det(), Scalar::from_int(-28));
    }

    #[test]
    fn form_classification() {
        assert_eq!(
            classify_form(&Character::from_ints(1, 1, 1)),
            FormClass::Definite
        );
        assert_eq!(
            classify_form(&Character::from_ints(3, 3, 9)),
            FormClass::Indefinite
        );
        assert_eq!(
            classify_form(&Character::from_ints(2, 2, 2)),
            FormClass::Degenerate
        );
    }

    #[test]
    fn definiteness_matches_sylvester_minors() {
        // Independent route: B is positive definite iff its leading
        // principal minors 2, 4 − z², det(B) are all positive.
        use rand::prelude::*;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(53);
        let four = BigRational::from_integer(BigInt::from(4));
        for _ in 0..500 {
            let c = crate::modular_group::random_rational_character(&mut rng, 40, 10);
            let [_, _, z] = match c.repr() {
                Repr::Exact(v) => v.clone(),
                _ => unreachable!(),
            };
            let det = match c.bilinear_form().det() {
                Scalar::Exact(d) => d,
                _ => unreachable!(),
            };
            let sylvester = &four - &z * &z > BigRational::zero() && det > BigRational::zero();
            assert_eq!(
                classify_form(&c) == FormClass::Definite,
                sylvester,
                "at {}",
                c
            );
        }
    }

    #[test]
    fn component_examples() {
        assert_eq!(
            component_of(&Character::from_ints(0, 0, 0)),
            Classification::Component(ComponentLabel::Origin)
        );
        assert_eq!(
            component_of(&Character::from_ints(1, 1, 1)),
            Classification::Component(ComponentLabel::Su2Compact)
        );
        assert_eq!(
            component_of(&Character::from_ints(2, -2, -2)),
            Classification::Component(ComponentLabel::SingularS0)
        );
        let c0 = Character::from_rationals([rat(5, 2), rat(10, 3), rat(37, 6)]);
        assert_eq!(c0.kappa(), Scalar::from_int(2));
        assert_eq!(
            component_of(&c0),
            Classification::Component(ComponentLabel::ReducibleC(0))
        );
        assert_eq!(
            component_of(&Character::from_ints(3, 3, 9)),
            Classification::Component(ComponentLabel::ConnectedAboveTwo)
        );
        // Teichmüller octant at t = -2: a point with sign pattern (+,-,-).
        // κ(3, -3, z) = 16 + z² + 9z equals -2 at z = -3 and z = -6.
        let teich = Character::from_ints(3, -3, -6);
        assert_eq!(teich.kappa(), Scalar::from_int(-2));
        match component_of(&teich) {
            Classification::Component(ComponentLabel::TeichOctant(p)) => {
                assert_eq!(p.to_string(), "+--")
            }
            other => panic!("unexpected classification {:?}", other),
        }
    }

    #[test]
    fn float_boundary_is_flagged() {
        let near = Character::from_f64s(2.0 + 1e-12, 0.5, 0.5);
        assert_eq!(component_of(&near), Classification::BoundaryAmbiguous);
        let clear = Character::from_f64s(0.5, 0.5, 0.5);
        assert_eq!(
            component_of(&clear),
            Classification::Component(ComponentLabel::Su2Compact)
        );
    }

    #[test]
    fn json_round_trip() {
        let c = Character::from_rationals([rat(5, 2), rat(-10, 3), rat(37, 6)]);
        let s = serde_json::to_string(&c).unwrap();
        assert!(s.contains("\"5/2\""), "{}", s);
        assert!(s.contains("\"exact\""), "{}", s);
        let back: Character = serde_json::from_str(&s).unwrap();
        assert_eq!(back, c);

        let f = Character::from_f64s(0.5, -1.25, 3.0);
        let s = serde_json::to_string(&f).unwrap();
        let back: Character = serde_json::from_str(&s).unwrap();
        assert_eq!(back, f);
    }

    #[test]
    fn exact_sqrt_helper_used_by_reduction() {
        // 9/4 has rational square root 3/2; keep the helper honest here since
        // reduction depends on it.
        assert_eq!(rational_sqrt(&rat(9, 4)), Some(rat(3, 2)));
    }
}

#[cfg(test)]
mod prop_tests {
    use super::*;
    use proptest::prelude::*;

    fn arb_rational() -> impl Strategy<Value = BigRational> {
        (-200i64..=200, 1i64..=40)
            .prop_map(|(n, d)| BigRational::new(BigInt::from(n), BigInt::from(d)))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn kappa_routes_agree(x in arb_rational(), y in arb_rational(), z in arb_rational()) {
            let c = Character::from_rationals([x, y, z]);
            prop_assert_eq!(c.kappa(), c.kappa_via_projection());
        }

        #[test]
        fn det_identity(x in arb_rational(), y in arb_rational(), z in arb_rational()) {
            let c = Character::from_rationals([x, y, z]);
            let det = match c.bilinear_form().det() {
                Scalar::Exact(d) => d,
                _ => unreachable!(),
            };
            let kappa = match c.kappa() {
                Scalar::Exact(k) => k,
                _ => unreachable!(),
            };
            let two = BigRational::from_integer(BigInt::from(2));
            prop_assert_eq!(det, BigRational::from_integer(BigInt::from(-2)) * (kappa - two));
        }

        #[test]
        fn json_round_trips(x in arb_rational(), y in arb_rational(), z in arb_rational()) {
            let c = Character::from_rationals([x, y, z]);
            let s = serde_json::to_string(&c).unwrap();
            let back: Character = serde_json::from_str(&s).unwrap();
            prop_assert_eq!(back, c);
        }
    }
}
