//! The automorphism group Γ of κ in its semidirect normal form
//! `PGL(2,Z) ⋉ (Z/2 ⊕ Z/2)`: named generators with their polynomial actions,
//! composition, the homology map into `GL(2,Z)` classes, and the `S3`
//! quotient acting on the projective line over `Z/2`.

use crate::char_space::{Character, Repr};
use num_bigint::BigInt;
use num_rational::BigRational;
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::fmt;
use std::str::FromStr;

#[derive(Debug, Clone, thiserror::Error, PartialEq)]
pub enum GroupError {
    #[error("matrix {0:?} is not unimodular")]
    NonUnimodular([[i64; 2]; 2]),
    #[error("unknown generator mnemonic `{0}`")]
    UnknownGenerator(String),
}

/// The named generators of Γ.
///
/// Sign changes fix κ by flipping two coordinates; permutations act linearly;
/// the quadratic reflections and Dehn twists act by degree-two polynomial
/// maps.  `Epsilon` is the hyperelliptic involution, which acts trivially on
/// characters.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub enum GeneratorId {
    Sigma1,
    Sigma2,
    Sigma3,
    P12,
    P13,
    P23,
    P123,
    P132,
    Qx,
    Qy,
    Qz,
    TauX,
    TauY,
    Nu,
    Epsilon,
}

use GeneratorId::*;

impl GeneratorId {
    pub const ALL: [GeneratorId; 15] = [
        Sigma1, Sigma2, Sigma3, P12, P13, P23, P123, P132, Qx, Qy, Qz, TauX, TauY, Nu, Epsilon,
    ];

    pub fn mnemonic(&self) -> &'static str {
        match self {
            Sigma1 => "Sigma1",
            Sigma2 => "Sigma2",
            Sigma3 => "Sigma3",
            P12 => "P12",
            P13 => "P13",
            P23 => "P23",
            P123 => "P123",
            P132 => "P132",
            Qx => "Qx",
            Qy => "Qy",
            Qz => "Qz",
            TauX => "TauX",
            TauY => "TauY",
            Nu => "Nu",
            Epsilon => "Epsilon",
        }
    }

    pub fn apply_f64(&self, [x, y, z]: [f64; 3]) -> [f64; 3] {
        match self {
            Sigma1 => [x, -y, -z],
            Sigma2 => [-x, y, -z],
            Sigma3 => [-x, -y, z],
            P12 => [y, x, z],
            P13 => [z, y, x],
            P23 => [x, z, y],
            P123 => [z, x, y],
            P132 => [y, z, x],
            Qx => [y * z - x, y, z],
            Qy => [x, x * z - y, z],
            Qz => [x, y, x * y - z],
            TauX => [x, x * y - z, y],
            TauY => [x * y - z, y, x],
            Nu => [y, x, x * y - z],
            Epsilon => [x, y, z],
        }
    }

    fn apply_exact(&self, c: &[BigRational; 3]) -> [BigRational; 3] {
        let [x, y, z] = c;
        match self {
            Sigma1 => [x.clone(), -y.clone(), -z.clone()],
            Sigma2 => [-x.clone(), y.clone(), -z.clone()],
            Sigma3 => [-x.clone(), -y.clone(), z.clone()],
            P12 => [y.clone(), x.clone(), z.clone()],
            P13 => [z.clone(), y.clone(), x.clone()],
            P23 => [x.clone(), z.clone(), y.clone()],
            P123 => [z.clone(), x.clone(), y.clone()],
            P132 => [y.clone(), z.clone(), x.clone()],
            Qx => [y * z - x, y.clone(), z.clone()],
            Qy => [x.clone(), x * z - y, z.clone()],
            Qz => [x.clone(), y.clone(), x * y - z],
            TauX => [x.clone(), x * y - z, y.clone()],
            TauY => [x * y - z, y.clone(), x.clone()],
            Nu => [y.clone(), x.clone(), x * y - z],
            Epsilon => [x.clone(), y.clone(), z.clone()],
        }
    }

    pub fn apply(&self, c: &Character) -> Character {
        match c.repr() {
            Repr::Exact(v) => Character::from_rationals(self.apply_exact(v)),
            Repr::Float(v) => {
                let [x, y, z] = self.apply_f64(*v);
                Character::from_f64s(x, y, z)
            }
        }
    }

    /// Homology class in `PGL(2,Z)`.  Sign changes are not induced by
    /// surface automorphisms and carry the identity class.
    pub fn homology(&self) -> Gl2zClass {
        let m = match self {
            Sigma1 | Sigma2 | Sigma3 => [[1, 0], [0, 1]],
            P12 => [[0, 1], [1, 0]],
            P13 => [[-1, 0], [-1, 1]],
            P23 => [[1, -1], [0, -1]],
            P123 => [[0, -1], [1, -1]],
            P132 => [[-1, 1], [-1, 0]],
            Qx => [[1, 0], [2, -1]],
            Qy => [[1, -2], [0, -1]],
            Qz => [[1, 0], [0, -1]],
            TauX => [[1, 1], [0, 1]],
            TauY => [[1, 0], [1, 1]],
            Nu => [[0, 1], [-1, 0]],
            Epsilon => [[-1, 0], [0, -1]],
        };
        Gl2zClass::new(m).expect("generator homology matrices are unimodular")
    }

    /// Component in the sign group `Z/2 ⊕ Z/2`; trivial for every
    /// π-induced generator.
    pub fn sign_vector(&self) -> SignVector {
        match self {
            Sigma1 => SignVector::new(false, true),
            Sigma2 => SignVector::new(true, false),
            Sigma3 => SignVector::new(true, true),
            _ => SignVector::IDENTITY,
        }
    }

    /// Linear part of the action at the fixed point `(0,0,0)`; always a
    /// signed permutation matrix.
    pub fn linear_part_at_origin(&self) -> [[i64; 3]; 3] {
        match self {
            Sigma1 => [[1, 0, 0], [0, -1, 0], [0, 0, -1]],
            Sigma2 => [[-1, 0, 0], [0, 1, 0], [0, 0, -1]],
            Sigma3 => [[-1, 0, 0], [0, -1, 0], [0, 0, 1]],
            P12 => [[0, 1, 0], [1, 0, 0], [0, 0, 1]],
            P13 => [[0, 0, 1], [0, 1, 0], [1, 0, 0]],
            P23 => [[1, 0, 0], [0, 0, 1], [0, 1, 0]],
            P123 => [[0, 0, 1], [1, 0, 0], [0, 1, 0]],
            P132 => [[0, 1, 0], [0, 0, 1], [1, 0, 0]],
            Qx => [[-1, 0, 0], [0, 1, 0], [0, 0, 1]],
            Qy => [[1, 0, 0], [0, -1, 0], [0, 0, 1]],
            Qz => [[1, 0, 0], [0, 1, 0], [0, 0, -1]],
            TauX => [[1, 0, 0], [0, 0, -1], [0, 1, 0]],
            TauY => [[0, 0, -1], [0, 1, 0], [1, 0, 0]],
            Nu => [[0, 1, 0], [1, 0, 0], [0, 0, -1]],
            Epsilon => [[1, 0, 0], [0, 1, 0], [0, 0, 1]],
        }
    }
}

impl fmt::Display for GeneratorId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.mnemonic())
    }
}

impl FromStr for GeneratorId {
    type Err = GroupError;

    fn from_str(s: &str) -> Result<Self, GroupError> {
        GeneratorId::ALL
            .iter()
            .copied()
            .find(|g| g.mnemonic() == s)
            .ok_or_else(|| GroupError::UnknownGenerator(s.to_string()))
    }
}

/// A class `{m, −m}` in `PGL(2,Z)`, stored as the canonical representative
/// whose first nonzero entry of the first row is positive.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Gl2zClass {
    m: [[i64; 2]; 2],
}

fn mat_mul(a: [[i64; 2]; 2], b: [[i64; 2]; 2]) -> [[i64; 2]; 2] {
    let mut out = [[0i64; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            let v = a[i][0] as i128 * b[0][j] as i128 + a[i][1] as i128 * b[1][j] as i128;
            out[i][j] = i64::try_from(v).expect("matrix entry overflow");
        }
    }
    out
}

fn canonicalize(mut m: [[i64; 2]; 2]) -> [[i64; 2]; 2] {
    let lead = if m[0][0] != 0 { m[0][0] } else { m[0][1] };
    if lead < 0 {
        for row in &mut m {
            row[0] = -row[0];
            row[1] = -row[1];
        }
    }
    m
}

impl Gl2zClass {
    pub fn new(m: [[i64; 2]; 2]) -> Result<Self, GroupError> {
        let det = m[0][0] as i128 * m[1][1] as i128 - m[0][1] as i128 * m[1][0] as i128;
        if det != 1 && det != -1 {
            return Err(GroupError::NonUnimodular(m));
        }
        Ok(Gl2zClass { m: canonicalize(m) })
    }

    pub fn identity() -> Self {
        Gl2zClass {
            m: [[1, 0], [0, 1]],
        }
    }

    pub fn rep(&self) -> [[i64; 2]; 2] {
        self.m
    }

    pub fn det(&self) -> i64 {
        self.m[0][0] * self.m[1][1] - self.m[0][1] * self.m[1][0]
    }

    pub fn mul(&self, rhs: &Gl2zClass) -> Gl2zClass {
        Gl2zClass {
            m: canonicalize(mat_mul(self.m, rhs.m)),
        }
    }

    pub fn is_identity(&self) -> bool {
        self.m == [[1, 0], [0, 1]]
    }

    fn mod2(&self) -> [[u8; 2]; 2] {
        let r = |v: i64| (v.rem_euclid(2)) as u8;
        [
            [r(self.m[0][0]), r(self.m[0][1])],
            [r(self.m[1][0]), r(self.m[1][1])],
        ]
    }

    /// The permutation of the three points of `P¹(Z/2)` under reduction
    /// mod 2, with `[1:0] ↦ x`, `[0:1] ↦ y`, `[1:1] ↦ z`.
    pub fn s3_image(&self) -> Perm3 {
        let m = self.mod2();
        let points: [[u8; 2]; 3] = [[1, 0], [0, 1], [1, 1]];
        let mut perm = [0usize; 3];
        for (i, p) in points.iter().enumerate() {
            let img = [
                (m[0][0] * p[0] + m[0][1] * p[1]) % 2,
                (m[1][0] * p[0] + m[1][1] * p[1]) % 2,
            ];
            perm[i] = points
                .iter()
                .position(|q| *q == img)
                .expect("invertible matrix maps projective points to projective points");
        }
        Perm3(perm)
    }
}

/// A permutation of `{1,2,3}` stored 0-indexed as the image list.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub struct Perm3(pub [usize; 3]);

impl Perm3 {
    pub fn identity() -> Self {
        Perm3([0, 1, 2])
    }

    pub fn is_identity(&self) -> bool {
        self.0 == [0, 1, 2]
    }

    pub fn compose(&self, rhs: &Perm3) -> Perm3 {
        Perm3([self.0[rhs.0[0]], self.0[rhs.0[1]], self.0[rhs.0[2]]])
    }
}

impl fmt::Display for Perm3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.0 {
            [0, 1, 2] => write!(f, "id"),
            [1, 0, 2] => write!(f, "(12)"),
            [2, 1, 0] => write!(f, "(13)"),
            [0, 2, 1] => write!(f, "(23)"),
            [1, 2, 0] => write!(f, "(123)"),
            [2, 0, 1] => write!(f, "(132)"),
            _ => unreachable!("not a permutation"),
        }
    }
}

/// Element of the sign group `Z/2 ⊕ Z/2`, written as the pair of bits
/// `(a, b)`: the corresponding central twist negates `ρ(X)` when `a` is set
/// and `ρ(Y)` when `b` is set, so it maps `(x,y,z)` to
/// `((−1)^a x, (−1)^b y, (−1)^{a+b} z)`.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub struct SignVector {
    a: bool,
    b: bool,
}

impl SignVector {
    pub const IDENTITY: SignVector = SignVector { a: false, b: false };

    pub fn new(a: bool, b: bool) -> Self {
        SignVector { a, b }
    }

    pub fn bits(&self) -> [u8; 2] {
        [self.a as u8, self.b as u8]
    }

    pub fn is_identity(&self) -> bool {
        !self.a && !self.b
    }

    pub fn xor(&self, rhs: &SignVector) -> SignVector {
        SignVector {
            a: self.a ^ rhs.a,
            b: self.b ^ rhs.b,
        }
    }

    /// Right action of a matrix mod 2 on the row vector `(a, b)`.
    fn times_mod2(&self, m: [[u8; 2]; 2]) -> SignVector {
        let a = self.a as u8;
        let b = self.b as u8;
        SignVector {
            a: (a * m[0][0] + b * m[1][0]) % 2 == 1,
            b: (a * m[0][1] + b * m[1][1]) % 2 == 1,
        }
    }

    /// The corresponding sign-change generator, if nontrivial.
    pub fn as_generator(&self) -> Option<GeneratorId> {
        match (self.a, self.b) {
            (false, false) => None,
            (false, true) => Some(Sigma1),
            (true, false) => Some(Sigma2),
            (true, true) => Some(Sigma3),
        }
    }
}

/// An element of Γ: a word in the named generators together with its
/// semidirect normal form.  Two elements with equal normal form act
/// identically on all characters.
///
/// Words multiply like functions: in `compose(g, h)` and in the word list,
/// the rightmost generator is applied first.
#[derive(Clone, Debug)]
pub struct GammaElement {
    word: Vec<GeneratorId>,
    pgl: Gl2zClass,
    signs: SignVector,
}

impl GammaElement {
    pub fn identity() -> Self {
        GammaElement {
            word: Vec::new(),
            pgl: Gl2zClass::identity(),
            signs: SignVector::IDENTITY,
        }
    }

    pub fn generator(id: GeneratorId) -> Self {
        GammaElement {
            word: vec![id],
            pgl: id.homology(),
            signs: id.sign_vector(),
        }
    }

    pub fn from_word(word: &[GeneratorId]) -> Self {
        word.iter()
            .fold(GammaElement::identity(), |acc, id| {
                acc.compose(&GammaElement::generator(*id))
            })
    }

    pub fn word(&self) -> &[GeneratorId] {
        &self.word
    }

    pub fn pgl(&self) -> &Gl2zClass {
        &self.pgl
    }

    pub fn signs(&self) -> &SignVector {
        &self.signs
    }

    /// `g.compose(&h)` is the element acting as `g` after `h`.
    ///
    /// Normal forms combine by the semidirect law: the `PGL` parts multiply
    /// and the inner sign vector is transported across the right factor by
    /// its matrix mod 2.
    pub fn compose(&self, rhs: &GammaElement) -> GammaElement {
        let mut word = self.word.clone();
        word.extend_from_slice(&rhs.word);
        GammaElement {
            word,
            pgl: self.pgl.mul(&rhs.pgl),
            signs: self.signs.times_mod2(rhs.pgl.mod2()).xor(&rhs.signs),
        }
    }

    pub fn apply(&self, c: &Character) -> Character {
        let mut out = c.clone();
        for id in self.word.iter().rev() {
            out = id.apply(&out);
        }
        out
    }

    pub fn apply_f64(&self, mut v: [f64; 3]) -> [f64; 3] {
        for id in self.word.iter().rev() {
            v = id.apply_f64(v);
        }
        v
    }

    pub fn homology(&self) -> Gl2zClass {
        self.pgl
    }

    pub fn s3_image(&self) -> Perm3 {
        self.pgl.s3_image()
    }

    /// Whether the element lies in the level-two subgroup, the kernel of the
    /// `S3` quotient.  These are exactly the words over
    /// `{Qx, Qy, Qz, Sigma1, Sigma2, Sigma3}` up to normal form.
    pub fn in_level_two(&self) -> bool {
        self.s3_image().is_identity()
    }

    pub fn is_identity_normal_form(&self) -> bool {
        self.pgl.is_identity() && self.signs.is_identity()
    }

    pub fn same_normal_form(&self, rhs: &GammaElement) -> bool {
        self.pgl == rhs.pgl && self.signs == rhs.signs
    }

    /// Realizes a normal form `(m, s)` as a generator word: the matrix part
    /// by a Euclidean column reduction through powers of `TauX` and swaps by
    /// `P12`, a final cleanup over `{Qz, TauX}`, then one sign-change
    /// generator.
    pub fn from_gl2z(class: &Gl2zClass, signs: SignVector) -> GammaElement {
        let mut r = class.rep();
        let mut word: Vec<GeneratorId> = Vec::new();

        // TauX^q as a word; negative powers use TauX⁻¹ = Qz ∘ P23.
        fn push_taux_power(word: &mut Vec<GeneratorId>, q: i64) {
            if q >= 0 {
                word.extend(std::iter::repeat(TauX).take(q as usize));
            } else {
                for _ in 0..(-q) {
                    word.extend([Qz, P23]);
                }
            }
        }

        // Reduce the first column (a, c) to (±1, 0) by left multiplications,
        // emitting the inverse word of each elementary step.
        loop {
            let a = r[0][0];
            let c = r[1][0];
            if c == 0 {
                break;
            }
            if a == 0 || a.abs() < c.abs() {
                r = mat_mul([[0, 1], [1, 0]], r);
                word.push(P12);
            } else {
                let q = a / c;
                // row0 -= q * row1, i.e. left multiplication by TauX^{-q}.
                r[0][0] -= q * r[1][0];
                r[0][1] -= q * r[1][1];
                push_taux_power(&mut word, q);
            }
        }

        if r[0][0] < 0 {
            for row in &mut r {
                row[0] = -row[0];
                row[1] = -row[1];
            }
        }
        debug_assert_eq!(r[0][0], 1);
        debug_assert_eq!(r[1][0], 0);
        let b = r[0][1];
        match r[1][1] {
            1 => push_taux_power(&mut word, b),
            -1 => {
                push_taux_power(&mut word, -b);
                word.push(Qz);
            }
            _ => unreachable!("unimodular upper triangular"),
        }

        let mut elem = GammaElement::from_word(&word);
        assert_eq!(&elem.pgl, class, "decomposition reproduces the class");
        if let Some(sigma) = elem.signs.xor(&signs).as_generator() {
            elem = elem.compose(&GammaElement::generator(sigma));
        }
        debug_assert_eq!(elem.signs, signs);
        elem
    }

    /// A uniform word of the given length over the full generator alphabet,
    /// deterministic in the seed.
    pub fn random_element(length: usize, seed: u64) -> GammaElement {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        Self::random_with_rng(length, &mut rng)
    }

    pub fn random_with_rng(length: usize, rng: &mut impl Rng) -> GammaElement {
        let word: Vec<GeneratorId> = (0..length)
            .map(|_| GeneratorId::ALL[rng.gen_range(0..GeneratorId::ALL.len())])
            .collect();
        GammaElement::from_word(&word)
    }

    pub fn parse_word(s: &str) -> Result<GammaElement, GroupError> {
        let mut ids = Vec::new();
        for tok in s.split_whitespace() {
            if tok == "id" {
                continue;
            }
            ids.push(tok.parse::<GeneratorId>()?);
        }
        Ok(GammaElement::from_word(&ids))
    }
}

impl fmt::Display for GammaElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for id in &self.word {
            if !first {
                write!(f, " ")?;
            }
            write!(f, "{}", id)?;
            first = false;
        }
        Ok(())
    }
}

impl PartialEq for GammaElement {
    /// Equality of group elements, i.e. of normal forms.
    fn eq(&self, other: &Self) -> bool {
        self.same_normal_form(other)
    }
}

#[derive(Serialize, Deserialize)]
struct NormalFormJson {
    m: [[i64; 2]; 2],
    signs: [u8; 2],
}

impl Serialize for GammaElement {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        NormalFormJson {
            m: self.pgl.rep(),
            signs: self.signs.bits(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for GammaElement {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let raw = NormalFormJson::deserialize(deserializer)?;
        let class = Gl2zClass::new(raw.m).map_err(D::Error::custom)?;
        let signs = SignVector::new(raw.signs[0] == 1, raw.signs[1] == 1);
        Ok(GammaElement::from_gl2z(&class, signs))
    }
}

/// Convenience: apply a single generator.
pub fn apply_generator(id: GeneratorId, c: &Character) -> Character {
    id.apply(c)
}

/// Random exact rational character with numerators in `[-bound, bound]` and
/// denominators in `[1, max_den]`.
pub fn random_rational_character(rng: &mut impl Rng, bound: i64, max_den: i64) -> Character {
    let mut coord = || {
        BigRational::new(
            BigInt::from(rng.gen_range(-bound..=bound)),
            BigInt::from(rng.gen_range(1..=max_den)),
        )
    };
    Character::from_rationals([coord(), coord(), coord()])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Scalar;

    #[test]
    fn generator_action_examples() {
        let c = Character::from_ints(3, 3, 9);
        assert_eq!(Qz.apply(&c), Character::from_ints(3, 3, 0));
        assert_eq!(TauX.apply(&c), Character::from_ints(3, 0, 3));
        assert_eq!(
            Sigma1.apply(&Character::from_ints(1, 2, 3)),
            Character::from_ints(1, -2, -3)
        );
        assert_eq!(Epsilon.apply(&c), c);
    }

    #[test]
    fn kappa_is_preserved_by_all_generators() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..50 {
            let c = random_rational_character(&mut rng, 40, 12);
            let k = c.kappa();
            for g in GeneratorId::ALL {
                assert_eq!(g.apply(&c).kappa(), k, "generator {} at {}", g, c);
            }
        }
    }

    #[test]
    fn involutions_and_relations() {
        let qz = GammaElement::generator(Qz);
        assert!(qz.compose(&qz).is_identity_normal_form());
        let p123 = GammaElement::generator(P123);
        let cubed = p123.compose(&p123).compose(&p123);
        assert!(cubed.is_identity_normal_form());

        let tau_y = GammaElement::generator(TauY);
        let p13_qz = GammaElement::generator(P13).compose(&GammaElement::generator(Qz));
        assert!(tau_y.same_normal_form(&p13_qz));

        let tau_x = GammaElement::generator(TauX);
        let p23_qz = GammaElement::generator(P23).compose(&GammaElement::generator(Qz));
        assert!(tau_x.same_normal_form(&p23_qz));

        let nu = GammaElement::generator(Nu);
        let p12_qz = GammaElement::generator(P12).compose(&GammaElement::generator(Qz));
        assert!(nu.same_normal_form(&p12_qz));
    }

    #[test]
    fn homology_examples() {
        assert_eq!(TauX.homology().rep(), [[1, 1], [0, 1]]);
        assert!(Sigma2.homology().is_identity());
        assert_eq!(P12.homology().rep(), [[0, 1], [1, 0]]);
        assert!(Epsilon.homology().is_identity(), "−I is trivial in PGL");
    }

    #[test]
    fn s3_images() {
        assert!(Qz.homology().s3_image().is_identity());
        assert!(Sigma1.homology().s3_image().is_identity());
        assert_eq!(P123.homology().s3_image().to_string(), "(123)");
        assert_eq!(TauX.homology().s3_image().to_string(), "(23)");
    }

    #[test]
    fn from_gl2z_examples() {
        let id = GammaElement::from_gl2z(&Gl2zClass::identity(), SignVector::IDENTITY);
        assert!(id.word().is_empty());

        let t = Gl2zClass::new([[1, 1], [0, 1]]).unwrap();
        let g = GammaElement::from_gl2z(&t, SignVector::IDENTITY);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..100 {
            let c = random_rational_character(&mut rng, 30, 8);
            assert_eq!(g.apply(&c), TauX.apply(&c));
        }

        let qy_h = Gl2zClass::new([[1, -2], [0, -1]]).unwrap();
        let g = GammaElement::from_gl2z(&qy_h, SignVector::IDENTITY);
        for _ in 0..100 {
            let c = random_rational_character(&mut rng, 30, 8);
            assert_eq!(g.apply(&c), Qy.apply(&c));
        }
    }

    #[test]
    fn normal_form_soundness_on_random_words() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for len in 0..=12 {
            let g = GammaElement::random_with_rng(len, &mut rng);
            let realized = GammaElement::from_gl2z(g.pgl(), *g.signs());
            for _ in 0..10 {
                let c = random_rational_character(&mut rng, 20, 6);
                assert_eq!(g.apply(&c), realized.apply(&c), "word {}", g);
            }
        }
    }

    #[test]
    fn compose_acts_like_function_composition() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        for _ in 0..60 {
            let g = GammaElement::random_with_rng(rng.gen_range(0..6), &mut rng);
            let h = GammaElement::random_with_rng(rng.gen_range(0..6), &mut rng);
            let c = random_rational_character(&mut rng, 20, 6);
            assert_eq!(g.compose(&h).apply(&c), g.apply(&h.apply(&c)));
        }
    }

    #[test]
    fn origin_is_fixed() {
        let origin = Character::from_ints(0, 0, 0);
        for g in GeneratorId::ALL {
            assert_eq!(g.apply(&origin), origin);
        }
    }

    #[test]
    fn differential_at_origin_matches_s3_image() {
        for g in GeneratorId::ALL {
            if g.sign_vector() != SignVector::IDENTITY {
                continue;
            }
            let m = g.linear_part_at_origin();
            let mut perm = [usize::MAX; 3];
            for i in 0..3 {
                let nonzero: Vec<usize> = (0..3).filter(|&j| m[i][j] != 0).collect();
                assert_eq!(nonzero.len(), 1, "{} has a signed permutation Jacobian", g);
                assert_eq!(m[i][nonzero[0]].abs(), 1);
                // Column j feeds coordinate i, so the permutation sends j to i.
                perm[nonzero[0]] = i;
            }
            assert_eq!(Perm3(perm), g.homology().s3_image(), "generator {}", g);
        }
    }

    #[test]
    fn level_two_membership() {
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        let gens2 = [Qx, Qy, Qz, Sigma1, Sigma2, Sigma3];
        for _ in 0..200 {
            let len = rng.gen_range(0..8);
            let word: Vec<GeneratorId> =
                (0..len).map(|_| gens2[rng.gen_range(0..6)]).collect();
            assert!(GammaElement::from_word(&word).in_level_two());
        }
        assert!(!GammaElement::generator(P12).in_level_two());
        assert!(!GammaElement::generator(TauX).in_level_two());
        assert!(GammaElement::generator(Epsilon).in_level_two());
    }

    #[test]
    fn random_element_is_deterministic() {
        let a = GammaElement::random_element(10, 42);
        let b = GammaElement::random_element(10, 42);
        assert_eq!(a.word(), b.word());
        assert_eq!(GammaElement::random_element(0, 1).word().len(), 0);
        let c = Character::from_ints(1, 1, 1);
        assert_eq!(a.apply(&c).kappa(), Scalar::from_int(0));
    }

    #[test]
    fn word_and_normal_form_serialization() {
        let g = GammaElement::parse_word("Qz TauX Sigma1").unwrap();
        assert_eq!(g.to_string(), "Qz TauX Sigma1");
        let json = serde_json::to_string(&g).unwrap();
        let back: GammaElement = serde_json::from_str(&json).unwrap();
        assert!(back.same_normal_form(&g));
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..50 {
            let c = random_rational_character(&mut rng, 10, 4);
            assert_eq!(back.apply(&c), g.apply(&c));
        }
    }
}
