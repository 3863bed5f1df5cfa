//! Trace polynomials of free-group words, a numeric 2×2 matrix oracle, and
//! the reducible-locus algebra at κ = 2.
//!
//! For a word `w` in the free group `⟨X, Y⟩` there is an integer polynomial
//! `f_w(x, y, z)` with `tr ρ(w) = f_w(tr ρ(X), tr ρ(Y), tr ρ(XY))` for every
//! `SL(2)` representation ρ.  [`TraceCalculator`] computes it by rewriting
//! with the two trace identities
//!
//! ```text
//! tr(UV) = tr(U) tr(V) − tr(UV⁻¹),        tr(U⁻¹) = tr(U)
//! ```
//!
//! together with `tr(I) = 2` and the base monomials `x`, `y`, `z`, reducing
//! the highest-exponent syllable first via `A^n = tr(A) A^{n−1} − A^{n−2}`.
//! The rewriting order is a tested property, not an assumption.

use crate::char_space::{Character, Repr};
use crate::modular_group::GeneratorId;
use crate::scalar::Scalar;
use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::str::FromStr;
use std::sync::RwLock;

#[derive(Debug, Clone, thiserror::Error, PartialEq)]
pub enum TraceError {
    #[error("cannot parse `{0}` as a free-group word")]
    BadWord(String),
    #[error("zero parameter where a nonzero scalar is required")]
    ZeroParameter,
    #[error("parameters must be in the same arithmetic mode")]
    ModeMismatch,
    #[error("precondition zeta = xi * eta violated")]
    NotAProduct,
}

/// One of the two free generators.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FreeGen {
    X,
    Y,
}

impl FreeGen {
    pub fn other(self) -> FreeGen {
        match self {
            FreeGen::X => FreeGen::Y,
            FreeGen::Y => FreeGen::X,
        }
    }
}

/// A freely reduced word in `⟨X, Y⟩`: adjacent syllables use distinct
/// generators and all exponents are nonzero.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FreeWord {
    syllables: Vec<(FreeGen, i64)>,
}

fn normalize(raw: impl IntoIterator<Item = (FreeGen, i64)>) -> Vec<(FreeGen, i64)> {
    let mut out: Vec<(FreeGen, i64)> = Vec::new();
    for (g, e) in raw {
        if e == 0 {
            continue;
        }
        match out.last_mut() {
            Some((lg, le)) if *lg == g => {
                *le += e;
                if *le == 0 {
                    out.pop();
                }
            }
            _ => out.push((g, e)),
        }
    }
    out
}

impl FreeWord {
    pub fn new(syllables: impl IntoIterator<Item = (FreeGen, i64)>) -> Self {
        FreeWord {
            syllables: normalize(syllables),
        }
    }

    pub fn empty() -> Self {
        FreeWord {
            syllables: Vec::new(),
        }
    }

    pub fn x() -> Self {
        FreeWord::new([(FreeGen::X, 1)])
    }

    pub fn y() -> Self {
        FreeWord::new([(FreeGen::Y, 1)])
    }

    pub fn xy() -> Self {
        FreeWord::new([(FreeGen::X, 1), (FreeGen::Y, 1)])
    }

    /// The boundary word `[X,Y] = X Y X⁻¹ Y⁻¹`.
    pub fn commutator() -> Self {
        FreeWord::new([
            (FreeGen::X, 1),
            (FreeGen::Y, 1),
            (FreeGen::X, -1),
            (FreeGen::Y, -1),
        ])
    }

    pub fn syllables(&self) -> &[(FreeGen, i64)] {
        &self.syllables
    }

    pub fn is_empty(&self) -> bool {
        self.syllables.is_empty()
    }

    /// Total letter count `Σ |e|`.
    pub fn total_length(&self) -> u64 {
        self.syllables.iter().map(|(_, e)| e.unsigned_abs()).sum()
    }

    pub fn inverse(&self) -> FreeWord {
        FreeWord::new(self.syllables.iter().rev().map(|&(g, e)| (g, -e)))
    }

    pub fn concat(&self, rhs: &FreeWord) -> FreeWord {
        FreeWord::new(self.syllables.iter().chain(rhs.syllables.iter()).copied())
    }

    /// Cyclic rotation by `k` syllables (a conjugate word).
    pub fn rotated(&self, k: usize) -> FreeWord {
        if self.syllables.is_empty() {
            return self.clone();
        }
        let k = k % self.syllables.len();
        FreeWord::new(
            self.syllables[k..]
                .iter()
                .chain(self.syllables[..k].iter())
                .copied(),
        )
    }
}

impl fmt::Display for FreeWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.syllables.is_empty() {
            return write!(f, "1");
        }
        let mut first = true;
        for (g, e) in &self.syllables {
            if !first {
                write!(f, " ")?;
            }
            first = false;
            let name = match g {
                FreeGen::X => "X",
                FreeGen::Y => "Y",
            };
            if *e == 1 {
                write!(f, "{}", name)?;
            } else {
                write!(f, "{}^{}", name, e)?;
            }
        }
        Ok(())
    }
}

impl FromStr for FreeWord {
    type Err = TraceError;

    /// Parses words like `"X Y^-2 X^3"`; `"1"` and the empty string denote
    /// the identity.
    fn from_str(s: &str) -> Result<Self, TraceError> {
        let mut syllables = Vec::new();
        for tok in s.split_whitespace() {
            if tok == "1" {
                continue;
            }
            let (head, exp) = match tok.split_once('^') {
                Some((h, e)) => (
                    h,
                    e.parse::<i64>()
                        .map_err(|_| TraceError::BadWord(s.to_string()))?,
                ),
                None => (tok, 1),
            };
            let gen = match head {
                "X" => FreeGen::X,
                "Y" => FreeGen::Y,
                _ => return Err(TraceError::BadWord(s.to_string())),
            };
            syllables.push((gen, exp));
        }
        Ok(FreeWord::new(syllables))
    }
}

/// Monomial exponents `(i, j, k)` of `x^i y^j z^k`.
pub type Monomial = [u32; 3];

/// Sparse integer polynomial in `x, y, z`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TracePolynomial {
    terms: BTreeMap<Monomial, BigInt>,
}

impl TracePolynomial {
    pub fn zero() -> Self {
        TracePolynomial {
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(c: i64) -> Self {
        let mut p = TracePolynomial::zero();
        p.add_term([0, 0, 0], BigInt::from(c));
        p
    }

    /// The coordinate monomial for axis 0, 1 or 2.
    pub fn var(axis: usize) -> Self {
        let mut m = [0u32; 3];
        m[axis] = 1;
        let mut p = TracePolynomial::zero();
        p.add_term(m, BigInt::one());
        p
    }

    fn add_term(&mut self, m: Monomial, c: BigInt) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(m).or_insert_with(BigInt::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&m);
        }
    }

    pub fn terms(&self) -> &BTreeMap<Monomial, BigInt> {
        &self.terms
    }

    pub fn add(&self, rhs: &TracePolynomial) -> TracePolynomial {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(*m, c.clone());
        }
        out
    }

    pub fn sub(&self, rhs: &TracePolynomial) -> TracePolynomial {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(*m, -c.clone());
        }
        out
    }

    pub fn mul(&self, rhs: &TracePolynomial) -> TracePolynomial {
        let mut out = TracePolynomial::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                let m = [ma[0] + mb[0], ma[1] + mb[1], ma[2] + mb[2]];
                out.add_term(m, ca * cb);
            }
        }
        out
    }

    pub fn eval_f64(&self, [x, y, z]: [f64; 3]) -> f64 {
        let mut acc = 0.0;
        for (m, c) in &self.terms {
            let c = c.to_f64().unwrap_or(f64::NAN);
            acc += c * x.powi(m[0] as i32) * y.powi(m[1] as i32) * z.powi(m[2] as i32);
        }
        acc
    }

    pub fn eval_rational(&self, v: &[BigRational; 3]) -> BigRational {
        let mut acc = BigRational::zero();
        for (m, c) in &self.terms {
            let mut t = BigRational::from_integer(c.clone());
            for (axis, &e) in m.iter().enumerate() {
                for _ in 0..e {
                    t *= &v[axis];
                }
            }
            acc += t;
        }
        acc
    }

    pub fn eval(&self, c: &Character) -> Scalar {
        match c.repr() {
            Repr::Exact(v) => Scalar::Exact(self.eval_rational(v)),
            Repr::Float(v) => Scalar::Float(self.eval_f64(*v)),
        }
    }

    /// The invariant κ as a polynomial.
    pub fn kappa() -> TracePolynomial {
        let mut p = TracePolynomial::zero();
        p.add_term([2, 0, 0], BigInt::one());
        p.add_term([0, 2, 0], BigInt::one());
        p.add_term([0, 0, 2], BigInt::one());
        p.add_term([1, 1, 1], -BigInt::one());
        p.add_term([0, 0, 0], BigInt::from(-2));
        p
    }
}

impl fmt::Display for TracePolynomial {
    /// Degree-lexicographic order: higher total degree first, then `x > y > z`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut terms: Vec<(&Monomial, &BigInt)> = self.terms.iter().collect();
        terms.sort_by(|(ma, _), (mb, _)| {
            let da: u32 = ma.iter().sum();
            let db: u32 = mb.iter().sum();
            db.cmp(&da).then_with(|| mb.cmp(ma))
        });
        for (idx, (m, c)) in terms.iter().enumerate() {
            let neg = c.is_negative();
            let mag = c.magnitude();
            if idx == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else if neg {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let is_const = **m == [0, 0, 0];
            if !mag.is_one() || is_const {
                write!(f, "{}", mag)?;
                if !is_const {
                    write!(f, " ")?;
                }
            }
            let mut first_var = true;
            for (axis, name) in ["x", "y", "z"].iter().enumerate() {
                let e = m[axis];
                if e == 0 {
                    continue;
                }
                if !first_var {
                    write!(f, " ")?;
                }
                first_var = false;
                if e == 1 {
                    write!(f, "{}", name)?;
                } else {
                    write!(f, "{}^{}", name, e)?;
                }
            }
        }
        Ok(())
    }
}

/// Pivot choice when several syllables tie for the highest exponent.
/// Distinct strategies must produce the same polynomial; this is exercised
/// by tests rather than assumed.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum ReductionOrder {
    LeftmostHighest,
    RightmostHighest,
}

/// Computes Fricke trace polynomials with an internal memo table keyed on
/// cyclically reduced words.  The table takes concurrent reads and
/// serialized inserts; construct with [`TraceCalculator::without_memo`] to
/// disable it.
pub struct TraceCalculator {
    memo: Option<RwLock<HashMap<Vec<(FreeGen, i64)>, TracePolynomial>>>,
    order: ReductionOrder,
}

impl Default for TraceCalculator {
    fn default() -> Self {
        Self::new()
    }
}

impl TraceCalculator {
    pub fn new() -> Self {
        TraceCalculator {
            memo: Some(RwLock::new(HashMap::new())),
            order: ReductionOrder::LeftmostHighest,
        }
    }

    pub fn without_memo() -> Self {
        TraceCalculator {
            memo: None,
            order: ReductionOrder::LeftmostHighest,
        }
    }

    pub fn with_order(order: ReductionOrder) -> Self {
        TraceCalculator {
            memo: Some(RwLock::new(HashMap::new())),
            order,
        }
    }

    pub fn trace_polynomial(&self, w: &FreeWord) -> TracePolynomial {
        self.tr(w.syllables().to_vec())
    }

    fn tr(&self, sylls: Vec<(FreeGen, i64)>) -> TracePolynomial {
        let cyc = cyclic_reduce(sylls);
        let key = canonical_key(&cyc);
        if let Some(memo) = &self.memo {
            if let Some(hit) = memo.read().expect("memo poisoned").get(&key) {
                return hit.clone();
            }
        }
        let result = self.tr_core(&cyc);
        if let Some(memo) = &self.memo {
            memo.write()
                .expect("memo poisoned")
                .insert(key, result.clone());
        }
        result
    }

    fn tr_core(&self, w: &[(FreeGen, i64)]) -> TracePolynomial {
        if w.is_empty() {
            return TracePolynomial::constant(2);
        }
        if w.len() == 1 {
            return power_trace(w[0].0, w[0].1.unsigned_abs());
        }

        let max_abs = w.iter().map(|(_, e)| e.unsigned_abs()).max().unwrap();
        if max_abs >= 2 {
            let i = match self.order {
                ReductionOrder::LeftmostHighest => w
                    .iter()
                    .position(|(_, e)| e.unsigned_abs() == max_abs)
                    .unwrap(),
                ReductionOrder::RightmostHighest => w
                    .iter()
                    .rposition(|(_, e)| e.unsigned_abs() == max_abs)
                    .unwrap(),
            };
            let (gen, e) = w[i];
            let s = e.signum();
            let with_exp = |k: i64| {
                let mut v = w.to_vec();
                v[i].1 = k;
                normalize(v)
            };
            let ta = gen_trace(gen);
            return ta
                .mul(&self.tr(with_exp(e - s)))
                .sub(&self.tr(with_exp(e - 2 * s)));
        }

        if let Some(i) = w.iter().position(|(_, e)| *e == -1) {
            // Rotate the inverted letter to the front: w ~ A⁻¹ g, and
            // tr(A⁻¹ g) = tr(A) tr(g) − tr(A g).
            let mut rot: Vec<(FreeGen, i64)> = w[i..].to_vec();
            rot.extend_from_slice(&w[..i]);
            let gen = rot[0].0;
            let g = rot[1..].to_vec();
            let mut ag = vec![(gen, 1)];
            ag.extend_from_slice(&rot[1..]);
            return gen_trace(gen).mul(&self.tr(g)).sub(&self.tr(normalize(ag)));
        }

        // All exponents are +1 and syllables alternate, so the cyclic word
        // is (XY)^k.
        debug_assert!(
            w.len() % 2 == 0,
            "odd alternating word is not cyclically reduced"
        );
        debug_assert!(w.windows(2).all(|p| p[0].0 == p[1].0.other()));
        chebyshev_like(TracePolynomial::var(2), w.len() as u64 / 2)
    }
}

fn gen_trace(g: FreeGen) -> TracePolynomial {
    match g {
        FreeGen::X => TracePolynomial::var(0),
        FreeGen::Y => TracePolynomial::var(1),
    }
}

/// `tr(A^n)` from `tr(A)` via the three-term recursion.
fn power_trace(g: FreeGen, n: u64) -> TracePolynomial {
    chebyshev_like(gen_trace(g), n)
}

fn chebyshev_like(v: TracePolynomial, n: u64) -> TracePolynomial {
    let mut prev = TracePolynomial::constant(2);
    if n == 0 {
        return prev;
    }
    let mut cur = v.clone();
    for _ in 1..n {
        let next = v.mul(&cur).sub(&prev);
        prev = cur;
        cur = next;
    }
    cur
}

fn cyclic_reduce(w: Vec<(FreeGen, i64)>) -> Vec<(FreeGen, i64)> {
    let mut w = normalize(w);
    while w.len() >= 2 && w.first().unwrap().0 == w.last().unwrap().0 {
        let (g, e_last) = w.pop().unwrap();
        let e = w[0].1 + e_last;
        if e == 0 {
            w.remove(0);
            w = normalize(w);
        } else {
            w[0] = (g, e);
        }
    }
    w
}

/// Lexicographic minimum over all syllable rotations of the word and its
/// inverse; traces are invariant under both.
fn canonical_key(w: &[(FreeGen, i64)]) -> Vec<(FreeGen, i64)> {
    if w.len() <= 1 {
        return w.to_vec();
    }
    let inv: Vec<(FreeGen, i64)> = w.iter().rev().map(|&(g, e)| (g, -e)).collect();
    let mut best: Option<Vec<(FreeGen, i64)>> = None;
    for cand in [w.to_vec(), inv] {
        for k in 0..cand.len() {
            let mut rot: Vec<(FreeGen, i64)> = cand[k..].to_vec();
            rot.extend_from_slice(&cand[..k]);
            if best.as_ref().map_or(true, |b| rot < *b) {
                best = Some(rot);
            }
        }
    }
    best.unwrap()
}

/// One-shot convenience over a fresh calculator.
pub fn trace_polynomial(w: &FreeWord) -> TracePolynomial {
    TraceCalculator::new().trace_polynomial(w)
}

/// The root of `ζ² − zζ + 1` with `|ζ| ≥ 1`, ties broken towards
/// nonnegative imaginary part.
pub fn zeta_root(z: f64) -> Complex64 {
    if z.abs() >= 2.0 {
        let r = (z * z - 4.0).sqrt();
        let zeta = 0.5 * (z + z.signum() * r);
        Complex64::new(zeta, 0.0)
    } else {
        Complex64::new(0.5 * z, 0.5 * (4.0 - z * z).sqrt())
    }
}

pub(crate) type Mat2c = [[Complex64; 2]; 2];

fn mat_mul(a: &Mat2c, b: &Mat2c) -> Mat2c {
    let mut out = [[Complex64::new(0.0, 0.0); 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            out[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
        }
    }
    out
}

fn mat_inv_unimodular(a: &Mat2c) -> Mat2c {
    [[a[1][1], -a[0][1]], [-a[1][0], a[0][0]]]
}

fn mat_identity() -> Mat2c {
    [
        [Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)],
        [Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)],
    ]
}

/// Representing matrices `ρ(X) = [[x, −1], [1, 0]]`,
/// `ρ(Y) = [[0, ζ⁻¹], [−ζ, y]]` with `ζ + ζ⁻¹ = z`.
pub fn representation(c: &Character) -> (Mat2c, Mat2c) {
    let [x, y, z] = c.to_f64_triple();
    representation_with_zeta(x, y, zeta_root(z))
}

fn representation_with_zeta(x: f64, y: f64, zeta: Complex64) -> (Mat2c, Mat2c) {
    let o = Complex64::new(0.0, 0.0);
    let rx = [
        [Complex64::new(x, 0.0), Complex64::new(-1.0, 0.0)],
        [Complex64::new(1.0, 0.0), o],
    ];
    let ry = [[o, 1.0 / zeta], [-zeta, Complex64::new(y, 0.0)]];
    (rx, ry)
}

fn word_matrix(w: &FreeWord, rx: &Mat2c, ry: &Mat2c) -> Mat2c {
    let mut acc = mat_identity();
    for &(g, e) in w.syllables() {
        let base = match g {
            FreeGen::X => rx,
            FreeGen::Y => ry,
        };
        let m = if e >= 0 {
            *base
        } else {
            mat_inv_unimodular(base)
        };
        for _ in 0..e.unsigned_abs() {
            acc = mat_mul(&acc, &m);
        }
    }
    acc
}

/// Numeric trace of `ρ(w)` through the explicit representation; the
/// imaginary part vanishes (within 1e−9) for real characters.
pub fn numeric_trace(w: &FreeWord, c: &Character) -> Complex64 {
    let (rx, ry) = representation(c);
    let m = word_matrix(w, &rx, &ry);
    m[0][0] + m[1][1]
}

/// Same oracle built on the conjugate root; traces are root-choice
/// independent.
pub fn numeric_trace_other_root(w: &FreeWord, c: &Character) -> Complex64 {
    let [x, y, z] = c.to_f64_triple();
    let zeta = zeta_root(z);
    let (rx, ry) = representation_with_zeta(x, y, 1.0 / zeta);
    let m = word_matrix(w, &rx, &ry);
    m[0][0] + m[1][1]
}

/// The reducible character `(ξ + ξ⁻¹, η + η⁻¹, ξη + (ξη)⁻¹)`; κ of the
/// result is exactly 2.
pub fn reducible_param(xi: &Scalar, eta: &Scalar) -> Result<Character, TraceError> {
    if xi.is_zero() || eta.is_zero() {
        return Err(TraceError::ZeroParameter);
    }
    match (xi, eta) {
        (Scalar::Exact(a), Scalar::Exact(b)) => {
            let inv = |r: &BigRational| BigRational::one() / r;
            let prod = a * b;
            Ok(Character::from_rationals([
                a + inv(a),
                b + inv(b),
                &prod + inv(&prod),
            ]))
        }
        (Scalar::Float(a), Scalar::Float(b)) => Ok(Character::from_f64s(
            a + 1.0 / a,
            b + 1.0 / b,
            a * b + 1.0 / (a * b),
        )),
        _ => Err(TraceError::ModeMismatch),
    }
}

/// Verifies the exact factorization of `κ − 2` on the reducible locus:
/// with `ζ = ξη`,
///
/// ```text
/// κ(ξ+ξ⁻¹, η+η⁻¹, ζ+ζ⁻¹) − 2
///   = ζ⁻² (1 − ξηζ)(1 − ξ⁻¹ηζ)(1 − ξη⁻¹ζ)(1 − ξηζ⁻¹)
/// ```
pub fn factorization_check(
    xi: &BigRational,
    eta: &BigRational,
    zeta: &BigRational,
) -> Result<bool, TraceError> {
    if xi.is_zero() || eta.is_zero() || zeta.is_zero() {
        return Err(TraceError::ZeroParameter);
    }
    if &(xi * eta) != zeta {
        return Err(TraceError::NotAProduct);
    }
    let one = BigRational::one();
    let inv = |r: &BigRational| &one / r;
    let c = reducible_param(&Scalar::Exact(xi.clone()), &Scalar::Exact(eta.clone()))?;
    let lhs = match c.kappa() {
        Scalar::Exact(k) => k - BigRational::from_integer(BigInt::from(2)),
        _ => unreachable!(),
    };
    let rhs = inv(&(zeta * zeta))
        * (&one - xi * eta * zeta)
        * (&one - inv(xi) * eta * zeta)
        * (&one - xi * inv(eta) * zeta)
        * (&one - xi * eta * inv(zeta));
    Ok(lhs == rhs)
}

/// Composition of the reducible parametrization with `exp(2πi·)`: maps a
/// pair of angles to a point of the closure of the compact reducible piece.
pub fn torus_cover(angles: (f64, f64)) -> Character {
    let (a, b) = angles;
    let tau = std::f64::consts::TAU;
    Character::from_f64s(
        2.0 * (tau * a).cos(),
        2.0 * (tau * b).cos(),
        2.0 * (tau * (a + b)).cos(),
    )
}

/// Linear angle action intertwined with the character action through
/// [`torus_cover`], for the three generators carrying homology
/// `[[1,1],[0,1]]`, `[[1,0],[1,1]]` and `[[0,1],[1,0]]`.
///
/// The matrix is the inverse transpose of the generator's homology matrix
/// (eigenvalue exponents transform contravariantly to homology):
/// `TauX ↦ [[1,0],[−1,1]]`, `TauY ↦ [[1,−1],[0,1]]`, `P12 ↦ [[0,1],[1,0]]`.
/// The overall sign ambiguity is absorbed by the deck transformation
/// `(ξ,η) ↦ (ξ⁻¹,η⁻¹)`.
pub fn angle_action(g: GeneratorId) -> Option<[[i64; 2]; 2]> {
    match g {
        GeneratorId::TauX => Some([[1, 0], [-1, 1]]),
        GeneratorId::TauY => Some([[1, -1], [0, 1]]),
        GeneratorId::P12 => Some([[0, 1], [1, 0]]),
        _ => None,
    }
}

/// Random freely reduced word with total letter count at most
/// `max_total_len`; used by the property suites.
pub fn random_word(rng: &mut impl rand::Rng, max_total_len: u64) -> FreeWord {
    let mut sylls = Vec::new();
    let mut len = 0u64;
    let mut gen = if rng.gen_bool(0.5) {
        FreeGen::X
    } else {
        FreeGen::Y
    };
    while len < max_total_len {
        let cap = (max_total_len - len).min(3);
        let e_abs = rng.gen_range(1..=cap) as i64;
        let e = if rng.gen_bool(0.5) { e_abs } else { -e_abs };
        sylls.push((gen, e));
        len += e_abs as u64;
        gen = gen.other();
        if rng.gen_bool(0.2) {
            break;
        }
    }
    FreeWord::new(sylls)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::gl2z_torus_action;
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn base_cases() {
        assert_eq!(trace_polynomial(&FreeWord::x()), TracePolynomial::var(0));
        assert_eq!(trace_polynomial(&FreeWord::y()), TracePolynomial::var(1));
        assert_eq!(trace_polynomial(&FreeWord::xy()), TracePolynomial::var(2));
        assert_eq!(
            trace_polynomial(&FreeWord::empty()),
            TracePolynomial::constant(2)
        );
    }

    #[test]
    fn commutator_is_kappa() {
        assert_eq!(
            trace_polynomial(&FreeWord::commutator()),
            TracePolynomial::kappa()
        );
    }

    #[test]
    fn small_identities() {
        // Y X⁻¹ has trace xy − z.
        let w: FreeWord = "Y X^-1".parse().unwrap();
        let p = trace_polynomial(&w);
        let expect = TracePolynomial::var(0)
            .mul(&TracePolynomial::var(1))
            .sub(&TracePolynomial::var(2));
        assert_eq!(p, expect);

        // X² has trace x² − 2.
        let w: FreeWord = "X^2".parse().unwrap();
        let p = trace_polynomial(&w);
        let expect = TracePolynomial::var(0)
            .mul(&TracePolynomial::var(0))
            .sub(&TracePolynomial::constant(2));
        assert_eq!(p, expect);

        // X²Y: tr(X · XY) = x·tr(XY) − tr(X⁻¹ X Y) = xz − y.
        let w: FreeWord = "X^2 Y".parse().unwrap();
        let p = trace_polynomial(&w);
        let expect = TracePolynomial::var(0)
            .mul(&TracePolynomial::var(2))
            .sub(&TracePolynomial::var(1));
        assert_eq!(p, expect);
    }

    #[test]
    fn oracle_examples() {
        let c = Character::from_f64s(0.7, -1.3, 1.9);
        let t = numeric_trace(&FreeWord::xy(), &c);
        assert!((t.re - 1.9).abs() < 1e-12 && t.im.abs() < 1e-12);

        let origin = Character::from_ints(0, 0, 0);
        let k = numeric_trace(&FreeWord::commutator(), &origin);
        assert!((k.re + 2.0).abs() < 1e-12 && k.im.abs() < 1e-12);

        let w: FreeWord = "X^3 Y^-2 X Y".parse().unwrap();
        let p = trace_polynomial(&w);
        let c = Character::from_f64s(1.3, -0.8, 2.4);
        let numeric = numeric_trace(&w, &c);
        let poly = p.eval_f64(c.to_f64_triple());
        assert!((numeric.re - poly).abs() <= 1e-9 * (1.0 + numeric.norm()));
        assert!(numeric.im.abs() <= 1e-9 * (1.0 + numeric.norm()));
    }

    #[test]
    fn oracle_matches_polynomials_on_random_words() {
        let mut rng = ChaCha8Rng::seed_from_u64(19);
        let calc = TraceCalculator::new();
        for _ in 0..60 {
            let w = random_word(&mut rng, 10);
            let p = calc.trace_polynomial(&w);
            for _ in 0..4 {
                let c = Character::from_f64s(
                    rng.gen_range(-3.0..3.0),
                    rng.gen_range(-3.0..3.0),
                    rng.gen_range(-3.0..3.0),
                );
                let numeric = numeric_trace(&w, &c);
                let poly = p.eval_f64(c.to_f64_triple());
                let tol = 1e-9 * (1.0 + numeric.norm());
                assert!(
                    (numeric.re - poly).abs() <= tol && numeric.im.abs() <= tol,
                    "word {} at {}: {} vs {}",
                    w,
                    c,
                    numeric,
                    poly
                );
            }
        }
    }

    #[test]
    fn invariance_under_inverse_rotation_and_order() {
        let mut rng = ChaCha8Rng::seed_from_u64(29);
        let left = TraceCalculator::with_order(ReductionOrder::LeftmostHighest);
        let right = TraceCalculator::with_order(ReductionOrder::RightmostHighest);
        for _ in 0..40 {
            let w = random_word(&mut rng, 9);
            let p = left.trace_polynomial(&w);
            assert_eq!(p, left.trace_polynomial(&w.inverse()), "inverse of {}", w);
            let k = rng.gen_range(0..w.syllables().len().max(1));
            assert_eq!(p, left.trace_polynomial(&w.rotated(k)), "rotation of {}", w);
            assert_eq!(p, right.trace_polynomial(&w), "pivot order on {}", w);
        }
    }

    #[test]
    fn root_choice_independence() {
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        for _ in 0..30 {
            let w = random_word(&mut rng, 8);
            let c = Character::from_f64s(
                rng.gen_range(-3.0..3.0),
                rng.gen_range(-3.0..3.0),
                rng.gen_range(-3.0..3.0),
            );
            let a = numeric_trace(&w, &c);
            let b = numeric_trace_other_root(&w, &c);
            assert!((a - b).norm() < 1e-8, "word {} at {}", w, c);
        }
    }

    #[test]
    fn memo_is_shareable_across_threads() {
        let calc = TraceCalculator::new();
        let w: FreeWord = "X^3 Y^-2 X Y".parse().unwrap();
        let expect = calc.trace_polynomial(&w);
        std::thread::scope(|s| {
            for t in 0..4u64 {
                let calc = &calc;
                s.spawn(move || {
                    let mut rng = ChaCha8Rng::seed_from_u64(37 + t);
                    for _ in 0..20 {
                        let w = random_word(&mut rng, 8);
                        let _ = calc.trace_polynomial(&w);
                    }
                });
            }
        });
        assert_eq!(calc.trace_polynomial(&w), expect);
    }

    #[test]
    fn reducible_param_examples() {
        let one = Scalar::from_int(1);
        assert_eq!(
            reducible_param(&one, &one).unwrap(),
            Character::from_ints(2, 2, 2)
        );
        assert_eq!(
            reducible_param(&Scalar::from_int(-1), &one).unwrap(),
            Character::from_ints(-2, 2, -2)
        );
        let c = reducible_param(&Scalar::from_int(2), &Scalar::from_int(3)).unwrap();
        assert_eq!(
            c,
            Character::from_rationals([rat(5, 2), rat(10, 3), rat(37, 6)])
        );
        assert_eq!(c.kappa(), Scalar::from_int(2));
        assert!(reducible_param(&Scalar::from_int(0), &one).is_err());
    }

    #[test]
    fn deck_transformation_invariance() {
        let mut rng = ChaCha8Rng::seed_from_u64(41);
        for _ in 0..50 {
            let sign = if rng.gen_bool(0.5) { 1 } else { -1 };
            let xi = rat(sign * rng.gen_range(1..30), rng.gen_range(1..10));
            let eta = rat(rng.gen_range(1..30), rng.gen_range(1..10));
            let inv = |r: &BigRational| BigRational::one() / r;
            let a = reducible_param(&Scalar::Exact(xi.clone()), &Scalar::Exact(eta.clone()));
            let b = reducible_param(&Scalar::Exact(inv(&xi)), &Scalar::Exact(inv(&eta)));
            assert_eq!(a.unwrap(), b.unwrap());
        }
    }

    #[test]
    fn factorization_examples() {
        let one = rat(1, 1);
        assert!(factorization_check(&one, &one, &one).unwrap());
        assert!(factorization_check(&rat(2, 1), &rat(3, 1), &rat(6, 1)).unwrap());
        assert!(factorization_check(&rat(-2, 1), &rat(1, 2), &rat(-1, 1)).unwrap());
        assert!(factorization_check(&rat(2, 1), &rat(3, 1), &rat(5, 1)).is_err());
    }

    #[test]
    fn torus_cover_branch_points() {
        assert_eq!(torus_cover((0.0, 0.0)), Character::from_f64s(2.0, 2.0, 2.0));
        let c = torus_cover((0.5, 0.5)).to_f64_triple();
        assert!((c[0] + 2.0).abs() < 1e-12);
        assert!((c[1] + 2.0).abs() < 1e-12);
        assert!((c[2] - 2.0).abs() < 1e-12);
        let c = torus_cover((0.25, 0.25)).to_f64_triple();
        assert!(c[0].abs() < 1e-12 && c[1].abs() < 1e-12 && (c[2] + 2.0).abs() < 1e-12);
    }

    #[test]
    fn torus_cover_intertwines_angle_actions() {
        let mut rng = ChaCha8Rng::seed_from_u64(43);
        for g in [GeneratorId::TauX, GeneratorId::TauY, GeneratorId::P12] {
            let m = angle_action(g).unwrap();
            for _ in 0..100 {
                let angles = (rng.gen_range(0.0..1.0), rng.gen_range(0.0..1.0));
                let lhs = g.apply(&torus_cover(angles)).to_f64_triple();
                let rhs = torus_cover(gl2z_torus_action(m, angles).unwrap()).to_f64_triple();
                for i in 0..3 {
                    assert!(
                        (lhs[i] - rhs[i]).abs() < 1e-9,
                        "{:?} angles {:?}: {:?} vs {:?}",
                        g,
                        angles,
                        lhs,
                        rhs
                    );
                }
            }
        }
    }
}

#[cfg(test)]
mod prop_tests {
    use super::*;
    use proptest::prelude::*;

    fn arb_word() -> impl Strategy<Value = FreeWord> {
        proptest::collection::vec((proptest::bool::ANY, -3i64..=3), 0..6).prop_map(|sylls| {
            FreeWord::new(
                sylls
                    .into_iter()
                    .map(|(g, e)| (if g { FreeGen::X } else { FreeGen::Y }, e)),
            )
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn display_parse_round_trip(w in arb_word()) {
            let back: FreeWord = w.to_string().parse().unwrap();
            prop_assert_eq!(back, w);
        }

        #[test]
        fn trace_invariant_under_inverse(w in arb_word()) {
            let calc = TraceCalculator::new();
            prop_assert_eq!(calc.trace_polynomial(&w), calc.trace_polynomial(&w.inverse()));
        }

        #[test]
        fn double_inverse_is_identity(w in arb_word()) {
            prop_assert_eq!(w.inverse().inverse(), w);
        }
    }
}
