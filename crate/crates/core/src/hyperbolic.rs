//! Upper half-plane isometries and the geometric verifiers used on the
//! hyperbolic side: commutator-trace closed forms, the crossing-axes
//! predicate, embedded quadrilaterals from elliptic commutators, and
//! right-angled hexagons for three-holed-sphere characters.
//!
//! Geodesics are handled through their spacelike normals in the hyperboloid
//! model: a boundary point `p ∈ R ∪ {∞}` lifts to the null ray
//! `(p²−1, −2p, p²+1)`, a geodesic's normal is the Minkowski cross product
//! of its endpoint lifts, crossing/asymptotic/ultraparallel is decided by
//! `|⟨v₁,v₂⟩|` against 1, and the common perpendicular of an ultraparallel
//! pair is the cross product of their normals.  Segment intersection tests
//! run in the Klein disk (straight chords) after a Cayley transform.

use crate::char_space::Character;
use num_complex::Complex64;
use std::fmt;

pub const DET_TOL: f64 = 1e-12;
/// Tolerance for the asymptotic (tangent) case of the axes predicate.
pub const ASYMPTOTIC_TOL: f64 = 1e-9;
/// Tolerance for segment intersection tests in the Klein disk.
pub const SEGMENT_TOL: f64 = 1e-10;

#[derive(Debug, Clone, thiserror::Error, PartialEq)]
pub enum HyperbolicError {
    #[error("matrix determinant {0} is not 1 within 1e-12")]
    NotUnimodular(f64),
    #[error("isometry is not hyperbolic (|trace| = {0})")]
    NotHyperbolic(f64),
    #[error("commutator is not elliptic (trace {0})")]
    NotElliptic(f64),
    #[error("points must be pairwise distinct")]
    CoincidentPoints,
    #[error("point {0} + {1}i is not in the upper half-plane")]
    NotInHalfPlane(f64, f64),
    #[error("character {0} is not in the open octant below -2")]
    NotInOctant(String),
    #[error("|z| = {0} < 2: no real lift exists")]
    NoRealLift(f64),
    #[error("axes are not ultraparallel (|<v1,v2>| = {0})")]
    NotUltraparallel(f64),
    #[error("geodesic endpoints coincide")]
    DegenerateGeodesic,
}

/// A point of the upper half-plane.
#[derive(Copy, Clone, Debug, PartialEq)]
pub struct HPoint(Complex64);

impl HPoint {
    pub fn new(x: f64, y: f64) -> Result<HPoint, HyperbolicError> {
        if y <= 0.0 || !y.is_finite() || !x.is_finite() {
            return Err(HyperbolicError::NotInHalfPlane(x, y));
        }
        Ok(HPoint(Complex64::new(x, y)))
    }

    pub fn coords(&self) -> Complex64 {
        self.0
    }

    /// Cayley transform into the Poincaré disk.
    pub fn to_disk(&self) -> Complex64 {
        let i = Complex64::new(0.0, 1.0);
        (self.0 - i) / (self.0 + i)
    }

    /// Klein-disk coordinates, where geodesics are straight chords.
    pub fn to_klein(&self) -> [f64; 2] {
        let w = self.to_disk();
        let s = 2.0 / (1.0 + w.norm_sqr());
        [s * w.re, s * w.im]
    }

    /// Lift to the hyperboloid `Q(X) = −1`.
    pub fn to_hyperboloid(&self) -> [f64; 3] {
        let w = self.to_disk();
        let d = 1.0 - w.norm_sqr();
        [2.0 * w.re / d, 2.0 * w.im / d, (1.0 + w.norm_sqr()) / d]
    }

    pub fn dist(&self, other: &HPoint) -> f64 {
        // cosh d = -<X1, X2> on the hyperboloid.
        let a = self.to_hyperboloid();
        let b = other.to_hyperboloid();
        (-minkowski_dot(a, b)).max(1.0).acosh()
    }
}

impl fmt::Display for HPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} + {}i", self.0.re, self.0.im)
    }
}

/// A boundary point of the half-plane model.
#[derive(Copy, Clone, Debug, PartialEq)]
pub enum BoundaryPoint {
    Finite(f64),
    Infinity,
}

impl BoundaryPoint {
    fn null_lift(&self) -> [f64; 3] {
        match self {
            BoundaryPoint::Finite(p) => [p * p - 1.0, -2.0 * p, p * p + 1.0],
            BoundaryPoint::Infinity => [1.0, 0.0, 1.0],
        }
    }

    pub fn approx_eq(&self, other: &BoundaryPoint, tol: f64) -> bool {
        match (self, other) {
            (BoundaryPoint::Finite(a), BoundaryPoint::Finite(b)) => (a - b).abs() <= tol,
            (BoundaryPoint::Infinity, BoundaryPoint::Infinity) => true,
            _ => false,
        }
    }
}

impl fmt::Display for BoundaryPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BoundaryPoint::Finite(p) => write!(f, "{}", p),
            BoundaryPoint::Infinity => write!(f, "inf"),
        }
    }
}

fn minkowski_dot(a: [f64; 3], b: [f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] - a[2] * b[2]
}

fn minkowski_cross(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        -(a[0] * b[1] - a[1] * b[0]),
    ]
}

/// A complete geodesic, stored by its two boundary endpoints.
#[derive(Copy, Clone, Debug, PartialEq)]
pub struct Geodesic {
    pub a: BoundaryPoint,
    pub b: BoundaryPoint,
}

impl Geodesic {
    pub fn new(a: BoundaryPoint, b: BoundaryPoint) -> Result<Geodesic, HyperbolicError> {
        if a.approx_eq(&b, 0.0) {
            return Err(HyperbolicError::DegenerateGeodesic);
        }
        Ok(Geodesic { a, b })
    }

    /// Unit spacelike Minkowski normal (defined up to sign).
    pub fn normal(&self) -> [f64; 3] {
        let v = minkowski_cross(self.a.null_lift(), self.b.null_lift());
        let q = minkowski_dot(v, v);
        debug_assert!(q > 0.0, "geodesic normal must be spacelike");
        let s = q.sqrt();
        [v[0] / s, v[1] / s, v[2] / s]
    }

    /// Reconstructs a geodesic from a spacelike normal.
    pub fn from_normal(v: [f64; 3]) -> Result<Geodesic, HyperbolicError> {
        let q = minkowski_dot(v, v);
        if q <= 0.0 {
            return Err(HyperbolicError::DegenerateGeodesic);
        }
        let s = q.sqrt();
        let v = [v[0] / s, v[1] / s, v[2] / s];
        let denom = v[0] - v[2];
        if denom.abs() < 1e-14 {
            // One endpoint at infinity.
            if v[1].abs() < 1e-14 {
                return Err(HyperbolicError::DegenerateGeodesic);
            }
            let p = -(v[0] + v[2]) / (2.0 * v[1]);
            Geodesic::new(BoundaryPoint::Finite(p), BoundaryPoint::Infinity)
        } else {
            let p1 = (v[1] + 1.0) / denom;
            let p2 = (v[1] - 1.0) / denom;
            Geodesic::new(BoundaryPoint::Finite(p1), BoundaryPoint::Finite(p2))
        }
    }

    /// `|⟨v₁,v₂⟩|`: < 1 crossing, = 1 asymptotic, > 1 ultraparallel.
    pub fn pairing(&self, other: &Geodesic) -> f64 {
        minkowski_dot(self.normal(), other.normal()).abs()
    }

    /// Angle at the intersection, for crossing geodesics.
    pub fn angle_with(&self, other: &Geodesic) -> f64 {
        self.pairing(other).clamp(0.0, 1.0).acos()
    }

    /// The common perpendicular of two ultraparallel geodesics.
    pub fn common_perpendicular(&self, other: &Geodesic) -> Result<Geodesic, HyperbolicError> {
        let p = self.pairing(other);
        if p <= 1.0 + ASYMPTOTIC_TOL {
            return Err(HyperbolicError::NotUltraparallel(p));
        }
        Geodesic::from_normal(minkowski_cross(self.normal(), other.normal()))
    }

    pub fn signed_dist(&self, p: &HPoint) -> f64 {
        minkowski_dot(self.normal(), p.to_hyperboloid())
    }
}

/// Mutual position of two axes.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum AxesRelation {
    Crossing,
    Asymptotic,
    Ultraparallel,
}

/// A real unimodular 2×2 matrix acting on the upper half-plane.
#[derive(Copy, Clone, Debug, PartialEq)]
pub struct Isometry {
    m: [[f64; 2]; 2],
}

/// Conjugacy type by trace.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum IsoClass {
    Elliptic,
    Parabolic,
    Hyperbolic,
    Central,
}

impl Isometry {
    pub fn new(m: [[f64; 2]; 2]) -> Result<Isometry, HyperbolicError> {
        let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
        if (det - 1.0).abs() > DET_TOL {
            return Err(HyperbolicError::NotUnimodular(det));
        }
        Ok(Isometry { m })
    }

    pub fn identity() -> Isometry {
        Isometry {
            m: [[1.0, 0.0], [0.0, 1.0]],
        }
    }

    /// Rotation by angle θ about `i`.
    pub fn rotation(theta: f64) -> Isometry {
        let (s, c) = theta.sin_cos();
        Isometry { m: [[c, -s], [s, c]] }
    }

    pub fn diagonal(lambda: f64) -> Isometry {
        Isometry {
            m: [[lambda, 0.0], [0.0, 1.0 / lambda]],
        }
    }

    pub fn unipotent(s: f64) -> Isometry {
        Isometry { m: [[1.0, s], [0.0, 1.0]] }
    }

    /// Hyperbolic element with axis endpoints ±1:
    /// `[[cosh θ, sinh θ], [sinh θ, cosh θ]]`.
    pub fn translation_pm1(theta: f64) -> Isometry {
        let (s, c) = (theta.sinh(), theta.cosh());
        Isometry { m: [[c, s], [s, c]] }
    }

    /// Hyperbolic element with fixed points `r` and ∞:
    /// `[[e^φ, −2r sinh φ], [0, e^{−φ}]]`.
    pub fn upper_with_fixed(r: f64, phi: f64) -> Isometry {
        Isometry {
            m: [[phi.exp(), -2.0 * r * phi.sinh()], [0.0, (-phi).exp()]],
        }
    }

    pub fn matrix(&self) -> [[f64; 2]; 2] {
        self.m
    }

    pub fn trace(&self) -> f64 {
        self.m[0][0] + self.m[1][1]
    }

    pub fn mul(&self, rhs: &Isometry) -> Isometry {
        let a = &self.m;
        let b = &rhs.m;
        Isometry {
            m: [
                [
                    a[0][0] * b[0][0] + a[0][1] * b[1][0],
                    a[0][0] * b[0][1] + a[0][1] * b[1][1],
                ],
                [
                    a[1][0] * b[0][0] + a[1][1] * b[1][0],
                    a[1][0] * b[0][1] + a[1][1] * b[1][1],
                ],
            ],
        }
    }

    pub fn inverse(&self) -> Isometry {
        let a = &self.m;
        Isometry {
            m: [[a[1][1], -a[0][1]], [-a[1][0], a[0][0]]],
        }
    }

    pub fn class(&self) -> IsoClass {
        let central = (self.m[0][1].abs() <= DET_TOL && self.m[1][0].abs() <= DET_TOL)
            && (self.m[0][0] - self.m[1][1]).abs() <= DET_TOL;
        if central && (self.trace().abs() - 2.0).abs() <= DET_TOL {
            return IsoClass::Central;
        }
        let t = self.trace().abs();
        if t < 2.0 {
            IsoClass::Elliptic
        } else if t > 2.0 {
            IsoClass::Hyperbolic
        } else {
            IsoClass::Parabolic
        }
    }

    /// Möbius action on the half-plane.
    pub fn apply(&self, p: &HPoint) -> HPoint {
        let z = p.coords();
        let a = self.m;
        let num = Complex64::new(a[0][0], 0.0) * z + a[0][1];
        let den = Complex64::new(a[1][0], 0.0) * z + a[1][1];
        let w = num / den;
        HPoint(w)
    }

    /// Möbius action on the boundary circle.
    pub fn apply_boundary(&self, p: &BoundaryPoint) -> BoundaryPoint {
        let a = self.m;
        match p {
            BoundaryPoint::Finite(x) => {
                let den = a[1][0] * x + a[1][1];
                if den.abs() < 1e-300 {
                    BoundaryPoint::Infinity
                } else {
                    BoundaryPoint::Finite((a[0][0] * x + a[0][1]) / den)
                }
            }
            BoundaryPoint::Infinity => {
                if a[1][0].abs() < 1e-300 {
                    BoundaryPoint::Infinity
                } else {
                    BoundaryPoint::Finite(a[0][0] / a[1][0])
                }
            }
        }
    }

    /// Boundary fixed points of a hyperbolic element.
    pub fn fixed_boundary_points(&self) -> Result<(BoundaryPoint, BoundaryPoint), HyperbolicError> {
        if self.class() != IsoClass::Hyperbolic {
            return Err(HyperbolicError::NotHyperbolic(self.trace()));
        }
        let [[a, b], [c, d]] = self.m;
        if c.abs() < 1e-300 {
            return Ok((
                BoundaryPoint::Infinity,
                BoundaryPoint::Finite(b / (d - a)),
            ));
        }
        let disc = (self.trace() * self.trace() - 4.0).sqrt();
        Ok((
            BoundaryPoint::Finite(((a - d) + disc) / (2.0 * c)),
            BoundaryPoint::Finite(((a - d) - disc) / (2.0 * c)),
        ))
    }

    /// Invariant axis of a hyperbolic element.
    pub fn axis(&self) -> Result<Geodesic, HyperbolicError> {
        let (p, q) = self.fixed_boundary_points()?;
        Geodesic::new(p, q)
    }

    /// Fixed point in the half-plane of an elliptic element.
    pub fn elliptic_fixed_point(&self) -> Result<HPoint, HyperbolicError> {
        if self.class() != IsoClass::Elliptic {
            return Err(HyperbolicError::NotElliptic(self.trace()));
        }
        let [[a, _b], [c, d]] = self.m;
        // c = 0 forces |trace| >= 2 over the reals, so c != 0 here.
        let disc = (4.0 - self.trace() * self.trace()).sqrt();
        let re = (a - d) / (2.0 * c);
        let im = disc / (2.0 * c.abs());
        HPoint::new(re, im)
    }
}

/// `tr(aba⁻¹b⁻¹)`.
pub fn commutator_trace(a: &Isometry, b: &Isometry) -> f64 {
    a.mul(b).mul(&a.inverse()).mul(&b.inverse()).trace()
}

/// Relation of the invariant axes of two hyperbolic elements.
pub fn axes_relation(a: &Isometry, b: &Isometry) -> Result<AxesRelation, HyperbolicError> {
    let ga = a.axis()?;
    let gb = b.axis()?;
    let p = ga.pairing(&gb);
    if (p - 1.0).abs() <= ASYMPTOTIC_TOL {
        Ok(AxesRelation::Asymptotic)
    } else if p < 1.0 {
        Ok(AxesRelation::Crossing)
    } else {
        Ok(AxesRelation::Ultraparallel)
    }
}

/// Whether the endpoint pairs separate each other on the boundary circle;
/// asymptotic (shared-endpoint) configurations count as not crossing.
pub fn axes_cross(a: &Isometry, b: &Isometry) -> Result<bool, HyperbolicError> {
    Ok(axes_relation(a, b)? == AxesRelation::Crossing)
}

/// The four quadrilateral vertices attached to a pair with elliptic
/// commutator: with `p` the commutator's fixed point,
/// `p₄ = p, p₃ = b⁻¹p, p₂ = a⁻¹b⁻¹p, p₁ = b a⁻¹ b⁻¹ p`.
pub fn quad_vertices(a: &Isometry, b: &Isometry) -> Result<[HPoint; 4], HyperbolicError> {
    let gamma = a.mul(b).mul(&a.inverse()).mul(&b.inverse());
    if gamma.class() != IsoClass::Elliptic {
        return Err(HyperbolicError::NotElliptic(gamma.trace()));
    }
    let p4 = gamma.elliptic_fixed_point()?;
    let p3 = b.inverse().apply(&p4);
    let p2 = a.inverse().apply(&p3);
    let p1 = b.apply(&p2);
    Ok([p1, p2, p3, p4])
}

#[derive(Copy, Clone, Debug, PartialEq)]
enum SegRelation {
    Disjoint,
    Touch,
    Overlap,
}

fn cross2(a: [f64; 2], b: [f64; 2]) -> f64 {
    a[0] * b[1] - a[1] * b[0]
}

fn sub2(a: [f64; 2], b: [f64; 2]) -> [f64; 2] {
    [a[0] - b[0], a[1] - b[1]]
}

fn dot2(a: [f64; 2], b: [f64; 2]) -> f64 {
    a[0] * b[0] + a[1] * b[1]
}

/// Classifies closed-segment intersection in the plane with an absolute
/// tolerance on normalized orientation values.
fn segments_classify(p1: [f64; 2], p2: [f64; 2], q1: [f64; 2], q2: [f64; 2]) -> SegRelation {
    let r = sub2(p2, p1);
    let s = sub2(q2, q1);
    let lr = dot2(r, r).sqrt().max(1e-300);
    let ls = dot2(s, s).sqrt().max(1e-300);
    let denom = cross2(r, s) / (lr * ls);
    let qp = sub2(q1, p1);
    let col_q1 = cross2(r, qp) / (lr * ls.max(1e-300));
    if denom.abs() <= SEGMENT_TOL {
        if col_q1.abs() > SEGMENT_TOL {
            return SegRelation::Disjoint;
        }
        // Collinear: compare parameter intervals along r.
        let t0 = dot2(qp, r) / (lr * lr);
        let t1 = dot2(sub2(q2, p1), r) / (lr * lr);
        let (lo, hi) = if t0 <= t1 { (t0, t1) } else { (t1, t0) };
        let eps = SEGMENT_TOL;
        if hi < -eps || lo > 1.0 + eps {
            return SegRelation::Disjoint;
        }
        let inter_lo = lo.max(0.0);
        let inter_hi = hi.min(1.0);
        if inter_hi - inter_lo <= eps {
            return SegRelation::Touch;
        }
        return SegRelation::Overlap;
    }
    let denom_raw = cross2(r, s);
    let t = cross2(qp, s) / denom_raw;
    let u = cross2(qp, r) / denom_raw;
    let eps_t = SEGMENT_TOL;
    if (-eps_t..=1.0 + eps_t).contains(&t) && (-eps_t..=1.0 + eps_t).contains(&u) {
        let interior =
            t > eps_t && t < 1.0 - eps_t && u > eps_t && u < 1.0 - eps_t;
        if interior {
            SegRelation::Overlap // proper crossing through both interiors
        } else {
            SegRelation::Touch
        }
    } else {
        SegRelation::Disjoint
    }
}

/// Whether the closed quadrilateral path `p1 p2 p3 p4` is embedded: the
/// four geodesic segments meet only at shared endpoints (straight angles
/// allowed).
pub fn is_embedded_quadrilateral(points: &[HPoint; 4]) -> Result<bool, HyperbolicError> {
    for i in 0..4 {
        for j in (i + 1)..4 {
            if (points[i].coords() - points[j].coords()).norm() < 1e-12 {
                return Err(HyperbolicError::CoincidentPoints);
            }
        }
    }
    let k: Vec<[f64; 2]> = points.iter().map(|p| p.to_klein()).collect();
    // Opposite sides must be disjoint.
    if segments_classify(k[0], k[1], k[2], k[3]) != SegRelation::Disjoint {
        return Ok(false);
    }
    if segments_classify(k[1], k[2], k[3], k[0]) != SegRelation::Disjoint {
        return Ok(false);
    }
    // Adjacent sides share a vertex; any overlap beyond it is a fold-back.
    for i in 0..4 {
        let j = (i + 1) % 4;
        let l = (i + 2) % 4;
        if segments_classify(k[i], k[j], k[j], k[l]) == SegRelation::Overlap {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Degeneracy measure of four points: the smallest over triples of the
/// absolute triple product on the hyperboloid; near zero means collinear.
pub fn collinearity_defect(points: &[HPoint; 4]) -> f64 {
    let lifts: Vec<[f64; 3]> = points.iter().map(|p| p.to_hyperboloid()).collect();
    let mut best = f64::INFINITY;
    for i in 0..4 {
        for j in (i + 1)..4 {
            for k in (j + 1)..4 {
                let d = minkowski_dot(minkowski_cross(lifts[i], lifts[j]), lifts[k]);
                best = best.min(d.abs());
            }
        }
    }
    best
}

/// Whether all four points lie on one geodesic (within tolerance).
pub fn points_collinear(points: &[HPoint; 4], tol: f64) -> bool {
    let lifts: Vec<[f64; 3]> = points.iter().map(|p| p.to_hyperboloid()).collect();
    for i in 0..4 {
        for j in (i + 1)..4 {
            for k in (j + 1)..4 {
                let d = minkowski_dot(minkowski_cross(lifts[i], lifts[j]), lifts[k]);
                if d.abs() > tol {
                    return false;
                }
            }
        }
    }
    true
}

/// Real matrices with `tr = x`, `tr = y` and `tr(product) = z`, available
/// when `|z| ≥ 2`.
pub fn lift_character(c: &Character) -> Result<(Isometry, Isometry), HyperbolicError> {
    let [x, y, z] = c.to_f64_triple();
    if z.abs() < 2.0 {
        return Err(HyperbolicError::NoRealLift(z.abs()));
    }
    let zeta = 0.5 * (z + z.signum() * (z * z - 4.0).sqrt());
    let rx = Isometry::new([[x, -1.0], [1.0, 0.0]])?;
    let ry = Isometry::new([[0.0, 1.0 / zeta], [-zeta, y]])?;
    Ok((rx, ry))
}

/// A right-angled hexagon: the three axes of `ρ(X), ρ(Y), ρ(XY)`
/// alternating with their three common perpendiculars, plus the deviation
/// of each corner angle from π/2 as recomputed from the side endpoints.
#[derive(Clone, Debug)]
pub struct PantsHexagon {
    pub sides: [Geodesic; 6],
    pub right_angle_residuals: [f64; 6],
}

pub fn pants_hexagon(c: &Character) -> Result<PantsHexagon, HyperbolicError> {
    let [x, y, z] = c.to_f64_triple();
    if !(x < -2.0 && y < -2.0 && z < -2.0) {
        return Err(HyperbolicError::NotInOctant(format!("({}, {}, {})", x, y, z)));
    }
    let (rx, ry) = lift_character(c)?;
    let rxy = rx.mul(&ry);
    let ax = rx.axis()?;
    let ay = ry.axis()?;
    let axy = rxy.axis()?;
    let p_xy = ax.common_perpendicular(&ay)?;
    let p_yxy = ay.common_perpendicular(&axy)?;
    let p_xyx = axy.common_perpendicular(&ax)?;
    let sides = [ax, p_xy, ay, p_yxy, axy, p_xyx];
    let mut residuals = [0.0; 6];
    for i in 0..6 {
        let j = (i + 1) % 6;
        // Rebuild from endpoints so the residual is measured on the
        // returned data, not on the construction intermediates.
        let a = Geodesic::new(sides[i].a, sides[i].b)?;
        let b = Geodesic::new(sides[j].a, sides[j].b)?;
        residuals[i] = (a.angle_with(&b) - std::f64::consts::FRAC_PI_2).abs();
    }
    Ok(PantsHexagon {
        sides,
        right_angle_residuals: residuals,
    })
}
