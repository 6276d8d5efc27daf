//! Exact arithmetic on the rank-2 numerical lattice of a Q-homology quadric.
//!
//! Two unimodular forms occur: the even (hyperbolic) form with Gram matrix
//! `[[0,1],[1,0]]` in a basis `(L1, L2)` of isotropic classes, and the odd
//! form `diag(1,-1)` in a basis `(Q1, Q2)`. Classes are kept in these bases
//! throughout; no basis change is exposed.

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum IntersectionForm {
    Even,
    Odd,
}

impl IntersectionForm {
    pub fn matrix(self) -> [[i64; 2]; 2] {
        match self {
            IntersectionForm::Even => [[0, 1], [1, 0]],
            IntersectionForm::Odd => [[1, 0], [0, -1]],
        }
    }
}

/// An integral divisor class `a * e1 + b * e2` in the declared basis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct DivisorClass {
    pub a: i64,
    pub b: i64,
}

impl DivisorClass {
    pub const fn new(a: i64, b: i64) -> Self {
        DivisorClass { a, b }
    }

    pub fn is_zero(self) -> bool {
        self.a == 0 && self.b == 0
    }

    /// Divides out the gcd of the coordinates, keeping the direction.
    pub fn primitive(self) -> Self {
        let g = gcd(self.a.unsigned_abs(), self.b.unsigned_abs()) as i64;
        if g <= 1 {
            self
        } else {
            DivisorClass::new(self.a / g, self.b / g)
        }
    }
}

impl std::fmt::Display for DivisorClass {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({},{})", self.a, self.b)
    }
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// The bilinear intersection number `x . y`.
pub fn pair(form: IntersectionForm, x: DivisorClass, y: DivisorClass) -> i64 {
    match form {
        IntersectionForm::Even => x.a * y.b + x.b * y.a,
        IntersectionForm::Odd => x.a * y.a - x.b * y.b,
    }
}

pub fn self_intersection(form: IntersectionForm, x: DivisorClass) -> i64 {
    pair(form, x, x)
}

/// The canonical class: `2L1 + 2L2` on the even form, `3Q1 - Q2` on the odd
/// form. In both cases `K^2 = 8`.
pub fn canonical_class(form: IntersectionForm) -> DivisorClass {
    match form {
        IntersectionForm::Even => DivisorClass::new(2, 2),
        IntersectionForm::Odd => DivisorClass::new(3, -1),
    }
}

/// Arithmetic genus from adjunction: `2 p_a - 2 = C^2 + K.C`.
pub fn arithmetic_genus(form: IntersectionForm, c: DivisorClass) -> Result<i64> {
    let t = self_intersection(form, c) + pair(form, canonical_class(form), c);
    if t % 2 != 0 {
        return Err(Error::ParityViolation(format!(
            "C^2 + K.C = {t} is odd for C = {c}"
        )));
    }
    Ok(1 + t / 2)
}

/// Riemann-Roch with `chi(O) = 1`: `chi(D) = 1 + (D^2 - K.D)/2`.
pub fn rr_chi(form: IntersectionForm, d: DivisorClass) -> Result<i64> {
    let t = self_intersection(form, d) - pair(form, canonical_class(form), d);
    if t % 2 != 0 {
        return Err(Error::ParityViolation(format!(
            "D^2 - K.D = {t} is odd for D = {d}"
        )));
    }
    Ok(1 + t / 2)
}

/// Whether `D` lies in `2 Num(S)`; applied to the canonical class this
/// decides the parity of the form.
pub fn is_two_divisible(_form: IntersectionForm, d: DivisorClass) -> bool {
    d.a % 2 == 0 && d.b % 2 == 0
}

/// Whether `c` satisfies the constraints of an irreducible negative curve:
/// `C^2 < 0`, `K.C > 0`, `p_a >= 0`, and additionally `p_a >= 1` over the
/// complex numbers (no smooth rational curves there).
pub fn is_negative_curve_class(form: IntersectionForm, c: DivisorClass, char_zero: bool) -> bool {
    if self_intersection(form, c) >= 0 || pair(form, canonical_class(form), c) <= 0 {
        return false;
    }
    match arithmetic_genus(form, c) {
        Ok(pa) => pa >= if char_zero { 1 } else { 0 },
        Err(_) => false,
    }
}

/// All negative-curve candidate classes with coordinates bounded by `bound`,
/// sorted lexicographically.
///
/// Over the complex numbers (no rational curves, `p_a >= 1`) the odd form
/// forces `C = a Q1 + (a+1) Q2` with `p_a = a + 1`, and the even form has no
/// candidates at all. Dropping that restriction to `p_a >= 0`, as is
/// appropriate in characteristic p, adds the rational families
/// `a L1 - L2` / `-L1 + b L2` with `a, b >= 2` on the even form and
/// `a Q1 + (a+2) Q2` (`a >= 0`), `a Q1 - (a+1) Q2` (`a >= 1`) on the odd
/// form.
pub fn negative_curve_candidates(
    form: IntersectionForm,
    bound: i64,
    char_zero: bool,
) -> Vec<DivisorClass> {
    assert!(bound >= 1);
    let mut out = Vec::new();
    match form {
        IntersectionForm::Odd => {
            for a in 0..=bound.saturating_sub(1) {
                out.push(DivisorClass::new(a, a + 1));
            }
            if !char_zero {
                for a in 0..=bound.saturating_sub(2) {
                    out.push(DivisorClass::new(a, a + 2));
                }
                for a in 1..=bound.saturating_sub(1) {
                    out.push(DivisorClass::new(a, -(a + 1)));
                }
            }
        }
        IntersectionForm::Even => {
            if !char_zero {
                for a in 2..=bound {
                    out.push(DivisorClass::new(-1, a));
                    out.push(DivisorClass::new(a, -1));
                }
            }
        }
    }
    out.sort();
    out
}

/// Fibre classes `F` with `F^2 = 0`, `K.F > 0`, lying in the effective
/// quadrant closure, with coordinates bounded by `bound`; paired with the
/// fibre genus `g = 1 + K.F / 2`.
///
/// Even form: the rays `a L1` and `a L2`, `a >= 1`. Odd form: `a (Q1 + Q2)`
/// with `a >= 1` and genus `2a + 1`, and `a (Q1 - Q2)` with genus `a + 1`,
/// the latter only for `a >= 2`.
pub fn fibration_candidates(form: IntersectionForm, bound: i64) -> Vec<(DivisorClass, u64)> {
    assert!(bound >= 1);
    let k = canonical_class(form);
    let genus = |f: DivisorClass| -> u64 { (1 + pair(form, k, f) / 2) as u64 };
    let mut out = Vec::new();
    match form {
        IntersectionForm::Even => {
            for a in 1..=bound {
                out.push((DivisorClass::new(a, 0), genus(DivisorClass::new(a, 0))));
            }
            for a in 1..=bound {
                out.push((DivisorClass::new(0, a), genus(DivisorClass::new(0, a))));
            }
        }
        IntersectionForm::Odd => {
            for a in 1..=bound {
                out.push((DivisorClass::new(a, a), genus(DivisorClass::new(a, a))));
            }
            for a in 2..=bound {
                out.push((DivisorClass::new(a, -a), genus(DivisorClass::new(a, -a))));
            }
        }
    }
    out
}

/// A rational polyhedral cone in `Num(S) x R` spanned by one or two primitive
/// integral rays.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Cone2 {
    pub ray1: DivisorClass,
    pub ray2: Option<DivisorClass>,
}

impl Cone2 {
    pub fn span(r1: DivisorClass, r2: DivisorClass) -> Self {
        let (a, b) = if r1 <= r2 { (r1, r2) } else { (r2, r1) };
        Cone2 {
            ray1: a,
            ray2: Some(b),
        }
    }

    pub fn rays(&self) -> Vec<DivisorClass> {
        match self.ray2 {
            Some(r2) => vec![self.ray1, r2],
            None => vec![self.ray1],
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConePair {
    pub nef: Cone2,
    pub eff: Cone2,
}

/// Boundary rays of the cone of classes that are nef and effective when no
/// negative curve exists: the quadrant `{a L1 + b L2 : a, b >= 0}` on the
/// even form, and its analogue spanned by `Q1 + Q2`, `Q1 - Q2` on the odd
/// form.
pub fn quadrant_rays(form: IntersectionForm) -> (DivisorClass, DivisorClass) {
    match form {
        IntersectionForm::Even => (DivisorClass::new(1, 0), DivisorClass::new(0, 1)),
        IntersectionForm::Odd => (DivisorClass::new(1, 1), DivisorClass::new(1, -1)),
    }
}

/// Nef and closed effective cones determined by the known negative curves.
///
/// With no negatives both cones are the quadrant. Each negative class
/// replaces the quadrant ray it lies beyond on the effective side; the nef
/// cone is the dual of the effective cone under the form, with rays made
/// primitive.
pub fn cone_from_negatives(
    form: IntersectionForm,
    negatives: &[DivisorClass],
) -> Result<ConePair> {
    for &c in negatives {
        if !is_negative_curve_class(form, c, false) {
            return Err(Error::InvalidNegativeCurves(format!(
                "{c} is not a valid negative-curve class for the {form:?} form"
            )));
        }
    }
    let (q1, q2) = quadrant_rays(form);
    let eff = match negatives {
        [] => Cone2::span(q1, q2),
        [c] => {
            let c = c.primitive();
            // Coordinates of c in the quadrant ray basis; the ray with the
            // positive coefficient is the one c lies beyond.
            let d = det(q1, q2);
            let alpha = det(c, q2) * d.signum();
            let beta = det(q1, c) * d.signum();
            if alpha > 0 && beta < 0 {
                Cone2::span(c, q2)
            } else if alpha < 0 && beta > 0 {
                Cone2::span(q1, c)
            } else {
                return Err(Error::InvalidNegativeCurves(format!(
                    "{c} does not lie beyond a single quadrant ray"
                )));
            }
        }
        [c1, c2] => {
            let (c1, c2) = (c1.primitive(), c2.primitive());
            if same_open_quadrant(form, c1, c2) {
                return Err(Error::InvalidNegativeCurves(format!(
                    "{c1} and {c2} lie in the same quadrant"
                )));
            }
            Cone2::span(c1, c2)
        }
        _ => {
            return Err(Error::InvalidNegativeCurves(format!(
                "at most two negative curves are possible, got {}",
                negatives.len()
            )));
        }
    };
    let (e1, e2) = (eff.ray1, eff.ray2.expect("effective cone is full"));
    let nef = Cone2::span(dual_ray(form, e1, e2), dual_ray(form, e2, e1));
    Ok(ConePair { nef, eff })
}

fn det(x: DivisorClass, y: DivisorClass) -> i64 {
    x.a * y.b - x.b * y.a
}

/// Two classes lie in the same open quadrant (relative to the effective
/// quadrant rays) when their coordinates in that ray basis have identical
/// sign patterns with mixed signs.
fn same_open_quadrant(form: IntersectionForm, c1: DivisorClass, c2: DivisorClass) -> bool {
    let (q1, q2) = quadrant_rays(form);
    let d = det(q1, q2).signum();
    let co = |c: DivisorClass| (det(c, q2) * d, det(q1, c) * d);
    let (a1, b1) = co(c1);
    let (a2, b2) = co(c2);
    a1.signum() == a2.signum() && b1.signum() == b2.signum()
}

/// The primitive ray orthogonal to `e` under the form, signed to pair
/// non-negatively with `other`.
pub fn dual_ray(form: IntersectionForm, e: DivisorClass, other: DivisorClass) -> DivisorClass {
    let m = form.matrix();
    let u = (m[0][0] * e.a + m[0][1] * e.b, m[1][0] * e.a + m[1][1] * e.b);
    let candidate = DivisorClass::new(-u.1, u.0).primitive();
    debug_assert_eq!(pair(form, candidate, e), 0);
    let s = pair(form, candidate, other);
    assert!(s != 0, "dual ray is orthogonal to both cone rays");
    if s > 0 {
        candidate
    } else {
        DivisorClass::new(-candidate.a, -candidate.b)
    }
}
