//! Mori-dream-space verdicts over surface descriptors.
//!
//! The engine only propagates established equivalences; semiampleness itself
//! is never computed. Whenever no rule applies, the verdict is `Unknown` and
//! carries the unresolved criterion: a fake quadric without negative curves
//! is a Mori dream surface exactly when both extremal nef classes are
//! semiample, equivalently when it admits a finite morphism onto the smooth
//! quadric.

use serde::{Deserialize, Serialize};

use crate::lattice::{
    cone_from_negatives, is_negative_curve_class, pair, self_intersection, ConePair,
    DivisorClass, IntersectionForm,
};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ParityClass {
    Even,
    Odd,
    Unknown,
}

/// Facts known about a fake quadric, the input to [`evaluate`].
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SurfaceDescriptor {
    pub parity: ParityClass,
    /// 0 for the complex numbers, otherwise a prime.
    pub characteristic: u64,
    #[serde(default)]
    pub is_isogenous_product: bool,
    #[serde(default)]
    pub is_shavel_type: bool,
    /// For reductions of a Shavel-type surface: the characteristic is inert
    /// in the real quadratic center field of the defining quaternion algebra.
    #[serde(default)]
    pub p_inert_in_center_field: bool,
    #[serde(default)]
    pub known_negative_curves: Vec<DivisorClass>,
    #[serde(default)]
    pub known_fibration_classes: Vec<DivisorClass>,
}

impl SurfaceDescriptor {
    /// Descriptor of a complex surface isogenous to a product with the two
    /// natural fibrations populated.
    pub fn isogenous_product(parity: ParityClass) -> Self {
        let fibrations = match parity {
            ParityClass::Even => vec![DivisorClass::new(1, 0), DivisorClass::new(0, 1)],
            ParityClass::Odd => vec![DivisorClass::new(1, 1), DivisorClass::new(2, -2)],
            ParityClass::Unknown => Vec::new(),
        };
        SurfaceDescriptor {
            parity,
            characteristic: 0,
            is_isogenous_product: true,
            is_shavel_type: false,
            p_inert_in_center_field: false,
            known_negative_curves: Vec::new(),
            known_fibration_classes: fibrations,
        }
    }

    pub fn shavel(characteristic: u64, p_inert: bool) -> Self {
        SurfaceDescriptor {
            parity: ParityClass::Even,
            characteristic,
            is_isogenous_product: false,
            is_shavel_type: true,
            p_inert_in_center_field: p_inert,
            known_negative_curves: Vec::new(),
            known_fibration_classes: Vec::new(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum MdsStatus {
    #[serde(rename = "mds")]
    Mds,
    #[serde(rename = "not-mds")]
    NotMds,
    #[serde(rename = "unknown")]
    Unknown,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RuleCitation {
    pub id: &'static str,
    pub statement: &'static str,
}

const R1: RuleCitation = RuleCitation {
    id: "R1",
    statement: "a complex surface isogenous to a product of curves has finitely generated \
                Cox ring, hence is a Mori dream surface",
};
const R2: RuleCitation = RuleCitation {
    id: "R2",
    statement: "on a Shavel-type surface no multiple of either cotangent summand ray moves, \
                so the nef boundary is not semiample and the surface is not a Mori dream \
                surface",
};
const R3: RuleCitation = RuleCitation {
    id: "R3",
    statement: "in positive characteristic two irreducible negative curves span a rational \
                polyhedral effective cone whose dual nef rays restrict semiamply to their \
                exceptional rational curves, so the surface is a Mori dream space",
};
const R4: RuleCitation = RuleCitation {
    id: "R4",
    statement: "at a prime inert in the quadratic center field, both foliation-dual classes \
                of a Shavel-type reduction become effective, producing the two negative \
                curves required by the positive-characteristic criterion",
};
const R5: RuleCitation = RuleCitation {
    id: "R5",
    statement: "with no negative curves, two independent fibre classes make both extremal \
                nef classes semiample and combine to a finite morphism onto the smooth \
                quadric, so the surface is a Mori dream surface",
};
const R6: RuleCitation = RuleCitation {
    id: "R6",
    statement: "no decision rule applies; Mori-dreamness is equivalent to semiampleness of \
                the extremal nef classes, which the known data do not determine",
};

pub const UNKNOWN_CRITERION: &str =
    "Mori dream if and only if both extremal nef classes (L1 and L2 on the even form, \
     Q1+Q2 and Q1-Q2 on the odd form) are semiample, equivalently the surface admits a \
     finite morphism onto P1 x P1";

/// A Mori-dream verdict with its rule trace.
#[derive(Debug, Clone, Serialize)]
pub struct Verdict {
    pub status: MdsStatus,
    pub rules_fired: Vec<RuleCitation>,
    pub cones: Option<ConePair>,
    /// Unresolved criterion text accompanying `Unknown`.
    pub criterion: Option<String>,
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

fn form_of(parity: ParityClass) -> Option<IntersectionForm> {
    match parity {
        ParityClass::Even => Some(IntersectionForm::Even),
        ParityClass::Odd => Some(IntersectionForm::Odd),
        ParityClass::Unknown => None,
    }
}

fn validate(desc: &SurfaceDescriptor) -> Result<Option<IntersectionForm>> {
    if desc.characteristic != 0 && !is_prime(desc.characteristic) {
        return Err(Error::InconsistentDescriptor(format!(
            "characteristic {} is neither 0 nor prime",
            desc.characteristic
        )));
    }
    let form = form_of(desc.parity);
    if desc.known_negative_curves.len() > 2 {
        return Err(Error::InconsistentDescriptor(
            "more than two negative curves".into(),
        ));
    }
    if !desc.known_negative_curves.is_empty() {
        let Some(form) = form else {
            return Err(Error::InconsistentDescriptor(
                "negative curves given without a declared parity".into(),
            ));
        };
        let char_zero = desc.characteristic == 0;
        for &c in &desc.known_negative_curves {
            if !is_negative_curve_class(form, c, char_zero) {
                return Err(Error::InconsistentDescriptor(format!(
                    "{c} is not a valid negative-curve class here"
                )));
            }
        }
        // Same-quadrant pairs are rejected by the cone construction.
        cone_from_negatives(form, &desc.known_negative_curves)
            .map_err(|e| Error::InconsistentDescriptor(e.to_string()))?;
    }
    if !desc.known_fibration_classes.is_empty() {
        let Some(form) = form else {
            return Err(Error::InconsistentDescriptor(
                "fibration classes given without a declared parity".into(),
            ));
        };
        let k = crate::lattice::canonical_class(form);
        for &f in &desc.known_fibration_classes {
            if self_intersection(form, f) != 0 || pair(form, k, f) <= 0 {
                return Err(Error::InconsistentDescriptor(format!(
                    "{f} is not a fibre class: needs F^2 = 0 and K.F > 0"
                )));
            }
        }
    }
    Ok(form)
}

/// Renders the verdict; the first matching rule wins.
///
/// R1: characteristic 0, isogenous to a product — Mori dream.
/// R2: characteristic 0, Shavel type — not a Mori dream surface.
/// R3: characteristic p with two known negative curves — Mori dream, cones
///     attached.
/// R4: characteristic p, Shavel type, p inert in the center field — Mori
///     dream via the two effective foliation-dual classes.
/// R5: characteristic 0, no negative curves, two independent fibre classes —
///     Mori dream.
/// R6: otherwise unknown, carrying the semiampleness criterion.
pub fn evaluate(desc: &SurfaceDescriptor) -> Result<Verdict> {
    let form = validate(desc)?;
    let char_zero = desc.characteristic == 0;

    if char_zero && desc.is_isogenous_product {
        return Ok(Verdict {
            status: MdsStatus::Mds,
            rules_fired: vec![R1],
            cones: None,
            criterion: None,
        });
    }
    if char_zero && desc.is_shavel_type {
        return Ok(Verdict {
            status: MdsStatus::NotMds,
            rules_fired: vec![R2],
            cones: None,
            criterion: None,
        });
    }
    if !char_zero && desc.known_negative_curves.len() == 2 {
        let form = form.expect("validated: negatives imply a declared parity");
        let cones = cone_from_negatives(form, &desc.known_negative_curves)?;
        return Ok(Verdict {
            status: MdsStatus::Mds,
            rules_fired: vec![R3],
            cones: Some(cones),
            criterion: None,
        });
    }
    if !char_zero && desc.is_shavel_type && desc.p_inert_in_center_field {
        return Ok(Verdict {
            status: MdsStatus::Mds,
            rules_fired: vec![R4, R3],
            cones: None,
            criterion: None,
        });
    }
    if char_zero
        && desc.known_negative_curves.is_empty()
        && has_two_independent(&desc.known_fibration_classes)
    {
        let cones = form.map(|f| cone_from_negatives(f, &[])).transpose()?;
        return Ok(Verdict {
            status: MdsStatus::Mds,
            rules_fired: vec![R5],
            cones,
            criterion: None,
        });
    }

    let cones = match form {
        Some(f) => Some(cone_from_negatives(f, &desc.known_negative_curves)?),
        None => None,
    };
    Ok(Verdict {
        status: MdsStatus::Unknown,
        rules_fired: vec![R6],
        cones,
        criterion: Some(UNKNOWN_CRITERION.to_string()),
    })
}

fn has_two_independent(classes: &[DivisorClass]) -> bool {
    for (i, x) in classes.iter().enumerate() {
        for y in &classes[i + 1..] {
            if x.a * y.b - x.b * y.a != 0 {
                return true;
            }
        }
    }
    false
}

/// The possible numerical classes of the summands of a split cotangent
/// bundle on an even fake quadric: `A_1 A_2 = c_2 = 4` with `A_1 + A_2 = K`
/// reduces to `(a-1)(b-1) = -1`, whose integer solutions give exactly
/// `{2L1, 2L2}` in either order.
pub fn cotangent_splitting_solutions() -> Vec<(DivisorClass, DivisorClass)> {
    // a - 1 = 1, b - 1 = -1 or a - 1 = -1, b - 1 = 1.
    let first = DivisorClass::new(2, 0);
    let second = DivisorClass::new(0, 2);
    vec![(first, second), (second, first)]
}

/// Whether an odd prime `p` not dividing `d` is inert in `Q(sqrt(d))` for a
/// squarefree `d > 1`: exactly when `d` is a quadratic non-residue mod `p`.
pub fn is_inert(p: u64, d: u64) -> Result<bool> {
    if !is_prime(p) || p == 2 {
        return Err(Error::InconsistentDescriptor(format!(
            "inertness check needs an odd prime, got {p}"
        )));
    }
    if d % p == 0 {
        return Ok(false); // ramified
    }
    // Euler's criterion.
    let e = (p - 1) / 2;
    let mut base = d % p;
    let mut exp = e;
    let mut acc = 1u64;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % p;
        }
        base = base * base % p;
        exp >>= 1;
    }
    Ok(acc == p - 1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::canonical_class;

    fn c(a: i64, b: i64) -> DivisorClass {
        DivisorClass::new(a, b)
    }

    #[test]
    fn shavel_char_zero_is_not_mds() {
        let verdict = evaluate(&SurfaceDescriptor::shavel(0, false)).unwrap();
        assert_eq!(verdict.status, MdsStatus::NotMds);
        assert_eq!(verdict.rules_fired, vec![R2]);
    }

    #[test]
    fn isogenous_product_char_zero_is_mds() {
        let verdict = evaluate(&SurfaceDescriptor::isogenous_product(ParityClass::Even)).unwrap();
        assert_eq!(verdict.status, MdsStatus::Mds);
        assert_eq!(verdict.rules_fired[0].id, "R1");
    }

    #[test]
    fn two_negatives_in_char_p_is_mds_with_cones() {
        let desc = SurfaceDescriptor {
            parity: ParityClass::Even,
            characteristic: 5,
            is_isogenous_product: false,
            is_shavel_type: false,
            p_inert_in_center_field: false,
            known_negative_curves: vec![c(2, -1), c(-1, 2)],
            known_fibration_classes: vec![],
        };
        let verdict = evaluate(&desc).unwrap();
        assert_eq!(verdict.status, MdsStatus::Mds);
        assert_eq!(verdict.rules_fired, vec![R3]);
        let cones = verdict.cones.unwrap();
        assert_eq!(cones.nef.rays(), vec![c(1, 2), c(2, 1)]);
        assert_eq!(cones.eff.rays(), vec![c(-1, 2), c(2, -1)]);
    }

    #[test]
    fn shavel_at_inert_prime_is_mds() {
        let verdict = evaluate(&SurfaceDescriptor::shavel(3, true)).unwrap();
        assert_eq!(verdict.status, MdsStatus::Mds);
        let ids: Vec<_> = verdict.rules_fired.iter().map(|r| r.id).collect();
        assert_eq!(ids, vec!["R4", "R3"]);
    }

    #[test]
    fn shavel_at_non_inert_prime_is_unknown() {
        let verdict = evaluate(&SurfaceDescriptor::shavel(5, false)).unwrap();
        assert_eq!(verdict.status, MdsStatus::Unknown);
        assert!(verdict.criterion.as_deref() == Some(UNKNOWN_CRITERION));
    }

    #[test]
    fn two_fibrations_char_zero_is_mds() {
        let desc = SurfaceDescriptor {
            parity: ParityClass::Even,
            characteristic: 0,
            is_isogenous_product: false,
            is_shavel_type: false,
            p_inert_in_center_field: false,
            known_negative_curves: vec![],
            known_fibration_classes: vec![c(1, 0), c(0, 1)],
        };
        let verdict = evaluate(&desc).unwrap();
        assert_eq!(verdict.status, MdsStatus::Mds);
        assert_eq!(verdict.rules_fired, vec![R5]);
    }

    #[test]
    fn bare_even_fake_quadric_is_unknown() {
        let desc = SurfaceDescriptor {
            parity: ParityClass::Even,
            characteristic: 0,
            is_isogenous_product: false,
            is_shavel_type: false,
            p_inert_in_center_field: false,
            known_negative_curves: vec![],
            known_fibration_classes: vec![],
        };
        let verdict = evaluate(&desc).unwrap();
        assert_eq!(verdict.status, MdsStatus::Unknown);
        assert_eq!(verdict.rules_fired, vec![R6]);
        assert!(verdict.criterion.as_deref().unwrap().contains("semiample"));
    }

    #[test]
    fn inconsistent_descriptors_are_rejected() {
        let mut desc = SurfaceDescriptor::shavel(4, false);
        assert!(evaluate(&desc).is_err()); // 4 is not prime
        desc = SurfaceDescriptor::shavel(5, false);
        desc.known_negative_curves = vec![c(2, -1), c(3, -1)];
        assert!(evaluate(&desc).is_err()); // same quadrant
        desc.known_negative_curves = vec![c(1, -1)];
        assert!(evaluate(&desc).is_err()); // orthogonal to K, not a valid class
        let mut unknown = SurfaceDescriptor::shavel(5, false);
        unknown.parity = ParityClass::Unknown;
        unknown.known_negative_curves = vec![c(2, -1)];
        assert!(evaluate(&unknown).is_err()); // classes without a form
    }

    #[test]
    fn cotangent_splitting() {
        let sols = cotangent_splitting_solutions();
        assert_eq!(sols.len(), 2);
        assert!(sols.contains(&(c(2, 0), c(0, 2))));
        let k = canonical_class(IntersectionForm::Even);
        for (a1, a2) in &sols {
            assert_eq!(c(a1.a + a2.a, a1.b + a2.b), k);
            assert_eq!(pair(IntersectionForm::Even, *a1, *a2), 4);
        }
        // Exhaustive check of (a-1)(b-1) = -1 over a generous box.
        let mut found = Vec::new();
        for a in -10..=10i64 {
            for b in -10..=10i64 {
                if (a - 1) * (b - 1) == -1 {
                    found.push((c(a, b), c(2 - a, 2 - b)));
                }
            }
        }
        found.sort();
        let mut sols_sorted = sols.clone();
        sols_sorted.sort();
        assert_eq!(found, sols_sorted);
    }

    #[test]
    fn inertness_helper() {
        // In Q(sqrt(2)): 3 and 5 are inert, 7 splits (7 = (3+sqrt2)(3-sqrt2)).
        assert!(is_inert(3, 2).unwrap());
        assert!(is_inert(5, 2).unwrap());
        assert!(!is_inert(7, 2).unwrap());
        // In Q(sqrt(5)): 2 is special-cased out, 3 is inert, 11 splits.
        assert!(is_inert(3, 5).unwrap());
        assert!(!is_inert(11, 5).unwrap());
        assert!(is_inert(4, 5).is_err());
    }
}
