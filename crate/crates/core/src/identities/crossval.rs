//! Compares an identity's arguments with the cross ratios a feasible pair
//! produces.
//!
//! Both sides are normalized to `Σ w·L(x) = C·π²`: a right-hand term
//! `w·L(y)` becomes `w·L(1 − y)` on the left with `C` raised by `w/6`, and
//! every `L(1)` is folded into `C`. The geometric multiset must then equal
//! the arithmetic one scaled by `C_geo / C_arith`. Only arguments above the
//! cutoff are compared, the cutoff being the largest final argument of any
//! truncated family or series, so both prefixes are complete there.

use std::cmp::Ordering;
use std::collections::HashMap;

use rug::Rational;

use super::{Identity, IdentityError};
use crate::exact::QuadNum;
use crate::geometry::{enumerate_terms, FeasiblePair};

const SORT_BITS: u32 = 192;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CrossCheck {
    /// Distinct arguments above the cutoff that were compared.
    pub compared: usize,
    /// `C_geo / C_arith`.
    pub scale: Rational,
    pub cutoff: QuadNum,
}

#[derive(Default)]
struct Side {
    weights: HashMap<QuadNum, Rational>,
    pi_sq: Rational,
    cutoff: Option<QuadNum>,
}

fn cmp(x: &QuadNum, y: &QuadNum) -> Ordering {
    x.try_cmp(y).unwrap_or_else(|_| {
        x.to_real(SORT_BITS)
            .partial_cmp(&y.to_real(SORT_BITS))
            .expect("finite reals compare")
    })
}

impl Side {
    fn add(&mut self, arg: QuadNum, weight: Rational) {
        if arg == QuadNum::one() {
            self.pi_sq -= weight / 6u32;
            return;
        }
        let entry = self.weights.entry(arg).or_default();
        *entry += weight;
    }

    fn add_family(&mut self, args: &[QuadNum], weight: &Rational) {
        for a in args {
            self.add(a.clone(), weight.clone());
        }
        if let Some(last) = args.last() {
            self.raise_cutoff(last);
        }
    }

    fn raise_cutoff(&mut self, x: &QuadNum) {
        if self.cutoff.as_ref().map_or(true, |c| cmp(x, c) == Ordering::Greater) {
            self.cutoff = Some(x.clone());
        }
    }

    fn weight(&self, x: &QuadNum) -> Rational {
        self.weights.get(x).cloned().unwrap_or_default()
    }
}

fn arithmetic_side(identity: &Identity, prefix: usize) -> Result<Side, IdentityError> {
    let mut side = Side {
        pi_sq: identity.rhs.pi_sq.clone(),
        ..Side::default()
    };
    for (w, y) in &identity.rhs.rogers {
        side.pi_sq += w.clone() / 6u32;
        side.add(QuadNum::one() - y, w.clone());
    }
    for f in &identity.finite {
        side.add(f.arg.clone(), f.weight.clone());
    }
    for s in &identity.series {
        let args = s
            .args(prefix)?
            .into_iter()
            .map(|a| {
                a.as_exact().cloned().ok_or_else(|| IdentityError::NotExact {
                    series: s.label.clone(),
                })
            })
            .collect::<Result<Vec<_>, _>>()?;
        side.add_family(&args, &s.weight);
    }
    Ok(side)
}

/// Checks `identity` against the cross ratios of `pair`, read with the
/// identity's own model kind, using `prefix` terms of every family.
pub fn cross_validate(identity: &Identity, pair: &FeasiblePair, prefix: usize) -> Result<CrossCheck, IdentityError> {
    let kind = identity
        .model
        .as_ref()
        .ok_or_else(|| IdentityError::NoModel(identity.id.clone()))?
        .kind;
    let arith = arithmetic_side(identity, prefix)?;
    let en = enumerate_terms(pair, kind, prefix)?;
    let mut geo = Side {
        pi_sq: en.total_pi_sq.clone(),
        ..Side::default()
    };
    for x in &en.finite {
        geo.add(x.clone(), Rational::from(1));
    }
    for fam in &en.families {
        geo.add_family(&fam.args, &Rational::from(1));
    }

    if arith.pi_sq == 0 {
        return Err(IdentityError::CrossMismatch {
            index: 0,
            argument: "pi^2".into(),
            geometric: geo.pi_sq.to_string(),
            arithmetic: "0".into(),
        });
    }
    let scale = Rational::from(&geo.pi_sq / &arith.pi_sq);
    let cutoff = match (arith.cutoff.clone(), geo.cutoff.clone()) {
        (Some(a), Some(g)) => {
            if cmp(&a, &g) == Ordering::Greater {
                a
            } else {
                g
            }
        }
        (Some(x), None) | (None, Some(x)) => x,
        (None, None) => QuadNum::zero(),
    };

    let mut keys: Vec<&QuadNum> = arith
        .weights
        .keys()
        .chain(geo.weights.keys())
        .filter(|x| cmp(x, &cutoff) == Ordering::Greater)
        .collect();
    keys.sort_by(|x, y| cmp(y, x));
    keys.dedup();
    let mut compared = 0;
    for (index, x) in keys.iter().enumerate() {
        let g = geo.weight(x);
        let a = Rational::from(&arith.weight(x) * &scale);
        if g != a {
            return Err(IdentityError::CrossMismatch {
                index,
                argument: x.to_string(),
                geometric: g.to_string(),
                arithmetic: a.to_string(),
            });
        }
        if g != 0 {
            compared += 1;
        }
    }
    Ok(CrossCheck {
        compared,
        scale,
        cutoff,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::identities::{catalog, instantiate};

    fn check(id: &str, params: &[(&str, &str)], prefix: usize) -> CrossCheck {
        let params: Vec<(String, String)> = params.iter().map(|(k, v)| (k.to_string(), v.to_string())).collect();
        let identity = instantiate(id, &params).unwrap();
        identity.cross_validate(prefix).unwrap_or_else(|e| panic!("{id}: {e}"))
    }

    #[test]
    fn double_crown_fibonacci_is_twice_arithmetic() {
        let c = check("eq-4.7", &[], 20);
        assert_eq!(c.scale, 2);
        assert!(c.compared >= 10, "{c:?}");
    }

    #[test]
    fn basel_matches_translation_orbit() {
        let c = check("eq-13.3", &[], 50);
        assert_eq!(c.scale, 1);
        assert!(c.compared >= 40, "{c:?}");
    }

    #[test]
    fn rational_parabolic_matches() {
        let c = check("eq-13.5", &[("p", "2"), ("q", "5")], 40);
        assert!(c.compared >= 30, "{c:?}");
    }

    #[test]
    fn periodic_fraction_arguments_match_their_polygon() {
        let c = check("thm-15.3", &[("cf", "1,2,3")], 30);
        assert!(c.compared >= 20, "{c:?}");
    }

    #[test]
    fn every_modelled_entry_cross_validates() {
        for t in catalog() {
            let identity = t.instantiate(&[]).unwrap();
            if identity.model.is_none() {
                continue;
            }
            let c = identity.cross_validate(16).unwrap_or_else(|e| panic!("{}: {e}", t.id));
            assert!(c.compared > 0, "{}: {c:?}", t.id);
        }
    }

    #[test]
    fn perturbed_argument_is_reported() {
        let mut identity = instantiate("eq-5.8a", &[]).unwrap();
        let original = identity.series[0].clone();
        identity.series[0] =
            crate::identities::Series::exact("perturbed", 2, crate::identities::Decay::Geometric, move |k| {
                let x = original.arg(k)?.as_exact().cloned().expect("exact");
                Ok(if k == 3 { x * QuadNum::ratio(1, 2) } else { x })
            });
        assert!(matches!(
            identity.cross_validate(20),
            Err(IdentityError::CrossMismatch { .. })
        ));
    }

    #[test]
    fn unmodelled_entry_is_refused() {
        let identity = instantiate("eq-12.3", &[]).unwrap();
        assert!(matches!(identity.cross_validate(10), Err(IdentityError::NoModel(_))));
    }
}
