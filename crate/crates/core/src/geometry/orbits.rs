//! Feasible pairs and the per-model orbit representatives.
//!
//! A feasible pair is a Möbius map `T` together with an ideal polygon `P`
//! whose sides `T` pairs up so that `P` is a fundamental domain for a
//! cylinder. The cross ratios of orbit representatives of its boundary
//! geodesics are the arguments of one infinite dilogarithm identity.

use std::cmp::Ordering;
use std::fmt;

use rug::{Integer, Rational};

use super::{geodesic_cross_ratio, rhs_constant, Geodesic, GeometryError, Mobius, SurfaceDescriptor};
use crate::contfrac::PeriodicCF;
use crate::exact::{BoundaryPoint, QuadNum};

/// How a [`FeasiblePair`] was built; each model accepts one shape.
#[derive(Clone, Debug)]
pub enum PairShape {
    /// `z ↦ t − 1/z` on the quadrilateral `{1, t−1, t, ∞}`.
    TraceMap {
        t: QuadNum,
    },
    /// `[[a, c], [b, d]]` in `SL(2, Z)` on `{0, c/d, a/b, ∞}`.
    SlTwo {
        a: Integer,
        b: Integer,
        c: Integer,
        d: Integer,
    },
    /// `z ↦ t − 1/z` on `{2/t, t/2, t, ∞}`.
    HalfTrace {
        t: QuadNum,
    },
    /// `z ↦ z + 1` on `{0 = v_1 < … < v_{n-1} = 1, ∞}`.
    Translation,
    /// Period matrix of an even-period continued fraction on the polygon
    /// spanned by its convergents.
    PeriodicFraction(PeriodicCF),
    Custom,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ModelKind {
    DoubleCrownI,
    CrownI,
    DoubleCrownII,
    CrownII,
    ThirdPair,
    Parabolic,
    EvenPeriodCf,
}

impl ModelKind {
    pub const ALL: [ModelKind; 7] = [
        ModelKind::DoubleCrownI,
        ModelKind::CrownI,
        ModelKind::DoubleCrownII,
        ModelKind::CrownII,
        ModelKind::ThirdPair,
        ModelKind::Parabolic,
        ModelKind::EvenPeriodCf,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ModelKind::DoubleCrownI => "double_crown_i",
            ModelKind::CrownI => "crown_i",
            ModelKind::DoubleCrownII => "double_crown_ii",
            ModelKind::CrownII => "crown_ii",
            ModelKind::ThirdPair => "third_pair",
            ModelKind::Parabolic => "parabolic",
            ModelKind::EvenPeriodCf => "even_period_cf",
        }
    }
}

impl fmt::Display for ModelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for ModelKind {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        ModelKind::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| format!("unknown model `{s}`"))
    }
}

#[derive(Clone, Debug)]
pub struct FeasiblePair {
    transform: Mobius,
    vertices: Vec<BoundaryPoint>,
    paired_sides: (usize, usize),
    shape: PairShape,
}

fn lt(x: &BoundaryPoint, y: &BoundaryPoint) -> Result<bool, GeometryError> {
    Ok(x.try_cmp(y)? == Ordering::Less)
}

/// `z` lies strictly inside the boundary arc running forward from `x` to `y`.
fn is_cyclic(x: &BoundaryPoint, z: &BoundaryPoint, y: &BoundaryPoint) -> Result<bool, GeometryError> {
    Ok((lt(x, z)? && lt(z, y)?) || (lt(z, y)? && lt(y, x)?) || (lt(y, x)? && lt(x, z)?))
}

impl FeasiblePair {
    /// Validates the pair: the vertices run in cyclic order, the transform
    /// carries side `paired_sides.0` onto side `paired_sides.1`, and every
    /// vertex lands in the closed boundary arc behind the target side (the
    /// open arc for vertices off the source side).
    pub fn new(
        transform: Mobius,
        vertices: Vec<BoundaryPoint>,
        paired_sides: (usize, usize),
        shape: PairShape,
    ) -> Result<Self, GeometryError> {
        let n = vertices.len();
        let bad = |msg: String| Err(GeometryError::Infeasible(msg));
        if n < 3 {
            return bad(format!("polygon has {n} vertices"));
        }
        let (s0, s1) = paired_sides;
        if s0 >= n || s1 >= n || s0 == s1 {
            return bad(format!("side indices {paired_sides:?} invalid for {n} sides"));
        }
        let mut descents = 0;
        for i in 0..n {
            match vertices[i].try_cmp(&vertices[(i + 1) % n])? {
                Ordering::Equal => return bad(format!("vertex {} repeated", vertices[i])),
                Ordering::Greater => descents += 1,
                Ordering::Less => {}
            }
        }
        if descents != 1 {
            return bad("vertices are not in cyclic order".into());
        }
        let side = |i: usize| (&vertices[i], &vertices[(i + 1) % n]);
        let (src_a, src_b) = side(s0);
        let (dst_a, dst_b) = side(s1);
        let img_a = transform.apply(src_a)?;
        let img_b = transform.apply(src_b)?;
        let maps_onto = (img_a == *dst_a && img_b == *dst_b) || (img_a == *dst_b && img_b == *dst_a);
        if !maps_onto {
            return bad(format!(
                "transform sends side [{src_a}, {src_b}] to [{img_a}, {img_b}], not [{dst_a}, {dst_b}]"
            ));
        }
        for (i, v) in vertices.iter().enumerate() {
            let img = transform.apply(v)?;
            let on_source = i == s0 || i == (s0 + 1) % n;
            if on_source {
                continue;
            }
            if !is_cyclic(dst_a, &img, dst_b)? {
                return bad(format!(
                    "vertex {v} maps to {img}, outside the arc behind [{dst_a}, {dst_b}]"
                ));
            }
        }
        Ok(FeasiblePair {
            transform,
            vertices,
            paired_sides,
            shape,
        })
    }

    /// The quadrilateral `{1, t−1, t, ∞}` with `z ↦ t − 1/z`, for `t > 2`.
    pub fn double_crown_i(t: QuadNum) -> Result<Self, GeometryError> {
        if !(t > QuadNum::from_int(2)) {
            return Err(GeometryError::Infeasible(format!("trace {t} must exceed 2")));
        }
        let one = QuadNum::one();
        let vertices = vec![
            BoundaryPoint::Finite(one.clone()),
            BoundaryPoint::Finite(&t - &one),
            BoundaryPoint::Finite(t.clone()),
            BoundaryPoint::Infinity,
        ];
        Self::new(
            Mobius::trace_map(t.clone()),
            vertices,
            (3, 1),
            PairShape::TraceMap { t },
        )
    }

    /// `{0, c/d, a/b, ∞}` with `[[a, c], [b, d]] ∈ SL(2, Z)`, positive entries
    /// and trace above 2.
    pub fn double_crown_ii(a: Integer, b: Integer, c: Integer, d: Integer) -> Result<Self, GeometryError> {
        if [&a, &b, &c, &d].iter().any(|x| **x <= 0) {
            return Err(GeometryError::Infeasible("entries must be positive".into()));
        }
        if Integer::from(&a * &d) - Integer::from(&b * &c) != 1 {
            return Err(GeometryError::Infeasible("determinant must be 1".into()));
        }
        if Integer::from(&a + &d) <= 2 {
            return Err(GeometryError::Infeasible("trace must exceed 2".into()));
        }
        let q = |x: &Integer| QuadNum::from(x.clone());
        let m = Mobius::new(q(&a), q(&c), q(&b), q(&d))?;
        let vertices = vec![
            BoundaryPoint::Finite(QuadNum::zero()),
            BoundaryPoint::Finite(q(&c) / q(&d)),
            BoundaryPoint::Finite(q(&a) / q(&b)),
            BoundaryPoint::Infinity,
        ];
        Self::new(m, vertices, (3, 1), PairShape::SlTwo { a, b, c, d })
    }

    /// `{2/t, t/2, t, ∞}` with `z ↦ t − 1/z`, for `t > 2`.
    pub fn third_pair(t: QuadNum) -> Result<Self, GeometryError> {
        if !(t > QuadNum::from_int(2)) {
            return Err(GeometryError::Infeasible(format!("trace {t} must exceed 2")));
        }
        let two = QuadNum::from_int(2);
        let vertices = vec![
            BoundaryPoint::Finite(&two / &t),
            BoundaryPoint::Finite(&t / &two),
            BoundaryPoint::Finite(t.clone()),
            BoundaryPoint::Infinity,
        ];
        Self::new(
            Mobius::trace_map(t.clone()),
            vertices,
            (3, 1),
            PairShape::HalfTrace { t },
        )
    }

    /// `{0, interior…, 1, ∞}` with the unit translation. `interior` must be
    /// strictly increasing inside `(0, 1)`.
    pub fn parabolic(interior: &[QuadNum]) -> Result<Self, GeometryError> {
        let mut vertices = vec![BoundaryPoint::Finite(QuadNum::zero())];
        vertices.extend(interior.iter().cloned().map(BoundaryPoint::Finite));
        vertices.push(BoundaryPoint::Finite(QuadNum::one()));
        vertices.push(BoundaryPoint::Infinity);
        let n = vertices.len();
        Self::new(Mobius::translation(), vertices, (n - 1, n - 2), PairShape::Translation)
    }

    /// The polygon `{0, r_0, r_2, …, r_{l-2}, r_{l-1}, …, r_3, r_1, ∞}` of
    /// an even-period fraction (odd periods are doubled) with its period
    /// matrix.
    pub fn even_period_cf(cf: &PeriodicCF) -> Result<Self, GeometryError> {
        let cf = cf.even_period();
        let l = cf.period() as i64;
        let mut vertices = vec![BoundaryPoint::Finite(QuadNum::zero())];
        for k in (0..l).step_by(2) {
            vertices.push(cf.convergent_point(k)?);
        }
        for k in (0..l / 2).rev().map(|i| 2 * i + 1) {
            vertices.push(cf.convergent_point(k)?);
        }
        vertices.push(BoundaryPoint::Infinity);
        let [[p1, p2], [q1, q2]] = cf.period_matrix();
        let m = Mobius::new(p1.into(), p2.into(), q1.into(), q2.into())?;
        let n = vertices.len();
        Self::new(m, vertices, (n - 1, (l / 2) as usize), PairShape::PeriodicFraction(cf))
    }

    pub fn transform(&self) -> &Mobius {
        &self.transform
    }

    pub fn vertices(&self) -> &[BoundaryPoint] {
        &self.vertices
    }

    pub fn paired_sides(&self) -> (usize, usize) {
        self.paired_sides
    }

    pub fn shape(&self) -> &PairShape {
        &self.shape
    }

    pub fn side(&self, i: usize) -> Result<Geodesic, GeometryError> {
        let n = self.vertices.len();
        Geodesic::new(self.vertices[i % n].clone(), self.vertices[(i + 1) % n].clone())
    }

    fn check_model(&self, model: ModelKind) -> Result<(), GeometryError> {
        let fits = matches!(
            (model, &self.shape),
            (ModelKind::DoubleCrownI | ModelKind::CrownI, PairShape::TraceMap { .. })
                | (ModelKind::DoubleCrownII | ModelKind::CrownII, PairShape::SlTwo { .. })
                | (ModelKind::ThirdPair, PairShape::HalfTrace { .. })
                | (ModelKind::Parabolic, PairShape::Translation)
                | (ModelKind::EvenPeriodCf, PairShape::PeriodicFraction(_))
        );
        if fits {
            Ok(())
        } else {
            Err(GeometryError::ModelMismatch {
                model: model.name().into(),
                reason: format!("pair was built as {:?}", shape_name(&self.shape)),
            })
        }
    }

    /// Topology of the cylinder this pair describes under `model`.
    pub fn surface(&self, model: ModelKind) -> Result<SurfaceDescriptor, GeometryError> {
        self.check_model(model)?;
        let sd = |chi: Rational, cusps: u32, enlarged: bool| SurfaceDescriptor {
            euler_characteristic: chi,
            boundary_cusps: cusps,
            enlarged,
        };
        Ok(match model {
            ModelKind::DoubleCrownI | ModelKind::DoubleCrownII | ModelKind::ThirdPair => {
                sd(Rational::from(-1), 2, false)
            }
            ModelKind::CrownI | ModelKind::CrownII => sd(Rational::from((-1, 2)), 1, false),
            ModelKind::Parabolic => {
                let n = self.vertices.len() as i64;
                sd(Rational::from((2 - n, 2)), (n - 2) as u32, true)
            }
            ModelKind::EvenPeriodCf => {
                let l = self.vertices.len() as i64 - 2;
                sd(Rational::from((-l, 4)), (l / 2) as u32, true)
            }
        })
    }
}

fn shape_name(shape: &PairShape) -> &'static str {
    match shape {
        PairShape::TraceMap { .. } => "trace map",
        PairShape::SlTwo { .. } => "SL(2,Z) matrix",
        PairShape::HalfTrace { .. } => "half-trace quadrilateral",
        PairShape::Translation => "translation",
        PairShape::PeriodicFraction(_) => "periodic continued fraction",
        PairShape::Custom => "custom",
    }
}

/// The first terms of one orbit family, indexed from `first_index`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrbitFamily {
    pub label: String,
    pub first_index: i64,
    pub args: Vec<QuadNum>,
}

/// Finite terms, family prefixes and the total (a rational multiple of π²).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Enumeration {
    pub finite: Vec<QuadNum>,
    pub families: Vec<OrbitFamily>,
    pub total_pi_sq: Rational,
}

impl Enumeration {
    pub fn all_args(&self) -> impl Iterator<Item = &QuadNum> {
        self.finite
            .iter()
            .chain(self.families.iter().flat_map(|f| f.args.iter()))
    }
}

fn checked_arg(v: QuadNum) -> Result<QuadNum, GeometryError> {
    if v.is_positive() && v <= QuadNum::one() {
        Ok(v)
    } else {
        Err(GeometryError::Infeasible(format!("cross ratio {v} outside (0, 1]")))
    }
}

/// `count` terms of `[moving_n, fixed]` with `moving_n = Tⁿ(moving)`,
/// `n = first, first+1, …`; `moving_on_left` fixes the argument order.
fn orbit_family(
    label: String,
    t: &Mobius,
    moving: &Geodesic,
    fixed: &Geodesic,
    first: i64,
    count: usize,
) -> Result<OrbitFamily, GeometryError> {
    let mut g = moving.image(&t.power(first)?)?;
    let mut args = Vec::with_capacity(count);
    for _ in 0..count {
        args.push(checked_arg(geodesic_cross_ratio(&g, fixed)?)?);
        g = g.image(t)?;
    }
    Ok(OrbitFamily {
        label,
        first_index: first,
        args,
    })
}

/// Enumerates finite terms and `count` terms of every orbit family.
pub fn enumerate_terms(fp: &FeasiblePair, model: ModelKind, count: usize) -> Result<Enumeration, GeometryError> {
    fp.check_model(model)?;
    let total_pi_sq = rhs_constant(&fp.surface(model)?);
    let t = &fp.transform;
    let (finite, families) = match model {
        ModelKind::DoubleCrownI | ModelKind::DoubleCrownII | ModelKind::ThirdPair => {
            let e1 = fp.side(0)?;
            let einf = fp.side(2)?;
            let finite = vec![checked_arg(geodesic_cross_ratio(&e1, &einf)?)?];
            let families = vec![
                orbit_family("T^n e_inf vs e_inf".into(), t, &einf, &einf, 2, count)?,
                orbit_family("T^n e_1 vs e_1".into(), t, &e1, &e1, 2, count)?,
                orbit_family("T^n e_inf vs e_1".into(), t, &einf, &e1, 1, count)?,
                orbit_family("T^n e_1 vs e_inf".into(), t, &e1, &einf, 1, count)?,
            ];
            (finite, families)
        }
        ModelKind::CrownI | ModelKind::CrownII => {
            let (u, ubar) = t.fixed_points()?;
            let axis = Geodesic::between(ubar, u)?;
            let einf = fp.side(2)?;
            let finite = vec![checked_arg(geodesic_cross_ratio(&axis, &einf)?)?];
            let families = vec![orbit_family("T^n e_inf vs e_inf".into(), t, &einf, &einf, 2, count)?];
            (finite, families)
        }
        ModelKind::Parabolic => {
            // Sides between consecutive finite vertices.
            let m = fp.vertices.len() - 2;
            let sides: Vec<Geodesic> = (0..m).map(|i| fp.side(i)).collect::<Result<_, _>>()?;
            let mut finite = Vec::new();
            for i in 0..m {
                for j in 0..i {
                    finite.push(checked_arg(geodesic_cross_ratio(&sides[i], &sides[j])?)?);
                }
            }
            let mut families = Vec::new();
            for i in 0..m {
                for j in 0..m {
                    let label = format!("s_{} vs T^k s_{}", i + 1, j + 1);
                    families.push(orbit_family(label, t, &sides[j], &sides[i], 1, count)?);
                }
            }
            (finite, families)
        }
        ModelKind::EvenPeriodCf => {
            let PairShape::PeriodicFraction(cf) = &fp.shape else {
                unreachable!("checked by check_model");
            };
            let half = cf.period() as i64 / 2;
            let alpha = cf.value();
            let axis = Geodesic::between(alpha.conj(), alpha)?;
            let odd_side = |i: i64| -> Result<Geodesic, GeometryError> {
                Geodesic::new(cf.convergent_point(2 * i + 1)?, cf.convergent_point(2 * i - 1)?)
            };
            let sides: Vec<Geodesic> = (0..half).map(odd_side).collect::<Result<_, _>>()?;
            let mut finite = Vec::new();
            for side in &sides {
                finite.push(checked_arg(geodesic_cross_ratio(&axis, side)?)?);
            }
            for i in 0..sides.len() {
                for j in 0..i {
                    finite.push(checked_arg(geodesic_cross_ratio(&sides[i], &sides[j])?)?);
                }
            }
            let mut families = Vec::new();
            for (i, si) in sides.iter().enumerate() {
                for (j, sj) in sides.iter().enumerate() {
                    let label = format!("A^k e_{} vs e_{}", 2 * i + 1, 2 * j + 1);
                    families.push(orbit_family(label, t, si, sj, 1, count)?);
                }
            }
            (finite, families)
        }
    };
    Ok(Enumeration {
        finite,
        families,
        total_pi_sq,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::contfrac::MatrixConvergents;
    use crate::exact::BoundaryPoint as BP;
    use crate::sequences::{fibonacci, Recurrence2};

    fn int(n: i64) -> QuadNum {
        QuadNum::from_int(n)
    }

    #[test]
    fn first_pair_side_relation() {
        // [1, t−1, t, ∞] = [T(1), T(t−1), t, ∞]
        for t in [3i64, 4, 7] {
            let m = Mobius::trace_map(int(t));
            let pts = |x: BP| m.apply(&x).unwrap();
            let lhs =
                super::super::cross_ratio4(&BP::finite(1), &BP::finite(t - 1), &BP::finite(t), &BP::Infinity).unwrap();
            let rhs = super::super::cross_ratio4(
                &pts(BP::finite(1)),
                &pts(BP::finite(t - 1)),
                &BP::finite(t),
                &BP::Infinity,
            )
            .unwrap();
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn double_crown_family_one_is_inverse_even_fibonacci_squares() {
        let fp = FeasiblePair::double_crown_i(int(3)).unwrap();
        let e = enumerate_terms(&fp, ModelKind::DoubleCrownI, 10).unwrap();
        let fam = &e.families[0];
        assert_eq!(
            &fam.args[..3],
            &[QuadNum::ratio(1, 9), QuadNum::ratio(1, 64), QuadNum::ratio(1, 441)]
        );
        for (i, v) in fam.args.iter().enumerate() {
            let n = fam.first_index + i as i64;
            assert_eq!(*v, QuadNum::from(fibonacci(2 * n)).square().inv().unwrap());
        }
        assert_eq!(e.total_pi_sq, Rational::from((1, 3)));
    }

    #[test]
    fn double_crown_cross_family_matches_difference_formula() {
        // (t−2)/((q_{n+1}−q_n)(q_{n−1}−q_{n−2})) for the e_1 / e_inf families.
        for t in [3i64, 7] {
            let fp = FeasiblePair::double_crown_i(int(t)).unwrap();
            let e = enumerate_terms(&fp, ModelKind::DoubleCrownI, 20).unwrap();
            let qs = Recurrence2::trace(int(t));
            let q = |n: i64| qs.term(n).unwrap();
            let formula: Vec<QuadNum> = (0..40)
                .map(|n| int(t - 2) / ((q(n + 1) - q(n)) * (q(n - 1) - q(n - 2))))
                .collect();
            let mut geo: Vec<QuadNum> = e.families[2].args.iter().chain(&e.families[3].args).cloned().collect();
            geo.extend(e.finite.iter().cloned());
            for v in &geo[..] {
                assert!(formula.contains(v), "t = {t}: {v} is not a difference-formula term");
            }
            // Each difference-formula term shows up twice: the two cross
            // families mirror each other and the finite term doubles n = 0.
            for v in &formula[..15] {
                assert_eq!(geo.iter().filter(|g| *g == v).count(), 2, "t = {t}: {v}");
            }
        }
    }

    #[test]
    fn crown_finite_term_is_axis_cross_ratio() {
        let fp = FeasiblePair::double_crown_i(int(3)).unwrap();
        let e = enumerate_terms(&fp, ModelKind::CrownI, 5).unwrap();
        let u: QuadNum = "(3+sqrt(5))/2".parse().unwrap();
        let want = super::super::cross_ratio4(
            &BP::Finite(u.inv().unwrap()),
            &BP::Finite(u.clone()),
            &BP::finite(3),
            &BP::Infinity,
        );
        // [1/u, u] and [3, ∞] are already in cyclic order.
        assert_eq!(e.finite, vec![want.unwrap()]);
        assert_eq!(e.total_pi_sq, Rational::from((1, 6)));
    }

    #[test]
    fn translation_orbit_gives_inverse_squares() {
        let fp = FeasiblePair::parabolic(&[]).unwrap();
        let e = enumerate_terms(&fp, ModelKind::Parabolic, 30).unwrap();
        assert!(e.finite.is_empty());
        let fam = &e.families[0];
        assert_eq!(fam.args[0], QuadNum::one());
        for (k, v) in fam.args.iter().enumerate().skip(1) {
            let k = k as i64 + 1;
            assert_eq!(*v, QuadNum::ratio(1, k * k));
        }
        assert_eq!(e.total_pi_sq, Rational::from((1, 3)));
    }

    #[test]
    fn parabolic_three_gon_terms_match_closed_forms() {
        for (p, q) in [(2i64, 5i64), (1, 2), (3, 7)] {
            let r = q - p;
            let fp = FeasiblePair::parabolic(&[QuadNum::ratio(p, q)]).unwrap();
            let e = enumerate_terms(&fp, ModelKind::Parabolic, 20).unwrap();
            assert_eq!(e.finite, vec![QuadNum::one()]);
            for k in 1..=20i64 {
                let idx = (k - 1) as usize;
                assert_eq!(e.families[0].args[idx], QuadNum::ratio(p * p, q * q * k * k));
                assert_eq!(e.families[3].args[idx], QuadNum::ratio(r * r, q * q * k * k));
                let mixed = |k: i64| QuadNum::ratio(p * r, (q * k - p) * (q * k - r));
                // s_2 against translates of s_1 meets at k = 1.
                assert_eq!(e.families[2].args[idx], mixed(k));
                assert_eq!(e.families[1].args[idx], mixed(k + 1));
            }
            assert_eq!(e.total_pi_sq, Rational::from((2, 3)));
        }
    }

    #[test]
    fn second_pair_terms_and_closure() {
        // b·p_{2n−2} = c·q_{2n−1} for Fibonacci matrices [[f_{2n+1}, f_{2n}], [f_{2n}, f_{2n−1}]].
        for n in 1..=4i64 {
            let (a, b) = (fibonacci(2 * n + 1), fibonacci(2 * n));
            let (c, d) = (b.clone(), fibonacci(2 * n - 1));
            let mc = MatrixConvergents::new(a.clone(), b.clone(), c.clone(), d.clone()).unwrap();
            for k in 1..=15i64 {
                assert_eq!(&b * mc.p(2 * k - 2), &c * mc.q(2 * k - 1));
            }
            let fp = FeasiblePair::double_crown_ii(a.clone(), b.clone(), c.clone(), d.clone()).unwrap();
            let e = enumerate_terms(&fp, ModelKind::DoubleCrownII, 10).unwrap();
            // Finite term bc/(ad).
            let bc = QuadNum::from(Integer::from(&b * &c));
            let ad = QuadNum::from(Integer::from(&a * &d));
            assert_eq!(e.finite, vec![bc / ad]);
            for (i, v) in e.families[0].args.iter().enumerate() {
                let m = 2 + i as i64;
                let want = (QuadNum::from(b.clone()) / QuadNum::from(mc.q(2 * m - 1))).square();
                assert_eq!(*v, want);
            }
        }
    }

    #[test]
    fn reduced_forms_have_unit_numerators() {
        let fp = FeasiblePair::double_crown_ii(Integer::from(2), Integer::from(1), Integer::from(1), Integer::from(1))
            .unwrap();
        let e = enumerate_terms(&fp, ModelKind::CrownII, 15).unwrap();
        for v in &e.families[0].args {
            assert!(v.is_rational());
            assert_eq!(*v.a(), 1);
        }
    }

    #[test]
    fn even_period_polygon_and_dynamics() {
        let cf = PeriodicCF::new(vec![1, 2, 3]).unwrap();
        let fp = FeasiblePair::even_period_cf(&cf).unwrap();
        assert_eq!(fp.vertices().len(), 8);
        let even = cf.even_period();
        // A^n(r_k) = r_{nl+k}
        let l = even.period() as i64;
        for k in 0..l {
            for n in 0..=8 {
                let img = fp
                    .transform()
                    .power(n)
                    .unwrap()
                    .apply(&even.convergent_point(k).unwrap())
                    .unwrap();
                assert_eq!(img, even.convergent_point(n * l + k).unwrap());
            }
        }
        let e = enumerate_terms(&fp, ModelKind::EvenPeriodCf, 10).unwrap();
        assert_eq!(e.finite.len(), 3 + 3);
        assert_eq!(e.families.len(), 9);
        assert_eq!(e.total_pi_sq, Rational::from(1));
    }

    #[test]
    fn convergent_cross_ratio_formula_matches_geometry() {
        let cf = PeriodicCF::new(vec![1, 2, 3]).unwrap();
        let r = |n: i64| cf.convergent_point(n).unwrap();
        for m in -1..=15i64 {
            for n in (m + 1)..=15 {
                let brute = super::super::cross_ratio4(&r(n + 2), &r(n), &r(m + 2), &r(m));
                let formula = cf.convergent_cross_ratio(n, m);
                match (brute, formula) {
                    (Ok(b), Ok(f)) => assert_eq!(b, f, "n={n}, m={m}"),
                    (b, f) => panic!("n={n}, m={m}: {b:?} vs {f:?}"),
                }
            }
        }
    }

    #[test]
    fn odd_index_cross_ratios_are_proper() {
        let cf = PeriodicCF::new(vec![1, 2, 3, 1, 2, 3]).unwrap();
        for m in (-1..15).step_by(2) {
            for n in ((m + 4)..25).step_by(2) {
                let v = cf.convergent_cross_ratio(n, m).unwrap();
                assert!(v.is_positive() && v < QuadNum::one());
            }
        }
    }

    #[test]
    fn infeasible_pairs_are_rejected() {
        assert!(FeasiblePair::double_crown_i(int(2)).is_err());
        assert!(FeasiblePair::double_crown_ii(2.into(), 1.into(), 1.into(), 2.into()).is_err());
        assert!(FeasiblePair::parabolic(&[QuadNum::ratio(2, 3), QuadNum::ratio(1, 3)]).is_err());
        assert!(FeasiblePair::parabolic(&[QuadNum::ratio(3, 2)]).is_err());
        // Right vertices, wrong map: z ↦ z + 2 does not carry [∞, 0] to [1, ∞].
        let verts = vec![BP::finite(0), BP::finite(1), BP::Infinity];
        let shift2 = Mobius::from_ints(1, 2, 0, 1).unwrap();
        assert!(FeasiblePair::new(shift2, verts.clone(), (2, 1), PairShape::Custom).is_err());
        // z ↦ z + 1 with a vertex whose image lands inside the polygon's arcs.
        let verts = vec![BP::finite(0), BP::finite(1), BP::finite(3), BP::Infinity];
        assert!(FeasiblePair::new(Mobius::translation(), verts, (3, 2), PairShape::Custom).is_err());
    }

    #[test]
    fn model_mismatch_is_reported() {
        let fp = FeasiblePair::parabolic(&[]).unwrap();
        assert!(matches!(
            enumerate_terms(&fp, ModelKind::CrownI, 3),
            Err(GeometryError::ModelMismatch { .. })
        ));
        let fp = FeasiblePair::double_crown_i(int(3)).unwrap();
        assert!(enumerate_terms(&fp, ModelKind::EvenPeriodCf, 3).is_err());
    }

    #[test]
    fn every_model_yields_unit_interval_arguments() {
        let pairs = vec![
            (
                FeasiblePair::double_crown_i("sqrt(5)".parse().unwrap()).unwrap(),
                ModelKind::DoubleCrownI,
            ),
            (
                FeasiblePair::double_crown_i(QuadNum::ratio(10, 3)).unwrap(),
                ModelKind::CrownI,
            ),
            (
                FeasiblePair::double_crown_ii(3.into(), 2.into(), 1.into(), 1.into()).unwrap(),
                ModelKind::CrownII,
            ),
            (FeasiblePair::third_pair(int(3)).unwrap(), ModelKind::ThirdPair),
            (
                FeasiblePair::third_pair("sqrt(5)".parse().unwrap()).unwrap(),
                ModelKind::ThirdPair,
            ),
            (
                FeasiblePair::parabolic(&[QuadNum::golden_ratio().inv().unwrap()]).unwrap(),
                ModelKind::Parabolic,
            ),
        ];
        for (fp, model) in pairs {
            let e = enumerate_terms(&fp, model, 12).unwrap();
            for v in e.all_args() {
                assert!(v.is_positive() && *v <= QuadNum::one(), "{model}: {v}");
            }
        }
    }
}
