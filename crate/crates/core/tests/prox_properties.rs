use l1adm::prox::{
    project_halfspace, project_l2_ball, project_linf_ball, project_unit_halfspace, shrink,
    shrink_l2, shrink_weighted, DualSet,
};
use l1adm::{CVector, Complex64};
use proptest::prelude::*;

fn cvec(len: usize) -> impl Strategy<Value = CVector> {
    prop::collection::vec((-5.0..5.0f64, -5.0..5.0f64), len)
        .prop_map(|v| v.into_iter().map(|(re, im)| Complex64::new(re, im)).collect())
}

fn pair(len: usize) -> impl Strategy<Value = (CVector, CVector)> {
    (cvec(len), cvec(len))
}

const TOL: f64 = 1e-12;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn shrink_is_non_expansive((u, v) in pair(6), t in 0.0..3.0f64) {
        let d = shrink(&u, t).unwrap().distance(&shrink(&v, t).unwrap());
        prop_assert!(d <= u.distance(&v) * (1.0 + TOL));
    }

    #[test]
    fn shrink_keeps_phase_and_drops_magnitude(v in cvec(6), t in 0.0..3.0f64) {
        let s = shrink(&v, t).unwrap();
        for (a, b) in v.iter().zip(s.iter()) {
            prop_assert!((b.norm() - (a.norm() - t).max(0.0)).abs() < 1e-12);
            if b.norm() > 0.0 {
                prop_assert!((b / b.norm() - a / a.norm()).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn shrink_minimises_its_objective(v in cvec(4), t in 0.0..3.0f64, x in cvec(4)) {
        // t||x||_1 + ||x - v||^2 / 2 is 1-strongly convex
        let f = |x: &CVector| t * x.norm1() + 0.5 * x.distance(&v).powi(2);
        let s = shrink(&v, t).unwrap();
        prop_assert!(f(&x) - f(&s) >= 0.5 * x.distance(&s).powi(2) - 1e-10 * (1.0 + f(&s)));
    }

    #[test]
    fn weighted_shrink_with_equal_weights_is_shrink(v in cvec(5), t in 0.0..3.0f64) {
        prop_assert_eq!(shrink_weighted(&v, &[t; 5]).unwrap(), shrink(&v, t).unwrap());
    }

    #[test]
    fn linf_projection_properties((u, v) in pair(6), s in cvec(6)) {
        let (pu, pv) = (project_linf_ball(&u, None).unwrap(), project_linf_ball(&v, None).unwrap());
        prop_assert!(pu.distance(&pv) <= u.distance(&v) * (1.0 + TOL));
        prop_assert!(pu.iter().all(|z| z.norm() <= 1.0));
        let member = project_linf_ball(&s, None).unwrap();
        prop_assert!(u.sub(&pu).dot(&member.sub(&pu)).re <= 1e-12);
        for (a, b) in u.iter().zip(pu.iter()) {
            prop_assert!((b.norm() - a.norm().min(1.0)).abs() < 1e-12);
        }
    }

    #[test]
    fn weighted_linf_projection_respects_radii(v in cvec(4), w in prop::collection::vec(0.1..2.0f64, 4)) {
        let p = project_linf_ball(&v, Some(&w)).unwrap();
        for ((a, b), r) in v.iter().zip(p.iter()).zip(&w) {
            prop_assert!(b.norm() <= *r);
            prop_assert!((b.norm() - a.norm().min(*r)).abs() < 1e-12);
        }
    }

    #[test]
    fn l2_projection_properties((u, v) in pair(6), s in cvec(6), delta in 0.0..6.0f64) {
        let (pu, pv) = (project_l2_ball(&u, delta), project_l2_ball(&v, delta));
        prop_assert!(pu.distance(&pv) <= u.distance(&v) * (1.0 + TOL));
        prop_assert!(pu.norm() <= delta * (1.0 + 1e-15));
        let member = project_l2_ball(&s, delta);
        prop_assert!(u.sub(&pu).dot(&member.sub(&pu)).re <= 1e-10);
    }

    #[test]
    fn shrink_l2_is_non_expansive_and_moreau((u, v) in pair(6), t in 0.0..6.0f64) {
        let (su, sv) = (shrink_l2(&u, t), shrink_l2(&v, t));
        prop_assert!(su.distance(&sv) <= u.distance(&v) * (1.0 + TOL));
        // Moreau: v = prox_{t||.||}(v) + P_{t B2}(v)
        prop_assert!(su.add(&project_l2_ball(&u, t)).distance(&u) < 1e-12 * (1.0 + u.norm()));
    }

    #[test]
    fn halfspace_projection_properties((u, v) in pair(6), s in cvec(6)) {
        let (pu, pv) = (project_unit_halfspace(&u), project_unit_halfspace(&v));
        prop_assert!(pu.distance(&pv) <= u.distance(&v) * (1.0 + TOL));
        prop_assert!(pu.iter().all(|z| z.re <= 1.0));
        let member = project_unit_halfspace(&s);
        prop_assert!(u.sub(&pu).dot(&member.sub(&pu)).re <= 1e-12);
        prop_assert_eq!(project_halfspace(&u, &[1.0; 6]).unwrap(), pu);
    }

    #[test]
    fn dual_set_projection_lands_in_the_set(v in cvec(6), half in 0usize..=6) {
        let set = DualSet::new(None, half);
        let p = set.project(&v);
        prop_assert!(set.contains(&p));
        prop_assert_eq!(set.project(&p), p);
    }
}

#[test]
fn zero_is_fixed_by_shrink() {
    let z = CVector::zeros(3);
    assert_eq!(shrink(&z, 0.7).unwrap(), z);
    assert!(shrink(&z, 0.0).unwrap().is_finite());
}
