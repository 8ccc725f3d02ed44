use std::f64::consts::{FRAC_PI_2, PI, TAU};

use nalgebra::DMatrix;
use num_complex::Complex64;
use proptest::prelude::*;
use spincat::closedform::{crb_half_z, crb_one_z};
use spincat::{
    build_operators, cat_crb, cat_state, coherent_overlap, coherent_state, rotation_matrix,
    CatAngles, CatParams, CoherentParams, DickeVector, Generator, PhaseFamily, SpinJ,
};

fn max_abs(m: &DMatrix<Complex64>) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

fn spin(two_j: u32) -> SpinJ {
    SpinJ::from_two_j(two_j).unwrap()
}

fn generator() -> impl Strategy<Value = Generator> {
    prop_oneof![Just(Generator::X), Just(Generator::Y), Just(Generator::Z)]
}

#[test]
fn su2_algebra_up_to_two_j_40() {
    let i = Complex64::i();
    for two_j in 1..=40 {
        let j = spin(two_j);
        let ops = build_operators(j);
        let id = DMatrix::<Complex64>::identity(j.dim(), j.dim());
        let comm = |a: &DMatrix<Complex64>, b: &DMatrix<Complex64>| a * b - b * a;
        assert!(max_abs(&(comm(&ops.jx, &ops.jy) - ops.jz.map(|z| z * i))) < 1e-12);
        assert!(max_abs(&(comm(&ops.jy, &ops.jz) - ops.jx.map(|z| z * i))) < 1e-12);
        assert!(max_abs(&(comm(&ops.jz, &ops.jx) - ops.jy.map(|z| z * i))) < 1e-12);
        let casimir = &ops.jx * &ops.jx + &ops.jy * &ops.jy + &ops.jz * &ops.jz;
        let jj = j.value() * (j.value() + 1.0);
        assert!(
            max_abs(&(casimir - id.map(|z| z * jj))) < 1e-12,
            "2j = {two_j}"
        );
    }
}

proptest! {
    #[test]
    fn coherent_state_is_rotated_lowest_weight(two_j in 1u32..=24, t in 0.0..=PI, f in 0.0..TAU) {
        let j = spin(two_j);
        let p = CoherentParams::new(t, f).unwrap();
        let low = DickeVector::basis(j, -(two_j as i32)).unwrap();
        let rotated = rotation_matrix(j, p) * low.amplitudes();
        let direct = coherent_state(j, p);
        prop_assert!((rotated - direct.amplitudes()).norm() < 1e-10);
    }

    #[test]
    fn overlap_formula_matches_inner_product(
        two_j in 1u32..=64, t1 in 0.0..=PI, f1 in 0.0..TAU, t2 in 0.0..=PI, f2 in 0.0..TAU,
    ) {
        let j = spin(two_j);
        let (p1, p2) = (CoherentParams::new(t1, f1).unwrap(), CoherentParams::new(t2, f2).unwrap());
        let direct = coherent_state(j, p1).inner(&coherent_state(j, p2));
        prop_assert!((coherent_overlap(j, p1, p2) - direct).norm() < 1e-12);
    }

    #[test]
    fn cats_are_normalized(two_j in 1u32..=20, t1 in 0.0..=PI, t2 in 0.0..=PI, f1 in 0.0..TAU, f2 in 0.0..TAU) {
        let c = CatParams::from_angles(spin(two_j), &CatAngles::new(t1, t2, f1, f2)).unwrap();
        prop_assume!(c.unnormalized_norm_sq() > 1e-6);
        prop_assert!((cat_state(&c).unwrap().norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn crb_never_beats_heisenberg_limit(
        two_j in 1u32..=12, g in generator(),
        t1 in 0.0..=PI, t2 in 0.0..=PI, f1 in 0.0..TAU, f2 in 0.0..TAU,
    ) {
        let j = spin(two_j);
        if let Ok(r) = cat_crb(j, g, &CatAngles::new(t1, t2, f1, f2)) {
            prop_assert!(r.crb >= j.heisenberg_limit() * (1.0 - 1e-12));
        }
    }

    #[test]
    fn crb_is_swap_symmetric(
        two_j in 1u32..=8, g in generator(),
        t1 in 0.0..=PI, t2 in 0.0..=PI, f1 in 0.0..TAU, f2 in 0.0..TAU,
    ) {
        let a = CatAngles::new(t1, t2, f1, f2);
        if let (Ok(x), Ok(y)) = (cat_crb(spin(two_j), g, &a), cat_crb(spin(two_j), g, &a.swapped())) {
            prop_assert!(x.crb == y.crb || (x.crb - y.crb).abs() <= 1e-12 * x.crb.max(1.0));
        }
    }

    #[test]
    fn jz_crb_depends_only_on_phase_difference(
        two_j in 1u32..=10, t1 in 0.0..=PI, t2 in 0.0..=PI,
        f1 in 0.0..TAU, f2 in 0.0..TAU, c in -TAU..TAU,
    ) {
        let j = spin(two_j);
        let a = CatAngles::new(t1, t2, f1, f2);
        let b = CatAngles::new(t1, t2, f1 + c, f2 + c);
        if let (Ok(x), Ok(y)) = (cat_crb(j, Generator::Z, &a), cat_crb(j, Generator::Z, &b)) {
            prop_assume!(x.crb < 1e3);
            prop_assert!((x.crb - y.crb).abs() < 1e-12 * x.crb.max(1.0));
        }
    }

    #[test]
    fn jz_closed_form_is_swap_symmetric(t1 in 0.0..=PI, t2 in 0.0..=PI, f1 in 0.0..TAU, f2 in 0.0..TAU) {
        let x = crb_half_z(t1, t2, f1, f2);
        let y = crb_half_z(t2, t1, f2, f1);
        prop_assert!(x == y || (x - y).abs() < 1e-12 * x.max(1.0));
    }

    #[test]
    fn spin_one_jz_closed_forms_are_swap_symmetric(t1 in 0.0..=PI, t2 in 0.0..=PI) {
        for f in [PhaseFamily::Zero, PhaseFamily::Half, PhaseFamily::Pi] {
            let (x, y) = (crb_one_z(f, t1, t2), crb_one_z(f, t2, t1));
            prop_assert!(x == y || (x - y).abs() < 1e-12 * x.max(1.0), "{f:?}");
        }
    }

    #[test]
    fn jx_heisenberg_condition(t1 in 0.0..=PI, t2 in 0.05..=PI, f1 in 0.0..TAU, upper in any::<bool>()) {
        let (s1, s2) = ((t1 / 2.0).sin(), (t2 / 2.0).sin());
        let cos_f2 = -f1.cos() * s1 / s2;
        prop_assume!(cos_f2.abs() <= 1.0);
        let f2 = if upper { cos_f2.acos() } else { TAU - cos_f2.acos() };
        if let Ok(r) = cat_crb(SpinJ::HALF, Generator::X, &CatAngles::new(t1, t2, f1, f2)) {
            prop_assert!((r.crb - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn jx_great_circle_family(t1 in 0.0..=PI, t2 in 0.0..=PI) {
        let r = cat_crb(SpinJ::HALF, Generator::X, &CatAngles::new(t1, t2, FRAC_PI_2, 3.0 * FRAC_PI_2)).unwrap();
        prop_assert!((r.crb - 1.0).abs() < 1e-9);
    }
}

#[test]
fn jx_depends_on_individual_phases() {
    let g = Generator::X;
    let a = cat_crb(
        SpinJ::HALF,
        g,
        &CatAngles::new(FRAC_PI_2, FRAC_PI_2, 0.0, FRAC_PI_2),
    )
    .unwrap();
    let b = cat_crb(
        SpinJ::HALF,
        g,
        &CatAngles::new(FRAC_PI_2, FRAC_PI_2, PI / 4.0, 3.0 * PI / 4.0),
    )
    .unwrap();
    assert!((a.crb - 3.0 / 5f64.sqrt()).abs() < 1e-12);
    assert!((b.crb - 1.0).abs() < 1e-12);
    assert!((a.crb - b.crb).abs() > 0.1);
}
