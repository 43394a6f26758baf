mod common;

use common::*;
use proptest::prelude::*;
use relspin::composite::operators::{casimir, total_spin};
use relspin::composite::{
    couple_pair, couple_tree, expectation, partial_trace, Basis, CouplingTree, DensityOperator, StateVector,
};
use relspin::{Complex, HalfInt};

fn spins(max_twice: i64, len: std::ops::RangeInclusive<usize>) -> impl Strategy<Value = Vec<i64>> {
    prop::collection::vec(1..=max_twice, len)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn recoupling_roundtrip(tw in spins(3, 2..=4), seed in any::<u64>()) {
        let sys = system(&tw);
        let labels: Vec<String> = sys.particles().iter().map(|p| p.label.clone()).collect();
        let tree = labels[1..].iter().fold(CouplingTree::leaf(labels[0].clone()), |t, l| CouplingTree::pair(t, CouplingTree::leaf(l.clone())));
        let map = couple_tree(&sys, &tree).unwrap();
        prop_assert!(map.orthogonality_defect() < 1e-10);
        let mut r = rng(seed);
        let v = random_vector(&mut r, sys.dimension());
        let back = map.apply_inverse(&map.apply(&v).unwrap()).unwrap();
        prop_assert!((back - &v).norm() < 1e-10);
        let rho = random_density(&mut r, &Basis::product(&sys));
        let again = map.backward(&map.forward(&rho).unwrap()).unwrap();
        prop_assert!(again.max_abs_diff(&rho).unwrap() < 1e-10);
    }

    #[test]
    fn partial_trace_is_basis_independent(tw in spins(4, 3..=3), seed in any::<u64>()) {
        let sys = system(&tw);
        let mut r = rng(seed);
        let rho = random_density(&mut r, &Basis::product(&sys));
        let direct = partial_trace(&rho, &["C"]).unwrap();

        let ab = couple_pair(&sys, "A", "B").unwrap();
        let coupled = ab.forward(&rho).unwrap();
        let traced_coupled = partial_trace(&coupled, &["C"]).unwrap();
        let reduced = system(&tw[..2]);
        let ab_reduced = couple_pair(&reduced, "A", "B").unwrap();
        let uncoupled = ab_reduced.backward(&traced_coupled.relabel(ab_reduced.target().clone()).unwrap()).unwrap();
        prop_assert!(uncoupled.max_abs_diff(&direct).unwrap() < 1e-10);
    }
}

#[test]
fn coupled_label_must_be_uncoupled_first() {
    let sys = system(&[1, 2]);
    let map = couple_pair(&sys, "A", "B").unwrap();
    let rho = map.forward(&DensityOperator::maximally_mixed(Basis::product(&sys))).unwrap();
    assert!(matches!(partial_trace(&rho, &["B"]), Err(relspin::Error::CoupledLabel(_))));
}

#[test]
fn total_spin_expectation_on_measured_state() {
    // (J^{SG})^2 on the gyroscope state equals the sector-weighted Casimirs.
    let g = HalfInt::int(3);
    let (a, b) = (Complex::new(0.6, 0.0), Complex::new(0.0, 0.8));
    let psi = relspin::toy::system_gyroscope_state(a, b, g).unwrap();
    let rho = psi.to_density();
    let j2 = casimir(&total_spin(rho.basis(), &["S", "G"]).unwrap());
    let p_par = relspin::toy::parallel_probability_closed_form(a, b, g);
    let gv = g.value();
    let want = (gv + 0.5) * (gv + 1.5) * p_par + (gv - 0.5) * (gv + 0.5) * (1.0 - p_par);
    assert!((expectation(&rho, &j2).unwrap() - want).abs() < 1e-10);
}

#[test]
fn reduced_product_state_is_exact() {
    let sys = system(&[1, 2]);
    let mut r = rng(7);
    let a = random_vector(&mut r, 2);
    let b = random_vector(&mut r, 3);
    let psi = StateVector::product(&sys, &[a.clone(), b]).unwrap();
    let red = psi.reduced(&["B"]).unwrap();
    let want = &a * a.adjoint();
    assert!(common::max_abs(&(red.matrix() - want)) < 1e-14);
}
