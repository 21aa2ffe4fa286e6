mod common;

use common::{binary_entropy, expm};
use jc_core::entropy::{dem_closed_form, dem_exact, LogBase};
use jc_core::linalg::{partial_trace, ComplexMatrix, DensityMatrix, Subsystem};
use jc_core::model::{
    closed_form_coeffs, evolve, hamiltonian, propagator, transition_probability_closed, AtomState, FieldConfig,
    JcSystem, ModelParams,
};
use jc_core::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn default_field() -> FieldConfig {
    FieldConfig::from_mean_photons(5.0, 1e-12).unwrap()
}

#[test]
fn propagator_matches_matrix_exponential() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    for _ in 0..10 {
        let params = ModelParams::new(rng.gen_range(0.2..2.0), rng.gen_range(0.0..3.0)).unwrap();
        let t = rng.gen_range(-5.0..20.0);
        let h = hamiltonian(&params, 3);
        let oracle = expm(&h.scale(Complex64::new(0.0, -t)));
        let u = propagator(t, &params, 3);
        let gap = u.max_abs_diff(&oracle);
        assert!(gap <= 1e-8, "t={t}: gap {gap:e}");
    }
}

#[test]
fn propagator_is_unitary() {
    let params = ModelParams::default();
    let n_max = default_field().n_max();
    let id = ComplexMatrix::identity(2 * (n_max + 1));
    for i in 0..=50 {
        let u = propagator(i as f64 + 0.37, &params, n_max);
        assert!((&u * &u.adjoint()).max_abs_diff(&id) <= 1e-10);
    }
}

#[test]
fn propagator_group_property() {
    let params = ModelParams::new(1.0, 2.0).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..20 {
        let (t1, t2) = (rng.gen_range(0.0..25.0), rng.gen_range(0.0..25.0));
        let lhs = &propagator(t1, &params, 20) * &propagator(t2, &params, 20);
        assert!(lhs.max_abs_diff(&propagator(t1 + t2, &params, 20)) <= 1e-9);
    }
}

#[test]
fn joint_entropy_is_conserved() {
    let field = default_field();
    let params = ModelParams::default();
    let atom = AtomState::new(0.7).unwrap();
    let expected = binary_entropy(0.7);
    for t in [1.0, 5.0, 14.0] {
        let rho = evolve(&atom, &field, &params, t).unwrap();
        let r = dem_exact(&rho, field.dims(), LogBase::E).unwrap();
        assert!((r.s_joint - expected).abs() <= 1e-8, "t={t}: {}", r.s_joint);
    }
}

#[test]
fn closed_transition_probability_is_exact_for_excited_start() {
    let field = default_field();
    let params = ModelParams::default();
    let system = JcSystem::new(AtomState::excited(), field, params);
    let mut worst = 0.0f64;
    for i in 0..=300 {
        let t = i as f64 * 0.1;
        let exact = system.excited_population(t).unwrap();
        let closed = transition_probability_closed(t, 5.0, 1.0, field.n_max());
        assert!((0.0..=1.0).contains(&closed));
        let k = closed_form_coeffs(t, system.atom(), &field, &params);
        worst = worst.max((closed - exact).abs()).max((k.e1 - exact).abs());
    }
    assert!(worst <= 1e-8, "max gap {worst:e}");
}

#[test]
fn atom_marginal_is_diagonal_for_fock_diagonal_field() {
    let params = ModelParams::default();
    let n_max = 20;
    // diagonal atom (x) thermal-like diagonal field
    let weights: Vec<f64> = (0..=n_max).map(|n| 0.6f64 * 0.4f64.powi(n as i32)).collect();
    let total: f64 = weights.iter().sum();
    let mut probs = Vec::new();
    for l in [0.3, 0.7] {
        probs.extend(weights.iter().map(|w| l * w / total));
    }
    let initial = ComplexMatrix::from_real_diagonal(&probs);
    for i in 0..60 {
        let u = propagator(i as f64 * 0.5, &params, n_max);
        let rho = DensityMatrix::new(&(&u * &initial) * &u.adjoint()).unwrap();
        let atom = partial_trace(&rho, (2, n_max + 1), Subsystem::Atom).unwrap();
        assert!(atom.matrix().max_off_diagonal() <= 1e-10);
    }
}

/// Photon-number coherences of the coherent field feed an atomic coherence
/// that the closed-form state leaves out.
#[test]
fn coherent_field_builds_atomic_coherence() {
    let field = default_field();
    let system = JcSystem::new(AtomState::new(0.7).unwrap(), field, ModelParams::default());
    let largest = (0..60)
        .map(|i| {
            let rho = system.state_at(i as f64 * 0.5).unwrap();
            partial_trace(&rho, field.dims(), Subsystem::Atom)
                .unwrap()
                .matrix()
                .max_off_diagonal()
        })
        .fold(0.0, f64::max);
    assert!(largest > 0.1, "largest atomic coherence {largest}");
}

#[test]
fn dem_is_independent_of_free_frequency() {
    let field = default_field();
    let atom = AtomState::new(0.7).unwrap();
    let systems: Vec<JcSystem> = [0.0, 1.0, 5.0]
        .iter()
        .map(|&w| JcSystem::new(atom, field, ModelParams::new(1.0, w).unwrap()))
        .collect();
    for i in 0..40 {
        let t = i as f64 * 0.75;
        let dems: Vec<f64> = systems
            .iter()
            .map(|s| dem_exact(&s.state_at(t).unwrap(), s.dims(), LogBase::E).unwrap().dem)
            .collect();
        assert!(
            (dems[0] - dems[1]).abs() <= 1e-9 && (dems[0] - dems[2]).abs() <= 1e-9,
            "t={t}: {dems:?}"
        );
    }
}

#[test]
fn free_phase_rotation_leaves_dem_unchanged() {
    let field = default_field();
    let system = JcSystem::new(AtomState::new(0.4).unwrap(), field, ModelParams::default());
    // exp(-i s (H_A + H_F)) is the full propagator with zero coupling
    let free = ModelParams { g: 0.0, omega0: 1.3 };
    for t in [0.7, 3.3, 9.1] {
        let rho = system.state_at(t).unwrap();
        let u = propagator(2.1, &free, field.n_max());
        let rotated = &(&u * rho.matrix()) * &u.adjoint();
        let rotated = DensityMatrix::new(rotated).unwrap();
        let a = dem_exact(&rho, field.dims(), LogBase::E).unwrap().dem;
        let b = dem_exact(&rotated, field.dims(), LogBase::E).unwrap().dem;
        assert!((a - b).abs() < 1e-9);
    }
}

#[test]
fn pure_initial_atom_gives_twice_the_atomic_entropy() {
    let field = default_field();
    for atom in [AtomState::ground(), AtomState::excited()] {
        let system = JcSystem::new(atom, field, ModelParams::default());
        for i in 0..30 {
            let t = i as f64 * 0.9;
            let r = dem_exact(&system.state_at(t).unwrap(), system.dims(), LogBase::E).unwrap();
            assert!(r.s_joint <= 1e-8);
            assert!((r.dem - 2.0 * r.s_atom).abs() <= 1e-8);
            assert!(r.dem >= -1e-9);
        }
    }
}

#[test]
fn initial_state_has_no_dem() {
    let params = ModelParams::default();
    for l0 in [0.0, 0.3, 0.7, 1.0] {
        for mean in [0.0, 1.0, 5.0] {
            let field = FieldConfig::from_mean_photons(mean, 1e-12).unwrap();
            let rho = evolve(&AtomState::new(l0).unwrap(), &field, &params, 0.0).unwrap();
            assert!(dem_exact(&rho, field.dims(), LogBase::E).unwrap().dem.abs() <= 1e-10);
        }
    }
}

/// Ground-start weights are not covered by the closed form without an index
/// shift; this only prints the gap.
#[test]
fn ground_weight_deviation_report() {
    let field = default_field();
    let params = ModelParams::default();
    let atom = AtomState::new(0.7).unwrap();
    let system = JcSystem::new(atom, field, params);
    let mut worst = 0.0f64;
    for i in 0..=300 {
        let t = i as f64 * 0.1;
        let exact = system.excited_population(t).unwrap();
        worst = worst.max((closed_form_coeffs(t, &atom, &field, &params).e1 - exact).abs());
    }
    println!("lambda0=0.7: max |e1 - exact excited population| over [0,30] = {worst:.3e}");
    assert!(worst.is_finite());
}

#[test]
fn closed_form_dem_matches_exact_for_pure_atom_at_start() {
    let field = FieldConfig::from_mean_photons(5.0, 1e-12).unwrap();
    let params = ModelParams::default();
    for lambda0 in [0.0, 1.0] {
        let atom = AtomState::new(lambda0).unwrap();
        let rho = evolve(&atom, &field, &params, 0.0).unwrap();
        let exact = dem_exact(&rho, field.dims(), LogBase::E).unwrap().dem;
        let closed = dem_closed_form(&closed_form_coeffs(0.0, &atom, &field, &params), LogBase::E);
        assert!((exact - closed).abs() <= 1e-8, "lambda0={lambda0}: {exact} vs {closed}");
    }
}
