use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2};

use bellkey::attack::{
    alice_bob_state, attack_isometry, attack_state, eve_conditional_states, one_qubit_attack_state,
    one_qubit_attack_state_via_isometry, AttackParams, AttackVariant,
};
use bellkey::chsh::{correlation_matrix, CorrelationMatrix};
use bellkey::entanglement::{bell_diagonal_check, numerical_rank, RANK_TOL};
use bellkey::harness::{grid_angle, random_params};
use bellkey::numeric::{CMatrix, C64};
use bellkey::secrecy::{accessible_info, info_ae, BinaryEnsemble};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn samples(seed: u64, n: usize) -> Vec<AttackParams> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n).map(|_| random_params(&mut rng)).collect()
}

/// Eve's vector after Alice and Bob find `±` in the x basis, computed by
/// contracting amplitudes by hand.
fn project(amps: &[C64], alice: usize, bob: usize) -> Vec<C64> {
    let sign = |outcome: usize, bit: usize| if outcome == 1 && bit == 1 { -1.0 } else { 1.0 };
    let eve_dim = amps.len() / 4;
    (0..eve_dim)
        .map(|e| {
            let mut acc = C64::new(0.0, 0.0);
            for a in 0..2 {
                for b in 0..2 {
                    acc += amps[(2 * a + b) * eve_dim + e] * (0.5 * sign(alice, a) * sign(bob, b));
                }
            }
            acc
        })
        .collect()
}

/// Distance between two vectors after removing a global phase.
fn phase_distance(u: &[C64], v: &[C64]) -> f64 {
    let overlap: C64 = u.iter().zip(v).map(|(a, b)| a.conj() * b).sum();
    let phase = if overlap.norm() > 0.0 {
        overlap / overlap.norm()
    } else {
        C64::new(1.0, 0.0)
    };
    u.iter()
        .zip(v)
        .map(|(a, b)| (a * phase - b).norm())
        .fold(0.0, f64::max)
}

#[test]
fn isometry_preserves_inner_products() {
    for p in samples(1, 100) {
        let v = attack_isometry(&p);
        assert!(v.adjoint().matmul(&v).max_abs_diff(&CMatrix::identity(2)) < 1e-15);
    }
}

#[test]
fn both_constructions_agree() {
    for p in samples(2, 100) {
        let (a, b) = (
            one_qubit_attack_state(&p),
            one_qubit_attack_state_via_isometry(&p),
        );
        assert!((a.norm_sqr() - 1.0).abs() < 1e-15);
        let gap = a
            .amplitudes()
            .iter()
            .zip(b.amplitudes())
            .map(|(x, y)| (x - y).norm())
            .fold(0.0, f64::max);
        assert!(gap <= 1e-14);
    }
}

#[test]
fn eve_states_match_projection() {
    for p in samples(3, 100) {
        for variant in [AttackVariant::OneQubit, AttackVariant::Symmetric] {
            let psi = attack_state(&p, variant);
            let ens = eve_conditional_states(&p, variant);
            for i in 0..2 {
                for j in 0..2 {
                    let projected = project(psi.amplitudes(), i, j);
                    assert!(phase_distance(&projected, ens.state(i, j)) < 1e-12);
                }
            }
        }
    }
}

#[test]
fn outcome_statistics_are_normalized_with_fair_marginals() {
    for p in samples(4, 100) {
        let t = eve_conditional_states(&p, AttackVariant::OneQubit).probabilities();
        assert!((t.iter().flatten().sum::<f64>() - 1.0).abs() < 1e-14);
        for (k, row) in t.iter().enumerate() {
            assert!((row[0] + row[1] - 0.5).abs() < 1e-14);
            assert!((t[0][k] + t[1][k] - 0.5).abs() < 1e-14);
        }
    }
}

#[test]
fn corner_reduction_is_psi_plus() {
    let p = AttackParams::new(0.0, 0.0).unwrap();
    let s = C64::new(FRAC_1_SQRT_2, 0.0);
    let z = C64::new(0.0, 0.0);
    let psi_plus = CMatrix::outer(&[z, s, s, z]);
    assert!(alice_bob_state(&p, AttackVariant::OneQubit).max_abs_diff(&psi_plus) < 1e-15);
    let ens = eve_conditional_states(&p, AttackVariant::OneQubit);
    assert!((ens.state(0, 0)[0].re - FRAC_1_SQRT_2).abs() < 1e-15);
    assert!((ens.probability(0, 0) - 0.5).abs() < 1e-15);
    assert!(ens.probability(0, 1).abs() < 1e-15);
}

#[test]
fn symmetric_attack_keeps_corner_correlations() {
    let p = AttackParams::new(0.0, 0.0).unwrap();
    let r = correlation_matrix(&alice_bob_state(&p, AttackVariant::Symmetric)).unwrap();
    assert!(r.max_abs_diff(&CorrelationMatrix::diagonal([1.0, 1.0, -1.0])) < 1e-14);
}

#[test]
fn symmetric_attack_has_full_rank_bell_diagonal_state() {
    let p = AttackParams::new(0.3, 0.7).unwrap();
    let rho = alice_bob_state(&p, AttackVariant::Symmetric);
    assert_eq!(numerical_rank(&rho, RANK_TOL).unwrap(), 4);
    assert!(bell_diagonal_check(&rho).unwrap().is_diagonal);
    let one = alice_bob_state(&p, AttackVariant::OneQubit);
    assert_eq!(numerical_rank(&one, RANK_TOL).unwrap(), 2);
    // Eve's parity qubit leaves Alice-Bob correlations untouched
    let r_sym = correlation_matrix(&rho).unwrap();
    let r_one = correlation_matrix(&one).unwrap();
    assert!(r_sym.max_abs_diff(&r_one) < 1e-14);
}

#[test]
fn tracing_out_parity_qubit_recovers_one_qubit_ensemble() {
    for p in samples(5, 20) {
        let sym = eve_conditional_states(&p, AttackVariant::Symmetric).first_qubit_states();
        let one = eve_conditional_states(&p, AttackVariant::OneQubit).conditioned_on_alice();
        for k in 0..2 {
            assert!(sym[k].max_abs_diff(&one[k]) < 1e-15);
        }
    }
}

#[test]
fn symmetric_attack_leaves_eve_information_unchanged() {
    for i in 0..5 {
        for j in 0..5 {
            let p = AttackParams::new(grid_angle(i, 5), grid_angle(j, 5)).unwrap();
            let seed = (5 * i + j) as u64;
            let sym = eve_conditional_states(&p, AttackVariant::Symmetric);
            let one = eve_conditional_states(&p, AttackVariant::OneQubit);
            let two_qubit = accessible_info(&sym.alice_task(), seed);
            let one_qubit = accessible_info(&one.alice_task(), seed);
            let first = accessible_info(
                &BinaryEnsemble::new(sym.first_qubit_states()).unwrap(),
                seed,
            );
            assert!(
                (two_qubit - one_qubit).abs() < 1e-6,
                "({i},{j}) {two_qubit} {one_qubit}"
            );
            assert!((first - one_qubit).abs() < 1e-6);
            assert!((one_qubit - info_ae(&p)).abs() < 1e-6);
        }
    }
}

#[test]
fn decoupled_corner_puts_eve_in_one() {
    let p = AttackParams::new(FRAC_PI_2, FRAC_PI_2).unwrap();
    let v = attack_isometry(&p);
    let one = C64::new(1.0, 0.0);
    assert!((v[(1, 0)] - one).norm() < 1e-15);
    assert!((v[(3, 1)] - one).norm() < 1e-15);
}
