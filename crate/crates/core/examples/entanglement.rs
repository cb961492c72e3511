//! Partial-transpose test, rank and Bell-diagonal form of Alice and Bob's
//! state along a cut through the parameter square.

use std::f64::consts::FRAC_PI_2;

use bellkey::attack::{alice_bob_state, AttackParams, AttackVariant};
use bellkey::entanglement::{bell_diagonal_check, numerical_rank, ppt_min_eigenvalue, RANK_TOL};

fn main() -> bellkey::Result<()> {
    let alpha = 0.4;
    println!(
        "alpha={alpha}, beta sweeps through pi/2 - alpha = {:.4}",
        FRAC_PI_2 - alpha
    );
    for k in 0..=8 {
        let beta = FRAC_PI_2 * k as f64 / 8.0;
        let p = AttackParams::new(alpha, beta)?;
        let one = alice_bob_state(&p, AttackVariant::OneQubit);
        println!(
            "  beta={beta:.4}  min eig of partial transpose {:+.6}",
            ppt_min_eigenvalue(&one)?
        );
    }
    let on_line = AttackParams::new(alpha, FRAC_PI_2 - alpha)?;
    println!(
        "on the line: {:+.3e}",
        ppt_min_eigenvalue(&alice_bob_state(&on_line, AttackVariant::OneQubit))?
    );

    let p = AttackParams::new(0.3, 0.7)?;
    let one = alice_bob_state(&p, AttackVariant::OneQubit);
    let sym = alice_bob_state(&p, AttackVariant::Symmetric);
    let diag = bell_diagonal_check(&sym)?;
    println!(
        "\nat (0.3, 0.7): one-qubit rank {}, symmetric rank {}",
        numerical_rank(&one, RANK_TOL)?,
        numerical_rank(&sym, RANK_TOL)?
    );
    println!(
        "symmetric Bell weights {:.6?} (off-diagonal {:.1e})",
        diag.weights, diag.max_off_diagonal
    );
    Ok(())
}
