//! Largest CHSH value of a two-qubit state: the singular-value formula
//! next to a direct search over measurement directions.

use std::f64::consts::FRAC_PI_8;

use bellkey::attack::{alice_bob_state, AttackParams, AttackVariant};
use bellkey::chsh::{chsh_max, chsh_optimize, correlation_matrix};

fn main() -> bellkey::Result<()> {
    for (alpha, beta) in [
        (0.0, 0.0),
        (FRAC_PI_8, FRAC_PI_8),
        (FRAC_PI_8, 3.0 * FRAC_PI_8),
    ] {
        let params = AttackParams::new(alpha, beta)?;
        let r = correlation_matrix(&alice_bob_state(&params, AttackVariant::OneQubit))?;
        let closed = chsh_max(&r).value;
        let searched = chsh_optimize(&r, 1);
        let s = searched.settings.expect("optimizer reports settings");
        println!(
            "alpha={alpha:.4} beta={beta:.4}  B={closed:.6}  search={:.6}",
            searched.value
        );
        println!(
            "  a ={:?}\n  b ={:?}",
            s.a.map(|x| (x * 1e4).round() / 1e4),
            s.b.map(|x| (x * 1e4).round() / 1e4)
        );
    }
    Ok(())
}
