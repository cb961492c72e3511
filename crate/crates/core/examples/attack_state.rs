//! Builds the eavesdropper's entangling attack and prints what Eve learns
//! from each pair of x-basis outcomes.
//!
//!     cargo run --example attack_state -- 0.3 0.5

use bellkey::attack::{
    eve_conditional_states, one_qubit_attack_state, AttackParams, AttackVariant,
};

fn main() -> bellkey::Result<()> {
    let args: Vec<f64> = std::env::args()
        .skip(1)
        .filter_map(|a| a.parse().ok())
        .collect();
    let (alpha, beta) = match args[..] {
        [a, b] => (a, b),
        _ => (0.3, 0.5),
    };
    let params = AttackParams::new(alpha, beta)?;

    let psi = one_qubit_attack_state(&params);
    println!("|psi> over |a b e>, alpha={alpha}, beta={beta}");
    for (k, amp) in psi.amplitudes().iter().enumerate() {
        if amp.norm() > 0.0 {
            println!("  |{k:03b}>  {:+.6}", amp.re);
        }
    }

    let ens = eve_conditional_states(&params, AttackVariant::OneQubit);
    println!("\noutcome  p(ij)     Eve's unnormalized state");
    for (i, a) in ["+", "-"].iter().enumerate() {
        for (j, b) in ["+", "-"].iter().enumerate() {
            let e = ens.state(i, j);
            println!(
                "  {a}{b}     {:.6}  ({:+.6}, {:+.6})",
                ens.probability(i, j),
                e[0].re,
                e[1].re
            );
        }
    }
    Ok(())
}
