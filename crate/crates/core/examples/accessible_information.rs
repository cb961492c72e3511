//! Eve's best single measurement on her conditional states, found
//! numerically and compared with the closed forms.

use bellkey::attack::{eve_conditional_states, AttackParams, AttackVariant};
use bellkey::secrecy::{accessible_info, info_ae, info_be};

fn main() -> bellkey::Result<()> {
    println!("alpha  beta   I(A:E) search  closed     I(B:E) search  closed");
    for (alpha, beta) in [(0.1, 0.2), (0.3, 0.5), (0.7, 1.2), (1.4, 0.9)] {
        let p = AttackParams::new(alpha, beta)?;
        let ens = eve_conditional_states(&p, AttackVariant::OneQubit);
        println!(
            "{alpha:.2}   {beta:.2}   {:.8}     {:.8}  {:.8}     {:.8}",
            accessible_info(&ens.alice_task(), 0),
            info_ae(&p),
            accessible_info(&ens.bob_task(), 0),
            info_be(&p)
        );
    }

    // with a second qubit Eve's states live in four dimensions
    let p = AttackParams::new(0.3, 0.5)?;
    let ens = eve_conditional_states(&p, AttackVariant::Symmetric);
    println!(
        "\nsymmetric attack at (0.3, 0.5): I(A:E)={:.8}",
        accessible_info(&ens.alice_task(), 0)
    );
    Ok(())
}
