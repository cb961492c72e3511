//! Mutual informations, the one-way key conditions and the CHSH value at a
//! single attack point, for both attack variants.
//!
//!     cargo run --example security_report -- 0.2 0.4

use bellkey::attack::{AttackParams, AttackVariant};
use bellkey::secrecy::security_report;

fn main() -> bellkey::Result<()> {
    let args: Vec<f64> = std::env::args()
        .skip(1)
        .filter_map(|a| a.parse().ok())
        .collect();
    let params = match args[..] {
        [a, b] => AttackParams::new(a, b)?,
        _ => AttackParams::new(0.2, 0.4)?,
    };
    for variant in [AttackVariant::OneQubit, AttackVariant::Symmetric] {
        let r = security_report(&params, variant);
        println!("{variant}");
        println!(
            "  I(A:B)={:.6}  I(A:E)={:.6}  I(B:E)={:.6}",
            r.info.iab, r.info.iae, r.info.ibe
        );
        println!(
            "  CHSH={:.6}  violates={}  key={}  agree={}",
            r.chsh,
            r.violates(),
            r.key_condition(),
            r.equivalence_consistent
        );
    }
    Ok(())
}
