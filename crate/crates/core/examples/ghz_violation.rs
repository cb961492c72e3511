//! Optimized Mermin-Klyshko and WWZB values of GHZ states, with the
//! distillability verdict each value certifies.

use bellkey::multiparty::{
    distillability_classify, ghz_state, optimize_settings, quantum_maximum, BellFunctional,
    PauliCorrelations,
};

fn main() -> bellkey::Result<()> {
    for n in 2..=5 {
        let pauli = PauliCorrelations::from_pure(&ghz_state(n))?;
        for f in [BellFunctional::MerminKlyshko, BellFunctional::Wwzb] {
            let (_, value) = optimize_settings(&pauli, f, 0)?;
            let degree = distillability_classify(n, value)?;
            println!(
                "N={n} {f:<4} value={value:.6} max={:.6} {}",
                quantum_maximum(n),
                degree.class
            );
        }
    }
    Ok(())
}
