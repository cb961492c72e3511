//! Scans the attack parameter square, writes the CSV and draws a coarse
//! map of where Alice and Bob violate CHSH and where they can distill a key.
//!
//!     cargo run --release --example region_scan -- scan.csv

use bellkey::attack::AttackVariant;
use bellkey::harness::{inconsistent_count, scan, write_scan_file};

fn main() -> std::io::Result<()> {
    let n = 31;
    let records = scan(n, AttackVariant::OneQubit);
    if let Some(path) = std::env::args().nth(1) {
        write_scan_file(&records, path.as_ref())?;
        println!("wrote {} rows to {path}", records.len());
    }
    println!(
        "beta up, alpha right; '#' violation and key, '.' neither, '?' boundary, '!' disagreement"
    );
    for j in (0..n).rev() {
        let row: String = (0..n)
            .map(|i| {
                let r = &records[i * n + j];
                match (r.consistent, r.violates, (r.chsh - 1.0).abs() < 1e-9) {
                    (0, _, _) => '!',
                    (_, _, true) => '?',
                    (_, 1, _) => '#',
                    _ => '.',
                }
            })
            .collect();
        println!("  {row}");
    }
    println!("inconsistent points: {}", inconsistent_count(&records));
    Ok(())
}
