//! Batch runs behind the `bellkey` binary: grid scans with CSV output,
//! multiparty evaluation of state files, and the cross-oracle verification
//! suites.

use std::f64::consts::FRAC_PI_2;
use std::fmt::Write as _;
use std::io::{self, Write};
use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::attack::{
    alice_bob_state, eve_conditional_states, one_qubit_attack_state,
    one_qubit_attack_state_via_isometry, AttackParams, AttackVariant,
};
use crate::chsh::{
    attack_correlation_matrix, chsh_max, chsh_optimize, correlation_matrix, BOUNDARY_BAND,
};
use crate::entanglement::ppt_min_eigenvalue;
use crate::error::{Error, Result};
use crate::multiparty::{
    distillability_classify, ghz_state, optimize_settings, wwzb_exhaustive,
    wwzb_max_fixed_settings, BellFunctional, CorrelationTensor, DistillabilityDegree,
    PartySettings, PauliCorrelations,
};
use crate::numeric::{CMatrix, PureState, C64};
use crate::secrecy::{
    accessible_info, info_ae, info_be, security_report, BinaryEnsemble, SecurityReport,
};

pub const CSV_HEADER: &str =
    "alpha,beta,chsh,iab,iae,ibe,ppt_min,ck_direct,ck_reverse,violates,consistent";

/// Rounds to 9 significant digits.
pub fn round_sig9(x: f64) -> f64 {
    let r: f64 = format!("{x:.8e}").parse().expect("formatted float parses");
    if r == 0.0 {
        0.0
    } else {
        r
    }
}

/// Shortest decimal that round-trips the 9-significant-digit rounding of `x`.
pub fn format_sig9(x: f64) -> String {
    format!("{}", round_sig9(x))
}

/// `i`-th point of an `n`-point uniform grid over `[0, π/2]`.
pub fn grid_angle(i: usize, n: usize) -> f64 {
    if n <= 1 {
        0.0
    } else {
        FRAC_PI_2 * i as f64 / (n - 1) as f64
    }
}

/// One row of a grid scan. Numeric fields are stored already rounded to
/// 9 significant digits and every flag is derived from those stored values,
/// so a row read back from CSV reproduces its own flags.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScanRecord {
    pub alpha: f64,
    pub beta: f64,
    pub chsh: f64,
    pub iab: f64,
    pub iae: f64,
    pub ibe: f64,
    pub ppt_min: f64,
    pub ck_direct: u8,
    pub ck_reverse: u8,
    pub violates: u8,
    pub consistent: u8,
}

impl ScanRecord {
    pub fn new(report: &SecurityReport, ppt_min: f64) -> Self {
        let mut rec = Self {
            alpha: round_sig9(report.params.alpha()),
            beta: round_sig9(report.params.beta()),
            chsh: round_sig9(report.chsh),
            iab: round_sig9(report.info.iab),
            iae: round_sig9(report.info.iae),
            ibe: round_sig9(report.info.ibe),
            ppt_min: round_sig9(ppt_min),
            ck_direct: 0,
            ck_reverse: 0,
            violates: 0,
            consistent: 0,
        };
        let (direct, reverse, violates, consistent) = rec.derived_flags(report.variant);
        rec.ck_direct = direct as u8;
        rec.ck_reverse = reverse as u8;
        rec.violates = violates as u8;
        rec.consistent = consistent as u8;
        rec
    }

    /// `(ck_direct, ck_reverse, violates, consistent)` recomputed from the
    /// numeric fields.
    pub fn derived_flags(&self, variant: AttackVariant) -> (bool, bool, bool, bool) {
        let key = match variant {
            AttackVariant::OneQubit => self.iab > self.iae.max(self.ibe),
            AttackVariant::Symmetric => self.iab > self.iae,
        };
        let in_band = (self.chsh - 1.0).abs() < BOUNDARY_BAND;
        (
            self.iab > self.iae,
            self.iab > self.ibe,
            self.chsh > 1.0 + BOUNDARY_BAND,
            in_band || key == (self.chsh > 1.0),
        )
    }

    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{},{},{}",
            format_sig9(self.alpha),
            format_sig9(self.beta),
            format_sig9(self.chsh),
            format_sig9(self.iab),
            format_sig9(self.iae),
            format_sig9(self.ibe),
            format_sig9(self.ppt_min),
            self.ck_direct,
            self.ck_reverse,
            self.violates,
            self.consistent
        )
    }
}

pub fn scan_point(params: &AttackParams, variant: AttackVariant) -> ScanRecord {
    let report = security_report(params, variant);
    let ppt = ppt_min_eigenvalue(&alice_bob_state(params, variant))
        .expect("attack states are valid density matrices");
    ScanRecord::new(&report, ppt)
}

/// `grid_n × grid_n` scan over `[0, π/2]²`, alpha-major. Rows are computed
/// in parallel and returned in grid order.
pub fn scan(grid_n: usize, variant: AttackVariant) -> Vec<ScanRecord> {
    (0..grid_n * grid_n)
        .into_par_iter()
        .map(|idx| {
            let (i, j) = (idx / grid_n, idx % grid_n);
            let params = AttackParams::new(grid_angle(i, grid_n), grid_angle(j, grid_n))
                .expect("grid angles lie in [0, pi/2]");
            scan_point(&params, variant)
        })
        .collect()
}

pub fn write_csv<W: Write>(records: &[ScanRecord], mut out: W) -> io::Result<()> {
    writeln!(out, "{CSV_HEADER}")?;
    for r in records {
        writeln!(out, "{}", r.csv_row())?;
    }
    out.flush()
}

pub fn inconsistent_count(records: &[ScanRecord]) -> usize {
    records.iter().filter(|r| r.consistent == 0).count()
}

/// Single-point report as `key=value` lines.
pub fn format_report(report: &SecurityReport, ppt_min: f64) -> String {
    let flag = |b: bool| b as u8;
    [
        format!("variant={}", report.variant),
        format!("alpha={:.6}", report.params.alpha()),
        format!("beta={:.6}", report.params.beta()),
        format!("chsh={:.6}", report.chsh),
        format!("iab={:.6}", report.info.iab),
        format!("iae={:.6}", report.info.iae),
        format!("ibe={:.6}", report.info.ibe),
        format!("ppt_min={:.6}", ppt_min),
        format!("ck_holds={}", flag(report.ck_holds)),
        format!("ck_direct={}", flag(report.one_way_direct)),
        format!("ck_reverse={}", flag(report.reverse_ok)),
        format!("violates={}", flag(report.violates())),
        format!("consistent={}", flag(report.equivalence_consistent)),
    ]
    .join("\n")
}

/// JSON state description: amplitudes as `[re, im]` pairs in big-endian
/// basis order, and/or a row-major density matrix. When both are present
/// the density matrix wins.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StateFile {
    pub num_qubits: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub amplitudes: Option<Vec<[f64; 2]>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub density_matrix: Option<Vec<[f64; 2]>>,
}

/// Normalization slack accepted when loading a state file.
pub const STATE_FILE_NORM_TOL: f64 = 1e-9;

impl StateFile {
    pub fn from_pure(state: &PureState) -> Self {
        Self {
            num_qubits: state.num_qubits(),
            amplitudes: Some(state.amplitudes().iter().map(|z| [z.re, z.im]).collect()),
            density_matrix: None,
        }
    }

    pub fn parse(json: &str) -> Result<Self> {
        serde_json::from_str(json).map_err(|e| Error::StateFile(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("state file serializes")
    }

    /// Density matrix described by the file, validated.
    pub fn density(&self) -> Result<CMatrix> {
        let n = self.num_qubits;
        if n == 0 || n > 6 {
            return Err(Error::StateFile(format!(
                "num_qubits must be between 1 and 6, got {n}"
            )));
        }
        let dim = 1usize << n;
        let to_c = |v: &[[f64; 2]]| v.iter().map(|p| C64::new(p[0], p[1])).collect::<Vec<_>>();
        if let Some(rho) = &self.density_matrix {
            let m = CMatrix::new(dim, dim, to_c(rho))?;
            let tr = m.trace().re;
            if (tr - 1.0).abs() > STATE_FILE_NORM_TOL {
                return Err(Error::NotNormalized(tr));
            }
            return crate::numeric::validate_density(&m.scale(C64::new(1.0 / tr, 0.0)), dim);
        }
        if let Some(amps) = &self.amplitudes {
            let state = PureState::with_tolerance(n, to_c(amps), STATE_FILE_NORM_TOL)?;
            return Ok(state.density());
        }
        Err(Error::StateFile(
            "either amplitudes or density_matrix is required".into(),
        ))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MultipartyReport {
    pub parties: usize,
    pub functional: BellFunctional,
    pub value: f64,
    pub degree: DistillabilityDegree,
    pub settings: PartySettings,
    pub seed: u64,
}

pub fn run_multiparty(
    rho: &CMatrix,
    functional: BellFunctional,
    seed: u64,
) -> Result<MultipartyReport> {
    let pauli = PauliCorrelations::from_density(rho)?;
    let (settings, value) = optimize_settings(&pauli, functional, seed)?;
    let degree = distillability_classify(pauli.parties(), value)?;
    Ok(MultipartyReport {
        parties: pauli.parties(),
        functional,
        value,
        degree,
        settings,
        seed,
    })
}

pub fn run_multiparty_ghz(
    parties: usize,
    functional: BellFunctional,
    seed: u64,
) -> Result<MultipartyReport> {
    if !(2..=6).contains(&parties) {
        return Err(Error::TooFewParties(parties));
    }
    run_multiparty(&ghz_state(parties).density(), functional, seed)
}

pub fn format_multiparty(report: &MultipartyReport) -> String {
    format!(
        "parties={}\nfunctional={}\nvalue={:.6}\nquantum_max={:.6}\ndegree={}",
        report.parties,
        report.functional,
        report.value,
        crate::multiparty::quantum_maximum(report.parties),
        report.degree.class
    )
}

/// Random density matrix `G G† / Tr(G G†)` with uniform complex entries.
pub fn random_density(rng: &mut impl Rng, dim: usize) -> CMatrix {
    let data = (0..dim * dim)
        .map(|_| C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
        .collect();
    let g = CMatrix::new(dim, dim, data).expect("finite entries");
    let gg = g.matmul(&g.adjoint());
    let tr = gg.trace().re;
    gg.scale(C64::new(1.0 / tr, 0.0)).hermitian_part()
}

pub fn random_params(rng: &mut impl Rng) -> AttackParams {
    AttackParams::new(
        rng.gen_range(0.0..=FRAC_PI_2),
        rng.gen_range(0.0..=FRAC_PI_2),
    )
    .expect("sampled inside range")
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckOutcome {
    pub name: &'static str,
    pub passed: bool,
    /// Largest observed deviation (or mismatch count) and its tolerance.
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerifyReport {
    pub seed: u64,
    pub checks: Vec<CheckOutcome>,
}

impl VerifyReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn verdicts(&self) -> Vec<(&'static str, bool)> {
        self.checks.iter().map(|c| (c.name, c.passed)).collect()
    }

    pub fn table(&self) -> String {
        let mut s = String::new();
        for c in &self.checks {
            let _ = writeln!(
                s,
                "{:<4} {:<54} {}",
                if c.passed { "PASS" } else { "FAIL" },
                c.name,
                c.detail
            );
        }
        let passed = self.checks.iter().filter(|c| c.passed).count();
        let _ = write!(
            s,
            "{passed}/{} checks passed (seed {})",
            self.checks.len(),
            self.seed
        );
        s
    }
}

fn deviation_check(name: &'static str, worst: f64, tol: f64) -> CheckOutcome {
    CheckOutcome {
        name,
        passed: worst < tol,
        detail: format!("max deviation {worst:.3e} (tol {tol:.0e})"),
    }
}

fn mismatch_check(name: &'static str, mismatches: usize, total: usize) -> CheckOutcome {
    CheckOutcome {
        name,
        passed: mismatches == 0,
        detail: format!("{mismatches} of {total} points disagree"),
    }
}

/// Runs every closed-form-versus-oracle suite. Sample points and optimizer
/// seeds are derived from `seed`.
pub fn verify(seed: u64) -> VerifyReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut checks = Vec::new();

    let params: Vec<AttackParams> = (0..20).map(|_| random_params(&mut rng)).collect();

    let worst = params
        .iter()
        .map(|p| {
            let direct = one_qubit_attack_state(p);
            let via = one_qubit_attack_state_via_isometry(p);
            direct
                .amplitudes()
                .iter()
                .zip(via.amplitudes())
                .map(|(a, b)| (a - b).norm())
                .fold(0.0, f64::max)
        })
        .fold(0.0, f64::max);
    checks.push(deviation_check(
        "attack state: isometry route vs normal form",
        worst,
        1e-14,
    ));

    let worst = params
        .iter()
        .map(|p| {
            let numeric = correlation_matrix(&alice_bob_state(p, AttackVariant::OneQubit))
                .expect("valid state");
            numeric.max_abs_diff(&attack_correlation_matrix(p))
        })
        .fold(0.0, f64::max);
    checks.push(deviation_check(
        "correlation matrix: partial trace vs closed form",
        worst,
        1e-12,
    ));

    let worst = params
        .iter()
        .enumerate()
        .map(|(i, p)| {
            let r = attack_correlation_matrix(p);
            (chsh_max(&r).value - chsh_optimize(&r, seed ^ i as u64).value).abs()
        })
        .fold(0.0, f64::max);
    checks.push(deviation_check(
        "CHSH: Horodecki form vs optimizer (attacks)",
        worst,
        1e-6,
    ));

    let worst = (0..20)
        .map(|i| {
            let r = correlation_matrix(&random_density(&mut rng, 4)).expect("valid state");
            (chsh_max(&r).value - chsh_optimize(&r, seed ^ (100 + i)).value).abs()
        })
        .fold(0.0, f64::max);
    checks.push(deviation_check(
        "CHSH: Horodecki form vs optimizer (random states)",
        worst,
        1e-6,
    ));

    let info_points = &params[..8];
    let (mut worst_ae, mut worst_be) = (0.0f64, 0.0f64);
    for (i, p) in info_points.iter().enumerate() {
        let ens = eve_conditional_states(p, AttackVariant::OneQubit);
        worst_ae = worst_ae
            .max((accessible_info(&ens.alice_task(), seed ^ (200 + i as u64)) - info_ae(p)).abs());
        worst_be = worst_be
            .max((accessible_info(&ens.bob_task(), seed ^ (300 + i as u64)) - info_be(p)).abs());
    }
    checks.push(deviation_check(
        "I(A:E): closed form vs accessible information",
        worst_ae,
        1e-6,
    ));
    checks.push(deviation_check(
        "I(B:E): closed form vs accessible information",
        worst_be,
        1e-6,
    ));

    let mut worst = 0.0f64;
    for (i, p) in params[..3].iter().enumerate() {
        let ens = eve_conditional_states(p, AttackVariant::Symmetric);
        let two = accessible_info(&ens.alice_task(), seed ^ (400 + i as u64));
        let first = accessible_info(
            &BinaryEnsemble::new(ens.first_qubit_states()).expect("traces sum to one"),
            seed ^ (500 + i as u64),
        );
        let bob = accessible_info(&ens.bob_task(), seed ^ (600 + i as u64));
        worst = worst
            .max((two - first).abs())
            .max((bob - two).abs())
            .max((two - info_ae(p)).abs());
    }
    checks.push(deviation_check(
        "symmetric attack: I(A:E) = I(B:E) = first-qubit info",
        worst,
        1e-6,
    ));

    for variant in [AttackVariant::OneQubit, AttackVariant::Symmetric] {
        let n = 61;
        let bad = (0..n * n)
            .filter(|idx| {
                let p = AttackParams::new(grid_angle(idx / n, n), grid_angle(idx % n, n))
                    .expect("grid angles in range");
                !security_report(&p, variant).equivalence_consistent
            })
            .count();
        let name = match variant {
            AttackVariant::OneQubit => "equivalence B > 1 <=> I(A:B) > max(I(A:E), I(B:E))",
            AttackVariant::Symmetric => "equivalence B > 1 <=> I(A:B) > I(A:E) = I(B:E)",
        };
        checks.push(mismatch_check(name, bad, n * n));
    }

    let mut worst = 0.0f64;
    for parties in [3usize, 4] {
        let count = if parties == 3 { 20 } else { 2 };
        for _ in 0..count {
            let values = (0..1 << parties)
                .map(|_| rng.gen_range(-1.0..1.0))
                .collect();
            let t = CorrelationTensor::new(parties, values).expect("valid tensor");
            let brute = wwzb_exhaustive(&t).expect("N <= 4");
            worst = worst.max((brute - wwzb_max_fixed_settings(&t)).abs());
        }
    }
    checks.push(deviation_check(
        "WWZB: Fourier closed form vs exhaustive scan",
        worst,
        1e-12,
    ));

    let ghz = run_multiparty_ghz(3, BellFunctional::MerminKlyshko, seed)
        .map(|r| (r.value - 2.0).abs())
        .unwrap_or(f64::INFINITY);
    checks.push(deviation_check(
        "GHZ3 optimized Mermin-Klyshko value = 2",
        ghz,
        1e-6,
    ));

    VerifyReport { seed, checks }
}

/// Writes a scan to `path`, mapping failures to [`io::Error`].
pub fn write_scan_file(records: &[ScanRecord], path: &Path) -> io::Result<()> {
    let file = std::fs::File::create(path)?;
    write_csv(records, io::BufWriter::new(file))
}
