//! N-qubit full-correlation Bell functionals with two settings per site.
//!
//! Correlations are collected in a [`CorrelationTensor`] `E(k)`, one value
//! per setting choice `k ∈ {0,1}^N` (party 0 is the most significant bit).
//! Two functionals are evaluated on it:
//!
//! * the Mermin–Klyshko polynomial, normalized so local models reach 1 and
//!   the GHZ state reaches `2^{(N-1)/2}`;
//! * the maximum over the whole WWZB family of sign-function inequalities,
//!   `2^{-N} Σ_s |Σ_k (-1)^{s·k} E(k)|`.

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numeric::{
    bloch_operator, tensor_product, validate_density, CMatrix, PureState, C64, ZERO,
};
use crate::optimize::{unit_vector, MultiStart};

const UNIT_TOL: f64 = 1e-12;
const MAX_PARTIES: usize = 6;
/// Largest party count for the brute-force WWZB scan (2^16 sign functions).
pub const EXHAUSTIVE_MAX_PARTIES: usize = 4;

/// Two Bloch directions per party.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PartySettings {
    settings: Vec<[[f64; 3]; 2]>,
}

impl PartySettings {
    pub fn new(settings: Vec<[[f64; 3]; 2]>) -> Result<Self> {
        if settings.is_empty() {
            return Err(Error::TooFewParties(0));
        }
        for v in settings.iter().flatten() {
            let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
            if (norm - 1.0).abs() > UNIT_TOL {
                return Err(Error::NonUnitVector(norm));
            }
        }
        Ok(Self { settings })
    }

    /// Same two settings for every party.
    pub fn uniform(parties: usize, first: [f64; 3], second: [f64; 3]) -> Result<Self> {
        Self::new(vec![[first, second]; parties])
    }

    /// Four angles per party: polar and azimuthal angle of each setting.
    pub fn from_angles(x: &[f64]) -> Self {
        assert!(!x.is_empty() && x.len().is_multiple_of(4));
        Self {
            settings: x
                .chunks(4)
                .map(|c| [unit_vector(c[0], c[1]), unit_vector(c[2], c[3])])
                .collect(),
        }
    }

    pub fn parties(&self) -> usize {
        self.settings.len()
    }

    pub fn setting(&self, party: usize, choice: usize) -> &[f64; 3] {
        &self.settings[party][choice]
    }
}

/// `E(k) = <⊗_j a_j^{k_j}·σ>` for every `k ∈ {0,1}^N`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorrelationTensor {
    parties: usize,
    values: Vec<f64>,
}

impl CorrelationTensor {
    pub fn new(parties: usize, values: Vec<f64>) -> Result<Self> {
        if parties == 0 || parties > MAX_PARTIES || values.len() != 1 << parties {
            return Err(Error::DimensionMismatch(format!(
                "{parties} parties need {} correlations, got {}",
                1usize.checked_shl(parties as u32).unwrap_or(0),
                values.len()
            )));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(Self { parties, values })
    }

    pub fn parties(&self) -> usize {
        self.parties
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Correlation for the setting choice encoded big-endian in `k`.
    pub fn get(&self, k: usize) -> f64 {
        self.values[k]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BellFunctional {
    #[serde(rename = "mk")]
    MerminKlyshko,
    Wwzb,
}

impl BellFunctional {
    pub fn evaluate(&self, tensor: &CorrelationTensor) -> Result<f64> {
        match self {
            Self::MerminKlyshko => mermin_klyshko_value(tensor),
            Self::Wwzb => Ok(wwzb_max_fixed_settings(tensor)),
        }
    }
}

impl fmt::Display for BellFunctional {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::MerminKlyshko => "mk",
            Self::Wwzb => "wwzb",
        })
    }
}

impl FromStr for BellFunctional {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "mk" => Ok(Self::MerminKlyshko),
            "wwzb" => Ok(Self::Wwzb),
            other => Err(format!(
                "unknown functional '{other}' (expected mk or wwzb)"
            )),
        }
    }
}

/// `(|0…0> + |1…1>)/√2`.
pub fn ghz_state(parties: usize) -> PureState {
    assert!(
        (1..=MAX_PARTIES).contains(&parties),
        "GHZ state needs 1..=6 qubits"
    );
    let s = C64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    let mut amps = vec![ZERO; 1 << parties];
    amps[0] = s;
    amps[(1 << parties) - 1] = s;
    PureState::new(parties, amps).expect("GHZ state is normalized")
}

fn parties_of(rho: &CMatrix) -> Result<usize> {
    let dim = rho.rows();
    if !dim.is_power_of_two() || !(2..=1 << MAX_PARTIES).contains(&dim) {
        return Err(Error::DimensionMismatch(format!(
            "expected a 2^N x 2^N density matrix with 1 <= N <= {MAX_PARTIES}, got {dim}x{}",
            rho.cols()
        )));
    }
    Ok(dim.trailing_zeros() as usize)
}

/// Correlation tensor from the full operators `⊗_j a_j^{k_j}·σ`.
pub fn correlation_tensor(rho: &CMatrix, settings: &PartySettings) -> Result<CorrelationTensor> {
    let n = parties_of(rho)?;
    if settings.parties() != n {
        return Err(Error::DimensionMismatch(format!(
            "state has {n} qubits but settings cover {} parties",
            settings.parties()
        )));
    }
    let rho = validate_density(rho, 1 << n)?;
    let ops: Vec<[CMatrix; 2]> = (0..n)
        .map(|j| [0, 1].map(|c| bloch_operator(settings.setting(j, c))))
        .collect();
    let values = (0..1usize << n)
        .map(|k| {
            let op = (0..n)
                .map(|j| &ops[j][(k >> (n - 1 - j)) & 1])
                .fold(None::<CMatrix>, |acc, o| {
                    Some(acc.map_or_else(|| o.clone(), |a| tensor_product(&a, o)))
                })
                .expect("at least one party");
            op.matmul(&rho).trace().re
        })
        .collect();
    CorrelationTensor::new(n, values)
}

/// All `3^N` Pauli correlations `T_m = Tr(ρ σ_{m_1} ⊗ … ⊗ σ_{m_N})`; party
/// `N-1` is the least significant trit.
#[derive(Debug, Clone, PartialEq)]
pub struct PauliCorrelations {
    parties: usize,
    values: Vec<f64>,
}

impl PauliCorrelations {
    pub fn from_density(rho: &CMatrix) -> Result<Self> {
        let n = parties_of(rho)?;
        let rho = validate_density(rho, 1 << n)?;
        let count = 3usize.pow(n as u32);
        let values = (0..count)
            .map(|m| {
                let (flip, phase_of) = pauli_string(m, n);
                (0..1usize << n)
                    .map(|c| rho[(c, c ^ flip)] * phase_of(c))
                    .sum::<C64>()
                    .re
            })
            .collect();
        Ok(Self { parties: n, values })
    }

    pub fn from_pure(state: &PureState) -> Result<Self> {
        Self::from_density(&state.density())
    }

    pub fn parties(&self) -> usize {
        self.parties
    }

    /// Contracts the Pauli correlations with the settings, party by party.
    pub fn tensor(&self, settings: &PartySettings) -> CorrelationTensor {
        let n = self.parties;
        assert_eq!(settings.parties(), n);
        // layout: prefix trits (major) × suffix setting bits (minor)
        let mut cur = self.values.clone();
        let mut suffix = 1usize;
        for party in (0..n).rev() {
            let prefix = cur.len() / (3 * suffix);
            let mut next = vec![0.0; prefix * 2 * suffix];
            for i in 0..prefix {
                for bit in 0..2 {
                    let v = settings.setting(party, bit);
                    for s in 0..suffix {
                        let mut acc = 0.0;
                        for (m, vm) in v.iter().enumerate() {
                            acc += cur[(3 * i + m) * suffix + s] * vm;
                        }
                        next[i * 2 * suffix + bit * suffix + s] = acc;
                    }
                }
            }
            cur = next;
            suffix *= 2;
        }
        CorrelationTensor {
            parties: n,
            values: cur,
        }
    }
}

/// Bit-flip mask and phase function of the Pauli string with trit index `m`:
/// `P|c> = phase(c) |c ^ flip>`.
fn pauli_string(m: usize, n: usize) -> (usize, impl Fn(usize) -> C64) {
    let mut axes = vec![0usize; n];
    let mut rest = m;
    for slot in axes.iter_mut().rev() {
        *slot = rest % 3;
        rest /= 3;
    }
    let flip = axes
        .iter()
        .enumerate()
        .filter(|(_, &a)| a != 2)
        .fold(0, |acc, (j, _)| acc | 1 << (n - 1 - j));
    let phase = move |c: usize| {
        axes.iter()
            .enumerate()
            .fold(C64::new(1.0, 0.0), |acc, (j, &a)| {
                let bit = (c >> (n - 1 - j)) & 1;
                match (a, bit) {
                    (0, _) => acc,
                    (1, 0) => acc * C64::new(0.0, 1.0),
                    (1, _) => acc * C64::new(0.0, -1.0),
                    (_, 0) => acc,
                    _ => -acc,
                }
            })
    };
    (flip, phase)
}

/// Coefficients `c(k)` of the Mermin–Klyshko polynomial over setting
/// choices, from the recursion
/// `M_n = ½ M_{n-1}(a_n + a_n') + ½ M'_{n-1}(a_n - a_n')`, where `M'` swaps
/// primed and unprimed settings.
pub fn mermin_klyshko_coefficients(parties: usize) -> Result<Vec<f64>> {
    if parties < 2 {
        return Err(Error::TooFewParties(parties));
    }
    let mut m = vec![1.0, 0.0];
    let mut mp = vec![0.0, 1.0];
    for _ in 1..parties {
        let len = m.len() * 2;
        let mut next = vec![0.0; len];
        let mut next_p = vec![0.0; len];
        for k in 0..m.len() {
            next[2 * k] = 0.5 * (m[k] + mp[k]);
            next[2 * k + 1] = 0.5 * (m[k] - mp[k]);
            next_p[2 * k] = 0.5 * (mp[k] - m[k]);
            next_p[2 * k + 1] = 0.5 * (mp[k] + m[k]);
        }
        m = next;
        mp = next_p;
    }
    Ok(m)
}

pub fn mermin_klyshko_value(tensor: &CorrelationTensor) -> Result<f64> {
    let coeffs = mermin_klyshko_coefficients(tensor.parties)?;
    Ok(coeffs.iter().zip(&tensor.values).map(|(c, e)| c * e).sum())
}

/// Maximum of the WWZB family for fixed settings, via an in-place
/// Walsh–Hadamard transform of `E`.
pub fn wwzb_max_fixed_settings(tensor: &CorrelationTensor) -> f64 {
    let mut w = tensor.values.clone();
    let mut h = 1;
    while h < w.len() {
        for block in (0..w.len()).step_by(2 * h) {
            for i in block..block + h {
                let (x, y) = (w[i], w[i + h]);
                w[i] = x + y;
                w[i + h] = x - y;
            }
        }
        h *= 2;
    }
    w.iter().map(|v| v.abs()).sum::<f64>() / tensor.values.len() as f64
}

/// Brute-force maximum of `2^{-N} Σ_s S(s) Σ_k (-1)^{s·k} E(k)` over all
/// `2^{2^N}` sign functions `S`.
pub fn wwzb_exhaustive(tensor: &CorrelationTensor) -> Result<f64> {
    let n = tensor.parties;
    if n > EXHAUSTIVE_MAX_PARTIES {
        return Err(Error::TooManyParties(n));
    }
    let d = 1usize << n;
    let parity = |x: usize| {
        if x.count_ones().is_multiple_of(2) {
            1.0
        } else {
            -1.0
        }
    };
    let mut best = f64::NEG_INFINITY;
    for signs in 0u64..1 << d {
        let mut value = 0.0;
        for k in 0..d {
            let mut coeff = 0.0;
            for s in 0..d {
                let sign = if signs >> s & 1 == 1 { -1.0 } else { 1.0 };
                coeff += sign * parity(s & k);
            }
            value += coeff * tensor.values[k];
        }
        best = best.max(value / d as f64);
    }
    Ok(best)
}

/// Seeded search over the `4N` setting angles for the largest value of a
/// functional.
pub fn optimize_settings(
    correlations: &PauliCorrelations,
    functional: BellFunctional,
    seed: u64,
) -> Result<(PartySettings, f64)> {
    let n = correlations.parties();
    if n < 2 {
        return Err(Error::TooFewParties(n));
    }
    let search = MultiStart::default();
    let f = |x: &[f64]| {
        let tensor = correlations.tensor(&PartySettings::from_angles(x));
        match functional {
            BellFunctional::MerminKlyshko => {
                mermin_klyshko_value(&tensor).expect("n >= 2 checked above")
            }
            BellFunctional::Wwzb => wwzb_max_fixed_settings(&tensor),
        }
    };
    let opt = search.maximize(&f, seed, |rng| {
        (0..4 * n)
            .map(|i| {
                if i % 2 == 0 {
                    rng.gen_range(0.0..std::f64::consts::PI)
                } else {
                    rng.gen_range(0.0..std::f64::consts::TAU)
                }
            })
            .collect()
    });
    Ok((PartySettings::from_angles(&opt.point), opt.value))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum DistillabilityClass {
    NoConclusion,
    SomeDistillable,
    FullDistillability,
}

impl fmt::Display for DistillabilityClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::NoConclusion => "NoConclusion",
            Self::SomeDistillable => "SomeDistillable",
            Self::FullDistillability => "FullDistillability",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DistillabilityDegree {
    pub class: DistillabilityClass,
    pub violation: f64,
    pub parties: usize,
}

/// Quantum maximum `2^{(N-1)/2}` of the normalized functionals.
pub fn quantum_maximum(parties: usize) -> f64 {
    2f64.powf((parties as f64 - 1.0) / 2.0)
}

/// Violations above `2^{(N-2)/2}` certify full distillability, violations
/// above 1 some distillable entanglement.
pub fn full_distillability_threshold(parties: usize) -> f64 {
    2f64.powf((parties as f64 - 2.0) / 2.0)
}

/// Slack at the class boundaries so optimizer round-off on a local state
/// does not read as a violation.
pub const CLASS_TOL: f64 = 1e-9;

pub fn distillability_classify(parties: usize, violation: f64) -> Result<DistillabilityDegree> {
    if parties < 2 {
        return Err(Error::TooFewParties(parties));
    }
    let max = quantum_maximum(parties);
    if !violation.is_finite() || violation > max + CLASS_TOL {
        return Err(Error::ViolationAboveMaximum {
            value: violation,
            max,
            parties,
        });
    }
    let class = if violation <= 1.0 + CLASS_TOL {
        DistillabilityClass::NoConclusion
    } else if violation <= full_distillability_threshold(parties) + CLASS_TOL {
        DistillabilityClass::SomeDistillable
    } else {
        DistillabilityClass::FullDistillability
    };
    Ok(DistillabilityDegree {
        class,
        violation,
        parties,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    const X: [f64; 3] = [1.0, 0.0, 0.0];
    const Y: [f64; 3] = [0.0, 1.0, 0.0];
    const Z: [f64; 3] = [0.0, 0.0, 1.0];

    #[test]
    fn ghz_two_is_phi_plus() {
        let g = ghz_state(2);
        let s = std::f64::consts::FRAC_1_SQRT_2;
        assert_eq!(
            g.amplitudes(),
            &[C64::new(s, 0.0), ZERO, ZERO, C64::new(s, 0.0)]
        );
        assert!((ghz_state(3).norm_sqr() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn ghz_marginals_are_maximally_mixed() {
        let g = ghz_state(3);
        for keep in 0..3 {
            let r = crate::numeric::partial_trace(&g.density(), &[2, 2, 2], &[keep]).unwrap();
            assert!(r.max_abs_diff(&CMatrix::identity(2).scale(C64::new(0.5, 0.0))) < 1e-15);
        }
    }

    #[test]
    fn simple_correlations() {
        let xx = PartySettings::uniform(2, X, X).unwrap();
        let t = correlation_tensor(&ghz_state(2).density(), &xx).unwrap();
        assert!((t.get(0) - 1.0).abs() < 1e-15);

        let zz = PartySettings::uniform(3, Z, Z).unwrap();
        let t = correlation_tensor(&PureState::basis(3, 0).density(), &zz).unwrap();
        assert!((t.get(0) - 1.0).abs() < 1e-15);
        assert!(correlation_tensor(&PureState::basis(2, 0).density(), &zz).is_err());
    }

    #[test]
    fn mk_coefficients_reproduce_chsh_and_mermin() {
        assert_eq!(
            mermin_klyshko_coefficients(2).unwrap(),
            vec![0.5, 0.5, 0.5, -0.5]
        );
        assert_eq!(
            mermin_klyshko_coefficients(3).unwrap(),
            vec![0.0, 0.5, 0.5, 0.0, 0.5, 0.0, 0.0, -0.5]
        );
        assert!(mermin_klyshko_coefficients(1).is_err());
    }

    #[test]
    fn ghz3_reaches_two_with_xy_settings() {
        // <σ_φ1 σ_φ2 σ_φ3> = cos(φ1+φ2+φ3) on GHZ; a = y, a' = -x
        let settings = PartySettings::uniform(3, Y, [-1.0, 0.0, 0.0]).unwrap();
        let t = correlation_tensor(&ghz_state(3).density(), &settings).unwrap();
        assert!((mermin_klyshko_value(&t).unwrap() - 2.0).abs() < 1e-14);
        assert!((wwzb_max_fixed_settings(&t) - 2.0).abs() < 1e-14);
    }

    #[test]
    fn wwzb_of_zero_tensor() {
        let t = CorrelationTensor::new(3, vec![0.0; 8]).unwrap();
        assert_eq!(wwzb_max_fixed_settings(&t), 0.0);
        assert_eq!(wwzb_exhaustive(&t).unwrap(), 0.0);
        let big = CorrelationTensor::new(5, vec![0.0; 32]).unwrap();
        assert_eq!(wwzb_exhaustive(&big), Err(Error::TooManyParties(5)));
    }

    #[test]
    fn classifier_bands() {
        let c = |n, v| distillability_classify(n, v).unwrap().class;
        assert_eq!(c(3, 2.0), DistillabilityClass::FullDistillability);
        assert_eq!(c(3, 1.0), DistillabilityClass::NoConclusion);
        assert_eq!(c(3, 1.2), DistillabilityClass::SomeDistillable);
        assert_eq!(c(3, 2f64.sqrt()), DistillabilityClass::SomeDistillable);
        assert!(distillability_classify(3, 2.1).is_err());
        assert!(distillability_classify(1, 0.5).is_err());
    }

    #[test]
    fn functional_parsing() {
        assert_eq!(
            "mk".parse::<BellFunctional>(),
            Ok(BellFunctional::MerminKlyshko)
        );
        assert_eq!("wwzb".parse::<BellFunctional>(), Ok(BellFunctional::Wwzb));
        assert!("uffink".parse::<BellFunctional>().is_err());
    }
}
