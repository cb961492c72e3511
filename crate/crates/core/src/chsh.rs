//! CHSH violation of two-qubit states, normalized so that local hidden
//! variables reach at most 1 and quantum mechanics at most √2.

use std::f64::consts::{FRAC_PI_4, PI, TAU};

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::attack::AttackParams;
use crate::error::{Error, Result};
use crate::numeric::{pauli, singular_values, tensor_product, validate_density, CMatrix, Mat3};
use crate::optimize::{unit_vector, MultiStart};

/// Band around `B = 1` inside which violation verdicts are not asserted.
pub const BOUNDARY_BAND: f64 = 1e-9;
const UNIT_TOL: f64 = 1e-12;

/// `R_ij = Tr(σ_i ⊗ σ_j ρ)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CorrelationMatrix(pub Mat3);

impl CorrelationMatrix {
    pub fn diagonal(d: [f64; 3]) -> Self {
        let mut m = [[0.0; 3]; 3];
        for i in 0..3 {
            m[i][i] = d[i];
        }
        Self(m)
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.0[i][j]
    }

    /// `aᵀ R b`.
    pub fn correlation(&self, a: &[f64; 3], b: &[f64; 3]) -> f64 {
        a.iter()
            .zip(&self.0)
            .map(|(ai, row)| ai * row.iter().zip(b).map(|(r, bj)| r * bj).sum::<f64>())
            .sum()
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        let mut worst = 0.0f64;
        for i in 0..3 {
            for j in 0..3 {
                worst = worst.max((self.0[i][j] - other.0[i][j]).abs());
            }
        }
        worst
    }
}

/// Bloch directions of Alice's (`a`, `a2`) and Bob's (`b`, `b2`) settings.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChshSettings {
    pub a: [f64; 3],
    pub a2: [f64; 3],
    pub b: [f64; 3],
    pub b2: [f64; 3],
}

impl ChshSettings {
    pub fn new(a: [f64; 3], a2: [f64; 3], b: [f64; 3], b2: [f64; 3]) -> Result<Self> {
        for v in [&a, &a2, &b, &b2] {
            let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
            if (norm - 1.0).abs() > UNIT_TOL {
                return Err(Error::NonUnitVector(norm));
            }
        }
        Ok(Self { a, a2, b, b2 })
    }

    /// Settings from eight polar/azimuthal angles.
    pub fn from_angles(x: &[f64]) -> Self {
        assert_eq!(x.len(), 8);
        Self {
            a: unit_vector(x[0], x[1]),
            a2: unit_vector(x[2], x[3]),
            b: unit_vector(x[4], x[5]),
            b2: unit_vector(x[6], x[7]),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChshResult {
    pub value: f64,
    pub settings: Option<ChshSettings>,
}

/// Correlation matrix of a two-qubit density matrix.
pub fn correlation_matrix(rho: &CMatrix) -> Result<CorrelationMatrix> {
    let rho = validate_density(rho, 4)?;
    let mut r = [[0.0; 3]; 3];
    for (i, row) in r.iter_mut().enumerate() {
        for (j, entry) in row.iter_mut().enumerate() {
            let op = tensor_product(&pauli(i), &pauli(j));
            *entry = op.matmul(&rho).trace().re;
        }
    }
    Ok(CorrelationMatrix(r))
}

/// Horodecki closed form: `sqrt(s1² + s2²)` for the two largest singular
/// values of `R`.
pub fn chsh_max(r: &CorrelationMatrix) -> ChshResult {
    let sv = singular_values(&r.0);
    ChshResult {
        value: (sv[0] * sv[0] + sv[1] * sv[1]).sqrt(),
        settings: None,
    }
}

/// `(E(a,b) + E(a,b') + E(a',b) - E(a',b')) / 2` with `E(a,b) = aᵀ R b`.
pub fn chsh_value(r: &CorrelationMatrix, s: &ChshSettings) -> f64 {
    0.5 * (r.correlation(&s.a, &s.b) + r.correlation(&s.a, &s.b2) + r.correlation(&s.a2, &s.b)
        - r.correlation(&s.a2, &s.b2))
}

/// Numeric maximization of [`chsh_value`] over all settings.
pub fn chsh_optimize(r: &CorrelationMatrix, seed: u64) -> ChshResult {
    let f = |x: &[f64]| chsh_value(r, &ChshSettings::from_angles(x));
    let opt = MultiStart::default().maximize(&f, seed, |rng| {
        (0..4)
            .flat_map(|_| [rng.gen_range(0.0..PI), rng.gen_range(0.0..TAU)])
            .collect()
    });
    ChshResult {
        value: opt.value,
        settings: Some(ChshSettings::from_angles(&opt.point)),
    }
}

/// Closed-form `R` of the one-qubit attack family:
/// `diag(cos(α-β), cos(α+β), -cos(α+β)cos(α-β))`.
pub fn attack_correlation_matrix(params: &AttackParams) -> CorrelationMatrix {
    let minus = (params.alpha() - params.beta()).cos();
    let plus = (params.alpha() + params.beta()).cos();
    CorrelationMatrix::diagonal([minus, plus, -plus * minus])
}

/// Region predicate for `B > 1`: both angles strictly below π/4 or both
/// strictly above it.
pub fn violates_chsh(params: &AttackParams) -> bool {
    let (a, b) = (params.alpha(), params.beta());
    (a < FRAC_PI_4 && b < FRAC_PI_4) || (a > FRAC_PI_4 && b > FRAC_PI_4)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::{C64, ZERO};
    use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, FRAC_PI_8, SQRT_2};

    #[test]
    fn bell_state_correlations() {
        let s = FRAC_1_SQRT_2;
        let phi = [C64::new(s, 0.0), ZERO, ZERO, C64::new(s, 0.0)];
        let r = correlation_matrix(&CMatrix::outer(&phi)).unwrap();
        assert!(r.max_abs_diff(&CorrelationMatrix::diagonal([1.0, -1.0, 1.0])) < 1e-15);
        let mixed = CMatrix::identity(4).scale(C64::new(0.25, 0.0));
        assert_eq!(
            correlation_matrix(&mixed).unwrap(),
            CorrelationMatrix([[0.0; 3]; 3])
        );
        assert!(correlation_matrix(&CMatrix::identity(4)).is_err());
    }

    #[test]
    fn closed_form_values() {
        let m = chsh_max(&CorrelationMatrix::diagonal([1.0, 1.0, -1.0]));
        assert!((m.value - SQRT_2).abs() < 1e-15);
        assert_eq!(
            chsh_max(&CorrelationMatrix::diagonal([1.0, 0.0, 0.0])).value,
            1.0
        );
    }

    #[test]
    fn canonical_settings_reach_tsirelson() {
        let r = CorrelationMatrix::diagonal([1.0, 1.0, -1.0]);
        let s = FRAC_1_SQRT_2;
        let settings =
            ChshSettings::new([1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [s, s, 0.0], [s, -s, 0.0]).unwrap();
        assert!((chsh_value(&r, &settings) - SQRT_2).abs() < 1e-15);
        assert!(ChshSettings::new(
            [1.0, 1.0, 0.0],
            [0.0, 1.0, 0.0],
            [1.0, 0.0, 0.0],
            [1.0, 0.0, 0.0]
        )
        .is_err());
    }

    #[test]
    fn degenerate_bob_settings_stay_local() {
        let r = CorrelationMatrix::diagonal([1.0, 1.0, -1.0]);
        let x = [1.0, 0.0, 0.0];
        let settings = ChshSettings::new(x, [0.0, 1.0, 0.0], x, x).unwrap();
        let v = chsh_value(&r, &settings);
        assert!((v - r.correlation(&x, &x)).abs() < 1e-15);
        assert!(v <= 1.0 + 1e-10);
    }

    #[test]
    fn attack_matrix_corners() {
        let r = |a, b| attack_correlation_matrix(&AttackParams::new(a, b).unwrap());
        assert!(r(0.0, 0.0).max_abs_diff(&CorrelationMatrix::diagonal([1.0, 1.0, -1.0])) < 1e-15);
        assert!(
            r(FRAC_PI_4, FRAC_PI_4).max_abs_diff(&CorrelationMatrix::diagonal([1.0, 0.0, 0.0]))
                < 1e-15
        );
        assert!(r(FRAC_PI_2, 0.0).max_abs_diff(&CorrelationMatrix::diagonal([0.0; 3])) < 1e-15);
    }

    #[test]
    fn region_predicate() {
        let v = |a, b| violates_chsh(&AttackParams::new(a, b).unwrap());
        assert!(v(FRAC_PI_8, FRAC_PI_8));
        assert!(!v(FRAC_PI_8, 3.0 * FRAC_PI_8));
        assert!(!v(FRAC_PI_4, FRAC_PI_4));
        assert!(v(3.0 * FRAC_PI_8, FRAC_PI_2));
        assert!(v(0.0, 0.0));
    }

    #[test]
    fn optimizer_on_simple_matrices() {
        let r = CorrelationMatrix::diagonal([1.0, 1.0, -1.0]);
        let res = chsh_optimize(&r, 1);
        assert!((res.value - SQRT_2).abs() < 1e-6, "{}", res.value);
        assert!(res.value <= SQRT_2 + 1e-9);
        let zero = chsh_optimize(&CorrelationMatrix([[0.0; 3]; 3]), 1);
        assert!(zero.value.abs() < 1e-9);
    }
}
