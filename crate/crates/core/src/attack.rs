//! Individual eavesdropping on half of `|Φ+>`.
//!
//! Eve's one-qubit attack is fixed, up to local unitaries, by two angles:
//! `U|0'>|E> = sinα|01> + cosα|10>` and `U|1'>|E> = cosβ|00> + sinβ|11>`
//! on Bob ⊗ Eve. Applied to the qubit travelling to Bob this leaves
//!
//! ```text
//! |Ψ_ABE> = (sinα|001> + cosα|010> + cosβ|100> + sinβ|111>) / √2
//! ```
//!
//! The symmetric variant adds a second Eve qubit that records whether
//! Alice's and Bob's x-basis results agree.

use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numeric::{partial_trace, tensor_product, tensor_vec, CMatrix, PureState, C64, ZERO};

/// Slack allowed on the closed range `[0, π/2]` before an angle is rejected;
/// accepted angles are clamped into the range.
const ANGLE_SLACK: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AttackParams {
    alpha: f64,
    beta: f64,
}

impl AttackParams {
    pub fn new(alpha: f64, beta: f64) -> Result<Self> {
        Ok(Self {
            alpha: check_angle("alpha", alpha)?,
            beta: check_angle("beta", beta)?,
        })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    /// `(β, α)`.
    pub fn swapped(&self) -> Self {
        Self {
            alpha: self.beta,
            beta: self.alpha,
        }
    }
}

fn check_angle(name: &'static str, value: f64) -> Result<f64> {
    if !value.is_finite() || !(-ANGLE_SLACK..=FRAC_PI_2 + ANGLE_SLACK).contains(&value) {
        return Err(Error::AngleOutOfRange { name, value });
    }
    Ok(value.clamp(0.0, FRAC_PI_2))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum AttackVariant {
    OneQubit,
    Symmetric,
}

impl AttackVariant {
    pub fn as_str(&self) -> &'static str {
        match self {
            Self::OneQubit => "one-qubit",
            Self::Symmetric => "symmetric",
        }
    }

    /// Number of qubits Eve holds.
    pub fn eve_qubits(&self) -> usize {
        match self {
            Self::OneQubit => 1,
            Self::Symmetric => 2,
        }
    }
}

impl fmt::Display for AttackVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for AttackVariant {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "one-qubit" => Ok(Self::OneQubit),
            "symmetric" => Ok(Self::Symmetric),
            other => Err(format!(
                "unknown attack variant '{other}' (expected one-qubit or symmetric)"
            )),
        }
    }
}

fn real(x: f64) -> C64 {
    C64::new(x, 0.0)
}

/// `|+>` for `outcome == 0`, `|->` for `outcome == 1`.
pub fn x_basis(outcome: usize) -> [C64; 2] {
    let s = FRAC_1_SQRT_2;
    match outcome {
        0 => [real(s), real(s)],
        1 => [real(s), real(-s)],
        _ => panic!("x-basis outcome must be 0 or 1"),
    }
}

/// The 4×2 isometry on Bob ⊗ Eve; its columns are the images of Bob's
/// `|0'>` and `|1'>` with Eve's ancilla attached.
pub fn attack_isometry(params: &AttackParams) -> CMatrix {
    let (sa, ca) = params.alpha.sin_cos();
    let (sb, cb) = params.beta.sin_cos();
    let mut v = CMatrix::zeros(4, 2);
    // basis order |be>: 00, 01, 10, 11
    v[(1, 0)] = real(sa);
    v[(2, 0)] = real(ca);
    v[(0, 1)] = real(cb);
    v[(3, 1)] = real(sb);
    v
}

/// The three-qubit state (order A, B, E) written out directly in the
/// two-angle normal form.
pub fn one_qubit_attack_state(params: &AttackParams) -> PureState {
    let (sa, ca) = params.alpha.sin_cos();
    let (sb, cb) = params.beta.sin_cos();
    let s = FRAC_1_SQRT_2;
    let mut amps = vec![ZERO; 8];
    amps[0b001] = real(s * sa);
    amps[0b010] = real(s * ca);
    amps[0b100] = real(s * cb);
    amps[0b111] = real(s * sb);
    PureState::new(3, amps).expect("attack state is normalized")
}

/// Same state built as `(1_A ⊗ V)|Φ+>` from [`attack_isometry`].
pub fn one_qubit_attack_state_via_isometry(params: &AttackParams) -> PureState {
    let s = FRAC_1_SQRT_2;
    let phi_plus = [real(s), ZERO, ZERO, real(s)];
    let op = tensor_product(&CMatrix::identity(2), &attack_isometry(params));
    PureState::new(3, op.mul_vec(&phi_plus)).expect("isometry preserves the norm")
}

/// Eve's unnormalized conditional states `ẽ_ij`, indexed by Alice's and
/// Bob's x-basis outcomes (0 ↔ `+`, 1 ↔ `-`).
#[derive(Debug, Clone, PartialEq)]
pub struct EveEnsemble {
    variant: AttackVariant,
    states: [[Vec<C64>; 2]; 2],
}

impl EveEnsemble {
    pub fn variant(&self) -> AttackVariant {
        self.variant
    }

    /// Dimension of Eve's space (2 or 4).
    pub fn dim(&self) -> usize {
        self.states[0][0].len()
    }

    pub fn state(&self, alice: usize, bob: usize) -> &[C64] {
        &self.states[alice][bob]
    }

    /// `p(ij) = ‖ẽ_ij‖²`.
    pub fn probability(&self, alice: usize, bob: usize) -> f64 {
        self.states[alice][bob].iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn probabilities(&self) -> [[f64; 2]; 2] {
        [
            [self.probability(0, 0), self.probability(0, 1)],
            [self.probability(1, 0), self.probability(1, 1)],
        ]
    }

    /// Eve's prior-weighted states conditioned on Alice's outcome,
    /// `σ_i = Σ_j |ẽ_ij><ẽ_ij|`.
    pub fn conditioned_on_alice(&self) -> [CMatrix; 2] {
        [0, 1].map(|i| CMatrix::outer(&self.states[i][0]).add(&CMatrix::outer(&self.states[i][1])))
    }

    /// `σ_j = Σ_i |ẽ_ij><ẽ_ij|`.
    pub fn conditioned_on_bob(&self) -> [CMatrix; 2] {
        [0, 1].map(|j| CMatrix::outer(&self.states[0][j]).add(&CMatrix::outer(&self.states[1][j])))
    }

    /// Restricts a symmetric-variant ensemble to Eve's first qubit by
    /// tracing out the parity qubit. One-qubit ensembles are returned as is.
    pub fn first_qubit_states(&self) -> [CMatrix; 2] {
        match self.variant {
            AttackVariant::OneQubit => self.conditioned_on_alice(),
            AttackVariant::Symmetric => self
                .conditioned_on_alice()
                .map(|s| partial_trace(&s, &[2, 2], &[0]).expect("4 = 2·2")),
        }
    }
}

/// The conditional states written out in closed form.
pub fn eve_conditional_states(params: &AttackParams, variant: AttackVariant) -> EveEnsemble {
    let (sa, ca) = params.alpha.sin_cos();
    let (sb, cb) = params.beta.sin_cos();
    let k = 1.0 / (2.0 * std::f64::consts::SQRT_2);
    let single = [
        [[ca + cb, sa + sb], [-ca + cb, sa - sb]],
        [[ca - cb, sa - sb], [-(ca + cb), sa + sb]],
    ];
    let states = [0, 1].map(|i| {
        [0, 1].map(|j| {
            let e = [real(k * single[i][j][0]), real(k * single[i][j][1])];
            match variant {
                AttackVariant::OneQubit => e.to_vec(),
                // parity qubit |+> when the outcomes agree, |-> otherwise
                AttackVariant::Symmetric => tensor_vec(&e, &x_basis(i ^ j)),
            }
        })
    });
    EveEnsemble { variant, states }
}

/// The four-qubit state (order A, B, E₁, E₂) of the symmetric attack,
/// `Σ_ij |i>_A |j>_B ⊗ ẽ_ij` in the x basis.
pub fn symmetric_attack_state(params: &AttackParams) -> PureState {
    let ens = eve_conditional_states(params, AttackVariant::Symmetric);
    let mut amps = vec![ZERO; 16];
    for i in 0..2 {
        for j in 0..2 {
            let ab = tensor_vec(&x_basis(i), &x_basis(j));
            for (a, t) in amps.iter_mut().zip(tensor_vec(&ab, ens.state(i, j))) {
                *a += t;
            }
        }
    }
    PureState::new(4, amps).expect("symmetric attack state is normalized")
}

pub fn attack_state(params: &AttackParams, variant: AttackVariant) -> PureState {
    match variant {
        AttackVariant::OneQubit => one_qubit_attack_state(params),
        AttackVariant::Symmetric => symmetric_attack_state(params),
    }
}

/// Alice–Bob reduced state `Tr_E |Ψ><Ψ|`.
pub fn alice_bob_state(params: &AttackParams, variant: AttackVariant) -> CMatrix {
    let psi = attack_state(params, variant);
    let dims = vec![2; psi.num_qubits()];
    partial_trace(&psi.density(), &dims, &[0, 1]).expect("qubit dims match")
}

/// Projects a tripartite state onto Alice's and Bob's x-basis outcomes,
/// leaving Eve's unnormalized conditional state.
pub fn project_onto_x_outcomes(state: &PureState, alice: usize, bob: usize) -> Vec<C64> {
    let eve_dim = state.dim() / 4;
    let ab = tensor_vec(&x_basis(alice), &x_basis(bob));
    (0..eve_dim)
        .map(|e| {
            (0..4)
                .map(|k| ab[k].conj() * state.amplitudes()[k * eve_dim + e])
                .sum()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn angle_validation() {
        assert!(AttackParams::new(0.0, FRAC_PI_2).is_ok());
        assert!(AttackParams::new(-0.1, 0.0).is_err());
        assert!(AttackParams::new(0.0, 1.6).is_err());
        assert!(AttackParams::new(f64::NAN, 0.0).is_err());
        let p = AttackParams::new(FRAC_PI_2 + 1e-13, -1e-13).unwrap();
        assert_eq!((p.alpha(), p.beta()), (FRAC_PI_2, 0.0));
    }

    #[test]
    fn isometry_columns_at_corners() {
        let v = attack_isometry(&AttackParams::new(FRAC_PI_2, FRAC_PI_2).unwrap());
        let col0 = v.column_vec(0);
        let col1 = v.column_vec(1);
        assert!((col0[1] - 1.0).norm() < 1e-15 && col0[2].norm() < 1e-15);
        assert!((col1[3] - 1.0).norm() < 1e-15 && col1[0].norm() < 1e-15);

        let v = attack_isometry(&AttackParams::new(0.0, 0.0).unwrap());
        assert_eq!(v.column_vec(0), vec![ZERO, ZERO, real(1.0), ZERO]);
        assert_eq!(v.column_vec(1), vec![real(1.0), ZERO, ZERO, ZERO]);
    }

    #[test]
    fn state_at_corners() {
        let s = FRAC_1_SQRT_2;
        let psi = one_qubit_attack_state(&AttackParams::new(0.0, 0.0).unwrap());
        let mut expect = vec![ZERO; 8];
        expect[0b010] = real(s);
        expect[0b100] = real(s);
        assert_eq!(psi.amplitudes(), expect.as_slice());

        let psi = one_qubit_attack_state(&AttackParams::new(FRAC_PI_2, FRAC_PI_2).unwrap());
        assert!((psi.amplitudes()[0b001] - s).norm() < 1e-15);
        assert!((psi.amplitudes()[0b111] - s).norm() < 1e-15);
        assert!(psi.amplitudes()[0b010].norm() < 1e-15);
    }

    #[test]
    fn corner_ensemble() {
        let ens = eve_conditional_states(
            &AttackParams::new(0.0, 0.0).unwrap(),
            AttackVariant::OneQubit,
        );
        // ẽ_{++} = (1/(2√2)) · 2|0> = |0>/√2
        assert!((ens.state(0, 0)[0] - FRAC_1_SQRT_2).norm() < 1e-15);
        assert!(ens.state(0, 0)[1].norm() < 1e-15);
        assert!((ens.probability(0, 0) - 0.5).abs() < 1e-15);
        assert!(ens.probability(0, 1) < 1e-30);
    }

    #[test]
    fn variant_parsing() {
        assert_eq!(
            "one-qubit".parse::<AttackVariant>(),
            Ok(AttackVariant::OneQubit)
        );
        assert_eq!(
            "symmetric".parse::<AttackVariant>(),
            Ok(AttackVariant::Symmetric)
        );
        assert!("two-qubit".parse::<AttackVariant>().is_err());
        assert_eq!(AttackVariant::Symmetric.to_string(), "symmetric");
    }
}
