//! Mutual informations between Alice, Bob and Eve, and the one-way
//! (Csiszár–Körner) key-extraction criterion `I(A:B) > min(I(A:E), I(B:E))`.
//!
//! All informations are in bits.

use std::f64::consts::{LN_2, PI, TAU};

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::attack::{AttackParams, AttackVariant, EveEnsemble};
use crate::chsh::{attack_correlation_matrix, chsh_max, BOUNDARY_BAND};
use crate::error::{Error, Result};
use crate::numeric::{CMatrix, C64, ONE, ZERO};
use crate::optimize::MultiStart;

const CORRELATION_SLACK: f64 = 1e-12;
const ENSEMBLE_TRACE_TOL: f64 = 1e-10;

/// `I_b(x) = 1 + ((1+x)/2)log2((1+x)/2) + ((1-x)/2)log2((1-x)/2)`, the
/// mutual information of a binary symmetric channel with correlation `x`.
pub fn binary_mutual_info(x: f64) -> Result<f64> {
    if !x.is_finite() || x.abs() > 1.0 + CORRELATION_SLACK {
        return Err(Error::CorrelationOutOfRange(x));
    }
    Ok(ib(x))
}

// Evaluated as [(1+x)ln(1+x) + (1-x)ln(1-x)] / (2 ln 2), with the power
// series near 0 where the linear terms cancel.
fn ib(x: f64) -> f64 {
    let x = x.clamp(-1.0, 1.0).abs();
    if x < 1e-2 {
        // Σ_k x^{2k} / (k(2k-1)), truncated well below f64 resolution
        let x2 = x * x;
        let mut term = x2;
        let mut acc = 0.0;
        for k in 1..=8 {
            let kf = k as f64;
            acc += term / (kf * (2.0 * kf - 1.0));
            term *= x2;
        }
        return acc / (2.0 * LN_2);
    }
    let xlx = |t: f64, l: f64| if t == 0.0 { 0.0 } else { t * l };
    let v = (xlx(1.0 + x, x.ln_1p()) + xlx(1.0 - x, (-x).ln_1p())) / (2.0 * LN_2);
    v.clamp(0.0, 1.0)
}

/// `I(A:B) = I_b(cos(α-β))`.
pub fn info_ab(params: &AttackParams) -> f64 {
    ib((params.alpha() - params.beta()).cos())
}

/// `I(A:E) = I_b(sin(α+β))`.
pub fn info_ae(params: &AttackParams) -> f64 {
    ib((params.alpha() + params.beta()).sin())
}

/// `I(B:E) = I_b(sinα cosα + sinβ cosβ)` for the one-qubit attack.
pub fn info_be(params: &AttackParams) -> f64 {
    let (sa, ca) = params.alpha().sin_cos();
    let (sb, cb) = params.beta().sin_cos();
    ib(sa * ca + sb * cb)
}

/// Mutual information of a 2×2 joint distribution.
pub fn mutual_information(joint: &[[f64; 2]; 2]) -> f64 {
    let rows = [joint[0][0] + joint[0][1], joint[1][0] + joint[1][1]];
    let cols = [joint[0][0] + joint[1][0], joint[0][1] + joint[1][1]];
    let mut acc = 0.0;
    for i in 0..2 {
        for j in 0..2 {
            let p = joint[i][j];
            if p > 0.0 {
                acc += p * (p / (rows[i] * cols[j])).log2();
            }
        }
    }
    acc.max(0.0)
}

/// `I(A:B)` from the outcome table `p(ij) = ‖ẽ_ij‖²` of Eve's ensemble.
pub fn info_ab_from_ensemble(ens: &EveEnsemble) -> f64 {
    mutual_information(&ens.probabilities())
}

/// Two prior-weighted states `σ_i = p_i ρ_i` on a 2- or 4-dimensional space.
#[derive(Debug, Clone, PartialEq)]
pub struct BinaryEnsemble {
    weighted: [CMatrix; 2],
}

impl BinaryEnsemble {
    pub fn new(weighted: [CMatrix; 2]) -> Result<Self> {
        let dim = weighted[0].rows();
        if !(dim == 2 || dim == 4) {
            return Err(Error::DimensionMismatch(format!(
                "ensemble states must be 2x2 or 4x4, got {dim}x{}",
                weighted[0].cols()
            )));
        }
        for s in &weighted {
            if s.rows() != dim || s.cols() != dim {
                return Err(Error::DimensionMismatch(
                    "ensemble states have different shapes".into(),
                ));
            }
            let defect = s.hermiticity_defect();
            if defect > 1e-10 {
                return Err(Error::NotHermitian(defect));
            }
        }
        let total = weighted[0].trace().re + weighted[1].trace().re;
        if (total - 1.0).abs() > ENSEMBLE_TRACE_TOL {
            return Err(Error::EnsembleTrace(total));
        }
        Ok(Self { weighted })
    }

    /// Equal priors: `σ_i = ρ_i / 2`.
    pub fn equal_priors(rho_plus: &CMatrix, rho_minus: &CMatrix) -> Result<Self> {
        let half = C64::new(0.5, 0.0);
        Self::new([rho_plus.scale(half), rho_minus.scale(half)])
    }

    pub fn dim(&self) -> usize {
        self.weighted[0].rows()
    }

    pub fn weighted(&self) -> &[CMatrix; 2] {
        &self.weighted
    }

    pub fn swapped(&self) -> Self {
        Self {
            weighted: [self.weighted[1].clone(), self.weighted[0].clone()],
        }
    }

    /// Mutual information between the label and the outcome of the
    /// measurement `{P, 1 - P}`.
    pub fn measurement_information(&self, projector: &CMatrix) -> f64 {
        let mut joint = [[0.0; 2]; 2];
        for (row, s) in joint.iter_mut().zip(&self.weighted) {
            let total = s.trace().re;
            let hit = trace_product(s, projector).clamp(0.0, total.max(0.0));
            *row = [hit, (total - hit).max(0.0)];
        }
        mutual_information(&joint)
    }
}

fn trace_product(a: &CMatrix, b: &CMatrix) -> f64 {
    let n = a.rows();
    let mut acc = ZERO;
    for i in 0..n {
        for j in 0..n {
            acc += a[(i, j)] * b[(j, i)];
        }
    }
    acc.re
}

impl EveEnsemble {
    /// Eve's task of guessing Alice's bit.
    pub fn alice_task(&self) -> BinaryEnsemble {
        BinaryEnsemble::new(self.conditioned_on_alice()).expect("probabilities sum to one")
    }

    /// Eve's task of guessing Bob's bit.
    pub fn bob_task(&self) -> BinaryEnsemble {
        BinaryEnsemble::new(self.conditioned_on_bob()).expect("probabilities sum to one")
    }
}

fn rank_one_from_reals(x: &[f64]) -> Option<CMatrix> {
    let v: Vec<C64> = x.chunks(2).map(|c| C64::new(c[0], c[1])).collect();
    let norm: f64 = v.iter().map(|z| z.norm_sqr()).sum();
    if norm < 1e-12 {
        return None;
    }
    Some(CMatrix::outer(&v).scale(C64::new(1.0 / norm, 0.0)))
}

/// Rank-2 projector onto the column span of `[1; Z]` (or `[Z; 1]` when
/// `lower` is set) for a 2×2 complex `Z` given by eight reals.
fn rank_two_from_reals(x: &[f64], lower: bool) -> CMatrix {
    let z: Vec<C64> = x.chunks(2).map(|c| C64::new(c[0], c[1])).collect();
    let mut w = CMatrix::zeros(4, 2);
    let (id_off, z_off) = if lower { (2, 0) } else { (0, 2) };
    w[(id_off, 0)] = ONE;
    w[(id_off + 1, 1)] = ONE;
    for r in 0..2 {
        for c in 0..2 {
            w[(z_off + r, c)] = z[2 * r + c];
        }
    }
    // P = W (W†W)^{-1} W†
    let g = w.adjoint().matmul(&w);
    let det = g[(0, 0)] * g[(1, 1)] - g[(0, 1)] * g[(1, 0)];
    let inv = CMatrix::new(
        2,
        2,
        vec![
            g[(1, 1)] / det,
            -g[(0, 1)] / det,
            -g[(1, 0)] / det,
            g[(0, 0)] / det,
        ],
    )
    .expect("Gram matrix of [1; Z] is invertible");
    w.matmul(&inv).matmul(&w.adjoint())
}

/// Largest mutual information Eve can get about the label with a
/// two-outcome projective measurement, found by seeded multi-start search.
/// On qubits the search runs over rank-1 projectors; on two qubits over
/// rank-1 and rank-2 projectors (rank 3 is a relabelled rank 1).
pub fn accessible_info(ens: &BinaryEnsemble, seed: u64) -> f64 {
    let search = MultiStart::default();
    match ens.dim() {
        2 => {
            let f = |x: &[f64]| {
                let (s, c) = (0.5 * x[0]).sin_cos();
                let n = [C64::new(c, 0.0), C64::from_polar(s, x[1])];
                ens.measurement_information(&CMatrix::outer(&n))
            };
            search
                .maximize(&f, seed, |rng| {
                    vec![rng.gen_range(0.0..PI), rng.gen_range(0.0..TAU)]
                })
                .value
        }
        4 => {
            let gauss = |rng: &mut rand_chacha::ChaCha8Rng| -> Vec<f64> {
                (0..8).map(|_| rng.gen_range(-1.5..1.5)).collect()
            };
            let rank_one = |x: &[f64]| {
                rank_one_from_reals(x).map_or(f64::NAN, |p| ens.measurement_information(&p))
            };
            let upper = |x: &[f64]| ens.measurement_information(&rank_two_from_reals(x, false));
            let lower = |x: &[f64]| ens.measurement_information(&rank_two_from_reals(x, true));
            let a = search.maximize(&rank_one, seed, gauss).value;
            let b = search.maximize(&upper, seed.wrapping_add(1), gauss).value;
            let c = search.maximize(&lower, seed.wrapping_add(2), gauss).value;
            a.max(b).max(c)
        }
        _ => unreachable!("BinaryEnsemble guarantees dimension 2 or 4"),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InfoTriple {
    pub iab: f64,
    pub iae: f64,
    pub ibe: f64,
}

impl InfoTriple {
    /// Closed-form informations. For the symmetric attack Eve's second
    /// qubit reveals whether the parties agree, so `I(B:E) = I(A:E)`.
    pub fn closed_form(params: &AttackParams, variant: AttackVariant) -> Self {
        let iae = info_ae(params);
        let ibe = match variant {
            AttackVariant::OneQubit => info_be(params),
            AttackVariant::Symmetric => iae,
        };
        Self {
            iab: info_ab(params),
            iae,
            ibe,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CkVerdict {
    /// `I(A:B) > min(I(A:E), I(B:E))`.
    pub ck_holds: bool,
    /// Alice-to-Bob reconciliation works: `I(A:B) > I(A:E)`.
    pub one_way_direct: bool,
    /// Reverse reconciliation works: `I(A:B) > I(B:E)`.
    pub reverse_ok: bool,
}

pub fn csiszar_korner(info: &InfoTriple) -> CkVerdict {
    CkVerdict {
        ck_holds: info.iab > info.iae.min(info.ibe),
        one_way_direct: info.iab > info.iae,
        reverse_ok: info.iab > info.ibe,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SecurityReport {
    pub params: AttackParams,
    pub variant: AttackVariant,
    pub info: InfoTriple,
    pub chsh: f64,
    pub one_way_direct: bool,
    pub reverse_ok: bool,
    pub ck_holds: bool,
    /// The Bell/key equivalence holds at this point, or the point lies
    /// inside the `|B - 1| < 1e-9` band where it is not tested.
    pub equivalence_consistent: bool,
}

impl SecurityReport {
    pub fn violates(&self) -> bool {
        self.chsh > 1.0 + BOUNDARY_BAND
    }

    pub fn in_boundary_band(&self) -> bool {
        (self.chsh - 1.0).abs() < BOUNDARY_BAND
    }

    /// The information-side condition paired with `B > 1`: against the
    /// one-qubit attack both reconciliation directions must beat Eve;
    /// against the symmetric attack (where `I(A:E) = I(B:E)`) one must.
    pub fn key_condition(&self) -> bool {
        key_condition(&self.info, self.variant)
    }
}

fn key_condition(info: &InfoTriple, variant: AttackVariant) -> bool {
    match variant {
        AttackVariant::OneQubit => info.iab > info.iae.max(info.ibe),
        AttackVariant::Symmetric => info.iab > info.iae,
    }
}

pub fn security_report(params: &AttackParams, variant: AttackVariant) -> SecurityReport {
    let info = InfoTriple::closed_form(params, variant);
    let chsh = chsh_max(&attack_correlation_matrix(params)).value;
    let verdict = csiszar_korner(&info);
    let in_band = (chsh - 1.0).abs() < BOUNDARY_BAND;
    SecurityReport {
        params: *params,
        variant,
        info,
        chsh,
        one_way_direct: verdict.one_way_direct,
        reverse_ok: verdict.reverse_ok,
        ck_holds: verdict.ck_holds,
        equivalence_consistent: in_band || key_condition(&info, variant) == (chsh > 1.0),
    }
}
