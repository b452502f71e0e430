//! One-call bundle of every oracle report for a mode set.

use serde::{Deserialize, Serialize};

use super::amplitudes::{amplitudes_from_angles, AmplitudePair, AmplitudeProfile};
use super::bogoliubov::bogoliubov;
use super::charges::build_charges;
use super::checks::*;
use super::hamiltonian::{build_hamiltonian, compact_hamiltonian};
use super::modes::{FockSpace, ModeSet};
use super::sparse::{C64, ONE, ZERO};
use super::FockError;
use crate::model::BareParams;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleConfig {
    pub n_modes: usize,
    pub spacing: f64,
    pub omega_volume: f64,
    pub bare: BareParams,
    /// (θ, ψ, φ) of the amplitude pair
    pub amplitude_angles: [f64; 3],
    /// ω in the pair charges
    pub omega_phase: f64,
    /// φ of the Bogoliubov generator
    pub bogoliubov_phase: f64,
    /// (α, β, γ) of the form-invariance rotation
    pub rotation: [f64; 3],
}

impl Default for OracleConfig {
    fn default() -> Self {
        Self {
            n_modes: 2,
            spacing: 0.7,
            omega_volume: 1.0,
            bare: BareParams { m: 1.0, c: 1.0, lambda: 0.3 },
            amplitude_angles: [0.3, 0.2, 0.1],
            omega_phase: 0.0,
            bogoliubov_phase: 0.0,
            rotation: [0.3, 0.5, 0.7],
        }
    }
}

impl OracleConfig {
    pub fn space(&self) -> Result<FockSpace, FockError> {
        FockSpace::new(ModeSet::line(self.n_modes, self.spacing, self.omega_volume)?)
    }

    pub fn amplitudes(&self) -> AmplitudePair {
        let [t, p, f] = self.amplitude_angles;
        amplitudes_from_angles(t, p, f)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairOracle {
    pub blocks: Vec<TwoParticleReport>,
    /// the AÃ block against the Ã Ã propagator
    pub mixed_alternative: TwoParticleReport,
    /// worst distance between the distinct BB, BB̃ and B̃B̃ levels
    pub restored_isospectrality: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleReport {
    pub config: OracleConfig,
    pub dimension: usize,
    pub car_residual: f64,
    pub spectra: SpectraReport,
    /// H_Fl norm for f = (1, 0), g = (0.6, 0.8), where Σ f ḡ = 0.6
    pub violating_fluctuation_norm: f64,
    /// relative mismatch of the compact normal-ordered comparator
    pub compact_form_mismatch: f64,
    pub algebra: AlgebraReport,
    pub multiplets: MultipletReport,
    pub restoration: RestorationReport,
    /// number-changing part of H in the B operators at ω = π/4
    pub fluctuation_norm_quarter: f64,
    pub pairs: PairOracle,
    pub form_invariance: FormInvarianceReport,
}

pub fn violating_pair() -> AmplitudePair {
    AmplitudePair { f: [ONE, ZERO], g: [C64::new(0.6, 0.0), C64::new(0.8, 0.0)] }
}

pub fn pair_oracle(space: &FockSpace, bare: &BareParams) -> PairOracle {
    let standard = AmplitudeProfile::Constant(AmplitudePair::standard());
    let blocks: Vec<TwoParticleReport> = [
        PairBlock::BB,
        PairBlock::BBtilde,
        PairBlock::BtildeBtilde,
        PairBlock::AA,
        PairBlock::AAtilde,
        PairBlock::AtildeAtilde,
    ]
    .into_iter()
    .map(|b| two_particle_oracle(space, bare, &standard, b, MixedPropagator::Mixed))
    .collect();
    let mut iso = 0.0f64;
    for i in 0..3 {
        for j in 0..3 {
            iso = iso.max(set_distance(&blocks[i].distinct, &blocks[j].distinct));
        }
    }
    PairOracle {
        mixed_alternative: two_particle_oracle(
            space,
            bare,
            &standard,
            PairBlock::AAtilde,
            MixedPropagator::TildeTilde,
        ),
        blocks,
        restored_isospectrality: iso,
    }
}

pub fn run_oracle(config: &OracleConfig) -> Result<OracleReport, FockError> {
    let space = config.space()?;
    let bare = &config.bare;
    let amps = config.amplitudes();
    let profile = AmplitudeProfile::Constant(amps);
    let h = build_hamiltonian(&space, bare, &profile).total;
    let spectra = verify_spectra(&space, bare, &profile);
    let violating = build_hamiltonian(&space, bare, &AmplitudeProfile::Constant(violating_pair()));
    let compact = compact_hamiltonian(&space, bare, spectra.vacuum_energy);
    let charges = build_charges(&space, config.omega_phase);
    let standard = AmplitudeProfile::Constant(AmplitudePair::standard());
    let quarter = bogoliubov(&space, std::f64::consts::FRAC_PI_4, config.bogoliubov_phase);
    Ok(OracleReport {
        dimension: space.dim(),
        car_residual: space.car_residual(),
        violating_fluctuation_norm: violating.fluctuation.norm(),
        compact_form_mismatch: h.sub(&compact).norm() / h.norm(),
        algebra: verify_algebra(&space, &h, &charges),
        multiplets: multiplet_analysis(&space, &charges),
        restoration: verify_restoration(&space, bare, &standard, config.omega_phase, config.bogoliubov_phase),
        fluctuation_norm_quarter: quarter.fluctuation_norm(&build_hamiltonian(&space, bare, &standard).total),
        pairs: pair_oracle(&space, bare),
        form_invariance: form_invariance_check(&space, bare, &amps, config.rotation, config.omega_phase),
        spectra,
        config: config.clone(),
    })
}
