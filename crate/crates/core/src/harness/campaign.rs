use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bounds::{self, ConcurrenceProfile};
use crate::error::{Error, Result};
use crate::network::{b_linear_from_triples, b_star_from_triples, Topology};
use crate::qstate::{random_state, RandomKind, StateFamily, TwoQubitState};

/// Margins below `-tolerance` are recorded as violations.
pub const DEFAULT_TOLERANCE: f64 = 1e-9;
/// Violations must stay below `-REVERIFY_TOLERANCE` when recomputed from
/// the dumped matrices.
pub const REVERIFY_TOLERANCE: f64 = 1e-12;

/// Inequalities a campaign can probe. Each margin is oriented so that a
/// negative value contradicts the claim.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Claim {
    /// `B_linear ≥ sqrt(2K)` for any sources.
    Conj1,
    /// `B_star ≥ √2 K^(1/n)` for any sources.
    Conj2,
    /// `B_linear ≤ sqrt(1 + K)`.
    Thm1,
    /// The chain lower bound off its proven class; same margin as `conj1`.
    #[value(name = "thm3-general")]
    #[serde(rename = "thm3-general")]
    Thm3General,
    /// `B_star ≤ sqrt(1 + Σ C_i² / n)`.
    Thm4,
    /// `B_star ≤ sqrt(1 + K^(2/n))`; draws with a separable source are skipped.
    Thm5,
    /// The star lower bound off its proven class; same margin as `conj2`.
    #[value(name = "thm6-general")]
    #[serde(rename = "thm6-general")]
    Thm6General,
    /// `B_star ≤ 1` once `⌈n/2⌉` sources are separable.
    Thm7,
}

impl Claim {
    pub const ALL: [Claim; 8] = [
        Claim::Conj1,
        Claim::Conj2,
        Claim::Thm1,
        Claim::Thm3General,
        Claim::Thm4,
        Claim::Thm5,
        Claim::Thm6General,
        Claim::Thm7,
    ];

    pub fn id(self) -> &'static str {
        match self {
            Claim::Conj1 => "conj1",
            Claim::Conj2 => "conj2",
            Claim::Thm1 => "thm1",
            Claim::Thm3General => "thm3-general",
            Claim::Thm4 => "thm4",
            Claim::Thm5 => "thm5",
            Claim::Thm6General => "thm6-general",
            Claim::Thm7 => "thm7",
        }
    }

    pub fn from_id(id: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|c| c.id() == id)
            .ok_or_else(|| Error::UnknownClaim(id.to_string()))
    }

    pub fn topology(self) -> Topology {
        match self {
            Claim::Conj1 | Claim::Thm1 | Claim::Thm3General => Topology::Linear,
            _ => Topology::Star,
        }
    }

    /// `(B, bound, margin)`, or `None` when the claim says nothing about
    /// this draw.
    pub fn evaluate(self, sources: &[TwoQubitState]) -> Option<(f64, f64, f64)> {
        let triples: Vec<_> = sources.iter().map(TwoQubitState::singular_triple).collect();
        let profile = ConcurrenceProfile::new(sources.iter().map(crate::entanglement::concurrence).collect());
        let b = match self.topology() {
            Topology::Linear => b_linear_from_triples(&triples),
            Topology::Star => b_star_from_triples(&triples),
        };
        let (bound, lower) = match self {
            Claim::Conj1 | Claim::Thm3General => (bounds::lower_lin(&profile), true),
            Claim::Conj2 | Claim::Thm6General => (bounds::lower_star(&profile), true),
            Claim::Thm1 => (bounds::upper_lin(&profile), false),
            Claim::Thm4 => (bounds::upper_star_general(&profile), false),
            Claim::Thm5 => (bounds::upper_star_entangled(&profile).ok()?, false),
            Claim::Thm7 => {
                let n = profile.n();
                if !bounds::star_separable_nogo(n, profile.separable_count()).ok()? {
                    return None;
                }
                (1.0, false)
            }
        };
        let margin = if lower { b - bound } else { bound - b };
        Some((b, bound, margin))
    }
}

impl std::fmt::Display for Claim {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.id())
    }
}

impl std::str::FromStr for Claim {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Self::from_id(s)
    }
}

/// Where the sources of each trial come from.
#[derive(Debug, Clone, PartialEq)]
pub enum Ensemble {
    /// Fresh draws from `kind`; the first `separable` sources come from the
    /// separable ensemble instead.
    Random { kind: RandomKind, separable: usize },
    /// The same sources in every trial.
    Fixed(Vec<TwoQubitState>),
}

impl Ensemble {
    pub fn random(kind: RandomKind) -> Self {
        Ensemble::Random { kind, separable: 0 }
    }

    fn label(&self) -> String {
        match self {
            Ensemble::Random { kind, separable: 0 } => kind.name().to_string(),
            Ensemble::Random { kind, separable } => format!("{kind}+{separable}-separable"),
            Ensemble::Fixed(_) => "fixed".to_string(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CampaignConfig {
    pub claim: Claim,
    pub n: usize,
    pub trials: usize,
    pub ensemble: Ensemble,
    pub seed: u64,
    pub tolerance: f64,
}

impl CampaignConfig {
    pub fn new(claim: Claim, n: usize, trials: usize, ensemble: Ensemble, seed: u64) -> Self {
        Self {
            claim,
            n,
            trials,
            ensemble,
            seed,
            tolerance: DEFAULT_TOLERANCE,
        }
    }
}

/// One evaluated trial.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialRecord {
    pub trial: usize,
    pub margin: f64,
    #[serde(rename = "B")]
    pub b: f64,
    pub bound: f64,
    pub concurrences: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ViolationRecord {
    pub trial: usize,
    pub margin: f64,
    #[serde(rename = "B")]
    pub b: f64,
    pub bound: f64,
    pub concurrences: Vec<f64>,
    /// Margin recomputed from the dumped matrices.
    pub reverified_margin: f64,
    /// Whether the recomputed margin is below `-1e-12`.
    pub reverified: bool,
    pub sources: Vec<StateFamily>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CampaignReport {
    pub claim: Claim,
    pub topology: Topology,
    pub n: usize,
    pub trials: usize,
    /// Trials the claim applied to.
    pub evaluated: usize,
    pub ensemble: String,
    pub seed: u64,
    pub tolerance: f64,
    /// Most adverse margin over evaluated trials.
    pub min_margin: Option<f64>,
    pub min_margin_trial: Option<usize>,
    pub violations: Vec<ViolationRecord>,
    #[serde(skip)]
    pub records: Vec<TrialRecord>,
}

/// RNG of trial `index` under `seed`, independent of scheduling.
pub fn trial_rng(seed: u64, index: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index as u64);
    rng
}

fn draw(ensemble: &Ensemble, n: usize, rng: &mut ChaCha8Rng) -> Vec<TwoQubitState> {
    match ensemble {
        Ensemble::Random { kind, separable } => (0..n)
            .map(|i| {
                let k = if i < *separable { RandomKind::Separable } else { *kind };
                random_state(rng, k)
            })
            .collect(),
        Ensemble::Fixed(sources) => sources.clone(),
    }
}

pub fn run_campaign(config: &CampaignConfig) -> Result<CampaignReport> {
    let CampaignConfig {
        claim,
        n,
        trials,
        seed,
        tolerance,
        ..
    } = *config;
    if trials == 0 {
        return Err(Error::InvalidArgument("trials must be at least 1".into()));
    }
    if n < 2 {
        return Err(Error::TooFewSources(n));
    }
    let mut ensemble = config.ensemble.clone();
    match &mut ensemble {
        Ensemble::Fixed(sources) if sources.len() != n => {
            return Err(Error::InvalidArgument(format!(
                "fixed ensemble has {} sources but n = {n}",
                sources.len()
            )));
        }
        Ensemble::Random { separable, .. } => {
            if *separable > n {
                return Err(Error::InvalidArgument(format!("{separable} separable sources exceed n = {n}")));
            }
            if claim == Claim::Thm7 {
                *separable = (*separable).max(n.div_ceil(2));
            }
        }
        _ => {}
    }

    let outcomes: Vec<_> = (0..trials)
        .into_par_iter()
        .map(|trial| {
            let mut rng = trial_rng(seed, trial);
            let sources = draw(&ensemble, n, &mut rng);
            let (b, bound, margin) = claim.evaluate(&sources)?;
            let concurrences = sources.iter().map(|s| crate::entanglement::concurrence(s).value()).collect();
            let record = TrialRecord {
                trial,
                margin,
                b,
                bound,
                concurrences,
            };
            let violation = (margin < -tolerance).then(|| {
                let dumped: Vec<StateFamily> = sources.iter().map(TwoQubitState::to_family).collect();
                let reloaded: Vec<TwoQubitState> =
                    dumped.iter().map(|f| f.instantiate().expect("dumped state reloads")).collect();
                let reverified_margin = claim.evaluate(&reloaded).map_or(f64::NAN, |(_, _, m)| m);
                ViolationRecord {
                    trial,
                    margin,
                    b,
                    bound,
                    concurrences: record.concurrences.clone(),
                    reverified_margin,
                    reverified: reverified_margin < -REVERIFY_TOLERANCE,
                    sources: dumped,
                }
            });
            Some((record, violation))
        })
        .collect();

    let mut records = Vec::new();
    let mut violations = Vec::new();
    for (record, violation) in outcomes.into_iter().flatten() {
        records.push(record);
        violations.extend(violation);
    }
    let worst = records
        .iter()
        .min_by(|a, b| a.margin.total_cmp(&b.margin).then(a.trial.cmp(&b.trial)));

    Ok(CampaignReport {
        claim,
        topology: claim.topology(),
        n,
        trials,
        evaluated: records.len(),
        ensemble: ensemble.label(),
        seed,
        tolerance,
        min_margin: worst.map(|r| r.margin),
        min_margin_trial: worst.map(|r| r.trial),
        violations,
        records,
    })
}
