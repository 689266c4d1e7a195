//! Bounds tying the maximal violation `B` to the product of source
//! concurrences `K`, plus detection thresholds and their inversions.

use serde::{Deserialize, Serialize};

use crate::entanglement::{concurrence, Concurrence};
use crate::error::{Error, Result};
use crate::network::{NetworkSpec, Topology};

/// Whether a bound is a theorem for the network at hand or only a
/// conjectured extension of one.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BoundStatus {
    Proven,
    ProvenBellDiagonal,
    ConjecturedGeneral,
}

/// Ordered concurrences of the sources and their product `K`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConcurrenceProfile {
    values: Vec<Concurrence>,
    k: f64,
}

impl ConcurrenceProfile {
    pub fn new(values: Vec<Concurrence>) -> Self {
        let k = values.iter().map(|c| c.value()).product();
        Self { values, k }
    }

    /// Rejects values outside `[0, 1]`.
    pub fn from_values(values: &[f64]) -> Result<Self> {
        let values = values
            .iter()
            .enumerate()
            .map(|(i, &v)| {
                Concurrence::new(v).ok_or_else(|| {
                    Error::InvalidArgument(format!("concurrence[{i}] = {v} is outside [0, 1]"))
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::new(values))
    }

    pub fn of_network(net: &NetworkSpec) -> Self {
        Self::new(net.sources().iter().map(concurrence).collect())
    }

    pub fn values(&self) -> &[Concurrence] {
        &self.values
    }

    pub fn n(&self) -> usize {
        self.values.len()
    }

    pub fn k(&self) -> f64 {
        self.k
    }

    pub fn separable_count(&self) -> usize {
        self.values.iter().filter(|c| c.is_zero()).count()
    }

    pub fn all_entangled(&self) -> bool {
        self.separable_count() == 0
    }
}

/// `sqrt(1 + K)`; holds for every chain.
pub fn upper_lin(profile: &ConcurrenceProfile) -> f64 {
    (1.0 + profile.k()).sqrt()
}

/// `sqrt(2K)`; proven for Bell-diagonal sources.
pub fn lower_lin(profile: &ConcurrenceProfile) -> f64 {
    (2.0 * profile.k()).sqrt()
}

/// `sqrt(1 + Σ C_i² / n)`; holds for every star.
pub fn upper_star_general(profile: &ConcurrenceProfile) -> f64 {
    let n = profile.n() as f64;
    let mean_sq = profile.values().iter().map(|c| c.value().powi(2)).sum::<f64>() / n;
    (1.0 + mean_sq).sqrt()
}

/// `sqrt(1 + K^(2/n))`, stated only when every source is entangled.
pub fn upper_star_entangled(profile: &ConcurrenceProfile) -> Result<f64> {
    if let Some(index) = profile.values().iter().position(|c| c.is_zero()) {
        return Err(Error::ZeroConcurrence { index });
    }
    let n = profile.n() as f64;
    Ok((1.0 + profile.k().powf(2.0 / n)).sqrt())
}

/// `√2 · K^(1/n)`; proven for Bell-diagonal sources.
pub fn lower_star(profile: &ConcurrenceProfile) -> f64 {
    let n = profile.n() as f64;
    2f64.sqrt() * profile.k().powf(1.0 / n)
}

/// Status of the lower bounds for a network whose sources are (or are not)
/// all Bell-diagonal up to local unitaries.
pub fn lower_bound_status(bell_diagonal: bool) -> BoundStatus {
    if bell_diagonal {
        BoundStatus::ProvenBellDiagonal
    } else {
        BoundStatus::ConjecturedGeneral
    }
}

/// Smallest `K` compatible with a violation amount `v = B − 1`, read off the
/// lower bounds: `(1+v)² − 1` for a chain, `((1+v)² − 1)^(n/2)` for a star.
pub fn required_k(topology: Topology, v: f64, n: usize) -> Result<f64> {
    if !(v >= 0.0) {
        return Err(Error::InvalidArgument(format!("violation amount must be ≥ 0, got {v}")));
    }
    let base = (1.0 + v).powi(2) - 1.0;
    Ok(match topology {
        Topology::Linear => base,
        Topology::Star => base.powf(n as f64 / 2.0),
    })
}

/// Per-source concurrence for `n` identical sources reaching violation `v`.
pub fn required_identical_concurrence(topology: Topology, v: f64, n: usize) -> Result<f64> {
    let base = required_k(Topology::Linear, v, n)?;
    Ok(match topology {
        Topology::Linear => base.powf(1.0 / n as f64),
        Topology::Star => base.sqrt(),
    })
}

/// True iff a star with `m` separable sources out of `n` can never violate,
/// i.e. `m ≥ ⌈n/2⌉`.
pub fn star_separable_nogo(n: usize, m: usize) -> Result<bool> {
    if m > n {
        return Err(Error::InvalidArgument(format!(
            "separable count {m} exceeds source count {n}"
        )));
    }
    Ok(m >= n.div_ceil(2))
}

/// `K` above which the lower bound certifies a violation: `1/2` for a
/// chain, `2^(−n/2)` for a star.
pub fn threshold_product(topology: Topology, n: usize) -> f64 {
    match topology {
        Topology::Linear => 0.5,
        Topology::Star => 2f64.powf(-(n as f64) / 2.0),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn profile(values: &[f64]) -> ConcurrenceProfile {
        ConcurrenceProfile::from_values(values).unwrap()
    }

    #[test]
    fn upper_lin_examples() {
        assert!((upper_lin(&profile(&[1.0; 3])) - 2f64.sqrt()).abs() < 1e-15);
        assert_eq!(upper_lin(&profile(&[1.0, 0.0, 0.7])), 1.0);
        assert!((upper_lin(&profile(&[0.8, 0.8, 0.9])) - 1.25539).abs() < 1e-5);
    }

    #[test]
    fn lower_lin_examples() {
        assert!((lower_lin(&profile(&[1.0; 4])) - 2f64.sqrt()).abs() < 1e-15);
        assert!((lower_lin(&profile(&[0.5, 1.0])) - 1.0).abs() < 1e-15);
        for p in [0.05, 0.2, 0.3] {
            let ps = [p, p, p];
            let exact = (ps.iter().product::<f64>() + ps.iter().map(|p| 1.0 - 2.0 * p).product::<f64>()).sqrt();
            assert!(exact > lower_lin(&profile(&ps)));
        }
    }

    #[test]
    fn star_bounds() {
        assert!((upper_star_general(&profile(&[1.0; 3])) - 2f64.sqrt()).abs() < 1e-15);
        assert_eq!(upper_star_general(&profile(&[0.0; 3])), 1.0);
        let five = profile(&[1.0, 1.0, 1.0, 1.0, 0.0]);
        assert!((upper_star_general(&five) - 1.8f64.sqrt()).abs() < 1e-15);
        assert!(2f64.powf(0.1) < upper_star_general(&five));
        assert!(matches!(upper_star_entangled(&five), Err(Error::ZeroConcurrence { index: 4 })));
        let value = upper_star_entangled(&profile(&[0.8, 0.8, 0.9])).unwrap();
        assert!((value - (1.0 + 0.576f64.powf(2.0 / 3.0)).sqrt()).abs() < 1e-15);
        assert!((value - 1.30088).abs() < 1e-5);
    }

    #[test]
    fn lower_star_threshold() {
        for n in 2..=6 {
            let c = 2f64.powf(-0.5);
            let p = profile(&vec![c; n]);
            assert!((p.k() - threshold_product(Topology::Star, n)).abs() < 1e-15);
            assert!((lower_star(&p) - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn required_k_inversions() {
        assert_eq!(required_k(Topology::Linear, 0.0, 3).unwrap(), 0.0);
        assert!((required_k(Topology::Linear, 2f64.sqrt() - 1.0, 3).unwrap() - 1.0).abs() < 1e-14);
        let k = required_k(Topology::Star, 0.1, 4).unwrap();
        assert!((k - (1.21f64 - 1.0).powi(2)).abs() < 1e-14);
        assert!(required_k(Topology::Star, -0.1, 4).is_err());
        let c = required_identical_concurrence(Topology::Star, 0.1, 4).unwrap();
        assert!((c - 0.21f64.sqrt()).abs() < 1e-14);
        let c = required_identical_concurrence(Topology::Linear, 0.1, 3).unwrap();
        assert!((c.powi(3) - 0.21).abs() < 1e-14);
    }

    #[test]
    fn nogo_and_thresholds() {
        assert!(star_separable_nogo(3, 2).unwrap());
        assert!(!star_separable_nogo(5, 1).unwrap());
        assert!(!star_separable_nogo(4, 0).unwrap());
        assert!(star_separable_nogo(4, 2).unwrap());
        assert!(star_separable_nogo(2, 3).is_err());
        assert_eq!(threshold_product(Topology::Linear, 7), 0.5);
        assert!((threshold_product(Topology::Star, 3) - 0.35355).abs() < 1e-5);
        assert!((threshold_product(Topology::Star, 2) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn profile_rejects_out_of_range() {
        assert!(ConcurrenceProfile::from_values(&[0.5, 1.5]).is_err());
        let p = profile(&[0.5, 0.0, 0.4]);
        assert_eq!(p.separable_count(), 1);
        assert!(!p.all_entangled());
        assert!((p.k()).abs() < 1e-15);
    }
}
