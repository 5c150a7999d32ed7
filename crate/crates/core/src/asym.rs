//! Player 2's problem once Player 1 has committed to a stopping time `tau`.
//!
//! Knowing whether `tau` has already occurred refines Player 2's
//! information to `G^tau`. On `{tau > t}` every `G_t` cell collapses to a
//! single `G^tau_t` atom, so the `G^tau` envelope is readable as a
//! `G_t`-measurable value process `V`, and an optimal `G^tau` rule can be
//! turned into a plain `G` stopping time by [`strip_tau`].

use crate::error::{Error, Result};
use crate::game::GameSpec;
use crate::prob::{is_stopping_time, AdaptedProcess, Filtration, Partition, StoppingTime};
use crate::rational::ExtRational;
use crate::snell::{snell_envelope, EnvelopeResult};

/// `G^tau_t = G_t ∨ σ(1{tau <= s}, s <= t)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AugmentedFiltration {
    pub base: Filtration,
    pub tau: StoppingTime,
    pub filtration: Filtration,
}

impl AugmentedFiltration {
    pub fn part(&self, t: usize) -> &Partition {
        self.filtration.part(t)
    }
}

pub fn augment_filtration(g: &Filtration, tau: &StoppingTime) -> Result<AugmentedFiltration> {
    let horizon = g.horizon();
    if tau.len() != g.num_outcomes() {
        return Err(Error::Format(format!(
            "stopping time has {} entries, filtration has {} outcomes",
            tau.len(),
            g.num_outcomes()
        )));
    }
    if let Some(&value) = tau.times().iter().find(|&&v| v > horizon) {
        return Err(Error::TimeOutOfRange { value, horizon });
    }
    let parts = (0..=horizon)
        .map(|t| {
            // time of stopping if already stopped, t + 1 as the "still running" tag
            let labels: Vec<(usize, usize)> = (0..g.num_outcomes())
                .map(|w| (g.part(t).cell_of(w), tau.at(w).min(t + 1)))
                .collect();
            Partition::from_labels(&labels)
        })
        .collect();
    Ok(AugmentedFiltration {
        base: g.clone(),
        tau: tau.clone(),
        filtration: Filtration::named("G^tau", parts)?,
    })
}

/// Player 2's reward when stopping at `t` against `tau`:
/// `X2_t` before `tau`, the frozen `Y2_tau` from `tau` on.
pub fn u2_process(game: &GameSpec, tau: &StoppingTime) -> AdaptedProcess {
    game.x2().map(|t, w, x| {
        let s = tau.at(w);
        if t < s {
            x.clone()
        } else {
            game.y2().at(s, w).clone()
        }
    })
}

fn require_f_stopping_time(game: &GameSpec, tau: &StoppingTime) -> Result<()> {
    if is_stopping_time(tau, game.f())? {
        Ok(())
    } else {
        Err(Error::NotStoppingTime {
            name: "tau".into(),
            filtration: "F".into(),
        })
    }
}

/// Snell envelope of [`u2_process`] on `G^tau`.
pub fn w2_envelope(game: &GameSpec, tau: &StoppingTime) -> Result<EnvelopeResult> {
    require_f_stopping_time(game, tau)?;
    let aug = augment_filtration(game.g(), tau)?;
    snell_envelope(&u2_process(game, tau), &aug.filtration, &game.space().measure())
}

/// `G_t`-measurable value of Player 2 given that Player 1 has not stopped
/// by `t`; `+inf` on cells that miss `{tau > t}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VProcess {
    values: Vec<Vec<ExtRational>>,
}

impl VProcess {
    pub fn at(&self, t: usize, w: usize) -> &ExtRational {
        &self.values[t][w]
    }

    pub fn row(&self, t: usize) -> &[ExtRational] {
        &self.values[t]
    }

    pub fn horizon(&self) -> usize {
        self.values.len() - 1
    }
}

pub fn v_process(game: &GameSpec, tau: &StoppingTime) -> Result<VProcess> {
    let w2 = w2_envelope(game, tau)?;
    v_process_from_envelope(game, tau, &w2)
}

pub(crate) fn v_process_from_envelope(
    game: &GameSpec,
    tau: &StoppingTime,
    w2: &EnvelopeResult,
) -> Result<VProcess> {
    let n = game.num_outcomes();
    let mut values = Vec::with_capacity(game.horizon() + 1);
    for t in 0..=game.horizon() {
        let mut row = vec![ExtRational::PlusInfinity; n];
        for (k, cell) in game.g().part(t).cells().iter().enumerate() {
            let mut alive = cell.iter().copied().filter(|&w| tau.at(w) > t);
            let Some(first) = alive.next() else {
                continue;
            };
            let value = w2.envelope.at(t, first);
            if alive.any(|w| w2.envelope.at(t, w) != value) {
                return Err(Error::AtomNotCollapsed { t, cell: k });
            }
            for &w in cell {
                row[w] = ExtRational::Finite(value.clone());
            }
        }
        values.push(row);
    }
    Ok(VProcess { values })
}

/// A `G` stopping time from `t` that is optimal for Player 2 against `tau`
/// even when `G^tau` rules are allowed.
///
/// For `u = t..T-1`, `A0_u` collects the `G_u` cells whose running part
/// `A ∩ {tau > u}` is nonempty and sits in the immediate-stop region of the
/// minimal-optimal `G^tau` rule from `u`. The rule stops at `u` on
/// `A0_u` minus all earlier `A0_s`, and at `T` elsewhere.
pub fn strip_tau(game: &GameSpec, tau: &StoppingTime, t: usize) -> Result<StoppingTime> {
    let w2 = w2_envelope(game, tau)?;
    strip_tau_from_envelope(game, tau, t, &w2)
}

pub(crate) fn strip_tau_from_envelope(
    game: &GameSpec,
    tau: &StoppingTime,
    t: usize,
    w2: &EnvelopeResult,
) -> Result<StoppingTime> {
    let horizon = game.horizon();
    if t > horizon {
        return Err(Error::TimeOutOfRange { value: t, horizon });
    }
    let n = game.num_outcomes();
    let mut times = vec![horizon; n];
    let mut claimed = vec![false; n];
    for u in t..horizon {
        let stop_rule = &w2.minimal_from[u];
        for cell in game.g().part(u).cells() {
            let Some(&probe) = cell.iter().find(|&&w| tau.at(w) > u) else {
                continue;
            };
            if stop_rule.at(probe) != u {
                continue;
            }
            for &w in cell {
                if !claimed[w] {
                    claimed[w] = true;
                    times[w] = u;
                }
            }
        }
    }
    Ok(StoppingTime::new(times))
}
