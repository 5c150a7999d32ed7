//! Finite-horizon optimal stopping by backward induction.

use crate::error::{Error, Result};
use crate::prob::{conditional_expectation, AdaptedProcess, Filtration, Measure, StoppingTime};
use crate::rational::Rational;

/// Snell envelope of a reward process together with the minimal-optimal
/// stopping rule from every start time.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EnvelopeResult {
    pub envelope: AdaptedProcess,
    /// `minimal_from[t](w) = min { s >= t : W_s(w) = U_s(w) }`.
    pub minimal_from: Vec<StoppingTime>,
}

impl EnvelopeResult {
    pub fn value_at(&self, t: usize, w: usize) -> &Rational {
        self.envelope.at(t, w)
    }
}

/// `W_T = U_T`, `W_t = max(U_t, E[W_{t+1} | H_t])`.
///
/// Ties between stopping and continuing resolve to stopping, so
/// `minimal_from[t]` is the first entry into `{W = U}` after `t`.
pub fn snell_envelope(
    reward: &AdaptedProcess,
    h: &Filtration,
    mu: &Measure,
) -> Result<EnvelopeResult> {
    if reward.horizon() != h.horizon() {
        return Err(Error::HorizonMismatch {
            expected: h.horizon(),
            found: reward.horizon(),
        });
    }
    if let Some(t) = reward.first_non_adapted(h) {
        return Err(Error::NotAdapted {
            name: "reward".into(),
            filtration: "H".into(),
            t,
        });
    }
    let horizon = h.horizon();
    let n = h.num_outcomes();

    let mut rows: Vec<Vec<Rational>> = vec![Vec::new(); horizon + 1];
    rows[horizon] = reward.row(horizon).to_vec();
    for t in (0..horizon).rev() {
        let cont = conditional_expectation(&rows[t + 1], h.part(t), mu)?;
        rows[t] = reward
            .row(t)
            .iter()
            .zip(cont)
            .map(|(u, c)| if *u >= c { u.clone() } else { c })
            .collect();
    }
    let envelope = AdaptedProcess::new(rows)?;

    let mut minimal_from = vec![StoppingTime::constant(n, horizon); horizon + 1];
    for t in (0..horizon).rev() {
        let times = (0..n)
            .map(|w| {
                if envelope.at(t, w) == reward.at(t, w) {
                    t
                } else {
                    minimal_from[t + 1].at(w)
                }
            })
            .collect();
        minimal_from[t] = StoppingTime::new(times);
    }
    Ok(EnvelopeResult {
        envelope,
        minimal_from,
    })
}

/// `E_mu[U_s]`.
pub fn value_of_stopping(reward: &AdaptedProcess, s: &StoppingTime, mu: &Measure) -> Rational {
    let stopped: Vec<Rational> = (0..reward.num_outcomes())
        .map(|w| reward.at(s.at(w), w).clone())
        .collect();
    mu.expectation(&stopped)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::prob::{Partition, SampleSpace};
    use crate::rational::int;

    fn two_step() -> (SampleSpace, Filtration) {
        let space = SampleSpace::uniform(2).unwrap();
        let h = Filtration::new(vec![Partition::trivial(2), Partition::discrete(2)]).unwrap();
        (space, h)
    }

    #[test]
    fn constant_reward() {
        let (space, h) = two_step();
        let u = AdaptedProcess::constant(1, 2, int(4));
        let res = snell_envelope(&u, &h, &space.measure()).unwrap();
        assert_eq!(res.envelope, u);
        assert_eq!(res.minimal_from[0], StoppingTime::constant(2, 0));
        assert_eq!(res.minimal_from[1], StoppingTime::constant(2, 1));
    }

    #[test]
    fn waiting_beats_stopping() {
        let (space, h) = two_step();
        let u = AdaptedProcess::new(vec![vec![int(1), int(1)], vec![int(4), int(0)]]).unwrap();
        let res = snell_envelope(&u, &h, &space.measure()).unwrap();
        assert_eq!(res.envelope.row(0), &[int(2), int(2)]);
        assert_eq!(res.minimal_from[0], StoppingTime::constant(2, 1));
        assert_eq!(
            value_of_stopping(&u, &res.minimal_from[0], &space.measure()),
            int(2)
        );
    }

    #[test]
    fn stopping_beats_waiting() {
        let (space, h) = two_step();
        let u = AdaptedProcess::new(vec![vec![int(3), int(3)], vec![int(4), int(0)]]).unwrap();
        let res = snell_envelope(&u, &h, &space.measure()).unwrap();
        assert_eq!(res.envelope.row(0), &[int(3), int(3)]);
        assert_eq!(res.minimal_from[0], StoppingTime::constant(2, 0));
    }

    #[test]
    fn tie_resolves_to_stop() {
        let (space, h) = two_step();
        let u = AdaptedProcess::new(vec![vec![int(2), int(2)], vec![int(4), int(0)]]).unwrap();
        let res = snell_envelope(&u, &h, &space.measure()).unwrap();
        assert_eq!(res.minimal_from[0], StoppingTime::constant(2, 0));
    }

    #[test]
    fn rejects_non_adapted_reward() {
        let space = SampleSpace::uniform(2).unwrap();
        let h = Filtration::trivial(2, 1);
        let u = AdaptedProcess::new(vec![vec![int(1), int(1)], vec![int(4), int(0)]]).unwrap();
        assert!(matches!(
            snell_envelope(&u, &h, &space.measure()),
            Err(Error::NotAdapted { t: 1, .. })
        ));
    }

    #[test]
    fn value_of_deterministic_times() {
        let (space, _) = two_step();
        let u = AdaptedProcess::new(vec![vec![int(1), int(1)], vec![int(4), int(0)]]).unwrap();
        let mu = space.measure();
        assert_eq!(value_of_stopping(&u, &StoppingTime::constant(2, 0), &mu), int(1));
        let c = AdaptedProcess::constant(1, 2, int(9));
        assert_eq!(value_of_stopping(&c, &StoppingTime::new(vec![0, 1]), &mu), int(9));
    }
}
