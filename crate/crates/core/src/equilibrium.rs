//! Recursive construction of the equilibrium candidate.
//!
//! Starting from `tau_1 = nu_1 = T`, each round lets Player 1 best-respond to
//! `nu_n` on `F` and Player 2 best-respond to `tau_n` on `G^{tau_n}`, keeping
//! only the stops that pre-empt the opponent. In parallel, the value process
//! `V^n` yields a `G` stopping time `theta_{n+1}`; the pointwise minimum of
//! the thetas is Player 2's equilibrium strategy.

use crate::asym::{augment_filtration, v_process_from_envelope, w2_envelope};
use crate::error::{Error, Result};
use crate::game::GameSpec;
use crate::prob::{is_stopping_time, AdaptedProcess, StoppingTime};
use crate::snell::snell_envelope;

/// Snapshot of round `n` of the construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IterationState {
    pub n: usize,
    pub tau: StoppingTime,
    pub nu: StoppingTime,
    /// `theta_2, ..., theta_n`.
    pub theta_list: Vec<StoppingTime>,
    /// The uncapped candidates that produced `tau`/`nu`; absent for `n = 1`.
    pub tau_tilde: Option<StoppingTime>,
    pub nu_tilde: Option<StoppingTime>,
}

impl IterationState {
    pub fn initial(game: &GameSpec) -> Self {
        let terminal = StoppingTime::constant(game.num_outcomes(), game.horizon());
        IterationState {
            n: 1,
            tau: terminal.clone(),
            nu: terminal,
            theta_list: Vec::new(),
            tau_tilde: None,
            nu_tilde: None,
        }
    }

    /// `theta_n`, the latest theta (none at `n = 1`).
    pub fn theta(&self) -> Option<&StoppingTime> {
        self.theta_list.last()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EquilibriumResult {
    pub tau_star: StoppingTime,
    pub nu_star: StoppingTime,
    pub theta_star: StoppingTime,
    pub trace: Vec<IterationState>,
    /// Index `N` of the first round with `(tau_N, nu_N) = (tau_{N-1}, nu_{N-1})`.
    pub iterations: usize,
}

/// Player 1's reward against `nu`: `X1_t` strictly before `nu`, afterwards
/// the absorbed value (`X1_T` if `nu = T`, else `Y1_nu`).
pub fn u1_process(game: &GameSpec, nu: &StoppingTime) -> AdaptedProcess {
    let horizon = game.horizon();
    game.x1().map(|t, w, x| {
        let s = nu.at(w);
        if t < s {
            x.clone()
        } else if s == horizon {
            game.x1().at(horizon, w).clone()
        } else {
            game.y1().at(s, w).clone()
        }
    })
}

/// `min { t : hit(t, w) }`, or `None` when the set is empty.
fn first_hit(horizon: usize, w: usize, mut hit: impl FnMut(usize, usize) -> bool) -> Option<usize> {
    (0..=horizon).find(|&t| hit(t, w))
}

fn capped(first: Option<usize>, cap: usize) -> usize {
    first.map_or(cap, |t| t.min(cap))
}

pub fn iterate_once(game: &GameSpec, state: &IterationState) -> Result<IterationState> {
    let horizon = game.horizon();
    let n = game.num_outcomes();
    let prob = game.space().measure();

    let w1 = snell_envelope(&u1_process(game, &state.nu), game.f(), &prob)?;
    let tau_tilde: Vec<usize> = (0..n)
        .map(|w| {
            let first = first_hit(horizon, w, |t, w| w1.envelope.at(t, w) == game.x1().at(t, w));
            capped(first, state.nu.at(w))
        })
        .collect();
    let tau_next: Vec<usize> = (0..n)
        .map(|w| {
            if tau_tilde[w] < state.nu.at(w) {
                tau_tilde[w]
            } else {
                state.tau.at(w)
            }
        })
        .collect();

    let w2 = w2_envelope(game, &state.tau)?;
    let nu_tilde: Vec<usize> = (0..n)
        .map(|w| {
            let first = first_hit(horizon, w, |t, w| w2.envelope.at(t, w) == game.x2().at(t, w));
            capped(first, state.tau.at(w))
        })
        .collect();
    let nu_next: Vec<usize> = (0..n)
        .map(|w| {
            if nu_tilde[w] < state.tau.at(w) {
                nu_tilde[w]
            } else {
                state.nu.at(w)
            }
        })
        .collect();

    let v = v_process_from_envelope(game, &state.tau, &w2)?;
    let theta: Vec<usize> = (0..n)
        .map(|w| capped(first_hit(horizon, w, |t, w| v.at(t, w).equals(game.x2().at(t, w))), horizon))
        .collect();

    let tau_next = StoppingTime::new(tau_next);
    let nu_next = StoppingTime::new(nu_next);
    let theta = StoppingTime::new(theta);

    if !is_stopping_time(&tau_next, game.f())? {
        return Err(Error::ConstructionInvariant(format!(
            "tau_{} is not an F stopping time",
            state.n + 1
        )));
    }
    if !is_stopping_time(&theta, game.g())? {
        return Err(Error::ConstructionInvariant(format!(
            "theta_{} is not a G stopping time",
            state.n + 1
        )));
    }
    let aug = augment_filtration(game.g(), &state.tau)?;
    if !is_stopping_time(&nu_next, &aug.filtration)? {
        return Err(Error::ConstructionInvariant(format!(
            "nu_{} is not a G^tau_{} stopping time",
            state.n + 1,
            state.n
        )));
    }

    let mut theta_list = state.theta_list.clone();
    theta_list.push(theta);
    Ok(IterationState {
        n: state.n + 1,
        tau: tau_next,
        nu: nu_next,
        theta_list,
        tau_tilde: Some(StoppingTime::new(tau_tilde)),
        nu_tilde: Some(StoppingTime::new(nu_tilde)),
    })
}

/// Largest round index the construction may reach before a fixpoint.
pub fn iteration_bound(game: &GameSpec) -> usize {
    game.num_outcomes() * game.horizon() + 2
}

/// `min_n { theta_{n+1} : theta_{n+1} < tau_n } ∧ T`, read off a trace.
pub fn nu_star_from_thetas(trace: &[IterationState], horizon: usize) -> StoppingTime {
    let n = trace[0].tau.len();
    let times = (0..n)
        .map(|w| {
            trace
                .windows(2)
                .filter_map(|pair| {
                    let theta = pair[1].theta()?.at(w);
                    (theta < pair[0].tau.at(w)).then_some(theta)
                })
                .min()
                .map_or(horizon, |t| t.min(horizon))
        })
        .collect();
    StoppingTime::new(times)
}

/// Runs the construction to its fixpoint.
///
/// The round that detects `(tau_{N}, nu_{N}) = (tau_{N-1}, nu_{N-1})` already
/// carries `theta_N`, computed from the limiting `tau`; all later thetas
/// repeat it, so the minimum over the trace is `theta*`.
pub fn solve(game: &GameSpec) -> Result<EquilibriumResult> {
    let bound = iteration_bound(game);
    let mut trace = vec![IterationState::initial(game)];
    loop {
        let current = trace.last().expect("trace is never empty");
        let next = iterate_once(game, current)?;
        let done = next.tau == current.tau && next.nu == current.nu;
        if !done && next.n >= bound {
            return Err(Error::IterationBound(bound));
        }
        trace.push(next);
        if done {
            break;
        }
    }

    let last = trace.last().expect("trace is never empty");
    let tau_star = last.tau.clone();
    let nu_star = last.nu.clone();
    let theta_star = last
        .theta_list
        .iter()
        .skip(1)
        .fold(last.theta_list[0].clone(), |acc, th| acc.pointwise_min(th));

    if nu_star_from_thetas(&trace, game.horizon()) != nu_star {
        return Err(Error::ConstructionInvariant(
            "nu* differs from the minimum of pre-emptive thetas".into(),
        ));
    }
    for (name, s, h, hname) in [
        ("tau*", &tau_star, game.f(), "F"),
        ("nu*", &nu_star, game.f(), "F"),
        ("theta*", &theta_star, game.g(), "G"),
    ] {
        if !is_stopping_time(s, h)? {
            return Err(Error::ConstructionInvariant(format!(
                "{name} is not an {hname} stopping time"
            )));
        }
    }

    Ok(EquilibriumResult {
        tau_star,
        nu_star,
        theta_star,
        iterations: last.n,
        trace,
    })
}

/// `{nu* < tau*} = {theta* < tau*}` as outcome sets.
pub fn check_corollary(_game: &GameSpec, result: &EquilibriumResult) -> bool {
    (0..result.tau_star.len()).all(|w| {
        let tau = result.tau_star.at(w);
        (result.nu_star.at(w) < tau) == (result.theta_star.at(w) < tau)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::game_s;
    use crate::prob::{Filtration, SampleSpace};
    use crate::rational::int;

    #[test]
    fn u1_branches() {
        let game = game_s();
        assert_eq!(u1_process(&game, &StoppingTime::constant(2, 1)), *game.x1());
        let absorbed = u1_process(&game, &StoppingTime::constant(2, 0));
        assert_eq!(absorbed, AdaptedProcess::constant(1, 2, int(0)));
    }

    #[test]
    fn game_s_trace() {
        let game = game_s();
        let s1 = IterationState::initial(&game);
        let s2 = iterate_once(&game, &s1).unwrap();
        assert_eq!(s2.tau_tilde, Some(StoppingTime::constant(2, 0)));
        assert_eq!(s2.tau, StoppingTime::constant(2, 0));
        assert_eq!(s2.nu_tilde, Some(StoppingTime::constant(2, 1)));
        assert_eq!(s2.nu, StoppingTime::constant(2, 1));
        assert_eq!(s2.theta(), Some(&StoppingTime::constant(2, 1)));

        let s3 = iterate_once(&game, &s2).unwrap();
        assert_eq!(s3.tau, StoppingTime::constant(2, 0));
        assert_eq!(s3.nu, StoppingTime::constant(2, 1));
        assert_eq!(s3.theta(), Some(&StoppingTime::constant(2, 1)));
    }

    #[test]
    fn game_s_solution() {
        let game = game_s();
        let res = solve(&game).unwrap();
        assert_eq!(res.tau_star, StoppingTime::constant(2, 0));
        assert_eq!(res.nu_star, StoppingTime::constant(2, 1));
        assert_eq!(res.theta_star, StoppingTime::constant(2, 1));
        assert_eq!(res.iterations, 3);
        assert!(check_corollary(&game, &res));
    }

    #[test]
    fn immediate_stop_blinds_theta() {
        // once tau_n ≡ 0, V^n is +inf everywhere and theta_{n+1} ≡ T
        let game = game_s();
        let state = IterationState {
            n: 2,
            tau: StoppingTime::constant(2, 0),
            nu: StoppingTime::constant(2, 1),
            theta_list: vec![StoppingTime::constant(2, 1)],
            tau_tilde: None,
            nu_tilde: None,
        };
        let next = iterate_once(&game, &state).unwrap();
        assert_eq!(next.theta(), Some(&StoppingTime::constant(2, game.horizon())));
    }

    #[test]
    fn constant_game_stops_at_once() {
        let n = 3;
        let space = SampleSpace::uniform(n).unwrap();
        let f = Filtration::discrete(n, 2);
        let g = Filtration::trivial(n, 2);
        let c1 = AdaptedProcess::constant(2, n, int(4));
        let c2 = AdaptedProcess::constant(2, n, int(-1));
        let game = GameSpec::new(space, f, g, c1.clone(), c1, c2.clone(), c2).unwrap();
        let res = solve(&game).unwrap();
        assert_eq!(res.tau_star, StoppingTime::constant(n, 0));
        assert_eq!(res.theta_star, StoppingTime::constant(n, 0));
        assert!(check_corollary(&game, &res));
    }
}
