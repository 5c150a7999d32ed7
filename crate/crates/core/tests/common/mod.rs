//! Brute-force oracles. They only use enumeration of stopping times and plain
//! conditional averages, never the backward-induction code they check.

#![allow(dead_code)]

use asymstop::prob::{
    conditional_expectation_with, enumerate_stopping_times, AdaptedProcess, Filtration, Measure,
    StoppingTime, ZeroMass,
};
use asymstop::rational::{ExtRational, Rational};
use asymstop::GameSpec;

/// `U_s` as an outcome vector.
pub fn stopped(u: &AdaptedProcess, s: &StoppingTime) -> Vec<Rational> {
    (0..u.num_outcomes()).map(|w| u.at(s.at(w), w).clone()).collect()
}

/// Max over every stopping time from `t` of `E_mu[U_s | H_t]`, outcome by outcome.
pub fn envelope_by_enumeration(
    u: &AdaptedProcess,
    h: &Filtration,
    mu: &Measure,
    t: usize,
) -> Vec<Rational> {
    let mut best: Option<Vec<Rational>> = None;
    for s in enumerate_stopping_times(h, t) {
        let cond = conditional_expectation_with(&stopped(u, &s), h.part(t), mu, ZeroMass::Reject)
            .expect("full support");
        let cond: Vec<Rational> = cond
            .into_iter()
            .map(|v| v.finite().cloned().expect("finite"))
            .collect();
        best = Some(match best {
            None => cond,
            Some(b) => b
                .into_iter()
                .zip(cond)
                .map(|(a, c)| if c > a { c } else { a })
                .collect(),
        });
    }
    best.expect("at least one stopping time")
}

/// Player 2's realized payoff when stopping at `theta` against `tau`.
pub fn p2_payoff(game: &GameSpec, tau: &StoppingTime, theta: &StoppingTime) -> Vec<Rational> {
    (0..game.num_outcomes())
        .map(|w| {
            let (t, s) = (tau.at(w), theta.at(w));
            if s < t {
                game.x2().at(s, w).clone()
            } else {
                game.y2().at(t, w).clone()
            }
        })
        .collect()
}

/// Max over `theta` in `T_t(G)` of `E_{P|tau>t}[payoff | G_t]`; `None` on
/// cells with zero conditional mass (or when `{tau > t}` is null).
pub fn v_by_enumeration(game: &GameSpec, tau: &StoppingTime, t: usize) -> Vec<Option<Rational>> {
    let n = game.num_outcomes();
    let alive = tau.alive_after(t);
    let Ok(cond) = game.space().condition(&alive) else {
        return vec![None; n];
    };
    let mut best: Vec<Option<Rational>> = vec![None; n];
    for theta in enumerate_stopping_times(game.g(), t) {
        let vals = conditional_expectation_with(
            &p2_payoff(game, tau, &theta),
            game.g().part(t),
            cond.measure(),
            ZeroMass::PlusInfinity,
        )
        .unwrap();
        for w in 0..n {
            if let ExtRational::Finite(v) = &vals[w] {
                if best[w].as_ref().map_or(true, |b| v > b) {
                    best[w] = Some(v.clone());
                }
            }
        }
    }
    best
}

pub fn all_equal_pointwise(a: &[Rational], b: &[Rational]) -> bool {
    a.len() == b.len() && a.iter().zip(b).all(|(x, y)| x == y)
}
