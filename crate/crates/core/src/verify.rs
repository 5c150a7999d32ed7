//! Payoff functionals, best responses and Nash certification.

use num_bigint::BigUint;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::game::GameSpec;
use crate::prob::{
    conditional_expectation, count_stopping_times, enumerate_stopping_times, Filtration,
    StoppingTime,
};
use crate::rational::{is_positive, Rational};
use crate::snell::snell_envelope;

/// Default limit on the size of each strategy space the exhaustive check
/// will walk.
pub const DEFAULT_EXHAUSTIVE_CAP: u64 = 1_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    FastPath,
    Exhaustive,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerificationReport {
    pub j1_achieved: Rational,
    pub j2_achieved: Rational,
    pub j1_best: Rational,
    pub j2_best: Rational,
    /// Minimal profitable deviation of Player 1, present iff `j1_best > j1_achieved`.
    pub p1_deviation: Option<StoppingTime>,
    pub p2_deviation: Option<StoppingTime>,
    pub is_nash: bool,
    pub method: Method,
}

/// `E[X1_tau 1{tau <= nu} + Y1_nu 1{tau > nu}]`.
pub fn j1(game: &GameSpec, tau: &StoppingTime, nu: &StoppingTime) -> Rational {
    let space = game.space();
    (0..space.len())
        .map(|w| {
            let (t, s) = (tau.at(w), nu.at(w));
            let pay = if t <= s {
                game.x1().at(t, w)
            } else {
                game.y1().at(s, w)
            };
            space.prob(w) * pay
        })
        .sum()
}

/// `E[X2_nu 1{nu < tau} + Y2_tau 1{tau <= nu}]`; simultaneous stops pay as
/// if Player 1 stopped alone.
pub fn j2(game: &GameSpec, tau: &StoppingTime, nu: &StoppingTime) -> Rational {
    let space = game.space();
    (0..space.len())
        .map(|w| {
            let (t, s) = (tau.at(w), nu.at(w));
            let pay = if s < t {
                game.x2().at(s, w)
            } else {
                game.y2().at(t, w)
            };
            space.prob(w) * pay
        })
        .sum()
}

/// Player 1's optimal reply to `nu`: stop on the Snell envelope of
/// `X1_t 1{t <= nu} + Y1_nu 1{t > nu}` over `F`.
pub fn best_response_1(game: &GameSpec, nu: &StoppingTime) -> Result<(StoppingTime, Rational)> {
    let reward = game.x1().map(|t, w, x| {
        let s = nu.at(w);
        if t <= s {
            x.clone()
        } else {
            game.y1().at(s, w).clone()
        }
    });
    let prob = game.space().measure();
    let env = snell_envelope(&reward, game.f(), &prob)?;
    let value = prob.expectation(env.envelope.row(0));
    Ok((env.minimal_from[0].clone(), value))
}

/// Player 2's optimal reply to `tau` among `G` stopping times.
///
/// Since `{nu = t}` is `G_t`-measurable, the payoff of any `G` rule equals
/// `E[Z_nu]` with `Z_t = E[X2_t 1{tau > t} + Y2_tau 1{tau <= t} | G_t]`.
pub fn best_response_2(game: &GameSpec, tau: &StoppingTime) -> Result<(StoppingTime, Rational)> {
    let prob = game.space().measure();
    let rows = (0..=game.horizon())
        .map(|t| {
            let raw: Vec<Rational> = (0..game.num_outcomes())
                .map(|w| {
                    let s = tau.at(w);
                    if s > t {
                        game.x2().at(t, w).clone()
                    } else {
                        game.y2().at(s, w).clone()
                    }
                })
                .collect();
            conditional_expectation(&raw, game.g().part(t), &prob)
        })
        .collect::<Result<Vec<_>>>()?;
    let reward = crate::prob::AdaptedProcess::new(rows)?;
    let env = snell_envelope(&reward, game.g(), &prob)?;
    let value = prob.expectation(env.envelope.row(0));
    Ok((env.minimal_from[0].clone(), value))
}

fn check_cap(h: &Filtration, cap: u64) -> Result<()> {
    let count: BigUint = count_stopping_times(h, 0);
    match count.to_u64() {
        Some(c) if c <= cap => Ok(()),
        _ => Err(Error::InstanceTooLarge {
            count: count.to_string(),
            cap,
        }),
    }
}

/// Maximizer by brute force; among maximizers the one with the smallest total
/// stopping time (the pointwise-minimal attainer when one exists).
fn argmax_over(
    h: &Filtration,
    cap: u64,
    mut payoff: impl FnMut(&StoppingTime) -> Rational,
) -> Result<(StoppingTime, Rational)> {
    check_cap(h, cap)?;
    let mut best: Option<(StoppingTime, Rational, usize)> = None;
    for s in enumerate_stopping_times(h, 0) {
        let value = payoff(&s);
        let weight: usize = s.times().iter().sum();
        let better = match &best {
            None => true,
            Some((bs, bv, bw)) => {
                value > *bv || (value == *bv && (weight, &s) < (*bw, bs))
            }
        };
        if better {
            best = Some((s, value, weight));
        }
    }
    let (s, v, _) = best.expect("at least one stopping time exists");
    Ok((s, v))
}

pub fn exhaustive_best_response_1(
    game: &GameSpec,
    nu: &StoppingTime,
    cap: u64,
) -> Result<(StoppingTime, Rational)> {
    argmax_over(game.f(), cap, |tau| j1(game, tau, nu))
}

pub fn exhaustive_best_response_2(
    game: &GameSpec,
    tau: &StoppingTime,
    cap: u64,
) -> Result<(StoppingTime, Rational)> {
    argmax_over(game.g(), cap, |nu| j2(game, tau, nu))
}

pub fn verify_nash(
    game: &GameSpec,
    tau: &StoppingTime,
    nu: &StoppingTime,
    method: Method,
) -> Result<VerificationReport> {
    verify_nash_capped(game, tau, nu, method, DEFAULT_EXHAUSTIVE_CAP)
}

/// [`verify_nash`] with an explicit cap for the exhaustive method.
pub fn verify_nash_capped(
    game: &GameSpec,
    tau: &StoppingTime,
    nu: &StoppingTime,
    method: Method,
    cap: u64,
) -> Result<VerificationReport> {
    let j1_achieved = j1(game, tau, nu);
    let j2_achieved = j2(game, tau, nu);
    let ((br1, j1_best), (br2, j2_best)) = match method {
        Method::FastPath => (best_response_1(game, nu)?, best_response_2(game, tau)?),
        Method::Exhaustive => (
            exhaustive_best_response_1(game, nu, cap)?,
            exhaustive_best_response_2(game, tau, cap)?,
        ),
    };
    let p1_deviation = (j1_best > j1_achieved).then_some(br1);
    let p2_deviation = (j2_best > j2_achieved).then_some(br2);
    Ok(VerificationReport {
        is_nash: j1_best == j1_achieved && j2_best == j2_achieved,
        j1_achieved,
        j2_achieved,
        j1_best,
        j2_best,
        p1_deviation,
        p2_deviation,
        method,
    })
}

/// The same game with Player 1's stopping payoff raised by `eps`.
pub fn epsilon_game(game: &GameSpec, eps: &Rational) -> Result<GameSpec> {
    if !is_positive(eps) {
        return Err(Error::NonPositiveEpsilon);
    }
    Ok(game.with_x1(game.x1().map(|_, _, x| x + eps)))
}
