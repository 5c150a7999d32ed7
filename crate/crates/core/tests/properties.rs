mod common;

use std::collections::BTreeSet;

use num_bigint::BigUint;
use proptest::prelude::*;

use asymstop::asym::{augment_filtration, v_process};
use asymstop::equilibrium::{iterate_once, IterationState};
use asymstop::fixtures::{game_t, game_t_tau};
use asymstop::format::GameFile;
use asymstop::gen::{
    generate, random_filtration, random_process, random_space, random_stopping_time, rng_for,
    GenOptions,
};
use asymstop::prob::{
    conditional_expectation, count_stopping_times, enumerate_stopping_times, is_stopping_time,
    AdaptedProcess, StoppingTime,
};
use asymstop::rational::{int, ratio, Rational};
use asymstop::snell::{snell_envelope, value_of_stopping};
use asymstop::verify::{best_response_1, best_response_2, j1, j2};

use common::{p2_payoff, v_by_enumeration};

fn shape() -> impl Strategy<Value = (u64, usize, usize)> {
    (any::<u64>(), 1usize..=5, 1usize..=3)
}

/// All maps `outcome -> [from, T]`, kept when they are stopping times.
fn brute_force_stopping_times(
    h: &asymstop::Filtration,
    from: usize,
) -> BTreeSet<Vec<usize>> {
    let n = h.num_outcomes();
    let span = h.horizon() - from + 1;
    let mut out = BTreeSet::new();
    for code in 0..span.pow(n as u32) {
        let mut c = code;
        let times: Vec<usize> = (0..n)
            .map(|_| {
                let t = from + c % span;
                c /= span;
                t
            })
            .collect();
        let s = StoppingTime::new(times.clone());
        if is_stopping_time(&s, h).unwrap() {
            out.insert(times);
        }
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn refinement_is_transitive((seed, n, horizon) in shape()) {
        let mut rng = rng_for(seed);
        let f = random_filtration(&mut rng, n, horizon);
        for r in 0..=horizon {
            for s in r..=horizon {
                prop_assert!(f.part(s).refines(f.part(r)));
            }
        }
        let other = random_filtration(&mut rng, n, horizon);
        let joint = f.part(horizon).common_refinement(other.part(horizon));
        prop_assert!(joint.refines(f.part(horizon)) && joint.refines(other.part(horizon)));
    }

    #[test]
    fn tower_property((seed, n, horizon) in shape()) {
        let mut rng = rng_for(seed);
        let space = random_space(&mut rng, n);
        let h = random_filtration(&mut rng, n, horizon);
        let f: Vec<Rational> = random_process(&mut rng, &h).row(horizon).to_vec();
        let mu = space.measure();
        for r in 0..=horizon {
            let direct = conditional_expectation(&f, h.part(r), &mu).unwrap();
            for s in r..=horizon {
                let inner = conditional_expectation(&f, h.part(s), &mu).unwrap();
                prop_assert_eq!(&conditional_expectation(&inner, h.part(r), &mu).unwrap(), &direct);
            }
        }
    }

    #[test]
    fn enumeration_matches_brute_force(seed in any::<u64>(), n in 1usize..=4, horizon in 1usize..=2) {
        let h = random_filtration(&mut rng_for(seed), n, horizon);
        for from in 0..=horizon {
            let listed: Vec<Vec<usize>> = enumerate_stopping_times(&h, from)
                .map(|s| s.times().to_vec())
                .collect();
            let unique: BTreeSet<Vec<usize>> = listed.iter().cloned().collect();
            prop_assert_eq!(unique.len(), listed.len());
            prop_assert_eq!(&unique, &brute_force_stopping_times(&h, from));
            prop_assert_eq!(count_stopping_times(&h, from), BigUint::from(listed.len()));
        }
    }

    #[test]
    fn conditional_measure_is_a_probability((seed, n, _h) in shape(), mask in any::<u8>()) {
        let space = random_space(&mut rng_for(seed), n);
        let event: Vec<bool> = (0..n).map(|w| mask >> w & 1 == 1).collect();
        match space.condition(&event) {
            Err(_) => prop_assert!(event.iter().all(|&b| !b)),
            Ok(cond) => {
                let total: Rational = cond.measure().weights().iter().sum();
                prop_assert_eq!(total, int(1));
                for w in 0..n {
                    prop_assert_eq!(event[w], *cond.measure().weight(w) > int(0));
                }
            }
        }
    }

    #[test]
    fn envelope_is_a_dominating_supermartingale((seed, n, horizon) in shape()) {
        let mut rng = rng_for(seed);
        let space = random_space(&mut rng, n);
        let h = random_filtration(&mut rng, n, horizon);
        let u = random_process(&mut rng, &h);
        let mu = space.measure();
        let env = snell_envelope(&u, &h, &mu).unwrap();
        for t in 0..=horizon {
            for w in 0..n {
                prop_assert!(env.envelope.at(t, w) >= u.at(t, w));
            }
        }
        for t in 0..horizon {
            let next = conditional_expectation(env.envelope.row(t + 1), h.part(t), &mu).unwrap();
            for w in 0..n {
                prop_assert!(env.envelope.at(t, w) >= &next[w]);
            }
        }
    }

    #[test]
    fn minimal_rule_attains_and_is_minimal((seed, n, horizon) in shape()) {
        let mut rng = rng_for(seed);
        let space = random_space(&mut rng, n);
        let h = random_filtration(&mut rng, n, horizon);
        let u = random_process(&mut rng, &h);
        let mu = space.measure();
        let env = snell_envelope(&u, &h, &mu).unwrap();
        for t in 0..=horizon {
            let best = &env.minimal_from[t];
            prop_assert!(is_stopping_time(best, &h).unwrap());
            let attained =
                conditional_expectation(&common::stopped(&u, best), h.part(t), &mu).unwrap();
            prop_assert_eq!(attained.as_slice(), env.envelope.row(t));
            // any rule attaining the envelope from t stops no earlier
            for s in enumerate_stopping_times(&h, t) {
                let got = conditional_expectation(&common::stopped(&u, &s), h.part(t), &mu).unwrap();
                if got.as_slice() == env.envelope.row(t) {
                    prop_assert!(best.pointwise_le(&s));
                }
            }
        }
        prop_assert_eq!(value_of_stopping(&u, &env.minimal_from[0], &mu),
            mu.expectation(env.envelope.row(0)));
    }

    #[test]
    fn envelope_monotone_and_shift_covariant((seed, n, horizon) in shape(), bump in 0i64..4) {
        let mut rng = rng_for(seed);
        let space = random_space(&mut rng, n);
        let h = random_filtration(&mut rng, n, horizon);
        let u = random_process(&mut rng, &h);
        let extra = random_process(&mut rng, &h).map(|_, _, x| if *x > int(0) { x.clone() } else { int(0) });
        let mu = space.measure();
        let base = snell_envelope(&u, &h, &mu).unwrap().envelope;
        let higher = snell_envelope(&u.map(|t, w, x| x + extra.at(t, w)), &h, &mu).unwrap().envelope;
        let c = ratio(bump, 2);
        let shifted = snell_envelope(&u.map(|_, _, x| x + &c), &h, &mu).unwrap().envelope;
        for t in 0..=horizon {
            for w in 0..n {
                prop_assert!(higher.at(t, w) >= base.at(t, w));
                prop_assert_eq!(shifted.at(t, w), &(base.at(t, w) + &c));
            }
        }
    }

    #[test]
    fn v_matches_enumeration_and_collapses((seed, n, horizon) in shape()) {
        let game = generate(seed, &GenOptions::new(n, horizon));
        let tau = random_stopping_time(&mut rng_for(seed ^ 1), game.f(), 0.3);
        let v = v_process(&game, &tau).unwrap();
        let aug = augment_filtration(game.g(), &tau).unwrap();
        prop_assert!(aug.filtration.part(horizon).refines(game.g().part(horizon)));
        for t in 0..horizon {
            let oracle = v_by_enumeration(&game, &tau, t);
            for w in 0..n {
                match &oracle[w] {
                    Some(x) => prop_assert!(v.at(t, w).equals(x)),
                    None => prop_assert!(tau.at(w) <= t),
                }
            }
        }
    }

    #[test]
    fn j2_ignores_moves_after_tau((seed, n, horizon) in shape()) {
        let game = generate(seed, &GenOptions::new(n, horizon));
        let mut rng = rng_for(seed ^ 2);
        let tau = random_stopping_time(&mut rng, game.f(), 0.3);
        let nu = random_stopping_time(&mut rng, game.g(), 0.3);
        prop_assert_eq!(j2(&game, &tau, &nu), j2(&game, &tau, &nu.pointwise_min(&tau)));
        prop_assert_eq!(j1(&game, &tau, &nu), j1(&game, &tau, &tau.pointwise_min(&nu)));
    }

    #[test]
    fn fast_best_responses_match_enumeration(seed in any::<u64>(), n in 1usize..=4, horizon in 1usize..=3) {
        let game = generate(seed, &GenOptions::new(n, horizon));
        let mut rng = rng_for(seed ^ 3);
        let tau = random_stopping_time(&mut rng, game.f(), 0.3);
        let nu = random_stopping_time(&mut rng, game.g(), 0.3);
        let best1 = enumerate_stopping_times(game.f(), 0).map(|s| j1(&game, &s, &nu)).max().unwrap();
        let best2 = enumerate_stopping_times(game.g(), 0).map(|s| j2(&game, &tau, &s)).max().unwrap();
        let (s1, v1) = best_response_1(&game, &nu).unwrap();
        let (s2, v2) = best_response_2(&game, &tau).unwrap();
        prop_assert_eq!(&v1, &best1);
        prop_assert_eq!(&v2, &best2);
        prop_assert_eq!(j1(&game, &s1, &nu), v1);
        prop_assert_eq!(j2(&game, &tau, &s2), v2);
    }

    #[test]
    fn rounds_keep_the_nu_tilde_identity((seed, n, horizon) in shape()) {
        let game = generate(seed, &GenOptions::new(n, horizon).condition9());
        let first = IterationState::initial(&game);
        let second = iterate_once(&game, &first).unwrap();
        let theta = second.theta().unwrap();
        prop_assert_eq!(second.nu_tilde.clone().unwrap(), theta.pointwise_min(&first.tau));
        prop_assert!(second.tau.pointwise_le(&first.tau));
        prop_assert!(second.nu.pointwise_le(&first.nu));
    }

    #[test]
    fn game_files_round_trip((seed, n, horizon) in shape(), symmetric in any::<bool>()) {
        let mut opts = GenOptions::new(n, horizon);
        opts.symmetric = symmetric;
        let game = generate(seed, &opts);
        let text = GameFile::from_game(&game).to_json();
        let back: GameFile = serde_json::from_str(&text).unwrap();
        prop_assert_eq!(back.to_game().unwrap(), game);
    }
}

#[test]
fn conditioned_payoff_on_the_three_period_fixture() {
    let game = game_t();
    let tau = game_t_tau();
    let cond = game.space().condition(&tau.alive_after(0)).unwrap();
    let theta = StoppingTime::constant(game.num_outcomes(), 2);
    let value = conditional_expectation(
        &p2_payoff(&game, &tau, &theta),
        game.g().part(0),
        cond.measure(),
    )
    .unwrap();
    assert_eq!(value, vec![ratio(5, 2), ratio(5, 2)]);
}

#[test]
fn constant_reward_envelope_is_flat() {
    let h = random_filtration(&mut rng_for(5), 4, 3);
    let u = AdaptedProcess::constant(3, 4, ratio(-7, 3));
    let space = random_space(&mut rng_for(6), 4);
    let env = snell_envelope(&u, &h, &space.measure()).unwrap();
    assert_eq!(env.envelope, u);
    assert_eq!(env.minimal_from[0], StoppingTime::constant(4, 0));
}
