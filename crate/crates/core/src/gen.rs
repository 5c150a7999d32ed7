//! Seeded random games and stopping times for property tests and sweeps.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::game::{GameMeta, GameSpec};
use crate::prob::{AdaptedProcess, Filtration, Partition, SampleSpace, StoppingTime};
use crate::rational::{ratio, Rational};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GenOptions {
    pub outcomes: usize,
    pub horizon: usize,
    /// Raise `X1` to `max(X1, Y1)` pointwise.
    pub ensure_condition9: bool,
    /// Give Player 2 the same information as Player 1.
    pub symmetric: bool,
}

impl GenOptions {
    pub fn new(outcomes: usize, horizon: usize) -> Self {
        GenOptions {
            outcomes,
            horizon,
            ensure_condition9: false,
            symmetric: false,
        }
    }

    pub fn condition9(mut self) -> Self {
        self.ensure_condition9 = true;
        self
    }

    pub fn symmetric(mut self) -> Self {
        self.symmetric = true;
        self
    }
}

pub fn rng_for(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Splits each cell into up to three random pieces.
fn random_split(rng: &mut impl Rng, p: &Partition, split_prob: f64) -> Partition {
    let mut labels = vec![(0usize, 0usize); p.num_outcomes()];
    for (k, cell) in p.cells().iter().enumerate() {
        let pieces = if cell.len() > 1 && rng.gen_bool(split_prob) {
            rng.gen_range(2..=3.min(cell.len()))
        } else {
            1
        };
        for &w in cell {
            labels[w] = (k, rng.gen_range(0..pieces));
        }
    }
    Partition::from_labels(&labels)
}

/// Merges cells by random labels.
fn random_coarsening(rng: &mut impl Rng, p: &Partition) -> Partition {
    let groups = rng.gen_range(1..=p.num_cells());
    let cell_label: Vec<usize> = (0..p.num_cells()).map(|_| rng.gen_range(0..groups)).collect();
    let labels: Vec<usize> = (0..p.num_outcomes()).map(|w| cell_label[p.cell_of(w)]).collect();
    Partition::from_labels(&labels)
}

pub fn random_filtration(rng: &mut impl Rng, n: usize, horizon: usize) -> Filtration {
    let mut parts = vec![random_split(rng, &Partition::trivial(n), 0.3)];
    for _ in 0..horizon {
        let next = random_split(rng, parts.last().unwrap(), 0.6);
        parts.push(next);
    }
    Filtration::new(parts).expect("splits refine")
}

/// A filtration coarser than `f` at every time and refining in time.
pub fn random_coarser_filtration(rng: &mut impl Rng, f: &Filtration) -> Filtration {
    let mut parts = vec![random_coarsening(rng, f.part(0))];
    for t in 1..=f.horizon() {
        let fresh = random_coarsening(rng, f.part(t));
        parts.push(fresh.common_refinement(&parts[t - 1]));
    }
    Filtration::new(parts).expect("common refinement refines")
}

fn grid_value(rng: &mut impl Rng) -> Rational {
    ratio(rng.gen_range(-6..=6), 2)
}

pub fn random_process(rng: &mut impl Rng, h: &Filtration) -> AdaptedProcess {
    let rows = h
        .parts()
        .iter()
        .map(|p| {
            let per_cell: Vec<Rational> = (0..p.num_cells()).map(|_| grid_value(rng)).collect();
            (0..p.num_outcomes())
                .map(|w| per_cell[p.cell_of(w)].clone())
                .collect()
        })
        .collect();
    AdaptedProcess::new(rows).expect("rectangular")
}

pub fn random_space(rng: &mut impl Rng, n: usize) -> SampleSpace {
    let weights: Vec<i64> = (0..n).map(|_| rng.gen_range(1..=4)).collect();
    let total: i64 = weights.iter().sum();
    SampleSpace::new(
        (0..n).map(|i| format!("w{i}")).collect(),
        weights.iter().map(|&k| ratio(k, total)).collect(),
    )
    .expect("positive weights")
}

/// Deterministic in `seed`.
pub fn generate(seed: u64, opts: &GenOptions) -> GameSpec {
    assert!(opts.outcomes >= 1 && opts.horizon >= 1, "need outcomes >= 1 and horizon >= 1");
    let mut rng = rng_for(seed);
    let n = opts.outcomes;
    let space = random_space(&mut rng, n);
    let f = random_filtration(&mut rng, n, opts.horizon);
    let g = if opts.symmetric {
        f.clone()
    } else {
        random_coarser_filtration(&mut rng, &f)
    };
    let mut x1 = random_process(&mut rng, &f);
    let y1 = random_process(&mut rng, &f);
    let x2 = random_process(&mut rng, &g);
    let y2 = random_process(&mut rng, &g);
    if opts.ensure_condition9 {
        x1 = x1.map(|t, w, x| x.max(y1.at(t, w)).clone());
    }
    let mut game = GameSpec::new(space, f, g, x1, y1, x2, y2).expect("generated game is valid");
    game.meta = GameMeta {
        name: Some(format!("gen-{seed}")),
        seed: Some(seed),
    };
    game
}

/// Walks forward in time, stopping each still-running cell of `h_t` with
/// probability `stop_prob`; forced stop at `T`.
pub fn random_stopping_time(rng: &mut impl Rng, h: &Filtration, stop_prob: f64) -> StoppingTime {
    let horizon = h.horizon();
    let mut times: Vec<Option<usize>> = vec![None; h.num_outcomes()];
    for t in 0..horizon {
        for cell in h.part(t).cells() {
            if times[cell[0]].is_none() && rng.gen_bool(stop_prob) {
                for &w in cell {
                    times[w] = Some(t);
                }
            }
        }
    }
    StoppingTime::new(times.into_iter().map(|s| s.unwrap_or(horizon)).collect())
}

/// Random desk-scale shape: `1..=max_outcomes` outcomes, `1..=max_horizon` periods.
pub fn random_shape(rng: &mut impl Rng, max_outcomes: usize, max_horizon: usize) -> (usize, usize) {
    let sizes: Vec<usize> = (1..=max_outcomes).collect();
    let n = *sizes.choose(rng).expect("nonempty");
    (n, rng.gen_range(1..=max_horizon))
}
