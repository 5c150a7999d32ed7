//! Small hand-checkable games used by tests, examples and the CLI docs.

use crate::game::{GameMeta, GameSpec};
use crate::prob::{AdaptedProcess, Filtration, Partition, SampleSpace, StoppingTime};
use crate::rational::{int, ratio, Rational};

fn two_outcomes() -> SampleSpace {
    SampleSpace::new(vec!["a".into(), "b".into()], vec![ratio(1, 2), ratio(1, 2)])
        .expect("valid space")
}

fn deterministic(values: &[i64]) -> AdaptedProcess {
    AdaptedProcess::new(values.iter().map(|&v| vec![int(v), int(v)]).collect())
        .expect("valid process")
}

fn by_outcome(rows: &[[i64; 2]]) -> AdaptedProcess {
    AdaptedProcess::new(
        rows.iter()
            .map(|r| r.iter().map(|&v| int(v)).collect::<Vec<Rational>>())
            .collect(),
    )
    .expect("valid process")
}

/// One-period game: Player 1 sees the outcome at `t = 1`, Player 2 never
/// does. `X1 = (2; 4, 0)`, `Y1 = 0`, `X2 = 0`, `Y2 = 1`.
pub fn game_s() -> GameSpec {
    let f = Filtration::new(vec![Partition::trivial(2), Partition::discrete(2)]).expect("valid F");
    let mut game = GameSpec::new(
        two_outcomes(),
        f,
        Filtration::trivial(2, 1),
        by_outcome(&[[2, 2], [4, 0]]),
        deterministic(&[0, 0]),
        deterministic(&[0, 0]),
        deterministic(&[1, 1]),
    )
    .expect("valid game");
    game.meta = GameMeta {
        name: Some("game-s".into()),
        seed: None,
    };
    game
}

/// Two-period game with deterministic Player 2 payoffs `X2 = (0, 3, 0)`,
/// `Y2 = (0, 0, 5)`; used with [`game_t_tau`].
pub fn game_t() -> GameSpec {
    let f = Filtration::new(vec![
        Partition::trivial(2),
        Partition::discrete(2),
        Partition::discrete(2),
    ])
    .expect("valid F");
    let mut game = GameSpec::new(
        two_outcomes(),
        f,
        Filtration::trivial(2, 2),
        by_outcome(&[[1, 1], [2, 0], [0, 3]]),
        deterministic(&[0, 0, 0]),
        deterministic(&[0, 3, 0]),
        deterministic(&[0, 0, 5]),
    )
    .expect("valid game");
    game.meta = GameMeta {
        name: Some("game-t".into()),
        seed: None,
    };
    game
}

/// `tau(a) = 1`, `tau(b) = 2`.
pub fn game_t_tau() -> StoppingTime {
    StoppingTime::new(vec![1, 2])
}
