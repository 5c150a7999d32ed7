use crate::error::{Error, Result};
use crate::prob::{check_filtration_pair, AdaptedProcess, Filtration, SampleSpace};

/// Optional descriptive fields carried through files.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct GameMeta {
    pub name: Option<String>,
    pub seed: Option<u64>,
}

/// A two-player stopping game: Player 1 observes `f` and is paid `x1` when
/// stopping first (or simultaneously), `y1` when stopped by Player 2. Player 2
/// observes the coarser `g`, with payoffs `x2`/`y2`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GameSpec {
    space: SampleSpace,
    f: Filtration,
    g: Filtration,
    x1: AdaptedProcess,
    y1: AdaptedProcess,
    x2: AdaptedProcess,
    y2: AdaptedProcess,
    pub meta: GameMeta,
}

impl GameSpec {
    pub fn new(
        space: SampleSpace,
        f: Filtration,
        g: Filtration,
        x1: AdaptedProcess,
        y1: AdaptedProcess,
        x2: AdaptedProcess,
        y2: AdaptedProcess,
    ) -> Result<Self> {
        let game = GameSpec::unchecked(space, f, g, x1, y1, x2, y2);
        match game.violations().into_iter().next() {
            Some(e) => Err(e),
            None => Ok(game),
        }
    }

    pub(crate) fn unchecked(
        space: SampleSpace,
        f: Filtration,
        g: Filtration,
        x1: AdaptedProcess,
        y1: AdaptedProcess,
        x2: AdaptedProcess,
        y2: AdaptedProcess,
    ) -> Self {
        GameSpec {
            space,
            f,
            g,
            x1,
            y1,
            x2,
            y2,
            meta: GameMeta::default(),
        }
    }

    /// Every hard violation of the model assumptions, in a stable order.
    pub fn violations(&self) -> Vec<Error> {
        let mut out = Vec::new();
        let n = self.space.len();
        let horizon = self.f.horizon();
        if self.g.horizon() != horizon {
            out.push(Error::HorizonMismatch {
                expected: horizon,
                found: self.g.horizon(),
            });
            return out;
        }
        for (name, h) in [("F", &self.f), ("G", &self.g)] {
            if h.num_outcomes() != n {
                out.push(Error::InvalidPartition(format!(
                    "filtration {name} covers {} outcomes, sample space has {n}",
                    h.num_outcomes()
                )));
            }
        }
        if !out.is_empty() {
            return out;
        }
        if let Ok(false) = check_filtration_pair(&self.f, &self.g) {
            for t in 0..=horizon {
                if !self.f.part(t).refines(self.g.part(t)) {
                    out.push(Error::InformationNotNested(t));
                }
            }
        }
        let procs = [
            ("X1", &self.x1, &self.f, "F"),
            ("Y1", &self.y1, &self.f, "F"),
            ("X2", &self.x2, &self.g, "G"),
            ("Y2", &self.y2, &self.g, "G"),
        ];
        for (name, p, h, hname) in procs {
            if p.horizon() != horizon || p.num_outcomes() != n {
                out.push(Error::ProcessShape {
                    name: name.into(),
                    detail: format!(
                        "expected {} x {n}, found {} x {}",
                        horizon + 1,
                        p.horizon() + 1,
                        p.num_outcomes()
                    ),
                });
                continue;
            }
            for t in 0..=horizon {
                if !h.part(t).is_constant_on_cells(p.row(t)) {
                    out.push(Error::NotAdapted {
                        name: name.into(),
                        filtration: hname.into(),
                        t,
                    });
                }
            }
        }
        out
    }

    pub fn space(&self) -> &SampleSpace {
        &self.space
    }

    pub fn f(&self) -> &Filtration {
        &self.f
    }

    pub fn g(&self) -> &Filtration {
        &self.g
    }

    pub fn x1(&self) -> &AdaptedProcess {
        &self.x1
    }

    pub fn y1(&self) -> &AdaptedProcess {
        &self.y1
    }

    pub fn x2(&self) -> &AdaptedProcess {
        &self.x2
    }

    pub fn y2(&self) -> &AdaptedProcess {
        &self.y2
    }

    pub fn horizon(&self) -> usize {
        self.f.horizon()
    }

    pub fn num_outcomes(&self) -> usize {
        self.space.len()
    }

    /// `(t, outcome)` pairs where `X1 < Y1`.
    pub fn condition9_violations(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for t in 0..=self.horizon() {
            for w in 0..self.num_outcomes() {
                if self.x1.at(t, w) < self.y1.at(t, w) {
                    out.push((t, w));
                }
            }
        }
        out
    }

    /// `X1_t >= Y1_t` everywhere: the sufficient condition for the
    /// constructed pair to be an equilibrium.
    pub fn satisfies_condition9(&self) -> bool {
        self.condition9_violations().is_empty()
    }

    pub(crate) fn with_x1(&self, x1: AdaptedProcess) -> GameSpec {
        GameSpec {
            x1,
            ..self.clone()
        }
    }
}
