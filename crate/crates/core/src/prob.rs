//! Finite probability spaces and the objects built on them: partitions,
//! filtrations, adapted processes, stopping times and conditional
//! expectations.
//!
//! Outcomes are addressed by their index in the [`SampleSpace`]. Every
//! sigma-algebra on a finite space is generated by a partition, so a
//! filtration is a horizon-indexed list of refining partitions.

use std::collections::BTreeMap;

use itertools::Itertools;
use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::rational::{is_positive, ExtRational, Rational};

pub type Outcome = usize;

/// Finite outcome set with strictly positive probabilities summing to 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SampleSpace {
    ids: Vec<String>,
    probs: Vec<Rational>,
}

impl SampleSpace {
    pub fn new(ids: Vec<String>, probs: Vec<Rational>) -> Result<Self> {
        if ids.is_empty() {
            return Err(Error::EmptySampleSpace);
        }
        if ids.len() != probs.len() {
            return Err(Error::Format(format!(
                "{} outcome ids but {} probabilities",
                ids.len(),
                probs.len()
            )));
        }
        for (i, id) in ids.iter().enumerate() {
            if ids[..i].contains(id) {
                return Err(Error::DuplicateOutcome(id.clone()));
            }
        }
        for (id, p) in ids.iter().zip(&probs) {
            if !is_positive(p) {
                return Err(Error::NonPositiveProbability(id.clone()));
            }
        }
        let total: Rational = probs.iter().sum();
        if !total.is_one() {
            return Err(Error::ProbabilitySum(crate::rational::format_rational(&total)));
        }
        Ok(SampleSpace { ids, probs })
    }

    /// `n` equally likely outcomes named `w0, w1, ...`.
    pub fn uniform(n: usize) -> Result<Self> {
        let ids = (0..n).map(|i| format!("w{i}")).collect();
        let p = Rational::new(1.into(), (n.max(1) as i64).into());
        SampleSpace::new(ids, vec![p; n])
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    pub fn ids(&self) -> &[String] {
        &self.ids
    }

    pub fn id(&self, w: Outcome) -> &str {
        &self.ids[w]
    }

    pub fn index_of(&self, id: &str) -> Option<Outcome> {
        self.ids.iter().position(|x| x == id)
    }

    pub fn prob(&self, w: Outcome) -> &Rational {
        &self.probs[w]
    }

    pub fn probs(&self) -> &[Rational] {
        &self.probs
    }

    pub fn measure(&self) -> Measure {
        Measure {
            weights: self.probs.clone(),
        }
    }

    /// `P( . | event)`; fails when the event is null.
    pub fn condition(&self, event: &[bool]) -> Result<ConditionalMeasure> {
        let mass: Rational = self
            .probs
            .iter()
            .zip(event)
            .filter(|(_, &inside)| inside)
            .map(|(p, _)| p)
            .sum();
        if mass.is_zero() {
            return Err(Error::NullEvent);
        }
        let weights = self
            .probs
            .iter()
            .zip(event)
            .map(|(p, &inside)| if inside { p / &mass } else { Rational::zero() })
            .collect();
        Ok(ConditionalMeasure {
            event: event.to_vec(),
            measure: Measure { weights },
        })
    }
}

/// Nonnegative weights over outcomes. Either the base probability or a
/// renormalized restriction of it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Measure {
    weights: Vec<Rational>,
}

impl Measure {
    pub fn weight(&self, w: Outcome) -> &Rational {
        &self.weights[w]
    }

    pub fn weights(&self) -> &[Rational] {
        &self.weights
    }

    pub fn mass(&self, outcomes: &[Outcome]) -> Rational {
        outcomes.iter().map(|&w| &self.weights[w]).sum()
    }

    pub fn expectation(&self, f: &[Rational]) -> Rational {
        self.weights.iter().zip(f).map(|(p, x)| p * x).sum()
    }
}

/// `P|event`: the base probability renormalized on a non-null event.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConditionalMeasure {
    event: Vec<bool>,
    measure: Measure,
}

impl ConditionalMeasure {
    pub fn event(&self) -> &[bool] {
        &self.event
    }

    pub fn measure(&self) -> &Measure {
        &self.measure
    }
}

impl AsRef<Measure> for Measure {
    fn as_ref(&self) -> &Measure {
        self
    }
}

impl AsRef<Measure> for ConditionalMeasure {
    fn as_ref(&self) -> &Measure {
        &self.measure
    }
}

/// Disjoint nonempty cells covering every outcome. Canonical form: each cell
/// sorted, cells ordered by their smallest outcome.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Partition {
    cells: Vec<Vec<Outcome>>,
    cell_of: Vec<usize>,
}

impl Partition {
    pub fn new(n: usize, cells: Vec<Vec<Outcome>>) -> Result<Self> {
        let mut seen = vec![false; n];
        for cell in &cells {
            if cell.is_empty() {
                return Err(Error::InvalidPartition("empty cell".into()));
            }
            for &w in cell {
                if w >= n {
                    return Err(Error::InvalidPartition(format!("outcome {w} out of range")));
                }
                if seen[w] {
                    return Err(Error::InvalidPartition(format!(
                        "outcome {w} appears in more than one cell"
                    )));
                }
                seen[w] = true;
            }
        }
        if let Some(w) = seen.iter().position(|s| !s) {
            return Err(Error::InvalidPartition(format!("outcome {w} is not covered")));
        }
        let mut labels = vec![0; n];
        for (k, cell) in cells.iter().enumerate() {
            for &w in cell {
                labels[w] = k;
            }
        }
        Ok(Partition::from_labels(&labels))
    }

    /// Groups outcomes sharing a label into one cell.
    pub fn from_labels<K: Ord + Clone>(labels: &[K]) -> Self {
        let mut first_seen: BTreeMap<K, usize> = BTreeMap::new();
        let mut cells: Vec<Vec<Outcome>> = Vec::new();
        let mut cell_of = vec![0; labels.len()];
        for (w, label) in labels.iter().enumerate() {
            let k = *first_seen.entry(label.clone()).or_insert_with(|| {
                cells.push(Vec::new());
                cells.len() - 1
            });
            cells[k].push(w);
            cell_of[w] = k;
        }
        Partition { cells, cell_of }
    }

    pub fn trivial(n: usize) -> Self {
        Partition::from_labels(&vec![0u8; n])
    }

    pub fn discrete(n: usize) -> Self {
        Partition::from_labels(&(0..n).collect::<Vec<_>>())
    }

    pub fn cells(&self) -> &[Vec<Outcome>] {
        &self.cells
    }

    pub fn num_cells(&self) -> usize {
        self.cells.len()
    }

    pub fn num_outcomes(&self) -> usize {
        self.cell_of.len()
    }

    pub fn cell_of(&self, w: Outcome) -> usize {
        self.cell_of[w]
    }

    pub fn cell(&self, k: usize) -> &[Outcome] {
        &self.cells[k]
    }

    /// True iff every cell of `self` lies inside one cell of `coarser`.
    pub fn refines(&self, coarser: &Partition) -> bool {
        self.num_outcomes() == coarser.num_outcomes()
            && self
                .cells
                .iter()
                .all(|cell| cell.iter().map(|&w| coarser.cell_of(w)).all_equal())
    }

    pub fn common_refinement(&self, other: &Partition) -> Partition {
        let labels: Vec<_> = (0..self.num_outcomes())
            .map(|w| (self.cell_of(w), other.cell_of(w)))
            .collect();
        Partition::from_labels(&labels)
    }

    /// True iff the indicator `event` is a union of cells.
    pub fn is_measurable(&self, event: &[bool]) -> bool {
        self.cells
            .iter()
            .all(|cell| cell.iter().map(|&w| event[w]).all_equal())
    }

    /// True iff `f` is constant on every cell.
    pub fn is_constant_on_cells<T: PartialEq>(&self, f: &[T]) -> bool {
        self.cells
            .iter()
            .all(|cell| cell.iter().map(|&w| &f[w]).all_equal())
    }
}

/// Refining partitions indexed by `t = 0..=T`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Filtration {
    parts: Vec<Partition>,
}

impl Filtration {
    pub fn new(parts: Vec<Partition>) -> Result<Self> {
        Filtration::named("filtration", parts)
    }

    /// Like [`Filtration::new`], tagging refinement errors with `name`.
    pub fn named(name: &str, parts: Vec<Partition>) -> Result<Self> {
        if parts.len() < 2 {
            return Err(Error::ZeroHorizon);
        }
        let n = parts[0].num_outcomes();
        for p in &parts {
            if p.num_outcomes() != n {
                return Err(Error::InvalidPartition(
                    "partitions cover different outcome sets".into(),
                ));
            }
        }
        for t in 1..parts.len() {
            if !parts[t].refines(&parts[t - 1]) {
                return Err(Error::NotRefining {
                    name: name.to_string(),
                    t,
                });
            }
        }
        Ok(Filtration { parts })
    }

    pub fn trivial(n: usize, horizon: usize) -> Self {
        Filtration {
            parts: vec![Partition::trivial(n); horizon + 1],
        }
    }

    pub fn discrete(n: usize, horizon: usize) -> Self {
        Filtration {
            parts: vec![Partition::discrete(n); horizon + 1],
        }
    }

    pub fn horizon(&self) -> usize {
        self.parts.len() - 1
    }

    pub fn num_outcomes(&self) -> usize {
        self.parts[0].num_outcomes()
    }

    pub fn part(&self, t: usize) -> &Partition {
        &self.parts[t]
    }

    pub fn parts(&self) -> &[Partition] {
        &self.parts
    }
}

/// True iff `fine` refines `coarse` at every time, i.e. `coarse_t ⊆ fine_t`.
pub fn check_filtration_pair(fine: &Filtration, coarse: &Filtration) -> Result<bool> {
    if fine.horizon() != coarse.horizon() {
        return Err(Error::HorizonMismatch {
            expected: fine.horizon(),
            found: coarse.horizon(),
        });
    }
    Ok(fine
        .parts
        .iter()
        .zip(&coarse.parts)
        .all(|(f, g)| f.refines(g)))
}

/// Values indexed by `(t, outcome)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AdaptedProcess {
    values: Vec<Vec<Rational>>,
}

impl AdaptedProcess {
    pub fn new(values: Vec<Vec<Rational>>) -> Result<Self> {
        if values.len() < 2 {
            return Err(Error::ZeroHorizon);
        }
        let n = values[0].len();
        if values.iter().any(|row| row.len() != n) {
            return Err(Error::ProcessShape {
                name: "process".into(),
                detail: "rows have different lengths".into(),
            });
        }
        Ok(AdaptedProcess { values })
    }

    pub fn from_fn(horizon: usize, n: usize, mut f: impl FnMut(usize, Outcome) -> Rational) -> Self {
        AdaptedProcess {
            values: (0..=horizon)
                .map(|t| (0..n).map(|w| f(t, w)).collect())
                .collect(),
        }
    }

    pub fn constant(horizon: usize, n: usize, c: Rational) -> Self {
        AdaptedProcess::from_fn(horizon, n, |_, _| c.clone())
    }

    pub fn horizon(&self) -> usize {
        self.values.len() - 1
    }

    pub fn num_outcomes(&self) -> usize {
        self.values[0].len()
    }

    pub fn at(&self, t: usize, w: Outcome) -> &Rational {
        &self.values[t][w]
    }

    pub fn row(&self, t: usize) -> &[Rational] {
        &self.values[t]
    }

    pub fn rows(&self) -> &[Vec<Rational>] {
        &self.values
    }

    /// First time at which the process is not constant on a cell of `h`.
    pub fn first_non_adapted(&self, h: &Filtration) -> Option<usize> {
        (0..=self.horizon()).find(|&t| !h.part(t).is_constant_on_cells(&self.values[t]))
    }

    pub fn is_adapted(&self, h: &Filtration) -> bool {
        self.horizon() == h.horizon()
            && self.num_outcomes() == h.num_outcomes()
            && self.first_non_adapted(h).is_none()
    }

    pub fn map(&self, mut f: impl FnMut(usize, Outcome, &Rational) -> Rational) -> Self {
        AdaptedProcess::from_fn(self.horizon(), self.num_outcomes(), |t, w| {
            f(t, w, &self.values[t][w])
        })
    }
}

/// An outcome → time map. Membership in a filtration's stopping-time class
/// is checked separately by [`is_stopping_time`].
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct StoppingTime(Vec<usize>);

impl StoppingTime {
    pub fn new(times: Vec<usize>) -> Self {
        StoppingTime(times)
    }

    pub fn constant(n: usize, t: usize) -> Self {
        StoppingTime(vec![t; n])
    }

    pub fn at(&self, w: Outcome) -> usize {
        self.0[w]
    }

    pub fn times(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn pointwise_min(&self, other: &StoppingTime) -> StoppingTime {
        StoppingTime(self.0.iter().zip(&other.0).map(|(a, b)| *a.min(b)).collect())
    }

    /// Pointwise `self <= other`.
    pub fn pointwise_le(&self, other: &StoppingTime) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    /// Indicator of `{self <= t}`.
    pub fn stopped_by(&self, t: usize) -> Vec<bool> {
        self.0.iter().map(|&s| s <= t).collect()
    }

    /// Indicator of `{self > t}`.
    pub fn alive_after(&self, t: usize) -> Vec<bool> {
        self.0.iter().map(|&s| s > t).collect()
    }
}

/// True iff `{s <= t}` is a union of cells of `h_t` for every `t`.
pub fn is_stopping_time(s: &StoppingTime, h: &Filtration) -> Result<bool> {
    let horizon = h.horizon();
    if s.len() != h.num_outcomes() {
        return Err(Error::Format(format!(
            "stopping time has {} entries, filtration has {} outcomes",
            s.len(),
            h.num_outcomes()
        )));
    }
    if let Some(&value) = s.times().iter().find(|&&v| v > horizon) {
        return Err(Error::TimeOutOfRange { value, horizon });
    }
    Ok((0..=horizon).all(|t| h.part(t).is_measurable(&s.stopped_by(t))))
}

/// How to fill a conditional expectation on a cell of zero mass.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ZeroMass {
    Reject,
    PlusInfinity,
}

/// `E_mu[f | part]` as an outcome-indexed vector, with the zero-mass policy
/// applied to null cells.
pub fn conditional_expectation_with(
    f: &[Rational],
    part: &Partition,
    mu: &Measure,
    policy: ZeroMass,
) -> Result<Vec<ExtRational>> {
    let mut out = vec![ExtRational::PlusInfinity; part.num_outcomes()];
    for (k, cell) in part.cells().iter().enumerate() {
        let mass = mu.mass(cell);
        let value = if mass.is_zero() {
            match policy {
                ZeroMass::Reject => return Err(Error::ZeroMassCell { cell: k }),
                ZeroMass::PlusInfinity => ExtRational::PlusInfinity,
            }
        } else {
            let total: Rational = cell.iter().map(|&w| mu.weight(w) * &f[w]).sum();
            ExtRational::Finite(total / mass)
        };
        for &w in cell {
            out[w] = value.clone();
        }
    }
    Ok(out)
}

/// `E_mu[f | part]`; every cell must carry positive mass.
pub fn conditional_expectation(
    f: &[Rational],
    part: &Partition,
    mu: &Measure,
) -> Result<Vec<Rational>> {
    Ok(conditional_expectation_with(f, part, mu, ZeroMass::Reject)?
        .into_iter()
        .map(|v| match v {
            ExtRational::Finite(r) => r,
            ExtRational::PlusInfinity => unreachable!("rejected above"),
        })
        .collect())
}

/// Number of stopping times of `h` taking values in `[from_t, T]`.
///
/// A cell at `T` admits one rule; a cell at `t < T` either stops on the spot
/// or delegates to its children, giving `1 + prod(children)`.
pub fn count_stopping_times(h: &Filtration, from_t: usize) -> BigUint {
    fn count(h: &Filtration, t: usize, cell: &[Outcome]) -> BigUint {
        if t == h.horizon() {
            return BigUint::one();
        }
        let children = children_of(h, t, cell);
        BigUint::one() + children.iter().map(|c| count(h, t + 1, c)).product::<BigUint>()
    }
    h.part(from_t)
        .cells()
        .iter()
        .map(|cell| count(h, from_t, cell))
        .product()
}

fn children_of(h: &Filtration, t: usize, cell: &[Outcome]) -> Vec<Vec<Outcome>> {
    let next = h.part(t + 1);
    let mut by_child: BTreeMap<usize, Vec<Outcome>> = BTreeMap::new();
    for &w in cell {
        by_child.entry(next.cell_of(w)).or_default().push(w);
    }
    by_child.into_values().collect()
}

type Assignment = Vec<(Outcome, usize)>;

fn cell_rules(h: &Filtration, t: usize, cell: &[Outcome]) -> Vec<Assignment> {
    let stop_now: Assignment = cell.iter().map(|&w| (w, t)).collect();
    if t == h.horizon() {
        return vec![stop_now];
    }
    let per_child: Vec<Vec<Assignment>> = children_of(h, t, cell)
        .iter()
        .map(|c| cell_rules(h, t + 1, c))
        .collect();
    let mut rules = vec![stop_now];
    rules.extend(
        per_child
            .into_iter()
            .multi_cartesian_product()
            .map(|parts| parts.concat()),
    );
    rules
}

/// Every stopping time of `h` with values in `[from_t, T]`, each exactly
/// once. The count is [`count_stopping_times`]; callers bound the instance.
pub fn enumerate_stopping_times(
    h: &Filtration,
    from_t: usize,
) -> impl Iterator<Item = StoppingTime> {
    assert!(from_t <= h.horizon(), "from_t beyond horizon");
    let n = h.num_outcomes();
    let per_cell: Vec<Vec<Assignment>> = h
        .part(from_t)
        .cells()
        .iter()
        .map(|cell| cell_rules(h, from_t, cell))
        .collect();
    per_cell
        .into_iter()
        .multi_cartesian_product()
        .map(move |parts| {
            let mut times = vec![0; n];
            for (w, t) in parts.into_iter().flatten() {
                times[w] = t;
            }
            StoppingTime(times)
        })
}
