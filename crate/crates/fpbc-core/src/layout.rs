//! Ladder layout: islands, tri-junctions, bus/ground configurations and the measured operator `Q`.
//!
//! Column `c` has a top tri-junction (MZM `2c`) and a bottom one (MZM `2c + 1`),
//! joined by `vertical(c)`. Horizontal islands `top(c)` and `bottom(c)` run from
//! column `c` to column `c + 1`, wrapping around, so every tri-junction meets exactly
//! three islands. Leg 1 of a tri-junction is its left island, leg 2 its right one,
//! leg 3 the vertical.

use alloc::collections::BTreeSet;
use alloc::vec;
use alloc::vec::Vec;

use thiserror::Error;

use crate::bits::BitSet;
use crate::device::{DeviceParams, TriJunctionCouplings};
use crate::majorana::MajoranaString;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LayoutError {
    #[error("a ladder needs at least 2 columns, got {0}")]
    TooFewColumns(usize),
    #[error("MZM {0} is not on this layout")]
    UnknownMzm(usize),
    #[error("odd number of MZMs ({0}); the target is not a parity operator")]
    OddTarget(usize),
    #[error("MZMs {0} and {1} cannot be joined by the path catalog")]
    NotJoinable(usize, usize),
    #[error("configuration is not realizable: islands {islands:?} cannot reach their plate")]
    Unrealizable { islands: Vec<Island> },
    #[error("configuration has {found} islands, layout has {expected}")]
    ConfigSize { expected: usize, found: usize },
    #[error("{expected} tri-junction couplings needed, got {found}")]
    Couplings { expected: usize, found: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Island {
    Top(usize),
    Bottom(usize),
    Vertical(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Plate {
    Bus,
    Ground,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Node {
    Island(usize),
    Plate(Plate),
}

/// Josephson junctions available on the device.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JunctionGraph {
    pub edges: Vec<(Node, Node)>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LadderLayout {
    columns: usize,
    pub junctions: JunctionGraph,
}

impl LadderLayout {
    /// Every island can be switched to either plate, and islands meeting at a
    /// tri-junction share a junction.
    pub fn new(columns: usize) -> Result<Self, LayoutError> {
        let mut layout = Self::bare(columns)?;
        for i in 0..layout.island_count() {
            layout.junctions.edges.push((Node::Island(i), Node::Plate(Plate::Bus)));
            layout
                .junctions
                .edges
                .push((Node::Island(i), Node::Plate(Plate::Ground)));
        }
        layout.add_inter_island_junctions();
        Ok(layout)
    }

    /// Only vertical islands touch the plates; horizontals connect through neighbours.
    pub fn sparse(columns: usize) -> Result<Self, LayoutError> {
        let mut layout = Self::bare(columns)?;
        for c in 0..columns {
            let v = layout.island_index(Island::Vertical(c));
            layout.junctions.edges.push((Node::Island(v), Node::Plate(Plate::Bus)));
            layout
                .junctions
                .edges
                .push((Node::Island(v), Node::Plate(Plate::Ground)));
        }
        layout.add_inter_island_junctions();
        Ok(layout)
    }

    pub fn with_junctions(columns: usize, junctions: JunctionGraph) -> Result<Self, LayoutError> {
        let mut layout = Self::bare(columns)?;
        layout.junctions = junctions;
        Ok(layout)
    }

    fn bare(columns: usize) -> Result<Self, LayoutError> {
        if columns < 2 {
            return Err(LayoutError::TooFewColumns(columns));
        }
        Ok(Self {
            columns,
            junctions: JunctionGraph { edges: Vec::new() },
        })
    }

    fn add_inter_island_junctions(&mut self) {
        for j in 0..self.mzm_count() {
            let legs = self.legs(j);
            for x in 0..3 {
                for y in x + 1..3 {
                    let (a, b) = (self.island_index(legs[x]), self.island_index(legs[y]));
                    self.junctions.edges.push((Node::Island(a), Node::Island(b)));
                }
            }
        }
    }

    pub fn columns(&self) -> usize {
        self.columns
    }

    pub fn mzm_count(&self) -> usize {
        2 * self.columns
    }

    pub fn island_count(&self) -> usize {
        3 * self.columns
    }

    pub fn island_index(&self, island: Island) -> usize {
        match island {
            Island::Top(c) => c,
            Island::Bottom(c) => self.columns + c,
            Island::Vertical(c) => 2 * self.columns + c,
        }
    }

    pub fn island(&self, index: usize) -> Island {
        let c = index % self.columns;
        match index / self.columns {
            0 => Island::Top(c),
            1 => Island::Bottom(c),
            _ => Island::Vertical(c),
        }
    }

    /// Column and row (`false` top, `true` bottom) of a tri-junction.
    pub fn position(&self, mzm: usize) -> (usize, bool) {
        (mzm / 2, mzm % 2 == 1)
    }

    pub fn mzm_at(&self, column: usize, bottom: bool) -> usize {
        2 * column + bottom as usize
    }

    /// Left, right and vertical island at a tri-junction.
    pub fn legs(&self, mzm: usize) -> [Island; 3] {
        let (c, bottom) = self.position(mzm);
        let left = (c + self.columns - 1) % self.columns;
        if bottom {
            [Island::Bottom(left), Island::Bottom(c), Island::Vertical(c)]
        } else {
            [Island::Top(left), Island::Top(c), Island::Vertical(c)]
        }
    }

    /// The two tri-junctions an island joins.
    pub fn ends(&self, island: Island) -> (usize, usize) {
        let next = |c: usize| (c + 1) % self.columns;
        match island {
            Island::Top(c) => (self.mzm_at(c, false), self.mzm_at(next(c), false)),
            Island::Bottom(c) => (self.mzm_at(c, true), self.mzm_at(next(c), true)),
            Island::Vertical(c) => (self.mzm_at(c, false), self.mzm_at(c, true)),
        }
    }

    fn check_mzm(&self, m: usize) -> Result<(), LayoutError> {
        if m < self.mzm_count() {
            Ok(())
        } else {
            Err(LayoutError::UnknownMzm(m))
        }
    }
}

/// Sort left to right, top before bottom, and pair consecutive entries.
pub fn order_and_pair(mzms: &BTreeSet<usize>, layout: &LadderLayout) -> Result<Vec<(usize, usize)>, LayoutError> {
    for &m in mzms {
        layout.check_mzm(m)?;
    }
    if mzms.len() % 2 == 1 {
        return Err(LayoutError::OddTarget(mzms.len()));
    }
    let mut order: Vec<usize> = mzms.iter().copied().collect();
    order.sort_by_key(|&m| layout.position(m));
    Ok(order.chunks(2).map(|p| (p[0], p[1])).collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Template {
    /// Top rail between two top MZMs.
    A,
    /// Top rail, then down a vertical.
    B,
    /// Up a vertical, then top rail.
    C,
    /// Vertical, top rail, vertical.
    D,
    /// One bottom island between adjacent bottom MZMs.
    E,
    /// Found by graph search rather than a template.
    Search,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BasicPath {
    pub template: Template,
    pub islands: Vec<Island>,
}

/// A rule for joining an ordered MZM pair by a chain of islands.
pub trait PathCatalog {
    fn path(&self, layout: &LadderLayout, from: usize, to: usize) -> Result<BasicPath, LayoutError>;
}

/// Paths A–E, running rightwards without crossing the wrap-around column.
#[derive(Debug, Clone, Copy, Default)]
pub struct TemplateCatalog;

impl PathCatalog for TemplateCatalog {
    fn path(&self, layout: &LadderLayout, from: usize, to: usize) -> Result<BasicPath, LayoutError> {
        layout.check_mzm(from)?;
        layout.check_mzm(to)?;
        let (c1, b1) = layout.position(from);
        let (c2, b2) = layout.position(to);
        if from == to || (c1, b1) > (c2, b2) {
            return Err(LayoutError::NotJoinable(from, to));
        }
        let rail = (c1..c2).map(Island::Top);
        let (template, islands): (Template, Vec<Island>) = match (b1, b2) {
            (false, false) => (Template::A, rail.collect()),
            (false, true) => (Template::B, rail.chain([Island::Vertical(c2)]).collect()),
            (true, false) => (Template::C, [Island::Vertical(c1)].into_iter().chain(rail).collect()),
            (true, true) if c2 == c1 + 1 => (Template::E, vec![Island::Bottom(c1)]),
            (true, true) => (
                Template::D,
                [Island::Vertical(c1)]
                    .into_iter()
                    .chain(rail)
                    .chain([Island::Vertical(c2)])
                    .collect(),
            ),
        };
        Ok(BasicPath { template, islands })
    }
}

/// Shortest island chain found by breadth-first search over the whole ladder.
#[derive(Debug, Clone, Copy, Default)]
pub struct ShortestCatalog;

impl PathCatalog for ShortestCatalog {
    fn path(&self, layout: &LadderLayout, from: usize, to: usize) -> Result<BasicPath, LayoutError> {
        layout.check_mzm(from)?;
        layout.check_mzm(to)?;
        if from == to {
            return Err(LayoutError::NotJoinable(from, to));
        }
        let n = layout.mzm_count();
        let mut via: Vec<Option<Island>> = vec![None; n];
        let mut seen = vec![false; n];
        let mut queue = alloc::collections::VecDeque::from([from]);
        seen[from] = true;
        while let Some(j) = queue.pop_front() {
            for island in layout.legs(j) {
                let (a, b) = layout.ends(island);
                let k = if a == j { b } else { a };
                if !seen[k] {
                    seen[k] = true;
                    via[k] = Some(island);
                    queue.push_back(k);
                }
            }
        }
        let mut islands = Vec::new();
        let mut j = to;
        while j != from {
            let island = via[j].ok_or(LayoutError::NotJoinable(from, to))?;
            islands.push(island);
            let (a, b) = layout.ends(island);
            j = if a == j { b } else { a };
        }
        islands.reverse();
        Ok(BasicPath {
            template: Template::Search,
            islands,
        })
    }
}

pub fn basic_path(pair: (usize, usize), layout: &LadderLayout) -> Result<BasicPath, LayoutError> {
    TemplateCatalog.path(layout, pair.0, pair.1)
}

/// Plate assignment per island and on/off state per junction edge.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IslandConfig {
    /// `true` for bus-connected, indexed like [`LadderLayout::island_index`].
    pub bus: Vec<bool>,
    /// Indexed like `layout.junctions.edges`.
    pub jj_on: Vec<bool>,
}

impl IslandConfig {
    pub fn bus_islands<'a>(&'a self, layout: &'a LadderLayout) -> impl Iterator<Item = Island> + 'a {
        self.bus
            .iter()
            .enumerate()
            .filter(|(_, b)| **b)
            .map(|(i, _)| layout.island(i))
    }
}

fn plate_of(bus: &[bool], node: Node) -> Plate {
    match node {
        Node::Plate(p) => p,
        Node::Island(i) if bus[i] => Plate::Bus,
        Node::Island(_) => Plate::Ground,
    }
}

/// Switch on every junction whose two ends sit on the same plate, then check it.
pub fn realize(layout: &LadderLayout, bus: Vec<bool>) -> Result<IslandConfig, LayoutError> {
    let jj_on = layout
        .junctions
        .edges
        .iter()
        .map(|&(a, b)| plate_of(&bus, a) == plate_of(&bus, b))
        .collect();
    let config = IslandConfig { bus, jj_on };
    check_realizable(layout, &config)?;
    Ok(config)
}

/// Every island reaches its own plate through switched-on junctions, and no
/// switched-on junction joins the bus side to the ground side.
pub fn check_realizable(layout: &LadderLayout, config: &IslandConfig) -> Result<(), LayoutError> {
    let islands = layout.island_count();
    if config.bus.len() != islands {
        return Err(LayoutError::ConfigSize {
            expected: islands,
            found: config.bus.len(),
        });
    }
    let index = |n: Node| match n {
        Node::Island(i) => i,
        Node::Plate(Plate::Bus) => islands,
        Node::Plate(Plate::Ground) => islands + 1,
    };
    let mut parent: Vec<usize> = (0..islands + 2).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    let mut bad = BTreeSet::new();
    for (&(a, b), &on) in layout.junctions.edges.iter().zip(&config.jj_on) {
        if !on {
            continue;
        }
        if plate_of(&config.bus, a) != plate_of(&config.bus, b) {
            for n in [a, b] {
                if let Node::Island(i) = n {
                    bad.insert(i);
                }
            }
            continue;
        }
        let (x, y) = (find(&mut parent, index(a)), find(&mut parent, index(b)));
        parent[x] = y;
    }
    for i in 0..islands {
        let target = if config.bus[i] { islands } else { islands + 1 };
        if find(&mut parent, i) != find(&mut parent, target) {
            bad.insert(i);
        }
    }
    if bad.is_empty() {
        Ok(())
    } else {
        Err(LayoutError::Unrealizable {
            islands: bad.into_iter().map(|i| layout.island(i)).collect(),
        })
    }
}

/// Islands on an odd number of basic paths go to the bus, the rest to ground.
pub fn config_for_parity_with(
    mzms: &BTreeSet<usize>,
    layout: &LadderLayout,
    catalog: &dyn PathCatalog,
) -> Result<IslandConfig, LayoutError> {
    let mut bus = vec![false; layout.island_count()];
    for (a, b) in order_and_pair(mzms, layout)? {
        for island in catalog.path(layout, a, b)?.islands {
            bus[layout.island_index(island)] ^= true;
        }
    }
    realize(layout, bus)
}

pub fn config_for_parity(mzms: &BTreeSet<usize>, layout: &LadderLayout) -> Result<IslandConfig, LayoutError> {
    config_for_parity_with(mzms, layout, &TemplateCatalog)
}

/// What one tri-junction contributes to `Q`.
#[derive(Debug, Clone, PartialEq)]
pub struct JunctionFactor {
    pub mzm: usize,
    /// Bus-connected legs, 1-based, ascending.
    pub bus_legs: Vec<u8>,
    /// Leg whose coupling enters the shift (`α_j`), for one or two bus legs.
    pub alpha: Option<u8>,
    /// Signed real factor entering `Q`.
    pub factor: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReadoutOperator {
    /// Hermitian product of the `γ_{j,0}` entering `Q`, over the layout's MZMs.
    pub q_string: MajoranaString,
    pub scalar: f64,
    /// `∏ |A_{j,α_j}| / |A_j|` over tri-junctions with one or two bus islands.
    pub shift_magnitude: f64,
    pub junctions: Vec<JunctionFactor>,
}

fn levi_civita(a: usize, b: usize, c: usize) -> f64 {
    match (a, b, c) {
        (0, 1, 2) | (1, 2, 0) | (2, 0, 1) => 1.0,
        (0, 2, 1) | (2, 1, 0) | (1, 0, 2) => -1.0,
        _ => 0.0,
    }
}

/// `Q` for a configuration, one tri-junction at a time.
///
/// The overall sign of the string beyond the three-bus-island rule is a convention:
/// the string is the Hermitian ascending product.
pub fn readout_operator(
    config: &IslandConfig,
    layout: &LadderLayout,
    couplings: &[TriJunctionCouplings],
) -> Result<ReadoutOperator, LayoutError> {
    if couplings.len() != layout.mzm_count() {
        return Err(LayoutError::Couplings {
            expected: layout.mzm_count(),
            found: couplings.len(),
        });
    }
    if config.bus.len() != layout.island_count() {
        return Err(LayoutError::ConfigSize {
            expected: layout.island_count(),
            found: config.bus.len(),
        });
    }
    let mut support = BitSet::new(layout.mzm_count());
    let mut negate = false;
    let mut scalar = 1.0;
    let mut shift_magnitude = 1.0;
    let mut junctions = Vec::new();
    for (j, cpl) in couplings.iter().enumerate().take(layout.mzm_count()) {
        let legs: Vec<usize> = layout
            .legs(j)
            .iter()
            .enumerate()
            .filter(|(_, isl)| config.bus[layout.island_index(**isl)])
            .map(|(k, _)| k)
            .collect();
        let a = &cpl.a;
        let norm = cpl.norm();
        let (alpha, factor) = match legs.as_slice() {
            [] => continue,
            [x] => (Some(*x), a[*x] / norm),
            [x, y] => {
                let z = 3 - x - y;
                (Some(z), -levi_civita(*x, *y, z) * a[z] / norm)
            }
            _ => (None, -1.0),
        };
        if legs.len() % 2 == 1 {
            support.insert(j);
        }
        match alpha {
            Some(z) => {
                scalar *= factor;
                shift_magnitude *= libm::fabs(a[z]) / norm;
            }
            None => negate = !negate,
        }
        junctions.push(JunctionFactor {
            mzm: j,
            bus_legs: legs.iter().map(|&k| k as u8 + 1).collect(),
            alpha: alpha.map(|z| z as u8 + 1),
            factor,
        });
    }
    let q = MajoranaString::hermitian(support);
    Ok(ReadoutOperator {
        q_string: if negate { q.negate() } else { q },
        scalar,
        shift_magnitude,
        junctions,
    })
}

/// Resonator frequency shift on flipping `Q`: `(C/2)(δε₁+δε₀) ∏ A_{j,α_j}/|A_j|`.
pub fn omega_shift(
    config: &IslandConfig,
    layout: &LadderLayout,
    couplings: &[TriJunctionCouplings],
    device: &DeviceParams,
) -> Result<f64, LayoutError> {
    let q = readout_operator(config, layout, couplings)?;
    let product: f64 = q
        .junctions
        .iter()
        .filter_map(|f| {
            f.alpha
                .map(|z| couplings[f.mzm].a[z as usize - 1] / couplings[f.mzm].norm())
        })
        .product();
    let [e0, e1] = device.delta_eps();
    Ok(device.dispersive_constant() / 2.0 * (e1 + e0) * product)
}

/// Uniform couplings `A_j = (1, 1, 1)` with unit `E_M`.
pub fn uniform_couplings(layout: &LadderLayout) -> Vec<TriJunctionCouplings> {
    vec![TriJunctionCouplings::new(1.0, [1.0, 1.0, 1.0]); layout.mzm_count()]
}
