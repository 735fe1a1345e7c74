//! Filtered powerset complexes and Z2 persistence barcodes.
//!
//! The complex on n parties has one simplex per nonempty subset. A sealed
//! monotone functional assigns each simplex its birth value; sorting by
//! (value, dimension, bitmask) yields a filtration in which every face
//! precedes its cofaces. Barcodes come from the standard left-to-right
//! column reduction of the bit-packed Z2 boundary matrix. An independent
//! rank oracle recomputes Betti numbers by Gaussian elimination for
//! cross-checking.

use crate::error::{Error, Result};
use crate::functionals::SubsetFunctional;
use crate::subset::{self, Subset};

/// Homology flavor of a filtration/barcode.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Mode {
    /// Plain simplicial homology; connected components never die.
    Absolute,
    /// Augmented chain complex: an empty cell is added at the minimal vertex
    /// value, removing one infinite 0-dimensional bar.
    Reduced,
    /// Homology relative to the subcomplex generated by the given subset;
    /// simplices inside it are removed and boundaries are taken mod it.
    Relative(Subset),
}

impl Mode {
    pub fn label(&self) -> &'static str {
        match self {
            Mode::Absolute => "absolute",
            Mode::Reduced => "reduced",
            Mode::Relative(_) => "relative",
        }
    }
}

/// One cell of the filtration; `mask == 0` is the augmentation cell.
#[derive(Debug, Clone, Copy)]
pub struct Cell {
    pub mask: Subset,
    pub value: f64,
}

/// All simplices with their filtration values, in a valid filtration order.
#[derive(Debug, Clone)]
pub struct FilteredComplex {
    n_parties: usize,
    mode: Mode,
    cells: Vec<Cell>,
    epsilon_max: f64,
    q: Option<f64>,
}

fn validate_mode(n: usize, mode: Mode) -> Result<()> {
    if let Mode::Relative(s) = mode {
        let full = subset::full(n);
        if s == 0 || s == full || !subset::is_subset_of(s, full) {
            return Err(Error::InvalidSubset(
                "relative mode needs a nonempty proper subset".into(),
            ));
        }
    }
    Ok(())
}

/// Whether the simplex `mask` survives in the given mode (relative mode
/// drops the subcomplex generated by its subset).
fn in_complex(mask: Subset, mode: Mode) -> bool {
    match mode {
        Mode::Relative(s) => !subset::is_subset_of(mask, s),
        _ => true,
    }
}

/// Sublevel-set filtration of the powerset complex for a sealed functional.
pub fn build_filtration(f: &SubsetFunctional, mode: Mode) -> Result<FilteredComplex> {
    let n = f.n_parties();
    validate_mode(n, mode)?;
    let mut cells: Vec<Cell> = subset::all_nonempty(n)
        .filter(|&m| in_complex(m, mode))
        .map(|m| Cell {
            mask: m,
            value: f.value(m),
        })
        .collect();
    if mode == Mode::Reduced {
        cells.push(Cell {
            mask: 0,
            value: f.min_vertex_value(),
        });
    }
    cells.sort_by(|a, b| {
        a.value
            .total_cmp(&b.value)
            .then(subset::size(a.mask).cmp(&subset::size(b.mask)))
            .then(a.mask.cmp(&b.mask))
    });

    // Every face must precede its cofaces; a violation means the functional
    // was not monotone (possible only for plugged-in tables).
    let mut position = vec![usize::MAX; 1usize << n];
    for (i, cell) in cells.iter().enumerate() {
        position[cell.mask as usize] = i;
    }
    for (i, cell) in cells.iter().enumerate() {
        if cell.mask == 0 {
            continue;
        }
        for facet in boundary_masks(cell.mask, mode) {
            if position[facet as usize] > i {
                return Err(Error::MonotonicityViolation {
                    smaller: facet,
                    larger: cell.mask,
                    smaller_value: f.value(facet),
                    larger_value: cell.value,
                });
            }
        }
    }

    let epsilon_max = cells.last().map(|c| c.value).unwrap_or(0.0);
    Ok(FilteredComplex {
        n_parties: n,
        mode,
        cells,
        epsilon_max,
        q: f.q(),
    })
}

/// Faces of `mask` that belong to the chain complex in this mode. Vertices
/// have the augmentation cell as their boundary in reduced mode.
fn boundary_masks(mask: Subset, mode: Mode) -> Vec<Subset> {
    match subset::size(mask) {
        0 => Vec::new(),
        1 => {
            if mode == Mode::Reduced {
                vec![0]
            } else {
                Vec::new()
            }
        }
        _ => subset::facets(mask)
            .filter(|&f| in_complex(f, mode))
            .collect(),
    }
}

impl FilteredComplex {
    pub fn n_parties(&self) -> usize {
        self.n_parties
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn cells(&self) -> &[Cell] {
        &self.cells
    }

    pub fn epsilon_max(&self) -> f64 {
        self.epsilon_max
    }
}

/// Persistence interval in homological dimension `dim`.
#[derive(Debug, Clone, PartialEq)]
pub struct PersistenceInterval {
    pub dim: usize,
    pub birth: f64,
    /// `None` encodes an infinite bar.
    pub death: Option<f64>,
    pub birth_simplex: Subset,
    pub death_simplex: Option<Subset>,
    /// Birth and death are the same cached double; the pairing is still real.
    pub zero_length: bool,
}

impl PersistenceInterval {
    /// Length of the overlap with [0, upto], integrating infinite bars up to
    /// the truncation point.
    pub fn length_within(&self, upto: f64) -> f64 {
        let hi = self.death.unwrap_or(f64::INFINITY).min(upto);
        (hi - self.birth.max(0.0)).max(0.0)
    }

    /// Whether the bar is alive at `eps` under the right-continuous
    /// convention: alive on [birth, death).
    pub fn contains(&self, eps: f64) -> bool {
        self.birth <= eps && self.death.map_or(true, |d| eps < d)
    }
}

/// Multiset of persistence intervals plus run metadata.
#[derive(Debug, Clone)]
pub struct Barcode {
    n_parties: usize,
    mode: Mode,
    q: Option<f64>,
    epsilon_max: f64,
    intervals: Vec<PersistenceInterval>,
}

impl Barcode {
    pub fn intervals(&self) -> &[PersistenceInterval] {
        &self.intervals
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn q(&self) -> Option<f64> {
        self.q
    }

    pub fn epsilon_max(&self) -> f64 {
        self.epsilon_max
    }

    pub fn n_parties(&self) -> usize {
        self.n_parties
    }

    pub fn max_dim(&self) -> usize {
        self.intervals.iter().map(|i| i.dim).max().unwrap_or(0)
    }

    pub fn has_infinite_bars(&self) -> bool {
        self.intervals.iter().any(|i| i.death.is_none())
    }
}

/// Bit-packed Z2 column.
#[derive(Clone)]
struct BitColumn {
    words: Vec<u64>,
}

impl BitColumn {
    fn zeros(bits: usize) -> Self {
        Self {
            words: vec![0; bits.div_ceil(64)],
        }
    }

    fn set(&mut self, i: usize) {
        self.words[i / 64] ^= 1u64 << (i % 64);
    }

    fn xor_assign(&mut self, other: &Self) {
        for (w, o) in self.words.iter_mut().zip(&other.words) {
            *w ^= o;
        }
    }

    /// Index of the highest set bit (the "low" in filtration order).
    fn highest(&self) -> Option<usize> {
        for (wi, &w) in self.words.iter().enumerate().rev() {
            if w != 0 {
                return Some(wi * 64 + 63 - w.leading_zeros() as usize);
            }
        }
        None
    }
}

/// Standard left-to-right column reduction of the Z2 boundary matrix in
/// filtration order. Pairs (i, j) yield intervals (value_i, value_j) in the
/// dimension of the creator i; unpaired creators yield infinite bars.
/// Zero-length intervals are kept and flagged. The augmentation pairing in
/// reduced mode (dimension -1) is bookkeeping only and never emitted.
pub fn compute_barcode(complex: &FilteredComplex) -> Barcode {
    let cells = complex.cells();
    let m = cells.len();
    let mut position = vec![usize::MAX; 1usize << complex.n_parties()];
    for (i, cell) in cells.iter().enumerate() {
        position[cell.mask as usize] = i;
    }

    let mut reduced: Vec<Option<BitColumn>> = vec![None; m];
    let mut col_with_low: Vec<Option<usize>> = vec![None; m];
    let mut pair_of: Vec<Option<usize>> = vec![None; m];
    let mut is_creator = vec![false; m];

    for j in 0..m {
        let mut col = BitColumn::zeros(m);
        for facet in boundary_masks(cells[j].mask, complex.mode) {
            col.set(position[facet as usize]);
        }
        let mut low = col.highest();
        while let Some(l) = low {
            match col_with_low[l] {
                Some(k) => {
                    col.xor_assign(reduced[k].as_ref().unwrap());
                    low = col.highest();
                }
                None => break,
            }
        }
        match low {
            None => is_creator[j] = true,
            Some(l) => {
                col_with_low[l] = Some(j);
                pair_of[l] = Some(j);
                reduced[j] = Some(col);
            }
        }
    }

    let mut intervals = Vec::new();
    for (i, cell) in cells.iter().enumerate() {
        if !is_creator[i] {
            continue;
        }
        let dim = subset::dimension(cell.mask);
        if dim < 0 {
            // an unpaired augmentation cell would be a (-1)-dimensional bar;
            // it cannot occur while at least one vertex is present
            continue;
        }
        let interval = match pair_of[i] {
            Some(j) => PersistenceInterval {
                dim: dim as usize,
                birth: cell.value,
                death: Some(cells[j].value),
                birth_simplex: cell.mask,
                death_simplex: Some(cells[j].mask),
                zero_length: cell.value == cells[j].value,
            },
            None => PersistenceInterval {
                dim: dim as usize,
                birth: cell.value,
                death: None,
                birth_simplex: cell.mask,
                death_simplex: None,
                zero_length: false,
            },
        };
        intervals.push(interval);
    }
    intervals.sort_by(|a, b| {
        a.dim
            .cmp(&b.dim)
            .then(a.birth.total_cmp(&b.birth))
            .then(match (a.death, b.death) {
                (Some(x), Some(y)) => x.total_cmp(&y),
                (Some(_), None) => std::cmp::Ordering::Less,
                (None, Some(_)) => std::cmp::Ordering::Greater,
                (None, None) => std::cmp::Ordering::Equal,
            })
            .then(a.birth_simplex.cmp(&b.birth_simplex))
    });

    Barcode {
        n_parties: complex.n_parties,
        mode: complex.mode,
        q: complex.q,
        epsilon_max: complex.epsilon_max,
        intervals,
    }
}

/// Piecewise-constant Betti curve: value is `count` from each breakpoint
/// (inclusive) until the next one.
#[derive(Debug, Clone)]
pub struct BettiCurve {
    dim: usize,
    breakpoints: Vec<(f64, usize)>,
}

impl BettiCurve {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn breakpoints(&self) -> &[(f64, usize)] {
        &self.breakpoints
    }

    /// beta_k(eps) with bars alive on [birth, death).
    pub fn value_at(&self, eps: f64) -> usize {
        let mut current = 0;
        for &(x, count) in &self.breakpoints {
            if x > eps {
                break;
            }
            current = count;
        }
        current
    }
}

/// Betti curve of dimension `dim` from a barcode.
pub fn betti_curve(bc: &Barcode, dim: usize) -> BettiCurve {
    let mut events: Vec<(f64, i64)> = Vec::new();
    for iv in bc.intervals() {
        if iv.dim != dim || iv.zero_length {
            continue;
        }
        events.push((iv.birth, 1));
        if let Some(d) = iv.death {
            events.push((d, -1));
        }
    }
    events.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut breakpoints: Vec<(f64, usize)> = Vec::new();
    let mut count: i64 = 0;
    let mut i = 0;
    while i < events.len() {
        let x = events[i].0;
        while i < events.len() && events[i].0 == x {
            count += events[i].1;
            i += 1;
        }
        debug_assert!(count >= 0);
        if breakpoints.last().map(|&(_, c)| c as i64) != Some(count) {
            breakpoints.push((x, count as usize));
        }
    }
    BettiCurve { dim, breakpoints }
}

const ORACLE_MAX_PARTIES: usize = 6;

/// Rank of a Z2 matrix given as bit-packed columns (rows fit in a u64).
fn gf2_rank(columns: &mut [u64]) -> usize {
    let mut rank = 0;
    let mut pivots: Vec<u64> = Vec::new();
    for col in columns.iter_mut() {
        let mut c = *col;
        for &p in &pivots {
            let low = 63 - p.leading_zeros();
            if c >> low & 1 == 1 {
                c ^= p;
            }
        }
        if c != 0 {
            pivots.push(c);
            rank += 1;
        }
    }
    rank
}

/// Independent Betti number oracle: dim ker - rank of the boundary maps of
/// the sublevel complex at `eps`, computed by Gaussian elimination over Z2
/// without any persistence pairing. Guarded to at most 6 parties.
pub fn oracle_betti(f: &SubsetFunctional, eps: f64, dim: usize, mode: Mode) -> Result<usize> {
    let n = f.n_parties();
    if n > ORACLE_MAX_PARTIES {
        return Err(Error::TooLarge {
            what: "party count for the rank oracle",
            limit: ORACLE_MAX_PARTIES,
            actual: n,
        });
    }
    validate_mode(n, mode)?;

    // cells present at eps, grouped by dimension (-1 holds the augmentation)
    let mut by_dim: Vec<Vec<Subset>> = vec![Vec::new(); n + 1];
    let dim_slot = |mask: Subset| (subset::dimension(mask) + 1) as usize;
    for mask in subset::all_nonempty(n) {
        if in_complex(mask, mode) && f.value(mask) <= eps {
            by_dim[dim_slot(mask)].push(mask);
        }
    }
    if mode == Mode::Reduced && f.min_vertex_value() <= eps && !by_dim[1].is_empty() {
        by_dim[0].push(0);
    }

    let rank_of_boundary = |d: usize| -> usize {
        // boundary from d-cells (slot d+1) into (d-1)-cells (slot d)
        let (lo, hi) = (d, d + 1);
        if hi > n || by_dim[hi].is_empty() || by_dim[lo].is_empty() {
            return 0;
        }
        let mut row_index = vec![usize::MAX; 1usize << n];
        for (i, &mask) in by_dim[lo].iter().enumerate() {
            row_index[mask as usize] = i;
        }
        let mut columns: Vec<u64> = by_dim[hi]
            .iter()
            .map(|&mask| {
                let mut col = 0u64;
                for facet in boundary_masks(mask, mode) {
                    let r = row_index[facet as usize];
                    debug_assert!(r != usize::MAX, "face missing from sublevel complex");
                    col |= 1u64 << r;
                }
                col
            })
            .collect();
        gf2_rank(&mut columns)
    };

    let slot = dim + 1;
    if slot > n {
        return Ok(0);
    }
    let n_k = by_dim[slot].len();
    let rank_k = rank_of_boundary(dim);
    let rank_up = rank_of_boundary(dim + 1);
    Ok(n_k - rank_k - rank_up)
}

/// Statistics from the lattice-walk sublevel construction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SublevelStats {
    /// Functional evaluations performed.
    pub evaluations: usize,
    /// Simplices admitted without evaluation, through downward closure.
    pub admitted_by_closure: usize,
}

/// Sublevel set G(eps) = all J with F(J) <= eps, via the top-down lattice
/// walk: evaluate subsets by decreasing size, and when one passes, admit its
/// entire downset without further evaluations. Monotonicity makes the result
/// identical to brute force while never evaluating more often.
pub fn complex_at_stats(f: &SubsetFunctional, eps: f64) -> (Vec<Subset>, SublevelStats) {
    let n = f.n_parties();
    let total = 1usize << n;
    let mut admitted = vec![false; total];
    let mut evaluations = 0;
    let mut hits = 0;
    for size in (1..=n).rev() {
        for mask in subset::all_nonempty(n) {
            if subset::size(mask) != size || admitted[mask as usize] {
                continue;
            }
            evaluations += 1;
            if f.value(mask) <= eps {
                hits += 1;
                for sub in subset::nonempty_subsets_of(mask) {
                    admitted[sub as usize] = true;
                }
            }
        }
    }
    let result: Vec<Subset> = (1..total as Subset).filter(|&m| admitted[m as usize]).collect();
    let stats = SublevelStats {
        evaluations,
        admitted_by_closure: result.len() - hits,
    };
    (result, stats)
}

/// The simplices of the sublevel complex at `eps`, ascending by bitmask.
pub fn complex_at(f: &SubsetFunctional, eps: f64) -> Vec<Subset> {
    complex_at_stats(f, eps).0
}
