//! Counter arrays, canonical motif signatures and the isomorphism merges that
//! turn per-center counters into a census over the 36 motif classes.
//!
//! Every 2- or 3-node, 3-edge temporal motif is identified by a
//! [`MotifSignature`]: the three edges in chronological order with their
//! endpoints relabelled `1, 2, 3` by first appearance (source before
//! destination within an edge). The counting engines never build
//! signatures on the hot path; they increment fixed-shape cells, and the
//! `*_cell_signature` maps below translate cells into signatures once, at
//! merge time.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use crate::error::{Error, Result};
use crate::triangle::TriangleMode;

/// Edge direction relative to a center node.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Direction {
    Out,
    In,
}

impl Direction {
    pub const ALL: [Direction; 2] = [Direction::Out, Direction::In];

    pub fn complement(self) -> Direction {
        match self {
            Direction::Out => Direction::In,
            Direction::In => Direction::Out,
        }
    }

    #[inline]
    pub(crate) fn index(self) -> usize {
        self as usize
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Direction::Out => "o",
            Direction::In => "in",
        }
    }
}

/// Position of the isolated edge of a star, in time order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum StarType {
    /// First edge isolated.
    I,
    /// Second edge isolated.
    II,
    /// Third edge isolated.
    III,
}

/// Position of the closing (non-center) edge of a triangle, in time order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TriType {
    /// Closing edge precedes both center edges.
    I,
    /// Closing edge lies between the two center edges.
    II,
    /// Closing edge follows both center edges.
    III,
}

impl StarType {
    pub const ALL: [StarType; 3] = [StarType::I, StarType::II, StarType::III];
}

impl TriType {
    pub const ALL: [TriType; 3] = [TriType::I, TriType::II, TriType::III];
}

fn all_dirs() -> impl Iterator<Item = [Direction; 3]> {
    Direction::ALL.into_iter().flat_map(|a| {
        Direction::ALL
            .into_iter()
            .flat_map(move |b| Direction::ALL.into_iter().map(move |c| [a, b, c]))
    })
}

#[inline]
fn dir_offset(dirs: [Direction; 3]) -> usize {
    dirs[0].index() * 4 + dirs[1].index() * 2 + dirs[2].index()
}

#[inline]
fn bump(cell: &mut u64, n: u64) -> Result<()> {
    *cell = cell.checked_add(n).ok_or(Error::Overflow)?;
    Ok(())
}

fn merge_cells<const N: usize>(into: &mut [u64; N], from: &[u64; N]) -> Result<()> {
    for (a, b) in into.iter_mut().zip(from) {
        bump(a, *b)?;
    }
    Ok(())
}

/// `Star[type, dir1, dir2, dir3]`: 24 cells, directions relative to the
/// star's center.
#[derive(Clone, Debug, PartialEq, Eq)]
#[derive(Default)]
pub struct StarCounter {
    cells: [u64; 24],
}


impl StarCounter {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    fn slot(ty: StarType, dirs: [Direction; 3]) -> usize {
        ty as usize * 8 + dir_offset(dirs)
    }

    pub fn get(&self, ty: StarType, dirs: [Direction; 3]) -> u64 {
        self.cells[Self::slot(ty, dirs)]
    }

    #[inline]
    pub fn add(&mut self, ty: StarType, dirs: [Direction; 3], n: u64) -> Result<()> {
        bump(&mut self.cells[Self::slot(ty, dirs)], n)
    }

    pub fn merge(&mut self, other: &StarCounter) -> Result<()> {
        merge_cells(&mut self.cells, &other.cells)
    }

    /// All 24 cells with their coordinates, in a fixed order.
    pub fn iter(&self) -> impl Iterator<Item = (StarType, [Direction; 3], u64)> + '_ {
        StarType::ALL
            .into_iter()
            .flat_map(|ty| all_dirs().map(move |d| (ty, d)))
            .map(|(ty, d)| (ty, d, self.get(ty, d)))
    }

    pub fn total(&self) -> u128 {
        self.cells.iter().map(|&c| c as u128).sum()
    }
}

/// `Pair[dir1, dir2, dir3]`: 8 cells, directions relative to the center
/// endpoint of a two-node motif.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PairCounter {
    cells: [u64; 8],
}

impl PairCounter {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn get(&self, dirs: [Direction; 3]) -> u64 {
        self.cells[dir_offset(dirs)]
    }

    #[inline]
    pub fn add(&mut self, dirs: [Direction; 3], n: u64) -> Result<()> {
        bump(&mut self.cells[dir_offset(dirs)], n)
    }

    pub fn merge(&mut self, other: &PairCounter) -> Result<()> {
        merge_cells(&mut self.cells, &other.cells)
    }

    pub fn iter(&self) -> impl Iterator<Item = ([Direction; 3], u64)> + '_ {
        all_dirs().map(|d| (d, self.get(d)))
    }
}

/// `Tri[type, dir_i, dir_j, dir_k]`: 24 cells. `dir_i` and `dir_j` are
/// relative to the center; `dir_k` is relative to the neighbor reached by
/// the earlier center edge.
#[derive(Clone, Debug, PartialEq, Eq)]
#[derive(Default)]
pub struct TriCounter {
    cells: [u64; 24],
}


impl TriCounter {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    fn slot(ty: TriType, dirs: [Direction; 3]) -> usize {
        ty as usize * 8 + dir_offset(dirs)
    }

    pub fn get(&self, ty: TriType, dirs: [Direction; 3]) -> u64 {
        self.cells[Self::slot(ty, dirs)]
    }

    #[inline]
    pub fn add(&mut self, ty: TriType, dirs: [Direction; 3], n: u64) -> Result<()> {
        bump(&mut self.cells[Self::slot(ty, dirs)], n)
    }

    pub fn merge(&mut self, other: &TriCounter) -> Result<()> {
        merge_cells(&mut self.cells, &other.cells)
    }

    pub fn iter(&self) -> impl Iterator<Item = (TriType, [Direction; 3], u64)> + '_ {
        TriType::ALL
            .into_iter()
            .flat_map(|ty| all_dirs().map(move |d| (ty, d)))
            .map(|(ty, d)| (ty, d, self.get(ty, d)))
    }

    pub fn total(&self) -> u128 {
        self.cells.iter().map(|&c| c as u128).sum()
    }
}

/// Structural family of a motif.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum MotifClass {
    Star,
    Pair,
    Triangle,
}

impl MotifClass {
    pub const ALL: [MotifClass; 3] = [MotifClass::Star, MotifClass::Pair, MotifClass::Triangle];

    pub fn as_str(self) -> &'static str {
        match self {
            MotifClass::Star => "star",
            MotifClass::Pair => "pair",
            MotifClass::Triangle => "triangle",
        }
    }
}

/// Canonical identifier of a 3-edge motif, serialized as `"12|23|32"`.
///
/// Ordering is lexicographic over the serialized form.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MotifSignature([[u8; 2]; 3]);

impl MotifSignature {
    pub fn edges(&self) -> [[u8; 2]; 3] {
        self.0
    }

    fn node_count(&self) -> u8 {
        self.0.iter().flatten().copied().max().unwrap_or(0)
    }

    pub fn class(&self) -> MotifClass {
        if self.node_count() == 2 {
            return MotifClass::Pair;
        }
        let mut pairs: Vec<[u8; 2]> = self
            .0
            .iter()
            .map(|&[a, b]| if a < b { [a, b] } else { [b, a] })
            .collect();
        pairs.sort_unstable();
        pairs.dedup();
        if pairs.len() == 3 {
            MotifClass::Triangle
        } else {
            MotifClass::Star
        }
    }

    /// True iff this is one of the 36 valid signatures.
    pub fn is_valid(&self) -> bool {
        valid_signatures().binary_search(self).is_ok()
    }
}

impl fmt::Display for MotifSignature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c] = self.0;
        write!(f, "{}{}|{}{}|{}{}", a[0], a[1], b[0], b[1], c[0], c[1])
    }
}

impl fmt::Debug for MotifSignature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MotifSignature({self})")
    }
}

impl FromStr for MotifSignature {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Classification(format!("malformed signature {s:?}"));
        let bytes = s.as_bytes();
        if bytes.len() != 8 || bytes[2] != b'|' || bytes[5] != b'|' {
            return Err(bad());
        }
        let mut edges = [[0u8; 2]; 3];
        for (k, edge) in edges.iter_mut().enumerate() {
            for (m, slot) in edge.iter_mut().enumerate() {
                let c = bytes[k * 3 + m];
                if !(b'1'..=b'3').contains(&c) {
                    return Err(bad());
                }
                *slot = c - b'0';
            }
        }
        let sig = MotifSignature(edges);
        if sig.is_valid() {
            Ok(sig)
        } else {
            Err(bad())
        }
    }
}

/// Relabel the endpoints of three chronologically ordered edges by first
/// appearance and return the resulting signature.
pub fn canonical_signature<N: PartialEq + Copy + fmt::Debug>(
    triple: &[(N, N); 3],
) -> Result<MotifSignature> {
    let mut seen: Vec<N> = Vec::with_capacity(4);
    let mut label = |n: N| -> Result<u8> {
        if let Some(p) = seen.iter().position(|&x| x == n) {
            return Ok(p as u8 + 1);
        }
        if seen.len() == 3 {
            return Err(Error::Classification(format!("{triple:?} spans more than 3 nodes")));
        }
        seen.push(n);
        Ok(seen.len() as u8)
    };
    let mut edges = [[0u8; 2]; 3];
    for (slot, &(s, d)) in edges.iter_mut().zip(triple) {
        *slot = [label(s)?, label(d)?];
    }
    if edges.iter().any(|e| e[0] == e[1]) {
        return Err(Error::Classification(format!("{triple:?} contains a self-loop")));
    }
    // Connectivity: grow the component of label 1 until it stops changing.
    let mut reached = [false, true, false, false];
    for _ in 0..3 {
        for &[a, b] in &edges {
            if reached[a as usize] || reached[b as usize] {
                reached[a as usize] = true;
                reached[b as usize] = true;
            }
        }
    }
    if (1..=seen.len()).any(|l| !reached[l]) {
        return Err(Error::Classification(format!("{triple:?} is disconnected")));
    }
    Ok(MotifSignature(edges))
}

const CENTER: u8 = 0;
const NEAR: u8 = 1;
const FAR: u8 = 2;

fn spoke(center: u8, other: u8, dir: Direction) -> (u8, u8) {
    match dir {
        Direction::Out => (center, other),
        Direction::In => (other, center),
    }
}

fn canonical_of_representative(triple: [(u8, u8); 3]) -> MotifSignature {
    canonical_signature(&triple).expect("representative patterns are connected 3-node or 2-node triples")
}

/// Signature counted by `Star[ty, dirs]`.
pub fn star_cell_signature(ty: StarType, dirs: [Direction; 3]) -> MotifSignature {
    // FAR is the isolated neighbor, NEAR carries the two other edges.
    let others = match ty {
        StarType::I => [FAR, NEAR, NEAR],
        StarType::II => [NEAR, FAR, NEAR],
        StarType::III => [NEAR, NEAR, FAR],
    };
    canonical_of_representative([
        spoke(CENTER, others[0], dirs[0]),
        spoke(CENTER, others[1], dirs[1]),
        spoke(CENTER, others[2], dirs[2]),
    ])
}

/// Signature counted by `Pair[dirs]`.
pub fn pair_cell_signature(dirs: [Direction; 3]) -> MotifSignature {
    canonical_of_representative(dirs.map(|d| spoke(CENTER, NEAR, d)))
}

/// Signature counted by `Tri[ty, dirs]`.
pub fn tri_cell_signature(ty: TriType, dirs: [Direction; 3]) -> MotifSignature {
    let first = spoke(CENTER, NEAR, dirs[0]);
    let second = spoke(CENTER, FAR, dirs[1]);
    let closing = spoke(NEAR, FAR, dirs[2]);
    canonical_of_representative(match ty {
        TriType::I => [closing, first, second],
        TriType::II => [first, closing, second],
        TriType::III => [first, second, closing],
    })
}

/// The 36 valid signatures in ascending order.
pub fn valid_signatures() -> &'static [MotifSignature] {
    static SIGS: OnceLock<Vec<MotifSignature>> = OnceLock::new();
    SIGS.get_or_init(|| {
        let mut sigs: Vec<MotifSignature> = StarType::ALL
            .into_iter()
            .flat_map(|ty| all_dirs().map(move |d| star_cell_signature(ty, d)))
            .chain(all_dirs().map(pair_cell_signature))
            .chain(
                TriType::ALL
                    .into_iter()
                    .flat_map(|ty| all_dirs().map(move |d| tri_cell_signature(ty, d))),
            )
            .collect();
        sigs.sort_unstable();
        sigs.dedup();
        debug_assert_eq!(sigs.len(), 36);
        sigs
    })
}

// Labels anchored by worked examples; every other signature is its own
// label. M_26 is the time-respecting 3-cycle.
const LABEL_TABLE_VERSION: u32 = 1;
const LABELS: [(&str, &str); 9] = [
    ("12|23|32", "M_24"),
    ("12|31|23", "M_25"),
    ("12|23|31", "M_26"),
    ("12|32|31", "M_46"),
    ("12|12|12", "M_55"),
    ("12|21|21", "M_56"),
    ("12|12|31", "M_63"),
    ("12|21|12", "M_65"),
    ("12|12|21", "M_66"),
];

pub fn label_table_version() -> u32 {
    LABEL_TABLE_VERSION
}

/// The `M_ij` label for `sig`, or the signature string when unanchored.
pub fn label_for_signature(sig: MotifSignature) -> String {
    let s = sig.to_string();
    LABELS
        .iter()
        .find(|(k, _)| *k == s)
        .map(|(_, label)| label.to_string())
        .unwrap_or(s)
}

/// Provenance of a census.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CensusMeta {
    pub input: String,
    pub edge_count: usize,
    pub mode: String,
    pub workers: usize,
}

/// Counts for all 36 signatures.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MotifCensus {
    counts: BTreeMap<MotifSignature, u64>,
    pub delta: i64,
    pub labels: Option<BTreeMap<MotifSignature, String>>,
    pub meta: CensusMeta,
}

impl Default for MotifCensus {
    fn default() -> Self {
        Self::zeroed()
    }
}

impl MotifCensus {
    pub fn zeroed() -> Self {
        MotifCensus {
            counts: valid_signatures().iter().map(|&s| (s, 0)).collect(),
            delta: 0,
            labels: None,
            meta: CensusMeta::default(),
        }
    }

    pub fn with_delta(mut self, delta: i64) -> Self {
        self.delta = delta;
        self
    }

    pub fn with_labels(mut self) -> Self {
        self.labels = Some(
            self.counts
                .keys()
                .map(|&s| (s, label_for_signature(s)))
                .collect(),
        );
        self
    }

    pub fn get(&self, sig: MotifSignature) -> u64 {
        self.counts.get(&sig).copied().unwrap_or(0)
    }

    pub fn counts(&self) -> &BTreeMap<MotifSignature, u64> {
        &self.counts
    }

    pub fn iter(&self) -> impl Iterator<Item = (MotifSignature, u64)> + '_ {
        self.counts.iter().map(|(&s, &c)| (s, c))
    }

    pub fn add(&mut self, sig: MotifSignature, n: u64) -> Result<()> {
        match self.counts.get_mut(&sig) {
            Some(c) => bump(c, n),
            None => Err(Error::Classification(format!("{sig} is not a valid motif signature"))),
        }
    }

    /// Cell-wise sum of two censuses; metadata is taken from `self`.
    pub fn checked_sum(&self, other: &MotifCensus) -> Result<MotifCensus> {
        let mut out = self.clone();
        for (s, c) in other.iter() {
            out.add(s, c)?;
        }
        Ok(out)
    }

    pub fn total(&self) -> u128 {
        self.counts.values().map(|&c| c as u128).sum()
    }

    pub fn class_total(&self, class: MotifClass) -> u128 {
        self.iter()
            .filter(|(s, _)| s.class() == class)
            .map(|(_, c)| c as u128)
            .sum()
    }

    /// Zero the counts of every class not in `keep`.
    pub fn retain_classes(&mut self, keep: &[MotifClass]) {
        for (s, c) in self.counts.iter_mut() {
            if !keep.contains(&s.class()) {
                *c = 0;
            }
        }
    }

    /// True iff both censuses hold the same 36 counts (metadata ignored).
    pub fn same_counts(&self, other: &MotifCensus) -> bool {
        self.counts == other.counts
    }
}

/// Combine engine counters into a census.
///
/// Star cells map one-to-one onto signatures. Each two-node motif is seen
/// from both endpoints, so its two complementary pair cells must agree and
/// either one is the count. Each triangle class spans three cells; in
/// count-all mode every instance was counted once per vertex, so the class
/// sum is divided by three.
pub fn merge_census(
    star: &StarCounter,
    pair: &PairCounter,
    tri: &TriCounter,
    tri_mode: TriangleMode,
) -> Result<MotifCensus> {
    let mut census = MotifCensus::zeroed();

    for (ty, dirs, n) in star.iter() {
        census.add(star_cell_signature(ty, dirs), n)?;
    }

    for (dirs, n) in pair.iter() {
        if dirs[0] == Direction::In {
            continue;
        }
        let twin = pair.get(dirs.map(Direction::complement));
        if twin != n {
            return Err(Error::Consistency(format!(
                "pair cells {} and its complement disagree ({n} vs {twin})",
                fmt_dirs(dirs)
            )));
        }
        census.add(pair_cell_signature(dirs), n)?;
    }

    let mut tri_classes: BTreeMap<MotifSignature, u64> = BTreeMap::new();
    for (ty, dirs, n) in tri.iter() {
        bump(tri_classes.entry(tri_cell_signature(ty, dirs)).or_insert(0), n)?;
    }
    for (sig, sum) in tri_classes {
        let n = match tri_mode {
            TriangleMode::CountAll => {
                if sum % 3 != 0 {
                    return Err(Error::Consistency(format!(
                        "triangle class {sig} sums to {sum}, not a multiple of 3"
                    )));
                }
                sum / 3
            }
            TriangleMode::Removal => sum,
        };
        census.add(sig, n)?;
    }
    Ok(census)
}

pub(crate) fn fmt_dirs(dirs: [Direction; 3]) -> String {
    format!("[{},{},{}]", dirs[0].as_str(), dirs[1].as_str(), dirs[2].as_str())
}
