//! The eight similarities of the Minkowski curve, word addressing, and the
//! ordered vertex chains `V_m`.
//!
//! Every map has ratio 1/4, an axis-aligned rotation and an integer
//! translation, so all vertex coordinates are dyadic and exact in `f64`.
//! Rotations are applied by swapping and negating coordinates.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Largest level the crate will ever build (`8^10 + 1` vertices).
pub const HARD_MAX_LEVEL: u32 = 10;
/// Level cap used when `FRACTAL_FDM_MAX_LEVEL` is unset.
pub const DEFAULT_MAX_LEVEL: u32 = 8;
/// Environment variable overriding the level cap.
pub const MAX_LEVEL_ENV: &str = "FRACTAL_FDM_MAX_LEVEL";

/// Number of similarities in the system.
pub const MAP_COUNT: u8 = 8;

/// Current level cap: `FRACTAL_FDM_MAX_LEVEL` if set and parseable, clamped
/// to [`HARD_MAX_LEVEL`], otherwise [`DEFAULT_MAX_LEVEL`].
pub fn level_cap() -> u32 {
    std::env::var(MAX_LEVEL_ENV)
        .ok()
        .and_then(|v| v.trim().parse::<u32>().ok())
        .map(|v| v.min(HARD_MAX_LEVEL))
        .unwrap_or(DEFAULT_MAX_LEVEL)
}

pub fn check_level(m: u32) -> Result<()> {
    let cap = level_cap();
    if m > cap {
        return Err(Error::LevelCap {
            level: m,
            cap,
            hard: HARD_MAX_LEVEL,
        });
    }
    Ok(())
}

/// `8^m`, the number of cells (and edges) at level `m`.
pub fn cell_count(m: u32) -> usize {
    8usize.pow(m)
}

/// `8^m + 1`, the number of vertices of `V_m`.
pub fn vertex_count(m: u32) -> usize {
    cell_count(m) + 1
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Point2<T> {
    pub x: T,
    pub y: T,
}

impl<T: Scalar> Point2<T> {
    pub fn new(x: T, y: T) -> Self {
        Point2 { x, y }
    }

    pub fn origin() -> Self {
        Point2::new(T::zero(), T::zero())
    }

    /// `P_0 = (0, 0)`, the start of the chain.
    pub fn p0() -> Self {
        Self::origin()
    }

    /// `P_1 = (1, 0)`, the end of the chain.
    pub fn p1() -> Self {
        Point2::new(T::one(), T::zero())
    }

    pub fn distance_squared(&self, other: &Self) -> T {
        let dx = self.x.clone() - other.x.clone();
        let dy = self.y.clone() - other.y.clone();
        dx.clone() * dx + dy.clone() * dy
    }
}

impl Point2<f64> {
    pub fn distance(&self, other: &Self) -> f64 {
        self.distance_squared(other).sqrt()
    }
}

/// `x -> (1/4) (R x + t)` with `R` a rotation by a multiple of a quarter turn.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Similarity {
    /// Counter-clockwise quarter turns, in `0..4`.
    pub quarter_turns: u8,
    /// Translation before scaling by 1/4.
    pub translation: (i64, i64),
}

// Rotation angles 0, pi/2, 3pi/2. The third map uses angle 0: with pi/2 its
// image of P_1 would be (1/4, 1/2), breaking the chain at f_4(P_0) = (1/2, 1/4).
const MAPS: [Similarity; 8] = [
    Similarity {
        quarter_turns: 0,
        translation: (0, 0),
    },
    Similarity {
        quarter_turns: 1,
        translation: (1, 0),
    },
    Similarity {
        quarter_turns: 0,
        translation: (1, 1),
    },
    Similarity {
        quarter_turns: 3,
        translation: (2, 1),
    },
    Similarity {
        quarter_turns: 3,
        translation: (2, 0),
    },
    Similarity {
        quarter_turns: 0,
        translation: (2, -1),
    },
    Similarity {
        quarter_turns: 1,
        translation: (3, -1),
    },
    Similarity {
        quarter_turns: 0,
        translation: (3, 0),
    },
];

impl Similarity {
    /// The map `f_i`, `i` in `1..=8`.
    pub fn get(i: u8) -> Result<Self> {
        if !(1..=MAP_COUNT).contains(&i) {
            return Err(Error::invalid(format!("map index {i} not in 1..=8")));
        }
        Ok(MAPS[usize::from(i - 1)])
    }

    pub fn ratio<T: Scalar>() -> T {
        T::ratio(1, 4)
    }

    pub fn apply<T: Scalar>(&self, p: &Point2<T>) -> Point2<T> {
        let (x, y) = (p.x.clone(), p.y.clone());
        let (rx, ry) = match self.quarter_turns % 4 {
            0 => (x, y),
            1 => (-y, x),
            2 => (-x, -y),
            _ => (y, -x),
        };
        let quarter = T::ratio(1, 4);
        Point2::new(
            (rx + T::from_i64(self.translation.0)) * quarter.clone(),
            (ry + T::from_i64(self.translation.1)) * quarter,
        )
    }
}

/// `f_i(p)`.
pub fn apply_map<T: Scalar>(i: u8, p: &Point2<T>) -> Result<Point2<T>> {
    Ok(Similarity::get(i)?.apply(p))
}

/// An address `w` in `{1..8}^m`. The empty word is the identity map.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word(Vec<u8>);

impl Word {
    pub fn new(letters: Vec<u8>) -> Result<Self> {
        if let Some(bad) = letters.iter().find(|&&l| !(1..=MAP_COUNT).contains(&l)) {
            return Err(Error::invalid(format!("word letter {bad} not in 1..=8")));
        }
        Ok(Word(letters))
    }

    pub fn empty() -> Self {
        Word(Vec::new())
    }

    /// The length-`m` word whose letters are the base-8 digits of `cell`
    /// (most significant first), each shifted by one.
    pub fn from_cell(cell: usize, m: u32) -> Result<Self> {
        if cell >= cell_count(m) {
            return Err(Error::invalid(format!(
                "cell {cell} out of range at level {m}"
            )));
        }
        let mut letters = vec![1u8; m as usize];
        let mut rest = cell;
        for slot in letters.iter_mut().rev() {
            *slot = (rest % 8) as u8 + 1;
            rest /= 8;
        }
        Ok(Word(letters))
    }

    pub fn letters(&self) -> &[u8] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Position of the cell `f_w(V_0)` along the level-`|w|` chain.
    pub fn cell(&self) -> usize {
        self.0
            .iter()
            .fold(0usize, |acc, &l| acc * 8 + usize::from(l - 1))
    }

    /// The word with `letter` appended.
    pub fn extended(&self, letter: u8) -> Result<Self> {
        let mut letters = self.0.clone();
        letters.push(letter);
        Word::new(letters)
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for l in &self.0 {
            write!(f, "{l}")?;
        }
        Ok(())
    }
}

impl FromStr for Word {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let letters = s
            .chars()
            .filter(|c| !matches!(c, ',' | ' '))
            .map(|c| {
                c.to_digit(10)
                    .map(|d| d as u8)
                    .ok_or_else(|| Error::invalid(format!("bad word letter {c:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Word::new(letters)
    }
}

/// `f_{w_1} o f_{w_2} o ... o f_{w_m} (p)`.
pub fn apply_word<T: Scalar>(w: &Word, p: &Point2<T>) -> Point2<T> {
    w.letters()
        .iter()
        .rev()
        .fold(p.clone(), |q, &l| MAPS[usize::from(l - 1)].apply(&q))
}

/// All `8^m` words of length `m` in lexicographic order.
pub fn enumerate_words(m: u32) -> Result<Vec<Word>> {
    check_level(m)?;
    (0..cell_count(m)).map(|c| Word::from_cell(c, m)).collect()
}

/// Canonical address of a vertex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Address {
    /// `P_0`, the only vertex not of the form `f_w(P_1)`.
    Origin,
    /// The vertex is `f_w(P_1)`.
    Word(Word),
}

impl fmt::Display for Address {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Address::Origin => f.write_str("origin"),
            Address::Word(w) => write!(f, "{w}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Vertex<T> {
    pub coords: Point2<T>,
    pub index: usize,
    /// `index / 8^m`.
    pub param: T,
    pub address: Address,
}

/// The level-`m` graph: the ordered chain `V_m` with path adjacency.
///
/// Only coordinates are stored; parameters and addresses are derived from
/// the index on demand.
#[derive(Clone, Debug, PartialEq)]
pub struct GraphApprox<T> {
    level: u32,
    coords: Vec<Point2<T>>,
}

impl<T: Scalar> GraphApprox<T> {
    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn len(&self) -> usize {
        self.coords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn points(&self) -> &[Point2<T>] {
        &self.coords
    }

    pub fn point(&self, index: usize) -> &Point2<T> {
        &self.coords[index]
    }

    pub fn param(&self, index: usize) -> T {
        T::from_usize(index) / T::from_usize(cell_count(self.level))
    }

    pub fn address(&self, index: usize) -> Address {
        if index == 0 {
            Address::Origin
        } else {
            Address::Word(Word::from_cell(index - 1, self.level).expect("index within the chain"))
        }
    }

    pub fn vertex(&self, index: usize) -> Vertex<T> {
        Vertex {
            coords: self.coords[index].clone(),
            index,
            param: self.param(index),
            address: self.address(index),
        }
    }

    pub fn vertices(&self) -> impl Iterator<Item = Vertex<T>> + '_ {
        (0..self.len()).map(|i| self.vertex(i))
    }

    /// Indices of `V_0`: `0` and `8^m`.
    pub fn boundary(&self) -> [usize; 2] {
        [0, self.len() - 1]
    }

    pub fn is_boundary(&self, index: usize) -> bool {
        index == 0 || index + 1 == self.len()
    }

    pub fn neighbors(&self, index: usize) -> impl Iterator<Item = usize> {
        let last = self.len() - 1;
        let prev = (index > 0).then(|| index - 1);
        let next = (index < last).then(|| index + 1);
        prev.into_iter().chain(next)
    }

    pub fn degree(&self, index: usize) -> usize {
        self.neighbors(index).count()
    }
}

/// Build `V_m` as `[P_0] ++ [f_w(P_1) for w in lexicographic order]`.
///
/// Uses `V_m = [P_0] ++ f_1(V_{m-1} \ P_0) ++ ... ++ f_8(V_{m-1} \ P_0)`,
/// which yields the same order in `O(8^m)` map applications.
pub fn build_graph<T: Scalar>(m: u32) -> Result<GraphApprox<T>> {
    check_level(m)?;
    let mut coords = vec![Point2::p0(), Point2::p1()];
    for _ in 0..m {
        let mut next = Vec::with_capacity(8 * (coords.len() - 1) + 1);
        next.push(Point2::p0());
        for map in &MAPS {
            next.extend(coords[1..].iter().map(|p| map.apply(p)));
        }
        coords = next;
    }
    Ok(GraphApprox { level: m, coords })
}
