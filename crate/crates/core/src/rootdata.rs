//! Root systems of types A-G in Bourbaki labelling, with Weyl group climbing.
//!
//! Weights live in the fundamental-weight basis, roots in the simple-root basis.
//! The Cartan matrix is stored so that column `j` is `α_j` written in
//! fundamental weights: `C[i][j] = <α_j, α_i^∨>`.

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::str::FromStr;
use std::sync::{OnceLock, RwLock};

use num_rational::Ratio;
use serde::{Deserialize, Serialize};
use smallvec::SmallVec;

use crate::error::{Error, Result};

pub type Coords = SmallVec<[i32; 8]>;

/// Bitmask of simple-root indices (bit `i` is `α_{i+1}`).
pub type Mask = u64;

pub const MAX_RANK: usize = 63;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Family {
    A,
    B,
    C,
    D,
    E,
    F,
    G,
}

impl Family {
    pub fn letter(self) -> char {
        match self {
            Family::A => 'A',
            Family::B => 'B',
            Family::C => 'C',
            Family::D => 'D',
            Family::E => 'E',
            Family::F => 'F',
            Family::G => 'G',
        }
    }

    pub fn from_letter(c: char) -> Option<Family> {
        Some(match c.to_ascii_uppercase() {
            'A' => Family::A,
            'B' => Family::B,
            'C' => Family::C,
            'D' => Family::D,
            'E' => Family::E,
            'F' => Family::F,
            'G' => Family::G,
            _ => return None,
        })
    }

    pub fn is_exceptional(self) -> bool {
        matches!(self, Family::E | Family::F | Family::G)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct RootSystemSpec {
    family: Family,
    rank: usize,
}

impl RootSystemSpec {
    pub fn new(family: Family, rank: usize) -> Result<Self> {
        let ok = match family {
            Family::A => rank >= 1,
            Family::B | Family::C => rank >= 2,
            Family::D => rank >= 3,
            Family::E => (6..=8).contains(&rank),
            Family::F => rank == 4,
            Family::G => rank == 2,
        };
        if !ok || rank > MAX_RANK {
            return Err(Error::InvalidRootSystem { family: family.letter(), rank });
        }
        Ok(RootSystemSpec { family, rank })
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn full_mask(&self) -> Mask {
        if self.rank == 64 {
            u64::MAX
        } else {
            (1u64 << self.rank) - 1
        }
    }

    pub fn data(&self) -> &'static RootData {
        root_data(*self)
    }

    /// The five exceptional types in the fixed reporting order.
    pub fn exceptional() -> Vec<RootSystemSpec> {
        [(Family::E, 6), (Family::E, 7), (Family::E, 8), (Family::F, 4), (Family::G, 2)]
            .into_iter()
            .map(|(f, r)| RootSystemSpec { family: f, rank: r })
            .collect()
    }
}

impl fmt::Display for RootSystemSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.family.letter(), self.rank)
    }
}

impl FromStr for RootSystemSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let mut chars = s.chars();
        let family = chars
            .next()
            .and_then(Family::from_letter)
            .ok_or_else(|| Error::BadRootSystemName(s.to_string()))?;
        let rank: usize =
            chars.as_str().parse().map_err(|_| Error::BadRootSystemName(s.to_string()))?;
        RootSystemSpec::new(family, rank)
    }
}

/// A weight in the fundamental-weight basis.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Weight(pub Coords);

impl Weight {
    pub fn new(coords: impl IntoIterator<Item = i32>) -> Self {
        Weight(coords.into_iter().collect())
    }

    pub fn zero(rank: usize) -> Self {
        Weight(smallvec::smallvec![0; rank])
    }

    /// `ϖ_i`, 1-based.
    pub fn fundamental(rank: usize, i: usize) -> Self {
        let mut w = Weight::zero(rank);
        w.0[i - 1] = 1;
        w
    }

    pub fn rho(rank: usize) -> Self {
        Weight(smallvec::smallvec![1; rank])
    }

    pub fn rank(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[i32] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }

    pub fn add(&self, other: &Weight) -> Weight {
        Weight(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &Weight) -> Weight {
        Weight(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    pub fn scale(&self, m: i32) -> Weight {
        Weight(self.0.iter().map(|a| a * m).collect())
    }

    pub fn neg(&self) -> Weight {
        self.scale(-1)
    }

    pub fn is_dominant_in(&self, mask: Mask) -> bool {
        self.0.iter().enumerate().all(|(i, &c)| mask & (1 << i) == 0 || c >= 0)
    }

    pub fn check_rank(&self, rank: usize) -> Result<()> {
        if self.rank() != rank {
            return Err(Error::RankMismatch {
                weight: self.to_string(),
                got: self.rank(),
                expected: rank,
            });
        }
        Ok(())
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, "]")
    }
}

impl std::ops::Index<usize> for Weight {
    type Output = i32;
    fn index(&self, i: usize) -> &i32 {
        &self.0[i]
    }
}

/// A root in the simple-root basis.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Root(pub Coords);

impl Root {
    pub fn coords(&self) -> &[i32] {
        &self.0
    }

    pub fn height(&self) -> i32 {
        self.0.iter().sum()
    }

    /// Support lies inside `mask`.
    pub fn within(&self, mask: Mask) -> bool {
        self.0.iter().enumerate().all(|(i, &c)| c == 0 || mask & (1 << i) != 0)
    }
}

impl fmt::Display for Root {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct WeylWord {
    /// 1-based simple reflection indices, in application order.
    pub word: Vec<u8>,
}

impl WeylWord {
    pub fn length(&self) -> usize {
        self.word.len()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Chamber {
    Singular,
    Regular { dominant: Weight, word: WeylWord },
}

impl Chamber {
    pub fn is_singular(&self) -> bool {
        matches!(self, Chamber::Singular)
    }
}

/// Precomputed data of one root system.
#[derive(Debug)]
pub struct RootData {
    pub spec: RootSystemSpec,
    cartan: Vec<Vec<i32>>,
    /// `(α_i, α_i)/2` scaled so the short roots give 1.
    sym: Vec<i64>,
    /// `α_i` in fundamental coordinates.
    simple: Vec<Weight>,
    roots: Vec<Root>,
    root_weights: Vec<Weight>,
    root_half_norms: Vec<i64>,
    inverse: Vec<Vec<Ratio<i64>>>,
}

fn root_data(spec: RootSystemSpec) -> &'static RootData {
    static CACHE: OnceLock<RwLock<HashMap<RootSystemSpec, &'static RootData>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(d) = cache.read().unwrap().get(&spec) {
        return d;
    }
    let built: &'static RootData = Box::leak(Box::new(RootData::build(spec)));
    cache.write().unwrap().entry(spec).or_insert(built)
}

fn cartan_for(spec: RootSystemSpec) -> Vec<Vec<i32>> {
    let r = spec.rank;
    let mut c = vec![vec![0i32; r]; r];
    for (i, row) in c.iter_mut().enumerate() {
        row[i] = 2;
    }
    let mut link = |i: usize, j: usize| {
        c[i - 1][j - 1] = -1;
        c[j - 1][i - 1] = -1;
    };
    match spec.family {
        Family::A | Family::B | Family::C => {
            for i in 1..r {
                link(i, i + 1);
            }
        }
        Family::D => {
            for i in 1..r - 1 {
                link(i, i + 1);
            }
            link(r - 2, r);
        }
        Family::E => {
            link(1, 3);
            link(2, 4);
            for i in 3..r {
                link(i, i + 1);
            }
        }
        Family::F => {
            link(1, 2);
            link(2, 3);
            link(3, 4);
        }
        Family::G => link(1, 2),
    }
    match spec.family {
        // α_r short
        Family::B => c[r - 1][r - 2] = -2,
        // α_r long
        Family::C => c[r - 2][r - 1] = -2,
        // α_1, α_2 long; α_3, α_4 short
        Family::F => c[2][1] = -2,
        // α_1 short
        Family::G => c[0][1] = -3,
        _ => {}
    }
    c
}

fn symmetrizer(spec: RootSystemSpec) -> Vec<i64> {
    let r = spec.rank;
    match spec.family {
        Family::B => (0..r).map(|i| if i + 1 == r { 1 } else { 2 }).collect(),
        Family::C => (0..r).map(|i| if i + 1 == r { 2 } else { 1 }).collect(),
        Family::F => vec![2, 2, 1, 1],
        Family::G => vec![1, 3],
        _ => vec![1; r],
    }
}

fn invert(c: &[Vec<i32>]) -> Vec<Vec<Ratio<i64>>> {
    let n = c.len();
    let mut a: Vec<Vec<Ratio<i64>>> = c
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut v: Vec<Ratio<i64>> = row.iter().map(|&x| Ratio::from_integer(x as i64)).collect();
            v.extend((0..n).map(|j| Ratio::from_integer((i == j) as i64)));
            v
        })
        .collect();
    for col in 0..n {
        let piv = (col..n).find(|&r| a[r][col] != Ratio::from_integer(0)).expect("Cartan matrix is invertible");
        a.swap(col, piv);
        let p = a[col][col];
        for x in a[col].iter_mut() {
            *x /= p;
        }
        for r in 0..n {
            if r != col {
                let f = a[r][col];
                if f != Ratio::from_integer(0) {
                    for j in 0..2 * n {
                        let v = a[col][j];
                        a[r][j] -= f * v;
                    }
                }
            }
        }
    }
    a.into_iter().map(|row| row[n..].to_vec()).collect()
}

impl RootData {
    fn build(spec: RootSystemSpec) -> RootData {
        let r = spec.rank;
        let cartan = cartan_for(spec);
        let sym = symmetrizer(spec);
        let simple: Vec<Weight> = (0..r).map(|j| Weight::new((0..r).map(|i| cartan[i][j]))).collect();

        // Closure by simple-root strings: β + α_i is a root iff q > 0 where p - q = <β, α_i^∨>.
        let to_weight = |c: &Coords| -> Weight {
            Weight::new((0..r).map(|i| (0..r).map(|j| cartan[i][j] * c[j]).sum()))
        };
        let mut set: HashSet<Coords> = HashSet::new();
        let mut layer: Vec<Coords> = (0..r)
            .map(|i| {
                let mut c: Coords = smallvec::smallvec![0; r];
                c[i] = 1;
                c
            })
            .collect();
        let mut roots: Vec<Coords> = Vec::new();
        while !layer.is_empty() {
            for c in &layer {
                set.insert(c.clone());
            }
            roots.extend(layer.iter().cloned());
            let mut next: Vec<Coords> = Vec::new();
            let mut seen: HashSet<Coords> = HashSet::new();
            for beta in &layer {
                let bw = to_weight(beta);
                for i in 0..r {
                    let mut p = 0;
                    let mut down = beta.clone();
                    loop {
                        down[i] -= 1;
                        if down[i] >= 0 && set.contains(&down) {
                            p += 1;
                        } else {
                            break;
                        }
                    }
                    let q = p - bw[i];
                    if q > 0 {
                        let mut up = beta.clone();
                        up[i] += 1;
                        if seen.insert(up.clone()) {
                            next.push(up);
                        }
                    }
                }
            }
            layer = next;
        }
        roots.sort_by(|a, b| {
            let ha: i32 = a.iter().sum();
            let hb: i32 = b.iter().sum();
            ha.cmp(&hb).then_with(|| a.cmp(b))
        });
        let root_weights: Vec<Weight> = roots.iter().map(to_weight).collect();
        let root_half_norms = roots
            .iter()
            .zip(&root_weights)
            .map(|(c, w)| {
                // (α, α) = Σ_j c_j e_j <α, ϖ_j-dual> = Σ_j c_j e_j w_j
                let n: i64 = (0..r).map(|j| c[j] as i64 * sym[j] * w[j] as i64).sum();
                n / 2
            })
            .collect();
        let inverse = invert(&cartan);
        RootData {
            spec,
            cartan,
            sym,
            simple,
            roots: roots.into_iter().map(Root).collect(),
            root_weights,
            root_half_norms,
            inverse,
        }
    }

    pub fn rank(&self) -> usize {
        self.spec.rank
    }

    pub fn cartan(&self) -> &[Vec<i32>] {
        &self.cartan
    }

    pub fn symmetrizer(&self) -> &[i64] {
        &self.sym
    }

    /// `α_i` as a weight, 0-based.
    pub fn simple_root_weight(&self, i: usize) -> &Weight {
        &self.simple[i]
    }

    pub fn positive_roots(&self) -> &[Root] {
        &self.roots
    }

    pub fn root_weights(&self) -> &[Weight] {
        &self.root_weights
    }

    /// `(α, α)/2` in the integer scale (short simple roots give 1).
    pub fn root_half_norms(&self) -> &[i64] {
        &self.root_half_norms
    }

    /// Integer-scaled `(λ, α)` for a weight and a root.
    pub fn pair_root(&self, w: &[i32], root: &[i32]) -> i64 {
        w.iter().zip(root).zip(&self.sym).map(|((&x, &c), &e)| x as i64 * c as i64 * e).sum()
    }

    /// `<λ, α^∨>` for the root with index `idx` in `positive_roots()`.
    pub fn coroot_pairing(&self, w: &[i32], idx: usize) -> i64 {
        self.pair_root(w, &self.roots[idx].0) / self.root_half_norms[idx]
    }

    /// The W-invariant form with long roots of squared length 2.
    pub fn inner_product(&self, a: &Weight, b: &Weight) -> Ratio<i64> {
        let r = self.rank();
        let long = *self.sym.iter().max().unwrap();
        let mut acc = Ratio::from_integer(0);
        for i in 0..r {
            if a[i] == 0 {
                continue;
            }
            for j in 0..r {
                if b[j] == 0 {
                    continue;
                }
                acc += self.inverse[i][j] * Ratio::from_integer(self.sym[i] * a[i] as i64 * b[j] as i64);
            }
        }
        acc / Ratio::from_integer(long)
    }

    /// `s_i` applied in place (0-based `i`).
    #[inline]
    pub fn reflect(&self, w: &mut [i32], i: usize) {
        let c = w[i];
        if c != 0 {
            for (x, a) in w.iter_mut().zip(self.simple[i].0.iter()) {
                *x -= c * a;
            }
        }
    }

    /// Climb to the `mask`-dominant chamber in place. Returns the word length,
    /// or `None` as soon as a coordinate at a `mask` index is zero.
    pub fn climb_in_place(&self, w: &mut [i32], mask: Mask) -> Option<u32> {
        let mut len = 0u32;
        loop {
            let mut neg = None;
            for i in 0..w.len() {
                if mask & (1 << i) == 0 {
                    continue;
                }
                if w[i] == 0 {
                    return None;
                }
                if w[i] < 0 && neg.is_none() {
                    neg = Some(i);
                }
            }
            match neg {
                None => return Some(len),
                Some(i) => {
                    self.reflect(w, i);
                    len += 1;
                }
            }
        }
    }

    /// Climbing with the recorded word.
    pub fn climb(&self, w: &Weight, mask: Mask) -> Chamber {
        let mut v = w.0.clone();
        let mut word = Vec::new();
        loop {
            let mut neg = None;
            for i in 0..v.len() {
                if mask & (1 << i) == 0 {
                    continue;
                }
                if v[i] == 0 {
                    return Chamber::Singular;
                }
                if v[i] < 0 && neg.is_none() {
                    neg = Some(i);
                }
            }
            match neg {
                None => return Chamber::Regular { dominant: Weight(v), word: WeylWord { word } },
                Some(i) => {
                    self.reflect(&mut v, i);
                    word.push(i as u8 + 1);
                }
            }
        }
    }

    /// Dominant conjugate under the reflections in `mask`, ignoring walls.
    pub fn dominant_conjugate_in_place(&self, w: &mut [i32], mask: Mask) {
        loop {
            let neg = (0..w.len()).find(|&i| mask & (1 << i) != 0 && w[i] < 0);
            match neg {
                None => return,
                Some(i) => self.reflect(w, i),
            }
        }
    }
}

pub fn cartan_matrix(spec: RootSystemSpec) -> Vec<Vec<i32>> {
    spec.data().cartan.clone()
}

pub fn positive_roots(spec: RootSystemSpec) -> Vec<Root> {
    spec.data().roots.clone()
}

pub fn to_dominant_chamber(spec: RootSystemSpec, w: &Weight) -> Chamber {
    spec.data().climb(w, spec.full_mask())
}

pub fn inner_product(spec: RootSystemSpec, a: &Weight, b: &Weight) -> Ratio<i64> {
    spec.data().inner_product(a, b)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(s: &str) -> RootSystemSpec {
        s.parse().unwrap()
    }

    #[test]
    fn root_counts() {
        for (name, n) in [
            ("A1", 1),
            ("A5", 15),
            ("B3", 9),
            ("C4", 16),
            ("D5", 20),
            ("E6", 36),
            ("E7", 63),
            ("E8", 120),
            ("F4", 24),
            ("G2", 6),
        ] {
            assert_eq!(positive_roots(spec(name)).len(), n, "{name}");
        }
    }

    #[test]
    fn g2_highest_root_has_short_alpha1() {
        let roots = positive_roots(spec("G2"));
        assert_eq!(roots.last().unwrap().coords(), &[3, 2]);
        assert_eq!(cartan_matrix(spec("G2")), vec![vec![2, -3], vec![-1, 2]]);
    }

    #[test]
    fn cartan_matches_symmetrized_form() {
        for name in ["B4", "C3", "D4", "E7", "F4", "G2"] {
            let d = spec(name).data();
            let r = d.rank();
            for i in 0..r {
                for j in 0..r {
                    // <α_j, α_i^∨> = 2(α_i, α_j)/(α_i, α_i)
                    let aij = d.inner_product(d.simple_root_weight(i), d.simple_root_weight(j));
                    let aii = d.inner_product(d.simple_root_weight(i), d.simple_root_weight(i));
                    assert_eq!(aij * 2 / aii, Ratio::from_integer(d.cartan()[i][j] as i64));
                }
            }
        }
    }

    #[test]
    fn g2_short_root_norm() {
        let d = spec("G2").data();
        let a1 = d.simple_root_weight(0);
        let a2 = d.simple_root_weight(1);
        assert_eq!(d.inner_product(a1, a1), Ratio::new(2, 3));
        assert_eq!(d.inner_product(a2, a2), Ratio::from_integer(2));
    }

    #[test]
    fn fundamental_weights_dual_to_coroots() {
        let d = spec("F4").data();
        for i in 0..4 {
            for j in 0..4 {
                let w = Weight::fundamental(4, i + 1);
                let a = d.simple_root_weight(j);
                let pairing = d.inner_product(&w, a) * 2 / d.inner_product(a, a);
                assert_eq!(pairing, Ratio::from_integer((i == j) as i64));
            }
        }
    }

    #[test]
    fn beauville_donagi_weight_is_singular() {
        let w = Weight::new([4, -5, 1, 1, 1]);
        assert!(to_dominant_chamber(spec("A5"), &w).is_singular());
    }

    #[test]
    fn rho_is_regular_of_length_zero() {
        let s = spec("E8");
        match to_dominant_chamber(s, &Weight::rho(8)) {
            Chamber::Regular { dominant, word } => {
                assert_eq!(dominant, Weight::rho(8));
                assert_eq!(word.length(), 0);
            }
            Chamber::Singular => panic!(),
        }
    }

    #[test]
    fn f4_climb_hits_alpha2_wall() {
        let d = spec("F4").data();
        let mut w = vec![1, 1, 3, -6];
        for i in [4, 3, 2, 1, 3] {
            d.reflect(&mut w, i - 1);
        }
        assert_eq!(w, vec![1, 0, 1, 2]);
        assert!(to_dominant_chamber(spec("F4"), &Weight::new([1, 1, 3, -6])).is_singular());
    }

    #[test]
    fn parse_and_display() {
        assert_eq!(spec("e6").to_string(), "E6");
        assert!("E9".parse::<RootSystemSpec>().is_err());
        assert!("D2".parse::<RootSystemSpec>().is_err());
        assert!("X3".parse::<RootSystemSpec>().is_err());
    }
}
