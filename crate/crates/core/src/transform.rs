//! Subsets of `[n]`, transformations, and the canonical forms `f^α_{Y,X}` of monotone
//! and antitone maps.

use std::cmp::Ordering;
use std::fmt;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

/// Largest `n` representable by [`Subset`].
pub const MAX_DEGREE: usize = 16;

/// A subset of `[n] = {1, ..., n}` stored as a bitmask (bit `i - 1` for element `i`).
///
/// Ordering is by size first, then lexicographic on the increasing element sequence.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Subset(u16);

impl Subset {
    pub const EMPTY: Subset = Subset(0);

    pub fn from_elements(elements: &[usize]) -> Result<Self> {
        let mut bits = 0u16;
        for &e in elements {
            if e == 0 || e > MAX_DEGREE {
                return Err(Error::InvalidSubset(format!("element {e} out of range")));
            }
            bits |= 1 << (e - 1);
        }
        Ok(Subset(bits))
    }

    /// Strictly increasing input required.
    pub fn from_increasing(elements: &[usize]) -> Result<Self> {
        if elements.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidSubset(format!("{elements:?} is not strictly increasing")));
        }
        Self::from_elements(elements)
    }

    /// `{1, ..., k}`
    pub fn initial(k: usize) -> Self {
        assert!(k <= MAX_DEGREE);
        Subset(((1u32 << k) - 1) as u16)
    }

    pub fn singleton(e: usize) -> Self {
        assert!((1..=MAX_DEGREE).contains(&e));
        Subset(1 << (e - 1))
    }

    pub fn bits(&self) -> u16 {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(&self) -> bool {
        self.0 == 0
    }

    pub fn contains(&self, e: usize) -> bool {
        (1..=MAX_DEGREE).contains(&e) && self.0 & (1 << (e - 1)) != 0
    }

    pub fn max_element(&self) -> Option<usize> {
        (self.0 != 0).then(|| 16 - self.0.leading_zeros() as usize)
    }

    pub fn elements(&self) -> Vec<usize> {
        self.iter().collect()
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        let bits = self.0;
        (1..=MAX_DEGREE).filter(move |&i| bits & (1 << (i - 1)) != 0)
    }

    pub fn with(&self, e: usize) -> Self {
        Subset(self.0 | Subset::singleton(e).0)
    }

    pub fn without(&self, e: usize) -> Self {
        Subset(self.0 & !Subset::singleton(e).0)
    }

    pub fn union(&self, other: &Subset) -> Self {
        Subset(self.0 | other.0)
    }

    pub fn is_within(&self, n: usize) -> bool {
        self.max_element().is_none_or(|m| m <= n)
    }

    /// Componentwise order `x_i <= y_i` for sets of equal size.
    pub fn componentwise_le(&self, other: &Subset) -> bool {
        self.len() == other.len() && self.iter().zip(other.iter()).all(|(x, y)| x <= y)
    }
}

impl Ord for Subset {
    fn cmp(&self, other: &Self) -> Ordering {
        self.len().cmp(&other.len()).then_with(|| self.iter().cmp(other.iter()))
    }
}

impl PartialOrd for Subset {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Subset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Subset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.iter().map(|e| e.to_string()).collect();
        write!(f, "{{{}}}", parts.join(","))
    }
}

impl Serialize for Subset {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(self.iter())
    }
}

/// All subsets of `[n]` of size `k`, in [`Subset`] order.
pub fn subsets_of_size(n: usize, k: usize) -> Vec<Subset> {
    assert!(n <= MAX_DEGREE);
    let mut out: Vec<Subset> = (0u32..1 << n)
        .filter(|b| b.count_ones() as usize == k)
        .map(|b| Subset(b as u16))
        .collect();
    out.sort();
    out
}

/// `P_1([n])`: subsets containing 1, ordered by size then lexicographically.
pub fn p1_subsets(n: usize) -> Vec<Subset> {
    (1..=n).flat_map(|k| p1_subsets_of_size(n, k)).collect()
}

pub fn p1_subsets_of_size(n: usize, k: usize) -> Vec<Subset> {
    subsets_of_size(n, k).into_iter().filter(|s| s.contains(1)).collect()
}

/// Element of `Z_2 = {1, -1}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub const BOTH: [Sign; 2] = [Sign::Plus, Sign::Minus];

    pub fn value(self) -> i64 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }

    pub fn from_parity(k: usize) -> Sign {
        if k.is_multiple_of(2) {
            Sign::Plus
        } else {
            Sign::Minus
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Sign::Plus => "plus",
            Sign::Minus => "minus",
        }
    }
}

impl std::ops::Mul for Sign {
    type Output = Sign;
    fn mul(self, rhs: Sign) -> Sign {
        if self == rhs {
            Sign::Plus
        } else {
            Sign::Minus
        }
    }
}

impl std::ops::Neg for Sign {
    type Output = Sign;
    fn neg(self) -> Sign {
        self * Sign::Minus
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sign::Plus => "+1",
            Sign::Minus => "-1",
        })
    }
}

impl Serialize for Sign {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_i64(self.value())
    }
}

/// A total map `[n] -> [n]`, stored by its image sequence (values 1-based).
#[derive(Clone, PartialEq, Eq, Hash, Serialize)]
pub struct Transformation {
    images: Vec<u8>,
}

impl fmt::Debug for Transformation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.images)
    }
}

impl Transformation {
    pub fn new(images: Vec<u8>) -> Result<Self> {
        let n = images.len();
        if n == 0 || n > MAX_DEGREE {
            return Err(Error::InvalidLabel(format!("degree {n} unsupported")));
        }
        if let Some(bad) = images.iter().find(|&&v| v == 0 || v as usize > n) {
            return Err(Error::InvalidLabel(format!("image value {bad} outside [1, {n}]")));
        }
        Ok(Self { images })
    }

    pub fn identity(n: usize) -> Self {
        Self { images: (1..=n as u8).collect() }
    }

    /// `x -> n + 1 - x`
    pub fn reversal(n: usize) -> Self {
        Self { images: (1..=n as u8).rev().collect() }
    }

    pub fn constant(n: usize, z: usize) -> Self {
        Self { images: vec![z as u8; n] }
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    pub fn images(&self) -> &[u8] {
        &self.images
    }

    /// Value at `x` (1-based).
    pub fn apply(&self, x: usize) -> usize {
        self.images[x - 1] as usize
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Transformation) -> Transformation {
        assert_eq!(self.degree(), other.degree());
        Transformation { images: other.images.iter().map(|&x| self.images[x as usize - 1]).collect() }
    }

    /// Injective integer code, used as a hash key.
    pub fn code(&self) -> u64 {
        let n = self.degree() as u64;
        self.images.iter().fold(0u64, |acc, &v| acc * n + (v as u64 - 1))
    }

    pub fn image_set(&self) -> Subset {
        Subset(self.images.iter().fold(0u16, |acc, &v| acc | 1 << (v - 1)))
    }

    pub fn is_order_preserving(&self) -> bool {
        self.images.windows(2).all(|w| w[0] <= w[1])
    }

    pub fn is_order_reversing(&self) -> bool {
        self.images.windows(2).all(|w| w[0] >= w[1])
    }
}

/// Monotonicity class of a transformation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum MonotoneClass {
    Preserving,
    Reversing,
    /// Both preserving and reversing: exactly the constant maps.
    Both,
    Neither,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Analysis {
    pub class: MonotoneClass,
    pub kernel_set: Option<Subset>,
    pub image: Option<Subset>,
}

/// Classifies `t` and, for monotone or antitone maps, returns its kernel set (the minima
/// of the interval kernel classes) and image.
pub fn analyze(t: &Transformation) -> Analysis {
    let class = match (t.is_order_preserving(), t.is_order_reversing()) {
        (true, true) => MonotoneClass::Both,
        (true, false) => MonotoneClass::Preserving,
        (false, true) => MonotoneClass::Reversing,
        (false, false) => MonotoneClass::Neither,
    };
    if class == MonotoneClass::Neither {
        return Analysis { class, kernel_set: None, image: None };
    }
    let imgs = t.images();
    let mut kernel = Subset::singleton(1);
    for x in 2..=imgs.len() {
        if imgs[x - 1] != imgs[x - 2] {
            kernel = kernel.with(x);
        }
    }
    Analysis { class, kernel_set: Some(kernel), image: Some(t.image_set()) }
}

/// The map `f^α_{Y,X}` with kernel set `X` and image `Y`: on the block `[x_i, x_{i+1})` it
/// takes the value `y_i` (sign +1) or `y_{l+1-i}` (sign -1).
pub fn canonical_function(n: usize, image: Subset, kernel: Subset, sign: Sign) -> Result<Transformation> {
    if n == 0 || n > MAX_DEGREE {
        return Err(Error::InvalidLabel(format!("degree {n} unsupported")));
    }
    if !kernel.contains(1) {
        return Err(Error::InvalidLabel(format!("kernel set {kernel} must contain 1")));
    }
    if kernel.len() != image.len() {
        return Err(Error::InvalidLabel(format!("|{kernel}| != |{image}|")));
    }
    if !kernel.is_within(n) || !image.is_within(n) {
        return Err(Error::InvalidLabel(format!("{kernel} or {image} not inside [{n}]")));
    }
    let xs = kernel.elements();
    let ys = image.elements();
    let l = xs.len();
    let mut images = vec![0u8; n];
    for (i, &start) in xs.iter().enumerate() {
        let end = xs.get(i + 1).copied().unwrap_or(n + 1);
        let value = match sign {
            Sign::Plus => ys[i],
            Sign::Minus => ys[l - 1 - i],
        };
        for slot in &mut images[start - 1..end - 1] {
            *slot = value as u8;
        }
    }
    Ok(Transformation { images })
}

/// Canonical label of an element of `Op_n`, `OD_n`, `COD_n` or `Op_n ⋊ Z_2`.
///
/// `formal_sign` is the `Z_2` coordinate carried by `COD_n` and the semidirect product;
/// for `Op_n` and `OD_n` it equals `sign`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct CanonicalLabel {
    pub sign: Sign,
    pub kernel: Subset,
    pub image: Subset,
    pub formal_sign: Sign,
}

impl CanonicalLabel {
    pub fn rank(&self) -> usize {
        self.kernel.len()
    }

    pub fn is_constant(&self) -> bool {
        self.image.len() == 1
    }
}

impl Ord for CanonicalLabel {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.kernel.len(), self.kernel, self.image, self.sign, self.formal_sign).cmp(&(
            other.kernel.len(),
            other.kernel,
            other.image,
            other.sign,
            other.formal_sign,
        ))
    }
}

impl PartialOrd for CanonicalLabel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for CanonicalLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "f^{}_{{{},{}}}", self.sign, self.image, self.kernel)?;
        if self.formal_sign != self.sign {
            write!(f, "[{}]", self.formal_sign)?;
        }
        Ok(())
    }
}
