//! Enumeration of `Op_n`, `OD_n`, `COD_n` and `Op_n ⋊ Z_2`, their Cayley tables, and
//! the comparison maps `φ: Op_n ⋊ Z_2 -> COD_n` and `ψ: Op_n ⋊ Z_2 -> OD_n`.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::report::Report;
use crate::transform::{
    canonical_function, p1_subsets_of_size, subsets_of_size, CanonicalLabel, Sign, Subset, Transformation,
};

/// Environment variable overriding the size caps.
pub const MAX_N_ENV: &str = "MONOIDLAB_MAX_N";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum MonoidKind {
    Op,
    OD,
    COD,
    SemidirectOpZ2,
}

impl MonoidKind {
    pub fn name(self) -> &'static str {
        match self {
            MonoidKind::Op => "Op",
            MonoidKind::OD => "OD",
            MonoidKind::COD => "COD",
            MonoidKind::SemidirectOpZ2 => "Op⋊Z2",
        }
    }
}

impl fmt::Display for MonoidKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for MonoidKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "op" => Ok(MonoidKind::Op),
            "od" => Ok(MonoidKind::OD),
            "cod" => Ok(MonoidKind::COD),
            "semidirect" | "opz2" => Ok(MonoidKind::SemidirectOpZ2),
            other => Err(Error::UnsupportedKind(other.to_string())),
        }
    }
}

/// Size caps: element enumeration, and anything that needs a full Cayley table.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    pub enumeration: usize,
    pub tables: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits { enumeration: 8, tables: 6 }
    }
}

impl Limits {
    /// Defaults, with both caps raised to `MONOIDLAB_MAX_N` when that variable is set.
    /// Large values can exhaust memory.
    pub fn from_env() -> Self {
        let mut limits = Limits::default();
        if let Some(max) = std::env::var(MAX_N_ENV).ok().and_then(|v| v.parse::<usize>().ok()) {
            let max = max.min(crate::transform::MAX_DEGREE);
            limits.enumeration = limits.enumeration.max(max);
            limits.tables = max;
        }
        limits
    }

    pub fn check(&self, n: usize, max: usize, what: &'static str) -> Result<()> {
        if n == 0 || n > max {
            return Err(Error::SizeOutOfRange { n, max, what });
        }
        Ok(())
    }
}

/// One enumerated element: its label and its underlying map. For the semidirect product
/// the map is the `Op_n` coordinate and `formal_sign` encodes the group coordinate.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Element {
    pub label: CanonicalLabel,
    pub map: Transformation,
}

/// Lists the elements of `kind` for degree `n` in canonical order, without products.
pub fn enumerate_elements(kind: MonoidKind, n: usize) -> Result<Vec<Element>> {
    Limits::from_env().check(n, Limits::from_env().enumeration, "enumeration")?;
    enumerate_unchecked(kind, n)
}

fn enumerate_unchecked(kind: MonoidKind, n: usize) -> Result<Vec<Element>> {
    let mut out = Vec::new();
    for k in 1..=n {
        for kernel in p1_subsets_of_size(n, k) {
            for image in subsets_of_size(n, k) {
                let signs: &[Sign] = match kind {
                    MonoidKind::Op | MonoidKind::SemidirectOpZ2 => &[Sign::Plus],
                    MonoidKind::OD | MonoidKind::COD if k == 1 => &[Sign::Plus],
                    MonoidKind::OD | MonoidKind::COD => &Sign::BOTH,
                };
                for &sign in signs {
                    let map = canonical_function(n, image, kernel, sign)?;
                    let formal: &[Sign] = match kind {
                        MonoidKind::Op | MonoidKind::OD => &[sign][..],
                        MonoidKind::COD if k == 1 => &Sign::BOTH,
                        MonoidKind::COD => &[sign][..],
                        MonoidKind::SemidirectOpZ2 => &Sign::BOTH,
                    };
                    for &formal_sign in formal {
                        let label = CanonicalLabel { sign, kernel, image, formal_sign };
                        out.push(Element { label, map: map.clone() });
                    }
                }
            }
        }
    }
    out.sort_by_key(|e| e.label);
    Ok(out)
}

/// A finite monoid given by its elements and full Cayley table.
///
/// `cayley[i][j]` is the index of `element_i ∘ element_j` (`element_j` applied first).
#[derive(Debug, Clone)]
pub struct MonoidTable {
    kind: MonoidKind,
    n: usize,
    elements: Vec<Element>,
    cayley: Vec<u32>,
    identity: usize,
    by_label: HashMap<CanonicalLabel, usize>,
}

impl MonoidTable {
    /// Enumerates `kind` for degree `n` and multiplies out the Cayley table.
    pub fn build(kind: MonoidKind, n: usize) -> Result<Self> {
        let limits = Limits::from_env();
        limits.check(n, limits.tables, "Cayley tables")?;
        let elements = enumerate_unchecked(kind, n)?;
        let m = elements.len();
        let key = |map: &Transformation, formal: Sign| match kind {
            MonoidKind::Op | MonoidKind::OD => (map.code(), Sign::Plus),
            MonoidKind::COD | MonoidKind::SemidirectOpZ2 => (map.code(), formal),
        };
        let index: HashMap<(u64, Sign), usize> =
            elements.iter().enumerate().map(|(i, e)| (key(&e.map, e.label.formal_sign), i)).collect();
        if index.len() != m {
            return Err(Error::Structure(format!("duplicate elements while enumerating {kind}_{n}")));
        }
        let reversal = Transformation::reversal(n);
        let mut cayley = vec![0u32; m * m];
        for (i, a) in elements.iter().enumerate() {
            for (j, b) in elements.iter().enumerate() {
                let (map, formal) = match kind {
                    MonoidKind::SemidirectOpZ2 => {
                        // (f2, g2)(f1, g1) = (f2 (g2 f1 g2), g2 g1)
                        let acted = match a.label.formal_sign {
                            Sign::Plus => b.map.clone(),
                            Sign::Minus => reversal.compose(&b.map).compose(&reversal),
                        };
                        (a.map.compose(&acted), a.label.formal_sign * b.label.formal_sign)
                    }
                    _ => (a.map.compose(&b.map), a.label.formal_sign * b.label.formal_sign),
                };
                let k = key(&map, formal);
                let Some(&idx) = index.get(&k) else {
                    return Err(Error::Structure(format!("{kind}_{n} not closed: {} * {}", a.label, b.label)));
                };
                cayley[i * m + j] = idx as u32;
            }
        }
        let identity_label = CanonicalLabel {
            sign: Sign::Plus,
            kernel: Subset::initial(n),
            image: Subset::initial(n),
            formal_sign: Sign::Plus,
        };
        let by_label: HashMap<CanonicalLabel, usize> =
            elements.iter().enumerate().map(|(i, e)| (e.label, i)).collect();
        let identity = by_label[&identity_label];
        Ok(MonoidTable { kind, n, elements, cayley, identity, by_label })
    }

    pub fn kind(&self) -> MonoidKind {
        self.kind
    }
    pub fn degree(&self) -> usize {
        self.n
    }
    pub fn len(&self) -> usize {
        self.elements.len()
    }
    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }
    pub fn identity(&self) -> usize {
        self.identity
    }
    pub fn elements(&self) -> &[Element] {
        &self.elements
    }
    pub fn label(&self, i: usize) -> &CanonicalLabel {
        &self.elements[i].label
    }
    pub fn map(&self, i: usize) -> &Transformation {
        &self.elements[i].map
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.cayley[a * self.len() + b] as usize
    }

    pub fn index_of_label(&self, label: &CanonicalLabel) -> Option<usize> {
        self.by_label.get(label).copied()
    }

    /// Index of `f^α_{Y,X}` (kernel set `X`, image `Y`). For `OD_n` the sign of a constant
    /// is irrelevant; for `COD_n` it selects the formal sign.
    pub fn find(&self, kernel: Subset, image: Subset, alpha: Sign) -> Option<usize> {
        let constant = image.len() == 1;
        let (sign, formal_sign) = match self.kind {
            MonoidKind::Op => (Sign::Plus, Sign::Plus),
            MonoidKind::OD if constant => (Sign::Plus, Sign::Plus),
            MonoidKind::OD => (alpha, alpha),
            MonoidKind::COD if constant => (Sign::Plus, alpha),
            MonoidKind::COD => (alpha, alpha),
            MonoidKind::SemidirectOpZ2 => (Sign::Plus, alpha),
        };
        if self.kind == MonoidKind::Op && alpha == Sign::Minus {
            return None;
        }
        self.index_of_label(&CanonicalLabel { sign, kernel, image, formal_sign })
    }

    /// The idempotent `e_X = f^1_{X,X}`.
    pub fn idempotent_of(&self, kernel: Subset) -> Option<usize> {
        self.find(kernel, kernel, Sign::Plus)
    }

    pub fn is_idempotent(&self, a: usize) -> bool {
        self.mul(a, a) == a
    }

    /// The `Z_2` coordinate used to name elements of maximal subgroups.
    pub fn group_sign(&self, a: usize) -> Sign {
        let l = self.label(a);
        match self.kind {
            MonoidKind::Op => Sign::Plus,
            MonoidKind::OD => l.sign,
            MonoidKind::COD | MonoidKind::SemidirectOpZ2 => l.formal_sign,
        }
    }

    /// Exhaustive associativity check; returns the first failing triple.
    pub fn associativity_counterexample(&self) -> Option<(usize, usize, usize)> {
        let m = self.len();
        for a in 0..m {
            for b in 0..m {
                let ab = self.mul(a, b);
                for c in 0..m {
                    if self.mul(ab, c) != self.mul(a, self.mul(b, c)) {
                        return Some((a, b, c));
                    }
                }
            }
        }
        None
    }

    /// Associativity on `samples` pseudo-random triples (deterministic LCG).
    pub fn sampled_associativity_counterexample(&self, samples: usize) -> Option<(usize, usize, usize)> {
        let m = self.len() as u64;
        let mut state = 0x9E37_79B9_7F4A_7C15u64;
        let mut next = || {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((state >> 33) % m) as usize
        };
        (0..samples).map(|_| (next(), next(), next())).find(|&(a, b, c)| {
            self.mul(self.mul(a, b), c) != self.mul(a, self.mul(b, c))
        })
    }
}

/// The semidirect product `Op_n ⋊ Z_2`.
pub fn semidirect_table(n: usize) -> Result<MonoidTable> {
    MonoidTable::build(MonoidKind::SemidirectOpZ2, n)
}

fn describe_pair(t: &MonoidTable, a: usize) -> String {
    let g = match t.label(a).formal_sign {
        Sign::Plus => "id",
        Sign::Minus => "h",
    };
    format!("({:?}, {g})", t.map(a))
}

/// Image of `(f, g)` under `φ`, as a `(map, formal sign)` pair.
fn phi_image(n: usize, semi: &MonoidTable, a: usize) -> (Transformation, Sign) {
    let g = semi.label(a).formal_sign;
    let gmap = match g {
        Sign::Plus => Transformation::identity(n),
        Sign::Minus => Transformation::reversal(n),
    };
    (semi.map(a).compose(&gmap), g)
}

/// Checks that `φ((f, g)) = (f g, sgn g)` is a monoid isomorphism `Op_n ⋊ Z_2 -> COD_n`.
pub fn check_phi_isomorphism(n: usize) -> Result<Report> {
    let semi = semidirect_table(n)?;
    let cod = MonoidTable::build(MonoidKind::COD, n)?;
    let mut report = Report::new(format!("phi: Op_{n} ⋊ Z_2 -> COD_{n}"));
    let cod_index: HashMap<(u64, Sign), usize> =
        (0..cod.len()).map(|i| ((cod.map(i).code(), cod.label(i).formal_sign), i)).collect();

    let mut phi = Vec::with_capacity(semi.len());
    let mut undefined = None;
    for a in 0..semi.len() {
        let (map, sign) = phi_image(n, &semi, a);
        match cod_index.get(&(map.code(), sign)) {
            Some(&i) => phi.push(i),
            None => {
                undefined.get_or_insert_with(|| describe_pair(&semi, a));
                phi.push(usize::MAX);
            }
        }
    }
    report.check("well-defined into COD", undefined.is_none(), undefined);

    let mut bad = None;
    if phi.iter().all(|&i| i != usize::MAX) {
        'outer: for a in 0..semi.len() {
            for b in 0..semi.len() {
                if phi[semi.mul(a, b)] != cod.mul(phi[a], phi[b]) {
                    bad = Some(format!("{} * {}", describe_pair(&semi, a), describe_pair(&semi, b)));
                    break 'outer;
                }
            }
        }
    } else {
        bad = Some("phi undefined somewhere".into());
    }
    report.check("multiplicative on all pairs", bad.is_none(), bad);

    let mut seen = vec![false; cod.len()];
    let mut clash = None;
    for (a, &i) in phi.iter().enumerate() {
        if i != usize::MAX {
            if seen[i] {
                clash.get_or_insert_with(|| describe_pair(&semi, a));
            }
            seen[i] = true;
        }
    }
    report.check("injective", clash.is_none(), clash);
    report.check(
        "sizes agree",
        semi.len() == cod.len(),
        Some(format!("|Op_{n} ⋊ Z_2| = {}, |COD_{n}| = {}", semi.len(), cod.len())),
    );
    report.check("unit preserved", phi[semi.identity()] == cod.identity(), None);
    Ok(report)
}

/// Fiber statistics for `ψ((f, g)) = f g`.
#[derive(Debug, Clone, Serialize)]
pub struct PsiSummary {
    pub fiber_sizes: Vec<usize>,
    pub fibers_of_size_two: usize,
    pub total: usize,
}

/// Checks that `ψ: Op_n ⋊ Z_2 -> OD_n` is a surjective homomorphism whose only non-trivial
/// fibers sit over the constants and have two elements.
pub fn check_psi_quotient(n: usize) -> Result<(Report, PsiSummary)> {
    let semi = semidirect_table(n)?;
    let od = MonoidTable::build(MonoidKind::OD, n)?;
    let od_index: HashMap<u64, usize> = (0..od.len()).map(|i| (od.map(i).code(), i)).collect();
    let mut report = Report::new(format!("psi: Op_{n} ⋊ Z_2 -> OD_{n}"));

    let psi: Vec<usize> = (0..semi.len())
        .map(|a| {
            let (map, _) = phi_image(n, &semi, a);
            od_index.get(&map.code()).copied().unwrap_or(usize::MAX)
        })
        .collect();
    let defined = psi.iter().all(|&i| i != usize::MAX);
    report.check("lands in OD", defined, None);

    let mut bad = None;
    if defined {
        'outer: for a in 0..semi.len() {
            for b in 0..semi.len() {
                if psi[semi.mul(a, b)] != od.mul(psi[a], psi[b]) {
                    bad = Some(format!("{} * {}", describe_pair(&semi, a), describe_pair(&semi, b)));
                    break 'outer;
                }
            }
        }
    }
    report.check("homomorphism", defined && bad.is_none(), bad);

    let mut fiber_sizes = vec![0usize; od.len()];
    for &i in psi.iter().filter(|&&i| i != usize::MAX) {
        fiber_sizes[i] += 1;
    }
    report.check("surjective", fiber_sizes.iter().all(|&s| s > 0), None);
    let shape_ok = (0..od.len()).all(|i| {
        let expected = if od.label(i).is_constant() { 2 } else { 1 };
        fiber_sizes[i] == expected
    });
    report.check("fibers: 2 over constants, 1 elsewhere", shape_ok, None);
    let summary = PsiSummary {
        fibers_of_size_two: fiber_sizes.iter().filter(|&&s| s == 2).count(),
        total: fiber_sizes.iter().sum(),
        fiber_sizes,
    };
    report.check(
        "fiber sizes sum to |COD|",
        summary.total == semi.len(),
        Some(format!("sum = {}, |Op_{n} ⋊ Z_2| = {}", summary.total, semi.len())),
    );
    Ok((report, summary))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_sizes() {
        assert_eq!(enumerate_elements(MonoidKind::Op, 3).unwrap().len(), 10);
        assert_eq!(enumerate_elements(MonoidKind::OD, 3).unwrap().len(), 17);
        assert_eq!(enumerate_elements(MonoidKind::COD, 3).unwrap().len(), 20);
        assert_eq!(semidirect_table(2).unwrap().len(), 6);
    }

    #[test]
    fn identity_acts_trivially() {
        for kind in [MonoidKind::Op, MonoidKind::OD, MonoidKind::COD, MonoidKind::SemidirectOpZ2] {
            let t = MonoidTable::build(kind, 3).unwrap();
            let e = t.identity();
            for a in 0..t.len() {
                assert_eq!(t.mul(e, a), a);
                assert_eq!(t.mul(a, e), a);
            }
        }
    }

    #[test]
    fn semidirect_constant_with_h_squares_to_identity_part() {
        let t = semidirect_table(3).unwrap();
        let c1 = Subset::singleton(1);
        let c1h = t.find(Subset::singleton(1), c1, Sign::Minus).unwrap();
        let c1id = t.find(Subset::singleton(1), c1, Sign::Plus).unwrap();
        assert_eq!(t.mul(c1h, c1h), c1id);
    }

    #[test]
    fn rejects_out_of_range() {
        assert!(MonoidTable::build(MonoidKind::OD, 0).is_err());
        assert!(matches!(
            MonoidTable::build(MonoidKind::OD, 9),
            Err(Error::SizeOutOfRange { .. })
        ));
        assert!("xyz".parse::<MonoidKind>().is_err());
    }

    #[test]
    fn phi_and_psi_small() {
        assert!(check_phi_isomorphism(2).unwrap().passed());
        let (rep, summary) = check_psi_quotient(3).unwrap();
        assert!(rep.passed());
        assert_eq!(summary.fibers_of_size_two, 3);
        assert_eq!(summary.total, 20);
        let (rep1, _) = check_psi_quotient(1).unwrap();
        assert!(rep1.passed());
    }
}
