//! The category `D_n`, its contracted algebra `k_0 D_n`, and the maps `F`, `F'` into
//! `CA_n` that exhibit `CA_n ≅ k_0 D_n × k_0 D_n`.

use std::collections::HashMap;
use std::fmt;

use serde::Serialize;

use crate::algebra::{quiver, radical, span_rank, Algebra, Named, Quiver};
use crate::error::{Error, Result};
use crate::field::PrimeField;
use crate::monoid::{enumerate_elements, MonoidKind};
use crate::report::Report;
use crate::skeleton::{analyze_quiver, AlgebraKind, CategoryAlgebra};
use crate::sparse::SparseVec;
use crate::transform::{p1_subsets, Sign, Subset};

/// Morphisms of `D_n`. `R(Y, X)` and `D(Y, X)` go from `X` to `Y`; `Z(Y, X)` is the zero
/// morphism.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum DMorphism {
    R(Subset, Subset),
    D(Subset, Subset),
    Z(Subset, Subset),
}

impl DMorphism {
    pub fn dom(self) -> Subset {
        match self {
            DMorphism::R(_, x) | DMorphism::D(_, x) | DMorphism::Z(_, x) => x,
        }
    }
    pub fn cod(self) -> Subset {
        match self {
            DMorphism::R(y, _) | DMorphism::D(y, _) | DMorphism::Z(y, _) => y,
        }
    }
    pub fn is_zero(self) -> bool {
        matches!(self, DMorphism::Z(..))
    }
}

impl fmt::Display for DMorphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (name, y, x) = match *self {
            DMorphism::R(y, x) => ("r", y, x),
            DMorphism::D(y, x) => ("d", y, x),
            DMorphism::Z(y, x) => ("z", y, x),
        };
        write!(f, "{name}[Y={y},X={x}]")
    }
}

/// `D_n` on a chosen set of objects.
#[derive(Debug, Clone)]
pub struct DCategory {
    pub objects: Vec<Subset>,
    /// Nonzero morphisms, `r` before `d`.
    pub morphisms: Vec<DMorphism>,
}

impl DCategory {
    pub fn full(n: usize) -> Self {
        Self::on_objects(p1_subsets(n))
    }

    /// One object `[k]` per size.
    pub fn skeleton(n: usize) -> Self {
        Self::on_objects((1..=n).map(Subset::initial).collect())
    }

    fn on_objects(objects: Vec<Subset>) -> Self {
        let mut morphisms = Vec::new();
        for &x in &objects {
            for &y in &objects {
                if y.len() == x.len() {
                    morphisms.push(DMorphism::R(y, x));
                }
            }
        }
        for &x in &objects {
            for &y in &objects {
                if y.len() == x.len() + 1 {
                    morphisms.push(DMorphism::D(y, x));
                }
            }
        }
        DCategory { objects, morphisms }
    }

    /// `m2 ∘ m1` when `cod(m1) = dom(m2)`.
    pub fn compose(m2: DMorphism, m1: DMorphism) -> Option<DMorphism> {
        use DMorphism::*;
        if m1.cod() != m2.dom() {
            return None;
        }
        let (z, x) = (m2.cod(), m1.dom());
        Some(match (m2, m1) {
            (R(..), R(..)) => R(z, x),
            (R(..), D(..)) | (D(..), R(..)) => D(z, x),
            _ => Z(z, x),
        })
    }

    /// Every morphism including the zero morphisms.
    pub fn all_morphisms(&self) -> Vec<DMorphism> {
        let mut all = self.morphisms.clone();
        for &x in &self.objects {
            for &y in &self.objects {
                all.push(DMorphism::Z(y, x));
            }
        }
        all
    }

    /// First composable triple on which composition is not associative.
    pub fn associativity_counterexample(&self) -> Option<(DMorphism, DMorphism, DMorphism)> {
        let all = self.all_morphisms();
        for &a in &all {
            for &b in all.iter().filter(|b| b.dom() == a.cod()) {
                let ba = Self::compose(b, a).expect("composable");
                for &c in all.iter().filter(|c| c.dom() == b.cod()) {
                    let lhs = Self::compose(c, ba);
                    let rhs = Self::compose(c, b).and_then(|cb| Self::compose(cb, a));
                    if lhs != rhs || lhs.is_none() {
                        return Some((c, b, a));
                    }
                }
            }
        }
        None
    }

    /// The contracted algebra `k_0 D_n`: zero morphisms are identified with 0.
    pub fn contracted_algebra(&self, field: PrimeField) -> Algebra {
        let index: HashMap<DMorphism, usize> = self.morphisms.iter().enumerate().map(|(i, &m)| (m, i)).collect();
        let mut products = HashMap::new();
        for (j, &a) in self.morphisms.iter().enumerate() {
            for (i, &b) in self.morphisms.iter().enumerate() {
                if let Some(p) = Self::compose(b, a).filter(|p| !p.is_zero()) {
                    products.insert((i as u32, j as u32), SparseVec::unit(index[&p]));
                }
            }
        }
        let mut unit = vec![0u32; self.morphisms.len()];
        for &x in &self.objects {
            unit[index[&DMorphism::R(x, x)]] = 1;
        }
        let labels = self.morphisms.iter().map(|m| m.to_string()).collect();
        Algebra::new(field, labels, products, unit)
    }
}

/// `k_0 D_n` on all objects of `P_1([n])`.
pub fn build_contracted_dn(n: usize, field: PrimeField) -> Result<(DCategory, Algebra)> {
    if n == 0 {
        return Err(Error::SizeOutOfRange { n, max: crate::transform::MAX_DEGREE, what: "D_n" });
    }
    let d = DCategory::full(n);
    let alg = d.contracted_algebra(field);
    Ok((d, alg))
}

/// Sign of `F` on morphisms with domain `X`: `+` when `|X| ≡ 0, 1 (mod 4)`.
pub fn f_sign(x: Subset) -> Sign {
    if x.len() % 4 < 2 {
        Sign::Plus
    } else {
        Sign::Minus
    }
}

/// Images of the `k_0 D_n` basis under `F` and `F'`, as basis indices of the full `CA_n`.
#[derive(Debug, Clone)]
pub struct FMaps {
    pub f: Vec<usize>,
    pub f_prime: Vec<usize>,
}

pub fn f_maps(d: &DCategory, ca: &CategoryAlgebra) -> Result<FMaps> {
    if ca.skeletal || ca.kind != AlgebraKind::CA {
        return Err(Error::Structure("F needs the full CA_n".into()));
    }
    let image = |m: DMorphism, s: Sign| -> Result<usize> {
        let found = match m {
            DMorphism::R(y, x) => ca.eps(y, x, s),
            DMorphism::D(y, x) => ca.delta(y, x, s),
            DMorphism::Z(..) => None,
        };
        found.ok_or_else(|| Error::Structure(format!("no basis element of CA_{} for F({m})", ca.n)))
    };
    let f = d.morphisms.iter().map(|&m| image(m, f_sign(m.dom()))).collect::<Result<_>>()?;
    let f_prime = d.morphisms.iter().map(|&m| image(m, -f_sign(m.dom()))).collect::<Result<_>>()?;
    Ok(FMaps { f, f_prime })
}

fn pushforward(v: Option<&SparseVec>, map: &[usize], dim: usize) -> Vec<u32> {
    let mut out = vec![0u32; dim];
    if let Some(v) = v {
        for &(i, c) in &v.0 {
            out[map[i as usize]] = c;
        }
    }
    out
}

fn push_dense(v: &[u32], map: &[usize], dim: usize) -> Vec<u32> {
    let mut out = vec![0u32; dim];
    for (i, &c) in v.iter().enumerate() {
        out[map[i]] = c;
    }
    out
}

#[derive(Debug, Clone, Serialize)]
pub struct Decomposition {
    pub n: usize,
    pub op_size: usize,
    pub dn_dim: usize,
    pub ca_dim: usize,
    pub g_rank: usize,
    pub report: Report,
}

/// Checks that `F`, `F'` are multiplicative, annihilate each other, and that
/// `G(m, m') = F(m) + F'(m')` is an isomorphism `k_0 D_n × k_0 D_n -> CA_n`.
pub fn verify_product_decomposition(n: usize, field: PrimeField) -> Result<Decomposition> {
    let op_size = enumerate_elements(MonoidKind::Op, n)?.len();
    let (d, dn) = build_contracted_dn(n, field)?;
    let ca = CategoryAlgebra::full(AlgebraKind::CA, n, field)?;
    let alg = &ca.algebra;
    let cd = alg.dim();
    let mut report = Report::new(format!("k_0 D_{n} x k_0 D_{n} -> CA_{n} over {field}"));
    report.absorb(dn.verify_axioms(&format!("k_0 D_{n}")));
    report.absorb(alg.verify_axioms(&format!("CA_{n}")));
    let assoc = d.associativity_counterexample();
    report.check("D_n composition associative", assoc.is_none(), assoc.map(|(c, b, a)| format!("{c} {b} {a}")));
    report.check("dim k_0 D_n = |Op_n| (k_0 D_n ≅ kOp_n is taken as known)", dn.dim() == op_size, Some(format!("{} vs {op_size}", dn.dim())));
    report.check("dim CA_n = 2|Op_n|", cd == 2 * op_size, Some(format!("{cd} vs {}", 2 * op_size)));

    let maps = f_maps(&d, &ca)?;
    let dd = dn.dim();
    let image = |map: &[usize], i: usize| alg.basis_vector(map[i]);
    for (name, map) in [("F", &maps.f), ("F'", &maps.f_prime)] {
        let mut bad = None;
        'pairs: for i in 0..dd {
            for j in 0..dd {
                let lhs = alg.mul(&image(map, i), &image(map, j));
                if lhs != pushforward(dn.mul_basis(i, j), map, cd) {
                    bad = Some(format!("{} * {}", dn.labels()[i], dn.labels()[j]));
                    break 'pairs;
                }
            }
        }
        report.check(format!("{name} multiplicative on all basis pairs"), bad.is_none(), bad);
    }
    let mut bad = None;
    'ann: for i in 0..dd {
        for j in 0..dd {
            let (a, b) = (image(&maps.f, i), image(&maps.f_prime, j));
            if alg.mul(&a, &b).iter().any(|&v| v != 0) || alg.mul(&b, &a).iter().any(|&v| v != 0) {
                bad = Some(format!("F({}) and F'({})", dn.labels()[i], dn.labels()[j]));
                break 'ann;
            }
        }
    }
    report.check("F(m) F'(m') = F'(m') F(m) = 0", bad.is_none(), bad);
    let unit_image: Vec<u32> = {
        let (a, b) = (push_dense(dn.unit(), &maps.f, cd), push_dense(dn.unit(), &maps.f_prime, cd));
        a.iter().zip(&b).map(|(&x, &y)| field.add(x, y)).collect()
    };
    report.check("G(1, 1) is the unit of CA_n", unit_image == alg.unit(), None);
    let f_cols: Vec<Vec<u32>> = (0..dd).map(|i| image(&maps.f, i)).collect();
    let fp_cols: Vec<Vec<u32>> = (0..dd).map(|i| image(&maps.f_prime, i)).collect();
    let rank_f = span_rank(field, cd, &f_cols);
    let rank_fp = span_rank(field, cd, &fp_cols);
    let g_rank = span_rank(field, cd, &[f_cols, fp_cols].concat());
    report.check("rank G = 2|Op_n| (G bijective)", g_rank == 2 * op_size && g_rank == cd, Some(format!("rank {g_rank}")));
    report.check("rank F + rank F' = rank G", rank_f + rank_fp == g_rank, Some(format!("{rank_f} + {rank_fp}")));
    Ok(Decomposition { n, op_size, dn_dim: dd, ca_dim: cd, g_rank, report })
}

#[derive(Debug, Clone, Serialize)]
pub struct StraightLineCheck {
    pub n: usize,
    pub op_quiver: Quiver,
    pub cod_quiver: Quiver,
    pub report: Report,
}

/// Quiver of the skeletal `k_0 D_n` (a single path with `n` vertices) and of the `CA_n`
/// skeleton (two such paths).
pub fn opn_quiver_check(n: usize, field: PrimeField) -> Result<StraightLineCheck> {
    let mut report = Report::new(format!("straight line quivers for n = {n} over {field}"));
    let d = DCategory::skeleton(n);
    let alg = d.contracted_algebra(field);
    report.absorb(alg.verify_axioms(&format!("skeletal k_0 D_{n}")));
    report.check("dim skeletal k_0 D_n = 2n - 1", alg.dim() == 2 * n - 1, Some(alg.dim().to_string()));
    let idem: Vec<Named> = d
        .objects
        .iter()
        .map(|&x| {
            let i = d.morphisms.iter().position(|&m| m == DMorphism::R(x, x)).expect("identity");
            Named { label: format!("v_{}", x.len()), coords: alg.basis_vector(i) }
        })
        .collect();
    let cand: Vec<Vec<u32>> = d
        .morphisms
        .iter()
        .enumerate()
        .filter(|(_, m)| matches!(m, DMorphism::D(..)))
        .map(|(i, _)| alg.basis_vector(i))
        .collect();
    report.absorb(crate::algebra::verify_primitive_orthogonal(&alg, &idem));
    let (rad, rr) = radical(&alg, Some(&cand), &idem)?;
    report.absorb(rr);
    let op_quiver = quiver(&alg, &idem, &rad);
    let comps = op_quiver.components();
    let single = comps.len() == 1 && op_quiver.straight_path(&comps[0]).is_some_and(|p| p.len() == n);
    report.check("Op side: one straight path with n vertices", single, Some(format!("{} components", comps.len())));
    report.check("Op side: length-2 compositions zero", op_quiver.rad_square_zero, None);

    let ca = CategoryAlgebra::skeleton(AlgebraKind::CA, n, field)?;
    let analysis = analyze_quiver(&ca)?;
    report.absorb(analysis.report);
    let comps = analysis.quiver.components();
    let two = comps.len() == 2
        && comps.iter().all(|c| analysis.quiver.straight_path(c).is_some_and(|p| p.len() == n));
    report.check("COD side: two straight paths with n vertices", two, Some(format!("{} components", comps.len())));
    report.check("COD side: length-2 compositions zero", analysis.quiver.rad_square_zero, None);
    Ok(StraightLineCheck { n, op_quiver, cod_quiver: analysis.quiver, report })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f() -> PrimeField {
        PrimeField::new(10007).unwrap()
    }

    fn s(v: &[usize]) -> Subset {
        Subset::from_increasing(v).unwrap()
    }

    #[test]
    fn contracted_dimensions() {
        for (n, dim) in [(1, 1), (3, 10), (4, 35)] {
            let (d, a) = build_contracted_dn(n, f()).unwrap();
            assert_eq!(a.dim(), dim);
            assert!(a.verify_axioms("D").passed());
            assert!(d.associativity_counterexample().is_none());
        }
    }

    #[test]
    fn f_cases() {
        let ca = CategoryAlgebra::full(AlgebraKind::CA, 3, f()).unwrap();
        let d = DCategory::full(3);
        let maps = f_maps(&d, &ca).unwrap();
        let r = d.morphisms.iter().position(|&m| m == DMorphism::R(s(&[1, 2]), s(&[1, 2]))).unwrap();
        assert_eq!(maps.f[r], ca.eps(s(&[1, 2]), s(&[1, 2]), Sign::Minus).unwrap());
        assert_eq!(maps.f_prime[r], ca.eps(s(&[1, 2]), s(&[1, 2]), Sign::Plus).unwrap());
        let dm = d.morphisms.iter().position(|&m| m == DMorphism::D(s(&[1, 2]), s(&[1]))).unwrap();
        assert_eq!(maps.f[dm], ca.delta(s(&[1, 2]), s(&[1]), Sign::Plus).unwrap());
        assert_eq!(maps.f_prime[dm], ca.delta(s(&[1, 2]), s(&[1]), Sign::Minus).unwrap());
    }

    #[test]
    fn decomposition_n3() {
        let d = verify_product_decomposition(3, f()).unwrap();
        assert!(d.report.passed(), "{}", d.report);
        assert_eq!((d.dn_dim, d.ca_dim, d.g_rank), (10, 20, 20));
    }

    #[test]
    fn straight_lines() {
        for n in 1..=4 {
            let c = opn_quiver_check(n, f()).unwrap();
            assert!(c.report.passed(), "n={n}: {}", c.report);
            assert_eq!(c.op_quiver.arrow_count(), n - 1);
            assert_eq!(c.cod_quiver.vertices.len(), 2 * n);
        }
    }
}
