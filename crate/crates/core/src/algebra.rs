//! Finite-dimensional algebras given by structure constants, linear categories of
//! module maps, radicals, and quivers.

use std::collections::HashMap;
use std::fmt::Write as _;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::{FMatrix, PrimeField};
use crate::report::Report;
use crate::sparse::SparseVec;

/// An associative unital algebra with basis `e_0, ..., e_{d-1}` and products
/// `e_i e_j` stored sparsely.
#[derive(Debug, Clone)]
pub struct Algebra {
    field: PrimeField,
    labels: Vec<String>,
    products: HashMap<(u32, u32), SparseVec>,
    unit: Vec<u32>,
}

impl Algebra {
    pub fn new(field: PrimeField, labels: Vec<String>, products: HashMap<(u32, u32), SparseVec>, unit: Vec<u32>) -> Self {
        assert_eq!(unit.len(), labels.len());
        let products = products.into_iter().filter(|(_, v)| !v.is_empty()).collect();
        Algebra { field, labels, products, unit }
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }
    pub fn dim(&self) -> usize {
        self.labels.len()
    }
    pub fn labels(&self) -> &[String] {
        &self.labels
    }
    pub fn unit(&self) -> &[u32] {
        &self.unit
    }
    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn basis_vector(&self, i: usize) -> Vec<u32> {
        let mut v = vec![0; self.dim()];
        v[i] = 1;
        v
    }

    pub fn mul_basis(&self, i: usize, j: usize) -> Option<&SparseVec> {
        self.products.get(&(i as u32, j as u32))
    }

    /// Number of basis pairs with a nonzero product.
    pub fn nonzero_products(&self) -> usize {
        self.products.len()
    }

    pub fn mul(&self, x: &[u32], y: &[u32]) -> Vec<u32> {
        let f = self.field;
        let mut out = vec![0u32; self.dim()];
        let xs: Vec<(usize, u32)> = x.iter().copied().enumerate().filter(|e| e.1 != 0).collect();
        let ys: Vec<(usize, u32)> = y.iter().copied().enumerate().filter(|e| e.1 != 0).collect();
        for &(i, a) in &xs {
            for &(j, b) in &ys {
                if let Some(p) = self.mul_basis(i, j) {
                    let ab = f.mul(a, b);
                    for &(k, c) in &p.0 {
                        out[k as usize] = f.add(out[k as usize], f.mul(ab, c));
                    }
                }
            }
        }
        out
    }

    /// Matrix of `y ↦ x y` in the basis.
    pub fn left_mult_matrix(&self, x: &[u32]) -> FMatrix {
        let d = self.dim();
        let mut m = FMatrix::zeros(self.field, d, d);
        for j in 0..d {
            for (i, v) in self.mul(x, &self.basis_vector(j)).into_iter().enumerate() {
                m.set(i, j, v);
            }
        }
        m
    }

    fn product_or_zero(&self, i: usize, j: usize) -> Vec<u32> {
        self.mul_basis(i, j).map_or_else(|| vec![0; self.dim()], |p| p.to_dense(self.dim()))
    }

    /// First basis triple with `(e_i e_j) e_k ≠ e_i (e_j e_k)`. Only triples where one
    /// side can be nonzero are evaluated.
    pub fn associativity_counterexample(&self) -> Option<(usize, usize, usize)> {
        let d = self.dim();
        let mut right: Vec<Vec<usize>> = vec![Vec::new(); d];
        let mut left: Vec<Vec<usize>> = vec![Vec::new(); d];
        let mut pairs: Vec<(usize, usize)> = self.products.keys().map(|&(i, j)| (i as usize, j as usize)).collect();
        pairs.sort_unstable();
        for &(i, j) in &pairs {
            right[i].push(j);
            left[j].push(i);
        }
        let mut triples: Vec<(usize, usize, usize)> = Vec::new();
        for &(i, j) in &pairs {
            let p = &self.products[&(i as u32, j as u32)];
            let support = p.0.iter().map(|e| e.0 as usize);
            let ks = right[j].iter().chain(support.clone().flat_map(|m| right[m].iter()));
            triples.extend(ks.map(|&k| (i, j, k)));
            let hs = left[i].iter().chain(support.flat_map(|m| left[m].iter()));
            triples.extend(hs.map(|&h| (h, i, j)));
        }
        triples.sort_unstable();
        triples.dedup();
        triples.into_iter().find(|&(i, j, k)| {
            let lhs = self.mul(&self.product_or_zero(i, j), &self.basis_vector(k));
            let rhs = self.mul(&self.basis_vector(i), &self.product_or_zero(j, k));
            lhs != rhs
        })
    }

    pub fn unit_counterexample(&self) -> Option<usize> {
        (0..self.dim()).find(|&i| {
            let e = self.basis_vector(i);
            self.mul(&self.unit, &e) != e || self.mul(&e, &self.unit) != e
        })
    }

    pub fn verify_axioms(&self, title: &str) -> Report {
        let mut r = Report::new(format!("{title}: algebra axioms (dim {})", self.dim()));
        let assoc = self.associativity_counterexample();
        r.check(
            "associative on basis triples",
            assoc.is_none(),
            assoc.map(|(i, j, k)| format!("({})({})({})", self.labels[i], self.labels[j], self.labels[k])),
        );
        let unit = self.unit_counterexample();
        r.check("unit law", unit.is_none(), unit.map(|i| self.labels[i].clone()));
        r
    }

    /// `{x : tr(L_{x b}) = 0 for every basis b}`, the Jacobson radical when `p > dim`.
    pub fn trace_form_radical(&self) -> Result<Vec<Vec<u32>>> {
        let (p, d) = (self.field.modulus(), self.dim());
        if (p as usize) <= d {
            return Err(Error::TraceFormUnsound { p, dim: d });
        }
        let f = self.field;
        // tr(L_{e_m}) = sum over c of the e_c coordinate of e_m e_c.
        let mut traces = vec![0u32; d];
        for (&(m, c), v) in &self.products {
            if let Some(&(_, x)) = v.0.iter().find(|e| e.0 == c) {
                traces[m as usize] = f.add(traces[m as usize], x);
            }
        }
        let mut gram = FMatrix::zeros(f, d, d);
        for (&(a, b), v) in &self.products {
            let t = v.0.iter().fold(0, |acc, &(m, x)| f.add(acc, f.mul(x, traces[m as usize])));
            gram.set(a as usize, b as usize, t);
        }
        Ok(gram.transpose().nullspace())
    }

    /// The span of `{x y : x ∈ xs, y ∈ ys}` as a reduced basis.
    pub fn product_span(&self, xs: &[Vec<u32>], ys: &[Vec<u32>]) -> Vec<Vec<u32>> {
        let prods: Vec<Vec<u32>> = xs.iter().flat_map(|x| ys.iter().map(move |y| self.mul(x, y))).collect();
        span_basis(self.field, self.dim(), &prods)
    }
}

/// Reduced basis of the span of `vectors`, each of length `len`.
pub fn span_basis(field: PrimeField, len: usize, vectors: &[Vec<u32>]) -> Vec<Vec<u32>> {
    if vectors.is_empty() {
        return Vec::new();
    }
    let data: Vec<u32> = vectors.iter().flat_map(|v| v.iter().copied()).collect();
    let m = FMatrix::from_residues(field, vectors.len(), len, data);
    let red = m.reduce();
    (0..red.rank).map(|r| red.rref.row(r).to_vec()).collect()
}

pub fn span_rank(field: PrimeField, len: usize, vectors: &[Vec<u32>]) -> usize {
    span_basis(field, len, vectors).len()
}

fn in_span(field: PrimeField, basis: &[Vec<u32>], v: &[u32]) -> bool {
    let refs: Vec<&[u32]> = basis.iter().map(Vec::as_slice).collect();
    v.iter().all(|&x| x == 0) || FMatrix::solve_in_span(field, &refs, v).is_some()
}

/// A named element of an algebra.
#[derive(Debug, Clone)]
pub struct Named {
    pub label: String,
    pub coords: Vec<u32>,
}

/// Checks `e² = e`, `e_i e_j = 0` for `i ≠ j`, `Σ e = 1`, and `dim eAe = 1`.
pub fn verify_primitive_orthogonal(alg: &Algebra, candidates: &[Named]) -> Report {
    let f = alg.field();
    let d = alg.dim();
    let mut r = Report::new(format!("{} primitive orthogonal idempotents", candidates.len()));
    let bad_idem = candidates.iter().find(|e| alg.mul(&e.coords, &e.coords) != e.coords);
    r.check("idempotent", bad_idem.is_none(), bad_idem.map(|e| format!("{}^2 != {}", e.label, e.label)));
    let mut orth = None;
    'outer: for a in candidates {
        for b in candidates {
            if a.label != b.label && alg.mul(&a.coords, &b.coords).iter().any(|&v| v != 0) {
                orth = Some(format!("{} * {} != 0", a.label, b.label));
                break 'outer;
            }
        }
    }
    r.check("orthogonal", orth.is_none(), orth);
    let mut sum = vec![0u32; d];
    for e in candidates {
        for (s, &v) in sum.iter_mut().zip(&e.coords) {
            *s = f.add(*s, v);
        }
    }
    r.check("sum is the unit", sum == alg.unit(), None);
    let bad_prim = candidates.iter().find_map(|e| {
        let corner: Vec<Vec<u32>> =
            (0..d).map(|b| alg.mul(&alg.mul(&e.coords, &alg.basis_vector(b)), &e.coords)).collect();
        let k = span_rank(f, d, &corner);
        (k != 1).then(|| format!("dim {} A {} = {k}", e.label, e.label))
    });
    r.check("primitive (dim eAe = 1)", bad_prim.is_none(), bad_prim);
    r
}

#[derive(Debug, Clone, Serialize)]
pub struct RadicalData {
    /// Reduced basis of the radical.
    #[serde(skip)]
    pub basis: Vec<Vec<u32>>,
    pub dim: usize,
    pub nilpotency_index: usize,
    pub rad_square_zero: bool,
    /// Whether the trace-form path ran (it needs `p > dim A`).
    pub trace_form_checked: bool,
}

/// Verifies a candidate radical and cross-checks it against the trace-form radical.
///
/// The candidate must be a two-sided nilpotent ideal and, together with the supplied
/// orthogonal idempotents, span the algebra; then `A/R ≅ k^m` is semisimple and `R`
/// is the radical. When `p > dim A` the trace-form radical is computed and must agree.
pub fn radical(alg: &Algebra, candidate: Option<&[Vec<u32>]>, idempotents: &[Named]) -> Result<(RadicalData, Report)> {
    let f = alg.field();
    let d = alg.dim();
    let mut report = Report::new(format!("radical (dim A = {d})"));
    let trace = match alg.trace_form_radical() {
        Ok(t) => Some(span_basis(f, d, &t)),
        Err(e) if candidate.is_none() => return Err(e),
        Err(_) => None,
    };
    let basis = match candidate {
        Some(c) => {
            let basis = span_basis(f, d, c);
            let all: Vec<Vec<u32>> = (0..d).map(|i| alg.basis_vector(i)).collect();
            let left = alg.product_span(&all, &basis);
            let right = alg.product_span(&basis, &all);
            let ideal = left.iter().chain(&right).all(|v| in_span(f, &basis, v));
            report.check("candidate is a two-sided ideal", ideal, None);
            let mut combined = basis.clone();
            combined.extend(idempotents.iter().map(|e| e.coords.clone()));
            let rank = span_rank(f, d, &combined);
            let ok = rank == d && basis.len() + idempotents.len() == d;
            report.check(
                "quotient spanned by orthogonal idempotents",
                ok,
                (!ok).then(|| format!("rank {rank}, dim R {} + {} idempotents vs dim {d}", basis.len(), idempotents.len())),
            );
            if let Some(t) = &trace {
                let agree = t.len() == basis.len() && span_rank(f, d, &[t.clone(), basis.clone()].concat()) == basis.len();
                report.check(
                    "candidate equals trace-form radical",
                    agree,
                    (!agree).then(|| format!("trace-form dim {} vs candidate {}", t.len(), basis.len())),
                );
            }
            basis
        }
        None => trace.clone().expect("trace radical"),
    };
    let mut power = basis.clone();
    let mut index = 1;
    while !power.is_empty() && index <= d {
        power = alg.product_span(&power, &basis);
        index += 1;
    }
    report.check("nilpotent", power.is_empty(), Some(format!("index {index}")));
    let square = alg.product_span(&basis, &basis);
    let data = RadicalData {
        dim: basis.len(),
        nilpotency_index: index,
        rad_square_zero: square.is_empty(),
        trace_form_checked: trace.is_some(),
        basis,
    };
    Ok((data, report))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Arrow {
    pub src: String,
    pub dst: String,
    pub mult: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Quiver {
    pub vertices: Vec<String>,
    pub arrows: Vec<Arrow>,
    pub rad_square_zero: bool,
}

/// Arrows `e_i -> e_j` counted by `dim e_j R e_i - dim e_j R² e_i`.
pub fn quiver(alg: &Algebra, idempotents: &[Named], rad: &RadicalData) -> Quiver {
    let f = alg.field();
    let d = alg.dim();
    let square = alg.product_span(&rad.basis, &rad.basis);
    let mut arrows = Vec::new();
    for ei in idempotents {
        for ej in idempotents {
            let sandwich = |vs: &[Vec<u32>]| -> usize {
                let v: Vec<Vec<u32>> = vs.iter().map(|r| alg.mul(&alg.mul(&ej.coords, r), &ei.coords)).collect();
                span_rank(f, d, &v)
            };
            let mult = sandwich(&rad.basis) - sandwich(&square);
            if mult > 0 {
                arrows.push(Arrow { src: ei.label.clone(), dst: ej.label.clone(), mult });
            }
        }
    }
    Quiver {
        vertices: idempotents.iter().map(|e| e.label.clone()).collect(),
        arrows,
        rad_square_zero: rad.rad_square_zero,
    }
}

impl Quiver {
    fn vertex(&self, label: &str) -> usize {
        self.vertices.iter().position(|v| v == label).expect("arrow endpoint is a vertex")
    }

    /// Connected components of the underlying undirected graph, each sorted by vertex
    /// order, listed by least vertex.
    pub fn components(&self) -> Vec<Vec<String>> {
        let n = self.vertices.len();
        let mut parent: Vec<usize> = (0..n).collect();
        fn root(p: &mut [usize], mut x: usize) -> usize {
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        for a in &self.arrows {
            let (s, t) = (self.vertex(&a.src), self.vertex(&a.dst));
            let (rs, rt) = (root(&mut parent, s), root(&mut parent, t));
            parent[rs.max(rt)] = rs.min(rt);
        }
        let mut groups: Vec<Vec<String>> = Vec::new();
        let mut index: HashMap<usize, usize> = HashMap::new();
        for v in 0..n {
            let r = root(&mut parent, v);
            let g = *index.entry(r).or_insert_with(|| {
                groups.push(Vec::new());
                groups.len() - 1
            });
            groups[g].push(self.vertices[v].clone());
        }
        groups
    }

    /// If the component is a straight line path with single arrows, its vertices in
    /// path order.
    pub fn straight_path(&self, component: &[String]) -> Option<Vec<String>> {
        let inside: Vec<&Arrow> = self.arrows.iter().filter(|a| component.contains(&a.src)).collect();
        if inside.iter().any(|a| a.mult != 1) || inside.len() + 1 != component.len() {
            return None;
        }
        let out_of = |v: &str| inside.iter().filter(|a| a.src == v).collect::<Vec<_>>();
        let starts: Vec<&String> = component.iter().filter(|v| !inside.iter().any(|a| &a.dst == *v)).collect();
        if starts.len() != 1 {
            return None;
        }
        let mut path = vec![starts[0].clone()];
        loop {
            let outs = out_of(path.last().unwrap());
            match outs.len() {
                0 => break,
                1 => path.push(outs[0].dst.clone()),
                _ => return None,
            }
            if path.len() > component.len() {
                return None;
            }
        }
        (path.len() == component.len()).then_some(path)
    }

    pub fn arrow_count(&self) -> usize {
        self.arrows.iter().map(|a| a.mult).sum()
    }

    pub fn to_dot(&self, name: &str) -> String {
        let mut out = format!("digraph {name} {{\n");
        for v in &self.vertices {
            let _ = writeln!(out, "  {v};");
        }
        for a in &self.arrows {
            for _ in 0..a.mult {
                let _ = writeln!(out, "  {} -> {};", a.src, a.dst);
            }
        }
        out.push_str("}\n");
        out
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("{} vertices, {} arrows\n", self.vertices.len(), self.arrow_count());
        for a in &self.arrows {
            let _ = writeln!(out, "  {} -> {}{}", a.src, a.dst, if a.mult > 1 { format!(" (x{})", a.mult) } else { String::new() });
        }
        let _ = writeln!(out, "all length-2 compositions zero: {}", self.rad_square_zero);
        let comps = self.components();
        let _ = writeln!(out, "components: {}", comps.len());
        for c in comps {
            let _ = writeln!(out, "  {}", c.join(" "));
        }
        out
    }
}

/// Sum of the vertex idempotents of one quiver component, checked to be central.
pub fn component_idempotent(alg: &Algebra, idempotents: &[Named], component: &[String]) -> (Vec<u32>, bool) {
    let f = alg.field();
    let mut e = vec![0u32; alg.dim()];
    for v in idempotents.iter().filter(|v| component.contains(&v.label)) {
        for (s, &x) in e.iter_mut().zip(&v.coords) {
            *s = f.add(*s, x);
        }
    }
    let central = (0..alg.dim()).all(|b| {
        let x = alg.basis_vector(b);
        alg.mul(&e, &x) == alg.mul(&x, &e)
    });
    (e, central)
}

/// A morphism of a linear category of modules, stored as the matrix of the module map.
///
/// Orientation follows the opposite category: a module map `kL_B -> kL_A` is a morphism
/// `A -> B` here, its matrix has `dim A` rows and `dim B` columns, and the product
/// `b · a` of `a: A -> B` and `b: B -> C` is the matrix product `M_a M_b`.
#[derive(Debug, Clone)]
pub struct Morphism {
    pub label: String,
    pub dom: usize,
    pub cod: usize,
    pub matrix: FMatrix,
}

/// A finite linear category whose morphism spaces are spanned by the given matrices.
#[derive(Debug, Clone)]
pub struct MatrixCategory {
    pub field: PrimeField,
    pub objects: Vec<(String, usize)>,
    pub morphisms: Vec<Morphism>,
}

/// Product `b · a` in the opposite orientation: `a` first, then `b`.
pub fn op_compose(b: &FMatrix, a: &FMatrix) -> FMatrix {
    a.mul(b)
}

impl MatrixCategory {
    pub fn new(field: PrimeField, objects: Vec<(String, usize)>) -> Self {
        MatrixCategory { field, objects, morphisms: Vec::new() }
    }

    /// Adds a morphism unless it is zero or dependent on those already in its hom
    /// space; returns whether it was kept.
    pub fn push(&mut self, label: impl Into<String>, dom: usize, cod: usize, matrix: FMatrix) -> bool {
        assert_eq!((matrix.rows(), matrix.cols()), (self.objects[dom].1, self.objects[cod].1), "morphism shape");
        if matrix.is_zero() {
            return false;
        }
        let group: Vec<&[u32]> =
            self.morphisms.iter().filter(|m| m.dom == dom && m.cod == cod).map(|m| m.matrix.entries()).collect();
        if !group.is_empty() && FMatrix::solve_in_span(self.field, &group, matrix.entries()).is_some() {
            return false;
        }
        self.morphisms.push(Morphism { label: label.into(), dom, cod, matrix });
        true
    }

    /// Structure constants of the category algebra, with unit the sum of identities.
    pub fn to_algebra(&self) -> Result<Algebra> {
        let f = self.field;
        let mut groups: HashMap<(usize, usize), Vec<usize>> = HashMap::new();
        for (i, m) in self.morphisms.iter().enumerate() {
            groups.entry((m.dom, m.cod)).or_default().push(i);
        }
        let coords = |dom: usize, cod: usize, mat: &FMatrix| -> Result<SparseVec> {
            if mat.is_zero() {
                return Ok(SparseVec::default());
            }
            let ids = groups.get(&(dom, cod)).map(Vec::as_slice).unwrap_or(&[]);
            let flat: Vec<&[u32]> = ids.iter().map(|&i| self.morphisms[i].matrix.entries()).collect();
            let c = FMatrix::solve_in_span(f, &flat, mat.entries()).ok_or_else(|| {
                Error::Structure(format!(
                    "product {} -> {} outside the span of the given morphisms",
                    self.objects[dom].0, self.objects[cod].0
                ))
            })?;
            Ok(SparseVec::from_entries(f, ids.iter().zip(c).map(|(&i, v)| (i as u32, v)).collect()))
        };
        let mut products = HashMap::new();
        for (j, a) in self.morphisms.iter().enumerate() {
            for (i, b) in self.morphisms.iter().enumerate() {
                if a.cod != b.dom {
                    continue;
                }
                let p = op_compose(&b.matrix, &a.matrix);
                let v = coords(a.dom, b.cod, &p)?;
                if !v.is_empty() {
                    products.insert((i as u32, j as u32), v);
                }
            }
        }
        let mut unit = vec![0u32; self.morphisms.len()];
        for (o, (_, dim)) in self.objects.iter().enumerate() {
            for (i, v) in coords(o, o, &FMatrix::identity(f, *dim))?.0 {
                unit[i as usize] = f.add(unit[i as usize], v);
            }
        }
        let labels = self.morphisms.iter().map(|m| m.label.clone()).collect();
        Ok(Algebra::new(f, labels, products, unit))
    }
}
