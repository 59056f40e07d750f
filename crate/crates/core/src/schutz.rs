//! Schützenberger modules `kL_X`, Hom spaces between them, and the homomorphisms
//! `ρ^α_{Y,X}` and `δ^α_{Y,X}`.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::{FMatrix, PrimeField};
use crate::green::GreenData;
use crate::monoid::{MonoidKind, MonoidTable};
use crate::report::Report;
use crate::sparse::{column_kernel, SparseVec};
use crate::transform::{p1_subsets, Sign, Subset};

const NONE: u32 = u32::MAX;

/// The left Schützenberger module of the L-class of `e_X`, with the truncated action
/// `s • x = sx` if `sx ∈ L_X` and `0` otherwise.
#[derive(Debug, Clone)]
pub struct SchutzModule {
    kernel: Subset,
    basis: Vec<usize>,
    /// Basis position of each monoid element, `NONE` outside `L_X`.
    position: Vec<u32>,
    /// `action[s * dim + j]` is the position of `s • basis[j]`, or `NONE` for zero.
    action: Vec<u32>,
}

impl SchutzModule {
    pub fn new(table: &MonoidTable, green: &GreenData, kernel: Subset) -> Result<Self> {
        if !kernel.contains(1) || !kernel.is_within(table.degree()) {
            return Err(Error::InvalidSubset(format!("{kernel} is not in P_1([{}])", table.degree())));
        }
        let e = table
            .idempotent_of(kernel)
            .ok_or_else(|| Error::Structure(format!("no idempotent with kernel set {kernel}")))?;
        let basis = green.l_members(e);
        let m = table.len();
        let mut position = vec![NONE; m];
        for (j, &b) in basis.iter().enumerate() {
            position[b] = j as u32;
        }
        let dim = basis.len();
        let mut action = vec![NONE; m * dim];
        for s in 0..m {
            for (j, &b) in basis.iter().enumerate() {
                action[s * dim + j] = position[table.mul(s, b)];
            }
        }
        Ok(SchutzModule { kernel, basis, position, action })
    }

    pub fn kernel(&self) -> Subset {
        self.kernel
    }
    pub fn dim(&self) -> usize {
        self.basis.len()
    }
    /// Monoid elements forming the basis, in table order.
    pub fn basis(&self) -> &[usize] {
        &self.basis
    }
    /// Basis position of a monoid element, if it lies in `L_X`.
    pub fn position(&self, element: usize) -> Option<usize> {
        let p = self.position[element];
        (p != NONE).then_some(p as usize)
    }

    /// Position of `s • basis[j]`, or `None` when the product leaves `L_X`.
    #[inline]
    pub fn act(&self, s: usize, j: usize) -> Option<usize> {
        let p = self.action[s * self.dim() + j];
        (p != NONE).then_some(p as usize)
    }

    pub fn action_matrix(&self, s: usize, field: PrimeField) -> FMatrix {
        let d = self.dim();
        let mut m = FMatrix::zeros(field, d, d);
        for j in 0..d {
            if let Some(i) = self.act(s, j) {
                m.set(i, j, 1);
            }
        }
        m
    }

    /// First pair `(s, t)` with `s • (t • x) ≠ (st) • x` for some basis `x`.
    pub fn module_axiom_counterexample(&self, table: &MonoidTable) -> Option<(usize, usize)> {
        let m = table.len();
        for s in 0..m {
            for t in 0..m {
                let st = table.mul(s, t);
                for j in 0..self.dim() {
                    let lhs = self.act(t, j).and_then(|x| self.act(s, x));
                    if lhs != self.act(st, j) {
                        return Some((s, t));
                    }
                }
            }
        }
        None
    }
}

/// `H̃_{Y,X}`: elements with kernel set `X` whose image together with 1 is `Y`.
pub fn h_tilde(table: &MonoidTable, y: Subset, x: Subset) -> Vec<usize> {
    (0..table.len())
        .filter(|&a| {
            let l = table.label(a);
            l.kernel == x && l.image.with(1) == y
        })
        .collect()
}

/// Whether `t` (a `|L_X| x |L_Y|` matrix) commutes with the action of every element.
/// Returns the first failing element.
pub fn intertwining_counterexample(
    table: &MonoidTable,
    t: &FMatrix,
    target: &SchutzModule,
    source: &SchutzModule,
) -> Option<usize> {
    let field = t.field();
    let (rows, cols) = (target.dim(), source.dim());
    assert_eq!((t.rows(), t.cols()), (rows, cols), "intertwiner shape");
    let columns: Vec<Vec<(usize, u32)>> =
        (0..cols).map(|j| (0..rows).filter_map(|i| Some((i, t.get(i, j))).filter(|e| e.1 != 0)).collect()).collect();
    let mut rhs = vec![0u32; rows];
    for s in 0..table.len() {
        for (j, col) in columns.iter().enumerate() {
            for &(i, v) in col {
                if let Some(si) = target.act(s, i) {
                    rhs[si] = field.add(rhs[si], v);
                }
            }
            let lhs: &[(usize, u32)] = source.act(s, j).map_or(&[], |sj| &columns[sj]);
            let mut ok = true;
            for &(i, v) in lhs {
                ok &= rhs[i] == v;
                rhs[i] = 0;
            }
            for v in rhs.iter_mut() {
                ok &= *v == 0;
                *v = 0;
            }
            if !ok {
                return Some(s);
            }
        }
    }
    None
}

/// A basis of `Hom(kL_Y, kL_X)` as `|L_X| x |L_Y|` matrices.
#[derive(Debug, Clone)]
pub struct HomBasis {
    pub source: Subset,
    pub target: Subset,
    pub basis: Vec<FMatrix>,
}

impl HomBasis {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Whether `m` lies in the span of the basis.
    pub fn contains(&self, m: &FMatrix) -> bool {
        let flat: Vec<&[u32]> = self.basis.iter().map(|b| b.entries()).collect();
        FMatrix::solve_in_span(m.field(), &flat, m.entries()).is_some()
    }
}

/// Solves `T · A_Y(s) = A_X(s) · T` for every monoid element `s`.
///
/// Unknowns are the entries of `T`. The solution space is cut down one element at a
/// time with sparse elimination, which keeps the systems small.
pub fn hom_space(table: &MonoidTable, target: &SchutzModule, source: &SchutzModule, field: PrimeField) -> HomBasis {
    let (rows, cols) = (target.dim(), source.dim());
    let mut candidates: Vec<SparseVec> = (0..rows * cols).map(SparseVec::unit).collect();
    let mut preimages: Vec<Vec<u32>> = vec![Vec::new(); cols];
    let minus_one = field.neg(1);
    for s in 0..table.len() {
        if s == table.identity() || candidates.is_empty() {
            continue;
        }
        preimages.iter_mut().for_each(Vec::clear);
        for j in 0..cols {
            if let Some(l) = source.act(s, j) {
                preimages[l].push(j as u32);
            }
        }
        let residuals: Vec<SparseVec> = candidates
            .iter()
            .map(|cand| {
                let mut entries = Vec::new();
                for &(idx, v) in &cand.0 {
                    let (a, l) = (idx as usize / cols, idx as usize % cols);
                    for &j in &preimages[l] {
                        entries.push(((a * cols) as u32 + j, v));
                    }
                    if let Some(pa) = target.act(s, a) {
                        entries.push(((pa * cols + l) as u32, field.mul(v, minus_one)));
                    }
                }
                SparseVec::from_entries(field, entries)
            })
            .collect();
        if residuals.iter().all(SparseVec::is_empty) {
            continue;
        }
        let kernel = column_kernel(field, &residuals);
        candidates = kernel
            .iter()
            .map(|combo| {
                combo
                    .0
                    .iter()
                    .fold(SparseVec::default(), |acc, &(v, c)| acc.axpy(field, c, &candidates[v as usize]))
            })
            .collect();
    }
    let basis = candidates
        .iter()
        .map(|c| FMatrix::from_residues(field, rows, cols, c.to_dense(rows * cols)))
        .collect();
    HomBasis { source: source.kernel(), target: target.kernel(), basis }
}

/// Same space as [`hom_space`], using that `kL_Y` is generated by `e_Y`: a map is fixed by
/// `v = T(e_Y)`, and such `v` exists iff `e_Y • v = v` and `c • v = 0` for every
/// `c = c e_Y` outside `L_Y`. Unknowns drop from `|L_X| |L_Y|` to `|L_X|`.
pub fn hom_space_cyclic(
    table: &MonoidTable,
    target: &SchutzModule,
    source: &SchutzModule,
    field: PrimeField,
) -> Result<HomBasis> {
    let e = table
        .idempotent_of(source.kernel())
        .ok_or_else(|| Error::Structure(format!("no idempotent with kernel set {}", source.kernel())))?;
    let d = target.dim();
    let mut equations: BTreeSet<Vec<(u32, u32)>> = BTreeSet::new();
    let mut push = |rows: Vec<Vec<(u32, u32)>>| {
        for r in rows {
            let v = SparseVec::from_entries(field, r);
            if !v.is_empty() {
                equations.insert(v.0);
            }
        }
    };
    let rows_of = |c: usize, minus_identity: bool| {
        let mut rows: Vec<Vec<(u32, u32)>> = vec![Vec::new(); d];
        for j in 0..d {
            if let Some(i) = target.act(c, j) {
                rows[i].push((j as u32, 1));
            }
            if minus_identity {
                rows[j].push((j as u32, field.neg(1)));
            }
        }
        rows
    };
    push(rows_of(e, true));
    for c in 0..table.len() {
        if table.mul(c, e) == c && source.position(c).is_none() {
            push(rows_of(c, false));
        }
    }
    let mut system = FMatrix::zeros(field, equations.len(), d);
    for (r, eq) in equations.iter().enumerate() {
        for &(j, v) in eq {
            system.set(r, j as usize, v);
        }
    }
    let generator = source.position(e).expect("e_Y lies in L_Y");
    let basis = system
        .nullspace()
        .into_iter()
        .map(|v| {
            let mut m = FMatrix::zeros(field, d, source.dim());
            for (col, &b) in source.basis().iter().enumerate() {
                debug_assert!(table.mul(b, e) == b);
                for (j, &c) in v.iter().enumerate() {
                    if c != 0 {
                        if let Some(i) = target.act(b, j) {
                            m.set(i, col, field.add(m.get(i, col), c));
                        }
                    }
                }
            }
            debug_assert!((0..d).all(|i| m.get(i, generator) == v[i]));
            m
        })
        .collect();
    Ok(HomBasis { source: source.kernel(), target: target.kernel(), basis })
}

/// All modules `kL_X`, `X ∈ P_1([n])`, of one monoid, with the table they act over.
#[derive(Debug, Clone)]
pub struct ModuleFamily {
    table: MonoidTable,
    green: GreenData,
    modules: BTreeMap<Subset, SchutzModule>,
}

impl ModuleFamily {
    pub fn new(table: MonoidTable) -> Result<Self> {
        if !matches!(table.kind(), MonoidKind::OD | MonoidKind::COD) {
            return Err(Error::UnsupportedKind(table.kind().to_string()));
        }
        let green = GreenData::compute(&table);
        Self::with_green(table, green)
    }

    pub fn with_green(table: MonoidTable, green: GreenData) -> Result<Self> {
        let modules = p1_subsets(table.degree())
            .into_iter()
            .map(|x| SchutzModule::new(&table, &green, x).map(|m| (x, m)))
            .collect::<Result<_>>()?;
        Ok(ModuleFamily { table, green, modules })
    }

    pub fn build(kind: MonoidKind, n: usize) -> Result<Self> {
        Self::new(MonoidTable::build(kind, n)?)
    }

    pub fn table(&self) -> &MonoidTable {
        &self.table
    }
    pub fn green(&self) -> &GreenData {
        &self.green
    }
    pub fn degree(&self) -> usize {
        self.table.degree()
    }

    pub fn module(&self, x: Subset) -> Result<&SchutzModule> {
        self.modules
            .get(&x)
            .ok_or_else(|| Error::InvalidSubset(format!("{x} is not in P_1([{}])", self.degree())))
    }

    pub fn objects(&self) -> impl Iterator<Item = Subset> + '_ {
        self.modules.keys().copied()
    }

    pub fn hom_space(&self, y: Subset, x: Subset, field: PrimeField) -> Result<HomBasis> {
        hom_space_cyclic(&self.table, self.module(x)?, self.module(y)?, field)
    }

    fn canonical(&self, kernel: Subset, image: Subset, alpha: Sign) -> Result<usize> {
        self.table.find(kernel, image, alpha).ok_or_else(|| {
            Error::InvalidLabel(format!("f^{alpha}_{{{image},{kernel}}} is not in {}_{}", self.table.kind(), self.degree()))
        })
    }

    /// Matrix of `g ↦ g • v` from `kL_Y` to `kL_X`, for `v = Σ c_f f` with every `f`
    /// having kernel set `X`.
    fn right_action(&self, y: Subset, x: Subset, terms: &[(usize, i64)], field: PrimeField) -> Result<FMatrix> {
        let (src, dst) = (self.module(y)?, self.module(x)?);
        let mut m = FMatrix::zeros(field, dst.dim(), src.dim());
        for (j, &g) in src.basis().iter().enumerate() {
            for &(f, c) in terms {
                if let Some(i) = dst.position(self.table.mul(g, f)) {
                    m.set(i, j, field.add(m.get(i, j), field.from_i64(c)));
                }
            }
        }
        Ok(m)
    }

    /// `ρ^α_{Y,X}(g) = g • f^α_{Y,X}`, a `|L_X| x |L_Y|` matrix.
    pub fn rho(&self, y: Subset, x: Subset, alpha: Sign, field: PrimeField) -> Result<FMatrix> {
        if y.len() != x.len() {
            return Err(Error::InvalidSubset(format!("rho needs |Y| = |X|, got Y = {y}, X = {x}")));
        }
        self.module(y)?;
        let f = self.canonical(x, y, alpha)?;
        self.right_action(y, x, &[(f, 1)], field)
    }

    /// `d^α_{Y,X} = Σ_{i=1}^{|Y|} (-1)^{i+1} f^α_{Y_i,X}` with `Y_i` the set `Y` minus its
    /// `i`-th element, as (element, coefficient) terms.
    pub fn d_vector(&self, y: Subset, x: Subset, alpha: Sign) -> Result<Vec<(usize, i64)>> {
        if y.len() != x.len() + 1 {
            return Err(Error::InvalidSubset(format!("d needs |Y| = |X| + 1, got Y = {y}, X = {x}")));
        }
        y.elements()
            .into_iter()
            .enumerate()
            .map(|(i, yi)| Ok((self.canonical(x, y.without(yi), alpha)?, if i % 2 == 0 { 1 } else { -1 })))
            .collect()
    }

    /// `δ^α_{Y,X}(g) = g • d^α_{Y,X}`, a `|L_X| x |L_Y|` matrix.
    pub fn delta(&self, y: Subset, x: Subset, alpha: Sign, field: PrimeField) -> Result<FMatrix> {
        let d = self.d_vector(y, x, alpha)?;
        self.module(y)?;
        self.right_action(y, x, &d, field)
    }

    /// Coordinates of `v` in the basis of `kL_X`.
    pub fn vector_in(&self, x: Subset, terms: &[(usize, i64)], field: PrimeField) -> Result<Vec<u32>> {
        let module = self.module(x)?;
        let mut v = vec![0u32; module.dim()];
        for &(f, c) in terms {
            let i = module
                .position(f)
                .ok_or_else(|| Error::Structure(format!("{} is not in L_{x}", self.table.label(f))))?;
            v[i] = field.add(v[i], field.from_i64(c));
        }
        Ok(v)
    }

    /// Full table of `dim Hom(kL_Y, kL_X)` against `|H̃_{Y,X}|`.
    pub fn hom_dimensions(&self, field: PrimeField) -> Result<HomDimTable> {
        let objects: Vec<Subset> = self.objects().collect();
        let mut pairs = Vec::with_capacity(objects.len() * objects.len());
        for &y in &objects {
            for &x in &objects {
                let dim = self.hom_space(y, x, field)?.dim();
                pairs.push(HomDimEntry { y, x, dim, h_tilde: h_tilde(&self.table, y, x).len() });
            }
        }
        Ok(HomDimTable { n: self.degree(), monoid: self.table.kind().name().to_string(), pairs })
    }
}

/// Properties of the explicit homomorphisms: `ρ^α_{Y,X}` and `δ^α_{Y,X}` are nonzero,
/// intertwine the full action, lie in the computed Hom space and are independent
/// where expected; `d^{-1} = d^1 f^{-1}_{X,X}`; elements of rank at most `|X|`
/// annihilate `d^1_{Y,X}`; and the module axiom holds on every `kL_X`.
pub fn verify_hom_lemmas(family: &ModuleFamily, field: PrimeField) -> Result<Report> {
    let table = family.table();
    let kind = table.kind();
    let mut report = Report::new(format!("homomorphism lemmas for {}_{}", kind, family.degree()));
    let objects: Vec<Subset> = family.objects().collect();
    let mut fails: BTreeMap<&'static str, (usize, Option<String>)> = BTreeMap::new();
    let mut record = |name: &'static str, ok: bool, inst: &dyn Fn() -> String| {
        let e = fails.entry(name).or_insert((0, None));
        e.0 += 1;
        if !ok && e.1.is_none() {
            e.1 = Some(inst());
        }
    };
    for &y in &objects {
        for &x in &objects {
            let inst = || format!("Y={y} X={x}");
            let equal = y.len() == x.len();
            if !equal && y.len() != x.len() + 1 {
                continue;
            }
            let (p, m) = if equal {
                (family.rho(y, x, Sign::Plus, field)?, family.rho(y, x, Sign::Minus, field)?)
            } else {
                (family.delta(y, x, Sign::Plus, field)?, family.delta(y, x, Sign::Minus, field)?)
            };
            let hom = family.hom_space(y, x, field)?;
            let (src, dst) = (family.module(y)?, family.module(x)?);
            for t in [&p, &m] {
                record(if equal { "rho nonzero" } else { "delta nonzero" }, !t.is_zero(), &inst);
                record(
                    if equal { "rho intertwines" } else { "delta intertwines" },
                    intertwining_counterexample(table, t, dst, src).is_none(),
                    &inst,
                );
                record(if equal { "rho in Hom span" } else { "delta in Hom span" }, hom.contains(t), &inst);
            }
            let degenerate = kind == MonoidKind::OD && x.len() == 1;
            let rank = crate::algebra::span_rank(field, p.entries().len(), &[p.entries().to_vec(), m.entries().to_vec()]);
            if degenerate {
                record(if equal { "rho^1 = rho^-1 on constants" } else { "delta^1 = delta^-1 on constants" }, p == m, &inst);
            } else {
                record(if equal { "rho^1, rho^-1 independent" } else { "delta^1, delta^-1 independent" }, rank == 2, &inst);
            }
            if !equal {
                let flip = table.find(x, x, Sign::Minus).ok_or_else(|| Error::Structure(format!("no f^-1 for {x}")))?;
                let d1 = family.d_vector(y, x, Sign::Plus)?;
                let moved: Vec<(usize, i64)> = d1.iter().map(|&(f, c)| (table.mul(f, flip), c)).collect();
                let lhs = family.vector_in(x, &moved, field)?;
                let rhs = family.vector_in(x, &family.d_vector(y, x, Sign::Minus)?, field)?;
                record("d^-1 = d^1 f^-1_(X,X)", lhs == rhs, &inst);
                let dv = family.vector_in(x, &d1, field)?;
                let annihilated = (0..table.len()).filter(|&s| table.label(s).rank() <= x.len()).all(|s| {
                    let mut out = vec![0u32; dst.dim()];
                    for (j, &c) in dv.iter().enumerate() {
                        if c != 0 {
                            if let Some(i) = dst.act(s, j) {
                                out[i] = field.add(out[i], c);
                            }
                        }
                    }
                    out.iter().all(|&v| v == 0)
                });
                record("rank(s) <= |X| annihilates d^1", annihilated, &inst);
            }
        }
    }
    if family.degree() <= 5 {
        for &x in &objects {
            let ce = family.module(x)?.module_axiom_counterexample(table);
            record("module axiom", ce.is_none(), &|| format!("X={x}"));
        }
    }
    for (name, (count, fail)) in fails {
        report.check(format!("{name} ({count} instances)"), fail.is_none(), fail);
    }
    Ok(report)
}

#[derive(Debug, Clone, Serialize)]
pub struct HomDimEntry {
    #[serde(rename = "Y")]
    pub y: Subset,
    #[serde(rename = "X")]
    pub x: Subset,
    pub dim: usize,
    pub h_tilde: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct HomDimTable {
    pub n: usize,
    pub monoid: String,
    pub pairs: Vec<HomDimEntry>,
}

impl HomDimTable {
    pub fn mismatches(&self) -> impl Iterator<Item = &HomDimEntry> {
        self.pairs.iter().filter(|e| e.dim != e.h_tilde)
    }

    pub fn report(&self) -> Report {
        let mut r = Report::new(format!("dim Hom(kL_Y, kL_X) = |H~_(Y,X)| for {}_{}", self.monoid, self.n));
        let bad: Vec<String> =
            self.mismatches().map(|e| format!("Y={} X={}: dim {} vs {}", e.y, e.x, e.dim, e.h_tilde)).collect();
        r.check(format!("{} pairs", self.pairs.len()), bad.is_empty(), bad.first().cloned());
        r
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("Hom dimensions for {}_{}\n", self.monoid, self.n);
        for e in &self.pairs {
            out.push_str(&format!(
                "Y={:<12} X={:<12} dim={} |H~|={}{}\n",
                e.y.to_string(),
                e.x.to_string(),
                e.dim,
                e.h_tilde,
                if e.dim == e.h_tilde { "" } else { "  MISMATCH" }
            ));
        }
        out
    }
}
