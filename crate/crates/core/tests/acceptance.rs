//! Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any failure.

use std::collections::BTreeSet;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;

use monoidlab::algebra::Quiver;
use monoidlab::covering::{opn_quiver_check, verify_product_decomposition};
use monoidlab::green::{sandwich_matrix, sandwich_right_invertible};
use monoidlab::monoid::enumerate_elements;
use monoidlab::pipeline::verify_green;
use monoidlab::schutz::{h_tilde, hom_space, intertwining_counterexample, ModuleFamily};
use monoidlab::skeleton::{analyze_quiver, verify_relations, AlgebraKind, CategoryAlgebra};
use monoidlab::{Error, FMatrix, GreenData, MonoidKind, MonoidTable, PrimeField, Report};

type Outcome = Result<(), String>;
type Criterion = (&'static str, fn() -> Outcome);

fn field(p: u32) -> PrimeField {
    PrimeField::new(p).unwrap()
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Outcome {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn passed(r: &Report) -> Outcome {
    ensure(r.passed(), || {
        let names: Vec<String> = r.failures().map(|c| format!("{} ({})", c.name, c.detail.clone().unwrap_or_default())).collect();
        format!("{}: {}", r.title, names.join("; "))
    })
}

/// Counts monotone and antitone maps `[n] -> [n]` by walking all `n^n` maps.
fn brute_force_monotone(n: usize) -> (usize, usize) {
    let mut v = vec![1usize; n];
    let (mut up, mut down) = (0, 0);
    loop {
        let inc = v.windows(2).all(|w| w[0] <= w[1]);
        let dec = v.windows(2).all(|w| w[0] >= w[1]);
        up += inc as usize;
        down += dec as usize;
        let mut i = n;
        loop {
            if i == 0 {
                return (up, down);
            }
            i -= 1;
            if v[i] < n {
                v[i] += 1;
                break;
            }
            v[i] = 1;
        }
    }
}

fn sizes() -> Outcome {
    for n in 1..=8 {
        let (up, down) = brute_force_monotone(n);
        // Constant maps are the only maps both monotone and antitone.
        let od_brute = up + down - n;
        let op = enumerate_elements(MonoidKind::Op, n).map_err(|e| e.to_string())?.len();
        let od = enumerate_elements(MonoidKind::OD, n).map_err(|e| e.to_string())?.len();
        let cod = enumerate_elements(MonoidKind::COD, n).map_err(|e| e.to_string())?.len();
        ensure(op == up, || format!("n={n}: |Op| {op} vs brute force {up}"))?;
        ensure(od == od_brute, || format!("n={n}: |OD| {od} vs brute force {od_brute}"))?;
        ensure(od == 2 * up - n, || format!("n={n}: |OD| {od} vs 2|Op|-n"))?;
        ensure(cod == 2 * up, || format!("n={n}: |COD| {cod} vs 2|Op|"))?;
    }
    Ok(())
}

fn partition(m: usize, key: impl Fn(usize) -> Vec<usize>) -> BTreeSet<Vec<usize>> {
    let mut by: std::collections::BTreeMap<Vec<usize>, Vec<usize>> = Default::default();
    for a in 0..m {
        by.entry(key(a)).or_default().push(a);
    }
    by.into_values().collect()
}

fn classes(ids: &[usize]) -> BTreeSet<Vec<usize>> {
    partition(ids.len(), |a| vec![ids[a]])
}

fn green() -> Outcome {
    for kind in [MonoidKind::OD, MonoidKind::COD] {
        for n in 1..=5 {
            let t = MonoidTable::build(kind, n).map_err(|e| e.to_string())?;
            let g = GreenData::compute(&t);
            let m = t.len();
            let ideal = |it: &mut dyn Iterator<Item = usize>| -> Vec<usize> {
                let s: BTreeSet<usize> = it.collect();
                s.into_iter().collect()
            };
            let right = |a: usize| ideal(&mut (0..m).map(|x| t.mul(a, x)));
            let left = |a: usize| ideal(&mut (0..m).map(|x| t.mul(x, a)));
            let two = |a: usize| ideal(&mut (0..m).flat_map(|x| (0..m).map(move |y| (x, y))).map(|(x, y)| t.mul(t.mul(y, a), x)));
            ensure(classes(&g.r_class) == partition(m, right), || format!("{kind}_{n}: R"))?;
            ensure(classes(&g.l_class) == partition(m, left), || format!("{kind}_{n}: L"))?;
            ensure(classes(&g.h_class) == partition(m, |a| [right(a), vec![usize::MAX], left(a)].concat()), || {
                format!("{kind}_{n}: H")
            })?;
            ensure(classes(&g.j_class) == partition(m, two), || format!("{kind}_{n}: J"))?;
            passed(&verify_green(&t, &g).map_err(|e| e.to_string())?)?;
        }
    }
    Ok(())
}

fn sandwiches() -> Outcome {
    for p in [7, 10007] {
        let f = field(p);
        for kind in [MonoidKind::OD, MonoidKind::COD] {
            for n in 1..=6 {
                let t = MonoidTable::build(kind, n).map_err(|e| e.to_string())?;
                let g = GreenData::compute(&t);
                for k in 1..=n {
                    let sm = sandwich_matrix(&t, &g, k).map_err(|e| e.to_string())?;
                    ensure(sm.is_upper_unitriangular_on_ofd_block(), || format!("{kind}_{n} J_{k}: block not unitriangular"))?;
                    let ri = sandwich_right_invertible(&sm, f).map_err(|e| e.to_string())?;
                    ensure(ri.invertible, || format!("{kind}_{n} J_{k} p={p}: not right invertible"))?;
                    for c in &ri.components {
                        let r = c.right_inverse.as_ref().ok_or_else(|| format!("{kind}_{n} J_{k}: no certificate"))?;
                        let id = FMatrix::identity(f, c.matrix.rows());
                        ensure(c.matrix.mul(r) == id, || format!("{kind}_{n} J_{k} {}: P R != I", c.character))?;
                    }
                }
            }
        }
    }
    Ok(())
}

fn hom_dimensions() -> Outcome {
    let f = field(10007);
    for kind in [MonoidKind::OD, MonoidKind::COD] {
        for n in 1..=5 {
            let fam = ModuleFamily::build(kind, n).map_err(|e| e.to_string())?;
            let objects: Vec<_> = fam.objects().collect();
            for &y in &objects {
                for &x in &objects {
                    let (src, dst) = (fam.module(y).unwrap(), fam.module(x).unwrap());
                    let hom = hom_space(fam.table(), dst, src, f);
                    let want = h_tilde(fam.table(), y, x).len();
                    ensure(hom.dim() == want, || format!("{kind}_{n} Y={y} X={x}: dim {} vs |H~| {want}", hom.dim()))?;
                    for b in &hom.basis {
                        ensure(intertwining_counterexample(fam.table(), b, dst, src).is_none(), || {
                            format!("{kind}_{n} Y={y} X={x}: basis element fails to intertwine")
                        })?;
                    }
                }
            }
        }
    }
    Ok(())
}

fn relations() -> Outcome {
    for p in [10007, 32003] {
        for kind in [AlgebraKind::A, AlgebraKind::CA] {
            for n in 1..=6 {
                passed(&verify_relations(kind, n, field(p)).map_err(|e| e.to_string())?)?;
            }
        }
    }
    Ok(())
}

fn eps(k: usize, plus: bool) -> String {
    format!("eps_{k}_{}", if plus { "plus" } else { "minus" })
}

/// Sorted `(src, dst)` arrows: odd `k` swaps the sign, even `k` keeps it.
fn parity_arrows(n: usize, with_eps1_minus: bool) -> Vec<(String, String)> {
    let mut out = Vec::new();
    for k in 1..n {
        for plus in [true, false] {
            if k == 1 && !plus && !with_eps1_minus {
                continue;
            }
            let to = if k % 2 == 1 { !plus } else { plus };
            out.push((eps(k, plus), eps(k + 1, to)));
        }
    }
    out.sort();
    out
}

fn arrows(q: &Quiver) -> Result<Vec<(String, String)>, String> {
    let mut out = Vec::new();
    for a in &q.arrows {
        ensure(a.mult == 1, || format!("arrow {} -> {} has multiplicity {}", a.src, a.dst, a.mult))?;
        out.push((a.src.clone(), a.dst.clone()));
    }
    out.sort();
    Ok(out)
}

fn component_sizes(q: &Quiver) -> Vec<usize> {
    let mut s: Vec<usize> = q.components().iter().map(Vec::len).collect();
    s.sort_unstable();
    s
}

fn od_quiver() -> Outcome {
    for n in 2..=6 {
        let a = CategoryAlgebra::skeleton(AlgebraKind::A, n, field(10007)).map_err(|e| e.to_string())?;
        let qa = analyze_quiver(&a).map_err(|e| e.to_string())?;
        passed(&qa.report)?;
        let q = &qa.quiver;
        ensure(q.vertices.len() == 2 * n - 1, || format!("n={n}: {} vertices", q.vertices.len()))?;
        ensure(arrows(q)? == parity_arrows(n, false), || format!("n={n}: arrows {:?}", q.arrows))?;
        ensure(q.rad_square_zero, || format!("n={n}: length-2 paths nonzero"))?;
        ensure(component_sizes(q) == [n - 1, n], || format!("n={n}: components {:?}", component_sizes(q)))?;
        if n == 6 {
            ensure(q.to_dot("A_6") == include_str!("golden/od6_quiver.dot"), || "A_6 DOT differs from golden".into())?;
        }
    }
    Ok(())
}

fn radicals() -> Outcome {
    for kind in [AlgebraKind::A, AlgebraKind::CA] {
        for n in 1..=6 {
            let alg = CategoryAlgebra::skeleton(kind, n, field(10007)).map_err(|e| e.to_string())?;
            let qa = analyze_quiver(&alg).map_err(|e| e.to_string())?;
            passed(&qa.report)?;
            ensure(qa.radical.trace_form_checked, || format!("{kind}_{n}: trace form skipped"))?;
            let compared = qa.report.checks.iter().any(|c| c.name.ends_with("candidate equals trace-form radical") && c.passed);
            ensure(compared, || format!("{kind}_{n}: no trace-form comparison"))?;
            ensure(qa.radical.rad_square_zero, || format!("{kind}_{n}: Rad^2 != 0"))?;
            let trace = alg.algebra.trace_form_radical().map_err(|e| e.to_string())?;
            ensure(trace.len() == qa.radical.dim, || format!("{kind}_{n}: trace-form dim {}", trace.len()))?;
        }
    }
    Ok(())
}

fn decomposition() -> Outcome {
    for n in 1..=5 {
        let d = verify_product_decomposition(n, field(10007)).map_err(|e| e.to_string())?;
        passed(&d.report)?;
        let (op, _) = brute_force_monotone(n);
        ensure(d.op_size == op, || format!("n={n}: |Op| {}", d.op_size))?;
        ensure(d.ca_dim == 2 * op, || format!("n={n}: dim CA {}", d.ca_dim))?;
        ensure(d.g_rank == d.ca_dim, || format!("n={n}: rank G {}", d.g_rank))?;
    }
    Ok(())
}

fn is_single_path(q: &Quiver, len: usize) -> bool {
    let comps = q.components();
    q.vertices.len() == len && q.arrows.len() + 1 == len && comps.len() == 1 && q.straight_path(&comps[0]).is_some()
}

fn straight_lines() -> Outcome {
    for n in 1..=6 {
        let s = opn_quiver_check(n, field(10007)).map_err(|e| e.to_string())?;
        passed(&s.report)?;
        ensure(is_single_path(&s.op_quiver, n) && s.op_quiver.rad_square_zero, || format!("n={n}: k0D_n quiver"))?;
        let c = &s.cod_quiver;
        let comps = c.components();
        let ok = c.vertices.len() == 2 * n
            && comps.len() == 2
            && comps.iter().all(|p| p.len() == n && c.straight_path(p).is_some())
            && arrows(c)? == parity_arrows(n, true);
        ensure(ok, || format!("n={n}: CA_n quiver {:?}", c.arrows))?;
    }
    Ok(())
}

fn negative_controls() -> Outcome {
    ensure(matches!(PrimeField::new(2), Err(Error::CharacteristicTwo)), || "p = 2 accepted".into())?;
    let a5 = CategoryAlgebra::skeleton(AlgebraKind::A, 5, field(7)).map_err(|e| e.to_string())?;
    match a5.algebra.trace_form_radical() {
        Err(Error::TraceFormUnsound { p: 7, dim: 16 }) => {}
        other => return Err(format!("A_5 over F_7: {:?}", other.map(|r| r.len()))),
    }
    let a5 = CategoryAlgebra::skeleton(AlgebraKind::A, 5, field(17)).map_err(|e| e.to_string())?;
    ensure(a5.algebra.trace_form_radical().is_ok(), || "A_5 over F_17 refused".into())
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("size identities, n = 1..8, Op_n by brute force", sizes),
        ("Green classes from ideals and eggbox counts, n <= 5", green),
        ("sandwich matrices right invertible with verified certificates, n <= 6, p = 7 and 10007", sandwiches),
        ("dim Hom(kL_Y, kL_X) = |H~_{Y,X}| by intertwiner solving, n <= 5", hom_dimensions),
        ("relation suite for A_n and CA_n, n <= 6, p = 10007 and 32003", relations),
        ("quiver of kOD_n, n = 2..6, and golden A_6 DOT", od_quiver),
        ("span{Delta} equals the trace-form radical with Rad^2 = 0, n <= 6", radicals),
        ("kCOD_n = kOp_n x kOp_n through k_0 D_n, n <= 5", decomposition),
        ("straight line quivers of k_0 D_n and CA_n, n <= 6", straight_lines),
        ("characteristic 2 and p <= dim are refused", negative_controls),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.into_iter().enumerate() {
        let outcome = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|_| Err("panicked".into()));
        match outcome {
            Ok(()) => println!("criterion {:>2}: PASS  {name}", i + 1),
            Err(e) => {
                failed += 1;
                println!("criterion {:>2}: FAIL  {name}: {e}", i + 1);
            }
        }
    }
    println!("{} of 10 criteria passed", 10 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
