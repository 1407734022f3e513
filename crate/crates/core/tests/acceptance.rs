//! Acceptance run: fourteen checks, one PASS/FAIL line each, with a wall-clock limit per check.

use std::collections::{BTreeSet, HashSet, VecDeque};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use ybe_core::brace::{automorphisms, FiniteSkewBrace, Group};
use ybe_core::enumerate::{all_perms, enumerate_abelian_rack_data, enumerate_racks, enumerate_solutions};
use ybe_core::fixtures;
use ybe_core::monoid::Monoid;
use ybe_core::nilpotency::{
    lyubashenko_criterion, malcev_falsify, nc_search, nc_verify_witness, nilpotency_report, uniform_components,
    Budgets, Evidence, FalsifierOutcome, NcOutcome, Verdict,
};
use ybe_core::perm::DEFAULT_CLOSURE_CAP;
use ybe_core::rack::Rack;
use ybe_core::retract::{mpl, mpl_tower, retract, MplOutcome};
use ybe_core::{Perm, Solution};

type Check = Result<String, String>;
/// Number, name, time limit in seconds and check.
type Criterion = (u32, &'static str, u64, fn() -> Check);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn sizes(n: usize) -> Vec<usize> {
    (1..=n).collect()
}

fn c1_nc_positive() -> Check {
    let b = Budgets::default();
    for s in [fixtures::nc_example(), fixtures::nonnilpotent()] {
        let m = Monoid::new(&s);
        let d = m.compute_d(b.d_retries).map_err(|e| e.to_string())?;
        let v = nc_search(&m, d, &sizes(s.n()), &b);
        ensure(v.is_satisfied(), || format!("{:?}: {:?}", s.name, v.outcome))?;
    }
    let m = Monoid::new(&fixtures::nc_example());
    let d = m.compute_d(b.d_retries).unwrap();
    let ok = nc_verify_witness(&m, d, &[0, 2], &[0, 3], &[0], &[0, 0]).map_err(|e| e.to_string())?;
    ensure(ok, || "witness Y={0,2}, Z={0,3}, a=[0], b=[0,0] rejected".into())?;
    Ok("both Satisfied; witness verified".into())
}

fn c2_nc_negative() -> Check {
    let b = Budgets::default();
    for (s, pair) in [(fixtures::z3(), vec![vec![1], vec![2]]), (fixtures::z4(), vec![vec![1], vec![3]])] {
        let m = Monoid::new(&s);
        let d = m.compute_d(b.d_retries).map_err(|e| e.to_string())?;
        let v = nc_search(&m, d, &sizes(s.n()), &b);
        ensure(v.outcome == NcOutcome::NotSatisfied, || format!("{:?}: {:?}", s.name, v.outcome))?;
        let u = uniform_components(&m, d, &b);
        let deg2: Vec<_> = u.levels.iter().flat_map(|l| l.components.iter().map(move |c| (l.level, c))).filter(|(_, c)| c.degree == 2).collect();
        ensure(deg2.len() == 1 && deg2[0].0 == 1 && deg2[0].1.members == pair, || {
            format!("{:?}: degree-2 components {:?}", s.name, deg2)
        })?;
        ensure(u.levels.iter().flat_map(|l| &l.components).all(|c| c.degree <= 2), || "larger component".into())?;
    }
    Ok("z3 and z4 NotSatisfied; one degree-2 component each".into())
}

fn c3_brace_witness() -> Check {
    let s = fixtures::brace_semidirect().solution().map_err(|e| e.to_string())?;
    let m = Monoid::new(&s);
    let d = m.compute_d(Budgets::default().d_retries).map_err(|e| e.to_string())?;
    // (e₁,0)=1, (e₂,0)=2, (e₃,0)=4, (e₄,0)=8, (0,(1,0))=16, (0,(0,1))=32.
    let ok = nc_verify_witness(&m, d, &[1, 4, 16, 32], &[2, 8, 16, 32], &[16], &[32]).map_err(|e| e.to_string())?;
    ensure(ok, || "witness rejected".into())?;
    Ok(format!("witness verified with d = {d}"))
}

fn c4_lyubashenko() -> Check {
    let c = lyubashenko_criterion(&Perm::from_cycles(4, &[&[0, 1]]), &Perm::from_cycles(4, &[&[2, 3]]))
        .map_err(|e| e.to_string())?;
    ensure(c.holds && c.exponents == Some(vec![1, 0]), || format!("{c:?}"))?;
    let b = Budgets::default();
    let r = nilpotency_report(&Monoid::new(&fixtures::lyubashenko()), &b);
    ensure(matches!(r.verdict, Verdict::NilpotentEvidence { .. }), || format!("{:?}", r.verdict))?;
    let f = malcev_falsify(&fixtures::lyubashenko(), 2, 2, &b);
    ensure(matches!(f, FalsifierOutcome::NoneFound { exhausted: true, undecided: 0, .. }), || format!("{f:?}"))?;
    Ok("criterion holds with (1, 0); NilpotentEvidence; falsifier exhausted at (2, 2)".into())
}

fn c5_mpl_fixture() -> Check {
    let s = fixtures::mpl2();
    let t = mpl_tower(&s, s.n()).map_err(|e| e.to_string())?;
    ensure(t.outcome == MplOutcome::Finite { level: 2 } && t.tower_sizes == vec![4, 2, 1], || format!("{t:?}"))?;
    let r = retract(&s).map_err(|e| e.to_string())?;
    ensure(r == Solution::trivial(2), || format!("retract {r:?}"))?;
    Ok("Finite(2), tower [4, 2, 1], retract trivial on 2 points".into())
}

fn enumerated(ns: std::ops::RangeInclusive<usize>) -> Vec<Solution> {
    ns.flat_map(|n| enumerate_solutions(n).unwrap()).collect()
}

fn c6_even_order() -> Check {
    let mut checked = 0;
    let mut pool = enumerated(2..=3);
    pool.extend(fixtures::all_solutions());
    for s in &pool {
        if s.n() > 1 && mpl(s).unwrap().level().is_some_and(|m| m >= 1) {
            ensure(s.r_order() % 2 == 0, || format!("odd order {} for {s:?}", s.r_order()))?;
            checked += 1;
        }
    }
    Ok(format!("{checked} solutions of finite level, all of even order"))
}

fn c7_retract_kernel_groups() -> Check {
    let pool = enumerated(1..=3);
    for s in &pool {
        retract(s).map_err(|e| format!("{s:?}: {e}"))?;
        let h = s.invert();
        let n = s.n();
        for x in 0..n {
            for y in 0..n {
                let a = s.lam_table()[x] == s.lam_table()[y] && s.rho_table()[x] == s.rho_table()[y];
                let b = h.lam_hat[x] == h.lam_hat[y] && h.rho_hat[x] == h.rho_hat[y];
                ensure(a == b, || format!("kernel mismatch at ({x}, {y}) in {s:?}"))?;
            }
        }
        let g = s.perm_group_report(DEFAULT_CLOSURE_CAP).map_err(|e| e.to_string())?;
        ensure(g.general.order == g.lambda_rho.order && g.general.order == g.lambda_lambda_hat.order, || {
            format!("orders {:?} for {s:?}", g)
        })?;
    }
    Ok(format!("{} solutions", pool.len()))
}

fn c8_derived_group() -> Check {
    let mut checked = 0;
    for s in enumerated(1..=3) {
        let Some(m) = mpl(&s).unwrap().level() else { continue };
        let class = s.sigma_group(DEFAULT_CLOSURE_CAP).unwrap().nilpotency_class().class();
        let bound = if s.stats().square_free { m } else { m + 1 };
        ensure(class.is_some_and(|c| c <= bound), || format!("class {class:?} > {bound} for {s:?}"))?;
        checked += 1;
    }
    Ok(format!("{checked} solutions of finite level"))
}

fn c9_abelian_racks() -> Check {
    let mut counts = Vec::new();
    for n in 1..=4 {
        let data = enumerate_abelian_rack_data(n).map_err(|e| e.to_string())?;
        let racks: Vec<Rack> = enumerate_racks(n).unwrap().filter(|r| r.is_abelian()).collect();
        ensure(data.len() == racks.len(), || format!("n = {n}: {} data, {} racks", data.len(), racks.len()))?;
        for d in &data {
            let r = d.build().map_err(|e| e.to_string())?;
            ensure(r.classify_abelian().as_ref() == Ok(d), || format!("round trip fails on {d:?}"))?;
        }
        for r in &racks {
            ensure(r.classify_abelian().and_then(|d| d.build()).as_ref() == Ok(r), || format!("{:?}", r.table()))?;
            ensure(r.cycle_uniformity() == Ok(true), || format!("cycle lengths differ in {:?}", r.table()))?;
        }
        counts.push(data.len());
    }
    Ok(format!("abelian racks for n = 1..4: {counts:?}"))
}

fn c10_holomorph() -> Check {
    let b = fixtures::holomorph();
    let com = b.additive_commutator();
    let auts = automorphisms(&FiniteSkewBrace::trivial(&Group::elementary_abelian_2(2)));
    ensure(com.members.len() == 3 && com.members.iter().all(|&x| x % 4 == 0), || format!("{:?}", com.members))?;
    ensure(!com.is_ideal, || "commutator is an ideal".into())?;
    let f_orders: BTreeSet<u64> = com.members.iter().map(|&x| auts[x / 4].order()).collect();
    ensure(f_orders == BTreeSet::from([1, 3]), || format!("orders {f_orders:?}"))?;
    let x = 1; // ((1,0), id)
    let hit = com.members.iter().find(|&&k| k != 0 && b.mul(b.mul(b.mul_inv(x), k), x) == 3 + k);
    let k = *hit.ok_or("no ((0,0),f) conjugates to ((1,1),f)")?;
    ensure(!com.members.contains(&(3 + k)), || "conjugate stays inside".into())?;
    Ok(format!("[B,B]₊ = {:?}, conjugate ((1,1),f) = {} lies outside", com.members, 3 + k))
}

fn c11_socle_mpl() -> Check {
    let mut braces = vec![("holomorph".to_string(), fixtures::holomorph()), ("semidirect".to_string(), fixtures::brace_semidirect())];
    for (name, g) in Group::small_groups() {
        braces.push((format!("trivial {name}"), FiniteSkewBrace::trivial(&g)));
    }
    let mut lines = Vec::new();
    for (name, b) in &braces {
        let s = b.solution().map_err(|e| e.to_string())?;
        let level = mpl(&s).map_err(|e| e.to_string())?.level();
        let length = b.socle_series().length();
        ensure(level == length, || format!("{name}: mpl {level:?}, socle length {length:?}"))?;
        lines.push(format!("{name}:{length:?}"));
    }
    Ok(format!("{} braces agree", lines.len()))
}

fn words_up_to(n: usize, len: usize) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    let mut layer: Vec<Vec<usize>> = vec![vec![]];
    for _ in 0..len {
        layer = layer.iter().flat_map(|w| (0..n).map(move |x| [w.as_slice(), &[x]].concat())).collect();
        out.extend(layer.iter().cloned());
    }
    out
}

fn c12_cocycle_calculus() -> Check {
    let mut checks = 0usize;
    for s in fixtures::all_solutions().into_iter().filter(|s| s.n() <= 4) {
        let m = Monoid::new(&s);
        let n = s.n();
        for w in words_up_to(n, 5) {
            ensure(m.pi_inverse(&m.pi_forward(&w)) == w, || format!("{:?}: round trip on {w:?}", s.name))?;
            for k in 0..=w.len() {
                let (m1, m2) = w.split_at(k);
                let g = m.lambda_prime(m1);
                let mut rhs = m.pi_forward(m1);
                rhs.extend(m.pi_forward(m2).iter().map(|&x| g.apply(x)));
                ensure(m.pi_forward(&w) == rhs, || format!("{:?}: cocycle law on {m1:?}·{m2:?}", s.name))?;
                checks += 1;
            }
        }
        for x in 0..n {
            for y in 0..n {
                let lhs = m.pi_forward(&m.m_lambda(&[x], &[y]));
                let rhs = vec![s.lam(x, y)];
                ensure(m.a_equal(&lhs, &rhs).unwrap(), || format!("{:?}: π(λ_{x}({y}))", s.name))?;
                let (u, v) = s.r(x, y);
                ensure(m.m_equal(&[x, y], &[u, v]).unwrap(), || format!("{:?}: relation {x}∘{y}", s.name))?;
                checks += 2;
            }
        }
    }
    let l = Monoid::new(&fixtures::lyubashenko());
    ensure(l.m_equal(&[0, 1], &[0, 0]).unwrap(), || "0∘1 ≠ 0∘0 in the Lyubashenko monoid".into())?;
    let nc = Monoid::new(&fixtures::nc_example());
    ensure(nc.a_equal(&[0, 2], &[2, 0]).unwrap(), || "0+2 ≠ 2+0 in the derived monoid".into())?;
    Ok(format!("{checks} identities"))
}

/// Closure of generators under composition, written independently of the library's group code.
fn closure(gens: &[Vec<usize>], n: usize) -> HashSet<Vec<usize>> {
    let id: Vec<usize> = (0..n).collect();
    let mut seen = HashSet::from([id.clone()]);
    let mut queue = VecDeque::from([id]);
    while let Some(p) = queue.pop_front() {
        for g in gens {
            let q: Vec<usize> = (0..n).map(|i| p[g[i]]).collect();
            if seen.insert(q.clone()) {
                queue.push_back(q);
            }
        }
    }
    seen
}

fn c13_non_nilpotent() -> Check {
    let s = fixtures::s3();
    let r = nilpotency_report(&Monoid::new(&s), &Budgets::default());
    let Verdict::NotNilpotent { reasons } = &r.verdict else {
        return Err(format!("{:?}", r.verdict));
    };
    ensure(
        reasons.iter().any(|e| matches!(e, Evidence::LambdaGroupNotNilpotent | Evidence::FalsifierCounterexample { .. })),
        || format!("{reasons:?}"),
    )?;
    let n = s.n();
    let inv = |p: &[usize]| {
        let mut q = vec![0; n];
        for (i, &v) in p.iter().enumerate() {
            q[v] = i;
        }
        q
    };
    let mul = |p: &[usize], q: &[usize]| (0..n).map(|i| p[q[i]]).collect::<Vec<_>>();
    let mut term = closure(s.lam_table(), n);
    let whole = term.clone();
    let mut orders = vec![term.len()];
    loop {
        let gens: Vec<Vec<usize>> = whole
            .iter()
            .flat_map(|g| term.iter().map(move |h| (g.clone(), h.clone())))
            .map(|(g, h)| mul(&mul(&inv(&g), &inv(&h)), &mul(&g, &h)))
            .collect();
        let next = closure(&gens, n);
        if next.len() == term.len() {
            break;
        }
        orders.push(next.len());
        term = next;
    }
    ensure(term.len() > 1, || format!("oracle finds a nilpotent group: {orders:?}"))?;
    Ok(format!("NotNilpotent via {reasons:?}; oracle lower central series orders {orders:?}"))
}

fn c14_sweep() -> Check {
    let b = Budgets::default();
    let (mut pairs, mut holding) = (0, 0);
    for n in 1..=4 {
        let perms = all_perms(n);
        for sigma in &perms {
            for tau in perms.iter().filter(|t| sigma.compose(t) == t.compose(sigma)) {
                pairs += 1;
                if !lyubashenko_criterion(sigma, tau).map_err(|e| e.to_string())?.holds {
                    continue;
                }
                holding += 1;
                let s = Solution::lyubashenko(sigma, tau).map_err(|e| e.to_string())?;
                let m = Monoid::new(&s);
                let d = m.compute_d(b.d_retries).map_err(|e| e.to_string())?;
                let v = nc_search(&m, d, &sizes(n), &b);
                ensure(v.outcome == NcOutcome::NotSatisfied, || format!("σ={sigma:?}, τ={tau:?}: {:?}", v.outcome))?;
            }
        }
    }
    Ok(format!("{pairs} commuting pairs, criterion holds on {holding}, NC fails on all of them"))
}

fn main() {
    let criteria: [Criterion; 14] = [
        (1, "NC positive fixtures", 2, c1_nc_positive),
        (2, "NC negative fixtures and uniform components", 5, c2_nc_negative),
        (3, "brace-scale NC witness", 60, c3_brace_witness),
        (4, "Lyubashenko criterion and report", 10, c4_lyubashenko),
        (5, "multipermutation level fixture", 1, c5_mpl_fixture),
        (6, "even order of finite-level solutions", 120, c6_even_order),
        (7, "retracts, kernels and group orders", 120, c7_retract_kernel_groups),
        (8, "derived group class bound", 60, c8_derived_group),
        (9, "abelian rack classification", 300, c9_abelian_racks),
        (10, "holomorph commutator", 1, c10_holomorph),
        (11, "socle length and level", 60, c11_socle_mpl),
        (12, "cocycle calculus", 120, c12_cocycle_calculus),
        (13, "non-nilpotent detection", 300, c13_non_nilpotent),
        (14, "NC and Lyubashenko criterion sweep", 600, c14_sweep),
    ];
    std::panic::set_hook(Box::new(|_| {}));
    let mut failed = 0;
    for (id, name, limit, check) in criteria {
        let t = Instant::now();
        let out = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|e| {
            let msg = e.downcast_ref::<String>().cloned().or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()));
            Err(format!("panicked: {}", msg.unwrap_or_default()))
        });
        let elapsed = t.elapsed();
        let out = match out {
            Ok(_) if elapsed > Duration::from_secs(limit) => Err(format!("took {elapsed:.2?}, limit {limit} s")),
            o => o,
        };
        match out {
            Ok(detail) => println!("criterion {id:>2} PASS  {name} ({elapsed:.2?}): {detail}"),
            Err(detail) => {
                failed += 1;
                println!("criterion {id:>2} FAIL  {name} ({elapsed:.2?}): {detail}");
            }
        }
    }
    println!("{} of 14 criteria passed", 14 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
