//! Acceptance run: one `[PASS]`/`[FAIL]` line per criterion, nonzero exit on
//! any failure.

mod common;

use std::collections::BTreeSet;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use common::{
    bounds_outside, brute_key, congruence_oracle, free_chain_plus_point, graded_by_intervals, lattice_oracle,
    order_of,
};
use latmod::congruence::{
    all_congruences, g_congruence, maximum_graded_quotient, quotient, Congruence, DEFAULT_CONGRUENCE_CAP,
};
use latmod::constructions::{self as c, grid_quotient, GridQuotient};
use latmod::enumeration::{count_lattices, enumerate_by_size, enumerate_lattices};
use latmod::harness::{
    certify_corpus, certify_supersolvable, generating_pairs, pq_suite, pq_violations, universal_property_check_with,
    verify_lemma_suite, verify_pq, verify_theorem1, Certification, DEFAULT_GRID_CAP,
};
use latmod::properties::{find_left_modular_chain, is_distributive, is_graded, is_supersolvable};
use latmod::{Chain, Lattice};

/// Wall-clock budget for classifying the size-8 corpus.
const THEOREM1_BUDGET: Duration = Duration::from_secs(120);
/// Wall-clock budget for the size-9 stretch run.
const STRETCH_BUDGET: Duration = Duration::from_secs(30 * 60);
/// Grid cap for size-9 lattices (the 9-element chain needs 8 × 8).
const STRETCH_GRID_CAP: usize = 64;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn corpus(max: usize) -> Vec<Lattice> {
    enumerate_lattices(max, 11).unwrap().collect()
}

fn named_families() -> Vec<(String, Lattice)> {
    let mut out = Vec::new();
    for n in 0..=4 {
        out.push((format!("B{n}"), c::boolean(n).unwrap()));
    }
    for n in 1..=4 {
        out.push((format!("Pi{n}"), c::partition_lattice(n).unwrap()));
    }
    for m in [12, 30, 36, 60, 72, 210] {
        out.push((format!("D{m}"), c::divisor_lattice(m).unwrap()));
    }
    for (a, b) in [(1, 1), (2, 2), (2, 3), (3, 3), (1, 5)] {
        let p = c::product(&c::chain(a).unwrap(), &c::chain(b).unwrap()).unwrap();
        out.push((format!("C{a}xC{b}"), p));
    }
    for k in 0..=5 {
        out.push((format!("G({k})"), grid_quotient(k).unwrap().lattice));
    }
    out
}

fn theorem1() -> Outcome {
    let lattices = corpus(8);
    let start = Instant::now();
    let s = verify_theorem1(&lattices, None, DEFAULT_GRID_CAP).map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    ensure(s.checked == 300, || format!("corpus has {} lattices, expected 300", s.checked))?;
    ensure(s.violations.is_empty(), || format!("violations: {:?}", s.violations))?;
    ensure(s.certified == s.graded_left_modular && s.over_cap == 0, || {
        format!("certified {} of {}, over cap {}", s.certified, s.graded_left_modular, s.over_cap)
    })?;
    ensure(elapsed <= THEOREM1_BUDGET, || format!("took {elapsed:?}"))?;

    let named: Vec<Lattice> = named_families().into_iter().map(|(_, l)| l).collect();
    let ns = verify_theorem1(&named, None, DEFAULT_GRID_CAP).map_err(|e| e.to_string())?;
    ensure(ns.violations.is_empty(), || format!("named-family violations: {:?}", ns.violations))?;

    for (name, l) in [("N5", c::pentagon()), ("hexagon", c::benzene()), ("figure1", c::figure1())] {
        ensure(!is_supersolvable(&l).verdict, || format!("{name} classified supersolvable"))?;
    }
    ensure(find_left_modular_chain(&c::pentagon()).is_some() && !is_graded(&c::pentagon()).verdict, || {
        "N5 should be left modular and not graded".into()
    })?;
    ensure(is_graded(&c::benzene()).verdict && find_left_modular_chain(&c::benzene()).is_none(), || {
        "hexagon should be graded and not left modular".into()
    })?;
    Ok(format!(
        "300 lattices, {} graded+left modular = {} supersolvable, all certified, 0 violations in {:.2?}; \
         {} named lattices ({} certified, {} over grid cap), controls rejected",
        s.graded_left_modular,
        s.supersolvable,
        elapsed,
        ns.checked,
        ns.certified,
        ns.over_cap
    ))
}

fn theorem1_stretch() -> Outcome {
    let levels = enumerate_by_size(9, 11).unwrap();
    let ninth = &levels[8];
    let start = Instant::now();
    let s = verify_theorem1(ninth, None, STRETCH_GRID_CAP).map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    ensure(s.checked == 1078, || format!("{} lattices of size 9", s.checked))?;
    ensure(s.violations.is_empty(), || format!("violations: {:?}", s.violations))?;
    ensure(s.over_cap == 0, || format!("{} over cap", s.over_cap))?;
    ensure(elapsed <= STRETCH_BUDGET, || format!("took {elapsed:?}"))?;
    Ok(format!(
        "1078 lattices of size 9, {} supersolvable, 0 violations in {:.2?}",
        s.supersolvable, elapsed
    ))
}

fn enumeration() -> Outcome {
    let expected = [1, 1, 1, 2, 5, 15, 53, 222, 1078, 5994];
    let counts = count_lattices(10, 11).map_err(|e| e.to_string())?;
    ensure(counts == expected, || format!("counts {counts:?}"))?;
    let levels = enumerate_by_size(7, 11).unwrap();
    for (i, level) in levels.iter().enumerate() {
        let ours: BTreeSet<Vec<bool>> = level.iter().map(|l| brute_key(&bounds_outside(l))).collect();
        let oracle = lattice_oracle(i + 1);
        ensure(ours.len() == level.len() && ours == oracle, || {
            format!("size {}: {} emitted, {} in oracle", i + 1, level.len(), oracle.len())
        })?;
    }
    Ok(format!("counts {counts:?}; key sets equal to poset oracle for sizes 1..=7"))
}

fn figure1() -> Outcome {
    let l = c::figure1();
    ensure(!is_graded(&l).verdict, || "graded".into())?;
    let g = g_congruence(&l, DEFAULT_CONGRUENCE_CAP).map_err(|e| e.to_string())?;
    ensure(g.is_equality(), || format!("g = {:?}", g.classes()))?;
    let q = maximum_graded_quotient(&l, DEFAULT_CONGRUENCE_CAP).map_err(|e| e.to_string())?;
    ensure(q.is_none(), || "maximum graded quotient present".into())?;
    Ok("not graded, g is equality, no maximum graded quotient".into())
}

fn grid_model() -> Outcome {
    for k in 0..=6 {
        let g = grid_quotient(k).map_err(|e| e.to_string())?;
        let l = &g.lattice;
        ensure(is_graded(l).verdict && is_distributive(l).verdict, || format!("k={k}: not graded distributive"))?;
        ensure(l.size() == (k + 2) * (k + 5) / 2 - 1 && l.size() == GridQuotient::expected_size(k), || {
            format!("k={k}: size {}", l.size())
        })?;
        ensure(l.height(l.top()) == 2 * k + 2, || format!("k={k}: rank {}", l.height(l.top())))?;
        let mut gens = g.x.clone();
        gens.push(g.y);
        ensure(l.sublattice_generated(&gens).len() == l.size(), || format!("k={k}: not generated"))?;

        let below: BTreeSet<usize> = l.elements().filter(|&e| l.leq(e, g.y)).collect();
        let mut expected: BTreeSet<usize> = g.x.iter().map(|&x| l.meet(g.y, x)).collect();
        expected.insert(g.y);
        ensure(below == expected, || format!("k={k}: below y {below:?}"))?;

        let x0 = g.x[0];
        let mut up_gens = g.x[1..].to_vec();
        up_gens.push(l.join(g.y, x0));
        let above: Vec<usize> = l.elements().filter(|&e| l.lt(x0, e)).collect();
        let by_index: Vec<usize> = l.elements().filter(|&e| g.index[e].0 >= 0 && e != x0).collect();
        ensure(l.sublattice_generated(&up_gens) == above && above == by_index, || {
            format!("k={k}: strict up-set of x0 not generated")
        })?;
    }
    let free = free_chain_plus_point();
    let q = maximum_graded_quotient(&free, DEFAULT_CONGRUENCE_CAP)
        .map_err(|e| e.to_string())?
        .ok_or("free model has no maximum graded quotient")?;
    ensure(q.lattice.canonical_form() == grid_quotient(1).unwrap().lattice.canonical_form(), || {
        "quotient of the free model is not G(1)".into()
    })?;
    Ok("k = 0..=6 shape, rank, generation, down-set of y, up-set of x0; free model quotient = G(1)".into())
}

fn universal_property() -> Outcome {
    let mut grids: Vec<GridQuotient> = Vec::new();
    let (mut lattices, mut pairs) = (0usize, 0usize);
    for l in corpus(8).iter().filter(|l| is_graded(l).verdict) {
        lattices += 1;
        for (chain, w) in generating_pairs(l) {
            let k = chain.length();
            while grids.len() <= k {
                grids.push(grid_quotient(grids.len()).unwrap());
            }
            pairs += 1;
            let r = universal_property_check_with(&grids[k], l, &chain, w).map_err(|e| e.to_string())?;
            ensure(r.verdict, || format!("{:?} chain {:?} w {w}: {:?}", l.covers(), chain, r.counterexample))?;
        }
    }
    Ok(format!("{pairs} generating (chain, w) pairs over {lattices} graded lattices, 0 failures"))
}

fn lemma_suites() -> Outcome {
    let mut lattices = corpus(8);
    lattices.extend(
        named_families()
            .into_iter()
            .filter(|(n, _)| !n.starts_with("G("))
            .map(|(_, l)| l),
    );
    let mut failures = Vec::new();
    for l in &lattices {
        let r = verify_lemma_suite(l, DEFAULT_CONGRUENCE_CAP).map_err(|e| e.to_string())?;
        failures.extend(r.all().into_iter().filter(|x| !x.verdict).cloned());
    }
    ensure(failures.is_empty(), || format!("{failures:?}"))?;
    Ok(format!("{} lattices, all five suites pass", lattices.len()))
}

fn pq_identities() -> Outcome {
    let (mut lattices, mut pairs_maximal, mut pairs_any) = (0usize, 0usize, 0usize);
    for l in corpus(8) {
        if !(is_graded(&l).verdict && find_left_modular_chain(&l).is_some()) {
            continue;
        }
        lattices += 1;
        let lm = latmod::properties::left_modular_chains(&l).len();
        pairs_maximal += lm * l.maximal_chains().len();
        pairs_any += lm * latmod::harness::all_chains(&l).len();
        for any in [false, true] {
            let bad = pq_suite(&l, 3, any);
            ensure(bad.is_empty(), || format!("{:?}: {bad:?}", l.covers()))?;
        }
    }
    let pi4 = c::partition_lattice(4).unwrap();
    ensure(pq_suite(&pi4, 3, false).is_empty(), || "partition lattice fails".into())?;

    let n5 = c::pentagon();
    let x = Chain::new(&n5, vec![0, 1, 2, 4]).unwrap();
    let y = Chain::new(&n5, vec![0, 3, 4]).unwrap();
    let r = verify_pq(&n5, &x, &y, 2);
    ensure(r.property == "Q2" && r.counterexample == Some(vec![2, 1, 3, 4, 1, 2]), || {
        format!("pentagon report {r:?}")
    })?;

    // A violation at t - 1, extended by repeating its last terms, is a
    // violation at t.
    for l in [c::pentagon(), c::benzene(), c::figure1()] {
        for x in l.maximal_chains() {
            for y in l.maximal_chains() {
                let at3 = pq_violations(&l, &x, &y, 3);
                for v in pq_violations(&l, &x, &y, 2) {
                    let extended = at3.iter().any(|w| {
                        w.identity == v.identity
                            && w.a[..2] == v.a[..]
                            && w.b[..2] == v.b[..]
                            && w.a[2] == v.a[1]
                            && w.b[2] == v.b[1]
                    });
                    ensure(extended, || format!("{v:?} not extended"))?;
                }
            }
        }
    }
    Ok(format!(
        "{lattices} graded left modular lattices, t <= 3, {pairs_maximal} maximal and {pairs_any} arbitrary \
         chain pairs pass; pentagon Q2 witness a=(b,a), b=(c,1) gives a vs b"
    ))
}

fn birkhoff() -> Outcome {
    let lattices = corpus(8);
    let supersolvable = lattices.iter().filter(|l| is_supersolvable(l).verdict).count();
    let bad = certify_corpus(&lattices, DEFAULT_GRID_CAP).map_err(|e| e.to_string())?;
    ensure(bad.is_empty(), || format!("{bad:?}"))?;

    let pi4 = c::partition_lattice(4).unwrap();
    let m = find_left_modular_chain(&pi4).unwrap();
    ensure(certify_supersolvable(&pi4, &m, DEFAULT_GRID_CAP).unwrap().is_certified(), || {
        "partition lattice not certified".into()
    })?;

    let mut witnesses = Vec::new();
    let hex = c::benzene();
    for m in hex.maximal_chains() {
        match certify_supersolvable(&hex, &m, DEFAULT_GRID_CAP).unwrap() {
            Certification::Refuted(r) => witnesses.push(format!("hexagon {:?}/{:?}", r.mchain, r.ychain)),
            Certification::Certified(_) => return Err("hexagon certified".into()),
        }
    }
    let n5 = c::pentagon();
    let m = find_left_modular_chain(&n5).unwrap();
    match certify_supersolvable(&n5, &m, DEFAULT_GRID_CAP).unwrap() {
        Certification::Refuted(r) => witnesses.push(format!("pentagon {:?}/{:?}", r.mchain, r.ychain)),
        Certification::Certified(_) => return Err("pentagon certified".into()),
    }
    Ok(format!(
        "{supersolvable} supersolvable lattices certified; refuted with witnesses: {}",
        witnesses.join(", ")
    ))
}

fn congruence_oracle_check() -> Outcome {
    let mut congruences = 0usize;
    for l in corpus(6) {
        let all = all_congruences(&l, DEFAULT_CONGRUENCE_CAP).map_err(|e| e.to_string())?;
        congruences += all.len();
        let ours: BTreeSet<Vec<usize>> = all.iter().map(|t| t.labels().to_vec()).collect();
        ensure(ours == congruence_oracle(&l), || format!("{:?}", l.covers()))?;

        let g = g_congruence(&l, DEFAULT_CONGRUENCE_CAP).unwrap();
        let mut meet = Congruence::total(l.size());
        for theta in &all {
            let q = quotient(&l, theta).map_err(|e| e.to_string())?;
            let p = &q.projection;
            for a in l.elements() {
                for b in l.elements() {
                    ensure(
                        p[l.meet(a, b)] == q.lattice.meet(p[a], p[b]) && p[l.join(a, b)] == q.lattice.join(p[a], p[b]),
                        || format!("projection not a homomorphism on {:?}", l.covers()),
                    )?;
                }
            }
            if graded_by_intervals(&order_of(&q.lattice)) {
                ensure(g.refines(theta), || format!("g does not refine {:?}", theta.classes()))?;
                meet = meet.meet(theta);
            }
        }
        ensure(g == meet, || "g differs from the meet of graded-quotient congruences".into())?;
    }
    Ok(format!("{congruences} congruences over the 25 lattices of size <= 6 match partition filtering"))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("AC1 graded + left modular <=> supersolvable, size <= 8", theorem1),
        ("AC1 stretch: size 9", theorem1_stretch),
        ("AC2 enumeration counts and oracle", enumeration),
        ("AC3 non-graded example without graded quotient", figure1),
        ("AC4 grid model G(k)", grid_model),
        ("AC5 universal property of G(k)", universal_property),
        ("AC6 lemma suites", lemma_suites),
        ("AC7 P_t / Q_t identities", pq_identities),
        ("AC8 down-set homomorphism certification", birkhoff),
        ("AC9 congruence engine oracle", congruence_oracle_check),
    ];
    let mut failed = 0;
    for (name, run) in criteria {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|p| {
            Err(p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panicked".into()))
        });
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("[PASS] {name}: {detail} [{secs:.2}s]"),
            Err(detail) => {
                failed += 1;
                println!("[FAIL] {name}: {detail} [{secs:.2}s]");
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
