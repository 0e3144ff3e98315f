//! End-to-end acceptance suite. Each criterion prints one PASS/FAIL line with
//! its counts and runtime; the process exits non-zero if any fails.
//!
//! Every check is exact (rational or quadratic-field equality), so the only
//! pinned tolerances are the wall-clock limits below.

use std::collections::hash_map::DefaultHasher;
use std::fmt::Write as _;
use std::hash::{Hash, Hasher};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use num::{One, Signed, Zero};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use holant_core::arith::{int, pow, rat, QuadExt, Rat};
use holant_core::dichotomy::{classify_ternary, verify_case_identities, verify_factorization_identity, Verdict};
use holant_core::dichotomy::TractableCase;
use holant_core::grid::gadgets::g1;
use holant_core::grid::rx3c::{count_exact_covers, SetSystem};
use holant_core::grid::topology::{random_nonneg_rat, random_pure_grid};
use holant_core::grid::{unary, EvalOptions, Polarity, Port, SignatureGrid};
use holant_core::interp::{interpolate_holant_with_d, split_reduction, substitute_d};
use holant_core::linalg::Mat2;
use holant_core::planar::generate::{random_cubic_bipartite, random_planar_graph};
use holant_core::planar::holographic::planar_grid_from_graph;
use holant_core::planar::{count_pm, count_pm_bruteforce, holographic_reduce, matchgate_signature, mg_a, mg_b};
use holant_core::sig::{hadamard_transform, jordan, HadamardKind, Side, SymSig, Tensor};
use holant_core::tractable::{solve_case, solve_with, SolveOptions, TractableInstance};

const LIMIT_ORACLE: Duration = Duration::from_secs(60);
const LIMIT_INTERP: Duration = Duration::from_secs(120);
const LIMIT_PLANAR: Duration = Duration::from_secs(120);

/// Result of one criterion. `log` collects every computed value so reruns
/// can be compared byte for byte.
struct Run {
    ok: bool,
    summary: String,
    log: String,
}

impl Run {
    fn new() -> Self {
        Self { ok: true, summary: String::new(), log: String::new() }
    }

    fn check(&mut self, cond: bool, what: impl FnOnce() -> String) {
        if !cond {
            if self.ok {
                let _ = write!(self.summary, "first failure: {}; ", what());
            }
            self.ok = false;
        }
    }

    fn record(&mut self, v: impl std::fmt::Display) {
        let _ = writeln!(self.log, "{v}");
    }

    fn digest(&self) -> u64 {
        let mut h = DefaultHasher::new();
        self.log.hash(&mut h);
        h.finish()
    }
}

fn opts(workers: usize) -> EvalOptions {
    EvalOptions { workers: Some(workers), ..EvalOptions::default() }
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn random_member(rng: &mut ChaCha8Rng, case: TractableCase) -> SymSig {
    let mut r = || random_nonneg_rat(rng, 4);
    match case {
        TractableCase::Degenerate => {
            let (u0, u1) = (r(), r());
            SymSig::new(vec![pow(&u0, 3), pow(&u0, 2) * &u1, &u0 * pow(&u1, 2), pow(&u1, 3)])
        }
        TractableCase::GeneralizedEquality => SymSig::new(vec![r(), int(0), int(0), r()]),
        TractableCase::Affine => {
            let l = r();
            if l.numer().bit(0) {
                SymSig::new(vec![l.clone(), int(0), l, int(0)])
            } else {
                SymSig::new(vec![int(0), l.clone(), int(0), l])
            }
        }
    }
}

fn oracle_equivalence(o: &EvalOptions) -> Run {
    let mut run = Run::new();
    let mut rng = rng(101);
    let mut count = 0;
    for case in [TractableCase::Degenerate, TractableCase::GeneralizedEquality, TractableCase::Affine] {
        for _ in 0..100 {
            let f = random_member(&mut rng, case);
            let n = rng.gen_range(1..=3);
            let g = random_pure_grid(&mut rng, n, &f.to_tensor());
            let want = g.holant_with(o).expect("within cap");
            let inst = TractableInstance::new(g, f.clone()).expect("pure instance");
            let direct = solve_case(&inst, case).expect("member of the case");
            let opts = SolveOptions { fallback: false, eval: o.clone() };
            let dispatched = solve_with(&inst, &opts).expect("dispatch").value().cloned();
            run.check(direct == want && dispatched.as_ref() == Some(&want), || {
                format!("{} on {f}: solver {direct}, brute force {want}", case.name())
            });
            run.record(&want);
            count += 1;
        }
    }
    let _ = write!(run.summary, "{count} grids (≤ 9 edges), solver = brute force");
    run
}

fn classifier_conformance(_: &EvalOptions) -> Run {
    let mut run = Run::new();
    let mut rng = rng(102);
    let points = |special: &[Rat], rng: &mut ChaCha8Rng| -> Vec<Rat> {
        let mut v = special.to_vec();
        while v.len() < 24 {
            v.push(rat(rng.gen_range(1..=15), rng.gen_range(1..=7)));
        }
        v
    };
    let fp = |f: SymSig| -> bool {
        classify_ternary(&f).expect("nonnegative signature").verdict == Verdict::Fp
    };
    let mut total = 0;
    let mut family = |run: &mut Run, name: &str, f: &dyn Fn(&Rat) -> (SymSig, bool), pts: Vec<Rat>| {
        for p in pts {
            let (sig, want) = f(&p);
            let got = fp(sig.clone());
            run.check(got == want, || format!("{name} at {p}: classified FP = {got}, expected {want}"));
            run.record(format!("{sig} {got}"));
            total += 1;
        }
    };
    let (z, one) = (int(0), int(1));
    family(&mut run, "[1,a,a,1]", &|a| (SymSig::new(vec![int(1), a.clone(), a.clone(), int(1)]), a.is_zero() || a.is_one()), points(&[z.clone(), one.clone()], &mut rng));
    family(&mut run, "[1,0,b,1]", &|b| (SymSig::new(vec![int(1), int(0), b.clone(), int(1)]), b.is_zero()), points(&[z.clone()], &mut rng));
    family(&mut run, "[1,0,b,0]", &|b| (SymSig::new(vec![int(1), int(0), b.clone(), int(0)]), b.is_zero() || b.is_one()), points(&[z.clone(), one.clone()], &mut rng));
    let cs: Vec<Rat> = points(&[], &mut rng).into_iter().filter(|c| !c.is_one()).collect();
    for (i, c) in cs.iter().take(4).enumerate() {
        let c = c.clone();
        let bs = points(if i == 0 { &[] } else { std::slice::from_ref(&z) }, &mut rng);
        let bs = if i == 0 { std::iter::once(z.clone()).chain(bs).collect() } else { bs };
        family(&mut run, "[1,0,b,c]", &|b| (SymSig::new(vec![int(1), int(0), b.clone(), c.clone()]), b.is_zero()), bs);
    }
    family(&mut run, "[0,1,b,0]", &|b| (SymSig::new(vec![int(0), int(1), b.clone(), int(0)]), false), points(&[], &mut rng));
    family(&mut run, "[0,1,0,0]", &|_| (SymSig::from_ints(&[0, 1, 0, 0]), false), vec![z]);
    let _ = write!(run.summary, "{total} points over 6 families, zero mismatches required");
    run
}

fn displayed_formulas(_: &EvalOptions) -> Run {
    let mut run = Run::new();
    let eq = hadamard_transform(&SymSig::equality(3), HadamardKind::H, Side::Covariant);
    run.check(eq == SymSig::from_ints(&[2, 0, 2, 0]), || format!("H(=3) = {eq}"));
    let f = hadamard_transform(&SymSig::from_ints(&[0, 1, 1, 0]), HadamardKind::Inverse, Side::Contravariant);
    let want = SymSig::from_ints(&[3, 0, -1, 0]).scale(&rat(1, 4));
    run.check(f == want, || format!("[0,1,1,0] H^-1 = {f}"));
    run.record(&eq);
    run.record(&f);
    let mut rng = rng(103);
    for _ in 0..100 {
        let x: Vec<Rat> = (0..4).map(|_| holant_core::grid::topology::random_rat(&mut rng, 6)).collect();
        let f = SymSig::new(x.clone());
        let t = g1(&f.to_tensor()).contract().expect("G1 contracts").0;
        let m = t.as_mat2().expect("binary");
        let want = Mat2::new(x[0].clone(), x[2].clone(), x[1].clone(), x[3].clone());
        run.check(m == want, || format!("G1 of {f}"));
        run.record(format!("{:?}", m.entries()));
    }
    run.summary.push_str("H(=3), [0,1,1,0](H^-1), 100 G1 contractions");
    run
}

fn jordan_and_interpolation(o: &EvalOptions) -> Run {
    let mut run = Run::new();
    let mut rng = rng(104);
    let mut done = 0;
    let mut interp = [0usize; 3];
    while done < 100 {
        let a = rat(rng.gen_range(1..=9), rng.gen_range(1..=4));
        let b = random_nonneg_rat(&mut rng, 6);
        let c = random_nonneg_rat(&mut rng, 6);
        if b.is_zero() && c.is_one() {
            continue; // Δ = 0
        }
        let f = SymSig::new(vec![int(1), a.clone(), b.clone(), c]);
        let m = f.straddled().expect("x0 = 1");
        let j = jordan(&m).expect("a > 0, Δ > 0");
        run.check(j.reconstruct() == m.map(|r| QuadExt::from_rat(r.clone())), || format!("P·J·P⁻¹ of {f}"));
        run.check(&j.x * &j.y == QuadExt::from_rat(&b / &a), || format!("xy of {f}"));
        run.check(!j.x.is_negative() && !j.y.is_negative(), || format!("sign of x, y for {f}"));
        run.record(format!("{} {} {}", j.delta, j.x, j.y));

        let n = done % 3;
        let mut g = random_pure_grid(&mut rng, 1, &f.to_tensor());
        let mut ds = Vec::new();
        for _ in 0..n {
            let e = rng.gen_range(0..g.edges().len());
            ds.push(g.subdivide_edge(e, Tensor::from_mat2(&Mat2::identity())));
        }
        let want = substitute_d(&g, &ds, &f).expect("placeholders").holant_with(o).expect("within cap");
        match interpolate_holant_with_d(&g, &ds, &f, o) {
            Ok(r) => {
                run.check(r.value == want, || format!("interpolation of {f} with {n} placeholders"));
                run.record(&r.value);
            }
            Err(e) => run.check(false, || format!("interpolation of {f}: {e}")),
        }
        interp[n] += 1;
        done += 1;
    }
    let _ = write!(
        run.summary,
        "100 Jordan forms; interpolation with 0/1/2 placeholders on {}/{}/{} grids",
        interp[0], interp[1], interp[2]
    );
    run
}

fn factorization(_: &EvalOptions) -> Run {
    let mut run = Run::new();
    let mut rng = rng(105);
    // Only lhs ⇒ rhs holds in general: on c = ab with b ≠ a² the right side
    // vanishes while the eigenvector condition fails. Every converse
    // failure must lie on that family.
    let (mut lhs, mut rhs, mut converse) = (0, 0, 0);
    for _ in 0..500 {
        let mut p = || rat(rng.gen_range(1..=12), rng.gen_range(1..=6));
        let (a, b, c) = (p(), p(), p());
        match verify_factorization_identity(&a, &b, &c) {
            Ok(chk) => {
                lhs += chk.lhs as usize;
                rhs += chk.rhs as usize;
                run.check(!chk.lhs || chk.rhs, || format!("({a},{b},{c}): lhs without rhs"));
                if chk.rhs && !chk.lhs {
                    converse += 1;
                    let explained = c == &a * &b && b != pow(&a, 2);
                    run.check(explained, || format!("({a},{b},{c}): rhs without lhs off the c = ab family"));
                }
                run.record(format!("{} {}", chk.lhs, chk.rhs));
            }
            Err(e) => run.check(false, || format!("({a},{b},{c}): {e}")),
        }
    }
    let reports = verify_case_identities(105, 200).expect("identity suites run");
    for r in &reports {
        run.check(r.ok(), || r.to_string());
        run.record(r);
    }
    let _ = write!(
        run.summary,
        "500 triples: lhs ⇒ rhs on all (lhs true {lhs}, rhs true {rhs}); converse fails on {converse}, all on c = ab, b ≠ a²; {} identity suites × 200",
        reports.len()
    );
    run
}

fn split_identity(o: &EvalOptions) -> Run {
    let mut run = Run::new();
    let mut rng = rng(106);
    let shapes = [(3, 3, 2, 1), (2, 3, 2, 1), (3, 2, 1, 1), (3, 2, 2, 2), (3, 3, 3, 2)];
    let mut count = 0;
    for (m, n, nf, ng) in shapes {
        for _ in 0..10 {
            let f = SymSig::new((0..=m).map(|_| random_nonneg_rat(&mut rng, 3)).collect()).to_tensor();
            let g = SymSig::new((0..=n).map(|_| random_nonneg_rat(&mut rng, 3) + int(1)).collect()).to_tensor();
            let x = random_nonneg_rat(&mut rng, 3);
            let y = random_nonneg_rat(&mut rng, 3);
            let ux = unary(int(1), x.clone());
            let mut grid = SignatureGrid::new();
            let mut lp = Vec::new();
            for _ in 0..nf {
                let v = grid.add_left(f.clone());
                lp.extend((0..m).map(|s| Port::new(v, s)));
            }
            let mut rp = Vec::new();
            for _ in 0..ng {
                let v = grid.add_right(g.clone());
                rp.extend((0..n).map(|s| Port::new(v, s)));
            }
            lp.shuffle(&mut rng);
            for (i, &p) in lp.iter().enumerate() {
                if i < rp.len() {
                    grid.connect(p, rp[i]);
                } else {
                    let u = grid.add_vertex(ux.clone(), vec![Polarity::R]);
                    grid.connect(p, Port::new(u, 0));
                }
            }
            let r = split_reduction(&grid, &g, &x, &y).expect("balanced instance");
            let original = grid.holant_with(o).expect("within cap");
            let transformed = r.grid.holant_with(o).expect("within cap");
            let want = &r.factor * pow(&original, r.copies);
            run.check(transformed == want, || format!("shape {:?}: {transformed} vs {want}", (m, n, nf, ng)));
            run.record(&transformed);
            count += 1;
        }
    }
    let _ = write!(run.summary, "{count} instances, Holant(transformed) = factor · Holant^s");
    run
}

fn planar_stack(o: &EvalOptions) -> Run {
    let mut run = Run::new();
    let mut rng = rng(107);
    let mut negative = 0;
    for i in 0..200 {
        let n = 1 + i % 12;
        let g = random_planar_graph(&mut rng, n, 0.6, -3..=3);
        negative += g.edges().iter().any(|e| e.weight.is_negative()) as usize;
        let got = count_pm(&g).expect("planar");
        let want = count_pm_bruteforce(&g);
        run.check(got == want, || format!("graph {i} ({n} vertices): {got} vs {want}"));
        run.record(&got);
    }
    let a = matchgate_signature(&mg_a()).expect("matchgate");
    let b = matchgate_signature(&mg_b()).expect("matchgate");
    run.check(a == SymSig::from_ints(&[3, 0, -1, 0]).scale(&rat(1, 4)).to_tensor(), || format!("MG_A = {a}"));
    run.check(b == SymSig::from_ints(&[2, 0, 2, 0]).to_tensor(), || format!("MG_B = {b}"));
    let f = SymSig::from_ints(&[0, 1, 1, 0]);
    let mut largest = 0;
    for i in 0..50 {
        let pairs = 1 + i % 8;
        let (g, side) = random_cubic_bipartite(&mut rng, pairs);
        let pg = planar_grid_from_graph(&g, &side, &f).expect("cubic bipartite");
        let (reduced, scalar) = holographic_reduce(&pg).expect("planar instance");
        let got = &scalar * count_pm(&reduced).expect("planar");
        let want = pg.grid().holant_with(o).expect("within cap");
        run.check(got == want, || format!("instance {i} ({pairs}+{pairs}): {got} vs {want}"));
        run.record(&got);
        largest = largest.max(pairs);
    }
    let _ = write!(
        run.summary,
        "200 graphs ≤ 12 vertices ({negative} with negative weights), MG_A/MG_B, 50 holographic instances ≤ {largest}+{largest}"
    );
    run
}

fn random_system(rng: &mut ChaCha8Rng, n: usize) -> SetSystem {
    loop {
        let mut pts: Vec<i64> = (0..n as i64).flat_map(|x| [x, x, x]).collect();
        pts.shuffle(rng);
        let sets = pts.chunks(3).map(|c| [c[0], c[1], c[2]]).collect();
        let s = SetSystem::new((0..n as i64).collect(), sets);
        if s.validate().is_ok() {
            return s;
        }
    }
}

fn brute_covers(s: &SetSystem) -> Rat {
    let mut total = 0i64;
    for mask in 0u32..1 << s.sets.len() {
        let ok = s.ground.iter().all(|x| {
            let hits: usize = (0..s.sets.len())
                .filter(|j| mask >> j & 1 == 1)
                .map(|j| s.sets[j].iter().filter(|y| *y == x).count())
                .sum();
            hits == 1
        });
        total += ok as i64;
    }
    int(total)
}

fn exact_cover(_: &EvalOptions) -> Run {
    let mut run = Run::new();
    let one = SetSystem::new(vec![1, 2, 3], vec![[1, 2, 3]; 3]);
    let two = SetSystem::new((1..=6).collect(), vec![[1, 2, 3], [4, 5, 6], [1, 2, 3], [4, 5, 6], [1, 2, 3], [4, 5, 6]]);
    for (s, want) in [(&one, 3), (&two, 9)] {
        let got = count_exact_covers(s).expect("3-regular");
        run.check(got == int(want) && brute_covers(s) == int(want), || format!("worked instance: {got}, expected {want}"));
        run.record(&got);
    }
    let mut rng = rng(108);
    for i in 0..20 {
        let n = if i % 4 == 0 { 3 } else { 6 };
        let s = random_system(&mut rng, n);
        let got = count_exact_covers(&s).expect("3-regular");
        let want = brute_covers(&s);
        run.check(got == want, || format!("{s:?}: {got} vs {want}"));
        run.record(&got);
    }
    run.summary.push_str("worked instances 3 and 9, 20 random systems ≤ 6 sets");
    run
}

type Criterion = (&'static str, fn(&EvalOptions) -> Run, Option<Duration>);

const CRITERIA: [Criterion; 8] = [
    ("oracle equivalence per tractable case", oracle_equivalence, Some(LIMIT_ORACLE)),
    ("classifier conformance on parameter families", classifier_conformance, None),
    ("displayed formulas", displayed_formulas, None),
    ("Jordan form and D-interpolation", jordan_and_interpolation, Some(LIMIT_INTERP)),
    ("factorization identity and case identities", factorization, None),
    ("split reduction end to end", split_identity, None),
    ("planar stack", planar_stack, Some(LIMIT_PLANAR)),
    ("exact cover counts", exact_cover, None),
];

fn line(i: usize, name: &str, ok: bool, detail: &str) {
    println!("[{}] {}. {name}: {detail}", if ok { "PASS" } else { "FAIL" }, i);
}

fn main() -> ExitCode {
    let mut all_ok = true;
    let mut digests = Vec::new();
    let serial = opts(1);
    for (i, (name, f, limit)) in CRITERIA.iter().enumerate() {
        let start = Instant::now();
        let run = f(&serial);
        let took = start.elapsed();
        let in_time = limit.map_or(true, |l| took <= l);
        let mut detail = format!("{}; {:.2}s", run.summary, took.as_secs_f64());
        if let Some(l) = limit {
            let _ = write!(detail, " (limit {}s)", l.as_secs());
        }
        let ok = run.ok && in_time;
        line(i + 1, name, ok, &detail);
        all_ok &= ok;
        digests.push(run.digest());
    }

    let start = Instant::now();
    let mut mismatched = Vec::new();
    for (workers, label) in [(1, "rerun"), (4, "4 workers")] {
        let o = opts(workers);
        for (i, (_, f, _)) in CRITERIA.iter().enumerate() {
            if f(&o).digest() != digests[i] {
                mismatched.push(format!("{} ({label})", i + 1));
            }
        }
    }
    let ok = mismatched.is_empty();
    let detail = if ok {
        format!("criteria 1-8 identical on rerun and with 4 workers; {:.2}s", start.elapsed().as_secs_f64())
    } else {
        format!("outputs differ for {}", mismatched.join(", "))
    };
    line(9, "determinism", ok, &detail);
    all_ok &= ok;

    if all_ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
