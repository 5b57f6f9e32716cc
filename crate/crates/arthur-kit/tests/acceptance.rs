//! Acceptance run: one line per criterion, nonzero exit when any criterion fails.

mod common;

use std::collections::BTreeSet;
use std::process::Command;
use std::time::{Duration, Instant};

use arthur_kit::cli::run_suite;
use arthur_kit::component_group::{CentralizerDescriptor, SignVector, Which};
use arthur_kit::endoscopy::{check_multiplicativity, decompose, transfer_coefficients};
use arthur_kit::exponents::{is_dominant, leq_g, leq_n, merge_endoscopic, merge_levi, xi_plus};
use arthur_kit::groth_engine::{AtomLevel, Config, Convention, Engine};
use arthur_kit::packet_enum::{involution_relabel, packet, stable_sum, Level};
use arthur_kit::param_core::{
    int, rat, ArthurParameter, Cuspidal, Family, GroupDescriptor, JordanBlock, QuadTag, Rational, Sign,
};
use common::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const LIMIT_CENTRALIZER: Duration = Duration::from_secs(1);
const LIMIT_PACKETS: Duration = Duration::from_secs(1);
const LIMIT_ELEMENTARY: Duration = Duration::from_secs(5);
const LIMIT_INDEPENDENCE: Duration = Duration::from_secs(30);
const LIMIT_VERIFY: Duration = Duration::from_secs(120);
const RANDOM_ELEMENTARY: usize = 10;
const MAX_ELEMENTARY_BLOCKS: usize = 5;
const MIN_INDEPENDENCE_CATALOG: usize = 5;
const RANDOM_DOMINANCE: usize = 1000;
const MAX_DOMINANCE_RANK: usize = 6;
const MAX_GRID_RANK: usize = 4;
const MAX_GROUP_ORDER: u64 = 16;

type Outcome = Result<String, String>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(start: Instant, limit: Duration) -> Result<(), String> {
    let t = start.elapsed();
    ensure(t < limit, || format!("took {t:?}, limit {limit:?}"))
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let psi = catalog_entry("psi_C");
    let d = CentralizerDescriptor::build(&psi).map_err(|e| e.to_string())?;
    let got = (d.order(Which::SSigma0), d.ker_alpha().len(), d.x_group().len());
    let o = group_counts(&psi);
    ensure(got == (4, 2, 2), || format!("library gives {got:?}"))?;
    ensure((o.order_s_sigma0, o.order_ker_alpha, o.order_x) == (4, 2, 2), || {
        format!("oracle gives {o:?}")
    })?;
    within(start, LIMIT_CENTRALIZER)?;
    Ok(format!("|S|=4 |ker|=2 |X|=2 in {:?}", start.elapsed()))
}

fn sizes(psi: &ArthurParameter, level: Level) -> Result<Vec<usize>, String> {
    let d = CentralizerDescriptor::build(psi).map_err(|e| e.to_string())?;
    d.characters(Which::SSigma0)
        .iter()
        .map(|e| {
            packet(psi, level, Some(e))
                .map(|p| p.elements.len())
                .map_err(|e| e.to_string())
        })
        .collect()
}

fn criterion_2() -> Outcome {
    let start = Instant::now();
    let b = catalog_entry("psi_B");
    let per_eps = sizes(&b, Level::ClassicalSigma0)?;
    ensure(per_eps == vec![1, 2], || {
        format!("psi_B classical sizes {per_eps:?} for ++, --")
    })?;
    let oracle: Vec<usize> = classes_by_character(&b).into_values().collect();
    ensure(oracle == vec![1, 2], || format!("oracle sizes {oracle:?}"))?;
    let sim = packet(&b, Level::Similitude, None).map_err(|e| e.to_string())?;
    ensure(sim.elements.len() == 3, || {
        format!("psi_B similitude {}", sim.elements.len())
    })?;
    ensure(sim.elements.iter().all(|e| e.restriction.len() == 1), || {
        "psi_B fibers".into()
    })?;
    let c = catalog_entry("psi_C");
    let cls = packet(&c, Level::ClassicalSigma0, None).map_err(|e| e.to_string())?;
    ensure(cls.elements.len() == 4, || {
        format!("psi_C classical {}", cls.elements.len())
    })?;
    let sim = packet(&c, Level::Similitude, None).map_err(|e| e.to_string())?;
    ensure(sim.elements.len() == 2, || {
        format!("psi_C similitude {}", sim.elements.len())
    })?;
    ensure(sim.elements.iter().all(|e| e.restriction.len() == 2), || {
        "psi_C fibers".into()
    })?;
    within(start, LIMIT_PACKETS)?;
    Ok(format!("psi_B 1+2 / 3, psi_C 4 / 2 in {:?}", start.elapsed()))
}

fn random_elementary(rng: &mut ChaCha8Rng) -> ArthurParameter {
    let labels = [
        Cuspidal::trivial_character("rho1"),
        Cuspidal::quadratic_character("chi"),
    ];
    loop {
        let k = rng.gen_range(1..=MAX_ELEMENTARY_BLOCKS);
        let mut used: BTreeSet<(usize, i64)> = BTreeSet::new();
        let mut blocks = Vec::new();
        while blocks.len() < k {
            let r = rng.gen_range(0..2);
            let a = rng.gen_range(0..7);
            if !used.insert((r, a)) {
                continue;
            }
            let zeta = if rng.gen_bool(0.5) { Sign::Plus } else { Sign::Minus };
            blocks.push((
                JordanBlock::from_abz(labels[r].clone(), int(a), int(a), zeta).unwrap(),
                1,
            ));
        }
        let n: u64 = blocks.iter().map(|(b, _)| b.dim()).sum();
        let det = ArthurParameter::new(GroupDescriptor::sp(0), blocks.clone()).determinant();
        let group = if n % 2 == 1 {
            if !det.is_trivial() {
                continue;
            }
            GroupDescriptor::sp(((n - 1) / 2) as u32)
        } else {
            GroupDescriptor::so_even((n / 2) as u32, det)
        };
        let p = ArthurParameter::new(group, blocks);
        if p.validate().is_ok() {
            return p;
        }
    }
}

fn criterion_3() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for _ in 0..RANDOM_ELEMENTARY {
        let psi = random_elementary(&mut rng);
        ensure(psi.classify().elementary, || format!("{psi:?} is not elementary"))?;
        let per = sizes(&psi, Level::ClassicalSigma0)?;
        let chars = group_counts(&psi).characters;
        let total: usize = per.iter().sum();
        ensure(per.iter().all(|&n| n == 1) && total == chars, || {
            format!("sizes {per:?}, {chars} characters")
        })?;
    }
    within(start, LIMIT_ELEMENTARY)?;
    Ok(format!(
        "{RANDOM_ELEMENTARY} parameters, one member per character, in {:?}",
        start.elapsed()
    ))
}

fn two_reducible(psi: &ArthurParameter) -> bool {
    psi.is_ddr() && psi.blocks.iter().filter(|(b, _)| b.is_reducible()).count() >= 2
}

fn criterion_4() -> Outcome {
    let start = Instant::now();
    let entries: Vec<_> = catalog().into_iter().filter(|(_, p)| two_reducible(p)).collect();
    ensure(entries.len() >= MIN_INDEPENDENCE_CATALOG, || {
        format!("only {} entries", entries.len())
    })?;
    let mut checks = 0;
    for (name, psi) in &entries {
        let r = run_suite("independence", psi, Convention::FROZEN).map_err(|e| e.to_string())?;
        ensure(r.passed, || format!("{name}: {:?}", r.failures))?;
        checks += r.checks;
    }
    // a perturbed engine must be caught
    let (_, psi) = &entries[0];
    let mut caught = false;
    for eps in CentralizerDescriptor::build(psi).unwrap().characters(Which::SSigma0) {
        let mut e = Engine::new(Config {
            fault: true,
            ..Config::at(AtomLevel::Classical)
        });
        let atom = e.atom_of(psi, &eps).unwrap();
        caught |= !e.verify_block_independence(&atom).unwrap().equal;
    }
    ensure(caught, || "sign fault went unnoticed".into())?;
    within(start, LIMIT_INDEPENDENCE)?;
    Ok(format!(
        "{} parameters, {checks} comparisons, fault detected, in {:?}",
        entries.len(),
        start.elapsed()
    ))
}

fn criterion_5() -> Outcome {
    let mut everywhere: Vec<Convention> = Convention::ALL.to_vec();
    for (name, psi) in catalog() {
        if !psi.is_ddr() {
            continue;
        }
        let chars = CentralizerDescriptor::build(&psi).unwrap().characters(Which::SSigma0);
        for conv in Convention::ALL {
            for (level, pl) in [
                (AtomLevel::Classical, Level::ClassicalSigma0),
                (AtomLevel::Similitude, Level::SimilitudeSigma0),
            ] {
                let mut e = Engine::new(Config {
                    convention: conv,
                    ..Config::at(level)
                });
                for eps in &chars {
                    let atom = e.atom_of(&psi, eps).unwrap();
                    let predicted = e.resolved_count(&atom).map_err(|e| e.to_string())?;
                    let counted = classes_or_packet(&psi, pl, eps)?;
                    if predicted != counted {
                        everywhere.retain(|c| *c != conv);
                        if conv == Convention::FROZEN {
                            return Err(format!("{name} eps={eps}: {predicted} vs {counted}"));
                        }
                    }
                }
            }
        }
    }
    ensure(everywhere == vec![Convention::FROZEN], || {
        format!("conventions passing: {everywhere:?}")
    })?;
    Ok(format!("only {} agrees on the catalog", Convention::FROZEN.id()))
}

/// Classical counts come from the brute-force oracle, similitude counts from the library.
fn classes_or_packet(psi: &ArthurParameter, level: Level, eps: &SignVector) -> Result<u64, String> {
    if level == Level::ClassicalSigma0 {
        return Ok(classes_by_character(psi).get(&eps.mask).copied().unwrap_or(0) as u64);
    }
    packet(psi, level, Some(eps))
        .map(|p| p.elements.len() as u64)
        .map_err(|e| e.to_string())
}

fn criterion_6() -> Outcome {
    let mut terms = 0;
    for (name, psi) in catalog() {
        let r = run_suite("infchar", &psi, Convention::FROZEN).map_err(|e| e.to_string())?;
        ensure(r.passed, || format!("{name}: {:?}", r.failures))?;
        terms += r.checks;
    }
    Ok(format!("{terms} terms checked"))
}

fn criterion_7() -> Outcome {
    let mut count = 0;
    for (name, psi) in catalog() {
        let names: Vec<String> = psi.rho_names().into_iter().collect();
        for m in 1..1u32 << names.len() {
            let rhos: BTreeSet<String> = names
                .iter()
                .enumerate()
                .filter(|(i, _)| m >> i & 1 == 1)
                .map(|(_, n)| n.clone())
                .collect();
            let dual = psi.sharp_dual(&rhos).map_err(|e| e.to_string())?;
            ensure(dual.sharp_dual(&rhos).unwrap() == psi, || {
                format!("{name}: sharp twice")
            })?;
            for level in [Level::ClassicalSigma0, Level::Similitude] {
                let p = packet(&psi, level, None).map_err(|e| e.to_string())?;
                let once = involution_relabel(&p, &rhos).map_err(|e| e.to_string())?;
                let twice = involution_relabel(&once, &rhos).map_err(|e| e.to_string())?;
                ensure(twice.to_value() == p.to_value(), || format!("{name}: relabel twice"))?;
                let fibers = |q: &arthur_kit::packet_enum::Packet| {
                    q.elements
                        .iter()
                        .map(|e| (e.label.clone(), e.restriction.len()))
                        .collect::<Vec<_>>()
                };
                ensure(fibers(&once) == fibers(&p), || format!("{name}: fibers move"))?;
                count += 1;
            }
        }
    }
    Ok(format!("{count} packet round trips"))
}

fn grid(n: usize, values: &[Rational]) -> Vec<Vec<Rational>> {
    let mut out = vec![Vec::new()];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|v| values.iter().map(move |x| [v.clone(), vec![*x]].concat()))
            .collect();
    }
    out
}

fn decreasing(v: &[Rational]) -> bool {
    v.windows(2).all(|w| w[0] >= w[1])
}

fn gl_dominated(a: &[Rational], b: &[Rational]) -> bool {
    let mut acc = int(0);
    for (x, y) in a.iter().zip(b) {
        acc += y - x;
        if acc < int(0) {
            return false;
        }
    }
    acc == int(0)
}

fn criterion_8() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(88);
    for i in 0..RANDOM_DOMINANCE {
        let n = rng.gen_range(1..=MAX_DOMINANCE_RANK);
        let a: Vec<Rational> = (0..n)
            .map(|_| rat(rng.gen_range(-6..=6), rng.gen_range(1..=2)))
            .collect();
        let b: Vec<Rational> = a.iter().map(|x| x + rat(rng.gen_range(-2..=3), 2)).collect();
        let family = if i % 2 == 0 { Family::Sp } else { Family::SoEven };
        let g = GroupDescriptor {
            family,
            rank: n as u32,
            discriminant: QuadTag::trivial(),
        };
        ensure(leq_g(&a, &b, &g) == oracle_leq_g(&a, &b, family), || {
            format!("leq_G {a:?} {b:?} {family}")
        })?;
        ensure(leq_n(&a, &b, &g) == oracle_leq_n(&a, &b, g.big_n() as usize), || {
            format!("leq_N {a:?} {b:?}")
        })?;
    }
    let half: Vec<Rational> = (-4..=4).map(|k| rat(k, 2)).collect();
    let mut pairs = 0u64;
    for n in 1..=MAX_GRID_RANK {
        let so = GroupDescriptor::so_even(n as u32, QuadTag::trivial());
        let dom: Vec<Vec<Rational>> = grid(n, &half).into_iter().filter(|v| is_dominant(v, &so)).collect();
        for x in &dom {
            for y in &dom {
                if leq_g(x, y, &so) {
                    pairs += 1;
                    let (xp, yp) = (xi_plus(x, &so).unwrap(), xi_plus(y, &so).unwrap());
                    ensure(leq_g(&xp, &yp, &so), || format!("monotonicity {x:?} {y:?}"))?;
                    ensure(xp != yp || x == y, || format!("injectivity {x:?} {y:?}"))?;
                }
            }
        }
    }
    let nonneg: Vec<Rational> = (0..=3).map(|k| rat(k, 2)).collect();
    let signed: Vec<Rational> = (-2..=2).map(|k| rat(k, 2)).collect();
    for n1 in 1..MAX_GRID_RANK {
        for n2 in 0..=MAX_GRID_RANK - n1 {
            let g = GroupDescriptor::sp((n1 + n2) as u32);
            let ones: Vec<_> = grid(n1, &nonneg).into_iter().filter(|v| decreasing(v)).collect();
            let twos: Vec<_> = grid(n2, &nonneg).into_iter().filter(|v| decreasing(v)).collect();
            let gls: Vec<_> = grid(n1, &signed).into_iter().filter(|v| decreasing(v)).collect();
            let f1 = GroupDescriptor::sp(n1 as u32);
            let f2 = GroupDescriptor::sp(n2 as u32);
            for (a1, a2, b1, b2) in ones
                .iter()
                .flat_map(|a| twos.iter().map(move |b| (a, b)))
                .flat_map(|(a1, a2)| {
                    ones.iter()
                        .flat_map(|b| twos.iter().map(move |c| (b, c)))
                        .map(move |(b1, b2)| (a1, a2, b1, b2))
                })
            {
                if leq_n(a1, b1, &f1) && leq_n(a2, b2, &f2) {
                    pairs += 1;
                    let (x, y) = (merge_endoscopic(a1, a2), merge_endoscopic(b1, b2));
                    ensure(leq_n(&x, &y, &g), || format!("endoscopic {a1:?}{a2:?} {b1:?}{b2:?}"))?;
                    ensure(x != y || (a1 == b1 && a2 == b2), || {
                        format!("endoscopic injectivity {a1:?}{a2:?} {b1:?}{b2:?}")
                    })?;
                }
            }
            for (a1, a2, b1, b2) in gls
                .iter()
                .flat_map(|a| twos.iter().map(move |b| (a, b)))
                .flat_map(|(a1, a2)| {
                    gls.iter()
                        .flat_map(|b| twos.iter().map(move |c| (b, c)))
                        .map(move |(b1, b2)| (a1, a2, b1, b2))
                })
            {
                if gl_dominated(a1, b1) && leq_n(a2, b2, &f2) {
                    pairs += 1;
                    let (x, y) = (merge_levi(a1, a2), merge_levi(b1, b2));
                    ensure(leq_n(&x, &y, &g), || format!("Levi {a1:?}{a2:?} {b1:?}{b2:?}"))?;
                    ensure(x != y || (a1 == b1 && a2 == b2), || {
                        format!("Levi injectivity {a1:?}{a2:?} {b1:?}{b2:?}")
                    })?;
                }
            }
        }
    }
    Ok(format!(
        "{RANDOM_DOMINANCE} random comparisons agree with the cone oracle, {pairs} grid pairs"
    ))
}

fn criterion_9() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut params: Vec<ArthurParameter> = catalog().into_iter().map(|(_, p)| p).collect();
    params.extend((0..20).map(|_| random_elementary(&mut rng)));
    let mut checked = 0;
    for psi in params {
        let d = CentralizerDescriptor::build(&psi).map_err(|e| e.to_string())?;
        for which in [Which::SSigma0, Which::S] {
            if d.order(which) > MAX_GROUP_ORDER {
                continue;
            }
            let chars = d.characters(which);
            for a in &chars {
                for b in &chars {
                    for m in [1, 2] {
                        let got = d.multiplicity(a, b, m, which).map_err(|e| e.to_string())?;
                        let want = if a == b { m as u64 } else { 0 };
                        ensure(got == want, || format!("m({a}, {b}) = {got}, expected {want}"))?;
                        checked += 1;
                    }
                }
            }
        }
    }
    Ok(format!("{checked} pairs"))
}

fn criterion_10() -> Outcome {
    let mut checked = 0;
    for (name, psi) in catalog() {
        let d = CentralizerDescriptor::build(&psi).map_err(|e| e.to_string())?;
        let copies: usize = d.blocks.iter().map(|(_, m)| *m as usize).sum();
        let chars = d.characters(Which::SSigma0);
        for s in 0..1u64 << copies {
            let s = SignVector::new(s, copies);
            let (_, _, datum) = decompose(&psi, &s).map_err(|e| format!("{name} s={s}: {e}"))?;
            ensure(datum.n_i + datum.n_ii == psi.group.big_n(), || {
                format!("{name} s={s}: N")
            })?;
            ensure(datum.eta_i.mul(&datum.eta_ii) == psi.group.discriminant, || {
                format!("{name} s={s}: eta")
            })?;
            for eps in &chars {
                for s2 in 0..1u64 << copies {
                    let s2 = SignVector::new(s2, copies);
                    let ok = check_multiplicativity(&psi, eps, &datum, &s2).map_err(|e| e.to_string())?;
                    ensure(ok, || format!("{name} s={s} eps={eps} s'={s2}"))?;
                    checked += 1;
                }
            }
        }
        for level in [Level::ClassicalSigma0, Level::Similitude] {
            let one = SignVector::trivial(copies);
            let t = transfer_coefficients(&psi, &one, level).map_err(|e| e.to_string())?;
            let p = packet(&psi, level, None).map_err(|e| e.to_string())?;
            let st = stable_sum(&p, &SignVector::trivial(d.k())).map_err(|e| e.to_string())?;
            ensure(t == st, || format!("{name}: transfer at s = 1"))?;
        }
    }
    Ok(format!("{checked} multiplicativity checks"))
}

fn criterion_11() -> Outcome {
    let exe = env!("CARGO_BIN_EXE_arthur-kit");
    let run = |args: &[&str]| {
        Command::new(exe)
            .args(args)
            .env_remove("ARTHUR_KIT_CONVENTION")
            .output()
            .map_err(|e| e.to_string())
    };
    for (name, psi) in catalog() {
        let file = catalog_dir().join(format!("{name}.json")).display().to_string();
        for verb in ["classify", "centralizer", "packet"] {
            let (a, b) = (run(&[verb, &file])?, run(&[verb, &file])?);
            ensure(a.status.success() && a.stdout == b.stdout, || {
                format!("{verb} {name} differs between runs")
            })?;
        }
        let out = run(&["classify", &file])?;
        let v: serde_json::Value = serde_json::from_slice(&out.stdout).map_err(|e| e.to_string())?;
        let back = arthur_kit::param_core::parameter_from_value(&v["parameter"]).map_err(|e| e.to_string())?;
        ensure(back == psi, || format!("{name} does not round-trip"))?;
    }
    let start = Instant::now();
    let out = run(&["verify", &catalog_dir().display().to_string()])?;
    ensure(out.status.code() == Some(0), || {
        format!("verify exited with {:?}", out.status.code())
    })?;
    within(start, LIMIT_VERIFY)?;
    Ok(format!("full verify in {:?}", start.elapsed()))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 11] = [
        ("centralizer cardinalities", criterion_1),
        ("packet enumeration", criterion_2),
        ("elementary bijection", criterion_3),
        ("recursion independence", criterion_4),
        ("decomposition reconciliation", criterion_5),
        ("infinitesimal-character constancy", criterion_6),
        ("involution", criterion_7),
        ("dominance orders and merges", criterion_8),
        ("multiplicity orthogonality", criterion_9),
        ("endoscopic coefficients", criterion_10),
        ("CLI determinism and verify", criterion_11),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let outcome = std::panic::catch_unwind(f).unwrap_or_else(|e| {
            Err(e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default())
        });
        match outcome {
            Ok(detail) => println!("criterion {:>2} PASS  {name}: {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name}: {why}", i + 1);
            }
        }
    }
    println!(
        "acceptance: {} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
