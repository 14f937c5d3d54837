//! Acceptance gate: one test per acceptance criterion, each ending in a
//! single PASS line. The tests share a lock so the timed budgets measure a
//! single criterion at a time.

use std::collections::HashMap;
use std::process::Command;
use std::sync::{Mutex, MutexGuard};
use std::time::{Duration, Instant};

use fwsa::category::{all_vectors, compose, Category, CategoryTag, LabeledSet, Morphism};
use fwsa::cert::{
    bound_recursion_check, certify_generation, eta_rank, factor_check_v00, generation_profile,
    restriction_witness, spanning_rank_from_smaller, RestrictionMode,
};
use fwsa::cyclo::Cyclo;
use fwsa::group::FiniteAbelianGroup;
use fwsa::hilbert::{default_candidates, fit_rational, truncated_series};
use fwsa::linalg::{ExactMatrix, SparseVec};
use fwsa::module::Module;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

static GATE: Mutex<()> = Mutex::new(());

/// Serializes the criteria so wall-clock budgets are not polluted by
/// sibling tests; a poisoned lock still gates the survivors.
fn gate() -> MutexGuard<'static, ()> {
    GATE.lock().unwrap_or_else(|e| e.into_inner())
}

fn z2() -> FiniteAbelianGroup {
    FiniteAbelianGroup::new(vec![2]).unwrap()
}

fn z3() -> FiniteAbelianGroup {
    FiniteAbelianGroup::new(vec![3]).unwrap()
}

/// Every legal object up to the given size, in every labeling order.
fn all_objects(cat: &Category, max_size: usize) -> Vec<LabeledSet> {
    let order = cat.group().order();
    let mut out = Vec::new();
    for n in 0..=max_size {
        for labels in all_vectors(order, n) {
            let x = LabeledSet::new(labels);
            if cat.validate_object(&x).is_ok() {
                out.push(x);
            }
        }
    }
    out
}

fn random_object(rng: &mut ChaCha8Rng, group: &FiniteAbelianGroup, max_size: usize) -> LabeledSet {
    let n = rng.gen_range(0..=max_size);
    LabeledSet::new((0..n).map(|_| rng.gen_range(0..group.order())).collect())
}

/// A random pointed surjection out of `x`; the target labels are forced by
/// the fiber sums, so the result is valid by construction.
fn random_morphism_from(
    rng: &mut ChaCha8Rng,
    group: &FiniteAbelianGroup,
    x: &LabeledSet,
) -> (Morphism, LabeledSet) {
    let n = x.size();
    let k = if n == 0 { 0 } else { rng.gen_range(1..=n) };
    let map: Vec<usize> = loop {
        let m: Vec<usize> = (0..n).map(|_| rng.gen_range(0..k)).collect();
        let mut hit = vec![false; k];
        for &y in &m {
            hit[y] = true;
        }
        if hit.iter().all(|&h| h) {
            break m;
        }
    };
    let pointing: Vec<usize> = (0..n).map(|_| rng.gen_range(0..group.order())).collect();
    let mut labels = vec![0usize; k];
    for (i, &y) in map.iter().enumerate() {
        labels[y] = group.add(labels[y], x.label(i));
    }
    (
        Morphism {
            map,
            pointing,
            tgt_size: k,
        },
        LabeledSet::new(labels),
    )
}

/// Checks h o (g o f) == (h o g) o f over every composable triple between
/// objects of size <= max_size; returns the number of triples. Shares each
/// pair composite across the loops so a triple costs two compositions.
fn exhaustive_associativity(cat: &Category, max_size: usize) -> u64 {
    let g = cat.group();
    let objects = all_objects(cat, max_size);
    let mut homs: HashMap<(usize, usize), Vec<Morphism>> = HashMap::new();
    for (i, x) in objects.iter().enumerate() {
        for (j, y) in objects.iter().enumerate() {
            if y.size() <= x.size() {
                let h = cat.hom(x, y);
                if !h.is_empty() {
                    homs.insert((i, j), h);
                }
            }
        }
    }
    let mut checked = 0u64;
    for (&(yi, zi), hom_yz) in &homs {
        let incoming: Vec<_> = homs
            .iter()
            .filter(|(&(_, j), _)| j == yi)
            .map(|(&(i, _), hs)| (i, hs))
            .collect();
        let outgoing: Vec<_> = homs
            .iter()
            .filter(|(&(j, _), _)| j == zi)
            .map(|(&(_, w), hs)| (w, hs))
            .collect();
        for gm in hom_yz {
            let hg_by_target: Vec<(&Vec<Morphism>, Vec<Morphism>)> = outgoing
                .iter()
                .map(|&(_, hom_zw)| {
                    let hgs = hom_zw.iter().map(|h| compose(g, h, gm).unwrap()).collect();
                    (hom_zw, hgs)
                })
                .collect();
            for &(_, hom_xy) in &incoming {
                for f in hom_xy {
                    let gf = compose(g, gm, f).unwrap();
                    for (hom_zw, hgs) in &hg_by_target {
                        for (h, hg) in hom_zw.iter().zip(hgs) {
                            let left = compose(g, h, &gf).unwrap();
                            let right = compose(g, hg, f).unwrap();
                            assert_eq!(left, right);
                            checked += 1;
                        }
                    }
                }
            }
        }
    }
    checked
}

#[test]
fn criterion_01_composition_laws() {
    let _gate = gate();
    let start = Instant::now();
    let mut exhaustive = 0u64;
    for orders in [vec![2u64], vec![3u64]] {
        let g = FiniteAbelianGroup::new(orders).unwrap();
        let cat = Category::new(g.clone(), CategoryTag::Tws);
        let objects = all_objects(&cat, 3);
        for x in &objects {
            for y in &objects {
                for f in cat.hom(x, y) {
                    let idx = Morphism::identity(&g, x);
                    let idy = Morphism::identity(&g, y);
                    assert_eq!(compose(&g, &f, &idx).unwrap(), f);
                    assert_eq!(compose(&g, &idy, &f).unwrap(), f);
                }
            }
        }
        let checked = exhaustive_associativity(&cat, 3);
        assert!(checked > 1_000, "only {checked} exhaustive triples");
        exhaustive += checked;
    }
    let g = FiniteAbelianGroup::new(vec![2, 2]).unwrap();
    let cat = Category::new(g.clone(), CategoryTag::Tws);
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    for _ in 0..1_000 {
        let x = random_object(&mut rng, &g, 5);
        let (f, y) = random_morphism_from(&mut rng, &g, &x);
        let (gm, z) = random_morphism_from(&mut rng, &g, &y);
        let (h, w) = random_morphism_from(&mut rng, &g, &z);
        let left = compose(&g, &h, &compose(&g, &gm, &f).unwrap()).unwrap();
        let right = compose(&g, &compose(&g, &h, &gm).unwrap(), &f).unwrap();
        assert_eq!(left, right);
        cat.validate_morphism(&left, &x, &w).unwrap();
    }
    let elapsed = start.elapsed();
    assert!(elapsed < Duration::from_secs(60), "took {elapsed:.1?}");
    println!(
        "criterion 1: PASS - identities and associativity, {exhaustive} exhaustive triples \
         over Z2 and Z3 plus 1000 random triples over Z2xZ2, in {elapsed:.1?}"
    );
}

#[test]
fn criterion_02_transition_module_generated_in_degree_one() {
    let _gate = gate();
    let start = Instant::now();
    for group in [z2(), z3()] {
        let m = Module::v0_bar(group);
        let good = certify_generation(&m, 1, 5).unwrap();
        assert!(good.pass, "degree-1 certificate failed: {good:?}");
        assert!(good.records.iter().all(|r| r.coker_dim == 0));
        let bad = certify_generation(&m, 0, 5).unwrap();
        assert!(!bad.pass, "degree-0 claim must fail");
        assert!(
            bad.records
                .iter()
                .any(|r| r.labels.len() == 1 && !r.pass),
            "the failure must already appear at size 1"
        );
        let profile = generation_profile(&m, 5).unwrap();
        assert_eq!(profile.max_degree(), Some(1));
    }
    let elapsed = start.elapsed();
    assert!(elapsed < Duration::from_secs(300), "took {elapsed:.1?}");
    println!(
        "criterion 2: PASS - generation certified in degree 1 and refuted in degree 0 \
         for Z2 and Z3 at truncation 5, in {elapsed:.1?}"
    );
}

#[test]
fn criterion_03_assembly_span_equals_brute_force_span() {
    let _gate = gate();
    let g = z2();
    let cat = Category::new(g.clone(), CategoryTag::Tws);
    let mut modules = vec![Module::v0_bar(g.clone())];
    modules.push(Module::v0_bar(g.clone()).shift(1).unwrap());
    for apex in all_objects(&cat, 2) {
        modules.push(Module::projective(cat.clone(), apex).unwrap());
    }
    let mut compared = 0usize;
    for m in &modules {
        for x in all_objects(&cat, 4) {
            let assembled = eta_rank(m, &x).unwrap();
            let brute = spanning_rank_from_smaller(m, &x).unwrap();
            assert_eq!(assembled, brute, "at {x:?} for {}", m.describe());
            compared += 1;
        }
    }
    println!(
        "criterion 3: PASS - assembly rank equals smaller-target span rank at {compared} \
         module/object pairs over Z2, sizes <= 4"
    );
}

#[test]
fn criterion_04_convolution_of_projectives() {
    let _gate = gate();
    let g = z2();
    let cat = Category::new(g.clone(), CategoryTag::Tws);
    let apexes: Vec<LabeledSet> = (0..=2).flat_map(|n| cat.objects_of_size(n)).collect();
    let probes = all_objects(&cat, 4);
    let mut pairs = 0usize;
    for x in &apexes {
        for y in &apexes {
            let px = Module::projective(cat.clone(), x.clone()).unwrap();
            let py = Module::projective(cat.clone(), y.clone()).unwrap();
            let conv = px.convolve(&py).unwrap();
            let total = x.size() + y.size();
            let profile = generation_profile(&conv, total + 1).unwrap();
            assert_eq!(
                profile.max_degree(),
                Some(total),
                "degree peak for {} * {}",
                px.describe(),
                py.describe()
            );
            let mut union_labels = x.labels().to_vec();
            union_labels.extend_from_slice(y.labels());
            let union = Module::projective(cat.clone(), LabeledSet::new(union_labels)).unwrap();
            for z in &probes {
                assert_eq!(conv.dim(z), union.dim(z), "dims at {z:?}");
            }
            pairs += 1;
        }
    }
    println!(
        "criterion 4: PASS - {pairs} convolution pairs peak at the combined apex size and \
         match the union projective at every object of size <= 4"
    );
}

/// The isotypic projector for the dual label `ell` on M at the zero-labeled
/// object of size n, built from pointing endomorphisms and conjugate
/// character values.
fn isotypic_projector(
    m: &Module,
    n: usize,
    ell: &[usize],
    e: u64,
) -> ExactMatrix {
    let group = m.group().clone();
    let ambient = LabeledSet::zero(n);
    let dim = m.dim(&ambient);
    let chars = group.characters();
    let points = all_vectors(group.order(), n);
    let inv_count = Cyclo::from_i64(e, points.len() as i64).inverse().unwrap();
    let acts: Vec<(ExactMatrix, Cyclo)> = points
        .iter()
        .map(|point| {
            let mor = Morphism {
                map: (0..n).collect(),
                pointing: point.clone(),
                tgt_size: n,
            };
            let mat = m.act(&mor, &ambient, &ambient).unwrap().embed(e).unwrap();
            let mut weight = inv_count.clone();
            for (i, &gi) in point.iter().enumerate() {
                let value = chars[ell[i]].eval_conj(&group, gi).embed(e).unwrap();
                weight = weight.try_mul(&value).unwrap();
            }
            (mat, weight)
        })
        .collect();
    let mut out = ExactMatrix::zero(dim, dim, e);
    for j in 0..dim {
        let mut acc: HashMap<usize, Cyclo> = HashMap::new();
        for (mat, weight) in &acts {
            for (row, value) in mat.column(j) {
                let term = value.try_mul(weight).unwrap();
                match acc.get_mut(row) {
                    Some(cur) => *cur = cur.try_add(&term).unwrap(),
                    None => {
                        acc.insert(*row, term);
                    }
                }
            }
        }
        let mut col: SparseVec = acc.into_iter().filter(|(_, v)| !v.is_zero()).collect();
        col.sort_by_key(|(row, _)| *row);
        out.set_column(j, col);
    }
    out
}

#[test]
fn criterion_05_dual_components_partition_and_project() {
    let _gate = gate();
    let g = z2();
    let cat = Category::new(g.clone(), CategoryTag::FsA);
    for apex_size in 0..=3 {
        let m = Module::projective(cat.clone(), LabeledSet::zero(apex_size)).unwrap();
        let dual = m.fourier().unwrap();
        let e = dual.exponent();
        for n in 0..=4 {
            let ambient = LabeledSet::zero(n);
            let dim = m.dim(&ambient);
            let component_dims: Vec<usize> = all_vectors(g.order(), n)
                .into_iter()
                .map(|ell| dual.dim(&LabeledSet::new(ell)))
                .collect();
            assert_eq!(component_dims.iter().sum::<usize>(), dim);
            if dim == 0 {
                continue;
            }
            let projectors: Vec<ExactMatrix> = all_vectors(g.order(), n)
                .iter()
                .map(|ell| isotypic_projector(&m, n, ell, e))
                .collect();
            let mut rank_total = 0usize;
            for (p, &expected) in projectors.iter().zip(&component_dims) {
                assert_eq!(p.mul(p).unwrap(), *p, "idempotence at n={n}");
                let rank = p.rank();
                assert_eq!(rank, expected, "projector rank vs dual dim at n={n}");
                rank_total += rank;
            }
            assert_eq!(rank_total, dim);
            for (a, pa) in projectors.iter().enumerate() {
                for (b, pb) in projectors.iter().enumerate() {
                    if a != b {
                        assert!(pa.mul(pb).unwrap().is_zero(), "orthogonality at n={n}");
                    }
                }
            }
        }
    }
    println!(
        "criterion 5: PASS - dual component dimensions partition every ambient value for \
         apexes <= 3 at objects <= 4 over Z2, with exactly idempotent orthogonal projectors"
    );
}

#[test]
fn criterion_06_restriction_bounds_certified() {
    let _gate = gate();
    let g = z2();
    let tws = Category::new(g.clone(), CategoryTag::Tws);
    let mut witnesses = 0usize;
    for x in all_objects(&tws, 2) {
        let forget = restriction_witness(&g, &x, RestrictionMode::TwsToFws, 5).unwrap();
        assert!(forget.pass, "pointing-forgetting witness at {x:?}");
        assert_eq!(forget.bound, 2 * x.size());
        assert!(forget.family_size >= 1);
        let composite = restriction_witness(&g, &x, RestrictionMode::FwsToFs, 5).unwrap();
        assert!(composite.pass, "composite witness at {x:?}");
        assert_eq!(composite.bound, 4 * x.size());
        witnesses += 2;
    }
    println!(
        "criterion 6: PASS - {witnesses} restriction witnesses certify generation in degree \
         <= 2|X| and <= 4|X| for every apex of size <= 2 over Z2 at truncation 5"
    );
}

#[test]
fn criterion_07_quotient_factorization() {
    let _gate = gate();
    let r2 = factor_check_v00(&z2(), 4);
    assert!(r2.pass, "factorization over Z2: {r2:?}");
    assert!(!r2.records.is_empty());
    let r3 = factor_check_v00(&z3(), 3);
    assert!(r3.pass, "factorization over Z3: {r3:?}");
    assert!(!r3.records.is_empty());
    println!(
        "criterion 7: PASS - quotient factorization verified over Z2 to size 4 and Z3 to size 3"
    );
}

#[test]
fn criterion_08_recursive_bound_table() {
    let _gate = gate();
    let table = bound_recursion_check(20, 20);
    assert!(table.pass(), "violations: {:?}", table.violations);
    assert_eq!(table.value(0, 1), 1);
    assert_eq!(table.value(1, 0), 5);
    for i in 0..=20 {
        for g in 0..=20 {
            if (i, g) != (0, 0) {
                assert!(
                    table.value(i, g) <= (g + 5 * i) as u64,
                    "f({i},{g}) exceeds the linear bound"
                );
            }
        }
    }
    println!(
        "criterion 8: PASS - recursion stays within g+5i on the 20x20 grid off the origin, \
         with f(0,1)=1 and f(1,0)=5"
    );
}

#[test]
fn criterion_09_series_fits_and_closed_forms() {
    let _gate = gate();
    let trivial = FiniteAbelianGroup::trivial();
    let fs = Category::new(trivial.clone(), CategoryTag::Fs);
    let p2 = Module::projective(fs, LabeledSet::zero(2)).unwrap();
    let series = truncated_series(&p2, 12, false);
    let outcome = fit_rational(&series, &default_candidates(&trivial, 2), 8, 3).unwrap();
    let fit = outcome.fitted().expect("surjection counts fit");
    let mut factors: Vec<String> = fit.factors.iter().map(|f| f.to_string()).collect();
    factors.sort();
    assert_eq!(factors, vec!["1-2t0".to_string(), "1-t0".to_string()]);
    let numerator: Vec<(Vec<usize>, Cyclo)> = fit
        .numerator
        .ordered_entries()
        .into_iter()
        .map(|(k, v)| (k.clone(), v.clone()))
        .collect();
    assert_eq!(numerator, vec![(vec![2], Cyclo::from_i64(1, 2))]);
    assert!(fit.verified_guard >= 3);
    assert_eq!(fit.expand().unwrap(), series);

    let bivariate = truncated_series(&Module::v0_bar(z2()), 10, false);
    let outcome = fit_rational(&bivariate, &default_candidates(&z2(), 4), 2, 3).unwrap();
    let fit = outcome.fitted().expect("bivariate transition series fits");
    let expanded = fit.expand().unwrap();
    // The candidate scales come from character values, so the expansion may
    // live in a larger cyclotomic field than the integer series it refits.
    assert_eq!(expanded, bivariate.embed(expanded.exponent()).unwrap());

    let coin = Module::v0_bar(z2()).coinvariants().unwrap();
    let fws = Category::new(z2(), CategoryTag::Fws);
    for x in all_objects(&fws, 5) {
        let expected = usize::from(x.size() >= 1 && x.total(&z2()) == 0);
        assert_eq!(coin.dim(&x), expected, "coinvariants dim at {x:?}");
    }
    println!(
        "criterion 9: PASS - surjection series fits 2t^2/((1-t)(1-2t)) at truncation 12, \
         the bivariate transition series re-expands exactly at truncation 10, and \
         coinvariant dimensions match the closed form through size 5"
    );
}

/// Runs the bundled binary and returns stdout; panics if the exit status
/// differs from the expectation.
fn run_cli(args: &[&str], expect_success: bool) -> String {
    let out = Command::new(env!("CARGO_BIN_EXE_fwsa"))
        .args(args)
        .env_remove("FWSA_FORMAT")
        .output()
        .expect("binary runs");
    assert_eq!(
        out.status.success(),
        expect_success,
        "unexpected exit for {args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).expect("utf-8 output")
}

/// Rewrites the elapsed-time line of a JSON report so runs are comparable.
fn redact_elapsed(report: &str) -> String {
    report
        .lines()
        .map(|line| {
            if line.trim_start().starts_with("\"elapsed_ms\"") {
                "    \"elapsed_ms\": X".to_string()
            } else {
                line.to_string()
            }
        })
        .collect::<Vec<_>>()
        .join("\n")
}

#[test]
fn criterion_10_reports_are_deterministic() {
    let _gate = gate();
    let json_invocations: Vec<Vec<&str>> = vec![
        vec![
            "hilbert", "--group", "Z2", "--module", "v0bar", "--truncation", "10", "--fit",
        ],
        vec![
            "profile", "--group", "Z2", "--module", "conv:ppx:1:ppx:0", "--max-size", "4",
        ],
        vec!["gencert", "--group", "Z3", "--module", "v0bar", "--claim", "1", "--max-size", "4"],
        vec!["factor-check", "--group", "Z2", "--max-size", "3"],
        vec![
            "act", "--group", "Z2", "--module", "v0bar", "--src", "1,1", "--dst", "0", "--map",
            "0,0", "--pointing", "0,1",
        ],
    ];
    let mut runs = 0usize;
    for args in &json_invocations {
        let first = redact_elapsed(&run_cli(args, true));
        assert!(first.contains("\"payload\""));
        for _ in 0..2 {
            assert_eq!(redact_elapsed(&run_cli(args, true)), first, "args {args:?}");
        }
        runs += 3;
    }
    let csv_invocations: Vec<Vec<&str>> = vec![
        vec!["objects", "--group", "Z2", "--max-size", "3", "--format", "csv"],
        vec!["bounds", "--imax", "6", "--gmax", "6", "--format", "csv"],
    ];
    for args in &csv_invocations {
        let first = run_cli(args, true);
        for _ in 0..2 {
            assert_eq!(run_cli(args, true), first, "args {args:?}");
        }
        runs += 3;
    }
    println!(
        "criterion 10: PASS - {runs} runs across 7 invocations produced byte-identical payloads"
    );
}
