//! Acceptance gate: one PASS/FAIL line per criterion, exit status 1 if any
//! criterion fails. Tolerances are exact; runtime budgets are pinned below.

use std::collections::BTreeMap;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use optcurve::catalog;
use optcurve_core::bounds::{full_audit, AuditStatus, EXPECTED_FLAGS};
use optcurve_core::catalog::Catalog;
use optcurve_core::curves::{
    ec_count, hyperelliptic_count, superelliptic_count, CountingField, EllipticModel, HyperellipticModel,
    SuperellipticModel,
};
use optcurve_core::ff::{enumerate_discriminant_fields, FieldElement, FieldSpec};
use optcurve_core::hermitian::{
    group_closure, herm_validate, is_automorphism, is_automorphism_columns, projection_degree, verify_relations,
    HermitianForm,
};
use optcurve_core::poly::Poly;
use optcurve_core::search::{
    check_elliptic_row, check_genus2_row, genus4_obstruction_scan, genus4_scan_sextic, glue_at, planted_genus4_sextic,
    superelliptic_scan, ScanOutcome, SuperellipticOptions,
};
use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

const SEED: u64 = 0x6f70_7463_7572_7665;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

fn criterion(n: u32, name: &str, budget: Duration, f: impl FnOnce() -> Outcome) -> bool {
    let t = Instant::now();
    let o = f();
    let elapsed = t.elapsed();
    let in_budget = elapsed <= budget;
    let pass = o.pass && in_budget;
    println!(
        "[{}] {n}. {name} ({:.2} s, budget {} s{}): {}",
        if pass { "PASS" } else { "FAIL" },
        elapsed.as_secs_f64(),
        budget.as_secs(),
        if in_budget { "" } else { ", over budget" },
        o.detail
    );
    pass
}

fn field(q: u64) -> CountingField {
    CountingField::with_order(q).expect("fixture field")
}

fn elliptic_fixtures(cat: &Catalog) -> Outcome {
    let table = cat.fixtures(-11).expect("d = -11 fixtures");
    let mut failing = Vec::new();
    for row in &table.elliptic {
        let r = check_elliptic_row(&field(row.q), row).expect("row checks");
        for (side, c, e) in [("maximal", &r.maximal, &r.erratum_maximal), ("minimal", &r.minimal, &r.erratum_minimal)] {
            if !(c.pass && c.isomorphic_to_found) {
                let erratum = match e {
                    Some(e) => format!(
                        ", erratum {:?} {}",
                        e.model,
                        if e.pass && e.isomorphic_to_found { "passes" } else { "fails" }
                    ),
                    None => String::new(),
                };
                failing.push(format!("q={} {side} {:?} counts {:?} != {}{erratum}", r.q, c.model, c.count, c.expected));
            }
        }
    }
    let n = table.elliptic.len();
    outcome(
        failing.is_empty() && n == 11,
        format!(
            "{n} rows; {} printed models off: {}",
            failing.len(),
            if failing.is_empty() { "none".into() } else { failing.join("; ") }
        ),
    )
}

fn genus2_fixtures(cat: &Catalog) -> Outcome {
    let table = cat.fixtures(-11).expect("d = -11 fixtures");
    let mut failing = Vec::new();
    for row in &table.genus2 {
        let r = check_genus2_row(&field(row.q), row).expect("row checks");
        if !r.listed.pass {
            let erratum = r
                .erratum
                .as_ref()
                .map(|e| format!(", erratum {:?} {}", e.sextic, if e.pass { "passes" } else { "fails" }))
                .unwrap_or_default();
            failing.push(format!(
                "q={} {:?} counts {:?} != {}{erratum}",
                r.q, r.listed.sextic, r.listed.count, r.listed.expected
            ));
        }
    }
    let cf = field(23);
    let k = cf.spec();
    let e = EllipticModel::new(k, k.from_int(1), k.from_int(11)).unwrap();
    let glued = glue_at(&cf, &e, k.from_int(1), k.from_int(19)).map(|g| g.even_coefficients());
    let glue_ok = glued == Ok([1, 12, 3, 10]);
    let n = table.genus2.len();
    outcome(
        failing.is_empty() && glue_ok && n == 11,
        format!(
            "{n} rows; glue q=23 [1,11;1,19] -> {glued:?}; {} printed sextics off: {}",
            failing.len(),
            if failing.is_empty() { "none".into() } else { failing.join("; ") }
        ),
    )
}

fn genus4_sweep() -> Outcome {
    let mut fields = 0;
    let mut skipped = Vec::new();
    let mut hits = Vec::new();
    let mut slowest_small = Duration::ZERO;
    for d in [-11, -19] {
        for rec in enumerate_discriminant_fields(d, 9_999).unwrap() {
            let t = Instant::now();
            let scan = genus4_obstruction_scan(&field(rec.q)).expect("scan runs");
            if rec.q <= 563 {
                slowest_small = slowest_small.max(t.elapsed());
            }
            match scan.outcome {
                ScanOutcome::Skipped(_) => skipped.push(rec.q),
                _ => fields += 1,
            }
            if !scan.witnesses.is_empty() {
                hits.push(format!("q={} ({} witnesses)", rec.q, scan.witnesses.len()));
            }
        }
    }
    // p = 3 is outside the hypothesis for d = -11; nothing else may be skipped.
    let skip_ok = skipped == [243];
    let mut planted = Vec::new();
    for q in [23, 47, 59, 61] {
        let cf = field(q);
        if let Ok((sextic, _, _)) = planted_genus4_sextic(&cf) {
            let n = genus4_scan_sextic(&cf, &sextic).unwrap().witnesses.len();
            planted.push((q, n));
        }
    }
    let planted_ok = !planted.is_empty() && planted.iter().all(|&(_, n)| n > 0);
    let quick_ok = slowest_small <= Duration::from_secs(10);
    outcome(
        hits.is_empty() && skip_ok && planted_ok && quick_ok,
        format!(
            "{fields} fields scanned, skipped {skipped:?}, witnesses: {}; planted (q, witnesses) {planted:?}; slowest q<=563 {:.3} s",
            if hits.is_empty() { "none".into() } else { hits.join(", ") },
            slowest_small.as_secs_f64()
        ),
    )
}

fn superelliptic() -> Outcome {
    let mut witnesses = 0;
    let mut off = Vec::new();
    let mut paper_ok = true;
    for q in [47, 61, 137] {
        let scan = superelliptic_scan(&field(q), SuperellipticOptions::default());
        witnesses += scan.witnesses.len();
        for (fam, t) in &scan.families {
            let bad = t.residues[3] + t.residues[4];
            if bad > 0 {
                off.push(format!("q={q} {fam:?}: {bad} of {} counts at residue {}", t.models, (q + 1) % 5));
            }
            paper_ok &= t.congruence_violations == 0;
        }
    }
    outcome(
        witnesses == 0 && off.is_empty(),
        format!(
            "witnesses {witnesses}; counts outside 0,1,2 mod 5: {}; every count matches q+1 off q=1 mod 5 and the branch-point residue at q=1 mod 5: {paper_ok}",
            if off.is_empty() { "none".into() } else { off.join("; ") }
        ),
    )
}

fn lattices(cat: &Catalog) -> Outcome {
    let mut problems = Vec::new();
    let mut dims = BTreeMap::new();
    let mut column_form = 0;
    let mut gens_total = 0;
    for e in &cat.lattices {
        *dims.entry(e.dim).or_insert(0) += 1;
        let tag = format!("dim{}/{}", e.dim, e.name);
        let h = e.form().unwrap();
        let v = herm_validate(&h).unwrap();
        if !v.hermitian || v.det != Some(1) || !v.positive_definite {
            problems.push(format!("{tag}: form {v:?}"));
        }
        let gens = e.generator_matrices().unwrap();
        for (name, g) in &gens {
            gens_total += 1;
            if !is_automorphism(&h, g).unwrap() {
                problems.push(format!("{tag}: {name} not an isometry"));
            }
            column_form += usize::from(is_automorphism_columns(&h, g).unwrap());
        }
        for r in verify_relations(&e.relations, &gens, e.discriminant, e.dim).iter().filter(|r| !r.pass) {
            problems.push(format!("{tag}: relation `{}` fails", r.relation));
        }
        let list: Vec<_> = gens.into_iter().collect();
        match group_closure(&h, &list) {
            Ok(c) => {
                if !c.has_klein_four {
                    problems.push(format!("{tag}: no Klein four-group"));
                }
                if c.has_order_5 {
                    problems.push(format!("{tag}: order-5 element"));
                }
            }
            Err(err) => problems.push(format!("{tag}: closure {err}")),
        }
    }
    outcome(
        problems.is_empty(),
        format!(
            "{} entries {dims:?}; A H A* = H for generators, A* H A = H holds for {column_form}/{gens_total}; problems: {}",
            cat.lattices.len(),
            if problems.is_empty() { "none".into() } else { problems.join("; ") }
        ),
    )
}

fn projections(cat: &Catalog) -> Outcome {
    let degrees = |name: &str| -> (Vec<i64>, Option<i64>) {
        let h: HermitianForm = cat.form(name).expect("named form").form().unwrap();
        let v = herm_validate(&h).unwrap();
        ((1..=h.dim()).map(|k| projection_degree(&h, k).unwrap()).collect(), v.det)
    };
    let (g2, det2) = degrees("d-11-genus2");
    let (g3, det3) = degrees("d-19-genus3");
    outcome(
        g2 == [2, 2] && g3.first() == Some(&2) && det2 == Some(1) && det3 == Some(1),
        format!("d=-11 genus 2: minors {g2:?} det {det2:?}; d=-19 genus 3: minors {g3:?} det {det3:?}"),
    )
}

fn audits(cat: &Catalog) -> Outcome {
    let findings = full_audit(cat, 10_000).expect("audit runs");
    let group = |prefix: &str| -> (usize, Vec<String>) {
        let sel: Vec<_> = findings.iter().filter(|f| f.claim.starts_with(prefix)).collect();
        let bad = sel.iter().filter(|f| f.status != AuditStatus::Pass).map(|f| f.claim.clone()).collect();
        (sel.len(), bad)
    };
    let (na, bad_a) = group("singh/d=-3/");
    let (nb, bad_b) = group("module-vs-serre/d=-3/");
    let (nc4, bad_c4) = group("no-field/d=-4/");
    let (nc8, bad_c8) = group("no-field/d=-8/");
    let flags: Vec<&str> = findings.iter().filter(|f| f.is_flag()).map(|f| f.claim.as_str()).collect();
    let flags_ok = flags == EXPECTED_FLAGS;
    let sizes_ok = na == 4 * 5 && nb == 4 && nc4 == 4 && nc8 == 3;
    let all_bad: Vec<String> = [bad_a, bad_b, bad_c4, bad_c8].concat();
    outcome(
        sizes_ok && all_bad.is_empty() && flags_ok,
        format!(
            "(a) {na} Singh checks (b) {nb} order checks (c) {} prime checks, failing: {}; (d) flags {flags:?}",
            nc4 + nc8,
            if all_bad.is_empty() { "none".into() } else { all_bad.join(", ") }
        ),
    )
}

fn odd_orders() -> Vec<u64> {
    (3..=101).step_by(2).filter(|&q| FieldSpec::with_order(q).is_ok()).collect()
}

fn brute_roots(k: &FieldSpec, c: FieldElement, e: u64) -> u64 {
    k.elements().filter(|&z| k.pow(z, e) == c).count() as u64
}

fn random_poly(rng: &mut ChaCha8Rng, k: &FieldSpec, deg: usize) -> Poly {
    let q = k.q();
    let mut c: Vec<u64> = (0..deg).map(|_| rng.next_u64() % q).collect();
    c.push(1 + rng.next_u64() % (q - 1));
    Poly::from_u64(k, &c)
}

fn counting_oracles() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let (mut hyper, mut sup, mut mismatches) = (0u32, 0u32, Vec::new());
    for q in odd_orders() {
        let cf = field(q);
        let k = cf.spec();
        let mut here = 0;
        while here < 20 {
            let deg = 1 + (rng.next_u64() % 6) as usize;
            let f = random_poly(&mut rng, k, deg);
            let Ok(h) = HyperellipticModel::new(k, f.clone()) else { continue };
            here += 1;
            hyper += 1;
            let affine: u64 = k.elements().map(|x| brute_roots(k, f.eval(k, x), 2)).sum();
            let inf = if deg % 2 == 1 { 1 } else { brute_roots(k, f.lc(), 2) };
            if hyperelliptic_count(&cf, &h).map(|c| c.count) != Ok(affine + inf) {
                mismatches.push(format!("hyperelliptic q={q} {:?}", f.coeffs()));
            }
        }
        here = 0;
        while here < 20 {
            let gamma = k.element(1 + rng.next_u64() % (q - 1)).unwrap();
            let nfac = 1 + (rng.next_u64() % 2) as usize;
            let mut factors: Vec<(Poly, u8)> = Vec::new();
            for _ in 0..nfac {
                let deg = 1 + (rng.next_u64() % 3) as usize;
                let nu = 1 + (rng.next_u64() % 4) as u8;
                factors.push((random_poly(&mut rng, k, deg), nu));
            }
            let Ok(s) = SuperellipticModel::new(k, gamma, factors.clone()) else { continue };
            let rhs = |x| factors.iter().fold(gamma, |acc, (f, nu)| k.mul(acc, k.pow(f.eval(k, x), *nu as u64)));
            let affine: u64 = k.elements().map(|x| brute_roots(k, rhs(x), 5)).sum();
            let wdeg: usize = factors.iter().map(|(f, nu)| f.degree().unwrap() * *nu as usize).sum();
            let lc = factors.iter().fold(gamma, |acc, (f, nu)| k.mul(acc, k.pow(f.lc(), *nu as u64)));
            let inf = if !wdeg.is_multiple_of(5) { 1 } else { brute_roots(k, lc, 5) };
            match superelliptic_count(&cf, &s) {
                Ok(c) if c.count == affine + inf => {}
                // A count outside the Weil interval is a modelling error, not a refusal.
                _ => mismatches.push(format!("superelliptic q={q} gamma={gamma:?}")),
            }
            here += 1;
            sup += 1;
        }
        for x in k.elements() {
            for y in k.elements() {
                if cf.chi(k.mul(x, y)) != cf.chi(x) * cf.chi(y) {
                    mismatches.push(format!("chi q={q}"));
                }
            }
        }
        let u = cf.non_square();
        for a in k.elements() {
            for b in k.elements() {
                let Ok(e) = EllipticModel::new(k, a, b) else { continue };
                let n = ec_count(&cf, &e).unwrap().count + ec_count(&cf, &e.twist(k, u)).unwrap().count;
                if n != 2 * q + 2 {
                    mismatches.push(format!("twist q={q} ({a:?}, {b:?})"));
                }
            }
        }
    }
    mismatches.truncate(10);
    outcome(
        hyper >= 500 && sup >= 500 && mismatches.is_empty(),
        format!(
            "{} fields, {hyper} hyperelliptic and {sup} superelliptic instances, exhaustive chi and twist sums; mismatches: {}",
            odd_orders().len(),
            if mismatches.is_empty() { "none".into() } else { mismatches.join(", ") }
        ),
    )
}

fn main() -> ExitCode {
    let cat = match catalog::embedded() {
        Ok(c) => c,
        Err(e) => {
            println!("[FAIL] catalog: {e}");
            return ExitCode::FAILURE;
        }
    };
    let secs = Duration::from_secs;
    let results = [
        criterion(1, "elliptic fixtures d=-11", secs(10), || elliptic_fixtures(&cat)),
        criterion(2, "genus-2 fixtures d=-11", secs(30), || genus2_fixtures(&cat)),
        criterion(3, "genus-4 obstruction sweep q<10^4", secs(30 * 60), genus4_sweep),
        criterion(4, "quintic superelliptic scan d=-19", secs(5 * 60), superelliptic),
        criterion(5, "appendix lattices", secs(5), || lattices(&cat)),
        criterion(6, "projection degrees", secs(5), || projections(&cat)),
        criterion(7, "bounds audits", secs(60), || audits(&cat)),
        criterion(8, "counting oracles q<=101", secs(2 * 60), counting_oracles),
    ];
    let failed = results.iter().filter(|&&p| !p).count();
    println!("acceptance: {} passed, {failed} failed", results.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
