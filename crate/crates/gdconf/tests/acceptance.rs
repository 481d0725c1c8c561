//! Acceptance gate: one test per criterion, each printing a single
//! pass/fail line (visible with `--nocapture`) and asserting the exact
//! facts and time budgets it is responsible for.

use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use gdconf::cend::{
    op_compose, op_lambda_product, word_normalize, word_normalize_alt, Operator, RawLetter,
};
use gdconf::conformal::{
    check_conformal_axioms, locality_n, n_product, quadratic_bracket, render_elem, ConfElem,
};
use gdconf::envelope::{
    abelian_free_ctx, abelian_kernel_witness, current_ctx, novikov_ctx, virasoro_ctx,
};
use gdconf::finite::{
    check_gd_compat, check_lie, check_novikov, gd_from_json, sl2_table, CheckReport, GDAlgebra,
    StructureTable,
};
use gdconf::poisson::free_pd::{free_pd_quotient_rank1, lemma2_certificate};
use gdconf::poisson::rank1::{poly_poisson_rank1, DerivationMode, Rank1Poly, VPow};
use gdconf::poisson::PoissonElem;
use gdconf::rational::rat;
use gdconf::vir::{
    c_report, vir_adjoint_presentation, vir_dependence, vir_images_report, vir_independence,
};
use gdconf::weyl::{operator_to_weyl, weyl_lambda_product, weyl_to_operator};

const SEED: u64 = 20260823;

fn fixture(name: &str) -> String {
    let path = format!("{}/../../fixtures/{name}", env!("CARGO_MANIFEST_DIR"));
    std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("reading {path}: {e}"))
}

fn load(name: &str) -> GDAlgebra {
    gd_from_json(&fixture(name)).unwrap_or_else(|e| panic!("parsing {name}: {e}"))
}

/// Print the verdict line and panic on failure so `cargo test` reports it.
fn verdict(n: u32, what: &str, pass: bool, detail: &str) {
    let s = if pass { "pass" } else { "FAIL" };
    println!("criterion {n} ({what}): {s} — {detail}");
    assert!(pass, "criterion {n} ({what}) failed: {detail}");
}

fn within(budget: Duration, t: Instant, n: u32) {
    let e = t.elapsed();
    assert!(
        e < budget,
        "criterion {n} exceeded its time budget: {e:?} ≥ {budget:?}"
    );
}

const POSITIVE: [&str; 5] = [
    "virasoro.json",
    "novikov-2d.json",
    "cur-sl2.json",
    "cur-solv2.json",
    "abelian.json",
];
const MUTATED: [&str; 3] = [
    "bad/virasoro-broken.json",
    "bad/novikov-2d-broken.json",
    "bad/cur-sl2-broken.json",
];

fn gd_checks(gd: &GDAlgebra) -> [CheckReport; 3] {
    [
        check_novikov(&gd.novikov),
        check_lie(&gd.lie),
        check_gd_compat(gd),
    ]
}

#[test]
fn criterion_01_axiom_suite() {
    let t = Instant::now();
    for name in POSITIVE {
        let gd = load(name);
        for r in gd_checks(&gd) {
            assert!(r.is_ok(), "{name}: GD axiom check failed: {r:?}");
        }
        assert!(
            check_conformal_axioms(&gd).is_ok(),
            "{name}: conformal axioms disagree with GD checks"
        );
    }
    for name in MUTATED {
        let gd = load(name);
        let gd_ok = gd_checks(&gd).iter().all(|r| r.is_ok());
        assert!(!gd_ok, "{name}: mutated fixture passed the GD checks");
        let has_witness = gd_checks(&gd).iter().any(|r| {
            matches!(r, CheckReport::Fail { defect, .. } if !defect.is_empty())
        });
        assert!(has_witness, "{name}: failure carries no witness");
        // the conformal axioms must fail exactly when the GD axioms do
        assert!(
            !check_conformal_axioms(&gd).is_ok(),
            "{name}: conformal axioms disagree with GD checks"
        );
    }
    within(Duration::from_secs(5), t, 1);
    verdict(
        1,
        "axiom suite",
        true,
        &format!(
            "{} positive and {} mutated fixtures, conformal ⟺ GD on all, in {:?}",
            POSITIVE.len(),
            MUTATED.len(),
            t.elapsed()
        ),
    );
}

#[test]
fn criterion_02_virasoro_bracket() {
    let gd = load("virasoro.json");
    let v = ConfElem::basis(1, 0);
    let br = quadratic_bracket(&gd, &v, &v).unwrap();
    let rendered = render_elem(&br.coords, &gd.basis_names);
    assert_eq!(rendered, "(T + 2*λ)·v");
    let p0 = n_product(&gd, &v, &v, 0).unwrap();
    assert_eq!(render_elem(&p0.coords, &gd.basis_names), "T·v");
    let p1 = n_product(&gd, &v, &v, 1).unwrap();
    assert_eq!(render_elem(&p1.coords, &gd.basis_names), "2·v");
    for n in 2..6 {
        assert!(n_product(&gd, &v, &v, n).unwrap().is_zero());
    }
    assert_eq!(locality_n(&gd, &v, &v).unwrap(), 2);
    verdict(
        2,
        "Virasoro bracket",
        true,
        "[v λ v] = (T + 2*λ)·v, products (T·v, 2·v, 0, …), locality 2",
    );
}

fn rank1_novikov_table() -> StructureTable {
    StructureTable::from_entries(1, &[(0, 0, 0, rat(1))])
}

#[test]
fn criterion_03_residuals_zero() {
    let t = Instant::now();
    let vir = virasoro_ctx().unwrap();
    assert!(vir.lemma1_residual(0, 0).unwrap().is_zero());

    let cur = current_ctx(sl2_table(), vec!["e".into(), "f".into(), "h".into()]).unwrap();
    for i in 0..3 {
        for j in 0..3 {
            assert!(
                cur.lemma1_residual(i, j).unwrap().is_zero(),
                "current(sl2) residual ({i},{j}) nonzero"
            );
        }
    }

    let nov = novikov_ctx(rank1_novikov_table(), vec!["v".into()], 4, 4).unwrap();
    assert!(
        nov.lemma1_residual(0, 0).unwrap().is_zero(),
        "rank-1 universal-envelope residual nonzero"
    );
    within(Duration::from_secs(60), t, 3);
    verdict(
        3,
        "residuals",
        true,
        &format!(
            "empty operators for Virasoro, all 9 sl2 pairs, and rank-1 Novikov (4,4) in {:?}",
            t.elapsed()
        ),
    );
}

#[test]
fn criterion_04_locality() {
    let vir = virasoro_ctx().unwrap();
    let cur = current_ctx(sl2_table(), vec!["e".into(), "f".into(), "h".into()]).unwrap();
    let nov = novikov_ctx(rank1_novikov_table(), vec!["v".into()], 4, 4).unwrap();
    let mut pairs = 0;
    for (name, cert) in [
        ("virasoro", vir.locality_certificate().unwrap()),
        ("current-sl2", cur.locality_certificate().unwrap()),
        ("novikov-rank1", nov.locality_certificate().unwrap()),
    ] {
        assert!(
            cert.is_ok(),
            "{name}: locality certificate failed: {:?}",
            cert.failures
        );
        pairs += cert.pairs;
    }
    verdict(
        4,
        "locality ≤ 3",
        true,
        &format!("λ-degree ≤ 2 and exact λ² coefficient on {pairs} basis pairs"),
    );
}

#[test]
fn criterion_05_virasoro_envelope_evidence() {
    let t = Instant::now();
    let images = vir_images_report(5, 5, 5);
    assert!(images.is_ok(), "image mismatches: {:?}", images.mismatches);
    assert!(images.constructive_checked > 0);

    let indep = vir_independence(5, 5, 5);
    assert!(indep.full_rank, "independence rank-deficient: {indep:?}");

    let dep = vir_dependence();
    assert!(dep.verified);
    assert_eq!(dep.alpha, "1");
    assert_eq!(dep.beta, "1/2");
    within(Duration::from_secs(60), t, 5);
    verdict(
        5,
        "Virasoro envelope evidence",
        true,
        &format!(
            "{} iterated images match closed forms, {} operators independent, \
             φ(v (1) v) = φ(v) + 1/2·T·φ(v (2) v), in {:?}",
            images.constructive_checked,
            indep.operators,
            t.elapsed()
        ),
    );
}

#[test]
fn criterion_06_adjoint_presentation() {
    let indep = vir_independence(5, 5, 5);
    let adj = vir_adjoint_presentation(5, 5, 5);
    assert!(adj.full_rank, "adjoint family rank-deficient: {adj:?}");
    assert_eq!(adj.operators, indep.operators);
    verdict(
        6,
        "adjoint presentation",
        true,
        &format!("{} operators, independent within the same bounds", adj.operators),
    );
}

#[test]
fn criterion_07_abelian_kernel_witness() {
    let t = Instant::now();
    let ctx = abelian_free_ctx(6, 4).unwrap();
    let report = abelian_kernel_witness(&ctx).unwrap();
    assert!(report.phi_nonzero, "φ(v (0) (v (2) v)) rendered as zero");
    assert!(
        report.failures.is_empty(),
        "actions outside the ideal: {:?}",
        report.failures
    );
    assert!(report.basis_checked > 0);
    within(Duration::from_secs(120), t, 7);
    verdict(
        7,
        "abelian kernel witness",
        true,
        &format!(
            "nonzero φ-image annihilates all {} basis elements of the (6,4) window in {:?}",
            report.basis_checked,
            t.elapsed()
        ),
    );
}

#[test]
fn criterion_08_bracket_relation_certificates() {
    let p = free_pd_quotient_rank1(5, 3).unwrap();
    // {v, v^(k+1)}·v for k ≤ 5, plus the degree-one corollary on the basis
    let single = lemma2_certificate(&p, &[1, 2, 3, 4, 5, 6], 1).unwrap();
    assert!(single.is_ok(), "failures: {:?}", single.failures);
    // nested brackets of depth ≤ 2 with indices ≤ 3
    let nested = lemma2_certificate(&p, &[0, 1, 2, 3], 2).unwrap();
    assert!(nested.is_ok(), "failures: {:?}", nested.failures);
    assert!(single.nested_checked >= 6);
    assert!(nested.corollary_checked > 0);
    verdict(
        8,
        "ideal-membership certificates",
        true,
        &format!(
            "{} bracket relations and {} degree-one consequences in the ideal at (5,3)",
            single.nested_checked + nested.nested_checked,
            nested.corollary_checked
        ),
    );
}

// --- criterion 9: seeded property suites -----------------------------------

fn kv() -> Rank1Poly {
    poly_poisson_rank1(DerivationMode::Ddv)
}

/// A seeded random normal-form operator over k[v]; `with_ads` allows
/// adjoint letters (dropped for Weyl-comparable expressions).
fn random_op(rng: &mut ChaCha8Rng, p: &Rank1Poly, with_ads: bool) -> Operator<VPow> {
    let word = random_word(rng, with_ads);
    word_normalize(p, &word).unwrap()
}

fn random_word(rng: &mut ChaCha8Rng, with_ads: bool) -> Vec<RawLetter<VPow>> {
    let len = rng.gen_range(1..=3);
    (0..len)
        .map(|_| {
            let pow = VPow(rng.gen_range(0..=2));
            match rng.gen_range(0..if with_ads { 3 } else { 2 }) {
                0 => RawLetter::L(PoissonElem::basis(pow)),
                1 => RawLetter::D,
                _ => RawLetter::Ad(PoissonElem::basis(pow)),
            }
        })
        .collect()
}

#[test]
fn criterion_09_property_suites() {
    // conformal skew-symmetry and Jacobi, exact on all fixture tuples
    for name in POSITIVE {
        assert!(check_conformal_axioms(&load(name)).is_ok(), "{name}");
    }

    let p = kv();

    // operator composition is associative on 100 seeded random triples
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    for i in 0..100 {
        let (a, b, c) = (
            random_op(&mut rng, &p, true),
            random_op(&mut rng, &p, true),
            random_op(&mut rng, &p, true),
        );
        let lhs = op_compose(&p, &op_compose(&p, &a, &b).unwrap(), &c).unwrap();
        let rhs = op_compose(&p, &a, &op_compose(&p, &b, &c).unwrap()).unwrap();
        assert_eq!(lhs, rhs, "associativity defect on triple {i}");
    }

    // the two normalization strategies agree on 200 seeded random words
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 1);
    for i in 0..200 {
        let word = random_word(&mut rng, true);
        let a = word_normalize(&p, &word).unwrap();
        let b = word_normalize_alt(&p, &word).unwrap();
        assert_eq!(a, b, "confluence defect on word {i}");
    }

    // the Weyl oracle agrees with the generic rewriter on 100 seeded
    // rank-one expressions (λ-products of Ad-free operators)
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 2);
    for i in 0..100 {
        let a = random_op(&mut rng, &p, false);
        let b = random_op(&mut rng, &p, false);
        let generic = op_lambda_product(&p, &a, &b).unwrap();
        let weyl = weyl_lambda_product(
            &operator_to_weyl(&a).unwrap(),
            &operator_to_weyl(&b).unwrap(),
        );
        assert_eq!(weyl_to_operator(&weyl), generic, "Weyl mismatch on pair {i}");
    }

    verdict(
        9,
        "property suites",
        true,
        &format!(
            "conformal axioms on {} fixtures; 100 associativity triples, \
             200 confluence words, 100 Weyl comparisons at seed {SEED}",
            POSITIVE.len()
        ),
    );
}

#[test]
fn criterion_10_ci_coefficients() {
    #[derive(serde::Deserialize)]
    struct Golden {
        bound_l: u32,
        oracle: Vec<Vec<String>>,
        formula_matches: bool,
    }
    let golden: Golden =
        serde_json::from_str(&fixture("golden/ci_coefficients.json")).unwrap();
    let report = c_report(golden.bound_l);
    assert_eq!(report.oracle, golden.oracle, "oracle drifted from golden file");
    assert_eq!(report.formula_matches, golden.formula_matches);
    verdict(
        10,
        "c_i coefficients",
        true,
        &format!(
            "Weyl oracle matches the golden file for l ≤ {}; combinatorial formula match: {}",
            golden.bound_l, report.formula_matches
        ),
    );
}
