//! `gdconf` — exact checks for Gel'fand–Dorfman algebras, their quadratic
//! conformal algebras, and operator embeddings over differential Poisson
//! envelopes.
//!
//! Exit codes: 0 all checks pass, 1 a check was falsified, 2 usage or
//! parse error, 3 a truncation bound was too small for the computation.

use clap::{Parser, Subcommand, ValueEnum};
use gdconf::cend::render_operator;
use gdconf::conformal::{
    check_conformal_axioms, locality_n, n_product, quadratic_bracket, render_elem,
};
use gdconf::envelope::{
    abelian_free_ctx, abelian_kernel_witness, current_ctx, novikov_ctx, virasoro_ctx,
    EmbeddingContext, EnvelopeError,
};
use gdconf::finite::{
    check_gd_compat, check_lie, check_novikov, gd_from_json, CheckReport, GDAlgebra,
    StructureTable,
};
use gdconf::mpoly::{lam_var, t_var, MPoly, Var};
use gdconf::parse::parse_elem;
use gdconf::poisson::free_pd::{free_pd_quotient_rank1, lemma2_certificate};
use gdconf::poisson::{DiffPoisson, PoissonError};
use gdconf::report::{Report, Timer};
use gdconf::vir::{c_report, vir_adjoint_presentation, vir_dependence, vir_images_report, vir_independence};
use gdconf::weyl::{render_weyl, tau_weyl, weyl_lambda_product, weyl_product_at, WeylOp};
use num_traits::One;
use std::process::ExitCode;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Backend {
    Generic,
    Weyl,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Parser)]
#[command(name = "gdconf", version, about = "Exact Gel'fand–Dorfman / conformal algebra checks")]
struct Cli {
    #[command(subcommand)]
    command: Cmd,

    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,

    /// Seed for randomized sweeps; recorded in every report.
    #[arg(long, global = true, default_value_t = 20260823)]
    seed: u64,
}

#[derive(Subcommand)]
enum Cmd {
    /// Verify the Novikov, Lie, compatibility, and conformal axioms of a
    /// structure-constant file.
    Check {
        /// Path to a JSON structure-constant file.
        path: String,
    },
    /// Print [a λ b], all n-products, and the locality bound.
    Bracket {
        path: String,
        elem_a: String,
        elem_b: String,
    },
    /// Print a single n-product.
    Nprod {
        path: String,
        elem_a: String,
        elem_b: String,
        n: u32,
    },
    /// Embed L(V) into operators over an automatically chosen differential
    /// Poisson envelope and certify zero residuals and locality ≤ 3.
    Envelope {
        path: String,
        /// Derivative-order truncation for universal Novikov envelopes.
        #[arg(long, default_value_t = 4)]
        order_bound: u32,
        /// Product-degree truncation for universal Novikov envelopes.
        #[arg(long, default_value_t = 4)]
        degree_bound: u32,
        /// Word-length bound for the reported operator span.
        #[arg(long, default_value_t = 1)]
        word_bound: u32,
        /// Operator model: the generic rewriter, or the Weyl algebra
        /// (rank-1 polynomial envelopes only).
        #[arg(long, value_enum, default_value_t = Backend::Generic)]
        backend: Backend,
    },
    /// Certify the Virasoro envelope evidence: iterated basis images vs
    /// closed forms, independence ranks, and the locality-2 dependence.
    Vir {
        #[arg(default_value_t = 5)]
        bound_s: u32,
        #[arg(default_value_t = 5)]
        bound_q: u32,
        #[arg(default_value_t = 5)]
        bound_l: u32,
    },
    /// Exhibit the nonzero kernel element for the rank-1 abelian algebra
    /// over the free envelope modulo (v·v′).
    Abelian {
        #[arg(default_value_t = 6)]
        order_bound: u32,
        #[arg(default_value_t = 4)]
        degree_bound: u32,
    },
    /// Ideal-membership certificates for the nested-bracket relations and
    /// their degree-one corollary.
    Lemma2 {
        #[arg(default_value_t = 5)]
        order_bound: u32,
        #[arg(default_value_t = 3)]
        degree_bound: u32,
        /// Largest derivative order used in the nestings.
        #[arg(long, default_value_t = 3)]
        k_max: u32,
        /// Deepest nesting checked.
        #[arg(long, default_value_t = 2)]
        m_bound: u32,
    },
}

/// Errors that terminate a command before it can produce a pass/fail
/// verdict.
enum CmdError {
    /// Bad input: unreadable file, malformed JSON, unparsable element.
    Usage(String),
    /// A truncation bound was hit; the result is not a verdict.
    Overflow(String),
}

impl From<PoissonError> for CmdError {
    fn from(e: PoissonError) -> CmdError {
        match e {
            PoissonError::Overflow(_) => CmdError::Overflow(e.to_string()),
            other => CmdError::Usage(other.to_string()),
        }
    }
}

fn read_gd(path: &str) -> Result<GDAlgebra, CmdError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CmdError::Usage(format!("cannot read {path}: {e}")))?;
    gd_from_json(&text).map_err(|e| CmdError::Usage(e.to_string()))
}

fn note_check(report: &mut Report, name: &str, r: &CheckReport) {
    match r {
        CheckReport::Ok => report.witnesses.push(format!("{name}: ok")),
        CheckReport::Fail {
            axiom,
            witness,
            defect,
        } => report.fail(format!(
            "{name}: axiom {axiom} fails at {witness:?} with defect {defect:?}"
        )),
    }
}

fn cmd_check(path: &str) -> Result<Report, CmdError> {
    let gd = read_gd(path)?;
    let mut report = Report::new("check");
    note_check(&mut report, "novikov", &check_novikov(&gd.novikov));
    note_check(&mut report, "lie", &check_lie(&gd.lie));
    note_check(&mut report, "gd-compatibility", &check_gd_compat(&gd));
    note_check(&mut report, "conformal-axioms", &check_conformal_axioms(&gd));
    Ok(report)
}

fn cmd_bracket(path: &str, a: &str, b: &str) -> Result<Report, CmdError> {
    let gd = read_gd(path)?;
    let ea = parse_elem(&gd, a).map_err(|e| CmdError::Usage(e.to_string()))?;
    let eb = parse_elem(&gd, b).map_err(|e| CmdError::Usage(e.to_string()))?;
    let br = quadratic_bracket(&gd, &ea, &eb).map_err(|e| CmdError::Usage(e.to_string()))?;
    let loc = locality_n(&gd, &ea, &eb).map_err(|e| CmdError::Usage(e.to_string()))?;
    let mut report = Report::new("bracket");
    report
        .witnesses
        .push(format!("[a λ b] = {}", render_elem(&br.coords, &gd.basis_names)));
    for n in 0..loc {
        let p = n_product(&gd, &ea, &eb, n).map_err(|e| CmdError::Usage(e.to_string()))?;
        report
            .witnesses
            .push(format!("a ({n}) b = {}", render_elem(&p.coords, &gd.basis_names)));
    }
    report.witnesses.push(format!("locality N = {loc}"));
    Ok(report)
}

fn cmd_nprod(path: &str, a: &str, b: &str, n: u32) -> Result<Report, CmdError> {
    let gd = read_gd(path)?;
    let ea = parse_elem(&gd, a).map_err(|e| CmdError::Usage(e.to_string()))?;
    let eb = parse_elem(&gd, b).map_err(|e| CmdError::Usage(e.to_string()))?;
    let p = n_product(&gd, &ea, &eb, n).map_err(|e| CmdError::Usage(e.to_string()))?;
    let mut report = Report::new("nprod").bound("n", n as u64);
    report
        .witnesses
        .push(format!("a ({n}) b = {}", render_elem(&p.coords, &gd.basis_names)));
    Ok(report)
}

fn is_zero_table(t: &StructureTable) -> bool {
    t.entries
        .iter()
        .flatten()
        .flatten()
        .all(num_traits::Zero::is_zero)
}

fn lie_is_commutator(gd: &GDAlgebra) -> bool {
    let n = gd.dim();
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                let comm =
                    gd.novikov.entries[i][j][k].clone() - &gd.novikov.entries[j][i][k];
                if gd.lie.entries[i][j][k] != comm {
                    return false;
                }
            }
        }
    }
    true
}

fn is_virasoro_shape(gd: &GDAlgebra) -> bool {
    gd.dim() == 1 && gd.novikov.entries[0][0][0].is_one() && is_zero_table(&gd.lie)
}

fn map_env_err(e: EnvelopeError) -> CmdError {
    match e {
        EnvelopeError::Poisson(p) => p.into(),
        other => CmdError::Usage(other.to_string()),
    }
}

fn run_envelope_checks<P: DiffPoisson>(
    ctx: &EmbeddingContext<P>,
    word_bound: u32,
    report: &mut Report,
) -> Result<(), CmdError> {
    report
        .witnesses
        .push(format!("envelope: {}", ctx.name));
    for (i, op) in ctx.tau_images.iter().enumerate() {
        report.witnesses.push(format!(
            "τ({}) = {}",
            ctx.gd.basis_names[i],
            render_operator(op)
        ));
    }
    let residuals = ctx.residual_report().map_err(map_env_err)?;
    note_check(report, "bracket-residuals", &residuals);
    let loc = ctx.locality_certificate().map_err(map_env_err)?;
    if loc.is_ok() {
        report.witnesses.push(format!(
            "locality ≤ 3 on all {} pairs (max {}), λ² coefficients in normal form",
            loc.pairs, loc.max_locality
        ));
    } else {
        for f in &loc.failures {
            report.fail(format!("locality: {f}"));
        }
    }
    for i in 0..ctx.dim() {
        let e = gdconf::conformal::ConfElem::basis(ctx.dim(), i);
        match ctx.injectivity_probe(&e).map_err(map_env_err)? {
            Some(_) => {}
            None => report.fail(format!(
                "injectivity: τ({}) kills the unit",
                ctx.gd.basis_names[i]
            )),
        }
    }
    if report.passed() {
        report
            .witnesses
            .push("injectivity: every τ(basis) acts nontrivially on the unit".into());
    }
    if word_bound > 1 {
        let span = ctx.envelope_span(word_bound).map_err(map_env_err)?;
        report.witnesses.push(format!(
            "operator span: {} normal forms up to word length {word_bound}",
            span.len()
        ));
    }
    Ok(())
}

/// Weyl-model verification for the rank-1 polynomial envelope: the same
/// residual and locality checks, computed by normal-ordered d/p
/// arithmetic instead of the generic rewriter.
fn weyl_envelope_report(report: &mut Report) {
    let t = tau_weyl();
    report
        .witnesses
        .push(format!("τ(v) = {}", render_weyl(&t)));
    let prod = weyl_lambda_product(&t, &t);
    let skew = weyl_product_at(&t, &t, &-&(&t_var() + &lam_var()));
    let bracket_image = t.scale(&(&t_var() + &(&lam_var() * &MPoly::int(2))));
    let residual = prod.sub(&skew).sub(&bracket_image);
    if residual.is_zero() {
        report.witnesses.push("bracket-residuals: ok".into());
    } else {
        report.fail(format!(
            "bracket-residual nonzero: {}",
            render_weyl(&residual)
        ));
    }
    let n = if prod.is_zero() {
        0
    } else {
        prod.degree_in(Var::Lambda) + 1
    };
    if n <= 3 {
        // λ² coefficient must be −L((v·v)′)(D+id) − L(v·v)(D+id)², i.e.
        // −2p(d+1) − p²(d+1)² in the Weyl model
        let d1 = WeylOp::d().add(&WeylOp::identity());
        let expected = WeylOp::p()
            .mul(&d1)
            .scale(&MPoly::int(-2))
            .sub(&WeylOp::p().pow(2).mul(&d1.mul(&d1)));
        let lam2 = prod.coeff_of(Var::Lambda, 2);
        if lam2 == expected {
            report
                .witnesses
                .push(format!("locality {n} ≤ 3, λ² coefficient in normal form"));
        } else {
            report.fail(format!(
                "λ² coefficient {} ≠ expected {}",
                render_weyl(&lam2),
                render_weyl(&expected)
            ));
        }
    } else {
        report.fail(format!("locality {n} > 3"));
    }
}

fn cmd_envelope(
    path: &str,
    order_bound: u32,
    degree_bound: u32,
    word_bound: u32,
    backend: Backend,
) -> Result<Report, CmdError> {
    let gd = read_gd(path)?;
    let mut report = Report::new("envelope")
        .bound("order", order_bound as u64)
        .bound("degree", degree_bound as u64)
        .bound("word", word_bound as u64);
    if backend == Backend::Weyl {
        if !is_virasoro_shape(&gd) {
            return Err(CmdError::Usage(
                "the weyl backend models the rank-1 polynomial envelope with \
                 d = d/dv (v∘v = v, zero bracket) only"
                    .into(),
            ));
        }
        weyl_envelope_report(&mut report);
        return Ok(report);
    }
    if is_zero_table(&gd.novikov) {
        let ctx = current_ctx(gd.lie.clone(), gd.basis_names.clone()).map_err(map_env_err)?;
        run_envelope_checks(&ctx, word_bound, &mut report)?;
    } else if is_virasoro_shape(&gd) {
        let ctx = virasoro_ctx().map_err(map_env_err)?;
        run_envelope_checks(&ctx, word_bound, &mut report)?;
    } else if lie_is_commutator(&gd) {
        let ctx = novikov_ctx(
            gd.novikov.clone(),
            gd.basis_names.clone(),
            order_bound,
            degree_bound,
        )
        .map_err(map_env_err)?;
        run_envelope_checks(&ctx, word_bound, &mut report)?;
    } else {
        return Err(CmdError::Usage(
            "no automatic envelope for this algebra: the Novikov product is \
             nonzero, it is not the rank-1 v∘v = v case, and the bracket is \
             not the Novikov commutator"
                .into(),
        ));
    }
    Ok(report)
}

fn cmd_vir(bound_s: u32, bound_q: u32, bound_l: u32) -> Result<Report, CmdError> {
    let mut report = Report::new("vir")
        .bound("s", bound_s as u64)
        .bound("q", bound_q as u64)
        .bound("l", bound_l as u64);
    let images = vir_images_report(bound_s, bound_q, bound_l);
    if images.is_ok() {
        report.witnesses.push(format!(
            "images: {} iterated images match closed forms ({} reachable only as closed forms)",
            images.constructive_checked, images.closed_form_only
        ));
    } else {
        for m in &images.mismatches {
            report.fail(format!("image mismatch: {m}"));
        }
    }
    let indep = vir_independence(bound_s, bound_q, bound_l);
    if indep.full_rank {
        report.witnesses.push(format!(
            "independence: {} operators, rank {} of {} exact columns",
            indep.operators, indep.rank, indep.columns
        ));
    } else {
        report.fail(format!(
            "independence: rank {} < {} columns",
            indep.rank, indep.columns
        ));
    }
    let adj = vir_adjoint_presentation(bound_s, bound_q, bound_l);
    if adj.full_rank && adj.operators == indep.operators {
        report.witnesses.push(format!(
            "adjoint presentation: independent family of the same size ({} operators)",
            adj.operators
        ));
    } else {
        report.fail(format!(
            "adjoint presentation: rank {} of {} columns for {} operators",
            adj.rank, adj.columns, adj.operators
        ));
    }
    let dep = vir_dependence();
    if dep.verified {
        report.witnesses.push(format!(
            "dependence: φ(v (1) v) = {}·φ(v) + {}·T·φ(v (2) v)",
            dep.alpha, dep.beta
        ));
    } else {
        report.fail("dependence: no H-linear solution found".into());
    }
    let ci = c_report(4);
    report.witnesses.push(format!(
        "c-coefficients (l ≤ 4): {:?}; formula matches: {}",
        ci.oracle, ci.formula_matches
    ));
    report.details = serde_json::json!({
        "images": images,
        "independence": indep,
        "adjoint": adj,
        "dependence": dep,
        "c_coefficients": ci,
    });
    Ok(report)
}

fn cmd_abelian(order_bound: u32, degree_bound: u32) -> Result<Report, CmdError> {
    let mut report = Report::new("abelian")
        .bound("order", order_bound as u64)
        .bound("degree", degree_bound as u64);
    let ctx = abelian_free_ctx(order_bound, degree_bound).map_err(map_env_err)?;
    let witness = abelian_kernel_witness(&ctx)?;
    if witness.is_ok() {
        report.witnesses.push(format!(
            "kernel witness φ(v (0) (v (2) v)) = {} ≠ 0; action lies in the ideal \
             on all {} basis elements",
            witness.phi_rendered, witness.basis_checked
        ));
        report.witnesses.push(witness.note.clone());
    } else {
        for f in &witness.failures {
            report.fail(format!("kernel witness: {f}"));
        }
        if !witness.phi_nonzero {
            report.fail("kernel witness: φ normalizes to zero".into());
        }
    }
    let k_list: Vec<u32> = (1..=6).collect();
    let lemma2 = lemma2_certificate(&ctx.poisson, &k_list, 1)?;
    if lemma2.is_ok() {
        report.witnesses.push(format!(
            "bracket relations: {} base cases and {} degree-one consequences in the ideal",
            lemma2.nested_checked, lemma2.corollary_checked
        ));
    } else {
        for f in &lemma2.failures {
            report.fail(format!("bracket relation: {f}"));
        }
    }
    report.details = serde_json::json!({ "witness": witness, "relations": lemma2 });
    Ok(report)
}

fn cmd_lemma2(
    order_bound: u32,
    degree_bound: u32,
    k_max: u32,
    m_bound: u32,
) -> Result<Report, CmdError> {
    let mut report = Report::new("lemma2")
        .bound("order", order_bound as u64)
        .bound("degree", degree_bound as u64)
        .bound("k_max", k_max as u64)
        .bound("m_bound", m_bound as u64);
    let p = free_pd_quotient_rank1(order_bound, degree_bound)?;
    let k_list: Vec<u32> = (0..=k_max).collect();
    let cert = lemma2_certificate(&p, &k_list, m_bound)?;
    if cert.is_ok() {
        report.witnesses.push(format!(
            "{} nested relations and {} degree-one consequences certified in the ideal",
            cert.nested_checked, cert.corollary_checked
        ));
    } else {
        for f in &cert.failures {
            report.fail(f.clone());
        }
    }
    report.details = serde_json::json!({ "certificate": cert });
    Ok(report)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let timer = Timer::start();
    let result = match &cli.command {
        Cmd::Check { path } => cmd_check(path),
        Cmd::Bracket { path, elem_a, elem_b } => cmd_bracket(path, elem_a, elem_b),
        Cmd::Nprod {
            path,
            elem_a,
            elem_b,
            n,
        } => cmd_nprod(path, elem_a, elem_b, *n),
        Cmd::Envelope {
            path,
            order_bound,
            degree_bound,
            word_bound,
            backend,
        } => cmd_envelope(path, *order_bound, *degree_bound, *word_bound, *backend),
        Cmd::Vir {
            bound_s,
            bound_q,
            bound_l,
        } => cmd_vir(*bound_s, *bound_q, *bound_l),
        Cmd::Abelian {
            order_bound,
            degree_bound,
        } => cmd_abelian(*order_bound, *degree_bound),
        Cmd::Lemma2 {
            order_bound,
            degree_bound,
            k_max,
            m_bound,
        } => cmd_lemma2(*order_bound, *degree_bound, *k_max, *m_bound),
    };
    let mut report = match result {
        Ok(r) => r,
        Err(CmdError::Usage(msg)) => {
            eprintln!("error: {msg}");
            return ExitCode::from(2);
        }
        Err(CmdError::Overflow(msg)) => {
            let mut r = Report::new("overflow");
            r.status = "overflow".into();
            r.witnesses
                .push(format!("{msg}; raise --order-bound / --degree-bound"));
            r.seed = cli.seed;
            emit(&r, cli.format);
            return ExitCode::from(3);
        }
    };
    report.seed = cli.seed;
    timer.stop(&mut report);
    emit(&report, cli.format);
    if report.passed() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

fn emit(report: &Report, format: Format) {
    match format {
        Format::Text => print!("{}", report.render_text()),
        Format::Json => println!("{}", report.render_json()),
    }
}
