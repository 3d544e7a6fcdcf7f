//! Command-line surface for the dually affine space engine.
//!
//! Exit codes: 0 success, 1 negative verdict (invalid morphism, failed law
//! or theorem, incomplete space, non-member word), 2 usage or parse error,
//! 3 capability not available for the bound instance.

mod doc;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use daffine::affine::check_morphism;
use daffine::completeness::{classify_space, verify_copower_theorem, verify_copower_theorem_rose};
use daffine::error::{Error, Result};
use daffine::instances::{FinMod, FinSet, Instance};
use daffine::stallings::StallingsGraph;
use daffine::zariski::{
    all_submodule_structs, enumerate_finmod_z2_cases, quotient, sample_finset_cases, verify_laws,
    zeta, zeta_closed_form_finmod, zeta_closed_form_finset, LawCase, Quotient,
};
use daffine::ReducedWord;
use doc::{load, parse_instance, resolve, BoundInstance, CliInstance, Workspace};
use serde_json::json;

#[derive(Parser)]
#[command(name = "daffine", version, about = "Dually affine spaces over finite sets, finite modules, and roses")]
struct Cli {
    /// Emit machine-readable JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Seed for sampled verification (deterministic by default).
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Check that a named morphism is affine between two named spaces.
    Check {
        doc: PathBuf,
        morphism: String,
        from: String,
        to: String,
    },
    /// Compute the dual closure ζp and factor θp of a named quotient.
    Zeta { doc: PathBuf, quotient: String },
    /// Separation / completeness verdict for a named space.
    Classify { doc: PathBuf, space: String },
    /// Run the closure-law suite and report violations.
    VerifyLaws {
        /// finset | finmod:Z/2:module | finmod:Z/2:empty
        #[arg(long, default_value = "finset")]
        instance: String,
        /// Seeded case count (finset only; module sweeps are exhaustive).
        #[arg(long, default_value_t = 200)]
        cases: usize,
        /// Carrier size bound for sampled finset cases.
        #[arg(long, default_value_t = 5)]
        max_size: usize,
    },
    /// Verify the copower splitting theorem at a given copower size.
    VerifyTheorem {
        /// finset | finmod:Z/m:module | finmod:Z/m:empty | rose
        #[arg(long, default_value = "finset")]
        instance: String,
        #[arg(long, default_value_t = 2)]
        n: usize,
        /// Sampled structure elements (rose only).
        #[arg(long, default_value_t = 200)]
        samples: usize,
        /// Word-length bound for sampled elements (rose only).
        #[arg(long, default_value_t = 12)]
        max_len: usize,
    },
    /// Census of all spaces and regular quotients up to a size bound.
    Enumerate {
        /// finset | finmod:Z/2:module | finmod:Z/2:empty | finmod:Z/3:...
        #[arg(long, default_value = "finset")]
        instance: String,
        /// Carrier size (finset, ≤ 5) or dimension (finmod, ≤ 2).
        #[arg(long)]
        bound: usize,
    },
    /// Fold subgroup generators; print the graph and optionally test a word.
    Fold {
        #[arg(long)]
        rank: usize,
        /// Generator words, e.g. "a b^-1 a".
        generators: Vec<String>,
        /// Word to test for membership.
        #[arg(long)]
        member: Option<String>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("{e}");
            match e {
                Error::Unsupported(_) => ExitCode::from(3),
                _ => ExitCode::from(2),
            }
        }
    }
}

fn run(cli: &Cli) -> Result<u8> {
    match &cli.cmd {
        Cmd::Check { doc, morphism, from, to } => {
            let d = load(doc)?;
            match parse_instance(&d.instance)? {
                BoundInstance::Set(i) => cmd_check(&i, &resolve(&i, &d)?, morphism, from, to, cli),
                BoundInstance::Module(i) => {
                    cmd_check(&i, &resolve(&i, &d)?, morphism, from, to, cli)
                }
                BoundInstance::Rose(i) => cmd_check(&i, &resolve(&i, &d)?, morphism, from, to, cli),
            }
        }
        Cmd::Zeta { doc, quotient } => {
            let d = load(doc)?;
            match parse_instance(&d.instance)? {
                BoundInstance::Set(i) => {
                    let ws = resolve(&i, &d)?;
                    let q = named(&ws.quotients, quotient, "quotient")?;
                    let cf = zeta_closed_form_finset(q)?;
                    cmd_zeta(&i, q, Some(cf), cli)
                }
                BoundInstance::Module(i) => {
                    let ws = resolve(&i, &d)?;
                    let q = named(&ws.quotients, quotient, "quotient")?;
                    let cf = zeta_closed_form_finmod(&i, q)?;
                    cmd_zeta(&i, q, Some(cf), cli)
                }
                BoundInstance::Rose(i) => {
                    let ws = resolve(&i, &d)?;
                    let q = named(&ws.quotients, quotient, "quotient")?;
                    cmd_zeta(&i, q, None, cli)
                }
            }
        }
        Cmd::Classify { doc, space } => {
            let d = load(doc)?;
            match parse_instance(&d.instance)? {
                BoundInstance::Set(i) => cmd_classify(&i, &resolve(&i, &d)?, space, cli),
                BoundInstance::Module(i) => cmd_classify(&i, &resolve(&i, &d)?, space, cli),
                BoundInstance::Rose(i) => cmd_classify(&i, &resolve(&i, &d)?, space, cli),
            }
        }
        Cmd::VerifyLaws { instance, cases, max_size } => {
            cmd_verify_laws(instance, *cases, *max_size, cli)
        }
        Cmd::VerifyTheorem { instance, n, samples, max_len } => {
            cmd_verify_theorem(instance, *n, *samples, *max_len, cli)
        }
        Cmd::Enumerate { instance, bound } => cmd_enumerate(instance, *bound, cli),
        Cmd::Fold { rank, generators, member } => cmd_fold(*rank, generators, member.as_ref(), cli),
    }
}

fn named<'a, T>(
    map: &'a std::collections::BTreeMap<String, T>,
    name: &str,
    kind: &str,
) -> Result<&'a T> {
    map.get(name).ok_or_else(|| Error::domain(format!("unknown {kind} `{name}`")))
}

fn cmd_check<I: CliInstance>(
    inst: &I,
    ws: &Workspace<I>,
    morphism: &str,
    from: &str,
    to: &str,
    cli: &Cli,
) -> Result<u8> {
    let f = named(&ws.morphisms, morphism, "morphism")?;
    let dom = named(&ws.spaces, from, "space")?;
    let cod = named(&ws.spaces, to, "space")?;
    let check = check_morphism(inst, f, dom, cod)?;
    if cli.json {
        println!(
            "{}",
            json!({
                "valid": check.valid,
                "witness": check.witness.as_ref().map(|w| inst.mor_value(w)),
            })
        );
    } else if check.valid {
        println!("valid: {morphism} is affine {from} -> {to}");
    } else {
        let w = check.witness.as_ref().expect("invalid check carries a witness");
        println!(
            "invalid: structure element {} of {from} maps outside the structure of {to}",
            inst.show_mor(w)
        );
    }
    Ok(if check.valid { 0 } else { 1 })
}

fn cmd_zeta<I: CliInstance>(
    inst: &I,
    q: &Quotient<I>,
    closed_form: Option<I::Mor>,
    cli: &Cli,
) -> Result<u8> {
    let cr = zeta(inst, q)?;
    let cf_agrees = closed_form.as_ref().map(|cf| *cf == cr.zeta.p);
    if let Some(false) = cf_agrees {
        return Err(Error::internal("closed form disagrees with the general construction"));
    }
    if cli.json {
        println!(
            "{}",
            json!({
                "zeta": inst.mor_value(&cr.zeta.p),
                "theta": inst.mor_value(&cr.theta),
                "closed": cr.is_closed,
                "sparse": cr.is_sparse,
                "kernel_pairs": cr.kernel_size,
                "closed_form_cross_check": cf_agrees,
            })
        );
    } else {
        println!("zeta p: {}", inst.show_mor(&cr.zeta.p));
        println!("theta p: {}", inst.show_mor(&cr.theta));
        println!(
            "closed: {}, sparse: {}, kernel pairs: {}",
            cr.is_closed, cr.is_sparse, cr.kernel_size
        );
        if cf_agrees == Some(true) {
            println!("closed-form cross-check: agrees");
        }
    }
    Ok(0)
}

fn cmd_classify<I: CliInstance>(
    inst: &I,
    ws: &Workspace<I>,
    space: &str,
    cli: &Cli,
) -> Result<u8> {
    let sp = named(&ws.spaces, space, "space")?;
    let v = classify_space(inst, sp)?;
    if cli.json {
        println!("{}", serde_json::to_string(&v).expect("verdict serialization"));
    } else {
        println!("space `{space}` on {}", inst.show_obj(&sp.x));
        println!(
            "separating: {}, regularly separating: {}, zeta-complete: {} ({:?}{})",
            v.separating.holds(),
            v.regularly_separating.holds(),
            v.zeta_complete.holds(),
            v.mode,
            v.sampling_bound
                .map(|b| format!(", sampling bound {b}"))
                .unwrap_or_default(),
        );
    }
    Ok(if v.zeta_complete.holds() { 0 } else { 1 })
}

fn cmd_verify_laws(instance: &str, cases: usize, max_size: usize, cli: &Cli) -> Result<u8> {
    let (label, report, count) = match parse_instance(instance)? {
        BoundInstance::Set(i) => {
            let cs = sample_finset_cases(cases, max_size.clamp(1, 6), cli.seed)?;
            (instance.to_string(), verify_laws(&i, &cs)?, cs.len())
        }
        BoundInstance::Module(i) => {
            if i.modulus != 2 {
                return Err(Error::domain("the exhaustive law sweep is defined over Z/2"));
            }
            match i.theory() {
                daffine::theory::TheoryKind::Module { .. } => {
                    let cs = enumerate_finmod_z2_cases(2)?;
                    (instance.to_string(), verify_laws(&i, &cs)?, cs.len())
                }
                _ => {
                    let cs = empty_finmod_cases(&i, 2)?;
                    (instance.to_string(), verify_laws(&i, &cs)?, cs.len())
                }
            }
        }
        BoundInstance::Rose(_) => {
            return Err(Error::unsupported(
                "the rose instance has no coequalizers, so the closure laws are unavailable",
            ))
        }
    };
    let ok = report.all_hold();
    if cli.json {
        println!(
            "{}",
            json!({
                "instance": label,
                "seed": cli.seed,
                "cases": count,
                "checks": report.checks,
                "violations": report.violations,
            })
        );
    } else {
        println!(
            "{label}: {count} cases, {} checks, {} violations (seed {})",
            report.checks,
            report.violations.len(),
            cli.seed
        );
        for v in report.violations.iter().take(10) {
            println!("  {v}");
        }
    }
    Ok(if ok { 0 } else { 1 })
}

/// Exhaustive law cases for the subset-structured module instance.
fn empty_finmod_cases(inst: &FinMod, max_dim: usize) -> Result<Vec<LawCase<FinMod>>> {
    let mut out = Vec::new();
    for k in 0..=max_dim {
        let x = inst.obj(k, &[])?;
        let elems: Vec<_> = inst
            .elements_of(&x)
            .ok_or_else(|| Error::domain("module too large"))?
            .iter()
            .map(|c| inst.element(&x, c))
            .collect::<Result<_>>()?;
        let n = elems.len();
        if n > 16 {
            return Err(Error::domain("subset sweep needs at most 16 elements"));
        }
        let mut epis = Vec::new();
        for j in 0..=k {
            let y = inst.obj(j, &[])?;
            for p in inst.hom(&x, &y).into_iter().flatten() {
                if inst.is_regular_epi(&p)? {
                    epis.push(p);
                }
            }
        }
        for mask in 0u32..(1 << n) {
            let subset: Vec<_> = (0..n)
                .filter(|i| mask & (1 << i) != 0)
                .map(|i| elems[i].clone())
                .collect();
            let a = inst.struct_from_elements(&x, &subset)?;
            let source = daffine::affine::Space { x: x.clone(), a };
            for p in &epis {
                out.push(LawCase {
                    quotient: quotient(inst, &source, p)?,
                    coarser: None,
                    mapped: None,
                });
            }
        }
    }
    Ok(out)
}

fn cmd_verify_theorem(
    instance: &str,
    n: usize,
    samples: usize,
    max_len: usize,
    cli: &Cli,
) -> Result<u8> {
    let report = match parse_instance(instance)? {
        BoundInstance::Set(i) => verify_copower_theorem(&i, n)?,
        BoundInstance::Module(i) => verify_copower_theorem(&i, n)?,
        BoundInstance::Rose(i) => verify_copower_theorem_rose(&i, n, samples, max_len, cli.seed)?,
    };
    let ok = report.passed();
    if cli.json {
        println!("{}", serde_json::to_string(&report).expect("report serialization"));
    } else {
        println!(
            "{}: n={} identities {} ({:?}{}), {} structure elements checked{}",
            report.instance,
            report.n,
            if report.identities_hold { "hold" } else { "FAIL" },
            report.mode,
            report
                .sampling_bound
                .map(|b| format!(", sampling bound {b}"))
                .unwrap_or_default(),
            report.checked_elements,
            match report.classifier_complete {
                Some(c) => format!(", classifier complete: {c}"),
                None => String::new(),
            }
        );
    }
    Ok(if ok { 0 } else { 1 })
}

fn cmd_enumerate(instance: &str, bound: usize, cli: &Cli) -> Result<u8> {
    let mut spaces = 0usize;
    let mut quotients = 0usize;
    let mut closed = 0usize;
    let mut sparse = 0usize;
    let mut separating = 0usize;
    let mut complete = 0usize;
    let mut violations: Vec<String> = Vec::new();
    match parse_instance(instance)? {
        BoundInstance::Set(inst) => {
            if bound > 5 {
                return Err(Error::domain("finset census bound is limited to 5"));
            }
            for x in 0..=bound {
                for mask in 0u64..(1 << x) {
                    let sp = daffine::affine::Space::<FinSet> {
                        x,
                        a: (0..x).filter(|i| mask & (1 << i) != 0).collect(),
                    };
                    spaces += 1;
                    let v = classify_space(&inst, &sp)?;
                    separating += v.separating.holds() as usize;
                    complete += v.zeta_complete.holds() as usize;
                    let mut cases = Vec::new();
                    for y in 0..=x {
                        for p in inst.hom(&x, &y).into_iter().flatten() {
                            if !inst.is_regular_epi(&p)? {
                                continue;
                            }
                            let q = quotient(&inst, &sp, &p)?;
                            let cr = zeta(&inst, &q)?;
                            quotients += 1;
                            closed += cr.is_closed as usize;
                            sparse += cr.is_sparse as usize;
                            cases.push(LawCase { quotient: q, coarser: None, mapped: None });
                        }
                    }
                    let report = verify_laws(&inst, &cases)?;
                    violations.extend(report.violations);
                }
            }
        }
        BoundInstance::Module(inst) => {
            if bound > 2 || !(inst.modulus == 2 || inst.modulus == 3) {
                return Err(Error::domain(
                    "finmod census is limited to dimension 2 over Z/2 or Z/3",
                ));
            }
            for k in 0..=bound {
                let x = inst.obj(k, &[])?;
                let structs = match inst.theory() {
                    daffine::theory::TheoryKind::Module { .. } => {
                        all_submodule_structs(&inst, &x)?
                    }
                    _ => {
                        let elems: Vec<_> = inst
                            .elements_of(&x)
                            .ok_or_else(|| Error::domain("module too large"))?
                            .iter()
                            .map(|c| inst.element(&x, c))
                            .collect::<Result<_>>()?;
                        let n = elems.len();
                        (0u32..(1 << n))
                            .map(|mask| {
                                let subset: Vec<_> = (0..n)
                                    .filter(|i| mask & (1 << i) != 0)
                                    .map(|i| elems[i].clone())
                                    .collect();
                                inst.struct_from_elements(&x, &subset)
                            })
                            .collect::<Result<Vec<_>>>()?
                    }
                };
                let mut epis = Vec::new();
                for j in 0..=k {
                    let y = inst.obj(j, &[])?;
                    for p in inst.hom(&x, &y).into_iter().flatten() {
                        if inst.is_regular_epi(&p)? {
                            epis.push(p);
                        }
                    }
                }
                for a in structs {
                    let sp = daffine::affine::Space { x: x.clone(), a };
                    spaces += 1;
                    let v = classify_space(&inst, &sp)?;
                    separating += v.separating.holds() as usize;
                    complete += v.zeta_complete.holds() as usize;
                    let mut cases = Vec::new();
                    for p in &epis {
                        let q = quotient(&inst, &sp, p)?;
                        let cr = zeta(&inst, &q)?;
                        quotients += 1;
                        closed += cr.is_closed as usize;
                        sparse += cr.is_sparse as usize;
                        cases.push(LawCase { quotient: q, coarser: None, mapped: None });
                    }
                    let report = verify_laws(&inst, &cases)?;
                    violations.extend(report.violations);
                }
            }
        }
        BoundInstance::Rose(_) => {
            return Err(Error::unsupported(
                "the rose instance has no finite census: structures are infinite subgroups",
            ))
        }
    }
    if cli.json {
        println!(
            "{}",
            json!({
                "instance": instance,
                "bound": bound,
                "spaces": spaces,
                "quotients": quotients,
                "closed": closed,
                "sparse": sparse,
                "separating": separating,
                "complete": complete,
                "law_violations": violations,
            })
        );
    } else {
        println!(
            "{instance} census (bound {bound}): {spaces} spaces ({separating} separating, {complete} complete), {quotients} quotients ({closed} closed, {sparse} sparse), {} law violations",
            violations.len()
        );
        for v in violations.iter().take(10) {
            println!("  {v}");
        }
    }
    Ok(if violations.is_empty() { 0 } else { 1 })
}

fn cmd_fold(rank: usize, generators: &[String], member: Option<&String>, cli: &Cli) -> Result<u8> {
    let words = generators
        .iter()
        .map(|w| ReducedWord::parse(w))
        .collect::<Result<Vec<_>>>()?;
    for w in &words {
        if !w.fits_rank(rank) {
            return Err(Error::domain(format!("word `{w}` uses a generator beyond rank {rank}")));
        }
    }
    let graph = StallingsGraph::fold(rank, &words);
    let basis: Vec<String> = graph.basis_words().iter().map(|w| w.to_string()).collect();
    let tested = member.map(|m| ReducedWord::parse(m)).transpose()?;
    let is_member = tested.as_ref().map(|w| graph.member(w));
    if cli.json {
        println!(
            "{}",
            json!({
                "rank": rank,
                "states": graph.num_states(),
                "edges": graph.edges(),
                "basis": basis,
                "member": is_member,
            })
        );
    } else {
        println!(
            "folded graph: {} states, {} edges; subgroup rank {}",
            graph.num_states(),
            graph.edges().len(),
            basis.len()
        );
        println!("basis: [{}]", basis.join(", "));
        if let (Some(w), Some(m)) = (&tested, is_member) {
            println!("member {w}: {m}");
        }
    }
    Ok(match is_member {
        Some(false) => 1,
        _ => 0,
    })
}
