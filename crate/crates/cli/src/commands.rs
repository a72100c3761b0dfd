use std::fmt::Write as _;

use frattini::geometry::{
    self, commensurator, cyclic_intersection, growth_constant, in_commensurator, k_bound, k_empirical, qc_constant,
    DelzantSequence,
};
use frattini::stallings::{equal_subgroups, CoreGraph};
use frattini::witness::{
    self, CertificateDocument, InputClass, Mode, OutcomeDocument, ReportDocument, Sampling, WitnessCertificate,
    WitnessRequest,
};
use frattini::{GroupDescriptor, Word};
use num_bigint::BigUint;
use serde_json::{json, Value};

use crate::context::Context;
use crate::{Answer, Command, Failure, GeomCommand, ModeArg, Options, PwCommand, StallingsCommand, WitnessCommand, WordCommand};

pub fn dispatch(command: &Command, opts: &Options, ctx: &Context) -> Result<Answer, Failure> {
    match command {
        Command::Word(c) => word(c, ctx),
        Command::Pw(c) => pw(c, ctx),
        Command::Stallings(c) => stallings(c, opts, ctx),
        Command::Geom(c) => geom(c, ctx),
        Command::Witness(c) => witness_command(c, opts, ctx),
    }
}

fn word(c: &WordCommand, ctx: &Context) -> Result<Answer, Failure> {
    let single = |w: Word| {
        let s = ctx.render(&w);
        Answer::new(s.clone(), json!({ "word": s, "length": w.len() }))
    };
    Ok(match c {
        WordCommand::Reduce { word } => single(ctx.word(word)?),
        WordCommand::Inv { word } => single(ctx.word(word)?.inverse()),
        WordCommand::Mul { words } => single(ctx.words(words)?.iter().fold(Word::identity(), |acc, w| acc.multiply(w))),
        WordCommand::Root { word } => {
            let (root, exponent) = ctx.word(word)?.primitive_root()?;
            let r = ctx.render(&root);
            Answer::new(format!("root {r}\nexponent {exponent}"), json!({ "root": r, "exponent": exponent }))
        }
        WordCommand::Cyclic { word } => {
            let form = ctx.word(word)?.cyclic_form();
            let (u, c) = (ctx.render(&form.conjugator), ctx.render(&form.core));
            Answer::new(format!("conjugator {u}\ncore {c}"), json!({ "conjugator": u, "core": c }))
        }
    })
}

fn pw(c: &PwCommand, ctx: &Context) -> Result<Answer, Failure> {
    Ok(match c {
        PwCommand::Norm { word } => {
            let p = ctx.power_word(word)?.normalize();
            let s = ctx.render_power(&p);
            Answer::new(s.clone(), json!({ "power_word": s, "length": p.length().to_string() }))
        }
        PwCommand::Len { word } => {
            let n = ctx.power_word(word)?.length().to_string();
            Answer::new(n.clone(), json!({ "length": n }))
        }
        PwCommand::Eq { left, right } => {
            let equal = ctx.power_word(left)?.equals(&ctx.power_word(right)?);
            Answer::new(equal.to_string(), json!({ "equal": equal })).with_truth(equal)
        }
        PwCommand::Expand { word } => {
            let w = ctx.power_word(word)?.expand(ctx.expand_limit)?;
            let s = ctx.render(&w);
            Answer::new(s.clone(), json!({ "word": s, "length": w.len() }))
        }
    })
}

fn graph_for(ctx: &Context, gens: &[Word], extra: &[&Word]) -> Result<(GroupDescriptor, CoreGraph), Failure> {
    let mut all: Vec<&Word> = gens.iter().collect();
    all.extend_from_slice(extra);
    let d = ctx.group(&all)?;
    let graph = CoreGraph::build(&d, gens)?;
    Ok((d, graph))
}

fn graph_json(d: &GroupDescriptor, g: &CoreGraph) -> Value {
    let edges: Vec<Value> = g
        .edges()
        .into_iter()
        .map(|(s, t, l)| json!([s, t, d.letter_names()[l.index()].to_string()]))
        .collect();
    json!({ "basepoint": g.basepoint(), "vertices": g.vertex_count(), "rank": g.rank(), "edges": edges })
}

fn stallings(c: &StallingsCommand, opts: &Options, ctx: &Context) -> Result<Answer, Failure> {
    let (name, gens) = ctx.subgroup(opts.subgroup.as_deref())?;
    Ok(match c {
        StallingsCommand::Build => {
            let (d, g) = graph_for(ctx, &gens, &[])?;
            let text = format!("vertices {}\nrank {}\n{}", g.vertex_count(), g.rank(), g.dump(&d));
            let mut doc = graph_json(&d, &g);
            doc["subgroup"] = json!(name);
            Answer::new(text, doc)
        }
        StallingsCommand::Member { word } => {
            let p = ctx.power_word(word)?;
            let extra: Vec<&Word> = p.factors().iter().map(|f| &f.base).collect();
            let (d, g) = graph_for(ctx, &gens, &extra)?;
            d.check_power(&p)?;
            let member = g.contains_pw(&p);
            Answer::new(member.to_string(), json!({ "subgroup": name, "member": member })).with_truth(member)
        }
        StallingsCommand::Rank => {
            let (_, g) = graph_for(ctx, &gens, &[])?;
            Answer::new(g.rank().to_string(), json!({ "subgroup": name, "rank": g.rank() }))
        }
        StallingsCommand::Shortest => {
            let (_, g) = graph_for(ctx, &gens, &[])?;
            match g.shortest_nontrivial() {
                Some(w) => {
                    let s = ctx.render(&w);
                    Answer::new(s.clone(), json!({ "subgroup": name, "shortest": s, "length": w.len() }))
                }
                None => Answer::new("none", json!({ "subgroup": name, "shortest": null })).with_truth(false),
            }
        }
        StallingsCommand::Equal { other } => {
            let (other_name, other_gens) = ctx.subgroup(Some(other))?;
            let all: Vec<&Word> = gens.iter().chain(&other_gens).collect();
            let d = ctx.group(&all)?;
            let equal = equal_subgroups(&CoreGraph::build(&d, &gens)?, &CoreGraph::build(&d, &other_gens)?);
            Answer::new(equal.to_string(), json!({ "left": name, "right": other_name, "equal": equal })).with_truth(equal)
        }
    })
}

fn geom(c: &GeomCommand, ctx: &Context) -> Result<Answer, Failure> {
    Ok(match c {
        GeomCommand::Growth { g } => {
            let data = growth_constant(&ctx.word(g)?)?;
            let core = data.g.cyclic_form().core;
            Answer::new(
                format!("C {}\ncore_length {}\nconjugator_length {}", data.c, data.core_length, data.conjugator_length),
                json!({
                    "g": ctx.render(&data.g),
                    "C": data.c,
                    "core": ctx.render(&core),
                    "core_length": data.core_length,
                    "conjugator_length": data.conjugator_length,
                }),
            )
        }
        GeomCommand::Qc { g, range } => {
            let qc = qc_constant(&ctx.word(g)?, *range)?;
            let mut text = format!("E_valid {}", qc.e_valid);
            if let Some(e) = qc.e_min {
                write!(text, "\nE_min {e}").unwrap();
            }
            Answer::new(text, json!({ "g": ctx.render(&qc.g), "E_valid": qc.e_valid, "E_min": qc.e_min, "range": range }))
        }
        GeomCommand::Comm { g, h: None } => {
            let comm = commensurator(&ctx.word(g)?)?;
            let r = ctx.render(&comm.root);
            Answer::new(
                format!("root {r}\ng_exponent {}", comm.g_exponent),
                json!({ "g": ctx.render(&comm.g), "root": r, "g_exponent": comm.g_exponent }),
            )
        }
        GeomCommand::Comm { g, h: Some(h) } => {
            let (g, h) = (ctx.word(g)?, ctx.word(h)?);
            let member = in_commensurator(&g, &h)?;
            let exponent = commensurator(&g)?.exponent_of(&h);
            let meet = cyclic_intersection(&g, &h.inverse().multiply(&g).multiply(&h))?;
            let mut text = member.to_string();
            if let Some(k) = exponent {
                write!(text, "\nroot_exponent {k}").unwrap();
            }
            Answer::new(
                text,
                json!({
                    "g": ctx.render(&g),
                    "h": ctx.render(&h),
                    "member": member,
                    "root_exponent": exponent,
                    "conjugate_meet": meet.map(|m| json!({
                        "generator": ctx.render(&m.generator),
                        "index_in_g": m.index_in_first,
                        "index_in_conjugate": m.index_in_second,
                    })),
                }),
            )
            .with_truth(member)
        }
        GeomCommand::Kbound { g, c } => {
            let (g, c) = (ctx.word(g)?, ctx.word(c)?);
            let d = ctx.group(&[&g, &c])?;
            let kb = k_bound(&d, &g, &c)?;
            Answer::new(
                format!(
                    "E {}\ndelta {}\nball_radius {}\nball_count {}\nK {}",
                    kb.e, kb.delta, kb.ball_radius, kb.ball_count, kb.k
                ),
                json!({
                    "g": ctx.render(&kb.g),
                    "c": ctx.render(&kb.c),
                    "E": kb.e.to_string(),
                    "delta": kb.delta.to_string(),
                    "ball_radius": kb.ball_radius.to_string(),
                    "ball_count": kb.ball_count.to_string(),
                    "K": kb.k.to_string(),
                }),
            )
        }
        GeomCommand::Kemp { g, c, range } => {
            let (g, c) = (ctx.word(g)?, ctx.word(c)?);
            let k = k_empirical(&g, &c, *range)?.to_string();
            Answer::new(
                k.clone(),
                json!({ "g": ctx.render(&g), "c": ctx.render(&c), "range": range, "k_empirical": k }),
            )
        }
        GeomCommand::Delzant { points, a } => {
            let points = points.iter().map(|p| ctx.power_word(p)).collect::<Result<Vec<_>, _>>()?;
            let bases: Vec<&Word> = points.iter().flat_map(|p| p.factors().iter().map(|f| &f.base)).collect();
            let d = ctx.group(&bases)?;
            let seq = DelzantSequence::new(points, *a, d.delta())?;
            let hypothesis_failure = seq.first_hypothesis_failure()?;
            let conclusion_failure = seq.first_conclusion_failure();
            let distances: Vec<String> =
                (0..seq.points().len() - 1).map(|i| geometry::distance(&seq.points()[i], &seq.points()[i + 1]).to_string()).collect();
            let (hyp, con) = (hypothesis_failure.is_none(), conclusion_failure.is_none());
            let mut text = format!("hypothesis {hyp}\nconclusion {con}");
            if let Some(i) = hypothesis_failure {
                write!(text, "\nhypothesis fails at index {i}").unwrap();
            }
            if let Some((i, j)) = conclusion_failure {
                write!(text, "\nconclusion fails for indices {i} {j}").unwrap();
            }
            Answer::new(
                text,
                json!({
                    "a": a.to_string(),
                    "delta": seq.delta().to_string(),
                    "consecutive_distances": distances,
                    "hypothesis": hyp,
                    "hypothesis_failure": hypothesis_failure,
                    "conclusion": con,
                    "conclusion_failure": conclusion_failure,
                }),
            )
            .with_truth(con)
        }
    })
}

fn mode(opts: &Options) -> Result<Mode, Failure> {
    let number = |flag: &str, s: &Option<String>| -> Result<BigUint, Failure> {
        match s {
            None => Ok(BigUint::from(1u32)),
            Some(s) => s.parse().map_err(|_| Failure::Input(format!("{flag}: `{s}` is not a nonnegative integer"))),
        }
    };
    match opts.mode {
        ModeArg::Paper => {
            if opts.n_override.is_some() || opts.mult_override.is_some() {
                return Err(Failure::Input("--n-override and --mult-override need --mode explore".into()));
            }
            Ok(Mode::Paper)
        }
        ModeArg::Explore => Ok(Mode::Exploration {
            n_override: number("--n-override", &opts.n_override)?,
            multiplier_override: number("--mult-override", &opts.mult_override)?,
        }),
    }
}

fn sampling(opts: &Options) -> Sampling {
    Sampling { q_max: opts.qmax, sample_count: opts.samples, seed: opts.seed }
}

fn request(g: Option<&str>, opts: &Options, ctx: &Context) -> Result<WitnessRequest, Failure> {
    let g = match g {
        Some(g) => ctx.word(g)?,
        None if ctx.document().is_some_and(|d| d.binding("g").is_some()) => ctx.word("g")?,
        None => return Err(Failure::Input("no element given: pass g or bind `g = ...` in the input".into())),
    };
    let (_, gens) = ctx.subgroup(opts.subgroup.as_deref())?;
    let mut all: Vec<&Word> = gens.iter().collect();
    all.push(&g);
    let d = ctx.group(&all)?;
    gens.iter().chain([&g]).try_for_each(|w| d.check(w))?;
    Ok(WitnessRequest::new(d, gens, g, mode(opts)?, sampling(opts)))
}

fn certificate_text(cert: &WitnessCertificate) -> String {
    let d = &cert.descriptor;
    let mut s = String::new();
    writeln!(s, "g {}", d.render(&cert.g)).unwrap();
    writeln!(s, "s1_index {}", cert.s1_index).unwrap();
    let c: Vec<String> = cert.c.iter().map(|w| d.render(w)).collect();
    writeln!(s, "c {}", c.join(" ")).unwrap();
    writeln!(s, "T0 {} (f = {})", cert.t0, d.render(&cert.t0_witness)).unwrap();
    writeln!(s, "T {}", cert.t).unwrap();
    writeln!(s, "K1 {}\nK2 {}\nK {}", cert.k1, cert.k2, cert.k).unwrap();
    writeln!(s, "C {}\nN {}\nmultiplier {}", cert.growth, cert.n, cert.multiplier).unwrap();
    for (j, (n, h)) in cert.exponents.iter().zip(&cert.h).enumerate() {
        writeln!(s, "n_{} {n}\nh_{} {}", j + 1, j + 1, d.render_power(h)).unwrap();
    }
    s
}

fn report_text(r: &witness::VerificationReport) -> String {
    let c = &r.claim;
    let mut s = String::new();
    writeln!(s, "constants_consistent {}", r.constants_consistent).unwrap();
    writeln!(s, "samples {}", c.samples_checked).unwrap();
    writeln!(s, "claim_failures {}", c.claim_failures).unwrap();
    writeln!(
        s,
        "delzant_failures {} hypothesis, {} conclusion",
        c.delzant_hypothesis_failures, c.delzant_conclusion_failures
    )
    .unwrap();
    if let Some(m) = &c.min_claim_margin {
        writeln!(s, "min_claim_margin {m}").unwrap();
    }
    writeln!(s, "regeneration_ok {}", r.regeneration_ok).unwrap();
    let graphical = match &r.separation.graphical {
        witness::GraphicalEvidence::NotAttempted { reason } => format!("not attempted ({reason})"),
        witness::GraphicalEvidence::Skipped { reason } => format!("skipped ({reason})"),
        witness::GraphicalEvidence::Checked { f_in_q_prime, subgroups_equal } => {
            format!("f in <Q'> {f_in_q_prime}, <Q'> = H {subgroups_equal}")
        }
    };
    writeln!(s, "logical_separation {}", r.separation.logical.holds).unwrap();
    writeln!(s, "graphical_separation {graphical}").unwrap();
    s
}

fn witness_command(c: &WitnessCommand, opts: &Options, ctx: &Context) -> Result<Answer, Failure> {
    match c {
        WitnessCommand::Build { g } => {
            let req = request(g.as_deref(), opts, ctx)?;
            let (class, cert, _) = witness::build(&req)?;
            let Some(cert) = cert else {
                let conclusion = witness::refusal(class);
                let doc = json!({ "classification": class.as_str(), "certificate": null, "statement": conclusion.statement });
                return Ok(Answer::new(conclusion.statement, doc).with_truth(false));
            };
            let doc = serde_json::to_value(CertificateDocument::from_certificate(&cert)).expect("serializable");
            Ok(Answer::new(certificate_text(&cert), doc))
        }
        WitnessCommand::Verify => {
            let path = opts
                .input
                .as_ref()
                .ok_or_else(|| Failure::Input("witness verify needs --input CERTIFICATE.json".into()))?;
            let text = std::fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
            let doc: CertificateDocument =
                serde_json::from_str(&text).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
            let cert = doc.to_certificate()?;
            let report = witness::verify(&cert, sampling(opts), ctx.expand_limit)?;
            let established = report.conclusion.established;
            let json = serde_json::to_value(ReportDocument::new(&cert, sampling(opts), &report)).expect("serializable");
            let text = format!("{}{}", report_text(&report), report.conclusion.statement);
            Ok(Answer::new(text, json).with_truth(established))
        }
        WitnessCommand::Run { g } => {
            let req = request(g.as_deref(), opts, ctx)?;
            let outcome = witness::run(&req, ctx.expand_limit)?;
            let json = serde_json::to_value(OutcomeDocument::new(&outcome, req.sampling)).expect("serializable");
            let mut text = format!("classification {}\n", outcome.class.as_str());
            if let (Some(cert), Some(report)) = (&outcome.certificate, &outcome.report) {
                text.push_str(&certificate_text(cert));
                text.push_str(&report_text(report));
            }
            text.push_str(&outcome.conclusion.statement);
            let ok = outcome.class == InputClass::Ok && outcome.conclusion.established;
            Ok(Answer::new(text, json).with_truth(ok))
        }
    }
}
