use std::path::Path;

use super::germfile::parse_germ_file;
use super::report::Report;
use super::{corpus::CORPUS, Cmd, Outcome, EXIT_DISAGREEMENT, EXIT_DOMAIN, EXIT_USAGE};
use crate::catalog::{
    gamma_system_t4, gamma_system_t4_printed, local_invariants, mult_embdim, normal_form, point_invariants,
    resolution_graph, smoothing_target, sweep, t1_presentation, torsion_profile, ComponentRole, ExtNat,
    SingularityType, SweepBounds,
};
use crate::germ::{
    cluster_types, degree_reports, genus_bookkeeping, k_dot_c, validate, verdict, Convention, DegreeReport,
    GermDescription, Normalization, VerdictKind,
};
use crate::graph::DualGraph;
use crate::hj::{conjugate_type, curve_pullback_on_chain, diff_closed_form, discrepancy_vector, hj_expand, CyclicQuotient};
use crate::render;

struct Failure {
    code: i32,
    message: String,
}

fn domain(e: impl ToString) -> Failure {
    Failure {
        code: EXIT_DOMAIN,
        message: e.to_string(),
    }
}

fn usage(e: impl ToString) -> Failure {
    Failure {
        code: EXIT_USAGE,
        message: e.to_string(),
    }
}

type Res = Result<Report, Failure>;

pub(super) fn dispatch(cmd: Cmd) -> Outcome {
    let res = match cmd {
        Cmd::Check { file } => check(&file),
        Cmd::Degree { file, convention } => degree(&file, convention),
        Cmd::Verdict { file, convention } => verdict_cmd(&file, convention),
        Cmd::Hj { n, a } => hj(n, a),
        Cmd::CuspGraph { kind, params, role, dot } => cusp_graph(&kind, &params, role, dot),
        Cmd::T1 { kind, params, role } => t1(&kind, &params, role),
        Cmd::Verify {
            pmax,
            qmax,
            rmax,
            jobs,
        } => return verify(SweepBounds { pmax, qmax, rmax }, jobs),
        Cmd::Examples { out } => examples(&out),
    };
    match res {
        Ok(r) => Outcome::ok(r.render()),
        Err(f) => Outcome::fail(f.code, format!("error: {}\n", f.message)),
    }
}

fn load(file: &Path) -> Result<GermDescription, Failure> {
    let text = std::fs::read_to_string(file).map_err(|e| domain(format!("{}: {e}", file.display())))?;
    parse_germ_file(&text).map_err(|e| domain(format!("{}:{}: {}", file.display(), e.line, e.message)))
}

/// Loads and refuses germs with structural errors.
fn load_valid(file: &Path) -> Result<GermDescription, Failure> {
    let g = load(file)?;
    let d = validate(&g);
    if !d.is_ok() {
        let lines: Vec<String> = d.errors().map(|e| e.to_string()).collect();
        return Err(domain(format!("{} is not valid\n{}", file.display(), lines.join("\n"))));
    }
    Ok(g)
}

fn check(file: &Path) -> Res {
    let g = load(file)?;
    let d = validate(&g);
    let mut r = Report::default();
    r.line(format!(
        "germ {}: {} components, {} points, {} graphs",
        g.name,
        g.components.len(),
        g.points.len(),
        g.graphs.len()
    ));
    for diag in &d.0 {
        r.line(diag.to_string());
    }
    r.kv("germ", &g.name);
    for (gid, graph) in &g.graphs {
        for ct in cluster_types(graph) {
            r.line(format!("graph {gid}: chain {} is {} seen from {}", ct.curves.join("-"), ct.quotient, ct.anchor));
            let key = format!("{gid}.{}", ct.curves.join("+"));
            r.kv(format!("cluster.{key}"), ct.quotient);
            r.kv(format!("cluster_anchor.{key}"), &ct.anchor);
        }
    }
    if d.is_ok() {
        for c in g.component_ids() {
            if let Ok(v) = crate::germ::ctilde_sq(&g, &c) {
                r.kv(format!("ctilde_sq.{c}"), render(&v));
            }
        }
    }
    let errors = d.errors().count();
    r.kv("errors", errors);
    r.kv("warnings", d.0.len() - errors);
    r.kv("status", if errors == 0 { "ok" } else { "invalid" });
    if errors > 0 {
        return Err(domain(r.render()));
    }
    Ok(r)
}

fn or_none(v: &[String]) -> String {
    if v.is_empty() {
        "none".into()
    } else {
        v.join(",")
    }
}

fn degree_block(r: &mut Report, g: &GermDescription, d: &DegreeReport, convention: Convention) -> Result<(), Failure> {
    let c = &d.census;
    r.line(format!("component {}", d.component));
    r.line(format!("  C~^2 = {}", render(&d.ctilde_sq)));
    r.line(format!(
        "  census: pinch {} c1 {} c2 {} slt {} U3 {} W4 {} V4 {} m {} nc {}",
        c.pinch, c.c1, c.c2, c.slt, c.u3, c.w4, c.v4, c.m, c.nc
    ));
    r.line(format!("  deg L = {} (theorem)", render(&d.degree_theorem)));
    if d.conventions_differ() {
        r.line(format!(
            "  deg L = {} (example convention, alpha3 - 1; differs by {} T3 points)",
            render(&d.degree_example_convention),
            c.u3
        ));
    }
    match &d.degree_proof_path {
        Some(v) => r.line(format!("  deg L = {} (from local graphs)", render(v))),
        None => r.line("  local graphs unavailable for some point"),
    }
    if !d.torsion_summands.is_empty() {
        r.line(format!("  torsion at {}", d.torsion_summands.join(", ")));
    }
    let gb = genus_bookkeeping(g, &d.component).map_err(domain)?;
    match gb.pa_cprime {
        Some(pa) => r.line(format!("  p_a(C') = {pa}")),
        None => r.line(format!("  2p_a(C') - 2 = {} is odd: census inconsistent", gb.euler)),
    }

    r.kv("component", &d.component);
    r.kv("ctilde_sq", render(&d.ctilde_sq));
    for (k, v) in [
        ("nc", c.nc),
        ("pinch", c.pinch),
        ("c1", c.c1),
        ("c2", c.c2),
        ("slt", c.slt),
        ("u3", c.u3),
        ("u4", c.u4()),
        ("w4", c.w4),
        ("v4", c.v4),
        ("m", c.m),
    ] {
        r.kv(format!("census.{k}"), v);
    }
    r.kv("alpha_sum", render(&d.alpha_sum));
    r.kv("degree_theorem", render(&d.degree_theorem));
    r.kv("degree_example_convention", render(&d.degree_example_convention));
    r.kv("conventions_differ", d.conventions_differ());
    r.kv(
        "degree_proof_path",
        d.degree_proof_path.as_ref().map_or("unavailable".into(), render),
    );
    r.kv("degree", render(d.degree(convention)));
    r.kv("torsion", or_none(&d.torsion_summands));
    r.kv("genus.euler", gb.euler);
    r.kv("genus.pa_cprime", gb.pa_cprime.map_or("undefined".into(), |v| v.to_string()));
    Ok(())
}

fn degree(file: &Path, convention: Convention) -> Res {
    let g = load_valid(file)?;
    let mut r = Report::default();
    r.line(format!("germ {}, convention {convention}", g.name));
    r.kv("germ", &g.name);
    r.kv("convention", convention);
    for d in degree_reports(&g).map_err(domain)? {
        degree_block(&mut r, &g, &d, convention)?;
    }
    Ok(r)
}

fn verdict_cmd(file: &Path, convention: Convention) -> Res {
    let g = load_valid(file)?;
    let v = verdict(&g, convention).map_err(domain)?;
    let mut r = Report::default();
    r.kv("germ", &g.name);
    r.kv("verdict", v.kind.token());
    r.kv("convention", convention);
    let human = match &v.kind {
        VerdictKind::GloballySmoothable { .. } => "globally Q-Gorenstein smoothable".to_string(),
        VerdictKind::NotSmoothable { component, degree } => {
            format!("not globally smoothable: deg L = {} < 0 on {component}", render(degree))
        }
        VerdictKind::ExtremalNeighborhood { .. } => {
            "globally smoothable, and every K.C < 0: the smoothing gives an extremal neighborhood".to_string()
        }
        VerdictKind::Inconclusive { missing } => format!("inconclusive, missing {}", missing.join(", ")),
    };
    r.line(format!("germ {}: {human} (convention {convention})", g.name));

    if !matches!(v.kind, VerdictKind::Inconclusive { .. }) {
        for d in degree_reports(&g).map_err(domain)? {
            r.kv(format!("degree.{}", d.component), render(d.degree(convention)));
            if d.conventions_differ() {
                r.line(format!(
                    "  {}: deg L = {} (theorem), {} (example convention)",
                    d.component,
                    render(&d.degree_theorem),
                    render(&d.degree_example_convention)
                ));
                r.kv(format!("degree_theorem.{}", d.component), render(&d.degree_theorem));
                r.kv(
                    format!("degree_example_convention.{}", d.component),
                    render(&d.degree_example_convention),
                );
            }
        }
        for c in g.component_ids() {
            if let Normalization::FromGraph { .. } = g.component(&c).map_err(domain)?.normalization {
                let k = k_dot_c(&g, &c).map_err(domain)?;
                r.line(format!("  K.{c} = {}", render(&k)));
                r.kv(format!("k_dot_c.{c}"), render(&k));
            }
        }
    }
    match &v.kind {
        VerdictKind::NotSmoothable { component, degree } => {
            r.kv("witness", component);
            r.kv("witness_degree", render(degree));
        }
        VerdictKind::GloballySmoothable { targets } | VerdictKind::ExtremalNeighborhood { targets, .. } => {
            for (p, t) in targets {
                r.line(format!("  {p} smooths to {t}"));
                r.kv(format!("target.{p}"), t);
            }
        }
        VerdictKind::Inconclusive { missing } => r.kv("missing", missing.join(",")),
    }
    Ok(r)
}

fn chain_text(c: &[u64]) -> String {
    let v: Vec<String> = c.iter().map(u64::to_string).collect();
    format!("[{}]", v.join(","))
}

fn hj(n: u64, a: u64) -> Res {
    let q = CyclicQuotient::new(n, a).map_err(domain)?;
    let conj = conjugate_type(q);
    let disc = discrepancy_vector(q).map_err(domain)?;
    let pb = curve_pullback_on_chain(q).map_err(domain)?;
    let g = DualGraph::hj_chain(q, "C", -1);
    let cl = g.exceptional_clusters();
    let diff = g.different_at_cluster("C", &cl[0]).map_err(domain)?;
    let closed = diff_closed_form(n).map_err(domain)?;
    let mut r = Report::default();
    r.line(format!("{q}: chain {}", chain_text(&hj_expand(q))));
    r.line(format!("read from the other end: {conj}, chain {}", chain_text(&hj_expand(conj))));
    r.line(format!("discrepancies {}", crate::arith::render_list(&disc)));
    r.line(format!("different of a curve through the first curve: {}", render(&diff)));
    r.kv("type", q);
    r.kv("chain", chain_text(&hj_expand(q)));
    r.kv("conjugate", conj);
    r.kv("conjugate_chain", chain_text(&hj_expand(conj)));
    r.kv("discrepancies", crate::arith::render_list(&disc));
    r.kv("curve_pullback", crate::arith::render_list(&pb));
    r.kv("different", render(&diff));
    r.kv("different_closed", render(&closed));
    Ok(r)
}

fn parse_type(kind: &str, params: &[String]) -> Result<SingularityType, Failure> {
    let names: &[&str] = match kind {
        "nc" | "pinch" | "cusp1" => &[],
        "slt" => &["n", "a"],
        "cusp2" => &["n"],
        "cusp3" => &["p", "q"],
        "cusp4" => &["p", "q", "r"],
        _ => return Err(usage(format!("unknown type `{kind}`"))),
    };
    if params.len() != names.len() {
        return Err(usage(format!(
            "`{kind}` takes {} parameters ({}), got {}",
            names.len(),
            names.join(" "),
            params.len()
        )));
    }
    let ext = |i: usize| -> Result<ExtNat, Failure> {
        params[i]
            .parse()
            .map_err(|_| usage(format!("bad value `{}` for {}", params[i], names[i])))
    };
    let t = match kind {
        "nc" => SingularityType::NormalCrossing,
        "pinch" => SingularityType::Pinch,
        "cusp1" => SingularityType::DegCusp1,
        "cusp2" => SingularityType::DegCusp2 { n: ext(0)? },
        "cusp3" => SingularityType::DegCusp3 { p: ext(0)?, q: ext(1)? },
        "cusp4" => SingularityType::DegCusp4 {
            p: ext(0)?,
            q: ext(1)?,
            r: ext(2)?,
        },
        _ => {
            let (ExtNat::Finite(n), ExtNat::Finite(a)) = (ext(0)?, ext(1)?) else {
                return Err(usage("slt parameters must be finite"));
            };
            SingularityType::slt(n, a).map_err(domain)?
        }
    };
    t.validate().map_err(domain)?;
    Ok(t)
}

fn cusp_graph(kind: &str, params: &[String], role: Option<ComponentRole>, dot: bool) -> Res {
    let t = parse_type(kind, params)?;
    let rg = resolution_graph(t, role).map_err(domain)?;
    let mut r = Report::default();
    if dot {
        r.human = rg.graph.to_dot().lines().map(str::to_string).collect();
        return Ok(r);
    }
    let role_text = role.map_or(String::new(), |ro| format!(" as {ro}"));
    r.line(format!("{t}{role_text}: {}", rg.shape));
    for c in rg.graph.curves() {
        let mark = if c.retained { " retained" } else { "" };
        r.line(format!("  curve {} ({}){mark}", c.id, c.self_intersection));
    }
    for (a, b, m) in rg.graph.edges() {
        let mult = if m > 1 { format!(" x{m}") } else { String::new() };
        r.line(format!("  edge {a} {b}{mult}"));
    }
    for note in &rg.notes {
        r.line(format!("  note: {note}"));
    }
    r.kv("type", t);
    if let Some(ro) = role {
        r.kv("role", ro);
    }
    r.kv("shape", rg.shape);
    r.kv("branch", or_none(&rg.branches));
    let kept: Vec<String> = rg.kept.iter().map(|(k, _)| k.clone()).collect();
    r.kv("kept", or_none(&kept));
    for (id, v) in &rg.stated {
        r.kv(format!("stated.{id}"), render(v));
    }
    if !rg.graph.curves().is_empty() {
        let gi = local_invariants(&rg).map_err(domain)?;
        for (id, v) in &gi.kept_sq {
            r.kv(format!("kept_sq.{id}"), render(v));
        }
        if let Some(v) = &gi.kept_pair {
            r.kv("kept_pair", render(v));
        }
        for (id, v) in &gi.branch_dot_kept {
            r.kv(format!("branch_dot.{id}"), render(v));
        }
        if let (Some(b), Some(d)) = (&gi.beta, &gi.delta) {
            r.kv("graph.beta", render(b));
            r.kv("graph.delta", render(d));
        }
    }
    let inv = point_invariants(t, role).map_err(domain)?;
    r.kv("census_class", inv.census_class.token());
    r.kv("beta", render(&inv.beta));
    r.kv("delta", render(&inv.delta));
    r.kv("alpha", render(&inv.alpha));
    if let SingularityType::DegCusp4 {
        p: ExtNat::Finite(p),
        q: ExtNat::Finite(q),
        r: ExtNat::Finite(rr),
    } = t
    {
        if p >= 3 && q >= 3 {
            let g = gamma_system_t4(p, q, rr).map_err(domain)?;
            let printed = gamma_system_t4_printed(p, q, rr).map_err(domain)?;
            r.kv("gamma", crate::arith::render_list(&g.gamma));
            r.kv("gamma_delta", render(&g.delta4));
            r.kv("printed_gamma_delta", render(&printed.delta4));
            if printed.delta4 != g.delta4 {
                r.line(format!(
                    "  printed gamma coefficients give delta = {}, intersection numbers give {}",
                    render(&printed.delta4),
                    render(&g.delta4)
                ));
            }
        }
    }
    Ok(r)
}

fn t1(kind: &str, params: &[String], role: Option<ComponentRole>) -> Res {
    let t = parse_type(kind, params)?;
    let nf = normal_form(t, role).map_err(domain)?;
    let mut r = Report::default();
    r.line(format!("{t}: {nf}"));
    r.kv("type", t);
    for (i, e) in nf.equations.iter().enumerate() {
        r.kv(format!("equation.{}", i + 1), e);
    }
    r.kv("curve", &nf.curve);
    if let Some(g2) = t.gamma_sq() {
        let (m, e) = mult_embdim(g2).map_err(domain)?;
        r.kv("multiplicity", m);
        r.kv("embedding_dimension", e);
    }
    match t1_presentation(t) {
        Ok(p) => {
            r.line(format!("T1 = {p}"));
            r.kv("t1", p);
        }
        Err(e) => {
            r.line(format!("T1: {e}"));
            r.kv("t1", "unavailable");
        }
    }
    let tp = torsion_profile(t);
    r.kv("embedded_point", tp.embedded_point);
    r.kv("restriction_torsion", tp.restriction_torsion);
    let target = smoothing_target(t);
    r.line(format!("general fiber of a smoothing: {target}"));
    r.kv("smoothing_target", target);
    Ok(r)
}

fn verify(b: SweepBounds, jobs: usize) -> Outcome {
    let rep = match sweep(b, jobs) {
        Ok(rep) => rep,
        Err(e) => return Outcome::fail(EXIT_DOMAIN, format!("error: {e}\n")),
    };
    let mut r = Report::default();
    r.line(format!(
        "swept p <= {}, q <= {}, r <= {} with infinities: {} cases, {} checks",
        b.pmax, b.qmax, b.rmax, rep.cases, rep.checks
    ));
    r.line(format!("{} disagreements", rep.disagreements.len()));
    for c in &rep.disagreements {
        r.line(format!("  {c}"));
    }
    r.line(format!(
        "printed gamma coefficients miss the closed form on {} triples",
        rep.printed_mismatches.len()
    ));
    r.kv("cases", rep.cases);
    r.kv("checks", rep.checks);
    r.kv("disagreements", rep.disagreements.len());
    for (i, c) in rep.disagreements.iter().enumerate() {
        r.kv(
            format!("disagreement.{}", i + 1),
            format!("{} | {} | {} | {}", c.case, c.quantity, render(&c.left), render(&c.right)),
        );
    }
    r.kv("printed_mismatches", rep.printed_mismatches.len());
    r.kv("known_typo_confirmed", rep.known_typo_confirmed);
    let code = if rep.disagreements.is_empty() { 0 } else { EXIT_DISAGREEMENT };
    Outcome {
        code,
        stdout: r.render(),
        stderr: String::new(),
    }
}

fn examples(out: &Path) -> Res {
    std::fs::create_dir_all(out).map_err(|e| domain(format!("{}: {e}", out.display())))?;
    let mut r = Report::default();
    for (name, text) in CORPUS {
        let path = out.join(name);
        std::fs::write(&path, text).map_err(|e| domain(format!("{}: {e}", path.display())))?;
        r.line(format!("wrote {}", path.display()));
    }
    r.kv("written", CORPUS.len());
    Ok(r)
}
