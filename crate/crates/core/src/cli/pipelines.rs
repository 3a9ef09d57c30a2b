use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};

use super::config::{input, opt_f64, opt_num, parse_f64, parse_num};
use super::{CliError, Command, Outcome, RunConfig};
use crate::hopf::{
    build_covering, classify_hopf, covering_monte_carlo, h0_monomial_oracle, hopf_precheck, hopf_transition_graph,
    shilov_constant, transition_chain_search, uniform_base_radii, vanishing_predicate, zhou_transition_graph, Factor,
    Fields, FlatBundleDoc, HopfError, HopfKind, HopfSpec, HopfSpecDoc, PieceGeometry, TorsionDoc, TransitionGraph,
    Variant,
};
use crate::linearizer::{
    certify_domination, eta_sequence, fit_constants, full_linearize, generate_commuting_decks,
    majorant_functional_solve, vertical_linearize, DeckPerturbation, DeckPerturbationDoc, DominationLadder,
    GeneratorSpec, LinearizerError, PhiShape, Profile,
};
use crate::scalar::{parse_exact, Coeff, DecimalComplex, ExactComplex, Mode};
use crate::series::{GridSpec, Series, SeriesVec};
use crate::small_divisors::{diophantine_scan, DiophantineReport, DivisorWitness, Direction, ScanMode};
use crate::toroidal::{
    convex_extension_eta, shear_to_standard, validate_irrationality, DeckLinearData, DomainSpec, Irrationality,
    ToroidalSpecDoc,
};

type Res<T> = Result<T, CliError>;

pub(crate) fn dispatch(cfg: &RunConfig) -> Res<Outcome> {
    match cfg.command {
        Command::ToroidalValidate => toroidal_validate(cfg),
        Command::HopfCover => hopf_cover(cfg),
        Command::Shilov => shilov(cfg),
        cmd => match cfg.mode {
            Mode::Exact => generic::<ExactComplex>(cmd, cfg),
            Mode::Float => generic::<Complex64>(cmd, cfg),
        },
    }
}

fn generic<C: Coeff>(cmd: Command, cfg: &RunConfig) -> Res<Outcome> {
    match cmd {
        Command::DiophScan => dioph_scan::<C>(cfg),
        Command::Linearize => linearize::<C>(cfg),
        Command::Certify => certify::<C>(cfg),
        Command::HopfClassify => hopf_classify::<C>(cfg),
        Command::HopfPrecheck => hopf_precheck_cmd::<C>(cfg),
        _ => unreachable!("mode-independent command"),
    }
}

fn section<'a, T>(s: &'a Option<T>, name: &str) -> Res<&'a T> {
    s.as_ref()
        .ok_or_else(|| CliError::Input(format!("config needs a [{name}] section")))
}

fn convert<C: Coeff>(x: &ExactComplex) -> C {
    let (re, im) = x.re_im_strings();
    C::parse_parts(&re, &im).expect("rational strings parse in every mode")
}

fn convert_pert<C: Coeff>(p: &DeckPerturbation<ExactComplex>) -> DeckPerturbation<C> {
    let m = |rows: &Vec<Vec<ExactComplex>>| rows.iter().map(|r| r.iter().map(convert).collect()).collect();
    DeckPerturbation {
        decks: DeckLinearData {
            lambda: m(&p.decks.lambda),
            mu: m(&p.decks.mu),
        },
        tau_star: p
            .tau_star
            .iter()
            .map(|v| v.iter().map(|s| s.map_coeffs(convert)).collect())
            .collect(),
    }
}

struct DeckInput<C: Coeff> {
    pert: DeckPerturbation<C>,
    phi0: Option<SeriesVec<C>>,
    shape: Option<PhiShape>,
}

fn parse_profile(s: &str) -> Res<Profile> {
    match s {
        "coboundary" => Ok(Profile::Coboundary),
        "generic" => Ok(Profile::Generic),
        "linear" => Ok(Profile::Linear),
        _ => Err(CliError::Input(format!("unknown profile {s:?}"))),
    }
}

fn parse_shape(s: &str) -> Res<PhiShape> {
    match s {
        "mixed" => Ok(PhiShape::Mixed),
        "vertical" => Ok(PhiShape::Vertical),
        "horizontal" => Ok(PhiShape::Horizontal),
        _ => Err(CliError::Input(format!("unknown shape {s:?}"))),
    }
}

fn load_decks<C: Coeff>(cfg: &RunConfig) -> Res<DeckInput<C>> {
    let sec = section(&cfg.file.decks, "decks")?;
    match (&sec.file, &sec.generator) {
        (Some(f), None) => {
            let text = std::fs::read_to_string(cfg.path(f)).map_err(input)?;
            let doc: DeckPerturbationDoc = serde_json::from_str(&text).map_err(input)?;
            let exact = doc.tau_star.iter().flatten().all(|s| s.mode == Mode::Exact.as_str());
            let pert = if exact && C::MODE == Mode::Float {
                convert_pert(&DeckPerturbation::<ExactComplex>::from_doc(&doc).map_err(input)?)
            } else {
                DeckPerturbation::<C>::from_doc(&doc).map_err(input)?
            };
            Ok(DeckInput {
                pert,
                phi0: None,
                shape: None,
            })
        }
        (None, Some(g)) => {
            let mut spec = GeneratorSpec::new(
                parse_num("q", &g.q)?,
                parse_num("n_h", &g.n_h)?,
                parse_num("d", &g.d)?,
                parse_num("N_v", &g.n_v)?,
            );
            if spec.q == 0 || spec.d == 0 || spec.n_v < 2 {
                return Err(CliError::Input("generator needs q, d >= 1 and N_v >= 2".into()));
            }
            if let Some(p) = &g.profile {
                spec.profile = parse_profile(p)?;
            }
            if let Some(s) = &g.shape {
                spec.shape = parse_shape(s)?;
            }
            if let Some(a) = &g.amplitude {
                let r = parse_exact(a).map_err(input)?;
                match (r.numer().to_i64(), r.denom().to_i64()) {
                    (Some(n), Some(d)) => spec.amplitude = (n, d),
                    _ => return Err(CliError::Input("amplitude out of range".into())),
                }
            }
            let g = generate_commuting_decks(cfg.seed, &spec).map_err(input)?;
            Ok(DeckInput {
                pert: convert_pert(&g.pert),
                phi0: g.phi0.map(|v| v.iter().map(|s| s.map_coeffs(convert)).collect()),
                shape: Some(spec.shape),
            })
        }
        _ => Err(CliError::Input("[decks] needs exactly one of file or generator".into())),
    }
}

fn problem(cfg: &RunConfig) -> Res<ScanMode> {
    let p = cfg.file.decks.as_ref().and_then(|d| d.problem.as_deref()).unwrap_or("full");
    p.parse().map_err(|_| CliError::Input(format!("unknown problem {p:?}")))
}

fn direction(cfg: &RunConfig) -> Res<Direction> {
    let p = cfg.file.decks.as_ref().and_then(|d| d.direction.as_deref()).unwrap_or("forward");
    p.parse().map_err(|_| CliError::Input(format!("unknown direction {p:?}")))
}

fn scan_bound<C: Coeff>(cfg: &RunConfig, pert: &DeckPerturbation<C>) -> Res<u32> {
    let default = pert.trunc().n_v + 2;
    opt_num("scan_bound", &cfg.file.decks.as_ref().and_then(|d| d.scan_bound.clone()), default)
}

fn witness(w: &DivisorWitness) -> String {
    format!("(P, Q) = ({:?}, {:?}) target {} deck {}", w.p, w.q, w.target, w.l + 1)
}

fn scan_checks(out: &mut Outcome, rep: &DiophantineReport) {
    match rep.resonances.first() {
        Some(w) => out.check("nonresonant", false, format!("resonance at {}", witness(w))),
        None => {
            let at = rep.argmin.as_ref().map(witness).unwrap_or_default();
            out.check("nonresonant", true, format!("min divisor {:e} at {at}", rep.min_divisor));
        }
    }
    if rep.resonances.is_empty() {
        match (rep.d, rep.tau, rep.violations.first()) {
            (Some(d), Some(t), None) => out.check(
                "Diophantine bound",
                true,
                format!("D = {d:e}, tau = {t} over {} points", rep.points),
            ),
            (_, _, Some(w)) => out.check("Diophantine bound", false, format!("violated at {}", witness(w))),
            _ => out.check("Diophantine bound", false, "no constants fitted"),
        }
    }
}

fn run_scan<C: Coeff>(out: &mut Outcome, decks: &DeckLinearData<C>, n: u32, mode: ScanMode) -> Res<DiophantineReport> {
    let rep = diophantine_scan(decks, n, mode).map_err(input)?;
    out.stage("scan", &rep);
    scan_checks(out, &rep);
    Ok(rep)
}

fn dioph_scan<C: Coeff>(cfg: &RunConfig) -> Res<Outcome> {
    let d = load_decks::<C>(cfg)?;
    let mut out = Outcome::default();
    run_scan(&mut out, &d.pert.decks, scan_bound(cfg, &d.pert)?, problem(cfg)?)?;
    Ok(out)
}

fn residual_tol<C: Coeff>() -> f64 {
    match C::MODE {
        Mode::Exact => 0.0,
        Mode::Float => 1e-9,
    }
}

fn max_diff<C: Coeff>(a: &[Series<C>], b: &[Series<C>]) -> Res<f64> {
    let mut worst = 0.0f64;
    for (x, y) in a.iter().zip(b) {
        worst = worst.max(x.sub(y).map_err(input)?.max_abs());
    }
    Ok(worst)
}

fn solve<C: Coeff>(
    out: &mut Outcome,
    cfg: &RunConfig,
    d: &DeckInput<C>,
    mode: ScanMode,
) -> Res<Option<SeriesVec<C>>> {
    let rep = run_scan(out, &d.pert.decks, scan_bound(cfg, &d.pert)?, mode)?;
    if !rep.passed() {
        return Ok(None);
    }
    let dir = direction(cfg)?;
    let res = match mode {
        ScanMode::Full => full_linearize(&d.pert, &rep, dir),
        ScanMode::Vertical => vertical_linearize(&d.pert, &rep, dir),
    }
    .map_err(input)?;
    out.stage("linearization", &res.to_doc());
    let tol = residual_tol::<C>();
    let worst = res.max_residual();
    if worst <= tol {
        out.check(
            "conjugacy",
            true,
            format!("residuals {} through degree {}", if tol == 0.0 { "0" } else { "below 1e-9" }, res.n_v),
        );
    } else {
        let deg = res
            .residual_per_degree
            .iter()
            .position(|r| *r > tol)
            .unwrap_or_default();
        out.check("conjugacy", false, format!("residual {worst:e}, first at degree {deg}"));
    }
    if let Some(phi0) = &d.phi0 {
        let nh = d.pert.decks.n_h();
        let target = match mode {
            ScanMode::Full => Some(&phi0[..]),
            ScanMode::Vertical if d.shape == Some(PhiShape::Vertical) => Some(&phi0[nh..]),
            ScanMode::Vertical => None,
        };
        if let Some(t) = target {
            let diff = max_diff(&res.phi, t)?;
            let tol = residual_tol::<C>().max(if C::MODE == Mode::Float { 1e-10 } else { 0.0 });
            out.check("hidden conjugacy recovered", diff <= tol, format!("max coefficient difference {diff:e}"));
        }
    }
    Ok(Some(res.phi))
}

fn linearize<C: Coeff>(cfg: &RunConfig) -> Res<Outcome> {
    let d = load_decks::<C>(cfg)?;
    let mut out = Outcome::default();
    solve(&mut out, cfg, &d, problem(cfg)?)?;
    Ok(out)
}

fn certify<C: Coeff>(cfg: &RunConfig) -> Res<Outcome> {
    let d = load_decks::<C>(cfg)?;
    let mode = problem(cfg)?;
    let mut out = Outcome::default();
    let phi = match solve(&mut out, cfg, &d, mode)? {
        Some(p) => p,
        None => return Ok(out),
    };
    let default = super::CertifySection::default();
    let c = cfg.file.certify.as_ref().unwrap_or(&default);
    let m_max = opt_num("m_max", &c.m_max, 6usize)?;
    let r1 = opt_f64("r1", &c.r1, 0.5)?;
    let eps1 = opt_f64("eps1", &c.eps1, 0.2)?;
    let kappa = opt_f64("kappa", &c.kappa, 1.0)?;
    let mut ladder = DominationLadder::new(r1, eps1);
    ladder.theta1 = opt_f64("theta1", &c.theta1, ladder.theta1)?;
    ladder.kappa = kappa;
    ladder.angles = opt_num("angles", &c.angles, ladder.angles)?;
    let eta_top = opt_num("eta_check_up_to", &c.eta_check_up_to, 40usize)?;
    if !(r1 > 0.0 && eps1 > 0.0 && kappa > 0.0 && ladder.angles > 0 && m_max >= 2) {
        return Err(CliError::Input("certify needs positive r1, eps1, kappa, angles and m_max >= 2".into()));
    }

    let (nh, dv) = (d.pert.decks.n_h(), d.pert.decks.d());
    let th = ladder.theta1;
    let grid = GridSpec::uniform(nh, &[(-th).exp(), 1.0, th.exp()], dv, r1, ladder.angles);
    let vrep = match mode {
        ScanMode::Vertical => diophantine_scan(&d.pert.decks, scan_bound(cfg, &d.pert)?, ScanMode::Vertical),
        ScanMode::Full => diophantine_scan(&d.pert.decks, scan_bound(cfg, &d.pert)?, ScanMode::Vertical),
    }
    .map_err(input)?;
    let consts = fit_constants(&d.pert, &vrep, ScanMode::Vertical, &grid, kappa).map_err(input)?;
    out.stage("constants", &consts);

    let eta = eta_sequence(consts.c1, consts.eta_margin, consts.tau, consts.nu, eta_top).map_err(input)?;
    out.check(
        "eta growth",
        eta.growth_holds(),
        format!("eta_m <= D^m for m <= {eta_top}, ln D = {:.6}", eta.log_d),
    );
    out.stage("eta", &eta);

    if mode == ScanMode::Full {
        let full = majorant_functional_solve(ScanMode::Full, &consts, m_max).map_err(input)?;
        out.stage("full_majorant", &full);
    }
    let cert = match majorant_functional_solve(ScanMode::Vertical, &consts, m_max) {
        Ok(c) => c,
        Err(LinearizerError::NegativeCoefficient { degree, value }) => {
            out.check("majorant nonnegative", false, format!("A_{degree} = {value:e}"));
            return Ok(out);
        }
        Err(e) => return Err(input(e)),
    };
    out.check("majorant nonnegative", true, format!("A_m, B_m >= 0 for m <= {m_max}"));
    out.stage("majorant", &cert);
    let vertical_phi = match mode {
        ScanMode::Full => &phi[nh..],
        ScanMode::Vertical => &phi[..],
    };
    let dom = certify_domination(vertical_phi, &d.pert.decks, &cert, &ladder).map_err(input)?;
    let detail = match dom.first_failure {
        Some(m) => format!("bound fails at degree {m}"),
        None => format!("sup |phi_m| <= A_m eta_m through degree {}", dom.a_checks.len() + 1),
    };
    out.check("domination", dom.pass, detail);
    out.stage("domination", &dom);
    Ok(out)
}

fn pair(p: &[String; 2]) -> DecimalComplex {
    DecimalComplex::Parts {
        re: p[0].clone(),
        im: p[1].clone(),
    }
}

fn hopf_data<C: Coeff>(cfg: &RunConfig) -> Res<(HopfSpec<C>, Option<crate::hopf::FlatBundle<C>>, u32)> {
    let h = section(&cfg.file.hopf, "hopf")?;
    let doc = HopfSpecDoc {
        alpha: h.alpha.iter().map(pair).collect(),
        jordan_overdiag: h.jordan.clone(),
        torsion: match &h.torsion {
            Some(t) => Some(TorsionDoc {
                m: parse_num("torsion.m", &t.m)?,
                a: pair(&t.a),
            }),
            None => None,
        },
    };
    let spec = doc.parse::<C>().map_err(input)?;
    let bundle = match &h.beta {
        Some(b) => Some(
            FlatBundleDoc {
                beta: pair(b),
                d_char: h.d_char.as_ref().map(pair),
            }
            .parse::<C>()
            .map_err(input)?,
        ),
        None => None,
    };
    let bound = opt_num("bound", &h.bound, 12u32)?;
    Ok((spec, bundle, bound))
}

fn hopf_classify<C: Coeff>(cfg: &RunConfig) -> Res<Outcome> {
    let (spec, bundle, bound) = hopf_data::<C>(cfg)?;
    let mut out = Outcome::default();
    let class = classify_hopf(&spec, bound);
    let detail = match &class.relation {
        Some(r) => format!("{:?}, relation alpha^{:?} = alpha^{:?}", class.kind, r.lhs, r.rhs),
        None => format!("{:?}: {}", class.kind, class.reason),
    };
    out.check("classification", true, detail.to_lowercase());
    out.stage("classification", &class);
    let Some(bundle) = bundle else {
        return Ok(out);
    };
    let variant = match cfg.file.hopf.as_ref().and_then(|h| h.variant.as_deref()) {
        Some(v) => v.parse::<Variant>().map_err(CliError::Input)?,
        None => match (class.kind, spec.torsion.is_some()) {
            (HopfKind::Classical, true) => Variant::Zhou1,
            (HopfKind::Classical, false) => Variant::Classical,
            (_, true) => Variant::Zhou2,
            _ => Variant::MallGeneric,
        },
    };
    let verdict = match vanishing_predicate(&bundle, &spec, variant, bound) {
        Ok(v) => v,
        Err(HopfError::Mismatch(m)) => {
            out.check("vanishing criterion", false, m);
            return Ok(out);
        }
        Err(e) => return Err(input(e)),
    };
    let mut detail = verdict.reason.clone();
    if let Some(w) = &verdict.witness {
        detail.push_str(&format!(", witness v = {w:?}"));
    }
    out.check("vanishing criterion", verdict.criterion_holds, detail);
    out.stage("vanishing", &verdict);
    if !spec.is_jordan() {
        let count = h0_monomial_oracle(&bundle, &spec, bound).map_err(input)?;
        let consistent = !verdict.h0_vanishes || count.count == 0;
        out.check(
            "monomial sections",
            consistent,
            format!("{} with |v|_1 <= {bound}", count.count),
        );
        out.stage("h0_monomials", &count);
    }
    Ok(out)
}

fn hopf_precheck_cmd<C: Coeff>(cfg: &RunConfig) -> Res<Outcome> {
    let (spec, bundle, bound) = hopf_data::<C>(cfg)?;
    let bundle = bundle.ok_or_else(|| CliError::Input("hopf-precheck needs beta".into()))?;
    let n_v = opt_num("N_v", &cfg.file.hopf.as_ref().and_then(|h| h.n_v.clone()), 6u32)?;
    let list = hopf_precheck(&bundle, &spec, n_v, bound);
    let mut out = Outcome::default();
    for item in &list.items {
        let detail = match &item.witness {
            Some(w) => format!("witness v = {w:?}"),
            None => String::new(),
        };
        out.check(item.condition.clone(), item.pass, detail);
    }
    out.stage("checklist", &list);
    Ok(out)
}

fn complex64(name: &str, p: &[String; 2]) -> Res<Complex64> {
    Ok(Complex64::new(parse_f64(name, &p[0])?, parse_f64(name, &p[1])?))
}

fn covering_from(cfg: &RunConfig) -> Res<Result<crate::hopf::NestedCoveringSpec, HopfError>> {
    let c = section(&cfg.file.cover, "cover")?;
    let alpha = c
        .alpha_abs
        .iter()
        .map(|s| parse_exact(s).map_err(input))
        .collect::<Res<Vec<BigRational>>>()?;
    let r1 = if c.r1.is_empty() {
        let outer = match &c.outer {
            Some(o) => parse_exact(o).map_err(input)?,
            None => BigRational::one(),
        };
        uniform_base_radii(&alpha, &outer)
    } else {
        c.r1.iter()
            .map(|s| parse_exact(s).map_err(input))
            .collect::<Res<Vec<BigRational>>>()?
    };
    let delta = parse_f64("delta", &c.delta)?;
    Ok(build_covering(&alpha, delta, &r1))
}

fn hopf_cover(cfg: &RunConfig) -> Res<Outcome> {
    let c = section(&cfg.file.cover, "cover")?;
    let mut out = Outcome::default();
    let cov = match covering_from(cfg)? {
        Ok(cov) => cov,
        Err(e) => {
            out.check("covering construction", false, e.to_string());
            return Ok(out);
        }
    };
    out.stage("covering", &cov.to_doc());
    let exact = cov.r4.iter().zip(&cov.alpha_abs).zip(&cov.r1).all(|((r4, a), r1)| r4 * a == *r1);
    out.check("r4 |alpha| = r1", exact, "exact rational check");
    out.check("pieces cover", cov.covers, format!("delta = {}", cov.delta));
    let samples = opt_num("samples", &c.samples, 10_000usize)?;
    let mc = covering_monte_carlo(&cov, samples, cfg.seed);
    out.check(
        "Monte-Carlo covering",
        mc.pass(),
        format!(
            "{} samples, {} uncovered, {} triple overlaps",
            mc.samples, mc.uncovered, mc.triple_overlaps
        ),
    );
    out.stage("monte_carlo", &mc);
    let n = cov.n();
    let graph: Option<TransitionGraph> = match c.graph.as_deref().unwrap_or("hopf") {
        "hopf" => match &c.beta {
            Some(b) => Some(hopf_transition_graph(n, complex64("beta", b)?)),
            None => None,
        },
        "zhou" => {
            let cc = c.c.as_ref().ok_or_else(|| CliError::Input("zhou graph needs c".into()))?;
            let dd = c.d.as_ref().ok_or_else(|| CliError::Input("zhou graph needs d".into()))?;
            Some(zhou_transition_graph(n, complex64("c", cc)?, complex64("d", dd)?))
        }
        g => return Err(CliError::Input(format!("unknown graph {g:?}"))),
    };
    if let Some(g) = graph {
        g.validate().map_err(input)?;
        let chains = transition_chain_search(&g);
        let missing: Vec<&str> = chains
            .iter()
            .zip(&g.nodes)
            .filter(|(c, _)| c.is_none())
            .map(|(_, n)| n.as_str())
            .collect();
        let detail = if missing.is_empty() {
            format!("chains from all {} pieces", g.nodes.len())
        } else {
            format!("no chain from {}", missing.join(", "))
        };
        out.check("transition chains", missing.is_empty(), detail);
        out.stage("chains", &chains);
    }
    Ok(out)
}

fn shilov(cfg: &RunConfig) -> Res<Outcome> {
    let s = section(&cfg.file.shilov, "shilov")?;
    let fields = match s.fields.as_str() {
        "diagonal" => Fields::Diagonal,
        "jordan" => {
            let a = s.alpha.as_ref().ok_or_else(|| CliError::Input("jordan fields need alpha".into()))?;
            Fields::Jordan(complex64("alpha", a)?)
        }
        f => return Err(CliError::Input(format!("unknown fields {f:?}"))),
    };
    let piece = match &s.piece {
        Some([i, j]) => {
            let cov = covering_from(cfg)?.map_err(input)?;
            let (i, j): (usize, usize) = (parse_num("piece", i)?, parse_num("piece", j)?);
            if !(1..=3).contains(&i) || j == 0 || j > cov.n() {
                return Err(CliError::Input("piece index out of range".into()));
            }
            PieceGeometry::covering_piece(&cov, i, j - 1)
        }
        None => {
            let factors = s
                .factors
                .iter()
                .map(|f| match (&f.inner, &f.outer, &f.radius) {
                    (Some(a), Some(b), None) => Ok(Factor::Annulus {
                        inner: parse_f64("inner", a)?,
                        outer: parse_f64("outer", b)?,
                    }),
                    (None, None, Some(r)) => Ok(Factor::Disc {
                        radius: parse_f64("radius", r)?,
                    }),
                    _ => Err(CliError::Input("a factor is an annulus (inner, outer) or a disc (radius)".into())),
                })
                .collect::<Res<Vec<_>>>()?;
            PieceGeometry { factors }
        }
    };
    let c = shilov_constant(&piece, &fields).map_err(input)?;
    let mut out = Outcome::default();
    out.check("Shilov constant", c.is_finite(), format!("C = {c}"));
    out.stage("piece", &piece);
    out.stage("constant", &c);
    Ok(out)
}

fn toroidal_validate(cfg: &RunConfig) -> Res<Outcome> {
    let t = section(&cfg.file.toroidal, "toroidal")?;
    let text = std::fs::read_to_string(cfg.path(&t.spec)).map_err(input)?;
    let doc: ToroidalSpecDoc = serde_json::from_str(&text).map_err(input)?;
    let spec = doc.parse().map_err(input)?;
    let mut out = Outcome::default();
    let basis = shear_to_standard(&spec).map_err(input)?;
    out.stage("tau", &basis.tau());
    let height = opt_num("height_bound", &t.height_bound, 6u32)?;
    let irr = validate_irrationality(&spec, height);
    match &irr {
        Irrationality::Pass { height_bound } => out.check(
            "irrationality",
            true,
            format!("no integral sigma^t R up to height {height_bound}"),
        ),
        Irrationality::Witness { sigma } => {
            out.check("irrationality", false, format!("sigma = {sigma:?} makes sigma^t R integral"))
        }
    }
    out.stage("irrationality", &irr);
    if let (Some(e), Some(r)) = (&t.epsilon, &t.rcap) {
        let table = t
            .r_table
            .iter()
            .map(|[a, b]| Ok((parse_f64("r_table", a)?, parse_f64("r_table", b)?)))
            .collect::<Res<Vec<_>>>()?;
        let dom = DomainSpec::new(parse_f64("epsilon", e)?, parse_f64("rcap", r)?, table).map_err(input)?;
        let eta = convex_extension_eta(&spec, &dom).map_err(input)?;
        out.check("convex-hull margin", eta > 0.0, format!("eta = {eta}"));
        out.stage("eta", &eta);
    }
    Ok(out)
}
