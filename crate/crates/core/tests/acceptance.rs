use std::f64::consts::PI;
use std::io::Write;
use std::time::{Duration, Instant};

use germlin::hopf::{
    build_covering, classify_hopf, delta_membership, hopf_precheck, hopf_transition_graph, rational_from_ratio,
    shilov_constant, transition_chain_search, uniform_base_radii, zhou_transition_graph, Factor, Fields, FlatBundle,
    HopfKind, HopfSpec, NestedCoveringSpec, PieceGeometry, TransitionGraph,
};
use germlin::linearizer::{
    certify_domination, conjugacy_residual, eta_sequence, fit_constants, full_linearize, generate_commuting_decks,
    majorant_functional_solve, vertical_linearize, DominationLadder, GeneratorSpec, MajorantConstants, PhiShape,
};
use germlin::series::{cauchy_bound_check, GridSpec, Series, Trunc};
use germlin::small_divisors::{diophantine_scan, Direction, ScanMode};
use germlin::toroidal::{kappa0_estimate, DeckLinearData, Slab, KAPPA_GRID};
use germlin::{Coeff, ExactComplex};
use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn verdict(n: u32, title: &str, pass: bool, detail: &str) {
    let tag = if pass { "PASS" } else { "FAIL" };
    let mut err = std::io::stderr().lock();
    let _ = writeln!(err, "{tag} criterion {n:>2} {title}: {detail}");
    assert!(pass, "criterion {n} ({title}) failed: {detail}");
}

fn spec(q: usize, n_h: usize, d: usize, n_v: u32) -> GeneratorSpec {
    GeneratorSpec::new(q, n_h, d, n_v)
}

#[test]
fn c01_exact_full_conjugacy() {
    let mut worst = Duration::ZERO;
    let mut bad = Vec::new();
    for seed in 0..20 {
        let start = Instant::now();
        let g = generate_commuting_decks(seed, &spec(1, 1, 1, 5)).unwrap();
        let rep = diophantine_scan(&g.pert.decks, 7, ScanMode::Full).unwrap();
        let res = full_linearize(&g.pert, &rep, Direction::Forward).unwrap();
        let residual = conjugacy_residual(&g.pert, &res.phi, ScanMode::Full).unwrap();
        let took = start.elapsed();
        worst = worst.max(took);
        if residual.len() != 6 || residual.iter().any(|r| *r != 0.0) || took >= Duration::from_secs(10) {
            bad.push(seed);
        }
    }
    let detail = format!("20 seeds, residual 0 at degrees 0..=5, slowest {:.3} s, failing {bad:?}", worst.as_secs_f64());
    verdict(1, "exact conjugacy", bad.is_empty(), &detail);
}

#[test]
fn c02_hidden_phi_recovery() {
    let mut exact_bad = Vec::new();
    let mut float_worst: f64 = 0.0;
    for seed in 0..20 {
        let g = generate_commuting_decks(seed, &spec(1, 1, 1, 5)).unwrap();
        let phi0 = g.phi0.clone().unwrap();
        let rep = diophantine_scan(&g.pert.decks, 7, ScanMode::Full).unwrap();
        let res = full_linearize(&g.pert, &rep, Direction::Forward).unwrap();
        if res.phi != phi0 {
            exact_bad.push(seed);
        }
        let fp = g.pert.to_float();
        let frep = diophantine_scan(&fp.decks, 7, ScanMode::Full).unwrap();
        let fres = full_linearize(&fp, &frep, Direction::Forward).unwrap();
        for (a, b) in fres.phi.iter().zip(&phi0) {
            let b = b.to_float();
            for (k, c) in b.terms() {
                float_worst = float_worst.max((a.coeff_at(&k.p, &k.q) - c).norm());
            }
            for (k, c) in a.terms() {
                float_worst = float_worst.max((b.coeff_at(&k.p, &k.q) - c).norm());
            }
        }
    }
    let pass = exact_bad.is_empty() && float_worst < 1e-10;
    let detail = format!("exact mismatches {exact_bad:?}, float max deviation {float_worst:e}");
    verdict(2, "oracle recovery", pass, &detail);
}

#[test]
fn c03_vertical_mode() {
    let mut bad = Vec::new();
    for seed in 0..10 {
        let mut s = spec(1 + (seed as usize % 2), 1, 1, 5);
        s.shape = PhiShape::Vertical;
        let g = generate_commuting_decks(seed, &s).unwrap();
        let phi0 = g.phi0.unwrap();
        assert!(phi0[0].is_zero());
        let rep = diophantine_scan(&g.pert.decks, 7, ScanMode::Vertical).unwrap();
        let res = vertical_linearize(&g.pert, &rep, Direction::Forward).unwrap();
        if res.phi[..] != phi0[1..] || res.max_residual() != 0.0 {
            bad.push(("vertical", seed));
        }
        let mut s = spec(1 + (seed as usize % 2), 1, 1 + (seed as usize % 2), 5);
        s.shape = PhiShape::Mixed;
        let g = generate_commuting_decks(100 + seed, &s).unwrap();
        let rep = diophantine_scan(&g.pert.decks, 7, ScanMode::Vertical).unwrap();
        let res = vertical_linearize(&g.pert, &rep, Direction::Forward).unwrap();
        let residual = conjugacy_residual(&g.pert, &res.phi, ScanMode::Vertical).unwrap();
        if residual.len() != 6 || residual.iter().any(|r| *r != 0.0) {
            bad.push(("mixed", seed));
        }
    }
    verdict(
        3,
        "vertical mode",
        bad.is_empty(),
        &format!("10 vertical + 10 mixed fixtures through N_v = 5, failing {bad:?}"),
    );
}

#[test]
fn c04_forward_inverse_consistency() {
    let mut bad = Vec::new();
    for seed in 0..10u64 {
        let q = 1 + (seed as usize % 2);
        let g = generate_commuting_decks(200 + seed, &spec(q, 1, 1, 5)).unwrap();
        for mode in [ScanMode::Full, ScanMode::Vertical] {
            let rep = diophantine_scan(&g.pert.decks, 7, mode).unwrap();
            let solve = |dir| match mode {
                ScanMode::Full => full_linearize(&g.pert, &rep, dir).unwrap(),
                ScanMode::Vertical => vertical_linearize(&g.pert, &rep, dir).unwrap(),
            };
            if solve(Direction::Forward).phi != solve(Direction::Inverse).phi {
                bad.push((seed, mode));
            }
        }
    }
    verdict(
        4,
        "forward/inverse",
        bad.is_empty(),
        &format!("10 fixtures, full and vertical, mismatches {bad:?}"),
    );
}

#[test]
fn c05_scan_against_brute_force() {
    let lam = Complex64::from_polar(1.0, 2.0 * PI * 2f64.sqrt());
    let mu = Complex64::new(0.5, 0.0);
    let decks = DeckLinearData::new(vec![vec![lam]], vec![vec![mu]]).unwrap();
    let n = 30i32;
    let start = Instant::now();
    let rep = diophantine_scan(&decks, n as u32, ScanMode::Vertical).unwrap();
    let took = start.elapsed();
    let mut brute = f64::INFINITY;
    let mut points = Vec::new();
    for q in 2..=n {
        for p in -(n - q)..=(n - q) {
            let div = (lam.powi(p) * mu.powi(q) - mu).norm();
            brute = brute.min(div);
            points.push((div, (p.abs() + q) as u32));
        }
    }
    let holds = points.iter().all(|(div, size)| rep.bound_holds(*div, *size));
    let pass = rep.min_divisor == brute && holds && rep.points == points.len() && took < Duration::from_secs(5);
    let detail = format!(
        "min divisor {:e} vs brute force {:e}, D = {:?}, tau = {:?}, bound at all {} points: {holds}, {:.3} s",
        rep.min_divisor,
        brute,
        rep.d,
        rep.tau,
        points.len(),
        took.as_secs_f64()
    );
    verdict(5, "Diophantine scan", pass, &detail);
}

fn random_slab(rng: &mut ChaCha8Rng) -> Slab {
    loop {
        let dim = rng.gen_range(2..=3);
        let q = rng.gen_range(1..dim);
        let mut dirs: Vec<Vec<f64>> = (0..dim)
            .map(|_| (0..dim).map(|_| rng.gen_range(-1.0..1.0)).collect())
            .collect();
        for (k, d) in dirs.iter_mut().enumerate() {
            d[k] += 2.0;
        }
        let slab = Slab {
            s_dirs: dirs[..q].to_vec(),
            r_dirs: dirs[q..].to_vec(),
        };
        if slab.check().is_ok() {
            return slab;
        }
    }
}

#[test]
fn c06_kappa0_lemma() {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut failures = 0;
    let mut min_kappa = f64::INFINITY;
    for _ in 0..100 {
        let slab = random_slab(&mut rng);
        let dim = slab.dim();
        let eps = rng.gen_range(0.05..0.5);
        let eps_p = eps * rng.gen_range(0.0..0.9);
        let rcap = rng.gen_range(0.5..3.0);
        let p: Vec<i64> = loop {
            let p: Vec<i64> = (0..dim).map(|_| rng.gen_range(-4..=4)).collect();
            if p.iter().any(|x| *x != 0) {
                break p;
            }
        };
        let est = kappa0_estimate(&slab, eps, eps_p, &p, rcap, KAPPA_GRID).unwrap();
        min_kappa = min_kappa.min(est.kappa0);
        let p1: f64 = p.iter().map(|x| x.abs() as f64).sum();
        let dot = |a: &[f64]| a.iter().zip(&p).map(|(x, y)| x * *y as f64).sum::<f64>();
        let qp = dot(&est.q_point);
        // Q lies in P_{eps, R}
        let in_outer = est.s.iter().all(|s| *s >= -eps - 1e-12 && *s <= 1.0 + eps + 1e-12)
            && est.r.iter().all(|r| r.abs() <= rcap + 1e-12);
        let bound = -est.kappa0 * (eps - eps_p) * p1;
        let mut ok = in_outer && est.kappa0 > 0.0;
        for k in 0..1000 {
            let corner = k < 1usize << dim;
            let s: Vec<f64> = (0..slab.s_dirs.len())
                .map(|j| {
                    if corner {
                        if k >> j & 1 == 1 { 1.0 + eps_p } else { -eps_p }
                    } else {
                        rng.gen_range(-eps_p..=1.0 + eps_p)
                    }
                })
                .collect();
            let r: Vec<f64> = (0..slab.r_dirs.len())
                .map(|h| {
                    if corner {
                        if k >> (slab.s_dirs.len() + h) & 1 == 1 { rcap } else { -rcap }
                    } else {
                        rng.gen_range(-rcap..=rcap)
                    }
                })
                .collect();
            let qq = slab.point(&s, &r);
            let gap = dot(&qq) - qp;
            if gap > bound + 1e-12 * (1.0 + qp.abs()) {
                ok = false;
            }
        }
        if !ok {
            failures += 1;
        }
    }
    verdict(
        6,
        "kappa0 lemma",
        failures == 0,
        &format!("100 instances x 1000 grid points, {failures} failures, smallest kappa0 {min_kappa:.4}"),
    );
}

#[test]
fn c07_majorant_certificates() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut notes = Vec::new();
    let mut pass = true;

    for _ in 0..20 {
        let (c1, e, t, nu) = (
            rng.gen_range(0.5..4.0),
            rng.gen_range(0.1..1.0),
            rng.gen_range(0.0..3.0),
            rng.gen_range(0.0..4.0),
        );
        let s = eta_sequence(c1, e, t, nu, 40).unwrap();
        let eta2 = c1 / f64::powf(e, t + nu) * f64::powf(4.0, t + nu);
        pass &= s.log(1) == 0.0 && (s.eta(2) / eta2 - 1.0).abs() < 1e-12;
        pass &= s.growth_holds();
        // direct recursion by enumerating partitions
        let mut direct = vec![1.0f64];
        for m in 2..=12usize {
            fn best(left: usize, maxpart: usize, eta: &[f64]) -> f64 {
                let mut b = 1.0f64;
                for p in 1..=maxpart.min(left) {
                    b = b.max(eta[p - 1] * best(left - p, p, eta));
                }
                b
            }
            let v = c1 / e.powf(t + nu) * 2f64.powf(m as f64 * (t + nu)) * best(m, m - 1, &direct);
            direct.push(v);
        }
        for (m, v) in direct.iter().enumerate() {
            pass &= (s.log(m + 1) - v.ln()).abs() < 1e-9;
        }
    }
    notes.push(format!("eta_1, eta_2 and recursion to 12 on 20 constant sets: {pass}"));

    let mut nonneg = true;
    for _ in 0..30 {
        let mut c = MajorantConstants::new(rng.gen_range(1..=3), rng.gen_range(1..=3), rng.gen_range(1..=3));
        c.r_prime = rng.gen_range(0.05..1.5);
        c.c = rng.gen_range(0.1..3.0);
        c.c_prime = rng.gen_range(0.1..3.0);
        c.c_second = rng.gen_range(0.5..3.0);
        c.m_den = rng.gen_range(0.5..3.0);
        for mode in [ScanMode::Vertical, ScanMode::Full] {
            let cert = majorant_functional_solve(mode, &c, 20).unwrap();
            nonneg &= cert.a.len() == 21 && cert.a.iter().chain(&cert.b).all(|x| *x >= 0.0);
        }
    }
    pass &= nonneg;
    notes.push(format!("A, B >= 0 to degree 20 on 30 constant sets: {nonneg}"));

    let mut dom_fail = Vec::new();
    let mut top_degree = 0;
    for seed in 0..6u64 {
        let mut s = spec(1, 1, 1, 6);
        s.amplitude = (1, 1000);
        s.shape = if seed % 2 == 0 { PhiShape::Vertical } else { PhiShape::Mixed };
        let g = generate_commuting_decks(300 + seed, &s).unwrap();
        let rep = diophantine_scan(&g.pert.decks, 8, ScanMode::Vertical).unwrap();
        let res = vertical_linearize(&g.pert, &rep, Direction::Forward).unwrap();
        let ladder = DominationLadder::new(0.5, 0.2);
        let th = ladder.theta1;
        let grid = GridSpec::uniform(1, &[(-th).exp(), 1.0, th.exp()], 1, ladder.r1, ladder.angles);
        let consts = fit_constants(&g.pert, &rep, ScanMode::Vertical, &grid, ladder.kappa).unwrap();
        let cert = majorant_functional_solve(ScanMode::Vertical, &consts, 6).unwrap();
        let dom = certify_domination(&res.phi, &g.pert.decks, &cert, &ladder).unwrap();
        top_degree = top_degree.max(dom.a_checks.last().map_or(0, |c| c.degree));
        if !dom.pass {
            dom_fail.push((seed, dom.first_failure));
        }
    }
    pass &= dom_fail.is_empty();
    notes.push(format!(
        "domination on 6 fixtures up to degree {top_degree}, failures {dom_fail:?}"
    ));
    verdict(7, "majorant certificates", pass, &notes.join("; "));
}

fn close(a: Complex64, b: Complex64) -> bool {
    (a - b).norm() <= 1e-12 * a.norm().max(b.norm())
}

fn alpha_pow(alpha: &[Complex64], v: &[i64]) -> Complex64 {
    alpha
        .iter()
        .zip(v)
        .fold(Complex64::new(1.0, 0.0), |acc, (a, k)| acc * a.powi(*k as i32))
}

/// Integer vectors with `|v|_1 <= bound`, by increasing `|v|_1`.
fn shells(n: usize, bound: i64) -> Vec<Vec<i64>> {
    fn rec(n: usize, left: i64, cur: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
        if n == 0 {
            if left == 0 {
                out.push(cur.clone());
            }
            return;
        }
        for x in -left..=left {
            cur.push(x);
            rec(n - 1, left - x.abs(), cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    for s in 0..=bound {
        rec(n, s, &mut Vec::new(), &mut out);
    }
    out
}

fn random_alpha(rng: &mut ChaCha8Rng, n: usize) -> Vec<Complex64> {
    let mut moduli: Vec<f64> = (0..n).map(|_| rng.gen_range(0.1..0.95)).collect();
    moduli.sort_by(f64::total_cmp);
    moduli
        .into_iter()
        .map(|m| Complex64::from_polar(m, rng.gen_range(-PI..PI)))
        .collect()
}

#[test]
fn c08_delta_membership() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let bound = 12u32;
    let start = Instant::now();
    let mut disagreements = 0;
    let mut members = 0;
    let boxes: Vec<Vec<Vec<i64>>> = (0..=3).map(|n| shells(n, bound as i64)).collect();
    for k in 0..200 {
        let n = 2 + k % 2;
        let alpha = random_alpha(&mut rng, n);
        let beta = match k % 4 {
            0 | 1 => {
                let v: Vec<i64> = loop {
                    let v: Vec<i64> = (0..n).map(|_| rng.gen_range(-7..=7)).collect();
                    if v.iter().map(|x| x.abs()).sum::<i64>() <= bound as i64 + 2 {
                        break v;
                    }
                };
                alpha_pow(&alpha, &v)
            }
            _ => Complex64::from_polar(rng.gen_range(0.05..3.0), rng.gen_range(-PI..PI)),
        };
        let spec = HopfSpec::diagonal(alpha.clone()).unwrap();
        let got = delta_membership(&beta, &spec, 1, bound);
        let brute = boxes[n].iter().find(|v| close(alpha_pow(&alpha, v), beta)).cloned();
        if got.member {
            members += 1;
        }
        if got.member != brute.is_some() || got.witness != brute {
            disagreements += 1;
        }
    }
    let took = start.elapsed();
    // exact rationals, where witnesses are not unique
    let mut exact_bad = 0;
    for _ in 0..40 {
        let alpha: Vec<ExactComplex> = {
            let mut d: Vec<i64> = (0..2).map(|_| rng.gen_range(2..=7)).collect();
            d.sort_by(|a, b| b.cmp(a));
            d.iter().map(|x| ExactComplex::from_ratio(1, *x)).collect()
        };
        let beta = ExactComplex::from_ratio(rng.gen_range(1..=50), rng.gen_range(1..=50));
        let spec = HopfSpec::diagonal(alpha.clone()).unwrap();
        let got = delta_membership(&beta, &spec, 1, 6);
        let brute = shells(2, 6)
            .into_iter()
            .find(|v| alpha.iter().zip(v).fold(ExactComplex::one(), |acc, (a, k)| acc * a.pow_int(*k)) == beta);
        let size = |v: &Option<Vec<i64>>| v.as_ref().map(|v| v.iter().map(|x| x.abs()).sum::<i64>());
        if got.member != brute.is_some() || size(&got.witness) != size(&brute) {
            exact_bad += 1;
        }
    }
    let pass = disagreements == 0 && exact_bad == 0 && took < Duration::from_secs(10);
    let detail = format!(
        "200 float instances ({members} members), {disagreements} disagreements, {:.3} s; 40 exact instances, {exact_bad} disagreements",
        took.as_secs_f64()
    );
    verdict(8, "Delta membership", pass, &detail);
}

fn brute_member(target: Complex64, alpha: &[Complex64], box_: &[Vec<i64>]) -> bool {
    box_.iter().any(|v| close(alpha_pow(alpha, v), target))
}

fn brute_generic(alpha: &[Complex64], bound: i64) -> bool {
    let n = alpha.len();
    let strictly = alpha.windows(2).all(|w| w[0].norm() < w[1].norm());
    let mut related = false;
    let mut cur = vec![-bound; n];
    loop {
        let pos: i64 = cur.iter().filter(|x| **x > 0).sum();
        let neg: i64 = -cur.iter().filter(|x| **x < 0).sum::<i64>();
        if cur.iter().any(|x| *x != 0) && pos <= bound && neg <= bound && close(alpha_pow(alpha, &cur), Complex64::new(1.0, 0.0)) {
            related = true;
            break;
        }
        let mut k = n;
        loop {
            if k == 0 {
                return strictly && !related;
            }
            k -= 1;
            if cur[k] < bound {
                cur[k] += 1;
                cur[k + 1..].iter_mut().for_each(|x| *x = -bound);
                break;
            }
        }
    }
    strictly && !related
}

#[test]
fn c09_precheck_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let (bound, n_v) = (8u32, 6u32);
    let mut mismatched = 0;
    let mut failing_lists = 0;
    for k in 0..50 {
        let n = 2 + k % 2;
        let mut alpha = random_alpha(&mut rng, n);
        if k % 7 == 3 {
            alpha[n - 1] = alpha[0].powf(0.5);
            alpha.sort_by(|a, b| a.norm().total_cmp(&b.norm()));
            alpha[0] = alpha[1] * alpha[1];
        }
        let beta = match k % 5 {
            0 => alpha[1] / alpha[0],
            1 => alpha[0].powi(-2) * alpha[n - 1],
            2 => Complex64::from_polar(1.0, rng.gen_range(-PI..PI)),
            _ => Complex64::from_polar(rng.gen_range(0.2..3.0), rng.gen_range(-PI..PI)),
        };
        let spec = HopfSpec::diagonal(alpha.clone()).unwrap();
        let bundle = FlatBundle::new(beta).unwrap();
        let list = hopf_precheck(&bundle, &spec, n_v, bound);
        let box_ = shells(n, bound as i64);
        let mut expect: Vec<(String, bool)> = vec![
            ("alpha generic".into(), brute_generic(&alpha, bound as i64)),
            ("|beta| != 1".into(), (beta.norm() - 1.0).abs() > 1e-12),
        ];
        for m in 1..=n_v as i32 {
            expect.push((format!("beta^{m} not in Delta"), !brute_member(beta.powi(m), &alpha, &box_)));
        }
        for (i, a) in alpha.iter().enumerate() {
            expect.push((format!("beta*alpha_{} not in Delta", i + 1), !brute_member(beta * a, &alpha, &box_)));
            expect.push((format!("beta/alpha_{} not in Delta", i + 1), !brute_member(beta / a, &alpha, &box_)));
        }
        for m in 1..=n_v as i32 {
            for (i, a) in alpha.iter().enumerate() {
                let t = beta.powi(-m) * a;
                expect.push((format!("beta^-{m}*alpha_{} not in Delta", i + 1), !brute_member(t, &alpha, &box_)));
            }
        }
        let got: Vec<(String, bool)> = list.items.iter().map(|c| (c.condition.clone(), c.pass)).collect();
        if got != expect || list.pass != expect.iter().all(|e| e.1) {
            mismatched += 1;
        }
        if !list.pass {
            failing_lists += 1;
        }
    }
    verdict(
        9,
        "Hopf precheck oracle",
        mismatched == 0,
        &format!("50 pairs ({failing_lists} failing checklists), {mismatched} mismatches against brute force"),
    );
}

/// Coverage and triple-overlap counts from sampled points, using only the
/// piece definitions.
fn monte_carlo(cov: &NestedCoveringSpec, samples: usize, seed: u64) -> (usize, usize) {
    let n = cov.n();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let alpha: Vec<f64> = cov.alpha_abs.iter().map(|a| num_traits::ToPrimitive::to_f64(a).unwrap()).collect();
    let r = |i: usize, j: usize| cov.radius(i, j);
    let in_piece = |i: usize, j: usize, w: &[f64]| {
        (w[j] - r(i, j)).abs() < cov.delta
            && (0..n).all(|l| l == j || w[l] < r(4, j) + cov.delta / 2.0)
    };
    let (mut uncovered, mut triple) = (0, 0);
    for _ in 0..samples {
        let mut z: Vec<f64> = (0..n).map(|_| rng.gen_range(-8.0f64..8.0).exp()).collect();
        if rng.gen_bool(0.1) {
            let k = rng.gen_range(0..n);
            z[k] = 0.0;
        }
        let mut any = false;
        for j in 0..n {
            if z[j] == 0.0 {
                continue;
            }
            let mut hit = [false; 3];
            let centre = ((z[j] / r(2, j)).ln() / -alpha[j].ln()).round() as i32;
            for k in centre - 3..=centre + 3 {
                let w: Vec<f64> = z.iter().zip(&alpha).map(|(x, a)| x * a.powi(k)).collect();
                for i in 1..=3 {
                    hit[i - 1] |= in_piece(i, j, &w);
                }
            }
            any |= hit.iter().any(|h| *h);
            if hit.iter().all(|h| *h) {
                triple += 1;
            }
        }
        if !any {
            uncovered += 1;
        }
    }
    (uncovered, triple)
}

/// Start nodes that reach a strict edge through `|l| <= 1` edges, by
/// transitive closure.
fn closure_chains(g: &TransitionGraph) -> Vec<bool> {
    let n = g.nodes.len();
    let mut reach = vec![vec![false; n]; n];
    for (i, row) in reach.iter_mut().enumerate() {
        row[i] = true;
    }
    for e in &g.edges {
        if e.value.norm() <= 1.0 + 1e-12 {
            reach[e.from][e.to] = true;
        }
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                if reach[i][k] && reach[k][j] {
                    reach[i][j] = true;
                }
            }
        }
    }
    let strict: Vec<bool> = (0..n)
        .map(|u| g.edges.iter().any(|e| e.from == u && e.value.norm() < 1.0 - 1e-12))
        .collect();
    (0..n).map(|i| (0..n).any(|u| reach[i][u] && strict[u])).collect()
}

fn chain_valid(g: &TransitionGraph, nodes: &[usize]) -> bool {
    let edge = |a: usize, b: usize| g.edges.iter().find(|e| e.from == a && e.to == b).map(|e| e.value.norm());
    let k = nodes.len();
    k >= 2
        && nodes.windows(2).enumerate().all(|(idx, w)| match edge(w[0], w[1]) {
            Some(m) if idx + 2 == k => m < 1.0 - 1e-12,
            Some(m) => m <= 1.0 + 1e-12,
            None => false,
        })
}

#[test]
fn c10_covering() {
    let q = rational_from_ratio;
    let cases = [
        (vec![q(1, 2), q(1, 2)], 0.21, vec![q(1, 1), q(1, 1)]),
        (vec![q(1, 3), q(1, 2)], 0.12, uniform_base_radii(&[q(1, 3), q(1, 2)], &q(1, 1))),
        (vec![q(2, 5), q(1, 2), q(1, 2)], 0.22, uniform_base_radii(&[q(2, 5), q(1, 2), q(1, 2)], &q(2, 1))),
    ];
    let mut notes = Vec::new();
    let mut pass = true;
    for (idx, (alpha, delta, r1)) in cases.iter().enumerate() {
        let cov = build_covering(alpha, *delta, r1).unwrap();
        let exact = cov.r4.iter().zip(alpha).zip(r1).all(|((r4, a), r)| r4 * a == *r);
        let (uncovered, triple) = monte_carlo(&cov, 10_000, 10 + idx as u64);
        let lib = germlin::hopf::covering_monte_carlo(&cov, 10_000, 10 + idx as u64);
        pass &= exact && uncovered == 0 && triple == 0 && lib.pass();
        notes.push(format!("n={} exact={exact} uncovered={uncovered} triple={triple}", cov.n()));

        let n = cov.n();
        let graphs = [
            (hopf_transition_graph(n, Complex64::new(0.4, 0.3)), true),
            (hopf_transition_graph(n, Complex64::new(-1.5, 2.0)), true),
            (hopf_transition_graph(n, Complex64::from_polar(1.0, 0.7)), false),
            (zhou_transition_graph(n, Complex64::new(0.5, 0.0), Complex64::from_polar(1.0, 2.0)), true),
            (zhou_transition_graph(n, Complex64::from_polar(1.0, 1.0), Complex64::from_polar(1.0, 2.0)), false),
        ];
        for (g, want) in &graphs {
            g.validate().unwrap();
            let chains = transition_chain_search(g);
            let oracle = closure_chains(g);
            let all_found = chains.iter().all(Option::is_some);
            let none_found = chains.iter().all(Option::is_none);
            let agrees = chains.iter().zip(&oracle).all(|(c, o)| c.is_some() == *o);
            let valid = chains.iter().flatten().all(|c| chain_valid(g, &c.nodes));
            pass &= agrees && valid && if *want { all_found } else { none_found };
        }
    }
    notes.push("chains for |beta| < 1 and > 1, none for unit transitions".into());
    verdict(10, "covering", pass, &notes.join("; "));
}

#[test]
fn c11_shilov_constants() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut diag_err: f64 = 0.0;
    for _ in 0..50 {
        let n = rng.gen_range(1..=4);
        let j = rng.gen_range(0..n);
        let r = rng.gen_range(0.5..3.0);
        let delta = rng.gen_range(0.01..0.4);
        let s = rng.gen_range(0.3..4.0);
        let factors = (0..n)
            .map(|k| {
                if k == j {
                    Factor::Annulus {
                        inner: r - delta,
                        outer: r + delta,
                    }
                } else {
                    Factor::Disc { radius: s }
                }
            })
            .collect();
        let c = shilov_constant(&PieceGeometry { factors }, &Fields::Diagonal).unwrap();
        let want = if n == 1 { 1.0 / (r - delta) } else { f64::max(1.0 / (r - delta), 1.0 / s) };
        diag_err = diag_err.max((c - want).abs());
    }
    let single = shilov_constant(
        &PieceGeometry {
            factors: vec![Factor::Disc { radius: 1.0 }],
        },
        &Fields::Diagonal,
    )
    .unwrap();

    let mut jordan_err: f64 = 0.0;
    for case in 0..6 {
        let n = 2 + case % 3;
        let alpha = if case == 0 {
            Complex64::new(0.5, 0.0)
        } else {
            Complex64::from_polar(rng.gen_range(0.2..0.9), rng.gen_range(-PI..PI))
        };
        let factors: Vec<Factor> = (0..n)
            .map(|k| {
                if case == 0 {
                    Factor::Disc { radius: 1.0 }
                } else if k == case % n {
                    let r = rng.gen_range(0.6..2.0);
                    Factor::Annulus {
                        inner: r - 0.1,
                        outer: r + 0.1,
                    }
                } else {
                    Factor::Disc {
                        radius: rng.gen_range(0.5..2.5),
                    }
                }
            })
            .collect();
        let piece = PieceGeometry { factors };
        let c = shilov_constant(&piece, &Fields::Jordan(alpha)).unwrap();
        let radii: Vec<Vec<f64>> = piece
            .factors
            .iter()
            .map(|f| match f {
                Factor::Annulus { inner, outer } => vec![*inner, *outer],
                Factor::Disc { radius } => vec![*radius],
            })
            .collect();
        let mut sup: f64 = 0.0;
        for sample in 0..1000usize {
            let mut code = sample;
            let z: Vec<Complex64> = radii
                .iter()
                .map(|rs| {
                    let r = rs[code % rs.len()];
                    code /= rs.len();
                    Complex64::from_polar(r, rng.gen_range(-PI..PI))
                })
                .collect();
            let g = DMatrix::from_fn(n, n, |i, j| {
                if i == j {
                    alpha * z[i]
                } else if j == i + 1 {
                    z[j]
                } else {
                    Complex64::new(0.0, 0.0)
                }
            });
            let inv = g.try_inverse().unwrap();
            let norm = (0..n)
                .map(|i| (0..n).map(|j| inv[(i, j)].norm()).sum::<f64>())
                .fold(0.0, f64::max);
            sup = sup.max(norm);
        }
        jordan_err = jordan_err.max((c - sup).abs() / sup);
    }
    let pass = diag_err < 1e-12 && single == 1.0 && jordan_err < 1e-9;
    let detail = format!(
        "diagonal closed form error {diag_err:e}, single variable C = {single}, Jordan vs dense inversion at 10^3 samples: relative error {jordan_err:e}"
    );
    verdict(11, "Shilov constant", pass, &detail);
}

#[test]
fn c12_cauchy_bound() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let mut failures = 0;
    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        let n_h = rng.gen_range(0..=2);
        let n_v = rng.gen_range(1..=2);
        let trunc = Trunc::new(4, 8);
        let mut f = Series::<Complex64>::zero(n_h, n_v, trunc);
        for _ in 0..rng.gen_range(1..=12) {
            let p: Vec<i32> = (0..n_h).map(|_| rng.gen_range(-2..=2)).collect();
            let q: Vec<u32> = (0..n_v).map(|_| rng.gen_range(0..=4)).collect();
            let c = Complex64::new(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0));
            let term = Series::monomial(n_h, n_v, trunc, p, q, c).unwrap();
            f = f.add(&term).unwrap();
        }
        let h_radii: Vec<f64> = vec![0.8, 1.25];
        let v_radius = rng.gen_range(0.2..1.5);
        let grid = GridSpec::uniform(n_h, &h_radii, n_v, v_radius, 64);
        let rep = cauchy_bound_check(&f, &grid, 1e-9).unwrap();
        worst = worst.max(rep.worst_ratio);
        if !rep.pass {
            failures += 1;
        }
    }
    verdict(
        12,
        "Cauchy bound",
        failures == 0,
        &format!("100 random series, 64 angles, slack 1e-9: {failures} failures, worst ratio {worst:.6}"),
    );
}

#[test]
fn hopf_classification_fixture() {
    let a = |x: f64| Complex64::new(x, 0.0);
    let class = classify_hopf(&HopfSpec::diagonal(vec![a(0.25), a(0.5)]).unwrap(), 12);
    assert_eq!(class.kind, HopfKind::Diagonal);
}
