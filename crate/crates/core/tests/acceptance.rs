//! Acceptance criteria 1-13. Each test prints one PASS/FAIL line.

use std::f64::consts::PI;
use std::time::Instant;

use gll::functions::{self, parse_expression, GraphFunction, Site};
use gll::graph::Graph;
use gll::lipschitz::{self, Kind, Status};
use gll::mult_op::{self, PROBE_CONSTANT};
use gll::oracle;
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const TOL_EXACT: f64 = 1e-12;
const TOL_RATIO: f64 = 1e-6;
const TOL_LIMIT: f64 = 1e-9;

const FAMILIES: [&str; 4] = ["ray", "tree:3", "lattice:2", "ladder"];
/// Families for the random-corpus criteria, with the radius used on each.
const CORPUS: [(&str, u64); 5] = [("ray", 8), ("tree:3", 6), ("lattice:2", 6), ("ladder", 8), ("random:7:4", 6)];

fn report(n: u32, name: &str, ok: bool, detail: impl std::fmt::Display) {
    println!("criterion {n:>2} {} {name}: {detail}", if ok { "PASS" } else { "FAIL" });
    assert!(ok, "criterion {n} failed: {detail}");
}

fn graph(d: &str) -> Graph {
    Graph::parse(d).unwrap()
}

fn sym(s: &str) -> GraphFunction {
    parse_expression(s).unwrap()
}

fn corpus(g: &Graph, radius: u64, count: usize, seed: u64) -> Vec<GraphFunction> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|_| oracle::random_table(g, radius, &mut rng).unwrap()).collect()
}

#[test]
fn criterion_01_distance_witness() {
    let mut bad = Vec::new();
    for fam in FAMILIES {
        let g = graph(fam);
        let e = lipschitz::norm(&functions::witness_distance(), &g, 32).unwrap();
        if e.kind != Kind::Exact || (e.value - 1.0).abs() > TOL_EXACT {
            bad.push(format!("{fam}: {e:?}"));
        }
        let b = g.bfs_layers(3).unwrap().into_iter().find(|(_, d)| *d == 3).unwrap().0;
        let r = lipschitz::norm_rebased(&functions::witness_distance(), &g, &b, 32).unwrap();
        if (r.value - 4.0).abs() > TOL_EXACT {
            bad.push(format!("{fam}: rebased {}", r.value));
        }
    }
    report(1, "distance witness", bad.is_empty(), format!("{} families, issues {bad:?}", FAMILIES.len()));
}

#[test]
fn criterion_02_rebase_bracket() {
    let mut violations = 0;
    let mut checked = 0;
    for (fam, r) in CORPUS {
        let g = graph(fam);
        let layers = g.bfs_layers(r - 1).unwrap();
        let bs: Vec<_> = layers.iter().rev().step_by(layers.len() / 5).take(5).copied().collect();
        assert_eq!(bs.len(), 5);
        for f in corpus(&g, r, 500, 2) {
            let na = lipschitz::norm(&f, &g, r).unwrap().value;
            for (b, n) in &bs {
                let nb = lipschitz::norm_rebased(&f, &g, b, r).unwrap().value;
                let k = (*n + 1) as f64;
                checked += 1;
                if nb > k * na + TOL_EXACT || na / k > nb + TOL_EXACT {
                    violations += 1;
                }
            }
        }
    }
    report(2, "rebase bracket", violations == 0, format!("{violations} violations in {checked} checks"));
}

#[test]
fn criterion_03_pointwise_bound() {
    let mut violations = 0;
    let mut checked = 0;
    for (fam, r) in CORPUS {
        let g = graph(fam);
        let layers = g.bfs_layers(r - 1).unwrap();
        for f in corpus(&g, r, 500, 2) {
            let root = f.evaluate(&g, &g.root()).unwrap().norm();
            let semi = lipschitz::lip_seminorm(&f, &g, r).unwrap();
            assert!(semi.is_exact());
            for (z, d) in &layers {
                checked += 1;
                if f.eval_point(&g, z, *d).unwrap().norm() > root + *d as f64 * semi.value + TOL_EXACT {
                    violations += 1;
                }
            }
            if lipschitz::pointwise_bound_check(&f, &g, r).unwrap().is(Status::Refuted) {
                violations += 1;
            }
        }
    }
    report(3, "pointwise bound", violations == 0, format!("{violations} violations in {checked} vertex checks"));
}

#[test]
fn criterion_04_omega_witness() {
    let mut bad = Vec::new();
    let mut vertices = 0;
    for fam in FAMILIES {
        let g = graph(fam);
        let ball = g.ball(16).unwrap();
        for m in 1..=16u64 {
            let tent = functions::witness_tent(m).unwrap();
            let e = lipschitz::norm(&tent, &g, 2 * m + 1).unwrap();
            if e.kind != Kind::Exact || (e.value - 1.0).abs() > TOL_EXACT {
                bad.push(format!("{fam} m={m}: norm {e:?}"));
            }
            for i in ball.shell(m) {
                vertices += 1;
                let at = tent.eval_point(&g, &ball.vertex(i), m).unwrap().norm();
                if (at - m as f64).abs() > TOL_EXACT {
                    bad.push(format!("{fam} {}: {at}", g.format_vertex(&ball.vertex(i))));
                }
            }
            let (d, w) = lipschitz::omega(&g, &ball.vertex(ball.shell(m).start)).unwrap();
            if d != m || w != tent {
                bad.push(format!("{fam} omega at shell {m}"));
            }
        }
    }
    report(4, "omega witness", bad.is_empty(), format!("{vertices} vertices, issues {bad:?}"));
}

#[test]
fn criterion_05_density() {
    let g = graph("ray");
    let mut ok = true;
    let mut detail = Vec::new();
    let t = Instant::now();
    for eps in [0.5, 0.1, 0.02] {
        let a = lipschitz::finite_support_approximation(&functions::witness_harmonic(), &g, eps, None).unwrap();
        let good = a.guaranteed && a.achieved.is_exact() && a.achieved.value < eps;
        ok &= good && a.function.support(&g).unwrap().radius().is_some();
        detail.push(format!("eps={eps}: N={:?} achieved={}", a.n.unwrap(), a.achieved.value));
    }
    let secs = t.elapsed().as_secs_f64();
    ok &= secs < 10.0;
    report(5, "density construction", ok, format!("{} in {secs:.3}s", detail.join(", ")));
}

#[test]
fn criterion_06_sandwich_collapse() {
    let ray = graph("ray");
    let c = Complex64::new(1.5, -2.0);
    let cases: Vec<(&str, GraphFunction, f64)> = vec![
        ("constant", functions::constant(c), c.norm()),
        ("chi_a", functions::witness_characteristic(&ray, &ray.root()).unwrap(), 2.0),
        ("1/(d+1)", sym("1/(d+1)"), 1.5),
    ];
    let mut bad = Vec::new();
    for (name, psi, want) in &cases {
        let (lo, hi) = mult_op::operator_norm_interval(psi, &ray, 16).unwrap();
        let collapsed = lo.is_exact() && hi.is_exact() && (lo.value - want).abs() <= TOL_EXACT && (hi.value - want).abs() <= TOL_EXACT;
        let best = oracle::best_ratio_search(psi, &ray, 16, 64, 11).unwrap();
        if !collapsed || (best.lo - want).abs() > TOL_RATIO {
            bad.push(format!("{name}: [{}, {}] best {}", lo.value, hi.value, best.lo));
        }
    }
    report(6, "operator-norm sandwich", bad.is_empty(), format!("{} symbols, issues {bad:?}", cases.len()));
}

#[test]
fn criterion_07_compactness_counterexamples() {
    let ray = graph("ray");
    let tree = graph("tree:3");
    let finite = mult_op::compactness(&functions::witness_tent(3).unwrap(), &tree, 10).unwrap();
    let sinc = mult_op::compactness(&sym("if d==0 then 1 else sin(d)/d"), &ray, 64).unwrap();
    let basel = mult_op::compactness(&sym("sum(1/k^2, k, 1, d+1)"), &ray, 64).unwrap();
    let holds = |r: &mult_op::CompactnessReport| (r.conditions[0].holds, r.conditions[1].holds);
    let a = basel.conditions[0].estimate.value;
    let ok = finite.verdict.is(Status::Proven)
        && sinc.verdict.is(Status::Refuted)
        && holds(&sinc) == (Some(true), Some(false))
        && basel.verdict.is(Status::Refuted)
        && holds(&basel) == (Some(false), Some(true))
        && (a - PI * PI / 6.0).abs() <= TOL_LIMIT
        && (a - 1.6449340668).abs() <= TOL_LIMIT;
    report(7, "compactness classifier", ok, format!("finite {:?}, sinc {:?}, basel {:?} A={a}", finite.verdict.status, holds(&sinc), holds(&basel)));
}

#[test]
fn criterion_08_essential_coherence() {
    let g = graph("ray");
    let half = Complex64::new(0.5, 0.0);
    let table = corpus(&g, 6, 1, 8).pop().unwrap();
    let compact = vec![
        sym("0"),
        functions::witness_characteristic(&g, &g.root()).unwrap(),
        functions::witness_characteristic(&g, &g.parse_vertex("3").unwrap()).unwrap(),
        functions::witness_tent(3).unwrap(),
        functions::witness_tent(5).unwrap(),
        sym("1/(d+1)"),
        functions::scaled(Complex64::new(0.0, 2.0), &sym("1/(d+1)")),
        functions::cutoff(&functions::witness_distance(), 4),
        functions::cutoff(&functions::witness_harmonic(), 6),
        table,
    ];
    let noncompact = vec![
        sym("1"),
        sym("3"),
        sym("-2"),
        sym("i"),
        sym("0.5 + 0.5*i"),
        sym("sum(1/k^2, k, 1, d+1)"),
        sym("if d==0 then 1 else sin(d)/d"),
        functions::witness_ramp(4).unwrap(),
        functions::witness_ramp(6).unwrap(),
        functions::scaled(half, &sym("sum(1/k^2, k, 1, d+1)")),
    ];
    let mut bad = Vec::new();
    for (expect, psi) in compact.iter().map(|p| (true, p)).chain(noncompact.iter().map(|p| (false, p))) {
        let a = mult_op::analyze(psi, &g, 32, 1e-9, None).unwrap();
        let [lo, hi] = a.ess_norm.clone().unwrap();
        let shape = lo == a.a && (hi.value - (4.0 * a.a.value + a.b.value)).abs() <= TOL_EXACT && lo.value <= hi.value;
        let proven = a.compact.is(Status::Proven);
        let zero = lo.value == 0.0 && hi.value == 0.0;
        if !shape || proven != zero || proven != expect || (!expect && !a.compact.is(Status::Refuted)) {
            bad.push(format!("{}: compact {:?} ess [{}, {}]", psi.label(), a.compact.status, lo.value, hi.value));
        }
    }
    report(8, "essential-norm coherence", bad.is_empty(), format!("20 symbols, issues {bad:?}"));
}

#[test]
fn criterion_09_kn_bound() {
    let mut violations = 0;
    let mut worst = 0.0f64;
    for (fam, r) in CORPUS {
        let g = graph(fam);
        let fs = corpus(&g, r, 200, 9);
        for n in 1..=8u64 {
            let rk = 2 * n + 1;
            for f in &fs {
                let k = mult_op::apply_kn(n, f, rk.max(r)).unwrap();
                let lhs = lipschitz::norm(&k, &g, rk.max(r)).unwrap();
                let rhs = lipschitz::norm(f, &g, r).unwrap();
                assert!(lhs.is_exact() && rhs.is_exact());
                worst = worst.max(lhs.value / rhs.value);
                if lhs.value > 3.0 * rhs.value + TOL_EXACT {
                    violations += 1;
                }
            }
        }
    }
    report(9, "K_n bound", violations == 0, format!("{violations} violations, max ratio {worst}"));
}

#[test]
fn criterion_10_chi_sum_bound() {
    let mut bad = Vec::new();
    let mut worst = 0.0f64;
    for (fam, r) in CORPUS {
        let rep = oracle::chi_sum_bound_check(&graph(fam), r, 16, 1000, 10).unwrap();
        worst = worst.max(rep.max_norm);
        if !rep.verdict.is(Status::Proven) || rep.draws != 1000 || rep.max_norm > 3.0 {
            bad.push(format!("{fam}: {}", rep.verdict.note));
        }
    }
    report(10, "chi-sum bound", bad.is_empty(), format!("max norm {worst}, issues {bad:?}"));
}

#[test]
fn criterion_11_spectrum() {
    let g = graph("ray");
    let psi = sym("1/(d+1)");
    let s = mult_op::spectrum(&psi, &g, 64, 1e-9, Some(Complex64::new(2.0, 0.0))).unwrap();
    let mut max_res = 0.0f64;
    for (site, z) in psi.sample(&g, 64).unwrap() {
        let Site::Shell(n) = site else { panic!("radial sample expected") };
        let v = g.parse_vertex(&n.to_string()).unwrap();
        assert!(s.sample.contains(&z));
        max_res = max_res.max(mult_op::eigenvector_residual(&psi, &g, &v, 64).unwrap());
    }
    let q = s.query.clone().unwrap();
    let sigma_psi = mult_op::sigma_psi(&psi, &g, 64).unwrap().value;
    let sigma_phi = q.sigma_phi.as_ref().unwrap().value;
    let ok = s.sample.len() == 65
        && max_res == 0.0
        && s.extras == vec![Complex64::new(0.0, 0.0)]
        && q.gap == 1.0
        && sigma_phi <= sigma_psi + TOL_EXACT
        && q.sup_phi.as_ref().unwrap().value <= 1.0 + TOL_EXACT;
    report(11, "spectrum", ok, format!("{} values, residual {max_res}, extras {:?}, sigma_phi {sigma_phi} <= {sigma_psi}", s.sample.len(), s.extras));
}

#[test]
fn criterion_12_isometry() {
    let g = graph("tree:3");
    let mut bad = Vec::new();
    for k in 0..8 {
        let theta = k as f64 * PI / 4.0 + 0.1;
        let v = mult_op::isometry_test(&functions::constant(Complex64::from_polar(1.0, theta)), &g, 6).unwrap();
        if !v.is(Status::Proven) {
            bad.push(format!("theta={theta}: {:?}", v.status));
        }
    }
    let refuted = [
        sym("2"),
        functions::witness_characteristic(&g, &g.root()).unwrap(),
        sym("1/(d+1)"),
    ];
    for psi in &refuted {
        let v = mult_op::isometry_test(psi, &g, 6).unwrap();
        if !v.is(Status::Refuted) || v.witness.as_deref() != Some(PROBE_CONSTANT) {
            bad.push(format!("{}: {:?} via {:?}", psi.label(), v.status, v.witness));
        }
    }
    report(12, "isometry", bad.is_empty(), format!("8 unimodular constants, 3 refuted symbols, issues {bad:?}"));
}

#[test]
fn criterion_13_oracle_independence() {
    let mut worst = 0.0f64;
    let mut count = 0;
    for (fam, r) in CORPUS {
        let g = graph(fam);
        for f in corpus(&g, r, 1000, 13) {
            let a = oracle::brute_norm(&f, &g, r).unwrap();
            let b = lipschitz::norm(&f, &g, r).unwrap();
            assert!(b.is_exact());
            worst = worst.max((a - b.value).abs());
            count += 1;
        }
    }
    let g = graph("ladder");
    let run = || {
        let case = oracle::TestCase::new(&g, sym("1/(d+1)"), 12, 7, 6).unwrap();
        oracle::to_jsonl(&oracle::inequality_sweep(&case, &g))
    };
    let same = run() == run();
    report(13, "oracle independence", worst <= TOL_EXACT && same, format!("{count} cases, max gap {worst}, reproducible {same}"));
}
