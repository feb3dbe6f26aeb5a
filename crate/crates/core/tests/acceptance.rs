//! End-to-end acceptance run. Prints one PASS/FAIL line per criterion and
//! exits nonzero if any criterion fails.

mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::Command;
use std::time::Instant;

use lmqp::algebra::{is_psd, rat, rat_from_f64, rat_to_f64, ratio, Rat, RatVec, SymMat};
use lmqp::graph::{enumerate_graphs, random_graph, Graph};
use lmqp::localmin::{
    bounded_qp, certify_qp_point, classify_bounded_instance, enumerate_sos_supports,
    has_local_min_qp_orthant, has_local_min_quartic, local_minimizers, orthant_qp, verify_quartic_decision,
    BoundedCase, ClassifyOptions,
};
use lmqp::polyopt::{is_copositive, is_pd_quartic, ms_max, Polytope, QpInstance};
use lmqp::quartic::{adjacency_matrix, QuarticInstance};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const RANDOM_SEED: u64 = 20_240_601;
const RANDOM_N6: usize = 200;

/// A graph with its brute-force stable set and clique numbers.
struct Case {
    graph: Graph,
    alpha: usize,
    omega: usize,
}

fn case(graph: Graph) -> Case {
    let alpha = common::alpha_brute(&graph);
    let omega = common::omega_brute(&graph);
    Case { graph, alpha, omega }
}

fn exhaustive(max_n: usize) -> Vec<Case> {
    (1..=max_n).flat_map(|n| enumerate_graphs(n).unwrap()).map(case).collect()
}

fn random_n6() -> Vec<Case> {
    let mut rng = ChaCha8Rng::seed_from_u64(RANDOM_SEED);
    (0..RANDOM_N6).map(|_| case(random_graph(6, 0.5, &mut rng))).collect()
}

fn half_integers(n: usize) -> Vec<Rat> {
    (0..=n).map(|j| ratio(2 * j as i64 + 1, 2)).collect()
}

/// Collects disagreements; a criterion passes when none were recorded.
#[derive(Default)]
struct Tally {
    checked: usize,
    failures: Vec<String>,
}

impl Tally {
    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok && self.failures.len() < 10 {
            self.failures.push(what());
        } else if !ok {
            self.failures.push(String::new());
        }
    }

    fn result(self, summary: &str) -> Result<String, String> {
        if self.failures.is_empty() {
            Ok(format!("{summary}, {} checks, 0 disagreements", self.checked))
        } else {
            let shown: Vec<&String> = self.failures.iter().filter(|s| !s.is_empty()).collect();
            Err(format!("{} of {} checks failed; first: {:?}", self.failures.len(), self.checked, shown))
        }
    }
}

fn criterion_1(small: &[Case], n6: &[Case]) -> Result<String, String> {
    let mut t = Tally::default();
    for c in small.iter().chain(n6) {
        let (value, x) = ms_max(&c.graph).unwrap();
        let expected = rat(1) - ratio(1, c.omega as i64);
        let attained = adjacency_matrix(&c.graph).quad_form(&x) == value && x.is_nonnegative() && x.sum() == rat(1);
        t.check(value == expected && attained, || format!("{:?}: ms = {value}, 1 - 1/omega = {expected}", c.graph));
    }
    if small.len() < 1044 || n6.len() < 200 {
        return Err(format!("sweep too small: {} + {}", small.len(), n6.len()));
    }
    t.result(&format!("{} graphs n<=5 and {} random n=6 graphs", small.len(), n6.len()))
}

fn criterion_2(small: &[Case], n6: &[Case]) -> Result<String, String> {
    let mut t = Tally::default();
    for c in small.iter().chain(n6) {
        for k in half_integers(c.graph.n()) {
            let inst = QuarticInstance::build(&c.graph, k.clone()).unwrap();
            let a = rat(c.alpha as i64);
            let cop = is_copositive(inst.matrix()).unwrap();
            t.check(cop.holds() == (a <= k), || format!("{:?} k={k}: copositive={}", c.graph, cop.holds()));
            if let Some(w) = cop.witness() {
                t.check(w.point.is_nonnegative() && inst.matrix().quad_form(&w.point) == w.value && w.value < rat(0), || {
                    format!("{:?} k={k}: bad copositivity witness", c.graph)
                });
            }
            let pd = is_pd_quartic(&inst).unwrap();
            t.check(pd.holds() == (a < k), || format!("{:?} k={k}: pd={}", c.graph, pd.holds()));
        }
    }
    t.result("copositivity and quartic definiteness vs alpha, every half-integer k")
}

fn criterion_3(small: &[Case]) -> Result<String, String> {
    let mut t = Tally::default();
    for c in small {
        for r in 1..=c.graph.n() {
            let inst = QuarticInstance::for_stable_set(&c.graph, r).unwrap();
            let d = has_local_min_quartic(&inst).unwrap();
            t.check(d.answer == (c.alpha < r), || format!("{:?} r={r}: answer={}", c.graph, d.answer));
            t.check(verify_quartic_decision(&inst, &d), || format!("{:?} r={r}: certificate rejected", c.graph));
            if rat(c.alpha as i64) > *inst.k() {
                let s = enumerate_sos_supports(&inst).unwrap();
                t.check(s.is_empty(), || format!("{:?} r={r}: {} supports above threshold", c.graph, s.len()));
            }
        }
    }
    t.result("local-minimum existence vs alpha <= r-1 for all graphs n<=5")
}

fn criterion_4(small: &[Case]) -> Result<String, String> {
    let mut t = Tally::default();
    for c in small {
        let n = c.graph.n();
        for r in 1..=n {
            let inst = QuarticInstance::for_stable_set(&c.graph, r).unwrap();
            let quartic = has_local_min_quartic(&inst).unwrap().answer;
            let orthant = has_local_min_qp_orthant(&c.graph, r).unwrap().answer;
            t.check(orthant == quartic, || format!("{:?} r={r}: orthant={orthant} quartic={quartic}", c.graph));
            let origin = certify_qp_point(&orthant_qp(&c.graph, r).unwrap(), &RatVec::zeros(n)).unwrap();
            let cop = is_copositive(inst.matrix()).unwrap().holds();
            t.check(origin.is_local_min() == cop, || format!("{:?} r={r}: origin={} copositive={cop}", c.graph, origin.is_local_min()));
        }
    }
    t.result("orthant program vs quartic, origin certificate vs copositivity, n<=5")
}

fn criterion_5() -> Result<String, String> {
    let mut t = Tally::default();
    let graphs = exhaustive(4);
    let mut instances = 0;
    for c in &graphs {
        for r in 1..=c.graph.n() {
            for tb in [rat(1), rat(6)] {
                instances += 1;
                let origin_case = c.alpha < r;
                let opts = ClassifyOptions {
                    seed: 7 + instances as u64,
                    probes: if origin_case { 500 } else { 100 },
                    ..Default::default()
                };
                let cl = classify_bounded_instance(&c.graph, r, &tb, &opts).unwrap();
                let conf = cl.confirmation.clone().expect("confirmation ran");
                let label = || format!("{:?} r={r} t={tb}: {conf:?}", c.graph);
                match cl.case {
                    BoundedCase::OriginUnique => {
                        t.check(origin_case, label);
                        t.check(conf.origin_certified == Some(true) && !conf.second_minimizer, label);
                    }
                    BoundedCase::AllOnHyperplane => {
                        t.check(!origin_case, label);
                        t.check(conf.probes >= 100 && conf.improved == conf.probes, label);
                    }
                }
                // Exact face-by-face enumeration of every local minimizer.
                let qp = bounded_qp(&c.graph, r, tb.clone()).unwrap();
                let mins = local_minimizers(&qp).unwrap();
                if origin_case {
                    t.check(mins.points == vec![RatVec::zeros(c.graph.n())], || format!("{:?} r={r}: {:?}", c.graph, mins.points));
                } else {
                    t.check(!mins.points.is_empty() && mins.points.iter().all(|x| x.sum() == tb), || {
                        format!("{:?} r={r} t={tb}: {:?}", c.graph, mins.points)
                    });
                }
            }
        }
    }
    t.result(&format!("{instances} bounded instances (n<=4, t in {{1, 6}})"))
}

fn criterion_6() -> Result<String, String> {
    let mut t = Tally::default();
    let q = SymMat::from_int_rows(&[&[0, 1], &[1, -2]]).unwrap();
    let psd = is_psd(&q);
    t.check(!psd.holds(), || "fixture matrix reported PSD".into());
    let cop = is_copositive(&q).unwrap();
    let w = cop.witness().cloned();
    t.check(
        w.as_ref().is_some_and(|w| w.value < rat(0) && w.point.is_nonnegative() && q.quad_form(&w.point) == w.value),
        || format!("copositivity witness {w:?}"),
    );
    let qp = QpInstance::form(q, Polytope::orthant(2), "fixture").unwrap();
    let v = certify_qp_point(&qp, &RatVec::from_ints(&[1, 0])).unwrap();
    t.check(v.is_local_min(), || format!("(1,0): {v:?}"));
    let v = certify_qp_point(&qp, &RatVec::from_ints(&[0, 1])).unwrap();
    t.check(!v.is_local_min(), || format!("(0,1): {v:?}"));

    let bqp = bounded_qp(&Graph::empty(2).unwrap(), 1, rat(1)).unwrap();
    let mins = local_minimizers(&bqp).unwrap();
    let half = RatVec(vec![ratio(1, 2), ratio(1, 2)]);
    t.check(mins.points == vec![half.clone()] && !mins.continuum, || format!("minimizers {:?}", mins));
    t.check(bqp.objective(&half) == ratio(-3, 4), || format!("value {}", bqp.objective(&half)));
    t.result("indefinite 2x2 fixture and bounded empty-2 instance")
}

fn rel_err(approx: &[f64], exact: &[f64]) -> f64 {
    let scale = exact.iter().fold(1.0f64, |m, v| m.max(v.abs()));
    approx.iter().zip(exact).fold(0.0f64, |m, (a, e)| m.max((a - e).abs())) / scale
}

fn criterion_7(small: &[Case]) -> Result<String, String> {
    let mut t = Tally::default();
    let mut rng = ChaCha8Rng::seed_from_u64(RANDOM_SEED + 7);
    let classes: Vec<QuarticInstance> = vec![
        QuarticInstance::for_stable_set(&Graph::complete(2).unwrap(), 2).unwrap(),
        QuarticInstance::for_stable_set(&Graph::empty(2).unwrap(), 1).unwrap(),
        QuarticInstance::for_stable_set(&Graph::cycle(5).unwrap(), 3).unwrap(),
        QuarticInstance::build(&Graph::path(3).unwrap(), rat(1)).unwrap(),
        QuarticInstance::build(&random_graph(4, 0.5, &mut rng), ratio(5, 2)).unwrap(),
        QuarticInstance::build(&random_graph(6, 0.4, &mut rng), ratio(7, 3)).unwrap(),
    ];
    let h = 1e-4;
    let mut worst = 0.0f64;
    for inst in &classes {
        let n = inst.n();
        let mf = common::to_f64_rows(inst.matrix());
        for _ in 0..100 {
            let xf: Vec<f64> = (0..n).map(|_| rng.gen_range(-2.0..2.0)).collect();
            let x = RatVec(xf.iter().map(|&v| rat_from_f64(v).unwrap()).collect());
            let g = inst.grad_p(&x).unwrap();
            t.check(x.dot(&g) == rat(4) * inst.eval_p(&x).unwrap(), || format!("Euler identity at {x}"));

            let shifted = |i: usize, s: f64| -> Vec<f64> {
                let mut y = xf.clone();
                y[i] += s;
                y
            };
            let fd: Vec<f64> =
                (0..n).map(|i| (common::p_f64(&mf, &shifted(i, h)) - common::p_f64(&mf, &shifted(i, -h))) / (2.0 * h)).collect();
            let e = rel_err(&fd, &g.to_f64());
            worst = worst.max(e);
            t.check(e <= 1e-6, || format!("gradient rel err {e:e} at {xf:?}"));

            let hess = inst.hess_p(&x).unwrap();
            for j in 0..n {
                let at = |s: f64| {
                    let y = RatVec(shifted(j, s).iter().map(|&v| rat_from_f64(v).unwrap()).collect());
                    inst.grad_p(&y).unwrap().to_f64()
                };
                let (plus, minus) = (at(h), at(-h));
                let col_fd: Vec<f64> = (0..n).map(|i| (plus[i] - minus[i]) / (2.0 * h)).collect();
                let col: Vec<f64> = (0..n).map(|i| rat_to_f64(hess.get(i, j))).collect();
                let e = rel_err(&col_fd, &col);
                worst = worst.max(e);
                t.check(e <= 1e-6, || format!("Hessian column {j} rel err {e:e} at {xf:?}"));
            }
        }
    }
    // Decomposition of M against alpha, entry by entry.
    for c in small {
        let n = c.graph.n();
        let a = rat(c.alpha as i64);
        let api = adjacency_matrix(&c.graph).add(&SymMat::identity(n));
        for k in half_integers(n).into_iter().chain([rat(1), rat(n as i64)]) {
            let m = QuarticInstance::build(&c.graph, k.clone()).unwrap();
            let rhs = api.scale(&a).sub(&SymMat::ones(n)).add(&api.scale(&(&k - &a)));
            t.check(*m.matrix() == rhs, || format!("decomposition fails for {:?} k={k}", c.graph));
        }
    }
    t.result(&format!("{} instance classes x 100 points, worst relative error {worst:.2e}", classes.len()))
}

fn criterion_8() -> Result<String, String> {
    let bin = env!("CARGO_BIN_EXE_lmqp");
    let run = |args: &[&str]| {
        let out = Command::new(bin).args(args).output().expect("run lmqp");
        (out.status.code(), out.stdout)
    };
    let args = ["verify", "--random", "6", "--count", "100", "--seed", "42"];
    let (c1, a) = run(&args);
    let (c2, b) = run(&args);
    if c1 != Some(0) || c2 != Some(0) {
        return Err(format!("exit codes {c1:?} {c2:?}"));
    }
    if a != b || a.is_empty() {
        return Err("reports differ between runs".into());
    }
    let (c3, small) = run(&["verify", "--all", "3", "--seed", "42"]);
    let (c4, small2) = run(&["verify", "--all", "3", "--seed", "42"]);
    if c3 != Some(0) || c4 != Some(0) || small != small2 {
        return Err("exhaustive n<=3 report not reproducible".into());
    }
    Ok(format!("two runs of a 100-graph seeded sample are byte-identical ({} bytes)", a.len()))
}

type Criterion<'a> = Box<dyn Fn() -> Result<String, String> + 'a>;

fn main() {
    let started = Instant::now();
    let small = exhaustive(5);
    let n6 = random_n6();
    let criteria: Vec<(&str, Criterion)> = vec![
        ("1 clique value via simplex maximum", Box::new(|| criterion_1(&small, &n6))),
        ("2 copositivity threshold", Box::new(|| criterion_2(&small, &n6))),
        ("3 quartic local-minimum existence", Box::new(|| criterion_3(&small))),
        ("4 orthant program equivalence", Box::new(|| criterion_4(&small))),
        ("5 bounded program structure", Box::new(criterion_5)),
        ("6 regression fixtures", Box::new(criterion_6)),
        ("7 calculus identities", Box::new(|| criterion_7(&small))),
        ("8 report determinism", Box::new(criterion_8)),
    ];
    let mut failed = 0;
    for (name, f) in &criteria {
        let t0 = Instant::now();
        let res = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|p| {
            let msg = p.downcast_ref::<String>().cloned().or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()));
            Err(format!("panicked: {}", msg.unwrap_or_default()))
        });
        let secs = t0.elapsed().as_secs_f64();
        match res {
            Ok(detail) => println!("criterion {name}: PASS ({detail}; {secs:.1}s)"),
            Err(detail) => {
                failed += 1;
                println!("criterion {name}: FAIL ({detail}; {secs:.1}s)");
            }
        }
    }
    println!(
        "acceptance: {} passed, {failed} failed in {:.1}s",
        criteria.len() - failed,
        started.elapsed().as_secs_f64()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
