//! Verification sweeps over reduction instances and their JSON reports.
//!
//! Every record decides "does the quartic have a local minimizer" along
//! several independent paths and sets `agree` only when all of them match
//! the stable-set oracle and every side check passes.

use std::collections::BTreeMap;
use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::algebra::{Rat, RatVec};
use crate::error::{Error, Result};
use crate::graph::{alpha, enumerate_graphs, graph_from_index, omega, random_graph, Graph, VertexSet};
use crate::localmin::{
    certify_qp_point_capped, enumerate_sos_supports, has_local_min_qp_orthant, has_local_min_quartic, orthant_qp,
    verify_point_verdict, verify_quartic_decision, LocalMinCertificate, PointVerdict,
};
use crate::polyopt::{is_copositive_capped, is_pd_quartic, ms_max, QP_DIM_CAP};
use crate::quartic::QuarticInstance;
use crate::verdict::ser_rat;

/// Largest `N` accepted for exhaustive sweeps.
pub const EXHAUSTIVE_LIMIT: usize = 5;

/// The independent decision paths recorded for every instance.
pub const PATHS: [&str; 6] = [
    "alpha_oracle",
    "copositivity",
    "pd_quartic",
    "quartic_local_min",
    "orthant_local_min",
    "origin_certified",
];

#[derive(Clone, Debug, PartialEq)]
pub enum Scope {
    /// One graph; all `r` in `1..=n` when `r` is `None`.
    Graph { graph: Graph, r: Option<usize> },
    /// Every labeled graph on `1..=max_n` vertices, every `r`.
    Exhaustive { max_n: usize },
    /// `count` random graphs on `n` vertices with edge probability `p`.
    Random { n: usize, count: usize, p: f64 },
}

impl Scope {
    fn describe(&self, seed: u64) -> String {
        match self {
            Scope::Graph { graph, r } => match r {
                Some(r) => format!("graph n={} r={r}", graph.n()),
                None => format!("graph n={} all r", graph.n()),
            },
            Scope::Exhaustive { max_n } => format!("all graphs n<={max_n}, all r"),
            Scope::Random { n, count, p } => format!("random n={n} count={count} p={p} seed={seed}"),
        }
    }
}

#[derive(Clone, Debug)]
pub struct VerifyOptions {
    pub seed: u64,
    /// Largest dimension handed to the exact QP paths.
    pub cap: usize,
    pub timings: bool,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions { seed: 0, cap: QP_DIM_CAP, timings: false }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct InstanceKey {
    pub n: usize,
    /// Graph index within the sweep (enumeration index or sample number).
    pub index: u64,
    pub r: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct Record {
    pub key: InstanceKey,
    pub graph: Graph,
    pub r: usize,
    #[serde(serialize_with = "ser_rat")]
    pub k: Rat,
    pub alpha: usize,
    pub alpha_witness: VertexSet,
    pub decisions: BTreeMap<&'static str, bool>,
    pub checks: BTreeMap<&'static str, bool>,
    pub certificate: LocalMinCertificate,
    pub origin_verdict: PointVerdict,
    pub agree: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub micros: Option<u128>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Skipped {
    pub key: InstanceKey,
    pub reason: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct Summary {
    pub records: usize,
    pub agreeing: usize,
    /// `matrix[a][b]`: records on which paths `a` and `b` give the same answer.
    pub agreement_matrix: BTreeMap<&'static str, BTreeMap<&'static str, usize>>,
    pub failures: Vec<InstanceKey>,
    pub skipped: Vec<Skipped>,
    pub incomplete: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct RunReport {
    pub tool: &'static str,
    pub version: &'static str,
    pub scope: String,
    pub seed: u64,
    pub input_digest: String,
    pub records: Vec<Record>,
    pub summary: Summary,
}

impl RunReport {
    pub fn all_agree(&self) -> bool {
        self.summary.failures.is_empty()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes") + "\n"
    }

    pub fn to_text(&self) -> String {
        let mut out = format!(
            "{} {}\nscope: {}\ndigest: {}\n",
            self.tool, self.version, self.scope, self.input_digest
        );
        for rec in &self.records {
            let answer = rec.decisions["alpha_oracle"];
            out.push_str(&format!(
                "n={} #{} r={} k={} alpha={} local_min={} {}\n",
                rec.key.n,
                rec.key.index,
                rec.r,
                rec.k,
                rec.alpha,
                answer,
                if rec.agree { "agree" } else { "DISAGREE" }
            ));
        }
        for s in &self.summary.skipped {
            out.push_str(&format!("n={} #{} r={} skipped: {}\n", s.key.n, s.key.index, s.key.r, s.reason));
        }
        out.push_str(&format!(
            "records: {}  agreeing: {}  failures: {}  incomplete: {}\n",
            self.summary.records,
            self.summary.agreeing,
            self.summary.failures.len(),
            self.summary.incomplete
        ));
        out
    }
}

/// Graphs of the sweep with their indices, in key order.
fn scope_graphs(scope: &Scope, seed: u64) -> Result<Vec<(u64, Graph, Vec<usize>)>> {
    let all_r = |g: &Graph| (1..=g.n()).collect::<Vec<_>>();
    Ok(match scope {
        Scope::Graph { graph, r } => {
            let rs = match r {
                Some(r) if (1..=graph.n()).contains(r) => vec![*r],
                Some(r) => return Err(Error::Invalid(format!("r = {r} outside 1..={}", graph.n()))),
                None => all_r(graph),
            };
            vec![(0, graph.clone(), rs)]
        }
        Scope::Exhaustive { max_n } => {
            if *max_n == 0 || *max_n > EXHAUSTIVE_LIMIT {
                return Err(Error::Invalid(format!("exhaustive sweeps need 1 <= N <= {EXHAUSTIVE_LIMIT}")));
            }
            let mut out = Vec::new();
            for n in 1..=*max_n {
                for (i, g) in enumerate_graphs(n)?.enumerate() {
                    debug_assert_eq!(g, graph_from_index(n, i as u64));
                    let rs = all_r(&g);
                    out.push((i as u64, g, rs));
                }
            }
            out
        }
        Scope::Random { n, count, p } => {
            if *n == 0 || !(0.0..=1.0).contains(p) {
                return Err(Error::Invalid(format!("random sample needs n >= 1 and 0 <= p <= 1 (n={n}, p={p})")));
            }
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            (0..*count as u64)
                .map(|i| {
                    let g = random_graph(*n, *p, &mut rng);
                    let rs = all_r(&g);
                    (i, g, rs)
                })
                .collect()
        }
    })
}

fn digest(items: &[(u64, Graph, Vec<usize>)], desc: &str) -> String {
    let mut h = Sha256::new();
    h.update(desc.as_bytes());
    for (i, g, rs) in items {
        h.update(format!("\n#{i} r={rs:?}\n").as_bytes());
        h.update(g.to_dimacs().as_bytes());
    }
    h.finalize().iter().map(|b| format!("{b:02x}")).collect()
}

/// Decides one `(G, r)` pair along every path.
pub fn verify_instance(key: InstanceKey, g: &Graph, opts: &VerifyOptions) -> Result<Record> {
    let started = Instant::now();
    let r = key.r;
    let inst = QuarticInstance::for_stable_set(g, r)?;
    let (a, a_witness) = alpha(g)?;
    let expected = a < r;

    let copositive = is_copositive_capped(inst.matrix(), opts.cap)?;
    let pd = is_pd_quartic(&inst)?;
    let quartic = has_local_min_quartic(&inst)?;
    let orthant = has_local_min_qp_orthant(g, r)?;
    let qp = orthant_qp(g, r)?;
    let origin = RatVec::zeros(g.n());
    let origin_verdict = certify_qp_point_capped(&qp, &origin, opts.cap)?;

    let decisions = BTreeMap::from([
        ("alpha_oracle", expected),
        ("copositivity", copositive.holds()),
        ("pd_quartic", pd.holds()),
        ("quartic_local_min", quartic.answer),
        ("orthant_local_min", orthant.answer),
        ("origin_certified", origin_verdict.is_local_min()),
    ]);

    let mut checks = BTreeMap::new();
    checks.insert("alpha_witness_stable", a_witness.is_stable_in(g) && a_witness.len() == a);
    checks.insert("quartic_certificate", verify_quartic_decision(&inst, &quartic));
    checks.insert("origin_verdict", verify_point_verdict(&qp, &origin, &origin_verdict));
    let witness_ok = |v: &crate::verdict::Verdict| match v.witness() {
        None => true,
        Some(w) => w.point.is_nonnegative() && !w.point.is_zero() && inst.matrix().quad_form(&w.point) == w.value,
    };
    checks.insert("copositivity_witness", witness_ok(&copositive));
    checks.insert("pd_witness", witness_ok(&pd));
    // No admissible supports above the stable-set threshold.
    if Rat::from_integer(a.into()) > *inst.k() {
        checks.insert("supports_empty", enumerate_sos_supports(&inst)?.is_empty());
    }
    let (ms, ms_arg) = ms_max(g)?;
    let (w, _) = omega(g)?;
    checks.insert(
        "motzkin_straus",
        ms == Rat::from_integer(1.into()) - Rat::new(1.into(), w.into()) && ms_arg.is_nonnegative() && ms_arg.sum() == Rat::from_integer(1.into()),
    );

    let agree = decisions.values().all(|&d| d == expected) && checks.values().all(|&c| c);
    Ok(Record {
        key,
        graph: g.clone(),
        r,
        k: inst.k().clone(),
        alpha: a,
        alpha_witness: a_witness,
        decisions,
        checks,
        certificate: quartic.certificate,
        origin_verdict,
        agree,
        micros: opts.timings.then(|| started.elapsed().as_micros()),
    })
}

/// Runs a sweep. Instances beyond the cap are listed as skipped and the
/// report is flagged incomplete; other errors abort the run.
pub fn run_verify(scope: &Scope, opts: &VerifyOptions) -> Result<RunReport> {
    let desc = scope.describe(opts.seed);
    let items = scope_graphs(scope, opts.seed)?;
    let input_digest = digest(&items, &desc);

    let jobs: Vec<(InstanceKey, &Graph)> = items
        .iter()
        .flat_map(|(i, g, rs)| rs.iter().map(move |&r| (InstanceKey { n: g.n(), index: *i, r }, g)))
        .collect();
    let results: Vec<(InstanceKey, Result<Record>)> = jobs
        .par_iter()
        .map(|(key, g)| {
            let res = if g.n() > opts.cap {
                Err(Error::CapExceeded { what: "instance dimension", size: g.n(), cap: opts.cap })
            } else {
                verify_instance(key.clone(), g, opts)
            };
            (key.clone(), res)
        })
        .collect();

    let mut records = Vec::new();
    let mut skipped = Vec::new();
    for (key, res) in results {
        match res {
            Ok(rec) => records.push(rec),
            Err(e @ Error::CapExceeded { .. }) => skipped.push(Skipped { key, reason: e.to_string() }),
            Err(e) => return Err(e),
        }
    }
    records.sort_by(|a, b| a.key.cmp(&b.key));
    skipped.sort_by(|a, b| a.key.cmp(&b.key));

    let mut agreement_matrix = BTreeMap::new();
    for a in PATHS {
        let row: BTreeMap<&'static str, usize> = PATHS
            .iter()
            .map(|&b| (b, records.iter().filter(|rec| rec.decisions[a] == rec.decisions[b]).count()))
            .collect();
        agreement_matrix.insert(a, row);
    }
    let failures: Vec<InstanceKey> = records.iter().filter(|r| !r.agree).map(|r| r.key.clone()).collect();
    let summary = Summary {
        records: records.len(),
        agreeing: records.len() - failures.len(),
        agreement_matrix,
        failures,
        incomplete: !skipped.is_empty(),
        skipped,
    };
    Ok(RunReport {
        tool: env!("CARGO_PKG_NAME"),
        version: env!("CARGO_PKG_VERSION"),
        scope: desc,
        seed: opts.seed,
        input_digest,
        records,
        summary,
    })
}

/// Single-question verdict in the `{instance, question, answer, certificate,
/// oracle_crosschecks, seed}` shape.
#[derive(Clone, Debug, Serialize)]
pub struct VerdictReport<C: Serialize> {
    pub instance: serde_json::Value,
    pub question: String,
    pub answer: bool,
    pub certificate: C,
    pub oracle_crosschecks: BTreeMap<&'static str, serde_json::Value>,
    pub seed: u64,
}
