//! Exhaustive search over canonical upgrade plans, plus fixed-cycle greedy
//! baselines.
//!
//! The search space is every canonical plan: each composition of the horizon
//! into integer-length segments, with each segment assigned a server that is
//! purchasable in the segment's start year and differs from the previous
//! segment's server. Keeping a server across consecutive years is expressed
//! by a longer segment, never by repeating the server, so purchase cost and
//! embodied carbon are charged exactly once per installation.
//!
//! The walk accumulates running totals down the recursion using the same
//! per-segment arithmetic (and the same left-to-right operation order) as
//! [`crate::evaluate::evaluate_plan`], so objectives seen by the solver are
//! bit-identical to what the evaluator reports for the same plan. Ranked
//! results are therefore independent of how the space is partitioned across
//! worker threads: merging keeps the best candidates under a total order
//! (objective descending, then fewer upgrades, then plan string), which is
//! associative and commutative.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::fmt::Write as _;

use rayon::prelude::*;
use thiserror::Error;

use crate::config::{ConfigError, EconomicConfig, MetricKind};
use crate::evaluate::{evaluate_plan, normalize, EvalError, PlanEvaluation};
use crate::fleet::Fleet;
use crate::metrics::{segment_carbon, segment_cost};
use crate::plan::{PlanSegment, UpgradePlan};

/// Fixed upgrade cadences considered by the local (greedy) strategy.
pub const LOCAL_CYCLES: [u32; 6] = [1, 2, 3, 4, 6, 12];

/// How deep to split the search tree into independent tasks before handing
/// them to the thread pool. Deep enough to balance the heavily skewed early
/// years (where only a few servers exist), small enough that task setup
/// stays negligible.
const SPLIT_DEPTH: usize = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct SolverOptions {
    /// Worker threads for the exhaustive search; 0 uses the default pool.
    pub workers: usize,
    /// Restrict the search to plans whose servers strictly increase in entry
    /// year, i.e. never buy a model as old as (or older than) the one it
    /// replaces.
    pub monotone_only: bool,
}

/// Parameters of one fixed-cycle greedy run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LocalPlanSpec {
    /// Years between forced upgrade decisions; must divide the horizon and
    /// be one of [`LOCAL_CYCLES`].
    pub cycle_years: u32,
    /// Objective the greedy step maximizes when choosing each replacement.
    pub greedy_metric: MetricKind,
}

/// Outcome of a ranking solve: the best plans in order, plus provenance.
#[derive(Debug, Clone, PartialEq)]
pub struct SolverReport {
    /// Best plans first; ties broken by fewer upgrades, then plan string.
    pub ranked: Vec<PlanEvaluation>,
    /// Number of plans examined (for local solves: number of entries).
    pub total_plans: u64,
    pub objective: MetricKind,
    pub config: EconomicConfig,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SolverError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error("no server is available in {year}")]
    NoServerAvailable { year: i32 },
    #[error("top_n must be at least 1")]
    ZeroTopN,
    #[error("cycle length {0} is not one of the supported cycles 1, 2, 3, 4, 6, 12")]
    UnsupportedCycle(u32),
    #[error("cycle length {cycle} does not divide the {horizon}-year horizon")]
    CycleDoesNotDivideHorizon { cycle: u32, horizon: u32 },
    #[error("baseline server {id:?} is not in the fleet")]
    UnknownBaseline { id: String },
    #[error("plan count overflows u64")]
    PlanCountOverflow,
    #[error("failed to build worker pool: {0}")]
    WorkerPool(String),
}

// ---------------------------------------------------------------------------
// Enumeration engine
// ---------------------------------------------------------------------------

/// Running (or per-segment) sums of the three plan totals.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
struct Sums {
    tco: f64,
    co2: f64,
    qps_years: f64,
}

impl Sums {
    #[inline]
    fn plus(self, seg: Sums) -> Sums {
        Sums {
            tco: self.tco + seg.tco,
            co2: self.co2 + seg.co2,
            qps_years: self.qps_years + seg.qps_years,
        }
    }
}

/// A segment in fleet-index form: `server` indexes `Fleet::servers()`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct IdxSeg {
    server: u32,
    duration: u32,
}

const NO_LAST: usize = usize::MAX;

/// Preresolved search context: availability per horizon year and segment
/// totals per (server, duration), so the walk itself is pure arithmetic.
struct EnumCtx<'a> {
    fleet: &'a Fleet,
    cfg: &'a EconomicConfig,
    horizon: usize,
    monotone: bool,
    /// avail[t]: servers purchasable in year `start + t` (a prefix of the
    /// fleet, which is sorted by entry year).
    avail: Vec<usize>,
    /// entry[s]: entry year by fleet index.
    entry: Vec<i32>,
    /// seg[(d-1) * n_servers + s]: totals of one d-year segment on server s,
    /// computed with the same per-segment models as the evaluator.
    seg: Vec<Sums>,
}

impl<'a> EnumCtx<'a> {
    fn new(
        fleet: &'a Fleet,
        cfg: &'a EconomicConfig,
        opts: &SolverOptions,
    ) -> Result<Self, SolverError> {
        cfg.validate()?;
        let horizon = cfg.horizon_years() as usize;
        let servers = fleet.servers();
        let avail: Vec<usize> = (0..horizon)
            .map(|t| fleet.available_count(cfg.start_year + t as i32))
            .collect();
        if avail[0] == 0 {
            return Err(SolverError::NoServerAvailable {
                year: cfg.start_year,
            });
        }
        let entry: Vec<i32> = servers.iter().map(|s| s.entry_year).collect();
        let mut seg = vec![Sums::default(); servers.len() * horizon];
        for d in 1..=horizon {
            for (si, server) in servers.iter().enumerate() {
                let cost = segment_cost(server, d as u32, cfg);
                let carbon = segment_carbon(server, d as u32, cfg);
                seg[(d - 1) * servers.len() + si] = Sums {
                    tco: cost.capex + cost.opex,
                    co2: carbon.embodied_kg + carbon.operational_kg,
                    qps_years: server.qps * d as f64,
                };
            }
        }
        Ok(EnumCtx {
            fleet,
            cfg,
            horizon,
            monotone: opts.monotone_only,
            avail,
            entry,
            seg,
        })
    }

    #[inline]
    fn allowed(&self, last: usize, s: usize) -> bool {
        if last == NO_LAST {
            return true;
        }
        s != last && (!self.monotone || self.entry[s] > self.entry[last])
    }

    #[inline]
    fn seg(&self, s: usize, d: usize) -> Sums {
        self.seg[(d - 1) * self.entry.len() + s]
    }
}

/// Receives every complete plan exactly once. `prefix` plus `tail` are the
/// plan's segments in order; `totals` its accumulated sums.
trait LeafSink {
    fn leaf(&mut self, ctx: &EnumCtx, prefix: &[IdxSeg], tail: IdxSeg, totals: Sums);
}

/// Depth-first walk over all canonical plans starting at year-offset `t`
/// with `last` as the previous segment's server. Children are visited in
/// duration order, then catalog order, which fixes the enumeration order.
fn walk<S: LeafSink>(
    ctx: &EnumCtx,
    t: usize,
    last: usize,
    acc: Sums,
    stack: &mut Vec<IdxSeg>,
    sink: &mut S,
) {
    let rem = ctx.horizon - t;
    let n_avail = ctx.avail[t];
    for d in 1..rem {
        for s in 0..n_avail {
            if !ctx.allowed(last, s) {
                continue;
            }
            let acc2 = acc.plus(ctx.seg(s, d));
            stack.push(IdxSeg {
                server: s as u32,
                duration: d as u32,
            });
            walk(ctx, t + d, s, acc2, stack, sink);
            stack.pop();
        }
    }
    // Final segment: exactly fills the remaining years.
    for s in 0..n_avail {
        if !ctx.allowed(last, s) {
            continue;
        }
        let acc2 = acc.plus(ctx.seg(s, rem));
        sink.leaf(
            ctx,
            stack,
            IdxSeg {
                server: s as u32,
                duration: rem as u32,
            },
            acc2,
        );
    }
}

/// A unit of parallel work: either a plan completed during splitting, or a
/// subtree to walk sequentially.
enum Task {
    Done {
        segs: Vec<IdxSeg>,
        totals: Sums,
    },
    Subtree {
        t: usize,
        last: usize,
        prefix: Vec<IdxSeg>,
        acc: Sums,
    },
}

fn split_tasks(ctx: &EnumCtx, depth: usize) -> Vec<Task> {
    let mut tasks = Vec::new();
    let mut stack = Vec::new();
    split_rec(
        ctx,
        0,
        NO_LAST,
        Sums::default(),
        depth,
        &mut stack,
        &mut tasks,
    );
    tasks
}

fn split_rec(
    ctx: &EnumCtx,
    t: usize,
    last: usize,
    acc: Sums,
    depth_left: usize,
    stack: &mut Vec<IdxSeg>,
    out: &mut Vec<Task>,
) {
    if depth_left == 0 {
        out.push(Task::Subtree {
            t,
            last,
            prefix: stack.clone(),
            acc,
        });
        return;
    }
    let rem = ctx.horizon - t;
    let n_avail = ctx.avail[t];
    for d in 1..rem {
        for s in 0..n_avail {
            if !ctx.allowed(last, s) {
                continue;
            }
            stack.push(IdxSeg {
                server: s as u32,
                duration: d as u32,
            });
            split_rec(
                ctx,
                t + d,
                s,
                acc.plus(ctx.seg(s, d)),
                depth_left - 1,
                stack,
                out,
            );
            stack.pop();
        }
    }
    for s in 0..n_avail {
        if !ctx.allowed(last, s) {
            continue;
        }
        let mut segs = stack.clone();
        segs.push(IdxSeg {
            server: s as u32,
            duration: rem as u32,
        });
        out.push(Task::Done {
            segs,
            totals: acc.plus(ctx.seg(s, rem)),
        });
    }
}

/// Run every task through its own sink and merge the results. `merge` must
/// be associative and commutative so the reduction order (and therefore the
/// worker count) cannot influence the outcome.
fn par_run<S, MK, MG>(ctx: &EnumCtx, tasks: Vec<Task>, make: MK, merge: MG) -> S
where
    S: LeafSink + Send,
    MK: Fn() -> S + Sync + Send,
    MG: Fn(S, S) -> S + Sync + Send,
{
    tasks
        .into_par_iter()
        .map(|task| {
            let mut sink = make();
            match task {
                Task::Done { segs, totals } => {
                    let (tail, prefix) = segs.split_last().expect("done task has segments");
                    sink.leaf(ctx, prefix, *tail, totals);
                }
                Task::Subtree {
                    t,
                    last,
                    mut prefix,
                    acc,
                } => {
                    walk(ctx, t, last, acc, &mut prefix, &mut sink);
                }
            }
            sink
        })
        .reduce(&make, &merge)
}

fn in_pool<R: Send>(workers: usize, f: impl FnOnce() -> R + Send) -> Result<R, SolverError> {
    if workers == 0 {
        Ok(f())
    } else {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(workers)
            .build()
            .map_err(|e| SolverError::WorkerPool(e.to_string()))?;
        Ok(pool.install(f))
    }
}

fn plan_from_segs(ctx: &EnumCtx, segs: impl IntoIterator<Item = IdxSeg>) -> UpgradePlan {
    let mut year = ctx.cfg.start_year;
    let mut out = Vec::new();
    for seg in segs {
        out.push(PlanSegment::new(
            ctx.fleet.servers()[seg.server as usize].id.clone(),
            year,
            seg.duration,
        ));
        year += seg.duration as i32;
    }
    UpgradePlan::new(out)
}

// ---------------------------------------------------------------------------
// Ranking
// ---------------------------------------------------------------------------

/// A plan held by the top-N tracker, with everything the comparator needs.
struct Candidate {
    objective: f64,
    n_upgrades: u32,
    plan_string: String,
    segs: Vec<IdxSeg>,
}

/// Total order used for every ranking: objective descending, then fewer
/// upgrades, then plan string. `Less` means "ranks earlier".
fn rank_order(a: &Candidate, b: &Candidate) -> Ordering {
    b.objective
        .total_cmp(&a.objective)
        .then_with(|| a.n_upgrades.cmp(&b.n_upgrades))
        .then_with(|| a.plan_string.cmp(&b.plan_string))
}

/// Max-heap wrapper: the heap's top is the worst-ranked candidate kept.
struct ByRankWorst(Candidate);

impl PartialEq for ByRankWorst {
    fn eq(&self, other: &Self) -> bool {
        rank_order(&self.0, &other.0) == Ordering::Equal
    }
}
impl Eq for ByRankWorst {}
impl PartialOrd for ByRankWorst {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for ByRankWorst {
    fn cmp(&self, other: &Self) -> Ordering {
        rank_order(&self.0, &other.0)
    }
}

fn make_candidate(ctx: &EnumCtx, prefix: &[IdxSeg], tail: IdxSeg, objective: f64) -> Candidate {
    let mut segs = Vec::with_capacity(prefix.len() + 1);
    segs.extend_from_slice(prefix);
    segs.push(tail);
    let mut plan_string = String::new();
    let mut year = ctx.cfg.start_year;
    for (i, seg) in segs.iter().enumerate() {
        if i > 0 {
            plan_string.push(',');
        }
        let _ = write!(
            plan_string,
            "{}:{}",
            ctx.fleet.servers()[seg.server as usize].id,
            year
        );
        year += seg.duration as i32;
    }
    Candidate {
        objective,
        n_upgrades: segs.len() as u32,
        plan_string,
        segs,
    }
}

#[inline]
fn objective_of(kind: MetricKind, horizon_years: f64, totals: Sums) -> f64 {
    let qps = totals.qps_years / horizon_years;
    match kind {
        MetricKind::QpsPerTco => qps / totals.tco,
        MetricKind::QpsPerCo2 => qps / totals.co2,
        MetricKind::QpsPerTcoCo2 => qps / (totals.tco * totals.co2),
    }
}

/// Keeps the N best candidates seen so far, plus the examined-plan count.
struct TopN {
    kind: MetricKind,
    horizon_years: f64,
    capacity: usize,
    count: u64,
    heap: BinaryHeap<ByRankWorst>,
    /// Objective of the worst kept candidate once the heap is full; plans
    /// strictly below it are rejected without allocating.
    threshold: f64,
}

impl TopN {
    fn new(kind: MetricKind, capacity: usize, horizon_years: f64) -> Self {
        TopN {
            kind,
            horizon_years,
            capacity,
            count: 0,
            heap: BinaryHeap::with_capacity(capacity + 1),
            threshold: f64::NEG_INFINITY,
        }
    }

    fn offer(&mut self, candidate: Candidate) {
        if self.heap.len() < self.capacity {
            self.heap.push(ByRankWorst(candidate));
            if self.heap.len() == self.capacity {
                self.threshold = self.heap.peek().expect("non-empty heap").0.objective;
            }
            return;
        }
        let worst = self.heap.peek().expect("non-empty heap");
        if rank_order(&candidate, &worst.0) == Ordering::Less {
            self.heap.pop();
            self.heap.push(ByRankWorst(candidate));
            self.threshold = self.heap.peek().expect("non-empty heap").0.objective;
        }
    }

    fn merge(mut self, other: TopN) -> TopN {
        self.count += other.count;
        for entry in other.heap.into_vec() {
            self.offer(entry.0);
        }
        self
    }

    fn finish(self) -> (u64, Vec<Candidate>) {
        let mut candidates: Vec<Candidate> =
            self.heap.into_vec().into_iter().map(|e| e.0).collect();
        candidates.sort_by(rank_order);
        (self.count, candidates)
    }
}

impl LeafSink for TopN {
    #[inline]
    fn leaf(&mut self, ctx: &EnumCtx, prefix: &[IdxSeg], tail: IdxSeg, totals: Sums) {
        self.count += 1;
        let objective = objective_of(self.kind, self.horizon_years, totals);
        if self.heap.len() == self.capacity && objective < self.threshold {
            return;
        }
        let candidate = make_candidate(ctx, prefix, tail, objective);
        self.offer(candidate);
    }
}

// ---------------------------------------------------------------------------
// Public API: exhaustive search
// ---------------------------------------------------------------------------

/// Evaluation of the baseline plan (the configured baseline server kept for
/// the whole horizon), used as the denominator for normalized metrics.
pub fn baseline_evaluation(
    fleet: &Fleet,
    cfg: &EconomicConfig,
) -> Result<PlanEvaluation, SolverError> {
    cfg.validate()?;
    let id = &cfg.baseline_server_id;
    if fleet.get(id).is_none() {
        return Err(SolverError::UnknownBaseline { id: id.clone() });
    }
    let plan = UpgradePlan::new(vec![PlanSegment::new(
        id.clone(),
        cfg.start_year,
        cfg.horizon_years(),
    )]);
    Ok(evaluate_plan(&plan, fleet, cfg)?)
}

/// Exhaustively rank every canonical plan and keep the best `top_n`.
pub fn solve_global(
    fleet: &Fleet,
    cfg: &EconomicConfig,
    kind: MetricKind,
    top_n: usize,
) -> Result<SolverReport, SolverError> {
    solve_global_with(fleet, cfg, kind, top_n, &SolverOptions::default())
}

pub fn solve_global_with(
    fleet: &Fleet,
    cfg: &EconomicConfig,
    kind: MetricKind,
    top_n: usize,
    opts: &SolverOptions,
) -> Result<SolverReport, SolverError> {
    if top_n == 0 {
        return Err(SolverError::ZeroTopN);
    }
    let ctx = EnumCtx::new(fleet, cfg, opts)?;
    let tasks = split_tasks(&ctx, SPLIT_DEPTH);
    let horizon_years = cfg.horizon_years() as f64;
    let top = in_pool(opts.workers, || {
        par_run(
            &ctx,
            tasks,
            || TopN::new(kind, top_n, horizon_years),
            TopN::merge,
        )
    })?;
    let (total_plans, candidates) = top.finish();

    let baseline = baseline_evaluation(fleet, cfg)?;
    let mut ranked = Vec::with_capacity(candidates.len());
    for candidate in candidates {
        let plan = plan_from_segs(&ctx, candidate.segs.iter().copied());
        let eval = evaluate_plan(&plan, fleet, cfg)?;
        // The walk's incremental sums must reproduce the evaluator exactly.
        debug_assert_eq!(
            eval.objective(kind).to_bits(),
            candidate.objective.to_bits(),
            "solver fast path diverged from evaluator for {plan}"
        );
        ranked.push(normalize(&eval, &baseline)?);
    }
    Ok(SolverReport {
        ranked,
        total_plans,
        objective: kind,
        config: cfg.clone(),
    })
}

/// Visit every canonical plan in deterministic order (single-threaded) and
/// return how many there were.
pub fn for_each_global_plan(
    fleet: &Fleet,
    cfg: &EconomicConfig,
    opts: &SolverOptions,
    visit: impl FnMut(&UpgradePlan),
) -> Result<u64, SolverError> {
    struct Visitor<F> {
        visit: F,
        count: u64,
    }
    impl<F: FnMut(&UpgradePlan)> LeafSink for Visitor<F> {
        fn leaf(&mut self, ctx: &EnumCtx, prefix: &[IdxSeg], tail: IdxSeg, _totals: Sums) {
            self.count += 1;
            let plan = plan_from_segs(ctx, prefix.iter().copied().chain(std::iter::once(tail)));
            (self.visit)(&plan);
        }
    }

    let ctx = EnumCtx::new(fleet, cfg, opts)?;
    let mut sink = Visitor { visit, count: 0 };
    let mut stack = Vec::new();
    walk(&ctx, 0, NO_LAST, Sums::default(), &mut stack, &mut sink);
    Ok(sink.count)
}

/// Materialize every canonical plan. Only sensible when the space is small;
/// use [`for_each_global_plan`] or [`solve_global`] otherwise.
pub fn enumerate_global(
    fleet: &Fleet,
    cfg: &EconomicConfig,
) -> Result<Vec<UpgradePlan>, SolverError> {
    let mut plans = Vec::new();
    for_each_global_plan(fleet, cfg, &SolverOptions::default(), |plan| {
        plans.push(plan.clone())
    })?;
    Ok(plans)
}

/// Count canonical plans with a dynamic program over (year, last server),
/// without materializing any plan. Serves as an independent cross-check of
/// the enumeration.
pub fn count_plans(fleet: &Fleet, cfg: &EconomicConfig) -> Result<u64, SolverError> {
    count_plans_with(fleet, cfg, &SolverOptions::default())
}

pub fn count_plans_with(
    fleet: &Fleet,
    cfg: &EconomicConfig,
    opts: &SolverOptions,
) -> Result<u64, SolverError> {
    let ctx = EnumCtx::new(fleet, cfg, opts)?;
    let horizon = ctx.horizon;
    let n = fleet.len();
    // suffixes[t][l]: plan suffixes covering years t.. when the previous
    // segment used server l (l == n encodes "no previous server").
    let mut suffixes = vec![vec![0u64; n + 1]; horizon + 1];
    suffixes[horizon] = vec![1; n + 1];
    for t in (0..horizon).rev() {
        for l in 0..=n {
            let last = if l == n { NO_LAST } else { l };
            let mut total: u64 = 0;
            // `s` indexes a different `suffixes` row for every duration, so
            // a range loop is the natural shape here.
            #[allow(clippy::needless_range_loop)]
            for s in 0..ctx.avail[t] {
                if !ctx.allowed(last, s) {
                    continue;
                }
                for d in 1..=(horizon - t) {
                    total = total
                        .checked_add(suffixes[t + d][s])
                        .ok_or(SolverError::PlanCountOverflow)?;
                }
            }
            suffixes[t][l] = total;
        }
    }
    Ok(suffixes[0][n])
}

/// 1-based position of `plan` in the full ranking for `kind`: one plus the
/// number of plans that rank strictly better under the solver's total order.
pub fn rank_of_plan(
    fleet: &Fleet,
    cfg: &EconomicConfig,
    kind: MetricKind,
    plan: &UpgradePlan,
) -> Result<u64, SolverError> {
    rank_of_plan_with(fleet, cfg, kind, plan, &SolverOptions::default())
}

pub fn rank_of_plan_with(
    fleet: &Fleet,
    cfg: &EconomicConfig,
    kind: MetricKind,
    plan: &UpgradePlan,
    opts: &SolverOptions,
) -> Result<u64, SolverError> {
    let eval = evaluate_plan(plan, fleet, cfg)?;
    let target = Candidate {
        objective: eval.objective(kind),
        n_upgrades: eval.n_upgrades,
        plan_string: eval.plan.to_string(),
        segs: Vec::new(),
    };

    struct RankSink<'t> {
        kind: MetricKind,
        horizon_years: f64,
        target: &'t Candidate,
        better: u64,
    }
    impl LeafSink for RankSink<'_> {
        #[inline]
        fn leaf(&mut self, ctx: &EnumCtx, prefix: &[IdxSeg], tail: IdxSeg, totals: Sums) {
            let objective = objective_of(self.kind, self.horizon_years, totals);
            if objective < self.target.objective {
                return;
            }
            if objective > self.target.objective {
                self.better += 1;
                return;
            }
            let candidate = make_candidate(ctx, prefix, tail, objective);
            if rank_order(&candidate, self.target) == Ordering::Less {
                self.better += 1;
            }
        }
    }

    let ctx = EnumCtx::new(fleet, cfg, opts)?;
    let tasks = split_tasks(&ctx, SPLIT_DEPTH);
    let horizon_years = cfg.horizon_years() as f64;
    let target_ref = &target;
    let sink = in_pool(opts.workers, || {
        par_run(
            &ctx,
            tasks,
            || RankSink {
                kind,
                horizon_years,
                target: target_ref,
                better: 0,
            },
            |mut a, b| {
                a.better += b.better;
                a
            },
        )
    })?;
    Ok(sink.better + 1)
}

/// Rank the entire space and return every evaluation. Materializes one
/// record per plan, so keep this to small fleets or `monotone_only` runs.
pub fn rank_all_with(
    fleet: &Fleet,
    cfg: &EconomicConfig,
    kind: MetricKind,
    opts: &SolverOptions,
) -> Result<SolverReport, SolverError> {
    struct Collect {
        kind: MetricKind,
        horizon_years: f64,
        items: Vec<(f64, Vec<IdxSeg>)>,
    }
    impl LeafSink for Collect {
        fn leaf(&mut self, _ctx: &EnumCtx, prefix: &[IdxSeg], tail: IdxSeg, totals: Sums) {
            let objective = objective_of(self.kind, self.horizon_years, totals);
            let mut segs = Vec::with_capacity(prefix.len() + 1);
            segs.extend_from_slice(prefix);
            segs.push(tail);
            self.items.push((objective, segs));
        }
    }

    let ctx = EnumCtx::new(fleet, cfg, opts)?;
    let tasks = split_tasks(&ctx, SPLIT_DEPTH);
    let horizon_years = cfg.horizon_years() as f64;
    let collected = in_pool(opts.workers, || {
        par_run(
            &ctx,
            tasks,
            || Collect {
                kind,
                horizon_years,
                items: Vec::new(),
            },
            |mut a, mut b| {
                a.items.append(&mut b.items);
                a
            },
        )
    })?;

    let mut items = collected.items;
    let plan_string = |segs: &[IdxSeg]| plan_from_segs(&ctx, segs.iter().copied()).to_string();
    items.sort_by(|a, b| {
        b.0.total_cmp(&a.0)
            .then_with(|| a.1.len().cmp(&b.1.len()))
            .then_with(|| plan_string(&a.1).cmp(&plan_string(&b.1)))
    });

    let baseline = baseline_evaluation(fleet, cfg)?;
    let total_plans = items.len() as u64;
    let mut ranked = Vec::with_capacity(items.len());
    for (objective, segs) in items {
        let plan = plan_from_segs(&ctx, segs.iter().copied());
        let eval = evaluate_plan(&plan, fleet, cfg)?;
        debug_assert_eq!(eval.objective(kind).to_bits(), objective.to_bits());
        ranked.push(normalize(&eval, &baseline)?);
    }
    Ok(SolverReport {
        ranked,
        total_plans,
        objective: kind,
        config: cfg.clone(),
    })
}

// ---------------------------------------------------------------------------
// Public API: fixed-cycle greedy baselines
// ---------------------------------------------------------------------------

/// Greedy upgrade schedule on a fixed cadence: at every cycle boundary, pick
/// the available server maximizing the objective over just the next cycle.
/// Keeping the installed server costs no new purchase or embodied carbon;
/// any other choice pays both. Ties go to the newer entry year, then the
/// lexicographically smaller id.
pub fn solve_local(
    fleet: &Fleet,
    cfg: &EconomicConfig,
    spec: &LocalPlanSpec,
) -> Result<PlanEvaluation, SolverError> {
    cfg.validate()?;
    let cycle = spec.cycle_years;
    if !LOCAL_CYCLES.contains(&cycle) {
        return Err(SolverError::UnsupportedCycle(cycle));
    }
    let horizon = cfg.horizon_years();
    if !horizon.is_multiple_of(cycle) {
        return Err(SolverError::CycleDoesNotDivideHorizon { cycle, horizon });
    }

    let servers = fleet.servers();
    let mut segments: Vec<PlanSegment> = Vec::with_capacity((horizon / cycle) as usize);
    let mut installed: Option<usize> = None;
    for k in 0..horizon / cycle {
        let year = cfg.start_year + (k * cycle) as i32;
        let n_avail = fleet.available_count(year);
        if n_avail == 0 {
            return Err(SolverError::NoServerAvailable { year });
        }
        let mut best: Option<(usize, f64)> = None;
        for s in 0..n_avail {
            let server = &servers[s];
            let keep = installed == Some(s);
            let cost = segment_cost(server, cycle, cfg);
            let carbon = segment_carbon(server, cycle, cfg);
            let tco = if keep {
                cost.opex
            } else {
                cost.capex + cost.opex
            };
            let co2 = if keep {
                carbon.operational_kg
            } else {
                carbon.embodied_kg + carbon.operational_kg
            };
            let score = match spec.greedy_metric {
                MetricKind::QpsPerTco => server.qps / tco,
                MetricKind::QpsPerCo2 => server.qps / co2,
                MetricKind::QpsPerTcoCo2 => server.qps / (tco * co2),
            };
            let replace = match best {
                None => true,
                Some((b, best_score)) => match score.total_cmp(&best_score) {
                    Ordering::Greater => true,
                    Ordering::Less => false,
                    Ordering::Equal => match server.entry_year.cmp(&servers[b].entry_year) {
                        Ordering::Greater => true,
                        Ordering::Less => false,
                        Ordering::Equal => server.id < servers[b].id,
                    },
                },
            };
            if replace {
                best = Some((s, score));
            }
        }
        let (choice, _) = best.expect("at least one available server");
        segments.push(PlanSegment::new(servers[choice].id.clone(), year, cycle));
        installed = Some(choice);
    }

    let plan = UpgradePlan::new(segments).canonicalize();
    let eval = evaluate_plan(&plan, fleet, cfg)?;
    let baseline = baseline_evaluation(fleet, cfg)?;
    Ok(normalize(&eval, &baseline)?)
}

/// Run the greedy strategy for every supported cycle that divides the
/// horizon and rank the outcomes like the global solver would.
pub fn solve_all_local(
    fleet: &Fleet,
    cfg: &EconomicConfig,
    kind: MetricKind,
) -> Result<SolverReport, SolverError> {
    cfg.validate()?;
    let horizon = cfg.horizon_years();
    let mut ranked = Vec::new();
    for cycle in LOCAL_CYCLES {
        if !horizon.is_multiple_of(cycle) {
            continue;
        }
        ranked.push(solve_local(
            fleet,
            cfg,
            &LocalPlanSpec {
                cycle_years: cycle,
                greedy_metric: kind,
            },
        )?);
    }
    ranked.sort_by(|a, b| {
        b.objective(kind)
            .total_cmp(&a.objective(kind))
            .then_with(|| a.n_upgrades.cmp(&b.n_upgrades))
            .then_with(|| a.plan.to_string().cmp(&b.plan.to_string()))
    });
    let total_plans = ranked.len() as u64;
    Ok(SolverReport {
        ranked,
        total_plans,
        objective: kind,
        config: cfg.clone(),
    })
}
