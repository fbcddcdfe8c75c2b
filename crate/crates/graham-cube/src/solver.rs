//! A deterministic conflict-driven clause learning solver with two-watched
//! literal propagation, activity-based decisions, phase saving and geometric
//! restarts, plus a file-based bridge to external solvers and a cross-check
//! harness.

use crate::encode::{build_cnf, parse_dimacs, CnfFormula};
use crate::error::{Error, Result};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use std::time::{Duration, Instant};

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
pub enum Status {
    Sat,
    Unsat,
}

#[derive(Clone, Copy, Debug, Default, Serialize)]
pub struct Stats {
    pub decisions: u64,
    pub conflicts: u64,
    pub propagations: u64,
    pub restarts: u64,
    #[serde(skip)]
    pub elapsed: Duration,
}

/// Solver answer; a model is present iff the status is `Sat`, and has been
/// checked against every clause before being returned.
#[derive(Clone, Debug)]
pub struct SolveResult {
    pub status: Status,
    pub model: Option<Vec<bool>>,
    pub stats: Stats,
}

/// Decision variable ordering.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Heuristic {
    /// Exponentially decayed conflict activity, ties broken by variable index.
    Vsids,
    /// Lowest unassigned variable index first.
    FixedOrder,
}

#[derive(Clone, Debug)]
pub struct SolverConfig {
    pub heuristic: Heuristic,
    pub seed: u64,
    /// Probability of a random decision variable (VSIDS only).
    pub random_freq: f64,
    pub restart_base: u64,
    pub restart_factor: f64,
    pub default_phase: bool,
    /// 0 = silent; 1 = progress line on stderr every 100k conflicts.
    pub verbosity: u8,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            heuristic: Heuristic::Vsids,
            seed: 0,
            random_freq: 0.02,
            restart_base: 100,
            restart_factor: 1.02,
            default_phase: false,
            verbosity: 0,
        }
    }
}

impl SolverConfig {
    pub fn describe(&self) -> String {
        format!(
            "{:?} seed={} rf={} restart={}x{}",
            self.heuristic, self.seed, self.random_freq, self.restart_base, self.restart_factor
        )
    }
}

type ClauseRef = u32;
const NO_REASON: ClauseRef = u32::MAX;

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
struct Lit(u32);

impl Lit {
    fn new(var: usize, positive: bool) -> Lit {
        Lit((var as u32) << 1 | (!positive as u32))
    }
    fn from_dimacs(l: i32) -> Lit {
        Lit::new(l.unsigned_abs() as usize - 1, l > 0)
    }
    fn var(self) -> usize {
        (self.0 >> 1) as usize
    }
    fn positive(self) -> bool {
        self.0 & 1 == 0
    }
    fn negate(self) -> Lit {
        Lit(self.0 ^ 1)
    }
    fn index(self) -> usize {
        self.0 as usize
    }
}

struct Clause {
    lits: Vec<Lit>,
    learnt: bool,
    activity: f64,
    lbd: u32,
}

#[derive(Clone, Copy)]
struct Watcher {
    clause: ClauseRef,
    blocker: Lit,
}

struct Solver {
    num_vars: usize,
    clauses: Vec<Clause>,
    watches: Vec<Vec<Watcher>>,
    assigns: Vec<i8>, // 0 = unassigned, 1 = true, -1 = false
    level: Vec<u32>,
    reason: Vec<ClauseRef>,
    trail: Vec<Lit>,
    trail_lim: Vec<usize>,
    qhead: usize,
    activity: Vec<f64>,
    var_inc: f64,
    cla_inc: f64,
    polarity: Vec<bool>,
    seen: Vec<bool>,
    order: Vec<usize>, // lazily re-sorted candidate list
    learnt_count: usize,
    stats: Stats,
    config: SolverConfig,
    rng: ChaCha8Rng,
}

const VAR_DECAY: f64 = 0.95;
const CLA_DECAY: f64 = 0.999;

impl Solver {
    fn new(f: &CnfFormula, config: SolverConfig) -> Result<Self> {
        f.validate()?;
        let n = f.var_count;
        let rng = ChaCha8Rng::seed_from_u64(config.seed);
        let mut s = Solver {
            num_vars: n,
            clauses: Vec::with_capacity(f.clauses.len()),
            watches: vec![Vec::new(); 2 * n],
            assigns: vec![0; n],
            level: vec![0; n],
            reason: vec![NO_REASON; n],
            trail: Vec::with_capacity(n),
            trail_lim: Vec::new(),
            qhead: 0,
            activity: vec![0.0; n],
            var_inc: 1.0,
            cla_inc: 1.0,
            polarity: vec![config.default_phase; n],
            seen: vec![false; n],
            order: (0..n).collect(),
            learnt_count: 0,
            stats: Stats::default(),
            config,
            rng,
        };
        for clause in &f.clauses {
            let mut lits: Vec<Lit> = clause.iter().map(|&l| Lit::from_dimacs(l)).collect();
            lits.sort_by_key(|l| l.0);
            lits.dedup();
            if lits.windows(2).any(|w| w[0].var() == w[1].var()) {
                continue; // tautology
            }
            if !s.add_clause(lits, false, 0) {
                return Ok(s.mark_root_conflict());
            }
        }
        Ok(s)
    }

    fn mark_root_conflict(mut self) -> Self {
        self.trail_lim.clear();
        self.qhead = usize::MAX; // sentinel checked in solve()
        self
    }

    fn value(&self, l: Lit) -> i8 {
        let v = self.assigns[l.var()];
        if l.positive() {
            v
        } else {
            -v
        }
    }

    fn decision_level(&self) -> u32 {
        self.trail_lim.len() as u32
    }

    /// Returns false on immediate root-level conflict.
    fn add_clause(&mut self, lits: Vec<Lit>, learnt: bool, lbd: u32) -> bool {
        match lits.len() {
            0 => return false,
            1 => {
                return match self.value(lits[0]) {
                    1 => true,
                    -1 => false,
                    _ => {
                        self.enqueue(lits[0], NO_REASON);
                        true
                    }
                };
            }
            _ => {}
        }
        let cref = self.clauses.len() as ClauseRef;
        self.watches[lits[0].negate().index()].push(Watcher { clause: cref, blocker: lits[1] });
        self.watches[lits[1].negate().index()].push(Watcher { clause: cref, blocker: lits[0] });
        self.clauses.push(Clause { lits, learnt, activity: 0.0, lbd });
        if learnt {
            self.learnt_count += 1;
        }
        true
    }

    fn enqueue(&mut self, l: Lit, reason: ClauseRef) {
        debug_assert_eq!(self.value(l), 0);
        self.assigns[l.var()] = if l.positive() { 1 } else { -1 };
        self.level[l.var()] = self.decision_level();
        self.reason[l.var()] = reason;
        self.trail.push(l);
    }

    fn propagate(&mut self) -> Option<ClauseRef> {
        while self.qhead < self.trail.len() {
            let p = self.trail[self.qhead];
            self.qhead += 1;
            self.stats.propagations += 1;
            let false_lit = p.negate();
            let mut ws = std::mem::take(&mut self.watches[p.index()]);
            let mut i = 0;
            'watchers: while i < ws.len() {
                let w = ws[i];
                if self.value(w.blocker) == 1 {
                    i += 1;
                    continue;
                }
                let cref = w.clause as usize;
                // make sure the false literal is at position 1
                if self.clauses[cref].lits[0] == false_lit {
                    self.clauses[cref].lits.swap(0, 1);
                }
                debug_assert_eq!(self.clauses[cref].lits[1], false_lit);
                let first = self.clauses[cref].lits[0];
                if first != w.blocker && self.value(first) == 1 {
                    ws[i] = Watcher { clause: w.clause, blocker: first };
                    i += 1;
                    continue;
                }
                // look for a new watch
                for k in 2..self.clauses[cref].lits.len() {
                    let l = self.clauses[cref].lits[k];
                    if self.value(l) != -1 {
                        self.clauses[cref].lits.swap(1, k);
                        self.watches[l.negate().index()]
                            .push(Watcher { clause: w.clause, blocker: first });
                        ws.remove(i);
                        continue 'watchers;
                    }
                }
                // unit or conflicting
                ws[i] = Watcher { clause: w.clause, blocker: first };
                i += 1;
                if self.value(first) == -1 {
                    self.watches[p.index()] = ws;
                    self.qhead = self.trail.len();
                    return Some(w.clause);
                }
                self.enqueue(first, w.clause);
            }
            self.watches[p.index()] = ws;
        }
        None
    }

    fn bump_var(&mut self, v: usize) {
        self.activity[v] += self.var_inc;
        if self.activity[v] > 1e100 {
            for a in &mut self.activity {
                *a *= 1e-100;
            }
            self.var_inc *= 1e-100;
        }
    }

    fn bump_clause(&mut self, cref: ClauseRef) {
        let c = &mut self.clauses[cref as usize];
        if !c.learnt {
            return;
        }
        c.activity += self.cla_inc;
        if c.activity > 1e20 {
            for cl in self.clauses.iter_mut().filter(|cl| cl.learnt) {
                cl.activity *= 1e-20;
            }
            self.cla_inc *= 1e-20;
        }
    }

    /// 1UIP conflict analysis; returns the learnt clause (asserting literal
    /// first) and the backtrack level.
    fn analyze(&mut self, conflict: ClauseRef) -> (Vec<Lit>, u32) {
        let mut learnt: Vec<Lit> = vec![Lit(0)]; // slot for the asserting literal
        let mut counter = 0usize;
        let mut p: Option<Lit> = None;
        let mut cref = conflict;
        let mut idx = self.trail.len();
        loop {
            self.bump_clause(cref);
            let start = usize::from(p.is_some());
            for k in start..self.clauses[cref as usize].lits.len() {
                let q = self.clauses[cref as usize].lits[k];
                let v = q.var();
                if !self.seen[v] && self.level[v] > 0 {
                    self.seen[v] = true;
                    self.bump_var(v);
                    if self.level[v] == self.decision_level() {
                        counter += 1;
                    } else {
                        learnt.push(q);
                    }
                }
            }
            // pick the next seen literal on the trail
            loop {
                idx -= 1;
                if self.seen[self.trail[idx].var()] {
                    break;
                }
            }
            let lit = self.trail[idx];
            self.seen[lit.var()] = false;
            counter -= 1;
            if counter == 0 {
                learnt[0] = lit.negate();
                break;
            }
            p = Some(lit);
            cref = self.reason[lit.var()];
            debug_assert_ne!(cref, NO_REASON);
        }
        // clause minimization: drop literals implied by the rest
        let keep: Vec<bool> = learnt
            .iter()
            .enumerate()
            .map(|(i, &l)| i == 0 || !self.redundant(l, &learnt))
            .collect();
        let mut minimized: Vec<Lit> =
            learnt.iter().zip(&keep).filter(|(_, &k)| k).map(|(&l, _)| l).collect();
        for l in &learnt {
            self.seen[l.var()] = false;
        }
        // backtrack level: second-highest level in the clause
        let bt = if minimized.len() == 1 {
            0
        } else {
            let (mut max_i, mut max_lvl) = (1, self.level[minimized[1].var()]);
            for (i, l) in minimized.iter().enumerate().skip(2) {
                if self.level[l.var()] > max_lvl {
                    max_i = i;
                    max_lvl = self.level[l.var()];
                }
            }
            minimized.swap(1, max_i);
            max_lvl
        };
        (minimized, bt)
    }

    /// A literal is redundant if its reason's other literals are all already
    /// in the learnt clause (marked seen).
    fn redundant(&self, l: Lit, learnt: &[Lit]) -> bool {
        let r = self.reason[l.var()];
        if r == NO_REASON {
            return false;
        }
        let _ = learnt;
        self.clauses[r as usize]
            .lits
            .iter()
            .all(|&q| q.var() == l.var() || self.seen[q.var()] || self.level[q.var()] == 0)
    }

    fn backtrack(&mut self, target: u32) {
        if self.decision_level() <= target {
            return;
        }
        let lim = self.trail_lim[target as usize];
        for &l in &self.trail[lim..] {
            let v = l.var();
            self.assigns[v] = 0;
            self.reason[v] = NO_REASON;
            self.polarity[v] = l.positive();
        }
        self.trail.truncate(lim);
        self.trail_lim.truncate(target as usize);
        self.qhead = self.trail.len();
    }

    fn pick_branch_var(&mut self) -> Option<usize> {
        match self.config.heuristic {
            Heuristic::FixedOrder => (0..self.num_vars).find(|&v| self.assigns[v] == 0),
            Heuristic::Vsids => {
                if self.config.random_freq > 0.0
                    && self.rng.gen_bool(self.config.random_freq)
                {
                    let unassigned: Vec<usize> =
                        (0..self.num_vars).filter(|&v| self.assigns[v] == 0).collect();
                    if !unassigned.is_empty() {
                        let i = self.rng.gen_range(0..unassigned.len());
                        return Some(unassigned[i]);
                    }
                }
                let mut best: Option<usize> = None;
                for &v in &self.order {
                    if self.assigns[v] != 0 {
                        continue;
                    }
                    match best {
                        None => best = Some(v),
                        Some(b) => {
                            if self.activity[v] > self.activity[b] {
                                best = Some(v);
                            }
                        }
                    }
                }
                best
            }
        }
    }

    /// Number of distinct decision levels among the clause literals.
    fn clause_lbd(&self, lits: &[Lit]) -> u32 {
        let mut levels: Vec<u32> = lits.iter().map(|l| self.level[l.var()]).collect();
        levels.sort_unstable();
        levels.dedup();
        levels.len() as u32
    }

    fn reduce_learnts(&mut self) {
        // drop the worse half of the unlocked learnt clauses, ranked by
        // literal block distance then activity; glue clauses (lbd <= 2)
        // and binaries are kept unconditionally
        let locked: Vec<bool> = (0..self.clauses.len() as ClauseRef)
            .map(|cref| {
                self.clauses[cref as usize]
                    .lits
                    .first()
                    .map(|&l| self.value(l) == 1 && self.reason[l.var()] == cref)
                    .unwrap_or(false)
            })
            .collect();
        let mut candidates: Vec<usize> = (0..self.clauses.len())
            .filter(|&i| {
                let c = &self.clauses[i];
                c.learnt && !locked[i] && c.lits.len() > 2 && c.lbd > 2
            })
            .collect();
        if candidates.len() < 100 {
            return;
        }
        candidates.sort_by(|&a, &b| {
            let (ca, cb) = (&self.clauses[a], &self.clauses[b]);
            cb.lbd
                .cmp(&ca.lbd)
                .then(ca.activity.partial_cmp(&cb.activity).unwrap())
                .then(b.cmp(&a))
        });
        let drop: std::collections::HashSet<usize> =
            candidates[..candidates.len() / 2].iter().copied().collect();
        let mut remap: Vec<ClauseRef> = vec![NO_REASON; self.clauses.len()];
        let mut kept: Vec<Clause> = Vec::with_capacity(self.clauses.len());
        for (i, c) in std::mem::take(&mut self.clauses).into_iter().enumerate() {
            if drop.contains(&i) {
                continue;
            }
            remap[i] = kept.len() as ClauseRef;
            kept.push(c);
        }
        self.clauses = kept;
        self.learnt_count = self.clauses.iter().filter(|c| c.learnt).count();
        for r in &mut self.reason {
            if *r != NO_REASON {
                *r = remap[*r as usize];
                debug_assert_ne!(*r, NO_REASON, "locked clause was dropped");
            }
        }
        // rebuild watches
        for w in &mut self.watches {
            w.clear();
        }
        for (i, c) in self.clauses.iter().enumerate() {
            let cref = i as ClauseRef;
            self.watches[c.lits[0].negate().index()]
                .push(Watcher { clause: cref, blocker: c.lits[1] });
            self.watches[c.lits[1].negate().index()]
                .push(Watcher { clause: cref, blocker: c.lits[0] });
        }
    }

    fn solve(&mut self) -> SolveResult {
        let start = Instant::now();
        if self.qhead == usize::MAX {
            // root conflict while loading clauses
            return SolveResult {
                status: Status::Unsat,
                model: None,
                stats: Stats { elapsed: start.elapsed(), ..self.stats },
            };
        }
        let mut restart_limit = self.config.restart_base;
        let mut conflicts_since_restart = 0u64;
        let mut max_learnts = 2000usize;
        loop {
            if let Some(conflict) = self.propagate() {
                self.stats.conflicts += 1;
                conflicts_since_restart += 1;
                if self.config.verbosity > 0 && self.stats.conflicts % 100_000 == 0 {
                    eprintln!(
                        "c conflicts={} decisions={} learnts={} restarts={} elapsed={:?}",
                        self.stats.conflicts,
                        self.stats.decisions,
                        self.learnt_count,
                        self.stats.restarts,
                        start.elapsed()
                    );
                }
                if self.decision_level() == 0 {
                    return SolveResult {
                        status: Status::Unsat,
                        model: None,
                        stats: Stats { elapsed: start.elapsed(), ..self.stats },
                    };
                }
                let (learnt, bt) = self.analyze(conflict);
                self.backtrack(bt);
                if learnt.len() == 1 {
                    self.enqueue(learnt[0], NO_REASON);
                } else {
                    let cref = self.clauses.len() as ClauseRef;
                    let asserting = learnt[0];
                    let lbd = self.clause_lbd(&learnt);
                    self.add_clause(learnt, true, lbd);
                    self.bump_clause(cref);
                    self.enqueue(asserting, cref);
                }
                self.var_inc /= VAR_DECAY;
                self.cla_inc /= CLA_DECAY;
            } else {
                if self.learnt_count > max_learnts {
                    self.reduce_learnts();
                    max_learnts += 512;
                }
                if conflicts_since_restart >= restart_limit {
                    conflicts_since_restart = 0;
                    restart_limit =
                        (restart_limit as f64 * self.config.restart_factor) as u64;
                    self.stats.restarts += 1;
                    self.backtrack(0);
                    continue;
                }
                match self.pick_branch_var() {
                    None => {
                        let model: Vec<bool> =
                            self.assigns.iter().map(|&a| a == 1).collect();
                        return SolveResult {
                            status: Status::Sat,
                            model: Some(model),
                            stats: Stats { elapsed: start.elapsed(), ..self.stats },
                        };
                    }
                    Some(v) => {
                        self.stats.decisions += 1;
                        self.trail_lim.push(self.trail.len());
                        self.enqueue(Lit::new(v, self.polarity[v]), NO_REASON);
                    }
                }
            }
        }
    }
}

/// Complete deterministic search. Any `Sat` model is verified against every
/// clause before being returned.
pub fn solve(f: &CnfFormula, config: &SolverConfig) -> Result<SolveResult> {
    let mut s = Solver::new(f, config.clone())?;
    let result = s.solve();
    if let Some(model) = &result.model {
        if !f.satisfied_by(model) {
            return Err(Error::ContractViolation(
                "internal solver produced a non-satisfying model".into(),
            ));
        }
    }
    Ok(result)
}

/// Runs an external solver on a DIMACS file. `command_template` must contain
/// the placeholder `{file}`; standard competition output is parsed
/// (`s SATISFIABLE` / `s UNSATISFIABLE`, `v ` literal lines) and any model is
/// re-verified against the formula parsed back from the file.
pub fn solve_external(dimacs_path: &std::path::Path, command_template: &str) -> Result<SolveResult> {
    let start = Instant::now();
    if !command_template.contains("{file}") {
        return Err(Error::ExternalProcess("command template lacks {file} placeholder".into()));
    }
    let formula = parse_dimacs(&std::fs::read_to_string(dimacs_path)?)?;
    let cmd = command_template.replace("{file}", &dimacs_path.to_string_lossy());
    let output = std::process::Command::new("sh")
        .arg("-c")
        .arg(&cmd)
        .output()
        .map_err(|e| Error::ExternalProcess(e.to_string()))?;
    // SAT solvers conventionally exit 10 (SAT) / 20 (UNSAT); other nonzero
    // codes without a status line are process failures
    let stdout = String::from_utf8_lossy(&output.stdout);
    let mut status = None;
    let mut lits: Vec<i32> = Vec::new();
    for line in stdout.lines() {
        if line.starts_with("s ") {
            status = match line.trim() {
                "s SATISFIABLE" => Some(Status::Sat),
                "s UNSATISFIABLE" => Some(Status::Unsat),
                other => return Err(Error::ExternalParse(format!("unknown status line {other:?}"))),
            };
        } else if let Some(rest) = line.strip_prefix("v ") {
            for tok in rest.split_whitespace() {
                let l: i32 = tok
                    .parse()
                    .map_err(|_| Error::ExternalParse(format!("bad model literal {tok:?}")))?;
                if l != 0 {
                    lits.push(l);
                }
            }
        }
    }
    let status = status.ok_or_else(|| {
        if output.status.success() || output.status.code() == Some(10) || output.status.code() == Some(20) {
            Error::ExternalParse("no status line in solver output".into())
        } else {
            Error::ExternalProcess(format!("exit code {:?}", output.status.code()))
        }
    })?;
    let model = match status {
        Status::Unsat => None,
        Status::Sat => {
            let mut model = vec![false; formula.var_count];
            let mut assigned = vec![false; formula.var_count];
            for l in lits {
                let v = l.unsigned_abs() as usize;
                if v == 0 || v > formula.var_count {
                    return Err(Error::ExternalParse(format!("model literal {l} out of range")));
                }
                model[v - 1] = l > 0;
                assigned[v - 1] = true;
            }
            if !assigned.iter().all(|&a| a) {
                return Err(Error::ExternalParse("partial model from external solver".into()));
            }
            if !formula.satisfied_by(&model) {
                return Err(Error::ExternalModelInvalid);
            }
            Some(model)
        }
    };
    Ok(SolveResult {
        status,
        model,
        stats: Stats { elapsed: start.elapsed(), ..Stats::default() },
    })
}

/// One engine in a cross-check run.
#[derive(Clone, Debug)]
pub enum Engine {
    Internal(SolverConfig),
    External { command_template: String },
}

#[derive(Clone, Debug, Serialize)]
pub struct CrossCheckRun {
    pub engine: String,
    pub status: Status,
    pub decisions: u64,
    pub conflicts: u64,
    pub propagations: u64,
    pub elapsed_ms: u128,
}

#[derive(Clone, Debug, Serialize)]
pub struct CrossCheckReport {
    pub n: usize,
    pub status: Status,
    pub runs: Vec<CrossCheckRun>,
}

/// Solves the dimension-`n` instance under every engine and demands agreement
/// on the status. Disagreement is a hard error carrying both verdicts.
pub fn cross_check(n: usize, engines: &[Engine]) -> Result<CrossCheckReport> {
    if engines.len() < 2 {
        return Err(Error::Disagreement("cross_check needs at least 2 engines".into()));
    }
    let f = build_cnf(n)?;
    let mut runs = Vec::new();
    let mut status: Option<Status> = None;
    for engine in engines {
        let (name, result) = match engine {
            Engine::Internal(cfg) => (cfg.describe(), solve(&f, cfg)?),
            Engine::External { command_template } => {
                let dir = std::env::temp_dir();
                let path = dir.join(format!("graham-cube-xcheck-{n}-{}.cnf", std::process::id()));
                std::fs::write(&path, crate::encode::emit_dimacs(&f, &[]))?;
                let r = solve_external(&path, command_template);
                let _ = std::fs::remove_file(&path);
                (command_template.clone(), r?)
            }
        };
        match status {
            None => status = Some(result.status),
            Some(s) if s != result.status => {
                return Err(Error::Disagreement(format!(
                    "engine {name:?} reported {:?}, earlier engines reported {s:?} (n={n})",
                    result.status
                )));
            }
            _ => {}
        }
        runs.push(CrossCheckRun {
            engine: name,
            status: result.status,
            decisions: result.stats.decisions,
            conflicts: result.stats.conflicts,
            propagations: result.stats.propagations,
            elapsed_ms: result.stats.elapsed.as_millis(),
        });
    }
    Ok(CrossCheckReport { n, status: status.unwrap(), runs })
}
