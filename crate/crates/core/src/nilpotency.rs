//! The nilpotency condition (NC) for structure monoids, Malcev identities and the sufficient criteria
//! for Lyubashenko solutions and racks.

use std::collections::{HashMap, HashSet, VecDeque};

use serde::{Deserialize, Serialize};

use crate::monoid::{DValue, Monoid, MonoidError, SimPartition};
use crate::perm::{Nilpotency, Perm, DEFAULT_CLOSURE_CAP};
use crate::rack::Rack;
use crate::solution::{Solution, SolutionError};

pub const DEFAULT_STATE_CAP: usize = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error, Serialize, Deserialize)]
#[serde(tag = "error")]
pub enum NilpotencyError {
    #[error("reachable-λ fixpoint exceeded {cap} states")]
    StateCapExceeded { cap: usize },
    #[error("letter {letter} of a witness is not in Y ∩ Z")]
    LetterOutsideIntersection { letter: usize },
    #[error(transparent)]
    Monoid(#[from] MonoidError),
}

/// Every `λ'_a` with `a ∈ ⟨W⟩`, each with a shortest word realising it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReachableLambdas {
    pub w: Vec<usize>,
    pub perms: Vec<Perm>,
    pub witness_paths: Vec<Vec<usize>>,
}

impl ReachableLambdas {
    pub fn position(&self, g: &Perm) -> Option<usize> {
        self.perms.iter().position(|p| p == g)
    }
}

/// Fixpoint over states `(g, V)`, starting at `(id, W)`, with moves `(g, V) → (g∘λ_v, λ_v⁻¹(V))` for `v ∈ V`.
///
/// Writing `a = w + a″` gives `λ'_a = λ_w ∘ λ'_{λ_w⁻¹(a″)}`, so the first components of reachable states are
/// exactly the realisable `λ'_a`. The letter appended to the witness is `g(v)`.
pub fn reachable_lambdas(m: &Monoid, w: &[usize], state_cap: usize) -> Result<ReachableLambdas, NilpotencyError> {
    let n = m.n();
    let mut ws = w.to_vec();
    ws.sort_unstable();
    ws.dedup();
    let start = (Perm::identity(n), ws.clone());
    let mut seen: HashSet<(Perm, Vec<usize>)> = HashSet::from([start.clone()]);
    let mut queue = VecDeque::from([(start, Vec::new())]);
    let mut perms = Vec::new();
    let mut witness_paths = Vec::new();
    let mut found: HashSet<Perm> = HashSet::new();
    while let Some(((g, v), path)) = queue.pop_front() {
        if found.insert(g.clone()) {
            perms.push(g.clone());
            witness_paths.push(path.clone());
        }
        for &x in &v {
            let g2 = g.compose(m.lambda(x));
            let v2 = m.lambda_inv(x).image_of(&v);
            let next = (g2, v2);
            if seen.contains(&next) {
                continue;
            }
            if seen.len() >= state_cap {
                return Err(NilpotencyError::StateCapExceeded { cap: state_cap });
            }
            seen.insert(next.clone());
            let mut p = path.clone();
            p.push(g.apply(x));
            queue.push_back((next, p));
        }
    }
    Ok(ReachableLambdas { w: ws, perms, witness_paths })
}

/// Limits for the searches over generator subsets.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Budgets {
    pub node_cap: usize,
    pub closure_cap: usize,
    pub state_cap: usize,
    pub d_retries: u32,
    /// Sizes `i` with more than this many `i`-subsets are skipped.
    pub subsets_per_size: usize,
    pub malcev_class: usize,
    pub malcev_len: usize,
    /// Upper bound on equality tests made by the Malcev falsifier.
    pub malcev_comparisons: usize,
    /// Node cap for the equality tests made by the Malcev falsifier.
    pub malcev_node_cap: usize,
}

impl Default for Budgets {
    fn default() -> Self {
        Budgets {
            node_cap: crate::monoid::DEFAULT_NODE_CAP,
            closure_cap: DEFAULT_CLOSURE_CAP,
            state_cap: DEFAULT_STATE_CAP,
            d_retries: crate::monoid::DEFAULT_D_RETRIES,
            subsets_per_size: 5_000,
            malcev_class: 3,
            malcev_len: 3,
            malcev_comparisons: 5_000,
            malcev_node_cap: 20_000,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "outcome")]
pub enum NcOutcome {
    Satisfied {
        y: Vec<usize>,
        z: Vec<usize>,
        g_a: Perm,
        g_b: Perm,
        a_witness: Vec<usize>,
        b_witness: Vec<usize>,
    },
    NotSatisfied,
    Inconclusive {
        overflowed: Vec<Vec<usize>>,
        skipped_sizes: Vec<usize>,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NcVerdict {
    #[serde(flatten)]
    pub outcome: NcOutcome,
    pub searched_sizes: Vec<usize>,
}

impl NcVerdict {
    pub fn is_satisfied(&self) -> bool {
        matches!(self.outcome, NcOutcome::Satisfied { .. })
    }
}

/// Binomial coefficient, saturating.
pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut c: u128 = 1;
    for i in 0..k {
        c = c * (n - i) as u128 / (i + 1) as u128;
        if c > usize::MAX as u128 {
            return usize::MAX;
        }
    }
    c as usize
}

/// All `k`-subsets of `0..n` in lexicographic order.
pub fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if k > n {
        return out;
    }
    let mut c: Vec<usize> = (0..k).collect();
    loop {
        out.push(c.clone());
        let Some(i) = (0..k).rev().find(|&i| c[i] < n - k + i) else {
            return out;
        };
        c[i] += 1;
        for j in i + 1..k {
            c[j] = c[j - 1] + 1;
        }
    }
}

fn intersect(y: &[usize], z: &[usize]) -> Vec<usize> {
    y.iter().copied().filter(|x| z.contains(x)).collect()
}

/// The `ℒ_u` members of size `i`, plus the subsets whose state could not be computed.
pub fn lu_at_size(m: &Monoid, d: usize, i: usize) -> (Vec<Vec<usize>>, Vec<Vec<usize>>) {
    let mut lu = Vec::new();
    let mut overflowed = Vec::new();
    for y in subsets(m.n(), i) {
        match m.subset_state(&y, d) {
            Ok(st) if st.in_lu => lu.push(y),
            Ok(_) => {}
            Err(_) => overflowed.push(y),
        }
    }
    (lu, overflowed)
}

/// Reachable maps of `⟨W⟩` with each distinct `g_b ∘ g_a⁻¹` and the indices `(a, b)` giving it.
type Quotients = (ReachableLambdas, Vec<(Perm, usize, usize)>);

/// Exact search for subsets `Y ≠ Z` in `ℒ_u` and `a, b ∈ ⟨Y ∩ Z⟩` with `λ'_b λ'_a⁻¹` swapping `Y` and `Z`.
pub fn nc_search(m: &Monoid, d: usize, sizes: &[usize], budgets: &Budgets) -> NcVerdict {
    let mut searched = Vec::new();
    let mut skipped = Vec::new();
    let mut overflowed = Vec::new();
    let mut reach: HashMap<Vec<usize>, Option<Quotients>> = HashMap::new();
    for &i in sizes {
        if binomial(m.n(), i) > budgets.subsets_per_size {
            skipped.push(i);
            continue;
        }
        let (lu, over) = lu_at_size(m, d, i);
        let complete = over.is_empty();
        overflowed.extend(over);
        for (p, y) in lu.iter().enumerate() {
            for z in &lu[p + 1..] {
                let w = intersect(y, z);
                // Each h = g_b ∘ g_a⁻¹ once, with the first (g_b, g_a) producing it.
                let entry = reach.entry(w.clone()).or_insert_with(|| {
                    reachable_lambdas(m, &w, budgets.state_cap).ok().map(|r| {
                        let mut hs = Vec::new();
                        let mut seen = HashSet::new();
                        for (b, gb) in r.perms.iter().enumerate() {
                            for (a, ga) in r.perms.iter().enumerate() {
                                let h = gb.compose(&ga.inverse());
                                if seen.insert(h.clone()) {
                                    hs.push((h, a, b));
                                }
                            }
                        }
                        (r, hs)
                    })
                });
                let Some((r, hs)) = entry else {
                    overflowed.push(w);
                    continue;
                };
                if let Some(&(_, a, b)) = hs.iter().find(|(h, _, _)| h.image_of(y) == *z && h.image_of(z) == *y) {
                    searched.push(i);
                    return NcVerdict {
                        outcome: NcOutcome::Satisfied {
                            y: y.clone(),
                            z: z.clone(),
                            g_a: r.perms[a].clone(),
                            g_b: r.perms[b].clone(),
                            a_witness: r.witness_paths[a].clone(),
                            b_witness: r.witness_paths[b].clone(),
                        },
                        searched_sizes: searched,
                    };
                }
            }
        }
        if complete {
            searched.push(i);
        }
    }
    let outcome = if overflowed.is_empty() && skipped.is_empty() {
        NcOutcome::NotSatisfied
    } else {
        NcOutcome::Inconclusive { overflowed, skipped_sizes: skipped }
    };
    NcVerdict { outcome, searched_sizes: searched }
}

/// Checks a claimed NC certificate directly, without enumerating subsets.
pub fn nc_verify_witness(
    m: &Monoid,
    d: usize,
    y: &[usize],
    z: &[usize],
    a: &[usize],
    b: &[usize],
) -> Result<bool, NilpotencyError> {
    let w = intersect(y, z);
    if let Some(&letter) = a.iter().chain(b).find(|x| !w.contains(x)) {
        return Err(NilpotencyError::LetterOutsideIntersection { letter });
    }
    let (mut ys, mut zs) = (y.to_vec(), z.to_vec());
    ys.sort_unstable();
    zs.sort_unstable();
    if ys == zs || ys.len() != zs.len() {
        return Ok(false);
    }
    if !m.subset_state(&ys, d)?.in_lu || !m.subset_state(&zs, d)?.in_lu {
        return Ok(false);
    }
    let h = m.lambda_prime_a(b).compose(&m.lambda_prime_a(a).inverse());
    Ok(h.image_of(&ys) == zs && h.image_of(&zs) == ys)
}

/// Result of decomposing `γ = στ` for the Lyubashenko solution `r(x, y) = (σ(y), τ(x))`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LyubashenkoCertificate {
    pub holds: bool,
    /// Cycles of `γ`, fixed points included, ordered by least member and starting there.
    pub cycles: Vec<Vec<usize>>,
    /// `σ|_{X_i} = c_i^{k_i}` when the criterion holds.
    pub exponents: Option<Vec<usize>>,
}

/// `M` is nilpotent iff `σ = ∏ c_i^{k_i}` and `τ = ∏ c_i^{1−k_i}` over the cycles `c_i` of `στ`.
pub fn lyubashenko_criterion(sigma: &Perm, tau: &Perm) -> Result<LyubashenkoCertificate, SolutionError> {
    if sigma.degree() != tau.degree() || sigma.compose(tau) != tau.compose(sigma) {
        return Err(SolutionError::NonCommuting { sigma: sigma.clone(), tau: tau.clone() });
    }
    let gamma = sigma.compose(tau);
    let cycles = gamma.cycles();
    let mut exponents = Vec::new();
    for c in &cycles {
        let l = c.len();
        let pos = |x: usize| c.iter().position(|&v| v == x);
        // σ|_{X_i} is a power c^k iff σ maps c[0] to c[k] and commutes with the rotation, which it does
        // on the whole cycle once σ(c[j]) = c[j + k] for every j.
        let k = match pos(sigma.apply(c[0])) {
            Some(k) => k,
            None => return Ok(LyubashenkoCertificate { holds: false, cycles, exponents: None }),
        };
        if (0..l).any(|j| sigma.apply(c[j]) != c[(j + k) % l]) {
            return Ok(LyubashenkoCertificate { holds: false, cycles, exponents: None });
        }
        let t = (1 + l - k % l.max(1)) % l.max(1);
        debug_assert!((0..l).all(|j| tau.apply(c[j]) == c[(j + t) % l]));
        exponents.push(k);
    }
    Ok(LyubashenkoCertificate { holds: true, cycles, exponents: Some(exponents) })
}

/// Bound on the Malcev class of `M(X, ◁)` from the class `c` of `𝒢(X, ◁)`: `c + 2`, or `c + 1` for quandles.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RackBound {
    pub group_order: usize,
    pub group_class: Nilpotency,
    pub quandle: bool,
    pub bound: Option<usize>,
}

pub fn rack_nilpotency_bound(r: &Rack, closure_cap: usize) -> Result<RackBound, crate::perm::ClosureCapExceeded> {
    let g = r.group(closure_cap)?;
    let class = g.nilpotency_class();
    let bound = class.class().map(|c| if r.is_quandle() { c + 1 } else { c + 2 });
    Ok(RackBound { group_order: g.order(), group_class: class, quandle: r.is_quandle(), bound })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "outcome")]
pub enum FalsifierOutcome {
    /// No violated identity among the substitutions tried; `exhausted` is false when the comparison
    /// budget ran out first.
    NoneFound { class: usize, len: usize, checked: usize, undecided: usize, exhausted: bool },
    Counterexample { class: usize, len: usize, x: Vec<usize>, y: Vec<usize>, z: Vec<Vec<usize>> },
}

impl FalsifierOutcome {
    pub fn is_counterexample(&self) -> bool {
        matches!(self, FalsifierOutcome::Counterexample { .. })
    }
}

/// Distinct elements of `M` represented by words of length `1..=len`, shortest representative first.
pub fn m_elements(m: &Monoid, len: usize) -> Vec<Vec<usize>> {
    let n = m.n();
    let mut out = Vec::new();
    let mut keys = HashSet::new();
    let mut layer: Vec<Vec<usize>> = vec![vec![]];
    for _ in 0..len {
        layer = layer.iter().flat_map(|w| (0..n).map(move |x| [w.as_slice(), &[x]].concat())).collect();
        for w in &layer {
            let a = m.pi_forward(w);
            let key = m.normalize(&a).map(|c| c.canon.clone()).unwrap_or(a);
            if keys.insert(key) {
                out.push(w.clone());
            }
        }
    }
    out
}

struct Falsifier<'a> {
    m: &'a Monoid,
    zs: Vec<Vec<usize>>,
    class: usize,
    budget: usize,
    checked: usize,
    undecided: usize,
}

enum Step {
    Continue,
    Found(Vec<Vec<usize>>),
    Stop,
}

impl Falsifier<'_> {
    /// Explores `z_{k+1}, …` below the words `x_k`, `y_k`; subtrees whose words are already equal are pruned.
    fn descend(&mut self, xk: &[usize], yk: &[usize], zpre: &mut Vec<Vec<usize>>) -> Step {
        for zi in 0..self.zs.len() {
            if self.checked >= self.budget {
                return Step::Stop;
            }
            let z = self.zs[zi].clone();
            let x1 = [xk, &z, yk].concat();
            let y1 = [yk, &z, xk].concat();
            self.checked += 1;
            let eq = self.m.m_equal(&x1, &y1);
            zpre.push(z);
            let step = match eq {
                Ok(true) => Step::Continue,
                Ok(false) if zpre.len() == self.class => Step::Found(zpre.clone()),
                Err(_) if zpre.len() == self.class => {
                    self.undecided += 1;
                    Step::Continue
                }
                _ => self.descend(&x1, &y1, zpre),
            };
            zpre.pop();
            if !matches!(step, Step::Continue) {
                return step;
            }
        }
        Step::Continue
    }
}

/// Looks for `x, y, z₁, …, z_cls` with `x_cls ≠ y_cls` in `M`, where `x_{k+1} = x_k z_{k+1} y_k`,
/// `y_{k+1} = y_k z_{k+1} x_k`.
///
/// `x` and `y` range over distinct elements of length at most `len`, the `z_k` also over the identity.
pub fn malcev_falsify(s: &Solution, cls: usize, len: usize, budgets: &Budgets) -> FalsifierOutcome {
    let m = Monoid::with_cap(s, budgets.malcev_node_cap);
    let elems = m_elements(&m, len);
    let mut zs = vec![vec![]];
    zs.extend(elems.iter().cloned());
    let mut f = Falsifier { m: &m, zs, class: cls, budget: budgets.malcev_comparisons, checked: 0, undecided: 0 };
    let mut exhausted = true;
    'pairs: for (i, x) in elems.iter().enumerate() {
        for y in &elems[i + 1..] {
            match f.descend(x, y, &mut Vec::new()) {
                Step::Continue => {}
                Step::Found(z) => {
                    return FalsifierOutcome::Counterexample { class: cls, len, x: x.clone(), y: y.clone(), z };
                }
                Step::Stop => {
                    exhausted = false;
                    break 'pairs;
                }
            }
        }
    }
    FalsifierOutcome::NoneFound { class: cls, len, checked: f.checked, undecided: f.undecided, exhausted }
}

/// One `~`-class of `ℒ_u` at a level, i.e. a uniform component of the given degree.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Component {
    pub members: Vec<Vec<usize>>,
    pub degree: usize,
    /// `a_Y ∈ A_{YY}` for each member `Y`.
    pub diagonal_witnesses: Vec<Vec<usize>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LevelComponents {
    pub level: usize,
    pub lu: Vec<Vec<usize>>,
    pub components: Vec<Component>,
    pub partition: SimPartition,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct UniformReport {
    pub levels: Vec<LevelComponents>,
    pub skipped_levels: Vec<usize>,
    pub overflowed: Vec<Vec<usize>>,
}

impl UniformReport {
    pub fn degrees(&self) -> Vec<usize> {
        self.levels.iter().flat_map(|l| l.components.iter().map(|c| c.degree)).collect()
    }
}

pub fn uniform_components(m: &Monoid, d: usize, budgets: &Budgets) -> UniformReport {
    let mut levels = Vec::new();
    let mut skipped_levels = Vec::new();
    let mut overflowed = Vec::new();
    for i in 1..=m.n() {
        if binomial(m.n(), i) > budgets.subsets_per_size {
            skipped_levels.push(i);
            continue;
        }
        let (lu, over) = lu_at_size(m, d, i);
        overflowed.extend(over);
        if lu.is_empty() {
            continue;
        }
        let partition = m.sim_classes(&lu, d, budgets.state_cap);
        let components = partition
            .classes
            .iter()
            .map(|c| Component {
                members: c.clone(),
                degree: c.len(),
                diagonal_witnesses: c.iter().map(|y| Monoid::a_y(y, d)).collect(),
            })
            .collect();
        levels.push(LevelComponents { level: i, lu, components, partition });
    }
    UniformReport { levels, skipped_levels, overflowed }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum Evidence {
    NcSatisfied,
    NcNotSatisfied,
    NcInconclusive,
    NcNotRun,
    LambdaGroupNotNilpotent,
    LambdaGroupNilpotent { class: usize },
    LambdaGroupTooLarge,
    LyubashenkoCriterionHolds,
    LyubashenkoCriterionFails,
    RackBound { bound: usize },
    FalsifierCounterexample { class: usize },
    FalsifierNoneFound { class: usize, len: usize, exhausted: bool },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict")]
pub enum Verdict {
    NotNilpotent { reasons: Vec<Evidence> },
    NilpotentEvidence { criteria: Vec<Evidence> },
    Undetermined { evidence: Vec<Evidence> },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NilpotencyReport {
    pub d: DValue,
    pub nc: Option<NcVerdict>,
    pub lyubashenko: Option<LyubashenkoCertificate>,
    pub rack_bound: Option<RackBound>,
    /// `None` when the closure cap was exceeded.
    pub lambda_group: Option<Nilpotency>,
    pub malcev_falsifier: Option<FalsifierOutcome>,
    pub verdict: Verdict,
}

/// Runs every test that applies and combines them.
///
/// `NotNilpotent` needs a sound obstruction: NC satisfied, a non-nilpotent `⟨λ_x⟩`, or a failed
/// Lyubashenko criterion. `NilpotentEvidence` needs a sufficient criterion. A falsifier counterexample
/// only bounds the class from below and is reported as evidence.
pub fn nilpotency_report(m: &Monoid, budgets: &Budgets) -> NilpotencyReport {
    let s = m.solution();
    let d = DValue::from(m.compute_d(budgets.d_retries));
    let nc = d.get().map(|d| nc_search(m, d, &(1..=s.n()).collect::<Vec<_>>(), budgets));
    let lambda_group = s.lambda_group(budgets.closure_cap).ok().map(|g| g.nilpotency_class());
    let lyubashenko = s.lyubashenko_shape().map(|(sg, t)| lyubashenko_criterion(&sg, &t).expect("commuting"));
    let rack_bound = Rack::from_solution(s).ok().and_then(|r| rack_nilpotency_bound(&r, budgets.closure_cap).ok());

    let mut against = Vec::new();
    let mut evidence = Vec::new();
    match nc.as_ref().map(|v| &v.outcome) {
        Some(NcOutcome::Satisfied { .. }) => against.push(Evidence::NcSatisfied),
        Some(NcOutcome::NotSatisfied) => evidence.push(Evidence::NcNotSatisfied),
        Some(NcOutcome::Inconclusive { .. }) => evidence.push(Evidence::NcInconclusive),
        None => evidence.push(Evidence::NcNotRun),
    }
    match lambda_group {
        Some(Nilpotency::NotNilpotent) => against.push(Evidence::LambdaGroupNotNilpotent),
        Some(Nilpotency::Class(class)) => evidence.push(Evidence::LambdaGroupNilpotent { class }),
        None => evidence.push(Evidence::LambdaGroupTooLarge),
    }
    let mut sufficient = Vec::new();
    match &lyubashenko {
        Some(c) if c.holds => sufficient.push(Evidence::LyubashenkoCriterionHolds),
        Some(_) => against.push(Evidence::LyubashenkoCriterionFails),
        None => {}
    }
    if let Some(bound) = rack_bound.as_ref().and_then(|r| r.bound) {
        sufficient.push(Evidence::RackBound { bound });
    }
    let malcev_falsifier = if against.is_empty() {
        Some(malcev_falsify(s, budgets.malcev_class, budgets.malcev_len, budgets))
    } else {
        None
    };
    match &malcev_falsifier {
        Some(FalsifierOutcome::Counterexample { class, .. }) => {
            evidence.push(Evidence::FalsifierCounterexample { class: *class })
        }
        Some(FalsifierOutcome::NoneFound { class, len, exhausted, .. }) => {
            evidence.push(Evidence::FalsifierNoneFound { class: *class, len: *len, exhausted: *exhausted })
        }
        None => {}
    }
    let verdict = if !against.is_empty() {
        Verdict::NotNilpotent { reasons: against }
    } else if !sufficient.is_empty() {
        Verdict::NilpotentEvidence { criteria: sufficient }
    } else {
        Verdict::Undetermined { evidence }
    };
    NilpotencyReport { d, nc, lyubashenko, rack_bound, lambda_group, malcev_falsifier, verdict }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn subsets_and_binomials() {
        assert_eq!(subsets(4, 2).len(), 6);
        assert_eq!(subsets(3, 0), vec![Vec::<usize>::new()]);
        assert_eq!(subsets(2, 3), Vec::<Vec<usize>>::new());
        assert_eq!(binomial(64, 2), 2016);
        assert_eq!(binomial(4, 5), 0);
    }

    #[test]
    fn reachable_examples() {
        let m = Monoid::new(&fixtures::nc_example());
        let r = reachable_lambdas(&m, &[], 10).unwrap();
        assert_eq!(r.perms, vec![Perm::identity(4)]);
        let r = reachable_lambdas(&m, &[0], 10).unwrap();
        assert_eq!(r.perms, vec![Perm::identity(4), Perm::from_cycles(4, &[&[2, 3]])]);
        assert_eq!(r.witness_paths, vec![vec![], vec![0]]);
        for (p, w) in r.perms.iter().zip(&r.witness_paths) {
            assert_eq!(m.lambda_prime_a(w), *p);
        }
    }

    #[test]
    fn nc_example_is_satisfied() {
        let m = Monoid::new(&fixtures::nc_example());
        let d = m.compute_d(6).unwrap();
        let v = nc_search(&m, d, &[1, 2, 3, 4], &Budgets::default());
        assert_eq!(
            v.outcome,
            NcOutcome::Satisfied {
                y: vec![0, 2],
                z: vec![0, 3],
                g_a: Perm::from_cycles(4, &[&[2, 3]]),
                g_b: Perm::identity(4),
                a_witness: vec![0],
                b_witness: vec![],
            }
        );
        assert!(nc_verify_witness(&m, d, &[0, 2], &[0, 3], &[0], &[0, 0]).unwrap());
        assert!(!nc_verify_witness(&m, d, &[0, 2], &[0, 2], &[0], &[0, 0]).unwrap());
        assert_eq!(
            nc_verify_witness(&m, d, &[0, 2], &[0, 3], &[2], &[]),
            Err(NilpotencyError::LetterOutsideIntersection { letter: 2 })
        );
    }

    #[test]
    fn lyubashenko_examples() {
        let id = Perm::identity(3);
        assert!(lyubashenko_criterion(&id, &id).unwrap().holds);
        let c = lyubashenko_criterion(&Perm::from_cycles(4, &[&[0, 1]]), &Perm::from_cycles(4, &[&[2, 3]])).unwrap();
        assert!(c.holds);
        assert_eq!(c.cycles, vec![vec![0, 1], vec![2, 3]]);
        assert_eq!(c.exponents, Some(vec![1, 0]));
        let sigma = Perm::from_cycles(5, &[&[0, 1, 2]]);
        let tau = Perm::from_cycles(5, &[&[0, 2, 1], &[3, 4]]);
        assert!(!lyubashenko_criterion(&sigma, &tau).unwrap().holds);
        assert!(lyubashenko_criterion(&Perm::from_cycles(3, &[&[0, 1]]), &Perm::from_cycles(3, &[&[1, 2]])).is_err());
    }

    #[test]
    fn rack_bounds() {
        let trivial = Rack::new((0..3).map(|x| vec![x; 3]).collect()).unwrap();
        assert_eq!(rack_nilpotency_bound(&trivial, 100).unwrap().bound, Some(1));
        let mp = Rack::from_solution(&fixtures::mpl2()).unwrap();
        let b = rack_nilpotency_bound(&mp, 100).unwrap();
        assert_eq!((b.group_order, b.group_class, b.quandle, b.bound), (4, Nilpotency::Class(1), true, Some(2)));
        let d3 = Rack::new((0..3).map(|x| (0..3).map(|y| (2 * y + 3 - x) % 3).collect()).collect()).unwrap();
        assert_eq!(rack_nilpotency_bound(&d3, 100).unwrap().bound, None);
    }

    #[test]
    fn falsifier_on_trivial_and_lyubashenko() {
        let b = Budgets::default();
        assert!(!malcev_falsify(&Solution::trivial(2), 1, 2, &b).is_counterexample());
        match malcev_falsify(&fixtures::lyubashenko(), 2, 2, &b) {
            FalsifierOutcome::NoneFound { exhausted, undecided, .. } => assert!(exhausted && undecided == 0),
            other => panic!("{other:?}"),
        }
        assert_eq!(m_elements(&Monoid::new(&fixtures::lyubashenko()), 2).len(), 8);
    }

    #[test]
    fn falsifier_finds_noncommutativity() {
        // In the structure monoid of z3 the class-1 identity x z y = y z x fails already for letters.
        let out = malcev_falsify(&fixtures::z3(), 1, 1, &Budgets::default());
        assert!(out.is_counterexample(), "{out:?}");
    }

    #[test]
    fn uniform_components_of_z3_and_z4() {
        for (s, pair) in [(fixtures::z3(), vec![vec![1], vec![2]]), (fixtures::z4(), vec![vec![1], vec![3]])] {
            let m = Monoid::new(&s);
            let d = m.compute_d(6).unwrap();
            let u = uniform_components(&m, d, &Budgets::default());
            let big: Vec<_> = u.levels.iter().flat_map(|l| &l.components).filter(|c| c.degree > 1).collect();
            assert_eq!(big.len(), 1);
            assert_eq!(big[0].members, pair);
            assert_eq!(u.levels.iter().find(|l| l.level == 1).unwrap().components.iter().filter(|c| c.degree == 2).count(), 1);
        }
    }

    #[test]
    fn reports() {
        let b = Budgets::default();
        let r = nilpotency_report(&Monoid::new(&fixtures::nc_example()), &b);
        // ⟨λ_x⟩ is the symmetric group on {1, 2, 3}, so the λ-group shadow fires as well.
        assert_eq!(
            r.verdict,
            Verdict::NotNilpotent { reasons: vec![Evidence::NcSatisfied, Evidence::LambdaGroupNotNilpotent] }
        );
        let r = nilpotency_report(&Monoid::new(&fixtures::lyubashenko()), &b);
        assert!(matches!(r.verdict, Verdict::NilpotentEvidence { .. }), "{:?}", r.verdict);
    }
}
