//! Word calculus for the structure monoid `M(X, r)` and the derived monoid `A(X, r)`.
//!
//! `A` is presented by `x + λ_x(y) = λ_x(y) + λ_{λ_x(y)}(ρ_y(x))`, equivalently `x + u = u + σ_u(x)`.
//! The relations preserve length, so every element is a finite class of words. `M` is handled through
//! the bijective 1-cocycle `π: M → A`.

use std::cmp::Reverse;
use std::collections::{BinaryHeap, HashMap, HashSet, VecDeque};
use std::sync::{Arc, RwLock};

use serde::{Deserialize, Serialize};

use crate::perm::{Perm, PermGroup};
use crate::solution::Solution;

pub const DEFAULT_NODE_CAP: usize = 1_000_000;
pub const DEFAULT_D_RETRIES: u32 = 6;

/// `a_Y` classes are enumerated only below this size bound; above it `ℒ_u` is decided by invariance.
const SUBSET_CLASS_LIMIT: f64 = 65_536.0;
/// Classes larger than this are not kept in the memo under every member word.
const MEMO_ALL_MEMBERS: usize = 10_000;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error, Serialize, Deserialize)]
#[serde(tag = "error")]
pub enum MonoidError {
    #[error("equivalence class exceeded {cap} words")]
    ClassOverflow { cap: usize },
    #[error("no valid d found after {retry_cap} doublings")]
    NoValidD { retry_cap: u32 },
    #[error("letter {letter} is not a generator of a monoid on {n} generators")]
    LetterOutOfRange { letter: usize, n: usize },
}

/// Outcome of [`Monoid::compute_d`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "outcome")]
pub enum DValue {
    Valid { d: usize },
    Failed { error: MonoidError },
}

impl DValue {
    pub fn get(&self) -> Option<usize> {
        match self {
            DValue::Valid { d } => Some(*d),
            DValue::Failed { .. } => None,
        }
    }
}

impl From<Result<usize, MonoidError>> for DValue {
    fn from(r: Result<usize, MonoidError>) -> Self {
        match r {
            Ok(d) => DValue::Valid { d },
            Err(error) => DValue::Failed { error },
        }
    }
}

/// The full equivalence class of a word in `A`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NormalClass {
    /// All member words, sorted.
    pub words: Vec<Vec<usize>>,
    /// Lexicographically least member.
    pub canon: Vec<usize>,
    /// Generators that occur as a first letter of some member, sorted.
    pub divisors: Vec<usize>,
    pub level: usize,
}

/// The element `a_Y` for a generator subset `Y` and its membership in `ℒ_u`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubsetState {
    pub y: Vec<usize>,
    pub d: usize,
    pub a_y: Vec<usize>,
    /// The class of `a_Y`, when it was small enough to enumerate.
    pub divisors: Option<Vec<usize>>,
    pub in_lu: bool,
    /// `"class"` when decided from the divisors of `a_Y`, `"invariance"` when decided by whether the
    /// derived solution maps `Y²` into itself.
    pub decided_by: String,
}

/// Decision procedures for one solution, with a shared memo of computed classes.
pub struct Monoid {
    sol: Solution,
    n: usize,
    lam: Vec<Perm>,
    lam_inv: Vec<Perm>,
    sigma: Vec<Perm>,
    orbit_of: Vec<usize>,
    /// `(x, u) ↦ (u, σ_u(x))` on pair codes `x·n + u`.
    fwd: Vec<u32>,
    bwd: Vec<u32>,
    node_cap: usize,
    memo: RwLock<HashMap<Vec<u16>, Arc<NormalClass>>>,
}

impl std::fmt::Debug for Monoid {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Monoid").field("n", &self.n).field("node_cap", &self.node_cap).finish()
    }
}

/// Invariants of an element of `A` that are cheap to compute from any representative.
#[derive(Debug, Clone, PartialEq, Eq)]
struct Invariants {
    orbits: Vec<usize>,
    lam_prime: Perm,
    sigma_product: Perm,
}

impl Monoid {
    pub fn new(sol: &Solution) -> Self {
        Self::with_cap(sol, DEFAULT_NODE_CAP)
    }

    pub fn with_cap(sol: &Solution, node_cap: usize) -> Self {
        let n = sol.n();
        assert!(n <= u16::MAX as usize, "too many generators");
        let lam: Vec<Perm> = (0..n).map(|x| sol.lambda_perm(x)).collect();
        let lam_inv = lam.iter().map(Perm::inverse).collect();
        let sigma: Vec<Perm> = sol.sigma_table().into_iter().map(Perm).collect();
        let mut fwd = vec![0u32; n * n];
        let mut bwd = vec![0u32; n * n];
        for x in 0..n {
            for u in 0..n {
                let (a, b) = (x * n + u, u * n + sigma[u].apply(x));
                fwd[a] = b as u32;
                bwd[b] = a as u32;
            }
        }
        let orbit_of = {
            let mut orbit_of = vec![usize::MAX; n];
            let mut next = 0;
            for s in 0..n {
                if orbit_of[s] != usize::MAX {
                    continue;
                }
                let mut stack = vec![s];
                orbit_of[s] = next;
                while let Some(x) = stack.pop() {
                    for p in &sigma {
                        let y = p.apply(x);
                        if orbit_of[y] == usize::MAX {
                            orbit_of[y] = next;
                            stack.push(y);
                        }
                    }
                }
                next += 1;
            }
            orbit_of
        };
        Monoid {
            sol: sol.clone(),
            n,
            lam,
            lam_inv,
            sigma,
            orbit_of,
            fwd,
            bwd,
            node_cap,
            memo: RwLock::new(HashMap::new()),
        }
    }

    pub fn solution(&self) -> &Solution {
        &self.sol
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn node_cap(&self) -> usize {
        self.node_cap
    }

    pub fn lambda(&self, x: usize) -> &Perm {
        &self.lam[x]
    }

    pub fn lambda_inv(&self, x: usize) -> &Perm {
        &self.lam_inv[x]
    }

    fn check(&self, w: &[usize]) -> Result<(), MonoidError> {
        match w.iter().find(|&&x| x >= self.n) {
            Some(&letter) => Err(MonoidError::LetterOutOfRange { letter, n: self.n }),
            None => Ok(()),
        }
    }

    fn neighbours(&self, w: &[u16], mut visit: impl FnMut(Vec<u16>) -> bool) -> bool {
        let n = self.n;
        for i in 0..w.len().saturating_sub(1) {
            let p = w[i] as usize * n + w[i + 1] as usize;
            for q in [self.fwd[p] as usize, self.bwd[p] as usize] {
                if q != p {
                    let mut nb = w.to_vec();
                    nb[i] = (q / n) as u16;
                    nb[i + 1] = (q % n) as u16;
                    if !visit(nb) {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// The full class of `w`, by breadth-first closure under the relations in both directions.
    pub fn normalize(&self, w: &[usize]) -> Result<Arc<NormalClass>, MonoidError> {
        self.check(w)?;
        let key: Vec<u16> = w.iter().map(|&x| x as u16).collect();
        if let Some(c) = self.memo.read().unwrap().get(&key) {
            return Ok(Arc::clone(c));
        }
        let mut seen: HashSet<Vec<u16>> = HashSet::from([key.clone()]);
        let mut queue = VecDeque::from([key.clone()]);
        let mut overflow = false;
        while let Some(cur) = queue.pop_front() {
            let complete = self.neighbours(&cur, |nb| {
                if seen.contains(&nb) {
                    return true;
                }
                if seen.len() >= self.node_cap {
                    return false;
                }
                seen.insert(nb.clone());
                queue.push_back(nb);
                true
            });
            if !complete {
                overflow = true;
                break;
            }
        }
        if overflow {
            return Err(MonoidError::ClassOverflow { cap: self.node_cap });
        }
        let mut words: Vec<Vec<u16>> = seen.into_iter().collect();
        words.sort_unstable();
        let mut divisors: Vec<usize> = words.iter().filter_map(|w| w.first().map(|&x| x as usize)).collect();
        divisors.sort_unstable();
        divisors.dedup();
        let class = Arc::new(NormalClass {
            canon: words[0].iter().map(|&x| x as usize).collect(),
            level: divisors.len(),
            divisors,
            words: words.iter().map(|w| w.iter().map(|&x| x as usize).collect()).collect(),
        });
        let mut memo = self.memo.write().unwrap();
        if words.len() <= MEMO_ALL_MEMBERS {
            for w in words {
                memo.entry(w).or_insert_with(|| Arc::clone(&class));
            }
        } else {
            memo.entry(key).or_insert_with(|| Arc::clone(&class));
        }
        Ok(class)
    }

    /// `λ'_m = λ_{x₁} ∘ ⋯ ∘ λ_{x_k}` for an `M`-word `m`.
    pub fn lambda_prime(&self, m: &[usize]) -> Perm {
        let mut g = Perm::identity(self.n);
        for &x in m {
            g = g.compose(&self.lam[x]);
        }
        g
    }

    /// `λ'_a = λ'_{π⁻¹(a)}` for an `A`-word `a`.
    pub fn lambda_prime_a(&self, a: &[usize]) -> Perm {
        self.lambda_prime(&self.pi_inverse(a))
    }

    /// `π(x₁ ∘ ⋯ ∘ x_k)`: letter `i` is `λ'_{x₁⋯x_{i−1}}(x_i)`.
    pub fn pi_forward(&self, m: &[usize]) -> Vec<usize> {
        let mut g = Perm::identity(self.n);
        m.iter()
            .map(|&x| {
                let a = g.apply(x);
                g = g.compose(&self.lam[x]);
                a
            })
            .collect()
    }

    /// Inverse of [`Monoid::pi_forward`]: peel `a = w + a'` into `w ∘ π⁻¹((λ_w)⁻¹(a'))`.
    pub fn pi_inverse(&self, a: &[usize]) -> Vec<usize> {
        let mut g_inv = Perm::identity(self.n);
        a.iter()
            .map(|&x| {
                let m = g_inv.apply(x);
                g_inv = self.lam_inv[m].compose(&g_inv);
                m
            })
            .collect()
    }

    /// The extended left action `λ_{m₁}(m₂)` on `M`-words.
    pub fn m_lambda(&self, m1: &[usize], m2: &[usize]) -> Vec<usize> {
        let mut w = m2.to_vec();
        for &x in m1.iter().rev() {
            let mut cur = x;
            for y in w.iter_mut() {
                let next = self.sol.rho(*y, cur);
                *y = self.sol.lam(cur, *y);
                cur = next;
            }
        }
        w
    }

    fn invariants(&self, a: &[usize]) -> Invariants {
        let mut orbits: Vec<usize> = a.iter().map(|&x| self.orbit_of[x]).collect();
        orbits.sort_unstable();
        let mut sp = Perm::identity(self.n);
        for &x in a {
            sp = self.sigma[x].compose(&sp);
        }
        Invariants { orbits, lam_prime: self.lambda_prime_a(a), sigma_product: sp }
    }

    /// Equality in `A`.
    ///
    /// Cheap invariants settle most unequal pairs; otherwise a best-first walk through the class of `u`
    /// towards `v` either meets `v` or exhausts the class.
    pub fn a_equal(&self, u: &[usize], v: &[usize]) -> Result<bool, MonoidError> {
        self.check(u)?;
        self.check(v)?;
        if u.len() != v.len() {
            return Ok(false);
        }
        if u == v {
            return Ok(true);
        }
        {
            let memo = self.memo.read().unwrap();
            let ku: Vec<u16> = u.iter().map(|&x| x as u16).collect();
            let kv: Vec<u16> = v.iter().map(|&x| x as u16).collect();
            if let (Some(a), Some(b)) = (memo.get(&ku), memo.get(&kv)) {
                return Ok(a.canon == b.canon);
            }
            for (k, other) in [(&ku, v), (&kv, u)] {
                if let Some(c) = memo.get(k) {
                    return Ok(c.words.binary_search(&other.to_vec()).is_ok());
                }
            }
        }
        if self.invariants(u) != self.invariants(v) {
            return Ok(false);
        }
        self.walk(u, v)
    }

    fn walk(&self, u: &[usize], v: &[usize]) -> Result<bool, MonoidError> {
        let target: Vec<u16> = v.iter().map(|&x| x as u16).collect();
        let score = |w: &[u16]| {
            let lcp = w.iter().zip(&target).take_while(|(a, b)| a == b).count();
            let hits = w.iter().zip(&target).filter(|(a, b)| a == b).count();
            (lcp, hits)
        };
        let start: Vec<u16> = u.iter().map(|&x| x as u16).collect();
        let mut seen: HashSet<Vec<u16>> = HashSet::from([start.clone()]);
        let mut heap = BinaryHeap::new();
        let mut tick = 0u64;
        heap.push((score(&start), Reverse(tick), start));
        while let Some((_, _, w)) = heap.pop() {
            if w == target {
                return Ok(true);
            }
            let mut overflow = false;
            self.neighbours(&w, |nb| {
                if seen.contains(&nb) {
                    return true;
                }
                if seen.len() >= self.node_cap {
                    overflow = true;
                    return false;
                }
                seen.insert(nb.clone());
                tick += 1;
                heap.push((score(&nb), Reverse(tick), nb));
                true
            });
            if overflow {
                return Err(MonoidError::ClassOverflow { cap: self.node_cap });
            }
        }
        Ok(false)
    }

    /// Equality in `M`, via `π`.
    pub fn m_equal(&self, m1: &[usize], m2: &[usize]) -> Result<bool, MonoidError> {
        self.check(m1)?;
        self.check(m2)?;
        self.a_equal(&self.pi_forward(m1), &self.pi_forward(m2))
    }

    fn d_is_valid(&self, d: usize) -> Result<bool, MonoidError> {
        for x in 0..self.n {
            if !self.lambda_prime_a(&vec![x; d]).is_identity() {
                return Ok(false);
            }
        }
        for x in 0..self.n {
            for y in 0..self.n {
                let mut left = vec![x; d];
                left.push(y);
                let mut right = vec![y];
                right.extend(std::iter::repeat_n(x, d));
                if !self.a_equal(&left, &right)? {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// A constant `d ≥ 2` with `λ'_{d·x} = id` and `d·x` central for every generator `x`.
    ///
    /// Starts from the exponent of `⟨λ_x, σ_x⟩` and doubles at most `retry_cap` times.
    pub fn compute_d(&self, retry_cap: u32) -> Result<usize, MonoidError> {
        let gens: Vec<Perm> = self.lam.iter().chain(&self.sigma).cloned().collect();
        let e = PermGroup::generate(self.n, gens, usize::MAX).expect("uncapped").exponent() as usize;
        let mut d = e.max(2);
        for _ in 0..=retry_cap {
            if self.d_is_valid(d)? {
                return Ok(d);
            }
            d *= 2;
        }
        Err(MonoidError::NoValidD { retry_cap })
    }

    /// `a_Y`: each `y ∈ Y` repeated `d` times, ascending.
    pub fn a_y(y: &[usize], d: usize) -> Vec<usize> {
        let mut ys = y.to_vec();
        ys.sort_unstable();
        ys.iter().flat_map(|&x| std::iter::repeat_n(x, d)).collect()
    }

    /// Whether the derived solution maps `Y²` into `Y²`.
    pub fn derived_invariant(&self, y: &[usize]) -> bool {
        let mut inside = vec![false; self.n];
        y.iter().for_each(|&x| inside[x] = true);
        y.iter().all(|&a| y.iter().all(|&b| inside[self.sigma[b].apply(a)]))
    }

    /// Builds `a_Y` and decides `Y ∈ ℒ_u`.
    ///
    /// The class of `a_Y` is enumerated when a crude size bound (`|Y|^{d|Y|}` if the derived solution
    /// restricts to `Y`, `n^{d|Y|}` otherwise) is small. Larger cases use the equivalent
    /// test that the derived solution restricts to `Y`: if it does, every member of the class is a word
    /// over `Y`; if it does not, some `s(x, y)` leaves `Y²` and rewriting `…x y…` inside `a_Y` produces an
    /// outside divisor.
    pub fn subset_state(&self, y: &[usize], d: usize) -> Result<SubsetState, MonoidError> {
        self.check(y)?;
        let mut ys = y.to_vec();
        ys.sort_unstable();
        ys.dedup();
        let a_y = Self::a_y(&ys, d);
        let invariant = self.derived_invariant(&ys);
        let alphabet = if invariant { ys.len() } else { self.n };
        let bound = (alphabet as f64).powi(a_y.len() as i32);
        if bound <= SUBSET_CLASS_LIMIT.min(self.node_cap as f64) {
            let class = self.normalize(&a_y)?;
            let in_lu = class.divisors == ys;
            assert_eq!(in_lu, invariant, "ℒ_u tests disagree on {ys:?}");
            Ok(SubsetState {
                y: ys,
                d,
                a_y,
                divisors: Some(class.divisors.clone()),
                in_lu,
                decided_by: "class".into(),
            })
        } else {
            Ok(SubsetState { y: ys, d, a_y, divisors: None, in_lu: invariant, decided_by: "invariance".into() })
        }
    }

    /// `a ∈ A_{YZ}`: the divisors of `a` are exactly `Y` and `λ'_a(Z) = Y`.
    pub fn component_membership(&self, a: &[usize], y: &[usize], z: &[usize]) -> Result<bool, MonoidError> {
        let mut ys = y.to_vec();
        ys.sort_unstable();
        if a.iter().any(|x| !ys.contains(x)) {
            return Ok(false);
        }
        if self.lambda_prime_a(a).image_of(z) != ys {
            return Ok(false);
        }
        Ok(self.normalize(a)?.divisors == ys)
    }
}

/// A pair `(Y, Z)` under `Y ~ Z ⇔ A_{YZ} ≠ ∅`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status")]
pub enum SimEdge {
    /// `word ∈ A_{YZ}`.
    Witnessed { y: Vec<usize>, z: Vec<usize>, word: Vec<usize> },
    Unknown { y: Vec<usize>, z: Vec<usize> },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SimPartition {
    /// Classes of witnessed edges; pairs with an `Unknown` edge are kept apart but listed in `edges`.
    pub classes: Vec<Vec<Vec<usize>>>,
    /// A spanning forest of witnessed edges for the classes, plus every unknown pair.
    pub edges: Vec<SimEdge>,
    /// Number of pairs, not already joined through other edges, proved inequivalent.
    pub refuted: usize,
}

impl Monoid {
    /// The `~` classes on `lu`, a list of `ℒ_u` members of one size.
    ///
    /// Every `a ∈ A_{YZ}` lies in `⟨Y⟩`, so `A_{YZ} ≠ ∅` iff some realisable `λ'_a`, `a ∈ ⟨Y⟩`, maps `Z`
    /// onto `Y`. Given such a word `p`, either `p` uses every letter of `Y` or `a_Y + p` does, and both
    /// have `λ'` equal to `λ'_p` because `λ'_{a_Y} = id`.
    pub fn sim_classes(&self, lu: &[Vec<usize>], d: usize, state_cap: usize) -> SimPartition {
        let k = lu.len();
        let mut parent: Vec<usize> = (0..k).collect();
        fn find(p: &mut [usize], x: usize) -> usize {
            if p[x] != x {
                let r = find(p, p[x]);
                p[x] = r;
            }
            p[x]
        }
        let mut edges = Vec::new();
        let mut refuted = 0;
        for (i, y) in lu.iter().enumerate() {
            let reach = crate::nilpotency::reachable_lambdas(self, y, state_cap);
            for (j, z) in lu.iter().enumerate().skip(i + 1) {
                let Ok(r) = &reach else {
                    edges.push(SimEdge::Unknown { y: y.clone(), z: z.clone() });
                    continue;
                };
                let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                if a == b {
                    continue;
                }
                let hit = r.perms.iter().position(|g| g.image_of(z) == *y);
                match hit {
                    Some(h) => {
                        parent[a.max(b)] = a.min(b);
                        let p = &r.witness_paths[h];
                        let word = if y.iter().all(|x| p.contains(x)) {
                            p.clone()
                        } else {
                            [Self::a_y(y, d), p.clone()].concat()
                        };
                        edges.push(SimEdge::Witnessed { y: y.clone(), z: z.clone(), word });
                    }
                    None => refuted += 1,
                }
            }
        }
        let mut classes: Vec<Vec<Vec<usize>>> = Vec::new();
        let mut slot = vec![usize::MAX; k];
        for i in 0..k {
            let r = find(&mut parent, i);
            if slot[r] == usize::MAX {
                slot[r] = classes.len();
                classes.push(Vec::new());
            }
            classes[slot[r]].push(lu[i].clone());
        }
        SimPartition { classes, edges, refuted }
    }
}
