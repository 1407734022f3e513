//! Finite skew left braces given by two group tables on `0..N`.

use std::collections::{BTreeSet, HashMap};

use serde::{Deserialize, Serialize};

use crate::perm::{Perm, PermGroup};
use crate::solution::{Solution, SolutionError};

/// A finite group given by its Cayley table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Group {
    pub op: Vec<Vec<usize>>,
    pub neutral: usize,
}

impl Group {
    pub fn size(&self) -> usize {
        self.op.len()
    }

    pub fn cyclic(n: usize) -> Self {
        Group { op: (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect(), neutral: 0 }
    }

    /// `(ℤ/2)^k` with bitwise xor.
    pub fn elementary_abelian_2(k: u32) -> Self {
        let n = 1usize << k;
        Group { op: (0..n).map(|a| (0..n).map(|b| a ^ b).collect()).collect(), neutral: 0 }
    }

    /// `G × H` with `(g, h)` at index `g + |G|·h`.
    pub fn direct_product(g: &Group, h: &Group) -> Self {
        let (m, k) = (g.size(), h.size());
        let op = (0..m * k)
            .map(|x| (0..m * k).map(|y| g.op[x % m][y % m] + m * h.op[x / m][y / m]).collect())
            .collect();
        Group { op, neutral: g.neutral + m * h.neutral }
    }

    /// The group generated by permutations, elements in lexicographic one-line order,
    /// product `p·q = p ∘ q`.
    pub fn from_permutations(degree: usize, generators: Vec<Perm>) -> Self {
        let g = PermGroup::generate(degree, generators, usize::MAX).expect("uncapped");
        let mut el = g.elements().to_vec();
        el.sort();
        Self::from_perm_list(&el)
    }

    fn from_perm_list(el: &[Perm]) -> Self {
        let idx: HashMap<&Perm, usize> = el.iter().enumerate().map(|(i, p)| (p, i)).collect();
        let op = el.iter().map(|p| el.iter().map(|q| idx[&p.compose(q)]).collect()).collect();
        let neutral = el.iter().position(Perm::is_identity).expect("identity present");
        Group { op, neutral }
    }

    /// One representative of every isomorphism type of group of order at most 8.
    pub fn small_groups() -> Vec<(String, Group)> {
        let c = Group::cyclic;
        let mut v: Vec<(String, Group)> = (1..=8).map(|n| (format!("Z{n}"), c(n))).collect();
        v.push(("Z2xZ2".into(), Group::elementary_abelian_2(2)));
        v.push(("Z2xZ4".into(), Group::direct_product(&c(2), &c(4))));
        v.push(("Z2xZ2xZ2".into(), Group::elementary_abelian_2(3)));
        v.push((
            "S3".into(),
            Group::from_permutations(3, vec![Perm::from_cycles(3, &[&[0, 1]]), Perm::from_cycles(3, &[&[0, 1, 2]])]),
        ));
        v.push((
            "D4".into(),
            Group::from_permutations(4, vec![Perm::from_cycles(4, &[&[0, 1, 2, 3]]), Perm::from_cycles(4, &[&[0, 2]])]),
        ));
        // Q8 acting regularly on ±1, ±i, ±j, ±k (points 0..8 as 1, i, j, k, -1, -i, -j, -k).
        let qi = Perm::from_cycles(8, &[&[0, 1, 4, 5], &[2, 3, 6, 7]]);
        let qj = Perm::from_cycles(8, &[&[0, 2, 4, 6], &[1, 7, 5, 3]]);
        v.push(("Q8".into(), Group::from_permutations(8, vec![qi, qj])));
        v
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Operation {
    Add,
    Mul,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum GroupAxiom {
    Associativity,
    Identity,
    Inverse,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error, Serialize, Deserialize)]
#[serde(tag = "error")]
pub enum BraceError {
    #[error("tables are not N×N over 0..N-1: {detail}")]
    Shape { detail: String },
    #[error("{operation:?} is not a group: {axiom:?} fails at {witness:?}")]
    NotAGroup { operation: Operation, axiom: GroupAxiom, witness: Vec<usize> },
    #[error("additive neutral {add} differs from multiplicative neutral {mul}")]
    NeutralMismatch { add: usize, mul: usize },
    #[error("a∘(b+c) = a∘b − a + a∘c fails at {triple:?}")]
    CompatibilityFailure { triple: (usize, usize, usize) },
    #[error("invalid action: {detail}")]
    InvalidAction { detail: String },
}

/// A validated skew left brace `(B, +, ∘)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteSkewBrace {
    add: Vec<Vec<usize>>,
    mul: Vec<Vec<usize>>,
    neutral: usize,
    neg: Vec<usize>,
    mul_inv: Vec<usize>,
}

/// A subset of a brace with its closure and normality flags.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BraceSubset {
    pub members: Vec<usize>,
    pub is_subgroup_add: bool,
    pub is_subgroup_mul: bool,
    pub is_normal_add: bool,
    pub is_normal_mul: bool,
    pub is_lambda_invariant: bool,
    pub is_ideal: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "outcome")]
pub enum SocleSeries {
    /// `ideals[k]` is `Soc_{k+1}(B)`; the last one is `B`.
    Finite { length: usize, ideals: Vec<Vec<usize>> },
    /// The series stalls at `ideals.last()` (or at `{0}` when empty) below `B`.
    NoFiniteSeries { ideals: Vec<Vec<usize>> },
}

impl SocleSeries {
    pub fn length(&self) -> Option<usize> {
        match self {
            SocleSeries::Finite { length, .. } => Some(*length),
            SocleSeries::NoFiniteSeries { .. } => None,
        }
    }
}

fn check_group(t: &[Vec<usize>], operation: Operation) -> Result<(usize, Vec<usize>), BraceError> {
    let n = t.len();
    let not_group = |axiom, witness| BraceError::NotAGroup { operation, axiom, witness };
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                if t[t[a][b]][c] != t[a][t[b][c]] {
                    return Err(not_group(GroupAxiom::Associativity, vec![a, b, c]));
                }
            }
        }
    }
    let e = (0..n)
        .find(|&e| (0..n).all(|a| t[e][a] == a && t[a][e] == a))
        .ok_or_else(|| not_group(GroupAxiom::Identity, vec![]))?;
    let mut inv = vec![0; n];
    for a in 0..n {
        inv[a] = (0..n)
            .find(|&b| t[a][b] == e && t[b][a] == e)
            .ok_or_else(|| not_group(GroupAxiom::Inverse, vec![a]))?;
    }
    Ok((e, inv))
}

impl FiniteSkewBrace {
    pub fn new(add: Vec<Vec<usize>>, mul: Vec<Vec<usize>>) -> Result<Self, BraceError> {
        let n = add.len();
        for (name, t) in [("add", &add), ("mul", &mul)] {
            if t.len() != n || t.iter().any(|r| r.len() != n || r.iter().any(|&v| v >= n)) {
                return Err(BraceError::Shape { detail: format!("{name} is not {n}×{n} over 0..{n}") });
            }
        }
        if n == 0 {
            return Err(BraceError::Shape { detail: "empty carrier".into() });
        }
        let (e_add, neg) = check_group(&add, Operation::Add)?;
        let (e_mul, mul_inv) = check_group(&mul, Operation::Mul)?;
        if e_add != e_mul {
            return Err(BraceError::NeutralMismatch { add: e_add, mul: e_mul });
        }
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    let lhs = mul[a][add[b][c]];
                    let rhs = add[add[mul[a][b]][neg[a]]][mul[a][c]];
                    if lhs != rhs {
                        return Err(BraceError::CompatibilityFailure { triple: (a, b, c) });
                    }
                }
            }
        }
        Ok(FiniteSkewBrace { add, mul, neutral: e_add, neg, mul_inv })
    }

    /// The trivial brace `a ∘ b = a + b` on a group.
    pub fn trivial(g: &Group) -> Self {
        FiniteSkewBrace::new(g.op.clone(), g.op.clone()).expect("a group is a trivial brace")
    }

    pub fn size(&self) -> usize {
        self.add.len()
    }

    pub fn neutral(&self) -> usize {
        self.neutral
    }

    pub fn add_table(&self) -> &[Vec<usize>] {
        &self.add
    }

    pub fn mul_table(&self) -> &[Vec<usize>] {
        &self.mul
    }

    #[inline]
    pub fn add(&self, a: usize, b: usize) -> usize {
        self.add[a][b]
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mul[a][b]
    }

    #[inline]
    pub fn neg(&self, a: usize) -> usize {
        self.neg[a]
    }

    #[inline]
    pub fn mul_inv(&self, a: usize) -> usize {
        self.mul_inv[a]
    }

    /// `λ_a(b) = −a + a∘b`.
    #[inline]
    pub fn lambda(&self, a: usize, b: usize) -> usize {
        self.add[self.neg[a]][self.mul[a][b]]
    }

    /// The associated solution `r(a, b) = (λ_a(b), ρ_b(a))` with
    /// `ρ_b(a) = λ_{λ_a(b)}⁻¹(−λ_a(b) + a + λ_a(b))`.
    pub fn solution(&self) -> Result<Solution, SolutionError> {
        let n = self.size();
        let lam: Vec<Vec<usize>> = (0..n).map(|a| (0..n).map(|b| self.lambda(a, b)).collect()).collect();
        let lam_inv: Vec<Perm> = lam.iter().map(|row| Perm(row.clone()).inverse()).collect();
        let mut rho = vec![vec![0; n]; n];
        for a in 0..n {
            for b in 0..n {
                let l = lam[a][b];
                let conj = self.add[self.add[self.neg[l]][a]][l];
                rho[b][a] = lam_inv[l].apply(conj);
            }
        }
        Solution::new(lam, rho).map_err(|e| SolutionError::InternalValidationFailure { detail: e.to_string() })
    }

    /// `Soc(B) = {a : a∘b = a+b = b+a for all b}`, sorted.
    pub fn socle(&self) -> Vec<usize> {
        let n = self.size();
        (0..n)
            .filter(|&a| (0..n).all(|b| self.mul[a][b] == self.add[a][b] && self.add[a][b] == self.add[b][a]))
            .collect()
    }

    /// Quotient by an ideal on least coset representatives; also returns the projection.
    pub fn quotient(&self, ideal: &[usize]) -> (FiniteSkewBrace, Vec<usize>) {
        let n = self.size();
        let rep: Vec<usize> = (0..n).map(|a| ideal.iter().map(|&i| self.add[a][i]).min().unwrap()).collect();
        let reps: Vec<usize> = rep.iter().copied().collect::<BTreeSet<_>>().into_iter().collect();
        let pos: HashMap<usize, usize> = reps.iter().enumerate().map(|(i, &r)| (r, i)).collect();
        let proj: Vec<usize> = rep.iter().map(|r| pos[r]).collect();
        let table = |t: &Vec<Vec<usize>>| -> Vec<Vec<usize>> {
            reps.iter().map(|&a| reps.iter().map(|&b| proj[t[a][b]]).collect()).collect()
        };
        let q = FiniteSkewBrace::new(table(&self.add), table(&self.mul)).expect("quotient by an ideal is a brace");
        (q, proj)
    }

    /// Iterated socles until the quotient is trivial, or until the socle of a non-trivial quotient is trivial.
    pub fn socle_series(&self) -> SocleSeries {
        let mut cur = self.clone();
        let mut proj: Vec<usize> = (0..self.size()).collect();
        let mut ideals = Vec::new();
        loop {
            if cur.size() == 1 {
                return SocleSeries::Finite { length: ideals.len(), ideals };
            }
            let soc = cur.socle();
            if soc.len() == 1 {
                return SocleSeries::NoFiniteSeries { ideals };
            }
            let mut in_soc = vec![false; cur.size()];
            soc.iter().for_each(|&s| in_soc[s] = true);
            ideals.push((0..self.size()).filter(|&a| in_soc[proj[a]]).collect());
            let (q, p) = cur.quotient(&soc);
            proj = proj.iter().map(|&a| p[a]).collect();
            cur = q;
        }
    }

    /// Additive subgroup generated by `−a − b + a + b`.
    pub fn additive_commutator(&self) -> BraceSubset {
        let n = self.size();
        let mut set: BTreeSet<usize> = BTreeSet::from([self.neutral]);
        for a in 0..n {
            for b in 0..n {
                set.insert(self.add[self.add[self.add[self.neg[a]][self.neg[b]]][a]][b]);
            }
        }
        let mut members: Vec<usize> = set.iter().copied().collect();
        let mut k = 0;
        while k < members.len() {
            for j in 0..=k {
                for (x, y) in [(members[k], members[j]), (members[j], members[k])] {
                    let s = self.add[x][y];
                    if set.insert(s) {
                        members.push(s);
                    }
                }
            }
            k += 1;
        }
        self.subset(members)
    }

    /// Evaluates the closure and normality flags of a subset.
    pub fn subset(&self, mut members: Vec<usize>) -> BraceSubset {
        members.sort_unstable();
        members.dedup();
        let n = self.size();
        let mut inside = vec![false; n];
        members.iter().for_each(|&m| inside[m] = true);
        let all = |f: &dyn Fn(usize, usize) -> bool| members.iter().all(|&a| members.iter().all(|&b| f(a, b)));
        let every = |f: &dyn Fn(usize, usize) -> bool| members.iter().all(|&a| (0..n).all(|b| f(a, b)));
        let is_subgroup_add = inside[self.neutral] && all(&|a, b| inside[self.add[a][self.neg[b]]]);
        let is_subgroup_mul = inside[self.neutral] && all(&|a, b| inside[self.mul[a][self.mul_inv[b]]]);
        let is_normal_add = every(&|a, b| inside[self.add[self.add[self.neg[b]][a]][b]]);
        let is_normal_mul = every(&|a, b| inside[self.mul[self.mul[self.mul_inv[b]][a]][b]]);
        let is_lambda_invariant = every(&|a, b| inside[self.lambda(b, a)]);
        let is_ideal = is_subgroup_add && is_subgroup_mul && is_normal_add && is_normal_mul && is_lambda_invariant;
        BraceSubset {
            members,
            is_subgroup_add,
            is_subgroup_mul,
            is_normal_add,
            is_normal_mul,
            is_lambda_invariant,
            is_ideal,
        }
    }
}

/// `A ⋊_α C` with componentwise `+` and `(a, c) ∘ (a', c') = (a ∘ α_c(a'), c ∘ c')`.
///
/// `alpha[c]` is the automorphism of `A` attached to `c`; `(a, c)` has index `a + |A|·c`.
pub fn semidirect(a: &FiniteSkewBrace, c: &FiniteSkewBrace, alpha: &[Perm]) -> Result<FiniteSkewBrace, BraceError> {
    let (na, nc) = (a.size(), c.size());
    let bad = |detail: String| Err(BraceError::InvalidAction { detail });
    if alpha.len() != nc || alpha.iter().any(|p| p.degree() != na || Perm::from_images(p.0.clone()).is_none()) {
        return bad(format!("need {nc} permutations of degree {na}"));
    }
    for (ci, f) in alpha.iter().enumerate() {
        for x in 0..na {
            for y in 0..na {
                if f.apply(a.add(x, y)) != a.add(f.apply(x), f.apply(y))
                    || f.apply(a.mul(x, y)) != a.mul(f.apply(x), f.apply(y))
                {
                    return bad(format!("alpha[{ci}] is not a brace automorphism at ({x}, {y})"));
                }
            }
        }
    }
    for c1 in 0..nc {
        for c2 in 0..nc {
            if alpha[c.mul(c1, c2)] != alpha[c1].compose(&alpha[c2]) {
                return bad(format!("alpha is not multiplicative at ({c1}, {c2})"));
            }
        }
    }
    let n = na * nc;
    let add = (0..n)
        .map(|x| (0..n).map(|y| a.add(x % na, y % na) + na * c.add(x / na, y / na)).collect())
        .collect();
    let mul = (0..n)
        .map(|x| {
            (0..n)
                .map(|y| a.mul(x % na, alpha[x / na].apply(y % na)) + na * c.mul(x / na, y / na))
                .collect()
        })
        .collect();
    FiniteSkewBrace::new(add, mul)
}

/// Brace automorphisms of `a`, in lexicographic one-line order.
pub fn automorphisms(a: &FiniteSkewBrace) -> Vec<Perm> {
    let n = a.size();
    let mut out = Vec::new();
    let mut img = vec![usize::MAX; n];
    let mut used = vec![false; n];
    fn rec(a: &FiniteSkewBrace, k: usize, img: &mut Vec<usize>, used: &mut Vec<bool>, out: &mut Vec<Perm>) {
        let n = a.size();
        if k == n {
            let ok = (0..n).all(|x| {
                (0..n).all(|y| img[a.add(x, y)] == a.add(img[x], img[y]) && img[a.mul(x, y)] == a.mul(img[x], img[y]))
            });
            if ok {
                out.push(Perm(img.clone()));
            }
            return;
        }
        for v in 0..n {
            if !used[v] && (k != a.neutral() || v == a.neutral()) {
                used[v] = true;
                img[k] = v;
                rec(a, k + 1, img, used, out);
                used[v] = false;
            }
        }
    }
    rec(a, 0, &mut img, &mut used, &mut out);
    out
}

/// `Hol(A) = A ⋊ Aut(A)` where `Aut(A)` carries the trivial brace structure `f + g = f ∘ g`.
pub fn holomorph(a: &FiniteSkewBrace) -> FiniteSkewBrace {
    let auts = automorphisms(a);
    let c = FiniteSkewBrace::trivial(&Group::from_perm_list(&auts));
    semidirect(a, &c, &auts).expect("Aut(A) acts by automorphisms")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn small_groups_have_expected_orders() {
        let sizes: Vec<usize> = Group::small_groups().iter().map(|(_, g)| g.size()).collect();
        assert_eq!(sizes, vec![1, 2, 3, 4, 5, 6, 7, 8, 4, 8, 8, 6, 8, 8]);
        for (_, g) in Group::small_groups() {
            FiniteSkewBrace::trivial(&g);
        }
    }

    #[test]
    fn trivial_brace_z2() {
        let b = FiniteSkewBrace::new(vec![vec![0, 1], vec![1, 0]], vec![vec![0, 1], vec![1, 0]]).unwrap();
        assert_eq!(b.solution().unwrap(), Solution::trivial(2));
        assert_eq!(b.socle_series().length(), Some(1));
    }

    #[test]
    fn corrupted_cell_is_rejected() {
        let g = Group::cyclic(4);
        let mut mul = g.op.clone();
        mul[1][1] = 3;
        assert!(FiniteSkewBrace::new(g.op.clone(), mul).is_err());
    }

    #[test]
    fn neutral_mismatch_detected() {
        let add = vec![vec![0, 1], vec![1, 0]];
        let mul = vec![vec![1, 0], vec![0, 1]];
        assert_eq!(FiniteSkewBrace::new(add, mul).unwrap_err(), BraceError::NeutralMismatch { add: 0, mul: 1 });
    }

    #[test]
    fn rho_formula_matches_multiplicative_identity() {
        // λ_a(b) ∘ ρ_b(a) = a ∘ b pins ρ independently of the closed formula.
        for b in [fixtures::holomorph(), fixtures::brace_semidirect()] {
            let s = b.solution().unwrap();
            for x in 0..b.size() {
                for y in 0..b.size() {
                    let (u, v) = s.r(x, y);
                    assert_eq!(b.mul(u, v), b.mul(x, y));
                }
            }
            // λ_a is an additive automorphism.
            for a in 0..b.size() {
                for x in 0..b.size() {
                    for y in 0..b.size() {
                        assert_eq!(b.lambda(a, b.add(x, y)), b.add(b.lambda(a, x), b.lambda(a, y)));
                    }
                }
            }
        }
    }

    #[test]
    fn holomorph_commutator_is_not_an_ideal() {
        let b = fixtures::holomorph();
        let auts = automorphisms(&FiniteSkewBrace::trivial(&Group::elementary_abelian_2(2)));
        assert_eq!(auts.len(), 6);
        // f(a, b) = (b, a + b) on indices a + 2b.
        let f = Perm(vec![0, 2, 3, 1]);
        let fi = auts.iter().position(|p| *p == f).unwrap();
        let f2i = auts.iter().position(|p| *p == f.compose(&f)).unwrap();
        let com = b.additive_commutator();
        assert_eq!(com.members, vec![0, 4 * fi, 4 * f2i].into_iter().collect::<BTreeSet<_>>().into_iter().collect::<Vec<_>>());
        assert!(!com.is_ideal);
        assert!(!com.is_normal_mul);
        let x = 1; // ((1,0), id)
        let conj = b.mul(b.mul(b.mul_inv(x), 4 * fi), x);
        assert_eq!(conj, 3 + 4 * fi); // ((1,1), f)
        assert!(!com.members.contains(&conj));
    }

    #[test]
    fn semidirect_commutator_trivial_and_socle_is_ideal() {
        let b = fixtures::brace_semidirect();
        let com = b.additive_commutator();
        assert_eq!(com.members, vec![0]);
        assert!(com.is_ideal);
        for br in [fixtures::holomorph(), b] {
            assert!(br.subset(br.socle()).is_ideal);
        }
    }

    #[test]
    fn bad_action_rejected() {
        let a = FiniteSkewBrace::trivial(&Group::elementary_abelian_2(2));
        let c = FiniteSkewBrace::trivial(&Group::cyclic(2));
        let not_hom = vec![Perm(vec![0, 2, 1, 3]), Perm(vec![0, 3, 1, 2])];
        assert!(matches!(semidirect(&a, &c, &not_hom), Err(BraceError::InvalidAction { .. })));
    }
}
