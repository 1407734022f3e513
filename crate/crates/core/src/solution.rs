//! Finite set-theoretic solutions of the Yang–Baxter equation given by λ/ρ tables.

use serde::{Deserialize, Serialize};

use crate::perm::{ClosureCapExceeded, Nilpotency, Perm, PermGroup};

/// A validated solution `r(x, y) = (λ_x(y), ρ_y(x))` on `0..n`.
///
/// `lam[x][y] = λ_x(y)` and `rho[y][x] = ρ_y(x)`; both tables are indexed actor first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Solution {
    n: usize,
    lam: Vec<Vec<usize>>,
    rho: Vec<Vec<usize>>,
    pub name: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error, Serialize, Deserialize)]
#[serde(tag = "error")]
pub enum SolutionError {
    #[error("tables are not n×n over 0..n-1: {detail}")]
    Shape { detail: String },
    #[error("{table}[{row}] is not a permutation")]
    NonDegeneracyFailure { table: String, row: usize },
    #[error("r is not injective: {first:?} and {second:?} both map to the same pair")]
    RNotBijective { first: (usize, usize), second: (usize, usize) },
    #[error("condition ({condition}) fails at (x, y, z) = {triple:?}")]
    YbeConditionFailure { condition: u8, triple: (usize, usize, usize) },
    #[error("internally constructed tables failed validation: {detail}")]
    InternalValidationFailure { detail: String },
    #[error("σ = {sigma:?} and τ = {tau:?} do not commute")]
    NonCommuting { sigma: Perm, tau: Perm },
}

/// Tables of `r⁻¹(x, y) = (λ̂_x(y), ρ̂_y(x))`, with the same indexing as [`Solution`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HatMaps {
    pub lam_hat: Vec<Vec<usize>>,
    pub rho_hat: Vec<Vec<usize>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SolutionStats {
    pub involutive: bool,
    pub square_free: bool,
    pub r_order: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupSummary {
    pub order: usize,
    pub nilpotency: Nilpotency,
}

impl GroupSummary {
    fn of(g: &PermGroup) -> Self {
        GroupSummary { order: g.order(), nilpotency: g.nilpotency_class() }
    }
}

/// Orders and nilpotency classes of the permutation groups attached to a solution.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PermGroupReport {
    pub lambda: GroupSummary,
    pub rho: GroupSummary,
    pub lambda_rho: GroupSummary,
    pub lambda_lambda_hat: GroupSummary,
    pub general: GroupSummary,
    pub sigma: GroupSummary,
}

fn check_shape(n: usize, t: &[Vec<usize>], name: &str) -> Result<(), SolutionError> {
    if t.len() != n {
        return Err(SolutionError::Shape { detail: format!("{name} has {} rows, expected {n}", t.len()) });
    }
    for (i, row) in t.iter().enumerate() {
        if row.len() != n {
            return Err(SolutionError::Shape { detail: format!("{name}[{i}] has length {}", row.len()) });
        }
        if let Some(j) = row.iter().position(|&v| v >= n) {
            return Err(SolutionError::Shape { detail: format!("{name}[{i}][{j}] = {} out of range", row[j]) });
        }
    }
    Ok(())
}

fn is_perm_row(row: &[usize]) -> bool {
    let mut seen = vec![false; row.len()];
    row.iter().all(|&v| !std::mem::replace(&mut seen[v], true))
}

impl Solution {
    /// Validates the tables: non-degeneracy, bijectivity of `r`, then conditions (1)–(3) in order.
    pub fn new(lam: Vec<Vec<usize>>, rho: Vec<Vec<usize>>) -> Result<Self, SolutionError> {
        let n = lam.len();
        check_shape(n, &lam, "lambda")?;
        check_shape(n, &rho, "rho")?;
        for (name, t) in [("lambda", &lam), ("rho", &rho)] {
            if let Some(row) = t.iter().position(|r| !is_perm_row(r)) {
                return Err(SolutionError::NonDegeneracyFailure { table: name.to_string(), row });
            }
        }
        let mut preimage = vec![None; n * n];
        for x in 0..n {
            for y in 0..n {
                let img = lam[x][y] * n + rho[y][x];
                if let Some(prev) = preimage[img] {
                    return Err(SolutionError::RNotBijective { first: prev, second: (x, y) });
                }
                preimage[img] = Some((x, y));
            }
        }
        let s = Solution { n, lam, rho, name: None };
        if let Some((condition, triple)) = s.first_ybe_failure() {
            return Err(SolutionError::YbeConditionFailure { condition, triple });
        }
        Ok(s)
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = Some(name.into());
        self
    }

    fn first_ybe_failure(&self) -> Option<(u8, (usize, usize, usize))> {
        let (l, r, n) = (&self.lam, &self.rho, self.n);
        let triples = || (0..n).flat_map(move |x| (0..n).flat_map(move |y| (0..n).map(move |z| (x, y, z))));
        // (1) λ_x λ_y = λ_{λ_x(y)} λ_{ρ_y(x)}
        if let Some(t) = triples().find(|&(x, y, z)| l[x][l[y][z]] != l[l[x][y]][l[r[y][x]][z]]) {
            return Some((1, t));
        }
        // (2) λ_{ρ_{λ_x(y)}(z)}(ρ_y(x)) = ρ_{λ_{ρ_x(z)}(y)}(λ_z(x))
        if let Some(t) = triples().find(|&(x, y, z)| l[r[l[x][y]][z]][r[y][x]] != r[l[r[x][z]][y]][l[z][x]]) {
            return Some((2, t));
        }
        // (3) ρ_x ρ_y = ρ_{ρ_x(y)} ρ_{λ_y(x)}
        if let Some(t) = triples().find(|&(x, y, z)| r[x][r[y][z]] != r[r[x][y]][r[l[y][x]][z]]) {
            return Some((3, t));
        }
        None
    }

    /// The solution `r(x, y) = (y, x)`.
    pub fn trivial(n: usize) -> Self {
        let id: Vec<Vec<usize>> = (0..n).map(|_| (0..n).collect()).collect();
        Solution { n, lam: id.clone(), rho: id, name: None }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn lam_table(&self) -> &[Vec<usize>] {
        &self.lam
    }

    pub fn rho_table(&self) -> &[Vec<usize>] {
        &self.rho
    }

    #[inline]
    pub fn lam(&self, x: usize, y: usize) -> usize {
        self.lam[x][y]
    }

    #[inline]
    pub fn rho(&self, y: usize, x: usize) -> usize {
        self.rho[y][x]
    }

    #[inline]
    pub fn r(&self, x: usize, y: usize) -> (usize, usize) {
        (self.lam[x][y], self.rho[y][x])
    }

    pub fn lambda_perm(&self, x: usize) -> Perm {
        Perm(self.lam[x].clone())
    }

    pub fn rho_perm(&self, y: usize) -> Perm {
        Perm(self.rho[y].clone())
    }

    /// `σ_y(x) = λ_y(ρ_{λ_x⁻¹(y)}(x))`, the left derived map, as `sigma[y][x]`.
    pub fn sigma_table(&self) -> Vec<Vec<usize>> {
        let n = self.n;
        let lam_inv: Vec<Perm> = (0..n).map(|x| self.lambda_perm(x).inverse()).collect();
        (0..n)
            .map(|y| (0..n).map(|x| self.lam[y][self.rho[lam_inv[x].apply(y)][x]]).collect())
            .collect()
    }

    /// `τ_x(y) = ρ_x(λ_{ρ_y⁻¹(x)}(y))`, the right derived map, as `tau[x][y]`.
    pub fn tau_table(&self) -> Vec<Vec<usize>> {
        let n = self.n;
        let rho_inv: Vec<Perm> = (0..n).map(|y| self.rho_perm(y).inverse()).collect();
        (0..n)
            .map(|x| (0..n).map(|y| self.rho[x][self.lam[rho_inv[y].apply(x)][y]]).collect())
            .collect()
    }

    pub fn invert(&self) -> HatMaps {
        let n = self.n;
        let mut lam_hat = vec![vec![0; n]; n];
        let mut rho_hat = vec![vec![0; n]; n];
        for x in 0..n {
            for y in 0..n {
                let (u, v) = self.r(x, y);
                lam_hat[u][v] = x;
                rho_hat[v][u] = y;
            }
        }
        debug_assert!((0..n).all(|x| (0..n).all(|y| lam_hat[self.lam[y][x]][self.rho[x][y]] == y)));
        HatMaps { lam_hat, rho_hat }
    }

    /// The solution `r⁻¹`.
    pub fn inverse_solution(&self) -> Result<Solution, SolutionError> {
        let h = self.invert();
        Solution::new(h.lam_hat, h.rho_hat)
    }

    /// Order of `r` as a permutation of `X²`.
    pub fn r_order(&self) -> u64 {
        let n = self.n;
        let p = Perm((0..n * n).map(|i| {
            let (u, v) = self.r(i / n, i % n);
            u * n + v
        }).collect());
        p.order()
    }

    pub fn stats(&self) -> SolutionStats {
        let r_order = self.r_order();
        SolutionStats {
            involutive: r_order <= 2,
            square_free: (0..self.n).all(|x| self.r(x, x) == (x, x)),
            r_order,
        }
    }

    /// Left derived `s(x, y) = (y, σ_y(x))` or right derived `s'(x, y) = (τ_x(y), x)`.
    pub fn derived(&self, side: Side) -> Result<Solution, SolutionError> {
        let n = self.n;
        let id: Vec<Vec<usize>> = (0..n).map(|_| (0..n).collect()).collect();
        let (lam, rho) = match side {
            Side::Left => (id, self.sigma_table()),
            Side::Right => (self.tau_table(), id),
        };
        Solution::new(lam, rho).map_err(|e| SolutionError::InternalValidationFailure { detail: e.to_string() })
    }

    /// `r(x, y) = (σ(y), τ(x))` for commuting permutations σ, τ.
    pub fn lyubashenko(sigma: &Perm, tau: &Perm) -> Result<Solution, SolutionError> {
        if sigma.degree() != tau.degree() || sigma.compose(tau) != tau.compose(sigma) {
            return Err(SolutionError::NonCommuting { sigma: sigma.clone(), tau: tau.clone() });
        }
        let n = sigma.degree();
        Solution::new(vec![sigma.0.clone(); n], vec![tau.0.clone(); n])
            .map_err(|e| SolutionError::InternalValidationFailure { detail: e.to_string() })
    }

    /// Whether `λ_x` is the same for all `x` and `ρ_y` is the same for all `y`.
    pub fn lyubashenko_shape(&self) -> Option<(Perm, Perm)> {
        let same = |t: &[Vec<usize>]| t.iter().all(|row| *row == t[0]);
        if self.n > 0 && same(&self.lam) && same(&self.rho) {
            Some((self.lambda_perm(0), self.rho_perm(0)))
        } else {
            None
        }
    }

    /// Whether every `ρ_y` is the identity, i.e. the solution comes from a rack.
    pub fn is_derived_form(&self) -> bool {
        self.rho.iter().all(|row| row.iter().enumerate().all(|(i, &v)| i == v))
    }

    /// Restriction to `subset` (sorted, re-indexed by position) when `r(Y²) ⊆ Y²`.
    pub fn restrict(&self, subset: &[usize]) -> Option<Solution> {
        let mut pos = vec![usize::MAX; self.n];
        for (i, &y) in subset.iter().enumerate() {
            pos[y] = i;
        }
        let k = subset.len();
        let mut lam = vec![vec![0; k]; k];
        let mut rho = vec![vec![0; k]; k];
        for (i, &x) in subset.iter().enumerate() {
            for (j, &y) in subset.iter().enumerate() {
                let (u, v) = self.r(x, y);
                if pos[u] == usize::MAX || pos[v] == usize::MAX {
                    return None;
                }
                lam[i][j] = pos[u];
                rho[j][i] = pos[v];
            }
        }
        Solution::new(lam, rho).ok()
    }

    pub fn lambda_group(&self, cap: usize) -> Result<PermGroup, ClosureCapExceeded> {
        PermGroup::generate_named("lambda", self.n, (0..self.n).map(|x| self.lambda_perm(x)).collect(), cap)
    }

    pub fn sigma_group(&self, cap: usize) -> Result<PermGroup, ClosureCapExceeded> {
        let sigma = self.sigma_table();
        PermGroup::generate_named("sigma", self.n, sigma.into_iter().map(Perm).collect(), cap)
    }

    pub fn perm_group_report(&self, cap: usize) -> Result<PermGroupReport, ClosureCapExceeded> {
        let n = self.n;
        let hat = self.invert();
        let lam: Vec<Perm> = (0..n).map(|x| self.lambda_perm(x)).collect();
        let rho_inv: Vec<Perm> = (0..n).map(|x| self.rho_perm(x).inverse()).collect();
        let lam_hat: Vec<Perm> = hat.lam_hat.iter().cloned().map(Perm).collect();
        let rho_hat_inv: Vec<Perm> = hat.rho_hat.iter().cloned().map(|r| Perm(r).inverse()).collect();
        let group = |name: &str, degree: usize, gens: Vec<Perm>| {
            PermGroup::generate_named(name, degree, gens, cap).map(|g| GroupSummary::of(&g))
        };
        Ok(PermGroupReport {
            lambda: GroupSummary::of(&self.lambda_group(cap)?),
            rho: group("rho", n, (0..n).map(|x| self.rho_perm(x)).collect())?,
            lambda_rho: group(
                "lambda_rho",
                2 * n,
                (0..n).map(|x| Perm::disjoint_sum(&[&lam[x], &rho_inv[x]])).collect(),
            )?,
            lambda_lambda_hat: group(
                "lambda_lambda_hat",
                2 * n,
                (0..n).map(|x| Perm::disjoint_sum(&[&lam[x], &lam_hat[x]])).collect(),
            )?,
            general: group(
                "general",
                4 * n,
                (0..n)
                    .map(|x| Perm::disjoint_sum(&[&lam[x], &rho_inv[x], &lam_hat[x], &rho_hat_inv[x]]))
                    .collect(),
            )?,
            sigma: GroupSummary::of(&self.sigma_group(cap)?),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    /// Braid relation on X³ evaluated directly, independent of the λ/ρ conditions.
    fn braid_holds(lam: &[Vec<usize>], rho: &[Vec<usize>]) -> bool {
        let n = lam.len();
        let r = |x: usize, y: usize| (lam[x][y], rho[y][x]);
        for x in 0..n {
            for y in 0..n {
                for z in 0..n {
                    let (a, b) = r(x, y);
                    let (b, c) = r(b, z);
                    let (a, b) = r(a, b);
                    let lhs = (a, b, c);
                    let (b2, c2) = r(y, z);
                    let (a2, b2) = r(x, b2);
                    let (b2, c2) = r(b2, c2);
                    if lhs != (a2, b2, c2) {
                        return false;
                    }
                }
            }
        }
        true
    }

    #[test]
    fn trivial_and_fixture_solutions_validate() {
        assert!(Solution::new(Solution::trivial(3).lam.clone(), Solution::trivial(3).rho.clone()).is_ok());
        for s in fixtures::all_solutions() {
            assert!(braid_holds(&s.lam, &s.rho), "{:?}", s.name);
        }
    }

    #[test]
    fn constant_row_is_degenerate() {
        let lam = vec![vec![0, 0], vec![0, 1]];
        let rho = vec![vec![0, 1], vec![0, 1]];
        assert_eq!(
            Solution::new(lam, rho).unwrap_err(),
            SolutionError::NonDegeneracyFailure { table: "lambda".into(), row: 0 }
        );
    }

    #[test]
    fn conditions_match_braid_relation_on_small_tables() {
        // Every non-degenerate table pair on two points, plus a sample on three.
        let perms2 = [vec![0, 1], vec![1, 0]];
        for a in 0..16usize {
            let lam: Vec<Vec<usize>> = (0..2).map(|x| perms2[(a >> x) & 1].clone()).collect();
            let rho: Vec<Vec<usize>> = (0..2).map(|x| perms2[(a >> (2 + x)) & 1].clone()).collect();
            let ok = Solution::new(lam.clone(), rho.clone()).is_ok();
            let bij = {
                let mut seen = std::collections::HashSet::new();
                (0..2).all(|x| (0..2).all(|y| seen.insert((lam[x][y], rho[y][x]))))
            };
            assert_eq!(ok, bij && braid_holds(&lam, &rho));
        }
    }

    #[test]
    fn z3_inverse_and_stats() {
        let s = fixtures::z3();
        let h = s.invert();
        for x in 0..3 {
            for y in 0..3 {
                let (u, v) = s.r(x, y);
                assert_eq!((h.lam_hat[u][v], h.rho_hat[v][u]), (x, y));
            }
        }
        // r(0,1) = (2, 2), r(2, 2) = (1, 0): r²(0,1) ≠ (0,1).
        assert_eq!(s.r(0, 1), (2, 2));
        assert_eq!(s.r(2, 2), (1, 0));
        assert!(!s.stats().involutive);
        assert!(s.inverse_solution().is_ok());
    }

    #[test]
    fn involutive_inverse_equals_tables() {
        let s = Solution::trivial(2);
        let st = s.stats();
        assert_eq!((st.involutive, st.square_free, st.r_order), (true, true, 2));
        let h = s.invert();
        assert_eq!(h.lam_hat, s.lam);
        assert_eq!(h.rho_hat, s.rho);
    }

    #[test]
    fn mpl2_stats_and_derived() {
        let s = fixtures::mpl2();
        let st = s.stats();
        // r(x, x) = (σ_x(x), x) and every σ_x fixes x here, so the solution is square-free.
        assert!(st.square_free);
        assert_eq!(st.r_order % 2, 0);
        let left = s.derived(Side::Left).unwrap();
        for y in 0..4 {
            for x in 0..4 {
                assert_eq!(left.rho(y, x), s.lam(y, x));
            }
        }
        assert_eq!(s.derived(Side::Right).unwrap().lam, s.lam);
    }

    #[test]
    fn derived_of_involutive_is_trivial() {
        let s = Solution::new(
            vec![vec![1, 0], vec![1, 0]],
            vec![vec![1, 0], vec![1, 0]],
        )
        .unwrap();
        assert!(s.stats().involutive);
        assert_eq!(s.derived(Side::Left).unwrap(), Solution::trivial(2));
    }

    #[test]
    fn z3_derived_tables() {
        // σ_y(x) = λ_y(ρ_{λ_x⁻¹(y)}(x)) = −(x + y) mod 3.
        let left = fixtures::z3().derived(Side::Left).unwrap();
        for y in 0..3 {
            for x in 0..3 {
                assert_eq!(left.rho(y, x), (6 - x - y) % 3);
            }
        }
    }

    #[test]
    fn lyubashenko_construction() {
        assert_eq!(Solution::lyubashenko(&Perm::identity(3), &Perm::identity(3)).unwrap(), Solution::trivial(3));
        let s = Solution::lyubashenko(&Perm::from_cycles(4, &[&[0, 1]]), &Perm::from_cycles(4, &[&[2, 3]])).unwrap();
        assert_eq!(s.lam, fixtures::lyubashenko().lam);
        assert!(matches!(
            Solution::lyubashenko(&Perm::from_cycles(3, &[&[0, 1]]), &Perm::from_cycles(3, &[&[0, 2]])),
            Err(SolutionError::NonCommuting { .. })
        ));
    }

    #[test]
    fn group_reports() {
        let t = Solution::trivial(3).perm_group_report(1000).unwrap();
        assert_eq!(
            [t.lambda.order, t.rho.order, t.lambda_rho.order, t.lambda_lambda_hat.order, t.general.order, t.sigma.order],
            [1; 6]
        );
        let l = fixtures::lyubashenko().perm_group_report(1000).unwrap();
        assert_eq!((l.lambda.order, l.rho.order), (2, 2));
        for s in fixtures::all_solutions() {
            let g = s.perm_group_report(1_000_000).unwrap();
            assert_eq!(g.general.order, g.lambda_rho.order, "{:?}", s.name);
            assert_eq!(g.general.order, g.lambda_lambda_hat.order, "{:?}", s.name);
        }
    }

    #[test]
    fn permutation_solution_group_is_cyclic() {
        for n in 2..6 {
            let g = fixtures::perm(n).perm_group_report(1000).unwrap();
            assert_eq!(g.lambda_rho.order, n);
        }
    }
}
